//! Newton polygon of a coefficient vector and the regularity criterion.

use serde::Serialize;

use crate::vector::CoefficientVector;

/// The strictly convex lower hull of the points `(i, a_i)`, `a_i` finite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    vertices: Vec<(i64, i64)>,
}

impl NewtonPolygon {
    pub fn vertices(&self) -> &[(i64, i64)] {
        &self.vertices
    }

    pub fn bounded_edges(&self) -> Vec<((i64, i64), (i64, i64))> {
        self.vertices.windows(2).map(|w| (w[0], w[1])).collect()
    }

    pub fn is_vertex(&self, point: (i64, i64)) -> bool {
        self.vertices.binary_search(&point).is_ok()
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Lower hull by the monotone chain; collinear points are dropped.
pub fn newton_polygon(a: &CoefficientVector) -> NewtonPolygon {
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for p in a.points() {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    NewtonPolygon { vertices: hull }
}

/// Every finite point is a hull vertex and the finite indices form an
/// arithmetic progression.
pub fn is_regular(a: &CoefficientVector) -> bool {
    let poly = newton_polygon(a);
    let all_vertices = poly.vertices.len() == a.support().len();
    let support = a.support();
    let step = support[1] - support[0];
    let progression = support.windows(2).all(|w| w[1] - w[0] == step);
    all_vertices && progression
}

pub fn single_bounded_edge(a: &CoefficientVector) -> bool {
    newton_polygon(a).vertices.len() == 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> CoefficientVector {
        CoefficientVector::parse(s).unwrap()
    }

    #[test]
    fn hull_examples() {
        assert_eq!(newton_polygon(&v("0,1,0")).vertices(), &[(0, 0), (2, 0)]);
        assert_eq!(newton_polygon(&v("0,0,0")).vertices(), &[(0, 0), (2, 0)]);
        assert_eq!(newton_polygon(&v("0,inf,0")).vertices(), &[(0, 0), (2, 0)]);
        assert_eq!(
            newton_polygon(&v("2,0,2")).vertices(),
            &[(0, 2), (1, 0), (2, 2)]
        );
        assert_eq!(newton_polygon(&v("2,0,2")).bounded_edges().len(), 2);
    }

    #[test]
    fn regularity_examples() {
        assert!(is_regular(&v("0,1")));
        assert!(!is_regular(&v("0,0,0")));
        assert!(is_regular(&v("0,inf,0")));
        assert!(is_regular(&v("2,0,2")));
        assert!(!is_regular(&v("0,inf,0,0")));
        assert!(!is_regular(&v("0,1,0")));
    }

    #[test]
    fn single_edge_examples() {
        assert!(single_bounded_edge(&v("0,0,0")));
        assert!(single_bounded_edge(&v("0,1,0")));
        assert!(!single_bounded_edge(&v("2,0,2")));
    }
}
