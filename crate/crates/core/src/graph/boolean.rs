//! The construction for tropical boolean vectors: vertices are the weak
//! orders on the `n` suffix coordinates.

use std::collections::BTreeMap;
use std::fmt;

use super::general::weak_order_levels;
use super::{BuildStats, CaseTag, Construction, Descriptor, Edge, Forced, RecurrenceGraph};
use crate::diffcon::ConstraintSystem;
use crate::error::{Error, Result};
use crate::vector::CoefficientVector;

/// A total preorder given by dense levels: `y_i < y_j` iff
/// `level[i] < level[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeakOrder {
    levels: Vec<u32>,
}

impl WeakOrder {
    /// Compresses arbitrary ranks to dense levels.
    pub fn from_ranks<T: Ord + Copy>(ranks: &[T]) -> Self {
        let mut sorted: Vec<T> = ranks.to_vec();
        sorted.sort();
        sorted.dedup();
        let levels = ranks
            .iter()
            .map(|r| sorted.binary_search(r).unwrap() as u32)
            .collect();
        WeakOrder { levels }
    }

    pub fn all(n: usize) -> Vec<WeakOrder> {
        let mut out: Vec<WeakOrder> = weak_order_levels(n)
            .into_iter()
            .map(|levels| WeakOrder { levels })
            .collect();
        out.sort();
        out
    }

    pub fn level_of(&self) -> &[u32] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> usize {
        self.levels.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    pub fn system(&self) -> ConstraintSystem {
        let n = self.levels.len();
        let mut sys = ConstraintSystem::new(n);
        for i in 0..n {
            for j in i + 1..n {
                match self.levels[i].cmp(&self.levels[j]) {
                    std::cmp::Ordering::Equal => sys.equal(i, j, 0),
                    std::cmp::Ordering::Less => sys.lt(i, j, 0),
                    std::cmp::Ordering::Greater => sys.lt(j, i, 0),
                }
            }
        }
        sys
    }
}

impl fmt::Display for WeakOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in 0..self.levels() as u32 {
            if l > 0 {
                f.write_str("<")?;
            }
            let block: Vec<String> = (0..self.levels.len())
                .filter(|&i| self.levels[i] == l)
                .map(|i| format!("y{}", i + 1))
                .collect();
            f.write_str(&block.join("="))?;
        }
        Ok(())
    }
}

pub(crate) fn build(a: &CoefficientVector) -> Result<RecurrenceGraph> {
    if !a.is_boolean() {
        return Err(Error::Unsupported(format!("{a} is not a tropical boolean vector")));
    }
    let n = a.degree();
    let in_f = |i: usize| a.finite(i).is_some();
    let vertices = WeakOrder::all(n);
    let index: BTreeMap<&WeakOrder, usize> = vertices.iter().enumerate().map(|(i, w)| (w, i)).collect();

    let mut found: BTreeMap<(usize, usize), (CaseTag, Option<Forced>)> = BTreeMap::new();
    for lev in weak_order_levels(n + 1) {
        let window_min = (0..=n).filter(|&i| in_f(i)).map(|i| lev[i]).min().unwrap();
        let hits = (0..=n).filter(|&i| in_f(i) && lev[i] == window_min).count();
        if hits < 2 {
            continue;
        }
        let v = index[&WeakOrder::from_ranks(&lev[..n])];
        let w = index[&WeakOrder::from_ranks(&lev[1..])];
        let prefix_min = (0..n).filter(|&i| in_f(i)).map(|i| lev[i]).min().unwrap();
        let s: Vec<usize> = (0..n).filter(|&i| in_f(i) && lev[i] == prefix_min).collect();
        let x = lev[n];
        let (case, forced) = if s == [0] {
            (CaseTag::IV, Some(Forced { pos: 0, offset: 0 }))
        } else if (1..n).any(|r| lev[r] == x) {
            (CaseTag::I, None)
        } else if (1..n).all(|r| lev[r] < x) {
            (CaseTag::II, None)
        } else {
            (CaseTag::III, None)
        };
        if let Some(prev) = found.insert((v, w), (case, forced)) {
            assert_eq!(prev, (case, forced), "edge {v}->{w} labelled twice");
        }
    }
    let edges = found
        .into_iter()
        .map(|((from, to), (case, forced))| Edge {
            from,
            to,
            label: case.into(),
            forced,
        })
        .collect();
    let stats = BuildStats {
        initial_vertices: vertices.len(),
        out_of_range: 0,
    };
    let count = vertices.len();
    Ok(RecurrenceGraph::assemble(
        a.clone(),
        Construction::Boolean,
        vertices.into_iter().map(Descriptor::Boolean).collect(),
        vec![true; count],
        edges,
        stats,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compresses_ranks() {
        assert_eq!(WeakOrder::from_ranks(&[5, 2, 5, 9]).level_of(), &[1, 0, 1, 2]);
        assert_eq!(WeakOrder::from_ranks(&[1, 0, 1]).to_string(), "y2<y1=y3");
    }

    #[test]
    fn two_coordinates() {
        let g = build(&CoefficientVector::parse("0,inf,0").unwrap()).unwrap();
        assert_eq!(g.vertex_count(), 3);
    }

    #[test]
    fn rejects_non_boolean() {
        assert!(build(&CoefficientVector::parse("0,1,0").unwrap()).is_err());
    }
}
