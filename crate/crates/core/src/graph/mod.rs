//! The graph of tropical recurrent sequences.
//!
//! A vertex stands for a polyhedron `P_v ⊂ R^n` of possible suffixes
//! `(y_1, ..., y_n)` of a sequence; an edge `(v, w)` says how the next value
//! may be appended so that the shifted suffix lands in `P_w`. Rigid edges
//! force the next value, augmenting edges leave it free in an open interval
//! or ray. Following a path of length `k` therefore yields a polyhedron of
//! sequences of length `n + k` whose dimension is the number of classes of
//! the start vertex plus the number of augmenting edges.

mod boolean;
mod export;
mod general;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::diffcon::ConstraintSystem;
use crate::error::{Error, Result};
use crate::sequence::{satisfies_slice, FiniteSequence, Rat};
use crate::vector::CoefficientVector;

pub use boolean::WeakOrder;
pub use export::{to_dot, to_json};
pub use general::{GeneralVertex, Place};

/// Default cap on the number of vertices a build may create.
pub const DEFAULT_MAX_VERTICES: usize = 500_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Rigid,
    Augmenting,
}

/// Which rule produced an edge. The first four belong to the general
/// construction, the roman numerals to the boolean one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseTag {
    /// The window minimum over the suffix is attained once: the next value
    /// is forced.
    #[serde(rename = "SINGLE")]
    Single,
    /// Minimum attained at least twice, next coordinate unbounded.
    #[serde(rename = "UNBOUNDED")]
    Unbounded,
    /// Minimum attained at least twice, next coordinate at an integer
    /// offset from a bounded one.
    #[serde(rename = "BOUNDED_EQ")]
    BoundedEq,
    /// Minimum attained at least twice, next coordinate strictly between
    /// two consecutive integer shifts of bounded ones.
    #[serde(rename = "BOUNDED_BAND")]
    BoundedBand,
    /// Boolean: next value equals an existing one.
    #[serde(rename = "I")]
    I,
    /// Boolean: next value above every existing one.
    #[serde(rename = "II")]
    II,
    /// Boolean: next value strictly between two consecutive levels.
    #[serde(rename = "III")]
    III,
    /// Boolean: the minimum sits only at the dropped coordinate, so the next
    /// value must repeat it.
    #[serde(rename = "IV")]
    IV,
}

impl CaseTag {
    pub fn kind(self) -> EdgeKind {
        match self {
            CaseTag::Single | CaseTag::BoundedEq | CaseTag::I | CaseTag::IV => EdgeKind::Rigid,
            CaseTag::Unbounded | CaseTag::BoundedBand | CaseTag::II | CaseTag::III => {
                EdgeKind::Augmenting
            }
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::Single => "SINGLE",
            CaseTag::Unbounded => "UNBOUNDED",
            CaseTag::BoundedEq => "BOUNDED_EQ",
            CaseTag::BoundedBand => "BOUNDED_BAND",
            CaseTag::I => "I",
            CaseTag::II => "II",
            CaseTag::III => "III",
            CaseTag::IV => "IV",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct EdgeLabel {
    pub kind: EdgeKind,
    pub case: CaseTag,
}

impl From<CaseTag> for EdgeLabel {
    fn from(case: CaseTag) -> Self {
        EdgeLabel {
            kind: case.kind(),
            case,
        }
    }
}

/// An equality the appended value must meet on top of `P_w`:
/// `next = y_pos + offset`, with `pos` indexing the current suffix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Forced {
    pub pos: usize,
    pub offset: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: EdgeLabel,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forced: Option<Forced>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Descriptor {
    General(GeneralVertex),
    Boolean(WeakOrder),
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::General(v) => v.fmt(f),
            Descriptor::Boolean(w) => w.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    General,
    Boolean,
}

/// Build statistics worth reporting next to the graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BuildStats {
    pub initial_vertices: usize,
    /// Candidate targets rejected because an offset left its allowed range.
    pub out_of_range: usize,
}

#[derive(Debug, Clone)]
pub struct RecurrenceGraph {
    vector: CoefficientVector,
    construction: Construction,
    vertices: Vec<Descriptor>,
    systems: Vec<ConstraintSystem>,
    classes: Vec<usize>,
    initial: Vec<bool>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    stats: BuildStats,
}

/// The set of admissible next values along an edge for a fixed suffix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Admissible {
    Empty,
    Point(Rat),
    /// Open interval `(lo, hi)`.
    Interval(Rat, Rat),
    /// Open ray `(lo, ∞)`.
    Ray(Rat),
    /// Anything else (half-closed ends, downward rays, the whole line).
    Other {
        lower: Option<(Rat, bool)>,
        upper: Option<(Rat, bool)>,
    },
}

impl Admissible {
    pub fn contains(&self, x: Rat) -> bool {
        match self {
            Admissible::Empty => false,
            Admissible::Point(p) => x == *p,
            Admissible::Interval(lo, hi) => *lo < x && x < *hi,
            Admissible::Ray(lo) => *lo < x,
            Admissible::Other { lower, upper } => {
                lower.is_none_or(|(l, strict)| if strict { l < x } else { l <= x })
                    && upper.is_none_or(|(u, strict)| if strict { x < u } else { x <= u })
            }
        }
    }

    pub fn is_single_point(&self) -> bool {
        matches!(self, Admissible::Point(_))
    }

    pub fn has_positive_length(&self) -> bool {
        match self {
            Admissible::Interval(lo, hi) => lo < hi,
            Admissible::Ray(_) => true,
            Admissible::Other { lower, upper } => match (lower, upper) {
                (Some((l, _)), Some((u, _))) => l < u,
                _ => true,
            },
            _ => false,
        }
    }
}

impl RecurrenceGraph {
    fn assemble(
        vector: CoefficientVector,
        construction: Construction,
        vertices: Vec<Descriptor>,
        initial: Vec<bool>,
        raw_edges: Vec<Edge>,
        stats: BuildStats,
    ) -> Self {
        let n = vector.degree();
        let m = vector.working_m();
        let systems: Vec<ConstraintSystem> = vertices
            .iter()
            .map(|d| match d {
                Descriptor::General(g) => g.system(n, m),
                Descriptor::Boolean(w) => w.system(),
            })
            .collect();
        let classes: Vec<usize> = vertices
            .iter()
            .map(|d| match d {
                Descriptor::General(g) => g.classes(),
                Descriptor::Boolean(w) => w.levels(),
            })
            .collect();
        for (i, sys) in systems.iter().enumerate() {
            assert_eq!(
                sys.dimension().ok(),
                Some(classes[i]),
                "class count of vertex {} disagrees with its polyhedron",
                vertices[i]
            );
        }
        let mut out = vec![Vec::new(); vertices.len()];
        for (idx, e) in raw_edges.iter().enumerate() {
            out[e.from].push(idx);
        }
        RecurrenceGraph {
            vector,
            construction,
            vertices,
            systems,
            classes,
            initial,
            edges: raw_edges,
            out,
            stats,
        }
    }

    pub fn vector(&self) -> &CoefficientVector {
        &self.vector
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn degree(&self) -> usize {
        self.vector.degree()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Descriptor] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &Edge> {
        self.out[v].iter().map(move |&i| &self.edges[i])
    }

    /// `n(v)`: number of equality classes among the vertex coordinates.
    pub fn classes(&self, v: usize) -> usize {
        self.classes[v]
    }

    pub fn is_initial(&self, v: usize) -> bool {
        self.initial[v]
    }

    pub fn polyhedron(&self, v: usize) -> &ConstraintSystem {
        &self.systems[v]
    }

    pub fn stats(&self) -> &BuildStats {
        &self.stats
    }

    pub fn count_by_kind(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.label.kind == kind).count()
    }

    pub fn find_vertex(&self, d: &Descriptor) -> Option<usize> {
        self.vertices.iter().position(|x| x == d)
    }

    /// Vertices whose polyhedron contains `point`.
    pub fn vertices_containing(&self, point: &[Rat]) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.systems[v].contains(point))
            .collect()
    }

    /// The system on `n + 1` window coordinates describing one step along
    /// `edge`: suffix in `P_v`, shifted suffix in `P_w`, plus a forced
    /// equality when the edge carries one.
    pub fn step_system(&self, edge: &Edge) -> ConstraintSystem {
        let n = self.degree();
        let mut sys = ConstraintSystem::new(n + 1);
        sys.extend_shifted(&self.systems[edge.from], 0);
        sys.extend_shifted(&self.systems[edge.to], 1);
        if let Some(f) = edge.forced {
            sys.equal(n, f.pos, f.offset);
        }
        sys
    }

    /// Exact set of next values `x` such that `(point, x)` follows `edge`.
    pub fn admissible(&self, edge: &Edge, point: &[Rat]) -> Result<Admissible> {
        let n = self.degree();
        if point.len() != n || !self.systems[edge.from].contains(point) {
            return Err(Error::NotInPolyhedron);
        }
        let sys = self.step_system(edge);
        let mut lower: Option<(Rat, bool)> = None;
        let mut upper: Option<(Rat, bool)> = None;
        let tighten_lower = |v: Rat, strict: bool, lower: &mut Option<(Rat, bool)>| {
            if lower.is_none_or(|(l, s)| v > l || (v == l && strict && !s)) {
                *lower = Some((v, strict));
            }
        };
        let tighten_upper = |v: Rat, strict: bool, upper: &mut Option<(Rat, bool)>| {
            if upper.is_none_or(|(u, s)| v < u || (v == u && strict && !s)) {
                *upper = Some((v, strict));
            }
        };
        use crate::diffcon::Relation;
        for c in sys.constraints() {
            match (c.u == n, c.v == n) {
                (false, false) => {
                    if !c.holds(&[point, &[Rat::from_integer(0)]].concat()) {
                        return Ok(Admissible::Empty);
                    }
                }
                // x - y_v  kind  b
                (true, false) => {
                    let base = point[c.v] + c.bound;
                    match c.kind {
                        Relation::Eq => {
                            tighten_upper(base, false, &mut upper);
                            tighten_lower(base, false, &mut lower);
                        }
                        Relation::Le => tighten_upper(base, false, &mut upper),
                        Relation::Lt => tighten_upper(base, true, &mut upper),
                    }
                }
                // y_u - x  kind  b   =>  x  (reverse)  y_u - b
                (false, true) => {
                    let base = point[c.u] - c.bound;
                    match c.kind {
                        Relation::Eq => {
                            tighten_upper(base, false, &mut upper);
                            tighten_lower(base, false, &mut lower);
                        }
                        Relation::Le => tighten_lower(base, false, &mut lower),
                        Relation::Lt => tighten_lower(base, true, &mut lower),
                    }
                }
                (true, true) => unreachable!(),
            }
        }
        Ok(match (lower, upper) {
            (Some((l, ls)), Some((u, us))) if l > u || (l == u && (ls || us)) => Admissible::Empty,
            (Some((l, false)), Some((u, false))) if l == u => Admissible::Point(l),
            (Some((l, true)), Some((u, true))) => Admissible::Interval(l, u),
            (Some((l, true)), None) => Admissible::Ray(l),
            (lower, upper) => Admissible::Other { lower, upper },
        })
    }

    /// Outgoing edges of `v` accepting `x` as the next value after `point`.
    pub fn matching_edges(&self, v: usize, point: &[Rat], x: Rat) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for &e in &self.out[v] {
            if self.admissible(&self.edges[e], point)?.contains(x) {
                out.push(e);
            }
        }
        Ok(out)
    }

    /// The unique edge continuing `point` by `x`, with its admissible set.
    pub fn step(&self, v: usize, point: &[Rat], x: Rat) -> Result<(usize, Admissible)> {
        let mut full = point.to_vec();
        full.push(x);
        if !satisfies_slice(&self.vector, &full) {
            return Err(Error::NotSatisfying);
        }
        let matches = self.matching_edges(v, point, x)?;
        match matches.as_slice() {
            [e] => Ok((*e, self.admissible(&self.edges[*e], point)?)),
            _ => Err(Error::InvalidPath(format!(
                "{} edges of vertex {v} accept the continuation",
                matches.len()
            ))),
        }
    }

    /// Resolves a vertex path into its edges.
    pub fn path_edges(&self, path: &[usize]) -> Result<Vec<usize>> {
        if path.is_empty() {
            return Err(Error::InvalidPath("empty path".into()));
        }
        if let Some(&bad) = path.iter().find(|&&v| v >= self.vertices.len()) {
            return Err(Error::InvalidPath(format!("no vertex {bad}")));
        }
        path.windows(2)
            .map(|w| {
                self.out[w[0]]
                    .iter()
                    .copied()
                    .find(|&e| self.edges[e].to == w[1])
                    .ok_or_else(|| Error::InvalidPath(format!("no edge {} -> {}", w[0], w[1])))
            })
            .collect()
    }

    /// The polyhedron `Q_T` of sequences of length `n + k` yielded along a
    /// path of `k` edges given by its vertices.
    pub fn walk(&self, path: &[usize]) -> Result<ConstraintSystem> {
        let edges = self.path_edges(path)?;
        Ok(self.walk_edges(path[0], &edges))
    }

    pub(crate) fn walk_edges(&self, start: usize, edges: &[usize]) -> ConstraintSystem {
        let n = self.degree();
        let mut sys = ConstraintSystem::new(n + edges.len());
        sys.extend_shifted(&self.systems[start], 0);
        for (i, &e) in edges.iter().enumerate() {
            let edge = &self.edges[e];
            sys.extend_shifted(&self.systems[edge.to], i + 1);
            if let Some(f) = edge.forced {
                sys.equal(i + n, i + f.pos, f.offset);
            }
        }
        sys
    }

    /// Number of augmenting edges on a vertex path.
    pub fn augmenting_count(&self, path: &[usize]) -> Result<usize> {
        Ok(self
            .path_edges(path)?
            .iter()
            .filter(|&&e| self.edges[e].label.kind == EdgeKind::Augmenting)
            .count())
    }

    /// Follows a satisfying sequence through the graph from every vertex
    /// containing its first `n` values; returns the vertex paths found.
    pub fn trace(&self, y: &FiniteSequence) -> Result<Vec<Vec<usize>>> {
        let n = self.degree();
        let ys = y.values();
        if ys.len() < n {
            return Err(Error::SequenceTooShort {
                len: ys.len(),
                need: n,
            });
        }
        let mut paths = Vec::new();
        'start: for v0 in self.vertices_containing(&ys[..n]) {
            let mut path = vec![v0];
            for k in 0..ys.len() - n {
                let v = *path.last().unwrap();
                let matches = self.matching_edges(v, &ys[k..k + n], ys[k + n])?;
                match matches.as_slice() {
                    [e] => path.push(self.edges[*e].to),
                    _ => continue 'start,
                }
            }
            paths.push(path);
        }
        Ok(paths)
    }
}

/// Picks the construction for a vector: the boolean graph for tropical
/// boolean vectors with an infinite entry, the general graph for all-finite
/// vectors.
pub fn build(a: &CoefficientVector) -> Result<RecurrenceGraph> {
    build_with_limit(a, DEFAULT_MAX_VERTICES)
}

pub fn build_with_limit(a: &CoefficientVector, max_vertices: usize) -> Result<RecurrenceGraph> {
    if a.is_all_finite() {
        build_general_with_limit(a, max_vertices)
    } else if a.is_boolean() {
        build_boolean(a)
    } else {
        Err(Error::Unsupported(format!(
            "{a} mixes finite and infinite entries and is not tropical boolean"
        )))
    }
}

pub fn build_general(a: &CoefficientVector) -> Result<RecurrenceGraph> {
    build_general_with_limit(a, DEFAULT_MAX_VERTICES)
}

pub fn build_general_with_limit(a: &CoefficientVector, max_vertices: usize) -> Result<RecurrenceGraph> {
    general::build(a, max_vertices)
}

pub fn build_boolean(a: &CoefficientVector) -> Result<RecurrenceGraph> {
    boolean::build(a)
}

/// Dedup table mapping descriptors to dense indices in insertion order.
#[derive(Default)]
pub(crate) struct Interner<T: std::hash::Hash + Eq + Clone> {
    index: HashMap<T, usize>,
    items: Vec<T>,
}

impl<T: std::hash::Hash + Eq + Clone> Interner<T> {
    pub(crate) fn new() -> Self {
        Interner {
            index: HashMap::new(),
            items: Vec::new(),
        }
    }

    /// Returns the index and whether the item is new.
    pub(crate) fn intern(&mut self, item: T) -> (usize, bool) {
        if let Some(&i) = self.index.get(&item) {
            return (i, false);
        }
        let i = self.items.len();
        self.index.insert(item.clone(), i);
        self.items.push(item);
        (i, true)
    }

    pub(crate) fn len(&self) -> usize {
        self.items.len()
    }

    pub(crate) fn get(&self, i: usize) -> &T {
        &self.items[i]
    }

    pub(crate) fn into_items(self) -> Vec<T> {
        self.items
    }
}
