//! Exact feasibility, dimension and witnesses for systems of difference
//! constraints `y_u - y_v {=, <=, <} c`.
//!
//! Strict inequalities are carried as a flag on each bound: a bound is the
//! pair `(c, strict)`, bounds add componentwise (`strict` is sticky) and are
//! ordered by `c` first with `(c, <)` tighter than `(c, <=)`. A system is
//! infeasible iff its constraint graph has a cycle of weight below `(0, <=)`,
//! which the difference-bound matrix closure detects on its diagonal.
//!
//! Coordinates are 0-based throughout.

use std::cmp::Ordering;
use std::ops::{Add, Neg};

use num_integer::Integer;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::{FiniteSequence, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
}

/// `y_u - y_v  kind  bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DifferenceConstraint {
    pub u: usize,
    pub v: usize,
    pub kind: Relation,
    #[serde(serialize_with = "ser_rat")]
    pub bound: Rat,
}

fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl DifferenceConstraint {
    pub fn holds(&self, y: &[Rat]) -> bool {
        let d = y[self.u] - y[self.v];
        match self.kind {
            Relation::Eq => d == self.bound,
            Relation::Le => d <= self.bound,
            Relation::Lt => d < self.bound,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConstraintSystem {
    dim: usize,
    constraints: Vec<DifferenceConstraint>,
}

impl ConstraintSystem {
    pub fn new(dim: usize) -> Self {
        ConstraintSystem {
            dim,
            constraints: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[DifferenceConstraint] {
        &self.constraints
    }

    pub fn push(&mut self, c: DifferenceConstraint) {
        assert!(
            c.u < self.dim && c.v < self.dim && c.u != c.v,
            "constraint {c:?} out of range for dimension {}",
            self.dim
        );
        self.constraints.push(c);
    }

    pub fn add(&mut self, u: usize, v: usize, kind: Relation, bound: impl Into<Rat>) {
        self.push(DifferenceConstraint {
            u,
            v,
            kind,
            bound: bound.into(),
        });
    }

    /// `y_u - y_v = c`
    pub fn equal(&mut self, u: usize, v: usize, c: impl Into<Rat>) {
        self.add(u, v, Relation::Eq, c);
    }

    /// `y_u - y_v <= c`
    pub fn le(&mut self, u: usize, v: usize, c: impl Into<Rat>) {
        self.add(u, v, Relation::Le, c);
    }

    /// `y_u - y_v < c`
    pub fn lt(&mut self, u: usize, v: usize, c: impl Into<Rat>) {
        self.add(u, v, Relation::Lt, c);
    }

    /// Copies every constraint of `other` with indices shifted by `offset`.
    pub fn extend_shifted(&mut self, other: &ConstraintSystem, offset: usize) {
        for c in &other.constraints {
            self.push(DifferenceConstraint {
                u: c.u + offset,
                v: c.v + offset,
                ..*c
            });
        }
    }

    pub fn contains(&self, y: &[Rat]) -> bool {
        y.len() == self.dim && self.constraints.iter().all(|c| c.holds(y))
    }

    fn scale(&self) -> i64 {
        self.constraints
            .iter()
            .fold(1i64, |acc, c| acc.lcm(c.bound.denom()))
    }

    /// Closed difference-bound matrix with integer entries scaled by the
    /// common denominator of the bounds. `None` when infeasible.
    pub(crate) fn closure(&self) -> Option<Dbm<i64>> {
        let scale = self.scale();
        let mut dbm = Dbm::new(self.dim);
        for c in &self.constraints {
            let b = (c.bound * Rat::from_integer(scale)).to_integer();
            dbm.constrain_raw(c.u, c.v, c.kind, b);
        }
        dbm.close()
    }

    pub fn feasible(&self) -> bool {
        self.closure().is_some()
    }

    /// Dimension of the (relatively open) solution set: the number of
    /// classes of coordinates tied by explicit or implied equalities.
    pub fn dimension(&self) -> Result<usize> {
        self.closure().map(|d| d.dimension()).ok_or(Error::Infeasible)
    }

    /// One exact solution. Strict constraints hold with positive slack.
    ///
    /// Perturbs every strict bound by `1/(L(s+1))` (`L` the common
    /// denominator); a cycle of at most `s` edges with nonnegative
    /// lexicographic weight keeps a nonnegative perturbed weight, so the
    /// shortest-path potentials of the perturbed graph solve the system.
    pub fn witness(&self) -> Result<FiniteSequence> {
        if !self.feasible() {
            return Err(Error::Infeasible);
        }
        let s = self.dim;
        let scale = self.scale();
        let factor = (s as i64) + 1;
        let mut dist: Vec<Option<i64>> = vec![None; s * s];
        for i in 0..s {
            dist[i * s + i] = Some(0);
        }
        let relax = |from: usize, to: usize, w: i64, dist: &mut Vec<Option<i64>>| {
            let cell = &mut dist[from * s + to];
            if cell.is_none_or(|x| w < x) {
                *cell = Some(w);
            }
        };
        for c in &self.constraints {
            let b = (c.bound * Rat::from_integer(scale)).to_integer() * factor;
            match c.kind {
                Relation::Eq => {
                    relax(c.v, c.u, b, &mut dist);
                    relax(c.u, c.v, -b, &mut dist);
                }
                Relation::Le => relax(c.v, c.u, b, &mut dist),
                Relation::Lt => relax(c.v, c.u, b - 1, &mut dist),
            }
        }
        for k in 0..s {
            for i in 0..s {
                let Some(ik) = dist[i * s + k] else { continue };
                for j in 0..s {
                    if let Some(kj) = dist[k * s + j] {
                        let cand = ik + kj;
                        let cell = &mut dist[i * s + j];
                        if cell.is_none_or(|x| cand < x) {
                            *cell = Some(cand);
                        }
                    }
                }
            }
        }
        let denom = scale * factor;
        let values: Vec<Rat> = (0..s)
            .map(|u| {
                let p = (0..s).filter_map(|v| dist[v * s + u]).min().unwrap_or(0).min(0);
                Rat::new(p, denom)
            })
            .collect();
        assert!(
            self.contains(&values),
            "witness failed re-validation: {values:?}"
        );
        Ok(FiniteSequence::new(values))
    }

    /// A random solution on a dyadic grid, drawn coordinate by coordinate
    /// from the exact interval left by the already fixed coordinates.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<FiniteSequence> {
        let s = self.dim;
        // node `s` is a reference pinned at zero
        let mut dbm: Dbm<Rat> = Dbm::new(s + 1);
        for c in &self.constraints {
            dbm.constrain_raw(c.u, c.v, c.kind, c.bound);
        }
        let mut dbm = dbm.close().ok_or(Error::Infeasible)?;
        let mut values = Vec::with_capacity(s);
        for k in 0..s {
            // x_k - x_ref <= upper ; x_ref - x_k <= lower'
            let upper = dbm.get(s, k);
            let lower = dbm.get(k, s).map(|b| Bound {
                value: -b.value,
                strict: b.strict,
            });
            let value = pick_in_interval(rng, lower, upper);
            dbm = dbm
                .tighten(s, k, Bound::le(value))
                .and_then(|d| d.tighten(k, s, Bound::le(-value)))
                .expect("closed matrix admits every value of its projected interval");
            values.push(value);
        }
        debug_assert!(self.contains(&values));
        Ok(FiniteSequence::new(values))
    }
}

fn pick_in_interval<R: Rng + ?Sized>(
    rng: &mut R,
    lower: Option<Bound<Rat>>,
    upper: Option<Bound<Rat>>,
) -> Rat {
    let step = |k: i64| Rat::new(k, 4);
    match (lower, upper) {
        (None, None) => step(rng.gen_range(-32..=32)),
        (Some(lo), None) => lo.value + step(rng.gen_range(1..=24)),
        (None, Some(hi)) => hi.value - step(rng.gen_range(1..=24)),
        (Some(lo), Some(hi)) => {
            if lo.value == hi.value {
                return lo.value;
            }
            let mut grid = 8i64;
            loop {
                let g = Rat::from_integer(grid);
                let first = (lo.value * g).floor().to_integer() + 1;
                let last = (hi.value * g).ceil().to_integer() - 1;
                if first <= last {
                    let k = rng.gen_range(first..=last.min(first + 64));
                    return Rat::new(k, grid);
                }
                grid *= 2;
            }
        }
    }
}

/// A bound `x_j - x_i (<|<=) value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bound<T> {
    pub value: T,
    pub strict: bool,
}

impl<T> Bound<T> {
    pub fn le(value: T) -> Self {
        Bound {
            value,
            strict: false,
        }
    }

    pub fn lt(value: T) -> Self {
        Bound {
            value,
            strict: true,
        }
    }
}

impl<T: Ord> PartialOrd for Bound<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Ord> Ord for Bound<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .cmp(&other.value)
            .then_with(|| other.strict.cmp(&self.strict))
    }
}

impl<T: Add<Output = T>> Add for Bound<T> {
    type Output = Bound<T>;

    fn add(self, rhs: Self) -> Self {
        Bound {
            value: self.value + rhs.value,
            strict: self.strict || rhs.strict,
        }
    }
}

pub(crate) trait Weight: Copy + Ord + Add<Output = Self> + Neg<Output = Self> + Zero {}

impl<T: Copy + Ord + Add<Output = T> + Neg<Output = T> + Zero> Weight for T {}

/// Difference-bound matrix: `entry(i, j)` bounds `x_j - x_i`; `None` is `+∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Dbm<T> {
    n: usize,
    m: Vec<Option<Bound<T>>>,
}

impl<T: Weight> Dbm<T> {
    pub(crate) fn new(n: usize) -> Self {
        let mut m = vec![None; n * n];
        for i in 0..n {
            m[i * n + i] = Some(Bound::le(T::zero()));
        }
        Dbm { n, m }
    }

    pub(crate) fn get(&self, i: usize, j: usize) -> Option<Bound<T>> {
        self.m[i * self.n + j]
    }

    fn meet(&mut self, i: usize, j: usize, b: Bound<T>) {
        let cell = &mut self.m[i * self.n + j];
        if cell.is_none_or(|x| b < x) {
            *cell = Some(b);
        }
    }

    /// Records `x_u - x_v kind c` without closing.
    pub(crate) fn constrain_raw(&mut self, u: usize, v: usize, kind: Relation, c: T) {
        match kind {
            Relation::Eq => {
                self.meet(v, u, Bound::le(c));
                self.meet(u, v, Bound::le(-c));
            }
            Relation::Le => self.meet(v, u, Bound::le(c)),
            Relation::Lt => self.meet(v, u, Bound::lt(c)),
        }
    }

    /// Floyd-Warshall closure; `None` if a negative cycle shows up.
    pub(crate) fn close(mut self) -> Option<Self> {
        let n = self.n;
        for k in 0..n {
            for i in 0..n {
                let Some(ik) = self.m[i * n + k] else { continue };
                for j in 0..n {
                    if let Some(kj) = self.m[k * n + j] {
                        self.meet(i, j, ik + kj);
                    }
                }
            }
        }
        let zero = Bound::le(T::zero());
        (0..n)
            .all(|i| self.m[i * n + i].is_none_or(|d| d >= zero))
            .then_some(self)
    }

    /// Adds the edge `i -> j` (`x_j - x_i <= b`) to a closed matrix and
    /// re-closes it in `O(n^2)`; `None` if that makes it infeasible.
    pub(crate) fn tighten(mut self, i: usize, j: usize, b: Bound<T>) -> Option<Self> {
        if self.tighten_in_place(i, j, b) {
            Some(self)
        } else {
            None
        }
    }

    pub(crate) fn tighten_in_place(&mut self, i: usize, j: usize, b: Bound<T>) -> bool {
        let n = self.n;
        if let Some(back) = self.get(j, i) {
            if back + b < Bound::le(T::zero()) {
                return false;
            }
        }
        if self.get(i, j).is_some_and(|cur| cur <= b) {
            return true;
        }
        let into_i: Vec<Option<Bound<T>>> = (0..n).map(|p| self.get(p, i)).collect();
        let from_j: Vec<Option<Bound<T>>> = (0..n).map(|q| self.get(j, q)).collect();
        for p in 0..n {
            let Some(pi) = into_i[p] else { continue };
            let pij = pi + b;
            for q in 0..n {
                if let Some(jq) = from_j[q] {
                    self.meet(p, q, pij + jq);
                }
            }
        }
        true
    }

    /// Adds `x_u - x_v kind c` to a closed matrix, keeping it closed.
    pub(crate) fn add_constraint(&mut self, u: usize, v: usize, kind: Relation, c: T) -> bool {
        match kind {
            Relation::Eq => {
                self.tighten_in_place(v, u, Bound::le(c)) && self.tighten_in_place(u, v, Bound::le(-c))
            }
            Relation::Le => self.tighten_in_place(v, u, Bound::le(c)),
            Relation::Lt => self.tighten_in_place(v, u, Bound::lt(c)),
        }
    }

    /// Number of classes under explicit and implied equalities. Requires a
    /// closed, feasible matrix.
    pub(crate) fn dimension(&self) -> usize {
        let n = self.n;
        let zero = Bound::le(T::zero());
        let mut uf = UnionFind::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if let (Some(a), Some(b)) = (self.get(i, j), self.get(j, i)) {
                    if a + b == zero {
                        uf.union(i, j);
                    }
                }
            }
        }
        uf.components()
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    components: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
            components: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.rank[a] < self.rank[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        if self.rank[a] == self.rank[b] {
            self.rank[a] += 1;
        }
        self.components -= 1;
    }

    fn components(&self) -> usize {
        self.components
    }
}

/// Convenience for callers holding an integer bound.
pub fn rat(v: i64) -> Rat {
    Rat::from_integer(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn feasibility_examples() {
        let mut sys = ConstraintSystem::new(2);
        sys.lt(0, 1, 0);
        sys.lt(1, 0, 0);
        assert!(!sys.feasible());

        let mut sys = ConstraintSystem::new(2);
        sys.le(0, 1, -1);
        sys.le(1, 0, 0);
        assert!(!sys.feasible());

        let mut sys = ConstraintSystem::new(2);
        sys.equal(0, 1, 3);
        assert!(sys.feasible());
        let w = sys.witness().unwrap();
        assert_eq!(w.values()[0] - w.values()[1], rat(3));
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(ConstraintSystem::new(3).dimension(), Ok(3));

        let mut sys = ConstraintSystem::new(2);
        sys.equal(0, 1, 0);
        assert_eq!(sys.dimension(), Ok(1));

        // two opposite non-strict bounds force y1 - y2 = 1
        let mut sys = ConstraintSystem::new(3);
        sys.le(0, 1, 1);
        sys.le(1, 0, -1);
        sys.lt(1, 2, 0);
        assert_eq!(sys.dimension(), Ok(2));

        let mut bad = ConstraintSystem::new(2);
        bad.lt(0, 1, 0);
        bad.lt(1, 0, 0);
        assert_eq!(bad.dimension(), Err(Error::Infeasible));
        assert_eq!(bad.witness(), Err(Error::Infeasible));
    }

    #[test]
    fn strict_witness_has_slack() {
        let mut sys = ConstraintSystem::new(2);
        sys.lt(0, 1, 0);
        let w = sys.witness().unwrap();
        assert!(w.values()[0] < w.values()[1]);
    }

    #[test]
    fn rational_bounds() {
        let mut sys = ConstraintSystem::new(3);
        sys.lt(0, 1, Rat::new(1, 3));
        sys.lt(1, 2, Rat::new(-1, 6));
        sys.le(2, 0, Rat::new(-1, 6));
        // cycle weight 1/3 - 1/6 - 1/6 = 0 with strict edges
        assert!(!sys.feasible());
        let mut sys = ConstraintSystem::new(3);
        sys.lt(0, 1, Rat::new(1, 3));
        sys.le(1, 2, Rat::new(-1, 6));
        sys.le(2, 0, Rat::new(-1, 7));
        assert!(sys.feasible());
        assert!(sys.contains(sys.witness().unwrap().values()));
    }

    #[test]
    fn incremental_matches_batch() {
        let mut sys = ConstraintSystem::new(4);
        sys.le(0, 1, 2);
        sys.lt(1, 2, -1);
        sys.equal(2, 3, 1);
        let mut dbm = Dbm::<i64>::new(4);
        for c in sys.constraints() {
            assert!(dbm.add_constraint(c.u, c.v, c.kind, c.bound.to_integer()));
        }
        assert_eq!(Some(dbm), sys.closure());
    }

    #[test]
    fn sampling_stays_inside() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut sys = ConstraintSystem::new(4);
        sys.lt(0, 1, 1);
        sys.lt(1, 0, 0);
        sys.equal(2, 1, 2);
        sys.le(3, 2, 5);
        for _ in 0..100 {
            let p = sys.sample(&mut rng).unwrap();
            assert!(sys.contains(p.values()));
        }
    }
}
