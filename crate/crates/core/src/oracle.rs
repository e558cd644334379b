//! Brute-force computation of `D(s)` and `d(s)`.
//!
//! Every sequence of length `s` determines, for each window `j`, the exact
//! set `T_j` of support indices where the window minimum is attained. Fixing
//! all `T_j` cuts out a relatively open cell given by difference
//! constraints: equalities inside `T_j`, strict inequalities against the
//! rest of the support. Distinct patterns give disjoint cells and `D(s)` is
//! their union, so `d(s)` is the largest cell dimension.
//!
//! The search walks windows left to right, keeps a closed difference-bound
//! matrix for the partial pattern and abandons a prefix as soon as it turns
//! infeasible. When only the maximum is wanted, a prefix whose partial
//! dimension cannot beat the best cell found so far is also dropped: adding
//! constraints never increases dimension.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::diffcon::{ConstraintSystem, Dbm, Relation};
use crate::error::{Error, Result};
use crate::sequence::{FiniteSequence, Rat};
use crate::vector::CoefficientVector;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// For each window, the support indices where its minimum is attained.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AttainmentPattern {
    pub windows: Vec<Vec<usize>>,
}

impl AttainmentPattern {
    /// Reads the pattern of a sequence; `None` if some window has a unique
    /// minimum.
    pub fn of_sequence(a: &CoefficientVector, y: &[Rat]) -> Option<Self> {
        let n = a.degree();
        if y.len() <= n {
            return Some(AttainmentPattern { windows: vec![] });
        }
        let windows: Vec<Vec<usize>> = (0..y.len() - n)
            .map(|j| crate::sequence::window_minimum(a, y, j).1)
            .collect();
        windows
            .iter()
            .all(|t| t.len() >= 2)
            .then_some(AttainmentPattern { windows })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Cell {
    pub pattern: AttainmentPattern,
    #[serde(skip)]
    pub system: ConstraintSystem,
    pub dimension: usize,
    pub witness: FiniteSequence,
}

/// `(u, v, kind, bound)` meaning `y_u - y_v kind bound`.
type WindowConstraint = (usize, usize, Relation, i64);

struct Search<'a> {
    a: &'a CoefficientVector,
    s: usize,
    choices: Vec<Vec<usize>>,
    budget: u64,
    nodes: &'a AtomicU64,
}

impl<'a> Search<'a> {
    fn new(a: &'a CoefficientVector, s: usize, budget: u64, nodes: &'a AtomicU64) -> Self {
        let support = a.support();
        let f = support.len();
        let mut choices = Vec::new();
        for mask in 1u32..(1 << f) {
            if mask.count_ones() >= 2 {
                choices.push(
                    (0..f)
                        .filter(|b| mask & (1 << b) != 0)
                        .map(|b| support[b])
                        .collect(),
                );
            }
        }
        Search {
            a,
            s,
            choices,
            budget,
            nodes,
        }
    }

    fn windows(&self) -> usize {
        self.s - self.a.degree()
    }

    fn constraints(&self, start: usize, attained: &[usize]) -> Vec<WindowConstraint> {
        let a = self.a;
        let coef = |i: usize| a.finite(i).unwrap();
        let t0 = attained[0];
        let mut out = Vec::new();
        for &t in &attained[1..] {
            out.push((start + t, start + t0, Relation::Eq, coef(t0) - coef(t)));
        }
        for &i in a.support() {
            if !attained.contains(&i) {
                out.push((start + t0, start + i, Relation::Lt, coef(i) - coef(t0)));
            }
        }
        out
    }

    fn tick(&self) -> Result<()> {
        let seen = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if seen > self.budget {
            return Err(Error::BudgetExceeded {
                limit: self.budget,
                seen,
            });
        }
        Ok(())
    }

    fn extend(&self, dbm: &Dbm<i64>, start: usize, attained: &[usize]) -> Result<Option<Dbm<i64>>> {
        self.tick()?;
        let mut next = dbm.clone();
        for (u, v, kind, c) in self.constraints(start, attained) {
            if !next.add_constraint(u, v, kind, c) {
                return Ok(None);
            }
        }
        Ok(Some(next))
    }

    fn best_from(&self, dbm: &Dbm<i64>, start: usize, best: &AtomicUsize) -> Result<()> {
        if dbm.dimension() <= best.load(Ordering::Relaxed) {
            return Ok(());
        }
        if start == self.windows() {
            best.fetch_max(dbm.dimension(), Ordering::Relaxed);
            return Ok(());
        }
        for choice in &self.choices {
            if let Some(next) = self.extend(dbm, start, choice)? {
                self.best_from(&next, start + 1, best)?;
            }
        }
        Ok(())
    }

    fn cells_from(
        &self,
        dbm: &Dbm<i64>,
        prefix: &mut Vec<Vec<usize>>,
        out: &mut Vec<Cell>,
    ) -> Result<()> {
        let start = prefix.len();
        if start == self.windows() {
            let pattern = AttainmentPattern {
                windows: prefix.clone(),
            };
            let system = cell_system(self.a, self.s, &pattern);
            let witness = system.witness()?;
            out.push(Cell {
                pattern,
                dimension: dbm.dimension(),
                system,
                witness,
            });
            return Ok(());
        }
        for choice in &self.choices {
            if let Some(next) = self.extend(dbm, start, choice)? {
                prefix.push(choice.clone());
                self.cells_from(&next, prefix, out)?;
                prefix.pop();
            }
        }
        Ok(())
    }
}

/// The constraint system of the cell indexed by `pattern`.
pub fn cell_system(a: &CoefficientVector, s: usize, pattern: &AttainmentPattern) -> ConstraintSystem {
    let nodes = AtomicU64::new(0);
    let search = Search::new(a, s, u64::MAX, &nodes);
    let mut sys = ConstraintSystem::new(s);
    for (start, attained) in pattern.windows.iter().enumerate() {
        for (u, v, kind, c) in search.constraints(start, attained) {
            sys.add(u, v, kind, c);
        }
    }
    sys
}

/// `d(s)` with the default node budget.
pub fn hilbert_oracle(a: &CoefficientVector, s: usize) -> Result<usize> {
    hilbert_oracle_with_budget(a, s, DEFAULT_BUDGET)
}

/// `d(s)` by pruned enumeration. For `s <= n` there are no windows and
/// `D(s)` is all of `R^s`, so the answer is `s`.
pub fn hilbert_oracle_with_budget(a: &CoefficientVector, s: usize, budget: u64) -> Result<usize> {
    if s <= a.degree() {
        return Ok(s);
    }
    let nodes = AtomicU64::new(0);
    let search = Search::new(a, s, budget, &nodes);
    let best = AtomicUsize::new(0);
    let root = Dbm::<i64>::new(s);
    search
        .choices
        .par_iter()
        .map(|choice| match search.extend(&root, 0, choice)? {
            Some(next) => search.best_from(&next, 1, &best),
            None => Ok(()),
        })
        .collect::<Result<Vec<()>>>()?;
    Ok(best.load(Ordering::Relaxed))
}

/// `d(s)` for `s = 1..=s_max`, indexed by `s - 1`.
pub fn hilbert_table(a: &CoefficientVector, s_max: usize, budget: u64) -> Result<Vec<usize>> {
    (1..=s_max)
        .map(|s| hilbert_oracle_with_budget(a, s, budget))
        .collect()
}

/// Every feasible cell of `D(s)` with its dimension and a witness point,
/// in search order (windows left to right, attainment sets by bitmask).
pub fn enumerate_cells(a: &CoefficientVector, s: usize, budget: u64) -> Result<Vec<Cell>> {
    let nodes = AtomicU64::new(0);
    let search = Search::new(a, s, budget, &nodes);
    let mut out = Vec::new();
    if s <= a.degree() {
        let system = ConstraintSystem::new(s);
        out.push(Cell {
            pattern: AttainmentPattern { windows: vec![] },
            dimension: s,
            witness: system.witness()?,
            system,
        });
        return Ok(out);
    }
    search.cells_from(&Dbm::new(s), &mut Vec::new(), &mut out)?;
    Ok(out)
}

/// Vectors with some infinite entries that are not tropical boolean; the
/// oracle handles them but no graph construction covers them.
pub fn is_experimental(a: &CoefficientVector) -> bool {
    !a.is_all_finite() && !a.is_boolean()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EntropyBracket {
    #[serde(serialize_with = "ser_rat")]
    pub lower: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub upper: Rat,
}

fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl EntropyBracket {
    pub fn contains(&self, h: Rat) -> bool {
        self.lower <= h && h <= self.upper
    }
}

/// Brackets the entropy from a table of oracle values.
///
/// The upper end is `min d(s)/s`, which bounds `H` because `d` is
/// subadditive. The lower end is the empirical slope
/// `max_k min_s (d(s) - d(s-k))/k` over windows with at least `k + 1`
/// samples past `n`; it is a heuristic, not a proof.
pub fn fekete_entropy_estimate(a: &CoefficientVector, s_max: usize, budget: u64) -> Result<EntropyBracket> {
    let table = hilbert_table(a, s_max, budget)?;
    Ok(bracket_from_table(a.degree(), &table))
}

pub(crate) fn bracket_from_table(n: usize, table: &[usize]) -> EntropyBracket {
    let d = |s: usize| table[s - 1] as i64;
    let s_max = table.len();
    let upper = (1..=s_max)
        .map(|s| Ratio::new(d(s), s as i64))
        .min()
        .unwrap_or_else(|| Rat::from_integer(1));
    let first = n + 1;
    let span = s_max.saturating_sub(first);
    let mut lower = Rat::from_integer(0);
    for k in 1..=span / 2 {
        let slope = (first + k..=s_max)
            .map(|s| Ratio::new(d(s) - d(s - k), k as i64))
            .min();
        if let Some(slope) = slope {
            lower = lower.max(slope);
        }
    }
    EntropyBracket {
        lower: lower.min(upper),
        upper,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::satisfies_slice;

    fn v(s: &str) -> CoefficientVector {
        CoefficientVector::parse(s).unwrap()
    }

    #[test]
    fn two_term_vector_has_a_single_cell() {
        let cells = enumerate_cells(&v("0,0"), 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].pattern.windows, vec![vec![0, 1], vec![0, 1]]);
        assert_eq!(cells[0].dimension, 1);
    }

    #[test]
    fn single_window_cells_of_constant_vector() {
        // one window, four candidate patterns: {0,1,2} and the three pairs
        let cells = enumerate_cells(&v("0,0,0"), 3, DEFAULT_BUDGET).unwrap();
        let patterns: Vec<_> = cells.iter().map(|c| c.pattern.windows[0].clone()).collect();
        assert_eq!(
            patterns,
            vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]]
        );
        let dims: Vec<_> = cells.iter().map(|c| c.dimension).collect();
        assert_eq!(dims, vec![2, 2, 2, 1]);
    }

    #[test]
    fn witnesses_satisfy_and_match_their_pattern() {
        for text in ["0,1,0", "0,0,0", "1,0,2", "0,inf,0,0"] {
            let a = v(text);
            for cell in enumerate_cells(&a, 6, DEFAULT_BUDGET).unwrap() {
                let w = cell.witness.values();
                assert!(satisfies_slice(&a, w));
                assert_eq!(AttainmentPattern::of_sequence(&a, w).unwrap(), cell.pattern);
                assert_eq!(cell.system.dimension().unwrap(), cell.dimension);
            }
        }
    }

    #[test]
    fn pruned_maximum_matches_full_enumeration() {
        for text in ["0,1,0", "0,0,0", "2,0,1", "0,inf,0", "0,0"] {
            let a = v(text);
            for s in 1..=7 {
                let full = enumerate_cells(&a, s, DEFAULT_BUDGET)
                    .unwrap()
                    .iter()
                    .map(|c| c.dimension)
                    .max()
                    .unwrap();
                assert_eq!(hilbert_oracle(&a, s).unwrap(), full, "{text} s={s}");
            }
        }
    }

    #[test]
    fn short_lengths_are_free() {
        assert_eq!(hilbert_oracle(&v("0,1,0"), 2), Ok(2));
        assert_eq!(hilbert_oracle(&v("0,1,0"), 0), Ok(0));
    }

    #[test]
    fn budget_is_enforced() {
        let err = hilbert_oracle_with_budget(&v("0,0,0,0"), 10, 50).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { limit: 50, .. }));
    }

    #[test]
    fn experimental_flag() {
        assert!(is_experimental(&v("0,inf,1")));
        assert!(!is_experimental(&v("0,inf,0")));
        assert!(!is_experimental(&v("0,3,0")));
    }
}
