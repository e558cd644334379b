//! The construction for all-finite vectors.
//!
//! A vertex is stored canonically: relative to the minimal bounded
//! coordinate `y_s0`, every bounded coordinate has an integer floor
//! `floor(y_j - y_s0)` and a level, the rank of its fractional part among
//! the bounded coordinates (level 0 is the class of `y_s0`). Pairwise
//! offsets `m(k, l)` and their equality/band flags are read off from this,
//! so transitively equal presentations collapse to one descriptor.

use std::fmt;

use rayon::prelude::*;

use super::{BuildStats, CaseTag, Construction, Descriptor, Edge, Forced, Interner, RecurrenceGraph};
use crate::diffcon::ConstraintSystem;
use crate::error::{Error, Result};
use crate::vector::CoefficientVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Place {
    pub floor: i64,
    pub level: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneralVertex {
    coords: Vec<Option<Place>>,
}

/// Sort key of a value `c + f` with `f` in `[0, 1)`: fractional parts are
/// compared through `g` only. Even `g = 2l` is an existing level `l`, odd
/// `g` sits strictly between two levels.
type Key = (i64, i64);

impl GeneralVertex {
    /// `None` marks an unbounded coordinate.
    pub fn new(coords: Vec<Option<Place>>) -> Result<Self> {
        let v = GeneralVertex { coords };
        let mut levels: Vec<u32> = v.coords.iter().flatten().map(|p| p.level).collect();
        levels.sort_unstable();
        levels.dedup();
        let dense = levels.iter().enumerate().all(|(i, &l)| i as u32 == l);
        let has_origin = v.coords.iter().flatten().any(|p| p.floor == 0 && p.level == 0);
        let nonneg = v.coords.iter().flatten().all(|p| p.floor >= 0);
        if levels.is_empty() || !dense || !has_origin || !nonneg {
            return Err(Error::Parse("not a canonical vertex descriptor".into()));
        }
        Ok(v)
    }

    pub fn coords(&self) -> &[Option<Place>] {
        &self.coords
    }

    pub fn bounded(&self) -> Vec<usize> {
        (0..self.coords.len()).filter(|&i| self.coords[i].is_some()).collect()
    }

    /// Index of the distinguished minimal coordinate.
    pub fn s0(&self) -> usize {
        self.coords
            .iter()
            .position(|p| matches!(p, Some(Place { floor: 0, level: 0 })))
            .expect("canonical vertex has an origin")
    }

    pub fn levels(&self) -> usize {
        self.coords.iter().flatten().map(|p| p.level as usize + 1).max().unwrap_or(0)
    }

    pub fn classes(&self) -> usize {
        self.levels() + self.coords.iter().filter(|p| p.is_none()).count()
    }

    /// For bounded `k < l`: the integer `m(k, l)` and whether `y_k = y_l + m`
    /// holds (otherwise `y_k < y_l + m < y_k + 1`).
    pub fn relation(&self, k: usize, l: usize) -> Option<(i64, bool)> {
        let (pk, pl) = (self.coords[k]?, self.coords[l]?);
        let m = pk.floor - pl.floor;
        Some(match pk.level.cmp(&pl.level) {
            std::cmp::Ordering::Equal => (m, true),
            std::cmp::Ordering::Less => (m, false),
            std::cmp::Ordering::Greater => (m + 1, false),
        })
    }

    /// Every offset within `(k - 2n)M <= m <= (2n - k)M`, `k` 1-based.
    pub fn in_range(&self, m: i64) -> bool {
        let n = self.coords.len() as i64;
        let b = self.bounded();
        for (x, &k) in b.iter().enumerate() {
            for &l in &b[x + 1..] {
                let (off, _) = self.relation(k, l).unwrap();
                let k1 = k as i64 + 1;
                if off < (k1 - 2 * n) * m || off > (2 * n - k1) * m {
                    return false;
                }
            }
        }
        true
    }

    pub fn system(&self, n: usize, m: i64) -> ConstraintSystem {
        assert_eq!(self.coords.len(), n);
        let mut sys = ConstraintSystem::new(n);
        let s0 = self.s0();
        for j in (0..n).filter(|&j| j != s0) {
            sys.le(s0, j, 0);
        }
        let b = self.bounded();
        for (x, &k) in b.iter().enumerate() {
            for &l in &b[x + 1..] {
                let (off, eq) = self.relation(k, l).unwrap();
                if eq {
                    sys.equal(k, l, off);
                } else {
                    sys.lt(k, l, off);
                    sys.lt(l, k, 1 - off);
                }
            }
        }
        for j in (0..n).filter(|&j| self.coords[j].is_none()) {
            sys.lt(s0, j, -(j as i64 + 1) * m);
        }
        sys
    }

    fn keys(&self) -> Vec<Option<Key>> {
        self.coords
            .iter()
            .map(|p| p.map(|p| (p.floor, 2 * p.level as i64)))
            .collect()
    }

    /// Canonical vertex from sort keys; `None` if nothing is bounded.
    fn from_keys(keys: &[Option<Key>]) -> Option<Self> {
        let &(c0, g0) = keys.iter().flatten().min()?;
        let mut gs: Vec<i64> = keys.iter().flatten().map(|k| k.1).collect();
        gs.sort_unstable();
        gs.dedup();
        let pivot = gs.iter().position(|&g| g == g0).unwrap();
        gs.rotate_left(pivot);
        let coords = keys
            .iter()
            .map(|k| {
                k.map(|(c, g)| Place {
                    floor: if g >= g0 { c - c0 } else { c - c0 - 1 },
                    level: gs.iter().position(|&x| x == g).unwrap() as u32,
                })
            })
            .collect();
        Some(GeneralVertex { coords })
    }

    /// Outgoing transitions: target (before the range check), rule, and
    /// the forced equality if any.
    fn successors(&self, a: &[i64], m: i64) -> Vec<(GeneralVertex, CaseTag, Option<Forced>)> {
        let n = self.coords.len();
        let keys = self.keys();
        let an = a[n];
        let score = |r: usize| keys[r].map(|(c, g)| (c + a[r], g));
        let best = (0..n).filter_map(score).min().unwrap();
        let s: Vec<usize> = (0..n).filter(|&r| score(r) == Some(best)).collect();
        let shifted = |last: Option<Key>| {
            let mut k: Vec<Option<Key>> = keys[1..].to_vec();
            k.push(last);
            GeneralVertex::from_keys(&k).unwrap()
        };
        if let [t] = s[..] {
            let (c, g) = keys[t].unwrap();
            let key = (c + a[t] - an, g);
            let forced = Forced {
                pos: t,
                offset: a[t] - an,
            };
            return vec![(shifted(Some(key)), CaseTag::Single, Some(forced))];
        }
        let t = *s.iter().find(|&&r| r >= 1).unwrap();
        let (tc, tg) = keys[t].unwrap();
        let base = (tc + a[t] - an, tg);
        let rest: Vec<Key> = keys[1..].iter().flatten().copied().collect();
        let (mc, mg) = *rest.iter().min().unwrap();
        let cap = (mc + n as i64 * m, mg);
        let mut gs: Vec<i64> = rest.iter().map(|k| k.1).collect();
        gs.sort_unstable();
        gs.dedup();

        let mut out = vec![(shifted(None), CaseTag::Unbounded, None)];
        let mut points: Vec<Key> = Vec::new();
        for c in base.0..=cap.0 {
            for &g in &gs {
                if base <= (c, g) && (c, g) <= cap {
                    points.push((c, g));
                }
            }
        }
        for (i, &p) in points.iter().enumerate() {
            out.push((shifted(Some(p)), CaseTag::BoundedEq, None));
            if i + 1 < points.len() {
                out.push((shifted(Some((p.0, p.1 + 1))), CaseTag::BoundedBand, None));
            }
        }
        out
    }
}

impl fmt::Display for GeneralVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match p {
                Some(p) => write!(f, "{}@{}", p.floor, p.level)?,
                None => f.write_str("*")?,
            }
        }
        Ok(())
    }
}

/// Dense level vectors of all weak orders on `k` elements.
pub(crate) fn weak_order_levels(k: usize) -> Vec<Vec<u32>> {
    fn rec(k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            let mut seen: Vec<u32> = cur.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.iter().enumerate().all(|(i, &l)| i as u32 == l) {
                out.push(cur.clone());
            }
            return;
        }
        for l in 0..k as u32 {
            cur.push(l);
            rec(k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, &mut Vec::new(), &mut out);
    out
}

/// Vertices holding every point of `R^n`: coordinate `j` (1-based) is
/// bounded iff `y_j - min y <= jM`.
pub(crate) fn initial_vertices(n: usize, m: i64) -> Vec<GeneralVertex> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let b: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        for levels in weak_order_levels(b.len()) {
            let mut floors = vec![0i64; b.len()];
            loop {
                let ok_top = b
                    .iter()
                    .zip(&floors)
                    .zip(&levels)
                    .all(|((&j, &q), &l)| q < (j as i64 + 1) * m || l == 0);
                let has_origin = floors.iter().zip(&levels).any(|(&q, &l)| q == 0 && l == 0);
                if ok_top && has_origin {
                    let mut coords = vec![None; n];
                    for (x, &j) in b.iter().enumerate() {
                        coords[j] = Some(Place {
                            floor: floors[x],
                            level: levels[x],
                        });
                    }
                    out.push(GeneralVertex { coords });
                }
                // odometer over floors[x] in 0..=(b[x]+1)M
                let mut x = 0;
                while x < b.len() {
                    floors[x] += 1;
                    if floors[x] <= (b[x] as i64 + 1) * m {
                        break;
                    }
                    floors[x] = 0;
                    x += 1;
                }
                if x == b.len() {
                    break;
                }
            }
        }
    }
    out
}

pub(crate) fn build(a: &CoefficientVector, max_vertices: usize) -> Result<RecurrenceGraph> {
    if !a.is_all_finite() {
        return Err(Error::Unsupported(format!(
            "the general construction needs finite entries, got {a}"
        )));
    }
    let n = a.degree();
    let m = a.working_m();
    let coeffs: Vec<i64> = (0..=n).map(|i| a.finite(i).unwrap()).collect();

    let mut table: Interner<GeneralVertex> = Interner::new();
    let init = initial_vertices(n, m);
    let mut stats = BuildStats {
        initial_vertices: init.len(),
        out_of_range: 0,
    };
    let mut frontier = Vec::new();
    for v in init {
        let (i, fresh) = table.intern(v);
        if fresh {
            frontier.push(i);
        }
    }
    let n_initial = table.len();
    if n_initial > max_vertices {
        return Err(Error::BudgetExceeded {
            limit: max_vertices as u64,
            seen: n_initial as u64,
        });
    }

    let mut edges = Vec::new();
    while !frontier.is_empty() {
        let expanded: Vec<(usize, Vec<_>)> = frontier
            .par_iter()
            .map(|&v| (v, table.get(v).successors(&coeffs, m)))
            .collect();
        let mut next = Vec::new();
        for (v, succ) in expanded {
            for (target, case, forced) in succ {
                if !target.in_range(m) {
                    stats.out_of_range += 1;
                    continue;
                }
                let (w, fresh) = table.intern(target);
                if fresh {
                    next.push(w);
                    if table.len() > max_vertices {
                        return Err(Error::BudgetExceeded {
                            limit: max_vertices as u64,
                            seen: table.len() as u64,
                        });
                    }
                }
                edges.push(Edge {
                    from: v,
                    to: w,
                    label: case.into(),
                    forced,
                });
            }
        }
        frontier = next;
    }

    let total = table.len();
    let vertices: Vec<Descriptor> = table.into_items().into_iter().map(Descriptor::General).collect();
    let initial = (0..total).map(|i| i < n_initial).collect();
    Ok(RecurrenceGraph::assemble(
        a.clone(),
        Construction::General,
        vertices,
        initial,
        edges,
        stats,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weak_order_counts() {
        let counts: Vec<usize> = (1..=5).map(|k| weak_order_levels(k).len()).collect();
        assert_eq!(counts, vec![1, 3, 13, 75, 541]);
    }

    #[test]
    fn renormalizes_keys() {
        // values 3.5, 3, 2.5 with fraction codes 1, 0, 1
        let v = GeneralVertex::from_keys(&[Some((3, 1)), Some((3, 0)), Some((2, 1)), None]).unwrap();
        let p = |f, l| Some(Place { floor: f, level: l });
        assert_eq!(v.coords(), &[p(1, 0), p(0, 1), p(0, 0), None]);
        assert_eq!(v.s0(), 2);
        assert_eq!(v.classes(), 3);
    }

    #[test]
    fn relations_match_values() {
        let p = |f, l| Some(Place { floor: f, level: l });
        // y = (0, 1.5, 1): level 1 is the fraction 1/2
        let v = GeneralVertex::new(vec![p(0, 0), p(1, 1), p(1, 0)]).unwrap();
        assert_eq!(v.relation(0, 1), Some((-1, false)));
        assert_eq!(v.relation(1, 2), Some((1, false)));
        assert_eq!(v.relation(0, 2), Some((-1, true)));
        let sys = v.system(3, 1);
        use crate::sequence::Rat;
        assert!(sys.contains(&[Rat::from_integer(0), Rat::new(3, 2), Rat::from_integer(1)]));
        assert!(!sys.contains(&[Rat::from_integer(0), Rat::new(5, 2), Rat::from_integer(1)]));
    }

    #[test]
    fn rejects_non_canonical() {
        let p = |f, l| Some(Place { floor: f, level: l });
        assert!(GeneralVertex::new(vec![p(1, 0), p(2, 0)]).is_err());
        assert!(GeneralVertex::new(vec![p(0, 0), p(0, 2)]).is_err());
        assert!(GeneralVertex::new(vec![None, None]).is_err());
    }
}
