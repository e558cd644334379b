//! Finite sequences and the recurrence condition: in every window of length
//! `n + 1` the minimum of `y_{j+i} + a_i` is attained at least twice.

use std::fmt;

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::vector::CoefficientVector;

pub type Rat = Rational64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSequence {
    values: Vec<Rat>,
}

impl FiniteSequence {
    pub fn new(values: Vec<Rat>) -> Self {
        FiniteSequence { values }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        FiniteSequence {
            values: values.iter().map(|&v| Rat::from_integer(v)).collect(),
        }
    }

    /// Comma-separated rationals `p/q` or integers.
    pub fn parse(text: &str) -> Result<Self> {
        let values = text
            .split(',')
            .map(|tok| {
                let t = tok.trim();
                t.parse::<Rat>()
                    .map_err(|_| Error::Parse(format!("bad rational `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteSequence { values })
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl fmt::Display for FiniteSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl Serialize for FiniteSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.values.iter().map(|v| v.to_string()))
    }
}

/// Value of the window minimum starting at 0-based position `start`, and the
/// indices `i` of the support realizing it.
pub(crate) fn window_minimum(a: &CoefficientVector, y: &[Rat], start: usize) -> (Rat, Vec<usize>) {
    let mut best: Option<Rat> = None;
    let mut at = Vec::new();
    for &i in a.support() {
        let v = y[start + i] + Rat::from_integer(a.finite(i).unwrap());
        match best {
            Some(b) if v > b => {}
            Some(b) if v == b => at.push(i),
            _ => {
                best = Some(v);
                at.clear();
                at.push(i);
            }
        }
    }
    (best.unwrap(), at)
}

/// Checks the recurrence condition on every full window of `y`.
pub fn satisfies(a: &CoefficientVector, y: &FiniteSequence) -> Result<bool> {
    let n = a.degree();
    if y.len() < n + 1 {
        return Err(Error::SequenceTooShort {
            len: y.len(),
            need: n + 1,
        });
    }
    Ok(satisfies_slice(a, y.values()))
}

pub(crate) fn satisfies_slice(a: &CoefficientVector, y: &[Rat]) -> bool {
    let n = a.degree();
    if y.len() <= n {
        return true;
    }
    (0..y.len() - n).all(|j| window_minimum(a, y, j).1.len() >= 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Connectivity {
    Connected,
    Disconnected,
}

/// A coordinate is connected when it realizes the minimum of some window
/// containing it, i.e. it cannot be lowered on its own.
pub fn classify_connected(a: &CoefficientVector, z: &FiniteSequence) -> Result<Vec<Connectivity>> {
    if !a.is_all_finite() {
        return Err(Error::Unsupported(
            "connectivity needs an all-finite vector".into(),
        ));
    }
    if !satisfies(a, z)? {
        return Err(Error::NotSatisfying);
    }
    let n = a.degree();
    let s = z.len();
    let mut out = vec![Connectivity::Disconnected; s];
    for start in 0..=s - n - 1 {
        for i in window_minimum(a, z.values(), start).1 {
            out[start + i] = Connectivity::Connected;
        }
    }
    Ok(out)
}

/// A violation of the neighbouring-connected-coordinates bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapViolation {
    pub left: usize,
    pub right: usize,
    pub reason: &'static str,
}

/// Checks that neighbouring connected coordinates are at most `n` apart and
/// differ by at most `2M` (`M` the working amplitude).
pub fn connected_gap_violations(
    a: &CoefficientVector,
    z: &FiniteSequence,
) -> Result<Vec<GapViolation>> {
    let classes = classify_connected(a, z)?;
    let n = a.degree();
    let bound = Rat::from_integer(2 * a.working_m());
    let connected: Vec<usize> = classes
        .iter()
        .enumerate()
        .filter(|(_, c)| **c == Connectivity::Connected)
        .map(|(j, _)| j)
        .collect();
    let mut out = Vec::new();
    for w in connected.windows(2) {
        let (l, r) = (w[0], w[1]);
        if r - l > n {
            out.push(GapViolation {
                left: l,
                right: r,
                reason: "index gap exceeds n",
            });
        }
        let diff = z.values()[l] - z.values()[r];
        let abs = if diff < Rat::from_integer(0) { -diff } else { diff };
        if abs > bound {
            out.push(GapViolation {
                left: l,
                right: r,
                reason: "value gap exceeds 2M",
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> CoefficientVector {
        CoefficientVector::parse(s).unwrap()
    }

    #[test]
    fn satisfies_examples() {
        assert!(satisfies(&v("0,0,0"), &FiniteSequence::from_ints(&[0, 0, 0, 0])).unwrap());
        assert!(!satisfies(&v("0,0"), &FiniteSequence::from_ints(&[0, 1])).unwrap());
        assert!(satisfies(&v("0,1,0"), &FiniteSequence::from_ints(&[0; 5])).unwrap());
        assert_eq!(
            satisfies(&v("0,1,0"), &FiniteSequence::from_ints(&[0, 0])),
            Err(Error::SequenceTooShort { len: 2, need: 3 })
        );
    }

    #[test]
    fn infinite_entries_are_skipped() {
        // windows only look at positions 0 and 2
        let y = FiniteSequence::from_ints(&[0, -5, 0, -5, 0]);
        assert!(satisfies(&v("0,inf,0"), &y).unwrap());
        assert!(!satisfies(&v("0,0,0"), &y).unwrap());
    }

    #[test]
    fn parses_rationals() {
        let y = FiniteSequence::parse("1/2, -3, 4/6").unwrap();
        assert_eq!(y.values()[2], Rat::new(2, 3));
        assert_eq!(y.to_string(), "1/2,-3,2/3");
        assert!(FiniteSequence::parse("1,x").is_err());
        assert!(FiniteSequence::parse("1/0").is_err());
    }

    #[test]
    fn all_connected_for_constant() {
        let c = classify_connected(&v("0,0"), &FiniteSequence::from_ints(&[0, 0, 0])).unwrap();
        assert_eq!(c, vec![Connectivity::Connected; 3]);
    }

    #[test]
    fn raised_coordinate_is_disconnected() {
        let a = v("0,0,0");
        let z = FiniteSequence::from_ints(&[0, 0, 5, 0, 0, 5, 0, 0]);
        let c = classify_connected(&a, &z).unwrap();
        assert_eq!(c[2], Connectivity::Disconnected);
        assert_eq!(c[5], Connectivity::Disconnected);
        assert!(c
            .iter()
            .enumerate()
            .all(|(j, k)| (j % 3 == 2) == (*k == Connectivity::Disconnected)));
        // perturbing a disconnected coordinate downward keeps the condition
        let mut lowered = z.values().to_vec();
        lowered[2] = Rat::new(1, 2);
        assert!(satisfies(&a, &FiniteSequence::new(lowered)).unwrap());
        // perturbing a connected one breaks it
        let mut lowered = z.values().to_vec();
        lowered[1] = Rat::from_integer(-1);
        assert!(!satisfies(&a, &FiniteSequence::new(lowered)).unwrap());
        assert!(connected_gap_violations(&a, &z).unwrap().is_empty());
    }

    #[test]
    fn rejects_non_satisfying() {
        assert_eq!(
            classify_connected(&v("0,0"), &FiniteSequence::from_ints(&[0, 1])),
            Err(Error::NotSatisfying)
        );
    }
}
