//! Coefficient vectors `a = (a_0, ..., a_n)` over `Z ∪ {∞}`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An integer or the absorbing element `∞`.
///
/// The derived ordering puts every finite value below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtendedInt {
    Finite(i64),
    Infinite,
}

impl ExtendedInt {
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtendedInt::Finite(v) => Some(v),
            ExtendedInt::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedInt::Finite(_))
    }
}

impl std::ops::Add for ExtendedInt {
    type Output = ExtendedInt;

    fn add(self, rhs: ExtendedInt) -> ExtendedInt {
        match (self, rhs) {
            (ExtendedInt::Finite(a), ExtendedInt::Finite(b)) => ExtendedInt::Finite(a + b),
            _ => ExtendedInt::Infinite,
        }
    }
}

impl fmt::Display for ExtendedInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedInt::Finite(v) => write!(f, "{v}"),
            ExtendedInt::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtendedInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(ExtendedInt::Infinite);
        }
        t.parse::<i64>()
            .map(ExtendedInt::Finite)
            .map_err(|_| Error::Parse(format!("bad coefficient `{t}`")))
    }
}

/// The coefficient vector of a univariate tropical polynomial `min_i (iX + a_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoefficientVector {
    entries: Vec<ExtendedInt>,
    support: Vec<usize>,
    amplitude: i64,
}

impl CoefficientVector {
    pub fn new(entries: Vec<ExtendedInt>) -> Result<Self> {
        let support: Vec<usize> = entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_finite())
            .map(|(i, _)| i)
            .collect();
        if support.len() < 2 {
            return Err(Error::TooFewFinite(support.len()));
        }
        let finite = support.iter().map(|&i| entries[i].finite().unwrap());
        let max = finite.clone().max().unwrap();
        let min = finite.min().unwrap();
        Ok(CoefficientVector {
            entries,
            support,
            amplitude: max - min,
        })
    }

    pub fn from_finite(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| ExtendedInt::Finite(v)).collect())
    }

    /// Parses the comma-separated text form, e.g. `0,1,0` or `0,inf,0`.
    pub fn parse(text: &str) -> Result<Self> {
        let entries = text
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<ExtendedInt>>>()?;
        Self::new(entries)
    }

    /// The degree `n`; the vector has `n + 1` entries.
    pub fn degree(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[ExtendedInt] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> ExtendedInt {
        self.entries[i]
    }

    /// Finite value of `a_i`, `None` for `∞`.
    pub fn finite(&self, i: usize) -> Option<i64> {
        self.entries[i].finite()
    }

    /// Sorted indices of the finite entries.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn amplitude(&self) -> i64 {
        self.amplitude
    }

    /// The amplitude bound used by the graph construction, floored at 1.
    pub fn working_m(&self) -> i64 {
        self.amplitude.max(1)
    }

    pub fn is_all_finite(&self) -> bool {
        self.support.len() == self.entries.len()
    }

    /// `a_0 = a_n = 0` and every entry is `0` or `∞`.
    pub fn is_boolean(&self) -> bool {
        let n = self.degree();
        self.entries[0] == ExtendedInt::Finite(0)
            && self.entries[n] == ExtendedInt::Finite(0)
            && self
                .entries
                .iter()
                .all(|e| matches!(e, ExtendedInt::Finite(0) | ExtendedInt::Infinite))
    }

    /// Finite values of `a` as `(index, value)` points.
    pub fn points(&self) -> Vec<(i64, i64)> {
        self.support
            .iter()
            .map(|&i| (i as i64, self.entries[i].finite().unwrap()))
            .collect()
    }

    /// Shifts every finite entry so the smallest one becomes 0.
    pub fn normalized(&self) -> Self {
        let min = self.points().iter().map(|p| p.1).min().unwrap();
        let entries = self
            .entries
            .iter()
            .map(|e| match e {
                ExtendedInt::Finite(v) => ExtendedInt::Finite(v - min),
                ExtendedInt::Infinite => ExtendedInt::Infinite,
            })
            .collect();
        CoefficientVector::new(entries).expect("support is unchanged")
    }

    /// Applies `a_i <- a_i + slope * i + shift` to the finite entries.
    pub fn affine_transform(&self, slope: i64, shift: i64) -> Self {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| match e {
                ExtendedInt::Finite(v) => ExtendedInt::Finite(v + slope * i as i64 + shift),
                ExtendedInt::Infinite => ExtendedInt::Infinite,
            })
            .collect();
        CoefficientVector::new(entries).expect("support is unchanged")
    }
}

impl fmt::Display for CoefficientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for CoefficientVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Serialize for CoefficientVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl PartialOrd for CoefficientVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CoefficientVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries
            .len()
            .cmp(&other.entries.len())
            .then_with(|| self.entries.cmp(&other.entries))
    }
}
