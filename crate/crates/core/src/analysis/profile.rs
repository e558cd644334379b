use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use super::{entropy_graph, hilbert_graph_table, AuditReport};
use crate::error::{Error, Result};
use crate::graph::RecurrenceGraph;
use crate::oracle::{enumerate_cells, hilbert_table};
use crate::sequence::Rat;
use crate::vector::CoefficientVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Method {
    Oracle,
    Graph,
    Both,
}

#[derive(Debug, Clone)]
pub struct HilbertProfile {
    pub vector: CoefficientVector,
    pub method: Method,
    pub vertex_count: Option<usize>,
    pub edge_count: Option<usize>,
    pub entropy: Option<Rat>,
    /// `d(s)` for `s = 1..=samples.len()`, from the graph unless the method
    /// is oracle-only.
    pub samples: Vec<usize>,
    /// Oracle values for `s = 1..=oracle_samples.len()` when both ran.
    pub oracle_samples: Vec<usize>,
    pub period: Option<usize>,
    pub regularity_index: Option<usize>,
    /// `r(s) = d(s) - H s` from the regularity index on.
    pub residuals: Vec<(usize, Rat)>,
    pub audits: Option<AuditReport>,
}

impl HilbertProfile {
    pub fn d(&self, s: usize) -> Option<usize> {
        self.samples.get(s.checked_sub(1)?).copied()
    }

    pub fn s_max(&self) -> usize {
        self.samples.len()
    }

    pub fn to_json(&self) -> Value {
        let pairs = |t: &[usize]| -> Vec<Value> {
            t.iter().enumerate().map(|(i, d)| json!([i + 1, d])).collect()
        };
        let residuals: Vec<Value> = self
            .residuals
            .iter()
            .map(|(s, r)| json!([s, r.to_string()]))
            .collect();
        let mut v = json!({
            "vector": self.vector.to_string(),
            "M": self.vector.working_m(),
            "V": self.vertex_count,
            "E": self.edge_count,
            "H": self.entropy.map(|h| h.to_string()),
            "method": self.method,
            "samples": pairs(&self.samples),
            "period": self.period,
            "regularityIndex": self.regularity_index,
            "residuals": residuals,
            "audits": self.audits,
        });
        if !self.oracle_samples.is_empty() {
            v["oracleSamples"] = Value::Array(pairs(&self.oracle_samples));
        }
        v
    }
}

impl Serialize for HilbertProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Four times the vertex count, and never shorter than two windows past `n`.
pub fn default_s_max(g: &RecurrenceGraph) -> usize {
    (4 * g.vertex_count()).max(2 * (g.degree() + 1))
}

/// Smallest `R` (then smallest `s0`) with `d(s + R) = d(s) + H R` for all
/// `s` in `[s0, s_max - R]`, where the verified stretch covers at least two
/// periods. `None` if no such `R` exists within the table.
pub fn detect_period(table: &[usize], h: Rat) -> Option<(usize, usize)> {
    let s_max = table.len();
    let d = |s: usize| table[s - 1] as i64;
    for r in 1..=s_max / 2 {
        let hr = h * Rat::from_integer(r as i64);
        if !hr.is_integer() {
            continue;
        }
        let hr = hr.to_integer();
        let mut s0 = 1;
        for s in (1..=s_max - r).rev() {
            if d(s + r) != d(s) + hr {
                s0 = s + 1;
                break;
            }
        }
        if s0 + 2 * r <= s_max + 1 {
            return Some((r, s0));
        }
    }
    None
}

fn residuals(table: &[usize], h: Rat, from: usize) -> Vec<(usize, Rat)> {
    (from..=table.len())
        .map(|s| (s, Rat::from_integer(table[s - 1] as i64) - h * Rat::from_integer(s as i64)))
        .collect()
}

/// Graph-based profile up to `s_max`.
pub fn quasilinearity(g: &RecurrenceGraph, s_max: usize) -> HilbertProfile {
    let h = entropy_graph(g);
    let samples = hilbert_graph_table(g, s_max);
    let found = detect_period(&samples, h);
    HilbertProfile {
        vector: g.vector().clone(),
        method: Method::Graph,
        vertex_count: Some(g.vertex_count()),
        edge_count: Some(g.edge_count()),
        entropy: Some(h),
        residuals: found.map_or_else(Vec::new, |(_, s0)| residuals(&samples, h, s0)),
        period: found.map(|f| f.0),
        regularity_index: found.map(|f| f.1),
        samples,
        oracle_samples: Vec::new(),
        audits: None,
    }
}

/// Oracle-only profile: no entropy, hence no period.
pub fn profile_oracle(a: &CoefficientVector, s_max: usize, budget: u64) -> Result<HilbertProfile> {
    Ok(HilbertProfile {
        vector: a.clone(),
        method: Method::Oracle,
        vertex_count: None,
        edge_count: None,
        entropy: None,
        samples: hilbert_table(a, s_max, budget)?,
        oracle_samples: Vec::new(),
        period: None,
        regularity_index: None,
        residuals: Vec::new(),
        audits: None,
    })
}

/// Graph profile up to `s_max`, cross-checked against the oracle up to
/// `oracle_s_max`. A mismatch is an error carrying a maximal oracle cell and
/// the graph paths through its witness.
pub fn profile_both(
    g: &RecurrenceGraph,
    s_max: usize,
    oracle_s_max: usize,
    budget: u64,
) -> Result<HilbertProfile> {
    let a = g.vector();
    let mut p = quasilinearity(g, s_max.max(oracle_s_max));
    let oracle = hilbert_table(a, oracle_s_max, budget)?;
    for (i, (&o, &gr)) in oracle.iter().zip(&p.samples).enumerate() {
        if o != gr {
            let s = i + 1;
            let mut msg = format!("{a}: s={s} oracle {o} graph {gr}");
            if s > a.degree() {
                let cells = enumerate_cells(a, s, budget)?;
                if let Some(c) = cells.iter().max_by_key(|c| c.dimension) {
                    let paths = g.trace(&c.witness)?;
                    msg.push_str(&format!(
                        "; oracle cell {:?} witness {} graph paths {:?}",
                        c.pattern.windows, c.witness, paths
                    ));
                }
            }
            return Err(Error::Disagreement(msg));
        }
    }
    p.method = Method::Both;
    p.oracle_samples = oracle;
    Ok(p)
}
