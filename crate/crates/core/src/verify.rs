//! The acceptance corpus and one check per acceptance criterion.
//!
//! Every check returns a [`CriterionReport`]; nothing here panics on a
//! failed property, so a runner can print the full pass/fail matrix.

use std::fmt;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{
    audit_bounds, default_s_max, entropy_graph, entropy_theorems_for, hilbert_graph_table,
    projective, quasilinearity, AuditReport, HilbertProfile, TheoremReport,
};
use crate::diffcon::{ConstraintSystem, Relation};
use crate::error::Result;
use crate::graph::{build_boolean, build_general, Admissible, Construction, EdgeKind, RecurrenceGraph};
use crate::newton::single_bounded_edge;
use crate::oracle::{hilbert_table, DEFAULT_BUDGET};
use crate::sequence::{satisfies_slice, Rat};
use crate::vector::{CoefficientVector, ExtendedInt};

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Samples for each of the continuation and coverage checks.
    pub samples: usize,
    /// Random systems for the difference-constraint check.
    pub random_systems: usize,
    pub budget: u64,
    /// Largest `s` compared between oracle and graph on the corpus.
    pub oracle_s_max: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0x7a0c,
            samples: 1000,
            random_systems: 10_000,
            budget: DEFAULT_BUDGET,
            oracle_s_max: 10,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {status} {}", self.id, self.title)?;
        if let Some(first) = self.details.first() {
            write!(f, " ({first})")?;
        }
        Ok(())
    }
}

fn report(id: u8, title: &'static str, failures: Vec<String>, summary: String) -> CriterionReport {
    let passed = failures.is_empty();
    let mut details = vec![summary];
    details.extend(failures);
    CriterionReport {
        id,
        title,
        passed,
        details,
    }
}

fn vector(s: &str) -> CoefficientVector {
    CoefficientVector::parse(s).expect("built-in vector")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub vector: CoefficientVector,
    pub construction: Construction,
}

impl fmt::Display for CorpusEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.construction {
            Construction::General => "general",
            Construction::Boolean => "boolean",
        };
        write!(f, "({}) [{tag}]", self.vector)
    }
}

/// All vectors of degree 1 or 2 with entries in `0..=2` (general
/// construction) and all tropical boolean vectors of degree at most 4
/// (boolean construction).
pub fn corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 1..=2u32 {
        for code in 0..3usize.pow(n + 1) {
            let entries: Vec<i64> = (0..=n).map(|i| (code / 3usize.pow(i) % 3) as i64).collect();
            out.push(CorpusEntry {
                vector: CoefficientVector::from_finite(&entries).unwrap(),
                construction: Construction::General,
            });
        }
    }
    for n in 1..=4usize {
        for mask in 0..1u32 << (n - 1) {
            let mut entries = vec![ExtendedInt::Finite(0); n + 1];
            for i in 1..n {
                if mask >> (i - 1) & 1 == 1 {
                    entries[i] = ExtendedInt::Infinite;
                }
            }
            out.push(CorpusEntry {
                vector: CoefficientVector::new(entries).unwrap(),
                construction: Construction::Boolean,
            });
        }
    }
    out
}

pub fn build_for(entry: &CorpusEntry) -> Result<RecurrenceGraph> {
    match entry.construction {
        Construction::General => build_general(&entry.vector),
        Construction::Boolean => build_boolean(&entry.vector),
    }
}

/// Everything computed once per corpus vector.
#[derive(Debug, Clone)]
pub struct CorpusResult {
    pub entry: CorpusEntry,
    pub graph: RecurrenceGraph,
    pub entropy: Rat,
    pub profile: HilbertProfile,
    pub oracle: Vec<usize>,
    pub theorems: TheoremReport,
    pub audits: AuditReport,
}

pub fn analyse(entry: &CorpusEntry, cfg: &VerifyConfig) -> Result<CorpusResult> {
    let graph = build_for(entry)?;
    let entropy = entropy_graph(&graph);
    let profile = quasilinearity(&graph, default_s_max(&graph).max(cfg.oracle_s_max));
    let oracle = hilbert_table(&entry.vector, cfg.oracle_s_max, cfg.budget)?;
    let theorems = entropy_theorems_for(&entry.vector, entropy);
    let audits = audit_bounds(&profile, &graph);
    Ok(CorpusResult {
        entry: entry.clone(),
        graph,
        entropy,
        profile,
        oracle,
        theorems,
        audits,
    })
}

pub fn analyse_corpus(cfg: &VerifyConfig) -> Vec<(CorpusEntry, Result<CorpusResult>)> {
    corpus()
        .into_par_iter()
        .map(|e| {
            let r = analyse(&e, cfg);
            (e, r)
        })
        .collect()
}

/// Runs every criterion; the corpus is analysed once and shared.
pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionReport> {
    let results = analyse_corpus(cfg);
    vec![
        criterion_1(cfg),
        criterion_2(),
        criterion_3(&results),
        criterion_4(&results),
        criterion_5(&results),
        criterion_6(&results),
        criterion_7(&results),
        criterion_8(&results),
        criterion_9(&results, cfg),
        criterion_10(cfg),
    ]
}

/// Closed forms `ceil(s/3)` and `ceil(s/4)`. They count dimension modulo
/// the constant-shift line, so the affine tables must exceed them by one.
pub fn criterion_1(cfg: &VerifyConfig) -> CriterionReport {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (text, k) in [("0,0,0", 3usize), ("0,1,0", 4)] {
        let a = vector(text);
        let oracle = match hilbert_table(&a, 12, cfg.budget) {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("({text}) oracle: {e}"));
                continue;
            }
        };
        let graph = match build_general(&a) {
            Ok(g) => hilbert_graph_table(&g, 40),
            Err(e) => {
                failures.push(format!("({text}) graph: {e}"));
                continue;
            }
        };
        for (name, table, top) in [("oracle", &oracle, 12usize), ("graph", &graph, 40)] {
            let proj = projective(table);
            for s in 3..=top {
                let want = s.div_ceil(k);
                if proj[s - 1] != want || table[s - 1] != want + 1 {
                    failures.push(format!(
                        "({text}) {name} s={s}: projective {} affine {}, closed form {want}",
                        proj[s - 1],
                        table[s - 1]
                    ));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs() >= 60 {
        failures.push(format!("took {elapsed:?}"));
    }
    report(
        1,
        "closed-form Hilbert tables",
        failures,
        "projective d(s) = ceil(s/3), ceil(s/4); affine = closed form + 1".to_string(),
    )
}

pub fn criterion_2() -> CriterionReport {
    let cases: [(&str, Construction, Rat); 7] = [
        ("0,1,0", Construction::General, Rat::new(1, 4)),
        ("0,0,0", Construction::General, Rat::new(1, 3)),
        ("0,0,0", Construction::Boolean, Rat::new(1, 3)),
        ("0,0,0,0", Construction::General, Rat::new(1, 2)),
        ("0,0,0,0", Construction::Boolean, Rat::new(1, 2)),
        ("0,1", Construction::General, Rat::from_integer(0)),
        ("0,inf,0", Construction::Boolean, Rat::from_integer(0)),
    ];
    let mut failures = Vec::new();
    let mut seen = Vec::new();
    for (text, construction, want) in cases {
        let entry = CorpusEntry {
            vector: vector(text),
            construction,
        };
        match build_for(&entry) {
            Ok(g) => {
                let h = entropy_graph(&g);
                seen.push(format!("{entry} H={h}"));
                if h != want {
                    failures.push(format!("{entry}: H = {h}, expected {want}"));
                }
            }
            Err(e) => failures.push(format!("{entry}: {e}")),
        }
    }
    report(2, "entropy values", failures, seen.join(", "))
}

fn corpus_failures<'a>(
    results: &'a [(CorpusEntry, Result<CorpusResult>)],
    failures: &mut Vec<String>,
) -> Vec<&'a CorpusResult> {
    let mut ok = Vec::new();
    for (e, r) in results {
        match r {
            Ok(r) => ok.push(r),
            Err(err) => failures.push(format!("{e}: {err}")),
        }
    }
    ok
}

pub fn criterion_3(results: &[(CorpusEntry, Result<CorpusResult>)]) -> CriterionReport {
    let mut failures = Vec::new();
    let ok = corpus_failures(results, &mut failures);
    let mut compared = 0;
    for r in &ok {
        for (i, (&o, &g)) in r.oracle.iter().zip(&r.profile.samples).enumerate() {
            compared += 1;
            if o != g {
                failures.push(format!("{}: s={} oracle {o} graph {g}", r.entry, i + 1));
            }
        }
    }
    report(
        3,
        "oracle/graph equivalence",
        failures,
        format!("{} corpus entries, {compared} values compared", results.len()),
    )
}

pub fn criterion_4(results: &[(CorpusEntry, Result<CorpusResult>)]) -> CriterionReport {
    let mut failures = Vec::new();
    let ok = corpus_failures(results, &mut failures);
    let regular = ok.iter().filter(|r| r.theorems.regular).count();
    for r in &ok {
        if (r.entropy == Rat::from_integer(0)) != r.theorems.regular {
            failures.push(format!("{}: H = {}, regular = {}", r.entry, r.entropy, r.theorems.regular));
        }
    }
    report(
        4,
        "H = 0 iff regular",
        failures,
        format!("{regular} regular of {}", ok.len()),
    )
}

pub fn criterion_5(results: &[(CorpusEntry, Result<CorpusResult>)]) -> CriterionReport {
    let mut failures = Vec::new();
    let ok = corpus_failures(results, &mut failures);
    let mut min: Option<Rat> = None;
    for r in ok.iter().filter(|r| !r.theorems.regular) {
        min = Some(min.map_or(r.entropy, |m: Rat| m.min(r.entropy)));
        if r.entropy < Rat::new(1, 4) {
            failures.push(format!("{}: H = {} < 1/4", r.entry, r.entropy));
        }
    }
    let min = min.map_or("none".to_string(), |m| m.to_string());
    report(5, "non-regular H >= 1/4", failures, format!("smallest non-regular H = {min}"))
}

pub fn criterion_6(results: &[(CorpusEntry, Result<CorpusResult>)]) -> CriterionReport {
    let mut failures = Vec::new();
    let ok = corpus_failures(results, &mut failures);
    let mut checked = 0;
    let mut sharp = Vec::new();
    for r in &ok {
        let a = &r.entry.vector;
        if !single_bounded_edge(a) {
            continue;
        }
        checked += 1;
        let n = a.degree() as i64;
        let bound = Rat::from_integer(1) - Rat::new(2, n + 1);
        if r.entropy > bound {
            failures.push(format!("{}: H = {} > {bound}", r.entry, r.entropy));
        }
        let all_zero = a.entries().iter().all(|e| *e == ExtendedInt::Finite(0));
        if all_zero {
            sharp.push(format!("{}: {}", r.entry, r.entropy));
            if r.entropy != bound {
                failures.push(format!("{}: all-zero H = {} misses {bound}", r.entry, r.entropy));
            }
        }
    }
    report(
        6,
        "single-edge H <= 1 - 2/(n+1)",
        failures,
        format!("{checked} single-edge entries; all-zero attain [{}]", sharp.join(", ")),
    )
}

pub fn criterion_7(results: &[(CorpusEntry, Result<CorpusResult>)]) -> CriterionReport {
    let mut failures = Vec::new();
    let ok = corpus_failures(results, &mut failures);
    let mut largest = 0;
    for r in &ok {
        let p = &r.profile;
        match p.period {
            Some(period) if period <= 12 => {
                largest = largest.max(period);
                let res = &p.residuals;
                let bad = res
                    .iter()
                    .zip(res.iter().skip(period))
                    .find(|(x, y)| x.1 != y.1);
                if let Some((x, _)) = bad {
                    failures.push(format!("{}: r(s) not periodic at s={}", r.entry, x.0));
                }
            }
            Some(period) => failures.push(format!("{}: period {period} > 12", r.entry)),
            None => failures.push(format!("{}: no period up to s={}", r.entry, p.s_max())),
        }
    }
    report(
        7,
        "quasi-linearity",
        failures,
        format!("largest period {largest}, tables up to 4V"),
    )
}

pub fn criterion_8(results: &[(CorpusEntry, Result<CorpusResult>)]) -> CriterionReport {
    let mut failures = Vec::new();
    let ok = corpus_failures(results, &mut failures);
    for r in &ok {
        for c in r.audits.checks.iter().filter(|c| !c.passed) {
            failures.push(format!(
                "{}: {} fails at s={:?}: {}",
                r.entry,
                c.name,
                c.witness,
                c.detail.clone().unwrap_or_default()
            ));
        }
    }
    report(
        8,
        "inequality audits",
        failures,
        format!("{} profiles audited", ok.len()),
    )
}

/// Outcome counts of the structural sampling checks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StructuralStats {
    pub continuation_samples: usize,
    pub continuation_failures: Vec<String>,
    pub coverage_samples: usize,
    pub coverage_failures: Vec<String>,
    pub paths_checked: usize,
    pub path_failures: Vec<String>,
    pub bell_failures: Vec<String>,
}

fn random_rat<R: Rng + ?Sized>(rng: &mut R, span: i64) -> Rat {
    let den = *[1i64, 2, 3, 4].choose(rng).unwrap();
    Rat::new(rng.gen_range(-span * den..=span * den), den)
}

fn pick<R: Rng + ?Sized>(rng: &mut R, adm: &Admissible, m: i64) -> Option<Rat> {
    match *adm {
        Admissible::Point(p) => Some(p),
        Admissible::Interval(lo, hi) => {
            let k = rng.gen_range(2..=5i64);
            Some(lo + (hi - lo) * Rat::new(rng.gen_range(1..k), k))
        }
        Admissible::Ray(lo) => Some(lo + Rat::new(rng.gen_range(1..=12 * m), 4)),
        _ => None,
    }
}

/// One continuation sample: a point of a random vertex and a next value,
/// either drawn from a random edge or random near the point.
fn continuation_sample<R: Rng + ?Sized>(g: &RecurrenceGraph, rng: &mut R) -> Result<Option<String>> {
    let a = g.vector();
    let m = a.working_m();
    let v = rng.gen_range(0..g.vertex_count());
    let point = g.polyhedron(v).sample(rng)?;
    let point = point.values();
    let out: Vec<usize> = g.out_edges(v).map(|_| 0).collect();
    if out.is_empty() {
        return Ok(Some(format!("{}: vertex {} has no edge", a, g.vertices()[v])));
    }
    let x = if rng.gen_bool(0.5) {
        let idx = rng.gen_range(0..out.len());
        let e = g.out_edges(v).nth(idx).unwrap();
        let adm = g.admissible(e, point)?;
        match pick(rng, &adm, m) {
            Some(x) => x,
            None => {
                return Ok(Some(format!(
                    "{a}: edge {}->{} has admissible set {adm:?} at {point:?}",
                    e.from, e.to
                )))
            }
        }
    } else {
        let base = *point.choose(rng).unwrap();
        let shift = a.finite(*a.support().choose(rng).unwrap()).unwrap() - a.finite(a.support()[0]).unwrap();
        let jitter = *[Rat::from_integer(0), Rat::new(1, 2), Rat::new(-1, 3)].choose(rng).unwrap();
        base + Rat::from_integer(shift + rng.gen_range(-2 * m..=2 * m)) + jitter
    };
    let mut full = point.to_vec();
    full.push(x);
    let sat = satisfies_slice(a, &full);
    let matches = g.matching_edges(v, point, x)?;
    let want = usize::from(sat);
    if matches.len() != want {
        return Ok(Some(format!(
            "{a}: vertex {} point {point:?} x={x}: {} edges accept, satisfying={sat}",
            g.vertices()[v],
            matches.len()
        )));
    }
    if let [e] = matches[..] {
        let edge = &g.edges()[e];
        let adm = g.admissible(edge, point)?;
        let sound = match edge.label.kind {
            EdgeKind::Rigid => adm.is_single_point(),
            EdgeKind::Augmenting => !adm.is_single_point() && adm.has_positive_length(),
        };
        if !sound {
            return Ok(Some(format!(
                "{a}: {:?} edge {}->{} admits {adm:?}",
                edge.label, edge.from, edge.to
            )));
        }
    }
    Ok(None)
}

/// Every path with at most `max_len` edges from every vertex, as edge lists.
fn for_each_path(g: &RecurrenceGraph, max_len: usize, f: &mut dyn FnMut(usize, &[usize])) {
    fn rec(g: &RecurrenceGraph, start: usize, at: usize, max_len: usize, path: &mut Vec<usize>, f: &mut dyn FnMut(usize, &[usize])) {
        f(start, path);
        if path.len() == max_len {
            return;
        }
        let out: Vec<usize> = (0..g.edge_count()).filter(|&i| g.edges()[i].from == at).collect();
        for e in out {
            path.push(e);
            rec(g, start, g.edges()[e].to, max_len, path, f);
            path.pop();
        }
    }
    for v in 0..g.vertex_count() {
        rec(g, v, v, max_len, &mut Vec::new(), f);
    }
}

pub fn structural_checks(graphs: &[&RecurrenceGraph], cfg: &VerifyConfig) -> StructuralStats {
    let mut stats = StructuralStats::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    if graphs.is_empty() {
        return stats;
    }

    for i in 0..cfg.samples {
        let g = graphs[i % graphs.len()];
        stats.continuation_samples += 1;
        match continuation_sample(g, &mut rng) {
            Ok(None) => {}
            Ok(Some(msg)) => stats.continuation_failures.push(msg),
            Err(e) => stats.continuation_failures.push(format!("{}: {e}", g.vector())),
        }
    }

    let general: Vec<&&RecurrenceGraph> = graphs
        .iter()
        .filter(|g| g.construction() == Construction::General)
        .collect();
    for i in 0..cfg.samples {
        let g = if general.is_empty() {
            graphs[i % graphs.len()]
        } else {
            general[i % general.len()]
        };
        let span = 6 * g.vector().working_m() * g.degree() as i64;
        let point: Vec<Rat> = (0..g.degree()).map(|_| random_rat(&mut rng, span)).collect();
        stats.coverage_samples += 1;
        if g.vertices_containing(&point).is_empty() {
            stats.coverage_failures.push(format!("{}: {point:?} in no vertex", g.vector()));
        }
    }

    for g in graphs.iter().filter(|g| g.vertex_count() <= 50) {
        let mut count = 0;
        let mut bad = Vec::new();
        for_each_path(g, 8, &mut |start, edges| {
            count += 1;
            let sys = g.walk_edges(start, edges);
            let aug = edges
                .iter()
                .filter(|&&e| g.edges()[e].label.kind == EdgeKind::Augmenting)
                .count();
            let want = g.classes(start) + aug;
            match sys.dimension() {
                Ok(d) if d == want => {
                    if edges.len() == 8 {
                        let w = sys.witness().expect("feasible");
                        if !satisfies_slice(g.vector(), w.values()) {
                            bad.push(format!("{}: witness {w} of a path does not satisfy", g.vector()));
                        }
                    }
                }
                Ok(d) => bad.push(format!("{}: path from {start} {edges:?} has dim {d}, expected {want}", g.vector())),
                Err(e) => bad.push(format!("{}: path from {start} {edges:?}: {e}", g.vector())),
            }
        });
        stats.paths_checked += count;
        stats.path_failures.extend(bad);
    }

    let bell = [1, 3, 13, 75, 541];
    for n in 1..=5 {
        let zeros = vec![0i64; n + 1];
        let a = CoefficientVector::from_finite(&zeros).unwrap();
        match build_boolean(&a) {
            Ok(g) if g.vertex_count() == bell[n - 1] => {}
            Ok(g) => stats
                .bell_failures
                .push(format!("n={n}: {} vertices, expected {}", g.vertex_count(), bell[n - 1])),
            Err(e) => stats.bell_failures.push(format!("n={n}: {e}")),
        }
    }
    stats
}

pub fn criterion_9(results: &[(CorpusEntry, Result<CorpusResult>)], cfg: &VerifyConfig) -> CriterionReport {
    let mut failures = Vec::new();
    let ok = corpus_failures(results, &mut failures);
    let graphs: Vec<&RecurrenceGraph> = ok.iter().map(|r| &r.graph).collect();
    let stats = structural_checks(&graphs, cfg);
    let summary = format!(
        "{} continuations ({} failed), {} coverage points ({} uncovered), {} paths ({} bad), Bell counts {}",
        stats.continuation_samples,
        stats.continuation_failures.len(),
        stats.coverage_samples,
        stats.coverage_failures.len(),
        stats.paths_checked,
        stats.path_failures.len(),
        if stats.bell_failures.is_empty() { "ok" } else { "wrong" }
    );
    for list in [
        &stats.continuation_failures,
        &stats.coverage_failures,
        &stats.path_failures,
        &stats.bell_failures,
    ] {
        failures.extend(list.iter().take(5).cloned());
    }
    report(9, "structural properties", failures, summary)
}

/// Exhaustive feasibility on the grid `Z / (dim + 1)` for systems with
/// integer bounds in `[-3, 3]`.
///
/// The grid is enough: shortest-path potentials with strict bounds lowered
/// by `1/(dim + 1)` solve any feasible system and lie on it, within
/// `3(dim - 1) + 1` of the root of their component. Roots are pinned at 0
/// and the search fixes one coordinate at a time, pruning the remaining
/// domains after each choice.
pub fn grid_feasible(sys: &ConstraintSystem) -> bool {
    let n = sys.dim();
    let den = n as i64 + 1;
    let reach = (3 * (n as i64 - 1).max(0) + 1) * den;
    let width = (2 * reach + 1) as usize;
    // (u, v, kind, bound) in grid units
    let cons: Vec<(usize, usize, Relation, i64)> = sys
        .constraints()
        .iter()
        .map(|c| (c.u, c.v, c.kind, (c.bound * Rat::from_integer(den)).to_integer()))
        .collect();
    let holds = |kind: Relation, diff: i64, b: i64| match kind {
        Relation::Eq => diff == b,
        Relation::Le => diff <= b,
        Relation::Lt => diff < b,
    };

    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let mut domains = vec![vec![true; width]; n];
    for root in 0..n {
        if placed[root] {
            continue;
        }
        placed[root] = true;
        domains[root] = (0..width).map(|i| i as i64 == reach).collect();
        order.push(root);
        let mut i = order.len() - 1;
        while i < order.len() {
            let u = order[i];
            for &(x, y, _, _) in &cons {
                for (p, q) in [(x, y), (y, x)] {
                    if p == u && !placed[q] {
                        placed[q] = true;
                        order.push(q);
                    }
                }
            }
            i += 1;
        }
    }

    fn search(
        k: usize,
        order: &[usize],
        domains: &[Vec<bool>],
        cons: &[(usize, usize, Relation, i64)],
        reach: i64,
        holds: &dyn Fn(Relation, i64, i64) -> bool,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let x = order[k];
        for (i, _) in domains[x].iter().enumerate().filter(|(_, &ok)| ok) {
            let val = i as i64 - reach;
            let mut next = domains.to_vec();
            next[x] = domains[x].iter().enumerate().map(|(j, _)| j == i).collect();
            let mut dead = false;
            for &(u, v, kind, b) in cons {
                let (other, sign) = if u == x && v != x {
                    (v, 1)
                } else if v == x && u != x {
                    (u, -1)
                } else {
                    continue;
                };
                for (j, slot) in next[other].iter_mut().enumerate() {
                    if *slot {
                        let w = j as i64 - reach;
                        let diff = if sign == 1 { val - w } else { w - val };
                        *slot = holds(kind, diff, b);
                    }
                }
                if next[other].iter().all(|s| !s) {
                    dead = true;
                    break;
                }
            }
            if !dead && search(k + 1, order, &next, cons, reach, holds) {
                return true;
            }
        }
        false
    }
    search(0, &order, &domains, &cons, reach, &holds)
}

/// A random system on at most 5 coordinates with integer bounds in
/// `[-3, 3]`.
pub fn random_system<R: Rng + ?Sized>(rng: &mut R) -> ConstraintSystem {
    let dim = rng.gen_range(1..=5);
    let mut sys = ConstraintSystem::new(dim);
    if dim < 2 {
        return sys;
    }
    for _ in 0..rng.gen_range(0..=2 * dim) {
        let u = rng.gen_range(0..dim);
        let mut v = rng.gen_range(0..dim - 1);
        if v >= u {
            v += 1;
        }
        let kind = *[Relation::Eq, Relation::Le, Relation::Lt, Relation::Lt].choose(rng).unwrap();
        sys.add(u, v, kind, rng.gen_range(-3..=3i64));
    }
    sys
}

pub fn criterion_10(cfg: &VerifyConfig) -> CriterionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xd1ff);
    let systems: Vec<ConstraintSystem> = (0..cfg.random_systems).map(|_| random_system(&mut rng)).collect();
    let outcomes: Vec<Option<String>> = systems
        .par_iter()
        .map(|sys| {
            let fast = sys.feasible();
            let slow = grid_feasible(sys);
            if fast != slow {
                return Some(format!("feasible {fast}, grid {slow}: {:?}", sys.constraints()));
            }
            if fast {
                match sys.witness() {
                    Ok(w) if sys.contains(w.values()) => {}
                    Ok(w) => return Some(format!("witness {w} fails {:?}", sys.constraints())),
                    Err(e) => return Some(format!("witness: {e}")),
                }
            }
            None
        })
        .collect();
    let feasible = systems.iter().filter(|s| s.feasible()).count();
    let failures: Vec<String> = outcomes.into_iter().flatten().take(10).collect();
    report(
        10,
        "difference-constraint feasibility",
        failures,
        format!("{} systems, {feasible} feasible", systems.len()),
    )
}
