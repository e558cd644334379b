//! Worked examples for each module. Hilbert values are affine dimensions:
//! one more than the projective closed forms `ceil(s/3)` and `ceil(s/4)`.

use tropical_hilbert::analysis::{
    audit_bounds, audit_table, entropy_graph, entropy_theorems_check, hilbert_graph, hilbert_graph_table,
    projective, quasilinearity, simple_cycle_entropy,
};
use tropical_hilbert::graph::{
    build, build_boolean, build_general, Admissible, CaseTag, Descriptor, EdgeKind, WeakOrder,
};
use tropical_hilbert::oracle::{enumerate_cells, fekete_entropy_estimate, hilbert_oracle, DEFAULT_BUDGET};
use tropical_hilbert::sequence::connected_gap_violations;
use tropical_hilbert::{CoefficientVector, FiniteSequence, Rat};

fn v(s: &str) -> CoefficientVector {
    CoefficientVector::parse(s).unwrap()
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn int(n: i64) -> Rat {
    Rat::from_integer(n)
}

#[test]
fn oracle_table_values() {
    assert_eq!(hilbert_oracle(&v("0,0,0"), 6).unwrap(), 2 + 1);
    assert_eq!(hilbert_oracle(&v("0,1,0"), 5).unwrap(), 2 + 1);
    assert_eq!(hilbert_oracle(&v("0,inf,0"), 8).unwrap(), 2);
}

#[test]
fn single_cell_for_0_0() {
    let cells = enumerate_cells(&v("0,0"), 3, DEFAULT_BUDGET).unwrap();
    assert_eq!(cells.len(), 1);
    assert_eq!(cells[0].pattern.windows, vec![vec![0, 1], vec![0, 1]]);
    assert_eq!(cells[0].dimension, 1);
}

#[test]
fn fekete_brackets_contain_the_graph_entropy() {
    for (a, s_max, h) in [("0,1,0", 12, r(1, 4)), ("0,0,0", 12, r(1, 3)), ("0,1", 8, int(0))] {
        let b = fekete_entropy_estimate(&v(a), s_max, DEFAULT_BUDGET).unwrap();
        assert!(b.contains(h), "{a}: [{}, {}]", b.lower, b.upper);
        assert_eq!(entropy_graph(&build(&v(a)).unwrap()), h);
    }
}

#[test]
fn oracle_witnesses_have_close_connected_neighbours() {
    for a in ["0,0,0", "0,1,0", "0,2,1", "1,0,2"] {
        let a = v(a);
        for cell in enumerate_cells(&a, 7, DEFAULT_BUDGET).unwrap() {
            assert!(connected_gap_violations(&a, &cell.witness).unwrap().is_empty(), "{}", cell.witness);
        }
    }
}

#[test]
fn general_graph_of_0_0() {
    let g = build_general(&v("0,0")).unwrap();
    assert_eq!(g.vertex_count(), 1);
    assert_eq!(g.edge_count(), 1);
    let e = &g.edges()[0];
    assert_eq!((e.from, e.to, e.label.kind), (0, 0, EdgeKind::Rigid));
    assert_eq!(entropy_graph(&g), int(0));
    assert_eq!(hilbert_graph_table(&g, 10), vec![1; 10]);

    let q = r(7, 3);
    let (edge, range) = g.step(0, &[q], q).unwrap();
    assert_eq!(edge, 0);
    assert_eq!(range, Admissible::Point(q));

    let walk = g.walk(&[0]).unwrap();
    assert_eq!(walk.dimension().unwrap(), 1);
}

#[test]
fn general_graph_of_0_1_0() {
    let g = build_general(&v("0,1,0")).unwrap();
    assert_eq!(entropy_graph(&g), r(1, 4));
    assert_eq!(g.stats().out_of_range, 0);
}

#[test]
fn boolean_graph_of_degree_two() {
    let g = build_boolean(&v("0,inf,0")).unwrap();
    assert_eq!(g.vertex_count(), 3);
    assert_eq!(entropy_graph(&g), int(0));
    let table = hilbert_graph_table(&g, 20);
    assert!(table[1..].iter().all(|&d| d == 2));
}

#[test]
fn boolean_graph_of_0_0_0() {
    let g = build_boolean(&v("0,0,0")).unwrap();
    let table = projective(&hilbert_graph_table(&g, 40));
    for s in 3..=40 {
        assert_eq!(table[s - 1], s.div_ceil(3), "s = {s}");
    }
}

#[test]
fn step_from_tied_pair() {
    let g = build_boolean(&v("0,0,0")).unwrap();
    let tied = g
        .find_vertex(&Descriptor::Boolean(WeakOrder::from_ranks(&[0, 0])))
        .unwrap();
    let point = [int(0), int(0)];
    let mut ranges: Vec<(EdgeKind, Admissible)> = g
        .out_edges(tied)
        .map(|e| (e.label.kind, g.admissible(e, &point).unwrap()))
        .filter(|(_, a)| *a != Admissible::Empty)
        .collect();
    ranges.sort_by_key(|(k, _)| *k == EdgeKind::Augmenting);
    assert_eq!(
        ranges,
        vec![(EdgeKind::Rigid, Admissible::Point(int(0))), (EdgeKind::Augmenting, Admissible::Ray(int(0)))]
    );

    let (e, range) = g.step(tied, &point, r(1, 2)).unwrap();
    assert_eq!(g.edges()[e].label.kind, EdgeKind::Augmenting);
    assert!(range.has_positive_length());
    let (e, _) = g.step(tied, &point, int(0)).unwrap();
    assert_eq!(g.edges()[e].label.case, CaseTag::I);
    assert!(g.step(tied, &point, int(-1)).is_err());
}

#[test]
fn walks_have_the_predicted_dimension() {
    let g = build_general(&v("0,1,0")).unwrap();
    let mut paths: Vec<Vec<usize>> = (0..g.vertex_count()).map(|v| vec![v]).collect();
    let mut checked = 0;
    for _ in 0..5 {
        let mut next = Vec::new();
        for p in &paths {
            let q = g.walk(p).unwrap();
            let expected = g.classes(p[0]) + g.augmenting_count(p).unwrap();
            if q.feasible() {
                assert_eq!(q.dimension().unwrap(), expected, "path {p:?}");
                checked += 1;
            }
            for e in g.out_edges(*p.last().unwrap()) {
                let mut longer = p.clone();
                longer.push(e.to);
                next.push(longer);
            }
        }
        paths = next;
    }
    assert!(checked > 100);
    assert!(g.walk(&[]).is_err());
}

#[test]
fn trace_follows_a_witness() {
    let a = v("0,1,0");
    let g = build(&a).unwrap();
    let y = FiniteSequence::from_ints(&[0, 0, 0, 0, 0, 0]);
    let paths = g.trace(&y).unwrap();
    assert_eq!(paths.len(), 1);
    assert_eq!(paths[0].len(), 5);
}

#[test]
fn graph_hilbert_values() {
    assert_eq!(hilbert_graph(&build(&v("0,0,0")).unwrap(), 7), 3 + 1);
    assert_eq!(hilbert_graph(&build(&v("0,1,0")).unwrap(), 8), 2 + 1);
}

#[test]
fn entropy_of_all_zero_cubic_boolean() {
    assert_eq!(entropy_graph(&build_boolean(&v("0,0,0,0")).unwrap()), r(1, 2));
}

#[test]
fn karp_matches_cycle_listing_on_small_graphs() {
    let mut vectors = vec!["0,inf,0".to_string(), "0,inf,inf,0".to_string()];
    for x in 0..3 {
        for y in 0..3 {
            vectors.push(format!("{x},{y}"));
            for z in 0..3 {
                vectors.push(format!("{x},{y},{z}"));
            }
        }
    }
    let mut checked = 0;
    for a in &vectors {
        let g = build(&v(a)).unwrap();
        if g.vertex_count() <= 12 {
            assert_eq!(entropy_graph(&g), simple_cycle_entropy(&g).unwrap(), "{a}");
            checked += 1;
        }
    }
    assert!(checked >= 10, "{checked}");
}

#[test]
fn quasilinearity_of_0_1_0() {
    let g = build(&v("0,1,0")).unwrap();
    let p = quasilinearity(&g, 40);
    assert_eq!(p.entropy, Some(r(1, 4)));
    assert_eq!(p.period, Some(4));
    let s0 = p.regularity_index.unwrap();
    let tail: Vec<Rat> = p.residuals.iter().map(|(_, x)| *x).collect();
    assert_eq!(p.residuals[0].0, s0);
    for (i, x) in tail.iter().enumerate() {
        let s = (s0 + i) as i64;
        assert_eq!(*x, int((s + 3) / 4 + 1) - r(s, 4));
        assert!([r(7, 4), r(3, 2), r(5, 4), int(1)].contains(x));
    }
}

#[test]
fn quasilinearity_periods() {
    let p = quasilinearity(&build(&v("0,0,0")).unwrap(), 40);
    assert_eq!((p.entropy, p.period), (Some(r(1, 3)), Some(3)));
    let p = quasilinearity(&build(&v("0,1")).unwrap(), 20);
    assert_eq!((p.entropy, p.period), (Some(int(0)), Some(1)));
    assert!(p.samples.iter().all(|&d| d == 1));
}

#[test]
fn audits_pass_on_examples() {
    let g = build(&v("0,1,0")).unwrap();
    let p = quasilinearity(&g, 16);
    assert!(audit_bounds(&p, &g).passed());
    let g = build(&v("0,0")).unwrap();
    let p = quasilinearity(&g, 16);
    let report = audit_bounds(&p, &g);
    assert!(report.passed());
}

#[test]
fn audit_flags_a_corrupted_table() {
    let g = build(&v("0,1,0")).unwrap();
    let mut table = hilbert_graph_table(&g, 16);
    table[9] += 2;
    let report = audit_table(2, g.vertex_count(), r(1, 4), &table, Some((4, 3)));
    assert!(!report.passed());
    let step = report.check("monotone_step").unwrap();
    assert!(!step.passed);
    assert_eq!(step.witness, Some(9));
    assert!(!report.check("subadditivity").unwrap().passed);
    assert!(report.check("lower_bound").unwrap().passed);

    table[9] -= 2;
    table[12] = 0;
    let report = audit_table(2, g.vertex_count(), r(1, 4), &table, None);
    assert_eq!(report.check("lower_bound").unwrap().witness, Some(13));
}

#[test]
fn entropy_theorem_reports() {
    let rep = entropy_theorems_check(&v("0,1,0")).unwrap();
    assert!(rep.passed() && !rep.regular && rep.single_bounded_edge);
    assert_eq!((rep.entropy, rep.upper_bound), (r(1, 4), r(1, 3)));
    let rep = entropy_theorems_check(&v("0,0,0")).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.entropy, rep.upper_bound);
    let rep = entropy_theorems_check(&v("0,1")).unwrap();
    assert!(rep.passed() && rep.regular);
    assert_eq!(rep.entropy, int(0));
}

#[test]
fn profile_json_is_deterministic() {
    let g = build(&v("0,2,1")).unwrap();
    let mut p = quasilinearity(&g, 24);
    p.audits = Some(audit_bounds(&p, &g));
    let a = serde_json::to_string(&p).unwrap();
    let b = serde_json::to_string(&quasilinearity(&g, 24).to_json()).unwrap();
    assert_eq!(a, serde_json::to_string(&p.to_json()).unwrap());
    let value: serde_json::Value = serde_json::from_str(&a).unwrap();
    let keys: Vec<&String> = value.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(value["H"].is_string());
    assert!(a.len() > b.len());
}
