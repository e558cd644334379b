use proptest::prelude::*;

use tropical_hilbert::analysis::hilbert_graph_table;
use tropical_hilbert::diffcon::{ConstraintSystem, Relation};
use tropical_hilbert::graph::build;
use tropical_hilbert::oracle::{hilbert_table, DEFAULT_BUDGET};
use tropical_hilbert::verify::grid_feasible;
use tropical_hilbert::{
    is_regular, newton_polygon, satisfies, single_bounded_edge, CoefficientVector, ExtendedInt, FiniteSequence,
    Rat,
};

type Raw = (usize, usize, u8, i64);

fn system(dim: usize, raw: &[Raw]) -> ConstraintSystem {
    let mut sys = ConstraintSystem::new(dim);
    for &(u, v, k, b) in raw.iter().filter(|c| c.0 != c.1) {
        let kind = match k {
            0 => Relation::Eq,
            1 => Relation::Le,
            _ => Relation::Lt,
        };
        sys.add(u, v, kind, Rat::from_integer(b));
    }
    sys
}

fn raw_constraints() -> impl Strategy<Value = (usize, Vec<Raw>)> {
    (1usize..=5).prop_flat_map(|dim| {
        (
            Just(dim),
            prop::collection::vec((0..dim, 0..dim, 0u8..3, -3i64..=3), 0..9),
        )
    })
}

fn coefficient_vector() -> impl Strategy<Value = CoefficientVector> {
    prop::collection::vec(prop::option::weighted(0.8, -3i64..=3), 2..=5)
        .prop_filter_map("needs two finite entries", |e| {
            let entries = e
                .into_iter()
                .map(|x| x.map_or(ExtendedInt::Infinite, ExtendedInt::Finite))
                .collect();
            CoefficientVector::new(entries).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn feasibility_matches_grid((dim, raw) in raw_constraints()) {
        let sys = system(dim, &raw);
        prop_assert_eq!(sys.feasible(), grid_feasible(&sys));
        if sys.feasible() {
            let w = sys.witness().unwrap();
            prop_assert!(sys.contains(w.values()));
        } else {
            prop_assert!(sys.witness().is_err());
        }
    }

    #[test]
    fn dropping_constraints_keeps_feasibility((dim, raw) in raw_constraints(), cut in 0usize..9) {
        let full = system(dim, &raw);
        let part = system(dim, &raw[..cut.min(raw.len())]);
        if full.feasible() {
            prop_assert!(part.feasible());
            prop_assert!(full.dimension().unwrap() <= part.dimension().unwrap());
        }
    }

    #[test]
    fn regularity_is_affine_invariant(a in coefficient_vector(), slope in -3i64..=3, shift in -3i64..=3) {
        let b = a.affine_transform(slope, shift);
        prop_assert_eq!(is_regular(&a), is_regular(&b));
        prop_assert_eq!(single_bounded_edge(&a), single_bounded_edge(&b));
        let shifted: Vec<(i64, i64)> = newton_polygon(&a)
            .vertices()
            .iter()
            .map(|&(i, v)| (i, v + slope * i + shift))
            .collect();
        prop_assert_eq!(newton_polygon(&b).vertices().to_vec(), shifted);
    }

    #[test]
    fn satisfaction_is_shift_invariant(a in coefficient_vector(), ys in prop::collection::vec(-2i64..=2, 6), c in -5i64..=5) {
        let y = FiniteSequence::from_ints(&ys);
        let moved: Vec<i64> = ys.iter().map(|v| v + c).collect();
        prop_assert_eq!(satisfies(&a, &y).unwrap(), satisfies(&a, &FiniteSequence::from_ints(&moved)).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_and_graph_agree(entries in prop::collection::vec(0i64..=3, 2..=4)) {
        let a = CoefficientVector::from_finite(&entries).unwrap();
        let g = build(&a).unwrap();
        let s_max = if a.degree() == 3 { 7 } else { 9 };
        let oracle = hilbert_table(&a, s_max, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(oracle, hilbert_graph_table(&g, s_max));
    }
}
