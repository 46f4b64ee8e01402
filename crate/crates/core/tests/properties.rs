//! Randomized invariants. Residue evaluations are costly, so those
//! properties run on a handful of cases each.

use num_traits::Zero;
use parchi::characters::{character, weyl_dimension};
use parchi::diagonal_trees::{enumerate_diagonal, enumerate_diagonal_sets, example_rank3};
use parchi::euler_formulas::rank2::rank2_closed;
use parchi::euler_formulas::shift::{random_instance, trivial_shift_sides};
use parchi::euler_formulas::{chi_line, chi_vector};
use parchi::laurent_engine::{exp_series, LinearFormY, NestedLaurent};
use parchi::rational::{fmt_q, parse_q, q, qf};
use parchi::root_system::{bracket, chamber_point_near_theta, classify_chamber, is_regular, in_simplex, ChamberRelation};
use parchi::{CoVector, EulerQuery, EvalOptions, HighestWeight, LatticePoint, Q};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn opts() -> EvalOptions {
    EvalOptions::default()
}

fn lp(v: &[i64]) -> LatticePoint {
    LatticePoint::from_i64s(v).unwrap()
}

fn hw(v: &[i64]) -> HighestWeight {
    HighestWeight::new(v.to_vec()).unwrap()
}

fn same_series(a: &NestedLaurent, b: &NestedLaurent) -> bool {
    let cap = a.cap().min(b.cap());
    a.sub(b).truncate(cap).terms().all(|(_, c)| c.is_zero())
}

fn dominant(r: usize, max: i64) -> impl Strategy<Value = HighestWeight> {
    prop::collection::vec(0..=max, r).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        HighestWeight::new(v).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..5_000) {
        let x = qf(n, d);
        prop_assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x);
    }

    #[test]
    fn exponentials_multiply(a in -6i64..6, b in -6i64..6, c in -6i64..6, d in -6i64..6) {
        let l1 = LinearFormY::new(vec![qf(a, 3), qf(b, 2)]);
        let l2 = LinearFormY::new(vec![qf(c, 5), q(d)]);
        let sum = LinearFormY::new(vec![qf(a, 3) + qf(c, 5), qf(b, 2) + q(d)]);
        let cap = 8;
        let prod = exp_series(&l1, None, cap).unwrap().mul_capped(&exp_series(&l2, None, cap).unwrap(), cap);
        prop_assert!(same_series(&prod, &exp_series(&sum, None, cap).unwrap()));
    }

    #[test]
    fn character_at_zero_is_dimension(nu in (2usize..=4).prop_flat_map(|r| dominant(r, 3))) {
        prop_assert_eq!(character(&nu).at_zero(), weyl_dimension(&nu));
    }

    #[test]
    fn adams_twist_scales_hessian_trace(nu in dominant(3, 3), n in 1i64..4) {
        let phi = character(&nu);
        let lhs = phi.adams_twist(n).hessian_trace();
        let rhs = phi.hessian_trace().adams_twist(n).scale(&q(n * n));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_splits_into_floor_and_fraction(a in -20i64..20, b in -20i64..20, den in 1i64..9) {
        let c = CoVector::new(vec![qf(a, den), qf(b, den), qf(-a - b, den)]).unwrap();
        for tree in example_rank3().trees() {
            let basis = tree.to_basis().unwrap();
            let br = bracket(&c, &basis).unwrap();
            prop_assert_eq!(br.integral.add(&br.fractional), c.clone());
            prop_assert!(br.integral.is_integral());
            let t = parchi::root_system::expand_in_basis(&br.fractional, &basis).unwrap();
            for x in t {
                prop_assert!(x >= Q::zero() && x < q(1));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rank2_values_are_integers(g in 2i64..=3, k in 1i64..=4, l in -3i64..=5, nu in dominant(2, 2)) {
        let v = rank2_closed(g, k, l, &nu, &opts()).unwrap();
        prop_assert!(v.is_integer(), "{}", v);
    }

    #[test]
    fn rank2_chamber_constancy(t in 1i64..50, k in 1i64..=3, l in 0i64..=3) {
        // every regular c = (s, −s) with 0 < s < 1/2 lies in the one chamber
        let s = qf(t, 101);
        let c = CoVector::new(vec![s.clone(), -s]).unwrap();
        let base = CoVector::new(vec![qf(3, 10), qf(-3, 10)]).unwrap();
        let d = enumerate_diagonal(2).unwrap();
        let at = |c: &CoVector| {
            let qr = EulerQuery::new(2, k, lp(&[l, -l]), vec![hw(&[1, 0])], c.clone(), d.clone()).unwrap();
            chi_vector(&qr, &opts()).unwrap().value
        };
        prop_assert_eq!(at(&c), at(&base));
    }

    #[test]
    fn rank3_chamber_constancy(dx in -5i64..=5, dy in -5i64..=5, plus in any::<bool>(), a in -2i64..=2, b in -2i64..=2) {
        let c0 = chamber_point_near_theta(3, plus).unwrap();
        let eps = qf(1, 100_003);
        let step = CoVector::new(vec![q(dx) * &eps, q(dy) * &eps, q(-dx - dy) * &eps]).unwrap();
        let c1 = c0.add(&step);
        prop_assume!(is_regular(&c1) && in_simplex(&c1));
        prop_assume!(classify_chamber(&c0, &c1).unwrap() == ChamberRelation::SameChamber);
        let d = example_rank3();
        let at = |c: &CoVector| {
            let qr = EulerQuery::new(2, 1, lp(&[a, b, -a - b]), vec![], c.clone(), d.clone()).unwrap();
            chi_line(&qr, &opts()).unwrap().value
        };
        prop_assert_eq!(at(&c0), at(&c1));
    }

    #[test]
    fn rank3_line_bundles_basis_independent(a in -3i64..=3, b in -3i64..=3, k in 1i64..=2) {
        let sets = enumerate_diagonal_sets(3, 4).unwrap();
        let c = chamber_point_near_theta(3, true).unwrap();
        let vals: Vec<Q> = sets
            .iter()
            .map(|d| {
                let qr = EulerQuery::new(2, k, lp(&[a, b, -a - b]), vec![], c.clone(), d.clone()).unwrap();
                chi_line(&qr, &opts()).unwrap().value
            })
            .collect();
        prop_assert!(vals.windows(2).all(|w| w[0] == w[1]), "{:?}", vals);
        prop_assert!(vals[0].is_integer());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn argument_shift_holds(seed in any::<u64>(), r in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, r).unwrap();
        let sides = trivial_shift_sides(&inst, &opts()).unwrap();
        prop_assert!(sides.holds(), "{:?}", sides);
    }
}
