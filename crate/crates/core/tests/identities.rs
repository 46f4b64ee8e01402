//! The worked examples and closed forms: the rank-3 diagonal basis and
//! character data, the rank-2 closed expression, the two-point identities
//! and the multi-parameter and exterior-square variants.

use num_traits::Zero;
use parchi::characters::character;
use parchi::diagonal_trees::{enumerate_diagonal, example_rank3, is_diagonal};
use parchi::euler_formulas::rank2::{
    fact1_rhs, rank2_closed, rank2_two_point, substitution_residuals, TwoPointSide,
};
use parchi::euler_formulas::{chi_multi, chi_vector, chi_wedge2, chi_line, chi_line_main_form};
use parchi::rational::{q, qf};
use parchi::root_system::{chamber_point_near_theta, killing_dual, Root, WallSpec};
use parchi::{CharacterSum, CoVector, EulerQuery, EvalOptions, HighestWeight, LatticePoint};

fn opts() -> EvalOptions {
    EvalOptions::default()
}

fn lp(v: &[i64]) -> LatticePoint {
    LatticePoint::from_i64s(v).unwrap()
}

fn hw(v: &[i64]) -> HighestWeight {
    HighestWeight::new(v.to_vec()).unwrap()
}

fn rank2_c() -> CoVector {
    CoVector::new(vec![qf(3, 10), qf(-3, 10)]).unwrap()
}

fn e(c: &[(i64, i64)]) -> CoVector {
    CoVector::new(c.iter().map(|&(n, d)| qf(n, d)).collect()).unwrap()
}

#[test]
fn rank3_example_basis_is_diagonal() {
    let d = example_rank3();
    assert_eq!(d.trees().len(), 2);
    assert!(is_diagonal(d.trees()));
    assert_eq!(d.to_json(), vec![vec![[2, 3], [1, 2]], vec![[3, 2], [1, 3]]]);
}

#[test]
fn diagonal_basis_sizes_are_factorials() {
    for (r, n) in [(2, 1), (3, 2), (4, 6)] {
        let d = enumerate_diagonal(r).unwrap();
        assert_eq!(d.trees().len(), n);
        assert!(is_diagonal(d.trees()));
    }
}

#[test]
fn standard_rank3_character_data() {
    // in sum-zero coordinates e^{(2α¹²+α²³)/3} = e^{x₁} and so on
    let x1 = e(&[(2, 3), (-1, 3), (-1, 3)]);
    let x2 = e(&[(-1, 3), (2, 3), (-1, 3)]);
    let x3 = e(&[(-1, 3), (-1, 3), (2, 3)]);
    let phi = character(&hw(&[1, 0, 0]));
    let want = CharacterSum::exponential(x1.clone())
        .add(&CharacterSum::exponential(x2.clone()))
        .add(&CharacterSum::exponential(x3.clone()));
    assert_eq!(phi, want);

    let a12 = killing_dual(&Root::new(1, 2, 3).unwrap().covector(3));
    let a23 = killing_dual(&Root::new(2, 3, 3).unwrap().covector(3));
    let d12 = CharacterSum::exponential(x1).add(&CharacterSum::exponential(x2.clone()).scale(&q(-1)));
    let d23 = CharacterSum::exponential(x2).add(&CharacterSum::exponential(x3).scale(&q(-1)));
    assert_eq!(phi.directional_derivative(&a12), d12);
    assert_eq!(phi.directional_derivative(&a23), d23);
    assert_eq!(phi.hessian_trace(), phi.scale(&qf(2, 3)));
}

#[test]
fn rank2_closed_form_agrees_with_residue_sum() {
    let d = enumerate_diagonal(2).unwrap();
    for (g, k, l, nu) in [(2, 1, 0, [1, 0]), (2, 3, 2, [2, 1]), (3, 2, 1, [2, 0]), (3, 4, 4, [1, 0])] {
        let qr = EulerQuery::new(g, k, lp(&[l, -l]), vec![hw(&nu)], rank2_c(), d.clone()).unwrap();
        let a = chi_vector(&qr, &opts()).unwrap().value;
        let b = rank2_closed(g, k, l, &hw(&nu), &opts()).unwrap();
        assert_eq!(a, b, "g={g} k={k} λ₁={l} ν={nu:?}");
        assert!(a.is_integer());
    }
}

#[test]
fn rank2_closed_form_vanishes_for_trivial_representation() {
    for k in 1..=3 {
        assert!(rank2_closed(2, k, 1, &hw(&[0, 0]), &opts()).unwrap().is_zero());
    }
}

#[test]
fn two_point_difference_and_substitutions() {
    for (g, k, l, m, nu) in [(2, 1, 0, 0, [1, 0]), (2, 2, -1, 2, [2, 1]), (3, 3, 2, -2, [1, 0])] {
        let n = hw(&nu);
        let gt = rank2_two_point(g, k, l, m, &n, TwoPointSide::Greater, &opts()).unwrap();
        let lt = rank2_two_point(g, k, l, m, &n, TwoPointSide::Less, &opts()).unwrap();
        assert_eq!(&gt - &lt, fact1_rhs(g, k, l, m, &n, &opts()).unwrap());
        let s = substitution_residuals(g, k, l, m, &n, &opts()).unwrap();
        assert!(s.all_zero(), "{s:?}");
    }
}

#[test]
fn two_point_at_zero_reduces_to_one_point() {
    for (k, l, nu) in [(1, 0, [1, 0]), (2, 1, [2, 1]), (3, 3, [2, 0])] {
        let n = hw(&nu);
        let r = rank2_two_point(2, k, l, 0, &n, TwoPointSide::Greater, &opts()).unwrap();
        assert_eq!(r, rank2_closed(2, k, l, &n, &opts()).unwrap());
    }
}

#[test]
fn last_substitution_needs_the_positive_correction() {
    // the opposite sign of the correction term leaves a nonzero residual
    let s = substitution_residuals(2, 2, 1, 1, &hw(&[1, 0]), &opts()).unwrap();
    assert!(s.d.is_zero());
    assert!(!s.d_alt.is_zero());
}

#[test]
fn rank3_walls_are_canonical() {
    assert!(WallSpec::new(3, vec![2], 0).is_ok());
    assert!(WallSpec::new(3, vec![1, 3], 0).is_err());
}

#[test]
fn line_bundle_scaled_and_unscaled_forms_agree() {
    let d = enumerate_diagonal(3).unwrap();
    let c = chamber_point_near_theta(3, true).unwrap();
    for (k, l) in [(1, [0, 0, 0]), (2, [1, 0, -1]), (2, [-3, 1, 2])] {
        let qr = EulerQuery::new(2, k, lp(&l), vec![], c.clone(), d.clone()).unwrap();
        assert_eq!(
            chi_line(&qr, &opts()).unwrap().value,
            chi_line_main_form(&qr, &opts()).unwrap().value
        );
    }
}

#[test]
fn multi_parameter_specializations() {
    let d = enumerate_diagonal(3).unwrap();
    let c = chamber_point_near_theta(3, true).unwrap();
    let base = EulerQuery::new(2, 1, lp(&[1, 0, -1]), vec![hw(&[1, 0, 0])], c, d).unwrap();
    let one = chi_multi(&base, &opts()).unwrap().value;
    assert_eq!(one, chi_vector(&base, &opts()).unwrap().value);

    let with_zero = base.with_nus(vec![hw(&[1, 0, 0]), hw(&[0, 0, 0])]);
    assert!(chi_multi(&with_zero, &opts()).unwrap().value.is_zero());

    let ab = base.with_nus(vec![hw(&[1, 0, 0]), hw(&[1, 1, 0])]);
    let ba = base.with_nus(vec![hw(&[1, 1, 0]), hw(&[1, 0, 0])]);
    let x = chi_multi(&ab, &opts()).unwrap().value;
    assert_eq!(x, chi_multi(&ba, &opts()).unwrap().value);
    assert!(x.is_integer());
}

#[test]
fn exterior_square_is_integral() {
    let d2 = enumerate_diagonal(2).unwrap();
    for g in 2..=3 {
        for k in 1..=3 {
            for nu in [[1, 0], [2, 0], [2, 1]] {
                let qr = EulerQuery::new(g, k, lp(&[0, 0]), vec![hw(&nu)], rank2_c(), d2.clone()).unwrap();
                let v = chi_wedge2(&qr, &opts()).unwrap();
                assert!(v.is_integral(), "g={g} k={k} ν={nu:?}: {}", v.value);
            }
        }
    }
    let d3 = enumerate_diagonal(3).unwrap();
    let c = chamber_point_near_theta(3, true).unwrap();
    let qr = EulerQuery::new(2, 1, lp(&[0, 0, 0]), vec![hw(&[1, 0, 0])], c, d3).unwrap();
    assert_eq!(chi_wedge2(&qr, &opts()).unwrap().value, q(12));
}

#[test]
fn exterior_square_of_trivial_representation_vanishes() {
    let d2 = enumerate_diagonal(2).unwrap();
    let qr = EulerQuery::new(2, 2, lp(&[1, -1]), vec![hw(&[0, 0])], rank2_c(), d2).unwrap();
    assert!(chi_wedge2(&qr, &opts()).unwrap().value.is_zero());
}
