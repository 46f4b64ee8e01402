//! Values from computations that share no code with the residue engine:
//! trigonometric Verlinde sums, the SU(3) Verlinde formula evaluated with
//! the Kac-Peterson S-matrix in 40-digit floating point, symbolic series
//! expansion of the rank-3 wall term, and the two weight-multiplicity
//! algorithms checked against each other.

use parchi::characters::{weight_table_freudenthal, weight_table_gt, weyl_dimension};
use parchi::diagonal_trees::{enumerate_diagonal, example_rank3};
use parchi::euler_formulas::examples::{standard_rank3, standard_rank3_wall_term};
use parchi::euler_formulas::{chi_line, chi_vector};
use parchi::oracle::verlinde_su2;
use parchi::rational::{q, qf};
use parchi::root_system::chamber_point_near_theta;
use parchi::verify::small_weights;
use parchi::{CoVector, EulerQuery, EvalOptions, HighestWeight, LatticePoint, Q};

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

#[test]
fn su2_line_bundles_match_trigonometric_sum() {
    let d = enumerate_diagonal(2).unwrap();
    for g in 2..=3 {
        for k in 1..=4 {
            for l in 0..=k / 2 {
                let want = verlinde_su2(g, k, 2 * l).unwrap();
                assert!(want.within_tolerance);
                let qr = EulerQuery::new(g, k, lp(&[l, -l]), vec![], rank2_c(), d.clone()).unwrap();
                let got = chi_line(&qr, &opts()).unwrap().value;
                assert_eq!(got, Q::from_integer(want.nearest), "g={g} k={k} λ₁={l}");
            }
        }
    }
}

#[test]
fn su2_known_dimensions() {
    // level 1: 2^g blocks; genus 2 level 2: 10
    for g in 2..=4 {
        assert_eq!(verlinde_su2(g, 1, 0).unwrap().nearest, (1i64 << g).into());
    }
    assert_eq!(verlinde_su2(2, 2, 0).unwrap().nearest, 10.into());
}

/// (g, k, λ, SU(3) Verlinde number) for λ in the level-k alcove.
const SU3: [(i64, i64, [i64; 3], i64); 14] = [
    (2, 1, [0, 0, 0], 9),
    (2, 2, [0, 0, 0], 45),
    (2, 2, [1, 0, -1], 45),
    (2, 3, [0, 0, 0], 166),
    (2, 3, [1, 0, -1], 320),
    (2, 3, [1, 1, -2], 85),
    (2, 3, [2, -1, -1], 85),
    (3, 1, [0, 0, 0], 27),
    (3, 2, [0, 0, 0], 405),
    (3, 2, [1, 0, -1], 540),
    (3, 3, [0, 0, 0], 4390),
    (3, 3, [1, 0, -1], 11648),
    (3, 3, [1, 1, -2], 3661),
    (3, 3, [2, -1, -1], 3661),
];

#[test]
fn su3_line_bundles_match_verlinde_formula() {
    let d = enumerate_diagonal(3).unwrap();
    for plus in [true, false] {
        let c = chamber_point_near_theta(3, plus).unwrap();
        for (g, k, l, want) in SU3 {
            let qr = EulerQuery::new(g, k, lp(&l), vec![], c.clone(), d.clone()).unwrap();
            let got = chi_line(&qr, &opts()).unwrap().value;
            assert_eq!(got, q(want), "g={g} k={k} λ={l:?} plus={plus}");
        }
    }
}

#[test]
fn rank3_wall_term_matches_symbolic_expansion() {
    for (g, k, l, want) in [
        (2, 1, [0, 0, 0], 0),
        (2, 1, [-6, 2, 4], 4488),
        (2, 2, [-6, 3, 3], 53250),
        (2, 1, [-6, -3, 9], -26760),
    ] {
        let got = standard_rank3_wall_term(g, k, &lp(&l), &opts()).unwrap();
        assert_eq!(got, q(want), "λ={l:?} k={k}");
    }
}

#[test]
fn rank3_chamber_difference_equals_wall_term() {
    let d = example_rank3();
    let gt = chamber_point_near_theta(3, true).unwrap();
    let lt = chamber_point_near_theta(3, false).unwrap();
    for (k, l, want) in [(1, [-6, 2, 4], 4488), (1, [-6, -3, 9], -26760)] {
        let chi = |c: &CoVector| {
            let qr = EulerQuery::new(2, k, lp(&l), vec![hw(&[1, 0, 0])], c.clone(), d.clone()).unwrap();
            chi_vector(&qr, &opts()).unwrap().value
        };
        assert_eq!(chi(&lt) - chi(&gt), q(want));
    }
}

#[test]
fn rank3_standard_representation_closed_form() {
    let d = example_rank3();
    for plus in [true, false] {
        let c = chamber_point_near_theta(3, plus).unwrap();
        for l in [[0, 0, 0], [1, 0, -1], [2, -1, -1]] {
            let qr = EulerQuery::new(2, 1, lp(&l), vec![hw(&[1, 0, 0])], c.clone(), d.clone()).unwrap();
            let got = chi_vector(&qr, &opts()).unwrap().value;
            let want = standard_rank3(2, 1, &lp(&l), plus, &opts()).unwrap();
            assert_eq!(got, want, "λ={l:?} plus={plus}");
        }
    }
}

#[test]
fn weight_multiplicity_algorithms_agree() {
    for r in 2..=4 {
        for nu in small_weights(r, 200) {
            let a = weight_table_gt(&nu);
            let b = weight_table_freudenthal(&nu);
            assert_eq!(a, b, "ν={:?}", nu.coords());
            assert_eq!(Q::from_integer(a.dimension().into()), weyl_dimension(&nu));
        }
    }
}
