//! The shifted polynomials f_≷ (from characteristics on the chambers next
//! to the vertices θ_{±1}) and F_≷ (from residues taken at the vertices
//! themselves), and their anti-invariance under the stabilizers Σ^±.

use super::chi::{chi_line_at, chi_vector_at, line_main_sum, BasisArg};
use super::kernel::EvalOptions;
use super::{lambda_hat, total_vdet};
use crate::characters::{hecke_shift_coefficients, HighestWeight, Side};
use crate::diagonal_trees::DiagonalBasis;
use crate::error::{Error, Result};
use crate::rational::{q, Q};
use crate::root_system::{
    affine_weyl_act, chamber_point_near_theta, theta_points, AffineElement, CoVector, LatticePoint,
    Permutation, Root,
};
use num_traits::Zero;
use serde::Serialize;

/// A regular point of Δ in the chamber next to θ_1 (plus) or θ_{−1}.
pub fn side_chamber(r: usize, side: Side) -> Result<CoVector> {
    chamber_point_near_theta(r, side == Side::Plus)
}

/// θ_1 for the plus side, θ_{−1} for the minus side.
pub fn side_vertex(r: usize, side: Side) -> Result<CoVector> {
    let t = theta_points(0, r)?;
    Ok(match side {
        Side::Plus => t.theta1,
        Side::Minus => t.theta_m1,
    })
}

fn sign(side: Side) -> Q {
    match side {
        Side::Plus => q(1),
        Side::Minus => q(-1),
    }
}

fn shifted(lambda: &LatticePoint, s: &CoVector) -> Result<LatticePoint> {
    lambda
        .to_covector()
        .add(s)
        .to_lattice()
        .ok_or_else(|| Error::Internal("non-integral shift".into()))
}

/// The parts of a shifted polynomial: the main term and the correction
/// ±Σ m_μ μ_{r or 1} (line-bundle term at λ + shift).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Shifted {
    #[serde(with = "crate::rational::qstr")]
    pub main: Q,
    #[serde(with = "crate::rational::qstr")]
    pub correction: Q,
    #[serde(with = "crate::rational::qstr")]
    pub value: Q,
}

fn assemble(main: Q, correction: Q) -> Shifted {
    Shifted {
        value: &main + &correction,
        main,
        correction,
    }
}

/// f_≷(k; λ) from characteristics on the chamber next to θ_{±1}.
pub fn f_shifted(
    g: i64,
    k: i64,
    lambda: &LatticePoint,
    nu: &HighestWeight,
    side: Side,
    d: &DiagonalBasis,
    opts: &EvalOptions,
) -> Result<Shifted> {
    let r = lambda.rank();
    let c = side_chamber(r, side)?;
    let args = BasisArg::at(&c, d)?;
    let main = if nu.is_scalar() {
        Q::zero()
    } else {
        chi_vector_at(g, k, lambda, std::slice::from_ref(nu), &args, opts)?.value
    };
    let mut corr = Q::zero();
    for (s, coef) in hecke_shift_coefficients(nu, side) {
        let l = shifted(lambda, &s)?;
        corr += q(coef) * chi_line_at(g, k, &l, &args, opts)?.value;
    }
    Ok(assemble(main, sign(side) * corr))
}

/// F_≷(k; λ) from residues at a = −[θ_{±1}]_B.
pub fn big_f_shifted(
    g: i64,
    k: i64,
    lambda: &LatticePoint,
    nu: &HighestWeight,
    side: Side,
    d: &DiagonalBasis,
    opts: &EvalOptions,
) -> Result<Shifted> {
    let r = lambda.rank();
    let args = BasisArg::at(&side_vertex(r, side)?, d)?;
    let main = if nu.is_scalar() {
        Q::zero()
    } else {
        chi_vector_at(g, k, lambda, std::slice::from_ref(nu), &args, opts)?.value
    };
    let mut corr = Q::zero();
    for (s, coef) in hecke_shift_coefficients(nu, side) {
        let l = shifted(lambda, &s)?;
        corr += q(coef) * line_main_sum(g, k, &lambda_hat(&l), &args, opts)?.value;
    }
    Ok(assemble(main, sign(side) * corr))
}

/// Generators of Σ^−: s_{i,i+1} for 2 ≤ i ≤ r−1 and α^{12}∘s_{12};
/// of Σ^+: s_{i,i+1} for 1 ≤ i ≤ r−2 and α^{r−1,r}∘s_{r−1,r}.
pub fn stabilizer_generators(r: usize, side: Side) -> Vec<(String, AffineElement)> {
    let mut out = Vec::new();
    let range = match side {
        Side::Minus => 2..r,
        Side::Plus => 1..r.saturating_sub(1),
    };
    for i in range {
        out.push((
            format!("s{}{}", i, i + 1),
            AffineElement::Perm(Permutation::transposition(r, i, i + 1)),
        ));
    }
    let (i, j) = match side {
        Side::Minus => (1, 2),
        Side::Plus => (r - 1, r),
    };
    let gamma = Root { i, j }
        .covector(r)
        .to_lattice()
        .expect("roots are integral");
    out.push((
        format!("a{i}{j}*s{i}{j}"),
        AffineElement::Compose(vec![
            AffineElement::Translate(gamma),
            AffineElement::Perm(Permutation::transposition(r, i, j)),
        ]),
    ));
    out
}

/// Image of λ under an element acting at level k with the shift v_det(ν).
pub fn act(e: &AffineElement, k: i64, lambda: &LatticePoint, nu: &HighestWeight) -> Result<LatticePoint> {
    let r = lambda.rank();
    affine_weyl_act(e, k, lambda, &total_vdet(r, std::slice::from_ref(nu)))
}
