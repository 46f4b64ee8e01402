//! Euler characteristics as sums of iterated residues over a diagonal
//! basis, the rank-2 closed forms, wall-crossing terms and the shifted
//! polynomials used by the symmetry checks.

mod chi;
pub mod examples;
pub mod kernel;
pub mod rank2;
pub mod shift;
pub mod symmetry;
pub mod wallcross;

pub use chi::{
    chi_line, chi_line_at, chi_line_main_form, chi_multi, chi_vector, chi_vector_at,
    chi_vector_explicit, chi_wedge2, line_main_sum, vector_sum, BasisArg, BasisContribution,
    ChiResult,
};
pub use kernel::{clear_kernel_cache, evaluate, stability_checks, EvalOptions, Evaluation, Extra, KernelSpec};

use crate::characters::HighestWeight;
use crate::diagonal_trees::DiagonalBasis;
use crate::error::{Error, Result};
use crate::laurent_engine::MAX_VARS;
use crate::rational::{pow_q, q, sign_pow, Q};
use crate::root_system::{in_simplex, is_regular, rho, v_det, CoVector, LatticePoint};

/// Parameters of one Euler characteristic: genus, level, λ ∈ Λ, the
/// representations (empty for a line bundle), the parabolic weight c and
/// the diagonal basis to sum over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerQuery {
    pub g: i64,
    pub k: i64,
    pub lambda: LatticePoint,
    pub nus: Vec<HighestWeight>,
    pub c: CoVector,
    pub basis: DiagonalBasis,
}

pub(crate) fn check_gk(g: i64, k: i64) -> Result<()> {
    if g < 2 {
        return Err(Error::InvalidQuery(format!("genus must be at least 2, got {g}")));
    }
    if k < 1 {
        return Err(Error::InvalidQuery(format!("level must be positive, got {k}")));
    }
    Ok(())
}

pub(crate) fn check_rank(r: usize, got: usize) -> Result<()> {
    if got != r {
        return Err(Error::RankMismatch { expected: r, got });
    }
    Ok(())
}

/// A regular point of Δ.
pub(crate) fn check_chamber(c: &CoVector) -> Result<()> {
    if !is_regular(c) {
        return Err(Error::IrregularWeight(c.to_string()));
    }
    if !in_simplex(c) {
        return Err(Error::OutsideSimplex(c.to_string()));
    }
    Ok(())
}

impl EulerQuery {
    pub fn new(
        g: i64,
        k: i64,
        lambda: LatticePoint,
        nus: Vec<HighestWeight>,
        c: CoVector,
        basis: DiagonalBasis,
    ) -> Result<Self> {
        let r = basis.rank();
        if r < 2 {
            return Err(Error::InvalidRank(r));
        }
        if r - 1 > MAX_VARS {
            return Err(Error::InvalidQuery(format!("rank {r} exceeds the engine limit")));
        }
        check_gk(g, k)?;
        check_rank(r, lambda.rank())?;
        check_rank(r, c.rank())?;
        for nu in &nus {
            check_rank(r, nu.rank())?;
        }
        check_chamber(&c)?;
        Ok(EulerQuery {
            g,
            k,
            lambda,
            nus,
            c,
            basis,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    /// k̂ = k + r.
    pub fn khat(&self) -> i64 {
        self.k + self.rank() as i64
    }

    /// λ̂ = λ + ρ.
    pub fn lambda_hat(&self) -> CoVector {
        lambda_hat(&self.lambda)
    }

    /// Σ_j v_det(ν_j).
    pub fn vdet(&self) -> CoVector {
        total_vdet(self.rank(), &self.nus)
    }

    pub fn with_lambda(&self, lambda: LatticePoint) -> Self {
        EulerQuery {
            lambda,
            ..self.clone()
        }
    }

    pub fn with_c(&self, c: CoVector) -> Result<Self> {
        check_chamber(&c)?;
        Ok(EulerQuery { c, ..self.clone() })
    }

    pub fn with_nus(&self, nus: Vec<HighestWeight>) -> Self {
        EulerQuery { nus, ..self.clone() }
    }
}

pub fn lambda_hat(lambda: &LatticePoint) -> CoVector {
    let r = lambda.rank();
    lambda.to_covector().add(&rho(r).expect("rank checked"))
}

pub fn total_vdet(r: usize, nus: &[HighestWeight]) -> CoVector {
    nus.iter()
        .fold(CoVector::zero(r), |acc, nu| acc.add(&v_det(r, nu.size())))
}

fn binom2(r: usize) -> i64 {
    (r * (r - 1) / 2) as i64
}

/// N_{r,k} = (−1)^{C(r,2)(g−1)} r (r k̂^{r−1})^{g−1}.
pub fn norm_line(r: usize, k: i64, g: i64) -> Q {
    let ri = r as i64;
    let khat = q(k + ri);
    let inner = q(ri) * pow_q(&khat, ri - 1);
    sign_pow(binom2(r) * (g - 1)) * q(ri) * pow_q(&inner, g - 1)
}

/// N_r = (−1)^{C(r,2)(g−1)} r^g.
pub fn norm_vector(r: usize, g: i64) -> Q {
    sign_pow(binom2(r) * (g - 1)) * pow_q(&q(r as i64), g)
}
