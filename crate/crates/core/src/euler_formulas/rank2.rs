//! Rank 2 in the single coordinate u = x_1 − x_2, where λ = (λ_1, −λ_1)
//! and the representation ν = (ν_1, ν_2) has
//! φ(u) = Σ_{i=0}^{n} e^{(n/2 − i)u}, n = ν_1 − ν_2, with φ̇ = 2φ′,
//! φ̈ = 2φ̇′ and N = ν_1 + ν_2.

use super::check_gk;
use super::kernel::{residue_named, EvalOptions};
use crate::characters::HighestWeight;
use crate::error::{Error, Result};
use crate::laurent_engine::{
    inv_one_minus_exp, q_factor, weyl_factor_form, JetScalar, LazyFactor, LinearFormY,
    NestedLaurent, EXACT,
};
use crate::rational::{pow_q, q, qf, Q};
use num_traits::One;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwoPointSide {
    /// R_>
    Greater,
    /// R_<
    Less,
}

fn nu_pair(nu: &HighestWeight) -> Result<(i64, i64)> {
    if nu.rank() != 2 {
        return Err(Error::RankMismatch {
            expected: 2,
            got: nu.rank(),
        });
    }
    let c = nu.coords();
    Ok((c[0] - c[1], c[0] + c[1]))
}

fn lf(c: Q) -> LinearFormY {
    LinearFormY::new(vec![c])
}

/// Σ_i w(rate_i) e^{rate_i u} over the weights of φ.
fn phi_series(n: i64, w: impl Fn(&Q) -> Q, cap: i64) -> Result<NestedLaurent> {
    let mut acc = NestedLaurent::zero(1, cap).with_val(0);
    for i in 0..=n {
        let rate = qf(n - 2 * i, 2);
        let c = w(&rate);
        let e = crate::laurent_engine::exp_series(&lf(rate), None, cap)?;
        acc = acc.add(&e.scale(&c));
    }
    Ok(acc)
}

fn phi_dot(n: i64, cap: i64) -> Result<NestedLaurent> {
    phi_series(n, |t| q(2) * t, cap)
}

fn phi_ddot(n: i64, cap: i64) -> Result<NestedLaurent> {
    phi_series(n, |t| q(4) * t * t, cap)
}

fn sinh_power(p: i64) -> LazyFactor<'static> {
    LazyFactor::new("weyl", p, move |cap| weyl_factor_form(&lf(Q::one()), p, cap))
}

fn denominator(k: i64) -> LazyFactor<'static> {
    LazyFactor::new("den", -1, move |cap| inv_one_minus_exp(&lf(q(k + 2)), cap))
}

/// `key` names the integrand; the factors depend on nothing else.
fn res(key: &str, factors: &[LazyFactor<'_>], t: Q, opts: &EvalOptions) -> Result<JetScalar> {
    Ok(residue_named(Some(key), 1, factors, &[t], opts)?.value)
}

/// The closed rank-2 formula
/// (−(2k+4))^g Res[e^{u(λ_1+½+N/2)} (2sinh(u/2))^{1−2g} A^{−1}
/// (g φ̈/(2k+4) + e^{(k+2)u} φ̇ A^{−1})], A = 1 − e^{(k+2)u}.
pub fn rank2_closed(g: i64, k: i64, lambda1: i64, nu: &HighestWeight, opts: &EvalOptions) -> Result<Q> {
    check_gk(g, k)?;
    let (n, big_n) = nu_pair(nu)?;
    let t = q(lambda1) + qf(1, 2) + qf(big_n, 2);
    let first = [
        sinh_power(1 - 2 * g),
        denominator(k),
        LazyFactor::new("phi2", 0, move |cap| {
            Ok(phi_ddot(n, cap)?.scale(&qf(g, 2 * k + 4)))
        }),
    ];
    let second = [
        sinh_power(1 - 2 * g),
        denominator(k),
        denominator(k),
        LazyFactor::new("phi1", 0, move |cap| phi_dot(n, cap)),
    ];
    let a = res(&format!("closed-a/{g}/{k}/{n}"), &first, t.clone(), opts)?;
    let b = res(&format!("closed-b/{g}/{k}/{n}"), &second, t + q(k + 2), opts)?;
    Ok(pow_q(&q(-(2 * k + 4)), g) * (a.real() + b.real()))
}

/// The two-point polynomial R_≷(k; λ, μ) =
/// (−1)^g ∂_δ Res[(e^{u(λ+μ+1)} − E) e^{uN/2} (2k+4+δφ̈)^g /
/// ((2sinh(u/2))^{2g} (1 − e^{u(k+2)+δφ̇}))], with E = e^{u(λ−μ)} for R_>
/// and E = e^{u(λ−μ+k+2)+δφ̇} for R_<.
pub fn rank2_two_point(
    g: i64,
    k: i64,
    lambda: i64,
    mu: i64,
    nu: &HighestWeight,
    side: TwoPointSide,
    opts: &EvalOptions,
) -> Result<Q> {
    check_gk(g, k)?;
    let (n, big_n) = nu_pair(nu)?;
    let hess = move |cap: i64| -> Result<NestedLaurent> {
        let s = NestedLaurent::constant(1, JetScalar::from_q(q(2 * k + 4)), EXACT)
            .add(&phi_ddot(n, cap)?.scale_jet(&JetScalar::delta(0)));
        let mut acc = s.clone();
        for _ in 1..g {
            acc = acc.mul_capped(&s, cap);
        }
        Ok(acc)
    };
    let den = move |cap: i64| -> Result<NestedLaurent> {
        let d = phi_dot(n, cap + 2)?.scale_jet(&JetScalar::delta(0)).neg();
        q_factor(0, 1, &q(k + 2), Some(&d), 1, cap)
    };
    let common = || {
        vec![
            LazyFactor::new("hess", 0, hess),
            sinh_power(-2 * g),
            LazyFactor::new("den", -2, den),
        ]
    };
    let half = qf(big_n, 2);
    let key = format!("two-point/{g}/{k}/{n}");
    let first = res(&key, &common(), q(lambda + mu + 1) + &half, opts)?;
    let second = match side {
        TwoPointSide::Greater => res(&key, &common(), q(lambda - mu) + &half, opts)?,
        TwoPointSide::Less => {
            let mut fs = common();
            fs.push(LazyFactor::new("shift", 0, move |cap| {
                phi_dot(n, cap)?.scale_jet(&JetScalar::delta(0)).exp_nilpotent()
            }));
            res(&format!("two-point-less/{g}/{k}/{n}"), &fs, q(lambda - mu + k + 2) + &half, opts)?
        }
    };
    let d = &first - &second;
    Ok(crate::rational::sign_pow(g) * d.component(1))
}

/// g(−(2k+4))^{g−1} Res[e^{u(λ−μ+N/2)} φ̈ / (2sinh(u/2))^{2g}].
pub fn fact1_rhs(g: i64, k: i64, lambda: i64, mu: i64, nu: &HighestWeight, opts: &EvalOptions) -> Result<Q> {
    check_gk(g, k)?;
    let (n, big_n) = nu_pair(nu)?;
    let fs = [
        sinh_power(-2 * g),
        LazyFactor::new("phi2", 0, move |cap| phi_ddot(n, cap)),
    ];
    let r = res(&format!("hessian/{g}/{n}"), &fs, q(lambda - mu) + qf(big_n, 2), opts)?;
    Ok(q(g) * pow_q(&q(-(2 * k + 4)), g - 1) * r.real())
}

/// (−(2k+4))^g Res[(e^{u(λ+μ+1)} + sign·e^{u(λ−μ+offset)}) e^{uN/2} φ̇ /
/// ((2sinh(u/2))^{2g} (1 − e^{u(k+2)}))], the correction terms of the
/// substitution identities.
pub fn two_point_correction(
    g: i64,
    k: i64,
    lambda: i64,
    mu: i64,
    offset: i64,
    sign: i64,
    nu: &HighestWeight,
    opts: &EvalOptions,
) -> Result<Q> {
    check_gk(g, k)?;
    let (n, big_n) = nu_pair(nu)?;
    let fs = [
        sinh_power(-2 * g),
        denominator(k),
        LazyFactor::new("phi1", 0, move |cap| phi_dot(n, cap)),
    ];
    let half = qf(big_n, 2);
    let key = format!("correction/{g}/{k}/{n}");
    let a = res(&key, &fs, q(lambda + mu + 1) + &half, opts)?;
    let b = res(&key, &fs, q(lambda - mu + offset) + &half, opts)?;
    Ok(pow_q(&q(-(2 * k + 4)), g) * (a.real() + q(sign) * b.real()))
}

/// Residuals of the four substitution identities; all vanish when the
/// identities hold. The fourth is given with both signs of its correction
/// term, `d_alt` using −.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SubstitutionResiduals {
    #[serde(with = "crate::rational::qstr")]
    pub a: Q,
    #[serde(with = "crate::rational::qstr")]
    pub b: Q,
    #[serde(with = "crate::rational::qstr")]
    pub c: Q,
    #[serde(with = "crate::rational::qstr")]
    pub d: Q,
    #[serde(with = "crate::rational::qstr")]
    pub d_alt: Q,
}

impl SubstitutionResiduals {
    pub fn all_zero(&self) -> bool {
        use num_traits::Zero;
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }
}

/// (a) R_>(λ,μ) + R_>(λ,−μ−1);
/// (b) R_>(λ,μ) + R_>(−λ+k+1−N, μ) + C(λ,μ; 0, −1);
/// (c) R_<(λ,μ) + R_<(−λ−1−N, μ);
/// (d) R_<(λ,μ) + R_<(λ,−μ+k+1) + C(λ,μ; k+2, +1).
pub fn substitution_residuals(
    g: i64,
    k: i64,
    lambda: i64,
    mu: i64,
    nu: &HighestWeight,
    opts: &EvalOptions,
) -> Result<SubstitutionResiduals> {
    use TwoPointSide::*;
    let (_, big_n) = nu_pair(nu)?;
    let rg = |l, m| rank2_two_point(g, k, l, m, nu, Greater, opts);
    let rl = |l, m| rank2_two_point(g, k, l, m, nu, Less, opts);
    let g0 = rg(lambda, mu)?;
    let l0 = rl(lambda, mu)?;
    let a = &g0 + rg(lambda, -mu - 1)?;
    let b = &g0 + rg(-lambda + k + 1 - big_n, mu)? + two_point_correction(g, k, lambda, mu, 0, -1, nu, opts)?;
    let c = &l0 + rl(-lambda - 1 - big_n, mu)?;
    let dd = &l0 + rl(lambda, -mu + k + 1)?;
    let d = &dd + two_point_correction(g, k, lambda, mu, k + 2, 1, nu, opts)?;
    let d_alt = &dd + two_point_correction(g, k, lambda, mu, k + 2, -1, nu, opts)?;
    Ok(SubstitutionResiduals { a, b, c, d, d_alt })
}
