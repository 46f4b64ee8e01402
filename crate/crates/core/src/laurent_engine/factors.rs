//! Constructors for the factors of residue integrands, each exact through
//! a requested weighted-degree horizon `cap`.

use super::jet::JetScalar;
use super::series::{weight, NestedLaurent, EXACT, MAX_VARS};
use super::univariate as uni;
use crate::characters::CharacterSum;
use crate::error::{Error, Result};
use crate::rational::{pow_q, Q};
use crate::root_system::{expand_in_basis, killing_dual, CoVector, OrderedBasis, Root};
use num_traits::{One, Zero};
use serde::Serialize;

/// Σ t_j y_j, a linear function written in residue coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LinearFormY {
    #[serde(with = "crate::rational::qvec")]
    coeffs: Vec<Q>,
}

impl LinearFormY {
    pub fn new(coeffs: Vec<Q>) -> Self {
        assert!(coeffs.len() <= MAX_VARS, "too many variables");
        LinearFormY { coeffs }
    }

    /// ⟨a, x⟩·scale with y_j = ⟨β^[j], x⟩.
    pub fn from_covector(a: &CoVector, b: &OrderedBasis, scale: &Q) -> Result<Self> {
        let t = expand_in_basis(a, b)?;
        Ok(LinearFormY::new(t.into_iter().map(|x| x * scale).collect()))
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|x| x.is_zero())
    }

    /// Smallest j with a nonzero coefficient.
    pub fn leading_index(&self) -> Option<usize> {
        self.coeffs.iter().position(|x| !x.is_zero())
    }

    pub fn scale(&self, s: &Q) -> LinearFormY {
        LinearFormY::new(self.coeffs.iter().map(|x| x * s).collect())
    }

    pub fn to_series(&self) -> NestedLaurent {
        NestedLaurent::linear(self.coeffs.len(), &self.coeffs)
    }
}

/// Number of coefficients of a power series needed to reach `cap` when
/// composed with an argument of valuation `v ≥ 1`.
fn terms_needed(cap: i64, v: i64) -> usize {
    if cap < 0 {
        0
    } else {
        (cap / v) as usize + 1
    }
}

/// Σ c_i arg^i by Horner's rule, exact through `cap`.
pub fn compose(coeffs: &[Q], arg: &NestedLaurent, cap: i64) -> Result<NestedLaurent> {
    let n = arg.nvars();
    let v = arg.val();
    if v < 1 {
        return Err(Error::Internal("composition argument must have positive valuation".into()));
    }
    let need = terms_needed(cap, v).min(coeffs.len());
    if need == 0 {
        return Ok(NestedLaurent::zero(n, cap).with_val(0));
    }
    let mut acc = NestedLaurent::constant(n, JetScalar::from_q(coeffs[need - 1].clone()), cap);
    for i in (0..need - 1).rev() {
        acc = acc.mul_capped(arg, cap);
        acc = acc.add(&NestedLaurent::constant(
            n,
            JetScalar::from_q(coeffs[i].clone()),
            EXACT,
        ));
    }
    Ok(acc.truncate(cap).with_val(0))
}

/// A univariate template (by number of coefficients) composed with ℓ.
fn compose_linear(
    gen: impl Fn(usize) -> uni::Uni,
    l: &LinearFormY,
    cap: i64,
) -> Result<NestedLaurent> {
    let arg = l.to_series();
    let Some(p) = l.leading_index() else {
        return Ok(NestedLaurent::constant(l.nvars(), JetScalar::from_q(gen(1)[0].clone()), cap));
    };
    let need = terms_needed(cap, weight(p));
    let c = gen(need.max(1));
    compose(&c, &arg, cap)
}

/// ℓ^n for any integer n, expanded in the region: ℓ = t_p y_p (1 + u).
pub fn linear_power(l: &LinearFormY, n: i64, cap: i64) -> Result<NestedLaurent> {
    let nv = l.nvars();
    let p = l.leading_index().ok_or(Error::DegenerateRoot)?;
    let tp = &l.coeffs[p];
    let mut u_coeffs = vec![];
    for (j, t) in l.coeffs.iter().enumerate().skip(p + 1) {
        if !t.is_zero() {
            let mut e = [0; MAX_VARS];
            e[j] = 1;
            e[p] = -1;
            u_coeffs.push((e, JetScalar::from_q(t / tp)));
        }
    }
    let lead_deg = n * weight(p);
    let rel = cap - lead_deg;
    let unit = if u_coeffs.is_empty() || n == 0 {
        NestedLaurent::one(nv, EXACT)
    } else {
        let u = NestedLaurent::from_terms(nv, u_coeffs, 1, EXACT);
        compose(&uni::binomial_series(n, terms_needed(rel, 1).max(1)), &u, rel)?
    };
    let mut e = [0; MAX_VARS];
    e[p] = n as i32;
    Ok(unit.shift(&e, &pow_q(tp, n)).truncate(cap))
}

/// e^{ℓ}·e^{N} with N nilpotent.
pub fn exp_series(
    l: &LinearFormY,
    jet: Option<&NestedLaurent>,
    cap: i64,
) -> Result<NestedLaurent> {
    let base = compose_linear(uni::exp, l, cap)?;
    match jet {
        None => Ok(base),
        Some(n) => {
            let e = n.exp_nilpotent()?;
            Ok(base.mul_capped(&e, cap))
        }
    }
}

/// (2 sinh(ℓ/2))^power with ℓ = scale·⟨α, x⟩.
pub fn weyl_factor(
    alpha: &Root,
    b: &OrderedBasis,
    power: i64,
    scale: &Q,
    cap: i64,
) -> Result<NestedLaurent> {
    let l = LinearFormY::from_covector(&alpha.covector(b.rank()), b, scale)?;
    weyl_factor_form(&l, power, cap)
}

pub fn weyl_factor_form(l: &LinearFormY, power: i64, cap: i64) -> Result<NestedLaurent> {
    if power == 0 {
        return Ok(NestedLaurent::one(l.nvars(), EXACT));
    }
    let p = l.leading_index().ok_or(Error::DegenerateRoot)?;
    let lead = power * weight(p);
    let lp = linear_power(l, power, cap)?;
    let unit = compose_linear(|n| uni::powi(&uni::sinh_unit(n), power, n), l, cap - lead)?;
    Ok(lp.mul_capped(&unit, cap))
}

/// 1/(1 − e^{ℓ}) = −ℓ^{−1}·ℓ/(e^{ℓ} − 1).
pub fn inv_one_minus_exp(l: &LinearFormY, cap: i64) -> Result<NestedLaurent> {
    let p = l.leading_index().ok_or(Error::DegenerateRoot)?;
    let w = weight(p);
    let linv = linear_power(l, -1, cap)?;
    let bern = compose_linear(uni::bernoulli, l, cap + w)?;
    Ok(linv.mul_capped(&bern, cap).neg())
}

/// Σ c_μ e^{scale·⟨μ, x⟩} as a power series in y.
pub fn char_series(
    phi: &CharacterSum,
    b: &OrderedBasis,
    scale: &Q,
    cap: i64,
) -> Result<NestedLaurent> {
    let n = b.len();
    let mut acc = NestedLaurent::zero(n, cap).with_val(0);
    for (mu, c) in phi.terms() {
        let l = LinearFormY::from_covector(mu, b, scale)?;
        let e = compose_linear(uni::exp, &l, cap)?;
        acc = acc.add(&e.scale(c));
    }
    Ok(acc)
}

/// A δ-weighted sum Σ_i δ_i·(series_i).
pub fn delta_combination(parts: &[(usize, NestedLaurent)], nvars: usize, cap: i64) -> NestedLaurent {
    let mut acc = NestedLaurent::zero(nvars, cap).with_val(0);
    for (i, s) in parts {
        acc = acc.add(&s.scale_jet(&JetScalar::delta(*i)));
    }
    acc
}

/// (1 − e^{Q_j})^{−1} with Q_j = level·y_j − D, D nilpotent of valuation 0.
///
/// With A = 1 − e^{level·y_j} and N = e^{level·y_j}(1 − e^{−D}) this is
/// A^{−1} Σ_k (−N A^{−1})^k, a finite sum. The valuation is at least
/// −(m+1)·w_j for m nilpotent parameters.
/// D must be exact through cap + (m+1)·w_j.
pub fn q_factor(
    j: usize,
    nvars: usize,
    level: &Q,
    d: Option<&NestedLaurent>,
    m: usize,
    cap: i64,
) -> Result<NestedLaurent> {
    let w = weight(j);
    let mut c = vec![Q::zero(); nvars];
    c[j] = level.clone();
    let l = LinearFormY::new(c);
    let Some(d) = d.filter(|d| !d.is_empty()) else {
        return inv_one_minus_exp(&l, cap);
    };
    let mw = m as i64 * w;
    let ainv = inv_one_minus_exp(&l, cap + mw)?;
    let rel = cap + (m as i64 + 1) * w;
    let e = exp_series(&l, None, rel)?;
    let emd = d.neg().exp_nilpotent()?;
    let nterm = e.mul_capped(&NestedLaurent::one(nvars, EXACT).sub(&emd), rel);
    let step = nterm.mul_capped(&ainv, rel - w).neg();
    let mut acc = ainv.clone();
    let mut term = ainv;
    for _ in 0..m {
        term = term.mul(&step);
        if term.is_empty() {
            break;
        }
        acc = acc.add(&term);
    }
    Ok(acc.truncate(cap))
}

/// Entries Σ_μ c_μ ⟨μ, β_i⟩ t_l(μ) e^{⟨μ,x⟩} of ∂φ_{β̌_i}/∂y_l.
pub fn hessian_entry(
    phi: &CharacterSum,
    b: &OrderedBasis,
    i: usize,
    l: usize,
    cap: i64,
) -> Result<NestedLaurent> {
    let r = b.rank();
    let bi = killing_dual(&b.roots()[i].covector(r));
    let mut s = CharacterSum::new();
    for (mu, c) in phi.terms() {
        let t = expand_in_basis(mu, b)?;
        s.add_term(mu.clone(), c * mu.pair(&bi) * &t[l]);
    }
    char_series(&s, b, &Q::one(), cap)
}

/// det(level·I − Σ_i δ_i M^{(i)}) expanded through principal minors; only
/// minors of size ≤ m survive since each entry is δ-linear.
pub fn jacobian_measure(
    b: &OrderedBasis,
    level: &Q,
    phis: &[(usize, CharacterSum)],
    cap: i64,
) -> Result<NestedLaurent> {
    let n = b.len();
    let m = phis.len();
    let mut entries: Vec<Vec<NestedLaurent>> = Vec::with_capacity(n);
    if m > 0 {
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for l in 0..n {
                let parts: Vec<(usize, NestedLaurent)> = phis
                    .iter()
                    .map(|(d, phi)| Ok((*d, hessian_entry(phi, b, i, l, cap)?)))
                    .collect::<Result<_>>()?;
                row.push(delta_combination(&parts, n, cap));
            }
            entries.push(row);
        }
    }
    let mut acc = NestedLaurent::constant(n, JetScalar::from_q(pow_q(level, n as i64)), EXACT);
    for size in 1..=m.min(n) {
        let coeff = pow_q(level, (n - size) as i64) * crate::rational::sign_pow(size as i64);
        for subset in subsets(n, size) {
            let minor = minor_det(&entries, &subset, n, cap);
            acc = acc.add(&minor.scale(&coeff));
        }
    }
    Ok(acc.truncate(cap))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn minor_det(e: &[Vec<NestedLaurent>], s: &[usize], n: usize, cap: i64) -> NestedLaurent {
    let mut acc = NestedLaurent::zero(n, cap).with_val(0);
    for perm in crate::diagonal_trees::permutations(s.len()) {
        let mut prod = NestedLaurent::one(n, EXACT);
        for (a, &pa) in perm.iter().enumerate() {
            prod = prod.mul_capped(&e[s[a]][s[pa]], cap);
            if prod.is_empty() {
                break;
            }
        }
        let sign = crate::root_system::Permutation::new(perm.clone())
            .expect("a permutation of 0..n")
            .sign();
        acc = acc.add(&prod.scale(&Q::from_integer(sign.into())));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};
    use crate::laurent_engine::series::mono;

    #[test]
    fn exp_examples() {
        let l = LinearFormY::new(vec![q(1)]);
        let e = exp_series(&l, None, 2).unwrap();
        assert_eq!(e.coeff(&mono(&[2])).unwrap(), JetScalar::from_q(qf(1, 2)));
        let l = LinearFormY::new(vec![qf(1, 3), qf(2, 3)]);
        let e = exp_series(&l, None, 6).unwrap();
        assert_eq!(e.coeff(&mono(&[1, 1])).unwrap(), JetScalar::from_q(qf(2, 9)));
    }

    #[test]
    fn nilpotent_exp() {
        let d = NestedLaurent::linear(1, &[q(1)]).scale_jet(&JetScalar::delta(0));
        let e = exp_series(&LinearFormY::new(vec![q(0)]), Some(&d), 5).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.coeff(&mono(&[1])).unwrap(), JetScalar::delta(0));
    }

    #[test]
    fn weyl_examples() {
        let l = LinearFormY::new(vec![q(1)]);
        let f = weyl_factor_form(&l, -1, 3).unwrap();
        assert_eq!(f.coeff(&mono(&[-1])).unwrap(), JetScalar::from_q(q(1)));
        assert_eq!(f.coeff(&mono(&[1])).unwrap(), JetScalar::from_q(qf(-1, 24)));
        let l = LinearFormY::new(vec![q(1), q(1)]);
        let f = weyl_factor_form(&l, -1, 4).unwrap();
        assert_eq!(f.coeff(&mono(&[-2, 1])).unwrap(), JetScalar::from_q(q(-1)));
    }

    #[test]
    fn bernoulli_residue() {
        // Res e^{λy}/(1 − e^{ky}) = −1/k
        let f = inv_one_minus_exp(&LinearFormY::new(vec![q(5)]), 3).unwrap();
        let r = f.residue_against_exp(&[q(7)]).unwrap();
        assert_eq!(r, JetScalar::from_q(qf(-1, 5)));
    }

    #[test]
    fn q_factor_inverts() {
        let d = NestedLaurent::linear(1, &[q(1)])
            .add(&NestedLaurent::one(1, EXACT))
            .scale_jet(&JetScalar::delta(0));
        let f = q_factor(0, 1, &q(3), Some(&d), 1, 6).unwrap();
        // (1 − e^{3y − D}) · f = 1
        let l = LinearFormY::new(vec![q(3)]);
        let e = exp_series(&l, Some(&d.neg()), 12).unwrap();
        let g = NestedLaurent::one(1, EXACT).sub(&e);
        let p = g.mul(&f);
        assert!(p.cap() >= 4);
        for k in -3..=4 {
            let want = if k == 0 { JetScalar::one() } else { JetScalar::zero() };
            assert_eq!(p.coeff(&mono(&[k])).unwrap(), want, "k = {k}");
        }
    }

    #[test]
    fn minor_signs() {
        let c = |v: i64| NestedLaurent::constant(1, JetScalar::from_q(q(v)), EXACT);
        let e = vec![vec![c(1), c(2), c(0)], vec![c(3), c(4), c(0)], vec![c(0), c(0), c(5)]];
        let d = minor_det(&e, &[0, 1], 1, 4);
        assert_eq!(d.coeff(&mono(&[0])).unwrap(), JetScalar::from_q(q(-2)));
        let d = minor_det(&e, &[0, 1, 2], 1, 4);
        assert_eq!(d.coeff(&mono(&[0])).unwrap(), JetScalar::from_q(q(-10)));
    }
}
