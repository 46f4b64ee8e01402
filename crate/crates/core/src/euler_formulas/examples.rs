//! The rank-3 standard representation ν = (1,0,0) written directly in the
//! coordinates X = ⟨α^{12}, x⟩, Y = ⟨α^{23}, x⟩ over the basis
//! {(α^{23}, α^{12}), (α^{32}, α^{13})}. Residues are taken in X first,
//! so Y is the outer variable. These serve as an independent check of the
//! general assembly.

use super::check_gk;
use super::kernel::{residue_named, EvalOptions};
use crate::error::{Error, Result};
use crate::laurent_engine::{
    exp_series, inv_one_minus_exp, weyl_factor_form, JetScalar, LazyFactor, LinearFormY,
    NestedLaurent,
};
use crate::rational::{pow_q, q, qf, Q};
use crate::root_system::LatticePoint;
use num_traits::ToPrimitive;

/// Engine variable 0 is Y, variable 1 is X.
fn xy(x: Q, y: Q) -> LinearFormY {
    LinearFormY::new(vec![y, x])
}

fn exps(terms: &[(i64, i64, i64, i64)], cap: i64) -> Result<NestedLaurent> {
    // (coefficient, X numerator, Y numerator, denominator)
    let mut acc = NestedLaurent::zero(2, cap).with_val(0);
    for &(c, a, b, d) in terms {
        acc = acc.add(&exp_series(&xy(qf(a, d), qf(b, d)), None, cap)?.scale(&q(c)));
    }
    Ok(acc)
}

/// φ = e^{(2X+Y)/3} + e^{(Y−X)/3} + e^{(−X−2Y)/3}.
fn phi(cap: i64) -> Result<NestedLaurent> {
    exps(&[(1, 2, 1, 3), (1, -1, 1, 3), (1, -1, -2, 3)], cap)
}

fn phi_x(cap: i64) -> Result<NestedLaurent> {
    exps(&[(1, 2, 1, 3), (-1, -1, 1, 3)], cap)
}

fn phi_y(cap: i64) -> Result<NestedLaurent> {
    exps(&[(1, -1, 1, 3), (-1, -1, -2, 3)], cap)
}

fn weyl(g: i64) -> Vec<LazyFactor<'static>> {
    let p = 1 - 2 * g;
    vec![
        LazyFactor::new("sx", 2 * p, move |cap| weyl_factor_form(&xy(q(1), q(0)), p, cap)),
        LazyFactor::new("sy", p, move |cap| weyl_factor_form(&xy(q(0), q(1)), p, cap)),
        LazyFactor::new("sxy", p, move |cap| weyl_factor_form(&xy(q(1), q(1)), p, cap)),
    ]
}

fn den_x(k: i64) -> LazyFactor<'static> {
    LazyFactor::new("dx", -2, move |cap| inv_one_minus_exp(&xy(q(k + 3), q(0)), cap))
}

fn den_y(k: i64) -> LazyFactor<'static> {
    LazyFactor::new("dy", -1, move |cap| inv_one_minus_exp(&xy(q(0), q(k + 3)), cap))
}

/// 2g/(3(k+3)) φ + e^{(k+3)X} φ_X/(1−e^{(k+3)X}) [+ the same in Y].
fn bracket(g: i64, k: i64, with_y: bool) -> LazyFactor<'static> {
    LazyFactor::new("bracket", -2, move |cap| {
        let mut acc = phi(cap)?.scale(&qf(2 * g, 3 * (k + 3)));
        let ex = exp_series(&xy(q(k + 3), q(0)), None, cap + 2)?;
        let dx = inv_one_minus_exp(&xy(q(k + 3), q(0)), cap + 2)?;
        acc = acc.add(&ex.mul_capped(&phi_x(cap + 2)?, cap + 2).mul_capped(&dx, cap));
        if with_y {
            let ey = exp_series(&xy(q(0), q(k + 3)), None, cap + 1)?;
            let dy = inv_one_minus_exp(&xy(q(0), q(k + 3)), cap + 1)?;
            acc = acc.add(&ey.mul_capped(&phi_y(cap + 1)?, cap + 1).mul_capped(&dy, cap));
        }
        Ok(acc.with_val(-2))
    })
}

fn ready_phi_y() -> LazyFactor<'static> {
    LazyFactor::new("phiy", 0, phi_y)
}

fn lam(l: &LatticePoint) -> Result<[i64; 3]> {
    if l.rank() != 3 {
        return Err(Error::RankMismatch {
            expected: 3,
            got: l.rank(),
        });
    }
    let c = l.coords();
    let f = |i: usize| c[i].to_i64().ok_or_else(|| Error::InvalidQuery("λ out of range".into()));
    Ok([f(0)?, f(1)?, f(2)?])
}

/// N = (−1)^g (3(k+3)²)^g.
fn norm(g: i64, k: i64) -> Q {
    crate::rational::sign_pow(g) * pow_q(&q(3 * (k + 3) * (k + 3)), g)
}

/// Exponent rates (t_Y, t_X) of the two numerator terms; `shift_y` adds
/// (k+3)Y to the second.
fn rates(l: [i64; 3], k: i64, shift_y: bool) -> ([Q; 2], [Q; 2]) {
    let x = q(l[0] + 1) + qf(1, 3);
    let first = [q(l[0] + l[1] + 1) + qf(2, 3), x.clone()];
    let mut y2 = q(l[0] + l[2]) - qf(1, 3);
    if shift_y {
        y2 += q(k + 3);
    }
    (first, [y2, x])
}

fn r2(key: &str, factors: &[LazyFactor<'_>], t: &[Q; 2], opts: &EvalOptions) -> Result<Q> {
    let v: JetScalar = residue_named(Some(key), 2, factors, t, opts)?.value;
    Ok(v.real().clone())
}

/// The closed expression for χ on the chamber with c_2 < 0 (`greater`
/// false) or c_2 > 0 (`greater` true).
pub fn standard_rank3(g: i64, k: i64, lambda: &LatticePoint, greater: bool, opts: &EvalOptions) -> Result<Q> {
    check_gk(g, k)?;
    let l = lam(lambda)?;
    let (t1, t2) = rates(l, k, greater);
    let mut fs = weyl(g);
    fs.push(den_x(k));
    fs.push(den_y(k));
    fs.push(bracket(g, k, true));
    let key = format!("standard3/{g}/{k}");
    let main = r2(&key, &fs, &t1, opts)? - r2(&key, &fs, &t2, opts)?;
    let mut out = norm(g, k) * main;
    if greater {
        let mut fs = weyl(g);
        fs.push(den_x(k));
        fs.push(den_y(k));
        fs.push(ready_phi_y());
        out -= norm(g, k) * r2(&format!("standard3-y/{g}/{k}"), &fs, &t2, opts)?;
    }
    Ok(out)
}

/// The jump across the wall c_2 = 0 in closed form:
/// −N Res[e^{…} w^{1−2g}/(1−e^{(k+3)X}) (2g/(3(k+3)) φ + e^{(k+3)X}φ_X/(1−e^{(k+3)X}))].
pub fn standard_rank3_wall_term(g: i64, k: i64, lambda: &LatticePoint, opts: &EvalOptions) -> Result<Q> {
    check_gk(g, k)?;
    let l = lam(lambda)?;
    let (_, t2) = rates(l, k, false);
    let mut fs = weyl(g);
    fs.push(den_x(k));
    fs.push(bracket(g, k, false));
    let v = r2(&format!("standard3-wall/{g}/{k}"), &fs, &t2, opts)?;
    Ok(-norm(g, k) * v)
}
