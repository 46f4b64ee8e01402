//! Assembly of integrands from lazily built factors and extraction of
//! iterated residues, with the truncation horizon planned up front.

use super::jet::JetScalar;
use super::series::{target_degree, weight, NestedLaurent, EXACT};
use crate::error::{Error, Result};
use serde::Serialize;

/// A factor known only by a lower bound on its valuation until built.
pub struct LazyFactor<'a> {
    pub label: String,
    pub val: i64,
    pub build: Box<dyn Fn(i64) -> Result<NestedLaurent> + Send + Sync + 'a>,
}

impl<'a> LazyFactor<'a> {
    pub fn new(
        label: impl Into<String>,
        val: i64,
        build: impl Fn(i64) -> Result<NestedLaurent> + Send + Sync + 'a,
    ) -> Self {
        LazyFactor {
            label: label.into(),
            val,
            build: Box::new(build),
        }
    }

    /// An already built factor.
    pub fn ready(label: impl Into<String>, s: NestedLaurent) -> Self {
        let val = s.val();
        LazyFactor::new(label, val, move |cap| Ok(s.clone().truncate(cap)))
    }
}

/// Truncation bookkeeping of one assembled integrand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowPlan {
    /// weighted degree of y_1^{-1}⋯y_n^{-1}
    pub target_degree: i64,
    /// slack granted to every factor above its valuation
    pub excess: i64,
    /// extra slack on top of the minimum (0 for the base run)
    pub enlargement: i64,
    pub factor_vals: Vec<(String, i64)>,
    /// per-variable exponent ranges actually present in the product
    pub windows: Vec<(i32, i32)>,
    /// pole order in each variable (negated lower window end)
    pub pole_orders: Vec<i32>,
}

/// Slack used by the stabilization rerun: four steps of every variable.
pub fn enlargement_step(nvars: usize) -> i64 {
    4 * (0..nvars).map(weight).sum::<i64>()
}

/// Multiply the factors, each built exactly enough that the product is
/// exact through the residue target plus `enlargement`.
pub fn assemble(
    nvars: usize,
    factors: &[LazyFactor<'_>],
    enlargement: i64,
) -> Result<(NestedLaurent, WindowPlan)> {
    let td = target_degree(nvars);
    let total: i64 = factors.iter().map(|f| f.val).sum();
    let excess = td - total + enlargement;
    let mut built: Vec<NestedLaurent> = factors
        .iter()
        .map(|f| {
            let s = (f.build)(f.val + excess)?;
            if s.val() < f.val || s.cap() < f.val + excess {
                return Err(Error::Internal(format!(
                    "factor {} built with valuation {} and horizon {}, claimed {} and {}",
                    f.label,
                    s.val(),
                    s.cap(),
                    f.val,
                    f.val + excess
                )));
            }
            Ok(s.with_val(f.val))
        })
        .collect::<Result<_>>()?;
    built.sort_by_key(|s| s.len());
    let mut acc = NestedLaurent::one(nvars, EXACT);
    for s in &built {
        acc = acc.mul(s);
    }
    let acc = acc.truncate(td + enlargement);
    let windows = acc.windows();
    let plan = WindowPlan {
        target_degree: td,
        excess,
        enlargement,
        factor_vals: factors.iter().map(|f| (f.label.clone(), f.val)).collect(),
        pole_orders: windows.iter().map(|w| (-w.0).max(0)).collect(),
        windows,
    };
    Ok((acc, plan))
}

/// Residue of a product of factors.
pub fn iterated_residue(nvars: usize, factors: &[LazyFactor<'_>], enlargement: i64) -> Result<JetScalar> {
    let (p, _) = assemble(nvars, factors, enlargement)?;
    p.iterated_residue()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent_engine::factors::{exp_series, inv_one_minus_exp, LinearFormY};
    use crate::rational::{q, qf};

    #[test]
    fn product_of_bernoulli_factors() {
        // Π e^{a_j y_j}/(1 − e^{y_j}) has residue (−1)^n
        for n in 1..=3usize {
            let mut fs = Vec::new();
            for j in 0..n {
                let mut c = vec![q(0); n];
                c[j] = q(1);
                let l = LinearFormY::new(c.clone());
                fs.push(LazyFactor::new("den", -weight(j), move |cap| inv_one_minus_exp(&l, cap)));
                c[j] = qf(2 * j as i64 + 1, 3);
                let a = LinearFormY::new(c);
                fs.push(LazyFactor::new("exp", 0, move |cap| exp_series(&a, None, cap)));
            }
            let r = iterated_residue(n, &fs, 0).unwrap();
            let want = if n % 2 == 0 { q(1) } else { q(-1) };
            assert_eq!(r, JetScalar::from_q(want));
            assert_eq!(iterated_residue(n, &fs, enlargement_step(n)).unwrap(), r);
        }
    }
}
