use super::jet::JetScalar;
use crate::error::{Error, Result};
use crate::rational::{fmt_q, pow_q, Q};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// Largest supported number of residue variables (rank ≤ 6).
pub const MAX_VARS: usize = 5;

/// Exponent vector; entries beyond `nvars` are zero.
pub type Mono = [i32; MAX_VARS];

/// Exactness horizon for polynomials.
pub const EXACT: i64 = i64::MAX / 8;

/// Grading weight of y_j (0-based j). The ratio y_j / y_p for j > p has
/// positive weight, so every expansion in the region |y_1| ≫ … ≫ |y_n| is
/// bounded below in this grading.
#[inline]
pub fn weight(j: usize) -> i64 {
    j as i64 + 1
}

#[inline]
pub fn degree(e: &Mono, nvars: usize) -> i64 {
    (0..nvars).map(|j| e[j] as i64 * weight(j)).sum()
}

pub fn mono(e: &[i32]) -> Mono {
    let mut m = [0; MAX_VARS];
    m[..e.len()].copy_from_slice(e);
    m
}

/// The residue target y_1^{-1} ⋯ y_n^{-1}.
pub fn target(nvars: usize) -> Mono {
    let mut m = [0; MAX_VARS];
    for x in m.iter_mut().take(nvars) {
        *x = -1;
    }
    m
}

pub fn target_degree(nvars: usize) -> i64 {
    -(1..=nvars as i64).sum::<i64>()
}

/// Lexicographic comparison in the expansion region: a monomial dominates
/// another if its exponent of the last variable is smaller, ties broken by
/// the previous variables.
pub fn region_cmp(a: &Mono, b: &Mono, nvars: usize) -> std::cmp::Ordering {
    for j in (0..nvars).rev() {
        match a[j].cmp(&b[j]) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// A truncated Laurent series in y_1..y_n over [`JetScalar`].
///
/// All terms of weighted degree ≤ `cap` are exact; higher ones are
/// discarded. `val` is a proven lower bound on the degree of every term of
/// the untruncated series. Products track both, so truncation is never
/// silent: asking for a coefficient above `cap` is an error.
#[derive(Clone, Debug)]
pub struct NestedLaurent {
    nvars: usize,
    terms: BTreeMap<Mono, JetScalar>,
    val: i64,
    cap: i64,
}

impl PartialEq for NestedLaurent {
    /// Equality of the known parts on the common window.
    fn eq(&self, o: &NestedLaurent) -> bool {
        if self.nvars != o.nvars {
            return false;
        }
        let cap = self.cap.min(o.cap);
        let a = self.clone().truncate(cap);
        let b = o.clone().truncate(cap);
        a.terms == b.terms
    }
}

impl NestedLaurent {
    pub fn zero(nvars: usize, cap: i64) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        NestedLaurent {
            nvars,
            terms: BTreeMap::new(),
            val: cap,
            cap,
        }
    }

    pub fn constant(nvars: usize, c: JetScalar, cap: i64) -> Self {
        Self::monomial(nvars, [0; MAX_VARS], c, cap)
    }

    pub fn one(nvars: usize, cap: i64) -> Self {
        Self::constant(nvars, JetScalar::one(), cap)
    }

    pub fn monomial(nvars: usize, e: Mono, c: JetScalar, cap: i64) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        let d = degree(&e, nvars);
        let mut terms = BTreeMap::new();
        if d <= cap && !c.is_zero() {
            terms.insert(e, c);
        }
        NestedLaurent {
            nvars,
            terms,
            val: d,
            cap,
        }
    }

    /// Build from explicit terms; `val` must bound every degree from below.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Mono, JetScalar)>,
        val: i64,
        cap: i64,
    ) -> Self {
        let mut out = NestedLaurent {
            nvars,
            terms: BTreeMap::new(),
            val,
            cap,
        };
        for (e, c) in terms {
            let d = degree(&e, nvars);
            debug_assert!(d >= val, "term below the declared valuation");
            if d <= cap && !c.is_zero() {
                let slot = out.terms.entry(e).or_insert_with(JetScalar::zero);
                *slot += &c;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// Σ t_j y_j as an exact polynomial.
    pub fn linear(nvars: usize, coeffs: &[Q]) -> Self {
        let mut terms = Vec::new();
        for (j, t) in coeffs.iter().enumerate() {
            if !t.is_zero() {
                let mut e = [0; MAX_VARS];
                e[j] = 1;
                terms.push((e, JetScalar::from_q(t.clone())));
            }
        }
        let val = coeffs
            .iter()
            .position(|t| !t.is_zero())
            .map(weight)
            .unwrap_or(EXACT);
        Self::from_terms(nvars, terms, val, EXACT)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn cap(&self) -> i64 {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &JetScalar)> {
        self.terms.iter()
    }

    /// Lower the valuation bound (never raises it).
    pub fn with_val(mut self, val: i64) -> Self {
        self.val = self.val.min(val);
        self
    }

    pub fn truncate(mut self, cap: i64) -> Self {
        if cap < self.cap {
            let n = self.nvars;
            self.terms.retain(|e, _| degree(e, n) <= cap);
            self.cap = cap;
        }
        self
    }

    /// Coefficient of y^e; an error if e lies above the exactness horizon.
    pub fn coeff(&self, e: &Mono) -> Result<JetScalar> {
        let d = degree(e, self.nvars);
        if d > self.cap {
            return Err(Error::InsufficientWindow {
                needed: d,
                have: self.cap,
            });
        }
        Ok(self.terms.get(e).cloned().unwrap_or_else(JetScalar::zero))
    }

    /// Per-variable exponent ranges of the stored terms.
    pub fn windows(&self) -> Vec<(i32, i32)> {
        (0..self.nvars)
            .map(|j| {
                let lo = self.terms.keys().map(|e| e[j]).min().unwrap_or(0);
                let hi = self.terms.keys().map(|e| e[j]).max().unwrap_or(0);
                (lo, hi)
            })
            .collect()
    }

    pub fn add(&self, o: &NestedLaurent) -> NestedLaurent {
        assert_eq!(self.nvars, o.nvars);
        let cap = self.cap.min(o.cap);
        let mut out = self.clone().truncate(cap);
        out.val = self.val.min(o.val);
        for (e, c) in &o.terms {
            if degree(e, self.nvars) <= cap {
                let slot = out.terms.entry(*e).or_insert_with(JetScalar::zero);
                *slot += c;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn neg(&self) -> NestedLaurent {
        NestedLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, o: &NestedLaurent) -> NestedLaurent {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Q) -> NestedLaurent {
        if s.is_zero() {
            return NestedLaurent {
                terms: BTreeMap::new(),
                ..self.clone()
            };
        }
        NestedLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, c.scale(s))).collect(),
            ..self.clone()
        }
    }

    pub fn scale_jet(&self, s: &JetScalar) -> NestedLaurent {
        let mut out = NestedLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
            ..self.clone()
        };
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// Multiply by c·y^e exactly.
    pub fn shift(&self, e: &Mono, c: &Q) -> NestedLaurent {
        let d = degree(e, self.nvars);
        let mut terms = BTreeMap::new();
        for (m, x) in &self.terms {
            let mut s = *m;
            for j in 0..self.nvars {
                s[j] += e[j];
            }
            terms.insert(s, x.scale(c));
        }
        NestedLaurent {
            nvars: self.nvars,
            terms,
            val: self.val + d,
            cap: self.cap.saturating_add(d),
        }
    }

    pub fn mul(&self, o: &NestedLaurent) -> NestedLaurent {
        self.mul_capped(o, EXACT)
    }

    /// Product truncated at min(natural horizon, `limit`).
    pub fn mul_capped(&self, o: &NestedLaurent, limit: i64) -> NestedLaurent {
        assert_eq!(self.nvars, o.nvars);
        let n = self.nvars;
        let cap = (self.cap.saturating_add(o.val))
            .min(o.cap.saturating_add(self.val))
            .min(limit);
        let val = self.val + o.val;
        let mut a: Vec<(i64, &Mono, &JetScalar)> =
            self.terms.iter().map(|(e, c)| (degree(e, n), e, c)).collect();
        let mut b: Vec<(i64, &Mono, &JetScalar)> =
            o.terms.iter().map(|(e, c)| (degree(e, n), e, c)).collect();
        a.sort_by_key(|t| t.0);
        b.sort_by_key(|t| t.0);
        let mut acc: HashMap<Mono, JetScalar> = HashMap::new();
        if let Some(bmin) = b.first().map(|t| t.0) {
            for &(da, ea, ca) in &a {
                if da + bmin > cap {
                    break;
                }
                for &(db, eb, cb) in &b {
                    if da + db > cap {
                        break;
                    }
                    let mut e = *ea;
                    for j in 0..n {
                        e[j] += eb[j];
                    }
                    acc.entry(e).or_insert_with(JetScalar::zero).add_mul(ca, cb);
                }
            }
        }
        let mut terms: BTreeMap<Mono, JetScalar> = acc.into_iter().collect();
        terms.retain(|_, c| !c.is_zero());
        NestedLaurent {
            nvars: n,
            terms,
            val,
            cap,
        }
    }

    pub fn pow(&self, k: u32) -> NestedLaurent {
        let mut acc = NestedLaurent::one(self.nvars, EXACT);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// The part with real (δ-free) coefficients and the nilpotent remainder.
    pub fn split_jet(&self) -> (NestedLaurent, NestedLaurent) {
        let mut re = BTreeMap::new();
        let mut nil = BTreeMap::new();
        for (e, c) in &self.terms {
            if !c.real().is_zero() {
                re.insert(*e, JetScalar::from_q(c.real().clone()));
            }
            let n = c.nilpotent();
            if !n.is_zero() {
                nil.insert(*e, n);
            }
        }
        (
            NestedLaurent {
                terms: re,
                ..self.clone()
            },
            NestedLaurent {
                terms: nil,
                ..self.clone()
            },
        )
    }

    /// The series of δ-mask components: keeps only coefficient `mask`.
    pub fn component(&self, mask: usize) -> NestedLaurent {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let x = c.component(mask);
            if !x.is_zero() {
                terms.insert(*e, JetScalar::from_q(x));
            }
        }
        NestedLaurent {
            terms,
            ..self.clone()
        }
    }

    fn max_jet_len(&self) -> usize {
        self.terms.values().map(|c| c.len()).max().unwrap_or(1)
    }

    /// e^N for a series whose coefficients are all nilpotent.
    pub fn exp_nilpotent(&self) -> Result<NestedLaurent> {
        if self.terms.values().any(|c| !c.real().is_zero()) {
            return Err(Error::Internal("exp_nilpotent on a non-nilpotent series".into()));
        }
        let mut acc = NestedLaurent::one(self.nvars, EXACT);
        let mut term = NestedLaurent::one(self.nvars, EXACT);
        let bits = self.max_jet_len().trailing_zeros() as i64;
        for k in 1..=bits.max(0) {
            term = term.mul(self).scale(&Q::new(1.into(), k.into()));
            if term.is_empty() {
                break;
            }
            acc = acc.add(&term);
        }
        // exp of a nilpotent is exact up to the horizon of its argument
        let cap = self.cap.min(EXACT);
        Ok(acc.truncate(cap).with_val(0.min(self.val)))
    }

    /// Inverse in the expansion region.
    ///
    /// The real part must have a single lowest-degree term that also
    /// dominates in the region, and every other term divided by it must be
    /// small both in degree and in the region order. The nilpotent part is
    /// inverted by a terminating Neumann series.
    pub fn inverse(&self) -> Result<NestedLaurent> {
        let n = self.nvars;
        let (re, nil) = self.split_jet();
        let Some(dmin) = re.terms.keys().map(|e| degree(e, n)).min() else {
            return Err(Error::NotInvertible("zero real part".into()));
        };
        if dmin > self.cap || dmin != self.val {
            return Err(Error::NotInvertible("leading term not certified".into()));
        }
        let leads: Vec<&Mono> = re.terms.keys().filter(|e| degree(e, n) == dmin).collect();
        if leads.len() != 1 {
            return Err(Error::NotInvertible("several terms of lowest degree".into()));
        }
        let lead = *leads[0];
        for e in re.terms.keys() {
            if *e != lead && region_cmp(e, &lead, n) != std::cmp::Ordering::Greater {
                return Err(Error::NotInvertible("leading term is not region-dominant".into()));
            }
        }
        let c = re.terms[&lead].real().clone();
        let mut neg_lead = [0; MAX_VARS];
        for j in 0..n {
            neg_lead[j] = -lead[j];
        }
        let cinv = c.recip();
        // re = c y^lead (1 + h)
        let h = re
            .shift(&neg_lead, &cinv)
            .sub(&NestedLaurent::one(n, EXACT));
        let rel = self.cap - self.val;
        let mut unit_inv = NestedLaurent::one(n, EXACT);
        let mut hp = NestedLaurent::one(n, EXACT);
        let neg_h = h.neg().with_val(1);
        for _ in 0..=rel.max(0) {
            hp = hp.mul_capped(&neg_h, rel);
            if hp.is_empty() {
                break;
            }
            unit_inv = unit_inv.add(&hp);
        }
        let unit_inv = unit_inv.truncate(rel);
        let re_inv = unit_inv.shift(&neg_lead, &cinv).with_val(-dmin);
        if nil.is_empty() {
            return Ok(re_inv);
        }
        // (A + N)^{-1} = A^{-1} Σ (−N A^{-1})^k
        let step = nil.mul(&re_inv).neg();
        let mut acc = re_inv.clone();
        let mut term = re_inv.clone();
        for _ in 0..self.max_jet_len() {
            term = term.mul(&step);
            if term.is_empty() {
                break;
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// ∂/∂y_j.
    pub fn derivative(&self, j: usize) -> NestedLaurent {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[j] != 0 {
                let mut f = *e;
                f[j] -= 1;
                terms.insert(f, c.scale(&Q::from_integer(e[j].into())));
            }
        }
        NestedLaurent {
            nvars: self.nvars,
            terms,
            val: self.val - weight(j),
            cap: self.cap - weight(j),
        }
    }

    /// Substitute y_j → c_j y_j.
    pub fn scale_vars(&self, c: &[Q]) -> NestedLaurent {
        let terms = self
            .terms
            .iter()
            .map(|(e, x)| {
                let f = (0..self.nvars).fold(Q::one(), |acc, j| acc * pow_q(&c[j], e[j] as i64));
                (*e, x.scale(&f))
            })
            .collect();
        NestedLaurent {
            terms,
            ..self.clone()
        }
    }

    /// Debug dump: one record per term.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Term {
            exponents: Vec<i32>,
            value: String,
            jet: BTreeMap<String, String>,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(e, c)| Term {
                exponents: e[..self.nvars].to_vec(),
                value: fmt_q(c.real()),
                jet: c.to_map(),
            })
            .collect();
        serde_json::json!({
            "nvars": self.nvars,
            "val": self.val,
            "cap": self.cap,
            "terms": terms,
        })
    }

    /// Coefficient of y_1^{-1} ⋯ y_n^{-1}: the iterated residue
    /// Res_{y_1} … Res_{y_n} with y_n innermost.
    pub fn iterated_residue(&self) -> Result<JetScalar> {
        self.coeff(&target(self.nvars))
    }

    /// Coefficient at the residue target of self · exp(Σ t_j y_j),
    /// computed without forming the product.
    pub fn residue_against_exp(&self, t: &[Q]) -> Result<JetScalar> {
        let n = self.nvars;
        let tgt = target(n);
        let td = target_degree(n);
        if self.cap < td {
            return Err(Error::InsufficientWindow {
                needed: td,
                have: self.cap,
            });
        }
        // powers t_j^d / d!
        let mut acc = JetScalar::zero();
        let mut cache: Vec<Vec<Q>> = vec![vec![Q::one()]; n];
        for (e, c) in &self.terms {
            let mut f = Q::one();
            let mut ok = true;
            for j in 0..n {
                let d = tgt[j] - e[j];
                if d < 0 {
                    ok = false;
                    break;
                }
                let d = d as usize;
                while cache[j].len() <= d {
                    let k = cache[j].len();
                    let next = &cache[j][k - 1] * &t[j] / Q::from_integer(k.into());
                    cache[j].push(next);
                }
                f *= &cache[j][d];
                if f.is_zero() {
                    break;
                }
            }
            if ok && !f.is_zero() {
                acc.add_mul(c, &JetScalar::from_q(f));
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn s(nvars: usize, terms: &[(&[i32], i64, i64)], cap: i64) -> NestedLaurent {
        let val = terms
            .iter()
            .map(|(e, _, _)| degree(&mono(e), nvars))
            .min()
            .unwrap_or(cap);
        NestedLaurent::from_terms(
            nvars,
            terms.iter().map(|(e, n, d)| (mono(e), JetScalar::from_q(qf(*n, *d)))),
            val,
            cap,
        )
    }

    #[test]
    fn residue_of_simple_pole() {
        let f = s(2, &[(&[-1, -1], 1, 1)], 10);
        assert_eq!(f.iterated_residue().unwrap(), JetScalar::from_q(q(1)));
        let g = s(2, &[(&[-2, 0], 1, 1)], 10);
        assert!(g.iterated_residue().unwrap().is_zero());
    }

    #[test]
    fn inverse_of_linear_form() {
        let l = NestedLaurent::linear(2, &[q(1), q(1)]);
        let inv = l.clone().truncate(8).with_val(1).inverse().unwrap();
        assert_eq!(inv.coeff(&mono(&[-2, 1])).unwrap(), JetScalar::from_q(q(-1)));
        let one = l.mul(&inv);
        assert_eq!(one, NestedLaurent::one(2, EXACT).truncate(one.cap()));
    }

    #[test]
    fn window_error() {
        let f = s(1, &[(&[0], 1, 1)], 2);
        assert!(matches!(f.coeff(&mono(&[5])), Err(Error::InsufficientWindow { .. })));
    }
}
