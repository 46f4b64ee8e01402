use crate::rational::{fmt_q, Q};
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// A rational extended by square-free monomials in nilpotents δ_1..δ_m.
///
/// Component `mask` holds the coefficient of Π_{i ∈ mask} δ_i. Pure
/// rationals are stored with length 1 and broadcast against longer jets.
#[derive(Clone, Debug)]
pub struct JetScalar {
    parts: Vec<Q>,
}

impl JetScalar {
    pub fn zero() -> Self {
        JetScalar {
            parts: vec![Q::zero()],
        }
    }

    pub fn one() -> Self {
        Self::from_q(Q::one())
    }

    pub fn from_q(x: Q) -> Self {
        JetScalar { parts: vec![x] }
    }

    /// x · Π_{i ∈ mask} δ_i.
    pub fn monomial(mask: usize, x: Q) -> Self {
        let len = (mask + 1).next_power_of_two();
        let mut parts = vec![Q::zero(); len];
        parts[mask] = x;
        JetScalar { parts }
    }

    /// δ_i (0-based).
    pub fn delta(i: usize) -> Self {
        Self::monomial(1 << i, Q::one())
    }

    pub fn component(&self, mask: usize) -> Q {
        self.parts.get(mask).cloned().unwrap_or_else(Q::zero)
    }

    pub fn real(&self) -> &Q {
        &self.parts[0]
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|x| x.is_zero())
    }

    pub fn is_real(&self) -> bool {
        self.parts[1..].iter().all(|x| x.is_zero())
    }

    /// The part without the mask-0 component.
    pub fn nilpotent(&self) -> JetScalar {
        let mut p = self.parts.clone();
        p[0] = Q::zero();
        JetScalar { parts: p }
    }

    pub fn scale(&self, s: &Q) -> JetScalar {
        JetScalar {
            parts: self.parts.iter().map(|x| x * s).collect(),
        }
    }

    fn padded(&self, len: usize) -> Vec<Q> {
        let mut p = self.parts.clone();
        p.resize(len, Q::zero());
        p
    }

    /// self += a·b without temporaries for the common real case.
    pub fn add_mul(&mut self, a: &JetScalar, b: &JetScalar) {
        if a.parts.len() == 1 && b.parts.len() == 1 {
            self.parts[0] += &a.parts[0] * &b.parts[0];
            return;
        }
        let len = a.parts.len().max(b.parts.len()).max(self.parts.len());
        self.parts.resize(len, Q::zero());
        for (i, x) in a.parts.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.parts.iter().enumerate() {
                if i & j == 0 && !y.is_zero() {
                    self.parts[i | j] += x * y;
                }
            }
        }
    }

    /// Drop trailing structure if every nilpotent component vanishes.
    pub fn normalized(mut self) -> JetScalar {
        while self.parts.len() > 1 && self.parts[self.parts.len() / 2..].iter().all(|x| x.is_zero()) {
            let n = self.parts.len() / 2;
            self.parts.truncate(n);
        }
        self
    }

    /// Inverse, when the real part is nonzero.
    pub fn inverse(&self) -> Option<JetScalar> {
        if self.parts[0].is_zero() {
            return None;
        }
        let a_inv = self.parts[0].recip();
        let n = self.nilpotent().scale(&a_inv);
        // (a(1+n))^{-1} = a^{-1} Σ (−n)^k, finite since n is nilpotent
        let mut acc = JetScalar::one();
        let mut term = JetScalar::one();
        for _ in 0..self.parts.len() {
            term = &term * &(-&n);
            if term.is_zero() {
                break;
            }
            acc = &acc + &term;
        }
        Some(acc.scale(&a_inv))
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.parts
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(mask, x)| (mask_name(mask), fmt_q(x)))
            .collect()
    }
}

fn mask_name(mask: usize) -> String {
    if mask == 0 {
        return "1".into();
    }
    (0..usize::BITS as usize)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| format!("d{}", i + 1))
        .collect::<Vec<_>>()
        .join("*")
}

impl PartialEq for JetScalar {
    fn eq(&self, o: &JetScalar) -> bool {
        let len = self.parts.len().max(o.parts.len());
        (0..len).all(|i| self.component(i) == o.component(i))
    }
}

impl Eq for JetScalar {}

impl Serialize for JetScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_map().serialize(s)
    }
}

impl From<Q> for JetScalar {
    fn from(x: Q) -> Self {
        Self::from_q(x)
    }
}

impl<'a> Add<&'a JetScalar> for &'a JetScalar {
    type Output = JetScalar;
    fn add(self, o: &JetScalar) -> JetScalar {
        let len = self.parts.len().max(o.parts.len());
        let mut p = self.padded(len);
        for (i, x) in o.parts.iter().enumerate() {
            p[i] += x;
        }
        JetScalar { parts: p }
    }
}

impl AddAssign<&JetScalar> for JetScalar {
    fn add_assign(&mut self, o: &JetScalar) {
        if o.parts.len() > self.parts.len() {
            self.parts.resize(o.parts.len(), Q::zero());
        }
        for (i, x) in o.parts.iter().enumerate() {
            self.parts[i] += x;
        }
    }
}

impl<'a> Sub<&'a JetScalar> for &'a JetScalar {
    type Output = JetScalar;
    fn sub(self, o: &JetScalar) -> JetScalar {
        self + &(-o)
    }
}

impl Neg for &JetScalar {
    type Output = JetScalar;
    fn neg(self) -> JetScalar {
        JetScalar {
            parts: self.parts.iter().map(|x| -x).collect(),
        }
    }
}

impl<'a> Mul<&'a JetScalar> for &'a JetScalar {
    type Output = JetScalar;
    fn mul(self, o: &JetScalar) -> JetScalar {
        let mut out = JetScalar {
            parts: vec![Q::zero(); self.parts.len().max(o.parts.len())],
        };
        out.add_mul(self, o);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn nilpotency() {
        let d = JetScalar::delta(0);
        assert!((&d * &d).is_zero());
        let e = JetScalar::delta(1);
        let de = &d * &e;
        assert_eq!(de.component(3), q(1));
        assert!((&de * &d).is_zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let x = &(&JetScalar::from_q(q(3)) + &JetScalar::monomial(1, q(2))) + &JetScalar::monomial(3, q(5));
        let y = x.inverse().unwrap();
        assert_eq!((&x * &y).normalized(), JetScalar::one());
        assert!(JetScalar::delta(0).inverse().is_none());
    }
}
