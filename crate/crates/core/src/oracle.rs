//! Floating-point reference values computed independently of the residue
//! machinery.

use crate::error::{Error, Result};
use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};

const PREC: usize = 512;
const RM: RoundingMode = RoundingMode::ToEven;

/// A high-precision value and its nearest integer.
#[derive(Clone, Debug)]
pub struct Rounded {
    pub value: BigFloat,
    pub nearest: BigInt,
    /// |value − nearest| < tolerance
    pub within_tolerance: bool,
}

fn to_bigint(x: &BigFloat) -> Result<BigInt> {
    if x.is_zero() {
        return Ok(BigInt::from(0));
    }
    let (words, _bits, sign, exp, _) = x
        .as_raw_parts()
        .ok_or_else(|| Error::Internal("non-finite oracle value".into()))?;
    let mut m = BigUint::from(0u32);
    for w in words.iter().rev() {
        m = (m << 64u32) + BigUint::from(*w);
    }
    let shift = exp as i64 - 64 * words.len() as i64;
    let m = if shift >= 0 {
        m << shift as u64
    } else {
        m >> (-shift) as u64
    };
    let v = BigInt::from(m);
    Ok(if sign == Sign::Neg { -v } else { v })
}

fn round(x: BigFloat, tol: &BigFloat) -> Result<Rounded> {
    let n = x.round(0, RM);
    let within = x.sub(&n, PREC, RM).abs().cmp(tol).is_some_and(|c| c < 0);
    Ok(Rounded {
        nearest: to_bigint(&n)?,
        value: x,
        within_tolerance: within,
    })
}

/// The SU(2) Verlinde number with one marked point,
/// ((k+2)/2)^{g−1} Σ_{j=1}^{k+1} sin(πj(m+1)/(k+2)) / sin(πj/(k+2))^{2g−1},
/// in 512-bit floating point, together with its rounding to the nearest
/// integer under tolerance 10^{−20}.
pub fn verlinde_su2(g: i64, k: i64, m: i64) -> Result<Rounded> {
    if g < 1 || k < 1 || !(0..=k).contains(&m) {
        return Err(Error::InvalidQuery(format!("verlinde_su2 needs g ≥ 1 and 0 ≤ m ≤ k, got g={g}, k={k}, m={m}")));
    }
    let mut cc = Consts::new().map_err(|e| Error::Internal(format!("{e:?}")))?;
    let pi = cc.pi(PREC, RM);
    let h = BigFloat::from_i64(k + 2, PREC);
    let mut sum = BigFloat::from_i64(0, PREC);
    for j in 1..=k + 1 {
        let a = pi.mul(&BigFloat::from_i64(j * (m + 1), PREC), PREC, RM).div(&h, PREC, RM);
        let b = pi.mul(&BigFloat::from_i64(j, PREC), PREC, RM).div(&h, PREC, RM);
        let num = a.sin(PREC, RM, &mut cc);
        let den = b.sin(PREC, RM, &mut cc).powi((2 * g - 1) as usize, PREC, RM);
        sum = sum.add(&num.div(&den, PREC, RM), PREC, RM);
    }
    let half = h.div(&BigFloat::from_i64(2, PREC), PREC, RM);
    let v = half.powi((g - 1) as usize, PREC, RM).mul(&sum, PREC, RM);
    let tol = BigFloat::parse("1e-20", Radix::Dec, PREC, RM, &mut cc);
    round(v, &tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        // g = 2, k = 1: 4 for the trivial weight, 0 for m = k
        assert_eq!(verlinde_su2(2, 1, 0).unwrap().nearest, BigInt::from(4));
        assert_eq!(verlinde_su2(2, 1, 1).unwrap().nearest, BigInt::from(0));
        // genus 2, level 2, m = 0: 10
        assert_eq!(verlinde_su2(2, 2, 0).unwrap().nearest, BigInt::from(10));
    }

    #[test]
    fn integrality_on_grid() {
        for g in 2..=3 {
            for k in 1..=5 {
                for m in 0..=k {
                    assert!(verlinde_su2(g, k, m).unwrap().within_tolerance, "g={g} k={k} m={m}");
                }
            }
        }
    }

    #[test]
    fn raw_part_conversion() {
        for v in [-1234567i64, -1, 0, 1, 7, 1 << 40] {
            assert_eq!(to_bigint(&BigFloat::from_i64(v, PREC)).unwrap(), BigInt::from(v));
        }
    }
}
