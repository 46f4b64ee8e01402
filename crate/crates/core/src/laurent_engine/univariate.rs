//! Truncated power series in one variable, used as templates that get
//! composed with linear forms.

use crate::rational::{binomial_q, q, Q};
use num_traits::{One, Zero};

/// Coefficients c_0..c_{n-1}.
pub type Uni = Vec<Q>;

pub fn mul(a: &[Q], b: &[Q], n: usize) -> Uni {
    let mut out = vec![Q::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Inverse of a series with nonzero constant term.
pub fn inv(a: &[Q], n: usize) -> Uni {
    assert!(!a[0].is_zero(), "constant term must be nonzero");
    let a0 = a[0].recip();
    let mut out: Uni = Vec::with_capacity(n);
    for k in 0..n {
        let mut s = if k == 0 { Q::one() } else { Q::zero() };
        for j in 1..=k {
            if let Some(aj) = a.get(j) {
                s -= aj * &out[k - j];
            }
        }
        out.push(s * &a0);
    }
    out
}

/// e^z.
pub fn exp(n: usize) -> Uni {
    let mut out = Vec::with_capacity(n);
    let mut c = Q::one();
    for i in 0..n {
        if i > 0 {
            c /= q(i as i64);
        }
        out.push(c.clone());
    }
    out
}

/// 2 sinh(z/2) / z = Σ z^{2i} / (4^i (2i+1)!).
pub fn sinh_unit(n: usize) -> Uni {
    let e = exp(n + 1);
    (0..n)
        .map(|i| {
            if i % 2 == 0 {
                // coefficient of z^{i+1} in 2 sinh(z/2) is 2 (1/2)^{i+1}/(i+1)!
                &e[i + 1] * Q::new(2.into(), num_bigint::BigInt::from(2).pow(i as u32 + 1))
            } else {
                Q::zero()
            }
        })
        .collect()
}

/// z / (e^z − 1) = Σ B_n z^n / n!.
pub fn bernoulli(n: usize) -> Uni {
    // (e^z − 1)/z = Σ z^i/(i+1)!
    let e = exp(n + 1);
    inv(&e[1..], n)
}

/// a^p for integer p (negative allowed when a_0 ≠ 0).
pub fn powi(a: &[Q], p: i64, n: usize) -> Uni {
    let base = if p < 0 { inv(a, n) } else { a[..a.len().min(n)].to_vec() };
    let mut e = p.unsigned_abs();
    let mut acc = vec![Q::zero(); n];
    acc[0] = Q::one();
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &b, n);
        }
        e >>= 1;
        if e > 0 {
            b = mul(&b, &b, n);
        }
    }
    acc
}

/// (1 + z)^p.
pub fn binomial_series(p: i64, n: usize) -> Uni {
    (0..n).map(|i| binomial_q(&q(p), i as u64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn bernoulli_numbers() {
        let b = bernoulli(5);
        assert_eq!(b, vec![q(1), qf(-1, 2), qf(1, 12), q(0), qf(-1, 720)]);
    }

    #[test]
    fn sinh_series() {
        let s = sinh_unit(5);
        assert_eq!(s, vec![q(1), q(0), qf(1, 24), q(0), qf(1, 1920)]);
    }

    #[test]
    fn powers() {
        let s = sinh_unit(6);
        let a = powi(&s, -3, 6);
        let b = powi(&s, 3, 6);
        let one = mul(&a, &b, 6);
        assert_eq!(one[0], q(1));
        assert!(one[1..].iter().all(|x| x.is_zero()));
        assert_eq!(binomial_series(-1, 4), vec![q(1), q(-1), q(1), q(-1)]);
    }
}
