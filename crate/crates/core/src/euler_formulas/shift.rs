//! Moving the argument of iBer_{B,Q} by a lattice vector w:
//! ∂_δ iBer_{B,Q}[f](a + w) = ∂_δ iBer_{B,Q}[f e^{k̂⟨w,x⟩}](a)
//!   − iBer_{B,k̂K}[f|_{δ=0} e^{k̂⟨w,x⟩} φ_w̌](a),
//! with Q = k̂K − δφ and f = w_Φ^p (C_0 + δ C_1) e^{⟨b,x⟩}.

use super::kernel::{evaluate, EvalOptions, Extra, KernelSpec};
use crate::characters::{character, CharacterSum, HighestWeight};
use crate::diagonal_trees::enumerate_diagonal;
use crate::error::Result;
use crate::rational::{q, qf, Q};
use crate::root_system::{killing_dual, CoVector, LatticePoint, OrderedBasis};
use num_traits::One;
use rand::Rng;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftInstance {
    pub basis: OrderedBasis,
    pub khat: i64,
    pub weyl_power: i64,
    pub phi: CharacterSum,
    pub f0: CharacterSum,
    pub f1: CharacterSum,
    pub base: CoVector,
    pub a: CoVector,
    pub w: LatticePoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftSides {
    #[serde(with = "crate::rational::qstr")]
    pub lhs: Q,
    #[serde(with = "crate::rational::qstr")]
    pub shifted: Q,
    #[serde(with = "crate::rational::qstr")]
    pub correction: Q,
}

impl ShiftSides {
    pub fn holds(&self) -> bool {
        self.lhs == &self.shifted - &self.correction
    }
}

pub fn trivial_shift_sides(inst: &ShiftInstance, opts: &EvalOptions) -> Result<ShiftSides> {
    let kh = q(inst.khat);
    let w = inst.w.to_covector();
    let f = Extra {
        parts: vec![(0, inst.f0.clone()), (1, inst.f1.clone())],
        scale: Q::one(),
    };
    let spec = |arg: &CoVector| KernelSpec {
        basis: inst.basis.clone(),
        level: kh.clone(),
        weyl_scale: Q::one(),
        weyl_power: inst.weyl_power,
        phis: vec![inst.phi.clone()],
        hess_power: 0,
        arg: Some(arg.clone()),
        extras: vec![f.clone()],
        drop: None,
        squared: None,
    };
    let aw = inst.a.add(&w);
    let lhs = evaluate(&spec(&aw), &inst.base.add(&aw.scale(&kh)), opts)?.value.component(1);
    let moved = inst.base.add(&w.scale(&kh)).add(&inst.a.scale(&kh));
    let shifted = evaluate(&spec(&inst.a), &moved, opts)?.value.component(1);
    let plain = KernelSpec {
        phis: Vec::new(),
        arg: None,
        extras: vec![
            Extra::real(inst.f0.clone(), Q::one()),
            Extra::real(inst.phi.directional_derivative(&killing_dual(&w)), Q::one()),
        ],
        ..spec(&inst.a)
    };
    let correction = evaluate(&plain, &moved, opts)?.value.component(0);
    Ok(ShiftSides {
        lhs,
        shifted,
        correction,
    })
}

fn projected(v: &[i64]) -> CoVector {
    let r = v.len() as i64;
    let mean = qf(v.iter().sum(), r);
    CoVector::new(v.iter().map(|&x| q(x) - &mean).collect()).expect("projection has sum zero")
}

fn random_sum<R: Rng>(rng: &mut R, r: usize) -> CharacterSum {
    let mut s = CharacterSum::new();
    for _ in 0..rng.gen_range(1..=3) {
        let v: Vec<i64> = (0..r).map(|_| rng.gen_range(-1..=1)).collect();
        let c = loop {
            let c = rng.gen_range(-3..=3i64);
            if c != 0 {
                break c;
            }
        };
        s.add_term(projected(&v), q(c));
    }
    s
}

fn random_lattice<R: Rng>(rng: &mut R, r: usize, bound: i64) -> LatticePoint {
    let mut v: Vec<i64> = (0..r - 1).map(|_| rng.gen_range(-bound..=bound)).collect();
    v.push(-v.iter().sum::<i64>());
    LatticePoint::from_i64s(&v).expect("sum zero")
}

/// A random instance: a tree of a diagonal basis, k̂ = k + r with
/// k ∈ 1..=3, w_Φ^{−1} or w_Φ^{−3}, φ the character of a small dominant ν,
/// random character sums C_0, C_1 and random a, w.
pub fn random_instance<R: Rng>(rng: &mut R, r: usize) -> Result<ShiftInstance> {
    let d = enumerate_diagonal(r)?;
    let tree = &d.trees()[rng.gen_range(0..d.trees().len())];
    let mut nu: Vec<i64> = (0..r).map(|_| rng.gen_range(0..=2)).collect();
    nu.sort_unstable_by(|a, b| b.cmp(a));
    let phi = character(&HighestWeight::new(nu)?);
    let base: Vec<i64> = (0..r).map(|_| rng.gen_range(-2..=2)).collect();
    let a: Vec<i64> = (0..r).map(|_| rng.gen_range(-3..=3)).collect();
    Ok(ShiftInstance {
        basis: tree.to_basis()?,
        khat: rng.gen_range(1..=3) + r as i64,
        weyl_power: if rng.gen_bool(0.5) { -1 } else { -3 },
        phi,
        f0: random_sum(rng, r),
        f1: random_sum(rng, r),
        base: projected(&base),
        a: projected(&a).scale(&qf(1, 2)),
        w: random_lattice(rng, r, 2),
    })
}
