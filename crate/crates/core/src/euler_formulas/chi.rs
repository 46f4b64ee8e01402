use super::kernel::{evaluate, EvalOptions, Evaluation, Extra, KernelSpec};
use super::{check_gk, lambda_hat, norm_line, norm_vector, total_vdet, EulerQuery};
use crate::characters::{character, CharacterSum, HighestWeight};
use crate::diagonal_trees::{DiagonalBasis, OrderedTree};
use crate::error::{Error, Result};
use crate::laurent_engine::{JetScalar, WindowPlan};
use crate::rational::{q, qf, qi, to_integer, Q};
use crate::root_system::{bracket, killing_dual, CoVector, LatticePoint, OrderedBasis};
use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

/// One summand of a residue sum: a tree, its basis, the argument a of
/// iBer and optionally a denominator factor to leave out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisArg {
    pub tree: OrderedTree,
    pub basis: OrderedBasis,
    pub arg: CoVector,
    pub drop: Option<usize>,
    /// weight of this summand, normally 1
    pub coeff: Q,
}

impl BasisArg {
    /// a = −[c]_B for every member of 𝒟. `c` need not be regular.
    pub fn at(c: &CoVector, d: &DiagonalBasis) -> Result<Vec<BasisArg>> {
        d.trees()
            .iter()
            .map(|t| {
                let basis = t.to_basis()?;
                let arg = bracket(c, &basis)?.integral.neg();
                Ok(BasisArg {
                    tree: t.clone(),
                    basis,
                    arg,
                    drop: None,
                    coeff: Q::one(),
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisContribution {
    pub tree: Vec<[usize; 2]>,
    #[serde(with = "crate::rational::qstr")]
    pub value: Q,
}

/// The outcome of a residue sum: the requested δ-component, its split over
/// the trees, the whole normalized jet and the truncation plans used.
#[derive(Clone, Debug, Serialize)]
pub struct ChiResult {
    #[serde(with = "crate::rational::qstr")]
    pub value: Q,
    pub per_basis: Vec<BasisContribution>,
    #[serde(serialize_with = "ser_jet")]
    pub jet_raw: JetScalar,
    pub plans: Vec<WindowPlan>,
}

fn ser_jet<S: Serializer>(j: &JetScalar, s: S) -> std::result::Result<S::Ok, S::Error> {
    j.to_map().serialize(s)
}

impl ChiResult {
    pub fn is_integral(&self) -> bool {
        self.value.is_integer()
    }

    /// The value as an integer, or a non-integrality error.
    pub fn integer(&self) -> Result<BigInt> {
        to_integer(&self.value).ok_or_else(|| Error::NonIntegral(crate::rational::fmt_q(&self.value)))
    }

    /// a·self + b·other over the same list of trees.
    pub fn combine(&self, a: &Q, other: &ChiResult, b: &Q) -> ChiResult {
        let per_basis = if self.per_basis.len() == other.per_basis.len()
            && self.per_basis.iter().zip(&other.per_basis).all(|(x, y)| x.tree == y.tree)
        {
            self.per_basis
                .iter()
                .zip(&other.per_basis)
                .map(|(x, y)| BasisContribution {
                    tree: x.tree.clone(),
                    value: a * &x.value + b * &y.value,
                })
                .collect()
        } else {
            let mut v: Vec<BasisContribution> = self
                .per_basis
                .iter()
                .map(|x| BasisContribution {
                    tree: x.tree.clone(),
                    value: a * &x.value,
                })
                .collect();
            v.extend(other.per_basis.iter().map(|y| BasisContribution {
                tree: y.tree.clone(),
                value: b * &y.value,
            }));
            v
        };
        ChiResult {
            value: a * &self.value + b * &other.value,
            per_basis,
            jet_raw: &self.jet_raw.scale(a) + &other.jet_raw.scale(b),
            plans: self.plans.iter().chain(&other.plans).cloned().collect(),
        }
    }
}

/// A term c·iBer[kernel·e^{⟨exponent,x⟩}] attached to tree `slot`.
struct Term {
    slot: usize,
    coeff: Q,
    spec: KernelSpec,
    exponent: CoVector,
}

fn run(trees: &[OrderedTree], terms: Vec<Term>, norm: &Q, mask: usize, opts: &EvalOptions) -> Result<ChiResult> {
    let evals: Vec<Result<Evaluation>> = terms
        .par_iter()
        .map(|t| evaluate(&t.spec, &t.exponent, opts))
        .collect();
    let mut jets = vec![JetScalar::zero(); trees.len()];
    let mut plans = Vec::with_capacity(terms.len());
    for (t, e) in terms.iter().zip(evals) {
        let e = e?;
        jets[t.slot] = &jets[t.slot] + &e.value.scale(&(norm * &t.coeff));
        plans.push(e.plan);
    }
    let per_basis: Vec<BasisContribution> = trees
        .iter()
        .zip(&jets)
        .map(|(t, j)| BasisContribution {
            tree: t.pairs(),
            value: j.component(mask),
        })
        .collect();
    let jet_raw = jets.iter().fold(JetScalar::zero(), |acc, j| &acc + j);
    Ok(ChiResult {
        value: jet_raw.component(mask),
        per_basis,
        jet_raw,
        plans,
    })
}

fn trees_of(args: &[BasisArg]) -> Vec<OrderedTree> {
    args.iter().map(|a| a.tree.clone()).collect()
}

fn khat_of(k: i64, r: usize) -> Q {
    q(k + r as i64)
}

/// N_{r,k} Σ iBer_{B,K}[w^{1−2g}(x/k̂) e^{⟨λ̂/k̂, x⟩}](a_B).
pub fn chi_line_at(g: i64, k: i64, lambda: &LatticePoint, args: &[BasisArg], opts: &EvalOptions) -> Result<ChiResult> {
    check_gk(g, k)?;
    let r = lambda.rank();
    let kh = khat_of(k, r);
    let base = lambda_hat(lambda).scale(&kh.recip());
    let terms = args
        .iter()
        .enumerate()
        .map(|(slot, a)| {
            let mut spec = KernelSpec::plain(a.basis.clone(), Q::one(), kh.recip(), 1 - 2 * g);
            spec.drop = a.drop;
            Term {
                slot,
                coeff: a.coeff.clone(),
                spec,
                exponent: base.add(&a.arg),
            }
        })
        .collect();
    run(&trees_of(args), terms, &norm_line(r, k, g), 0, opts)
}

pub fn chi_line(qr: &EulerQuery, opts: &EvalOptions) -> Result<ChiResult> {
    let args = BasisArg::at(&qr.c, &qr.basis)?;
    chi_line_at(qr.g, qr.k, &qr.lambda, &args, opts)
}

/// N_{r,k} Σ iBer_{B,k̂K}[w^{1−2g}(x) e^{⟨base, x⟩}](a_B), the unscaled
/// line-bundle form.
pub fn line_main_sum(g: i64, k: i64, base: &CoVector, args: &[BasisArg], opts: &EvalOptions) -> Result<ChiResult> {
    check_gk(g, k)?;
    let r = base.rank();
    let kh = khat_of(k, r);
    let terms = args
        .iter()
        .enumerate()
        .map(|(slot, a)| {
            let mut spec = KernelSpec::plain(a.basis.clone(), kh.clone(), Q::one(), 1 - 2 * g);
            spec.drop = a.drop;
            Term {
                slot,
                coeff: a.coeff.clone(),
                spec,
                exponent: base.add(&a.arg.scale(&kh)),
            }
        })
        .collect();
    run(&trees_of(args), terms, &norm_line(r, k, g), 0, opts)
}

pub fn chi_line_main_form(qr: &EulerQuery, opts: &EvalOptions) -> Result<ChiResult> {
    let args = BasisArg::at(&qr.c, &qr.basis)?;
    line_main_sum(qr.g, qr.k, &qr.lambda_hat(), &args, opts)
}

/// N_r ∂_{δ_1…δ_m} Σ iBer_{B,Q}[Hess(Q)^{g−1} w^{1−2g}(x) e^{⟨base, x⟩}](a_B)
/// with Q = k̂K − Σ δ_i φ_i.
pub fn vector_sum(
    g: i64,
    k: i64,
    base: &CoVector,
    phis: &[CharacterSum],
    args: &[BasisArg],
    opts: &EvalOptions,
) -> Result<ChiResult> {
    check_gk(g, k)?;
    let r = base.rank();
    let kh = khat_of(k, r);
    let m = phis.len();
    if m == 0 {
        return Err(Error::InvalidQuery("at least one representation is required".into()));
    }
    if m >= usize::BITS as usize {
        return Err(Error::InvalidQuery("too many representations".into()));
    }
    let terms = args
        .iter()
        .enumerate()
        .map(|(slot, a)| {
            let spec = KernelSpec {
                basis: a.basis.clone(),
                level: kh.clone(),
                weyl_scale: Q::one(),
                weyl_power: 1 - 2 * g,
                phis: phis.to_vec(),
                hess_power: g - 1,
                arg: (!a.arg.is_zero()).then(|| a.arg.clone()),
                extras: Vec::new(),
                drop: a.drop,
                squared: None,
            };
            Term {
                slot,
                coeff: a.coeff.clone(),
                spec,
                exponent: base.add(&a.arg.scale(&kh)),
            }
        })
        .collect();
    run(&trees_of(args), terms, &norm_vector(r, g), (1 << m) - 1, opts)
}

/// χ for the list of representations at arbitrary arguments.
pub fn chi_vector_at(
    g: i64,
    k: i64,
    lambda: &LatticePoint,
    nus: &[HighestWeight],
    args: &[BasisArg],
    opts: &EvalOptions,
) -> Result<ChiResult> {
    let r = lambda.rank();
    let base = lambda_hat(lambda).add(&total_vdet(r, nus));
    let phis: Vec<CharacterSum> = nus.iter().map(character).collect();
    vector_sum(g, k, &base, &phis, args, opts)
}

/// The multi-parameter characteristic for the representations in `qr.nus`.
pub fn chi_multi(qr: &EulerQuery, opts: &EvalOptions) -> Result<ChiResult> {
    let args = BasisArg::at(&qr.c, &qr.basis)?;
    chi_vector_at(qr.g, qr.k, &qr.lambda, &qr.nus, &args, opts)
}

/// χ(L(k;λ) ⊗ π_!(U_ν ⊗ K^{1/2})) through the jet path.
pub fn chi_vector(qr: &EulerQuery, opts: &EvalOptions) -> Result<ChiResult> {
    if qr.nus.len() != 1 {
        return Err(Error::InvalidQuery(format!(
            "vector mode takes one representation, got {}",
            qr.nus.len()
        )));
    }
    chi_multi(qr, opts)
}

/// The exterior square: ½ χ(U⊗U) − ¼ χ(ψ²U), the latter with φ(2x) and
/// twice the determinant shift.
pub fn chi_wedge2(qr: &EulerQuery, opts: &EvalOptions) -> Result<ChiResult> {
    if qr.nus.len() != 1 {
        return Err(Error::InvalidQuery("wedge2 mode takes one representation".into()));
    }
    let nu = &qr.nus[0];
    let r = qr.rank();
    let args = BasisArg::at(&qr.c, &qr.basis)?;
    let square = chi_vector_at(qr.g, qr.k, &qr.lambda, &[nu.clone(), nu.clone()], &args, opts)?;
    let base = qr
        .lambda_hat()
        .add(&total_vdet(r, std::slice::from_ref(nu)).scale(&q(2)));
    let adams = vector_sum(qr.g, qr.k, &base, &[character(nu).adams_twist(2)], &args, opts)?;
    Ok(square.combine(&qf(1, 2), &adams, &qf(-1, 4)))
}

/// The δ-derivative taken by hand: in the scaled form,
/// N_{r,k} Σ iBer_B[w^{1−2g}(x/k̂) e^{⟨λ̂+v_det, x⟩/k̂}·(−(g/k̂)·trHess φ(x/k̂) +
/// Σ t_i φ_{β̌i}(x/k̂) − Σ φ_{β̌i}(x/k̂) e^{y_i}/(1 − e^{y_i}))](−[c]_B),
/// the last factor coming from the derivative of the denominators,
/// where [c]_B = Σ t_i β_i. The factor e^{y_i} is absorbed into the
/// exponent.
pub fn chi_vector_explicit(qr: &EulerQuery, opts: &EvalOptions) -> Result<ChiResult> {
    if qr.nus.len() != 1 {
        return Err(Error::InvalidQuery("explicit path takes one representation".into()));
    }
    check_gk(qr.g, qr.k)?;
    let g = qr.g;
    let r = qr.rank();
    let kh = khat_of(qr.k, r);
    let inv = kh.recip();
    let phi = character(&qr.nus[0]);
    let base = qr.lambda_hat().add(&qr.vdet()).scale(&inv);
    let args = BasisArg::at(&qr.c, &qr.basis)?;
    let mut terms = Vec::new();
    for (slot, a) in args.iter().enumerate() {
        let br = bracket(&qr.c, &a.basis)?;
        let exponent = base.add(&a.arg);
        let ders: Vec<CharacterSum> = a
            .basis
            .roots()
            .iter()
            .map(|b| phi.directional_derivative(&killing_dual(&b.covector(r))))
            .collect();
        let mut lin = phi.hessian_trace().scale(&(-q(g) * &inv));
        for (t, d) in br.coeffs.iter().zip(&ders) {
            lin = lin.add(&d.scale(&qi(t)));
        }
        let plain = KernelSpec::plain(a.basis.clone(), Q::one(), inv.clone(), 1 - 2 * g);
        let with = |c: CharacterSum| KernelSpec {
            extras: vec![Extra::real(c, inv.clone())],
            ..plain.clone()
        };
        terms.push(Term {
            slot,
            coeff: a.coeff.clone(),
            spec: with(lin),
            exponent: exponent.clone(),
        });
        for (i, (b, d)) in a.basis.roots().iter().zip(ders).enumerate() {
            terms.push(Term {
                slot,
                coeff: -a.coeff.clone(),
                spec: KernelSpec {
                    squared: Some(i),
                    ..with(d)
                },
                exponent: exponent.add(&b.covector(r)),
            });
        }
    }
    run(&trees_of(&args), terms, &norm_line(r, qr.k, g), 0, opts)
}
