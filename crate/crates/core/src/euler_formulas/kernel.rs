//! The iterated-residue functional iBer_{B,Q}, with integrands described
//! declaratively so that the expensive λ-independent part can be cached.

use crate::characters::CharacterSum;
use crate::error::{Error, Result};
use crate::laurent_engine::{
    assemble, char_series, enlargement_step, exp_series, jacobian_measure, q_factor,
    weyl_factor_form, inv_one_minus_exp, JetScalar, LazyFactor, LinearFormY, NestedLaurent, WindowPlan, EXACT,
};
use crate::laurent_engine::weight;
use crate::rational::{pow_q, Q};
use crate::root_system::{expand_in_basis, killing_dual, positive_roots, CoVector, OrderedBasis};
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

/// A δ-graded character factor Σ_mask δ^mask C_mask(scale·x).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Extra {
    pub parts: Vec<(usize, CharacterSum)>,
    pub scale: Q,
}

impl Extra {
    pub fn real(c: CharacterSum, scale: Q) -> Self {
        Extra {
            parts: vec![(0, c)],
            scale,
        }
    }
}

/// Everything in the integrand of iBer_{B,Q}[…](a) except the final
/// exponential e^{⟨E, x⟩}, which is applied at evaluation time.
///
/// Q = level·K − Σ δ_i φ_i. The measure contributes det(∂Q_{β̌}/∂y) and
/// the Hessian factor a further `hess_power` copies of it. With `arg` set,
/// the nilpotent part e^{−Σδ_i φ_{i,ǎ}} of exp(Q_ǎ) is included; the
/// linear part level·⟨a,x⟩ belongs to the exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KernelSpec {
    pub basis: OrderedBasis,
    pub level: Q,
    /// Weyl denominator evaluated at weyl_scale·x
    pub weyl_scale: Q,
    pub weyl_power: i64,
    pub phis: Vec<CharacterSum>,
    pub hess_power: i64,
    pub arg: Option<CoVector>,
    pub extras: Vec<Extra>,
    /// index of a denominator factor 1 − e^{Q_{β̌}} left out
    pub drop: Option<usize>,
    /// index of a denominator factor taken twice (plain kernels only)
    pub squared: Option<usize>,
}

impl KernelSpec {
    pub fn plain(basis: OrderedBasis, level: Q, weyl_scale: Q, weyl_power: i64) -> Self {
        KernelSpec {
            basis,
            level,
            weyl_scale,
            weyl_power,
            phis: Vec::new(),
            hess_power: 0,
            arg: None,
            extras: Vec::new(),
            drop: None,
            squared: None,
        }
    }

    pub fn nvars(&self) -> usize {
        self.basis.len()
    }

    fn factors(&self) -> Result<Vec<LazyFactor<'static>>> {
        let b = self.basis.clone();
        let n = b.len();
        let r = b.rank();
        let m = self.phis.len();
        if self.hess_power < -1 {
            return Err(Error::InvalidQuery("negative Hessian power".into()));
        }
        if m > 0 && !self.weyl_scale.is_one() {
            return Err(Error::Internal("nilpotent kernels are built unscaled".into()));
        }
        let mut fs: Vec<LazyFactor<'static>> = Vec::new();

        let mpow = self.hess_power + 1;
        if m == 0 || mpow == 0 {
            let c = pow_q(&self.level, n as i64 * mpow);
            fs.push(LazyFactor::ready(
                "measure",
                NestedLaurent::constant(n, JetScalar::from_q(c), EXACT),
            ));
        } else {
            let phis: Vec<(usize, CharacterSum)> = self.phis.iter().cloned().enumerate().collect();
            let (bb, lv) = (b.clone(), self.level.clone());
            fs.push(LazyFactor::new("measure", 0, move |cap| {
                let j = jacobian_measure(&bb, &lv, &phis, cap)?;
                let mut acc = j.clone();
                for _ in 1..mpow {
                    acc = acc.mul_capped(&j, cap);
                }
                Ok(acc)
            }));
        }

        if self.weyl_power != 0 {
            for alpha in positive_roots(r) {
                let l = LinearFormY::from_covector(&alpha.covector(r), &b, &self.weyl_scale)?;
                let p = l.leading_index().ok_or(Error::DegenerateRoot)?;
                let power = self.weyl_power;
                fs.push(LazyFactor::new(
                    format!("weyl{}{}", alpha.i, alpha.j),
                    power * weight(p),
                    move |cap| weyl_factor_form(&l, power, cap),
                ));
            }
        }

        if let (Some(a), true) = (&self.arg, m > 0) {
            let v = killing_dual(a);
            let ders: Vec<(usize, CharacterSum)> = self
                .phis
                .iter()
                .enumerate()
                .map(|(i, p)| (i, p.directional_derivative(&v)))
                .filter(|(_, d)| !d.is_zero())
                .collect();
            if !ders.is_empty() {
                let bb = b.clone();
                fs.push(LazyFactor::new("arg", 0, move |cap| {
                    nilpotent_sum(&ders, &bb, &Q::one(), cap)?.neg().exp_nilpotent()
                }));
            }
        }

        for (i, e) in self.extras.iter().enumerate() {
            let (bb, e) = (b.clone(), e.clone());
            fs.push(LazyFactor::new(format!("extra{i}"), 0, move |cap| {
                let mut acc = NestedLaurent::zero(n, cap).with_val(0);
                for (mask, c) in &e.parts {
                    let s = char_series(c, &bb, &e.scale, cap)?;
                    acc = acc.add(&s.scale_jet(&JetScalar::monomial(*mask, Q::one())));
                }
                Ok(acc)
            }));
        }

        if let Some(j) = self.squared {
            if m > 0 || j >= n || self.drop == Some(j) {
                return Err(Error::Internal("bad squared denominator".into()));
            }
            let mut c = vec![Q::zero(); n];
            c[j] = self.level.clone();
            let l = LinearFormY::new(c);
            fs.push(LazyFactor::new("den2", -weight(j), move |cap| inv_one_minus_exp(&l, cap)));
        }

        for j in 0..n {
            if self.drop == Some(j) {
                continue;
            }
            let v = killing_dual(&b.roots()[j].covector(r));
            let ders: Vec<(usize, CharacterSum)> = self
                .phis
                .iter()
                .enumerate()
                .map(|(i, p)| (i, p.directional_derivative(&v)))
                .filter(|(_, d)| !d.is_zero())
                .collect();
            let meff = if ders.is_empty() { 0 } else { m };
            let (bb, lv) = (b.clone(), self.level.clone());
            fs.push(LazyFactor::new(
                format!("den{j}"),
                -(meff as i64 + 1) * weight(j),
                move |cap| {
                    if ders.is_empty() {
                        q_factor(j, n, &lv, None, 0, cap)
                    } else {
                        let d = nilpotent_sum(&ders, &bb, &Q::one(), cap + (meff as i64 + 1) * weight(j))?;
                        q_factor(j, n, &lv, Some(&d), meff, cap)
                    }
                },
            ));
        }
        Ok(fs)
    }
}

/// Σ_i δ_i C_i(scale·x).
fn nilpotent_sum(
    parts: &[(usize, CharacterSum)],
    b: &OrderedBasis,
    scale: &Q,
    cap: i64,
) -> Result<NestedLaurent> {
    let n = b.len();
    let mut acc = NestedLaurent::zero(n, cap).with_val(0);
    for (i, c) in parts {
        let s = char_series(c, b, scale, cap)?;
        acc = acc.add(&s.scale_jet(&JetScalar::delta(*i)));
    }
    Ok(acc)
}

/// An assembled integrand, exact through the residue target plus its
/// enlargement.
pub struct Kernel {
    pub series: NestedLaurent,
    pub plan: WindowPlan,
}

type CacheMap = HashMap<(KernelSpec, i64), Arc<Kernel>>;

const CACHE_LIMIT: usize = 2048;

fn cache() -> &'static Mutex<CacheMap> {
    static C: OnceLock<Mutex<CacheMap>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

static STABILITY_CHECKS: AtomicU64 = AtomicU64::new(0);

/// Number of enlarged-window recomputations performed so far.
pub fn stability_checks() -> u64 {
    STABILITY_CHECKS.load(Ordering::Relaxed)
}

pub fn clear_kernel_cache() {
    cache().lock().unwrap().clear();
    named_cache().lock().unwrap().clear();
}

/// The assembled kernel, memoized on (spec, enlargement).
pub fn kernel(spec: &KernelSpec, enlargement: i64) -> Result<Arc<Kernel>> {
    let key = (spec.clone(), enlargement);
    if let Some(k) = cache().lock().unwrap().get(&key) {
        return Ok(k.clone());
    }
    let fs = spec.factors()?;
    let (series, plan) = assemble(spec.nvars(), &fs, enlargement)?;
    let k = Arc::new(Kernel { series, plan });
    let mut c = cache().lock().unwrap();
    if c.len() >= CACHE_LIMIT {
        c.clear();
    }
    c.insert(key, k.clone());
    Ok(k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    /// Recompute every residue with enlarged windows and demand identity.
    pub check_stability: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            check_stability: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: JetScalar,
    pub plan: WindowPlan,
}

/// iBer of the kernel times e^{⟨exponent, x⟩}.
pub fn evaluate(spec: &KernelSpec, exponent: &CoVector, opts: &EvalOptions) -> Result<Evaluation> {
    let t = expand_in_basis(exponent, &spec.basis)?;
    let k0 = kernel(spec, 0)?;
    let value = k0.series.residue_against_exp(&t)?;
    if opts.check_stability {
        let k1 = kernel(spec, enlargement_step(spec.nvars()))?;
        let v1 = k1.series.residue_against_exp(&t)?;
        STABILITY_CHECKS.fetch_add(1, Ordering::Relaxed);
        if v1 != value {
            return Err(Error::Unstable(format!(
                "residue changed from {:?} to {:?} under enlargement",
                value.to_map(),
                v1.to_map()
            )));
        }
    }
    Ok(Evaluation {
        value,
        plan: k0.plan.clone(),
    })
}

type NamedMap = HashMap<(String, i64), Arc<(NestedLaurent, WindowPlan)>>;

fn named_cache() -> &'static Mutex<NamedMap> {
    static C: OnceLock<Mutex<NamedMap>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn assemble_named(
    key: Option<&str>,
    nvars: usize,
    factors: &[LazyFactor<'_>],
    enlargement: i64,
) -> Result<Arc<(NestedLaurent, WindowPlan)>> {
    let Some(key) = key else {
        return Ok(Arc::new(assemble(nvars, factors, enlargement)?));
    };
    let k = (key.to_string(), enlargement);
    if let Some(v) = named_cache().lock().unwrap().get(&k) {
        return Ok(v.clone());
    }
    let v = Arc::new(assemble(nvars, factors, enlargement)?);
    let mut c = named_cache().lock().unwrap();
    if c.len() >= CACHE_LIMIT {
        c.clear();
    }
    c.insert(k, v.clone());
    Ok(v)
}

/// Residue of Π factors · e^{Σ t_j y_j} for hand-built integrands, with
/// the same stability discipline as [`evaluate`].
pub fn residue_with_exp(
    nvars: usize,
    factors: &[LazyFactor<'_>],
    t: &[Q],
    opts: &EvalOptions,
) -> Result<Evaluation> {
    residue_named(None, nvars, factors, t, opts)
}

/// As [`residue_with_exp`], memoizing the assembled product under `key`,
/// which must determine the factors completely.
pub fn residue_named(
    key: Option<&str>,
    nvars: usize,
    factors: &[LazyFactor<'_>],
    t: &[Q],
    opts: &EvalOptions,
) -> Result<Evaluation> {
    let s0 = assemble_named(key, nvars, factors, 0)?;
    let value = s0.0.residue_against_exp(t)?;
    if opts.check_stability {
        let s1 = assemble_named(key, nvars, factors, enlargement_step(nvars))?;
        let v1 = s1.0.residue_against_exp(t)?;
        STABILITY_CHECKS.fetch_add(1, Ordering::Relaxed);
        if v1 != value {
            return Err(Error::Unstable(format!(
                "residue changed from {:?} to {:?} under enlargement",
                value.to_map(),
                v1.to_map()
            )));
        }
    }
    Ok(Evaluation {
        value,
        plan: s0.1.clone(),
    })
}

/// Σ c·e^{ℓ} for hand-built integrands.
pub fn exp_combination(terms: &[(Q, LinearFormY)], nvars: usize, cap: i64) -> Result<NestedLaurent> {
    let mut acc = NestedLaurent::zero(nvars, cap).with_val(0);
    for (c, l) in terms {
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&exp_series(l, None, cap)?.scale(c));
    }
    Ok(acc)
}
