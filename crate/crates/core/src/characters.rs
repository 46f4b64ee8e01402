//! Weight multiplicities of GL_r irreducibles and the exponential sums
//! built from them.
//!
//! Multiplicities come from Gelfand–Tsetlin pattern counting; Freudenthal's
//! recursion is kept as an independent cross-check.

use crate::error::{Error, Result};
use crate::rational::{q, qf, Q};
use crate::root_system::{killing_norm2, CoVector, Vector, WallSpec};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::{Arc, OnceLock, RwLock};

/// A dominant weight ν_1 ≥ … ≥ ν_r.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HighestWeight {
    nu: Vec<i64>,
}

impl HighestWeight {
    pub fn new(nu: Vec<i64>) -> Result<Self> {
        if nu.is_empty() {
            return Err(Error::InvalidWeight("empty weight".into()));
        }
        if nu.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidWeight(format!("{nu:?} is not weakly decreasing")));
        }
        Ok(HighestWeight { nu })
    }

    pub fn zero(r: usize) -> Self {
        HighestWeight { nu: vec![0; r] }
    }

    pub fn rank(&self) -> usize {
        self.nu.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.nu
    }

    pub fn size(&self) -> i64 {
        self.nu.iter().sum()
    }

    pub fn is_scalar(&self) -> bool {
        self.nu.iter().all(|&x| x == self.nu[0])
    }
}

/// Π_{i<j} (ν_i − ν_j + j − i)/(j − i).
pub fn weyl_dimension(nu: &HighestWeight) -> Q {
    let v = &nu.nu;
    let mut d = Q::one();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            d *= qf(v[i] - v[j] + (j - i) as i64, (j - i) as i64);
        }
    }
    d
}

/// Weight multiplicities μ ↦ m_μ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightTable {
    pub nu: HighestWeight,
    pub mults: BTreeMap<Vec<i64>, u64>,
}

impl WeightTable {
    pub fn dimension(&self) -> u64 {
        self.mults.values().sum()
    }

    pub fn get(&self, mu: &[i64]) -> u64 {
        self.mults.get(mu).copied().unwrap_or(0)
    }
}

type Memo = HashMap<Vec<i64>, Arc<BTreeMap<Vec<i64>, u64>>>;

fn gt_weights(row: &[i64], memo: &mut Memo) -> Arc<BTreeMap<Vec<i64>, u64>> {
    if let Some(m) = memo.get(row) {
        return m.clone();
    }
    let mut out: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
    let total: i64 = row.iter().sum();
    if row.len() == 1 {
        out.insert(vec![row[0]], 1);
    } else {
        // sub-rows s with row[i] ≥ s[i] ≥ row[i+1]
        let n = row.len() - 1;
        let mut s = vec![0i64; n];
        fn go(
            i: usize,
            row: &[i64],
            s: &mut Vec<i64>,
            total: i64,
            out: &mut BTreeMap<Vec<i64>, u64>,
            memo: &mut Memo,
        ) {
            if i == s.len() {
                let sub = gt_weights(s, memo);
                let last = total - s.iter().sum::<i64>();
                for (mu, c) in sub.iter() {
                    let mut m = mu.clone();
                    m.push(last);
                    *out.entry(m).or_insert(0) += c;
                }
                return;
            }
            for v in row[i + 1]..=row[i] {
                s[i] = v;
                go(i + 1, row, s, total, out, memo);
            }
        }
        go(0, row, &mut s, total, &mut out, memo);
    }
    let out = Arc::new(out);
    memo.insert(row.to_vec(), out.clone());
    out
}

/// Multiplicities by Gelfand–Tsetlin patterns.
pub fn weight_table_gt(nu: &HighestWeight) -> WeightTable {
    let mut memo = Memo::new();
    let m = gt_weights(&nu.nu, &mut memo);
    WeightTable {
        nu: nu.clone(),
        mults: (*m).clone(),
    }
}

fn dominant_below(nu: &[i64]) -> Vec<Vec<i64>> {
    let r = nu.len();
    let total: i64 = nu.iter().sum();
    let prefix: Vec<i64> = nu
        .iter()
        .scan(0, |s, x| {
            *s += x;
            Some(*s)
        })
        .collect();
    let mut out = Vec::new();
    fn go(
        i: usize,
        cur: &mut Vec<i64>,
        acc: i64,
        nu: &[i64],
        prefix: &[i64],
        total: i64,
        out: &mut Vec<Vec<i64>>,
    ) {
        let r = nu.len();
        if i == r - 1 {
            let last = total - acc;
            if last <= *cur.last().unwrap_or(&i64::MAX) && last >= nu[r - 1] {
                cur.push(last);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let hi = cur.last().copied().unwrap_or(nu[0]).min(prefix[i] - acc);
        let mut v = hi;
        // remaining entries are ≤ v, so acc + v·(r−i) ≥ total is needed
        while acc + v * (r - i) as i64 >= total {
            cur.push(v);
            go(i + 1, cur, acc + v, nu, prefix, total, out);
            cur.pop();
            v -= 1;
        }
    }
    if r == 1 {
        return vec![nu.to_vec()];
    }
    go(0, &mut Vec::new(), 0, nu, &prefix, total, &mut out);
    out
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn all_permutations_of(mu: &[i64]) -> Vec<Vec<i64>> {
    let mut v = mu.to_vec();
    v.sort();
    let mut out = vec![v.clone()];
    // next lexicographic permutation
    loop {
        let n = v.len();
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).unwrap();
        v.swap(i, j);
        v[i + 1..].reverse();
        out.push(v.clone());
    }
    out
}

/// Multiplicities by Freudenthal's recursion.
pub fn weight_table_freudenthal(nu: &HighestWeight) -> WeightTable {
    let r = nu.rank();
    let v = &nu.nu;
    let rho: Vec<i64> = (0..r).map(|i| (r - 1 - i) as i64).collect();
    let add = |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
    let norm = |a: &[i64]| -> i64 {
        let s = add(a, &rho);
        dot(&s, &s)
    };
    let mut doms = dominant_below(v);
    let height = |mu: &[i64]| -> i64 {
        let mut s = 0;
        let mut h = 0;
        for i in 0..r {
            s += v[i] - mu[i];
            h += s;
        }
        h
    };
    doms.sort_by_key(|m| height(m));
    let mut dm: HashMap<Vec<i64>, u64> = HashMap::new();
    let lookup = |dm: &HashMap<Vec<i64>, u64>, w: &[i64]| -> u64 {
        let mut s = w.to_vec();
        s.sort_by(|a, b| b.cmp(a));
        dm.get(&s).copied().unwrap_or(0)
    };
    let top = norm(v);
    for mu in &doms {
        if mu == v {
            dm.insert(mu.clone(), 1);
            continue;
        }
        let mut acc: i64 = 0;
        for i in 0..r {
            for j in i + 1..r {
                let mut alpha = vec![0i64; r];
                alpha[i] = 1;
                alpha[j] = -1;
                let mut k = 1;
                loop {
                    let w: Vec<i64> = mu.iter().zip(&alpha).map(|(a, b)| a + k * b).collect();
                    let m = lookup(&dm, &w);
                    if m == 0 {
                        break;
                    }
                    acc += m as i64 * dot(&w, &alpha);
                    k += 1;
                }
            }
        }
        let den = top - norm(mu);
        let m = if den == 0 { 0 } else { 2 * acc / den };
        if m > 0 {
            dm.insert(mu.clone(), m as u64);
        }
    }
    let mut mults = BTreeMap::new();
    for (mu, m) in dm {
        for p in all_permutations_of(&mu) {
            mults.insert(p, m);
        }
    }
    WeightTable {
        nu: nu.clone(),
        mults,
    }
}

static MEMO: OnceLock<RwLock<HashMap<HighestWeight, Arc<WeightTable>>>> = OnceLock::new();
static CACHE_DIR: OnceLock<RwLock<Option<PathBuf>>> = OnceLock::new();

/// Environment variable naming an on-disk weight-table cache.
pub const CACHE_ENV: &str = "PARCHI_CACHE_DIR";
const CACHE_VERSION: u32 = 1;

/// Set (or clear) the on-disk cache directory; overrides the environment.
pub fn set_cache_dir(dir: Option<PathBuf>) {
    let lock = CACHE_DIR.get_or_init(|| RwLock::new(None));
    *lock.write().unwrap() = dir;
}

fn cache_dir() -> Option<PathBuf> {
    let lock = CACHE_DIR.get_or_init(|| RwLock::new(std::env::var_os(CACHE_ENV).map(PathBuf::from)));
    lock.read().unwrap().clone()
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    table: WeightTable,
}

fn cache_path(dir: &std::path::Path, nu: &HighestWeight) -> PathBuf {
    let name: Vec<String> = nu.nu.iter().map(|x| x.to_string()).collect();
    dir.join(format!("weights-v{CACHE_VERSION}-r{}-{}.json", nu.rank(), name.join("_")))
}

fn load_cached(nu: &HighestWeight) -> Option<WeightTable> {
    let dir = cache_dir()?;
    let text = std::fs::read_to_string(cache_path(&dir, nu)).ok()?;
    let f: CacheFile = serde_json::from_str(&text).ok()?;
    (f.version == CACHE_VERSION && f.table.nu == *nu && f.table.dimension() as u128 == weyl_dimension(nu).to_integer().try_into().unwrap_or(0))
        .then_some(f.table)
}

fn store_cached(t: &WeightTable) {
    let Some(dir) = cache_dir() else { return };
    if std::fs::create_dir_all(&dir).is_err() {
        return;
    }
    let f = CacheFile {
        version: CACHE_VERSION,
        table: t.clone(),
    };
    if let Ok(s) = serde_json::to_string(&f) {
        // write-then-rename so readers never see a partial file
        let path = cache_path(&dir, &t.nu);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        if std::fs::write(&tmp, s).is_ok() {
            let _ = std::fs::rename(&tmp, &path);
        }
    }
}

/// Memoized weight table (GT algorithm).
pub fn weight_table(nu: &HighestWeight) -> Arc<WeightTable> {
    let memo = MEMO.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = memo.read().unwrap().get(nu) {
        return t.clone();
    }
    let t = match load_cached(nu) {
        Some(t) => t,
        None => {
            let t = weight_table_gt(nu);
            store_cached(&t);
            t
        }
    };
    let t = Arc::new(t);
    memo.write().unwrap().entry(nu.clone()).or_insert(t).clone()
}

/// A finite sum Σ c_μ e^{⟨μ, x⟩} with μ ∈ V*.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CharacterSum {
    terms: BTreeMap<CoVector, Q>,
}

impl CharacterSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(r: usize, c: Q) -> Self {
        let mut s = Self::new();
        s.add_term(CoVector::zero(r), c);
        s
    }

    pub fn exponential(mu: CoVector) -> Self {
        let mut s = Self::new();
        s.add_term(mu, Q::one());
        s
    }

    pub fn add_term(&mut self, mu: CoVector, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mu).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CoVector, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at x = 0.
    pub fn at_zero(&self) -> Q {
        self.terms.values().fold(Q::zero(), |a, b| a + b)
    }

    pub fn map_coeffs(&self, f: impl Fn(&CoVector, &Q) -> Q) -> CharacterSum {
        let mut out = CharacterSum::new();
        for (mu, c) in &self.terms {
            out.add_term(mu.clone(), f(mu, c));
        }
        out
    }

    pub fn scale(&self, s: &Q) -> CharacterSum {
        self.map_coeffs(|_, c| c * s)
    }

    pub fn add(&self, o: &CharacterSum) -> CharacterSum {
        let mut out = self.clone();
        for (mu, c) in &o.terms {
            out.add_term(mu.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, o: &CharacterSum) -> CharacterSum {
        let mut out = CharacterSum::new();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_term(a.add(b), x * y);
            }
        }
        out
    }

    /// Multiply by e^{⟨w, x⟩}.
    pub fn shift(&self, w: &CoVector) -> CharacterSum {
        let mut out = CharacterSum::new();
        for (mu, c) in &self.terms {
            out.add_term(mu.add(w), c.clone());
        }
        out
    }

    /// x ↦ f(n x).
    pub fn adams_twist(&self, n: i64) -> CharacterSum {
        let mut out = CharacterSum::new();
        for (mu, c) in &self.terms {
            out.add_term(mu.scale(&q(n)), c.clone());
        }
        out
    }

    /// Derivative along v.
    pub fn directional_derivative(&self, v: &Vector) -> CharacterSum {
        self.map_coeffs(|mu, c| c * mu.pair(v))
    }

    /// Laplacian in K-orthonormal coordinates.
    pub fn hessian_trace(&self) -> CharacterSum {
        self.map_coeffs(|mu, c| c * killing_norm2(mu))
    }
}

/// φ^ν = Σ m_μ e^{⟨μ − |ν|/r, x⟩}.
pub fn character(nu: &HighestWeight) -> CharacterSum {
    let r = nu.rank();
    let t = weight_table(nu);
    let shift = qf(nu.size(), r as i64);
    let mut out = CharacterSum::new();
    for (mu, m) in &t.mults {
        let coords: Vec<Q> = mu.iter().map(|&x| q(x) - &shift).collect();
        out.add_term(CoVector::new(coords).expect("projected weight"), q(*m as i64));
    }
    out
}

/// One summand of the restriction to GL(Π′) × GL(Π″).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub nu1: HighestWeight,
    pub nu2: HighestWeight,
    pub mult: u64,
    /// Σ_{i∈Π′} (ν′_i − |ν|/r)
    pub s: Q,
}

fn split(mu: &[i64], w: &WallSpec) -> (Vec<i64>, Vec<i64>) {
    (
        w.pi1.iter().map(|&i| mu[i - 1]).collect(),
        w.pi2.iter().map(|&i| mu[i - 1]).collect(),
    )
}

/// Restriction by peeling lex-highest weights off the weight table.
pub fn branch(nu: &HighestWeight, w: &WallSpec) -> Result<Vec<Branch>> {
    if nu.rank() != w.rank() {
        return Err(Error::RankMismatch {
            expected: w.rank(),
            got: nu.rank(),
        });
    }
    let t = weight_table(nu);
    let mut rem: BTreeMap<(Vec<i64>, Vec<i64>), i64> = BTreeMap::new();
    for (mu, m) in &t.mults {
        *rem.entry(split(mu, w)).or_insert(0) += *m as i64;
    }
    let r = nu.rank() as i64;
    let mut out = Vec::new();
    while let Some(((a, b), &m)) = rem.iter().next_back().map(|(k, v)| (k.clone(), v)) {
        if m < 0 {
            return Err(Error::Internal("negative multiplicity while branching".into()));
        }
        let nu1 = HighestWeight::new(a.clone())?;
        let nu2 = HighestWeight::new(b.clone())?;
        let t1 = weight_table(&nu1);
        let t2 = weight_table(&nu2);
        for (m1, c1) in &t1.mults {
            for (m2, c2) in &t2.mults {
                let key = (m1.clone(), m2.clone());
                let e = rem.entry(key.clone()).or_insert(0);
                *e -= m * (*c1 * *c2) as i64;
                if *e == 0 {
                    rem.remove(&key);
                } else if *e < 0 {
                    return Err(Error::Internal("negative multiplicity while branching".into()));
                }
            }
        }
        let s = q(nu1.size()) - qf(nu.size() * nu1.rank() as i64, r);
        out.push(Branch {
            nu1,
            nu2,
            mult: m as u64,
            s,
        });
    }
    Ok(out)
}

/// Which θ-vertex chamber a shifted characteristic refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// P_0(>), coefficients m_μ μ_r
    Plus,
    /// P_0(<), coefficients m_μ μ_1
    Minus,
}

/// Line-bundle shifts (μ_1, …, μ_{r−1}, μ_r − |ν|) with integer weights
/// m_μ μ_1 (minus side) or m_μ μ_r (plus side).
pub fn hecke_shift_coefficients(nu: &HighestWeight, side: Side) -> Vec<(CoVector, i64)> {
    let r = nu.rank();
    let t = weight_table(nu);
    let mut acc: BTreeMap<CoVector, i64> = BTreeMap::new();
    for (mu, m) in &t.mults {
        let c = *m as i64
            * match side {
                Side::Minus => mu[0],
                Side::Plus => mu[r - 1],
            };
        if c == 0 {
            continue;
        }
        let mut sh: Vec<i64> = mu.clone();
        sh[r - 1] -= nu.size();
        let cv = CoVector::from_i64s(&sh).expect("shift sums to zero");
        *acc.entry(cv).or_insert(0) += c;
    }
    acc.into_iter().filter(|(_, c)| *c != 0).collect()
}

/// All dominant weights of rank r with entries in [lo, hi].
pub fn dominant_weights(r: usize, lo: i64, hi: i64) -> Vec<HighestWeight> {
    let mut out = Vec::new();
    fn go(r: usize, lo: i64, cur: &mut Vec<i64>, top: i64, out: &mut Vec<HighestWeight>) {
        if cur.len() == r {
            out.push(HighestWeight { nu: cur.clone() });
            return;
        }
        for v in (lo..=top).rev() {
            cur.push(v);
            go(r, lo, cur, v, out);
            cur.pop();
        }
    }
    go(r, lo, &mut Vec::new(), hi, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hw(v: &[i64]) -> HighestWeight {
        HighestWeight::new(v.to_vec()).unwrap()
    }

    #[test]
    fn small_tables() {
        let t = weight_table_gt(&hw(&[1, 0]));
        assert_eq!(t.mults.len(), 2);
        assert_eq!(t.get(&[1, 0]), 1);
        let t = weight_table_gt(&hw(&[2, 1]));
        assert_eq!(t.get(&[2, 1]), 1);
        assert_eq!(t.get(&[1, 2]), 1);
        assert_eq!(t.dimension(), 2);
        let t = weight_table_gt(&hw(&[2, 1, 0]));
        assert_eq!(t.get(&[1, 1, 1]), 2);
        assert_eq!(t.dimension(), 8);
    }

    #[test]
    fn freudenthal_matches_gt() {
        for nu in [&[2, 1, 0][..], &[3, 1, 0], &[2, 0, 0, -1], &[1, 1, 0, 0]] {
            let nu = hw(nu);
            assert_eq!(weight_table_gt(&nu), weight_table_freudenthal(&nu), "{nu:?}");
        }
    }

    #[test]
    fn rank3_branching() {
        let w = WallSpec::new(3, vec![2], 0).unwrap();
        let b = branch(&hw(&[1, 0, 0]), &w).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b.iter().any(|x| x.nu1.coords() == [0] && x.nu2.coords() == [1, 0]));
        assert!(b.iter().any(|x| x.nu1.coords() == [1] && x.nu2.coords() == [0, 0]));
    }

    #[test]
    fn hecke_example() {
        let nu = hw(&[1, 0, 0]);
        let m = hecke_shift_coefficients(&nu, Side::Minus);
        assert_eq!(m, vec![(CoVector::from_i64s(&[1, 0, -1]).unwrap(), 1)]);
        let p = hecke_shift_coefficients(&nu, Side::Plus);
        assert_eq!(p, vec![(CoVector::zero(3), 1)]);
        assert!(hecke_shift_coefficients(&HighestWeight::zero(3), Side::Plus).is_empty());
    }
}
