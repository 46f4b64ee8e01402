//! Type A root data: the spaces V* and V of sum-zero vectors, roots,
//! ordered bases with their bracket decomposition, regularity, walls and
//! chambers of parabolic weights, and the affine Weyl group action.

use crate::error::{Error, Result};
use crate::rational::{floor_q, fmt_q, parse_q, q, qf, qi, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

fn sum(v: &[Q]) -> Q {
    v.iter().fold(Q::zero(), |a, b| a + b)
}

fn fmt_coords(f: &mut fmt::Formatter<'_>, v: &[Q]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{}", fmt_q(x))?;
    }
    write!(f, ")")
}

/// An element of V* = {a in Q^r : sum a_i = 0}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoVector {
    coords: Vec<Q>,
}

impl CoVector {
    pub fn new(coords: Vec<Q>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidRank(0));
        }
        let s = sum(&coords);
        if !s.is_zero() {
            return Err(Error::NotSumZero(fmt_q(&s)));
        }
        Ok(CoVector { coords })
    }

    pub fn from_i64s(v: &[i64]) -> Result<Self> {
        Self::new(v.iter().map(|&x| q(x)).collect())
    }

    pub fn parse(v: &[&str]) -> Result<Self> {
        Self::new(v.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?)
    }

    pub fn zero(r: usize) -> Self {
        CoVector {
            coords: vec![Q::zero(); r],
        }
    }

    /// Basis covector x_i (1-based) minus its mean, i.e. the projection of e_i.
    pub fn unit_projected(r: usize, i: usize) -> Self {
        let mut c = vec![-qf(1, r as i64); r];
        c[i - 1] += Q::one();
        CoVector { coords: c }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, o: &CoVector) -> CoVector {
        debug_assert_eq!(self.rank(), o.rank());
        CoVector {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &CoVector) -> CoVector {
        debug_assert_eq!(self.rank(), o.rank());
        CoVector {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> CoVector {
        CoVector {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> CoVector {
        CoVector {
            coords: self.coords.iter().map(|a| a * s).collect(),
        }
    }

    /// Natural pairing with V.
    pub fn pair(&self, v: &Vector) -> Q {
        self.coords
            .iter()
            .zip(&v.coords)
            .fold(Q::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Coordinate dot product of two covectors.
    pub fn dot(&self, o: &CoVector) -> Q {
        self.coords
            .iter()
            .zip(&o.coords)
            .fold(Q::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|x| x.is_integer())
    }

    pub fn to_lattice(&self) -> Option<LatticePoint> {
        if !self.is_integral() {
            return None;
        }
        Some(LatticePoint {
            coords: self.coords.iter().map(|x| x.numer().clone()).collect(),
        })
    }

    pub fn permute(&self, s: &Permutation) -> CoVector {
        CoVector {
            coords: s.apply(&self.coords),
        }
    }
}

impl fmt::Display for CoVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_coords(f, &self.coords)
    }
}

impl Serialize for CoVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coords.iter().map(fmt_q))
    }
}

impl<'de> Deserialize<'de> for CoVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let c = v
            .iter()
            .map(|s| parse_q(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        CoVector::new(c).map_err(serde::de::Error::custom)
    }
}

/// An element of V = Q^r / Q(1,...,1), stored as its sum-zero representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector {
    coords: Vec<Q>,
}

impl Vector {
    /// Any representative; it is projected to the sum-zero one.
    pub fn new(coords: Vec<Q>) -> Self {
        let n = coords.len() as i64;
        let mean = sum(&coords) / q(n);
        Vector {
            coords: coords.into_iter().map(|x| x - &mean).collect(),
        }
    }

    pub fn from_i64s(v: &[i64]) -> Self {
        Self::new(v.iter().map(|&x| q(x)).collect())
    }

    pub fn zero(r: usize) -> Self {
        Vector {
            coords: vec![Q::zero(); r],
        }
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn scale(&self, s: &Q) -> Vector {
        Vector {
            coords: self.coords.iter().map(|a| a * s).collect(),
        }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_coords(f, &self.coords)
    }
}

/// A point of the weight lattice Λ (integer, sum zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    coords: Vec<BigInt>,
}

impl LatticePoint {
    pub fn new(coords: Vec<BigInt>) -> Result<Self> {
        let s = coords.iter().fold(BigInt::zero(), |a, b| a + b);
        if !s.is_zero() {
            return Err(Error::NotSumZero(s.to_string()));
        }
        if coords.is_empty() {
            return Err(Error::InvalidRank(0));
        }
        Ok(LatticePoint { coords })
    }

    pub fn from_i64s(v: &[i64]) -> Result<Self> {
        Self::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(r: usize) -> Self {
        LatticePoint {
            coords: vec![BigInt::zero(); r],
        }
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn to_covector(&self) -> CoVector {
        CoVector {
            coords: self.coords.iter().map(qi).collect(),
        }
    }

    pub fn add(&self, o: &LatticePoint) -> LatticePoint {
        LatticePoint {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for LatticePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coords.iter().map(|x| x.to_string()))
    }
}

/// The root α^{ij} = x_i − x_j, indices 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    pub i: usize,
    pub j: usize,
}

impl Root {
    pub fn new(i: usize, j: usize, r: usize) -> Result<Self> {
        if i == j || i == 0 || j == 0 || i > r || j > r {
            return Err(Error::InvalidRoot(i, j));
        }
        Ok(Root { i, j })
    }

    pub fn neg(&self) -> Root {
        Root { i: self.j, j: self.i }
    }

    pub fn covector(&self, r: usize) -> CoVector {
        let mut c = vec![Q::zero(); r];
        c[self.i - 1] = Q::one();
        c[self.j - 1] = -Q::one();
        CoVector { coords: c }
    }

    pub fn is_positive(&self) -> bool {
        self.i < self.j
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}{}", self.i, self.j)
    }
}

/// Positive roots α^{ij}, i < j, in lexicographic order.
pub fn positive_roots(r: usize) -> Vec<Root> {
    let mut out = Vec::new();
    for i in 1..=r {
        for j in (i + 1)..=r {
            out.push(Root { i, j });
        }
    }
    out
}

/// A permutation of {1..r}, stored 0-based as the image of each index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidOrdering(format!("{images:?}")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(r: usize) -> Self {
        Permutation {
            images: (0..r).collect(),
        }
    }

    /// The transposition s_{ij}, 1-based.
    pub fn transposition(r: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..r).collect();
        images.swap(i - 1, j - 1);
        Permutation { images }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// (σ·v)_{σ(i)} = v_i.
    pub fn apply<T: Clone>(&self, v: &[T]) -> Vec<T> {
        let mut out = v.to_vec();
        for (i, &s) in self.images.iter().enumerate() {
            out[s] = v[i].clone();
        }
        out
    }

    pub fn compose(&self, inner: &Permutation) -> Permutation {
        Permutation {
            images: inner.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn sign(&self) -> i64 {
        let mut seen = vec![false; self.images.len()];
        let mut s = 1;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            if len % 2 == 0 {
                s = -s;
            }
        }
        s
    }
}

/// Elements of the affine Weyl group Σ ⋉ Λ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineElement {
    Perm(Permutation),
    Translate(LatticePoint),
    /// Apply the inner elements right to left: `Compose(vec![a, b])` is a∘b.
    Compose(Vec<AffineElement>),
}

/// An ordered basis of V* made of roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderedBasis {
    r: usize,
    roots: Vec<Root>,
    /// Inverse of the coordinate matrix on the first r−1 coordinates.
    inv: Vec<Vec<Q>>,
}

impl OrderedBasis {
    pub fn new(r: usize, roots: Vec<Root>) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidRank(r));
        }
        if roots.len() != r - 1 {
            return Err(Error::SingularBasis);
        }
        for rt in &roots {
            Root::new(rt.i, rt.j, r)?;
        }
        let n = r - 1;
        // m[row k][col j] = coordinate k of β_j
        let mut m: Vec<Vec<Q>> = (0..n)
            .map(|k| roots.iter().map(|b| b.covector(r).coords[k].clone()).collect())
            .collect();
        let inv = invert(&mut m).ok_or(Error::SingularBasis)?;
        Ok(OrderedBasis { r, roots, inv })
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Determinant of the coordinate matrix on the first r−1 coordinates.
    pub fn determinant(&self) -> Q {
        let n = self.r - 1;
        let m: Vec<Vec<Q>> = (0..n)
            .map(|k| {
                self.roots
                    .iter()
                    .map(|b| b.covector(self.r).coords[k].clone())
                    .collect()
            })
            .collect();
        det(m)
    }
}

fn invert(m: &mut [Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut inv: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let p = m[col][col].clone();
        for j in 0..n {
            m[col][j] = &m[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..n {
                    let a = &m[col][j] * &f;
                    m[i][j] -= a;
                    let b = &inv[col][j] * &f;
                    inv[i][j] -= b;
                }
            }
        }
    }
    Some(inv)
}

fn det(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut d = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            m.swap(col, piv);
            d = -d;
        }
        let p = m[col][col].clone();
        d *= &p;
        for i in (col + 1)..n {
            if !m[i][col].is_zero() {
                let f = &m[i][col] / &p;
                for j in col..n {
                    let a = &m[col][j] * &f;
                    m[i][j] -= a;
                }
            }
        }
    }
    d
}

/// ρ = ½(r−1, r−3, …, −r+1).
pub fn rho(r: usize) -> Result<CoVector> {
    if r < 2 {
        return Err(Error::InvalidRank(r));
    }
    let coords = (0..r)
        .map(|i| qf(r as i64 - 1 - 2 * i as i64, 2))
        .collect();
    Ok(CoVector { coords })
}

/// v_det = (|ν|/r)(1, …, 1, 1−r).
pub fn v_det(r: usize, size: i64) -> CoVector {
    let mut coords = vec![qf(size, r as i64); r];
    coords[r - 1] = qf(size * (1 - r as i64), r as i64);
    CoVector { coords }
}

/// The vector v with K(v, ·) = ⟨a, ·⟩; on sum-zero representatives this is
/// the identity on coordinates.
pub fn killing_dual(a: &CoVector) -> Vector {
    Vector {
        coords: a.coords.clone(),
    }
}

/// Σ a_i² on the sum-zero representative.
pub fn killing_norm2(a: &CoVector) -> Q {
    a.dot(a)
}

/// Coefficients t with a = Σ t_j β^[j].
pub fn expand_in_basis(a: &CoVector, b: &OrderedBasis) -> Result<Vec<Q>> {
    if a.rank() != b.r {
        return Err(Error::RankMismatch {
            expected: b.r,
            got: a.rank(),
        });
    }
    let n = b.r - 1;
    Ok((0..n)
        .map(|j| {
            (0..n).fold(Q::zero(), |acc, k| acc + &b.inv[j][k] * &a.coords[k])
        })
        .collect())
}

/// The decomposition a = [a]_B + {a}_B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub integral: CoVector,
    pub fractional: CoVector,
    /// floor of each basis coefficient
    pub coeffs: Vec<BigInt>,
}

pub fn bracket(a: &CoVector, b: &OrderedBasis) -> Result<Bracket> {
    let t = expand_in_basis(a, b)?;
    let coeffs: Vec<BigInt> = t.iter().map(floor_q).collect();
    let mut integral = CoVector::zero(b.r);
    for (c, rt) in coeffs.iter().zip(&b.roots) {
        integral = integral.add(&rt.covector(b.r).scale(&qi(c)));
    }
    let fractional = a.sub(&integral);
    Ok(Bracket {
        integral,
        fractional,
        coeffs,
    })
}

fn proper_subsets(r: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u64..(1u64 << r) - 1).map(move |mask| (0..r).filter(|i| mask >> i & 1 == 1).collect())
}

/// No proper nonempty subset of coordinates sums to an integer.
pub fn is_regular(c: &CoVector) -> bool {
    proper_subsets(c.rank()).all(|s| {
        let t = s.iter().fold(Q::zero(), |acc, &i| acc + &c.coords[i]);
        !t.is_integer()
    })
}

/// c_1 > … > c_r and c_1 − c_r < 1.
pub fn in_simplex(c: &CoVector) -> bool {
    let v = &c.coords;
    v.windows(2).all(|w| w[0] > w[1]) && &v[0] - &v[v.len() - 1] < Q::one()
}

/// Apply an affine Weyl group element at level k.
pub fn affine_weyl_act(
    e: &AffineElement,
    k: i64,
    lambda: &LatticePoint,
    vdet: &CoVector,
) -> Result<LatticePoint> {
    let r = lambda.rank();
    match e {
        AffineElement::Translate(g) => {
            let shift: Vec<BigInt> = g
                .coords
                .iter()
                .map(|x| x * BigInt::from(k + r as i64))
                .collect();
            Ok(lambda.add(&LatticePoint { coords: shift }))
        }
        AffineElement::Perm(s) => {
            let base = rho(r)?.add(vdet);
            let moved = lambda.to_covector().add(&base).permute(s).sub(&base);
            moved
                .to_lattice()
                .ok_or_else(|| Error::Convention(format!("non-integral affine image {moved}")))
        }
        AffineElement::Compose(parts) => {
            let mut cur = lambda.clone();
            for p in parts.iter().rev() {
                cur = affine_weyl_act(p, k, &cur, vdet)?;
            }
            Ok(cur)
        }
    }
}

/// The two vertices θ_{±1}[k] and their level-free versions θ_{±1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaPoints {
    pub theta1_k: CoVector,
    pub theta_m1_k: CoVector,
    pub theta1: CoVector,
    pub theta_m1: CoVector,
}

pub fn theta_points(k: i64, r: usize) -> Result<ThetaPoints> {
    let rh = rho(r)?;
    let ri = r as i64;
    let mut t1 = vec![qf(1, ri); r];
    t1[r - 1] -= Q::one();
    let mut tm1 = vec![-qf(1, ri); r];
    tm1[0] += Q::one();
    let theta1 = CoVector { coords: t1 };
    let theta_m1 = CoVector { coords: tm1 };
    let kr = q(k + ri);
    Ok(ThetaPoints {
        theta1_k: theta1.scale(&kr).sub(&rh),
        theta_m1_k: theta_m1.scale(&kr).sub(&rh),
        theta1,
        theta_m1,
    })
}

/// A nontrivial partition Π = (Π′, Π″) with r ∈ Π″ and a level l.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WallSpec {
    pub pi1: Vec<usize>,
    pub pi2: Vec<usize>,
    pub level: i64,
}

impl WallSpec {
    pub fn new(r: usize, mut pi1: Vec<usize>, level: i64) -> Result<Self> {
        pi1.sort_unstable();
        pi1.dedup();
        if pi1.is_empty() || pi1.iter().any(|&i| i == 0 || i >= r) {
            return Err(Error::InvalidWall(format!(
                "Π′ = {pi1:?} must be a nonempty subset of 1..{}",
                r - 1
            )));
        }
        let pi2 = (1..=r).filter(|i| !pi1.contains(i)).collect();
        Ok(WallSpec { pi1, pi2, level })
    }

    pub fn rank(&self) -> usize {
        self.pi1.len() + self.pi2.len()
    }

    /// c_{Π′} = Σ_{i∈Π′} c_i.
    pub fn partial_sum(&self, c: &CoVector) -> Q {
        self.pi1
            .iter()
            .fold(Q::zero(), |acc, &i| acc + &c.coords()[i - 1])
    }
}

impl fmt::Display for WallSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({:?}|{:?}, {})", self.pi1, self.pi2, self.level)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChamberRelation {
    SameChamber,
    SeparatedBy(Vec<WallSpec>),
}

/// Compare two regular weights: they lie in one chamber iff no wall
/// Σ_{Π′} c = l lies between them.
pub fn classify_chamber(c1: &CoVector, c2: &CoVector) -> Result<ChamberRelation> {
    let r = c1.rank();
    if c2.rank() != r {
        return Err(Error::RankMismatch {
            expected: r,
            got: c2.rank(),
        });
    }
    for c in [c1, c2] {
        if !is_regular(c) {
            return Err(Error::IrregularWeight(c.to_string()));
        }
    }
    let mut walls = Vec::new();
    for mask in 1u64..(1u64 << (r - 1)) {
        let pi1: Vec<usize> = (0..r - 1).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        let w = WallSpec::new(r, pi1, 0)?;
        let f1 = floor_q(&w.partial_sum(c1));
        let f2 = floor_q(&w.partial_sum(c2));
        let (lo, hi) = if f1 <= f2 { (f1, f2) } else { (f2, f1) };
        let mut l: BigInt = lo + 1;
        while l <= hi {
            let level: i64 = l.clone().try_into().map_err(|_| Error::Internal("wall level".into()))?;
            walls.push(WallSpec {
                level,
                ..w.clone()
            });
            l += 1;
        }
    }
    Ok(if walls.is_empty() {
        ChamberRelation::SameChamber
    } else {
        ChamberRelation::SeparatedBy(walls)
    })
}

/// The integer parts of c_Π′ for every Π′ ⊆ {1, …, r−1}, ordered by the
/// bitmask of Π′. Two regular weights share a chamber iff these agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberLevel {
    pub pi1: Vec<usize>,
    pub level: i64,
}

pub fn chamber_signature(c: &CoVector) -> Result<Vec<ChamberLevel>> {
    let r = c.rank();
    if !is_regular(c) {
        return Err(Error::IrregularWeight(c.to_string()));
    }
    (1u64..(1u64 << (r - 1)))
        .map(|mask| {
            let pi1: Vec<usize> = (0..r - 1).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
            let w = WallSpec::new(r, pi1.clone(), 0)?;
            let level = floor_q(&w.partial_sum(c))
                .try_into()
                .map_err(|_| Error::InvalidQuery("weight out of range".into()))?;
            Ok(ChamberLevel { pi1, level })
        })
        .collect()
}

/// A regular point of Δ close to a vertex θ_{±1}; no wall passes through
/// these vertices, so the nearby chamber is unique.
pub fn chamber_point_near_theta(r: usize, plus: bool) -> Result<CoVector> {
    let th = theta_points(0, r)?;
    let ri = r as i64;
    let s: i64 = (1..ri).sum();
    let d: Vec<Q> = if plus {
        (0..r)
            .map(|i| if i + 1 == r { q(s) } else { q(-(i as i64) - 1) })
            .collect()
    } else {
        (0..r)
            .map(|i| if i == 0 { q(-s) } else { q(ri - i as i64) })
            .collect()
    };
    let base = if plus { th.theta1 } else { th.theta_m1 };
    // shrink until regular and inside the simplex
    let mut eps = qf(1, 97 * ri * ri * ri);
    for _ in 0..20 {
        let c = base.add(&CoVector::new(d.clone())?.scale(&eps));
        if is_regular(&c) && in_simplex(&c) {
            return Ok(c);
        }
        eps /= q(3);
    }
    Err(Error::Internal("no regular point near vertex".into()))
}

pub fn abs_det_is_one(b: &OrderedBasis) -> bool {
    b.determinant().abs() == Q::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(v: &[(i64, i64)]) -> CoVector {
        CoVector::new(v.iter().map(|&(n, d)| qf(n, d)).collect()).unwrap()
    }

    #[test]
    fn rho_values() {
        assert_eq!(rho(2).unwrap(), cv(&[(1, 2), (-1, 2)]));
        assert_eq!(rho(3).unwrap(), CoVector::from_i64s(&[1, 0, -1]).unwrap());
        assert_eq!(rho(4).unwrap(), cv(&[(3, 2), (1, 2), (-1, 2), (-3, 2)]));
        assert_eq!(rho(1), Err(Error::InvalidRank(1)));
    }

    #[test]
    fn killing() {
        let a = cv(&[(2, 3), (-1, 3), (-1, 3)]);
        assert_eq!(killing_norm2(&a), qf(2, 3));
        let r13 = Root::new(1, 3, 3).unwrap().covector(3);
        assert_eq!(killing_dual(&r13).coords(), r13.coords());
        assert_eq!(killing_norm2(&r13), q(2));
        assert_eq!(killing_norm2(&CoVector::zero(3)), q(0));
    }

    #[test]
    fn expansion_and_bracket() {
        let b = OrderedBasis::new(3, vec![Root { i: 2, j: 3 }, Root { i: 1, j: 2 }]).unwrap();
        let a13 = Root { i: 1, j: 3 }.covector(3);
        assert_eq!(expand_in_basis(&a13, &b).unwrap(), vec![q(1), q(1)]);
        let b2 = OrderedBasis::new(2, vec![Root { i: 1, j: 2 }]).unwrap();
        let a = cv(&[(3, 10), (-3, 10)]);
        assert_eq!(expand_in_basis(&a, &b2).unwrap(), vec![qf(3, 10)]);
        let br = bracket(&a, &b2).unwrap();
        assert!(br.integral.is_zero());
        assert_eq!(br.fractional, a);
        let br = bracket(&cv(&[(13, 10), (-13, 10)]), &b2).unwrap();
        assert_eq!(br.integral, Root { i: 1, j: 2 }.covector(2));
        let br = bracket(&a.neg(), &b2).unwrap();
        assert_eq!(br.integral, Root { i: 1, j: 2 }.covector(2).neg());
        assert_eq!(br.fractional, cv(&[(7, 10), (-7, 10)]));
    }

    #[test]
    fn regularity() {
        assert!(is_regular(&cv(&[(3, 10), (-3, 10)])));
        assert!(!is_regular(&cv(&[(1, 2), (0, 1), (-1, 2)])));
        assert!(is_regular(&cv(&[(2, 5), (1, 5), (-3, 5)])));
    }

    #[test]
    fn affine_action() {
        let l0 = LatticePoint::zero(2);
        let g = AffineElement::Translate(LatticePoint::from_i64s(&[1, -1]).unwrap());
        assert_eq!(
            affine_weyl_act(&g, 1, &l0, &CoVector::zero(2)).unwrap(),
            LatticePoint::from_i64s(&[3, -3]).unwrap()
        );
        let l = LatticePoint::from_i64s(&[1, -1]).unwrap();
        let id = AffineElement::Perm(Permutation::identity(2));
        assert_eq!(affine_weyl_act(&id, 1, &l, &CoVector::zero(2)).unwrap(), l);
        let s = AffineElement::Perm(Permutation::transposition(2, 1, 2));
        assert_eq!(
            affine_weyl_act(&s, 1, &l, &CoVector::zero(2)).unwrap(),
            LatticePoint::from_i64s(&[-2, 2]).unwrap()
        );
    }

    #[test]
    fn theta_values() {
        let t = theta_points(0, 2).unwrap();
        assert_eq!(t.theta_m1, cv(&[(1, 2), (-1, 2)]));
        let t = theta_points(1, 3).unwrap();
        assert_eq!(t.theta1_k, cv(&[(1, 3), (4, 3), (-5, 3)]));
        let rh = rho(3).unwrap();
        assert_eq!(t.theta1_k, t.theta1.scale(&q(4)).sub(&rh));
    }

    #[test]
    fn chambers() {
        let c1 = cv(&[(1, 5), (1, 10), (-3, 10)]);
        let c2 = cv(&[(1, 4), (1, 8), (-3, 8)]);
        assert_eq!(classify_chamber(&c1, &c2).unwrap(), ChamberRelation::SameChamber);
        let c3 = cv(&[(2, 5), (-1, 10), (-3, 10)]);
        assert_eq!(
            classify_chamber(&c1, &c3).unwrap(),
            ChamberRelation::SeparatedBy(vec![WallSpec::new(3, vec![2], 0).unwrap()])
        );
        assert_eq!(classify_chamber(&c1, &c1).unwrap(), ChamberRelation::SameChamber);
    }

    #[test]
    fn points_near_theta() {
        for r in 2..=5 {
            for plus in [true, false] {
                let c = chamber_point_near_theta(r, plus).unwrap();
                assert!(is_regular(&c) && in_simplex(&c));
            }
        }
    }
}
