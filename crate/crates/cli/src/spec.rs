//! Input documents. Rationals are strings such as "3/10"; integers are
//! plain JSON integers.

use crate::{CliError, CliResult};
use parchi::diagonal_trees::{enumerate_diagonal, DiagonalBasis};
use parchi::rational::{parse_q, qf};
use parchi::root_system::chamber_point_near_theta;
use parchi::{CoVector, EulerQuery, HighestWeight, LatticePoint};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Line,
    Vector,
    Multi,
    Wedge2,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Line => "line",
            Mode::Vector => "vector",
            Mode::Multi => "multi",
            Mode::Wedge2 => "wedge2",
        }
    }
}

/// One highest weight or a list of them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NuSpec {
    One(Vec<i64>),
    Many(Vec<Vec<i64>>),
}

impl NuSpec {
    pub fn list(&self) -> Vec<Vec<i64>> {
        match self {
            NuSpec::One(v) => vec![v.clone()],
            NuSpec::Many(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuerySpec {
    pub r: usize,
    pub g: i64,
    pub k: i64,
    /// defaults to 0
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<NuSpec>,
    /// defaults to a point near the vertex θ₁
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
}

/// Read a document given inline, as `@path`, or as `-` for stdin.
pub fn read_document(arg: Option<&str>) -> CliResult<String> {
    match arg {
        None | Some("-") => {
            let mut s = String::new();
            std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
                .map_err(|e| CliError::validation(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
        Some(a) => match a.strip_prefix('@') {
            Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::validation(format!("cannot read {p}: {e}"))),
            None => Ok(a.to_string()),
        },
    }
}

pub fn parse_c(r: usize, c: &Option<Vec<String>>) -> CliResult<CoVector> {
    match c {
        Some(v) => {
            if v.len() != r {
                return Err(CliError::validation(format!("c has {} entries, expected {r}", v.len())));
            }
            let coords = v.iter().map(|s| parse_q(s)).collect::<parchi::Result<Vec<_>>>()?;
            Ok(CoVector::new(coords)?)
        }
        None => default_c(r),
    }
}

/// (3/10, −3/10) for r = 2, otherwise a regular point next to θ₁.
pub fn default_c(r: usize) -> CliResult<CoVector> {
    if r == 2 {
        Ok(CoVector::new(vec![qf(3, 10), qf(-3, 10)])?)
    } else {
        Ok(chamber_point_near_theta(r, true)?)
    }
}

pub fn parse_lambda(r: usize, l: &Option<Vec<i64>>) -> CliResult<LatticePoint> {
    match l {
        Some(v) => {
            if v.len() != r {
                return Err(CliError::validation(format!("lambda has {} entries, expected {r}", v.len())));
            }
            Ok(LatticePoint::from_i64s(v)?)
        }
        None => Ok(LatticePoint::zero(r)),
    }
}

/// A basis from a JSON file holding a list of trees, each a list of
/// ordered edges [i, j]; otherwise the default search result.
pub fn load_basis(r: usize, file: Option<&Path>) -> CliResult<DiagonalBasis> {
    let Some(p) = file else {
        return Ok(enumerate_diagonal(r)?);
    };
    let text = std::fs::read_to_string(p).map_err(|e| CliError::validation(format!("cannot read {}: {e}", p.display())))?;
    let trees: Vec<Vec<[usize; 2]>> = serde_json::from_str(&text)?;
    Ok(DiagonalBasis::from_json(r, &trees)?)
}

/// The mode to use: the flag wins over the document, which wins over the
/// shape of `nu`.
pub fn pick_mode(flag: Option<Mode>, spec: Option<Mode>, nu: &Option<NuSpec>) -> Mode {
    flag.or(spec).unwrap_or(match nu {
        None => Mode::Line,
        Some(NuSpec::One(_)) => Mode::Vector,
        Some(NuSpec::Many(_)) => Mode::Multi,
    })
}

pub fn parse_nus(mode: Mode, r: usize, nu: &Option<NuSpec>) -> CliResult<Vec<HighestWeight>> {
    let list = nu.as_ref().map(NuSpec::list).unwrap_or_default();
    let want = match mode {
        Mode::Line if !list.is_empty() => return Err(CliError::validation("line mode takes no nu")),
        Mode::Line => return Ok(Vec::new()),
        Mode::Vector | Mode::Wedge2 => Some(1),
        Mode::Multi => None,
    };
    if list.is_empty() || want.is_some_and(|n| n != list.len()) {
        return Err(CliError::validation(format!(
            "{} mode needs {} highest weight(s), got {}",
            mode.name(),
            want.map_or("at least one".to_string(), |n| n.to_string()),
            list.len()
        )));
    }
    list.into_iter()
        .map(|v| {
            if v.len() != r {
                return Err(CliError::validation(format!("nu {v:?} has rank {}, expected {r}", v.len())));
            }
            Ok(HighestWeight::new(v)?)
        })
        .collect()
}

/// A validated query with its mode.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub mode: Mode,
    pub query: EulerQuery,
}

pub fn resolve(spec: &QuerySpec, mode_flag: Option<Mode>, basis: &DiagonalBasis) -> CliResult<Resolved> {
    let r = spec.r;
    if r < 2 {
        return Err(CliError::validation(format!("invalid rank {r}: need r >= 2")));
    }
    if basis.rank() != r {
        return Err(CliError::validation(format!("basis has rank {}, query has rank {r}", basis.rank())));
    }
    let mode = pick_mode(mode_flag, spec.mode, &spec.nu);
    let nus = parse_nus(mode, r, &spec.nu)?;
    let lambda = parse_lambda(r, &spec.lambda)?;
    let c = parse_c(r, &spec.c)?;
    let query = EulerQuery::new(spec.g, spec.k, lambda, nus, c, basis.clone())?;
    Ok(Resolved { mode, query })
}

/// An integer or an inclusive range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntRange {
    One(i64),
    Span { from: i64, to: i64 },
}

impl IntRange {
    pub fn bounds(&self) -> (i64, i64) {
        match *self {
            IntRange::One(v) => (v, v),
            IntRange::Span { from, to } => (from, to),
        }
    }
}

/// A bound that may refer to the level: an integer, or "k", "-k", "k+2",
/// "-k-1" and so on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Int(i64),
    Expr(String),
}

impl Bound {
    pub fn at(&self, k: i64) -> CliResult<i64> {
        match self {
            Bound::Int(v) => Ok(*v),
            Bound::Expr(s) => {
                let bad = || CliError::validation(format!("bad bound {s:?}: expected an integer or k with an optional ±offset"));
                let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
                let (sign, rest) = match t.strip_prefix('-') {
                    Some(r) => (-1, r),
                    None => (1, t.strip_prefix('+').unwrap_or(&t)),
                };
                let rest = rest.strip_prefix('k').ok_or_else(bad)?;
                let off = if rest.is_empty() {
                    0
                } else {
                    let (s2, digits) = match rest.split_at(1) {
                        ("+", d) => (1, d),
                        ("-", d) => (-1, d),
                        _ => return Err(bad()),
                    };
                    s2 * digits.parse::<i64>().map_err(|_| bad())?
                };
                Ok(sign * k + off)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundRange {
    One(Bound),
    Span { from: Bound, to: Bound },
}

impl BoundRange {
    pub fn at(&self, k: i64) -> CliResult<(i64, i64)> {
        match self {
            BoundRange::One(b) => {
                let v = b.at(k)?;
                Ok((v, v))
            }
            BoundRange::Span { from, to } => Ok((from.at(k)?, to.at(k)?)),
        }
    }
}

/// A grid of queries. `lambda` gives ranges for the first r − 1
/// coordinates; the last one makes the sum zero. `cs` lists several
/// weights and overrides `c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub r: usize,
    pub g: IntRange,
    pub k: IntRange,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<BoundRange>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<NuSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cs: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
}

pub const MAX_SWEEP_CELLS: u64 = 100_000;

fn span_len(lo: i64, hi: i64) -> u64 {
    if hi < lo {
        0
    } else {
        (hi as i128 - lo as i128 + 1).min(u64::MAX as i128) as u64
    }
}

impl SweepSpec {
    /// The cells in lexicographic order of (g, k, λ, c index). Fails when
    /// there would be more than [`MAX_SWEEP_CELLS`].
    pub fn cells(&self) -> CliResult<Vec<QuerySpec>> {
        let r = self.r;
        if r < 2 {
            return Err(CliError::validation(format!("invalid rank {r}: need r >= 2")));
        }
        let ranges = self.lambda.clone().unwrap_or_else(|| vec![BoundRange::One(Bound::Int(0)); r - 1]);
        if ranges.len() != r - 1 {
            return Err(CliError::validation(format!(
                "lambda needs {} ranges (the last coordinate is fixed by the sum), got {}",
                r - 1,
                ranges.len()
            )));
        }
        let cs: Vec<Option<Vec<String>>> = match &self.cs {
            Some(v) => v.iter().cloned().map(Some).collect(),
            None => vec![self.c.clone()],
        };
        let (g0, g1) = self.g.bounds();
        let (k0, k1) = self.k.bounds();
        // count first so that huge ranges fail fast
        let mut total: u64 = 0;
        for _ in 0..span_len(g0, g1).min(MAX_SWEEP_CELLS + 1) {
            for k in k0..=k1.min(k0.saturating_add(MAX_SWEEP_CELLS as i64)) {
                let mut n = cs.len() as u64;
                for rg in &ranges {
                    let (a, b) = rg.at(k)?;
                    n = n.saturating_mul(span_len(a, b));
                }
                total = total.saturating_add(n);
                if total > MAX_SWEEP_CELLS {
                    return Err(CliError::validation(format!("sweep exceeds {MAX_SWEEP_CELLS} cells")));
                }
            }
        }
        let mut out = Vec::with_capacity(total as usize);
        for g in g0..=g1 {
            for k in k0..=k1 {
                let bounds = ranges.iter().map(|rg| rg.at(k)).collect::<CliResult<Vec<_>>>()?;
                let mut prefix = vec![Vec::new()];
                for (a, b) in bounds {
                    prefix = prefix
                        .into_iter()
                        .flat_map(|p: Vec<i64>| {
                            (a..=b).map(move |x| {
                                let mut p = p.clone();
                                p.push(x);
                                p
                            })
                        })
                        .collect();
                }
                for mut l in prefix {
                    l.push(-l.iter().sum::<i64>());
                    for c in &cs {
                        out.push(QuerySpec {
                            r,
                            g,
                            k,
                            lambda: Some(l.clone()),
                            nu: self.nu.clone(),
                            c: c.clone(),
                            mode: self.mode,
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallInput {
    /// Π′ as 1-based indices, not containing r
    pub pi1: Vec<usize>,
    pub level: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallcrossSpec {
    pub r: usize,
    pub g: i64,
    pub k: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<i64>>,
    /// absent for the line bundle
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<NuSpec>,
    pub wall: WallInput,
    pub c_plus: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_minus: Option<Vec<String>>,
}
