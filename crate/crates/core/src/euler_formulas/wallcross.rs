//! Wall-crossing: the jump of χ across a wall S_{Π,l}, both as a
//! difference of two characteristics and as a residue sum over the trees
//! adapted to the wall with the link denominator removed.

use super::chi::{chi_line_at, chi_vector_at, BasisArg};
use super::kernel::EvalOptions;
use super::{check_chamber, check_gk};
use crate::characters::HighestWeight;
use crate::diagonal_trees::{diagonal_for_block, product_trees, restrict_to_wall, DiagonalBasis, OrderedTree};
use crate::error::{Error, Result};
use crate::rational::{floor_q, q, qf, Q};
use crate::root_system::{bracket, classify_chamber, ChamberRelation, CoVector, LatticePoint, WallSpec};
use num_bigint::BigInt;
use serde::Serialize;

/// Which characteristic is being crossed: a line bundle, or the vector
/// bundles attached to a list of representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bundle {
    Line,
    Vector(Vec<HighestWeight>),
}

impl Bundle {
    /// A single representation, or the line bundle for `None`.
    pub fn from_nu(nu: Option<HighestWeight>) -> Bundle {
        match nu {
            None => Bundle::Line,
            Some(n) => Bundle::Vector(vec![n]),
        }
    }
}

fn sum_at(g: i64, k: i64, lambda: &LatticePoint, bundle: &Bundle, args: &[BasisArg], opts: &EvalOptions) -> Result<Q> {
    Ok(match bundle {
        Bundle::Line => chi_line_at(g, k, lambda, args, opts)?.value,
        Bundle::Vector(nus) => chi_vector_at(g, k, lambda, nus, args, opts)?.value,
    })
}

fn check_side(c: &CoVector, wall: &WallSpec, level: i64) -> Result<()> {
    if wall.rank() != c.rank() {
        return Err(Error::RankMismatch {
            expected: c.rank(),
            got: wall.rank(),
        });
    }
    if floor_q(&wall.partial_sum(c)) != BigInt::from(level) {
        return Err(Error::InconsistentWall(format!(
            "c_Π′ = {} of {c} does not have integer part {level}",
            wall.partial_sum(c)
        )));
    }
    Ok(())
}

/// A weight c⁻ across the wall from c⁺: c⁺ moved along the direction
/// u = (1/r′ on Π′, −1/r″ on Π″), which changes only c_Π′, until c_Π′
/// falls just below l. The step shrinks until c⁻ is regular, in Δ and
/// separated from c⁺ by exactly this wall.
pub fn find_c_minus(c_plus: &CoVector, wall: &WallSpec) -> Result<CoVector> {
    check_chamber(c_plus)?;
    check_side(c_plus, wall, wall.level)?;
    let r = c_plus.rank();
    let (r1, r2) = (wall.pi1.len() as i64, wall.pi2.len() as i64);
    let u: Vec<Q> = (1..=r)
        .map(|i| if wall.pi1.contains(&i) { qf(1, r1) } else { qf(-1, r2) })
        .collect();
    let u = CoVector::new(u)?;
    let s = wall.partial_sum(c_plus) - q(wall.level);
    let mut theta = s.clone();
    for _ in 0..40 {
        let c = c_plus.sub(&u.scale(&(&s + &theta)));
        if check_chamber(&c).is_ok() {
            if let Ok(ChamberRelation::SeparatedBy(ws)) = classify_chamber(c_plus, &c) {
                if ws.len() == 1 && ws[0] == *wall {
                    return Ok(c);
                }
            }
        }
        theta /= q(2);
    }
    Err(Error::InconsistentWall(format!(
        "no chamber across {wall} next to {c_plus}"
    )))
}

/// Σ over 𝒟|Π of the residues with the link denominator dropped, at
/// a = −[c⁺]_B (see `link_args` for links pointing into Π′).
pub fn wallcross_residue(
    g: i64,
    k: i64,
    lambda: &LatticePoint,
    bundle: &Bundle,
    wall: &WallSpec,
    c_plus: &CoVector,
    d: &DiagonalBasis,
    opts: &EvalOptions,
) -> Result<Q> {
    check_gk(g, k)?;
    check_chamber(c_plus)?;
    check_side(c_plus, wall, wall.level)?;
    let args = link_args(&restrict_to_wall(d, wall), wall, c_plus)?;
    if args.is_empty() {
        return Ok(Q::from_integer(0.into()));
    }
    sum_at(g, k, lambda, bundle, &args, opts)
}

/// The same sum over the trees (link, 𝐁′, 𝐁″) built from diagonal bases
/// of the two blocks.
pub fn wallcross_residue_product(
    g: i64,
    k: i64,
    lambda: &LatticePoint,
    bundle: &Bundle,
    wall: &WallSpec,
    c_plus: &CoVector,
    opts: &EvalOptions,
) -> Result<Q> {
    check_gk(g, k)?;
    check_chamber(c_plus)?;
    check_side(c_plus, wall, wall.level)?;
    let d1 = diagonal_for_block(wall.pi1.len())?;
    let d2 = diagonal_for_block(wall.pi2.len())?;
    let args = link_args(&product_trees(wall, &d1, &d2)?, wall, c_plus)?;
    sum_at(g, k, lambda, bundle, &args, opts)
}

/// Arguments for the trees of a wall. When the link points from Π′ to
/// Π″, crossing to c⁻ moves a = −[c]_B by +β_link and the jump is the
/// residue at a⁺ with the link denominator cancelled. For the opposite
/// orientation the move is −β_link and the jump is minus the same residue
/// at a⁻ = a⁺ − β_link.
fn link_args(trees: &[(OrderedTree, usize)], wall: &WallSpec, c: &CoVector) -> Result<Vec<BasisArg>> {
    let r = c.rank();
    trees
        .iter()
        .map(|(t, link)| {
            let basis = t.to_basis()?;
            let mut arg = bracket(c, &basis)?.integral.neg();
            let beta = &basis.roots()[*link];
            let coeff = if wall.pi1.contains(&beta.i) {
                q(1)
            } else {
                arg = arg.sub(&beta.covector(r));
                q(-1)
            };
            Ok(BasisArg {
                tree: t.clone(),
                basis,
                arg,
                drop: Some(*link),
                coeff,
            })
        })
        .collect()
}

/// Both sides of the wall-crossing identity for one wall.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallCrossing {
    pub wall: WallSpec,
    pub c_plus: CoVector,
    pub c_minus: CoVector,
    /// χ(c⁺) − χ(c⁻)
    #[serde(with = "crate::rational::qstr")]
    pub geometric: Q,
    /// residue sum over 𝒟|Π
    #[serde(with = "crate::rational::qstr")]
    pub residue: Q,
    /// residue sum over the block-product trees
    #[serde(with = "crate::rational::qstr")]
    pub residue_product: Q,
    pub equal: bool,
}

pub fn wall_crossing(
    g: i64,
    k: i64,
    lambda: &LatticePoint,
    bundle: &Bundle,
    wall: &WallSpec,
    c_plus: &CoVector,
    c_minus: Option<&CoVector>,
    d: &DiagonalBasis,
    opts: &EvalOptions,
) -> Result<WallCrossing> {
    let c_minus = match c_minus {
        Some(c) => {
            check_chamber(c)?;
            check_side(c, wall, wall.level - 1)?;
            match classify_chamber(c_plus, c)? {
                ChamberRelation::SeparatedBy(ws) if ws.len() == 1 && ws[0] == *wall => c.clone(),
                other => {
                    return Err(Error::InconsistentWall(format!(
                        "{c_plus} and {c} are not adjacent across {wall}: {other:?}"
                    )))
                }
            }
        }
        None => find_c_minus(c_plus, wall)?,
    };
    let plus = sum_at(g, k, lambda, bundle, &BasisArg::at(c_plus, d)?, opts)?;
    let minus = sum_at(g, k, lambda, bundle, &BasisArg::at(&c_minus, d)?, opts)?;
    let geometric = plus - minus;
    let residue = wallcross_residue(g, k, lambda, bundle, wall, c_plus, d, opts)?;
    let residue_product = wallcross_residue_product(g, k, lambda, bundle, wall, c_plus, opts)?;
    let equal = geometric == residue && residue == residue_product;
    Ok(WallCrossing {
        wall: wall.clone(),
        c_plus: c_plus.clone(),
        c_minus,
        geometric,
        residue,
        residue_product,
        equal,
    })
}
