//! Edge-ordered spanning trees of the complete graph K_r, their partition
//! sequences, diagonal bases, and the wall restriction 𝒟|Π.
//!
//! An ordered basis of roots is the same thing as an ordered tree: the root
//! α^{ij} is the directed edge i → j.
//!
//! Diagonality is checked against the flag an iterated residue actually
//! sees. The innermost residue is taken in the last coordinate, so the flag
//! of a tree is the partition sequence of its edges read from last to first.
//! A set 𝒟 of (r−1)! trees is diagonal when, for every pair A ≠ B, no
//! reordering of A produces the flag of B.

use crate::error::{Error, Result};
use crate::root_system::{OrderedBasis, Root, WallSpec};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

/// A spanning tree of K_r with ordered, directed edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedTree {
    r: usize,
    edges: Vec<Root>,
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut x = x;
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

impl OrderedTree {
    pub fn new(r: usize, edges: Vec<Root>) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidRank(r));
        }
        if edges.len() + 1 != r {
            return Err(Error::NotATree(format!("{} edges on {} vertices", edges.len(), r)));
        }
        let mut parent: Vec<usize> = (0..r).collect();
        for e in &edges {
            Root::new(e.i, e.j, r).map_err(|_| Error::NotATree(format!("bad edge {e}")))?;
            let (a, b) = (find(&mut parent, e.i - 1), find(&mut parent, e.j - 1));
            if a == b {
                return Err(Error::NotATree(format!("edge {e} closes a cycle")));
            }
            parent[a] = b;
        }
        Ok(OrderedTree { r, edges })
    }

    pub fn from_pairs(r: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(r, pairs.iter().map(|&(i, j)| Root { i, j }).collect())
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn edges(&self) -> &[Root] {
        &self.edges
    }

    pub fn to_basis(&self) -> Result<OrderedBasis> {
        OrderedBasis::new(self.r, self.edges.clone())
    }

    pub fn from_basis(b: &OrderedBasis) -> Result<Self> {
        Self::new(b.rank(), b.roots().to_vec())
    }

    /// Undirected edge set, used to compare underlying trees.
    pub fn underlying(&self) -> BTreeSet<(usize, usize)> {
        self.edges
            .iter()
            .map(|e| (e.i.min(e.j), e.i.max(e.j)))
            .collect()
    }

    pub fn pairs(&self) -> Vec<[usize; 2]> {
        self.edges.iter().map(|e| [e.i, e.j]).collect()
    }

    /// The residue flag: partitions induced by the edges taken last to first.
    pub fn residue_flag(&self) -> PartitionSequence {
        let rev: Vec<usize> = (0..self.edges.len()).rev().collect();
        partition_sequence(self, &rev).expect("valid ordering")
    }

    /// Flip the orientation of the edges selected by `mask`.
    pub fn reoriented(&self, mask: u64) -> OrderedTree {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| if mask >> i & 1 == 1 { e.neg() } else { *e })
            .collect();
        OrderedTree { r: self.r, edges }
    }
}

impl fmt::Display for OrderedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A set partition of {1..r}: sorted blocks, ordered by their minima.
pub type Partition = Vec<Vec<usize>>;

/// r nested partitions from all singletons to one block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartitionSequence(pub Vec<Partition>);

impl PartitionSequence {
    /// Each step merges exactly two blocks.
    pub fn is_valid(&self, r: usize) -> bool {
        let p = &self.0;
        if p.len() != r || p[0].len() != r || p[r - 1].len() != 1 {
            return false;
        }
        p.windows(2).all(|w| {
            w[1].len() + 1 == w[0].len()
                && w[0]
                    .iter()
                    .all(|b| w[1].iter().any(|c| b.iter().all(|x| c.contains(x))))
        })
    }
}

fn canonical(parent: &mut [usize]) -> Partition {
    let r = parent.len();
    let mut blocks: HashMap<usize, Vec<usize>> = HashMap::new();
    for v in 0..r {
        let root = find(parent, v);
        blocks.entry(root).or_default().push(v + 1);
    }
    let mut out: Vec<Vec<usize>> = blocks.into_values().collect();
    out.sort();
    out
}

/// The j-th partition groups the vertices joined by the first j−1 edges
/// in the given order; `ordering` is a permutation of edge positions.
pub fn partition_sequence(t: &OrderedTree, ordering: &[usize]) -> Result<PartitionSequence> {
    let n = t.edges.len();
    let mut seen = vec![false; n];
    if ordering.len() != n || ordering.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
        return Err(Error::InvalidOrdering(format!("{ordering:?}")));
    }
    let mut parent: Vec<usize> = (0..t.r).collect();
    let mut seq = vec![canonical(&mut parent)];
    for &k in ordering {
        let e = t.edges[k];
        let (a, b) = (find(&mut parent, e.i - 1), find(&mut parent, e.j - 1));
        parent[a] = b;
        seq.push(canonical(&mut parent));
    }
    Ok(PartitionSequence(seq))
}

/// All permutations of 0..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Every partition sequence obtained by reordering the edges of `t`.
pub fn all_sequences(t: &OrderedTree) -> Vec<PartitionSequence> {
    permutations(t.edges.len())
        .iter()
        .map(|o| partition_sequence(t, o).expect("valid ordering"))
        .collect()
}

/// A certified set of (r−1)! ordered trees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagonalBasis {
    r: usize,
    trees: Vec<OrderedTree>,
}

impl DiagonalBasis {
    /// Validates diagonality.
    pub fn new(r: usize, trees: Vec<OrderedTree>) -> Result<Self> {
        if trees.iter().any(|t| t.r != r) {
            return Err(Error::NotDiagonal("rank mismatch among trees".into()));
        }
        if !is_diagonal(&trees) || (trees.is_empty() && r >= 1) {
            return Err(Error::NotDiagonal(format!(
                "{} trees at r = {r}",
                trees.len()
            )));
        }
        Ok(DiagonalBasis { r, trees })
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn trees(&self) -> &[OrderedTree] {
        &self.trees
    }

    pub fn bases(&self) -> Result<Vec<OrderedBasis>> {
        self.trees.iter().map(|t| t.to_basis()).collect()
    }

    pub fn to_json(&self) -> Vec<Vec<[usize; 2]>> {
        self.trees.iter().map(|t| t.pairs()).collect()
    }

    pub fn from_json(r: usize, v: &[Vec<[usize; 2]>]) -> Result<Self> {
        let trees = v
            .iter()
            .map(|es| OrderedTree::new(r, es.iter().map(|&[i, j]| Root { i, j }).collect()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(r, trees)
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// The diagonality test (see the module docs for the reading used).
pub fn is_diagonal(cands: &[OrderedTree]) -> bool {
    let Some(first) = cands.first() else {
        return false;
    };
    let r = first.r;
    if cands.len() != factorial(r - 1) || cands.iter().any(|t| t.r != r) {
        return false;
    }
    let distinct: HashSet<&OrderedTree> = cands.iter().collect();
    if distinct.len() != cands.len() {
        return false;
    }
    let flags: Vec<PartitionSequence> = cands.iter().map(|t| t.residue_flag()).collect();
    for (a, ta) in cands.iter().enumerate() {
        let seqs: HashSet<PartitionSequence> = all_sequences(ta).into_iter().collect();
        for (b, fb) in flags.iter().enumerate() {
            if a != b && seqs.contains(fb) {
                return false;
            }
        }
    }
    true
}

/// A record of the diagonality test for one candidate set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalTranscript {
    pub r: usize,
    pub required_size: usize,
    pub trees: Vec<TreeTranscript>,
    /// pairs (a, b) where the residue flag of b is a reordered sequence of a
    pub conflicts: Vec<[usize; 2]>,
    pub flags_distinct: bool,
    pub diagonal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeTranscript {
    pub edges: Vec<[usize; 2]>,
    pub residue_flag: PartitionSequence,
    pub reordered_sequences: usize,
}

pub fn diagonal_transcript(cands: &[OrderedTree]) -> DiagonalTranscript {
    let r = cands.first().map_or(0, |t| t.r);
    let flags: Vec<PartitionSequence> = cands.iter().map(|t| t.residue_flag()).collect();
    let mut trees = Vec::new();
    let mut conflicts = Vec::new();
    for (a, ta) in cands.iter().enumerate() {
        let seqs: HashSet<PartitionSequence> = all_sequences(ta).into_iter().collect();
        for (b, fb) in flags.iter().enumerate() {
            if a != b && seqs.contains(fb) {
                conflicts.push([a, b]);
            }
        }
        trees.push(TreeTranscript {
            edges: ta.pairs(),
            residue_flag: flags[a].clone(),
            reordered_sequences: seqs.len(),
        });
    }
    let distinct: HashSet<&PartitionSequence> = flags.iter().collect();
    DiagonalTranscript {
        r,
        required_size: if r >= 1 { factorial(r - 1) } else { 0 },
        trees,
        conflicts,
        flags_distinct: distinct.len() == flags.len(),
        diagonal: is_diagonal(cands),
    }
}

/// The strictest reading: all reordered sequences of distinct members are
/// pairwise different. Kept for comparison; it rejects the standard rank-3
/// example, whose two members share the edge {2,3}.
pub fn is_diagonal_strict(cands: &[OrderedTree]) -> bool {
    let Some(first) = cands.first() else {
        return false;
    };
    if cands.len() != factorial(first.r - 1) {
        return false;
    }
    let sets: Vec<HashSet<PartitionSequence>> = cands
        .iter()
        .map(|t| all_sequences(t).into_iter().collect())
        .collect();
    for a in 0..cands.len() {
        for b in (a + 1)..cands.len() {
            if cands[a] == cands[b] || !sets[a].is_disjoint(&sets[b]) {
                return false;
            }
        }
    }
    true
}

/// Spanning trees of K_r as sorted undirected edge lists, lexicographic.
pub fn spanning_trees(r: usize) -> Vec<Vec<(usize, usize)>> {
    let all: Vec<(usize, usize)> = (1..=r)
        .flat_map(|i| ((i + 1)..=r).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    fn go(
        all: &[(usize, usize)],
        start: usize,
        need: usize,
        cur: &mut Vec<(usize, usize)>,
        r: usize,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if need == 0 {
            let roots = cur.iter().map(|&(i, j)| Root { i, j }).collect();
            if OrderedTree::new(r, roots).is_ok() {
                out.push(cur.clone());
            }
            return;
        }
        for k in start..all.len() {
            cur.push(all[k]);
            go(all, k + 1, need - 1, cur, r, out);
            cur.pop();
        }
    }
    go(&all, 0, r - 1, &mut Vec::new(), r, &mut out);
    out
}

struct Search {
    need: usize,
    /// per tree: its sequence set, and per ordering its flag id
    seq_sets: Vec<HashSet<usize>>,
    flags: Vec<Vec<usize>>,
    limit: usize,
    found: Vec<Vec<(usize, usize)>>,
}

impl Search {
    fn run(&mut self, t: usize, chosen: &mut Vec<(usize, usize)>, used_flags: &mut HashSet<usize>) {
        if self.found.len() >= self.limit {
            return;
        }
        if chosen.len() == self.need {
            self.found.push(chosen.clone());
            return;
        }
        if self.seq_sets.len() - t < self.need - chosen.len() {
            return;
        }
        let blocked_by_tree = self.seq_sets[t].iter().any(|f| used_flags.contains(f));
        if !blocked_by_tree {
            for o in 0..self.flags[t].len() {
                let f = self.flags[t][o];
                if chosen.iter().any(|&(u, _)| self.seq_sets[u].contains(&f)) {
                    continue;
                }
                chosen.push((t, o));
                used_flags.insert(f);
                self.run(t + 1, chosen, used_flags);
                used_flags.remove(&f);
                chosen.pop();
                if self.found.len() >= self.limit {
                    return;
                }
            }
        }
        self.run(t + 1, chosen, used_flags);
    }
}

fn search(r: usize, limit: usize) -> Vec<Vec<OrderedTree>> {
    let trees = spanning_trees(r);
    let orders = permutations(r - 1);
    let mut ids: HashMap<PartitionSequence, usize> = HashMap::new();
    let mut intern = |s: PartitionSequence| {
        let n = ids.len();
        *ids.entry(s).or_insert(n)
    };
    let mut seq_sets = Vec::new();
    let mut flags = Vec::new();
    let mut ordered: Vec<Vec<OrderedTree>> = Vec::new();
    for t in &trees {
        let mut set = HashSet::new();
        let mut fl = Vec::new();
        let mut ot = Vec::new();
        for o in &orders {
            let edges = o.iter().map(|&k| Root { i: t[k].0, j: t[k].1 }).collect();
            let tree = OrderedTree { r, edges };
            set.insert(intern(partition_sequence(&tree, &(0..r - 1).collect::<Vec<_>>()).unwrap()));
            fl.push(intern(tree.residue_flag()));
            ot.push(tree);
        }
        seq_sets.push(set);
        flags.push(fl);
        ordered.push(ot);
    }
    let mut s = Search {
        need: factorial(r - 1),
        seq_sets,
        flags,
        limit,
        found: Vec::new(),
    };
    s.run(0, &mut Vec::new(), &mut HashSet::new());
    s.found
        .into_iter()
        .map(|sel| sel.into_iter().map(|(t, o)| ordered[t][o].clone()).collect())
        .collect()
}

/// One diagonal basis, found by deterministic backtracking over trees
/// (lexicographic) and edge orders, edges oriented i → j with i < j.
pub fn enumerate_diagonal(r: usize) -> Result<DiagonalBasis> {
    if !(2..=5).contains(&r) {
        return Err(Error::InvalidRank(r));
    }
    diagonal_for_block(r)
}

/// Like [`enumerate_diagonal`] but also accepts r = 1 (the empty tree),
/// which appears as a block of a wall partition.
pub fn diagonal_for_block(r: usize) -> Result<DiagonalBasis> {
    if r == 1 {
        return Ok(DiagonalBasis {
            r,
            trees: vec![OrderedTree { r, edges: vec![] }],
        });
    }
    let found = search(r, 1);
    let trees = found.into_iter().next().ok_or(Error::SearchExhausted(r))?;
    DiagonalBasis::new(r, trees)
}

/// Up to `limit` distinct diagonal bases in search order.
pub fn enumerate_diagonal_sets(r: usize, limit: usize) -> Result<Vec<DiagonalBasis>> {
    if !(2..=5).contains(&r) {
        return Err(Error::InvalidRank(r));
    }
    search(r, limit)
        .into_iter()
        .map(|t| DiagonalBasis::new(r, t))
        .collect()
}

/// The same trees with edge orientations flipped according to one mask
/// per tree; orientation does not affect diagonality.
pub fn reorient(d: &DiagonalBasis, masks: &[u64]) -> DiagonalBasis {
    DiagonalBasis {
        r: d.r,
        trees: d
            .trees
            .iter()
            .zip(masks.iter().chain(std::iter::repeat(&0)))
            .map(|(t, &m)| t.reoriented(m))
            .collect(),
    }
}

/// The basis of the standard rank-3 example: (α^{23}, α^{12}), (α^{32}, α^{13}).
pub fn example_rank3() -> DiagonalBasis {
    DiagonalBasis {
        r: 3,
        trees: vec![
            OrderedTree::from_pairs(3, &[(2, 3), (1, 2)]).unwrap(),
            OrderedTree::from_pairs(3, &[(3, 2), (1, 3)]).unwrap(),
        ],
    }
}

fn crosses(e: &Root, w: &WallSpec) -> bool {
    w.pi1.contains(&e.i) != w.pi1.contains(&e.j)
}

/// Members of 𝒟 made of a tree on Π′, a tree on Π″ and one link edge,
/// with the position of the link.
pub fn restrict_to_wall(d: &DiagonalBasis, w: &WallSpec) -> Vec<(OrderedTree, usize)> {
    d.trees
        .iter()
        .filter_map(|t| {
            let crossing: Vec<usize> = (0..t.edges.len()).filter(|&k| crosses(&t.edges[k], w)).collect();
            (crossing.len() == 1).then(|| (t.clone(), crossing[0]))
        })
        .collect()
}

/// Trees (link, 𝐁′, 𝐁″) built from diagonal bases of the two blocks, with
/// block indices mapped into {1..r} in increasing order and the link edge
/// x_{max Π′} − x_r placed first.
pub fn product_trees(
    w: &WallSpec,
    d1: &DiagonalBasis,
    d2: &DiagonalBasis,
) -> Result<Vec<(OrderedTree, usize)>> {
    let r = w.rank();
    if d1.r != w.pi1.len() || d2.r != w.pi2.len() {
        return Err(Error::InvalidWall("block bases do not match the partition".into()));
    }
    let link = Root {
        i: *w.pi1.iter().max().unwrap(),
        j: r,
    };
    let mut out = Vec::new();
    for t1 in &d1.trees {
        for t2 in &d2.trees {
            let mut edges = vec![link];
            edges.extend(t1.edges.iter().map(|e| Root { i: w.pi1[e.i - 1], j: w.pi1[e.j - 1] }));
            edges.extend(t2.edges.iter().map(|e| Root { i: w.pi2[e.i - 1], j: w.pi2[e.j - 1] }));
            out.push((OrderedTree::new(r, edges)?, 0));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blocks(v: &[&[usize]]) -> Partition {
        v.iter().map(|b| b.to_vec()).collect()
    }

    #[test]
    fn sequences_rank3() {
        let t = OrderedTree::from_pairs(3, &[(2, 3), (1, 2)]).unwrap();
        let s = partition_sequence(&t, &[0, 1]).unwrap();
        assert_eq!(
            s.0,
            vec![blocks(&[&[1], &[2], &[3]]), blocks(&[&[1], &[2, 3]]), blocks(&[&[1, 2, 3]])]
        );
        let s = partition_sequence(&t, &[1, 0]).unwrap();
        assert_eq!(s.0[1], blocks(&[&[1, 2], &[3]]));
        let t2 = OrderedTree::from_pairs(2, &[(1, 2)]).unwrap();
        assert_eq!(
            partition_sequence(&t2, &[0]).unwrap().0,
            vec![blocks(&[&[1], &[2]]), blocks(&[&[1, 2]])]
        );
    }

    #[test]
    fn not_a_tree() {
        assert!(OrderedTree::from_pairs(3, &[(1, 2), (2, 1)]).is_err());
        assert!(OrderedTree::from_pairs(3, &[(1, 2)]).is_err());
    }

    #[test]
    fn example_is_diagonal() {
        let d = example_rank3();
        assert!(is_diagonal(d.trees()));
        assert!(!is_diagonal_strict(d.trees()));
        let t = OrderedTree::from_pairs(3, &[(2, 3), (1, 2)]).unwrap();
        assert!(!is_diagonal(&[t.clone(), t]));
        assert!(is_diagonal(&[OrderedTree::from_pairs(2, &[(1, 2)]).unwrap()]));
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_diagonal(2).unwrap().trees().len(), 1);
        assert_eq!(enumerate_diagonal(3).unwrap().trees().len(), 2);
        assert_eq!(enumerate_diagonal(4).unwrap().trees().len(), 6);
    }

    #[test]
    fn wall_restriction() {
        let d = example_rank3();
        let w = WallSpec::new(3, vec![2], 0).unwrap();
        let res = restrict_to_wall(&d, &w);
        assert_eq!(res.len(), 1);
        assert_eq!(res[0].0, OrderedTree::from_pairs(3, &[(3, 2), (1, 3)]).unwrap());
        assert_eq!(res[0].1, 0);
        let d2 = enumerate_diagonal(2).unwrap();
        let w2 = WallSpec::new(2, vec![1], 0).unwrap();
        assert_eq!(restrict_to_wall(&d2, &w2), vec![(d2.trees()[0].clone(), 0)]);
    }
}
