//! Structured preference domains: recognition, witness checking and the
//! constructive committee algorithms with their guarantees.
//!
//! | domain | witness | construction guarantee |
//! |--------|---------|------------------------|
//! | CI     | candidate order | none (lower bound `β >= k - 1` applies) |
//! | VI     | voter order | `(2, 4)`-IR |
//! | CEI    | candidate order + prefix/suffix flags | `(2, 0)`-IR and ssJR |
//! | VEI    | voter order + prefix/suffix flags | `(2, 0)`-IR and ssJR |
//! | t-PART | candidate partition | IR |
//! | WSC    | voter order | ssJR |
//! | α-TR   | candidate tree | IR |

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::cohesion::{self, CohesionCertificate, IntervalSupport};
use crate::error::{Error, Result};
use crate::model::{Committee, Election};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DomainId {
    Ci,
    Vi,
    Cei,
    Vei,
    TPart,
    Wsc,
    AlphaTr,
    Due,
}

impl DomainId {
    /// Domains with a recognizer.
    pub const RECOGNIZABLE: [DomainId; 6] = [
        DomainId::Ci,
        DomainId::Vi,
        DomainId::Cei,
        DomainId::Vei,
        DomainId::TPart,
        DomainId::Wsc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DomainId::Ci => "ci",
            DomainId::Vi => "vi",
            DomainId::Cei => "cei",
            DomainId::Vei => "vei",
            DomainId::TPart => "tpart",
            DomainId::Wsc => "wsc",
            DomainId::AlphaTr => "alpha-tr",
            DomainId::Due => "due",
        }
    }
}

impl fmt::Display for DomainId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DomainId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "ci" => DomainId::Ci,
            "vi" => DomainId::Vi,
            "cei" => DomainId::Cei,
            "vei" => DomainId::Vei,
            "tpart" | "t-part" => DomainId::TPart,
            "wsc" => DomainId::Wsc,
            "alpha-tr" | "atr" | "tr" => DomainId::AlphaTr,
            "due" => DomainId::Due,
            other => return Err(Error::Precondition(format!("unknown domain '{other}'"))),
        })
    }
}

/// Rooted tree over the candidates plus an implicit root `x`.
/// `parent[c] = None` attaches `c` directly below the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateTree {
    pub parent: Vec<Option<usize>>,
}

impl CandidateTree {
    /// `dist(c, x)` for every candidate, or an error for cycles and
    /// out-of-range parents.
    pub fn depths(&self) -> Result<Vec<usize>> {
        let m = self.parent.len();
        let mut depth = vec![0usize; m];
        for start in 0..m {
            let mut path = Vec::new();
            let mut on_path = FixedBitSet::with_capacity(m);
            let mut cur = start;
            let base = loop {
                if depth[cur] > 0 {
                    break depth[cur];
                }
                if on_path.put(cur) {
                    return Err(Error::InvalidWitness(format!(
                        "candidate tree has a cycle through candidate {cur}"
                    )));
                }
                path.push(cur);
                match self.parent[cur] {
                    None => break 0,
                    Some(p) if p >= m => {
                        return Err(Error::CandidateOutOfRange { index: p, m });
                    }
                    Some(p) => cur = p,
                }
            };
            for (offset, &c) in path.iter().rev().enumerate() {
                depth[c] = base + offset + 1;
            }
        }
        Ok(depth)
    }

    /// Children lists, each sorted ascending; index `m` holds the root's.
    fn children(&self) -> Vec<Vec<usize>> {
        let m = self.parent.len();
        let mut children = vec![Vec::new(); m + 1];
        for (c, p) in self.parent.iter().enumerate() {
            children[p.unwrap_or(m)].push(c);
        }
        children
    }
}

/// Proof that a profile lies in a domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainWitness {
    /// Every approval set is contiguous in `order`.
    Ci { order: Vec<usize> },
    /// Every candidate's supporters are contiguous in `order`.
    Vi { order: Vec<usize> },
    /// Every approval set is a prefix of `order`, or a suffix when
    /// `suffix[voter]` is set.
    Cei { order: Vec<usize>, suffix: Vec<bool> },
    /// Every candidate's supporters are a prefix of `order`, or a suffix
    /// when `suffix[candidate]` is set.
    Vei { order: Vec<usize>, suffix: Vec<bool> },
    /// Blocks partition the candidates; each non-empty ballot equals
    /// `blocks[voter_block[voter]]`.
    TPart {
        blocks: Vec<Vec<usize>>,
        voter_block: Vec<Option<usize>>,
    },
    /// Weakly single-crossing voter order.
    Wsc { order: Vec<usize> },
    AlphaTr { tree: CandidateTree },
}

impl DomainWitness {
    pub fn domain(&self) -> DomainId {
        match self {
            DomainWitness::Ci { .. } => DomainId::Ci,
            DomainWitness::Vi { .. } => DomainId::Vi,
            DomainWitness::Cei { .. } => DomainId::Cei,
            DomainWitness::Vei { .. } => DomainId::Vei,
            DomainWitness::TPart { .. } => DomainId::TPart,
            DomainWitness::Wsc { .. } => DomainId::Wsc,
            DomainWitness::AlphaTr { .. } => DomainId::AlphaTr,
        }
    }
}

/// Representation guarantee of a construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GuaranteeTag {
    /// `(α, β)` such that the committee is `(α, β)`-IR.
    pub alpha_beta: Option<(Rational, Rational)>,
    pub ssjr: bool,
}

impl GuaranteeTag {
    pub fn for_domain(d: DomainId) -> Option<GuaranteeTag> {
        let ab = |a: i64, b: i64| Some((Rational::from_integer(a), Rational::from_integer(b)));
        match d {
            DomainId::TPart | DomainId::AlphaTr => Some(GuaranteeTag {
                alpha_beta: ab(1, 0),
                ssjr: true,
            }),
            DomainId::Cei | DomainId::Vei => Some(GuaranteeTag {
                alpha_beta: ab(2, 0),
                ssjr: true,
            }),
            DomainId::Vi => Some(GuaranteeTag {
                alpha_beta: ab(2, 4),
                ssjr: false,
            }),
            DomainId::Wsc => Some(GuaranteeTag {
                alpha_beta: None,
                ssjr: true,
            }),
            DomainId::Ci | DomainId::Due => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Order checks

fn positions(order: &[usize], len: usize) -> Option<Vec<usize>> {
    if order.len() != len {
        return None;
    }
    let mut pos = vec![usize::MAX; len];
    for (p, &x) in order.iter().enumerate() {
        if x >= len || pos[x] != usize::MAX {
            return None;
        }
        pos[x] = p;
    }
    Some(pos)
}

fn span(set: &FixedBitSet, pos: &[usize]) -> Option<(usize, usize, usize)> {
    let mut lo = usize::MAX;
    let mut hi = 0;
    let mut count = 0;
    for x in set.ones() {
        lo = lo.min(pos[x]);
        hi = hi.max(pos[x]);
        count += 1;
    }
    (count > 0).then_some((lo, hi, count))
}

fn is_contiguous(set: &FixedBitSet, pos: &[usize]) -> bool {
    span(set, pos).is_none_or(|(lo, hi, count)| hi - lo + 1 == count)
}

fn is_prefix(set: &FixedBitSet, pos: &[usize]) -> bool {
    span(set, pos).is_none_or(|(lo, hi, count)| lo == 0 && hi + 1 == count)
}

fn is_suffix(set: &FixedBitSet, pos: &[usize]) -> bool {
    span(set, pos).is_none_or(|(lo, hi, count)| hi + 1 == pos.len() && hi - lo + 1 == count)
}

/// Whether `order` is a permutation of the voters along which every
/// candidate's supporters are contiguous.
pub fn is_voter_interval_order(e: &Election, order: &[usize]) -> bool {
    positions(order, e.n()).is_some_and(|pos| (0..e.m()).all(|c| is_contiguous(e.approvers(c), &pos)))
}

/// Whether `order` is a permutation of the candidates along which every
/// approval set is contiguous.
pub fn is_candidate_interval_order(e: &Election, order: &[usize]) -> bool {
    positions(order, e.m()).is_some_and(|pos| (0..e.n()).all(|v| is_contiguous(e.ballot(v), &pos)))
}

/// Whether `order` is weakly single-crossing: for every candidate pair the
/// voters preferring exactly one of them sit at opposite ends.
pub fn is_weakly_single_crossing_order(e: &Election, order: &[usize]) -> bool {
    let Some(pos) = positions(order, e.n()) else {
        return false;
    };
    for c in 0..e.m() {
        for d in c + 1..e.m() {
            let mut only_c = e.approvers(c).clone();
            only_c.difference_with(e.approvers(d));
            let mut only_d = e.approvers(d).clone();
            only_d.difference_with(e.approvers(c));
            let ok = (is_prefix(&only_c, &pos) && is_suffix(&only_d, &pos))
                || (is_suffix(&only_c, &pos) && is_prefix(&only_d, &pos));
            if !ok {
                return false;
            }
        }
    }
    true
}

fn candidate_sets(e: &Election) -> Vec<FixedBitSet> {
    (0..e.n()).map(|v| e.ballot(v).clone()).collect()
}

fn voter_sets(e: &Election) -> Vec<FixedBitSet> {
    (0..e.m()).map(|c| e.approvers(c).clone()).collect()
}

/// Sets of voters preferring exactly one candidate of each ordered pair.
fn crossing_sets(e: &Election) -> Vec<FixedBitSet> {
    let mut sets = Vec::new();
    for c in 0..e.m() {
        for d in 0..e.m() {
            if c != d {
                let mut only_c = e.approvers(c).clone();
                only_c.difference_with(e.approvers(d));
                sets.push(only_c);
            }
        }
    }
    sets
}

/// Re-checks a witness against the profile.
pub fn verify_witness(e: &Election, w: &DomainWitness) -> Result<()> {
    let fail = |msg: &str| Err(Error::InvalidWitness(msg.to_string()));
    match w {
        DomainWitness::Ci { order } => {
            if !is_candidate_interval_order(e, order) {
                return fail("an approval set is not contiguous in the candidate order");
            }
        }
        DomainWitness::Vi { order } => {
            if !is_voter_interval_order(e, order) {
                return fail("a candidate's supporters are not contiguous in the voter order");
            }
        }
        DomainWitness::Cei { order, suffix } => {
            let Some(pos) = positions(order, e.m()) else {
                return fail("candidate order is not a permutation");
            };
            if suffix.len() != e.n() {
                return fail("need one prefix/suffix flag per voter");
            }
            for v in 0..e.n() {
                let ok = if suffix[v] {
                    is_suffix(e.ballot(v), &pos)
                } else {
                    is_prefix(e.ballot(v), &pos)
                };
                if !ok {
                    return Err(Error::InvalidWitness(format!(
                        "ballot of voter {v} is not the flagged end of the order"
                    )));
                }
            }
        }
        DomainWitness::Vei { order, suffix } => {
            let Some(pos) = positions(order, e.n()) else {
                return fail("voter order is not a permutation");
            };
            if suffix.len() != e.m() {
                return fail("need one prefix/suffix flag per candidate");
            }
            for c in 0..e.m() {
                let ok = if suffix[c] {
                    is_suffix(e.approvers(c), &pos)
                } else {
                    is_prefix(e.approvers(c), &pos)
                };
                if !ok {
                    return Err(Error::InvalidWitness(format!(
                        "supporters of candidate {c} are not the flagged end of the order"
                    )));
                }
            }
        }
        DomainWitness::TPart {
            blocks,
            voter_block,
        } => {
            let mut seen = FixedBitSet::with_capacity(e.m());
            for block in blocks {
                if block.is_empty() {
                    return fail("empty block");
                }
                for &c in block {
                    if c >= e.m() {
                        return Err(Error::CandidateOutOfRange { index: c, m: e.m() });
                    }
                    if seen.put(c) {
                        return fail("blocks overlap");
                    }
                }
            }
            if seen.count_ones(..) != e.m() {
                return fail("blocks do not cover every candidate");
            }
            if voter_block.len() != e.n() {
                return fail("need one block assignment per voter");
            }
            for v in 0..e.n() {
                match voter_block[v] {
                    None if e.approval(v).is_empty() => {}
                    Some(j) if j < blocks.len() => {
                        let mut block = blocks[j].clone();
                        block.sort_unstable();
                        if block != e.approval(v) {
                            return Err(Error::InvalidWitness(format!(
                                "ballot of voter {v} differs from its block"
                            )));
                        }
                    }
                    _ => {
                        return Err(Error::InvalidWitness(format!(
                            "voter {v} has no valid block"
                        )))
                    }
                }
            }
        }
        DomainWitness::Wsc { order } => {
            if !is_weakly_single_crossing_order(e, order) {
                return fail("voter order is not weakly single-crossing");
            }
        }
        DomainWitness::AlphaTr { tree } => {
            if !verify_tree(e, tree)? {
                return fail("some ballot is not a root path of the tree");
            }
        }
    }
    Ok(())
}

/// Whether every ballot is the set of candidates on the path from the root
/// to one of its members. Empty ballots are accepted.
pub fn verify_tree(e: &Election, tree: &CandidateTree) -> Result<bool> {
    if tree.parent.len() != e.m() {
        return Err(Error::InvalidWitness(format!(
            "tree has {} candidate vertices, election has {}",
            tree.parent.len(),
            e.m()
        )));
    }
    let depth = tree.depths()?;
    for v in 0..e.n() {
        let ballot = e.approval(v);
        let Some(&deepest) = ballot.iter().max_by_key(|&&c| (depth[c], c)) else {
            continue;
        };
        if depth[deepest] != ballot.len() {
            return Ok(false);
        }
        let mut cur = Some(deepest);
        while let Some(c) = cur {
            if !e.approves(v, c) {
                return Ok(false);
            }
            cur = tree.parent[c];
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Recognition

/// Finds a witness for `d`, or `None` when the profile is not in `d`.
pub fn recognize(e: &Election, d: DomainId) -> Result<Option<DomainWitness>> {
    Ok(match d {
        DomainId::Ci => consecutive_ones_order(e.m(), &candidate_sets(e))
            .map(|order| DomainWitness::Ci { order }),
        DomainId::Vi => {
            consecutive_ones_order(e.n(), &voter_sets(e)).map(|order| DomainWitness::Vi { order })
        }
        DomainId::Cei => extremal_order(e.m(), &candidate_sets(e))
            .map(|(order, suffix)| DomainWitness::Cei { order, suffix }),
        DomainId::Vei => extremal_order(e.n(), &voter_sets(e))
            .map(|(order, suffix)| DomainWitness::Vei { order, suffix }),
        DomainId::Wsc => {
            extremal_order(e.n(), &crossing_sets(e)).map(|(order, _)| DomainWitness::Wsc { order })
        }
        DomainId::TPart => recognize_partition(e),
        DomainId::AlphaTr => {
            return Err(Error::Precondition(
                "alpha-TR has no recognizer; supply a tree and use verify_tree".into(),
            ))
        }
        DomainId::Due => {
            return Err(Error::Precondition(
                "DUE recognition is not supported".into(),
            ))
        }
    })
}

fn recognize_partition(e: &Election) -> Option<DomainWitness> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut voter_block = vec![None; e.n()];
    let mut used = FixedBitSet::with_capacity(e.m());
    for v in 0..e.n() {
        let ballot = e.approval(v);
        if ballot.is_empty() {
            continue;
        }
        if let Some(j) = blocks.iter().position(|b| b.as_slice() == ballot) {
            voter_block[v] = Some(j);
            continue;
        }
        if ballot.iter().any(|&c| used.contains(c)) {
            return None;
        }
        used.extend(ballot.iter().copied());
        voter_block[v] = Some(blocks.len());
        blocks.push(ballot.to_vec());
    }
    let rest: Vec<usize> = (0..e.m()).filter(|&c| !used.contains(c)).collect();
    if !rest.is_empty() {
        blocks.push(rest);
    }
    Some(DomainWitness::TPart {
        blocks,
        voter_block,
    })
}

fn overlaps(a: &FixedBitSet, b: &FixedBitSet) -> bool {
    !a.is_disjoint(b) && !a.is_subset(b) && !b.is_subset(a)
}

/// One overlap-connected group of sets, with its classes (elements of equal
/// membership) in the unique consecutive arrangement up to reversal.
struct OverlapComponent {
    sets: usize,
    union: FixedBitSet,
    parts: Vec<FixedBitSet>,
}

/// Adds `y`, which overlaps an already placed set, to the arrangement.
/// Returns false when no consecutive arrangement can take it.
fn place(parts: &mut Vec<FixedBitSet>, union: &mut FixedBitSet, y: &FixedBitSet) -> bool {
    let hit: Vec<usize> = (0..parts.len()).filter(|&j| !parts[j].is_disjoint(y)).collect();
    let (Some(&a), Some(&b)) = (hit.first(), hit.last()) else {
        return false;
    };
    if b - a + 1 != hit.len() {
        return false;
    }
    let full = |j: usize, parts: &Vec<FixedBitSet>| parts[j].is_subset(y);
    if (a + 1..b).any(|j| !full(j, parts)) {
        return false;
    }
    let mut fresh = y.clone();
    fresh.difference_with(union);
    let split = |parts: &mut Vec<FixedBitSet>, j: usize, inside_first: bool| {
        let mut inside = parts[j].clone();
        inside.intersect_with(y);
        let mut outside = parts[j].clone();
        outside.difference_with(y);
        if outside.is_clear() {
            return;
        }
        let pair = if inside_first {
            [inside, outside]
        } else {
            [outside, inside]
        };
        parts.splice(j..=j, pair);
    };
    let last = parts.len() - 1;
    if fresh.is_clear() {
        if a == b {
            return false;
        }
        split(parts, b, true);
        split(parts, a, false);
    } else {
        let right = b == last && (a == b || full(b, parts));
        let left = a == 0 && (a == b || full(a, parts));
        if right {
            split(parts, a, false);
            parts.push(fresh);
        } else if left {
            split(parts, b, true);
            parts.insert(0, fresh);
        } else {
            return false;
        }
    }
    union.union_with(y);
    true
}

/// An order of `0..universe` in which every set is contiguous, if any.
///
/// Sets are grouped into overlap components. Each component's classes have
/// a unique arrangement up to reversal, built incrementally in BFS order of
/// the overlap graph. Component unions form a laminar family and every
/// nested component sits inside a single class of its parent, so the final
/// order nests component arrangements recursively.
pub fn consecutive_ones_order(universe: usize, sets: &[FixedBitSet]) -> Option<Vec<usize>> {
    let mut family: Vec<FixedBitSet> = sets
        .iter()
        .filter(|s| !s.is_clear())
        .map(|s| {
            let mut s = s.clone();
            s.grow(universe);
            s
        })
        .collect();
    family.sort_by_key(|s| s.ones().collect::<Vec<_>>());
    family.dedup();

    let count = family.len();
    let mut component_of = vec![usize::MAX; count];
    let mut components = Vec::new();
    for start in 0..count {
        if component_of[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        component_of[start] = id;
        let mut queue = VecDeque::from([start]);
        let mut parts = vec![family[start].clone()];
        let mut union = family[start].clone();
        let mut sets_in = 0;
        while let Some(s) = queue.pop_front() {
            sets_in += 1;
            if s != start && !place(&mut parts, &mut union, &family[s]) {
                return None;
            }
            for t in 0..count {
                if component_of[t] == usize::MAX && overlaps(&family[s], &family[t]) {
                    component_of[t] = id;
                    queue.push_back(t);
                }
            }
        }
        components.push(OverlapComponent {
            sets: sets_in,
            union,
            parts,
        });
    }

    // Parent of a component: the smallest component whose union contains it.
    let mut by_size: Vec<usize> = (0..components.len()).collect();
    by_size.sort_by_key(|&c| {
        (
            std::cmp::Reverse(components[c].union.count_ones(..)),
            components[c].sets,
            c,
        )
    });
    // children[c][class] = nested components; the last entry collects roots.
    let mut children: Vec<Vec<Vec<usize>>> = components
        .iter()
        .map(|c| vec![Vec::new(); c.parts.len()])
        .collect();
    let mut roots = Vec::new();
    for (rank, &c) in by_size.iter().enumerate() {
        let parent = by_size[..rank]
            .iter()
            .rev()
            .find(|&&p| components[c].union.is_subset(&components[p].union));
        match parent {
            None => roots.push(c),
            Some(&p) => {
                let probe = components[c].union.minimum().expect("non-empty union");
                let class = components[p]
                    .parts
                    .iter()
                    .position(|part| part.contains(probe))
                    .expect("classes cover the union");
                if !components[c].union.is_subset(&components[p].parts[class]) {
                    return None;
                }
                children[p][class].push(c);
            }
        }
    }

    let mut order = Vec::with_capacity(universe);
    let all = {
        let mut all = FixedBitSet::with_capacity(universe);
        all.insert_range(..);
        all
    };
    emit(&all, &roots, &components, &children, &mut order);
    debug_assert_eq!(order.len(), universe);

    let mut reversed = order.clone();
    reversed.reverse();
    if reversed < order {
        order = reversed;
    }
    let pos = positions(&order, universe)?;
    family
        .iter()
        .all(|s| is_contiguous(s, &pos))
        .then_some(order)
}

fn emit(
    region: &FixedBitSet,
    nested: &[usize],
    components: &[OverlapComponent],
    children: &[Vec<Vec<usize>>],
    order: &mut Vec<usize>,
) {
    enum Item {
        Element(usize),
        Component(usize),
    }
    let mut covered = FixedBitSet::with_capacity(region.len());
    let mut items: Vec<(usize, Item)> = Vec::new();
    for &c in nested {
        covered.union_with(&components[c].union);
        let first = components[c].union.minimum().expect("non-empty union");
        items.push((first, Item::Component(c)));
    }
    for x in region.ones() {
        if !covered.contains(x) {
            items.push((x, Item::Element(x)));
        }
    }
    items.sort_by_key(|(first, _)| *first);
    for (_, item) in items {
        match item {
            Item::Element(x) => order.push(x),
            Item::Component(c) => {
                for (class, part) in components[c].parts.iter().enumerate() {
                    emit(part, &children[c][class], components, children, order);
                }
            }
        }
    }
}

/// An order of `0..universe` in which every set is a prefix or a suffix,
/// together with a per-set suffix flag.
///
/// Orienting each set as "itself is a prefix" or "its complement is a
/// prefix" is a 2-SAT instance: the chosen prefixes must be pairwise nested.
pub fn extremal_order(universe: usize, sets: &[FixedBitSet]) -> Option<(Vec<usize>, Vec<bool>)> {
    let count = sets.len();
    let mut all = FixedBitSet::with_capacity(universe);
    all.insert_range(..);
    // prefix[2j] = S_j (S_j is a prefix), prefix[2j + 1] = complement (S_j is a suffix)
    let prefix: Vec<FixedBitSet> = sets
        .iter()
        .flat_map(|s| {
            let mut s = s.clone();
            s.grow(universe);
            let mut complement = all.clone();
            complement.difference_with(&s);
            [s, complement]
        })
        .collect();

    // Literal 2j + o means "set j takes orientation o".
    let mut graph = DiGraph::<(), ()>::with_capacity(2 * count, 0);
    for _ in 0..2 * count {
        graph.add_node(());
    }
    let node = |lit: usize| NodeIndex::new(lit);
    let negate = |lit: usize| lit ^ 1;
    for j in 0..count {
        for l in j + 1..count {
            for oj in 0..2 {
                for ol in 0..2 {
                    let (a, b) = (&prefix[2 * j + oj], &prefix[2 * l + ol]);
                    if !a.is_subset(b) && !b.is_subset(a) {
                        let (x, y) = (2 * j + oj, 2 * l + ol);
                        graph.add_edge(node(x), node(negate(y)), ());
                        graph.add_edge(node(y), node(negate(x)), ());
                    }
                }
            }
        }
    }
    // tarjan_scc yields components in reverse topological order.
    let mut scc_index = vec![0; 2 * count];
    for (idx, scc) in tarjan_scc(&graph).into_iter().enumerate() {
        for v in scc {
            scc_index[v.index()] = idx;
        }
    }
    let mut suffix = Vec::with_capacity(count);
    for j in 0..count {
        let (as_prefix, as_suffix) = (scc_index[2 * j], scc_index[2 * j + 1]);
        if as_prefix == as_suffix {
            return None;
        }
        suffix.push(as_suffix < as_prefix);
    }

    // The chosen prefixes form a chain; order elements by the smallest
    // prefix containing them.
    let mut rank = vec![universe + 1; universe];
    for (j, &is_suffix) in suffix.iter().enumerate() {
        let p = &prefix[2 * j + usize::from(is_suffix)];
        let size = p.count_ones(..);
        for x in p.ones() {
            rank[x] = rank[x].min(size);
        }
    }
    let mut order: Vec<usize> = (0..universe).collect();
    order.sort_by_key(|&x| (rank[x], x));
    let pos = positions(&order, universe)?;
    let valid = sets.iter().zip(&suffix).all(|(s, &is_suffix_flag)| {
        if is_suffix_flag {
            is_suffix(s, &pos)
        } else {
            is_prefix(s, &pos)
        }
    });
    valid.then_some((order, suffix))
}

// ---------------------------------------------------------------------------
// Constructions

/// One iteration of the two-pass voter-interval algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViStep {
    pub position: usize,
    pub voter: usize,
    /// Required number of approved members from this pass.
    pub target: usize,
    pub added: Vec<usize>,
    /// Size of the pass's accumulator after this iteration.
    pub size_after: usize,
    /// Size bound from the pass's invariant, scaled by `2n`: the step is
    /// within bounds when `2n · size_after <= bound_scaled`.
    pub bound_scaled: usize,
}

/// Accumulators of both passes, for inspection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViTrace {
    pub n: usize,
    /// Forward pass, in order positions `0..n`.
    pub forward: Vec<ViStep>,
    /// Backward pass, in order positions `n-1..=0`.
    pub backward: Vec<ViStep>,
    pub forward_set: Vec<usize>,
    pub backward_set: Vec<usize>,
}

impl ViTrace {
    /// Whether every step respected its size bound.
    pub fn size_bounds_hold(&self) -> bool {
        self.forward
            .iter()
            .chain(&self.backward)
            .all(|s| 2 * self.n * s.size_after <= s.bound_scaled)
    }
}

/// Output of [`construct`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub committee: Committee,
    pub guarantee: GuaranteeTag,
    pub trace: Option<ViTrace>,
}

/// Builds a committee with the guarantee of the witness's domain. The
/// witness is re-verified first. Returned committees have exactly `k`
/// members; seats left over by the algorithm go to the lowest-index
/// candidates.
pub fn construct(e: &Election, w: &DomainWitness) -> Result<Construction> {
    verify_witness(e, w)?;
    let domain = w.domain();
    let guarantee = GuaranteeTag::for_domain(domain).ok_or_else(|| {
        Error::Precondition(format!("no construction is known for domain {domain}"))
    })?;
    let mut trace = None;
    let chosen = match w {
        DomainWitness::Vi { order } => {
            let (chosen, t) = two_pass_interval(e, order)?;
            trace = Some(t);
            chosen
        }
        DomainWitness::Cei { order, .. } => extremal_committee(e, order),
        DomainWitness::Vei { order, .. } => {
            let candidate_order = vei_candidate_order(e, order);
            extremal_committee(e, &candidate_order)
        }
        DomainWitness::TPart { blocks, .. } => partition_committee(e, blocks),
        DomainWitness::Wsc { order } => single_crossing_committee(e, order)?,
        DomainWitness::AlphaTr { tree } => tree_committee(e, tree)?,
        DomainWitness::Ci { .. } => unreachable!("rejected above"),
    };
    let committee = Committee::new(e, chosen)?.padded(e);
    Ok(Construction {
        committee,
        guarantee,
        trace,
    })
}

fn unanimous(e: &Election) -> Vec<usize> {
    (0..e.m()).filter(|&c| e.approval_count(c) == e.n()).collect()
}

fn extremal_committee(e: &Election, order: &[usize]) -> Vec<usize> {
    let k = e.k();
    let common = unanimous(e);
    if common.len() >= k {
        return common[..k].to_vec();
    }
    let m = order.len();
    let mut chosen: Vec<usize> = order[..k / 2].to_vec();
    chosen.extend_from_slice(&order[m - k.div_ceil(2)..]);
    chosen
}

/// Candidate order for a voter-extremal profile: prefix-supported
/// candidates by last supporter descending, then suffix-supported ones by
/// first supporter descending.
fn vei_candidate_order(e: &Election, voter_order: &[usize]) -> Vec<usize> {
    let pos = positions(voter_order, e.n()).expect("verified order");
    let mut prefix_side = Vec::new();
    let mut suffix_side = Vec::new();
    for c in 0..e.m() {
        match span(e.approvers(c), &pos) {
            None => prefix_side.push((None, c)),
            Some((0, hi, _)) => prefix_side.push((Some(hi), c)),
            Some((lo, _, _)) => suffix_side.push((lo, c)),
        }
    }
    prefix_side.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    suffix_side.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    prefix_side
        .into_iter()
        .map(|(_, c)| c)
        .chain(suffix_side.into_iter().map(|(_, c)| c))
        .collect()
}

/// `min(|C_j|, ⌊|N(C_j)| · k / n⌋)` lowest-index candidates of each block.
fn partition_committee(e: &Election, blocks: &[Vec<usize>]) -> Vec<usize> {
    let mut chosen = Vec::new();
    for block in blocks {
        let mut block = block.clone();
        block.sort_unstable();
        let support = e.supporters(&block).map(|g| g.len()).unwrap_or(0);
        let quota = (support * e.k() / e.n()).min(block.len());
        chosen.extend_from_slice(&block[..quota]);
    }
    chosen
}

fn single_crossing_committee(e: &Election, order: &[usize]) -> Result<Vec<usize>> {
    let k = e.k();
    let mut chosen = FixedBitSet::with_capacity(e.m());
    if k == 1 {
        // f_i >= 1 forces a candidate approved by everyone.
        if let Some(&c) = unanimous(e).first() {
            chosen.insert(c);
        }
        return Ok(chosen.ones().collect());
    }
    let multi: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&v| e.approval(v).len() > 1)
        .collect();
    if let Some(&first) = multi.first() {
        let star = e.approval(first)[0];
        chosen.insert(star);
        if let Some(&other) = multi.iter().find(|&&v| !e.approves(v, star)) {
            let cross = e
                .approval(other)
                .iter()
                .copied()
                .find(|&c| c != star)
                .expect("ballot has at least two candidates");
            chosen.insert(cross);
        }
    }
    // Voters approving a single candidate are outside the crossing argument.
    let mut extra = FixedBitSet::with_capacity(e.m());
    for v in 0..e.n() {
        if let [c] = e.approval(v) {
            let deserves = e.is_large_enough(e.approval_count(*c), 1);
            if deserves && !chosen.contains(*c) {
                extra.insert(*c);
            }
        }
    }
    chosen.union_with(&extra);
    if chosen.count_ones(..) > k {
        return Err(Error::Precondition(
            "voters approving a single candidate need more seats than available".into(),
        ));
    }
    Ok(chosen.ones().collect())
}

/// Breadth-first from the root, select `c` when `|N_c| · k >= n · dist(c, x)`.
fn tree_committee(e: &Election, tree: &CandidateTree) -> Result<Vec<usize>> {
    let depth = tree.depths()?;
    let children = tree.children();
    let mut chosen = Vec::new();
    let mut queue: VecDeque<usize> = children[e.m()].iter().copied().collect();
    while let Some(c) = queue.pop_front() {
        if e.approval_count(c) * e.k() >= e.n() * depth[c] {
            chosen.push(c);
        }
        queue.extend(children[c].iter().copied());
    }
    if chosen.len() > e.k() {
        return Err(Error::Precondition(format!(
            "tree selection picked {} candidates for {} seats",
            chosen.len(),
            e.k()
        )));
    }
    Ok(chosen)
}

/// Forward then backward pass along a voter-interval order.
///
/// Each voter's demand `f_i` is witnessed by `S*_i`, whose supporters form
/// the block `[x_l, x_r]` around the voter's position. The forward pass
/// gives voter `i` at least `⌊min(|N_{>=i}| · k, f_i · n) / 2n⌋` members of
/// `S*_i`, the backward pass `⌊min(|N_{<i}| · k, f_i · n) / 2n⌋` more,
/// choosing new candidates outside the forward set first.
fn two_pass_interval(e: &Election, order: &[usize]) -> Result<(Vec<usize>, ViTrace)> {
    let (n, k) = (e.n(), e.k());
    let certificates = cohesion::f_vector(
        e,
        &cohesion::Method::VoterInterval {
            order: order.to_vec(),
        },
    )?;
    let supports: Vec<IntervalSupport> = certificates
        .iter()
        .map(|c| IntervalSupport::from_certificate(order, c))
        .collect::<Result<_>>()?;

    let target = |cert: &CohesionCertificate, side: usize| (side * k).min(cert.f * n) / (2 * n);

    let mut forward = FixedBitSet::with_capacity(e.m());
    let mut forward_steps = Vec::with_capacity(n);
    for (p, &v) in order.iter().enumerate() {
        let cert = &certificates[v];
        let goal = target(cert, supports[v].above());
        let have = e.ballot(v).intersection_count(&forward);
        let mut added = Vec::new();
        if have < goal {
            added = cert
                .witness_set
                .iter()
                .copied()
                .filter(|&c| !forward.contains(c))
                .take(goal - have)
                .collect();
            if added.len() < goal - have {
                return Err(Error::Precondition(format!(
                    "witness of voter {v} is too small for the forward pass"
                )));
            }
            forward.extend(added.iter().copied());
        }
        forward_steps.push(ViStep {
            position: p,
            voter: v,
            target: goal,
            added,
            size_after: forward.count_ones(..),
            bound_scaled: (p + supports[v].above()) * k,
        });
    }

    let mut backward = FixedBitSet::with_capacity(e.m());
    let mut backward_steps = Vec::with_capacity(n);
    for (p, &v) in order.iter().enumerate().rev() {
        let cert = &certificates[v];
        let goal = target(cert, supports[v].below());
        let have = e.ballot(v).intersection_count(&backward);
        let mut added = Vec::new();
        if have < goal {
            let fresh = cert.witness_set.iter().copied().filter(|&c| !backward.contains(c));
            let (outside, inside): (Vec<usize>, Vec<usize>) =
                fresh.partition(|&c| !forward.contains(c));
            added = outside.into_iter().chain(inside).take(goal - have).collect();
            if added.len() < goal - have {
                return Err(Error::Precondition(format!(
                    "witness of voter {v} is too small for the backward pass"
                )));
            }
            backward.extend(added.iter().copied());
        }
        backward_steps.push(ViStep {
            position: p,
            voter: v,
            target: goal,
            added,
            size_after: backward.count_ones(..),
            bound_scaled: (n - p - 1 + supports[v].below()) * k,
        });
    }

    let mut chosen = forward.clone();
    chosen.union_with(&backward);
    if chosen.count_ones(..) > k {
        return Err(Error::Precondition(format!(
            "two passes selected {} candidates for {} seats",
            chosen.count_ones(..),
            k
        )));
    }
    let trace = ViTrace {
        n,
        forward: forward_steps,
        backward: backward_steps,
        forward_set: forward.ones().collect(),
        backward_set: backward.ones().collect(),
    };
    Ok((chosen.ones().collect(), trace))
}
