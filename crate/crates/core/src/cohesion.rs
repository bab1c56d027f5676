//! Per-voter seat demands.
//!
//! Voter `i` can justifiably demand `f_i` seats, the size of the largest
//! `S ⊆ A_i` with `|N(S)| · k >= |S| · n`. Deciding `f_i >= j` is
//! NP-complete, so the general computation is an exhaustive search under a
//! node cap. On voter-interval profiles `N(S)` is always a contiguous block
//! of the voter order, and scanning all blocks around `i` is polynomial.

use fixedbitset::FixedBitSet;

use crate::domains;
use crate::error::{Error, Result};
use crate::model::{Election, VoterGroup};
use crate::Rational;

/// A voter's demand `f` together with a witnessing candidate set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohesionCertificate {
    pub voter: usize,
    pub f: usize,
    /// `S*` with `|S*| = f` and `S* ⊆ A_voter`, sorted.
    pub witness_set: Vec<usize>,
    /// `N(S*)`.
    pub witness_supporters: VoterGroup,
}

impl CohesionCertificate {
    /// Re-derives every invariant from the election alone.
    pub fn verify(&self, e: &Election) -> bool {
        let Ok(support) = e.supporters(&self.witness_set) else {
            return false;
        };
        let mut sorted = self.witness_set.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == self.witness_set.len()
            && self.witness_set.len() == self.f
            && self.witness_set.iter().all(|&c| e.approves(self.voter, c))
            && support == self.witness_supporters
            && e.is_large_enough(support.len(), self.f)
    }
}

/// How to compute demands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Method {
    /// Exhaustive search, giving up after `cap` search nodes.
    Exact { cap: u64 },
    /// Interval scan along a voter order witnessing the voter-interval property.
    VoterInterval { order: Vec<usize> },
}

/// Exact `f_i` with the lexicographically smallest maximum witness.
pub fn f_certificate_exact(e: &Election, voter: usize, cap: u64) -> Result<CohesionCertificate> {
    e.check_voter(voter)?;
    let mut search = ExactSearch::new(e, cap);
    let f = search.maximum(voter)?;
    let witness_set = search.smallest_witness(voter, f)?;
    let witness_supporters = e.supporters(&witness_set)?;
    Ok(CohesionCertificate {
        voter,
        f,
        witness_set,
        witness_supporters,
    })
}

struct ExactSearch<'a> {
    e: &'a Election,
    cap: u64,
    nodes: u64,
}

impl<'a> ExactSearch<'a> {
    fn new(e: &'a Election, cap: u64) -> Self {
        ExactSearch { e, cap, nodes: 0 }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::SearchLimit(format!(
                "demand search exceeded {} nodes",
                self.cap
            )));
        }
        Ok(())
    }

    fn full_group(&self) -> FixedBitSet {
        let mut all = FixedBitSet::with_capacity(self.e.n());
        all.insert_range(..);
        all
    }

    fn maximum(&mut self, voter: usize) -> Result<usize> {
        let e = self.e;
        let mut pool: Vec<usize> = e.approval(voter).to_vec();
        pool.sort_by_key(|&c| (std::cmp::Reverse(e.approval_count(c)), c));
        let mut stack = vec![FixedBitSet::new(); pool.len() + 1];
        stack[0] = self.full_group();
        let mut best = 0;
        self.grow(&pool, 0, 0, &mut stack, &mut best)?;
        Ok(best)
    }

    fn grow(
        &mut self,
        pool: &[usize],
        from: usize,
        size: usize,
        stack: &mut [FixedBitSet],
        best: &mut usize,
    ) -> Result<()> {
        self.tick()?;
        *best = (*best).max(size);
        // no superset of S can clear the next threshold
        if !self.e.is_large_enough(stack[size].count_ones(..), size + 1) {
            return Ok(());
        }
        for j in from..pool.len() {
            if size + (pool.len() - j) <= *best {
                break;
            }
            let c = pool[j];
            let (head, tail) = stack.split_at_mut(size + 1);
            let count = head[size].intersection_count(self.e.approvers(c));
            if !self.e.is_large_enough(count, size + 1) {
                continue;
            }
            tail[0].clone_from(&head[size]);
            tail[0].intersect_with(self.e.approvers(c));
            self.grow(pool, j + 1, size + 1, stack, best)?;
        }
        Ok(())
    }

    /// First size-`f` feasible subset of `A_voter` in lexicographic order.
    fn smallest_witness(&mut self, voter: usize, f: usize) -> Result<Vec<usize>> {
        if f == 0 {
            return Ok(Vec::new());
        }
        let pool = self.e.approval(voter).to_vec();
        let mut stack = vec![FixedBitSet::new(); f + 1];
        stack[0] = self.full_group();
        let mut chosen = Vec::with_capacity(f);
        if self.lex_dfs(&pool, 0, f, &mut stack, &mut chosen)? {
            Ok(chosen)
        } else {
            unreachable!("a witness of size f exists by construction")
        }
    }

    fn lex_dfs(
        &mut self,
        pool: &[usize],
        from: usize,
        f: usize,
        stack: &mut [FixedBitSet],
        chosen: &mut Vec<usize>,
    ) -> Result<bool> {
        self.tick()?;
        let size = chosen.len();
        if size == f {
            return Ok(true);
        }
        for j in from..pool.len() {
            if size + (pool.len() - j) < f {
                break;
            }
            let c = pool[j];
            let count = stack[size].intersection_count(self.e.approvers(c));
            if !self.e.is_large_enough(count, f) {
                continue;
            }
            let (head, tail) = stack.split_at_mut(size + 1);
            tail[0].clone_from(&head[size]);
            tail[0].intersect_with(self.e.approvers(c));
            chosen.push(c);
            if self.lex_dfs(pool, j + 1, f, stack, chosen)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

/// `f_i` via the interval scan. `order` must witness the voter-interval
/// property of `e`.
pub fn f_certificate_vi(e: &Election, order: &[usize], voter: usize) -> Result<CohesionCertificate> {
    e.check_voter(voter)?;
    if !domains::is_voter_interval_order(e, order) {
        return Err(Error::InvalidWitness(
            "voter order does not witness the voter-interval property".into(),
        ));
    }
    Ok(interval_scan(e, order, voter))
}

fn interval_scan(e: &Election, order: &[usize], voter: usize) -> CohesionCertificate {
    let n = e.n();
    let k = e.k();
    let p = order
        .iter()
        .position(|&v| v == voter)
        .expect("order is a permutation");

    // left[x] = candidates approved by every voter at positions x..=p
    let mut left = vec![FixedBitSet::new(); p + 1];
    left[p] = e.ballot(voter).clone();
    for x in (0..p).rev() {
        let mut s = left[x + 1].clone();
        s.intersect_with(e.ballot(order[x]));
        left[x] = s;
    }

    let mut best = 0;
    let mut best_set = FixedBitSet::with_capacity(e.m());
    let mut common = FixedBitSet::with_capacity(e.m());
    for (x_left, base) in left.iter().enumerate() {
        common.clone_from(base);
        for x_right in p..n {
            if x_right > p {
                common.intersect_with(e.ballot(order[x_right]));
            }
            let size = common.count_ones(..);
            if size <= best {
                break;
            }
            let seats = (x_right - x_left + 1) * k / n;
            let value = seats.min(size);
            if value > best {
                best = value;
                best_set.clone_from(&common);
            }
        }
    }
    let witness_set: Vec<usize> = best_set.ones().take(best).collect();
    let witness_supporters = e
        .supporters(&witness_set)
        .expect("witness candidates are in range");
    CohesionCertificate {
        voter,
        f: best,
        witness_set,
        witness_supporters,
    }
}

/// Certificates for every voter, in voter order.
pub fn f_vector(e: &Election, method: &Method) -> Result<Vec<CohesionCertificate>> {
    match method {
        Method::Exact { cap } => (0..e.n())
            .map(|v| f_certificate_exact(e, v, *cap))
            .collect(),
        Method::VoterInterval { order } => {
            if !domains::is_voter_interval_order(e, order) {
                return Err(Error::InvalidWitness(
                    "voter order does not witness the voter-interval property".into(),
                ));
            }
            Ok((0..e.n()).map(|v| interval_scan(e, order, v)).collect())
        }
    }
}

/// Just the `f` values of a certificate vector.
pub fn f_values(certificates: &[CohesionCertificate]) -> Vec<usize> {
    certificates.iter().map(|c| c.f).collect()
}

/// Exact demand vector with the default node cap.
pub fn exact_f_values(e: &Election) -> Result<Vec<usize>> {
    Ok(f_values(&f_vector(
        e,
        &Method::Exact {
            cap: crate::DEFAULT_NODE_CAP,
        },
    )?))
}

/// Where `N(S*_i)` sits relative to voter `i` along a voter-interval order.
/// Positions are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSupport {
    pub voter: usize,
    pub position: usize,
    pub left: usize,
    pub right: usize,
}

impl IntervalSupport {
    /// Fails if the witness supporters are not a contiguous block around the
    /// voter's position.
    pub fn from_certificate(
        order: &[usize],
        certificate: &CohesionCertificate,
    ) -> Result<IntervalSupport> {
        let positions: Vec<usize> = order
            .iter()
            .enumerate()
            .filter(|(_, &v)| certificate.witness_supporters.contains(v))
            .map(|(p, _)| p)
            .collect();
        let position = order
            .iter()
            .position(|&v| v == certificate.voter)
            .ok_or_else(|| Error::InvalidWitness("voter missing from order".into()))?;
        let (left, right) = (positions[0], positions[positions.len() - 1]);
        if right - left + 1 != positions.len() || position < left || position > right {
            return Err(Error::InvalidWitness(format!(
                "supporters of voter {}'s witness are not contiguous around it",
                certificate.voter
            )));
        }
        Ok(IntervalSupport {
            voter: certificate.voter,
            position,
            left,
            right,
        })
    }

    /// `|N_{<i}|`: supporters strictly before the voter.
    pub fn below(&self) -> usize {
        self.position - self.left
    }

    /// `|N_{>=i}|`: supporters from the voter onwards.
    pub fn above(&self) -> usize {
        self.right - self.position + 1
    }

    pub fn f_below(&self, e: &Election) -> Rational {
        Rational::new((self.below() * e.k()) as i64, e.n() as i64)
    }

    pub fn f_above(&self, e: &Election) -> Rational {
        Rational::new((self.above() * e.k()) as i64, e.n() as i64)
    }
}
