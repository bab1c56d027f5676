//! Exact search for committees meeting per-voter demands.
//!
//! Every objective reduces to a requirement vector `r`: find `W` with
//! `|W| <= k` and `|W ∩ A_i| >= r_i` for all voters. IR uses `r_i = f_i`,
//! semi-strong JR `min(f_i, 1)` and `(α, β)`-IR `⌈(f_i - β) / α⌉`.
//! Deciding IR existence is NP-hard, so the search is a depth-first
//! branch-and-bound with a node cap; running out of nodes yields
//! [`SolveStatus::Undecided`], never a wrong "infeasible".

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::cohesion::CohesionCertificate;
use crate::error::{Error, Result};
use crate::model::{Committee, Election};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    FindIr,
    FindSsjr,
    /// Smallest integer `β` admitting an `(α, β)`-IR committee.
    MinBeta { alpha: Rational },
    /// Smallest `α >= 1` admitting an `(α, β)`-IR committee.
    MinAlpha { beta: Rational },
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::FindIr => f.write_str("ir"),
            Objective::FindSsjr => f.write_str("ssjr"),
            Objective::MinBeta { alpha } => write!(f, "min-beta(alpha={alpha})"),
            Objective::MinAlpha { beta } => write!(f, "min-alpha(beta={beta})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveRequest<'a> {
    pub election: &'a Election,
    /// `f_i` for every voter.
    pub demands: Vec<usize>,
    pub objective: Objective,
    /// Node cap shared by all feasibility searches of one request.
    pub cap: u64,
}

impl<'a> SolveRequest<'a> {
    pub fn new(election: &'a Election, demands: Vec<usize>, objective: Objective) -> Self {
        SolveRequest {
            election,
            demands,
            objective,
            cap: crate::DEFAULT_NODE_CAP,
        }
    }

    pub fn from_certificates(
        election: &'a Election,
        certificates: &[CohesionCertificate],
        objective: Objective,
    ) -> Self {
        Self::new(election, certificates.iter().map(|c| c.f).collect(), objective)
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Found,
    /// Proven by exhausting the search space.
    Infeasible,
    /// The node cap was hit before the answer was certain.
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// A committee of exactly `k` members. For optimization objectives
    /// under `Undecided` this is the best committee found so far.
    pub committee: Option<Committee>,
    /// `(α, β)` reached by `committee` for optimization objectives.
    pub achieved: Option<(Rational, Rational)>,
    pub nodes: u64,
}

/// Solves `req`.
pub fn find_committee(req: &SolveRequest) -> Result<SolveResult> {
    let e = req.election;
    if req.demands.len() != e.n() {
        return Err(Error::Precondition(format!(
            "expected {} demands, got {}",
            e.n(),
            req.demands.len()
        )));
    }
    if req.cap == 0 {
        return Err(Error::Precondition("node cap must be positive".into()));
    }
    let mut search = Search::new(e, req.cap);
    match req.objective {
        Objective::FindIr => Ok(search.feasibility(&req.demands)),
        Objective::FindSsjr => {
            let r: Vec<usize> = req.demands.iter().map(|&f| f.min(1)).collect();
            Ok(search.feasibility(&r))
        }
        Objective::MinBeta { alpha } => {
            check_alpha(alpha)?;
            min_beta(&mut search, &req.demands, alpha)
        }
        Objective::MinAlpha { beta } => {
            if beta < Rational::from_integer(0) {
                return Err(Error::Precondition("beta must be non-negative".into()));
            }
            min_alpha(&mut search, &req.demands, beta)
        }
    }
}

/// Whether an IR committee exists, with one if so.
pub fn find_ir(e: &Election, demands: &[usize]) -> Result<SolveResult> {
    find_committee(&SolveRequest::new(e, demands.to_vec(), Objective::FindIr))
}

/// Whether a semi-strong JR committee exists, with one if so.
pub fn find_ssjr(e: &Election, demands: &[usize]) -> Result<SolveResult> {
    find_committee(&SolveRequest::new(e, demands.to_vec(), Objective::FindSsjr))
}

fn check_alpha(alpha: Rational) -> Result<()> {
    if alpha < Rational::from_integer(1) {
        return Err(Error::Precondition(format!("alpha must be >= 1, got {alpha}")));
    }
    Ok(())
}

/// `r_i = max(0, ⌈(f_i - β) / α⌉)`.
fn relaxed_requirements(demands: &[usize], alpha: Rational, beta: Rational) -> Vec<usize> {
    demands
        .iter()
        .map(|&f| {
            let gap = Rational::from_integer(f as i64) - beta;
            if gap <= Rational::from_integer(0) {
                0
            } else {
                (gap / alpha).ceil().to_integer() as usize
            }
        })
        .collect()
}

fn min_beta(search: &mut Search, demands: &[usize], alpha: Rational) -> Result<SolveResult> {
    let top = demands.iter().copied().max().unwrap_or(0);
    // β = max f_i leaves nothing to require.
    let mut best = search.feasibility(&vec![0; demands.len()]);
    let mut best_beta = top;
    let (mut lo, mut hi) = (0usize, top);
    let mut status = SolveStatus::Found;
    while lo < hi {
        let mid = (lo + hi) / 2;
        let r = relaxed_requirements(demands, alpha, Rational::from_integer(mid as i64));
        let result = search.feasibility(&r);
        match result.status {
            SolveStatus::Found => {
                hi = mid;
                best_beta = mid;
                best = result;
            }
            SolveStatus::Infeasible => lo = mid + 1,
            SolveStatus::Undecided => {
                status = SolveStatus::Undecided;
                break;
            }
        }
    }
    Ok(SolveResult {
        status,
        committee: best.committee,
        achieved: Some((alpha, Rational::from_integer(best_beta as i64))),
        nodes: search.nodes,
    })
}

fn min_alpha(search: &mut Search, demands: &[usize], beta: Rational) -> Result<SolveResult> {
    let k = search.e.k() as i64;
    let one = Rational::from_integer(1);
    let mut grid = vec![one];
    for &f in demands {
        let gap = Rational::from_integer(f as i64) - beta;
        for s in 1..=k {
            let a = gap / Rational::from_integer(s);
            if a > one {
                grid.push(a);
            }
        }
    }
    grid.sort();
    grid.dedup();

    // Feasibility is monotone in α; the largest grid value is the last hope.
    let last = *grid.last().expect("grid contains 1");
    let top = search.feasibility(&relaxed_requirements(demands, last, beta));
    if top.status != SolveStatus::Found {
        return Ok(SolveResult {
            status: top.status,
            committee: None,
            achieved: None,
            nodes: search.nodes,
        });
    }
    let mut best = top;
    let mut best_alpha = last;
    let (mut lo, mut hi) = (0usize, grid.len() - 1);
    let mut status = SolveStatus::Found;
    while lo < hi {
        let mid = (lo + hi) / 2;
        let result = search.feasibility(&relaxed_requirements(demands, grid[mid], beta));
        match result.status {
            SolveStatus::Found => {
                hi = mid;
                best_alpha = grid[mid];
                best = result;
            }
            SolveStatus::Infeasible => lo = mid + 1,
            SolveStatus::Undecided => {
                status = SolveStatus::Undecided;
                break;
            }
        }
    }
    Ok(SolveResult {
        status,
        committee: best.committee,
        achieved: Some((best_alpha, beta)),
        nodes: search.nodes,
    })
}

struct Exhausted;

struct Search<'a> {
    e: &'a Election,
    cap: u64,
    nodes: u64,
}

struct State {
    chosen: FixedBitSet,
    excluded: FixedBitSet,
    size: usize,
    deficit: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(e: &'a Election, cap: u64) -> Self {
        Search { e, cap, nodes: 0 }
    }

    fn feasibility(&mut self, requirements: &[usize]) -> SolveResult {
        let e = self.e;
        let mut state = State {
            chosen: FixedBitSet::with_capacity(e.m()),
            excluded: FixedBitSet::with_capacity(e.m()),
            size: 0,
            deficit: requirements.to_vec(),
        };
        let outcome = self.dfs(&mut state);
        match outcome {
            Ok(Some(mask)) => {
                let committee = Committee::from_mask(e, mask)
                    .expect("search never exceeds k")
                    .padded(e);
                SolveResult {
                    status: SolveStatus::Found,
                    committee: Some(committee),
                    achieved: None,
                    nodes: self.nodes,
                }
            }
            Ok(None) => SolveResult {
                status: SolveStatus::Infeasible,
                committee: None,
                achieved: None,
                nodes: self.nodes,
            },
            Err(Exhausted) => SolveResult {
                status: SolveStatus::Undecided,
                committee: None,
                achieved: None,
                nodes: self.nodes,
            },
        }
    }

    fn dfs(&mut self, st: &mut State) -> Result<Option<FixedBitSet>, Exhausted> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Exhausted);
        }
        let e = self.e;
        let seats = e.k() - st.size;
        let total: usize = st.deficit.iter().sum();
        if total == 0 {
            return Ok(Some(st.chosen.clone()));
        }
        if st.deficit.iter().any(|&d| d > seats) {
            return Ok(None);
        }

        let mut open = st.chosen.clone();
        open.union_with(&st.excluded);
        open.toggle_range(..);

        // Most constrained voter: least slack between open approved
        // candidates and deficit.
        let mut pick: Option<(usize, usize, usize)> = None; // (slack, Reverse deficit, voter)
        for v in 0..e.n() {
            let d = st.deficit[v];
            if d == 0 {
                continue;
            }
            let available = e.ballot(v).intersection_count(&open);
            if available < d {
                return Ok(None);
            }
            let key = (available - d, usize::MAX - d, v);
            if pick.is_none_or(|p| key < p) {
                pick = Some(key);
            }
        }
        let voter = pick.expect("some deficit is positive").2;

        // Coverage of open candidates over voters still in deficit.
        let mut cover = vec![0usize; e.m()];
        for v in 0..e.n() {
            if st.deficit[v] > 0 {
                for c in e.ballot(v).intersection(&open) {
                    cover[c] += 1;
                }
            }
        }
        let mut best: Vec<usize> = open.ones().map(|c| cover[c]).collect();
        best.sort_unstable_by(|a, b| b.cmp(a));
        if best.iter().take(seats).sum::<usize>() < total {
            return Ok(None);
        }

        let mut branch: Vec<usize> = e.ballot(voter).intersection(&open).collect();
        branch.sort_by_key(|&c| (usize::MAX - cover[c], c));
        let mut newly_excluded = Vec::new();
        let mut found = None;
        for &c in &branch {
            let touched: Vec<usize> = e
                .approvers(c)
                .ones()
                .filter(|&v| st.deficit[v] > 0)
                .collect();
            st.chosen.insert(c);
            st.size += 1;
            for &v in &touched {
                st.deficit[v] -= 1;
            }
            let result = self.dfs(st);
            for &v in &touched {
                st.deficit[v] += 1;
            }
            st.chosen.set(c, false);
            st.size -= 1;
            match result {
                Ok(Some(mask)) => {
                    found = Some(mask);
                }
                Ok(None) => {}
                Err(x) => {
                    self.restore(st, &newly_excluded);
                    return Err(x);
                }
            }
            if found.is_some() {
                break;
            }
            st.excluded.insert(c);
            newly_excluded.push(c);
        }
        self.restore(st, &newly_excluded);
        Ok(found)
    }

    fn restore(&self, st: &mut State, newly_excluded: &[usize]) {
        for &c in newly_excluded {
            st.excluded.set(c, false);
        }
    }
}
