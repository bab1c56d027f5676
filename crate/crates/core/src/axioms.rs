//! Representation axioms with re-checkable violation witnesses.
//!
//! The group axioms (JR, PJR, EJR, FJR, core) quantify over voter groups and
//! candidate sets, so they are decided by exhaustive searches under a node
//! cap. A search that runs out of nodes reports [`Status::Undecided`]
//! instead of guessing.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;

use crate::cohesion::{self, CohesionCertificate};
use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::model::{Committee, Election};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    Jr,
    Pjr,
    Ejr,
    Fjr,
    Core,
    Ssjr,
    Ir,
    AlphaBetaIr { alpha: Rational, beta: Rational },
    PerfectRep,
}

impl AxiomId {
    /// `(α, β)`-IR; requires `α >= 1` and `β >= 0`.
    pub fn alpha_beta(alpha: Rational, beta: Rational) -> Result<AxiomId> {
        if alpha < Rational::from_integer(1) || beta < Rational::from_integer(0) {
            return Err(Error::Precondition(format!(
                "(alpha, beta)-IR needs alpha >= 1 and beta >= 0, got ({alpha}, {beta})"
            )));
        }
        Ok(AxiomId::AlphaBetaIr { alpha, beta })
    }

    /// Axioms defined only for committees of exactly `k` members.
    pub fn needs_full_committee(&self) -> bool {
        !matches!(
            self,
            AxiomId::Ir | AxiomId::Ssjr | AxiomId::AlphaBetaIr { .. }
        )
    }

    fn needs_demands(&self) -> bool {
        !self.needs_full_committee()
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomId::Jr => f.write_str("jr"),
            AxiomId::Pjr => f.write_str("pjr"),
            AxiomId::Ejr => f.write_str("ejr"),
            AxiomId::Fjr => f.write_str("fjr"),
            AxiomId::Core => f.write_str("core"),
            AxiomId::Ssjr => f.write_str("ssjr"),
            AxiomId::Ir => f.write_str("ir"),
            AxiomId::AlphaBetaIr { alpha, beta } => write!(f, "({alpha},{beta})-ir"),
            AxiomId::PerfectRep => f.write_str("perfect-rep"),
        }
    }
}

impl FromStr for AxiomId {
    type Err = Error;

    /// Parses the plain names; `(α, β)`-IR is built with [`AxiomId::alpha_beta`].
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "jr" => AxiomId::Jr,
            "pjr" => AxiomId::Pjr,
            "ejr" => AxiomId::Ejr,
            "fjr" => AxiomId::Fjr,
            "core" => AxiomId::Core,
            "ssjr" => AxiomId::Ssjr,
            "ir" => AxiomId::Ir,
            "pr" | "perfect-rep" | "perfect" => AxiomId::PerfectRep,
            other => return Err(Error::Precondition(format!("unknown axiom '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Satisfied,
    Violated,
    /// The search hit its node cap.
    Undecided,
}

/// Evidence that a committee violates an axiom. Voter and candidate lists
/// are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A voter gets fewer members than the axiom asks for, given a
    /// certified demand.
    Underserved {
        certificate: CohesionCertificate,
        satisfaction: usize,
    },
    /// `|group| · k >= ℓ · n` and every member approves all of `candidates`
    /// (`|candidates| = ℓ`), yet the group is under-represented.
    Cohesive {
        ell: usize,
        group: Vec<usize>,
        candidates: Vec<usize>,
    },
    /// `|group| · k >= |candidates| · n` and every member approves at least
    /// `beta` of `candidates`, yet each gets fewer than `beta` members.
    WeaklyCohesive {
        beta: usize,
        group: Vec<usize>,
        candidates: Vec<usize>,
    },
    /// `|group| · k >= |candidates| · n` and every member approves more of
    /// `candidates` than of the committee.
    Blocking {
        group: Vec<usize>,
        candidates: Vec<usize>,
    },
    /// Voters whose approved members cannot absorb them:
    /// `|members| · n < |voters| · k` with `members = W ∩ ⋃ A_i`.
    Hall {
        voters: Vec<usize>,
        members: Vec<usize>,
    },
}

impl Violation {
    /// Re-evaluates the witness directly from the election and committee.
    pub fn recheck(&self, e: &Election, w: &Committee, axiom: &AxiomId) -> bool {
        let (n, k) = (e.n(), e.k());
        let sat = |v: usize| w.satisfaction(e, v);
        let in_range = |voters: &[usize], cands: &[usize]| {
            voters.iter().all(|&v| v < n) && cands.iter().all(|&c| c < e.m())
        };
        match self {
            Violation::Underserved {
                certificate,
                satisfaction,
            } => {
                let v = certificate.voter;
                if v >= n || !certificate.verify(e) || sat(v) != *satisfaction {
                    return false;
                }
                let f = certificate.f;
                match axiom {
                    AxiomId::Ir => *satisfaction < f,
                    AxiomId::Ssjr => f >= 1 && *satisfaction == 0,
                    AxiomId::AlphaBetaIr { alpha, beta } => {
                        *alpha * Rational::from_integer(*satisfaction as i64) + beta
                            < Rational::from_integer(f as i64)
                    }
                    _ => false,
                }
            }
            Violation::Cohesive {
                ell,
                group,
                candidates,
            } => {
                if !in_range(group, candidates) || candidates.len() != *ell || *ell == 0 {
                    return false;
                }
                let cohesive = group
                    .iter()
                    .all(|&v| candidates.iter().all(|&c| e.approves(v, c)))
                    && e.is_large_enough(distinct(group), *ell);
                let deprived = match axiom {
                    AxiomId::Jr => *ell == 1 && group.iter().all(|&v| sat(v) == 0),
                    AxiomId::Ejr => group.iter().all(|&v| sat(v) < *ell),
                    AxiomId::Pjr => {
                        let mut covered = FixedBitSet::with_capacity(e.m());
                        for &v in group {
                            covered.union_with(e.ballot(v));
                        }
                        covered.intersection_count(w.mask()) < *ell
                    }
                    _ => false,
                };
                cohesive && deprived
            }
            Violation::WeaklyCohesive {
                beta,
                group,
                candidates,
            } => {
                *axiom == AxiomId::Fjr
                    && *beta >= 1
                    && in_range(group, candidates)
                    && !candidates.is_empty()
                    && distinct(candidates) * n <= distinct(group) * k
                    && group.iter().all(|&v| {
                        candidates.iter().filter(|&&c| e.approves(v, c)).count() >= *beta
                            && sat(v) < *beta
                    })
            }
            Violation::Blocking { group, candidates } => {
                *axiom == AxiomId::Core
                    && in_range(group, candidates)
                    && !candidates.is_empty()
                    && candidates.len() <= k
                    && distinct(candidates) * n <= distinct(group) * k
                    && group.iter().all(|&v| {
                        candidates.iter().filter(|&&c| e.approves(v, c)).count() > sat(v)
                    })
            }
            Violation::Hall { voters, members } => {
                if *axiom != AxiomId::PerfectRep || !in_range(voters, members) {
                    return false;
                }
                let mut reach = FixedBitSet::with_capacity(e.m());
                for &v in voters {
                    reach.union_with(e.ballot(v));
                }
                reach.intersect_with(w.mask());
                let listed: Vec<usize> = reach.ones().collect();
                listed == *members && members.len() * n < distinct(voters) * k
            }
        }
    }
}

fn distinct(items: &[usize]) -> usize {
    let mut v = items.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomVerdict {
    pub axiom: AxiomId,
    pub status: Status,
    /// Present exactly when `status` is `Violated`.
    pub witness: Option<Violation>,
    /// Search nodes explored.
    pub nodes: u64,
}

impl AxiomVerdict {
    pub fn satisfied(&self) -> bool {
        self.status == Status::Satisfied
    }

    pub fn violated(&self) -> bool {
        self.status == Status::Violated
    }
}

struct Budget {
    used: u64,
    cap: u64,
}

struct Exhausted;

impl Budget {
    fn tick(&mut self) -> Result<(), Exhausted> {
        self.used += 1;
        if self.used > self.cap {
            Err(Exhausted)
        } else {
            Ok(())
        }
    }
}

/// [`check_with_cap`] with the default node cap.
pub fn check(
    e: &Election,
    w: &Committee,
    axiom: &AxiomId,
    demands: Option<&[CohesionCertificate]>,
) -> Result<AxiomVerdict> {
    check_with_cap(e, w, axiom, demands, crate::DEFAULT_NODE_CAP)
}

/// Decides whether `w` satisfies `axiom`.
///
/// IR-type axioms use `demands` when given (one certificate per voter) and
/// compute them exactly otherwise; if that computation exceeds the cap the
/// verdict is undecided.
pub fn check_with_cap(
    e: &Election,
    w: &Committee,
    axiom: &AxiomId,
    demands: Option<&[CohesionCertificate]>,
    cap: u64,
) -> Result<AxiomVerdict> {
    if w.target_size() != e.k() || w.members().iter().any(|&c| c >= e.m()) {
        return Err(Error::InvalidCommittee(
            "committee does not belong to this election".into(),
        ));
    }
    if axiom.needs_full_committee() && !w.is_full() {
        return Err(Error::InvalidCommittee(format!(
            "{axiom} is defined for committees of exactly {} members, got {}",
            e.k(),
            w.len()
        )));
    }
    if let AxiomId::AlphaBetaIr { alpha, beta } = axiom {
        AxiomId::alpha_beta(*alpha, *beta)?;
    }
    if *axiom == AxiomId::PerfectRep && !e.n().is_multiple_of(e.k()) {
        return Err(Error::Precondition(format!(
            "perfect representation needs k | n (n = {}, k = {})",
            e.n(),
            e.k()
        )));
    }

    let mut budget = Budget { used: 0, cap };
    let verdict = |status: Status, witness: Option<Violation>, nodes: u64| AxiomVerdict {
        axiom: *axiom,
        status,
        witness,
        nodes,
    };

    if axiom.needs_demands() {
        let owned;
        let certs = match demands {
            Some(d) => {
                if d.len() != e.n() {
                    return Err(Error::Precondition(format!(
                        "expected {} demand certificates, got {}",
                        e.n(),
                        d.len()
                    )));
                }
                d
            }
            None => match cohesion::f_vector(e, &cohesion::Method::Exact { cap }) {
                Ok(c) => {
                    owned = c;
                    &owned[..]
                }
                Err(Error::SearchLimit(_)) => return Ok(verdict(Status::Undecided, None, cap)),
                Err(err) => return Err(err),
            },
        };
        let found = certs.iter().find_map(|cert| {
            let s = w.satisfaction(e, cert.voter);
            let fails = match axiom {
                AxiomId::Ir => s < cert.f,
                AxiomId::Ssjr => cert.f >= 1 && s == 0,
                AxiomId::AlphaBetaIr { alpha, beta } => {
                    *alpha * Rational::from_integer(s as i64) + beta
                        < Rational::from_integer(cert.f as i64)
                }
                _ => unreachable!("group axioms handled below"),
            };
            fails.then(|| Violation::Underserved {
                certificate: cert.clone(),
                satisfaction: s,
            })
        });
        return Ok(match found {
            Some(v) => verdict(Status::Violated, Some(v), e.n() as u64),
            None => verdict(Status::Satisfied, None, e.n() as u64),
        });
    }

    let outcome = match axiom {
        AxiomId::Jr => Ok(find_jr(e, w)),
        AxiomId::Ejr => find_ejr(e, w, &mut budget),
        AxiomId::Pjr => find_pjr(e, w, &mut budget),
        AxiomId::Fjr => find_fjr(e, w, &mut budget),
        AxiomId::Core => find_core(e, w, &mut budget),
        AxiomId::PerfectRep => Ok(find_hall(e, w)),
        _ => unreachable!("IR-type axioms handled above"),
    };
    Ok(match outcome {
        Ok(Some(v)) => verdict(Status::Violated, Some(v), budget.used),
        Ok(None) => verdict(Status::Satisfied, None, budget.used),
        Err(Exhausted) => verdict(Status::Undecided, None, budget.used),
    })
}

fn voters_where(e: &Election, pred: impl Fn(usize) -> bool) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(e.n());
    set.extend((0..e.n()).filter(|&v| pred(v)));
    set
}

/// Lexicographically first `S` with `|S| = ell` and
/// `|N(S) ∩ group| · k >= ell · n`.
fn cohesive_subset(
    e: &Election,
    group: &FixedBitSet,
    ell: usize,
    budget: &mut Budget,
) -> Result<Option<(Vec<usize>, FixedBitSet)>, Exhausted> {
    if !e.is_large_enough(group.count_ones(..), ell) {
        return Ok(None);
    }
    let pool: Vec<usize> = (0..e.m())
        .filter(|&c| e.is_large_enough(e.approvers(c).intersection_count(group), ell))
        .collect();
    if pool.len() < ell {
        return Ok(None);
    }
    let mut chosen = Vec::with_capacity(ell);
    fn dfs(
        e: &Election,
        pool: &[usize],
        start: usize,
        ell: usize,
        current: &FixedBitSet,
        chosen: &mut Vec<usize>,
        budget: &mut Budget,
    ) -> Result<Option<FixedBitSet>, Exhausted> {
        budget.tick()?;
        if chosen.len() == ell {
            return Ok(Some(current.clone()));
        }
        for j in start..pool.len() {
            if pool.len() - j < ell - chosen.len() {
                break;
            }
            let mut next = current.clone();
            next.intersect_with(e.approvers(pool[j]));
            if !e.is_large_enough(next.count_ones(..), ell) {
                continue;
            }
            chosen.push(pool[j]);
            if let Some(found) = dfs(e, pool, j + 1, ell, &next, chosen, budget)? {
                return Ok(Some(found));
            }
            chosen.pop();
        }
        Ok(None)
    }
    Ok(dfs(e, &pool, 0, ell, group, &mut chosen, budget)?.map(|g| (chosen, g)))
}

fn find_jr(e: &Election, w: &Committee) -> Option<Violation> {
    let unrepresented = voters_where(e, |v| w.satisfaction(e, v) == 0);
    (0..e.m()).find_map(|c| {
        let mut group = e.approvers(c).clone();
        group.intersect_with(&unrepresented);
        e.is_large_enough(group.count_ones(..), 1)
            .then(|| Violation::Cohesive {
                ell: 1,
                group: group.ones().collect(),
                candidates: vec![c],
            })
    })
}

fn find_ejr(e: &Election, w: &Committee, budget: &mut Budget) -> Result<Option<Violation>, Exhausted> {
    for ell in 1..=e.k() {
        let deficient = voters_where(e, |v| w.satisfaction(e, v) < ell);
        if let Some((candidates, group)) = cohesive_subset(e, &deficient, ell, budget)? {
            return Ok(Some(Violation::Cohesive {
                ell,
                group: group.ones().collect(),
                candidates,
            }));
        }
    }
    Ok(None)
}

/// A PJR violation for level `ℓ` is an `ℓ`-cohesive group whose approved
/// members all lie in some `T ⊆ W` with `|T| = ℓ - 1`.
fn find_pjr(e: &Election, w: &Committee, budget: &mut Budget) -> Result<Option<Violation>, Exhausted> {
    let members = w.members();
    for ell in 1..=e.k() {
        let mut found = None;
        for_each_subset(members, ell - 1, &mut |t: &[usize]| {
            let mut allowed = FixedBitSet::with_capacity(e.m());
            allowed.extend(t.iter().copied());
            let group = voters_where(e, |v| {
                e.ballot(v)
                    .intersection(w.mask())
                    .all(|c| allowed.contains(c))
            });
            match cohesive_subset(e, &group, ell, budget) {
                Ok(Some((candidates, g))) => {
                    found = Some(Ok(Violation::Cohesive {
                        ell,
                        group: g.ones().collect(),
                        candidates,
                    }));
                    false
                }
                Ok(None) => true,
                Err(x) => {
                    found = Some(Err(x));
                    false
                }
            }
        });
        match found {
            Some(Ok(v)) => return Ok(Some(v)),
            Some(Err(x)) => return Err(x),
            None => {}
        }
    }
    Ok(None)
}

/// Calls `visit` on every `size`-subset of `items` in lexicographic order
/// until it returns false.
fn for_each_subset(items: &[usize], size: usize, visit: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(
        items: &[usize],
        start: usize,
        size: usize,
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if chosen.len() == size {
            return visit(chosen);
        }
        for j in start..items.len() {
            if items.len() - j < size - chosen.len() {
                break;
            }
            chosen.push(items[j]);
            if !rec(items, j + 1, size, chosen, visit) {
                return false;
            }
            chosen.pop();
        }
        true
    }
    rec(items, 0, size, &mut Vec::with_capacity(size), visit);
}

/// Depth-first over candidate sets `S` (`|S| <= k`) drawn from candidates
/// approved by voters with fewer than `k` members, checking every `β`.
fn find_fjr(e: &Election, w: &Committee, budget: &mut Budget) -> Result<Option<Violation>, Exhausted> {
    let (n, k) = (e.n(), e.k());
    let sat = w.satisfaction_vector(e);
    let pool: Vec<usize> = (0..e.m())
        .filter(|&c| e.approvers(c).ones().any(|v| sat[v] < k))
        .collect();
    struct Search<'a> {
        e: &'a Election,
        sat: Vec<usize>,
        pool: Vec<usize>,
        counts: Vec<usize>,
        chosen: Vec<usize>,
    }
    impl Search<'_> {
        fn test(&self) -> Option<Violation> {
            let (n, k) = (self.e.n(), self.e.k());
            let size = self.chosen.len();
            (1..=size).find_map(|beta| {
                let group: Vec<usize> = (0..n)
                    .filter(|&v| self.counts[v] >= beta && self.sat[v] < beta)
                    .collect();
                (size * n <= group.len() * k).then(|| Violation::WeaklyCohesive {
                    beta,
                    group,
                    candidates: self.chosen.clone(),
                })
            })
        }

        fn dfs(&mut self, start: usize, budget: &mut Budget) -> Result<Option<Violation>, Exhausted> {
            budget.tick()?;
            if !self.chosen.is_empty() {
                if let Some(v) = self.test() {
                    return Ok(Some(v));
                }
            }
            if self.chosen.len() == self.e.k() {
                return Ok(None);
            }
            for j in start..self.pool.len() {
                let c = self.pool[j];
                for v in self.e.approvers(c).ones() {
                    self.counts[v] += 1;
                }
                self.chosen.push(c);
                let found = self.dfs(j + 1, budget);
                self.chosen.pop();
                for v in self.e.approvers(c).ones() {
                    self.counts[v] -= 1;
                }
                if let Some(v) = found? {
                    return Ok(Some(v));
                }
            }
            Ok(None)
        }
    }
    let _ = (n, k);
    let mut search = Search {
        e,
        sat,
        pool,
        counts: vec![0; e.n()],
        chosen: Vec::new(),
    };
    search.dfs(0, budget)
}

/// Smallest blocking set first: for `s = 1..=k`, lexicographic search over
/// `s`-sets, pruned when too few voters can still strictly improve.
fn find_core(e: &Election, w: &Committee, budget: &mut Budget) -> Result<Option<Violation>, Exhausted> {
    let n = e.n();
    let sat = w.satisfaction_vector(e);
    struct Search<'a> {
        e: &'a Election,
        sat: &'a [usize],
        size: usize,
        pool: Vec<usize>,
        counts: Vec<usize>,
        chosen: Vec<usize>,
    }
    impl Search<'_> {
        fn dfs(&mut self, start: usize, budget: &mut Budget) -> Result<Option<Violation>, Exhausted> {
            budget.tick()?;
            let remaining = self.size - self.chosen.len();
            let hopeful = (0..self.e.n())
                .filter(|&v| self.counts[v] + remaining > self.sat[v])
                .count();
            if !self.e.is_large_enough(hopeful, self.size) {
                return Ok(None);
            }
            if remaining == 0 {
                return Ok(Some(Violation::Blocking {
                    group: (0..self.e.n())
                        .filter(|&v| self.counts[v] > self.sat[v])
                        .collect(),
                    candidates: self.chosen.clone(),
                }));
            }
            for j in start..self.pool.len() {
                if self.pool.len() - j < remaining {
                    break;
                }
                let c = self.pool[j];
                for v in self.e.approvers(c).ones() {
                    self.counts[v] += 1;
                }
                self.chosen.push(c);
                let found = self.dfs(j + 1, budget);
                self.chosen.pop();
                for v in self.e.approvers(c).ones() {
                    self.counts[v] -= 1;
                }
                if let Some(v) = found? {
                    return Ok(Some(v));
                }
            }
            Ok(None)
        }
    }
    for size in 1..=e.k() {
        let pool: Vec<usize> = (0..e.m())
            .filter(|&c| e.approvers(c).ones().any(|v| sat[v] < size))
            .collect();
        let mut search = Search {
            e,
            sat: &sat,
            size,
            pool,
            counts: vec![0; n],
            chosen: Vec::new(),
        };
        if let Some(v) = search.dfs(0, budget)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Max-flow from voters to committee members, each member absorbing
/// exactly `n / k` voters. On failure the voters reachable in the residual
/// network violate Hall's condition.
fn find_hall(e: &Election, w: &Committee) -> Option<Violation> {
    let (n, k) = (e.n(), e.k());
    let members = w.members();
    let source = n + members.len();
    let sink = source + 1;
    let mut net = FlowNetwork::new(sink + 1);
    for v in 0..n {
        net.add_edge(source, v, 1);
        for (j, &c) in members.iter().enumerate() {
            if e.approves(v, c) {
                net.add_edge(v, n + j, u64::MAX / 4);
            }
        }
    }
    for j in 0..members.len() {
        net.add_edge(n + j, sink, (n / k) as u64);
    }
    if net.max_flow(source, sink) == n as u64 {
        return None;
    }
    let reach = net.residual_reachable(source);
    Some(Violation::Hall {
        voters: (0..n).filter(|&v| reach[v]).collect(),
        members: members
            .iter()
            .enumerate()
            .filter(|&(j, _)| reach[n + j])
            .map(|(_, &c)| c)
            .collect(),
    })
}

/// Verdicts for every axiom of the implication diagram in one pass.
/// Perfect representation is included only when `k | n`.
pub fn implication_report(
    e: &Election,
    w: &Committee,
    demands: Option<&[CohesionCertificate]>,
) -> Result<BTreeMap<AxiomId, AxiomVerdict>> {
    let owned;
    let demands = match demands {
        Some(d) => Some(d),
        None => match cohesion::f_vector(e, &cohesion::Method::Exact { cap: crate::DEFAULT_NODE_CAP }) {
            Ok(c) => {
                owned = c;
                Some(&owned[..])
            }
            Err(Error::SearchLimit(_)) => None,
            Err(err) => return Err(err),
        },
    };
    let mut axioms = vec![
        AxiomId::Jr,
        AxiomId::Pjr,
        AxiomId::Ejr,
        AxiomId::Fjr,
        AxiomId::Core,
        AxiomId::Ssjr,
        AxiomId::Ir,
    ];
    if e.n().is_multiple_of(e.k()) {
        axioms.push(AxiomId::PerfectRep);
    }
    let mut report = BTreeMap::new();
    for a in axioms {
        let verdict = if a.needs_demands() && demands.is_none() {
            AxiomVerdict {
                axiom: a,
                status: Status::Undecided,
                witness: None,
                nodes: 0,
            }
        } else {
            check(e, w, &a, demands)?
        };
        report.insert(a, verdict);
    }
    Ok(report)
}

/// The arrows `X ⇒ Y` of the implication diagram.
pub const IMPLICATIONS: [(AxiomId, AxiomId); 8] = [
    (AxiomId::Ir, AxiomId::Ejr),
    (AxiomId::Ir, AxiomId::Ssjr),
    (AxiomId::Ejr, AxiomId::Pjr),
    (AxiomId::Pjr, AxiomId::Jr),
    (AxiomId::Ssjr, AxiomId::Jr),
    (AxiomId::Core, AxiomId::Fjr),
    (AxiomId::Fjr, AxiomId::Ejr),
    (AxiomId::PerfectRep, AxiomId::Ssjr),
];

/// Arrows contradicted by a report (premise satisfied, conclusion violated).
pub fn broken_implications(report: &BTreeMap<AxiomId, AxiomVerdict>) -> Vec<(AxiomId, AxiomId)> {
    IMPLICATIONS
        .iter()
        .filter(|(x, y)| {
            matches!((report.get(x), report.get(y)), (Some(a), Some(b)) if a.satisfied() && b.violated())
        })
        .copied()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn committee(e: &Election, one_based: &[usize]) -> Committee {
        Committee::new(e, one_based.iter().map(|c| c - 1)).unwrap()
    }

    fn assert_witness(e: &Election, w: &Committee, v: &AxiomVerdict) {
        assert!(v.violated());
        assert!(v.witness.as_ref().unwrap().recheck(e, w, &v.axiom));
    }

    #[test]
    fn bridge_ir() {
        let e = fixtures::interval_bridge();
        let good = committee(&e, &[1, 2]);
        assert!(check(&e, &good, &AxiomId::Ir, None).unwrap().satisfied());
        let bad = committee(&e, &[1, 3]);
        let v = check(&e, &bad, &AxiomId::Ir, None).unwrap();
        assert_witness(&e, &bad, &v);
        let Some(Violation::Underserved { certificate, satisfaction }) = v.witness else {
            panic!("expected an underserved voter");
        };
        assert_eq!((certificate.voter, certificate.f, satisfaction), (7, 1, 0));
    }

    #[test]
    fn ssjr_committees_starve_the_pair_group() {
        let e = fixtures::ssjr_ejr_conflict();
        let w = committee(&e, &[1, 3, 4, 5]);
        let v = check(&e, &w, &AxiomId::Ejr, None).unwrap();
        assert_witness(&e, &w, &v);
        assert_eq!(
            v.witness,
            Some(Violation::Cohesive {
                ell: 2,
                group: vec![0, 1, 2, 3],
                candidates: vec![0, 1]
            })
        );
        assert!(check(&e, &w, &AxiomId::Ssjr, None).unwrap().satisfied());
    }

    #[test]
    fn unique_ir_committee_is_not_core_stable() {
        let e = fixtures::core_conflict();
        let w = committee(&e, &[1, 2, 3, 4, 9, 10]);
        let v = check(&e, &w, &AxiomId::Core, None).unwrap();
        assert_witness(&e, &w, &v);
        assert_eq!(
            v.witness,
            Some(Violation::Blocking {
                group: (4..12).collect(),
                candidates: vec![4, 5, 6, 7]
            })
        );
        assert!(check(&e, &w, &AxiomId::Ir, None).unwrap().satisfied());
    }

    #[test]
    fn additive_slack_of_k_minus_one() {
        let e = fixtures::disjoint_blocks_lower_bound(3);
        let w = committee(&e, &[1, 2, 3]);
        let a = AxiomId::alpha_beta(1.into(), 2.into()).unwrap();
        assert!(check(&e, &w, &a, None).unwrap().satisfied());
        let a = AxiomId::alpha_beta(1.into(), 1.into()).unwrap();
        assert!(check(&e, &w, &a, None).unwrap().violated());
        assert!(AxiomId::alpha_beta(Rational::new(1, 2), 0.into()).is_err());
    }

    #[test]
    fn ssjr_without_perfect_representation() {
        let e = fixtures::ssjr_without_perfect_representation();
        let w = committee(&e, &[4, 5, 6]);
        assert!(check(&e, &w, &AxiomId::Ssjr, None).unwrap().satisfied());
        let v = check(&e, &w, &AxiomId::PerfectRep, None).unwrap();
        assert_witness(&e, &w, &v);
        let w = committee(&e, &[1, 2, 3]);
        assert!(check(&e, &w, &AxiomId::PerfectRep, None).unwrap().satisfied());
    }

    #[test]
    fn perfect_representation_needs_divisibility() {
        let e = fixtures::interval_bridge().with_k(3).unwrap();
        let w = committee(&e, &[1, 2, 3]);
        assert!(matches!(
            check(&e, &w, &AxiomId::PerfectRep, None),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn group_axioms_need_full_committees() {
        let e = fixtures::interval_bridge();
        let w = committee(&e, &[1]);
        assert!(check(&e, &w, &AxiomId::Ejr, None).is_err());
        assert!(check(&e, &w, &AxiomId::Ir, None).is_ok());
    }

    #[test]
    fn bridge_report_is_all_green() {
        let e = fixtures::interval_bridge();
        let w = committee(&e, &[1, 2]);
        let report = implication_report(&e, &w, None).unwrap();
        for a in [AxiomId::Ir, AxiomId::Ejr, AxiomId::Pjr, AxiomId::Jr, AxiomId::Ssjr, AxiomId::Core] {
            assert!(report[&a].satisfied(), "{a}");
        }
        assert!(broken_implications(&report).is_empty());
    }

    #[test]
    fn tiny_cap_is_undecided() {
        let e = fixtures::core_conflict();
        let w = committee(&e, &[1, 2, 3, 4, 9, 10]);
        let v = check_with_cap(&e, &w, &AxiomId::Core, None, 3).unwrap();
        assert_eq!(v.status, Status::Undecided);
        assert!(v.witness.is_none());
    }
}
