//! Approval-based committee rules with exact arithmetic.
//!
//! Every tie is broken towards the lowest candidate index; for optimization
//! rules this means the lexicographically smallest optimal committee.
//! Optimization rules can also report every optimal committee
//! ([`Mode::AllTied`]). Thiele scores are evaluated on integer-scaled
//! weights, loads and budgets as big rationals.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cohesion::exact_f_values;
use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::model::{Committee, Election};
use crate::solver::{self, SolveStatus};
use crate::{binomial, Rational};

/// Upper limit on `C(m, k)` for exhaustive rules.
pub const MAX_COMMITTEES: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleId {
    Av,
    Sav,
    PavExact,
    SeqPav,
    RevSeqPav,
    CcExact,
    SeqCc,
    GreedyMonroe,
    MonroeExact,
    SeqPhragmen,
    MaxPhragmen,
    RuleX,
    MinimaxAv,
    /// Thiele rule with weights `1, w, w², ...`, `0 < w < 1`.
    PavGeometric(Rational),
}

impl RuleId {
    pub fn pav_geometric(w: Rational) -> Result<RuleId> {
        if w <= Rational::from_integer(0) || w >= Rational::from_integer(1) {
            return Err(Error::Precondition(format!(
                "geometric weight base must lie in (0, 1), got {w}"
            )));
        }
        Ok(RuleId::PavGeometric(w))
    }

    /// Rules defined by optimizing over all committees.
    pub fn is_optimization(&self) -> bool {
        matches!(
            self,
            RuleId::Av
                | RuleId::Sav
                | RuleId::PavExact
                | RuleId::CcExact
                | RuleId::MonroeExact
                | RuleId::MaxPhragmen
                | RuleId::MinimaxAv
                | RuleId::PavGeometric(_)
        )
    }

    pub const ALL_FIXED: [RuleId; 13] = [
        RuleId::Av,
        RuleId::Sav,
        RuleId::PavExact,
        RuleId::SeqPav,
        RuleId::RevSeqPav,
        RuleId::CcExact,
        RuleId::SeqCc,
        RuleId::GreedyMonroe,
        RuleId::MonroeExact,
        RuleId::SeqPhragmen,
        RuleId::MaxPhragmen,
        RuleId::RuleX,
        RuleId::MinimaxAv,
    ];
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RuleId::Av => "av",
            RuleId::Sav => "sav",
            RuleId::PavExact => "pav",
            RuleId::SeqPav => "seq-pav",
            RuleId::RevSeqPav => "rev-seq-pav",
            RuleId::CcExact => "cc",
            RuleId::SeqCc => "seq-cc",
            RuleId::GreedyMonroe => "greedy-monroe",
            RuleId::MonroeExact => "monroe",
            RuleId::SeqPhragmen => "seq-phragmen",
            RuleId::MaxPhragmen => "max-phragmen",
            RuleId::RuleX => "rule-x",
            RuleId::MinimaxAv => "minimax-av",
            RuleId::PavGeometric(w) => return write!(f, "pav-geometric:{w}"),
        };
        f.write_str(name)
    }
}

impl FromStr for RuleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        if let Some(w) = lower.strip_prefix("pav-geometric:") {
            let w: Rational = w
                .parse()
                .map_err(|_| Error::Precondition(format!("bad weight base '{w}'")))?;
            return RuleId::pav_geometric(w);
        }
        RuleId::ALL_FIXED
            .iter()
            .copied()
            .find(|r| r.to_string() == lower)
            .ok_or_else(|| Error::Precondition(format!("unknown rule '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Single,
    /// Every optimal committee; optimization rules only.
    AllTied,
}

/// Committees chosen by a rule, with exact diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleOutcome {
    pub rule: RuleId,
    /// In lexicographic order; one entry unless `Mode::AllTied`.
    pub committees: Vec<Committee>,
    /// Per committee: the Thiele score (AV, SAV, PAV, CC and their
    /// sequential variants), the number of represented voters (Monroe
    /// rules), the maximum voter load (Phragmén rules), the money spent
    /// (Rule X) or the maximum Hamming distance (Minimax AV).
    pub scores: Vec<BigRational>,
    /// Per committee, per voter: loads for the Phragmén rules, money spent
    /// for Rule X; empty for other rules.
    pub loads: Vec<Vec<BigRational>>,
    /// Seats Rule X left open and sequential Phragmén filled.
    pub completion_seats: usize,
}

fn big(x: u128) -> BigInt {
    BigInt::from(x)
}

fn ratio(num: u128, den: u128) -> BigRational {
    BigRational::new(big(num), big(den))
}

/// Runs `rule` on `e`.
pub fn run_rule(e: &Election, rule: RuleId, mode: Mode) -> Result<RuleOutcome> {
    if mode == Mode::AllTied && !rule.is_optimization() {
        return Err(Error::Precondition(format!(
            "{rule} is sequential; it has no tied-winner mode"
        )));
    }
    let single = |committee: Vec<usize>, score: BigRational| -> Result<RuleOutcome> {
        Ok(RuleOutcome {
            rule,
            committees: vec![Committee::new(e, committee)?],
            scores: vec![score],
            loads: Vec::new(),
            completion_seats: 0,
        })
    };
    match rule {
        RuleId::Av | RuleId::PavExact | RuleId::CcExact | RuleId::PavGeometric(_) => {
            let weights = ThieleWeights::for_rule(rule, e.k())?;
            if rule == RuleId::Av && mode == Mode::Single {
                let counts: Vec<u128> = (0..e.m()).map(|c| e.approval_count(c) as u128).collect();
                let chosen = top_k(&counts, e.k());
                let score = counts_sum(&counts, &chosen);
                return single(chosen, ratio(score, 1));
            }
            guard(e)?;
            let (committees, score) = thiele_exact(e, &weights, mode);
            outcome_many(e, rule, committees, ratio(score, weights.scale))
        }
        RuleId::Sav => {
            let (weights, scale) = sav_weights(e)?;
            if mode == Mode::Single {
                let chosen = top_k(&weights, e.k());
                let score = counts_sum(&weights, &chosen);
                return single(chosen, ratio(score, scale));
            }
            guard(e)?;
            let mut best = 0u128;
            let mut winners = Vec::new();
            for_each_committee(e.m(), e.k(), &mut |w| {
                let s = counts_sum(&weights, w);
                if s > best || winners.is_empty() {
                    if s > best {
                        winners.clear();
                    }
                    best = best.max(s);
                }
                if s == best {
                    winners.push(w.to_vec());
                }
            });
            outcome_many(e, rule, winners, ratio(best, scale))
        }
        RuleId::SeqPav | RuleId::SeqCc => {
            let base = if rule == RuleId::SeqPav {
                RuleId::PavExact
            } else {
                RuleId::CcExact
            };
            let weights = ThieleWeights::for_rule(base, e.k())?;
            let (chosen, score) = thiele_sequential(e, &weights);
            single(chosen, ratio(score, weights.scale))
        }
        RuleId::RevSeqPav => {
            let (chosen, score, scale) = reverse_sequential_pav(e)?;
            single(chosen, ratio(score, scale))
        }
        RuleId::GreedyMonroe => {
            let (chosen, represented) = greedy_monroe(e);
            single(chosen, ratio(represented as u128, 1))
        }
        RuleId::MonroeExact => {
            guard(e)?;
            let mut best = 0usize;
            let mut winners: Vec<Vec<usize>> = Vec::new();
            for_each_committee(e.m(), e.k(), &mut |w| {
                let s = monroe_score(e, w);
                if s > best {
                    best = s;
                    winners.clear();
                }
                if s == best && (mode == Mode::AllTied || winners.is_empty()) {
                    winners.push(w.to_vec());
                }
            });
            outcome_many(e, rule, winners, ratio(best as u128, 1))
        }
        RuleId::MinimaxAv => {
            guard(e)?;
            let mut best = usize::MAX;
            let mut winners: Vec<Vec<usize>> = Vec::new();
            let sizes: Vec<usize> = (0..e.n()).map(|v| e.approval(v).len()).collect();
            for_each_committee(e.m(), e.k(), &mut |w| {
                let mut mask = FixedBitSet::with_capacity(e.m());
                mask.extend(w.iter().copied());
                let worst = (0..e.n())
                    .map(|v| sizes[v] + e.k() - 2 * e.ballot(v).intersection_count(&mask))
                    .max()
                    .unwrap_or(0);
                if worst < best {
                    best = worst;
                    winners.clear();
                }
                if worst == best && (mode == Mode::AllTied || winners.is_empty()) {
                    winners.push(w.to_vec());
                }
            });
            outcome_many(e, rule, winners, ratio(best as u128, 1))
        }
        RuleId::SeqPhragmen => {
            let start = vec![BigRational::zero(); e.n()];
            let (chosen, loads) = sequential_phragmen(e, Vec::new(), start);
            let max = loads.iter().max().cloned().unwrap_or_else(BigRational::zero);
            Ok(RuleOutcome {
                rule,
                committees: vec![Committee::new(e, chosen)?],
                scores: vec![max],
                loads: vec![loads],
                completion_seats: 0,
            })
        }
        RuleId::MaxPhragmen => max_phragmen(e, mode),
        RuleId::RuleX => {
            let (chosen, spent, completion) = rule_x(e);
            let total = spent.iter().fold(BigRational::zero(), |acc, x| acc + x);
            Ok(RuleOutcome {
                rule,
                committees: vec![Committee::new(e, chosen)?],
                scores: vec![total],
                loads: vec![spent],
                completion_seats: completion,
            })
        }
    }
}

fn outcome_many(
    e: &Election,
    rule: RuleId,
    committees: Vec<Vec<usize>>,
    score: BigRational,
) -> Result<RuleOutcome> {
    let committees: Vec<Committee> = committees
        .into_iter()
        .map(|w| Committee::new(e, w))
        .collect::<Result<_>>()?;
    Ok(RuleOutcome {
        rule,
        scores: vec![score; committees.len()],
        committees,
        loads: Vec::new(),
        completion_seats: 0,
    })
}

fn guard(e: &Election) -> Result<()> {
    let count = binomial(e.m(), e.k());
    if count > MAX_COMMITTEES {
        return Err(Error::SearchLimit(format!(
            "C({}, {}) = {count} committees exceed the limit of {MAX_COMMITTEES}",
            e.m(),
            e.k()
        )));
    }
    Ok(())
}

/// Indices of the `k` largest values, lowest index first on ties; sorted.
fn top_k(values: &[u128], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].cmp(&values[a]).then(a.cmp(&b)));
    let mut chosen = idx[..k].to_vec();
    chosen.sort_unstable();
    chosen
}

fn counts_sum(values: &[u128], chosen: &[usize]) -> u128 {
    chosen.iter().map(|&c| values[c]).sum()
}

/// Calls `visit` on every `k`-subset of `0..m` in lexicographic order.
fn for_each_committee(m: usize, k: usize, visit: &mut dyn FnMut(&[usize])) {
    let mut w: Vec<usize> = (0..k).collect();
    if k > m {
        return;
    }
    loop {
        visit(&w);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if w[i] < m - k + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        w[i] += 1;
        for j in i + 1..k {
            w[j] = w[j - 1] + 1;
        }
    }
}

/// Thiele weights scaled to integers: `weight[j]` is the value of a
/// voter's `j`-th approved member times `scale`.
struct ThieleWeights {
    weight: Vec<u128>,
    scale: u128,
}

impl ThieleWeights {
    fn for_rule(rule: RuleId, k: usize) -> Result<Self> {
        let overflow = || Error::Overflow("Thiele weights exceed 128 bits".into());
        let mut weight = vec![0u128; k + 1];
        let scale = match rule {
            RuleId::Av => {
                weight[1..].fill(1);
                1
            }
            RuleId::CcExact => {
                weight[1] = 1;
                1
            }
            RuleId::PavExact => {
                let lcm = (1..=k as u128).fold(1u128, |acc, j| acc.lcm(&j));
                for (j, slot) in weight.iter_mut().enumerate().skip(1) {
                    *slot = lcm / j as u128;
                }
                lcm
            }
            RuleId::PavGeometric(w) => {
                let (p, q) = (*w.numer() as u128, *w.denom() as u128);
                let pow = |base: u128, exp: usize| -> Result<u128> {
                    (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base).ok_or_else(overflow))
                };
                for (j, slot) in weight.iter_mut().enumerate().skip(1) {
                    *slot = pow(p, j - 1)?
                        .checked_mul(pow(q, k - j)?)
                        .ok_or_else(overflow)?;
                }
                pow(q, k.saturating_sub(1))?
            }
            _ => unreachable!("not a Thiele rule"),
        };
        Ok(ThieleWeights { weight, scale })
    }

    /// Value of one more member for a voter who already has `sat`.
    fn next(&self, sat: usize) -> u128 {
        self.weight.get(sat + 1).copied().unwrap_or(0)
    }
}

fn thiele_sequential(e: &Election, w: &ThieleWeights) -> (Vec<usize>, u128) {
    let mut sat = vec![0usize; e.n()];
    let mut chosen = FixedBitSet::with_capacity(e.m());
    let mut score = 0u128;
    for _ in 0..e.k() {
        let mut best: Option<(u128, usize)> = None;
        for c in 0..e.m() {
            if chosen.contains(c) {
                continue;
            }
            let gain: u128 = e.approvers(c).ones().map(|v| w.next(sat[v])).sum();
            if best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, c));
            }
        }
        let (gain, c) = best.expect("k <= m");
        chosen.insert(c);
        score += gain;
        for v in e.approvers(c).ones() {
            sat[v] += 1;
        }
    }
    (chosen.ones().collect(), score)
}

/// Branch-and-bound over committees in lexicographic order. The bound adds
/// the best remaining marginal gains, valid because weights never increase.
fn thiele_exact(e: &Election, w: &ThieleWeights, mode: Mode) -> (Vec<Vec<usize>>, u128) {
    let (_, seed) = thiele_sequential(e, w);
    struct Search<'a> {
        e: &'a Election,
        w: &'a ThieleWeights,
        mode: Mode,
        sat: Vec<usize>,
        chosen: Vec<usize>,
        best: u128,
        winners: Vec<Vec<usize>>,
    }
    impl Search<'_> {
        fn dfs(&mut self, idx: usize, score: u128) {
            let (m, k) = (self.e.m(), self.e.k());
            if self.chosen.len() == k {
                if score > self.best {
                    self.best = score;
                    self.winners.clear();
                }
                if score == self.best && (self.mode == Mode::AllTied || self.winners.is_empty()) {
                    self.winners.push(self.chosen.clone());
                }
                return;
            }
            let remaining = k - self.chosen.len();
            if m - idx < remaining {
                return;
            }
            let mut gains: Vec<u128> = (idx..m)
                .map(|c| self.e.approvers(c).ones().map(|v| self.w.next(self.sat[v])).sum())
                .collect();
            gains.sort_unstable_by(|a, b| b.cmp(a));
            let bound = score + gains[..remaining].iter().sum::<u128>();
            let hopeless = bound < self.best
                || (bound == self.best && self.mode == Mode::Single && !self.winners.is_empty());
            if hopeless {
                return;
            }
            let gain: u128 = self
                .e
                .approvers(idx)
                .ones()
                .map(|v| self.w.next(self.sat[v]))
                .sum();
            for v in self.e.approvers(idx).ones() {
                self.sat[v] += 1;
            }
            self.chosen.push(idx);
            self.dfs(idx + 1, score + gain);
            self.chosen.pop();
            for v in self.e.approvers(idx).ones() {
                self.sat[v] -= 1;
            }
            self.dfs(idx + 1, score);
        }
    }
    let mut search = Search {
        e,
        w,
        mode,
        sat: vec![0; e.n()],
        chosen: Vec::with_capacity(e.k()),
        best: seed,
        winners: Vec::new(),
    };
    search.dfs(0, 0);
    (search.winners, search.best)
}

/// Per-candidate satisfaction-approval weights `Σ_{i ∈ N(c)} L / |A_i|`
/// with `L` the lcm of the ballot sizes.
fn sav_weights(e: &Election) -> Result<(Vec<u128>, u128)> {
    let mut scale = 1u128;
    for v in 0..e.n() {
        let size = e.approval(v).len() as u128;
        if size > 0 {
            scale = scale.lcm(&size);
        }
    }
    let mut weights = vec![0u128; e.m()];
    for v in 0..e.n() {
        let size = e.approval(v).len() as u128;
        for &c in e.approval(v) {
            weights[c] = weights[c]
                .checked_add(scale / size)
                .ok_or_else(|| Error::Overflow("satisfaction weights".into()))?;
        }
    }
    Ok((weights, scale))
}

/// Starts from all candidates and repeatedly drops the one whose removal
/// costs the least PAV score.
fn reverse_sequential_pav(e: &Election) -> Result<(Vec<usize>, u128, u128)> {
    let m = e.m();
    let lcm = (1..=m as u128).fold(1u128, |acc, j| acc.lcm(&j));
    let mut sat: Vec<usize> = (0..e.n()).map(|v| e.approval(v).len()).collect();
    let mut alive = FixedBitSet::with_capacity(m);
    alive.insert_range(..);
    for _ in e.k()..m {
        let mut best: Option<(u128, usize)> = None;
        for c in alive.ones() {
            let loss: u128 = e.approvers(c).ones().map(|v| lcm / sat[v] as u128).sum();
            if best.is_none_or(|(l, _)| loss < l) {
                best = Some((loss, c));
            }
        }
        let (_, c) = best.expect("more than k candidates remain");
        alive.set(c, false);
        for v in e.approvers(c).ones() {
            sat[v] -= 1;
        }
    }
    let weights = ThieleWeights::for_rule(RuleId::PavExact, e.k())?;
    let score: u128 = sat.iter().map(|&s| (1..=s).map(|j| weights.weight[j]).sum::<u128>()).sum();
    Ok((alive.ones().collect(), score, weights.scale))
}

/// Rounds of size `⌈n/k⌉` (the first `n mod k` rounds) or `⌊n/k⌋`; each
/// round takes the candidate with the most unassigned supporters (capped
/// at the round size) and assigns them, topping up with unassigned voters.
fn greedy_monroe(e: &Election) -> (Vec<usize>, usize) {
    let (n, k) = (e.n(), e.k());
    let mut free = FixedBitSet::with_capacity(n);
    free.insert_range(..);
    let mut chosen = FixedBitSet::with_capacity(e.m());
    let mut represented = 0;
    for round in 0..k {
        let size = n / k + usize::from(round < n % k);
        let mut best: Option<(usize, usize)> = None;
        for c in 0..e.m() {
            if chosen.contains(c) {
                continue;
            }
            let value = e.approvers(c).intersection_count(&free).min(size);
            if best.is_none_or(|(b, _)| value > b) {
                best = Some((value, c));
            }
        }
        let (value, c) = best.expect("k <= m");
        chosen.insert(c);
        represented += value;
        let mut group: Vec<usize> = e.approvers(c).intersection(&free).take(size).collect();
        let short = size - group.len();
        group.extend(free.ones().filter(|v| !e.approves(*v, c)).take(short));
        for v in group {
            free.set(v, false);
        }
    }
    (chosen.ones().collect(), represented)
}

/// Largest number of voters represented by an approved member when every
/// member serves `⌊n/k⌋` or `⌈n/k⌉` voters.
fn monroe_score(e: &Election, w: &[usize]) -> usize {
    let (n, k) = (e.n(), e.k());
    let source = w.len() + n;
    let bonus = source + 1;
    let sink = bonus + 1;
    let mut net = FlowNetwork::new(sink + 1);
    net.add_edge(source, bonus, (n % k) as u64);
    for (j, &c) in w.iter().enumerate() {
        net.add_edge(source, j, (n / k) as u64);
        net.add_edge(bonus, j, 1);
        for v in e.approvers(c).ones() {
            net.add_edge(j, w.len() + v, 1);
        }
    }
    for v in 0..n {
        net.add_edge(w.len() + v, sink, 1);
    }
    net.max_flow(source, sink) as usize
}

/// Sequential Phragmén from the given starting committee and loads.
fn sequential_phragmen(
    e: &Election,
    start: Vec<usize>,
    mut loads: Vec<BigRational>,
) -> (Vec<usize>, Vec<BigRational>) {
    let mut chosen = FixedBitSet::with_capacity(e.m());
    chosen.extend(start);
    while chosen.count_ones(..) < e.k() {
        let mut best: Option<(BigRational, usize)> = None;
        for c in 0..e.m() {
            let support = e.approval_count(c);
            if chosen.contains(c) || support == 0 {
                continue;
            }
            let total = e
                .approvers(c)
                .ones()
                .fold(BigRational::one(), |acc, v| acc + &loads[v]);
            let t = total / BigRational::from_integer(BigInt::from(support));
            if best.as_ref().is_none_or(|(b, _)| t < *b) {
                best = Some((t, c));
            }
        }
        match best {
            Some((t, c)) => {
                chosen.insert(c);
                for v in e.approvers(c).ones() {
                    loads[v] = t.clone();
                }
            }
            None => {
                // only unsupported candidates are left
                let c = (0..e.m()).find(|&c| !chosen.contains(c)).expect("k <= m");
                chosen.insert(c);
            }
        }
    }
    (chosen.ones().collect(), loads)
}

/// Rule X: each voter starts with `k/n`; a candidate costs 1, split as
/// evenly as budgets allow. The cheapest per-voter price `ρ` wins each
/// round. Remaining seats go to sequential Phragmén started from the money
/// each voter spent.
fn rule_x(e: &Election) -> (Vec<usize>, Vec<BigRational>, usize) {
    let (n, k) = (e.n(), e.k());
    let initial = BigRational::new(BigInt::from(k), BigInt::from(n));
    let mut budget = vec![initial.clone(); n];
    let mut chosen: Vec<usize> = Vec::new();
    let one = BigRational::one();
    while chosen.len() < k {
        let mut best: Option<(BigRational, usize)> = None;
        for c in 0..e.m() {
            if chosen.contains(&c) {
                continue;
            }
            let mut budgets: Vec<&BigRational> = e.approvers(c).ones().map(|v| &budget[v]).collect();
            let total = budgets.iter().fold(BigRational::zero(), |acc, b| acc + *b);
            if total < one || budgets.is_empty() {
                continue;
            }
            budgets.sort();
            let mut paid = BigRational::zero();
            let s = budgets.len();
            let mut rho = None;
            for (j, b) in budgets.iter().enumerate() {
                let r = (&one - &paid) / BigRational::from_integer(BigInt::from(s - j));
                if r <= **b {
                    rho = Some(r);
                    break;
                }
                paid += *b;
            }
            let rho = rho.expect("total budget covers the price");
            if best.as_ref().is_none_or(|(b, _)| rho < *b) {
                best = Some((rho, c));
            }
        }
        let Some((rho, c)) = best else { break };
        for v in e.approvers(c).ones() {
            let pay = if budget[v] < rho { budget[v].clone() } else { rho.clone() };
            budget[v] -= pay;
        }
        chosen.push(c);
    }
    let spent: Vec<BigRational> = budget.iter().map(|b| &initial - b).collect();
    let completion = k - chosen.len();
    if completion == 0 {
        chosen.sort_unstable();
        return (chosen, spent, 0);
    }
    let (full, _) = sequential_phragmen(e, chosen, spent.clone());
    (full, spent, completion)
}

/// `max_{∅ ≠ T ⊆ W} |T| / |N(T)|`, the smallest possible maximum load;
/// `None` when some member has no supporters.
fn min_max_load(e: &Election, w: &[usize]) -> Option<Rational> {
    if w.iter().any(|&c| e.approval_count(c) == 0) {
        return None;
    }
    let size = w.len();
    let mut union = vec![FixedBitSet::with_capacity(e.n()); 1 << size];
    let mut best = Rational::from_integer(0);
    for mask in 1usize..(1 << size) {
        let low = mask.trailing_zeros() as usize;
        let mut u = union[mask & (mask - 1)].clone();
        u.union_with(e.approvers(w[low]));
        let r = Rational::new(mask.count_ones() as i64, u.count_ones(..) as i64);
        if r > best {
            best = r;
        }
        union[mask] = u;
    }
    Some(best)
}

/// Load distribution minimizing the sorted load vector: repeatedly settle
/// the densest remaining member set on its remaining supporters.
fn leximin_loads(e: &Election, w: &[usize]) -> Vec<BigRational> {
    let mut loads = vec![BigRational::zero(); e.n()];
    let mut members: Vec<usize> = w.iter().copied().filter(|&c| e.approval_count(c) > 0).collect();
    let mut taken = FixedBitSet::with_capacity(e.n());
    while !members.is_empty() {
        let size = members.len();
        let mut best: Option<(Rational, usize, FixedBitSet)> = None;
        for mask in 1usize..(1 << size) {
            let mut u = FixedBitSet::with_capacity(e.n());
            for (j, &c) in members.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    u.union_with(e.approvers(c));
                }
            }
            u.difference_with(&taken);
            let r = if u.is_clear() {
                Rational::from_integer(i64::MAX)
            } else {
                Rational::new(mask.count_ones() as i64, u.count_ones(..) as i64)
            };
            let better = match &best {
                None => true,
                Some((b, bm, _)) => r > *b || (r == *b && mask.count_ones() > bm.count_ones()),
            };
            if better {
                best = Some((r, mask, u));
            }
        }
        let (r, mask, voters) = best.expect("members is non-empty");
        let value = BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
        for v in voters.ones() {
            loads[v] = value.clone();
        }
        taken.union_with(&voters);
        members = members
            .iter()
            .enumerate()
            .filter(|&(j, _)| mask >> j & 1 == 0)
            .map(|(_, &c)| c)
            .collect();
    }
    loads
}

fn max_phragmen(e: &Election, mode: Mode) -> Result<RuleOutcome> {
    guard(e)?;
    // None (an unsupported member) ranks after every finite load.
    let key = |l: Option<Rational>| (l.is_none(), l.unwrap_or_else(|| Rational::from_integer(0)));
    let mut best: Option<(bool, Rational)> = None;
    let mut winners: Vec<Vec<usize>> = Vec::new();
    for_each_committee(e.m(), e.k(), &mut |w| {
        let k = key(min_max_load(e, w));
        if best.is_none_or(|b| k < b) {
            best = Some(k);
            winners.clear();
        }
        if Some(k) == best && (mode == Mode::AllTied || winners.is_empty()) {
            winners.push(w.to_vec());
        }
    });
    let loads: Vec<Vec<BigRational>> = winners.iter().map(|w| leximin_loads(e, w)).collect();
    let scores = loads
        .iter()
        .map(|l| l.iter().max().cloned().unwrap_or_else(BigRational::zero))
        .collect();
    Ok(RuleOutcome {
        rule: RuleId::MaxPhragmen,
        committees: winners
            .into_iter()
            .map(|w| Committee::new(e, w))
            .collect::<Result<_>>()?,
        scores,
        loads,
        completion_seats: 0,
    })
}

/// Whether a rule's output provides IR / semi-strong JR, next to whether
/// such committees exist. `None` marks an existence question left open by
/// the solver's node cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConsistencyProbe {
    pub rule_found_ir: bool,
    pub ir_exists: Option<bool>,
    pub rule_found_ssjr: bool,
    pub ssjr_exists: Option<bool>,
}

/// Runs `rule` (single winner) and compares it with exact existence.
pub fn ir_consistency_probe(
    e: &Election,
    rule: RuleId,
    demands: Option<&[usize]>,
) -> Result<ConsistencyProbe> {
    let owned;
    let f = match demands {
        Some(f) => f,
        None => {
            owned = exact_f_values(e)?;
            &owned[..]
        }
    };
    let outcome = run_rule(e, rule, Mode::Single)?;
    let provides = |w: &Committee, need: &dyn Fn(usize) -> usize| {
        (0..e.n()).all(|v| w.satisfaction(e, v) >= need(f[v]))
    };
    let rule_found_ir = outcome.committees.iter().any(|w| provides(w, &|x| x));
    let rule_found_ssjr = outcome.committees.iter().any(|w| provides(w, &|x| x.min(1)));
    let exists = |found: bool, status: SolveStatus| match (found, status) {
        (true, _) | (_, SolveStatus::Found) => Some(true),
        (_, SolveStatus::Infeasible) => Some(false),
        (_, SolveStatus::Undecided) => None,
    };
    let ir_exists = if rule_found_ir {
        Some(true)
    } else {
        exists(false, solver::find_ir(e, f)?.status)
    };
    let ssjr_exists = if rule_found_ssjr || ir_exists == Some(true) {
        Some(true)
    } else {
        exists(false, solver::find_ssjr(e, f)?.status)
    };
    Ok(ConsistencyProbe {
        rule_found_ir,
        ir_exists,
        rule_found_ssjr,
        ssjr_exists,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn members(o: &RuleOutcome) -> Vec<Vec<usize>> {
        o.committees.iter().map(|w| w.members().to_vec()).collect()
    }

    #[test]
    fn bridge_rules_pick_the_long_interval() {
        let e = fixtures::interval_bridge();
        for rule in [
            RuleId::Av,
            RuleId::Sav,
            RuleId::SeqPav,
            RuleId::SeqPhragmen,
            RuleId::RuleX,
            RuleId::RevSeqPav,
        ] {
            let o = run_rule(&e, rule, Mode::Single).unwrap();
            assert!(o.committees[0].contains(2), "{rule}");
        }
        let o = run_rule(&e, RuleId::PavExact, Mode::AllTied).unwrap();
        assert_eq!(members(&o), vec![vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn coverage_rules_skip_the_ir_committee() {
        let e = fixtures::coverage_counterexample();
        let w = Rational::new(1, e.n() as i64);
        for rule in [RuleId::CcExact, RuleId::MonroeExact, RuleId::PavGeometric(w)] {
            let o = run_rule(&e, rule, Mode::AllTied).unwrap();
            assert_eq!(members(&o), vec![vec![0, 1, 2, 3]], "{rule}");
        }
    }

    #[test]
    fn max_phragmen_loads() {
        let e = fixtures::max_phragmen_counterexample();
        let o = run_rule(&e, RuleId::MaxPhragmen, Mode::Single).unwrap();
        assert_eq!(members(&o), vec![vec![0, 3, 4]]);
        let three_fifths = BigRational::new(3.into(), 5.into());
        let expected: Vec<BigRational> = [1, 0, 1, 1, 1, 1]
            .iter()
            .map(|&x| if x == 1 { three_fifths.clone() } else { BigRational::zero() })
            .collect();
        assert_eq!(o.loads[0], expected);
        let all = run_rule(&e, RuleId::MaxPhragmen, Mode::AllTied).unwrap();
        // c1 and c2 are interchangeable for the load bound
        assert_eq!(all.committees.len(), 6);
        assert!(all.scores.iter().all(|s| *s == three_fifths));
    }

    #[test]
    fn minimax_ignores_majority() {
        let e = fixtures::minimax_counterexample();
        let o = run_rule(&e, RuleId::MinimaxAv, Mode::AllTied).unwrap();
        assert!(o.committees.iter().all(|w| !w.contains(0) && !w.contains(1)));
    }

    #[test]
    fn unanimous_profile() {
        let e = Election::new(5, 2, vec![vec![1, 3]; 4]).unwrap();
        for rule in RuleId::ALL_FIXED {
            let o = run_rule(&e, rule, Mode::Single).unwrap();
            if matches!(rule, RuleId::CcExact | RuleId::SeqCc) {
                // one member already covers everybody
                assert!(o.committees[0].contains(1), "{rule}");
            } else {
                assert_eq!(members(&o), vec![vec![1, 3]], "{rule}");
            }
        }
        let o = run_rule(&e, RuleId::CcExact, Mode::AllTied).unwrap();
        assert!(members(&o).contains(&vec![1, 3]));
    }

    #[test]
    fn rule_x_spends_within_budget() {
        let e = fixtures::core_conflict();
        let o = run_rule(&e, RuleId::RuleX, Mode::Single).unwrap();
        assert!(o.loads[0].iter().all(|s| *s >= BigRational::zero()));
        assert!(o.scores[0] <= BigRational::from_integer(BigInt::from(e.k())));
        assert_eq!(o.committees[0].len(), e.k());
    }

    #[test]
    fn sequential_rules_have_no_tied_mode() {
        let e = fixtures::interval_bridge();
        assert!(run_rule(&e, RuleId::SeqPav, Mode::AllTied).is_err());
    }

    #[test]
    fn bridge_probe() {
        let e = fixtures::interval_bridge();
        let p = ir_consistency_probe(&e, RuleId::SeqPhragmen, None).unwrap();
        assert!(!p.rule_found_ir);
        assert_eq!(p.ir_exists, Some(true));
    }

    #[test]
    fn committee_enumeration_order() {
        let mut seen = Vec::new();
        for_each_committee(4, 2, &mut |w| seen.push(w.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![0, 1]);
        assert_eq!(seen[5], vec![2, 3]);
    }

    #[test]
    fn names_round_trip() {
        for r in RuleId::ALL_FIXED {
            assert_eq!(r.to_string().parse::<RuleId>().unwrap(), r);
        }
        let g: RuleId = "pav-geometric:1/16".parse().unwrap();
        assert_eq!(g, RuleId::PavGeometric(Rational::new(1, 16)));
        assert!("pav-geometric:2".parse::<RuleId>().is_err());
    }
}
