//! Brute-force oracles and random instances shared by the integration
//! suites. Everything here recomputes from the raw approval lists and
//! avoids the library's search code.

#![allow(dead_code)]

pub mod construction_suite;
pub mod fixture_suite;
pub mod oracle_suite;
use irlab::Election;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_profile(rng: &mut ChaCha8Rng, n: usize, m: usize, k: usize) -> Election {
    let density: f64 = rng.random_range(0.1..0.7);
    let ballots = (0..n)
        .map(|_| (0..m).filter(|_| rng.random_bool(density)).collect())
        .collect();
    Election::new(m, k, ballots).unwrap()
}

/// Every candidate is approved by a random interval of a hidden voter order
/// (possibly empty); voters are then shuffled.
pub fn random_vi_profile(rng: &mut ChaCha8Rng, n: usize, m: usize, k: usize) -> Election {
    let mut ballots = vec![Vec::new(); n];
    for c in 0..m {
        if rng.random_bool(0.1) {
            continue;
        }
        let a = rng.random_range(0..n);
        let len = rng.random_range(1..=n - a);
        for b in &mut ballots[a..a + len] {
            b.push(c);
        }
    }
    ballots.shuffle(rng);
    Election::new(m, k, ballots).unwrap()
}

fn sets(list: &[Vec<usize>]) -> Vec<u64> {
    list.iter()
        .map(|b| b.iter().fold(0u64, |acc, &c| acc | 1 << c))
        .collect()
}

pub fn ballots(e: &Election) -> Vec<u64> {
    sets(e.approvals())
}

pub fn mask(members: &[usize]) -> u64 {
    members.iter().fold(0u64, |acc, &c| acc | 1 << c)
}

fn common_supporters(ballots: &[u64], s: u64) -> usize {
    ballots.iter().filter(|&&b| b & s == s).count()
}

fn large(e: &Election, group: usize, ell: usize) -> bool {
    group * e.k() >= ell * e.n()
}

/// `f_i` by trying every subset of every ballot.
pub fn naive_f(e: &Election) -> Vec<usize> {
    let b = ballots(e);
    b.iter()
        .map(|&a| {
            let mut best = 0;
            let mut s = a;
            loop {
                let size = s.count_ones() as usize;
                if size > best && large(e, common_supporters(&b, s), size) {
                    best = size;
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & a;
            }
            best
        })
        .collect()
}

/// All `k`-subsets of `0..m` as bitmasks.
pub fn all_committees(m: usize, k: usize) -> Vec<u64> {
    (0u64..1 << m).filter(|w| w.count_ones() as usize == k).collect()
}

pub fn satisfactions(b: &[u64], w: u64) -> Vec<usize> {
    b.iter().map(|&a| (a & w).count_ones() as usize).collect()
}

/// Whether some committee gives every voter at least `need[i]`.
pub fn naive_exists(e: &Election, need: &[usize]) -> bool {
    let b = ballots(e);
    all_committees(e.m(), e.k())
        .into_iter()
        .any(|w| satisfactions(&b, w).iter().zip(need).all(|(s, r)| s >= r))
}

/// Smallest integer `β` with `sat_i + β >= f_i` for some committee.
pub fn naive_min_beta(e: &Election, f: &[usize]) -> usize {
    let b = ballots(e);
    all_committees(e.m(), e.k())
        .into_iter()
        .map(|w| {
            satisfactions(&b, w)
                .iter()
                .zip(f)
                .map(|(s, f)| f.saturating_sub(*s))
                .max()
                .unwrap_or(0)
        })
        .min()
        .unwrap_or(0)
}

/// Cohesion level of every voter group, largest groups first: for a group
/// `V` the largest `ℓ` with `|∩A_i| >= ℓ` and `|V|·k >= ℓ·n`.
fn for_each_group(e: &Election, mut visit: impl FnMut(u64, usize, u64)) {
    let b = ballots(e);
    let n = e.n();
    assert!(n <= 16, "voter-group enumeration is exponential");
    for group in 1u64..1 << n {
        let mut common = u64::MAX;
        for (v, &a) in b.iter().enumerate() {
            if group >> v & 1 == 1 {
                common &= a;
            }
        }
        let size = group.count_ones() as usize;
        let ell = (common.count_ones() as usize).min(size * e.k() / n);
        visit(group, ell, common);
    }
}

pub fn naive_jr(e: &Election, w: u64) -> bool {
    let sat = satisfactions(&ballots(e), w);
    let mut ok = true;
    for_each_group(e, |group, ell, _| {
        if ell >= 1 && (0..e.n()).all(|v| group >> v & 1 == 0 || sat[v] == 0) {
            ok = false;
        }
    });
    ok
}

pub fn naive_pjr(e: &Election, w: u64) -> bool {
    let b = ballots(e);
    let mut ok = true;
    for_each_group(e, |group, ell, _| {
        let union = (0..e.n())
            .filter(|v| group >> v & 1 == 1)
            .fold(0u64, |acc, v| acc | b[v]);
        if ell >= 1 && ((union & w).count_ones() as usize) < ell {
            ok = false;
        }
    });
    ok
}

pub fn naive_ejr(e: &Election, w: u64) -> bool {
    let sat = satisfactions(&ballots(e), w);
    let mut ok = true;
    for_each_group(e, |group, ell, _| {
        if ell >= 1 && (0..e.n()).all(|v| group >> v & 1 == 0 || sat[v] < ell) {
            ok = false;
        }
    });
    ok
}

/// No `S` with `|S| <= k` whose strict supporters `P(S)` satisfy
/// `|P(S)|·k >= |S|·n`.
pub fn naive_core(e: &Election, w: u64) -> bool {
    let b = ballots(e);
    let sat = satisfactions(&b, w);
    (1u64..1 << e.m()).all(|s| {
        let size = s.count_ones() as usize;
        if size > e.k() {
            return true;
        }
        let prefer = b
            .iter()
            .zip(&sat)
            .filter(|(&a, &sv)| (a & s).count_ones() as usize > sv)
            .count();
        !large(e, prefer, size)
    })
}

pub fn permutations(len: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                go(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; len], &mut out);
    out
}

/// Positions of `set`'s members along `order`, as a sorted list.
fn positions_of(order: &[usize], set: u64) -> Vec<usize> {
    order
        .iter()
        .enumerate()
        .filter(|(_, &x)| set >> x & 1 == 1)
        .map(|(p, _)| p)
        .collect()
}

pub fn contiguous(order: &[usize], set: u64) -> bool {
    let p = positions_of(order, set);
    p.is_empty() || p[p.len() - 1] - p[0] + 1 == p.len()
}

pub fn prefix(order: &[usize], set: u64) -> bool {
    let p = positions_of(order, set);
    p.is_empty() || (p[0] == 0 && contiguous(order, set))
}

pub fn suffix(order: &[usize], set: u64) -> bool {
    let p = positions_of(order, set);
    p.is_empty() || (p[p.len() - 1] == order.len() - 1 && contiguous(order, set))
}

pub fn voter_sets(e: &Election) -> Vec<u64> {
    (0..e.m())
        .map(|c| e.approvers(c).ones().fold(0u64, |acc, v| acc | 1 << v))
        .collect()
}

pub fn brute_ci(e: &Election) -> bool {
    let b = ballots(e);
    permutations(e.m())
        .iter()
        .any(|o| b.iter().all(|&s| contiguous(o, s)))
}

pub fn brute_vi(e: &Election) -> bool {
    let s = voter_sets(e);
    permutations(e.n())
        .iter()
        .any(|o| s.iter().all(|&x| contiguous(o, x)))
}

pub fn brute_cei(e: &Election) -> bool {
    let b = ballots(e);
    permutations(e.m())
        .iter()
        .any(|o| b.iter().all(|&s| prefix(o, s) || suffix(o, s)))
}

pub fn brute_vei(e: &Election) -> bool {
    let s = voter_sets(e);
    permutations(e.n())
        .iter()
        .any(|o| s.iter().all(|&x| prefix(o, x) || suffix(o, x)))
}

pub fn brute_wsc(e: &Election) -> bool {
    let s = voter_sets(e);
    permutations(e.n()).iter().any(|o| {
        (0..e.m()).all(|c| {
            (0..e.m()).all(|d| {
                let (only_c, only_d) = (s[c] & !s[d], s[d] & !s[c]);
                (prefix(o, only_c) && suffix(o, only_d)) || (suffix(o, only_c) && prefix(o, only_d))
            })
        })
    })
}
