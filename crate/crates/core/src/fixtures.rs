//! Small hand-built elections with known representation behaviour.
//!
//! Candidate and voter numbering in the doc comments is 1-based (`c1`,
//! voter 1); the returned elections are 0-based as everywhere else.

use crate::model::Election;

fn build(m: usize, k: usize, ballots: &[&[usize]]) -> Election {
    let approvals = ballots
        .iter()
        .map(|b| b.iter().map(|c| c - 1).collect())
        .collect();
    Election::new(m, k, approvals).expect("fixture is a valid election")
}

fn repeat(ballot: &'static [usize], times: usize) -> impl Iterator<Item = &'static [usize]> {
    std::iter::repeat_n(ballot, times)
}

/// Eight voters, three candidates, `k = 2`: `c1` spans voters 1-4, `c2`
/// voters 5-8 and `c3` voters 2-7. Every voter deserves one seat and
/// `{c1, c2}` is the only committee giving each of them one.
pub fn interval_bridge() -> Election {
    build(
        3,
        2,
        &[&[1], &[1, 3], &[1, 3], &[1, 3], &[2, 3], &[2, 3], &[2, 3], &[2]],
    )
}

/// Twelve voters, ten candidates, `k = 6`. Voters 1-4 deserve one seat,
/// voters 5-12 two; `{c1, c2, c3, c4, c9, c10}` is the only committee
/// meeting all demands and it is not core stable.
pub fn core_conflict() -> Election {
    build(
        10,
        6,
        &[
            &[1],
            &[2],
            &[3],
            &[4],
            &[1, 2, 3, 5, 6, 7, 8],
            &[1, 2, 4, 5, 6, 7, 8],
            &[1, 3, 4, 5, 6, 7, 8],
            &[2, 3, 4, 5, 6, 7, 8],
            &[5, 6, 7, 9, 10],
            &[5, 6, 8, 9, 10],
            &[5, 7, 8, 9, 10],
            &[6, 7, 8, 9, 10],
        ],
    )
}

/// `n = 8`, `k = 4`: four voters approve `{c1, c2}`, voter 5 approves
/// `{c3, c4, c5}` and voters 6-8 approve `c3`, `c4`, `c5` alone. Every
/// committee covering voters 6-8 starves the 2-cohesive group 1-4.
pub fn ssjr_ejr_conflict() -> Election {
    let ballots: Vec<&[usize]> = repeat(&[1, 2], 4)
        .chain([&[3usize, 4, 5][..], &[3], &[4], &[5]])
        .collect();
    build(5, 4, &ballots)
}

/// `n = k(k + 1)` voters. The first `k + 1` voters approve pairwise disjoint
/// blocks of `k - 1` candidates; everyone else approves every candidate.
/// No committee achieves `(α, β)`-IR for any `β < k - 1`. Requires `k >= 2`.
pub fn disjoint_blocks_lower_bound(k: usize) -> Election {
    assert!(k >= 2, "the construction needs k >= 2");
    let n = k * (k + 1);
    let block = k - 1;
    let m = block * (k + 1);
    let approvals = (0..n)
        .map(|i| {
            if i <= k {
                (block * i..block * (i + 1)).collect()
            } else {
                (0..m).collect()
            }
        })
        .collect();
    Election::new(m, k, approvals).expect("valid construction")
}

/// Voters 2..n-1 approve all `2(k - 1)` candidates, voter 1 approves the
/// first `k - 1` and voter `n` the last `k - 1`. A voter-interval profile in
/// which no committee is `(α, 0)`-IR for `α < 2 - 2/k`. Requires `k > 2` and
/// `n >= 4`.
pub fn two_ends_lower_bound(k: usize, n: usize) -> Election {
    assert!(k > 2 && n >= 4, "the construction needs k > 2 and n >= 4");
    let m = 2 * (k - 1);
    let approvals = (0..n)
        .map(|i| {
            if i == 0 {
                (0..k - 1).collect()
            } else if i == n - 1 {
                (k - 1..m).collect()
            } else {
                (0..m).collect()
            }
        })
        .collect();
    Election::new(m, k, approvals).expect("valid construction")
}

/// One-dimensional Euclidean profile with uniform radius (`n = 6`, `k = 3`)
/// that admits no semi-strong JR committee.
pub fn euclidean_without_ssjr() -> Election {
    build(4, 3, &[&[1], &[1, 2], &[2], &[3], &[3, 4], &[4]])
}

/// `n = 6`, `k = 3`: `{c4, c5, c6}` gives everybody a representative (and is
/// IR) but no perfect representation; `{c1, c2, c3}` does both.
pub fn ssjr_without_perfect_representation() -> Election {
    build(
        6,
        3,
        &[&[1, 4], &[1, 4], &[2, 4, 6], &[2, 5], &[3, 5], &[3, 5]],
    )
}

/// `n = 8`, `k = 4`: `{c1, .., c4}` is a perfect representation, yet no IR
/// committee exists.
pub fn perfect_representation_without_ir() -> Election {
    build(
        6,
        4,
        &[
            &[1],
            &[2],
            &[3],
            &[4],
            &[1, 5, 6],
            &[2, 5, 6],
            &[3, 5, 6],
            &[4, 5, 6],
        ],
    )
}

/// 16 voters, `k = 4`. The unique IR committee is `{c1, c2, c3, c5}`;
/// coverage-maximizing rules (CC, Monroe, PAV with weights `1, 1/n, ...`)
/// prefer `{c1, c2, c3, c4}`.
pub fn coverage_counterexample() -> Election {
    let ballots: Vec<&[usize]> = repeat(&[1], 3)
        .chain([&[1usize, 5][..]])
        .chain(repeat(&[2], 3))
        .chain([&[2usize, 5][..]])
        .chain(repeat(&[3], 3))
        .chain([&[3usize, 5][..]])
        .chain(repeat(&[4], 3))
        .chain([&[5usize][..]])
        .collect();
    build(5, 4, &ballots)
}

/// Six voters, `k = 3`. IR committees are `{c1, c2, c5}` and `{c1, c2, c6}`;
/// load balancing prefers `{c1, c4, c5}`.
pub fn max_phragmen_counterexample() -> Election {
    build(
        6,
        3,
        &[&[1], &[2], &[1, 2, 3, 4, 5], &[3, 4, 5, 6], &[4, 5, 6], &[5, 6]],
    )
}

/// 99 voters approve `{c1, c2}` and one voter approves `{c3, .., c8}`;
/// `k = 2`. Minimizing the worst Hamming distance ignores the majority.
pub fn minimax_counterexample() -> Election {
    let ballots: Vec<&[usize]> = repeat(&[1, 2], 99)
        .chain([&[3usize, 4, 5, 6, 7, 8][..]])
        .collect();
    build(8, 2, &ballots)
}
