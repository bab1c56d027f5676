//! Elections, committees and voter groups, plus the `.avp` text format.
//!
//! Indices are 0-based in memory. The `.avp` format uses 1-based candidate
//! indices:
//!
//! ```text
//! # comment lines start with '#'
//! n m k
//! 1 3        <- voter 1 approves c1 and c3
//!            <- voter 2 approves nothing
//! ...
//! ```

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// An approval profile together with the committee size.
#[derive(Debug, Clone)]
pub struct Election {
    m: usize,
    k: usize,
    approvals: Vec<Vec<usize>>,
    /// Per voter, the approved candidates as a bitset over `m`.
    ballots: Vec<FixedBitSet>,
    /// Per candidate, the approving voters as a bitset over `n`.
    approvers: Vec<FixedBitSet>,
}

impl PartialEq for Election {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.k == other.k && self.approvals == other.approvals
    }
}

impl Eq for Election {}

impl Election {
    /// Builds a validated election. Approval sets may be given in any order
    /// but must not repeat a candidate.
    pub fn new(m: usize, k: usize, approvals: Vec<Vec<usize>>) -> Result<Self> {
        let n = approvals.len();
        if n == 0 {
            return Err(Error::InvalidElection("at least one voter is required".into()));
        }
        if m == 0 {
            return Err(Error::InvalidElection("at least one candidate is required".into()));
        }
        if k == 0 || k > m {
            return Err(Error::InvalidElection(format!(
                "committee size k = {k} must satisfy 1 <= k <= m = {m}"
            )));
        }
        let mut sorted = Vec::with_capacity(n);
        let mut ballots = Vec::with_capacity(n);
        let mut approvers = vec![FixedBitSet::with_capacity(n); m];
        for (voter, set) in approvals.into_iter().enumerate() {
            let mut ballot = FixedBitSet::with_capacity(m);
            for &c in &set {
                if c >= m {
                    return Err(Error::CandidateOutOfRange { index: c, m });
                }
                if ballot.put(c) {
                    return Err(Error::InvalidElection(format!(
                        "voter {voter} approves candidate {c} twice"
                    )));
                }
                approvers[c].insert(voter);
            }
            sorted.push(ballot.ones().collect());
            ballots.push(ballot);
        }
        Ok(Election {
            m,
            k,
            approvals: sorted,
            ballots,
            approvers,
        })
    }

    pub fn n(&self) -> usize {
        self.approvals.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The same profile with a different committee size.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        Election::new(self.m, k, self.approvals.clone())
    }

    /// Approval set of `voter`, sorted ascending.
    pub fn approval(&self, voter: usize) -> &[usize] {
        &self.approvals[voter]
    }

    pub fn approvals(&self) -> &[Vec<usize>] {
        &self.approvals
    }

    /// Approval set of `voter` as a bitset over candidates.
    pub fn ballot(&self, voter: usize) -> &FixedBitSet {
        &self.ballots[voter]
    }

    /// Voters approving `candidate`, as a bitset over voters.
    pub fn approvers(&self, candidate: usize) -> &FixedBitSet {
        &self.approvers[candidate]
    }

    pub fn approval_count(&self, candidate: usize) -> usize {
        self.approvers[candidate].count_ones(..)
    }

    pub fn approves(&self, voter: usize, candidate: usize) -> bool {
        self.ballots[voter].contains(candidate)
    }

    /// `N(S)`: the voters approving every candidate of `s`.
    pub fn supporters(&self, s: &[usize]) -> Result<VoterGroup> {
        let mut group = FixedBitSet::with_capacity(self.n());
        group.insert_range(..);
        for &c in s {
            if c >= self.m {
                return Err(Error::CandidateOutOfRange { index: c, m: self.m });
            }
            group.intersect_with(&self.approvers[c]);
        }
        Ok(VoterGroup { members: group })
    }

    /// Voters approving every candidate set in `mask`.
    pub fn supporters_of_mask(&self, mask: &FixedBitSet) -> VoterGroup {
        let mut group = FixedBitSet::with_capacity(self.n());
        group.insert_range(..);
        for c in mask.ones() {
            group.intersect_with(&self.approvers[c]);
        }
        VoterGroup { members: group }
    }

    /// Exact test of `|group| >= ell * n / k`.
    pub fn is_large_enough(&self, group_size: usize, ell: usize) -> bool {
        group_size * self.k >= ell * self.n()
    }

    pub fn check_voter(&self, voter: usize) -> Result<()> {
        if voter >= self.n() {
            return Err(Error::VoterOutOfRange {
                index: voter,
                n: self.n(),
            });
        }
        Ok(())
    }
}

/// A set of at most `k` candidates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Committee {
    members: Vec<usize>,
    target_size: usize,
    mask: FixedBitSet,
}

impl Committee {
    pub fn new(e: &Election, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = FixedBitSet::with_capacity(e.m());
        for c in members {
            if c >= e.m() {
                return Err(Error::CandidateOutOfRange { index: c, m: e.m() });
            }
            if mask.put(c) {
                return Err(Error::InvalidCommittee(format!("candidate {c} listed twice")));
            }
        }
        Self::from_mask(e, mask)
    }

    pub fn from_mask(e: &Election, mask: FixedBitSet) -> Result<Self> {
        let members: Vec<usize> = mask.ones().collect();
        if members.len() > e.k() {
            return Err(Error::InvalidCommittee(format!(
                "{} members exceed committee size {}",
                members.len(),
                e.k()
            )));
        }
        let mut mask = mask;
        mask.grow(e.m());
        Ok(Committee {
            members,
            target_size: e.k(),
            mask,
        })
    }

    /// Sorted member indices.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn mask(&self) -> &FixedBitSet {
        &self.mask
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.target_size
    }

    pub fn contains(&self, candidate: usize) -> bool {
        self.mask.contains(candidate)
    }

    /// `|W ∩ A_voter|`.
    pub fn satisfaction(&self, e: &Election, voter: usize) -> usize {
        e.ballot(voter).intersection_count(&self.mask)
    }

    /// Satisfaction of every voter, in voter order.
    pub fn satisfaction_vector(&self, e: &Election) -> Vec<usize> {
        (0..e.n()).map(|v| self.satisfaction(e, v)).collect()
    }

    /// Adds the lowest-index non-members until the committee has `k` members.
    pub fn padded(&self, e: &Election) -> Committee {
        let mut mask = self.mask.clone();
        let mut size = self.members.len();
        for c in 0..e.m() {
            if size >= e.k() {
                break;
            }
            if !mask.put(c) {
                size += 1;
            }
        }
        Committee::from_mask(e, mask).expect("padding never exceeds k")
    }
}

/// A set of voters, e.g. `N(S)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VoterGroup {
    members: FixedBitSet,
}

impl VoterGroup {
    pub fn from_voters(n: usize, voters: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members = FixedBitSet::with_capacity(n);
        for v in voters {
            if v >= n {
                return Err(Error::VoterOutOfRange { index: v, n });
            }
            members.insert(v);
        }
        Ok(VoterGroup { members })
    }

    pub fn from_bitset(members: FixedBitSet) -> Self {
        VoterGroup { members }
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn contains(&self, voter: usize) -> bool {
        self.members.contains(voter)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    pub fn as_bitset(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn is_subset(&self, other: &VoterGroup) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// Parses the `.avp` text format. Errors carry 1-based physical line numbers.
pub fn parse_profile(text: &str) -> Result<Election> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header `n m k`".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(Error::Parse {
            line: header_line,
            message: format!("header must be `n m k`, found {header:?}"),
        });
    }
    let mut numbers = [0usize; 3];
    for (slot, field) in numbers.iter_mut().zip(&fields) {
        *slot = field.parse().map_err(|_| Error::Parse {
            line: header_line,
            message: format!("header field {field:?} is not a non-negative integer"),
        })?;
    }
    let [n, m, k] = numbers;
    if n == 0 || m == 0 {
        return Err(Error::Parse {
            line: header_line,
            message: "n and m must be positive".into(),
        });
    }
    if k == 0 || k > m {
        return Err(Error::Parse {
            line: header_line,
            message: format!("committee size k = {k} must satisfy 1 <= k <= m = {m}"),
        });
    }

    let mut approvals = Vec::with_capacity(n);
    let mut last_line = header_line;
    for (line, body) in lines.by_ref() {
        if approvals.len() == n {
            if body.trim().is_empty() {
                continue;
            }
            return Err(Error::Parse {
                line,
                message: format!("unexpected content after {n} voter lines"),
            });
        }
        last_line = line;
        let mut set = Vec::new();
        for token in body.split_whitespace() {
            let index: usize = token.parse().map_err(|_| Error::Parse {
                line,
                message: format!("{token:?} is not a candidate index"),
            })?;
            if index == 0 || index > m {
                return Err(Error::Parse {
                    line,
                    message: format!("candidate index {index} out of range 1..={m}"),
                });
            }
            if set.contains(&(index - 1)) {
                return Err(Error::Parse {
                    line,
                    message: format!("candidate index {index} repeated"),
                });
            }
            set.push(index - 1);
        }
        approvals.push(set);
    }
    if approvals.len() < n {
        return Err(Error::Parse {
            line: last_line + 1,
            message: format!("expected {n} voter lines, found {}", approvals.len()),
        });
    }
    Election::new(m, k, approvals)
}

/// Canonical `.avp` text: sorted 1-based indices, one voter per line.
pub fn serialize_profile(e: &Election) -> String {
    let mut out = format!("{} {} {}\n", e.n(), e.m(), e.k());
    for set in e.approvals() {
        let mut first = true;
        for &c in set {
            if !first {
                out.push(' ');
            }
            first = false;
            write!(out, "{}", c + 1).expect("writing to a String cannot fail");
        }
        out.push('\n');
    }
    out
}
