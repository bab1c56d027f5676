//! Individual representation in approval-based committee elections.
//!
//! Every voter `i` can justifiably demand `f_i` seats: the size of the
//! largest candidate set `S ⊆ A_i` approved by at least `|S| · n / k`
//! voters. A committee provides individual representation (IR) when each
//! voter gets at least `f_i` approved members. This crate computes those
//! demands, checks IR and the classic group axioms with re-checkable
//! witnesses, runs the common ABC voting rules with exact arithmetic,
//! decides IR existence exactly, recognizes structured preference domains
//! with their constructive algorithms, and generates synthetic profiles.
//!
//! All thresholds of the form `|V| >= ℓ · n / k` are evaluated as the
//! integer comparison `|V| · k >= ℓ · n`.

pub mod axioms;
pub mod cohesion;
pub mod domains;
pub mod error;
pub mod fixtures;
mod flow;
pub mod gen;
pub mod model;
pub mod rules;
pub mod solver;

pub use error::{Error, Result};
pub use model::{parse_profile, serialize_profile, Committee, Election, VoterGroup};

/// Exact rational used for approximation parameters and rule weights.
pub type Rational = num_rational::Ratio<i64>;

/// Default cap on search nodes for every exponential search.
pub const DEFAULT_NODE_CAP: u64 = 10_000_000;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}
