//! Random approval profiles.
//!
//! Every generator is a pure function of its [`GenSpec`]; the seed drives a
//! ChaCha8 stream. Euclidean interval models emit voters (VI) or candidates
//! (CI) sorted by position, so the identity order is a domain witness.

use std::fmt;
use std::str::FromStr;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::domains::DomainWitness;
use crate::error::{Error, Result};
use crate::model::Election;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    /// Voters and candidates uniform on `[0, 1]`; each candidate has a
    /// radius `|N(0, 0.15)|`.
    ViEuclid,
    /// As `ViEuclid` with the radius on the voter.
    CiEuclid,
    /// One to five centers in the unit square, points `N(center, 0.2)`,
    /// radius `|N(0, 0.5)|` on the candidate unless `voter_radius`.
    Euclid2d { voter_radius: bool },
    /// Every approval independently with probability `p`.
    Ic { p: f64 },
    /// Pólya urn over whole ballots.
    Urn,
    /// Mixture of three Mallows models, approving a top prefix. `None`
    /// draws each component's dispersion uniformly from `[0, 1]`.
    Mallows { dispersion: Option<f64> },
}

impl Model {
    pub const IC_DEFAULT_P: f64 = 0.15;

    /// The six default models.
    pub const DEFAULTS: [Model; 6] = [
        Model::ViEuclid,
        Model::CiEuclid,
        Model::Euclid2d {
            voter_radius: false,
        },
        Model::Ic {
            p: Model::IC_DEFAULT_P,
        },
        Model::Urn,
        Model::Mallows { dispersion: None },
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Model::ViEuclid => "VI",
            Model::CiEuclid => "CI",
            Model::Euclid2d { .. } => "2D",
            Model::Ic { .. } => "IC",
            Model::Urn => "URN",
            Model::Mallows { .. } => "MALLOWS",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Accepts the model names case-insensitively, plus `2d-voter` for the
/// voter-radius variant, `ic:<p>` and `mallows:<dispersion>`.
impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let (name, arg) = match lower.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (lower.as_str(), None),
        };
        let prob = |x: &str| -> Result<f64> {
            x.parse::<f64>()
                .ok()
                .filter(|p| (0.0..=1.0).contains(p))
                .ok_or_else(|| Error::Precondition(format!("'{x}' is not a probability")))
        };
        let model = match (name, arg) {
            ("vi" | "vi_euclid" | "vi-euclid", None) => Model::ViEuclid,
            ("ci" | "ci_euclid" | "ci-euclid", None) => Model::CiEuclid,
            ("2d" | "euclid_2d" | "euclid-2d", None) => Model::Euclid2d {
                voter_radius: false,
            },
            ("2d-voter", None) => Model::Euclid2d { voter_radius: true },
            ("ic", None) => Model::Ic {
                p: Model::IC_DEFAULT_P,
            },
            ("ic", Some(p)) => Model::Ic { p: prob(p)? },
            ("urn", None) => Model::Urn,
            ("mallows", None) => Model::Mallows { dispersion: None },
            ("mallows", Some(d)) => Model::Mallows {
                dispersion: Some(prob(d)?),
            },
            _ => return Err(Error::Precondition(format!("unknown model '{s}'"))),
        };
        Ok(model)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub model: Model,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(model: Model, n: usize, m: usize, seed: u64) -> Self {
        GenSpec { model, n, m, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::Precondition("n and m must be positive".into()));
        }
        let bad = match self.model {
            Model::Ic { p } => !(0.0..=1.0).contains(&p),
            Model::Mallows { dispersion: Some(d) } => !(0.0..=1.0).contains(&d),
            _ => false,
        };
        if bad {
            return Err(Error::Precondition("probability outside [0, 1]".into()));
        }
        Ok(())
    }
}

/// A generated profile; the witness is present for the interval models.
#[derive(Debug, Clone)]
pub struct Generated {
    pub election: Election,
    pub witness: Option<DomainWitness>,
}

pub fn generate(spec: &GenSpec, k: usize) -> Result<Election> {
    Ok(generate_with_witness(spec, k)?.election)
}

pub fn generate_with_witness(spec: &GenSpec, k: usize) -> Result<Generated> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (n, m) = (spec.n, spec.m);
    let identity = |len: usize| (0..len).collect::<Vec<_>>();
    let (ballots, witness) = match spec.model {
        Model::ViEuclid => (
            line_profile(&mut rng, n, m, false),
            Some(DomainWitness::Vi { order: identity(n) }),
        ),
        Model::CiEuclid => (
            line_profile(&mut rng, n, m, true),
            Some(DomainWitness::Ci { order: identity(m) }),
        ),
        Model::Euclid2d { voter_radius } => (plane_profile(&mut rng, n, m, voter_radius), None),
        Model::Ic { p } => (
            (0..n)
                .map(|_| (0..m).filter(|_| rng.random_bool(p)).collect())
                .collect(),
            None,
        ),
        Model::Urn => (urn_profile(&mut rng, n, m), None),
        Model::Mallows { dispersion } => (mallows_profile(&mut rng, n, m, dispersion), None),
    };
    Ok(Generated {
        election: Election::new(m, k, ballots)?,
        witness,
    })
}

/// `⌊m/4⌋`, at least 1.
fn quarter(m: usize) -> usize {
    (m / 4).max(1)
}

fn abs_normal(rng: &mut ChaCha8Rng, sd: f64) -> f64 {
    Normal::new(0.0, sd).expect("positive sd").sample(rng).abs()
}

fn sorted_uniform(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..len).map(|_| rng.random::<f64>()).collect();
    xs.sort_by(f64::total_cmp);
    xs
}

fn line_profile(rng: &mut ChaCha8Rng, n: usize, m: usize, voter_radius: bool) -> Vec<Vec<usize>> {
    let voters = sorted_uniform(rng, n);
    let cands = sorted_uniform(rng, m);
    let owners = if voter_radius { n } else { m };
    let radius: Vec<f64> = (0..owners).map(|_| abs_normal(rng, 0.15)).collect();
    (0..n)
        .map(|v| {
            (0..m)
                .filter(|&c| {
                    let r = if voter_radius { radius[v] } else { radius[c] };
                    (voters[v] - cands[c]).abs() <= r
                })
                .collect()
        })
        .collect()
}

fn plane_profile(rng: &mut ChaCha8Rng, n: usize, m: usize, voter_radius: bool) -> Vec<Vec<usize>> {
    let centers: Vec<(f64, f64)> = (0..rng.random_range(1..=5))
        .map(|_| (rng.random(), rng.random()))
        .collect();
    let point = |rng: &mut ChaCha8Rng| {
        let &(cx, cy) = centers.choose(rng).expect("at least one center");
        let jitter = Normal::new(0.0, 0.2).expect("positive sd");
        (cx + jitter.sample(rng), cy + jitter.sample(rng))
    };
    let voters: Vec<(f64, f64)> = (0..n).map(|_| point(rng)).collect();
    let cands: Vec<(f64, f64)> = (0..m).map(|_| point(rng)).collect();
    let owners = if voter_radius { n } else { m };
    let radius: Vec<f64> = (0..owners).map(|_| abs_normal(rng, 0.5)).collect();
    (0..n)
        .map(|v| {
            (0..m)
                .filter(|&c| {
                    let r = if voter_radius { radius[v] } else { radius[c] };
                    let (dx, dy) = (voters[v].0 - cands[c].0, voters[v].1 - cands[c].1);
                    dx.hypot(dy) <= r
                })
                .collect()
        })
        .collect()
}

/// Ballot size `s` and replacement `r` are drawn once, uniformly from
/// `1..=⌊m/4⌋`. Voter `j` (0-based) draws a fresh uniform `s`-set with
/// probability `1 / (1 + r·j)` and otherwise copies a uniformly chosen
/// earlier voter.
fn urn_profile(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<Vec<usize>> {
    let size = rng.random_range(1..=quarter(m)).min(m);
    let replace = rng.random_range(1..=quarter(m)) as f64;
    let mut ballots: Vec<Vec<usize>> = Vec::with_capacity(n);
    for j in 0..n {
        let fresh = rng.random::<f64>() * (1.0 + replace * j as f64) < 1.0;
        let ballot = if fresh {
            let mut b = rand::seq::index::sample(rng, m, size).into_vec();
            b.sort_unstable();
            b
        } else {
            ballots.choose(rng).expect("j > 0 here").clone()
        };
        ballots.push(ballot);
    }
    ballots
}

/// A ranking drawn by repeated insertion: `center[i]` goes to position `j`
/// of the partial ranking with probability proportional to `φ^(i - j)`.
pub fn sample_mallows_ranking<R: Rng + ?Sized>(rng: &mut R, center: &[usize], phi: f64) -> Vec<usize> {
    let mut ranking: Vec<usize> = Vec::with_capacity(center.len());
    for (i, &item) in center.iter().enumerate() {
        let weights: Vec<f64> = (0..=i).map(|j| phi.powi((i - j) as i32)).collect();
        let total: f64 = weights.iter().sum();
        let mut x = rng.random::<f64>() * total;
        let mut pos = i;
        for (j, w) in weights.iter().enumerate() {
            if x < *w {
                pos = j;
                break;
            }
            x -= w;
        }
        ranking.insert(pos, item);
    }
    ranking
}

/// Three components with uniform random centers and mixture weights; the
/// prefix length is drawn once from `1..=⌊m/4⌋`.
fn mallows_profile(rng: &mut ChaCha8Rng, n: usize, m: usize, dispersion: Option<f64>) -> Vec<Vec<usize>> {
    let components: Vec<(Vec<usize>, f64, f64)> = (0..3)
        .map(|_| {
            let mut center: Vec<usize> = (0..m).collect();
            center.shuffle(rng);
            let phi = dispersion.unwrap_or_else(|| rng.random());
            (center, phi, rng.random::<f64>())
        })
        .collect();
    let prefix = rng.random_range(1..=quarter(m)).min(m);
    let total: f64 = components.iter().map(|c| c.2).sum();
    (0..n)
        .map(|_| {
            let mut x = rng.random::<f64>() * total;
            let mut pick = &components[2];
            for comp in &components {
                if x < comp.2 {
                    pick = comp;
                    break;
                }
                x -= comp.2;
            }
            let mut ballot = sample_mallows_ranking(rng, &pick.0, pick.1)[..prefix].to_vec();
            ballot.sort_unstable();
            ballot
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{recognize, verify_witness, DomainId};

    #[test]
    fn ic_extremes() {
        let none = generate(&GenSpec::new(Model::Ic { p: 0.0 }, 10, 6, 1), 2).unwrap();
        assert!((0..10).all(|v| none.approval(v).is_empty()));
        let all = generate(&GenSpec::new(Model::Ic { p: 1.0 }, 10, 6, 1), 2).unwrap();
        assert!((0..10).all(|v| all.approval(v).len() == 6));
    }

    #[test]
    fn seed_determinism() {
        for model in Model::DEFAULTS {
            let spec = GenSpec::new(model, 20, 10, 99);
            let a = generate(&spec, 3).unwrap();
            let b = generate(&spec, 3).unwrap();
            assert_eq!(a.approvals(), b.approvals(), "{model}");
        }
    }

    #[test]
    fn interval_models_carry_witnesses() {
        for seed in 0..50 {
            let g = generate_with_witness(&GenSpec::new(Model::ViEuclid, 30, 12, seed), 4).unwrap();
            assert!(verify_witness(&g.election, g.witness.as_ref().unwrap()).is_ok());
            assert!(recognize(&g.election, DomainId::Vi).unwrap().is_some());
            let g = generate_with_witness(&GenSpec::new(Model::CiEuclid, 30, 12, seed), 4).unwrap();
            assert!(verify_witness(&g.election, g.witness.as_ref().unwrap()).is_ok());
            assert!(recognize(&g.election, DomainId::Ci).unwrap().is_some());
        }
    }

    #[test]
    fn urn_and_mallows_ballot_sizes() {
        for seed in 0..20 {
            for model in [Model::Urn, Model::Mallows { dispersion: None }] {
                let e = generate(&GenSpec::new(model, 25, 16, seed), 3).unwrap();
                let size = e.approval(0).len();
                assert!((1..=4).contains(&size));
                assert!((0..25).all(|v| e.approval(v).len() == size));
            }
        }
    }

    #[test]
    fn zero_dispersion_copies_the_center() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let center = vec![3, 1, 4, 0, 2];
        assert_eq!(sample_mallows_ranking(&mut rng, &center, 0.0), center);
    }

    #[test]
    fn model_names() {
        for model in Model::DEFAULTS {
            let parsed: Model = model.name().parse().unwrap();
            assert_eq!(parsed.name(), model.name());
        }
        assert_eq!("ic:0.3".parse::<Model>().unwrap(), Model::Ic { p: 0.3 });
        assert!("ic:1.5".parse::<Model>().is_err());
    }
}
