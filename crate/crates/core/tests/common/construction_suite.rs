use crate::common;

use irlab::axioms::{broken_implications, check, implication_report, AxiomId};
use irlab::cohesion::{exact_f_values, f_vector, Method};
use irlab::domains::{construct, recognize, CandidateTree, DomainId, DomainWitness};
use irlab::gen::{generate_with_witness, GenSpec, Model};
use irlab::{Committee, Election, Rational, DEFAULT_NODE_CAP};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn relaxed_ir(e: &Election, w: &Committee, f: &[usize], alpha: i64, beta: i64) -> bool {
    (0..e.n()).all(|v| alpha * w.satisfaction(e, v) as i64 + beta >= f[v] as i64)
}

fn ssjr(e: &Election, w: &Committee, f: &[usize]) -> bool {
    (0..e.n()).all(|v| f[v] == 0 || w.satisfaction(e, v) >= 1)
}

pub fn two_pass_interval_construction() {
    let mut rng = common::rng(21);
    let mut nontrivial = 0;
    for round in 0..1000 {
        let n = rng.random_range(1..=40);
        let m = rng.random_range(1..=16);
        let k = rng.random_range(1..=m.min(8));
        let (e, witness) = match round % 3 {
            0 => {
                let g = generate_with_witness(&GenSpec::new(Model::ViEuclid, n, m, round), k).unwrap();
                (g.election, g.witness.unwrap())
            }
            1 => {
                let e = common::random_vi_profile(&mut rng, n, m, k);
                let w = recognize(&e, DomainId::Vi).unwrap().unwrap();
                (e, w)
            }
            _ => wide_interval_profile(&mut rng),
        };
        let f = exact_f_values(&e).unwrap();
        let out = construct(&e, &witness).unwrap();
        assert_eq!(out.committee.len(), e.k(), "round {round}");
        assert_eq!(
            out.guarantee.alpha_beta,
            Some((Rational::from_integer(2), Rational::from_integer(4)))
        );
        assert!(relaxed_ir(&e, &out.committee, &f, 2, 4), "round {round}: {:?}", e.approvals());
        let trace = out.trace.expect("interval construction records its passes");
        assert!(trace.size_bounds_hold(), "round {round}: {trace:?}");
        nontrivial += usize::from(f.iter().any(|&x| x > 4));
    }
    assert!(nontrivial > 50, "only {nontrivial} profiles had a demand above 4");
}

/// Long candidate intervals and many seats, so that demands above the
/// additive slack are common.
fn wide_interval_profile(rng: &mut ChaCha8Rng) -> (Election, DomainWitness) {
    let n = rng.random_range(8..=40);
    let m = rng.random_range(8..=16);
    let k = rng.random_range(5..=8);
    let ballots = (0..m).fold(vec![Vec::new(); n], |mut ballots, c| {
        let len = rng.random_range(n / 3..=n);
        let a = rng.random_range(0..=n - len);
        for b in &mut ballots[a..a + len] {
            b.push(c);
        }
        ballots
    });
    let e = Election::new(m, k, ballots).unwrap();
    let order = (0..n).collect();
    (e, DomainWitness::Vi { order })
}

fn random_partition_profile(rng: &mut ChaCha8Rng) -> Election {
    let m = rng.random_range(1..=12);
    let mut cands: Vec<usize> = (0..m).collect();
    cands.shuffle(rng);
    let t = rng.random_range(1..=m);
    let mut cuts: Vec<usize> = (1..m).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts[..t - 1].to_vec();
    cuts.sort_unstable();
    let mut blocks = Vec::new();
    let mut start = 0;
    for cut in cuts.into_iter().chain([m]) {
        blocks.push(cands[start..cut].to_vec());
        start = cut;
    }
    let n = rng.random_range(1..=20);
    let ballots = (0..n)
        .map(|_| {
            if rng.random_bool(0.05) {
                Vec::new()
            } else {
                blocks.choose(rng).unwrap().clone()
            }
        })
        .collect();
    Election::new(m, rng.random_range(1..=m), ballots).unwrap()
}

pub fn partition_construction_is_ir() {
    let mut rng = common::rng(22);
    for round in 0..300 {
        let e = random_partition_profile(&mut rng);
        let w = recognize(&e, DomainId::TPart).unwrap().expect("partition profile");
        let out = construct(&e, &w).unwrap();
        let f = exact_f_values(&e).unwrap();
        assert_eq!(out.committee.len(), e.k());
        assert!(relaxed_ir(&e, &out.committee, &f, 1, 0), "round {round}: {:?}", e.approvals());
    }
}

pub fn tree_construction_is_ir() {
    let mut rng = common::rng(23);
    for round in 0..300 {
        let m = rng.random_range(1..=12);
        let mut label: Vec<usize> = (0..m).collect();
        label.shuffle(&mut rng);
        // node j of the hidden tree is candidate label[j]; parents come earlier
        let mut parent = vec![None; m];
        for j in 1..m {
            let p = rng.random_range(0..=j);
            parent[label[j]] = (p < j).then(|| label[p]);
        }
        let tree = CandidateTree { parent };
        let n = rng.random_range(1..=20);
        let ballots = (0..n)
            .map(|_| {
                let mut path = Vec::new();
                if rng.random_bool(0.95) {
                    let mut c = Some(rng.random_range(0..m));
                    while let Some(x) = c {
                        path.push(x);
                        c = tree.parent[x];
                    }
                }
                path
            })
            .collect();
        let e = Election::new(m, rng.random_range(1..=m), ballots).unwrap();
        let out = construct(&e, &DomainWitness::AlphaTr { tree }).unwrap();
        let f = exact_f_values(&e).unwrap();
        assert_eq!(out.committee.len(), e.k());
        assert!(relaxed_ir(&e, &out.committee, &f, 1, 0), "round {round}: {:?}", e.approvals());
    }
}

/// Sets that are prefixes or suffixes of a hidden order, then relabelled.
fn extremal_sets(rng: &mut ChaCha8Rng, universe: usize, count: usize) -> Vec<Vec<usize>> {
    let mut label: Vec<usize> = (0..universe).collect();
    label.shuffle(rng);
    (0..count)
        .map(|_| {
            let len = rng.random_range(0..=universe);
            let range = if rng.random_bool(0.5) { 0..len } else { universe - len..universe };
            let mut s: Vec<usize> = range.map(|p| label[p]).collect();
            s.sort_unstable();
            s
        })
        .collect()
}

pub fn extremal_candidate_construction() {
    let mut rng = common::rng(24);
    for round in 0..300 {
        let m = rng.random_range(1..=12);
        let n = rng.random_range(1..=20);
        let ballots = extremal_sets(&mut rng, m, n);
        let e = Election::new(m, rng.random_range(1..=m), ballots).unwrap();
        let w = recognize(&e, DomainId::Cei).unwrap().expect("prefix/suffix ballots");
        let out = construct(&e, &w).unwrap();
        let f = exact_f_values(&e).unwrap();
        assert_eq!(out.committee.len(), e.k());
        assert!(relaxed_ir(&e, &out.committee, &f, 2, 0), "round {round}: {:?}", e.approvals());
        assert!(ssjr(&e, &out.committee, &f), "round {round}");
    }
}

pub fn extremal_voter_construction() {
    let mut rng = common::rng(25);
    for round in 0..300 {
        let m = rng.random_range(1..=12);
        let n = rng.random_range(1..=20);
        let supporters = extremal_sets(&mut rng, n, m);
        let mut ballots = vec![Vec::new(); n];
        for (c, group) in supporters.iter().enumerate() {
            for &v in group {
                ballots[v].push(c);
            }
        }
        let e = Election::new(m, rng.random_range(1..=m), ballots).unwrap();
        let w = recognize(&e, DomainId::Vei).unwrap().expect("prefix/suffix supporters");
        let out = construct(&e, &w).unwrap();
        let f = exact_f_values(&e).unwrap();
        assert_eq!(out.committee.len(), e.k());
        assert!(relaxed_ir(&e, &out.committee, &f, 2, 0), "round {round}: {:?}", e.approvals());
        assert!(ssjr(&e, &out.committee, &f), "round {round}");
    }
}

/// Voters along a line approve the left party up to some point, the right
/// party from some point on, and everybody approves the shared candidates.
fn crossing_profile(rng: &mut ChaCha8Rng) -> Election {
    let left = rng.random_range(0..=4);
    let right = rng.random_range(0..=4);
    let shared = rng.random_range(0..=2);
    let idle = rng.random_range(0..=2);
    let m = (left + right + shared + idle).max(2);
    let n = rng.random_range(1..=20);
    let a = rng.random_range(0..=n);
    let b = rng.random_range(0..=n);
    let mut label: Vec<usize> = (0..m).collect();
    label.shuffle(rng);
    let ballots: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut s = Vec::new();
            if v < a {
                s.extend(&label[..left]);
            }
            if v >= b {
                s.extend(&label[left..left + right]);
            }
            s.extend(&label[left + right..(left + right + shared).min(m)]);
            s.sort_unstable();
            s
        })
        .collect();
    let mut ballots = ballots;
    ballots.shuffle(rng);
    Election::new(m, rng.random_range(1..=m), ballots).unwrap()
}

pub fn single_crossing_construction_gives_ssjr() {
    let mut rng = common::rng(26);
    let mut tested = 0;
    let mut round = 0;
    while tested < 300 {
        round += 1;
        assert!(round < 100_000, "generator rarely meets the ballot-size condition");
        let e = if round % 2 == 0 {
            crossing_profile(&mut rng)
        } else {
            let n = rng.random_range(1..=8);
            let m = rng.random_range(2..=6);
            let k = rng.random_range(1..=m);
            common::random_profile(&mut rng, n, m, k)
        };
        if (0..e.n()).any(|v| e.approval(v).len() < 2) {
            continue;
        }
        let Some(w) = recognize(&e, DomainId::Wsc).unwrap() else {
            continue;
        };
        let out = construct(&e, &w).unwrap();
        let f = exact_f_values(&e).unwrap();
        assert_eq!(out.committee.len(), e.k());
        assert!(ssjr(&e, &out.committee, &f), "round {round}: {:?}", e.approvals());
        tested += 1;
    }
}

pub fn implication_arrows_hold() {
    let mut rng = common::rng(27);
    let mut premise_hits = std::collections::BTreeMap::new();
    for round in 0..10_000 {
        let n = rng.random_range(1..=10);
        let m = rng.random_range(1..=8);
        let k = rng.random_range(1..=m);
        let e = match round % 3 {
            0 => common::random_profile(&mut rng, n, m, k),
            1 => common::random_vi_profile(&mut rng, n, m, k),
            _ => {
                // many voters sharing few ballots makes IR and the core reachable
                let base = common::random_profile(&mut rng, 3, m, k);
                let ballots = (0..n).map(|_| base.approvals().choose(&mut rng).unwrap().clone()).collect();
                Election::new(m, k, ballots).unwrap()
            }
        };
        let mut members: Vec<usize> = (0..m).collect();
        members.shuffle(&mut rng);
        members.truncate(k);
        let w = Committee::new(&e, members).unwrap();
        let certs = f_vector(&e, &Method::Exact { cap: DEFAULT_NODE_CAP }).unwrap();
        let report = implication_report(&e, &w, Some(&certs)).unwrap();
        assert!(broken_implications(&report).is_empty(), "round {round}: {report:?}");
        for (axiom, verdict) in &report {
            if verdict.satisfied() {
                *premise_hits.entry(*axiom).or_insert(0) += 1;
            }
        }
    }
    for axiom in [AxiomId::Ir, AxiomId::Core, AxiomId::PerfectRep, AxiomId::Fjr] {
        assert!(premise_hits.get(&axiom).copied().unwrap_or(0) > 100, "{axiom}: {premise_hits:?}");
    }
    let e = irlab::fixtures::interval_bridge();
    let w = Committee::new(&e, [0, 1]).unwrap();
    assert!(check(&e, &w, &AxiomId::Ir, None).unwrap().satisfied());
}
