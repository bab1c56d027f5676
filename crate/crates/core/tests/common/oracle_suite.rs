use crate::common;

use irlab::axioms::{check, AxiomId, Status};
use irlab::cohesion::{exact_f_values, f_certificate_exact, f_certificate_vi, f_vector, Method};
use irlab::domains::{recognize, verify_witness, DomainId, DomainWitness};
use irlab::rules::{run_rule, Mode, RuleId};
use irlab::solver::{find_committee, find_ir, find_ssjr, Objective, SolveRequest, SolveStatus};
use irlab::{Committee, Rational, DEFAULT_NODE_CAP};
use rand::Rng;

pub fn interval_scan_matches_exact_search() {
    let mut rng = common::rng(11);
    for round in 0..500 {
        let n = rng.random_range(1..=24);
        let m = rng.random_range(1..=12);
        let k = rng.random_range(1..=m);
        let e = common::random_vi_profile(&mut rng, n, m, k);
        let Some(DomainWitness::Vi { order }) = recognize(&e, DomainId::Vi).unwrap() else {
            panic!("round {round}: interval profile not recognized");
        };
        for v in 0..n {
            let fast = f_certificate_vi(&e, &order, v).unwrap();
            let slow = f_certificate_exact(&e, v, DEFAULT_NODE_CAP).unwrap();
            assert_eq!(fast.f, slow.f, "round {round}, voter {v}");
            assert!(fast.verify(&e) && slow.verify(&e));
        }
    }
}

pub fn exact_demands_match_subset_enumeration() {
    let mut rng = common::rng(12);
    for _ in 0..300 {
        let n = rng.random_range(1..=14);
        let m = rng.random_range(1..=10);
        let k = rng.random_range(1..=m);
        let e = common::random_profile(&mut rng, n, m, k);
        assert_eq!(exact_f_values(&e).unwrap(), common::naive_f(&e));
    }
}

pub fn solver_matches_enumeration() {
    let mut rng = common::rng(13);
    for round in 0..200 {
        let n = rng.random_range(2..=14);
        let m = rng.random_range(2..=12);
        let k = rng.random_range(1..=m.min(7));
        let e = if round % 2 == 0 {
            common::random_profile(&mut rng, n, m, k)
        } else {
            common::random_vi_profile(&mut rng, n, m, k)
        };
        let f = common::naive_f(&e);
        let ir = find_ir(&e, &f).unwrap();
        assert_ne!(ir.status, SolveStatus::Undecided);
        assert_eq!(ir.status == SolveStatus::Found, common::naive_exists(&e, &f), "round {round}");
        if let Some(w) = &ir.committee {
            assert!((0..n).all(|v| w.satisfaction(&e, v) >= f[v]));
        }
        let need: Vec<usize> = f.iter().map(|&x| x.min(1)).collect();
        let ss = find_ssjr(&e, &f).unwrap();
        assert_eq!(ss.status == SolveStatus::Found, common::naive_exists(&e, &need), "round {round}");
        let beta = find_committee(&SolveRequest::new(
            &e,
            f.clone(),
            Objective::MinBeta { alpha: Rational::from_integer(1) },
        ))
        .unwrap();
        assert_eq!(
            beta.achieved.unwrap().1,
            Rational::from_integer(common::naive_min_beta(&e, &f) as i64),
            "round {round}"
        );
    }
}

fn recognizer_agrees(e: &irlab::Election, d: DomainId, brute: bool) {
    let found = recognize(e, d).unwrap();
    assert_eq!(found.is_some(), brute, "{d} on {:?}", e.approvals());
    if let Some(w) = found {
        assert_eq!(w.domain(), d);
        verify_witness(e, &w).unwrap();
    }
}

pub fn recognizers_match_permutation_search() {
    let mut rng = common::rng(14);
    for round in 0..300 {
        let n = rng.random_range(1..=7);
        let m = rng.random_range(1..=7);
        let k = rng.random_range(1..=m);
        let e = if round % 3 == 0 {
            common::random_vi_profile(&mut rng, n, m, k)
        } else {
            common::random_profile(&mut rng, n, m, k)
        };
        recognizer_agrees(&e, DomainId::Ci, common::brute_ci(&e));
        recognizer_agrees(&e, DomainId::Vi, common::brute_vi(&e));
        recognizer_agrees(&e, DomainId::Cei, common::brute_cei(&e));
        recognizer_agrees(&e, DomainId::Vei, common::brute_vei(&e));
        recognizer_agrees(&e, DomainId::Wsc, common::brute_wsc(&e));
    }
}

pub fn axiom_checks_match_naive_enumeration() {
    let mut rng = common::rng(15);
    let mut violations = [0usize; 4];
    for round in 0..200 {
        let n = rng.random_range(2..=12);
        let m = rng.random_range(2..=10);
        let k = rng.random_range(1..=m);
        let e = common::random_profile(&mut rng, n, m, k);
        let mut members: Vec<usize> = (0..m).collect();
        rand::seq::SliceRandom::shuffle(&mut members[..], &mut rng);
        members.truncate(k);
        let w = Committee::new(&e, members).unwrap();
        let mask = common::mask(w.members());
        let certs = f_vector(&e, &Method::Exact { cap: DEFAULT_NODE_CAP }).unwrap();
        let naive = [
            common::naive_jr(&e, mask),
            common::naive_pjr(&e, mask),
            common::naive_ejr(&e, mask),
            common::naive_core(&e, mask),
        ];
        for (i, axiom) in [AxiomId::Jr, AxiomId::Pjr, AxiomId::Ejr, AxiomId::Core].iter().enumerate() {
            let verdict = check(&e, &w, axiom, Some(&certs)).unwrap();
            assert_ne!(verdict.status, Status::Undecided);
            assert_eq!(verdict.satisfied(), naive[i], "round {round}: {axiom}");
            if let Some(witness) = &verdict.witness {
                assert!(witness.recheck(&e, &w, axiom), "round {round}: {axiom}");
                violations[i] += 1;
            }
        }
    }
    // the sample must exercise both outcomes
    assert!(violations.iter().all(|&v| v > 0 && v < 200), "{violations:?}");
}

/// Exact committee score with rational arithmetic, straight from the
/// definition of each rule.
fn naive_score(e: &irlab::Election, rule: RuleId, w: u64) -> Rational {
    let b = common::ballots(e);
    let sat = common::satisfactions(&b, w);
    let thiele = |weight: &dyn Fn(usize) -> Rational| {
        sat.iter()
            .map(|&s| (1..=s).map(weight).sum::<Rational>())
            .sum::<Rational>()
    };
    match rule {
        RuleId::Av => thiele(&|_| Rational::from_integer(1)),
        RuleId::PavExact => thiele(&|j| Rational::new(1, j as i64)),
        RuleId::CcExact => thiele(&|j| Rational::from_integer(i64::from(j == 1))),
        RuleId::PavGeometric(x) => thiele(&|j| (0..j - 1).map(|_| x).product()),
        RuleId::Sav => b
            .iter()
            .zip(&sat)
            .filter(|(a, _)| **a != 0)
            .map(|(a, &s)| Rational::new(s as i64, a.count_ones() as i64))
            .sum(),
        RuleId::MinimaxAv => {
            let worst = b
                .iter()
                .map(|a| (a ^ w).count_ones() as i64)
                .max()
                .unwrap_or(0);
            -Rational::from_integer(worst)
        }
        _ => unreachable!(),
    }
}

pub fn optimization_rules_match_brute_force() {
    let mut rng = common::rng(16);
    let rules = [
        RuleId::Av,
        RuleId::Sav,
        RuleId::PavExact,
        RuleId::CcExact,
        RuleId::MinimaxAv,
        RuleId::PavGeometric(Rational::new(1, 3)),
    ];
    for round in 0..60 {
        let n = rng.random_range(2..=12);
        let m = rng.random_range(2..=12);
        let k = rng.random_range(1..=m.min(6));
        let e = common::random_profile(&mut rng, n, m, k);
        let all = common::all_committees(m, k);
        for rule in rules {
            let best = all.iter().map(|&w| naive_score(&e, rule, w)).max().unwrap();
            let mut winners: Vec<u64> = all
                .iter()
                .copied()
                .filter(|&w| naive_score(&e, rule, w) == best)
                .collect();
            let tied = run_rule(&e, rule, Mode::AllTied).unwrap();
            let mut got: Vec<u64> = tied.committees.iter().map(|w| common::mask(w.members())).collect();
            winners.sort_unstable();
            got.sort_unstable();
            assert_eq!(got, winners, "round {round}: {rule}");
            let single = run_rule(&e, rule, Mode::Single).unwrap();
            let lex_first = tied.committees.iter().min_by_key(|w| w.members().to_vec()).unwrap();
            assert_eq!(&single.committees[0], lex_first, "round {round}: {rule}");
        }
    }
}
