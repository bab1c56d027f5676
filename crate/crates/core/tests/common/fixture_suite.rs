use crate::common;

use irlab::axioms::{check, AxiomId, Violation};
use irlab::cohesion::{exact_f_values, f_vector, Method};
use irlab::fixtures;
use irlab::rules::{run_rule, Mode, RuleId};
use irlab::solver::{find_committee, find_ir, find_ssjr, Objective, SolveRequest, SolveStatus};
use irlab::{Committee, Election, Rational};

fn ir_committees(e: &Election) -> Vec<Vec<usize>> {
    let f = common::naive_f(e);
    let b = common::ballots(e);
    common::all_committees(e.m(), e.k())
        .into_iter()
        .filter(|&w| common::satisfactions(&b, w).iter().zip(&f).all(|(s, f)| s >= f))
        .map(|w| (0..e.m()).filter(|c| w >> c & 1 == 1).collect())
        .collect()
}

fn provides_ir(e: &Election, w: &Committee, f: &[usize]) -> bool {
    (0..e.n()).all(|v| w.satisfaction(e, v) >= f[v])
}

pub fn bridge_example() {
    let e = fixtures::interval_bridge();
    let f = exact_f_values(&e).unwrap();
    assert_eq!(f, vec![1; 8]);
    assert_eq!(common::naive_f(&e), f);
    assert_eq!(ir_committees(&e), vec![vec![0, 1]]);
    let found = find_ir(&e, &f).unwrap();
    assert_eq!(found.status, SolveStatus::Found);
    assert_eq!(found.committee.unwrap().members(), &[0, 1]);
    assert_eq!(e.approval_count(2), 6);
    assert_eq!(e.approval_count(0), 4);
    for rule in [
        RuleId::Av,
        RuleId::Sav,
        RuleId::SeqPav,
        RuleId::SeqPhragmen,
        RuleId::RuleX,
        RuleId::RevSeqPav,
    ] {
        let out = run_rule(&e, rule, Mode::Single).unwrap();
        assert!(out.committees.iter().all(|w| w.contains(2)), "{rule}");
        assert!(out.committees.iter().all(|w| !provides_ir(&e, w, &f)), "{rule}");
    }
    let pav = run_rule(&e, RuleId::PavExact, Mode::AllTied).unwrap();
    assert!(pav.committees.iter().all(|w| w.contains(2)));
}

pub fn core_conflict_example() {
    let e = fixtures::core_conflict();
    assert_eq!(ir_committees(&e), vec![vec![0, 1, 2, 3, 8, 9]]);
    let f = exact_f_values(&e).unwrap();
    let found = find_ir(&e, &f).unwrap();
    assert_eq!(found.committee.unwrap().members(), &[0, 1, 2, 3, 8, 9]);
    let w = Committee::new(&e, [0, 1, 2, 3, 8, 9]).unwrap();
    let verdict = check(&e, &w, &AxiomId::Core, None).unwrap();
    assert!(verdict.violated());
    let Some(Violation::Blocking { group, candidates }) = verdict.witness else {
        panic!("expected a blocking coalition");
    };
    assert_eq!(group, (4..12).collect::<Vec<_>>());
    assert_eq!(candidates, vec![4, 5, 6, 7]);
    assert!(!common::naive_core(&e, common::mask(w.members())));
}

pub fn ssjr_and_ejr_are_disjoint() {
    let e = fixtures::ssjr_ejr_conflict();
    let certs = f_vector(&e, &Method::Exact { cap: irlab::DEFAULT_NODE_CAP }).unwrap();
    let mut ssjr = 0;
    let mut ejr = 0;
    for w in common::all_committees(e.m(), e.k()) {
        let members: Vec<usize> = (0..e.m()).filter(|c| w >> c & 1 == 1).collect();
        let c = Committee::new(&e, members).unwrap();
        let s = check(&e, &c, &AxiomId::Ssjr, Some(&certs)).unwrap().satisfied();
        let x = check(&e, &c, &AxiomId::Ejr, Some(&certs)).unwrap().satisfied();
        assert_eq!(x, common::naive_ejr(&e, w));
        assert!(!(s && x), "{:?} is both", c.members());
        ssjr += usize::from(s);
        ejr += usize::from(x);
    }
    assert!(ssjr > 0 && ejr > 0);
}

pub fn disjoint_blocks_need_k_minus_one() {
    for k in [3, 4] {
        let e = fixtures::disjoint_blocks_lower_bound(k);
        let f = exact_f_values(&e).unwrap();
        assert_eq!(find_ir(&e, &f).unwrap().status, SolveStatus::Infeasible);
        let req = SolveRequest::new(&e, f.clone(), Objective::MinBeta { alpha: Rational::from_integer(1) });
        let res = find_committee(&req).unwrap();
        assert_eq!(res.status, SolveStatus::Found);
        assert_eq!(res.achieved.unwrap().1, Rational::from_integer(k as i64 - 1));
        assert_eq!(common::naive_min_beta(&e, &f), k - 1);
    }
}

pub fn two_ends_multiplicative_bound() {
    for n in [4, 6, 8] {
        let e = fixtures::two_ends_lower_bound(4, n);
        let f = exact_f_values(&e).unwrap();
        assert_eq!((f[0], f[n - 1]), (3, 3));
        let req = SolveRequest::new(&e, f, Objective::MinAlpha { beta: Rational::from_integer(0) });
        let res = find_committee(&req).unwrap();
        assert_eq!(res.status, SolveStatus::Found);
        let alpha = res.achieved.unwrap().0;
        assert_eq!(alpha, Rational::new(3, 2));
        assert!(alpha >= Rational::from_integer(2) - Rational::new(2, 4));
    }
}

pub fn euclidean_profile_has_no_ssjr() {
    let e = fixtures::euclidean_without_ssjr();
    let f = exact_f_values(&e).unwrap();
    assert_eq!(find_ssjr(&e, &f).unwrap().status, SolveStatus::Infeasible);
    let need: Vec<usize> = f.iter().map(|&x| x.min(1)).collect();
    assert!(!common::naive_exists(&e, &need));
}

pub fn perfect_representation_and_ir_are_independent() {
    let e = fixtures::ssjr_without_perfect_representation();
    let w = Committee::new(&e, [3, 4, 5]).unwrap();
    assert!(check(&e, &w, &AxiomId::Ssjr, None).unwrap().satisfied());
    assert!(check(&e, &w, &AxiomId::PerfectRep, None).unwrap().violated());

    let e = fixtures::perfect_representation_without_ir();
    let w = Committee::new(&e, [0, 1, 2, 3]).unwrap();
    assert!(check(&e, &w, &AxiomId::PerfectRep, None).unwrap().satisfied());
    let f = exact_f_values(&e).unwrap();
    assert_eq!(find_ir(&e, &f).unwrap().status, SolveStatus::Infeasible);
}

pub fn coverage_rules_miss_the_ir_committee() {
    let e = fixtures::coverage_counterexample();
    assert_eq!(ir_committees(&e), vec![vec![0, 1, 2, 4]]);
    let f = exact_f_values(&e).unwrap();
    let geometric = RuleId::pav_geometric(Rational::new(1, e.n() as i64)).unwrap();
    for rule in [RuleId::CcExact, RuleId::MonroeExact, geometric] {
        let out = run_rule(&e, rule, Mode::AllTied).unwrap();
        let members: Vec<&[usize]> = out.committees.iter().map(|w| w.members()).collect();
        assert_eq!(members, vec![&[0, 1, 2, 3][..]], "{rule}");
        assert!(out.committees.iter().all(|w| !provides_ir(&e, w, &f)), "{rule}");
    }
}

pub fn max_phragmen_balances_away_from_ir() {
    let e = fixtures::max_phragmen_counterexample();
    assert_eq!(ir_committees(&e), vec![vec![0, 1, 4], vec![0, 1, 5]]);
    let out = run_rule(&e, RuleId::MaxPhragmen, Mode::Single).unwrap();
    assert_eq!(out.committees[0].members(), &[0, 3, 4]);
    let expected: Vec<String> = ["3/5", "0", "3/5", "3/5", "3/5", "3/5"].map(String::from).to_vec();
    let got: Vec<String> = out.loads[0].iter().map(|x| x.to_string()).collect();
    assert_eq!(got, expected);
    let f = exact_f_values(&e).unwrap();
    let tied = run_rule(&e, RuleId::MaxPhragmen, Mode::AllTied).unwrap();
    assert!(tied.committees.iter().all(|w| !provides_ir(&e, w, &f)));
}

pub fn minimax_skips_the_majority() {
    let e = fixtures::minimax_counterexample();
    let f = exact_f_values(&e).unwrap();
    assert!(f[..99].iter().all(|&x| x == 1));
    assert_eq!(f[99], 0);
    let out = run_rule(&e, RuleId::MinimaxAv, Mode::AllTied).unwrap();
    assert_eq!(out.committees.len(), 15);
    assert!(out.committees.iter().all(|w| !w.contains(0) && !w.contains(1)));
    assert!(out.committees.iter().all(|w| !provides_ir(&e, w, &f)));
}
