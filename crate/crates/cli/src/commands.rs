//! Subcommands of the `irlab` binary.
//!
//! Machine output goes to stdout (or the `--out` file), diagnostics to
//! stderr. Voters and candidates are 1-based in all output, as in `.avp`
//! files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use irlab::axioms::{check_with_cap, AxiomId, AxiomVerdict, Status, Violation};
use irlab::cohesion::{f_values, f_vector, CohesionCertificate, Method};
use irlab::domains::{construct, recognize, DomainId, DomainWitness};
use irlab::gen::{generate, GenSpec, Model};
use irlab::rules::{run_rule, Mode, RuleId};
use irlab::solver::{find_committee, Objective, SolveRequest, SolveStatus};
use irlab::{parse_profile, serialize_profile, Committee, Election, Error, Rational};
use serde_json::{json, Value};

use crate::experiment::{parse_csv, run_experiment, to_csv, ExperimentSpec, Summary};

#[derive(Debug, Parser)]
#[command(name = "irlab", version, about = "Individual representation in approval-based committee elections")]
pub struct Cli {
    /// Seed for generators and experiments.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for experiments.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Output file (experiments: output directory).
    #[arg(short, long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic profile in `.avp` format.
    Gen {
        /// vi, ci, 2d, 2d-voter, ic[:p], urn or mallows[:dispersion].
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Committee size written to the header; defaults to min(m, 10).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Per-voter demands as CSV `voter,f,witness`.
    Fvec {
        profile: PathBuf,
        #[arg(long, value_enum, default_value_t = FvecMethod::Exact)]
        method: FvecMethod,
        #[arg(long, default_value_t = irlab::DEFAULT_NODE_CAP)]
        cap: u64,
    },
    /// Check a committee against an axiom.
    Check {
        profile: PathBuf,
        /// Comma-separated 1-based candidates.
        #[arg(long, value_delimiter = ',', required = true)]
        committee: Vec<usize>,
        /// jr, pjr, ejr, fjr, core, ssjr, ir or perfect-rep.
        #[arg(long, default_value = "ir")]
        axiom: String,
        /// With --beta, checks (alpha, beta)-IR; accepts `3/2`.
        #[arg(long)]
        alpha: Option<Rational>,
        #[arg(long)]
        beta: Option<Rational>,
        #[arg(long, default_value_t = irlab::DEFAULT_NODE_CAP)]
        cap: u64,
        /// Print the verdict and witness as JSON.
        #[arg(long)]
        json: bool,
        /// Exit with status 1 unless the verdict matches.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Run a voting rule.
    Rule {
        profile: PathBuf,
        /// av, sav, pav, seq-pav, rev-seq-pav, cc, seq-cc, greedy-monroe,
        /// monroe, seq-phragmen, max-phragmen, rule-x, minimax-av or
        /// pav-geometric:p/q.
        #[arg(long)]
        rule: String,
        /// Return every tied optimal committee (optimization rules only).
        #[arg(long)]
        all_tied: bool,
        #[arg(long, default_value_t = irlab::DEFAULT_NODE_CAP)]
        cap: u64,
    },
    /// Decide existence of IR-type committees exactly.
    Solve {
        profile: PathBuf,
        #[arg(long, value_enum, default_value_t = SolveObjective::Ir)]
        objective: SolveObjective,
        /// Fixed alpha for min-beta (default 1).
        #[arg(long)]
        alpha: Option<Rational>,
        /// Fixed beta for min-alpha (default 0).
        #[arg(long)]
        beta: Option<Rational>,
        #[arg(long, default_value_t = irlab::DEFAULT_NODE_CAP)]
        cap: u64,
        /// Exit with status 1 unless the status matches.
        #[arg(long, value_enum)]
        expect: Option<ExpectSolve>,
    },
    /// Recognize structured domains and print their witnesses.
    Recognize {
        profile: PathBuf,
        /// ci, vi, cei, vei, tpart, wsc or all.
        #[arg(long, default_value = "all")]
        domain: String,
    },
    /// Build a committee with a domain's guarantee.
    Construct {
        profile: PathBuf,
        #[arg(long)]
        domain: String,
    },
    /// Batch experiment over generated profiles.
    Experiment {
        /// Comma-separated models.
        #[arg(long, value_delimiter = ',', default_value = "vi,ci,2d,ic,urn,mallows")]
        models: Vec<String>,
        #[arg(long, default_value_t = 40)]
        n: usize,
        #[arg(long, default_value_t = 16)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        k_min: usize,
        #[arg(long, default_value_t = 12)]
        k_max: usize,
        #[arg(long, default_value_t = 300)]
        instances: usize,
        /// Comma-separated rules.
        #[arg(long, value_delimiter = ',', default_value = "av,pav,seq-pav,greedy-monroe,rule-x,seq-phragmen,seq-cc")]
        rules: Vec<String>,
        #[arg(long, default_value_t = irlab::DEFAULT_NODE_CAP)]
        cap: u64,
        /// Record per-instance wall time (makes the CSV non-reproducible).
        #[arg(long)]
        timing: bool,
        /// Recompute the summary from an existing rows.csv instead.
        #[arg(long)]
        from_csv: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FvecMethod {
    Exact,
    Vi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    Satisfied,
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveObjective {
    Ir,
    Ssjr,
    MinBeta,
    MinAlpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExpectSolve {
    Found,
    Infeasible,
}

/// Result of a subcommand: text for stdout and the exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub status: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, status: 0 }
    }
}

fn load(path: &Path) -> Result<Election> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_profile(&text).with_context(|| format!("{}", path.display()))
}

fn one_based(xs: &[usize]) -> Vec<usize> {
    xs.iter().map(|x| x + 1).collect()
}

fn zero_based(xs: &[usize], m: usize) -> Result<Vec<usize>> {
    xs.iter()
        .map(|&x| {
            if x == 0 || x > m {
                bail!("candidate {x} out of range 1..={m}")
            }
            Ok(x - 1)
        })
        .collect()
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Exact demands, or `None` when the node cap is hit.
fn demands(e: &Election, cap: u64) -> Result<Option<Vec<CohesionCertificate>>> {
    match f_vector(e, &Method::Exact { cap }) {
        Ok(c) => Ok(Some(c)),
        Err(Error::SearchLimit(_)) => Ok(None),
        Err(err) => Err(err.into()),
    }
}

pub fn certificate_json(c: &CohesionCertificate) -> Value {
    json!({
        "voter": c.voter + 1,
        "f": c.f,
        "witness_set": one_based(&c.witness_set),
        "supporters": one_based(&c.witness_supporters.to_vec()),
    })
}

pub fn violation_json(v: &Violation) -> Value {
    match v {
        Violation::Underserved {
            certificate,
            satisfaction,
        } => json!({
            "kind": "underserved",
            "certificate": certificate_json(certificate),
            "satisfaction": satisfaction,
        }),
        Violation::Cohesive {
            ell,
            group,
            candidates,
        } => json!({
            "kind": "cohesive",
            "ell": ell,
            "group": one_based(group),
            "candidates": one_based(candidates),
        }),
        Violation::WeaklyCohesive {
            beta,
            group,
            candidates,
        } => json!({
            "kind": "weakly-cohesive",
            "beta": beta,
            "group": one_based(group),
            "candidates": one_based(candidates),
        }),
        Violation::Blocking { group, candidates } => json!({
            "kind": "blocking",
            "group": one_based(group),
            "candidates": one_based(candidates),
        }),
        Violation::Hall { voters, members } => json!({
            "kind": "hall",
            "voters": one_based(voters),
            "members": one_based(members),
        }),
    }
}

fn describe(v: &Violation) -> String {
    let list = |xs: &[usize]| {
        one_based(xs)
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    match v {
        Violation::Underserved {
            certificate,
            satisfaction,
        } => format!(
            "voter {} demands {} seats (witness {{{}}}) but gets {}",
            certificate.voter + 1,
            certificate.f,
            list(&certificate.witness_set),
            satisfaction
        ),
        Violation::Cohesive {
            ell,
            group,
            candidates,
        } => format!(
            "voters {{{}}} form a {ell}-cohesive group on {{{}}}",
            list(group),
            list(candidates)
        ),
        Violation::WeaklyCohesive {
            beta,
            group,
            candidates,
        } => format!(
            "voters {{{}}} each approve {beta} of {{{}}} but get fewer",
            list(group),
            list(candidates)
        ),
        Violation::Blocking { group, candidates } => format!(
            "voters {{{}}} all prefer {{{}}}",
            list(group),
            list(candidates)
        ),
        Violation::Hall { voters, members } => format!(
            "voters {{{}}} share only members {{{}}}",
            list(voters),
            list(members)
        ),
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Satisfied => "satisfied",
        Status::Violated => "violated",
        Status::Undecided => "undecided",
    }
}

pub fn verdict_json(v: &AxiomVerdict) -> Value {
    json!({
        "axiom": v.axiom.to_string(),
        "status": status_name(v.status),
        "witness": v.witness.as_ref().map(violation_json),
        "nodes": v.nodes,
    })
}

pub fn witness_json(w: &DomainWitness) -> Value {
    let flagged = |flags: &[bool]| -> Vec<usize> {
        flags
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| i + 1)
            .collect()
    };
    match w {
        DomainWitness::Ci { order } => json!({ "candidate_order": one_based(order) }),
        DomainWitness::Vi { order } => json!({ "voter_order": one_based(order) }),
        DomainWitness::Cei { order, suffix } => json!({
            "candidate_order": one_based(order),
            "suffix_voters": flagged(suffix),
        }),
        DomainWitness::Vei { order, suffix } => json!({
            "voter_order": one_based(order),
            "suffix_candidates": flagged(suffix),
        }),
        DomainWitness::TPart {
            blocks,
            voter_block,
        } => json!({
            "blocks": blocks.iter().map(|b| one_based(b)).collect::<Vec<_>>(),
            "voter_block": voter_block.iter().map(|b| b.map(|x| x + 1)).collect::<Vec<_>>(),
        }),
        DomainWitness::Wsc { order } => json!({ "voter_order": one_based(order) }),
        DomainWitness::AlphaTr { tree } => json!({
            "parent": tree.parent.iter().map(|p| p.map(|x| x + 1)).collect::<Vec<_>>(),
        }),
    }
}

fn rational(x: &Rational) -> Value {
    Value::String(x.to_string())
}

/// Runs a parsed command line. Errors are usage or input problems
/// (status 2); `--expect` mismatches come back as status 1.
pub fn execute(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Gen { model, n, m, k } => {
            let model: Model = model.parse()?;
            let k = k.unwrap_or((*m).min(10));
            let e = generate(&GenSpec::new(model, *n, *m, cli.seed), k)?;
            Ok(Output::ok(serialize_profile(&e)))
        }
        Command::Fvec {
            profile,
            method,
            cap,
        } => {
            let e = load(profile)?;
            let method = match method {
                FvecMethod::Exact => Method::Exact { cap: *cap },
                FvecMethod::Vi => match recognize(&e, DomainId::Vi)? {
                    Some(DomainWitness::Vi { order }) => Method::VoterInterval { order },
                    _ => bail!("profile is not voter-interval; use --method exact"),
                },
            };
            let certs = f_vector(&e, &method)?;
            let mut text = String::from("voter,f,witness\n");
            for c in &certs {
                let w: Vec<String> = one_based(&c.witness_set).iter().map(|x| x.to_string()).collect();
                writeln!(text, "{},{},{}", c.voter + 1, c.f, w.join(" ")).unwrap();
            }
            Ok(Output::ok(text))
        }
        Command::Check {
            profile,
            committee,
            axiom,
            alpha,
            beta,
            cap,
            json,
            expect,
        } => {
            let e = load(profile)?;
            let w = Committee::new(&e, zero_based(committee, e.m())?)?;
            let axiom = match (alpha, beta) {
                (None, None) => axiom.parse::<AxiomId>()?,
                (a, b) => {
                    if axiom != "ir" {
                        bail!("--alpha/--beta apply to --axiom ir only");
                    }
                    AxiomId::alpha_beta(
                        a.unwrap_or(Rational::from_integer(1)),
                        b.unwrap_or(Rational::from_integer(0)),
                    )?
                }
            };
            let verdict = check_with_cap(&e, &w, &axiom, None, *cap)?;
            let text = if *json {
                pretty(&verdict_json(&verdict))
            } else {
                let mut s = format!("{}: {}\n", verdict.axiom, status_name(verdict.status));
                if let Some(v) = &verdict.witness {
                    writeln!(s, "  {}", describe(v)).unwrap();
                }
                s
            };
            let status = match expect {
                Some(Expect::Satisfied) if !verdict.satisfied() => 1,
                Some(Expect::Violated) if !verdict.violated() => 1,
                _ => 0,
            };
            Ok(Output { text, status })
        }
        Command::Rule {
            profile,
            rule,
            all_tied,
            cap,
        } => {
            let e = load(profile)?;
            let rule: RuleId = rule.parse()?;
            let mode = if *all_tied { Mode::AllTied } else { Mode::Single };
            let out = run_rule(&e, rule, mode)?;
            let f = demands(&e, *cap)?.map(|c| f_values(&c));
            let provides = |w: &Committee, need: fn(usize) -> usize| {
                f.as_ref()
                    .map(|f| (0..e.n()).all(|v| w.satisfaction(&e, v) >= need(f[v])))
            };
            let committees: Vec<Value> = out
                .committees
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    json!({
                        "members": one_based(w.members()),
                        "score": out.scores[i].to_string(),
                        "loads": out.loads.get(i).map(|l| l.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                        "ir": provides(w, |x| x),
                        "ssjr": provides(w, |x| x.min(1)),
                    })
                })
                .collect();
            Ok(Output::ok(pretty(&json!({
                "rule": out.rule.to_string(),
                "committees": committees,
                "completion_seats": out.completion_seats,
            }))))
        }
        Command::Solve {
            profile,
            objective,
            alpha,
            beta,
            cap,
            expect,
        } => {
            let e = load(profile)?;
            let certs = demands(&e, *cap)?
                .ok_or_else(|| anyhow!("demand computation exceeded the node cap {cap}"))?;
            let objective = match objective {
                SolveObjective::Ir => Objective::FindIr,
                SolveObjective::Ssjr => Objective::FindSsjr,
                SolveObjective::MinBeta => Objective::MinBeta {
                    alpha: alpha.unwrap_or(Rational::from_integer(1)),
                },
                SolveObjective::MinAlpha => Objective::MinAlpha {
                    beta: beta.unwrap_or(Rational::from_integer(0)),
                },
            };
            let res = find_committee(&SolveRequest::from_certificates(&e, &certs, objective).with_cap(*cap))?;
            let status = match res.status {
                SolveStatus::Found => "found",
                SolveStatus::Infeasible => "infeasible",
                SolveStatus::Undecided => "undecided",
            };
            let text = pretty(&json!({
                "objective": objective.to_string(),
                "status": status,
                "committee": res.committee.as_ref().map(|w| one_based(w.members())),
                "alpha": res.achieved.as_ref().map(|a| rational(&a.0)),
                "beta": res.achieved.as_ref().map(|a| rational(&a.1)),
                "nodes": res.nodes,
            }));
            let status = match expect {
                Some(ExpectSolve::Found) if res.status != SolveStatus::Found => 1,
                Some(ExpectSolve::Infeasible) if res.status != SolveStatus::Infeasible => 1,
                _ => 0,
            };
            Ok(Output { text, status })
        }
        Command::Recognize { profile, domain } => {
            let e = load(profile)?;
            let domains = if domain == "all" {
                DomainId::RECOGNIZABLE.to_vec()
            } else {
                vec![domain.parse()?]
            };
            let mut map = serde_json::Map::new();
            for d in domains {
                let w = recognize(&e, d)?;
                map.insert(d.to_string(), w.as_ref().map_or(Value::Null, witness_json));
            }
            Ok(Output::ok(pretty(&Value::Object(map))))
        }
        Command::Construct { profile, domain } => {
            let e = load(profile)?;
            let d: DomainId = domain.parse()?;
            if !DomainId::RECOGNIZABLE.contains(&d) {
                bail!("domain {d} has no recognizer");
            }
            let w = recognize(&e, d)?.ok_or_else(|| anyhow!("profile is not in domain {d}"))?;
            let c = construct(&e, &w)?;
            let (alpha, beta) = c
                .guarantee
                .alpha_beta
                .map_or((Value::Null, Value::Null), |(a, b)| (rational(&a), rational(&b)));
            let trace = c.trace.as_ref().map(|t| {
                json!({
                    "forward_set": one_based(&t.forward_set),
                    "backward_set": one_based(&t.backward_set),
                    "size_bounds_hold": t.size_bounds_hold(),
                })
            });
            Ok(Output::ok(pretty(&json!({
                "domain": d.to_string(),
                "witness": witness_json(&w),
                "committee": one_based(c.committee.members()),
                "guarantee": { "alpha": alpha, "beta": beta, "ssjr": c.guarantee.ssjr },
                "trace": trace,
            }))))
        }
        Command::Experiment {
            models,
            n,
            m,
            k_min,
            k_max,
            instances,
            rules,
            cap,
            timing,
            from_csv,
        } => {
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("irlab-experiment"));
            let (rule_names, csv, rows) = match from_csv {
                Some(path) => {
                    let csv = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
                    let (names, rows) = parse_csv(&csv)?;
                    (names, csv, rows)
                }
                None => {
                    let spec = ExperimentSpec {
                        models: models.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
                        n: *n,
                        m: *m,
                        k_min: *k_min,
                        k_max: *k_max,
                        instances: *instances,
                        rules: rules.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
                        seed: cli.seed,
                        jobs: cli.jobs,
                        node_cap: *cap,
                        timing: *timing,
                    };
                    let rows = run_experiment(&spec)?;
                    let names = spec.rules.iter().map(|r| r.to_string()).collect();
                    (names, to_csv(&spec.rules, &rows), rows)
                }
            };
            let summary = Summary::from_rows(&rule_names, &rows);
            let rendered = summary.render();
            fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
            let mut files = vec![("rows.csv".to_string(), csv), ("summary.txt".to_string(), rendered.clone())];
            files.extend(summary.plot_files());
            for (name, body) in files {
                if from_csv.is_some() && name == "rows.csv" {
                    continue;
                }
                let path = dir.join(&name);
                fs::write(&path, body).with_context(|| format!("cannot write {}", path.display()))?;
            }
            eprintln!("wrote {} rows to {}", rows.len(), dir.display());
            Ok(Output::ok(rendered))
        }
    }
}

/// Whether `--out` names a file that receives stdout.
pub fn writes_to_file(cli: &Cli) -> bool {
    cli.out.is_some() && !matches!(cli.command, Command::Experiment { .. })
}
