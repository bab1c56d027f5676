//! Batch runs: how often generated profiles admit IR / semi-strong JR
//! committees, and how often rules find one.
//!
//! CSV columns, one row per instance:
//!
//! ```text
//! model,k,seed,ir_exists,ssjr_exists,<rule>_ir,<rule>_ssjr,...,undecided,ms
//! ```
//!
//! Booleans are `1`/`0`; an existence question left open by the node cap
//! is `NA` and sets `undecided` to `1`. `ms` is wall time per instance in
//! milliseconds when timing is enabled and `0` otherwise.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use anyhow::{ensure, Context, Result};
use irlab::cohesion::{f_vector, Method};
use irlab::gen::{generate, GenSpec, Model};
use irlab::rules::{run_rule, Mode, RuleId};
use irlab::solver::{find_committee, Objective, SolveRequest, SolveStatus};
use irlab::{Committee, Election, Error};
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub models: Vec<Model>,
    pub n: usize,
    pub m: usize,
    pub k_min: usize,
    pub k_max: usize,
    pub instances: usize,
    pub rules: Vec<RuleId>,
    pub seed: u64,
    pub jobs: usize,
    /// Node cap for each demand computation and each solver call.
    pub node_cap: u64,
    pub timing: bool,
}

impl ExperimentSpec {
    pub const DEFAULT_RULES: [RuleId; 7] = [
        RuleId::Av,
        RuleId::PavExact,
        RuleId::SeqPav,
        RuleId::GreedyMonroe,
        RuleId::RuleX,
        RuleId::SeqPhragmen,
        RuleId::SeqCc,
    ];

    pub fn validate(&self) -> Result<()> {
        ensure!(!self.models.is_empty(), "no models given");
        ensure!(self.n >= 1 && self.m >= 1, "n and m must be positive");
        ensure!(
            1 <= self.k_min && self.k_min <= self.k_max && self.k_max <= self.m,
            "k range {}..={} must lie within 1..={}",
            self.k_min,
            self.k_max,
            self.m
        );
        ensure!(self.instances >= 1, "need at least one instance");
        ensure!(self.node_cap >= 1, "node cap must be positive");
        Ok(())
    }
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            models: Model::DEFAULTS.to_vec(),
            n: 40,
            m: 16,
            k_min: 2,
            k_max: 12,
            instances: 300,
            rules: Self::DEFAULT_RULES.to_vec(),
            seed: 0,
            jobs: 1,
            node_cap: irlab::DEFAULT_NODE_CAP,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleHit {
    pub ir: bool,
    pub ssjr: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentRow {
    pub model: String,
    pub k: usize,
    pub seed: u64,
    pub ir_exists: Option<bool>,
    pub ssjr_exists: Option<bool>,
    /// Same order as `ExperimentSpec::rules`; `None` when demands were undecided.
    pub hits: Vec<Option<RuleHit>>,
    pub ms: u64,
}

impl ExperimentRow {
    pub fn undecided(&self) -> bool {
        self.ir_exists.is_none() || self.ssjr_exists.is_none()
    }
}

/// SplitMix64 finalizer; spreads `(seed, model, k, index)` over 64 bits.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one instance; depends only on the base seed and the model name,
/// `k` and index, so adding models or rules keeps existing instances.
pub fn instance_seed(base: u64, model: &Model, k: usize, index: usize) -> u64 {
    let name = model.name().bytes().fold(0u64, |h, b| mix(h ^ u64::from(b)));
    mix(mix(mix(base ^ name) ^ k as u64) ^ index as u64)
}

fn provides(e: &Election, w: &Committee, need: impl Fn(usize) -> usize) -> bool {
    (0..e.n()).all(|v| w.satisfaction(e, v) >= need(v))
}

fn decided(status: SolveStatus) -> Option<bool> {
    match status {
        SolveStatus::Found => Some(true),
        SolveStatus::Infeasible => Some(false),
        SolveStatus::Undecided => None,
    }
}

/// Evaluates one generated instance.
pub fn run_instance(spec: &ExperimentSpec, model: &Model, k: usize, seed: u64) -> Result<ExperimentRow> {
    let start = Instant::now();
    let e = generate(&GenSpec::new(*model, spec.n, spec.m, seed), k)?;
    let mut row = ExperimentRow {
        model: model.name().to_string(),
        k,
        seed,
        ir_exists: None,
        ssjr_exists: None,
        hits: vec![None; spec.rules.len()],
        ms: 0,
    };
    let f = match f_vector(&e, &Method::Exact { cap: spec.node_cap }) {
        Ok(certs) => certs.iter().map(|c| c.f).collect::<Vec<_>>(),
        Err(Error::SearchLimit(_)) => {
            row.ms = elapsed(spec, start);
            return Ok(row);
        }
        Err(err) => return Err(err.into()),
    };
    let mut ir_found = false;
    let mut ssjr_found = false;
    for (slot, rule) in row.hits.iter_mut().zip(&spec.rules) {
        let out = run_rule(&e, *rule, Mode::Single).with_context(|| format!("rule {rule}"))?;
        let w = &out.committees[0];
        let hit = RuleHit {
            ir: provides(&e, w, |v| f[v]),
            ssjr: provides(&e, w, |v| f[v].min(1)),
        };
        ir_found |= hit.ir;
        ssjr_found |= hit.ssjr;
        *slot = Some(hit);
    }
    let solve = |objective| {
        let req = SolveRequest::new(&e, f.clone(), objective).with_cap(spec.node_cap);
        find_committee(&req).map(|r| decided(r.status))
    };
    row.ir_exists = if ir_found { Some(true) } else { solve(Objective::FindIr)? };
    row.ssjr_exists = if ssjr_found || row.ir_exists == Some(true) {
        Some(true)
    } else {
        solve(Objective::FindSsjr)?
    };
    row.ms = elapsed(spec, start);
    Ok(row)
}

fn elapsed(spec: &ExperimentSpec, start: Instant) -> u64 {
    if spec.timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    }
}

/// Runs every instance; rows come back ordered by model (spec order), `k`
/// and instance index whatever the degree of parallelism.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ExperimentRow>> {
    spec.validate()?;
    let mut jobs = Vec::new();
    for model in &spec.models {
        for k in spec.k_min..=spec.k_max {
            for index in 0..spec.instances {
                jobs.push((model, k, instance_seed(spec.seed, model, k, index)));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs.max(1))
        .build()
        .context("building the worker pool")?;
    pool.install(|| {
        jobs.par_iter()
            .map(|&(model, k, seed)| {
                run_instance(spec, model, k, seed)
                    .with_context(|| format!("model {model}, k = {k}, seed {seed}"))
            })
            .collect()
    })
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

fn tri(b: Option<bool>) -> &'static str {
    b.map_or("NA", flag)
}

pub fn csv_header(rules: &[RuleId]) -> String {
    let mut h = String::from("model,k,seed,ir_exists,ssjr_exists");
    for r in rules {
        write!(h, ",{r}_ir,{r}_ssjr").unwrap();
    }
    h.push_str(",undecided,ms");
    h
}

pub fn csv_row(row: &ExperimentRow) -> String {
    let mut s = format!(
        "{},{},{},{},{}",
        row.model,
        row.k,
        row.seed,
        tri(row.ir_exists),
        tri(row.ssjr_exists)
    );
    for hit in &row.hits {
        let (a, b) = match hit {
            Some(h) => (flag(h.ir), flag(h.ssjr)),
            None => ("NA", "NA"),
        };
        write!(s, ",{a},{b}").unwrap();
    }
    write!(s, ",{},{}", flag(row.undecided()), row.ms).unwrap();
    s
}

pub fn to_csv(rules: &[RuleId], rows: &[ExperimentRow]) -> String {
    let mut out = csv_header(rules);
    out.push('\n');
    for row in rows {
        out.push_str(&csv_row(row));
        out.push('\n');
    }
    out
}

fn parse_tri(field: &str) -> Result<Option<bool>> {
    match field {
        "1" => Ok(Some(true)),
        "0" => Ok(Some(false)),
        "NA" => Ok(None),
        other => anyhow::bail!("bad boolean field {other:?}"),
    }
}

/// Reads back a CSV written by [`to_csv`]; returns the rule names and rows.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<ExperimentRow>)> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().context("empty CSV")?.split(',').collect();
    ensure!(header.len() >= 7 && header.len() % 2 == 1, "malformed header");
    let rules: Vec<String> = header[5..header.len() - 2]
        .chunks(2)
        .map(|pair| pair[0].trim_end_matches("_ir").to_string())
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        ensure!(f.len() == header.len(), "row {} has {} fields", i + 1, f.len());
        let hits = f[5..f.len() - 2]
            .chunks(2)
            .map(|pair| {
                Ok(match (parse_tri(pair[0])?, parse_tri(pair[1])?) {
                    (Some(ir), Some(ssjr)) => Some(RuleHit { ir, ssjr }),
                    _ => None,
                })
            })
            .collect::<Result<_>>()?;
        let row = ExperimentRow {
            model: f[0].to_string(),
            k: f[1].parse()?,
            seed: f[2].parse()?,
            ir_exists: parse_tri(f[3])?,
            ssjr_exists: parse_tri(f[4])?,
            hits,
            ms: f[f.len() - 1].parse()?,
        };
        ensure!(
            flag(row.undecided()) == f[f.len() - 2],
            "row {}: undecided flag disagrees with the existence fields",
            i + 1
        );
        rows.push(row);
    }
    Ok((rules, rows))
}

/// Fraction of decided instances with a positive answer; `None` if none
/// were decided.
fn ratio<'a>(values: impl Iterator<Item = &'a Option<bool>>) -> Option<f64> {
    let (mut yes, mut total) = (0usize, 0usize);
    for v in values.flatten() {
        total += 1;
        yes += usize::from(*v);
    }
    (total > 0).then(|| yes as f64 / total as f64)
}

/// IR and ssJR rates; `None` when no instance was decided.
pub type Rates = (Option<f64>, Option<f64>);

/// IR rate, ssJR rate and the number of undecided instances.
pub type Existence = (Option<f64>, Option<f64>, usize);

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub models: Vec<String>,
    pub rules: Vec<String>,
    pub ks: Vec<usize>,
    /// `(model, k) -> (IR rate, ssJR rate, undecided count)`.
    pub existence: BTreeMap<(String, usize), Existence>,
    /// `(model, rule, k) -> (IR hit rate, ssJR hit rate)`.
    pub per_k_hits: BTreeMap<(String, String, usize), Rates>,
    /// `(model, rule) ->` hit rates averaged over the k range.
    pub rule_hits: BTreeMap<(String, String), Rates>,
}

impl Summary {
    pub fn from_rows(rules: &[String], rows: &[ExperimentRow]) -> Summary {
        let mut models: Vec<String> = Vec::new();
        let mut ks: Vec<usize> = Vec::new();
        for r in rows {
            if !models.contains(&r.model) {
                models.push(r.model.clone());
            }
            if !ks.contains(&r.k) {
                ks.push(r.k);
            }
        }
        ks.sort_unstable();
        let mut existence = BTreeMap::new();
        let mut per_k_hits = BTreeMap::new();
        for model in &models {
            for &k in &ks {
                let group: Vec<&ExperimentRow> =
                    rows.iter().filter(|r| &r.model == model && r.k == k).collect();
                if group.is_empty() {
                    continue;
                }
                let undecided = group.iter().filter(|r| r.undecided()).count();
                existence.insert(
                    (model.clone(), k),
                    (
                        ratio(group.iter().map(|r| &r.ir_exists)),
                        ratio(group.iter().map(|r| &r.ssjr_exists)),
                        undecided,
                    ),
                );
                for (j, rule) in rules.iter().enumerate() {
                    let ir: Vec<Option<bool>> = group.iter().map(|r| r.hits[j].map(|h| h.ir)).collect();
                    let ss: Vec<Option<bool>> = group.iter().map(|r| r.hits[j].map(|h| h.ssjr)).collect();
                    per_k_hits.insert((model.clone(), rule.clone(), k), (ratio(ir.iter()), ratio(ss.iter())));
                }
            }
        }
        let mut rule_hits = BTreeMap::new();
        for model in &models {
            for rule in rules {
                let mean = |pick: fn(&Rates) -> Option<f64>| {
                    let vals: Vec<f64> = ks
                        .iter()
                        .filter_map(|&k| per_k_hits.get(&(model.clone(), rule.clone(), k)).and_then(pick))
                        .collect();
                    (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
                };
                rule_hits.insert((model.clone(), rule.clone()), (mean(|p| p.0), mean(|p| p.1)));
            }
        }
        Summary {
            models,
            rules: rules.to_vec(),
            ks,
            existence,
            per_k_hits,
            rule_hits,
        }
    }

    pub fn ir_rate(&self, model: &str, k: usize) -> Option<f64> {
        self.existence.get(&(model.to_string(), k)).and_then(|e| e.0)
    }

    pub fn ssjr_rate(&self, model: &str, k: usize) -> Option<f64> {
        self.existence.get(&(model.to_string(), k)).and_then(|e| e.1)
    }

    /// Human-readable tables.
    pub fn render(&self) -> String {
        let fmt = |x: Option<f64>| x.map_or("   NA".to_string(), |v| format!("{v:5.3}"));
        let mut out = String::from("IR / ssJR existence rate per model and k\n");
        write!(out, "{:>8}", "k").unwrap();
        for m in &self.models {
            write!(out, " {:>13}", m).unwrap();
        }
        out.push('\n');
        for &k in &self.ks {
            write!(out, "{k:>8}").unwrap();
            for m in &self.models {
                write!(out, "  {} {}", fmt(self.ir_rate(m, k)), fmt(self.ssjr_rate(m, k))).unwrap();
            }
            out.push('\n');
        }
        let undecided: usize = self.existence.values().map(|e| e.2).sum();
        writeln!(out, "undecided instances: {undecided}").unwrap();
        out.push_str("\nRule IR / ssJR hit rate, averaged over k\n");
        write!(out, "{:>14}", "rule").unwrap();
        for m in &self.models {
            write!(out, " {:>13}", m).unwrap();
        }
        out.push('\n');
        for r in &self.rules {
            write!(out, "{r:>14}").unwrap();
            for m in &self.models {
                let (ir, ss) = self.rule_hits[&(m.clone(), r.clone())];
                write!(out, "  {} {}", fmt(ir), fmt(ss)).unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Gnuplot-ready data files as `(file name, contents)`: whitespace
    /// separated columns, `#` header line, `k` first, `NA` for missing.
    pub fn plot_files(&self) -> Vec<(String, String)> {
        let cell = |x: Option<f64>| x.map_or("NA".to_string(), |v| format!("{v:.4}"));
        let mut files = Vec::new();
        for (name, pick) in [
            ("ir_exists.dat", 0usize),
            ("ssjr_exists.dat", 1usize),
        ] {
            let mut s = String::from("# k");
            for m in &self.models {
                write!(s, " {m}").unwrap();
            }
            s.push('\n');
            for &k in &self.ks {
                write!(s, "{k}").unwrap();
                for m in &self.models {
                    let rate = if pick == 0 { self.ir_rate(m, k) } else { self.ssjr_rate(m, k) };
                    write!(s, " {}", cell(rate)).unwrap();
                }
                s.push('\n');
            }
            files.push((name.to_string(), s));
        }
        for m in &self.models {
            let mut s = String::from("# k");
            for r in &self.rules {
                write!(s, " {r}_ir {r}_ssjr").unwrap();
            }
            s.push('\n');
            for &k in &self.ks {
                write!(s, "{k}").unwrap();
                for r in &self.rules {
                    let (ir, ss) = self
                        .per_k_hits
                        .get(&(m.clone(), r.clone(), k))
                        .copied()
                        .unwrap_or((None, None));
                    write!(s, " {} {}", cell(ir), cell(ss)).unwrap();
                }
                s.push('\n');
            }
            files.push((format!("rules_{}.dat", m.to_ascii_lowercase()), s));
        }
        files
    }
}
