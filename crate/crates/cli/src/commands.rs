use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand};
use qcorr::channels::{constrained_capacity, CapacityOptions, ConstraintSpec};
use qcorr::continuity::{mixture_pair, verify_bound, BoundKind, BoundReport, BoundTarget};
use qcorr::extension::{
    faithfulness_sweep, model_state, ModelState, ProjectorGenerator, TruncationScheme,
};
use qcorr::io::{self, ChannelJson, MatrixJson, StateJson};
use qcorr::measures::MeasureRecord;
use qcorr::random::{random_channel, random_state};
use qcorr::recovery::{recovery_search, RecoveryOptions};
use qcorr::tensor::states;
use qcorr::{linalg, tolerances, State, SubsystemLayout};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::spec::MeasureSpec;

pub enum Status {
    Success,
    Violation,
}

impl Status {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Self::Success
        } else {
            Self::Violation
        }
    }
}

fn write_out(path: Option<&PathBuf>, content: &str) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, content).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn required<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T> {
    v.as_ref().with_context(|| format!("missing --{flag}"))
}

fn load_state(path: &Path) -> Result<State> {
    io::read_state(path).with_context(|| format!("reading state {}", path.display()))
}

// ---------------------------------------------------------------- measure

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureArgs {
    /// State JSON file.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// entropy, conditional-entropy, mi, cmi, secrecy, interaction, info-gap.
    #[arg(long)]
    pub measure: Option<String>,
    /// Parts separated by `;`, labels within a part by `,`, e.g. `A;C`.
    #[arg(long)]
    pub parts: Option<String>,
    /// Conditioning labels, e.g. `B`.
    #[arg(long)]
    pub cond: Option<String>,
    /// CMI formula: direct, via-ab, via-cb, four-mi, purified.
    #[arg(long)]
    pub formula: Option<String>,
    /// JSON record output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn measure_spec(
    measure: &Option<String>,
    parts: &Option<String>,
    cond: &Option<String>,
    formula: &Option<String>,
) -> Result<MeasureSpec> {
    MeasureSpec::new(
        required(measure, "measure")?,
        required(parts, "parts")?,
        cond.as_deref().unwrap_or(""),
        formula.as_deref().unwrap_or("direct"),
    )
}

pub fn measure(a: &MeasureArgs) -> Result<Status> {
    let s = load_state(required(&a.state, "state")?)?;
    let spec = measure_spec(&a.measure, &a.parts, &a.cond, &a.formula)?;
    let v = spec.evaluate(&s)?;
    let mut record = MeasureRecord::new(&spec.name, spec.parts.clone(), v.value, v.formula)
        .with_condition(spec.cond.clone());
    if let Some(ub) = spec.upper_bound(&s)? {
        record = record.with_bound("upper", ub);
    }
    write_out(a.out.as_ref(), &record.to_json()?)?;
    println!("{}", record.summary());
    Ok(Status::Success)
}

// ---------------------------------------------------------------- sweep

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepArgs {
    /// State JSON file.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Measure name, as for `measure`.
    #[arg(long)]
    pub measure: Option<String>,
    /// Parts, as for `measure`.
    #[arg(long)]
    pub parts: Option<String>,
    /// Conditioning labels.
    #[arg(long)]
    pub cond: Option<String>,
    /// CMI formula.
    #[arg(long)]
    pub formula: Option<String>,
    /// Spectral rank grids, e.g. `A:1,2,4;B:1,2`.
    #[arg(long)]
    pub spectral: Option<String>,
    /// Truncation scheme file (JSON, or TOML with a `.toml` extension).
    #[arg(long)]
    pub scheme: Option<PathBuf>,
    /// Scheme given inline in the config file as `[sweep.generators.<label>]`.
    #[arg(skip)]
    pub generators: Option<BTreeMap<String, ProjectorGenerator>>,
    /// CSV of the sweep points.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON summary.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

fn parse_spectral(text: &str) -> Result<TruncationScheme> {
    let mut scheme = TruncationScheme::new();
    for entry in text.split(';').map(str::trim).filter(|e| !e.is_empty()) {
        let (label, ranks) = entry
            .split_once(':')
            .with_context(|| format!("expected label:ranks, got `{entry}`"))?;
        let ranks = ranks
            .split(',')
            .map(|r| r.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .with_context(|| format!("ranks for `{label}`"))?;
        scheme = scheme.with(label.trim(), ProjectorGenerator::Spectral { ranks });
    }
    Ok(scheme)
}

fn load_scheme(path: &Path) -> Result<TruncationScheme> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if path.extension().is_some_and(|e| e == "toml") {
        Ok(toml::from_str(&text)?)
    } else {
        Ok(serde_json::from_str(&text)?)
    }
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    measure: &'a str,
    partition: &'a [Vec<String>],
    condition: &'a [String],
    points: usize,
    reference: f64,
    final_value: f64,
    final_gap: f64,
    converged: bool,
    lambda_nondecreasing: bool,
}

pub fn sweep(a: &SweepArgs) -> Result<Status> {
    let s = load_state(required(&a.state, "state")?)?;
    let spec = measure_spec(&a.measure, &a.parts, &a.cond, &a.formula)?;
    let scheme = match (&a.spectral, &a.scheme, &a.generators) {
        (Some(text), _, _) => parse_spectral(text)?,
        (None, Some(path), _) => load_scheme(path)?,
        (None, None, Some(g)) => TruncationScheme {
            generators: g.clone(),
        },
        _ => bail!("no truncation scheme: pass --spectral, --scheme or [sweep.generators]"),
    };
    let res = faithfulness_sweep(&s, |w: &State| Ok(spec.evaluate(w)?.value), &scheme)?;
    write_out(a.out.as_ref(), &res.to_csv()?)?;
    let summary = SweepSummary {
        measure: &spec.name,
        partition: &spec.parts,
        condition: &spec.cond,
        points: res.points.len(),
        reference: res.reference,
        final_value: res.points.last().map_or(f64::NAN, |p| p.value),
        final_gap: res.final_gap,
        converged: res.converged,
        lambda_nondecreasing: res.lambda_nondecreasing(),
    };
    write_out(a.summary.as_ref(), &serde_json::to_string_pretty(&summary)?)?;
    println!(
        "sweep {}: {} points, reference {:.12}, final gap {:.3e}, {}",
        spec.name,
        summary.points,
        res.reference,
        res.final_gap,
        if res.converged {
            "converged"
        } else {
            "NOT converged"
        }
    );
    Ok(Status::from_pass(res.converged))
}

// ---------------------------------------------------------------- bounds

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsArgs {
    /// Bound kind (e.g. cmi, mutual_information, entropy_gain) or `all`.
    #[arg(long)]
    pub kind: Option<String>,
    /// Local dimension used when --dims is absent.
    #[arg(long)]
    pub d: Option<usize>,
    /// Number of parties for the multipartite kinds.
    #[arg(long)]
    pub parties: Option<usize>,
    /// Explicit dimension list (see the kind's convention).
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Random state pairs per bound.
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Base seed; each pair's seed is written to the CSV.
    #[arg(long)]
    pub seed: Option<u64>,
    /// CSV of all sampled pairs.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn bounds(a: &BoundsArgs) -> Result<Status> {
    let kinds: Vec<BoundKind> = match a.kind.as_deref().unwrap_or("all") {
        "all" => BoundKind::ALL.to_vec(),
        name => vec![BoundKind::from_name(name)?],
    };
    if a.dims.is_some() && kinds.len() > 1 {
        bail!("--dims needs a single --kind");
    }
    let (d, n, pairs, seed) = (
        a.d.unwrap_or(2),
        a.parties.unwrap_or(2),
        a.pairs.unwrap_or(1000),
        a.seed.unwrap_or(0),
    );
    let mut all = BoundReport {
        kind: "all".into(),
        rows: Vec::new(),
        max_ratio: 0.0,
        violations: 0,
        skipped: 0,
    };
    for (i, kind) in kinds.iter().enumerate() {
        let dims = a
            .dims
            .clone()
            .unwrap_or_else(|| qcorr::fuzz::bound_dims(*kind, d, n));
        let target = BoundTarget::<f64>::specialized(*kind, &dims, seed)?;
        let rep = verify_bound(
            &target,
            mixture_pair,
            pairs,
            qcorr::continuity::pair_seed(seed, i as u64),
        )?;
        println!(
            "{} bound {} dims={:?}: {} pairs, {} violations, {} skipped, max ratio {:.4}",
            if rep.pass() { "PASS" } else { "FAIL" },
            rep.kind,
            dims,
            rep.rows.len(),
            rep.violations,
            rep.skipped,
            rep.max_ratio
        );
        all.violations += rep.violations;
        all.skipped += rep.skipped;
        all.max_ratio = all.max_ratio.max(rep.max_ratio);
        all.rows.extend(rep.rows);
    }
    write_out(a.out.as_ref(), &all.to_csv()?)?;
    Ok(Status::from_pass(all.pass()))
}

// ---------------------------------------------------------------- capacity

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityArgs {
    /// Channel JSON file.
    #[arg(long)]
    pub channel: Option<PathBuf>,
    /// Constraint operator F (square matrix JSON); unconstrained when absent.
    #[arg(long = "constraint-F")]
    #[serde(rename = "constraint_F", alias = "constraint_f")]
    pub constraint_f: Option<PathBuf>,
    /// Energy bound E in Tr Fρ ≤ E.
    #[arg(long = "E", allow_negative_numbers = true)]
    #[serde(rename = "E", alias = "energy")]
    pub energy: Option<f64>,
    /// Random restarts of the ascent.
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Seed for the restarts.
    #[arg(long)]
    pub seed: Option<u64>,
    /// JSON report output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct CapacityJson {
    value_nats: f64,
    constraint_value: f64,
    energy: Option<f64>,
    restarts: usize,
    best_per_restart: Vec<f64>,
    iterations: Vec<usize>,
    argmax: StateJson,
}

pub fn capacity(a: &CapacityArgs) -> Result<Status> {
    let path = required(&a.channel, "channel")?;
    let ch =
        io::read_channel(path).with_context(|| format!("reading channel {}", path.display()))?;
    let d = ch.in_layout().total_dim();
    let constraint = match &a.constraint_f {
        Some(p) => {
            let f = io::read_square_matrix(p)
                .with_context(|| format!("reading constraint {}", p.display()))?;
            ConstraintSpec::new(f, *required(&a.energy, "E")?)?
        }
        None => ConstraintSpec::unconstrained(d),
    };
    let opts = CapacityOptions {
        restarts: a.restarts.unwrap_or(16),
        seed: a.seed.unwrap_or(0),
        ..Default::default()
    };
    let r = constrained_capacity(&ch, &constraint, &opts)?;
    let out = CapacityJson {
        value_nats: r.value,
        constraint_value: r.constraint_value,
        energy: a.constraint_f.as_ref().and(a.energy),
        restarts: r.restarts,
        best_per_restart: r.best_per_restart.clone(),
        iterations: r.iterations.clone(),
        argmax: StateJson::from_state(&r.argmax),
    };
    write_out(a.out.as_ref(), &serde_json::to_string_pretty(&out)?)?;
    let cons = match out.energy {
        Some(e) => format!("Tr Fρ = {:.6} ≤ E = {e}", r.constraint_value),
        None => "unconstrained".into(),
    };
    println!(
        "C_ea = {:.10} nats ({cons}), {} restarts",
        r.value, r.restarts
    );
    Ok(Status::Success)
}

// ---------------------------------------------------------------- recover

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecoverArgs {
    /// State JSON file.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Reference, B and C groups: `A,B,C`; join labels within a group with `+`.
    #[arg(long)]
    pub labels: Option<String>,
    /// Random restarts of the isometry search.
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Seed for the restarts.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Skip the search when the Petz map already meets the fidelity bound.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub early_exit: Option<bool>,
    /// JSON report output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct RecoveryJson {
    a: Vec<String>,
    b: Vec<String>,
    c: Vec<String>,
    cmi_nats: f64,
    fr_lhs: f64,
    fidelity: f64,
    petz_fidelity: f64,
    marginal_residual_b: f64,
    marginal_residual_c: f64,
    searched: bool,
    fixed_up: bool,
    fixup_degenerate: bool,
    markov: bool,
    pass: bool,
    channel: ChannelJson,
}

pub fn recover(a: &RecoverArgs) -> Result<Status> {
    let s = load_state(required(&a.state, "state")?)?;
    let groups: Vec<Vec<String>> = required(&a.labels, "labels")?
        .split(',')
        .map(|g| {
            g.split('+')
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(String::from)
                .collect()
        })
        .collect();
    let [ga, gb, gc]: [Vec<String>; 3] = groups
        .try_into()
        .map_err(|_| anyhow::anyhow!("--labels needs three groups A,B,C"))?;
    let opts = RecoveryOptions {
        restarts: a.restarts.unwrap_or(4),
        seed: a.seed.unwrap_or(0),
        early_exit: a.early_exit.unwrap_or(true),
        ..Default::default()
    };
    let r = recovery_search(&s, &ga, &gb, &gc, &opts)?;
    let out = RecoveryJson {
        cmi_nats: r.cmi,
        fr_lhs: r.fr_lhs,
        fidelity: r.fidelity,
        petz_fidelity: r.petz_fidelity,
        marginal_residual_b: r.marginal_residual_b,
        marginal_residual_c: r.marginal_residual_c,
        searched: r.searched,
        fixed_up: r.fixed_up,
        fixup_degenerate: r.fixup_degenerate,
        markov: r.cmi <= tolerances().markov,
        pass: r.pass(),
        channel: ChannelJson::from_channel(&r.channel),
        a: ga,
        b: gb,
        c: gc,
    };
    write_out(a.out.as_ref(), &serde_json::to_string_pretty(&out)?)?;
    println!(
        "{} recovery {}|{}|{}: cmi {:.6e}, fidelity {:.10} vs e^(-cmi/2) {:.10}{}",
        if out.pass { "PASS" } else { "FAIL" },
        out.a.join("+"),
        out.b.join("+"),
        out.c.join("+"),
        r.cmi,
        r.fidelity,
        r.fr_lhs,
        if out.markov { " (Markov)" } else { "" }
    );
    Ok(Status::from_pass(out.pass))
}

// ---------------------------------------------------------------- fuzz

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzArgs {
    /// Comma-separated property names, or `all`.
    #[arg(long, value_delimiter = ',')]
    pub properties: Option<Vec<String>>,
    /// Samples per property.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Base seed; per-sample seeds derive from it and the property name.
    #[arg(long)]
    pub seed: Option<u64>,
    /// CSV table of per-property outcomes.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON list of failure records.
    #[arg(long)]
    pub failures: Option<PathBuf>,
    /// List the registered properties and exit.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub list: Option<bool>,
}

pub fn fuzz(a: &FuzzArgs) -> Result<Status> {
    if a.list.unwrap_or(false) {
        let mut out = std::io::stdout().lock();
        for p in qcorr::fuzz::registry() {
            let line = writeln!(out, "{:32} {:18} {}", p.name, p.module, p.description);
            // a closed pipe (e.g. `| head`) just ends the listing
            if matches!(&line, Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe) {
                break;
            }
            line?;
        }
        return Ok(Status::Success);
    }
    let names: Vec<String> = match &a.properties {
        Some(v) if !(v.len() == 1 && v[0] == "all") => v.clone(),
        _ => qcorr::fuzz::property_names()
            .into_iter()
            .map(String::from)
            .collect(),
    };
    let report = qcorr::fuzz::fuzz(&names, a.budget.unwrap_or(100), a.seed.unwrap_or(0))?;
    for o in &report.outcomes {
        println!(
            "{} {}: {}/{} passed, worst margin {:.3e}{}",
            if o.failures == 0 { "PASS" } else { "FAIL" },
            o.property,
            o.passes,
            o.samples,
            o.worst_margin,
            o.worst_seed
                .map(|s| format!(" (seed {s})"))
                .unwrap_or_default()
        );
    }
    for f in report.failures() {
        println!(
            "  failure {} seed {} dims {:?} margin {:e}{}",
            f.property,
            f.seed,
            f.dims,
            f.margin,
            f.error
                .as_ref()
                .map(|e| format!(": {e}"))
                .unwrap_or_default()
        );
    }
    write_out(a.out.as_ref(), &report.to_csv()?)?;
    let failures: Vec<_> = report.failures().collect();
    write_out(
        a.failures.as_ref(),
        &serde_json::to_string_pretty(&failures)?,
    )?;
    Ok(Status::from_pass(report.pass()))
}

// ---------------------------------------------------------------- gen

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// Induced random state (rank defaults to full).
    State {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// Labels (default A, B, C, …).
        #[arg(long, value_delimiter = ',')]
        labels: Option<Vec<String>>,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random channel from a Haar isometry.
    Channel {
        #[arg(long)]
        d_in: usize,
        #[arg(long)]
        d_out: usize,
        #[arg(long, default_value_t = 1)]
        choi_rank: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Named states: bell, ghz, maximally-mixed.
    Named {
        #[arg(long)]
        name: String,
        #[arg(long, value_delimiter = ',')]
        labels: Option<Vec<String>>,
        /// Local dimension for maximally-mixed.
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Truncated bosonic states: tmsv (squeezing --r) or thermal (--mean).
    Model {
        /// `tmsv` or `thermal`.
        #[arg(long)]
        kind: String,
        /// Squeezing parameter.
        #[arg(long, default_value_t = 0.5)]
        r: f64,
        /// Mean photon number.
        #[arg(long, default_value_t = 1.0)]
        mean: f64,
        /// Fock-space cutoff per mode.
        #[arg(long, default_value_t = 16)]
        cutoff: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Number operator diag(0, 1, …, d−1), for use as a constraint.
    NumberOperator {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn default_labels(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n)
            .map(|i| ((b'A' + i as u8) as char).to_string())
            .collect()
    } else {
        (1..=n).map(|i| format!("A{i}")).collect()
    }
}

fn emit(out: Option<&PathBuf>, json: String, what: &str) -> Result<Status> {
    match out {
        Some(p) => {
            write_out(Some(p), &json)?;
            println!("wrote {what} to {}", p.display());
        }
        None => println!("{json}"),
    }
    Ok(Status::Success)
}

pub fn gen(g: &GenCommand, config: &RunConfig) -> Result<Status> {
    if let Some(k) = config.gen.keys().find(|k| k.as_str() != "seed") {
        bail!("unsupported key `{k}` in [gen] (only seed)");
    }
    let fallback_seed = config
        .gen
        .get("seed")
        .and_then(|v| v.as_integer())
        .map(|s| s as u64)
        .or(config.seed);
    let seed_of = |s: &Option<u64>| s.or(fallback_seed).unwrap_or(0);
    match g {
        GenCommand::State {
            dims,
            labels,
            rank,
            seed,
            out,
        } => {
            let labels = labels.clone().unwrap_or_else(|| default_labels(dims.len()));
            if labels.len() != dims.len() {
                bail!("{} labels for {} dims", labels.len(), dims.len());
            }
            let layout = SubsystemLayout::new(labels.into_iter().zip(dims.iter().copied()))?;
            let rank = rank.unwrap_or(layout.total_dim());
            let s: State = random_state(&layout, rank, seed_of(seed))?;
            emit(
                out.as_ref(),
                io::state_to_json(&s)?,
                &format!("rank-{rank} state on {dims:?}"),
            )
        }
        GenCommand::Channel {
            d_in,
            d_out,
            choi_rank,
            seed,
            out,
        } => {
            let ch = random_channel::<f64>(*d_in, *d_out, *choi_rank, seed_of(seed))?;
            emit(
                out.as_ref(),
                io::channel_to_json(&ch)?,
                &format!("{d_in}→{d_out} channel of Choi rank {choi_rank}"),
            )
        }
        GenCommand::Named {
            name,
            labels,
            d,
            out,
        } => {
            let s: State = match name.as_str() {
                "bell" => {
                    let l = labels.clone().unwrap_or_else(|| default_labels(2));
                    if l.len() != 2 {
                        bail!("bell needs two labels");
                    }
                    states::bell(&l[0], &l[1])?
                }
                "ghz" => {
                    let l = labels.clone().unwrap_or_else(|| default_labels(3));
                    let refs: Vec<&str> = l.iter().map(String::as_str).collect();
                    states::ghz(&refs)?
                }
                "maximally-mixed" => {
                    let l = labels.clone().unwrap_or_else(|| default_labels(1));
                    State::maximally_mixed(SubsystemLayout::new(l.into_iter().map(|x| (x, *d)))?)
                }
                other => bail!("unknown named state `{other}` (bell, ghz, maximally-mixed)"),
            };
            emit(out.as_ref(), io::state_to_json(&s)?, name)
        }
        GenCommand::Model {
            kind,
            r,
            mean,
            cutoff,
            out,
        } => {
            let m = match kind.as_str() {
                "tmsv" => ModelState::Tmsv {
                    r: *r,
                    cutoff: *cutoff,
                },
                "thermal" => ModelState::Thermal {
                    mean: *mean,
                    cutoff: *cutoff,
                },
                other => bail!("unknown model `{other}` (tmsv, thermal)"),
            };
            let s: State = model_state(&m)?;
            emit(
                out.as_ref(),
                io::state_to_json(&s)?,
                &format!("{kind} state, cutoff {cutoff}"),
            )
        }
        GenCommand::NumberOperator { d, out } => {
            let diag: Vec<f64> = (0..*d).map(|n| n as f64).collect();
            let m = MatrixJson::from_matrix(&linalg::diag(&diag));
            emit(
                out.as_ref(),
                serde_json::to_string_pretty(&m)?,
                &format!("number operator, d = {d}"),
            )
        }
    }
}
