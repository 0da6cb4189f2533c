//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria 1 to 11 run inside rayon pools of 1, 4 and 8 threads; the
//! 1-thread run is reported and the artifacts of all three are compared
//! byte for byte for criterion 12.

use std::f64::consts::LN_2;
use std::fmt::Write as _;
use std::time::Instant;

use qcorr::channels::{constrained_capacity, CapacityOptions, ConstraintSpec};
use qcorr::continuity::{mixture_pair, verify_bound, BoundKind, BoundSpec, BoundTarget, Concavity};
use qcorr::extension::{faithfulness_sweep, model_state, thermal_entropy, ModelState};
use qcorr::fuzz::{bound_dims, fuzz, random_scheme, FuzzReport};
use qcorr::measures::{
    cmi, interaction_information, mutual_information, secrecy_monotone, CmiFormula, EntropicCombo,
};
use qcorr::random::{random_state_with, rng_for};
use qcorr::recovery::{recovery_search, RecoveryOptions};
use qcorr::tensor::states;
use qcorr::{Channel, State, SubsystemLayout};
use rand::Rng;

const SEED: u64 = 20_240_917;

// Pinned tolerances.
const TOL_EXACT: f64 = 1e-10;
const TOL_CAPACITY: f64 = 1e-4;
const TOL_SSA: f64 = 1e-9;
const TOL_FORMULAS: f64 = 1e-8;
const TOL_PURE: f64 = 1e-9;
const TOL_BOUND: f64 = 1e-9;
const TOL_WINTER: f64 = 1e-12;
const TOL_MONO: f64 = 1e-9;
const TOL_GAP: f64 = 1e-6;
const TOL_TMSV: f64 = 1e-3;
const TOL_FR: f64 = 1e-6;
const TOL_MARGINALS: f64 = 1e-8;
const TOL_MARKOV: f64 = 1e-8;

struct Outcome {
    pass: bool,
    detail: String,
    artifact: String,
}

fn outcome(pass: bool, detail: String, artifact: String) -> Outcome {
    Outcome {
        pass,
        detail,
        artifact,
    }
}

/// Runs `names` at `budget` and reports (all passed, worst margin, artifact).
fn fuzz_block(names: &[&str], budget: usize, seed: u64) -> (bool, String, String) {
    let r: FuzzReport = fuzz(names, budget, seed).expect("registered properties");
    let mut detail = String::new();
    for o in &r.outcomes {
        let _ = write!(
            detail,
            "{}: {}/{} worst margin {:.2e}; ",
            o.property, o.passes, o.samples, o.worst_margin
        );
        if let Some(f) = o.failing.first() {
            let _ = write!(detail, "first failure seed {} dims {:?}; ", f.seed, f.dims);
        }
    }
    (
        r.pass(),
        detail.trim_end_matches("; ").to_string(),
        r.to_csv().unwrap(),
    )
}

fn c1_exact() -> Outcome {
    let bell: State = states::bell("A", "B").unwrap();
    let ghz: State = states::ghz(&["A", "B", "C"]).unwrap();
    let parts = vec![vec!["A".to_string()], vec!["B".into()], vec!["C".into()]];
    let none: [String; 0] = [];
    let checks = [
        (
            "Bell MI",
            mutual_information(&bell, &[&["A"][..], &["B"]])
                .unwrap()
                .value,
            2.0 * LN_2,
            TOL_EXACT,
        ),
        (
            "GHZ CMI",
            cmi(&ghz, &["A"], &["C"], &["B"], CmiFormula::Direct)
                .unwrap()
                .value,
            LN_2,
            TOL_EXACT,
        ),
        (
            "GHZ I3",
            interaction_information(&ghz, &parts).unwrap().value,
            0.0,
            TOL_EXACT,
        ),
        (
            "GHZ S3",
            secrecy_monotone(&ghz, &parts, &none).unwrap().value,
            3.0 * LN_2,
            TOL_EXACT,
        ),
    ];
    let qubit = SubsystemLayout::new([("A", 2)]).unwrap();
    let id = Channel::identity(&qubit);
    let cap = constrained_capacity(
        &id,
        &ConstraintSpec::unconstrained(2),
        &CapacityOptions {
            seed: SEED,
            ..Default::default()
        },
    )
    .unwrap()
    .value;
    let mut pass = true;
    let mut detail = String::new();
    let mut artifact = String::new();
    for (name, got, want, tol) in
        checks
            .into_iter()
            .chain([("C_ea(id)", cap, 2.0 * LN_2, TOL_CAPACITY)])
    {
        pass &= (got - want).abs() <= tol;
        let _ = write!(detail, "{name} err {:.1e}; ", (got - want).abs());
        let _ = writeln!(artifact, "{name},{got:e}");
    }
    outcome(pass, detail.trim_end_matches("; ").into(), artifact)
}

fn c2_ssa() -> Outcome {
    let (pass, detail, artifact) = fuzz_block(&["ssa"], 10_000, SEED);
    outcome(pass, format!("cmi ≥ −{TOL_SSA:e}; {detail}"), artifact)
}

fn c3_formulas() -> Outcome {
    let (pass, detail, artifact) = fuzz_block(&["cmi-formulas"], 1000, SEED);
    outcome(
        pass,
        format!("spread ≤ {TOL_FORMULAS:e}; {detail}"),
        artifact,
    )
}

fn c4_pure() -> Outcome {
    let (pass, detail, artifact) = fuzz_block(&["pure-identity"], 1000, SEED);
    outcome(
        pass,
        format!("deviation ≤ {TOL_PURE:e}; {detail}"),
        artifact,
    )
}

fn c5_bounds() -> Outcome {
    let mut pass = true;
    let mut artifact = String::new();
    let mut worst = (0.0f64, String::new());
    let mut total = 0;
    for d in [2, 3] {
        let n = if d == 2 { 3 } else { 2 };
        let mut targets: Vec<BoundTarget<f64>> = BoundKind::ALL
            .iter()
            .map(|&k| {
                let n = if k == BoundKind::InformationGap {
                    n - 1
                } else {
                    n
                };
                BoundTarget::specialized(k, &bound_dims(k, d, n), SEED).unwrap()
            })
            .collect();
        let layout = SubsystemLayout::uniform(&["A", "B", "C"], d).unwrap();
        let combo = EntropicCombo::new([
            (1.0, vec!["A", "B"]),
            (1.0, vec!["B", "C"]),
            (-1.0, vec!["B"]),
            (-1.0, vec!["A", "B", "C"]),
        ])
        .unwrap();
        let spec = BoundSpec::with_dimension_range(combo, &layout, Concavity::Neither).unwrap();
        targets.push(BoundTarget::generic(spec, layout));
        for (i, t) in targets.iter().enumerate() {
            let rep =
                verify_bound(t, mixture_pair, 1000, SEED ^ (d as u64) << 8 ^ i as u64).unwrap();
            pass &= rep.pass() && tol_ok(&rep.rows);
            total += rep.rows.len();
            if rep.max_ratio > worst.0 {
                worst = (rep.max_ratio, format!("{} d={d}", rep.kind));
            }
            artifact.push_str(&rep.to_csv().unwrap());
        }
    }
    outcome(
        pass,
        format!(
            "{total} pairs over 11 bounds × d∈{{2,3}}, max |ΔF|/bound {:.3} ({})",
            worst.0, worst.1
        ),
        artifact,
    )
}

fn tol_ok(rows: &[qcorr::continuity::BoundRow]) -> bool {
    rows.iter().all(|r| r.delta_f <= r.bound + TOL_BOUND)
}

fn c6_winter() -> Outcome {
    let (pass, detail, artifact) = fuzz_block(&["winter-interpolation"], 1000, SEED);
    outcome(
        pass,
        format!("residuals ≤ {TOL_WINTER:e}; {detail}"),
        artifact,
    )
}

fn c7_monotonicity() -> Outcome {
    let names = [
        "mi-extension",
        "local-channel-mi",
        "local-channel-multi-mi",
        "local-channel-cmi",
        "local-channel-secrecy",
        "local-channel-info-gap",
    ];
    let (pass, detail, artifact) = fuzz_block(&names, 1000, SEED);
    outcome(pass, format!("tol {TOL_MONO:e}; {detail}"), artifact)
}

fn c8_sweeps() -> Outcome {
    let mut pass = true;
    let mut worst_gap = 0.0f64;
    let mut artifact = String::new();
    for i in 0..100u64 {
        let mut r = rng_for(SEED, i);
        let dims: Vec<usize> = (0..3).map(|_| r.random_range(2..=3)).collect();
        let layout = SubsystemLayout::new(["A", "B", "C"].into_iter().zip(dims)).unwrap();
        let s: State = random_state_with(&layout, layout.total_dim(), &mut r).unwrap();
        for _ in 0..10 {
            let scheme = random_scheme(&layout, &mut r);
            let res = if i % 2 == 0 {
                faithfulness_sweep(
                    &s,
                    |w: &State| Ok(cmi(w, &["A"], &["C"], &["B"], CmiFormula::Direct)?.value),
                    &scheme,
                )
            } else {
                faithfulness_sweep(
                    &s,
                    |w: &State| Ok(mutual_information(w, &[&["A"][..], &["B", "C"]])?.value),
                    &scheme,
                )
            }
            .unwrap();
            pass &= res.final_gap <= TOL_GAP;
            worst_gap = worst_gap.max(res.final_gap);
            artifact.push_str(&res.to_csv().unwrap());
        }
    }
    let r = 0.5f64;
    let tmsv: State = model_state(&ModelState::Tmsv { r, cutoff: 16 }).unwrap();
    let mi = mutual_information(&tmsv, &[&["A"][..], &["B"]])
        .unwrap()
        .value;
    let exact = 2.0 * thermal_entropy(r.sinh().powi(2));
    pass &= (mi - exact).abs() <= TOL_TMSV;
    let _ = writeln!(artifact, "tmsv,{mi:e}");
    outcome(
        pass,
        format!("1000 sweeps, worst final gap {worst_gap:.1e} (tol {TOL_GAP:e}); TMSV MI err {:.1e} (tol {TOL_TMSV:e})", (mi - exact).abs()),
        artifact,
    )
}

fn c9_recovery() -> Outcome {
    let layout = SubsystemLayout::qubits(&["A", "B", "C"]).unwrap();
    let mut pass = true;
    let mut worst_fr = f64::INFINITY;
    let mut worst_res = 0.0f64;
    let mut searched = 0;
    let mut artifact = String::new();
    for i in 0..200u64 {
        let mut r = rng_for(SEED ^ 0x9, i);
        let rank = r.random_range(1..=8);
        let s: State = random_state_with(&layout, rank, &mut r).unwrap();
        // every tenth state forces the optimizer past the Petz warm start
        let opts = RecoveryOptions {
            seed: i,
            early_exit: i % 10 != 0,
            ..Default::default()
        };
        let rep = recovery_search(&s, &["A"], &["B"], &["C"], &opts).unwrap();
        let slack = rep.fidelity + TOL_FR - rep.fr_lhs;
        let res = rep.marginal_residual_b.max(rep.marginal_residual_c);
        pass &= slack >= 0.0 && res <= TOL_MARGINALS;
        worst_fr = worst_fr.min(slack);
        worst_res = worst_res.max(res);
        searched += rep.searched as usize;
        let _ = writeln!(artifact, "{i},{:e},{:e},{:e}", rep.cmi, rep.fidelity, res);
    }
    let (mpass, mdetail, mart) = fuzz_block(&["markov-petz", "exact-recovery-markov"], 200, SEED);
    artifact.push_str(&mart);
    outcome(
        pass && mpass,
        format!(
            "200 states ({searched} searched), worst FR slack {worst_fr:.2e}, worst marginal residual {worst_res:.1e}; Markov tol {TOL_MARKOV:e}: {mdetail}"
        ),
        artifact,
    )
}

fn c10_wilde() -> Outcome {
    let (pass, detail, artifact) = fuzz_block(&["wilde"], 100, SEED);
    outcome(pass, format!("nats form; {detail}"), artifact)
}

fn c11_channels() -> Outcome {
    let (pass, detail, artifact) = fuzz_block(&["triangle", "bound-entropy-gain"], 1000, SEED);
    outcome(pass, detail, artifact)
}

type Criterion = (&'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 11] = [
    ("exact checkpoints", c1_exact),
    ("strong subadditivity", c2_ssa),
    ("five-formula CMI agreement", c3_formulas),
    ("pure-state identity", c4_pure),
    ("continuity bounds", c5_bounds),
    ("Winter interpolation", c6_winter),
    ("monotonicity suite", c7_monotonicity),
    ("faithfulness sweeps", c8_sweeps),
    ("FR recovery", c9_recovery),
    ("Wilde inequality", c10_wilde),
    ("triangle and entropy-gain bound", c11_channels),
];

fn run_all(threads: usize) -> Vec<Outcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap();
    pool.install(|| CRITERIA.iter().map(|(_, f)| f()).collect())
}

fn main() {
    let start = Instant::now();
    let mut runs = Vec::new();
    for threads in [1, 4, 8] {
        let t = Instant::now();
        runs.push((threads, run_all(threads)));
        eprintln!("suite with {threads} thread(s): {:.1?}", t.elapsed());
    }
    let mut failed = 0;
    for (i, ((name, _), o)) in CRITERIA.iter().zip(&runs[0].1).enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        failed += !o.pass as usize;
        println!("{tag} criterion {:>2} ({name}): {}", i + 1, o.detail);
    }
    let reference: Vec<&String> = runs[0].1.iter().map(|o| &o.artifact).collect();
    let mut mismatched = Vec::new();
    for (threads, outs) in &runs[1..] {
        for (i, o) in outs.iter().enumerate() {
            if &o.artifact != reference[i] {
                mismatched.push(format!("criterion {} at {threads} threads", i + 1));
            }
        }
    }
    let bytes: usize = reference.iter().map(|a| a.len()).sum();
    let det = mismatched.is_empty();
    failed += !det as usize;
    println!(
        "{} criterion 12 (determinism): {bytes} artifact bytes identical across 1/4/8 threads{}",
        if det { "PASS" } else { "FAIL" },
        if det {
            String::new()
        } else {
            format!("; mismatches: {}", mismatched.join(", "))
        }
    );
    println!(
        "{} of 12 criteria passed in {:.1?}",
        12 - failed,
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
