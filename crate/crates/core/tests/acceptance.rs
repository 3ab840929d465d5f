//! Acceptance suite: every criterion runs at its stated tolerance and prints
//! one PASS/FAIL line. Exits non-zero if any criterion fails.

mod common;

use std::path::Path;
use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use drg_norton::families::FamilySpec;
use drg_norton::norton::PairSweep;
use drg_norton::report::{Analysis, SPAN_SAMPLE_SOURCES};
use drg_norton::spectral::{krein_reconstruction_residual, span_property_residual};

use common::{analysis, corpus};

const TOL: f64 = 1e-8;
const COMMUTATIVITY_TOL: f64 = 1e-12;
const KREIN_RECONSTRUCTION_TOL: f64 = 1e-10;
const VANISHING_TOL: f64 = 1e-10;
const RUNTIME_BUDGET: Duration = Duration::from_secs(60);

struct Case {
    spec: FamilySpec,
    analysis: Analysis,
    sweeps: Vec<PairSweep>,
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Largest value over all (graph, ordering) pairs, with the worst graph.
fn worst<F: Fn(&Case, usize) -> f64>(cases: &[Case], f: F) -> (f64, String) {
    let mut best = (0.0f64, String::from("-"));
    for case in cases {
        for k in 0..case.analysis.structures.len() {
            let v = f(case, k);
            if v.is_nan() || v > best.0 {
                best = (v, format!("{} ordering {:?}", case.spec, case.analysis.structures[k].ordering().nontrivial()));
            }
        }
    }
    best
}

fn bounded(label: &str, (value, at): (f64, String), tol: f64) -> Outcome {
    outcome(value < tol, format!("{label} max {value:.3e} < {tol:.0e} (worst: {at})"))
}

fn all(parts: Vec<Outcome>) -> Outcome {
    let pass = parts.iter().all(|p| p.pass);
    let detail = parts.into_iter().map(|p| p.detail).collect::<Vec<_>>().join("; ");
    outcome(pass, detail)
}

fn criterion_1(cases: &[Case], elapsed: Duration) -> Outcome {
    let orderings: usize = cases.iter().map(|c| c.sweeps.len()).sum();
    all(vec![
        bounded("|formula − direct|", worst(cases, |c, k| c.sweeps[k].oracle_vs_formula), TOL),
        outcome(
            orderings > 0 && cases.iter().all(|c| !c.sweeps.is_empty()),
            format!("{} graphs, {orderings} orderings", cases.len()),
        ),
        outcome(elapsed < RUNTIME_BUDGET, format!("corpus time {:.2}s < {}s", elapsed.as_secs_f64(), RUNTIME_BUDGET.as_secs())),
    ])
}

fn criterion_2(cases: &[Case]) -> Outcome {
    all(vec![
        bounded("|symmetric − direct|", worst(cases, |c, k| c.sweeps[k].oracle_vs_symmetric), TOL),
        bounded(
            "scaled |sym(x,y) − sym(y,x)|",
            worst(cases, |c, k| c.sweeps[k].symmetric_commutativity),
            COMMUTATIVITY_TOL,
        ),
    ])
}

fn criterion_3(cases: &[Case]) -> Outcome {
    let delta = worst(cases, |c, k| {
        let e1 = c.analysis.structures[k].ordering().full()[1];
        (c.analysis.krein.get(e1, e1, e1) - c.analysis.contexts[k].q111_from_formula()).abs()
    });
    let mut parts = vec![bounded("|q111 tensor − formula|", delta, TOL)];
    for case in cases.iter().filter(|c| matches!(c.spec, FamilySpec::Hamming { d: 2 | 3, q: 2 })) {
        for (k, ctx) in case.analysis.contexts.iter().enumerate() {
            let e1 = case.analysis.structures[k].ordering().full()[1];
            let tensor = case.analysis.krein.get(e1, e1, e1).abs();
            let formula = ctx.q111_from_formula().abs();
            let products = case.sweeps[k].max_product_norm;
            parts.push(outcome(
                tensor < TOL && formula < TOL && products < VANISHING_TOL,
                format!(
                    "{}: |q111| {tensor:.1e}/{formula:.1e} < {TOL:.0e}, max |product| {products:.1e} < {VANISHING_TOL:.0e}",
                    case.spec
                ),
            ));
        }
    }
    outcome(parts.len() >= 3 && parts.iter().all(|p| p.pass), parts.into_iter().map(|p| p.detail).collect::<Vec<_>>().join("; "))
}

fn criterion_4(cases: &[Case]) -> Outcome {
    bounded("balanced set", worst(cases, |c, k| c.sweeps[k].balanced_set), TOL)
}

fn criterion_5(cases: &[Case]) -> Outcome {
    all(vec![
        bounded(
            "recurrence",
            worst(cases, |c, k| c.analysis.structures[k].recurrence(&c.analysis.intersection).max),
            TOL,
        ),
        bounded(
            "θ2 identity",
            worst(cases, |c, k| c.analysis.structures[k].theta2_identity().unwrap_or(f64::INFINITY)),
            TOL,
        ),
    ])
}

fn criterion_6(cases: &[Case]) -> Outcome {
    let rows_ok = cases.iter().all(|c| {
        c.analysis
            .contexts
            .iter()
            .all(|ctx| ctx.cibi_identity_check().map(|r| r.len() == ctx.diameter()).unwrap_or(false))
    });
    all(vec![
        bounded(
            "c_i/b_i identities (1 ≤ i ≤ d)",
            worst(cases, |c, k| {
                c.analysis.contexts[k]
                    .cibi_identity_check()
                    .map(|r| r.into_iter().fold(0.0, f64::max))
                    .unwrap_or(f64::INFINITY)
            }),
            TOL,
        ),
        outcome(rows_ok, "every row i = 1..d evaluated".into()),
    ])
}

fn criterion_7(cases: &[Case]) -> Outcome {
    let mut worst_value = 0.0f64;
    let mut at = String::from("-");
    let mut sums_ok = true;
    for case in cases {
        let r = case.analysis.spectral.residuals(&case.analysis.adjacency);
        let v = r
            .resolution_of_identity
            .max(r.idempotency)
            .max(r.reconstruction)
            .max(r.multiplicity_integrality)
            .max(r.multiplicity_sum);
        if v.is_nan() || v > worst_value {
            worst_value = v;
            at = case.spec.to_string();
        }
        let total: u64 = case.analysis.spectral.integer_multiplicities().iter().sum();
        sums_ok &= total as usize == case.analysis.graph.vertex_count();
    }
    all(vec![
        outcome(worst_value < TOL, format!("ΣE=I, E_iE_j=δE_i, A=ΣθE, integrality max {worst_value:.3e} < {TOL:.0e} (worst: {at})")),
        outcome(sums_ok, "Σ m_i = n on every graph".into()),
    ])
}

fn criterion_8(cases: &[Case]) -> Outcome {
    let mut symmetry = 0.0f64;
    let mut min_entry = f64::INFINITY;
    let mut reconstruction = 0.0f64;
    let mut span = 0.0f64;
    for case in cases {
        let a = &case.analysis;
        let e = a.spectral.idempotents();
        symmetry = symmetry.max(a.krein.symmetry_defect());
        min_entry = min_entry.min(a.krein.min_entry());
        reconstruction = reconstruction.max(krein_reconstruction_residual(e, &a.krein));
        span = span.max(span_property_residual(e, &a.krein, a.nz_threshold, SPAN_SAMPLE_SOURCES));
    }
    all(vec![
        outcome(symmetry == 0.0, format!("symmetry defect {symmetry:e} (exact)")),
        outcome(min_entry >= -TOL, format!("min entry {min_entry:.3e} ≥ −{TOL:.0e}")),
        outcome(
            reconstruction < KREIN_RECONSTRUCTION_TOL,
            format!("reconstruction {reconstruction:.3e} < {KREIN_RECONSTRUCTION_TOL:.0e}"),
        ),
        outcome(span < TOL, format!("span property {span:.3e} < {TOL:.0e}")),
    ])
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drg-norton")).args(args).output().expect("spawn drg-norton")
}

fn edge_file(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).expect("write fixture");
    path.to_string_lossy().into_owned()
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let path3 = edge_file(dir.path(), "path3.edges", "3 2\n0 1\n1 2\n");
    let k4 = edge_file(dir.path(), "k4.edges", "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    let bad = edge_file(dir.path(), "bad.edges", "4 3\n0 1\n1 two\n2 3\n");

    let out = cli(&["analyze", "--graph", &path3]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
    let path_ok = out.status.code() == Some(1)
        && report["status"] == "notDistanceRegular"
        && report["failure"]["witness"].is_object();

    let out = cli(&["analyze", "--graph", &k4]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
    let k4_ok = out.status.code() == Some(1) && report["failure"]["kind"] == "diameterTooSmall";

    let out = cli(&["analyze", "--graph", &bad]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    let bad_ok = out.status.code() == Some(3) && stderr.contains(&format!("{bad}:3:"));

    outcome(
        path_ok && k4_ok && bad_ok,
        format!("path3 exit 1 + witness: {path_ok}; K4 diameterTooSmall: {k4_ok}; malformed exit 3 + line: {bad_ok}"),
    )
}

fn criterion_10() -> Outcome {
    let args = ["analyze", "--family", "johnson", "--params", "6,3"];
    let first = cli(&args);
    let second = cli(&args);
    let same = first.status.code() == Some(0) && !first.stdout.is_empty() && first.stdout == second.stdout;
    outcome(same, format!("two runs, {} bytes, identical: {same}", first.stdout.len()))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cases: Vec<Case> = corpus()
        .into_iter()
        .map(|spec| {
            let analysis = analysis(&spec);
            let sweeps = analysis
                .contexts
                .iter()
                .map(|ctx| ctx.sweep_pairs().unwrap_or_else(|e| panic!("{spec}: {e}")))
                .collect();
            Case { spec, analysis, sweeps }
        })
        .collect();
    let elapsed = start.elapsed();

    let results = [
        ("oracle equivalence, main closed form", criterion_1(&cases, elapsed)),
        ("oracle equivalence, symmetric form", criterion_2(&cases)),
        ("q111 closed form and binary Hamming vanishing", criterion_3(&cases)),
        ("balanced set condition", criterion_4(&cases)),
        ("dual-eigenvalue recurrence and θ2 identity", criterion_5(&cases)),
        ("c_i/b_i identities", criterion_6(&cases)),
        ("spectral integrity", criterion_7(&cases)),
        ("Krein integrity", criterion_8(&cases)),
        ("negative paths", criterion_9()),
        ("determinism", criterion_10()),
    ];

    let mut failed = 0;
    for (i, (name, result)) in results.iter().enumerate() {
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {:>2}: {name} | {}", i + 1, result.detail);
        failed += usize::from(!result.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
