//! The acceptance gate: one check per release criterion, each printing a
//! single pass/fail line. Run with `--nocapture` to see the lines even
//! when everything passes.

use fsforms::lattice::experiments::{run_experiment, ExperimentParams};
use fsforms::suite::mutation_survivors;
use fsforms::{Engine, Report, SuiteRegistry, Verdict};
use std::time::{Duration, Instant};

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Gate { failures: Vec::new() }
    }

    fn check(&mut self, number: u32, description: &str, pass: bool, detail: String) {
        let verdict = if pass { "pass" } else { "FAIL" };
        println!("criterion {number:2}: {verdict}  {description}  [{detail}]");
        if !pass {
            self.failures.push(format!("criterion {number}: {description} ({detail})"));
        }
    }

    fn finish(self) {
        assert!(self.failures.is_empty(), "acceptance failures:\n{}", self.failures.join("\n"));
    }
}

fn timed_suite(engine: &Engine, registry: &SuiteRegistry, name: &str) -> (Report, Duration) {
    let start = Instant::now();
    let report = registry.run(engine, name).expect("suite runs");
    (report, start.elapsed())
}

fn all_pass(report: &Report) -> bool {
    report.all_passed()
}

#[test]
fn acceptance_criteria() {
    let mut gate = Gate::new();
    let engine = Engine::standard();
    let registry = SuiteRegistry::builtin().expect("builtin suites load");

    // 1. Core horizontal-calculus suite: exact, fast.
    let (core, core_time) = timed_suite(&engine, &registry, "ym-core");
    gate.check(
        1,
        "ym-core: 5/5 exact (covariance, curvature squares, Jacobi) in < 5 s",
        core.cases.len() == 5 && all_pass(&core) && core_time < Duration::from_secs(5),
        format!("{}/{} in {:.2?}", core.cases.iter().filter(|c| c.verdict == Verdict::Pass).count(), core.cases.len(), core_time),
    );

    // 2. Corner decompositions plus the nine-step auxiliary-field chain.
    let start = Instant::now();
    let (corner, _) = timed_suite(&engine, &registry, "ym-corner");
    let (aux, _) = timed_suite(&engine, &registry, "aux-b2");
    let corner_time = start.elapsed();
    gate.check(
        2,
        "ym-corner + aux-b2: potential/form decompositions and 9-case chain, exact, < 10 s",
        all_pass(&corner) && aux.cases.len() == 9 && all_pass(&aux) && corner_time < Duration::from_secs(10),
        format!("{} + {} cases in {:.2?}", corner.cases.len(), aux.cases.len(), corner_time),
    );

    // 3. BRST suite: nilpotency, vertical contraction, Maurer-Cartan.
    let (brst, _) = timed_suite(&engine, &registry, "brst");
    gate.check(
        3,
        "brst: nilpotency, vertical Maurer-Cartan, flat-curvature substitution, exact",
        all_pass(&brst),
        format!("{}/{}", brst.cases.iter().filter(|c| c.verdict == Verdict::Pass).count(), brst.cases.len()),
    );

    // 4. Mutation robustness across every registered case.
    let mut survivors = Vec::new();
    let mut mutant_count = 0;
    for name in registry.names() {
        let cases = registry.cases(name).unwrap();
        mutant_count += cases.iter().map(|c| fsforms::suite::sign_mutants(c).len()).sum::<usize>();
        survivors.extend(mutation_survivors(&engine, cases));
    }
    gate.check(
        4,
        "every single-sign mutation of a registered identity fails (100% kill)",
        survivors.is_empty(),
        format!("{mutant_count} mutants, {} survivors", survivors.len()),
    );

    // 5. Projection residuals at the release resolution and seed.
    let start = Instant::now();
    let projectors = run_experiment("projectors", &ExperimentParams::default()).unwrap();
    let proj_time = start.elapsed();
    gate.check(
        5,
        "projectors (u1 + su2, N = 128, seed 42): all residuals <= 1e-8 in < 10 s",
        all_pass(&projectors) && proj_time < Duration::from_secs(10),
        format!("{} cases in {:.2?}", projectors.cases.len(), proj_time),
    );

    // 6. Equivariance of the connection under a small pointed gauge
    // transformation: first-order decay and small absolute residual.
    let equivariance = run_experiment("equivariance", &ExperimentParams::default()).unwrap();
    gate.check(
        6,
        "equivariance (su2): residual halves (+-20%) under doubling, <= 1e-3 when fine",
        all_pass(&equivariance),
        summary(&equivariance),
    );

    // 7. Curvature dichotomy over 100 seeded triples.
    let curvature = run_experiment("curvature", &ExperimentParams::default()).unwrap();
    gate.check(
        7,
        "curvature: u1 <= Richardson floor; su2 >= 10x floor on >= 95% of 100 triples",
        all_pass(&curvature),
        summary(&curvature),
    );

    // 8. Corner/flux identity on Gauss-constrained fields across N in
    // {128, 256, 512}.
    let corner_exp = run_experiment("corner", &ExperimentParams::default()).unwrap();
    gate.check(
        8,
        "corner charge stable (+-30%) across N in {128,256,512}; flux identity O(dx)",
        all_pass(&corner_exp),
        summary(&corner_exp),
    );

    // 9. Gribov crossing: located at two resolutions for su2, absent for u1.
    let gribov = run_experiment("gribov", &ExperimentParams::default()).unwrap();
    gate.check(
        9,
        "gribov: su2 crossing agrees to 5% between N = 128 and N = 256; u1 none",
        all_pass(&gribov),
        summary(&gribov),
    );

    // 10. Determinism: reports identical modulo timestamp, CSV identical
    // byte for byte, for both a symbolic suite and a lattice experiment.
    let suite_a = registry.run(&engine, "ym-corner").unwrap();
    let suite_b = registry.run(&engine, "ym-corner").unwrap();
    let lat_a = run_experiment("curvature", &ExperimentParams { sites: Some(16), ..Default::default() }).unwrap();
    let lat_b = run_experiment("curvature", &ExperimentParams { sites: Some(16), ..Default::default() }).unwrap();
    gate.check(
        10,
        "determinism: reports equal modulo timestamp; CSV byte-identical",
        suite_a.same_content(&suite_b)
            && lat_a.same_content(&lat_b)
            && suite_a.to_csv() == suite_b.to_csv()
            && lat_a.to_csv() == lat_b.to_csv(),
        "two runs each of ym-corner and curvature".to_string(),
    );

    gate.finish();
}

fn summary(report: &Report) -> String {
    report
        .cases
        .iter()
        .map(|c| {
            format!(
                "{}={}{}",
                c.name,
                match c.verdict {
                    Verdict::Pass => "pass",
                    Verdict::Fail => "FAIL",
                    Verdict::Error => "ERROR",
                },
                c.residual.as_deref().map(|r| format!("({r})")).unwrap_or_default()
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}
