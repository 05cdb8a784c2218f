use std::path::PathBuf;

use sr2fista::diagnostics::Certificate;
use sr2fista::{solve_observed, Algorithm, ProblemSpec, SolveOutput, SolverConfig, StopReason};

use crate::certify::{wdg_certificate, RunCertifier};
use crate::config::BenchConfig;
use crate::error::BenchError;
use crate::output::save_trace_csv;
use crate::problems::build_problem;
use crate::svg::{render, Series};

#[derive(Debug)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub output: SolveOutput,
    pub certificates: Vec<Certificate>,
    pub csv_path: PathBuf,
    pub svg_path: Option<PathBuf>,
}

#[derive(Debug)]
pub struct BenchReport {
    pub problem: String,
    /// Certificates of the problem itself, shared by all runs.
    pub problem_certificates: Vec<Certificate>,
    pub runs: Vec<RunReport>,
}

impl BenchReport {
    pub fn certificates(&self) -> impl Iterator<Item = &Certificate> {
        self.problem_certificates
            .iter()
            .chain(self.runs.iter().flat_map(|r| &r.certificates))
    }

    pub fn passed(&self) -> bool {
        self.certificates().all(|c| c.passed)
    }

    /// Human-readable summary, one line per run and certificate.
    pub fn summary(&self) -> String {
        let mut lines = vec![format!("problem {}", self.problem)];
        lines.extend(self.problem_certificates.iter().map(|c| format!("  {c}")));
        for r in &self.runs {
            let last = r.output.trace.last().expect("trace has a k = 0 row");
            let stop = match r.output.stop {
                StopReason::MaxIters => "max iterations",
                StopReason::TargetGap => "target gap",
                StopReason::ScheduleSaturated => "schedule saturated",
            };
            lines.push(format!(
                "{}: k = {}, f gap {:e}, stop: {stop}, L = {}, backtracking retries {}, csv {}",
                r.algorithm,
                last.k,
                last.f_gap,
                r.output.state.lipschitz,
                r.output.backtracking_retries,
                r.csv_path.display()
            ));
            lines.extend(r.certificates.iter().map(|c| format!("  {c}")));
        }
        let failed = self.certificates().filter(|c| !c.passed).count();
        lines.push(if failed == 0 {
            "all certificates passed".to_string()
        } else {
            format!("{failed} certificate(s) failed")
        });
        lines.join("\n")
    }
}

fn solver_config(cfg: &BenchConfig) -> SolverConfig {
    SolverConfig {
        beta_mode: cfg.beta_mode,
        max_iters: cfg.max_iters,
        target_gap: None,
        backtracking: cfg.backtracking,
        trace_every: cfg.trace_every,
        ista_step: None,
    }
}

fn run_one(
    p: &ProblemSpec,
    cfg: &BenchConfig,
    x0: Vec<f64>,
    algorithm: Algorithm,
) -> Result<(SolveOutput, Vec<Certificate>), BenchError> {
    let mut certifier = RunCertifier::new(p);
    let output = solve_observed(p, &solver_config(cfg), x0, algorithm, Some(&mut certifier))
        .map_err(BenchError::solver(format!("{algorithm} run")))?;
    if let Some(e) = certifier.error() {
        return Err(BenchError::Config(e.to_string()));
    }
    Ok((output, certifier.certificates()))
}

fn plot(problem: &str, algorithm: Algorithm, output: &SolveOutput) -> String {
    let pick = |f: fn(&sr2fista::TraceRecord) -> Option<f64>| -> Vec<(f64, f64)> {
        output
            .trace
            .iter()
            .filter_map(|r| f(r).map(|v| (r.k as f64, v)))
            .collect()
    };
    let series = [
        Series {
            label: format!("{algorithm} f - f*"),
            color: "#1f77b4",
            dashed: false,
            points: pick(|r| Some(r.f_gap)),
        },
        Series {
            label: "2L|x0-x*|^2/k^2".into(),
            color: "#d62728",
            dashed: true,
            points: pick(|r| r.bound_sublinear),
        },
        Series {
            label: "exp(-sqrt(2q)k) gap0".into(),
            color: "#2ca02c",
            dashed: true,
            points: pick(|r| r.bound_linear),
        },
    ];
    render(&format!("{problem}: {algorithm}"), "iteration k", &series)
}

/// Builds the problem, runs every configured algorithm (in parallel for
/// `both`), writes `<problem>_<algorithm>.csv` and optionally `.svg` into
/// the output directory, and collects certificates.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    cfg.validate()?;
    let (p, x0) = build_problem(cfg)?;
    let name = cfg.problem.name();
    let wdg = wdg_certificate(&p, cfg.beta_mode, cfg.wdg_samples, cfg.seed)
        .map_err(BenchError::solver("wdg sampling"))?;

    let algorithms = cfg.algorithm.algorithms();
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = algorithms
            .iter()
            .map(|&alg| {
                let (p, x0) = (&p, x0.clone());
                scope.spawn(move || run_one(p, cfg, x0, alg))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });

    let mut runs = Vec::new();
    for (algorithm, result) in algorithms.into_iter().zip(results) {
        let (output, certificates) = result?;
        let stem = format!("{name}_{algorithm}");
        let csv_path = cfg.output_dir.join(format!("{stem}.csv"));
        save_trace_csv(&csv_path, &output.trace)?;
        let svg_path = if cfg.plot {
            let path = cfg.output_dir.join(format!("{stem}.svg"));
            std::fs::write(&path, plot(name, algorithm, &output)).map_err(BenchError::io(&path))?;
            Some(path)
        } else {
            None
        };
        runs.push(RunReport {
            algorithm,
            output,
            certificates,
            csv_path,
            svg_path,
        });
    }
    Ok(BenchReport {
        problem: name.to_string(),
        problem_certificates: vec![wdg],
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn any_failing_certificate_fails_the_report() {
        let mut report = BenchReport {
            problem: "p".into(),
            problem_certificates: vec![Certificate::new("a", 0.0, 1e-9, None)],
            runs: Vec::new(),
        };
        assert!(report.passed());
        assert!(report.summary().ends_with("all certificates passed"));
        report
            .problem_certificates
            .push(Certificate::new("b", 1.0, 1e-9, None));
        report
            .problem_certificates
            .push(Certificate::new("c", f64::NAN, 1e-9, None));
        assert!(!report.passed());
        assert!(report.summary().ends_with("2 certificate(s) failed"));
    }
}
