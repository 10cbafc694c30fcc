//! Acceptance suite: one PASS/FAIL line per criterion, with wall-clock
//! limits pinned below. Run with `cargo test -p weilform --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use weilform::verify::{self, SuiteOutcome, VerifyConfig};

/// Wall-clock limits in seconds, criteria 1–8.
const LIMITS: [u64; 8] = [5, 60, 60, 120, 60, 60, 30, 60];
/// Numerical tolerance of the modularity checks.
const TOL: f64 = 1e-6;
/// Thread counts compared by the determinism criterion.
const THREADS: [usize; 3] = [1, 2, 8];

struct Line {
    id: usize,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn timed(cfg: &VerifyConfig, suites: &[&str]) -> (Vec<SuiteOutcome>, Duration) {
    let t0 = Instant::now();
    let out = suites.iter().map(|s| verify::run_suite(s, cfg).expect("suite")).collect();
    (out, t0.elapsed())
}

fn criterion(id: usize, title: &'static str, cfg: &VerifyConfig, suites: &[&str], extra: impl Fn(&[SuiteOutcome]) -> Result<(), String>) -> Line {
    let (out, dt) = timed(cfg, suites);
    let limit = Duration::from_secs(LIMITS[id - 1]);
    let mut problems: Vec<String> = out
        .iter()
        .filter(|s| !s.pass())
        .map(|s| format!("{}: {}", s.name, s.failures.first().cloned().unwrap_or_else(|| "no checks".into())))
        .collect();
    if let Err(e) = extra(&out) {
        problems.push(e);
    }
    if dt > limit {
        problems.push(format!("took {:.2}s > {}s", dt.as_secs_f64(), limit.as_secs()));
    }
    let checks: usize = out.iter().map(|s| s.checks).sum();
    let detail = if problems.is_empty() {
        format!("{checks} checks in {:.2}s (limit {}s)", dt.as_secs_f64(), limit.as_secs())
    } else {
        problems.join("; ")
    };
    Line { id, title, pass: problems.is_empty(), detail }
}

fn note_count(out: &[SuiteOutcome], prefix: &str) -> Option<usize> {
    out.iter().flat_map(|s| &s.notes).find_map(|n| n.strip_suffix(prefix).and_then(|v| v.trim().parse().ok()))
}

fn main() -> ExitCode {
    let cfg = VerifyConfig { tol: TOL, ..VerifyConfig::default() };
    let mut lines = Vec::new();

    lines.push(criterion(1, "Milgram formula on the lattice corpus", &cfg, &["milgram"], |o| {
        match note_count(o, "lattices") {
            Some(n) if n >= 15 => Ok(()),
            n => Err(format!("corpus has {n:?} lattices, need ≥ 15")),
        }
    }));
    lines.push(criterion(2, "Weil relations and unitarity, genus 1 and 2", &cfg, &["weil-relations"], |_| Ok(())));
    lines.push(criterion(3, "Hermitian ρ restricted to SL2(Z) equals trace-form ρ", &cfg, &["case2-restriction"], |o| {
        let n = o[0].notes.iter().filter(|n| n.contains("γ = e(")).count();
        if n >= 5 {
            Ok(())
        } else {
            Err(format!("only {n} Hermitian lattices"))
        }
    }));
    lines.push(criterion(4, "Enumeration equals box scan; E8 shells 240 and 2160", &cfg, &["enumeration"], |o| {
        let want = ["E8 Q=1: 240 (coordinate model 240)", "E8 Q=2: 2160 (coordinate model 2160)"];
        if want.iter().all(|w| o[0].notes.iter().any(|n| n == w)) {
            Ok(())
        } else {
            Err("E8 shell counts not confirmed".into())
        }
    }));
    lines.push(criterion(5, "GL-equivariance and n(B) congruence on 200 instances", &cfg, &["cycles-invariants"], |_| Ok(())));
    lines.push(criterion(6, "Genus-1 theta modularity under S and T", &cfg, &["theta-modularity"], |_| Ok(())));
    lines.push(criterion(7, "Hurwitz class numbers against the class number formula", &cfg, &["hurwitz"], |_| Ok(())));
    lines.push(criterion(8, "Witt indices and isotropic witnesses on 50 forms", &cfg, &["witt"], |o| {
        match note_count(o, "forms") {
            Some(n) if n >= 50 => Ok(()),
            n => Err(format!("{n:?} forms, need ≥ 50")),
        }
    }));

    // determinism of the full report across thread counts
    let t0 = Instant::now();
    let renders: Vec<String> = THREADS
        .iter()
        .map(|&k| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(k).build().expect("thread pool");
            pool.install(|| verify::run_all(&cfg).render())
        })
        .collect();
    let same = renders.windows(2).all(|w| w[0] == w[1]);
    lines.push(Line {
        id: 9,
        title: "verify output identical across 1, 2 and 8 threads",
        pass: same,
        detail: format!("{} bytes, {:.2}s for three runs", renders[0].len(), t0.elapsed().as_secs_f64()),
    });

    let mut ok = true;
    for l in &lines {
        println!("criterion {}: {} — {} [{}]", l.id, if l.pass { "PASS" } else { "FAIL" }, l.title, l.detail);
        ok &= l.pass;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
