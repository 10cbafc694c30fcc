use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use weilform::arith::{fmt_rat, int, Rat};
use weilform::cycles::{enumerate_reps, intersection_matrix, rep_number, theta_expansion, witt_index, IntersectionMatrix, WittStatus};
use weilform::cyclotomic::{gaussian_form, pretty};
use weilform::eisenstein::{hurwitz_values, zagier_coeffs};
use weilform::modform::{slash_check, HalfSpacePoint};
use weilform::verify::{self, VerifyConfig};
use weilform::weil::milgram;
use weilform::{Case, Error, Lattice, QExpansion, WeilRep};

mod input;

#[derive(Parser, Debug)]
#[command(name = "weilform", version, about = "Finite Weil representations, theta expansions, isotropy and class numbers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Lattice document (JSON) or a built-in `std:A2`, `std:D4`, `std:E8`, `std:U`
    #[arg(long, global = true)]
    lattice: Option<String>,
    #[arg(long, global = true, default_value_t = 1)]
    genus: usize,
    /// Rational truncation bound (trace of T, or N for class numbers)
    #[arg(long, global = true)]
    bound: Option<String>,
    /// Working precision in bits for numerical checks
    #[arg(long, global = true, default_value_t = 96)]
    precision: u32,
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Worker threads; never detected automatically
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Write the primary output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Discriminant group: invariants and the quadratic form on classes
    Disc,
    /// Explicit matrix of ρ(w) for a word
    Weil {
        /// `S`/`T` letters (genus 1), a JSON word, or `@path`
        word: String,
    },
    /// Gauss sum against √|D|·e(sig/8)
    Milgram,
    /// Representation numbers |L_{T,μ}|
    Reps {
        /// Intersection matrix T as JSON rows
        #[arg(long = "t")]
        t: String,
        /// Comma-separated class indices, one per tuple entry
        #[arg(long)]
        mu: Option<String>,
        /// Print the tuples as well
        #[arg(long)]
        list: bool,
    },
    /// Theta expansion document up to --bound
    Theta,
    /// Hurwitz class numbers H(N) for N ≤ --bound
    Hurwitz,
    /// Zagier's weight-3/2 series as an expansion document
    Zagier,
    /// Witt index and a totally isotropic basis
    Witt {
        /// Rational Gram matrix as JSON rows (instead of --lattice)
        #[arg(long)]
        gram: Option<String>,
    },
    /// Numerical modularity check of an expansion document
    SlashCheck {
        /// Expansion document
        #[arg(long)]
        input: String,
        #[arg(long)]
        word: String,
    },
    /// Run the verification suites
    Verify {
        /// Restrict to the named suites
        #[arg(long)]
        suite: Vec<String>,
        #[arg(long, default_value_t = VerifyConfig::default().seed)]
        seed: u64,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    /// A check ran and failed; carries the report.
    Failed(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.threads == 0 {
        eprintln!("weilform: usage: --threads must be at least 1");
        return ExitCode::from(2);
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("weilform: {e}");
            return ExitCode::from(2);
        }
    };
    let res = pool.install(|| run(&cli));
    let (text, code) = match res {
        Ok(text) => (text, 0),
        Err(CliError::Failed(text)) => (text, 4),
        Err(CliError::Usage(m)) => {
            eprintln!("weilform: usage: {m}");
            return ExitCode::from(2);
        }
        Err(CliError::Core(e)) => {
            eprintln!("weilform: {e}");
            return ExitCode::from(if e.is_math_domain() { 3 } else { 2 });
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("weilform: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}

fn run(cli: &Cli) -> Result<String, CliError> {
    if cli.genus == 0 {
        return Err(CliError::Usage("--genus must be positive".into()));
    }
    if !(cli.tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let lat = || input::lattice(cli.lattice.as_deref());
    let mut s = String::new();
    match &cli.cmd {
        Cmd::Disc => disc(&lat()?, &mut s),
        Cmd::Weil { word } => {
            let l = lat()?;
            let w = input::word(word, l.case(), cli.genus)?;
            let rep = WeilRep::new(&l, cli.genus)?;
            let m = rep.word_matrix(&w)?;
            writeln!(s, "dim {}", m.dim()).unwrap();
            for i in 0..m.dim() {
                let row: Vec<String> = (0..m.dim()).map(|j| m.entry(i, j).render()).collect();
                writeln!(s, "{}", row.join(" ")).unwrap();
            }
        }
        Cmd::Milgram => {
            let m = milgram(&lat()?);
            writeln!(s, "gauss sum  {}", gaussian_form(&m.gauss_sum)).unwrap();
            writeln!(s, "expected   {}", pretty(&m.expected)).unwrap();
            writeln!(s, "signature  {}", m.signature).unwrap();
            writeln!(s, "order      {}", m.order).unwrap();
            writeln!(s, "{}", if m.holds { "PASS" } else { "FAIL" }).unwrap();
            if !m.holds {
                return Err(CliError::Failed(s));
            }
        }
        Cmd::Reps { t, mu, list } => {
            let l = lat()?;
            let t = IntersectionMatrix::new(input::kmatrix(t, l.case())?);
            let r = t.rows().len();
            let order = l.discriminant_group().order();
            let mu = match mu {
                Some(m) => input::classes(m, r, order)?,
                None => vec![0; r],
            };
            if *list {
                let reps = enumerate_reps(&l, &t, &mu)?;
                writeln!(s, "count {}", reps.len()).unwrap();
                for x in &reps {
                    debug_assert_eq!(intersection_matrix(&l, x), t);
                    let vs: Vec<String> = x.x.iter().map(|v| vector(v)).collect();
                    writeln!(s, "{}", vs.join(" ")).unwrap();
                }
            } else {
                writeln!(s, "{}", rep_number(&l, &t, &mu)?).unwrap();
            }
        }
        Cmd::Theta => {
            let f = theta_expansion(&lat()?, cli.genus, &input::bound(cli.bound.as_deref())?)?;
            s = f.serialize();
        }
        Cmd::Hurwitz => {
            let n = integer_bound(cli)?;
            for hv in hurwitz_values(n) {
                writeln!(s, "{} {}", hv.index, fmt_rat(&hv.value)).unwrap();
            }
        }
        Cmd::Zagier => {
            s = zagier_coeffs(integer_bound(cli)? as i64)?.serialize();
        }
        Cmd::Witt { gram } => witt(cli, gram.as_deref(), &mut s)?,
        Cmd::SlashCheck { input: path, word } => {
            let l = lat()?;
            let f = QExpansion::deserialize(&input::read(path)?)?;
            let w = input::word(word, l.case(), f.genus)?;
            let samples = sample_points(f.genus);
            let rep = slash_check(&f, &w, &f.weight.clone(), &l, &samples, cli.tol, cli.precision)?;
            if rep.exact {
                writeln!(s, "exact check, {} mismatched coefficients", rep.mismatches).unwrap();
            }
            for p in &rep.samples {
                writeln!(s, "defect {:.3e} at {}", p.defect, point(&p.point)).unwrap();
            }
            writeln!(s, "max defect {:.3e} (tol {:e})", rep.max_defect, rep.tol).unwrap();
            writeln!(s, "{}", if rep.pass { "PASS" } else { "FAIL" }).unwrap();
            if !rep.pass {
                return Err(CliError::Failed(s));
            }
        }
        Cmd::Verify { suite, seed } => {
            let cfg = VerifyConfig { seed: *seed, precision: cli.precision, tol: cli.tol };
            let report = if suite.is_empty() {
                verify::run_all(&cfg)
            } else {
                let suites = suite
                    .iter()
                    .map(|n| verify::run_suite(n, &cfg).ok_or_else(|| CliError::Usage(format!("unknown suite {n:?}; known: {}", verify::SUITES.join(", ")))))
                    .collect::<Result<Vec<_>, _>>()?;
                verify::VerifyReport { suites }
            };
            s = report.render();
            if !report.all_pass() {
                return Err(CliError::Failed(s));
            }
        }
    }
    Ok(s)
}

fn disc(l: &Lattice, s: &mut String) {
    let g = l.discriminant_group();
    let sig = l.z_signature();
    writeln!(s, "lattice {}", l.hash()).unwrap();
    writeln!(s, "case {}", l.case().as_str()).unwrap();
    writeln!(s, "rank {}", l.rank()).unwrap();
    writeln!(s, "signature ({}, {})", sig.positive, sig.negative).unwrap();
    writeln!(s, "order {}", g.order()).unwrap();
    let ed: Vec<String> = g.elementary_divisors().iter().map(|d| d.to_string()).collect();
    writeln!(s, "elementary divisors {}", if ed.is_empty() { "-".into() } else { ed.join(" ") }).unwrap();
    writeln!(s, "exponent {}", g.exponent()).unwrap();
    for i in 0..g.order() {
        let c: Vec<String> = g.coords(i).iter().map(|c| c.to_string()).collect();
        writeln!(s, "class {i} ({}) lift {} q {}", c.join(","), vector(&g.lift(i)), fmt_rat(&g.q(i))).unwrap();
    }
}

fn witt(cli: &Cli, gram: Option<&str>, s: &mut String) -> Result<(), CliError> {
    // Hermitian lattices are handled through the trace form: its index is twice the Hermitian one
    let (form, hermitian) = match (gram, &cli.lattice) {
        (Some(g), None) => (input::qmatrix(g)?, false),
        (None, Some(_)) => {
            let l = input::lattice(cli.lattice.as_deref())?;
            match l.case() {
                Case::Orthogonal => (l.gram().clone(), false),
                Case::Unitary => (l.trace_form()?.gram().clone(), true),
            }
        }
        _ => return Err(CliError::Usage("witt takes exactly one of --gram and --lattice".into())),
    };
    let r = witt_index(&form)?;
    writeln!(s, "rank {}", r.rank).unwrap();
    writeln!(s, "signature ({}, {})", r.signature.positive, r.signature.negative).unwrap();
    writeln!(s, "index {}", r.witt_index).unwrap();
    if hermitian {
        writeln!(s, "hermitian index {}", r.witt_index / 2).unwrap();
    }
    match &r.witness {
        Some(w) => writeln!(s, "witness {}", vector(w)).unwrap(),
        None => writeln!(s, "witness none").unwrap(),
    }
    for v in r.isotropic_basis.iter().skip(1) {
        writeln!(s, "basis {}", vector(v)).unwrap();
    }
    if let Some(o) = &r.obstruction {
        writeln!(s, "complement anisotropic at {} ({})", o.place, o.detail).unwrap();
    }
    let status = match r.status {
        WittStatus::Certified => "certified",
        WittStatus::Inconclusive => "inconclusive (lower bound)",
    };
    writeln!(s, "status {status}").unwrap();
    Ok(())
}

fn integer_bound(cli: &Cli) -> Result<u64, CliError> {
    let b = input::bound(cli.bound.as_deref())?;
    if !b.is_integer() {
        return Err(CliError::Usage("bound must be an integer here".into()));
    }
    b.to_integer().try_into().map_err(|_| CliError::Usage("bound too large".into()))
}

/// τ = i, 1 + i, (−1 + 3i)/2 in genus 1; diagonal purely imaginary points otherwise.
fn sample_points(genus: usize) -> Vec<HalfSpacePoint> {
    if genus == 1 {
        return verify::default_samples();
    }
    [int(1), Rat::new(5.into(), 4.into()), Rat::new(3.into(), 2.into())]
        .iter()
        .map(|y| HalfSpacePoint::diag_imag(&vec![y.clone(); genus]))
        .collect()
}

fn vector(v: &[Rat]) -> String {
    let c: Vec<String> = v.iter().map(fmt_rat).collect();
    format!("({})", c.join(","))
}

fn point(p: &HalfSpacePoint) -> String {
    if p.n == 1 {
        return format!("{} + {}i", fmt_rat(&p.re[0]), fmt_rat(&p.im[0]));
    }
    format!("X = {} Y = {}", vector(&p.re), vector(&p.im))
}
