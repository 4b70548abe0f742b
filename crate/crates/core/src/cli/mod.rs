//! Command-line front end.

pub mod fixtures;
pub mod io;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::conditions::{self, ConditionVerdict, PropernessProfile, Status};
use crate::division::{self, DivisionOptions, Membership};
use crate::error::Error;
use crate::newton::LatticePolytope;
use crate::poly::{Mode, MultiPoly, PolySystem};
use crate::residues::{self, PoweredMethod, QuadOptions, ResidueValue};
use crate::vanishing::{self, CbSpace, QSelection};
use crate::zeros::{self, ZeroSet};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "globres", version, about = "Global residues of polynomial and Laurent systems")]
pub struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for the parallel parts.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Local,
    Bm,
    Pf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Leading forms have no common nontrivial zero.
    CheckJacobi {
        #[arg(long)]
        sys: PathBuf,
    },
    /// No facial system has a zero on the torus.
    CheckBernstein {
        #[arg(long)]
        sys: PathBuf,
    },
    /// Sampled properness floor at one radius, or a decay sweep over several.
    EstimateProper {
        #[arg(long)]
        sys: PathBuf,
        /// Comma-separated rational weights.
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        toric: bool,
        /// JSON list of polytopes for the toric variant (default: Newton polytopes).
        #[arg(long)]
        polytopes: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "100")]
        radius: Vec<f64>,
        #[arg(long, default_value_t = conditions::DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Zeros in affine space, or on the torus with --torus.
    Solve {
        #[arg(long)]
        sys: PathBuf,
        #[arg(long)]
        torus: bool,
    },
    Residue {
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        sys: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Local)]
        method: MethodArg,
        #[arg(long)]
        radius: Option<f64>,
        /// Powers μ, comma-separated: residue against P₁^{μ₁+1},…
        #[arg(long)]
        mu: Option<String>,
        #[arg(long)]
        toric: bool,
        /// Externally supplied zero set.
        #[arg(long)]
        zeros: Option<PathBuf>,
    },
    VerifyVanishing {
        #[arg(long)]
        sys: PathBuf,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        toric: bool,
        #[arg(long)]
        polytopes: Option<PathBuf>,
        #[arg(long)]
        scan: bool,
        /// Explicit numerators (repeatable) instead of a scan.
        #[arg(long)]
        q: Vec<PathBuf>,
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        zeros: Option<PathBuf>,
        /// Relative vanishing tolerance.
        #[arg(long, default_value_t = vanishing::VANISH_REL_TOL)]
        tol: f64,
    },
    CayleyBacharach {
        #[arg(long)]
        sys: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        bound: Option<i64>,
        #[arg(long)]
        toric: bool,
        #[arg(long)]
        polytopes: Option<PathBuf>,
        #[arg(long)]
        zeros: Option<PathBuf>,
    },
    /// Division certificate Q(Y) = Σ c·Y^β·P(Y)^μ.
    Divide {
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        sys: PathBuf,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        toric: bool,
        #[arg(long)]
        polytopes: Option<PathBuf>,
        #[arg(long)]
        zeros: Option<PathBuf>,
        #[arg(long, default_value_t = division::DIV_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = division::DIV_TOL)]
        tol: f64,
    },
    Membership {
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        sys: PathBuf,
        #[arg(long)]
        zeros: Option<PathBuf>,
    },
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum FixturesAction {
    Run {
        #[arg(long)]
        all: bool,
        #[arg(long)]
        dir: Option<PathBuf>,
        names: Vec<String>,
    },
}

/// A diagnostic naming the offending input.
#[derive(Debug)]
pub struct CliError(pub String);

type CliResult<T> = std::result::Result<T, CliError>;

trait Context<T> {
    fn ctx(self, what: impl std::fmt::Display) -> CliResult<T>;
}

impl<T> Context<T> for crate::Result<T> {
    fn ctx(self, what: impl std::fmt::Display) -> CliResult<T> {
        self.map_err(|e| CliError(format!("{what}: {e}")))
    }
}

pub(crate) fn system(path: &Path) -> CliResult<PolySystem> {
    io::load_system(path).ctx(path.display())
}

fn numerator(path: &Path, sys: &PolySystem) -> CliResult<MultiPoly> {
    io::load_poly(path, sys.n(), sys.mode()).ctx(path.display())
}

fn zero_set(path: Option<&Path>, sys: &PolySystem, torus: bool) -> CliResult<ZeroSet> {
    match path {
        Some(p) => io::load_zeros(p, sys).ctx(p.display()),
        None if torus || sys.mode() == Mode::Laurent => zeros::solve_torus(sys).ctx("solver"),
        None => zeros::solve(sys).ctx("solver"),
    }
}

fn deltas(text: Option<&str>, sys: &PolySystem) -> CliResult<Vec<BigRational>> {
    match text {
        Some(t) => io::parse_rationals(t).ctx("--delta"),
        None => sys
            .equations()
            .iter()
            .map(|p| p.total_degree().map(|d| BigRational::from_integer(d.into())))
            .collect::<crate::Result<_>>()
            .ctx("--delta (default: total degrees)"),
    }
}

fn polytopes(path: Option<&Path>, sys: &PolySystem) -> CliResult<Vec<LatticePolytope>> {
    match path {
        Some(p) => io::load_polytopes(p).ctx(p.display()),
        None => io::newton_polytopes(sys).ctx("Newton polytopes"),
    }
}

/// Serializes `v` and adds the seed and any extra keys.
fn emit_json(out: &mut dyn Write, v: impl Serialize, seed: u64, extra: &[(&str, Value)]) {
    let mut v = serde_json::to_value(v).expect("JSON value");
    if let Value::Object(m) = &mut v {
        m.insert("seed".into(), json!(seed));
        for (k, x) in extra {
            m.insert((*k).into(), x.clone());
        }
    }
    let _ = writeln!(out, "{}", serde_json::to_string(&v).expect("JSON text"));
}

fn table(out: &mut dyn Write, rows: &[(&str, String)]) {
    let w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    for (k, v) in rows {
        let _ = writeln!(out, "{k:<w$}  {v}");
    }
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Holds => EXIT_PASS,
        Status::Fails => EXIT_FAIL,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn fmt_c(v: [f64; 2]) -> String {
    format!("{:.12} {:+.12}i", v[0], v[1])
}

fn verdict_out(out: &mut dyn Write, v: &ConditionVerdict, json: bool, seed: u64) -> i32 {
    if json {
        emit_json(out, v.to_json(), seed, &[]);
    } else {
        let mut rows = vec![("status", v.status.to_string())];
        if let Some(f) = v.floor {
            rows.push(("floor", format!("{f:.6e}")));
        }
        if let Some(w) = &v.witness {
            rows.push(("witness", w.iter().map(|c| fmt_c([c.re, c.im])).collect::<Vec<_>>().join(", ")));
        }
        rows.push(("seed", seed.to_string()));
        rows.push(("note", v.note.clone()));
        table(out, &rows);
    }
    status_code(v.status)
}

/// Residue by the requested method; shared with the fixture runner.
pub fn compute_residue(
    q: &MultiPoly,
    sys: &PolySystem,
    method: MethodArg,
    radius: Option<f64>,
    mu: Option<&[u32]>,
    toric: bool,
    zeros: Option<&ZeroSet>,
) -> crate::Result<ResidueValue> {
    let solve = |torus: bool| -> crate::Result<ZeroSet> {
        match zeros {
            Some(z) => Ok(z.clone()),
            None if torus => zeros::solve_torus(sys),
            None => zeros::solve(sys),
        }
    };
    let radius_or = |r: Option<f64>| -> crate::Result<f64> {
        match r {
            Some(r) => Ok(r),
            None => Ok(residues::suggest_radius(&solve(false)?)),
        }
    };
    if toric {
        if mu.is_some_and(|m| m.iter().any(|&x| x != 0)) {
            return Err(Error::Input("--mu is not supported with --toric".into()));
        }
        return match method {
            MethodArg::Pf => residues::toric_global_residue_exact(q, sys),
            MethodArg::Local => residues::toric_global_residue(q, sys, &solve(true)?),
            MethodArg::Bm => Err(Error::Input("quadrature is not available for toric residues".into())),
        };
    }
    if let Some(mu) = mu.filter(|m| m.iter().any(|&x| x != 0)) {
        return match method {
            MethodArg::Pf => residues::powered_global_residue(q, sys, mu, PoweredMethod::Exact),
            MethodArg::Bm => residues::powered_global_residue(
                q,
                sys,
                mu,
                PoweredMethod::BochnerMartinelli {
                    radius: radius_or(radius)?,
                    opts: QuadOptions::default(),
                },
            ),
            MethodArg::Local => residues::powered_global_residue_local(q, sys, mu, &solve(false)?),
        };
    }
    match method {
        MethodArg::Local => residues::global_residue(q, sys, &solve(false)?),
        MethodArg::Pf if sys.n() == 1 => residues::global_residue_exact(q, sys),
        MethodArg::Pf => residues::powered_global_residue(q, sys, &vec![0; sys.n()], PoweredMethod::Exact),
        MethodArg::Bm => residues::global_residue_bm(q, sys, radius_or(radius)?, QuadOptions::default()),
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult<i32> {
    let (json, seed) = (cli.json, cli.seed);
    match &cli.command {
        Command::CheckJacobi { sys } => {
            let s = system(sys)?;
            let v = conditions::check_jacobi_seeded(&s, seed).ctx(sys.display())?;
            Ok(verdict_out(out, &v, json, seed))
        }
        Command::CheckBernstein { sys } => {
            let s = system(sys)?;
            let v = conditions::check_bernstein_seeded(&s, seed).ctx(sys.display())?;
            Ok(verdict_out(out, &v, json, seed))
        }
        Command::EstimateProper {
            sys,
            delta,
            toric,
            polytopes: poly_path,
            radius,
            samples,
        } => {
            let s = system(sys)?;
            let r0 = radius[0];
            let profile = if *toric {
                PropernessProfile::toric(polytopes(poly_path.as_deref(), &s)?, r0)
            } else {
                let d = delta.as_deref().ok_or_else(|| CliError("--delta: required unless --toric".into()))?;
                PropernessProfile::projective(io::parse_rationals(d).ctx("--delta")?, r0)
            }
            .with_samples(*samples)
            .with_seed(seed);
            if radius.len() == 1 {
                let (_, v) = if *toric {
                    conditions::estimate_toric_properness(&s, &profile)
                } else {
                    conditions::estimate_properness(&s, &profile)
                }
                .ctx(sys.display())?;
                Ok(verdict_out(out, &v, json, seed))
            } else {
                let sw = conditions::properness_sweep(&s, &profile, radius).ctx(sys.display())?;
                if json {
                    emit_json(
                        out,
                        sw.verdict.to_json(),
                        seed,
                        &[
                            ("radii", json!(sw.radii)),
                            ("floors", json!(sw.floors)),
                            ("decay_per_decade", json!(sw.decay_per_decade)),
                        ],
                    );
                    Ok(status_code(sw.verdict.status))
                } else {
                    for (r, f) in sw.radii.iter().zip(&sw.floors) {
                        let _ = writeln!(out, "R = {r:<10}  floor = {f:.6e}");
                    }
                    Ok(verdict_out(out, &sw.verdict, false, seed))
                }
            }
        }
        Command::Solve { sys, torus } => {
            let s = system(sys)?;
            let z = zero_set(None, &s, *torus)?;
            if json {
                emit_json(out, z.to_json(), seed, &[]);
            } else {
                let _ = writeln!(out, "{} zeros", z.len());
                for r in &z.zeros {
                    let pt: Vec<String> = r.point.iter().map(|c| fmt_c([c.re, c.im])).collect();
                    let _ = writeln!(out, "  [{}]  mult {}  residual {:.2e}", pt.join(", "), r.multiplicity, r.residual);
                }
                for w in &z.warnings {
                    let _ = writeln!(out, "warning: {w}");
                }
            }
            Ok(EXIT_PASS)
        }
        Command::Residue {
            q,
            sys,
            method,
            radius,
            mu,
            toric,
            zeros,
        } => {
            let s = system(sys)?;
            let qp = numerator(q, &s)?;
            let mu = mu.as_deref().map(io::parse_naturals).transpose().ctx("--mu")?;
            let z = zeros.as_deref().map(|p| io::load_zeros(p, &s).ctx(p.display())).transpose()?;
            let r = compute_residue(&qp, &s, *method, *radius, mu.as_deref(), *toric, z.as_ref()).ctx(sys.display())?;
            if json {
                emit_json(out, r.to_json(), seed, &[]);
            } else {
                let j = r.to_json();
                let mut rows = vec![("value", fmt_c(j.value)), ("method", r.method.to_string())];
                rows.push(("error", j.error.map_or("unknown".into(), |e| format!("{e:.3e}"))));
                if let Some([a, b]) = &j.exact {
                    rows.push(("exact", format!("{a} + ({b})i")));
                }
                table(out, &rows);
            }
            Ok(EXIT_PASS)
        }
        Command::VerifyVanishing {
            sys,
            delta,
            toric,
            polytopes: poly_path,
            scan,
            q,
            witness,
            zeros,
            tol,
        } => {
            let s = system(sys)?;
            if *scan == !q.is_empty() {
                return Err(CliError("choose exactly one of --scan or --q".into()));
            }
            let sel = if *scan {
                QSelection::Scan
            } else {
                QSelection::List(q.iter().map(|p| numerator(p, &s)).collect::<CliResult<_>>()?)
            };
            let z = zero_set(zeros.as_deref(), &s, *toric)?;
            let report = if *toric {
                let d = polytopes(poly_path.as_deref(), &s)?;
                vanishing::verify_theorem2_with_tol(&s, &d, &z, &sel, *witness, *tol)
            } else {
                let d = deltas(delta.as_deref(), &s)?;
                vanishing::verify_theorem1_with_tol(&s, &d, &z, &sel, *witness, *tol)
            }
            .ctx(sys.display())?;
            if json {
                emit_json(out, &report, seed, &[]);
            } else {
                let _ = write!(out, "{}", report.to_text());
            }
            Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::CayleyBacharach {
            sys,
            bound,
            toric,
            polytopes: poly_path,
            zeros,
        } => {
            let s = system(sys)?;
            let space = match (bound, toric) {
                (Some(b), false) => CbSpace::Degree(*b),
                (None, true) => CbSpace::Interior(polytopes(poly_path.as_deref(), &s)?),
                _ => return Err(CliError("give exactly one of --bound or --toric".into())),
            };
            let z = zero_set(zeros.as_deref(), &s, *toric)?;
            let r = vanishing::cayley_bacharach_check(&s, &space, &z).ctx(sys.display())?;
            if json {
                emit_json(out, &r, seed, &[("cb_tol", json!(vanishing::CB_TOL))]);
            } else {
                let _ = writeln!(out, "monomial space: {} monomials", r.monomials.len());
                for p in &r.per_zero {
                    let _ = writeln!(
                        out,
                        "  zero {:<3}  kernel {:<3}  violation {:.3e}  {}",
                        p.index,
                        p.kernel_dim,
                        p.violation,
                        if p.pass { "ok" } else { "VIOLATED" }
                    );
                }
                let _ = writeln!(out, "verdict {}", if r.confirmed { "confirmed" } else { "not confirmed" });
            }
            Ok(if r.confirmed { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Divide {
            q,
            sys,
            delta,
            toric,
            polytopes: poly_path,
            zeros,
            samples,
            tol,
        } => {
            let s = system(sys)?;
            let qp = numerator(q, &s)?;
            let opts = DivisionOptions {
                samples: *samples,
                seed,
                tolerance: *tol,
                quad: QuadOptions::default(),
            };
            if *toric {
                let d = polytopes(poly_path.as_deref(), &s)?;
                let r = division::verify_toric_division(&qp, &s, &d, opts).ctx(sys.display())?;
                if json {
                    emit_json(out, r.to_json(), seed, &[("tolerance", json!(tol))]);
                } else {
                    write_terms(out, &r.terms);
                    table(
                        out,
                        &[
                            ("support", if r.support_ok() { "inside".into() } else { format!("violated at {:?}", r.support_violations) }),
                            ("remainder", crate::poly::parse::serialize(&r.remainder)),
                            ("max deviation", format!("{:.3e}", r.max_deviation)),
                        ],
                    );
                }
                return Ok(if r.verified() { EXIT_PASS } else { EXIT_FAIL });
            }
            let d = deltas(delta.as_deref(), &s)?;
            let z = zero_set(zeros.as_deref(), &s, false)?;
            let c = division::build_division(&qp, &s, &d, &z, opts).ctx(sys.display())?;
            if json {
                emit_json(out, c.to_json(), seed, &[]);
            } else {
                write_terms(out, &c.terms);
                table(
                    out,
                    &[
                        ("remainder", crate::poly::parse::serialize(&c.remainder)),
                        ("max deviation", format!("{:.3e} over {} samples", c.max_deviation, c.samples)),
                        ("tolerance", format!("{:.1e}", c.tolerance)),
                    ],
                );
            }
            Ok(if c.verified() { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Membership { q, sys, zeros } => {
            let s = system(sys)?;
            let qp = numerator(q, &s)?;
            let z = zero_set(zeros.as_deref(), &s, false)?;
            let r = division::membership_test(&qp, &s, &z).ctx(sys.display())?;
            if json {
                emit_json(out, &r, seed, &[]);
            } else {
                for (a, v) in &r.residues {
                    let _ = writeln!(out, "  alpha {:<12}  {:.3e}", format!("{a:?}"), (v[0] * v[0] + v[1] * v[1]).sqrt());
                }
                table(out, &[("verdict", format!("{:?}", r.verdict)), ("tolerance", format!("{:.3e}", r.tolerance))]);
            }
            Ok(match r.verdict {
                Membership::InIdeal => EXIT_PASS,
                Membership::NotInIdeal => EXIT_FAIL,
                Membership::Inconclusive => EXIT_INCONCLUSIVE,
            })
        }
        Command::Fixtures {
            action: FixturesAction::Run { all, dir, names },
        } => {
            let dir = dir.clone().unwrap_or_else(fixtures::default_dir);
            if !*all && names.is_empty() {
                return Err(CliError("fixtures run: name fixtures or pass --all".into()));
            }
            fixtures::run(&dir, if *all { None } else { Some(names.as_slice()) }, json, out)
        }
    }
}

fn write_terms(out: &mut dyn Write, terms: &[division::DivisionTerm]) {
    for t in terms {
        let _ = writeln!(
            out,
            "  beta {:<10}  mu {:<8}  {}",
            format!("{:?}", t.beta),
            format!("{:?}", t.mu),
            fmt_c([t.coefficient.re, t.coefficient.im])
        );
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_PASS
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_ERROR
                }
            };
        }
    };
    if let Some(t) = cli.threads {
        // only the first configuration in a process takes effect
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(CliError(msg)) => {
            let _ = writeln!(err, "error: {}", msg.replace('\n', " "));
            EXIT_ERROR
        }
    }
}
