//! The fixture corpus: `<dir>/<name>/{system.json, profile.json, expect.json}`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{compute_residue, io, CliError, MethodArg, EXIT_FAIL, EXIT_PASS};
use crate::conditions::{self, Status};
use crate::division::{self, DivisionOptions, Membership};
use crate::newton::{mixed_volume, LatticePolytope, PolytopeJson};
use crate::poly::{Mode, MultiPoly, PolySystem};
use crate::vanishing::{self, CbSpace, QSelection};
use crate::zeros::{self, ZeroSet};

pub fn default_dir() -> PathBuf {
    let local = PathBuf::from("fixtures");
    if local.is_dir() {
        return local;
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ProfileFile {
    /// Rational weights δⱼ for the projective variant.
    #[serde(default)]
    pub delta: Option<Vec<String>>,
    /// Work on the torus; polytopes default to the Newton polytopes.
    #[serde(default)]
    pub toric: bool,
    #[serde(default)]
    pub polytopes: Option<Vec<PolytopeJson>>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Check {
    Jacobi {
        status: Status,
    },
    Bernstein {
        status: Status,
    },
    ZeroCount {
        count: usize,
    },
    /// Mixed volume of the Newton polytopes; also compared with the torus zero count.
    MixedVolume {
        value: i64,
    },
    Residue {
        q: String,
        method: String,
        value: [f64; 2],
        tol: f64,
        #[serde(default)]
        radius: Option<f64>,
        #[serde(default)]
        mu: Option<Vec<u32>>,
    },
    Vanishing {
        pass: bool,
        #[serde(default)]
        vacuous: Option<bool>,
        #[serde(default)]
        count: Option<usize>,
        #[serde(default)]
        witness: Option<[f64; 2]>,
        #[serde(default)]
        tol: Option<f64>,
    },
    CayleyBacharach {
        #[serde(default)]
        bound: Option<i64>,
        confirmed: bool,
    },
    Division {
        q: String,
        #[serde(default)]
        tol: Option<f64>,
    },
    ToricDivision {
        q: String,
        #[serde(default)]
        remainder_zero: Option<bool>,
        #[serde(default)]
        support_ok: Option<bool>,
    },
    Membership {
        q: String,
        verdict: Membership,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckEntry {
    #[serde(flatten)]
    pub check: Check,
    /// `paper`, `trivial` or `derived(<oracle>)`.
    pub provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpectFile {
    pub checks: Vec<CheckEntry>,
}

fn provenance_class(p: &str) -> Option<&'static str> {
    match p {
        "paper" => Some("paper"),
        "trivial" => Some("trivial"),
        _ if p.starts_with("derived(") && p.ends_with(')') && p.len() > 9 => Some("derived"),
        _ => None,
    }
}

struct Fixture {
    sys: PolySystem,
    profile: ProfileFile,
    zeros: Option<ZeroSet>,
}

impl Fixture {
    fn toric(&self) -> bool {
        self.profile.toric || self.sys.mode() == Mode::Laurent
    }

    fn zeros(&mut self) -> crate::Result<&ZeroSet> {
        if self.zeros.is_none() {
            self.zeros = Some(if self.toric() { zeros::solve_torus(&self.sys)? } else { zeros::solve(&self.sys)? });
        }
        Ok(self.zeros.as_ref().unwrap())
    }

    fn delta(&self) -> crate::Result<Vec<BigRational>> {
        match &self.profile.delta {
            Some(d) => io::parse_rationals(&d.join(",")),
            None => self
                .sys
                .equations()
                .iter()
                .map(|p| p.total_degree().map(|d| BigRational::from_integer(d.into())))
                .collect(),
        }
    }

    fn polytopes(&self) -> crate::Result<Vec<LatticePolytope>> {
        match &self.profile.polytopes {
            Some(p) => p.iter().map(|x| x.to_polytope()).collect(),
            None => io::newton_polytopes(&self.sys),
        }
    }

    fn q(&self, text: &str) -> crate::Result<MultiPoly> {
        crate::poly::parse::parse(text, self.sys.n(), self.sys.mode())
    }
}

fn close(got: Complex64, want: [f64; 2], tol: f64) -> bool {
    (got - Complex64::new(want[0], want[1])).norm() <= tol
}

/// Runs one check; `Ok(None)` on success, `Ok(Some(reason))` on a mismatch.
fn run_check(f: &mut Fixture, check: &Check) -> crate::Result<Option<String>> {
    let fail = |cond: bool, msg: String| if cond { None } else { Some(msg) };
    Ok(match check {
        Check::Jacobi { status } => {
            let v = conditions::check_jacobi_seeded(&f.sys, f.profile.seed)?;
            fail(v.status == *status, format!("jacobi: expected {status}, got {}", v.status))
        }
        Check::Bernstein { status } => {
            let v = conditions::check_bernstein_seeded(&f.sys, f.profile.seed)?;
            fail(v.status == *status, format!("bernstein: expected {status}, got {}", v.status))
        }
        Check::ZeroCount { count } => {
            let z = f.zeros()?;
            let ok = z.total_multiplicity() == *count && z.warnings.is_empty();
            fail(ok, format!("zero count: expected {count}, got {} ({:?})", z.total_multiplicity(), z.warnings))
        }
        Check::MixedVolume { value } => {
            let mv = mixed_volume(&io::newton_polytopes(&f.sys)?)?;
            let want = BigRational::from_integer((*value).into());
            if mv != want {
                Some(format!("mixed volume: expected {value}, got {mv}"))
            } else {
                let z = f.zeros()?;
                fail(
                    z.total_multiplicity() as i64 == *value,
                    format!("torus zeros {} differ from mixed volume {value}", z.total_multiplicity()),
                )
            }
        }
        Check::Residue {
            q,
            method,
            value,
            tol,
            radius,
            mu,
        } => {
            let m = match method.as_str() {
                "local" => MethodArg::Local,
                "bm" => MethodArg::Bm,
                "pf" => MethodArg::Pf,
                other => return Err(crate::Error::Input(format!("unknown method '{other}'"))),
            };
            let qp = f.q(q)?;
            let toric = f.toric();
            let z = if m == MethodArg::Local { Some(f.zeros()?.clone()) } else { None };
            let r = compute_residue(&qp, &f.sys, m, *radius, mu.as_deref(), toric, z.as_ref())?;
            let mut msg = None;
            if !close(r.value, *value, *tol) {
                msg = Some(format!("residue of {q} by {method}: expected {value:?}, got {}", r.value));
            } else if m == MethodArg::Bm && r.kernel_deviation.unwrap_or(0.0) > crate::residues::bm::kernel_tolerance() {
                msg = Some(format!("kernel normalization off by {:e}", r.kernel_deviation.unwrap()));
            }
            msg
        }
        Check::Vanishing {
            pass,
            vacuous,
            count,
            witness,
            tol,
        } => {
            let rel = tol.unwrap_or(vanishing::VANISH_REL_TOL);
            let want_witness = witness.is_some();
            let toric = f.toric();
            let z = f.zeros()?.clone();
            let r = if toric {
                vanishing::verify_theorem2_with_tol(&f.sys, &f.polytopes()?, &z, &QSelection::Scan, want_witness, rel)?
            } else {
                vanishing::verify_theorem1_with_tol(&f.sys, &f.delta()?, &z, &QSelection::Scan, want_witness, rel)?
            };
            if r.pass != *pass {
                Some(format!("vanishing: expected pass={pass}, max |residue| {:.3e} vs tol {:.3e}", r.max_abs, r.tolerance))
            } else if vacuous.is_some_and(|v| v != r.vacuous) {
                Some(format!("vanishing: vacuous flag {}", r.vacuous))
            } else if count.is_some_and(|c| c != r.entries.len()) {
                Some(format!("vanishing: scanned {} monomials, expected {}", r.entries.len(), count.unwrap()))
            } else if let Some(w) = witness {
                let got = r.witness.as_ref().map(|x| Complex64::new(x.value[0], x.value[1]));
                fail(
                    got.is_some_and(|g| close(g, *w, 1e-8)),
                    format!("vanishing witness: expected {w:?}, got {got:?}"),
                )
            } else {
                None
            }
        }
        Check::CayleyBacharach { bound, confirmed } => {
            let space = match bound {
                Some(b) => CbSpace::Degree(*b),
                None => CbSpace::Interior(f.polytopes()?),
            };
            let z = f.zeros()?.clone();
            let r = vanishing::cayley_bacharach_check(&f.sys, &space, &z)?;
            fail(
                r.confirmed == *confirmed,
                format!("cayley-bacharach: expected {confirmed}, max violation {:.3e}", r.max_violation()),
            )
        }
        Check::Division { q, tol } => {
            let opts = DivisionOptions {
                tolerance: tol.unwrap_or(division::DIV_TOL),
                seed: f.profile.seed,
                ..DivisionOptions::default()
            };
            let qp = f.q(q)?;
            let d = f.delta()?;
            let z = f.zeros()?.clone();
            let c = division::build_division(&qp, &f.sys, &d, &z, opts)?;
            fail(c.verified(), format!("division of {q}: deviation {:.3e}", c.max_deviation))
        }
        Check::ToricDivision {
            q,
            remainder_zero,
            support_ok,
        } => {
            let qp = f.q(q)?;
            let opts = DivisionOptions {
                seed: f.profile.seed,
                ..DivisionOptions::default()
            };
            let r = division::verify_toric_division(&qp, &f.sys, &f.polytopes()?, opts)?;
            if !r.verified() {
                Some(format!("toric division of {q}: deviation {:.3e}", r.max_deviation))
            } else if remainder_zero.is_some_and(|want| want != r.remainder.is_zero()) {
                Some(format!("toric division of {q}: remainder {}", crate::poly::parse::serialize(&r.remainder)))
            } else {
                fail(
                    support_ok.map_or(true, |want| want == r.support_ok()),
                    format!("toric division of {q}: support violations {:?}", r.support_violations),
                )
            }
        }
        Check::Membership { q, verdict } => {
            let qp = f.q(q)?;
            let z = f.zeros()?.clone();
            let r = division::membership_test(&qp, &f.sys, &z)?;
            fail(r.verdict == *verdict, format!("membership of {q}: expected {verdict:?}, got {:?}", r.verdict))
        }
    })
}

fn load_json<T: for<'de> Deserialize<'de>>(path: &Path) -> std::result::Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureOutcome {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
    pub by_provenance: BTreeMap<String, usize>,
}

/// Runs one fixture directory. Never panics on malformed input: problems become failures.
pub fn run_fixture(dir: &Path) -> FixtureOutcome {
    let name = dir.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let mut outcome = FixtureOutcome {
        name,
        checks: 0,
        failures: Vec::new(),
        by_provenance: BTreeMap::new(),
    };
    let sys = match super::system(&dir.join("system.json")) {
        Ok(s) => s,
        Err(CliError(e)) => {
            outcome.failures.push(e);
            return outcome;
        }
    };
    let profile_path = dir.join("profile.json");
    let profile = if profile_path.exists() {
        match load_json::<ProfileFile>(&profile_path) {
            Ok(p) => p,
            Err(e) => {
                outcome.failures.push(e);
                return outcome;
            }
        }
    } else {
        ProfileFile::default()
    };
    let expect = match load_json::<ExpectFile>(&dir.join("expect.json")) {
        Ok(e) => e,
        Err(e) => {
            outcome.failures.push(e);
            return outcome;
        }
    };
    let mut fx = Fixture { sys, profile, zeros: None };
    for (i, entry) in expect.checks.iter().enumerate() {
        outcome.checks += 1;
        let Some(class) = provenance_class(&entry.provenance) else {
            outcome.failures.push(format!("check {i}: bad provenance tag '{}'", entry.provenance));
            continue;
        };
        *outcome.by_provenance.entry(class.to_string()).or_default() += 1;
        match run_check(&mut fx, &entry.check) {
            Ok(None) => {}
            Ok(Some(msg)) => outcome.failures.push(format!("check {i}: {msg}")),
            Err(e) => outcome.failures.push(format!("check {i}: error: {e}")),
        }
    }
    outcome
}

pub fn list(dir: &Path) -> std::result::Result<Vec<String>, CliError> {
    let rd = std::fs::read_dir(dir).map_err(|e| CliError(format!("{}: {e}", dir.display())))?;
    let mut names: Vec<String> = rd
        .filter_map(|e| e.ok())
        .filter(|e| e.path().join("system.json").exists())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    Ok(names)
}

pub fn run(dir: &Path, selection: Option<&[String]>, json: bool, out: &mut dyn Write) -> std::result::Result<i32, CliError> {
    let names = match selection {
        Some(s) => s.to_vec(),
        None => list(dir)?,
    };
    let mut outcomes = Vec::new();
    for name in &names {
        let path = dir.join(name);
        if !path.join("system.json").exists() {
            return Err(CliError(format!("{}: no such fixture", path.display())));
        }
        outcomes.push(run_fixture(&path));
    }
    let mut totals: BTreeMap<String, usize> = BTreeMap::new();
    for o in &outcomes {
        for (k, v) in &o.by_provenance {
            *totals.entry(k.clone()).or_default() += v;
        }
    }
    let failed = outcomes.iter().filter(|o| !o.failures.is_empty()).count();
    if json {
        let v = serde_json::json!({ "fixtures": outcomes, "by_provenance": totals, "failed": failed });
        let _ = writeln!(out, "{}", serde_json::to_string(&v).expect("JSON text"));
    } else {
        let w = names.iter().map(|n| n.len()).max().unwrap_or(0);
        for o in &outcomes {
            let tag = if o.failures.is_empty() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{tag}  {:<w$}  {} checks", o.name, o.checks);
            for f in &o.failures {
                let _ = writeln!(out, "        {f}");
            }
        }
        let counts: Vec<String> = totals.iter().map(|(k, v)| format!("{k} {v}")).collect();
        let _ = writeln!(out, "{} fixtures, {} failed; checks by provenance: {}", outcomes.len(), failed, counts.join(", "));
    }
    Ok(if failed == 0 { EXIT_PASS } else { EXIT_FAIL })
}
