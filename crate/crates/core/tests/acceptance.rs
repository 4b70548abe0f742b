//! Acceptance criteria. One PASS/FAIL line per criterion; exits nonzero if any fail.

mod common;

use std::time::{Duration, Instant};

use common::*;
use globres::conditions::{self, PropernessProfile, Status};
use globres::division::{self, Membership};
use globres::newton::{mixed_volume, newton_polytope};
use globres::poly::{cr, upoly, Coefficient, Mode, MultiPoly};
use globres::residues::{self, QuadOptions};
use globres::vanishing::{self, cayley_bacharach_check, cayley_bacharach_points, CbSpace, QSelection};
use globres::zeros::{solve, solve_torus};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(elapsed: Duration, limit: f64) -> bool {
    elapsed.as_secs_f64() < limit
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_vanish = 0.0f64;
    let mut worst_sharp = 0.0f64;
    let mut count = 0;
    while count < 50 {
        let d = 3 + (count % 6) as i64;
        let mut c: Vec<_> = (0..d).map(|_| cr(rng.gen_range(-9..=9))).collect();
        c.push(cr(1));
        if upoly::degree(&upoly::gcd(&c, &upoly::derivative(&c))) != Some(0) {
            continue;
        }
        let sys = globres::poly::PolySystem::new(vec![MultiPoly::from_dense_exact(&c)]).unwrap();
        for k in 0..d {
            let q = MultiPoly::monomial(1, Mode::Ordinary, globres::poly::Exponent(vec![k]), Coefficient::from_int(1));
            let r = residues::global_residue_exact(&q, &sys).unwrap();
            if k == d - 1 {
                worst_sharp = worst_sharp.max((r.value - one()).norm());
            } else {
                worst_vanish = worst_vanish.max(r.value.norm());
            }
        }
        count += 1;
    }
    let t = start.elapsed();
    outcome(
        worst_vanish <= 1e-9 && worst_sharp <= 1e-9 && within(t, 2.0),
        format!("max |Res| {worst_vanish:.1e}, max |Res X^(d-1) - 1| {worst_sharp:.1e}, {:.2}s", t.as_secs_f64()),
    )
}

fn criterion2() -> Outcome {
    let start = Instant::now();
    let s = sys(&["X1^2 - 1", "X2^2 - 1"]);
    let z = solve(&s).unwrap();
    let rep = vanishing::verify_theorem1_with_tol(&s, &delta(&[2, 2]), &z, &QSelection::Scan, true, 1e-10).unwrap();
    let q = p("X1*X2", 2);
    let local = residues::global_residue(&q, &s, &z).unwrap().value;
    let bm = residues::global_residue_bm(&q, &s, 3.0, QuadOptions::default()).unwrap().value;
    let t = start.elapsed();
    let dl = (local - one()).norm();
    let db = (bm - one()).norm();
    outcome(
        rep.pass && !rep.vacuous && dl <= 1e-10 && db <= 1e-3 && within(t, 30.0),
        format!(
            "scan {} monomials pass={}, local |X1X2 - 1| {dl:.1e}, BM |X1X2 - 1| {db:.1e}, {:.2}s",
            rep.entries.len(),
            rep.pass,
            t.as_secs_f64()
        ),
    )
}

fn criterion3() -> Outcome {
    let start = Instant::now();
    let s = fixture("example_2_1").sys;
    let j = conditions::check_jacobi_seeded(&s, 0).unwrap();
    let jacobi_ok = j.status == Status::Fails && j.witness.is_some();
    let prof = PropernessProfile::projective(delta(&[1, 1]), 10.0);
    let f10 = conditions::estimate_properness(&s, &prof).unwrap().0.floor.unwrap();
    let f100 = conditions::estimate_properness(&s, &prof.with_radius(100.0)).unwrap().0.floor.unwrap();
    let proper_ok = (f10 - f100).abs() <= 0.5 * f10.max(f100) && f10.min(f100) > 1e-3;
    let sweep = conditions::properness_sweep(&s, &PropernessProfile::projective(delta(&[2, 2]), 10.0), &[10.0, 100.0, 1000.0]).unwrap();
    let decay_ok = sweep.decay_per_decade.iter().all(|&d| d >= 10.0);
    let t = start.elapsed();
    outcome(
        jacobi_ok && proper_ok && decay_ok && within(t, 10.0),
        format!(
            "jacobi {} (witness {}), (1,1) floors {f10:.3e}/{f100:.3e}, (2,2) decay per decade {:?}, {:.2}s",
            j.status,
            j.witness.is_some(),
            sweep.decay_per_decade.iter().map(|d| format!("{d:.2}")).collect::<Vec<_>>(),
            t.as_secs_f64()
        ),
    )
}

fn criterion4() -> Outcome {
    let start = Instant::now();
    let qs = ["1", "X1", "X1^2", "X1^3 + 2"];
    let qs2 = ["1", "X1", "X2", "X1*X2", "X1^2*X2 - 3*X2^2", "X1^2*X2^2"];
    let mut used = Vec::new();
    let mut worst_gap = 0.0f64;
    let mut worst_kernel = 0.0f64;
    let mut pass = true;
    for f in all_fixtures() {
        let n = f.sys.n();
        if f.sys.mode() != Mode::Ordinary || n > 2 {
            continue;
        }
        let z = solve(&f.sys).unwrap();
        if !z.all_simple() {
            continue;
        }
        used.push(f.name.clone());
        let r = residues::suggest_radius(&z);
        for q in if n == 1 { &qs[..] } else { &qs2[..] } {
            let q = p(q, n);
            let local = residues::global_residue(&q, &f.sys, &z).unwrap();
            let bm = residues::global_residue_bm(&q, &f.sys, r, QuadOptions::default()).unwrap();
            let gap = (bm.value - local.value).norm();
            worst_gap = worst_gap.max(gap);
            if gap > (10.0 * bm.error_bound).max(1e-3) {
                pass = false;
            }
            let k = bm.kernel_deviation.unwrap_or(f64::INFINITY);
            worst_kernel = worst_kernel.max(k);
            if k > 1e-12 {
                pass = false;
            }
        }
    }
    let t = start.elapsed();
    outcome(
        pass && !used.is_empty() && within(t, 60.0),
        format!("fixtures {used:?}, max |BM - local| {worst_gap:.1e}, max kernel deviation {worst_kernel:.1e}, {:.2}s", t.as_secs_f64()),
    )
}

fn criterion5() -> Outcome {
    let cases = [("four_corners", "X1*X2"), ("quintic", "X1^4"), ("generic_pair", "X1 + X2^2")];
    let mut worst = 0.0f64;
    let mut pass = true;
    for (name, q) in cases {
        let f = fixture(name);
        let q = p(q, f.sys.n());
        let base = residues::global_residue(&q, &f.sys, &solve(&f.sys).unwrap()).unwrap().value;
        for n in [2, 3] {
            let (q2, s2) = residues::reduce_by_power_substitution(&q, &f.sys, n).unwrap();
            let v = residues::global_residue(&q2, &s2, &solve(&s2).unwrap()).unwrap().value;
            let rel = (v - base).norm() / base.norm();
            worst = worst.max(rel);
            pass &= rel <= 1e-9;
        }
    }
    outcome(pass, format!("three fixtures, N in {{2,3}}, max relative gap {worst:.1e}"))
}

fn criterion6() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for name in ["torus_linear", "torus_mv2"] {
        let f = fixture(name);
        let b = conditions::check_bernstein(&f.sys).unwrap().status;
        let polys: Vec<_> = f.sys.equations().iter().map(|e| newton_polytope(e).unwrap()).collect();
        let mv = mixed_volume(&polys).unwrap();
        let count = solve_torus(&f.sys).unwrap().total_multiplicity();
        let ok = b == Status::Holds && mv.is_integer() && mv.to_integer().to_usize() == Some(count);
        pass &= ok;
        notes.push(format!("{name}: bernstein {b}, MV {mv}, zeros {count}"));
    }
    for (name, tol) in [("torus_quadratic", 1e-8), ("example_2_2", 1e-6)] {
        let f = fixture(name);
        let deltas = f
            .polytopes()
            .unwrap_or_else(|| f.sys.equations().iter().map(|e| newton_polytope(e).unwrap()).collect());
        let z = solve_torus(&f.sys).unwrap();
        let rep = vanishing::verify_theorem2_with_tol(&f.sys, &deltas, &z, &QSelection::Scan, false, tol).unwrap();
        pass &= rep.pass && !rep.vacuous;
        notes.push(format!("{name}: {} monomials, max {:.1e}, pass {}", rep.entries.len(), rep.max_abs, rep.pass));
    }
    outcome(pass, notes.join("; "))
}

fn criterion7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut algebra_ok = true;
    for i in 0..200 {
        let n = 1 + i % 3;
        let s = globres::poly::PolySystem::new((0..n).map(|_| random_poly(&mut rng, n, 4, 4)).collect()).unwrap();
        let h = division::hefer_decompose(&s).unwrap();
        let degs: Vec<i64> = s.equations().iter().map(|e| e.total_degree().unwrap()).collect();
        for j in 0..n {
            algebra_ok &= h.row_defect(&s, j).unwrap().is_zero();
            for k in 0..n {
                let e = &h.entries[j][k];
                algebra_ok &= e.is_zero() || e.total_degree().unwrap() <= degs[j] - 1;
            }
        }
        let bez = division::bezoutian_det(&h).unwrap();
        let bound: i64 = degs.iter().sum::<i64>() - n as i64;
        algebra_ok &= bez.entries().is_empty() || bez.max_total_degree() <= bound;
        algebra_ok &= bez.diagonal().unwrap() == poly_det(&s.jacobian_matrix());
    }

    let mut worst = 0.0f64;
    let mut reconstruct_ok = true;
    let mut used = Vec::new();
    for f in all_fixtures() {
        let Some(d) = f.delta() else { continue };
        if f.sys.mode() != Mode::Ordinary {
            continue;
        }
        let z = solve(&f.sys).unwrap();
        let mut qs = vec!["1".to_string()];
        qs.extend(f.checks("division").iter().map(|c| c["q"].as_str().unwrap().to_string()));
        for q in &qs {
            match division::assemble_division(&p(q, f.sys.n()), &f.sys, &d, &z) {
                Ok(c) => worst = worst.max(c.max_deviation),
                Err(_) => reconstruct_ok = false,
            }
        }
        used.push(f.name.clone());
    }

    let corners = fixture("four_corners");
    let cz = solve(&corners.sys).unwrap();
    let cert = division::assemble_division(&p("1", 2), &corners.sys, &delta(&[2, 2]), &cz).unwrap();
    let nonzero: Vec<_> = cert.terms.iter().filter(|t| t.coefficient.norm() > 1e-12).collect();
    let trace_ok = nonzero.len() == 1
        && nonzero[0].beta == vec![0, 0]
        && nonzero[0].mu == vec![0, 0]
        && (nonzero[0].coefficient - one()).norm() <= 1e-12
        && cert.to_json().remainder == "1";

    let mut member_ok = true;
    for c in corners.checks("membership") {
        let got = division::membership_test(&p(c["q"].as_str().unwrap(), 2), &corners.sys, &cz).unwrap().verdict;
        let want: Membership = serde_json::from_value(c["verdict"].clone()).unwrap();
        member_ok &= got == want;
    }
    let t = start.elapsed();
    outcome(
        algebra_ok && reconstruct_ok && trace_ok && member_ok,
        format!(
            "200 random systems algebra {algebra_ok}; reconstruction on {used:?} max deviation {worst:.1e}; closed loop {trace_ok}; membership {member_ok}; {:.2}s",
            t.as_secs_f64()
        ),
    )
}

fn criterion8() -> Outcome {
    let f = fixture("conic_six");
    let z = solve(&f.sys).unwrap();
    let rep = cayley_bacharach_check(&f.sys, &CbSpace::Degree(2), &z).unwrap();
    let mut pts = z.points();
    // shifting X1 would keep the point on X2² − 1 = 0
    pts[0][1] += Complex64::new(0.1, 0.0);
    let monomials = CbSpace::Degree(2).exponents(2).unwrap();
    let moved = cayley_bacharach_points(&pts, &monomials).unwrap();
    let v = moved.max_violation();
    outcome(
        rep.confirmed && !moved.confirmed && v > 1e-3,
        format!("conic confirmed {}, perturbed violation {v:.3e}", rep.confirmed),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("one-variable vanishing and sharpness", criterion1),
        ("four-corner scan and witness", criterion2),
        ("Example 2.1 properness", criterion3),
        ("BM vs local sum", criterion4),
        ("change of basis", criterion5),
        ("Bernstein counts and toric vanishing", criterion6),
        ("division engine", criterion7),
        ("Cayley-Bacharach", criterion8),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !o.pass {
            failed += 1;
        }
        println!("criterion {}: {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed, {:.1}s", criteria.len() - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
