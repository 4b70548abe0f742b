mod common;

use common::*;
use globres::conditions::{check_bernstein, check_jacobi, Status};
use globres::newton::{mixed_volume, newton_polytope};
use globres::poly::{Mode, MultiPoly, PolySystem};
use globres::zeros::{solve, solve_torus, ZeroSet};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn residual_ok(sys: &PolySystem, z: &ZeroSet) -> Result<(), String> {
    let bound = 1e-10 * (1.0 + sys.max_abs_coeff());
    for r in &z.zeros {
        let v: f64 = sys.evaluate(&r.point).unwrap().iter().map(|c| c.norm()).fold(0.0, f64::max);
        if v > bound {
            return Err(format!("residual {v:e} at {:?}", r.point));
        }
    }
    Ok(())
}

fn conjugation_closed(z: &ZeroSet) -> bool {
    let pts = z.points();
    pts.iter().all(|p| {
        let c: Vec<Complex64> = p.iter().map(|x| x.conj()).collect();
        pts.iter().any(|q| q.iter().zip(&c).all(|(a, b)| (a - b).norm() <= 1e-6 * (1.0 + b.norm())))
    })
}

fn random_system(seed: u64, deg: i64) -> PolySystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // a constant term keeps zeros off the coordinate axes almost surely
    let seven = p("7", 2);
    let eqs: Vec<MultiPoly> = (0..2)
        .map(|_| loop {
            let e = random_poly(&mut rng, 2, deg, 5).try_add(&seven).unwrap();
            if !e.is_zero() {
                break e;
            }
        })
        .collect();
    PolySystem::new(eqs).unwrap()
}

#[test]
fn bezout_count_on_jacobi_fixtures() {
    let mut seen = 0;
    for f in all_fixtures() {
        if f.sys.mode() != Mode::Ordinary || check_jacobi(&f.sys).unwrap().status != Status::Holds {
            continue;
        }
        seen += 1;
        let bezout: i64 = f.sys.equations().iter().map(|e| e.total_degree().unwrap()).product();
        assert_eq!(solve(&f.sys).unwrap().total_multiplicity() as i64, bezout, "{}", f.name);
    }
    assert!(seen >= 3);
}

#[test]
fn bernstein_count_on_toric_fixtures() {
    let mut seen = 0;
    for f in all_fixtures() {
        if f.sys.mode() != Mode::Laurent || f.sys.n() != 2 || check_bernstein(&f.sys).unwrap().status != Status::Holds {
            continue;
        }
        seen += 1;
        let polys: Vec<_> = f.sys.equations().iter().map(|e| newton_polytope(e).unwrap()).collect();
        let mv = mixed_volume(&polys).unwrap().to_integer().to_usize().unwrap();
        assert_eq!(solve_torus(&f.sys).unwrap().total_multiplicity(), mv, "{}", f.name);
    }
    assert!(seen >= 3);
}

#[test]
fn fixture_zeros_have_small_residuals() {
    for f in all_fixtures() {
        let z = if f.sys.mode() == Mode::Laurent { solve_torus(&f.sys) } else { solve(&f.sys) }.unwrap();
        residual_ok(&f.sys, &z).unwrap_or_else(|e| panic!("{}: {e}", f.name));
        assert!(conjugation_closed(&z), "{}", f.name);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_systems(seed in any::<u64>(), deg in 1i64..=3) {
        let s = random_system(seed, deg);
        let Ok(z) = solve(&s) else { return Ok(()) };
        prop_assert!(residual_ok(&s, &z).is_ok(), "{:?}", residual_ok(&s, &z));
        prop_assert!(conjugation_closed(&z));
        let lifted = PolySystem::new(s.equations().iter().map(|e| e.to_laurent()).collect()).unwrap();
        let t = solve_torus(&lifted).unwrap();
        if z.points().iter().all(|pt| pt.iter().all(|c| c.norm() > 1e-6)) {
            prop_assert_eq!(t.total_multiplicity(), z.total_multiplicity());
            for pt in t.points() {
                prop_assert!(z.points().iter().any(|q| q.iter().zip(&pt).all(|(a, b)| (a - b).norm() <= 1e-6 * (1.0 + b.norm()))));
            }
        }
    }
}
