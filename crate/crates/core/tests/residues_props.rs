mod common;

use common::*;
use globres::poly::{Coefficient, Mode, MultiPoly, PolySystem};
use globres::residues::{self, QuadOptions};
use globres::zeros::{solve, ZeroSet};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Ordinary fixtures with only simple zeros.
fn simple_fixtures() -> Vec<(Fixture, ZeroSet)> {
    all_fixtures()
        .into_iter()
        .filter(|f| f.sys.mode() == Mode::Ordinary)
        .filter_map(|f| {
            let z = solve(&f.sys).ok()?;
            z.all_simple().then_some((f, z))
        })
        .collect()
}

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * (1.0 + a.norm().max(b.norm()))
}

#[test]
fn methods_agree_on_fixtures() {
    for (f, z) in simple_fixtures() {
        let n = f.sys.n();
        let r = residues::suggest_radius(&z);
        for q in ["1", "X1", "X1^2 + 2"] {
            let q = p(q, n);
            let local = residues::global_residue(&q, &f.sys, &z).unwrap();
            let bm = residues::global_residue_bm(&q, &f.sys, r, QuadOptions::default()).unwrap();
            assert!(bm.error_bound.is_finite());
            let gap = (local.value - bm.value).norm();
            assert!(gap <= (10.0 * bm.error_bound).max(1e-3), "{}: {} vs {}", f.name, local.value, bm.value);
            assert!(bm.kernel_deviation.unwrap() <= 1e-12, "{}", f.name);
            if n == 1 || residues::is_separable(&f.sys) {
                let pf = residues::powered_global_residue(&q, &f.sys, &vec![0; n], residues::PoweredMethod::Exact).unwrap();
                assert!(close(pf.value, local.value, 1e-10), "{}", f.name);
            }
        }
    }
}

#[test]
fn orientation_calibration() {
    let s = sys(&["X1 - 1/2", "X2 + 1/3"]);
    let q = p("X1^2*X2 + 3*X2 - 1", 2);
    let want = Complex64::new(0.25 * (-1.0 / 3.0) - 1.0 - 1.0, 0.0);
    let bm = residues::global_residue_bm(&q, &s, 2.0, QuadOptions::default()).unwrap();
    assert!((bm.value - want).norm() <= 1e-10, "{}", bm.value);
}

#[test]
fn change_of_basis_on_fixtures() {
    for (f, z) in simple_fixtures() {
        let n = f.sys.n();
        let q = p(if n == 1 { "X1^3 + X1" } else { "X1^2*X2 + X2 + 1" }, n);
        let base = residues::global_residue(&q, &f.sys, &z).unwrap().value;
        for k in [2, 3] {
            let (q2, s2) = residues::reduce_by_power_substitution(&q, &f.sys, k).unwrap();
            let z2 = solve(&s2).unwrap();
            let v = if z2.all_simple() {
                residues::global_residue(&q2, &s2, &z2).unwrap().value
            } else if n == 1 || residues::is_separable(&s2) {
                residues::powered_global_residue(&q2, &s2, &vec![0; n], residues::PoweredMethod::Exact).unwrap().value
            } else {
                // multiple zeros off the separable path: a tight sphere and finer nodes
                let opts = QuadOptions { theta_nodes: 48, phi_nodes: 96 };
                residues::global_residue_bm(&q2, &s2, 1.0 + z2.max_abs_coordinate() * 2f64.sqrt(), opts).unwrap().value
            };
            assert!((v - base).norm() <= 1e-9 * base.norm().max(1.0), "{} N={k}: {v} vs {base}", f.name);
        }
    }
}

fn random_q(seed: u64, n: usize) -> MultiPoly {
    random_poly(&mut ChaCha8Rng::seed_from_u64(seed), n, 3, 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn linearity(s1 in any::<u64>(), s2 in any::<u64>(), a in -5i64..=5, b in -5i64..=5) {
        for (f, z) in simple_fixtures() {
            let n = f.sys.n();
            let (q1, q2) = (random_q(s1, n), random_q(s2, n));
            let combo = q1.scale(&Coefficient::from_int(a)).unwrap().try_add(&q2.scale(&Coefficient::from_int(b)).unwrap()).unwrap();
            let res = |q: &MultiPoly| residues::global_residue(q, &f.sys, &z).unwrap().value;
            let want = res(&q1) * a as f64 + res(&q2) * b as f64;
            prop_assert!(close(res(&combo), want, 1e-10), "{}: {} vs {}", f.name, res(&combo), want);
        }
    }

    #[test]
    fn bm_linearity(s1 in any::<u64>(), a in -5i64..=5) {
        let f = fixture("four_corners");
        let q1 = random_q(s1, 2);
        let q2 = p("X1*X2", 2);
        let combo = q1.scale(&Coefficient::from_int(a)).unwrap().try_add(&q2).unwrap();
        let bm = |q: &MultiPoly| residues::global_residue_bm(q, &f.sys, 3.0, QuadOptions::default()).unwrap().value;
        let want = bm(&q1) * a as f64 + bm(&q2);
        prop_assert!(close(bm(&combo), want, 1e-10));
    }

    #[test]
    fn swapping_equations_negates_local_residues(seed in any::<u64>()) {
        for (f, z) in simple_fixtures() {
            if f.sys.n() < 2 {
                continue;
            }
            let q = random_q(seed, 2);
            let swapped = f.sys.swap(0, 1);
            let a = residues::local_residues(&q, &f.sys, &z).unwrap();
            let b = residues::local_residues(&q, &swapped, &z).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!(close(*x, -*y, 1e-12));
            }
        }
    }

    #[test]
    fn ideal_members_have_zero_residue(s1 in any::<u64>(), s2 in any::<u64>(), alpha in (0i64..=2, 0i64..=2)) {
        for (f, z) in simple_fixtures() {
            if f.sys.n() != 2 {
                continue;
            }
            let (a1, a2) = (random_q(s1, 2), random_q(s2, 2));
            let member = a1.try_mul(f.sys.equation(0)).unwrap().try_add(&a2.try_mul(f.sys.equation(1)).unwrap()).unwrap();
            let q = member.mul_monomial(&[alpha.0, alpha.1]).unwrap();
            let v = residues::global_residue(&q, &f.sys, &z).unwrap().value;
            prop_assert!(v.norm() <= 1e-9, "{}: {}", f.name, v);
        }
    }
}

#[test]
fn powered_local_matches_exact_on_separable_systems() {
    let s: PolySystem = fixture("conic_six").sys;
    let z = solve(&s).unwrap();
    for mu in [[1u32, 0], [0, 2], [2, 1]] {
        for q in ["1", "X1^4*X2", "X1^2*X2^3 + X2"] {
            let q = p(q, 2);
            let exact = residues::powered_global_residue(&q, &s, &mu, residues::PoweredMethod::Exact).unwrap().value;
            let local = residues::powered_global_residue_local(&q, &s, &mu, &z).unwrap().value;
            assert!(close(exact, local, 1e-10), "{mu:?}: {exact} vs {local}");
        }
    }
}
