mod common;

use common::*;
use globres::division::{
    admissible_mu, assemble_division, bezoutian_det, hefer_decompose, membership_test, toric_truncation_predicate, Membership,
};
use globres::newton::LatticePolytope;
use globres::poly::{rat, Mode, PolySystem};
use globres::zeros::solve;
use globres::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_system(seed: u64) -> PolySystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 1 + (seed % 3) as usize;
    PolySystem::new((0..n).map(|_| random_poly(&mut rng, n, 4, 4)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hefer_and_bezoutian_identities(seed in any::<u64>()) {
        let s = random_system(seed);
        let n = s.n();
        let h = hefer_decompose(&s).unwrap();
        let degs: Vec<i64> = s.equations().iter().map(|e| e.total_degree().unwrap()).collect();
        for j in 0..n {
            prop_assert!(h.row_defect(&s, j).unwrap().is_zero());
            for k in 0..n {
                let e = &h.entries[j][k];
                prop_assert!(e.is_zero() || e.total_degree().unwrap() < degs[j]);
            }
        }
        let bez = bezoutian_det(&h).unwrap();
        let bound = degs.iter().sum::<i64>() - n as i64;
        for (a, b, _) in bez.entries() {
            prop_assert!(a.iter().sum::<i64>() + b.iter().sum::<i64>() <= bound);
        }
        prop_assert_eq!(bez.diagonal().unwrap(), poly_det(&s.jacobian_matrix()));
    }
}

#[test]
fn reconstruction_on_fixtures() {
    let mut seen = 0;
    for f in all_fixtures() {
        let Some(d) = f.delta() else { continue };
        if f.sys.mode() != Mode::Ordinary {
            continue;
        }
        seen += 1;
        let z = solve(&f.sys).unwrap();
        let n = f.sys.n();
        for q in ["1", "X1^3 + 2*X1 - 1"] {
            let c = assemble_division(&p(q, n), &f.sys, &d, &z).unwrap_or_else(|e| panic!("{}: {e}", f.name));
            assert_eq!(c.samples, 64);
            assert!(c.max_deviation <= 1e-8, "{}: {}", f.name, c.max_deviation);
            assert!(c.exponent_constraint, "{}", f.name);
        }
    }
    assert!(seen >= 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn in_ideal_means_zero_remainder(s1 in any::<u64>(), s2 in any::<u64>()) {
        for name in ["four_corners", "generic_pair", "conic_six"] {
            let f = fixture(name);
            let z = solve(&f.sys).unwrap();
            let a1 = random_poly(&mut ChaCha8Rng::seed_from_u64(s1), 2, 2, 3);
            let a2 = random_poly(&mut ChaCha8Rng::seed_from_u64(s2), 2, 2, 3);
            let q = a1.try_mul(f.sys.equation(0)).unwrap().try_add(&a2.try_mul(f.sys.equation(1)).unwrap()).unwrap();
            let m = membership_test(&q, &f.sys, &z).unwrap();
            if m.verdict == Membership::InIdeal {
                let c = assemble_division(&q, &f.sys, &f.delta().unwrap(), &z).unwrap();
                let worst = c.terms.iter().filter(|t| t.mu.iter().all(|&x| x == 0)).map(|t| t.coefficient.norm()).fold(0.0, f64::max);
                prop_assert!(worst <= 1e-7, "{}: {}", name, worst);
            }
        }
    }
}

#[test]
fn membership_distinguishes_non_members() {
    let f = fixture("four_corners");
    let z = solve(&f.sys).unwrap();
    for q in ["X1", "X1*X2 + 1", "X2^3"] {
        assert_eq!(membership_test(&p(q, 2), &f.sys, &z).unwrap().verdict, Membership::NotInIdeal, "{q}");
    }
}

#[test]
fn truncation_is_finite() {
    for d in [[1, 1], [2, 3], [1, 4]] {
        for alpha in [[0, 0], [3, 1], [5, 5]] {
            let mus = admissible_mu(&alpha, 6, &delta(&d)).unwrap();
            let bound = alpha.iter().sum::<i64>() + 6 + 2;
            for mu in &mus {
                let w: i64 = mu.iter().zip(&d).map(|(&m, &x)| (m as i64 + 1) * x).sum();
                assert!(w <= bound);
            }
        }
    }
    assert_eq!(admissible_mu(&[0, 0], 2, &[rat(1, 1), rat(0, 1)]), Err(Error::NonpositiveDelta));

    let square = LatticePolytope::cube(&[-1, -1], &[1, 1]).unwrap();
    let deltas = vec![square.clone(), square];
    let q = LatticePolytope::cube(&[0, 0], &[2, 1]).unwrap();
    let last = (0..64u32).find(|&m| !toric_truncation_predicate(&q, &[1, 0], &[m, m], &deltas).unwrap());
    assert!(last.is_some());
    let corner = LatticePolytope::cube(&[0, 0], &[1, 1]).unwrap();
    assert!(toric_truncation_predicate(&q, &[0, 0], &[0, 0], &[corner.clone(), corner]).is_err());
}
