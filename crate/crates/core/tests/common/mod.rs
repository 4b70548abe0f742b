#![allow(dead_code)]

use std::path::{Path, PathBuf};

use globres::cli::io;
use globres::newton::LatticePolytope;
use globres::poly::parse::parse;
use globres::poly::{rat, Coefficient, Mode, MultiPoly, PolySystem};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

pub fn p(s: &str, n: usize) -> MultiPoly {
    parse(s, n, Mode::Ordinary).unwrap()
}

pub fn lp(s: &str, n: usize) -> MultiPoly {
    parse(s, n, Mode::Laurent).unwrap()
}

pub fn sys(eqs: &[&str]) -> PolySystem {
    PolySystem::new(eqs.iter().map(|e| p(e, eqs.len())).collect()).unwrap()
}

pub fn lsys(eqs: &[&str]) -> PolySystem {
    PolySystem::new(eqs.iter().map(|e| lp(e, eqs.len())).collect()).unwrap()
}

pub fn delta(d: &[i64]) -> Vec<BigRational> {
    d.iter().map(|&x| rat(x, 1)).collect()
}

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub struct Fixture {
    pub name: String,
    pub sys: PolySystem,
    pub profile: serde_json::Value,
    pub expect: serde_json::Value,
}

impl Fixture {
    pub fn delta(&self) -> Option<Vec<BigRational>> {
        let d = self.profile.get("delta")?.as_array()?;
        io::parse_rationals(&d.iter().map(|v| v.as_str().unwrap().to_string()).collect::<Vec<_>>().join(",")).ok()
    }

    pub fn polytopes(&self) -> Option<Vec<LatticePolytope>> {
        let v = self.profile.get("polytopes")?.clone();
        let list: Vec<globres::newton::PolytopeJson> = serde_json::from_value(v).ok()?;
        list.iter().map(|p| p.to_polytope()).collect::<globres::Result<_>>().ok()
    }

    /// Expected checks of one kind.
    pub fn checks(&self, kind: &str) -> Vec<serde_json::Value> {
        self.expect["checks"]
            .as_array()
            .map(|a| a.iter().filter(|c| c["check"] == kind).cloned().collect())
            .unwrap_or_default()
    }
}

pub fn fixture(name: &str) -> Fixture {
    let dir = fixtures_dir().join(name);
    let read = |f: &str| -> serde_json::Value {
        std::fs::read_to_string(dir.join(f))
            .ok()
            .and_then(|t| serde_json::from_str(&t).ok())
            .unwrap_or(serde_json::Value::Null)
    };
    Fixture {
        name: name.to_string(),
        sys: io::load_system(&dir.join("system.json")).unwrap(),
        profile: read("profile.json"),
        expect: read("expect.json"),
    }
}

pub fn all_fixtures() -> Vec<Fixture> {
    let mut names: Vec<String> = std::fs::read_dir(fixtures_dir())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().join("system.json").exists())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names.iter().map(|n| fixture(n)).collect()
}

/// Random ordinary polynomial with integer coefficients and total degree ≤ `deg`.
pub fn random_poly<R: Rng>(rng: &mut R, n: usize, deg: i64, max_terms: usize) -> MultiPoly {
    loop {
        let k = rng.gen_range(1..=max_terms);
        let terms: Vec<(Vec<i64>, Coefficient)> = (0..k)
            .map(|_| {
                let mut e = vec![0i64; n];
                let mut left = rng.gen_range(0..=deg);
                for x in e.iter_mut() {
                    let t = rng.gen_range(0..=left);
                    *x = t;
                    left -= t;
                }
                (e, Coefficient::from_int(rng.gen_range(-5..=5)))
            })
            .collect();
        let q = MultiPoly::from_terms(n, Mode::Ordinary, terms).unwrap();
        if !q.is_zero() {
            return q;
        }
    }
}

/// Proptest strategy for ordinary polynomials with small rational coefficients.
pub fn poly_strategy(n: usize, deg: i64, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0..=deg, n), -6i64..=6, 1i64..=3), 0..=max_terms).prop_map(move |ts| {
        MultiPoly::from_terms(n, Mode::Ordinary, ts.into_iter().map(|(e, a, b)| (e, Coefficient::from_ratio(a, b)))).unwrap()
    })
}

/// Laurent variant with exponents in [−deg, deg].
pub fn laurent_strategy(n: usize, deg: i64, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(-deg..=deg, n), -6i64..=6), 0..=max_terms).prop_map(move |ts| {
        MultiPoly::from_terms(n, Mode::Laurent, ts.into_iter().map(|(e, a)| (e, Coefficient::from_int(a)))).unwrap()
    })
}

/// Exact determinant of a polynomial matrix by cofactor expansion.
pub fn poly_det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let n = m[0][0].nvars();
    let mut acc = MultiPoly::zero(n, m[0][0].mode());
    for col in 0..m.len() {
        let minor: Vec<Vec<MultiPoly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != col).map(|(_, x)| x.clone()).collect())
            .collect();
        let t = m[0][col].try_mul(&poly_det(&minor)).unwrap();
        acc = if col % 2 == 0 { acc.try_add(&t) } else { acc.try_sub(&t) }.unwrap();
    }
    acc
}
