//! Degree-gated vanishing of total residues and the Cayley–Bacharach check.

mod cb;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::newton::{minkowski_sum_all, ContainMode, LatticePolytope};
use crate::poly::{Coefficient, Exponent, Mode, MultiPoly, PolySystem};
use crate::residues::{local_residues, toric_local_residues};
use crate::zeros::ZeroSet;

pub use cb::{cayley_bacharach_check, cayley_bacharach_points, CbReport, CbSpace, CbZero, CB_TOL, SVD_REL_TOL};

pub const SCAN_CAP: usize = 5000;
pub const VANISH_REL_TOL: f64 = 1e-8;

/// Which numerators to test.
#[derive(Debug, Clone)]
pub enum QSelection {
    Scan,
    List(Vec<MultiPoly>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonomialResidue {
    /// Exponent of the monomial, or `None` for an explicit non-monomial Q.
    pub exponent: Option<Vec<i64>>,
    pub label: String,
    pub value: [f64; 2],
    /// Largest |local residue| among the summands.
    pub local_max: f64,
    pub pass: bool,
}

impl MonomialResidue {
    pub fn abs(&self) -> f64 {
        Complex64::new(self.value[0], self.value[1]).norm()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub profile: String,
    pub bound: Option<i64>,
    pub entries: Vec<MonomialResidue>,
    /// Largest out-of-bound residue found, for sharpness.
    pub witness: Option<MonomialResidue>,
    pub tolerance: f64,
    pub max_abs: f64,
    pub vacuous: bool,
    pub pass: bool,
}

impl VanishingReport {
    fn assemble(profile: String, bound: Option<i64>, raw: Vec<(Option<Vec<i64>>, String, Vec<Complex64>)>, rel_tol: f64) -> Self {
        let local_max = raw
            .iter()
            .flat_map(|(_, _, t)| t.iter().map(|c| c.norm()))
            .fold(0.0f64, f64::max);
        let tolerance = rel_tol * (1.0 + local_max);
        let entries: Vec<MonomialResidue> = raw
            .into_iter()
            .map(|(e, l, t)| entry(e, l, &t, tolerance))
            .collect();
        let max_abs = entries.iter().map(|e| e.abs()).fold(0.0, f64::max);
        let vacuous = entries.is_empty();
        let pass = entries.iter().all(|e| e.pass);
        VanishingReport {
            profile,
            bound,
            entries,
            witness: None,
            tolerance,
            max_abs,
            vacuous,
            pass,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("profile {}\n", self.profile);
        if let Some(b) = self.bound {
            s += &format!("degree bound {b}\n");
        }
        s += &format!("tolerance {:.3e}\n", self.tolerance);
        let w = self.entries.iter().map(|e| e.label.len()).max().unwrap_or(1).max(8);
        for e in &self.entries {
            s += &format!(
                "  {:<w$}  {:>12.4e}  {}\n",
                e.label,
                e.abs(),
                if e.pass { "ok" } else { "FAIL" }
            );
        }
        if let Some(wit) = &self.witness {
            s += &format!("witness {} -> ({:.6}, {:.6})\n", wit.label, wit.value[0], wit.value[1]);
        }
        let verdict = match (self.pass, self.vacuous) {
            (true, true) => "pass (vacuous: nothing to scan)",
            (true, false) => "pass",
            _ => "fail",
        };
        s += &format!("verdict {verdict}\n");
        s
    }
}

fn entry(exponent: Option<Vec<i64>>, label: String, terms: &[Complex64], tol: f64) -> MonomialResidue {
    let v = crate::residues::bm::pairwise_sum(terms);
    MonomialResidue {
        exponent,
        label,
        value: [v.re, v.im],
        local_max: terms.iter().map(|t| t.norm()).fold(0.0, f64::max),
        pass: v.norm() <= tol,
    }
}

pub fn monomial_label(e: &[i64]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| if k == 1 { format!("X{}", i + 1) } else { format!("X{}^{}", i + 1, k) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Exponents β ∈ Nⁿ with |β| ≤ bound in graded-lex order.
pub fn monomials_up_to(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for d in 0..=bound.max(-1) {
        out.extend(monomials_of_degree(n, d));
    }
    out
}

/// Exponents of total degree exactly `d`, in descending lexicographic order.
pub fn monomials_of_degree(n: usize, d: i64) -> Vec<Vec<i64>> {
    if d < 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials_of_degree(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn monomial(n: usize, mode: Mode, e: &[i64]) -> MultiPoly {
    MultiPoly::monomial(n, mode, Exponent(e.to_vec()), Coefficient::from_int(1))
}

/// ⌊δ₁+⋯+δₙ⌋ − n − 1.
pub fn projective_bound(delta: &[BigRational]) -> i64 {
    let s: BigRational = delta.iter().fold(BigRational::zero(), |a, b| a + b);
    s.floor().to_integer().to_i64().unwrap_or(i64::MAX) - delta.len() as i64 - 1
}

type Evaluator<'a> = dyn Fn(&MultiPoly) -> Result<Vec<Complex64>> + Sync + 'a;

fn run_scan(
    list: Vec<(Option<Vec<i64>>, String, MultiPoly)>,
    eval: &Evaluator<'_>,
) -> Result<Vec<(Option<Vec<i64>>, String, Vec<Complex64>)>> {
    list.into_par_iter()
        .map(|(e, l, q)| Ok((e, l, eval(&q)?)))
        .collect()
}

/// The out-of-bound monomial with the largest total residue.
fn best_witness(cands: Vec<Vec<i64>>, n: usize, mode: Mode, eval: &Evaluator<'_>) -> Result<Option<MonomialResidue>> {
    let list = cands
        .into_iter()
        .take(SCAN_CAP)
        .map(|e| (Some(e.clone()), monomial_label(&e), monomial(n, mode, &e)))
        .collect();
    let raw = run_scan(list, eval)?;
    Ok(raw
        .into_iter()
        .map(|(e, l, t)| entry(e, l, &t, 0.0))
        .fold(None, |best: Option<MonomialResidue>, c| match best {
            Some(b) if b.abs() >= c.abs() => Some(b),
            _ => Some(c),
        }))
}

fn selection_list(
    sel: &QSelection,
    scan: impl FnOnce() -> Result<Vec<Vec<i64>>>,
    n: usize,
    mode: Mode,
) -> Result<Vec<(Option<Vec<i64>>, String, MultiPoly)>> {
    match sel {
        QSelection::Scan => {
            let exps = scan()?;
            if exps.len() > SCAN_CAP {
                return Err(Error::ScanTooLarge(exps.len()));
            }
            Ok(exps
                .into_iter()
                .map(|e| (Some(e.clone()), monomial_label(&e), monomial(n, mode, &e)))
                .collect())
        }
        QSelection::List(qs) => qs
            .iter()
            .map(|q| {
                if q.nvars() != n {
                    return Err(Error::NvarsMismatch { left: n, right: q.nvars() });
                }
                let support = q.support();
                let exp = if support.len() == 1 && q.coefficient(&support[0]).map(|c| c.is_one()) == Some(true) {
                    Some(support[0].clone())
                } else {
                    None
                };
                Ok((exp, crate::poly::parse::serialize(q), q.clone()))
            })
            .collect(),
    }
}

/// Checks Res[Q dX/P] = 0 for deg Q ≤ δ₁+⋯+δₙ−n−1.
pub fn verify_theorem1(
    sys: &PolySystem,
    delta: &[BigRational],
    zeros: &ZeroSet,
    sel: &QSelection,
    witness: bool,
) -> Result<VanishingReport> {
    verify_theorem1_with_tol(sys, delta, zeros, sel, witness, VANISH_REL_TOL)
}

pub fn verify_theorem1_with_tol(
    sys: &PolySystem,
    delta: &[BigRational],
    zeros: &ZeroSet,
    sel: &QSelection,
    witness: bool,
    rel_tol: f64,
) -> Result<VanishingReport> {
    let n = sys.n();
    if delta.len() != n {
        return Err(Error::NvarsMismatch { left: n, right: delta.len() });
    }
    let bound = projective_bound(delta);
    let list = selection_list(sel, || Ok(monomials_up_to(n, bound)), n, Mode::Ordinary)?;
    let eval = |q: &MultiPoly| local_residues(q, sys, zeros);
    let raw = run_scan(list, &eval)?;
    let profile = format!(
        "projective delta=({})",
        delta.iter().map(crate::poly::format_rational).collect::<Vec<_>>().join(",")
    );
    let mut report = VanishingReport::assemble(profile, Some(bound), raw, rel_tol);
    if witness {
        report.witness = best_witness(monomials_of_degree(n, bound.max(-1) + 1), n, Mode::Ordinary, &eval)?;
    }
    Ok(report)
}

/// Checks Res[Q dζ/(ζF)]_T = 0 for supp Q in the interior of δ₁+⋯+δₙ.
pub fn verify_theorem2(
    sys: &PolySystem,
    delta: &[LatticePolytope],
    zeros: &ZeroSet,
    sel: &QSelection,
    witness: bool,
) -> Result<VanishingReport> {
    verify_theorem2_with_tol(sys, delta, zeros, sel, witness, VANISH_REL_TOL)
}

pub fn verify_theorem2_with_tol(
    sys: &PolySystem,
    delta: &[LatticePolytope],
    zeros: &ZeroSet,
    sel: &QSelection,
    witness: bool,
    rel_tol: f64,
) -> Result<VanishingReport> {
    let n = sys.n();
    if delta.len() != n {
        return Err(Error::NvarsMismatch { left: n, right: delta.len() });
    }
    let sum = minkowski_sum_all(delta)?;
    if !sum.is_full_dimensional() {
        return Err(Error::DimensionDeficient);
    }
    let list = selection_list(sel, || Ok(sum.lattice_points(ContainMode::Interior)), n, Mode::Laurent)?;
    let eval = |q: &MultiPoly| toric_local_residues(&q.to_laurent(), sys, zeros);
    let raw = run_scan(list, &eval)?;
    let mut report = VanishingReport::assemble("toric".into(), None, raw, rel_tol);
    if witness {
        let boundary: Vec<Vec<i64>> = sum
            .lattice_points(ContainMode::Closed)
            .into_iter()
            .filter(|p| !sum.contains_int(p, ContainMode::Interior))
            .collect();
        report.witness = best_witness(boundary, n, Mode::Laurent, &eval)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse::parse, rat};
    use crate::zeros::{solve, solve_torus};

    fn sys(eqs: &[&str], mode: Mode) -> PolySystem {
        PolySystem::new(eqs.iter().map(|e| parse(e, eqs.len(), mode).unwrap()).collect()).unwrap()
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_up_to(2, 1), vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
        assert!(monomials_up_to(2, -1).is_empty());
        assert_eq!(monomials_up_to(3, 2).len(), 10);
        assert_eq!(monomial_label(&[1, 0, 2]), "X1*X3^2");
        assert_eq!(projective_bound(&[rat(2, 1), rat(2, 1)]), 1);
        assert_eq!(projective_bound(&[rat(1, 1), rat(1, 1)]), -1);
    }

    #[test]
    fn four_corners() {
        let s = sys(&["X1^2 - 1", "X2^2 - 1"], Mode::Ordinary);
        let z = solve(&s).unwrap();
        let r = verify_theorem1(&s, &[rat(2, 1), rat(2, 1)], &z, &QSelection::Scan, true).unwrap();
        assert!(r.pass && !r.vacuous);
        assert_eq!(r.entries.len(), 3);
        let w = r.witness.unwrap();
        assert_eq!(w.exponent, Some(vec![1, 1]));
        assert!((w.value[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_scan_is_vacuous() {
        let s = sys(&["X1*X2", "X1*X2 + X1 + X2 + 1"], Mode::Ordinary);
        let z = solve(&s).unwrap();
        let r = verify_theorem1(&s, &[rat(1, 1), rat(1, 1)], &z, &QSelection::Scan, false).unwrap();
        assert!(r.pass && r.vacuous && r.entries.is_empty());
    }

    #[test]
    fn univariate_degree_five() {
        let s = sys(&["X1^5 - 3*X1^4 + X1^2 - 7*X1 + 2"], Mode::Ordinary);
        let z = solve(&s).unwrap();
        let r = verify_theorem1(&s, &[rat(5, 1)], &z, &QSelection::Scan, true).unwrap();
        assert!(r.pass);
        assert_eq!(r.entries.len(), 4);
        assert!((r.witness.unwrap().value[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn explicit_list_and_failure() {
        let s = sys(&["X1^2 - 1", "X2^2 - 1"], Mode::Ordinary);
        let z = solve(&s).unwrap();
        let qs = vec![parse("X1*X2", 2, Mode::Ordinary).unwrap(), parse("X1 + 2*X2", 2, Mode::Ordinary).unwrap()];
        let r = verify_theorem1(&s, &[rat(2, 1), rat(2, 1)], &z, &QSelection::List(qs), false).unwrap();
        assert!(!r.pass);
        assert!(!r.entries[0].pass && r.entries[1].pass);
        assert_eq!(r.entries[1].exponent, None);
    }

    #[test]
    fn toric_univariate() {
        let s = sys(&["X1 + 3 + X1^-1"], Mode::Laurent);
        let z = solve_torus(&s).unwrap();
        let delta = vec![crate::newton::newton_polytope(s.equation(0)).unwrap()];
        let r = verify_theorem2(&s, &delta, &z, &QSelection::Scan, true).unwrap();
        assert!(r.pass);
        assert_eq!(r.entries.len(), 1);
        assert!((r.witness.unwrap().abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn toric_needs_full_dimension() {
        let s = sys(&["X1 + 3 + X1^-1", "X2 - 2"], Mode::Laurent);
        let z = solve_torus(&s).unwrap();
        let seg = LatticePolytope::from_integer_points(2, &[vec![-1, 0], vec![1, 0]]).unwrap();
        assert_eq!(
            verify_theorem2(&s, &[seg.clone(), seg], &z, &QSelection::Scan, false),
            Err(Error::DimensionDeficient)
        );
    }
}
