//! Local, global, toric and powered residues.

pub mod bm;
pub mod exact;
pub mod series;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{cr_to_c64, ComplexRational, Mode, MultiPoly, PolySystem};
use crate::zeros::{ZeroRecord, ZeroSet};

pub use bm::QuadOptions;

const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    LocalSum,
    PartialFractions,
    BochnerMartinelli,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::LocalSum => "local_sum",
            Method::PartialFractions => "partial_fractions",
            Method::BochnerMartinelli => "bochner_martinelli",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueValue {
    pub value: Complex64,
    /// Infinite when no estimate is available.
    pub error_bound: f64,
    pub method: Method,
    pub zeros_used: Option<usize>,
    pub nodes: Option<usize>,
    /// The exact value, when the method produced one.
    pub exact: Option<ComplexRational>,
    /// For quadrature: largest |⟨s,P⟩ − 1| over the nodes.
    pub kernel_deviation: Option<f64>,
}

impl ResidueValue {
    fn local(value: Complex64, terms: &[Complex64]) -> Self {
        let size: f64 = terms.iter().map(|t| t.norm()).sum();
        ResidueValue {
            value,
            error_bound: 1e-13 * (1.0 + size),
            method: Method::LocalSum,
            zeros_used: Some(terms.len()),
            nodes: None,
            exact: None,
            kernel_deviation: None,
        }
    }

    fn exact(v: ComplexRational) -> Self {
        ResidueValue {
            value: cr_to_c64(&v),
            error_bound: 0.0,
            method: Method::PartialFractions,
            zeros_used: None,
            nodes: None,
            exact: Some(v),
            kernel_deviation: None,
        }
    }

    pub fn to_json(&self) -> ResidueJson {
        ResidueJson {
            value: [self.value.re, self.value.im],
            error: if self.error_bound.is_finite() {
                Some(self.error_bound)
            } else {
                None
            },
            method: self.method,
            exact: self.exact.as_ref().map(|c| {
                [
                    crate::poly::format_rational(&c.re),
                    crate::poly::format_rational(&c.im),
                ]
            }),
            nodes: self.nodes,
            zeros: self.zeros_used,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResidueJson {
    pub value: [f64; 2],
    pub error: Option<f64>,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeros: Option<usize>,
}

fn check_q(q: &MultiPoly, sys: &PolySystem) -> Result<()> {
    if q.nvars() != sys.n() {
        return Err(Error::NvarsMismatch {
            left: sys.n(),
            right: q.nvars(),
        });
    }
    Ok(())
}

/// Q(α)/𝒥_P(α) at a simple zero.
pub fn local_residue_simple(q: &MultiPoly, sys: &PolySystem, alpha: &[Complex64]) -> Result<ResidueValue> {
    check_q(q, sys)?;
    let jac = sys.jacobian_det(alpha)?;
    let scale = 1.0 + sys.max_abs_coeff();
    if jac.norm() <= SINGULAR_TOL * scale {
        return Err(Error::SingularJacobian(jac.norm()));
    }
    let v = if q.is_zero() {
        Complex64::zero()
    } else {
        q.evaluate(alpha)? / jac
    };
    Ok(ResidueValue::local(v, &[v]))
}

/// Residue of Q/P at a root `a` of multiplicity `m` (n = 1): the coefficient of
/// (z−a)^{m−1} in the Taylor expansion of Q(z)(z−a)^m/P(z).
fn local_residue_multiple_1d(q: &MultiPoly, p: &MultiPoly, a: Complex64, m: usize) -> Result<Complex64> {
    let taylor = |f: &MultiPoly| -> Vec<Complex64> {
        // coefficients of f(a + h) in h by repeated synthetic division
        let d = f.degree_in(0).unwrap_or(0).max(0) as usize;
        let mut c = vec![Complex64::zero(); d + 1];
        for (e, v) in f.terms() {
            c[e.0[0] as usize] = v.to_float();
        }
        let mut out = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            let mut acc = Complex64::zero();
            let mut next = vec![Complex64::zero(); c.len().saturating_sub(1)];
            for k in (0..c.len()).rev() {
                acc = acc * a + c[k];
                if k > 0 {
                    next[k - 1] = acc;
                }
            }
            out.push(acc);
            c = next;
        }
        out
    };
    if p.mode() == Mode::Laurent || q.mode() == Mode::Laurent {
        return Err(Error::LaurentMode);
    }
    let tq = taylor(q);
    let tp = taylor(p);
    // drop the m vanishing Taylor coefficients of P
    let b: Vec<Complex64> = tp.into_iter().skip(m).collect();
    if b.is_empty() || b[0].norm() == 0.0 {
        return Err(Error::SingularJacobian(0.0));
    }
    let mut series = vec![Complex64::zero(); m];
    for k in 0..m {
        let mut s = tq.get(k).copied().unwrap_or_default();
        for j in 1..=k.min(b.len() - 1) {
            s -= b[j] * series[k - j];
        }
        series[k] = s / b[0];
    }
    Ok(series[m - 1])
}

/// Sum of local residues over a zero set.
pub fn global_residue(q: &MultiPoly, sys: &PolySystem, zeros: &ZeroSet) -> Result<ResidueValue> {
    let terms = local_residues(q, sys, zeros)?;
    Ok(ResidueValue::local(bm::pairwise_sum(&terms), &terms))
}

/// The local residues of Q dX/P, one per zero, in zero-set order.
pub fn local_residues(q: &MultiPoly, sys: &PolySystem, zeros: &ZeroSet) -> Result<Vec<Complex64>> {
    check_q(q, sys)?;
    let mut terms = Vec::with_capacity(zeros.len());
    for z in &zeros.zeros {
        let t = if z.is_simple() {
            local_residue_simple(q, sys, &z.point)?.value
        } else if sys.n() == 1 {
            local_residue_multiple_1d(q, sys.equation(0), z.point[0], z.multiplicity)?
        } else {
            return Err(Error::MultipleZeroUnsupported);
        };
        terms.push(t);
    }
    Ok(terms)
}

/// Exact Res[Q dX/P] for n = 1 by the remainder identity.
pub fn global_residue_exact(q: &MultiPoly, sys: &PolySystem) -> Result<ResidueValue> {
    check_q(q, sys)?;
    if sys.n() != 1 {
        return Err(Error::UnsupportedDimension { got: sys.n(), max: 1 });
    }
    Ok(ResidueValue::exact(exact::residue_sum(q, sys.equation(0))?))
}

/// Res[Q dX/P] by Bochner–Martinelli quadrature on the sphere of radius `r`.
pub fn global_residue_bm(q: &MultiPoly, sys: &PolySystem, r: f64, opts: QuadOptions) -> Result<ResidueValue> {
    check_q(q, sys)?;
    let out = bm::integrate(q, sys, r, opts)?;
    Ok(ResidueValue {
        value: out.value,
        error_bound: out.error_bound,
        method: Method::BochnerMartinelli,
        zeros_used: None,
        nodes: Some(out.nodes),
        exact: None,
        kernel_deviation: Some(out.kernel_deviation),
    })
}

/// Sphere radius enclosing a zero set with margin: 2·(1 + max |coordinate|).
pub fn suggest_radius(zeros: &ZeroSet) -> f64 {
    2.0 * (1.0 + zeros.max_abs_coordinate())
}

/// Toric residue Σ Q(α)/(α₁⋯αₙ·𝒥_F(α)) over simple torus zeros.
pub fn toric_global_residue(q: &MultiPoly, sys: &PolySystem, zeros: &ZeroSet) -> Result<ResidueValue> {
    let terms = toric_local_residues(q, sys, zeros)?;
    Ok(ResidueValue::local(bm::pairwise_sum(&terms), &terms))
}

pub fn toric_local_residues(q: &MultiPoly, sys: &PolySystem, zeros: &ZeroSet) -> Result<Vec<Complex64>> {
    check_q(q, sys)?;
    zeros.zeros.iter().map(|z| toric_local(q, sys, z)).collect()
}

fn toric_local(q: &MultiPoly, sys: &PolySystem, z: &ZeroRecord) -> Result<Complex64> {
    if !z.is_simple() {
        return Err(Error::MultipleZeroUnsupported);
    }
    if let Some(i) = z.point.iter().position(|c| c.norm() == 0.0) {
        return Err(Error::ZeroCoordinate { index: i });
    }
    let prod: Complex64 = z.point.iter().product();
    let jac = sys.jacobian_det(&z.point)?;
    if jac.norm() <= SINGULAR_TOL * (1.0 + sys.max_abs_coeff()) {
        return Err(Error::SingularJacobian(jac.norm()));
    }
    if q.is_zero() {
        return Ok(Complex64::zero());
    }
    Ok(q.evaluate(&z.point)? / (prod * jac))
}

/// Exact toric residue for n = 1: Σ over torus zeros of res(Q/(F·ζ)).
pub fn toric_global_residue_exact(q: &MultiPoly, sys: &PolySystem) -> Result<ResidueValue> {
    check_q(q, sys)?;
    if sys.n() != 1 {
        return Err(Error::UnsupportedDimension { got: sys.n(), max: 1 });
    }
    let num = q.to_laurent().mul_monomial(&[-1])?;
    Ok(ResidueValue::exact(exact::torus_residue_sum(&num, &sys.equation(0).to_laurent())?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PoweredMethod {
    /// Exact: n = 1, or a separable system with Pⱼ depending on Xⱼ only.
    Exact,
    BochnerMartinelli { radius: f64, opts: QuadOptions },
}

/// Whether each Pⱼ involves only the variable Xⱼ.
pub fn is_separable(sys: &PolySystem) -> bool {
    sys.equations()
        .iter()
        .enumerate()
        .all(|(j, p)| p.terms().all(|(e, _)| e.0.iter().enumerate().all(|(k, &x)| k == j || x == 0)))
}

fn project_to_var(p: &MultiPoly, j: usize) -> Result<MultiPoly> {
    MultiPoly::from_terms(1, p.mode(), p.terms().map(|(e, c)| (vec![e.0[j]], c.clone())))
}

/// Res[Q dX / (P₁^{μ₁+1}⋯Pₙ^{μₙ+1})].
pub fn powered_global_residue(q: &MultiPoly, sys: &PolySystem, mu: &[u32], method: PoweredMethod) -> Result<ResidueValue> {
    check_q(q, sys)?;
    if mu.len() != sys.n() {
        return Err(Error::NvarsMismatch {
            left: sys.n(),
            right: mu.len(),
        });
    }
    match method {
        PoweredMethod::Exact => {
            if !(sys.n() == 1 || is_separable(sys)) {
                return Err(Error::Input(
                    "exact powered residues need n = 1 or a separable system".into(),
                ));
            }
            // factor the residue variable by variable, monomial by monomial
            let factors: Vec<MultiPoly> = sys
                .equations()
                .iter()
                .enumerate()
                .map(|(j, p)| project_to_var(p, j)?.pow(mu[j] + 1))
                .collect::<Result<Vec<_>>>()?;
            let mut total = ComplexRational::zero();
            let mut cache = std::collections::HashMap::new();
            for (e, c) in q.terms() {
                let mut term = c.as_exact().ok_or(Error::MixedMode)?.clone();
                for (j, f) in factors.iter().enumerate() {
                    let key = (j, e.0[j]);
                    let r = match cache.get(&key) {
                        Some(r) => r,
                        None => {
                            let mono = MultiPoly::from_terms(1, Mode::Ordinary, vec![(vec![e.0[j]], crate::poly::Coefficient::from_int(1))])?;
                            let r = exact::residue_sum(&mono, f)?;
                            cache.entry(key).or_insert(r)
                        }
                    };
                    term *= r;
                }
                total += term;
            }
            Ok(ResidueValue::exact(total))
        }
        PoweredMethod::BochnerMartinelli { radius, opts } => {
            let powered = PolySystem::new(
                sys.equations()
                    .iter()
                    .zip(mu)
                    .map(|(p, &m)| p.pow(m + 1))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            global_residue_bm(q, &powered, radius, opts)
        }
    }
}

/// Res[Q dX / (P₁^{μ₁+1}⋯Pₙ^{μₙ+1})] as a sum of local series residues over
/// simple zeros.
pub fn powered_global_residue_local(q: &MultiPoly, sys: &PolySystem, mu: &[u32], zeros: &ZeroSet) -> Result<ResidueValue> {
    check_q(q, sys)?;
    if mu.len() != sys.n() {
        return Err(Error::NvarsMismatch {
            left: sys.n(),
            right: mu.len(),
        });
    }
    if !zeros.all_simple() {
        return Err(Error::MultipleZeroUnsupported);
    }
    let terms = zeros
        .zeros
        .iter()
        .map(|z| series::powered_local_residue(q, sys, mu, &z.point))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidueValue::local(bm::pairwise_sum(&terms), &terms))
}

/// (Q(X^N)·(X₁⋯Xₙ)^{N−1}, P(X^N)): the change of basis X ↦ X^N, which preserves
/// the global residue.
pub fn reduce_by_power_substitution(q: &MultiPoly, sys: &PolySystem, n: u32) -> Result<(MultiPoly, PolySystem)> {
    if sys.mode() == Mode::Laurent {
        return Err(Error::LaurentMode);
    }
    check_q(q, sys)?;
    let shift = vec![n as i64 - 1; sys.n()];
    let q2 = q.substitute_powers(n)?.mul_monomial(&shift)?;
    let s2 = sys.map(|p| p.substitute_powers(n))?;
    Ok((q2, s2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{cr, parse::parse};
    use crate::zeros::{solve, solve_torus};

    fn sys2(a: &str, b: &str) -> PolySystem {
        PolySystem::new(vec![
            parse(a, 2, Mode::Ordinary).unwrap(),
            parse(b, 2, Mode::Ordinary).unwrap(),
        ])
        .unwrap()
    }

    fn q2(s: &str) -> MultiPoly {
        parse(s, 2, Mode::Ordinary).unwrap()
    }

    fn corners() -> PolySystem {
        sys2("X1^2 - 1", "X2^2 - 1")
    }

    fn ex21() -> PolySystem {
        sys2("X1*X2", "X1*X2 + X1 + X2 + 1")
    }

    fn one(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn local_examples() {
        let r = local_residue_simple(&q2("1"), &corners(), &[one(1.0), one(1.0)]).unwrap();
        assert!((r.value - 0.25).norm() < 1e-15);
        let r = local_residue_simple(&MultiPoly::zero(2, Mode::Ordinary), &corners(), &[one(1.0), one(1.0)]).unwrap();
        assert_eq!(r.value, Complex64::zero());
        // Jacobian x2 - x1 at (0, -1)
        let r = local_residue_simple(&q2("1"), &ex21(), &[one(0.0), one(-1.0)]).unwrap();
        assert!((r.value + 1.0).norm() < 1e-15);
        assert!(matches!(
            local_residue_simple(&q2("1"), &sys2("X1^2", "X2"), &[one(0.0), one(0.0)]),
            Err(Error::SingularJacobian(_))
        ));
    }

    #[test]
    fn global_examples() {
        let s = corners();
        let z = solve(&s).unwrap();
        assert!(global_residue(&q2("1"), &s, &z).unwrap().value.norm() < 1e-14);
        assert!((global_residue(&q2("X1*X2"), &s, &z).unwrap().value - 1.0).norm() < 1e-14);
        let p = PolySystem::new(vec![parse("X1^2 - 1", 1, Mode::Ordinary).unwrap()]).unwrap();
        let z = solve(&p).unwrap();
        let q = parse("1", 1, Mode::Ordinary).unwrap();
        assert!(global_residue(&q, &p, &z).unwrap().value.norm() < 1e-15);
        assert_eq!(global_residue_exact(&q, &p).unwrap().exact, Some(cr(0)));
    }

    #[test]
    fn multiple_root_local_expansion_matches_exact() {
        let p = PolySystem::new(vec![parse("X1^4 - 2*X1^3 + X1^2", 1, Mode::Ordinary).unwrap()]).unwrap();
        let z = solve(&p).unwrap();
        for q in ["1", "X1", "X1^3 + 2", "X1^5 - X1"] {
            let q = parse(q, 1, Mode::Ordinary).unwrap();
            let a = global_residue(&q, &p, &z).unwrap().value;
            let b = global_residue_exact(&q, &p).unwrap().value;
            assert!((a - b).norm() < 1e-9, "{a} vs {b}");
        }
        let s = sys2("X2 - X1^2", "X2");
        let z = solve(&s).unwrap();
        assert_eq!(global_residue(&q2("1"), &s, &z), Err(Error::MultipleZeroUnsupported));
    }

    #[test]
    fn bm_examples() {
        let p = PolySystem::new(vec![parse("X1", 1, Mode::Ordinary).unwrap()]).unwrap();
        let r = global_residue_bm(&parse("1", 1, Mode::Ordinary).unwrap(), &p, 1.0, QuadOptions::default()).unwrap();
        assert!((r.value - 1.0).norm() < 1e-12);
        let r = global_residue_bm(&q2("X1*X2"), &corners(), 3.0, QuadOptions::default()).unwrap();
        assert!((r.value - 1.0).norm() < 1e-3);
        assert!(r.kernel_deviation.unwrap() <= 1e-12);
        let r = global_residue_bm(&q2("1"), &ex21(), 3.0, QuadOptions::default()).unwrap();
        assert!(r.value.norm() < 1e-3);
    }

    #[test]
    fn toric_examples() {
        let f = PolySystem::new(vec![parse("X1 + 3 + X1^-1", 1, Mode::Laurent).unwrap()]).unwrap();
        let z = solve_torus(&f).unwrap();
        let q = |s: &str| parse(s, 1, Mode::Laurent).unwrap();
        assert!(toric_global_residue(&q("1"), &f, &z).unwrap().value.norm() < 1e-14);
        assert!((toric_global_residue(&q("X1"), &f, &z).unwrap().value - 1.0).norm() < 1e-13);
        assert_eq!(toric_global_residue(&MultiPoly::zero(1, Mode::Laurent), &f, &z).unwrap().value, Complex64::zero());
        assert_eq!(toric_global_residue_exact(&q("X1"), &f).unwrap().exact, Some(cr(1)));
    }

    #[test]
    fn powered_examples() {
        let p = PolySystem::new(vec![parse("X1", 1, Mode::Ordinary).unwrap()]).unwrap();
        let q = |s: &str| parse(s, 1, Mode::Ordinary).unwrap();
        assert_eq!(powered_global_residue(&q("X1"), &p, &[1], PoweredMethod::Exact).unwrap().exact, Some(cr(1)));
        assert_eq!(powered_global_residue(&q("1"), &p, &[1], PoweredMethod::Exact).unwrap().exact, Some(cr(0)));
        let s = corners();
        assert_eq!(powered_global_residue(&q2("X1*X2"), &s, &[0, 0], PoweredMethod::Exact).unwrap().exact, Some(cr(1)));
        assert_eq!(
            powered_global_residue(&q2("X1^3*X2^3"), &s, &[1, 1], PoweredMethod::Exact).unwrap().exact,
            Some(cr(1))
        );
        let bm = PoweredMethod::BochnerMartinelli {
            radius: 3.0,
            opts: QuadOptions::default(),
        };
        let r = powered_global_residue(&q2("X1^3*X2^3"), &s, &[1, 1], bm).unwrap();
        assert!((r.value - 1.0).norm() < 1e-3, "{}", r.value);
    }

    #[test]
    fn power_substitution_examples() {
        let s = corners();
        let (q, s1) = reduce_by_power_substitution(&q2("X1*X2"), &s, 1).unwrap();
        assert_eq!((q, s1), (q2("X1*X2"), s.clone()));
        let (q, s2) = reduce_by_power_substitution(&q2("X1*X2"), &s, 2).unwrap();
        let z = solve(&s2).unwrap();
        assert!((global_residue(&q, &s2, &z).unwrap().value - 1.0).norm() < 1e-9);
        let p = PolySystem::new(vec![parse("X1 - 1", 1, Mode::Ordinary).unwrap()]).unwrap();
        let (q, p2) = reduce_by_power_substitution(&parse("1", 1, Mode::Ordinary).unwrap(), &p, 2).unwrap();
        assert_eq!(q, parse("X1", 1, Mode::Ordinary).unwrap());
        assert_eq!(global_residue_exact(&q, &p2).unwrap().exact, Some(cr(1)));
    }
}
