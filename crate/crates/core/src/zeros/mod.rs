//! Finite zero sets V(P) ⊂ Cⁿ and V*(F) ⊂ Tⁿ for n ≤ 2.

mod roots;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{
    cr, cr_rat, cr_to_c64, upoly, CoeffKind, Coefficient, ComplexRational, Mode, MultiPoly,
    PolySystem,
};

pub use roots::{aberth, cluster_roots};

pub const CERTIFY_TOL: f64 = 1e-10;
pub const TORUS_TOL: f64 = 1e-8;
pub const CLUSTER_TOL: f64 = 1e-6;
const SINGULAR_TOL: f64 = 1e-12;
const NEWTON_STEPS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroRecord {
    pub point: Vec<Complex64>,
    pub jacobian: Complex64,
    pub multiplicity: usize,
    pub residual: f64,
    pub cluster_radius: f64,
}

impl ZeroRecord {
    pub fn is_simple(&self) -> bool {
        self.multiplicity == 1
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ZeroSet {
    pub zeros: Vec<ZeroRecord>,
    pub warnings: Vec<String>,
}

impl ZeroSet {
    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.zeros.iter().map(|z| z.multiplicity).sum()
    }

    pub fn all_simple(&self) -> bool {
        self.zeros.iter().all(ZeroRecord::is_simple)
    }

    pub fn points(&self) -> Vec<Vec<Complex64>> {
        self.zeros.iter().map(|z| z.point.clone()).collect()
    }

    pub fn max_abs_coordinate(&self) -> f64 {
        self.zeros
            .iter()
            .flat_map(|z| z.point.iter().map(|c| c.norm()))
            .fold(0.0, f64::max)
    }

    /// Builds records for externally supplied points, filling in Jacobians and residuals.
    pub fn from_points(sys: &PolySystem, points: &[(Vec<Complex64>, usize)]) -> Result<Self> {
        let zeros = points
            .iter()
            .map(|(p, m)| record(sys, p.clone(), *m, 0.0))
            .collect::<Result<Vec<_>>>()?;
        Ok(ZeroSet {
            zeros,
            warnings: Vec::new(),
        })
    }

    pub fn to_json(&self) -> ZeroSetJson {
        ZeroSetJson {
            zeros: self
                .zeros
                .iter()
                .map(|z| ZeroJson {
                    point: z.point.iter().map(|c| [c.re, c.im]).collect(),
                    mult: z.multiplicity,
                    jac: [z.jacobian.re, z.jacobian.im],
                    residual: z.residual,
                })
                .collect(),
            warnings: self.warnings.clone(),
        }
    }

    /// Reads a zero list, recomputing Jacobians and residuals against `sys`.
    pub fn from_json(json: &ZeroSetJson, sys: &PolySystem) -> Result<Self> {
        let pts: Vec<(Vec<Complex64>, usize)> = json
            .zeros
            .iter()
            .map(|z| {
                (
                    z.point.iter().map(|c| Complex64::new(c[0], c[1])).collect(),
                    z.mult.max(1),
                )
            })
            .collect();
        for (p, _) in &pts {
            if p.len() != sys.n() {
                return Err(Error::NvarsMismatch {
                    left: sys.n(),
                    right: p.len(),
                });
            }
        }
        let mut out = Self::from_points(sys, &pts)?;
        out.warnings = json.warnings.clone();
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ZeroJson {
    pub point: Vec<[f64; 2]>,
    pub mult: usize,
    #[serde(default)]
    pub jac: [f64; 2],
    #[serde(default)]
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ZeroSetJson {
    pub zeros: Vec<ZeroJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn record(sys: &PolySystem, point: Vec<Complex64>, mult: usize, radius: f64) -> Result<ZeroRecord> {
    let residual = sys
        .evaluate(&point)?
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    Ok(ZeroRecord {
        jacobian: sys.jacobian_det(&point)?,
        point,
        multiplicity: mult,
        residual,
        cluster_radius: radius,
    })
}

/// Residual scale used to certify a zero: certify_tol·(1 + max |coefficient|).
pub fn certify_scale(sys: &PolySystem) -> f64 {
    CERTIFY_TOL * (1.0 + sys.max_abs_coeff())
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Newton iteration from `approx` until the residual drops below the certification
/// tolerance or the step stalls.
pub fn polish(sys: &PolySystem, approx: &[Complex64]) -> Result<(Vec<Complex64>, f64)> {
    let compiled = sys.compile();
    let tol = certify_scale(sys);
    let mut z = approx.to_vec();
    let (mut f, mut jac) = compiled.eval_jac(&z);
    let mut best = max_norm(&f);
    for _ in 0..NEWTON_STEPS {
        let scale = jac
            .iter()
            .flat_map(|r| r.iter().map(|c| c.norm()))
            .fold(0.0, f64::max)
            .max(1.0);
        let det = crate::poly::complex_det(jac.clone());
        if det.norm() < SINGULAR_TOL * scale.powi(sys.n() as i32) {
            if best <= tol {
                break;
            }
            return Err(Error::SingularJacobian(det.norm()));
        }
        let step = crate::poly::complex_solve(jac.clone(), f.iter().map(|v| -v).collect())
            .ok_or(Error::SingularJacobian(det.norm()))?;
        let next: Vec<Complex64> = z.iter().zip(&step).map(|(a, b)| a + b).collect();
        let (nf, nj) = compiled.eval_jac(&next);
        let r = max_norm(&nf);
        if !r.is_finite() {
            break;
        }
        let tiny_step = max_norm(&step) <= 1e-16 * (1.0 + max_norm(&z));
        if r <= best || r <= tol {
            z = next;
            f = nf;
            jac = nj;
            best = r;
        } else if best <= tol {
            break;
        }
        if tiny_step || (best <= tol && r >= best * 0.5) {
            break;
        }
    }
    if best <= tol {
        Ok((z, best))
    } else {
        Err(Error::NonConvergence { best_residual: best })
    }
}

/// All complex roots of a one-variable polynomial with multiplicities.
pub fn solve_univariate(p: &MultiPoly) -> Result<ZeroSet> {
    if p.nvars() != 1 {
        return Err(Error::UnsupportedDimension {
            got: p.nvars(),
            max: 1,
        });
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let ordinary = match p.mode() {
        Mode::Ordinary => p.clone(),
        Mode::Laurent => p.clear_denominators()?.0,
    };
    let sys = PolySystem::new(vec![p.clone()])?;
    let tol = certify_scale(&sys);
    let mut out = ZeroSet::default();
    let mut found: Vec<(Complex64, usize, f64)> = Vec::new();
    match ordinary.kind() {
        CoeffKind::Exact => {
            let dense = ordinary.to_dense_exact()?;
            for (factor, mult) in upoly::squarefree(&dense) {
                let fc = upoly::to_c64(&factor);
                for r in aberth(&fc)? {
                    found.push((r, mult, 0.0));
                }
            }
        }
        CoeffKind::Float => {
            let d = ordinary.degree_in(0).unwrap_or(0) as usize;
            let mut fc = vec![Complex64::zero(); d + 1];
            for (e, c) in ordinary.terms() {
                fc[e.0[0] as usize] = c.to_float();
            }
            for (r, m, rad) in cluster_roots(&aberth(&fc)?, CLUSTER_TOL) {
                found.push((r, m, rad));
            }
        }
    }
    for (r, m, rad) in found {
        let mut rec = record(&sys, vec![r], m, rad)?;
        if m == 1 {
            if let Ok((z, res)) = polish(&sys, &rec.point) {
                rec = record(&sys, z, 1, rad)?;
                rec.residual = res;
            }
        }
        if rec.residual > tol * 10f64.powi(m as i32 - 1) {
            return Err(Error::NonConvergence {
                best_residual: rec.residual,
            });
        }
        out.zeros.push(rec);
    }
    sort_zeros(&mut out.zeros);
    Ok(out)
}

fn sort_zeros(zeros: &mut [ZeroRecord]) {
    zeros.sort_by(|a, b| {
        for (x, y) in a.point.iter().zip(&b.point) {
            let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
            if o != std::cmp::Ordering::Equal {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    });
}

/// Substitutes X₁ ← X₁ + c·X₂ in a two-variable ordinary polynomial.
fn shear(p: &MultiPoly, c: &ComplexRational) -> Result<MultiPoly> {
    let kind = p.kind();
    let coef = |v: ComplexRational| match kind {
        CoeffKind::Exact => Coefficient::Exact(v),
        CoeffKind::Float => Coefficient::Float(cr_to_c64(&v)),
    };
    let lin = MultiPoly::from_terms(
        2,
        Mode::Ordinary,
        vec![(vec![1, 0], coef(cr(1))), (vec![0, 1], coef(c.clone()))],
    )?;
    let mut out = MultiPoly::zero_with_kind(2, Mode::Ordinary, kind);
    for (e, k) in p.terms() {
        let term = lin
            .pow(e.0[0] as u32)?
            .mul_monomial(&[0, e.0[1]])?
            .scale(k)?;
        out = out.try_add(&term)?;
    }
    Ok(out)
}

/// Shears tried in turn until the projection onto X₁ separates the zeros.
fn shear_candidates() -> Vec<ComplexRational> {
    vec![
        cr_rat(2, 7),
        cr_rat(-3, 11),
        cr_rat(5, 13),
        cr_rat(-7, 17),
        cr_rat(9, 19),
        cr_rat(1, 3),
    ]
}

/// Exact resultant in X₂ as a dense polynomial in X₁, by evaluation and interpolation.
fn exact_resultant(p1: &MultiPoly, p2: &MultiPoly) -> Result<upoly::UPoly> {
    let c1 = p1.coefficients_in(1)?;
    let c2 = p2.coefficients_in(1)?;
    let (d1, d2) = (c1.len() - 1, c2.len() - 1);
    let a1 = p1.degree_in(0).unwrap_or(0).max(0) as usize;
    let a2 = p2.degree_in(0).unwrap_or(0).max(0) as usize;
    let bound = a1 * d2 + a2 * d1;
    let dense_at = |cs: &[MultiPoly], x: &ComplexRational| -> Result<upoly::UPoly> {
        cs.iter()
            .map(|c| c.evaluate_exact(&[x.clone(), cr(0)]))
            .collect()
    };
    let xs: Vec<ComplexRational> = (0..=bound as i64).map(cr).collect();
    let ys = xs
        .par_iter()
        .map(|x| {
            let u1 = dense_at(&c1, x)?;
            let u2 = dense_at(&c2, x)?;
            Ok(upoly::det(upoly::sylvester(&u1, d1, &u2, d2)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(upoly::interpolate(&xs, &ys))
}

/// Float resultant in X₂ by evaluation on a circle and an inverse DFT.
fn float_resultant(p1: &MultiPoly, p2: &MultiPoly) -> Result<Vec<Complex64>> {
    let c1: Vec<_> = p1.coefficients_in(1)?.iter().map(MultiPoly::compile).collect();
    let c2: Vec<_> = p2.coefficients_in(1)?.iter().map(MultiPoly::compile).collect();
    let (d1, d2) = (c1.len() - 1, c2.len() - 1);
    let a1 = p1.degree_in(0).unwrap_or(0).max(0) as usize;
    let a2 = p2.degree_in(0).unwrap_or(0).max(0) as usize;
    let m = a1 * d2 + a2 * d1 + 1;
    let rho = 1.0;
    let vals: Vec<Complex64> = (0..m)
        .map(|k| {
            let x = Complex64::from_polar(rho, 2.0 * std::f64::consts::PI * k as f64 / m as f64);
            let pt = [x, Complex64::zero()];
            let u1: Vec<Complex64> = c1.iter().map(|c| c.eval(&pt)).collect();
            let u2: Vec<Complex64> = c2.iter().map(|c| c.eval(&pt)).collect();
            float_sylvester_det(&u1, d1, &u2, d2)
        })
        .collect();
    let mut coeffs = vec![Complex64::zero(); m];
    for (j, c) in coeffs.iter_mut().enumerate() {
        let mut s = Complex64::zero();
        for (k, v) in vals.iter().enumerate() {
            s += v * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (j * k) as f64 / m as f64);
        }
        *c = s / (m as f64 * rho.powi(j as i32));
    }
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    while coeffs.len() > 1 && coeffs.last().unwrap().norm() <= 1e-12 * scale {
        coeffs.pop();
    }
    Ok(coeffs)
}

fn float_sylvester_det(a: &[Complex64], da: usize, b: &[Complex64], db: usize) -> Complex64 {
    let size = da + db;
    let mut m = vec![vec![Complex64::zero(); size]; size];
    for i in 0..db {
        for k in 0..=da {
            m[i][i + k] = a[da - k];
        }
    }
    for i in 0..da {
        for k in 0..=db {
            m[db + i][i + k] = b[db - k];
        }
    }
    crate::poly::complex_det(m)
}

fn dense_float_in_x2(p: &MultiPoly, u: Complex64) -> Vec<Complex64> {
    let d = p.degree_in(1).unwrap_or(0).max(0) as usize;
    let mut out = vec![Complex64::zero(); d + 1];
    for (e, c) in p.terms() {
        out[e.0[1] as usize] += c.to_float() * u.powi(e.0[0] as i32);
    }
    out
}

/// Zeros of a square two-variable system, by elimination of X₂ after a generic shear.
pub fn solve_bivariate(sys: &PolySystem) -> Result<ZeroSet> {
    if sys.n() != 2 {
        return Err(Error::UnsupportedDimension { got: sys.n(), max: 2 });
    }
    let ordinary = if sys.mode() == Mode::Laurent {
        sys.map(|p| Ok(p.clear_denominators()?.0))?
    } else {
        sys.clone()
    };
    let mut last_err = Error::NonConvergence {
        best_residual: f64::INFINITY,
    };
    for c in shear_candidates() {
        match solve_sheared(sys, &ordinary, &c) {
            Ok(z) => return Ok(z),
            Err(Error::PositiveDimensional) => return Err(Error::PositiveDimensional),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

/// One elimination attempt; fails with `NonConvergence` when the shear does not
/// separate the zeros.
fn solve_sheared(orig: &PolySystem, sys: &PolySystem, c: &ComplexRational) -> Result<ZeroSet> {
    let s1 = shear(sys.equation(0), c)?;
    let s2 = shear(sys.equation(1), c)?;
    // the X₂-leading coefficient must be a nonzero constant for one equation
    let lead_const = |p: &MultiPoly| -> bool {
        let cs = p.coefficients_in(1).unwrap();
        let lc = cs.last().unwrap();
        lc.total_degree().map(|d| d == 0).unwrap_or(false)
    };
    if !lead_const(&s1) && !lead_const(&s2) {
        return Err(Error::NonConvergence {
            best_residual: f64::INFINITY,
        });
    }
    let cf = cr_to_c64(c);
    let mut out = ZeroSet::default();
    let mut candidates: Vec<(Complex64, usize)> = Vec::new();
    if sys.is_exact() {
        let res = exact_resultant(&s1, &s2)?;
        if upoly::is_zero(&res) {
            return Err(Error::PositiveDimensional);
        }
        for (factor, mult) in upoly::squarefree(&res) {
            for r in aberth(&upoly::to_c64(&factor))? {
                candidates.push((r, mult));
            }
        }
    } else {
        out.warnings.push(
            "float coefficients: resultant computed by floating-point Sylvester determinants; zeros may be ill-conditioned"
                .to_string(),
        );
        let res = float_resultant(&s1, &s2)?;
        if res.iter().all(|c| c.norm() == 0.0) {
            return Err(Error::PositiveDimensional);
        }
        for (r, m, _) in cluster_roots(&aberth(&res)?, CLUSTER_TOL) {
            candidates.push((r, m));
        }
    }
    let scale = 1.0 + sys.max_abs_coeff();
    let deg = s1.total_degree()?.max(s2.total_degree()?);
    let tol = certify_scale(orig);
    let cs1 = s1.compile();
    let cs2 = s2.compile();
    let pieces: Vec<Result<Option<ZeroRecord>>> = candidates
        .par_iter()
        .map(|&(u, mult)| {
            // fibre candidates: roots of whichever equation keeps a nonzero X₂-degree
            let mut vs = Vec::new();
            for p in [&s1, &s2] {
                let g = dense_float_in_x2(p, u);
                if g.len() > 1 && g.iter().skip(1).any(|c| c.norm() > 0.0) {
                    vs.extend(aberth(&g)?);
                }
            }
            let fit = |v: Complex64| {
                let pt = [u, v];
                let w = 1.0 + v.norm().max(u.norm());
                (cs1.eval(&pt).norm() + cs2.eval(&pt).norm()) / (scale * w.powi(deg as i32))
            };
            let mut good: Vec<(Complex64, f64)> =
                vs.into_iter().map(|v| (v, fit(v))).collect();
            good.sort_by(|a, b| a.1.total_cmp(&b.1));
            let Some(&(best_v, best_fit)) = good.first() else {
                return Ok(None);
            };
            // a second, separated fibre point means the shear failed to separate zeros
            let loose = (best_fit * 1e3).max(1e-6);
            let distinct = good
                .iter()
                .filter(|(v, f)| *f <= loose && (v - best_v).norm() > 1e-4 * (1.0 + best_v.norm()))
                .count();
            if distinct > 0 && mult == 1 {
                return Err(Error::NonConvergence {
                    best_residual: best_fit,
                });
            }
            let x = vec![u + cf * best_v, best_v];
            let point = if mult == 1 {
                polish(orig, &x).map(|(z, _)| z).unwrap_or(x)
            } else {
                x
            };
            let rec = record(orig, point, mult, 0.0)?;
            Ok(Some(rec))
        })
        .collect();
    for piece in pieces {
        if let Some(rec) = piece? {
            if rec.multiplicity == 1 && rec.residual > tol {
                return Err(Error::NonConvergence {
                    best_residual: rec.residual,
                });
            }
            out.zeros.push(rec);
        }
    }
    // distinct resultant roots must give distinct zeros
    for i in 0..out.zeros.len() {
        for j in i + 1..out.zeros.len() {
            let d = out.zeros[i]
                .point
                .iter()
                .zip(&out.zeros[j].point)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            let mag = 1.0 + max_norm(&out.zeros[i].point);
            if d <= CLUSTER_TOL * mag {
                return Err(Error::NonConvergence { best_residual: d });
            }
        }
    }
    sort_zeros(&mut out.zeros);
    Ok(out)
}

/// Zeros on the torus (C*)ⁿ of a Laurent system, n ≤ 2.
pub fn solve_torus(sys: &PolySystem) -> Result<ZeroSet> {
    let mut all = match sys.n() {
        1 => {
            let cleared = sys.equation(0).clear_denominators()?.0;
            let mut z = solve_univariate(&cleared)?;
            z.zeros.retain(|r| r.point[0].norm() >= TORUS_TOL);
            z
        }
        2 => {
            let cleared = sys.map(|p| Ok(p.clear_denominators()?.0))?;
            let mut z = solve_bivariate(&cleared)?;
            z.zeros.retain(|r| r.point.iter().all(|c| c.norm() >= TORUS_TOL));
            z
        }
        n => return Err(Error::UnsupportedDimension { got: n, max: 2 }),
    };
    // Jacobians and residuals are those of the Laurent system itself
    for rec in &mut all.zeros {
        let fresh = record(sys, rec.point.clone(), rec.multiplicity, rec.cluster_radius)?;
        *rec = fresh;
    }
    Ok(all)
}

/// Zeros in Cⁿ of an ordinary system, n ≤ 2.
pub fn solve(sys: &PolySystem) -> Result<ZeroSet> {
    match sys.n() {
        1 => solve_univariate(sys.equation(0)),
        2 => solve_bivariate(sys),
        n => Err(Error::UnsupportedDimension { got: n, max: 2 }),
    }
}
