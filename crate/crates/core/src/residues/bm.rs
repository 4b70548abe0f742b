//! Bochner–Martinelli quadrature for global residues, n ∈ {1, 2}.
//!
//! For n = 2 the boundary form Q·(s₁ds₂ − s₂ds₁)∧dζ₁∧dζ₂ with s = conj(P)/‖P‖²
//! keeps only its dζ̄ part:
//! Σⱼ Q·(P̄₁·∂ⱼP̄₂ − P̄₂·∂ⱼP̄₁)/‖P‖⁴ dζ̄ⱼ∧dζ₁∧dζ₂. On the sphere
//! ζ = (R cosθ e^{iφ₁}, R sinθ e^{iφ₂}) the pulled-back volume factors are
//! 2R² sinθ cosθ·ζ₂ (j = 1) and −2R² sinθ cosθ·ζ₁ (j = 2).

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{CompiledPoly, CompiledSystem, MultiPoly, PolySystem};

/// Orientation of the (θ, φ₁, φ₂) chart relative to the boundary orientation of
/// the ball; fixed by the (X₁−a, X₂−b) calibration test below.
const ORIENTATION: f64 = -1.0;
const ZERO_ON_SPHERE: f64 = 1e-6;
const KERNEL_TOL: f64 = 1e-12;
const CIRCLE_START: usize = 256;
const CIRCLE_MAX: usize = 1 << 20;
const CIRCLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub theta_nodes: usize,
    pub phi_nodes: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            theta_nodes: 24,
            phi_nodes: 48,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BmOutcome {
    pub value: Complex64,
    pub error_bound: f64,
    pub nodes: usize,
    /// Largest |⟨s,P⟩ − 1| over the nodes of the final rule.
    pub kernel_deviation: f64,
}

/// γₙ = (−1)^{n(n−1)/2}(n−1)!/(2πi)ⁿ.
pub fn gamma_n(n: usize) -> Complex64 {
    let sign = if (n * (n.saturating_sub(1)) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let fact: f64 = (1..n).map(|k| k as f64).product();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    Complex64::new(sign * fact, 0.0) / two_pi_i.powi(n as i32)
}

/// Pairwise summation in index order.
pub(crate) fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    match v.len() {
        0 => Complex64::zero(),
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

/// Gauss–Legendre nodes and weights on [a, b].
pub fn gauss_legendre(m: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w));
    }
    out.sort_by(|p, q| p.0.total_cmp(&q.0));
    out
}

fn circle_rule(q: &CompiledPoly, p: &CompiledPoly, r: f64, n: usize) -> Result<(Complex64, f64)> {
    let terms: Vec<Result<(Complex64, f64)>> = (0..n)
        .into_par_iter()
        .map(|k| {
            let z = Complex64::from_polar(r, 2.0 * PI * k as f64 / n as f64);
            let pv = p.eval(&[z]);
            if pv.norm() < ZERO_ON_SPHERE {
                return Err(Error::ZeroOnSphere(pv.norm()));
            }
            let s = pv.conj() / pv.norm_sqr();
            let dev = (s * pv - 1.0).norm();
            Ok((q.eval(&[z]) * s * z, dev))
        })
        .collect();
    let mut vals = Vec::with_capacity(n);
    let mut dev = 0.0f64;
    for t in terms {
        let (v, d) = t?;
        vals.push(v);
        dev = dev.max(d);
    }
    Ok((pairwise_sum(&vals) / n as f64, dev))
}

fn circle(q: &MultiPoly, sys: &PolySystem, r: f64) -> Result<BmOutcome> {
    let qc = q.compile();
    let pc = sys.equation(0).compile();
    let mut n = CIRCLE_START;
    let (mut prev, _) = circle_rule(&qc, &pc, r, n)?;
    loop {
        n *= 2;
        let (cur, dev) = circle_rule(&qc, &pc, r, n)?;
        let diff = (cur - prev).norm();
        if diff < CIRCLE_TOL {
            return Ok(BmOutcome {
                value: cur,
                error_bound: diff.max(f64::EPSILON * cur.norm()),
                nodes: n,
                kernel_deviation: dev,
            });
        }
        if n >= CIRCLE_MAX {
            return Err(Error::QuadratureNotConverged(diff));
        }
        prev = cur;
    }
}

fn sphere_rule(q: &CompiledPoly, sys: &CompiledSystem, r: f64, opts: QuadOptions) -> Result<(Complex64, f64)> {
    let gl = gauss_legendre(opts.theta_nodes, 0.0, PI / 2.0);
    let m = opts.phi_nodes;
    let h = 2.0 * PI / m as f64;
    let rows: Vec<Result<(Complex64, f64)>> = gl
        .par_iter()
        .map(|&(theta, w)| {
            let (st, ct) = theta.sin_cos();
            let mut vals = Vec::with_capacity(m * m);
            let mut dev = 0.0f64;
            for a in 0..m {
                let e1 = Complex64::from_polar(1.0, h * a as f64);
                for b in 0..m {
                    let e2 = Complex64::from_polar(1.0, h * b as f64);
                    let z = [e1 * (r * ct), e2 * (r * st)];
                    let (vals_p, jac) = sys.eval_jac(&z);
                    let norm2 = vals_p[0].norm_sqr() + vals_p[1].norm_sqr();
                    if norm2.sqrt() < ZERO_ON_SPHERE {
                        return Err(Error::ZeroOnSphere(norm2.sqrt()));
                    }
                    let s = [vals_p[0].conj() / norm2, vals_p[1].conj() / norm2];
                    dev = dev.max((s[0] * vals_p[0] + s[1] * vals_p[1] - 1.0).norm());
                    let (p1, p2) = (vals_p[0].conj(), vals_p[1].conj());
                    let k = |j: usize| (p1 * jac[1][j].conj() - p2 * jac[0][j].conj()) / (norm2 * norm2);
                    let vol = 2.0 * r * r * st * ct;
                    let form = k(0) * z[1] * vol - k(1) * z[0] * vol;
                    vals.push(q.eval(&z) * form);
                }
            }
            Ok((pairwise_sum(&vals) * (w * h * h), dev))
        })
        .collect();
    let mut vals = Vec::with_capacity(rows.len());
    let mut dev = 0.0f64;
    for row in rows {
        let (v, d) = row?;
        vals.push(v);
        dev = dev.max(d);
    }
    Ok((pairwise_sum(&vals) * gamma_n(2) * ORIENTATION, dev))
}

fn sphere(q: &MultiPoly, sys: &PolySystem, r: f64, opts: QuadOptions) -> Result<BmOutcome> {
    let qc = q.compile();
    let sc = sys.compile();
    let (coarse, _) = sphere_rule(&qc, &sc, r, opts)?;
    let fine_opts = QuadOptions {
        theta_nodes: 2 * opts.theta_nodes,
        phi_nodes: 2 * opts.phi_nodes,
    };
    let (fine, dev) = sphere_rule(&qc, &sc, r, fine_opts)?;
    Ok(BmOutcome {
        value: fine,
        error_bound: (fine - coarse).norm().max(1e-14 * fine.norm()),
        nodes: fine_opts.theta_nodes * fine_opts.phi_nodes * fine_opts.phi_nodes,
        kernel_deviation: dev,
    })
}

/// Global residue as the Bochner–Martinelli integral over the sphere of radius `r`.
pub fn integrate(q: &MultiPoly, sys: &PolySystem, r: f64, opts: QuadOptions) -> Result<BmOutcome> {
    if q.nvars() != sys.n() {
        return Err(Error::NvarsMismatch {
            left: sys.n(),
            right: q.nvars(),
        });
    }
    let out = match sys.n() {
        1 => circle(q, sys, r)?,
        2 => sphere(q, sys, r, opts)?,
        n => return Err(Error::UnsupportedDimension { got: n, max: 2 }),
    };
    debug_assert!(out.kernel_deviation <= KERNEL_TOL);
    Ok(out)
}

pub fn kernel_tolerance() -> f64 {
    KERNEL_TOL
}
