//! Simultaneous root iteration for dense univariate polynomials.

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

const MAX_ITER: usize = 2000;

fn horner(a: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for c in a.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of the ascending coefficient list `a` by Aberth–Ehrlich iteration,
/// started on the Cauchy-bound circle with a 0.4 rad offset.
pub fn aberth(a: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut a = a.to_vec();
    while a.last().is_some_and(|c| c.norm() == 0.0) {
        a.pop();
    }
    if a.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    // exact zero roots are split off first
    let mut roots = Vec::new();
    let lead_zeros = a.iter().take_while(|c| c.norm() == 0.0).count();
    roots.extend(std::iter::repeat(Complex64::zero()).take(lead_zeros));
    let a: Vec<Complex64> = a[lead_zeros..].to_vec();
    let d = a.len() - 1;
    if d == 0 {
        return Ok(roots);
    }
    let lc = a[d];
    let b: Vec<Complex64> = a.iter().map(|c| c / lc).collect();
    if d == 1 {
        roots.push(-b[0]);
        return Ok(roots);
    }
    let radius = 1.0 + b[..d].iter().map(|c| c.norm()).fold(0.0, f64::max);
    // a tighter start for well-scaled inputs: geometric mean of the root moduli
    let start = b[0].norm().powf(1.0 / d as f64).clamp(1e-3, radius);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            Complex64::from_polar(
                start,
                2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4,
            )
        })
        .collect();
    let mut done = vec![false; d];
    for _ in 0..MAX_ITER {
        let mut all_done = true;
        for k in 0..d {
            if done[k] {
                continue;
            }
            let (p, dp) = horner(&b, z[k]);
            if p.norm() == 0.0 {
                done[k] = true;
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::zero();
            for j in 0..d {
                if j != k {
                    let diff = z[k] - z[j];
                    if diff.norm() > 0.0 {
                        s += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - ratio * s;
            let w = if denom.norm() > 0.0 && denom.is_finite() {
                ratio / denom
            } else {
                ratio
            };
            if !w.is_finite() {
                // stationary point of p: nudge off it
                let bump = Complex64::new(1e-3, 1e-3) * (1.0 + z[k].norm());
                z[k] += bump;
                all_done = false;
                continue;
            }
            z[k] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * (1.0 + z[k].norm()) {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    // a few Newton steps on the original coefficients
    for r in &mut z {
        for _ in 0..3 {
            let (p, dp) = horner(&b, *r);
            if dp.norm() == 0.0 || p.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() || step.norm() > 1e-6 * (1.0 + r.norm()) {
                break;
            }
            *r -= step;
        }
    }
    if z.iter().any(|r| !r.is_finite()) {
        return Err(Error::NonConvergence {
            best_residual: f64::INFINITY,
        });
    }
    roots.extend(z);
    Ok(roots)
}

/// Merges roots closer than `tol` relative to their magnitude.
/// Returns (centre, cluster size, cluster radius).
pub fn cluster_roots(roots: &[Complex64], tol: f64) -> Vec<(Complex64, usize, f64)> {
    let mut used = vec![false; roots.len()];
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let mut members = vec![roots[i]];
        used[i] = true;
        // grow the cluster transitively
        let mut grew = true;
        while grew {
            grew = false;
            for j in 0..roots.len() {
                if used[j] {
                    continue;
                }
                if members
                    .iter()
                    .any(|m| (m - roots[j]).norm() <= tol * (1.0 + m.norm()))
                {
                    members.push(roots[j]);
                    used[j] = true;
                    grew = true;
                }
            }
        }
        let centre = members.iter().sum::<Complex64>() / members.len() as f64;
        let radius = members
            .iter()
            .map(|m| (m - centre).norm())
            .fold(0.0, f64::max);
        out.push((centre, members.len(), radius));
    }
    out
}
