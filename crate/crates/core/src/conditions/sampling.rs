//! Low-discrepancy sampling and a small derivative-free local descent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    out
}

/// Randomly shifted Halton sequence in [0,1)^dim; the shift is drawn from `seed`.
#[derive(Debug, Clone)]
pub struct Halton {
    shift: Vec<f64>,
}

impl Halton {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim <= PRIMES.len(), "Halton dimension too large");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Halton {
            shift: (0..dim).map(|_| rng.gen::<f64>()).collect(),
        }
    }

    pub fn point(&self, index: u64) -> Vec<f64> {
        self.shift
            .iter()
            .zip(PRIMES)
            .map(|(s, p)| (radical_inverse(index + 1, p) + s).fract())
            .collect()
    }
}

/// Maps uniform pairs to Gaussian pairs (Box–Muller); `u.len()` must be even.
fn gaussians(u: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(u.len());
    for pair in u.chunks(2) {
        let r = (-2.0 * (1.0 - pair[0]).max(1e-300).ln()).sqrt();
        let a = 2.0 * std::f64::consts::PI * pair[1];
        out.push(r * a.cos());
        out.push(r * a.sin());
    }
    out
}

/// Point on the unit sphere of R^m (m even) from a uniform point in [0,1)^m.
pub fn sphere_point(u: &[f64]) -> Vec<f64> {
    let g = gaussians(u);
    normalize(&g)
}

pub fn normalize(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n == 0.0 {
        let mut e = vec![0.0; v.len()];
        e[0] = 1.0;
        return e;
    }
    v.iter().map(|x| x / n).collect()
}

/// Evaluates `f` at every sample and returns the minimizer with its value;
/// ties resolve to the lowest index so the result does not depend on scheduling.
pub fn sampled_min<F>(samples: &[Vec<f64>], f: F) -> Option<(usize, f64)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| (i, f(s)))
        .filter(|(_, v)| !v.is_nan())
        .reduce_with(|a, b| {
            if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) {
                b
            } else {
                a
            }
        })
}

/// Indices of the `k` smallest values.
pub fn best_k<F>(samples: &[Vec<f64>], f: F, k: usize) -> Vec<(usize, f64)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let mut vals: Vec<(usize, f64)> = samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| (i, f(s)))
        .filter(|(_, v)| !v.is_nan())
        .collect();
    vals.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    vals.truncate(k);
    vals
}

/// Coordinate descent: `sweeps` passes of ±h trial steps per coordinate, with the
/// step halved after a pass without improvement. `project` maps trial points back
/// onto the feasible set.
pub fn coordinate_descent<F, P>(start: &[f64], h0: f64, sweeps: usize, f: F, project: P) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
    P: Fn(&[f64]) -> Vec<f64>,
{
    let mut x = project(start);
    let mut fx = f(&x);
    let mut h = h0;
    for _ in 0..sweeps {
        let mut improved = false;
        for i in 0..x.len() {
            for sign in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] += sign * h;
                let y = project(&y);
                let fy = f(&y);
                if fy < fx {
                    x = y;
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    (x, fx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_is_deterministic_and_in_range() {
        let a = Halton::new(4, 7);
        let b = Halton::new(4, 7);
        for i in 0..100 {
            let p = a.point(i);
            assert_eq!(p, b.point(i));
            assert!(p.iter().all(|x| (0.0..1.0).contains(x)));
        }
    }

    #[test]
    fn sphere_points_have_unit_norm() {
        let h = Halton::new(4, 0);
        for i in 0..50 {
            let s = sphere_point(&h.point(i));
            let n: f64 = s.iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn descent_finds_quadratic_minimum() {
        let (x, fx) = coordinate_descent(&[1.0, -2.0], 0.5, 50, |v| (v[0] - 0.3).powi(2) + v[1].powi(2), |v| v.to_vec());
        assert!(fx < 1e-6);
        assert!((x[0] - 0.3).abs() < 1e-3);
    }
}
