//! Cayley–Bacharach: polynomials from a monomial space vanishing at all zeros
//! but one must vanish at the remaining one.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::monomials_up_to;
use crate::error::{Error, Result};
use crate::newton::{minkowski_sum_all, ContainMode, LatticePolytope};
use crate::poly::PolySystem;
use crate::zeros::ZeroSet;

pub const SVD_REL_TOL: f64 = 1e-8;
/// Vanishing tolerance relative to the norm of the monomial vector at α.
pub const CB_TOL: f64 = 1e-6;

/// The monomial space.
#[derive(Debug, Clone)]
pub enum CbSpace {
    /// Monomials of total degree ≤ bound.
    Degree(i64),
    /// Lattice points of the interior of δ₁+⋯+δₙ.
    Interior(Vec<LatticePolytope>),
    Exponents(Vec<Vec<i64>>),
}

impl CbSpace {
    pub fn exponents(&self, n: usize) -> Result<Vec<Vec<i64>>> {
        match self {
            CbSpace::Degree(b) => Ok(monomials_up_to(n, *b)),
            CbSpace::Interior(d) => {
                let sum = minkowski_sum_all(d)?;
                if !sum.is_full_dimensional() {
                    return Err(Error::DimensionDeficient);
                }
                Ok(sum.lattice_points(ContainMode::Interior))
            }
            CbSpace::Exponents(e) => Ok(e.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CbZero {
    pub index: usize,
    pub kernel_dim: usize,
    /// Largest |g(α)| over unit-norm kernel polynomials g.
    pub violation: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// The kernel polynomial attaining the violation, as coefficients on `monomials`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CbReport {
    pub monomials: Vec<Vec<i64>>,
    pub per_zero: Vec<CbZero>,
    pub confirmed: bool,
}

impl CbReport {
    pub fn max_violation(&self) -> f64 {
        self.per_zero.iter().map(|z| z.violation).fold(0.0, f64::max)
    }
}

fn eval_monomial(p: &[Complex64], e: &[i64]) -> Complex64 {
    p.iter().zip(e).map(|(z, &k)| z.powi(k as i32)).product()
}

/// Orthonormal basis of the kernel of `m` (rows × cols), as coefficient vectors.
fn kernel(m: &DMatrix<Complex64>) -> Result<Vec<Vec<Complex64>>> {
    let cols = m.ncols();
    // pad to square so the SVD returns a full right factor
    let rows = m.nrows().max(cols);
    let mut a = DMatrix::<Complex64>::zeros(rows, cols);
    a.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let threshold = SVD_REL_TOL * smax;
    let mut out = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if smax == 0.0 || s < threshold {
            out.push(vt.row(i).iter().map(|c| c.conj()).collect());
        } else if s < 10.0 * threshold {
            return Err(Error::IllConditioned { sigma: s, threshold });
        }
    }
    Ok(out)
}

/// Runs the check on explicit points, which need not be zeros of anything.
pub fn cayley_bacharach_points(points: &[Vec<Complex64>], monomials: &[Vec<i64>]) -> Result<CbReport> {
    let k = points.len();
    let m = monomials.len();
    let full = DMatrix::from_fn(k, m, |i, j| eval_monomial(&points[i], &monomials[j]));
    let mut per_zero = Vec::with_capacity(k);
    for a in 0..k {
        let rest = full.clone().remove_row(a);
        let basis = kernel(&rest)?;
        let at: Vec<Complex64> = full.row(a).iter().cloned().collect();
        let scale = at.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let vals: Vec<Complex64> = basis
            .iter()
            .map(|g| g.iter().zip(&at).map(|(c, v)| c * v).sum())
            .collect();
        let violation = vals.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        // the unit kernel vector attaining the violation
        let worst = (violation > 0.0).then(|| {
            (0..m)
                .map(|j| {
                    let c: Complex64 = basis.iter().zip(&vals).map(|(g, v)| g[j] * v.conj()).sum::<Complex64>() / violation;
                    [c.re, c.im]
                })
                .collect()
        });
        let tolerance = CB_TOL * scale;
        per_zero.push(CbZero {
            index: a,
            kernel_dim: basis.len(),
            violation,
            tolerance,
            pass: violation <= tolerance,
            worst,
        });
    }
    let confirmed = per_zero.iter().all(|z| z.pass);
    Ok(CbReport {
        monomials: monomials.to_vec(),
        per_zero,
        confirmed,
    })
}

pub fn cayley_bacharach_check(sys: &PolySystem, space: &CbSpace, zeros: &ZeroSet) -> Result<CbReport> {
    if !zeros.all_simple() {
        return Err(Error::MultipleZeroUnsupported);
    }
    let monomials = space.exponents(sys.n())?;
    if let Some(e) = monomials.iter().find(|e| e.len() != sys.n()) {
        return Err(Error::NvarsMismatch { left: sys.n(), right: e.len() });
    }
    cayley_bacharach_points(&zeros.points(), &monomials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse::parse, Mode};
    use crate::zeros::{solve, solve_torus};

    fn sys(eqs: &[&str], mode: Mode) -> PolySystem {
        PolySystem::new(eqs.iter().map(|e| parse(e, eqs.len(), mode).unwrap()).collect()).unwrap()
    }

    fn re(x: f64, y: f64) -> Vec<Complex64> {
        vec![Complex64::new(x, 0.0), Complex64::new(y, 0.0)]
    }

    #[test]
    fn conics_through_six_points() {
        let s = sys(&["X1^3 - X1", "X2^2 - 1"], Mode::Ordinary);
        let z = solve(&s).unwrap();
        let r = cayley_bacharach_check(&s, &CbSpace::Degree(2), &z).unwrap();
        assert!(r.confirmed);
        assert_eq!(r.monomials.len(), 6);
        assert!(r.per_zero.iter().all(|p| p.kernel_dim == 1));
    }

    #[test]
    fn moved_point_breaks_it() {
        let mut pts: Vec<Vec<Complex64>> = [-1.0, 0.0, 1.0]
            .iter()
            .flat_map(|&x| [-1.0, 1.0].map(|y| re(x, y)))
            .collect();
        pts[3] = re(0.0, 1.1);
        let r = cayley_bacharach_points(&pts, &monomials_up_to(2, 2)).unwrap();
        assert!(!r.confirmed);
        assert!(r.per_zero[3].violation > 1e-3);
        // the reported polynomial vanishes at the other five points
        let g = r.per_zero[3].worst.clone().unwrap();
        for (i, p) in pts.iter().enumerate().filter(|(i, _)| *i != 3) {
            let v: Complex64 = g
                .iter()
                .zip(&r.monomials)
                .map(|(c, e)| Complex64::new(c[0], c[1]) * eval_monomial(p, e))
                .sum();
            assert!(v.norm() < 1e-9, "point {i}");
        }
    }

    #[test]
    fn lines_through_corners_have_empty_kernel() {
        let s = sys(&["X1^2 - 1", "X2^2 - 1"], Mode::Ordinary);
        let z = solve(&s).unwrap();
        let r = cayley_bacharach_check(&s, &CbSpace::Degree(1), &z).unwrap();
        assert!(r.confirmed);
        assert!(r.per_zero.iter().all(|p| p.kernel_dim == 0));
    }

    #[test]
    fn toric_interior_space() {
        let s = sys(&["X1 + X2 + X1^-1*X2^-1 - 5", "2*X1 - X2 + 3*X1^-1*X2^-1 + 1"], Mode::Laurent);
        let z = solve_torus(&s).unwrap();
        assert_eq!(z.len(), 3);
        let deltas: Vec<LatticePolytope> = s
            .equations()
            .iter()
            .map(|p| crate::newton::newton_polytope(p).unwrap())
            .collect();
        let r = cayley_bacharach_check(&s, &CbSpace::Interior(deltas), &z).unwrap();
        assert_eq!(r.monomials.len(), 4);
        assert!(r.confirmed, "{:?}", r.per_zero);
    }
}
