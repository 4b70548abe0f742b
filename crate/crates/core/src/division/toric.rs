//! The toric division identity for one-variable Laurent systems.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{bezoutian_det, hefer_decompose_laurent, DivisionOptions, DivisionTerm};
use crate::error::{Error, Result};
use crate::newton::{is_good_polyhedron, minkowski_sum_all, newton_polytope, weighted_sum, ContainMode, LatticePolytope};
use crate::poly::{cr_to_c64, Coefficient, ComplexRational, Mode, MultiPoly, PolySystem};
use crate::residues::{exact::torus_residue_sum, Method};

const MU_CAP: u32 = 256;

fn check_origin_interior(deltas: &[LatticePolytope]) -> Result<()> {
    for d in deltas {
        if !d.is_full_dimensional() {
            return Err(Error::DimensionDeficient);
        }
        if !d.contains_int(&vec![0; d.dim()], ContainMode::Interior) {
            return Err(Error::Input("each delta must contain the origin in its interior".into()));
        }
    }
    Ok(())
}

/// True iff Δ_Q + α + (1,…,1) is not contained in the interior of Σ(μⱼ+1)δⱼ,
/// i.e. the (α, μ) term survives truncation.
pub fn toric_truncation_predicate(delta_q: &LatticePolytope, alpha: &[i64], mu: &[u32], deltas: &[LatticePolytope]) -> Result<bool> {
    check_origin_interior(deltas)?;
    let sum = weighted_sum(deltas, mu)?;
    if alpha.len() != sum.dim() || delta_q.dim() != sum.dim() {
        return Err(Error::NvarsMismatch {
            left: sum.dim(),
            right: alpha.len(),
        });
    }
    let shift: Vec<BigRational> = alpha.iter().map(|&a| BigRational::from_integer((a + 1).into())).collect();
    let moved = delta_q.translate(&shift)?;
    Ok(!moved.vertices().iter().all(|v| sum.contains(v, ContainMode::Interior)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToricDivisionReport {
    /// (α, β) pairs of the Hefer determinant with α+β outside Δ₁+⋯+Δₙ.
    pub support_violations: Vec<(Vec<i64>, Vec<i64>)>,
    pub terms: Vec<DivisionTerm>,
    pub remainder: MultiPoly,
    pub samples: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl ToricDivisionReport {
    pub fn verified(&self) -> bool {
        self.max_deviation <= self.tolerance
    }

    pub fn support_ok(&self) -> bool {
        self.support_violations.is_empty()
    }

    pub fn to_json(&self) -> ToricDivisionJson {
        ToricDivisionJson {
            support_violations: self.support_violations.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| (t.beta.clone(), t.mu.clone(), [t.coefficient.re, t.coefficient.im]))
                .collect(),
            remainder: crate::poly::parse::serialize(&self.remainder),
            samples: self.samples,
            max_deviation: self.max_deviation,
            verified: self.verified(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ToricDivisionJson {
    pub support_violations: Vec<(Vec<i64>, Vec<i64>)>,
    pub terms: Vec<(Vec<i64>, Vec<u32>, [f64; 2])>,
    pub remainder: String,
    pub samples: usize,
    pub max_deviation: f64,
    pub verified: bool,
}

/// G(Y) = Σ γ_{α,β}·Res[G X^{α+1} dX/F^{μ+1}]_T·Y^β·F(Y)^μ over the surviving (α, μ),
/// checked at random torus points. One variable, exact residues.
pub fn verify_toric_division(g: &MultiPoly, sys: &PolySystem, deltas: &[LatticePolytope], opts: DivisionOptions) -> Result<ToricDivisionReport> {
    let n = sys.n();
    if n != 1 {
        return Err(Error::UnsupportedDimension { got: n, max: 1 });
    }
    if g.nvars() != n || deltas.len() != n {
        return Err(Error::NvarsMismatch { left: n, right: g.nvars() });
    }
    if !sys.is_exact() || g.kind() != crate::poly::CoeffKind::Exact {
        return Err(Error::Input("toric division needs exact coefficients".into()));
    }
    let newton: Vec<LatticePolytope> = sys.equations().iter().map(newton_polytope).collect::<Result<_>>()?;
    for d in &newton {
        if !is_good_polyhedron(d)? {
            return Err(Error::NonGoodPolyhedron);
        }
    }
    check_origin_interior(deltas)?;
    let g = g.to_laurent();
    let f = sys.equation(0).to_laurent();
    let bez = bezoutian_det(&hefer_decompose_laurent(sys)?)?;

    let total = minkowski_sum_all(&newton)?;
    let support_violations: Vec<(Vec<i64>, Vec<i64>)> = bez
        .entries()
        .into_iter()
        .filter(|(a, b, _)| {
            let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            !total.contains_int(&s, ContainMode::Closed)
        })
        .map(|(a, b, _)| (a, b))
        .collect();

    let mut acc: BTreeMap<(Vec<u32>, Vec<i64>), ComplexRational> = BTreeMap::new();
    if !g.is_zero() {
        let delta_g = newton_polytope(&g)?;
        for alpha in bez.alphas() {
            let ga = g.mul_monomial(&alpha)?;
            let mut mu = 0u32;
            while toric_truncation_predicate(&delta_g, &alpha, &[mu], deltas)? {
                if mu >= MU_CAP {
                    return Err(Error::Input("toric truncation did not terminate".into()));
                }
                let r = torus_residue_sum(&ga, &f.pow(mu + 1)?)?;
                for (a, beta, gamma) in bez.entries() {
                    if a == alpha {
                        let gamma = gamma.as_exact().ok_or(Error::MixedMode)?;
                        *acc.entry((vec![mu], beta)).or_insert_with(ComplexRational::zero) += gamma * &r;
                    }
                }
                mu += 1;
            }
        }
    }
    let terms: Vec<DivisionTerm> = acc
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|((mu, beta), v)| DivisionTerm {
            beta,
            mu,
            coefficient: cr_to_c64(&v),
            exact: Some(v),
            method: Method::PartialFractions,
        })
        .collect();
    let remainder = MultiPoly::from_terms(
        n,
        Mode::Laurent,
        terms
            .iter()
            .filter(|t| t.mu[0] == 0)
            .map(|t| (t.beta.clone(), Coefficient::Exact(t.exact.clone().unwrap()))),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut max_deviation = 0.0f64;
    for _ in 0..opts.samples {
        let y = [Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..std::f64::consts::TAU))];
        let want = g.evaluate(&y)?;
        let fy = f.evaluate(&y)?;
        let got: Complex64 = terms
            .iter()
            .map(|t| t.coefficient * y[0].powi(t.beta[0] as i32) * fy.powi(t.mu[0] as i32))
            .sum();
        let dev = (want - got).norm() / want.norm().max(1.0);
        max_deviation = max_deviation.max(if dev.is_nan() { f64::INFINITY } else { dev });
    }
    Ok(ToricDivisionReport {
        support_violations,
        terms,
        remainder,
        samples: opts.samples,
        max_deviation,
        tolerance: opts.tolerance,
    })
}
