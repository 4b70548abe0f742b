//! Hefer decomposition, Bezoutian coefficients and the residue division identity.

mod toric;

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{cr_to_c64, CoeffKind, Coefficient, ComplexRational, Mode, MultiPoly, PolySystem};
use crate::residues::{self, Method, PoweredMethod, QuadOptions, ResidueValue};
use crate::vanishing::monomials_of_degree;
use crate::zeros::ZeroSet;

pub use toric::{toric_truncation_predicate, verify_toric_division, ToricDivisionReport};

pub const DIV_TOL: f64 = 1e-8;
pub const DIV_SAMPLES: usize = 64;
pub const MEMBER_TOL: f64 = 1e-9;

/// Entries Q_jk in 2n variables, X₁..Xₙ then Y₁..Yₙ.
#[derive(Debug, Clone, PartialEq)]
pub struct HeferMatrix {
    pub n: usize,
    pub entries: Vec<Vec<MultiPoly>>,
}

fn negate(c: &Coefficient) -> Coefficient {
    match c {
        Coefficient::Exact(v) => Coefficient::Exact(-v.clone()),
        Coefficient::Float(v) => Coefficient::Float(-v),
    }
}

/// Difference quotient of one term c·Z^e in slot k: X in slots before k, Y after.
fn term_quotient(n: usize, k: usize, e: &[i64], c: &Coefficient, out: &mut Vec<(Vec<i64>, Coefficient)>) {
    let mut base = vec![0i64; 2 * n];
    for i in 0..n {
        if i < k {
            base[i] = e[i];
        } else if i > k {
            base[n + i] = e[i];
        }
    }
    let ek = e[k];
    if ek > 0 {
        // (Y^m − X^m)/(Y − X) = Σ Y^t X^{m−1−t}
        for t in 0..ek {
            let mut x = base.clone();
            x[k] = ek - 1 - t;
            x[n + k] = t;
            out.push((x, c.clone()));
        }
    } else if ek < 0 {
        // (Y^{−m} − X^{−m})/(Y − X) = −Σ Y^{t−m} X^{−1−t}
        let m = -ek;
        for t in 0..m {
            let mut x = base.clone();
            x[k] = -1 - t;
            x[n + k] = t - m;
            out.push((x, negate(c)));
        }
    }
}

fn hefer_any(sys: &PolySystem, mode: Mode) -> Result<HeferMatrix> {
    let n = sys.n();
    let mut entries = Vec::with_capacity(n);
    for p in sys.equations() {
        let mut row = Vec::with_capacity(n);
        for k in 0..n {
            let mut terms = Vec::new();
            for (e, c) in p.terms() {
                term_quotient(n, k, &e.0, c, &mut terms);
            }
            let entry = if terms.is_empty() {
                MultiPoly::zero_with_kind(2 * n, mode, p.kind())
            } else {
                MultiPoly::from_terms(2 * n, mode, terms)?
            };
            row.push(entry);
        }
        entries.push(row);
    }
    Ok(HeferMatrix { n, entries })
}

/// Telescoping Hefer matrix: Σ_k Q_jk(X,Y)(Y_k − X_k) = P_j(Y) − P_j(X).
pub fn hefer_decompose(sys: &PolySystem) -> Result<HeferMatrix> {
    if sys.mode() == Mode::Laurent {
        return Err(Error::LaurentMode);
    }
    hefer_any(sys, Mode::Ordinary)
}

/// The same telescoping construction with Laurent difference quotients.
pub fn hefer_decompose_laurent(sys: &PolySystem) -> Result<HeferMatrix> {
    hefer_any(sys, Mode::Laurent)
}

impl HeferMatrix {
    /// Σ_k Q_jk(X,Y)(Y_k − X_k) − (P_j(Y) − P_j(X)), which should be zero.
    pub fn row_defect(&self, sys: &PolySystem, j: usize) -> Result<MultiPoly> {
        let n = self.n;
        let mode = self.entries[j][0].mode();
        let kind = sys.equation(j).kind();
        let mut lhs = MultiPoly::zero_with_kind(2 * n, mode, kind);
        for k in 0..n {
            let diff = MultiPoly::var(2 * n, mode, n + k).try_sub(&MultiPoly::var(2 * n, mode, k))?;
            let diff = if kind == CoeffKind::Float { diff.to_float() } else { diff };
            lhs = lhs.try_add(&self.entries[j][k].try_mul(&diff)?)?;
        }
        let p = sys.equation(j);
        let px = p.remap_vars(2 * n, &(0..n).collect::<Vec<_>>())?;
        let py = p.remap_vars(2 * n, &(n..2 * n).collect::<Vec<_>>())?;
        let px = if mode == Mode::Laurent { px.to_laurent() } else { px };
        let py = if mode == Mode::Laurent { py.to_laurent() } else { py };
        lhs.try_sub(&py.try_sub(&px)?)
    }

    /// det[Q_jk] by the Leibniz expansion.
    pub fn determinant(&self) -> Result<MultiPoly> {
        let n = self.n;
        let mode = self.entries[0][0].mode();
        let kind = self.entries[0][0].kind();
        let mut total = MultiPoly::zero_with_kind(2 * n, mode, kind);
        for (perm, sign) in permutations(n) {
            let mut term = MultiPoly::constant(2 * n, mode, Coefficient::one(kind));
            for (j, &k) in perm.iter().enumerate() {
                term = term.try_mul(&self.entries[j][k])?;
                if term.is_zero() {
                    break;
                }
            }
            total = if sign > 0 { total.try_add(&term)? } else { total.try_sub(&term)? };
        }
        Ok(total)
    }
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    if n == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        // insert n−1 at each position; moving it left by one flips the sign
        for pos in (0..=p.len()).rev() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            let flips = (p.len() - pos) as i32;
            out.push((q, if flips % 2 == 0 { s } else { -s }));
        }
    }
    out
}

/// The coefficients γ_{α,β} of det[Q_jk(X,Y)] = Σ γ_{α,β} X^α Y^β.
#[derive(Debug, Clone, PartialEq)]
pub struct BezoutianCoefficients {
    pub n: usize,
    pub det: MultiPoly,
}

impl BezoutianCoefficients {
    pub fn entries(&self) -> Vec<(Vec<i64>, Vec<i64>, Coefficient)> {
        self.det
            .terms()
            .map(|(e, c)| (e.0[..self.n].to_vec(), e.0[self.n..].to_vec(), c.clone()))
            .collect()
    }

    pub fn gamma(&self, alpha: &[i64], beta: &[i64]) -> Option<Coefficient> {
        let key: Vec<i64> = alpha.iter().chain(beta).copied().collect();
        self.det.coefficient(&key).cloned()
    }

    /// Distinct α in graded-lex order.
    pub fn alphas(&self) -> Vec<Vec<i64>> {
        let mut a: Vec<Vec<i64>> = self.entries().into_iter().map(|(a, _, _)| a).collect();
        a.sort_by(|x, y| x.iter().sum::<i64>().cmp(&y.iter().sum()).then_with(|| y.cmp(x)));
        a.dedup();
        a
    }

    pub fn max_total_degree(&self) -> i64 {
        self.det.terms().map(|(e, _)| e.0.iter().sum::<i64>()).max().unwrap_or(0)
    }

    pub fn max_abs_gamma(&self) -> f64 {
        self.det.max_abs_coeff()
    }

    /// det[Q_jk](X, X), to compare with the Jacobian determinant.
    pub fn diagonal(&self) -> Result<MultiPoly> {
        let n = self.n;
        let map: Vec<usize> = (0..n).chain(0..n).collect();
        self.det.remap_vars(n, &map)
    }
}

pub fn bezoutian_det(h: &HeferMatrix) -> Result<BezoutianCoefficients> {
    Ok(BezoutianCoefficients {
        n: h.n,
        det: h.determinant()?,
    })
}

/// All μ ∈ Nⁿ with Σ(μⱼ+1)δⱼ ≤ |α| + D + n, graded-lex ordered.
pub fn admissible_mu(alpha: &[i64], d: i64, delta: &[BigRational]) -> Result<Vec<Vec<u32>>> {
    if delta.iter().any(|x| !x.is_positive()) {
        return Err(Error::NonpositiveDelta);
    }
    let n = delta.len();
    let bound = BigRational::from_integer((alpha.iter().sum::<i64>() + d + n as i64).into());
    let base: BigRational = delta.iter().fold(BigRational::zero(), |a, b| a + b);
    if base > bound {
        return Ok(Vec::new());
    }
    let min = delta.iter().min().unwrap();
    let max_total = ((&bound - &base) / min).floor().to_integer().to_i64().ok_or(Error::ExponentOverflow)?;
    let mut out = Vec::new();
    for t in 0..=max_total {
        for mu in monomials_of_degree(n, t) {
            let w = mu
                .iter()
                .zip(delta)
                .fold(base.clone(), |acc, (&m, d)| acc + d * BigRational::from_integer(m.into()));
            if w <= bound {
                out.push(mu.iter().map(|&m| m as u32).collect());
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivisionTerm {
    pub beta: Vec<i64>,
    pub mu: Vec<u32>,
    pub coefficient: Complex64,
    pub exact: Option<ComplexRational>,
    /// How the residue factors were obtained (the least exact one, if mixed).
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivisionCertificate {
    pub terms: Vec<DivisionTerm>,
    /// The μ = 0 part Σ coefficient·Y^β.
    pub remainder: MultiPoly,
    pub samples: usize,
    pub seed: u64,
    pub max_deviation: f64,
    pub worst_sample: usize,
    pub tolerance: f64,
    /// ⟨μ+1,δ⟩ + |β| ≤ ΣD + deg Q on every surviving term.
    pub exponent_constraint: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DivisionTermJson {
    pub beta: Vec<i64>,
    pub mu: Vec<u32>,
    pub coefficient: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<[String; 2]>,
    pub method: Method,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VerificationJson {
    pub samples: usize,
    pub seed: u64,
    pub max_deviation: f64,
    pub worst_sample: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CertificateJson {
    pub terms: Vec<DivisionTermJson>,
    pub remainder: String,
    pub verification: VerificationJson,
    pub exponent_constraint: bool,
}

impl DivisionCertificate {
    pub fn verified(&self) -> bool {
        self.max_deviation <= self.tolerance
    }

    /// Σ coefficient·Y^β·P(Y)^μ.
    pub fn evaluate(&self, sys: &PolySystem, y: &[Complex64]) -> Result<Complex64> {
        let pv = sys.evaluate(y)?;
        Ok(self
            .terms
            .iter()
            .map(|t| {
                let mono: Complex64 = y.iter().zip(&t.beta).map(|(z, &b)| z.powi(b as i32)).product();
                let pw: Complex64 = pv.iter().zip(&t.mu).map(|(p, &m)| p.powi(m as i32)).product();
                t.coefficient * mono * pw
            })
            .sum())
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            terms: self
                .terms
                .iter()
                .map(|t| DivisionTermJson {
                    beta: t.beta.clone(),
                    mu: t.mu.clone(),
                    coefficient: [t.coefficient.re, t.coefficient.im],
                    exact: t.exact.as_ref().map(|c| {
                        [crate::poly::format_rational(&c.re), crate::poly::format_rational(&c.im)]
                    }),
                    method: t.method,
                })
                .collect(),
            remainder: crate::poly::parse::serialize(&self.remainder),
            verification: VerificationJson {
                samples: self.samples,
                seed: self.seed,
                max_deviation: self.max_deviation,
                worst_sample: self.worst_sample,
                tolerance: self.tolerance,
            },
            exponent_constraint: self.exponent_constraint,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivisionOptions {
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub quad: QuadOptions,
}

impl Default for DivisionOptions {
    fn default() -> Self {
        DivisionOptions {
            samples: DIV_SAMPLES,
            seed: 0,
            tolerance: DIV_TOL,
            quad: QuadOptions::default(),
        }
    }
}

fn is_exact_poly(p: &MultiPoly) -> bool {
    p.kind() == CoeffKind::Exact
}

/// Res[Q dX / P^{μ+1}] by the most exact method available.
pub fn powered_residue_auto(q: &MultiPoly, sys: &PolySystem, mu: &[u32], zeros: &ZeroSet, quad: QuadOptions) -> Result<ResidueValue> {
    let exact = sys.is_exact() && is_exact_poly(q);
    if exact && (sys.n() == 1 || residues::is_separable(sys)) {
        return residues::powered_global_residue(q, sys, mu, PoweredMethod::Exact);
    }
    if mu.iter().all(|&m| m == 0) {
        return residues::global_residue(q, sys, zeros);
    }
    if zeros.all_simple() {
        return residues::powered_global_residue_local(q, sys, mu, zeros);
    }
    residues::powered_global_residue(
        q,
        sys,
        mu,
        PoweredMethod::BochnerMartinelli {
            radius: residues::suggest_radius(zeros),
            opts: quad,
        },
    )
}

fn rank(m: Method) -> u8 {
    match m {
        Method::PartialFractions => 0,
        Method::LocalSum => 1,
        Method::BochnerMartinelli => 2,
    }
}

/// Random complex sample points with coordinates in the unit square.
pub(crate) fn sample_points(n: usize, count: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
        .collect()
}

/// Builds the truncated division identity and measures it at random points,
/// without failing on a large deviation.
pub fn build_division(q: &MultiPoly, sys: &PolySystem, delta: &[BigRational], zeros: &ZeroSet, opts: DivisionOptions) -> Result<DivisionCertificate> {
    let n = sys.n();
    if q.nvars() != n {
        return Err(Error::NvarsMismatch { left: n, right: q.nvars() });
    }
    if delta.len() != n {
        return Err(Error::NvarsMismatch { left: n, right: delta.len() });
    }
    let bez = bezoutian_det(&hefer_decompose(sys)?)?;
    let dq = if q.is_zero() { 0 } else { q.total_degree()? };

    // residue factors for every admissible (α, μ)
    let mut jobs = Vec::new();
    for alpha in bez.alphas() {
        for mu in admissible_mu(&alpha, dq, delta)? {
            jobs.push((alpha.clone(), mu));
        }
    }
    let factors: BTreeMap<(Vec<i64>, Vec<u32>), ResidueValue> = jobs
        .into_par_iter()
        .map(|(alpha, mu)| {
            let qa = q.mul_monomial(&alpha)?;
            let r = powered_residue_auto(&qa, sys, &mu, zeros, opts.quad)?;
            Ok(((alpha, mu), r))
        })
        .collect::<Result<_>>()?;

    // coefficient of Y^β P(Y)^μ: Σ_α γ_{α,β}·Res[Q X^α / P^{μ+1}]
    struct Acc {
        value: Complex64,
        exact: Option<ComplexRational>,
        method: Method,
    }
    let mut acc: BTreeMap<(Vec<u32>, Vec<i64>), Acc> = BTreeMap::new();
    for (alpha, beta, gamma) in bez.entries() {
        for ((a, mu), r) in factors.range((alpha.clone(), Vec::new())..) {
            if *a != alpha {
                break;
            }
            let slot = acc.entry((mu.clone(), beta.clone())).or_insert(Acc {
                value: Complex64::zero(),
                exact: Some(ComplexRational::zero()),
                method: Method::PartialFractions,
            });
            slot.value += gamma.to_float() * r.value;
            slot.exact = match (slot.exact.take(), gamma.as_exact(), &r.exact) {
                (Some(s), Some(g), Some(e)) => Some(s + g * e),
                _ => None,
            };
            if rank(r.method) > rank(slot.method) {
                slot.method = r.method;
            }
        }
    }
    let mut terms: Vec<DivisionTerm> = acc
        .into_iter()
        .filter_map(|((mu, beta), a)| {
            let value = a.exact.as_ref().map(cr_to_c64).unwrap_or(a.value);
            let negligible = match &a.exact {
                Some(e) => e.is_zero(),
                None => value.norm() == 0.0,
            };
            (!negligible).then_some(DivisionTerm {
                beta,
                mu,
                coefficient: value,
                exact: a.exact,
                method: a.method,
            })
        })
        .collect();
    terms.sort_by(|a, b| {
        let da: u32 = a.mu.iter().sum();
        let db: u32 = b.mu.iter().sum();
        da.cmp(&db)
            .then_with(|| b.mu.cmp(&a.mu))
            .then_with(|| a.beta.iter().sum::<i64>().cmp(&b.beta.iter().sum()))
            .then_with(|| b.beta.cmp(&a.beta))
    });

    let remainder = remainder_poly(n, &terms)?;
    let degs: Vec<i64> = sys.equations().iter().map(|p| p.total_degree()).collect::<Result<_>>()?;
    let big_d: i64 = degs.iter().sum::<i64>() + dq;
    let exponent_constraint = terms.iter().all(|t| {
        let w = t
            .mu
            .iter()
            .zip(delta)
            .fold(BigRational::zero(), |a, (&m, d)| a + d * BigRational::from_integer((m as i64 + 1).into()));
        w + BigRational::from_integer(t.beta.iter().sum::<i64>().into()) <= BigRational::from_integer(big_d.into())
    });

    let mut cert = DivisionCertificate {
        terms,
        remainder,
        samples: opts.samples,
        seed: opts.seed,
        max_deviation: 0.0,
        worst_sample: 0,
        tolerance: opts.tolerance,
        exponent_constraint,
    };
    for (i, y) in sample_points(n, opts.samples, opts.seed).iter().enumerate() {
        let want = q.evaluate(y)?;
        let got = cert.evaluate(sys, y)?;
        let dev = (want - got).norm() / want.norm().max(1.0);
        if dev > cert.max_deviation || dev.is_nan() {
            cert.max_deviation = if dev.is_nan() { f64::INFINITY } else { dev };
            cert.worst_sample = i;
        }
    }
    Ok(cert)
}

fn remainder_poly(n: usize, terms: &[DivisionTerm]) -> Result<MultiPoly> {
    let zero_mu: Vec<&DivisionTerm> = terms.iter().filter(|t| t.mu.iter().all(|&m| m == 0)).collect();
    let all_exact = zero_mu.iter().all(|t| t.exact.is_some());
    let list = zero_mu.into_iter().map(|t| {
        let c = match (&t.exact, all_exact) {
            (Some(e), true) => Coefficient::Exact(e.clone()),
            _ => Coefficient::Float(t.coefficient),
        };
        (t.beta.clone(), c)
    });
    let kind = if all_exact { CoeffKind::Exact } else { CoeffKind::Float };
    let p = MultiPoly::from_terms(n, Mode::Ordinary, list)?;
    Ok(if p.is_zero() { MultiPoly::zero_with_kind(n, Mode::Ordinary, kind) } else { p })
}

/// The division identity Q(Y) = Σ coefficient·Y^β·P(Y)^μ, verified at random points.
pub fn assemble_division(q: &MultiPoly, sys: &PolySystem, delta: &[BigRational], zeros: &ZeroSet) -> Result<DivisionCertificate> {
    assemble_division_with(q, sys, delta, zeros, DivisionOptions::default())
}

pub fn assemble_division_with(
    q: &MultiPoly,
    sys: &PolySystem,
    delta: &[BigRational],
    zeros: &ZeroSet,
    opts: DivisionOptions,
) -> Result<DivisionCertificate> {
    let cert = build_division(q, sys, delta, zeros, opts)?;
    if !cert.verified() {
        return Err(Error::ReconstructionFailed {
            deviation: cert.max_deviation,
            sample: cert.worst_sample,
        });
    }
    Ok(cert)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    InIdeal,
    NotInIdeal,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub verdict: Membership,
    /// (α, Res[Q X^α dX/P]) over the α of the Bezoutian support.
    pub residues: Vec<(Vec<i64>, [f64; 2])>,
    pub tolerance: f64,
    pub max_abs: f64,
}

/// Q ∈ (P₁,…,Pₙ) iff Res[Q X^α dX/P] = 0 for every α in the Bezoutian support.
pub fn membership_test(q: &MultiPoly, sys: &PolySystem, zeros: &ZeroSet) -> Result<MembershipReport> {
    if q.nvars() != sys.n() {
        return Err(Error::NvarsMismatch { left: sys.n(), right: q.nvars() });
    }
    let bez = bezoutian_det(&hefer_decompose(sys)?)?;
    let rows: Vec<(Vec<i64>, Complex64, f64)> = bez
        .alphas()
        .into_par_iter()
        .map(|alpha| {
            let qa = q.mul_monomial(&alpha)?;
            let terms = residues::local_residues(&qa, sys, zeros)?;
            let size = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
            Ok((alpha, residues::bm::pairwise_sum(&terms), size))
        })
        .collect::<Result<_>>()?;
    let local_max = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    let tolerance = MEMBER_TOL * (1.0 + bez.max_abs_gamma()) * (1.0 + local_max);
    let max_abs = rows.iter().map(|r| r.1.norm()).fold(0.0, f64::max);
    let verdict = if max_abs <= tolerance {
        Membership::InIdeal
    } else if max_abs > 100.0 * tolerance {
        Membership::NotInIdeal
    } else {
        Membership::Inconclusive
    };
    Ok(MembershipReport {
        verdict,
        residues: rows.into_iter().map(|(a, v, _)| (a, [v.re, v.im])).collect(),
        tolerance,
        max_abs,
    })
}
