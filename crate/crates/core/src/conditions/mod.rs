//! Jacobi, Bernstein and properness conditions: exact decisions for n ≤ 2 and
//! sampled estimates otherwise.

pub mod sampling;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::newton::{self, LatticePolytope};
use crate::poly::{
    cr, rational_to_f64, upoly, Coefficient, CompiledPoly, ComplexRational, Mode, MultiPoly,
    PolySystem,
};
use crate::zeros::aberth;
use sampling::{coordinate_descent, normalize, sphere_point, Halton};

pub const FLOOR_TOL: f64 = 1e-8;
pub const DEFAULT_SAMPLES: usize = 4096;
const DESCENT_SWEEPS: usize = 50;
const POLISHED_CANDIDATES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionVerdict {
    pub status: Status,
    /// Point (or direction) where the tested quantity vanishes or is smallest.
    pub witness: Option<Vec<Complex64>>,
    /// Every witness found, when there is more than one.
    pub witnesses: Vec<Vec<Complex64>>,
    pub note: String,
    pub seed: Option<u64>,
    pub floor: Option<f64>,
}

impl ConditionVerdict {
    fn exact(status: Status, witnesses: Vec<Vec<Complex64>>, note: impl Into<String>) -> Self {
        ConditionVerdict {
            status,
            witness: witnesses.first().cloned(),
            witnesses,
            note: note.into(),
            seed: None,
            floor: None,
        }
    }

    pub fn to_json(&self) -> VerdictJson {
        VerdictJson {
            status: self.status,
            floor: self.floor,
            witness: self
                .witness
                .as_ref()
                .map(|w| w.iter().map(|c| [c.re, c.im]).collect()),
            seed: self.seed,
            note: self.note.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VerdictJson {
    pub status: Status,
    pub floor: Option<f64>,
    pub witness: Option<Vec<[f64; 2]>>,
    pub seed: Option<u64>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileVariant {
    Projective(Vec<BigRational>),
    Toric(Vec<LatticePolytope>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropernessProfile {
    pub variant: ProfileVariant,
    pub radius: f64,
    pub samples: usize,
    pub seed: u64,
    /// Estimated floor c; filled in by the estimators.
    pub floor: Option<f64>,
}

impl PropernessProfile {
    pub fn projective(delta: Vec<BigRational>, radius: f64) -> Self {
        PropernessProfile {
            variant: ProfileVariant::Projective(delta),
            radius,
            samples: DEFAULT_SAMPLES,
            seed: 0,
            floor: None,
        }
    }

    pub fn toric(delta: Vec<LatticePolytope>, radius: f64) -> Self {
        PropernessProfile {
            variant: ProfileVariant::Toric(delta),
            radius,
            samples: DEFAULT_SAMPLES,
            seed: 0,
            floor: None,
        }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_radius(&self, radius: f64) -> Self {
        let mut p = self.clone();
        p.radius = radius;
        p.floor = None;
        p
    }
}

fn to_complex(v: &[f64]) -> Vec<Complex64> {
    v.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

// ---------------------------------------------------------------- Jacobi

/// Decides whether the leading forms have a common zero in Cⁿ∖{0}.
pub fn check_jacobi(sys: &PolySystem) -> Result<ConditionVerdict> {
    check_jacobi_seeded(sys, 0)
}

pub fn check_jacobi_seeded(sys: &PolySystem, seed: u64) -> Result<ConditionVerdict> {
    if sys.mode() == Mode::Laurent {
        return Err(Error::LaurentMode);
    }
    let forms = sys
        .equations()
        .iter()
        .map(MultiPoly::leading_form)
        .collect::<Result<Vec<_>>>()?;
    match sys.n() {
        1 => Ok(ConditionVerdict::exact(
            Status::Holds,
            Vec::new(),
            "n=1: the leading coefficient is nonzero",
        )),
        2 if sys.is_exact() => jacobi_binary(&forms),
        _ => jacobi_sampled(&forms, seed),
    }
}

/// Coefficients of p(t, 1) for a binary form p of degree d, ascending in t.
fn binary_dense(p: &MultiPoly, d: usize) -> Result<upoly::UPoly> {
    let mut out = vec![cr(0); d + 1];
    for (e, c) in p.terms() {
        out[e.0[0] as usize] = c.as_exact().ok_or(Error::MixedMode)?.clone();
    }
    Ok(out)
}

fn jacobi_binary(forms: &[MultiPoly]) -> Result<ConditionVerdict> {
    let d1 = forms[0].total_degree()? as usize;
    let d2 = forms[1].total_degree()? as usize;
    let a = binary_dense(&forms[0], d1)?;
    let b = binary_dense(&forms[1], d2)?;
    let res = upoly::det(upoly::sylvester(&a, d1, &b, d2));
    if !res.is_zero() {
        return Ok(ConditionVerdict::exact(
            Status::Holds,
            Vec::new(),
            "exact: resultant of the leading forms is nonzero",
        ));
    }
    let mut dirs = Vec::new();
    // common zeros (t : 1)
    let g = upoly::gcd(&a, &b);
    if upoly::degree(&g).unwrap_or(0) > 0 {
        for t in aberth(&upoly::to_c64(&g))? {
            dirs.push(unit(&[t, Complex64::new(1.0, 0.0)]));
        }
    }
    // the direction (1 : 0) is common when both forms lack the X₁^d term
    let top_a = a.last().is_none_or(|c| c.is_zero()) || d1 == 0;
    let top_b = b.last().is_none_or(|c| c.is_zero()) || d2 == 0;
    if top_a && top_b && d1 > 0 && d2 > 0 {
        dirs.push(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    }
    let note = format!(
        "exact: resultant of the leading forms vanishes; {} common zero(s) at infinity",
        dirs.len()
    );
    Ok(ConditionVerdict::exact(Status::Fails, dirs, note))
}

fn unit(z: &[Complex64]) -> Vec<Complex64> {
    let n = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    z.iter().map(|c| c / n).collect()
}

fn jacobi_sampled(forms: &[MultiPoly], seed: u64) -> Result<ConditionVerdict> {
    let n = forms[0].nvars();
    let compiled: Vec<CompiledPoly> = forms.iter().map(MultiPoly::compile).collect();
    let objective = |v: &[f64]| -> f64 {
        let z = to_complex(&normalize(v));
        compiled.iter().map(|p| p.eval(&z).norm()).sum()
    };
    let halton = Halton::new(2 * n, seed);
    let samples: Vec<Vec<f64>> = (0..DEFAULT_SAMPLES as u64)
        .map(|i| sphere_point(&halton.point(i)))
        .collect();
    let (x, fx) = polish_best(&samples, &objective, |v| normalize(v));
    let z = to_complex(&x);
    let (z, fz) = gauss_newton_projective(&compiled, &z).unwrap_or((z, fx));
    let best = fx.min(fz);
    let mut v = ConditionVerdict {
        status: Status::Inconclusive,
        witness: None,
        witnesses: Vec::new(),
        note: format!("sampled: minimum of the leading forms on the unit sphere is {best:.3e}"),
        seed: Some(seed),
        floor: Some(best),
    };
    if best < FLOOR_TOL {
        v.status = Status::Fails;
        v.witness = Some(z.clone());
        v.witnesses = vec![z];
    }
    Ok(v)
}

/// Gauss–Newton on p(ζ) = 0 in the affine chart ⟨ζ̄₀, ζ⟩ = 1, returning a unit vector.
fn gauss_newton_projective(forms: &[CompiledPoly], z0: &[Complex64]) -> Option<(Vec<Complex64>, f64)> {
    let n = z0.len();
    let mut z = z0.to_vec();
    let anchor: Vec<Complex64> = z0.iter().map(|c| c.conj()).collect();
    for _ in 0..30 {
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for p in forms {
            let (v, g) = p.eval_grad(&z);
            rows.push(g);
            rhs.push(-v);
        }
        let chart: Complex64 = anchor.iter().zip(&z).map(|(a, b)| a * b).sum();
        rows.push(anchor.clone());
        rhs.push(Complex64::new(1.0, 0.0) - chart);
        // normal equations Aᴴ A x = Aᴴ b
        let mut ata = vec![vec![Complex64::zero(); n]; n];
        let mut atb = vec![Complex64::zero(); n];
        for (r, b) in rows.iter().zip(&rhs) {
            for i in 0..n {
                atb[i] += r[i].conj() * b;
                for j in 0..n {
                    ata[i][j] += r[i].conj() * r[j];
                }
            }
        }
        let step = crate::poly::complex_solve(ata, atb)?;
        for (a, s) in z.iter_mut().zip(&step) {
            *a += s;
        }
    }
    let u = unit(&z);
    let val: f64 = forms.iter().map(|p| p.eval(&u).norm()).sum();
    val.is_finite().then_some((u, val))
}

/// Sampled minimum followed by coordinate descent from the best few samples.
fn polish_best<F, P>(samples: &[Vec<f64>], f: &F, project: P) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64 + Sync,
    P: Fn(&[f64]) -> Vec<f64> + Copy,
{
    let mut best = (samples[0].clone(), f64::INFINITY);
    for (i, _) in sampling::best_k(samples, f, POLISHED_CANDIDATES) {
        let spread = 2.0 / (samples.len() as f64).powf(1.0 / samples[i].len() as f64);
        let (x, fx) = coordinate_descent(&samples[i], spread, DESCENT_SWEEPS, f, project);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

// ---------------------------------------------------------------- properness

/// Estimates c = min over ‖ζ‖ = R of Σ |Pⱼ(ζ)| / (1+‖ζ‖²)^{δⱼ/2}.
pub fn estimate_properness(
    sys: &PolySystem,
    profile: &PropernessProfile,
) -> Result<(PropernessProfile, ConditionVerdict)> {
    let ProfileVariant::Projective(delta) = &profile.variant else {
        return Err(Error::ProfileVariantMismatch);
    };
    if delta.len() != sys.n() {
        return Err(Error::NvarsMismatch {
            left: sys.n(),
            right: delta.len(),
        });
    }
    if profile.samples == 0 {
        return Err(Error::Input("sample count must be at least 1".into()));
    }
    let n = sys.n();
    let r = profile.radius;
    let compiled = sys.compile();
    let weights: Vec<f64> = delta
        .iter()
        .map(|d| (1.0 + r * r).powf(rational_to_f64(d) / 2.0))
        .collect();
    let objective = |v: &[f64]| -> f64 {
        let z: Vec<Complex64> = to_complex(&normalize(v)).iter().map(|c| c * r).collect();
        compiled
            .polys
            .iter()
            .zip(&weights)
            .map(|(p, w)| p.eval(&z).norm() / w)
            .sum()
    };
    let halton = Halton::new(2 * n, profile.seed);
    let samples: Vec<Vec<f64>> = (0..profile.samples as u64)
        .map(|i| sphere_point(&halton.point(i)))
        .collect();
    let (x, c) = polish_best(&samples, &objective, |v| normalize(v));
    let witness: Vec<Complex64> = to_complex(&x).iter().map(|z| z * r).collect();
    Ok(finish_estimate(profile, c, witness, "projective"))
}

fn finish_estimate(
    profile: &PropernessProfile,
    c: f64,
    witness: Vec<Complex64>,
    kind: &str,
) -> (PropernessProfile, ConditionVerdict) {
    let mut out = profile.clone();
    out.floor = Some(c);
    let status = if c < FLOOR_TOL {
        Status::Fails
    } else {
        Status::Inconclusive
    };
    let verdict = ConditionVerdict {
        status,
        witness: Some(witness.clone()),
        witnesses: vec![witness],
        note: format!(
            "sampled {kind} floor at R={}: {c:.6e} over {} samples",
            profile.radius, profile.samples
        ),
        seed: Some(profile.seed),
        floor: Some(c),
    };
    (out, verdict)
}

/// Estimates the floor of Σ |Fⱼ(e^ζ)| / e^{H_{δⱼ}(Re ζ)} with ‖Re ζ‖ = R.
pub fn estimate_toric_properness(
    sys: &PolySystem,
    profile: &PropernessProfile,
) -> Result<(PropernessProfile, ConditionVerdict)> {
    let ProfileVariant::Toric(delta) = &profile.variant else {
        return Err(Error::ProfileVariantMismatch);
    };
    if delta.len() != sys.n() {
        return Err(Error::NvarsMismatch {
            left: sys.n(),
            right: delta.len(),
        });
    }
    if profile.samples == 0 {
        return Err(Error::Input("sample count must be at least 1".into()));
    }
    let n = sys.n();
    if 3 * n > 16 {
        return Err(Error::UnsupportedDimension { got: n, max: 5 });
    }
    let r = profile.radius;
    let terms: Vec<Vec<(Vec<f64>, Complex64)>> = sys
        .equations()
        .iter()
        .map(|p| {
            p.terms()
                .map(|(e, c)| (e.0.iter().map(|&x| x as f64).collect(), c.to_float()))
                .collect()
        })
        .collect();
    // parameters: n real coordinates of the direction, then n angles
    let point = |v: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let dir = normalize(&v[..n]);
        (dir.iter().map(|x| x * r).collect(), v[n..].to_vec())
    };
    let objective = |v: &[f64]| -> f64 {
        let (re, im) = point(v);
        terms
            .iter()
            .zip(delta)
            .map(|(ts, d)| {
                let h = d.support_function_f64(&re);
                let mut s = Complex64::zero();
                for (e, c) in ts {
                    let x: f64 = e.iter().zip(&re).map(|(a, b)| a * b).sum();
                    let y: f64 = e.iter().zip(&im).map(|(a, b)| a * b).sum();
                    s += c * Complex64::from_polar((x - h).exp(), y);
                }
                s.norm()
            })
            .sum()
    };
    let halton = Halton::new(3 * n, profile.seed);
    let samples: Vec<Vec<f64>> = (0..profile.samples as u64)
        .map(|i| {
            let u = halton.point(i);
            let mut dir = gaussian_direction(&u[..2 * n], n);
            dir.extend(u[2 * n..].iter().map(|t| t * 2.0 * std::f64::consts::PI));
            dir
        })
        .collect();
    let project = |v: &[f64]| {
        let mut out = normalize(&v[..n]);
        out.extend_from_slice(&v[n..]);
        out
    };
    let (x, c) = polish_best(&samples, &objective, project);
    let (re, im) = point(&x);
    let witness: Vec<Complex64> = re
        .iter()
        .zip(&im)
        .map(|(a, b)| Complex64::new(*a, *b))
        .collect();
    Ok(finish_estimate(profile, c, witness, "toric"))
}

/// Unit direction in Rⁿ from 2n uniforms.
fn gaussian_direction(u: &[f64], n: usize) -> Vec<f64> {
    let s = sphere_point(u);
    // the first n Gaussian coordinates of a 2n-dimensional sphere point are isotropic
    normalize(&s[..n])
}

/// Floors at several radii with a decay verdict: fails when the floor shrinks by at
/// least 10× per decade of R between every consecutive pair of radii.
#[derive(Debug, Clone, PartialEq)]
pub struct PropernessSweep {
    pub radii: Vec<f64>,
    pub floors: Vec<f64>,
    pub decay_per_decade: Vec<f64>,
    pub relative_variation: f64,
    pub verdict: ConditionVerdict,
}

pub fn properness_sweep(sys: &PolySystem, profile: &PropernessProfile, radii: &[f64]) -> Result<PropernessSweep> {
    let mut floors = Vec::new();
    let mut last = None;
    for &r in radii {
        let p = profile.with_radius(r);
        let (p, v) = match profile.variant {
            ProfileVariant::Projective(_) => estimate_properness(sys, &p)?,
            ProfileVariant::Toric(_) => estimate_toric_properness(sys, &p)?,
        };
        floors.push(p.floor.unwrap());
        last = Some(v);
    }
    let decay: Vec<f64> = floors
        .windows(2)
        .zip(radii.windows(2))
        .map(|(f, r)| (f[0] / f[1]).powf(1.0 / (r[1] / r[0]).log10()))
        .collect();
    let hi = floors.iter().cloned().fold(f64::MIN, f64::max);
    let lo = floors.iter().cloned().fold(f64::MAX, f64::min);
    let variation = if hi > 0.0 { (hi - lo) / hi } else { 0.0 };
    let mut verdict = last.ok_or_else(|| Error::Input("no radii given".into()))?;
    let decays = !decay.is_empty() && decay.iter().all(|&d| d >= 10.0);
    if decays || verdict.status == Status::Fails {
        verdict.status = Status::Fails;
    }
    verdict.note = format!(
        "floors {:?} at radii {:?}; decay per decade {:?}",
        floors.iter().map(|f| format!("{f:.4e}")).collect::<Vec<_>>(),
        radii,
        decay.iter().map(|d| format!("{d:.3}")).collect::<Vec<_>>()
    );
    verdict.floor = floors.last().copied();
    Ok(PropernessSweep {
        radii: radii.to_vec(),
        floors,
        decay_per_decade: decay,
        relative_variation: variation,
        verdict,
    })
}

// ---------------------------------------------------------------- Bernstein

/// Directions ξ whose facial systems can have more than one term in both equations
/// (n = 2): ± the primitive edge normals of Δ₁, Δ₂ and Δ₁+Δ₂.
pub fn bernstein_directions(sys: &PolySystem) -> Result<Vec<Vec<i64>>> {
    let polys = sys
        .equations()
        .iter()
        .map(newton::newton_polytope)
        .collect::<Result<Vec<_>>>()?;
    let sum = polys[0].minkowski_sum(&polys[1])?;
    let mut out = std::collections::BTreeSet::new();
    for p in polys.iter().chain(std::iter::once(&sum)) {
        if p.affine_dim() == 0 {
            continue;
        }
        for v in newton::primitive_edge_normals(p)? {
            out.insert(v.iter().map(|x| -x).collect::<Vec<i64>>());
            out.insert(v);
        }
    }
    Ok(out.into_iter().collect())
}

/// The facial systems examined by the exact Bernstein check.
pub fn facial_systems(sys: &PolySystem) -> Result<Vec<(Vec<i64>, Vec<MultiPoly>)>> {
    bernstein_directions(sys)?
        .into_iter()
        .map(|xi| {
            let faces = sys
                .equations()
                .iter()
                .map(|p| newton::facial_restriction(p, &xi))
                .collect::<Result<Vec<_>>>()?;
            Ok((xi, faces))
        })
        .collect()
}

/// (a, b) with a·q − b·p = 1 for primitive (p, q).
fn unimodular_completion(p: i64, q: i64) -> (i64, i64) {
    let (g, x, y) = ext_gcd(q, -p);
    // x·q + y·(−p) = g = ±1
    (x * g, y * g)
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        let s = if a < 0 { -1 } else { 1 };
        (a * s, s, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Univariate t-polynomial of a facial polynomial under ζ = (t^a s^p, t^b s^q),
/// cleared of its lowest power of t.
fn facial_univariate(face: &MultiPoly, a: i64, b: i64) -> Result<upoly::UPoly> {
    let exps: Vec<(i64, ComplexRational)> = face
        .terms()
        .map(|(e, c)| Ok((a * e.0[0] + b * e.0[1], c.as_exact().ok_or(Error::MixedMode)?.clone())))
        .collect::<Result<Vec<_>>>()?;
    let lo = exps.iter().map(|(k, _)| *k).min().unwrap_or(0);
    let hi = exps.iter().map(|(k, _)| *k).max().unwrap_or(0);
    let mut out = vec![cr(0); (hi - lo) as usize + 1];
    for (k, c) in exps {
        out[(k - lo) as usize] += c;
    }
    Ok(upoly::trim(out))
}

/// Decides the Bernstein condition: no facial system has a common zero on the torus.
pub fn check_bernstein(sys: &PolySystem) -> Result<ConditionVerdict> {
    check_bernstein_seeded(sys, 0)
}

pub fn check_bernstein_seeded(sys: &PolySystem, seed: u64) -> Result<ConditionVerdict> {
    match sys.n() {
        1 => Ok(ConditionVerdict::exact(
            Status::Holds,
            Vec::new(),
            "n=1: facial polynomials at ξ = ±1 are single monomials",
        )),
        2 if sys.is_exact() => bernstein_plane(sys),
        _ => {
            let delta = sys
                .equations()
                .iter()
                .map(newton::newton_polytope)
                .collect::<Result<Vec<_>>>()?;
            let profile = PropernessProfile::toric(delta, 10.0).with_seed(seed);
            let (_, mut v) = estimate_toric_properness(&sys.map(|p| Ok(p.to_laurent()))?, &profile)?;
            v.note = format!("sampled estimate of the toric floor with δ = Δ: {}", v.note);
            Ok(v)
        }
    }
}

fn bernstein_plane(sys: &PolySystem) -> Result<ConditionVerdict> {
    let systems = facial_systems(sys)?;
    let checked = systems.len();
    for (xi, faces) in systems {
        if faces.iter().any(|f| f.len() < 2) {
            continue;
        }
        let (a, b) = unimodular_completion(xi[0], xi[1]);
        let g1 = facial_univariate(&faces[0], a, b)?;
        let g2 = facial_univariate(&faces[1], a, b)?;
        let g = upoly::gcd(&g1, &g2);
        if upoly::degree(&g).unwrap_or(0) == 0 {
            continue;
        }
        let mut witnesses = Vec::new();
        for t in aberth(&upoly::to_c64(&g))? {
            if t.norm() > 0.0 {
                witnesses.push(vec![t.powi(a as i32), t.powi(b as i32)]);
            }
        }
        let note = format!("exact: facial system at ξ = ({}, {}) has a common torus zero", xi[0], xi[1]);
        return Ok(ConditionVerdict::exact(Status::Fails, witnesses, note));
    }
    Ok(ConditionVerdict::exact(
        Status::Holds,
        Vec::new(),
        format!("exact: {checked} facial directions checked, no common torus zero"),
    ))
}

/// Scales every coefficient of `p` by the rational `k` (used by callers checking
/// scale invariance).
pub fn scale_equation(p: &MultiPoly, k: &BigRational) -> Result<MultiPoly> {
    p.scale(&Coefficient::Exact(ComplexRational::new(k.clone(), BigRational::zero())))
}

/// Approximate f64 view of a rational δ vector.
pub fn delta_f64(delta: &[BigRational]) -> Vec<f64> {
    delta.iter().map(|d| d.to_f64().unwrap_or(f64::NAN)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse::parse, rat};

    fn sys2(a: &str, b: &str, mode: Mode) -> PolySystem {
        PolySystem::new(vec![parse(a, 2, mode).unwrap(), parse(b, 2, mode).unwrap()]).unwrap()
    }

    fn ex21() -> PolySystem {
        sys2("X1*X2", "X1*X2 + X1 + X2 + 1", Mode::Ordinary)
    }

    #[test]
    fn jacobi_examples() {
        let v = check_jacobi(&sys2("X1^2 - 1", "X2^2 - 1", Mode::Ordinary)).unwrap();
        assert_eq!(v.status, Status::Holds);
        let v = check_jacobi(&ex21()).unwrap();
        assert_eq!(v.status, Status::Fails);
        // the two zeros at infinity are the coordinate directions
        assert_eq!(v.witnesses.len(), 2);
        for w in &v.witnesses {
            assert!(w[0].norm() < 1e-12 || w[1].norm() < 1e-12);
        }
        let p = PolySystem::new(vec![parse("3*X1^2 + 1", 1, Mode::Ordinary).unwrap()]).unwrap();
        assert_eq!(check_jacobi(&p).unwrap().status, Status::Holds);
        let l = sys2("X1", "X2", Mode::Laurent);
        assert_eq!(check_jacobi(&l), Err(Error::LaurentMode));
    }

    #[test]
    fn jacobi_sampled_three_variables() {
        let mk = |s: &str| parse(s, 3, Mode::Ordinary).unwrap();
        // leading forms X1X2, X2X3, X1X3 share the direction (1,0,0)
        let s = PolySystem::new(vec![mk("X1*X2 + 1"), mk("X2*X3 + X1"), mk("X1*X3 - 2")]).unwrap();
        let v = check_jacobi(&s).unwrap();
        assert_eq!(v.status, Status::Fails);
        let s = PolySystem::new(vec![mk("X1^2 - 1"), mk("X2^2 - 1"), mk("X3^2 - 1")]).unwrap();
        assert_eq!(check_jacobi(&s).unwrap().status, Status::Inconclusive);
    }

    #[test]
    fn properness_examples() {
        let profile = PropernessProfile::projective(vec![rat(1, 1), rat(1, 1)], 10.0);
        let (p, v) = estimate_properness(&ex21(), &profile).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert!(p.floor.unwrap() > 0.05);
        // lower bound (|z1|^2 + |z2|^2 - 2)/(1+R^2) = 98/101
        let s = sys2("X1^2 - 1", "X2^2 - 1", Mode::Ordinary);
        let profile = PropernessProfile::projective(vec![rat(2, 1), rat(2, 1)], 10.0);
        let (p, _) = estimate_properness(&s, &profile).unwrap();
        assert!(p.floor.unwrap() >= 98.0 / 101.0 - 1e-9);
        let toric = PropernessProfile::toric(vec![LatticePolytope::point(&[0, 0]); 2], 10.0);
        assert_eq!(estimate_properness(&s, &toric), Err(Error::ProfileVariantMismatch));
    }

    #[test]
    fn strong_properness_floor_shrinks_along_the_escaping_curve() {
        // along (t, -1 + 1/t) the weighted sum is about 1/t
        let profile = PropernessProfile::projective(vec![rat(2, 1), rat(2, 1)], 10.0);
        let sweep = properness_sweep(&ex21(), &profile, &[10.0, 100.0]).unwrap();
        assert!(sweep.floors[1] < sweep.floors[0] / 5.0);
        let t: f64 = 100.0;
        let curve = (t * (-1.0 + 1.0 / t)).abs() + ((t + 1.0) / t).abs();
        let r2 = t * t + (1.0 - 1.0 / t).powi(2);
        assert!(sweep.floors[1] <= curve / (1.0 + r2) + 1e-12);
    }

    #[test]
    fn toric_properness_examples() {
        let f = PolySystem::new(vec![parse("X1 + 3 + X1^-1", 1, Mode::Laurent).unwrap()]).unwrap();
        let delta = LatticePolytope::from_integer_points(1, &[vec![-1], vec![1]]).unwrap();
        let (p, v) = estimate_toric_properness(&f, &PropernessProfile::toric(vec![delta], 10.0)).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert!(p.floor.unwrap() >= 0.5);
        let proj = PropernessProfile::projective(vec![rat(1, 1)], 10.0);
        assert_eq!(estimate_toric_properness(&f, &proj), Err(Error::ProfileVariantMismatch));
        // degenerate δ = {0}: the bare sum of moduli
        let s = sys2("X1 - 1", "X2 - X1", Mode::Laurent);
        let zero = LatticePolytope::point(&[0, 0]);
        let (_, v) = estimate_toric_properness(&s, &PropernessProfile::toric(vec![zero.clone(), zero], 10.0)).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
    }

    #[test]
    fn bernstein_examples() {
        let f = PolySystem::new(vec![parse("X1 + 1", 1, Mode::Laurent).unwrap()]).unwrap();
        assert_eq!(check_bernstein(&f).unwrap().status, Status::Holds);
        let s = sys2("X1 + X2", "2*X1 + 2*X2", Mode::Laurent);
        let v = check_bernstein(&s).unwrap();
        assert_eq!(v.status, Status::Fails);
        // common facial zero (t, -t)
        let w = v.witness.unwrap();
        assert!((w[0] + w[1]).norm() < 1e-12);
        let s = sys2("1 + 2*X1 + 3*X2", "4 - X1 + X2", Mode::Laurent);
        assert_eq!(check_bernstein(&s).unwrap().status, Status::Holds);
    }

    #[test]
    fn facial_systems_match_restriction() {
        let s = sys2("X1 + X2 + X1^-1*X2^-1 - 5", "2*X1 - X2 + 3*X1^-1*X2^-1 + 1", Mode::Laurent);
        for (xi, faces) in facial_systems(&s).unwrap() {
            for (j, f) in faces.iter().enumerate() {
                assert_eq!(f, &newton::facial_restriction(s.equation(j), &xi).unwrap());
            }
        }
        assert_eq!(check_bernstein(&s).unwrap().status, Status::Holds);
    }

    #[test]
    fn unimodular_completion_is_unimodular() {
        for (p, q) in [(1, 0), (0, 1), (-1, 0), (1, 1), (2, -3), (-5, 7), (0, -1)] {
            let (a, b) = unimodular_completion(p, q);
            assert_eq!(a * q - b * p, 1, "({p},{q})");
        }
    }
}
