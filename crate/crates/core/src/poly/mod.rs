//! Sparse multivariate polynomials over exact complex rationals or complex floats,
//! in ordinary or Laurent mode.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Exponent`], whose ordering is graded
//! lexicographic; serialization walks the map in descending order so output is
//! deterministic.

mod coeff;
pub mod parse;
pub mod upoly;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;

pub use coeff::{
    cr, cr_inv, cr_is_zero, cr_rat, cr_to_c64, format_rational, parse_decimal, parse_rational,
    rat, rational_to_f64, CoeffKind, Coefficient, ComplexRational,
};

use crate::error::{Error, Result};

/// Exponent vector in Zⁿ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<i64>);

impl Exponent {
    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Exponent(e)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn checked_add(&self, other: &Exponent) -> Result<Exponent> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()
            .map(Exponent)
    }

    pub fn dot(&self, xi: &[i64]) -> i64 {
        self.0.iter().zip(xi).map(|(a, b)| a * b).sum()
    }
}

impl Ord for Exponent {
    /// Graded lexicographic: total degree first, then lexicographic.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Ordinary,
    Laurent,
}

/// A sparse polynomial. No stored coefficient is zero and all coefficients share one kind.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    mode: Mode,
    kind: CoeffKind,
    terms: BTreeMap<Exponent, Coefficient>,
}

impl MultiPoly {
    pub fn zero(nvars: usize, mode: Mode) -> Self {
        Self::zero_with_kind(nvars, mode, CoeffKind::Exact)
    }

    pub fn zero_with_kind(nvars: usize, mode: Mode, kind: CoeffKind) -> Self {
        MultiPoly {
            nvars,
            mode,
            kind,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a polynomial from (exponent, coefficient) pairs; duplicate exponents are summed.
    pub fn from_terms<I>(nvars: usize, mode: Mode, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Coefficient)>,
    {
        let mut iter = terms.into_iter().peekable();
        let kind = iter.peek().map(|(_, c)| c.kind()).unwrap_or(CoeffKind::Exact);
        let mut p = Self::zero_with_kind(nvars, mode, kind);
        for (exp, c) in iter {
            if exp.len() != nvars {
                return Err(Error::NvarsMismatch {
                    left: nvars,
                    right: exp.len(),
                });
            }
            if c.kind() != kind {
                return Err(Error::MixedMode);
            }
            if mode == Mode::Ordinary {
                if let Some(&e) = exp.iter().find(|&&e| e < 0) {
                    return Err(Error::NegativeExponent { exponent: e });
                }
            }
            p.add_term(Exponent(exp), c)?;
        }
        Ok(p)
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_int_terms(nvars: usize, mode: Mode, terms: &[(&[i64], i64)]) -> Result<Self> {
        Self::from_terms(
            nvars,
            mode,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), Coefficient::from_int(*c))),
        )
    }

    pub fn constant(nvars: usize, mode: Mode, c: Coefficient) -> Self {
        let kind = c.kind();
        let mut p = Self::zero_with_kind(nvars, mode, kind);
        if !c.is_zero() {
            p.terms.insert(Exponent::zero(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize, mode: Mode) -> Self {
        Self::constant(nvars, mode, Coefficient::from_int(1))
    }

    pub fn var(nvars: usize, mode: Mode, i: usize) -> Self {
        Self::monomial(nvars, mode, Exponent::unit(nvars, i), Coefficient::from_int(1))
    }

    pub fn monomial(nvars: usize, mode: Mode, exp: Exponent, c: Coefficient) -> Self {
        let kind = c.kind();
        let mut p = Self::zero_with_kind(nvars, mode, kind);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    fn add_term(&mut self, exp: Exponent, c: Coefficient) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&exp) {
            Some(existing) => {
                let sum = existing.try_add(&c)?;
                if sum.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn kind(&self) -> CoeffKind {
        self.kind
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &[i64]) -> Option<&Coefficient> {
        self.terms.get(&Exponent(exp.to_vec()))
    }

    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms.keys().map(|e| e.0.clone()).collect()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).fold(0.0, f64::max)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        if !self.is_zero() && !other.is_zero() && self.kind != other.kind {
            return Err(Error::MixedMode);
        }
        Ok(())
    }

    fn result_kind(&self, other: &Self) -> CoeffKind {
        if self.is_zero() {
            other.kind
        } else {
            self.kind
        }
    }

    fn result_mode(&self, other: &Self) -> Mode {
        if self.mode == Mode::Laurent || other.mode == Mode::Laurent {
            Mode::Laurent
        } else {
            Mode::Ordinary
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.kind = self.result_kind(other);
        out.mode = self.result_mode(other);
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out =
            Self::zero_with_kind(self.nvars, self.result_mode(other), self.result_kind(other));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.checked_add(eb)?, ca.try_mul(cb)?)?;
            }
        }
        Ok(out)
    }

    fn neg_ref(&self) -> Self {
        MultiPoly {
            nvars: self.nvars,
            mode: self.mode,
            kind: self.kind,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Coefficient) -> Result<Self> {
        let mut out = Self::zero_with_kind(self.nvars, self.mode, c.kind());
        if !self.is_zero() && self.kind != c.kind() {
            return Err(Error::MixedMode);
        }
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.try_mul(c)?)?;
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = MultiPoly::constant(self.nvars, self.mode, Coefficient::one(self.kind));
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Multiplies by the monomial X^shift (Laurent shifts allowed when the result stays valid).
    pub fn mul_monomial(&self, shift: &[i64]) -> Result<Self> {
        let shift = Exponent(shift.to_vec());
        let mut out = Self::zero_with_kind(self.nvars, self.mode, self.kind);
        for (e, c) in &self.terms {
            let ne = e.checked_add(&shift)?;
            if self.mode == Mode::Ordinary {
                if let Some(&neg) = ne.0.iter().find(|&&x| x < 0) {
                    return Err(Error::NegativeExponent { exponent: neg });
                }
            }
            out.terms.insert(ne, c.clone());
        }
        Ok(out)
    }

    /// The only route from exact to float coefficients.
    pub fn to_float(&self) -> Self {
        MultiPoly {
            nvars: self.nvars,
            mode: self.mode,
            kind: CoeffKind::Float,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), Coefficient::Float(c.to_float())))
                .collect(),
        }
    }

    pub fn to_laurent(&self) -> Self {
        let mut p = self.clone();
        p.mode = Mode::Laurent;
        p
    }

    pub fn to_ordinary(&self) -> Result<Self> {
        for e in self.terms.keys() {
            if let Some(&neg) = e.0.iter().find(|&&x| x < 0) {
                return Err(Error::NegativeExponent { exponent: neg });
            }
        }
        let mut p = self.clone();
        p.mode = Mode::Ordinary;
        Ok(p)
    }

    /// Componentwise minimum of the support (zero vector for the zero polynomial).
    pub fn min_exponent(&self) -> Vec<i64> {
        let mut m: Option<Vec<i64>> = None;
        for e in self.terms.keys() {
            m = Some(match m {
                None => e.0.clone(),
                Some(m) => m.iter().zip(&e.0).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        m.unwrap_or_else(|| vec![0; self.nvars])
    }

    /// Multiplies by X^{-min support} and returns the ordinary result together with the shift.
    pub fn clear_denominators(&self) -> Result<(Self, Vec<i64>)> {
        let shift: Vec<i64> = self.min_exponent().iter().map(|m| -m).collect();
        let p = self.to_laurent().mul_monomial(&shift)?.to_ordinary()?;
        Ok((p, shift))
    }

    /// Evaluates at a complex point; exact coefficients are converted to float.
    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: z.len(),
            });
        }
        if self.mode == Mode::Laurent {
            if let Some(index) = z.iter().position(|v| v.re == 0.0 && v.im == 0.0) {
                return Err(Error::ZeroCoordinate { index });
            }
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut term = c.to_float();
            for (zi, &ei) in z.iter().zip(&e.0) {
                if ei != 0 {
                    term *= zi.powi(ei as i32);
                }
            }
            sum += term;
        }
        Ok(sum)
    }

    /// Exact evaluation at a complex-rational point (exact mode only).
    pub fn evaluate_exact(&self, z: &[ComplexRational]) -> Result<ComplexRational> {
        if z.len() != self.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: z.len(),
            });
        }
        let mut sum = cr(0);
        for (e, c) in &self.terms {
            let mut term = c.as_exact().ok_or(Error::MixedMode)?.clone();
            for (i, (zi, &ei)) in z.iter().zip(&e.0).enumerate() {
                if ei > 0 {
                    term *= num_traits::pow(zi.clone(), ei as usize);
                } else if ei < 0 {
                    let inv = cr_inv(zi).ok_or(Error::ZeroCoordinate { index: i })?;
                    term *= num_traits::pow(inv, (-ei) as usize);
                }
            }
            sum += term;
        }
        Ok(sum)
    }

    pub fn total_degree(&self) -> Result<i64> {
        if self.mode == Mode::Laurent {
            return Err(Error::LaurentDegreeUndefined);
        }
        self.terms
            .keys()
            .map(Exponent::degree)
            .max()
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Exponent::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|x| x == d),
        }
    }

    /// Sum of the terms of top total degree.
    pub fn leading_form(&self) -> Result<Self> {
        let d = self.total_degree()?;
        let mut out = Self::zero_with_kind(self.nvars, self.mode, self.kind);
        for (e, c) in &self.terms {
            if e.degree() == d {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// X₀^{deg p} p(X₁/X₀, …, Xₙ/X₀), with X₀ as the first of n+1 variables.
    pub fn homogenize(&self) -> Result<Self> {
        let d = self.total_degree()?;
        let mut out = Self::zero_with_kind(self.nvars + 1, Mode::Ordinary, self.kind);
        for (e, c) in &self.terms {
            let mut ne = Vec::with_capacity(self.nvars + 1);
            ne.push(d - e.degree());
            ne.extend_from_slice(&e.0);
            out.terms.insert(Exponent(ne), c.clone());
        }
        Ok(out)
    }

    /// Sets the first variable to 1 and drops it.
    pub fn dehomogenize(&self) -> Result<Self> {
        if self.nvars == 0 {
            return Err(Error::NvarsMismatch { left: 0, right: 1 });
        }
        let mut out = Self::zero_with_kind(self.nvars - 1, self.mode, self.kind);
        for (e, c) in &self.terms {
            out.add_term(Exponent(e.0[1..].to_vec()), c.clone())?;
        }
        Ok(out)
    }

    /// Multiplies every exponent vector by `n` (the substitution Xᵢ ↦ Xᵢᴺ).
    pub fn substitute_powers(&self, n: u32) -> Result<Self> {
        let mut out = Self::zero_with_kind(self.nvars, self.mode, self.kind);
        for (e, c) in &self.terms {
            let ne = e
                .0
                .iter()
                .map(|x| x.checked_mul(n as i64).ok_or(Error::ExponentOverflow))
                .collect::<Result<Vec<_>>>()?;
            out.terms.insert(Exponent(ne), c.clone());
        }
        Ok(out)
    }

    pub fn partial_derivative(&self, j: usize) -> Self {
        let mut out = Self::zero_with_kind(self.nvars, self.mode, self.kind);
        for (e, c) in &self.terms {
            let k = e.0[j];
            if k != 0 {
                let mut ne = e.0.clone();
                ne[j] -= 1;
                out.terms.insert(Exponent(ne), c.mul_int(k));
            }
        }
        out
    }

    /// Substitutes variable `j` by the exact value `v`, keeping the variable count.
    pub fn substitute_var(&self, j: usize, v: &ComplexRational) -> Result<Self> {
        let mut out = Self::zero_with_kind(self.nvars, self.mode, self.kind);
        for (e, c) in &self.terms {
            let c = c.as_exact().ok_or(Error::MixedMode)?;
            let k = e.0[j];
            let factor = if k >= 0 {
                num_traits::pow(v.clone(), k as usize)
            } else {
                num_traits::pow(cr_inv(v).ok_or(Error::ZeroCoordinate { index: j })?, (-k) as usize)
            };
            let mut ne = e.0.clone();
            ne[j] = 0;
            out.add_term(Exponent(ne), Coefficient::Exact(c * factor))?;
        }
        Ok(out)
    }

    /// Maps each variable index through `map` into a polynomial in `new_nvars` variables.
    pub fn remap_vars(&self, new_nvars: usize, map: &[usize]) -> Result<Self> {
        let mut out = Self::zero_with_kind(new_nvars, self.mode, self.kind);
        for (e, c) in &self.terms {
            let mut ne = vec![0i64; new_nvars];
            for (i, &x) in e.0.iter().enumerate() {
                ne[map[i]] = ne[map[i]].checked_add(x).ok_or(Error::ExponentOverflow)?;
            }
            out.add_term(Exponent(ne), c.clone())?;
        }
        Ok(out)
    }

    pub fn degree_in(&self, j: usize) -> Option<i64> {
        self.terms.keys().map(|e| e.0[j]).max()
    }

    /// Coefficients of the polynomial viewed in variable `j` (ordinary mode):
    /// entry `k` is the coefficient of Xⱼᵏ, a polynomial in which Xⱼ does not occur.
    pub fn coefficients_in(&self, j: usize) -> Result<Vec<Self>> {
        if self.mode == Mode::Laurent {
            return Err(Error::LaurentMode);
        }
        let d = self.degree_in(j).unwrap_or(0).max(0) as usize;
        let mut out = vec![Self::zero_with_kind(self.nvars, self.mode, self.kind); d + 1];
        for (e, c) in &self.terms {
            let k = e.0[j] as usize;
            let mut ne = e.0.clone();
            ne[j] = 0;
            out[k].terms.insert(Exponent(ne), c.clone());
        }
        Ok(out)
    }

    /// Dense ascending exact coefficients of a one-variable ordinary polynomial.
    pub fn to_dense_exact(&self) -> Result<Vec<ComplexRational>> {
        if self.nvars != 1 {
            return Err(Error::UnsupportedDimension {
                got: self.nvars,
                max: 1,
            });
        }
        if self.mode == Mode::Laurent {
            return Err(Error::LaurentMode);
        }
        let d = self.degree_in(0).unwrap_or(0) as usize;
        let mut out = vec![cr(0); d + 1];
        for (e, c) in &self.terms {
            out[e.0[0] as usize] = c.as_exact().ok_or(Error::MixedMode)?.clone();
        }
        Ok(out)
    }

    pub fn from_dense_exact(coeffs: &[ComplexRational]) -> Self {
        let mut p = Self::zero(1, Mode::Ordinary);
        for (k, c) in coeffs.iter().enumerate() {
            if !cr_is_zero(c) {
                p.terms.insert(Exponent(vec![k as i64]), Coefficient::Exact(c.clone()));
            }
        }
        p
    }

    pub fn compile(&self) -> CompiledPoly {
        CompiledPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.0.iter().map(|&x| x as i32).collect(), c.to_float()))
                .collect(),
        }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    /// Panics on variable-count or coefficient-kind mismatch; use `try_add` to handle those.
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("incompatible polynomial addition")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("incompatible polynomial subtraction")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("incompatible polynomial multiplication")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.neg_ref()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::serialize(self))
    }
}

/// Float-coefficient snapshot for fast repeated evaluation.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    nvars: usize,
    terms: Vec<(Vec<i32>, Complex64)>,
}

impl CompiledPoly {
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        let mut sum = Complex64::zero();
        for (e, c) in &self.terms {
            let mut t = *c;
            for (zi, &k) in z.iter().zip(e) {
                if k != 0 {
                    t *= zi.powi(k);
                }
            }
            sum += t;
        }
        sum
    }

    /// Value and gradient (∂/∂zⱼ).
    pub fn eval_grad(&self, z: &[Complex64]) -> (Complex64, Vec<Complex64>) {
        let mut value = Complex64::zero();
        let mut grad = vec![Complex64::zero(); self.nvars];
        for (e, c) in &self.terms {
            let powers: Vec<Complex64> = z.iter().zip(e).map(|(zi, &k)| zi.powi(k)).collect();
            let t: Complex64 = powers.iter().fold(*c, |a, b| a * b);
            value += t;
            for j in 0..self.nvars {
                let k = e[j];
                if k == 0 {
                    continue;
                }
                let mut d = *c * k as f64 * z[j].powi(k - 1);
                for (i, p) in powers.iter().enumerate() {
                    if i != j {
                        d *= p;
                    }
                }
                grad[j] += d;
            }
        }
        (value, grad)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
}

/// A square system of polynomials sharing variable count and mode.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem {
    equations: Vec<MultiPoly>,
}

impl PolySystem {
    pub fn new(equations: Vec<MultiPoly>) -> Result<Self> {
        let n = equations.len();
        if n == 0 {
            return Err(Error::NotSquare {
                equations: 0,
                nvars: 0,
            });
        }
        let nvars = equations[0].nvars();
        let mode = equations[0].mode();
        for p in &equations {
            if p.nvars() != nvars {
                return Err(Error::NvarsMismatch {
                    left: nvars,
                    right: p.nvars(),
                });
            }
            if p.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
        }
        if nvars != n {
            return Err(Error::NotSquare { equations: n, nvars });
        }
        // a Laurent entry makes the whole system Laurent
        let equations = if equations.iter().any(|p| p.mode() != mode) {
            equations.iter().map(MultiPoly::to_laurent).collect()
        } else {
            equations
        };
        Ok(PolySystem { equations })
    }

    pub fn n(&self) -> usize {
        self.equations.len()
    }

    pub fn mode(&self) -> Mode {
        self.equations[0].mode()
    }

    pub fn equations(&self) -> &[MultiPoly] {
        &self.equations
    }

    pub fn equation(&self, j: usize) -> &MultiPoly {
        &self.equations[j]
    }

    pub fn is_exact(&self) -> bool {
        self.equations.iter().all(|p| p.kind() == CoeffKind::Exact)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.equations
            .iter()
            .map(MultiPoly::max_abs_coeff)
            .fold(0.0, f64::max)
    }

    /// The symbolic Jacobian matrix [∂Pⱼ/∂Xₖ].
    pub fn jacobian_matrix(&self) -> Vec<Vec<MultiPoly>> {
        self.equations
            .iter()
            .map(|p| (0..self.n()).map(|k| p.partial_derivative(k)).collect())
            .collect()
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        self.equations.iter().map(|p| p.evaluate(z)).collect()
    }

    /// det[∂Pⱼ/∂Xₖ] at `z`.
    pub fn jacobian_det(&self, z: &[Complex64]) -> Result<Complex64> {
        let mut m = Vec::with_capacity(self.n());
        for row in self.jacobian_matrix() {
            m.push(row.iter().map(|p| p.evaluate(z)).collect::<Result<Vec<_>>>()?);
        }
        if self.mode() == Mode::Laurent {
            // evaluate() already rejects zero coordinates for Laurent entries
            self.evaluate(z)?;
        }
        Ok(complex_det(m))
    }

    pub fn compile(&self) -> CompiledSystem {
        CompiledSystem {
            polys: self.equations.iter().map(MultiPoly::compile).collect(),
        }
    }

    pub fn swap(&self, i: usize, j: usize) -> Self {
        let mut eq = self.equations.clone();
        eq.swap(i, j);
        PolySystem { equations: eq }
    }

    pub fn map<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&MultiPoly) -> Result<MultiPoly>,
    {
        PolySystem::new(self.equations.iter().map(f).collect::<Result<Vec<_>>>()?)
    }
}

#[derive(Debug, Clone)]
pub struct CompiledSystem {
    pub polys: Vec<CompiledPoly>,
}

impl CompiledSystem {
    pub fn eval(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.polys.iter().map(|p| p.eval(z)).collect()
    }

    /// Values and the Jacobian matrix (rows = equations).
    pub fn eval_jac(&self, z: &[Complex64]) -> (Vec<Complex64>, Vec<Vec<Complex64>>) {
        self.polys.iter().map(|p| p.eval_grad(z)).unzip()
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn complex_det(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
            .unwrap();
        if m[pivot][col].norm() == 0.0 {
            return Complex64::zero();
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..n {
            let factor = m[r][col] / m[col][col];
            for c in col..n {
                let v = m[col][c];
                m[r][c] -= factor * v;
            }
        }
    }
    det
}

/// Solves the complex linear system `a x = b` by partial pivoting; `None` if singular.
pub fn complex_solve(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))?;
        if a[pivot][col].norm() == 0.0 || !a[pivot][col].norm().is_finite() {
            return None;
        }
        a.swap(pivot, col);
        b.swap(pivot, col);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
            let v = b[col];
            b[r] -= f * v;
        }
    }
    let mut x = vec![Complex64::zero(); n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for c in r + 1..n {
            s -= a[r][c] * x[c];
        }
        x[r] = s / a[r][r];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn p2(text: &str) -> MultiPoly {
        parse(text, 2, Mode::Ordinary).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(p2("X1*X2").evaluate(&[c(2.0), c(3.0)]).unwrap(), c(6.0));
        let f = p2("X1*X2 + X1 + X2 + 1");
        assert_eq!(f.evaluate(&[c(-1.0), c(5.0)]).unwrap(), c(0.0));
        let g = parse("X1^-1 + X1", 1, Mode::Laurent).unwrap();
        assert_eq!(g.evaluate(&[c(2.0)]).unwrap(), c(2.5));
        assert_eq!(g.evaluate(&[c(0.0)]), Err(Error::ZeroCoordinate { index: 0 }));
    }

    #[test]
    fn degree_examples() {
        assert_eq!(p2("X1*X2 + X1 + 1").total_degree().unwrap(), 2);
        assert_eq!(p2("5").total_degree().unwrap(), 0);
        assert_eq!(
            parse("X1^3 - X1", 1, Mode::Ordinary).unwrap().total_degree().unwrap(),
            3
        );
        assert_eq!(MultiPoly::zero(2, Mode::Ordinary).total_degree(), Err(Error::ZeroPolynomial));
        let l = parse("X1^-1", 1, Mode::Laurent).unwrap();
        assert_eq!(l.total_degree(), Err(Error::LaurentDegreeUndefined));
    }

    #[test]
    fn leading_form_examples() {
        assert_eq!(p2("X1*X2 + X1 + 1").leading_form().unwrap(), p2("X1*X2"));
        assert_eq!(p2("X1^2 + X2^2 + X1").leading_form().unwrap(), p2("X1^2 + X2^2"));
        let h = p2("X1^2 - 3*X1*X2");
        assert_eq!(h.leading_form().unwrap(), h);
        assert_eq!(
            MultiPoly::zero(2, Mode::Ordinary).leading_form(),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn homogenize_examples() {
        let p3 = |t| parse(t, 3, Mode::Ordinary).unwrap();
        // X0 is the first variable: X1 in the text below is X0, X2 is X1, X3 is X2
        assert_eq!(p2("X1^2 + X2").homogenize().unwrap(), p3("X2^2 + X1*X3"));
        assert_eq!(p2("X1*X2 + 1").homogenize().unwrap(), p3("X2*X3 + X1^2"));
        assert_eq!(p2("X1*X2 - X2^2").homogenize().unwrap(), p3("X2*X3 - X3^2"));
        let p = p2("X1^3 + 2*X1*X2 - 7");
        assert_eq!(p.homogenize().unwrap().dehomogenize().unwrap(), p);
    }

    #[test]
    fn substitute_powers_examples() {
        assert_eq!(p2("X1*X2").substitute_powers(2).unwrap(), p2("X1^2*X2^2"));
        let p = p2("X1 + 3*X2^2");
        assert_eq!(p.substitute_powers(1).unwrap(), p);
        let l = parse("X1^-1 + X1", 1, Mode::Laurent).unwrap();
        assert_eq!(
            l.substitute_powers(3).unwrap(),
            parse("X1^-3 + X1^3", 1, Mode::Laurent).unwrap()
        );
    }

    #[test]
    fn jacobian_examples() {
        let sys = PolySystem::new(vec![p2("X1^2 - 1"), p2("X2^2 - 1")]).unwrap();
        assert_eq!(sys.jacobian_det(&[c(1.0), c(1.0)]).unwrap(), c(4.0));
        // det [[x2, x1], [x2+1, x1+1]] = x2 - x1, which is -1 at (0, -1)
        let sys = PolySystem::new(vec![p2("X1*X2"), p2("X1*X2 + X1 + X2 + 1")]).unwrap();
        let j = sys.jacobian_det(&[c(0.0), c(-1.0)]).unwrap();
        assert!((j - c(-1.0)).norm() < 1e-15);
        let cube = parse("X1^3", 1, Mode::Ordinary).unwrap();
        assert_eq!(cube.partial_derivative(0), parse("3*X1^2", 1, Mode::Ordinary).unwrap());
    }

    #[test]
    fn exponent_overflow_is_an_error() {
        let big = MultiPoly::monomial(
            1,
            Mode::Ordinary,
            Exponent(vec![i64::MAX / 2 + 1]),
            Coefficient::from_int(1),
        );
        assert_eq!(big.try_mul(&big), Err(Error::ExponentOverflow));
    }

    #[test]
    fn system_must_be_square() {
        let e = PolySystem::new(vec![p2("X1")]);
        assert_eq!(e, Err(Error::NotSquare { equations: 1, nvars: 2 }));
    }

    #[test]
    fn compiled_gradient_matches_symbolic() {
        let p = p2("3*X1^3*X2 - X2^2 + (1, 2)*X1");
        let z = [Complex64::new(0.3, -0.7), Complex64::new(1.1, 0.2)];
        let (v, g) = p.compile().eval_grad(&z);
        assert!((v - p.evaluate(&z).unwrap()).norm() < 1e-12);
        for j in 0..2 {
            let d = p.partial_derivative(j).evaluate(&z).unwrap();
            assert!((g[j] - d).norm() < 1e-12);
        }
    }
}
