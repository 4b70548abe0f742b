//! Exact one-variable residue sums.

use crate::error::{Error, Result};
use crate::poly::upoly::{self, UPoly};
use crate::poly::{cr, cr_inv, ComplexRational, Mode, MultiPoly};

/// Sum of the residues of a/d over all finite poles: the coefficient of z^{-1} at
/// infinity, which only the remainder a mod d contributes to.
pub fn total_residue(a: &[ComplexRational], d: &[ComplexRational]) -> ComplexRational {
    let dd = upoly::degree(d).expect("denominator must be nonzero");
    if upoly::is_zero(a) {
        return cr(0);
    }
    let (_, r) = upoly::divrem(a, d);
    match upoly::degree(&r) {
        Some(k) if k + 1 == dd => &r[k] * cr_inv(&d[dd]).unwrap(),
        _ => cr(0),
    }
}

/// Residue at 0 of a / (z^m b) with b(0) ≠ 0.
pub fn residue_at_zero(a: &[ComplexRational], b: &[ComplexRational], m: usize) -> ComplexRational {
    if m == 0 {
        return cr(0);
    }
    upoly::series_div(a, b, m)[m - 1].clone()
}

fn univariate_exact(p: &MultiPoly) -> Result<(Vec<i64>, Vec<ComplexRational>)> {
    if p.nvars() != 1 {
        return Err(Error::UnsupportedDimension {
            got: p.nvars(),
            max: 1,
        });
    }
    let mut out = Vec::new();
    for (e, c) in p.terms() {
        out.push((e.0[0], c.as_exact().ok_or(Error::MixedMode)?.clone()));
    }
    let (exps, coeffs) = out.into_iter().unzip();
    Ok((exps, coeffs))
}

/// Dense ascending coefficients of z^{shift}·p for a one-variable (Laurent) polynomial.
fn dense_shifted(p: &MultiPoly, shift: i64) -> Result<UPoly> {
    let (exps, coeffs) = univariate_exact(p)?;
    let hi = exps.iter().copied().max().unwrap_or(0) + shift;
    if hi < 0 {
        return Ok(Vec::new());
    }
    let mut out = vec![cr(0); hi as usize + 1];
    for (e, c) in exps.into_iter().zip(coeffs) {
        let k = e + shift;
        if k < 0 {
            return Err(Error::NegativeExponent { exponent: k });
        }
        out[k as usize] = c;
    }
    Ok(upoly::trim(out))
}

/// Σ over the zeros of P of res(Q/P), P ordinary.
pub fn residue_sum(q: &MultiPoly, p: &MultiPoly) -> Result<ComplexRational> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if q.is_zero() {
        return Ok(cr(0));
    }
    if p.mode() == Mode::Laurent || q.mode() == Mode::Laurent {
        if p.min_exponent()[0] < 0 || q.min_exponent()[0] < 0 {
            return Err(Error::LaurentMode);
        }
    }
    Ok(total_residue(&dense_shifted(q, 0)?, &dense_shifted(p, 0)?))
}

/// Σ over the torus zeros of D of res(N/D) for one-variable Laurent N, D.
pub fn torus_residue_sum(num: &MultiPoly, den: &MultiPoly) -> Result<ComplexRational> {
    if den.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if num.is_zero() {
        return Ok(cr(0));
    }
    // D = z^{-s}·B with B(0) ≠ 0, so N/D = N·z^s / B
    let s = -den.min_exponent()[0];
    let b = dense_shifted(den, s)?;
    let lo = num.min_exponent()[0] + s;
    if lo >= 0 {
        return Ok(total_residue(&dense_shifted(num, s)?, &b));
    }
    let m = (-lo) as usize;
    let a = dense_shifted(num, s + m as i64)?;
    let mut d = vec![cr(0); m];
    d.extend(b.iter().cloned());
    Ok(total_residue(&a, &d) - residue_at_zero(&a, &b, m))
}
