//! Dense univariate polynomials with exact complex-rational coefficients, ascending order.

use num_complex::Complex64;

use super::{cr, cr_inv, cr_is_zero, cr_to_c64, ComplexRational};

pub type UPoly = Vec<ComplexRational>;

pub fn trim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(cr_is_zero) {
        p.pop();
    }
    p
}

pub fn is_zero(p: &[ComplexRational]) -> bool {
    p.iter().all(cr_is_zero)
}

/// Degree of a trimmed polynomial; `None` for zero.
pub fn degree(p: &[ComplexRational]) -> Option<usize> {
    p.iter().rposition(|c| !cr_is_zero(c))
}

pub fn add(a: &[ComplexRational], b: &[ComplexRational]) -> UPoly {
    let n = a.len().max(b.len());
    let zero = cr(0);
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

pub fn sub(a: &[ComplexRational], b: &[ComplexRational]) -> UPoly {
    let n = a.len().max(b.len());
    let zero = cr(0);
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

pub fn mul(a: &[ComplexRational], b: &[ComplexRational]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![cr(0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if cr_is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn scale(a: &[ComplexRational], c: &ComplexRational) -> UPoly {
    trim(a.iter().map(|x| x * c).collect())
}

pub fn pow(a: &[ComplexRational], k: usize) -> UPoly {
    let mut acc = vec![cr(1)];
    for _ in 0..k {
        acc = mul(&acc, a);
    }
    acc
}

pub fn derivative(a: &[ComplexRational]) -> UPoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * cr(k as i64))
            .collect(),
    )
}

/// Quotient and remainder; panics on division by the zero polynomial.
pub fn divrem(a: &[ComplexRational], b: &[ComplexRational]) -> (UPoly, UPoly) {
    let b = trim(b.to_vec());
    let db = degree(&b).expect("division by zero polynomial");
    let lead_inv = cr_inv(&b[db]).unwrap();
    let mut r = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![cr(0); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let factor = &r[dr] * &lead_inv;
        let shift = dr - db;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &factor * c;
        }
        q[shift] = factor;
        r = trim(r);
    }
    (trim(q), r)
}

pub fn monic(a: &[ComplexRational]) -> UPoly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => scale(&a[..=d], &cr_inv(&a[d]).unwrap()),
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &[ComplexRational], b: &[ComplexRational]) -> UPoly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

/// Yun's square-free decomposition: `a = c · Π fᵢ^{mᵢ}` with square-free, pairwise coprime `fᵢ`.
pub fn squarefree(a: &[ComplexRational]) -> Vec<(UPoly, usize)> {
    let a = monic(a);
    if degree(&a).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let da = derivative(&a);
    let mut g = gcd(&a, &da);
    let mut w = divrem(&a, &g).0;
    let mut out = Vec::new();
    let mut k = 1;
    while degree(&w).unwrap_or(0) > 0 {
        let y = gcd(&w, &g);
        let z = divrem(&w, &y).0;
        if degree(&z).unwrap_or(0) > 0 {
            out.push((monic(&z), k));
        }
        g = divrem(&g, &y).0;
        w = y;
        k += 1;
    }
    out
}

/// Power-series quotient a/b modulo z^order; requires b(0) ≠ 0.
pub fn series_div(a: &[ComplexRational], b: &[ComplexRational], order: usize) -> UPoly {
    let inv0 = cr_inv(&b[0]).expect("series division needs b(0) != 0");
    let mut out = vec![cr(0); order];
    for k in 0..order {
        let mut s = a.get(k).cloned().unwrap_or_else(|| cr(0));
        for j in 1..=k.min(b.len().saturating_sub(1)) {
            s -= &b[j] * &out[k - j];
        }
        out[k] = s * &inv0;
    }
    out
}

pub fn eval(a: &[ComplexRational], z: &ComplexRational) -> ComplexRational {
    let mut acc = cr(0);
    for c in a.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Determinant over the complex rationals by Gaussian elimination.
pub fn det(mut m: Vec<Vec<ComplexRational>>) -> ComplexRational {
    let n = m.len();
    let mut acc = cr(1);
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !cr_is_zero(&m[r][col])) else {
            return cr(0);
        };
        if pivot != col {
            m.swap(pivot, col);
            acc = -acc;
        }
        let inv = cr_inv(&m[col][col]).unwrap();
        acc *= &m[col][col];
        for r in col + 1..n {
            if cr_is_zero(&m[r][col]) {
                continue;
            }
            let f = &m[r][col] * &inv;
            for c in col..n {
                let v = &f * &m[col][c];
                m[r][c] -= v;
            }
        }
    }
    acc
}

/// Sylvester matrix of `a` and `b` with formal degrees `da`, `db` (leading zeros allowed).
pub fn sylvester(a: &[ComplexRational], da: usize, b: &[ComplexRational], db: usize) -> Vec<Vec<ComplexRational>> {
    let size = da + db;
    let coeff = |p: &[ComplexRational], k: usize| p.get(k).cloned().unwrap_or_else(|| cr(0));
    let mut m = vec![vec![cr(0); size]; size];
    for i in 0..db {
        for k in 0..=da {
            m[i][i + k] = coeff(a, da - k);
        }
    }
    for i in 0..da {
        for k in 0..=db {
            m[db + i][i + k] = coeff(b, db - k);
        }
    }
    m
}

/// Interpolating polynomial through (xs[i], ys[i]) by Newton divided differences.
pub fn interpolate(xs: &[ComplexRational], ys: &[ComplexRational]) -> UPoly {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = &xs[i] - &xs[i - level];
            dd[i] = num * cr_inv(&den).expect("interpolation nodes must be distinct");
        }
    }
    let mut out: UPoly = Vec::new();
    for i in (0..n).rev() {
        // out = out * (x - xs[i]) + dd[i]
        out = add(&mul(&out, &[-xs[i].clone(), cr(1)]), &[dd[i].clone()]);
    }
    trim(out)
}

pub fn to_c64(a: &[ComplexRational]) -> Vec<Complex64> {
    a.iter().map(cr_to_c64).collect()
}

pub fn eval_c64(a: &[Complex64], z: Complex64) -> Complex64 {
    a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

pub fn derivative_c64(a: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}
