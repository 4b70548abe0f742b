//! Truncated power series in several variables, used for powered local residues
//! at simple zeros.

use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{complex_solve, MultiPoly, PolySystem};

struct Basis {
    exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl Basis {
    /// All exponents of total degree ≤ d.
    fn new(n: usize, d: u32) -> Self {
        let mut exps = vec![vec![0u32; n]];
        let mut frontier = exps.clone();
        for _ in 0..d {
            let mut next = Vec::new();
            for e in &frontier {
                // extend only at or after the last nonzero slot to avoid repeats
                let start = e.iter().rposition(|&x| x > 0).unwrap_or(0);
                for k in start..n {
                    let mut f = e.clone();
                    f[k] += 1;
                    next.push(f);
                }
            }
            exps.extend(next.iter().cloned());
            frontier = next;
        }
        let index = exps.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Basis { exps, index }
    }

    fn len(&self) -> usize {
        self.exps.len()
    }
}

#[derive(Clone)]
struct Series<'a> {
    b: &'a Basis,
    c: Vec<Complex64>,
}

impl<'a> Series<'a> {
    fn constant(b: &'a Basis, v: Complex64) -> Self {
        let mut c = vec![Complex64::zero(); b.len()];
        c[0] = v;
        Series { b, c }
    }

    fn var(b: &'a Basis, k: usize) -> Self {
        let mut s = Series::constant(b, Complex64::zero());
        let mut e = vec![0u32; b.exps[0].len()];
        e[k] = 1;
        if let Some(&i) = b.index.get(&e) {
            s.c[i] = Complex64::new(1.0, 0.0);
        }
        s
    }

    fn add(&self, o: &Self) -> Self {
        Series {
            b: self.b,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }

    fn scale(&self, v: Complex64) -> Self {
        Series {
            b: self.b,
            c: self.c.iter().map(|a| a * v).collect(),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out = vec![Complex64::zero(); self.b.len()];
        let mut e = vec![0u32; self.b.exps[0].len()];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                for (k, x) in e.iter_mut().enumerate() {
                    *x = self.b.exps[i][k] + self.b.exps[j][k];
                }
                if let Some(&t) = self.b.index.get(&e) {
                    out[t] += a * b;
                }
            }
        }
        Series { b: self.b, c: out }
    }

    fn inverse(&self) -> Result<Self> {
        let c0 = self.c[0];
        if c0.norm() == 0.0 {
            return Err(Error::SingularJacobian(0.0));
        }
        // 1/s = (1/c0) Σ (−w)^k with w = s/c0 − 1
        let mut w = self.scale(-1.0 / c0);
        w.c[0] = Complex64::zero();
        let mut acc = Series::constant(self.b, Complex64::new(1.0, 0.0));
        let mut p = acc.clone();
        let depth = self.b.exps.last().map(|e| e.iter().sum::<u32>()).unwrap_or(0);
        for _ in 0..depth {
            p = p.mul(&w);
            acc = acc.add(&p);
        }
        Ok(acc.scale(1.0 / c0))
    }
}

fn compose<'a>(p: &MultiPoly, x: &[Series<'a>], inv: &[Option<Series<'a>>], b: &'a Basis) -> Result<Series<'a>> {
    let mut powers: Vec<Vec<Series<'a>>> = x.iter().map(|s| vec![Series::constant(b, Complex64::new(1.0, 0.0)), s.clone()]).collect();
    let mut neg: Vec<Vec<Series<'a>>> = inv
        .iter()
        .map(|s| {
            let one = Series::constant(b, Complex64::new(1.0, 0.0));
            match s {
                Some(s) => vec![one, s.clone()],
                None => vec![one],
            }
        })
        .collect();
    let mut acc = Series::constant(b, Complex64::zero());
    for (e, c) in p.terms() {
        let mut t = Series::constant(b, c.to_float());
        for (k, &ek) in e.0.iter().enumerate() {
            let table = if ek >= 0 { &mut powers[k] } else { &mut neg[k] };
            if table.len() < 2 {
                return Err(Error::ZeroCoordinate { index: k });
            }
            let m = ek.unsigned_abs() as usize;
            while table.len() <= m {
                let next = table[table.len() - 1].mul(&table[1]);
                table.push(next);
            }
            t = t.mul(&table[m]);
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

fn inverses<'a>(x: &[Series<'a>]) -> Vec<Option<Series<'a>>> {
    x.iter().map(|s| s.inverse().ok()).collect()
}

fn det<'a>(m: &[Vec<Series<'a>>], b: &'a Basis) -> Series<'a> {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Series::constant(b, Complex64::zero());
    for col in 0..n {
        let minor: Vec<Vec<Series<'a>>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != col).map(|(_, s)| s.clone()).collect())
            .collect();
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        acc = acc.add(&m[0][col].mul(&det(&minor, b)).scale(Complex64::new(sign, 0.0)));
    }
    acc
}

/// Res_α[Q dX / (P₁^{μ₁+1}⋯Pₙ^{μₙ+1})] at a simple zero α: the u^μ coefficient of
/// Q(x(u))/𝒥_P(x(u)), where x(u) is the local inverse of u = P(x).
pub fn powered_local_residue(q: &MultiPoly, sys: &PolySystem, mu: &[u32], alpha: &[Complex64]) -> Result<Complex64> {
    let n = sys.n();
    let d: u32 = mu.iter().sum();
    let b = Basis::new(n, d);
    let (_, a) = sys.compile().eval_jac(alpha);
    let mut a_inv = vec![vec![Complex64::zero(); n]; n];
    for k in 0..n {
        let mut e = vec![Complex64::zero(); n];
        e[k] = Complex64::new(1.0, 0.0);
        let col = complex_solve(a.clone(), e).ok_or(Error::SingularJacobian(0.0))?;
        for (j, v) in col.into_iter().enumerate() {
            a_inv[j][k] = v;
        }
    }
    let u: Vec<Series> = (0..n).map(|k| Series::var(&b, k)).collect();
    let mut x: Vec<Series> = alpha.iter().map(|&v| Series::constant(&b, v)).collect();
    let laurent = sys.mode() == crate::poly::Mode::Laurent;
    // each sweep fixes one more order; two extra sweeps polish the constant term
    for _ in 0..d + 3 {
        let inv = if laurent { inverses(&x) } else { vec![None; n] };
        let r: Vec<Series> = sys
            .equations()
            .iter()
            .zip(&u)
            .map(|(p, uj)| Ok(uj.add(&compose(p, &x, &inv, &b)?.scale(Complex64::new(-1.0, 0.0)))))
            .collect::<Result<_>>()?;
        x = (0..n)
            .map(|j| {
                let mut s = x[j].clone();
                for (k, rk) in r.iter().enumerate() {
                    s = s.add(&rk.scale(a_inv[j][k]));
                }
                s
            })
            .collect();
    }
    let inv = if laurent || q.mode() == crate::poly::Mode::Laurent { inverses(&x) } else { vec![None; n] };
    let jm: Vec<Vec<Series>> = sys
        .jacobian_matrix()
        .iter()
        .map(|row| row.iter().map(|p| compose(p, &x, &inv, &b)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let h = compose(q, &x, &inv, &b)?.mul(&det(&jm, &b).inverse()?);
    Ok(b.index.get(mu).map(|&i| h.c[i]).unwrap_or_default())
}
