//! Newton polytopes, support functions, Minkowski sums, mixed volumes and the
//! good-polyhedron predicate.

mod polytope;

use num_rational::BigRational;
use num_traits::Zero;

pub use polytope::{ContainMode, Halfspace, LatticePolytope, PolytopeJson};

use crate::error::{Error, Result};
use crate::poly::MultiPoly;

/// Convex hull of the support of `p`.
pub fn newton_polytope(p: &MultiPoly) -> Result<LatticePolytope> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    LatticePolytope::from_integer_points(p.nvars(), &p.support())
}

pub fn minkowski_sum_all(polys: &[LatticePolytope]) -> Result<LatticePolytope> {
    let (first, rest) = polys.split_first().ok_or(Error::UnboundedPolytope)?;
    rest.iter().try_fold(first.clone(), |acc, p| acc.minkowski_sum(p))
}

/// Mixed volume by inclusion–exclusion over Minkowski sums, normalized so that
/// MV(Δ, …, Δ) = n!·vol(Δ) (the Bernstein root count).
pub fn mixed_volume(polys: &[LatticePolytope]) -> Result<BigRational> {
    let n = polys.len();
    if n > 3 {
        return Err(Error::DimensionTooLarge(n));
    }
    if let Some(p) = polys.iter().find(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch {
            left: n,
            right: p.dim(),
        });
    }
    let mut mv = BigRational::zero();
    for mask in 1u32..(1 << n) {
        let subset: Vec<LatticePolytope> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| polys[i].clone())
            .collect();
        let vol = minkowski_sum_all(&subset)?.volume();
        if (n - subset.len()) % 2 == 0 {
            mv += vol;
        } else {
            mv -= vol;
        }
    }
    Ok(mv)
}

/// Terms of `p` whose exponent minimizes ⟨α, ξ⟩ over the support.
pub fn facial_restriction(p: &MultiPoly, xi: &[i64]) -> Result<MultiPoly> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let min = p.terms().map(|(e, _)| e.dot(xi)).min().unwrap();
    MultiPoly::from_terms(
        p.nvars(),
        p.mode(),
        p.terms()
            .filter(|(e, _)| e.dot(xi) == min)
            .map(|(e, c)| (e.0.clone(), c.clone())),
    )
}

/// Decides the good-polyhedron property: with every point x the polytope contains
/// each y with |yₖ| ≤ |xₖ| and xₖyₖ ≥ 0.
///
/// The condition is monotone along the orthant boxes, and every point of the
/// polytope lies in the box of some convex combination of vertices, so it is
/// enough to scan the integer points of the boxes spanned by the vertices.
pub fn is_good_polyhedron(delta: &LatticePolytope) -> Result<bool> {
    let verts = delta.integer_vertices()?;
    for x in &verts {
        let lo: Vec<i64> = x.iter().map(|&v| v.min(0)).collect();
        let hi: Vec<i64> = x.iter().map(|&v| v.max(0)).collect();
        let mut cur = lo.clone();
        loop {
            if !delta.contains_int(&cur, ContainMode::Closed) {
                return Ok(false);
            }
            let mut i = 0;
            loop {
                if i == cur.len() {
                    break;
                }
                cur[i] += 1;
                if cur[i] <= hi[i] {
                    break;
                }
                cur[i] = lo[i];
                i += 1;
            }
            if i == cur.len() {
                break;
            }
        }
    }
    Ok(true)
}

/// Primitive outer normals of the edges of a planar polytope; for a segment the
/// two normals of its line.
pub fn primitive_edge_normals(delta: &LatticePolytope) -> Result<Vec<Vec<i64>>> {
    if delta.dim() != 2 {
        return Err(Error::DimensionTooLarge(delta.dim()));
    }
    match delta.affine_dim() {
        0 => Err(Error::DimensionDeficient),
        1 => {
            let n = delta.equalities()[0].normal.clone();
            let neg = n.iter().map(|x| -x).collect();
            let mut out = vec![n, neg];
            out.sort();
            Ok(out)
        }
        _ => {
            let mut out: Vec<Vec<i64>> = delta.facets().iter().map(|h| h.normal.clone()).collect();
            out.sort();
            Ok(out)
        }
    }
}

/// Every rational vertex is an integer point.
pub fn has_integer_vertices(delta: &LatticePolytope) -> bool {
    delta.is_integral()
}

/// ⟨μ+1, δ⟩ as a weighted Minkowski sum (μ₁+1)δ₁ + ⋯ + (μₙ+1)δₙ.
pub fn weighted_sum(deltas: &[LatticePolytope], mu: &[u32]) -> Result<LatticePolytope> {
    let scaled = deltas
        .iter()
        .zip(mu)
        .map(|(d, &m)| d.scale(&BigRational::from_integer((m as i64 + 1).into())))
        .collect::<Result<Vec<_>>>()?;
    minkowski_sum_all(&scaled)
}

/// Sum over the lattice points of a box; helper for callers scanning small regions.
pub fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return out;
    }
    let mut cur = lo.to_vec();
    loop {
        out.push(cur.clone());
        let mut i = 0;
        loop {
            if i == cur.len() {
                return out;
            }
            cur[i] += 1;
            if cur[i] <= hi[i] {
                break;
            }
            cur[i] = lo[i];
            i += 1;
        }
    }
}
