//! Exact rational polytopes in dimension ≤ 3.
//!
//! Points are scaled to a common integer lattice and every predicate is evaluated
//! in `i128`. Facets are found by enumerating candidate hyperplanes through
//! affinely independent point tuples and keeping those that support the set.
//! That is quartic in the number of points, which is fine for the desk-scale
//! polytopes this crate handles.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{format_rational, parse_rational};

type IVec = Vec<i128>;

/// Outer-normal inequality ⟨normal, x⟩ ≤ offset, or an equality of the affine hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<i64>,
    pub offset: BigRational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContainMode {
    Closed,
    Interior,
    RelativeInterior,
}

/// A convex polytope with rational vertices.
#[derive(Debug, Clone)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<Vec<BigRational>>,
    affine_dim: usize,
    equalities: Vec<Halfspace>,
    facets: Vec<Halfspace>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn primitive(v: &[i128]) -> IVec {
    let g = v.iter().fold(0, |g, &x| gcd_i128(g, x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[i128], b: &[i128]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn cross(a: &[i128], b: &[i128]) -> IVec {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn is_zero_vec(v: &[i128]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Rank of a set of integer vectors (fraction-free elimination in i128).
fn rank(vectors: &[IVec], n: usize) -> usize {
    let mut rows: Vec<IVec> = vectors.iter().filter(|v| !is_zero_vec(v)).cloned().collect();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let a = rows[r][col];
                let b = rows[i][col];
                let new: IVec = rows[i].iter().zip(&rows[r]).map(|(x, y)| x * a - y * b).collect();
                rows[i] = primitive(&new);
            }
        }
        r += 1;
    }
    r
}

/// Integer points of the polytope's vertex set, scaled by a common denominator.
struct Scaled {
    scale: BigInt,
    points: Vec<IVec>,
}

fn scale_points(points: &[Vec<BigRational>]) -> Result<Scaled> {
    let mut scale = BigInt::one();
    for p in points {
        for x in p {
            scale = scale.lcm(x.denom());
        }
    }
    let to_i128 = |x: &BigRational| -> Result<i128> {
        (x * BigRational::from_integer(scale.clone()))
            .to_integer()
            .to_i128()
            .filter(|v| v.abs() < (1i128 << 40))
            .ok_or_else(|| Error::Input("polytope coordinates too large".into()))
    };
    let points = points
        .iter()
        .map(|p| p.iter().map(to_i128).collect::<Result<IVec>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Scaled { scale, points })
}

impl LatticePolytope {
    /// Convex hull of a finite point set.
    pub fn from_points(dim: usize, points: Vec<Vec<BigRational>>) -> Result<Self> {
        if dim > 3 {
            return Err(Error::DimensionTooLarge(dim));
        }
        if points.is_empty() {
            return Err(Error::UnboundedPolytope);
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: p.len(),
            });
        }
        let unique: BTreeSet<Vec<BigRational>> = points.into_iter().collect();
        let points: Vec<Vec<BigRational>> = unique.into_iter().collect();
        let scaled = scale_points(&points)?;
        let ip = &scaled.points;
        let p0 = &ip[0];
        let dirs: Vec<IVec> = ip.iter().map(|p| sub(p, p0)).collect();
        let affine_dim = rank(&dirs, dim);

        // normals of the affine hull
        let eq_normals: Vec<IVec> = match (dim, affine_dim) {
            (_, a) if a == dim => Vec::new(),
            (_, 0) => (0..dim)
                .map(|i| (0..dim).map(|j| i128::from(i == j)).collect())
                .collect(),
            (2, 1) => {
                let d = dirs.iter().find(|d| !is_zero_vec(d)).unwrap();
                vec![primitive(&[-d[1], d[0]])]
            }
            (3, 1) => {
                let d = dirs.iter().find(|d| !is_zero_vec(d)).unwrap();
                let mut out: Vec<IVec> = Vec::new();
                for k in 0..3 {
                    let e: IVec = (0..3).map(|j| i128::from(j == k)).collect();
                    let c = primitive(&cross(d, &e));
                    if !is_zero_vec(&c) && rank(&[out.clone(), vec![c.clone()]].concat(), 3) > out.len() {
                        out.push(c);
                    }
                    if out.len() == 2 {
                        break;
                    }
                }
                out
            }
            (3, 2) => {
                let d1 = dirs.iter().find(|d| !is_zero_vec(d)).unwrap();
                let n = dirs
                    .iter()
                    .map(|d| cross(d1, d))
                    .find(|c| !is_zero_vec(c))
                    .unwrap();
                vec![primitive(&n)]
            }
            _ => unreachable!(),
        };

        let mut normals: BTreeSet<IVec> = BTreeSet::new();
        let consider = |a: IVec, normals: &mut BTreeSet<IVec>| {
            if is_zero_vec(&a) {
                return;
            }
            let a = primitive(&a);
            let neg: IVec = a.iter().map(|x| -x).collect();
            if normals.contains(&a) || normals.contains(&neg) {
                return;
            }
            let values: Vec<i128> = ip.iter().map(|p| dot(&a, p)).collect();
            let max = *values.iter().max().unwrap();
            let min = *values.iter().min().unwrap();
            let on_max = values.iter().filter(|&&v| v == max).count();
            let on_min = values.iter().filter(|&&v| v == min).count();
            let need = affine_dim.max(1);
            // a supporting hyperplane through enough points to span a facet
            if on_max >= need && Self::spans_facet(ip, &values, max, affine_dim) {
                normals.insert(a.clone());
            }
            if on_min >= need && Self::spans_facet(ip, &values, min, affine_dim) {
                normals.insert(neg);
            }
        };

        match affine_dim {
            0 => {}
            1 => {
                let d = dirs.iter().find(|d| !is_zero_vec(d)).unwrap().clone();
                consider(d, &mut normals);
            }
            2 => {
                for i in 0..ip.len() {
                    for j in i + 1..ip.len() {
                        let e = sub(&ip[j], &ip[i]);
                        let a = if dim == 2 {
                            vec![-e[1], e[0]]
                        } else {
                            cross(&e, &eq_normals[0])
                        };
                        consider(a, &mut normals);
                    }
                }
            }
            3 => {
                for i in 0..ip.len() {
                    for j in i + 1..ip.len() {
                        let e1 = sub(&ip[j], &ip[i]);
                        for k in j + 1..ip.len() {
                            let e2 = sub(&ip[k], &ip[i]);
                            consider(cross(&e1, &e2), &mut normals);
                        }
                    }
                }
            }
            _ => unreachable!(),
        }

        let scale_r = BigRational::from_integer(scaled.scale.clone());
        let to_half = |a: &IVec, value: i128| Halfspace {
            normal: a.iter().map(|&x| x as i64).collect(),
            offset: BigRational::from_integer(BigInt::from(value)) / &scale_r,
        };
        let facets: Vec<Halfspace> = normals
            .iter()
            .map(|a| to_half(a, ip.iter().map(|p| dot(a, p)).max().unwrap()))
            .collect();
        let equalities: Vec<Halfspace> =
            eq_normals.iter().map(|a| to_half(a, dot(a, p0))).collect();

        let vertices: Vec<Vec<BigRational>> = points
            .iter()
            .zip(ip)
            .filter(|(_, p)| {
                if affine_dim == 0 {
                    return true;
                }
                let on = normals
                    .iter()
                    .filter(|a| dot(a, p) == ip.iter().map(|q| dot(a, q)).max().unwrap())
                    .count();
                on >= affine_dim
            })
            .map(|(p, _)| p.clone())
            .collect();

        let poly = LatticePolytope {
            dim,
            vertices,
            affine_dim,
            equalities,
            facets,
        };
        debug_assert!(poly.cross_validate(&points));
        Ok(poly)
    }

    /// A hyperplane face is a facet when its points span an (affine_dim − 1)-flat.
    fn spans_facet(ip: &[IVec], values: &[i128], level: i128, affine_dim: usize) -> bool {
        if affine_dim <= 1 {
            return true;
        }
        let on: Vec<&IVec> = ip
            .iter()
            .zip(values)
            .filter(|(_, &v)| v == level)
            .map(|(p, _)| p)
            .collect();
        let base = on[0];
        let dirs: Vec<IVec> = on.iter().map(|p| sub(p, base)).collect();
        rank(&dirs, base.len()) == affine_dim - 1
    }

    /// Both descriptions agree on the input points and each facet carries enough vertices.
    fn cross_validate(&self, points: &[Vec<BigRational>]) -> bool {
        let all_inside = points.iter().all(|p| self.contains(p, ContainMode::Closed));
        let facets_supported = self.facets.iter().all(|h| {
            self.vertices
                .iter()
                .filter(|v| dot_r(&h.normal, v) == h.offset)
                .count()
                >= self.affine_dim.max(1)
        });
        all_inside && facets_supported
    }

    pub fn from_integer_points(dim: usize, points: &[Vec<i64>]) -> Result<Self> {
        Self::from_points(
            dim,
            points
                .iter()
                .map(|p| p.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn point(p: &[i64]) -> Self {
        Self::from_integer_points(p.len(), &[p.to_vec()]).expect("single point polytope")
    }

    /// Axis-aligned box with integer corners.
    pub fn cube(lo: &[i64], hi: &[i64]) -> Result<Self> {
        let n = lo.len();
        let mut pts = Vec::new();
        for mask in 0..(1u32 << n) {
            pts.push(
                (0..n)
                    .map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] })
                    .collect(),
            );
        }
        Self::from_integer_points(n, &pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn vertices(&self) -> &[Vec<BigRational>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn equalities(&self) -> &[Halfspace] {
        &self.equalities
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    pub fn is_integral(&self) -> bool {
        self.vertices.iter().flatten().all(BigRational::is_integer)
    }

    pub fn integer_vertices(&self) -> Result<Vec<Vec<i64>>> {
        self.vertices
            .iter()
            .map(|v| {
                v.iter()
                    .map(|x| {
                        if x.is_integer() {
                            x.to_integer().to_i64().ok_or(Error::NonIntegerVertices)
                        } else {
                            Err(Error::NonIntegerVertices)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// max over the polytope of ⟨x, ξ⟩.
    pub fn support_function(&self, x: &[BigRational]) -> BigRational {
        self.vertices
            .iter()
            .map(|v| v.iter().zip(x).map(|(a, b)| a * b).sum::<BigRational>())
            .max()
            .expect("nonempty polytope")
    }

    pub fn support_function_int(&self, x: &[i64]) -> BigRational {
        let x: Vec<BigRational> = x.iter().map(|&v| BigRational::from_integer(v.into())).collect();
        self.support_function(&x)
    }

    pub fn support_function_f64(&self, x: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| {
                v.iter()
                    .zip(x)
                    .map(|(a, b)| crate::poly::rational_to_f64(a) * b)
                    .sum::<f64>()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Self::from_points(self.dim, pts)
    }

    /// Dilation by a nonnegative rational factor.
    pub fn scale(&self, k: &BigRational) -> Result<Self> {
        Self::from_points(
            self.dim,
            self.vertices
                .iter()
                .map(|v| v.iter().map(|x| x * k).collect())
                .collect(),
        )
    }

    pub fn translate(&self, t: &[BigRational]) -> Result<Self> {
        Self::from_points(
            self.dim,
            self.vertices
                .iter()
                .map(|v| v.iter().zip(t).map(|(x, y)| x + y).collect())
                .collect(),
        )
    }

    pub fn contains(&self, point: &[BigRational], mode: ContainMode) -> bool {
        if point.len() != self.dim {
            return false;
        }
        let on_hull = self
            .equalities
            .iter()
            .all(|h| dot_r(&h.normal, point) == h.offset);
        match mode {
            ContainMode::Closed => {
                on_hull
                    && self
                        .facets
                        .iter()
                        .all(|h| dot_r(&h.normal, point) <= h.offset)
            }
            ContainMode::Interior => {
                self.is_full_dimensional()
                    && self
                        .facets
                        .iter()
                        .all(|h| dot_r(&h.normal, point) < h.offset)
            }
            ContainMode::RelativeInterior => {
                on_hull
                    && self
                        .facets
                        .iter()
                        .all(|h| dot_r(&h.normal, point) < h.offset)
            }
        }
    }

    pub fn contains_int(&self, point: &[i64], mode: ContainMode) -> bool {
        let p: Vec<BigRational> = point
            .iter()
            .map(|&v| BigRational::from_integer(v.into()))
            .collect();
        self.contains(&p, mode)
    }

    /// Integer bounding box (floor of minima, ceil of maxima).
    pub fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let lo = (0..self.dim)
            .map(|i| {
                self.vertices
                    .iter()
                    .map(|v| v[i].floor().to_integer())
                    .min()
                    .unwrap()
                    .to_i64()
                    .unwrap()
            })
            .collect();
        let hi = (0..self.dim)
            .map(|i| {
                self.vertices
                    .iter()
                    .map(|v| v[i].ceil().to_integer())
                    .max()
                    .unwrap()
                    .to_i64()
                    .unwrap()
            })
            .collect();
        (lo, hi)
    }

    /// Integer points satisfying the mode's inequalities, in graded-lex order.
    pub fn lattice_points(&self, mode: ContainMode) -> Vec<Vec<i64>> {
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if self.contains_int(&cur, mode) {
                out.push(cur.clone());
            }
            let mut i = 0;
            loop {
                if i == self.dim {
                    out.sort_by(|a, b| {
                        let da: i64 = a.iter().sum();
                        let db: i64 = b.iter().sum();
                        da.cmp(&db).then_with(|| a.cmp(b))
                    });
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

    /// Euclidean volume in the ambient dimension (zero when not full-dimensional).
    pub fn volume(&self) -> BigRational {
        if !self.is_full_dimensional() {
            return BigRational::zero();
        }
        match self.dim {
            0 => BigRational::one(),
            1 => {
                let xs: Vec<&BigRational> = self.vertices.iter().map(|v| &v[0]).collect();
                xs.iter().copied().max().unwrap() - xs.iter().copied().min().unwrap()
            }
            2 => polygon_area(&order_cyclic(&self.vertices)),
            3 => {
                let c = centroid(&self.vertices);
                let mut vol = BigRational::zero();
                for h in &self.facets {
                    let face: Vec<Vec<BigRational>> = self
                        .vertices
                        .iter()
                        .filter(|v| dot_r(&h.normal, v) == h.offset)
                        .cloned()
                        .collect();
                    let drop = (0..3).max_by_key(|&i| h.normal[i].abs()).unwrap();
                    let proj: Vec<Vec<BigRational>> = face
                        .iter()
                        .map(|v| (0..3).filter(|&i| i != drop).map(|i| v[i].clone()).collect())
                        .collect();
                    let order = cyclic_order_indices(&proj);
                    let ring: Vec<&Vec<BigRational>> = order.iter().map(|&i| &face[i]).collect();
                    for k in 1..ring.len().saturating_sub(1) {
                        vol += det3(ring[0], ring[k], ring[k + 1], &c).abs();
                    }
                }
                vol / BigRational::from_integer(6.into())
            }
            _ => unreachable!("dimension capped at 3"),
        }
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(format_rational).collect())
                .collect(),
        }
    }
}

fn dot_r(a: &[i64], x: &[BigRational]) -> BigRational {
    a.iter()
        .zip(x)
        .map(|(&ai, xi)| xi * BigRational::from_integer(ai.into()))
        .sum()
}

fn centroid(pts: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = BigRational::from_integer(BigInt::from(pts.len()));
    (0..pts[0].len())
        .map(|i| pts.iter().map(|p| p[i].clone()).sum::<BigRational>() / &n)
        .collect()
}

fn det3(a: &[BigRational], b: &[BigRational], c: &[BigRational], o: &[BigRational]) -> BigRational {
    let u: Vec<BigRational> = (0..3).map(|i| &a[i] - &o[i]).collect();
    let v: Vec<BigRational> = (0..3).map(|i| &b[i] - &o[i]).collect();
    let w: Vec<BigRational> = (0..3).map(|i| &c[i] - &o[i]).collect();
    &u[0] * (&v[1] * &w[2] - &v[2] * &w[1]) - &u[1] * (&v[0] * &w[2] - &v[2] * &w[0])
        + &u[2] * (&v[0] * &w[1] - &v[1] * &w[0])
}

/// Indices of planar points in counter-clockwise order around their centroid.
fn cyclic_order_indices(pts: &[Vec<BigRational>]) -> Vec<usize> {
    let c = centroid(pts);
    let rel: Vec<(BigRational, BigRational)> = pts
        .iter()
        .map(|p| (&p[0] - &c[0], &p[1] - &c[1]))
        .collect();
    let half = |v: &(BigRational, BigRational)| -> u8 {
        // upper half-plane (including positive x-axis) first
        if v.1.is_positive() || (v.1.is_zero() && v.0.is_positive()) {
            0
        } else {
            1
        }
    };
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&i, &j| {
        let (a, b) = (&rel[i], &rel[j]);
        half(a).cmp(&half(b)).then_with(|| {
            let cr = &a.0 * &b.1 - &a.1 * &b.0;
            BigRational::zero().cmp(&cr)
        })
    });
    idx
}

fn order_cyclic(pts: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    cyclic_order_indices(pts)
        .into_iter()
        .map(|i| pts[i].clone())
        .collect()
}

fn polygon_area(ring: &[Vec<BigRational>]) -> BigRational {
    let n = ring.len();
    let mut twice = BigRational::zero();
    for i in 0..n {
        let (a, b) = (&ring[i], &ring[(i + 1) % n]);
        twice += &a[0] * &b[1] - &a[1] * &b[0];
    }
    twice.abs() / BigRational::from_integer(2.into())
}

/// `{"dim": n, "vertices": [["p/q", ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
}

impl PolytopeJson {
    pub fn to_polytope(&self) -> Result<LatticePolytope> {
        let pts = self
            .vertices
            .iter()
            .map(|v| {
                v.iter()
                    .map(|s| {
                        parse_rational(s)
                            .ok_or_else(|| Error::Input(format!("invalid rational '{s}'")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        LatticePolytope::from_points(self.dim, pts)
    }
}
