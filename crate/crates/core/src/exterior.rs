//! Exterior powers in coordinates: compound matrices, wedge and contraction,
//! the multiplication maps `Theta_{alpha,y}` and the retraction projections.
//!
//! A point of `L_t(m, n)` is stored as its `C(m,t) x C(n,t)` coordinate
//! matrix over lex-ordered index combinations; row `I` and column `J` carry
//! the coordinate `E_{I,J}`, and the compound of a matrix `B` has
//! `E_{I,J} = [I | J]_B`.
//!
//! Contraction by a wedge of covectors iterates single contractions left to
//! right: `x . (a1 ^ ... ^ av) = ((x . a1) . ...) . av`. This is the
//! convention under which `Theta` agrees with the coordinate substitution
//! that fixes the normal forms (see [`theta`]).

use alloc::vec::Vec;

use crate::comb::{binomial, combinations, Combination};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::DenseMatrix;
use crate::scalar::ExactScalar;

/// An element of `L_t(m, n) = Hom(Λ^t K^m, Λ^t K^n)` in lex coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExteriorPoint {
    m: usize,
    n: usize,
    t: usize,
    coords: DenseMatrix,
}

impl ExteriorPoint {
    pub fn new(m: usize, n: usize, t: usize, coords: DenseMatrix) -> Result<Self> {
        if t > m.min(n) {
            return Err(Error::Param(alloc::format!("t = {t} exceeds min({m}, {n})")));
        }
        if coords.rows() != binomial(m, t) || coords.cols() != binomial(n, t) {
            return Err(Error::Dimension(alloc::format!(
                "coordinate matrix {}x{} does not match C({m},{t}) x C({n},{t})",
                coords.rows(),
                coords.cols()
            )));
        }
        Ok(ExteriorPoint { m, n, t, coords })
    }

    pub fn zero(m: usize, n: usize, t: usize) -> Result<Self> {
        ExteriorPoint::new(m, n, t, DenseMatrix::zero(binomial(m, t), binomial(n, t)))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn coords(&self) -> &DenseMatrix {
        &self.coords
    }

    pub fn set_coord_at(&mut self, row: usize, col: usize, v: ExactScalar) {
        self.coords.set(row, col, v);
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    /// The coordinate `E_{I,J}`.
    pub fn coord(&self, i: &Combination, j: &Combination) -> Result<&ExactScalar> {
        if i.len() != self.t || j.len() != self.t || i.bound() != self.m || j.bound() != self.n {
            return Err(Error::Dimension(alloc::format!("coordinate index shape mismatch")));
        }
        Ok(self.coords.get(i.position(), j.position()))
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.coords)
    }

    pub fn scale(&self, c: &ExactScalar) -> ExteriorPoint {
        ExteriorPoint { coords: self.coords.scale(c), ..self.clone() }
    }

    pub fn sub(&self, rhs: &ExteriorPoint) -> Result<ExteriorPoint> {
        if (self.m, self.n, self.t) != (rhs.m, rhs.n, rhs.t) {
            return Err(Error::Dimension(alloc::format!("points in different spaces")));
        }
        Ok(ExteriorPoint { coords: self.coords.sub(&rhs.coords)?, ..self.clone() })
    }
}

/// The compound matrix map: entry `(I, J) = [I | J]_B`. With `t = 0` the
/// result is the 1 x 1 identity (the scalar case).
pub fn compound(b: &DenseMatrix, t: usize) -> Result<ExteriorPoint> {
    let (m, n) = (b.rows(), b.cols());
    if t > m.min(n) {
        return Err(Error::Param(alloc::format!(
            "t = {t} exceeds min({m}, {n}) for the compound"
        )));
    }
    let row_ix = combinations(m, t)?;
    let col_ix = combinations(n, t)?;
    let mut coords = DenseMatrix::zero(row_ix.len(), col_ix.len());
    for (ri, i) in row_ix.iter().enumerate() {
        for (ci, j) in col_ix.iter().enumerate() {
            coords.set(ri, ci, linalg::minor(b, i, j)?);
        }
    }
    ExteriorPoint::new(m, n, t, coords)
}

// ---------------------------------------------------------------------------
// multivectors

/// A grade-`u` element of `Λ^u K^dim` over lex-ordered `u`-combinations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Multivector {
    dim: usize,
    grade: usize,
    coeffs: Vec<ExactScalar>,
}

impl Multivector {
    pub fn zero(dim: usize, grade: usize) -> Result<Self> {
        if grade > dim {
            return Err(Error::Param(alloc::format!("grade {grade} exceeds dimension {dim}")));
        }
        Ok(Multivector {
            dim,
            grade,
            coeffs: alloc::vec![ExactScalar::zero(); binomial(dim, grade)],
        })
    }

    pub fn basis(dim: usize, indices: &Combination) -> Result<Self> {
        if indices.bound() != dim {
            return Err(Error::Dimension(alloc::format!("basis index bound mismatch")));
        }
        let mut v = Multivector::zero(dim, indices.len())?;
        v.coeffs[indices.position()] = ExactScalar::one();
        Ok(v)
    }

    /// Grade-1 vector from coordinates.
    pub fn from_vector(coords: &[ExactScalar]) -> Self {
        Multivector { dim: coords.len(), grade: 1, coeffs: coords.to_vec() }
    }

    /// The unit of grade 0.
    pub fn unit(dim: usize) -> Self {
        Multivector { dim, grade: 0, coeffs: alloc::vec![ExactScalar::one()] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, indices: &Combination) -> &ExactScalar {
        &self.coeffs[indices.position()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(ExactScalar::is_zero)
    }

    pub fn add(&self, rhs: &Multivector) -> Result<Multivector> {
        if (self.dim, self.grade) != (rhs.dim, rhs.grade) {
            return Err(Error::Dimension(alloc::format!("multivector shape mismatch")));
        }
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        Ok(Multivector { dim: self.dim, grade: self.grade, coeffs })
    }

    pub fn scale(&self, c: &ExactScalar) -> Multivector {
        Multivector {
            dim: self.dim,
            grade: self.grade,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }
}

/// Sign of merging two disjoint sorted tuples: parity of the pairs
/// `(i, j)` with `i` in `a`, `j` in `b`, `i > j`.
fn shuffle_sign(a: &[usize], b: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for &x in a {
        inversions += b.iter().filter(|&&y| y < x).count();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Exterior product with shuffle signs.
pub fn wedge(x: &Multivector, y: &Multivector) -> Result<Multivector> {
    if x.dim != y.dim {
        return Err(Error::Dimension(alloc::format!("wedge across different dimensions")));
    }
    if x.grade + y.grade > x.dim {
        return Err(Error::Param(alloc::format!(
            "grade overflow: {} + {} > {}",
            x.grade,
            y.grade,
            x.dim
        )));
    }
    let xs = combinations(x.dim, x.grade)?;
    let ys = combinations(y.dim, y.grade)?;
    let mut out = Multivector::zero(x.dim, x.grade + y.grade)?;
    for (xi, i) in xs.iter().enumerate() {
        if x.coeffs[xi].is_zero() {
            continue;
        }
        for (yi, j) in ys.iter().enumerate() {
            if y.coeffs[yi].is_zero() {
                continue;
            }
            if i.indices().iter().any(|v| j.contains(*v)) {
                continue;
            }
            let merged =
                Combination::new(merge_sorted(i.indices(), j.indices()), x.dim).expect("disjoint");
            let pos = merged.position();
            let mut term = &x.coeffs[xi] * &y.coeffs[yi];
            if shuffle_sign(i.indices(), j.indices()) < 0 {
                term = -&term;
            }
            out.coeffs[pos] = &out.coeffs[pos] + &term;
        }
    }
    Ok(out)
}

/// Wedge of a list of grade-1 vectors (the empty list gives the unit).
pub fn wedge_vectors(vectors: &[Vec<ExactScalar>]) -> Result<Multivector> {
    let dim = vectors.first().map_or(0, Vec::len);
    let mut acc = Multivector::unit(dim);
    for v in vectors {
        if v.len() != dim {
            return Err(Error::Dimension(alloc::format!("vector length mismatch")));
        }
        acc = wedge(&acc, &Multivector::from_vector(v))?;
    }
    Ok(acc)
}

/// Contraction by a single covector: the derivation
/// `x . a = sum_i (-1)^(i-1) a(x_i) x_1 ^ ... x_i^ ... ^ x_u`
/// extended linearly from decomposables.
pub fn contract(x: &Multivector, alpha: &[ExactScalar]) -> Result<Multivector> {
    if x.grade == 0 {
        return Err(Error::Param(alloc::format!("contraction of a grade-0 element")));
    }
    if alpha.len() != x.dim {
        return Err(Error::Dimension(alloc::format!("covector length mismatch")));
    }
    let basis = combinations(x.dim, x.grade)?;
    let mut out = Multivector::zero(x.dim, x.grade - 1)?;
    for (bi, indices) in basis.iter().enumerate() {
        if x.coeffs[bi].is_zero() {
            continue;
        }
        for (pos, &idx) in indices.indices().iter().enumerate() {
            let a = &alpha[idx - 1];
            if a.is_zero() {
                continue;
            }
            let rest = indices.with_removed_position(pos + 1);
            let target = rest.position();
            let mut term = &x.coeffs[bi] * a;
            if pos % 2 == 1 {
                term = -&term;
            }
            out.coeffs[target] = &out.coeffs[target] + &term;
        }
    }
    Ok(out)
}

/// Iterated contraction by a list of covectors, left to right.
pub fn contract_many(x: &Multivector, alphas: &[Vec<ExactScalar>]) -> Result<Multivector> {
    let mut acc = x.clone();
    for a in alphas {
        acc = contract(&acc, a)?;
    }
    Ok(acc)
}

/// Contraction of `x` by the basis covector block `e*_S` in closed form:
/// a basis element contributes its complement with the shuffle sign of
/// splitting off `S`, and nothing when `S` is not contained in it. This is
/// an independent route for the iterated contraction and is used to test it.
pub fn contract_basis_block(x: &Multivector, s: &Combination) -> Result<Multivector> {
    if s.len() > x.grade {
        return Err(Error::Param(alloc::format!("block grade exceeds multivector grade")));
    }
    let basis = combinations(x.dim, x.grade)?;
    let mut out = Multivector::zero(x.dim, x.grade - s.len())?;
    for (bi, indices) in basis.iter().enumerate() {
        if x.coeffs[bi].is_zero() || !s.is_subset_of(indices) {
            continue;
        }
        let rest: Vec<usize> =
            indices.indices().iter().copied().filter(|v| !s.contains(*v)).collect();
        let sign = shuffle_sign(rest.as_slice(), s.indices());
        let rest = Combination::new(rest, x.dim).expect("subset of valid tuple");
        let pos = rest.position();
        let term = if sign < 0 { -&x.coeffs[bi] } else { x.coeffs[bi].clone() };
        out.coeffs[pos] = &out.coeffs[pos] + &term;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// decomposables, Theta and retraction

/// A nonzero decomposable element `v_1 ^ ... ^ v_v`, stored by its factors as
/// coordinate rows. Construction checks linear independence, which is exactly
/// the nonvanishing of the wedge.
#[derive(Clone, Debug)]
pub struct DecomposableSpec {
    factors: DenseMatrix,
}

impl DecomposableSpec {
    pub fn new(factors: Vec<Vec<ExactScalar>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Param(alloc::format!(
                "empty factor list loses the ambient dimension; use DecomposableSpec::standard(0, dim)"
            )));
        }
        let m = DenseMatrix::from_rows(factors)?;
        if linalg::rank(&m) != m.rows() {
            return Err(Error::Param(alloc::format!(
                "decomposable factors are linearly dependent (zero wedge)"
            )));
        }
        Ok(DecomposableSpec { factors: m })
    }

    /// The first `v` standard basis (co)vectors of `K^dim`.
    pub fn standard(v: usize, dim: usize) -> Result<Self> {
        if v > dim {
            return Err(Error::Param(alloc::format!("{v} factors in dimension {dim}")));
        }
        if v == 0 {
            return Ok(DecomposableSpec { factors: DenseMatrix::zero(0, dim) });
        }
        let mut rows = Vec::with_capacity(v);
        for i in 0..v {
            let mut row = alloc::vec![ExactScalar::zero(); dim];
            row[i] = ExactScalar::one();
            rows.push(row);
        }
        DecomposableSpec::new(rows)
    }

    pub fn count(&self) -> usize {
        self.factors.rows()
    }

    pub fn ambient(&self) -> usize {
        self.factors.cols()
    }

    pub fn factor_matrix(&self) -> &DenseMatrix {
        &self.factors
    }

    pub fn factor_rows(&self) -> Vec<Vec<ExactScalar>> {
        (0..self.factors.rows()).map(|i| self.factors.row(i).to_vec()).collect()
    }

    /// Extends the factor rows to an invertible square matrix by appending
    /// unit rows on coordinates that keep the rank full.
    pub fn extend_to_invertible(&self) -> DenseMatrix {
        let dim = self.ambient();
        let mut ext = self.factors.clone();
        for j in 0..dim {
            if ext.rows() == dim {
                break;
            }
            let mut unit = DenseMatrix::zero(1, dim);
            unit.set(0, j, ExactScalar::one());
            let candidate = ext.vstack(&unit).expect("same width");
            if linalg::rank(&candidate) == candidate.rows() {
                ext = candidate;
            }
        }
        debug_assert_eq!(ext.rows(), dim);
        ext
    }
}

/// `Theta_{alpha,y}`: sends `f` in `L_{t-v}(V_alpha, W_y)` to the point
/// `x -> y ^ f(x . alpha)` of `L_t(V, W)`.
///
/// `f` is read in the adapted bases this function constructs: `V_alpha`
/// carries the completion of `alpha` to a dual basis, `W_y` the images of the
/// completion of `y`. In those bases the map is the coordinate substitution
/// that prefixes `{1..v}` to both index sets; the result is transformed back
/// to standard coordinates.
pub fn theta(
    alpha: &DecomposableSpec,
    y: &DecomposableSpec,
    f: &ExteriorPoint,
) -> Result<ExteriorPoint> {
    let v = alpha.count();
    if y.count() != v {
        return Err(Error::Dimension(alloc::format!("alpha and y have different sizes")));
    }
    let m = alpha.ambient();
    let n = y.ambient();
    let t = f.t() + v;
    if f.m() != m - v || f.n() != n - v {
        return Err(Error::Dimension(alloc::format!(
            "f lives on ({}, {}, {}), expected ({}, {}, {})",
            f.m(),
            f.n(),
            f.t(),
            m - v,
            n - v,
            t - v
        )));
    }
    if t > m.min(n) {
        return Err(Error::Param(alloc::format!("target grade {t} too large")));
    }
    let adapted = theta_adapted(f, v, m, n)?;
    // With A-bar extending alpha and T extending y, standard coordinates are
    // compound(A-bar^T) * adapted * compound(T).
    let a_ext = alpha.extend_to_invertible();
    let t_ext = y.extend_to_invertible();
    let left = compound(&a_ext.transpose(), t)?;
    let right = compound(&t_ext, t)?;
    let coords = left.coords().matmul(adapted.coords())?.matmul(right.coords())?;
    ExteriorPoint::new(m, n, t, coords)
}

/// The substitution form of `Theta` in adapted bases: coordinate `(I, J)` of
/// the image equals coordinate `(I - v, J - v)` of `f` when both `I` and `J`
/// contain `{1..v}`, and zero otherwise.
fn theta_adapted(f: &ExteriorPoint, v: usize, m: usize, n: usize) -> Result<ExteriorPoint> {
    let t = f.t() + v;
    let mut out = ExteriorPoint::zero(m, n, t)?;
    let rows_small = combinations(m - v, t - v)?;
    let cols_small = combinations(n - v, t - v)?;
    for (ri, i) in rows_small.iter().enumerate() {
        for (ci, j) in cols_small.iter().enumerate() {
            let val = f.coords().get(ri, ci).clone();
            if val.is_zero() {
                continue;
            }
            let big_i = i.with_prefix(v).with_bound(m)?;
            let big_j = j.with_prefix(v).with_bound(n)?;
            out.coords.set(big_i.position(), big_j.position(), val);
        }
    }
    Ok(out)
}

/// Direct evaluation of the defining formula `x -> y ^ f(x . alpha)` for an
/// ambient `f` on `L_{t-v}(m, n)`. Independent route for [`theta`]: the
/// result depends only on the map induced by `f` on `(V_alpha, W_y)`.
pub fn theta_from_ambient(
    alpha: &DecomposableSpec,
    y: &DecomposableSpec,
    f: &ExteriorPoint,
    t: usize,
) -> Result<ExteriorPoint> {
    let v = alpha.count();
    if y.count() != v {
        return Err(Error::Dimension(alloc::format!("alpha and y have different sizes")));
    }
    let m = alpha.ambient();
    let n = y.ambient();
    if f.m() != m || f.n() != n || f.t() + v != t {
        return Err(Error::Dimension(alloc::format!("ambient point has wrong shape")));
    }
    let y_wedge = wedge_vectors(&y.factor_rows())?;
    let alphas = alpha.factor_rows();
    let dom = combinations(m, t)?;
    let mut out = ExteriorPoint::zero(m, n, t)?;
    for (di, i) in dom.iter().enumerate() {
        let x = Multivector::basis(m, i)?;
        let contracted = contract_many(&x, &alphas)?;
        // apply f: row vector of Λ^{t-v} V coordinates times the matrix of f
        let mut fx = Multivector::zero(n, t - v)?;
        for (pos, c) in contracted.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for col in 0..f.coords().cols() {
                let add = c * f.coords().get(pos, col);
                fx.coeffs[col] = &fx.coeffs[col] + &add;
            }
        }
        let image = wedge(&y_wedge, &fx)?;
        for (ci, c) in image.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.coords.set(di, ci, c.clone());
            }
        }
    }
    Ok(out)
}

/// The retraction projection: entry `(L, M)` of the result is entry
/// `({1..v} ∪ (L + v), {1..v} ∪ (M + v))` of `x`.
pub fn retract_project(x: &ExteriorPoint, v: usize) -> Result<ExteriorPoint> {
    if v > x.t() {
        return Err(Error::Param(alloc::format!("v = {v} exceeds t = {}", x.t())));
    }
    let (m, n, t) = (x.m() - v, x.n() - v, x.t() - v);
    let rows_small = combinations(m, t)?;
    let cols_small = combinations(n, t)?;
    let mut out = ExteriorPoint::zero(m, n, t)?;
    for (ri, l) in rows_small.iter().enumerate() {
        for (ci, mm) in cols_small.iter().enumerate() {
            let big_l = l.with_prefix(v).with_bound(x.m())?;
            let big_m = mm.with_prefix(v).with_bound(x.n())?;
            let val = x.coords().get(big_l.position(), big_m.position()).clone();
            out.coords.set(ri, ci, val);
        }
    }
    Ok(out)
}

/// The map induced by an ambient point on `(V_alpha, W_y)` in the adapted
/// bases constructed by [`theta`]. Together with [`theta_from_ambient`] this
/// expresses that `Theta` only sees the induced map.
pub fn induce_on_adapted(
    alpha: &DecomposableSpec,
    y: &DecomposableSpec,
    f: &ExteriorPoint,
) -> Result<ExteriorPoint> {
    let v = alpha.count();
    let m = alpha.ambient();
    let n = y.ambient();
    let u = f.t();
    if f.m() != m || f.n() != n {
        return Err(Error::Dimension(alloc::format!("ambient point has wrong shape")));
    }
    let a_ext = alpha.extend_to_invertible();
    let t_ext = y.extend_to_invertible();
    let a_inv = linalg::invert(&a_ext).expect("extension is invertible");
    let t_inv = linalg::invert(&t_ext).expect("extension is invertible");
    // restriction to V_alpha: rows v+1..m of (A-bar^{-1})^T
    let s_low = DenseMatrix::from_fn(m - v, m, |i, j| a_inv.get(j, i + v).clone());
    // projection to W_y: columns v+1..n of T^{-1}
    let q = DenseMatrix::from_fn(n, n - v, |i, j| t_inv.get(i, j + v).clone());
    let left = compound(&s_low, u)?;
    let right = compound(&q, u)?;
    let coords = left.coords().matmul(f.coords())?.matmul(right.coords())?;
    ExteriorPoint::new(m - v, n - v, u, coords)
}
