//! Differential of the compound map, low-degree slices of the relation
//! ideal, tangent-space dimensions at points, and the counting argument for
//! the singular locus.
//!
//! The relation ideal is presented through one variable per `t`-minor
//! symbol: the slice of degree at most `d` is the kernel of the evaluation
//! map from polynomials in those variables to the polynomial ring of the
//! generic matrix. The kernel splits along the row/column multidegree, so it
//! is computed block by block and every block stays small. A Jacobian rank
//! at a point of the variety then bounds the tangent dimension: since the
//! slice may miss higher-degree generators, the computed value is an upper
//! bound for the tangent dimension, so equality with the variety dimension
//! certifies smoothness while larger values at special points are evidence
//! of (not proof of) singularity.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::One;

use crate::comb::{binomial, combinations};
use crate::error::{Error, Result};
use crate::exterior::ExteriorPoint;
use crate::linalg;
use crate::matrix::DenseMatrix;
use crate::poly::{PolyRing, SparsePoly};
use crate::relations::{MinorSymbol, RelationExpr};
use crate::scalar::ExactScalar;

/// Rank of the differential of the compound map at `b`: the directional
/// derivative along the `(i, j)` matrix unit has `(I, J)` entry the signed
/// complementary minor `(-1)^(pos_I(i) + pos_J(j)) [I \ i | J \ j]_b` when
/// `i` is in `I` and `j` in `J`, and zero otherwise.
pub fn d_lambda_rank(b: &DenseMatrix, t: usize) -> Result<usize> {
    let (m, n) = (b.rows(), b.cols());
    if t > m.min(n) {
        return Err(Error::Param(alloc::format!("t = {t} exceeds min({m}, {n})")));
    }
    if t == 0 {
        return Ok(0);
    }
    let rows_ix = combinations(m, t)?;
    let cols_ix = combinations(n, t)?;
    let coords = rows_ix.len() * cols_ix.len();
    let mut jac = DenseMatrix::zero(coords, m * n);
    for (ri, big_i) in rows_ix.iter().enumerate() {
        for (ci, big_j) in cols_ix.iter().enumerate() {
            let row = ri * cols_ix.len() + ci;
            for (pi, &i) in big_i.indices().iter().enumerate() {
                for (pj, &j) in big_j.indices().iter().enumerate() {
                    let sub = linalg::minor(
                        b,
                        &big_i.with_removed_position(pi + 1),
                        &big_j.with_removed_position(pj + 1),
                    )?;
                    let signed = if (pi + pj) % 2 == 1 { -&sub } else { sub };
                    jac.set(row, (i - 1) * n + (j - 1), signed);
                }
            }
        }
    }
    Ok(linalg::rank(&jac))
}

/// One multihomogeneous block of the relation-ideal slice.
#[derive(Clone, Debug)]
pub struct SliceBlock {
    pub degree: usize,
    pub row_mdeg: Vec<u32>,
    pub col_mdeg: Vec<u32>,
    /// Monomials as sorted multisets of symbol indices.
    pub monomials: Vec<Vec<usize>>,
    /// Kernel basis vectors over the monomials, primitive integer form.
    pub kernel: Vec<Vec<ExactScalar>>,
}

/// The degree-bounded slice of the relation ideal in the symbol variables.
#[derive(Clone, Debug)]
pub struct RelationIdealSlice {
    pub m: usize,
    pub n: usize,
    pub t: usize,
    pub degree: usize,
    /// All `t`-minor symbols, row-major over the coordinate grid.
    pub symbols: Vec<MinorSymbol>,
    pub blocks: Vec<SliceBlock>,
}

impl RelationIdealSlice {
    pub fn kernel_dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.kernel.len()).sum()
    }

    fn symbol_index(&self, sym: &MinorSymbol) -> Option<usize> {
        let cols = binomial(self.n, self.t);
        let r = sym.rows().with_bound(self.m).ok()?.position();
        let c = sym.cols().with_bound(self.n).ok()?.position();
        let idx = r * cols + c;
        (self.symbols.get(idx) == Some(sym)).then_some(idx)
    }

    /// Whether a relation among `t`-minors lies in the span of the slice.
    /// Every factor must be a `t`-minor of the grid and the expression must
    /// be multihomogeneous (a single block).
    pub fn contains_relation(&self, rel: &RelationExpr) -> Result<bool> {
        if rel.is_empty() {
            return Ok(true);
        }
        let mut entries: BTreeMap<Vec<usize>, BigRational> = BTreeMap::new();
        let mut signature: Option<(usize, Vec<u32>, Vec<u32>)> = None;
        let ring = PolyRing::new(self.m, self.n);
        for (c, factors) in rel.terms() {
            let mut mono: Vec<usize> = Vec::with_capacity(factors.len());
            for f in factors {
                if f.size() != self.t {
                    return Err(Error::Param(alloc::format!(
                        "factor {f} is not a {}-minor",
                        self.t
                    )));
                }
                let idx = self.symbol_index(f).ok_or_else(|| {
                    Error::Param(alloc::format!("factor {f} outside the symbol grid"))
                })?;
                mono.push(idx);
            }
            mono.sort_unstable();
            // signature of the term: degree and multidegree
            let mut rows = alloc::vec![0u32; self.m];
            let mut cols = alloc::vec![0u32; self.n];
            for &s in &mono {
                let (r, cdeg) = self.symbols[s]
                    .poly(&ring)?
                    .homogeneous_multidegree(&ring)
                    .expect("minors are multihomogeneous");
                for (a, b) in rows.iter_mut().zip(r) {
                    *a += b;
                }
                for (a, b) in cols.iter_mut().zip(cdeg) {
                    *a += b;
                }
            }
            let sig = (mono.len(), rows, cols);
            match &signature {
                None => signature = Some(sig),
                Some(existing) if *existing != sig => {
                    return Err(Error::Param(alloc::format!(
                        "relation spans several multidegree blocks"
                    )))
                }
                _ => {}
            }
            let e = entries.entry(mono).or_insert_with(|| {
                BigRational::from_integer(num_bigint::BigInt::from(0))
            });
            *e += c;
        }
        entries.retain(|_, c| !num_traits::Zero::is_zero(c));
        if entries.is_empty() {
            return Ok(true);
        }
        let (degree, rows, cols) = signature.expect("nonempty relation");
        let Some(block) = self.blocks.iter().find(|b| {
            b.degree == degree && b.row_mdeg == rows && b.col_mdeg == cols
        }) else {
            return Ok(false);
        };
        // membership in the span: appending the vector must not raise the rank
        let mono_pos: BTreeMap<&Vec<usize>, usize> =
            block.monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut vector = alloc::vec![ExactScalar::zero(); block.monomials.len()];
        for (mono, c) in &entries {
            let Some(&pos) = mono_pos.get(mono) else {
                return Ok(false);
            };
            vector[pos] = ExactScalar::Rat(c.clone());
        }
        let mut rows_mat: Vec<Vec<ExactScalar>> = block.kernel.clone();
        let base = DenseMatrix::from_rows(rows_mat.clone())?;
        let base_rank = if rows_mat.is_empty() { 0 } else { linalg::rank(&base) };
        rows_mat.push(vector);
        let extended = DenseMatrix::from_rows(rows_mat)?;
        Ok(linalg::rank(&extended) == base_rank)
    }
}

/// Computes the slice of the relation ideal up to the given degree. Guarded
/// to the desk scale: at most 40 symbol variables and degree at most 3.
pub fn relation_ideal_slice(
    m: usize,
    n: usize,
    t: usize,
    degree: usize,
) -> Result<RelationIdealSlice> {
    let nsyms = binomial(m, t) * binomial(n, t);
    if nsyms > 40 {
        return Err(Error::Budget(alloc::format!(
            "{nsyms} symbol variables exceed the guard of 40"
        )));
    }
    if degree > 3 || degree == 0 {
        return Err(Error::Budget(alloc::format!("degree {degree} outside [1, 3]")));
    }
    let ring = PolyRing::new(m, n);
    let mut symbols = Vec::with_capacity(nsyms);
    for rows in combinations(m, t)? {
        for cols in combinations(n, t)? {
            symbols.push(MinorSymbol::new(rows.clone(), cols)?);
        }
    }
    let polys: Vec<SparsePoly> =
        symbols.iter().map(|s| s.poly(&ring)).collect::<Result<_>>()?;
    let mdegs: Vec<(Vec<u32>, Vec<u32>)> = polys
        .iter()
        .map(|p| p.homogeneous_multidegree(&ring).expect("minors are multihomogeneous"))
        .collect();

    // enumerate monomials per degree, grouped by multidegree
    let mut blocks: BTreeMap<(usize, Vec<u32>, Vec<u32>), Vec<Vec<usize>>> = BTreeMap::new();
    for deg in 1..=degree {
        let mut stack = Vec::new();
        multiset_rec(nsyms, deg, 0, &mut stack, &mut |mono: &[usize]| {
            let mut rows = alloc::vec![0u32; m];
            let mut cols = alloc::vec![0u32; n];
            for &s in mono {
                for (a, b) in rows.iter_mut().zip(&mdegs[s].0) {
                    *a += b;
                }
                for (a, b) in cols.iter_mut().zip(&mdegs[s].1) {
                    *a += b;
                }
            }
            blocks.entry((deg, rows, cols)).or_default().push(mono.to_vec());
        });
    }

    let mut out_blocks = Vec::new();
    for ((deg, row_mdeg, col_mdeg), monomials) in blocks {
        // evaluation matrix: X-monomials x symbol-monomials
        let mut x_monos: BTreeMap<crate::poly::Monomial, usize> = BTreeMap::new();
        let mut columns: Vec<Vec<(usize, BigRational)>> = Vec::with_capacity(monomials.len());
        for mono in &monomials {
            let mut prod = SparsePoly::constant(ring.nvars(), BigRational::one());
            for &s in mono {
                prod = prod.mul(&polys[s]);
            }
            let mut col = Vec::with_capacity(prod.term_count());
            for (xm, c) in prod.terms() {
                let next = x_monos.len();
                let row = *x_monos.entry(xm.clone()).or_insert(next);
                col.push((row, c.clone()));
            }
            columns.push(col);
        }
        let mut mat = DenseMatrix::zero(x_monos.len(), monomials.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, c) in col {
                mat.set(*i, j, ExactScalar::Rat(c.clone()));
            }
        }
        let kernel = linalg::kernel_basis(&mat);
        out_blocks.push(SliceBlock { degree: deg, row_mdeg, col_mdeg, monomials, kernel });
    }
    Ok(RelationIdealSlice { m, n, t, degree, symbols, blocks: out_blocks })
}

fn multiset_rec(
    nsyms: usize,
    want: usize,
    from: usize,
    stack: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if stack.len() == want {
        visit(stack);
        return;
    }
    for i in from..nsyms {
        stack.push(i);
        multiset_rec(nsyms, want, i, stack, visit);
        stack.pop();
    }
}

/// Tangent-space bound at a point of the variety: the number of symbol
/// variables minus the rank of the Jacobian of the slice's kernel basis at
/// the point. Equality with `mn` at a point certifies smoothness there;
/// values above `mn` at special points are consistent with singularity.
pub fn tangent_dim_at(x: &ExteriorPoint, slice: &RelationIdealSlice) -> Result<usize> {
    if (x.m(), x.n(), x.t()) != (slice.m, slice.n, slice.t) {
        return Err(Error::Dimension(alloc::format!("point does not match the slice ambient")));
    }
    let nsyms = slice.symbols.len();
    // symbol values at the point, in grid order
    let values: Vec<BigRational> = {
        let mut v = Vec::with_capacity(nsyms);
        for r in 0..x.coords().rows() {
            for c in 0..x.coords().cols() {
                v.push(x.coords().get(r, c).expect_rational().clone());
            }
        }
        v
    };
    let mut rows: Vec<Vec<ExactScalar>> = Vec::new();
    for block in &slice.blocks {
        for g in &block.kernel {
            let mut grad = alloc::vec![BigRational::from_integer(0.into()); nsyms];
            for (mono, coeff) in block.monomials.iter().zip(g) {
                if coeff.is_zero() {
                    continue;
                }
                let c = coeff.expect_rational();
                // d/dY_s of the monomial, evaluated at the point
                for (pos, &s) in mono.iter().enumerate() {
                    let mut prod = c.clone();
                    for (q, &other) in mono.iter().enumerate() {
                        if q != pos {
                            prod *= &values[other];
                        }
                    }
                    grad[s] += prod;
                }
            }
            if grad.iter().any(|v| !num_traits::Zero::is_zero(v)) {
                rows.push(grad.into_iter().map(ExactScalar::Rat).collect());
            }
        }
    }
    if rows.is_empty() {
        return Ok(nsyms);
    }
    let jac = DenseMatrix::from_rows(rows)?;
    Ok(nsyms - linalg::rank(&jac))
}

/// Counting data for the singularity argument at a rank-1 point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingCountReport {
    /// Minors sharing a `(t+1) x (t+1)` window with the leading minor,
    /// counted by direct enumeration.
    pub enumerated: usize,
    /// The closed form `(t(m-t)+1)(t(n-t)+1)`.
    pub closed_form: usize,
    /// The variety dimension `mn`.
    pub ambient: usize,
}

impl SingCountReport {
    pub fn consistent(&self) -> bool {
        self.enumerated == self.closed_form && self.enumerated > self.ambient
    }
}

/// Counts the `t`-minors sharing a `(t+1) x (t+1)` submatrix with the
/// leading minor and compares with the closed form; the excluded parameter
/// ranges are the well-understood special cases.
pub fn sing_counting_check(m: usize, n: usize, t: usize) -> Result<SingCountReport> {
    if !(1 < t && t < m.min(n)) {
        return Err(Error::Param(alloc::format!("need 1 < t < min(m, n)")));
    }
    if m == n && t == m - 1 {
        return Err(Error::Param(alloc::format!(
            "t = m - 1 = n - 1 is an excluded special case"
        )));
    }
    if m > n {
        return Err(Error::Param(alloc::format!("need m <= n")));
    }
    let mut enumerated = 0;
    for a in combinations(m, t)? {
        for b in combinations(n, t)? {
            let a_out = a.indices().iter().filter(|&&i| i > t).count();
            let b_out = b.indices().iter().filter(|&&j| j > t).count();
            if a_out <= 1 && b_out <= 1 {
                enumerated += 1;
            }
        }
    }
    let closed_form = (t * (m - t) + 1) * (t * (n - t) + 1);
    Ok(SingCountReport { enumerated, closed_form, ambient: m * n })
}
