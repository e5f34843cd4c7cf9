//! Exact sparse multivariate polynomials with rational coefficients.
//!
//! Monomials are dense exponent vectors over a fixed variable universe;
//! coefficients are arbitrary-precision rationals and zero coefficients are
//! never stored. The main universe is the entry grid `X_{ij}` of a generic
//! `m x n` matrix, for which multidegrees (row and column degree vectors)
//! are tracked by helpers; auxiliary universes (one variable per minor
//! symbol) reuse the same representation.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::comb::Combination;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::ExactScalar;

/// The variable universe of the entries of a generic `m x n` matrix;
/// `X_{ij}` has index `(i-1) n + (j-1)` for 1-based `i, j`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PolyRing {
    pub m: usize,
    pub n: usize,
}

impl PolyRing {
    pub fn new(m: usize, n: usize) -> Self {
        PolyRing { m, n }
    }

    pub fn nvars(&self) -> usize {
        self.m * self.n
    }

    /// Variable index of `X_{ij}` (1-based `i`, `j`).
    pub fn var(&self, i: usize, j: usize) -> usize {
        debug_assert!(i >= 1 && i <= self.m && j >= 1 && j <= self.n);
        (i - 1) * self.n + (j - 1)
    }

    /// Row and column multidegree of a monomial over this ring.
    pub fn multidegree(&self, mono: &Monomial) -> (Vec<u32>, Vec<u32>) {
        let mut rows = alloc::vec![0u32; self.m];
        let mut cols = alloc::vec![0u32; self.n];
        for (v, &e) in mono.exponents().iter().enumerate() {
            if e > 0 {
                rows[v / self.n] += e as u32;
                cols[v % self.n] += e as u32;
            }
        }
        (rows, cols)
    }
}

/// Dense exponent vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(Vec<u8>);

impl Monomial {
    pub fn constant(nvars: usize) -> Self {
        Monomial(alloc::vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = alloc::vec![0; nvars];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// Removes one power of variable `idx`, if present.
    pub fn divided_by_var(&self, idx: usize) -> Option<Monomial> {
        if self.0[idx] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[idx] -= 1;
        Some(Monomial(e))
    }
}

/// Sparse polynomial: monomial -> nonzero rational coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = SparsePoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::constant(nvars), c);
        }
        p
    }

    pub fn variable(nvars: usize, idx: usize) -> Self {
        let mut p = SparsePoly::zero(nvars);
        p.terms.insert(Monomial::var(nvars, idx), BigRational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> BigRational {
        self.terms.get(mono).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, coeff);
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &SparsePoly, scale: &BigRational) {
        assert_eq!(self.nvars, other.nvars, "mixed variable universes");
        if scale.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * scale);
        }
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        out.add_assign_scaled(other, &BigRational::one());
        out
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        out.add_assign_scaled(other, &-BigRational::one());
        out
    }

    pub fn scale(&self, c: &BigRational) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        out.add_assign_scaled(self, c);
        out
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, other.nvars, "mixed variable universes");
        let mut out = SparsePoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        let mut acc = SparsePoly::constant(self.nvars, BigRational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative with respect to variable `idx`.
    pub fn derivative(&self, idx: usize) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[idx];
            if e > 0 {
                let reduced = m.divided_by_var(idx).expect("positive exponent");
                out.add_term(reduced, c * BigRational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Evaluation at scalar values, one per variable. Rational coefficients
    /// are reduced into the prime field when the values are residues.
    pub fn evaluate(&self, values: &[ExactScalar]) -> Result<ExactScalar> {
        if values.len() != self.nvars {
            return Err(Error::Dimension(alloc::format!(
                "{} values for {} variables",
                values.len(),
                self.nvars
            )));
        }
        let template = values.first().cloned().unwrap_or_else(ExactScalar::zero);
        let mut acc = template.zero_like();
        for (m, c) in &self.terms {
            let coeff = match &template {
                ExactScalar::Rat(_) => ExactScalar::Rat(c.clone()),
                ExactScalar::Mod { modulus, .. } => {
                    ExactScalar::Rat(c.clone()).to_mod(*modulus).ok_or_else(|| {
                        Error::Param(alloc::format!("coefficient denominator divisible by modulus"))
                    })?
                }
            };
            let mut term = coeff;
            for (idx, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    term = &term * &values[idx];
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Evaluation at the entries of a matrix over the ring's grid.
    pub fn evaluate_at_matrix(&self, ring: &PolyRing, at: &DenseMatrix) -> Result<ExactScalar> {
        if at.rows() != ring.m || at.cols() != ring.n {
            return Err(Error::Dimension(alloc::format!(
                "matrix {}x{} does not match ring {}x{}",
                at.rows(),
                at.cols(),
                ring.m,
                ring.n
            )));
        }
        if self.nvars != ring.nvars() {
            return Err(Error::Dimension(alloc::format!("polynomial not over this ring")));
        }
        self.evaluate(at.entries())
    }

    /// The shared row/column multidegree, if every monomial has the same one.
    pub fn homogeneous_multidegree(&self, ring: &PolyRing) -> Option<(Vec<u32>, Vec<u32>)> {
        let mut it = self.terms.keys();
        let first = ring.multidegree(it.next()?);
        for m in it {
            if ring.multidegree(m) != first {
                return None;
            }
        }
        Some(first)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*[")?;
            let mut first = true;
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    if !first {
                        write!(f, " ")?;
                    }
                    write!(f, "x{v}^{e}")?;
                    first = false;
                }
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// Symbolic expansion of the minor `[a | b]` of the generic matrix, by
/// cofactor recursion along the first row; `|a|!` terms with coefficients
/// +-1. The empty minor is the constant 1.
pub fn minor_poly(ring: &PolyRing, a: &Combination, b: &Combination) -> Result<SparsePoly> {
    if a.len() != b.len() {
        return Err(Error::Dimension(alloc::format!(
            "minor with {} rows, {} columns",
            a.len(),
            b.len()
        )));
    }
    if a.indices().last().is_some_and(|&i| i > ring.m)
        || b.indices().last().is_some_and(|&j| j > ring.n)
    {
        return Err(Error::Param(alloc::format!(
            "minor indices outside the {}x{} grid",
            ring.m,
            ring.n
        )));
    }
    fn expand(ring: &PolyRing, rows: &[usize], cols: &[usize]) -> SparsePoly {
        let nvars = ring.nvars();
        if rows.is_empty() {
            return SparsePoly::constant(nvars, BigRational::one());
        }
        let mut acc = SparsePoly::zero(nvars);
        let r = rows[0];
        for (k, &c) in cols.iter().enumerate() {
            let rest_cols: Vec<usize> =
                cols.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &x)| x).collect();
            let sub = expand(ring, &rows[1..], &rest_cols);
            let sign = if k % 2 == 0 { BigRational::one() } else { -BigRational::one() };
            let xvar = SparsePoly::variable(nvars, ring.var(r, c));
            acc = acc.add(&xvar.mul(&sub).scale(&sign));
        }
        acc
    }
    Ok(expand(ring, a.indices(), b.indices()))
}
