//! Exact rank, determinant, minors, linear solving and seeded sampling.
//!
//! Rational matrices are scaled row-wise to integers and eliminated with
//! fraction-free (Bareiss) pivoting, which keeps every intermediate entry a
//! minor of the scaled matrix and so bounds coefficient growth. Prime-field
//! matrices use plain Gaussian elimination with modular inverses. Back
//! substitution happens rationally on the integral echelon form, whose
//! entries are already division-controlled.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::comb::Combination;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::ExactScalar;

/// Outcome of [`solve_linear`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    /// A particular solution together with a basis of the kernel of `A`.
    Solution { particular: Vec<ExactScalar>, kernel: Vec<Vec<ExactScalar>> },
    Inconsistent,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Rational,
    Mod(u64),
}

fn scalar_kind(m: &DenseMatrix) -> Kind {
    let mut kind = Kind::Rational;
    let mut seen = false;
    for e in m.entries() {
        let k = match e {
            ExactScalar::Rat(_) => Kind::Rational,
            ExactScalar::Mod { modulus, .. } => Kind::Mod(*modulus),
        };
        if !seen {
            kind = k;
            seen = true;
        } else {
            assert!(kind == k, "matrix mixes scalar domains");
        }
    }
    kind
}

// ---------------------------------------------------------------------------
// fraction-free elimination over the integers

struct IntEchelon {
    rows: Vec<Vec<BigInt>>,
    /// (row, column) of each pivot, in order.
    pivots: Vec<(usize, usize)>,
    /// Sign accumulated from row swaps.
    sign: i8,
}

/// Bareiss elimination with row pivoting and column skips. The returned rows
/// are integral and upper-echelon on the pivot columns.
fn bareiss(mut rows: Vec<Vec<BigInt>>) -> IntEchelon {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            rows.swap(p, r);
            sign = -sign;
        }
        let pivot = rows[r][c].clone();
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let num = &pivot * &rows[i][j] - &rows[i][c] * &rows[r][j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "fraction-free division not exact");
                rows[i][j] = q;
            }
            rows[i][c] = BigInt::zero();
        }
        prev = pivot;
        pivots.push((r, c));
        r += 1;
    }
    IntEchelon { rows, pivots, sign }
}

fn rational_rows(m: &DenseMatrix) -> Vec<Vec<BigRational>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|e| e.expect_rational().clone()).collect())
        .collect()
}

/// Clears denominators per row; returns integer rows and the factor by which
/// each row was multiplied.
fn integerize(rows: Vec<Vec<BigRational>>) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut out = Vec::with_capacity(rows.len());
    let mut factors = Vec::with_capacity(rows.len());
    for row in rows {
        let mut l = BigInt::one();
        for e in &row {
            l = l.lcm(e.denom());
        }
        out.push(row.iter().map(|e| (e * BigRational::from_integer(l.clone())).to_integer()).collect());
        factors.push(l);
    }
    (out, factors)
}

fn int_echelon_of(m: &DenseMatrix) -> (IntEchelon, Vec<BigInt>) {
    let (rows, factors) = integerize(rational_rows(m));
    (bareiss(rows), factors)
}

/// Back substitution on an integral echelon form. For each free column the
/// kernel vector has a 1 there and rational values on pivot columns; vectors
/// are cleared to primitive integer form.
fn kernel_from_echelon(ech: &IntEchelon, ncols: usize) -> Vec<Vec<ExactScalar>> {
    let pivot_cols: Vec<usize> = ech.pivots.iter().map(|&(_, c)| c).collect();
    let mut out = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut x = alloc::vec![BigRational::zero(); ncols];
        x[free] = BigRational::one();
        for &(r, c) in ech.pivots.iter().rev() {
            if c > free {
                continue;
            }
            let mut acc = BigRational::zero();
            for j in c + 1..ncols {
                if !ech.rows[r][j].is_zero() && !x[j].is_zero() {
                    acc += BigRational::from_integer(ech.rows[r][j].clone()) * &x[j];
                }
            }
            x[c] = -acc / BigRational::from_integer(ech.rows[r][c].clone());
        }
        out.push(clear_denominators(&x));
    }
    out
}

/// Scales a rational vector to a primitive integer vector.
fn clear_denominators(x: &[BigRational]) -> Vec<ExactScalar> {
    let mut l = BigInt::one();
    for e in x {
        l = l.lcm(e.denom());
    }
    let ints: Vec<BigInt> =
        x.iter().map(|e| (e * BigRational::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for v in &ints {
        g = g.gcd(v);
    }
    if g.is_zero() {
        g = BigInt::one();
    }
    ints.into_iter().map(|v| ExactScalar::from_big(v / &g)).collect()
}

// ---------------------------------------------------------------------------
// prime-field elimination

struct ModEchelon {
    rows: Vec<Vec<u64>>,
    pivots: Vec<(usize, usize)>,
    sign: i8,
    p: u64,
}

fn mod_rows(m: &DenseMatrix, p: u64) -> Vec<Vec<u64>> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|e| match e {
                    ExactScalar::Mod { value, modulus } => {
                        assert!(*modulus == p);
                        *value
                    }
                    ExactScalar::Rat(_) => unreachable!("kind checked"),
                })
                .collect()
        })
        .collect()
}

fn mod_echelon(mut rows: Vec<Vec<u64>>, p: u64) -> ModEchelon {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut sign = 1i8;
    let mut r = 0;
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let inv = |a: u64| {
        let mut acc = 1u64;
        let mut base = a;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(q) = (r..nrows).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        if q != r {
            rows.swap(q, r);
            sign = -sign;
        }
        let pin = inv(rows[r][c]);
        for i in r + 1..nrows {
            if rows[i][c] == 0 {
                continue;
            }
            let f = mul(rows[i][c], pin);
            for j in c..ncols {
                let s = mul(f, rows[r][j]);
                rows[i][j] = (rows[i][j] + p - s) % p;
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    ModEchelon { rows, pivots, sign, p }
}

fn mod_kernel(ech: &ModEchelon, ncols: usize) -> Vec<Vec<ExactScalar>> {
    let p = ech.p;
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let inv = |a: u64| {
        let mut acc = 1u64;
        let mut base = a;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    let pivot_cols: Vec<usize> = ech.pivots.iter().map(|&(_, c)| c).collect();
    let mut out = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut x = alloc::vec![0u64; ncols];
        x[free] = 1;
        for &(r, c) in ech.pivots.iter().rev() {
            if c > free {
                continue;
            }
            let mut acc = 0u64;
            for j in c + 1..ncols {
                acc = (acc + mul(ech.rows[r][j], x[j]) as u64) % p;
            }
            x[c] = mul(p - acc, inv(ech.rows[r][c])) % p;
        }
        out.push(x.into_iter().map(|v| ExactScalar::mod_p(v, p)).collect());
    }
    out
}

// ---------------------------------------------------------------------------
// public operations

/// Exact rank over the scalar's field.
pub fn rank(m: &DenseMatrix) -> usize {
    match scalar_kind(m) {
        Kind::Rational => int_echelon_of(m).0.pivots.len(),
        Kind::Mod(p) => mod_echelon(mod_rows(m, p), p).pivots.len(),
    }
}

/// Exact determinant; errors on non-square input. The determinant of the
/// empty 0 x 0 matrix is 1.
pub fn det(m: &DenseMatrix) -> Result<ExactScalar> {
    if !m.is_square() {
        return Err(Error::Dimension(alloc::format!(
            "determinant of non-square {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(ExactScalar::one());
    }
    match scalar_kind(m) {
        Kind::Rational => {
            let (ech, factors) = int_echelon_of(m);
            if ech.pivots.len() < n {
                return Ok(ExactScalar::zero());
            }
            // Bareiss leaves det(scaled matrix) as the last pivot (up to sign)
            let (r, c) = ech.pivots[n - 1];
            let mut d = BigRational::from_integer(ech.rows[r][c].clone());
            if ech.sign < 0 {
                d = -d;
            }
            for f in factors {
                d /= BigRational::from_integer(f);
            }
            Ok(ExactScalar::Rat(d))
        }
        Kind::Mod(p) => {
            let ech = mod_echelon(mod_rows(m, p), p);
            if ech.pivots.len() < n {
                return Ok(ExactScalar::mod_p(0, p));
            }
            let mul = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
            let mut d = 1u64;
            for &(r, c) in &ech.pivots {
                d = mul(d, ech.rows[r][c]);
            }
            if ech.sign < 0 {
                d = (p - d) % p;
            }
            Ok(ExactScalar::mod_p(d, p))
        }
    }
}

/// The minor `[a | b]`: determinant of the selected submatrix.
pub fn minor(m: &DenseMatrix, a: &Combination, b: &Combination) -> Result<ExactScalar> {
    if a.len() != b.len() {
        return Err(Error::Dimension(alloc::format!(
            "minor with {} rows and {} columns",
            a.len(),
            b.len()
        )));
    }
    det(&m.submatrix(a, b)?)
}

/// Kernel basis of `m` (right kernel of the row-vector action, i.e. vectors
/// `x` with `m x = 0` in the column sense).
pub fn kernel_basis(m: &DenseMatrix) -> Vec<Vec<ExactScalar>> {
    match scalar_kind(m) {
        Kind::Rational => {
            let (ech, _) = int_echelon_of(m);
            kernel_from_echelon(&ech, m.cols())
        }
        Kind::Mod(p) => {
            let ech = mod_echelon(mod_rows(m, p), p);
            mod_kernel(&ech, m.cols())
        }
    }
}

/// Solves `A x = b` exactly, returning a particular solution plus a kernel
/// basis, or reporting inconsistency.
pub fn solve_linear(a: &DenseMatrix, b: &[ExactScalar]) -> Result<LinearSolution> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(alloc::format!(
            "rhs length {} vs {} rows",
            b.len(),
            a.rows()
        )));
    }
    let n = a.cols();
    // augmented elimination; a pivot in the last column means inconsistency
    let aug = DenseMatrix::from_fn(a.rows(), n + 1, |i, j| {
        if j < n {
            a.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    match scalar_kind(&aug) {
        Kind::Rational => {
            let (ech, _) = int_echelon_of(&aug);
            if ech.pivots.iter().any(|&(_, c)| c == n) {
                return Ok(LinearSolution::Inconsistent);
            }
            // particular solution: treat b-column as the inhomogeneity,
            // free variables set to zero
            let mut x = alloc::vec![BigRational::zero(); n];
            for &(r, c) in ech.pivots.iter().rev() {
                let mut acc = BigRational::from_integer(ech.rows[r][n].clone());
                for j in c + 1..n {
                    if !ech.rows[r][j].is_zero() && !x[j].is_zero() {
                        acc -= BigRational::from_integer(ech.rows[r][j].clone()) * &x[j];
                    }
                }
                x[c] = acc / BigRational::from_integer(ech.rows[r][c].clone());
            }
            let particular = x.into_iter().map(ExactScalar::Rat).collect();
            let kernel = {
                let (ech_a, _) = int_echelon_of(a);
                kernel_from_echelon(&ech_a, n)
            };
            Ok(LinearSolution::Solution { particular, kernel })
        }
        Kind::Mod(p) => {
            let ech = mod_echelon(mod_rows(&aug, p), p);
            if ech.pivots.iter().any(|&(_, c)| c == n) {
                return Ok(LinearSolution::Inconsistent);
            }
            let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
            let inv = |x: u64| {
                let mut acc = 1u64;
                let mut base = x;
                let mut e = p - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = mul(acc, base);
                    }
                    base = mul(base, base);
                    e >>= 1;
                }
                acc
            };
            let mut x = alloc::vec![0u64; n];
            for &(r, c) in ech.pivots.iter().rev() {
                let mut acc = ech.rows[r][n];
                for j in c + 1..n {
                    acc = (acc + p - mul(ech.rows[r][j], x[j]) % p) % p;
                }
                x[c] = mul(acc, inv(ech.rows[r][c]));
            }
            let particular = x.into_iter().map(|v| ExactScalar::mod_p(v, p)).collect();
            let ech_a = mod_echelon(mod_rows(a, p), p);
            let kernel = mod_kernel(&ech_a, n);
            Ok(LinearSolution::Solution { particular, kernel })
        }
    }
}

/// Inverse of a square rational or prime-field matrix, `None` if singular.
pub fn invert(m: &DenseMatrix) -> Option<DenseMatrix> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<ExactScalar> = (0..n)
            .map(|i| if i == j { ExactScalar::one_like_ctx(m) } else { ExactScalar::zero_like_ctx(m) })
            .collect();
        match solve_linear(m, &e).ok()? {
            LinearSolution::Solution { particular, kernel } => {
                if !kernel.is_empty() {
                    return None;
                }
                cols.push(particular);
            }
            LinearSolution::Inconsistent => return None,
        }
    }
    Some(DenseMatrix::from_fn(n, n, |i, j| cols[j][i].clone()))
}

impl ExactScalar {
    fn zero_like_ctx(m: &DenseMatrix) -> ExactScalar {
        m.entries().first().map_or_else(ExactScalar::zero, ExactScalar::zero_like)
    }

    fn one_like_ctx(m: &DenseMatrix) -> ExactScalar {
        m.entries().first().map_or_else(ExactScalar::one, ExactScalar::one_like)
    }
}

// ---------------------------------------------------------------------------
// seeded sampling

/// Deterministic RNG for all randomized operations.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sample_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| ExactScalar::from_int(rng.gen_range(-9i64..=9)))
}

/// A random `m x n` integer matrix of exactly the target rank, built as a
/// product of `m x r` and `r x n` factors with entries in `[-9, 9]` and
/// resampled until the rank is verified.
pub fn random_matrix(m: usize, n: usize, target_rank: usize, seed: u64) -> Result<DenseMatrix> {
    if target_rank > m.min(n) {
        return Err(Error::Param(alloc::format!(
            "rank {target_rank} infeasible for {m}x{n}"
        )));
    }
    if target_rank == 0 {
        return Ok(DenseMatrix::zero(m, n));
    }
    let mut rng = rng_from_seed(seed);
    loop {
        let left = sample_int_matrix(&mut rng, m, target_rank);
        let right = sample_int_matrix(&mut rng, target_rank, n);
        let prod = left.matmul(&right)?;
        if rank(&prod) == target_rank {
            return Ok(prod);
        }
    }
}

/// Random integer matrix of full rank `min(rows, cols)` from an existing RNG.
pub fn random_full_rank(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    loop {
        let m = sample_int_matrix(rng, rows, cols);
        if rank(&m) == rows.min(cols) {
            return m;
        }
    }
}

/// Random invertible integer matrix from an existing RNG.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
    random_full_rank(rng, n, n)
}

/// Uniform random matrix over `F_p`.
pub fn random_mod_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, p: u64) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| ExactScalar::mod_p(rng.gen_range(0..p), p))
}

/// Uniform random 1-based indices in `[1, bound]`, with repetition.
pub fn random_indices(rng: &mut ChaCha8Rng, bound: usize, len: usize) -> Vec<usize> {
    (0..len).map(|_| rng.gen_range(1..=bound)).collect()
}
