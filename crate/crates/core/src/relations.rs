//! Generation and exact verification of polynomial relations among minors:
//! the Cauchy-Binet expansion, Pluecker relations, their pushforward along a
//! coefficient matrix, the two-parameter family specializing to the 12-term
//! relation, index appending, the degree-3 catalog on a generic 4 x 4
//! matrix, anti-straightening coefficients and bounded-degree subalgebra
//! membership.
//!
//! A relation is a formal rational combination of products of minor symbols.
//! Exact verification expands everything into the sparse polynomial ring of
//! a generic matrix; probabilistic verification evaluates at uniform random
//! prime-field matrices, which by the degree bound misses a nonzero
//! polynomial with probability at most degree/p per trial.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::comb::{combinations, Combination};
use crate::error::{Error, Result};
use crate::linalg::{self, random_mod_matrix, rng_from_seed, LinearSolution};
use crate::matrix::DenseMatrix;
use crate::poly::{minor_poly, Monomial, PolyRing, SparsePoly};
use crate::scalar::{ExactScalar, DEFAULT_MODULUS};

/// A minor symbol `[rows | cols]` with equal-length strictly increasing
/// index tuples. Bounds are normalized to the largest index so equality is
/// purely index-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct MinorSymbol {
    rows: Combination,
    cols: Combination,
}

impl MinorSymbol {
    pub fn new(rows: Combination, cols: Combination) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::Dimension(alloc::format!(
                "minor symbol with {} rows, {} columns",
                rows.len(),
                cols.len()
            )));
        }
        let rb = rows.indices().last().copied().unwrap_or(0).max(1);
        let cb = cols.indices().last().copied().unwrap_or(0).max(1);
        Ok(MinorSymbol {
            rows: rows.with_bound(rb).expect("tight bound"),
            cols: cols.with_bound(cb).expect("tight bound"),
        })
    }

    pub fn from_indices(rows: &[usize], cols: &[usize]) -> Result<Self> {
        let rb = rows.iter().copied().max().unwrap_or(1);
        let cb = cols.iter().copied().max().unwrap_or(1);
        MinorSymbol::new(Combination::new(rows.to_vec(), rb)?, Combination::new(cols.to_vec(), cb)?)
    }

    /// The principal minor `[1..i | 1..i]`.
    pub fn leading(i: usize) -> Self {
        let ix: Vec<usize> = (1..=i).collect();
        MinorSymbol::from_indices(&ix, &ix).expect("valid")
    }

    pub fn rows(&self) -> &Combination {
        &self.rows
    }

    pub fn cols(&self) -> &Combination {
        &self.cols
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn transposed(&self) -> Self {
        MinorSymbol { rows: self.cols.clone(), cols: self.rows.clone() }
    }

    pub fn poly(&self, ring: &PolyRing) -> Result<SparsePoly> {
        minor_poly(ring, &self.rows, &self.cols)
    }

    pub fn eval(&self, at: &DenseMatrix) -> Result<ExactScalar> {
        linalg::minor(at, &self.rows, &self.cols)
    }
}

impl fmt::Display for MinorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_ix = |f: &mut fmt::Formatter<'_>, ix: &[usize]| -> fmt::Result {
            for (k, i) in ix.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
            }
            Ok(())
        };
        write!(f, "[")?;
        fmt_ix(f, self.rows.indices())?;
        write!(f, "|")?;
        fmt_ix(f, self.cols.indices())?;
        write!(f, "]")
    }
}

/// A formal rational-linear combination of products of minor symbols.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RelationExpr {
    terms: Vec<(BigRational, Vec<MinorSymbol>)>,
}

impl RelationExpr {
    pub fn new() -> Self {
        RelationExpr { terms: Vec::new() }
    }

    pub fn from_terms(terms: Vec<(BigRational, Vec<MinorSymbol>)>) -> Self {
        let mut rel = RelationExpr { terms };
        rel.canonicalize();
        rel
    }

    pub fn terms(&self) -> &[(BigRational, Vec<MinorSymbol>)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, coeff: BigRational, factors: Vec<MinorSymbol>) {
        if !coeff.is_zero() {
            self.terms.push((coeff, factors));
        }
    }

    /// Sorts factors within terms, merges equal products, drops zeros.
    pub fn canonicalize(&mut self) {
        for (_, factors) in &mut self.terms {
            factors.sort();
        }
        let mut merged: BTreeMap<Vec<MinorSymbol>, BigRational> = BTreeMap::new();
        for (c, factors) in self.terms.drain(..) {
            let e = merged.entry(factors).or_insert_with(BigRational::zero);
            *e += c;
        }
        self.terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(f, c)| (c, f))
            .collect();
        self.terms.sort_by(|a, b| a.1.cmp(&b.1));
    }

    pub fn canonical(mut self) -> Self {
        self.canonicalize();
        self
    }

    pub fn negated(&self) -> Self {
        RelationExpr {
            terms: self.terms.iter().map(|(c, f)| (-c.clone(), f.clone())).collect(),
        }
    }

    pub fn sum(&self, other: &RelationExpr) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        RelationExpr::from_terms(terms)
    }

    /// Difference `self - other`.
    pub fn minus(&self, other: &RelationExpr) -> Self {
        self.sum(&other.negated())
    }

    /// Formal product of two relation expressions.
    pub fn product(&self, other: &RelationExpr) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ca, fa) in &self.terms {
            for (cb, fb) in &other.terms {
                let mut f = fa.clone();
                f.extend(fb.iter().cloned());
                terms.push((ca * cb, f));
            }
        }
        RelationExpr::from_terms(terms)
    }

    /// Formal power; the zeroth power is the empty product (constant 1).
    pub fn power(&self, e: usize) -> Self {
        let mut acc = RelationExpr::from_terms(alloc::vec![(BigRational::one(), Vec::new())]);
        for _ in 0..e {
            acc = acc.product(self);
        }
        acc
    }

    /// Multiplies every term by an extra symbol.
    pub fn mul_symbol(&self, sym: &MinorSymbol) -> Self {
        RelationExpr {
            terms: self
                .terms
                .iter()
                .map(|(c, f)| {
                    let mut f = f.clone();
                    f.push(sym.clone());
                    (c.clone(), f)
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RelationExpr {
            terms: self.terms.iter().map(|(k, f)| (k * c, f.clone())).collect(),
        }
    }

    /// Smallest generic matrix carrying every symbol.
    pub fn ring_hint(&self) -> PolyRing {
        let mut m = 1;
        let mut n = 1;
        for (_, factors) in &self.terms {
            for s in factors {
                m = m.max(s.rows.indices().last().copied().unwrap_or(0));
                n = n.max(s.cols.indices().last().copied().unwrap_or(0));
            }
        }
        PolyRing::new(m, n)
    }

    /// Exact expansion into the polynomial ring of a generic matrix.
    pub fn expand(&self, ring: &PolyRing) -> Result<SparsePoly> {
        let mut acc = SparsePoly::zero(ring.nvars());
        for (c, factors) in &self.terms {
            let mut prod = SparsePoly::constant(ring.nvars(), BigRational::one());
            for s in factors {
                prod = prod.mul(&s.poly(ring)?);
            }
            acc.add_assign_scaled(&prod, c);
        }
        Ok(acc)
    }

    /// Numeric evaluation at a matrix (rational or prime-field entries).
    pub fn evaluate(&self, at: &DenseMatrix) -> Result<ExactScalar> {
        let template = at.entries().first().cloned().unwrap_or_else(ExactScalar::zero);
        let mut acc = template.zero_like();
        for (c, factors) in &self.terms {
            let coeff = match &template {
                ExactScalar::Rat(_) => ExactScalar::Rat(c.clone()),
                ExactScalar::Mod { modulus, .. } => ExactScalar::Rat(c.clone())
                    .to_mod(*modulus)
                    .ok_or_else(|| Error::Param(alloc::format!("coefficient hits the modulus")))?,
            };
            let mut term = coeff;
            for s in factors {
                term = &term * &s.eval(at)?;
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Multiset of column indices per term; the relation is homogeneous when
    /// all terms share it.
    pub fn column_degree(&self) -> Option<Vec<usize>> {
        let degree_of = |factors: &[MinorSymbol]| {
            let mut d: Vec<usize> =
                factors.iter().flat_map(|s| s.cols.indices().iter().copied()).collect();
            d.sort_unstable();
            d
        };
        let mut it = self.terms.iter();
        let first = degree_of(&it.next()?.1);
        for (_, f) in it {
            if degree_of(f) != first {
                return None;
            }
        }
        Some(first)
    }
}

impl fmt::Display for RelationExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, factors)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for s in factors {
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

/// Sorts indices counting transpositions; `None` when a duplicate appears.
fn sorted_with_sign(mut v: Vec<usize>) -> Option<(Vec<usize>, i8)> {
    let mut sign = 1i8;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

// ---------------------------------------------------------------------------
// relation families

/// Exact check of the Cauchy-Binet expansion
/// `[a|b]_{AB} = sum_c [a|c]_A [c|b]_B` over increasing `c`.
pub fn binet_check(
    a_mat: &DenseMatrix,
    b_mat: &DenseMatrix,
    a: &Combination,
    b: &Combination,
) -> Result<bool> {
    if a_mat.cols() != b_mat.rows() {
        return Err(Error::Dimension(alloc::format!("factors are not composable")));
    }
    let t = a.len();
    let product = a_mat.matmul(b_mat)?;
    let lhs = linalg::minor(&product, a, b)?;
    let mut rhs = lhs.zero_like();
    for c in combinations(a_mat.cols(), t)? {
        let left = linalg::minor(a_mat, a, &c)?;
        let right = linalg::minor(b_mat, &c, b)?;
        rhs = &rhs + &(&left * &right);
    }
    Ok(lhs == rhs)
}

/// The Pluecker relation attached to column tuples `a` (size t-1) and `b`
/// (size t+1) on the maximal minors of a generic `t x n` matrix:
/// `sum_j (-1)^(j+1) [a, b_j] [b \ b_j] = 0`. Rows are `[1..t]` on every
/// factor; terms whose first column tuple repeats an index are zero minors
/// and are dropped.
pub fn plucker_relation(a: &Combination, b: &Combination) -> Result<RelationExpr> {
    let t = a.len() + 1;
    if b.len() != t + 1 {
        return Err(Error::Dimension(alloc::format!(
            "need |b| = |a| + 2, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let rows: Vec<usize> = (1..=t).collect();
    let mut rel = RelationExpr::new();
    for (j, &bj) in b.indices().iter().enumerate() {
        let mut first_cols = a.indices().to_vec();
        first_cols.push(bj);
        let Some((sorted_cols, sign)) = sorted_with_sign(first_cols) else {
            continue;
        };
        let second_cols: Vec<usize> =
            b.indices().iter().copied().filter(|&x| x != bj).collect();
        let mut coeff = BigRational::from_integer(BigInt::from(if j % 2 == 0 { 1 } else { -1 }));
        if sign < 0 {
            coeff = -coeff;
        }
        rel.push(
            coeff,
            alloc::vec![
                MinorSymbol::from_indices(&rows, &sorted_cols)?,
                MinorSymbol::from_indices(&rows, &second_cols)?,
            ],
        );
    }
    Ok(rel.canonical())
}

/// Pushes a homogeneous degree-2 relation on maximal minors through a
/// numeric `t x m` coefficient matrix: for a size-2t multiset `u` over the
/// rows, the output is
/// `sum_c [c]_A [c']_A sum_i lambda_i [c | alpha_i] [c' | beta_i]`
/// over increasing `c` contained in `u` with `c' = u \ c`.
pub fn pushforward_relation(
    rel: &RelationExpr,
    a_mat: &DenseMatrix,
    u: &[usize],
) -> Result<RelationExpr> {
    let t = a_mat.rows();
    if u.len() != 2 * t {
        return Err(Error::Dimension(alloc::format!(
            "multiset size {} but 2t = {}",
            u.len(),
            2 * t
        )));
    }
    if u.iter().any(|&x| x < 1 || x > a_mat.cols()) {
        return Err(Error::Param(alloc::format!("multiset entry outside [1, {}]", a_mat.cols())));
    }
    // the empty relation is vacuously homogeneous and pushes to itself
    if !rel.is_empty() && rel.column_degree().is_none() {
        return Err(Error::Param(alloc::format!("relation is not homogeneous")));
    }
    // extract (lambda_i, alpha_i, beta_i); factor rows must all be [1..t]
    let expected_rows: Vec<usize> = (1..=t).collect();
    let mut pairs = Vec::new();
    for (c, factors) in rel.terms() {
        if factors.len() != 2 {
            return Err(Error::Param(alloc::format!("relation terms must be quadratic")));
        }
        for f in factors {
            if f.rows().indices() != expected_rows.as_slice() {
                return Err(Error::Param(alloc::format!(
                    "relation factors must be maximal minors on rows 1..{t}"
                )));
            }
        }
        pairs.push((c.clone(), factors[0].cols().clone(), factors[1].cols().clone()));
    }
    // multiplicity map of u
    let mut mult = BTreeMap::new();
    for &x in u {
        *mult.entry(x).or_insert(0usize) += 1;
    }
    let values: Vec<usize> = mult.keys().copied().collect();
    let mut out = RelationExpr::new();
    // enumerate increasing t-subsets c of the support with c <= multiplicity,
    // requiring the complement multiset to be a set as well
    let mut chosen = Vec::new();
    enumerate_subsets(&values, t, 0, &mut chosen, &mut |c: &[usize]| -> Result<()> {
        let mut rest = mult.clone();
        for &x in c {
            *rest.get_mut(&x).expect("chosen from support") -= 1;
        }
        if rest.values().any(|&v| v > 1) {
            return Ok(()); // complement has a repeated row: zero minor
        }
        let c_prime: Vec<usize> =
            rest.iter().filter(|&(_, &v)| v == 1).map(|(&x, _)| x).collect();
        let c_comb = Combination::new(c.to_vec(), a_mat.cols())?;
        let cp_comb = Combination::new(c_prime.clone(), a_mat.cols())?;
        let full = Combination::first(t, t)?;
        let ca = linalg::minor(a_mat, &full, &c_comb)?;
        let cpa = linalg::minor(a_mat, &full, &cp_comb)?;
        if ca.is_zero() || cpa.is_zero() {
            return Ok(());
        }
        let weight = ca.expect_rational() * cpa.expect_rational();
        for (lambda, alpha, beta) in &pairs {
            out.push(
                lambda * &weight,
                alloc::vec![
                    MinorSymbol::from_indices(c, alpha.indices())?,
                    MinorSymbol::from_indices(&c_prime, beta.indices())?,
                ],
            );
        }
        Ok(())
    })?;
    Ok(out.canonical())
}

fn enumerate_subsets(
    values: &[usize],
    want: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if chosen.len() == want {
        return visit(chosen);
    }
    if values.len() - from < want - chosen.len() {
        return Ok(());
    }
    for i in from..values.len() {
        chosen.push(values[i]);
        enumerate_subsets(values, want, i + 1, chosen, visit)?;
        chosen.pop();
    }
    Ok(())
}

/// The two-parameter relation family on `t`-minors, `0 <= s <= t`: with
/// `w = {s+1, ..., 2t-s}` and `B` the transversals of the pairs
/// `{i, i + t - s}`, `i = s+1..t`,
/// `sum_{b in B} sign(b) sum_{j=t}^{2t} (-1)^(j+t)
///   [1..s, b | 1..t-1, j] [1..s, b' | t..^j..2t] = 0`.
/// The per-transversal sign is +1 iff `t - s` is odd or `#{i in b : i <= t}`
/// is even; the block sign `(-1)^(j+t)` is the orientation that agrees
/// term-by-term with [`pushforward_relation`] applied to the block
/// coefficient matrix `(I_s 0 0 / 0 I_{t-s} I_{t-s})`.
pub fn genplu2_relation(s: usize, t: usize) -> Result<RelationExpr> {
    if s > t || t == 0 {
        return Err(Error::Param(alloc::format!("need 0 <= s <= t with t >= 1")));
    }
    let span = t - s;
    // transversals of the pairs {i, i + span} for i = s+1..=t
    let mut transversals: Vec<Vec<usize>> = alloc::vec![Vec::new()];
    for i in s + 1..=t {
        let mut next = Vec::new();
        for b in &transversals {
            for pick in [i, i + span] {
                let mut nb = b.clone();
                nb.push(pick);
                next.push(nb);
            }
        }
        transversals = next;
    }
    let prefix: Vec<usize> = (1..=s).collect();
    let first_cols_base: Vec<usize> = (1..=t - 1).collect();
    let mut rel = RelationExpr::new();
    for b in &transversals {
        let low_count = b.iter().filter(|&&x| x <= t).count();
        let sign_b = if span % 2 == 1 || low_count % 2 == 0 { 1i64 } else { -1 };
        let b_set: Vec<usize> = {
            let mut v = b.clone();
            v.sort_unstable();
            v
        };
        let b_prime: Vec<usize> =
            (s + 1..=2 * t - s).filter(|x| !b_set.contains(x)).collect();
        let mut rows1 = prefix.clone();
        rows1.extend(&b_set);
        let mut rows2 = prefix.clone();
        rows2.extend(&b_prime);
        for j in t..=2 * t {
            let block_sign = if (j + t) % 2 == 0 { 1i64 } else { -1 };
            let mut cols1 = first_cols_base.clone();
            cols1.push(j);
            let cols2: Vec<usize> = (t..=2 * t).filter(|&x| x != j).collect();
            rel.push(
                BigRational::from_integer(BigInt::from(sign_b * block_sign)),
                alloc::vec![
                    MinorSymbol::from_indices(&rows1, &cols1)?,
                    MinorSymbol::from_indices(&rows2, &cols2)?,
                ],
            );
        }
    }
    Ok(rel.canonical())
}

/// The block coefficient matrix and row multiset used to derive
/// [`genplu2_relation`] from the pushforward; exposed for the
/// cross-validation of the two constructions.
pub fn genplu2_pushforward_data(s: usize, t: usize) -> Result<(DenseMatrix, Vec<usize>)> {
    if s > t || t == 0 {
        return Err(Error::Param(alloc::format!("need 0 <= s <= t with t >= 1")));
    }
    let span = t - s;
    let cols = 2 * t - s;
    let mut a = DenseMatrix::zero(t, cols);
    for i in 0..s {
        a.set(i, i, ExactScalar::one());
    }
    for i in 0..span {
        a.set(s + i, s + i, ExactScalar::one());
        a.set(s + i, s + span + i, ExactScalar::one());
    }
    let mut u: Vec<usize> = Vec::with_capacity(2 * t);
    for i in 1..=s {
        u.push(i);
        u.push(i);
    }
    u.extend(s + 1..=2 * t - s);
    Ok((a, u))
}

/// The 12-term relation on 2-minors of a generic 4 x 4 matrix.
pub fn twelve_term_relation() -> RelationExpr {
    genplu2_relation(0, 2).expect("valid parameters")
}

/// Appends a new smallest row and column index to every symbol: a relation
/// on `t`-minors becomes one on `(t+1)`-minors of the matrix with one extra
/// leading row and column.
pub fn append_index(rel: &RelationExpr) -> RelationExpr {
    let terms = rel
        .terms()
        .iter()
        .map(|(c, factors)| {
            let factors = factors
                .iter()
                .map(|s| MinorSymbol {
                    rows: s.rows.shifted_up(1).with_prefix_one(),
                    cols: s.cols.shifted_up(1).with_prefix_one(),
                })
                .collect();
            (c.clone(), factors)
        })
        .collect();
    RelationExpr::from_terms(terms)
}

impl Combination {
    /// `{1} ∪ self`, requiring all indices to exceed 1.
    fn with_prefix_one(&self) -> Combination {
        let mut ix = alloc::vec![1usize];
        ix.extend(self.indices());
        Combination::new(ix, self.bound().max(1)).expect("indices exceed 1")
    }
}

/// Determinant of a `k x k` matrix of 2-minor symbols as a relation
/// expression: the bracket notation for minors of the second compound.
pub fn compound_bracket(rows: &[MinorSymbol], cols: &[MinorSymbol]) -> Result<RelationExpr> {
    // rows/cols here are index SETS of the compound: encoded as symbols with
    // equal row and column tuples is overkill, so take plain combinations
    let _ = (rows, cols);
    Err(Error::Internal(alloc::format!("use compound_bracket_sets")))
}

/// Determinant of the submatrix of the second compound with the given row
/// and column index sets, expanded into products of 2-minors.
pub fn compound_bracket_sets(
    row_sets: &[Vec<usize>],
    col_sets: &[Vec<usize>],
) -> Result<RelationExpr> {
    if row_sets.len() != col_sets.len() {
        return Err(Error::Dimension(alloc::format!("bracket must be square")));
    }
    let k = row_sets.len();
    let mut rel = RelationExpr::new();
    let mut perm: Vec<usize> = (0..k).collect();
    permute_with_sign(&mut perm, 0, &mut |p, sign| {
        let mut factors = Vec::with_capacity(k);
        for (i, &pi) in p.iter().enumerate() {
            factors.push(MinorSymbol::from_indices(&row_sets[i], &col_sets[pi])?);
        }
        rel.push(BigRational::from_integer(BigInt::from(sign as i64)), factors);
        Ok(())
    })?;
    Ok(rel.canonical())
}

fn permute_with_sign(
    perm: &mut Vec<usize>,
    k: usize,
    visit: &mut impl FnMut(&[usize], i8) -> Result<()>,
) -> Result<()> {
    fn parity(p: &[usize]) -> i8 {
        let mut inv = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }
    if k == perm.len() {
        return visit(perm, parity(perm));
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        let mut copy = perm.clone();
        permute_with_sign(&mut copy, k + 1, visit)?;
        perm.swap(k, i);
    }
    Ok(())
}

/// The degree-3 relations among 2-minors of a generic 4 x 4 matrix, each as
/// an expression that expands to zero.
pub fn degree3_catalog() -> Result<Vec<(&'static str, RelationExpr)>> {
    let b = |sets: &[[usize; 2]]| -> Vec<Vec<usize>> {
        sets.iter().map(|s| s.to_vec()).collect()
    };
    let sym = |r: [usize; 2], c: [usize; 2]| MinorSymbol::from_indices(&r, &c);
    let mut out = Vec::new();

    // (a): [ {12},{13},{24} | same ] = [ {12},{14},{23} | same ]
    let lhs = compound_bracket_sets(&b(&[[1, 2], [1, 3], [2, 4]]), &b(&[[1, 2], [1, 3], [2, 4]]))?;
    let rhs = compound_bracket_sets(&b(&[[1, 2], [1, 4], [2, 3]]), &b(&[[1, 2], [1, 4], [2, 3]]))?;
    out.push(("6a", lhs.minus(&rhs)));

    // (b): [ {12},{13},{23} | {12},{13},{24} ] = [ {12},{13},{23} | {12},{14},{23} ]
    let lhs = compound_bracket_sets(&b(&[[1, 2], [1, 3], [2, 3]]), &b(&[[1, 2], [1, 3], [2, 4]]))?;
    let rhs = compound_bracket_sets(&b(&[[1, 2], [1, 3], [2, 3]]), &b(&[[1, 2], [1, 4], [2, 3]]))?;
    out.push(("6b", lhs.minus(&rhs)));

    // (c): [ {12},{13},{14} | {12},{13},{24} ] = -[ {12},{13},{14} | {12},{14},{23} ]
    let lhs = compound_bracket_sets(&b(&[[1, 2], [1, 3], [1, 4]]), &b(&[[1, 2], [1, 3], [2, 4]]))?;
    let rhs = compound_bracket_sets(&b(&[[1, 2], [1, 3], [1, 4]]), &b(&[[1, 2], [1, 4], [2, 3]]))?;
    out.push(("6c", lhs.sum(&rhs)));

    // (d): [ {12},{13},{14} | {12},{13},{23} ] = 0
    let only =
        compound_bracket_sets(&b(&[[1, 2], [1, 3], [1, 4]]), &b(&[[1, 2], [1, 3], [2, 3]]))?;
    out.push(("6d", only));

    // (e): [13|24] [ {12},{13} | {12},{13} ] = [13|23] [ {12},{13} | {12},{14} ] + [13|12] G
    // with G = -[12|23][13|14] + [12|24][13|13] - [12|34][13|12]
    let lhs = compound_bracket_sets(&b(&[[1, 2], [1, 3]]), &b(&[[1, 2], [1, 3]]))?
        .mul_symbol(&sym([1, 3], [2, 4])?);
    let rhs1 = compound_bracket_sets(&b(&[[1, 2], [1, 3]]), &b(&[[1, 2], [1, 4]]))?
        .mul_symbol(&sym([1, 3], [2, 3])?);
    let mut g = RelationExpr::new();
    g.push(
        BigRational::from_integer(BigInt::from(-1)),
        alloc::vec![sym([1, 2], [2, 3])?, sym([1, 3], [1, 4])?],
    );
    g.push(
        BigRational::one(),
        alloc::vec![sym([1, 2], [2, 4])?, sym([1, 3], [1, 3])?],
    );
    g.push(
        BigRational::from_integer(BigInt::from(-1)),
        alloc::vec![sym([1, 2], [3, 4])?, sym([1, 3], [1, 2])?],
    );
    let rhs2 = g.mul_symbol(&sym([1, 3], [1, 2])?);
    out.push(("6e", lhs.minus(&rhs1).minus(&rhs2)));

    Ok(out)
}

// ---------------------------------------------------------------------------
// zero testing

/// Verdict of a zero test.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ZeroVerdict {
    /// Exact: the full expansion is the zero polynomial.
    Zero,
    /// Probabilistic: all prime-field evaluations vanished.
    ProbablyZero { trials: usize },
    /// A witness evaluation is nonzero (conclusive in both modes).
    NonZero { witness: DenseMatrix, value: ExactScalar },
}

impl ZeroVerdict {
    pub fn is_zero(&self) -> bool {
        !matches!(self, ZeroVerdict::NonZero { .. })
    }
}

/// Zero-testing mode.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ZeroMode {
    Exact,
    /// Evaluations at uniform random matrices over `F_modulus`.
    Probabilistic { seed: u64, trials: usize, modulus: u64 },
}

pub fn is_zero(rel: &RelationExpr, mode: ZeroMode) -> Result<ZeroVerdict> {
    let ring = rel.ring_hint();
    match mode {
        ZeroMode::Exact => {
            let p = rel.expand(&ring)?;
            if p.is_zero() {
                Ok(ZeroVerdict::Zero)
            } else {
                // exhibit a witness so downstream reports are actionable
                let mut rng = rng_from_seed(0);
                for _ in 0..64 {
                    let at = random_mod_matrix(&mut rng, ring.m, ring.n, DEFAULT_MODULUS);
                    let value = rel.evaluate(&at)?;
                    if !value.is_zero() {
                        return Ok(ZeroVerdict::NonZero { witness: at, value });
                    }
                }
                // expansion is nonzero even if sampling missed it
                Ok(ZeroVerdict::NonZero {
                    witness: DenseMatrix::zero(ring.m, ring.n),
                    value: ExactScalar::zero(),
                })
            }
        }
        ZeroMode::Probabilistic { seed, trials, modulus } => {
            let mut rng = rng_from_seed(seed);
            for _ in 0..trials.max(1) {
                let at = random_mod_matrix(&mut rng, ring.m, ring.n, modulus);
                let value = rel.evaluate(&at)?;
                if !value.is_zero() {
                    return Ok(ZeroVerdict::NonZero { witness: at, value });
                }
            }
            Ok(ZeroVerdict::ProbablyZero { trials: trials.max(1) })
        }
    }
}

// ---------------------------------------------------------------------------
// anti-straightening

/// Solved anti-straightening data: rational coefficients `lambda_{kl}` with
/// `delta * eta = sum_{kl} lambda_{kl} [prefix, a_k | prefix, b_l]
///  [rest of eta]`, the residual verified identically zero by expansion.
#[derive(Clone, Debug)]
pub struct AntiStraightening {
    pub eta_rows: Combination,
    pub eta_cols: Combination,
    pub prefix: usize,
    /// `(k, l)` are 1-based positions within the eta tuples, both `> prefix`.
    pub coeffs: BTreeMap<(usize, usize), BigRational>,
}

impl AntiStraightening {
    /// The product `[prefix ∪ {a_k} | prefix ∪ {b_l}] [a \ a_k | b \ b_l]`.
    pub fn product(&self, k: usize, l: usize) -> Result<Vec<MinorSymbol>> {
        anti_straighten_product(&self.eta_rows, &self.eta_cols, self.prefix, k, l)
    }

    /// The identity `delta * eta - sum lambda_{kl} P_{kl}` as a relation.
    pub fn residual_relation(&self) -> Result<RelationExpr> {
        let u = self.prefix;
        let delta = MinorSymbol::new(
            Combination::new(self.eta_rows.indices()[..u].to_vec(), self.eta_rows.bound())?,
            Combination::new(self.eta_cols.indices()[..u].to_vec(), self.eta_cols.bound())?,
        )?;
        let eta = MinorSymbol::new(self.eta_rows.clone(), self.eta_cols.clone())?;
        let mut rel = RelationExpr::new();
        rel.push(BigRational::one(), alloc::vec![delta, eta]);
        for (&(k, l), c) in &self.coeffs {
            rel.push(-c.clone(), self.product(k, l)?);
        }
        Ok(rel.canonical())
    }
}

fn anti_straighten_product(
    eta_rows: &Combination,
    eta_cols: &Combination,
    u: usize,
    k: usize,
    l: usize,
) -> Result<Vec<MinorSymbol>> {
    let rows = eta_rows.indices();
    let cols = eta_cols.indices();
    let mut r1: Vec<usize> = rows[..u].to_vec();
    r1.push(rows[k - 1]);
    let mut c1: Vec<usize> = cols[..u].to_vec();
    c1.push(cols[l - 1]);
    let r2: Vec<usize> =
        rows.iter().enumerate().filter(|&(i, _)| i != k - 1).map(|(_, &x)| x).collect();
    let c2: Vec<usize> =
        cols.iter().enumerate().filter(|&(i, _)| i != l - 1).map(|(_, &x)| x).collect();
    Ok(alloc::vec![MinorSymbol::from_indices(&r1, &c1)?, MinorSymbol::from_indices(&r2, &c2)?])
}

/// Solves for the anti-straightening coefficients of the nested pair
/// `delta = [rows[..u] | cols[..u]]` inside `eta = [rows | cols]`, by exact
/// coefficient matching on the generic matrix. Requires `u < v - 1`. The
/// particular solution fixes free coefficients to zero under the `(k, l)`
/// order; the solve failing would falsify the straightening identity and is
/// an internal error.
pub fn anti_straighten(
    eta_rows: &Combination,
    eta_cols: &Combination,
    u: usize,
) -> Result<AntiStraightening> {
    let v = eta_rows.len();
    if eta_cols.len() != v {
        return Err(Error::Dimension(alloc::format!("eta must be square")));
    }
    if u + 1 >= v {
        return Err(Error::Param(alloc::format!("need u < v - 1, got u = {u}, v = {v}")));
    }
    let ring = PolyRing::new(
        eta_rows.indices().last().copied().unwrap_or(1),
        eta_cols.indices().last().copied().unwrap_or(1),
    );
    let delta_poly = minor_poly(
        &ring,
        &Combination::new(eta_rows.indices()[..u].to_vec(), ring.m)?,
        &Combination::new(eta_cols.indices()[..u].to_vec(), ring.n)?,
    )?;
    let eta_poly = minor_poly(&ring, eta_rows, eta_cols)?;
    let target = delta_poly.mul(&eta_poly);

    let mut keys = Vec::new();
    let mut products = Vec::new();
    for k in u + 1..=v {
        for l in u + 1..=v {
            let factors = anti_straighten_product(eta_rows, eta_cols, u, k, l)?;
            let mut prod = SparsePoly::constant(ring.nvars(), BigRational::one());
            for f in &factors {
                prod = prod.mul(&f.poly(&ring)?);
            }
            keys.push((k, l));
            products.push(prod);
        }
    }
    let solution = match solve_poly_combination(&target, &products)? {
        Some(sol) => sol,
        None => {
            return Err(Error::Internal(alloc::format!(
                "anti-straightening system has no solution for eta {eta_rows:?} x {eta_cols:?}, u = {u}"
            )))
        }
    };
    let coeffs: BTreeMap<(usize, usize), BigRational> = keys
        .into_iter()
        .zip(solution)
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let result = AntiStraightening {
        eta_rows: eta_rows.clone(),
        eta_cols: eta_cols.clone(),
        prefix: u,
        coeffs,
    };
    // expansion of the residual must vanish identically
    let residual = result.residual_relation()?.expand(&ring)?;
    if !residual.is_zero() {
        return Err(Error::Internal(alloc::format!("anti-straightening residual is nonzero")));
    }
    Ok(result)
}

/// Solves `sum_i x_i candidates[i] = target` exactly by coefficient
/// matching; returns the particular solution with free variables zero, or
/// `None` when inconsistent.
pub fn solve_poly_combination(
    target: &SparsePoly,
    candidates: &[SparsePoly],
) -> Result<Option<Vec<BigRational>>> {
    let mut monomials: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in candidates.iter().chain(core::iter::once(target)) {
        for (m, _) in p.terms() {
            let next = monomials.len();
            monomials.entry(m.clone()).or_insert(next);
        }
    }
    let nrows = monomials.len();
    let ncols = candidates.len();
    let mut mat = DenseMatrix::zero(nrows, ncols);
    for (j, p) in candidates.iter().enumerate() {
        for (m, c) in p.terms() {
            mat.set(monomials[m], j, ExactScalar::Rat(c.clone()));
        }
    }
    let mut rhs = alloc::vec![ExactScalar::zero(); nrows];
    for (m, c) in target.terms() {
        rhs[monomials[m]] = ExactScalar::Rat(c.clone());
    }
    match linalg::solve_linear(&mat, &rhs)? {
        LinearSolution::Inconsistent => Ok(None),
        LinearSolution::Solution { particular, .. } => Ok(Some(
            particular.into_iter().map(|x| x.expect_rational().clone()).collect(),
        )),
    }
}

// ---------------------------------------------------------------------------
// bounded-degree subalgebra membership

/// A representation of the target as a polynomial in the generators: each
/// term is a coefficient and a multiset of generator indices.
pub type Representation = Vec<(BigRational, Vec<usize>)>;

/// Searches for an expression of a multihomogeneous target as a polynomial
/// of degree at most `degree_bound` in multihomogeneous generators. The
/// search enumerates only generator products matching the target's
/// multidegree; a prime-field prefilter rejects inconsistent systems before
/// the exact solve. Failure is reported as `None` (bounded search certifies
/// membership only, never non-membership).
pub fn subalgebra_membership(
    target: &SparsePoly,
    generators: &[SparsePoly],
    ring: &PolyRing,
    degree_bound: usize,
    max_candidates: usize,
) -> Result<Option<Representation>> {
    if target.is_zero() {
        return Ok(Some(Vec::new()));
    }
    let Some(target_mdeg) = target.homogeneous_multidegree(ring) else {
        return Err(Error::Param(alloc::format!("target is not multihomogeneous")));
    };
    let mut gen_mdegs = Vec::with_capacity(generators.len());
    for g in generators {
        let Some(d) = g.homogeneous_multidegree(ring) else {
            return Err(Error::Param(alloc::format!("generator is not multihomogeneous")));
        };
        gen_mdegs.push(d);
    }

    // depth-first enumeration of index multisets with exact multidegree sum;
    // partial products are carried along so each candidate is expanded once
    let mut candidates: Vec<(Vec<usize>, SparsePoly)> = Vec::new();
    struct Dfs<'a> {
        generators: &'a [SparsePoly],
        gen_mdegs: &'a [(Vec<u32>, Vec<u32>)],
        degree_bound: usize,
        max_candidates: usize,
    }
    impl Dfs<'_> {
        fn run(
            &self,
            from: usize,
            remaining: (&mut Vec<u32>, &mut Vec<u32>),
            stack: &mut Vec<usize>,
            partial: &SparsePoly,
            out: &mut Vec<(Vec<usize>, SparsePoly)>,
        ) -> Result<()> {
            let (rem_rows, rem_cols) = remaining;
            if rem_rows.iter().all(|&x| x == 0) && rem_cols.iter().all(|&x| x == 0) {
                if !stack.is_empty() {
                    if out.len() >= self.max_candidates {
                        return Err(Error::Budget(alloc::format!(
                            "more than {} candidate products",
                            self.max_candidates
                        )));
                    }
                    out.push((stack.clone(), partial.clone()));
                }
                return Ok(());
            }
            if stack.len() >= self.degree_bound {
                return Ok(());
            }
            for i in from..self.generators.len() {
                let (gr, gc) = &self.gen_mdegs[i];
                if gr.iter().zip(rem_rows.iter()).any(|(a, b)| a > b)
                    || gc.iter().zip(rem_cols.iter()).any(|(a, b)| a > b)
                {
                    continue;
                }
                for (a, b) in rem_rows.iter_mut().zip(gr.iter()) {
                    *a -= b;
                }
                for (a, b) in rem_cols.iter_mut().zip(gc.iter()) {
                    *a -= b;
                }
                stack.push(i);
                let next = partial.mul(&self.generators[i]);
                self.run(i, (rem_rows, rem_cols), stack, &next, out)?;
                stack.pop();
                for (a, b) in rem_rows.iter_mut().zip(gr.iter()) {
                    *a += b;
                }
                for (a, b) in rem_cols.iter_mut().zip(gc.iter()) {
                    *a += b;
                }
            }
            Ok(())
        }
    }
    let dfs = Dfs { generators, gen_mdegs: &gen_mdegs, degree_bound, max_candidates };
    let mut rows = target_mdeg.0.clone();
    let mut cols = target_mdeg.1.clone();
    dfs.run(
        0,
        (&mut rows, &mut cols),
        &mut Vec::new(),
        &SparsePoly::constant(ring.nvars(), BigRational::one()),
        &mut candidates,
    )?;
    if candidates.is_empty() {
        return Ok(None);
    }

    // prime-field prefilter: an inconsistent reduction means no rational
    // solution exists outside the (astronomically unlikely) event that every
    // exact solution needs a denominator divisible by the modulus
    if !modular_prefilter(target, &candidates)? {
        return Ok(None);
    }

    let products: Vec<SparsePoly> = candidates.iter().map(|(_, p)| p.clone()).collect();
    let Some(solution) = solve_poly_combination(target, &products)? else {
        return Ok(None);
    };
    let rep: Representation = candidates
        .into_iter()
        .zip(solution)
        .filter(|(_, c)| !c.is_zero())
        .map(|((ix, _), c)| (c, ix))
        .collect();
    // exactness guard: re-expand the representation
    let mut check = SparsePoly::zero(ring.nvars());
    for ((c, _), prod) in rep.iter().zip(
        rep.iter()
            .map(|(_, ix)| product_of(generators, ix, ring)),
    ) {
        check.add_assign_scaled(&prod?, c);
    }
    if check != *target {
        return Err(Error::Internal(alloc::format!("membership representation failed re-expansion")));
    }
    Ok(Some(rep))
}

fn product_of(generators: &[SparsePoly], ix: &[usize], ring: &PolyRing) -> Result<SparsePoly> {
    let mut acc = SparsePoly::constant(ring.nvars(), BigRational::one());
    for &i in ix {
        acc = acc.mul(&generators[i]);
    }
    Ok(acc)
}

fn modular_prefilter(
    target: &SparsePoly,
    candidates: &[(Vec<usize>, SparsePoly)],
) -> Result<bool> {
    let p = DEFAULT_MODULUS;
    let mut monomials: BTreeMap<Monomial, usize> = BTreeMap::new();
    for (_, poly) in candidates.iter() {
        for (m, _) in poly.terms() {
            let next = monomials.len();
            monomials.entry(m.clone()).or_insert(next);
        }
    }
    for (m, _) in target.terms() {
        let next = monomials.len();
        monomials.entry(m.clone()).or_insert(next);
    }
    let reduce = |c: &BigRational| -> Result<ExactScalar> {
        ExactScalar::Rat(c.clone())
            .to_mod(p)
            .ok_or_else(|| Error::Param(alloc::format!("coefficient hits the modulus")))
    };
    let nrows = monomials.len();
    let mut mat = DenseMatrix::from_fn(nrows, candidates.len(), |_, _| ExactScalar::mod_p(0, p));
    for (j, (_, poly)) in candidates.iter().enumerate() {
        for (m, c) in poly.terms() {
            mat.set(monomials[m], j, reduce(c)?);
        }
    }
    let mut rhs = alloc::vec![ExactScalar::mod_p(0, p); nrows];
    for (m, c) in target.terms() {
        rhs[monomials[m]] = reduce(c)?;
    }
    Ok(!matches!(linalg::solve_linear(&mat, &rhs)?, LinearSolution::Inconsistent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_full_rank, random_matrix};
    use rand::Rng;

    fn comb(ix: &[usize], bound: usize) -> Combination {
        Combination::new(ix.to_vec(), bound).unwrap()
    }

    fn int(c: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(c))
    }

    #[test]
    fn binet_identity_and_exhaustive_small() {
        let id = DenseMatrix::identity(3);
        let a = comb(&[1, 2], 3);
        assert!(binet_check(&id, &id, &a, &a).unwrap());
        let mut rng = rng_from_seed(3);
        let left = random_full_rank(&mut rng, 3, 4);
        let right = random_full_rank(&mut rng, 4, 3);
        for a in combinations(3, 2).unwrap() {
            for b in combinations(3, 2).unwrap() {
                assert!(binet_check(&left, &right, &a, &b).unwrap());
            }
        }
        assert!(binet_check(&left, &left, &a, &a).is_err());
    }

    #[test]
    fn plucker_t2_is_the_three_term_relation() {
        let rel = plucker_relation(&comb(&[1], 4), &comb(&[2, 3, 4], 4)).unwrap();
        // [12][34] - [13][24] + [14][23] = 0
        let expected = RelationExpr::from_terms(alloc::vec![
            (
                int(1),
                alloc::vec![
                    MinorSymbol::from_indices(&[1, 2], &[1, 2]).unwrap(),
                    MinorSymbol::from_indices(&[1, 2], &[3, 4]).unwrap()
                ]
            ),
            (
                int(-1),
                alloc::vec![
                    MinorSymbol::from_indices(&[1, 2], &[1, 3]).unwrap(),
                    MinorSymbol::from_indices(&[1, 2], &[2, 4]).unwrap()
                ]
            ),
            (
                int(1),
                alloc::vec![
                    MinorSymbol::from_indices(&[1, 2], &[1, 4]).unwrap(),
                    MinorSymbol::from_indices(&[1, 2], &[2, 3]).unwrap()
                ]
            ),
        ]);
        assert_eq!(rel, expected);
        assert!(matches!(is_zero(&rel, ZeroMode::Exact).unwrap(), ZeroVerdict::Zero));
    }

    #[test]
    fn plucker_family_expands_to_zero() {
        for t in 2..=3usize {
            let n = 6;
            for a in combinations(n, t - 1).unwrap() {
                for b in combinations(n, t + 1).unwrap() {
                    let rel = plucker_relation(&a, &b).unwrap();
                    let p = rel.expand(&PolyRing::new(t, n)).unwrap();
                    assert!(p.is_zero(), "a = {a:?}, b = {b:?}");
                }
            }
        }
    }

    #[test]
    fn corrupted_relation_is_detected_with_witness() {
        let good = plucker_relation(&comb(&[1], 4), &comb(&[2, 3, 4], 4)).unwrap();
        let mut terms = good.terms().to_vec();
        terms[0].0 = -terms[0].0.clone();
        let bad = RelationExpr::from_terms(terms);
        match is_zero(&bad, ZeroMode::Exact).unwrap() {
            ZeroVerdict::NonZero { value, .. } => assert!(!value.is_zero()),
            v => panic!("expected nonzero verdict, got {v:?}"),
        }
        match is_zero(&bad, ZeroMode::Probabilistic { seed: 5, trials: 20, modulus: DEFAULT_MODULUS })
            .unwrap()
        {
            ZeroVerdict::NonZero { .. } => {}
            v => panic!("expected a probabilistic witness, got {v:?}"),
        }
        // and the good one passes both modes
        assert!(is_zero(&good, ZeroMode::Exact).unwrap().is_zero());
        assert!(is_zero(
            &good,
            ZeroMode::Probabilistic { seed: 5, trials: 20, modulus: DEFAULT_MODULUS }
        )
        .unwrap()
        .is_zero());
    }

    #[test]
    fn twelve_term_matches_the_printed_table() {
        let rel = twelve_term_relation();
        assert_eq!(rel.terms().len(), 12);
        // frozen from the displayed relation
        let expect = [
            (1, [1, 2], [1, 4], [3, 4], [2, 3]),
            (-1, [1, 4], [1, 4], [2, 3], [2, 3]),
            (-1, [2, 3], [1, 4], [1, 4], [2, 3]),
            (1, [3, 4], [1, 4], [1, 2], [2, 3]),
            (-1, [1, 2], [1, 3], [3, 4], [2, 4]),
            (1, [1, 4], [1, 3], [2, 3], [2, 4]),
            (1, [2, 3], [1, 3], [1, 4], [2, 4]),
            (-1, [3, 4], [1, 3], [1, 2], [2, 4]),
            (1, [1, 2], [1, 2], [3, 4], [3, 4]),
            (-1, [1, 4], [1, 2], [2, 3], [3, 4]),
            (-1, [2, 3], [1, 2], [1, 4], [3, 4]),
            (1, [3, 4], [1, 2], [1, 2], [3, 4]),
        ];
        let mut table = RelationExpr::new();
        for (c, r1, c1, r2, c2) in expect {
            table.push(
                int(c),
                alloc::vec![
                    MinorSymbol::from_indices(&r1, &c1).unwrap(),
                    MinorSymbol::from_indices(&r2, &c2).unwrap()
                ],
            );
        }
        assert_eq!(rel, table.canonical());
        assert!(is_zero(&rel, ZeroMode::Exact).unwrap().is_zero());
    }

    #[test]
    fn genplu2_family_expands_to_zero() {
        for t in 1..=3usize {
            for s in 0..=t {
                let rel = genplu2_relation(s, t).unwrap();
                assert!(
                    is_zero(&rel, ZeroMode::Exact).unwrap().is_zero(),
                    "s = {s}, t = {t}"
                );
            }
        }
        assert!(genplu2_relation(3, 2).is_err());
    }

    #[test]
    fn genplu2_degenerate_s_equals_t() {
        // single transversal (empty), plain Pluecker on the leading rows
        let rel = genplu2_relation(2, 2).unwrap();
        assert!(!rel.is_empty());
        assert!(is_zero(&rel, ZeroMode::Exact).unwrap().is_zero());
    }

    #[test]
    fn genplu2_agrees_with_its_pushforward_construction() {
        for t in 1..=3usize {
            for s in 0..=t {
                let direct = genplu2_relation(s, t).unwrap();
                let (a, u) = genplu2_pushforward_data(s, t).unwrap();
                let base = plucker_relation(
                    &comb(&(1..=t - 1).collect::<Vec<_>>(), 2 * t),
                    &comb(&(t..=2 * t).collect::<Vec<_>>(), 2 * t),
                )
                .unwrap();
                let pushed = pushforward_relation(&base, &a, &u).unwrap();
                assert_eq!(direct, pushed, "s = {s}, t = {t}");
            }
        }
    }

    #[test]
    fn pushforward_of_random_data_expands_to_zero() {
        let mut rng = rng_from_seed(7);
        for t in 2..=3usize {
            let base = plucker_relation(
                &comb(&(1..=t - 1).collect::<Vec<_>>(), 2 * t),
                &comb(&(t..=2 * t).collect::<Vec<_>>(), 2 * t),
            )
            .unwrap();
            for _ in 0..5 {
                let m = rng.gen_range(t + 1..=5);
                let a = DenseMatrix::from_fn(t, m, |_, _| {
                    ExactScalar::from_int(rng.gen_range(-9..=9))
                });
                let u: Vec<usize> = (0..2 * t).map(|_| rng.gen_range(1..=m)).collect();
                let pushed = pushforward_relation(&base, &a, &u).unwrap();
                assert!(
                    is_zero(&pushed, ZeroMode::Exact).unwrap().is_zero(),
                    "t = {t}, u = {u:?}"
                );
            }
        }
    }

    #[test]
    fn pushforward_recovers_the_relation_under_identity_selection() {
        // A with unit blocks at columns {1,2} and {5,6} and u the disjoint
        // union: the pushforward contains the row-relabeled copy of the base
        // relation on rows {1,2} x {5,6}, with the base coefficients
        let base = plucker_relation(&comb(&[1], 4), &comb(&[2, 3, 4], 4)).unwrap();
        let mut a = DenseMatrix::zero(2, 6);
        a.set(0, 0, ExactScalar::one());
        a.set(1, 1, ExactScalar::one());
        a.set(0, 4, ExactScalar::one());
        a.set(1, 5, ExactScalar::one());
        let u = alloc::vec![1, 2, 5, 6];
        let pushed = pushforward_relation(&base, &a, &u).unwrap();
        assert!(is_zero(&pushed, ZeroMode::Exact).unwrap().is_zero());
        for (lambda, alpha, beta) in
            base.terms().iter().map(|(c, f)| (c, f[0].cols(), f[1].cols()))
        {
            let relabeled = alloc::vec![
                MinorSymbol::from_indices(&[1, 2], alpha.indices()).unwrap(),
                MinorSymbol::from_indices(&[5, 6], beta.indices()).unwrap(),
            ];
            let found = pushed
                .terms()
                .iter()
                .find(|(_, f)| {
                    let mut sorted = relabeled.clone();
                    sorted.sort();
                    *f == sorted
                })
                .expect("relabeled term present");
            assert_eq!(&found.0, lambda);
        }
    }

    #[test]
    fn pushforward_with_high_multiplicity_is_zero() {
        let t = 2;
        let base = plucker_relation(
            &comb(&(1..=t - 1).collect::<Vec<_>>(), 2 * t),
            &comb(&(t..=2 * t).collect::<Vec<_>>(), 2 * t),
        )
        .unwrap();
        let mut rng = rng_from_seed(11);
        let a = DenseMatrix::from_fn(t, 4, |_, _| ExactScalar::from_int(rng.gen_range(-9..=9)));
        // an index with multiplicity 3 kills every term pair
        let pushed = pushforward_relation(&base, &a, &[1, 1, 1, 2]).unwrap();
        assert!(is_zero(&pushed, ZeroMode::Exact).unwrap().is_zero());
    }

    #[test]
    fn append_index_produces_valid_larger_relations() {
        let plu = plucker_relation(&comb(&[1], 4), &comb(&[2, 3, 4], 4)).unwrap();
        let appended = append_index(&plu);
        assert!(is_zero(&appended, ZeroMode::Exact).unwrap().is_zero());
        let twelve = twelve_term_relation();
        let appended = append_index(&twelve);
        // the symbols are now 3-minors on a 5 x 5 grid
        assert_eq!(appended.ring_hint(), PolyRing::new(5, 5));
        for (_, f) in appended.terms() {
            assert!(f.iter().all(|s| s.size() == 3 && s.rows().contains(1)));
        }
        assert!(is_zero(&appended, ZeroMode::Exact).unwrap().is_zero());
        assert!(append_index(&RelationExpr::new()).is_empty());
    }

    #[test]
    fn degree3_catalog_expands_to_zero() {
        for (name, rel) in degree3_catalog().unwrap() {
            assert!(
                is_zero(&rel, ZeroMode::Exact).unwrap().is_zero(),
                "relation {name} is nonzero"
            );
            assert!(!rel.is_empty(), "relation {name} is empty");
        }
    }

    #[test]
    fn anti_straightening_solves_and_verifies() {
        // u = 0, v = 2: Laplace-style expansion of a 2-minor
        let r = comb(&[1, 2], 2);
        let sol = anti_straighten(&r, &r, 0).unwrap();
        assert!(!sol.coeffs.is_empty());
        // u = 1, v = 3 on a wider grid
        let rows = comb(&[1, 2, 4], 4);
        let cols = comb(&[1, 3, 4], 4);
        let sol = anti_straighten(&rows, &cols, 1).unwrap();
        assert!(!sol.coeffs.is_empty());
        for (k, l) in sol.coeffs.keys() {
            assert!(*k >= 2 && *l >= 2);
        }
        // guard: u too large
        assert!(anti_straighten(&rows, &cols, 2).is_err());
    }

    #[test]
    fn subalgebra_membership_finds_and_rejects() {
        let ring = PolyRing::new(2, 4);
        let gens: Vec<SparsePoly> = combinations(4, 2)
            .unwrap()
            .iter()
            .map(|c| {
                minor_poly(&ring, &Combination::new(alloc::vec![1, 2], 2).unwrap(), c).unwrap()
            })
            .collect();
        // a generator is itself a degree-1 member
        let rep = subalgebra_membership(&gens[0], &gens, &ring, 2, 1000).unwrap().unwrap();
        assert_eq!(rep.len(), 1);
        assert_eq!(rep[0].1, alloc::vec![0]);
        // a single entry is not in the algebra of 2-minors
        let x11 = SparsePoly::variable(ring.nvars(), ring.var(1, 1));
        assert!(subalgebra_membership(&x11, &gens, &ring, 3, 1000).unwrap().is_none());
        // product of two generators is found at degree 2
        let prod = gens[1].mul(&gens[2]);
        let rep = subalgebra_membership(&prod, &gens, &ring, 2, 1000).unwrap().unwrap();
        let mut check = SparsePoly::zero(ring.nvars());
        for (c, ix) in &rep {
            let mut p = SparsePoly::constant(ring.nvars(), BigRational::one());
            for &i in ix {
                p = p.mul(&gens[i]);
            }
            check.add_assign_scaled(&p, c);
        }
        assert_eq!(check, prod);
    }

    #[test]
    fn pushforward_rejects_bad_input() {
        let t = 2;
        let mut rng = rng_from_seed(13);
        let a = DenseMatrix::from_fn(t, 4, |_, _| ExactScalar::from_int(rng.gen_range(-9..=9)));
        let base = plucker_relation(&comb(&[1], 4), &comb(&[2, 3, 4], 4)).unwrap();
        assert!(pushforward_relation(&base, &a, &[1, 2, 3]).is_err());
        assert!(pushforward_relation(&base, &a, &[1, 2, 3, 9]).is_err());
        // genuinely non-homogeneous relation rejected: mixed column multisets
        let bad = RelationExpr::from_terms(alloc::vec![
            (
                int(1),
                alloc::vec![
                    MinorSymbol::from_indices(&[1, 2], &[1, 2]).unwrap(),
                    MinorSymbol::from_indices(&[1, 2], &[3, 4]).unwrap()
                ]
            ),
            (
                int(1),
                alloc::vec![
                    MinorSymbol::from_indices(&[1, 2], &[1, 3]).unwrap(),
                    MinorSymbol::from_indices(&[1, 2], &[1, 4]).unwrap()
                ]
            ),
        ]);
        assert!(pushforward_relation(&bad, &a, &[1, 2, 3, 4]).is_err());
    }

    #[test]
    fn random_matrix_fixture_is_deterministic() {
        assert_eq!(random_matrix(3, 3, 2, 5).unwrap(), random_matrix(3, 3, 2, 5).unwrap());
    }
}
