//! Rank and small-rank invariants, test polynomials, orbit normal forms,
//! classification, orbit dimensions and the fiber predicates of the compound
//! map.
//!
//! Small rank is the maximum rank of the restrictions of a point to the
//! exterior powers of subspaces of dimension at most `t + 1`. The maximum is
//! attained on a dense open set of subspaces, so the randomized strategy
//! samples integer subspaces and returns a certified lower bound that is the
//! true value with overwhelming probability; the certificate strategy
//! evaluates the test functions `f_v` on random group conjugates and is
//! meaningful for points of the variety.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use crate::comb::{binomial, combinations, Combination};
use crate::error::{Error, Result};
use crate::exterior::{compound, ExteriorPoint};
use crate::linalg::{self, random_full_rank, random_invertible, rng_from_seed};
use crate::matrix::DenseMatrix;
use crate::scalar::ExactScalar;
use crate::shapes::{orbit_to_prime, OrbitClass, PrimeIdealDescriptor};

/// Strategy for the small-rank computation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SmallRankStrategy {
    /// Maximum restriction rank over random subspaces; a lower bound in
    /// general, exact with overwhelming probability.
    Randomized,
    /// `t + 1 - min { v : f_v does not vanish on random conjugates }`;
    /// presumes the point lies in the variety.
    Certificate,
}

/// Orbit data attached to an admissible (small rank, rank) pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitDescriptor {
    pub small_rank: usize,
    pub rank: usize,
    /// Present exactly for the small-rank grid (`u >= 2`).
    pub k: Option<usize>,
    pub dimension: usize,
    pub prime: PrimeIdealDescriptor,
}

/// Outcome of [`classify`]: either a catalog orbit (the invariant pair is
/// admissible, a necessary condition for membership in the variety) or a
/// certified non-membership verdict.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ClassifyOutcome {
    Orbit(OrbitDescriptor),
    NotInVariety { small_rank: usize, rank: usize },
}

/// Small rank of a point, by the chosen strategy. `trials` bounds the number
/// of random samples; results are deterministic per seed.
pub fn small_rank(
    x: &ExteriorPoint,
    strategy: SmallRankStrategy,
    seed: u64,
    trials: usize,
) -> usize {
    if x.is_zero() {
        return 0;
    }
    match strategy {
        SmallRankStrategy::Randomized => small_rank_randomized(x, seed, trials),
        SmallRankStrategy::Certificate => small_rank_certificate(x, seed, trials),
    }
}

fn small_rank_randomized(x: &ExteriorPoint, seed: u64, trials: usize) -> usize {
    let t = x.t();
    let dim = (t + 1).min(x.m());
    let cap = binomial(dim, t).min(binomial(x.n(), t));
    let mut rng = rng_from_seed(seed);
    let mut best = 0;
    for _ in 0..trials.max(1) {
        let basis = random_full_rank(&mut rng, dim, x.m());
        let restriction = compound(&basis, t)
            .expect("t <= dim")
            .coords()
            .matmul(x.coords())
            .expect("compatible shapes");
        best = best.max(linalg::rank(&restriction));
        if best == cap {
            break;
        }
    }
    best
}

fn small_rank_certificate(x: &ExteriorPoint, seed: u64, trials: usize) -> usize {
    let t = x.t();
    if x.m() < t + 1 || x.n() < t + 1 {
        // no (t+1)-window coordinates to test; fall back to sampling
        return small_rank_randomized(x, seed, trials);
    }
    let mut rng = rng_from_seed(seed);
    let mut conjugates = Vec::with_capacity(trials.max(1) + 1);
    conjugates.push(x.clone());
    for _ in 0..trials.max(1) {
        let s = random_invertible(&mut rng, x.m());
        let tt = random_invertible(&mut rng, x.n());
        let moved = compound(&s, t)
            .expect("valid")
            .coords()
            .matmul(x.coords())
            .expect("shapes")
            .matmul(compound(&tt, t).expect("valid").coords())
            .expect("shapes");
        conjugates.push(ExteriorPoint::new(x.m(), x.n(), t, moved).expect("shapes"));
    }
    for v in 0..=t {
        for g in &conjugates {
            let val = f_v_eval(g, v).expect("bounds checked above");
            if !val.is_zero() {
                return t + 1 - v;
            }
        }
    }
    // every tested conjugate vanished under all f_v, v <= t; as a lower
    // bound this is 0 (for nonzero variety points the trials make this
    // outcome vanishingly unlikely)
    0
}

/// The test function `f_v`: determinant of the `(t+1-v) x (t+1-v)` matrix
/// with entries `(-1)^(i+j) E_{[1..t+1] \ i, [1..t+1] \ j}` for
/// `i, j = v+1, ..., t+1`. Requires `m, n >= t + 1`. On a compound this
/// equals `[1..v | 1..v] * [1..t+1 | 1..t+1]^(t-v)`.
pub fn f_v_eval(x: &ExteriorPoint, v: usize) -> Result<ExactScalar> {
    let t = x.t();
    if v > t + 1 {
        return Err(Error::Param(alloc::format!("v = {v} exceeds t + 1")));
    }
    if x.m() < t + 1 || x.n() < t + 1 {
        return Err(Error::Dimension(alloc::format!(
            "f_v needs m, n >= t + 1 = {}",
            t + 1
        )));
    }
    let size = t + 1 - v;
    let window_row = Combination::first(t + 1, x.m())?;
    let window_col = Combination::first(t + 1, x.n())?;
    let mat = DenseMatrix::from_fn(size, size, |a, b| {
        let i = v + 1 + a;
        let j = v + 1 + b;
        let rows = window_row.with_removed_value(i);
        let cols = window_col.with_removed_value(j);
        let e = x.coords().get(rows.position(), cols.position()).clone();
        if (i + j) % 2 == 1 {
            -&e
        } else {
            e
        }
    });
    linalg::det(&mat)
}

/// The diagonal normal form of an orbit class: zero for the zero orbit, the
/// single coordinate `([1..t], [1..t])` for rank 1, and for `u in [2, t+1]`,
/// `k in [1, m-t]` ones at the index pairs `([1..v] ∪ I, [1..v] ∪ I)` with
/// `v = t + 1 - u` and `I` over the `(t-v)`-subsets of `{v+1, ..., t+k}`.
pub fn normal_form(orbit: OrbitClass, m: usize, n: usize, t: usize) -> Result<ExteriorPoint> {
    if m > n {
        return Err(Error::Param(alloc::format!("m = {m} must not exceed n = {n}")));
    }
    if t > m {
        return Err(Error::Param(alloc::format!("t = {t} exceeds m = {m}")));
    }
    let mut x = ExteriorPoint::zero(m, n, t)?;
    match orbit {
        OrbitClass::Zero => Ok(x),
        OrbitClass::RankOne => {
            let i = Combination::first(t, m)?;
            let j = Combination::first(t, n)?;
            x.set_coord_at(i.position(), j.position(), ExactScalar::one());
            Ok(x)
        }
        OrbitClass::SmallRank { u, k } => {
            if !(2..=t + 1).contains(&u) || !(1..=m.saturating_sub(t)).contains(&k) {
                return Err(Error::Param(alloc::format!(
                    "inadmissible (u, k) = ({u}, {k}) at (m, n, t) = ({m}, {n}, {t})"
                )));
            }
            let v = t + 1 - u;
            let tail: Vec<usize> = (v + 1..=t + k).collect();
            for subset in combinations(tail.len(), t - v)? {
                let mut indices: Vec<usize> = (1..=v).collect();
                indices.extend(subset.indices().iter().map(|&s| tail[s - 1]));
                let rows = Combination::new(indices.clone(), m)?;
                let cols = Combination::new(indices, n)?;
                x.set_coord_at(rows.position(), cols.position(), ExactScalar::one());
            }
            Ok(x)
        }
    }
}

/// Dimension of an orbit: 0 for the zero orbit, `(m-t)t + (n-t)t + 1` for
/// rank 1, and `mn - (t-u+1)^2 - (m-(t+k))(n-(t+k))` on the grid.
pub fn orbit_dimension(orbit: OrbitClass, m: usize, n: usize, t: usize) -> Result<usize> {
    match orbit {
        OrbitClass::Zero => Ok(0),
        OrbitClass::RankOne => Ok((m - t) * t + (n - t) * t + 1),
        OrbitClass::SmallRank { u, k } => {
            if !(2..=t + 1).contains(&u) || !(1..=m.saturating_sub(t)).contains(&k) {
                return Err(Error::Param(alloc::format!("inadmissible (u, k) = ({u}, {k})")));
            }
            let v = t + 1 - u;
            Ok(m * n - v * v - (m - (t + k)) * (n - (t + k)))
        }
    }
}

/// Finds the orbit class matching an invariant pair, if any.
pub fn orbit_class_of_pair(sr: usize, rank: usize, m: usize, t: usize) -> Option<OrbitClass> {
    match (sr, rank) {
        (0, 0) => Some(OrbitClass::Zero),
        (1, 1) => Some(OrbitClass::RankOne),
        (u, r) if (2..=t + 1).contains(&u) => (1..=m.saturating_sub(t))
            .find(|&k| binomial(u + k - 1, u - 1) == r)
            .map(|k| OrbitClass::SmallRank { u, k }),
        _ => None,
    }
}

/// Computes the invariant pair of a point and matches it against the orbit
/// catalog. An admissible pair is necessary for membership in the variety
/// but not sufficient for ambient points; an inadmissible pair certifies
/// non-membership.
pub fn classify(x: &ExteriorPoint, seed: u64, trials: usize) -> Result<ClassifyOutcome> {
    let rank = x.rank();
    let sr = small_rank(x, SmallRankStrategy::Randomized, seed, trials);
    match orbit_class_of_pair(sr, rank, x.m(), x.t()) {
        Some(orbit) => {
            let dimension = orbit_dimension(orbit, x.m(), x.n(), x.t())?;
            let prime = orbit_to_prime(orbit, x.m(), x.t())?;
            let k = match orbit {
                OrbitClass::SmallRank { k, .. } => Some(k),
                _ => None,
            };
            Ok(ClassifyOutcome::Orbit(OrbitDescriptor {
                small_rank: sr,
                rank,
                k,
                dimension,
                prime,
            }))
        }
        None => Ok(ClassifyOutcome::NotInVariety { small_rank: sr, rank }),
    }
}

// ---------------------------------------------------------------------------
// fibers of the compound map

/// For maps of rank exceeding `t`: whether the compounds agree. Over the
/// rationals this happens exactly when `g = f`, or `g = -f` with `t` even
/// (the rational roots of unity are just +-1).
pub fn same_fiber_high_rank(f: &DenseMatrix, g: &DenseMatrix, t: usize) -> Result<bool> {
    if linalg::rank(f) <= t || linalg::rank(g) <= t {
        return Err(Error::Param(alloc::format!("both maps must have rank > t = {t}")));
    }
    Ok(compound(f, t)? == compound(g, t)?)
}

/// Scalar relation between the compounds of two rank-`t` maps.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RankTFiber {
    /// The scalar `c` with `compound(g) = c * compound(f)`, when related.
    pub scalar: Option<ExactScalar>,
}

impl RankTFiber {
    pub fn related(&self) -> bool {
        self.scalar.is_some()
    }

    pub fn scalar_is_one(&self) -> bool {
        self.scalar.as_ref().is_some_and(ExactScalar::is_one)
    }
}

/// For maps of rank exactly `t`: decides by kernel and image comparison
/// whether the compounds differ by a nonzero scalar, and reports the scalar.
pub fn same_fiber_rank_t(f: &DenseMatrix, g: &DenseMatrix, t: usize) -> Result<RankTFiber> {
    if linalg::rank(f) != t || linalg::rank(g) != t {
        return Err(Error::Param(alloc::format!("both maps must have rank exactly t = {t}")));
    }
    if !same_row_space(f, g)? || !same_row_space(&f.transpose(), &g.transpose())? {
        return Ok(RankTFiber { scalar: None });
    }
    // equal kernel and image force proportional compounds; read the scalar
    // off a nonzero coordinate and verify proportionality exactly
    let cf = compound(f, t)?;
    let cg = compound(g, t)?;
    let mut scalar = None;
    'outer: for r in 0..cf.coords().rows() {
        for c in 0..cf.coords().cols() {
            if !cf.coords().get(r, c).is_zero() {
                scalar = cg.coords().get(r, c).divide(cf.coords().get(r, c));
                break 'outer;
            }
        }
    }
    let scalar =
        scalar.ok_or_else(|| Error::Internal(alloc::format!("rank-t map has zero compound")))?;
    if cf.scale(&scalar) != cg {
        return Err(Error::Internal(alloc::format!(
            "equal kernel and image but non-proportional compounds"
        )));
    }
    Ok(RankTFiber { scalar: Some(scalar) })
}

/// Row spaces agree iff stacking does not increase the rank. With the row
/// convention this compares images; applied to transposes it compares
/// kernels.
fn same_row_space(a: &DenseMatrix, b: &DenseMatrix) -> Result<bool> {
    let ra = linalg::rank(a);
    let rb = linalg::rank(b);
    if ra != rb {
        return Ok(false);
    }
    Ok(linalg::rank(&a.vstack(b)?) == ra)
}

/// A random point of the variety with the given underlying map rank.
pub fn random_variety_point(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
    t: usize,
    map_rank: usize,
) -> Result<ExteriorPoint> {
    use rand::Rng;
    let seed = rng.gen::<u64>();
    let b = linalg::random_matrix(m, n, map_rank, seed)?;
    compound(&b, t)
}
