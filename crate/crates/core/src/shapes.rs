//! Shape statistics of products of minors and the stable prime-ideal catalog.
//!
//! A shape is the non-increasing list of factor sizes of a product of minors.
//! The statistics `gamma_j` (boxes in columns >= j), `pi_j` (normalized
//! defect with respect to a fixed minor size `t`) and `epsilon` (size
//! multiplicities) decide membership of the corresponding module in the
//! catalog ideals, which is all the downstream checks need; no
//! representation-theoretic objects are constructed.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::comb::binomial;
use crate::error::{Error, Result};

/// A non-increasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Shape {
    parts: Vec<usize>,
}

impl Shape {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Param(alloc::format!("shape parts must be positive")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Param(alloc::format!("shape must be non-increasing: {parts:?}")));
        }
        Ok(Shape { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Total box count, which is also `gamma_1`.
    pub fn boxes(&self) -> usize {
        self.parts.iter().sum()
    }

    /// All shapes with exactly `boxes` boxes and parts bounded by `max_part`.
    pub fn enumerate(boxes: usize, max_part: usize) -> Vec<Shape> {
        fn rec(remaining: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Shape>) {
            if remaining == 0 {
                out.push(Shape { parts: cur.clone() });
                return;
            }
            for p in (1..=max.min(remaining)).rev() {
                cur.push(p);
                rec(remaining - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        let mut cur = Vec::new();
        rec(boxes, max_part, &mut cur, &mut out);
        out
    }
}

/// `gamma_j = sum_i max(lambda_i - j + 1, 0)`.
pub fn gamma(shape: &Shape, j: usize) -> Result<i64> {
    if j < 1 {
        return Err(Error::Param(alloc::format!("gamma index must be >= 1")));
    }
    Ok(shape.parts.iter().map(|&p| p.saturating_sub(j - 1) as i64).sum())
}

/// `pi_j = gamma_j - (gamma_1 / t)(t - j + 1)`, a rational in general; it is
/// integral exactly when `t` divides the box count.
pub fn pi(shape: &Shape, j: usize, t: usize) -> Result<BigRational> {
    if t < 1 {
        return Err(Error::Param(alloc::format!("t must be >= 1")));
    }
    if j < 1 || j > t {
        return Err(Error::Param(alloc::format!("pi index {j} outside [1, {t}]")));
    }
    let gj = BigRational::from_integer(BigInt::from(gamma(shape, j)?));
    let g1 = BigRational::from_integer(BigInt::from(gamma(shape, 1)?));
    let factor = BigRational::new(BigInt::from((t + 1 - j) as i64), BigInt::from(t as i64));
    Ok(gj - g1 * factor)
}

/// Size multiplicities `epsilon_i = #{ j : lambda_j = i }` for `i = 1..=m`.
pub fn epsilon(shape: &Shape, m: usize) -> Result<Vec<usize>> {
    if shape.parts.iter().any(|&p| p > m) {
        return Err(Error::Param(alloc::format!("shape part exceeds bound {m}")));
    }
    let mut out = alloc::vec![0usize; m];
    for &p in &shape.parts {
        out[p - 1] += 1;
    }
    Ok(out)
}

/// Support condition for the algebra generated by `t`-minors: the degree must
/// be divisible by `t` and `pi_2` must be non-negative. For `t = 1` only the
/// (always satisfied) divisibility remains.
pub fn in_at_support(shape: &Shape, t: usize) -> Result<bool> {
    if t < 1 {
        return Err(Error::Param(alloc::format!("t must be >= 1")));
    }
    if shape.boxes() % t != 0 {
        return Ok(false);
    }
    if t == 1 {
        return Ok(true);
    }
    Ok(!pi(shape, 2, t)?.is_negative())
}

/// Checks the identity
/// `pi_u = (u - 1) pi_2 + sum_{k=1}^{u-2} #{ i : lambda_i <= k }`
/// exactly; it must hold for every shape. The correction term counts short
/// parts with the weight `u - 1 - k` per part of size `k`, equivalently the
/// partial sums of the size multiplicities. Both sides are additive over
/// parts, so single-part shapes already force this form of the term.
pub fn pi_formula_check(shape: &Shape, u: usize, t: usize) -> Result<bool> {
    if u < 3 || u > t {
        return Err(Error::Param(alloc::format!("u = {u} outside [3, t = {t}]")));
    }
    let lhs = pi(shape, u, t)?;
    let short_parts: i64 = (1..=u as i64 - 2)
        .map(|k| shape.parts.iter().filter(|&&p| (p as i64) <= k).count() as i64)
        .sum();
    let rhs = pi(shape, 2, t)? * BigRational::from_integer(BigInt::from((u - 1) as i64))
        + BigRational::from_integer(BigInt::from(short_parts));
    Ok(lhs == rhs)
}

// ---------------------------------------------------------------------------
// prime-ideal catalog

/// Kind of a catalog ideal. The sums `p_i + q_j` follow the conventions
/// `p_{-1} = q_{m+1} = 0`; the two extra members are `q_{t+1}` and the
/// irrelevant maximal ideal `q_t`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum PrimeKind {
    /// `p_i + q_j`, `i` in `[-1, t-2]`, `j` in `[t+2, m+1]`.
    PQ { i: isize, j: usize },
    /// `q_j` for `j` in `{t, t+1}`.
    Q { j: usize },
}

/// A catalog ideal with its facet-label face (faces are defined for
/// `1 < t < m` only).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PrimeIdealDescriptor {
    pub kind: PrimeKind,
    pub m: usize,
    pub t: usize,
    /// Labels of the facets whose intersection is the face, within `0..=m`.
    pub face: Option<BTreeSet<usize>>,
}

impl PrimeIdealDescriptor {
    fn new(kind: PrimeKind, m: usize, t: usize) -> Self {
        let face = if t > 1 && t < m {
            Some(match kind {
                PrimeKind::PQ { i, j } => {
                    let mut labels = BTreeSet::new();
                    if i >= 0 {
                        labels.extend(0..=(i as usize));
                    }
                    labels.extend(j..=m);
                    labels
                }
                PrimeKind::Q { j } if j == t + 1 => {
                    let mut labels: BTreeSet<usize> = (0..=m).collect();
                    labels.remove(&t);
                    labels
                }
                PrimeKind::Q { .. } => (0..=m).collect(),
            })
        } else {
            None
        };
        PrimeIdealDescriptor { kind, m, t, face }
    }

    /// Canonical label, collapsing the zero summands `p_{-1}` and `q_{m+1}`.
    pub fn label(&self) -> String {
        match self.kind {
            PrimeKind::PQ { i, j } => {
                let p_zero = i < 0;
                let q_zero = j == self.m + 1;
                match (p_zero, q_zero) {
                    (true, true) => String::from("(0)"),
                    (true, false) => alloc::format!("q{j}"),
                    (false, true) => alloc::format!("p{i}"),
                    (false, false) => alloc::format!("p{i}+q{j}"),
                }
            }
            PrimeKind::Q { j } => {
                if j == self.m + 1 {
                    String::from("(0)")
                } else {
                    alloc::format!("q{j}")
                }
            }
        }
    }

    pub fn is_zero_ideal(&self) -> bool {
        match self.kind {
            PrimeKind::PQ { i, j } => i < 0 && j == self.m + 1,
            PrimeKind::Q { j } => j == self.m + 1,
        }
    }
}

impl fmt::Display for PrimeIdealDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// The complete catalog of stable prime ideals: `t(m-t) + 2` entries for all
/// `1 <= t <= m`, including the degenerate cases `t = 1` (the determinantal
/// chain) and `t = m` (zero and irrelevant ideal only).
pub fn prime_catalog(m: usize, t: usize) -> Result<Vec<PrimeIdealDescriptor>> {
    if t < 1 || t > m {
        return Err(Error::Param(alloc::format!("t = {t} outside [1, m = {m}]")));
    }
    let mut out = Vec::new();
    for i in -1..=(t as isize - 2) {
        for j in t + 2..=m + 1 {
            out.push(PrimeIdealDescriptor::new(PrimeKind::PQ { i, j }, m, t));
        }
    }
    out.push(PrimeIdealDescriptor::new(PrimeKind::Q { j: t + 1 }, m, t));
    out.push(PrimeIdealDescriptor::new(PrimeKind::Q { j: t }, m, t));
    debug_assert_eq!(out.len(), t * (m - t) + 2);
    Ok(out)
}

/// Membership of the module of a shape in a catalog ideal: `p_i` holds the
/// shapes with `pi_{i+2} > 0`, `q_j` those with `gamma_j > 0`, and a sum
/// either one. The shape must lie in the support of the algebra.
pub fn shape_in_prime(shape: &Shape, prime: &PrimeIdealDescriptor, t: usize) -> Result<bool> {
    if !in_at_support(shape, t)? {
        return Err(Error::Param(alloc::format!("shape outside the support of A_t")));
    }
    let q_member = |j: usize| -> Result<bool> {
        if j > prime.m {
            return Ok(false); // q_{m+1} = 0
        }
        Ok(gamma(shape, j)? > 0)
    };
    match prime.kind {
        PrimeKind::PQ { i, j } => {
            let p_part = if i >= 0 { pi(shape, i as usize + 2, t)?.is_positive() } else { false };
            Ok(p_part || q_member(j)?)
        }
        PrimeKind::Q { j } => q_member(j),
    }
}

/// Orbit classes of the variety: zero, rank one, and the small-rank grid.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum OrbitClass {
    Zero,
    RankOne,
    SmallRank { u: usize, k: usize },
}

/// Catalog ideal attached to an orbit: the zero orbit pairs with the
/// irrelevant ideal `q_t`, rank 1 with `q_{t+1}`, and small rank `u >= 2`
/// with `p_{t-u} + q_{t+1+k}`.
pub fn orbit_to_prime(orbit: OrbitClass, m: usize, t: usize) -> Result<PrimeIdealDescriptor> {
    match orbit {
        OrbitClass::Zero => Ok(PrimeIdealDescriptor::new(PrimeKind::Q { j: t }, m, t)),
        OrbitClass::RankOne => Ok(PrimeIdealDescriptor::new(PrimeKind::Q { j: t + 1 }, m, t)),
        OrbitClass::SmallRank { u, k } => {
            if !(2..=t + 1).contains(&u) || !(1..=m.saturating_sub(t)).contains(&k) {
                return Err(Error::Param(alloc::format!(
                    "inadmissible orbit (u, k) = ({u}, {k}) for (m, t) = ({m}, {t})"
                )));
            }
            Ok(PrimeIdealDescriptor::new(
                PrimeKind::PQ { i: t as isize - u as isize, j: t + 1 + k },
                m,
                t,
            ))
        }
    }
}

/// All admissible orbit classes at `(m, t)`; there are `t(m-t) + 2` of them.
pub fn admissible_pairs(m: usize, t: usize) -> Vec<OrbitClass> {
    let mut out = alloc::vec![OrbitClass::Zero, OrbitClass::RankOne];
    for u in 2..=t + 1 {
        for k in 1..=m.saturating_sub(t) {
            out.push(OrbitClass::SmallRank { u, k });
        }
    }
    out
}

/// Rank of the orbit class, `C(u+k-1, u-1)` in the small-rank range.
pub fn orbit_rank(orbit: OrbitClass) -> usize {
    match orbit {
        OrbitClass::Zero => 0,
        OrbitClass::RankOne => 1,
        OrbitClass::SmallRank { u, k } => binomial(u + k - 1, u - 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn shape(parts: &[usize]) -> Shape {
        Shape::new(parts.to_vec()).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn gamma_examples() {
        let s = shape(&[3, 1]);
        assert_eq!(gamma(&s, 1).unwrap(), 4);
        assert_eq!(gamma(&s, 2).unwrap(), 2);
        assert_eq!(gamma(&s, 4).unwrap(), 0);
        assert_eq!(gamma(&s, 7).unwrap(), 0);
    }

    #[test]
    fn pi_examples() {
        // pi_2((t+1, t-1)) = 0
        for t in 2..=5 {
            let s = shape(&[t + 1, t - 1]);
            assert!(pi(&s, 2, t).unwrap().is_zero());
            assert!(pi(&s, 1, t).unwrap().is_zero());
        }
        // delta^t for a (t+1)-minor has positive pi_2; t = 2 gives 1
        assert_eq!(pi(&shape(&[3, 3]), 2, 2).unwrap(), rat(1, 1));
        // non-integral value when t does not divide the box count
        assert_eq!(pi(&shape(&[1]), 2, 3).unwrap(), rat(-2, 3));
        assert!(pi(&shape(&[1]), 3, 2).is_err());
    }

    #[test]
    fn support_examples() {
        assert!(in_at_support(&shape(&[2]), 2).unwrap());
        assert!(in_at_support(&shape(&[3, 1]), 2).unwrap());
        assert!(!in_at_support(&shape(&[1]), 2).unwrap());
        for t in 2..=4 {
            assert!(in_at_support(&shape(&[t + 1, t - 1]), t).unwrap());
            assert!(!in_at_support(&shape(&[t - 1]), t).unwrap());
        }
        // t = 1: everything is in support
        assert!(in_at_support(&shape(&[5, 2, 1]), 1).unwrap());
    }

    #[test]
    fn pi_formula_exhaustive_small() {
        for boxes in 1..=8 {
            for s in Shape::enumerate(boxes, boxes) {
                for t in 3..=5 {
                    for u in 3..=t {
                        assert!(
                            pi_formula_check(&s, u, t).unwrap(),
                            "failed for {s:?}, u = {u}, t = {t}"
                        );
                    }
                }
            }
        }
        assert!(pi_formula_check(&shape(&[1]), 2, 4).is_err());
        assert!(pi_formula_check(&shape(&[1]), 5, 4).is_err());
    }

    #[test]
    fn pi_nonnegative_when_pi2_is() {
        for boxes in 1..=8 {
            for s in Shape::enumerate(boxes, boxes) {
                for t in 3..=5 {
                    if !pi(&s, 2, t).unwrap().is_negative() {
                        for j in 3..=t {
                            assert!(!pi(&s, j, t).unwrap().is_negative());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn catalog_counts() {
        assert_eq!(prime_catalog(4, 2).unwrap().len(), 6);
        assert_eq!(prime_catalog(5, 5).unwrap().len(), 2);
        assert_eq!(prime_catalog(5, 3).unwrap().len(), 8);
        // t = 1: the m+1 determinantal ideals
        assert_eq!(prime_catalog(6, 1).unwrap().len(), 7);
        for m in 2..=6 {
            for t in 1..=m {
                assert_eq!(prime_catalog(m, t).unwrap().len(), t * (m - t) + 2);
            }
        }
        assert!(prime_catalog(4, 0).is_err());
        assert!(prime_catalog(4, 5).is_err());
    }

    #[test]
    fn catalog_labels_collapse_zero_summands() {
        let cat = prime_catalog(5, 3).unwrap();
        let labels: Vec<String> = cat.iter().map(|p| p.label()).collect();
        assert!(labels.contains(&String::from("(0)")));
        assert!(labels.contains(&String::from("q5")));
        assert!(labels.contains(&String::from("p0+q5")));
        assert!(labels.contains(&String::from("q4")));
        assert!(labels.contains(&String::from("q3")));
    }

    #[test]
    fn faces_follow_the_closed_form() {
        let cat = prime_catalog(4, 2).unwrap();
        for p in &cat {
            let face = p.face.as_ref().unwrap();
            match p.kind {
                PrimeKind::PQ { i, j } => {
                    let mut expected = BTreeSet::new();
                    if i >= 0 {
                        expected.extend(0..=i as usize);
                    }
                    expected.extend(j..=4);
                    assert_eq!(face, &expected);
                }
                PrimeKind::Q { j } if j == 2 => {
                    assert_eq!(face, &(0..=4).collect::<BTreeSet<_>>());
                }
                PrimeKind::Q { .. } => {
                    let mut expected: BTreeSet<usize> = (0..=4).collect();
                    expected.remove(&2);
                    assert_eq!(face, &expected);
                }
            }
        }
        // larger ideal <-> more facet labels: the grid order
        for a in &cat {
            for b in &cat {
                if let (PrimeKind::PQ { i: ia, j: ja }, PrimeKind::PQ { i: ib, j: jb }) =
                    (a.kind, b.kind)
                {
                    let ideal_leq = ia <= ib && ja >= jb;
                    let labels_leq = a.face.as_ref().unwrap().is_subset(b.face.as_ref().unwrap());
                    assert_eq!(ideal_leq, labels_leq);
                }
            }
        }
    }

    #[test]
    fn membership_examples() {
        let t = 2;
        let m = 4;
        let cat = prime_catalog(m, t).unwrap();
        let find = |label: &str| cat.iter().find(|p| p.label() == label).unwrap();
        // a single t-minor is in q_t but not q_{t+1}
        assert!(shape_in_prime(&shape(&[2]), find("q2"), t).unwrap());
        assert!(!shape_in_prime(&shape(&[2]), find("q3"), t).unwrap());
        // (t+1, t-1): gamma_{t+1} = 1 > 0, pi_2 = 0
        let s = shape(&[3, 1]);
        assert!(shape_in_prime(&s, find("q3"), t).unwrap());
        assert!(!shape_in_prime(&s, find("p0+q4"), t).unwrap());
        // delta^t for a (t+1)-minor is in p_0
        assert!(shape_in_prime(&shape(&[3, 3]), find("p0+q4"), t).unwrap());
        // nothing is in the zero ideal
        assert!(!shape_in_prime(&shape(&[3, 3]), find("(0)"), t).unwrap());
        // shapes outside support are rejected
        assert!(shape_in_prime(&shape(&[1]), find("q2"), t).is_err());
    }

    #[test]
    fn orbit_correspondence_is_a_bijection() {
        for (m, t) in [(4, 2), (5, 2), (5, 3), (6, 4)] {
            let orbits = admissible_pairs(m, t);
            assert_eq!(orbits.len(), t * (m - t) + 2);
            let mut labels = BTreeSet::new();
            for o in &orbits {
                let p = orbit_to_prime(*o, m, t).unwrap();
                labels.insert(p.label());
            }
            let catalog: BTreeSet<String> =
                prime_catalog(m, t).unwrap().iter().map(|p| p.label()).collect();
            assert_eq!(labels, catalog);
        }
    }

    #[test]
    fn orbit_to_prime_special_cases() {
        let (m, t) = (4, 2);
        assert_eq!(orbit_to_prime(OrbitClass::Zero, m, t).unwrap().label(), "q2");
        assert_eq!(orbit_to_prime(OrbitClass::RankOne, m, t).unwrap().label(), "q3");
        assert_eq!(
            orbit_to_prime(OrbitClass::SmallRank { u: 2, k: 1 }, m, t).unwrap().label(),
            "p0+q4"
        );
        // dense orbit maps to the zero ideal
        let dense = orbit_to_prime(OrbitClass::SmallRank { u: t + 1, k: m - t }, m, t).unwrap();
        assert!(dense.is_zero_ideal());
        assert!(orbit_to_prime(OrbitClass::SmallRank { u: 5, k: 1 }, m, t).is_err());
        assert!(orbit_to_prime(OrbitClass::SmallRank { u: 2, k: 3 }, m, t).is_err());
    }
}
