//! Strictly increasing 1-based index tuples in lexicographic order.
//!
//! Positions within the lex order are computed by the combinatorial number
//! system, so ranking and unranking run in O(t) without tables.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Binomial coefficient; 0 when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    usize::try_from(acc).expect("binomial overflows usize")
}

/// A strictly increasing tuple of 1-based indices within `[1, bound]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Combination {
    indices: Vec<usize>,
    bound: usize,
}

impl Combination {
    pub fn new(indices: Vec<usize>, bound: usize) -> Result<Self> {
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Param(alloc::format!(
                    "indices not strictly increasing: {indices:?}"
                )));
            }
        }
        if let (Some(first), Some(last)) = (indices.first(), indices.last()) {
            if *first < 1 || *last > bound {
                return Err(Error::Param(alloc::format!(
                    "indices {indices:?} outside [1, {bound}]"
                )));
            }
        }
        Ok(Combination { indices, bound })
    }

    /// The initial segment `{1, ..., t}`.
    pub fn first(t: usize, bound: usize) -> Result<Self> {
        if t > bound {
            return Err(Error::Param(alloc::format!("{t} > bound {bound}")));
        }
        Combination::new((1..=t).collect(), bound)
    }

    pub fn empty(bound: usize) -> Self {
        Combination { indices: Vec::new(), bound }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// 1-based position of `i` within the tuple, if present.
    pub fn position_of(&self, i: usize) -> Option<usize> {
        self.indices.binary_search(&i).ok().map(|p| p + 1)
    }

    pub fn is_subset_of(&self, other: &Combination) -> bool {
        self.indices.iter().all(|i| other.contains(*i))
    }

    /// Lexicographic rank among all `len`-subsets of `[1, bound]`.
    pub fn position(&self) -> usize {
        let t = self.len();
        let n = self.bound;
        let mut rank = 0;
        let mut prev = 0;
        for (i, &c) in self.indices.iter().enumerate() {
            for x in prev + 1..c {
                rank += binomial(n - x, t - 1 - i);
            }
            prev = c;
        }
        rank
    }

    /// Inverse of [`Combination::position`].
    pub fn from_position(bound: usize, t: usize, mut pos: usize) -> Result<Self> {
        if t > bound {
            return Err(Error::Param(alloc::format!("{t} > bound {bound}")));
        }
        let mut indices = Vec::with_capacity(t);
        let mut x = 1;
        for i in 0..t {
            loop {
                let block = binomial(bound - x, t - 1 - i);
                if pos < block {
                    break;
                }
                pos -= block;
                x += 1;
            }
            indices.push(x);
            x += 1;
        }
        if pos != 0 {
            return Err(Error::Param(alloc::format!("position out of range")));
        }
        Combination::new(indices, bound)
    }

    /// `[1, bound] \ self`.
    pub fn complement(&self) -> Combination {
        let indices = (1..=self.bound).filter(|i| !self.contains(*i)).collect();
        Combination { indices, bound: self.bound }
    }

    /// Removes the entry at 1-based position `pos`.
    pub fn with_removed_position(&self, pos: usize) -> Combination {
        let mut indices = self.indices.clone();
        indices.remove(pos - 1);
        Combination { indices, bound: self.bound }
    }

    /// Removes the value `v` (which must be present).
    pub fn with_removed_value(&self, v: usize) -> Combination {
        let pos = self.position_of(v).expect("value not in combination");
        self.with_removed_position(pos)
    }

    /// Inserts `v`, returning the new tuple and the 1-based position at which
    /// `v` lands; `None` if `v` is already present.
    pub fn with_inserted(&self, v: usize) -> Option<(Combination, usize)> {
        match self.indices.binary_search(&v) {
            Ok(_) => None,
            Err(idx) => {
                let mut indices = self.indices.clone();
                indices.insert(idx, v);
                let bound = self.bound.max(v);
                Some((Combination { indices, bound }, idx + 1))
            }
        }
    }

    /// Shifts every index by `v` and extends the bound accordingly.
    pub fn shifted_up(&self, v: usize) -> Combination {
        Combination {
            indices: self.indices.iter().map(|i| i + v).collect(),
            bound: self.bound + v,
        }
    }

    /// Shifts every index down by `v`; all indices must exceed `v`.
    pub fn shifted_down(&self, v: usize) -> Result<Combination> {
        if self.indices.iter().any(|&i| i <= v) {
            return Err(Error::Param(alloc::format!("index <= shift {v}")));
        }
        Ok(Combination {
            indices: self.indices.iter().map(|i| i - v).collect(),
            bound: self.bound.saturating_sub(v),
        })
    }

    /// Prefix `{1..v}` followed by `self` shifted up by `v`.
    pub fn with_prefix(&self, v: usize) -> Combination {
        let mut indices: Vec<usize> = (1..=v).collect();
        indices.extend(self.indices.iter().map(|i| i + v));
        Combination { indices, bound: self.bound + v }
    }

    /// Rebinds the ambient bound (indices must still fit).
    pub fn with_bound(&self, bound: usize) -> Result<Combination> {
        Combination::new(self.indices.clone(), bound)
    }
}

/// All `t`-subsets of `[1, n]` in lexicographic order.
pub fn combinations(n: usize, t: usize) -> Result<Vec<Combination>> {
    if t > n {
        return Err(Error::Param(alloc::format!("t = {t} exceeds n = {n}")));
    }
    let mut out = Vec::with_capacity(binomial(n, t));
    let mut cur: Vec<usize> = (1..=t).collect();
    loop {
        out.push(Combination { indices: cur.clone(), bound: n });
        // advance to the next combination in lex order
        let mut i = t;
        while i > 0 && cur[i - 1] == n - (t - i) {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        cur[i - 1] += 1;
        for j in i..t {
            cur[j] = cur[j - 1] + 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_enumeration_matches_spec() {
        let cs = combinations(4, 2).unwrap();
        let got: Vec<Vec<usize>> = cs.iter().map(|c| c.indices().to_vec()).collect();
        assert_eq!(
            got,
            vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]
        );
    }

    #[test]
    fn empty_and_counts() {
        assert_eq!(combinations(5, 0).unwrap().len(), 1);
        assert!(combinations(5, 0).unwrap()[0].is_empty());
        assert_eq!(combinations(5, 3).unwrap().len(), 10);
        assert_eq!(binomial(5, 3), 10);
        assert!(combinations(3, 4).is_err());
    }

    #[test]
    fn rank_and_unrank_agree_with_enumeration() {
        for (n, t) in [(6, 3), (5, 2), (4, 4), (7, 1), (3, 0)] {
            for (i, c) in combinations(n, t).unwrap().iter().enumerate() {
                assert_eq!(c.position(), i);
                assert_eq!(&Combination::from_position(n, t, i).unwrap(), c);
            }
        }
    }

    #[test]
    fn construction_rejects_bad_tuples() {
        assert!(Combination::new(vec![2, 2], 4).is_err());
        assert!(Combination::new(vec![3, 1], 4).is_err());
        assert!(Combination::new(vec![0, 1], 4).is_err());
        assert!(Combination::new(vec![1, 5], 4).is_err());
    }

    #[test]
    fn complement_and_insert() {
        let c = Combination::new(vec![1, 3], 4).unwrap();
        assert_eq!(c.complement().indices(), &[2, 4]);
        let (d, pos) = c.with_inserted(2).unwrap();
        assert_eq!(d.indices(), &[1, 2, 3]);
        assert_eq!(pos, 2);
        assert!(c.with_inserted(3).is_none());
    }

    #[test]
    fn prefix_and_shift() {
        let c = Combination::new(vec![1, 3], 4).unwrap();
        let p = c.with_prefix(2);
        assert_eq!(p.indices(), &[1, 2, 3, 5]);
        assert_eq!(p.bound(), 6);
        assert_eq!(p.shifted_down(0).unwrap().indices(), &[1, 2, 3, 5]);
    }
}
