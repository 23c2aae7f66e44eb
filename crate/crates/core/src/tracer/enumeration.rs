use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the number of path candidates of one enumeration.
pub const DEFAULT_CANDIDATE_BUDGET: u64 = 10_000_000;

/// Ordered facet ids of a specular path; empty means line of sight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PathCandidate(pub Vec<usize>);

impl PathCandidate {
    pub fn line_of_sight() -> PathCandidate {
        PathCandidate(Vec::new())
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn facet_ids(&self) -> &[usize] {
        &self.0
    }

    pub fn reversed(&self) -> PathCandidate {
        PathCandidate(self.0.iter().rev().copied().collect())
    }

    /// No facet is hit twice in a row.
    pub fn is_admissible(&self, facets: usize) -> bool {
        self.0.iter().all(|&f| f < facets) && self.0.windows(2).all(|w| w[0] != w[1])
    }
}

impl fmt::Display for PathCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Number of order-`k` candidates over `n` facets: `n (n - 1)^(k - 1)`, and 1
/// for `k = 0`. `None` on overflow.
pub fn order_count(n: usize, k: usize) -> Option<u64> {
    if k == 0 {
        return Some(1);
    }
    let n = n as u64;
    n.saturating_sub(1)
        .checked_pow(u32::try_from(k - 1).ok()?)?
        .checked_mul(n)
}

/// The canonical list of all path candidates of orders `0..=K` over `N`
/// facets, ordered by order and then lexicographically.
///
/// Candidates are decoded from their index on demand, so the list itself is
/// never materialized. Index 0 is always line of sight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateEnumeration {
    facets: usize,
    max_order: usize,
    /// `starts[k]` is the index of the first order-`k` candidate; the last
    /// entry is the total count.
    starts: Vec<u64>,
}

impl CandidateEnumeration {
    pub fn new(facets: usize, max_order: usize) -> Result<CandidateEnumeration> {
        CandidateEnumeration::with_budget(facets, max_order, DEFAULT_CANDIDATE_BUDGET)
    }

    pub fn with_budget(facets: usize, max_order: usize, budget: u64) -> Result<CandidateEnumeration> {
        let over = || Error::BudgetExceeded { facets, max_order, budget };
        let mut starts = Vec::with_capacity(max_order + 2);
        let mut total = 0u64;
        for k in 0..=max_order {
            starts.push(total);
            total = order_count(facets, k)
                .and_then(|c| total.checked_add(c))
                .ok_or_else(over)?;
            if total > budget {
                return Err(over());
            }
        }
        starts.push(total);
        Ok(CandidateEnumeration { facets, max_order, starts })
    }

    pub fn facet_count(&self) -> usize {
        self.facets
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn total_count(&self) -> usize {
        *self.starts.last().unwrap() as usize
    }

    pub fn len(&self) -> usize {
        self.total_count()
    }

    pub fn is_empty(&self) -> bool {
        self.total_count() == 0
    }

    /// Index range of the order-`k` candidates.
    pub fn order_range(&self, k: usize) -> std::ops::Range<usize> {
        self.starts[k] as usize..self.starts[k + 1] as usize
    }

    /// Decodes candidate `index` into `out` (cleared first).
    pub fn decode_into(&self, index: usize, out: &mut Vec<usize>) {
        out.clear();
        let index = index as u64;
        let k = self.starts.partition_point(|&s| s <= index) - 1;
        assert!(k <= self.max_order, "candidate index {index} out of range");
        if k == 0 {
            return;
        }
        let branching = self.facets as u64 - 1;
        let mut local = index - self.starts[k];
        let mut weight = branching.pow(k as u32 - 1);
        let first = local / weight;
        local %= weight;
        out.push(first as usize);
        for _ in 1..k {
            weight /= branching;
            let digit = (local / weight) as usize;
            local %= weight;
            let prev = *out.last().unwrap();
            out.push(if digit < prev { digit } else { digit + 1 });
        }
    }

    pub fn get(&self, index: usize) -> PathCandidate {
        let mut ids = Vec::new();
        self.decode_into(index, &mut ids);
        PathCandidate(ids)
    }

    /// Inverse of [`get`](Self::get).
    pub fn index_of(&self, candidate: &PathCandidate) -> Option<usize> {
        let ids = candidate.facet_ids();
        let k = ids.len();
        if k > self.max_order || !candidate.is_admissible(self.facets) {
            return None;
        }
        if k == 0 {
            return Some(0);
        }
        let branching = self.facets as u64 - 1;
        let mut local = ids[0] as u64;
        for w in ids.windows(2) {
            let digit = if w[1] < w[0] { w[1] } else { w[1] - 1 };
            local = local * branching + digit as u64;
        }
        Some((self.starts[k] + local) as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = PathCandidate> + '_ {
        (0..self.total_count()).map(|i| self.get(i))
    }

    pub fn candidates(&self) -> Vec<PathCandidate> {
        self.iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(e: &CandidateEnumeration) -> Vec<Vec<usize>> {
        e.iter().map(|c| c.0).collect()
    }

    #[test]
    fn two_facets_first_order() {
        let e = CandidateEnumeration::new(2, 1).unwrap();
        assert_eq!(ids(&e), vec![vec![], vec![0], vec![1]]);
        assert_eq!(e.order_range(1).len(), 2);
    }

    #[test]
    fn three_facets_second_order() {
        let e = CandidateEnumeration::new(3, 2).unwrap();
        assert_eq!(e.order_range(2).len(), 6);
        assert_eq!(e.total_count(), 10);
        assert_eq!(
            ids(&e)[4..].to_vec(),
            vec![vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 2], vec![2, 0], vec![2, 1]]
        );
    }

    #[test]
    fn single_facet_has_no_second_order() {
        let e = CandidateEnumeration::new(1, 2).unwrap();
        assert_eq!(ids(&e), vec![vec![], vec![0]]);
    }

    #[test]
    fn empty_scene_is_line_of_sight_only() {
        let e = CandidateEnumeration::new(0, 3).unwrap();
        assert_eq!(ids(&e), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn budget_is_enforced() {
        let err = CandidateEnumeration::with_budget(100, 3, 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { facets: 100, max_order: 3, budget: 1000 }));
        assert!(CandidateEnumeration::new(1000, 3).is_err());
        assert!(CandidateEnumeration::new(usize::MAX, 40).is_err());
    }

    #[test]
    fn index_of_inverts_get() {
        let e = CandidateEnumeration::new(5, 3).unwrap();
        for i in 0..e.total_count() {
            assert_eq!(e.index_of(&e.get(i)), Some(i));
        }
        assert_eq!(e.index_of(&PathCandidate(vec![1, 1])), None);
    }
}
