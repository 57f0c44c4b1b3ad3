//! Multisets of naturals under the dominance order used by the forest DP:
//! a multiset dominates another when it can be obtained from it by adding
//! elements and increasing existing ones.

/// A multiset of naturals in sorted (non-decreasing) canonical form. May
/// contain zeros and repeats.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NatMultiset {
    elements: Vec<u32>,
}

impl NatMultiset {
    pub fn new(mut elements: Vec<u32>) -> Self {
        elements.sort_unstable();
        NatMultiset { elements }
    }

    pub fn empty() -> Self {
        NatMultiset::default()
    }

    pub fn singleton(x: u32) -> Self {
        NatMultiset { elements: vec![x] }
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn max(&self) -> Option<u32> {
        self.elements.last().copied()
    }

    /// Multiset union (concatenation of multiplicities).
    pub fn union(&self, other: &NatMultiset) -> NatMultiset {
        let mut elements = Vec::with_capacity(self.len() + other.len());
        elements.extend_from_slice(&self.elements);
        elements.extend_from_slice(&other.elements);
        NatMultiset::new(elements)
    }

    /// Remove one occurrence of `x`; panics if absent.
    pub fn without(&self, x: u32) -> NatMultiset {
        let pos = self
            .elements
            .iter()
            .position(|&e| e == x)
            .expect("element present");
        let mut elements = self.elements.clone();
        elements.remove(pos);
        NatMultiset { elements }
    }

    /// The `q` biggest elements (or all of them when there are fewer).
    pub fn max_q(&self, q: usize) -> NatMultiset {
        let start = self.elements.len().saturating_sub(q);
        NatMultiset {
            elements: self.elements[start..].to_vec(),
        }
    }
}

/// True iff `big` can be obtained from `small` by adding elements and
/// increasing existing ones. Greedy criterion: with both sorted descending,
/// the i-th biggest of `big` must cover the i-th biggest of `small`.
pub fn dominates(big: &NatMultiset, small: &NatMultiset) -> bool {
    if big.len() < small.len() {
        return false;
    }
    big.elements
        .iter()
        .rev()
        .zip(small.elements.iter().rev())
        .all(|(b, s)| b >= s)
}

pub fn strictly_dominates(big: &NatMultiset, small: &NatMultiset) -> bool {
    big != small && dominates(big, small)
}

/// Keep exactly the dominance-maximal members, duplicates removed.
pub fn antichain_reduce(sets: impl IntoIterator<Item = NatMultiset>) -> Vec<NatMultiset> {
    let mut items: Vec<NatMultiset> = sets.into_iter().collect();
    items.sort_unstable();
    items.dedup();
    let mut keep = vec![true; items.len()];
    for i in 0..items.len() {
        for j in 0..items.len() {
            if i != j && dominates(&items[j], &items[i]) {
                // items are deduplicated, so domination here is strict
                keep[i] = false;
                break;
            }
        }
    }
    items
        .into_iter()
        .zip(keep)
        .filter_map(|(m, k)| k.then_some(m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(v: &[u32]) -> NatMultiset {
        NatMultiset::new(v.to_vec())
    }

    #[test]
    fn dominance_worked_examples() {
        assert!(dominates(&ms(&[3, 3, 5, 5, 7]), &ms(&[2, 3, 4, 6])));
        assert!(!dominates(&ms(&[3, 3, 5, 5, 7]), &ms(&[2, 3, 4, 8])));
    }

    #[test]
    fn dominance_is_reflexive_and_empty_is_bottom() {
        for m in [ms(&[]), ms(&[1]), ms(&[4, 2, 2])] {
            assert!(dominates(&m, &m));
            assert!(dominates(&m, &ms(&[])));
        }
    }

    #[test]
    fn antichain_drops_dominated_members() {
        assert_eq!(antichain_reduce([ms(&[1]), ms(&[2])]), vec![ms(&[2])]);
        assert_eq!(antichain_reduce([ms(&[]), ms(&[5])]), vec![ms(&[5])]);
    }

    #[test]
    fn antichain_keeps_incomparable_members() {
        // Neither {3,1} nor {2,2} dominates the other.
        let out = antichain_reduce([ms(&[3, 1]), ms(&[2, 2])]);
        assert_eq!(out.len(), 2);
        assert!(out.contains(&ms(&[1, 3])));
        assert!(out.contains(&ms(&[2, 2])));
    }

    #[test]
    fn antichain_removes_duplicates() {
        let out = antichain_reduce([ms(&[2, 1]), ms(&[1, 2])]);
        assert_eq!(out, vec![ms(&[1, 2])]);
    }

    #[test]
    fn max_q_takes_biggest_elements() {
        assert_eq!(ms(&[5, 5, 4, 4, 3, 2, 1]).max_q(3), ms(&[5, 5, 4]));
        assert_eq!(ms(&[2, 1]).max_q(5), ms(&[1, 2]));
        assert_eq!(ms(&[]).max_q(2), ms(&[]));
    }
}
