//! Which `CN(8,6)` lemmas apply to positions with pairwise distinct heights.
//!
//! Only the relative order of the heights matters to the lemma hypotheses,
//! so it is enough to check one permutation of `1..=n` per dihedral class.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::game::{canonicalize, Height, Position};
use crate::strategy::{lemma_applicable, LemmaTag};

/// Lemmas whose hypotheses are tracked by the coverage check.
pub const COVERAGE_LEMMAS: [LemmaTag; 4] =
    [LemmaTag::Trapezoid, LemmaTag::DoubleMin1, LemmaTag::DoubleMin2, LemmaTag::Cleanup];

/// A subset of [`COVERAGE_LEMMAS`], bit `i` for `COVERAGE_LEMMAS[i]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LemmaSet(u8);

impl LemmaSet {
    pub const EMPTY: LemmaSet = LemmaSet(0);

    pub fn contains(&self, tag: LemmaTag) -> bool {
        Self::bit(tag).is_some_and(|b| self.0 & b != 0)
    }

    pub fn insert(&mut self, tag: LemmaTag) {
        if let Some(b) = Self::bit(tag) {
            self.0 |= b;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = LemmaTag> + '_ {
        COVERAGE_LEMMAS.into_iter().filter(|t| self.contains(*t))
    }

    fn bit(tag: LemmaTag) -> Option<u8> {
        COVERAGE_LEMMAS.iter().position(|&t| t == tag).map(|i| 1 << i)
    }
}

impl fmt::Display for LemmaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        f.write_str("{")?;
        for (i, t) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("}")
    }
}

fn next_permutation(v: &mut [Height]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).expect("exists past the pivot");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// One permutation of `1..=n` per dihedral class, each the lexicographically
/// least member of its class, in increasing order. There are `(n-1)!/2` of
/// them for `n >= 3`.
pub fn enumerate_arrangements_n(n: usize) -> Vec<Position> {
    let mut v: Vec<Height> = (1..=n as Height).collect();
    let mut out = Vec::new();
    loop {
        let p = Position::from(v.as_slice());
        if canonicalize(&p).0 == p {
            out.push(p);
        }
        if !next_permutation(&mut v) {
            return out;
        }
    }
}

/// The 2520 arrangements of eight distinct heights.
pub fn enumerate_arrangements() -> Vec<Position> {
    enumerate_arrangements_n(8)
}

/// Lemmas whose hypothesis holds for some relabeling of `arr`.
pub fn arrangement_coverage(arr: &Position) -> LemmaSet {
    let mut set = LemmaSet::EMPTY;
    for tag in COVERAGE_LEMMAS {
        if lemma_applicable(arr, tag) {
            set.insert(tag);
        }
    }
    set
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub total: usize,
    /// Arrangements satisfying each lemma, in [`COVERAGE_LEMMAS`] order.
    pub per_lemma: [(LemmaTag, usize); 4],
    /// Arrangement count for each exact combination of lemmas.
    pub regions: BTreeMap<LemmaSet, usize>,
    /// Arrangements covered by clean-up and nothing else.
    pub cleanup_only: usize,
    pub uncovered: Vec<Position>,
}

impl CoverageReport {
    pub fn count(&self, tag: LemmaTag) -> usize {
        self.per_lemma.iter().find(|(t, _)| *t == tag).map_or(0, |(_, c)| *c)
    }
}

pub fn coverage_report() -> CoverageReport {
    let arrangements = enumerate_arrangements();
    let mut per_lemma = COVERAGE_LEMMAS.map(|t| (t, 0));
    let mut regions = BTreeMap::new();
    let mut uncovered = Vec::new();
    for arr in &arrangements {
        let set = arrangement_coverage(arr);
        for (tag, count) in per_lemma.iter_mut() {
            if set.contains(*tag) {
                *count += 1;
            }
        }
        *regions.entry(set).or_insert(0) += 1;
        if set.is_empty() {
            uncovered.push(arr.clone());
        }
    }
    let mut only_cleanup = LemmaSet::EMPTY;
    only_cleanup.insert(LemmaTag::Cleanup);
    CoverageReport {
        total: arrangements.len(),
        per_lemma,
        cleanup_only: regions.get(&only_cleanup).copied().unwrap_or(0),
        regions,
        uncovered,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrangement_counts() {
        assert_eq!(enumerate_arrangements_n(3).len(), 1);
        assert_eq!(enumerate_arrangements_n(4).len(), 3);
        assert_eq!(enumerate_arrangements_n(5).len(), 12);
        let all = enumerate_arrangements();
        assert_eq!(all.len(), 2520);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[0], Position::from(&[1u32, 2, 3, 4, 5, 6, 7, 8][..]));
    }

    #[test]
    fn report() {
        let r = coverage_report();
        assert_eq!(r.total, 2520);
        assert_eq!(r.count(LemmaTag::Trapezoid), 2248);
        assert_eq!(r.count(LemmaTag::DoubleMin1), 1688);
        assert_eq!(r.count(LemmaTag::DoubleMin2), 1748);
        assert_eq!(r.count(LemmaTag::Cleanup), 62);
        assert_eq!(r.cleanup_only, 42);
        assert!(r.uncovered.is_empty());
        assert_eq!(r.regions.values().sum::<usize>(), 2520);
    }

    #[test]
    fn regions_match_independent_count() {
        use LemmaTag::*;
        let r = coverage_report();
        let region = |tags: &[LemmaTag]| {
            let mut s = LemmaSet::EMPTY;
            tags.iter().for_each(|&t| s.insert(t));
            r.regions.get(&s).copied().unwrap_or(0)
        };
        assert_eq!(region(&[Cleanup]), 42);
        assert_eq!(region(&[DoubleMin2]), 94);
        assert_eq!(region(&[DoubleMin1]), 102);
        assert_eq!(region(&[DoubleMin1, DoubleMin2]), 34);
        assert_eq!(region(&[Trapezoid]), 156);
        assert_eq!(region(&[Trapezoid, Cleanup]), 20);
        assert_eq!(region(&[Trapezoid, DoubleMin2]), 520);
        assert_eq!(region(&[Trapezoid, DoubleMin1]), 452);
        assert_eq!(region(&[Trapezoid, DoubleMin1, DoubleMin2]), 1100);
        assert_eq!(r.regions.len(), 9);
    }

    #[test]
    fn lemma_set_display() {
        let mut s = LemmaSet::EMPTY;
        assert_eq!(alloc::format!("{s}"), "{}");
        s.insert(LemmaTag::Cleanup);
        s.insert(LemmaTag::Trapezoid);
        s.insert(LemmaTag::Valley);
        assert_eq!(alloc::format!("{s}"), "{TRAPEZOID,CLEANUP}");
        assert_eq!(s.len(), 2);
    }
}
