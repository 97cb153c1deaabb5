//! Exhaustive enumeration of meet semilattices up to isomorphism, and the
//! filtering pipeline that isolates the eight-element structures able to
//! support a singular LCM matrix.
//!
//! Posets are generated by repeatedly adjoining a new maximal element over an
//! arbitrary down-set. A child is accepted only when deleting its canonical
//! last element reproduces the parent (canonical construction path), so each
//! isomorphism class is produced exactly once without a global seen-set.

use crate::bits::Bits;
use crate::poset::{CanonicalForm, MobiusTable, Poset};
use std::collections::HashSet;
use thiserror::Error;

/// Practical bound: the generation tree beyond nine elements is out of scope.
pub const MAX_N: usize = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("enumeration supports 1 <= n <= {MAX_N}, got {0}")]
    SizeTooLarge(usize),
    #[error("element {0} is not maximal")]
    NotMaximal(usize),
    #[error("classification needs an 8-element poset, got {0}")]
    WrongSize(usize),
}

/// Everything the generator saw at size `n`.
pub struct Enumeration {
    /// Number of isomorphism classes of *all* posets with `n` elements.
    pub total_posets: u64,
    /// Canonical representatives of the meet-semilattice classes, in
    /// canonical-form lexicographic order.
    pub semilattices: Vec<Poset>,
}

/// Runs the generator at size `n`.
pub fn enumerate(n: usize) -> Result<Enumeration, EnumError> {
    if n == 0 || n > MAX_N {
        return Err(EnumError::SizeTooLarge(n));
    }
    let mut total = 0u64;
    let mut semis = Vec::new();
    let singleton = Poset::from_covers(1, &[]).expect("singleton");
    let form = singleton.canonical_form();
    grow(&singleton, &form, n, &mut |p| {
        total += 1;
        if p.is_meet_semilattice() {
            semis.push(p.clone());
        }
    });
    semis.sort_by(|a, b| a.canonical_form().cmp(&b.canonical_form()));
    Ok(Enumeration {
        total_posets: total,
        semilattices: semis,
    })
}

/// One canonical representative per isomorphism class of `n`-element meet
/// semilattices, deterministically ordered.
pub fn enumerate_meet_semilattices(n: usize) -> Result<Vec<Poset>, EnumError> {
    Ok(enumerate(n)?.semilattices)
}

fn grow(parent: &Poset, parent_form: &CanonicalForm, target: usize, visit: &mut impl FnMut(&Poset)) {
    if parent.n() == target {
        visit(parent);
        return;
    }
    let mut seen: HashSet<CanonicalForm> = HashSet::new();
    for mask in downset_masks(parent) {
        let child = extend_with_max(parent, mask);
        let (canon, form, _) = child.canonicalize();
        if !seen.insert(form.clone()) {
            continue;
        }
        if canon.delete_last().canonical_form() == *parent_form {
            grow(&canon, &form, target, visit);
        }
    }
}

/// All down-closed subsets of `p`, as bitmasks. `p.n()` is at most 8 here.
fn downset_masks(p: &Poset) -> Vec<u64> {
    let n = p.n();
    let down: Vec<u64> = (0..n)
        .map(|i| p.down_mask(i).ones().fold(0u64, |m, j| m | 1 << j))
        .collect();
    (0u64..1 << n)
        .filter(|&mask| (0..n).all(|i| mask >> i & 1 == 0 || down[i] & !mask == 0))
        .collect()
}

/// Adjoins element `n` above exactly the elements of `mask`.
fn extend_with_max(p: &Poset, mask: u64) -> Poset {
    let n = p.n();
    let mut covers = p.covers().to_vec();
    for i in 0..n {
        if mask >> i & 1 == 1 {
            // i is a new cover iff nothing else in the mask lies above it
            let above = p.up_mask(i).ones().fold(0u64, |m, j| m | 1 << j);
            if above & mask == 1 << i {
                covers.push((i, n));
            }
        }
    }
    covers.sort_unstable();
    let mut up = Vec::with_capacity(n + 1);
    let mut down = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut u = Bits::new(n + 1);
        for j in p.up_mask(i).ones() {
            u.set(j);
        }
        if mask >> i & 1 == 1 {
            u.set(n);
        }
        up.push(u);
        let mut d = Bits::new(n + 1);
        for j in p.down_mask(i).ones() {
            d.set(j);
        }
        down.push(d);
    }
    let mut u = Bits::new(n + 1);
    u.set(n);
    up.push(u);
    let mut d = Bits::new(n + 1);
    d.set(n);
    for i in 0..n {
        if mask >> i & 1 == 1 {
            d.set(i);
        }
    }
    down.push(d);
    Poset::from_trusted_parts(n + 1, covers, up, down)
}

// ---------------------------------------------------------------------------
// Filters
// ---------------------------------------------------------------------------

/// True iff every maximal element covers at least `k` elements.
pub fn filter_max_cover_at_least(p: &Poset, k: usize) -> bool {
    p.maximal_elements()
        .into_iter()
        .all(|m| p.covers_of(m).len() >= k)
}

/// True iff no element `e` has `μ(e, top) = 0` while covering at most one
/// element and being covered by exactly one. Such an element could be removed
/// without changing Ψ at `top`, dropping to a smaller nonsingular case.
pub fn filter_no_prunable_zero(p: &Poset, top: usize) -> Result<bool, EnumError> {
    if !p.covered_by(top).is_empty() {
        return Err(EnumError::NotMaximal(top));
    }
    let mu = MobiusTable::compute(p);
    for e in 0..p.n() {
        if mu.value(e, top) == 0 && p.covers_of(e).len() <= 1 && p.covered_by(e).len() == 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A structure survives the Möbius filter when some maximal element can play
/// the role of the last added element.
pub fn passes_mobius_filter(p: &Poset) -> bool {
    p.maximal_elements()
        .into_iter()
        .any(|m| filter_no_prunable_zero(p, m).unwrap_or(false))
}

// ---------------------------------------------------------------------------
// The ten eight-element classes
// ---------------------------------------------------------------------------

/// Tags for the ten eight-element structures surviving the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class8 {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    I,
    J,
}

impl Class8 {
    pub const ALL: [Class8; 10] = [
        Class8::A,
        Class8::B,
        Class8::C,
        Class8::D,
        Class8::E,
        Class8::F,
        Class8::G,
        Class8::H,
        Class8::I,
        Class8::J,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Class8::A => "8_A",
            Class8::B => "8_B",
            Class8::C => "8_C",
            Class8::D => "8_D",
            Class8::E => "8_E",
            Class8::F => "8_F",
            Class8::G => "8_G",
            Class8::H => "8_H",
            Class8::I => "8_I",
            Class8::J => "8_J",
        }
    }

    fn covers(self) -> &'static [(usize, usize)] {
        match self {
            Class8::A => &[
                (0, 1),
                (1, 2),
                (1, 3),
                (1, 4),
                (0, 5),
                (0, 6),
                (2, 7),
                (3, 7),
                (4, 7),
                (5, 7),
                (6, 7),
            ],
            Class8::B => &[
                (0, 1),
                (0, 2),
                (1, 3),
                (1, 4),
                (1, 5),
                (2, 5),
                (2, 6),
                (3, 7),
                (4, 7),
                (5, 7),
                (6, 7),
            ],
            Class8::C => &[
                (0, 1),
                (0, 2),
                (1, 3),
                (1, 4),
                (2, 4),
                (2, 6),
                (4, 5),
                (3, 7),
                (5, 7),
                (6, 7),
            ],
            Class8::D => &[
                (0, 1),
                (0, 2),
                (1, 3),
                (1, 4),
                (2, 5),
                (2, 6),
                (3, 7),
                (4, 7),
                (5, 7),
                (6, 7),
            ],
            Class8::E => &[
                (0, 1),
                (1, 2),
                (1, 3),
                (1, 4),
                (1, 5),
                (0, 6),
                (2, 7),
                (3, 7),
                (4, 7),
                (5, 7),
                (6, 7),
            ],
            Class8::F => &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 4),
                (1, 5),
                (2, 5),
                (2, 6),
                (3, 7),
                (4, 7),
                (5, 7),
                (6, 7),
            ],
            Class8::G => &[
                (0, 1),
                (1, 2),
                (1, 3),
                (0, 4),
                (0, 5),
                (0, 6),
                (2, 7),
                (3, 7),
                (4, 7),
                (5, 7),
                (6, 7),
            ],
            Class8::H => &[
                (0, 1),
                (1, 2),
                (2, 3),
                (2, 4),
                (1, 5),
                (0, 6),
                (3, 7),
                (4, 7),
                (5, 7),
                (6, 7),
            ],
            Class8::I => &[
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (0, 5),
                (0, 6),
                (1, 7),
                (2, 7),
                (3, 7),
                (4, 7),
                (5, 7),
                (6, 7),
            ],
            Class8::J => &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 4),
                (2, 4),
                (1, 5),
                (3, 5),
                (2, 6),
                (3, 6),
                (4, 7),
                (5, 7),
                (6, 7),
            ],
        }
    }

    pub fn representative(self) -> Poset {
        Poset::from_covers(8, self.covers()).expect("built-in class representative")
    }
}

impl std::fmt::Display for Class8 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Matches an 8-element poset against the built-in representatives.
pub fn classify_8(p: &Poset) -> Result<Option<Class8>, EnumError> {
    if p.n() != 8 {
        return Err(EnumError::WrongSize(p.n()));
    }
    let form = p.canonical_form();
    Ok(Class8::ALL
        .into_iter()
        .find(|c| c.representative().canonical_form() == form))
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

/// Counts along the enumerate → cover-filter → Möbius-filter chain.
#[derive(Debug)]
pub struct EnumerationStats {
    pub n: usize,
    pub total_posets: u64,
    pub meet_semilattices: u64,
    pub after_cover_filter: u64,
    pub after_mobius_filter: u64,
    /// Survivors of the full chain, canonically ordered.
    pub class_reps: Vec<Poset>,
    /// Class tags for the survivors when `n == 8`.
    pub tags: Vec<Option<Class8>>,
}

pub fn pipeline(n: usize) -> Result<EnumerationStats, EnumError> {
    let enumeration = enumerate(n)?;
    let semis = enumeration.semilattices;
    let after_cover: Vec<Poset> = semis
        .iter()
        .filter(|p| filter_max_cover_at_least(p, 3))
        .cloned()
        .collect();
    let survivors: Vec<Poset> = after_cover
        .iter()
        .filter(|p| passes_mobius_filter(p))
        .cloned()
        .collect();
    let tags = survivors
        .iter()
        .map(|p| if n == 8 { classify_8(p).unwrap() } else { None })
        .collect();
    Ok(EnumerationStats {
        n,
        total_posets: enumeration.total_posets,
        meet_semilattices: semis.len() as u64,
        after_cover_filter: after_cover.len() as u64,
        after_mobius_filter: survivors.len() as u64,
        class_reps: survivors,
        tags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::are_isomorphic;

    /// Brute-force oracle: the transitive strict upper-triangular relations on
    /// `n` elements are exactly the posets in some linear extension; classes
    /// are counted by pairwise permutation-isomorphism, independently of the
    /// canonical-form machinery.
    mod brute {
        pub struct Flat {
            pub n: usize,
            pub lt: Vec<bool>, // strict less, row-major
        }

        impl Flat {
            fn get(&self, i: usize, j: usize) -> bool {
                self.lt[i * self.n + j]
            }

            pub fn is_meet_semilattice(&self) -> bool {
                let leq = |a: usize, b: usize| a == b || self.get(a, b);
                for i in 0..self.n {
                    for j in 0..self.n {
                        let lowers: Vec<usize> =
                            (0..self.n).filter(|&w| leq(w, i) && leq(w, j)).collect();
                        let has_meet = lowers
                            .iter()
                            .any(|&m| lowers.iter().all(|&w| leq(w, m)));
                        if !has_meet {
                            return false;
                        }
                    }
                }
                true
            }

            pub fn isomorphic(&self, other: &Flat) -> bool {
                if self.n != other.n {
                    return false;
                }
                let mut perm: Vec<usize> = (0..self.n).collect();
                permute(&mut perm, 0, &mut |p| {
                    (0..self.n).all(|i| {
                        (0..self.n).all(|j| self.get(i, j) == other.get(p[i], p[j]))
                    })
                })
            }
        }

        fn permute(
            perm: &mut Vec<usize>,
            k: usize,
            check: &mut impl FnMut(&[usize]) -> bool,
        ) -> bool {
            if k == perm.len() {
                return check(perm);
            }
            for i in k..perm.len() {
                perm.swap(k, i);
                if permute(perm, k + 1, check) {
                    perm.swap(k, i);
                    return true;
                }
                perm.swap(k, i);
            }
            false
        }

        /// (poset classes, meet-semilattice classes) on `n` unlabeled points.
        pub fn counts(n: usize) -> (u64, u64) {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                .collect();
            let mut classes: Vec<Flat> = Vec::new();
            for mask in 0u64..1 << pairs.len() {
                let mut lt = vec![false; n * n];
                for (b, &(i, j)) in pairs.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        lt[i * n + j] = true;
                    }
                }
                let flat = Flat { n, lt };
                let transitive = (0..n).all(|i| {
                    (0..n).all(|j| {
                        (0..n).all(|k| !(flat.get(i, j) && flat.get(j, k)) || flat.get(i, k))
                    })
                });
                if !transitive {
                    continue;
                }
                if !classes.iter().any(|c| c.isomorphic(&flat)) {
                    classes.push(flat);
                }
            }
            let semis = classes.iter().filter(|c| c.is_meet_semilattice()).count() as u64;
            (classes.len() as u64, semis)
        }
    }

    #[test]
    fn small_counts_match_brute_force() {
        // Oracle-computed and frozen: poset classes 1, 2, 5, 16, 63 and
        // semilattice classes 1, 1, 2, 5, 15 for n = 1..5.
        let frozen = [(1, 1), (2, 1), (5, 2), (16, 5), (63, 15)];
        for n in 1..=5 {
            let (posets, semis) = brute::counts(n);
            assert_eq!((posets, semis), frozen[n - 1], "brute force at n={n}");
            let e = enumerate(n).unwrap();
            assert_eq!(e.total_posets, posets, "poset classes at n={n}");
            assert_eq!(e.semilattices.len() as u64, semis, "semilattice classes at n={n}");
        }
    }

    #[test]
    fn six_element_counts() {
        let e = enumerate(6).unwrap();
        assert_eq!(e.total_posets, 318);
        assert_eq!(e.semilattices.len(), 53);
    }

    #[test]
    fn yielded_representatives_are_distinct_semilattices() {
        let semis = enumerate_meet_semilattices(5).unwrap();
        let mut forms: Vec<_> = semis.iter().map(|p| p.canonical_form()).collect();
        forms.sort();
        forms.dedup();
        assert_eq!(forms.len(), semis.len());
        assert!(semis.iter().all(|p| p.is_meet_semilattice()));
        // deterministic canonical order
        let again = enumerate_meet_semilattices(5).unwrap();
        let forms2: Vec<_> = again.iter().map(|p| p.canonical_form()).collect();
        let mut sorted = forms2.clone();
        sorted.sort();
        assert_eq!(forms2, sorted);
    }

    #[test]
    fn size_bounds() {
        assert!(matches!(enumerate(0), Err(EnumError::SizeTooLarge(0))));
        assert!(matches!(enumerate(10), Err(EnumError::SizeTooLarge(10))));
    }

    #[test]
    fn cover_filter_examples() {
        let chain: Vec<(usize, usize)> = (1..8).map(|i| (i - 1, i)).collect();
        let chain8 = Poset::from_covers(8, &chain).unwrap();
        assert!(!filter_max_cover_at_least(&chain8, 3));
        assert!(filter_max_cover_at_least(&Class8::J.representative(), 3));
    }

    #[test]
    fn mobius_filter_examples() {
        // In a 3-chain the bottom has μ(0, 2) = 0, covers nothing and is
        // covered by exactly one element, so it is prunable.
        let chain3 = Poset::from_covers(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!filter_no_prunable_zero(&chain3, 2).unwrap());
        // A 2-chain has no zero Möbius value towards the top at all.
        let chain2 = Poset::from_covers(2, &[(0, 1)]).unwrap();
        assert!(filter_no_prunable_zero(&chain2, 1).unwrap());
        assert!(matches!(
            filter_no_prunable_zero(&chain3, 0),
            Err(EnumError::NotMaximal(0))
        ));
        // 8_C contains zero-Möbius elements, but none is prunable.
        assert!(filter_no_prunable_zero(&Class8::C.representative(), 7).unwrap());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_8(&Class8::J.representative()).unwrap(), Some(Class8::J));
        let chain: Vec<(usize, usize)> = (1..8).map(|i| (i - 1, i)).collect();
        let chain8 = Poset::from_covers(8, &chain).unwrap();
        assert_eq!(classify_8(&chain8).unwrap(), None);
        let small = Poset::from_covers(2, &[(0, 1)]).unwrap();
        assert!(matches!(classify_8(&small), Err(EnumError::WrongSize(2))));
    }

    #[test]
    fn builtin_classes_are_valid_and_distinct() {
        let reps: Vec<Poset> = Class8::ALL.iter().map(|c| c.representative()).collect();
        for (i, p) in reps.iter().enumerate() {
            assert!(p.is_meet_semilattice(), "{} must be a meet semilattice", Class8::ALL[i]);
            assert!(filter_max_cover_at_least(p, 3), "{}", Class8::ALL[i]);
            assert!(passes_mobius_filter(p), "{}", Class8::ALL[i]);
            for q in reps.iter().skip(i + 1) {
                assert!(!are_isomorphic(p, q));
            }
        }
    }

    #[test]
    fn pipeline_small() {
        let stats = pipeline(3).unwrap();
        assert_eq!(stats.meet_semilattices, 2);
        let stats = pipeline(1).unwrap();
        assert_eq!(stats.meet_semilattices, 1);
        assert_eq!(stats.total_posets, 1);
    }
}
