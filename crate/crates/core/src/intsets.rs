//! GCD-closed sets of positive integers, their divisibility posets, closure
//! predicates, squarefree realizations of abstract semilattices, prime-power
//! inflation and the LCM-closed dual transform.

use crate::poset::{Poset, PosetError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetError {
    #[error("set elements must be positive")]
    NonPositive,
    #[error("set must be non-empty")]
    Empty,
    #[error("set is not GCD closed: gcd of elements {0} and {1} is missing")]
    NotGcdClosed(usize, usize),
    #[error("poset is not a meet semilattice")]
    NotSemilattice,
    #[error("bad prime list: {0}")]
    BadPrimes(String),
    #[error("index {0} does not name an inflatable element")]
    BadIndex(usize),
    #[error("element at index {0} does not divide the maximum")]
    NoTopDivisor(usize),
}

impl From<PosetError> for SetError {
    fn from(e: PosetError) -> Self {
        match e {
            PosetError::NotSemilattice => SetError::NotSemilattice,
            other => panic!("unexpected poset error from a divisibility order: {other}"),
        }
    }
}

/// A strictly increasing set of positive integers closed under pairwise gcd.
///
/// Sorted order is automatically a linear extension of divisibility, so the
/// indices of a `GcdClosedSet` line up with the element indices of its
/// divisibility poset.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GcdClosedSet {
    elems: Vec<BigInt>,
}

impl GcdClosedSet {
    /// Validates positivity and gcd-closure; sorts and deduplicates.
    pub fn try_new(mut elems: Vec<BigInt>) -> Result<Self, SetError> {
        if elems.iter().any(|x| x.sign() != num_bigint::Sign::Plus) {
            return Err(SetError::NonPositive);
        }
        if elems.is_empty() {
            return Err(SetError::Empty);
        }
        elems.sort();
        elems.dedup();
        for i in 0..elems.len() {
            for j in (i + 1)..elems.len() {
                let g = elems[i].gcd(&elems[j]);
                if elems.binary_search(&g).is_err() {
                    return Err(SetError::NotGcdClosed(i, j));
                }
            }
        }
        Ok(GcdClosedSet { elems })
    }

    pub fn from_u64s(xs: &[u64]) -> Result<Self, SetError> {
        Self::try_new(xs.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn elems(&self) -> &[BigInt] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn max_element(&self) -> &BigInt {
        self.elems.last().expect("non-empty")
    }

    pub fn index_of(&self, x: &BigInt) -> Option<usize> {
        self.elems.binary_search(x).ok()
    }

    /// The poset on indices with `i ≤ j` iff `x_i | x_j`.
    pub fn divisibility_poset(&self) -> Poset {
        let n = self.elems.len();
        let divides = |i: usize, j: usize| (&self.elems[j] % &self.elems[i]).is_zero();
        let mut covers = Vec::new();
        for j in 0..n {
            for i in 0..j {
                if divides(i, j) {
                    let implied = (i + 1..j).any(|k| divides(i, k) && divides(k, j));
                    if !implied {
                        covers.push((i, j));
                    }
                }
            }
        }
        Poset::from_covers(n, &covers).expect("divisibility order is a valid poset")
    }
}

/// Smallest GCD-closed superset of the input, sorted and deduplicated.
pub fn gcd_closure(xs: &[BigInt]) -> Result<GcdClosedSet, SetError> {
    if xs.is_empty() {
        return Err(SetError::Empty);
    }
    if xs.iter().any(|x| x.sign() != num_bigint::Sign::Plus) {
        return Err(SetError::NonPositive);
    }
    let mut elems: Vec<BigInt> = xs.to_vec();
    elems.sort();
    elems.dedup();
    loop {
        let mut new: Vec<BigInt> = Vec::new();
        for i in 0..elems.len() {
            for j in (i + 1)..elems.len() {
                let g = elems[i].gcd(&elems[j]);
                if elems.binary_search(&g).is_err() && !new.contains(&g) {
                    new.push(g);
                }
            }
        }
        if new.is_empty() {
            return Ok(GcdClosedSet { elems });
        }
        elems.extend(new);
        elems.sort();
        elems.dedup();
    }
}

fn sorted_unique(xs: &[BigInt]) -> Vec<BigInt> {
    let mut v = xs.to_vec();
    v.sort();
    v.dedup();
    v
}

pub fn is_gcd_closed(xs: &[BigInt]) -> bool {
    let v = sorted_unique(xs);
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            if v.binary_search(&v[i].gcd(&v[j])).is_err() {
                return false;
            }
        }
    }
    true
}

pub fn is_lcm_closed(xs: &[BigInt]) -> bool {
    let v = sorted_unique(xs);
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            if v.binary_search(&v[i].lcm(&v[j])).is_err() {
                return false;
            }
        }
    }
    true
}

/// Factor closed: every divisor of every element belongs to the set. Divisors
/// are enumerated by trial division, which is fine for the moderate elements
/// this is used on.
pub fn is_factor_closed(xs: &[BigInt]) -> bool {
    let v = sorted_unique(xs);
    for x in &v {
        for d in divisors_of(x) {
            if v.binary_search(&d).is_err() {
                return false;
            }
        }
    }
    true
}

/// All divisors of `x` by trial division, ascending.
pub fn divisors_of(x: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    loop {
        let dd = &d * &d;
        if dd > *x {
            break;
        }
        if (x % &d).is_zero() {
            small.push(d.clone());
            if dd != *x {
                large.push(x / &d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

// ---------------------------------------------------------------------------
// Squarefree realization and inflation
// ---------------------------------------------------------------------------

/// A GCD-closed integer model of an abstract meet semilattice: element `i` of
/// the source poset corresponds to `base.elems()[poset_to_set[i]]`.
#[derive(Clone, Debug)]
pub struct Realization {
    pub base: GcdClosedSet,
    /// Prime assigned to each poset element; element 0 (the minimum) gets 1.
    pub primes: Vec<BigInt>,
    /// Base-set position -> source poset element.
    pub iso: Vec<usize>,
    /// Source poset element -> base-set position.
    pub poset_to_set: Vec<usize>,
}

fn is_small_prime(p: &BigInt) -> bool {
    if *p < BigInt::from(2) {
        return false;
    }
    let mut d = BigInt::from(2);
    loop {
        let dd = &d * &d;
        if dd > *p {
            return true;
        }
        if (p % &d).is_zero() {
            return false;
        }
        d += 1;
    }
}

/// The first `k` odd primes 3, 5, 7, ...
pub fn default_odd_primes(k: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(k);
    let mut c = BigInt::from(3);
    while out.len() < k {
        if is_small_prime(&c) {
            out.push(c.clone());
        }
        c += 2;
    }
    out
}

/// Builds a squarefree GCD-closed set whose divisibility order is isomorphic
/// to `l`: the minimum becomes 1 and element `i` becomes
/// `p_i · lcm { value(j) : j < i, j ≤ i in the order }`.
///
/// Default primes are odd, so default realizations are odd sets.
pub fn realize_squarefree(l: &Poset, primes: Option<&[BigInt]>) -> Result<Realization, SetError> {
    let n = l.n();
    if !l.is_meet_semilattice() {
        return Err(SetError::NotSemilattice);
    }
    let supplied: Vec<BigInt> = match primes {
        Some(ps) => {
            if ps.len() + 1 < n {
                return Err(SetError::BadPrimes(format!(
                    "need at least {} primes, got {}",
                    n - 1,
                    ps.len()
                )));
            }
            let mut seen = ps[..n - 1].to_vec();
            seen.sort();
            seen.dedup();
            if seen.len() + 1 != n {
                return Err(SetError::BadPrimes("primes must be distinct".into()));
            }
            if let Some(bad) = ps[..n - 1].iter().find(|p| !is_small_prime(p)) {
                return Err(SetError::BadPrimes(format!("{bad} is not prime")));
            }
            ps[..n - 1].to_vec()
        }
        None => default_odd_primes(n.saturating_sub(1)),
    };
    let mut prime_of = vec![BigInt::one(); n];
    for i in 1..n {
        prime_of[i] = supplied[i - 1].clone();
    }
    let mut value = vec![BigInt::one(); n];
    for i in 1..n {
        let mut acc = BigInt::one();
        for j in 0..i {
            if l.leq(j, i) {
                acc = acc.lcm(&value[j]);
            }
        }
        value[i] = &prime_of[i] * acc;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| value[a].cmp(&value[b]));
    let mut poset_to_set = vec![0usize; n];
    for (pos, &elem) in order.iter().enumerate() {
        poset_to_set[elem] = pos;
    }
    let base = GcdClosedSet::try_new(value).expect("squarefree realization is GCD closed");
    Ok(Realization {
        base,
        primes: prime_of,
        iso: order,
        poset_to_set,
    })
}

impl Realization {
    /// Value of a source poset element.
    pub fn value_of(&self, poset_elem: usize) -> &BigInt {
        &self.base.elems()[self.poset_to_set[poset_elem]]
    }

    /// Multiplies every multiple of the chosen element by `p_i^power`, where
    /// `p_i` is the prime the realization assigned to it. `set_index` names
    /// a position in the sorted base set; the minimum (value 1) carries no
    /// prime and cannot be inflated.
    pub fn inflate(&self, set_index: usize, power: u32) -> Result<GcdClosedSet, SetError> {
        Ok(self.inflate_tracked(set_index, power)?.0)
    }

    /// Like [`Realization::inflate`], also returning the map
    /// `old sorted position -> new sorted position`.
    pub fn inflate_tracked(
        &self,
        set_index: usize,
        power: u32,
    ) -> Result<(GcdClosedSet, Vec<usize>), SetError> {
        let n = self.base.len();
        if set_index >= n || power == 0 {
            return Err(SetError::BadIndex(set_index));
        }
        let elem = self.iso[set_index];
        if elem == 0 {
            // the minimum is 1 and has no assigned prime
            return Err(SetError::BadIndex(set_index));
        }
        let p = &self.primes[elem];
        let scale = p.pow(power);
        let pivot = &self.base.elems()[set_index];
        let scaled: Vec<BigInt> = self
            .base
            .elems()
            .iter()
            .map(|v| {
                if (v % pivot).is_zero() {
                    v * &scale
                } else {
                    v.clone()
                }
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| scaled[a].cmp(&scaled[b]));
        let mut old_to_new = vec![0usize; n];
        for (new_pos, &old_pos) in order.iter().enumerate() {
            old_to_new[old_pos] = new_pos;
        }
        let set = GcdClosedSet::try_new(scaled).expect("inflation preserves GCD closure");
        Ok((set, old_to_new))
    }
}

// ---------------------------------------------------------------------------
// Dual transform
// ---------------------------------------------------------------------------

/// Maps `{x_1, ..., x_n}` with every element dividing `x_n` to the LCM-closed
/// set `{x_n / x_i}`, sorted ascending.
pub fn dual_lcm_closed(s: &GcdClosedSet) -> Result<Vec<BigInt>, SetError> {
    let top = s.max_element().clone();
    let mut out = Vec::with_capacity(s.len());
    for (i, x) in s.elems().iter().enumerate() {
        if !(&top % x).is_zero() {
            return Err(SetError::NoTopDivisor(i));
        }
        out.push(&top / x);
    }
    out.sort();
    Ok(out)
}

// ---------------------------------------------------------------------------
// Named sets
// ---------------------------------------------------------------------------

/// The odd nine-element GCD-closed set whose LCM matrix is singular:
/// {1, 3, 5, 7, 195, 291, 1407, 4025, 1020180525}.
pub fn odd_singular_nine_set() -> GcdClosedSet {
    odd_singular_nine_set_q(1).expect("base set is GCD closed")
}

/// The q-scaled variant {1, 3, 5, 7, 195, 291, 1407, 4025q, 1020180525q};
/// for odd q > 1 coprime to the other elements it stays odd and GCD closed
/// while the singular exponent moves above 1.
pub fn odd_singular_nine_set_q(q: u64) -> Result<GcdClosedSet, SetError> {
    let q = BigInt::from(q);
    let mut elems: Vec<BigInt> = [1u64, 3, 5, 7, 195, 291, 1407]
        .iter()
        .map(|&x| BigInt::from(x))
        .collect();
    elems.push(BigInt::from(4025u64) * &q);
    elems.push(BigInt::from(1020180525u64) * &q);
    GcdClosedSet::try_new(elems)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{are_isomorphic, MobiusTable};

    fn big(x: u64) -> BigInt {
        BigInt::from(x)
    }

    fn bigs(xs: &[u64]) -> Vec<BigInt> {
        xs.iter().map(|&x| big(x)).collect()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(gcd_closure(&bigs(&[6, 10])).unwrap().elems(), bigs(&[2, 6, 10]));
        assert_eq!(
            gcd_closure(&bigs(&[1, 3, 5, 45])).unwrap().elems(),
            bigs(&[1, 3, 5, 45])
        );
        assert_eq!(
            gcd_closure(&bigs(&[4, 6, 9])).unwrap().elems(),
            bigs(&[1, 2, 3, 4, 6, 9])
        );
        assert_eq!(gcd_closure(&bigs(&[2, 0])), Err(SetError::NonPositive));
        assert_eq!(gcd_closure(&[]), Err(SetError::Empty));
    }

    #[test]
    fn closure_idempotent_and_monotone() {
        for xs in [bigs(&[12, 18, 20]), bigs(&[7, 11]), bigs(&[30, 42, 70, 105])] {
            let c = gcd_closure(&xs).unwrap();
            let c2 = gcd_closure(c.elems()).unwrap();
            assert_eq!(c, c2);
            assert!(xs.iter().all(|x| c.elems().contains(x)));
            assert!(is_gcd_closed(c.elems()));
        }
    }

    #[test]
    fn closure_predicates() {
        assert!(is_factor_closed(&bigs(&[1, 2, 3, 4, 6, 12])));
        assert!(!is_factor_closed(&bigs(&[1, 3, 45])));
        assert!(is_gcd_closed(&bigs(&[1, 3, 5, 45])));
        assert!(!is_lcm_closed(&bigs(&[1, 3, 5, 45])));
        assert!(is_lcm_closed(&bigs(&[1, 9, 15, 45])));
        assert!(!is_gcd_closed(&bigs(&[6, 10])));
    }

    #[test]
    fn validation() {
        assert!(GcdClosedSet::from_u64s(&[1, 3, 5, 45]).is_ok());
        assert!(matches!(
            GcdClosedSet::from_u64s(&[6, 10]),
            Err(SetError::NotGcdClosed(_, _))
        ));
    }

    #[test]
    fn divisibility_posets() {
        let diamond = Poset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let s = GcdClosedSet::from_u64s(&[1, 3, 5, 45]).unwrap();
        assert!(are_isomorphic(&s.divisibility_poset(), &diamond));

        let chain4: Vec<(usize, usize)> = (1..4).map(|i| (i - 1, i)).collect();
        let chain = Poset::from_covers(4, &chain4).unwrap();
        let s = GcdClosedSet::from_u64s(&[1, 2, 4, 8]).unwrap();
        assert!(are_isomorphic(&s.divisibility_poset(), &chain));
    }

    #[test]
    fn nine_set_poset_and_mobius() {
        let s = odd_singular_nine_set();
        let p = s.divisibility_poset();
        assert!(p.is_meet_semilattice());
        let mu = MobiusTable::compute(&p);
        // column towards the maximum, in element order
        // 1, 3, 5, 7, 195, 291, 1407, 4025, 1020180525
        let col: Vec<i64> = (0..9).map(|z| mu.value(z, 8)).collect();
        assert_eq!(col, vec![-1, 2, 1, 1, -1, -1, -1, -1, 1]);
    }

    #[test]
    fn realize_diamond_and_chain() {
        let diamond = Poset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let r = realize_squarefree(&diamond, Some(&bigs(&[3, 5, 7]))).unwrap();
        assert_eq!(r.base.elems(), bigs(&[1, 3, 5, 105]));
        assert!(are_isomorphic(&r.base.divisibility_poset(), &diamond));

        let chain3 = Poset::from_covers(3, &[(0, 1), (1, 2)]).unwrap();
        let r = realize_squarefree(&chain3, Some(&bigs(&[3, 5]))).unwrap();
        assert_eq!(r.base.elems(), bigs(&[1, 3, 15]));

        let single = Poset::from_covers(1, &[]).unwrap();
        let r = realize_squarefree(&single, None).unwrap();
        assert_eq!(r.base.elems(), bigs(&[1]));
    }

    #[test]
    fn realize_rejects_bad_input() {
        let anti = Poset::from_covers(2, &[]).unwrap();
        assert_eq!(
            realize_squarefree(&anti, None).unwrap_err(),
            SetError::NotSemilattice
        );
        let chain3 = Poset::from_covers(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            realize_squarefree(&chain3, Some(&bigs(&[3]))),
            Err(SetError::BadPrimes(_))
        ));
        assert!(matches!(
            realize_squarefree(&chain3, Some(&bigs(&[3, 3]))),
            Err(SetError::BadPrimes(_))
        ));
        assert!(matches!(
            realize_squarefree(&chain3, Some(&bigs(&[3, 15]))),
            Err(SetError::BadPrimes(_))
        ));
    }

    /// Sorted base order and poset order can disagree on incomparable
    /// elements; the iso maps must reconcile them.
    #[test]
    fn realize_tracks_value_order() {
        let v = Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap();
        let r = realize_squarefree(&v, Some(&bigs(&[5, 3]))).unwrap();
        assert_eq!(r.base.elems(), bigs(&[1, 3, 5]));
        // poset element 1 got prime 5, so it sits at sorted position 2
        assert_eq!(r.poset_to_set[1], 2);
        assert_eq!(r.iso[2], 1);
        assert!(are_isomorphic(&r.base.divisibility_poset(), &v));
    }

    #[test]
    fn inflate_examples() {
        let diamond = Poset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let r = realize_squarefree(&diamond, Some(&bigs(&[3, 5, 7]))).unwrap();
        // only the top is a multiple of 105
        assert_eq!(r.inflate(3, 2).unwrap().elems(), bigs(&[1, 3, 5, 5145]));
        assert_eq!(r.inflate(0, 1).unwrap_err(), SetError::BadIndex(0));

        let chain3 = Poset::from_covers(3, &[(0, 1), (1, 2)]).unwrap();
        let r = realize_squarefree(&chain3, Some(&bigs(&[3, 5]))).unwrap();
        assert_eq!(r.inflate(1, 1).unwrap().elems(), bigs(&[1, 9, 45]));
    }

    #[test]
    fn inflation_can_reorder() {
        // V with two arms: inflating the small arm pushes it past the other
        let v = Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap();
        let r = realize_squarefree(&v, Some(&bigs(&[3, 5]))).unwrap();
        assert_eq!(r.base.elems(), bigs(&[1, 3, 5]));
        let (s, map) = r.inflate_tracked(1, 2).unwrap();
        assert_eq!(s.elems(), bigs(&[1, 5, 27]));
        assert_eq!(map, vec![0, 2, 1]);
        assert!(are_isomorphic(&s.divisibility_poset(), &v));
    }

    #[test]
    fn dual_examples() {
        let s = GcdClosedSet::from_u64s(&[1, 3, 5, 45]).unwrap();
        assert_eq!(dual_lcm_closed(&s).unwrap(), bigs(&[1, 9, 15, 45]));
        let c = GcdClosedSet::from_u64s(&[1, 2, 4]).unwrap();
        assert_eq!(dual_lcm_closed(&c).unwrap(), bigs(&[1, 2, 4]));

        let nine = odd_singular_nine_set();
        let dual = dual_lcm_closed(&nine).unwrap();
        assert_eq!(
            dual,
            bigs(&[
                1, 253461, 725075, 3505775, 5231695, 145740075, 204036105, 340060175,
                1020180525
            ])
        );
        assert!(is_lcm_closed(&dual));
        assert!(dual.iter().all(|x| !(x % big(2)).is_zero()));

        // applying the transform twice returns the original set
        let top = nine.max_element().clone();
        let mut back: Vec<BigInt> = dual.iter().map(|x| &top / x).collect();
        back.sort();
        assert_eq!(back, nine.elems());
    }

    #[test]
    fn dual_requires_top_divisor() {
        let t = GcdClosedSet::from_u64s(&[1, 2, 3]).unwrap();
        assert!(matches!(dual_lcm_closed(&t), Err(SetError::NoTopDivisor(_))));
    }

    #[test]
    fn nine_set_q_variant() {
        let s = odd_singular_nine_set_q(11).unwrap();
        assert_eq!(s.elems()[7], big(44275));
        assert_eq!(s.elems()[8], big(11221985775));
        assert!(is_gcd_closed(s.elems()));
        let p = s.divisibility_poset();
        let base = odd_singular_nine_set().divisibility_poset();
        assert!(are_isomorphic(&p, &base));
    }
}
