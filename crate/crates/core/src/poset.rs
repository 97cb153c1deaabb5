//! Finite posets and meet semilattices.
//!
//! Elements are dense indices `0..n` arranged in a linear extension: `i ≤ j`
//! in the order implies `i <= j` as integers. The Hasse diagram (cover
//! relation) is the stored representation; the reachability closure is
//! computed once at construction and cached.

use crate::bits::Bits;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("cover pair ({0}, {1}) references an element out of range")]
    BadElement(usize, usize),
    #[error("cover relation contains a cycle")]
    CycleDetected,
    #[error("cover pair ({0}, {1}) is implied by other covers (not transitively reduced)")]
    NotReduced(usize, usize),
    #[error("index order is not a linear extension: {0} < {1} in the order but {0} > {1} as indices")]
    BadIndexOrder(usize, usize),
    #[error("poset is not a meet semilattice")]
    NotSemilattice,
}

/// A finite poset given by its Hasse diagram.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    /// Cover pairs `(child, parent)`, sorted lexicographically.
    covers: Vec<(usize, usize)>,
    /// `up[i]` = elements `j` with `i ≤ j` (including `i`).
    up: Vec<Bits>,
    /// `down[j]` = elements `i` with `i ≤ j` (including `j`).
    down: Vec<Bits>,
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poset(n={}, covers={:?})", self.n, self.covers)
    }
}

impl Poset {
    /// Builds a poset from cover pairs, rejecting inputs whose index order is
    /// not a linear extension.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Poset, PosetError> {
        for &(c, p) in covers {
            if c >= n || p >= n {
                return Err(PosetError::BadElement(c, p));
            }
            if c == p {
                return Err(PosetError::CycleDetected);
            }
        }
        let mut pairs: Vec<(usize, usize)> = covers.to_vec();
        pairs.sort_unstable();
        pairs.dedup();
        if let Some(&(c, p)) = pairs.iter().find(|&&(c, p)| c > p) {
            // Distinguish a mere labelling problem from a genuine cycle.
            if is_acyclic(n, &pairs) {
                return Err(PosetError::BadIndexOrder(c, p));
            }
            return Err(PosetError::CycleDetected);
        }
        Self::from_reduced_pairs(n, pairs)
    }

    /// Like [`Poset::from_covers`] but relabels the elements along a
    /// topological order when the given indexing is not a linear extension.
    /// Returns the poset together with the map `old index -> new index`.
    pub fn from_covers_relabeled(
        n: usize,
        covers: &[(usize, usize)],
    ) -> Result<(Poset, Vec<usize>), PosetError> {
        for &(c, p) in covers {
            if c >= n || p >= n {
                return Err(PosetError::BadElement(c, p));
            }
            if c == p {
                return Err(PosetError::CycleDetected);
            }
        }
        let order = topo_order(n, covers).ok_or(PosetError::CycleDetected)?;
        let mut new_of = vec![0usize; n];
        for (pos, &old) in order.iter().enumerate() {
            new_of[old] = pos;
        }
        let remapped: Vec<(usize, usize)> = covers.iter().map(|&(c, p)| (new_of[c], new_of[p])).collect();
        let poset = Self::from_covers(n, &remapped)?;
        Ok((poset, new_of))
    }

    /// Covers must already be sorted, deduplicated and child-below-parent.
    fn from_reduced_pairs(n: usize, pairs: Vec<(usize, usize)>) -> Result<Poset, PosetError> {
        let mut up = vec![Bits::new(n); n];
        for i in (0..n).rev() {
            up[i].set(i);
            for &(c, p) in &pairs {
                if c == i {
                    let parent_up = up[p].clone();
                    up[i].or_assign(&parent_up);
                }
            }
        }
        let mut down = vec![Bits::new(n); n];
        for i in 0..n {
            for j in up[i].ones() {
                down[j].set(i);
            }
        }
        // Transitive reduction: no cover may be implied by two shorter steps.
        for &(c, p) in &pairs {
            let between = up[c].and(&down[p]);
            if between.count_ones() > 2 {
                return Err(PosetError::NotReduced(c, p));
            }
        }
        Ok(Poset {
            n,
            covers: pairs,
            up,
            down,
        })
    }

    /// Used by the enumerator, which extends posets it already knows are valid.
    pub(crate) fn from_trusted_parts(n: usize, covers: Vec<(usize, usize)>, up: Vec<Bits>, down: Vec<Bits>) -> Poset {
        debug_assert!(covers.windows(2).all(|w| w[0] < w[1]));
        Poset { n, covers, up, down }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// `i ≤ j` in the order.
    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].get(j)
    }

    /// `i < j` strictly.
    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub(crate) fn up_mask(&self, i: usize) -> &Bits {
        &self.up[i]
    }

    pub(crate) fn down_mask(&self, i: usize) -> &Bits {
        &self.down[i]
    }

    /// Elements covered by `x` (its lower covers in the Hasse diagram).
    pub fn covers_of(&self, x: usize) -> Vec<usize> {
        self.covers.iter().filter(|&&(_, p)| p == x).map(|&(c, _)| c).collect()
    }

    /// Elements covering `x` (its upper covers).
    pub fn covered_by(&self, x: usize) -> Vec<usize> {
        self.covers.iter().filter(|&&(c, _)| c == x).map(|&(_, p)| p).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.up[x].count_ones() == 1).collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.down[x].count_ones() == 1).collect()
    }

    /// Greatest lower bound of `i` and `j`, when it exists.
    ///
    /// The common lower bounds of `i` and `j` have a maximum iff their
    /// highest-index member dominates all of them (the linear extension puts
    /// the meet last among them).
    pub fn meet(&self, i: usize, j: usize) -> Option<usize> {
        let common = self.down[i].and(&self.down[j]);
        let top = common.highest_set()?;
        if common.is_subset_of(&self.down[top]) {
            Some(top)
        } else {
            None
        }
    }

    pub fn is_meet_semilattice(&self) -> bool {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.meet(i, j).is_none() {
                    return false;
                }
            }
        }
        true
    }

    /// Meet of all elements covered by `x`; `x` itself when it covers nothing.
    pub fn xi(&self, x: usize) -> Result<usize, PosetError> {
        let mut acc: Option<usize> = None;
        for c in self.covers_of(x) {
            acc = Some(match acc {
                None => c,
                Some(a) => self.meet(a, c).ok_or(PosetError::NotSemilattice)?,
            });
        }
        Ok(acc.unwrap_or(x))
    }

    /// A meet-closed set is a ∧-tree iff every element covers at most one.
    pub fn is_wedge_tree(&self) -> Result<bool, PosetError> {
        if !self.is_meet_semilattice() {
            return Err(PosetError::NotSemilattice);
        }
        let mut cover_count = vec![0usize; self.n];
        for &(_, p) in &self.covers {
            cover_count[p] += 1;
        }
        Ok(cover_count.iter().all(|&c| c <= 1))
    }

    /// True iff `μ(z, x) > 0` for some `z ≠ x`.
    pub fn has_positive_nontrivial_mobius(&self) -> bool {
        let mu = MobiusTable::compute(self);
        for z in 0..self.n {
            for x in 0..self.n {
                if z != x && mu.value(z, x) > 0 {
                    return true;
                }
            }
        }
        false
    }

    /// Longest-chain height of each element (minimal elements have height 0).
    /// Children precede parents in index order, so one ascending pass suffices.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.n];
        for p in 0..self.n {
            let mut best = 0;
            for &(c, q) in &self.covers {
                if q == p {
                    best = best.max(h[c] + 1);
                }
            }
            h[p] = best;
        }
        h
    }

    /// Deletes the last element, which must be maximal. Used by the
    /// enumerator to walk back along the construction path.
    pub(crate) fn delete_last(&self) -> Poset {
        let n = self.n - 1;
        debug_assert!(self.up[n].count_ones() == 1, "last element must be maximal");
        let covers: Vec<(usize, usize)> = self
            .covers
            .iter()
            .copied()
            .filter(|&(_, p)| p != n)
            .collect();
        let mut up = Vec::with_capacity(n);
        let mut down = Vec::with_capacity(n);
        for i in 0..n {
            let mut u = Bits::new(n);
            for j in self.up[i].ones().filter(|&j| j < n) {
                u.set(j);
            }
            up.push(u);
            let mut d = Bits::new(n);
            for j in self.down[i].ones() {
                d.set(j);
            }
            down.push(d);
        }
        Poset::from_trusted_parts(n, covers, up, down)
    }

    /// Applies a relabelling `new = perm[old]`. `perm` must map the order to a
    /// linear extension.
    pub fn relabel(&self, perm: &[usize]) -> Poset {
        let mut covers: Vec<(usize, usize)> = self
            .covers
            .iter()
            .map(|&(c, p)| (perm[c], perm[p]))
            .collect();
        covers.sort_unstable();
        let mut up = vec![Bits::new(self.n); self.n];
        let mut down = vec![Bits::new(self.n); self.n];
        for i in 0..self.n {
            for j in self.up[i].ones() {
                up[perm[i]].set(perm[j]);
            }
            for j in self.down[i].ones() {
                down[perm[i]].set(perm[j]);
            }
        }
        Poset::from_trusted_parts(self.n, covers, up, down)
    }
}

fn is_acyclic(n: usize, pairs: &[(usize, usize)]) -> bool {
    topo_order(n, pairs).is_some()
}

/// Kahn's algorithm, preferring smaller original indices for determinism.
fn topo_order(n: usize, pairs: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    for &(_, p) in pairs {
        indeg[p] += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut ready: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    ready.sort_unstable_by(|a, b| b.cmp(a));
    while let Some(i) = ready.pop() {
        order.push(i);
        for &(c, p) in pairs {
            if c == i {
                indeg[p] -= 1;
                if indeg[p] == 0 {
                    // keep the stack sorted descending so we pop the smallest
                    let pos = ready.partition_point(|&x| x > p);
                    ready.insert(pos, p);
                }
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// The full table of Möbius function values `μ(z, x)` of a poset.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MobiusTable {
    n: usize,
    values: Vec<i64>,
}

impl MobiusTable {
    /// Bottom-up dynamic programming over the recursion
    /// `μ(z, x) = −Σ_{z < v ≤ x} μ(v, x)`.
    pub fn compute(p: &Poset) -> MobiusTable {
        let n = p.n();
        let mut values = vec![0i64; n * n];
        for x in 0..n {
            values[x * n + x] = 1;
            for z in (0..x).rev() {
                if !p.leq(z, x) {
                    continue;
                }
                let mut s = 0i64;
                for v in p.up_mask(z).and(p.down_mask(x)).ones() {
                    if v != z {
                        s += values[v * n + x];
                    }
                }
                values[z * n + x] = -s;
            }
        }
        MobiusTable { n, values }
    }

    /// The companion recursion `μ(z, x) = −Σ_{z ≤ v < x} μ(z, v)`; the two
    /// agree on every poset and the tests hold us to that.
    pub fn compute_dual(p: &Poset) -> MobiusTable {
        let n = p.n();
        let mut values = vec![0i64; n * n];
        for z in 0..n {
            values[z * n + z] = 1;
            for x in (z + 1)..n {
                if !p.leq(z, x) {
                    continue;
                }
                let mut s = 0i64;
                for v in p.up_mask(z).and(p.down_mask(x)).ones() {
                    if v != x {
                        s += values[z * n + v];
                    }
                }
                values[z * n + x] = -s;
            }
        }
        MobiusTable { n, values }
    }

    /// Fast path that skips `z` outside `[ξ(x), x]`, where the value is zero.
    /// The plain computation stays the source of truth; this one exists so the
    /// zero structure itself can be exercised as an optimization.
    pub fn compute_pruned(p: &Poset) -> Result<MobiusTable, PosetError> {
        let n = p.n();
        let mut values = vec![0i64; n * n];
        for x in 0..n {
            values[x * n + x] = 1;
            let xi = p.xi(x)?;
            for z in (0..x).rev() {
                if !(p.leq(z, x) && p.leq(xi, z)) {
                    continue;
                }
                let mut s = 0i64;
                for v in p.up_mask(z).and(p.down_mask(x)).ones() {
                    if v != z {
                        s += values[v * n + x];
                    }
                }
                values[z * n + x] = -s;
            }
        }
        Ok(MobiusTable { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn value(&self, z: usize, x: usize) -> i64 {
        self.values[z * self.n + x]
    }
}

// ---------------------------------------------------------------------------
// Canonical forms
// ---------------------------------------------------------------------------

/// Isomorphism-invariant encoding of a poset: two posets have equal canonical
/// forms iff they are isomorphic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl Poset {
    /// Canonical byte string: size header plus the lexicographically minimal
    /// cover-matrix encoding over all colour-preserving relabellings.
    pub fn canonical_form(&self) -> CanonicalForm {
        self.canonicalize().1
    }

    /// The canonically relabelled poset.
    pub fn canonical_poset(&self) -> Poset {
        self.canonicalize().0
    }

    /// Returns `(canonical poset, canonical form, old -> new index map)`.
    pub fn canonicalize(&self) -> (Poset, CanonicalForm, Vec<usize>) {
        let perm = self.canonical_perm();
        let relabeled = self.relabel(&perm);
        let bits = cover_bits(&relabeled);
        (relabeled, encode_form(self.n, &bits), perm)
    }

    /// Finds the relabelling (old index -> canonical position) minimizing the
    /// cover-matrix encoding, by iterative colour refinement followed by
    /// backtracking within colour classes.
    fn canonical_perm(&self) -> Vec<usize> {
        let n = self.n;
        if n <= 1 {
            return vec![0; n];
        }
        let colors = self.refined_colors();
        // Class-id per element, classes already height-compatible.
        let mut class_order: Vec<usize> = (0..n).collect();
        class_order.sort_by_key(|&i| (colors[i], i));
        // positions grouped by class: position p takes an element of class_of_pos[p]
        let class_of_pos: Vec<u32> = class_order.iter().map(|&i| colors[i]).collect();

        // Twins: interchangeable elements (equal cover neighbourhoods).
        let twin = self.twin_classes();

        let mut best: Option<(Vec<bool>, Vec<usize>)> = None;
        let mut chosen: Vec<usize> = Vec::with_capacity(n);
        let mut used = vec![false; n];
        let mut bits: Vec<bool> = Vec::with_capacity(n * (n - 1) / 2);
        let is_cover = |c: usize, p: usize| self.covers.binary_search(&(c, p)).is_ok();

        // prefix_cmp: Ordering of bits vs best so far (Equal while tied).
        fn dfs(
            n: usize,
            colors: &[u32],
            class_of_pos: &[u32],
            twin: &[u32],
            is_cover: &dyn Fn(usize, usize) -> bool,
            chosen: &mut Vec<usize>,
            used: &mut Vec<bool>,
            bits: &mut Vec<bool>,
            prefix_less: bool,
            best: &mut Option<(Vec<bool>, Vec<usize>)>,
        ) {
            let pos = chosen.len();
            if pos == n {
                if prefix_less || best.is_none() {
                    *best = Some((bits.clone(), chosen.clone()));
                }
                return;
            }
            let want = class_of_pos[pos];
            let mut tried_twins: Vec<u32> = Vec::new();
            for cand in 0..n {
                if used[cand] || colors[cand] != want {
                    continue;
                }
                if tried_twins.contains(&twin[cand]) {
                    continue;
                }
                tried_twins.push(twin[cand]);
                // new bits for this position
                let mark = bits.len();
                let mut less = prefix_less;
                let mut worse = false;
                for q in 0..pos {
                    let b = is_cover(chosen[q], cand);
                    bits.push(b);
                    if !less {
                        if let Some((bb, _)) = best {
                            let prev = bb[bits.len() - 1];
                            if b != prev {
                                if b {
                                    worse = true; // 1 > 0: prefix exceeds best
                                } else {
                                    less = true;
                                }
                                if worse {
                                    break;
                                }
                            }
                        }
                    }
                }
                if !worse {
                    chosen.push(cand);
                    used[cand] = true;
                    dfs(n, colors, class_of_pos, twin, is_cover, chosen, used, bits, less, best);
                    used[cand] = false;
                    chosen.pop();
                }
                bits.truncate(mark);
            }
        }

        dfs(
            n,
            &colors,
            &class_of_pos,
            &twin,
            &is_cover,
            &mut chosen,
            &mut used,
            &mut bits,
            false,
            &mut best,
        );
        let order = best.expect("at least one labelling exists").1;
        // order[pos] = old element; we need old -> new
        let mut perm = vec![0usize; n];
        for (pos, &old) in order.iter().enumerate() {
            perm[old] = pos;
        }
        perm
    }

    /// Iterated colour refinement. Heights come first in every colour key so
    /// colour order is always compatible with some linear extension.
    fn refined_colors(&self) -> Vec<u32> {
        let n = self.n;
        let heights = self.heights();
        let mut keys: Vec<(Vec<u64>, usize)> = (0..n)
            .map(|i| {
                (
                    vec![
                        heights[i] as u64,
                        self.down[i].count_ones() as u64,
                        self.up[i].count_ones() as u64,
                        self.covers_of(i).len() as u64,
                        self.covered_by(i).len() as u64,
                    ],
                    i,
                )
            })
            .collect();
        let mut colors = rank_colors(&mut keys);
        loop {
            let mut keys: Vec<(Vec<u64>, usize)> = (0..n)
                .map(|i| {
                    let mut low: Vec<u64> = self.covers_of(i).iter().map(|&c| colors[c] as u64).collect();
                    low.sort_unstable();
                    let mut high: Vec<u64> = self.covered_by(i).iter().map(|&c| colors[c] as u64).collect();
                    high.sort_unstable();
                    let mut key = vec![colors[i] as u64, u64::MAX];
                    key.extend(low);
                    key.push(u64::MAX);
                    key.extend(high);
                    (key, i)
                })
                .collect();
            let next = rank_colors(&mut keys);
            if next == colors {
                return colors;
            }
            colors = next;
        }
    }

    /// Partition into twin classes: `u` and `v` are twins when swapping them
    /// is an automorphism (equal lower and upper cover sets).
    fn twin_classes(&self) -> Vec<u32> {
        let n = self.n;
        let mut sig: Vec<(Vec<usize>, Vec<usize>, usize)> = (0..n)
            .map(|i| {
                let mut lo = self.covers_of(i);
                lo.sort_unstable();
                let mut hi = self.covered_by(i);
                hi.sort_unstable();
                (lo, hi, i)
            })
            .collect();
        sig.sort();
        let mut classes = vec![0u32; n];
        let mut next = 0u32;
        for w in 0..sig.len() {
            if w > 0 && (&sig[w].0, &sig[w].1) != (&sig[w - 1].0, &sig[w - 1].1) {
                next += 1;
            }
            classes[sig[w].2] = next;
        }
        classes
    }
}

fn rank_colors(keys: &mut [(Vec<u64>, usize)]) -> Vec<u32> {
    keys.sort();
    let mut colors = vec![0u32; keys.len()];
    let mut rank = 0u32;
    for w in 0..keys.len() {
        if w > 0 && keys[w].0 != keys[w - 1].0 {
            rank += 1;
        }
        colors[keys[w].1] = rank;
    }
    colors
}

/// Strict-upper-triangle cover bits of a poset in index order.
fn cover_bits(p: &Poset) -> Vec<bool> {
    let n = p.n();
    let mut bits = Vec::with_capacity(n * (n - 1) / 2);
    for col in 1..n {
        for row in 0..col {
            bits.push(p.covers().binary_search(&(row, col)).is_ok());
        }
    }
    bits
}

fn encode_form(n: usize, bits: &[bool]) -> CanonicalForm {
    let mut bytes = Vec::with_capacity(4 + bits.len().div_ceil(8));
    bytes.extend_from_slice(&(n as u32).to_be_bytes());
    let mut cur = 0u8;
    for (i, &b) in bits.iter().enumerate() {
        if b {
            cur |= 1 << (i % 8);
        }
        if i % 8 == 7 {
            bytes.push(cur);
            cur = 0;
        }
    }
    if bits.len() % 8 != 0 {
        bytes.push(cur);
    }
    CanonicalForm(bytes)
}

pub fn are_isomorphic(p: &Poset, q: &Poset) -> bool {
    p.n() == q.n() && p.canonical_form() == q.canonical_form()
}
