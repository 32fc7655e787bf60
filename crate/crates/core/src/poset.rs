//! Finite posets with bit-matrix reachability.
//!
//! Elements are dense integer indices; labels are metadata only. Subsets of a
//! poset are `u64` bit masks, which keeps upset/downset arithmetic down to a
//! few word operations.

use crate::error::{Error, Result};
use std::collections::HashMap;

/// Hard size limit so that subsets fit in a single machine word.
pub const MAX_ELEMENTS: usize = 64;

/// A finite partial order. `up[i]` is the mask of `{j : i <= j}` (including
/// `i` itself), `down[i]` the mask of `{j : j <= i}`. Both are kept in sync.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    up: Vec<u64>,
    down: Vec<u64>,
    labels: Vec<String>,
}

/// A subset of a specific poset. Carries a fingerprint of its owner so that
/// subsets cannot silently be used against a different poset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PosetSubset {
    pub(crate) owner: u64,
    pub(crate) mask: u64,
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poset({}; covers: ", self.n)?;
        for (a, b) in self.covers() {
            write!(f, "{}<{} ", self.labels[a], self.labels[b])?;
        }
        write!(f, ")")
    }
}

fn mask_full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Builds a poset from labels and generating pairs `(lower, upper)`.
/// The order is the reflexive-transitive closure of the pairs; a cycle is an
/// error. The pairs need not form the cover relation.
pub fn build_poset<S: AsRef<str>>(labels: &[S], covers: &[(S, S)]) -> Result<Poset> {
    if labels.len() > MAX_ELEMENTS {
        return Err(Error::PosetTooLarge(labels.len()));
    }
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.as_ref(), i).is_some() {
            return Err(Error::DuplicateLabel(l.as_ref().to_string()));
        }
    }
    let mut adj = vec![0u64; labels.len()];
    for (a, b) in covers {
        let ia = *index
            .get(a.as_ref())
            .ok_or_else(|| Error::DanglingReference(a.as_ref().to_string()))?;
        let ib = *index
            .get(b.as_ref())
            .ok_or_else(|| Error::DanglingReference(b.as_ref().to_string()))?;
        adj[ia] |= 1 << ib;
    }
    Poset::from_adjacency(
        labels.iter().map(|l| l.as_ref().to_string()).collect(),
        &adj,
    )
}

impl Poset {
    /// Builds from strict adjacency masks (`adj[i]` = elements immediately or
    /// transitively declared above `i`). Fails on cycles.
    pub(crate) fn from_adjacency(labels: Vec<String>, adj: &[u64]) -> Result<Poset> {
        let n = labels.len();
        if n > MAX_ELEMENTS {
            return Err(Error::PosetTooLarge(n));
        }
        // strict reachability by iterated squaring of the adjacency masks
        let mut reach = adj.to_vec();
        loop {
            let mut changed = false;
            for i in 0..n {
                let mut r = reach[i];
                let mut bits = r;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    r |= reach[j];
                }
                if r != reach[i] {
                    reach[i] = r;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..n {
            if reach[i] & (1 << i) != 0 {
                return Err(Error::CycleDetected(labels[i].clone()));
            }
        }
        let mut up = vec![0u64; n];
        let mut down = vec![0u64; n];
        for i in 0..n {
            up[i] = reach[i] | (1 << i);
        }
        for i in 0..n {
            let mut bits = up[i];
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                down[j] |= 1 << i;
            }
        }
        Ok(Poset { n, up, down, labels })
    }

    /// The empty poset.
    pub fn empty() -> Poset {
        Poset { n: 0, up: vec![], down: vec![], labels: vec![] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Stable fingerprint of the order structure, used to tie subsets to
    /// their owner.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &row in &self.up {
            h ^= row;
            h = h.wrapping_mul(0x100_0000_01b3);
        }
        h ^= self.n as u64;
        h.wrapping_mul(0x100_0000_01b3)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a] & (1 << b) != 0
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn full_mask(&self) -> u64 {
        mask_full(self.n)
    }

    /// `{j : i <= j}` as a mask.
    pub fn up_mask(&self, i: usize) -> u64 {
        self.up[i]
    }

    /// `{j : j <= i}` as a mask.
    pub fn down_mask(&self, i: usize) -> u64 {
        self.down[i]
    }

    pub fn up_closure_mask(&self, s: u64) -> u64 {
        let mut r = 0;
        let mut bits = s;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            r |= self.up[i];
        }
        r
    }

    pub fn down_closure_mask(&self, s: u64) -> u64 {
        let mut r = 0;
        let mut bits = s;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            r |= self.down[i];
        }
        r
    }

    pub fn is_upset(&self, s: u64) -> bool {
        self.up_closure_mask(s) == s
    }

    pub fn is_downset(&self, s: u64) -> bool {
        self.down_closure_mask(s) == s
    }

    pub fn is_chain_mask(&self, s: u64) -> bool {
        let elems = mask_elements(s);
        for (k, &a) in elems.iter().enumerate() {
            for &b in &elems[k + 1..] {
                if !self.comparable(a, b) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_antichain_mask(&self, s: u64) -> bool {
        let elems = mask_elements(s);
        for (k, &a) in elems.iter().enumerate() {
            for &b in &elems[k + 1..] {
                if self.comparable(a, b) {
                    return false;
                }
            }
        }
        true
    }

    pub fn minimal_mask(&self) -> u64 {
        let mut m = 0;
        for i in 0..self.n {
            if self.down[i] == 1 << i {
                m |= 1 << i;
            }
        }
        m
    }

    pub fn maximal_mask(&self) -> u64 {
        let mut m = 0;
        for i in 0..self.n {
            if self.up[i] == 1 << i {
                m |= 1 << i;
            }
        }
        m
    }

    /// Greatest element, if one exists.
    pub fn co_root(&self) -> Option<usize> {
        (0..self.n).find(|&i| self.down[i] == self.full_mask())
    }

    /// Cover pairs `(a, b)` with `a` immediately below `b`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if self.lt(a, b) {
                    let between = self.up[a] & self.down[b] & !(1 << a) & !(1 << b);
                    if between == 0 {
                        out.push((a, b));
                    }
                }
            }
        }
        out
    }

    /// Immediate successors of `i`.
    pub fn covers_up(&self, i: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&j| {
                self.lt(i, j) && (self.up[i] & self.down[j] & !(1 << i) & !(1 << j)) == 0
            })
            .collect()
    }

    pub fn subset<I: IntoIterator<Item = usize>>(&self, elems: I) -> Result<PosetSubset> {
        let mut mask = 0u64;
        for e in elems {
            if e >= self.n {
                return Err(Error::OutOfRange(format!("element {e}")));
            }
            mask |= 1 << e;
        }
        Ok(PosetSubset { owner: self.fingerprint(), mask })
    }

    pub fn subset_from_mask(&self, mask: u64) -> Result<PosetSubset> {
        if mask & !self.full_mask() != 0 {
            return Err(Error::OutOfRange("subset mask out of range".into()));
        }
        Ok(PosetSubset { owner: self.fingerprint(), mask })
    }

    fn check_owner(&self, s: &PosetSubset) -> Result<u64> {
        if s.owner != self.fingerprint() {
            return Err(Error::ForeignSubset);
        }
        Ok(s.mask)
    }

    /// Smallest upset containing `s`.
    pub fn up_closure(&self, s: &PosetSubset) -> Result<PosetSubset> {
        let mask = self.check_owner(s)?;
        Ok(PosetSubset { owner: s.owner, mask: self.up_closure_mask(mask) })
    }

    /// Smallest downset containing `s`.
    pub fn down_closure(&self, s: &PosetSubset) -> Result<PosetSubset> {
        let mask = self.check_owner(s)?;
        Ok(PosetSubset { owner: s.owner, mask: self.down_closure_mask(mask) })
    }

    /// A co-tree: nonempty, has a greatest element, and every principal upset
    /// is a chain.
    pub fn is_co_tree(&self) -> bool {
        if self.n == 0 || self.co_root().is_none() {
            return false;
        }
        (0..self.n).all(|i| self.is_chain_mask(self.up[i]))
    }

    /// A co-forest: disjoint union of co-trees. Empty counts (union of zero).
    pub fn is_co_forest(&self) -> bool {
        self.components()
            .into_iter()
            .all(|c| self.induced(c).0.is_co_tree())
    }

    /// Maximum chain cardinality, counted in elements.
    pub fn depth(&self) -> Result<usize> {
        if self.n == 0 {
            return Err(Error::EmptyPoset);
        }
        // longest path over the strict order; process by increasing |down|
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&i| self.down[i].count_ones());
        let mut dp = vec![1usize; self.n];
        for &i in &order {
            for j in 0..self.n {
                if self.lt(j, i) {
                    dp[i] = dp[i].max(dp[j] + 1);
                }
            }
        }
        Ok(dp.into_iter().max().unwrap())
    }

    /// Maximum antichain cardinality, by Dilworth via minimum chain cover
    /// (bipartite matching on the strict order).
    pub fn width(&self) -> Result<usize> {
        if self.n == 0 {
            return Err(Error::EmptyPoset);
        }
        let n = self.n;
        let mut match_right = vec![usize::MAX; n];
        let mut matched = 0;
        for a in 0..n {
            let mut seen = vec![false; n];
            if self.try_kuhn(a, &mut seen, &mut match_right) {
                matched += 1;
            }
        }
        Ok(n - matched)
    }

    fn try_kuhn(&self, a: usize, seen: &mut [bool], match_right: &mut [usize]) -> bool {
        for b in 0..self.n {
            if self.lt(a, b) && !seen[b] {
                seen[b] = true;
                if match_right[b] == usize::MAX
                    || self.try_kuhn(match_right[b], seen, match_right)
                {
                    match_right[b] = a;
                    return true;
                }
            }
        }
        false
    }

    /// Connected components of the comparability graph, as masks sorted by
    /// least element.
    pub fn components(&self) -> Vec<u64> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for i in 0..self.n {
            if seen & (1 << i) != 0 {
                continue;
            }
            let mut comp = 1u64 << i;
            loop {
                let grown = self.up_closure_mask(comp) | self.down_closure_mask(comp);
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Induced subposet on the elements of `mask`, together with the map from
    /// new indices back to old ones.
    pub fn induced(&self, mask: u64) -> (Poset, Vec<usize>) {
        let elems = mask_elements(mask);
        let n = elems.len();
        let mut pos = HashMap::new();
        for (k, &e) in elems.iter().enumerate() {
            pos.insert(e, k);
        }
        let mut up = vec![0u64; n];
        let mut down = vec![0u64; n];
        for (k, &e) in elems.iter().enumerate() {
            let mut bits = self.up[e] & mask;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                up[k] |= 1 << pos[&j];
            }
            let mut bits = self.down[e] & mask;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                down[k] |= 1 << pos[&j];
            }
        }
        let labels = elems.iter().map(|&e| self.labels[e].clone()).collect();
        (Poset { n, up, down, labels }, elems)
    }

    /// Disjoint union; labels of the right operand get a `#` suffix if they
    /// collide.
    pub fn disjoint_union(&self, other: &Poset) -> Result<Poset> {
        let n = self.n + other.n;
        if n > MAX_ELEMENTS {
            return Err(Error::PosetTooLarge(n));
        }
        let mut labels = self.labels.clone();
        for l in &other.labels {
            let mut cand = l.clone();
            while labels.contains(&cand) {
                cand.push('#');
            }
            labels.push(cand);
        }
        let mut up = self.up.clone();
        let mut down = self.down.clone();
        for i in 0..other.n {
            up.push(other.up[i] << self.n);
            down.push(other.down[i] << self.n);
        }
        Ok(Poset { n, up, down, labels })
    }

    /// All upsets, each exactly once, sorted by (cardinality, mask).
    pub fn all_upsets(&self, cap: usize) -> Result<Vec<u64>> {
        // decide membership in an order where strict successors come first
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&i| self.up[i].count_ones());
        let mut out = Vec::new();
        let mut stack = vec![(0usize, 0u64)];
        while let Some((t, mask)) = stack.pop() {
            if t == self.n {
                out.push(mask);
                if out.len() > cap {
                    return Err(Error::UpsetCapExceeded { cap });
                }
                continue;
            }
            let e = order[t];
            stack.push((t + 1, mask));
            let strict_up = self.up[e] & !(1 << e);
            if strict_up & !mask == 0 {
                stack.push((t + 1, mask | (1 << e)));
            }
        }
        out.sort_by_key(|m| (m.count_ones(), *m));
        Ok(out)
    }

    pub fn count_upsets(&self, cap: usize) -> Result<usize> {
        Ok(self.all_upsets(cap)?.len())
    }
}

/// Indices of the set bits of `mask`, ascending.
pub fn mask_elements(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut bits = mask;
    while bits != 0 {
        out.push(bits.trailing_zeros() as usize);
        bits &= bits - 1;
    }
    out
}

impl PosetSubset {
    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn elements(&self) -> Vec<usize> {
        mask_elements(self.mask)
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }
}

// ---------------------------------------------------------------------------
// standard families

/// Chain x1 < x2 < ... < xn.
pub fn make_chain(n: usize) -> Result<Poset> {
    if n < 1 {
        return Err(Error::OutOfRange("chain size must be >= 1".into()));
    }
    let labels: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let covers: Vec<(String, String)> = (1..n)
        .map(|i| (format!("x{i}"), format!("x{}", i + 1)))
        .collect();
    build_poset(&labels, &covers)
}

/// Antichain of n points (not a co-forest for n >= 2 unless read as a union
/// of one-point co-trees, which it is).
pub fn make_antichain(n: usize) -> Result<Poset> {
    if n < 1 {
        return Err(Error::OutOfRange("antichain size must be >= 1".into()));
    }
    let labels: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    build_poset(&labels, &[] as &[(String, String)])
}

/// The n-co-fork: co-root `r` above minimal points x1..xn.
pub fn make_cofork(n: usize) -> Result<Poset> {
    if n < 1 {
        return Err(Error::OutOfRange("co-fork size must be >= 1".into()));
    }
    let mut labels: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    labels.push("r".to_string());
    let covers: Vec<(String, String)> =
        (1..=n).map(|i| (format!("x{i}"), "r".to_string())).collect();
    build_poset(&labels, &covers)
}

/// The n-comb: spine x1 < x2 < ... < xn with one extra minimal tooth xi'
/// immediately below each xi. Index layout: xi at 2(i-1), xi' at 2i-1.
pub fn make_comb(n: usize) -> Result<Poset> {
    if n < 1 {
        return Err(Error::OutOfRange("comb size must be >= 1".into()));
    }
    let mut labels = Vec::with_capacity(2 * n);
    let mut covers = Vec::new();
    for i in 1..=n {
        labels.push(format!("x{i}"));
        labels.push(format!("x{i}'"));
        covers.push((format!("x{i}'"), format!("x{i}")));
        if i > 1 {
            covers.push((format!("x{}", i - 1), format!("x{i}")));
        }
    }
    build_poset(&labels, &covers)
}

/// Comb spine element x_i (1-based).
pub fn comb_spine(i: usize) -> usize {
    2 * (i - 1)
}

/// Comb tooth element x_i' (1-based).
pub fn comb_tooth(i: usize) -> usize {
    2 * i - 1
}

/// The Hodkinson co-trees T_n. T_0 is the chain d < c < b < a. T_n stacks,
/// above the previous co-root and for levels i = n..1, spine points w_i < u_i
/// with a three-point side chain topped by z_i hung below w_i and a gadget
/// v_i below u_i carrying two incomparable leaves.
pub fn make_hodkinson(n: usize) -> Result<Poset> {
    let mut labels: Vec<String> = ["d", "c", "b", "a"].iter().map(|s| s.to_string()).collect();
    let mut covers: Vec<(String, String)> = vec![
        ("d".into(), "c".into()),
        ("c".into(), "b".into()),
        ("b".into(), "a".into()),
    ];
    let mut prev_top = "a".to_string();
    for i in (1..=n).rev() {
        let z1 = format!("z{i}_1");
        let z2 = format!("z{i}_2");
        let z = format!("z{i}");
        let w = format!("w{i}");
        let v1 = format!("v{i}_1");
        let v2 = format!("v{i}_2");
        let v = format!("v{i}");
        let u = format!("u{i}");
        covers.push((z1.clone(), z2.clone()));
        covers.push((z2.clone(), z.clone()));
        covers.push((z.clone(), w.clone()));
        covers.push((prev_top.clone(), w.clone()));
        covers.push((v1.clone(), v.clone()));
        covers.push((v2.clone(), v.clone()));
        covers.push((v.clone(), u.clone()));
        covers.push((w.clone(), u.clone()));
        labels.extend([z1, z2, z, w, v1, v2, v, u.clone()]);
        prev_top = u;
    }
    build_poset(&labels, &covers)
}
