//! Exhaustive generation of finite posets up to isomorphism.
//!
//! Co-trees are order duals of rooted trees, so they are generated from
//! canonical level sequences (Beyer-Hedetniemi successor rule). Co-forests
//! are multisets of co-trees. General posets are grown by repeatedly adding
//! a new maximal element over a downset, deduplicated by canonical form.

use crate::error::{Error, Result};
use crate::poset::{mask_elements, Poset};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// Canonical key of a poset up to isomorphism: the lexicographically least
/// relation matrix over all relabelings. Entry (i,j), i<j, is 1 if i<j,
/// 2 if j<i, 0 if incomparable; rows are concatenated.
pub fn canonical_key(p: &Poset) -> Vec<u8> {
    let n = p.n();
    if n == 0 {
        return vec![];
    }
    // invariant refinement to cut the search: order candidates by a cheap
    // iso-invariant signature
    let mut inv: Vec<u64> = (0..n)
        .map(|i| {
            (p.up_mask(i).count_ones() as u64) << 32 | p.down_mask(i).count_ones() as u64
        })
        .collect();
    for _ in 0..2 {
        let mut next = vec![0u64; n];
        for i in 0..n {
            let mut ups: Vec<u64> = mask_elements(p.up_mask(i)).iter().map(|&j| inv[j]).collect();
            let mut downs: Vec<u64> =
                mask_elements(p.down_mask(i)).iter().map(|&j| inv[j]).collect();
            ups.sort_unstable();
            downs.sort_unstable();
            let mut h = inv[i].wrapping_mul(0x9e37_79b9_7f4a_7c15);
            for v in ups.into_iter().chain(downs) {
                h = h.rotate_left(13) ^ v.wrapping_mul(0x100_0000_01b3);
            }
            next[i] = h;
        }
        inv = next;
    }

    let mut best: Option<Vec<u8>> = None;
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    // prefix: digits of the partial matrix, row-major over the placed prefix
    fn extend(
        p: &Poset,
        inv: &[u64],
        perm: &mut Vec<usize>,
        used: &mut [bool],
        prefix: &mut Vec<u8>,
        best: &mut Option<Vec<u8>>,
    ) {
        let n = p.n();
        let pos = perm.len();
        if pos == n {
            match best {
                Some(b) if prefix.as_slice() >= b.as_slice() => {}
                _ => *best = Some(prefix.clone()),
            }
            return;
        }
        let mut cands: Vec<usize> = (0..n).filter(|&x| !used[x]).collect();
        cands.sort_by_key(|&x| (inv[x], x));
        for x in cands {
            let row_start = prefix.len();
            for &y in perm.iter() {
                let d = if p.lt(y, x) {
                    1
                } else if p.lt(x, y) {
                    2
                } else {
                    0
                };
                prefix.push(d);
            }
            // prune: if the partial matrix already exceeds the best key,
            // every completion does too
            let dominated = match best {
                Some(b) => prefix.as_slice() > &b[..prefix.len()],
                None => false,
            };
            if !dominated {
                perm.push(x);
                used[x] = true;
                extend(p, inv, perm, used, prefix, best);
                used[x] = false;
                perm.pop();
            }
            prefix.truncate(row_start);
        }
    }
    let mut prefix = Vec::new();
    extend(p, &inv, &mut perm, &mut used, &mut prefix, &mut best);
    best.unwrap()
}

pub fn isomorphic(p: &Poset, q: &Poset) -> bool {
    p.n() == q.n() && canonical_key(p) == canonical_key(q)
}

/// All order isomorphisms p -> q, as index vectors.
pub fn order_isomorphisms(p: &Poset, q: &Poset) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if p.n() != q.n() {
        return out;
    }
    let n = p.n();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        p: &Poset,
        q: &Poset,
        i: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = p.n();
        if i == n {
            out.push(map.clone());
            return;
        }
        for t in 0..n {
            if used[t] {
                continue;
            }
            let ok = (0..i).all(|j| {
                p.leq(j, i) == q.leq(map[j], t) && p.leq(i, j) == q.leq(t, map[j])
            });
            if ok {
                map[i] = t;
                used[t] = true;
                rec(p, q, i + 1, map, used, out);
                used[t] = false;
                map[i] = usize::MAX;
            }
        }
    }
    rec(p, q, 0, &mut map, &mut used, &mut out);
    out
}

/// Converts a rooted-tree level sequence (root level 1) to a co-tree: the
/// root becomes the co-root, each node is covered by its parent.
fn level_sequence_to_cotree(levels: &[usize]) -> Poset {
    let n = levels.len();
    let labels: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
    let mut adj = vec![0u64; n];
    for i in 1..n {
        // parent = nearest previous node one level up
        let parent = (0..i).rev().find(|&j| levels[j] == levels[i] - 1).unwrap();
        adj[i] |= 1 << parent;
    }
    Poset::from_adjacency(labels, &adj).expect("level sequence is acyclic")
}

/// All co-trees with exactly `n` points, one per isomorphism class, in
/// canonical level-sequence order.
pub fn cotrees_exactly(n: usize) -> Vec<Poset> {
    if n == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let mut l: Vec<usize> = (1..=n).collect();
    loop {
        out.push(level_sequence_to_cotree(&l));
        // Beyer-Hedetniemi successor
        let Some(p) = (0..n).rev().find(|&i| l[i] > 2) else {
            break;
        };
        let q = (0..p).rev().find(|&i| l[i] == l[p] - 1).unwrap();
        for i in p..n {
            l[i] = l[i - (p - q)];
        }
    }
    out
}

/// Every co-tree with 1..=max points, one per isomorphism class.
pub fn enumerate_cotrees(max_size: usize, cap: usize) -> Result<Vec<Poset>> {
    if max_size > cap {
        return Err(Error::EnumCapExceeded { size: max_size, cap });
    }
    let mut out = Vec::new();
    for n in 1..=max_size {
        out.extend(cotrees_exactly(n));
    }
    Ok(out)
}

/// Every nonempty co-forest with 1..=max points, one per isomorphism class:
/// multisets of co-trees with nondecreasing (size, index) component choices.
pub fn enumerate_coforests(max_size: usize, cap: usize) -> Result<Vec<Poset>> {
    if max_size > cap {
        return Err(Error::EnumCapExceeded { size: max_size, cap });
    }
    let by_size: Vec<Vec<Poset>> = (0..=max_size)
        .map(|n| if n == 0 { vec![] } else { cotrees_exactly(n) })
        .collect();
    let mut out = Vec::new();
    // components chosen with nondecreasing (size, idx) so each multiset
    // appears once
    fn rec(
        by_size: &[Vec<Poset>],
        remaining: usize,
        min_size: usize,
        min_idx: usize,
        current: Option<Poset>,
        out: &mut Vec<Poset>,
    ) {
        if let Some(p) = &current {
            out.push(p.clone());
        }
        for size in min_size..=remaining {
            let start = if size == min_size { min_idx } else { 0 };
            for idx in start..by_size[size].len() {
                let next = match &current {
                    None => by_size[size][idx].clone(),
                    Some(p) => p.disjoint_union(&by_size[size][idx]).unwrap(),
                };
                rec(by_size, remaining - size, size, idx, Some(next), out);
            }
        }
    }
    rec(&by_size, max_size, 1, 0, None, &mut out);
    out.sort_by_key(|p| p.n());
    Ok(out)
}

/// Every poset with 1..=max points, one per isomorphism class, grown by
/// adding a maximal element over each downset of each smaller poset.
pub fn enumerate_posets(max_size: usize, cap: usize) -> Result<Vec<Poset>> {
    if max_size > cap {
        return Err(Error::EnumCapExceeded { size: max_size, cap });
    }
    let mut all: Vec<Poset> = Vec::new();
    let mut frontier = vec![build_single()];
    all.extend(frontier.iter().cloned());
    for n in 2..=max_size {
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut next = Vec::new();
        for p in &frontier {
            // downsets of p = upsets of its order dual; enumerate directly
            for d in all_downsets(p) {
                let q = add_maximal_over(p, d, n);
                let key = canonical_key(&q);
                if seen.insert(key) {
                    next.push(q);
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(all)
}

fn build_single() -> Poset {
    crate::poset::build_poset(&["e0"], &[] as &[(&str, &str)]).unwrap()
}

fn all_downsets(p: &Poset) -> Vec<u64> {
    // complements of upsets
    let full = p.full_mask();
    p.all_upsets(usize::MAX >> 1)
        .unwrap()
        .into_iter()
        .map(|u| full & !u)
        .collect()
}

fn add_maximal_over(p: &Poset, downset: u64, n: usize) -> Poset {
    let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let mut adj = vec![0u64; n];
    for (a, b) in p.covers() {
        adj[a] |= 1 << b;
    }
    let new = n - 1;
    for e in mask_elements(downset) {
        adj[e] |= 1 << new;
    }
    Poset::from_adjacency(labels, &adj).expect("extension is acyclic")
}

/// Deterministic random co-tree on `size` points: node i >= 1 picks a parent
/// uniformly among 0..i, node 0 is the co-root.
pub fn random_cotree(size: usize, seed: u64) -> Result<Poset> {
    if size < 1 {
        return Err(Error::OutOfRange("co-tree size must be >= 1".into()));
    }
    if size > crate::poset::MAX_ELEMENTS {
        return Err(Error::PosetTooLarge(size));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<String> = (0..size).map(|i| format!("t{i}")).collect();
    let mut adj = vec![0u64; size];
    for i in 1..size {
        let parent = rng.gen_range(0..i);
        adj[i] |= 1 << parent;
    }
    Poset::from_adjacency(labels, &adj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{make_antichain, make_chain, make_comb};

    #[test]
    fn cotree_counts_match_rooted_tree_numbers() {
        // rooted trees on n nodes: 1, 1, 2, 4, 9, 20, 48, 115
        let expect = [1, 1, 2, 4, 9, 20, 48, 115];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(cotrees_exactly(i + 1).len(), e, "n = {}", i + 1);
        }
    }

    #[test]
    fn cotrees_are_cotrees_and_pairwise_noniso() {
        let all = enumerate_cotrees(6, 10).unwrap();
        for p in &all {
            assert!(p.is_co_tree(), "{p:?}");
        }
        let keys: HashSet<Vec<u8>> = all.iter().map(canonical_key).collect();
        assert_eq!(keys.len(), all.len());
    }

    #[test]
    fn enumerate_two_point_cotrees() {
        let all = enumerate_cotrees(2, 10).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].n(), 1);
        assert!(all[1].is_chain_mask(all[1].full_mask()));
    }

    #[test]
    fn coforest_counts() {
        // multisets of rooted trees ("planted forests"): 1, 2, 4, 9, 20, 48
        let expect = [1usize, 2, 4, 9, 20, 48];
        for (i, &e) in expect.iter().enumerate() {
            let n = i + 1;
            let count = enumerate_coforests(n, 10)
                .unwrap()
                .iter()
                .filter(|p| p.n() == n)
                .count();
            assert_eq!(count, e, "n = {n}");
        }
        for p in enumerate_coforests(5, 10).unwrap() {
            assert!(p.is_co_forest());
        }
    }

    #[test]
    fn poset_counts_match_known_sequence() {
        // posets up to iso: 1, 2, 5, 16, 63
        let all = enumerate_posets(5, 10).unwrap();
        let expect = [1usize, 2, 5, 16, 63];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(all.iter().filter(|p| p.n() == i + 1).count(), e, "n = {}", i + 1);
        }
    }

    #[test]
    fn canonical_key_identifies_isomorphs() {
        let a = crate::poset::build_poset(&["x", "y", "z"], &[("x", "y"), ("x", "z")]).unwrap();
        let b = crate::poset::build_poset(&["p", "q", "r"], &[("r", "q"), ("r", "p")]).unwrap();
        assert!(isomorphic(&a, &b));
        assert!(!isomorphic(&a, &make_chain(3).unwrap()));
        assert!(!isomorphic(&make_chain(2).unwrap(), &make_antichain(2).unwrap()));
    }

    #[test]
    fn order_isomorphisms_of_comb() {
        let c2 = make_comb(2).unwrap();
        let autos = order_isomorphisms(&c2, &c2);
        assert_eq!(autos.len(), 1); // combs are rigid
    }

    #[test]
    fn random_cotree_deterministic() {
        let a = random_cotree(6, 17).unwrap();
        let b = random_cotree(6, 17).unwrap();
        assert_eq!(a, b);
        assert!(a.is_co_tree());
        let c = random_cotree(6, 18).unwrap();
        let _ = c; // different seed may or may not differ structurally
    }
}
