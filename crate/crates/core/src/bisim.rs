//! Bi-bisimulation equivalences, the Coloring Theorem as an executable
//! generation test, and the comb-omission depth bound.

use crate::algebra::BiHeytingAlgebra;
use crate::error::{Error, Result};
use crate::morphism::find_order_embedding;
use crate::poset::{comb_spine, comb_tooth, make_comb, mask_elements, Poset};
use std::collections::HashMap;

/// An equivalence relation on a poset, as a block partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivPartition {
    owner: u64,
    pub block_of: Vec<usize>,
    pub blocks: Vec<u64>,
}

impl EquivPartition {
    pub fn from_blocks(p: &Poset, blocks: Vec<Vec<usize>>) -> Result<EquivPartition> {
        let mut block_of = vec![usize::MAX; p.n()];
        let mut masks = Vec::with_capacity(blocks.len());
        for (bi, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::HypothesisViolated("empty block".into()));
            }
            let mut mask = 0u64;
            for &e in block {
                if e >= p.n() || block_of[e] != usize::MAX {
                    return Err(Error::HypothesisViolated(
                        "blocks must partition the carrier".into(),
                    ));
                }
                block_of[e] = bi;
                mask |= 1 << e;
            }
            masks.push(mask);
        }
        if block_of.contains(&usize::MAX) {
            return Err(Error::HypothesisViolated(
                "blocks must cover the carrier".into(),
            ));
        }
        Ok(EquivPartition { owner: p.fingerprint(), block_of, blocks: masks })
    }

    pub fn identity(p: &Poset) -> EquivPartition {
        EquivPartition {
            owner: p.fingerprint(),
            block_of: (0..p.n()).collect(),
            blocks: (0..p.n()).map(|i| 1u64 << i).collect(),
        }
    }

    /// From a restricted-growth string.
    pub fn from_rgs(p: &Poset, rgs: &[usize]) -> EquivPartition {
        let nblocks = rgs.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks = vec![0u64; nblocks];
        for (e, &b) in rgs.iter().enumerate() {
            blocks[b] |= 1 << e;
        }
        EquivPartition { owner: p.fingerprint(), block_of: rgs.to_vec(), blocks }
    }

    pub fn check_owner(&self, p: &Poset) -> Result<()> {
        if self.owner != p.fingerprint() {
            return Err(Error::HypothesisViolated(
                "partition does not belong to this poset".into(),
            ));
        }
        Ok(())
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    /// Not the identity relation.
    pub fn is_proper(&self) -> bool {
        self.blocks.iter().any(|b| b.count_ones() > 1)
    }

    /// Union of all blocks meeting `s`.
    pub fn saturate(&self, s: u64) -> u64 {
        let mut out = 0u64;
        for &b in &self.blocks {
            if b & s != 0 {
                out |= b;
            }
        }
        out
    }
}

/// The three conditions of a bi-bisimulation equivalence: Up, Down, and
/// separation of non-equivalent points by a saturated upset.
pub fn is_bi_bisimulation(p: &Poset, e: &EquivPartition) -> Result<bool> {
    e.check_owner(p)?;
    for w in 0..p.n() {
        for w2 in 0..p.n() {
            if !e.related(w, w2) {
                continue;
            }
            // Up: every successor of w2 has an equivalent above w
            for v2 in mask_elements(p.up_mask(w2)) {
                if p.up_mask(w) & e.blocks[e.block_of[v2]] == 0 {
                    return Ok(false);
                }
            }
            // Down dually
            for u2 in mask_elements(p.down_mask(w2)) {
                if p.down_mask(w) & e.blocks[e.block_of[u2]] == 0 {
                    return Ok(false);
                }
            }
        }
    }
    // Refined: w and v are separable iff the least saturated upset around
    // one avoids the other
    let least_saturated_upset = |w: usize| -> u64 {
        let mut s = 1u64 << w;
        loop {
            let grown = e.saturate(p.up_closure_mask(s));
            if grown == s {
                return s;
            }
            s = grown;
        }
    };
    let hulls: Vec<u64> = (0..p.n()).map(least_saturated_upset).collect();
    for w in 0..p.n() {
        for v in 0..p.n() {
            if !e.related(w, v) && hulls[w] & (1 << v) != 0 && hulls[v] & (1 << w) != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A chain H with least element m0 and greatest m1 is isolated when
/// `down m1 \ H = down m0 \ {m0}` and `up m0 \ H = up m1 \ {m1}`.
pub fn is_isolated_chain(p: &Poset, h: u64) -> Result<bool> {
    if h == 0 || h & !p.full_mask() != 0 || !p.is_chain_mask(h) {
        return Err(Error::HypothesisViolated("H must be a nonempty chain".into()));
    }
    let elems = mask_elements(h);
    let m0 = *elems
        .iter()
        .find(|&&a| elems.iter().all(|&b| p.leq(a, b)))
        .expect("chain has a least element");
    let m1 = *elems
        .iter()
        .find(|&&a| elems.iter().all(|&b| p.leq(b, a)))
        .expect("chain has a greatest element");
    Ok(p.down_mask(m1) & !h == p.down_mask(m0) & !(1u64 << m0)
        && p.up_mask(m0) & !h == p.up_mask(m1) & !(1u64 << m1))
}

/// The partition collapsing H to a single class, leaving everything else
/// alone. A bi-bisimulation whenever H is isolated.
pub fn isolated_chain_partition(p: &Poset, h: u64) -> Result<EquivPartition> {
    if h == 0 || h & !p.full_mask() != 0 || !p.is_chain_mask(h) {
        return Err(Error::HypothesisViolated("H must be a nonempty chain".into()));
    }
    let mut blocks = vec![mask_elements(h)];
    for i in 0..p.n() {
        if h & (1 << i) == 0 {
            blocks.push(vec![i]);
        }
    }
    EquivPartition::from_blocks(p, blocks)
}

/// Pairs x with iso(x) for an order-isomorphism between the downsets of two
/// distinct points sharing an immediate successor in a co-forest.
pub fn twin_partition(
    p: &Poset,
    w: usize,
    v: usize,
    iso: &HashMap<usize, usize>,
) -> Result<EquivPartition> {
    if !p.is_co_forest() {
        return Err(Error::HypothesisViolated("poset must be a co-forest".into()));
    }
    if w == v {
        return Err(Error::HypothesisViolated("w and v must be distinct".into()));
    }
    let wsucc = p.covers_up(w);
    let vsucc = p.covers_up(v);
    if !wsucc.iter().any(|s| vsucc.contains(s)) {
        return Err(Error::HypothesisViolated(
            "w and v must share an immediate successor".into(),
        ));
    }
    let dw = mask_elements(p.down_mask(w));
    let dv_mask = p.down_mask(v);
    // iso must be an order-invariant bijection down(w) -> down(v)
    if iso.len() != dw.len() {
        return Err(Error::HypothesisViolated("iso is not total on down(w)".into()));
    }
    let mut image = 0u64;
    for &x in &dw {
        let &y = iso
            .get(&x)
            .ok_or_else(|| Error::HypothesisViolated("iso misses a point".into()))?;
        if dv_mask & (1 << y) == 0 {
            return Err(Error::HypothesisViolated("iso leaves down(v)".into()));
        }
        image |= 1 << y;
    }
    if image != dv_mask {
        return Err(Error::HypothesisViolated("iso is not onto down(v)".into()));
    }
    for &x in &dw {
        for &y in &dw {
            if p.leq(x, y) != p.leq(iso[&x], iso[&y]) {
                return Err(Error::HypothesisViolated("iso is not order-invariant".into()));
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = dw.iter().map(|&x| vec![x, iso[&x]]).collect();
    let paired = p.down_mask(w) | dv_mask;
    for i in 0..p.n() {
        if paired & (1 << i) == 0 {
            blocks.push(vec![i]);
        }
    }
    EquivPartition::from_blocks(p, blocks)
}

/// All partitions of 0..n as restricted-growth strings, identity included.
fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(rgs: &mut Vec<usize>, i: usize, max_used: usize, out: &mut Vec<Vec<usize>>) {
        let n = rgs.len();
        if i == n {
            out.push(rgs.clone());
            return;
        }
        for b in 0..=max_used + 1 {
            rgs[i] = b;
            rec(rgs, i + 1, max_used.max(b), out);
        }
    }
    if n == 0 {
        out.push(vec![]);
        return out;
    }
    rgs[0] = 0;
    rec(&mut rgs, 1, 0, &mut out);
    out
}

/// Report of the Coloring Theorem check on a colored poset: the
/// partition-enumeration side against the closure side.
#[derive(Clone, Debug)]
pub struct ColoringReport {
    /// Every proper bi-bisimulation identifies points of different colors.
    pub every_proper_bisim_mixes_colors: bool,
    /// The colors generate the upset algebra.
    pub colors_generate: bool,
    pub equivalent: bool,
    /// A proper bi-bisimulation identifying only same-colored points, if any.
    pub counterexample: Option<EquivPartition>,
}

/// Enumerates every proper equivalence partition (Bell-number search, so the
/// poset size is capped), filters the bi-bisimulations, and compares the
/// color-identification property with the generation test.
pub fn coloring_theorem_check(
    p: &Poset,
    colors: &[u64],
    bell_cap: usize,
) -> Result<ColoringReport> {
    if p.n() > bell_cap {
        return Err(Error::PartitionCapExceeded { size: p.n(), cap: bell_cap });
    }
    for &c in colors {
        if !p.is_upset(c) {
            return Err(Error::NonUpsetColor(format!("{c:#b}")));
        }
    }
    let color_of = |x: usize| -> u64 {
        let mut bits = 0u64;
        for (i, &c) in colors.iter().enumerate() {
            if c & (1 << x) != 0 {
                bits |= 1 << i;
            }
        }
        bits
    };
    let mut every = true;
    let mut counterexample = None;
    for rgs in all_partitions(p.n()) {
        let e = EquivPartition::from_rgs(p, &rgs);
        if !e.is_proper() || !is_bi_bisimulation(p, &e)? {
            continue;
        }
        let mixes = (0..p.n()).any(|a| {
            (0..p.n()).any(|b| a != b && e.related(a, b) && color_of(a) != color_of(b))
        });
        if !mixes {
            every = false;
            counterexample = Some(e);
            break;
        }
    }
    let alg = BiHeytingAlgebra::upset_algebra(p, 1 << p.n())?;
    let masks = alg.upset_masks().unwrap();
    let seed: Vec<usize> = colors
        .iter()
        .map(|c| masks.iter().position(|m| m == c).expect("color is an upset"))
        .collect();
    let colors_generate = alg.generates(&seed);
    Ok(ColoringReport {
        every_proper_bisim_mixes_colors: every,
        colors_generate,
        equivalent: every == colors_generate,
        counterexample,
    })
}

/// The single-upset comb coloring `{x1} ∪ up{x_i' : i even}`. The set as
/// written is already an upset; `changed` records whether up-closing it did
/// anything.
pub struct CombColoring {
    pub poset: Poset,
    pub upset: u64,
    pub changed_by_closure: bool,
}

pub fn comb_coloring(n: usize) -> Result<CombColoring> {
    let poset = make_comb(n)?;
    let mut raw = 1u64 << comb_spine(1);
    for i in (2..=n).step_by(2) {
        raw |= poset.up_mask(comb_tooth(i));
    }
    let upset = poset.up_closure_mask(raw);
    Ok(CombColoring { poset, upset, changed_by_closure: upset != raw })
}

/// Report of the depth bound for co-trees omitting the n-comb: with
/// m = gen_rank of the upset algebra, depth <= (m+1)*n and every principal
/// upset of a minimal point has at most (m+1)*n elements.
#[derive(Clone, Debug)]
pub struct DepthBoundReport {
    pub n: usize,
    pub gen_rank: usize,
    pub bound: usize,
    pub depth: usize,
    pub depth_ok: bool,
    pub minimal_upsets_ok: bool,
}

pub fn depth_bound_check(
    x: &Poset,
    n: usize,
    upset_cap: usize,
    gen_rank_cap: usize,
    node_budget: u64,
) -> Result<DepthBoundReport> {
    if !x.is_co_tree() {
        return Err(Error::NotCoTree("depth bound needs a co-tree".into()));
    }
    let comb = make_comb(n)?;
    if find_order_embedding(&comb, x, node_budget)?.is_some() {
        return Err(Error::HypothesisViolated(format!(
            "poset contains the {n}-comb"
        )));
    }
    let alg = BiHeytingAlgebra::upset_algebra(x, upset_cap)?;
    let m = alg.gen_rank(gen_rank_cap)?;
    let bound = (m + 1) * n;
    let depth = x.depth()?;
    let minimal_upsets_ok = mask_elements(x.minimal_mask())
        .into_iter()
        .all(|w| x.up_mask(w).count_ones() as usize <= bound);
    Ok(DepthBoundReport {
        n,
        gen_rank: m,
        bound,
        depth,
        depth_ok: depth <= bound,
        minimal_upsets_ok,
    })
}

/// Scans all co-trees up to `size_cap` that omit the n-comb and whose upset
/// algebra is generated by at most `m` elements, reporting the largest
/// algebra seen (an empirical view of the finite bound behind local
/// tabularity).
#[derive(Clone, Debug)]
pub struct KTableReport {
    pub n: usize,
    pub m: usize,
    pub size_cap: usize,
    pub cotrees_scanned: usize,
    pub cotrees_counted: usize,
    pub max_algebra_size: usize,
}

pub fn ktable(
    n: usize,
    m: usize,
    size_cap: usize,
    enum_cap: usize,
    upset_cap: usize,
    gen_rank_cap: usize,
    node_budget: u64,
) -> Result<KTableReport> {
    let comb = make_comb(n)?;
    let mut scanned = 0;
    let mut counted = 0;
    let mut max_size = 0;
    for x in crate::enumerate::enumerate_cotrees(size_cap, enum_cap)? {
        scanned += 1;
        if find_order_embedding(&comb, &x, node_budget)?.is_some() {
            continue;
        }
        let alg = BiHeytingAlgebra::upset_algebra(&x, upset_cap)?;
        if alg.gen_rank(gen_rank_cap)? <= m {
            counted += 1;
            max_size = max_size.max(alg.k());
        }
    }
    Ok(KTableReport {
        n,
        m,
        size_cap,
        cotrees_scanned: scanned,
        cotrees_counted: counted,
        max_algebra_size: max_size,
    })
}

/// The example poset used to demonstrate isolated chains: a 2-crown of
/// minimal points below a 3-chain below a 2-crown below the top.
#[cfg(test)]
fn iso_chain_example() -> Poset {
    crate::poset::build_poset(
        &["e", "f", "m0", "d", "m1", "b", "c", "a"],
        &[
            ("e", "m0"),
            ("f", "m0"),
            ("m0", "d"),
            ("d", "m1"),
            ("m1", "b"),
            ("m1", "c"),
            ("b", "a"),
            ("c", "a"),
        ],
    )
    .unwrap()
}
