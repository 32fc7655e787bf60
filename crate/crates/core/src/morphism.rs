//! Bi-p-morphisms and order-embeddings: predicates, exhaustive pruned
//! searches, the constructive comb quotient, and antichain matrices.

use crate::enumerate::canonical_key;
use crate::error::{Error, Result};
use crate::poset::{comb_spine, comb_tooth, make_comb, mask_elements, Poset};

/// A total map between two posets, tied to them by fingerprints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetMap {
    source: u64,
    target: u64,
    pub map: Vec<usize>,
}

impl PosetMap {
    pub fn new(src: &Poset, tgt: &Poset, map: Vec<usize>) -> Result<PosetMap> {
        if map.len() != src.n() {
            return Err(Error::HypothesisViolated("map is not total".into()));
        }
        if map.iter().any(|&t| t >= tgt.n()) {
            return Err(Error::OutOfRange("map value outside target".into()));
        }
        Ok(PosetMap {
            source: src.fingerprint(),
            target: tgt.fingerprint(),
            map,
        })
    }

    pub fn check_owners(&self, src: &Poset, tgt: &Poset) -> Result<()> {
        if self.source != src.fingerprint() || self.target != tgt.fingerprint() {
            return Err(Error::HypothesisViolated(
                "map does not belong to these posets".into(),
            ));
        }
        Ok(())
    }

    pub fn is_surjective(&self, tgt: &Poset) -> bool {
        let mut hit = 0u64;
        for &t in &self.map {
            hit |= 1 << t;
        }
        hit == tgt.full_mask()
    }
}

/// Order preserving, plus the Up and Down back conditions.
pub fn is_bi_p_morphism(src: &Poset, tgt: &Poset, f: &PosetMap) -> Result<bool> {
    f.check_owners(src, tgt)?;
    let m = &f.map;
    for x in 0..src.n() {
        for y in 0..src.n() {
            if src.leq(x, y) && !tgt.leq(m[x], m[y]) {
                return Ok(false);
            }
        }
        // Up: every u above f(x) is hit from above x
        for u in 0..tgt.n() {
            if tgt.leq(m[x], u)
                && !mask_elements(src.up_mask(x)).iter().any(|&y| m[y] == u)
            {
                return Ok(false);
            }
            // Down: every v below f(x) is hit from below x
            if tgt.leq(u, m[x])
                && !mask_elements(src.down_mask(x)).iter().any(|&z| m[z] == u)
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `x <= y` iff `f(x) <= f(y)`; injectivity follows.
pub fn is_order_embedding(src: &Poset, tgt: &Poset, f: &PosetMap) -> Result<bool> {
    f.check_owners(src, tgt)?;
    let m = &f.map;
    for x in 0..src.n() {
        for y in 0..src.n() {
            if src.leq(x, y) != tgt.leq(m[x], m[y]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

struct Budget {
    nodes: u64,
    limit: u64,
}

impl Budget {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::SearchBudgetExceeded { budget: self.limit });
        }
        Ok(())
    }
}

/// Lexicographically first surjective bi-p-morphism src ->> tgt, or None.
/// When both posets are co-forests the search prunes with the structural
/// facts about such morphisms (minimal points map to minimal points, the
/// co-root of a component maps to a component co-root, images of cover
/// pairs are equal or again cover pairs); for general posets those prunes
/// are disabled and only order-consistency guides the search.
pub fn find_surjective_bi_p_morphism(
    src: &Poset,
    tgt: &Poset,
    node_budget: u64,
) -> Result<Option<PosetMap>> {
    if tgt.n() == 0 {
        return Ok(if src.n() == 0 {
            Some(PosetMap::new(src, tgt, vec![])?)
        } else {
            None
        });
    }
    if src.n() < tgt.n() {
        return Ok(None);
    }
    // sound for every surjective bi-p-morphism: chains and antichains lift
    if src.n() > 0 && (src.depth()? < tgt.depth()? || src.width()? < tgt.width()?) {
        return Ok(None);
    }
    let coforest_mode = src.is_co_forest() && tgt.is_co_forest();

    // static per-element candidate masks
    let tgt_min = tgt.minimal_mask();
    let mut tgt_roots = 0u64;
    for c in tgt.components() {
        let (ind, elems) = tgt.induced(c);
        if let Some(r) = ind.co_root() {
            tgt_roots |= 1 << elems[r];
        }
    }
    let mut src_roots = 0u64;
    for c in src.components() {
        let (ind, elems) = src.induced(c);
        if let Some(r) = ind.co_root() {
            src_roots |= 1 << elems[r];
        }
    }
    let mut cand = vec![0u64; src.n()];
    for x in 0..src.n() {
        for q in 0..tgt.n() {
            // |up| and |down| can only shrink along a bi-p-morphism
            if src.up_mask(x).count_ones() < tgt.up_mask(q).count_ones() {
                continue;
            }
            if src.down_mask(x).count_ones() < tgt.down_mask(q).count_ones() {
                continue;
            }
            if coforest_mode {
                if src.minimal_mask() & (1 << x) != 0 && tgt_min & (1 << q) == 0 {
                    continue;
                }
                if src_roots & (1 << x) != 0 && tgt_roots & (1 << q) == 0 {
                    continue;
                }
            }
            cand[x] |= 1 << q;
        }
        if cand[x] == 0 {
            return Ok(None);
        }
    }

    // cover pairs for the prec prune
    let covers: Vec<(usize, usize)> = if coforest_mode { src.covers() } else { vec![] };
    let mut lower_cov = vec![0u64; tgt.n()];
    for (a, b) in tgt.covers() {
        lower_cov[b] |= 1 << a;
    }

    let mut budget = Budget { nodes: 0, limit: node_budget };
    let mut map = vec![usize::MAX; src.n()];
    let found = surj_dfs(
        src,
        tgt,
        0,
        &mut map,
        &cand,
        &covers,
        &lower_cov,
        coforest_mode,
        0,
        &mut budget,
    )?;
    if found {
        let pm = PosetMap::new(src, tgt, map)?;
        debug_assert!(is_bi_p_morphism(src, tgt, &pm)? && pm.is_surjective(tgt));
        Ok(Some(pm))
    } else {
        Ok(None)
    }
}

#[allow(clippy::too_many_arguments)]
fn surj_dfs(
    src: &Poset,
    tgt: &Poset,
    x: usize,
    map: &mut Vec<usize>,
    cand: &[u64],
    covers: &[(usize, usize)],
    lower_cov: &[u64],
    coforest_mode: bool,
    hit: u64,
    budget: &mut Budget,
) -> Result<bool> {
    if x == src.n() {
        if hit != tgt.full_mask() {
            return Ok(false);
        }
        let pm = PosetMap::new(src, tgt, map.clone())?;
        return is_bi_p_morphism(src, tgt, &pm);
    }
    // surjectivity bound: unassigned elements must be able to cover the rest
    let missing = (tgt.full_mask() & !hit).count_ones() as usize;
    if missing > src.n() - x {
        return Ok(false);
    }
    let mut options = cand[x];
    while options != 0 {
        let q = options.trailing_zeros() as usize;
        options &= options - 1;
        budget.tick()?;
        // order consistency with the assigned prefix
        let mut ok = true;
        for y in 0..x {
            if src.leq(y, x) && !tgt.leq(map[y], q) {
                ok = false;
                break;
            }
            if src.leq(x, y) && !tgt.leq(q, map[y]) {
                ok = false;
                break;
            }
        }
        if ok && coforest_mode {
            for &(a, b) in covers {
                let (fa, fb) = if a == x && b < x {
                    (q, map[b])
                } else if b == x && a < x {
                    (map[a], q)
                } else {
                    continue;
                };
                if fa != fb && lower_cov[fb] & (1 << fa) == 0 {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        map[x] = q;
        if surj_dfs(
            src,
            tgt,
            x + 1,
            map,
            cand,
            covers,
            lower_cov,
            coforest_mode,
            hit | (1 << q),
            budget,
        )? {
            return Ok(true);
        }
        map[x] = usize::MAX;
    }
    Ok(false)
}

/// Lexicographically first order-embedding src -> tgt, or None.
pub fn find_order_embedding(
    src: &Poset,
    tgt: &Poset,
    node_budget: u64,
) -> Result<Option<PosetMap>> {
    if src.n() > tgt.n() {
        return Ok(None);
    }
    if src.n() == 0 {
        return Ok(Some(PosetMap::new(src, tgt, vec![])?));
    }
    if src.depth()? > tgt.depth()? || src.width()? > tgt.width()? {
        return Ok(None);
    }
    let mut cand = vec![0u64; src.n()];
    for x in 0..src.n() {
        for q in 0..tgt.n() {
            if src.up_mask(x).count_ones() <= tgt.up_mask(q).count_ones()
                && src.down_mask(x).count_ones() <= tgt.down_mask(q).count_ones()
            {
                cand[x] |= 1 << q;
            }
        }
        if cand[x] == 0 {
            return Ok(None);
        }
    }
    let mut budget = Budget { nodes: 0, limit: node_budget };
    let mut map = vec![usize::MAX; src.n()];
    fn dfs(
        src: &Poset,
        tgt: &Poset,
        x: usize,
        map: &mut Vec<usize>,
        cand: &[u64],
        used: u64,
        budget: &mut Budget,
    ) -> Result<bool> {
        if x == src.n() {
            return Ok(true);
        }
        let mut options = cand[x] & !used;
        while options != 0 {
            let q = options.trailing_zeros() as usize;
            options &= options - 1;
            budget.tick()?;
            let ok = (0..x).all(|y| {
                src.leq(y, x) == tgt.leq(map[y], q) && src.leq(x, y) == tgt.leq(q, map[y])
            });
            if ok {
                map[x] = q;
                if dfs(src, tgt, x + 1, map, cand, used | (1 << q), budget)? {
                    return Ok(true);
                }
                map[x] = usize::MAX;
            }
        }
        Ok(false)
    }
    if dfs(src, tgt, 0, &mut map, &cand, 0, &mut budget)? {
        let pm = PosetMap::new(src, tgt, map)?;
        debug_assert!(is_order_embedding(src, tgt, &pm)?);
        Ok(Some(pm))
    } else {
        Ok(None)
    }
}

/// The constructive quotient of a co-tree onto the n-comb.
///
/// Finds the first order-embedding e of the comb, promotes e(x_n) to the
/// co-root, and runs the inductive block construction with the singleton
/// witnesses {e(x_i)}, {e(x_i')}: level by level it builds convex blocks
/// W_i around the spine images and downset blocks W_i' around the teeth,
/// reassigns the stray "1-points" (up W_{i-1} minus W_{i-1} and up W_i) and
/// their kin, and returns the block map, re-verified as a surjective
/// bi-p-morphism.
pub fn comb_quotient(x: &Poset, n: usize) -> Result<PosetMap> {
    if !x.is_co_tree() {
        return Err(Error::NotCoTree("comb quotient needs a co-tree".into()));
    }
    let comb = make_comb(n)?;
    let embedding = find_order_embedding(&comb, x, u64::MAX)?
        .ok_or(Error::NoCombEmbedding { n })?;
    let root = x.co_root().expect("co-tree has a co-root");
    // spine[i], tooth[i] are the embedded images, 1-based; the top spine
    // point is remapped to the co-root of x, which still embeds the comb
    let mut spine = vec![usize::MAX; n + 1];
    let mut tooth = vec![usize::MAX; n + 1];
    for i in 1..=n {
        spine[i] = embedding.map[comb_spine(i)];
        tooth[i] = embedding.map[comb_tooth(i)];
    }
    spine[n] = root;

    let bug = |msg: &str| Error::ConstructionBug(format!("comb quotient: {msg}"));

    // base level
    let mut later_teeth = 0u64;
    for &t in &tooth[2..=n] {
        later_teeth |= 1 << t;
    }
    let avoid = x.up_closure_mask(x.down_closure_mask(later_teeth)) | x.down_mask(tooth[1]);
    if avoid & (1 << spine[1]) != 0 {
        return Err(bug("x1 lies in the excluded region"));
    }
    let w1 = 1u64 << spine[1];
    let w1p = x.down_mask(spine[1]) & !w1;
    let mut blocks: Vec<u64> = vec![w1]; // X_1 .. X_m
    let mut blocks_p: Vec<u64> = vec![w1p]; // X_1' .. X_m'

    for m in 2..=n {
        let xm = spine[m];
        let xmp = tooth[m];
        let mut later = 0u64;
        for &t in &tooth[m + 1..=n] {
            later |= 1 << t;
        }
        let later_updown = x.up_closure_mask(x.down_closure_mask(later));
        let prev = blocks[m - 2];
        // the singleton witnesses must avoid the regions the construction
        // carves out; for genuine embeddings this always holds
        if (later_updown | x.up_closure_mask(x.down_closure_mask(prev))) & (1 << xmp) != 0 {
            return Err(bug("tooth witness in excluded region"));
        }
        if (later_updown | x.down_closure_mask(prev) | x.down_mask(xmp)) & (1 << xm) != 0 {
            return Err(bug("spine witness in excluded region"));
        }
        let wm = x.down_mask(xm)
            & x.up_closure_mask(prev)
            & x.up_closure_mask(x.down_mask(xmp));
        let wmp = x.down_mask(xmp) & x.down_closure_mask(wm);
        let dwm = x.down_closure_mask(wm);
        // restrict all earlier blocks below the new top block
        let mut w: Vec<u64> = blocks.iter().map(|b| b & dwm).collect();
        let mut wp: Vec<u64> = blocks_p.iter().map(|b| b & dwm).collect();
        let wm1 = w[m - 2];
        let wm1p = wp[m - 2];
        // 1-points and 1'-points
        let z = x.up_closure_mask(wm1) & !(wm1 | x.up_closure_mask(wm));
        let zp = x.up_closure_mask(wmp) & !(wmp | x.up_closure_mask(wm));
        let inconvenient = dwm & !(wm | x.down_closure_mask(wm1) | wmp);
        let mut z0 = 0u64;
        for e in mask_elements(inconvenient) {
            let de = x.down_mask(e);
            if de & x.down_closure_mask(wm1) == 0
                && de & wmp == 0
                && x.up_mask(e) & z == 0
                && x.up_mask(e) & zp == 0
            {
                z0 |= 1 << e;
            }
        }
        let vm1 = wm1 | z;
        let vm1p = wm1p | (x.down_closure_mask(z) & !(z | x.down_closure_mask(wm1)));
        let vmp = dwm & !(wm | x.down_closure_mask(vm1));
        if vmp != wmp | x.down_closure_mask(zp) | z0 {
            return Err(bug("V_m' decomposition mismatch"));
        }
        w[m - 2] = vm1;
        wp[m - 2] = vm1p;
        w.push(wm);
        wp.push(vmp);
        blocks = w;
        blocks_p = wp;
        // invariants of the inductive construction
        for i in 0..m {
            if blocks[i] & (1 << spine[i + 1]) == 0 || blocks_p[i] & (1 << tooth[i + 1]) == 0 {
                return Err(bug("witness fell out of its block"));
            }
            if !x.is_downset(blocks_p[i]) {
                return Err(bug("tooth block is not a downset"));
            }
            let b = blocks[i];
            if x.down_closure_mask(b) & x.up_closure_mask(b) & !b != 0 {
                return Err(bug("spine block is not convex"));
            }
        }
    }

    // the blocks partition the whole co-tree
    let mut union = 0u64;
    let mut total = 0;
    for &b in blocks.iter().chain(blocks_p.iter()) {
        union |= b;
        total += b.count_ones();
    }
    if union != x.full_mask() || total != x.n() as u32 {
        return Err(bug("blocks do not partition the co-tree"));
    }

    let mut map = vec![usize::MAX; x.n()];
    for (i, &b) in blocks.iter().enumerate() {
        for e in mask_elements(b) {
            map[e] = comb_spine(i + 1);
        }
    }
    for (i, &b) in blocks_p.iter().enumerate() {
        for e in mask_elements(b) {
            map[e] = comb_tooth(i + 1);
        }
    }
    let pm = PosetMap::new(x, &comb, map)?;
    if !is_bi_p_morphism(x, &comb, &pm)? || !pm.is_surjective(&comb) {
        return Err(bug("resulting map is not a surjective bi-p-morphism"));
    }
    Ok(pm)
}

/// Pairwise comparison of posets under "image of": `<=` means the left
/// poset is a bi-p-morphic image of the right one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Isomorphic,
    ImageOfRight,
    ImageOfLeft,
    Incomparable,
}

pub fn antichain_matrix(posets: &[Poset], node_budget: u64) -> Result<Vec<Vec<Relation>>> {
    let keys: Vec<Vec<u8>> = posets.iter().map(canonical_key).collect();
    let n = posets.len();
    let mut out = vec![vec![Relation::Incomparable; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = if posets[i].n() == posets[j].n() && keys[i] == keys[j] {
                Relation::Isomorphic
            } else {
                let i_of_j =
                    find_surjective_bi_p_morphism(&posets[j], &posets[i], node_budget)?
                        .is_some();
                let j_of_i =
                    find_surjective_bi_p_morphism(&posets[i], &posets[j], node_budget)?
                        .is_some();
                match (i_of_j, j_of_i) {
                    (true, true) => Relation::Isomorphic,
                    (true, false) => Relation::ImageOfRight,
                    (false, true) => Relation::ImageOfLeft,
                    (false, false) => Relation::Incomparable,
                }
            };
        }
    }
    Ok(out)
}
