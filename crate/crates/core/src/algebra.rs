//! Finite bi-Heyting and bi-Gödel algebras.
//!
//! Algebras are stored as explicit operation tables over dense element
//! indices. The two construction paths are `upset_algebra` (from a poset,
//! operations computed set-theoretically) and `from_lattice` (from an
//! abstract order matrix, with the lattice and residuation laws verified and
//! the implications recomputed).

use crate::enumerate::canonical_key;
use crate::error::{Error, Result};
use crate::poset::{mask_elements, Poset};
use std::collections::HashMap;

#[derive(Clone)]
pub struct BiHeytingAlgebra {
    // tables are flattened k*k row-major

    k: usize,
    leq: Vec<bool>,
    meet: Vec<u16>,
    join: Vec<u16>,
    imp: Vec<u16>,
    coimp: Vec<u16>,
    bot: usize,
    top: usize,
    labels: Vec<String>,
    /// When built from a poset: the upset mask of each element.
    upsets: Option<Vec<u64>>,
}

impl std::fmt::Debug for BiHeytingAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BiHeytingAlgebra(k={}, bot={}, top={})", self.k, self.bot, self.top)
    }
}

/// Which operations a map between algebras respects.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Preserved {
    pub meet: bool,
    pub join: bool,
    pub imp: bool,
    pub coimp: bool,
    pub bot: bool,
    pub top: bool,
}

impl Preserved {
    pub fn all(&self) -> bool {
        self.meet && self.join && self.imp && self.coimp && self.bot && self.top
    }

    pub fn heyting(&self) -> bool {
        self.meet && self.join && self.imp && self.bot && self.top
    }
}

/// A total map between two algebras, with verified preservation flags.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    pub map: Vec<usize>,
    pub preserved: Preserved,
}

impl AlgebraMap {
    /// Builds the map and records exactly which operations it preserves.
    pub fn verified(src: &BiHeytingAlgebra, tgt: &BiHeytingAlgebra, map: Vec<usize>) -> Self {
        let mut p = Preserved {
            meet: true,
            join: true,
            imp: true,
            coimp: true,
            bot: map[src.bot] == tgt.bot,
            top: map[src.top] == tgt.top,
        };
        for a in 0..src.k {
            for b in 0..src.k {
                if map[src.meet(a, b)] != tgt.meet(map[a], map[b]) {
                    p.meet = false;
                }
                if map[src.join(a, b)] != tgt.join(map[a], map[b]) {
                    p.join = false;
                }
                if map[src.imp(a, b)] != tgt.imp(map[a], map[b]) {
                    p.imp = false;
                }
                if map[src.coimp(a, b)] != tgt.coimp(map[a], map[b]) {
                    p.coimp = false;
                }
            }
        }
        AlgebraMap { map, preserved: p }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.map.iter().all(|&v| seen.insert(v))
    }
}

/// Operation signatures for generated subalgebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Signature {
    BiHeyting,
    Heyting,
    OrCoimp,
}

impl BiHeytingAlgebra {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn bot(&self) -> usize {
        self.bot
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    /// Upset masks when this algebra was built from a poset.
    pub fn upset_masks(&self) -> Option<&[u64]> {
        self.upsets.as_deref()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.k + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.k + b] as usize
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.k + b] as usize
    }

    pub fn imp(&self, a: usize, b: usize) -> usize {
        self.imp[a * self.k + b] as usize
    }

    pub fn coimp(&self, a: usize, b: usize) -> usize {
        self.coimp[a * self.k + b] as usize
    }

    pub fn neg(&self, a: usize) -> usize {
        self.imp(a, self.bot)
    }

    pub fn coneg(&self, a: usize) -> usize {
        self.coimp(self.top, a)
    }

    pub fn is_trivial(&self) -> bool {
        self.k == 1
    }

    pub fn same_tables(&self, other: &BiHeytingAlgebra) -> bool {
        self.k == other.k
            && self.leq == other.leq
            && self.meet == other.meet
            && self.join == other.join
            && self.imp == other.imp
            && self.coimp == other.coimp
    }

    /// The one-element algebra.
    pub fn trivial() -> BiHeytingAlgebra {
        BiHeytingAlgebra {
            k: 1,
            leq: vec![true],
            meet: vec![0],
            join: vec![0],
            imp: vec![0],
            coimp: vec![0],
            bot: 0,
            top: 0,
            labels: vec!["*".into()],
            upsets: Some(vec![0]),
        }
    }

    /// The algebra of all upsets of `p`: meet/join are intersection/union,
    /// `U -> V = P \ down(U \ V)` and `U <- V = up(U \ V)`.
    pub fn upset_algebra(p: &Poset, cap: usize) -> Result<BiHeytingAlgebra> {
        let masks = p.all_upsets(cap)?;
        let k = masks.len();
        let mut index: HashMap<u64, u16> = HashMap::with_capacity(k);
        for (i, &m) in masks.iter().enumerate() {
            index.insert(m, i as u16);
        }
        let full = p.full_mask();
        let mut leq = vec![false; k * k];
        let mut meet = vec![0u16; k * k];
        let mut join = vec![0u16; k * k];
        let mut imp = vec![0u16; k * k];
        let mut coimp = vec![0u16; k * k];
        for a in 0..k {
            for b in 0..k {
                let (u, v) = (masks[a], masks[b]);
                leq[a * k + b] = u & !v == 0;
                meet[a * k + b] = index[&(u & v)];
                join[a * k + b] = index[&(u | v)];
                imp[a * k + b] = index[&(full & !p.down_closure_mask(u & !v))];
                coimp[a * k + b] = index[&p.up_closure_mask(u & !v)];
            }
        }
        let labels = masks
            .iter()
            .map(|&m| {
                let names: Vec<&str> =
                    mask_elements(m).iter().map(|&e| p.label(e)).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        Ok(BiHeytingAlgebra {
            k,
            leq,
            meet,
            join,
            imp,
            coimp,
            bot: 0,
            top: k - 1,
            labels,
            upsets: Some(masks),
        })
    }

    /// Builds an abstract algebra from an order matrix. Verifies that the
    /// order is a bounded distributive lattice, recomputes both implications
    /// from it, and (when tables are supplied) checks them against the
    /// recomputed ones.
    pub fn from_lattice(
        labels: Vec<String>,
        leq_rows: &[Vec<bool>],
        supplied_imp: Option<&[Vec<usize>]>,
        supplied_coimp: Option<&[Vec<usize>]>,
    ) -> Result<BiHeytingAlgebra> {
        let k = leq_rows.len();
        if k == 0 {
            return Err(Error::NotALattice("empty carrier".into()));
        }
        if labels.len() != k || leq_rows.iter().any(|r| r.len() != k) {
            return Err(Error::MalformedAlgebra("ragged order matrix".into()));
        }
        let leq = |a: usize, b: usize| leq_rows[a][b];
        for a in 0..k {
            if !leq(a, a) {
                return Err(Error::NotALattice("order not reflexive".into()));
            }
            for b in 0..k {
                if a != b && leq(a, b) && leq(b, a) {
                    return Err(Error::NotALattice("order not antisymmetric".into()));
                }
                for c in 0..k {
                    if leq(a, b) && leq(b, c) && !leq(a, c) {
                        return Err(Error::NotALattice("order not transitive".into()));
                    }
                }
            }
        }
        let mut meet = vec![0u16; k * k];
        let mut join = vec![0u16; k * k];
        for a in 0..k {
            for b in 0..k {
                let lower: Vec<usize> = (0..k).filter(|&d| leq(d, a) && leq(d, b)).collect();
                let glb = lower
                    .iter()
                    .copied()
                    .find(|&m| lower.iter().all(|&d| leq(d, m)))
                    .ok_or_else(|| Error::NotALattice(format!("no meet of {a},{b}")))?;
                let upper: Vec<usize> = (0..k).filter(|&d| leq(a, d) && leq(b, d)).collect();
                let lub = upper
                    .iter()
                    .copied()
                    .find(|&j| upper.iter().all(|&d| leq(j, d)))
                    .ok_or_else(|| Error::NotALattice(format!("no join of {a},{b}")))?;
                meet[a * k + b] = glb as u16;
                join[a * k + b] = lub as u16;
            }
        }
        let bot = (0..k)
            .find(|&a| (0..k).all(|b| leq(a, b)))
            .ok_or_else(|| Error::NotALattice("no least element".into()))?;
        let top = (0..k)
            .find(|&a| (0..k).all(|b| leq(b, a)))
            .ok_or_else(|| Error::NotALattice("no greatest element".into()))?;
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let l = meet[a * k + join[b * k + c] as usize] as usize;
                    let r = join[(meet[a * k + b] as usize) * k + meet[a * k + c] as usize];
                    if l != r as usize {
                        return Err(Error::NotALattice("not distributive".into()));
                    }
                }
            }
        }
        // recompute both residuals from the lattice
        let mut imp = vec![0u16; k * k];
        let mut coimp = vec![0u16; k * k];
        for a in 0..k {
            for b in 0..k {
                let mut r = bot;
                for d in 0..k {
                    if leq(meet[a * k + d] as usize, b) {
                        r = join[r * k + d] as usize;
                    }
                }
                imp[a * k + b] = r as u16;
                let mut s = top;
                for d in 0..k {
                    if leq(a, join[d * k + b] as usize) {
                        s = meet[s * k + d] as usize;
                    }
                }
                coimp[a * k + b] = s as u16;
            }
        }
        // residuation must hold in a finite distributive lattice; check it
        // anyway so malformed inputs cannot slip through
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let l = leq(c, imp[a * k + b] as usize);
                    let r = leq(meet[a * k + c] as usize, b);
                    if l != r {
                        return Err(Error::NotBiHeyting(format!(
                            "implication residuation fails at ({a},{b},{c})"
                        )));
                    }
                    let l = leq(coimp[a * k + b] as usize, c);
                    let r = leq(a, join[b * k + c] as usize);
                    if l != r {
                        return Err(Error::NotBiHeyting(format!(
                            "co-implication residuation fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        if let Some(t) = supplied_imp {
            for a in 0..k {
                for b in 0..k {
                    if t[a][b] != imp[a * k + b] as usize {
                        return Err(Error::MalformedAlgebra(format!(
                            "supplied imp table disagrees at ({a},{b})"
                        )));
                    }
                }
            }
        }
        if let Some(t) = supplied_coimp {
            for a in 0..k {
                for b in 0..k {
                    if t[a][b] != coimp[a * k + b] as usize {
                        return Err(Error::MalformedAlgebra(format!(
                            "supplied coimp table disagrees at ({a},{b})"
                        )));
                    }
                }
            }
        }
        let mut flat = vec![false; k * k];
        for a in 0..k {
            for b in 0..k {
                flat[a * k + b] = leq_rows[a][b];
            }
        }
        Ok(BiHeytingAlgebra {
            k,
            leq: flat,
            meet,
            join,
            imp,
            coimp,
            bot,
            top,
            labels,
            upsets: None,
        })
    }

    /// Join-irreducible elements, ascending.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.k)
            .filter(|&a| {
                if a == self.bot {
                    return false;
                }
                let mut below = self.bot;
                for d in 0..self.k {
                    if d != a && self.leq(d, a) {
                        below = self.join(below, d);
                    }
                }
                below != a
            })
            .collect()
    }

    /// The dual poset: join-irreducibles (equivalently prime filters
    /// `{a : j <= a}` ordered by inclusion), which reverses the algebra
    /// order on the irreducibles.
    pub fn dual_poset(&self) -> Poset {
        let ji = self.join_irreducibles();
        let n = ji.len();
        let labels: Vec<String> = ji.iter().map(|&j| self.labels[j].clone()).collect();
        let mut adj = vec![0u64; n];
        for (x, &jx) in ji.iter().enumerate() {
            for (y, &jy) in ji.iter().enumerate() {
                if x != y && self.leq(jy, jx) {
                    adj[x] |= 1 << y;
                }
            }
        }
        Poset::from_adjacency(labels, &adj).expect("antisymmetric order cannot cycle")
    }

    /// For each element, the set of dual-poset points (join-irreducibles)
    /// below it in the algebra, as a mask over dual positions. This is the
    /// Birkhoff isomorphism onto the upsets of the dual.
    pub fn dual_element_masks(&self) -> Vec<u64> {
        let ji = self.join_irreducibles();
        (0..self.k)
            .map(|a| {
                let mut m = 0u64;
                for (pos, &j) in ji.iter().enumerate() {
                    if self.leq(j, a) {
                        m |= 1 << pos;
                    }
                }
                m
            })
            .collect()
    }

    /// Round-trips through the dual poset: returns the dual, the upset
    /// algebra over it, and the verified isomorphism.
    pub fn duality_witness(&self) -> Result<(Poset, BiHeytingAlgebra, AlgebraMap)> {
        let dual = self.dual_poset();
        let up = BiHeytingAlgebra::upset_algebra(&dual, self.k + 1)?;
        if up.k != self.k {
            return Err(Error::ConstructionBug(format!(
                "duality: |Up(dual)| = {} but |A| = {}",
                up.k, self.k
            )));
        }
        let masks = self.dual_element_masks();
        let up_masks = up.upsets.as_ref().unwrap();
        let mut index = HashMap::new();
        for (i, &m) in up_masks.iter().enumerate() {
            index.insert(m, i);
        }
        let mut map = Vec::with_capacity(self.k);
        for a in 0..self.k {
            let i = index.get(&masks[a]).ok_or_else(|| {
                Error::ConstructionBug(format!("duality: image of {a} is not an upset"))
            })?;
            map.push(*i);
        }
        let iso = AlgebraMap::verified(self, &up, map);
        if !iso.preserved.all() || !iso.is_injective() {
            return Err(Error::ConstructionBug(
                "duality: canonical map is not an isomorphism".into(),
            ));
        }
        Ok((dual, up, iso))
    }

    /// Subdirectly irreducible, by the bi-Gödel characterization: nontrivial
    /// with meet-irreducible bottom.
    pub fn is_si(&self) -> bool {
        if self.k < 2 {
            return false;
        }
        for a in 0..self.k {
            for b in 0..self.k {
                if a != self.bot && b != self.bot && self.meet(a, b) == self.bot {
                    return false;
                }
            }
        }
        true
    }

    /// Bi-Gödel: the dual poset is a co-forest.
    pub fn is_bi_godel(&self) -> bool {
        self.dual_poset().is_co_forest()
    }

    /// `x + y := neg((x <- y) v (y <- x))`; on an SI algebra this is top
    /// exactly when x = y and bottom otherwise.
    pub fn plus_term(&self, a: usize, b: usize) -> usize {
        self.neg(self.join(self.coimp(a, b), self.coimp(b, a)))
    }

    /// `t(x,y,z) := ((x+y) ^ z) v (neg(x+y) ^ x)`; a discriminator on SI
    /// bi-Gödel algebras.
    pub fn discriminator_eval(&self, a: usize, b: usize, c: usize) -> usize {
        let p = self.plus_term(a, b);
        self.join(self.meet(p, c), self.meet(self.neg(p), a))
    }

    /// Least subset of the carrier containing the seed and closed under the
    /// signature's operations. BiHeyting/Heyting signatures also seed bot and
    /// top; the (v, <-)-signature seeds nothing besides the given elements.
    pub fn generated_carrier(&self, seed: &[usize], sig: Signature) -> Vec<usize> {
        let words = self.k.div_ceil(64);
        let mut member = vec![0u64; words];
        let mut elems: Vec<usize> = Vec::new();
        let add = |e: usize, member: &mut Vec<u64>, queue: &mut Vec<usize>, elems: &mut Vec<usize>| {
            if member[e / 64] & (1 << (e % 64)) == 0 {
                member[e / 64] |= 1 << (e % 64);
                queue.push(e);
                elems.push(e);
            }
        };
        let mut queue = Vec::new();
        match sig {
            Signature::BiHeyting | Signature::Heyting => {
                add(self.bot, &mut member, &mut queue, &mut elems);
                add(self.top, &mut member, &mut queue, &mut elems);
            }
            Signature::OrCoimp => {}
        }
        for &s in seed {
            add(s, &mut member, &mut queue, &mut elems);
        }
        while let Some(e) = queue.pop() {
            let snapshot = elems.clone();
            for &f in &snapshot {
                let mut produce = |v: usize| add(v, &mut member, &mut queue, &mut elems);
                match sig {
                    Signature::BiHeyting => {
                        produce(self.meet(e, f));
                        produce(self.join(e, f));
                        produce(self.imp(e, f));
                        produce(self.imp(f, e));
                        produce(self.coimp(e, f));
                        produce(self.coimp(f, e));
                    }
                    Signature::Heyting => {
                        produce(self.meet(e, f));
                        produce(self.join(e, f));
                        produce(self.imp(e, f));
                        produce(self.imp(f, e));
                    }
                    Signature::OrCoimp => {
                        produce(self.join(e, f));
                        produce(self.coimp(e, f));
                        produce(self.coimp(f, e));
                    }
                }
            }
        }
        elems.sort_unstable();
        elems
    }

    /// Generated sub-carrier plus the inclusion map with verified closure
    /// flags.
    pub fn generated_subalgebra(&self, seed: &[usize], sig: Signature) -> (Vec<usize>, AlgebraMap) {
        let elems = self.generated_carrier(seed, sig);
        let preserved = self.inclusion_flags(&elems);
        (elems.clone(), AlgebraMap { map: elems, preserved })
    }

    fn inclusion_flags(&self, elems: &[usize]) -> Preserved {
        let inside = |v: usize| elems.binary_search(&v).is_ok();
        let mut p = Preserved {
            meet: true,
            join: true,
            imp: true,
            coimp: true,
            bot: inside(self.bot),
            top: inside(self.top),
        };
        for &a in elems {
            for &b in elems {
                p.meet &= inside(self.meet(a, b));
                p.join &= inside(self.join(a, b));
                p.imp &= inside(self.imp(a, b));
                p.coimp &= inside(self.coimp(a, b));
            }
        }
        p
    }

    /// True when the seed generates the whole algebra as a bi-Heyting
    /// algebra.
    pub fn generates(&self, seed: &[usize]) -> bool {
        self.generated_carrier(seed, Signature::BiHeyting).len() == self.k
    }

    /// Minimal m such that some m-element subset generates the algebra;
    /// subsets tried by size, then lexicographically.
    pub fn gen_rank(&self, cap: usize) -> Result<usize> {
        if self.k > cap {
            return Err(Error::GenRankCapExceeded { size: self.k, cap });
        }
        for m in 0..=self.k {
            if m == 0 {
                if self.generates(&[]) {
                    return Ok(0);
                }
                continue;
            }
            let mut subset: Vec<usize> = (0..m).collect();
            loop {
                if self.generates(&subset) {
                    return Ok(m);
                }
                // next m-combination of 0..k in lexicographic order
                let mut i = m as isize - 1;
                while i >= 0 && subset[i as usize] == self.k - m + i as usize {
                    i -= 1;
                }
                if i < 0 {
                    break;
                }
                let i = i as usize;
                subset[i] += 1;
                for j in i + 1..m {
                    subset[j] = subset[j - 1] + 1;
                }
            }
        }
        Err(Error::ConstructionBug(
            "whole carrier fails to generate itself".into(),
        ))
    }

    /// Extracts the sub-carrier as an algebra of its own, re-indexed. The
    /// carrier must be closed under meet, join and imp and contain the
    /// bounds; the co-implication is recomputed internally as the finite
    /// meet of `{c : a <= c v b}` over the sub-carrier.
    pub fn carrier_algebra(&self, elems: &[usize]) -> Result<(BiHeytingAlgebra, AlgebraMap)> {
        let flags = self.inclusion_flags(elems);
        if !(flags.meet && flags.join && flags.imp && flags.bot && flags.top) {
            return Err(Error::MalformedAlgebra(
                "carrier is not a Heyting subalgebra".into(),
            ));
        }
        let k = elems.len();
        let mut rows = vec![vec![false; k]; k];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                rows[i][j] = self.leq(a, b);
            }
        }
        let labels = elems.iter().map(|&e| self.labels[e].clone()).collect();
        let sub = BiHeytingAlgebra::from_lattice(labels, &rows, None, None)?;
        let inclusion = AlgebraMap {
            map: elems.to_vec(),
            preserved: flags,
        };
        Ok((sub, inclusion))
    }

    /// All homomorphic images: one per union of connected components of the
    /// dual poset, each realized as the upset algebra of that union together
    /// with the projection map. Includes the trivial quotient (empty union)
    /// and the identity quotient (full union).
    pub fn hom_images(&self) -> Result<Vec<(BiHeytingAlgebra, AlgebraMap)>> {
        let dual = self.dual_poset();
        let comps = dual.components();
        let masks = self.dual_element_masks();
        let mut out = Vec::new();
        for choice in 0u64..(1 << comps.len()) {
            let mut union = 0u64;
            for (i, &c) in comps.iter().enumerate() {
                if choice & (1 << i) != 0 {
                    union |= c;
                }
            }
            let (sub, elems) = dual.induced(union);
            let quotient = BiHeytingAlgebra::upset_algebra(&sub, self.k + 1)?;
            // position of old dual point -> new index
            let mut newpos = HashMap::new();
            for (new, &old) in elems.iter().enumerate() {
                newpos.insert(old, new);
            }
            let qmasks = quotient.upsets.as_ref().unwrap();
            let mut qindex = HashMap::new();
            for (i, &m) in qmasks.iter().enumerate() {
                qindex.insert(m, i);
            }
            let mut map = Vec::with_capacity(self.k);
            for a in 0..self.k {
                let mut m = 0u64;
                for old in mask_elements(masks[a] & union) {
                    m |= 1 << newpos[&old];
                }
                map.push(*qindex.get(&m).ok_or_else(|| {
                    Error::ConstructionBug("projection image is not an upset".into())
                })?);
            }
            let proj = AlgebraMap::verified(self, &quotient, map);
            if !proj.preserved.all() {
                return Err(Error::ConstructionBug(
                    "component projection is not a homomorphism".into(),
                ));
            }
            out.push((quotient, proj));
        }
        Ok(out)
    }

    /// The SI homomorphic images: quotients by single components of the dual.
    pub fn si_hom_images(&self) -> Result<Vec<(BiHeytingAlgebra, AlgebraMap)>> {
        Ok(self
            .hom_images()?
            .into_iter()
            .filter(|(q, _)| q.is_si())
            .collect())
    }
}

/// Result of filtrating a refutation through the Heyting subalgebra
/// generated by the subformula values.
#[derive(Clone, Debug)]
pub struct Filtration {
    pub algebra: BiHeytingAlgebra,
    /// Inclusion of the filtrated carrier into the original algebra.
    pub inclusion: AlgebraMap,
    /// The refuting valuation, re-indexed into the filtrated algebra.
    pub valuation: crate::semantics::Valuation,
    /// Subformula values in original-algebra indices.
    pub theta: Vec<usize>,
}

/// Given a bi-Gödel algebra refuting `phi` via `v`, returns the finite
/// Heyting subalgebra generated by the subformula values, with the
/// co-implication recomputed internally as the finite meet of
/// `{c : a <= c v b}` over the new carrier. The result still refutes `phi`
/// under the same valuation and is SI whenever the input is.
pub fn filtration(
    b: &BiHeytingAlgebra,
    phi: &crate::formula::Formula,
    v: &crate::semantics::Valuation,
) -> Result<Filtration> {
    use crate::semantics::eval;
    if eval(b, phi, v)? == b.top() {
        return Err(Error::NotRefuting);
    }
    let mut theta: Vec<usize> = Vec::new();
    for sub in phi.subformulas() {
        let value = eval(b, sub, v)?;
        if !theta.contains(&value) {
            theta.push(value);
        }
    }
    theta.sort_unstable();
    let carrier = b.generated_carrier(&theta, Signature::Heyting);
    let (algebra, inclusion) = b.carrier_algebra(&carrier)?;
    let position =
        |e: usize| carrier.binary_search(&e).expect("valuation lands in the carrier");
    let valuation: crate::semantics::Valuation = v
        .iter()
        .filter(|(name, _)| phi.vars().contains(*name))
        .map(|(name, &e)| (name.clone(), position(e)))
        .collect();
    if eval(&algebra, phi, &valuation)? == algebra.top() {
        return Err(Error::ConstructionBug(
            "filtration no longer refutes the formula".into(),
        ));
    }
    Ok(Filtration { algebra, inclusion, valuation, theta })
}

/// Algebra isomorphism via canonical forms of the dual posets (the lattice
/// order determines both implications, so lattice isomorphism suffices).
pub fn algebras_isomorphic(a: &BiHeytingAlgebra, b: &BiHeytingAlgebra) -> bool {
    a.k() == b.k() && canonical_key(&a.dual_poset()) == canonical_key(&b.dual_poset())
}

/// Linear (chain) algebra with k elements.
pub fn chain_algebra(k: usize) -> Result<BiHeytingAlgebra> {
    if k == 0 {
        return Err(Error::OutOfRange("chain algebra needs k >= 1".into()));
    }
    let labels: Vec<String> = (0..k).map(|i| format!("c{i}")).collect();
    let rows: Vec<Vec<bool>> = (0..k).map(|a| (0..k).map(|b| a <= b).collect()).collect();
    BiHeytingAlgebra::from_lattice(labels, &rows, None, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{make_antichain, make_chain, make_cofork, make_comb};

    fn boolean4() -> BiHeytingAlgebra {
        BiHeytingAlgebra::upset_algebra(&make_antichain(2).unwrap(), 100).unwrap()
    }

    #[test]
    fn upset_algebra_of_two_chain_is_three_chain() {
        let a = BiHeytingAlgebra::upset_algebra(&make_chain(2).unwrap(), 100).unwrap();
        assert_eq!(a.k(), 3);
        assert!(a.same_tables(&chain_algebra(3).unwrap()));
    }

    #[test]
    fn upset_algebra_of_one_comb_is_three_chain() {
        let a = BiHeytingAlgebra::upset_algebra(&make_comb(1).unwrap(), 100).unwrap();
        assert!(a.same_tables(&chain_algebra(3).unwrap()));
    }

    #[test]
    fn upset_algebra_of_two_comb_has_seven_elements() {
        let a = BiHeytingAlgebra::upset_algebra(&make_comb(2).unwrap(), 100).unwrap();
        assert_eq!(a.k(), 7);
    }

    #[test]
    fn residuation_holds_on_upset_algebras() {
        for p in [make_comb(2).unwrap(), make_cofork(3).unwrap()] {
            let alg = BiHeytingAlgebra::upset_algebra(&p, 1000).unwrap();
            for a in 0..alg.k() {
                for b in 0..alg.k() {
                    for c in 0..alg.k() {
                        assert_eq!(
                            alg.leq(c, alg.imp(a, b)),
                            alg.leq(alg.meet(a, c), b)
                        );
                        assert_eq!(
                            alg.leq(alg.coimp(a, b), c),
                            alg.leq(a, alg.join(b, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn dual_of_three_chain_is_two_chain() {
        let dual = chain_algebra(3).unwrap().dual_poset();
        assert_eq!(dual.n(), 2);
        assert!(dual.is_chain_mask(dual.full_mask()));
    }

    #[test]
    fn dual_of_two_element_boolean_is_point() {
        assert_eq!(chain_algebra(2).unwrap().dual_poset().n(), 1);
    }

    #[test]
    fn duality_round_trip_on_comb() {
        let c2 = make_comb(2).unwrap();
        let a = BiHeytingAlgebra::upset_algebra(&c2, 100).unwrap();
        let (dual, _, iso) = a.duality_witness().unwrap();
        assert!(crate::enumerate::isomorphic(&dual, &c2));
        assert!(iso.preserved.all());
    }

    #[test]
    fn si_checks() {
        assert!(chain_algebra(3).unwrap().is_si());
        assert!(!boolean4().is_si());
        for n in 1..=4 {
            let a =
                BiHeytingAlgebra::upset_algebra(&make_comb(n).unwrap(), 1000).unwrap();
            assert!(a.is_si());
        }
        assert!(!BiHeytingAlgebra::trivial().is_si());
    }

    #[test]
    fn bi_godel_checks() {
        assert!(chain_algebra(4).unwrap().is_bi_godel());
        assert!(boolean4().is_bi_godel()); // dual is a 2-point antichain
        let diamond = crate::poset::build_poset(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        )
        .unwrap();
        let alg = BiHeytingAlgebra::upset_algebra(&diamond, 100).unwrap();
        assert!(!alg.is_bi_godel());
    }

    #[test]
    fn discriminator_on_si() {
        for p in [make_comb(2).unwrap(), make_cofork(2).unwrap()] {
            let a = BiHeytingAlgebra::upset_algebra(&p, 100).unwrap();
            assert!(a.is_si());
            for x in 0..a.k() {
                for y in 0..a.k() {
                    let plus = a.plus_term(x, y);
                    assert_eq!(plus, if x == y { a.top() } else { a.bot() });
                    for z in 0..a.k() {
                        let t = a.discriminator_eval(x, y, z);
                        assert_eq!(t, if x == y { z } else { x });
                    }
                }
            }
        }
    }

    #[test]
    fn plus_term_defined_off_si() {
        let b = boolean4();
        // total function; just compose the tables
        let a = 1;
        let c = 2;
        let expect = b.neg(b.join(b.coimp(a, c), b.coimp(c, a)));
        assert_eq!(b.plus_term(a, c), expect);
        assert_ne!(b.plus_term(a, c), b.top());
    }

    #[test]
    fn generated_subalgebras() {
        let three = chain_algebra(3).unwrap();
        let (empty_gen, _) = three.generated_subalgebra(&[], Signature::BiHeyting);
        assert_eq!(empty_gen, vec![0, 2]);
        assert!(three.generates(&[1]));
        // heyting closure of {b} in the 4-chain 0 < a < b < 1 is {0, b, 1}
        let four = chain_algebra(4).unwrap();
        let (h, incl) = four.generated_subalgebra(&[2], Signature::Heyting);
        assert_eq!(h, vec![0, 2, 3]);
        assert!(incl.preserved.heyting());
    }

    #[test]
    fn or_coimp_closure_forces_zero() {
        let four = chain_algebra(4).unwrap();
        let (c, _) = four.generated_subalgebra(&[2], Signature::OrCoimp);
        assert_eq!(c, vec![0, 2]);
        let (e, _) = four.generated_subalgebra(&[], Signature::OrCoimp);
        assert!(e.is_empty());
    }

    #[test]
    fn gen_ranks() {
        assert_eq!(chain_algebra(2).unwrap().gen_rank(12).unwrap(), 0);
        assert_eq!(chain_algebra(3).unwrap().gen_rank(12).unwrap(), 1);
        let c3 = BiHeytingAlgebra::upset_algebra(&make_comb(3).unwrap(), 100).unwrap();
        assert_eq!(c3.gen_rank(64).unwrap(), 1);
        let big = BiHeytingAlgebra::upset_algebra(&make_antichain(4).unwrap(), 100).unwrap();
        assert!(matches!(
            big.gen_rank(12),
            Err(Error::GenRankCapExceeded { .. })
        ));
    }

    #[test]
    fn hom_images_of_si_and_products() {
        let si = BiHeytingAlgebra::upset_algebra(&make_comb(2).unwrap(), 100).unwrap();
        let images = si.hom_images().unwrap();
        assert_eq!(images.len(), 2);
        assert!(images[0].0.is_trivial());
        assert!(algebras_isomorphic(&images[1].0, &si));

        // product of two SIs: dual has two components, four images
        let two = make_comb(1)
            .unwrap()
            .disjoint_union(&make_chain(3).unwrap())
            .unwrap();
        let prod = BiHeytingAlgebra::upset_algebra(&two, 100).unwrap();
        assert_eq!(prod.hom_images().unwrap().len(), 4);
        assert_eq!(prod.si_hom_images().unwrap().len(), 2);

        let trivial = BiHeytingAlgebra::trivial();
        assert_eq!(trivial.hom_images().unwrap().len(), 1);
    }

    #[test]
    fn from_lattice_rejects_garbage() {
        // non-distributive M3
        let rows = vec![
            vec![true, true, true, true, true],
            vec![false, true, false, false, true],
            vec![false, false, true, false, true],
            vec![false, false, false, true, true],
            vec![false, false, false, false, true],
        ];
        let labels = (0..5).map(|i| format!("m{i}")).collect();
        assert!(matches!(
            BiHeytingAlgebra::from_lattice(labels, &rows, None, None),
            Err(Error::NotALattice(_))
        ));
    }

    #[test]
    fn filtration_on_three_chain() {
        use crate::formula::parse;
        let three = chain_algebra(3).unwrap();
        let phi = parse("p | !p").unwrap();
        let mut v = crate::semantics::Valuation::new();
        v.insert("p".into(), 1);
        let f = filtration(&three, &phi, &v).unwrap();
        assert_eq!(f.algebra.k(), 3);
        assert!(f.algebra.is_bi_godel());
        assert!(f.algebra.is_si());
        // a valid formula is rejected
        let mut v_top = crate::semantics::Valuation::new();
        v_top.insert("p".into(), 2);
        assert!(matches!(
            filtration(&three, &phi, &v_top),
            Err(Error::NotRefuting)
        ));
    }

    #[test]
    fn filtration_coimp_agrees_on_theta_pairs() {
        use crate::formula::parse;
        // B = upsets of the 2-comb; filtrate a coimplication-heavy formula
        let b = BiHeytingAlgebra::upset_algebra(&make_comb(2).unwrap(), 100).unwrap();
        let phi = parse("(p <- q) | !(q <- p)").unwrap();
        let v = match crate::semantics::is_valid(&b, &phi, 1_000_000).unwrap() {
            crate::semantics::Verdict::Refuted { valuation } => valuation,
            crate::semantics::Verdict::Valid => panic!("formula should be refutable"),
        };
        let f = filtration(&b, &phi, &v).unwrap();
        let carrier = &f.inclusion.map;
        // where the original coimplication lands inside the carrier, the
        // recomputed one matches it
        for (i, &a) in carrier.iter().enumerate() {
            for (j, &c) in carrier.iter().enumerate() {
                let orig = b.coimp(a, c);
                if let Ok(pos) = carrier.binary_search(&orig) {
                    if f.theta.contains(&orig) {
                        assert_eq!(f.algebra.coimp(i, j), pos);
                    }
                }
            }
        }
    }

    #[test]
    fn subalgebra_of_si_is_si() {
        let c3 = BiHeytingAlgebra::upset_algebra(&make_comb(3).unwrap(), 100).unwrap();
        for seed in [vec![1], vec![2, 5], vec![3, 4, 7]] {
            let carrier = c3.generated_carrier(&seed, Signature::BiHeyting);
            let (sub, _) = c3.carrier_algebra(&carrier).unwrap();
            assert!(sub.is_si(), "seed {seed:?}");
        }
    }
}
