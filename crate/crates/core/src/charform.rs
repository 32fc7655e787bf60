//! Stable canonical, Jankov, and subframe formulas, with executable
//! two-sided verification of their refutation lemmas.
//!
//! The formula side describes an SI bi-Gödel algebra A by one variable per
//! element: `gamma(A, D)` fixes the Heyting structure fully and the
//! co-implication only on the pairs in D, `jankov(A) = gamma(A, A^2)`,
//! and `beta(A)` fixes only the (join, co-implication) structure.
//!
//! Refutation of such a formula in an algebra B is checked two ways: by a
//! plain validity sweep (`semantics::is_valid`) where the valuation count
//! allows it, and by `refutes_char`, which decomposes B into its SI
//! component images and, on each co-tree-dual image, enumerates exactly the
//! valuations with v(Gamma) = 1 by backtracking with forced propagation.
//! On an SI image the antecedent `!~Gamma` collapses to 0/1 and the
//! consequent's conjunction is nonzero iff every conjunct is (bottom is
//! meet-irreducible), so refutation is equivalent to finding such a
//! valuation that also reflects the order.

use crate::algebra::{AlgebraMap, BiHeytingAlgebra};
use crate::error::{Error, Result};
use crate::formula::{self, Formula};
use crate::morphism::{find_order_embedding, find_surjective_bi_p_morphism, PosetMap};
use crate::poset::Poset;
use crate::semantics::{self, Valuation, Verdict};
use std::collections::BTreeSet;

/// A set of ordered element pairs of an algebra on which the co-implication
/// is pinned.
pub type StableDomain = BTreeSet<(usize, usize)>;

pub fn full_domain(a: &BiHeytingAlgebra) -> StableDomain {
    let mut d = StableDomain::new();
    for x in 0..a.k() {
        for y in 0..a.k() {
            d.insert((x, y));
        }
    }
    d
}

fn pvar(a: usize) -> Formula {
    formula::var(&format!("x{a}"))
}

fn check_si_bi_godel(a: &BiHeytingAlgebra) -> Result<()> {
    if !a.is_si() {
        return Err(Error::NotSi);
    }
    if !a.is_bi_godel() {
        return Err(Error::NotBiGodel);
    }
    Ok(())
}

/// The consequent `!(/\ {x_a <- x_b : a not<= b})`, conjuncts in row-major
/// element order.
fn consequent(a: &BiHeytingAlgebra) -> Formula {
    let mut conjuncts = Vec::new();
    for x in 0..a.k() {
        for y in 0..a.k() {
            if !a.leq(x, y) {
                conjuncts.push(formula::coimp(pvar(x), pvar(y)));
            }
        }
    }
    formula::neg(formula::big_and(conjuncts))
}

/// Stable canonical formula of (A, D).
pub fn gamma(a: &BiHeytingAlgebra, domain: &StableDomain) -> Result<Formula> {
    check_si_bi_godel(a)?;
    let mut conjuncts = Vec::new();
    for x in 0..a.k() {
        for y in 0..a.k() {
            conjuncts.push(formula::iff(
                pvar(a.join(x, y)),
                formula::or(pvar(x), pvar(y)),
            ));
        }
    }
    for x in 0..a.k() {
        for y in 0..a.k() {
            conjuncts.push(formula::iff(
                pvar(a.meet(x, y)),
                formula::and(pvar(x), pvar(y)),
            ));
        }
    }
    for x in 0..a.k() {
        for y in 0..a.k() {
            conjuncts.push(formula::iff(
                pvar(a.imp(x, y)),
                formula::imp(pvar(x), pvar(y)),
            ));
        }
    }
    for &(x, y) in domain {
        if x >= a.k() || y >= a.k() {
            return Err(Error::OutOfRange("stable domain pair".into()));
        }
        conjuncts.push(formula::iff(
            pvar(a.coimp(x, y)),
            formula::coimp(pvar(x), pvar(y)),
        ));
    }
    conjuncts.push(formula::iff(pvar(a.bot()), Formula::Bot));
    conjuncts.push(formula::iff(pvar(a.top()), Formula::Top));
    let big = formula::big_and(conjuncts);
    Ok(formula::imp(
        formula::neg(formula::coneg(big)),
        consequent(a),
    ))
}

/// Jankov formula: gamma with the full domain.
pub fn jankov(a: &BiHeytingAlgebra) -> Result<Formula> {
    gamma(a, &full_domain(a))
}

/// Subframe formula: only the join and co-implication structure.
pub fn beta(a: &BiHeytingAlgebra) -> Result<Formula> {
    check_si_bi_godel(a)?;
    let mut conjuncts = Vec::new();
    for x in 0..a.k() {
        for y in 0..a.k() {
            conjuncts.push(formula::iff(
                pvar(a.join(x, y)),
                formula::or(pvar(x), pvar(y)),
            ));
        }
    }
    for x in 0..a.k() {
        for y in 0..a.k() {
            conjuncts.push(formula::iff(
                pvar(a.coimp(x, y)),
                formula::coimp(pvar(x), pvar(y)),
            ));
        }
    }
    let big = formula::big_and(conjuncts);
    Ok(formula::imp(
        formula::neg(formula::coneg(big)),
        consequent(a),
    ))
}

/// Which structure of the source algebra a characteristic-formula valuation
/// must respect.
#[derive(Clone, Debug)]
pub enum CharKind {
    Stable(StableDomain),
    Jankov,
    Subframe,
}

impl CharKind {
    fn heyting_ops(&self) -> bool {
        matches!(self, CharKind::Stable(_) | CharKind::Jankov)
    }

    fn coimp_pair(&self, x: usize, y: usize) -> bool {
        match self {
            CharKind::Stable(d) => d.contains(&(x, y)),
            CharKind::Jankov | CharKind::Subframe => true,
        }
    }
}

struct HomSearch<'a> {
    src: &'a BiHeytingAlgebra,
    tgt: &'a BiHeytingAlgebra,
    kind: &'a CharKind,
    h: Vec<usize>,
    nodes: u64,
    limit: u64,
}

const UNSET: usize = usize::MAX;

impl<'a> HomSearch<'a> {
    /// Assigns h(e) = v, propagating every value the equations force.
    /// Returns false on conflict; `trail` records assignments for undo.
    fn assign(&mut self, e: usize, v: usize, trail: &mut Vec<usize>) -> bool {
        if self.h[e] != UNSET {
            return self.h[e] == v;
        }
        // order invariance against everything assigned (all modes preserve
        // joins, hence are monotone, and must reflect the order so that the
        // consequent's conjunction stays above bottom)
        for x in 0..self.src.k() {
            if self.h[x] == UNSET || x == e {
                continue;
            }
            if self.src.leq(e, x) != self.tgt.leq(v, self.h[x])
                || self.src.leq(x, e) != self.tgt.leq(self.h[x], v)
            {
                return false;
            }
        }
        self.h[e] = v;
        trail.push(e);
        let mut queue = vec![e];
        while let Some(y) = queue.pop() {
            for x in 0..self.src.k() {
                if self.h[x] == UNSET {
                    continue;
                }
                for (p, q) in [(x, y), (y, x)] {
                    let force = |sr: usize, tv: usize,
                                     me: &mut Self,
                                     trail: &mut Vec<usize>,
                                     queue: &mut Vec<usize>|
                     -> bool {
                        if me.h[sr] != UNSET {
                            me.h[sr] == tv
                        } else {
                            // inline the invariance check before accepting
                            for z in 0..me.src.k() {
                                if me.h[z] == UNSET || z == sr {
                                    continue;
                                }
                                if me.src.leq(sr, z) != me.tgt.leq(tv, me.h[z])
                                    || me.src.leq(z, sr) != me.tgt.leq(me.h[z], tv)
                                {
                                    return false;
                                }
                            }
                            me.h[sr] = tv;
                            trail.push(sr);
                            queue.push(sr);
                            true
                        }
                    };
                    let (hp, hq) = (self.h[p], self.h[q]);
                    if !force(
                        self.src.join(p, q),
                        self.tgt.join(hp, hq),
                        self,
                        trail,
                        &mut queue,
                    ) {
                        return false;
                    }
                    if self.kind.heyting_ops() {
                        if !force(
                            self.src.meet(p, q),
                            self.tgt.meet(hp, hq),
                            self,
                            trail,
                            &mut queue,
                        ) {
                            return false;
                        }
                        if !force(
                            self.src.imp(p, q),
                            self.tgt.imp(hp, hq),
                            self,
                            trail,
                            &mut queue,
                        ) {
                            return false;
                        }
                    }
                    if self.kind.coimp_pair(p, q)
                        && !force(
                            self.src.coimp(p, q),
                            self.tgt.coimp(hp, hq),
                            self,
                            trail,
                            &mut queue,
                        )
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn dfs(&mut self) -> Result<bool> {
        let Some(e) = (0..self.src.k()).find(|&e| self.h[e] == UNSET) else {
            return Ok(self.verify());
        };
        for v in 0..self.tgt.k() {
            self.nodes += 1;
            if self.nodes > self.limit {
                return Err(Error::SearchBudgetExceeded { budget: self.limit });
            }
            let mut trail = Vec::new();
            if self.assign(e, v, &mut trail) && self.dfs()? {
                return Ok(true);
            }
            for &t in &trail {
                self.h[t] = UNSET;
            }
        }
        Ok(false)
    }

    /// Full re-check of the completed map.
    fn verify(&self) -> bool {
        let (a, c) = (self.src, self.tgt);
        for x in 0..a.k() {
            for y in 0..a.k() {
                if a.leq(x, y) != c.leq(self.h[x], self.h[y]) {
                    return false;
                }
                if self.h[a.join(x, y)] != c.join(self.h[x], self.h[y]) {
                    return false;
                }
                if self.kind.heyting_ops()
                    && (self.h[a.meet(x, y)] != c.meet(self.h[x], self.h[y])
                        || self.h[a.imp(x, y)] != c.imp(self.h[x], self.h[y]))
                {
                    return false;
                }
                if self.kind.coimp_pair(x, y)
                    && self.h[a.coimp(x, y)] != c.coimp(self.h[x], self.h[y])
                {
                    return false;
                }
            }
        }
        if self.kind.heyting_ops()
            && (self.h[a.bot()] != c.bot() || self.h[a.top()] != c.top())
        {
            return false;
        }
        true
    }
}

/// First (lexicographic in assignment order) structure-respecting,
/// order-invariant map A -> C for the given kind, or None.
fn char_hom(
    a: &BiHeytingAlgebra,
    kind: &CharKind,
    c: &BiHeytingAlgebra,
    node_budget: u64,
) -> Result<Option<Vec<usize>>> {
    let mut search = HomSearch {
        src: a,
        tgt: c,
        kind,
        h: vec![UNSET; a.k()],
        nodes: 0,
        limit: node_budget,
    };
    if kind.heyting_ops() {
        let mut trail = Vec::new();
        if !search.assign(a.bot(), c.bot(), &mut trail)
            || !search.assign(a.top(), c.top(), &mut trail)
        {
            return Ok(None);
        }
    }
    Ok(if search.dfs()? {
        Some(search.h)
    } else {
        None
    })
}

/// Injective Heyting homomorphism A -> C satisfying the co-implication
/// stable-domain condition for D, as a verified AlgebraMap.
pub fn sdc_embedding_search(
    a: &BiHeytingAlgebra,
    domain: &StableDomain,
    c: &BiHeytingAlgebra,
    node_budget: u64,
) -> Result<Option<AlgebraMap>> {
    let kind = CharKind::Stable(domain.clone());
    Ok(char_hom(a, &kind, c, node_budget)?.map(|h| {
        let m = AlgebraMap::verified(a, c, h);
        debug_assert!(m.preserved.heyting() && m.is_injective());
        m
    }))
}

/// Semantic refutation of the characteristic formula of (A, kind) in B, by
/// SI decomposition: B refutes iff some SI component image C of B carries a
/// valuation with v(Gamma) = 1 whose consequent stays refuted. Returns the
/// component index and the witness map.
pub fn refutes_char(
    b: &BiHeytingAlgebra,
    a: &BiHeytingAlgebra,
    kind: &CharKind,
    node_budget: u64,
) -> Result<Option<(usize, Vec<usize>)>> {
    check_si_bi_godel(a)?;
    for (i, (c, _)) in b.si_hom_images()?.into_iter().enumerate() {
        if let Some(h) = char_hom(a, kind, &c, node_budget)? {
            return Ok(Some((i, h)));
        }
    }
    Ok(None)
}

/// Two-sided check of the stable refutation lemma: the validity sweep for
/// gamma(A, D) on B against the SDC-embedding search into the SI images.
#[derive(Clone, Debug)]
pub struct StableReport {
    pub refuted: Option<Valuation>,
    pub embedding: Option<(usize, AlgebraMap)>,
    pub equivalent: bool,
}

pub fn check_stable_refutation(
    b: &BiHeytingAlgebra,
    a: &BiHeytingAlgebra,
    domain: &StableDomain,
    valuation_budget: u64,
    node_budget: u64,
) -> Result<StableReport> {
    let formula = gamma(a, domain)?;
    let refuted = match semantics::is_valid(b, &formula, valuation_budget)? {
        Verdict::Valid => None,
        Verdict::Refuted { valuation } => Some(valuation),
    };
    let mut embedding = None;
    for (i, (c, _)) in b.si_hom_images()?.into_iter().enumerate() {
        if c.is_si() {
            if let Some(m) = sdc_embedding_search(a, domain, &c, node_budget)? {
                embedding = Some((i, m));
                break;
            }
        }
    }
    let equivalent = refuted.is_some() == embedding.is_some();
    Ok(StableReport { refuted, embedding, equivalent })
}

/// Two-sided check of the Jankov lemma: semantic refutation of J(A) in B
/// against a surjective bi-p-morphism from a component of B's dual onto
/// A's dual.
#[derive(Clone, Debug)]
pub struct JankovReport {
    pub refuted: Option<(usize, Vec<usize>)>,
    pub surjection: Option<(usize, PosetMap)>,
    pub equivalent: bool,
}

pub fn check_jankov_refutation(
    b: &BiHeytingAlgebra,
    a: &BiHeytingAlgebra,
    node_budget: u64,
) -> Result<JankovReport> {
    let refuted = refutes_char(b, a, &CharKind::Jankov, node_budget)?;
    let dual_a = a.dual_poset();
    let dual_b = b.dual_poset();
    let mut surjection = None;
    for (i, comp) in dual_b.components().into_iter().enumerate() {
        let (part, _) = dual_b.induced(comp);
        if let Some(f) = find_surjective_bi_p_morphism(&part, &dual_a, node_budget)? {
            surjection = Some((i, f));
            break;
        }
    }
    let equivalent = refuted.is_some() == surjection.is_some();
    Ok(JankovReport { refuted, surjection, equivalent })
}

/// Two-sided check of the subframe lemma: semantic refutation of beta(A)
/// in B against an order-embedding of A's dual into B's dual.
#[derive(Clone, Debug)]
pub struct SubframeReport {
    pub refuted: Option<(usize, Vec<usize>)>,
    pub embedding: Option<PosetMap>,
    pub equivalent: bool,
}

pub fn check_subframe_refutation(
    b: &BiHeytingAlgebra,
    a: &BiHeytingAlgebra,
    node_budget: u64,
) -> Result<SubframeReport> {
    let refuted = refutes_char(b, a, &CharKind::Subframe, node_budget)?;
    let embedding = find_order_embedding(&a.dual_poset(), &b.dual_poset(), node_budget)?;
    let equivalent = refuted.is_some() == embedding.is_some();
    Ok(SubframeReport { refuted, embedding, equivalent })
}

/// A refutation pattern for a formula: an SI bi-Gödel algebra with a
/// refuting valuation and the co-implication domain read off from the
/// valuation's subformula image.
#[derive(Clone, Debug)]
pub struct RefutationPattern {
    pub dual: Poset,
    pub algebra: BiHeytingAlgebra,
    pub domain: StableDomain,
    pub valuation: Valuation,
}

/// Enumerates refutation patterns of `phi` over all co-trees with at most
/// `size_cap` points, deduplicated up to isomorphism of (algebra, domain).
pub fn refutation_patterns(
    phi: &Formula,
    size_cap: usize,
    enum_cap: usize,
    upset_cap: usize,
    valuation_budget: u64,
) -> Result<Vec<RefutationPattern>> {
    let compiled = semantics::CompiledFormula::new(phi);
    let subs: Vec<&Formula> = phi.subformulas();
    let mut patterns: Vec<RefutationPattern> = Vec::new();
    for dual in crate::enumerate::enumerate_cotrees(size_cap, enum_cap)? {
        let alg = BiHeytingAlgebra::upset_algebra(&dual, upset_cap)?;
        let needed = semantics::sweep_size(alg.k(), compiled.vars.len());
        if needed > valuation_budget as u128 {
            return Err(Error::ValuationBudgetExceeded {
                needed,
                budget: valuation_budget,
            });
        }
        let mut scratch = vec![0usize; compiled.len()];
        let mut assignment = vec![0usize; compiled.vars.len()];
        'sweep: loop {
            if compiled.eval(&alg, &assignment, &mut scratch) != alg.top() {
                // theta = the valuation's image on all subformulas
                let mut theta = BTreeSet::new();
                for s in &subs {
                    theta.insert(scratch[compiled.position_of(s).unwrap()]);
                }
                let mut domain = StableDomain::new();
                for &x in &theta {
                    for &y in &theta {
                        if theta.contains(&alg.coimp(x, y)) {
                            domain.insert((x, y));
                        }
                    }
                }
                let v: Valuation = compiled
                    .vars
                    .iter()
                    .cloned()
                    .zip(assignment.iter().copied())
                    .collect();
                let candidate = RefutationPattern {
                    dual: dual.clone(),
                    algebra: alg.clone(),
                    domain,
                    valuation: v,
                };
                if !patterns.iter().any(|p| patterns_isomorphic(p, &candidate)) {
                    patterns.push(candidate);
                }
            }
            let mut i = compiled.vars.len();
            loop {
                if i == 0 {
                    break 'sweep;
                }
                i -= 1;
                assignment[i] += 1;
                if assignment[i] < alg.k() {
                    break;
                }
                assignment[i] = 0;
                if i == 0 {
                    break 'sweep;
                }
            }
        }
    }
    // replay: every pattern must still refute phi
    for p in &patterns {
        if semantics::eval(&p.algebra, phi, &p.valuation)? == p.algebra.top() {
            return Err(Error::ConstructionBug(
                "refutation pattern fails to refute".into(),
            ));
        }
    }
    Ok(patterns)
}

/// Patterns are isomorphic when some dual-poset isomorphism carries one
/// domain onto the other.
fn patterns_isomorphic(p: &RefutationPattern, q: &RefutationPattern) -> bool {
    if p.dual.n() != q.dual.n() || p.domain.len() != q.domain.len() {
        return false;
    }
    let pmasks = p.algebra.upset_masks().unwrap();
    let qmasks = q.algebra.upset_masks().unwrap();
    let qindex: std::collections::HashMap<u64, usize> = qmasks
        .iter()
        .enumerate()
        .map(|(i, &m)| (m, i))
        .collect();
    for iso in crate::enumerate::order_isomorphisms(&p.dual, &q.dual) {
        let lift = |elt: usize| -> usize {
            let mut m = 0u64;
            for e in crate::poset::mask_elements(pmasks[elt]) {
                m |= 1 << iso[e];
            }
            qindex[&m]
        };
        let mapped: StableDomain =
            p.domain.iter().map(|&(x, y)| (lift(x), lift(y))).collect();
        if mapped == q.domain {
            return true;
        }
    }
    false
}

/// Conjunction of the stable canonical formulas of all refutation patterns
/// at the cap. Errors when there is none.
pub fn axiomatize_bounded(
    phi: &Formula,
    size_cap: usize,
    enum_cap: usize,
    upset_cap: usize,
    valuation_budget: u64,
) -> Result<Formula> {
    let patterns =
        refutation_patterns(phi, size_cap, enum_cap, upset_cap, valuation_budget)?;
    if patterns.is_empty() {
        return Err(Error::NoRefutationAtCap { cap: size_cap });
    }
    let mut parts = Vec::new();
    for p in &patterns {
        parts.push(gamma(&p.algebra, &p.domain)?);
    }
    Ok(formula::big_and(parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::chain_algebra;
    use crate::poset::{make_chain, make_cofork, make_comb};

    const NB: u64 = 10_000_000;
    const VB: u64 = 20_000_000;

    fn up(p: &Poset) -> BiHeytingAlgebra {
        BiHeytingAlgebra::upset_algebra(p, 10_000).unwrap()
    }

    #[test]
    fn gamma_variables_cover_carrier() {
        let a = chain_algebra(3).unwrap();
        let g = jankov(&a).unwrap();
        assert_eq!(g.vars().len(), a.k());
    }

    #[test]
    fn gamma_consequent_for_three_chain() {
        // pairs a not<= b of the 3-chain: (1,0), (2,0), (2,1)
        let a = chain_algebra(3).unwrap();
        let c = consequent(&a);
        let expect = formula::neg(formula::big_and(vec![
            formula::coimp(pvar(1), pvar(0)),
            formula::coimp(pvar(2), pvar(0)),
            formula::coimp(pvar(2), pvar(1)),
        ]));
        assert_eq!(c, expect);
    }

    #[test]
    fn algebra_refutes_own_jankov_formula() {
        for p in [make_comb(1).unwrap(), make_comb(2).unwrap(), make_cofork(2).unwrap()] {
            let a = up(&p);
            let j = jankov(&a).unwrap();
            match semantics::is_valid(&a, &j, VB).unwrap() {
                Verdict::Refuted { .. } => {}
                Verdict::Valid => panic!("A must refute J(A)"),
            }
            assert!(refutes_char(&a, &a, &CharKind::Jankov, NB).unwrap().is_some());
        }
    }

    #[test]
    fn boolean_validates_jankov_of_three_chain() {
        let three = chain_algebra(3).unwrap();
        let two = chain_algebra(2).unwrap();
        let j = jankov(&three).unwrap();
        assert_eq!(semantics::is_valid(&two, &j, VB).unwrap(), Verdict::Valid);
        assert!(refutes_char(&two, &three, &CharKind::Jankov, NB).unwrap().is_none());
    }

    #[test]
    fn non_si_input_rejected() {
        let bool4 = up(&crate::poset::make_antichain(2).unwrap());
        assert!(matches!(jankov(&bool4), Err(Error::NotSi)));
        assert!(matches!(beta(&bool4), Err(Error::NotSi)));
    }

    #[test]
    fn refutes_char_matches_plain_sweep() {
        // cross-check the propagation engine against the raw sweep on every
        // pair small enough for the sweep
        let duals = crate::enumerate::enumerate_cotrees(3, 10).unwrap();
        let forests: Vec<Poset> = crate::enumerate::enumerate_coforests(4, 10)
            .unwrap()
            .into_iter()
            .filter(|p| p.count_upsets(9).is_ok())
            .collect();
        for da in &duals {
            let a = up(da);
            let j = jankov(&a).unwrap();
            let bform = beta(&a).unwrap();
            for fb in &forests {
                let b = up(fb);
                let sweep_j = !matches!(
                    semantics::is_valid(&b, &j, VB).unwrap(),
                    Verdict::Valid
                );
                let engine_j =
                    refutes_char(&b, &a, &CharKind::Jankov, NB).unwrap().is_some();
                assert_eq!(sweep_j, engine_j, "J({da:?}) on {fb:?}");
                let sweep_b = !matches!(
                    semantics::is_valid(&b, &bform, VB).unwrap(),
                    Verdict::Valid
                );
                let engine_b =
                    refutes_char(&b, &a, &CharKind::Subframe, NB).unwrap().is_some();
                assert_eq!(sweep_b, engine_b, "beta({da:?}) on {fb:?}");
            }
        }
    }

    #[test]
    fn sdc_embedding_examples() {
        let three = chain_algebra(3).unwrap();
        let four = chain_algebra(4).unwrap();
        // identity
        let m = sdc_embedding_search(&three, &full_domain(&three), &three, NB)
            .unwrap()
            .unwrap();
        assert_eq!(m.map, vec![0, 1, 2]);
        // 3-chain into 4-chain lands on {0, b, 1}: generated closure agrees
        let m = sdc_embedding_search(&three, &full_domain(&three), &four, NB)
            .unwrap()
            .unwrap();
        assert!(m.preserved.heyting());
        assert!(m.is_injective());
        // cardinality obstruction
        let two = chain_algebra(2).unwrap();
        assert!(sdc_embedding_search(&three, &full_domain(&three), &two, NB)
            .unwrap()
            .is_none());
    }

    #[test]
    fn stable_check_small() {
        let three = chain_algebra(3).unwrap();
        let r = check_stable_refutation(&three, &three, &full_domain(&three), VB, NB)
            .unwrap();
        assert!(r.equivalent);
        assert!(r.refuted.is_some());
        let two = chain_algebra(2).unwrap();
        let r = check_stable_refutation(&two, &three, &full_domain(&three), VB, NB)
            .unwrap();
        assert!(r.equivalent);
        assert!(r.refuted.is_none());
    }

    #[test]
    fn jankov_check_collapse_example() {
        // B dual = 4-chain, A = 3-chain algebra: collapsing the top two
        // points gives a surjection, so both sides hold
        let b = up(&make_chain(4).unwrap());
        let a = chain_algebra(3).unwrap();
        let r = check_jankov_refutation(&b, &a, NB).unwrap();
        assert!(r.equivalent);
        assert!(r.refuted.is_some());
        // A = C_1 upsets, B = 2-element boolean: both false
        let a = up(&make_comb(1).unwrap());
        let b = chain_algebra(2).unwrap();
        let r = check_jankov_refutation(&b, &a, NB).unwrap();
        assert!(r.equivalent);
        assert!(r.refuted.is_none());
    }

    #[test]
    fn subframe_check_examples() {
        // A = upsets of the 3-chain; B dual a co-tree of depth 2: both false
        let a = up(&make_chain(3).unwrap());
        let b = up(&make_cofork(2).unwrap());
        let r = check_subframe_refutation(&b, &a, NB).unwrap();
        assert!(r.equivalent);
        assert!(r.refuted.is_none());
        // B = A: both true
        let r = check_subframe_refutation(&a, &a, NB).unwrap();
        assert!(r.equivalent);
        assert!(r.refuted.is_some());
        // width: F_2 upsets against chains
        let af = up(&make_cofork(2).unwrap());
        let bchain = up(&make_chain(4).unwrap());
        let r = check_subframe_refutation(&bchain, &af, NB).unwrap();
        assert!(r.equivalent);
        assert!(r.refuted.is_none());
    }

    #[test]
    fn patterns_of_excluded_middle() {
        let phi = formula::parse("p | !p").unwrap();
        let ps = refutation_patterns(&phi, 2, 10, 1000, VB).unwrap();
        // single pattern on the 3-chain (dual the 2-chain)
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].dual.n(), 2);
        assert_eq!(ps[0].algebra.k(), 3);
        let ax = axiomatize_bounded(&phi, 2, 10, 1000, VB).unwrap();
        assert!(!ax.vars().is_empty());
    }

    #[test]
    fn patterns_of_godel_dummett_are_empty() {
        let phi = formula::godel_dummett();
        let ps = refutation_patterns(&phi, 3, 10, 1000, VB).unwrap();
        assert!(ps.is_empty());
        assert!(matches!(
            axiomatize_bounded(&phi, 3, 10, 1000, VB),
            Err(Error::NoRefutationAtCap { .. })
        ));
    }

    #[test]
    fn domain_monotonicity() {
        // D subset of D' and B refutes gamma(A, D') implies B refutes
        // gamma(A, D)
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let duals = crate::enumerate::enumerate_cotrees(3, 10).unwrap();
        let forests = crate::enumerate::enumerate_coforests(4, 10).unwrap();
        for _ in 0..30 {
            let a = up(&duals[rng.gen_range(0..duals.len())]);
            let b = up(&forests[rng.gen_range(0..forests.len())]);
            let full: Vec<(usize, usize)> = full_domain(&a).into_iter().collect();
            let dbig: StableDomain = full
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(0.6))
                .collect();
            let dsmall: StableDomain = dbig
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(0.6))
                .collect();
            let refutes_big = !matches!(
                semantics::is_valid(&b, &gamma(&a, &dbig).unwrap(), VB).unwrap(),
                Verdict::Valid
            );
            let refutes_small = !matches!(
                semantics::is_valid(&b, &gamma(&a, &dsmall).unwrap(), VB).unwrap(),
                Verdict::Valid
            );
            if refutes_big {
                assert!(refutes_small);
            }
        }
    }
}
