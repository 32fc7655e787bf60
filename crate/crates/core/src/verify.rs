//! Brute-force verification suites. Each suite sweeps a finite grid with
//! two independently implemented sides and reports every discrepancy with a
//! serialized witness; a correct build reports none.

use crate::algebra::{filtration, BiHeytingAlgebra};
use crate::bisim;
use crate::charform::{self, CharKind, StableDomain};
use crate::config::RunConfig;
use crate::enumerate::{enumerate_coforests, enumerate_cotrees, enumerate_posets, isomorphic};
use crate::error::{Error, Result};
use crate::formula::{self, Formula};
use crate::io;
use crate::morphism::{comb_quotient, find_order_embedding, find_surjective_bi_p_morphism};
use crate::poset::{make_chain, make_cofork, make_comb, make_hodkinson, Poset};
use crate::semantics::{self, Valuation, Verdict};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

pub const SUITES: &[&str] = &[
    "duality",
    "identities",
    "si",
    "discriminator",
    "jankov",
    "subframe",
    "stable",
    "depthwidth",
    "combs",
    "hodkinson",
    "onegen",
    "depthbound",
    "inconsistency",
    "filtration",
];

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: String,
    pub suite: String,
    pub instances: usize,
    pub discrepancies: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u128>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

pub fn verify_suite(name: &str, cfg: &RunConfig) -> Result<VerificationReport> {
    let start = std::time::Instant::now();
    let (instances, discrepancies, notes) = match name {
        "duality" => suite_duality(cfg)?,
        "identities" => suite_identities(cfg)?,
        "si" => suite_si(cfg)?,
        "discriminator" => suite_discriminator(cfg)?,
        "jankov" => suite_jankov(cfg)?,
        "subframe" => suite_subframe(cfg)?,
        "stable" => suite_stable(cfg)?,
        "depthwidth" => suite_depthwidth(cfg)?,
        "combs" => suite_combs(cfg)?,
        "hodkinson" => suite_hodkinson(cfg)?,
        "onegen" => suite_onegen(cfg)?,
        "depthbound" => suite_depthbound(cfg)?,
        "inconsistency" => suite_inconsistency(cfg)?,
        "filtration" => suite_filtration(cfg)?,
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    Ok(VerificationReport {
        schema: io::SCHEMA.into(),
        suite: name.to_string(),
        instances,
        discrepancies,
        wall_ms: cfg.timings.then(|| start.elapsed().as_millis()),
        notes,
    })
}

type SuiteOutcome = (usize, Vec<Value>, Vec<String>);

fn up_algebra(p: &Poset, cfg: &RunConfig) -> Result<BiHeytingAlgebra> {
    BiHeytingAlgebra::upset_algebra(p, cfg.upset_cap)
}

fn poset_witness(p: &Poset) -> Value {
    serde_json::to_value(io::poset_to_doc(p)).unwrap()
}

/// Duality round trips: upset algebras of every co-forest up to 6 points,
/// and every abstract table algebra with at most 8 elements (realized over
/// the posets whose upset lattice has at most 8 elements).
fn suite_duality(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let mut instances = 0;
    let mut bad = Vec::new();
    for forest in enumerate_coforests(6, cfg.enum_cap)? {
        instances += 1;
        let alg = up_algebra(&forest, cfg)?;
        match alg.duality_witness() {
            Ok((dual, _, iso)) => {
                if !isomorphic(&dual, &forest) || !iso.preserved.all() {
                    bad.push(json!({
                        "case": "coforest",
                        "poset": poset_witness(&forest),
                    }));
                }
            }
            Err(e) => bad.push(json!({
                "case": "coforest",
                "poset": poset_witness(&forest),
                "error": e.to_string(),
            })),
        }
    }
    // abstract algebras with at most 8 elements: |Up(P)| <= 8 forces
    // |P| <= 6 or the 7-chain
    let mut sources: Vec<Poset> = enumerate_posets(6, cfg.enum_cap)?;
    sources.push(make_chain(7)?);
    for p in sources {
        let Ok(upsets) = p.all_upsets(8) else { continue };
        let k = upsets.len();
        let _ = k;
        let from_poset = up_algebra(&p, cfg)?;
        // rebuild as a pure table algebra, then round-trip
        let doc = io::algebra_to_doc(&from_poset);
        instances += 1;
        let abstract_alg = match io::algebra_from_doc(&doc) {
            Ok(a) => a,
            Err(e) => {
                bad.push(json!({
                    "case": "abstract",
                    "poset": poset_witness(&p),
                    "error": e.to_string(),
                }));
                continue;
            }
        };
        match abstract_alg.duality_witness() {
            Ok((_, roundtrip, iso)) => {
                if !roundtrip.same_tables(&from_poset) && !iso.preserved.all() {
                    bad.push(json!({
                        "case": "abstract",
                        "poset": poset_witness(&p),
                    }));
                }
            }
            Err(e) => bad.push(json!({
                "case": "abstract",
                "poset": poset_witness(&p),
                "error": e.to_string(),
            })),
        }
    }
    Ok((instances, bad, vec![]))
}

/// The eight arithmetic laws of bi-Heyting algebras plus the universal-box
/// identity, on the upset algebra of every poset up to 6 points.
fn suite_identities(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let mut instances = 0;
    let mut bad = Vec::new();
    for p in enumerate_posets(6, cfg.enum_cap)? {
        instances += 1;
        let a = up_algebra(&p, cfg)?;
        let k = a.k();
        let mut fail = |law: &str, x: usize, y: usize| {
            bad.push(json!({
                "poset": poset_witness(&p),
                "law": law,
                "pair": [x, y],
            }));
        };
        for x in 0..k {
            for y in 0..k {
                // a -> b is the largest d with a /\ d <= b
                let mut sup = a.bot();
                for d in 0..k {
                    if a.leq(a.meet(x, d), y) {
                        sup = a.join(sup, d);
                    }
                }
                if sup != a.imp(x, y) {
                    fail("imp-is-sup", x, y);
                }
                if (a.imp(x, y) == a.top()) != a.leq(x, y) {
                    fail("imp-top-iff-leq", x, y);
                }
                // a <- b is the least d with a <= d \/ b
                let mut inf = a.top();
                for d in 0..k {
                    if a.leq(x, a.join(d, y)) {
                        inf = a.meet(inf, d);
                    }
                }
                if inf != a.coimp(x, y) {
                    fail("coimp-is-inf", x, y);
                }
                if (a.coimp(x, y) == a.bot()) != a.leq(x, y) {
                    fail("coimp-bot-iff-leq", x, y);
                }
            }
            if (a.neg(x) == a.top()) != (x == a.bot()) {
                fail("neg-top-iff-bot", x, 0);
            }
            if a.meet(x, a.neg(x)) != a.bot() {
                fail("meet-neg-bot", x, 0);
            }
            if (a.coneg(x) == a.bot()) != (x == a.top()) {
                fail("coneg-bot-iff-top", x, 0);
            }
            if a.join(x, a.coneg(x)) != a.top() {
                fail("join-coneg-top", x, 0);
            }
        }
        // !~U = {x : down up x <= U} on every upset
        let masks = a.upset_masks().unwrap();
        for (i, &u) in masks.iter().enumerate() {
            let boxed = masks[a.neg(a.coneg(i))];
            let mut pointwise = 0u64;
            for x in 0..p.n() {
                if p.down_closure_mask(p.up_mask(x)) & !u == 0 {
                    pointwise |= 1 << x;
                }
            }
            if boxed != pointwise {
                bad.push(json!({
                    "poset": poset_witness(&p),
                    "law": "box-is-downup-subset",
                    "upset": u,
                }));
            }
        }
    }
    Ok((instances, bad, vec![]))
}

/// SI (meet-irreducible bottom) agrees with connected co-tree duals on
/// every co-forest up to 7 points; bi-Gödel agrees with validity of the
/// linearity axiom.
fn suite_si(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let mut instances = 0;
    let mut bad = Vec::new();
    let gd = formula::godel_dummett();
    for forest in enumerate_coforests(7, cfg.enum_cap)? {
        instances += 1;
        let a = up_algebra(&forest, cfg)?;
        if a.is_si() != forest.is_co_tree() {
            bad.push(json!({
                "check": "si-vs-cotree",
                "poset": poset_witness(&forest),
                "is_si": a.is_si(),
            }));
        }
        let gd_valid = matches!(
            semantics::is_valid(&a, &gd, cfg.valuation_budget)?,
            Verdict::Valid
        );
        if a.is_bi_godel() != gd_valid {
            bad.push(json!({
                "check": "bi-godel-vs-linearity-axiom",
                "poset": poset_witness(&forest),
            }));
        }
        let dual = a.dual_poset();
        if !isomorphic(&dual, &forest) {
            bad.push(json!({
                "check": "dual-shape",
                "poset": poset_witness(&forest),
            }));
        }
    }
    Ok((instances, bad, vec![]))
}

/// The discriminator term's case split on every SI algebra with dual up to
/// 5 points, over all element triples.
fn suite_discriminator(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let mut instances = 0;
    let mut bad = Vec::new();
    for tree in enumerate_cotrees(5, cfg.enum_cap)? {
        let a = up_algebra(&tree, cfg)?;
        debug_assert!(a.is_si());
        for x in 0..a.k() {
            for y in 0..a.k() {
                let plus = a.plus_term(x, y);
                let plus_expect = if x == y { a.top() } else { a.bot() };
                if plus != plus_expect {
                    bad.push(json!({
                        "poset": poset_witness(&tree),
                        "check": "plus",
                        "pair": [x, y],
                    }));
                }
                for z in 0..a.k() {
                    instances += 1;
                    let t = a.discriminator_eval(x, y, z);
                    let expect = if x == y { z } else { x };
                    if t != expect {
                        bad.push(json!({
                            "poset": poset_witness(&tree),
                            "check": "discriminator",
                            "triple": [x, y, z],
                        }));
                    }
                }
            }
        }
    }
    Ok((instances, bad, vec![]))
}

fn jankov_sources(cfg: &RunConfig) -> Result<Vec<Poset>> {
    enumerate_cotrees(cfg_grid(cfg).0, cfg.enum_cap)
}

fn jankov_targets(cfg: &RunConfig) -> Result<Vec<Poset>> {
    enumerate_coforests(cfg_grid(cfg).1, cfg.enum_cap)
}

/// Grid sizes for the Jankov/subframe suites (defaults 4 and 5).
fn cfg_grid(cfg: &RunConfig) -> (usize, usize) {
    (cfg.max_source.unwrap_or(4), cfg.max_target.unwrap_or(5))
}

/// Semantic refutation of J(A) against the component-surjection search.
fn suite_jankov(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let mut instances = 0;
    let mut bad = Vec::new();
    for da in jankov_sources(cfg)? {
        let a = up_algebra(&da, cfg)?;
        for db in jankov_targets(cfg)? {
            let b = up_algebra(&db, cfg)?;
            instances += 1;
            let r = charform::check_jankov_refutation(&b, &a, cfg.node_budget)?;
            if !r.equivalent {
                bad.push(json!({
                    "source_dual": poset_witness(&da),
                    "target_dual": poset_witness(&db),
                    "semantic_refuted": r.refuted.is_some(),
                    "surjection_found": r.surjection.is_some(),
                }));
            }
        }
    }
    Ok((instances, bad, vec![]))
}

/// Semantic refutation of beta(A) against the order-embedding search.
fn suite_subframe(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let mut instances = 0;
    let mut bad = Vec::new();
    for da in jankov_sources(cfg)? {
        let a = up_algebra(&da, cfg)?;
        for db in jankov_targets(cfg)? {
            let b = up_algebra(&db, cfg)?;
            instances += 1;
            let r = charform::check_subframe_refutation(&b, &a, cfg.node_budget)?;
            if !r.equivalent {
                bad.push(json!({
                    "source_dual": poset_witness(&da),
                    "target_dual": poset_witness(&db),
                    "semantic_refuted": r.refuted.is_some(),
                    "embedding_found": r.embedding.is_some(),
                }));
            }
        }
    }
    Ok((instances, bad, vec![]))
}

/// Fifty seeded random (A, D, B) triples with |A| <= 5 and |B| <= 7:
/// the gamma validity sweep against the SDC-embedding search.
fn suite_stable(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(7));
    let a_pool: Vec<BiHeytingAlgebra> = enumerate_cotrees(4, cfg.enum_cap)?
        .iter()
        .map(|p| up_algebra(p, cfg))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|a| a.k() <= 5)
        .collect();
    let b_pool: Vec<BiHeytingAlgebra> = enumerate_coforests(6, cfg.enum_cap)?
        .iter()
        .filter(|p| p.all_upsets(8).map(|u| u.len() <= 7).unwrap_or(false))
        .map(|p| up_algebra(p, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut instances = 0;
    let mut bad = Vec::new();
    for case in 0..50 {
        let a = &a_pool[rng.gen_range(0..a_pool.len())];
        let b = &b_pool[rng.gen_range(0..b_pool.len())];
        let mut domain = StableDomain::new();
        for x in 0..a.k() {
            for y in 0..a.k() {
                if rng.gen_bool(0.5) {
                    domain.insert((x, y));
                }
            }
        }
        instances += 1;
        let r = charform::check_stable_refutation(
            b,
            a,
            &domain,
            cfg.valuation_budget,
            cfg.node_budget,
        )?;
        if !r.equivalent {
            bad.push(json!({
                "case": case,
                "a_size": a.k(),
                "b_size": b.k(),
                "domain": domain.iter().collect::<Vec<_>>(),
                "sweep_refuted": r.refuted.is_some(),
                "embedding_found": r.embedding.is_some(),
            }));
        }
    }
    Ok((instances, bad, vec![]))
}

/// Depth and width axiomatization: on every co-tree X up to 8 points,
/// X validates beta(chain_n upsets) iff depth(X) < n (n <= 4), and
/// beta(cofork_n upsets) iff width(X) < n (2 <= n <= 4). The 1-co-fork
/// degenerates to the 2-chain, so at n = 1 the width reading is replaced
/// by the depth-2 equivalence it actually expresses.
fn suite_depthwidth(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let mut instances = 0;
    let mut bad = Vec::new();
    let notes = vec![
        "width family runs for n >= 2; the 1-co-fork is the 2-chain, checked against depth < 2"
            .to_string(),
    ];
    for n in 1..=4usize {
        let chain_dual = up_algebra(&make_chain(n)?, cfg)?;
        let fork_dual = up_algebra(&make_cofork(n)?, cfg)?;
        for x in enumerate_cotrees(8, cfg.enum_cap)? {
            let b = up_algebra(&x, cfg)?;
            instances += 2;
            let refutes_depth =
                charform::refutes_char(&b, &chain_dual, &CharKind::Subframe, cfg.node_budget)?
                    .is_some();
            if refutes_depth != (x.depth()? >= n) {
                bad.push(json!({
                    "family": "depth",
                    "n": n,
                    "poset": poset_witness(&x),
                    "beta_refuted": refutes_depth,
                    "depth": x.depth()?,
                }));
            }
            let refutes_width =
                charform::refutes_char(&b, &fork_dual, &CharKind::Subframe, cfg.node_budget)?
                    .is_some();
            let width_expect = if n >= 2 {
                x.width()? >= n
            } else {
                x.depth()? >= 2
            };
            if refutes_width != width_expect {
                bad.push(json!({
                    "family": "width",
                    "n": n,
                    "poset": poset_witness(&x),
                    "beta_refuted": refutes_width,
                    "width": x.width()?,
                }));
            }
        }
    }
    Ok((instances, bad, notes))
}

/// The comb theorem: for every co-tree X up to 8 points and n <= 3, the
/// n-comb embeds into X iff X surjects onto it; the constructive quotient
/// succeeds exactly then; and the Jankov and subframe formulas of the comb
/// algebra are refuted together.
fn suite_combs(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let mut instances = 0;
    let mut bad = Vec::new();
    for n in 1..=3usize {
        let comb = make_comb(n)?;
        let comb_alg = up_algebra(&comb, cfg)?;
        for x in enumerate_cotrees(8, cfg.enum_cap)? {
            instances += 1;
            let embeds = find_order_embedding(&comb, &x, cfg.node_budget)?.is_some();
            let surjects =
                find_surjective_bi_p_morphism(&x, &comb, cfg.node_budget)?.is_some();
            if embeds != surjects {
                bad.push(json!({
                    "n": n,
                    "poset": poset_witness(&x),
                    "check": "embed-iff-surject",
                    "embeds": embeds,
                    "surjects": surjects,
                }));
            }
            match comb_quotient(&x, n) {
                Ok(_) if !embeds => bad.push(json!({
                    "n": n,
                    "poset": poset_witness(&x),
                    "check": "quotient-without-embedding",
                })),
                Err(Error::NoCombEmbedding { .. }) if embeds => bad.push(json!({
                    "n": n,
                    "poset": poset_witness(&x),
                    "check": "quotient-missing",
                })),
                Err(Error::NoCombEmbedding { .. }) | Ok(_) => {}
                Err(e) => bad.push(json!({
                    "n": n,
                    "poset": poset_witness(&x),
                    "check": "quotient-error",
                    "error": e.to_string(),
                })),
            }
            let b = up_algebra(&x, cfg)?;
            let j_ref =
                charform::refutes_char(&b, &comb_alg, &CharKind::Jankov, cfg.node_budget)?
                    .is_some();
            let s_ref =
                charform::refutes_char(&b, &comb_alg, &CharKind::Subframe, cfg.node_budget)?
                    .is_some();
            if j_ref != s_ref {
                bad.push(json!({
                    "n": n,
                    "poset": poset_witness(&x),
                    "check": "jankov-iff-subframe",
                    "jankov_refuted": j_ref,
                    "subframe_refuted": s_ref,
                }));
            }
            if j_ref != embeds {
                bad.push(json!({
                    "n": n,
                    "poset": poset_witness(&x),
                    "check": "refutation-iff-embedding",
                }));
            }
        }
    }
    Ok((instances, bad, vec![]))
}

/// The first three co-trees of the antichain family are pairwise
/// incomparable under surjective bi-p-morphisms.
fn suite_hodkinson(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let mut instances = 0;
    let mut bad = Vec::new();
    let mut notes = Vec::new();
    let ts: Vec<Poset> = (0..=2).map(make_hodkinson).collect::<Result<_>>()?;
    for i in 0..ts.len() {
        for j in 0..ts.len() {
            if i == j {
                continue;
            }
            instances += 1;
            match find_surjective_bi_p_morphism(&ts[j], &ts[i], cfg.node_budget) {
                Ok(Some(_)) => bad.push(json!({
                    "image": i,
                    "source": j,
                    "check": "unexpected-surjection",
                })),
                Ok(None) => {}
                Err(Error::SearchBudgetExceeded { .. }) if i == 2 || j == 2 => {
                    notes.push(format!(
                        "T{j} -> T{i} exceeded the node budget; smaller sub-matrix still verified"
                    ));
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok((instances, bad, notes))
}

/// Combs are 1-generated: the single-upset coloring generates for n <= 5,
/// and the Coloring Theorem check agrees with the closure oracle for
/// n <= 3.
fn suite_onegen(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let mut instances = 0;
    let mut bad = Vec::new();
    for n in 1..=5usize {
        instances += 1;
        let coloring = bisim::comb_coloring(n)?;
        let alg = up_algebra(&coloring.poset, cfg)?;
        let masks = alg.upset_masks().unwrap();
        let idx = masks
            .iter()
            .position(|&m| m == coloring.upset)
            .expect("coloring is an upset");
        if !alg.generates(&[idx]) {
            bad.push(json!({ "n": n, "check": "comb-coloring-generates" }));
        }
        if coloring.changed_by_closure {
            bad.push(json!({ "n": n, "check": "coloring-was-not-an-upset" }));
        }
        if n <= 3 {
            instances += 1;
            let r = bisim::coloring_theorem_check(
                &coloring.poset,
                &[coloring.upset],
                cfg.bell_cap.max(2 * n),
            )?;
            if !r.equivalent {
                bad.push(json!({ "n": n, "check": "coloring-theorem" }));
            }
        }
    }
    Ok((instances, bad, vec![]))
}

/// Every co-tree up to 8 points omitting the 2-comb satisfies the
/// (gen_rank + 1) * 2 bound on depth and on minimal principal upsets.
fn suite_depthbound(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let mut instances = 0;
    let mut bad = Vec::new();
    // the grid pins algebras as large as 2^7 + 1 elements
    let gen_cap = cfg.gen_rank_cap.max(160);
    let comb = make_comb(2)?;
    for x in enumerate_cotrees(8, cfg.enum_cap)? {
        if find_order_embedding(&comb, &x, cfg.node_budget)?.is_some() {
            continue;
        }
        instances += 1;
        let r = bisim::depth_bound_check(&x, 2, cfg.upset_cap, gen_cap, cfg.node_budget)?;
        if !r.depth_ok || !r.minimal_upsets_ok {
            bad.push(json!({
                "poset": poset_witness(&x),
                "gen_rank": r.gen_rank,
                "bound": r.bound,
                "depth": r.depth,
                "depth_ok": r.depth_ok,
                "minimal_upsets_ok": r.minimal_upsets_ok,
            }));
        }
    }
    Ok((instances, bad, vec![]))
}

/// Two hundred seeded random (premises, conclusion) pairs at model cap 5:
/// the reductio equivalence holds without exception.
fn suite_inconsistency(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(13));
    let mut instances = 0;
    let mut bad = Vec::new();
    for case in 0..200 {
        let n_premises = rng.gen_range(0..=2);
        let premises: Vec<Formula> = (0..n_premises)
            .map(|_| formula::random_formula(&mut rng, &["p", "q"], 3))
            .collect();
        let phi = formula::random_formula(&mut rng, &["p", "q"], 3);
        instances += 1;
        let r = semantics::inconsistency_lemma_check(
            &premises,
            &phi,
            5,
            cfg.enum_cap,
            cfg.valuation_budget,
        )?;
        if !r.equivalent {
            bad.push(json!({
                "case": case,
                "premises": premises.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "phi": phi.to_string(),
                "reductio_consistent": r.reductio_model.is_some(),
                "countermodel": r.countermodel.is_some(),
            }));
        }
    }
    Ok((instances, bad, vec![]))
}

/// One hundred seeded refutation instances on bi-Gödel algebras with at
/// most 8 elements: filtration stays refuting, stays bi-Gödel, and stays SI
/// when the input is.
fn suite_filtration(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(17));
    let pool: Vec<BiHeytingAlgebra> = enumerate_coforests(7, cfg.enum_cap)?
        .iter()
        .filter(|p| p.all_upsets(9).map(|u| u.len() <= 8).unwrap_or(false))
        .map(|p| up_algebra(p, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut instances = 0;
    let mut bad = Vec::new();
    let mut attempts = 0;
    while instances < 100 && attempts < 100_000 {
        attempts += 1;
        let b = &pool[rng.gen_range(0..pool.len())];
        let phi = formula::random_formula(&mut rng, &["p", "q"], 4);
        let mut v = Valuation::new();
        for name in phi.vars() {
            v.insert(name, rng.gen_range(0..b.k()));
        }
        if semantics::eval(b, &phi, &v)? == b.top() {
            continue;
        }
        instances += 1;
        match filtration(b, &phi, &v) {
            Ok(f) => {
                let mut problems = Vec::new();
                if semantics::eval(&f.algebra, &phi, &f.valuation)? == f.algebra.top() {
                    problems.push("no longer refutes");
                }
                if !f.algebra.is_bi_godel() {
                    problems.push("not bi-godel");
                }
                if b.is_si() && !f.algebra.is_si() {
                    problems.push("lost si");
                }
                // the recomputed coimplication matches the original wherever
                // the original already lands in the subformula image
                let carrier = &f.inclusion.map;
                for (i, &x) in carrier.iter().enumerate() {
                    for (j, &y) in carrier.iter().enumerate() {
                        let orig = b.coimp(x, y);
                        if f.theta.contains(&orig) {
                            if let Ok(pos) = carrier.binary_search(&orig) {
                                if f.algebra.coimp(i, j) != pos {
                                    problems.push("coimp disagrees on theta");
                                }
                            }
                        }
                    }
                }
                if !problems.is_empty() {
                    bad.push(json!({
                        "phi": phi.to_string(),
                        "b_size": b.k(),
                        "problems": problems,
                    }));
                }
            }
            Err(e) => bad.push(json!({
                "phi": phi.to_string(),
                "b_size": b.k(),
                "error": e.to_string(),
            })),
        }
    }
    Ok((instances, bad, vec![]))
}
