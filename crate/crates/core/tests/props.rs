//! Property tests for the order-theoretic laws and the cross-oracle module
//! invariants.

use cotree_lab::algebra::BiHeytingAlgebra;
use cotree_lab::bisim;
use cotree_lab::charform::{self, CharKind};
use cotree_lab::enumerate::{enumerate_cotrees, enumerate_posets};
use cotree_lab::formula::{self, parse, print, random_formula};
use cotree_lab::morphism::{find_order_embedding, find_surjective_bi_p_morphism};
use cotree_lab::poset::{mask_elements, Poset};
use cotree_lab::semantics::{self, Coloring, Valuation};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic random poset from a seed: a random DAG on up to 8 points.
fn seeded_poset(n: usize, seed: u64) -> Poset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut covers: Vec<(String, String)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.3) {
                covers.push((format!("v{i}"), format!("v{j}")));
            }
        }
    }
    cotree_lab::poset::build_poset(&labels, &covers).unwrap()
}

fn seeded_mask(p: &Poset, seed: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mask = 0u64;
    for i in 0..p.n() {
        if rng.gen_bool(0.4) {
            mask |= 1 << i;
        }
    }
    mask
}

proptest! {
    #[test]
    fn closures_are_idempotent_extensive_monotone(
        n in 1usize..=8,
        seed in any::<u64>(),
        s1 in any::<u64>(),
        s2 in any::<u64>(),
    ) {
        let p = seeded_poset(n, seed);
        let a = seeded_mask(&p, s1);
        let b = seeded_mask(&p, s2) | a; // a subset of b
        let up = |m: u64| p.up_closure_mask(m);
        let down = |m: u64| p.down_closure_mask(m);
        prop_assert_eq!(up(up(a)), up(a));
        prop_assert_eq!(down(down(a)), down(a));
        prop_assert_eq!(up(a) & a, a);
        prop_assert_eq!(down(a) & a, a);
        prop_assert_eq!(up(a) & up(b), up(a));
        prop_assert_eq!(down(a) & down(b), down(a));
    }

    #[test]
    fn empty_intersection_equivalences(
        n in 1usize..=8,
        seed in any::<u64>(),
        s1 in any::<u64>(),
        s2 in any::<u64>(),
    ) {
        // down W disjoint from up down V iff down W disjoint from down V
        // iff up down W disjoint from down V
        let p = seeded_poset(n, seed);
        let w = seeded_mask(&p, s1);
        let v = seeded_mask(&p, s2);
        let dw = p.down_closure_mask(w);
        let dv = p.down_closure_mask(v);
        let first = dw & p.up_closure_mask(dv) == 0;
        let second = dw & dv == 0;
        let third = p.up_closure_mask(dw) & dv == 0;
        prop_assert_eq!(first, second);
        prop_assert_eq!(second, third);
    }

    #[test]
    fn convex_sets_block_upward_escape(
        n in 1usize..=8,
        seed in any::<u64>(),
        s1 in any::<u64>(),
        s2 in any::<u64>(),
    ) {
        // if W is convex and V lies strictly below it, V misses up W
        let p = seeded_poset(n, seed);
        let raw = seeded_mask(&p, s1);
        let w = p.down_closure_mask(raw) & p.up_closure_mask(raw); // convex hull
        let below = p.down_closure_mask(w) & !w;
        let v = seeded_mask(&p, s2) & below;
        prop_assert_eq!(v & p.up_closure_mask(w), 0);
    }

    #[test]
    fn cotree_principal_upsets_are_short_chains(size in 1usize..=10, seed in any::<u64>()) {
        let t = cotree_lab::enumerate::random_cotree(size, seed).unwrap();
        let d = t.depth().unwrap();
        for x in 0..t.n() {
            prop_assert!(t.is_chain_mask(t.up_mask(x)));
            prop_assert!(t.up_mask(x).count_ones() as usize <= d);
        }
    }

    #[test]
    fn parse_print_round_trip(seed in any::<u64>(), depth in 0usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_formula(&mut rng, &["p", "q", "r", "s"], depth);
        let printed = print(&f);
        prop_assert_eq!(parse(&printed).unwrap(), f);
    }
}

#[test]
fn eval_and_kripke_agree_at_scale() {
    // 500 random formulas of depth <= 6 over all co-trees <= 6 points
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let cotrees: Vec<(Poset, BiHeytingAlgebra)> = enumerate_cotrees(6, 10)
        .unwrap()
        .into_iter()
        .map(|p| {
            let a = BiHeytingAlgebra::upset_algebra(&p, 100).unwrap();
            (p, a)
        })
        .collect();
    for round in 0..500 {
        let f = random_formula(&mut rng, &["p", "q", "r"], 6);
        let (p, alg) = &cotrees[round % cotrees.len()];
        let masks = alg.upset_masks().unwrap();
        let mut v = Valuation::new();
        let mut coloring = Coloring::new();
        for name in f.vars() {
            let pick = rng.gen_range(0..masks.len());
            v.insert(name.clone(), pick);
            coloring.insert(name, masks[pick]);
        }
        let value = semantics::eval(alg, &f, &v).unwrap();
        for x in 0..p.n() {
            assert_eq!(
                masks[value] & (1 << x) != 0,
                semantics::kripke_eval(p, &coloring, x, &f).unwrap(),
                "formula {f} on {p:?} at {x}"
            );
        }
    }
}

#[test]
fn jankov_and_subframe_oracles_agree_on_cotree_pairs() {
    // for every co-tree pair (P <= 5, Q <= 6): the Jankov formula of Up(P)
    // is refuted by Up(Q) iff Q surjects onto P, and the subframe formula
    // iff P order-embeds into Q
    let sources = enumerate_cotrees(5, 10).unwrap();
    let targets = enumerate_cotrees(6, 10).unwrap();
    const BUDGET: u64 = 50_000_000;
    for p in &sources {
        let a = BiHeytingAlgebra::upset_algebra(p, 100).unwrap();
        for q in &targets {
            let b = BiHeytingAlgebra::upset_algebra(q, 100).unwrap();
            let jankov_refuted = charform::refutes_char(&b, &a, &CharKind::Jankov, BUDGET)
                .unwrap()
                .is_some();
            let surjection = find_surjective_bi_p_morphism(q, p, BUDGET)
                .unwrap()
                .is_some();
            assert_eq!(jankov_refuted, surjection, "J: {p:?} vs {q:?}");
            let beta_refuted = charform::refutes_char(&b, &a, &CharKind::Subframe, BUDGET)
                .unwrap()
                .is_some();
            let embedding = find_order_embedding(p, q, BUDGET).unwrap().is_some();
            assert_eq!(beta_refuted, embedding, "beta: {p:?} vs {q:?}");
        }
    }
}

#[test]
fn coloring_theorem_full_sweep() {
    // all posets <= 5 points, 100 random colorings in total
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let posets = enumerate_posets(5, 10).unwrap();
    for round in 0..100 {
        let p = &posets[round % posets.len()];
        let upsets = p.all_upsets(64).unwrap();
        let n_colors = rng.gen_range(0..=2);
        let colors: Vec<u64> = (0..n_colors)
            .map(|_| upsets[rng.gen_range(0..upsets.len())])
            .collect();
        let r = bisim::coloring_theorem_check(p, &colors, 8).unwrap();
        assert!(
            r.equivalent,
            "poset {p:?} colors {colors:?}: partitions={} closure={}",
            r.every_proper_bisim_mixes_colors, r.colors_generate
        );
    }
}

#[test]
fn found_bi_p_morphisms_commute_with_cones() {
    // f[up x] = up f(x) and f[down x] = down f(x) for found surjections
    let targets = enumerate_cotrees(4, 10).unwrap();
    for q in enumerate_cotrees(6, 10).unwrap() {
        for t in &targets {
            if let Some(f) = find_surjective_bi_p_morphism(&q, t, 50_000_000).unwrap() {
                for x in 0..q.n() {
                    let mut up_img = 0u64;
                    for y in mask_elements(q.up_mask(x)) {
                        up_img |= 1 << f.map[y];
                    }
                    assert_eq!(up_img, t.up_mask(f.map[x]));
                    let mut down_img = 0u64;
                    for y in mask_elements(q.down_mask(x)) {
                        down_img |= 1 << f.map[y];
                    }
                    assert_eq!(down_img, t.down_mask(f.map[x]));
                }
            }
        }
    }
}

#[test]
fn gamma_monotone_in_domain_via_engine() {
    // growing the pinned domain can only lose refutations
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let sources = enumerate_cotrees(3, 10).unwrap();
    let targets = enumerate_cotrees(4, 10).unwrap();
    for _ in 0..40 {
        let a = BiHeytingAlgebra::upset_algebra(
            &sources[rng.gen_range(0..sources.len())],
            100,
        )
        .unwrap();
        let b = BiHeytingAlgebra::upset_algebra(
            &targets[rng.gen_range(0..targets.len())],
            100,
        )
        .unwrap();
        let mut small = charform::StableDomain::new();
        let mut big = charform::StableDomain::new();
        for x in 0..a.k() {
            for y in 0..a.k() {
                if rng.gen_bool(0.5) {
                    big.insert((x, y));
                    if rng.gen_bool(0.5) {
                        small.insert((x, y));
                    }
                }
            }
        }
        let refutes_big = charform::refutes_char(&b, &a, &CharKind::Stable(big), 50_000_000)
            .unwrap()
            .is_some();
        let refutes_small =
            charform::refutes_char(&b, &a, &CharKind::Stable(small), 50_000_000)
                .unwrap()
                .is_some();
        if refutes_big {
            assert!(refutes_small);
        }
    }
}

#[test]
fn comb_formulas_refute_together_on_forest_duals() {
    // for every algebra with a co-forest dual of <= 7 points and n <= 3:
    // beta of the comb algebra is refuted iff its Jankov formula is
    const BUDGET: u64 = 50_000_000;
    let combs: Vec<BiHeytingAlgebra> = (1..=3)
        .map(|n| {
            BiHeytingAlgebra::upset_algebra(&cotree_lab::poset::make_comb(n).unwrap(), 100)
                .unwrap()
        })
        .collect();
    for forest in cotree_lab::enumerate::enumerate_coforests(7, 10).unwrap() {
        let b = BiHeytingAlgebra::upset_algebra(&forest, 1024).unwrap();
        for a in &combs {
            let j = charform::refutes_char(&b, a, &CharKind::Jankov, BUDGET)
                .unwrap()
                .is_some();
            let s = charform::refutes_char(&b, a, &CharKind::Subframe, BUDGET)
                .unwrap()
                .is_some();
            assert_eq!(j, s, "comb k={} on {forest:?}", a.k());
        }
    }
}

#[test]
fn generated_subalgebras_of_si_are_si() {
    use cotree_lab::algebra::Signature;
    for tree in enumerate_cotrees(4, 10).unwrap() {
        let a = BiHeytingAlgebra::upset_algebra(&tree, 100).unwrap();
        assert!(a.is_si());
        let mut seeds: Vec<Vec<usize>> = vec![vec![]];
        for x in 0..a.k() {
            seeds.push(vec![x]);
            for y in x + 1..a.k() {
                seeds.push(vec![x, y]);
            }
        }
        for seed in seeds {
            let carrier = a.generated_carrier(&seed, Signature::BiHeyting);
            let (sub, inclusion) = a.carrier_algebra(&carrier).unwrap();
            assert!(sub.is_si(), "seed {seed:?} on {tree:?}");
            assert!(inclusion.preserved.heyting());
            assert!(sub.is_bi_godel());
        }
    }
}

#[test]
fn gd_axiom_evaluates_to_top_on_coforest_upsets() {
    let gd = formula::godel_dummett();
    for p in cotree_lab::enumerate::enumerate_coforests(5, 10).unwrap() {
        let a = BiHeytingAlgebra::upset_algebra(&p, 100).unwrap();
        assert_eq!(
            semantics::is_valid(&a, &gd, 10_000_000).unwrap(),
            semantics::Verdict::Valid
        );
    }
}
