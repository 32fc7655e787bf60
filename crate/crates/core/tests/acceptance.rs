//! Acceptance suite: one test per verification criterion, each printing a
//! single pass/fail line. Every grid size, seed count, and budget is pinned
//! here; a correct build reports zero discrepancies everywhere.

use cotree_lab::config::RunConfig;
use cotree_lab::verify::verify_suite;

fn run(criterion: usize, suite: &str, description: &str) {
    let cfg = RunConfig::default();
    let start = std::time::Instant::now();
    let report = verify_suite(suite, &cfg).unwrap_or_else(|e| {
        println!("criterion {criterion} ({description}): FAIL [suite error: {e}]");
        panic!("criterion {criterion}: suite `{suite}` errored: {e}");
    });
    let status = if report.passed() { "PASS" } else { "FAIL" };
    println!(
        "criterion {criterion} ({description}): {status} [{} instances, {} discrepancies, {:.1?}]",
        report.instances,
        report.discrepancies.len(),
        start.elapsed()
    );
    for d in &report.discrepancies {
        println!("  discrepancy: {d}");
    }
    for n in &report.notes {
        println!("  note: {n}");
    }
    assert!(
        report.passed(),
        "criterion {criterion} ({suite}) found {} discrepancies",
        report.discrepancies.len()
    );
    assert!(report.instances > 0, "criterion {criterion} ran no instances");
}

#[test]
fn criterion_01_duality_round_trips() {
    // all enumerated co-forests <= 6 points and all abstract algebras
    // <= 8 elements round-trip through the dual poset up to isomorphism
    run(1, "duality", "duality round trips");
}

#[test]
fn criterion_02_bi_heyting_identities() {
    // the eight arithmetic laws plus the box identity on the upset algebra
    // of every poset <= 6 points
    run(2, "identities", "bi-Heyting identities");
}

#[test]
fn criterion_03_si_characterization() {
    // meet-irreducible bottom agrees with co-tree duals on every co-forest
    // <= 7 points
    run(3, "si", "SI characterization");
}

#[test]
fn criterion_04_discriminator() {
    // the discriminator case split on every SI algebra with dual <= 5
    // points, all triples
    run(4, "discriminator", "discriminator term");
}

#[test]
fn criterion_05_jankov_lemma() {
    // semantic refutation of J(A) vs component surjections, duals <= 4
    // against co-forests <= 5
    run(5, "jankov", "Jankov lemma");
}

#[test]
fn criterion_06_subframe_lemma() {
    // semantic refutation of beta(A) vs order-embeddings on the same grid
    run(6, "subframe", "subframe lemma");
}

#[test]
fn criterion_07_stable_jankov() {
    // 50 seeded random (A, D, B) triples, |A| <= 5, |B| <= 7
    run(7, "stable", "stable Jankov lemma");
}

#[test]
fn criterion_08_depth_width_axiomatization() {
    // co-trees <= 8 points, n <= 4: beta of the chain/co-fork duals tracks
    // depth < n and width < n (width for n >= 2, see the suite note)
    run(8, "depthwidth", "depth/width axiomatization");
}

#[test]
fn criterion_09_comb_theorem() {
    // co-trees <= 8 points, n <= 3: embedding iff surjection, the quotient
    // construction succeeds and verifies, and J/beta refutations coincide
    run(9, "combs", "comb theorem");
}

#[test]
fn criterion_10_hodkinson_antichain() {
    // T_0, T_1, T_2 pairwise incomparable, both directions, exhaustively
    run(10, "hodkinson", "Hodkinson antichain");
}

#[test]
fn criterion_11_combs_one_generated() {
    // the single-upset coloring generates for n <= 5 and the Coloring
    // Theorem check agrees with the closure oracle for n <= 3
    run(11, "onegen", "combs are 1-generated");
}

#[test]
fn criterion_12_depth_bound() {
    // every co-tree <= 8 points omitting the 2-comb satisfies the
    // (gen_rank + 1) * 2 bound on depth and on minimal principal upsets
    run(12, "depthbound", "depth bound");
}

#[test]
fn criterion_13_inconsistency_lemma() {
    // 200 seeded random (premises, conclusion) pairs at model cap 5
    run(13, "inconsistency", "classical inconsistency lemma");
}

#[test]
fn criterion_14_filtration() {
    // 100 seeded refutation instances on bi-Gödel algebras <= 8 elements
    run(14, "filtration", "stable filtration");
}
