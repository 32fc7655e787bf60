//! Command-line surface. Exit codes: 0 = success / equivalences hold,
//! 1 = refutation or discrepancy found (with certificate), 2 = usage or
//! budget error.

use crate::algebra::BiHeytingAlgebra;
use crate::charform::{self, StableDomain};
use crate::config::{OutputFormat, RunConfig};
use crate::enumerate;
use crate::error::{Error, Result};
use crate::formula;
use crate::io;
use crate::morphism::{self, Relation};
use crate::poset::{self, Poset};
use crate::semantics::{self, Valuation, Verdict};
use crate::{bisim, verify};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "cotree-lab",
    about = "Finite-model workbench for bi-Gödel algebras and co-trees",
    version
)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_parser = ["json", "text"])]
    format: Option<String>,
    /// Seed for all randomized suites; fixed seed fixes the run.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap on validity-sweep valuations.
    #[arg(long, global = true)]
    valuation_budget: Option<u64>,
    /// Cap on backtracking-search nodes.
    #[arg(long, global = true)]
    node_budget: Option<u64>,
    /// Cap on materialized upset-algebra size.
    #[arg(long, global = true)]
    upset_cap: Option<usize>,
    /// Cap on brute-force generator-rank inputs.
    #[arg(long, global = true)]
    gen_rank_cap: Option<usize>,
    /// Cap on full partition enumeration.
    #[arg(long, global = true)]
    bell_cap: Option<usize>,
    /// Cap on exhaustive enumeration size.
    #[arg(long, global = true)]
    enum_cap: Option<usize>,
    /// Include wall-clock timings in reports (breaks byte-stability).
    #[arg(long, global = true)]
    timings: bool,
}

impl GlobalOpts {
    fn config(&self) -> RunConfig {
        let mut cfg = RunConfig::default();
        if let Some(f) = &self.format {
            cfg.format = if f == "json" { OutputFormat::Json } else { OutputFormat::Text };
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(v) = self.valuation_budget {
            cfg.valuation_budget = v;
        }
        if let Some(v) = self.node_budget {
            cfg.node_budget = v;
        }
        if let Some(v) = self.upset_cap {
            cfg.upset_cap = v;
        }
        if let Some(v) = self.gen_rank_cap {
            cfg.gen_rank_cap = v;
        }
        if let Some(v) = self.bell_cap {
            cfg.bell_cap = v;
        }
        if let Some(v) = self.enum_cap {
            cfg.enum_cap = v;
        }
        cfg.timings = self.timings;
        cfg
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build, inspect, export, and enumerate finite posets.
    Poset {
        #[command(subcommand)]
        cmd: PosetCmd,
    },
    /// Bi-Heyting algebras: construction, duality, SI and rank checks.
    Algebra {
        #[command(subcommand)]
        cmd: AlgebraCmd,
    },
    /// Parse, evaluate, and decide formulas.
    ///
    /// Grammar (tightest first): `!`/`~` unary, then `&`, then `|`, then
    /// arrows: `->` right-assoc, `<-` left-assoc, `<->` sugar for both
    /// implications; mixing arrows needs parentheses. Atoms: identifiers,
    /// `top`, `bot`. `!x` is `x -> bot`, `~x` is `top <- x`.
    Formula {
        #[command(subcommand)]
        cmd: FormulaCmd,
    },
    /// Characteristic formulas and their refutation checks.
    Charform {
        #[command(subcommand)]
        cmd: CharformCmd,
    },
    /// Morphism searches between posets.
    Morph {
        #[command(subcommand)]
        cmd: MorphCmd,
    },
    /// Bi-bisimulations, generation, and the depth bound.
    Bisim {
        #[command(subcommand)]
        cmd: BisimCmd,
    },
    /// Run a verification suite (or `all`).
    Verify {
        /// duality | identities | si | discriminator | jankov | subframe |
        /// stable | depthwidth | combs | hodkinson | onegen | depthbound |
        /// inconsistency | filtration | all
        suite: String,
        /// Source-dual size for the jankov/subframe grids.
        #[arg(long)]
        max_source: Option<usize>,
        /// Target-dual size for the jankov/subframe grids.
        #[arg(long)]
        max_target: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum PosetCmd {
    /// Emit a standard family member as JSON.
    Make {
        /// chain | antichain | cofork | comb | hodkinson | random
        family: String,
        n: usize,
    },
    /// Summary facts about a poset file.
    Info { file: String },
    /// DOT rendering of the Hasse diagram.
    Dot { file: String },
    /// Enumerate co-trees (default), co-forests, or all posets up to a size.
    Enum {
        max_size: usize,
        #[arg(long, value_parser = ["cotrees", "coforests", "posets"], default_value = "cotrees")]
        kind: String,
        /// Only print the counts per size.
        #[arg(long)]
        counts: bool,
    },
}

#[derive(Subcommand, Debug)]
enum AlgebraCmd {
    /// Upset algebra of a poset file.
    FromPoset { file: String },
    /// Dual poset of an algebra file.
    Dual { file: String },
    /// SI and bi-Gödel predicates.
    SiCheck { file: String },
    /// Minimal number of generators (brute force).
    GenRank { file: String },
}

#[derive(Subcommand, Debug)]
enum FormulaCmd {
    /// Parse and reprint a formula.
    Parse { text: String },
    /// Evaluate under a valuation, e.g. --let p=2 --let q=0.
    Eval {
        #[arg(long)]
        algebra: String,
        text: String,
        #[arg(long = "let", value_name = "VAR=ELEM")]
        bindings: Vec<String>,
    },
    /// Exhaustive validity sweep.
    Valid {
        #[arg(long)]
        algebra: String,
        text: String,
    },
}

#[derive(Subcommand, Debug)]
enum CharformCmd {
    /// Stable canonical formula of an SI bi-Gödel algebra and a domain.
    Gamma {
        algebra: String,
        /// Pairs "a,b;c,d"; omit for the full domain.
        #[arg(long)]
        domain: Option<String>,
    },
    /// Jankov formula.
    Jankov { algebra: String },
    /// Subframe formula.
    Subframe { algebra: String },
    /// Two-sided refutation check of B against the characteristic formula
    /// of A.
    Check {
        #[arg(long, value_parser = ["jankov", "subframe", "stable"])]
        kind: String,
        b: String,
        a: String,
        #[arg(long)]
        domain: Option<String>,
    },
    /// Refutation patterns of a formula over co-tree duals up to a cap.
    Patterns {
        text: String,
        #[arg(long, default_value_t = 4)]
        cap: usize,
    },
}

#[derive(Subcommand, Debug)]
enum MorphCmd {
    /// Lexicographically first surjective bi-p-morphism SRC ->> TGT.
    FindSurjection { src: String, tgt: String },
    /// Lexicographically first order-embedding SRC -> TGT.
    FindEmbedding { src: String, tgt: String },
    /// Constructive quotient of a co-tree onto the n-comb.
    CombQuotient { file: String, n: usize },
    /// Pairwise image-of matrix of poset files.
    Antichain { files: Vec<String> },
}

#[derive(Subcommand, Debug)]
enum BisimCmd {
    /// Check a partition ("0,1;2;3") for the bi-bisimulation conditions.
    Check {
        file: String,
        #[arg(long)]
        blocks: String,
    },
    /// Does a set of elements generate the algebra?
    Generates {
        algebra: String,
        /// Element indices "1,3".
        #[arg(long)]
        elements: String,
    },
    /// Coloring Theorem check: partitions versus closure.
    ColoringTheorem {
        file: String,
        /// Colors as upset element lists, e.g. "0,2;1".
        #[arg(long, default_value = "")]
        colors: String,
    },
    /// Depth bound for a co-tree omitting the n-comb.
    DepthBound { file: String, n: usize },
    /// Scan co-trees omitting the n-comb with gen-rank <= m.
    Ktable {
        n: usize,
        m: usize,
        #[arg(long, default_value_t = 6)]
        size_cap: usize,
    },
}

/// Runs the CLI on an argument vector (without the binary name) and returns
/// the exit code and the rendered output.
pub fn run_command(argv: &[&str]) -> (i32, String) {
    let mut full = vec!["cotree-lab"];
    full.extend_from_slice(argv);
    let cli = match Cli::try_parse_from(&full) {
        Ok(c) => c,
        Err(e) => return (2, e.to_string()),
    };
    let cfg = cli.opts.config();
    match dispatch(cli.command, &cfg) {
        Ok((code, out)) => (code, out),
        Err(e) => (2, format!("error: {e}\n")),
    }
}

fn read(path: &str) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn load_poset(path: &str) -> Result<Poset> {
    io::poset_from_json(&read(path)?)
}

fn load_algebra(path: &str) -> Result<BiHeytingAlgebra> {
    io::algebra_from_json(&read(path)?)
}

fn parse_pairs(s: &str) -> Result<StableDomain> {
    let mut out = StableDomain::new();
    for part in s.split(';').filter(|p| !p.trim().is_empty()) {
        let nums: Vec<&str> = part.split(',').collect();
        if nums.len() != 2 {
            return Err(Error::Usage(format!("bad pair `{part}`")));
        }
        let a = nums[0].trim().parse().map_err(|_| Error::Usage(format!("bad pair `{part}`")))?;
        let b = nums[1].trim().parse().map_err(|_| Error::Usage(format!("bad pair `{part}`")))?;
        out.insert((a, b));
    }
    Ok(out)
}

fn parse_groups(s: &str) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for part in s.split(';').filter(|p| !p.trim().is_empty()) {
        let mut group = Vec::new();
        for n in part.split(',').filter(|x| !x.trim().is_empty()) {
            group.push(
                n.trim()
                    .parse()
                    .map_err(|_| Error::Usage(format!("bad element `{n}`")))?,
            );
        }
        out.push(group);
    }
    Ok(out)
}

fn render(cfg: &RunConfig, value: &Value, text: impl FnOnce() -> String) -> String {
    match cfg.format {
        OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(value).unwrap()),
        OutputFormat::Text => text(),
    }
}

fn dispatch(cmd: Command, cfg: &RunConfig) -> Result<(i32, String)> {
    match cmd {
        Command::Poset { cmd } => poset_cmd(cmd, cfg),
        Command::Algebra { cmd } => algebra_cmd(cmd, cfg),
        Command::Formula { cmd } => formula_cmd(cmd, cfg),
        Command::Charform { cmd } => charform_cmd(cmd, cfg),
        Command::Morph { cmd } => morph_cmd(cmd, cfg),
        Command::Bisim { cmd } => bisim_cmd(cmd, cfg),
        Command::Verify { suite, max_source, max_target } => {
            let mut cfg = cfg.clone();
            cfg.max_source = max_source.or(cfg.max_source);
            cfg.max_target = max_target.or(cfg.max_target);
            verify_cmd(&suite, &cfg)
        }
    }
}

fn poset_cmd(cmd: PosetCmd, cfg: &RunConfig) -> Result<(i32, String)> {
    match cmd {
        PosetCmd::Make { family, n } => {
            let p = match family.as_str() {
                "chain" => poset::make_chain(n)?,
                "antichain" => poset::make_antichain(n)?,
                "cofork" => poset::make_cofork(n)?,
                "comb" => poset::make_comb(n)?,
                "hodkinson" => poset::make_hodkinson(n)?,
                "random" => enumerate::random_cotree(n, cfg.seed)?,
                other => return Err(Error::Usage(format!("unknown family `{other}`"))),
            };
            Ok((0, format!("{}\n", io::poset_to_json(&p))))
        }
        PosetCmd::Info { file } => {
            let p = load_poset(&file)?;
            let upsets = p.all_upsets(cfg.upset_cap).map(|u| u.len()).ok();
            let v = json!({
                "schema": io::SCHEMA,
                "n": p.n(),
                "depth": if p.is_empty() { None } else { Some(p.depth()?) },
                "width": if p.is_empty() { None } else { Some(p.width()?) },
                "is_co_tree": p.is_co_tree(),
                "is_co_forest": p.is_co_forest(),
                "components": p.components().len(),
                "upsets": upsets,
            });
            let text = || {
                format!(
                    "n={} depth={:?} width={:?} co-tree={} co-forest={} components={} upsets={:?}\n",
                    p.n(),
                    p.depth().ok(),
                    p.width().ok(),
                    p.is_co_tree(),
                    p.is_co_forest(),
                    p.components().len(),
                    upsets
                )
            };
            Ok((0, render(cfg, &v, text)))
        }
        PosetCmd::Dot { file } => {
            let p = load_poset(&file)?;
            Ok((0, io::poset_to_dot(&p)))
        }
        PosetCmd::Enum { max_size, kind, counts } => {
            let all = match kind.as_str() {
                "cotrees" => enumerate::enumerate_cotrees(max_size, cfg.enum_cap)?,
                "coforests" => enumerate::enumerate_coforests(max_size, cfg.enum_cap)?,
                "posets" => enumerate::enumerate_posets(max_size, cfg.enum_cap)?,
                other => return Err(Error::Usage(format!("unknown kind `{other}`"))),
            };
            if counts {
                let mut per_size = vec![0usize; max_size + 1];
                for p in &all {
                    per_size[p.n()] += 1;
                }
                let v = json!({
                    "schema": io::SCHEMA,
                    "kind": kind,
                    "counts": per_size[1..].to_vec(),
                    "total": all.len(),
                });
                let text = || format!("counts by size: {:?} (total {})\n", &per_size[1..], all.len());
                Ok((0, render(cfg, &v, text)))
            } else {
                let docs: Vec<Value> = all
                    .iter()
                    .map(|p| serde_json::to_value(io::poset_to_doc(p)).unwrap())
                    .collect();
                Ok((0, format!("{}\n", serde_json::to_string_pretty(&docs).unwrap())))
            }
        }
    }
}

fn algebra_cmd(cmd: AlgebraCmd, cfg: &RunConfig) -> Result<(i32, String)> {
    match cmd {
        AlgebraCmd::FromPoset { file } => {
            let p = load_poset(&file)?;
            let a = BiHeytingAlgebra::upset_algebra(&p, cfg.upset_cap)?;
            Ok((0, format!("{}\n", io::algebra_to_json(&a))))
        }
        AlgebraCmd::Dual { file } => {
            let a = load_algebra(&file)?;
            let (dual, _, _) = a.duality_witness()?;
            Ok((0, format!("{}\n", io::poset_to_json(&dual))))
        }
        AlgebraCmd::SiCheck { file } => {
            let a = load_algebra(&file)?;
            let v = json!({
                "schema": io::SCHEMA,
                "k": a.k(),
                "si": a.is_si(),
                "bi_godel": a.is_bi_godel(),
            });
            let text = || format!("k={} si={} bi-godel={}\n", a.k(), a.is_si(), a.is_bi_godel());
            Ok((0, render(cfg, &v, text)))
        }
        AlgebraCmd::GenRank { file } => {
            let a = load_algebra(&file)?;
            let rank = a.gen_rank(cfg.gen_rank_cap)?;
            let v = json!({ "schema": io::SCHEMA, "gen_rank": rank });
            Ok((0, render(cfg, &v, || format!("gen-rank={rank}\n"))))
        }
    }
}

fn parse_bindings(bindings: &[String]) -> Result<Valuation> {
    let mut v = Valuation::new();
    for b in bindings {
        let (name, val) = b
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("binding `{b}` is not VAR=ELEM")))?;
        let elem = val
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("binding `{b}` is not VAR=ELEM")))?;
        v.insert(name.trim().to_string(), elem);
    }
    Ok(v)
}

fn formula_cmd(cmd: FormulaCmd, cfg: &RunConfig) -> Result<(i32, String)> {
    match cmd {
        FormulaCmd::Parse { text } => {
            let f = formula::parse(&text)?;
            let v = json!({
                "schema": io::SCHEMA,
                "formula": f.to_string(),
                "vars": f.vars().into_iter().collect::<Vec<_>>(),
                "size": f.size(),
            });
            Ok((0, render(cfg, &v, || format!("{f}\n"))))
        }
        FormulaCmd::Eval { algebra, text, bindings } => {
            let a = load_algebra(&algebra)?;
            let f = formula::parse(&text)?;
            let v = parse_bindings(&bindings)?;
            let value = semantics::eval(&a, &f, &v)?;
            let out = json!({
                "schema": io::SCHEMA,
                "value": value,
                "label": a.label(value),
                "is_top": value == a.top(),
            });
            let text = || format!("value={} ({})\n", value, a.label(value));
            Ok((0, render(cfg, &out, text)))
        }
        FormulaCmd::Valid { algebra, text } => {
            let a = load_algebra(&algebra)?;
            let f = formula::parse(&text)?;
            match semantics::is_valid(&a, &f, cfg.valuation_budget)? {
                Verdict::Valid => {
                    let v = json!({ "schema": io::SCHEMA, "verdict": "valid" });
                    Ok((0, render(cfg, &v, || "valid\n".into())))
                }
                Verdict::Refuted { valuation } => {
                    let v = json!({
                        "schema": io::SCHEMA,
                        "verdict": "refuted",
                        "valuation": valuation,
                    });
                    let text = || format!("refuted at {valuation:?}\n");
                    Ok((1, render(cfg, &v, text)))
                }
            }
        }
    }
}

fn charform_cmd(cmd: CharformCmd, cfg: &RunConfig) -> Result<(i32, String)> {
    match cmd {
        CharformCmd::Gamma { algebra, domain } => {
            let a = load_algebra(&algebra)?;
            let d = match domain {
                Some(s) => parse_pairs(&s)?,
                None => charform::full_domain(&a),
            };
            let f = charform::gamma(&a, &d)?;
            Ok((0, format!("{f}\n")))
        }
        CharformCmd::Jankov { algebra } => {
            let a = load_algebra(&algebra)?;
            Ok((0, format!("{}\n", charform::jankov(&a)?)))
        }
        CharformCmd::Subframe { algebra } => {
            let a = load_algebra(&algebra)?;
            Ok((0, format!("{}\n", charform::beta(&a)?)))
        }
        CharformCmd::Check { kind, b, a, domain } => {
            let b = load_algebra(&b)?;
            let a = load_algebra(&a)?;
            let (equivalent, report) = match kind.as_str() {
                "jankov" => {
                    let r = charform::check_jankov_refutation(&b, &a, cfg.node_budget)?;
                    let v = json!({
                        "schema": io::SCHEMA,
                        "kind": "jankov",
                        "equivalent": r.equivalent,
                        "semantic_refuted": r.refuted.as_ref().map(|(c, h)| json!({
                            "component": c, "valuation": h,
                        })),
                        "surjection": r.surjection.as_ref().map(|(c, f)| json!({
                            "component": c, "map": f.map,
                        })),
                    });
                    (r.equivalent, v)
                }
                "subframe" => {
                    let r = charform::check_subframe_refutation(&b, &a, cfg.node_budget)?;
                    let v = json!({
                        "schema": io::SCHEMA,
                        "kind": "subframe",
                        "equivalent": r.equivalent,
                        "semantic_refuted": r.refuted.as_ref().map(|(c, h)| json!({
                            "component": c, "valuation": h,
                        })),
                        "embedding": r.embedding.as_ref().map(|f| json!({ "map": f.map })),
                    });
                    (r.equivalent, v)
                }
                "stable" => {
                    let d = match domain {
                        Some(s) => parse_pairs(&s)?,
                        None => charform::full_domain(&a),
                    };
                    let r = charform::check_stable_refutation(
                        &b,
                        &a,
                        &d,
                        cfg.valuation_budget,
                        cfg.node_budget,
                    )?;
                    let v = json!({
                        "schema": io::SCHEMA,
                        "kind": "stable",
                        "equivalent": r.equivalent,
                        "sweep_refuted": r.refuted,
                        "embedding": r.embedding.as_ref().map(|(c, m)| json!({
                            "component": c, "map": m.map,
                        })),
                    });
                    (r.equivalent, v)
                }
                other => return Err(Error::Usage(format!("unknown check kind `{other}`"))),
            };
            let code = if equivalent { 0 } else { 1 };
            let text = || format!("equivalent={equivalent}\n");
            Ok((code, render(cfg, &report, text)))
        }
        CharformCmd::Patterns { text, cap } => {
            let f = formula::parse(&text)?;
            let patterns = charform::refutation_patterns(
                &f,
                cap,
                cfg.enum_cap,
                cfg.upset_cap,
                cfg.valuation_budget,
            )?;
            let v = json!({
                "schema": io::SCHEMA,
                "cap": cap,
                "count": patterns.len(),
                "patterns": patterns.iter().map(|p| json!({
                    "dual": serde_json::to_value(io::poset_to_doc(&p.dual)).unwrap(),
                    "algebra_size": p.algebra.k(),
                    "domain": p.domain.iter().collect::<Vec<_>>(),
                    "valuation": p.valuation,
                })).collect::<Vec<_>>(),
            });
            let text = || format!("{} pattern(s) at cap {}\n", patterns.len(), cap);
            Ok((0, render(cfg, &v, text)))
        }
    }
}

fn morph_cmd(cmd: MorphCmd, cfg: &RunConfig) -> Result<(i32, String)> {
    match cmd {
        MorphCmd::FindSurjection { src, tgt } => {
            let s = load_poset(&src)?;
            let t = load_poset(&tgt)?;
            let found = morphism::find_surjective_bi_p_morphism(&s, &t, cfg.node_budget)?;
            let v = json!({
                "schema": io::SCHEMA,
                "found": found.is_some(),
                "map": found.as_ref().map(|f| f.map.clone()),
            });
            let text = || match &found {
                Some(f) => format!("found: {:?}\n", f.map),
                None => "none\n".into(),
            };
            Ok((0, render(cfg, &v, text)))
        }
        MorphCmd::FindEmbedding { src, tgt } => {
            let s = load_poset(&src)?;
            let t = load_poset(&tgt)?;
            let found = morphism::find_order_embedding(&s, &t, cfg.node_budget)?;
            let v = json!({
                "schema": io::SCHEMA,
                "found": found.is_some(),
                "map": found.as_ref().map(|f| f.map.clone()),
            });
            let text = || match &found {
                Some(f) => format!("found: {:?}\n", f.map),
                None => "none\n".into(),
            };
            Ok((0, render(cfg, &v, text)))
        }
        MorphCmd::CombQuotient { file, n } => {
            let p = load_poset(&file)?;
            let f = morphism::comb_quotient(&p, n)?;
            Ok((0, format!("{}\n", io::poset_map_to_json(&f))))
        }
        MorphCmd::Antichain { files } => {
            if files.len() < 2 {
                return Err(Error::Usage("need at least two poset files".into()));
            }
            let posets: Vec<Poset> =
                files.iter().map(|f| load_poset(f)).collect::<Result<_>>()?;
            let matrix = morphism::antichain_matrix(&posets, cfg.node_budget)?;
            let names: Vec<String> = files.clone();
            let cell = |r: &Relation| match r {
                Relation::Isomorphic => "iso",
                Relation::ImageOfRight => "<=",
                Relation::ImageOfLeft => ">=",
                Relation::Incomparable => "incomparable",
            };
            let v = json!({
                "schema": io::SCHEMA,
                "posets": names,
                "matrix": matrix.iter().map(|row| {
                    row.iter().map(cell).collect::<Vec<_>>()
                }).collect::<Vec<_>>(),
            });
            let text = || {
                let mut out = String::new();
                for (i, row) in matrix.iter().enumerate() {
                    for (j, r) in row.iter().enumerate() {
                        out.push_str(&format!("{} vs {}: {}\n", names[i], names[j], cell(r)));
                    }
                }
                out
            };
            Ok((0, render(cfg, &v, text)))
        }
    }
}

fn bisim_cmd(cmd: BisimCmd, cfg: &RunConfig) -> Result<(i32, String)> {
    match cmd {
        BisimCmd::Check { file, blocks } => {
            let p = load_poset(&file)?;
            let groups = parse_groups(&blocks)?;
            let e = bisim::EquivPartition::from_blocks(&p, groups)?;
            let ok = bisim::is_bi_bisimulation(&p, &e)?;
            let v = json!({ "schema": io::SCHEMA, "bi_bisimulation": ok });
            Ok((0, render(cfg, &v, || format!("bi-bisimulation={ok}\n"))))
        }
        BisimCmd::Generates { algebra, elements } => {
            let a = load_algebra(&algebra)?;
            let elems: Vec<usize> = parse_groups(&elements)?
                .into_iter()
                .flatten()
                .collect();
            let ok = a.generates(&elems);
            let v = json!({ "schema": io::SCHEMA, "generates": ok });
            Ok((0, render(cfg, &v, || format!("generates={ok}\n"))))
        }
        BisimCmd::ColoringTheorem { file, colors } => {
            let p = load_poset(&file)?;
            let masks: Vec<u64> = parse_groups(&colors)?
                .into_iter()
                .map(|g| g.into_iter().fold(0u64, |m, e| m | (1 << e)))
                .collect();
            let r = bisim::coloring_theorem_check(&p, &masks, cfg.bell_cap)?;
            let v = json!({
                "schema": io::SCHEMA,
                "every_proper_bisim_mixes_colors": r.every_proper_bisim_mixes_colors,
                "colors_generate": r.colors_generate,
                "equivalent": r.equivalent,
                "counterexample_blocks": r.counterexample.as_ref().map(|e| e.blocks.clone()),
            });
            let code = if r.equivalent { 0 } else { 1 };
            let text = || {
                format!(
                    "partitions={} closure={} equivalent={}\n",
                    r.every_proper_bisim_mixes_colors, r.colors_generate, r.equivalent
                )
            };
            Ok((code, render(cfg, &v, text)))
        }
        BisimCmd::DepthBound { file, n } => {
            let p = load_poset(&file)?;
            let r = bisim::depth_bound_check(
                &p,
                n,
                cfg.upset_cap,
                cfg.gen_rank_cap,
                cfg.node_budget,
            )?;
            let ok = r.depth_ok && r.minimal_upsets_ok;
            let v = json!({
                "schema": io::SCHEMA,
                "n": r.n,
                "gen_rank": r.gen_rank,
                "bound": r.bound,
                "depth": r.depth,
                "depth_ok": r.depth_ok,
                "minimal_upsets_ok": r.minimal_upsets_ok,
            });
            let code = if ok { 0 } else { 1 };
            let text = || {
                format!(
                    "gen-rank={} bound={} depth={} ok={}\n",
                    r.gen_rank, r.bound, r.depth, ok
                )
            };
            Ok((code, render(cfg, &v, text)))
        }
        BisimCmd::Ktable { n, m, size_cap } => {
            let r = bisim::ktable(
                n,
                m,
                size_cap,
                cfg.enum_cap,
                cfg.upset_cap,
                cfg.gen_rank_cap.max(160),
                cfg.node_budget,
            )?;
            let v = json!({
                "schema": io::SCHEMA,
                "n": r.n,
                "m": r.m,
                "size_cap": r.size_cap,
                "cotrees_scanned": r.cotrees_scanned,
                "cotrees_counted": r.cotrees_counted,
                "max_algebra_size": r.max_algebra_size,
            });
            let text = || {
                format!(
                    "scanned={} counted={} max-algebra={}\n",
                    r.cotrees_scanned, r.cotrees_counted, r.max_algebra_size
                )
            };
            Ok((0, render(cfg, &v, text)))
        }
    }
}

fn verify_cmd(suite: &str, cfg: &RunConfig) -> Result<(i32, String)> {
    let suites: Vec<&str> = if suite == "all" {
        verify::SUITES.to_vec()
    } else {
        vec![suite]
    };
    let mut out = String::new();
    let mut all_pass = true;
    let mut reports = Vec::new();
    for s in suites {
        let r = verify::verify_suite(s, cfg)?;
        all_pass &= r.passed();
        match cfg.format {
            OutputFormat::Text => {
                out.push_str(&format!(
                    "{}: {} ({} instances, {} discrepancies)\n",
                    r.suite,
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.instances,
                    r.discrepancies.len()
                ));
                for d in &r.discrepancies {
                    out.push_str(&format!("  {d}\n"));
                }
                for n in &r.notes {
                    out.push_str(&format!("  note: {n}\n"));
                }
            }
            OutputFormat::Json => reports.push(serde_json::to_value(&r).unwrap()),
        }
    }
    if cfg.format == OutputFormat::Json {
        out = format!("{}\n", serde_json::to_string_pretty(&reports).unwrap());
    }
    Ok((if all_pass { 0 } else { 1 }, out))
}
