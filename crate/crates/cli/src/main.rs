mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use lee_embed::embedding::{distance_profile, lower_bound_gap, pi_group, pi_number, DEFAULT_ENUMERATION_BUDGET};
use lee_embed::group::groups_of_order;
use lee_embed::lee::{f_lower_bound, radius_for, shell_size, sphere_size};
use lee_embed::planar::optimal_hom_2d;
use lee_embed::plsearch::{
    backtrack_pl2, backtrack_pl2_sharded, node_budget_estimate, shard_plan, Checkpoint, NonExistenceCertificate,
    Pl2Search, RunLimits, SearchStatus, Verdict, DEFAULT_CHECKPOINT_EVERY,
};
use lee_embed::qpl::{
    build_code, parse_appendix, search_optimal_embedding, verify_appendix, CodeSpec, LinearLeeCode, SearchMode,
    APPENDIX_CSV,
};
use lee_embed::render::render_grid_with_summary;
use lee_embed::volume::{octahedron_alpha, threshold_scan, Rational, SCAN_BOUND};
use lee_embed::{AbelianGroup, EmbeddingNumber, Error, GroupElement, Homomorphism, Word};
use serde_json::{json, Value};

use report::RunReport;

const EXIT_FAILURE: u8 = 1;
const EXIT_BUDGET: u8 = 3;
const EXIT_OVERFLOW: u8 = 4;
const EXIT_INPUT: u8 = 5;
const EXIT_VERIFICATION: u8 = 6;

#[derive(Parser)]
#[command(name = "lee-embed", version, about = "Embeddings of finite abelian groups into Z^n and Lee codes")]
struct Cli {
    /// Print a JSON run report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// More log output on stderr (repeat for more).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Size of the Lee sphere S_{n,r} and its shells.
    Sphere {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: u64,
    },
    /// Embedding numbers: pi(n,k), or pi(n,G,phi) when --images is given.
    Pi {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<u64>,
        #[command(flatten)]
        target: GroupArgs,
        /// Images of e_1..e_n: `1,5` for a cyclic group, or JSON such as `[[0,1],[1,3]]`.
        #[arg(long, allow_hyphen_values = true)]
        images: Option<String>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u128,
    },
    /// The explicit optimal embedding of Z_k into Z^2.
    Embed2d {
        #[arg(long)]
        k: u64,
        /// Also construct every order up to this one and report failures.
        #[arg(long)]
        through: Option<u64>,
    },
    /// Backtracking search for a linear PL(n,2) code in a group of order |S_{n,2}|.
    SearchPl {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<u64>,
        #[command(flatten)]
        target: GroupArgs,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        /// Run only this shard (0-based) of the plan.
        #[arg(long)]
        shard_index: Option<usize>,
        /// Checkpoint file; resumed from when it exists. Needs a single shard.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CHECKPOINT_EVERY)]
        checkpoint_every: u64,
        /// Pause after this many nodes in total (saving the checkpoint).
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Search an optimal embedding (quasi-perfect code) for one order.
    SearchQpl {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        k: u64,
        /// Try every abelian group of order k, not just Z_k.
        #[arg(long)]
        all_groups: bool,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u128,
    },
    /// Verify a table of optimal embeddings into Z^3.
    Verify {
        /// CSV with header k,phi_e1,phi_e2,phi_e3; the bundled table if omitted.
        #[arg(long)]
        appendix: Option<PathBuf>,
        /// Radii that must be covered, 1..=max_e.
        #[arg(long, default_value_t = 6)]
        max_e: u64,
        /// Do not search replacements for failing rows.
        #[arg(long)]
        no_repair: bool,
    },
    /// Decode a word with a code given as JSON (file path or inline).
    Decode {
        #[arg(long)]
        code: String,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Packing bound: the radius from which no tiling exists.
    Bound {
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Packing efficiency as a fraction; 18/19 for n = 3 by default.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = SCAN_BOUND)]
        scan_bound: u64,
    },
    /// SVG picture of a homomorphism Z^2 -> G.
    Render {
        #[arg(long)]
        k: Option<u64>,
        #[command(flatten)]
        target: GroupArgs,
        #[arg(long, allow_hyphen_values = true)]
        images: String,
        #[arg(long, default_value_t = 3)]
        extent: u64,
        /// Radii of the Lee spheres to outline.
        #[arg(long, value_delimiter = ',')]
        radii: Vec<u64>,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare pi(n,Z_k) with the other groups of order k.
    ConjectureProbe {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k_min: u64,
        #[arg(long)]
        k_max: u64,
        /// Orders whose search space exceeds this are skipped.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u128,
    },
}

#[derive(Args)]
struct GroupArgs {
    /// Target group in invariant-factor form, e.g. Z_2xZ_8 (default Z_k).
    #[arg(long)]
    group: Option<String>,
}

enum Failure {
    Lib(Error),
    Input(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<(), Failure>;

fn resolve_group(k: Option<u64>, target: &GroupArgs) -> Result<AbelianGroup, Failure> {
    match (&target.group, k) {
        (Some(s), k) => {
            let g: AbelianGroup = s.parse()?;
            if let Some(k) = k.filter(|&k| k != g.order()) {
                return Err(Failure::Input(format!("--k {k} does not match |{g}| = {}", g.order())));
            }
            Ok(g)
        }
        (None, Some(k)) => Ok(AbelianGroup::cyclic(k)?),
        (None, None) => Err(Failure::Input("give --k or --group".into())),
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Failure::Input(format!("not an integer: {t:?}"))))
        .collect()
}

fn parse_images(group: &AbelianGroup, s: &str) -> Result<Homomorphism, Failure> {
    let elems: Vec<GroupElement> = if s.trim_start().starts_with('[') {
        let raw: Vec<Value> = serde_json::from_str(s).map_err(|e| Failure::Input(e.to_string()))?;
        raw.into_iter()
            .map(|v| {
                let r: Vec<i64> = match v {
                    Value::Array(a) => a.iter().filter_map(Value::as_i64).collect(),
                    v => v.as_i64().into_iter().collect(),
                };
                group.element(&r)
            })
            .collect::<Result<_, _>>()?
    } else {
        parse_ints(s)?.iter().map(|&x| group.element(&[x])).collect::<Result<_, _>>()?
    };
    Ok(Homomorphism::new(group.clone(), elems)?)
}

struct Ctx {
    json: bool,
    report: RunReport,
    text: Vec<String>,
}

impl Ctx {
    fn say(&mut self, line: impl Into<String>) {
        self.text.push(line.into());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).target(env_logger::Target::Stderr).init();

    let (name, params) = describe(&cli.command);
    let mut ctx = Ctx { json: cli.json, report: RunReport::new(name, params), text: Vec::new() };
    let start = Instant::now();
    let res = dispatch(&cli.command, &mut ctx);
    ctx.report.timing.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;

    let code = match &res {
        Ok(()) => 0,
        Err(Failure::Lib(Error::BudgetExceeded { .. })) => EXIT_BUDGET,
        Err(Failure::Lib(Error::Overflow(_))) => EXIT_OVERFLOW,
        Err(Failure::Lib(Error::Io(_))) => EXIT_FAILURE,
        Err(Failure::Lib(_)) | Err(Failure::Input(_)) => EXIT_INPUT,
        Err(Failure::Verification(_)) => EXIT_VERIFICATION,
    };
    if let Err(f) = &res {
        let msg = match f {
            Failure::Lib(e) => e.to_string(),
            Failure::Input(m) | Failure::Verification(m) => m.clone(),
        };
        eprintln!("error: {msg}");
        if ctx.report.verdicts.is_null() {
            ctx.report.verdicts = json!({ "error": msg, "exit_code": code });
        }
    }
    if ctx.json {
        println!("{}", serde_json::to_string_pretty(&ctx.report).expect("report serialises"));
    } else {
        for line in &ctx.text {
            println!("{line}");
        }
    }
    ExitCode::from(code)
}

fn describe(cmd: &Command) -> (&'static str, Value) {
    match cmd {
        Command::Sphere { n, r } => ("sphere", json!({ "n": n, "r": r })),
        Command::Pi { n, k, target, images, budget } => {
            ("pi", json!({ "n": n, "k": k, "group": target.group, "images": images, "budget": budget.to_string() }))
        }
        Command::Embed2d { k, through } => ("embed2d", json!({ "k": k, "through": through })),
        Command::SearchPl { n, k, target, shards, shard_index, checkpoint, checkpoint_every, max_nodes } => (
            "search-pl",
            json!({
                "n": n, "k": k, "group": target.group, "shards": shards, "shard_index": shard_index,
                "checkpoint": checkpoint, "checkpoint_every": checkpoint_every, "max_nodes": max_nodes,
            }),
        ),
        Command::SearchQpl { n, k, all_groups, budget } => {
            ("search-qpl", json!({ "n": n, "k": k, "all_groups": all_groups, "budget": budget.to_string() }))
        }
        Command::Verify { appendix, max_e, no_repair } => {
            ("verify", json!({ "appendix": appendix, "max_e": max_e, "repair": !no_repair }))
        }
        Command::Decode { code, word } => ("decode", json!({ "code": code, "word": word })),
        Command::Bound { n, alpha, scan_bound } => {
            ("bound", json!({ "n": n, "alpha": alpha, "scan_bound": scan_bound }))
        }
        Command::Render { k, target, images, extent, radii, out } => (
            "render",
            json!({ "k": k, "group": target.group, "images": images, "extent": extent, "radii": radii, "out": out }),
        ),
        Command::ConjectureProbe { n, k_min, k_max, budget } => {
            ("conjecture-probe", json!({ "n": n, "k_min": k_min, "k_max": k_max, "budget": budget.to_string() }))
        }
    }
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Outcome {
    match cmd {
        Command::Sphere { n, r } => cmd_sphere(ctx, *n, *r),
        Command::Pi { n, k, target, images, budget } => cmd_pi(ctx, *n, *k, target, images.as_deref(), *budget),
        Command::Embed2d { k, through } => cmd_embed2d(ctx, *k, *through),
        Command::SearchPl { n, k, target, shards, shard_index, checkpoint, checkpoint_every, max_nodes } => {
            let group = resolve_group(*k, target)?;
            let limits = RunLimits { checkpoint_every: *checkpoint_every, max_nodes: *max_nodes };
            cmd_search_pl(ctx, *n, &group, *shards, *shard_index, checkpoint.as_deref(), limits)
        }
        Command::SearchQpl { n, k, all_groups, budget } => cmd_search_qpl(ctx, *n, *k, *all_groups, *budget),
        Command::Verify { appendix, max_e, no_repair } => cmd_verify(ctx, appendix.as_deref(), *max_e, !no_repair),
        Command::Decode { code, word } => cmd_decode(ctx, code, word),
        Command::Bound { n, alpha, scan_bound } => cmd_bound(ctx, *n, alpha.as_deref(), *scan_bound),
        Command::Render { k, target, images, extent, radii, out } => {
            let group = resolve_group(*k, target)?;
            cmd_render(ctx, &group, images, *extent, radii, out.as_deref())
        }
        Command::ConjectureProbe { n, k_min, k_max, budget } => cmd_probe(ctx, *n, *k_min, *k_max, *budget),
    }
}

fn cmd_sphere(ctx: &mut Ctx, n: usize, r: u64) -> Outcome {
    let size = sphere_size(n, r)?;
    let shells = (0..=r).map(|d| shell_size(n, d)).collect::<Result<Vec<_>, _>>()?;
    ctx.report.verdicts = json!({ "size": size, "shells": shells });
    ctx.say(format!("{size}"));
    Ok(())
}

fn cmd_pi(ctx: &mut Ctx, n: usize, k: Option<u64>, target: &GroupArgs, images: Option<&str>, budget: u128) -> Outcome {
    if let Some(images) = images {
        let group = resolve_group(k, target)?;
        let phi = parse_images(&group, images)?;
        if phi.dim() != n {
            return Err(Failure::Input(format!("{} images for n = {n}", phi.dim())));
        }
        let profile = distance_profile(&phi);
        let value = profile.embedding_number();
        let f = f_lower_bound(n, group.order())?;
        let gap = lower_bound_gap(&profile, n)?;
        ctx.report.verdicts = json!({
            "pi": value, "group": group, "images": phi.images(), "f": f, "gap": gap,
            "layers": profile.layer_sizes(), "optimal": gap == Some(0),
        });
        ctx.say(format!("pi = {value} for {phi}"));
        ctx.say(format!("f({n}, {}) = {f}, layers {:?}", group.order(), profile.layer_sizes()));
        return Ok(());
    }
    if target.group.is_some() {
        let group = resolve_group(k, target)?;
        let res = pi_group(n, &group, budget)?;
        ctx.report.verdicts = json!({
            "pi": res.value, "attained_by": group, "images": res.attained_by.as_ref().map(|h| h.images()),
            "candidates": res.candidates,
        });
        ctx.say(format!("pi({n}, {group}) = {}", res.value));
        if let Some(h) = &res.attained_by {
            ctx.say(format!("attained by {h}"));
        }
        return Ok(());
    }
    let k = k.ok_or_else(|| Failure::Input("give --k or --group".into()))?;
    let res = pi_number(n, k, budget)?;
    let per_group: Vec<Value> = res.per_group.iter().map(|(g, v)| json!({ "group": g, "pi": v })).collect();
    let best = res.attained_by.as_ref();
    ctx.report.verdicts = json!({
        "pi": res.value,
        "attained_by": best.map(|h| h.group()),
        "images": best.map(|h| h.images()),
        "f": f_lower_bound(n, k)?,
        "per_group": per_group,
    });
    ctx.say(format!("pi({n}, {k}) = {}", res.value));
    if let Some(h) = best {
        ctx.say(format!("attained by {h}"));
    }
    for (g, v) in &res.per_group {
        ctx.say(format!("  pi({n}, {g}) = {v}"));
    }
    Ok(())
}

fn cmd_embed2d(ctx: &mut Ctx, k: u64, through: Option<u64>) -> Outcome {
    let e = optimal_hom_2d(k)?;
    let mut verdicts = serde_json::to_value(&e).expect("serialisable");
    ctx.say(format!("{} ({:?}, r = {}, embedding number {})", e.hom, e.case, e.r, e.embedding_number));
    if let Some(hi) = through {
        let mut failures = Vec::new();
        let mut fallbacks = Vec::new();
        for kk in 1..=hi {
            match optimal_hom_2d(kk) {
                Ok(x) if x.source == lee_embed::planar::ConstructionSource::Fallback => fallbacks.push(kk),
                Ok(_) => {}
                Err(_) => failures.push(kk),
            }
        }
        verdicts["range"] = json!({ "through": hi, "failures": failures, "fallbacks": fallbacks });
        ctx.say(format!("1..={hi}: {} failures, {} fallbacks", failures.len(), fallbacks.len()));
        if !failures.is_empty() {
            ctx.report.verdicts = verdicts;
            return Err(Failure::Verification(format!("construction failed for {failures:?}")));
        }
    }
    ctx.report.verdicts = verdicts;
    Ok(())
}

fn cmd_search_pl(
    ctx: &mut Ctx,
    n: usize,
    group: &AbelianGroup,
    shards: usize,
    shard_index: Option<usize>,
    checkpoint: Option<&Path>,
    limits: RunLimits,
) -> Outcome {
    let plan = shard_plan(group, shards)?;
    let estimate = node_budget_estimate(n as u64)?;
    let selected = match shard_index {
        Some(i) => vec![*plan.get(i).ok_or_else(|| Failure::Input(format!("shard {i} of {}", plan.len())))?],
        None => plan.clone(),
    };
    if checkpoint.is_some() && selected.len() != 1 {
        return Err(Failure::Input("--checkpoint needs a single shard (--shard-index or --shards 1)".into()));
    }

    let outcome = if selected.len() == 1 && (checkpoint.is_some() || limits.max_nodes.is_some()) {
        let shard = selected[0];
        let mut search = match checkpoint.filter(|p| p.exists()) {
            Some(p) => {
                let bytes = std::fs::read(p).map_err(Error::from)?;
                ctx.report.add_digest(p.display().to_string(), &bytes);
                let cp = Checkpoint::load(p)?;
                if cp.n != n || &cp.group != group || cp.shard != shard {
                    return Err(Failure::Input(format!("checkpoint {} is for another search", p.display())));
                }
                log::info!("resuming from {} at {} nodes", p.display(), cp.nodes_visited);
                Pl2Search::resume(&cp)?
            }
            None => Pl2Search::new(n, group.clone(), Some(shard))?,
        };
        let status = search.run(limits, |cp| {
            eprintln!("progress: {} nodes visited / estimate {estimate}", cp.nodes_visited);
            match checkpoint {
                Some(p) => cp.save(p),
                None => Ok(()),
            }
        })?;
        match status {
            SearchStatus::Finished(o) => o,
            SearchStatus::Paused(cp) => {
                if let Some(p) = checkpoint {
                    cp.save(p)?;
                }
                ctx.report.verdicts = json!({
                    "verdict": "PAUSED", "nodes_visited": cp.nodes_visited, "shard": shard,
                    "frontier": cp.frontier, "node_budget_estimate": estimate.to_string(),
                });
                ctx.say(format!("PAUSED after {} nodes", cp.nodes_visited));
                return Ok(());
            }
        }
    } else if selected.len() == plan.len() {
        backtrack_pl2_sharded(n, group, &plan)?
    } else {
        backtrack_pl2(n, group, Some(selected[0]))?
    };

    let mut verdicts = serde_json::to_value(&outcome).expect("serialisable");
    verdicts["node_budget_estimate"] = json!(estimate.to_string());
    verdicts["shards_run"] = json!(selected);
    verdicts["plan_size"] = json!(plan.len());
    match &outcome.verdict {
        Verdict::Witness(w) => {
            let phi = Homomorphism::new(group.clone(), w.clone())?;
            ctx.say(format!("WITNESS {phi} ({} nodes)", outcome.nodes_visited));
        }
        Verdict::NoWitness => {
            ctx.say(format!(
                "NO_WITNESS ({} nodes, {} of {} shards)",
                outcome.nodes_visited,
                selected.len(),
                plan.len()
            ));
            if selected.len() == plan.len() {
                let cert = NonExistenceCertificate::new(n, group, selected.clone(), outcome.nodes_visited)?;
                verdicts["certificate"] = serde_json::to_value(cert).expect("serialisable");
            }
        }
    }
    ctx.report.verdicts = verdicts;
    Ok(())
}

fn cmd_search_qpl(ctx: &mut Ctx, n: usize, k: u64, all_groups: bool, budget: u128) -> Outcome {
    let mode = if all_groups { SearchMode::AllGroups } else { SearchMode::Cyclic };
    let found = search_optimal_embedding(n, k, mode, budget)?;
    let e = radius_for(n, k)?;
    match &found {
        Some(phi) => {
            let code = build_code(phi, e)?;
            ctx.report.verdicts = json!({
                "verdict": "FOUND", "hom": phi, "e": e, "class": code.class(), "code": code.spec(),
            });
            ctx.say(format!("FOUND {phi}: {:?} code, e = {e}", code.class()));
        }
        None => {
            ctx.report.verdicts = json!({ "verdict": "NOT_FOUND", "e": e, "mode": mode });
            ctx.say(format!("NOT_FOUND for k = {k} in Z^{n}"));
        }
    }
    Ok(())
}

fn cmd_verify(ctx: &mut Ctx, path: Option<&Path>, max_e: u64, repair: bool) -> Outcome {
    let bytes = match path {
        Some(p) => std::fs::read(p).map_err(Error::from)?,
        None => APPENDIX_CSV.as_bytes().to_vec(),
    };
    let label = path.map_or_else(|| "bundled:appendix_z3.csv".to_string(), |p| p.display().to_string());
    ctx.report.add_digest(label, &bytes);
    let rows = parse_appendix(bytes.as_slice())?;
    let report = verify_appendix(&rows, max_e, repair)?;
    ctx.say(format!("{} rows, {} failing", report.rows.len(), report.failures.len()));
    for r in report.rows.iter().filter(|r| !r.optimal) {
        let fix = r.replacement.as_ref().map_or("none found".to_string(), |h| h.to_string());
        ctx.say(format!("  k = {}: {:?} is not optimal; search: {fix}", r.k, r.images));
    }
    for r in report.rows.iter().filter(|r| !r.e1_convention) {
        ctx.say(format!("  k = {}: phi(e_1) = {} breaks the table convention", r.k, r.images[0]));
    }
    for c in &report.coverage {
        ctx.say(format!(
            "  e = {}: [{}, {}) -> {}",
            c.e,
            c.lower,
            c.upper,
            c.k.map_or("MISSING".into(), |k| format!("k = {k}"))
        ));
    }
    let unrepaired: Vec<u64> =
        report.rows.iter().filter(|r| !r.optimal && r.replacement.is_none()).map(|r| r.k).collect();
    let complete = report.coverage_complete;
    ctx.report.verdicts = serde_json::to_value(&report).expect("serialisable");
    if !complete {
        return Err(Failure::Verification("coverage incomplete".into()));
    }
    if repair && !unrepaired.is_empty() {
        return Err(Failure::Verification(format!("no optimal map found for {unrepaired:?}")));
    }
    Ok(())
}

fn cmd_decode(ctx: &mut Ctx, code: &str, word: &str) -> Outcome {
    let text = if code.trim_start().starts_with('{') {
        code.to_string()
    } else {
        std::fs::read_to_string(code).map_err(Error::from)?
    };
    ctx.report.add_digest("code", text.as_bytes());
    let spec: CodeSpec = serde_json::from_str(&text).map_err(Error::from)?;
    let code = LinearLeeCode::from_spec(&spec)?;
    let w = Word::new(parse_ints(word)?)?;
    let c = code.decode(&w)?;
    let dist = w.checked_sub(&c)?.lee_weight();
    let syndrome = code.hom().apply(&w)?;
    ctx.report.verdicts = json!({ "word": w, "codeword": c, "distance": dist, "syndrome": syndrome });
    ctx.say(format!("{w} -> {c} (distance {dist})"));
    Ok(())
}

fn parse_rational(s: &str) -> Result<Rational, Failure> {
    let bad = || Failure::Input(format!("not a fraction: {s:?}"));
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p: num_bigint::BigInt = p.trim().parse().map_err(|_| bad())?;
    let q: num_bigint::BigInt = q.trim().parse().map_err(|_| bad())?;
    if q == 0.into() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

fn cmd_bound(ctx: &mut Ctx, n: usize, alpha: Option<&str>, scan_bound: u64) -> Outcome {
    let alpha = match (alpha, n) {
        (Some(a), _) => parse_rational(a)?,
        (None, 3) => octahedron_alpha(),
        (None, _) => return Err(Failure::Input(format!("no packing efficiency known for n = {n}; pass --alpha"))),
    };
    let rep = threshold_scan(n, &alpha, scan_bound)?;
    let mut verdicts = serde_json::to_value(&rep).expect("serialisable");
    verdicts["threshold_e"] = json!(rep.threshold);
    verdicts["strict_at_threshold"] = json!(rep.strict_at_threshold());
    verdicts["k_n"] = json!(rep.threshold.map(|t| sphere_size(n, t)).transpose()?);
    ctx.report.verdicts = verdicts;
    match rep.threshold {
        Some(t) => {
            ctx.say(format!("threshold e* = {t} (alpha = {alpha}, n = {n})"));
            if let Some(m) = &rep.margin_at_threshold {
                ctx.say(format!("margin at e*: {m}"));
            }
            if let Some(m) = &rep.margin_below_threshold {
                ctx.say(format!("margin at e*-1: {m}"));
            }
            ctx.say(if rep.holds_through_bound {
                format!("exclusion holds for every e in [{t}, {scan_bound}]")
            } else {
                format!("exclusion fails again at e = {}", rep.first_relapse.unwrap_or_default())
            });
        }
        None => ctx.say(format!("NO_THRESHOLD up to e = {scan_bound}")),
    }
    Ok(())
}

fn cmd_render(
    ctx: &mut Ctx,
    group: &AbelianGroup,
    images: &str,
    extent: u64,
    radii: &[u64],
    out: Option<&Path>,
) -> Outcome {
    let phi = parse_images(group, images)?;
    let (svg, summary) = render_grid_with_summary(&phi, extent, radii)?;
    ctx.report.verdicts = json!({ "hom": phi, "summary": summary, "svg_sha256": report::sha256_hex(svg.as_bytes()) });
    match out {
        Some(p) => {
            std::fs::write(p, &svg).map_err(Error::from)?;
            ctx.say(format!("wrote {} ({} cells, {} highlighted)", p.display(), summary.cells, summary.highlighted));
        }
        None if ctx.json => {}
        None => ctx.say(svg.trim_end().to_string()),
    }
    Ok(())
}

fn cmd_probe(ctx: &mut Ctx, n: usize, k_min: u64, k_max: u64, budget: u128) -> Outcome {
    let mut rows = Vec::new();
    let mut counterexamples = Vec::new();
    let mut skipped = Vec::new();
    for k in k_min.max(1)..=k_max {
        let groups = groups_of_order(k)?;
        if groups.len() == 1 {
            continue;
        }
        let res = match pi_number(n, k, budget) {
            Ok(r) => r,
            Err(Error::BudgetExceeded { .. }) => {
                skipped.push(k);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let cyclic = res.per_group[0].1;
        let attaining: Vec<String> =
            res.per_group.iter().filter(|(_, v)| *v == res.value).map(|(g, _)| g.to_string()).collect();
        let cyclic_attains = cyclic == res.value;
        if !cyclic_attains {
            counterexamples.push(k);
        }
        let fmt = |v: EmbeddingNumber| v.to_string();
        ctx.say(format!("k = {k}: pi = {}, cyclic {}, attained by {}", res.value, fmt(cyclic), attaining.join(", ")));
        rows.push(json!({ "k": k, "pi": res.value, "cyclic": cyclic, "cyclic_attains": cyclic_attains, "attained_by": attaining }));
    }
    ctx.say(format!(
        "{} orders with several groups, {} where Z_k does not attain pi",
        rows.len(),
        counterexamples.len()
    ));
    if !skipped.is_empty() {
        ctx.say(format!("skipped (budget): {skipped:?}"));
    }
    ctx.report.verdicts = json!({ "rows": rows, "counterexamples": counterexamples, "skipped": skipped });
    Ok(())
}
