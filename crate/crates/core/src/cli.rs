//! The `msnlab` command line. Every subcommand reads the shared edge-list
//! and network formats, prints a short summary or (with `--json`) one JSON
//! object, and maps its verdict onto the exit status.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{self, compare_profiles, profile, ProfileInput, ProfileSet, Theorem};
use crate::construct;
use crate::dplen::{self, DplenError};
use crate::graphs::{self, DiGraph, DirectedTree, GraphError, VertexId};
use crate::msn::{MsnError, SwitchingNetwork, DEFAULT_COMPLETE_BUDGET, DEFAULT_SOUND_BUDGET};
use crate::reduce::{self, ReductionCertificate};
use crate::search::{self, SearchBudget, SearchError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "msnlab", version, about = "Monotone switching networks for directed st-connectivity")]
pub struct Cli {
    /// Emit one JSON object on stdout instead of a summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, env = "MSNLAB_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structure statistics and bound profiles of an input graph.
    Bounds(BoundsArgs),
    /// Disconnected-path length of a directed tree, with a witness family.
    Dplen(DplenArgs),
    /// Does a network accept a graph?
    Accepts(AcceptsArgs),
    /// Is a network sound (rejects every graph without an s-t path)?
    Sound(VerdictArgs),
    /// Is a network complete (accepts every graph with an s-t path)?
    Complete(VerdictArgs),
    /// The permutation set of a graph.
    Sigma(SigmaArgs),
    /// Smallest sound network accepting an instance, by exact search.
    MinMsn(MinMsnArgs),
    /// Build reduction certificates for an input graph.
    Reduce(ReduceArgs),
    /// Replay stored reduction certificates.
    CheckCert(CheckCertArgs),
    /// Random path network accepting the permutation set of a layered graph.
    ConstructA(ConstructArgs),
    /// Time the tree dynamic program on random trees.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    pub graph: PathBuf,
    /// Restrict to these theorem tags (T3.1 … T5.4).
    #[arg(long = "theorem", value_delimiter = ',')]
    pub theorems: Vec<String>,
    /// Also compare every pair of profiles on the same side.
    #[arg(long)]
    pub compare: bool,
}

#[derive(Args, Debug)]
pub struct DplenArgs {
    pub tree: PathBuf,
    /// Root vertex for the dynamic program.
    #[arg(long)]
    pub root: Option<String>,
    /// Cross-check against brute force (trees up to --limit vertices).
    #[arg(long)]
    pub brute: bool,
    #[arg(long, default_value_t = dplen::DEFAULT_BRUTE_FORCE_LIMIT)]
    pub limit: usize,
}

#[derive(Args, Debug)]
pub struct AcceptsArgs {
    pub network: PathBuf,
    pub graph: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerdictArgs {
    pub network: PathBuf,
    /// Pad the universe to this many vertices (s and t included).
    #[arg(long)]
    pub universe: Option<usize>,
    /// States or paths examined before giving up.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Decide soundness by cut enumeration instead of walk search.
    #[arg(long)]
    pub cuts: bool,
}

#[derive(Args, Debug)]
pub struct SigmaArgs {
    pub graph: PathBuf,
    /// Extra vertices held fixed besides s and t.
    #[arg(long, value_delimiter = ',')]
    pub fixed: Vec<String>,
    /// Maximum number of permutations enumerated.
    #[arg(long, default_value_t = graphs::DEFAULT_SIGMA_BUDGET)]
    pub budget: u128,
    /// Print only the member count.
    #[arg(long)]
    pub count: bool,
}

#[derive(Args, Debug)]
pub struct MinMsnArgs {
    /// Instance graphs; with --sigma, a single graph whose permutation set
    /// is the instance.
    #[arg(required = true)]
    pub graphs: Vec<PathBuf>,
    #[arg(long)]
    pub sigma: bool,
    #[arg(long, default_value_t = SearchBudget::default().max_size)]
    pub max_size: usize,
    #[arg(long, default_value_t = SearchBudget::default().max_candidates)]
    pub max_candidates: u64,
    /// Largest universe searched; the search itself stops at five.
    #[arg(long, default_value_t = 4)]
    pub universe: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReduceKind {
    /// Disjoint union with a tree, reduced to a path of length ⌈√|H|⌉.
    Sqrt,
    /// Disjoint union with a tree, reduced to a path of length p(H).
    Dplen,
    /// The three lower-bound reductions of a tree.
    Tree,
    /// The flow-out lower-bound reduction at index --index.
    Flowout,
    /// The upper-bound graph sequence (not a certificate).
    Upper,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    pub graph: PathBuf,
    #[arg(long, value_enum)]
    pub kind: ReduceKind,
    /// Tree H for the sqrt and dplen kinds.
    #[arg(long)]
    pub with: Option<PathBuf>,
    /// Index i for the flowout kind.
    #[arg(long, default_value_t = 1)]
    pub index: usize,
    /// Write the certificates here as a JSON array.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckCertArgs {
    /// A JSON certificate or array of certificates.
    pub file: PathBuf,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub ell: usize,
    /// Number of paths; defaults to n²/p.
    #[arg(long)]
    pub c: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = construct::DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Skip the n > 20, n > 4ℓ hypotheses.
    #[arg(long)]
    pub relaxed: bool,
    /// Write the final network here in the text format.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [10_000usize, 100_000, 1_000_000])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
}

/// A failed command, classified by exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Budget(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Budget(m) => m,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Budget { .. } | GraphError::TreeLimit { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<MsnError> for CliError {
    fn from(e: MsnError) -> Self {
        match e {
            MsnError::Budget { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<DplenError> for CliError {
    fn from(e: DplenError) -> Self {
        match e {
            DplenError::Budget { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Budget { .. } | SearchError::UniverseTooLarge(_) => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<bounds::BoundsError> for CliError {
    fn from(e: bounds::BoundsError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<reduce::ReduceError> for CliError {
    fn from(e: reduce::ReduceError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<construct::ConstructError> for CliError {
    fn from(e: construct::ConstructError) -> Self {
        match e {
            construct::ConstructError::Msn(m) => m.into(),
            construct::ConstructError::TooManyPaths(_) => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// What a subcommand produced: a JSON report, a summary and an exit status.
pub struct Outcome {
    pub code: i32,
    pub report: Value,
    pub summary: String,
}

impl Outcome {
    fn new(command: &str, verdict: bool, report: impl Serialize, summary: String) -> Result<Self, CliError> {
        let mut report = serde_json::to_value(report).map_err(|e| CliError::Usage(e.to_string()))?;
        if let Value::Object(map) = &mut report {
            map.insert("command".into(), json!(command));
        }
        Ok(Outcome { code: if verdict { EXIT_OK } else { EXIT_NEGATIVE }, report, summary })
    }
}

/// Runs the command line with stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// Runs the command line writing to the given streams; returns the exit
/// status.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            let _ = writeln!(err, "error: --threads must be positive");
            return EXIT_USAGE;
        }
        // A pool built by an earlier call in the same process stays in use.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match dispatch(&cli.command) {
        Ok(outcome) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&outcome.report).expect("reports serialize") + "\n"
            } else {
                outcome.summary
            };
            let _ = out.write_all(text.as_bytes());
            outcome.code
        }
        Err(e) => {
            if cli.json {
                let body = json!({ "error": e.message(), "exit": e.code() });
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("json"));
            }
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<DiGraph, CliError> {
    graphs::parse_edge_list(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_network(path: &Path) -> Result<SwitchingNetwork, CliError> {
    SwitchingNetwork::parse(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn dispatch(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Bounds(a) => cmd_bounds(a),
        Command::Dplen(a) => cmd_dplen(a),
        Command::Accepts(a) => cmd_accepts(a),
        Command::Sound(a) => cmd_sound(a),
        Command::Complete(a) => cmd_complete(a),
        Command::Sigma(a) => cmd_sigma(a),
        Command::MinMsn(a) => cmd_min_msn(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::CheckCert(a) => cmd_check_cert(a),
        Command::ConstructA(a) => cmd_construct(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

/// Length of a shortest s-t path, by breadth-first search.
fn shortest_st(g: &DiGraph) -> Option<usize> {
    let (out, _) = g.adjacency();
    let mut dist = vec![usize::MAX; g.vertex_count()];
    let mut queue = std::collections::VecDeque::from([VertexId::S]);
    dist[VertexId::S.index()] = 0;
    while let Some(u) = queue.pop_front() {
        for &v in &out[u.index()] {
            if dist[v.index()] == usize::MAX {
                dist[v.index()] = dist[u.index()] + 1;
                queue.push_back(v);
            }
        }
    }
    Some(dist[VertexId::T.index()]).filter(|&d| d != usize::MAX)
}

fn cmd_bounds(a: &BoundsArgs) -> Result<Outcome, CliError> {
    let g = read_graph(&a.graph)?;
    let wanted: Vec<Theorem> = if a.theorems.is_empty() {
        Theorem::ALL.to_vec()
    } else {
        a.theorems.iter().map(|t| t.parse()).collect::<Result<_, _>>()?
    };
    let ell = shortest_st(&g).ok_or(bounds::BoundsError::NoStPath)?;
    let stats = bounds::compute_stats(&g).ok();
    let flow = bounds::flowout_c(&g).ok();
    let params = ProfileInput::Params { n: g.vertex_count(), k: graphs::count_non_lollipops(&g), ell };
    let mut profiles: Vec<ProfileSet> = Vec::new();
    let mut skipped: Vec<String> = Vec::new();
    for t in wanted {
        let input = match t {
            Theorem::T5_1 => stats.as_ref().map(ProfileInput::Stats),
            Theorem::T5_4 => flow.as_ref().map(ProfileInput::FlowOut),
            _ => Some(stats.as_ref().map_or(params, ProfileInput::Stats)),
        };
        match input {
            Some(input) => profiles.push(profile(t, input)?),
            None => skipped.push(t.tag().to_string()),
        }
    }
    let mut comparisons = Vec::new();
    if a.compare {
        let all: Vec<&bounds::BoundProfile> =
            profiles.iter().flat_map(|p| p.lower.iter().chain(p.upper.iter())).collect();
        for (i, p) in all.iter().enumerate() {
            for q in &all[i + 1..] {
                if p.side == q.side {
                    comparisons.push(json!({
                        "left": p.theorem, "right": q.theorem, "side": p.side,
                        "result": compare_profiles(p, q),
                    }));
                }
            }
        }
    }
    let mut summary = format!("n = {}, ell = {}, non-lollipops = {}\n", g.vertex_count(), ell, graphs::count_non_lollipops(&g));
    for p in &profiles {
        for side in p.lower.iter().chain(p.upper.iter()) {
            let _ = writeln!(summary, "{side}");
        }
    }
    for c in &comparisons {
        let _ = writeln!(summary, "{} vs {} ({}): {}", c["left"], c["right"], c["side"], c["result"]);
    }
    if !skipped.is_empty() {
        let _ = writeln!(summary, "not applicable: {}", skipped.join(", "));
    }
    let report = json!({
        "n": g.vertex_count(), "ell": ell, "non_lollipops": graphs::count_non_lollipops(&g),
        "stats": stats, "flow_out": flow, "profiles": profiles,
        "comparisons": comparisons, "skipped": skipped,
    });
    Outcome::new("bounds", true, report, summary)
}

fn cmd_dplen(a: &DplenArgs) -> Result<Outcome, CliError> {
    let g = read_graph(&a.tree)?;
    let (h, _) = DirectedTree::from_digraph(&g)?;
    let root = match &a.root {
        Some(r) => Some(h.index_of(r).ok_or_else(|| CliError::Usage(format!("root `{r}` is not a tree vertex")))?),
        None => None,
    };
    let (p, tables) = dplen::general_p_dp(&h, root)?;
    let witness = tables.witness(&h);
    let brute = if a.brute { Some(dplen::brute_force_p(&h, a.limit)?.0) } else { None };
    let agrees = brute.is_none_or(|b| b as u64 == p);
    let mut summary = format!("p(H)={p}\n");
    for path in witness.named(&h) {
        let _ = writeln!(summary, "  {}", path.join(" -> "));
    }
    if let Some(b) = brute {
        let _ = writeln!(summary, "brute force: {b}{}", if agrees { "" } else { " (MISMATCH)" });
    }
    let report = json!({
        "vertices": h.len(), "p": p, "witness": witness.named(&h),
        "witness_valid": dplen::is_family(&h, &witness) && witness.size() as u64 == p,
        "brute_force": brute,
    });
    Outcome::new("dplen", agrees, report, summary)
}

fn cmd_accepts(a: &AcceptsArgs) -> Result<Outcome, CliError> {
    let net = read_network(&a.network)?;
    let g = read_graph(&a.graph)?;
    let accepted = net.accepts(&g);
    let summary = format!("{}\n", if accepted { "accepted" } else { "rejected" });
    Outcome::new("accepts", accepted, json!({ "accepted": accepted, "size": net.size() }), summary)
}

fn padded_network(a: &VerdictArgs) -> Result<SwitchingNetwork, CliError> {
    let mut net = read_network(&a.network)?;
    if let Some(u) = a.universe {
        if u < 2 {
            return Err(CliError::Usage("--universe must be at least 2".into()));
        }
        net.pad_universe(u);
    }
    Ok(net)
}

fn cmd_sound(a: &VerdictArgs) -> Result<Outcome, CliError> {
    let net = padded_network(a)?;
    let r = if a.cuts { net.is_sound_by_cuts()? } else { net.is_sound(a.budget.unwrap_or(DEFAULT_SOUND_BUDGET))? };
    let mut summary = format!("{}\n", if r.sound { "sound" } else { "unsound" });
    if let Some(w) = &r.witness {
        let _ = writeln!(summary, "accepting walk: {}", w.walk.join(" "));
        let _ = write!(summary, "accepted graph without an s-t path:\n{}", w.graph);
    }
    let report = json!({
        "sound": r.sound, "explored": r.explored, "universe": net.universe(),
        "witness": r.witness.as_ref().map(|w| json!({ "walk": w.walk, "graph": w.graph })),
    });
    Outcome::new("sound", r.sound, report, summary)
}

fn cmd_complete(a: &VerdictArgs) -> Result<Outcome, CliError> {
    let net = padded_network(a)?;
    let r = net.is_complete(a.budget.unwrap_or(DEFAULT_COMPLETE_BUDGET))?;
    let mut summary = format!("{} ({} paths checked)\n", if r.complete { "complete" } else { "incomplete" }, r.checked);
    if let Some(g) = &r.counterexample {
        let _ = write!(summary, "rejected s-t path:\n{g}");
    }
    let report = json!({
        "complete": r.complete, "checked": r.checked, "universe": net.universe(),
        "counterexample": r.counterexample,
    });
    Outcome::new("complete", r.complete, report, summary)
}

fn cmd_sigma(a: &SigmaArgs) -> Result<Outcome, CliError> {
    let g = read_graph(&a.graph)?;
    let mut fixed = vec![VertexId::S, VertexId::T];
    for name in &a.fixed {
        let v = g.require(name)?;
        if !fixed.contains(&v) {
            fixed.push(v);
        }
    }
    let members = graphs::sigma(&g, &fixed, a.budget)?;
    let mut summary = format!("|sigma| = {}\n", members.len());
    if !a.count {
        for (i, m) in members.iter().enumerate() {
            let _ = write!(summary, "# member {}\n{m}", i + 1);
        }
    }
    let report = json!({
        "count": members.len(),
        "fingerprint": graphs::sigma_fingerprint(&g).to_string(),
        "members": if a.count { Value::Null } else { json!(members) },
    });
    Outcome::new("sigma", true, report, summary)
}

fn cmd_min_msn(a: &MinMsnArgs) -> Result<Outcome, CliError> {
    let budget = SearchBudget { max_size: a.max_size, max_candidates: a.max_candidates };
    let graphs_in: Vec<DiGraph> = a.graphs.iter().map(|p| read_graph(p)).collect::<Result<_, _>>()?;
    for g in &graphs_in {
        if g.vertex_count() > a.universe {
            return Err(CliError::Budget(format!(
                "universe of {} vertices exceeds --universe {}",
                g.vertex_count(),
                a.universe
            )));
        }
    }
    let result = if a.sigma {
        let [g] = graphs_in.as_slice() else {
            return Err(CliError::Usage("--sigma takes exactly one graph".into()));
        };
        search::min_sound_msn_sigma(g, budget)
    } else {
        search::min_sound_msn(&graphs_in, budget)
    };
    let r = match result {
        Ok(r) => r,
        Err(SearchError::Budget { lower, upper, upper_witness, explored }) => {
            let report = json!({
                "m": Value::Null, "lower": lower, "upper": upper,
                "upper_witness": upper_witness.to_string(), "explored": explored,
            });
            let summary = format!("budget exceeded: m lies in [{lower}, {upper}]\n");
            let mut o = Outcome::new("min-msn", true, report, summary)?;
            o.code = EXIT_BUDGET;
            return Ok(o);
        }
        Err(e) => return Err(e.into()),
    };
    let summary = format!("m={}\nwitness network:\n{}", r.m, r.witness);
    let report = json!({ "m": r.m, "witness": r.witness.to_string(), "explored": r.explored });
    Outcome::new("min-msn", true, report, summary)
}

fn cmd_reduce(a: &ReduceArgs) -> Result<Outcome, CliError> {
    let g = read_graph(&a.graph)?;
    let tree_arg = || -> Result<DiGraph, CliError> {
        let p = a.with.as_ref().ok_or_else(|| CliError::Usage("this kind needs --with <tree>".into()))?;
        read_graph(p)
    };
    if a.kind == ReduceKind::Upper {
        let seq = reduce::upper_graph_sequence(&g)?;
        let mut summary = format!("{} graphs, c_bar = {}\n", seq.graphs.len(), seq.c_bar);
        for j in 0..seq.graphs.len() {
            let _ = writeln!(summary, "G_{}: {} open vertices", j + 1, seq.open_vertices(j));
        }
        let ok = seq.final_invariant_holds();
        let _ = writeln!(summary, "final graph is lollipops and the path: {ok}");
        let mut report = serde_json::to_value(&seq).map_err(|e| CliError::Usage(e.to_string()))?;
        report["final_invariant"] = json!(ok);
        if let Some(out) = &a.out {
            write_file(out, &serde_json::to_string_pretty(&seq).expect("json"))?;
        }
        return Outcome::new("reduce", ok, report, summary);
    }
    let certs: Vec<ReductionCertificate> = match a.kind {
        ReduceKind::Sqrt => vec![reduce::sqrt_path_certificate(&g, &tree_arg()?)?],
        ReduceKind::Dplen => vec![reduce::dplen_path_certificate(&g, &tree_arg()?)?],
        ReduceKind::Tree => reduce::thm51_lower_certificates(&g)?,
        ReduceKind::Flowout => vec![reduce::flowout_lower_certificate(&g, a.index)?],
        ReduceKind::Upper => unreachable!("handled above"),
    };
    let checks = reduce::check_certificates(&certs);
    let valid = checks.iter().all(|c| c.valid);
    let mut summary = String::new();
    for (c, check) in certs.iter().zip(&checks) {
        let label = c.meta_str("part").or_else(|| c.meta_str("case")).unwrap_or("certificate");
        let _ = writeln!(summary, "{label}: {} moves, valid = {}", c.moves.len(), check.valid);
        let _ = write!(summary, "{}", c.end);
    }
    if let Some(out) = &a.out {
        write_file(out, &serde_json::to_string_pretty(&certs).expect("json"))?;
    }
    Outcome::new("reduce", valid, json!({ "certificates": certs, "checks": checks, "valid": valid }), summary)
}

fn cmd_check_cert(a: &CheckCertArgs) -> Result<Outcome, CliError> {
    let text = read(&a.file)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", a.file.display())))?;
    let certs: Vec<ReductionCertificate> = if value.is_array() {
        serde_json::from_value(value)
    } else {
        serde_json::from_value(value).map(|c| vec![c])
    }
    .map_err(|e| CliError::Usage(format!("{}: {e}", a.file.display())))?;
    let checks = reduce::check_certificates(&certs);
    let valid = checks.iter().all(|c| c.valid);
    let mut summary = String::new();
    for (i, c) in checks.iter().enumerate() {
        match &c.failure {
            None => {
                let _ = writeln!(summary, "certificate {}: valid", i + 1);
            }
            Some(f) => {
                let _ = writeln!(summary, "certificate {}: invalid ({:?} at {:?}): {}", i + 1, f.reason, f.step, f.message);
            }
        }
    }
    Outcome::new("check-cert", valid, json!({ "valid": valid, "checks": checks }), summary)
}

fn cmd_construct(a: &ConstructArgs) -> Result<Outcome, CliError> {
    let g = if a.relaxed { construct::build_layered_relaxed(a.n, a.ell)? } else { construct::build_layered(a.n, a.ell)? };
    let (p, required) = construct::required_c(a.n, a.ell);
    let c = match a.c {
        Some(c) => c,
        None => construct::c_as_usize(&required)?,
    };
    let reports = construct::construct_with_retries(&g, c, a.seed, a.samples)?;
    let last = reports.last().expect("at least one draw");
    let ok = last.rejected == 0 && last.sound;
    if let Some(out) = &a.out {
        let net = construct::build_random_network(&g, c, last.seed).to_network()?;
        write_file(out, &net.to_string())?;
    }
    let mut summary = format!(
        "n = {}, ell = {}, width = {}, isolated = {}, p = {p}, C = {c}, |sigma| = {}\n",
        a.n,
        a.ell,
        g.width(),
        g.isolated.len(),
        last.sigma_size
    );
    for r in &reports {
        let _ = writeln!(
            summary,
            "seed {}: swept {} ({}), rejected {}, sound {}, size {}, per-path rate {:.4} (exact {:.4})",
            r.seed,
            r.swept,
            if r.exhaustive { "exhaustive" } else { "sampled" },
            r.rejected,
            r.sound,
            r.network_size,
            r.per_path_rate,
            r.per_path_probability
        );
    }
    let report = json!({
        "n": a.n, "ell": a.ell, "p": p.to_string(), "C": c, "width": g.width(),
        "isolated": g.isolated.len(), "width_fraction_ok": construct::width_fraction_ok(a.n, a.ell),
        "seed": last.seed, "swept": last.swept, "rejected": last.rejected, "sound": last.sound,
        "draws": reports,
    });
    Outcome::new("construct-a", ok, report, summary)
}

fn cmd_bench(a: &BenchArgs) -> Result<Outcome, CliError> {
    if a.sizes.is_empty() || a.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("--sizes must be nonempty and strictly ascending".into()));
    }
    if a.sizes[0] == 0 {
        return Err(CliError::Usage("--sizes must be positive".into()));
    }
    let rows = dplen::bench(&a.sizes, a.seed, a.reps);
    let mut summary = String::from("n\telapsed_s\tp\n");
    for r in &rows {
        let _ = writeln!(summary, "{}\t{:.6}\t{}", r.n, r.elapsed_secs, r.p);
    }
    Outcome::new("bench", true, json!({ "seed": a.seed, "rows": rows }), summary)
}
