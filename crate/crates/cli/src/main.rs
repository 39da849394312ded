//! `modelacq`: generate traces, degrade them into observations, extract
//! action models and recommend technique profiles. Every stage reads and
//! writes files, so pipelines can be resumed from any intermediate.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use modelacq::domains::{Bundled, ALL};
use modelacq::extraction::{encode_arms, extract_arms, extract_observer, ArmsParams};
use modelacq::observation::{tokenize, ObservedTraceList, TokenType, TokenizeParams};
use modelacq::pddl::{ground, parse_domain, parse_problem, serialize_model, GroundTask};
use modelacq::recommender::{
    build_theory, nearest_techniques, parse_preference_text, recommend, validate_registry, Report, Taxonomy,
};
use modelacq::trace::TraceList;
use modelacq::tracegen::{
    heuristic_depth_walk, random_walk, sample_goals, trace_from_plan, trace_list, GoalSamplerConfig,
};
use modelacq::LearnedModel;
use modelacq_logic::{write_dimacs, write_wcnf};

#[derive(Parser, Debug)]
#[command(name = "modelacq", version, about = "STRIPS action-model acquisition toolkit")]
struct Cli {
    /// Seed for every random choice made by the command.
    #[arg(long, global = true, env = "MACQ_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate ground-truth traces from a planning task.
    Generate(GenerateArgs),
    /// Turn traces into observation tokens.
    Tokenize(TokenizeArgs),
    /// Learn an action model from observations.
    Extract(ExtractArgs),
    /// Recommend an unexplored technique profile.
    Recommend(RecommendArgs),
    /// Check registry entries against the taxonomy constraints.
    Validate(ValidateArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GenMethod {
    Random,
    Depth,
    Goals,
}

#[derive(clap::Args, Debug)]
struct GenerateArgs {
    /// Bundled task name (see --list).
    #[arg(long, conflicts_with_all = ["domain", "problem"], required_unless_present_any = ["domain", "list"])]
    bundled: Option<String>,
    #[arg(long, requires = "problem")]
    domain: Option<PathBuf>,
    #[arg(long, requires = "domain")]
    problem: Option<PathBuf>,
    /// Print the bundled task names and exit.
    #[arg(long)]
    list: bool,
    #[arg(long, value_enum, default_value_t = GenMethod::Random)]
    method: GenMethod,
    /// Walk length for `random`.
    #[arg(long, default_value_t = 10)]
    length: usize,
    /// Number of traces for `random` and `depth`.
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Walk length and target plan length for `goals`.
    #[arg(short, long, default_value_t = 6)]
    k: usize,
    /// Goal size for `goals`.
    #[arg(short, long, default_value_t = 2)]
    g: usize,
    /// Number of goals (one trace each) for `goals`.
    #[arg(long, default_value_t = 1)]
    num_goals: usize,
    #[arg(short, long, required_unless_present = "list")]
    output: Option<PathBuf>,
    /// Also write one CSV file per trace into this directory.
    #[arg(long)]
    csv_dir: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct TokenizeArgs {
    /// TraceList JSON.
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long = "type", value_parser = parse_token_type)]
    token_type: TokenType,
    #[arg(long, default_value_t = 0.0)]
    percent_missing: f64,
    #[arg(long, default_value_t = 0.0)]
    flip_prob: f64,
    /// Restrict masking and noise to these fluents (repeatable).
    #[arg(long = "eligible")]
    eligible: Vec<String>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ExtractMethod {
    Observer,
    Arms,
}

#[derive(clap::Args, Debug)]
struct ExtractArgs {
    /// ObservedTraceList JSON.
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    method: ExtractMethod,
    /// Directory receiving model.json, model.pddl and details.txt.
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value = "learned")]
    domain_name: String,
    #[arg(long, default_value_t = 2)]
    upper_bound: usize,
    #[arg(long, default_value_t = 2)]
    min_support: usize,
    #[arg(long, default_value_t = 110)]
    action_weight: u64,
    #[arg(long, default_value_t = 100)]
    info_weight: u64,
    #[arg(long, default_value_t = 0.6)]
    threshold: f64,
    #[arg(long, default_value_t = 30)]
    info3_default: u64,
    #[arg(long, default_value_t = 30)]
    plan_default: u64,
    #[arg(long)]
    conflict_budget: Option<u64>,
    /// Write the first-round weighted CNF here (ARMS only).
    #[arg(long)]
    wcnf: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args, Debug)]
struct RecommendArgs {
    /// Taxonomy TOML; the shipped taxonomy when omitted.
    #[arg(long)]
    taxonomy: Option<PathBuf>,
    /// Preference literals, one per line or comma separated. Overrides the
    /// taxonomy's own list.
    #[arg(long)]
    prefs: Option<PathBuf>,
    #[arg(long, default_value_t = modelacq::recommender::DEFAULT_NEIGHBORS)]
    neighbors: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write the theory (constraints minus covered profiles) as DIMACS.
    #[arg(long)]
    dimacs: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct ValidateArgs {
    #[arg(long)]
    taxonomy: Option<PathBuf>,
}

fn parse_token_type(s: &str) -> Result<TokenType, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// Problems with the invocation itself. They exit with 2, like clap's own
/// errors; every other failure exits with 1.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(m: impl Into<String>) -> anyhow::Error {
    UsageError(m.into()).into()
}

fn read_input(flag: &str, path: &Path) -> anyhow::Result<String> {
    if !path.is_file() {
        return Err(usage(format!("{flag}: no such file `{}`", path.display())));
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_output(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_task(a: &GenerateArgs) -> anyhow::Result<GroundTask> {
    if let Some(name) = &a.bundled {
        let b = Bundled::by_name(name).ok_or_else(|| {
            let names: Vec<_> = ALL.iter().map(|b| b.name).collect();
            usage(format!("--bundled: unknown task `{name}` (known: {})", names.join(", ")))
        })?;
        return b.task().context("bundled task");
    }
    let (dp, pp) = (a.domain.as_ref().unwrap(), a.problem.as_ref().unwrap());
    let d = parse_domain(&read_input("--domain", dp)?).with_context(|| format!("parsing {}", dp.display()))?;
    let p = parse_problem(&read_input("--problem", pp)?, &d).with_context(|| format!("parsing {}", pp.display()))?;
    ground(&d, &p).context("grounding")
}

/// Trace generation shared by the CLI and its tests.
fn generate_traces(task: &GroundTask, a: &GenerateArgs, seed: u64) -> anyhow::Result<TraceList> {
    Ok(match a.method {
        GenMethod::Random => random_walk(task, a.length, a.count, seed),
        GenMethod::Depth => heuristic_depth_walk(task, a.count, seed),
        GenMethod::Goals => {
            let cands = sample_goals(task, &GoalSamplerConfig::new(a.k, a.g, a.num_goals, seed))?;
            let traces = cands
                .iter()
                .map(|c| {
                    let mut t = trace_from_plan(task, &c.plan)?;
                    t.goal = Some(c.goal_names(task));
                    Ok(t)
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            trace_list(task, traces)
        }
    })
}

fn run_generate(a: GenerateArgs, seed: u64) -> anyhow::Result<()> {
    if a.list {
        for b in ALL {
            println!("{}", b.name);
        }
        return Ok(());
    }
    let task = load_task(&a)?;
    let list = generate_traces(&task, &a, seed)?;
    let out = a.output.as_ref().expect("clap requires --output");
    write_output(out, &list.to_json())?;
    if let Some(dir) = &a.csv_dir {
        for i in 0..list.traces.len() {
            write_output(&dir.join(format!("trace-{i}.csv")), &list.trace_to_csv(i))?;
        }
    }
    eprintln!("wrote {} trace(s) to {}", list.traces.len(), out.display());
    Ok(())
}

fn run_tokenize(a: TokenizeArgs, seed: u64) -> anyhow::Result<()> {
    let text = read_input("--input", &a.input)?;
    let list = TraceList::from_json(&text).with_context(|| format!("parsing {}", a.input.display()))?;
    let params = TokenizeParams {
        percent_missing: a.percent_missing,
        flip_prob: a.flip_prob,
        eligible: (!a.eligible.is_empty()).then(|| a.eligible.iter().cloned().collect()),
    };
    let obs = tokenize(&list, a.token_type, &params, seed)?;
    write_output(&a.output, &obs.to_json())?;
    Ok(())
}

fn arms_params(a: &ExtractArgs) -> ArmsParams {
    ArmsParams {
        upper_bound: a.upper_bound,
        min_support: a.min_support,
        action_weight: a.action_weight,
        info_weight: a.info_weight,
        threshold: a.threshold,
        info3_default: a.info3_default,
        plan_default: a.plan_default,
        conflict_budget: a.conflict_budget,
    }
}

fn run_extract(a: ExtractArgs) -> anyhow::Result<()> {
    let text = read_input("--input", &a.input)?;
    let obs = ObservedTraceList::from_json(&text).with_context(|| format!("parsing {}", a.input.display()))?;
    if a.wcnf.is_some() && a.method != ExtractMethod::Arms {
        return Err(usage("--wcnf only applies to --method arms"));
    }
    let model: LearnedModel = match a.method {
        ExtractMethod::Observer => extract_observer(&obs)?,
        ExtractMethod::Arms => {
            let params = arms_params(&a);
            params.validate().map_err(|e| usage(e.to_string()))?;
            if let Some(path) = &a.wcnf {
                let enc = encode_arms(&obs, &params, &[])?;
                write_output(path, &write_wcnf(&enc.cnf))?;
            }
            let out = extract_arms(&obs, &params, &[])?;
            eprintln!("arms: {} round(s), cost {}", out.rounds, out.cost);
            out.model
        }
    };
    let s = serialize_model(&model, &a.domain_name);
    let json = serde_json::to_string_pretty(&model).context("serializing model")?;
    write_output(&a.out_dir.join("model.json"), &(json + "\n"))?;
    write_output(&a.out_dir.join("model.pddl"), &s.pddl)?;
    write_output(&a.out_dir.join("details.txt"), &s.details)?;
    eprintln!("{} action(s) written to {}", model.actions.len(), a.out_dir.display());
    Ok(())
}

fn load_taxonomy(path: Option<&PathBuf>) -> anyhow::Result<Taxonomy> {
    match path {
        None => Ok(Taxonomy::shipped()),
        Some(p) => {
            let text = read_input("--taxonomy", p)?;
            Taxonomy::from_toml(&text).with_context(|| format!("parsing {}", p.display()))
        }
    }
}

fn run_recommend(a: RecommendArgs) -> anyhow::Result<()> {
    let tax = load_taxonomy(a.taxonomy.as_ref())?;
    let prefs = match &a.prefs {
        None => tax.preferences.clone(),
        Some(p) => parse_preference_text(&tax.schema, &read_input("--prefs", p)?)
            .with_context(|| format!("parsing {}", p.display()))?,
    };
    if let Some(path) = &a.dimacs {
        write_output(path, &write_dimacs(&build_theory(&tax.schema, &tax.entries)))?;
    }
    let r = recommend(&tax.schema, &tax.entries, &prefs)?;
    let n = nearest_techniques(&r.assignment, &tax.entries, a.neighbors);
    let report = Report::new(&tax.schema, &tax.entries, &r, &n);
    let text = match a.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    match &a.output {
        Some(p) => write_output(p, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run_validate(a: ValidateArgs) -> anyhow::Result<()> {
    let tax = load_taxonomy(a.taxonomy.as_ref())?;
    let report = validate_registry(&tax.schema, &tax.entries);
    for v in &report.verdicts {
        if v.consistent {
            println!("{}: ok", v.id);
        } else {
            println!("{}: inconsistent with {}", v.id, v.violated.join(", "));
        }
    }
    if report.is_valid() {
        Ok(())
    } else {
        let bad = report.invalid().count();
        anyhow::bail!("{bad} inconsistent registry entr{}", if bad == 1 { "y" } else { "ies" })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = cli.seed;
    let res = match cli.command {
        Command::Generate(a) => run_generate(a, seed),
        Command::Tokenize(a) => run_tokenize(a, seed),
        Command::Extract(a) => run_extract(a),
        Command::Recommend(a) => run_recommend(a),
        Command::Validate(a) => run_validate(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("usage error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
