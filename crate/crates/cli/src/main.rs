//! `verba`: evaluate words, compute verbal subgroups and linear series, and
//! run verification suites on small finite groups.

mod output;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use verba::groups::{builtin_group, evaluate, parse_group_file, FiniteGroup, DEFAULT_ORDER_CAP};
use verba::harness::{
    conjecture_probe, default_catalog, default_words, parse_ocw, parse_tuple_spec, run_check_on, run_suite, survey, CheckId, CheckReport,
    CheckSpec, ProbeRow, Status, SuiteConfig, SurveyRow,
};
use verba::series::{build_delta_series, build_gamma_series, verify_series, LinearSeries, SeriesReport};
use verba::verbal::{ocw_value_set, value_set, verbal_subgroup, Mode, NormalTuple, DEFAULT_BUDGET, DEFAULT_SAMPLES};
use verba::words::{classify_outer_commutator, parse_word, Var};
use verba::Error;

use output::{emit, opt, sink, Format, Row};

#[derive(Parser)]
#[command(name = "verba", version, about = "Verbal subgroups on normal subgroups of small finite groups")]
struct Cli {
    /// Enumeration budget shared by every exhaustive step.
    #[arg(long, global = true, env = "VERBA_BUDGET", default_value_t = DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,

    /// Worker threads (defaults to one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Echo the canonical form of a word and classify it.
    Parse { word: String },
    /// Evaluate a word at an assignment such as `x1=3,x2=5`.
    Eval {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        word: String,
        #[arg(long)]
        assign: String,
    },
    /// Print the value set of a word on a tuple.
    Values(WordArgs),
    /// Print the order and generators of a verbal subgroup.
    Verbal(WordArgs),
    /// Build, print and verify a linear series.
    Series {
        #[arg(value_enum)]
        kind: SeriesChoice,
        #[command(flatten)]
        group: GroupArg,
        /// Length of the lower central word.
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Depth of the derived word.
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        tuple: Option<String>,
        #[command(flatten)]
        mode: ModeArgs,
        /// Also print the intermediate subgroups formed during construction.
        #[arg(long)]
        audit: bool,
    },
    /// Run one check.
    Check {
        id: String,
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, default_value = "gamma_2")]
        word: String,
        #[arg(long)]
        tuple: Option<String>,
        #[command(flatten)]
        mode: ModeArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run checks over a catalog with the default tuples.
    Suite {
        #[command(flatten)]
        catalog: CatalogArg,
        /// Comma-separated check ids (default: all).
        #[arg(long, value_delimiter = ',')]
        ids: Vec<String>,
        /// Words to sweep (default: gamma_2, gamma_3, delta_2).
        #[arg(long = "word")]
        words: Vec<String>,
        #[command(flatten)]
        mode: ModeArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Tabulate m = |w{N}| against |w(N)| over a catalog.
    Survey {
        #[arg(long)]
        word: String,
        #[command(flatten)]
        catalog: CatalogArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Tabulate an arbitrary outer commutator word over a catalog.
    Probe {
        #[arg(long)]
        word: String,
        #[command(flatten)]
        catalog: CatalogArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesChoice {
    Gamma,
    Delta,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeChoice {
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct GroupArg {
    /// Built-in spec such as `sym:4` or `cyc:2 x sym:3`, or a group file.
    #[arg(long)]
    group: String,
}

#[derive(Args)]
struct WordArgs {
    #[command(flatten)]
    group: GroupArg,
    #[arg(long)]
    word: String,
    /// Tuple spec; defaults to `G` in every position.
    #[arg(long)]
    tuple: Option<String>,
}

#[derive(Args)]
struct ModeArgs {
    #[arg(long, value_enum, default_value_t = ModeChoice::Exhaustive)]
    mode: ModeChoice,
    /// Seed for default tuples and for sampled linearity checks.
    #[arg(long)]
    seed: Option<u64>,
    /// Random tuples per linearity check in sampled mode.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
}

#[derive(Args)]
struct CatalogArg {
    /// File with one group spec per line; defaults to the built-in catalog.
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Why a command stopped.
enum Failure {
    Usage(String),
    Budget(String),
    Verification,
    /// The reader went away, as with `verba ... | head`.
    Closed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        match e.kind() {
            std::io::ErrorKind::BrokenPipe => Failure::Closed,
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) | Err(Failure::Closed) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}

fn load_group(spec: &str) -> Result<FiniteGroup, Failure> {
    match builtin_group(spec, DEFAULT_ORDER_CAP) {
        Err(Error::UnknownSpec(_)) if Path::new(spec).is_file() => {
            let text = fs::read_to_string(spec)?;
            Ok(parse_group_file(&text, DEFAULT_ORDER_CAP)?.with_label(spec))
        }
        other => Ok(other?),
    }
}

fn load_catalog(arg: &CatalogArg) -> Result<Vec<String>, Failure> {
    let Some(path) = &arg.catalog else {
        return Ok(default_catalog());
    };
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(String::from).collect())
}

fn build_catalog(specs: &[String]) -> Result<Vec<FiniteGroup>, Failure> {
    specs.iter().map(|s| Ok(builtin_group(s, DEFAULT_ORDER_CAP)?)).collect()
}

fn mode_of(args: &ModeArgs) -> Result<Mode, Failure> {
    match (args.mode, args.seed) {
        (ModeChoice::Exhaustive, _) => Ok(Mode::Exhaustive),
        (ModeChoice::Sampled, Some(seed)) => Ok(Mode::Sampled { seed, samples: args.samples }),
        (ModeChoice::Sampled, None) => Err(Failure::Usage("--mode sampled needs --seed".into())),
    }
}

fn tuple_of(group: &FiniteGroup, text: Option<&str>, arity: usize) -> Result<NormalTuple, Failure> {
    let default = vec!["G"; arity].join(",");
    Ok(parse_tuple_spec(text.unwrap_or(&default), group)?)
}

fn names(group: &FiniteGroup, elems: impl IntoIterator<Item = usize>) -> String {
    elems.into_iter().map(|e| format!("{e}:{}", group.name(e))).collect::<Vec<_>>().join(" ")
}

fn run(cli: &Cli) -> Outcome {
    let budget = cli.budget;
    let mut out = std::io::stdout().lock();
    match &cli.command {
        Command::Parse { word } => {
            let expr = parse_word(word)?;
            let vars = expr.variables();
            let sums: Vec<String> = vars.iter().map(|v| format!("{v}={}", expr.exponent_sum(*v))).collect();
            writeln!(out, "canonical: {expr}")?;
            writeln!(out, "outer-commutator: {}", if classify_outer_commutator(&expr).is_some() { "yes" } else { "no" })?;
            match expr.non_commutator_witness() {
                Some((v, n)) => writeln!(out, "non-commutator: yes ({v} has exponent sum {n})")?,
                None => writeln!(out, "non-commutator: no")?,
            }
            writeln!(out, "exponent sums: {}", sums.join(" "))?;
        }
        Command::Eval { group, word, assign } => {
            let group = load_group(&group.group)?;
            let expr = parse_word(word)?;
            let assignment = parse_assignment(assign, &group)?;
            let value = evaluate(&expr, &group, &assignment)?;
            writeln!(out, "{value} {}", group.name(value))?;
        }
        Command::Values(args) => {
            let group = load_group(&args.group.group)?;
            let expr = parse_word(&args.word)?;
            let tuple = tuple_of(&group, args.tuple.as_deref(), expr.variables().len())?;
            let values = match classify_outer_commutator(&expr) {
                Some(w) => ocw_value_set(&group, &w, &tuple.chosen_sets(), budget)?,
                None => value_set(&group, &expr, &tuple.chosen_sets(), budget)?,
            };
            writeln!(out, "cardinality: {}", values.cardinality())?;
            writeln!(out, "values: {}", names(&group, values.values.iter()))?;
        }
        Command::Verbal(args) => {
            let group = load_group(&args.group.group)?;
            let w = parse_ocw(&args.word)?;
            let tuple = tuple_of(&group, args.tuple.as_deref(), w.arity())?;
            let sub = verbal_subgroup(&group, &w, &tuple, budget)?;
            writeln!(out, "order: {}", sub.order())?;
            writeln!(out, "generators: {}", names(&group, sub.generators().iter().copied()))?;
        }
        Command::Series { kind, group, r, k, tuple, mode, audit } => {
            let group = load_group(&group.group)?;
            let mode = mode_of(mode)?;
            let series = match kind {
                SeriesChoice::Gamma => build_gamma_series(&group, &tuple_of(&group, tuple.as_deref(), *r)?, budget)?,
                SeriesChoice::Delta => {
                    let arity =
                        1usize.checked_shl(*k).filter(|_| *k <= 3).ok_or_else(|| Failure::Usage(format!("k = {k} is too large")))?;
                    build_delta_series(&group, &tuple_of(&group, tuple.as_deref(), arity)?, *k)?
                }
            };
            let report = verify_series(&group, &series, mode, budget)?;
            print_series(&mut out, &group, &series, &report, *audit)?;
            if !report.passed() {
                return Err(Failure::Verification);
            }
        }
        Command::Check { id, group, word, tuple, mode, out: dest } => {
            let id = CheckId::from_str(id)?;
            let group = load_group(&group.group)?;
            let spec = CheckSpec { id, group: group.label().to_string(), word: word.clone(), tuple: tuple.clone(), mode: mode_of(mode)? };
            let report = run_check_on(&group, &spec, budget)?;
            let mut w = sink(dest.out.as_deref())?;
            emit(std::slice::from_ref(&report), dest.format, &mut *w)?;
            w.flush()?;
            if report.status == Status::Fail {
                return Err(Failure::Verification);
            }
        }
        Command::Suite { catalog, ids, words, mode, out: dest } => {
            let catalog = load_catalog(catalog)?;
            let ids =
                if ids.is_empty() { CheckId::ALL.to_vec() } else { ids.iter().map(|s| CheckId::from_str(s)).collect::<Result<_, _>>()? };
            let words = if words.is_empty() { default_words() } else { words.clone() };
            let config = SuiteConfig { ids, words, mode: mode_of(mode)?, seed: mode.seed.unwrap_or(0), budget };
            let report = run_suite(&catalog, &config)?;
            let mut w = sink(dest.out.as_deref())?;
            emit(&report.reports, dest.format, &mut *w)?;
            w.flush()?;
            let t = report.totals();
            eprintln!("{} pass, {} sampled-pass, {} fail, {} skipped", t.pass, t.sampled_pass, t.fail, t.skipped);
            if t.fail > 0 {
                return Err(Failure::Verification);
            }
            if t.skipped > 0 {
                return Err(Failure::Budget(format!("{} checks exceeded the budget", t.skipped)));
            }
        }
        Command::Survey { word, catalog, seed, out: dest } => {
            let groups = build_catalog(&load_catalog(catalog)?)?;
            let rows = survey(&groups, &parse_ocw(word)?, *seed, budget)?;
            let mut w = sink(dest.out.as_deref())?;
            emit(&rows, dest.format, &mut *w)?;
            w.flush()?;
        }
        Command::Probe { word, catalog, seed, out: dest } => {
            let groups = build_catalog(&load_catalog(catalog)?)?;
            let rows = conjecture_probe(&groups, &parse_ocw(word)?, *seed, budget)?;
            let mut w = sink(dest.out.as_deref())?;
            emit(&rows, dest.format, &mut *w)?;
            w.flush()?;
            if rows.iter().any(|r| !r.generated || !r.divides) {
                return Err(Failure::Verification);
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn parse_assignment(text: &str, group: &FiniteGroup) -> Result<BTreeMap<Var, usize>, Failure> {
    let mut map = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part.split_once('=').ok_or_else(|| Failure::Usage(format!("expected var=index, got {part:?}")))?;
        let expr = parse_word(name.trim())?;
        let vars = expr.variables();
        let [var] = vars.as_slice() else {
            return Err(Failure::Usage(format!("{name:?} is not a single variable")));
        };
        let index = match value.trim().parse::<usize>() {
            Ok(i) => i,
            Err(_) => group.find_named(value.trim()).ok_or_else(|| Failure::Usage(format!("unknown element {value:?}")))?,
        };
        map.insert(*var, index);
    }
    Ok(map)
}

fn print_series(
    out: &mut dyn Write,
    group: &FiniteGroup,
    series: &LinearSeries,
    report: &SeriesReport,
    audit: bool,
) -> std::io::Result<()> {
    let verdict = |b: bool| if b { "ok" } else { "FAIL" };
    writeln!(out, "{} on {}: {} factors", series.kind, group.label(), series.len())?;
    writeln!(out, "chain orders (bottom to top): {}", series.chain_orders().iter().map(usize::to_string).collect::<Vec<_>>().join(" "))?;
    writeln!(
        out,
        "endpoints: {}, chain: {}, length: {}",
        verdict(report.endpoints_ok),
        verdict(report.chain_ok),
        verdict(report.count_ok)
    )?;
    let rows = report
        .factors
        .iter()
        .map(|f| {
            vec![
                f.index.to_string(),
                f.provenance.to_string(),
                format!("{}/{}", f.upper_order, f.lower_order),
                f.word.clone(),
                f.tuple.clone(),
                f.linear_position.to_string(),
                opt(&f.degree),
                format!("{} ({} cases)", verdict(f.linearity.holds), f.linearity.cases),
                verdict(f.containment && f.generation && f.extension && f.degree_ok && f.abelian).to_string(),
            ]
        })
        .collect();
    output::table(&["index", "from", "upper/lower", "word", "tuple", "linear", "degree", "linearity", "structure"], rows, out)?;
    if audit {
        writeln!(out, "construction checks:")?;
        for c in &series.construction {
            writeln!(out, "  {} {}", verdict(c.holds), c.label)?;
        }
        writeln!(out, "intermediate orders:")?;
        for (label, order) in &series.audit {
            writeln!(out, "  {label} {order}")?;
        }
    }
    Ok(())
}

impl Row for CheckReport {
    fn header() -> &'static [&'static str] {
        &["id", "group", "word", "tuple", "mode", "seed", "status", "cases", "detail", "counterexample"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.id.to_string(),
            self.group.clone(),
            self.word.clone(),
            self.tuple.clone(),
            self.mode.to_string(),
            opt(&self.seed),
            self.status.to_string(),
            self.cases.to_string(),
            self.detail.clone(),
            opt(&self.counterexample),
        ]
    }
}

impl Row for SurveyRow {
    fn header() -> &'static [&'static str] {
        &["group", "order", "word", "tuple", "m", "verbal_order", "mode", "seed"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.group.clone(),
            self.order.to_string(),
            self.word.clone(),
            self.tuple.clone(),
            opt(&self.m),
            opt(&self.verbal_order),
            self.mode.to_string(),
            self.seed.to_string(),
        ]
    }
}

impl Row for ProbeRow {
    fn header() -> &'static [&'static str] {
        &["group", "order", "word", "tuple", "m", "verbal_order", "generated", "divides"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.group.clone(),
            self.order.to_string(),
            self.word.clone(),
            self.tuple.clone(),
            self.m.to_string(),
            self.verbal_order.to_string(),
            self.generated.to_string(),
            self.divides.to_string(),
        ]
    }
}
