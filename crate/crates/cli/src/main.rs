mod input;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use ca_core::{evolve, Boundary, Configuration, Diagram, Rule};
use clap::{Args, Parser, Subcommand, ValueEnum};
use flate2::write::GzEncoder;
use flate2::Compression;
use preimage::word::format_word;
use preimage::{EngineKind, OrphanEngine};
use sparse_grid::render::{write_csv, write_ppm, write_whitelist};
use sparse_grid::verify::{verify_distances_with, verify_squares_with};
use sparse_grid::{canonical_seed, grid, LemmaReport, Layout};
use tm_embed::{build_embedded_rule, EmbedError, embedded_seed, extract_tm_trace, verify_head_unique, verify_zones, SeedPlan};

use input::{bad_input, InputError, Loaded};

#[derive(Parser)]
#[command(name = "gridca", version, about = "Cellular automata, preimages and the sparse grid construction")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a rule from a seed and write the space-time diagram.
    Simulate(SimulateArgs),
    /// Search the shortest orphan.
    Orphan(OrphanArgs),
    /// List the preimages of a word.
    Preimage(PreimageArgs),
    /// Check that every word has the same number of preimages.
    Balance(BalanceArgs),
    /// Words of one length that survive a number of backward steps.
    Limitlang(LimitArgs),
    /// Emit the grid rule, a canonical seed or the adjacency whitelist.
    Grid(GridArgs),
    /// Build the machine embedding and emit its seed.
    Embed(EmbedArgs),
    /// Run the structural verifiers on a diagram.
    Verify(VerifyArgs),
    /// Extract the machine run from an embedded diagram.
    Trace(TraceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    Grid,
    Embed,
}

#[derive(Args)]
#[group(id = "rule_source", required = true, multiple = false)]
struct RuleSource {
    /// Rule file in the text format (`.gz` accepted).
    #[arg(long, group = "rule_source")]
    rule: Option<PathBuf>,
    /// Elementary rule number.
    #[arg(long, group = "rule_source")]
    elementary: Option<u8>,
    #[arg(long, group = "rule_source")]
    builtin: Option<Builtin>,
}

#[derive(Args)]
struct MachineArg {
    /// Bundled machine name (no11, parity, stayput) or machine file.
    #[arg(long)]
    machine: Option<String>,
}

impl RuleSource {
    fn load(&self, machine: &MachineArg) -> Result<Loaded> {
        if let Some(path) = &self.rule {
            return Ok(Loaded::Plain(input::parse_rule_file(path)?));
        }
        if let Some(n) = self.elementary {
            return Ok(Loaded::Plain(Rule::elementary(n)));
        }
        match self.builtin {
            Some(Builtin::Grid) => Ok(Loaded::Grid(grid())),
            Some(Builtin::Embed) => {
                let spec = machine.machine.as_deref().ok_or_else(|| bad_input("--builtin embed needs --machine"))?;
                let tm = input::load_machine(spec)?;
                Ok(Loaded::Embed(Box::new(build_embedded_rule(&tm)?)))
            }
            None => unreachable!("clap requires a rule source"),
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    source: RuleSource,
    #[command(flatten)]
    machine: MachineArg,
    /// Seed word (digits, or dot-separated ids).
    #[arg(long, conflicts_with = "config")]
    seed: Option<String>,
    /// Seed configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Columns of the built-in seed.
    #[arg(long)]
    columns: Option<usize>,
    /// Oracle bits of the embedded seed.
    #[arg(long, default_value = "")]
    oracle: String,
    /// Wrap the seed word around instead of padding it.
    #[arg(long)]
    cyclic: bool,
    /// State padding the seed word on both sides.
    #[arg(long, default_value_t = 0)]
    quiescent: u32,
    /// Steps to run; built-in seeds default to the top of the grid.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    ppm: Option<PathBuf>,
}

#[derive(Args)]
struct OrphanArgs {
    #[command(flatten)]
    source: RuleSource,
    #[command(flatten)]
    machine: MachineArg,
    #[arg(long)]
    max_len: usize,
    #[arg(long, default_value_t = 1)]
    order: usize,
    #[arg(long, value_enum, default_value = "auto")]
    engine: EngineArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Auto,
    Composed,
    Iterative,
}

#[derive(Args)]
struct PreimageArgs {
    #[command(flatten)]
    source: RuleSource,
    #[command(flatten)]
    machine: MachineArg,
    #[arg(long)]
    word: String,
    /// Write the preimages here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BalanceArgs {
    #[command(flatten)]
    source: RuleSource,
    #[command(flatten)]
    machine: MachineArg,
    #[arg(long)]
    max_len: usize,
}

#[derive(Args)]
struct LimitArgs {
    #[command(flatten)]
    source: RuleSource,
    #[command(flatten)]
    machine: MachineArg,
    #[arg(long)]
    length: usize,
    #[arg(long)]
    depth: usize,
    /// Write the word list here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    /// Write the rule table (`.gz` compresses).
    #[arg(long)]
    rule_out: Option<PathBuf>,
    /// Write the canonical seed with `--columns` columns.
    #[arg(long, requires = "columns")]
    seed_out: Option<PathBuf>,
    #[arg(long)]
    columns: Option<usize>,
    /// Write the allowed adjacent pairs.
    #[arg(long)]
    whitelist_out: Option<PathBuf>,
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long)]
    machine: String,
    #[arg(long, default_value = "")]
    oracle: String,
    #[arg(long)]
    columns: usize,
    #[arg(long)]
    seed_out: Option<PathBuf>,
    /// Write the rule table; refused when it exceeds the table cap.
    #[arg(long)]
    rule_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Diagram CSV as written by `simulate --csv`.
    #[arg(long)]
    diagram: PathBuf,
    /// Cell index of the first column of the CSV.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    origin: i64,
    /// Verify an embedded diagram for this machine instead of a grid one.
    #[arg(long)]
    machine: Option<String>,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long)]
    machine: String,
    #[arg(long, default_value = "")]
    oracle: String,
    #[arg(long)]
    columns: usize,
    /// Read the diagram instead of simulating it.
    #[arg(long)]
    diagram: Option<PathBuf>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    origin: i64,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Compare with a direct run of the machine; mismatches exit with 1.
    #[arg(long)]
    check: bool,
}

/// Seeds the window cannot hold are the caller's mistake.
fn seed_error(e: EmbedError) -> anyhow::Error {
    match e {
        EmbedError::OracleTooLong { .. } | EmbedError::NoColumns | EmbedError::Unfit { .. } => bad_input(e),
        e => e.into(),
    }
}

/// Output file, gzip-compressed when the name ends in `.gz`.
fn create(path: &Path) -> Result<Box<dyn Write>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let w = BufWriter::new(file);
    Ok(if path.extension().is_some_and(|e| e == "gz") {
        Box::new(GzEncoder::new(w, Compression::default()))
    } else {
        Box::new(w)
    })
}

fn write_to(path: &Path, f: impl FnOnce(&mut Box<dyn Write>) -> io::Result<()>) -> Result<()> {
    let mut out = create(path)?;
    f(&mut out).and_then(|_| out.flush()).with_context(|| format!("writing {}", path.display()))
}

fn word_list(words: impl IntoIterator<Item = Vec<u32>>, states: u32) -> String {
    words.into_iter().map(|w| format_word(&w, states) + "\n").collect()
}

fn simulate(a: SimulateArgs) -> Result<ExitCode> {
    let loaded = a.source.load(&a.machine)?;
    let rule = loaded.rule();
    let boundary = if a.cyclic { Boundary::Cyclic } else { Boundary::Quiescent(a.quiescent) };
    let seed = if let Some(w) = &a.seed {
        Configuration::new(input::parse_word(w)?, boundary, 0)
    } else if let Some(path) = &a.config {
        input::parse_config_file(path)?
    } else {
        let columns = a.columns.ok_or_else(|| bad_input("give --seed, --config or --columns"))?;
        match &loaded {
            Loaded::Grid(_) => canonical_seed(columns),
            Loaded::Embed(er) => embedded_seed(er, &input::parse_bits(&a.oracle)?, columns).map_err(seed_error)?,
            Loaded::Plain(_) => return Err(bad_input("--columns needs a built-in rule")),
        }
    };
    seed.validate(rule).map_err(bad_input)?;
    let steps = match (a.steps, a.columns) {
        (Some(s), _) => s,
        (None, Some(columns)) => Layout { columns }.top_row() as usize,
        (None, None) => return Err(bad_input("--steps is required")),
    };
    let d = evolve(rule, &seed, steps)?;
    if let Some(path) = &a.ppm {
        write_to(path, |w| write_ppm(&d, |s| loaded.color(s), w))?;
    }
    match &a.csv {
        Some(path) => write_to(path, |w| write_csv(&d, w))?,
        None if a.ppm.is_none() => write_csv(&d, &mut io::stdout().lock())?,
        None => {}
    }
    let origin = d.rows.iter().map(|r| r.origin).min().unwrap_or(0);
    eprintln!("{} rows, origin {origin}", d.rows.len());
    Ok(ExitCode::SUCCESS)
}

fn orphan(a: OrphanArgs) -> Result<ExitCode> {
    let loaded = a.source.load(&a.machine)?;
    let rule = loaded.rule();
    let engine = match a.engine {
        EngineArg::Auto => OrphanEngine::auto(rule, a.order)?,
        EngineArg::Composed => OrphanEngine::new(rule, a.order, EngineKind::Composed)?,
        EngineArg::Iterative => OrphanEngine::new(rule, a.order, EngineKind::Iterative)?,
    };
    match preimage::find_min_orphan_with(&engine, rule.state_count(), a.max_len)? {
        Some(w) => println!("{}", format_word(&w, rule.state_count())),
        None => println!("none ≤ {}", a.max_len),
    }
    Ok(ExitCode::SUCCESS)
}

fn preimages(a: PreimageArgs) -> Result<ExitCode> {
    let loaded = a.source.load(&a.machine)?;
    let rule = loaded.rule();
    let w = input::parse_word(&a.word)?;
    for &s in &w {
        rule.check_state(s).map_err(bad_input)?;
    }
    let set = preimage::preimages_word(rule, &w)?;
    let n = set.len();
    let list = word_list(set, rule.state_count());
    match &a.out {
        Some(path) => {
            write_to(path, |o| o.write_all(list.as_bytes()))?;
            println!("{n}");
        }
        None => print!("{list}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn balance(a: BalanceArgs) -> Result<ExitCode> {
    let loaded = a.source.load(&a.machine)?;
    print!("{}", preimage::balance_check(loaded.rule(), a.max_len)?);
    Ok(ExitCode::SUCCESS)
}

fn limitlang(a: LimitArgs) -> Result<ExitCode> {
    let loaded = a.source.load(&a.machine)?;
    let rule = loaded.rule();
    let lang = preimage::limit_language_window(rule, a.length, a.depth)?;
    let n = lang.words.len();
    if let Some(path) = &a.out {
        let list = word_list(lang.words, rule.state_count());
        write_to(path, |o| o.write_all(list.as_bytes()))?;
    }
    println!("{n}");
    Ok(ExitCode::SUCCESS)
}

fn grid_cmd(a: GridArgs) -> Result<ExitCode> {
    let g = grid();
    println!("states {} radius {}", g.rule.state_count(), g.rule.radius());
    if let Some(path) = &a.rule_out {
        let mut out = create(path)?;
        ca_core::text::write_rule(&g.rule, &mut out, ca_core::DEFAULT_TABLE_CAP)?;
        out.flush()?;
    }
    if let (Some(path), Some(columns)) = (&a.seed_out, a.columns) {
        let text = ca_core::text::write_config(&canonical_seed(columns));
        write_to(path, |o| o.write_all(text.as_bytes()))?;
    }
    if let Some(path) = &a.whitelist_out {
        write_to(path, write_whitelist)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn embed(a: EmbedArgs) -> Result<ExitCode> {
    let tm = input::load_machine(&a.machine)?;
    let oracle = input::parse_bits(&a.oracle)?;
    let er = build_embedded_rule(&tm)?;
    let plan = SeedPlan::new(&tm, &oracle, a.columns).map_err(seed_error)?;
    println!("states {} radius {}", er.rule.state_count(), er.rule.radius());
    println!("frozen at time {} with {} dormant sites", plan.t_end, plan.dormant);
    if let Some(path) = &a.seed_out {
        let text = ca_core::text::write_config(&embedded_seed(&er, &oracle, a.columns)?);
        write_to(path, |o| o.write_all(text.as_bytes()))?;
    }
    if let Some(path) = &a.rule_out {
        let cap = ca_core::DEFAULT_TABLE_CAP;
        if er.rule.neighborhood_count().is_none_or(|n| n > cap) {
            bail!("the rule has more than {cap} neighbourhoods; its table cannot be written");
        }
        let mut out = create(path)?;
        ca_core::text::write_rule(&er.rule, &mut out, ca_core::DEFAULT_TABLE_CAP)?;
        out.flush()?;
    }
    Ok(ExitCode::SUCCESS)
}

fn print_report(report: &LemmaReport) -> ExitCode {
    for v in &report.violations {
        println!("{},{},{},{}", v.site.cell, v.site.time, v.code, v.message);
    }
    if report.is_clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn verify(a: VerifyArgs) -> Result<ExitCode> {
    let text = input::read_text(&a.diagram)?;
    let mut report = LemmaReport::default();
    match &a.machine {
        None => {
            let g = grid();
            let d = input::parse_diagram(&text, a.origin, sparse_grid::QUIESCENT)?;
            let view = &g.alphabet;
            report.merge(verify_squares_with(view, &d).map_err(bad_input)?);
            for (t, row) in d.rows.iter().enumerate() {
                report.merge(at_time(verify_distances_with(view, row).map_err(bad_input)?, t));
            }
        }
        Some(spec) => {
            let er = build_embedded_rule(&input::load_machine(spec)?)?;
            let d = input::parse_diagram(&text, a.origin, sparse_grid::QUIESCENT)?;
            report.merge(verify_squares_with(&er, &d).map_err(bad_input)?);
            for (t, row) in d.rows.iter().enumerate() {
                report.merge(at_time(verify_distances_with(&er, row).map_err(bad_input)?, t));
                report.merge(at_time(verify_head_unique(&er, row).map_err(bad_input)?, t));
            }
            report.merge(verify_zones(&er, &d).map_err(bad_input)?);
        }
    }
    report.violations.sort_by_key(|v| (v.site.time, v.site.cell));
    Ok(print_report(&report))
}

/// Row verifiers report time 0; place them at row `t`.
fn at_time(mut r: LemmaReport, t: usize) -> LemmaReport {
    for v in &mut r.violations {
        v.site.time = t as i64;
    }
    r
}

fn trace(a: TraceArgs) -> Result<ExitCode> {
    let tm = input::load_machine(&a.machine)?;
    let oracle = input::parse_bits(&a.oracle)?;
    let er = build_embedded_rule(&tm)?;
    let plan = SeedPlan::new(&tm, &oracle, a.columns).map_err(seed_error)?;
    let d: Diagram = match &a.diagram {
        Some(path) => input::parse_diagram(&input::read_text(path)?, a.origin, sparse_grid::QUIESCENT)?,
        None => {
            let top = Layout { columns: a.columns }.top_row() as usize;
            evolve(&er.rule, &embedded_seed(&er, &oracle, a.columns)?, top)?
        }
    };
    let tr = extract_tm_trace(&er, &d).map_err(bad_input)?;
    let csv = tr.to_csv(&tm);
    match &a.csv {
        Some(path) => write_to(path, |o| o.write_all(csv.as_bytes()))?,
        None => print!("{csv}"),
    }
    if a.check {
        if let Some(t) = tr.first_mismatch(&plan.reference) {
            eprintln!("trace differs from the machine run at time {t}");
            return Ok(ExitCode::from(1));
        }
        if tr.len() < plan.reference.len() {
            eprintln!("trace ends at time {}, the run at {}", tr.len(), plan.t_end);
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Simulate(a) => simulate(a),
        Cmd::Orphan(a) => orphan(a),
        Cmd::Preimage(a) => preimages(a),
        Cmd::Balance(a) => balance(a),
        Cmd::Limitlang(a) => limitlang(a),
        Cmd::Grid(a) => grid_cmd(a),
        Cmd::Embed(a) => embed(a),
        Cmd::Verify(a) => verify(a),
        Cmd::Trace(a) => trace(a),
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
