use std::fs::{self, File};
use std::io::{self, IsTerminal};
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Signed;
use subgrowth_core::borel::{census, siegel_floor, BracketValue, Budget, CensusOptions, NumberFieldInvariants};
use subgrowth_core::bounds::{
    character_value_report, class_char_product_trend, degree_sum_trend, growth_trend, uniform_bound_constant,
    verify_class_size_bound, verify_degree_identities, verify_fl, BoundReport, Status,
};
use subgrowth_core::character::{CharacterEngine, SharedCache};
use subgrowth_core::fuchsian::FuchsianSignature;
use subgrowth_core::hom::{hom_count, surface_index, surfaces_of_genus, transitive_sieve, HomCountSeries};
use subgrowth_core::interval::parse_decimal;
use subgrowth_core::partition::{enumerate_partitions, partition_count};
use subgrowth_core::{CycleType, Partition, RealContext};

use crate::cache_file::{load_cache, save_cache};
use crate::cli::{CacheAction, Cli, Command, GlobalArgs, Suite, TableAction};
use crate::output::Report;
use crate::table::{builtin_fields, read_field_table, write_field_table};
use crate::CliError;

pub const COUNT_COLUMNS: [&str; 5] = ["n", "h_n", "t_n", "a_n", "s_n"];
pub const CENSUS_COLUMNS: [&str; 7] =
    ["label", "ram_norms", "s_norms", "m_range", "bracket", "covolume_low", "covolume_high"];

/// Largest index `surfaces` runs without `--force`.
pub const SURFACE_INDEX_LIMIT: usize = 60;

const DIGITS: u32 = 15;

#[derive(Debug)]
pub enum Output {
    Report(Report),
    Text(String),
}

#[derive(Debug)]
pub struct Outcome {
    pub output: Output,
    /// An exact bound check failed.
    pub bound_failed: bool,
}

impl Outcome {
    fn report(report: Report) -> Self {
        Self { output: Output::Report(report), bound_failed: false }
    }
}

/// Runs the command on a pool of `--threads` workers.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cli))
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let global = &cli.global;
    match &cli.command {
        Command::Count { signature, n } => with_cache(global, |engine| count(engine, signature, *n)),
        Command::Character { lambda, class } => with_cache(global, |engine| character(engine, lambda, class)),
        Command::Census { budget, bracket, max_s } => run_census(global, budget, bracket, *max_s),
        Command::Verify { suite, n, signature, s } => {
            let ctx = real_context(&global.precision)?;
            with_cache(global, |engine| verify(engine, &ctx, *suite, *n, signature, s))
        }
        Command::Surfaces { signature, genus, force } => {
            with_cache(global, |engine| surfaces(engine, signature, *genus, *force))
        }
        Command::Table { action: TableAction::Export { primes_below } } => {
            let mut out = Vec::new();
            write_field_table(&builtin_fields(*primes_below), &mut out).map_err(|e| io_error("stdout", e))?;
            Ok(Outcome { output: Output::Text(String::from_utf8(out).expect("utf-8")), bound_failed: false })
        }
        Command::Table { action: TableAction::Check } => {
            let path = global.table.as_ref().ok_or_else(|| CliError::Usage("table check needs --table".into()))?;
            Ok(Outcome::report(table_rows(&load_table(path)?)))
        }
        Command::Cache { action } => {
            let path = global.cache.as_ref().ok_or_else(|| CliError::Usage("cache commands need --cache".into()))?;
            match action {
                CacheAction::Warm { n } => with_cache(global, |engine| warm(engine, *n)),
                CacheAction::Info => {
                    let cache = SharedCache::new();
                    if path.exists() {
                        read_cache(path, &cache)?;
                    }
                    Ok(Outcome::report(cache_summary(&cache)))
                }
            }
        }
    }
}

fn io_error(path: impl Into<PathBuf>, source: io::Error) -> CliError {
    CliError::Io { path: path.into(), source }
}

fn read_cache(path: &Path, cache: &SharedCache) -> Result<usize, CliError> {
    let file = File::open(path).map_err(|e| io_error(path, e))?;
    Ok(load_cache(file, cache)?)
}

/// Loads `--cache` if it exists, runs `f`, and writes the grown cache back.
fn with_cache(
    global: &GlobalArgs,
    f: impl FnOnce(&CharacterEngine<SharedCache>) -> Result<Outcome, CliError>,
) -> Result<Outcome, CliError> {
    let engine = CharacterEngine::new(SharedCache::new());
    let Some(path) = &global.cache else {
        return f(&engine);
    };
    let before = if path.exists() { read_cache(path, engine.cache())? } else { 0 };
    let outcome = f(&engine)?;
    if engine.cache().len() != before || !path.exists() {
        let tmp = path.with_extension("tmp");
        let file = File::create(&tmp).map_err(|e| io_error(&tmp, e))?;
        save_cache(engine.cache(), io::BufWriter::new(file)).map_err(|e| io_error(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| io_error(path, e))?;
    }
    Ok(outcome)
}

/// Certified constants of width at most `precision`.
pub fn real_context(precision: &str) -> Result<RealContext, CliError> {
    let width = parse_decimal(precision).map_err(|e| CliError::Usage(format!("--precision: {e}")))?;
    let limit = BigRational::new(1.into(), num_bigint::BigInt::from(10u32).pow(15));
    if !width.is_positive() || width > limit {
        return Err(CliError::Usage(format!("--precision must lie in (0, 1e-15], got {precision}")));
    }
    Ok(RealContext::for_width(&width))
}

fn parse_signature(text: &str) -> Result<FuchsianSignature, CliError> {
    text.parse().map_err(|e| CliError::Usage(format!("signature '{text}': {e}")))
}

fn progress(start: &Instant, message: &str) {
    if io::stderr().is_terminal() && start.elapsed().as_secs() >= 1 {
        eprintln!("{message}");
    }
}

fn count(engine: &CharacterEngine<SharedCache>, signature: &str, n_max: usize) -> Result<Outcome, CliError> {
    let sig = parse_signature(signature)?;
    if n_max == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let start = Instant::now();
    let mut values = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        values.push(hom_count(&sig, n, engine)?);
        progress(&start, &format!("n = {n} ({:.1?})", start.elapsed()));
    }
    let series = HomCountSeries::new(sig.clone(), values);
    let counts = transitive_sieve(&series)?;
    let mut report = Report::new(format!("subgroup counts of {sig}"), &COUNT_COLUMNS);
    for n in 1..=n_max {
        report.push(vec![
            n.to_string(),
            series.values[n].to_string(),
            counts.t(n).to_string(),
            counts.a(n).to_string(),
            counts.s(n).to_string(),
        ]);
    }
    report.note(format!("mu = {}", sig.mu()));
    Ok(Outcome::report(report))
}

fn character(engine: &CharacterEngine<SharedCache>, lambda: &str, class: &str) -> Result<Outcome, CliError> {
    let lambda: Partition = lambda.parse().map_err(|e| CliError::Usage(format!("partition '{lambda}': {e}")))?;
    let class: CycleType = class.parse().map_err(|e| CliError::Usage(format!("class '{class}': {e}")))?;
    let value = engine.character(&lambda, &class)?;
    let mut report = Report::new("character value", &["lambda", "class", "value"]);
    report.push(vec![lambda.to_string(), class.to_string(), value.to_string()]);
    Ok(Outcome::report(report))
}

fn load_table(path: &Path) -> Result<Vec<NumberFieldInvariants>, CliError> {
    let file = File::open(path).map_err(|e| io_error(path, e))?;
    Ok(read_field_table(file)?)
}

fn run_census(global: &GlobalArgs, budget: &str, bracket: &str, max_s: Option<usize>) -> Result<Outcome, CliError> {
    let ctx = real_context(&global.precision)?;
    let budget: Budget = budget.parse().map_err(|e| CliError::Usage(format!("--budget '{budget}': {e}")))?;
    let bracket = match bracket {
        "range" => BracketValue::Range,
        value => BracketValue::Exact(
            value.parse::<BigUint>().map_err(|_| CliError::Usage(format!("--bracket '{value}'")))?,
        ),
    };
    let fields = match &global.table {
        Some(path) => load_table(path)?,
        None => builtin_fields(100),
    };
    let options = CensusOptions { bracket: bracket.clone(), max_s };
    let rows = census(&fields, &budget, &options, &ctx)?;
    let mut report = Report::new(format!("census under covolume {budget}"), &CENSUS_COLUMNS);
    if budget.below_siegel_floor(&ctx) {
        report.note(format!(
            "budget {budget} is below {}*pi, the smallest covolume of any Fuchsian group; nothing qualifies",
            siegel_floor()
        ));
    }
    if global.table.is_none() {
        report.note("fields: built-in rows for Q and Q(sqrt5)");
    }
    for row in &rows {
        let ideals = |list: &[subgrowth_core::borel::PrimeIdeal]| {
            list.iter()
                .map(|p| if p.label == p.norm.to_string() { p.label.clone() } else { format!("{}:{}", p.label, p.norm) })
                .collect::<Vec<_>>()
                .join(";")
        };
        let (low, high) = row.covolume.endpoints(DIGITS);
        report.push(vec![
            row.field.clone(),
            ideals(&row.ramification),
            ideals(&row.s_set),
            format!("{}..{}", row.m_range.0, row.m_range.1),
            row.bracket.describe(),
            low,
            high,
        ]);
    }
    Ok(Outcome::report(report))
}

/// Flattens a bound report: parameters, values, status and witness.
pub fn bound_table(bound: &BoundReport) -> Report {
    let mut columns: Vec<String> = Vec::new();
    for point in &bound.points {
        for (key, _) in point.params.iter().chain(&point.values) {
            if !columns.contains(key) {
                columns.push(key.clone());
            }
        }
    }
    columns.push("status".into());
    columns.push("witness".into());
    let names: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut report = Report::new(bound.bound.clone(), &names);
    for point in &bound.points {
        let mut row = vec![String::new(); columns.len()];
        for (key, value) in point.params.iter().chain(&point.values) {
            let i = columns.iter().position(|c| c == key).expect("collected above");
            row[i] = value.clone();
        }
        let status = match point.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Report => "report",
        };
        let len = row.len();
        row[len - 2] = status.into();
        row[len - 1] = point.witness.clone().unwrap_or_default();
        report.push(row);
    }
    if let Some(constant) = &bound.constant {
        report.note(format!("constant in [{}, {}]", constant.lo_decimal(DIGITS), constant.hi_decimal(DIGITS)));
    }
    for note in &bound.notes {
        report.note(note.clone());
    }
    report
}

fn verify(
    engine: &CharacterEngine<SharedCache>,
    ctx: &RealContext,
    suite: Suite,
    n_max: usize,
    signature: &str,
    s: &str,
) -> Result<Outcome, CliError> {
    let bound = match suite {
        Suite::Fl => verify_fl(n_max, engine)?,
        Suite::Classsize => verify_class_size_bound(n_max, ctx)?,
        Suite::Uniform => uniform_bound_constant(&parse_signature(signature)?, n_max, engine, ctx)?,
        Suite::Growth => growth_trend(&parse_signature(signature)?, n_max, engine, ctx)?,
        Suite::Degreesum => {
            let s = parse_decimal(s).map_err(|e| CliError::Usage(format!("--s: {e}")))?;
            if !s.is_positive() {
                return Err(CliError::Usage("--s must be positive".into()));
            }
            degree_sum_trend(n_max, &s, ctx)?
        }
        Suite::Charvalue => character_value_report(n_max, engine, ctx)?,
        Suite::Classchar => class_char_product_trend(n_max, engine, ctx)?,
        Suite::Identities => verify_degree_identities(n_max),
    };
    Ok(Outcome { bound_failed: !bound.all_pass(), output: Output::Report(bound_table(&bound)) })
}

fn surfaces(engine: &CharacterEngine<SharedCache>, signature: &str, genus: u64, force: bool) -> Result<Outcome, CliError> {
    let sig = parse_signature(signature)?;
    let n = surface_index(&sig, genus)?;
    if n > SURFACE_INDEX_LIMIT && !force {
        return Err(CliError::Budget(format!(
            "index {n} needs character columns over p({n}) = {} partitions; rerun with --force to compute anyway",
            partition_count(n)
        )));
    }
    if n > SURFACE_INDEX_LIMIT {
        eprintln!("warning: index {n} is beyond the usual time and memory budget");
    }
    let value = surfaces_of_genus(&sig, genus, engine)?;
    let mut report = Report::new(format!("genus-{genus} surface subgroups of {sig}"), &["signature", "genus", "index", "count"]);
    report.push(vec![sig.to_string(), genus.to_string(), n.to_string(), value.to_string()]);
    Ok(Outcome::report(report))
}

fn warm(engine: &CharacterEngine<SharedCache>, n_max: usize) -> Result<Outcome, CliError> {
    let start = Instant::now();
    for n in 1..=n_max {
        for p in enumerate_partitions(n) {
            engine.column(&CycleType::new(p));
        }
        progress(&start, &format!("S_{n} done ({:.1?})", start.elapsed()));
    }
    Ok(Outcome::report(cache_summary(engine.cache())))
}

fn cache_summary(cache: &SharedCache) -> Report {
    let mut report = Report::new("cached character columns", &["n", "columns", "classes"]);
    let entries = cache.entries();
    let mut i = 0;
    while i < entries.len() {
        let n = entries[i].0.n();
        let j = entries[i..].iter().position(|(c, _)| c.n() != n).map_or(entries.len(), |k| i + k);
        report.push(vec![n.to_string(), (j - i).to_string(), partition_count(n).to_string()]);
        i = j;
    }
    report
}

fn table_rows(fields: &[NumberFieldInvariants]) -> Report {
    let mut report = Report::new("field table", &["label", "degree", "disc", "zeta2", "class_number", "primes"]);
    for field in fields {
        let zeta2 = match &field.zeta2 {
            subgrowth_core::borel::Zeta2::Exact(q) => format!("{q}*pi^{}/sqrt({})", 2 * field.degree, field.disc),
            subgrowth_core::borel::Zeta2::Interval(i) => format!("{i}"),
        };
        report.push(vec![
            field.label.clone(),
            field.degree.to_string(),
            field.disc.to_string(),
            zeta2,
            field.class_number.to_string(),
            field.primes.len().to_string(),
        ]);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn run_args(args: &[&str]) -> Result<Outcome, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("subgrowth").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    fn rows(outcome: &Outcome) -> &[Vec<String>] {
        match &outcome.output {
            Output::Report(r) => &r.rows,
            Output::Text(_) => panic!("report expected"),
        }
    }

    #[test]
    fn count_reports_subgroups() {
        let out = run_args(&["count", "(2,3,inf)", "--n", "5"]).unwrap();
        let a: Vec<&str> = rows(&out).iter().map(|r| r[3].as_str()).collect();
        assert_eq!(a, ["1", "1", "4", "8", "5"]);
        assert_eq!(rows(&out)[2][1], "12");
    }

    #[test]
    fn precision_is_bounded() {
        assert!(real_context("1e-30").is_ok());
        assert!(real_context("1e-15").is_ok());
        assert!(matches!(real_context("1e-3"), Err(CliError::Usage(_))));
        assert!(matches!(real_context("0"), Err(CliError::Usage(_))));
    }

    #[test]
    fn census_at_pi_over_three() {
        let out = run_args(&["census", "--budget", "pi/3"]).unwrap();
        let table = rows(&out);
        assert_eq!(table.len(), 3);
        let q = table.iter().find(|row| row[0] == "Q").unwrap();
        assert_eq!((q[1].as_str(), q[5].as_str(), q[6].as_str()), ("", "1/3*pi", "1/3*pi"));
    }

    #[test]
    fn bound_tables_flatten_points() {
        let out = run_args(&["verify", "fl", "--n", "6"]).unwrap();
        assert!(!out.bound_failed);
        let Output::Report(r) = &out.output else { panic!() };
        assert_eq!(&r.columns[..2], ["n", "m"]);
        assert_eq!(r.columns.last().unwrap(), "witness");
        assert!(r.rows.iter().all(|row| row[row.len() - 2] == "pass"));
    }

    #[test]
    fn surfaces_beyond_budget_need_force() {
        assert!(matches!(run_args(&["surfaces", "(2,3,7)", "--genus", "2"]), Err(CliError::Budget(_))));
        let out = run_args(&["surfaces", "g=2", "--genus", "3"]).unwrap();
        assert_eq!(rows(&out)[0][3], "15");
    }
}
