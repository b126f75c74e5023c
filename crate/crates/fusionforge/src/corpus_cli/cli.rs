//! The `fusionforge` command line.
//!
//! Exit codes: `0` success; `1` a mathematical negative (axioms fail, Schur
//! fails, a violation is found) when `--gate` is given; `2` usage, parse or
//! runtime errors. Reports go to stdout, diagnostics to stderr.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use super::corpus::{active_corpus, lookup};
use super::frt::{from_json, parse_fusion_ring, serialize_fusion_ring, to_json};
use crate::bialgebra::{
    canonical_from_fusion_data, inequality_suite, rank3_dual_data, rank3_dual_schur, rank3_type1, Rank3Type1Params,
};
use crate::criteria::{default_tolerance, obstruction_report, schur_noncommutative_falsify, schur_survey};
use crate::error::{Error, Result};
use crate::ring_core::{global_fpdim, proper_subrings, verify_axioms, FusionData};
use crate::search::{
    classify, enumerate_types, rank5_three_selfadjoint_family, ring_record, Budget, ClassifyFilters,
    RingSearchOptions, SearchConstraints,
};
use crate::spectral::{character_table_seeded, RESIDUAL_TOL};

/// Fusion rings, fusion bialgebras and obstructions to unitary categorification.
#[derive(Debug, Parser)]
#[command(name = "fusionforge", version)]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Node budget for searches.
    #[arg(long, global = true)]
    pub budget_nodes: Option<u64>,
    /// Wall-clock budget for searches, in seconds.
    #[arg(long, global = true)]
    pub budget_secs: Option<f64>,
    /// Exit with status 1 when the result is a mathematical negative.
    #[arg(long, global = true)]
    pub gate: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the fusion-ring axioms.
    Verify(RingArg),
    /// Dimensions, type and structural predicates.
    Info(RingJsonArg),
    /// Character table of a commutative ring.
    Chartable {
        #[command(flatten)]
        ring: RingArg,
        /// Output format.
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
        /// Shorthand for `--format json`.
        #[arg(long, conflicts_with_all = ["format", "csv"])]
        json: bool,
        /// Shorthand for `--format csv`.
        #[arg(long, conflicts_with = "format")]
        csv: bool,
    },
    /// Schur product criterion.
    Schur {
        #[command(flatten)]
        ring: RingJsonArg,
        /// List every triple sum.
        #[arg(long)]
        all_triples: bool,
        /// Random samples for noncommutative rings.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Proper nontrivial fusion subrings.
    Subrings(RingJsonArg),
    /// Enumerate type signatures.
    ClassifyTypes(ConstraintArgs),
    /// Classify fusion rings.
    Classify {
        #[command(flatten)]
        constraints: ConstraintArgs,
        /// Keep only simple rings.
        #[arg(long)]
        simple: bool,
        /// Keep only rings passing the Schur criterion.
        #[arg(long)]
        schur_pass: bool,
        /// Disable the coefficient-bound pruning.
        #[arg(long)]
        no_bounds: bool,
        /// Print the matrices of every kept ring.
        #[arg(long)]
        matrices: bool,
    },
    /// Rank-5 rings with exactly three self-adjoint basis elements.
    Rank5Family {
        /// Cap on every structure constant.
        #[arg(long)]
        max_mult: u32,
        /// JSON output.
        #[arg(long)]
        json: bool,
    },
    /// Self-adjoint rank-3 bialgebra: minimal projections and the dual Schur test.
    BialgRank3 {
        /// `d(x_2)`.
        #[arg(long, required_unless_present = "mnq")]
        d2: Option<f64>,
        /// `d(x_3)`.
        #[arg(long, required_unless_present = "mnq")]
        d3: Option<f64>,
        /// Mixing parameter `a ∈ [0, 1]`.
        #[arg(long, required_unless_present = "mnq")]
        a: Option<f64>,
        /// Integer parameters `m,n,q` instead of `(d2, d3, a)`.
        #[arg(long, value_delimiter = ',', num_args = 3, conflicts_with_all = ["d2", "d3", "a"])]
        mnq: Option<Vec<f64>>,
        /// JSON output.
        #[arg(long)]
        json: bool,
    },
    /// Random checks of the Fourier-analytic inequalities.
    IneqSuite {
        #[command(flatten)]
        ring: RingJsonArg,
        /// Number of random samples.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// The embedded corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

/// `corpus` actions.
#[derive(Debug, Subcommand)]
pub enum CorpusAction {
    /// List ids with expected flags.
    List {
        /// JSON output.
        #[arg(long)]
        json: bool,
    },
    /// Write corpus rings to stdout or a directory.
    Export {
        /// Corpus id, or `all`.
        id: String,
        /// File format.
        #[arg(long, value_enum, default_value_t = ExportFormat::Frt)]
        format: ExportFormat,
        /// Output directory (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A ring given as a corpus id or a file (`.frt` text or `.json`).
#[derive(Debug, Args)]
pub struct RingArg {
    /// Corpus id or path to an FRT/JSON file.
    pub ring: String,
}

/// A ring argument plus `--json`.
#[derive(Debug, Args)]
pub struct RingJsonArg {
    /// Corpus id or path to an FRT/JSON file.
    pub ring: String,
    /// JSON output.
    #[arg(long)]
    pub json: bool,
}

/// Character-table output formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    /// Aligned text.
    Text,
    /// JSON.
    Json,
    /// CSV of `(re, im)` pairs.
    Csv,
}

/// Export formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    /// FRT v1 text.
    Frt,
    /// JSON mirror.
    Json,
}

/// Search constraints.
#[derive(Debug, Args)]
pub struct ConstraintArgs {
    /// Exact FPdim.
    #[arg(long, conflicts_with_all = ["fpdim_min", "fpdim_max"], required_unless_present = "fpdim_max")]
    pub fpdim: Option<u64>,
    /// Minimum FPdim.
    #[arg(long, requires = "fpdim_max")]
    pub fpdim_min: Option<u64>,
    /// Maximum FPdim.
    #[arg(long)]
    pub fpdim_max: Option<u64>,
    /// Exact rank.
    #[arg(long, conflicts_with_all = ["rank_min", "rank_max"], required_unless_present = "rank_max")]
    pub rank: Option<usize>,
    /// Minimum rank.
    #[arg(long, requires = "rank_max")]
    pub rank_min: Option<usize>,
    /// Maximum rank.
    #[arg(long)]
    pub rank_max: Option<usize>,
    /// Only the unit has dimension 1.
    #[arg(long)]
    pub perfect: bool,
    /// Every dimension divides FPdim.
    #[arg(long)]
    pub frobenius: bool,
    /// Smallest non-unit dimension.
    #[arg(long, default_value_t = 1)]
    pub min_d2: u64,
    /// gcd of the non-unit dimensions is 1.
    #[arg(long)]
    pub gcd_one: bool,
    /// Skip FPdim of the form p^a q^b or pqr.
    #[arg(long)]
    pub exclude_ppq: bool,
    /// Consecutive distinct dimensions satisfy n_{r+1} < n_r².
    #[arg(long)]
    pub growth_cap: bool,
    /// All the filters used for perfect simple integral rings.
    #[arg(long)]
    pub simple_filters: bool,
    /// Cap on structure constants.
    #[arg(long)]
    pub max_mult: Option<u32>,
    /// JSON output.
    #[arg(long)]
    pub json: bool,
}

impl ConstraintArgs {
    fn constraints(&self) -> SearchConstraints {
        let fpdim = match self.fpdim {
            Some(f) => (f, f),
            None => (self.fpdim_min.unwrap_or(1), self.fpdim_max.unwrap_or(1)),
        };
        let rank = match self.rank {
            Some(r) => (r, r),
            None => (self.rank_min.unwrap_or(1), self.rank_max.unwrap_or(1)),
        };
        let mut c = if self.simple_filters {
            SearchConstraints::perfect_frobenius(fpdim, rank)
        } else {
            SearchConstraints::exact(fpdim.0, rank.0)
        };
        c.fpdim = fpdim;
        c.rank = rank;
        c.require_perfect |= self.perfect;
        c.require_divisibility |= self.frobenius;
        c.min_d2 = c.min_d2.max(self.min_d2);
        c.require_gcd_one |= self.gcd_one;
        c.exclude_prime_power_products |= self.exclude_ppq;
        c.growth_cap |= self.growth_cap;
        c.max_multiplicity = self.max_mult;
        c
    }
}

/// Outcome of a command: whether the result is a mathematical negative.
type Outcome = Result<bool>;

/// Runs the CLI on `argv` and returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // Ignore the error when a global pool already exists (repeated in-process calls).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match execute(&cli, out) {
        Ok(negative) => i32::from(negative && cli.gate),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Entry point for the binary.
pub fn main_entry() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Resolves a ring argument: an existing file path, else a corpus id.
pub fn load_ring(arg: &str) -> Result<FusionData> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::NotFound(format!("{arg}: {e}")))?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg).to_string();
        let fd = if path.extension().is_some_and(|e| e == "json") { from_json(&text)? } else { parse_fusion_ring(&text)? };
        return Ok(if fd.label().is_some() { fd } else { fd.with_label(stem) });
    }
    Ok(lookup(arg)?.ring)
}

fn budget(cli: &Cli) -> Budget {
    let mut b = Budget::default();
    if let Some(n) = cli.budget_nodes {
        b.nodes = n;
    }
    if let Some(s) = cli.budget_secs {
        b.deadline = Some(Instant::now() + Duration::from_secs_f64(s.max(0.0)));
    }
    b
}

fn json_out(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::NotFound(format!("serialization: {e}")))?;
    writeln!(out, "{text}").map_err(io_err)
}

fn io_err(e: std::io::Error) -> Error {
    Error::NotFound(format!("output: {e}"))
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(io_err)?
    };
}

fn fmt_c(z: num_complex::Complex64) -> String {
    if z.im.abs() < 5e-13 {
        format!("{:.12}", z.re)
    } else {
        format!("{:.12}{:+.12}i", z.re, z.im)
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Outcome {
    match &cli.command {
        Command::Verify(r) => {
            let fd = load_ring(&r.ring)?;
            let rep = verify_axioms(&fd, 1e-9);
            let name = fd.label().unwrap_or(&r.ring).to_string();
            for (what, check) in [
                ("nonnegativity", &rep.nonnegativity),
                ("unit", &rep.unit),
                ("duality", &rep.duality),
                ("reciprocity", &rep.reciprocity),
                ("associativity", &rep.associativity),
            ] {
                say!(out, "{what:<14} {}", if check.passed { "ok" } else { "FAIL" });
            }
            let pass = rep.all_pass();
            say!(out, "{name}: {}", if pass { "valid fusion ring" } else { "axioms fail" });
            Ok(!pass)
        }
        Command::Info(r) => {
            let fd = load_ring(&r.ring)?;
            let rep = obstruction_report(&fd)?;
            if r.json {
                json_out(out, &rep)?;
            } else {
                let d = crate::ring_core::fp_dimensions(&fd)?;
                say!(out, "ring            {}", rep.label.as_deref().unwrap_or("-"));
                say!(out, "rank            {}", rep.rank);
                say!(out, "dual            {:?}", fd.dual().iter().map(|x| x + 1).collect::<Vec<_>>());
                say!(out, "dimensions      {}", d.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(" "));
                say!(out, "FPdim           {:.6}", rep.fpdim);
                say!(out, "type            {}", rep.ring_type);
                say!(out, "integral        {}", rep.integral);
                say!(out, "perfect         {}", rep.perfect);
                say!(out, "simple          {}", rep.simple);
                say!(out, "frobenius type  {}", rep.frobenius_type.map_or("n/a".into(), |b| b.to_string()));
                say!(out, "commutative     {}", rep.commutative);
                say!(out, "coeff. bounds   {}", if rep.bounds.holds() { "hold" } else { "violated" });
                if let Some(s) = &rep.schur {
                    say!(out, "schur           {} (worst {:.9})", if s.holds { "holds" } else { "fails" }, s.worst_value);
                }
            }
            Ok(false)
        }
        Command::Chartable { ring, format, json, csv } => {
            let fd = load_ring(&ring.ring)?;
            let ct = character_table_seeded(&fd, RESIDUAL_TOL, cli.seed)?;
            let format = if *json { TableFormat::Json } else if *csv { TableFormat::Csv } else { *format };
            match format {
                TableFormat::Json => json_out(out, &ct)?,
                TableFormat::Csv => write!(out, "{}", ct.to_csv()).map_err(io_err)?,
                TableFormat::Text => {
                    for row in &ct.lambda {
                        let cells: Vec<String> = row.iter().map(|z| format!("{:>34}", fmt_c(*z))).collect();
                        say!(out, "{}", cells.join(" "));
                    }
                    say!(out, "residual {:.3e}", ct.residual);
                }
            }
            Ok(false)
        }
        Command::Schur { ring, all_triples, samples } => {
            let fd = load_ring(&ring.ring)?;
            let mu = global_fpdim(&fd)?;
            if fd.is_commutative() {
                let ct = character_table_seeded(&fd, RESIDUAL_TOL, cli.seed)?;
                let mut rep = schur_survey(&ct, default_tolerance(mu));
                if !*all_triples {
                    rep.all_sums = None;
                }
                if ring.json {
                    json_out(out, &rep)?;
                } else {
                    let (a, b, c) = rep.worst_triple;
                    say!(out, "worst triple    ({}, {}, {})", a + 1, b + 1, c + 1);
                    say!(out, "worst value     {:.12}", rep.worst_value);
                    say!(out, "tolerance       {:.3e}", rep.tolerance);
                    say!(out, "verdict         {:?}", rep.verdict);
                    if let Some(all) = &rep.all_sums {
                        for ((a, b, c), v) in all {
                            say!(out, "({}, {}, {}) {:.12}", a + 1, b + 1, c + 1, v);
                        }
                    }
                }
                Ok(!rep.holds)
            } else {
                let witness = schur_noncommutative_falsify(&fd, *samples, cli.seed)?;
                if ring.json {
                    json_out(out, &witness)?;
                } else {
                    match &witness {
                        Some(w) => say!(out, "noncommutative: witness found, value {:.12} (sample {})", w.value, w.sample),
                        None => say!(out, "noncommutative: no witness in {samples} samples (inconclusive)"),
                    }
                }
                Ok(witness.is_some())
            }
        }
        Command::Subrings(r) => {
            let fd = load_ring(&r.ring)?;
            let subs: Vec<Vec<usize>> =
                proper_subrings(&fd)?.into_iter().map(|s| s.into_iter().map(|i| i + 1).collect()).collect();
            if r.json {
                json_out(out, &subs)?;
            } else {
                say!(out, "{} proper nontrivial subring(s)", subs.len());
                for s in &subs {
                    say!(out, "{s:?}");
                }
            }
            Ok(false)
        }
        Command::ClassifyTypes(c) => {
            let types = enumerate_types(&c.constraints())?;
            if c.json {
                json_out(out, &types.iter().map(|t| t.to_string()).collect::<Vec<_>>())?;
            } else {
                for t in &types {
                    say!(out, "{t}");
                }
                say!(out, "{} type(s)", types.len());
            }
            Ok(false)
        }
        Command::Classify { constraints, simple, schur_pass, no_bounds, matrices } => {
            let opts = RingSearchOptions { use_bounds: !no_bounds, budget: budget(cli), ..Default::default() };
            let filters = ClassifyFilters { simple: *simple, schur: *schur_pass };
            let rep = classify(&constraints.constraints(), filters, &opts)?;
            if constraints.json {
                json_out(out, &rep)?;
            } else {
                for t in &rep.per_type {
                    say!(
                        out,
                        "{:<40} involutions {:>2}  rings {:>3}  simple {:>3}  schur-pass {:>3}  simple&schur {:>3}{}",
                        t.ring_type,
                        t.involutions_tried,
                        t.found,
                        t.simple,
                        t.schur_pass,
                        t.simple_schur_pass,
                        if t.incomplete { "  (incomplete)" } else { "" }
                    );
                    if *matrices {
                        for r in &t.rings {
                            write!(out, "{}", serialize_fusion_ring(&r.ring)).map_err(io_err)?;
                        }
                    }
                }
                let s = &rep.stats;
                say!(out, "types {}  rings {}  simple {}  schur-pass {}  kept {}", rep.types_examined, rep.total_found, rep.total_simple, rep.total_schur_pass, rep.total_kept);
                say!(
                    out,
                    "nodes {}  prune: rows {} squares {} assoc {} assoc-bounds {}  leaves {}",
                    s.nodes, s.prune_row, s.prune_squares, s.prune_assoc, s.prune_assoc_bounds, s.leaves
                );
                if rep.incomplete {
                    say!(out, "INCOMPLETE: budget exhausted, counts are lower bounds");
                }
            }
            Ok(rep.incomplete)
        }
        Command::Rank5Family { max_mult, json } => {
            let fam = rank5_three_selfadjoint_family(*max_mult, budget(cli))?;
            let records = fam.rings.into_iter().map(ring_record).collect::<Result<Vec<_>>>()?;
            let simple = records.iter().filter(|r| r.simple).count();
            let fail = records.iter().filter(|r| r.schur == Some(false)).count();
            let simple_fail = records.iter().filter(|r| r.simple && r.schur == Some(false)).count();
            #[derive(Serialize)]
            struct Report<'a> {
                max_multiplicity: u32,
                rings: usize,
                simple: usize,
                schur_fail: usize,
                simple_schur_fail: usize,
                raw_solutions: usize,
                records: &'a [crate::search::RingRecord],
            }
            let rep = Report {
                max_multiplicity: *max_mult,
                rings: records.len(),
                simple,
                schur_fail: fail,
                simple_schur_fail: simple_fail,
                raw_solutions: fam.raw_solutions,
                records: &records,
            };
            if *json {
                json_out(out, &rep)?;
            } else {
                say!(out, "max multiplicity {max_mult}: {} rings up to equivalence ({} parameter vectors)", rep.rings, rep.raw_solutions);
                say!(out, "simple {simple}  schur-fail {fail}  simple&schur-fail {simple_fail}");
            }
            Ok(false)
        }
        Command::BialgRank3 { d2, d3, a, mnq, json } => {
            let params = match mnq {
                Some(v) => Rank3Type1Params::from_mnq(v[0], v[1], v[2])?,
                None => Rank3Type1Params::new(d2.unwrap_or(0.0), d3.unwrap_or(0.0), a.unwrap_or(-1.0))?,
            };
            let data = rank3_dual_data(&params)?;
            let schur = rank3_dual_schur(&params)?;
            let b = rank3_type1(&params)?;
            if *json {
                #[derive(Serialize)]
                struct Report<'a> {
                    params: Rank3Type1Params,
                    mu: f64,
                    dual: &'a crate::bialgebra::Rank3DualData,
                    schur: &'a crate::bialgebra::DualSchurReport,
                    fusion: super::frt::FusionJson,
                }
                json_out(out, &Report { params, mu: params.mu(), dual: &data, schur: &schur, fusion: to_json(b.fusion_data()) })?;
            } else {
                say!(out, "d2 {}  d3 {}  a {}  b {}  mu {}", params.d2, params.d3, params.a, params.b(), params.mu());
                write!(out, "{}", serialize_fusion_ring(b.fusion_data())).map_err(io_err)?;
                say!(out, "lambda2 {:.12}  lambda3 {:.12}", data.lambda2, data.lambda3);
                say!(out, "nu2 {:.12}  nu3 {:.12}", data.nu2, data.nu3);
                for (i, q) in data.projections.iter().enumerate() {
                    let c: Vec<String> = q.coeffs.iter().map(|z| format!("{:.12e}", z.re)).collect();
                    say!(out, "Q{} = [{}]", i + 1, c.join(", "));
                }
                let (i, j, k) = schur.worst_triple;
                say!(out, "dual schur: min {:.12e} at ({i}, {j}, {k}); {}", schur.min_value, if schur.holds { "holds" } else { "fails" });
            }
            Ok(!schur.holds)
        }
        Command::IneqSuite { ring, samples } => {
            let fd = load_ring(&ring.ring)?;
            let b = canonical_from_fusion_data(&fd)?;
            let rep = inequality_suite(&b, *samples, cli.seed)?;
            if ring.json {
                json_out(out, &rep)?;
            } else {
                say!(out, "{:<20} {:>8} {:>10} {:>14}  kind", "check", "checks", "violations", "worst slack");
                for r in &rep.results {
                    say!(
                        out,
                        "{:<20} {:>8} {:>10} {:>14.6e}  {}",
                        r.name,
                        r.checks,
                        r.violations,
                        r.worst_slack,
                        if r.theorem_backed { "theorem" } else { "falsifier" }
                    );
                }
            }
            Ok(rep.theorem_violations() > 0)
        }
        Command::Corpus { action } => match action {
            CorpusAction::List { json } => {
                let entries = active_corpus()?;
                if *json {
                    json_out(out, &entries)?;
                } else {
                    for e in &entries {
                        let f = &e.expected;
                        say!(
                            out,
                            "{:<22} rank {:>2}  {:<44} simple {:<5} frob {:<5} schur {:<5} {}",
                            e.id,
                            e.ring.rank(),
                            f.ring_type.as_deref().unwrap_or("non-integral"),
                            f.simple,
                            f.frobenius_type.map_or("-".into(), |b| b.to_string()),
                            f.schur.map_or("-".into(), |b| b.to_string()),
                            f.group.as_deref().unwrap_or("")
                        );
                    }
                }
                Ok(false)
            }
            CorpusAction::Export { id, format, out: dir } => {
                let entries: Vec<_> =
                    if id == "all" { active_corpus()? } else { vec![lookup(id)?] };
                for e in &entries {
                    let (text, ext) = match format {
                        ExportFormat::Frt => (serialize_fusion_ring(&e.ring), "frt"),
                        ExportFormat::Json => {
                            let t = serde_json::to_string_pretty(&to_json(&e.ring))
                                .map_err(|err| Error::NotFound(err.to_string()))?;
                            (t + "\n", "json")
                        }
                    };
                    match dir {
                        Some(d) => {
                            std::fs::create_dir_all(d).map_err(|err| Error::NotFound(format!("{}: {err}", d.display())))?;
                            let path = d.join(format!("{}.{ext}", e.id));
                            std::fs::write(&path, text).map_err(|err| Error::NotFound(format!("{}: {err}", path.display())))?;
                        }
                        None => write!(out, "{text}").map_err(io_err)?,
                    }
                }
                Ok(false)
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("fusionforge").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn verify_corpus_ring() {
        let (code, out, _) = run_capture(&["verify", "psl25"]);
        assert_eq!(code, 0);
        assert!(out.contains("valid fusion ring"));
    }

    #[test]
    fn unknown_id_is_usage_error() {
        let (code, _, err) = run_capture(&["info", "no-such-ring"]);
        assert_eq!(code, 2);
        assert!(err.contains("not found"));
    }

    #[test]
    fn bad_flags_exit_two() {
        assert_eq!(run_capture(&["schur"]).0, 2);
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
    }

    #[test]
    fn schur_gate() {
        let (code, out, _) = run_capture(&["schur", "r7-210-ruledout", "--gate"]);
        assert_eq!(code, 1);
        assert!(out.contains("-1.547619047619"), "{out}");
        assert_eq!(run_capture(&["schur", "r7-210-ruledout"]).0, 0);
        assert_eq!(run_capture(&["schur", "f210", "--gate"]).0, 0);
    }

    #[test]
    fn classify_types_fpdim_60() {
        let (code, out, _) = run_capture(&["classify-types", "--fpdim", "60", "--rank", "5", "--perfect", "--frobenius"]);
        assert_eq!(code, 0);
        assert!(out.contains("[[1,1],[3,2],[4,1],[5,1]]"));
        assert!(out.contains("1 type(s)"), "{out}");
    }

    #[test]
    fn deterministic_output() {
        let a = run_capture(&["ineq-suite", "z4", "--samples", "20", "--seed", "3", "--json"]);
        let b = run_capture(&["ineq-suite", "z4", "--samples", "20", "--seed", "3", "--json"]);
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
    }
}
