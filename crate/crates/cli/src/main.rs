use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rbq_core::catalog::{
    soundness_sweep, sweedler_correspondence_check, symbolic_failures, verify_family_symbolic, Catalog, FamilyMatch,
    FamilyVerification, SoundnessReport, SweedlerReport,
};
use rbq_core::exactmath::{parse_ratfunc, parse_rational, Rational};
use rbq_core::operator::{
    compare_with_transcription, generate_system, Corpus, CorpusKind, MatrixJson, RbVerdict, TranscriptionDiff,
    WeightMode,
};
use rbq_core::search::{
    configured_budget, grid_search_with_budget, random_probe, GridSpec, SearchReport, SUPPORT_FULL,
    SUPPORT_ROWS123_COLS234, SUPPORT_ROWS34_COLS12,
};

#[derive(Parser)]
#[command(name = "rbq", version, about = "Rota-Baxter operators on split semi-quaternions")]
struct Cli {
    /// Print machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether a matrix file describes a Rota-Baxter operator.
    Verify {
        matrix: PathBuf,
        /// Weight, overriding the file's "lambda".
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// Print the generated polynomial system.
    System {
        #[arg(long, value_enum, default_value = "zero")]
        mode: Mode,
        /// Compare with the transcribed equation list.
        #[arg(long)]
        diff: bool,
        /// Transcription file to compare with instead of the shipped one.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Inspect and verify the family catalog.
    Catalog(CatalogArgs),
    /// Exhaustive grid search or seeded random probe.
    Search(SearchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Zero,
    Lambda,
}

impl Mode {
    fn weight(self) -> WeightMode {
        match self {
            Mode::Zero => WeightMode::Zero,
            Mode::Lambda => WeightMode::SymbolicLambda,
        }
    }
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(value_enum)]
    action: CatalogAction,
    /// Catalog files to use instead of the shipped ones.
    #[arg(long = "file")]
    files: Vec<PathBuf>,
    /// Restrict `list` to one weight class.
    #[arg(long, value_enum)]
    weight: Option<Mode>,
    /// Random points per family for the numeric sweep of `verify`.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum CatalogAction {
    List,
    Verify,
    Sweedler,
}

#[derive(Args)]
struct SearchArgs {
    /// Comma-separated grid values, e.g. -1,0,1 or -1/2,0,1/2.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "probe")]
    grid: Option<String>,
    /// full, rows34cols12, rows123cols234, or a 16-bit mask such as 0x3300 (bit 4r+c).
    #[arg(long)]
    support: Option<String>,
    /// Same as --support full.
    #[arg(long, conflicts_with = "support")]
    full: bool,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    lambda: String,
    /// Random probe instead of a grid.
    #[arg(long)]
    probe: bool,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Include wall time in JSON output.
    #[arg(long)]
    timing: bool,
}

/// Exit statuses: 0 all checks passed, 1 a mathematical check failed, 2 bad input.
#[derive(Debug)]
enum Failure {
    Check,
    Input(String),
}

type Outcome = Result<(), Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify { matrix, lambda } => cmd_verify(&matrix, lambda.as_deref(), cli.json),
        Command::System { mode, diff, corpus } => cmd_system(mode, diff, corpus, cli.json),
        Command::Catalog(args) => cmd_catalog(&args, cli.json),
        Command::Search(args) => cmd_search(&args, cli.json),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn verdict(passed: bool) -> Outcome {
    if passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

#[derive(Serialize)]
struct Witness {
    pair: (usize, usize),
    defect: String,
}

#[derive(Serialize)]
struct VerifyOutput {
    lambda: String,
    rota_baxter: bool,
    witness: Option<Witness>,
    /// Nonzero cleared numerators, for matrices with symbolic entries.
    failing_numerators: usize,
    matches: Vec<FamilyMatch>,
}

fn cmd_verify(path: &PathBuf, lambda: Option<&str>, json: bool) -> Outcome {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    let mut m = MatrixJson::from_json_str(&text).map_err(input)?.to_matrix().map_err(input)?;
    if let Some(s) = lambda {
        m = m.with_weight(parse_ratfunc(s).map_err(|e| input(format!("--lambda: {e}")))?);
    }
    let out = match m.to_rational() {
        Some(p) => {
            let (rota_baxter, witness) = match p.is_rota_baxter() {
                RbVerdict::Holds => (true, None),
                RbVerdict::Fails { pair, defect } => (
                    false,
                    Some(Witness {
                        pair,
                        defect: defect.to_string(),
                    }),
                ),
            };
            VerifyOutput {
                lambda: p.weight().to_string(),
                rota_baxter,
                witness,
                failing_numerators: 0,
                matches: Catalog::shipped().match_membership(&p),
            }
        }
        None => {
            let failing = symbolic_failures(&m);
            VerifyOutput {
                lambda: m.weight().to_string(),
                rota_baxter: failing.is_empty(),
                witness: failing.first().map(|f| Witness {
                    pair: f.pair,
                    defect: format!("coordinate {} numerator {}", f.coord, f.numerator),
                }),
                failing_numerators: failing.len(),
                matches: Vec::new(),
            }
        }
    };
    if json {
        print_json(&out);
    } else {
        println!("{m}");
        if out.rota_baxter {
            println!("Rota-Baxter of weight {}", out.lambda);
        } else {
            let w = out.witness.as_ref().expect("failure has a witness");
            println!("NOT Rota-Baxter: defect at (e{}, e{}) = {}", w.pair.0, w.pair.1, w.defect);
        }
        for fm in &out.matches {
            let params: Vec<String> = fm.assignment.iter().map(|(k, v)| format!("{k}={v}")).collect();
            println!("member of {} with {}", fm.family, params.join(", "));
        }
    }
    verdict(out.rota_baxter)
}

#[derive(Serialize)]
struct SystemOutput {
    mode: WeightMode,
    count: usize,
    polynomials: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diff: Option<TranscriptionDiff>,
}

fn cmd_system(mode: Mode, diff: bool, corpus: Option<PathBuf>, json: bool) -> Outcome {
    let kind = match mode {
        Mode::Zero => CorpusKind::A,
        Mode::Lambda => CorpusKind::B,
    };
    let corpus = match corpus {
        Some(p) => Some(Corpus::load(kind, &p).map_err(input)?),
        None => diff.then(|| Corpus::shipped(kind)),
    };
    let system = generate_system(mode.weight());
    let report = corpus.as_ref().map(|c| compare_with_transcription(&system, c));
    let out = SystemOutput {
        mode: mode.weight(),
        count: system.len(),
        polynomials: system.polys().iter().map(|p| p.poly.to_string()).collect(),
        diff: report,
    };
    if json {
        print_json(&out);
    } else {
        for p in &out.polynomials {
            println!("{p} = 0");
        }
        if let Some(d) = &out.diff {
            println!();
            println!("{}/{} matched (corpus equations)", d.corpus_matched(), d.corpus_equations);
            println!(
                "{}/{} matched (generated polynomials)",
                d.generated_polys - d.generated_unmatched.len(),
                d.generated_polys
            );
            for s in &d.substitutions {
                println!("{} typo substitution applied: {} -> {} ({} becomes {})", s.label, s.from, s.to, s.before, s.after);
            }
            for u in &d.corpus_unmatched {
                println!("unmatched corpus equation {} (line {}): {}", u.label, u.line, u.poly);
            }
            for g in &d.generated_unmatched {
                println!("unmatched generated polynomial: {g}");
            }
        }
    }
    verdict(out.diff.as_ref().is_none_or(TranscriptionDiff::is_empty))
}

fn load_catalog(files: &[PathBuf]) -> Result<std::borrow::Cow<'static, Catalog>, Failure> {
    if files.is_empty() {
        return Ok(std::borrow::Cow::Borrowed(Catalog::shipped()));
    }
    let mut text = String::new();
    for f in files {
        text.push_str(&std::fs::read_to_string(f).map_err(|e| input(format!("{}: {e}", f.display())))?);
        text.push('\n');
    }
    Ok(std::borrow::Cow::Owned(Catalog::parse(&text).map_err(input)?))
}

#[derive(Serialize)]
struct ListedFamily {
    id: String,
    weight: WeightMode,
    params: Vec<String>,
    constraints: Vec<String>,
    entries: [[String; 4]; 4],
}

#[derive(Serialize)]
struct CatalogVerifyOutput {
    passed: bool,
    symbolic: Vec<FamilyVerification>,
    numeric: Vec<SoundnessReport>,
}

fn cmd_catalog(args: &CatalogArgs, json: bool) -> Outcome {
    let catalog = load_catalog(&args.files)?;
    match args.action {
        CatalogAction::List => {
            let families: Vec<ListedFamily> = catalog
                .families()
                .iter()
                .filter(|f| args.weight.is_none_or(|w| w.weight() == f.weight))
                .map(|f| ListedFamily {
                    id: f.id.clone(),
                    weight: f.weight,
                    params: f.params.clone(),
                    constraints: f.constraints.iter().map(|c| format!("{c} != 0")).collect(),
                    entries: std::array::from_fn(|r| std::array::from_fn(|c| f.entries[r][c].to_string())),
                })
                .collect();
            if json {
                print_json(&families);
            } else {
                for (label, w) in [("weight-zero", WeightMode::Zero), ("weight-lambda", WeightMode::SymbolicLambda)] {
                    let group: Vec<&ListedFamily> = families.iter().filter(|f| f.weight == w).collect();
                    if group.is_empty() {
                        continue;
                    }
                    println!("{} {label} families", group.len());
                    for f in group {
                        let constraints = if f.constraints.is_empty() {
                            String::new()
                        } else {
                            format!("  [{}]", f.constraints.join(", "))
                        };
                        println!("  {:<6} params ({}){constraints}", f.id, f.params.join(", "));
                    }
                }
            }
            Ok(())
        }
        CatalogAction::Verify => {
            let symbolic: Vec<FamilyVerification> = catalog.families().iter().map(verify_family_symbolic).collect();
            let numeric: Vec<SoundnessReport> = catalog
                .families()
                .iter()
                .enumerate()
                .map(|(n, f)| soundness_sweep(f, args.samples, args.seed.wrapping_add(n as u64)))
                .collect();
            let passed = symbolic.iter().all(|v| v.passed) && numeric.iter().all(|r| r.passed());
            let out = CatalogVerifyOutput { passed, symbolic, numeric };
            if json {
                print_json(&out);
            } else {
                for (v, r) in out.symbolic.iter().zip(&out.numeric) {
                    println!(
                        "{:<6} symbolic {}  numeric {}/{}",
                        v.family,
                        if v.passed { "ok" } else { "FAIL" },
                        r.samples - r.failures.len(),
                        r.samples
                    );
                    for f in &v.failing {
                        println!("    (e{}, e{}) coordinate {}: {}", f.pair.0, f.pair.1, f.coord, f.numerator);
                    }
                }
                let failing: usize = out.symbolic.iter().map(|v| v.failing.len()).sum();
                println!("{} families, {failing} failing numerators", out.symbolic.len());
            }
            verdict(out.passed)
        }
        CatalogAction::Sweedler => {
            let report: SweedlerReport = sweedler_correspondence_check();
            if json {
                print_json(&report);
            } else {
                println!(
                    "relations g^2 = 1, nu^2 = 0, g nu + nu g = 0: {}",
                    if report.relations_hold { "hold" } else { "FAIL" }
                );
                for e in &report.entries {
                    let subst: Vec<String> = e.substitution.iter().map(|(k, v)| format!("{k} -> {v}")).collect();
                    let kind = match e.kind {
                        Some(k) => serde_json::to_value(k).expect("kind serializes").as_str().unwrap_or("").to_string(),
                        None => "unmatched".into(),
                    };
                    println!(
                        "({}) defect {}  {} {}  {}",
                        e.number,
                        if e.holds { "0" } else { "NONZERO" },
                        e.family.as_deref().unwrap_or("-"),
                        kind,
                        subst.join(", ")
                    );
                    if let Some(c) = &e.correction {
                        println!(
                            "    as displayed the defect is nonzero ({} numerators); entry ({}, {}) read as {} instead of {}",
                            e.displayed_failures.len(),
                            c.row,
                            c.col,
                            c.corrected,
                            c.displayed
                        );
                    }
                }
            }
            verdict(report.passed())
        }
    }
}

fn parse_support(s: &str) -> Result<u16, Failure> {
    match s {
        "full" => Ok(SUPPORT_FULL),
        "rows34cols12" => Ok(SUPPORT_ROWS34_COLS12),
        "rows123cols234" => Ok(SUPPORT_ROWS123_COLS234),
        _ => {
            let hex = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X"));
            match hex {
                Some(h) => u16::from_str_radix(h, 16).map_err(|_| input(format!("bad support mask {s:?}"))),
                None => Err(input(format!("unknown support {s:?}"))),
            }
        }
    }
}

#[derive(Serialize)]
struct TimedReport<'a> {
    #[serde(flatten)]
    report: &'a SearchReport,
    elapsed_ms: u128,
}

fn cmd_search(args: &SearchArgs, json: bool) -> Outcome {
    let lambda: Rational = parse_rational(&args.lambda).map_err(|e| input(format!("--lambda: {e}")))?;
    let report = if args.probe {
        random_probe(&lambda, args.trials, args.seed).map_err(input)?
    } else {
        let grid = args.grid.as_deref().ok_or_else(|| input("either --grid or --probe is required"))?;
        let values = grid
            .split(',')
            .map(|v| parse_rational(v.trim()).map_err(|e| input(format!("--grid value {v:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let support = if args.full {
            SUPPORT_FULL
        } else {
            args.support.as_deref().map_or(Ok(SUPPORT_FULL), parse_support)?
        };
        let budget = configured_budget().map_err(input)?;
        grid_search_with_budget(&GridSpec::new(values, support, lambda), budget).map_err(input)?
    };
    if json {
        if args.timing {
            print_json(&TimedReport {
                report: &report,
                elapsed_ms: report.elapsed.as_millis(),
            });
        } else {
            print_json(&report);
        }
    } else {
        println!("lambda = {}", report.lambda);
        println!("candidates tested: {}", report.candidates_tested);
        println!("hits: {}", report.hits.len());
        println!("unmatched hits: {}", report.unmatched_hits.len());
        if let Some(s) = &report.instantiation {
            println!("catalog instances verified: {}/{}", s.verified, s.trials);
            println!("catalog instances recovered: {}/{}", s.matched, s.trials);
        }
        for u in &report.unmatched_hits {
            println!("unmatched: {}", serde_json::to_string(u).expect("matrix serializes"));
        }
        println!("elapsed: {:.3} s", report.elapsed.as_secs_f64());
    }
    verdict(report.passed())
}
