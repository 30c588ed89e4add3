use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use handleweave::families::{build_surface, words, Family, FamilyError, FamilyInstance};
use handleweave::freegroup::Word;
use handleweave::report::{budget_from_env, verify, ReportError, VerificationReport, VerifyOptions, DEFAULT_S_MAX};
use handleweave::svg::chord_diagram;

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "handleweave", version, about = "Disk-with-bands surfaces in the genus-two handlebody")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the generator images, one canonical word per line.
    Words(InstanceArgs),
    /// Run the full pipeline on one instance.
    Verify(VerifyArgs),
    /// Verify a grid of instances.
    Sweep(SweepArgs),
    /// Write the band-end chord diagram as SVG.
    Diagram(DiagramArgs),
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[arg(long)]
    primed: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value_t = DEFAULT_S_MAX as u64, value_parser = clap::value_parser!(u64).range(1..))]
    s_max: u64,
    /// Emit the JSON report instead of a summary.
    #[arg(long)]
    json: bool,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace the family's words with the words in this file, one per line.
    #[arg(long)]
    words_file: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated family names, or `all`.
    #[arg(long, default_value = "all")]
    families: String,
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    #[arg(long, default_value_t = 6)]
    n_max: usize,
    #[arg(long, default_value_t = 0)]
    k_min: usize,
    #[arg(long, default_value_t = 4)]
    k_max: usize,
    /// Keep invalid parameter combinations as error rows.
    #[arg(long)]
    all_combos: bool,
    #[arg(long, default_value_t = DEFAULT_S_MAX as u64, value_parser = clap::value_parser!(u64).range(1..))]
    s_max: u64,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiagramArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: EXIT_INPUT, message: message.to_string() }
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        let code = match e {
            ReportError::BudgetExceeded { .. } => EXIT_BUDGET,
            ReportError::Family(FamilyError::InvalidInstance(_)) | ReportError::BadBudget(_) => EXIT_INPUT,
            _ => EXIT_FAIL,
        };
        Failure { code, message: e.to_string() }
    }
}

impl InstanceArgs {
    fn instance(&self) -> Result<FamilyInstance, Failure> {
        let family: Family = self.family.parse().map_err(Failure::input)?;
        let inst = FamilyInstance::new(family, self.n, self.k, self.primed);
        inst.validate().map_err(Failure::input)?;
        Ok(inst)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_words(path: &Path) -> Result<Vec<Word>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let words: Vec<Word> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .enumerate()
        .map(|(i, l)| Word::parse(l, 2).map_err(|e| Failure::input(format!("{}: word {}: {e}", path.display(), i + 1))))
        .collect::<Result<_, _>>()?;
    if words.is_empty() {
        return Err(Failure::input(format!("{}: no words", path.display())));
    }
    Ok(words)
}

fn summary(r: &VerificationReport) -> String {
    let inv = &r.invariants;
    let shape = match (inv.genus, inv.crosscap_number) {
        (Some(g), _) => format!("orientable, genus {g}"),
        (None, Some(c)) => format!("non-orientable, crosscap number {c}"),
        (None, None) => "unclassified".to_string(),
    };
    let hyp = match &r.criteria.hypotheses {
        handleweave::report::HypothesisVerdict::Pass => "pass".to_string(),
        handleweave::report::HypothesisVerdict::Fail(v) => format!("fail ({v})"),
    };
    let en = &r.criteria.enumeration;
    let trivial = match &en.counterexample {
        None => "none".to_string(),
        Some(p) => p.to_string(),
    };
    format!(
        "instance:        {}\n\
         surface:         {shape}, {} boundary components, euler characteristic {}\n\
         expected:        genus/crosscap {}, {} boundary components\n\
         counts match:    {}\n\
         hypotheses:      {hyp}\n\
         enumeration:     {} products up to {} factors, trivial product: {trivial}, shortest by length {:?}\n\
         oracle:          rank {} for {} words, injective {}\n\
         overall:         {}\n",
        r.instance,
        inv.boundary_components,
        inv.euler_characteristic,
        r.expected.genus_or_crosscap,
        r.expected.boundary,
        r.counts_match,
        en.expressions_checked,
        en.s_max,
        en.min_reduced_length_by_s,
        r.oracle.rank,
        r.oracle.words,
        r.oracle.injective,
        if r.passed() { "pass" } else { "fail" },
    )
}

fn cmd_words(args: &InstanceArgs) -> Result<u8, Failure> {
    let inst = args.instance()?;
    let ws = words(&inst).map_err(Failure::input)?;
    for w in ws {
        println!("{w}");
    }
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let inst = args.instance.instance()?;
    let opts = VerifyOptions {
        s_max: args.s_max as usize,
        budget: budget_from_env()?,
        words: args.words_file.as_deref().map(read_words).transpose()?,
    };
    let report = verify(&inst, &opts)?;
    let text = if args.json {
        report.to_json() + "\n"
    } else {
        summary(&report)
    };
    emit(args.out.as_deref(), &text)?;
    Ok(if report.passed() { 0 } else { EXIT_FAIL })
}

enum RowOutcome {
    Done(Box<VerificationReport>),
    Error { budget: bool, message: String },
}

fn sweep_instances(args: &SweepArgs) -> Result<Vec<FamilyInstance>, Failure> {
    let families: Vec<Family> = if args.families.trim().eq_ignore_ascii_case("all") {
        Family::ALL.to_vec()
    } else {
        args.families
            .split(',')
            .map(|f| f.parse().map_err(Failure::input))
            .collect::<Result<_, _>>()?
    };
    let mut out = Vec::new();
    for family in families {
        for n in args.n_min..=args.n_max {
            for k in args.k_min..=args.k_max {
                for primed in [false, true] {
                    if primed && !family.is_separating() {
                        continue;
                    }
                    let inst = FamilyInstance::new(family, n, k, primed);
                    if args.all_combos || inst.validate().is_ok() {
                        out.push(inst);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn cmd_sweep(args: &SweepArgs) -> Result<u8, Failure> {
    let opts = VerifyOptions {
        s_max: args.s_max as usize,
        budget: budget_from_env()?,
        words: None,
    };
    let instances = sweep_instances(args)?;
    let rows: Vec<(FamilyInstance, RowOutcome)> = instances
        .par_iter()
        .map(|inst| {
            let outcome = match verify(inst, &opts) {
                Ok(r) => RowOutcome::Done(Box::new(r)),
                Err(e) => RowOutcome::Error {
                    budget: matches!(e, ReportError::BudgetExceeded { .. }),
                    message: e.to_string(),
                },
            };
            (*inst, outcome)
        })
        .collect();

    let mut code = 0;
    let mut budget_hit = false;
    for (_, outcome) in &rows {
        match outcome {
            RowOutcome::Done(r) if r.passed() => {}
            RowOutcome::Error { budget: true, .. } => budget_hit = true,
            _ => code = EXIT_FAIL,
        }
    }
    if code == 0 && budget_hit {
        code = EXIT_BUDGET;
    }

    let text = if args.json {
        let values: Vec<Value> = rows
            .iter()
            .map(|(inst, outcome)| match outcome {
                RowOutcome::Done(r) => json!({
                    "instance": inst,
                    "orientable": r.invariants.orientable,
                    "genus_or_crosscap": r.invariants.genus_or_crosscap(),
                    "boundary": r.invariants.boundary_components,
                    "rank": r.oracle.rank,
                    "counts_match": r.counts_match,
                    "hypotheses": r.criteria.hypotheses.passed(),
                    "no_trivial_product": r.criteria.enumeration.no_trivial_product(),
                    "injective": r.oracle.injective,
                    "overall": r.overall,
                }),
                RowOutcome::Error { budget, message } => json!({
                    "instance": inst,
                    "overall": if *budget { "budget_exceeded" } else { "error" },
                    "error": message,
                }),
            })
            .collect();
        serde_json::to_string_pretty(&values).expect("rows serialise") + "\n"
    } else {
        let mut t = String::from(
            "family\tn\tk\tprimed\torientable\tgenus_or_crosscap\tboundary\trank\tcounts_match\thypotheses\tno_trivial_product\tinjective\toverall\n",
        );
        for (inst, outcome) in &rows {
            let head = format!("{}\t{}\t{}\t{}", inst.family, inst.n, inst.k, inst.primed);
            let line = match outcome {
                RowOutcome::Done(r) => format!(
                    "{head}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    r.invariants.orientable,
                    r.invariants.genus_or_crosscap(),
                    r.invariants.boundary_components,
                    r.oracle.rank,
                    r.counts_match,
                    r.criteria.hypotheses.passed(),
                    r.criteria.enumeration.no_trivial_product(),
                    r.oracle.injective,
                    if r.passed() { "pass" } else { "fail" },
                ),
                RowOutcome::Error { budget, message } => {
                    let status = if *budget { "budget_exceeded" } else { "error" };
                    format!("{head}\t-\t-\t-\t-\t-\t-\t-\t-\t{status}: {message}\n")
                }
            };
            t.push_str(&line);
        }
        t
    };
    emit(args.out.as_deref(), &text)?;
    Ok(code)
}

fn cmd_diagram(args: &DiagramArgs) -> Result<u8, Failure> {
    let inst = args.instance.instance()?;
    let built = build_surface(&inst).map_err(|e| Failure { code: EXIT_FAIL, message: e.to_string() })?;
    emit(args.out.as_deref(), &chord_diagram(&built))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Words(a) => cmd_words(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Diagram(a) => cmd_diagram(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("handleweave: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
