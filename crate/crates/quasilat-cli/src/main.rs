//! Command line interface: stably-Cayley classification runs, ad-hoc
//! Tate–Shafarevich computations, and reproduction of every asserted
//! lattice computation.
//!
//! Exit codes: 0 decided/passed, 1 internal failure, 2 invalid input.

mod checks;
mod registry;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use quasilat::classify::{
    classify_with_options, BasisCertificate, ClassifyError, ClassifyOptions, ExceptionalFamily,
    InputFamily, QuotientSpec, SubgroupSide,
};
use quasilat::cohomology::{sha2_with, CohomologyBudget, H2Path, SearchBudget};
use quasilat::rootdata::{Family, RootSystemSpec};

const TOOL_NAME: &str = "quasilat";
const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = TOOL_NAME,
    version,
    about = "Cohomological obstructions for integral lattices and the stably-Cayley classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether H^m/C is stably Cayley from a JSON request.
    Classify(ClassifyArgs),
    /// Compute Sh² and H² of a named or serialized lattice.
    Sha(ShaArgs),
    /// Re-run the asserted lattice computations (a check id or "all").
    VerifyPaper(VerifyArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    /// Input JSON file (see README for the schema).
    #[arg(long)]
    input: PathBuf,
    /// Output JSON report path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Attach a Sh obstruction witness to negative verdicts.
    #[arg(long)]
    sha_witness: bool,
    /// Materialization cap for witness searches.
    #[arg(long, default_value_t = 20_000)]
    max_group_order: usize,
    /// Include wall-clock timings in the report (off by default so that
    /// reports are byte-identical across runs).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
#[command(after_help = "\
LATTICE REFERENCES:
  J:<group>            J lattice (regular mod norm); groups: klein2, z3xz3
  perm:regular-of-S3   regular permutation lattice of S3
  Q:<system>           root lattice, e.g. Q:A2, Q:B3, Q:D3, Q:G2
  P:<system>           weight lattice, e.g. P:D3
  M:<system>           SO character lattice (families B, D), e.g. M:D3
  m-family:<diagram>   half-sum family, e.g. m-family:B1^3, m-family:D3+B1
                       (elements gamma1, gamma2, gamma3 for --subgroup)
  klein-b1             rank-3 even-sum lattice over (Z/2)^3
  so6-family:m=<k>     D3^k family (elements a, b for --subgroup)
  sl3-family:m=<k>[,a=<digits>]   A2^k family with twist vector
  lambda6              A5 weight lattice over S3 x S3
  file:<path>          serialized lattice document (JSON)")]
struct ShaArgs {
    /// Lattice reference (kind:name) or file:path.json.
    #[arg(long)]
    lattice: String,
    /// Act through a named group instead of the lattice's own group
    /// (degrees must match), e.g. --group klein2.
    #[arg(long)]
    group: Option<String>,
    /// Restrict to the subgroup generated by these named elements
    /// (comma separated), e.g. "a,b" for so6-family.
    #[arg(long, value_delimiter = ',')]
    subgroup: Option<Vec<String>>,
    /// H² computation path.
    #[arg(long, value_enum, default_value_t = H2PathArg::Auto)]
    h2_path: H2PathArg,
    /// Group-order budget for the cohomology computation.
    #[arg(long, default_value_t = 512)]
    max_group_order: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check id, or "all".
    #[arg(default_value = "all")]
    check: String,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum H2PathArg {
    Auto,
    Baseline,
    Optimized,
    CrossCheck,
}

impl From<H2PathArg> for H2Path {
    fn from(value: H2PathArg) -> H2Path {
        match value {
            H2PathArg::Auto => H2Path::Auto,
            H2PathArg::Baseline => H2Path::Baseline,
            H2PathArg::Optimized => H2Path::Optimized,
            H2PathArg::CrossCheck => H2Path::CrossCheck,
        }
    }
}

// ---------------------------------------------------------------------------
// classify: input and report documents.

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ClassifyRequest {
    family: String,
    rank: usize,
    m: usize,
    subgroup_side: String,
    generators: Vec<Vec<usize>>,
    #[serde(default)]
    options: RequestOptions,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct RequestOptions {
    #[serde(default)]
    sha_witness: bool,
    #[serde(default)]
    max_group_order: Option<usize>,
}

#[derive(Debug, Serialize)]
struct Report {
    tool: ToolInfo,
    input: ClassifyRequest,
    stably_cayley: bool,
    branch: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    decomposition: Option<Vec<FactorDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis_certificate: Option<BasisCertificateDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    triality_note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sha_witness: Option<ShaWitnessDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings_ms: Option<u128>,
}

#[derive(Debug, Serialize)]
struct ToolInfo {
    name: &'static str,
    version: &'static str,
}

#[derive(Debug, Serialize)]
struct FactorDoc {
    group: String,
    coords: Vec<usize>,
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum BasisCertificateDoc {
    Coordinate { index_set: Vec<usize> },
    AlmostCoordinate {
        singles: Vec<usize>,
        pairs: Vec<(usize, usize)>,
    },
}

#[derive(Debug, Serialize)]
struct ShaWitnessDoc {
    found: bool,
    subgroup_order: usize,
    sha: String,
    subgroups_examined: usize,
    budget_exhausted: bool,
}

fn parse_input_family(family: &str, rank: usize) -> Result<InputFamily, String> {
    let fam = match family {
        "A" => Family::A,
        "B" => Family::B,
        "C" => Family::C,
        "D" => Family::D,
        "G2" => Family::G2,
        "E6" => return Ok(InputFamily::Exceptional(ExceptionalFamily::E6)),
        "E7" => return Ok(InputFamily::Exceptional(ExceptionalFamily::E7)),
        "E8" => return Ok(InputFamily::Exceptional(ExceptionalFamily::E8)),
        "F4" => return Ok(InputFamily::Exceptional(ExceptionalFamily::F4)),
        other => return Err(format!("unknown family {other:?} (at .family)")),
    };
    RootSystemSpec::new(fam, rank)
        .map(InputFamily::Root)
        .map_err(|e| format!("{e} (at .rank)"))
}

fn run_classify(args: &ClassifyArgs) -> Result<ExitCode, String> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| format!("cannot read {}: {e}", args.input.display()))?;
    let request: ClassifyRequest =
        serde_json::from_str(&text).map_err(|e| format!("invalid input document: {e}"))?;

    if request.m == 0 {
        return Err("m must be >= 1 (at .m)".to_string());
    }
    let root = parse_input_family(&request.family, request.rank)?;
    let side = match request.subgroup_side.as_str() {
        "character" => SubgroupSide::Character,
        "center" => SubgroupSide::Center,
        other => {
            return Err(format!(
                "subgroup_side must be \"character\" or \"center\", got {other:?} \
                 (at .subgroup_side)"
            ))
        }
    };
    let spec = QuotientSpec {
        root,
        m: request.m,
        side,
        generators: request.generators.clone(),
    };
    let mut opts = ClassifyOptions {
        sha_witness: args.sha_witness || request.options.sha_witness,
        search_budget: SearchBudget::default(),
    };
    let cap = request
        .options
        .max_group_order
        .unwrap_or(args.max_group_order);
    opts.search_budget.max_group_order = cap;

    let started = Instant::now();
    let verdict = match classify_with_options(&spec, &opts) {
        Ok(v) => v,
        Err(ClassifyError::InvalidSpec(msg)) => return Err(msg),
        Err(ClassifyError::RootData(e)) => {
            return Err(format!("{e} (at .generators)"))
        }
        Err(e) => {
            eprintln!("internal failure: {e}");
            return Ok(ExitCode::from(1));
        }
    };
    let elapsed = started.elapsed().as_millis();

    let report = Report {
        tool: ToolInfo {
            name: TOOL_NAME,
            version: TOOL_VERSION,
        },
        input: request,
        stably_cayley: verdict.stably_cayley,
        branch: verdict.witness.branch.to_string(),
        decomposition: verdict.decomposition.map(|fs| {
            fs.into_iter()
                .map(|f| FactorDoc {
                    group: f.group,
                    coords: f.coords,
                })
                .collect()
        }),
        basis_certificate: verdict.basis_certificate.map(|c| match c {
            BasisCertificate::Coordinate(i) => BasisCertificateDoc::Coordinate {
                index_set: i.iter().map(|x| x + 1).collect(),
            },
            BasisCertificate::AlmostCoordinate(b) => BasisCertificateDoc::AlmostCoordinate {
                singles: b.singles.iter().map(|x| x + 1).collect(),
                pairs: b.pairs.iter().map(|&(j, h)| (j + 1, h + 1)).collect(),
            },
        }),
        triality_note: verdict.witness.triality_note,
        sha_witness: verdict.witness.sha.map(|w| ShaWitnessDoc {
            found: w.subgroup_order > 0,
            subgroup_order: w.subgroup_order,
            sha: w.sha.to_string(),
            subgroups_examined: w.subgroups_examined,
            budget_exhausted: w.budget_exhausted,
        }),
        timings_ms: args.timings.then_some(elapsed),
    };
    let rendered = serde_json::to_string_pretty(&report).expect("report serializes");
    match &args.output {
        Some(path) => std::fs::write(path, rendered.as_bytes())
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => println!("{rendered}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_sha(args: &ShaArgs) -> anyhow::Result<ExitCode> {
    let resolved = registry::resolve_lattice(&args.lattice)?;
    let mut lattice = match &args.subgroup {
        Some(names) => registry::restrict_to_named_subgroup(&resolved, names)?,
        None => resolved.lattice.clone(),
    };
    if let Some(name) = &args.group {
        let group = registry::named_group(name)?;
        lattice = registry::act_through_group(&lattice, group)?;
    }
    let group = lattice.group().clone();
    let budget = CohomologyBudget {
        max_group_order: args.max_group_order,
        ..CohomologyBudget::default()
    };
    let result = match sha2_with(&group, &lattice, args.h2_path.into(), &budget) {
        Ok(r) => r,
        Err(quasilat::cohomology::CohomologyError::BudgetExceeded { what, rows, cols }) => {
            eprintln!("budget exceeded at {what}: required {rows}x{cols}");
            return Ok(ExitCode::from(1));
        }
        Err(e) => return Err(e.into()),
    };
    println!("lattice: {}", resolved.description);
    println!("group order: {}", group.order()?);
    println!("H^2 = {}", result.ambient_h2);
    println!("Sh = {}", result.sha);
    println!("cyclic subgroups audited: {}", result.per_cyclic_kernels.len());
    for audit in &result.per_cyclic_kernels {
        println!(
            "  order {:>3}  H^2(C, L) = {}",
            audit.order, audit.target
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn run_verify(args: &VerifyArgs) -> ExitCode {
    let checks = checks::all_checks();
    let selected: Vec<&checks::Check> = if args.check == "all" {
        checks.iter().collect()
    } else {
        let hit: Vec<&checks::Check> =
            checks.iter().filter(|c| c.id == args.check).collect();
        if hit.is_empty() {
            eprintln!("unknown check id {:?}; available:", args.check);
            for c in &checks {
                eprintln!("  {:<24} {}", c.id, c.description);
            }
            return ExitCode::from(2);
        }
        hit
    };

    let mut failures = 0usize;
    for check in selected {
        let started = Instant::now();
        let outcome = (check.run)();
        let elapsed = started.elapsed();
        match outcome {
            Ok(()) => {
                println!(
                    "PASS  {:<24} {:>8.2?}  {}",
                    check.id, elapsed, check.description
                );
            }
            Err(e) => {
                failures += 1;
                println!(
                    "FAIL  {:<24} {:>8.2?}  {}: {e}",
                    check.id, elapsed, check.description
                );
            }
        }
        let _ = std::io::stdout().flush();
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        eprintln!("{failures} check(s) failed");
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Classify(args) => match run_classify(&args) {
            Ok(code) => code,
            Err(msg) => {
                eprintln!("input error: {msg}");
                ExitCode::from(2)
            }
        },
        Command::Sha(args) => match run_sha(&args) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Command::VerifyPaper(args) => run_verify(&args),
    }
}
