//! `mompoly` — counting, fitting, and verification frontend.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource
//! budget exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use mompoly_core::bijection::verify_bijectivity;
use mompoly_core::cache::{CacheKey, CountCache};
use mompoly_core::pattern::{count_naive, DEFAULT_NODE_BUDGET};
use mompoly_core::polytope::{
    dilated_unitary_witness, find_nondividing_t, symplectic_half_witness, unitary_half_witness,
    verify_vertex_witness,
};
use mompoly_core::reference::{golden, keating_snaith};
use mompoly_core::transfer::{count_dp, DEFAULT_STATE_BUDGET};
use mompoly_core::verify::{
    fit_polynomial, polynomial_report, verify_integer_roots, verify_polynomiality,
    verify_reciprocity, verify_symmetry, VerdictReport,
};
use mompoly_core::{Error, FamilySpec, Group};

const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "mompoly", version, about = "Exact pattern counting and polynomial verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count family members at one dilation or a table of dilations
    Count(CountArgs),
    /// Fit the counting polynomial and report its coefficients
    Fit(FitArgs),
    /// Check a structural claim and report a verdict
    Verify(VerifyArgs),
    /// Print published closed forms for a family
    Reference(ReferenceArgs),
}

#[derive(Args)]
struct FamilyArgs {
    /// Group: u (unitary) or sp (symplectic)
    #[arg(long)]
    group: String,
    #[arg(short)]
    k: u32,
    #[arg(short)]
    q: u32,
}

impl FamilyArgs {
    fn spec(&self) -> Result<FamilySpec, Error> {
        FamilySpec::new(Group::from_tag(&self.group)?, self.k, self.q)
    }
}

#[derive(Args)]
struct BudgetArgs {
    /// Backtracking node budget for the naive engine
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget_nodes: u64,
    /// Live-state budget per layer for the DP engine
    #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
    budget_states: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Naive,
    Dp,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Single dilation to count
    #[arg(short = 'N')]
    n: Option<i64>,
    /// Count all dilations 0..=n-max instead
    #[arg(long, conflicts_with = "n")]
    n_max: Option<i64>,
    /// Count the strict family
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value_t = Engine::Dp)]
    engine: Engine,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Count cache file (append-only; defaults to $MOMPOLY_CACHE)
    #[arg(long, env = "MOMPOLY_CACHE")]
    cache: Option<PathBuf>,
    #[command(flatten)]
    budgets: BudgetArgs,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Extra nodes beyond the fitting range checked against fresh counts
    #[arg(long, default_value_t = 2)]
    extra: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    budgets: BudgetArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Claim {
    Roots,
    Symmetry,
    Reciprocity,
    Bijection,
    Vertex,
    Polynomiality,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which structural claim to check
    #[arg(value_enum)]
    claim: Claim,
    #[command(flatten)]
    family: FamilyArgs,
    /// Dilation for the bijection check
    #[arg(short = 'N')]
    n: Option<i64>,
    /// Upper dilation for the reciprocity sweep (default: degree + 2)
    #[arg(long)]
    n_max: Option<i64>,
    /// Extra nodes for the polynomiality check
    #[arg(long, default_value_t = 2)]
    extra: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    budgets: BudgetArgs,
}

#[derive(Args)]
struct ReferenceArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Count(args) => cmd_count(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Reference(args) => cmd_reference(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::NodeBudget { .. } | Error::StateBudget { .. } | Error::PointBudget { .. } => {
                    EXIT_BUDGET
                }
                _ => EXIT_USAGE,
            };
            ExitCode::from(code)
        }
    }
}

#[derive(Serialize)]
struct CountRow {
    #[serde(rename = "N")]
    n: i64,
    count: String,
}

#[derive(Serialize)]
struct CountTableReport {
    group: String,
    k: u32,
    q: u32,
    strict: bool,
    engine: String,
    counts: Vec<CountRow>,
}

fn cmd_count(args: CountArgs) -> Result<u8, Error> {
    let spec = args.family.spec()?;
    let range: Vec<i64> = match (args.n, args.n_max) {
        (Some(n), None) => vec![n],
        (None, Some(m)) => (0..=m).collect(),
        (None, None) => return Err(Error::Input("one of -N or --n-max is required".into())),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let mut cache = match &args.cache {
        Some(path) => {
            let c = CountCache::load(path)?;
            for w in &c.warnings {
                eprintln!("warning: {w}");
            }
            Some(c)
        }
        None => None,
    };

    let mut rows = Vec::with_capacity(range.len());
    for &n in &range {
        let key = CacheKey::new(&spec, n, args.strict);
        let cached = cache.as_ref().and_then(|c| c.get(&key).cloned());
        let count: BigInt = match args.engine {
            Engine::Both => {
                let dp = count_dp(&spec, n, args.strict, args.budgets.budget_states)?;
                let naive = count_naive(&spec, n, args.strict, args.budgets.budget_nodes)?;
                if dp != naive {
                    eprintln!(
                        "engine mismatch at {spec} N={n} strict={}: dp={dp} naive={naive}",
                        args.strict
                    );
                    return Ok(EXIT_VERIFY_FAIL);
                }
                if let Some(c) = &cached {
                    if *c != dp {
                        eprintln!("cache mismatch at {spec} N={n}: cached={c} computed={dp}");
                        return Ok(EXIT_VERIFY_FAIL);
                    }
                }
                dp
            }
            _ if cached.is_some() => cached.unwrap(),
            Engine::Dp => count_dp(&spec, n, args.strict, args.budgets.budget_states)?,
            Engine::Naive => count_naive(&spec, n, args.strict, args.budgets.budget_nodes)?,
        };
        if let Some(c) = cache.as_mut() {
            if c.get(&key).is_none() {
                c.put(key, count.clone())?;
            }
        }
        rows.push(CountRow { n, count: count.to_string() });
    }

    match args.format {
        Format::Text => {
            for row in &rows {
                if range.len() == 1 {
                    println!("{}", row.count);
                } else {
                    println!("{} {}", row.n, row.count);
                }
            }
        }
        Format::Csv => {
            println!("N,count");
            for row in &rows {
                println!("{},{}", row.n, row.count);
            }
        }
        Format::Json => {
            let engine = match args.engine {
                Engine::Naive => "naive",
                Engine::Dp => "dp",
                Engine::Both => "both",
            };
            let report = CountTableReport {
                group: spec.group.tag().into(),
                k: spec.k,
                q: spec.q,
                strict: args.strict,
                engine: engine.into(),
                counts: rows,
            };
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct FitOutput {
    #[serde(flatten)]
    polynomial: mompoly_core::verify::PolynomialReport,
    polynomiality: VerdictReport,
}

fn cmd_fit(args: FitArgs) -> Result<u8, Error> {
    if args.format == Format::Csv {
        return Err(Error::Input("csv output is only available for count tables".into()));
    }
    let spec = args.family.spec()?;
    let poly = fit_polynomial(&spec, args.budgets.budget_states)?;
    let verdict = verify_polynomiality(&spec, args.extra, args.budgets.budget_states)?;
    let pass = verdict.pass;
    match args.format {
        Format::Text => {
            println!("P_{spec}(z) = {poly}");
            println!("polynomiality: {}", if pass { "pass" } else { "FAIL" });
        }
        Format::Json => {
            let out = FitOutput { polynomial: polynomial_report(&spec, &poly), polynomiality: verdict };
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
        }
        Format::Csv => unreachable!(),
    }
    Ok(if pass { 0 } else { EXIT_VERIFY_FAIL })
}

fn vertex_verdicts(spec: &FamilySpec) -> Result<Vec<VerdictReport>, Error> {
    let mut out = Vec::new();
    match spec.group {
        Group::Unitary if spec.k >= 2 => {
            out.push(verify_vertex_witness(spec, &unitary_half_witness(spec)?)?);
            if spec.k == 2 && spec.q >= 2 {
                if let Some(t) = find_nondividing_t(spec.q) {
                    let (dspec, w) = dilated_unitary_witness(spec.q, t)?;
                    out.push(verify_vertex_witness(&dspec, &w)?);
                }
            }
        }
        Group::Symplectic if spec.k >= 2 => {
            out.push(verify_vertex_witness(spec, &symplectic_half_witness(spec)?)?);
        }
        _ => {
            return Err(Error::Input(format!(
                "no non-integral vertex witness is defined for {spec} (k must be >= 2)"
            )))
        }
    }
    Ok(out)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Error> {
    if args.format == Format::Csv {
        return Err(Error::Input("csv output is only available for count tables".into()));
    }
    let spec = args.family.spec()?;
    let states = args.budgets.budget_states;
    let nodes = args.budgets.budget_nodes;
    let d = spec.dimension() as i64;

    let mut verdicts: Vec<VerdictReport> = Vec::new();
    let claims: Vec<Claim> = match args.claim {
        Claim::All => {
            let mut all = vec![
                Claim::Polynomiality,
                Claim::Roots,
                Claim::Symmetry,
                Claim::Reciprocity,
                Claim::Bijection,
            ];
            if spec.k >= 2 {
                all.push(Claim::Vertex);
            }
            all
        }
        c => vec![c],
    };
    for claim in claims {
        match claim {
            Claim::Polynomiality => verdicts.push(verify_polynomiality(&spec, args.extra, states)?),
            Claim::Roots => verdicts.push(verify_integer_roots(&spec, states)?),
            Claim::Symmetry => verdicts.push(verify_symmetry(&spec, states)?),
            Claim::Reciprocity => {
                verdicts.push(verify_reciprocity(&spec, args.n_max.unwrap_or(d + 2), states)?)
            }
            Claim::Bijection => verdicts.push(verify_bijectivity(&spec, args.n.unwrap_or(2), nodes)?),
            Claim::Vertex => verdicts.extend(vertex_verdicts(&spec)?),
            Claim::All => unreachable!(),
        }
    }

    let pass = verdicts.iter().all(|v| v.pass);
    match args.format {
        Format::Text => {
            for v in &verdicts {
                println!("{}: {}", v.claim, if v.pass { "pass" } else { "FAIL" });
                for w in &v.witnesses {
                    println!("  {}: {}", w.label, w.value);
                }
            }
        }
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&verdicts).expect("serializable"));
        }
        Format::Csv => unreachable!(),
    }
    Ok(if pass { 0 } else { EXIT_VERIFY_FAIL })
}

#[derive(Serialize)]
struct ReferenceOutput {
    group: String,
    k: u32,
    q: u32,
    golden: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coeffs: Option<Vec<String>>,
    /// The Keating-Snaith product expansion; only defined for k = 1 unitary.
    #[serde(skip_serializing_if = "Option::is_none")]
    keating_snaith: Option<Vec<String>>,
}

fn cmd_reference(args: ReferenceArgs) -> Result<u8, Error> {
    if args.format == Format::Csv {
        return Err(Error::Input("csv output is only available for count tables".into()));
    }
    let spec = args.family.spec()?;
    let g = golden(&spec);
    let ks = (spec.group == Group::Unitary && spec.k == 1)
        .then(|| keating_snaith(spec.q).coeff_strings());
    let out = ReferenceOutput {
        group: spec.group.tag().into(),
        k: spec.k,
        q: spec.q,
        golden: g.is_some(),
        source: g.as_ref().map(|g| g.source.to_string()),
        degree: g.as_ref().and_then(|g| g.poly.degree()),
        coeffs: g.as_ref().map(|g| g.poly.coeff_strings()),
        keating_snaith: ks.clone(),
    };
    match args.format {
        Format::Text => {
            match &g {
                Some(g) => println!("golden {}: {} ({})", spec, g.poly, g.source),
                None => println!("golden {spec}: none recorded"),
            }
            if let Some(ks) = &ks {
                println!("keating-snaith coeffs: {}", ks.join(" "));
            }
        }
        Format::Json => println!("{}", serde_json::to_string_pretty(&out).expect("serializable")),
        Format::Csv => unreachable!(),
    }
    Ok(0)
}
