use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use raagsep::bench::{export_dot, fit_exponent, records_to_csv, run_family_with, GrowthFamily};
use raagsep::completion::{canonical_complete_with, CompletionConfig, CompletionLedger, ComponentRule, GeneratorOrder};
use raagsep::complex::CubeComplex2;
use raagsep::folding::{build_subgroup_complex, FoldingConfig, MoveOrder, DEFAULT_MAX_CELLS};
use raagsep::membership::membership;
use raagsep::representation::{RepresentationBundle, DEFAULT_TWIST};
use raagsep::separation::{separate, verify, SeparationCertificate};
use raagsep::{DefiningGraph, Word};

/// Membership and finite-quotient separation for subgroups of right-angled Artin groups.
#[derive(Parser)]
#[command(name = "raagsep", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fold subgroup generators into a locally isometric complex Y.
    Fold(FoldArgs),
    /// Canonically complete Y to a finite cover C(Y) and record the ledger.
    Complete(CompleteArgs),
    /// Decide membership of a word in H and in K.
    Member(MemberArgs),
    /// Evaluate the representations on a word.
    Rep(RepArgs),
    /// Produce a separation certificate for a word outside H.
    Separate(SeparateArgs),
    /// Check a separation certificate; exit code 0 iff it verifies.
    Verify(VerifyArgs),
    /// Run a growth family and write CSV records.
    Bench(BenchArgs),
    /// Render a complex as Graphviz DOT.
    ExportDot(ExportDotArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MoveOrderArg {
    RoundRobin,
    SingleSpread,
}

#[derive(Clone, Copy, ValueEnum)]
enum ComponentRuleArg {
    Exclude,
    Include,
}

#[derive(Args)]
struct FoldingOpts {
    /// Cell cap for folding.
    #[arg(long, env = "RAAGSEP_CAP", default_value_t = DEFAULT_MAX_CELLS)]
    cap: usize,
    #[arg(long, value_enum, default_value = "round-robin")]
    move_order: MoveOrderArg,
}

impl FoldingOpts {
    fn config(&self) -> FoldingConfig {
        FoldingConfig {
            max_cells: self.cap,
            move_order: match self.move_order {
                MoveOrderArg::RoundRobin => MoveOrder::RoundRobin,
                MoveOrderArg::SingleSpread => MoveOrder::SingleSpread,
            },
        }
    }
}

#[derive(Args)]
struct FoldArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Generator word, repeatable, e.g. --gen "a a" --gen b.
    #[arg(long = "gen", required = true)]
    gens: Vec<String>,
    #[command(flatten)]
    folding: FoldingOpts,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompleteArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long = "Y")]
    y: PathBuf,
    #[arg(long, value_enum, default_value = "exclude")]
    component_rule: ComponentRuleArg,
    /// Process generators in reverse graph order.
    #[arg(long)]
    reversed: bool,
    #[arg(long)]
    out_c: Option<PathBuf>,
    #[arg(long)]
    out_ledger: Option<PathBuf>,
}

#[derive(Args)]
struct MemberArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long = "Y")]
    y: PathBuf,
    #[arg(long = "C")]
    c: PathBuf,
    #[arg(long)]
    word: String,
}

#[derive(Args)]
struct BundleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long = "Y")]
    y: PathBuf,
    #[arg(long = "C")]
    c: PathBuf,
    #[arg(long)]
    ledger: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TWIST)]
    twist: u32,
}

impl BundleArgs {
    fn load(&self) -> Result<RepresentationBundle> {
        let g = load_graph(&self.graph)?;
        let y = load_complex(&self.y, &g)?;
        let c = load_complex(&self.c, &g)?;
        let ledger = CompletionLedger::from_json(&read(&self.ledger)?, &g)
            .with_context(|| format!("parsing {}", self.ledger.display()))?;
        Ok(RepresentationBundle::new(&g, &y, &c, &ledger, self.twist)?)
    }
}

#[derive(Args)]
struct RepArgs {
    #[command(flatten)]
    bundle: BundleArgs,
    #[arg(long)]
    word: String,
}

#[derive(Args)]
struct SeparateArgs {
    #[command(flatten)]
    bundle: BundleArgs,
    #[arg(long)]
    word: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    cert: PathBuf,
    #[command(flatten)]
    bundle: BundleArgs,
    /// Word to check against; defaults to the word stored in the certificate.
    #[arg(long)]
    word: Option<String>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    family: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    folding: FoldingOpts,
}

#[derive(Args)]
struct ExportDotArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<DefiningGraph> {
    DefiningGraph::parse_any(&read(path)?).with_context(|| format!("parsing graph {}", path.display()))
}

fn load_complex(path: &Path, g: &DefiningGraph) -> Result<CubeComplex2> {
    CubeComplex2::from_json(&read(path)?, g).with_context(|| format!("parsing complex {}", path.display()))
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Fold(a) => {
            let g = load_graph(&a.graph)?;
            let gens = a.gens.iter().map(|s| Word::parse(&g, s)).collect::<Result<Vec<_>, _>>()?;
            let y = build_subgroup_complex(&g, &gens, a.folding.config())?;
            emit(a.out.as_deref(), &y.to_json())?;
        }
        Command::Complete(a) => {
            let g = load_graph(&a.graph)?;
            let y = load_complex(&a.y, &g)?;
            let config = CompletionConfig {
                component_rule: match a.component_rule {
                    ComponentRuleArg::Exclude => ComponentRule::ExcludeLabel,
                    ComponentRuleArg::Include => ComponentRule::IncludeLabel,
                },
                generator_order: if a.reversed { GeneratorOrder::Reversed } else { GeneratorOrder::Graph },
            };
            let (c, ledger) = canonical_complete_with(&y, &g, config)?;
            match (&a.out_c, &a.out_ledger) {
                (Some(pc), Some(pl)) => {
                    emit(Some(pc), &c.to_json())?;
                    emit(Some(pl), &ledger.to_json(&g))?;
                }
                (None, None) => {
                    let c_json: serde_json::Value = serde_json::from_str(&c.to_json())?;
                    let l_json: serde_json::Value = serde_json::from_str(&ledger.to_json(&g))?;
                    emit(None, &pretty(&json!({ "schema": 1, "cover": c_json, "ledger": l_json })))?;
                }
                _ => bail!("--out-c and --out-ledger must be given together"),
            }
        }
        Command::Member(a) => {
            let g = load_graph(&a.graph)?;
            let y = load_complex(&a.y, &g)?;
            let c = load_complex(&a.c, &g)?;
            let w = Word::parse(&g, &a.word)?;
            let v = membership(&y, &c, &g, &w);
            emit(
                None,
                &pretty(&json!({ "schema": 1, "word": a.word, "in_h": v.in_h, "in_k": v.in_k, "witness": v.witness })),
            )?;
        }
        Command::Rep(a) => {
            let b = a.bundle.load()?;
            let g = b.graph();
            let w = Word::parse(g, &a.word)?;
            let in_k = b.is_member_k(&w);
            let prime = b.rho_prime(&w).ok();
            let hnn = b.rewrite_in_k_generators(&w).ok().map(|h| h.display(g).to_string());
            let induced = b.induce(&w);
            emit(
                None,
                &pretty(&json!({
                    "schema": 1,
                    "word": a.word,
                    "dim": b.base_dim(),
                    "index": b.index(),
                    "twist": b.twist(),
                    "in_k": in_k,
                    "rho0": b.rho0(&w),
                    "rho_prime": prime,
                    "hnn_word": hnn,
                    "induced": induced,
                    "in_h": b.zariski_membership_test(&w),
                })),
            )?;
        }
        Command::Separate(a) => {
            let b = a.bundle.load()?;
            let w = Word::parse(b.graph(), &a.word)?;
            let cert = separate(&b, &w)?;
            emit(a.out.as_deref(), &cert.to_json())?;
        }
        Command::Verify(a) => {
            let b = a.bundle.load()?;
            let cert = SeparationCertificate::from_json(&read(&a.cert)?).context("parsing certificate")?;
            let w = match &a.word {
                Some(s) => Word::parse(b.graph(), s)?,
                None => cert.word.clone(),
            };
            let ok = verify(&cert, &b, &w);
            println!("{}", if ok { "verified" } else { "rejected" });
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
        Command::Bench(a) => {
            let family = GrowthFamily::from_json(&read(&a.family)?)?;
            let records = run_family_with(&family, a.folding.config())?;
            emit(Some(&a.out), &records_to_csv(&records)?)?;
            let fit = match fit_exponent(&records) {
                Ok(f) => json!({
                    "slope": f.slope,
                    "intercept": f.intercept,
                    "max_residual": f.max_residual,
                    "first_half_slope": f.first_half_slope,
                    "second_half_slope": f.second_half_slope,
                    "half_sample_gap": f.half_sample_gap(),
                    "stable": f.is_stable(),
                }),
                Err(e) => json!({ "error": e.to_string() }),
            };
            emit(None, &pretty(&json!({ "schema": 1, "family": family.name, "records": records.len(), "fit": fit })))?;
        }
        Command::ExportDot(a) => {
            let g = load_graph(&a.graph)?;
            let x = load_complex(&a.complex, &g)?;
            emit(a.out.as_deref(), &export_dot(&x, &g)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
