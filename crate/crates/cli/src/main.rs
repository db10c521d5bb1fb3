//! `ninf`: reads and writes module documents; all computation lives in the
//! library.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ninf::fpmod::document::degree_to_json;
use ninf::fpmod::{Evaluator, Presentation};
use ninf::homology::{report, resolution, Support};
use ninf::orbit::{isotypic_decompose, restrict_to_grid, OrbitPresentation};
use ninf::poset::{Norm, PosetDescriptor};
use ninf::shift;
use ninf::verify::{oracle_homology_upto, registry, verify};

#[derive(Parser)]
#[command(name = "ninf", version, about = "Homology of finitely presented poset representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// H_0 .. H_S with hd, gd, pd and ω.
    Compute {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = ninf::homology::DEFAULT_LENGTH)]
        homology: usize,
        #[arg(long, value_enum, default_value_t = NormArg::Sup)]
        norm: NormArg,
        /// e.g. `3,3,3`, `4:1,5:1;sum=4`, `sum=6`; default: the down-set of the join of all degrees.
        #[arg(long = "box")]
        region: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// The minimal free resolution up to F_S.
    Resolve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = ninf::homology::DEFAULT_LENGTH)]
        length: usize,
    },
    /// Shift functors on grid modules.
    Shift {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        op: ShiftOp,
    },
    /// Torsion part, torsion-free part and torsion heights.
    Torsion {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "box")]
        region: Option<String>,
    },
    /// Orbit-category modules.
    Orbit {
        #[arg(value_enum)]
        action: OrbitAction,
        #[arg(long)]
        input: PathBuf,
    },
    /// Build a registry example and check its expected facts.
    Registry {
        #[arg(long)]
        name: String,
        #[arg(long, default_value = "")]
        params: String,
        /// Write the module document here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// H_0 .. H_S from the bar complex on a small box.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        homology: usize,
        #[arg(long = "box")]
        region: Option<String>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ShiftOp {
    #[arg(long)]
    direction: Option<u32>,
    #[arg(long)]
    bs: bool,
    #[arg(long = "bs-power")]
    bs_power: Option<usize>,
    #[arg(long)]
    sheafify: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Sup,
    Sum,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Norm {
        match n {
            NormArg::Sup => Norm::Sup,
            NormArg::Sum => Norm::Sum,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OrbitAction {
    Restrict,
    Decompose,
    Sheafify,
}

/// What a command produced: a document, and whether it records a failed
/// verification.
struct Outcome {
    value: Value,
    verified: bool,
}

impl From<Value> for Outcome {
    fn from(value: Value) -> Self {
        Outcome { value, verified: true }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> Result<Presentation> {
    Presentation::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_orbit(path: &Path) -> Result<OrbitPresentation> {
    let v: Value = serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    OrbitPresentation::from_json(&v).with_context(|| format!("parsing {}", path.display()))
}

fn parse_box(v: &Presentation, spec: Option<&str>) -> Result<Option<PosetDescriptor>> {
    spec.map(|s| PosetDescriptor::parse_box(v.poset().kind(), s).context("parsing --box"))
        .transpose()
}

fn module_value(v: &Presentation) -> Value {
    serde_json::from_str(&v.to_json()).expect("documents are JSON")
}

fn support_value(s: &Support) -> Value {
    json!(s.iter().map(|(d, m)| json!({"degree": degree_to_json(d), "multiplicity": m})).collect::<Vec<_>>())
}

fn write_or_print(value: &Value, output: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match output {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    Ok(match command {
        Command::Compute {
            input,
            homology,
            norm,
            region,
            output,
        } => {
            let v = load(&input)?;
            let region = parse_box(&v, region.as_deref())?;
            let r = report(&v, homology, region.as_ref())?;
            let norm = Norm::from(norm);
            let mut value = r.to_json();
            value["norm"] = json!(norm.name());
            value["selected"] = json!({
                "hd": (0..=homology).map(|i| r.hd(i, norm)).collect::<Vec<_>>(),
                "gd": r.gd(norm),
                "pd": r.pd(norm),
            });
            if output.is_some() {
                write_or_print(&value, output.as_deref())?;
                return Ok(json!({"written": output}).into());
            }
            value.into()
        }
        Command::Resolve { input, length } => {
            let v = load(&input)?;
            let res = resolution(&v, length, None)?;
            json!({
                "free": res.free.iter().map(|f| f.iter().map(degree_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "minimalPresentation": module_value(&res.minimal_presentation()?),
                "isComplex": res.is_complex(),
                "isMinimal": res.is_minimal(),
                "report": res.report().to_json(),
            })
            .into()
        }
        Command::Shift { input, op: args } => {
            let v = load(&input)?;
            if let Some(i) = args.direction {
                module_value(&shift::shift(&v, i)?).into()
            } else if args.bs {
                module_value(&shift::bs(&v)?).into()
            } else if let Some(s) = args.bs_power {
                module_value(&shift::bs_power(&v, s)?).into()
            } else {
                shift::sheafify_poset(&v)?.to_json().into()
            }
        }
        Command::Torsion { input, region } => {
            let v = load(&input)?;
            let region = parse_box(&v, region.as_deref())?;
            let (rep, torsion) = shift::torsion_part(&v, region.as_ref())?;
            let free = shift::torsion_free_part(&v)?;
            let mut value = rep.to_json();
            value["torsionPart"] = module_value(&torsion);
            value["torsionFreePart"] = module_value(&free);
            value.into()
        }
        Command::Orbit { action, input } => {
            let v = load_orbit(&input)?;
            match action {
                OrbitAction::Restrict => module_value(&restrict_to_grid(&v)?).into(),
                OrbitAction::Decompose => isotypic_decompose(&v)?.to_json().into(),
                OrbitAction::Sheafify => {
                    let report = isotypic_decompose(&v)?;
                    json!({"modulus": v.modulus(), "sheaf": report.to_json()["sheaf"].clone()}).into()
                }
            }
        }
        Command::Registry { name, params, emit } => {
            let entry = registry(&name, &params)?;
            let checks = entry.check()?;
            if let Some(p) = &emit {
                write_or_print(&entry.module.to_json(), Some(p))?;
            }
            let verified = checks.iter().all(|c| c.passed);
            let mut value = entry.to_json();
            value["checks"] = json!(checks.iter().map(|c| c.to_json()).collect::<Vec<_>>());
            if emit.is_some() {
                value.as_object_mut().expect("object").remove("module");
            }
            Outcome { value, verified }
        }
        Command::Verify { suite, seed, count } => {
            let out = verify(&suite, seed, count)?;
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            Outcome {
                verified: out.passed(),
                value: out.to_json(),
            }
        }
        Command::Oracle { input, homology, region } => {
            let v = load(&input)?;
            let region = parse_box(&v, region.as_deref())?.unwrap_or_else(|| v.poset().clone());
            let groups = oracle_homology_upto(&Evaluator::new(&v), &region, homology)?;
            json!({
                "homology": groups.iter().enumerate().map(|(i, s)| json!({"i": i, "support": support_value(s)})).collect::<Vec<_>>(),
                "box": region.to_string(),
            })
            .into()
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            if let Err(e) = write_or_print(&out.value, None) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if out.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
