//! `torus-models`: build instances, run the law suites, export artifacts.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use torus_models::diagram::ModuleDiagram;
use torus_models::functors::{hand_built_objects, strictness_witness, toral_round_trip, Rank1};
use torus_models::harness::{
    diagram_json, flag_dot_of, functor_traces, gen_module, instance_json, pair_dot_of,
    poset_dot_of, pretty, run_suites, with_zero_euler_generator, Config, DiagramChoice, Instance,
    LawReport, ModuleKind, PosetChoice, Side, Suite, UniverseSpec,
};
use torus_models::modules::Window;
use torus_models::ring::EulerVariant;
use torus_models::Error;

#[derive(Parser, Debug)]
#[command(
    name = "torus-models",
    version,
    about = "Build torus-subgroup models, check their laws, export artifacts"
)]
struct Cli {
    /// Degree window LO..HI for windowed checks.
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<Window>,
    /// Largest Euler exponent a generated module may divide by.
    #[arg(long, global = true)]
    denominator_bound: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an instance and summarize it.
    Build {
        #[arg(long, default_value = "rank1")]
        universe: UniverseSpec,
        #[arg(long, value_enum, default_value_t = Variant::Natural)]
        variant: Variant,
    },
    /// Run law suites; exits 1 if any law fails or is uncertified.
    Check {
        #[arg(long, default_value = "rank1")]
        universe: UniverseSpec,
        /// Repeatable; all suites when omitted.
        #[arg(long = "suite")]
        suites: Vec<Suite>,
        #[arg(long, value_enum)]
        mutate: Option<Mutation>,
        /// Include wall times in text output.
        #[arg(long)]
        timings: bool,
    },
    /// Write a deterministic artifact to stdout or a file.
    Export {
        #[arg(value_enum)]
        what: Artifact,
        #[arg(long, default_value = "rank1")]
        universe: UniverseSpec,
        /// Poset for the DOT exports: a, c or d.
        #[arg(long, default_value = "a")]
        poset: PosetChoice,
        /// Diagram for diagram-json: af, ap, cf, cp or df.
        #[arg(long, default_value = "cf")]
        diagram: DiagramChoice,
        /// Module for diagram-json: ring, free:0,2, shift:D, torsion:NODE:LEN,
        /// skyscraper:NODE, ambient:SEED, ambient-qc:SEED, topless:SEED.
        #[arg(long, default_value = "ring", allow_hyphen_values = true)]
        module: String,
        /// Suites for report-json.
        #[arg(long = "suite")]
        suites: Vec<Suite>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Walk through a worked model.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
}

#[derive(Subcommand, Debug)]
enum Demo {
    /// The circle with infinitely many finite subgroups.
    Rank1,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Variant {
    Borel,
    Natural,
    Diagonal,
    Componentwise,
}

impl From<Variant> for EulerVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Borel => EulerVariant::Borel,
            Variant::Natural => EulerVariant::Natural,
            Variant::Diagonal => EulerVariant::Diagonal,
            Variant::Componentwise => EulerVariant::Componentwise,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mutation {
    /// Replace the first toral Euler generator by zero.
    ZeroEuler,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Artifact {
    PosetDot,
    FlagDot,
    PairDot,
    InstanceJson,
    DiagramJson,
    ReportJson,
    Traces,
}

fn config(cli: &Cli) -> Config {
    let d = Config::default();
    Config {
        window: cli.window.unwrap_or(d.window),
        denominator_bound: cli.denominator_bound.unwrap_or(d.denominator_bound),
        seed: cli.seed.unwrap_or(d.seed),
    }
}

fn suites_or_all(s: &[Suite]) -> Vec<Suite> {
    if s.is_empty() {
        Suite::ALL.to_vec()
    } else {
        s.to_vec()
    }
}

fn verdict(report: &LawReport) -> ExitCode {
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn summary(inst: &Instance) -> String {
    let mut s = format!(
        "instance {} (rank {}, {:?} Euler classes)\n",
        inst.name, inst.rank, inst.variant
    );
    let names: Vec<&str> = inst.universe.iter().map(|h| h.name()).collect();
    s += &format!("universe: {}\n", names.join(", "));
    let added: Vec<&String> = inst
        .closure
        .added_identity_components
        .iter()
        .chain(&inst.closure.added_joins)
        .collect();
    if !added.is_empty() {
        s += &format!(
            "closure added: {}\n",
            added
                .iter()
                .map(|x| x.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    s += &format!(
        "posets: cotoral {}, connected {}, dimension {}\n",
        inst.sigma_a.len(),
        inst.sigma_c.len(),
        inst.sigma_d.len()
    );
    s += &format!(
        "flags: cotoral {}, connected {}, dimension {}; pairs: cotoral {}, connected {}\n",
        inst.flags_a.len(),
        inst.flags_c.len(),
        inst.flags_d.len(),
        inst.pairs_a.len(),
        inst.pairs_c.len()
    );
    s += &format!(
        "window {}, denominator bound {}, seed {}\n",
        inst.config.window, inst.config.denominator_bound, inst.config.seed
    );
    s
}

fn module_for(inst: &Instance, diagram: DiagramChoice, spec: &str) -> Result<ModuleDiagram, Error> {
    let w = inst.window();
    if spec == "ring" {
        return ModuleDiagram::ring_module(diagram.ring(inst).clone(), w);
    }
    let (side, base) =
        match diagram {
            DiagramChoice::ToralFlags => (Side::Toral, &inst.sigma_a),
            DiagramChoice::ConnectedFlags => (Side::Connected, &inst.sigma_c),
            _ => return Err(Error::Precondition(
                "generated modules live over the af or cf diagrams; use --module ring otherwise"
                    .into(),
            )),
        };
    gen_module(inst.side(side), &ModuleKind::parse(spec, base)?, w)
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Error> {
    match out {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn demo_rank1(cli: &Cli) -> Result<ExitCode, Error> {
    let inst = Instance::build(UniverseSpec::Rank1, config(cli))?;
    let report = run_suites(&inst, &[Suite::Rank1, Suite::Gamma]);
    if cli.json {
        print!("{}", report.to_json_string()?);
        return Ok(verdict(&report));
    }
    print!("{}", summary(&inst));
    println!("cotoral poset:");
    print!("{}", poset_dot_of(&inst, PosetChoice::Cotoral));
    let model = Rank1::new(inst.window())?;
    println!("hand-built objects of the toral model:");
    for (name, obj) in hand_built_objects(&model)? {
        let res = toral_round_trip(&model, &obj)?;
        println!(
            "  {name}: round trip {}",
            res.map_or("ok".to_string(), |w| format!("FAILS ({w})"))
        );
    }
    let w = strictness_witness(&model);
    println!(
        "family (c_i^-1): in the product of localizations {}, in the localized product {}",
        w.in_product_of_localizations(),
        w.in_localized_product()
    );
    print!("{}", report.render_text(false));
    Ok(verdict(&report))
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Build { universe, variant } => {
            let inst = Instance::build_with(*universe, (*variant).into(), config(cli))?;
            if cli.json {
                print!("{}", pretty(&instance_json(&inst)?)?);
            } else {
                print!("{}", summary(&inst));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            universe,
            suites,
            mutate,
            timings,
        } => {
            let mut inst = Instance::build(*universe, config(cli))?;
            if let Some(Mutation::ZeroEuler) = mutate {
                inst = with_zero_euler_generator(&inst);
            }
            let report = run_suites(&inst, &suites_or_all(suites));
            if cli.json {
                print!("{}", report.to_json_string()?);
            } else {
                print!("{}", report.render_text(*timings));
                let passed = report
                    .laws
                    .iter()
                    .filter(|l| l.status == torus_models::harness::Status::Pass)
                    .count();
                println!(
                    "{passed}/{} laws pass, {} not applicable",
                    report.laws.len(),
                    report.not_applicable.len()
                );
            }
            Ok(verdict(&report))
        }
        Command::Export {
            what,
            universe,
            poset,
            diagram,
            module,
            suites,
            out,
        } => {
            let inst = Instance::build(*universe, config(cli))?;
            let text = match what {
                Artifact::PosetDot => poset_dot_of(&inst, *poset),
                Artifact::FlagDot => flag_dot_of(&inst, *poset),
                Artifact::PairDot => pair_dot_of(&inst, *poset)?,
                Artifact::InstanceJson => pretty(&instance_json(&inst)?)?,
                Artifact::DiagramJson => diagram_json(&module_for(&inst, *diagram, module)?)?,
                Artifact::ReportJson => {
                    let report = run_suites(&inst, &suites_or_all(suites));
                    emit(&report.to_json_string()?, out)?;
                    return Ok(verdict(&report));
                }
                Artifact::Traces => pretty(&functor_traces(&inst)?)?,
            };
            emit(&text, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Demo { which: Demo::Rank1 } => demo_rank1(cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
