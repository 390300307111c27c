use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use tangle_core::graph::{build_sk, DEFAULT_VERTEX_CAP};
use tangle_core::io::{self, FamilyFile, OrientationEntry};
use tangle_core::iso::{apply_iso, random_relabeling};
use tangle_core::orientation::{
    enumerate_consistent, enumerate_profiles, is_profile, p_submodularity_witness, profile_violation,
    DEFAULT_FILTER_CAP, DEFAULT_PROFILE_CAP,
};
use tangle_core::tree::{canonical_tree_set, TreeSetOptions};
use tangle_core::{verify_nested_set, Error, Family, GraphSystem, SeparationSystem};

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_AXIOM: u8 = 3;
const EXIT_PRECONDITION: u8 = 4;
const EXIT_CANONICITY: u8 = 5;

#[derive(Parser)]
#[command(name = "tangle-forge", version, about = "Canonical nested sets of separations distinguishing orientation families")]
struct Cli {
    /// Cap on the number of separations for orientation and profile enumeration.
    #[arg(long, env = "TANGLE_FORGE_CAP", global = true)]
    cap: Option<usize>,

    /// Largest graph accepted when enumerating vertex separations.
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP, global = true)]
    max_vertices: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the system of graph separations of order below k.
    Sk {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// List the consistent orientations of a system, or the profiles of a graph system.
    Profiles {
        #[command(flatten)]
        input: SystemInput,
        /// With a graph, list every consistent orientation instead of profiles only.
        #[arg(long)]
        all_consistent: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute the canonical nested set distinguishing a family.
    TreeSet {
        #[command(flatten)]
        input: SystemInput,
        /// Family JSON, or the word `profiles` to use every profile of the graph system.
        #[arg(long)]
        family: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Skip the up-front submodularity check.
        #[arg(long)]
        unchecked: bool,
        /// Print the per-round trace as JSON on stdout.
        #[arg(long)]
        trace: bool,
    },
    /// Validate a system and optionally a family against it.
    Check {
        #[command(flatten)]
        input: SystemInput,
        #[arg(long)]
        family: Option<String>,
    },
    /// Compare the nested set with those of seeded relabelings.
    CanonTest {
        #[command(flatten)]
        input: SystemInput,
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        /// First seed; seeds run from here upwards.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct SystemInput {
    #[arg(long, required_unless_present = "graph")]
    system: Option<PathBuf>,
    #[arg(long, requires = "k")]
    graph: Option<PathBuf>,
    #[arg(short, requires = "graph", value_parser = clap::value_parser!(u32).range(1..))]
    k: Option<u32>,
}

/// A failure carrying the exit code of its class.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::Schema { .. } | Error::Graph(_) | Error::OrientationLength { .. } => {
                EXIT_PARSE
            }
            Error::Invalid(_) | Error::Inconsistent { .. } | Error::DuplicateMember { .. } => EXIT_AXIOM,
            Error::NotSubmodular { .. } | Error::Precondition { .. } | Error::CapExceeded { .. } => {
                EXIT_PRECONDITION
            }
            Error::Io(_) => EXIT_FAILURE,
        };
        Failure {
            code,
            error: e.into(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure {
            code: EXIT_FAILURE,
            error,
        }
    }
}

fn fail(code: u8, error: anyhow::Error) -> Failure {
    Failure { code, error }
}

type Outcome = std::result::Result<(), Failure>;

struct Loaded {
    system: SeparationSystem,
    graph: Option<GraphSystem>,
}

impl Cli {
    fn cap(&self, default: usize) -> usize {
        self.cap.unwrap_or(default)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(|e| fail(EXIT_PARSE, e))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn load(input: &SystemInput, max_vertices: usize) -> Result<Loaded, Failure> {
    let graph = match (&input.graph, input.k) {
        (Some(path), Some(k)) => Some(build_sk(&io::parse_graph(&read(path)?)?, k as usize, max_vertices)?),
        _ => None,
    };
    let system = match &input.system {
        Some(path) => io::parse_system(&read(path)?)?,
        None => graph.as_ref().expect("clap requires a system or a graph").system().clone(),
    };
    if let Some(gs) = &graph {
        if gs.system() != &system {
            return Err(fail(
                EXIT_PRECONDITION,
                anyhow!("the system file is not the separation system of the given graph and k"),
            ));
        }
    }
    Ok(Loaded { system, graph })
}

fn load_family(cli: &Cli, source: &str, loaded: &Loaded) -> Result<Family, Failure> {
    if source == "profiles" {
        let gs = loaded
            .graph
            .as_ref()
            .ok_or_else(|| fail(EXIT_PARSE, anyhow!("--family profiles needs --graph and -k")))?;
        let members = enumerate_profiles(gs, cli.cap(DEFAULT_PROFILE_CAP))?;
        Ok(Family::new(&loaded.system, members)?)
    } else {
        Ok(io::parse_family(&read(Path::new(source))?, &loaded.system)?)
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Sk { graph, k, out } => {
            let g = io::parse_graph(&read(graph)?)?;
            let gs = build_sk(&g, *k as usize, cli.max_vertices)?;
            write(out, &io::format_system(gs.system()))?;
            eprintln!("{} separations of order below {k}", gs.system().separation_count());
        }
        Command::Profiles {
            input,
            all_consistent,
            out,
        } => {
            let loaded = load(input, cli.max_vertices)?;
            let sys = &loaded.system;
            let orientations: Vec<OrientationEntry> = match &loaded.graph {
                Some(gs) if !all_consistent => enumerate_profiles(gs, cli.cap(DEFAULT_PROFILE_CAP))?
                    .iter()
                    .map(|o| entry(o.to_string(), Some(true)))
                    .collect(),
                graph => enumerate_consistent(sys, cli.cap(DEFAULT_FILTER_CAP))?
                    .iter()
                    .map(|o| entry(o.to_string(), graph.as_ref().map(|gs| is_profile(gs, o))))
                    .collect(),
            };
            eprintln!("{} orientations", orientations.len());
            let file = FamilyFile {
                m: sys.separation_count(),
                orientations,
            };
            write(out, &io::to_json(&file))?;
        }
        Command::TreeSet {
            input,
            family,
            out,
            dot,
            unchecked,
            trace,
        } => {
            let loaded = load(input, cli.max_vertices)?;
            let sys = &loaded.system;
            let fam = load_family(cli, family, &loaded)?;
            let options = TreeSetOptions {
                check_submodularity: !unchecked,
            };
            let nested = canonical_tree_set(sys, &fam, options)?;
            let report = verify_nested_set(sys, &fam, &nested);
            if !report.is_ok() {
                let lines: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
                return Err(anyhow!("output failed verification: {}", lines.join("; ")).into());
            }
            write(out, &io::format_nested_set(&nested))?;
            if let Some(path) = dot {
                write(path, &io::emit_dot(sys, &fam, &nested))?;
            }
            if *trace {
                print!("{}", io::to_json(&nested.rounds));
            }
        }
        Command::Check { input, family } => {
            let loaded = load(input, cli.max_vertices)?;
            let sys = &loaded.system;
            println!(
                "system: {} separations, {} oriented, valid",
                sys.separation_count(),
                sys.len()
            );
            if let Some(gs) = &loaded.graph {
                if let Some((r, s)) = gs.structural_submodularity_witness() {
                    return Err(fail(
                        EXIT_PRECONDITION,
                        anyhow!("neither corner of {} and {} has order below k", sys.display_name(r), sys.display_name(s)),
                    ));
                }
                println!("graph system: structurally submodular");
            }
            if let Some(source) = family {
                let fam = load_family(cli, source, &loaded)?;
                println!("family: {} members, all consistent and distinct", fam.len());
                if let Some(gs) = &loaded.graph {
                    for (p, o) in fam.members().iter().enumerate() {
                        if let Some((r, s)) = profile_violation(gs, o) {
                            return Err(fail(
                                EXIT_AXIOM,
                                anyhow!(
                                    "member {p} is not a profile: it contains {} and {} and the meet of their inverses",
                                    sys.display_name(r),
                                    sys.display_name(s)
                                ),
                            ));
                        }
                    }
                    println!("family: every member is a profile");
                }
                if let Some((r, s)) = p_submodularity_witness(sys, &fam) {
                    return Err(Error::NotSubmodular { r, s }.into());
                }
                println!("family: system is submodular for the family");
            }
        }
        Command::CanonTest {
            input,
            family,
            seeds,
            seed,
        } => {
            let loaded = load(input, cli.max_vertices)?;
            let sys = &loaded.system;
            let fam = load_family(cli, family, &loaded)?;
            let base = canonical_tree_set(sys, &fam, TreeSetOptions::default())?;
            for s in *seed..seed.saturating_add(*seeds) {
                let (image, phi) = random_relabeling(sys, s);
                let image_fam = apply_iso(&phi, sys, &image, &fam);
                let expected = phi.image_of_separations(&image, &base.separations);
                let got = canonical_tree_set(&image, &image_fam, TreeSetOptions::default())?.separations;
                if expected != got {
                    return Err(fail(
                        EXIT_CANONICITY,
                        anyhow!("canonicity violated at seed {s}: expected {expected:?}, got {got:?}"),
                    ));
                }
            }
            println!("canonical across {seeds} relabelings (seeds {seed}..{})", seed.saturating_add(*seeds));
        }
    }
    Ok(())
}

fn entry(bits: String, profile: Option<bool>) -> OrientationEntry {
    OrientationEntry {
        bits,
        consistent: Some(true),
        profile,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
