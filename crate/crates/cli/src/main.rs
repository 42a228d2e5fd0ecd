mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use surfcurve::constructions::orienting_curve;
use surfcurve::cover::{build_cover, labeling_from_loops};
use surfcurve::curve::CrossCurve;
use surfcurve::hardness::{default_epsilon, grid_to_surface, GridGraph};
use surfcurve::loops::{hitting_paths, standard_loops, LoopSystem};
use surfcurve::oracle::{brute_shortest, enumerate_simple_curves, EnumerationBudget};
use surfcurve::solver::{solve, Goal, Prepared};
use surfcurve::weight::{format_weight, parse_weight};
use surfcurve::z2::RhoMap;
use surfcurve::{load_surface, Error, SurfaceMap};

#[derive(Parser)]
#[command(name = "surfcurve", version, about = "Shortest closed curves of prescribed type on weighted surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a surface and print its invariants.
    Check { input: PathBuf },
    /// Shortest simple closed curve of a given type.
    Shortest {
        input: PathBuf,
        /// orienting, nonor1, nonor2, onesided, or custom (with --rho).
        #[arg(long)]
        goal: String,
        #[arg(long)]
        rho: Option<PathBuf>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// An orienting curve of multiplicity at most two.
    OrientCurve {
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Standard loops or hitting paths.
    Loops {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "standard")]
        kind: LoopKind,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Classify a curve by cutting.
    Classify { input: PathBuf, curve: PathBuf },
    /// Subhomology cover defined by a loop system and a linear map.
    Cover {
        input: PathBuf,
        #[arg(long)]
        rho: PathBuf,
        #[arg(long)]
        loops: PathBuf,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Brute-force shortest curve by enumeration.
    Oracle {
        input: PathBuf,
        #[arg(long)]
        goal: String,
        /// Enumerate curves up to this length only; default searches until found.
        #[arg(long)]
        max_weight: Option<String>,
        /// Crossings allowed per edge.
        #[arg(long, default_value_t = 2)]
        cap: usize,
    },
    /// Surface built from a grid graph.
    GenHardness {
        grid: PathBuf,
        /// A positive rational below 1/(12n), or `auto` for 1/(16n).
        #[arg(long, default_value = "auto")]
        epsilon: String,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Schematic SVG of the faces and, optionally, a curve.
    Render {
        input: PathBuf,
        #[arg(long)]
        curve: Option<PathBuf>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LoopKind {
    Standard,
    Hitting,
}

enum Failure {
    Input(String),
    Infeasible(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::InfeasibleGoal(_) => Failure::Infeasible(e.to_string()),
            Error::Invariant(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {}", path.display(), e)))
}

fn write(path: &Path, text: &str) -> Res<()> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {}", path.display(), e)))
}

/// Writes to `path`, or to stdout when absent.
fn emit(path: Option<&Path>, text: &str) -> Res<()> {
    match path {
        Some(p) => write(p, text),
        None => {
            println!("{}", text);
            Ok(())
        }
    }
}

fn surface(path: &Path) -> Res<(SurfaceMap, String)> {
    let text = read(path)?;
    let hash = hex::encode(Sha256::digest(text.as_bytes()));
    Ok((load_surface(&text)?, hash))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn parse_goal(name: &str, rho: Option<&Path>) -> Res<Goal> {
    if name == "custom" {
        let path = rho.ok_or_else(|| Failure::Input("--goal custom needs --rho".into()))?;
        return Ok(Goal::Custom(RhoMap::from_json(&read(path)?)?));
    }
    Goal::parse(name).ok_or_else(|| Failure::Input(format!("unknown goal {:?}", name)))
}

fn curve_report(m: &SurfaceMap, c: &CrossCurve) -> Res<Value> {
    let class = c.classify_by_cutting(m)?;
    let signature = if m.is_orientable() {
        Value::Null
    } else {
        json!(Prepared::new(m)?.canonical_signature(c)?.bits())
    };
    Ok(json!({
        "length": format_weight(&c.length(m)),
        "signature": signature,
        "class": class.name(),
        "sided": class.sided_name(),
        "multiplicity": c.multiplicity(),
        "simple": c.is_simple(m),
    }))
}

fn run(cmd: Command) -> Res<()> {
    match cmd {
        Command::Check { input } => {
            let (m, _) = surface(&input)?;
            println!(
                "g={} {} V={} E={} F={} chi={}",
                m.euler_genus(),
                if m.is_orientable() { "orientable" } else { "non-orientable" },
                m.num_vertices(),
                m.num_edges(),
                m.num_faces(),
                m.euler_char()
            );
        }
        Command::Shortest { input, goal, rho, output, report } => {
            let (m, hash) = surface(&input)?;
            let goal = parse_goal(&goal, rho.as_deref())?;
            let clock = Instant::now();
            let solved = solve(&m, &goal)?;
            eprintln!("wall time {:.3} s", clock.elapsed().as_secs_f64());
            emit(output.as_deref(), &solved.curve.to_json(&m)?)?;
            let mut rep = json!({ "command": "shortest", "input_sha256": hash });
            let body = serde_json::to_value(&solved.report).expect("serializable");
            merge(&mut rep, body);
            match report {
                Some(p) => write(&p, &pretty(&rep))?,
                None if output.is_some() => println!("{}", pretty(&rep)),
                None => eprintln!("{}", pretty(&rep)),
            }
        }
        Command::OrientCurve { input, output, report } => {
            let (m, hash) = surface(&input)?;
            let c = orienting_curve(&m)?;
            emit(output.as_deref(), &c.to_json(&m)?)?;
            let mut rep = json!({ "command": "orient-curve", "input_sha256": hash });
            merge(&mut rep, curve_report(&m, &c)?);
            match report {
                Some(p) => write(&p, &pretty(&rep))?,
                None if output.is_some() => println!("{}", pretty(&rep)),
                None => eprintln!("{}", pretty(&rep)),
            }
        }
        Command::Loops { input, kind, output } => {
            let (m, _) = surface(&input)?;
            let text = match kind {
                LoopKind::Standard => standard_loops(&m)?.to_json(&m)?,
                LoopKind::Hitting => {
                    let hp = hitting_paths(&m);
                    pretty(&json!({
                        "base": hp.base,
                        "paths": hp.paths,
                        "leftover": hp.leftover.iter().map(|e| e + 1).collect::<Vec<_>>(),
                        "tree": hp.tree.iter().map(|e| e + 1).collect::<Vec<_>>(),
                    }))
                }
            };
            emit(output.as_deref(), &text)?;
        }
        Command::Classify { input, curve } => {
            let (m, _) = surface(&input)?;
            let c = CrossCurve::from_json(&m, &read(&curve)?)?;
            println!("{}", pretty(&curve_report(&m, &c)?));
        }
        Command::Cover { input, rho, loops, output } => {
            let (m, _) = surface(&input)?;
            let rho = RhoMap::from_json(&read(&rho)?)?;
            let sys = LoopSystem::from_json(&m, &read(&loops)?)?;
            let cov = build_cover(&m, &labeling_from_loops(&m, &sys, &rho)?)?;
            write(&output, &cov.to_srf(&m))?;
            let mut side = output.clone().into_os_string();
            side.push(".labels.json");
            write(Path::new(&side), &cov.labels_json())?;
            println!(
                "{}",
                pretty(&json!({
                    "sheets": cov.sheets(),
                    "vertices": cov.num_vertices(),
                    "edges": cov.num_edges(),
                    "faces": cov.num_faces(),
                    "euler_characteristic": cov.euler_char(),
                    "orientable": cov.is_orientable(),
                    "components": cov.components.len(),
                }))
            );
        }
        Command::Oracle { input, goal, max_weight, cap } => {
            let (m, hash) = surface(&input)?;
            let goal = parse_goal(&goal, None)?;
            goal.check_feasible(m.euler_genus(), m.is_orientable())?;
            let curve = match max_weight {
                None => brute_shortest(&m, &goal, cap)?.curve,
                Some(w) => {
                    let w = parse_weight(&w).ok_or_else(|| Failure::Input(format!("bad weight {:?}", w)))?;
                    let budget = EnumerationBudget::by_weight(&m, w, cap)?;
                    let mut best = None;
                    for c in enumerate_simple_curves(&m, &budget)? {
                        let better = best.as_ref().is_none_or(|b: &surfcurve::oracle::Enumerated| c.length < b.length);
                        if goal.matches(c.class) && better {
                            best = Some(c);
                        }
                    }
                    let b = best.ok_or_else(|| {
                        Failure::Infeasible(format!("no {} curve of length at most {}", goal.name(), format_weight(&w)))
                    })?;
                    b.curve
                }
            };
            let mut rep = json!({
                "command": "oracle",
                "input_sha256": hash,
                "goal": goal.name(),
                "cap": cap,
            });
            merge(&mut rep, curve_report(&m, &curve)?);
            println!("{}", pretty(&rep));
        }
        Command::GenHardness { grid, epsilon, output } => {
            let gr = GridGraph::parse(&read(&grid)?)?;
            let eps = if epsilon == "auto" {
                default_epsilon(gr.n())
            } else {
                parse_weight(&epsilon).ok_or_else(|| Failure::Input(format!("bad epsilon {:?}", epsilon)))?
            };
            let inst = grid_to_surface(&gr, eps)?;
            emit(output.as_deref(), &inst.surface.to_srf())?;
            eprintln!(
                "n={} genus={} epsilon={} threshold={}",
                gr.n(),
                inst.surface.euler_genus(),
                format_weight(&inst.epsilon),
                format_weight(&inst.threshold)
            );
        }
        Command::Render { input, curve, output } => {
            let (m, _) = surface(&input)?;
            let c = match curve {
                Some(p) => Some(CrossCurve::from_json(&m, &read(&p)?)?),
                None => None,
            };
            emit(output.as_deref(), &render::svg(&m, c.as_ref()))?;
        }
    }
    Ok(())
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
        Err(Failure::Infeasible(msg)) => {
            eprintln!("infeasible: {}", msg);
            ExitCode::from(3)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {}", msg);
            ExitCode::from(4)
        }
    }
}
