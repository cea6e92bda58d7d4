//! `cfkit`: command-line front end.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cfkit::attractor::Side;
use cfkit::cfspec::{preset_names, CfSpec};
use cfkit::dynamics::{GaloisMode, MapKind, Realization};
use cfkit::minkowski::conjugacy_check;
use cfkit::plot::{plot, PlotKind, PlotSpec};
use cfkit::report;
use cfkit::{Error, QNum};

#[derive(Parser)]
#[command(name = "cfkit", version, about = "Exact abstract continued fractions")]
struct Cli {
    /// Print JSON instead of a human summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Base,
    Dual,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapArg {
    Slow,
    Dual,
    Jump,
    Return,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Slow,
    Jump,
}

#[derive(Subcommand)]
enum Cmd {
    /// Admissibility, attractor verification and realization checks.
    Check { spec: String },
    /// Verify the given attractor of one side and iterate the Hutchinson operator.
    Attractor {
        spec: String,
        #[arg(long, value_enum, default_value = "base")]
        side: SideArg,
        #[arg(long, default_value_t = 200)]
        iters: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Orbit of a quadratic point under one of the Gauss-type maps.
    Orbit {
        spec: String,
        #[arg(long, default_value_t = 0)]
        node: usize,
        /// A point such as "2/5" or "(p q r D)" for (p + q√D)/r.
        #[arg(long)]
        point: String,
        #[arg(long, value_enum, default_value = "slow")]
        map: MapArg,
        /// Bound on the number of explored states.
        #[arg(long, default_value_t = 4096)]
        steps: usize,
    },
    /// The transducer of the code, and optionally the fiber of a point.
    Transducer {
        spec: String,
        #[arg(long)]
        point: Option<String>,
        #[arg(long, default_value_t = 0)]
        node: usize,
        #[arg(long, default_value_t = 4096)]
        steps: usize,
    },
    /// Sweep of purely periodic quadratic points against the conjugate criterion.
    Galois {
        spec: String,
        #[arg(long, default_value_t = 100)]
        dmax: i128,
        #[arg(long, default_value_t = 30)]
        f1max: i128,
        #[arg(long, value_enum, default_value = "jump")]
        mode: ModeArg,
        /// Write the full JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Exact check of the Minkowski conjugacy between the branches and their affine twins.
    Conjugacy {
        spec: String,
        #[arg(long, default_value_t = 30)]
        qmax: i128,
    },
    /// SVG graph of a map or of the attractors.
    Plot {
        spec: String,
        /// F, Fjump, Fdual, FfirstReturn or attractor.
        #[arg(long, default_value = "F")]
        kind: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        #[arg(long)]
        circular: Option<bool>,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Shipped presets.
    Preset {
        #[command(subcommand)]
        cmd: PresetCmd,
    },
}

#[derive(Subcommand)]
enum PresetCmd {
    List,
    Dump { name: String },
}

/// Input problems exit with 2, failed verifications with 1.
fn code_of(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::Io(_)
        | Error::OutOfRange(_)
        | Error::BadDiscriminant
        | Error::NotInInterval(_)
        | Error::NotInAttractor(_)
        | Error::RationalPoint => 2,
        _ => 1,
    }
}

fn emit<T: serde::Serialize + std::fmt::Display>(json: bool, v: &T) {
    if json {
        println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
    } else {
        println!("{v}");
    }
}

fn pass(ok: bool) -> u8 {
    if ok {
        0
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let json = cli.json;
    match cli.cmd {
        Cmd::Check { spec } => {
            let s = report::check(&report::load_spec_arg(&spec)?);
            emit(json, &s);
            Ok(pass(s.admissible))
        }
        Cmd::Attractor { spec, side, iters, tol } => {
            let side = match side {
                SideArg::Base => Side::Base,
                SideArg::Dual => Side::Dual,
            };
            let s = report::attractors(&report::load_spec_arg(&spec)?, side, iters, tol);
            emit(json, &s);
            Ok(pass(s.passed()))
        }
        Cmd::Orbit { spec, node, point, map, steps } => {
            let r = Realization::new(report::load_spec_arg(&spec)?)?;
            let map = match map {
                MapArg::Slow => MapKind::Slow,
                MapArg::Dual => MapKind::SlowDual,
                MapArg::Jump => MapKind::Jump,
                MapArg::Return => MapKind::FirstReturn,
            };
            check_node(node, r.nodes())?;
            let s = report::orbit(&r, map, node, QNum::parse(&point)?, steps)?;
            emit(json, &s);
            Ok(0)
        }
        Cmd::Transducer { spec, point, node, steps } => {
            let spec = report::load_spec_arg(&spec)?;
            let point = match point {
                Some(p) => {
                    check_node(node, spec.nodes())?;
                    Some((node, QNum::parse(&p)?))
                }
                None => None,
            };
            emit(json, &report::transducer(&spec, point, steps)?);
            Ok(0)
        }
        Cmd::Galois { spec, dmax, f1max, mode, report: out } => {
            let r = Realization::new(report::load_spec_arg(&spec)?)?;
            let mode = match mode {
                ModeArg::Slow => GaloisMode::Slow,
                ModeArg::Jump => GaloisMode::Jump,
            };
            let rep = r.galois_verify(dmax, f1max, mode)?;
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&rep).expect("serializable");
                std::fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&rep).expect("serializable"));
            } else {
                println!("spec: {} ({:?}, D ≤ {}, f1 ≤ {})", rep.spec, rep.mode, rep.dmax, rep.f1max);
                println!("tested: {}, purely periodic: {}", rep.tested, rep.purely_periodic);
                println!("counterexamples: {}", rep.counterexamples);
                println!("reversal checked: {}, failures: {}", rep.reversal_checked, rep.reversal_failures);
                for rec in rep.records.iter().filter(|r| r.purely_periodic != r.criterion_met).take(10) {
                    println!("  counterexample: ω = {} at node {}, ω' = {}", rec.omega, rec.node, rec.conj);
                }
                println!("passed: {}", rep.passed());
            }
            Ok(pass(rep.passed()))
        }
        Cmd::Conjugacy { spec, qmax } => {
            let rep = conjugacy_check(&report::load_spec_arg(&spec)?, qmax)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&rep).expect("serializable"));
            } else {
                println!("spec: {}, denominators ≤ {}", rep.spec, rep.qmax);
                println!("checked: {}, mismatches: {}", rep.checked, rep.mismatches.len());
                for m in rep.mismatches.iter().take(10) {
                    println!("  {} at {}: {} vs {}", m.letter, m.x, m.lhs, m.rhs);
                }
                println!("passed: {}", rep.passed());
            }
            Ok(pass(rep.passed()))
        }
        Cmd::Plot { spec, kind, out, resolution, circular, depth } => {
            let r = Realization::new(report::load_spec_arg(&spec)?)?;
            let mut ps = PlotSpec::new(kind.parse::<PlotKind>()?);
            ps.resolution = resolution;
            ps.depth = depth;
            if let Some(c) = circular {
                ps.circular = c;
            }
            let p = plot(&r, &ps)?;
            std::fs::write(&out, &p.svg).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
            println!("wrote {} ({} branches, {} curves)", out.display(), p.branches, p.curves);
            Ok(0)
        }
        Cmd::Preset { cmd: PresetCmd::List } => {
            for n in preset_names() {
                println!("{n}");
            }
            Ok(0)
        }
        Cmd::Preset { cmd: PresetCmd::Dump { name } } => {
            println!("{}", CfSpec::preset(&name)?.to_json());
            Ok(0)
        }
    }
}

fn check_node(node: usize, nodes: usize) -> Result<(), Error> {
    if node >= nodes {
        return Err(Error::OutOfRange(format!("node {node} of {nodes}")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(code_of(&e))
        }
    }
}
