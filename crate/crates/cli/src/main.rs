//! Command-line surface of the deformation engine.
//!
//! One command per invocation, over a session file of named definitions.
//! `--json` switches the report to its machine-readable mirror; reports are
//! byte-identical across runs for identical inputs unless `--timing` is
//! passed. `DQ_DEFAULT_ORDER` supplies `--order` when omitted.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use starlift_core::hochschild::AnsatzBounds;

use starlift::commands;
use starlift::report::Report;
use starlift::session::{parse_session, SessionFile};

#[derive(Parser)]
#[command(
    name = "starlift",
    about = "Exact deformation calculus: star products, Maurer-Cartan checks, and lifting of Poisson symmetries",
    version
)]
struct Cli {
    /// Session file with the named definitions
    #[arg(long, global = true)]
    session: Option<PathBuf>,
    /// Emit the JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Ansatz bounds for the exact solves, e.g. deg=2,dord=3
    #[arg(long, global = true)]
    bounds: Option<String>,
    /// Append wall-clock timing to the report (breaks byte determinism)
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check associativity defects order by order
    VerifyMc {
        star: String,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Extend an associative product order by order up to --order
    McExtend {
        star: String,
        #[arg(long)]
        order: Option<usize>,
        /// Coefficient-degree bound of the ansatz
        #[arg(long)]
        deg: Option<u32>,
        /// Per-slot derivative-order bound of the ansatz
        #[arg(long)]
        dord: Option<u32>,
    },
    /// Star-multiply two polynomials
    StarMul { star: String, f: String, g: String },
    /// Lift a Poisson vector field to a derivation of the star product
    LiftField {
        star: String,
        field: String,
        #[arg(long)]
        order: Option<usize>,
    },
    /// First-order obstruction class of the one-field lift
    ObstructionFirst { star: String, field: String },
    /// Lift a Lie-algebra action to derivations of the star product
    LiftAction {
        star: String,
        action: String,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Decide whether a derivation series D0 [D1 ...] is inner
    Inner {
        star: String,
        #[arg(required = true)]
        terms: Vec<String>,
    },
    /// Decide Lichnerowicz-Poisson triviality at a degree bound
    PoissonCohomology {
        pi: String,
        z: String,
        #[arg(long)]
        deg: Option<u32>,
    },
    /// Evaluate the Chevalley-Eilenberg differential of a cochain
    CeCheck {
        algebra: String,
        action: String,
        cochain: String,
    },
    /// Conjugate a star product by a formal series of operators T1 [T2 ...]
    Gauge {
        star: String,
        #[arg(required = true)]
        terms: Vec<String>,
    },
}

fn parse_bounds(spec: &str) -> Result<AnsatzBounds, String> {
    let mut deg = None;
    let mut dord = None;
    for part in spec.split(',') {
        match part.split_once('=') {
            Some(("deg", v)) => {
                deg = Some(v.parse::<u32>().map_err(|_| format!("bad deg '{v}'"))?)
            }
            Some(("dord", v)) => {
                dord = Some(v.parse::<u32>().map_err(|_| format!("bad dord '{v}'"))?)
            }
            _ => return Err(format!("expected deg=D,dord=R, found '{part}'")),
        }
    }
    match (deg, dord) {
        (Some(deg), Some(dord)) => Ok(AnsatzBounds::new(deg, dord)),
        _ => Err("bounds must give both deg=D and dord=R".to_string()),
    }
}

fn order_or_env(order: Option<usize>) -> Result<usize, String> {
    if let Some(n) = order {
        return Ok(n);
    }
    match std::env::var("DQ_DEFAULT_ORDER") {
        Ok(v) => v
            .parse::<usize>()
            .map_err(|_| format!("DQ_DEFAULT_ORDER='{v}' is not a valid order")),
        Err(_) => Err("missing --order (or set DQ_DEFAULT_ORDER)".to_string()),
    }
}

fn run(cli: &Cli, argv: Vec<String>) -> Report {
    let session_path = match &cli.session {
        Some(p) => p.clone(),
        None => return Report::error(argv, "missing --session <file>"),
    };
    let text = match std::fs::read_to_string(&session_path) {
        Ok(t) => t,
        Err(e) => {
            return Report::error(argv, format!("cannot read {}: {e}", session_path.display()))
        }
    };
    let session: SessionFile = match parse_session(&text) {
        Ok(s) => s,
        Err(e) => return Report::error(argv, e.to_string()),
    };
    let bounds = match cli.bounds.as_deref().map(parse_bounds) {
        None => None,
        Some(Ok(b)) => Some(b),
        Some(Err(e)) => return Report::error(argv, e),
    };

    let outcome = match &cli.command {
        Command::VerifyMc { star, order } => match order_or_env(*order) {
            Ok(order) => commands::verify_mc_cmd(&session, argv.clone(), star, order),
            Err(e) => return Report::error(argv, e),
        },
        Command::McExtend {
            star,
            order,
            deg,
            dord,
        } => match order_or_env(*order) {
            Ok(order) => {
                let base = bounds.unwrap_or(AnsatzBounds::new(2, 2));
                let eff = AnsatzBounds::new(deg.unwrap_or(base.deg), dord.unwrap_or(base.dord));
                commands::mc_extend_cmd(&session, argv.clone(), star, order, eff)
            }
            Err(e) => return Report::error(argv, e),
        },
        Command::StarMul { star, f, g } => commands::star_mul_cmd(&session, argv.clone(), star, f, g),
        Command::LiftField { star, field, order } => match order_or_env(*order) {
            Ok(order) => commands::lift_field_cmd(&session, argv.clone(), star, field, order, bounds),
            Err(e) => return Report::error(argv, e),
        },
        Command::ObstructionFirst { star, field } => {
            commands::obstruction_first_cmd(&session, argv.clone(), star, field, bounds)
        }
        Command::LiftAction { star, action, order } => match order_or_env(*order) {
            Ok(order) => {
                commands::lift_action_cmd(&session, argv.clone(), star, action, order, bounds)
            }
            Err(e) => return Report::error(argv, e),
        },
        Command::Inner { star, terms } => {
            commands::inner_cmd(&session, argv.clone(), star, terms, bounds)
        }
        Command::PoissonCohomology { pi, z, deg } => {
            let deg = deg.or(bounds.map(|b| b.deg)).unwrap_or(2);
            commands::poisson_cohomology_cmd(&session, argv.clone(), pi, z, deg)
        }
        Command::CeCheck {
            algebra,
            action,
            cochain,
        } => commands::ce_check_cmd(&session, argv.clone(), algebra, action, cochain),
        Command::Gauge { star, terms } => commands::gauge_cmd(&session, argv.clone(), star, terms),
    };
    match outcome {
        Ok(report) => report,
        Err(e) => Report::error(argv, e.message),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let start = Instant::now();
    let mut report = run(&cli, argv);
    if cli.timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    if cli.json {
        print!("{}", report.render_json());
    } else {
        print!("{}", report.render_text());
    }
    ExitCode::from(report.exit_code as u8)
}
