//! `ergoalg`: batch front end over JSON descriptions of systems, events and algebras.
//!
//! Exit status: 0 on success, 2 for unreadable or malformed input, 3 when an
//! operation's preconditions fail, 4 when a budget is exceeded.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};
use ergoalg::conditioning::{canonical_base, is_independent, type_distance};
use ergoalg::entropy::{entropy_with, h_sequence_with, EntropyOptions};
use ergoalg::towers::{
    aperiodicity_witness, approximate_conjugation, cycle_approximation, periodic_decomposition, product_system,
    rokhlin_tower,
};
use ergoalg::{Event, FiniteAlgebra, Rational, System};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use report::{Format, Report, Table};

#[derive(Parser)]
#[command(name = "ergoalg", version, about = "Exact computations in probability algebras with automorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format. Defaults to csv for `entropy` and `h-seq`, json otherwise.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,

    /// Mantissa bits kept in reported entropy values.
    #[arg(long, global = true, default_value_t = 53,
          value_parser = clap::value_parser!(u32).range(1..=53))]
    precision: u32,

    /// Largest number of nodes accepted in a symbolic map.
    #[arg(long, global = true, env = "ERGOALG_DEPTH_BUDGET", default_value_t = 64)]
    depth_budget: usize,

    /// Seed for randomized search order. Every construction is currently deterministic,
    /// so the value does not change any output.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Rokhlin tower of height n leaving less than ε uncovered.
    Tower {
        #[arg(long)]
        system: PathBuf,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, value_parser = rational)]
        eps: Rational,
    },
    /// Event b with m(b ∩ τⁿb) ≤ ε and |m(b) − 1/2| ≤ ε.
    Witness {
        #[arg(long)]
        system: PathBuf,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, value_parser = rational)]
        eps: Rational,
    },
    /// Cycle of period N with a certified distance to the map.
    CycleApprox {
        #[arg(long)]
        system: PathBuf,
        #[arg(short = 'N')]
        period: usize,
    },
    /// Conjugate of the second system within ε of the first.
    Conjugate {
        /// Two systems, in order.
        #[arg(long, required = true)]
        system: Vec<PathBuf>,
        #[arg(long, value_parser = rational)]
        eps: Rational,
    },
    /// Conditional entropy H(A/C).
    Entropy {
        #[arg(long)]
        algebra: PathBuf,
        /// Conditioning algebra; trivial when omitted.
        #[arg(long)]
        over: Option<PathBuf>,
    },
    /// Cesàro and conditional entropy sequences for k = 1..=n.
    HSeq {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        algebra: PathBuf,
        #[arg(short = 'n')]
        n: usize,
    },
    /// Distance between the types of two partitions over an algebra.
    Distance {
        /// Two files, each an array of events forming a partition.
        #[arg(long, required = true)]
        event: Vec<PathBuf>,
        /// Base algebra; trivial when omitted.
        #[arg(long)]
        algebra: Option<PathBuf>,
    },
    /// Whether a tuple is independent of an algebra over a base algebra.
    Independent {
        /// An event or an array of events.
        #[arg(long)]
        event: PathBuf,
        #[arg(long)]
        algebra: PathBuf,
        /// Base algebra; trivial when omitted.
        #[arg(long)]
        over: Option<PathBuf>,
    },
    /// Periodic parts by least period and the aperiodic remainder.
    Decompose {
        #[arg(long)]
        system: PathBuf,
    },
    /// Product of two systems.
    Product {
        /// Two systems, in order.
        #[arg(long, required = true)]
        system: Vec<PathBuf>,
    },
    /// Canonical base of a tuple over an algebra.
    Cb {
        /// An event or an array of events.
        #[arg(long)]
        event: PathBuf,
        #[arg(long)]
        algebra: PathBuf,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e: ergoalg::Error| e.to_string())
}

enum Failure {
    Input(String),
    Domain(ergoalg::Error),
}

impl From<ergoalg::Error> for Failure {
    fn from(e: ergoalg::Error) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    fn status(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Domain(e) if e.is_parse() => 2,
            Failure::Domain(e) if e.is_budget() => 4,
            Failure::Domain(_) => 3,
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_value(read_json(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_system(path: &Path, budget: usize) -> Result<System, Failure> {
    let sys: System = load(path)?;
    sys.map().check_depth(budget)?;
    Ok(sys)
}

/// A single event or an array of events.
fn load_tuple(path: &Path) -> Result<Vec<Event>, Failure> {
    match read_json(path)? {
        Value::Array(items) => items
            .into_iter()
            .map(|v| serde_json::from_value(v).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))))
            .collect(),
        v => Ok(vec![serde_json::from_value(v).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?]),
    }
}

fn load_or_trivial(path: Option<&PathBuf>, like: &Event) -> Result<FiniteAlgebra, Failure> {
    match path {
        Some(p) => load(p),
        None => Ok(FiniteAlgebra::trivial(&like.carrier())),
    }
}

fn two<'a>(paths: &'a [PathBuf], flag: &str) -> (&'a Path, &'a Path) {
    if paths.len() != 2 {
        Cli::command()
            .error(
                clap::error::ErrorKind::WrongNumberOfValues,
                format!("--{flag} must be given exactly twice, got {}", paths.len()),
            )
            .exit();
    }
    (&paths[0], &paths[1])
}

fn to_json(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

fn report(json: Value, table: Table) -> Report {
    Report {
        json,
        table,
        default_format: Format::Json,
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let budget = cli.depth_budget;
    let options = EntropyOptions::with_precision(cli.precision)?;
    Ok(match &cli.command {
        Command::Tower { system, n, eps } => {
            let sys = load_system(system, budget)?;
            let t = rokhlin_tower(&sys, *n, eps)?;
            let mut table = Table::fields()
                .field("height", t.height)
                .field("residual", &t.residual)
                .field("base", &t.base);
            for (i, level) in t.levels.iter().enumerate() {
                table = table.field(&format!("level {i} measure"), level.measure());
            }
            report(to_json(&t), table)
        }
        Command::Witness { system, n, eps } => {
            let sys = load_system(system, budget)?;
            let w = aperiodicity_witness(&sys, *n, eps)?;
            let table = Table::fields()
                .field("measure", &w.measure)
                .field("overlap", &w.overlap)
                .field("event", &w.event);
            report(to_json(&w), table)
        }
        Command::CycleApprox { system, period } => {
            let sys = load_system(system, budget)?;
            let c = cycle_approximation(&sys, *period)?;
            let mut table = Table::fields().field("period", c.period);
            if let Some(b) = &c.bound {
                table = table.field("bound", b);
            }
            if let Some(r) = &c.rho {
                let shown = if r.is_exact() {
                    r.lo.to_string()
                } else {
                    format!("[{}, {}]", r.lo, r.hi)
                };
                table = table.field("true rho", shown);
            }
            let table = table.field("base", &c.base).field("pieces", c.cycle.pieces().len());
            report(to_json(&c), table)
        }
        Command::Conjugate { system, eps } => {
            let (a, b) = two(system, "system");
            let (a, b) = (load_system(a, budget)?, load_system(b, budget)?);
            let res = approximate_conjugation(&a, &b, eps)?;
            let table = Table::fields()
                .field("certificate", &res.certificate)
                .field("conjugator pieces", res.conjugator.pieces().len());
            report(to_json(&res), table)
        }
        Command::Entropy { algebra, over } => {
            let a: FiniteAlgebra = load(algebra)?;
            let c = match over {
                Some(p) => load(p)?,
                None => FiniteAlgebra::trivial(a.carrier()),
            };
            let h = entropy_with(&a, &c, options)?;
            let table = Table::new(&["value", "exact_cell_count"])
                .row(vec![h.value.to_string(), h.cell_count().to_string()]);
            Report {
                json: to_json(&h),
                table,
                default_format: Format::Csv,
            }
        }
        Command::HSeq { system, algebra, n } => {
            let sys = load_system(system, budget)?;
            let a: FiniteAlgebra = load(algebra)?;
            let rows = h_sequence_with(&sys, &a, *n, options)?;
            let mut table = Table::new(&["k", "cesaro", "conditional", "exact_cell_count"]);
            for r in &rows {
                table = table.row(vec![
                    r.k.to_string(),
                    r.cesaro.value.to_string(),
                    r.conditional.value.to_string(),
                    r.conditional.cell_count().to_string(),
                ]);
            }
            Report {
                json: to_json(&rows),
                table,
                default_format: Format::Csv,
            }
        }
        Command::Distance { event, algebra } => {
            let (a, b) = two(event, "event");
            let (a, b) = (load_tuple(a)?, load_tuple(b)?);
            let first = a.first().ok_or_else(|| Failure::Input("empty partition".into()))?;
            let c = load_or_trivial(algebra.as_ref(), first)?;
            let d = type_distance(&a, &b, &c)?;
            report(
                serde_json::json!({ "distance": to_json(&d) }),
                Table::fields().field("distance", &d),
            )
        }
        Command::Independent { event, algebra, over } => {
            let tuple = load_tuple(event)?;
            let b: FiniteAlgebra = load(algebra)?;
            let c = match over {
                Some(p) => load(p)?,
                None => FiniteAlgebra::trivial(b.carrier()),
            };
            let yes = is_independent(&tuple, &c, &b)?;
            report(
                serde_json::json!({ "independent": yes }),
                Table::fields().field("independent", yes),
            )
        }
        Command::Decompose { system } => {
            let sys = load_system(system, budget)?;
            let d = periodic_decomposition(sys.map())?;
            let mut table = Table::fields();
            for (k, part) in &d.periodic_parts {
                table = table.field(&format!("period {k}"), part.measure());
            }
            let table = table.field("aperiodic", d.aperiodic_part.measure());
            report(to_json(&d), table)
        }
        Command::Product { system } => {
            let (a, b) = two(system, "system");
            let (a, b) = (load_system(a, budget)?, load_system(b, budget)?);
            let p = product_system(&a, &b)?;
            p.map().check_depth(budget)?;
            let table = Table::fields()
                .field("carrier", p.carrier())
                .field("nodes", p.map().node_count());
            report(to_json(&p), table)
        }
        Command::Cb { event, algebra } => {
            let tuple = load_tuple(event)?;
            let c: FiniteAlgebra = load(algebra)?;
            let cb = canonical_base(&tuple, &c)?;
            let mut table = Table::new(&["atom", "measure", "event"]);
            for (i, atom) in cb.atoms().iter().enumerate() {
                table = table.row(vec![i.to_string(), atom.measure().to_string(), atom.to_string()]);
            }
            report(to_json(&cb), table)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            print!("{}", r.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(f) => {
            let status = f.status();
            match f {
                Failure::Input(msg) => eprintln!("error: {msg}"),
                Failure::Domain(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(status)
        }
    }
}
