mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "monolab",
    version,
    about = "Multiply monogenic orders, unit equations and CNS"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Starting precision for certified complex arithmetic.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u32).range(8..=4096))]
    pub precision_bits: u32,
    /// Exponent or coordinate box for searches.
    #[arg(long = "box", global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub bound: Option<u32>,
    /// Element / state cap for searches.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: Option<u64>,
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Discriminant of an integer polynomial.
    Disc { poly: String },
    #[command(subcommand)]
    Order(OrderCmd),
    /// Z- or L-equivalence of two generators.
    Equiv {
        #[arg(value_parser = ["z", "l"])]
        kind: String,
        poly: String,
        alpha: String,
        beta: String,
    },
    /// Recover a Moebius matrix with beta = (a1 alpha + a2)/(a3 alpha + a4).
    Moebius {
        poly: String,
        alpha: String,
        beta: String,
    },
    /// Type I pairs from a GL(2, Z) matrix and units of Z[x]/(poly).
    Type1 {
        poly: String,
        /// a1,a2,a3,a4
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        matrix: Vec<i64>,
        /// A unit; when omitted, units in the --box (default 4) are tried.
        #[arg(long, allow_hyphen_values = true)]
        unit: Option<String>,
    },
    /// Members of the type II quartic family.
    Type2 {
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        /// Member index or range A..B.
        #[arg(long, default_value = "0")]
        m: String,
    },
    #[command(subcommand)]
    Uniteq(UniteqCmd),
    #[command(subcommand)]
    Prop61(Prop61Cmd),
    /// The tau tuple of alpha, and agreement with beta when given.
    Tau {
        poly: String,
        alpha: String,
        beta: Option<String>,
    },
    /// The epsilon system of a pair and its identities.
    Eps {
        poly: String,
        alpha: String,
        beta: String,
    },
    #[command(subcommand)]
    Cns(CnsCmd),
}

#[derive(Subcommand)]
enum OrderCmd {
    /// The order Z[alpha] as a lattice.
    From { poly: String, alpha: String },
    /// Membership of an element (JSON) in an order (JSON).
    Contains { order: String, element: String },
    /// Equality of two orders (JSON).
    Eq { left: String, right: String },
}

#[derive(Subcommand)]
enum UniteqCmd {
    /// a1 x + a2 y = 1 over the group; job {min_poly, generators, B?, a1?, a2?}.
    Linear { job: String },
    /// (x1-1)(x2-1)(x3-1) = (y1-1)(y2-1)(y3-1); job {min_poly, generators, B?}.
    Sextic { job: String },
    /// Degeneracy witness at a point; job {min_poly, point, B?, a?}.
    Degeneracy { job: String },
}

#[derive(Subcommand)]
enum Prop61Cmd {
    /// Classify a sextic solution; job {min_poly, x, y}.
    Classify { job: String },
    /// Compare two binomial products; job {min_poly, u, v, a, b}.
    Match { job: String },
    /// Factor search {min_poly, p, max_exponent, height, parts?} or sweep
    /// {min_poly, max_exponent, height}.
    Search { job: String },
}

#[derive(Subcommand)]
enum CnsCmd {
    /// Decide whether x is a CNS basis of Z[x]/(poly).
    Check { poly: String },
    /// Digit expansion of an element of Z[x]/(poly).
    Expand { poly: String, element: String },
    /// Count Z-inequivalent CNS bases of Z[x] among candidates.
    Ktimes {
        poly: String,
        candidates: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let g = cli.global.clone();
    match commands::run(cli.command, &g) {
        Ok(report) => {
            print!("{}", report.render(g.json));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(if e.is_assertion() { 2 } else { 1 })
        }
    }
}
