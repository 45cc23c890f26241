//! `nearvec`: count, classify and check near-vector spaces over GF(p^n).

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::Format;

#[derive(Parser)]
#[command(name = "nearvec", version, about = "Near-vector spaces over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Formula,
    Brute,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Verify {
    Exhaustive,
    Sampled,
}

#[derive(Subcommand)]
enum Command {
    /// Elements and multiplication table of G = U(p^n - 1)/<p>.
    Group {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Number of isomorphism classes per support size N, for a range of m.
    Table {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        /// Inclusive range `a..b`, or a single value.
        #[arg(long, value_parser = parse_range)]
        m_range: (usize, usize),
        #[arg(long, value_enum, default_value = "formula")]
        method: Method,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Isomorphism witness between two suitable sequences.
    Witness {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        /// Comma-separated, e.g. "1,1,5,5".
        #[arg(long)]
        s1: String,
        #[arg(long)]
        s2: String,
        /// Check the witness over the field itself.
        #[arg(long, value_enum)]
        verify: Option<Verify>,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Orbit representatives of St(1, m, G) with their orbits.
    Classes {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Check the near-vector space conditions for the action with the given exponents.
    Axioms {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        /// Defaults to the length of --seq.
        #[arg(long)]
        m: Option<usize>,
        /// Unit exponents, comma-separated.
        #[arg(long)]
        seq: String,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
}

fn parse_range(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (text, text),
    };
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("cannot parse {t:?} as a positive integer"))
    };
    let (a, b) = (parse(a)?, parse(b)?);
    if a == 0 || a > b {
        return Err(format!("range {text} must satisfy 1 <= a <= b"));
    }
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Group { p, n, format } => commands::group(p, n, format),
        Command::Table {
            p,
            n,
            m_range,
            method,
            format,
        } => commands::table(p, n, m_range, method, format),
        Command::Witness {
            p,
            n,
            s1,
            s2,
            verify,
            format,
        } => commands::witness(p, n, &s1, &s2, verify, format),
        Command::Classes { p, n, m, format } => commands::classes(p, n, m, format),
        Command::Axioms {
            p,
            n,
            m,
            seq,
            format,
        } => commands::axioms(p, n, m, &seq, format),
    };
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
