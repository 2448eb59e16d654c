//! `zzpa`: construct and certify zig-zag maps of pseudo-Anosov type.
//!
//! Exit codes: 0 success or verdict reached, 1 verification failure,
//! 2 invalid input, 3 undecided.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use zzpa::classify::FractionLabel;
use zzpa::exact::IntPoly;
use zzpa::zigzag::{Sign, DEFAULT_MAX_STEPS};
use zzpa::Error;

#[derive(Parser)]
#[command(name = "zzpa", version, about = "Zig-zag maps of pseudo-Anosov type, computed exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Label {
    /// modality, at least 2
    m: u32,
    /// reduced fraction a/b in (0, 1)
    q: String,
}

#[derive(Subcommand)]
enum Command {
    /// Build the map for (m, a/b) and run every check
    Construct {
        #[command(flatten)]
        label: Label,
        /// write the graph of the map as SVG
        #[arg(long)]
        svg: Option<String>,
        /// include wall-clock timings in the report
        #[arg(long)]
        timings: bool,
    },
    /// Closed-form digit polynomial, cross-checked against the orbit of 1
    DigitPoly {
        #[command(flatten)]
        label: Label,
    },
    /// Decide pseudo-Anosov type for a label or for (m, sign, polynomial)
    CheckPa {
        /// modality when --poly is given
        #[arg(long)]
        m: Option<u32>,
        /// +1 for f(0) = 0, -1 for f(0) = 1
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        sign: i8,
        /// ascending integer coefficients of a polynomial with lambda as its largest root
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        /// m and a/b, when --poly is absent
        label: Vec<String>,
    },
    /// Exact limit set of the Galois lift
    LimitSet {
        #[command(flatten)]
        label: Label,
        #[arg(long)]
        svg: Option<String>,
    },
    /// Salem family report for one g or a range g1..g2
    Salem {
        g: Option<u32>,
        #[arg(long)]
        range: Option<String>,
        /// CSV table instead of JSON
        #[arg(long)]
        csv: bool,
    },
    /// lambda against the label for every a/b with b <= bmax, as CSV
    Experiment {
        m: u32,
        #[arg(long, default_value_t = 12)]
        bmax: u64,
    },
    /// Re-check a saved JSON report
    Verify { path: String },
}

fn parse_label(m: u32, q: &str) -> zzpa::Result<FractionLabel> {
    if m < 2 {
        return Err(Error::UnimodalRegime);
    }
    q.parse()
}

fn parse_range(s: &str) -> zzpa::Result<(u32, u32)> {
    let bad = || Error::InvalidInput(format!("expected g1..g2, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_poly(s: &str) -> zzpa::Result<IntPoly> {
    s.parse::<IntPoly>()
}

fn run(cli: Cli) -> zzpa::Result<(commands::Outcome, Option<String>)> {
    use commands::*;
    let out = match cli.command {
        Command::Construct { label, svg, timings } => {
            construct(label.m, parse_label(label.m, &label.q)?, svg.as_deref(), timings)?
        }
        Command::DigitPoly { label } => digit_poly(label.m, parse_label(label.m, &label.q)?)?,
        Command::CheckPa {
            m,
            sign,
            poly,
            max_steps,
            label,
        } => match poly {
            Some(p) => {
                let m = m.ok_or_else(|| Error::InvalidInput("--poly needs --m".into()))?;
                let sign = match sign {
                    1 => Sign::Positive,
                    -1 => Sign::Negative,
                    s => return Err(Error::InvalidInput(format!("sign must be 1 or -1, got {s}"))),
                };
                check_pa_poly(&parse_poly(&p)?, m, sign, max_steps)?
            }
            None => {
                let [m, q] = label.as_slice() else {
                    return Err(Error::InvalidInput("expected `m a/b` or --poly".into()));
                };
                let m: u32 = m
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad modality {m:?}")))?;
                check_pa_label(m, parse_label(m, q)?, max_steps)?
            }
        },
        Command::LimitSet { label, svg } => limit_set(label.m, parse_label(label.m, &label.q)?, svg.as_deref())?,
        Command::Salem { g, range, csv } => match (g, range) {
            (Some(g), None) => salem(g, g, true, csv)?,
            (None, Some(r)) => {
                let (a, b) = parse_range(&r)?;
                salem(a, b, false, csv)?
            }
            _ => return Err(Error::InvalidInput("give either g or --range g1..g2".into())),
        },
        Command::Experiment { m, bmax } => {
            if m < 2 {
                return Err(Error::UnimodalRegime);
            }
            let (o, summary) = experiment(m, bmax)?;
            return Ok((o, Some(summary)));
        }
        Command::Verify { path } => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?;
            verify(&text)?
        }
    };
    Ok((out, None))
}

fn error_kind(e: &Error) -> (&'static str, u8) {
    match e {
        Error::Undecided(_) => ("undecided", 3),
        Error::Verification(_) | Error::ZeroDivisor | Error::FieldMismatch | Error::EndpointRoot(_) => {
            ("verification_failed", 1)
        }
        _ => ("invalid_input", 2),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let err = json!({ "error": { "kind": "invalid_input", "message": e.to_string().trim() } });
            eprintln!("{err}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok((out, summary)) => {
            print!("{}", out.stdout);
            if let Some(s) = summary {
                eprintln!("{s}");
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let (kind, code) = error_kind(&e);
            let err = json!({ "error": { "kind": kind, "message": e.to_string() } });
            eprintln!("{err}");
            ExitCode::from(code)
        }
    }
}
