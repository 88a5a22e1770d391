use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mmtr_core::airy::AiryData;
use mmtr_core::eo::{EoEngine, SpectralCurve};
use mmtr_core::npoint::NPointBuilder;
use mmtr_core::report::{self, Suite};
use mmtr_core::virasoro::{sequence_check, CorrelatorKey, CorrelatorTable, TableRecord};

/// Exact correlators, n-point functions and recursion checks for the
/// even-coupling Hermitian one-matrix model.
#[derive(Parser, Debug)]
#[command(name = "mmtr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Write output to this file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Connected correlator <p_{2a_1} ... p_{2a_n}>_g.
    Correlator {
        #[arg(short, long)]
        genus: usize,
        /// Comma-separated positive insertions, e.g. 1,1,2.
        #[arg(short = 'a', long, value_delimiter = ',', required = true)]
        insertions: Vec<u32>,
    },
    /// All genus-g correlators with total degree at most the bound.
    Table {
        #[arg(short, long)]
        genus: usize,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        bound: u32,
    },
    /// The n-point function G_{g,n} in the coordinates y1..yn.
    Npoint {
        #[arg(short, long)]
        genus: usize,
        #[arg(short, long)]
        n: usize,
    },
    /// Recursion output w_{g,n} as a coefficient of dz_1..dz_n.
    Omega {
        #[arg(short, long)]
        genus: usize,
        #[arg(short, long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Curve::Even)]
        curve: Curve,
    },
    /// Times, conjugate times and Bergman coefficients of the Airy coordinate.
    Ladders {
        #[arg(long, default_value_t = 4)]
        k_max: u32,
    },
    /// Run a verification suite; exit 1 if any check fails.
    Verify {
        #[arg(value_parser = Suite::NAMES)]
        suite: String,
        /// Largest 2g - 2 + n for the recursion and structure checks.
        #[arg(long, default_value_t = 3)]
        max: usize,
    },
    /// Integer sequences read off from genus-zero correlators.
    Sequences {
        /// catalan, A001791 or A007946.
        name: String,
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        count: u32,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Curve {
    Even,
    Airy,
}

enum Failure {
    Usage(String),
    Check(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) | Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Check(m) | Failure::Io(m) => m,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn csv_rows(records: &[TableRecord]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["g", "a", "value"])
        .map_err(|e| Failure::Io(e.to_string()))?;
    for r in records {
        let a = r.a.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        w.write_record([r.g.to_string(), a, r.value.clone()])
            .map_err(|e| Failure::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn render_records(records: &[TableRecord], format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Json => json(&records),
        Format::Csv => csv_rows(records)?,
        Format::Text => records
            .iter()
            .map(|r| {
                let a = r.a.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
                format!("g={} a={a} {}\n", r.g, r.value)
            })
            .collect(),
    })
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Correlator { genus, insertions } => {
            let key = CorrelatorKey::new(*genus, insertions).map_err(usage)?;
            let value = CorrelatorTable::new()
                .correlator(key.g, &key.a)
                .map_err(usage)?;
            let rec = TableRecord {
                g: *genus,
                a: insertions.clone(),
                value: value.to_string(),
            };
            match cli.format {
                Format::Text => Ok(format!("{}\n", rec.value)),
                Format::Json => Ok(json(&rec)),
                Format::Csv => csv_rows(&[rec]),
            }
        }
        Command::Table { genus, bound } => {
            let records = CorrelatorTable::new().table(*genus, *bound);
            render_records(&records, cli.format)
        }
        Command::Npoint { genus, n } => {
            let gf = NPointBuilder::new().build_g(*genus, *n).map_err(usage)?;
            Ok(match cli.format {
                Format::Json => {
                    json(&serde_json::json!({"g": genus, "n": n, "value": gf.render()}))
                }
                _ => format!("{}\n", gf.render()),
            })
        }
        Command::Omega { genus, n, curve } => {
            let c = match curve {
                Curve::Even => SpectralCurve::even_coupling(),
                Curve::Airy => SpectralCurve::airy(),
            };
            let e = EoEngine::new(c).map_err(|e| Failure::Check(e.to_string()))?;
            let w = e.eo_omega(*genus, *n).map_err(usage)?;
            Ok(match cli.format {
                Format::Json => json(
                    &serde_json::json!({"g": genus, "n": n, "curve": e.curve().name, "value": w.render()}),
                ),
                _ => format!("{}\n", w.render()),
            })
        }
        Command::Ladders { k_max } => {
            let d = AiryData::new(*k_max).map_err(|e| Failure::Check(e.to_string()))?;
            Ok(json(&d.to_json()))
        }
        Command::Verify { suite, max } => {
            let suite: Suite = suite.parse().map_err(Failure::Usage)?;
            let r = report::run(suite, *max);
            let out = match cli.format {
                Format::Json => r.to_json() + "\n",
                _ => r.to_text(),
            };
            if let Some(f) = r.first_failure() {
                // report first, then the failure
                emit(cli, &out)?;
                return Err(Failure::Check(format!("{} failed: {}", f.name, f.detail)));
            }
            Ok(out)
        }
        Command::Sequences { name, count } => {
            let v =
                sequence_check(&CorrelatorTable::new(), name, *count as usize).map_err(usage)?;
            let line = v
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            Ok(match cli.format {
                Format::Json => json(&v.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                _ => format!("{line}\n"),
            })
        }
    }
}

fn emit(cli: &Cli, out: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => {
            fs::write(path, out).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
        None => io::stdout()
            .write_all(out.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| emit(&cli, &out));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
