use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hermcong::verify::scenarios::{export_table, fq_command, scalars_report, verify_example, verify_main};
use hermcong::verify::{OutputFormat, RunConfig, Verdict, VerificationReport};

#[derive(Parser)]
#[command(name = "hermcong", about = "Hermitian Eisenstein series coefficients and mod-p congruence checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Common {
    /// Flat `key = value` configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    disc: Option<u64>,
    #[arg(long)]
    prime: Option<u64>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    max_diag: Option<i64>,
    #[arg(long)]
    max_h: Option<u64>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// json or csv (export-table only)
    #[arg(long)]
    format: Option<String>,
    /// Largest residue group enumerated by the density routes.
    #[arg(long)]
    cap_group_size: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Degree-m congruence, prefactor valuation and essential witness.
    VerifyMain(Common),
    /// The worked example at k = p + 1 in degrees 1 and 2.
    VerifyExample(Common),
    /// The local polynomial F_q(H, X) of a matrix key such as `2;1,2;2,1`.
    Fq {
        key: String,
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Scalar identities: von Staudt-Clausen, Kummer, class numbers, Hilbert symbols.
    Scalars(Common),
    /// Writes the coefficient table to stdout.
    ExportTable {
        #[arg(long)]
        weight: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
}

fn config(c: &Common) -> hermcong::Result<RunConfig> {
    let mut cfg = match &c.config {
        Some(path) => RunConfig::from_text(&std::fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    let flags: [(&str, Option<String>); 8] = [
        ("disc", c.disc.map(|v| v.to_string())),
        ("prime", c.prime.map(|v| v.to_string())),
        ("degree", c.degree.map(|v| v.to_string())),
        ("max_diag", c.max_diag.map(|v| v.to_string())),
        ("max_h", c.max_h.map(|v| v.to_string())),
        ("cache_dir", c.cache_dir.as_ref().map(|p| p.display().to_string())),
        ("format", c.format.clone()),
        ("cap_group_size", c.cap_group_size.map(|v| v.to_string())),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, &v)?;
        }
    }
    Ok(cfg)
}

fn emit(report: &VerificationReport) -> ExitCode {
    let _ = writeln!(io::stdout(), "{}", report.to_json());
    if report.verdict == Verdict::Falsified {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn run(cli: Cli) -> hermcong::Result<ExitCode> {
    match cli.command {
        Command::VerifyMain(c) => Ok(emit(&verify_main(&config(&c)?)?)),
        Command::VerifyExample(c) => Ok(emit(&verify_example(&config(&c)?)?)),
        Command::Scalars(c) => Ok(emit(&scalars_report(&config(&c)?))),
        Command::Fq { key, q, common } => {
            let _ = writeln!(io::stdout(), "{}", fq_command(&config(&common)?, &key, q)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportTable { weight, common } => {
            let cfg = config(&common)?;
            let table = export_table(&cfg, weight)?;
            let out = io::stdout().lock();
            match cfg.format {
                OutputFormat::Json => table.write_jsonl_with_locals(out)?,
                OutputFormat::Csv => table.write_csv(out)?,
            }
            io::stdout().flush()?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
