use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use weylperm::bridge_dp::{bridge_dp, sample_weyl_bridge};
use weylperm::dyson::DEFAULT_GRID;
use weylperm::experiments::{compare, sample_artifacts, verify, CompareMode, Format, RunConfig, MARGINAL_TIMES};
use weylperm::perm::{enumerate_avoiders, words_from_perm};
use weylperm::stats::{render_table, DEFAULT_ALPHA};
use weylperm::SeededRng;

#[derive(Parser)]
#[command(name = "weylperm", version, about = "Permutations avoiding a decreasing pattern and their Dyson bridge limit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 20)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 1)]
    replicas: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Time steps of the Brownian grid used by the Dyson simulator.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            n: self.n,
            d: self.d,
            replicas: self.replicas,
            seed: self.seed,
            grid: self.grid,
            alpha: self.alpha,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample permutations and write their scaled path families.
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Repeatable; defaults to csv, json and svg.
        #[arg(long = "format", value_parser = parse_format)]
        formats: Vec<Format>,
    },
    /// KS comparison of finite-n marginals with the Dyson bridge.
    Compare {
        #[command(flatten)]
        common: Common,
        /// perm, self or excursion.
        #[arg(long, default_value = "perm", value_parser = parse_mode)]
        mode: CompareMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive and exact consistency checks.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List every permutation of length n with no decreasing subsequence longer than d.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Print the word pair of each permutation instead.
        #[arg(long)]
        words: bool,
    },
    /// Count bridges confined to the chamber and optionally sample some.
    BridgeDp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Writes the final DP layer as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: weylperm::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<CompareMode, String> {
    s.parse().map_err(|e: weylperm::Error| e.to_string())
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> weylperm::Result<()> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    serde_json::to_writer_pretty(BufWriter::new(fs::File::create(path)?), value)?;
    Ok(())
}

fn run(cli: Cli) -> weylperm::Result<bool> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::Sample { common, out: dir, formats } => {
            let formats = if formats.is_empty() { vec![Format::Csv, Format::Json, Format::Svg] } else { formats };
            let summary = sample_artifacts(&common.config(), &dir, &formats)?;
            writeln!(out, "{:>8} {:>14} {:>14} {:>14}", "replica", "sup_distance", "max_abs_s_hat", "order_viol")?;
            for r in &summary.records {
                writeln!(
                    out,
                    "{:>8} {:>14.6} {:>14.6} {:>14.3e}",
                    r.replica, r.sup_distance, r.max_abs_s_hat, r.order_violation
                )?;
            }
            writeln!(out, "wrote {}", dir.display())?;
            Ok(summary.records.iter().all(|r| r.endpoints_pinned))
        }
        Command::Compare { common, mode, out: path } => {
            let summary = compare(&common.config(), mode, &MARGINAL_TIMES)?;
            write!(out, "{}", render_table(&summary.reports))?;
            if let Some(path) = path {
                write_json(&path, &summary)?;
            }
            Ok(summary.all_pass)
        }
        Command::Verify { seed, out: path } => {
            let report = verify(seed)?;
            for c in &report.checks {
                let status = match (c.pass, c.gated) {
                    (true, _) => "PASS",
                    (false, true) => "FAIL",
                    (false, false) => "INFO",
                };
                writeln!(out, "{status:<5} {:<24} {}", c.name, c.detail)?;
            }
            if let Some(path) = path {
                write_json(&path, &report)?;
            }
            Ok(report.all_pass)
        }
        Command::Enumerate { n, d, words } => {
            for sigma in enumerate_avoiders(n, d)? {
                if words {
                    writeln!(out, "{}", words_from_perm(&sigma, d)?)?;
                } else {
                    writeln!(out, "{sigma}")?;
                }
            }
            Ok(true)
        }
        Command::BridgeDp { n, d, samples, seed, out: path } => {
            let table = bridge_dp(n, d)?;
            writeln!(out, "# weylperm bridge-dp n={n} d={d} seed={seed}")?;
            writeln!(out, "bridges {}", table.bridge_count())?;
            let mut rng = SeededRng::new(seed, 0);
            for _ in 0..samples {
                writeln!(out, "{}", sample_weyl_bridge(&table, &mut rng))?;
            }
            if let Some(path) = path {
                if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                    fs::create_dir_all(dir)?;
                }
                table.write_json(BufWriter::new(fs::File::create(&path)?))?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
