use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use dpl::io::{
    emit_curves, load, run_fit, run_scan, word_frequencies, write_counts, InputFormat, InputSpec,
    ReportRecord, TextEncoding,
};
use dpl::{fit_beta, scan, IntegerSample, MleConfig, PowerLawModel, ScanConfig};

/// Fit discrete power laws to integer data and pick the lower cutoff.
#[derive(Debug, Parser)]
#[command(name = "dplfit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit at a fixed cutoff and compute the Monte Carlo p-value.
    Fit {
        #[command(flatten)]
        input: InputArgs,
        /// Lower cutoff a.
        #[arg(long, default_value_t = 1)]
        a: u64,
        #[command(flatten)]
        mc: McArgs,
        /// Write the machine-readable report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit every cutoff and select the smallest one with p above the threshold.
    Scan {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        scan: ScanArgs,
        /// Write the machine-readable report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write empirical and fitted f(n), S(n) as TSV.
    Curves {
        #[command(flatten)]
        input: InputArgs,
        /// Cutoff to fit at; without it a scan selects a*.
        #[arg(long)]
        a: Option<u64>,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Count word frequencies of a text and write them as a `value count` table.
    Tokenize {
        file: PathBuf,
        #[arg(long, default_value = "utf-8")]
        encoding: String,
        /// Write `word<TAB>frequency` lines instead of the counts table.
        #[arg(long)]
        words: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Input file.
    file: PathBuf,
    /// integers, counts or corpus.
    #[arg(long, default_value = "integers")]
    format: String,
    /// Text encoding of the input (utf-8 or latin-1).
    #[arg(long, default_value = "utf-8")]
    encoding: String,
}

impl InputArgs {
    fn spec(&self) -> Result<InputSpec> {
        Ok(InputSpec {
            path: self.file.clone(),
            format: self.format.parse::<InputFormat>()?,
            encoding: self.encoding.parse::<TextEncoding>()?,
        })
    }
}

#[derive(Debug, Args)]
struct McArgs {
    /// Number of simulated replicas.
    #[arg(long, default_value_t = 1000)]
    nsim: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// a* is the smallest cutoff with p strictly above this.
    #[arg(long, default_value_t = 0.20)]
    pthresh: f64,
    /// Smallest tail size tested.
    #[arg(long, default_value_t = 10)]
    min_tail: u64,
    /// Explicit cutoffs (comma separated) instead of every distinct value.
    #[arg(long, value_delimiter = ',')]
    cutoffs: Option<Vec<u64>>,
}

impl ScanArgs {
    fn config(&self, mc: &McArgs) -> ScanConfig {
        ScanConfig {
            a_values: self.cutoffs.clone(),
            min_tail: self.min_tail,
            n_sim: mc.nsim,
            p_threshold: self.pthresh,
            seed: mc.seed,
            ..ScanConfig::default()
        }
    }
}

fn finish(report: &ReportRecord, out: Option<&PathBuf>) -> Result<()> {
    print!("{}", report.to_text());
    if let Some(path) = out {
        fs::write(path, report.to_json())
            .with_context(|| format!("writing report to {}", path.display()))?;
    }
    Ok(())
}

fn curves(
    input: &InputArgs,
    a: Option<u64>,
    mc: &McArgs,
    scan_args: &ScanArgs,
    out: &Path,
) -> Result<()> {
    let sample: IntegerSample = load(&input.spec()?)?.sample;
    let (a, beta) = match a {
        Some(a) => {
            let tail = sample.truncate(a)?;
            let fit = fit_beta(&tail.sufficient_stat(a)?, a, &MleConfig::default())?;
            (a, fit.beta_emp)
        }
        None => {
            let result = scan(&sample, &scan_args.config(mc))?;
            match (result.a_star, result.beta_star) {
                (Some(a), Some(b)) => (a, b),
                _ => bail!(
                    "no acceptable power-law tail (no cutoff with p > {}); pass --a to plot a fixed cutoff",
                    scan_args.pthresh
                ),
            }
        }
    };
    let model = PowerLawModel::new(a, beta)?;
    let tail = sample.truncate(a)?;
    let file = emit_curves(&tail, &model, out)?;
    println!(
        "wrote {} rows to {} (a = {a}, beta = {beta:.4})",
        file.rows.len(),
        out.display()
    );
    Ok(())
}

fn tokenize(file: &PathBuf, encoding: &str, words: bool, out: Option<&PathBuf>) -> Result<()> {
    let bytes = fs::read(file).with_context(|| format!("reading {}", file.display()))?;
    let text = dpl::io::decode(&bytes, encoding.parse()?)?;
    let freq = word_frequencies(&text);
    if freq.is_empty() {
        bail!("no tokens in {}", file.display());
    }
    let tokens: u64 = freq.values().sum();
    eprintln!("{tokens} tokens, {} types", freq.len());

    let mut buf = Vec::new();
    if words {
        let mut pairs: Vec<(&String, &u64)> = freq.iter().collect();
        pairs.sort_by(|x, y| y.1.cmp(x.1).then(x.0.cmp(y.0)));
        for (w, c) in pairs {
            writeln!(buf, "{w}\t{c}")?;
        }
    } else {
        let sample = IntegerSample::from_values(freq.into_values())?;
        write_counts(&sample, &mut buf)?;
    }
    match out {
        Some(path) => {
            fs::write(path, buf).with_context(|| format!("writing {}", path.display()))?
        }
        None => io::stdout().write_all(&buf)?,
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Fit { input, a, mc, out } => {
            let report = run_fit(&input.spec()?, *a, mc.nsim, mc.seed)?;
            finish(&report, out.as_ref())
        }
        Command::Scan {
            input,
            mc,
            scan,
            out,
        } => {
            let report = run_scan(&input.spec()?, &scan.config(mc))?;
            finish(&report, out.as_ref())
        }
        Command::Curves {
            input,
            a,
            mc,
            scan,
            out,
        } => curves(input, *a, mc, scan, out),
        Command::Tokenize {
            file,
            encoding,
            words,
            out,
        } => tokenize(file, encoding, *words, out.as_ref()),
    }
}
