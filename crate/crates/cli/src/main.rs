//! `gapcode`: encode, decode, tabulate and verify gap-based constant-weight codes.
//!
//! Messages and codewords travel one per line. Exit status: 0 success,
//! 1 usage error, 2 data error (some line failed), 3 verification failure.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gapcode::analysis::BoundsReport;
use gapcode::oracle::{self, DEFAULT_BUDGET_LOG2};
use gapcode::sequences::{f_ell, f_hat};
use gapcode::{BitString, CharSeq, Code, CodeParams, Codeword, Construction, DecodeMode, Error};
use rayon::prelude::*;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gapcode",
    version,
    about = "Constant-weight codes that carry data in the gaps between ones"
)]
struct Cli {
    /// Worker threads for batch work; output order always follows input order.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print (n, k, w) and the characteristic sequence of a code.
    Params {
        #[command(flatten)]
        code: CodeArgs,
        /// Print as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Encode one message per input line.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        io: IoArgs,
        /// How messages are written.
        #[arg(long, value_enum, default_value_t = MessageFormat::Bits)]
        format: MessageFormat,
        /// How codewords are written.
        #[arg(long, value_enum, default_value_t = WordFormat::Ones)]
        output_format: WordFormat,
    },
    /// Decode one codeword per input line (`n=16:1,2,10,14` or a 0/1 string).
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        io: IoArgs,
        /// How recovered messages are written.
        #[arg(long, value_enum, default_value_t = MessageFormat::Bits)]
        format: MessageFormat,
        /// Reject words the encoder cannot produce (default).
        #[arg(long, conflicts_with = "permissive")]
        strict: bool,
        /// Keep going on words outside the code, truncating oversized gaps.
        #[arg(long)]
        permissive: bool,
    },
    /// CSV of f_ell, f_hat_ell and their dimensions.
    Table {
        #[arg(long, default_value_t = 10)]
        max_ell: u32,
        /// Append the upper-bound columns.
        #[arg(long)]
        bounds: bool,
    },
    /// CSV of the dimension against its upper bounds.
    Bounds {
        #[arg(long, default_value_t = 3)]
        min_ell: u32,
        #[arg(long, default_value_t = 20)]
        max_ell: u32,
    },
    /// Test a comma-separated sequence for anchor-decodability.
    CheckSeq {
        sequence: String,
        /// Blocklength exponent; defaults to the last entry.
        #[arg(long)]
        ell: Option<u32>,
    },
    /// Round-trip every message, or a seeded sample.
    Verify {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, conflicts_with = "sampled")]
        exhaustive: bool,
        #[arg(long)]
        sampled: bool,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest exhaustive run, as a power of two.
        #[arg(long, default_value_t = DEFAULT_BUDGET_LOG2)]
        budget_log2: u32,
        #[arg(long)]
        permissive: bool,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Clone)]
struct CodeArgs {
    #[arg(long, value_enum, default_value_t = ConstructionArg::C)]
    construction: ConstructionArg,
    #[arg(long)]
    ell: u32,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
}

impl CodeArgs {
    fn params(&self) -> anyhow::Result<CodeParams> {
        Ok(CodeParams::resolve(self.construction.into(), self.ell, self.t, self.r)?)
    }
}

#[derive(Args)]
struct IoArgs {
    /// Read from this file instead of stdin.
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy)]
enum ConstructionArg {
    C,
    Chat,
    Ct,
    Dt,
    Bt,
}

impl From<ConstructionArg> for Construction {
    fn from(c: ConstructionArg) -> Self {
        match c {
            ConstructionArg::C => Construction::C,
            ConstructionArg::Chat => Construction::Chat,
            ConstructionArg::Ct => Construction::Ct,
            ConstructionArg::Dt => Construction::Dt,
            ConstructionArg::Bt => Construction::Bt,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum MessageFormat {
    Bits,
    Hex,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum WordFormat {
    Ones,
    Bits,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if cli.jobs > 1 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = matches!(
                e.downcast_ref::<Error>(),
                Some(Error::Parameter(_) | Error::Parse(_) | Error::Budget { .. })
            );
            ExitCode::from(if usage { EXIT_USAGE } else { EXIT_DATA })
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    let mut out = BufWriter::new(io::stdout().lock());
    match &cli.command {
        Command::Params { code, json } => {
            let p = code.params()?;
            if *json {
                writeln!(out, "{}", serde_json::to_string(&p)?)?;
            } else {
                write_params(&mut out, &p)?;
            }
            Ok(0)
        }
        Command::Encode {
            code,
            io: io_args,
            format,
            output_format,
        } => {
            let code = Code::<u64>::new(code.params()?)?;
            let k = code.k() as usize;
            let (fmt, wfmt) = (*format, *output_format);
            pump(cli.jobs, io_args, |line| {
                let x = match fmt {
                    MessageFormat::Bits => line.parse::<BitString>()?,
                    MessageFormat::Hex => BitString::from_hex(line, k)?,
                };
                let c = code.encode(x.as_slice())?;
                Ok(match wfmt {
                    WordFormat::Ones => c.to_ones_string(),
                    WordFormat::Bits => c.to_bits_string(),
                })
            })
        }
        Command::Decode {
            code,
            io: io_args,
            format,
            permissive,
            ..
        } => {
            let code = Code::<u64>::new(code.params()?)?;
            let mode = if *permissive {
                DecodeMode::Permissive
            } else {
                DecodeMode::Strict
            };
            let fmt = *format;
            pump(cli.jobs, io_args, |line| {
                let c: Codeword<u64> = line.parse()?;
                let x = code.decode(&c, mode)?;
                Ok(match fmt {
                    MessageFormat::Bits => x.to_string(),
                    MessageFormat::Hex => x.to_hex(),
                })
            })
        }
        Command::Table { max_ell, bounds } => {
            check_range(3, *max_ell)?;
            write_table(&mut out, *max_ell, *bounds)?;
            Ok(0)
        }
        Command::Bounds { min_ell, max_ell } => {
            check_range(*min_ell, *max_ell)?;
            writeln!(
                out,
                "ell,k_ell,k_hat_ell,floor_log2_binom,stirling_ub,necklace_ub,delta_ell"
            )?;
            for ell in *min_ell..=*max_ell {
                let b = BoundsReport::compute(ell)?;
                writeln!(
                    out,
                    "{},{},{},{},{:.3},{},{}",
                    b.ell, b.k_ell, b.k_hat_ell, b.log2_binom_floor, b.stirling_ub, b.necklace_ub, b.delta_ell
                )?;
            }
            Ok(0)
        }
        Command::CheckSeq { sequence, ell } => {
            let s: CharSeq = sequence.parse()?;
            let s = match ell {
                Some(e) => CharSeq::new(s.entries().to_vec(), *e)?,
                None => s,
            };
            let v = s.is_anchor_decodable();
            match &v.failure {
                None => writeln!(out, "anchor-decodable: yes")?,
                Some(c) => {
                    writeln!(out, "anchor-decodable: no")?;
                    match c.number() {
                        Some(n) => writeln!(out, "failed: condition {n}")?,
                        None => writeln!(out, "failed: shape")?,
                    }
                    writeln!(out, "witness: {c}")?;
                }
            }
            writeln!(out, "k={}", s.k())?;
            Ok(0)
        }
        Command::Verify {
            code,
            sampled,
            samples,
            seed,
            budget_log2,
            permissive,
            json,
            ..
        } => {
            let p = code.params()?;
            let mode = if *permissive {
                DecodeMode::Permissive
            } else {
                DecodeMode::Strict
            };
            let report = if *sampled {
                oracle::verify_sampled(&p, *samples, *seed, mode)?
            } else {
                oracle::verify_exhaustive(&p, mode, *budget_log2)
                    .map_err(|e| anyhow!(e).context("pass --sampled to check a random sample instead"))?
            };
            if *json {
                writeln!(out, "{}", serde_json::to_string(&report)?)?;
            } else {
                write!(out, "{}", report.render())?;
            }
            Ok(if report.passed() { 0 } else { EXIT_VERIFY })
        }
    }
    .and_then(|code| {
        out.flush()?;
        Ok(code)
    })
}

fn check_range(lo: u32, hi: u32) -> anyhow::Result<()> {
    if lo < 3 || hi > 62 || lo > hi {
        return Err(Error::Parameter(format!("ell range {lo}..={hi} must lie within 3..=62")).into());
    }
    Ok(())
}

fn write_params(out: &mut impl Write, p: &CodeParams) -> io::Result<()> {
    writeln!(out, "{p}")?;
    writeln!(out, "n={}", p.n)?;
    writeln!(out, "k={}", p.k)?;
    writeln!(out, "w={}", p.w)?;
    if let Ok(s) = p.sequence() {
        writeln!(out, "sequence={s}")?;
    }
    let blocks: Vec<String> = p.block_lengths().iter().map(u32::to_string).collect();
    writeln!(out, "blocks={}", blocks.join(","))
}

fn write_table(out: &mut impl Write, max_ell: u32, bounds: bool) -> anyhow::Result<()> {
    write!(out, "ell,f_ell,f_hat_ell,k_ell,k_hat_ell")?;
    if bounds {
        write!(out, ",floor_log2_binom,stirling_ub,necklace_ub,delta_ell")?;
    }
    writeln!(out)?;
    for ell in 3..=max_ell {
        let (f, fh) = (f_ell(ell)?, f_hat(ell)?);
        write!(out, "{ell},\"{f}\",\"{fh}\",{},{}", f.k(), fh.k())?;
        if bounds {
            let b = BoundsReport::compute(ell)?;
            write!(
                out,
                ",{},{:.3},{},{}",
                b.log2_binom_floor, b.stirling_ub, b.necklace_ub, b.delta_ell
            )?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Line-for-line transform. A failing line becomes `error: …` in the output
/// and makes the run exit with the data-error status.
fn pump<F>(jobs: usize, io_args: &IoArgs, f: F) -> anyhow::Result<u8>
where
    F: Fn(&str) -> gapcode::Result<String> + Sync,
{
    let input: Box<dyn BufRead> = match &io_args.input {
        Some(p) => Box::new(BufReader::new(
            File::open(p).with_context(|| format!("opening {}", p.display()))?,
        )),
        None => Box::new(BufReader::new(io::stdin().lock())),
    };
    let lines: Vec<String> = input.lines().collect::<io::Result<_>>()?;
    let handle = |line: &String| -> Option<std::result::Result<String, String>> {
        let line = line.trim();
        (!line.is_empty()).then(|| f(line).map_err(|e| e.to_string()))
    };
    let results: Vec<_> = if jobs > 1 {
        lines.par_iter().map(handle).collect()
    } else {
        lines.iter().map(handle).collect()
    };

    let mut out: Box<dyn Write> = match &io_args.output {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut failed = 0usize;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            None => writeln!(out)?,
            Some(Ok(s)) => writeln!(out, "{s}")?,
            Some(Err(e)) => {
                failed += 1;
                writeln!(out, "error: {e}")?;
                eprintln!("line {}: {e}", i + 1);
            }
        }
    }
    out.flush()?;
    Ok(if failed > 0 { EXIT_DATA } else { 0 })
}
