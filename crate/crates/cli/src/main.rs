use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use wbembed::embedding::{zeta, Constants, DirectionFamily};
use wbembed::harness::{
    barcode_distances, barcode_embedding, fmt_f64, load_domain, nondoubling_witness,
    parse_barcode_csv, run_all, run_distortion_experiment, ExperimentConfig, SuiteSizes,
    TupleFile, VerifyConfig,
};
use wbembed::transport::{wb_tuples, UnorderedTuple};
use wbembed::whitney::WhitneyDecomposition;

/// Exit status for a failed invariant or experiment check.
const EXIT_VIOLATION: u8 = 1;
/// Exit status for bad arguments or unreadable input.
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "wbembed", version, about = "Partial-transport distances and tuple embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partial-transport distance between two tuple files.
    Distance {
        a: PathBuf,
        b: PathBuf,
        #[arg(long = "p", default_value_t = 2.0)]
        exponent: f64,
    },
    /// Embedding vector of a tuple file, as JSON.
    Embed {
        tuple: PathBuf,
        /// Bound on the number of points; defaults to the tuple's size.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 1)]
        directions: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random pairs, both sandwich bounds, certificates and distortion.
    DistortionExperiment(ExperimentArgs),
    /// Points at pairwise shortcut distance exactly `eps`.
    NondoublingWitness {
        #[arg(long)]
        domain: String,
        #[arg(long = "count", short = 'n', default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pairwise distances between persistence diagrams in CSV files.
    Barcode {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long = "p", default_value_t = 2.0)]
        exponent: f64,
        /// Also embed every diagram and report embedded-to-true ratios.
        #[arg(long)]
        embed: bool,
        #[arg(long, default_value_t = 1)]
        directions: usize,
        /// Where to write the embedding vectors, one JSON object per line.
        #[arg(long, requires = "embed")]
        vectors: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs every invariant suite with fixed seeds.
    Verify {
        #[arg(long, default_value_t = VerifyConfig::default().seed)]
        seed: u64,
        /// Smaller sample counts.
        #[arg(long)]
        quick: bool,
        #[arg(long, hide = true)]
        c0: Option<f64>,
    },
    /// Lists the Whitney cubes meeting a box.
    Whitney {
        #[arg(long)]
        domain: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lo: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        hi: Vec<f64>,
        /// Smallest generation listed; cubes have side `2^k`.
        #[arg(long, default_value_t = -6, allow_hyphen_values = true)]
        min_k: i32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    domain: String,
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long = "p", default_value_t = 2.0)]
    exponent: f64,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    directions: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, hide = true)]
    c0: Option<f64>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_tuple(path: &Path) -> Result<(TupleFile, UnorderedTuple)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let f = TupleFile::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    let t = f.tuple()?;
    Ok((f, t))
}

/// `v` rounded to 12 significant digits.
fn sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let decimals = (11 - v.abs().log10().floor() as i32).max(0) as usize;
    format!("{v:.decimals$}")
}

fn distance(a: &Path, b: &Path, exponent: f64) -> Result<ExitCode> {
    let (fa, ta) = read_tuple(a)?;
    let (fb, tb) = read_tuple(b)?;
    if fa.domain != fb.domain {
        bail!("the two tuple files describe different domains");
    }
    println!("{}", sig12(wb_tuples(&fa.domain, &ta, &tb, exponent)?));
    Ok(ExitCode::SUCCESS)
}

fn embed(tuple: &Path, m: Option<usize>, density: usize, out: Option<&Path>) -> Result<ExitCode> {
    let (f, t) = read_tuple(tuple)?;
    let m = m.unwrap_or(t.len() - t.boundary_count()).max(1);
    let w = WhitneyDecomposition::new(f.domain.clone());
    let family = DirectionFamily::standard(f.domain.dim() + 1, density)?;
    let v = zeta(&w, &family, &t, m)?;
    emit(out, &format!("{}\n", v.to_json()))?;
    Ok(ExitCode::SUCCESS)
}

fn experiment(args: &ExperimentArgs) -> Result<ExitCode> {
    let domain = load_domain(&args.domain).context("reading --domain")?;
    let mut constants = Constants::for_dim(domain.dim());
    if let Some(c0) = args.c0 {
        constants.c0 = c0;
    }
    let cfg = ExperimentConfig {
        domain,
        m: args.m,
        exponent: args.exponent,
        samples: args.samples,
        seed: args.seed,
        density: args.directions,
        constants,
    };
    let report = run_distortion_experiment(&cfg)?;
    emit(args.out.as_deref(), &report.text)?;
    let bad = report.violations();
    if bad.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    for (i, row) in &bad {
        eprintln!("pair {i}: {}", row.violations.join("; "));
    }
    eprintln!("{} of {} pairs violate the bounds", bad.len(), report.rows.len());
    Ok(ExitCode::from(EXIT_VIOLATION))
}

fn witness(domain: &str, count: usize, eps: f64, out: Option<&Path>) -> Result<ExitCode> {
    let domain = load_domain(domain).context("reading --domain")?;
    let points = nondoubling_witness(&domain, count, eps)?;
    let f = TupleFile {
        domain,
        points,
        boundary_count: 0,
    };
    emit(out, &format!("{}\n", f.to_json()))?;
    Ok(ExitCode::SUCCESS)
}

fn barcode(
    files: &[PathBuf],
    exponent: f64,
    embed: bool,
    density: usize,
    vectors: Option<&Path>,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let diagrams = files
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            parse_barcode_csv(&text).with_context(|| format!("parsing {}", p.display()))
        })
        .collect::<Result<Vec<_>>>()?;
    let dist = barcode_distances(&diagrams, exponent)?;
    let mut text = String::from("# command: barcode\n");
    writeln!(text, "# exponent: {exponent}")?;
    for (i, p) in files.iter().enumerate() {
        writeln!(text, "# diagram {i}: {} ({} pairs)", p.display(), diagrams[i].len())?;
    }
    writeln!(text, "i,j,wb")?;
    for (i, row) in dist.iter().enumerate() {
        for (j, d) in row.iter().enumerate().skip(i + 1) {
            writeln!(text, "{i},{j},{}", fmt_f64(*d))?;
        }
    }
    if embed {
        let emb = barcode_embedding(&diagrams, density)?;
        let wb2 = barcode_distances(&diagrams, 2.0)?;
        writeln!(text, "# embedding: m = {}, directions = {density}", emb.m)?;
        writeln!(text, "i,j,wb2,embedded,ratio")?;
        for (i, (row, erow)) in wb2.iter().zip(&emb.distances).enumerate() {
            for (j, (&t, &e)) in row.iter().zip(erow).enumerate().skip(i + 1) {
                let ratio = if t > 0.0 { fmt_f64(e / t) } else { String::new() };
                writeln!(text, "{i},{j},{},{},{ratio}", fmt_f64(t), fmt_f64(e))?;
            }
        }
        if let Some(path) = vectors {
            let lines: String = emb.vectors.iter().map(|v| v.to_json() + "\n").collect();
            fs::write(path, lines).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    emit(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn verify(seed: u64, quick: bool, c0: Option<f64>) -> Result<ExitCode> {
    let mut cfg = VerifyConfig {
        seed,
        sizes: if quick { SuiteSizes::QUICK } else { SuiteSizes::FULL },
        ..VerifyConfig::default()
    };
    if let Some(c0) = c0 {
        cfg.constants.c0 = c0;
    }
    let reports = run_all(&cfg);
    for r in &reports {
        println!("{r}");
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    println!("{} of {} suites passed", reports.len() - failed, reports.len());
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATION)
    })
}

fn whitney(domain: &str, lo: &[f64], hi: &[f64], min_k: i32, out: Option<&Path>) -> Result<ExitCode> {
    let domain = load_domain(domain).context("reading --domain")?;
    let w = WhitneyDecomposition::new(domain.clone());
    let cubes = w.cubes_in_box(lo, hi, min_k)?;
    let mut text = String::from("# command: whitney\n");
    writeln!(text, "# domain: {}", domain.to_json())?;
    writeln!(text, "# lo: {lo:?}\n# hi: {hi:?}\n# min_k: {min_k}")?;
    for q in &cubes {
        writeln!(text, "{q}")?;
    }
    emit(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Distance { a, b, exponent } => distance(&a, &b, exponent),
        Command::Embed {
            tuple,
            m,
            directions,
            out,
        } => embed(&tuple, m, directions, out.as_deref()),
        Command::DistortionExperiment(args) => experiment(&args),
        Command::NondoublingWitness {
            domain,
            count,
            eps,
            out,
        } => witness(&domain, count, eps, out.as_deref()),
        Command::Barcode {
            files,
            exponent,
            embed,
            directions,
            vectors,
            out,
        } => barcode(&files, exponent, embed, directions, vectors.as_deref(), out.as_deref()),
        Command::Verify { seed, quick, c0 } => verify(seed, quick, c0),
        Command::Whitney {
            domain,
            lo,
            hi,
            min_k,
            out,
        } => whitney(&domain, &lo, &hi, min_k, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig12(0.13f64.sqrt()), "0.360555127546");
        assert_eq!(sig12(0.5), "0.500000000000");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(1234.5), "1234.50000000");
    }
}
