use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use g2cm::cmfield::{self, QuarticPolynomial};
use g2cm::harness::{self, CurveSpec, Eligibility, ScanConfig};
use g2cm::{ff, zeta};

#[derive(Parser, Debug)]
#[command(name = "g2cm", version, about = "Torsion structure and pairings on genus-2 CM Jacobians")]
struct Cli {
    /// Seed for all randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest full embedding degree that is analyzed.
    #[arg(long, global = true, default_value_t = 64)]
    max_kappa: u64,
    /// Largest prime ℓ that is analyzed.
    #[arg(long, global = true, default_value_t = 8192)]
    ell_max: u64,
    /// Upper end of the range of extension degrees m.
    #[arg(long, global = true, default_value_t = 64)]
    m_max: u64,
    /// Size bound for exhaustive Jacobian enumeration in `analyze`.
    #[arg(long, global = true, default_value_t = g2cm::curve::DEFAULT_ENUMERATION_BOUND)]
    enum_bound: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the Weil polynomial, group order and CM classification.
    Analyze {
        /// JSON object or `p:c0,c1,c2,c3,c4`.
        curve: String,
    },
    /// Run all checks on every curve of a corpus.
    Scan {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Randomized checks of the pairing axioms for one prime.
    PairingCheck {
        curve: String,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

const EXIT_VIOLATION: u8 = 2;
const EXIT_CONFIG: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = ScanConfig {
        seed: cli.seed,
        max_kappa: cli.max_kappa,
        ell_max: cli.ell_max,
        m_max: cli.m_max,
        enum_bound: cli.enum_bound,
    };
    let result = match &cli.command {
        Command::Analyze { curve } => analyze(curve, &config),
        Command::Scan {
            corpus,
            out,
            summary,
        } => scan(corpus, out, summary.as_ref(), &config),
        Command::PairingCheck { curve, ell, cases } => pairing_check(curve, *ell, *cases, &config),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn analyze(curve: &str, config: &ScanConfig) -> Result<ExitCode> {
    let spec: CurveSpec = curve.parse()?;
    let c = spec.curve()?;
    let w = zeta::weil_polynomial(&c)?;
    let q = QuarticPolynomial::from_weil(&w);
    let order = w.at_one();
    println!("curve      {}", spec.label);
    println!("P(X)       {q}");
    println!("|J(F_p)|   {order}");
    let jac = c.jacobian(1)?;
    if let Ok(all) = jac.enumerate(config.enum_bound) {
        println!("enumerated {} elements", all.len());
    }
    println!("galois     {}", cmfield::classify_galois(&q));
    println!("disc(P)    {}", cmfield::discriminant(&q));
    if let Some(n) = num_traits::ToPrimitive::to_u64(&order) {
        for (ell, e) in ff::factorize_u64(n) {
            let h = harness::check_hypotheses(&w, ell);
            let mut line = format!("ell = {ell}^{e}: {}", h.overall);
            if h.overall == Eligibility::Eligible {
                if let Ok(kappa) = g2cm::torsion::full_embedding_degree(&w, ell, config.max_kappa) {
                    let k = ff::multiplicative_order(&num_bigint::BigUint::from(spec.p), ell)?;
                    line.push_str(&format!(", k = {k}, kappa = {kappa}"));
                } else {
                    line.push_str(&format!(", kappa > {}", config.max_kappa));
                }
            }
            println!("{line}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn scan(corpus: &PathBuf, out: &PathBuf, summary: Option<&PathBuf>, config: &ScanConfig) -> Result<ExitCode> {
    let file = File::open(corpus).with_context(|| format!("opening {}", corpus.display()))?;
    let specs = harness::read_corpus(BufReader::new(file))?;
    let records = harness::scan(&specs, config)?;
    let mut w = BufWriter::new(File::create(out).with_context(|| format!("creating {}", out.display()))?);
    harness::write_report(&mut w, &records)?;
    w.flush()?;
    if let Some(path) = summary {
        let mut s = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
        harness::write_summary(&mut s, &records)?;
        s.flush()?;
    }
    if harness::has_violation(&records) {
        for r in records.iter().filter(|r| !r.violations.is_empty()) {
            for v in &r.violations {
                eprintln!("VIOLATION {} ell={}: {v}", r.label, r.ell);
            }
        }
        return Ok(ExitCode::from(EXIT_VIOLATION));
    }
    Ok(ExitCode::SUCCESS)
}

fn pairing_check(curve: &str, ell: u64, cases: usize, config: &ScanConfig) -> Result<ExitCode> {
    let spec: CurveSpec = curve.parse()?;
    let c = spec.curve()?;
    let w = zeta::weil_polynomial(&c)?;
    let mut rng = harness::instance_rng(config.seed, &spec.label, ell);
    let analysis = match harness::analyze_instance(&c, &w, ell, config.max_kappa, &mut rng)? {
        Ok(a) => a,
        Err(reason) => bail!("cannot build J[{ell}]: {reason}"),
    };
    let rep = harness::pairing_axioms(&analysis.basis, cases, &mut rng)?;
    println!("kappa = {}, k = {}", analysis.kappa, analysis.k);
    println!("{}", serde_json::to_string(&rep)?);
    if rep.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_VIOLATION))
    }
}
