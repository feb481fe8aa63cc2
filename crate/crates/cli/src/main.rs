use std::path::PathBuf;
use std::process::ExitCode;

use bailey_asym::asym::{self, AsymError, ExpansionRequest, Target};
use bailey_asym::exact::{l_chi_neg, lm_value, CharacterSpec};
use bailey_asym::hpreal::parse_rational;
use bailey_asym::qformal::{self, bailey_check, chain_apply, seed_pair, Chain, Family};
use bailey_asym::report::{Outcome, VerificationReport};
use bailey_asym::{BigRational, Precision};
use clap::{Parser, Subcommand, ValueEnum};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_STARVED: u8 = 3;

#[derive(Parser)]
#[command(name = "bailey-asym", version, about = "Verify Bailey-chain q-series identities and their small-t expansions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "C", alias = "c")]
    C,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::A => Family::A,
            FamilyArg::B => Family::B,
            FamilyArg::C => Family::C,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ChainArg {
    S1,
    D1,
    S2,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    T11,
    T12,
    T13,
    T14,
    F14,
    Ol,
}

#[derive(clap::Args)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Check a multi-sum identity coefficient by coefficient mod q^N.
    Verify {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 40)]
        order: usize,
        /// A registered variant, or `all` to arbitrate between them.
        #[arg(long, default_value = "all")]
        variant: String,
        #[command(flatten)]
        output: Output,
    },
    /// Check the Bailey defining relation for the seed pair pushed through a chain.
    Bailey {
        #[arg(long, value_enum)]
        chain: ChainArg,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Base exponent b of the seed pair at q^b (D1 needs 2^k | b).
        #[arg(long)]
        base: Option<usize>,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 25)]
        order: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Build a truncated expansion and fit its remainder order on a t-grid.
    Expand {
        #[arg(long, value_enum)]
        target: TargetArg,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<i64>,
        #[arg(long)]
        l: Option<i64>,
        #[arg(long)]
        m: Option<i64>,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        v: String,
        #[arg(long, default_value = "1")]
        w: String,
        /// Truncation order M: keep powers of t up to M.
        #[arg(long, default_value_t = 4)]
        terms: usize,
        /// Grid t = 2^-a … 2^-b, written a:b.
        #[arg(long, default_value = "4:10")]
        grid: String,
        #[arg(long, env = "BAILEY_ASYM_PRECISION", default_value_t = 60)]
        precision: u32,
        /// A registered variant, or `all` to arbitrate between them.
        #[arg(long)]
        variant: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Print exact L(−n, χ_d) or L_{l,m}(−2n) values.
    Lvalues {
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["l", "m"])]
        d: Option<i64>,
        #[arg(long, requires = "m")]
        l: Option<i64>,
        #[arg(long, requires = "l")]
        m: Option<i64>,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Starved(String),
    Io(std::io::Error),
}

impl From<AsymError> for CliError {
    fn from(e: AsymError) -> Self {
        match e {
            AsymError::PrecisionStarvation { .. } => CliError::Starved(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Starved(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_STARVED)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Verify {
            family,
            k,
            order,
            variant,
            output,
        } => {
            let family = Family::from(family);
            if k < 1 {
                return Err(CliError::Usage("k must be at least 1".into()));
            }
            let report = if variant == "all" {
                VerificationReport::from_family_arbitration(&qformal::arbitrate_family(family, k, order))
            } else {
                let r = qformal::verify_identity(family, k, order, &variant)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                VerificationReport::from_identity(&r)
            };
            emit(&report, &output)
        }
        Command::Bailey {
            chain,
            k,
            base,
            n_max,
            order,
            output,
        } => {
            let (chain, name) = match chain {
                ChainArg::S1 => (Chain::S1, "s1"),
                ChainArg::D1 => (Chain::D1, "d1"),
                ChainArg::S2 => (Chain::S2, "s2"),
            };
            let base = base.unwrap_or(if chain == Chain::D1 { 1 << k } else { 1 });
            if base == 0 {
                return Err(CliError::Usage("base must be positive".into()));
            }
            let pair = chain_apply(chain, &seed_pair(base), k).map_err(|e| CliError::Usage(e.to_string()))?;
            let check = bailey_check(&pair, n_max, order);
            emit(&VerificationReport::from_bailey(&check, name, k), &output)
        }
        Command::Expand {
            target,
            k,
            d,
            l,
            m,
            v,
            w,
            terms,
            grid,
            precision,
            variant,
            output,
        } => {
            let target = build_target(target, k, d, l, m)?;
            let v = rational_arg("v", &v)?;
            let w = rational_arg("w", &w)?;
            let grid = parse_grid(&grid)?;
            let prec = Precision::new(precision).map_err(|e| CliError::Usage(e.to_string()))?;
            let variant = variant.unwrap_or_else(|| asym::default_variant(&target).to_string());
            let req = ExpansionRequest::new(target, v, w, terms, &variant);
            let report = if variant == "all" {
                let arb = asym::arbitrate(&req.with_variant(asym::default_variant(&target)), &grid, &prec)?;
                VerificationReport::from_arbitration(&arb, &prec)
            } else {
                VerificationReport::from_slope(&asym::remainder_slope(&req, &grid, &prec)?, &prec)
            };
            emit(&report, &output)
        }
        Command::Lvalues { d, l, m, max_n } => {
            let rows: Vec<(String, BigRational)> = match (d, l, m) {
                (Some(d), None, None) => {
                    let chi = CharacterSpec::new(d).map_err(|e| CliError::Usage(e.to_string()))?;
                    println!("# L(-n, chi_{d}), {} character", chi.parity());
                    (0..=max_n).map(|n| (neg_label(n), l_chi_neg(&chi, n))).collect()
                }
                (None, Some(l), Some(m)) => {
                    println!("# L_{{{l},{m}}}(-2n)");
                    (0..=max_n)
                        .map(|n| {
                            lm_value(l, m, n)
                                .map(|x| (neg_label(2 * n), x))
                                .map_err(|e| CliError::Usage(e.to_string()))
                        })
                        .collect::<Result<_, _>>()?
                }
                _ => return Err(CliError::Usage("give either --d or both --l and --m".into())),
            };
            for (n, (label, value)) in rows.iter().enumerate() {
                println!("{n}\t{label}\t{value}");
            }
            Ok(0)
        }
    }
}

fn build_target(
    target: TargetArg,
    k: Option<usize>,
    d: Option<i64>,
    l: Option<i64>,
    m: Option<i64>,
) -> Result<Target, CliError> {
    let need = |name: &str| CliError::Usage(format!("--{name} is required for this target"));
    let k_or = |default: usize| k.unwrap_or(default);
    Ok(match target {
        TargetArg::T11 => Target::T11 { k: k_or(1) },
        TargetArg::T12 => Target::T12 { k: k_or(1) },
        TargetArg::T13 => Target::T13 { k: k_or(1) },
        TargetArg::T14 => Target::T14 { d: d.ok_or_else(|| need("d"))? },
        TargetArg::F14 => Target::F14 { k: k_or(2) },
        TargetArg::Ol => Target::Ol {
            l: l.ok_or_else(|| need("l"))?,
            m: m.ok_or_else(|| need("m"))?,
            k: k_or(2),
        },
    })
}

fn rational_arg(name: &str, s: &str) -> Result<BigRational, CliError> {
    parse_rational(s).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
}

fn parse_grid(s: &str) -> Result<Vec<BigRational>, CliError> {
    let bad = || CliError::Usage(format!("--grid expects a:b with integers 3 <= a < b, got '{s}'"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if a < 3 || b <= a || b > 60 {
        return Err(bad());
    }
    Ok(asym::pow2_grid(a, b))
}

fn emit(report: &VerificationReport, output: &Output) -> Result<u8, CliError> {
    let body = match output.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    match &output.out {
        Some(path) => {
            std::fs::write(path, body).map_err(CliError::Io)?;
            println!("{}", report.outcome);
        }
        None => print!("{body}"),
    }
    Ok(match report.outcome {
        Outcome::Pass | Outcome::PassDegenerate => 0,
        Outcome::Fail | Outcome::Inconclusive => EXIT_FAIL,
    })
}

fn neg_label(n: usize) -> String {
    if n == 0 {
        "L(0)".into()
    } else {
        format!("L(-{n})")
    }
}
