//! `cycmzv`: multiple harmonic sums, harmonic Ihara actions and p-adic MZVs from the command line.

mod commands;
mod config;
mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};
use render::Format;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "cycmzv", version, about = "Multiple harmonic sums, harmonic Ihara actions and p-adic MZVs")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for randomized corpora.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// TOML file with long flag names as keys; flags on the command line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Multiple harmonic sums.
    Mhs {
        #[command(subcommand)]
        cmd: MhsCmd,
    },
    /// Coefficients `B_b^{l_1,...,l_d}` of the polynomial sums.
    Bcoef(BcoefArgs),
    /// Hyperlogarithm series coefficients.
    Li {
        #[command(subcommand)]
        cmd: LiCmd,
    },
    /// Harmonic Ihara actions and comparison maps.
    Ihara {
        #[command(subcommand)]
        cmd: IharaCmd,
    },
    /// Adjoint p-adic MZVs, the Frobenius associator and Li dagger.
    Pmzv {
        #[command(subcommand)]
        cmd: PmzvCmd,
    },
    /// Check a relation; exits 1 with a witness when it fails.
    Verify(VerifyArgs),
    /// Finite rank experiments.
    Independence {
        #[command(subcommand)]
        cmd: IndependenceCmd,
    },
}

#[derive(Args, Debug, Clone)]
pub struct RootsArg {
    /// Number of roots of unity `N`.
    #[arg(long, default_value_t = 1)]
    pub roots: u32,
}

#[derive(Args, Debug, Clone)]
pub struct PadicArgs {
    #[arg(long, default_value_t = 5)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub alpha: u32,
    /// Absolute precision `M`: results are certified modulo `p^M`.
    #[arg(long, default_value_t = 6)]
    pub prec: i64,
}

#[derive(Subcommand, Debug)]
pub enum MhsCmd {
    /// `frak_h_n(w)`, or `har_n(w)` with `--weighted`.
    Eval {
        #[arg(long)]
        n: i64,
        /// Harmonic word `h[roots; entries]`, outer entry first, e.g. `h[1;2]`, `h[1;2,1]`,
        /// `h[2,1,1;1,1]` (N = 2) or `h[1;0~2,1]` (entry `u~u'` carries `u'` reversals).
        #[arg(long)]
        word: String,
        #[arg(long)]
        weighted: bool,
        #[command(flatten)]
        roots: RootsArg,
    },
    /// Values for a range of `n` and several words.
    Table {
        #[arg(long, default_value_t = 1)]
        n_min: i64,
        #[arg(long)]
        n_max: i64,
        #[arg(long = "word", required = true)]
        words: Vec<String>,
        #[arg(long)]
        weighted: bool,
        #[command(flatten)]
        roots: RootsArg,
    },
}

#[derive(Args, Debug)]
pub struct BcoefArgs {
    /// Exponents `l_1,...,l_d`, innermost first.
    #[arg(long, value_delimiter = ',', required = true)]
    pub l: Vec<i64>,
    /// Degree `b`; all degrees when omitted.
    #[arg(long)]
    pub b: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum LiCmd {
    /// `Li[w][z^n]`.
    Coeff {
        /// Word in the letters `0` and `z1..zN` (for `N = 1` also `1`), e.g. `"0 1"`.
        #[arg(long)]
        word: String,
        #[arg(long)]
        n: i64,
        #[command(flatten)]
        roots: RootsArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum IharaCmd {
    /// `(har_q o^RT har)_n(w)` for `w` of depth at most two, reversals allowed.
    ActRt {
        #[command(flatten)]
        padic: PadicArgs,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        word: String,
        /// Also print the exact `har_{qn}(w)`.
        #[arg(long)]
        compare: bool,
    },
    /// `(Sigma^RT(har_q) o^{DR-RT} har)_n(w)` for plain `w` of depth at most two.
    ActDrrt {
        #[command(flatten)]
        padic: PadicArgs,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        word: String,
        /// Weight through which `Sigma^RT` is computed.
        #[arg(long, default_value_t = 5)]
        max_weight: u32,
    },
    /// Adjoint coefficients `Sigma^RT(har_q)`.
    SigmaRt {
        #[command(flatten)]
        padic: PadicArgs,
        #[arg(long, default_value_t = 5)]
        max_weight: u32,
    },
    /// `Sigma^DR_inv(Sigma^RT(har_q))`, which should give back `har_q`.
    SigmaDrinv {
        #[command(flatten)]
        padic: PadicArgs,
        #[arg(long, default_value_t = 5)]
        max_weight: u32,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// The group-like series with adjoint `Sigma^RT(har_q)`.
    RecoverPhi {
        #[command(flatten)]
        padic: PadicArgs,
        #[arg(long, default_value_t = 5)]
        max_weight: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum PmzvCmd {
    /// Adjoint p-adic MZVs `zeta^Ad`.
    Adjoint {
        #[command(flatten)]
        padic: PadicArgs,
        #[arg(long, default_value_t = 5)]
        max_weight: u32,
    },
    /// Frobenius associator `Phi_{p,alpha}` and its p-adic MZVs.
    Phi {
        #[command(flatten)]
        padic: PadicArgs,
        #[arg(long, default_value_t = 5)]
        max_weight: u32,
    },
    /// Coefficients of `Li†` up to `z^K`.
    LiDagger {
        #[command(flatten)]
        padic: PadicArgs,
        #[arg(long, default_value_t = 4)]
        max_weight: u32,
        #[arg(long, default_value_t = 20)]
        z_degree: usize,
    },
    /// `har†_n(w)`.
    HarDagger {
        #[command(flatten)]
        padic: PadicArgs,
        #[arg(long, default_value_t = 4)]
        max_weight: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        word: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum IndependenceCmd {
    /// Rank of `n^k frak_h_n(w)` over words of bounded weight and depth plus the constant `1`.
    Rank {
        #[arg(long, default_value_t = 4)]
        max_weight: u32,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long, default_value_t = 60)]
        n_max: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Relation {
    /// Shuffle equation of a seeded random group-like series.
    Shuffle,
    /// Stuffle of harmonic sums for all `n <= n-max`.
    QuasiShuffle,
    /// Adjoint quasi-shuffle of `zeta^Ad`.
    AdjointQuasiShuffle,
    /// Products of hyperlogarithms as sums with reversals.
    LiBridge,
    /// Quasi-shuffle of the `B` polynomials and the table against direct sums.
    BQuasiShuffle,
    /// Binomial reduction of reversals at prime-power index.
    ReversalReduction,
    /// RT action against exact `har_{qn}`.
    ActRt,
    /// `Sigma^DR_inv o Sigma^RT = id` and the DR-RT factorization.
    SigmaCoherence,
    /// Prime harmonic duality on a seeded special automorphism, or on Frobenius data when `--p` is given.
    Duality,
    /// Commutant of `Delta(e_1)`.
    Commutant,
    /// Group-like, adjoint primitive and harmonic shuffle verdicts on seeded series.
    Prop73,
    /// Depth-(1,1) series stuffle against the adjoint stuffle on seeded series.
    Depth11,
    /// Stuffle of `har`, of the acted family, and adjoint stuffle of `Sigma^RT(har_q)`.
    Triple,
    /// Shuffle convolution of `Li†`.
    LiDaggerShuffle,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub relation: Relation,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub alpha: Option<u32>,
    #[arg(long)]
    pub prec: Option<i64>,
    #[arg(long)]
    pub max_weight: Option<u32>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub n_max: Option<u64>,
    #[command(flatten)]
    pub roots: RootsArg,
    /// Weight bound for words with reversals (`act-rt`).
    #[arg(long)]
    pub wr_weight: Option<u32>,
    /// Weight through which `Sigma^RT` is computed.
    #[arg(long)]
    pub sigma_weight: Option<u32>,
    /// Largest exponent (`b-quasi-shuffle`).
    #[arg(long)]
    pub l_max: Option<i64>,
    #[arg(long)]
    pub z_degree: Option<usize>,
    /// Size of the seeded corpus (`prop73`, `depth11`).
    #[arg(long)]
    pub count: Option<u64>,
    /// Break group-likeness of the seeded series (`shuffle`).
    #[arg(long)]
    pub perturbed: bool,
}

fn exit_code_for(e: &cycmzv::Error) -> u8 {
    use cycmzv::Error::*;
    match e {
        Syntax { .. } | RootIndex { .. } | InvalidWord(_) | InvalidArgument(_) | Unsupported(_)
        | UnsupportedBackend { .. } | NonPositiveIndex(_) | Bound(_) => 2,
        Precision(_) | NotStabilized { .. } | PDividesDenominator { .. } | NotAUnit { .. } | Inconsistent(_)
        | Truncation(_) | NotInvertible(_) => 3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_error_kind() {
        assert_eq!(exit_code_for(&cycmzv::Error::Bound("x".into())), 2);
        assert_eq!(exit_code_for(&cycmzv::Error::Syntax { pos: 0, msg: "x".into() }), 2);
        assert_eq!(exit_code_for(&cycmzv::Error::Precision("x".into())), 3);
        assert_eq!(exit_code_for(&cycmzv::Error::NotAUnit { p: 5, value: "5".into() }), 3);
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

/// Path given by `--config` or `--config=`, found before parsing so that a config may
/// supply required flags.
fn config_path(args: &[String]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--" {
            break;
        }
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(v));
        }
    }
    None
}

fn parse(args: &[String]) -> Result<Cli, clap::Error> {
    let Some(path) = config_path(args) else { return Cli::try_parse_from(args) };
    match config::merge(args, &path) {
        Ok(merged) => Cli::try_parse_from(&merged),
        Err(msg) => Err(clap::Error::raw(clap::error::ErrorKind::InvalidValue, format!("{msg}\n"))),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match parse(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("cannot start {j} workers: {e}");
            return ExitCode::from(3);
        }
    }
    let out = match commands::run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    if let Err(e) = render::emit(&out, cli.format) {
        eprintln!("cannot write output: {e}");
        return ExitCode::from(3);
    }
    let failed = out.failed();
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        for c in failed {
            let r = &c.report;
            eprintln!("{} does not hold as required ({}); witness: {}", r.relation, r.verdict, r.witness.clone().unwrap_or_default());
        }
        ExitCode::from(1)
    }
}
