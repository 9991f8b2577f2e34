//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "kem-ldlc",
    version,
    about = "Key encapsulation over low-density lattice codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a key pair.
    Keygen(KeygenArgs),
    /// Encapsulate a fresh shared key under a public key.
    Encaps(EncapsArgs),
    /// Recover the shared key from a ciphertext; exit code 2 on rejection.
    Decaps(DecapsArgs),
    /// Benchmarks and reports.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Attacks and search-space accounting.
    #[command(subcommand)]
    Attack(AttackCommand),
}

/// A preset name or explicit parameters.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Named preset (built-in or from the preset directory).
    #[arg(long, conflicts_with_all = ["n", "d", "r"])]
    pub preset: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub r: Option<u32>,
    /// Fraction bits of the ciphertext grid.
    #[arg(long)]
    pub f: Option<u32>,
    /// Shared-key length in bytes.
    #[arg(long)]
    pub lk: Option<usize>,
    /// Noise deviation relative to the Poltyrev limit, e.g. 1/2.
    #[arg(long)]
    pub sigma_ratio: Option<String>,
    /// Bits per message symbol.
    #[arg(long)]
    pub message_bits: Option<u32>,
    /// Generating-sequence source: reference or random.
    #[arg(long)]
    pub sequence: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SeedArg {
    /// 64 hex digits; makes the command reproducible.
    #[arg(long)]
    pub seed: Option<String>,
}

#[derive(Debug, Args)]
pub struct KeygenArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long)]
    pub sk_out: PathBuf,
    #[arg(long)]
    pub pk_out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EncapsArgs {
    #[arg(long)]
    pub pk: PathBuf,
    #[arg(long)]
    pub ct_out: PathBuf,
    #[arg(long)]
    pub key_out: PathBuf,
    /// Use the Fujisaki-Okamoto variant.
    #[arg(long)]
    pub fo: bool,
    #[command(flatten)]
    pub seed: SeedArg,
}

#[derive(Debug, Args)]
pub struct DecapsArgs {
    #[arg(long)]
    pub sk: PathBuf,
    #[arg(long)]
    pub pk: PathBuf,
    #[arg(long)]
    pub ct: PathBuf,
    #[arg(long)]
    pub key_out: PathBuf,
    /// Expect a Fujisaki-Okamoto ciphertext.
    #[arg(long)]
    pub fo: bool,
    /// Decoder strategy.
    #[arg(long, default_value = "bp")]
    pub decoder: String,
}

#[derive(Debug, Clone, Args)]
pub struct DecoderArgs {
    #[arg(long, default_value_t = 100)]
    pub iterations: usize,
    #[arg(long, default_value_t = 1.0 / 64.0)]
    pub grid_step: f64,
    /// Half-width of each pdf grid, in noise standard deviations.
    #[arg(long, default_value_t = 6.0)]
    pub halfwidth_sigmas: f64,
    /// Integer replicas summed per check message.
    #[arg(long, default_value_t = 3)]
    pub replicas: usize,
    /// Weight of the previous check message, in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    pub damping: f64,
    #[arg(long, default_value_t = 0.05)]
    pub residual_tolerance: f64,
}

#[derive(Debug, Subcommand)]
pub enum BenchCommand {
    /// Symbol error rate against SNR, as CSV.
    Ser {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        decoder: DecoderArgs,
        /// Comma-separated SNR values in dB above the Poltyrev limit.
        #[arg(long, value_delimiter = ',', required = true)]
        snr: Vec<f64>,
        #[arg(long, default_value_t = 50)]
        min_errors: u64,
        #[arg(long, default_value_t = 1_000_000)]
        max_symbols: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Secret-key, public-key and ciphertext sizes.
    Sizes {
        #[command(flatten)]
        params: ParamArgs,
        /// Public key whose serialized size is reported.
        #[arg(long, requires = "ct")]
        pk: Option<PathBuf>,
        /// Ciphertext whose serialized size is reported.
        #[arg(long, requires = "pk")]
        ct: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Operation-count estimates, optionally with a measured run.
    Complexity {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        seed: SeedArg,
        /// Bits per public-key entry; measured when omitted and --measure is set.
        #[arg(long)]
        m_bits: Option<u64>,
        /// Bits per perturbation entry.
        #[arg(long)]
        q_bits: Option<u64>,
        /// Bits per entry of the inverse unimodular transform.
        #[arg(long)]
        l_bits: Option<u64>,
        /// Run key generation and round trips to measure widths and times.
        #[arg(long)]
        measure: bool,
        #[arg(long, default_value_t = 5)]
        round_trips: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Message-resend detection experiment.
    Resend {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Either a single ciphertext file or a Monte-Carlo run.
#[derive(Debug, Clone, Args)]
pub struct TargetArgs {
    /// Public key of the attacked ciphertext.
    #[arg(long, requires = "ct")]
    pub pk: Option<PathBuf>,
    /// Plain ciphertext to attack.
    #[arg(long, requires = "pk")]
    pub ct: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Monte-Carlo trials when no ciphertext is given.
    #[arg(long, default_value_t = 20)]
    pub trials: u64,
    /// Noise deviation of generated instances relative to the Poltyrev limit.
    #[arg(long)]
    pub noise_ratio: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum AttackCommand {
    /// Brute-force search-space sizes.
    Space {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
    },
    /// Modular attack for noise in {-beta, beta}^n.
    Nguyen {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = 1)]
        beta: u64,
        /// Attack integer toy instances with +-1 noise instead of encapsulations.
        #[arg(long)]
        toy: bool,
    },
    /// Embedding attack with LLL.
    Embed {
        #[command(flatten)]
        target: TargetArgs,
        /// LLL parameter.
        #[arg(long, default_value = "99/100")]
        delta: String,
    },
    /// Round-off decoding with the public basis (and the secret one in trials).
    Roundoff {
        #[command(flatten)]
        target: TargetArgs,
        /// Accept only residuals with squared norm at most this value.
        #[arg(long)]
        noise_bound2: Option<f64>,
    },
}
