use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "wallx", version, about = "Wall-crossing checks for the local resolved conifold 4-fold")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Identity backend; defaults to symbolic up to degree 4 and eval beyond.
    #[arg(long, global = true, value_enum)]
    pub backend: Option<BackendArg>,
    /// Evaluation points for the eval backend.
    #[arg(long, global = true, default_value_t = 5)]
    pub points: usize,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Write a `degree,expression` coefficient table here.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Recompute on cache hits and fail if the bytes differ.
    #[arg(long, global = true)]
    pub verify_cache: bool,
    /// Record wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Symbolic,
    Eval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    Pt,
    Nc,
    Macmahon,
    Primary,
    Binom,
    Example,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChamberArg {
    I,
    #[value(name = "II_III")]
    IiIii,
    Iv,
    Other,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List wall lines up to an index.
    Walls {
        #[arg(long, default_value_t = 3)]
        kmax: u32,
    },
    /// Locate a stability parameter among walls and chambers.
    Classify {
        /// `p/q,r/s`
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long, default_value_t = 8)]
        kmax: u32,
    },
    /// JS localization sum against the closed formula and the binomial.
    Js {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 4)]
        dmax: u32,
    },
    /// Wall-crossing quotient against `(1 - t)^(k m / lam3)`.
    Wallcross {
        #[arg(long)]
        wall: String,
        #[arg(long, default_value = "OX")]
        i0: String,
        #[arg(long, default_value_t = 3)]
        tmax: u32,
        /// `LABEL=+1` or `LABEL=-1`, repeatable.
        #[arg(long = "sign-override", allow_hyphen_values = true)]
        sign_override: Vec<String>,
    },
    /// Specialization `m = lam3` of the JS fixed points.
    Dimred {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 4)]
        dmax: u32,
    },
    /// Insertion-free series against `exp(-t/lam3)` or `1`.
    InsertionFree {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 4)]
        dmax: u32,
    },
    /// Reference series coefficients.
    Series {
        #[arg(long, value_enum)]
        kind: SeriesKind,
        /// `q`-order for products, `t`-order for binomials.
        #[arg(long, default_value_t = 3)]
        tmax: u32,
        #[arg(long, value_enum, ignore_case = true, default_value = "other")]
        chamber: ChamberArg,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        gamma_e: i64,
        /// Multiplier `k` in `(1 - t)^(k m / lam3)`.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        k: i64,
    },
    /// Contributions of fixed points, by label or by fiber.
    Contribution {
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        wall: Option<String>,
        #[arg(long, default_value = "OX")]
        i0: String,
        #[arg(long, default_value_t = 1)]
        d: u32,
        /// Fiber side, `plus` or `minus`.
        #[arg(long, default_value = "plus")]
        side: String,
    },
    /// Search sign vectors over a fiber matching the conjectured coefficient.
    Signsearch {
        #[arg(long)]
        wall: String,
        #[arg(long, default_value = "OX")]
        i0: String,
        #[arg(long)]
        d: u32,
    },
}
