//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "multibrot", version, about = "External angles, tuning, fibers and ray tracing for z^d + c")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Largest period considered by combinatorial searches.
    #[arg(long, global = true)]
    pub max_period: Option<u32>,
    /// Depth: ray levels, iteration count or search length, per subcommand.
    #[arg(long, global = true)]
    pub depth: Option<u32>,
    /// Landing tolerance for ray-pair checks (overrides `pair_tol`).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// `key = value` configuration file.
    #[arg(long, global = true, env = "MULTIBROT_CONFIG")]
    pub config: Option<PathBuf>,
    /// File for CSV, lamination text or PGM output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 2)]
    pub degree: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Orbit or digit expansion of an angle under multiplication by d.
    #[command(subcommand)]
    Angle(AngleCmd),
    /// Lamination partners.
    #[command(subcommand)]
    Pair(PairCmd),
    /// Kneading sequence or internal address.
    #[command(subcommand)]
    Address(AddressCmd),
    /// Tuned images of an angle under a component `n:p/q`.
    Tune { component: String, angle: String },
    /// Inverse of `tune`.
    Untune { component: String, angle: String },
    /// Decoration ray pairs of a component, to dyadic level `--depth` (default 3).
    Decorations { component: String },
    /// Where an angle sits relative to a tuned copy.
    Locate { component: String, angle: String },
    #[command(subcommand)]
    Fiber(FiberCmd),
    /// Branner-Douady membership.
    #[command(subcommand)]
    Bd(BdCmd),
    /// Escape test for the region bounded by dynamic ray pairs.
    LittleJulia(LittleJuliaArgs),
    #[command(subcommand)]
    Solve(SolveCmd),
    #[command(subcommand)]
    Ray(RayCmd),
    /// Puzzle-piece diameters around a point.
    Puzzle(PuzzleArgs),
    /// Escape-time image as binary PGM.
    Render(RenderArgs),
}

#[derive(Debug, Subcommand)]
pub enum AngleCmd {
    Orbit { angle: String },
    Expansion { angle: String },
}

#[derive(Debug, Subcommand)]
pub enum PairCmd {
    /// Partner of a periodic angle in the lamination.
    Conjugate { angle: String },
    /// All pairs up to `--max-period` (default 6).
    Lamination,
}

#[derive(Debug, Subcommand)]
pub enum AddressCmd {
    Kneading { angle: String },
    /// Internal address, up to `--depth` entries (default 20).
    InternalAddress { angle: String },
}

#[derive(Debug, Subcommand)]
pub enum FiberCmd {
    /// Nested fiber intervals up to `--max-period` (default 12).
    Interval { angle: String },
    /// Fiber transfer check under tuning at `--max-period` (default 8).
    TransferCheck { component: String, angle: String },
    /// Components on the arc to an angle, up to `--depth` (default 12).
    ArcSkeleton { angle: String },
}

#[derive(Debug, Subcommand)]
pub enum BdCmd {
    Symbolic { angle: String },
    /// Numeric verdict for a parameter `re,im`, over `--depth` iterations (default 200).
    Numeric {
        #[arg(allow_hyphen_values = true)]
        c: String,
    },
}

#[derive(Debug, Args)]
pub struct LittleJuliaArgs {
    /// Parameter `re,im`.
    #[arg(allow_hyphen_values = true)]
    pub c: String,
    /// Start point `re,im`.
    #[arg(allow_hyphen_values = true)]
    pub z: String,
    /// Bounding pair `p/q:r/s`; repeatable.
    #[arg(long = "pair", required = true)]
    pub pairs: Vec<String>,
    /// Iterate exponent.
    #[arg(long, short)]
    pub n: u32,
}

#[derive(Debug, Subcommand)]
pub enum SolveCmd {
    /// Root of `p_c^n(0) = 0` near a seed.
    Center {
        n: u32,
        #[arg(allow_hyphen_values = true)]
        seed: String,
    },
    /// Root of `p_c^(l+k)(0) = p_c^l(0)` near a seed.
    Misiurewicz {
        l: u32,
        k: u32,
        #[arg(allow_hyphen_values = true)]
        seed: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum RayCmd {
    /// Trace one external ray; parameter plane unless `--c` is given.
    Trace {
        angle: String,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
    },
    /// Whether two rays land together.
    Verify {
        minus: String,
        plus: String,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct PuzzleArgs {
    #[arg(allow_hyphen_values = true)]
    pub c: String,
    /// Point whose pieces are measured.
    #[arg(long, allow_hyphen_values = true)]
    pub target: String,
    /// Depth-0 pair `p/q:r/s`; repeatable.
    #[arg(long = "pair", required = true)]
    pub pairs: Vec<String>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// `re_min,re_max,im_min,im_max`.
    #[arg(long, allow_hyphen_values = true, default_value = "-2.5,1,-1.25,1.25")]
    pub region: String,
    #[arg(long, default_value_t = 800)]
    pub width: usize,
    #[arg(long, default_value_t = 600)]
    pub height: usize,
    /// Render the filled Julia set of this parameter instead.
    #[arg(long, allow_hyphen_values = true)]
    pub julia: Option<String>,
    /// Overlay these parameter (or, with `--julia`, dynamic) rays.
    #[arg(long = "ray")]
    pub rays: Vec<String>,
}
