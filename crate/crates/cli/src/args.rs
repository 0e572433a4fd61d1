use std::path::PathBuf;
use std::str::FromStr;

use arcwidom::{ComplexPoint, GridStrategy};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "widom",
    version,
    about = "Weighted Chebyshev polynomials and Widom factors on circular arcs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a potential-theoretic quantity of the arc.
    Potential(PotentialArgs),
    /// Solve one weighted minimax problem.
    Solve(SolveArgs),
    /// Solve over a range of degrees and compare with the predicted limit.
    Sweep(SweepArgs),
    /// Chebyshev polynomials on a lemniscatic arc via the symmetry reduction.
    Lemniscate(LemniscateArgs),
    /// Closed-form limits and bounds.
    Predict(PredictArgs),
}

/// The arc angle α in radians, or in degrees with `--alpha-deg`.
#[derive(Clone, Copy, Debug, Args)]
#[group(required = true, multiple = false)]
pub struct AngleArgs {
    /// Arc half-angle in radians.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Arc half-angle in degrees.
    #[arg(long = "alpha-deg", allow_negative_numbers = true)]
    pub alpha_deg: Option<f64>,
}

impl AngleArgs {
    pub fn radians(&self) -> f64 {
        match (self.alpha, self.alpha_deg) {
            (Some(a), _) => a,
            (None, Some(d)) => d.to_radians(),
            (None, None) => unreachable!("clap enforces one of --alpha, --alpha-deg"),
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct WeightArgs {
    /// Weight JSON file; the unit weight when omitted.
    #[arg(long)]
    pub weight: Option<PathBuf>,
    /// Permit negative exponents at nodes on the arc.
    #[arg(long = "allow-singular")]
    pub allow_singular: bool,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum StrategyArg {
    #[default]
    Chebyshev,
    Uniform,
    Hybrid,
}

impl From<StrategyArg> for GridStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Chebyshev => GridStrategy::ChebyshevTheta,
            StrategyArg::Uniform => GridStrategy::UniformTheta,
            StrategyArg::Hybrid => GridStrategy::Hybrid,
        }
    }
}

#[derive(Clone, Copy, Debug, Args)]
pub struct GridArgs {
    /// Number of θ nodes; defaults to max(16n + 64, 1024).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Node placement in θ.
    #[arg(long, value_enum, default_value_t = StrategyArg::Chebyshev)]
    pub strategy: StrategyArg,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("quantity").required(true).multiple(false))]
pub struct PotentialArgs {
    #[command(flatten)]
    pub angle: AngleArgs,
    /// Green's function with pole at infinity at the point RE,IM.
    #[arg(long, group = "quantity", value_name = "Z", allow_hyphen_values = true)]
    pub green: Option<ComplexPoint>,
    /// Logarithmic capacity sin(α/2).
    #[arg(long, group = "quantity")]
    pub cap: bool,
    /// c(r, α) = exp(g(1/r)).
    #[arg(long = "c-r", group = "quantity", value_name = "R")]
    pub c_r: Option<f64>,
    /// ∫ log w dμ for the weight file.
    #[arg(long = "mu-log-int", group = "quantity", value_name = "WEIGHT")]
    pub mu_log_int: Option<PathBuf>,
    /// ∫ log w dω(u0) for the weight file; needs --point.
    #[arg(
        long = "omega-log-int",
        group = "quantity",
        value_name = "WEIGHT",
        requires = "point"
    )]
    pub omega_log_int: Option<PathBuf>,
    /// Evaluation point for --omega-log-int (RE,IM or inf).
    #[arg(long, value_name = "Z", allow_hyphen_values = true)]
    pub point: Option<ComplexPoint>,
    /// Permit negative exponents at nodes on the arc.
    #[arg(long = "allow-singular")]
    pub allow_singular: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub angle: AngleArgs,
    /// Polynomial degree.
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub weight: WeightArgs,
    /// Normalization point u0 (RE,IM), or `inf` for monic.
    #[arg(long, value_name = "Z", default_value = "inf", allow_hyphen_values = true)]
    pub point: ComplexPoint,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Write the solution JSON here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `START:END[:STEP]`, inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeRange {
    pub start: usize,
    pub end: usize,
    pub step: usize,
}

impl DegreeRange {
    pub fn values(&self) -> Vec<usize> {
        (self.start..=self.end).step_by(self.step).collect()
    }
}

impl FromStr for DegreeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad degree '{p}' in '{s}'"))
        };
        let (start, end, step) = match parts.as_slice() {
            [a] => (num(a)?, num(a)?, 1),
            [a, b] => (num(a)?, num(b)?, 1),
            [a, b, c] => (num(a)?, num(b)?, num(c)?),
            _ => return Err(format!("expected START:END[:STEP], got '{s}'")),
        };
        if step == 0 || end < start {
            return Err(format!("empty degree range '{s}'"));
        }
        Ok(DegreeRange { start, end, step })
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub angle: AngleArgs,
    #[command(flatten)]
    pub weight: WeightArgs,
    /// Degrees as START:END[:STEP].
    #[arg(long)]
    pub n: DegreeRange,
    /// Normalization point u0 (RE,IM), or `inf` for monic.
    #[arg(long, value_name = "Z", default_value = "inf", allow_hyphen_values = true)]
    pub point: ComplexPoint,
    #[command(flatten)]
    pub grid: GridArgs,
    /// CSV output path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// SVG plot of the Widom factors against n.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Fit L + a/n (+ b/n²) and fail with exit code 4 if the fit is poor.
    #[arg(long)]
    pub extrapolate: bool,
}

#[derive(Debug, Args)]
pub struct LemniscateArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub r: f64,
    #[command(flatten)]
    pub angle: AngleArgs,
    #[arg(long)]
    pub l: u32,
    /// Reduced degree; the lemniscate polynomial has degree nm + l.
    #[arg(long)]
    pub n: usize,
    /// Also solve directly on the lemniscate grid and report the gap.
    #[arg(long)]
    pub compare: bool,
    #[command(flatten)]
    pub grid: GridArgs,
}

/// `M,R,L` for the lemniscate prediction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LemniscateTriple {
    pub m: u32,
    pub r: f64,
    pub l: u32,
}

impl FromStr for LemniscateTriple {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [m, r, l] = parts.as_slice() else {
            return Err(format!("expected M,R,L, got '{s}'"));
        };
        Ok(LemniscateTriple {
            m: m.parse().map_err(|_| format!("bad m '{m}'"))?,
            r: r.parse().map_err(|_| format!("bad r '{r}'"))?,
            l: l.parse().map_err(|_| format!("bad l '{l}'"))?,
        })
    }
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub angle: AngleArgs,
    #[command(flatten)]
    pub weight: WeightArgs,
    /// Pointwise limit at u0 (RE,IM or inf) instead of the Widom limit.
    #[arg(long, value_name = "Z", allow_hyphen_values = true, conflicts_with = "lemniscate")]
    pub point: Option<ComplexPoint>,
    /// Limit of the Widom factors of E_{m,r}(α) along degrees nm + l.
    #[arg(long, value_name = "M,R,L", conflicts_with = "profile")]
    pub lemniscate: Option<LemniscateTriple>,
    /// Residual-modulus limit at these points (repeatable); needs --point in the unit disk.
    #[arg(long, value_name = "Z", requires = "point", allow_hyphen_values = true)]
    pub profile: Vec<ComplexPoint>,
}
