use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ising-peel", version, about = "Exact enumeration and peeling simulation for Ising-decorated random triangulations")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format. Map commands also accept `text`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutFormat>,
    /// Output file (a directory for `experiment`); stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutFormat {
    Csv,
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegimeArg {
    Full,
    Half,
    Finite,
}

#[derive(Subcommand, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Critical constants: ν_c, t_c, u_c, the drift μ = 1/(4√7), the tail
    /// constant c_∞ = 1/(3√7) and related exact values in Q(√7).
    Constants(ConstantsArgs),
    /// Coefficients [tⁿ]z_{p,q}(ν) of the Ising-triangulation partition
    /// function from the peeling recurrence.
    Coeffs(CoeffsArgs),
    /// Boundary sequences at the critical point: ζ_p = z_{p,0}u_c^p,
    /// ξ_p = z_{p,1}u_c^{p+1} and α_p = a_p u_c^p / a₀.
    Series(SeriesArgs),
    /// Step law of the peeling process: weights of C±, L±_k and R±_k.
    Laws(LawsArgs),
    /// Perimeter paths (P_n, Q_n) of the peeling process.
    Sample(SampleArgs),
    /// Exact Boltzmann sample of a bicolored triangulation of the (p,q)-gon
    /// with n internal faces.
    MapSample(MapSampleArgs),
    /// Checks a map file: half-edge axioms, Euler's formula, triangular
    /// faces, simple Dobrushin boundary, weight. Exits 1 when a check fails.
    MapValidate(MapValidateArgs),
    /// Ball of radius r around the root of the half-plane local limit, by
    /// peeling with the leftmost-minimal-distance rule.
    MapBall(MapBallArgs),
    /// Exact identity suite: normalization at the critical point, μ, E[X₁+Y₁],
    /// c_∞ = 4μ/3, c_x/c_y, b ratio, quartic residual of the rational
    /// parametrization, functional equations. Exits 1 on any failure.
    Verify(VerifyArgs),
    /// Runs a scripted experiment and reports estimates against targets.
    /// Exits 1 when a result does not pass.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    /// Bits of precision of the decimal expansions.
    #[arg(long, default_value_t = 128)]
    pub precision: usize,
}

#[derive(Args, Debug)]
pub struct CoeffsArgs {
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long, default_value_t = 0)]
    pub q: usize,
    /// Largest order n.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// `exact` for polynomials in ν, `nu_c` for the critical value, or a
    /// rational such as `2` or `3/2`, or a decimal.
    #[arg(long, default_value = "exact")]
    pub nu: String,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    /// Number of coefficients.
    #[arg(long, default_value_t = 10)]
    pub order: usize,
    /// Floating point only, for long expansions.
    #[arg(long)]
    pub float: bool,
}

#[derive(Args, Debug)]
pub struct LawsArgs {
    #[arg(long, value_enum)]
    pub regime: RegimeArg,
    /// Plus perimeter (half-plane and finite).
    #[arg(long)]
    pub p: Option<u64>,
    /// Minus perimeter (finite).
    #[arg(long)]
    pub q: Option<u64>,
    /// Largest k listed for L±_k and R±_k.
    #[arg(long, default_value_t = 20)]
    pub kmax: u64,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub regime: RegimeArg,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub q: Option<u64>,
    /// Stop after this many steps.
    #[arg(long)]
    pub steps: Option<u64>,
    /// Stopping rules `steps:N`, `tm:M` (P_n ≤ M), `tau:X:EPS` (deviation
    /// from the drift above X·f_EPS(n)), `theta:R`, comma-separated; the first
    /// to fire stops the path.
    #[arg(long)]
    pub stopping: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub paths: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Step limit per path.
    #[arg(long)]
    pub guard: Option<u64>,
    /// Largest perimeter of the finite-boundary law grid.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Also print the full trajectory (JSON only).
    #[arg(long)]
    pub record: bool,
}

#[derive(Args, Debug)]
pub struct MapSampleArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub q: usize,
    /// Number of internal faces.
    #[arg(long)]
    pub n: usize,
    /// Weight per monochromatic edge: a rational, or `nu_c`.
    #[arg(long, default_value = "2")]
    pub nu: String,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct MapValidateArgs {
    /// Map file in text or JSON form; `-` reads stdin.
    pub input: PathBuf,
    /// ν used to recompute the weight.
    #[arg(long, default_value_t = 2.0)]
    pub nu: f64,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    /// Expected number of internal faces.
    #[arg(long)]
    pub faces: Option<usize>,
}

#[derive(Args, Debug)]
pub struct MapBallArgs {
    /// Plus boundary length of the half-plane.
    #[arg(long, default_value_t = 1)]
    pub p: u64,
    /// Radius.
    #[arg(long, default_value_t = 2)]
    pub r: u32,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 10_000_000)]
    pub guard: u64,
    /// Face budget of the critical filler for swallowed regions.
    #[arg(long, default_value_t = 60)]
    pub filler_faces: usize,
    /// Perimeter budget of the critical filler.
    #[arg(long, default_value_t = 20)]
    pub filler_perimeter: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Bits of precision of the numerical residual checks.
    #[arg(long, default_value_t = 256)]
    pub precision: usize,
    /// t-order of the functional-equation check.
    #[arg(long, default_value_t = 15)]
    pub order: usize,
    /// Largest p of the half-plane normalization check.
    #[arg(long, default_value_t = 50)]
    pub halfplane_p: usize,
    /// Nonzero orders compared between the two series engines.
    #[arg(long, default_value_t = 10)]
    pub series_orders: usize,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    /// drift, tm_law, cm_limit, tail_exponents, fluctuation_scaling,
    /// hit_zero, one_jump or interface_length.
    pub name: String,
    /// TOML file with flat keys; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub n_paths: Option<u64>,
    #[arg(long)]
    pub n_steps: Option<u64>,
    #[arg(long)]
    pub k_lo: Option<u64>,
    #[arg(long)]
    pub k_hi: Option<u64>,
    #[arg(long)]
    pub fit_lo: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    pub x_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub m_grid: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub n_grid: Option<Vec<u64>>,
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Pass threshold, in the unit of the experiment's pass rule.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub guard: Option<u64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub precision_bits: Option<usize>,
}
