//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

/// Design, simulate and analyse Kerr-based generation of entangled coherent-state
/// superpositions.
///
/// Losses are given as relative rates `Λ = (I₀ − I)/I`; the matching attenuation
/// is `10·log₁₀(Λ + 1)` dB.
#[derive(Debug, Parser)]
#[command(name = "kerrgen", version, about, long_about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize the elimination-measurement scheme for a target state.
    Design(DesignArgs),
    /// Simulate the full protocol and tabulate every click pattern.
    Simulate(SimulateArgs),
    /// Entanglement versus distinguishability `|α|²χ²` for optimal and semi-successful outcomes.
    EntangleScan(ScanArgs),
    /// Loss budget and success probability versus channel attenuation.
    Feasibility(FeasibilityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetPreset {
    /// One detector, maximally entangled two-term state.
    BellK1,
    /// Two detectors, optimum for weakly distinguishable coherent states.
    MaxentK2Low,
    /// Two detectors, optimum for strongly distinguishable coherent states.
    MaxentK2High,
    /// Photon-number-correlated target `Σ_{n₁+n₂=s}` (use `--s` and `--K`).
    PhotonCorrelated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DetectorPreset {
    /// `λ = 1e-2`, `ζ = 1e-8`.
    LowNoise,
    /// `λ = 1e-1`, `ζ = 1e-6`.
    HighEfficiency,
}

/// Parses `re`, `re+imi` or `imi`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    s.trim()
        .parse::<Complex64>()
        .map_err(|e| format!("`{s}` is not a complex number: {e}"))
}

/// Target state and physical amplitudes.
#[derive(Debug, Clone, Args)]
pub struct TargetArgs {
    /// Named target (supplies default amplitudes and Kerr phase).
    #[arg(long, value_enum, conflicts_with = "coeffs")]
    pub preset: Option<TargetPreset>,
    /// Explicit coefficients `c_0,…,c_K` (complex, e.g. `1,0.5+0.2i`).
    #[arg(long, value_parser = parse_complex, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    pub coeffs: Option<Vec<Complex64>>,
    /// Total photon number of the photon-correlated target.
    #[arg(long, default_value_t = 2)]
    pub s: usize,
    /// Number of detectors (degree of the target).
    #[arg(long = "K")]
    pub k: Option<usize>,
    /// Coherent amplitude of mode a.
    #[arg(long, value_parser = parse_complex)]
    pub alpha: Option<Complex64>,
    /// Coherent amplitude of mode b (defaults to α).
    #[arg(long, value_parser = parse_complex)]
    pub beta: Option<Complex64>,
    /// Cross-Kerr phase per photon pair (radians).
    #[arg(long)]
    pub chi: Option<f64>,
    /// Probe amplitude γ.
    #[arg(long, value_parser = parse_complex, default_value = "0.1")]
    pub gamma: Complex64,
    /// Transmittance of the last cascade beamsplitter.
    #[arg(long, default_value_t = scheme_design::DEFAULT_DELTA)]
    pub delta: f64,
}

/// Noise sources (all default to an ideal system).
#[derive(Debug, Clone, Args)]
pub struct NoiseArgs {
    /// Relative probe loss in the channel.
    #[arg(long = "Lambda", default_value_t = 0.0)]
    pub lambda_channel: f64,
    /// Relative loss during the Kerr interactions.
    #[arg(long = "Lambda1", default_value_t = 0.0)]
    pub lambda_kerr: f64,
    /// Relative loss during storage.
    #[arg(long = "Lambda2", default_value_t = 0.0)]
    pub lambda_storage: f64,
    /// Variance of the random phase of the main modes.
    #[arg(long, default_value_t = 0.0)]
    pub dphi2: f64,
    /// Detector efficiency λ.
    #[arg(long = "lambda-det")]
    pub lambda_det: Option<f64>,
    /// Dark-count probability per detection window.
    #[arg(long)]
    pub zeta: Option<f64>,
    /// Relative error of the a–c Kerr phase.
    #[arg(long = "eps-ac", default_value_t = 0.0)]
    pub eps_ac: f64,
    /// Relative error of the b–c Kerr phase.
    #[arg(long = "eps-bc", default_value_t = 0.0)]
    pub eps_bc: f64,
}

/// Output destination and encoding.
#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file (standard output when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct DesignArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    /// Write the detection scheme (JSON) to this file.
    #[arg(long)]
    pub scheme_out: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    /// Use a previously designed scheme instead of synthesizing one.
    #[arg(long)]
    pub scheme: Option<PathBuf>,
    /// Photon-count cutoff of the operator-path oracle.
    #[arg(long, default_value_t = protocol_sim::DEFAULT_N_CUT)]
    pub n_cut: usize,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// Distinguishability grid `|α|²χ²` (comma-separated).
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 1,
        default_value = "1e-4,3e-4,1e-3,3e-3,1e-2,3e-2,0.1,0.3,1,3,10,30,100"
    )]
    pub x_grid: Vec<f64>,
    /// Detector counts to scan (comma-separated).
    #[arg(long, value_delimiter = ',', num_args = 1, default_value = "1,2,3")]
    pub ks: Vec<usize>,
    /// Coherent amplitude `|α| = |β|`.
    #[arg(long, default_value_t = 100.0)]
    pub alpha: f64,
    /// Seed of the optimizer restarts.
    #[arg(long, default_value_t = entanglement::OptimizerConfig::default().seed)]
    pub seed: u64,
    /// Number of optimizer restarts per grid point.
    #[arg(long, default_value_t = entanglement::OptimizerConfig::default().restarts)]
    pub restarts: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FeasibilityArgs {
    /// Number of detectors (1 or 2); the reference optimum target is used.
    #[arg(long = "K", default_value_t = 1)]
    pub k: usize,
    /// Coherent amplitude `|α| = |β|`.
    #[arg(long, default_value_t = 10f64.sqrt())]
    pub alpha: f64,
    /// Cross-Kerr phase per photon pair (radians).
    #[arg(long, default_value_t = 0.01)]
    pub chi: f64,
    /// Probe amplitude used for the requirement table.
    #[arg(long, value_parser = parse_complex, default_value = "0.1")]
    pub gamma: Complex64,
    #[arg(long, value_enum, default_value_t = DetectorPreset::LowNoise)]
    pub detector: DetectorPreset,
    /// Target fidelity (ignored when `--epsilon` is given).
    #[arg(long, default_value_t = 0.9)]
    pub fidelity: f64,
    /// Allowed infidelity per noise source, `(1 − F)/6` by default.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Attenuation grid in dB as `start:stop:step`.
    #[arg(long, default_value = "0:30:0.5")]
    pub db_grid: String,
    /// Fidelities of the fixed-loss sweep (comma-separated).
    #[arg(long, value_delimiter = ',', num_args = 1, default_value = "0.8,0.85,0.9,0.95,0.99")]
    pub fidelity_grid: Vec<f64>,
    /// Channel attenuation (dB) of the fixed-loss sweep.
    #[arg(long, default_value_t = 10.0)]
    pub loss_db: f64,
    /// Upper limit on the probe intensity `|γ|²` (use `inf` for none).
    #[arg(long, default_value_t = noise_model::DEFAULT_GAMMA_SQ_CAP)]
    pub gamma_sq_cap: f64,
    /// Smallest useful one-run success probability.
    #[arg(long, default_value_t = 1e-6)]
    pub p_min: f64,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Accepted for symmetry with the other subcommands; the sweeps are deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}
