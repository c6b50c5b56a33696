//! Command-line interface: `constants`, `bounds`, `test`, `verify`.
//!
//! Exit codes are fixed for scripting: 0 means a verdict or report was
//! produced (any tag), 2 means bad input (usage, file, or schema), 1
//! means an internal failure or a failed verification check. The default
//! quadrature tolerance can be overridden with the `DEHN_BOUNDS_TOL`
//! environment variable; explicit `--tol` flags win over it.
//!
//! The linear window and ceiling under published constants are printed
//! through exact decimal arithmetic, so `bounds --delta-v 0.1` shows the
//! window as [45.63, 206.33] rather than its floating-point neighbors.

use crate::bounds::{self, BoundStyle, LhatWindow, VolumeDefect};
use crate::calculus;
use crate::constants::{self, ConstantMode};
use crate::parental::{self, ScreenConfig};
use crate::polyalg::{self, rational_from_decimal};
use crate::records::{self, ReportFile, REPORT_VERSION};
use crate::verification;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Write as _;
use std::path::PathBuf;

pub const TOL_ENV_VAR: &str = "DEHN_BOUNDS_TOL";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),
    #[error("{0}")]
    Internal(String),
    /// Verification ran and produced its table, but some check failed.
    #[error("verification failed")]
    ChecksFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadInput(_) => 2,
            CliError::Internal(_) | CliError::ChecksFailed(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "dehn-bounds",
    version,
    about = "Certified Dehn-filling bounds and the parental screening test"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Published,
    Computed,
}

impl From<ModeArg> for ConstantMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Published => ConstantMode::Published,
            ModeArg::Computed => ConstantMode::Computed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StyleArg {
    Linear,
    Composed,
}

impl From<StyleArg> for BoundStyle {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::Linear => BoundStyle::Linear,
            StyleArg::Composed => BoundStyle::Composed,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the beta enclosure, envelope coefficients, and decision constants
    Constants {
        /// Quadrature tolerance (default 1e-12, or DEHN_BOUNDS_TOL)
        #[arg(long)]
        tol: Option<f64>,
        /// Which constants the decision section shows
        #[arg(long, value_enum, default_value_t = ModeArg::Published)]
        mode: ModeArg,
    },
    /// Classify a volume defect and print its ceilings and windows
    Bounds {
        /// Volume defect (parent volume minus child volume), as a decimal
        #[arg(long = "delta-v")]
        delta_v: String,
        /// Which constants the linear bounds use
        #[arg(long, value_enum, default_value_t = ModeArg::Published)]
        mode: ModeArg,
    },
    /// Screen a parent/child pair of manifold records
    Test {
        /// Path to the parent manifold JSON record
        #[arg(long)]
        parent: PathBuf,
        /// Path to the child manifold JSON record
        #[arg(long)]
        child: PathBuf,
        /// Additive slack on the short-slope threshold
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        /// Bound style for the window and ceiling
        #[arg(long, value_enum, default_value_t = StyleArg::Linear)]
        mode: StyleArg,
        /// Write the full report as JSON to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification battery and print its table
    Verify {
        /// Grid points per monotonicity/envelope check
        #[arg(long = "grid-n", default_value_t = 10_000)]
        grid_n: usize,
        /// Override K to corrupt the K-dependent checks (negative control)
        #[arg(long = "debug-k")]
        debug_k: Option<f64>,
    },
}

pub fn execute(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Constants { tol, mode } => cmd_constants(tol, mode.into()),
        Command::Bounds { delta_v, mode } => cmd_bounds(&delta_v, mode.into()),
        Command::Test {
            parent,
            child,
            epsilon,
            mode,
            out,
        } => cmd_test(&parent, &child, epsilon, mode.into(), out.as_deref()),
        Command::Verify { grid_n, debug_k } => cmd_verify(grid_n, debug_k),
    }
}

fn effective_tol(flag: Option<f64>) -> Result<f64, CliError> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV_VAR) {
            Ok(text) => text
                .parse::<f64>()
                .map_err(|_| CliError::BadInput(format!("{TOL_ENV_VAR}={text} is not a number")))?,
            Err(_) => calculus::DEFAULT_QUAD_TOL,
        },
    };
    if tol.is_finite() && tol > 0.0 && tol <= 1e-3 {
        Ok(tol)
    } else {
        Err(CliError::BadInput(format!(
            "tolerance must lie in (0, 1e-3], got {tol}"
        )))
    }
}

/// Exact decimal rendering of a rational whose reduced denominator has
/// only factors 2 and 5; `None` otherwise.
fn decimal_string(r: &BigRational) -> Option<String> {
    let mut denom = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0u32;
    let mut fives = 0u32;
    while (&denom % &two).is_zero() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return None;
    }
    let scale = twos.max(fives);
    let scaled = r.numer() * num_traits::pow(BigInt::from(10), scale as usize) / r.denom();
    let sign = if scaled.is_negative() { "-" } else { "" };
    let digits = scaled.abs().to_string();
    if scale == 0 {
        return Some(format!("{sign}{digits}"));
    }
    let scale = scale as usize;
    Some(if digits.len() <= scale {
        format!("{sign}0.{}{digits}", "0".repeat(scale - digits.len()))
    } else {
        let (int_part, frac_part) = digits.split_at(digits.len() - scale);
        format!("{sign}{int_part}.{frac_part}")
    })
}

fn rat_display(r: &BigRational) -> String {
    decimal_string(r).unwrap_or_else(|| polyalg::rational_to_f64(r).to_string())
}

/// The published constants as exact rationals, for decimal-exact output.
struct PublishedRationals {
    alpha: BigRational,
    delta: BigRational,
    gamma: BigRational,
    short_slope: BigRational,
    core_len_cap: BigRational,
    defect_cap: BigRational,
    k: BigRational,
}

fn published_rationals() -> PublishedRationals {
    let parse = |s: &str| rational_from_decimal(s).expect("published constant literal");
    PublishedRationals {
        alpha: parse("2.879"),
        delta: parse("4.563"),
        gamma: parse("20.633"),
        short_slope: parse("7.5832"),
        core_len_cap: parse("0.156012"),
        defect_cap: parse("0.198"),
        k: parse("3.3957"),
    }
}

fn cmd_constants(tol_flag: Option<f64>, mode: ConstantMode) -> Result<String, CliError> {
    let tol = effective_tol(tol_flag)?;
    let c = constants::compute_constants(tol).map_err(|e| CliError::Internal(e.to_string()))?;
    let p = constants::published_constants();
    let pr = published_rationals();
    let four = BigRational::from_integer(BigInt::from(4));
    let eight = BigRational::from_integer(BigInt::from(8));

    let mut out = String::new();
    let _ = writeln!(out, "constant mode: {mode}");
    let _ = writeln!(out, "quadrature tolerance: {tol:e}");
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "beta enclosure: [{}, {}] (width {:.2e})",
        c.beta.lo_f64(),
        c.beta.hi_f64(),
        polyalg::rational_to_f64(&c.beta.width()),
    );
    let _ = writeln!(out, "envelope coefficients:");
    let _ = writeln!(out, "  A = {}", c.a);
    let _ = writeln!(out, "  B = {}", c.b);
    let _ = writeln!(out, "  C = {}", rat_display(&(&pr.k / &eight)));
    let _ = writeln!(out, "  D = {}", rat_display(&(&pr.k / &four)));
    let _ = writeln!(out, "computed scale constants:");
    let _ = writeln!(out, "  alpha = {}", c.alpha);
    let _ = writeln!(out, "  delta = {}", c.delta);
    let _ = writeln!(out, "  gamma = {}", c.gamma);
    let _ = writeln!(out);
    let _ = writeln!(out, "published reference table:");
    let _ = writeln!(out, "  K = {}", rat_display(&pr.k));
    let _ = writeln!(out, "  tube radius = {}", p.tube_radius);
    let _ = writeln!(
        out,
        "  short slope threshold = {}",
        rat_display(&pr.short_slope)
    );
    let _ = writeln!(out, "  core length cap = {}", rat_display(&pr.core_len_cap));
    let _ = writeln!(out, "  defect cap = {}", rat_display(&pr.defect_cap));
    let _ = writeln!(out, "  alpha = {}", rat_display(&pr.alpha));
    let _ = writeln!(out, "  delta = {}", rat_display(&pr.delta));
    let _ = writeln!(out, "  gamma = {}", rat_display(&pr.gamma));
    let _ = writeln!(out);
    let dc = constants::decision_constants(mode);
    let _ = writeln!(out, "decision constants ({mode}):");
    let _ = writeln!(out, "  alpha = {}", dc.alpha);
    let _ = writeln!(out, "  delta = {}", dc.delta);
    let _ = writeln!(out, "  gamma = {}", dc.gamma);
    let _ = writeln!(out, "  short slope threshold = {}", dc.short_slope);
    let _ = writeln!(out, "  core length cap = {}", dc.core_len_cap);
    let _ = writeln!(out, "  defect cap = {}", dc.defect_cap);
    Ok(out)
}

fn cmd_bounds(delta_v: &str, mode: ConstantMode) -> Result<String, CliError> {
    let dv_rat = rational_from_decimal(delta_v).ok_or_else(|| {
        CliError::BadInput(format!("--delta-v {delta_v} is not a decimal number"))
    })?;
    let dv = polyalg::rational_to_f64(&dv_rat);
    let tol = effective_tol(None)?;

    let mut out = String::new();
    let _ = writeln!(out, "volume defect: {}", rat_display(&dv_rat));
    if !dv_rat.is_positive() {
        let _ = writeln!(out, "regime: ExcludedByVolume");
        let _ = writeln!(
            out,
            "volume does not strictly decrease; no filling relationship is possible"
        );
        return Ok(out);
    }

    let pr = published_rationals();
    let dc = constants::decision_constants(mode);
    let empty = match mode {
        ConstantMode::Published => dv_rat >= pr.defect_cap,
        ConstantMode::Computed => dv >= dc.defect_cap,
    };
    let regime = if empty {
        "ShortSlopeOnly"
    } else {
        "TwoRegimes"
    };
    let _ = writeln!(out, "regime: {regime}");
    let _ = writeln!(out, "short slope threshold: {}", dc.short_slope);
    let _ = writeln!(out, "core length cap: {}", dc.core_len_cap);

    let _ = writeln!(out, "linear bounds ({mode} constants):");
    match mode {
        ConstantMode::Published => {
            let raw_ceiling = &pr.alpha * &dv_rat;
            let ceiling = raw_ceiling.min(pr.core_len_cap.clone());
            let _ = writeln!(out, "  geodesic length ceiling: {}", rat_display(&ceiling));
            if empty {
                let _ = writeln!(out, "  normalized length window: empty");
            } else {
                let _ = writeln!(
                    out,
                    "  normalized length window: [{}, {}]",
                    rat_display(&(&pr.delta / &dv_rat)),
                    rat_display(&(&pr.gamma / &dv_rat)),
                );
            }
        }
        ConstantMode::Computed => {
            let ceiling = (dc.alpha * dv).min(dc.core_len_cap);
            let _ = writeln!(out, "  geodesic length ceiling: {ceiling}");
            if empty {
                let _ = writeln!(out, "  normalized length window: empty");
            } else {
                let _ = writeln!(
                    out,
                    "  normalized length window: [{}, {}]",
                    dc.delta / dv,
                    dc.gamma / dv,
                );
            }
        }
    }

    let composed_ceiling = bounds::ell_upper(VolumeDefect(dv), BoundStyle::Composed, mode, tol)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let composed_window = bounds::lhat_sq_window(VolumeDefect(dv), BoundStyle::Composed, mode, tol)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let _ = writeln!(out, "composed bounds:");
    let _ = writeln!(out, "  geodesic length ceiling: {composed_ceiling}");
    match composed_window {
        LhatWindow::Empty => {
            let _ = writeln!(out, "  normalized length window: empty");
        }
        LhatWindow::Nonempty { lo_sq, hi_sq } => {
            let _ = writeln!(out, "  normalized length window: [{lo_sq}, {hi_sq}]");
        }
    }
    Ok(out)
}

fn load_record(path: &std::path::Path) -> Result<records::ManifoldRecord, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))?;
    records::manifold_from_json(&text)
        .map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))
}

fn cmd_test(
    parent_path: &std::path::Path,
    child_path: &std::path::Path,
    epsilon: f64,
    style: BoundStyle,
    out_path: Option<&std::path::Path>,
) -> Result<String, CliError> {
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(CliError::BadInput(format!(
            "--epsilon must be nonnegative, got {epsilon}"
        )));
    }
    let tol = effective_tol(None)?;
    let parent = load_record(parent_path)?;
    let child = load_record(child_path)?;
    let config = ScreenConfig {
        epsilon,
        style,
        tol,
        ..ScreenConfig::default()
    };
    let verdict = parental::screen_pair(&parent, &child, &config)
        .map_err(|e| CliError::Internal(e.to_string()))?;

    let report = ReportFile {
        version: REPORT_VERSION,
        parent: parent.name.clone(),
        child: child.name.clone(),
        constant_mode: config.mode,
        bound_style: config.style,
        epsilon,
        quad_tol: tol,
        verdict,
    };
    let mut json = report.to_json();
    json.push('\n');
    if let Some(path) = out_path {
        std::fs::write(path, &json)
            .map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))?;
    }
    Ok(json)
}

fn cmd_verify(grid_n: usize, debug_k: Option<f64>) -> Result<String, CliError> {
    if grid_n < 2 {
        return Err(CliError::BadInput(format!(
            "--grid-n must be at least 2, got {grid_n}"
        )));
    }
    if let Some(k) = debug_k {
        if !(k.is_finite() && k > 0.0) {
            return Err(CliError::BadInput(format!(
                "--debug-k must be positive, got {k}"
            )));
        }
    }
    let reports =
        verification::run_all(grid_n, debug_k).map_err(|e| CliError::Internal(e.to_string()))?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<36} {:<7} {:>14} {:>8}",
        "check", "result", "worst", "grid"
    );
    for r in &reports {
        let _ = writeln!(
            out,
            "{:<36} {:<7} {:>14.3e} {:>8}",
            r.check_name,
            if r.passed { "pass" } else { "FAIL" },
            r.worst_violation,
            r.grid_size,
        );
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    let _ = writeln!(
        out,
        "{} checks: {} passed, {} failed",
        reports.len(),
        reports.len() - failed,
        failed
    );
    if failed > 0 {
        Err(CliError::ChecksFailed(out))
    } else {
        Ok(out)
    }
}
