//! Command-line flags, the optional TOML file, and their resolution into a
//! single run configuration (flags > file > defaults).

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use jcm_core::complex_special::PrecisionKind;
use jcm_core::jcm::{theta_of_beta, ESCALATION_THRESHOLD, IntegralSpec, JcmConfig, P2Convention, SeriesSpec, ThermalConfig};
use jcm_core::quadrature::{QuadratureSpec, Rule};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleArg {
    Simpson,
    Bode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionArg {
    Standard,
    Extended,
    /// Standard, retried in extended when cancellation is too large.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Series,
    Integral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConventionArg {
    /// `P_g + theta P1 + theta^2 P2 / 2` with the bare bracket.
    Expansion,
    /// Keep the extra `theta^2 / 2` inside `P2`.
    Printed,
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to the defaults.
#[derive(Args, Clone, Debug, Default)]
pub struct CommonArgs {
    /// Coherent amplitude (real).
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Detuning omega - omega_0.
    #[arg(long, allow_negative_numbers = true)]
    pub delta_omega: Option<f64>,
    /// Coupling constant.
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    /// Tilde-mode amplitude of the thermal state.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma_tilde: Option<f64>,
    /// Thermal expansion parameter theta(beta).
    #[arg(long, conflicts_with = "beta_epsilon")]
    pub theta: Option<f64>,
    /// Derive theta = artanh(exp(-beta epsilon / 2)).
    #[arg(long)]
    pub beta_epsilon: Option<f64>,
    /// Fock-sum truncation.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Accept n_max below the Poisson-tail guard.
    #[arg(long)]
    pub allow_short: bool,
    /// Truncation of the x integrals.
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Step of the x grid.
    #[arg(long)]
    pub dx: Option<f64>,
    /// Minimum truncation of the y integrals (raised to cover the peak).
    #[arg(long)]
    pub y_max: Option<f64>,
    /// Step of the y grid.
    #[arg(long)]
    pub dy: Option<f64>,
    /// Newton-Cotes rule for both integral families.
    #[arg(long, value_enum)]
    pub rule: Option<RuleArg>,
    #[arg(long, value_enum)]
    pub precision: Option<PrecisionArg>,
    /// Cancellation at which `auto` switches to extended precision.
    #[arg(long)]
    pub escalate_at: Option<f64>,
    #[arg(long)]
    pub t_start: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub t_steps: Option<usize>,
    /// Evaluation of Q^(l) for the thermal corrections.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Reading of the second-order thermal coefficient.
    #[arg(long, value_enum)]
    pub p2_convention: Option<ConventionArg>,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file with any of the keys above (underscored).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: available cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// Keys accepted in the config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub alpha: Option<f64>,
    pub delta_omega: Option<f64>,
    pub kappa: Option<f64>,
    pub gamma_tilde: Option<f64>,
    pub theta: Option<f64>,
    pub beta_epsilon: Option<f64>,
    pub n_max: Option<usize>,
    pub allow_short: Option<bool>,
    pub x_max: Option<f64>,
    pub dx: Option<f64>,
    pub y_max: Option<f64>,
    pub dy: Option<f64>,
    pub rule: Option<RuleArg>,
    pub precision: Option<PrecisionArg>,
    pub escalate_at: Option<f64>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub t_steps: Option<usize>,
    pub mode: Option<ModeArg>,
    pub p2_convention: Option<ConventionArg>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

/// Fully resolved settings.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub jcm: JcmConfig,
    pub thermal: ThermalConfig,
    pub series: SeriesSpec,
    pub integrals: IntegralSpec,
    pub precision: PrecisionArg,
    pub t_start: f64,
    pub t_end: f64,
    pub t_steps: usize,
    pub mode: ModeArg,
    pub convention: P2Convention,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

pub const DEFAULT_ALPHA: f64 = 4.0;
pub const DEFAULT_THETA: f64 = 1.0 / 40.0;
pub const DEFAULT_T_STEPS: usize = 4000;
/// The shorter grid used by `check`.
pub const CHECK_T_STEPS: usize = 400;

fn read_file(path: &Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("invalid config file {}: {e}", path.display()))
}

impl RunConfig {
    pub fn resolve(subcommand: &'static str, args: &CommonArgs) -> Result<Self, String> {
        let file = match &args.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        macro_rules! pick {
            ($f:ident, $default:expr) => {
                args.$f.or(file.$f).unwrap_or($default)
            };
        }
        let alpha = pick!(alpha, DEFAULT_ALPHA);
        let jcm = JcmConfig::new(pick!(kappa, 1.0), pick!(delta_omega, 0.0), alpha).map_err(|e| e.to_string())?;

        let gamma_tilde = pick!(gamma_tilde, 1.0);
        // theta and beta_epsilon travel together: the layer that sets either wins
        let (theta, beta) = if args.theta.is_some() || args.beta_epsilon.is_some() {
            (args.theta, args.beta_epsilon)
        } else {
            if file.theta.is_some() && file.beta_epsilon.is_some() {
                return Err("config file sets both theta and beta_epsilon".into());
            }
            (file.theta, file.beta_epsilon)
        };
        let thermal = match (theta, beta) {
            (_, Some(b)) => {
                theta_of_beta(b).map_err(|e| e.to_string())?;
                ThermalConfig::from_beta_epsilon(b, gamma_tilde)
            }
            (Some(t), None) => ThermalConfig::new(t, gamma_tilde),
            (None, None) => ThermalConfig::new(DEFAULT_THETA, gamma_tilde),
        }
        .map_err(|e| e.to_string())?;

        let mut series = SeriesSpec::new(pick!(n_max, jcm_core::jcm::DEFAULT_N_MAX));
        if args.allow_short || file.allow_short.unwrap_or(false) {
            series = series.allowing_short();
        }

        let precision = pick!(precision, PrecisionArg::Auto);
        let rule = args.rule.or(file.rule);
        let mut x = QuadratureSpec::simpson();
        let mut y = QuadratureSpec::bode();
        if let Some(r) = rule {
            let r = match r {
                RuleArg::Simpson => Rule::Simpson,
                RuleArg::Bode => Rule::Bode,
            };
            x = x.with_rule(r);
            y = y.with_rule(r);
        }
        x = x.with_upper_limit(pick!(x_max, x.upper_limit)).with_step(pick!(dx, x.step));
        y = y.with_upper_limit(pick!(y_max, y.upper_limit)).with_step(pick!(dy, y.step));
        let kind = match precision {
            PrecisionArg::Extended => PrecisionKind::Extended,
            _ => PrecisionKind::Standard,
        };
        let integrals = IntegralSpec {
            x: x.with_precision(kind),
            y: y.with_precision(kind),
            escalate: precision == PrecisionArg::Auto,
            escalate_at: pick!(escalate_at, ESCALATION_THRESHOLD),
        };
        integrals.validate().map_err(|e| e.to_string())?;

        let default_steps = if subcommand == "check" { CHECK_T_STEPS } else { DEFAULT_T_STEPS };
        let t_start = pick!(t_start, 0.0);
        let t_end = pick!(t_end, 8.0 * PI);
        let t_steps = pick!(t_steps, default_steps);
        if t_steps < 1 {
            return Err("t_steps must be at least 1".into());
        }
        if !(t_start.is_finite() && t_end.is_finite() && t_start <= t_end) {
            return Err(format!("need t_start <= t_end, got [{t_start}, {t_end}]"));
        }
        if t_start < 0.0 {
            return Err(format!("t_start must be >= 0, got {t_start}"));
        }
        let jobs = args.jobs.or(file.jobs);
        if jobs == Some(0) {
            return Err("jobs must be at least 1".into());
        }
        Ok(Self {
            subcommand,
            jcm,
            thermal,
            series,
            integrals,
            precision,

            t_start,
            t_end,
            t_steps,
            mode: pick!(mode, ModeArg::Series),
            convention: match pick!(p2_convention, ConventionArg::Expansion) {
                ConventionArg::Expansion => P2Convention::ExpansionConsistent,
                ConventionArg::Printed => P2Convention::AsPrinted,
            },
            out: args.out.clone().or(file.out),
            jobs,
        })
    }

    /// `# key=value` lines recording every setting.
    pub fn header(&self) -> String {
        let mut h = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(h, "# {k}={v}");
        };
        kv("subcommand", self.subcommand.to_string());
        kv("alpha", format!("{:e}", self.jcm.alpha()));
        kv("delta_omega", format!("{:e}", self.jcm.delta_omega()));
        kv("kappa", format!("{:e}", self.jcm.kappa()));
        kv("c", format!("{:e}", self.jcm.c()));
        kv("gamma_tilde", format!("{:e}", self.thermal.gamma_tilde()));
        kv("theta", format!("{:e}", self.thermal.theta()));
        if let Some(b) = self.thermal.beta_epsilon() {
            kv("beta_epsilon", format!("{b:e}"));
        }
        kv("n_max", self.series.n_max.to_string());
        kv("allow_short", self.series.allow_short.to_string());
        kv("x_rule", self.integrals.x.rule.as_str().to_string());
        kv("x_max", format!("{:e}", self.integrals.x.upper_limit));
        kv("dx", format!("{:e}", self.integrals.x.step));
        kv("y_rule", self.integrals.y.rule.as_str().to_string());
        kv("y_max", format!("{:e}", self.integrals.y.upper_limit));
        kv("dy", format!("{:e}", self.integrals.y.step));
        kv("precision", format!("{:?}", self.precision).to_lowercase());
        kv("escalate_at", format!("{:e}", self.integrals.escalate_at));
        kv("t_start", format!("{:e}", self.t_start));
        kv("t_end", format!("{:e}", self.t_end));
        kv("t_steps", self.t_steps.to_string());
        kv("mode", format!("{:?}", self.mode).to_lowercase());
        kv(
            "p2_convention",
            match self.convention {
                P2Convention::ExpansionConsistent => "expansion",
                P2Convention::AsPrinted => "printed",
            }
            .to_string(),
        );
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_override_defaults() {
        let dir = std::env::temp_dir().join(format!("jcm-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "alpha = 2.0\ndelta_omega = 1.0\nt_steps = 10\nprecision = \"extended\"\n").unwrap();
        let args = CommonArgs {
            alpha: Some(3.0),
            config: Some(path.clone()),
            ..Default::default()
        };
        let rc = RunConfig::resolve("series", &args).unwrap();
        assert_eq!(rc.jcm.alpha(), 3.0);
        assert_eq!(rc.jcm.delta_omega(), 1.0);
        assert_eq!(rc.t_steps, 10);
        assert_eq!(rc.precision, PrecisionArg::Extended);
        assert_eq!(rc.jcm.kappa(), 1.0);
        assert_eq!(rc.thermal.theta(), DEFAULT_THETA);
        std::fs::write(&path, "alhpa = 2.0\n").unwrap();
        assert!(RunConfig::resolve("series", &args).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn theta_sources() {
        let args = CommonArgs {
            beta_epsilon: Some(8.0),
            ..Default::default()
        };
        let rc = RunConfig::resolve("thermal", &args).unwrap();
        assert!((rc.thermal.theta() - (-4.0f64).exp().atanh()).abs() < 1e-16);
        let bad = CommonArgs {
            beta_epsilon: Some(-1.0),
            ..Default::default()
        };
        assert!(RunConfig::resolve("thermal", &bad).is_err());
    }

    #[test]
    fn time_grid_validation() {
        let args = CommonArgs {
            t_start: Some(2.0),
            t_end: Some(1.0),
            ..Default::default()
        };
        assert!(RunConfig::resolve("series", &args).is_err());
        let zero = CommonArgs {
            t_steps: Some(0),
            ..Default::default()
        };
        assert!(RunConfig::resolve("series", &zero).is_err());
        assert_eq!(RunConfig::resolve("check", &CommonArgs::default()).unwrap().t_steps, CHECK_T_STEPS);
    }
}
