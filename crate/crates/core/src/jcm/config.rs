//! Physical parameters and truncation settings.

use super::JcmError;

/// Field-atom parameters. The detuning constant `c = (delta_omega / 2 kappa)^2`
/// is always derived, never stored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JcmConfig {
    kappa: f64,
    delta_omega: f64,
    alpha: f64,
}

impl JcmConfig {
    pub fn new(kappa: f64, delta_omega: f64, alpha: f64) -> Result<Self, JcmError> {
        if !kappa.is_finite() || kappa == 0.0 {
            return Err(JcmError::InvalidConfig(format!("kappa must be finite and non-zero, got {kappa}")));
        }
        if !delta_omega.is_finite() {
            return Err(JcmError::InvalidConfig(format!("delta_omega must be finite, got {delta_omega}")));
        }
        if !alpha.is_finite() {
            return Err(JcmError::InvalidConfig(format!("alpha must be finite, got {alpha}")));
        }
        Ok(Self {
            kappa,
            delta_omega,
            alpha,
        })
    }

    /// `kappa = 1`, `delta_omega = 0`.
    pub fn resonant(alpha: f64) -> Result<Self, JcmError> {
        Self::new(1.0, 0.0, alpha)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn delta_omega(&self) -> f64 {
        self.delta_omega
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Mean photon number `alpha^2`.
    pub fn alpha_sq(&self) -> f64 {
        self.alpha * self.alpha
    }

    /// `c = (delta_omega / 2 kappa)^2`.
    pub fn c(&self) -> f64 {
        let r = self.delta_omega / (2.0 * self.kappa);
        r * r
    }

    pub fn is_resonant(&self) -> bool {
        self.delta_omega == 0.0
    }

    /// The `J` forms assume `delta_omega = 0` and `kappa = 1`.
    pub(crate) fn require_unit_resonant(&self, op: &'static str) -> Result<(), JcmError> {
        if self.delta_omega != 0.0 || self.kappa != 1.0 {
            return Err(JcmError::Domain(format!(
                "{op} requires delta_omega = 0 and kappa = 1 (got {}, {})",
                self.delta_omega, self.kappa
            )));
        }
        Ok(())
    }

    pub(crate) fn require_nonzero_alpha(&self, op: &'static str) -> Result<(), JcmError> {
        if self.alpha == 0.0 {
            return Err(JcmError::Domain(format!(
                "{op} is undefined at alpha = 0 (|alpha|^(2iy) has no limit)"
            )));
        }
        Ok(())
    }
}

/// Low-temperature parameters of the thermal coherent state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalConfig {
    theta: f64,
    gamma_tilde: f64,
    beta_epsilon: Option<f64>,
}

/// `theta(beta)`: exact `artanh(e^{-beta eps / 2})` and the leading-order
/// approximation `e^{-beta eps / 2}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaValues {
    pub exact: f64,
    pub approximate: f64,
}

/// Threshold on `theta^2 (4 gamma^2 + 1) alpha^2` past which the expansion is
/// flagged as outside its perturbative regime.
pub const PERTURBATIVE_LIMIT: f64 = 0.5;

pub fn theta_of_beta(beta_epsilon: f64) -> Result<ThetaValues, JcmError> {
    if !(beta_epsilon > 0.0) {
        return Err(JcmError::Domain(format!("beta*epsilon must be positive, got {beta_epsilon}")));
    }
    let approximate = (-0.5 * beta_epsilon).exp();
    Ok(ThetaValues {
        exact: approximate.atanh(),
        approximate,
    })
}

impl ThermalConfig {
    pub fn new(theta: f64, gamma_tilde: f64) -> Result<Self, JcmError> {
        if !(0.0..1.0).contains(&theta) {
            return Err(JcmError::InvalidConfig(format!("theta must lie in [0, 1), got {theta}")));
        }
        if !gamma_tilde.is_finite() {
            return Err(JcmError::InvalidConfig(format!("gamma_tilde must be finite, got {gamma_tilde}")));
        }
        Ok(Self {
            theta,
            gamma_tilde,
            beta_epsilon: None,
        })
    }

    /// Derive `theta` from `beta * epsilon` using the exact relation.
    pub fn from_beta_epsilon(beta_epsilon: f64, gamma_tilde: f64) -> Result<Self, JcmError> {
        let th = theta_of_beta(beta_epsilon)?;
        let mut cfg = Self::new(th.exact, gamma_tilde)?;
        cfg.beta_epsilon = Some(beta_epsilon);
        Ok(cfg)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn gamma_tilde(&self) -> f64 {
        self.gamma_tilde
    }

    pub fn beta_epsilon(&self) -> Option<f64> {
        self.beta_epsilon
    }

    pub fn with_theta(self, theta: f64) -> Result<Self, JcmError> {
        let mut cfg = Self::new(theta, self.gamma_tilde)?;
        cfg.beta_epsilon = None;
        Ok(cfg)
    }

    /// `theta^2 (4 gamma^2 + 1) alpha^2`.
    pub fn perturbative_measure(&self, alpha: f64) -> f64 {
        let g2 = self.gamma_tilde * self.gamma_tilde;
        self.theta * self.theta * (4.0 * g2 + 1.0) * alpha * alpha
    }

    /// Warning text when the expansion leaves its perturbative regime.
    pub fn perturbative_warning(&self, alpha: f64) -> Option<String> {
        let m = self.perturbative_measure(alpha);
        (m > PERTURBATIVE_LIMIT).then(|| {
            format!(
                "theta^2 (4 gamma^2 + 1) alpha^2 = {m:.4} exceeds {PERTURBATIVE_LIMIT}; second-order corrections are not small"
            )
        })
    }
}

/// Fock-sum truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesSpec {
    pub n_max: usize,
    /// Accept `n_max` below the Poisson-tail guard.
    pub allow_short: bool,
}

pub const DEFAULT_N_MAX: usize = 100;

impl Default for SeriesSpec {
    fn default() -> Self {
        Self {
            n_max: DEFAULT_N_MAX,
            allow_short: false,
        }
    }
}

impl SeriesSpec {
    pub fn new(n_max: usize) -> Self {
        Self {
            n_max,
            allow_short: false,
        }
    }

    pub fn allowing_short(self) -> Self {
        Self {
            allow_short: true,
            ..self
        }
    }

    /// Smallest `n_max` covering the Poisson tail: `alpha^2 + 10 sqrt(alpha^2 + 1)`.
    pub fn minimum_for(alpha: f64) -> usize {
        let a2 = alpha * alpha;
        (a2 + 10.0 * (a2 + 1.0).sqrt()).ceil() as usize
    }

    /// Smallest `n_max` satisfying the guard, but at least the default.
    pub fn for_alpha(alpha: f64) -> Self {
        Self::new(Self::minimum_for(alpha).max(DEFAULT_N_MAX))
    }

    pub fn validate(&self, alpha: f64) -> Result<(), JcmError> {
        let need = Self::minimum_for(alpha);
        if self.n_max < need && !self.allow_short {
            return Err(JcmError::InvalidConfig(format!(
                "n_max = {} is below alpha^2 + 10 sqrt(alpha^2 + 1) = {need}; raise it or allow short sums",
                self.n_max
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detuning_constant() {
        let cfg = JcmConfig::new(1.0, 4.0, 4.0).unwrap();
        assert_eq!(cfg.c(), 4.0);
        let cfg = JcmConfig::new(-2.0, 2.0, 1.0).unwrap();
        assert_eq!(cfg.c(), 0.25);
        assert!(JcmConfig::new(0.0, 1.0, 1.0).is_err());
        assert!(JcmConfig::new(1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn theta_conversion() {
        let th = theta_of_beta(8.0).unwrap();
        assert!((th.approximate - 0.018315638888734).abs() < 1e-14);
        let d = th.exact - th.approximate;
        assert!(d > 0.0 && d < th.approximate.powi(3));
        assert!(theta_of_beta(1e3).unwrap().exact < 1e-200);
        assert!(theta_of_beta(0.0).is_err());
        assert!(theta_of_beta(-1.0).is_err());
    }

    #[test]
    fn thermal_validation_and_warning() {
        assert!(ThermalConfig::new(1.0, 1.0).is_err());
        assert!(ThermalConfig::new(-0.1, 1.0).is_err());
        let th = ThermalConfig::new(1.0 / 40.0, 1.0).unwrap();
        assert!(th.perturbative_warning(4.0).is_none());
        let hot = ThermalConfig::new(0.2, 1.0).unwrap();
        assert!(hot.perturbative_warning(4.0).is_some());
        let b = ThermalConfig::from_beta_epsilon(8.0, 0.5).unwrap();
        assert_eq!(b.beta_epsilon(), Some(8.0));
    }

    #[test]
    fn series_guard() {
        assert_eq!(SeriesSpec::minimum_for(4.0), 58);
        assert!(SeriesSpec::default().validate(4.0).is_ok());
        assert!(SeriesSpec::new(40).validate(4.0).is_err());
        assert!(SeriesSpec::new(40).allowing_short().validate(4.0).is_ok());
        assert!(SeriesSpec::default().validate(9.0).is_err());
        assert!(SeriesSpec::for_alpha(9.0).validate(9.0).is_ok());
    }
}
