//! Sampled traces with their provenance.

use rayon::prelude::*;

use super::config::JcmConfig;
use super::JcmError;

/// Which formula produced a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Series,
    Envelope,
    IntegralJ,
    IntegralI,
    Thermal1,
    Thermal2,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Series => "series",
            Provenance::Envelope => "envelope",
            Provenance::IntegralJ => "integral_J",
            Provenance::IntegralI => "integral_I",
            Provenance::Thermal1 => "thermal_1",
            Provenance::Thermal2 => "thermal_2",
        }
    }
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `(t, value)` records with strictly increasing `t` and finite values.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    records: Vec<(f64, f64)>,
    provenance: Provenance,
    config: JcmConfig,
}

/// `steps + 1` equally spaced points on `[t_start, t_end]`, or the single
/// point `t_start` when the interval is empty.
pub fn time_grid(t_start: f64, t_end: f64, steps: usize) -> Result<Vec<f64>, JcmError> {
    if !t_start.is_finite() || !t_end.is_finite() || t_start > t_end {
        return Err(JcmError::InvalidConfig(format!("need t_start <= t_end, got [{t_start}, {t_end}]")));
    }
    if steps == 0 {
        return Err(JcmError::InvalidConfig("t_steps must be at least 1".into()));
    }
    if t_start == t_end {
        return Ok(vec![t_start]);
    }
    let h = (t_end - t_start) / steps as f64;
    Ok((0..=steps)
        .map(|i| if i == steps { t_end } else { t_start + i as f64 * h })
        .collect())
}

impl TimeSeries {
    pub fn new(records: Vec<(f64, f64)>, provenance: Provenance, config: JcmConfig) -> Result<Self, JcmError> {
        for w in records.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(JcmError::InvalidConfig(format!(
                    "times must increase strictly ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some(&(t, v)) = records.iter().find(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(JcmError::NonFinite {
                op: "time series",
                t,
                detail: format!("value {v}"),
            });
        }
        Ok(Self {
            records,
            provenance,
            config,
        })
    }

    /// Evaluate `f` at every time, in parallel on the current rayon pool.
    /// The first error in time order is returned.
    pub fn evaluate<F>(times: &[f64], provenance: Provenance, config: JcmConfig, f: F) -> Result<Self, JcmError>
    where
        F: Fn(f64) -> Result<f64, JcmError> + Sync,
    {
        let values: Vec<Result<f64, JcmError>> = times.par_iter().map(|&t| f(t)).collect();
        let mut records = Vec::with_capacity(times.len());
        for (&t, v) in times.iter().zip(values) {
            records.push((t, v?));
        }
        Self::new(records, provenance, config)
    }

    pub fn records(&self) -> &[(f64, f64)] {
        &self.records
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn config(&self) -> &JcmConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `max |a - b|` over common times. Errors if the grids differ.
    pub fn max_abs_difference(&self, other: &TimeSeries) -> Result<f64, JcmError> {
        if self.records.len() != other.records.len()
            || self.records.iter().zip(&other.records).any(|(a, b)| a.0 != b.0)
        {
            return Err(JcmError::InvalidConfig("time grids differ".into()));
        }
        Ok(self
            .records
            .iter()
            .zip(&other.records)
            .map(|(a, b)| (a.1 - b.1).abs())
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jcm::series::sigma_z_series;
    use crate::jcm::SeriesSpec;

    #[test]
    fn grid_shapes() {
        let g = time_grid(0.0, 1.0, 4).unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(time_grid(2.0, 2.0, 10).unwrap(), vec![2.0]);
        assert!(time_grid(1.0, 0.0, 3).is_err());
        assert!(time_grid(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn invariants_enforced() {
        let cfg = JcmConfig::resonant(1.0).unwrap();
        assert!(TimeSeries::new(vec![(0.0, 1.0), (0.0, 2.0)], Provenance::Series, cfg).is_err());
        assert!(TimeSeries::new(vec![(0.0, f64::NAN)], Provenance::Series, cfg).is_err());
        assert!(TimeSeries::new(vec![(0.0, 1.0), (1.0, 2.0)], Provenance::Envelope, cfg).is_ok());
    }

    #[test]
    fn parallel_evaluation_is_ordered_and_deterministic() {
        let cfg = JcmConfig::resonant(4.0).unwrap();
        let times = time_grid(0.0, 10.0, 200).unwrap();
        let s = SeriesSpec::default();
        let a = TimeSeries::evaluate(&times, Provenance::Series, cfg, |t| sigma_z_series(t, &cfg, &s)).unwrap();
        for (i, &(t, v)) in a.records().iter().enumerate() {
            assert_eq!(t, times[i]);
            assert_eq!(v, sigma_z_series(t, &cfg, &s).unwrap());
        }
        let b = TimeSeries::evaluate(&times, Provenance::Series, cfg, |t| sigma_z_series(t, &cfg, &s)).unwrap();
        assert_eq!(a.max_abs_difference(&b).unwrap(), 0.0);
        let err = TimeSeries::evaluate(&times, Provenance::Series, cfg, |t| sigma_z_series(t - 5.0, &cfg, &s));
        assert!(err.is_err());
    }
}
