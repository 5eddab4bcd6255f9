use crate::error::{Error, Result};
use crate::operator::Operator;

/// Integration grid: final time, maximal step and output times (µs).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    t_final: f64,
    dt: f64,
    sample_times: Vec<f64>,
}

impl TimeGrid {
    /// Default number of steps over the full interval.
    pub const DEFAULT_STEPS: usize = 2000;

    /// Stability factor: `dt · ‖H‖ ≤ 1/50`.
    pub const STABILITY_FACTOR: f64 = 50.0;

    /// An empty `sample_times` means "final time only".
    pub fn new(t_final: f64, dt: f64, sample_times: Vec<f64>) -> Result<Self> {
        if !(t_final >= 0.0) || !t_final.is_finite() {
            return Err(Error::InvalidParameter(format!("t_final must be >= 0, got {t_final}")));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!("dt must be > 0, got {dt}")));
        }
        let sample_times = if sample_times.is_empty() {
            vec![t_final]
        } else {
            sample_times
        };
        let mut prev = 0.0;
        for &t in &sample_times {
            if !(t >= prev) || t > t_final {
                return Err(Error::InvalidParameter(format!(
                    "sample times must be sorted within [0, {t_final}], found {t}"
                )));
            }
            prev = t;
        }
        Ok(Self {
            t_final,
            dt,
            sample_times,
        })
    }

    /// `n_samples` equally spaced output times from 0 to `t_final`; a
    /// single sample means the final time only.
    pub fn uniform(t_final: f64, dt: f64, n_samples: usize) -> Result<Self> {
        Self::new(t_final, dt, linspace(t_final, n_samples))
    }

    /// Default step `min(t_final/2000, 1/(50‖H‖))` for Hamiltonian `h`.
    pub fn for_hamiltonian(h: &Operator, t_final: f64, n_samples: usize) -> Result<Self> {
        let mut dt = (t_final / Self::DEFAULT_STEPS as f64).min(Self::max_stable_dt(h));
        if dt == 0.0 {
            dt = Self::max_stable_dt(h).min(1.0);
        }
        Self::uniform(t_final, dt, n_samples)
    }

    /// `1/(50‖H‖_∞)`, the largest step accepted for `h`.
    pub fn max_stable_dt(h: &Operator) -> f64 {
        let scale = h.inf_norm();
        if scale == 0.0 {
            f64::INFINITY
        } else {
            1.0 / (Self::STABILITY_FACTOR * scale)
        }
    }

    pub fn validate_for(&self, h: &Operator) -> Result<()> {
        let limit = Self::max_stable_dt(h);
        if self.dt > limit * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "dt = {:e} exceeds the stability limit {limit:e} for this Hamiltonian",
                self.dt
            )));
        }
        Ok(())
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn sample_times(&self) -> &[f64] {
        &self.sample_times
    }

    /// Same grid with half the step.
    pub fn halved(&self) -> Self {
        Self {
            dt: self.dt / 2.0,
            ..self.clone()
        }
    }

    /// Number of equal steps of length at most `dt` covering `span`.
    pub(crate) fn steps_for(&self, span: f64) -> u32 {
        if span <= 0.0 {
            return 0;
        }
        ((span / self.dt) * (1.0 - 1e-12)).ceil().max(1.0) as u32
    }
}

/// `n` equally spaced points on `[0, t]`; `n == 1` gives `[t]`.
pub fn linspace(t: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![t],
        _ => (0..n).map(|k| t * (k as f64 / (n - 1) as f64)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{pauli, Axis};
    use crate::register::QubitRegister;

    #[test]
    fn default_step_respects_stability_limit() {
        let reg = QubitRegister::new(["a"]).unwrap();
        let h = 100.0 * pauli(&reg, "a", Axis::Z).unwrap();
        let g = TimeGrid::for_hamiltonian(&h, 1.0, 11).unwrap();
        assert!((g.dt() - 1.0 / 5000.0).abs() < 1e-15);
        assert_eq!(g.sample_times().len(), 11);
        assert!(g.validate_for(&h).is_ok());
        let coarse = TimeGrid::uniform(1.0, 0.01, 1).unwrap();
        assert!(coarse.validate_for(&h).is_err());
        assert_eq!(coarse.steps_for(0.5), 50);
    }

    #[test]
    fn rejects_unsorted_samples() {
        assert!(TimeGrid::new(1.0, 0.1, vec![0.5, 0.2]).is_err());
        assert!(TimeGrid::new(1.0, 0.1, vec![1.5]).is_err());
        assert!(TimeGrid::new(1.0, 0.0, vec![]).is_err());
        assert_eq!(TimeGrid::new(1.0, 0.1, vec![]).unwrap().sample_times(), &[1.0]);
    }

    #[test]
    fn linspace_ends_exactly_at_t() {
        for n in 2..50 {
            for t in [0.025, 0.1048, 1.0 / 3.0, 7.77] {
                let v = linspace(t, n);
                assert_eq!(*v.last().unwrap(), t);
                assert!(v.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }
}
