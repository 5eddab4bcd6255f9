use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How `T2` splits into relaxation and pure dephasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DephasingConvention {
    /// `T2` is the total coherence time: `γ_φ = 1/T2 − 1/(2T1)`.
    #[default]
    TotalCoherence,
    /// `T2` is a pure-dephasing time: `γ_φ = 1/T2`.
    PureDephasing,
}

/// Relaxation and coherence times of one qubit, in µs. Infinite values
/// switch the corresponding channel off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitNoise {
    pub t1: f64,
    pub t2: f64,
}

impl QubitNoise {
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        for (name, v) in [("t1", t1), ("t2", t2)] {
            if !(v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { t1, t2 })
    }

    pub fn noiseless() -> Self {
        Self {
            t1: f64::INFINITY,
            t2: f64::INFINITY,
        }
    }

    /// `(γ_1, γ_φ)` with `γ_1 = 1/T1`.
    pub fn rates(&self, convention: DephasingConvention) -> Result<(f64, f64)> {
        let gamma1 = 1.0 / self.t1;
        let gamma_phi = match convention {
            DephasingConvention::TotalCoherence => 1.0 / self.t2 - gamma1 / 2.0,
            DephasingConvention::PureDephasing => 1.0 / self.t2,
        };
        if gamma_phi < -1e-12 * (1.0 / self.t2) {
            return Err(Error::InvalidParameter(format!(
                "t2 = {} exceeds 2 t1 = {}",
                self.t2,
                2.0 * self.t1
            )));
        }
        Ok((gamma1, gamma_phi.max(0.0)))
    }
}

/// Per-qubit `T1`/`T2`, uniform unless overridden by label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    default: QubitNoise,
    #[serde(default)]
    overrides: BTreeMap<String, QubitNoise>,
    #[serde(default)]
    convention: DephasingConvention,
}

impl NoiseModel {
    pub fn uniform(t1: f64, t2: f64) -> Result<Self> {
        let model = Self {
            default: QubitNoise::new(t1, t2)?,
            overrides: BTreeMap::new(),
            convention: DephasingConvention::default(),
        };
        model.validate()?;
        Ok(model)
    }

    /// Zero relaxation and dephasing on every qubit.
    pub fn noiseless() -> Self {
        Self {
            default: QubitNoise::noiseless(),
            overrides: BTreeMap::new(),
            convention: DephasingConvention::default(),
        }
    }

    pub fn with_override(mut self, label: impl Into<String>, t1: f64, t2: f64) -> Result<Self> {
        self.overrides.insert(label.into(), QubitNoise::new(t1, t2)?);
        self.validate()?;
        Ok(self)
    }

    pub fn with_convention(mut self, convention: DephasingConvention) -> Result<Self> {
        self.convention = convention;
        self.validate()?;
        Ok(self)
    }

    pub fn convention(&self) -> DephasingConvention {
        self.convention
    }

    pub fn default_noise(&self) -> QubitNoise {
        self.default
    }

    pub fn overrides(&self) -> &BTreeMap<String, QubitNoise> {
        &self.overrides
    }

    pub fn for_qubit(&self, label: &str) -> QubitNoise {
        self.overrides.get(label).copied().unwrap_or(self.default)
    }

    /// `(γ_1, γ_φ)` of qubit `label`.
    pub fn rates(&self, label: &str) -> Result<(f64, f64)> {
        self.for_qubit(label).rates(self.convention)
    }

    /// Checks positivity of every rate, including deserialized models.
    pub fn validate(&self) -> Result<()> {
        QubitNoise::new(self.default.t1, self.default.t2)?.rates(self.convention)?;
        for (label, n) in &self.overrides {
            QubitNoise::new(n.t1, n.t2)
                .and_then(|n| n.rates(self.convention))
                .map_err(|e| Error::InvalidParameter(format!("qubit '{label}': {e}")))?;
        }
        Ok(())
    }
}
