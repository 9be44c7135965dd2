//! Physical parameters of the modulated Rabi model.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Model parameters, all in units of a reference frequency (presets use
/// omega_0 = 1): TLS transition frequency omega_0, mode frequency omega_c,
/// coupling g, dimensionless modulation amplitude xi and modulation
/// frequency nu. The instantaneous frequencies under modulation are
/// omega_a(t) = omega_0 + xi·nu·cos(nu t) and
/// omega_c(t) = omega_c + xi·nu·cos(nu t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega_0: f64,
    pub omega_c: f64,
    pub g: f64,
    pub xi: f64,
    pub nu: f64,
}

impl ModelParams {
    pub fn new(omega_0: f64, omega_c: f64, g: f64, xi: f64, nu: f64) -> Result<Self> {
        let p = Self {
            omega_0,
            omega_c,
            g,
            xi,
            nu,
        };
        p.validate()?;
        Ok(p)
    }

    /// Resonant (omega_0 = omega_c = 1) shorthand.
    pub fn resonant(g: f64, xi: f64, nu: f64) -> Result<Self> {
        Self::new(1.0, 1.0, g, xi, nu)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParams(what.to_owned()));
        if !(self.omega_0 > 0.0) {
            return bad("omega_0 must be > 0");
        }
        if !(self.omega_c > 0.0) {
            return bad("omega_c must be > 0");
        }
        if !(self.g >= 0.0) {
            return bad("g must be >= 0");
        }
        if !(self.xi >= 0.0) {
            return bad("xi must be >= 0");
        }
        if !(self.nu >= 0.0) {
            return bad("nu must be >= 0");
        }
        Ok(())
    }

    /// Detuning delta = omega_0 − omega_c, recomputed on demand.
    pub fn delta(&self) -> f64 {
        self.omega_0 - self.omega_c
    }

    /// omega_0 + omega_c, the bare counter-rotating frequency.
    pub fn omega_sum(&self) -> f64 {
        self.omega_0 + self.omega_c
    }
}
