//! Physical constants and energy-unit conversion.
//!
//! Energies are carried in eV internally and lengths in μm at the API surface.
//! The `Paper` mode reproduces the rounded inputs behind the published numbers
//! (α = 1/137, |E_g| = 13.6 eV, m_p/m_e = 1840); `Precise` uses reference values.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Hz per eV (e/h), shared by both modes.
pub const EV_TO_HZ: f64 = 2.417_989_242e14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Paper,
    Precise,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Mode::Paper),
            "precise" => Ok(Mode::Precise),
            other => Err(Error::Config(format!(
                "unknown constants mode `{other}` (expected paper|precise)"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Paper => "paper",
            Mode::Precise => "precise",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    EV,
    Hz,
    KHz,
    MHz,
}

impl Unit {
    fn per_hz(self) -> f64 {
        match self {
            Unit::Hz => 1.0,
            Unit::KHz => 1e-3,
            Unit::MHz => 1e-6,
            Unit::EV => unreachable!(),
        }
    }
}

impl FromStr for Unit {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eV" => Ok(Unit::EV),
            "Hz" => Ok(Unit::Hz),
            "kHz" => Ok(Unit::KHz),
            "MHz" => Ok(Unit::MHz),
            other => Err(Error::Config(format!("unknown energy unit `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantSet {
    pub alpha: f64,
    /// Magnitude of the hydrogen ground-state energy, eV.
    pub e_g: f64,
    /// Bohr radius, μm.
    pub a0: f64,
    pub mass_ratio_pe: f64,
    pub mass_ratio_ep: f64,
    pub ev_to_hz: f64,
    pub mode: Mode,
}

impl ConstantSet {
    pub fn paper() -> Self {
        Self::build(1.0 / 137.0, 13.6, 5.29e-5, 1840.0, Mode::Paper)
    }

    pub fn precise() -> Self {
        Self::build(
            7.297_352_569_3e-3,
            13.6057,
            5.291_772_109_03e-5,
            1836.15267,
            Mode::Precise,
        )
    }

    pub fn for_mode(mode: Mode) -> Self {
        match mode {
            Mode::Paper => Self::paper(),
            Mode::Precise => Self::precise(),
        }
    }

    fn build(alpha: f64, e_g: f64, a0: f64, mass_ratio_pe: f64, mode: Mode) -> Self {
        ConstantSet {
            alpha,
            e_g,
            a0,
            mass_ratio_pe,
            mass_ratio_ep: 1.0 / mass_ratio_pe,
            ev_to_hz: EV_TO_HZ,
            mode,
        }
    }

    /// Apply a `key=value` override. Keys: alpha, e_g, a0, mass_ratio, ev_to_hz.
    pub fn with_override(mut self, key: &str, value: f64) -> Result<Self> {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::Config(format!(
                "override {key}={value} must be finite and positive"
            )));
        }
        match key {
            "alpha" => self.alpha = value,
            "e_g" | "E_g" => self.e_g = value,
            "a0" => self.a0 = value,
            "mass_ratio" | "mass_ratio_pe" => {
                self.mass_ratio_pe = value;
                self.mass_ratio_ep = 1.0 / value;
            }
            "ev_to_hz" => self.ev_to_hz = value,
            other => return Err(Error::Config(format!("unknown constant `{other}`"))),
        }
        self.validate()?;
        Ok(self)
    }

    /// Parse and apply `key=value`.
    pub fn with_override_str(self, kv: &str) -> Result<Self> {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{kv}` is not key=value")))?;
        let value: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("override `{kv}` has a non-numeric value")))?;
        self.with_override(k.trim(), value)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.00729 && self.alpha < 0.00730) {
            return Err(Error::Config(format!(
                "alpha {} outside (0.00729, 0.00730)",
                self.alpha
            )));
        }
        if !(13.6..=13.6057).contains(&self.e_g) {
            return Err(Error::Config(format!("E_g {} outside [13.6, 13.6057] eV", self.e_g)));
        }
        if !(5.29e-5..=5.292e-5).contains(&self.a0) {
            return Err(Error::Config(format!("a0 {} outside [5.29e-5, 5.292e-5] um", self.a0)));
        }
        Ok(())
    }

    /// Signed ground-state energy E_g = -|E_g|.
    pub fn e_g_signed(&self) -> f64 {
        -self.e_g
    }

    /// |E_g|α²(m_e/m_p) in eV, the natural hyperfine scale.
    pub fn hyperfine_scale(&self) -> f64 {
        self.alpha * self.alpha * self.e_g * self.mass_ratio_ep
    }

    pub fn convert(&self, value: f64, from: Unit, to: Unit) -> f64 {
        if from == to {
            return value;
        }
        let hz = match from {
            Unit::EV => value * self.ev_to_hz,
            u => value / u.per_hz(),
        };
        match to {
            Unit::EV => hz / self.ev_to_hz,
            u => hz * u.per_hz(),
        }
    }

    pub fn convert_str(&self, value: f64, from: &str, to: &str) -> Result<f64> {
        if !value.is_finite() {
            return domain(format!("cannot convert non-finite value {value}"));
        }
        Ok(self.convert(value, from.parse()?, to.parse()?))
    }

    pub fn ev_to_hz(&self, ev: f64) -> f64 {
        ev * self.ev_to_hz
    }

    pub fn hz_to_ev(&self, hz: f64) -> f64 {
        hz / self.ev_to_hz
    }

    /// ξ = a0/b for a nucleus-surface distance `b_um` in μm.
    pub fn xi(&self, b_um: f64) -> Result<f64> {
        if !(b_um > 0.0) || !b_um.is_finite() {
            return domain(format!("distance b = {b_um} um must be positive"));
        }
        Ok(self.a0 / b_um)
    }
}

impl Default for ConstantSet {
    fn default() -> Self {
        Self::precise()
    }
}
