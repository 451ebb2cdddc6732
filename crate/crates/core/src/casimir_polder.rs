//! Nonretarded Casimir-Polder potential of hydrogen above a planar
//! topological insulator, V(y) = −|E_g|[P/y³ + (θ/π)m_f Q/y²], y = b/a₀.

use serde::Serialize;

use crate::angular::{cos2_hfs, g_fs, g_hfs, HalfInt, QuantumState};
use crate::constants::ConstantSet;
use crate::error::{domain, Error, Result};
use crate::material::MaterialConfig;
use crate::numeric::bisect;
use crate::radial::r2_expect;
use crate::shifts::IonSpecies;

/// Characteristic transition wavelengths bounding the nonretarded regime, μm.
pub const LAMBDA_C_OPTICAL_UM: f64 = 7.8;
pub const LAMBDA_C_HYPERFINE_UM: f64 = 7.9e7;

/// Prefactors of the stretched-2P₃/₂ closed forms as printed and as assembled.
pub const YMAX_PREFACTOR_PRINTED: f64 = 15.0;
pub const YMAX_PREFACTOR_ASSEMBLED: f64 = 13.5;
pub const VMAX_DIVISOR_PRINTED: f64 = 1332.0;
pub const VMAX_DIVISOR_ASSEMBLED: f64 = 1093.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CpParams {
    pub p: f64,
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    AttractiveEverywhere,
    RepulsiveTail,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extrema {
    /// Zero of the potential, Bohr radii.
    pub y0: f64,
    pub y_max: f64,
    /// eV.
    pub v_max: f64,
    /// Maximizer located numerically from the potential alone.
    pub y_max_numeric: f64,
}

/// Validity context for the nonretarded form; informational only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonretardedNote {
    pub lambda_c_optical_um: f64,
    pub lambda_c_hyperfine_um: f64,
    /// b_max below the optical λ_C, when an extremum exists.
    pub below_optical: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CpProfile {
    pub state: QuantumState,
    pub material: MaterialConfig,
    pub p: f64,
    pub q: f64,
    pub regime: Regime,
    pub extrema: Option<Extrema>,
    pub note: NonretardedNote,
}

/// P and Q for hydrogen (Z = 1, μ₁ = μ₂ = 1).
pub fn cp_params(state: &QuantumState, ion: &IonSpecies, cfg: &MaterialConfig, c: &ConstantSet) -> Result<CpParams> {
    if ion.z != 1 {
        return Err(Error::Unsupported(format!(
            "Casimir-Polder coefficients are derived for Z = 1 (got Z = {})",
            ion.z
        )));
    }
    if cfg.mu1 != 1.0 || cfg.mu2 != 1.0 {
        return Err(Error::Unsupported(
            "Casimir-Polder coefficients assume mu1 = mu2 = 1".into(),
        ));
    }
    state.validate()?;
    let tt2 = cfg.theta_tilde(c).powi(2);
    let den = 2.0 * (cfg.eps2 + cfg.eps1) + tt2;
    let r2 = r2_expect(state.n, state.l_int())?;
    let sigma = 1.0 + cos2_hfs(state.j, state.i, state.f, state.m_f)?;
    let p = cfg.eps1 / 8.0 * (2.0 * (cfg.eps2 - cfg.eps1) + tt2) / den * r2 * sigma;
    let gf = g_fs(1, state.l, state.s, state.j)?;
    let gh = g_hfs(state.j, state.i, state.f)?.unwrap_or(0.0);
    let q = c.alpha * c.alpha / 2.0 * gf * gh / den;
    Ok(CpParams { p, q })
}

fn potential(y: f64, p: f64, q: f64, tm: f64, e_g: f64) -> f64 {
    -e_g * (p / y.powi(3) + tm * q / (y * y))
}

fn theta_m(profile: &CpProfile) -> f64 {
    profile.material.theta_over_pi * profile.state.m_f.value()
}

/// V(y) in eV for y in Bohr radii.
pub fn cp_potential(y: f64, profile: &CpProfile, c: &ConstantSet) -> Result<f64> {
    if !(y > 0.0) {
        return domain(format!("distance must be positive (got y = {y})"));
    }
    Ok(potential(y, profile.p, profile.q, theta_m(profile), c.e_g))
}

pub fn cp_profile(state: &QuantumState, ion: &IonSpecies, cfg: &MaterialConfig, c: &ConstantSet) -> Result<CpProfile> {
    let CpParams { p, q } = cp_params(state, ion, cfg, c)?;
    let tm = cfg.theta_over_pi * state.m_f.value();
    let regime = if tm < 0.0 && p > 0.0 && q > 0.0 {
        Regime::RepulsiveTail
    } else {
        Regime::AttractiveEverywhere
    };
    let mut profile = CpProfile {
        state: *state,
        material: *cfg,
        p,
        q,
        regime,
        extrema: None,
        note: NonretardedNote {
            lambda_c_optical_um: LAMBDA_C_OPTICAL_UM,
            lambda_c_hyperfine_um: LAMBDA_C_HYPERFINE_UM,
            below_optical: None,
        },
    };
    if regime == Regime::RepulsiveTail {
        let e = cp_extrema(&profile, c)?;
        profile.note.below_optical = Some(e.y_max * c.a0 < LAMBDA_C_OPTICAL_UM);
        profile.extrema = Some(e);
    }
    Ok(profile)
}

/// Zero, maximum and peak value; `Unsupported` in the attractive regime.
pub fn cp_extrema(profile: &CpProfile, c: &ConstantSet) -> Result<Extrema> {
    if profile.regime != Regime::RepulsiveTail {
        return Err(Error::Unsupported(
            "attractive everywhere: no zero and no extremum".into(),
        ));
    }
    let tm = theta_m(profile);
    let (p, q) = (profile.p, profile.q);
    let y0 = p / (tm.abs() * q);
    let y_max = 1.5 * y0;
    let v_max = c.e_g * p / (2.0 * y_max.powi(3));
    let v = |y: f64| potential(y, p, q, tm, c.e_g);
    // Five-point slope, scaled to O(1) so bisection sees a clean sign change.
    let slope = |y: f64| {
        let h = 1e-3 * y;
        let d = 8.0 * (v(y + h) - v(y - h)) - (v(y + 2.0 * h) - v(y - 2.0 * h));
        d / (12.0 * h) * y / v_max
    };
    let y_max_numeric = bisect(slope, 1.01 * y0, 10.0 * y0, 1e-14)?;
    if ((y_max_numeric - y_max) / y_max).abs() > 1e-8 {
        return Err(Error::Numeric {
            message: "numeric maximizer disagrees with 3y0/2".into(),
            achieved: (y_max_numeric - y_max) / y_max,
        });
    }
    Ok(Extrema {
        y0,
        y_max,
        v_max,
        y_max_numeric,
    })
}

/// Stretched 2P₃/₂ state, f = 2, with m_f opposite in sign to θ.
pub fn stretched_2p32(theta_over_pi: f64) -> Result<QuantumState> {
    let m = if theta_over_pi >= 0.0 { -2 } else { 2 };
    QuantumState::new(
        2,
        1,
        HalfInt::from_twice(3),
        HalfInt::HALF,
        HalfInt::from_twice(4),
        HalfInt::from_twice(2 * m),
    )
}

fn ymax_closed(prefactor: f64, cfg: &MaterialConfig, c: &ConstantSet) -> f64 {
    let tt = cfg.theta_tilde(c).abs();
    prefactor * cfg.eps1 / c.alpha * (2.0 * (cfg.eps2 - cfg.eps1) + tt * tt) / tt
}

fn vmax_closed(divisor: f64, cfg: &MaterialConfig, c: &ConstantSet) -> f64 {
    let tt = cfg.theta_tilde(c).abs();
    let plus = 2.0 * (cfg.eps2 + cfg.eps1) + tt * tt;
    let minus = 2.0 * (cfg.eps2 - cfg.eps1) + tt * tt;
    c.e_g / divisor * c.alpha.powi(3) / (cfg.eps1 * cfg.eps1) * tt.powi(3) / (plus * minus * minus)
}

/// Printed stretched-2P₃/₂ y_max (prefactor 15).
pub fn ymax_printed(cfg: &MaterialConfig, c: &ConstantSet) -> f64 {
    ymax_closed(YMAX_PREFACTOR_PRINTED, cfg, c)
}

/// Printed stretched-2P₃/₂ V_max in eV (divisor 1332).
pub fn vmax_printed(cfg: &MaterialConfig, c: &ConstantSet) -> f64 {
    vmax_closed(VMAX_DIVISOR_PRINTED, cfg, c)
}

/// Closed forms re-assembled from P and Q (prefactor 13.5, divisor 1093.5).
pub fn ymax_assembled(cfg: &MaterialConfig, c: &ConstantSet) -> f64 {
    ymax_closed(YMAX_PREFACTOR_ASSEMBLED, cfg, c)
}

pub fn vmax_assembled(cfg: &MaterialConfig, c: &ConstantSet) -> f64 {
    vmax_closed(VMAX_DIVISOR_ASSEMBLED, cfg, c)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CpScanRow {
    pub eps2: f64,
    pub theta_over_pi: f64,
    pub y0_a0: Option<f64>,
    pub b_max_um: Option<f64>,
    pub v_max_hz: Option<f64>,
}

/// Extrema over the (ε₂, θ/π) grid, ε₂ outer. m_f is taken from `state` as
/// given; rows in the attractive regime carry no extremum.
pub fn cp_scan(
    state: &QuantumState,
    ion: &IonSpecies,
    eps1: f64,
    eps2_list: &[f64],
    theta_list: &[f64],
    c: &ConstantSet,
) -> Result<Vec<CpScanRow>> {
    if eps2_list.is_empty() || theta_list.is_empty() {
        return domain("cp scan needs non-empty eps2 and theta lists");
    }
    let mut rows = Vec::with_capacity(eps2_list.len() * theta_list.len());
    for &eps2 in eps2_list {
        for &t in theta_list {
            let cfg = MaterialConfig::new(eps1, 1.0, eps2, 1.0, t)?;
            let prof = cp_profile(state, ion, &cfg, c)?;
            let e = prof.extrema;
            rows.push(CpScanRow {
                eps2,
                theta_over_pi: t,
                y0_a0: e.map(|e| e.y0),
                b_max_um: e.map(|e| e.y_max * c.a0),
                v_max_hz: e.map(|e| c.ev_to_hz(e.v_max)),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h() -> IonSpecies {
        IonSpecies::simple("H", 1, 5.585_694_7)
    }

    #[test]
    fn paper_numbers() {
        let c = ConstantSet::paper();
        let st = stretched_2p32(15.0).unwrap();
        let cfg = MaterialConfig::vacuum_ti(4.0, 15.0).unwrap();
        let prof = cp_profile(&st, &h(), &cfg, &c).unwrap();
        let e = prof.extrema.unwrap();
        assert!((e.y_max * c.a0 / 5.4 - 1.0).abs() < 0.1);
        assert!((c.ev_to_hz(e.v_max) / 4.2 - 1.0).abs() < 0.1);
        assert!((e.y_max / ymax_assembled(&cfg, &c) - 1.0).abs() < 1e-12);
        assert!((e.v_max / vmax_assembled(&cfg, &c) - 1.0).abs() < 1e-12);
        assert!(cp_potential(e.y0, &prof, &c).unwrap().abs() < 1e-10 * e.v_max);
    }

    #[test]
    fn s_state_has_no_q() {
        let c = ConstantSet::paper();
        let st = QuantumState::new(2, 0, HalfInt::HALF, HalfInt::HALF, HalfInt::ONE, HalfInt::ONE).unwrap();
        let cfg = MaterialConfig::vacuum_ti(4.0, 15.0).unwrap();
        assert_eq!(cp_params(&st, &h(), &cfg, &c).unwrap().q, 0.0);
    }

    #[test]
    fn rejects_heavier_ions() {
        let c = ConstantSet::paper();
        let st = stretched_2p32(1.0).unwrap();
        let he = IonSpecies::simple("He", 2, -4.255);
        let cfg = MaterialConfig::vacuum_ti(4.0, 1.0).unwrap();
        assert!(matches!(cp_params(&st, &he, &cfg, &c), Err(Error::Unsupported(_))));
    }

    #[test]
    fn attractive_has_no_extremum() {
        let c = ConstantSet::paper();
        let st = stretched_2p32(-1.0).unwrap(); // m_f = +2
        let cfg = MaterialConfig::vacuum_ti(4.0, 1.0).unwrap();
        let prof = cp_profile(&st, &h(), &cfg, &c).unwrap();
        assert_eq!(prof.regime, Regime::AttractiveEverywhere);
        assert!(cp_extrema(&prof, &c).is_err());
    }
}
