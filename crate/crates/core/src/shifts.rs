//! First-order shifts of hyperfine levels near the TI surface.
//!
//! Two perturbations survive at leading order: the optical quadrupole-like term
//! δU₂ (even in m_f) and the Zeeman-like δV_θ = (Z/4)·eg·ξ²·E_g·V_z with
//! V = L − 2((Z−1)/Z)S, linear in m_f. Both are signed energies in eV.

use serde::Serialize;

use crate::angular::{cos2_hfs, g_fs, g_hfs, HalfInt, QuantumState};
use crate::constants::ConstantSet;
use crate::error::{domain, Error, Result};
use crate::material::MaterialConfig;
use crate::radial::r2_expect;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IonSpecies {
    pub label: String,
    pub z: u32,
    pub i: HalfInt,
    pub mu_over_mun: Option<f64>,
    /// μ/(μ_N·i).
    pub g_mu: f64,
    pub g_n: Option<f64>,
    /// m_N/m_e.
    pub mass_ratio: Option<f64>,
}

impl IonSpecies {
    /// Either `mu_over_mun` or `g_mu` must be given; when both are, they must agree.
    pub fn new(
        label: &str,
        z: u32,
        i: HalfInt,
        mu_over_mun: Option<f64>,
        g_mu: Option<f64>,
        g_n: Option<f64>,
        mass_ratio: Option<f64>,
    ) -> Result<Self> {
        if z < 1 {
            return Err(Error::Config(format!("ion {label}: Z must be at least 1")));
        }
        if i.twice() < 0 {
            return Err(Error::Config(format!("ion {label}: negative nuclear spin")));
        }
        let iv = i.value();
        let g_mu = match (mu_over_mun, g_mu) {
            (Some(mu), Some(g)) => {
                if (g * iv - mu).abs() > 1e-9 * mu.abs().max(1.0) {
                    return Err(Error::Config(format!(
                        "ion {label}: g_mu*i = {} disagrees with mu/mu_N = {mu}",
                        g * iv
                    )));
                }
                g
            }
            (Some(mu), None) if iv > 0.0 => mu / iv,
            (None, Some(g)) => g,
            _ => {
                return Err(Error::Config(format!(
                    "ion {label}: needs mu_over_mun (with i > 0) or g_mu"
                )))
            }
        };
        Ok(IonSpecies {
            label: label.to_string(),
            z,
            i,
            mu_over_mun,
            g_mu,
            g_n,
            mass_ratio,
        })
    }

    /// Bare nucleus with Z and spin-1/2, g_μ given directly.
    pub fn simple(label: &str, z: u32, g_mu: f64) -> Self {
        IonSpecies {
            label: label.to_string(),
            z,
            i: HalfInt::HALF,
            mu_over_mun: None,
            g_mu,
            g_n: None,
            mass_ratio: None,
        }
    }

    /// μ/μ_N, recomputed from g_μ when not given.
    pub fn mu(&self) -> f64 {
        self.mu_over_mun.unwrap_or(self.g_mu * self.i.value())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftBreakdown {
    pub state: QuantumState,
    pub e_hfs: f64,
    pub du2: f64,
    pub dv_theta: f64,
    pub b: f64,
    pub material: MaterialConfig,
    /// Smallest distance to a level of the same (n, ℓ, j) with different f.
    pub level_gap: Option<f64>,
    /// max(|dU2|, |dVθ|) ≤ 1e-3 × level_gap.
    pub perturbative: bool,
}

impl ShiftBreakdown {
    pub fn total(&self) -> f64 {
        self.e_hfs + self.du2 + self.dv_theta
    }
}

fn check_state(state: &QuantumState, ion: &IonSpecies) -> Result<()> {
    state.validate()?;
    if state.i != ion.i {
        return domain(format!(
            "state nuclear spin {} does not match ion {} (i = {})",
            state.i, ion.label, ion.i
        ));
    }
    Ok(())
}

/// −(κξ³/8)(ε₁/Z)² E_g ⟨r̃²⟩ Σ with Σ = Z − (3Z−4)⟨cos²ϑ⟩.
pub fn du2_formula(kappa: f64, eps1: f64, z: u32, xi: f64, r2: f64, cos2: f64, e_g_signed: f64) -> f64 {
    let zf = f64::from(z);
    let sigma = zf - (3.0 * zf - 4.0) * cos2;
    -kappa * xi.powi(3) / 8.0 * (eps1 / zf).powi(2) * e_g_signed * r2 * sigma
}

/// (Z/4)·eg·ξ²·E_g·g_fs·g_hfs·m_f.
pub fn dv_formula(z: u32, eg: f64, xi: f64, gfs: f64, ghfs: f64, m_f: f64, e_g_signed: f64) -> f64 {
    f64::from(z) / 4.0 * eg * xi * xi * e_g_signed * gfs * ghfs * m_f
}

pub fn delta_u2(state: &QuantumState, ion: &IonSpecies, cfg: &MaterialConfig, b: f64, c: &ConstantSet) -> Result<f64> {
    check_state(state, ion)?;
    let xi = c.xi(b)?;
    let r2 = r2_expect(state.n, state.l_int())?;
    let cos2 = cos2_hfs(state.j, state.i, state.f, state.m_f)?;
    Ok(du2_formula(cfg.kappa(c), cfg.eps1, ion.z, xi, r2, cos2, c.e_g_signed()))
}

pub fn delta_v_theta(
    state: &QuantumState,
    ion: &IonSpecies,
    cfg: &MaterialConfig,
    b: f64,
    c: &ConstantSet,
) -> Result<f64> {
    check_state(state, ion)?;
    let xi = c.xi(b)?;
    let ghfs = match g_hfs(state.j, state.i, state.f)? {
        Some(g) => g,
        // f = 0 forces m_f = 0, which validate() already enforced.
        None => return Ok(0.0),
    };
    let gfs = g_fs(ion.z, state.l, state.s, state.j)?;
    Ok(dv_formula(
        ion.z,
        cfg.monopole_strength(c),
        xi,
        gfs,
        ghfs,
        state.m_f.value(),
        c.e_g_signed(),
    ))
}

/// Nonrelativistic hyperfine level energy in a medium of permittivity `eps`.
pub fn hyperfine_energy(state: &QuantumState, ion: &IonSpecies, eps: f64, c: &ConstantSet) -> Result<f64> {
    check_state(state, ion)?;
    if !(eps >= 1.0) {
        return domain(format!("permittivity {eps} must be >= 1"));
    }
    let z = f64::from(ion.z);
    let n = f64::from(state.n);
    let (j, i, f) = (state.j, state.i, state.f);
    let ang = (f.casimir() - i.casimir() - j.casimir()) / (2.0 * j.casimir() * (2.0 * state.l.value() + 1.0));
    Ok(2.0 * c.hyperfine_scale() * z.powi(3) / (eps.powi(3) * n.powi(3)) * ion.g_mu * ang)
}

fn f_values(j: HalfInt, i: HalfInt) -> impl Iterator<Item = HalfInt> {
    let lo = (j - i).abs().twice();
    let hi = (j + i).twice();
    (lo..=hi).step_by(2).map(HalfInt::from_twice)
}

fn level_gap(state: &QuantumState, ion: &IonSpecies, eps: f64, c: &ConstantSet) -> Result<Option<f64>> {
    let own = hyperfine_energy(state, ion, eps, c)?;
    let mut gap: Option<f64> = None;
    for f in f_values(state.j, state.i) {
        if f == state.f {
            continue;
        }
        let m_f = if f.is_integer() { HalfInt::ZERO } else { HalfInt::HALF };
        let other = QuantumState { f, m_f, ..*state };
        let e = hyperfine_energy(&other, ion, eps, c)?;
        let d = (e - own).abs();
        gap = Some(gap.map_or(d, |g: f64| g.min(d)));
    }
    Ok(gap)
}

pub fn breakdown(
    state: &QuantumState,
    ion: &IonSpecies,
    cfg: &MaterialConfig,
    b: f64,
    c: &ConstantSet,
) -> Result<ShiftBreakdown> {
    let e_hfs = hyperfine_energy(state, ion, cfg.eps1, c)?;
    let du2 = delta_u2(state, ion, cfg, b, c)?;
    let dv_theta = delta_v_theta(state, ion, cfg, b, c)?;
    let gap = level_gap(state, ion, cfg.eps1, c)?;
    let perturbative = gap.is_none_or(|g| du2.abs().max(dv_theta.abs()) <= 1e-3 * g);
    Ok(ShiftBreakdown {
        state: *state,
        e_hfs,
        du2,
        dv_theta,
        b,
        material: *cfg,
        level_gap: gap,
        perturbative,
    })
}

/// Every (f, m_f) level of the (n, ℓ, j) manifold, ordered by f then m_f.
pub fn spectrum(
    n: u32,
    l: u32,
    j: HalfInt,
    ion: &IonSpecies,
    cfg: &MaterialConfig,
    b: f64,
    c: &ConstantSet,
) -> Result<Vec<ShiftBreakdown>> {
    let mut out = Vec::new();
    for f in f_values(j, ion.i) {
        for m_f in f.projections() {
            let st = QuantumState::new(n, l, j, ion.i, f, m_f)?;
            out.push(breakdown(&st, ion, cfg, b, c)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelShift {
    pub f: HalfInt,
    pub m_f: HalfInt,
    pub e_hfs: f64,
    pub du2: f64,
    pub dv_theta: f64,
    pub total: f64,
}

/// Parameters of the nP_j level diagram, all in eV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineSplitting {
    pub n: u32,
    pub j: HalfInt,
    /// E(f = j+½) − E(f = j−½).
    pub delta_hfs: f64,
    /// Largest optical shift magnitude.
    pub delta: f64,
    /// Optical spread inside f = j−½ between |m_f| = 0 and 1.
    pub gamma1: f64,
    /// Same inside f = j+½.
    pub gamma2: f64,
    /// Zeeman step per unit m_f, maximised over f.
    pub epsilon: f64,
    pub levels: Vec<LevelShift>,
}

fn optical_step(levels: &[LevelShift], f: HalfInt) -> f64 {
    let at = |m: HalfInt| levels.iter().find(|l| l.f == f && l.m_f == m).map(|l| l.du2.abs());
    match (at(HalfInt::ZERO), at(HalfInt::ONE)) {
        (Some(a), Some(b)) => a - b,
        _ => 0.0,
    }
}

pub fn line_splitting(
    n: u32,
    j: HalfInt,
    ion: &IonSpecies,
    cfg: &MaterialConfig,
    b: f64,
    c: &ConstantSet,
) -> Result<LineSplitting> {
    if ion.i != HalfInt::HALF {
        return domain(format!(
            "line diagrams need a spin-1/2 nucleus, {} has i = {}",
            ion.label, ion.i
        ));
    }
    if j != HalfInt::from_twice(1) && j != HalfInt::from_twice(3) {
        return domain(format!("line diagrams cover nP1/2 and nP3/2 only (j = {j})"));
    }
    if n < 2 {
        return domain("P states need n >= 2");
    }
    let rows = spectrum(n, 1, j, ion, cfg, b, c)?;
    let levels: Vec<LevelShift> = rows
        .iter()
        .map(|r| LevelShift {
            f: r.state.f,
            m_f: r.state.m_f,
            e_hfs: r.e_hfs,
            du2: r.du2,
            dv_theta: r.dv_theta,
            total: r.total(),
        })
        .collect();
    let upper = j + HalfInt::HALF;
    let lower = j - HalfInt::HALF;
    let e_of = |f: HalfInt| levels.iter().find(|l| l.f == f).map(|l| l.e_hfs).unwrap_or(0.0);
    let delta = levels.iter().map(|l| l.du2.abs()).fold(0.0, f64::max);
    let xi = c.xi(b)?;
    let gfs = g_fs(ion.z, HalfInt::ONE, HalfInt::HALF, j)?;
    let mut epsilon: f64 = 0.0;
    for f in [lower, upper] {
        if let Some(gh) = g_hfs(j, ion.i, f)? {
            let step = dv_formula(ion.z, cfg.monopole_strength(c), xi, gfs, gh, 1.0, c.e_g_signed());
            epsilon = epsilon.max(step.abs());
        }
    }
    Ok(LineSplitting {
        n,
        j,
        delta_hfs: e_of(upper) - e_of(lower),
        delta,
        gamma1: optical_step(&levels, lower),
        gamma2: optical_step(&levels, upper),
        epsilon,
        levels,
    })
}

/// κε₁²ξ³/48 · |E_g| n²(n²−1)(22 − 2m_f² ±′ m_f²); `upper` is f = 2.
pub fn np32_optical(n: u32, upper: bool, m_f: f64, kappa: f64, eps1: f64, xi: f64, c: &ConstantSet) -> f64 {
    let nf = f64::from(n);
    let s = if upper { 1.0 } else { -1.0 };
    kappa * eps1 * eps1 * xi.powi(3) / 48.0
        * c.e_g
        * nf
        * nf
        * (nf * nf - 1.0)
        * (22.0 - 2.0 * m_f * m_f + s * m_f * m_f)
}

/// (eg ξ²/24) E_g (4 ∓′ 1) m_f.
pub fn np32_topological(upper: bool, m_f: f64, eg: f64, xi: f64, c: &ConstantSet) -> f64 {
    let k = if upper { 3.0 } else { 5.0 };
    eg * xi * xi / 24.0 * c.e_g_signed() * k * m_f
}

/// (5/12) κ ε₁² ξ³ |E_g| n²(n²−1), the same for both f.
pub fn np12_optical(n: u32, kappa: f64, eps1: f64, xi: f64, c: &ConstantSet) -> f64 {
    let nf = f64::from(n);
    5.0 / 12.0 * kappa * eps1 * eps1 * xi.powi(3) * c.e_g * nf * nf * (nf * nf - 1.0)
}

/// (1/6) eg ξ² E_g m_f.
pub fn np12_topological(m_f: f64, eg: f64, xi: f64, c: &ConstantSet) -> f64 {
    eg * xi * xi / 6.0 * c.e_g_signed() * m_f
}

/// Λ = (4/3)|E_g|α²(m_e/m_p), the 1S₁/₂ scale.
pub fn lambda_1s(c: &ConstantSet) -> f64 {
    4.0 / 3.0 * c.hyperfine_scale()
}

/// Γ₃/₂ = (4/45)|E_g|α²(m_e/m_p) g_μ.
pub fn gamma_32(g_mu: f64, c: &ConstantSet) -> f64 {
    4.0 / 45.0 * c.hyperfine_scale() * g_mu
}

/// Γ₁/₂ = (4/9)|E_g|α²(m_e/m_p) g_μ.
pub fn gamma_12(g_mu: f64, c: &ConstantSet) -> f64 {
    4.0 / 9.0 * c.hyperfine_scale() * g_mu
}

/// Dimensionless order-of-magnitude estimators, each divided by E_g.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MagnitudeEstimates {
    /// Uses |⟨cos ϑ⟩| = 1 as an upper bound; the true first-order value vanishes by parity.
    pub du1: f64,
    pub du2: f64,
    pub dv_theta1: f64,
    pub a_squared: f64,
    pub dw_theta1: f64,
    /// ⟨δQ₁⟩/⟨δW_θ1⟩ = Z g_N m_e/(2 m_N); `None` without nuclear data.
    pub ratio_wq: Option<f64>,
    /// |A² term| / |δU₂|.
    pub a_squared_over_optical: f64,
}

pub fn magnitude_estimates(
    state: &QuantumState,
    ion: &IonSpecies,
    cfg: &MaterialConfig,
    b: f64,
    c: &ConstantSet,
) -> Result<MagnitudeEstimates> {
    check_state(state, ion)?;
    let xi = c.xi(b)?;
    let z = f64::from(ion.z);
    let kappa = cfg.kappa(c);
    let d = cfg.denominator(c);
    let tp = cfg.theta_over_pi;
    let a2x2 = c.alpha * c.alpha * xi * xi;
    let (j, l, s) = (state.j, state.l, state.s);
    let proj = match g_hfs(j, state.i, state.f)? {
        Some(g) => g * state.m_f.value(),
        None => 0.0,
    };
    let jj = 2.0 * j.casimir();
    let lz = (j.casimir() + l.casimir() - s.casimir()) / jj * proj;
    let sz = (j.casimir() - l.casimir() + s.casimir()) / jj * proj;
    let cos2 = cos2_hfs(j, state.i, state.f, state.m_f)?;
    let du1 = -kappa * cfg.eps1 / 2.0 * (z - 1.0) / z * xi * xi;
    let du2 = -kappa / 8.0 * (cfg.eps1 / z).powi(2) * xi.powi(3) * (z - (3.0 * z - 4.0) * cos2);
    let dv_theta1 = z / 2.0 * a2x2 * tp * lz / d;
    let a_squared = -(a2x2 * tp * (cfg.eps1 / 4.0) / d).powi(2);
    let dw_theta1 = a2x2 * (1.0 - z) * tp * sz / d;
    let ratio_wq = match (ion.g_n, ion.mass_ratio) {
        (Some(gn), Some(m)) => Some(z * gn / (2.0 * m)),
        _ => None,
    };
    let a_squared_over_optical = if du2 == 0.0 {
        f64::INFINITY
    } else {
        (a_squared / du2).abs()
    };
    Ok(MagnitudeEstimates {
        du1,
        du2,
        dv_theta1,
        a_squared,
        dw_theta1,
        ratio_wq,
        a_squared_over_optical,
    })
}
