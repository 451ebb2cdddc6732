//! Circular Rydberg states: retardation limits, hyperfine gaps between
//! neighbouring circular states, detectability ratios and region scans.
//!
//! The closed forms use the circular-state substitutions g_fs = g_hfs = 1,
//! ⟨cos²ϑ⟩ = 1, ⟨r̃²⟩ = n⁴ and the leading-order (κ, e·g) of the two media
//! cases. [`Approximation::Exact`] swaps in the full angular, radial and
//! material expressions.

use serde::Serialize;

use crate::angular::{HalfInt, QuantumState};
use crate::constants::ConstantSet;
use crate::error::{domain, Error, Result};
use crate::material::{MaterialConfig, Response};
use crate::numeric::bisect;
use crate::shifts::{delta_u2, delta_v_theta, du2_formula, dv_formula, hyperfine_energy, IonSpecies};

/// Retardation-line energy scale, Hz, for Z = ε = n = 1.
pub const RET_SHIFT_HZ: f64 = 6.58e15;
/// Retardation length, μm, for Z = ε = n = 1.
pub const RET_LENGTH_UM: f64 = 4.56e-2;
/// Printed circular-gap coefficient, Hz.
pub const CIRC_GAP_HZ: f64 = 4.76e8;
/// n = 5.59·(μ/μ_N·Z²)^{1/7} solves r_θ = 1.
pub const EQUAL_SHIFT_PREFACTOR: f64 = 5.59;
pub const B_MIN_UM: f64 = 0.265;
pub const B_MAX_UM: f64 = 1.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Retardation {
    pub de_hz: f64,
    pub l_r_um: f64,
}

pub fn retardation(z: u32, eps: f64, n: f64) -> Retardation {
    let z2 = f64::from(z).powi(2);
    let e2n3 = eps * eps * n.powi(3);
    Retardation {
        de_hz: z2 / e2n3 * RET_SHIFT_HZ,
        l_r_um: e2n3 / z2 * RET_LENGTH_UM,
    }
}

/// k in n ≥ k·Z^{2/3}, from b ≤ L_r.
pub fn retardation_boundary_prefactor(b: f64, eps: f64) -> f64 {
    (b / (eps * eps * RET_LENGTH_UM)).cbrt()
}

fn i_g_mu(ion: &IonSpecies) -> f64 {
    ion.i.value() * ion.g_mu
}

/// Printed circular gap (5 i g_μ/n⁶)(Z³/ε³)·4.76e8 Hz.
pub fn circ_hfs_gap(ion: &IonSpecies, n: u32, eps: f64) -> Result<f64> {
    if n < 2 {
        return domain("circular gap needs n >= 2");
    }
    let z = f64::from(ion.z);
    Ok(5.0 * i_g_mu(ion) / f64::from(n).powi(6) * (z / eps).powi(3) * CIRC_GAP_HZ)
}

/// Large-n limit of the level difference, 5 i g_μ Z³ |E_g|α²(m_e/m_p)/(ε³n⁶), in Hz.
/// Accepts real n so boundary curves can be solved continuously.
pub fn circ_gap_leading(i_g_mu: f64, z: u32, n: f64, eps: f64, c: &ConstantSet) -> f64 {
    let z = f64::from(z);
    c.ev_to_hz(5.0 * i_g_mu * (z / eps).powi(3) * c.hyperfine_scale() / n.powi(6))
}

/// E_hfs(|n⟩_circ) − E_hfs(|n−1⟩_circ) from the level formula, Hz.
pub fn circ_hfs_gap_levels(ion: &IonSpecies, n: u32, eps: f64, c: &ConstantSet) -> Result<f64> {
    if n < 2 {
        return domain("circular gap needs n >= 2");
    }
    let hi = QuantumState::circular(n, ion.i)?;
    let lo = QuantumState::circular(n - 1, ion.i)?;
    let d = hyperfine_energy(&lo, ion, eps, c)? - hyperfine_energy(&hi, ion, eps, c)?;
    Ok(c.ev_to_hz(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    /// ε₁ = ε₂.
    Matched,
    /// ε₁ = 1.
    Vacuum,
}

impl Case {
    pub fn of(cfg: &MaterialConfig) -> Option<Case> {
        if cfg.mu1 != 1.0 || cfg.mu2 != 1.0 {
            None
        } else if cfg.eps1 == cfg.eps2 {
            Some(Case::Matched)
        } else if cfg.eps1 == 1.0 {
            Some(Case::Vacuum)
        } else {
            None
        }
    }
}

impl std::str::FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matched" => Ok(Case::Matched),
            "vacuum" => Ok(Case::Vacuum),
            other => Err(Error::Config(format!(
                "unknown case `{other}` (expected matched|vacuum)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Approximation {
    Paper,
    Exact,
}

/// Nuclear data that enters the circular-state formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Nucleus {
    pub i: HalfInt,
    pub g_mu: f64,
}

impl Nucleus {
    pub fn of(ion: &IonSpecies) -> Self {
        Nucleus {
            i: ion.i,
            g_mu: ion.g_mu,
        }
    }

    pub fn i_g_mu(&self) -> f64 {
        self.i.value() * self.g_mu
    }
}

/// Closed-form ratios, r_θ and r_U (t_θ, t_U in the vacuum case).
pub fn closed_ratios(
    case: Case,
    nuc: Nucleus,
    z: u32,
    n: f64,
    cfg: &MaterialConfig,
    b: f64,
    c: &ConstantSet,
) -> Result<(f64, f64)> {
    let xi = c.xi(b)?;
    let zf = f64::from(z);
    let tp = cfg.theta_over_pi.abs();
    let ig = nuc.i_g_mu();
    let m = c.mass_ratio_pe;
    Ok(match case {
        Case::Matched => {
            let e = cfg.eps1;
            (
                tp * e * e * xi * xi * n.powi(7) * m / (40.0 * zf * zf * ig),
                tp * tp * e.powi(3) * xi.powi(3) * n.powi(10) * m / (80.0 * zf.powi(4) * ig),
            )
        }
        Case::Vacuum => {
            let e2 = cfg.eps2;
            let kappa = ((1.0 - e2) / (1.0 + e2)).abs();
            (
                tp * xi * xi * n.powi(7) * m / (20.0 * (1.0 + e2) * zf * zf * ig),
                kappa * xi.powi(3) * n.powi(10) * m / (20.0 * c.alpha * c.alpha * zf.powi(4) * ig),
            )
        }
    })
}

/// |⟨δV_θ⟩| and |⟨δU₂⟩_max| in Hz for the circular state at real n with the
/// circular substitutions and leading-order response; m_f = n − ½ + i unless
/// `m_f_override` is given.
pub fn circ_shifts_leading(
    resp: &Response,
    nuc: Nucleus,
    z: u32,
    n: f64,
    m_f: f64,
    eps1: f64,
    xi: f64,
    c: &ConstantSet,
) -> (f64, f64) {
    let _ = nuc;
    let dv = dv_formula(z, resp.eg, xi, 1.0, 1.0, m_f, c.e_g_signed());
    let du = du2_formula(resp.kappa, eps1, z, xi, n.powi(4), 1.0, c.e_g_signed());
    (c.ev_to_hz(dv).abs(), c.ev_to_hz(du).abs())
}

fn leading_response(cfg: &MaterialConfig, c: &ConstantSet) -> Result<Response> {
    cfg.approx_response(c).ok_or_else(|| {
        Error::Unsupported(
            "circular closed forms cover the matched (eps1 = eps2) and vacuum (eps1 = 1) cases with mu = 1".into(),
        )
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircRatios {
    pub case: Case,
    pub approximation: Approximation,
    pub n: u32,
    pub z: u32,
    /// r_θ (matched) or t_θ (vacuum) from the closed form.
    pub ratio_theta: f64,
    /// r_U or t_U from the closed form (uses |Σ| ≈ 2Z).
    pub ratio_u: f64,
    /// Same ratios recomputed through the general shift formulas.
    pub ratio_theta_general: f64,
    pub ratio_u_general: f64,
    /// |⟨δV_θ⟩| at m_f = f_max, Hz.
    pub shift_theta_hz: f64,
    /// |⟨δU₂⟩_max|, Hz.
    pub shift_u_hz: f64,
    /// Gap used by the general path, Hz.
    pub gap_hz: f64,
}

pub fn circ_ratios(
    ion: &IonSpecies,
    n: u32,
    cfg: &MaterialConfig,
    b: f64,
    approx: Approximation,
    c: &ConstantSet,
) -> Result<CircRatios> {
    if n < 2 {
        return domain("circular ratios need n >= 2");
    }
    let case =
        Case::of(cfg).ok_or_else(|| Error::Unsupported("circular ratios need a matched or vacuum config".into()))?;
    let nuc = Nucleus::of(ion);
    let z = ion.z;
    let nf = f64::from(n);
    let xi = c.xi(b)?;
    let (ratio_theta, ratio_u) = closed_ratios(case, nuc, z, nf, cfg, b, c)?;
    let f_max = nf - 0.5 + ion.i.value();
    let (gen_theta, gen_u, shift_theta_hz, shift_u_hz, gap_hz) = match approx {
        Approximation::Paper => {
            let resp = leading_response(cfg, c)?;
            let gap = circ_gap_leading(nuc.i_g_mu(), z, nf, cfg.eps1, c);
            let (dv_n, du) = circ_shifts_leading(&resp, nuc, z, nf, nf, cfg.eps1, xi, c);
            let (dv_max, _) = circ_shifts_leading(&resp, nuc, z, nf, f_max, cfg.eps1, xi, c);
            (dv_n / gap, du / gap, dv_max, du, gap)
        }
        Approximation::Exact => {
            let st = QuantumState::circular(n, ion.i)?;
            let gap = circ_hfs_gap_levels(ion, n, cfg.eps1, c)?;
            let dv = c.ev_to_hz(delta_v_theta(&st, ion, cfg, b, c)?).abs();
            // Largest optical shift over the circular manifold's m_f.
            let mut du: f64 = 0.0;
            for m in st.f.projections() {
                let s = st.with_m_f(m)?;
                du = du.max(c.ev_to_hz(delta_u2(&s, ion, cfg, b, c)?).abs());
            }
            (dv / gap, du / gap, dv, du, gap)
        }
    };
    Ok(CircRatios {
        case,
        approximation: approx,
        n,
        z,
        ratio_theta,
        ratio_u,
        ratio_theta_general: gen_theta,
        ratio_u_general: gen_u,
        shift_theta_hz,
        shift_u_hz,
        gap_hz,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EqualShift {
    pub real: f64,
    pub rounded: u32,
}

/// n = 5.59·(μ/μ_N·Z²)^{1/7}.
pub fn equal_shift_n(ion: &IonSpecies) -> Result<EqualShift> {
    if ion.mu_over_mun.is_none() && ion.i.twice() == 0 {
        return Err(Error::Config(format!("ion {} lacks a nuclear moment", ion.label)));
    }
    let mu = ion.mu();
    if !(mu > 0.0) {
        return Err(Error::Config(format!("ion {}: mu/mu_N must be positive", ion.label)));
    }
    let z = f64::from(ion.z);
    let real = EQUAL_SHIFT_PREFACTOR * (mu * z * z).powf(1.0 / 7.0);
    Ok(EqualShift {
        real,
        rounded: real.round() as u32,
    })
}

/// Prefactor k of r_θ = 1 written as n = k·(i g_μ Z²)^{1/7}, recomputed from the closed form.
pub fn matched_upper_bound_prefactor(tp: f64, eps: f64, b: f64, c: &ConstantSet) -> Result<f64> {
    let xi = c.xi(b)?;
    Ok((40.0 / (tp.abs() * eps * eps * xi * xi * c.mass_ratio_pe)).powf(1.0 / 7.0))
}

/// Vacuum-case bounds: t_θ = 1 as k·(i g_μ Z²)^{1/7}, t_U = 1 as k·(i g_μ Z⁴)^{1/10},
/// and t_θ = t_U as k·Z^{2/3}.
pub fn vacuum_bound_prefactors(tp: f64, eps2: f64, b: f64, c: &ConstantSet) -> Result<(f64, f64, f64)> {
    let xi = c.xi(b)?;
    let m = c.mass_ratio_pe;
    let kappa = ((1.0 - eps2) / (1.0 + eps2)).abs();
    let a2 = c.alpha * c.alpha;
    let k_theta = (20.0 * (1.0 + eps2) / (tp.abs() * xi * xi * m)).powf(1.0 / 7.0);
    let k_u = (20.0 * a2 / (kappa * xi.powi(3) * m)).powf(0.1);
    let k_dom = (tp.abs() * a2 / ((1.0 + eps2) * kappa * xi)).cbrt();
    Ok((k_theta, k_u, k_dom))
}

/// |⟨δV_θ⟩|/|E_hfs| for 1S₁/₂, f = 1, m_f = 1 at b = 1 μm.
pub fn ground_state_ratio(ion: &IonSpecies, cfg: &MaterialConfig, c: &ConstantSet) -> Result<f64> {
    if ion.i != HalfInt::HALF {
        return Err(Error::Unsupported(format!(
            "ground-state ratio is derived for i = 1/2 only ({} has i = {})",
            ion.label, ion.i
        )));
    }
    let st = QuantumState::new(1, 0, HalfInt::HALF, ion.i, HalfInt::ONE, HalfInt::ONE)?;
    let dv = delta_v_theta(&st, ion, cfg, 1.0, c)?;
    let eh = hyperfine_energy(&st, ion, cfg.eps1, c)?;
    Ok((dv / eh).abs())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionScanRequest {
    pub z_range: (u32, u32),
    pub n_range: (u32, u32),
    pub b: f64,
    pub case: Case,
    pub material: MaterialConfig,
    pub nucleus: Nucleus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionRow {
    pub z: u32,
    pub n: u32,
    pub admissible: bool,
    pub ratio_theta: f64,
    pub ratio_u: f64,
    pub shift_hz: f64,
    pub retarded_ok: bool,
    pub perturbative: bool,
    pub shift_gt_1e5: bool,
    pub shift_gt_1e6: bool,
    pub shift_gt_1e7: bool,
    pub theta_dominant: bool,
    /// Largest admissible shift for this Z.
    pub z_optimum: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSample {
    pub curve: String,
    pub z: f64,
    pub n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionDataset {
    pub rows: Vec<RegionRow>,
    pub curves: Vec<CurveSample>,
}

pub const SHIFT_LEVELS_HZ: [f64; 3] = [1e5, 1e6, 1e7];

struct Evaluator<'a> {
    req: &'a RegionScanRequest,
    resp: Response,
    xi: f64,
    c: &'a ConstantSet,
}

impl Evaluator<'_> {
    fn ratios(&self, z: u32, n: f64) -> (f64, f64) {
        closed_ratios(
            self.req.case,
            self.req.nucleus,
            z,
            n,
            &self.req.material,
            self.req.b,
            self.c,
        )
        .expect("b validated")
    }

    fn shift(&self, z: u32, n: f64) -> f64 {
        let m_f = n - 0.5 + self.req.nucleus.i.value();
        let m = &self.req.material;
        circ_shifts_leading(&self.resp, self.req.nucleus, z, n, m_f, m.eps1, self.xi, self.c).0
    }

    fn l_r(&self, z: u32, n: f64) -> f64 {
        retardation(z, self.req.material.eps1, n).l_r_um
    }
}

/// Classifies every (Z, n) cell and solves the boundary curves in real n.
pub fn region_scan(req: &RegionScanRequest, c: &ConstantSet) -> Result<RegionDataset> {
    let (z0, z1) = req.z_range;
    let (n0, n1) = req.n_range;
    if z0 < 1 || z1 > 100 || n0 < 1 || n1 > 100 {
        return domain("scan bounds must lie within 1 <= Z, n <= 100");
    }
    if Case::of(&req.material) != Some(req.case) {
        return domain("material does not match the requested case");
    }
    let ev = Evaluator {
        req,
        resp: leading_response(&req.material, c)?,
        xi: c.xi(req.b)?,
        c,
    };
    let mut rows = Vec::new();
    for z in z0..=z1 {
        let start = rows.len();
        for n in n0..=n1 {
            let nf = f64::from(n);
            let (rt, ru) = ev.ratios(z, nf);
            let shift = ev.shift(z, nf);
            let retarded_ok = req.b < ev.l_r(z, nf);
            let perturbative = rt < 1.0;
            rows.push(RegionRow {
                z,
                n,
                admissible: retarded_ok && perturbative,
                ratio_theta: rt,
                ratio_u: ru,
                shift_hz: shift,
                retarded_ok,
                perturbative,
                shift_gt_1e5: shift > 1e5,
                shift_gt_1e6: shift > 1e6,
                shift_gt_1e7: shift > 1e7,
                theta_dominant: rt > ru,
                z_optimum: false,
            });
        }
        let best = rows[start..]
            .iter()
            .enumerate()
            .filter(|(_, r)| r.admissible)
            .max_by(|a, b| a.1.shift_hz.total_cmp(&b.1.shift_hz))
            .map(|(k, _)| start + k);
        if let Some(k) = best {
            rows[k].z_optimum = true;
        }
    }
    let curves = if z0 <= z1 {
        boundary_curves(&ev, z0, z1)
    } else {
        Vec::new()
    };
    Ok(RegionDataset { rows, curves })
}

const CURVE_N_MAX: f64 = 1000.0;

fn boundary_curves(ev: &Evaluator<'_>, z0: u32, z1: u32) -> Vec<CurveSample> {
    let mut out = Vec::new();
    let mut push = |name: &str, z: u32, f: &dyn Fn(f64) -> f64| {
        if let Ok(n) = bisect(f, 0.5, CURVE_N_MAX, 1e-13) {
            out.push(CurveSample {
                curve: name.to_string(),
                z: f64::from(z),
                n,
            });
        }
    };
    for z in z0..=z1 {
        push("retardation", z, &|n| ev.l_r(z, n) - ev.req.b);
        push("perturbative", z, &|n| ev.ratios(z, n).0 - 1.0);
        for level in SHIFT_LEVELS_HZ {
            let name = format!("shift_{level:.0e}");
            push(&name, z, &|n| ev.shift(z, n) - level);
        }
        push("dominance", z, &|n| {
            let (rt, ru) = ev.ratios(z, n);
            (ru / rt).ln()
        });
        if ev.req.case == Case::Matched {
            push("dominance_10", z, &|n| {
                let (rt, ru) = ev.ratios(z, n);
                (10.0 * ru / rt).ln()
            });
        }
    }
    out
}

/// Re-evaluates a curve's defining function at its sample; zero means on the curve.
pub fn curve_residual(sample: &CurveSample, req: &RegionScanRequest, c: &ConstantSet) -> Result<f64> {
    let ev = Evaluator {
        req,
        resp: leading_response(&req.material, c)?,
        xi: c.xi(req.b)?,
        c,
    };
    let z = sample.z as u32;
    let n = sample.n;
    let (rt, ru) = ev.ratios(z, n);
    Ok(match sample.curve.as_str() {
        "retardation" => ev.l_r(z, n) / req.b - 1.0,
        "perturbative" => rt - 1.0,
        "dominance" => ru / rt - 1.0,
        "dominance_10" => 10.0 * ru / rt - 1.0,
        s if s.starts_with("shift_") => {
            let level: f64 = s["shift_".len()..]
                .parse()
                .map_err(|_| Error::Config(format!("bad curve name {s}")))?;
            ev.shift(z, n) / level - 1.0
        }
        other => return Err(Error::Config(format!("unknown curve {other}"))),
    })
}
