//! Hydrogenic radial moments in scaled coordinates r̃ = (Z/ε₁)(r/a₀).
//!
//! The closed form for ⟨r̃²⟩ is what the shift formulas use; the quadrature
//! path integrates R_{nℓ}² directly and serves as its oracle.

use serde::Serialize;

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialMoment {
    pub n: u32,
    pub l: u32,
    pub power: i32,
    pub value: f64,
}

impl RadialMoment {
    pub fn quadrature(n: u32, l: u32, power: i32) -> Result<Self> {
        let value = radial_quadrature(n, l, power)?;
        Ok(RadialMoment { n, l, power, value })
    }
}

fn check_nl(n: u32, l: u32) -> Result<()> {
    if n < 1 || l >= n {
        return domain(format!("invalid (n, l) = ({n}, {l})"));
    }
    Ok(())
}

/// ⟨r̃²⟩_{nℓ} = ½n²[5n² − 3ℓ(ℓ+1) + 1].
pub fn r2_expect(n: u32, l: u32) -> Result<f64> {
    check_nl(n, l)?;
    let n = f64::from(n);
    let l = f64::from(l);
    Ok(0.5 * n * n * (5.0 * n * n - 3.0 * l * (l + 1.0) + 1.0))
}

fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|i| f64::from(i).ln()).sum()
}

/// Generalized Laguerre L_k^α(x) by upward recurrence.
pub fn laguerre(k: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for m in 1..k {
        let m = f64::from(m);
        let next = ((2.0 * m + 1.0 + alpha - x) * cur - (m + alpha) * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// ln R_{nℓ}(ρ)² for the unit-charge hydrogenic radial function.
fn ln_r_sq(n: u32, l: u32, ln_norm: f64, rho: f64) -> f64 {
    let x = 2.0 * rho / f64::from(n);
    let lag = laguerre(n - l - 1, f64::from(2 * l + 1), x);
    if lag == 0.0 {
        return f64::NEG_INFINITY;
    }
    ln_norm - x + 2.0 * f64::from(l) * x.ln() + 2.0 * lag.abs().ln()
}

struct Integrand {
    n: u32,
    l: u32,
    ln_norm: f64,
}

impl Integrand {
    fn new(n: u32, l: u32) -> Self {
        let nf = f64::from(n);
        let ln_norm = 3.0 * (2.0 / nf).ln() + ln_factorial(n - l - 1) - (2.0 * nf).ln() - ln_factorial(n + l);
        Integrand { n, l, ln_norm }
    }

    /// ln of R² ρ^{p+3} at ρ = e^t (the extra ρ comes from dρ = ρ dt).
    fn ln_at(&self, t: f64, power: i32) -> f64 {
        ln_r_sq(self.n, self.l, self.ln_norm, t.exp()) + f64::from(power + 3) * t
    }
}

const MAX_LEVELS: usize = 16;
const TOL: f64 = 1e-12;
/// Integrand tails are cut where they fall this many e-folds below the peak.
const TAIL_EFOLDS: f64 = 80.0;

fn limits(f: &Integrand, power: i32) -> (f64, f64) {
    let nf = f64::from(f.n);
    let t_peak = (nf * nf).ln();
    // A radial node can sit exactly at ρ = n², so take the peak over a window.
    let peak = (0..=200)
        .map(|k| f.ln_at(t_peak - 6.0 + 0.05 * f64::from(k), power))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut hi = (nf * nf + 40.0 * nf + 100.0).ln();
    while f.ln_at(hi, power) > peak - TAIL_EFOLDS {
        hi += 0.25;
    }
    let mut lo = (-40.0f64).min(t_peak - 10.0);
    while f.ln_at(lo, power) > peak - TAIL_EFOLDS {
        lo -= 1.0;
    }
    (lo, hi)
}

fn trapezoid(f: &Integrand, power: i32) -> Result<f64> {
    let (lo, hi) = limits(f, power);
    let eval = |t: f64| f.ln_at(t, power).exp();
    let mut panels = 64usize;
    let mut h = (hi - lo) / panels as f64;
    let mut sum = 0.5 * (eval(lo) + eval(hi)) + (1..panels).map(|k| eval(lo + k as f64 * h)).sum::<f64>();
    let mut prev = sum * h;
    let mut achieved = f64::INFINITY;
    for _ in 0..MAX_LEVELS {
        // Add the midpoints of the current panels.
        sum += (0..panels).map(|k| eval(lo + (k as f64 + 0.5) * h)).sum::<f64>();
        panels *= 2;
        h *= 0.5;
        let cur = sum * h;
        achieved = ((cur - prev) / cur).abs();
        if achieved < TOL {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Numeric {
        message: format!("radial quadrature did not converge for n = {}, l = {}", f.n, f.l),
        achieved,
    })
}

/// ∫₀^∞ R_{nℓ}² ρ^{power+2} dρ by the trapezoid rule in t = ln ρ, halving the
/// step until successive levels agree. Normalization is checked alongside.
pub fn radial_quadrature(n: u32, l: u32, power: i32) -> Result<f64> {
    check_nl(n, l)?;
    if power < -2 * l as i32 - 1 {
        return domain(format!("power {power} diverges at the origin for l = {l}"));
    }
    let f = Integrand::new(n, l);
    let norm = trapezoid(&f, 0)?;
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::Numeric {
            message: format!("radial normalization failed for n = {n}, l = {l}"),
            achieved: (norm - 1.0).abs(),
        });
    }
    if power == 0 {
        return Ok(norm);
    }
    trapezoid(&f, power)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert_eq!(r2_expect(1, 0).unwrap(), 3.0);
        assert_eq!(r2_expect(2, 1).unwrap(), 30.0);
        assert!(r2_expect(2, 2).is_err());
        assert!(r2_expect(0, 0).is_err());
    }

    #[test]
    fn circular_approaches_n4() {
        let ratio = |n: u32| r2_expect(n, n - 1).unwrap() / f64::from(n).powi(4);
        assert!((ratio(200) - 1.0).abs() < 0.01);
        assert!((ratio(200) - 1.0).abs() < (ratio(20) - 1.0).abs());
    }

    #[test]
    fn quadrature_low_states() {
        assert!((radial_quadrature(1, 0, 0).unwrap() - 1.0).abs() < 1e-12);
        assert!((radial_quadrature(1, 0, 1).unwrap() - 1.5).abs() < 1e-10);
        assert!((radial_quadrature(1, 0, 2).unwrap() - 3.0).abs() < 1e-10);
        assert!((radial_quadrature(2, 1, 2).unwrap() - 30.0).abs() < 1e-9);
    }

    #[test]
    fn laguerre_small_orders() {
        let x = 0.7;
        assert_eq!(laguerre(0, 3.0, x), 1.0);
        assert!((laguerre(1, 3.0, x) - (4.0 - x)).abs() < 1e-15);
        let l2 = 0.5 * (x * x - 2.0 * 5.0 * x + 5.0 * 4.0);
        assert!((laguerre(2, 3.0, x) - l2).abs() < 1e-14);
    }
}
