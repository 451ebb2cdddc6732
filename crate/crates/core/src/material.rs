//! Response of the medium/TI pair: κ, the monopole product e·g, the surface
//! Green's kernels and numeric checks of their Taylor coefficients.

use serde::{Deserialize, Serialize};

use crate::constants::ConstantSet;
use crate::error::{domain, Result};
use crate::numeric::richardson;

pub type Point = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialConfig {
    pub eps1: f64,
    pub mu1: f64,
    pub eps2: f64,
    pub mu2: f64,
    /// θ in units of π. Physical values are odd integers; 0 is the trivial insulator.
    pub theta_over_pi: f64,
}

/// κ, e·g and θ̃ for one config and constant set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Response {
    pub theta_tilde: f64,
    pub kappa: f64,
    pub eg: f64,
}

impl MaterialConfig {
    pub fn new(eps1: f64, mu1: f64, eps2: f64, mu2: f64, theta_over_pi: f64) -> Result<Self> {
        let cfg = MaterialConfig {
            eps1,
            mu1,
            eps2,
            mu2,
            theta_over_pi,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Vacuum above a TI with permittivity `eps2`, μ = 1.
    pub fn vacuum_ti(eps2: f64, theta_over_pi: f64) -> Result<Self> {
        Self::new(1.0, 1.0, eps2, 1.0, theta_over_pi)
    }

    /// Embedding medium optically matched to the TI, μ = 1.
    pub fn matched(eps: f64, theta_over_pi: f64) -> Result<Self> {
        Self::new(eps, 1.0, eps, 1.0, theta_over_pi)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.eps1, self.mu1, self.eps2, self.mu2, self.theta_over_pi];
        if all.iter().any(|v| !v.is_finite()) {
            return domain("material parameters must be finite");
        }
        if self.eps1 < 1.0 || self.eps2 < 1.0 {
            return domain(format!(
                "permittivities must be >= 1 (got {}, {})",
                self.eps1, self.eps2
            ));
        }
        if self.mu1 <= 0.0 || self.mu2 <= 0.0 {
            return domain("permeabilities must be positive");
        }
        Ok(())
    }

    /// Non-fatal note when θ/π is neither 0 nor an odd integer.
    pub fn theta_warning(&self) -> Option<String> {
        let t = self.theta_over_pi;
        let odd = t.fract() == 0.0 && (t.abs() as i64) % 2 == 1;
        if t == 0.0 || odd {
            None
        } else {
            Some(format!(
                "theta/pi = {t} is not an odd integer; treated as a scan parameter"
            ))
        }
    }

    pub fn with_theta(mut self, theta_over_pi: f64) -> Self {
        self.theta_over_pi = theta_over_pi;
        self
    }

    pub fn theta_tilde(&self, c: &ConstantSet) -> f64 {
        c.alpha * self.theta_over_pi
    }

    fn inv_mu(&self) -> f64 {
        1.0 / self.mu1 + 1.0 / self.mu2
    }

    /// (ε₁+ε₂)(1/μ₁+1/μ₂) + θ̃².
    pub fn denominator(&self, c: &ConstantSet) -> f64 {
        let t = self.theta_tilde(c);
        (self.eps1 + self.eps2) * self.inv_mu() + t * t
    }

    pub fn kappa(&self, c: &ConstantSet) -> f64 {
        let t = self.theta_tilde(c);
        ((self.eps1 - self.eps2) * self.inv_mu() - t * t) / (self.eps1 * self.denominator(c))
    }

    /// The product e·g of the electron charge and the image-monopole strength.
    pub fn monopole_strength(&self, c: &ConstantSet) -> f64 {
        2.0 * c.alpha * self.theta_tilde(c) / self.denominator(c)
    }

    pub fn response(&self, c: &ConstantSet) -> Response {
        Response {
            theta_tilde: self.theta_tilde(c),
            kappa: self.kappa(c),
            eg: self.monopole_strength(c),
        }
    }

    /// Leading-order (κ, e·g) in θ̃ for the two textbook cases, used by the
    /// circular-state closed forms. `None` for configs that are neither.
    pub fn approx_response(&self, c: &ConstantSet) -> Option<Response> {
        let t = self.theta_tilde(c);
        if self.mu1 != 1.0 || self.mu2 != 1.0 {
            return None;
        }
        if self.eps1 == self.eps2 {
            let e = self.eps1;
            Some(Response {
                theta_tilde: t,
                kappa: -t * t / (4.0 * e * e),
                eg: c.alpha * t / (2.0 * e),
            })
        } else if self.eps1 == 1.0 {
            let e2 = self.eps2;
            Some(Response {
                theta_tilde: t,
                kappa: (1.0 - e2) / (1.0 + e2),
                eg: c.alpha * t / (1.0 + e2),
            })
        } else {
            None
        }
    }
}

fn check_above(p: &Point, what: &str) -> Result<()> {
    if !(p[2] > 0.0) {
        return domain(format!("{what} must lie above the interface (z = {})", p[2]));
    }
    Ok(())
}

/// G_S(r, r') = κ / |r − r̄'| with r̄' the mirror image of r'.
pub fn green_scalar_surface(r: &Point, rp: &Point, kappa: f64) -> Result<f64> {
    check_above(r, "r")?;
    check_above(rp, "r'")?;
    let dx = r[0] - rp[0];
    let dy = r[1] - rp[1];
    let u = r[2] + rp[2];
    Ok(kappa / (dx * dx + dy * dy + u * u).sqrt())
}

/// e·G^i_0(x, x'): the vector potential of the image monopole of a unit charge at x'.
///
/// Zero at coincident points and along the axis R = 0.
pub fn green_vector_surface(x: &Point, xp: &Point, eg: f64) -> Result<Point> {
    check_above(x, "x")?;
    check_above(xp, "x'")?;
    let rx = x[0] - xp[0];
    let ry = x[1] - xp[1];
    let r2 = rx * rx + ry * ry;
    if r2 == 0.0 {
        return Ok([0.0; 3]);
    }
    let u = x[2] + xp[2];
    let s = (r2 + u * u).sqrt();
    // (1 − u/s)/R² rewritten without cancellation.
    let w = eg / (s * (s + u));
    Ok([-ry * w, rx * w, 0.0])
}

/// Nucleus-image plus electron-self-image field at `r` (relative to the
/// nucleus at height `b`), in units where e·g multiplies a unit monopole.
pub fn image_monopole_field(r: &Point, z: u32, b: f64, eg: f64) -> Result<Point> {
    if !(b > 0.0) {
        return domain("b must be positive");
    }
    if !(r[2] > -b) {
        return domain(format!("electron below the interface (z = {} <= -b)", r[2]));
    }
    let zg = f64::from(z) * eg;
    let zz = r[2] + 2.0 * b;
    let d3 = (r[0] * r[0] + r[1] * r[1] + zz * zz).powf(1.5);
    let self_term = eg / (4.0 * (r[2] + b) * (r[2] + b));
    Ok([zg * r[0] / d3, zg * r[1] / d3, zg * zz / d3 - self_term])
}

/// Cubic expansion of the vector potential seen by the electron at `r`.
pub fn vector_potential_expanded(r: &Point, z: u32, b: f64, eg: f64) -> Point {
    let [x, y, zc] = *r;
    let rr = x * x + y * y + zc * zc;
    let pre = -f64::from(z) * eg / (8.0 * b * b) * (1.0 - zc / b - 3.0 / 16.0 * (rr - 5.0 * zc * zc) / (b * b));
    [pre * y, -pre * x, 0.0]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaylorEntry {
    pub name: &'static str,
    pub direction: Point,
    pub numeric: f64,
    pub closed: f64,
    pub rel_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaylorReport {
    pub b: f64,
    pub entries: Vec<TaylorEntry>,
    pub max_rel_dev: f64,
}

impl TaylorReport {
    fn from_entries(b: f64, entries: Vec<TaylorEntry>) -> Self {
        let max_rel_dev = entries.iter().map(|e| e.rel_dev).fold(0.0, f64::max);
        TaylorReport {
            b,
            entries,
            max_rel_dev,
        }
    }
}

/// Directions (in units of b) used to probe the expansions.
const DIRECTIONS: [Point; 5] = [
    [0.3, -0.2, 0.5],
    [1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0],
    [-0.4, 0.7, -0.25],
    [0.6, 0.6, 0.6],
];

const RICHARDSON_LEVELS: usize = 6;

fn deviation(numeric: f64, closed: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        return (numeric - closed).abs();
    }
    (numeric - closed).abs() / scale
}

fn shift(p: Point, d: Point, t: f64) -> Point {
    [p[0] + t * d[0], p[1] + t * d[1], p[2] + t * d[2]]
}

/// Numerically differentiates G_S around (0, 0, b) and compares with the four
/// closed-form coefficients κ/2b, −κz/4b², κ(3z²−r²)/8b³, κ(r²+z²)/8b³.
///
/// Deviations are measured against the natural size |κ||r|^k/b^{k+1}.
pub fn taylor_check_scalar(b: f64, kappa: f64) -> Result<TaylorReport> {
    if !(b > 0.0) {
        return domain("b must be positive");
    }
    let r0 = [0.0, 0.0, b];
    let g = |p: Point, q: Point| green_scalar_surface(&p, &q, kappa).expect("points above interface");
    let mut entries = Vec::new();
    for unit in DIRECTIONS {
        let d = [unit[0] * b, unit[1] * b, unit[2] * b];
        let rr = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        let r = rr.sqrt();
        let z = d[2];
        let h0 = 0.2;
        let f = |t: f64| g(r0, shift(r0, d, t));
        let val = g(r0, r0);
        let (d1, _) = richardson(|h| (f(h) - f(-h)) / (2.0 * h), h0, RICHARDSON_LEVELS);
        let f_prime = |t: f64| g(shift(r0, d, t), r0);
        let (d2, _) = richardson(
            |h| (f_prime(h) - 2.0 * f_prime(0.0) + f_prime(-h)) / (h * h),
            h0,
            RICHARDSON_LEVELS,
        );
        let m = |s: f64, t: f64| g(shift(r0, d, s), shift(r0, d, t));
        let (dm, _) = richardson(
            |h| (m(h, h) - m(h, -h) - m(-h, h) + m(-h, -h)) / (4.0 * h * h),
            h0,
            RICHARDSON_LEVELS,
        );
        let closed = [
            kappa / (2.0 * b),
            -kappa * z / (4.0 * b * b),
            kappa * (3.0 * z * z - rr) / (8.0 * b.powi(3)),
            kappa * (rr + z * z) / (8.0 * b.powi(3)),
        ];
        let numeric = [val, d1, d2, dm];
        let names = ["value", "first", "second", "mixed"];
        for k in 0..4 {
            let scale = kappa.abs() * r.powi(k as i32) / b.powi(k as i32 + 1);
            let scale = if k == 3 { kappa.abs() * rr / b.powi(3) } else { scale };
            entries.push(TaylorEntry {
                name: names[k],
                direction: unit,
                numeric: numeric[k],
                closed: closed[k],
                rel_dev: deviation(numeric[k], closed[k], scale),
            });
        }
    }
    Ok(TaylorReport::from_entries(b, entries))
}

/// Numeric directional derivatives of e·G^i_0(r0 + t r, r0) against
/// −(g/8b²), gz/4b³ and (9g/64b⁴)(r²−5z²), each multiplying (y, −x, 0).
pub fn taylor_check_vector(b: f64, eg: f64) -> Result<TaylorReport> {
    if !(b > 0.0) {
        return domain("b must be positive");
    }
    let r0 = [0.0, 0.0, b];
    let mut entries = Vec::new();
    for unit in DIRECTIONS {
        let d = [unit[0] * b, unit[1] * b, unit[2] * b];
        let rr = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        let r = rr.sqrt();
        let z = d[2];
        let rho = (d[0] * d[0] + d[1] * d[1]).sqrt();
        if rho == 0.0 {
            continue;
        }
        // Component along (y, −x, 0)/ρ.
        let proj = |t: f64| -> f64 {
            let v = green_vector_surface(&shift(r0, d, t), &r0, eg).expect("points above interface");
            (v[0] * d[1] - v[1] * d[0]) / rho
        };
        let h0 = 0.2;
        let (d1, _) = richardson(|h| (proj(h) - proj(-h)) / (2.0 * h), h0, RICHARDSON_LEVELS);
        let (d2, _) = richardson(
            |h| (proj(h) - 2.0 * proj(0.0) + proj(-h)) / (h * h),
            h0,
            RICHARDSON_LEVELS,
        );
        let (d3, _) = richardson(
            |h| (proj(2.0 * h) - 2.0 * proj(h) + 2.0 * proj(-h) - proj(-2.0 * h)) / (2.0 * h * h * h),
            h0 / 2.0,
            RICHARDSON_LEVELS,
        );
        let closed = [
            -eg / (8.0 * b * b) * rho,
            eg * z / (4.0 * b.powi(3)) * rho,
            9.0 * eg / (64.0 * b.powi(4)) * (rr - 5.0 * z * z) * rho,
        ];
        let numeric = [d1, d2, d3];
        let names = ["first", "second", "third"];
        for k in 0..3 {
            let scale = eg.abs() * r.powi(k as i32 + 1) / b.powi(k as i32 + 2);
            entries.push(TaylorEntry {
                name: names[k],
                direction: unit,
                numeric: numeric[k],
                closed: closed[k],
                rel_dev: deviation(numeric[k], closed[k], scale),
            });
        }
    }
    Ok(TaylorReport::from_entries(b, entries))
}
