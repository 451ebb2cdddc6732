//! Angular-momentum algebra on exact half-integer labels.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// A half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt { twice }
    }

    pub const fn int(v: i32) -> Self {
        HalfInt { twice: 2 * v }
    }

    pub const fn twice(self) -> i32 {
        self.twice
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    pub fn abs(self) -> Self {
        HalfInt {
            twice: self.twice.abs(),
        }
    }

    /// x(x+1).
    pub fn casimir(self) -> f64 {
        let v = self.value();
        v * (v + 1.0)
    }

    /// True when `self - other` is an integer.
    pub fn congruent(self, other: HalfInt) -> bool {
        (self.twice - other.twice) % 2 == 0
    }

    /// -self, -self+1, ..., self.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        (-self.twice..=self.twice).step_by(2).map(HalfInt::from_twice)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice + rhs.twice,
        }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice - rhs.twice,
        }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("`{s}` is not an integer or half-integer"));
        if let Some((num, den)) = s.split_once('/') {
            if den.trim() != "2" {
                return Err(bad());
            }
            let n: i32 = num.trim().parse().map_err(|_| bad())?;
            Ok(HalfInt::from_twice(n))
        } else if let Ok(n) = s.parse::<i32>() {
            Ok(HalfInt::int(n))
        } else {
            let v: f64 = s.parse().map_err(|_| bad())?;
            let t = 2.0 * v;
            if t.fract() != 0.0 || t.abs() > f64::from(i32::MAX) {
                return Err(bad());
            }
            Ok(HalfInt::from_twice(t as i32))
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

const LOG_FACT_MAX: usize = 512;

fn log_fact(n: i32) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LOG_FACT_MAX);
        let mut acc = 0.0f64;
        t.push(0.0);
        for k in 1..LOG_FACT_MAX {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    });
    table[n as usize]
}

fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    c >= (a - b).abs() && c <= a + b && (a + b + c).is_integer()
}

/// Clebsch-Gordan coefficient ⟨j1 m1; j2 m2 | j m⟩ in the Condon-Shortley convention.
///
/// Selection-rule violations give 0. Mismatched integer/half-integer labels
/// (e.g. `m` not congruent to `j`) are a domain error.
pub fn cg(j1: HalfInt, j2: HalfInt, m1: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> Result<f64> {
    if j1.twice < 0 || j2.twice < 0 || j.twice < 0 {
        return domain("negative angular momentum");
    }
    if !m1.congruent(j1) || !m2.congruent(j2) || !m.congruent(j) {
        return domain(format!(
            "projection labels inconsistent with ({j1}, {j2}, {j}): m1={m1}, m2={m2}, m={m}"
        ));
    }
    if (j1 + j2 + j).twice / 2 + 1 >= LOG_FACT_MAX as i32 {
        return domain("angular momenta too large for the factorial table");
    }
    if m1 + m2 != m || !triangle(j1, j2, j) {
        return Ok(0.0);
    }
    if m1.abs() > j1 || m2.abs() > j2 || m.abs() > j {
        return Ok(0.0);
    }
    // Integer arguments of the Racah sum.
    let a = (j1 + j2 - j).twice / 2;
    let b = (j1 - j2 + j).twice / 2;
    let c = (-j1 + j2 + j).twice / 2;
    let d = (j1 + j2 + j).twice / 2 + 1;
    let j1pm = (j1 + m1).twice / 2;
    let j1mm = (j1 - m1).twice / 2;
    let j2pm = (j2 + m2).twice / 2;
    let j2mm = (j2 - m2).twice / 2;
    let jpm = (j + m).twice / 2;
    let jmm = (j - m).twice / 2;

    let pre = 0.5
        * ((f64::from(j.twice) + 1.0).ln() + log_fact(a) + log_fact(b) + log_fact(c) - log_fact(d)
            + log_fact(jpm)
            + log_fact(jmm)
            + log_fact(j1pm)
            + log_fact(j1mm)
            + log_fact(j2pm)
            + log_fact(j2mm));

    let e = (j - j2 + m1).twice / 2;
    let g = (j - j1 - m2).twice / 2;
    let kmin = 0.max(-e).max(-g);
    let kmax = a.min(j1mm).min(j2pm);
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let den =
            log_fact(k) + log_fact(a - k) + log_fact(j1mm - k) + log_fact(j2pm - k) + log_fact(e + k) + log_fact(g + k);
        let term = (pre - den).exp();
        sum += if k % 2 == 0 { term } else { -term };
    }
    Ok(sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuantumState {
    pub n: u32,
    pub l: HalfInt,
    pub s: HalfInt,
    pub j: HalfInt,
    pub i: HalfInt,
    pub f: HalfInt,
    pub m_f: HalfInt,
}

impl QuantumState {
    /// Build and validate a state with s = 1/2.
    pub fn new(n: u32, l: u32, j: HalfInt, i: HalfInt, f: HalfInt, m_f: HalfInt) -> Result<Self> {
        let st = QuantumState {
            n,
            l: HalfInt::int(l as i32),
            s: HalfInt::HALF,
            j,
            i,
            f,
            m_f,
        };
        st.validate()?;
        Ok(st)
    }

    /// Circular state ℓ = n−1, j = ℓ+1/2, f = j+i, m_f = f.
    pub fn circular(n: u32, i: HalfInt) -> Result<Self> {
        if n < 1 {
            return domain("n must be at least 1");
        }
        let l = n - 1;
        let j = HalfInt::int(l as i32) + HalfInt::HALF;
        let f = j + i;
        Self::new(n, l, j, i, f, f)
    }

    pub fn validate(&self) -> Result<()> {
        let QuantumState { n, l, s, j, i, f, m_f } = *self;
        if n < 1 {
            return domain("n must be at least 1");
        }
        if !l.is_integer() || l.twice < 0 || l.twice / 2 >= n as i32 {
            return domain(format!("l = {l} invalid for n = {n}"));
        }
        if s != HalfInt::HALF {
            return domain("electron spin must be 1/2");
        }
        if j != l + s && j != (l - s).abs() {
            return domain(format!("j = {j} incompatible with l = {l}"));
        }
        if i.twice < 0 {
            return domain("nuclear spin must be non-negative");
        }
        if !triangle(j, i, f) {
            return domain(format!("f = {f} violates |j-i| <= f <= j+i for j = {j}, i = {i}"));
        }
        if m_f.abs() > f || !m_f.congruent(f) {
            return domain(format!("m_f = {m_f} invalid for f = {f}"));
        }
        Ok(())
    }

    pub fn l_int(&self) -> u32 {
        (self.l.twice / 2) as u32
    }

    pub fn with_m_f(mut self, m_f: HalfInt) -> Result<Self> {
        self.m_f = m_f;
        self.validate()?;
        Ok(self)
    }

    /// Spectroscopic label, e.g. `2P3/2 f=2 m_f=1`.
    pub fn label(&self) -> String {
        let l = self.l_int() as usize;
        let letter = if l < L_LETTERS.len() {
            L_LETTERS[l].to_string()
        } else {
            format!("[l={l}]")
        };
        format!("{}{}{} f={} m_f={}", self.n, letter, self.j, self.f, self.m_f)
    }
}

const L_LETTERS: [char; 17] = [
    'S', 'P', 'D', 'F', 'G', 'H', 'I', 'K', 'L', 'M', 'N', 'O', 'Q', 'R', 'T', 'U', 'V',
];

/// Parses a term such as `2P3/2` or `1S1/2` into (n, l, j).
pub fn parse_term(term: &str) -> Result<(u32, u32, HalfInt)> {
    let bad = || Error::Domain(format!("bad term `{term}` (expected e.g. 2P3/2)"));
    let pos = term.find(|ch: char| ch.is_ascii_alphabetic()).ok_or_else(bad)?;
    let n: u32 = term[..pos].parse().map_err(|_| bad())?;
    let mut rest = term[pos..].chars();
    let letter = rest.next().ok_or_else(bad)?.to_ascii_uppercase();
    let l = L_LETTERS.iter().position(|&c| c == letter).ok_or_else(bad)? as u32;
    let j: HalfInt = rest.as_str().parse().map_err(|_| bad())?;
    if n == 0 || l >= n || j.is_integer() || (j.twice() - 2 * l as i32).abs() != 1 {
        return Err(bad());
    }
    Ok((n, l, j))
}

/// Fine-structure g-factor projecting V = L − 2((Z−1)/Z)S onto J.
pub fn g_fs(z: u32, l: HalfInt, s: HalfInt, j: HalfInt) -> Result<f64> {
    if z < 1 {
        return domain("Z must be at least 1");
    }
    if j.twice <= 0 || !triangle(l, s, j) {
        return domain(format!("invalid (l, s, j) = ({l}, {s}, {j})"));
    }
    let z = f64::from(z);
    Ok((1.0 / (2.0 * z)) * ((2.0 - z) + (3.0 * z - 2.0) * (l.casimir() - s.casimir()) / j.casimir()))
}

/// Hyperfine g-factor projecting J onto F. `None` for the projection-free f = 0 level.
pub fn g_hfs(j: HalfInt, i: HalfInt, f: HalfInt) -> Result<Option<f64>> {
    if !triangle(j, i, f) {
        return domain(format!("invalid (j, i, f) = ({j}, {i}, {f})"));
    }
    if f.twice == 0 {
        return Ok(None);
    }
    Ok(Some(0.5 * (1.0 + (j.casimir() - i.casimir()) / f.casimir())))
}

/// ⟨cos²ϑ⟩ in the fine-structure state |j, m_j⟩.
pub fn cos2_fs(j: HalfInt, m_j: HalfInt) -> Result<f64> {
    if j.twice <= 0 || m_j.abs() > j || !m_j.congruent(j) {
        return domain(format!("m_j = {m_j} invalid for j = {j}"));
    }
    let jj = j.casimir();
    let m = m_j.value();
    Ok((jj - m * m) / (2.0 * jj))
}

/// ⟨cos²ϑ⟩ in the hyperfine state |j, i, f, m_f⟩ as a CG-weighted sum over m_i.
pub fn cos2_hfs(j: HalfInt, i: HalfInt, f: HalfInt, m_f: HalfInt) -> Result<f64> {
    if j.twice <= 0 || i.twice < 0 || !triangle(j, i, f) {
        return domain(format!("invalid (j, i, f) = ({j}, {i}, {f})"));
    }
    if m_f.abs() > f || !m_f.congruent(f) {
        return domain(format!("m_f = {m_f} invalid for f = {f}"));
    }
    let mut acc = 0.0;
    for m_i in i.projections() {
        let m_j = m_f - m_i;
        if m_j.abs() > j {
            continue;
        }
        let c = cg(j, i, m_j, m_i, f, m_f)?;
        acc += c * c * cos2_fs(j, m_j)?;
    }
    Ok(acc)
}

/// Spin-1/2 nucleus closed form of [`cos2_hfs`]; `upper` selects f = j + 1/2.
pub fn cos2_hfs_half(j: HalfInt, upper: bool, m_f: HalfInt) -> f64 {
    let jj = j.casimir();
    let m2 = m_f.value() * m_f.value();
    let sign = if upper { 1.0 } else { -1.0 };
    0.5 - (1.0 + 4.0 * m2) / (8.0 * jj) + sign * m2 / (jj * (2.0 * j.value() + 1.0))
}

/// ⟨j1,½; m∓½, ±½ | j, m⟩ for j = l ± ½, written directly for the spin-1/2 case.
pub fn cg_half(l: HalfInt, j: HalfInt, m: HalfInt, m_s: HalfInt) -> f64 {
    let ratio = m.value() / (2.0 * l.value() + 1.0);
    let up = m_s.twice > 0;
    if j == l + HalfInt::HALF {
        if up {
            (0.5 + ratio).max(0.0).sqrt()
        } else {
            (0.5 - ratio).max(0.0).sqrt()
        }
    } else if up {
        -(0.5 - ratio).max(0.0).sqrt()
    } else {
        (0.5 + ratio).max(0.0).sqrt()
    }
}

impl PartialOrd<i32> for HalfInt {
    fn partial_cmp(&self, other: &i32) -> Option<Ordering> {
        self.twice.partial_cmp(&(2 * other))
    }
}

impl PartialEq<i32> for HalfInt {
    fn eq(&self, other: &i32) -> bool {
        self.twice == 2 * other
    }
}
