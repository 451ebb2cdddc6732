//! Independent oracles shared by the integration suites. Nothing here calls
//! the angular engine: coupling coefficients come from diagonalizing J² on
//! product states, and angular averages from direct quadrature.
#![allow(dead_code)]

use std::collections::BTreeMap;

use ionti::angular::{cg, cos2_fs, cos2_hfs, cos2_hfs_half, g_fs, g_hfs, HalfInt};

pub fn h(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn ladder(jt: i32, mt: i32, up: bool) -> f64 {
    let (j, m) = (f64::from(jt) / 2.0, f64::from(mt) / 2.0);
    let mm = if up { m + 1.0 } else { m - 1.0 };
    (j * (j + 1.0) - m * mm).max(0.0).sqrt()
}

/// Coupling coefficients ⟨j1 m1; j2 m2 | J M⟩ keyed by (2J, 2M, 2m1), each
/// (J, M) column fixed only up to sign. Built from the eigenvectors of J²
/// inside every fixed-M block of the product basis.
pub struct Coupling {
    pub j1t: i32,
    pub j2t: i32,
    pub table: BTreeMap<(i32, i32, i32), f64>,
}

impl Coupling {
    pub fn new(j1t: i32, j2t: i32) -> Self {
        let mut table = BTreeMap::new();
        let (j1, j2) = (f64::from(j1t) / 2.0, f64::from(j2t) / 2.0);
        for mt in (-(j1t + j2t)..=(j1t + j2t)).step_by(2) {
            let basis: Vec<i32> = (-j1t..=j1t).step_by(2).filter(|m1| (mt - m1).abs() <= j2t).collect();
            let d = basis.len();
            let mut jsq = nalgebra::DMatrix::<f64>::zeros(d, d);
            for (a, &m1) in basis.iter().enumerate() {
                let m2 = mt - m1;
                let (x1, x2) = (f64::from(m1) / 2.0, f64::from(m2) / 2.0);
                jsq[(a, a)] = j1 * (j1 + 1.0) + j2 * (j2 + 1.0) + 2.0 * x1 * x2;
                for (b, &n1) in basis.iter().enumerate() {
                    // J1+ J2− couples m1 → m1+1, and its transpose the reverse.
                    if n1 == m1 + 2 {
                        let v = ladder(j1t, m1, true) * ladder(j2t, m2, false);
                        jsq[(b, a)] += v;
                        jsq[(a, b)] += v;
                    }
                }
            }
            let eig = jsq.symmetric_eigen();
            for k in 0..d {
                let lam = eig.eigenvalues[k];
                let jt = ((-1.0 + (1.0 + 4.0 * lam).sqrt()).round()) as i32;
                for (a, &m1) in basis.iter().enumerate() {
                    table.insert((jt, mt, m1), eig.eigenvectors[(a, k)]);
                }
            }
        }
        Coupling { j1t, j2t, table }
    }

    pub fn get(&self, jt: i32, mt: i32, m1t: i32) -> f64 {
        self.table.get(&(jt, mt, m1t)).copied().unwrap_or(0.0)
    }

    /// Squared coefficient, free of the sign ambiguity.
    pub fn sq(&self, jt: i32, mt: i32, m1t: i32) -> f64 {
        self.get(jt, mt, m1t).powi(2)
    }
}

/// Associated Legendre P_l^m(x) up to normalization, by the standard recurrence.
fn legendre(l: i32, m: i32, x: f64) -> f64 {
    let m = m.abs();
    let mut pmm = 1.0;
    let s = (1.0 - x * x).max(0.0).sqrt();
    for k in 0..m {
        pmm *= -(2.0 * f64::from(k) + 1.0) * s;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2.0 * f64::from(m) + 1.0) * pmm;
    let mut pm0 = pmm;
    for ll in (m + 2)..=l {
        let next = (x * (2.0 * f64::from(ll) - 1.0) * pm1 - f64::from(ll + m - 1) * pm0) / f64::from(ll - m);
        pm0 = pm1;
        pm1 = next;
    }
    pm1
}

/// ⟨l m| cos²ϑ |l m⟩ by Gauss-Legendre quadrature over cos ϑ.
pub fn cos2_lm(l: i32, m: i32) -> f64 {
    let (nodes, weights) = gauss_legendre(24);
    let (mut num, mut den) = (0.0, 0.0);
    for (x, w) in nodes.iter().zip(&weights) {
        let p = legendre(l, m, *x).powi(2);
        num += w * x * x * p;
        den += w * p;
    }
    num / den
}

/// Nodes and weights on [−1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::with_capacity(n);
    let mut ws = Vec::with_capacity(n);
    let nf = n as f64;
    for k in 0..n {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        xs.push(x);
        ws.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (xs, ws)
}

/// ⟨cos²ϑ⟩ in |l, ½, j, m_j⟩ from the spinor decomposition.
pub fn cos2_fs_oracle(l: i32, jt: i32, mjt: i32) -> f64 {
    let cp = Coupling::new(2 * l, 1);
    (-2 * l..=2 * l)
        .step_by(2)
        .filter(|mlt| (mjt - mlt).abs() == 1)
        .map(|mlt| cp.sq(jt, mjt, mlt) * cos2_lm(l, mlt / 2))
        .sum()
}

/// ⟨cos²ϑ⟩ in |(l ½) j, i; f, m_f⟩ by summing over every product state.
pub fn cos2_hfs_oracle(l: i32, jt: i32, it: i32, ft: i32, mft: i32) -> f64 {
    let ji = Coupling::new(jt, it);
    let mut acc = 0.0;
    for mjt in (-jt..=jt).step_by(2) {
        let w = ji.sq(ft, mft, mjt);
        if w != 0.0 {
            acc += w * cos2_fs_oracle(l, jt, mjt);
        }
    }
    acc
}

/// ⟨j m_j| L_z − 2((Z−1)/Z) S_z |j m_j⟩ over the spinor decomposition.
pub fn vz_diag(z: u32, l: i32, jt: i32, mjt: i32) -> f64 {
    let cp = Coupling::new(2 * l, 1);
    let zf = f64::from(z);
    (-2 * l..=2 * l)
        .step_by(2)
        .filter(|mlt| (mjt - mlt).abs() == 1)
        .map(|mlt| {
            let mst = mjt - mlt;
            cp.sq(jt, mjt, mlt) * (f64::from(mlt) / 2.0 - 2.0 * (zf - 1.0) / zf * f64::from(mst) / 2.0)
        })
        .sum()
}

/// ⟨f m_f| J_z |f m_f⟩ over the (j, i) product basis.
pub fn jz_diag(jt: i32, it: i32, ft: i32, mft: i32) -> f64 {
    let cp = Coupling::new(jt, it);
    (-jt..=jt)
        .step_by(2)
        .map(|mjt| cp.sq(ft, mft, mjt) * f64::from(mjt) / 2.0)
        .sum()
}

/// Largest |Σ C C' − δ| over every pair of columns, j1, j2 ≤ 7/2.
pub fn max_orthonormality_dev() -> f64 {
    let mut worst: f64 = 0.0;
    for j1t in 0..=7 {
        for j2t in 0..=7 {
            let (j1, j2) = (h(j1t), h(j2t));
            let jts: Vec<i32> = ((j1t - j2t).abs()..=j1t + j2t).step_by(2).collect();
            for mt in (-(j1t + j2t)..=(j1t + j2t)).step_by(2) {
                for &ja in &jts {
                    for &jb in &jts {
                        if mt.abs() > ja || mt.abs() > jb {
                            continue;
                        }
                        let mut s = 0.0;
                        for m1t in (-j1t..=j1t).step_by(2) {
                            let m2t = mt - m1t;
                            if m2t.abs() > j2t {
                                continue;
                            }
                            let a = cg(j1, j2, h(m1t), h(m2t), h(ja), h(mt)).unwrap();
                            let b = cg(j1, j2, h(m1t), h(m2t), h(jb), h(mt)).unwrap();
                            s += a * b;
                        }
                        let target = if ja == jb { 1.0 } else { 0.0 };
                        worst = worst.max((s - target).abs());
                    }
                }
            }
        }
    }
    worst
}

/// Largest elementwise gap between the engine and the diagonalization oracle
/// after aligning each column's sign, j1, j2 ≤ 7/2.
pub fn max_cg_vs_diagonalization() -> f64 {
    let mut worst: f64 = 0.0;
    for j1t in 0..=7 {
        for j2t in 0..=7 {
            let oracle = Coupling::new(j1t, j2t);
            for jt in ((j1t - j2t).abs()..=j1t + j2t).step_by(2) {
                for mt in (-jt..=jt).step_by(2) {
                    let m1s: Vec<i32> = (-j1t..=j1t).step_by(2).filter(|m1| (mt - m1).abs() <= j2t).collect();
                    let lib: Vec<f64> = m1s
                        .iter()
                        .map(|&m1| cg(h(j1t), h(j2t), h(m1), h(mt - m1), h(jt), h(mt)).unwrap())
                        .collect();
                    let orc: Vec<f64> = m1s.iter().map(|&m1| oracle.get(jt, mt, m1)).collect();
                    let dot: f64 = lib.iter().zip(&orc).map(|(a, b)| a * b).sum();
                    let sign = dot.signum();
                    for (a, b) in lib.iter().zip(&orc) {
                        worst = worst.max((a - sign * b).abs());
                    }
                }
            }
        }
    }
    worst
}

/// Largest gap between cos2_hfs and the spinor-sum oracle over both
/// j = l ± ½ branches with j ≤ 7/2, i ≤ 7/2, and between cos2_hfs and its
/// spin-½ closed form.
pub fn max_cos2_dev() -> f64 {
    let mut worst: f64 = 0.0;
    for (l, jt) in (0..=4)
        .flat_map(|l: i32| [(l, 2 * l - 1), (l, 2 * l + 1)])
        .filter(|&(_, jt)| jt > 0 && jt <= 7)
    {
        for mjt in (-jt..=jt).step_by(2) {
            worst = worst.max((cos2_fs(h(jt), h(mjt)).unwrap() - cos2_fs_oracle(l, jt, mjt)).abs());
        }
        for it in 0..=7 {
            for ft in ((jt - it).abs()..=jt + it).step_by(2) {
                for mft in (-ft..=ft).step_by(2) {
                    let lib = cos2_hfs(h(jt), h(it), h(ft), h(mft)).unwrap();
                    worst = worst.max((lib - cos2_hfs_oracle(l, jt, it, ft, mft)).abs());
                }
            }
        }
    }
    for jt in (1..=7).step_by(2) {
        for (ft, upper) in [(jt - 1, false), (jt + 1, true)] {
            for mft in (-ft..=ft).step_by(2) {
                let lib = cos2_hfs(h(jt), h(1), h(ft), h(mft)).unwrap();
                worst = worst.max((lib - cos2_hfs_half(h(jt), upper, h(mft))).abs());
            }
        }
    }
    worst
}

/// Largest gap between the V_z and J_z projections and g_fs·m_j, g_hfs·m_f.
pub fn max_wigner_eckart_dev() -> f64 {
    let mut worst: f64 = 0.0;
    for z in [1, 2, 3, 26, 49, 92] {
        for l in 0..=3 {
            for jt in [2 * l - 1, 2 * l + 1] {
                if jt <= 0 || jt > 7 {
                    continue;
                }
                let g = g_fs(z, h(2 * l), h(1), h(jt)).unwrap();
                for mjt in (-jt..=jt).step_by(2) {
                    worst = worst.max((vz_diag(z, l, jt, mjt) - g * f64::from(mjt) / 2.0).abs());
                }
            }
        }
    }
    for jt in 1..=7i32 {
        for it in 0..=7 {
            for ft in ((jt - it).abs()..=jt + it).step_by(2) {
                let Some(g) = g_hfs(h(jt), h(it), h(ft)).unwrap() else {
                    continue;
                };
                for mft in (-ft..=ft).step_by(2) {
                    worst = worst.max((jz_diag(jt, it, ft, mft) - g * f64::from(mft) / 2.0).abs());
                }
            }
        }
    }
    worst
}
