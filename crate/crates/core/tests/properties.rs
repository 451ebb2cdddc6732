use std::collections::BTreeSet;

use ionti::angular::{HalfInt, QuantumState};
use ionti::casimir_polder::{cp_extrema, cp_potential, cp_profile, cp_scan, stretched_2p32, Regime};
use ionti::constants::{ConstantSet, Mode, Unit};
use ionti::data::IonRegistry;
use ionti::material::MaterialConfig;
use ionti::report::{extrapolate_topological, run_registry, Ctx};
use ionti::rydberg::{closed_ratios, curve_residual, region_scan, Case, Nucleus, RegionScanRequest};
use ionti::shifts::{delta_u2, delta_v_theta, IonSpecies};
use proptest::prelude::*;

fn ions() -> IonRegistry {
    IonRegistry::builtin()
}

/// (n, l, 2j, 2f, 2m_f) for an ion with nuclear spin `it`/2.
fn state_strategy(it: i32) -> impl Strategy<Value = (u32, u32, i32, i32, i32)> {
    (2u32..=25)
        .prop_flat_map(|n| (Just(n), 0..n))
        .prop_flat_map(|(n, l)| {
            let js: Vec<i32> = [2 * l as i32 - 1, 2 * l as i32 + 1]
                .into_iter()
                .filter(|&j| j > 0)
                .collect();
            (Just(n), Just(l), proptest::sample::select(js))
        })
        .prop_flat_map(move |(n, l, jt)| {
            let fs: Vec<i32> = ((jt - it).abs()..=jt + it).step_by(2).collect();
            (Just(n), Just(l), Just(jt), proptest::sample::select(fs))
        })
        .prop_flat_map(|(n, l, jt, ft)| {
            (
                Just(n),
                Just(l),
                Just(jt),
                Just(ft),
                (0..=ft).prop_map(move |k| 2 * k - ft),
            )
        })
}

fn ion_strategy() -> impl Strategy<Value = IonSpecies> {
    let reg = ions();
    let all: Vec<IonSpecies> = reg.labels().iter().map(|l| reg.get(l).unwrap().clone()).collect();
    proptest::sample::select(all)
}

fn cfg_strategy() -> impl Strategy<Value = MaterialConfig> {
    (1.0f64..6.0, 1.0f64..20.0, 0.5f64..2.0, 0.5f64..2.0, -15i32..=15)
        .prop_map(|(e1, e2, m1, m2, k)| MaterialConfig::new(e1, m1, e2, m2, f64::from(2 * k + 1)).unwrap())
}

fn make_state(ion: &IonSpecies, s: (u32, u32, i32, i32, i32)) -> QuantumState {
    let (n, l, jt, ft, mft) = s;
    QuantumState::new(
        n,
        l,
        HalfInt::from_twice(jt),
        ion.i,
        HalfInt::from_twice(ft),
        HalfInt::from_twice(mft),
    )
    .unwrap()
}

fn ion_and_state() -> impl Strategy<Value = (IonSpecies, QuantumState)> {
    ion_strategy().prop_flat_map(|ion| {
        let it = ion.i.twice();
        (Just(ion), state_strategy(it)).prop_map(|(ion, s)| {
            let st = make_state(&ion, s);
            (ion, st)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn dv_is_odd_in_m_f_and_theta((ion, st) in ion_and_state(), cfg in cfg_strategy(), b in 0.05f64..10.0) {
        let c = ConstantSet::paper();
        let v = delta_v_theta(&st, &ion, &cfg, b, &c).unwrap();
        let flipped = st.with_m_f(-st.m_f).unwrap();
        let v_m = delta_v_theta(&flipped, &ion, &cfg, b, &c).unwrap();
        prop_assert_eq!(v, -v_m);
        let v_t = delta_v_theta(&st, &ion, &cfg.with_theta(-cfg.theta_over_pi), b, &c).unwrap();
        prop_assert_eq!(v, -v_t);
    }

    #[test]
    fn dv_sums_to_zero_over_a_multiplet((ion, st) in ion_and_state(), cfg in cfg_strategy(), b in 0.05f64..10.0) {
        let c = ConstantSet::paper();
        let vals: Vec<f64> = st.f.projections()
            .map(|m| delta_v_theta(&st.with_m_f(m).unwrap(), &ion, &cfg, b, &c).unwrap())
            .collect();
        // Pairing m_f with −m_f cancels exactly.
        let k = vals.len();
        let paired: f64 = (0..k / 2).map(|i| vals[i] + vals[k - 1 - i]).sum::<f64>() + if k % 2 == 1 { vals[k / 2] } else { 0.0 };
        prop_assert_eq!(paired, 0.0);
        let scale: f64 = vals.iter().map(|v| v.abs()).sum();
        prop_assert!(vals.iter().sum::<f64>().abs() <= 1e-15 * scale);
    }

    #[test]
    fn du2_is_even_in_m_f((ion, st) in ion_and_state(), cfg in cfg_strategy(), b in 0.05f64..10.0) {
        let c = ConstantSet::paper();
        let u = delta_u2(&st, &ion, &cfg, b, &c).unwrap();
        let u_m = delta_u2(&st.with_m_f(-st.m_f).unwrap(), &ion, &cfg, b, &c).unwrap();
        // Σ = Z − (3Z−4)⟨cos²⟩ can cancel, so measure against its two terms.
        let z = f64::from(ion.z);
        let r2 = ionti::radial::r2_expect(st.n, st.l_int()).unwrap();
        let scale = cfg.kappa(&c).abs() * c.xi(b).unwrap().powi(3) / 8.0 * (cfg.eps1 / z).powi(2) * c.e_g * r2 * (z + (3.0 * z - 4.0).abs());
        prop_assert!((u - u_m).abs() <= 1e-13 * scale);
    }

    #[test]
    fn distance_power_laws((ion, st) in ion_and_state(), cfg in cfg_strategy(), b in 0.05f64..10.0, k in 1.1f64..50.0) {
        let c = ConstantSet::paper();
        let slope = |f: &dyn Fn(f64) -> f64| (f(b * k) / f(b)).ln() / k.ln();
        let dv = |bb: f64| delta_v_theta(&st, &ion, &cfg, bb, &c).unwrap();
        let du = |bb: f64| delta_u2(&st, &ion, &cfg, bb, &c).unwrap();
        if dv(b) != 0.0 {
            prop_assert!((slope(&dv) + 2.0).abs() < 1e-9);
        }
        if du(b) != 0.0 {
            prop_assert!((slope(&du) + 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn trivial_matched_media_give_no_shift((ion, st) in ion_and_state(), eps in 1.0f64..20.0, b in 0.05f64..10.0) {
        let c = ConstantSet::paper();
        let cfg = MaterialConfig::matched(eps, 0.0).unwrap();
        prop_assert_eq!(delta_u2(&st, &ion, &cfg, b, &c).unwrap(), 0.0);
        prop_assert_eq!(delta_v_theta(&st, &ion, &cfg, b, &c).unwrap(), 0.0);
    }

    #[test]
    fn unit_round_trips(x in -1e3f64..1e3, precise in any::<bool>()) {
        let c = if precise { ConstantSet::precise() } else { ConstantSet::paper() };
        let units = [Unit::EV, Unit::Hz, Unit::KHz, Unit::MHz];
        for a in units {
            for b in units {
                let back = c.convert(c.convert(x, a, b), b, a);
                prop_assert!((back - x).abs() <= 1e-12 * x.abs());
            }
        }
        prop_assert!((c.hz_to_ev(c.ev_to_hz(x)) - x).abs() <= 1e-12 * x.abs());
        prop_assert!((c.convert_str(x, "kHz", "Hz").unwrap() - 1e3 * x).abs() <= 1e-12 * x.abs());
    }

    #[test]
    fn cp_sign_follows_m_f_times_theta(eps2 in 1.01f64..20.0, k in 0i32..12, neg in any::<bool>()) {
        let c = ConstantSet::paper();
        let h = ions().get("H").unwrap().clone();
        let tp = f64::from(2 * k + 1) * if neg { -1.0 } else { 1.0 };
        let cfg = MaterialConfig::vacuum_ti(eps2, tp).unwrap();
        let st = stretched_2p32(tp).unwrap();
        let prof = cp_profile(&st, &h, &cfg, &c).unwrap();
        prop_assert_eq!(prof.regime, Regime::RepulsiveTail);
        let e = cp_extrema(&prof, &c).unwrap();
        prop_assert!((e.y_max - 1.5 * e.y0).abs() <= 1e-10 * e.y0);
        let scale = e.v_max.abs();
        prop_assert!(cp_potential(e.y0, &prof, &c).unwrap().abs() <= 1e-10 * scale);
        prop_assert!((cp_potential(e.y_max, &prof, &c).unwrap() - e.v_max).abs() <= 1e-10 * scale);
        prop_assert!(e.v_max > 0.0);
        // The maximum is a stationary point.
        let step = 1e-3 * e.y_max;
        let d = (cp_potential(e.y_max + step, &prof, &c).unwrap() - cp_potential(e.y_max - step, &prof, &c).unwrap()) / (2.0 * step);
        prop_assert!(d.abs() * e.y_max <= 1e-5 * scale);

        let same = st.with_m_f(-st.m_f).unwrap();
        let prof2 = cp_profile(&same, &h, &cfg, &c).unwrap();
        prop_assert_eq!(prof2.regime, Regime::AttractiveEverywhere);
        prop_assert!(cp_extrema(&prof2, &c).is_err());
        for y in [1e2, 1e4, 1e6] {
            prop_assert!(cp_potential(y, &prof2, &c).unwrap() < 0.0);
        }
    }

    #[test]
    fn ratio_power_laws(z in 1u32..=100, n in 2u32..60, b in 0.1f64..5.0, k in 1.1f64..4.0, matched in any::<bool>()) {
        let c = ConstantSet::paper();
        let (case, cfg) = if matched {
            (Case::Matched, MaterialConfig::matched(4.0, 11.0).unwrap())
        } else {
            (Case::Vacuum, MaterialConfig::vacuum_ti(4.0, 11.0).unwrap())
        };
        let nuc = Nucleus::of(ions().get("In113").unwrap());
        let r = |nn: f64, bb: f64| closed_ratios(case, nuc, z, nn, &cfg, bb, &c).unwrap();
        let nf = f64::from(n);
        let (t0, u0) = r(nf, b);
        let (tb, ub) = r(nf, b * k);
        prop_assert!(((tb / t0).ln() / k.ln() + 2.0).abs() < 1e-9);
        prop_assert!(((ub / u0).ln() / k.ln() + 3.0).abs() < 1e-9);
        let (tn, un) = r(nf * k, b);
        prop_assert!(((tn / t0).ln() / k.ln() - 7.0).abs() < 1e-9);
        prop_assert!(((un / u0).ln() / k.ln() - 10.0).abs() < 1e-9);
    }

    #[test]
    fn fit_ignores_sample_order(
        pts in proptest::collection::vec((-10.0f64..10.0, -5.0f64..5.0), 3..20),
        seed in any::<u64>(),
    ) {
        let pts: Vec<(f64, f64)> = pts.into_iter().filter(|(m, _)| m.abs() > 1e-3).collect();
        let fit = extrapolate_topological(&pts);
        let mut shuffled = pts.clone();
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let again = extrapolate_topological(&shuffled);
        match (fit, again) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.a, b.a);
                prop_assert_eq!(a.eps_topo, b.eps_topo);
                prop_assert_eq!(a.residual, b.residual);
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "order changed the outcome"),
        }
    }
}

#[test]
fn region_curves_sit_on_their_boundaries() {
    let c = ConstantSet::paper();
    let nuc = Nucleus::of(ions().get("In113").unwrap());
    for (case, material) in [
        (Case::Matched, MaterialConfig::matched(4.0, 11.0).unwrap()),
        (Case::Vacuum, MaterialConfig::vacuum_ti(4.0, 11.0).unwrap()),
    ] {
        let req = RegionScanRequest {
            z_range: (1, 100),
            n_range: (1, 100),
            b: 0.265,
            case,
            material,
            nucleus: nuc,
        };
        let data = region_scan(&req, &c).unwrap();
        assert!(!data.curves.is_empty());
        let names: BTreeSet<&str> = data.curves.iter().map(|s| s.curve.as_str()).collect();
        for want in [
            "retardation",
            "perturbative",
            "shift_1e5",
            "shift_1e6",
            "shift_1e7",
            "dominance",
        ] {
            assert!(names.contains(want), "{case:?} missing {want}");
        }
        for s in &data.curves {
            let r = curve_residual(s, &req, &c).unwrap();
            assert!(r.abs() <= 1e-6, "{case:?} {} at Z={}: residual {r:e}", s.curve, s.z);
        }
    }
}

#[test]
fn retardation_curve_scales_as_z_two_thirds() {
    let c = ConstantSet::paper();
    let nuc = Nucleus::of(ions().get("In113").unwrap());
    let material = MaterialConfig::matched(4.0, 11.0).unwrap();
    let req = RegionScanRequest {
        z_range: (1, 100),
        n_range: (1, 100),
        b: 0.265,
        case: Case::Matched,
        material,
        nucleus: nuc,
    };
    let data = region_scan(&req, &c).unwrap();
    let k = ionti::rydberg::retardation_boundary_prefactor(0.265, 4.0);
    for s in data.curves.iter().filter(|s| s.curve == "retardation") {
        assert!(
            (s.n - k * s.z.powf(2.0 / 3.0)).abs() <= 1e-6 * s.n,
            "Z={} n={}",
            s.z,
            s.n
        );
    }
}

#[test]
fn paper_and_precise_constants_agree_within_a_percent() {
    let none = BTreeSet::new();
    let paper = run_registry(&Ctx::builtin(Mode::Paper), &none, None);
    let precise = run_registry(&Ctx::builtin(Mode::Precise), &none, None);
    let mut compared = 0;
    for (a, b) in paper.entries.iter().zip(&precise.entries) {
        assert_eq!(a.id, b.id);
        if let (Some(x), Some(y)) = (a.recomputed, b.recomputed) {
            if x == y {
                compared += 1;
                continue;
            }
            let rel = ((x - y) / x).abs();
            assert!(rel < 0.01, "{}: paper {x} vs precise {y}", a.id);
            compared += 1;
        }
    }
    assert!(compared > 40);
}

#[test]
fn cp_scan_monotonicity() {
    let c = ConstantSet::paper();
    let h = ions().get("H").unwrap().clone();
    let st = stretched_2p32(1.0).unwrap();
    let eps2 = [1.1, 1.3, 2.0, 4.0, 8.0];
    let theta = [1.0, 3.0, 7.0, 11.0, 15.0];
    let rows = cp_scan(&st, &h, 1.0, &eps2, &theta, &c).unwrap();
    let at = |e: usize, t: usize| rows[e * theta.len() + t].b_max_um.unwrap();
    for (t, th) in theta.iter().enumerate() {
        for e in 1..eps2.len() {
            assert!(at(e, t) > at(e - 1, t), "b_max not increasing in eps2 at theta={th}");
        }
    }
    for (e, ep) in eps2.iter().enumerate() {
        for t in 1..theta.len() {
            assert!(at(e, t) < at(e, t - 1), "b_max not decreasing in theta at eps2={ep}");
        }
    }
}
