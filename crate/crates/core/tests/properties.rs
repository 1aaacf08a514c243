use std::f64::consts::PI;

use casimir_core::forces::{
    casimir_energy, force_field_bc, force_via_action_fd, mode_logdet, mode_logdet_neumann,
    vacuum_force_analytic, ForceQuery,
};
use casimir_core::medium::{FieldKind, Medium, SusceptibilityModel, TabulatedCoupling};
use casimir_core::propagators::{g_phiphi, gap_kernel, MomentumFrequencyPoint};
use casimir_core::quadrature::{
    inner_mode_integral, integrate_1d, polylog, Domain, QuadratureSpec,
};
use proptest::prelude::*;

fn lorentz_strategy() -> impl Strategy<Value = SusceptibilityModel> {
    (0.1f64..3.0, 0.1f64..3.0, 0.0f64..2.0).prop_map(|(omega_p, omega_0, gamma)| {
        SusceptibilityModel::Lorentz {
            omega_p,
            omega_0,
            gamma,
        }
    })
}

fn dispersive_strategy() -> impl Strategy<Value = SusceptibilityModel> {
    prop_oneof![
        lorentz_strategy(),
        (0.1f64..3.0, 0.05f64..2.0)
            .prop_map(|(omega_p, gamma)| SusceptibilityModel::Drude { omega_p, gamma }),
        (0.1f64..3.0, 0.1f64..3.0).prop_map(|(omega_p, omega_0)| {
            SusceptibilityModel::SharpResonance { omega_p, omega_0 }
        }),
        proptest::collection::vec(0.0f64..2.0, 3..12).prop_map(|g| {
            let omega = (1..=g.len()).map(|i| 0.3 * i as f64).collect();
            SusceptibilityModel::TabulatedCoupling(TabulatedCoupling::new(omega, g).unwrap())
        }),
    ]
}

fn lossy_strategy() -> impl Strategy<Value = SusceptibilityModel> {
    prop_oneof![
        (0.1f64..3.0, 0.1f64..3.0, 0.01f64..2.0).prop_map(|(omega_p, omega_0, gamma)| {
            SusceptibilityModel::Lorentz {
                omega_p,
                omega_0,
                gamma,
            }
        }),
        (0.1f64..3.0, 0.05f64..2.0)
            .prop_map(|(omega_p, gamma)| SusceptibilityModel::Drude { omega_p, gamma }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chi_bar_positive_and_non_increasing(model in dispersive_strategy(), a in 1e-3f64..50.0, b in 1e-3f64..50.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let x = model.chi_bar(lo).unwrap();
        let y = model.chi_bar(hi).unwrap();
        prop_assert!(x.is_finite() && y.is_finite());
        prop_assert!(y >= 0.0);
        prop_assert!(y <= x * (1.0 + 1e-14));
    }

    #[test]
    fn chi_bar_decays_at_high_frequency(model in dispersive_strategy()) {
        let xi_big = 1e3 * model.max_frequency();
        let reference = match model {
            // Drude diverges at zero frequency; any finite reference is below it.
            SusceptibilityModel::Drude { .. } => model.chi_bar(1e-6).unwrap(),
            _ => model.chi_bar(0.0).unwrap(),
        };
        prop_assert!(model.chi_bar(xi_big).unwrap() <= 1e-3 * reference);
    }

    #[test]
    fn kk_matches_closed_form(model in lossy_strategy(), exponent in -2.0f64..2.0) {
        let xi = 10f64.powf(exponent);
        let kk = model.kk_imaginary_axis(xi, &QuadratureSpec::default().with_rel_tol(1e-10)).unwrap();
        let exact = model.chi_bar(xi).unwrap();
        prop_assert!(((kk.value - exact) / exact).abs() <= 1e-6, "{} vs {}", kk.value, exact);
    }

    #[test]
    fn refractive_index_non_increasing(model in dispersive_strategy(), a in 1e-3f64..50.0, b in 1e-3f64..50.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let m = Medium::dielectric(model).unwrap();
        let n_lo = m.refractive_index(FieldKind::Scalar, lo).unwrap();
        let n_hi = m.refractive_index(FieldKind::Scalar, hi).unwrap();
        prop_assert!(n_hi <= n_lo * (1.0 + 1e-15));
        prop_assert!(n_hi >= 1.0);
    }

    #[test]
    fn sharp_resonance_is_lossless_lorentz_limit(omega_p in 0.1f64..3.0, omega_0 in 0.1f64..3.0, xi in 0.1f64..100.0) {
        let sharp = SusceptibilityModel::SharpResonance { omega_p, omega_0 }.chi_bar(xi).unwrap();
        let narrow = SusceptibilityModel::Lorentz { omega_p, omega_0, gamma: 1e-6 }.chi_bar(xi).unwrap();
        prop_assert!(((narrow - sharp) / sharp).abs() <= 1e-4);
    }

    #[test]
    fn euclidean_propagator_positive_and_monotone(
        model in dispersive_strategy(),
        k in 0.0f64..10.0, dk in 1e-3f64..5.0,
        xi in 1e-3f64..10.0, dxi in 1e-3f64..5.0,
    ) {
        let m = Medium::dielectric(model).unwrap();
        let at = |k: f64, xi: f64| g_phiphi(&m, FieldKind::Scalar, MomentumFrequencyPoint::euclidean(k, xi), 0.0).unwrap().value;
        let base = at(k, xi);
        prop_assert_eq!(base.im, 0.0);
        prop_assert!(base.re > 0.0);
        prop_assert!(at(k + dk, xi).re < base.re);
        prop_assert!(at(k, xi + dxi).re < base.re);
    }

    #[test]
    fn scalar_and_em_agree_without_magnetism(model in dispersive_strategy(), k in 0.0f64..5.0, xi in 1e-2f64..5.0) {
        let m = Medium::dielectric(model).unwrap();
        let p = MomentumFrequencyPoint::euclidean(k, xi);
        prop_assert_eq!(
            g_phiphi(&m, FieldKind::Scalar, p, 0.0).unwrap().value,
            g_phiphi(&m, FieldKind::Em, p, 0.0).unwrap().value
        );
    }

    #[test]
    fn gap_kernel_exponential_in_separation(
        model in dispersive_strategy(),
        p0 in 1e-3f64..5.0, q in 0.0f64..5.0,
        h1 in 0.0f64..3.0, h2 in 0.0f64..3.0,
    ) {
        let m = Medium::dielectric(model).unwrap();
        let at_zero = gap_kernel(&m, FieldKind::Scalar, p0, q, 0.0).unwrap();
        prop_assert_eq!(at_zero.value, 1.0 / (2.0 * at_zero.energy));
        let a = gap_kernel(&m, FieldKind::Scalar, p0, q, h1).unwrap();
        let b = gap_kernel(&m, FieldKind::Scalar, p0, q, h2).unwrap();
        prop_assert!(a.value > 0.0 && a.value <= at_zero.value);
        let expected = (-a.energy * (h1 - h2)).exp();
        prop_assert!((a.value / b.value - expected).abs() <= 1e-13 * expected);
    }

    #[test]
    fn mode_logdet_negative_and_bc_independent(energy in 1e-2f64..10.0, h in 1e-2f64..10.0) {
        let d = mode_logdet(energy, h).unwrap().value;
        let n = mode_logdet_neumann(energy, h).unwrap().value;
        prop_assert!(d < 0.0);
        prop_assert!((d - n).abs() <= 1e-14 * d.abs());
        prop_assert!(mode_logdet(energy, h + 1.0).unwrap().value > d);
    }

    #[test]
    fn polylog_tail_bound(s in 1u32..=3, y in 0.0f64..0.99, m in 1usize..60) {
        let partial: f64 = (1..=m).map(|k| y.powi(k as i32) / (k as f64).powi(s as i32)).sum();
        let bound = y.powi(m as i32 + 1) / ((m + 1) as f64).powi(s as i32) / (1.0 - y);
        let exact = polylog(s, y).unwrap();
        prop_assert!((exact - partial).abs() <= bound + 1e-15 * exact.abs().max(1.0));
    }

    #[test]
    fn converged_results_meet_tolerance(rate in 0.1f64..10.0, power in 0u32..4) {
        let spec = QuadratureSpec::default();
        let r = integrate_1d(|x| x.powi(power as i32) * (-rate * x).exp(), Domain::semi_infinite(0.0), &spec);
        let exact = (1..=power).map(f64::from).product::<f64>() / rate.powi(power as i32 + 1);
        prop_assert!(r.converged);
        prop_assert!(r.error_estimate <= spec.target(r.value));
        prop_assert!((r.value - exact).abs() <= 10.0 * spec.target(exact));
    }
}

#[test]
fn inner_integral_matches_quadrature() {
    let spec = QuadratureSpec::default()
        .with_rel_tol(1e-12)
        .with_abs_tol(1e-300);
    for a in [0.0, 0.1, 1.0, 5.0] {
        for h in [0.25, 1.0, 4.0] {
            let closed = inner_mode_integral(a, h).unwrap();
            let numeric = integrate_1d(
                |u| u * u / (2.0 * u * h).exp_m1(),
                Domain::semi_infinite(a),
                &spec,
            );
            assert!(
                ((closed - numeric.value) / closed).abs() <= 1e-8,
                "a={a} H={h}: {closed} vs {}",
                numeric.value
            );
        }
    }
}

#[test]
fn inner_integral_examples() {
    let spec = QuadratureSpec::default()
        .with_rel_tol(1e-12)
        .with_abs_tol(1e-300);
    let numeric = integrate_1d(|x| x * x / x.exp_m1(), Domain::semi_infinite(1.0), &spec).value;
    let closed = inner_mode_integral(1.0, 0.5).unwrap();
    assert!((closed - numeric).abs() < 1e-10);
    assert!((closed - 2.0502).abs() < 1e-4);
    let tail = integrate_1d(|x| x * x / x.exp_m1(), Domain::semi_infinite(20.0), &spec).value / 8.0;
    let closed = inner_mode_integral(10.0, 1.0).unwrap();
    assert!(closed > 0.0 && ((closed - tail) / tail).abs() < 1e-10);
}

#[test]
fn inner_integral_derivative() {
    for (a, h) in [(0.3, 0.5), (1.0, 1.0), (2.5, 0.7)] {
        let step = 1e-5;
        let fd = (inner_mode_integral(a + step, h).unwrap()
            - inner_mode_integral(a - step, h).unwrap())
            / (2.0 * step);
        let exact = -a * a / (2.0 * a * h).exp_m1();
        assert!(
            ((fd - exact) / exact).abs() <= 1e-5,
            "a={a}: {fd} vs {exact}"
        );
    }
}

#[test]
fn oracle_2d_matches_vacuum_reduction() {
    use casimir_core::quadrature::integrate_2d_oracle;
    let r = integrate_2d_oracle(
        |p0, q| {
            let e = (p0 * p0 + q * q).sqrt();
            q * e / (2.0 * e).exp_m1()
        },
        &QuadratureSpec::default(),
    );
    // 2 pi^2 |F_vac(H = 1)| = pi^4 / 240
    let expected = PI.powi(4) / 240.0;
    assert!(
        ((r.value - expected) / expected).abs() < 1e-8,
        "{} vs {expected}",
        r.value
    );
}

#[test]
fn tabulated_lorentz_matches_closed_form() {
    let (omega_p, omega_0, gamma) = (1.0f64, 1.0f64, 0.1f64);
    let coupling = |w: f64| {
        2.0 / PI * gamma * w * w * omega_p * omega_p
            / ((w * w - omega_0 * omega_0).powi(2) + (gamma * w).powi(2))
    };
    let grid: Vec<f64> = (1..=50_000).map(|i| 1e-3 * i as f64).collect();
    let table =
        SusceptibilityModel::TabulatedCoupling(TabulatedCoupling::from_fn(grid, coupling).unwrap());
    let exact = SusceptibilityModel::Lorentz {
        omega_p,
        omega_0,
        gamma,
    }
    .chi_bar(0.5)
    .unwrap();
    let got = table.chi_bar(0.5).unwrap();
    assert!(((got - exact) / exact).abs() <= 1e-4, "{got} vs {exact}");
}

const H_GRID: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

#[test]
fn vacuum_reproduced_on_grid() {
    for h in H_GRID {
        let r = force_field_bc(&ForceQuery::new(Medium::vacuum(), FieldKind::Scalar, h)).unwrap();
        assert!((r.force_per_area * 480.0 * h.powi(4) / (PI * PI) + 1.0).abs() <= 1e-6);
        let em = force_field_bc(&ForceQuery::new(Medium::vacuum(), FieldKind::Em, h)).unwrap();
        assert_eq!(em.force_per_area, 2.0 * r.force_per_area);
    }
}

#[test]
fn force_attractive_monotone_and_suppressed() {
    let media = [
        Medium::dielectric(SusceptibilityModel::Lorentz {
            omega_p: 1.0,
            omega_0: 1.0,
            gamma: 0.1,
        })
        .unwrap(),
        Medium::dielectric(SusceptibilityModel::Drude {
            omega_p: 2.0,
            gamma: 0.3,
        })
        .unwrap(),
        Medium::new(
            SusceptibilityModel::Constant { chi0: 0.5 },
            SusceptibilityModel::Lorentz {
                omega_p: 0.5,
                omega_0: 1.0,
                gamma: 0.2,
            },
        )
        .unwrap(),
    ];
    for m in media {
        for kind in [FieldKind::Scalar, FieldKind::Em] {
            let mut previous = f64::NEG_INFINITY;
            for h in [0.3, 0.5, 1.0, 2.0, 5.0] {
                let r = force_field_bc(&ForceQuery::new(m.clone(), kind, h)).unwrap();
                assert!(r.force_per_area < 0.0);
                assert!(r.force_per_area > previous);
                assert!(r.vacuum_ratio > 0.0 && r.vacuum_ratio <= 1.0);
                previous = r.force_per_area;
            }
        }
    }
}

#[test]
fn constant_media_scale_by_index() {
    for chi0 in [0.25, 1.25, 3.0, 15.0] {
        let m = Medium::dielectric(SusceptibilityModel::Constant { chi0 }).unwrap();
        let n = (1.0 + chi0).sqrt();
        for h in H_GRID {
            let f = force_field_bc(&ForceQuery::new(m.clone(), FieldKind::Scalar, h))
                .unwrap()
                .force_per_area;
            let vac = vacuum_force_analytic(FieldKind::Scalar, h);
            assert!(((f * n - vac) / vac).abs() <= 1e-8);
        }
    }
}

#[test]
fn action_route_agrees_to_second_order() {
    let spec = QuadratureSpec::default()
        .with_rel_tol(1e-13)
        .with_abs_tol(1e-18);
    for m in [
        Medium::vacuum(),
        Medium::dielectric(SusceptibilityModel::Lorentz {
            omega_p: 1.0,
            omega_0: 1.0,
            gamma: 0.1,
        })
        .unwrap(),
    ] {
        let q = ForceQuery::new(m, FieldKind::Scalar, 1.0).with_spec(spec);
        let direct = force_field_bc(&q).unwrap().force_per_area;
        for delta in [1e-2, 1e-3] {
            let fd = force_via_action_fd(&q, delta).unwrap().force_per_area;
            assert!(
                (fd - direct).abs() <= 10.0 * delta * delta * direct.abs(),
                "delta={delta}"
            );
        }
    }
}

#[test]
fn action_route_spec_examples() {
    let spec = QuadratureSpec::default().with_rel_tol(1e-12);
    let vac = force_via_action_fd(
        &ForceQuery::new(Medium::vacuum(), FieldKind::Scalar, 1.0).with_spec(spec),
        1e-3,
    )
    .unwrap();
    assert!((vac.force_per_area + 0.020_561_7).abs() <= 1e-5);
    let c3 = Medium::dielectric(SusceptibilityModel::Constant { chi0: 3.0 }).unwrap();
    let r = force_via_action_fd(
        &ForceQuery::new(c3, FieldKind::Scalar, 1.0).with_spec(spec),
        1e-3,
    )
    .unwrap();
    assert!((r.force_per_area + 0.010_280_8).abs() <= 1e-5);
}

#[test]
fn energy_is_separation_dependent_part_only() {
    let q = ForceQuery::new(Medium::vacuum(), FieldKind::Scalar, 2.0)
        .with_spec(QuadratureSpec::default().with_rel_tol(1e-11));
    let s = casimir_energy(&q).unwrap().value;
    let expected = -PI * PI / (1440.0 * 8.0);
    assert!(((s - expected) / expected).abs() < 1e-9);
}
