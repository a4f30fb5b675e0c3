use std::f64::consts::PI;

use casimir_pfa::constants::ZETA_3;
use casimir_pfa::figure;
use casimir_pfa::geometry::{derive_geometry, profile_height, LensProfile, LensSurface};
use casimir_pfa::metrology::{combine_systematic, total_error, ErrorBudget, Rule, Systematic};
use casimir_pfa::pfa::{force_bubble, force_general, force_perfect_simplified, ratio_at};
use casimir_pfa::plates::{free_energy_pp, pressure_pp, tau, thermal_bracket};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Lens radius, cap radius and cap depth satisfying the profile invariants.
fn imperfection() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.02f64..0.5, 0.05f64..2.0, 0.05f64..0.9).prop_map(|(r, cap, depth)| {
        // depth is a fraction of the largest allowed D1
        (r, cap * r, depth * 1e-3 * r)
    })
}

/// Shallow caps, the regime where the closed forms hold.
fn shallow_imperfection() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.02f64..0.5, 0.2f64..2.0, 0.01f64..1.0)
        .prop_map(|(r, cap, depth)| (r, cap * r, (depth * 2e-4 * cap * r).min(0.9e-3 * r)))
}

/// Zero, or warm enough for the thermal series at every sampled separation.
fn temperature() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), 10.0f64..600.0]
}

fn pit_params() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.02f64..0.5, 0.05f64..0.95, 0.001f64..0.9)
        .prop_map(|(r, cap, depth)| (r, cap * r, depth * 1e-3 * r * cap))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_energy_magnitude_decreases_with_separation(
        t in 10.0f64..1000.0,
        z0 in 0.5e-6f64..4.9e-6,
        step in 1e-9f64..0.1e-6,
    ) {
        let near = free_energy_pp(z0, t).unwrap().value;
        let far = free_energy_pp(z0 + step, t).unwrap().value;
        prop_assert!(near < 0.0 && far < 0.0);
        prop_assert!(far.abs() < near.abs());
    }

    #[test]
    fn reduced_free_energy_depends_on_tau_alone(
        z in 0.2e-6f64..5e-6,
        t in 50.0f64..800.0,
        lambda in 0.25f64..4.0,
    ) {
        let f = |z: f64, t: f64| free_energy_pp(z, t).unwrap().value * z * z / t;
        let (z2, t2) = (lambda * z, t / lambda);
        prop_assert!(rel(tau(z2, t2).unwrap(), tau(z, t).unwrap()) < 1e-14);
        prop_assert!(rel(f(z2, t2), f(z, t)) < 1e-12);
    }

    #[test]
    fn bracket_approaches_classical_limit(tau in 5.0f64..60.0) {
        let (b, _) = thermal_bracket(tau).unwrap();
        let excess = b - ZETA_3 / 2.0;
        prop_assert!(excess >= 0.0);
        prop_assert!(excess <= 1.1 * (1.0 + tau) * (-tau).exp() + 4.0 * f64::EPSILON);
    }

    #[test]
    fn pressure_is_minus_free_energy_slope(
        z in 0.1e-6f64..10e-6,
        t in 0.0f64..1000.0,
    ) {
        prop_assume!(t == 0.0 || tau(z, t).unwrap() >= 1e-2);
        let h = 1e-4 * z;
        let f = |z| free_energy_pp(z, t).unwrap().value;
        let numeric = -(f(z + h) - f(z - h)) / (2.0 * h);
        prop_assert!(rel(pressure_pp(z, t).unwrap(), numeric) < 1e-6);
    }

    #[test]
    fn bubble_seam_is_continuous((r, cap, depth) in imperfection(), a in 0.1e-6f64..5e-6) {
        let profile = LensProfile::bubble(r, r, cap, depth).unwrap();
        let surface = LensSurface::new(&profile, a).unwrap();
        let seam = surface.seam().unwrap();
        let at = surface.height(seam).unwrap();
        prop_assert!(rel(at, a + depth) < 1e-9);
        let inner = surface.height(seam * (1.0 - 1e-14)).unwrap();
        let outer = surface.height(seam * (1.0 + 1e-14)).unwrap();
        prop_assert!(rel(inner, at) < 1e-9);
        prop_assert!(rel(outer, at) < 1e-9);
    }

    #[test]
    fn pit_seam_is_continuous((r, cap, depth) in pit_params(), a in 0.1e-6f64..5e-6) {
        let profile = LensProfile::pit(r, r, cap, depth).unwrap();
        let surface = LensSurface::new(&profile, a).unwrap();
        let seam = surface.seam().unwrap();
        prop_assert_eq!(surface.height(seam).unwrap(), a);
        prop_assert!(rel(surface.height(0.0).unwrap(), a + depth) < 1e-12);
        let inner = surface.height(seam * (1.0 - 1e-14)).unwrap();
        let outer = surface.height(seam * (1.0 + 1e-14)).unwrap();
        prop_assert!(rel(inner, a) < 1e-9);
        prop_assert!(rel(outer, a) < 1e-9);
    }

    #[test]
    fn minimum_height_is_the_separation(
        (r, cap, depth) in imperfection(),
        a in 0.1e-6f64..5e-6,
        pit in any::<bool>(),
    ) {
        let cap = if pit { cap.min(0.95 * r) } else { cap };
        let depth = depth.min(0.5 * cap);
        let profile = if pit {
            LensProfile::pit(r, r, cap, depth).unwrap()
        } else {
            LensProfile::bubble(r, r, cap, depth).unwrap()
        };
        let surface = LensSurface::new(&profile, a).unwrap();
        let seam = surface.seam().unwrap();
        let closest = if pit { seam } else { 0.0 };
        prop_assert_eq!(surface.height(closest).unwrap(), a);
        let extent = surface.extent();
        for i in 0..=400 {
            let rho = extent * (i as f64 / 400.0);
            prop_assert!(surface.height(rho).unwrap() >= a);
        }
        for i in 0..=50 {
            let rho = 2.0 * seam * i as f64 / 50.0;
            prop_assert!(surface.height(rho).unwrap() >= a);
        }
    }

    #[test]
    fn bubble_with_lens_curvature_is_the_perfect_lens(
        r in 0.02f64..0.5,
        depth in 0.01f64..0.9,
        a in 0.1e-6f64..5e-6,
        frac in 0.0f64..1.0,
    ) {
        let depth = depth * 1e-3 * r;
        let bubble = LensProfile::bubble(r, r, r, depth).unwrap();
        let perfect = LensProfile::hemisphere(r).unwrap();
        let seam = derive_geometry(&bubble).unwrap().footprint_radius;
        for rho in [0.0, frac * seam, seam, seam + frac * (r - seam), r] {
            let hb = profile_height(&bubble, rho, a).unwrap();
            let hp = profile_height(&perfect, rho, a).unwrap();
            prop_assert!(rel(hb, hp) <= 1e-12, "rho {rho}: {hb} vs {hp}");
        }
    }

    #[test]
    fn derived_geometry_relations((r, cap, depth) in imperfection(), pit in any::<bool>()) {
        let cap = if pit { cap.min(0.95 * r) } else { cap };
        let depth = depth.min(0.5 * cap);
        let profile = if pit {
            LensProfile::pit(r, r, cap, depth).unwrap()
        } else {
            LensProfile::bubble(r, r, cap, depth).unwrap()
        };
        let g = derive_geometry(&profile).unwrap();
        let r_sq = 2.0 * cap * depth - depth * depth;
        prop_assert!(rel(g.footprint_radius_sq, r_sq) < 1e-15);
        prop_assert!(rel(g.footprint_radius * g.footprint_radius, r_sq) < 1e-14);
        prop_assert!(rel(g.sagitta, r_sq / (2.0 * r)) < 1e-15);
        let offset = if pit { g.sagitta + depth } else { (g.sagitta - depth).abs() };
        prop_assert!(rel(g.offset, offset) < 1e-12 || (g.offset - offset).abs() < 1e-22);
    }

    #[test]
    fn bubble_force_decomposes_linearly(
        (r, cap, depth) in imperfection(),
        a in 0.1e-6f64..5e-6,
        t in temperature(),
    ) {
        let lhs = force_bubble(a, t, r, cap, depth).unwrap().value;
        let ff = |z| 2.0 * PI * r * free_energy_pp(z, t).unwrap().value;
        let rhs = (1.0 - cap / r) * ff(a + depth) + (cap / r) * ff(a);
        prop_assert!(rel(lhs, rhs) < 1e-12);
    }

    #[test]
    fn bubble_degeneracies(
        (r, cap, depth) in imperfection(),
        a in 0.1e-6f64..5e-6,
        t in temperature(),
    ) {
        let simple = force_perfect_simplified(a, t, r).unwrap().value;
        prop_assert!(rel(force_bubble(a, t, r, r, depth).unwrap().value, simple) < 1e-12);
        prop_assert!(rel(force_bubble(a, t, r, cap, 0.0).unwrap().value, simple) < 1e-12);
    }

    #[test]
    fn combined_systematic_respects_both_bounds(
        comps in prop::collection::vec(0.0f64..100.0, 1..10),
        k in 0.5f64..2.0,
    ) {
        let s = combine_systematic(&comps, k).unwrap();
        let sum: f64 = comps.iter().sum();
        let quad = k * comps.iter().map(|c| c * c).sum::<f64>().sqrt();
        prop_assert!(s <= sum * (1.0 + 1e-15));
        prop_assert!(s <= quad * (1.0 + 1e-15));
        prop_assert!(s == sum.min(quad));
    }

    #[test]
    fn total_error_never_exceeds_the_sum(
        random in 1e-3f64..10.0,
        systematic in 1e-3f64..10.0,
        s in 1e-3f64..10.0,
        q in 0.71f64..=0.81,
    ) {
        let mut budget = ErrorBudget::new(random, Systematic::Combined(systematic), s);
        budget.q = Some(q);
        let out = total_error(&budget).unwrap();
        prop_assert!(out.total <= (random + systematic) * (1.0 + 1e-15));
    }

    #[test]
    fn error_combination_is_scale_equivariant(
        comps in prop::collection::vec(1e-3f64..10.0, 3),
        random in 1e-3f64..10.0,
        s in 1e-3f64..10.0,
        lambda in 1e-3f64..1e3,
    ) {
        let budget = |scale: f64| {
            let mut b = ErrorBudget::new(
                scale * random,
                Systematic::Components(comps.iter().map(|c| scale * c).collect()),
                scale * s,
            );
            b.q = Some(0.76);
            b.measured_value = Some(scale * 40.0);
            total_error(&b).unwrap()
        };
        let (base, scaled) = (budget(1.0), budget(lambda));
        prop_assert_eq!(base.rule, scaled.rule);
        prop_assert!(rel(scaled.ratio, base.ratio) < 1e-12);
        prop_assert!(rel(scaled.systematic, lambda * base.systematic) < 1e-12);
        prop_assert!(rel(scaled.total, lambda * base.total) < 1e-12);
        prop_assert!(rel(scaled.relative.unwrap(), base.relative.unwrap()) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bubble_quadrature_matches_closed_form(
        (r, cap, depth) in shallow_imperfection(),
        a in 1e-6f64..3e-6,
    ) {
        let profile = LensProfile::bubble(r, r, cap, depth).unwrap();
        let q = force_general(&profile, a, 300.0, 1e-10).unwrap().value;
        let c = force_bubble(a, 300.0, r, cap, depth).unwrap().value;
        prop_assert!(rel(q, c) < 1e-3, "{q} vs {c}");
    }

    // Integrating the pit surface by parts gives
    // 2π(R + R1)F(a) − 2πR1·F(a + D1) up to terms of order (a, D1)/R.
    #[test]
    fn pit_quadrature_matches_integrated_surface(
        (r, cap, depth) in pit_params(),
        a in 1e-6f64..3e-6,
    ) {
        let profile = LensProfile::pit(r, r, cap, depth).unwrap();
        let q = force_general(&profile, a, 300.0, 1e-10).unwrap().value;
        let f = |z| free_energy_pp(z, 300.0).unwrap().value;
        let expected = 2.0 * PI * ((r + cap) * f(a) - cap * f(a + depth));
        prop_assert!(rel(q, expected) < 1e-3, "{q} vs {expected}");
    }
}

#[test]
fn figure_ratios_are_ordered() {
    let [flat, sharp, pit] = figure::imperfection_profiles();
    for i in 0..=40 {
        let a = 1e-6 + 0.05e-6 * i as f64;
        let r1 = ratio_at(&flat, a, 300.0).unwrap();
        let r2 = ratio_at(&sharp, a, 300.0).unwrap();
        let r3 = ratio_at(&pit, a, 300.0).unwrap();
        assert!(r1 > 1.0 && 1.0 > r2 && r2 > r3, "a = {a}: {r1} {r2} {r3}");
    }
}

#[test]
fn figure_ratios_approach_one_monotonically() {
    for profile in figure::imperfection_profiles() {
        let distances: Vec<f64> = (0..=200)
            .map(|i| 1e-6 + 0.01e-6 * i as f64)
            .map(|a| (ratio_at(&profile, a, 300.0).unwrap() - 1.0).abs())
            .collect();
        assert!(
            distances.windows(2).all(|w| w[1] < w[0]),
            "{} curve is not monotone",
            profile.kind()
        );
    }
}

#[test]
fn systematic_dominated_budget_reports_the_systematic_error() {
    let mut budget = ErrorBudget::new(0.5, Systematic::Combined(19.0), 1.0);
    budget.measured_value = Some(1e4);
    let out = total_error(&budget).unwrap();
    assert_eq!(out.rule, Rule::SystematicDominates);
    assert!((out.relative.unwrap() - 0.0019).abs() < 1e-15);
}
