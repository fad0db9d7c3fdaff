//! Property-based invariants: lattice periodicity, Weyl symmetry,
//! dimension bounds, convolution support, and exponent additivity on
//! randomized inputs.

use proptest::prelude::*;
use wrapkern::numeric::sinc;
use wrapkern::radial::{kingman_convolve, wrapped_levy_law, JumpComponent, LevySymbol, RadialDistribution};
use wrapkern::torus::{character, j_value};
use wrapkern::{GroupId, RootSystem, Weight};

fn su2() -> RootSystem {
    RootSystem::new(GroupId::Su2).unwrap()
}

fn su3() -> RootSystem {
    RootSystem::new(GroupId::Sun(3)).unwrap()
}

proptest! {
    #[test]
    fn su2_characters_are_lattice_periodic(m in 0u32..12, theta in 0.05f64..6.2, k in -2i32..=2) {
        let rs = su2();
        let w = Weight::new(vec![m as i64]);
        let base = character(&rs, &w, &[theta]).unwrap();
        let shifted = character(&rs, &w, &[theta + 4.0 * std::f64::consts::PI * k as f64]).unwrap();
        prop_assert!((base - shifted).norm() < 1e-9 * (1.0 + base.norm()));
    }

    #[test]
    fn su3_characters_are_lattice_periodic(
        a in 0i64..5, b in 0i64..5,
        x in 0.1f64..5.0, y in 0.1f64..5.0,
        k1 in -1i32..=1, k2 in -1i32..=1,
    ) {
        let rs = su3();
        let w = Weight::new(vec![a, b]);
        let tau = 2.0 * std::f64::consts::PI;
        let base = character(&rs, &w, &[x, y]).unwrap();
        let shifted = character(&rs, &w, &[x + tau * k1 as f64, y + tau * k2 as f64]).unwrap();
        prop_assert!((base - shifted).norm() < 1e-9 * (1.0 + base.norm()));
    }

    #[test]
    fn su2_class_functions_are_even(m in 0u32..15, theta in 0.01f64..6.2) {
        let rs = su2();
        let w = Weight::new(vec![m as i64]);
        let plus = character(&rs, &w, &[theta]).unwrap();
        let minus = character(&rs, &w, &[-theta]).unwrap();
        prop_assert!((plus - minus).norm() < 1e-10 * (1.0 + plus.norm()));
        prop_assert!((j_value(&rs, &[theta]) - j_value(&rs, &[-theta])).abs() < 1e-15);
    }

    #[test]
    fn characters_are_bounded_by_dimension(m in 0u32..20, theta in 0.0f64..6.3) {
        let rs = su2();
        let w = Weight::new(vec![m as i64]);
        let d = rs.weyl_dimension(&w).unwrap() as f64;
        let value = character(&rs, &w, &[theta]).unwrap();
        prop_assert!(value.norm() <= d + 1e-9);
    }

    #[test]
    fn j_factor_is_bounded_by_one(x in -20.0f64..20.0, y in -20.0f64..20.0) {
        prop_assert!(j_value(&su2(), &[x]).abs() <= 1.0 + 1e-15);
        prop_assert!(j_value(&su3(), &[x, y]).abs() <= 1.0 + 1e-15);
    }

    #[test]
    fn two_radii_support_is_exact(a in 0.1f64..3.0, b in 0.1f64..3.0) {
        let z = kingman_convolve(
            &RadialDistribution::point_mass(a).unwrap(),
            &RadialDistribution::point_mass(b).unwrap(),
        )
        .unwrap();
        let RadialDistribution::Grid { nodes, density } = &z else {
            return Err(TestCaseError::fail("expected grid"));
        };
        prop_assert!((nodes.last().unwrap() - (a + b)).abs() < 1e-12);
        let lo = (a - b).abs();
        let cell = (a + b) / 2048.0;
        for (r, d) in nodes.iter().zip(density) {
            if *d > 0.0 {
                prop_assert!(*r >= lo - cell - 1e-12, "positive density at {r}, support starts {lo}");
            }
        }
        prop_assert!((z.mass() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn levy_exponents_add(
        gaussian in 0.0f64..2.0,
        rate in 0.0f64..3.0,
        radius in 0.0f64..2.0,
        s in 0.1f64..2.0,
        u in 0.1f64..2.0,
    ) {
        let sym = LevySymbol { gaussian, jumps: vec![JumpComponent { rate, radius }] };
        let ls = wrapped_levy_law(&sym, s, 30.0).unwrap();
        let lu = wrapped_levy_law(&sym, u, 30.0).unwrap();
        let lsu = wrapped_levy_law(&sym, s + u, 30.0).unwrap();
        for ((p, q), r) in ls.entries().iter().zip(lu.entries()).zip(lsu.entries()) {
            let prod = p.coeff * q.coeff;
            prop_assert!((prod - r.coeff).abs() <= 1e-13 * r.coeff.abs().max(1e-300));
        }
    }

    #[test]
    fn sinc_series_branch_is_continuous(x in 1e-6f64..1e-3) {
        // The series branch takes over below 1e-4; both expressions agree to
        // machine precision across the switch.
        let direct = x.sin() / x;
        prop_assert!((sinc(x) - direct).abs() < 1e-15);
        prop_assert!((sinc(-x) - sinc(x)).abs() < 1e-16);
    }
}
