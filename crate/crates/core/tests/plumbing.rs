mod oracles;

use num_complex::Complex64;
use proptest::prelude::*;

use oracles::plumbing::{horocycle_integral, length_grid, plumbing_inputs};
use stratglue::arith::{q, GaussianRational, Q};
use stratglue::plumbing::{
    blend, cusp_to_disk, horocycle_length, plumb, validate_horocycle, Fixture, HorocycleStructure, DEFAULT_DEGREE,
};

#[test]
fn plumb_is_exact_on_random_inputs() {
    let inputs = plumbing_inputs(1000, 11);
    assert_eq!(inputs.len(), 1000);
    for (t, delta, z) in inputs {
        let f = Fixture::new(t.clone(), delta).unwrap();
        let w = plumb(&z, &f).unwrap();
        assert_eq!(&z * &w, t);
        assert!(f.in_annulus(&w));
        assert_eq!(plumb(&w, &f).unwrap(), z);
    }
}

#[test]
fn lengths_match_the_integral() {
    let grid = length_grid();
    assert_eq!(grid.len(), 50);
    for c in grid {
        let exact = horocycle_length(c).unwrap();
        let numeric = horocycle_integral(c);
        assert!((exact - numeric).abs() < 1e-9, "c = {c}: {exact} vs {numeric}");
    }
    let third = (-3.0 * std::f64::consts::PI).exp();
    assert!((horocycle_length(third).unwrap() - 2.0 / 3.0).abs() < 1e-9);
}

#[test]
fn horocycles_map_to_circles() {
    for k in 0..40 {
        let y = 1.0 + k as f64 / 8.0;
        for j in 0..10 {
            let x = j as f64 / 7.0 - 0.6;
            let z = cusp_to_disk(Complex64::new(x, y)).unwrap();
            let expected = (-2.0 * std::f64::consts::PI * y).exp();
            assert!((z.norm() - expected).abs() <= 1e-12 * expected);
        }
    }
}

fn arb_gaussian(bound: i64) -> impl Strategy<Value = GaussianRational> {
    (-bound..=bound, 1..=bound, -bound..=bound, 1..=bound)
        .prop_map(|(a, b, c, d)| GaussianRational::new(q(a, b * 8), q(c, d * 8)))
}

fn arb_structure() -> impl Strategy<Value = HorocycleStructure> {
    (prop::collection::vec(arb_gaussian(6), 0..DEFAULT_DEGREE - 1), 1i64..20, 1i64..9).prop_map(
        |(higher, scale, delta_den)| {
            let mut h = HorocycleStructure::canonical(DEFAULT_DEGREE);
            for (k, a) in higher.into_iter().enumerate() {
                h = h.with_coefficient(k + 2, a);
            }
            h.scale = q(scale, 4);
            h.delta = 1.0 / (4.0 * delta_den as f64);
            h
        },
    )
}

fn arb_unit() -> impl Strategy<Value = Q> {
    (0i64..=12).prop_map(|k| q(k, 12))
}

proptest! {
    #[test]
    fn blends_stay_normalized(h0 in arb_structure(), h1 in arb_structure(), s in arb_unit()) {
        prop_assume!(validate_horocycle(&h0).ok && validate_horocycle(&h1).ok);
        let b = blend(&h0, &h1, &s).unwrap();
        prop_assert!(b.coefficients[0].is_zero());
        prop_assert_eq!(&b.coefficients[1], &GaussianRational::one());
        prop_assert!(b.delta <= h0.delta.min(h1.delta));
        prop_assert!(validate_horocycle(&b).ok);
    }

    #[test]
    fn blends_compose_along_the_path(h0 in arb_structure(), h1 in arb_structure(), s in arb_unit(), s2 in arb_unit()) {
        prop_assume!(validate_horocycle(&h0).ok && validate_horocycle(&h1).ok);
        let twice = blend(&blend(&h0, &h1, &s).unwrap(), &h1, &s2).unwrap();
        let once = blend(&h0, &h1, &(&s + &s2 * (q(1, 1) - &s))).unwrap();
        prop_assert_eq!(twice.coefficients, once.coefficients);
        prop_assert_eq!(twice.scale, once.scale);
    }
}
