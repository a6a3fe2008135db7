mod common;

use common::{airy_oracle, airy_zero_oracle, rel, sph_h1_closed, sph_j_series};
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use reslab::csfun::{
    airy_ai, airy_ai_prime, airy_pair, airy_zeros, sph_hankel1, AiryKind, ASYMPTOTIC_RADIUS, SERIES_RADIUS,
};
use reslab::Error;

/// Reference zeros of Ai and Ai′ (magnitudes), frozen from the fixed-point
/// series oracle with bisection.
const AI_ZEROS: [f64; 3] = [2.338_107_410_459_767, 4.087_949_444_130_971, 5.520_559_828_095_551];
const AI_PRIME_ZEROS: [f64; 3] = [1.018_792_971_647_471, 3.248_197_582_179_837, 4.820_099_211_178_736];

#[test]
fn frozen_zeros_agree_with_the_oracle() {
    for k in 0..3 {
        assert!((airy_zero_oracle(k + 1, false) - AI_ZEROS[k]).abs() < 1e-13);
        assert!((airy_zero_oracle(k + 1, true) - AI_PRIME_ZEROS[k]).abs() < 1e-13);
    }
}

#[test]
fn airy_zero_lists_match_reference() {
    let ai = airy_zeros::<f64>(AiryKind::Ai, 3, 1e-13).unwrap();
    let aip = airy_zeros::<f64>(AiryKind::AiPrime, 3, 1e-13).unwrap();
    for k in 0..3 {
        assert!((ai[k] - AI_ZEROS[k]).abs() < 1e-10, "Ai zero {k}: {}", ai[k]);
        assert!((aip[k] - AI_PRIME_ZEROS[k]).abs() < 1e-10, "Ai' zero {k}: {}", aip[k]);
    }
}

#[test]
fn airy_values_on_the_method_boundaries() {
    // The evaluator switches method at |z| = SERIES_RADIUS and ASYMPTOTIC_RADIUS;
    // check both sides of each switch against the oracle on several rays.
    for r in [SERIES_RADIUS, ASYMPTOTIC_RADIUS.min(7.9)] {
        for k in 0..12 {
            let arg = std::f64::consts::PI * (k as f64) / 6.0;
            for s in [r * (1.0 - 1e-9), r * (1.0 + 1e-9)] {
                let z = C64::from_polar(s, arg);
                let (a, ap) = airy_pair(z).unwrap();
                let (oa, oap) = airy_oracle(z);
                assert!(rel(a, oa, 1e-3) < 1e-11, "Ai({z}) = {a}, oracle {oa}");
                assert!(rel(ap, oap, 1e-3) < 1e-11, "Ai'({z}) = {ap}, oracle {oap}");
            }
        }
    }
}

#[test]
fn large_argument_values() {
    // Ai(10) and Ai(−10) to 15 digits.
    let a = airy_ai(C64::new(10.0, 0.0)).unwrap();
    assert!((a.re / 1.104_753_255_289_868_5e-10 - 1.0).abs() < 1e-12, "{a}");
    let a = airy_ai(C64::new(-10.0, 0.0)).unwrap();
    assert!((a.re - 0.040_241_238_486_443_19).abs() < 1e-13, "{a}");
}

#[test]
fn domain_overflow_is_reported() {
    let err = airy_ai(C64::new(2e4, 0.0)).unwrap_err();
    assert!(matches!(err, Error::DomainOverflow { .. }));
    assert!(matches!(sph_hankel1(3, C64::new(0.0, 0.0)), Err(Error::Pole)));
    assert!(matches!(
        sph_hankel1(10_000, C64::new(1.0, 0.0)),
        Err(Error::OrderOverflow { .. })
    ));
}

#[test]
fn hankel_matches_the_closed_form() {
    for l in 0..=12 {
        for z in [
            C64::new(0.7, 0.0),
            C64::new(3.0, -1.5),
            C64::new(12.0, 0.4),
            C64::new(5.0, -4.0),
        ] {
            let (h, _) = sph_hankel1(l, z).unwrap();
            let want = sph_h1_closed(l, z);
            assert!(rel(h, want, 1e-300) < 1e-12, "l = {l}, z = {z}: {h} vs {want}");
        }
    }
}

fn complex_in(r_max: f64) -> impl Strategy<Value = C64> {
    (0.05f64..r_max, -std::f64::consts::PI..std::f64::consts::PI).prop_map(|(r, a)| C64::from_polar(r, a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn airy_matches_oracle(z in complex_in(8.0)) {
        let (a, ap) = airy_pair(z).unwrap();
        let (oa, oap) = airy_oracle(z);
        // Absolute floor: where Ai is exponentially small the series oracle
        // itself cancels down to ~1e-14 in absolute terms.
        prop_assert!((a - oa).norm() <= 1e-11 * oa.norm().max(1e-3), "Ai({}) = {}, oracle {}", z, a, oa);
        prop_assert!((ap - oap).norm() <= 1e-11 * oap.norm().max(1e-3), "Ai'({}) = {}, oracle {}", z, ap, oap);
    }

    #[test]
    fn airy_schwarz_reflection(z in complex_in(60.0)) {
        let a = airy_ai(z).unwrap();
        let b = airy_ai(z.conj()).unwrap();
        prop_assert!((a.conj() - b).norm() <= 1e-14 * a.norm().max(1e-300));
        let a = airy_ai_prime(z).unwrap();
        let b = airy_ai_prime(z.conj()).unwrap();
        prop_assert!((a.conj() - b).norm() <= 1e-14 * a.norm().max(1e-300));
    }

    #[test]
    fn airy_differential_equation(z in complex_in(20.0)) {
        let h = 1e-3;
        let a0 = airy_ai(z).unwrap();
        let ap = airy_ai(z + h).unwrap();
        let am = airy_ai(z - h).unwrap();
        let second = (ap - a0 * 2.0 + am) / (h * h);
        let want = z * a0;
        // Central second difference: error h²/12 |Ai⁗| ≈ h²/12 |z|² |Ai|,
        // plus rounding 4ε|Ai|/h².
        let bound = (h * h / 12.0 * (z.norm_sqr() + 2.0) + 4.0 * f64::EPSILON / (h * h)) * 4.0;
        let scale = a0.norm().max(airy_ai_prime(z).unwrap().norm());
        prop_assert!((second - want).norm() <= bound * scale, "z = {}: {} vs {}", z, second, want);
    }

    #[test]
    fn hankel_schwarz_reflection(l in 0usize..200, z in complex_in(300.0)) {
        // Below |z| ≈ l/4 the magnitude (2l−1)!!/|z|^{l+1} leaves f64 range.
        prop_assume!(z.norm() > 0.1 && z.norm() > l as f64 / 4.0);
        let (h, hp) = sph_hankel1(l, z).unwrap();
        // j_l and y_l have real Taylor coefficients and parity (−1)^l, so
        // h_l^{(1)} = j_l + i y_l satisfies h_l(−z̄) = (−1)^l conj h_l(z): the
        // Schwarz reflection of the pair, composed with parity.
        let (hm, hpm) = sph_hankel1(l, -z.conj()).unwrap();
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!(rel(hm, h.conj() * sign, 1e-300) < 1e-10, "l = {}, z = {}", l, z);
        prop_assert!(rel(hpm, -hp.conj() * sign, 1e-300) < 1e-10);
    }

    #[test]
    fn spherical_wronskian(l in 0usize..16, z in complex_in(8.0)) {
        prop_assume!(z.norm() > 0.5 && z.im > -3.0);
        let (h, hp) = sph_hankel1(l, z).unwrap();
        let (j, jp) = sph_j_series(l, z);
        let w = z * z * (j * hp - jp * h);
        prop_assert!((w - C64::new(0.0, 1.0)).norm() < 1e-8, "l = {}, z = {}: {}", l, z, w);
    }
}
