use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seczeta_core::closed_forms::{psi2_pell_family, psi_gen1, psi_gen2, psi_semiperiod, ExactPsiValue};
use seczeta_core::exact::QuadSurd;
use seczeta_core::modular::{automorphy_factor, fe_rhs, moebius, Mat2Z};
use seczeta_core::numeric::{
    conjecture1_scan, cosecant_series, cotangent_zeta, direct_sum, hurwitz_zeta, lemma_ladder, lemma_residual,
    lemma_slack, psi_numeric, psi_over_pi_power, psi_rational_point, recognize_rational, tangent_series, BigReal,
    Exponent, Mag, NumericError, TrigKind,
};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses a plain decimal literal exactly.
fn dec(s: &str) -> BigRational {
    let (neg, s) = s.strip_prefix('-').map_or((false, s), |r| (true, r));
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let num: BigInt = format!("{int}{frac}").parse().unwrap();
    let v = BigRational::new(num, BigInt::from(10).pow(frac.len() as u32));
    if neg {
        -v
    } else {
        v
    }
}

fn assert_close(v: &BigReal, expected: &BigRational, tol: f64) {
    let e = BigReal::from_rational(expected, v.prec() + 32);
    let d = v.dist_upper(&e);
    assert!(d.to_f64() < tol, "{} vs {expected}: distance {}", v.to_decimal_string(40), d.to_sci_string());
}

fn pi_power(k: u32, prec: u32) -> BigReal {
    BigReal::pi(prec).powi(k as i64)
}

fn check_family_value(v: &ExactPsiValue, digits: u32, tol: f64) {
    let got = psi_numeric(v.k as f64, &v.argument, digits).unwrap();
    let want = BigReal::from_rational(&v.coefficient, got.prec() + 32).mul(&pi_power(v.k as u32, got.prec() + 32));
    let d = got.dist_upper(&want);
    assert!(d.to_f64() < tol, "k = {} at {}: distance {}", v.k, v.argument, d.to_sci_string());
}

#[test]
fn published_values_at_fifty_digits() {
    let two = psi_numeric(2.0, &QuadSurd::sqrt_int(2), 50).unwrap();
    let want = pi_power(2, 250).div_int(3).neg();
    assert!(two.dist_upper(&want).to_f64() < 1e-45);
    let six = psi_numeric(2.0, &QuadSurd::sqrt_int(6), 50).unwrap();
    let want = pi_power(2, 250).mul_int(2).div_int(3);
    assert!(six.dist_upper(&want).to_f64() < 1e-45);
}

#[test]
fn vanishing_value_at_sqrt_ten_thirds() {
    let z = QuadSurd::sqrt_rational(&q(10, 3)).unwrap();
    let v = psi_numeric(2.0, &z, 40).unwrap();
    assert!(v.abs_upper().to_f64() < 1e-30, "{}", v.to_decimal_string(20));
}

#[test]
fn numeric_agrees_with_every_family() {
    for k in [2u64, 4, 6] {
        for j in (-5i64..=5).filter(|&j| j != 0) {
            for v in [psi_gen1(k, j), psi_gen2(k, j), psi_semiperiod(k, j)] {
                check_family_value(&v.unwrap(), 50, 1e-40);
            }
        }
    }
}

#[test]
fn pell_family_numeric_including_zero_case() {
    for (j, n) in [(1, 1), (1, 2), (2, -1), (-1, 3), (1, -3), (2, -6)] {
        let v = psi2_pell_family(j, n).unwrap();
        check_family_value(&v, 40, 1e-30);
    }
}

#[test]
fn hurwitz_special_values() {
    let pi2 = pi_power(2, 200);
    let z = hurwitz_zeta(2.0, &q(1, 1), 40).unwrap();
    assert!(z.dist_upper(&pi2.div_int(6)).to_f64() < 1e-38);
    let z = hurwitz_zeta(2.0, &q(1, 2), 40).unwrap();
    assert!(z.dist_upper(&pi2.div_int(2)).to_f64() < 1e-38);
    let z = hurwitz_zeta(4.0, &q(1, 1), 40).unwrap();
    assert!(z.dist_upper(&pi_power(4, 200).div_int(90)).to_f64() < 1e-38);
    assert!(hurwitz_zeta(1.0, &q(1, 2), 20).is_err());
    assert!(hurwitz_zeta(2.0, &q(3, 2), 20).is_err());
}

#[test]
fn rational_points_match_frozen_oracle() {
    // independent oracle: 50-digit extended-precision summation
    let frozen = [
        (2, 1, 3, "1.37077838904018869706034597220502099101579158"),
        (4, 1, 3, "1.85899036901311235672424708989246894411774353"),
        (2, 3, 5, "-3.19117208968555928675648542329328886708476281"),
        (3, 1, 7, "1.38237366877955130149904611407776448830042035"),
        (2, -2, 9, "2.61970981016569395438199452465848456060795725"),
    ];
    for (s, p, qq, v) in frozen {
        let got = psi_rational_point(s, p, qq, 40).unwrap();
        assert_close(&got, &dec(v), 1e-30);
    }
    let zeta2 = psi_rational_point(2, 0, 1, 40).unwrap();
    assert!(zeta2.dist_upper(&pi_power(2, 200).div_int(6)).to_f64() < 1e-38);
    let zeta4 = psi_rational_point(4, 2, 1, 40).unwrap();
    assert!(zeta4.dist_upper(&pi_power(4, 200).div_int(90)).to_f64() < 1e-38);
    assert!(matches!(psi_rational_point(2, 1, 4, 20), Err(NumericError::Domain(_))));
}

#[test]
fn rational_point_matches_brute_force() {
    // partial sums with a Richardson step in N, double precision
    let brute = |s: i32, p: f64, qq: f64| {
        let partial = |n: usize| -> f64 {
            (1..=n).map(|m| 1.0 / (std::f64::consts::PI * m as f64 * p / qq).cos() / (m as f64).powi(s)).sum()
        };
        // the period 2q makes N a multiple of it; error ~ C/N^{s−1}
        let n = 2 * qq as usize * 100_000;
        let (a, b) = (partial(n), partial(2 * n));
        let w = 2f64.powi(s - 1);
        (w * b - a) / (w - 1.0)
    };
    for (s, p, qq) in [(2, 1, 3), (2, 3, 5), (3, 1, 7)] {
        let got = psi_rational_point(s as u32, p, qq, 30).unwrap().to_f64();
        let b = brute(s, p as f64, qq as f64);
        assert!((got - b).abs() < 1e-9, "{s} {p}/{qq}: {got} vs {b}");
    }
}

#[test]
fn rational_point_through_functional_equation() {
    // ψ₄(1/3) = 3^{−3}ψ₄(1) + F₄(1)π⁴, with ψ₄(1) = −7π⁴/720
    let f = fe_rhs(4, &QuadSurd::rational(q(1, 1))).unwrap().to_rational().unwrap();
    let want = q(-7, 720) / BigInt::from(27) + f;
    let got = psi_over_pi_power(4, &QuadSurd::rational(q(1, 3)), 40).unwrap();
    assert_close(&got, &want, 1e-35);
}

fn random_surd(rng: &mut ChaCha8Rng) -> QuadSurd {
    const NON_SQUARES: [u64; 10] = [2, 3, 5, 6, 7, 10, 11, 13, 14, 15];
    let d = NON_SQUARES[rng.gen_range(0..NON_SQUARES.len())];
    let den = rng.gen_range(1..=4);
    let mut b = rng.gen_range(-3..=3);
    while b == 0 {
        b = rng.gen_range(-3..=3);
    }
    QuadSurd::new(q(rng.gen_range(-6..=6), den), q(b, den), d)
}

#[test]
fn error_bounds_hold_at_double_precision() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb0b);
    for i in 0..100 {
        let z = random_surd(&mut rng);
        if i % 10 == 9 {
            // direct summation: the rounding part of the bound is what changes
            let s = Exponent::Real(rng.gen_range(2.0..5.0));
            let lo = direct_sum(TrigKind::Sec, s, &z, 10, 64).unwrap();
            let hi = direct_sum(TrigKind::Sec, s, &z, 10, 128).unwrap();
            assert!(hi.overlaps(&lo), "direct {s:?} at {z}");
            continue;
        }
        let k = [2.0, 4.0, 6.0][rng.gen_range(0..3)];
        let lo = psi_numeric(k, &z, 20).unwrap();
        let hi = psi_numeric(k, &z, 40).unwrap();
        assert!(hi.rad() < lo.rad(), "k = {k} at {z}");
        // the tighter midpoint must sit inside the looser ball
        let mid = BigReal::from_rational(&hi.mid_rational(), 400);
        assert!(mid.overlaps(&lo), "k = {k} at {z}: {} vs {}", hi, lo);
    }
}

#[test]
fn functional_equation_end_to_end() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfe);
    let b = Mat2Z::gen_b(1);
    for k in [2u64, 4] {
        for _ in 0..10 {
            let z = random_surd(&mut rng);
            let bz = moebius(&b, &z).unwrap();
            let alpha = automorphy_factor(&b, &z).pow(1 - k as i64).unwrap();
            let rho = fe_rhs(k, &z).unwrap();
            let lhs = psi_over_pi_power(k as u32, &bz, 40).unwrap();
            let base = psi_over_pi_power(k as u32, &z, 40).unwrap();
            let prec = lhs.prec() + 32;
            let rhs = base.mul(&BigReal::from_surd(&alpha, prec)).add(&BigReal::from_surd(&rho, prec));
            assert!(lhs.overlaps(&rhs), "k = {k} at {z}");
            assert!(lhs.dist_upper(&rhs).to_f64() < 1e-38);
        }
    }
}

#[test]
fn lemma_ladder_decreases_within_slack() {
    let x = q(1, 5);
    let z = QuadSurd::sqrt_int(2);
    let ns = [1_000, 2_000, 4_000, 8_000, 16_000, 32_000, 64_000, 100_000];
    let ladder = lemma_ladder(&x, &z, &ns, 40).unwrap();
    assert_eq!(ladder.len(), ns.len());
    for w in ladder.windows(2) {
        let (a, b) = (w[0].1.to_f64(), w[1].1.to_f64());
        assert!(b <= a + lemma_slack(&x, &z, w[0].0), "N = {}: {a} -> {b}", w[1].0);
    }
    assert!(ladder.last().unwrap().1.to_f64() < 1e-3);
}

#[test]
fn lemma_leading_term_cancels_for_small_x() {
    let z = QuadSurd::sqrt_int(2);
    for d in [50, 500, 5000] {
        let r = lemma_residual(&q(1, d), &z, 2000, 30).unwrap().to_f64();
        // both sides ≈ 1/(zx), which is about d/1.41
        assert!(r < 1e-2, "x = 1/{d}: {r}");
    }
}

#[test]
fn lemma_rejects_poles() {
    let z = QuadSurd::sqrt_int(2);
    assert!(matches!(lemma_residual(&q(1, 2), &z, 10, 20), Err(NumericError::Pole(_))));
    assert!(matches!(lemma_residual(&q(3, 2), &z, 10, 20), Err(NumericError::Pole(_))));
}

#[test]
fn secant_partial_fractions() {
    // π(sec πx − 1) = 16x² Σ χ₋₄(n)/(n(n² − 4x²))
    let x = 1.0 / 3.0;
    let mut s = 0.0;
    for n in 1..=100_000u64 {
        let chi = match n % 4 {
            1 => 1.0,
            3 => -1.0,
            _ => continue,
        };
        let nf = n as f64;
        s += chi / (nf * (nf * nf - 4.0 * x * x));
    }
    let lhs = std::f64::consts::PI * (1.0 / (std::f64::consts::PI * x).cos() - 1.0);
    assert!((16.0 * x * x * s - lhs).abs() < 1e-6);
}

#[test]
fn cotangent_published_values() {
    let phi = QuadSurd::new(q(1, 2), q(1, 2), 5);
    let v = cotangent_zeta(3, &phi, 40).unwrap();
    let want = pi_power(3, 200).div(&BigReal::from_int(5, 200).sqrt().mul_int(45)).neg();
    assert!(v.dist_upper(&want).to_f64() < 1e-30);
    let v = cotangent_zeta(5, &QuadSurd::sqrt_int(2), 40).unwrap();
    let want = pi_power(5, 200).div(&BigReal::from_int(2, 200).sqrt().mul_int(945));
    assert!(v.dist_upper(&want).to_f64() < 1e-30);
}

#[test]
fn tangent_and_cosecant_two_paths() {
    let z = QuadSurd::sqrt_int(2);
    let t = tangent_series(3, &z, 40).unwrap();
    assert!(t.identity.rad().to_f64() < 1e-35);
    assert!(t.direct.overlaps(&t.identity));
    let neg = tangent_series(3, &-&z, 40).unwrap();
    assert!(neg.identity.dist_upper(&t.identity.neg()).to_f64() < 1e-35);

    let z2 = QuadSurd::sqrt_int(2).scale(&q(2, 1));
    let c = cosecant_series(5, &z2, 40).unwrap();
    assert!(c.direct.overlaps(&c.identity));
    let neg = cosecant_series(5, &-&z2, 40).unwrap();
    assert!(neg.identity.dist_upper(&c.identity.neg()).to_f64() < 1e-35);
}

#[test]
fn scan_recognizes_known_cells() {
    let recs = conjecture1_scan(&[2, 4], &[6, 24], 60, 1_000_000);
    let found: Vec<_> = recs.iter().map(|r| (r.k, r.j, r.recognized.clone())).collect();
    assert_eq!(
        found,
        vec![(2, 6, Some(q(2, 3))), (2, 24, Some(q(1, 6))), (4, 6, Some(q(127, 1980))), (4, 24, found[3].2.clone()),]
    );
    assert!(recs[..3].iter().all(|r| r.verified_at_higher_precision));
    let line = serde_json::to_string(&recs[0]).unwrap();
    assert!(line.contains("\"recognized\":\"2/3\""), "{line}");
}

#[test]
fn recognition_is_deterministic_and_refuses_wide_balls() {
    let a = conjecture1_scan(&[2], &[2, 3, 5], 30, 1000);
    let b = conjecture1_scan(&[2], &[5, 3, 2], 30, 1000);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let wide = BigReal::from_f64(0.5, 64).with_rad(Mag::from_f64_up(1e-3));
    assert_eq!(recognize_rational(&wide, 1_000_000), None);
}
