use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seczeta_core::exact::QuadSurd;
use seczeta_core::modular::{
    automorph, automorphy_factor, fixed_point_matrix, moebius, psi_exact_at, psi_exact_sqrt, push_relation,
    sanov_factor, solve_fixed, word_to_matrix, Gen, GenWord, Mat2Z,
};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn random_word(rng: &mut ChaCha8Rng) -> GenWord {
    let len = rng.gen_range(0..=30);
    let mut g = if rng.gen_bool(0.5) { Gen::A } else { Gen::B };
    let mut letters = Vec::new();
    for _ in 0..len {
        let mut e = rng.gen_range(-5..=5);
        while e == 0 {
            e = rng.gen_range(-5..=5);
        }
        letters.push((g, e));
        g = if g == Gen::A { Gen::B } else { Gen::A };
    }
    GenWord::new(letters)
}

#[test]
fn factor_round_trip_on_random_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..500 {
        let w = random_word(&mut rng);
        let m = word_to_matrix(&w);
        let back = sanov_factor(&m).unwrap();
        assert_eq!(back, w, "matrix {m}");
        assert_eq!(word_to_matrix(&back), m);
        assert_eq!(sanov_factor(&m.neg()).unwrap(), w);
    }
}

#[test]
fn words_outside_gamma2_are_rejected() {
    for (a, b, c, d) in [(1, 1, 0, 1), (1, 0, 1, 1), (2, 1, 1, 1), (0, -1, 1, 0)] {
        assert!(sanov_factor(&Mat2Z::new(a, b, c, d).unwrap()).is_err());
    }
    assert!(Mat2Z::new(2, 0, 0, 2).is_err());
}

#[test]
fn b_power_telescopes_to_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut points = Vec::new();
    while points.len() < 20 {
        let z = q(rng.gen_range(-60..=60), rng.gen_range(1..=40));
        // keep every intermediate 2mz + 1 away from zero
        if (-10i64..=10).all(|m| q(2 * m, 1) * &z + BigRational::one() != BigRational::zero()) {
            points.push(z);
        }
    }
    for n in (-10i64..=10).filter(|&n| n != 0) {
        for z in &points {
            let rel = push_relation(2, &GenWord::new([(Gen::B, n)]), &QuadSurd::rational(z.clone())).unwrap();
            let lin = q(2 * n, 1) * z + BigRational::one();
            let alpha = lin.recip();
            let rho = q(n, 1) * z * (q(3, 1) * z * z + q(4 * n, 1) * z + q(2, 1)) / (q(6, 1) * &lin * &lin);
            assert_eq!(rel.alpha.to_rational().unwrap(), alpha, "n = {n}, z = {z}");
            assert_eq!(rel.rho.to_rational().unwrap(), rho, "n = {n}, z = {z}");
            assert_eq!(rel.image.to_rational().unwrap(), z / &lin);
        }
    }
}

#[test]
fn alpha_is_the_automorphy_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let len = rng.gen_range(1..=6);
        let w = GenWord::new((0..len).map(|i| {
            let g = if i % 2 == 0 { Gen::A } else { Gen::B };
            let e = [-2i64, -1, 1, 2][rng.gen_range(0..4)];
            (g, e)
        }));
        let z = QuadSurd::sqrt_int([2u64, 3, 5, 7][rng.gen_range(0..4)]).add_rational(&q(rng.gen_range(-2..=2), 1));
        for k in [2u64, 4] {
            let rel = push_relation(k, &w, &z).unwrap();
            let m = word_to_matrix(&w);
            assert_eq!(rel.image, moebius(&m, &z).unwrap());
            assert_eq!(rel.alpha, automorphy_factor(&m, &z).pow(1 - k as i64).unwrap());
        }
    }
}

#[test]
fn psi2_at_square_roots() {
    let table: [(u64, i64, i64); 15] = [
        (2, -1, 3),
        (3, -1, 12),
        (5, 5, 12),
        (6, 2, 3),
        (7, -1, 3),
        (8, 1, 6),
        (10, -1, 3),
        (11, -17, 60),
        (12, -5, 6),
        (13, 11, 36),
        (19, 107, 1020),
        (23, 0, 1),
        (24, 1, 6),
        (29, -101, 420),
        (30, -4, 3),
    ];
    for (j, n, d) in table {
        let fp = fixed_point_matrix(j).unwrap();
        let z = QuadSurd::sqrt_int(j);
        assert_eq!(moebius(&fp.matrix, &z).unwrap(), z);
        assert!(fp.matrix.det().is_one());
        let rel = push_relation(2, &fp.word, &z).unwrap();
        assert_eq!(solve_fixed(&rel).unwrap(), q(n, d), "j = {j}");
        // a different automorph of the same point gives the same value
        assert_eq!(psi_exact_at(2, &z).unwrap(), QuadSurd::rational(q(n, d)), "j = {j}");
    }
}

#[test]
fn psi4_at_square_roots() {
    assert_eq!(psi_exact_sqrt(4, 2).unwrap(), QuadSurd::rational(q(-7, 180)));
    assert_eq!(psi_exact_sqrt(4, 6).unwrap(), QuadSurd::rational(q(127, 1980)));
    assert_eq!(psi_exact_sqrt(4, 19).unwrap(), QuadSurd::rational(q(31_847_977, 1_414_907_280)));
}

#[test]
fn automorph_fixes_general_quadratic_points() {
    let golden = QuadSurd::new(q(1, 2), q(1, 2), 5);
    for z in [golden, QuadSurd::new(q(1, 3), q(2, 3), 7), QuadSurd::sqrt_int(2).add_rational(&q(1, 1))] {
        let (m, w) = automorph(&z).unwrap();
        assert_eq!(moebius(&m, &z).unwrap(), z);
        assert_eq!(word_to_matrix(&w), m);
    }
}
