use pgevrey::coefficients::{
    special_table_exact, transform_parameters, BranchSelector, CoefficientTable, FullParameters, ParameterSet,
};
use pgevrey::ode::{formal_residual, series, vanishing_order};
use pgevrey::rug::{Complex, Float, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = rng.gen_range(1..50) * if rng.gen_bool(0.5) { 1 } else { -1 };
    let den: i64 = rng.gen_range(1..20);
    Rational::from((num, den))
}

#[test]
fn conv_cache_matches_direct_sums() {
    let t = special_table_exact(300);
    let a = t.values();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let m = rng.gen_range(0..=300usize);
        let direct = (0..=m).fold(Rational::new(), |acc, j| acc + Rational::from(&a[j] * &a[m - j]));
        assert_eq!(t.conv_cache()[m], direct, "m = {m}");
    }
}

#[test]
fn numeric_engine_tracks_exact_table() {
    let exact = special_table_exact(120);
    for prec in [64u32, 128, 256] {
        let num = CoefficientTable::<Complex>::compute(
            ParameterSet::special().to_numeric(prec),
            BranchSelector::special(),
            prec,
            120,
        )
        .unwrap();
        let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
        for (n, (x, q)) in num.values().iter().zip(exact.values()).enumerate() {
            let q = Float::with_val(prec, q);
            let diff = Float::with_val(prec, (x.clone() - &q).abs_ref());
            let scale = q.abs().max(&Float::with_val(prec, 1));
            assert!(diff / scale < tol, "prec {prec}, n = {n}");
        }
    }
}

#[test]
fn beta_zero_tables_are_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let r = random_rational(&mut rng);
        let alpha = random_rational(&mut rng);
        // −δ/α = r³ so that r is an exact root.
        let delta = -(&alpha * Rational::from(&r * &r)) * &r;
        let p = ParameterSet::new(alpha, Rational::new(), delta).unwrap();
        let t = CoefficientTable::<Rational>::compute(p, BranchSelector::with_override(0, r.clone()), (), 100).unwrap();
        assert_eq!(t.values()[0], r);
        assert!(t.values()[1..].iter().all(|a| *a == 0));
    }
}

#[test]
fn transforms_compose() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let p = FullParameters {
            alpha: random_rational(&mut rng),
            beta: random_rational(&mut rng),
            gamma: random_rational(&mut rng),
            delta: random_rational(&mut rng),
        };
        let (s1, s2, t1, t2) = (
            random_rational(&mut rng),
            random_rational(&mut rng),
            random_rational(&mut rng),
            random_rational(&mut rng),
        );
        let twice = transform_parameters(&transform_parameters(&p, &s1, &s2).unwrap(), &t1, &t2).unwrap();
        let once = transform_parameters(&p, &Rational::from(&s1 * &t1), &Rational::from(&s2 * &t2)).unwrap();
        assert_eq!(twice, once);
    }
}

#[test]
fn rescaled_table_solves_rescaled_equation() {
    let base = special_table_exact(60);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let sigma1 = random_rational(&mut rng);
        let s = random_rational(&mut rng);
        let scaled = base.rescaled(&sigma1, &s).unwrap();
        let a0 = scaled.values()[0].clone();
        let fresh = CoefficientTable::<Rational>::compute(
            scaled.params().clone(),
            BranchSelector::with_override(0, a0),
            (),
            60,
        )
        .unwrap();
        assert_eq!(scaled.values(), fresh.values());
    }
}

#[test]
fn residual_vanishes_for_other_exact_parameters() {
    // α = 1, δ = −8: a_0 = 2.
    let p = ParameterSet::new(Rational::from(1), Rational::from((3, 5)), Rational::from(-8)).unwrap();
    let t = CoefficientTable::<Rational>::compute(p, BranchSelector::principal(0), (), 30).unwrap();
    for n in 3..=30 {
        let v = vanishing_order(n).unwrap();
        let r = formal_residual(&t, n).unwrap();
        assert!(r.coefficients[..=v].iter().all(|c| *c == 0), "N = {n}");
    }
}

#[test]
fn series_reciprocal_inverts_truncations() {
    let t = special_table_exact(40);
    for n in [1usize, 5, 17, 40] {
        let s = &t.values()[..n];
        let inv = series::reciprocal(s, n, ()).unwrap();
        let prod = series::mul(s, &inv, n, ());
        assert_eq!(prod[0], 1);
        assert!(prod[1..].iter().all(|c| *c == 0), "N = {n}");
    }
}
