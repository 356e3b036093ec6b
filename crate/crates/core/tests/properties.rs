use bohrlab::bohr;
use bohrlab::bounds;
use bohrlab::multiindex::{self, IndexTuple, MultiIndex};
use bohrlab::optimize::{self, OptConfig};
use bohrlab::polynomial::{gaussian_poly, moebius_series, HomPoly, TruncatedSeries};
use bohrlab::witness::{self, BracketConfig};
use bohrlab::{Exponent, ExponentPair};
use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        Just(Exponent::ONE),
        Just(Exponent::INF),
        (1i128..=12, 1i128..=12).prop_filter_map("p ≥ 1", |(a, b)| {
            (a >= b).then(|| Exponent::ratio(a, b).ok()).flatten()
        }),
    ]
}

fn point(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| Complex64::new(a, b)), n)
}

fn cheap() -> OptConfig {
    OptConfig::default().with_restarts(6).serial()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exponent_display_roundtrip(p in exponent()) {
        let back: Exponent = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
        prop_assert_eq!(p.conjugate().conjugate(), p);
        prop_assert!((p.recip_f64() + p.conjugate().recip_f64() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn multiplicities_sum_to_power(m in 0u32..=6, n in 1usize..=6) {
        let mut total = BigUint::from(0u32);
        let mut count = 0usize;
        let mut it = multiindex::enumerate_lambda(m, n).unwrap();
        while let Some(a) = it.advance() {
            total += multiindex::multiplicity_of(a);
            count += 1;
        }
        prop_assert_eq!(total, BigUint::from(n).pow(m));
        prop_assert_eq!(Some(count), multiindex::lambda_card(m, n).to_usize());
    }

    #[test]
    fn tuple_alpha_roundtrip(mut t in prop::collection::vec(1u32..=7, 1..8)) {
        t.sort_unstable();
        let j = IndexTuple::new(t, 7).unwrap();
        let alpha = multiindex::tuple_to_alpha(&j, 7).unwrap();
        prop_assert_eq!(alpha.degree() as usize, j.len());
        prop_assert_eq!(multiindex::alpha_to_tuple(&alpha), j.clone());
        prop_assert_eq!(multiindex::multiplicity(&alpha), multiindex::tuple_multiplicity(&j));
    }

    #[test]
    fn k_bounded_multiplicity_floor(alpha in prop::collection::vec(0u32..=4, 1..6), k in 1u32..=4) {
        let a = MultiIndex::new(alpha);
        prop_assume!(multiindex::is_k_bounded(&a, k) && a.degree() > 0);
        let m = a.degree();
        let blocks = m.div_ceil(k);
        let floor = multiindex::ln_factorial(m) - blocks as f64 * multiindex::ln_factorial(k);
        prop_assert!(multiindex::ln_big(&multiindex::multiplicity(&a)) >= floor - 1e-9);
    }

    #[test]
    fn j_sum_methods_agree(m in 1u32..=6, n in 1usize..=8, beta in prop_oneof![Just(0.0), Just(0.5), Just(1.0), Just(2.0), 0.0..3.0f64]) {
        let a = bounds::j_sum_naive(m, n, beta, 1 << 20).unwrap();
        let b = bounds::j_sum_partition(m, n, beta).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn j_sum_at_zero_counts_tuples(m in 1u32..=8, n in 1usize..=10) {
        let s = bounds::j_sum_partition(m, n, 0.0).unwrap();
        let card = multiindex::lambda_card(m - 1, n).to_f64().unwrap();
        prop_assert!((s - card).abs() <= 1e-9 * card);
    }

    #[test]
    fn j_sum_split_inequalities(m in 3u32..=8, n in 2usize..=8, q in prop_oneof![Just("4/3"), Just("3/2"), Just("2")]) {
        // The k-bounded part for k = 1 and the whole sum, against the q′-weighted bounds.
        let e = ExponentPair::new(Exponent::TWO, q.parse().unwrap());
        let beta = e.beta_f64();
        let inv_qc = e.q_conj().recip_f64();
        let total = bounds::j_sum_partition(m, n, beta).unwrap();
        let (k1, rest) = bounds::j_sum_split(m, n, beta, 1).unwrap();
        prop_assert!((k1 + rest - total).abs() <= 1e-12 * total);
        let card = multiindex::lambda_card(m - 1, n).to_f64().unwrap();
        prop_assert!(total <= card * (1.0 + 1e-12));
        prop_assert!(total.powf(inv_qc) <= card.powf(inv_qc) * (m as f64).powf(inv_qc) * (1.0 + 1e-12));
        let (k2, _) = bounds::j_sum_split(m, n, beta, 2).unwrap();
        prop_assert!(k2 >= k1 * (1.0 - 1e-12));
    }

    #[test]
    fn complement_bound_dominates(m in 2u32..=7, n in 1usize..=6, k in 0u32..=5) {
        prop_assume!(k + 2 <= m);
        let total = multiindex::lambda_card(m - 1, n);
        let bounded = if k == 0 { BigUint::from(0u32) } else { multiindex::lambda_k_card(m - 1, n, k) };
        let complement = total - bounded;
        prop_assert!(multiindex::complement_card_bound(m, n, k).unwrap() >= complement);
    }

    #[test]
    fn rate_eventually_nonincreasing(p in exponent(), q in exponent(), x in 0.0..6.0f64) {
        let r = bounds::region_classify(p, q);
        let a = r.log_exponent.to_f64().unwrap();
        let b = r.n_exponent.to_f64().unwrap();
        prop_assume!(b > 0.0);
        let start = (a / b).exp().max(2.0);
        let n1 = start * x.exp();
        let n2 = n1 * 1.5;
        prop_assert!(r.rate(n2) <= r.rate(n1) * (1.0 + 1e-12));
    }

    #[test]
    fn regions_ii_iii_agree_at_two(q in exponent()) {
        prop_assume!(!q.is_one());
        let r = bounds::region_classify(Exponent::TWO, q);
        let iii_n = 1.0 - q.recip_f64();
        prop_assert!((r.n_exponent.to_f64().unwrap() - iii_n).abs() < 1e-15);
        prop_assert!((r.log_exponent.to_f64().unwrap() - 0.5).abs() < 1e-15);
        prop_assert!(r.boundary_ii_iii);
    }

    #[test]
    fn majorant_dominates_modulus(seed in 0u64..1000, m in 1u32..=3, n in 2usize..=3, p in exponent()) {
        let poly = gaussian_poly(m, n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let sup = optimize::sup_norm(&poly, p, &cheap()).unwrap().value;
        let maj = optimize::majorant_sup(&poly, p, &cheap()).unwrap().value;
        prop_assert!(maj >= sup * (1.0 - 1e-9), "{} < {}", maj, sup);
    }

    #[test]
    fn majorant_monotone_in_ball(seed in 0u64..1000, m in 1u32..=3, n in 2usize..=3) {
        let poly = gaussian_poly(m, n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let cfg = OptConfig::default().with_restarts(12).serial();
        let mut last = 0.0;
        for p in ["1", "3/2", "2", "4", "inf"] {
            let v = optimize::majorant_sup(&poly, p.parse().unwrap(), &cfg).unwrap().value;
            prop_assert!(v >= last * (1.0 - 1e-6), "p={}: {} < {}", p, v, last);
            last = v;
        }
    }

    #[test]
    fn holder_chain(z in point(6), p in exponent(), q in exponent()) {
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        let a = optimize::lp_norm(&z, lo);
        let b = optimize::lp_norm(&z, hi);
        prop_assert!(b <= a * (1.0 + 1e-12));
        let gap = lo.recip_f64() - hi.recip_f64();
        prop_assert!(a <= b * 6f64.powf(gap) * (1.0 + 1e-12));
    }

    #[test]
    fn retraction_lands_on_sphere(z in point(5), p in exponent()) {
        prop_assume!(z.iter().any(|v| v.norm() > 1e-6));
        let mut w = z.clone();
        optimize::retract_to_sphere(&mut w, p);
        if p.is_infinite() {
            prop_assert!(w.iter().all(|v| (v.norm() - 1.0).abs() < 1e-12));
        } else {
            prop_assert!((optimize::lp_norm(&w, p) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn xinfty_certificate(z in point(9), q in prop_oneof![Just("2"), Just("3"), Just("4"), Just("inf")]) {
        let q: Exponent = q.parse().unwrap();
        let lhs = optimize::x_infty_norm(&z).unwrap();
        let id = optimize::id_norm_q_to_xinfty(z.len(), q).unwrap();
        prop_assert!(lhs <= id * optimize::lp_norm(&z, q) * (1.0 + 1e-12));
    }

    #[test]
    fn split_factorization_multiplies_back(z in point(5), p in prop_oneof![Just("2"), Just("4"), Just("inf")]) {
        let (y, w) = optimize::split_factorize(&z, p.parse().unwrap()).unwrap();
        for ((a, b), c) in y.iter().zip(&w).zip(&z) {
            prop_assert!((a * b - c).norm() <= 1e-12 * c.norm().max(1.0));
        }
    }

    #[test]
    fn bohr_sum_monotone(seed in 0u64..500, r1 in 0.0..0.9f64, dr in 0.0..0.1f64) {
        let f = bohrlab::polynomial::random_series(2, 3, seed, 1000, Exponent::INF, &cheap()).unwrap();
        let lo = optimize::bohr_sum(&f, r1, Exponent::TWO, &cheap()).unwrap().value;
        let hi = optimize::bohr_sum(&f, r1 + dr, Exponent::TWO, &cheap()).unwrap().value;
        prop_assert!(hi >= lo * (1.0 - 1e-9));
        let inf = optimize::bohr_sum(&f, r1, Exponent::INF, &cheap()).unwrap().value;
        prop_assert!(inf >= lo * (1.0 - 1e-9));
    }

    #[test]
    fn k_m_inverts_chi(m in 1u32..=6, n in 1usize..=40, p in exponent(), q in exponent()) {
        let e = ExponentPair::new(p, q);
        let chi = witness::chi_bracket(m, n, &e, &BracketConfig::analytic()).unwrap();
        prop_assert!(chi.is_consistent());
        let k = bohr::k_m_from_chi(&chi);
        prop_assert!(k.lower <= k.upper);
        prop_assert!((k.lower.powi(-(m as i32)) - chi.upper).abs() <= 1e-9 * chi.upper);
        prop_assert!((k.upper.powi(-(m as i32)) - chi.lower).abs() <= 1e-9 * chi.lower);
    }

    #[test]
    fn k_bracket_below_one_third(n in 1usize..=64, p in exponent(), q in exponent(), m_max in 1u32..=6) {
        let e = ExponentPair::new(p, q);
        let b = bohr::k_bracket(n, &e, m_max, &BracketConfig::analytic()).unwrap();
        prop_assert!(b.lower <= b.upper);
        prop_assert!(b.upper <= bohr::ONE_THIRD + 1e-12);
        for m in 1..=m_max {
            let km = bohr::k_m_bracket(m, n, &e, &BracketConfig::analytic()).unwrap();
            prop_assert!(b.upper <= km.upper + 1e-12);
        }
    }

    #[test]
    fn poly_json_roundtrip(seed in 0u64..1000, m in 0u32..=3, n in 1usize..=3) {
        let poly = gaussian_poly(m, n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let back = HomPoly::from_json(&poly.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), poly.to_json());
    }

    #[test]
    fn moebius_series_json_roundtrip(a in 0.0..0.99f64, deg in 1u32..=10) {
        let f = moebius_series(a, deg).unwrap();
        let back = TruncatedSeries::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), f.to_json());
    }
}
