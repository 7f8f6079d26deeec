//! Randomized invariants: algebraic identities of the matrix calculus,
//! ordering relations among the tail curves, and bitwise round-trips of the
//! serialization paths.

use proptest::prelude::*;

use matrix_tails::bounds::mgf::master_tail_numeric;
use matrix_tails::bounds::{
    azuma_tail, bennett_h, bernstein_bounded_tail, bernstein_subexp_tail,
    chernoff_divergence_tail, chernoff_multiplicative_tail, gaussian_series_tail, Side,
};
use matrix_tails::linalg::io::{matrix_to_csv, parse_matrix_csv};
use matrix_tails::linalg::{dilation, trace_product, variance_parameter, weak_variance_estimate};
use matrix_tails::rng::KeyedStream;
use matrix_tails::verify::ci::clopper_pearson;
use matrix_tails::{MatrixFamily, MgfKind, MgfModel, RectMatrix, SymMatrix, VarianceMode};

fn sym_matrix(max_dim: usize, max_entry: f64) -> impl Strategy<Value = SymMatrix> {
    (1..=max_dim).prop_flat_map(move |d| {
        prop::collection::vec(-max_entry..max_entry, d * d)
            .prop_map(move |data| SymMatrix::new(d, data).unwrap())
    })
}

fn rect_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = RectMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(-3.0..3.0f64, r * c).prop_map(move |data| {
            RectMatrix::from_rows(
                (0..r).map(|i| data[i * c..(i + 1) * c].to_vec()).collect(),
            )
            .unwrap()
        })
    })
}

fn family(max_dim: usize, max_members: usize) -> impl Strategy<Value = MatrixFamily> {
    (1..=max_dim, 1..=max_members).prop_flat_map(|(d, n)| {
        prop::collection::vec(prop::collection::vec(-2.0..2.0f64, d * d), n).prop_map(
            move |raw| {
                let members = raw
                    .into_iter()
                    .map(|data| SymMatrix::new(d, data).unwrap())
                    .collect();
                MatrixFamily::self_adjoint(members).unwrap()
            },
        )
    })
}

proptest! {
    // --- matrix calculus ---------------------------------------------------

    #[test]
    fn exp_respects_the_spectral_mapping(a in sym_matrix(5, 2.0)) {
        let expd = a.exp_m().unwrap();
        let from_values: Vec<f64> = a.eigen().values.iter().map(|l| l.exp()).collect();
        let direct = expd.eigen().values;
        for (x, y) in direct.iter().zip(&from_values) {
            prop_assert!((x - y).abs() <= 1e-10 * y.max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn affine_transfer_rule(a in sym_matrix(5, 2.5)) {
        // I + A <= e^A for every symmetric A
        let gap = a
            .exp_m()
            .unwrap()
            .sub(&SymMatrix::identity(a.dim()).add(&a).unwrap())
            .unwrap()
            .lambda_min();
        prop_assert!(gap >= -1e-10 * a.spectral_norm().exp());
    }

    #[test]
    fn cosh_transfer_rule(a in sym_matrix(5, 2.0)) {
        // cosh A <= e^{A^2/2}
        let dom = a.square().scale(0.5).exp_m().unwrap();
        let gap = dom.sub(&a.cosh_m().unwrap()).unwrap().lambda_min();
        prop_assert!(gap >= -1e-10 * dom.lambda_max());
    }

    #[test]
    fn golden_thompson_trace_inequality(
        a in sym_matrix(4, 1.5),
        h_data in prop::collection::vec(-1.5..1.5f64, 16),
    ) {
        let d = a.dim();
        let h = SymMatrix::new(d, h_data[..d * d].to_vec()).unwrap();
        let lhs = a.add(&h).unwrap().trace_exp();
        let rhs = trace_product(&a.exp_m().unwrap(), &h.exp_m().unwrap()).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-12, "{lhs} > {rhs}");
    }

    #[test]
    fn dilation_identities(b in rect_matrix(3, 4)) {
        let s = dilation(&b);
        // spectral edge of the dilation is the operator norm
        let edge = s.lambda_max();
        let norm = b.spectral_norm();
        prop_assert!((edge - norm).abs() <= 1e-9 * norm.max(1.0));
        // the square is block-diagonal with the two Gram products
        let sq = s.square();
        let (r, c) = (b.rows(), b.cols());
        let left = b.gram_left();
        let right = b.gram_right();
        for i in 0..r + c {
            for j in 0..r + c {
                let expect = if i < r && j < r {
                    left.get(i, j)
                } else if i >= r && j >= r {
                    right.get(i - r, j - r)
                } else {
                    0.0
                };
                prop_assert!((sq.get(i, j) - expect).abs() <= 1e-10 * norm.max(1.0) * norm.max(1.0));
            }
        }
    }

    #[test]
    fn variance_statistics_chain(f in family(4, 4), seed in 0u64..1000) {
        let members = f.as_self_adjoint().unwrap();
        let d = members[0].dim() as f64;
        let sigma2 = variance_parameter(&f, VarianceMode::SelfAdjoint).unwrap();
        let aw = variance_parameter(&f, VarianceMode::AhlswedeWinter).unwrap();
        let weak = weak_variance_estimate(&f, 3, seed).unwrap();
        let tol = 1e-9 * sigma2.max(1.0);
        prop_assert!(weak <= sigma2 + tol, "weak {weak} > sigma2 {sigma2}");
        prop_assert!(sigma2 <= aw + tol, "sigma2 {sigma2} > aw {aw}");
        prop_assert!(aw <= d * sigma2 + tol, "aw {aw} > d sigma2 {}", d * sigma2);
    }

    // --- tail curve orderings ----------------------------------------------

    #[test]
    fn gaussian_tail_monotone_and_scale_equivariant(
        sigma2 in 0.1..5.0f64,
        d in 1usize..6,
        t in 0.0..4.0f64,
        dt in 0.01..2.0f64,
        c in 0.5..3.0f64,
    ) {
        let base = gaussian_series_tail(sigma2, d, t, false).unwrap();
        let further = gaussian_series_tail(sigma2, d, t + dt, false).unwrap();
        prop_assert!(further <= base);
        let scaled = gaussian_series_tail(c * c * sigma2, d, c * t, false).unwrap();
        prop_assert!((scaled - base).abs() <= 1e-12 * base.max(1e-300));
        let two = gaussian_series_tail(sigma2, d, t, true).unwrap();
        prop_assert!((two - 2.0 * base).abs() <= 1e-14 * two);
    }

    #[test]
    fn conditionally_symmetric_martingale_matches_series_shape(
        sigma2 in 0.1..5.0f64,
        d in 1usize..6,
        t in 0.0..4.0f64,
    ) {
        // sharpened exponent 1/2: same curve as the scalar-noise series
        let a = azuma_tail(sigma2, d, t, true).unwrap();
        let g = gaussian_series_tail(sigma2, d, t, false).unwrap();
        prop_assert!((a - g).abs() <= 1e-15 * a.max(1e-300));
        // generic exponent is 4x weaker exactly
        let generic = azuma_tail(sigma2, d, t, false).unwrap();
        let recompressed = gaussian_series_tail(sigma2, d, t / 2.0, false).unwrap();
        prop_assert!((generic - recompressed).abs() <= 1e-14 * generic.max(1e-300));
    }

    #[test]
    fn bennett_h_dominates_its_quadratic_minorant(u in 0.0..20.0f64) {
        // h(u) >= (u^2/2) / (1 + u/3), the inequality that turns the Bennett
        // curve into the Bernstein curve
        let h = bennett_h(u).unwrap();
        let minorant = 0.5 * u * u / (1.0 + u / 3.0);
        prop_assert!(h >= minorant - 1e-12 * h.max(1.0));
    }

    #[test]
    fn bounded_bernstein_chain_is_ordered(
        sigma2 in 0.05..4.0f64,
        r in 0.1..3.0f64,
        d in 1usize..6,
        t in 0.0..6.0f64,
    ) {
        let b = bernstein_bounded_tail(sigma2, r, d, t).unwrap();
        prop_assert!(b.bennett <= b.bernstein * (1.0 + 1e-12));
        prop_assert!(b.bernstein <= b.split * (1.0 + 1e-12));
    }

    #[test]
    fn subexponential_main_below_split(
        sigma2 in 0.05..4.0f64,
        r in 0.1..3.0f64,
        d in 1usize..6,
        t in 0.0..6.0f64,
    ) {
        let b = bernstein_subexp_tail(sigma2, r, d, t).unwrap();
        prop_assert!(b.main <= b.split * (1.0 + 1e-12));
    }

    #[test]
    fn chernoff_full_form_is_tighter_than_simplified(
        mu in 0.2..10.0f64,
        r in 0.1..2.0f64,
        d in 1usize..6,
        delta_lower in 0.0..1.0f64,
        delta_upper in 0.0..6.0f64,
    ) {
        let full = chernoff_multiplicative_tail(mu, r, d, delta_lower, Side::Lower, false).unwrap();
        let simple = chernoff_multiplicative_tail(mu, r, d, delta_lower, Side::Lower, true).unwrap();
        prop_assert!(full <= simple * (1.0 + 1e-12), "lower: {full} > {simple}");
        let full_u = chernoff_multiplicative_tail(mu, r, d, delta_upper, Side::Upper, false).unwrap();
        let simple_u = chernoff_multiplicative_tail(mu, r, d, delta_upper, Side::Upper, true).unwrap();
        prop_assert!(full_u <= simple_u * (1.0 + 1e-12), "upper: {full_u} > {simple_u}");
    }

    #[test]
    fn chernoff_divergence_tail_is_at_most_trivial(
        n in 1usize..30,
        d in 1usize..6,
        mu_bar in 0.05..0.95f64,
        frac in 0.0..1.0f64,
    ) {
        // moving alpha toward either end from mu_bar only shrinks the bound
        let alpha_low = mu_bar * frac;
        let low = chernoff_divergence_tail(n, d, mu_bar, alpha_low, Side::Lower).unwrap();
        prop_assert!(low <= d as f64 * (1.0 + 1e-12));
        let at_center = chernoff_divergence_tail(n, d, mu_bar, mu_bar, Side::Lower).unwrap();
        prop_assert!((at_center - d as f64).abs() <= 1e-12 * d as f64);
        let alpha_high = mu_bar + (1.0 - mu_bar) * frac;
        let high = chernoff_divergence_tail(n, d, mu_bar, alpha_high, Side::Upper).unwrap();
        prop_assert!(high <= d as f64 * (1.0 + 1e-12));
    }

    #[test]
    fn master_bound_matches_gaussian_closed_form_on_isotropic_shapes(
        sigma2 in 0.2..4.0f64,
        d in 1usize..4,
        t in 0.1..3.0f64,
    ) {
        let model = MgfModel::new(
            MgfKind::Gaussian,
            SymMatrix::scaled_identity(d, sigma2),
        ).unwrap();
        let (bound, theta_star) = master_tail_numeric(&[model], t, d).unwrap();
        let closed = gaussian_series_tail(sigma2, d, t, false).unwrap();
        prop_assert!((bound - closed).abs() <= 1e-6 * closed, "{bound} vs {closed}");
        prop_assert!((theta_star - t / sigma2).abs() <= 1e-4 * (t / sigma2).max(1.0));
    }

    // --- statistics and serialization ---------------------------------------

    #[test]
    fn clopper_pearson_sandwiches_the_point_estimate(
        k_frac in 0.0..=1.0f64,
        n in 1u64..5000,
        confidence in 0.5..0.999f64,
    ) {
        let k = ((n as f64) * k_frac).round() as u64;
        let (lo, hi) = clopper_pearson(k, n, confidence).unwrap();
        let p_hat = k as f64 / n as f64;
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!((0.0..=1.0).contains(&hi));
        prop_assert!(lo <= p_hat + 1e-12 && p_hat <= hi + 1e-12);
        // higher confidence never narrows the interval
        let (lo99, hi99) = clopper_pearson(k, n, 0.999).unwrap();
        prop_assert!(lo99 <= lo + 1e-12);
        prop_assert!(hi99 >= hi - 1e-12);
    }

    #[test]
    fn csv_round_trip_is_bitwise(b in rect_matrix(4, 4)) {
        let text = matrix_to_csv(&b);
        let back = parse_matrix_csv(&text).unwrap();
        prop_assert_eq!(b.rows(), back.rows());
        prop_assert_eq!(b.cols(), back.cols());
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                prop_assert_eq!(b.get(i, j).to_bits(), back.get(i, j).to_bits());
            }
        }
    }

    #[test]
    fn keyed_streams_are_pure_functions_of_their_key(
        seed in any::<u64>(),
        trial in any::<u64>(),
        summand in any::<u64>(),
    ) {
        let draw = |mut s: KeyedStream| {
            (0..8).map(|_| s.uniform_open01()).collect::<Vec<_>>()
        };
        let a = draw(KeyedStream::new(seed, trial, summand));
        let b = draw(KeyedStream::new(seed, trial, summand));
        prop_assert_eq!(&a, &b);
        for x in &a {
            prop_assert!(*x > 0.0 && *x < 1.0);
        }
        // a perturbed key decorrelates: not all draws identical
        let c = draw(KeyedStream::new(seed, trial, summand.wrapping_add(1)));
        prop_assert_ne!(&a, &c);
    }
}
