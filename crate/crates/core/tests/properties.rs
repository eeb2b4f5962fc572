use hypoxg::{build_mixture, ParamVector, XGammaParams};
use proptest::prelude::*;

fn rates() -> impl Strategy<Value = ParamVector> {
    prop::collection::vec(-1.0f64..1.0, 1..=5)
        .prop_map(|e| e.into_iter().map(|x| 10f64.powf(x)).collect::<Vec<f64>>())
        .prop_filter_map("rates too close", |r| ParamVector::new(r).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permutation_invariance(p in rates(), t in 0.01f64..30.0, shift in 0usize..5) {
        let mut r = p.rates().to_vec();
        let len = r.len();
        r.rotate_left(shift % len);
        r.reverse();
        let a = build_mixture(&p);
        let b = build_mixture(&ParamVector::new(r).unwrap());
        let scale = a.peak();
        prop_assert!((a.pdf(t) - b.pdf(t)).abs() <= 1e-12 * scale);
        prop_assert!((a.cdf(t) - b.cdf(t)).abs() <= 1e-12);
    }

    #[test]
    fn cdf_is_monotone_and_complements_reliability(p in rates()) {
        let m = build_mixture(&p);
        let horizon = 40.0 / p.min_rate();
        let mut last = 0.0;
        for i in 0..=400 {
            let t = horizon * i as f64 / 400.0;
            let c = m.cdf(t);
            prop_assert!(c >= last - 1e-15 && c <= 1.0);
            prop_assert!((c + m.reliability(t) - 1.0).abs() <= 1e-12);
            last = c;
        }
    }

    #[test]
    fn mgf_factorizes(p in rates(), u in -3.0f64..0.95) {
        let t = u * p.min_rate();
        let m = build_mixture(&p);
        let product: f64 = p.rates().iter().map(|&r| XGammaParams::new(r).unwrap().mgf(t).unwrap()).product();
        prop_assert!(((m.mgf(t).unwrap() - product) / product).abs() < 1e-8);
    }

    #[test]
    fn weights_sum_to_one(p in rates()) {
        prop_assert!((build_mixture(&p).weight_sum() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn mgf_derivatives_give_moments(p in rates()) {
        let m = build_mixture(&p);
        let h = 1e-3 / m.moment(1);
        let mgf = |t: f64| m.mgf(t).unwrap();
        let first = (mgf(h) - mgf(-h)) / (2.0 * h);
        let second = (mgf(h) - 2.0 + mgf(-h)) / (h * h);
        prop_assert!(((first - m.moment(1)) / m.moment(1)).abs() < 1e-5);
        prop_assert!(((second - m.moment(2)) / m.moment(2)).abs() < 1e-4);
    }

    #[test]
    fn density_is_nonnegative(p in rates(), u in 0.0f64..1.0) {
        let m = build_mixture(&p);
        let t = u * 60.0 / p.min_rate();
        prop_assert!(m.pdf_unclamped(t) >= -1e-12 * m.peak());
    }
}

#[test]
fn mgf_outside_domain_is_an_error() {
    let m = build_mixture(&ParamVector::new(vec![0.5, 2.0]).unwrap());
    assert!(m.mgf(0.5).is_err());
    assert!(m.mgf(0.49).is_ok());
}
