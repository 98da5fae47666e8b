use macregion::gaussian::{
    asymptotic_alpha_upper, asymptotic_rates, feasible_alpha_interval, gaussian_mi_oracle,
    gdpc_rates, successive_alpha_upper, successive_r1_bound, GaussianMacParams, GdpcParams,
};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = GaussianMacParams> {
    (0.1..500.0f64, 0.1..500.0f64, 0.1..500.0f64, 0.1..500.0f64)
        .prop_map(|(p1, p2, q, n)| GaussianMacParams::new(p1, p2, q, n).unwrap())
}

proptest! {
    #[test]
    fn sum_rate_dominates_and_r2_nonnegative(m in params(), rho in -0.999..0.0f64, alpha in -1.0..3.0f64) {
        let r = gdpc_rates(&m, &GdpcParams { rho, alpha }).unwrap();
        prop_assert!(r.r3 >= r.r1 - 1e-12);
        prop_assert!(r.r2 >= 0.0);
    }

    #[test]
    fn oracle_agrees(m in params(), rho in -0.95..0.0f64, alpha in -0.5..2.0f64) {
        let g = GdpcParams { rho, alpha };
        let a = gdpc_rates(&m, &g).unwrap();
        let b = gaussian_mi_oracle(&m, &g).unwrap();
        prop_assert!((a.r1 - b.r1).abs() < 1e-8);
        prop_assert!((a.r2 - b.r2).abs() < 1e-8);
        prop_assert!((a.r3 - b.r3).abs() < 1e-8);
    }

    #[test]
    fn interval_endpoints_are_feasible(m in params(), rho in -0.99..0.0f64) {
        for iv in feasible_alpha_interval(&m, rho).unwrap() {
            for a in [iv.lo, iv.hi] {
                if a.is_finite() {
                    let r = gdpc_rates(&m, &GdpcParams { rho, alpha: a }).unwrap();
                    prop_assert!(r.is_feasible());
                }
            }
        }
    }

    #[test]
    fn large_state_structure(m in params(), rho in -0.99..0.0f64, t in 0.0..1.0f64) {
        let alpha = t * asymptotic_alpha_upper(&m, rho).unwrap();
        let r = asymptotic_rates(&m, &GdpcParams { rho, alpha }).unwrap();
        prop_assert_eq!(r.r1.to_bits(), r.r3.to_bits());
        prop_assert!(r.r1 >= -1e-12);
        let alpha = t * successive_alpha_upper(&m, rho).unwrap();
        let g = GdpcParams { rho, alpha };
        let s = successive_r1_bound(&m, &g).unwrap();
        prop_assert!(s <= asymptotic_rates(&m, &g).unwrap().r1.max(0.0) + 1e-12);
    }
}
