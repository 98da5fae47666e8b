//! Limit `Q -> inf` of the GDPC rates, with `alpha` and `rho` held fixed.

use rayon::prelude::*;
use serde::Serialize;

use super::{half_log2, linspace, GaussianMacParams, GdpcParams, GdpcRates, RhoRange, SweepPoint};
use crate::dm::RatePentagon;
use crate::error::{Error, Result};
use crate::geometry::{union_region, RegionPolygon};

fn effective_power(m: &GaussianMacParams, rho: f64) -> Result<f64> {
    if !rho.is_finite() || rho.abs() > 1.0 {
        return Err(Error::domain("rho", rho, "(-1, 1)"));
    }
    if rho.abs() == 1.0 {
        return Err(Error::DegenerateCorrelation(rho));
    }
    if !(m.p1 > 0.0) {
        return Err(Error::domain("P1", m.p1, "(0, inf) for GDPC rates"));
    }
    Ok(m.p1 * (1.0 - rho * rho))
}

fn check_alpha(alpha: f64, hi: f64) -> Result<()> {
    if alpha >= -ALPHA_SLACK && alpha <= hi * (1.0 + ALPHA_SLACK) {
        Ok(())
    } else {
        Err(Error::domain("alpha", alpha, format!("[0, {hi}]")))
    }
}

/// Rounding allowance on the alpha ranges.
const ALPHA_SLACK: f64 = 1e-12;

/// Large-state rates, with `c = P1(1 - rho^2)`:
///
/// ```text
/// r1 = r3 = 1/2 log2( c / (c(1-alpha)^2 + alpha^2 N) )
/// r2      = 1/2 log2( 1 + P2 / (N + c(1-alpha)^2 / alpha^2) )
/// ```
///
/// `r2` is 0 at `alpha = 0`. `Q` in `m` is ignored. `alpha` must lie in
/// `[0, 2c/(c+N)]`.
pub fn asymptotic_rates(m: &GaussianMacParams, g: &GdpcParams) -> Result<GdpcRates> {
    let c = effective_power(m, g.rho)?;
    let a = g.alpha;
    check_alpha(a, 2.0 * c / (c + m.n))?;
    let b = (1.0 - a) * (1.0 - a);
    let r1 = half_log2(c / (c * b + a * a * m.n));
    let r2 = if a == 0.0 {
        0.0
    } else {
        half_log2(1.0 + m.p2 / (m.n + c * b / (a * a)))
    };
    Ok(GdpcRates { r1, r2, r3: r1 })
}

/// Upper end of the feasible interval `[0, 2c/(c+N)]`.
pub fn asymptotic_alpha_upper(m: &GaussianMacParams, rho: f64) -> Result<f64> {
    let c = effective_power(m, rho)?;
    Ok(2.0 * c / (c + m.n))
}

pub fn asymptotic_sweep(
    m: &GaussianMacParams,
    rho_steps: usize,
    alpha_steps: usize,
    range: RhoRange,
) -> Result<Vec<SweepPoint>> {
    if rho_steps < 2 || alpha_steps < 2 {
        return Err(Error::domain(
            "grid steps",
            rho_steps.min(alpha_steps) as f64,
            "[2, inf)",
        ));
    }
    let rhos = range.grid(rho_steps);
    let per_rho: Result<Vec<Vec<SweepPoint>>> = rhos
        .par_iter()
        .map(|&rho| {
            let hi = asymptotic_alpha_upper(m, rho)?;
            linspace(0.0, hi, alpha_steps)
                .into_iter()
                .map(|alpha| {
                    let g = GdpcParams { rho, alpha };
                    let mut rates = asymptotic_rates(m, &g)?;
                    // endpoints sit on r1 = 0 up to rounding
                    rates.r1 = rates.r1.max(0.0);
                    rates.r3 = rates.r3.max(0.0);
                    Ok(SweepPoint { rho, alpha, rates })
                })
                .collect()
        })
        .collect();
    Ok(per_rho?.into_iter().flatten().collect())
}

pub fn asymptotic_inner_region(
    m: &GaussianMacParams,
    rho_steps: usize,
    alpha_steps: usize,
    range: RhoRange,
) -> Result<RegionPolygon> {
    let pentagons: Vec<RatePentagon> = asymptotic_sweep(m, rho_steps, alpha_steps, range)?
        .iter()
        .map(|p| p.rates.pentagon())
        .collect();
    Ok(union_region(&pentagons))
}

/// Outer bound in the large-state limit: the sum rate collapses to the
/// informed encoder's single-user rate.
pub fn asymptotic_outer_region(m: &GaussianMacParams) -> RatePentagon {
    let c1 = half_log2(1.0 + m.p1 / m.n);
    RatePentagon::new(c1, half_log2(1.0 + m.p2 / m.n), c1)
}

/// Upper end of the alpha range `[0, 2c/(c+P2+N)]` of the successive
/// decoding bound.
pub fn successive_alpha_upper(m: &GaussianMacParams, rho: f64) -> Result<f64> {
    let c = effective_power(m, rho)?;
    Ok(2.0 * c / (c + m.p2 + m.n))
}

/// Informed-encoder rate when the uninformed message is decoded first and
/// its codeword removed: `1/2 log2( c / (c(1-alpha)^2 + alpha^2 (P2+N)) )`,
/// clamped at 0. `alpha` must lie in `[0, 2c/(c+P2+N)]`.
pub fn successive_r1_bound(m: &GaussianMacParams, g: &GdpcParams) -> Result<f64> {
    let c = effective_power(m, g.rho)?;
    let a = g.alpha;
    check_alpha(a, 2.0 * c / (c + m.p2 + m.n))?;
    let v = half_log2(c / (c * (1.0 - a) * (1.0 - a) + a * a * (m.p2 + m.n)));
    Ok(v.max(0.0))
}

/// Best rate for the uninformed encoder when the informed one only helps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HelperOptimum {
    pub rho: f64,
    pub alpha: f64,
    pub r2_max: f64,
}

/// Closed form: `rho = 0`, `alpha = min(1, 2 P1 / (P1 + P2 + N))`.
pub fn helper_optimum(m: &GaussianMacParams) -> Result<HelperOptimum> {
    if !(m.p1 > 0.0) {
        return Err(Error::domain("P1", m.p1, "(0, inf)"));
    }
    let alpha = (2.0 * m.p1 / (m.p1 + m.p2 + m.n)).min(1.0);
    let g = GdpcParams { rho: 0.0, alpha };
    Ok(HelperOptimum {
        rho: 0.0,
        alpha,
        r2_max: asymptotic_rates(m, &g)?.r2,
    })
}

/// Numerical counterpart of [`helper_optimum`]: plain grid search of the
/// large-state `r2` over `rho in [-1, 0]` and `alpha in [0, 2c/(c+P2+N)]`,
/// the range on which the informed codeword can be decoded first.
pub fn helper_optimum_search(
    m: &GaussianMacParams,
    rho_steps: usize,
    alpha_steps: usize,
) -> Result<HelperOptimum> {
    if rho_steps < 2 || alpha_steps < 2 {
        return Err(Error::domain(
            "grid steps",
            rho_steps.min(alpha_steps) as f64,
            "[2, inf)",
        ));
    }
    let mut best = HelperOptimum {
        rho: 0.0,
        alpha: 0.0,
        r2_max: f64::NEG_INFINITY,
    };
    for rho in RhoRange::Standard.grid(rho_steps) {
        let hi = successive_alpha_upper(m, rho)?;
        for alpha in linspace(0.0, hi, alpha_steps) {
            let r2 = asymptotic_rates(m, &GdpcParams { rho, alpha })?.r2;
            if r2 > best.r2_max {
                best = HelperOptimum {
                    rho,
                    alpha,
                    r2_max: r2,
                };
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::gdpc_rates;
    use crate::geometry::pentagon_vertices;
    use approx::assert_abs_diff_eq;

    fn p(p1: f64) -> GaussianMacParams {
        GaussianMacParams::new(p1, 50.0, 0.0, 60.0).unwrap()
    }

    #[test]
    fn alpha_upper_edge_has_zero_rate() {
        for p1 in [15.0, 50.0, 120.0, 2000.0] {
            for rho in [-0.9, -0.5, 0.0] {
                let m = p(p1);
                let hi = asymptotic_alpha_upper(&m, rho).unwrap();
                let r = asymptotic_rates(&m, &GdpcParams { rho, alpha: hi }).unwrap();
                assert!(r.r1.abs() < 1e-12);
                let r0 = asymptotic_rates(&m, &GdpcParams { rho, alpha: 0.0 }).unwrap();
                assert!(r0.r1.abs() < 1e-12);
                assert_eq!(r0.r2, 0.0);
            }
        }
    }

    #[test]
    fn rates_at_unit_alpha() {
        let m = p(120.0);
        let r = asymptotic_rates(
            &m,
            &GdpcParams {
                rho: 0.0,
                alpha: 1.0,
            },
        )
        .unwrap();
        assert_abs_diff_eq!(r.r1, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.r2, 0.4372345589580706, epsilon = 1e-12);
        assert_eq!(r.r1, r.r3);
        assert!(asymptotic_rates(
            &m,
            &GdpcParams {
                rho: 0.0,
                alpha: 1.4
            }
        )
        .is_err());
        assert!(asymptotic_rates(
            &m,
            &GdpcParams {
                rho: 0.0,
                alpha: -0.1
            }
        )
        .is_err());
    }

    #[test]
    fn region_intercepts() {
        let r = asymptotic_inner_region(&p(120.0), 21, 81, RhoRange::Standard).unwrap();
        assert!((r.max_r2_at(0.0).unwrap() - 0.4372345589580706).abs() < 1e-3);
        let r = asymptotic_inner_region(&p(50.0), 21, 81, RhoRange::Standard).unwrap();
        let h = helper_optimum(&p(50.0)).unwrap();
        assert!((r.max_r2_at(0.0).unwrap() - h.r2_max).abs() < 1e-3);
        for p1 in [50.0, 120.0, 2000.0] {
            let m = p(p1);
            let inner = asymptotic_inner_region(&m, 21, 81, RhoRange::Standard).unwrap();
            let outer = pentagon_vertices(&asymptotic_outer_region(&m));
            assert!(inner.is_subset(&outer, 1e-9));
        }
    }

    #[test]
    fn outer_bound_values() {
        let o = asymptotic_outer_region(&p(50.0));
        assert_abs_diff_eq!(o.c1, 0.4372345589580706, epsilon = 1e-12);
        assert_abs_diff_eq!(o.c2, 0.4372345589580706, epsilon = 1e-12);
        assert_eq!(o.c1, o.c12);
        let o = asymptotic_outer_region(&p(2000.0));
        assert_abs_diff_eq!(o.c1, 2.5507690132, epsilon = 1e-9);
        let o = asymptotic_outer_region(&p(120.0));
        assert_abs_diff_eq!(o.c1, 0.792481250360578, epsilon = 1e-12);
    }

    #[test]
    fn successive_bound() {
        let m = p(50.0);
        let g = GdpcParams {
            rho: 0.0,
            alpha: 50.0 / 160.0,
        };
        assert_abs_diff_eq!(
            successive_r1_bound(&m, &g).unwrap(),
            half_log2(1.0 + 50.0 / 110.0),
            epsilon = 1e-12
        );
        let hi = successive_alpha_upper(&m, 0.0).unwrap();
        assert_abs_diff_eq!(hi, 100.0 / 160.0, epsilon = 1e-15);
        let g = GdpcParams {
            rho: 0.0,
            alpha: hi,
        };
        assert!(successive_r1_bound(&m, &g).unwrap() < 1e-12);
        let g = GdpcParams {
            rho: 0.0,
            alpha: 0.9,
        };
        assert!(successive_r1_bound(&m, &g).is_err());
        let m = p(120.0);
        let g = GdpcParams {
            rho: 0.0,
            alpha: 1.0,
        };
        assert_abs_diff_eq!(
            successive_r1_bound(&m, &g).unwrap(),
            half_log2(120.0 / 110.0),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            successive_r1_bound(&m, &g).unwrap(),
            0.06276544,
            epsilon = 1e-8
        );
        for rho in linspace(-0.9, 0.0, 10) {
            let hi = successive_alpha_upper(&m, rho).unwrap();
            for alpha in linspace(0.0, hi, 20) {
                let g = GdpcParams { rho, alpha };
                let s = successive_r1_bound(&m, &g).unwrap();
                assert!(s <= asymptotic_rates(&m, &g).unwrap().r1.max(0.0) + 1e-15);
            }
        }
    }

    #[test]
    fn helper_closed_form() {
        let h = helper_optimum(&p(50.0)).unwrap();
        assert_abs_diff_eq!(h.alpha, 0.625, epsilon = 1e-15);
        assert_abs_diff_eq!(h.r2_max, half_log2(1.0 + 50.0 / 78.0), epsilon = 1e-12);
        assert_abs_diff_eq!(h.r2_max, 0.3572988905688758, epsilon = 1e-12);
        let h = helper_optimum(&p(120.0)).unwrap();
        assert_eq!(h.alpha, 1.0);
        assert_abs_diff_eq!(h.r2_max, 0.4372345589580706, epsilon = 1e-12);
    }

    #[test]
    fn helper_search_agrees_with_closed_form() {
        for p1 in [15.0, 50.0, 120.0, 2000.0] {
            let m = p(p1);
            let a = helper_optimum(&m).unwrap();
            let n = helper_optimum_search(&m, 201, 201).unwrap();
            assert!(
                (a.r2_max - n.r2_max).abs() < 1e-4,
                "P1 {p1}: {} vs {}",
                a.r2_max,
                n.r2_max
            );
            assert!(n.r2_max <= a.r2_max + 1e-12);
        }
    }

    #[test]
    fn finite_rates_converge() {
        let m = GaussianMacParams::new(15.0, 50.0, 1e10, 60.0).unwrap();
        for rho in linspace(-0.999, 0.0, 41) {
            let hi = asymptotic_alpha_upper(&m, rho).unwrap();
            for alpha in linspace(0.0, hi, 81) {
                let g = GdpcParams { rho, alpha };
                let f = gdpc_rates(&m, &g).unwrap();
                let a = asymptotic_rates(&m, &g).unwrap();
                assert!((f.r1 - a.r1).abs() < 1e-4);
                assert!((f.r2 - a.r2).abs() < 1e-4);
                assert!((f.r3 - a.r3).abs() < 1e-4);
            }
        }
    }
}
