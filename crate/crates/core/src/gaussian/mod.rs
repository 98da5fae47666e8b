//! Gaussian MAC `Y = X1 + X2 + S + Z` with state `S ~ N(0, Q)` known
//! non-causally to encoder 1 only.
//!
//! The informed encoder uses generalized dirty paper coding (GDPC): the
//! auxiliary is `U1 = X1 + alpha S` where `X1 ~ N(0, P1)` may be correlated
//! with the state through a coefficient `rho <= 0`. Negative correlation
//! spends part of the power on cancelling the state (see [`gdpc_decompose`]).

mod asymptotic;
mod oracle;

pub use asymptotic::{
    asymptotic_alpha_upper, asymptotic_inner_region, asymptotic_outer_region, asymptotic_rates,
    asymptotic_sweep, helper_optimum, helper_optimum_search, successive_alpha_upper,
    successive_r1_bound, HelperOptimum,
};
pub use oracle::gaussian_mi_oracle;

use rayon::prelude::*;
use serde::Serialize;

use crate::dm::RatePentagon;
use crate::error::{Error, Result};
use crate::geometry::{union_region, RegionPolygon};

/// Default number of correlation samples over `[-1, 0]`.
pub const DEFAULT_RHO_STEPS: usize = 21;
/// Default number of `alpha` samples over [`ALPHA_WINDOW`].
pub const DEFAULT_ALPHA_STEPS: usize = 81;
/// Range of DPC scalings swept by the finite-variance inner region.
pub const ALPHA_WINDOW: (f64, f64) = (-0.5, 2.0);

/// Resolution of the numerically located feasible-alpha endpoints.
pub const ALPHA_RESOLUTION: f64 = 1e-9;

/// Beyond this magnitude a feasible alpha interval is reported as unbounded.
const ALPHA_SEARCH_LIMIT: f64 = 1e6;

/// `1/2 log2(x)`.
#[inline]
pub fn half_log2(x: f64) -> f64 {
    0.5 * x.log2()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianMacParams {
    /// Power of the informed encoder.
    pub p1: f64,
    /// Power of the uninformed encoder.
    pub p2: f64,
    /// State variance (ignored by the large-state operations).
    pub q: f64,
    /// Noise variance.
    pub n: f64,
}

impl GaussianMacParams {
    pub fn new(p1: f64, p2: f64, q: f64, n: f64) -> Result<Self> {
        for (name, v) in [("P1", p1), ("P2", p2), ("Q", q)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::domain(name, v, "[0, inf)"));
            }
        }
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::domain("N", n, "(0, inf)"));
        }
        Ok(Self { p1, p2, q, n })
    }

    /// Same powers and noise with a different state variance.
    pub fn with_q(&self, q: f64) -> Result<Self> {
        Self::new(self.p1, self.p2, q, self.n)
    }

    fn require_p1(&self) -> Result<()> {
        if self.p1 > 0.0 {
            Ok(())
        } else {
            Err(Error::domain("P1", self.p1, "(0, inf) for GDPC rates"))
        }
    }
}

/// Range of correlation coefficients swept by region operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RhoRange {
    /// `[-1, 0]`: the informed input is never positively correlated with
    /// the state.
    Standard,
    /// `[-1, 1)`, for exploring positive correlation.
    Extended,
}

impl RhoRange {
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            RhoRange::Standard => (-1.0, 0.0),
            RhoRange::Extended => (-1.0, 1.0),
        }
    }

    /// Evenly spaced correlations; the degenerate values `|rho| = 1` are
    /// left out since they carry no GDPC rate.
    pub fn grid(&self, steps: usize) -> Vec<f64> {
        let (lo, hi) = self.bounds();
        linspace(lo, hi, steps)
            .into_iter()
            .filter(|r| r.abs() < 1.0)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GdpcParams {
    pub rho: f64,
    pub alpha: f64,
}

impl GdpcParams {
    /// `rho` in `[-1, 0]`, `alpha` finite.
    pub fn new(rho: f64, alpha: f64) -> Result<Self> {
        Self::in_range(rho, alpha, RhoRange::Standard)
    }

    pub fn in_range(rho: f64, alpha: f64, range: RhoRange) -> Result<Self> {
        let (lo, hi) = range.bounds();
        let ok = match range {
            RhoRange::Standard => (lo..=hi).contains(&rho),
            RhoRange::Extended => rho >= lo && rho < hi,
        };
        if !ok {
            let label = match range {
                RhoRange::Standard => "[-1, 0]",
                RhoRange::Extended => "[-1, 1)",
            };
            return Err(Error::domain("rho", rho, label));
        }
        if !alpha.is_finite() {
            return Err(Error::domain("alpha", alpha, "(-inf, inf)"));
        }
        Ok(Self { rho, alpha })
    }

    /// Plain DPC with Costa's scaling `alpha = P1 / (P1 + N)`.
    pub fn costa(m: &GaussianMacParams) -> Self {
        Self {
            rho: 0.0,
            alpha: m.p1 / (m.p1 + m.n),
        }
    }
}

/// The three GDPC rate expressions; individual values may be negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GdpcRates {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl GdpcRates {
    pub fn min(&self) -> f64 {
        self.r1.min(self.r2).min(self.r3)
    }

    pub fn is_feasible(&self) -> bool {
        self.r1 >= 0.0 && self.r2 >= 0.0 && self.r3 >= 0.0
    }

    pub fn pentagon(&self) -> RatePentagon {
        RatePentagon::new(self.r1, self.r2, self.r3)
    }

    /// Largest R2 on the pentagon at `R1 = 0`.
    pub fn r2_intercept(&self) -> f64 {
        self.r2.min(self.r3).max(0.0)
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !rho.is_finite() || rho.abs() > 1.0 {
        return Err(Error::domain("rho", rho, "(-1, 1)"));
    }
    if rho.abs() == 1.0 {
        return Err(Error::DegenerateCorrelation(rho));
    }
    Ok(())
}

/// GDPC rates for a given `(rho, alpha)`, base-2 logarithms:
///
/// ```text
/// r1 = 1/2 log2( P1(1-rho^2)(P1+Q+2 rho sqrt(P1 Q)+N) / D )
/// r2 = 1/2 log2( 1 + P2 / (N + P1 Q (1-rho^2)(1-alpha)^2 / V) )
/// r3 = 1/2 log2( P1(1-rho^2)(P1+P2+Q+2 rho sqrt(P1 Q)+N) / D )
/// ```
///
/// with `V = P1 + alpha^2 Q + 2 alpha rho sqrt(P1 Q)` (the variance of
/// `U1`) and `D = P1 Q (1-rho^2)(1-alpha)^2 + N V`.
pub fn gdpc_rates(m: &GaussianMacParams, g: &GdpcParams) -> Result<GdpcRates> {
    check_rho(g.rho)?;
    m.require_p1()?;
    let (p1, p2, q, n) = (m.p1, m.p2, m.q, m.n);
    let (rho, a) = (g.rho, g.alpha);
    let cross = 2.0 * rho * (p1 * q).sqrt();
    let c = p1 * (1.0 - rho * rho);
    let var_u = p1 + a * a * q + a * cross;
    let resid = c * q * (1.0 - a) * (1.0 - a);
    let den = resid + n * var_u;
    Ok(GdpcRates {
        r1: half_log2(c * (p1 + q + cross + n) / den),
        r2: half_log2(1.0 + p2 / (n + resid / var_u)),
        r3: half_log2(c * (p1 + p2 + q + cross + n) / den),
    })
}

/// Power split behind GDPC with `rho <= 0`: explicit cancellation with
/// power `rho^2 P1`, then DPC with the remaining power against the scaled
/// residual state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GdpcDecomposition {
    pub gamma: f64,
    pub cancel_power: f64,
    pub dpc_power: f64,
    /// Residual state is `(1 - sqrt(gamma P1 / Q)) S`.
    pub residual_state_scale: f64,
}

pub fn gdpc_decompose(m: &GaussianMacParams, g: &GdpcParams) -> Result<GdpcDecomposition> {
    if !(m.q > 0.0) {
        return Err(Error::domain(
            "Q",
            m.q,
            "(0, inf) for the cancellation split",
        ));
    }
    if !(-1.0..=0.0).contains(&g.rho) {
        return Err(Error::domain("rho", g.rho, "[-1, 0]"));
    }
    let gamma = g.rho * g.rho;
    let cancel_power = gamma * m.p1;
    Ok(GdpcDecomposition {
        gamma,
        cancel_power,
        dpc_power: m.p1 - cancel_power,
        residual_state_scale: 1.0 - (gamma * m.p1 / m.q).sqrt(),
    })
}

/// Closed interval of `alpha`; endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaInterval {
    pub lo: f64,
    pub hi: f64,
}

impl AlphaInterval {
    pub fn contains(&self, a: f64) -> bool {
        a >= self.lo && a <= self.hi
    }
}

/// `alpha` maximizing `r1` for the given correlation (the vertex of the
/// quadratic denominator), or `None` when `r1` does not depend on alpha.
fn r1_peak(m: &GaussianMacParams, rho: f64) -> Option<f64> {
    if m.q == 0.0 {
        return None;
    }
    let c = m.p1 * (1.0 - rho * rho);
    Some((c * m.q - m.n * rho * (m.p1 * m.q).sqrt()) / (m.q * (c + m.n)))
}

/// Walks from a feasible `inside` point towards `dir` until the rates turn
/// negative, then bisects the crossing down to [`ALPHA_RESOLUTION`].
fn feasible_edge(f: &dyn Fn(f64) -> f64, inside: f64, dir: f64) -> f64 {
    let mut step = 0.5;
    let mut good = inside;
    let mut bad;
    loop {
        let probe = inside + dir * step;
        if probe.abs() > ALPHA_SEARCH_LIMIT {
            return dir * f64::INFINITY;
        }
        if f(probe) < 0.0 {
            bad = probe;
            break;
        }
        good = probe;
        step *= 2.0;
    }
    while (bad - good).abs() > ALPHA_RESOLUTION * good.abs().max(1.0) {
        let mid = 0.5 * (good + bad);
        if f(mid) >= 0.0 {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

/// Maximal intervals of `alpha` on which `r1`, `r2` and `r3` are all
/// nonnegative.
///
/// `r2 >= 0` always and `r3 >= r1`, so the set is the superlevel set of
/// `r1`, a single interval around the peak of `r1`. Endpoints are located by
/// bisection; the returned endpoints are feasible.
pub fn feasible_alpha_interval(m: &GaussianMacParams, rho: f64) -> Result<Vec<AlphaInterval>> {
    check_rho(rho)?;
    m.require_p1()?;
    let f = |a: f64| {
        gdpc_rates(m, &GdpcParams { rho, alpha: a })
            .map(|r| r.min())
            .unwrap_or(f64::NEG_INFINITY)
    };
    let seed = match r1_peak(m, rho) {
        Some(a) => a,
        None => {
            // Q = 0: rates do not depend on alpha
            return Ok(if f(0.0) >= 0.0 {
                vec![AlphaInterval {
                    lo: f64::NEG_INFINITY,
                    hi: f64::INFINITY,
                }]
            } else {
                Vec::new()
            });
        }
    };
    if f(seed) < 0.0 {
        return Ok(Vec::new());
    }
    Ok(vec![AlphaInterval {
        lo: feasible_edge(&f, seed, -1.0),
        hi: feasible_edge(&f, seed, 1.0),
    }])
}

pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let d = (steps - 1) as f64;
            (0..steps)
                .map(|i| {
                    if i + 1 == steps {
                        hi
                    } else {
                        lo + (hi - lo) * i as f64 / d
                    }
                })
                .collect()
        }
    }
}

/// One evaluated `(rho, alpha)` sample of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub rho: f64,
    pub alpha: f64,
    pub rates: GdpcRates,
}

fn alphas_for(m: &GaussianMacParams, rho: f64, alpha_steps: usize) -> Result<Vec<f64>> {
    let (lo, hi) = ALPHA_WINDOW;
    let intervals = feasible_alpha_interval(m, rho)?;
    let mut alphas: Vec<f64> = linspace(lo, hi, alpha_steps)
        .into_iter()
        .filter(|a| intervals.iter().any(|iv| iv.contains(*a)))
        .collect();
    for iv in &intervals {
        alphas.extend([iv.lo, iv.hi].into_iter().filter(|a| *a > lo && *a < hi));
    }
    Ok(alphas)
}

/// All feasible samples of the `(rho, alpha)` grid.
pub fn sweep(
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
    m.require_p1()?;
    let rhos = range.grid(rho_steps);
    let per_rho: Result<Vec<Vec<SweepPoint>>> = rhos
        .par_iter()
        .map(|&rho| {
            alphas_for(m, rho, alpha_steps)?
                .into_iter()
                .map(|alpha| {
                    let rates = gdpc_rates(m, &GdpcParams { rho, alpha })?;
                    Ok(SweepPoint { rho, alpha, rates })
                })
                .filter(|p| p.as_ref().map_or(true, |p| p.rates.is_feasible()))
                .collect()
        })
        .collect();
    Ok(per_rho?.into_iter().flatten().collect())
}

/// GDPC inner region: hull of the union of pentagons over the sweep.
pub fn inner_region(
    m: &GaussianMacParams,
    rho_steps: usize,
    alpha_steps: usize,
    range: RhoRange,
) -> Result<RegionPolygon> {
    let pentagons: Vec<RatePentagon> = sweep(m, rho_steps, alpha_steps, range)?
        .iter()
        .map(|p| p.rates.pentagon())
        .collect();
    Ok(union_region(&pentagons))
}

/// Plain DPC (`rho = 0`) with `alpha` as the only parameter.
pub fn dpc_only_region(m: &GaussianMacParams, alpha_steps: usize) -> Result<RegionPolygon> {
    m.require_p1()?;
    let pentagons: Result<Vec<RatePentagon>> = alphas_for(m, 0.0, alpha_steps)?
        .into_iter()
        .map(|alpha| Ok(gdpc_rates(m, &GdpcParams { rho: 0.0, alpha })?.pentagon()))
        .collect();
    Ok(union_region(&pentagons?))
}

/// Outer bound obtained by revealing the state to the decoder; it is also
/// the capacity region without state.
pub fn outer_region(m: &GaussianMacParams) -> RatePentagon {
    RatePentagon::new(
        half_log2(1.0 + m.p1 / m.n),
        half_log2(1.0 + m.p2 / m.n),
        half_log2(1.0 + (m.p1 + m.p2) / m.n),
    )
}

/// Region when nobody knows the state: plain MAC with noise `N + Q`.
pub fn state_as_noise_region(m: &GaussianMacParams) -> RatePentagon {
    let nq = m.n + m.q;
    RatePentagon::new(
        half_log2(1.0 + m.p1 / nq),
        half_log2(1.0 + m.p2 / nq),
        half_log2(1.0 + (m.p1 + m.p2) / nq),
    )
}

/// Grid used by [`r2max_vs_q`].
pub const R2MAX_RHO_STEPS: usize = 41;
pub const R2MAX_ALPHA_STEPS: usize = 161;
const R2MAX_REFINE_STEPS: usize = 21;

/// Largest uninformed-encoder rate when `R1 = 0`, i.e. the R2-axis
/// intercept `max min(r2, r3)` over GDPC parameters with `r1, r3 >= 0`.
///
/// Coarse grid over `rho in [-1, 0]` and `alpha` across the feasible
/// interval (clipped to [`ALPHA_WINDOW`]), followed by one local refinement
/// around the best sample.
pub fn r2_max(m: &GaussianMacParams) -> Result<(GdpcParams, f64)> {
    m.require_p1()?;
    let objective = |rho: f64, alpha: f64| -> f64 {
        match gdpc_rates(m, &GdpcParams { rho, alpha }) {
            Ok(r) if r.r1 >= 0.0 && r.r3 >= 0.0 => r.r2_intercept(),
            _ => f64::NEG_INFINITY,
        }
    };
    let (wlo, whi) = ALPHA_WINDOW;
    let rhos = RhoRange::Standard.grid(R2MAX_RHO_STEPS);
    let coarse: Vec<(f64, f64, f64)> = rhos
        .par_iter()
        .map(|&rho| {
            let intervals = feasible_alpha_interval(m, rho).unwrap_or_default();
            let mut best = (rho, 0.0, f64::NEG_INFINITY);
            for iv in intervals {
                let (lo, hi) = (iv.lo.max(wlo), iv.hi.min(whi));
                if lo > hi {
                    continue;
                }
                for a in linspace(lo, hi, R2MAX_ALPHA_STEPS) {
                    let v = objective(rho, a);
                    if v > best.2 {
                        best = (rho, a, v);
                    }
                }
            }
            best
        })
        .collect();
    let mut best = coarse
        .into_iter()
        .fold((0.0, 0.0, f64::NEG_INFINITY), |acc, x| {
            if x.2 > acc.2 {
                x
            } else {
                acc
            }
        });
    if !best.2.is_finite() {
        return Ok((
            GdpcParams {
                rho: 0.0,
                alpha: 0.0,
            },
            0.0,
        ));
    }
    let d_rho = 1.0 / (R2MAX_RHO_STEPS - 1) as f64;
    let d_alpha = (whi - wlo) / (R2MAX_ALPHA_STEPS - 1) as f64;
    let (rho0, a0) = (best.0, best.1);
    for rho in linspace(
        (rho0 - d_rho).max(-1.0),
        (rho0 + d_rho).min(0.0),
        R2MAX_REFINE_STEPS,
    ) {
        if rho.abs() >= 1.0 {
            continue;
        }
        for a in linspace(a0 - d_alpha, a0 + d_alpha, R2MAX_REFINE_STEPS) {
            let v = objective(rho, a);
            if v > best.2 {
                best = (rho, a, v);
            }
        }
    }
    Ok((
        GdpcParams {
            rho: best.0,
            alpha: best.1,
        },
        best.2.max(0.0),
    ))
}

/// `(Q, R2max)` curve for fixed powers and noise.
pub fn r2max_vs_q(template: &GaussianMacParams, q_values: &[f64]) -> Result<Vec<(f64, f64)>> {
    q_values
        .iter()
        .map(|&q| {
            if !(q > 0.0) {
                return Err(Error::domain("Q", q, "(0, inf)"));
            }
            let (_, r) = r2_max(&template.with_q(q)?)?;
            Ok((q, r))
        })
        .collect()
}
