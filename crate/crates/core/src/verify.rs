//! Self-check suites comparing closed forms against independent evaluations.

use std::fmt;

use serde::Serialize;

use crate::binary::{self, BinaryMacParams};
use crate::dm::theorem1_pentagon;
use crate::error::Result;
use crate::gaussian::{
    self, asymptotic_alpha_upper, asymptotic_inner_region, asymptotic_outer_region,
    asymptotic_rates, gaussian_mi_oracle, gdpc_rates, linspace, GaussianMacParams, GdpcParams,
    RhoRange,
};
use crate::geometry::{pentagon_vertices, RatePoint, RegionPolygon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    BinaryOracle,
    GaussianOracle,
    AsymptoticLimit,
    Containment,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 5] = [
        "binary-oracle",
        "gaussian-oracle",
        "asymptotic-limit",
        "containment",
        "all",
    ];

    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "binary-oracle" => Suite::BinaryOracle,
            "gaussian-oracle" => Suite::GaussianOracle,
            "asymptotic-limit" => Suite::AsymptoticLimit,
            "containment" => Suite::Containment,
            "all" => Suite::All,
            _ => {
                return Err(crate::Error::Unknown {
                    kind: "verification suite",
                    name: name.to_string(),
                })
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::BinaryOracle => "binary-oracle",
            Suite::GaussianOracle => "gaussian-oracle",
            Suite::AsymptoticLimit => "asymptotic-limit",
            Suite::Containment => "containment",
            Suite::All => "all",
        }
    }
}

/// Direction of the comparison between the measurement and the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    AtMost,
    Above,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub bound: Bound,
}

impl Check {
    fn at_most(
        suite: &'static str,
        name: impl Into<String>,
        measured: f64,
        threshold: f64,
    ) -> Self {
        Self {
            suite,
            name: name.into(),
            measured,
            threshold,
            bound: Bound::AtMost,
        }
    }

    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.measured <= self.threshold,
            Bound::Above => self.measured > self.threshold,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.bound {
            Bound::AtMost => "<=",
            Bound::Above => ">",
        };
        write!(
            f,
            "{} [{}] {}: {:.3e} (need {} {:.1e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.measured,
            op,
            self.threshold
        )
    }
}

pub fn run(suite: Suite) -> Result<Vec<Check>> {
    match suite {
        Suite::BinaryOracle => binary_oracle(),
        Suite::GaussianOracle => gaussian_oracle(),
        Suite::AsymptoticLimit => asymptotic_limit(),
        Suite::Containment => containment(),
        Suite::All => {
            let mut out = Vec::new();
            for s in [
                Suite::BinaryOracle,
                Suite::GaussianOracle,
                Suite::AsymptoticLimit,
                Suite::Containment,
            ] {
                out.extend(run(s)?);
            }
            Ok(out)
        }
    }
}

fn binary_oracle() -> Result<Vec<Check>> {
    let m = BinaryMacParams::new(0.1, 0.4, 0.2)?;
    let mut dev: f64 = 0.0;
    let mut count = 0;
    for d in binary::feasible_grid(&m, binary::DEFAULT_GRID)? {
        let a = binary::inner_pentagon(&m, &d)?;
        let b = theorem1_pentagon(&binary::induced_spec(&m, &d))?;
        dev = dev
            .max((a.c1 - b.c1).abs())
            .max((a.c2 - b.c2).abs())
            .max((a.c12 - b.c12).abs());
        count += 1;
    }
    Ok(vec![Check::at_most(
        "binary-oracle",
        format!("closed form vs DM evaluation, {count} feasible points, max deviation"),
        dev,
        1e-9,
    )])
}

fn gaussian_oracle() -> Result<Vec<Check>> {
    let m = GaussianMacParams::new(15.0, 50.0, 20.0, 60.0)?;
    let mut dev: f64 = 0.0;
    let rhos = RhoRange::Standard.grid(16);
    let alphas = linspace(-0.5, 2.0, 31);
    for &rho in &rhos {
        for &alpha in &alphas {
            let g = GdpcParams { rho, alpha };
            let a = gdpc_rates(&m, &g)?;
            let b = gaussian_mi_oracle(&m, &g)?;
            dev = dev
                .max((a.r1 - b.r1).abs())
                .max((a.r2 - b.r2).abs())
                .max((a.r3 - b.r3).abs());
        }
    }
    let mut costa: f64 = 0.0;
    for p1 in [0.1, 1.0, 5.0, 15.0, 50.0, 100.0, 300.0, 1e3, 5e3, 1e4] {
        for (i, n) in [0.1, 0.5, 1.0, 10.0, 60.0, 100.0, 250.0, 1e3, 4e3, 1e4]
            .into_iter()
            .enumerate()
        {
            let q = 20.0 * i as f64;
            let m = GaussianMacParams::new(p1, 50.0, q, n)?;
            let r = gdpc_rates(&m, &GdpcParams::costa(&m))?;
            costa = costa.max((r.r1 - gaussian::half_log2(1.0 + p1 / n)).abs());
        }
    }
    Ok(vec![
        Check::at_most(
            "gaussian-oracle",
            format!(
                "closed form vs covariance determinants, {}x{} grid, max deviation",
                rhos.len(),
                alphas.len()
            ),
            dev,
            1e-9,
        ),
        Check::at_most(
            "gaussian-oracle",
            "Costa scaling vs interference-free rate, 100 parameter sets",
            costa,
            1e-12,
        ),
    ])
}

/// Parameters of the limit check; the finite-`Q` deviation grows like
/// `sqrt(P1 / Q)`.
pub const LIMIT_PARAMS: (f64, f64, f64) = (15.0, 50.0, 60.0);
pub const LIMIT_Q: f64 = 1e10;

fn asymptotic_limit() -> Result<Vec<Check>> {
    let (p1, p2, n) = LIMIT_PARAMS;
    let m = GaussianMacParams::new(p1, p2, LIMIT_Q, n)?;
    let mut dev: f64 = 0.0;
    let mut r13: f64 = 0.0;
    for rho in RhoRange::Standard.grid(21) {
        let hi = asymptotic_alpha_upper(&m, rho)?;
        for alpha in linspace(0.0, hi, 81) {
            let g = GdpcParams { rho, alpha };
            let f = gdpc_rates(&m, &g)?;
            let a = asymptotic_rates(&m, &g)?;
            dev = dev
                .max((f.r1 - a.r1).abs())
                .max((f.r2 - a.r2).abs())
                .max((f.r3 - a.r3).abs());
            r13 = r13.max((a.r1 - a.r3).abs());
        }
    }
    Ok(vec![
        Check::at_most(
            "asymptotic-limit",
            format!("rates at Q = {LIMIT_Q:e} vs large-state limit, max deviation"),
            dev,
            1e-4,
        ),
        Check::at_most("asymptotic-limit", "large-state r1 - r3", r13, 0.0),
    ])
}

/// Largest distance of a vertex of `a` outside `b`.
fn excess(a: &RegionPolygon, b: &RegionPolygon) -> f64 {
    a.vertices()
        .iter()
        .map(|v| b.distance(*v))
        .fold(0.0, f64::max)
}

fn containment() -> Result<Vec<Check>> {
    const TOL: f64 = 1e-9;
    let s = "containment";
    let mut out = Vec::new();

    let bm = BinaryMacParams::new(0.1, 0.4, 0.2)?;
    let inner = binary::inner_region(&bm, binary::DEFAULT_GRID)?;
    let outer = pentagon_vertices(&binary::outer_region(&bm));
    out.push(Check::at_most(
        s,
        "binary inner in outer (0.1, 0.4, 0.2)",
        excess(&inner, &outer),
        TOL,
    ));

    let gm = GaussianMacParams::new(15.0, 50.0, 20.0, 60.0)?;
    let inner = gaussian::inner_region(
        &gm,
        gaussian::DEFAULT_RHO_STEPS,
        gaussian::DEFAULT_ALPHA_STEPS,
        RhoRange::Standard,
    )?;
    let outer_p = gaussian::outer_region(&gm);
    let outer = pentagon_vertices(&outer_p);
    let dpc = gaussian::dpc_only_region(&gm, gaussian::DEFAULT_ALPHA_STEPS)?;
    out.push(Check::at_most(
        s,
        "Gaussian inner in outer (15, 50, 20, 60)",
        excess(&inner, &outer),
        TOL,
    ));
    out.push(Check::at_most(
        s,
        "DPC-only region in GDPC region",
        excess(&dpc, &inner),
        TOL,
    ));
    out.push(Check {
        suite: s,
        name: "outer corner distance from Gaussian inner region".into(),
        measured: inner.distance(RatePoint::new(outer_p.c1, outer_p.c2)),
        threshold: TOL,
        bound: Bound::Above,
    });

    for p1 in [50.0, 120.0, 2000.0] {
        let am = GaussianMacParams::new(p1, 50.0, 0.0, 60.0)?;
        let inner = asymptotic_inner_region(
            &am,
            gaussian::DEFAULT_RHO_STEPS,
            gaussian::DEFAULT_ALPHA_STEPS,
            RhoRange::Standard,
        )?;
        let outer = pentagon_vertices(&asymptotic_outer_region(&am));
        out.push(Check::at_most(
            s,
            format!("large-state inner in outer (P1 = {p1})"),
            excess(&inner, &outer),
            TOL,
        ));
    }
    Ok(out)
}
