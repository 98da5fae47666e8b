//! Parameter presets reproducing the published figures.

use serde_json::{json, Value};

use crate::binary::{self, BinaryMacParams};
use crate::dm::theorem1_pentagon;
use crate::error::Result;
use crate::gaussian::{
    self, asymptotic_inner_region, asymptotic_outer_region, asymptotic_rates, linspace,
    successive_alpha_upper, successive_r1_bound, GaussianMacParams, GdpcParams, RhoRange,
};
use crate::geometry::{convex_hull_2d, pentagon_vertices, RatePoint, RegionPolygon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
}

impl Figure {
    pub const ALL: [Figure; 7] = [
        Figure::Fig2,
        Figure::Fig3,
        Figure::Fig4,
        Figure::Fig5,
        Figure::Fig6,
        Figure::Fig7,
        Figure::Fig8,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
            Figure::Fig8 => "fig8",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesData {
    Region(RegionPolygon),
    /// `(Q, R2max)` samples.
    Curve(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub parameters: Value,
    pub grid: Value,
    pub data: SeriesData,
}

impl Series {
    fn region(name: impl Into<String>, parameters: Value, grid: Value, r: RegionPolygon) -> Self {
        Self {
            name: name.into(),
            parameters,
            grid,
            data: SeriesData::Region(r),
        }
    }
}

/// State values sampled for the `R2max` curves.
pub const FIG5_Q: [f64; 12] = [
    0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0,
];

pub fn binary_params_json(m: &BinaryMacParams) -> Value {
    json!({"p1": m.p1, "p2": m.p2, "q": m.q})
}

pub fn gaussian_params_json(m: &GaussianMacParams, with_q: bool) -> Value {
    if with_q {
        json!({"P1": m.p1, "P2": m.p2, "Q": m.q, "N": m.n})
    } else {
        json!({"P1": m.p1, "P2": m.p2, "N": m.n})
    }
}

pub fn gaussian_grid_json(rho_steps: usize, alpha_steps: usize, range: RhoRange) -> Value {
    json!({"rho_steps": rho_steps, "alpha_steps": alpha_steps, "rho_range": range})
}

fn binary_set(m: &BinaryMacParams, tag: &str, out: &mut Vec<Series>) -> Result<()> {
    let p = binary_params_json(m);
    let grid = json!({"grid": binary::DEFAULT_GRID});
    out.push(Series::region(
        format!("{tag}inner"),
        p.clone(),
        grid,
        binary::inner_region(m, binary::DEFAULT_GRID)?,
    ));
    out.push(Series::region(
        format!("{tag}standard_dpc"),
        p.clone(),
        Value::Null,
        pentagon_vertices(&binary::standard_dpc_pentagon(m)),
    ));
    out.push(Series::region(
        format!("{tag}state_ignorant"),
        p.clone(),
        Value::Null,
        pentagon_vertices(&theorem1_pentagon(&binary::state_ignorant_spec(m))?),
    ));
    out.push(Series::region(
        format!("{tag}outer"),
        p,
        Value::Null,
        pentagon_vertices(&binary::outer_region(m)),
    ));
    Ok(())
}

/// Points `(successive R1 bound, large-state r2)` at `rho = 0` and their hull.
fn successive_region(m: &GaussianMacParams, steps: usize) -> Result<RegionPolygon> {
    let hi = successive_alpha_upper(m, 0.0)?;
    let pts: Result<Vec<RatePoint>> = linspace(0.0, hi, steps)
        .into_iter()
        .map(|alpha| {
            let g = GdpcParams { rho: 0.0, alpha };
            Ok(RatePoint::new(
                successive_r1_bound(m, &g)?,
                asymptotic_rates(m, &g)?.r2.max(0.0),
            ))
        })
        .collect();
    Ok(convex_hull_2d(&pts?))
}

fn asymptotic_set(p1: f64, out: &mut Vec<Series>) -> Result<()> {
    let m = GaussianMacParams::new(p1, 50.0, 0.0, 60.0)?;
    let p = gaussian_params_json(&m, false);
    let (rs, als) = (gaussian::DEFAULT_RHO_STEPS, gaussian::DEFAULT_ALPHA_STEPS);
    out.push(Series::region(
        "inner",
        p.clone(),
        gaussian_grid_json(rs, als, RhoRange::Standard),
        asymptotic_inner_region(&m, rs, als, RhoRange::Standard)?,
    ));
    out.push(Series::region(
        "outer",
        p.clone(),
        Value::Null,
        pentagon_vertices(&asymptotic_outer_region(&m)),
    ));
    out.push(Series::region(
        "successive",
        p,
        json!({"alpha_steps": als, "rho": 0.0}),
        successive_region(&m, als)?,
    ));
    Ok(())
}

pub fn figure_series(fig: Figure) -> Result<Vec<Series>> {
    let mut out = Vec::new();
    match fig {
        Figure::Fig2 => binary_set(&BinaryMacParams::new(0.1, 0.4, 0.2)?, "", &mut out)?,
        Figure::Fig3 => {
            for p1 in [0.2, 0.4] {
                let m = BinaryMacParams::new(p1, 0.3, 0.5)?;
                let tag = format!("p1_{p1}_");
                let p = binary_params_json(&m);
                out.push(Series::region(
                    format!("{tag}inner"),
                    p.clone(),
                    json!({"grid": binary::DEFAULT_GRID}),
                    binary::inner_region(&m, binary::DEFAULT_GRID)?,
                ));
                out.push(Series::region(
                    format!("{tag}capacity"),
                    p,
                    Value::Null,
                    pentagon_vertices(&binary::capacity_q_half(&m)?),
                ));
            }
        }
        Figure::Fig4 => {
            let m = GaussianMacParams::new(15.0, 50.0, 20.0, 60.0)?;
            let p = gaussian_params_json(&m, true);
            let (rs, als) = (gaussian::DEFAULT_RHO_STEPS, gaussian::DEFAULT_ALPHA_STEPS);
            out.push(Series::region(
                "inner",
                p.clone(),
                gaussian_grid_json(rs, als, RhoRange::Standard),
                gaussian::inner_region(&m, rs, als, RhoRange::Standard)?,
            ));
            out.push(Series::region(
                "dpc_only",
                p.clone(),
                json!({"alpha_steps": als, "rho": 0.0}),
                gaussian::dpc_only_region(&m, als)?,
            ));
            out.push(Series::region(
                "state_as_noise",
                p.clone(),
                Value::Null,
                pentagon_vertices(&gaussian::state_as_noise_region(&m)),
            ));
            out.push(Series::region(
                "outer",
                p,
                Value::Null,
                pentagon_vertices(&gaussian::outer_region(&m)),
            ));
        }
        Figure::Fig5 => {
            for p1 in [15.0, 60.0] {
                let m = GaussianMacParams::new(p1, 50.0, 1.0, 60.0)?;
                out.push(Series {
                    name: format!("r2max_P1_{p1}"),
                    parameters: json!({"P1": p1, "P2": 50.0, "N": 60.0, "Q": FIG5_Q}),
                    grid: json!({
                        "rho_steps": gaussian::R2MAX_RHO_STEPS,
                        "alpha_steps": gaussian::R2MAX_ALPHA_STEPS,
                    }),
                    data: SeriesData::Curve(gaussian::r2max_vs_q(&m, &FIG5_Q)?),
                });
            }
        }
        Figure::Fig6 => asymptotic_set(50.0, &mut out)?,
        Figure::Fig7 => asymptotic_set(120.0, &mut out)?,
        Figure::Fig8 => asymptotic_set(2000.0, &mut out)?,
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_figure_builds() {
        for f in Figure::ALL {
            let s = figure_series(f).unwrap();
            assert!(!s.is_empty(), "{}", f.name());
        }
    }

    #[test]
    fn successive_points_lie_in_inner_region() {
        let m = GaussianMacParams::new(50.0, 50.0, 0.0, 60.0).unwrap();
        let s = successive_region(&m, 81).unwrap();
        let inner = asymptotic_inner_region(&m, 21, 81, RhoRange::Standard).unwrap();
        assert!(s.is_subset(&inner, 1e-3));
    }

    #[test]
    fn comparison_curves_sit_inside() {
        let s = figure_series(Figure::Fig2).unwrap();
        let get = |n: &str| match &s.iter().find(|x| x.name == n).unwrap().data {
            SeriesData::Region(r) => r.clone(),
            _ => unreachable!(),
        };
        assert!(get("standard_dpc").is_subset(&get("inner"), 1e-9));
        assert!(get("state_ignorant").is_subset(&get("outer"), 1e-9));
        assert!(get("inner").is_subset(&get("outer"), 1e-9));
    }
}
