//! Binary noiseless MAC `Y = X1 xor X2 xor S` with `S ~ Bern(q)` known to
//! encoder 1 only, and input weight constraints `p1`, `p2`.
//!
//! The informed encoder uses generalized binary dirty paper coding:
//! `U1 = X1 xor S` with `a10 = P(X1 = 1 | S = 0)` and
//! `a01 = P(X1 = 0 | S = 1)`, so that `X1` may be correlated with the state.
//! Standard binary DPC is the special case `a10 = p1`, `a01 = 1 - p1`
//! (input independent of the state).

use rayon::prelude::*;
use serde::Serialize;

use crate::dm::{Alphabets, CondTable, DmChannelSpec, RatePentagon};
use crate::error::{Error, Result};
use crate::geometry::{union_region, RegionPolygon};
use crate::info::{binary_convolve, binary_entropy, PROB_SLACK};

/// Default grid resolution per axis for sweeps over `(a10, a01)`.
pub const DEFAULT_GRID: usize = 41;

fn hb(p: f64) -> f64 {
    binary_entropy(p).expect("probability validated upstream")
}

fn conv(x: f64, y: f64) -> f64 {
    binary_convolve(x, y).expect("probability validated upstream")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinaryMacParams {
    /// Weight constraint of the informed encoder.
    pub p1: f64,
    /// Weight constraint of the uninformed encoder.
    pub p2: f64,
    /// State bias.
    pub q: f64,
}

impl BinaryMacParams {
    /// All three parameters must lie in `[0, 0.5]`; larger values are
    /// equivalent by symmetry (replace `p` with `1 - p`) and are rejected
    /// rather than silently reflected.
    pub fn new(p1: f64, p2: f64, q: f64) -> Result<Self> {
        for (name, v) in [("p1", p1), ("p2", p2), ("q", q)] {
            if !(0.0..=0.5).contains(&v) {
                return Err(Error::domain(
                    name,
                    v,
                    "[0, 0.5] (map p > 0.5 to 1 - p by symmetry)",
                ));
            }
        }
        Ok(Self { p1, p2, q })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinaryDpcParams {
    /// `P(X1 = 1 | S = 0)`
    pub a10: f64,
    /// `P(X1 = 0 | S = 1)`
    pub a01: f64,
}

impl BinaryDpcParams {
    pub fn new(a10: f64, a01: f64) -> Result<Self> {
        for (name, v) in [("a10", a10), ("a01", a01)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::domain(name, v, "[0, 1]"));
            }
        }
        Ok(Self { a10, a01 })
    }

    /// Standard binary DPC: input independent of the state.
    pub fn standard(m: &BinaryMacParams) -> Self {
        Self {
            a10: m.p1,
            a01: 1.0 - m.p1,
        }
    }

    /// `P(X1 = 1) = (1 - q) a10 + q (1 - a01)`.
    pub fn input_weight(&self, q: f64) -> f64 {
        (1.0 - q) * self.a10 + q * (1.0 - self.a01)
    }

    /// `P(U1 = 1) = (1 - q) a10 + q a01`.
    pub fn aux_weight(&self, q: f64) -> f64 {
        (1.0 - q) * self.a10 + q * self.a01
    }
}

/// Whether `P(X1 = 1)` meets the weight constraint `p1`.
pub fn feasible(d: &BinaryDpcParams, m: &BinaryMacParams) -> bool {
    d.input_weight(m.q) <= m.p1 + PROB_SLACK
}

/// Generalized binary DPC pentagon:
/// `c1 = (1-q) Hb(a10) + q Hb(a01)`, `c2 = Hb(p2)`,
/// `c12 = c1 + Hb(p2 * u) - Hb(u)` with `u = q a01 + (1-q) a10`.
pub fn inner_pentagon(m: &BinaryMacParams, d: &BinaryDpcParams) -> Result<RatePentagon> {
    if !feasible(d, m) {
        return Err(Error::Infeasible(format!(
            "(1-q) a10 + q (1-a01) = {} exceeds p1 = {}",
            d.input_weight(m.q),
            m.p1
        )));
    }
    let q = m.q;
    let c1 = (1.0 - q) * hb(d.a10) + q * hb(d.a01);
    let u = d.aux_weight(q).clamp(0.0, 1.0);
    let c12 = c1 + hb(conv(m.p2, u)) - hb(u);
    Ok(RatePentagon::new(c1, hb(m.p2), c12))
}

pub fn standard_dpc_pentagon(m: &BinaryMacParams) -> RatePentagon {
    inner_pentagon(m, &BinaryDpcParams::standard(m)).expect("standard DPC meets p1 with equality")
}

/// Feasible points of the uniform `steps x steps` grid over `(a10, a01)`.
pub fn feasible_grid(m: &BinaryMacParams, steps: usize) -> Result<Vec<BinaryDpcParams>> {
    if steps < 2 {
        return Err(Error::domain("grid_steps", steps as f64, "[2, inf)"));
    }
    let denom = (steps - 1) as f64;
    Ok((0..steps)
        .flat_map(|i| (0..steps).map(move |j| (i, j)))
        .map(|(i, j)| BinaryDpcParams {
            a10: i as f64 / denom,
            a01: j as f64 / denom,
        })
        .filter(|d| feasible(d, m))
        .collect())
}

/// Pentagons for every feasible grid point, in grid order.
pub fn sweep(m: &BinaryMacParams, steps: usize) -> Result<Vec<(BinaryDpcParams, RatePentagon)>> {
    let grid = feasible_grid(m, steps)?;
    Ok(grid
        .par_iter()
        .map(|d| (*d, inner_pentagon(m, d).expect("grid is feasible")))
        .collect())
}

/// Convex hull of the union of generalized-DPC pentagons over the grid.
pub fn inner_region(m: &BinaryMacParams, steps: usize) -> Result<RegionPolygon> {
    let pentagons: Vec<RatePentagon> = sweep(m, steps)?.into_iter().map(|(_, p)| p).collect();
    Ok(union_region(&pentagons))
}

/// Outer bound from giving the state to the decoder.
pub fn outer_region(m: &BinaryMacParams) -> RatePentagon {
    let s = m.p1 + m.p2;
    let c12 = if s < 0.5 { hb(s) } else { 1.0 };
    RatePentagon::new(hb(m.p1), hb(m.p2), c12)
}

/// Capacity region at maximum-entropy state `q = 0.5`:
/// `R2 <= Hb(p2)`, `R1 + R2 <= Hb(p1)`.
pub fn capacity_q_half(m: &BinaryMacParams) -> Result<RatePentagon> {
    if m.q != 0.5 {
        return Err(Error::domain(
            "q",
            m.q,
            "{0.5} (capacity known only for q = 0.5)",
        ));
    }
    let c12 = hb(m.p1);
    Ok(RatePentagon::new(c12, hb(m.p2), c12))
}

/// Channel spec induced by generalized binary DPC, with a single
/// time-sharing symbol: `U1 = X1 xor S`, `X2 ~ Bern(p2)`.
pub fn induced_spec(m: &BinaryMacParams, d: &BinaryDpcParams) -> DmChannelSpec {
    let (a10, a01, p2) = (d.a10, d.a01, m.p2);
    DmChannelSpec {
        alphabets: Alphabets {
            q: 1,
            s: 2,
            u1: 2,
            x1: 2,
            x2: 2,
            y: 2,
        },
        q_dist: vec![1.0],
        s_dist: vec![1.0 - m.q, m.q],
        u1_given_sq: CondTable::from_fn(vec![2, 1], 2, |p, u| {
            let one = if p[0] == 0 { a10 } else { a01 };
            if u == 1 {
                one
            } else {
                1.0 - one
            }
        }),
        x1_given_u1sq: CondTable::deterministic(vec![2, 2, 1], 2, |p| p[0] ^ p[1]),
        x2_given_q: CondTable::from_fn(vec![1], 2, |_, x| if x == 1 { p2 } else { 1.0 - p2 }),
        y_given_x1x2s: CondTable::deterministic(vec![2, 2, 2], 2, |p| p[0] ^ p[1] ^ p[2]),
    }
}

/// Spec for an encoder that ignores the state: `U1 = X1 ~ Bern(p1)`
/// independent of `S`. Its pentagon is the plain MAC region with the state
/// treated as noise.
pub fn state_ignorant_spec(m: &BinaryMacParams) -> DmChannelSpec {
    let mut spec = induced_spec(m, &BinaryDpcParams::standard(m));
    let p1 = m.p1;
    spec.u1_given_sq = CondTable::from_fn(vec![2, 1], 2, |_, u| if u == 1 { p1 } else { 1.0 - p1 });
    spec.x1_given_u1sq = CondTable::deterministic(vec![2, 2, 1], 2, |p| p[0]);
    spec
}
