//! Convex geometry in the (R1, R2) rate plane.
//!
//! Regions are convex polygons in the nonnegative quadrant, always holding
//! the origin. Time sharing between coding schemes is the convex hull of the
//! union of their regions; for polygons that reduces to the hull of the
//! pooled vertex sets.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::dm::RatePentagon;
use crate::error::{Error, Result};

/// Orientation values at or below this magnitude count as collinear.
pub const COLLINEAR_TOL: f64 = 1e-12;

/// A rate pair in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatePoint {
    pub r1: f64,
    pub r2: f64,
}

impl RatePoint {
    pub const ORIGIN: RatePoint = RatePoint { r1: 0.0, r2: 0.0 };

    pub fn new(r1: f64, r2: f64) -> Self {
        Self { r1, r2 }
    }

    fn cmp_lex(&self, other: &Self) -> Ordering {
        self.r1
            .total_cmp(&other.r1)
            .then_with(|| self.r2.total_cmp(&other.r2))
    }

    fn dist(&self, other: &Self) -> f64 {
        (self.r1 - other.r1).hypot(self.r2 - other.r2)
    }
}

/// Twice the signed area of `(a, b, c)`; positive for a left turn.
/// The sign is exact (adaptive-precision predicate).
pub fn orient(a: RatePoint, b: RatePoint, c: RatePoint) -> f64 {
    robust::orient2d(
        robust::Coord { x: a.r1, y: a.r2 },
        robust::Coord { x: b.r1, y: b.r2 },
        robust::Coord { x: c.r1, y: c.r2 },
    )
}

fn segment_distance(p: RatePoint, a: RatePoint, b: RatePoint) -> f64 {
    let (dx, dy) = (b.r1 - a.r1, b.r2 - a.r2);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.dist(&a);
    }
    let t = (((p.r1 - a.r1) * dx + (p.r2 - a.r2) * dy) / len2).clamp(0.0, 1.0);
    p.dist(&RatePoint::new(a.r1 + t * dx, a.r2 + t * dy))
}

/// Convex polygon in counterclockwise order starting at the origin.
///
/// Collinear vertices are removed; degenerate regions are a single point
/// (the origin) or a segment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionPolygon {
    vertices: Vec<RatePoint>,
}

impl RegionPolygon {
    pub fn vertices(&self) -> &[RatePoint] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn edges(&self) -> impl Iterator<Item = (RatePoint, RatePoint)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        0.5 * self
            .edges()
            .map(|(a, b)| a.r1 * b.r2 - b.r1 * a.r2)
            .sum::<f64>()
    }

    pub fn max_r1(&self) -> f64 {
        self.vertices.iter().map(|v| v.r1).fold(0.0, f64::max)
    }

    pub fn max_r2(&self) -> f64 {
        self.vertices.iter().map(|v| v.r2).fold(0.0, f64::max)
    }

    /// Euclidean distance from `p` to the region (zero inside).
    pub fn distance(&self, p: RatePoint) -> f64 {
        match self.vertices.len() {
            0 => f64::INFINITY,
            1 => p.dist(&self.vertices[0]),
            2 => segment_distance(p, self.vertices[0], self.vertices[1]),
            _ => {
                if self.edges().all(|(a, b)| orient(a, b, p) >= 0.0) {
                    0.0
                } else {
                    self.edges()
                        .map(|(a, b)| segment_distance(p, a, b))
                        .fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    pub fn contains(&self, p: RatePoint, tol: f64) -> bool {
        self.distance(p) <= tol
    }

    /// Every vertex of `self` lies in `other` within `tol`.
    pub fn is_subset(&self, other: &RegionPolygon, tol: f64) -> bool {
        self.vertices.iter().all(|&v| other.contains(v, tol))
    }

    /// Largest `R2` with `(r1, R2)` in the region.
    pub fn max_r2_at(&self, r1: f64) -> Result<f64> {
        const TOL: f64 = 1e-12;
        let max_r1 = self.max_r1();
        if !(r1 >= -TOL && r1 <= max_r1 + TOL) {
            return Err(Error::Region(format!(
                "R1 = {r1} lies outside the region's range [0, {max_r1}]"
            )));
        }
        let x = r1.clamp(0.0, max_r1);
        if self.vertices.len() == 1 {
            return Ok(self.vertices[0].r2);
        }
        let mut best = f64::NEG_INFINITY;
        for (a, b) in self.edges() {
            let (lo, hi) = if a.r1 <= b.r1 { (a, b) } else { (b, a) };
            if x < lo.r1 || x > hi.r1 {
                continue;
            }
            let y = if hi.r1 == lo.r1 {
                lo.r2.max(hi.r2)
            } else {
                let t = (x - lo.r1) / (hi.r1 - lo.r1);
                lo.r2 + t * (hi.r2 - lo.r2)
            };
            best = best.max(y);
        }
        Ok(best.max(0.0))
    }

    /// Upper boundary sampled at `R1 = 0, step, 2 step, ...` up to the
    /// largest R1 of the region (always included).
    pub fn boundary_samples(&self, step: f64) -> Result<Vec<RatePoint>> {
        if !(step > 0.0) {
            return Err(Error::domain("boundary step", step, "(0, inf)"));
        }
        let max_r1 = self.max_r1();
        let n = (max_r1 / step).floor() as usize;
        let mut out = Vec::with_capacity(n + 2);
        for i in 0..=n {
            let x = (i as f64 * step).min(max_r1);
            out.push(RatePoint::new(x, self.max_r2_at(x)?));
        }
        if out.last().is_none_or(|p| p.r1 < max_r1) {
            out.push(RatePoint::new(max_r1, self.max_r2_at(max_r1)?));
        }
        Ok(out)
    }

    /// Convex hull of the union of two regions.
    pub fn merge(&self, other: &RegionPolygon) -> RegionPolygon {
        let mut pts = self.vertices.clone();
        pts.extend_from_slice(&other.vertices);
        convex_hull_2d(&pts)
    }
}

/// Minimal convex polygon containing `points` and the origin.
///
/// Monotone chain over lexicographically sorted points; duplicate and
/// collinear points are dropped, so the output is strictly convex and its
/// vertices are a subset of the inputs.
pub fn convex_hull_2d(points: &[RatePoint]) -> RegionPolygon {
    let mut pts: Vec<RatePoint> = points
        .iter()
        .copied()
        .filter(|p| p.r1.is_finite() && p.r2.is_finite())
        .collect();
    pts.push(RatePoint::ORIGIN);
    pts.sort_by(RatePoint::cmp_lex);
    pts.dedup();
    if pts.len() <= 2 {
        return RegionPolygon { vertices: pts };
    }

    let mut lower: Vec<RatePoint> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2
            && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= COLLINEAR_TOL
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<RatePoint> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2
            && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= COLLINEAR_TOL
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    RegionPolygon { vertices: lower }
}

/// Realizes `{(x, y) >= 0 : x <= c1, y <= c2, x + y <= c12}` as a polygon.
pub fn pentagon_vertices(p: &RatePentagon) -> RegionPolygon {
    convex_hull_2d(&pentagon_corners(p))
}

/// Corner points of a pentagon, possibly with repeats for degenerate caps.
pub fn pentagon_corners(p: &RatePentagon) -> [RatePoint; 5] {
    let (c1, c2, c12) = (p.c1_eff(), p.c2_eff(), p.c12);
    let (right, top) = if c1 + c2 <= c12 {
        (RatePoint::new(c1, c2), RatePoint::new(c1, c2))
    } else {
        (RatePoint::new(c1, c12 - c1), RatePoint::new(c12 - c2, c2))
    };
    [
        RatePoint::ORIGIN,
        RatePoint::new(c1, 0.0),
        right,
        top,
        RatePoint::new(0.0, c2),
    ]
}

/// Convex hull of the union of pentagons, reduced in parallel.
pub fn union_region(pentagons: &[RatePentagon]) -> RegionPolygon {
    pentagons
        .par_chunks(256)
        .map(|chunk| {
            let pts: Vec<RatePoint> = chunk.iter().flat_map(pentagon_corners).collect();
            convex_hull_2d(&pts)
        })
        .reduce(|| convex_hull_2d(&[]), |a, b| a.merge(&b))
}

/// Symmetric Hausdorff distance between two convex regions.
///
/// For convex sets the farthest point of one set from the other is a
/// vertex, so checking vertices against the other polygon suffices.
pub fn hausdorff(a: &RegionPolygon, b: &RegionPolygon) -> f64 {
    let one_way = |x: &RegionPolygon, y: &RegionPolygon| {
        x.vertices
            .iter()
            .map(|&v| y.distance(v))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn pt(r1: f64, r2: f64) -> RatePoint {
        RatePoint::new(r1, r2)
    }

    fn coords(p: &RegionPolygon) -> Vec<(f64, f64)> {
        p.vertices().iter().map(|v| (v.r1, v.r2)).collect()
    }

    #[test]
    fn textbook_pentagon() {
        let p = pentagon_vertices(&RatePentagon::new(1.0, 1.0, 1.5));
        assert_eq!(
            coords(&p),
            vec![(0.0, 0.0), (1.0, 0.0), (1.0, 0.5), (0.5, 1.0), (0.0, 1.0)]
        );
        assert_abs_diff_eq!(p.area(), 0.875, epsilon = 1e-15);
    }

    #[test]
    fn slack_sum_gives_rectangle() {
        let p = pentagon_vertices(&RatePentagon::new(1.0, 1.0, 2.5));
        assert_eq!(
            coords(&p),
            vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
        );
    }

    #[test]
    fn binding_sum_with_large_r2_cap() {
        let (c1, c2, c12) = (0.468996, 0.970951, 0.635597);
        let p = pentagon_vertices(&RatePentagon::new(c1, c2, c12));
        assert_eq!(
            coords(&p),
            vec![(0.0, 0.0), (c1, 0.0), (c1, c12 - c1), (0.0, c12)]
        );
        assert_abs_diff_eq!(c12 - c1, 0.166601, epsilon = 1e-12);
    }

    #[test]
    fn zero_caps() {
        assert_eq!(
            coords(&pentagon_vertices(&RatePentagon::degenerate())),
            vec![(0.0, 0.0)]
        );
        assert_eq!(
            coords(&pentagon_vertices(&RatePentagon::new(0.0, 0.7, 1.0))),
            vec![(0.0, 0.0), (0.0, 0.7)]
        );
        assert_eq!(
            coords(&pentagon_vertices(&RatePentagon::new(0.3, 0.0, 1.0))),
            vec![(0.0, 0.0), (0.3, 0.0)]
        );
        // sum cap binding both single caps: triangle
        assert_eq!(
            coords(&pentagon_vertices(&RatePentagon::new(1.0, 1.0, 0.5))),
            vec![(0.0, 0.0), (0.5, 0.0), (0.0, 0.5)]
        );
    }

    #[test]
    fn pentagon_vertices_meet_caps() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..500 {
            let p = RatePentagon::new(rng.gen(), rng.gen(), rng.gen::<f64>() * 2.0);
            let poly = pentagon_vertices(&p);
            for v in poly.vertices() {
                assert!(p.admits(v.r1, v.r2, 1e-15));
                let tight = v.r1 == 0.0
                    || v.r2 == 0.0
                    || (v.r1 - p.c1).abs() < 1e-15
                    || (v.r2 - p.c2).abs() < 1e-15
                    || (v.r1 + v.r2 - p.c12).abs() < 1e-15;
                assert!(tight);
            }
        }
    }

    #[test]
    fn hull_basics() {
        let h = convex_hull_2d(&[pt(1.0, 0.0), pt(0.0, 1.0), pt(0.6, 0.6)]);
        assert_eq!(
            coords(&h),
            vec![(0.0, 0.0), (1.0, 0.0), (0.6, 0.6), (0.0, 1.0)]
        );
        // collinear inputs collapse to a segment
        let h = convex_hull_2d(&[pt(1.0, 1.0), pt(2.0, 2.0), pt(0.5, 0.5)]);
        assert_eq!(coords(&h), vec![(0.0, 0.0), (2.0, 2.0)]);
        let h = convex_hull_2d(&[]);
        assert_eq!(coords(&h), vec![(0.0, 0.0)]);
    }

    /// Endpoints of maximal extreme edges: every point lies on or left of
    /// the directed line a -> b, and points on the line stay within [a, b].
    fn brute_force_hull_vertices(points: &[RatePoint]) -> Vec<RatePoint> {
        let mut verts: Vec<RatePoint> = Vec::new();
        for &a in points {
            for &b in points {
                if a == b {
                    continue;
                }
                let cross =
                    |c: RatePoint| (b.r1 - a.r1) * (c.r2 - a.r2) - (b.r2 - a.r2) * (c.r1 - a.r1);
                let proj =
                    |c: RatePoint| (c.r1 - a.r1) * (b.r1 - a.r1) + (c.r2 - a.r2) * (b.r2 - a.r2);
                let extreme = points.iter().all(|&c| {
                    let o = cross(c);
                    o > 1e-12 || (o.abs() <= 1e-12 && proj(c) >= 0.0 && proj(c) <= proj(b))
                });
                if extreme {
                    for v in [a, b] {
                        if !verts.contains(&v) {
                            verts.push(v);
                        }
                    }
                }
            }
        }
        verts
    }

    #[test]
    fn random_hull_matches_brute_force() {
        let mut rng = StdRng::seed_from_u64(42);
        let points: Vec<RatePoint> = (0..200).map(|_| pt(rng.gen(), rng.gen())).collect();
        let hull = convex_hull_2d(&points);
        for &p in &points {
            assert!(hull.contains(p, 1e-12));
        }
        for v in hull.vertices() {
            assert!(*v == RatePoint::ORIGIN || points.contains(v));
        }
        let mut with_origin = points.clone();
        with_origin.push(RatePoint::ORIGIN);
        let mut brute = brute_force_hull_vertices(&with_origin);
        let mut got = hull.vertices().to_vec();
        brute.sort_by(RatePoint::cmp_lex);
        got.sort_by(RatePoint::cmp_lex);
        assert_eq!(got, brute);
    }

    #[test]
    fn union_of_corner_pentagons() {
        let a = RatePentagon::new(1.0, 0.2, 1.2);
        let b = RatePentagon::new(0.2, 1.0, 1.2);
        let u = union_region(&[a, b]);
        assert_eq!(
            coords(&u),
            vec![(0.0, 0.0), (1.0, 0.0), (1.0, 0.2), (0.2, 1.0), (0.0, 1.0)]
        );
        assert_eq!(union_region(&[a]), pentagon_vertices(&a));
        assert_eq!(union_region(&[a, b, a, b]), u);
        // time-sharing midpoint lies on the boundary
        assert!(u.contains(pt(0.6, 0.6), 0.0));
        assert!(!u.contains(pt(0.61, 0.61), 1e-9));
    }

    #[test]
    fn containment_and_subset() {
        let p = pentagon_vertices(&RatePentagon::new(1.0, 1.0, 1.5));
        assert!(p.contains(RatePoint::ORIGIN, 0.0));
        for &v in p.vertices() {
            assert!(p.contains(v, 0.0));
        }
        assert!(!p.contains(pt(1.0, 1.0), 1e-9));
        assert!(p.contains(pt(0.75, 0.75 + 1e-10), 1e-9));
        assert!(p.is_subset(&p, 0.0));
        let small = pentagon_vertices(&RatePentagon::new(0.5, 0.5, 0.8));
        assert!(small.is_subset(&p, 0.0));
        assert!(!p.is_subset(&small, 1e-9));
    }

    #[test]
    fn hausdorff_cases() {
        let sq = convex_hull_2d(&[pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)]);
        assert_eq!(hausdorff(&sq, &sq), 0.0);
        let shifted = RegionPolygon {
            vertices: sq.vertices().iter().map(|v| pt(v.r1 + 0.1, v.r2)).collect(),
        };
        assert_abs_diff_eq!(hausdorff(&sq, &shifted), 0.1, epsilon = 1e-15);
    }

    #[test]
    fn boundary_queries() {
        let p = pentagon_vertices(&RatePentagon::new(1.0, 1.0, 1.5));
        assert_eq!(p.max_r2_at(0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(p.max_r2_at(0.75).unwrap(), 0.75, epsilon = 1e-15);
        assert_eq!(p.max_r2_at(1.0).unwrap(), 0.5);
        assert!(p.max_r2_at(1.01).is_err());
        assert!(p.max_r2_at(-0.5).is_err());
        let tri = pentagon_vertices(&RatePentagon::new(1.0, 1.0, 0.5));
        assert_eq!(tri.max_r2_at(0.5).unwrap(), 0.0);
        let seg = pentagon_vertices(&RatePentagon::new(0.0, 0.7, 1.0));
        assert_eq!(seg.max_r2_at(0.0).unwrap(), 0.7);
        let samples = p.boundary_samples(0.3).unwrap();
        assert_eq!(samples.len(), 5);
        assert_eq!(samples.last().unwrap().r1, 1.0);
    }

    fn point_strategy() -> impl Strategy<Value = Vec<RatePoint>> {
        prop::collection::vec((0.0f64..2.0, 0.0f64..2.0), 1..60)
            .prop_map(|v| v.into_iter().map(|(a, b)| pt(a, b)).collect())
    }

    proptest! {
        #[test]
        fn hull_is_idempotent(points in point_strategy()) {
            let h = convex_hull_2d(&points);
            prop_assert_eq!(convex_hull_2d(h.vertices()), h);
        }

        #[test]
        fn union_is_monotone(a in point_strategy(), b in point_strategy()) {
            let sub = convex_hull_2d(&a);
            let mut all = a.clone();
            all.extend(b);
            let sup = convex_hull_2d(&all);
            prop_assert!(sub.is_subset(&sup, 1e-12));
        }

        #[test]
        fn zero_hausdorff_means_mutual_subset(points in point_strategy()) {
            let h = convex_hull_2d(&points);
            let mut rev = h.vertices().to_vec();
            rev.reverse();
            let again = convex_hull_2d(&rev);
            prop_assert_eq!(hausdorff(&h, &again), 0.0);
            prop_assert!(h.is_subset(&again, 1e-12) && again.is_subset(&h, 1e-12));
        }

        #[test]
        fn merge_is_commutative(a in point_strategy(), b in point_strategy()) {
            let (ha, hb) = (convex_hull_2d(&a), convex_hull_2d(&b));
            prop_assert_eq!(ha.merge(&hb), hb.merge(&ha));
        }
    }
}
