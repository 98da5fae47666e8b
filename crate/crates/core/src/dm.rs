//! Inner-bound evaluation for arbitrary finite discrete-memoryless channels
//! with one informed encoder.
//!
//! A [`DmChannelSpec`] describes the joint law
//! `p(q) p(s) p(u1|s,q) p(x1|u1,s,q) p(x2|q) p(y|x1,x2,s)`; the pentagon caps
//! are then exact conditional mutual informations of that law.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::info::{JointTable, PROB_SLACK};

/// Coordinates of the induced joint table.
pub mod var {
    pub const Q: usize = 0;
    pub const S: usize = 1;
    pub const U1: usize = 2;
    pub const X1: usize = 3;
    pub const X2: usize = 4;
    pub const Y: usize = 5;
}

/// Alphabet sizes of every variable in the factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Alphabets {
    pub q: usize,
    pub s: usize,
    pub u1: usize,
    pub x1: usize,
    pub x2: usize,
    pub y: usize,
}

impl Alphabets {
    /// Cardinality bound on the auxiliary variable, `|X1||X2||S| + 4`.
    pub fn u1_cap(&self) -> usize {
        self.x1 * self.x2 * self.s + 4
    }

    pub const Q_CAP: usize = 4;
}

/// Conditional law `p(child | parents)`, one row per parent configuration,
/// parents row-major in the listed order.
#[derive(Debug, Clone, PartialEq)]
pub struct CondTable {
    parents: Vec<usize>,
    child: usize,
    data: Vec<f64>,
}

impl CondTable {
    pub fn new(parents: Vec<usize>, child: usize, data: Vec<f64>) -> Result<Self> {
        let rows: usize = parents.iter().product();
        if rows * child != data.len() {
            return Err(Error::Shape(format!(
                "conditional table with parents {parents:?} and child size {child} needs {} entries, got {}",
                rows * child,
                data.len()
            )));
        }
        Ok(Self {
            parents,
            child,
            data,
        })
    }

    /// Builds a table from a function of `(parent configuration, child value)`.
    pub fn from_fn(parents: Vec<usize>, child: usize, f: impl Fn(&[usize], usize) -> f64) -> Self {
        let rows: usize = parents.iter().product();
        let mut data = Vec::with_capacity(rows * child);
        let mut idx = vec![0usize; parents.len()];
        for _ in 0..rows {
            for c in 0..child {
                data.push(f(&idx, c));
            }
            for k in (0..parents.len()).rev() {
                idx[k] += 1;
                if idx[k] < parents[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        Self {
            parents,
            child,
            data,
        }
    }

    /// Deterministic table: the child is `f(parents)` with probability one.
    pub fn deterministic(parents: Vec<usize>, child: usize, f: impl Fn(&[usize]) -> usize) -> Self {
        Self::from_fn(parents, child, |p, c| if f(p) == c { 1.0 } else { 0.0 })
    }

    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn child(&self) -> usize {
        self.child
    }

    pub fn rows(&self) -> usize {
        self.parents.iter().product()
    }

    pub fn row(&self, parent_index: &[usize]) -> &[f64] {
        let mut r = 0;
        for (&i, &n) in parent_index.iter().zip(&self.parents) {
            r = r * n + i;
        }
        &self.data[r * self.child..(r + 1) * self.child]
    }

    fn row_flat(&self, r: usize) -> &[f64] {
        &self.data[r * self.child..(r + 1) * self.child]
    }

    fn row_label(&self, r: usize) -> Vec<usize> {
        let mut idx = vec![0; self.parents.len()];
        let mut rem = r;
        for k in (0..self.parents.len()).rev() {
            idx[k] = rem % self.parents[k];
            rem /= self.parents[k];
        }
        idx
    }
}

/// Finite-alphabet channel specification realizing the factorization
/// `p(q) p(s) p(u1|s,q) p(x1|u1,s,q) p(x2|q) p(y|x1,x2,s)`.
///
/// The struct may hold unnormalized data; [`validate_spec`] reports problems
/// and every evaluation refuses specs with hard violations.
#[derive(Debug, Clone, PartialEq)]
pub struct DmChannelSpec {
    pub alphabets: Alphabets,
    pub q_dist: Vec<f64>,
    pub s_dist: Vec<f64>,
    /// parents (S, Q)
    pub u1_given_sq: CondTable,
    /// parents (U1, S, Q)
    pub x1_given_u1sq: CondTable,
    /// parents (Q)
    pub x2_given_q: CondTable,
    /// parents (X1, X2, S)
    pub y_given_x1x2s: CondTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Advisory,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    /// Table (and row) the finding refers to.
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Advisory => "advisory",
        };
        write!(f, "{tag}: {}: {}", self.location, self.message)
    }
}

fn check_row(row: &[f64], location: String, out: &mut Vec<Diagnostic>) {
    if let Some((i, v)) = row
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite() || **v < -PROB_SLACK)
    {
        out.push(Diagnostic {
            severity: Severity::Error,
            location,
            message: format!("entry {i} = {v} is negative or not finite"),
        });
        return;
    }
    let total: f64 = row.iter().sum();
    if (total - 1.0).abs() > PROB_SLACK {
        out.push(Diagnostic {
            severity: Severity::Error,
            location,
            message: format!("row sums to {total}, expected 1"),
        });
    }
}

fn check_cond(
    name: &str,
    table: &CondTable,
    parents: &[(&str, usize)],
    child: (&str, usize),
    out: &mut Vec<Diagnostic>,
) {
    let want: Vec<usize> = parents.iter().map(|p| p.1).collect();
    if table.parents != want || table.child != child.1 {
        let names: Vec<&str> = parents.iter().map(|p| p.0).collect();
        out.push(Diagnostic {
            severity: Severity::Error,
            location: name.to_string(),
            message: format!(
                "table shape {:?} x {} does not match alphabets {:?} = {:?} x {} = {}",
                table.parents, table.child, names, want, child.0, child.1
            ),
        });
        return;
    }
    for r in 0..table.rows() {
        let label = table.row_label(r);
        let coords: Vec<String> = parents
            .iter()
            .zip(&label)
            .map(|((n, _), i)| format!("{n}={i}"))
            .collect();
        check_row(
            table.row_flat(r),
            format!("{name}[{}]", coords.join(",")),
            out,
        );
    }
}

/// Lists normalization violations, shape inconsistencies and cardinality
/// advisories. Advisories never block evaluation.
pub fn validate_spec(spec: &DmChannelSpec) -> Vec<Diagnostic> {
    let a = spec.alphabets;
    let mut out = Vec::new();
    for (name, n) in [
        ("Q", a.q),
        ("S", a.s),
        ("U1", a.u1),
        ("X1", a.x1),
        ("X2", a.x2),
        ("Y", a.y),
    ] {
        if n == 0 {
            out.push(Diagnostic {
                severity: Severity::Error,
                location: format!("alphabets.{name}"),
                message: "alphabet must be nonempty".into(),
            });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for (name, dist, n) in [("q_dist", &spec.q_dist, a.q), ("s_dist", &spec.s_dist, a.s)] {
        if dist.len() != n {
            out.push(Diagnostic {
                severity: Severity::Error,
                location: name.to_string(),
                message: format!("length {} does not match alphabet size {n}", dist.len()),
            });
        } else {
            check_row(dist, name.to_string(), &mut out);
        }
    }
    check_cond(
        "u1_given_sq",
        &spec.u1_given_sq,
        &[("S", a.s), ("Q", a.q)],
        ("U1", a.u1),
        &mut out,
    );
    check_cond(
        "x1_given_u1sq",
        &spec.x1_given_u1sq,
        &[("U1", a.u1), ("S", a.s), ("Q", a.q)],
        ("X1", a.x1),
        &mut out,
    );
    check_cond(
        "x2_given_q",
        &spec.x2_given_q,
        &[("Q", a.q)],
        ("X2", a.x2),
        &mut out,
    );
    check_cond(
        "y_given_x1x2s",
        &spec.y_given_x1x2s,
        &[("X1", a.x1), ("X2", a.x2), ("S", a.s)],
        ("Y", a.y),
        &mut out,
    );
    if a.q > Alphabets::Q_CAP {
        out.push(Diagnostic {
            severity: Severity::Advisory,
            location: "alphabets.Q".into(),
            message: format!(
                "|Q| = {} exceeds the sufficient cardinality {}",
                a.q,
                Alphabets::Q_CAP
            ),
        });
    }
    if a.u1 > a.u1_cap() {
        out.push(Diagnostic {
            severity: Severity::Advisory,
            location: "alphabets.U1".into(),
            message: format!(
                "|U1| = {} exceeds the sufficient cardinality |X1||X2||S|+4 = {}",
                a.u1,
                a.u1_cap()
            ),
        });
    }
    out
}

fn ensure_valid(spec: &DmChannelSpec) -> Result<()> {
    let errors: Vec<String> = validate_spec(spec)
        .into_iter()
        .filter(|d| d.severity == Severity::Error)
        .map(|d| d.to_string())
        .collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(Error::Distribution(errors.join("; ")))
    }
}

/// Joint law over `(Q, S, U1, X1, X2, Y)` induced by the spec.
///
/// The output is generated from `(X1, X2, S)`, matching the channel law.
pub fn induced_joint(spec: &DmChannelSpec) -> Result<JointTable> {
    ensure_valid(spec)?;
    let a = spec.alphabets;
    let shape = vec![a.q, a.s, a.u1, a.x1, a.x2, a.y];
    let mut mass = Vec::with_capacity(shape.iter().product());
    for q in 0..a.q {
        for s in 0..a.s {
            let p_qs = spec.q_dist[q] * spec.s_dist[s];
            let u_row = spec.u1_given_sq.row(&[s, q]);
            for (u, &pu) in u_row.iter().enumerate() {
                let x1_row = spec.x1_given_u1sq.row(&[u, s, q]);
                for (x1, &px1) in x1_row.iter().enumerate() {
                    let x2_row = spec.x2_given_q.row(&[q]);
                    for (x2, &px2) in x2_row.iter().enumerate() {
                        let y_row = spec.y_given_x1x2s.row(&[x1, x2, s]);
                        let base = p_qs * pu * px1 * px2;
                        mass.extend(y_row.iter().map(|&py| (base * py).max(0.0)));
                    }
                }
            }
        }
    }
    JointTable::new(shape, mass)
}

/// Three caps `R1 <= c1`, `R2 <= c2`, `R1 + R2 <= c12` describing a
/// pentagon-shaped rate region. Caps are stored clamped at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatePentagon {
    pub c1: f64,
    pub c2: f64,
    pub c12: f64,
}

impl RatePentagon {
    pub fn new(c1: f64, c2: f64, c12: f64) -> Self {
        Self {
            c1: c1.max(0.0),
            c2: c2.max(0.0),
            c12: c12.max(0.0),
        }
    }

    /// The empty-interior pentagon `{(0, 0)}`.
    pub fn degenerate() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn c1_eff(&self) -> f64 {
        self.c1.min(self.c12)
    }

    pub fn c2_eff(&self) -> f64 {
        self.c2.min(self.c12)
    }

    /// Whether `(r1, r2)` satisfies all three caps within `tol`.
    pub fn admits(&self, r1: f64, r2: f64, tol: f64) -> bool {
        r1 >= -tol
            && r2 >= -tol
            && r1 <= self.c1 + tol
            && r2 <= self.c2 + tol
            && r1 + r2 <= self.c12 + tol
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.c1 * factor, self.c2 * factor, self.c12 * factor)
    }
}

/// Unclamped mutual-information terms behind a [`RatePentagon`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InnerBoundTerms {
    /// `I(U1; Y | X2, Q)`
    pub u1_y_given_x2: f64,
    /// `I(X2; Y | U1, Q)`
    pub x2_y_given_u1: f64,
    /// `I(U1, X2; Y | Q)`
    pub u1x2_y: f64,
    /// `I(U1; S | Q)`, the binning cost
    pub u1_s: f64,
}

impl InnerBoundTerms {
    pub fn pentagon(&self) -> RatePentagon {
        RatePentagon::new(
            self.u1_y_given_x2 - self.u1_s,
            self.x2_y_given_u1,
            self.u1x2_y - self.u1_s,
        )
    }
}

pub fn inner_bound_terms(joint: &JointTable) -> Result<InnerBoundTerms> {
    use var::*;
    Ok(InnerBoundTerms {
        u1_y_given_x2: joint.conditional_mutual_information(&[U1], &[Y], &[X2, Q])?,
        x2_y_given_u1: joint.conditional_mutual_information(&[X2], &[Y], &[U1, Q])?,
        u1x2_y: joint.conditional_mutual_information(&[U1, X2], &[Y], &[Q])?,
        u1_s: joint.conditional_mutual_information(&[U1], &[S], &[Q])?,
    })
}

/// Inner-bound pentagon of the spec:
/// `c1 = I(U1;Y|X2,Q) - I(U1;S|Q)`, `c2 = I(X2;Y|U1,Q)`,
/// `c12 = I(U1,X2;Y|Q) - I(U1;S|Q)`, each clamped at zero.
pub fn theorem1_pentagon(spec: &DmChannelSpec) -> Result<RatePentagon> {
    Ok(inner_bound_terms(&induced_joint(spec)?)?.pentagon())
}
