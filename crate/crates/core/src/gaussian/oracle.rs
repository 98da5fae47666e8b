//! Independent evaluation of the GDPC rates from the joint covariance of
//! `(S, X1, U1, X2, Y)`.

use nalgebra::DMatrix;

use super::{GaussianMacParams, GdpcParams, GdpcRates};
use crate::error::{Error, Result};

const S: usize = 0;
const X1: usize = 1;
const U1: usize = 2;
const X2: usize = 3;
const Y: usize = 4;

fn covariance(m: &GaussianMacParams, g: &GdpcParams) -> DMatrix<f64> {
    let (p1, p2, q, n, a) = (m.p1, m.p2, m.q, m.n, g.alpha);
    let k = g.rho * (p1 * q).sqrt();
    let mut c = DMatrix::zeros(5, 5);
    let mut set = |i: usize, j: usize, v: f64| {
        c[(i, j)] = v;
        c[(j, i)] = v;
    };
    set(S, S, q);
    set(X1, X1, p1);
    set(S, X1, k);
    set(U1, S, k + a * q);
    set(U1, X1, p1 + a * k);
    set(U1, U1, p1 + a * a * q + 2.0 * a * k);
    set(X2, X2, p2);
    set(Y, S, k + q);
    set(Y, X1, p1 + k);
    set(Y, U1, p1 + a * k + k + a * q);
    set(Y, X2, p2);
    set(Y, Y, p1 + q + 2.0 * k + p2 + n);
    c
}

fn sub_det(c: &DMatrix<f64>, idx: &[usize]) -> Result<f64> {
    if idx.is_empty() {
        return Ok(1.0);
    }
    let sub = DMatrix::from_fn(idx.len(), idx.len(), |i, j| c[(idx[i], idx[j])]);
    let d = sub.determinant();
    if !(d > 0.0) {
        return Err(Error::NotPositiveDefinite(format!(
            "variables {idx:?} have determinant {d}"
        )));
    }
    Ok(d)
}

/// `I(A;B|C)` in bits for jointly Gaussian variables.
fn cmi(c: &DMatrix<f64>, a: &[usize], b: &[usize], cond: &[usize]) -> Result<f64> {
    let join = |x: &[usize], y: &[usize]| [x, y].concat();
    let ac = sub_det(c, &join(a, cond))?;
    let bc = sub_det(c, &join(b, cond))?;
    let abc = sub_det(c, &[a, b, cond].concat())?;
    let cc = sub_det(c, cond)?;
    Ok(0.5 * (ac * bc / (abc * cc)).log2())
}

/// Rates `I(U1;Y|X2) - I(U1;S)`, `I(X2;Y|U1)` and `I(U1,X2;Y) - I(U1;S)`
/// from covariance determinants. Needs `P1, P2, Q, N > 0`.
pub fn gaussian_mi_oracle(m: &GaussianMacParams, g: &GdpcParams) -> Result<GdpcRates> {
    for (name, v) in [("P1", m.p1), ("P2", m.p2), ("Q", m.q), ("N", m.n)] {
        if !(v > 0.0) {
            return Err(Error::domain(name, v, "(0, inf) for the covariance oracle"));
        }
    }
    let c = covariance(m, g);
    let u1_s = cmi(&c, &[U1], &[S], &[])?;
    Ok(GdpcRates {
        r1: cmi(&c, &[U1], &[Y], &[X2])? - u1_s,
        r2: cmi(&c, &[X2], &[Y], &[U1])?,
        r3: cmi(&c, &[U1, X2], &[Y], &[])? - u1_s,
    })
}
