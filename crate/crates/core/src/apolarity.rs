//! The apolar pairing `A(a, b) = sum_j (-1)^j a_j b_{n-j} / C(n, j)` and
//! the derivative identity that relates weak apolarity at index `n` to
//! apolarity of `a^{(n-m)}` and `b` at index `m`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{binomial, falling_product, pair, Complex, Poly};

/// Default relative tolerance for declaring a pair apolar.
pub const DEFAULT_APOLAR_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApolarityReport {
    #[serde(with = "pair")]
    pub value: Complex,
    /// `sum_j |a_j| |b_{n-j}| / C(n, j)`.
    pub scale: f64,
    pub relative_residual: f64,
    pub apolar: bool,
    pub tol: f64,
    /// Binomial index the operator was evaluated at.
    pub index: usize,
}

fn degree_or_zero(p: &Poly) -> usize {
    p.degree().unwrap_or(0)
}

fn relative(value: f64, scale: f64) -> f64 {
    if value == 0.0 {
        0.0
    } else {
        value / scale.max(f64::MIN_POSITIVE)
    }
}

/// Evaluates `A(a, b)` at binomial index `n` with the default tolerance.
pub fn apolar_operator(a: &Poly, b: &Poly, n: usize) -> Result<ApolarityReport> {
    apolar_operator_with_tol(a, b, n, DEFAULT_APOLAR_TOL)
}

pub fn apolar_operator_with_tol(a: &Poly, b: &Poly, n: usize, tol: f64) -> Result<ApolarityReport> {
    let (da, db) = (degree_or_zero(a), degree_or_zero(b));
    if n < da.max(db) {
        return Err(Error::InvalidDegree(format!(
            "apolar index {n} is below the operand degrees ({da}, {db})"
        )));
    }
    let mut value = Complex::new(0.0, 0.0);
    let mut scale = 0.0;
    for j in 0..=n {
        let (aj, bj) = (a.coeff(j), b.coeff(n - j));
        if aj == Complex::new(0.0, 0.0) || bj == Complex::new(0.0, 0.0) {
            continue;
        }
        let binom = binomial(n, j)?;
        let term = aj * bj / binom;
        value += if j % 2 == 0 { term } else { -term };
        scale += aj.norm() * bj.norm() / binom;
    }
    let relative_residual = relative(value.norm(), scale);
    Ok(ApolarityReport {
        value,
        scale,
        relative_residual,
        apolar: relative_residual <= tol,
        tol,
        index: n,
    })
}

/// Weak apolarity: `A(a, b) = 0` at index `degree(a)` with `degree(b) <= degree(a)`.
pub fn is_weakly_apolar(a: &Poly, b: &Poly, tol: f64) -> Result<bool> {
    let (n, m) = (degree_or_zero(a), degree_or_zero(b));
    if m > n {
        return Err(Error::InvalidDegree(format!(
            "weak apolarity needs degree(b) = {m} <= degree(a) = {n}"
        )));
    }
    Ok(apolar_operator_with_tol(a, b, n, tol)?.relative_residual <= tol)
}

/// Both sides of the derivative identity
/// `A(a, b) = (-1)^{n-m} / (n (n-1) ... (m+1)) * A(a^{(n-m)}, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivativeIdentity {
    /// `A(a, b)` at index `n`.
    pub full: ApolarityReport,
    /// `A(a^{(n-m)}, b)` at index `m`.
    pub reduced: ApolarityReport,
    pub residual: f64,
}

/// Evaluates both sides of the derivative identity with `n = degree(a)` and
/// `m = degree(b)`.
pub fn derivative_identity(a: &Poly, b: &Poly, tol: f64) -> Result<DerivativeIdentity> {
    let (n, m) = (degree_or_zero(a), degree_or_zero(b));
    if m > n {
        return Err(Error::InvalidDegree(format!(
            "derivative identity needs degree(b) = {m} <= degree(a) = {n}"
        )));
    }
    let full = apolar_operator_with_tol(a, b, n, tol)?;
    let reduced = apolar_operator_with_tol(&a.derivative(n - m), b, m, tol)?;
    let factor = falling_product(n, m);
    let sign = if (n - m) % 2 == 0 { 1.0 } else { -1.0 };
    let rhs = reduced.value * (sign / factor);
    let scale = full.scale.max(reduced.scale / factor);
    let residual = relative((full.value - rhs).norm(), scale);
    Ok(DerivativeIdentity {
        full,
        reduced,
        residual,
    })
}

/// Relative discrepancy between the two sides of the derivative identity.
pub fn derivative_identity_residual(a: &Poly, b: &Poly) -> Result<f64> {
    Ok(derivative_identity(a, b, DEFAULT_APOLAR_TOL)?.residual)
}
