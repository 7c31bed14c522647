//! Dense complex polynomials in ascending-power order, plus the disc type
//! that frames every localization statement.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use num_complex::Complex64 as Complex;

/// Largest `n` for which `C(n, k)` fits an exact `u64` for every `k`.
pub const MAX_BINOMIAL_N: usize = 62;

/// Exact binomial coefficient converted to `f64`.
pub fn binomial(n: usize, k: usize) -> Result<f64> {
    if n > MAX_BINOMIAL_N {
        return Err(Error::BinomialOverflow(n));
    }
    if k > n {
        return Ok(0.0);
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 1..=k as u64 {
        // acc * (n - k + i) / i stays integral at every step
        acc = acc * (n as u64 - k as u64 + i) / i;
    }
    Ok(acc as f64)
}

/// `hi * (hi - 1) * ... * (lo + 1)`; the empty product is 1.
pub fn falling_product(hi: usize, lo: usize) -> f64 {
    (lo + 1..=hi).fold(1.0, |acc, v| acc * v as f64)
}

pub(crate) fn check_finite(z: Complex, what: &'static str) -> Result<Complex> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Serde helpers for writing complex numbers as `[re, im]` pairs.
pub mod pair {
    use super::Complex;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex::new(re, im))
    }

    pub mod vec {
        use super::Complex;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(zs: &[Complex], s: S) -> Result<S::Ok, S::Error> {
            let pairs: Vec<[f64; 2]> = zs.iter().map(|z| [z.re, z.im]).collect();
            pairs.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex>, D::Error> {
            let pairs = Vec::<[f64; 2]>::deserialize(d)?;
            Ok(pairs
                .into_iter()
                .map(|[re, im]| Complex::new(re, im))
                .collect())
        }
    }

    pub mod option {
        use super::Complex;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(z: &Option<Complex>, s: S) -> Result<S::Ok, S::Error> {
            z.map(|z| [z.re, z.im]).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex>, D::Error> {
            let pair = Option::<[f64; 2]>::deserialize(d)?;
            Ok(pair.map(|[re, im]| Complex::new(re, im)))
        }
    }
}

/// Dense polynomial with complex coefficients; `coeffs[i]` multiplies `z^i`.
///
/// The representation is normalized on construction: trailing (highest
/// power) zero coefficients are stripped, and the zero polynomial is the
/// single entry `[0]` with no degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex>,
}

impl Poly {
    pub fn new(coeffs: Vec<Complex>) -> Result<Self> {
        for &c in &coeffs {
            check_finite(c, "polynomial coefficient")?;
        }
        Ok(Self::normalized(coeffs))
    }

    /// Builds from real coefficients, ascending powers.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect())
    }

    fn normalized(mut coeffs: Vec<Complex>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&Complex::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self {
            coeffs: vec![Complex::new(0.0, 0.0)],
        }
    }

    pub fn constant(c: Complex) -> Self {
        Self::normalized(vec![c])
    }

    /// `c * z^power`.
    pub fn monomial(c: Complex, power: usize) -> Self {
        let mut coeffs = vec![Complex::new(0.0, 0.0); power + 1];
        coeffs[power] = c;
        Self::normalized(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    /// Coefficient of `z^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> Complex {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex::new(0.0, 0.0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Complex {
        *self
            .coeffs
            .last()
            .expect("normalized polynomial is never empty")
    }

    /// Horner evaluation.
    pub fn evaluate(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `sum |a_i| * r^i`, the cancellation-free magnitude at modulus `r`.
    pub fn abs_evaluate(&self, r: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// The `order`-fold formal derivative.
    pub fn derivative(&self, order: usize) -> Poly {
        if order == 0 {
            return self.clone();
        }
        if order >= self.coeffs.len() {
            return Poly::zero();
        }
        let coeffs = (order..self.coeffs.len())
            .map(|j| self.coeffs[j] * falling_product(j, j - order))
            .collect();
        Poly::normalized(coeffs)
    }

    /// Monic polynomial `(z - r_1)(z - r_2)...` expanded in input order.
    pub fn from_roots(roots: &[Complex]) -> Result<Poly> {
        let mut coeffs = vec![Complex::new(1.0, 0.0)];
        for &r in roots {
            check_finite(r, "root")?;
            coeffs.push(Complex::new(0.0, 0.0));
            for i in (1..coeffs.len()).rev() {
                coeffs[i] = coeffs[i - 1] - r * coeffs[i];
            }
            coeffs[0] = -r * coeffs[0];
        }
        Ok(Poly::normalized(coeffs))
    }

    /// `p(center + radius * w)` as a polynomial in `w`.
    pub fn affine_substitute(&self, center: Complex, radius: f64) -> Result<Poly> {
        check_finite(center, "affine center")?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "affine radius must be positive, got {radius}"
            )));
        }
        let map = Poly {
            coeffs: vec![center, Complex::new(radius, 0.0)],
        };
        let mut acc = Poly::zero();
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * &map) + &Poly::constant(c);
        }
        Ok(acc)
    }

    pub fn scale(&self, s: Complex) -> Poly {
        Poly::normalized(self.coeffs.iter().map(|&c| c * s).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == Complex::new(0.0, 0.0) && !self.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::normalized((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::normalized((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(Complex::new(-1.0, 0.0))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Complex::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::normalized(out)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        pair::vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coeffs = pair::vec::deserialize(d)?;
        Poly::new(coeffs).map_err(serde::de::Error::custom)
    }
}

/// Closed disc `|z - center| <= radius`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    #[serde(with = "pair")]
    pub center: Complex,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: Complex, radius: f64) -> Result<Self> {
        check_finite(center, "disc center")?;
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "disc radius must be finite and nonnegative, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn unit() -> Self {
        Self {
            center: Complex::new(0.0, 0.0),
            radius: 1.0,
        }
    }

    /// Maps `z` into the frame where this disc is the closed unit disc.
    pub fn normalize(&self, z: Complex) -> Complex {
        (z - self.center) / self.radius
    }

    pub fn denormalize(&self, w: Complex) -> Complex {
        self.center + w * self.radius
    }

    pub fn contains(&self, z: Complex, rel_slack: f64) -> bool {
        (z - self.center).norm() <= self.radius * (1.0 + rel_slack)
    }
}
