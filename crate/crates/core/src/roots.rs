//! Simultaneous root finding with the Aberth–Ehrlich iteration.
//!
//! Starting points sit on a circle of radius `fujiwara_bound / 2` with
//! seeded angular jitter. Each root is frozen once its correction drops
//! below `tol * max(1, |z|)` or once `|p(z)|` reaches the rounding floor of
//! the Horner evaluation; multiple roots therefore come back as clusters
//! of width about `sqrt(eps)` rather than failing to converge.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::fujiwara_bound;
use crate::error::{Error, Result};
use crate::poly::{pair, Complex, Poly};

pub const MAX_DEGREE: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootFinder {
    /// Step tolerance, relative to `max(1, |z|)`.
    pub tol: f64,
    pub max_iters: usize,
    /// Bound on `|p(z)| / (sum |a_i| max(1, |z|)^n)` for a converged result.
    pub residual_tol: f64,
    pub seed: u64,
}

impl Default for RootFinder {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iters: 200,
            residual_tol: 1e-9,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootResult {
    #[serde(with = "pair::vec")]
    pub roots: Vec<Complex>,
    pub max_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl RootResult {
    /// Roots ordered by real part, then imaginary part.
    pub fn sorted_roots(&self) -> Vec<Complex> {
        let mut roots = self.roots.clone();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        roots
    }
}

/// `|p(z)| / (sum |a_i| max(1, |z|)^n)`.
pub fn relative_residual(p: &Poly, z: Complex) -> f64 {
    let n = p.degree().unwrap_or(0) as i32;
    let scale = p.coeffs().iter().map(|c| c.norm()).sum::<f64>() * z.norm().max(1.0).powi(n);
    p.evaluate(z).norm() / scale.max(f64::MIN_POSITIVE)
}

fn eval_with_derivative(coeffs: &[Complex], z: Complex) -> (Complex, Complex, f64) {
    let r = z.norm();
    let mut value = Complex::new(0.0, 0.0);
    let mut slope = Complex::new(0.0, 0.0);
    let mut magnitude = 0.0;
    for &c in coeffs.iter().rev() {
        slope = slope * z + value;
        value = value * z + c;
        magnitude = magnitude * r + c.norm();
    }
    (value, slope, magnitude)
}

impl RootFinder {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn find_roots(&self, p: &Poly) -> Result<RootResult> {
        let n = match p.degree() {
            Some(n) if n >= 1 => n,
            _ => {
                return Err(Error::InvalidDegree(
                    "root finding needs a polynomial of degree >= 1".into(),
                ))
            }
        };
        if n > MAX_DEGREE {
            return Err(Error::DegreeTooLarge(n));
        }

        let zeros_at_origin = p.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
        let mut roots = vec![Complex::new(0.0, 0.0); zeros_at_origin];
        let deflated = &p.coeffs()[zeros_at_origin..];
        let m = deflated.len() - 1;
        let mut iterations = 0;
        let mut all_frozen = true;

        if m == 1 {
            roots.push(-deflated[0] / deflated[1]);
        } else if m > 1 {
            let (found, iters, frozen) = self.aberth(deflated)?;
            roots.extend(found);
            iterations = iters;
            all_frozen = frozen;
        }

        let max_residual = roots
            .iter()
            .map(|&z| relative_residual(p, z))
            .fold(0.0, f64::max);
        Ok(RootResult {
            roots,
            max_residual,
            iterations,
            converged: all_frozen && max_residual <= self.residual_tol,
        })
    }

    fn aberth(&self, coeffs: &[Complex]) -> Result<(Vec<Complex>, usize, bool)> {
        let m = coeffs.len() - 1;
        let lead = coeffs[m];
        let monic: Vec<Complex> = coeffs.iter().map(|c| c / lead).collect();
        let radius = fujiwara_bound(&Poly::new(monic.clone())?)?.fujiwara_radius / 2.0;

        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let offset: f64 = rng.gen_range(0.0..TAU);
        let mut z: Vec<Complex> = (0..m)
            .map(|j| {
                let jitter: f64 = rng.gen_range(0.0..0.5);
                let angle = offset + TAU * (j as f64 + jitter) / m as f64;
                Complex::from_polar(radius, angle)
            })
            .collect();
        let mut frozen = vec![false; m];
        let floor_factor = 4.0 * m as f64 * f64::EPSILON;

        let mut iterations = 0;
        while iterations < self.max_iters && frozen.iter().any(|f| !f) {
            iterations += 1;
            for i in 0..m {
                if frozen[i] {
                    continue;
                }
                let (value, slope, magnitude) = eval_with_derivative(&monic, z[i]);
                if value.norm() <= floor_factor * magnitude {
                    frozen[i] = true;
                    continue;
                }
                let newton = value / slope;
                let repulsion: Complex = (0..m)
                    .filter(|&j| j != i)
                    .map(|j| z[i] - z[j])
                    .filter(|d| d.norm() > 0.0)
                    .map(|d| d.inv())
                    .sum();
                let mut step = newton / (Complex::new(1.0, 0.0) - newton * repulsion);
                if !(step.re.is_finite() && step.im.is_finite()) {
                    step = if newton.re.is_finite() && newton.im.is_finite() {
                        newton
                    } else {
                        // stationary point of p: nudge off it
                        Complex::from_polar(radius.max(1.0) * 1e-3, rng.gen_range(0.0..TAU))
                    };
                }
                z[i] -= step;
                if step.norm() <= self.tol * z[i].norm().max(1.0) {
                    frozen[i] = true;
                }
            }
        }
        Ok((z, iterations, frozen.iter().all(|&f| f)))
    }

    /// The root nearest `center` and its distance.
    pub fn min_modulus_root(&self, p: &Poly, center: Complex) -> Result<(Complex, f64)> {
        let result = self.find_roots(p)?;
        if !result.converged {
            return Err(Error::NotConverged {
                iterations: result.iterations,
                max_residual: result.max_residual,
            });
        }
        Ok(result
            .roots
            .iter()
            .map(|&r| (r, (r - center).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("degree >= 1 yields at least one root"))
    }
}

/// Default finder with the given step tolerance and iteration cap.
pub fn find_roots(p: &Poly, tol: f64, max_iters: usize) -> Result<RootResult> {
    RootFinder {
        tol,
        max_iters,
        ..RootFinder::default()
    }
    .find_roots(p)
}

pub fn min_modulus_root(p: &Poly, center: Complex) -> Result<(Complex, f64)> {
    RootFinder::default().min_modulus_root(p, center)
}
