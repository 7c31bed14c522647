//! Root inclusion radii: the Fujiwara-type bound
//! `M = 2 max_i |a_i / a_n|^(1/(n-i))` and the certified radius
//! `2 (n - k + 1) / ln 2` for a zero of `p^(k-1)`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::construction::{alpha, WitnessPoly};
use crate::error::{Error, Result};
use crate::poly::{Disc, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FujiwaraBound {
    pub degree: usize,
    pub fujiwara_radius: f64,
    /// Coefficient index attaining the max; `None` when every lower
    /// coefficient vanishes (all roots at the origin).
    pub argmax_index: Option<usize>,
}

/// Radius of a disc about the origin that contains every zero of `p`.
pub fn fujiwara_bound(p: &Poly) -> Result<FujiwaraBound> {
    let n = match p.degree() {
        Some(n) if n >= 1 => n,
        _ => {
            return Err(Error::InvalidDegree(
                "root bound needs a polynomial of degree >= 1".into(),
            ))
        }
    };
    let lead = p.leading().norm();
    // zero low-order coefficients only contribute roots at 0
    let first = p.coeffs().iter().position(|c| c.norm() > 0.0).unwrap_or(n);
    let mut best = FujiwaraBound {
        degree: n,
        fujiwara_radius: 0.0,
        argmax_index: None,
    };
    let mut best_term = 0.0;
    for i in first..n {
        let ratio = p.coeff(i).norm() / lead;
        if ratio == 0.0 {
            continue;
        }
        let term = ratio.powf(1.0 / (n - i) as f64);
        if term > best_term {
            best_term = term;
            best.argmax_index = Some(i);
        }
    }
    best.fujiwara_radius = 2.0 * best_term;
    Ok(best)
}

/// `2 (n - k + 1) / ln 2`.
pub fn kakeya_radius(n: usize, k: usize) -> Result<f64> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "certified radius needs 1 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    Ok(2.0 * (n - k + 1) as f64 / LN_2)
}

/// The certified disc for a general frame `Disc(c, r)`: same center,
/// radius scaled by `r`.
pub fn bound_disc_for_general_frame(d: &Disc, n: usize, k: usize) -> Result<Disc> {
    if !(d.radius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "frame radius must be positive, got {}",
            d.radius
        )));
    }
    Disc::new(d.center, d.radius * kakeya_radius(n, k)?)
}

/// Every radius attached to a witness polynomial of degree `d = n - k + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub fujiwara_radius: f64,
    /// `2 |t_{d-1} / t_d|`, the single subleading term of the max.
    pub subleading_radius: f64,
    /// `2 (n - k + 1) alpha / k`, the majorant from the power-sum bound.
    pub alpha_radius: f64,
    pub kakeya_radius: f64,
    pub argmax_index: Option<usize>,
}

impl BoundReport {
    /// The subleading term alone undercuts the full max.
    pub fn subleading_below_full(&self) -> bool {
        self.subleading_radius < self.fujiwara_radius
    }
}

pub fn witness_bound_report(w: &WitnessPoly) -> Result<BoundReport> {
    if w.target_index + 1 != w.k {
        return Err(Error::InvalidParameter(
            "bound report is defined for target index k - 1 only".into(),
        ));
    }
    let fb = fujiwara_bound(&w.t)?;
    let d = fb.degree;
    let subleading_radius = 2.0 * (w.t.coeff(d - 1) / w.t.leading()).norm();
    Ok(BoundReport {
        n: w.n,
        k: w.k,
        fujiwara_radius: fb.fujiwara_radius,
        subleading_radius,
        alpha_radius: 2.0 * d as f64 * alpha(w.k)? / w.k as f64,
        kakeya_radius: kakeya_radius(w.n, w.k)?,
        argmax_index: fb.argmax_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_witness, solve_weights};
    use crate::poly::Complex;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn pure_power_minus_constant() {
        let cst = c(3.0, 4.0);
        let mut coeffs = vec![c(0.0, 0.0); 6];
        coeffs[0] = -cst;
        coeffs[5] = c(1.0, 0.0);
        let p = Poly::new(coeffs).unwrap();
        let fb = fujiwara_bound(&p).unwrap();
        assert!((fb.fujiwara_radius - 2.0 * 5f64.powf(0.2)).abs() < 1e-14);
        assert_eq!(fb.argmax_index, Some(0));
    }

    #[test]
    fn linear_case() {
        let a = c(-0.7, 2.0);
        let p = Poly::from_roots(&[a]).unwrap();
        let fb = fujiwara_bound(&p).unwrap();
        assert!((fb.fujiwara_radius - 2.0 * a.norm()).abs() < 1e-14);
    }

    #[test]
    fn worked_witness_bound() {
        let t = Poly::from_real(&[-1.0, 0.0, -3.0]).unwrap();
        let fb = fujiwara_bound(&t).unwrap();
        assert!((fb.fujiwara_radius - 2.0 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(fb.argmax_index, Some(0));
    }

    #[test]
    fn monomial_and_constants() {
        let p = Poly::monomial(c(2.0, 0.0), 4);
        let fb = fujiwara_bound(&p).unwrap();
        assert_eq!(fb.fujiwara_radius, 0.0);
        assert_eq!(fb.argmax_index, None);
        assert!(fujiwara_bound(&Poly::from_real(&[3.0]).unwrap()).is_err());
        assert!(fujiwara_bound(&Poly::zero()).is_err());
    }

    #[test]
    fn kakeya_values() {
        assert!((kakeya_radius(4, 4).unwrap() - 2.8853900817779268).abs() < 1e-12);
        assert!((kakeya_radius(3, 2).unwrap() - 5.7707801635558535).abs() < 1e-12);
        assert!(kakeya_radius(2, 3).is_err());
        assert!(kakeya_radius(2, 0).is_err());
        for n in 1..20 {
            for k in 2..=n {
                assert!(kakeya_radius(n, k).unwrap() < kakeya_radius(n, k - 1).unwrap());
            }
        }
    }

    #[test]
    fn alpha_chain_is_strict() {
        for k in 1..=30usize {
            for n in k..k + 5 {
                let d = (n - k + 1) as f64;
                let chain = 2.0 * d * alpha(k).unwrap() / k as f64;
                assert!(chain < kakeya_radius(n, k).unwrap());
            }
        }
    }

    #[test]
    fn general_frame_discs() {
        let unit = bound_disc_for_general_frame(&Disc::unit(), 3, 2).unwrap();
        assert!((unit.radius - 5.7707801635558535).abs() < 1e-12);
        let d = Disc::new(c(2.0, 1.0), 0.5).unwrap();
        let scaled = bound_disc_for_general_frame(&d, 3, 2).unwrap();
        assert_eq!(scaled.center, c(2.0, 1.0));
        assert!((scaled.radius - 2.8853900817779268).abs() < 1e-12);
        let same = bound_disc_for_general_frame(&d, 5, 5).unwrap();
        assert!((same.radius - 0.5 * 2.0 / LN_2).abs() < 1e-15);
        assert!(bound_disc_for_general_frame(&Disc::new(c(0.0, 0.0), 0.0).unwrap(), 3, 2).is_err());
    }

    #[test]
    fn worked_report_flags_subleading_gap() {
        let ns = solve_weights(&[c(1.0, 0.0), c(-1.0, 0.0)], 1).unwrap();
        let w = build_witness(&ns, 3).unwrap();
        let r = witness_bound_report(&w).unwrap();
        assert_eq!(r.subleading_radius, 0.0);
        assert!(r.subleading_below_full());
        assert!(r.fujiwara_radius <= r.alpha_radius);
        assert!(r.alpha_radius < r.kakeya_radius);
    }
}
