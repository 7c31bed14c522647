//! Weighted node power sums and the apolar witness polynomial.
//!
//! Given pairwise distinct nodes `z_1..z_k` in the closed unit disc, the
//! weights `a_i` solve the transposed Vandermonde system
//! `sum_i a_i z_i^m = delta(m, target)` for `0 <= m < k`. The power sums
//! `S_m = sum_i a_i z_i^m` then obey the linear recurrence whose
//! characteristic polynomial is `q(z) = prod (z - z_i)`, and for
//! `target = k - 1` they are bounded by `alpha^(m - k + 1)` with
//! `alpha = 1 / (2^(1/k) - 1)`.
//!
//! The witness `t(z) = sum_i a_i (z - z_i)^n` has coefficients
//! `t_l = (-1)^(n-l) C(n, l) S_(n-l)` and degree `n - target`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::apolarity::{derivative_identity, ApolarityReport};
use crate::error::{Error, Result};
use crate::poly::{binomial, check_finite, pair, Complex, Poly};

/// Nodes closer than this are treated as coincident.
pub const MIN_NODE_SEPARATION: f64 = 1e-12;
/// Slack on `|z| <= 1` for nodes in the normalized frame.
pub const UNIT_DISC_SLACK: f64 = 1e-12;
/// Tolerance on the defining system `sum a_i z_i^m = delta`.
pub const DELTA_TOL: f64 = 1e-8;
/// Relative tolerance between the two evaluation forms of the witness.
pub const WITNESS_FORM_TOL: f64 = 1e-8;
/// Apolarity tolerance for the constructed pair.
pub const CONSTRUCTION_APOLAR_TOL: f64 = 1e-8;
/// Slack allowed on the power-sum bound before it is reported as violated.
pub const S_BOUND_SLACK: f64 = 1e-9;
/// Ratios above `1 + S_BOUND_HARD` are an implementation bug.
pub const S_BOUND_HARD: f64 = 1e-6;
/// Condition estimates above this abort the direct linear solve.
pub const MAX_CONDITION: f64 = 1e14;

/// `1 / (2^(1/k) - 1)`, the positive root of `(1 + x)^k = 2 x^k`.
pub fn alpha(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("alpha needs k >= 1".into()));
    }
    Ok(1.0 / (std::f64::consts::LN_2 / k as f64).exp_m1())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeSet {
    #[serde(with = "pair::vec")]
    pub nodes: Vec<Complex>,
    #[serde(with = "pair::vec")]
    pub weights: Vec<Complex>,
    pub target_index: usize,
    pub pairwise_min_separation: f64,
}

impl NodeSet {
    pub fn k(&self) -> usize {
        self.nodes.len()
    }

    /// `max_m |sum_i a_i z_i^m - delta(m, target)|` over `m < k`.
    pub fn delta_residual(&self) -> f64 {
        delta_residual(&self.nodes, &self.weights, self.target_index)
    }

    /// The monic polynomial with the nodes as roots.
    pub fn node_poly(&self) -> Poly {
        Poly::from_roots(&self.nodes).expect("nodes are validated finite")
    }
}

/// Smallest pairwise distance; infinite for fewer than two points.
pub fn min_separation(points: &[Complex]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min((a - b).norm());
        }
    }
    best
}

fn delta_residual(nodes: &[Complex], weights: &[Complex], target: usize) -> f64 {
    let k = nodes.len();
    let mut powers = vec![Complex::new(1.0, 0.0); k];
    let mut worst: f64 = 0.0;
    for m in 0..k {
        let s: Complex = weights.iter().zip(&powers).map(|(a, p)| a * p).sum();
        let delta = if m == target { 1.0 } else { 0.0 };
        worst = worst.max((s - delta).norm());
        for (p, z) in powers.iter_mut().zip(nodes) {
            *p *= z;
        }
    }
    worst
}

fn validate_nodes(nodes: &[Complex], target_index: usize) -> Result<f64> {
    if nodes.is_empty() {
        return Err(Error::InvalidParameter("node set is empty".into()));
    }
    if target_index >= nodes.len() {
        return Err(Error::InvalidParameter(format!(
            "target index {target_index} must be below k = {}",
            nodes.len()
        )));
    }
    for (index, &z) in nodes.iter().enumerate() {
        check_finite(z, "node")?;
        if z.norm() > 1.0 + UNIT_DISC_SLACK {
            return Err(Error::FrameViolation {
                index,
                modulus: z.norm(),
            });
        }
    }
    let separation = min_separation(nodes);
    if separation < MIN_NODE_SEPARATION {
        return Err(Error::DegenerateNodes {
            separation,
            floor: MIN_NODE_SEPARATION,
        });
    }
    Ok(separation)
}

/// Solves for the weights. For `target_index = k - 1` the closed form
/// `a_i = 1 / q'(z_i)` is used; other targets go through the direct solve.
pub fn solve_weights(nodes: &[Complex], target_index: usize) -> Result<NodeSet> {
    let separation = validate_nodes(nodes, target_index)?;
    let k = nodes.len();
    if separation < 0.05 / k as f64 {
        log::warn!("node separation {separation:e} is small for k = {k}; weights will be large");
    }
    let weights = if target_index == k - 1 {
        closed_form_weights(nodes)
    } else {
        solve_weights_linear(nodes, target_index)?.0
    };
    let residual = delta_residual(nodes, &weights, target_index);
    let magnitude: f64 = weights.iter().map(|a| a.norm()).sum();
    if !(residual <= DELTA_TOL * magnitude.max(1.0)) {
        return Err(Error::IllConditioned {
            condition: residual / f64::EPSILON,
        });
    }
    Ok(NodeSet {
        nodes: nodes.to_vec(),
        weights,
        target_index,
        pairwise_min_separation: separation,
    })
}

/// `1 / prod_{j != i} (z_i - z_j)`.
pub fn closed_form_weights(nodes: &[Complex]) -> Vec<Complex> {
    nodes
        .iter()
        .enumerate()
        .map(|(i, zi)| {
            let dq: Complex = nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, zj)| zi - zj)
                .product();
            dq.inv()
        })
        .collect()
}

/// LU solve of the transposed Vandermonde system. Returns the weights and
/// the 1-norm condition estimate of the system matrix.
pub fn solve_weights_linear(nodes: &[Complex], target_index: usize) -> Result<(Vec<Complex>, f64)> {
    let k = nodes.len();
    let matrix = DMatrix::from_fn(k, k, |m, j| nodes[j].powu(m as u32));
    let mut rhs = DMatrix::from_element(k, 1, Complex::new(0.0, 0.0));
    rhs[(target_index, 0)] = Complex::new(1.0, 0.0);

    let norm1 = |m: &DMatrix<Complex>| {
        (0..m.ncols())
            .map(|c| m.column(c).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let inverse = matrix.clone().try_inverse().ok_or(Error::IllConditioned {
        condition: f64::INFINITY,
    })?;
    let condition = norm1(&matrix) * norm1(&inverse);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    let solution = matrix
        .lu()
        .solve(&rhs)
        .ok_or(Error::IllConditioned { condition })?;
    Ok((solution.iter().copied().collect(), condition))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSums {
    #[serde(with = "pair::vec")]
    pub values: Vec<Complex>,
    pub k: usize,
    pub target_index: usize,
    pub alpha: f64,
}

fn check_upto(ns: &NodeSet, upto: usize) -> Result<()> {
    if upto + 1 < ns.k() {
        return Err(Error::InvalidParameter(format!(
            "power sums need M >= k - 1 = {}, got {upto}",
            ns.k() - 1
        )));
    }
    Ok(())
}

/// `S_m = sum_i a_i z_i^m` by direct summation.
pub fn power_sums_direct(ns: &NodeSet, upto: usize) -> Result<PowerSums> {
    check_upto(ns, upto)?;
    let mut powers = ns.weights.clone();
    let mut values = Vec::with_capacity(upto + 1);
    for _ in 0..=upto {
        values.push(powers.iter().sum());
        for (p, z) in powers.iter_mut().zip(&ns.nodes) {
            *p *= z;
        }
    }
    Ok(PowerSums {
        values,
        k: ns.k(),
        target_index: ns.target_index,
        alpha: alpha(ns.k())?,
    })
}

/// Seeds `S_0..S_{k-1}` with the Kronecker delta and extends through
/// `S_m = -(c_{k-1} S_{m-1} + ... + c_0 S_{m-k})`.
pub fn power_sums_recurrence(ns: &NodeSet, upto: usize) -> Result<PowerSums> {
    check_upto(ns, upto)?;
    let k = ns.k();
    let q = ns.node_poly();
    let c = q.coeffs();
    let mut values: Vec<Complex> = (0..k)
        .map(|m| Complex::new(if m == ns.target_index { 1.0 } else { 0.0 }, 0.0))
        .collect();
    for m in k..=upto {
        let acc: Complex = (0..k).map(|i| c[i] * values[m - k + i]).sum();
        values.push(-acc);
    }
    values.truncate(upto + 1);
    Ok(PowerSums {
        values,
        k,
        target_index: ns.target_index,
        alpha: alpha(k)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SBoundReport {
    /// `max_m |S_m| / alpha^(m-k+1)`.
    pub worst_ratio: f64,
    pub worst_m: usize,
    /// `worst_ratio <= 1 + 1e-9`.
    pub holds: bool,
}

/// Checks `|S_m| <= alpha^(m-k+1)` over every stored power sum.
pub fn check_s_bound(ps: &PowerSums) -> Result<SBoundReport> {
    if ps.target_index + 1 != ps.k {
        return Err(Error::InvalidParameter(format!(
            "the power-sum bound is only available for target k - 1 = {}, got {}",
            ps.k - 1,
            ps.target_index
        )));
    }
    let ln_alpha = ps.alpha.ln();
    let mut report = SBoundReport {
        worst_ratio: 0.0,
        worst_m: 0,
        holds: true,
    };
    for (m, s) in ps.values.iter().enumerate() {
        let exponent = m as f64 - (ps.k as f64 - 1.0);
        // log space keeps alpha^m finite for long sequences
        let ratio = (s.norm().ln() - exponent * ln_alpha).exp();
        if ratio > report.worst_ratio {
            report.worst_ratio = ratio;
            report.worst_m = m;
        }
    }
    if report.worst_ratio > 1.0 + S_BOUND_HARD {
        return Err(Error::BoundViolation {
            m: report.worst_m,
            ratio: report.worst_ratio,
        });
    }
    report.holds = report.worst_ratio <= 1.0 + S_BOUND_SLACK;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessPoly {
    pub t: Poly,
    pub n: usize,
    pub k: usize,
    pub target_index: usize,
    pub source: NodeSet,
}

impl WitnessPoly {
    /// `sum_i a_i (z - z_i)^n` evaluated term by term.
    pub fn evaluate_defining_sum(&self, z: Complex) -> Complex {
        let n = self.n as i32;
        self.source
            .nodes
            .iter()
            .zip(&self.source.weights)
            .map(|(zi, a)| a * (z - zi).powi(n))
            .sum()
    }
}

/// Builds `t` from the power sums and cross-checks it against the defining
/// sum at a few fixed pseudo-random points.
pub fn build_witness(ns: &NodeSet, n: usize) -> Result<WitnessPoly> {
    let k = ns.k();
    if n < k {
        return Err(Error::InvalidParameter(format!(
            "witness degree index n = {n} must be at least k = {k}"
        )));
    }
    let sums = power_sums_recurrence(ns, n)?;
    let coeffs = (0..=n)
        .map(|l| {
            let sign = if (n - l).is_multiple_of(2) { 1.0 } else { -1.0 };
            Ok(sums.values[n - l] * (sign * binomial(n, l)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let witness = WitnessPoly {
        t: Poly::new(coeffs)?,
        n,
        k,
        target_index: ns.target_index,
        source: ns.clone(),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0x7a17_5eed);
    for _ in 0..5 {
        let z = Complex::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let direct = witness.evaluate_defining_sum(z);
        let expanded = witness.t.evaluate(z);
        let scale: f64 = ns
            .nodes
            .iter()
            .zip(&ns.weights)
            .map(|(zi, a)| a.norm() * (z - zi).norm().powi(n as i32))
            .sum::<f64>()
            .max(witness.t.abs_evaluate(z.norm()));
        let relative_error = (direct - expanded).norm() / scale.max(f64::MIN_POSITIVE);
        if !(relative_error <= WITNESS_FORM_TOL) {
            return Err(Error::WitnessMismatch { relative_error });
        }
    }
    Ok(witness)
}

/// Apolarity of the constructed pair at both indices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionApolarity {
    /// `A(p, t)` at index `n`.
    pub full: ApolarityReport,
    /// `A(p^{(target)}, t)` at index `n - target`.
    pub derived: ApolarityReport,
    pub identity_residual: f64,
}

impl ConstructionApolarity {
    pub fn apolar(&self) -> bool {
        self.full.apolar && self.derived.apolar
    }
}

/// Every node must be a root of `p` and `degree(p) = n`; returns the
/// apolarity of `(p, t)` and of `(p^{(target)}, t)`.
pub fn weak_apolarity_of_construction(
    p: &Poly,
    ns: &NodeSet,
    w: &WitnessPoly,
) -> Result<ConstructionApolarity> {
    if p.degree() != Some(w.n) {
        return Err(Error::InvalidDegree(format!(
            "polynomial degree {:?} does not match witness index n = {}",
            p.degree(),
            w.n
        )));
    }
    for (i, &z) in ns.nodes.iter().enumerate() {
        let value = p.evaluate(z).norm();
        let scale = p.abs_evaluate(z.norm());
        if value > 1e-8 * scale {
            return Err(Error::InconsistentInput(format!(
                "node {i} = {z} is not a root (|p(z)| = {value:e}, scale {scale:e})"
            )));
        }
    }
    construction_apolarity(p, w)
}

/// [`weak_apolarity_of_construction`] for callers that validated the nodes
/// themselves, e.g. in coordinates where the check is better conditioned.
pub(crate) fn construction_apolarity(p: &Poly, w: &WitnessPoly) -> Result<ConstructionApolarity> {
    let identity = derivative_identity(p, &w.t, CONSTRUCTION_APOLAR_TOL)?;
    Ok(ConstructionApolarity {
        full: identity.full,
        derived: identity.reduced,
        identity_residual: identity.residual,
    })
}
