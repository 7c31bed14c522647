//! End-to-end certificates.
//!
//! A certificate maps the chosen zeros of `p` into the frame where the
//! enclosing disc is the closed unit disc, builds the weights and the
//! witness `t`, gates on the apolarity of `(p, t)` and `(p^(k-1), t)`, and
//! then locates a zero of `p^(k-1)` numerically to confirm it lies in the
//! certified disc of radius `2 (n - k + 1) / ln 2` (scaled by the frame).

use serde::{Deserialize, Serialize};

use crate::apolarity::ApolarityReport;
use crate::bounds::{
    bound_disc_for_general_frame, fujiwara_bound, witness_bound_report, BoundReport,
};
use crate::construction::{
    build_witness, check_s_bound, construction_apolarity, min_separation, power_sums_recurrence,
    solve_weights, ConstructionApolarity, NodeSet, SBoundReport, WitnessPoly,
};
use crate::error::{Error, Result};
use crate::poly::{check_finite, pair, Complex, Disc, Poly};
use crate::roots::RootFinder;

/// Multiplicative slack on the closed-disc comparison.
pub const HOLDS_SLACK: f64 = 1e-8;
/// Slack on `|w| <= 1` for selected zeros in normalized coordinates.
pub const FRAME_SLACK: f64 = 1e-10;
/// Relative residual above which a certificate is refused.
pub const APOLARITY_GATE: f64 = 1e-8;
/// `|p(z)| <= NODE_ROOT_TOL * sum |a_j| |z|^j` for every selected zero.
pub const NODE_ROOT_TOL: f64 = 1e-8;
/// Largest perturbation step accepted by [`certify_with_perturbation`].
pub const MAX_EPSILON: f64 = 1e-6;

/// How the disc comparison treats its boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscComparison {
    /// `distance <= radius * (1 + slack)`, applied to distinct and
    /// coincident zeros alike.
    ClosedWithSlack,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeMove {
    /// Position within the selection.
    pub node: usize,
    #[serde(with = "pair")]
    pub from: Complex,
    #[serde(with = "pair")]
    pub to: Complex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub epsilon: f64,
    pub moves: Vec<NodeMove>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KakeyaCertificate {
    pub n: usize,
    pub k: usize,
    pub frame: Disc,
    /// Selected zeros and weights in normalized coordinates.
    pub nodes: NodeSet,
    pub witness: WitnessPoly,
    pub bound_disc: Disc,
    pub bounds: BoundReport,
    pub s_bound: SBoundReport,
    /// `A(p, t)` at index `n`, normalized frame.
    pub apolarity: ApolarityReport,
    /// `A(p^(k-1), t)` at index `n - k + 1`.
    pub derived_apolarity: ApolarityReport,
    pub identity_residual: f64,
    #[serde(with = "pair::option")]
    pub witness_zero: Option<Complex>,
    pub witness_distance: Option<f64>,
    /// `witness_distance / bound_disc.radius`.
    pub tightness: Option<f64>,
    pub theorem_holds: bool,
    pub comparison: DiscComparison,
    /// `k = 1`: the selected zero itself is the witness.
    pub degenerate: bool,
    pub perturbation: Option<Perturbation>,
}

/// Selected zeros mapped into the frame and validated.
struct Normalized {
    n: usize,
    poly: Poly,
    nodes: Vec<Complex>,
}

fn normalize(p: &Poly, nodes: &[Complex], frame: &Disc, min_k: usize) -> Result<Normalized> {
    let n = match p.degree() {
        Some(n) if n >= 1 => n,
        _ => {
            return Err(Error::InvalidDegree(
                "certificates need a polynomial of degree >= 1".into(),
            ))
        }
    };
    let k = nodes.len();
    if k < min_k || k > n {
        return Err(Error::InvalidParameter(format!(
            "need {min_k} <= k <= n = {n} selected zeros, got {k}"
        )));
    }
    if !(frame.radius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "frame radius must be positive, got {}",
            frame.radius
        )));
    }
    for (i, &z) in nodes.iter().enumerate() {
        check_finite(z, "node")?;
        let value = p.evaluate(z).norm();
        let scale = p.abs_evaluate(z.norm());
        if value > NODE_ROOT_TOL * scale {
            return Err(Error::InconsistentInput(format!(
                "selected point {i} = {z} is not a zero of p (|p(z)| = {value:e})"
            )));
        }
    }
    Ok(Normalized {
        n,
        poly: p.affine_substitute(frame.center, frame.radius)?,
        nodes: into_frame(nodes, frame)?,
    })
}

/// Maps selected zeros into the frame, projecting those within the slack of
/// the unit circle onto it.
fn into_frame(nodes: &[Complex], frame: &Disc) -> Result<Vec<Complex>> {
    nodes
        .iter()
        .enumerate()
        .map(|(index, &z)| {
            let w = frame.normalize(z);
            let modulus = w.norm();
            if modulus > 1.0 + FRAME_SLACK {
                Err(Error::FrameViolation { index, modulus })
            } else if modulus > 1.0 {
                Ok(w / modulus)
            } else {
                Ok(w)
            }
        })
        .collect()
}

fn gate(apolarity: &ConstructionApolarity) -> Result<()> {
    let worst = apolarity
        .full
        .relative_residual
        .max(apolarity.derived.relative_residual);
    if !(worst <= APOLARITY_GATE) {
        return Err(Error::ApolarityGate {
            relative_residual: worst,
            tol: APOLARITY_GATE,
        });
    }
    Ok(())
}

/// Certifies that `p^(k-1)` has a zero in the disc about `frame.center` of
/// radius `frame.radius * 2 (n - k + 1) / ln 2`, where the `k = nodes.len()`
/// given points are pairwise distinct zeros of `p` inside `frame`.
pub fn certify(
    p: &Poly,
    nodes: &[Complex],
    frame: &Disc,
    finder: &RootFinder,
) -> Result<KakeyaCertificate> {
    let normalized = normalize(p, nodes, frame, 1)?;
    certify_normalized(normalized, nodes, frame, finder)
}

fn certify_normalized(
    Normalized { n, poly, nodes: w }: Normalized,
    nodes: &[Complex],
    frame: &Disc,
    finder: &RootFinder,
) -> Result<KakeyaCertificate> {
    let k = w.len();

    let ns = solve_weights(&w, k - 1)?;
    let witness = build_witness(&ns, n)?;
    let s_bound = check_s_bound(&power_sums_recurrence(&ns, n)?)?;
    let apolarity = construction_apolarity(&poly, &witness)?;
    gate(&apolarity)?;
    let bounds = witness_bound_report(&witness)?;
    let bound_disc = bound_disc_for_general_frame(frame, n, k)?;

    let degenerate = k == 1;
    let (zero, distance) = if degenerate {
        (nodes[0], (nodes[0] - frame.center).norm())
    } else {
        let derived = poly.derivative(k - 1);
        let (wz, dist) = finder.min_modulus_root(&derived, Complex::new(0.0, 0.0))?;
        (frame.denormalize(wz), dist * frame.radius)
    };
    let theorem_holds = distance <= bound_disc.radius * (1.0 + HOLDS_SLACK);

    Ok(KakeyaCertificate {
        n,
        k,
        frame: *frame,
        nodes: ns,
        witness,
        bound_disc,
        bounds,
        s_bound,
        apolarity: apolarity.full,
        derived_apolarity: apolarity.derived,
        identity_residual: apolarity.identity_residual,
        witness_zero: Some(zero),
        witness_distance: Some(distance),
        tightness: Some(distance / bound_disc.radius),
        theorem_holds,
        comparison: DiscComparison::ClosedWithSlack,
        degenerate,
        perturbation: None,
    })
}

fn select(roots: &[Complex], node_indices: &[usize]) -> Result<Vec<Complex>> {
    let mut seen = vec![false; roots.len()];
    node_indices
        .iter()
        .map(|&i| {
            if i >= roots.len() {
                return Err(Error::InvalidParameter(format!(
                    "node index {i} out of range for {} roots",
                    roots.len()
                )));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidParameter(format!(
                    "node index {i} selected twice"
                )));
            }
            Ok(roots[i])
        })
        .collect()
}

/// [`certify`] for `p = prod (z - roots[j])` with the zeros chosen by index.
pub fn certify_roots(
    roots: &[Complex],
    node_indices: &[usize],
    frame: &Disc,
    finder: &RootFinder,
) -> Result<KakeyaCertificate> {
    let nodes = select(roots, node_indices)?;
    if nodes.is_empty() || nodes.len() > roots.len() {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= n = {} selected zeros, got {}",
            roots.len(),
            nodes.len()
        )));
    }
    if !(frame.radius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "frame radius must be positive, got {}",
            frame.radius
        )));
    }
    // Building p from roots already in frame coordinates avoids the
    // cancellation of translating a far-off polynomial.
    let local: Vec<Complex> = roots.iter().map(|&z| frame.normalize(z)).collect();
    let normalized = Normalized {
        n: roots.len(),
        poly: Poly::from_roots(&local)?,
        nodes: into_frame(&nodes, frame)?,
    };
    certify_normalized(normalized, &nodes, frame, finder)
}

/// Separates coincident selected zeros before certifying.
///
/// Selected zeros closer than `epsilon` (normalized units) are grouped; the
/// `j`-th member of each group of two or more is moved `j * epsilon` toward
/// the frame center. `p` is rebuilt from the updated root multiset.
pub fn certify_with_perturbation(
    roots: &[Complex],
    node_indices: &[usize],
    frame: &Disc,
    epsilon: f64,
    finder: &RootFinder,
) -> Result<KakeyaCertificate> {
    if !(epsilon > 0.0 && epsilon <= MAX_EPSILON) {
        return Err(Error::InvalidParameter(format!(
            "perturbation epsilon must lie in (0, {MAX_EPSILON:e}], got {epsilon:e}"
        )));
    }
    if !(frame.radius > 0.0) {
        return Err(Error::InvalidParameter(
            "frame radius must be positive".into(),
        ));
    }
    let selected = select(roots, node_indices)?;
    let w: Vec<Complex> = selected.iter().map(|&z| frame.normalize(z)).collect();

    // single-linkage groups under the epsilon threshold
    let k = w.len();
    let mut group: Vec<usize> = (0..k).collect();
    for i in 0..k {
        for j in 0..i {
            if (w[i] - w[j]).norm() < epsilon {
                let (gi, gj) = (group[i], group[j]);
                for g in group.iter_mut() {
                    if *g == gi {
                        *g = gj;
                    }
                }
            }
        }
    }

    let mut moved = w.clone();
    let mut moves = Vec::new();
    for leader in 0..k {
        let members: Vec<usize> = (0..k).filter(|&i| group[i] == leader).collect();
        if members.len() < 2 {
            continue;
        }
        for (rank, &i) in members.iter().enumerate() {
            let modulus = w[i].norm();
            let inward = if modulus > 0.0 {
                -w[i] / modulus
            } else {
                Complex::new(1.0, 0.0)
            };
            moved[i] = w[i] + inward * (epsilon * (rank + 1) as f64);
            moves.push(NodeMove {
                node: i,
                from: selected[i],
                to: frame.denormalize(moved[i]),
            });
        }
    }

    let mut certificate = if moves.is_empty() {
        certify_roots(roots, node_indices, frame, finder)?
    } else {
        let separation = min_separation(&moved);
        if separation < epsilon / 10.0 {
            return Err(Error::DegenerateConfiguration {
                separation,
                required: epsilon / 10.0,
            });
        }
        let mut new_roots = roots.to_vec();
        for mv in &moves {
            new_roots[node_indices[mv.node]] = mv.to;
        }
        certify_roots(&new_roots, node_indices, frame, finder)?
    };
    if !moves.is_empty() {
        moves.sort_by_key(|m| m.node);
        certificate.perturbation = Some(Perturbation { epsilon, moves });
    }
    Ok(certificate)
}

pub const GENERALIZED_LABEL: &str = "empirical: no closed-form radius, numerical root bound of t";

/// Certificate-like report for a zero of `p^(i)` with `1 <= i <= k - 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedReport {
    pub label: String,
    pub n: usize,
    pub k: usize,
    pub target_index: usize,
    pub frame: Disc,
    pub nodes: NodeSet,
    pub witness: WitnessPoly,
    pub apolarity: ApolarityReport,
    pub derived_apolarity: ApolarityReport,
    pub identity_residual: f64,
    /// Fujiwara disc of `t`, mapped back into the frame.
    pub root_bound_disc: Disc,
    #[serde(with = "pair")]
    pub witness_zero: Complex,
    pub witness_distance: f64,
    pub holds: bool,
}

/// Same construction with the delta placed at `target_index`; the disc is
/// the numerical root bound of the resulting `t` (degree `n - target_index`).
pub fn generalized_certify(
    p: &Poly,
    nodes: &[Complex],
    frame: &Disc,
    target_index: usize,
    finder: &RootFinder,
) -> Result<GeneralizedReport> {
    let Normalized { n, poly, nodes: w } = normalize(p, nodes, frame, 2)?;
    let k = w.len();
    if target_index == 0 || target_index >= k {
        return Err(Error::InvalidParameter(format!(
            "derivative order must satisfy 1 <= i <= k - 1 = {}, got {target_index}",
            k - 1
        )));
    }
    let ns = solve_weights(&w, target_index)?;
    let witness = build_witness(&ns, n)?;
    let apolarity = construction_apolarity(&poly, &witness)?;
    gate(&apolarity)?;

    let radius = fujiwara_bound(&witness.t)?.fujiwara_radius;
    let root_bound_disc = Disc::new(frame.center, radius * frame.radius)?;
    let (wz, dist) =
        finder.min_modulus_root(&poly.derivative(target_index), Complex::new(0.0, 0.0))?;
    let witness_distance = dist * frame.radius;

    Ok(GeneralizedReport {
        label: GENERALIZED_LABEL.into(),
        n,
        k,
        target_index,
        frame: *frame,
        nodes: ns,
        witness,
        apolarity: apolarity.full,
        derived_apolarity: apolarity.derived,
        identity_residual: apolarity.identity_residual,
        root_bound_disc,
        witness_zero: frame.denormalize(wz),
        witness_distance,
        holds: witness_distance <= root_bound_disc.radius * (1.0 + HOLDS_SLACK),
    })
}
