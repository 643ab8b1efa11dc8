//! Unions, images under invertible operators, redundancy equivalence and the
//! projection-sum predicate for normalized operators.

use serde::{Deserialize, Serialize};

use super::{fusion_frame_operator, redundancy_range, FrameBounds, FusionFrame, Member, Subspace};
use crate::error::{FrameError, Result};
use crate::exec::Execution;
use crate::numerics::{self, max_abs_diff, quadratic_form, CMatrix, Field, Tolerance};
use crate::sampling::sample_extremes;

fn field_of(m: &CMatrix) -> Field {
    if Field::Real.admits(m) {
        Field::Real
    } else {
        Field::Complex
    }
}

/// Concatenated member list. Uses the tolerances of `a`.
pub fn union(a: &FusionFrame, b: &FusionFrame) -> Result<FusionFrame> {
    if a.ambient_dim != b.ambient_dim {
        return Err(FrameError::DimensionMismatch {
            expected: a.ambient_dim,
            found: b.ambient_dim,
        });
    }
    if a.field != b.field {
        return Err(FrameError::FieldMismatch);
    }
    let members = a.members.iter().chain(&b.members).cloned().collect();
    FusionFrame::from_members(a.ambient_dim, a.field, members, a.tol)
}

fn check_operator(frame: &FusionFrame, u: &CMatrix) -> Result<f64> {
    if u.nrows() != u.ncols() {
        return Err(FrameError::NotSquare {
            rows: u.nrows(),
            cols: u.ncols(),
        });
    }
    if u.nrows() != frame.ambient_dim {
        return Err(FrameError::DimensionMismatch {
            expected: frame.ambient_dim,
            found: u.nrows(),
        });
    }
    numerics::condition_number(u, &frame.tol)
}

/// `{(U W_i, v_i)}` for an invertible `U`.
pub fn apply_operator(frame: &FusionFrame, u: &CMatrix) -> Result<FusionFrame> {
    check_operator(frame, u)?;
    let field = frame.field.join(field_of(u));
    let members = frame
        .members
        .iter()
        .map(|m| {
            Ok(Member {
                subspace: Subspace::from_span(&(u * m.subspace.basis()), field, &frame.tol)?,
                weight: m.weight,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FusionFrame::from_members(frame.ambient_dim, field, members, frame.tol)
}

/// Image of a frame under `U` checked against the `k(U)^{±2}` predictions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformReport {
    /// `k(U) = ‖U‖‖U⁻¹‖`
    pub condition: f64,
    pub bounds: FrameBounds,
    /// `(A / k², B k²)`
    pub predicted_bounds: FrameBounds,
    pub image_bounds: FrameBounds,
    pub bounds_hold: bool,
    pub redundancy: (f64, f64),
    pub image_redundancy: (f64, f64),
    /// `R±_W k⁻² ≤ R±_{UW} ≤ R±_W k²` for both extremes.
    pub redundancy_holds: bool,
}

pub fn transform_report(frame: &FusionFrame, u: &CMatrix) -> Result<(FusionFrame, TransformReport)> {
    let condition = check_operator(frame, u)?;
    let bounds = super::frame_bounds(frame)?;
    let image = apply_operator(frame, u)?;
    let image_bounds = super::frame_bounds(&image)?;
    let k2 = condition * condition;
    let predicted_bounds = FrameBounds {
        lower: bounds.lower / k2,
        upper: bounds.upper * k2,
    };
    let slack = frame.tol.eig_rel;
    let bounds_hold = image_bounds.lower >= predicted_bounds.lower * (1.0 - slack)
        && image_bounds.upper <= predicted_bounds.upper * (1.0 + slack);
    let redundancy = redundancy_range(frame)?;
    let image_redundancy = redundancy_range(&image)?;
    let sandwiched = |before: f64, after: f64| {
        after >= before / k2 * (1.0 - slack) && after <= before * k2 * (1.0 + slack)
    };
    let redundancy_holds = sandwiched(redundancy.0, image_redundancy.0)
        && sandwiched(redundancy.1, image_redundancy.1);
    Ok((
        image,
        TransformReport {
            condition,
            bounds,
            predicted_bounds,
            image_bounds,
            bounds_hold,
            redundancy,
            image_redundancy,
            redundancy_holds,
        },
    ))
}

/// Comparison of two redundancy functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equivalence {
    /// `‖S_{1a} − S_{1b}‖_max`
    pub operator_gap: f64,
    /// Largest `|R_a(x) − R_b(x)|` over the sampled points.
    pub sampled_gap: f64,
    pub samples: usize,
    pub equivalent: bool,
}

/// `R_a = R_b` on the sphere exactly when `S_{1a} = S_{1b}`; the sampled gap is
/// reported as a witness.
pub fn redundancy_equivalence(
    a: &FusionFrame,
    b: &FusionFrame,
    samples: usize,
    seed: u64,
) -> Result<Equivalence> {
    if a.ambient_dim != b.ambient_dim {
        return Err(FrameError::DimensionMismatch {
            expected: a.ambient_dim,
            found: b.ambient_dim,
        });
    }
    let sa = fusion_frame_operator(a, true);
    let sb = fusion_frame_operator(b, true);
    let operator_gap = max_abs_diff(&sa, &sb);
    let scale = sa.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let diff = &sa - &sb;
    let field = a.field.join(b.field);
    let sampled = sample_extremes(
        a.ambient_dim,
        field,
        samples,
        seed,
        Execution::default(),
        |x| quadratic_form(&diff, x).abs(),
    );
    Ok(Equivalence {
        operator_gap,
        sampled_gap: if samples == 0 { 0.0 } else { sampled.max },
        samples,
        equivalent: operator_gap <= a.tol.eig_rel * scale,
    })
}

pub fn redundancy_equivalent(a: &FusionFrame, b: &FusionFrame) -> Result<bool> {
    Ok(redundancy_equivalence(a, b, 0, 0)?.equivalent)
}

/// Checks a claimed decomposition `T = Σ P_i` into rank-`m` orthogonal projections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionDecomposition {
    /// `‖T − Σ P_i‖_max`
    pub sum_gap: f64,
    pub trace: f64,
    /// `m · N`
    pub expected_trace: f64,
    /// Indices of entries that are not rank-`m` orthogonal projections.
    pub invalid_projections: Vec<usize>,
    pub holds: bool,
}

/// Entry-level slack for the decomposition predicate.
const DECOMPOSITION_TOL: f64 = 1e-10;

pub fn verify_projection_decomposition(
    t: &CMatrix,
    projections: &[CMatrix],
    rank: usize,
    tol: &Tolerance,
) -> Result<ProjectionDecomposition> {
    numerics::check_finite(t)?;
    let (lo, _) = numerics::hermitian_eigenrange(t)?;
    if lo <= 0.0 {
        return Err(FrameError::NotPositiveDefinite {
            lambda_min: lo,
            lambda_max: numerics::hermitian_eigenrange(t)?.1,
        });
    }
    let n = t.nrows();
    let mut sum = CMatrix::zeros(n, n);
    let mut invalid_projections = Vec::new();
    for (i, p) in projections.iter().enumerate() {
        if p.nrows() != n || p.ncols() != n {
            return Err(FrameError::DimensionMismatch {
                expected: n,
                found: p.nrows(),
            }
            .at_member(i));
        }
        let idempotent = max_abs_diff(&(p * p), p) <= DECOMPOSITION_TOL;
        let hermitian = max_abs_diff(&p.adjoint(), p) <= DECOMPOSITION_TOL;
        let right_rank = numerics::numerical_rank(p, tol)? == rank;
        if !(idempotent && hermitian && right_rank) {
            invalid_projections.push(i);
        }
        sum += p;
    }
    let sum_gap = max_abs_diff(t, &sum);
    let trace: f64 = t.diagonal().iter().map(|z| z.re).sum();
    let expected_trace = (rank * projections.len()) as f64;
    let holds = invalid_projections.is_empty()
        && sum_gap <= DECOMPOSITION_TOL
        && (trace - expected_trace).abs() <= DECOMPOSITION_TOL * expected_trace.max(1.0);
    Ok(ProjectionDecomposition {
        sum_gap,
        trace,
        expected_trace,
        invalid_projections,
        holds,
    })
}
