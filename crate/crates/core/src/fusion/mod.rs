//! Fusion frames `{(W_i, v_i)}`: weighted subspaces, their operators, redundancy and
//! structural predicates.
//!
//! The redundancy function `R_W(x) = Σ‖P_{W_i} x‖²` is the Rayleigh quotient of the
//! normalized operator `S_{1W} = Σ P_{W_i}`, so its extremes over the sphere are the
//! extreme eigenvalues of that operator. [`redundancy_at`] evaluates the quadratic
//! form; [`projection_energy`] sums the projections directly and serves as the
//! second route for cross-checking.

mod erasure;
mod transform;

pub use erasure::{
    erase, max_robust_erasures, max_robust_erasures_with, CertifyingRule, Erasure,
    ErasureSearch, RobustnessCertificate, EXHAUSTIVE_LIMIT,
};
pub use transform::{
    apply_operator, redundancy_equivalence, redundancy_equivalent, transform_report, union,
    verify_projection_decomposition, Equivalence, ProjectionDecomposition, TransformReport,
};

use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::exec::Execution;
use crate::numerics::{
    self, check_unit, hermitian_eigenrange, quadratic_form, CMatrix, CVector, Field, Tolerance,
};
use crate::sampling::{sample_extremes, SampledRange};

/// Subspaces closer than this (largest principal angle, radians) are treated as equal.
pub const SUBSPACE_ANGLE_TOL: f64 = 1e-8;

/// Slack for "lies in the subspace" and "pairwise orthogonal" decisions.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

/// Optimal frame bounds `0 < A ≤ B`: the extreme eigenvalues of the frame operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    /// `B / A`.
    pub fn ratio(&self) -> f64 {
        self.upper / self.lower
    }

    pub fn is_tight(&self, tol: &Tolerance) -> bool {
        (self.upper - self.lower).abs() <= tol.eig_rel * self.upper
    }
}

/// A subspace of `Hⁿ` held through an orthonormal basis (`n x d` matrix).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: CMatrix,
}

impl Subspace {
    /// Orthonormalizes the columns of `span`.
    pub fn from_span(span: &CMatrix, field: Field, tol: &Tolerance) -> Result<Self> {
        numerics::check_finite(span)?;
        if !field.admits(span) {
            return Err(FrameError::FieldMismatch);
        }
        let mut basis = numerics::orthonormalize(span, tol)?;
        if field == Field::Real {
            numerics::realify(&mut basis);
        }
        Ok(Subspace { basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// `P = Q Q*`.
    pub fn projection(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    pub fn project(&self, x: &CVector) -> CVector {
        &self.basis * (self.basis.adjoint() * x)
    }

    /// `‖P x‖²`, computed in local coordinates.
    pub fn energy(&self, x: &CVector) -> f64 {
        (self.basis.adjoint() * x).norm_squared()
    }

    /// `‖(I − P) v‖`.
    pub fn distance(&self, v: &CVector) -> f64 {
        (v - self.project(v)).norm()
    }

    pub fn principal_angles(&self, other: &Subspace) -> Result<Vec<f64>> {
        numerics::principal_angles(&self.basis, &other.basis)
    }

    /// Equal dimension and every principal angle within [`SUBSPACE_ANGLE_TOL`].
    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim()
            && self
                .principal_angles(other)
                .map(|a| a.iter().all(|&t| t <= SUBSPACE_ANGLE_TOL))
                .unwrap_or(false)
    }

    /// Largest `|⟨q, r⟩|` over basis vectors of the two subspaces.
    pub fn overlap(&self, other: &Subspace) -> f64 {
        (self.basis.adjoint() * &other.basis)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// One weighted subspace `(W_i, v_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub subspace: Subspace,
    pub weight: f64,
}

/// A finite family of weighted subspaces. Families whose operator is singular are
/// still representable; they are flagged through [`FusionFrame::is_bessel_only`].
#[derive(Debug, Clone, PartialEq)]
pub struct FusionFrame {
    field: Field,
    ambient_dim: usize,
    members: Vec<Member>,
    tol: Tolerance,
    lambda_min: f64,
    lambda_max: f64,
}

/// Orthonormalizes every span and assembles the family.
pub fn build_fusion_frame(
    spans: &[(CMatrix, f64)],
    ambient_dim: usize,
    field: Field,
    tol: Tolerance,
) -> Result<FusionFrame> {
    tol.validate()?;
    let members = spans
        .iter()
        .enumerate()
        .map(|(index, (span, weight))| {
            if *weight <= 0.0 || !weight.is_finite() {
                return Err(FrameError::NonPositiveWeight {
                    index,
                    weight: *weight,
                });
            }
            if span.nrows() != ambient_dim {
                return Err(FrameError::DimensionMismatch {
                    expected: ambient_dim,
                    found: span.nrows(),
                }
                .at_member(index));
            }
            let subspace = Subspace::from_span(span, field, &tol).map_err(|e| match e {
                FrameError::AllColumnsNumericallyZero | FrameError::EmptyMatrix => {
                    FrameError::ZeroSubspace { index }
                }
                e => e.at_member(index),
            })?;
            Ok(Member {
                subspace,
                weight: *weight,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FusionFrame::from_members(ambient_dim, field, members, tol)
}

impl FusionFrame {
    pub fn from_members(
        ambient_dim: usize,
        field: Field,
        members: Vec<Member>,
        tol: Tolerance,
    ) -> Result<Self> {
        if members.is_empty() {
            return Err(FrameError::NoMembers);
        }
        for (index, m) in members.iter().enumerate() {
            if m.weight <= 0.0 || !m.weight.is_finite() {
                return Err(FrameError::NonPositiveWeight {
                    index,
                    weight: m.weight,
                });
            }
            if m.subspace.ambient_dim() != ambient_dim {
                return Err(FrameError::DimensionMismatch {
                    expected: ambient_dim,
                    found: m.subspace.ambient_dim(),
                }
                .at_member(index));
            }
            if !field.admits(m.subspace.basis()) {
                return Err(FrameError::FieldMismatch.at_member(index));
            }
        }
        let s = weighted_operator(ambient_dim, &members, false);
        let (lambda_min, lambda_max) = hermitian_eigenrange(&s)?;
        Ok(FusionFrame {
            field,
            ambient_dim,
            members,
            tol,
            lambda_min,
            lambda_max,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn weights(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.weight).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.subspace.dim()).collect()
    }

    pub fn tolerance(&self) -> &Tolerance {
        &self.tol
    }

    /// Same family analysed under different cutoffs.
    pub fn with_tolerance(&self, tol: Tolerance) -> Result<FusionFrame> {
        tol.validate()?;
        Ok(FusionFrame {
            tol,
            ..self.clone()
        })
    }

    /// Frame property: `λ_min(S_W) > rank_rel · λ_max(S_W)`.
    pub fn is_frame(&self) -> bool {
        self.lambda_max > 0.0 && self.lambda_min > self.tol.rank_rel * self.lambda_max
    }

    pub fn is_bessel_only(&self) -> bool {
        !self.is_frame()
    }

    /// Smallest eigenvalue of `S_W`, whether or not the family is a frame.
    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    /// Largest eigenvalue of `S_W`: the optimal Bessel bound.
    pub fn bessel_bound(&self) -> f64 {
        self.lambda_max
    }

    /// Members reordered so that new member `k` is old member `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Result<FusionFrame> {
        let members = order
            .iter()
            .map(|&i| {
                self.members
                    .get(i)
                    .cloned()
                    .ok_or(FrameError::IndexOutOfRange {
                        index: i,
                        len: self.len(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        if members.len() != self.len() {
            return Err(FrameError::MemberCountMismatch {
                expected: self.len(),
                found: members.len(),
            });
        }
        FusionFrame::from_members(self.ambient_dim, self.field, members, self.tol)
    }

    /// Every weight multiplied by `alpha`.
    pub fn scaled_weights(&self, alpha: f64) -> Result<FusionFrame> {
        self.with_weights(&self.weights().iter().map(|w| w * alpha).collect::<Vec<_>>())
    }

    /// Same subspaces with new weights.
    pub fn with_weights(&self, weights: &[f64]) -> Result<FusionFrame> {
        if weights.len() != self.len() {
            return Err(FrameError::MemberCountMismatch {
                expected: self.len(),
                found: weights.len(),
            });
        }
        let members = self
            .members
            .iter()
            .zip(weights)
            .map(|(m, &weight)| Member {
                subspace: m.subspace.clone(),
                weight,
            })
            .collect();
        FusionFrame::from_members(self.ambient_dim, self.field, members, self.tol)
    }

    /// All weights set to 1.
    pub fn normalized(&self) -> FusionFrame {
        self.with_weights(&vec![1.0; self.len()])
            .expect("unit weights are valid")
    }

    /// Every weight equal to 1 within `eig_rel`.
    pub fn has_unit_weights(&self) -> bool {
        self.members
            .iter()
            .all(|m| (m.weight - 1.0).abs() <= self.tol.eig_rel)
    }

    /// All weights equal within `eig_rel` relative spread.
    pub fn has_uniform_weights(&self) -> bool {
        let w = self.weights();
        let max = w.iter().copied().fold(0.0, f64::max);
        let min = w.iter().copied().fold(f64::INFINITY, f64::min);
        max - min <= self.tol.eig_rel * max
    }

    /// Distinct members span mutually orthogonal subspaces.
    pub fn is_mutually_orthogonal(&self) -> bool {
        let m = &self.members;
        (0..m.len()).all(|i| {
            (i + 1..m.len()).all(|j| m[i].subspace.overlap(&m[j].subspace) <= MEMBERSHIP_TOL)
        })
    }

    pub(crate) fn require_frame(&self) -> Result<()> {
        if self.is_frame() {
            Ok(())
        } else {
            Err(FrameError::NotAFusionFrame {
                lambda_min: self.lambda_min,
            })
        }
    }

    pub(crate) fn check_vector(&self, x: &CVector) -> Result<()> {
        if x.len() != self.ambient_dim {
            return Err(FrameError::DimensionMismatch {
                expected: self.ambient_dim,
                found: x.len(),
            });
        }
        check_unit(x)
    }
}

fn weighted_operator(n: usize, members: &[Member], normalized: bool) -> CMatrix {
    let mut s = CMatrix::zeros(n, n);
    for m in members {
        let w2 = if normalized { 1.0 } else { m.weight * m.weight };
        let q = m.subspace.basis();
        s += (q * q.adjoint()).scale(w2);
    }
    s
}

/// `S_W = Σ v_i² P_{W_i}`, or `S_{1W} = Σ P_{W_i}` when `normalized`.
pub fn fusion_frame_operator(frame: &FusionFrame, normalized: bool) -> CMatrix {
    weighted_operator(frame.ambient_dim, &frame.members, normalized)
}

/// Optimal bounds `(λ_min(S_W), λ_max(S_W))`.
pub fn frame_bounds(frame: &FusionFrame) -> Result<FrameBounds> {
    frame.require_frame()?;
    Ok(FrameBounds {
        lower: frame.lambda_min,
        upper: frame.lambda_max,
    })
}

/// `R_W(x)` as the Rayleigh quotient `x* S_{1W} x`.
pub fn redundancy_at(frame: &FusionFrame, x: &CVector) -> Result<f64> {
    frame.check_vector(x)?;
    Ok(quadratic_form(&fusion_frame_operator(frame, true), x))
}

/// `Σ ‖P_{W_i} x‖²` summed member by member. Equals [`redundancy_at`] on unit vectors.
pub fn projection_energy(frame: &FusionFrame, x: &CVector) -> f64 {
    frame.members.iter().map(|m| m.subspace.energy(x)).sum()
}

/// `Σ v_i² ‖P_{W_i} x‖²`, the middle term of the frame inequality.
pub fn weighted_energy(frame: &FusionFrame, x: &CVector) -> f64 {
    frame
        .members
        .iter()
        .map(|m| m.weight * m.weight * m.subspace.energy(x))
        .sum()
}

/// `(R⁻_W, R⁺_W)`: extreme eigenvalues of `S_{1W}`. Also defined for Bessel-only
/// families, where `R⁻` is (numerically) zero.
pub fn redundancy_range(frame: &FusionFrame) -> Result<(f64, f64)> {
    hermitian_eigenrange(&fusion_frame_operator(frame, true))
}

/// Monte-Carlo estimate of the redundancy range from `samples` Haar points.
pub fn sampled_redundancy(
    frame: &FusionFrame,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> SampledRange {
    let s1 = fusion_frame_operator(frame, true);
    sample_extremes(frame.ambient_dim, frame.field, samples, seed, exec, |x| {
        quadratic_form(&s1, x)
    })
}

/// `[v₁Q₁ | … | v_N Q_N]`: the synthesis operator in local orthonormal coordinates.
pub fn synthesis_matrix(frame: &FusionFrame) -> CMatrix {
    let total: usize = frame.dims().iter().sum();
    let mut t = CMatrix::zeros(frame.ambient_dim, total);
    let mut col = 0;
    for m in &frame.members {
        let q = m.subspace.basis();
        t.view_mut((0, col), (q.nrows(), q.ncols()))
            .copy_from(&q.scale(m.weight));
        col += q.ncols();
    }
    t
}

/// `e(W) = dim N(T_W)`.
pub fn excess(frame: &FusionFrame) -> usize {
    numerics::kernel_dimension(&synthesis_matrix(frame), &frame.tol)
        .expect("synthesis matrix is finite and non-empty")
}

/// Minimality (equivalently, Riesz decomposition): the synthesis operator is injective.
pub fn is_minimal(frame: &FusionFrame) -> bool {
    excess(frame) == 0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RedundancyRange {
    pub lower: f64,
    pub upper: f64,
}

/// Everything `classify` determines about a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    /// Optimal bounds; absent for Bessel-only families.
    pub bounds: Option<FrameBounds>,
    pub bessel_bound: f64,
    pub redundancy: RedundancyRange,
    pub tight: bool,
    pub parseval: bool,
    pub uniform_weights: bool,
    pub orthonormal_fusion_basis: bool,
    pub minimal: bool,
    pub excess: usize,
    pub uniform_redundancy: bool,
    pub bessel_only: bool,
}

pub fn classify(frame: &FusionFrame) -> Result<AnalysisReport> {
    let tol = frame.tol;
    let bounds = frame_bounds(frame).ok();
    let (r_lo, r_hi) = redundancy_range(frame)?;
    let tight = bounds.is_some_and(|b| b.is_tight(&tol));
    let parseval = tight && bounds.is_some_and(|b| (b.lower - 1.0).abs() <= tol.eig_rel);
    let excess = excess(frame);
    Ok(AnalysisReport {
        bounds,
        bessel_bound: frame.lambda_max,
        redundancy: RedundancyRange {
            lower: r_lo,
            upper: r_hi,
        },
        tight,
        parseval,
        uniform_weights: frame.has_uniform_weights(),
        orthonormal_fusion_basis: parseval && frame.has_unit_weights(),
        minimal: excess == 0 && bounds.is_some(),
        excess,
        uniform_redundancy: (r_hi - r_lo).abs() <= tol.eig_rel * r_hi,
        bessel_only: bounds.is_none(),
    })
}
