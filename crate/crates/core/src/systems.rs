//! Fusion frame systems: a fusion frame with a local frame inside every member.

use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::fusion::{self, FusionFrame, MEMBERSHIP_TOL};
use crate::numerics::{self, identity, max_abs_diff, CMatrix, CVector};
use crate::vector_frames::{redundancy_function, VectorFrame};

/// Slack for local Parseval checks and local orthogonality.
pub const LOCAL_TOL: f64 = 1e-10;
/// Slack for the additivity comparison.
pub const ADDITIVITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FusionFrameSystem {
    frame: FusionFrame,
    local_frames: Vec<VectorFrame>,
}

impl FusionFrameSystem {
    pub fn frame(&self) -> &FusionFrame {
        &self.frame
    }

    pub fn local_frames(&self) -> &[VectorFrame] {
        &self.local_frames
    }

    /// Systems whose local frames are the members' orthonormal bases.
    pub fn with_orthonormal_locals(frame: &FusionFrame) -> FusionFrameSystem {
        let local_frames = frame
            .members()
            .iter()
            .map(|m| {
                VectorFrame::sequence(m.subspace.basis().clone(), frame.field(), *frame.tolerance())
                    .expect("orthonormal columns are nonzero")
            })
            .collect();
        FusionFrameSystem {
            frame: frame.clone(),
            local_frames,
        }
    }
}

/// Validates `local_vectors[i]` (as columns) against member `i`.
pub fn build_system(frame: &FusionFrame, local_vectors: &[CMatrix]) -> Result<FusionFrameSystem> {
    if local_vectors.len() != frame.len() {
        return Err(FrameError::MemberCountMismatch {
            expected: frame.len(),
            found: local_vectors.len(),
        });
    }
    let tol = *frame.tolerance();
    let local_frames = frame
        .members()
        .iter()
        .zip(local_vectors)
        .enumerate()
        .map(|(i, (m, vectors))| {
            if vectors.nrows() != frame.ambient_dim() {
                return Err(FrameError::DimensionMismatch {
                    expected: frame.ambient_dim(),
                    found: vectors.nrows(),
                }
                .at_member(i));
            }
            if vectors.ncols() == 0 {
                return Err(FrameError::LocalNotAFrame { member: i });
            }
            for (j, f) in vectors.column_iter().enumerate() {
                let f: CVector = f.into_owned();
                let distance = m.subspace.distance(&f);
                if distance > MEMBERSHIP_TOL * f.norm().max(1.0) {
                    return Err(FrameError::VectorOutsideSubspace {
                        member: i,
                        vector: j,
                        distance,
                    });
                }
            }
            let local = VectorFrame::sequence(vectors.clone(), frame.field(), tol)
                .map_err(|e| e.at_member(i))?;
            if numerics::numerical_rank(local.vectors(), &tol)? != m.subspace.dim() {
                return Err(FrameError::LocalNotAFrame { member: i });
            }
            Ok(local)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FusionFrameSystem {
        frame: frame.clone(),
        local_frames,
    })
}

/// Pairwise orthogonality of the vectors of one local frame.
pub fn has_orthogonal_vectors(local: &VectorFrame) -> bool {
    let v = local.vectors();
    (0..v.ncols()).all(|j| {
        (j + 1..v.ncols()).all(|k| {
            let (a, b) = (v.column(j), v.column(k));
            a.dotc(&b).norm() <= LOCAL_TOL * a.norm() * b.norm()
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalAdditivity {
    /// `R_W(x)`
    pub fusion_value: f64,
    /// `Σ_i R_{φ_i}(x)`
    pub local_sum: f64,
    pub orthogonal_locals: bool,
    pub equal: bool,
}

pub fn check_local_additivity(system: &FusionFrameSystem, x: &CVector) -> Result<LocalAdditivity> {
    let fusion_value = fusion::redundancy_at(&system.frame, x)?;
    let local_sum = system
        .local_frames
        .iter()
        .map(|phi| redundancy_function(phi, x))
        .sum::<Result<f64>>()?;
    Ok(LocalAdditivity {
        fusion_value,
        local_sum,
        orthogonal_locals: system.local_frames.iter().all(has_orthogonal_vectors),
        equal: (fusion_value - local_sum).abs() <= ADDITIVITY_TOL,
    })
}

/// `Σ_j f_ij f_ij*` for one local frame.
fn local_operator(local: &VectorFrame) -> CMatrix {
    local.vectors() * local.vectors().adjoint()
}

fn require_local_parseval(system: &FusionFrameSystem) -> Result<()> {
    for (i, (m, local)) in system.frame.members().iter().zip(&system.local_frames).enumerate() {
        let deviation = max_abs_diff(&local_operator(local), &m.subspace.projection());
        if deviation > LOCAL_TOL {
            return Err(FrameError::LocalNotParseval {
                member: i,
                deviation,
            });
        }
    }
    Ok(())
}

/// `{v_i f_ij}` as the columns of one matrix.
pub fn flattened_vectors(system: &FusionFrameSystem) -> CMatrix {
    let total = system.local_frames.iter().map(|l| l.len()).sum();
    let mut out = CMatrix::zeros(system.frame.ambient_dim(), total);
    let mut col = 0;
    for (m, local) in system.frame.members().iter().zip(&system.local_frames) {
        let v = local.vectors();
        out.view_mut((0, col), (v.nrows(), v.ncols()))
            .copy_from(&v.scale(m.weight));
        col += v.ncols();
    }
    out
}

/// `Σ_{i,j} v_i² f_ij f_ij*`.
pub fn flattened_operator(system: &FusionFrameSystem) -> CMatrix {
    let f = flattened_vectors(system);
    &f * f.adjoint()
}

/// `Σ_{i,j} v_i² e_ij e_ij*` for orthonormal bases `{e_ij}` of the members.
pub fn orthonormal_flattened_operator(frame: &FusionFrame) -> CMatrix {
    let t = fusion::synthesis_matrix(frame);
    &t * t.adjoint()
}

fn is_identity(m: &CMatrix, frame: &FusionFrame) -> bool {
    max_abs_diff(m, &identity(m.nrows())) <= frame.tolerance().eig_rel
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParsevalEquivalence {
    /// `{v_i f_ij}` is a Parseval frame.
    pub global_parseval: bool,
    /// `{v_i e_ij}` is a Parseval frame.
    pub orthonormal_parseval: bool,
    /// `{(W_i, v_i)}` is a Parseval fusion frame.
    pub fusion_parseval: bool,
    /// `‖Σ v_i² e_ij e_ij* − S_W‖_max`
    pub flattening_gap: f64,
    pub consistent: bool,
}

/// Requires every local frame to be Parseval for its member.
pub fn parseval_equivalences(system: &FusionFrameSystem) -> Result<ParsevalEquivalence> {
    require_local_parseval(system)?;
    let frame = &system.frame;
    let global_parseval = is_identity(&flattened_operator(system), frame);
    let orthonormal = orthonormal_flattened_operator(frame);
    let orthonormal_parseval = is_identity(&orthonormal, frame);
    let fusion_parseval = fusion::classify(frame)?.parseval;
    Ok(ParsevalEquivalence {
        global_parseval,
        orthonormal_parseval,
        fusion_parseval,
        flattening_gap: max_abs_diff(&orthonormal, &fusion::fusion_frame_operator(frame, false)),
        consistent: global_parseval == fusion_parseval && orthonormal_parseval == fusion_parseval,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RedundancyOneEquivalence {
    /// `{f_ij}` is a Parseval frame.
    pub flat_parseval: bool,
    /// `R⁻ = R⁺ = 1`.
    pub fusion_redundancy_one: bool,
    pub consistent: bool,
}

/// Requires unit weights and Parseval local frames.
pub fn redundancy_one_equivalence(system: &FusionFrameSystem) -> Result<RedundancyOneEquivalence> {
    let frame = &system.frame;
    if !frame.has_unit_weights() {
        return Err(FrameError::NotUniformWeights);
    }
    require_local_parseval(system)?;
    let flat_parseval = is_identity(&flattened_operator(system), frame);
    let (lo, hi) = fusion::redundancy_range(frame)?;
    let eps = frame.tolerance().eig_rel;
    let fusion_redundancy_one = (lo - 1.0).abs() <= eps && (hi - 1.0).abs() <= eps;
    Ok(RedundancyOneEquivalence {
        flat_parseval,
        fusion_redundancy_one,
        consistent: flat_parseval == fusion_redundancy_one,
    })
}
