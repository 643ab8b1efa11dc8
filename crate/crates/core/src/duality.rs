//! Canonical and alternate dual fusion frames.
//!
//! The redundancy-ratio brackets below are checked on samples and reported with a
//! `holds` flag. Violations are data, not errors, unless the caller asks for the
//! strict form through `require`.

use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::exec::Execution;
use crate::fusion::{fusion_frame_operator, FusionFrame, Member, Subspace};
use crate::numerics::{self, quadratic_form, solve_hermitian_positive, CMatrix};
use crate::sampling::sample_extremes;

/// Sample count used when the caller has no preference.
pub const DEFAULT_RATIO_SAMPLES: usize = 1000;

/// `{(S_W⁻¹ W_i, v_i)}`.
pub fn canonical_dual_fusion(frame: &FusionFrame) -> Result<FusionFrame> {
    frame.require_frame()?;
    let tol = frame.tolerance();
    let s = fusion_frame_operator(frame, false);
    let members = frame
        .members()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let image = solve_hermitian_positive(&s, m.subspace.basis(), tol)?;
            let subspace =
                Subspace::from_span(&image, frame.field(), tol).map_err(|e| e.at_member(i))?;
            Ok(Member {
                subspace,
                weight: m.weight,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FusionFrame::from_members(frame.ambient_dim(), frame.field(), members, *tol)
}

/// Sampled `R_W(x) / R_{S⁻¹W}(x)` against `[A³/B, B³/A]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioBounds {
    pub lower: f64,
    pub observed_min: f64,
    pub observed_max: f64,
    pub upper: f64,
    pub samples: usize,
    pub seed: u64,
    pub holds: bool,
}

impl RatioBounds {
    /// Escalates a violated bracket into an error.
    pub fn require(self) -> Result<Self> {
        if self.holds {
            Ok(self)
        } else {
            Err(FrameError::BoundViolation {
                what: format!(
                    "redundancy ratio range [{}, {}] leaves [{}, {}]",
                    self.observed_min, self.observed_max, self.lower, self.upper
                ),
            })
        }
    }
}

fn within(lo: f64, hi: f64, lower: f64, upper: f64, slack: f64) -> bool {
    lo >= lower - slack && hi <= upper + slack
}

/// Extremes of `xᵀ num x / xᵀ den x` over sampled unit vectors.
fn sampled_ratio(
    frame: &FusionFrame,
    num: &CMatrix,
    den: &CMatrix,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> (f64, f64) {
    let r = sample_extremes(frame.ambient_dim(), frame.field(), samples, seed, exec, |x| {
        quadratic_form(num, x) / quadratic_form(den, x)
    });
    (r.min, r.max)
}

/// Defined for families with all weights equal to one.
pub fn canonical_ratio_bounds(
    frame: &FusionFrame,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<RatioBounds> {
    if !frame.has_unit_weights() {
        return Err(FrameError::NotUniformWeights);
    }
    let b = crate::fusion::frame_bounds(frame)?;
    let dual = canonical_dual_fusion(frame)?;
    let (lo, hi) = sampled_ratio(
        frame,
        &fusion_frame_operator(frame, true),
        &fusion_frame_operator(&dual, true),
        samples,
        seed,
        exec,
    );
    let lower = b.lower.powi(3) / b.upper;
    let upper = b.upper.powi(3) / b.lower;
    Ok(RatioBounds {
        lower,
        observed_min: lo,
        observed_max: hi,
        upper,
        samples,
        seed,
        holds: within(lo, hi, lower, upper, frame.tolerance().eig_rel),
    })
}

/// Outcome of checking `x = Σ v_i w_i P_{V_i} S_W⁻¹ P_{W_i} x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualCertificate {
    /// Largest `‖e_k − Σ v_i w_i P_{V_i} S_W⁻¹ P_{W_i} e_k‖` over the standard basis.
    pub residual: f64,
    pub is_dual: bool,
    /// `λ_max(S_V)`.
    pub bessel_bound: f64,
}

/// `Σ v_i w_i P_{V_i} S_W⁻¹ P_{W_i}`.
pub fn dual_reconstruction(frame: &FusionFrame, candidate: &FusionFrame) -> Result<CMatrix> {
    if candidate.ambient_dim() != frame.ambient_dim() {
        return Err(FrameError::DimensionMismatch {
            expected: frame.ambient_dim(),
            found: candidate.ambient_dim(),
        });
    }
    if candidate.len() != frame.len() {
        return Err(FrameError::MemberCountMismatch {
            expected: frame.len(),
            found: candidate.len(),
        });
    }
    frame.require_frame()?;
    let tol = frame.tolerance();
    let s = fusion_frame_operator(frame, false);
    let n = frame.ambient_dim();
    let mut total = CMatrix::zeros(n, n);
    for (w, v) in frame.members().iter().zip(candidate.members()) {
        let sp = solve_hermitian_positive(&s, &w.subspace.projection(), tol)?;
        total += (v.subspace.projection() * sp).scale(w.weight * v.weight);
    }
    Ok(total)
}

pub fn verify_alternate_dual(frame: &FusionFrame, candidate: &FusionFrame) -> Result<DualCertificate> {
    let residual = numerics::identity_residual(&dual_reconstruction(frame, candidate)?);
    Ok(DualCertificate {
        residual,
        is_dual: residual <= frame.tolerance().recon_abs,
        bessel_bound: candidate.bessel_bound(),
    })
}

/// Sampled `R_V(x) / R_W(x)` against `[1/‖S_W⁻¹‖², C/A]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioCheck {
    pub lower: f64,
    pub upper: f64,
    pub observed_min: f64,
    pub observed_max: f64,
    pub holds: bool,
}

/// Bounds of a verified alternate dual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlternateDualBounds {
    /// `1 / (B ‖S_W⁻¹‖²)`
    pub lower: f64,
    /// The Bessel bound `C` of the dual.
    pub upper: f64,
    /// `(λ_min, λ_max)` of the dual's operator.
    pub observed: (f64, f64),
    pub bounds_hold: bool,
    /// Present when both families have unit weights.
    pub ratio: Option<RatioCheck>,
    pub samples: usize,
    pub seed: u64,
    pub holds: bool,
}

impl AlternateDualBounds {
    pub fn require(self) -> Result<Self> {
        if self.holds {
            return Ok(self);
        }
        let what = if !self.bounds_hold {
            format!(
                "dual operator spectrum [{}, {}] leaves [{}, {}]",
                self.observed.0, self.observed.1, self.lower, self.upper
            )
        } else {
            let r = self.ratio.expect("only the ratio check can fail here");
            format!(
                "redundancy ratio range [{}, {}] leaves [{}, {}]",
                r.observed_min, r.observed_max, r.lower, r.upper
            )
        };
        Err(FrameError::BoundViolation { what })
    }
}

pub fn alternate_dual_bounds(
    frame: &FusionFrame,
    dual: &FusionFrame,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<AlternateDualBounds> {
    let cert = verify_alternate_dual(frame, dual)?;
    if !cert.is_dual {
        return Err(FrameError::NotADual {
            residual: cert.residual,
        });
    }
    let b = crate::fusion::frame_bounds(frame)?;
    let slack = frame.tolerance().eig_rel;
    // ‖S_W⁻¹‖ = 1 / A
    let inv_norm = 1.0 / b.lower;
    let lower = 1.0 / (b.upper * inv_norm * inv_norm);
    let upper = cert.bessel_bound;
    let observed = (dual.lambda_min(), dual.bessel_bound());
    let bounds_hold = within(observed.0, observed.1, lower, upper, slack);
    let ratio = (frame.has_unit_weights() && dual.has_unit_weights()).then(|| {
        let (lo, hi) = sampled_ratio(
            frame,
            &fusion_frame_operator(dual, true),
            &fusion_frame_operator(frame, true),
            samples,
            seed,
            exec,
        );
        let lower = 1.0 / (inv_norm * inv_norm);
        let upper = upper / b.lower;
        RatioCheck {
            lower,
            upper,
            observed_min: lo,
            observed_max: hi,
            holds: within(lo, hi, lower, upper, slack),
        }
    });
    Ok(AlternateDualBounds {
        lower,
        upper,
        observed,
        bounds_hold,
        holds: bounds_hold && ratio.is_none_or(|r| r.holds),
        ratio,
        samples,
        seed,
    })
}
