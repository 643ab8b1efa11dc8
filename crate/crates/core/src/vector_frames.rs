//! Classical frames `{φ_i}` of `Hⁿ`: frame operator, redundancy, canonical and alternate duals.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::fusion::FrameBounds;
use crate::numerics::{
    self, check_unit, hermitian_eigenrange, identity_residual, quadratic_form, CMatrix, CVector,
    Field, Tolerance,
};

/// A finite list of nonzero vectors, stored as the columns of an `n x N` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFrame {
    field: Field,
    vectors: CMatrix,
    spans_ambient: bool,
    tol: Tolerance,
}

impl VectorFrame {
    /// A frame for the whole ambient space. Fails with `NotAFrame` if the vectors
    /// do not span it.
    pub fn new(vectors: CMatrix, field: Field, tol: Tolerance) -> Result<Self> {
        let frame = VectorFrame::sequence(vectors, field, tol)?;
        if !frame.spans_ambient {
            let rank = numerics::numerical_rank(&frame.vectors, &tol)?;
            return Err(FrameError::NotAFrame {
                rank,
                dim: frame.ambient_dim(),
            });
        }
        Ok(frame)
    }

    /// A frame for the span of the vectors (a frame sequence). Only zero vectors
    /// are rejected.
    pub fn sequence(mut vectors: CMatrix, field: Field, tol: Tolerance) -> Result<Self> {
        tol.validate()?;
        numerics::check_finite(&vectors)?;
        if !field.admits(&vectors) {
            return Err(FrameError::FieldMismatch);
        }
        if field == Field::Real {
            numerics::realify(&mut vectors);
        }
        let norms: Vec<f64> = vectors.column_iter().map(|c| c.norm()).collect();
        let largest = norms.iter().copied().fold(0.0, f64::max);
        if let Some(index) = norms
            .iter()
            .position(|&x| x == 0.0 || x <= tol.rank_rel * largest)
        {
            return Err(FrameError::ZeroVector { index });
        }
        let rank = numerics::numerical_rank(&vectors, &tol)?;
        Ok(VectorFrame {
            field,
            spans_ambient: rank == vectors.nrows(),
            vectors,
            tol,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn len(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn tolerance(&self) -> &Tolerance {
        &self.tol
    }

    /// The vectors as matrix columns.
    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> CVector {
        self.vectors.column(i).into_owned()
    }

    pub fn spans_ambient(&self) -> bool {
        self.spans_ambient
    }

    pub fn norms(&self) -> Vec<f64> {
        self.vectors.column_iter().map(|c| c.norm()).collect()
    }

    /// All norms agree to within `eig_rel` relative spread.
    pub fn is_equal_norm(&self) -> bool {
        let norms = self.norms();
        let max = norms.iter().copied().fold(0.0, f64::max);
        let min = norms.iter().copied().fold(f64::INFINITY, f64::min);
        max - min <= self.tol.eig_rel * max
    }

    /// Every vector multiplied by `alpha > 0`.
    pub fn scaled(&self, alpha: f64) -> Result<VectorFrame> {
        VectorFrame::sequence(self.vectors.scale(alpha), self.field, self.tol)
    }

    fn require_frame(&self) -> Result<()> {
        if self.spans_ambient {
            Ok(())
        } else {
            Err(FrameError::NotAFrame {
                rank: numerics::numerical_rank(&self.vectors, &self.tol)?,
                dim: self.ambient_dim(),
            })
        }
    }
}

/// `S_Φ = Σ φ_i φ_i*`.
pub fn frame_operator(frame: &VectorFrame) -> Result<CMatrix> {
    frame.require_frame()?;
    let s = &frame.vectors * frame.vectors.adjoint();
    let (lo, hi) = hermitian_eigenrange(&s)?;
    if lo <= frame.tol.rank_rel * hi {
        return Err(FrameError::NotAFrame {
            rank: numerics::numerical_rank(&frame.vectors, &frame.tol)?,
            dim: frame.ambient_dim(),
        });
    }
    Ok(s)
}

/// `Σ φ_i φ_i* / ‖φ_i‖²`, the frame operator of the normalized vectors.
pub fn normalized_frame_operator(frame: &VectorFrame) -> CMatrix {
    let mut unit = frame.vectors.clone();
    for mut col in unit.column_iter_mut() {
        let norm = col.norm();
        col.unscale_mut(norm);
    }
    &unit * unit.adjoint()
}

/// `R_Φ(x) = Σ |⟨x, φ_i⟩|² / ‖φ_i‖²` on the unit sphere.
pub fn redundancy_function(frame: &VectorFrame, x: &CVector) -> Result<f64> {
    check_unit(x)?;
    if x.len() != frame.ambient_dim() {
        return Err(FrameError::DimensionMismatch {
            expected: frame.ambient_dim(),
            found: x.len(),
        });
    }
    Ok(frame
        .vectors
        .column_iter()
        .map(|phi| phi.dotc(x).norm_sqr() / phi.norm_squared())
        .sum())
}

/// `(R⁻_Φ, R⁺_Φ)`: extreme eigenvalues of the normalized frame operator.
pub fn vector_redundancy_range(frame: &VectorFrame) -> Result<(f64, f64)> {
    frame.require_frame()?;
    hermitian_eigenrange(&normalized_frame_operator(frame))
}

/// `{S_Φ⁻¹ φ_i}`.
pub fn canonical_dual(frame: &VectorFrame) -> Result<VectorFrame> {
    let s = frame_operator(frame)?;
    let dual = numerics::solve_hermitian_positive(&s, &frame.vectors, &frame.tol)?;
    VectorFrame::new(dual, frame.field, frame.tol)
}

/// `ψ_i = S⁻¹φ_i + η_i − Σ_k ⟨S⁻¹φ_i, φ_k⟩ η_k`, with `eta` given as `n x N` columns.
pub fn alternate_dual(frame: &VectorFrame, eta: &CMatrix) -> Result<VectorFrame> {
    if eta.ncols() != frame.len() {
        return Err(FrameError::WrongEtaCount {
            expected: frame.len(),
            found: eta.ncols(),
        });
    }
    if eta.nrows() != frame.ambient_dim() {
        return Err(FrameError::DimensionMismatch {
            expected: frame.ambient_dim(),
            found: eta.nrows(),
        });
    }
    numerics::check_finite(eta)?;
    let s = frame_operator(frame)?;
    let canonical = numerics::solve_hermitian_positive(&s, &frame.vectors, &frame.tol)?;
    // gram[(k, i)] = ⟨S⁻¹φ_i, φ_k⟩ = φ_k* S⁻¹ φ_i
    let gram = frame.vectors.adjoint() * &canonical;
    let psi = &canonical + eta - eta * gram;
    VectorFrame::new(psi, frame.field.join(field_of(eta)), frame.tol)
}

fn field_of(m: &CMatrix) -> Field {
    if Field::Real.admits(m) {
        Field::Real
    } else {
        Field::Complex
    }
}

fn check_pair(frame: &VectorFrame, dual: &VectorFrame) -> Result<()> {
    if dual.ambient_dim() != frame.ambient_dim() {
        return Err(FrameError::DimensionMismatch {
            expected: frame.ambient_dim(),
            found: dual.ambient_dim(),
        });
    }
    if dual.len() != frame.len() {
        return Err(FrameError::MemberCountMismatch {
            expected: frame.len(),
            found: dual.len(),
        });
    }
    Ok(())
}

/// Worst reconstruction error `max_k ‖e_k − Σ⟨e_k, φ_i⟩ψ_i‖`. By linearity the
/// basis vectors settle the dual property for every `x`.
pub fn dual_residual(frame: &VectorFrame, dual: &VectorFrame) -> Result<f64> {
    check_pair(frame, dual)?;
    Ok(identity_residual(&(&dual.vectors * frame.vectors.adjoint())))
}

/// Whether `dual` reconstructs through `frame` to within `recon_abs`.
pub fn is_dual(frame: &VectorFrame, dual: &VectorFrame) -> Result<bool> {
    Ok(dual_residual(frame, dual)? <= frame.tol.recon_abs)
}

/// Coefficient norms of the canonical dual versus another dual at `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormInequality {
    /// `‖(⟨x, S⁻¹φ_i⟩)_i‖₂`
    pub lhs: f64,
    /// `‖(⟨x, ψ_i⟩)_i‖₂`
    pub rhs: f64,
    pub holds: bool,
}

/// The canonical dual gives the minimal-norm coefficient sequence among all duals.
pub fn check_norm_inequality(
    frame: &VectorFrame,
    dual: &VectorFrame,
    x: &CVector,
) -> Result<NormInequality> {
    check_unit(x)?;
    let residual = dual_residual(frame, dual)?;
    if residual > frame.tol.recon_abs {
        return Err(FrameError::NotADual { residual });
    }
    let canonical = canonical_dual(frame)?;
    let lhs = (canonical.vectors.adjoint() * x).norm();
    let rhs = (dual.vectors.adjoint() * x).norm();
    Ok(NormInequality {
        lhs,
        rhs,
        holds: lhs <= rhs + frame.tol.eig_rel,
    })
}

/// Redundancy comparison when the canonical dual and `dual` are both equal-norm,
/// with common norms `c` and `d`: `R_{S⁻¹Φ}(x) ≤ (d/c)² R_Ψ(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EqualNormBound {
    pub canonical_norm: f64,
    pub dual_norm: f64,
    pub canonical_redundancy: f64,
    pub bound: f64,
    pub holds: bool,
}

/// `None` when either dual is not equal-norm.
pub fn equal_norm_redundancy_bound(
    frame: &VectorFrame,
    dual: &VectorFrame,
    x: &CVector,
) -> Result<Option<EqualNormBound>> {
    let residual = dual_residual(frame, dual)?;
    if residual > frame.tol.recon_abs {
        return Err(FrameError::NotADual { residual });
    }
    let canonical = canonical_dual(frame)?;
    if !canonical.is_equal_norm() || !dual.is_equal_norm() {
        return Ok(None);
    }
    let c = canonical.norms()[0];
    let d = dual.norms()[0];
    let canonical_redundancy = redundancy_function(&canonical, x)?;
    let bound = (d / c).powi(2) * redundancy_function(dual, x)?;
    Ok(Some(EqualNormBound {
        canonical_norm: c,
        dual_norm: d,
        canonical_redundancy,
        bound,
        holds: canonical_redundancy <= bound * (1.0 + frame.tol.eig_rel) + frame.tol.eig_rel,
    }))
}

/// Redundancy of the canonical dual relative to the frame, against `k(S_Φ)^{±2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualSandwich {
    /// `k(S_Φ) = λ_max / λ_min`
    pub condition: f64,
    /// `k(S_Φ)⁻²`
    pub lower: f64,
    /// `R⁻_Ψ / R⁻_Φ`
    pub ratio_minus: f64,
    /// `R⁺_Ψ / R⁺_Φ`
    pub ratio_plus: f64,
    /// `k(S_Φ)²`
    pub upper: f64,
    pub holds: bool,
}

pub fn dual_redundancy_sandwich(frame: &VectorFrame) -> Result<DualSandwich> {
    let (lo, hi) = hermitian_eigenrange(&frame_operator(frame)?)?;
    let condition = hi / lo;
    let (r_minus, r_plus) = vector_redundancy_range(frame)?;
    let (d_minus, d_plus) = vector_redundancy_range(&canonical_dual(frame)?)?;
    let lower = condition.powi(-2);
    let upper = condition.powi(2);
    let ratio_minus = d_minus / r_minus;
    let ratio_plus = d_plus / r_plus;
    let slack = frame.tol.eig_rel;
    let inside = |r: f64| r >= lower * (1.0 - slack) && r <= upper * (1.0 + slack);
    Ok(DualSandwich {
        condition,
        lower,
        ratio_minus,
        ratio_plus,
        upper,
        holds: inside(ratio_minus) && inside(ratio_plus),
    })
}

/// The constant `C` for which `{Cφ_i}` is a dual, if one exists. A frame has such a
/// dual exactly when it is tight, and then `C = 1/A`.
pub fn tight_dual_constant(frame: &VectorFrame) -> Result<Option<f64>> {
    let s = frame_operator(frame)?;
    let trace: f64 = s.diagonal().iter().map(|z| z.re).sum();
    let c = frame.ambient_dim() as f64 / trace;
    let residual = identity_residual(&s.scale(c));
    Ok((residual <= frame.tol.recon_abs).then_some(c))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VectorFrameReport {
    pub bounds: FrameBounds,
    pub redundancy: (f64, f64),
    pub tight: bool,
    pub equal_norm: bool,
}

pub fn analyze_vector_frame(frame: &VectorFrame) -> Result<VectorFrameReport> {
    let (lower, upper) = hermitian_eigenrange(&frame_operator(frame)?)?;
    Ok(VectorFrameReport {
        bounds: FrameBounds { lower, upper },
        redundancy: vector_redundancy_range(frame)?,
        tight: (upper - lower) <= frame.tol.eig_rel * upper,
        equal_norm: frame.is_equal_norm(),
    })
}

/// Sum of `|⟨x, φ_i⟩|²` without normalization; `x* S_Φ x`.
pub fn frame_energy(frame: &VectorFrame, x: &CVector) -> f64 {
    quadratic_form(&(&frame.vectors * frame.vectors.adjoint()), x)
}

/// Mercedes-Benz frame: three unit vectors in the plane, 120° apart.
pub fn mercedes_benz(tol: Tolerance) -> VectorFrame {
    let h = 3f64.sqrt() / 2.0;
    let data = [0.0, 1.0, -h, -0.5, h, -0.5];
    let m = CMatrix::from_iterator(2, 3, data.iter().map(|&x| Complex64::new(x, 0.0)));
    VectorFrame::new(m, Field::Real, tol).expect("spans the plane")
}
