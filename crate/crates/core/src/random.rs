//! Random generators for frames, operators and fusion frame systems.

use num_complex::Complex64;
use rand::Rng;

use crate::fusion::{fusion_frame_operator, FusionFrame, Member, Subspace};
use crate::numerics::{
    hermitian_eigen, realify, solve_hermitian_positive, CMatrix, CVector, Field, Tolerance,
};
use crate::sampling::random_gaussian_vector;
use crate::vector_frames::VectorFrame;

/// Shape limits for [`random_fusion_frame`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameShape {
    pub max_dim: usize,
    pub max_members: usize,
    pub max_subspace_dim: usize,
    pub weights: (f64, f64),
    /// `None` draws the field at random.
    pub field: Option<Field>,
}

impl Default for FrameShape {
    fn default() -> Self {
        FrameShape {
            max_dim: 12,
            max_members: 10,
            max_subspace_dim: 4,
            weights: (0.5, 2.0),
            field: None,
        }
    }
}

pub fn random_field<R: Rng + ?Sized>(rng: &mut R) -> Field {
    if rng.random_bool(0.5) {
        Field::Real
    } else {
        Field::Complex
    }
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, field: Field) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    for mut c in m.column_iter_mut() {
        c.copy_from(&random_gaussian_vector(rows, field, rng));
    }
    m
}

/// Haar unitary (orthogonal in the real field) from the QR factorization of a
/// Gaussian matrix with the phases of `R` moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize, field: Field) -> CMatrix {
    let qr = gaussian_matrix(rng, n, n, field).qr();
    let (mut q, r) = qr.unpack();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        col *= phase;
    }
    if field == Field::Real {
        realify(&mut q);
    }
    q
}

/// `U₁ diag(s) U₂` with singular values drawn log-uniformly from `[1/spread, spread]`.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize, field: Field, spread: f64) -> CMatrix {
    let left = random_unitary(rng, n, field);
    let right = random_unitary(rng, n, field);
    let ln = spread.ln();
    let s = CVector::from_iterator(
        n,
        (0..n).map(|_| Complex64::new(rng.random_range(-ln..=ln).exp(), 0.0)),
    );
    left * CMatrix::from_diagonal(&s) * right
}

/// `d`-dimensional random subspace of the `n`-dimensional space.
pub fn random_subspace<R: Rng + ?Sized>(rng: &mut R, n: usize, d: usize, field: Field) -> Subspace {
    let tol = Tolerance::default();
    loop {
        if let Ok(s) = Subspace::from_span(&gaussian_matrix(rng, n, d, field), field, &tol) {
            if s.dim() == d {
                return s;
            }
        }
    }
}

fn random_weight<R: Rng + ?Sized>(rng: &mut R, range: (f64, f64)) -> f64 {
    if range.0 == range.1 {
        range.0
    } else {
        rng.random_range(range.0..=range.1)
    }
}

/// A fusion frame in a random dimension `1 ≤ n ≤ max_dim`.
pub fn random_fusion_frame<R: Rng + ?Sized>(rng: &mut R, shape: &FrameShape) -> FusionFrame {
    let n = rng.random_range(1..=shape.max_dim);
    let field = shape.field.unwrap_or_else(|| random_field(rng));
    random_fusion_frame_in(rng, n, field, shape)
}

/// A fusion frame for the given dimension and field. Subspace dimensions are drawn
/// so that they add up to at least `n`, and draws that fail to span are retried.
pub fn random_fusion_frame_in<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    field: Field,
    shape: &FrameShape,
) -> FusionFrame {
    let cap = shape.max_subspace_dim.min(n).max(1);
    let min_members = n.div_ceil(cap);
    assert!(
        min_members <= shape.max_members,
        "{} members of dimension ≤ {cap} cannot span dimension {n}",
        shape.max_members
    );
    loop {
        let count = rng.random_range(min_members..=shape.max_members);
        let mut dims: Vec<usize> = (0..count).map(|_| rng.random_range(1..=cap)).collect();
        let mut i = 0;
        while dims.iter().sum::<usize>() < n {
            if dims[i] < cap {
                dims[i] += 1;
            }
            i = (i + 1) % count;
        }
        let members = dims
            .into_iter()
            .map(|d| Member {
                subspace: random_subspace(rng, n, d, field),
                weight: random_weight(rng, shape.weights),
            })
            .collect();
        let frame = FusionFrame::from_members(n, field, members, Tolerance::default())
            .expect("generated members are valid");
        if frame.is_frame() && frame.lambda_min() > 1e-6 * frame.bessel_bound() {
            return frame;
        }
    }
}

/// Random sizes `d₁ + … + d_k = n` with each part at most `cap`.
pub fn random_partition<R: Rng + ?Sized>(rng: &mut R, n: usize, cap: usize) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let d = rng.random_range(1..=cap.min(left));
        parts.push(d);
        left -= d;
    }
    parts
}

/// Splits the columns of `u` into consecutive blocks.
fn blocks(u: &CMatrix, sizes: &[usize], field: Field) -> Vec<Subspace> {
    let tol = Tolerance::default();
    let mut start = 0;
    sizes
        .iter()
        .map(|&d| {
            let s = Subspace::from_span(&u.columns(start, d).into_owned(), field, &tol)
                .expect("unitary columns are independent");
            start += d;
            s
        })
        .collect()
}

/// An orthogonal direct-sum decomposition of the whole space with random weights:
/// a Riesz decomposition.
pub fn random_orthogonal_decomposition<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    field: Field,
    weights: (f64, f64),
) -> FusionFrame {
    let u = random_unitary(rng, n, field);
    let sizes = random_partition(rng, n, 4);
    let members = blocks(&u, &sizes, field)
        .into_iter()
        .map(|subspace| Member {
            subspace,
            weight: random_weight(rng, weights),
        })
        .collect();
    FusionFrame::from_members(n, field, members, Tolerance::default()).expect("valid members")
}

/// `k` orthogonal decompositions, all weighted `1/√k`: a Parseval fusion frame.
pub fn random_parseval_fusion_frame<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    field: Field,
    layers: usize,
) -> FusionFrame {
    let weight = 1.0 / (layers as f64).sqrt();
    let mut members = Vec::new();
    for _ in 0..layers {
        let u = random_unitary(rng, n, field);
        let sizes = random_partition(rng, n, 4);
        members.extend(
            blocks(&u, &sizes, field)
                .into_iter()
                .map(|subspace| Member { subspace, weight }),
        );
    }
    FusionFrame::from_members(n, field, members, Tolerance::default()).expect("valid members")
}

/// Gaussian vectors in `n` dimensions, redrawn until they span.
pub fn random_vector_frame<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    count: usize,
    field: Field,
) -> VectorFrame {
    assert!(count >= n);
    loop {
        if let Ok(f) = VectorFrame::new(gaussian_matrix(rng, n, count, field), field, Tolerance::default()) {
            let (lo, hi) = crate::numerics::hermitian_eigenrange(&(f.vectors() * f.vectors().adjoint()))
                .expect("finite");
            if lo > 1e-6 * hi {
                return f;
            }
        }
    }
}

/// `√a · S^{-1/2} Φ` for a random frame `Φ`: an `a`-tight frame.
pub fn random_tight_vector_frame<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    count: usize,
    field: Field,
    a: f64,
) -> VectorFrame {
    let f = random_vector_frame(rng, n, count, field);
    let s = f.vectors() * f.vectors().adjoint();
    let (values, vectors) = hermitian_eigen(&s).expect("finite");
    let scale = CVector::from_iterator(n, values.iter().map(|l| Complex64::new((a / l).sqrt(), 0.0)));
    let root = &vectors * CMatrix::from_diagonal(&scale) * vectors.adjoint();
    let mut v = root * f.vectors();
    if field == Field::Real {
        realify(&mut v);
    }
    VectorFrame::new(v, field, Tolerance::default()).expect("tight frames span")
}

/// Local frames for every member. Orthogonal locals are rotated, rescaled
/// orthonormal bases; the others carry one to two extra generic vectors.
pub fn random_local_frames<R: Rng + ?Sized>(
    rng: &mut R,
    frame: &FusionFrame,
    orthogonal: bool,
) -> Vec<CMatrix> {
    let field = frame.field();
    frame
        .members()
        .iter()
        .map(|m| {
            let q = m.subspace.basis();
            let d = q.ncols();
            if orthogonal {
                let scales = CVector::from_iterator(
                    d,
                    (0..d).map(|_| Complex64::new(rng.random_range(0.5..=2.0), 0.0)),
                );
                q * random_unitary(rng, d, field) * CMatrix::from_diagonal(&scales)
            } else {
                let extra = rng.random_range(1..=2);
                q * gaussian_matrix(rng, d, d + extra, field)
            }
        })
        .collect()
}

/// Parseval local frames `Q_i G_i` where the rows of `G_i` are orthonormal.
pub fn random_parseval_local_frames<R: Rng + ?Sized>(rng: &mut R, frame: &FusionFrame) -> Vec<CMatrix> {
    let field = frame.field();
    frame
        .members()
        .iter()
        .map(|m| {
            let q = m.subspace.basis();
            let d = q.ncols();
            let count = d + rng.random_range(0..=2);
            let g = random_unitary(rng, count, field).rows(0, d).into_owned();
            q * g
        })
        .collect()
}

/// An alternate dual of `frame`: `V_i ⊇ S_W⁻¹ W_i` with the weights of `frame`.
/// Each `V_i` receives up to two extra random directions.
pub fn random_alternate_dual<R: Rng + ?Sized>(rng: &mut R, frame: &FusionFrame) -> FusionFrame {
    let field = frame.field();
    let n = frame.ambient_dim();
    let tol = *frame.tolerance();
    let s = fusion_frame_operator(frame, false);
    let members = frame
        .members()
        .iter()
        .map(|m| {
            let image = solve_hermitian_positive(&s, m.subspace.basis(), &tol).expect("frame operator is invertible");
            let d = image.ncols();
            let extra = rng.random_range(0..=2usize).min(n - d);
            let mut span = CMatrix::zeros(n, d + extra);
            span.columns_mut(0, d).copy_from(&image);
            span.columns_mut(d, extra).copy_from(&gaussian_matrix(rng, n, extra, field));
            Member {
                subspace: Subspace::from_span(&span, field, &tol).expect("nonzero span"),
                weight: m.weight,
            }
        })
        .collect();
    FusionFrame::from_members(n, field, members, tol).expect("valid members")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::{frame_bounds, is_minimal};
    use crate::numerics::{identity, max_abs_diff};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for field in [Field::Real, Field::Complex] {
            let u = random_unitary(&mut rng, 6, field);
            assert!(max_abs_diff(&(u.adjoint() * &u), &identity(6)) < 1e-12);
            assert!(field.admits(&u));
        }
    }

    #[test]
    fn empty_gaussian_draw() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = gaussian_matrix(&mut rng, 4, 0, Field::Real);
        assert_eq!(g.shape(), (4, 0));
    }

    #[test]
    fn generated_frames_respect_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let shape = FrameShape::default();
        for _ in 0..50 {
            let f = random_fusion_frame(&mut rng, &shape);
            assert!(f.is_frame());
            assert!(f.ambient_dim() <= 12 && f.len() <= 10);
            assert!(f.dims().iter().all(|&d| d <= 4));
            assert!(f.weights().iter().all(|&w| (0.5..=2.0).contains(&w)));
        }
    }

    #[test]
    fn parseval_and_riesz_constructions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_parseval_fusion_frame(&mut rng, 7, Field::Complex, 3);
        let b = frame_bounds(&p).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);
        let r = random_orthogonal_decomposition(&mut rng, 7, Field::Real, (0.5, 2.0));
        assert!(is_minimal(&r));
    }

    #[test]
    fn tight_vector_frames_are_tight() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = random_tight_vector_frame(&mut rng, 4, 7, Field::Complex, 2.5);
        let s = f.vectors() * f.vectors().adjoint();
        assert!(max_abs_diff(&s, &identity(4).scale(2.5)) < 1e-10);
    }

    #[test]
    fn parseval_locals_reproduce_projections() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_fusion_frame(&mut rng, &FrameShape::default());
        for (m, g) in f.members().iter().zip(random_parseval_local_frames(&mut rng, &f)) {
            assert!(max_abs_diff(&(&g * g.adjoint()), &m.subspace.projection()) < 1e-12);
        }
    }
}
