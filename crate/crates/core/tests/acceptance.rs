//! Acceptance suite. Every test prints one PASS/FAIL line on stdout (outside the
//! test harness capture) and then asserts.

use std::io::Write;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ffk_core::catalog::{example_frame, Example};
use ffk_core::fusion::{
    apply_operator, classify, erase, excess, frame_bounds, fusion_frame_operator,
    max_robust_erasures, projection_energy, redundancy_at, redundancy_range, sampled_redundancy,
    union, weighted_energy, ErasureSearch, FusionFrame, Member, Subspace,
};
use ffk_core::numerics::{from_real, hermitian_eigen, CMatrix, CVector, Field};
use ffk_core::random::{
    gaussian_matrix, random_field, random_fusion_frame, random_fusion_frame_in,
    random_invertible, random_local_frames, random_orthogonal_decomposition,
    random_parseval_fusion_frame, random_parseval_local_frames, random_tight_vector_frame,
    random_unitary, random_vector_frame, FrameShape,
};
use ffk_core::sampling::{random_unit_vector, unit_vectors};
use ffk_core::systems::{build_system, check_local_additivity, parseval_equivalences};
use ffk_core::catalog::example_spans;
use ffk_core::vector_frames::{
    alternate_dual, canonical_dual, check_norm_inequality, dual_redundancy_sandwich,
    redundancy_function, tight_dual_constant, vector_redundancy_range, VectorFrame,
};
use ffk_core::{Execution, Tolerance};

fn verdict(criterion: &str, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "criterion {criterion}: {status} ({detail})").unwrap();
}

fn tol() -> Tolerance {
    Tolerance::default()
}

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(a.abs())
}

/// `P = B (B*B)⁻¹ B*` for any full-column-rank `B`, without orthonormalizing.
fn projection_onto(b: &CMatrix) -> CMatrix {
    let gram = b.adjoint() * b;
    b * gram.try_inverse().expect("independent columns") * b.adjoint()
}

/// Extreme eigenvalues by a route independent of the library.
fn eigen_extremes(m: &CMatrix) -> (f64, f64) {
    let h = (m + m.adjoint()).scale(0.5);
    let values = nalgebra::SymmetricEigen::new(h).eigenvalues;
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

#[test]
fn criterion_01_two_tight_golden() {
    let start = Instant::now();
    let f = example_frame(Example::TwoTight, 5, tol()).unwrap();
    let b = frame_bounds(&f).unwrap();
    let (r_lo, r_hi) = redundancy_range(&f).unwrap();
    let report = classify(&f).unwrap();
    let elapsed = start.elapsed();
    let ok = rel_close(b.lower, 2.0, 1e-9)
        && rel_close(b.upper, 2.0, 1e-9)
        && rel_close(r_lo, 2.0, 1e-9)
        && rel_close(r_hi, 2.0, 1e-9)
        && report.uniform_redundancy
        && report.tight
        && elapsed.as_secs_f64() < 1.0;
    verdict(
        "1",
        ok,
        &format!(
            "bounds ({}, {}), redundancy ({r_lo}, {r_hi}), tight {}, uniform redundancy {}, {:?}",
            b.lower, b.upper, report.tight, report.uniform_redundancy, elapsed
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_02_two_tight_every_pair_erasure() {
    let f = example_frame(Example::TwoTight, 5, tol()).unwrap();
    let cert = max_robust_erasures(&f, 2, ErasureSearch::Exhaustive).unwrap();
    // independent oracle: rank of the remaining synthesis blocks for every pair
    let mut broken = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let kept: Vec<&Member> = f
                .members()
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i && *k != j)
                .map(|(_, m)| m)
                .collect();
            let cols: Vec<CVector> = kept
                .iter()
                .flat_map(|m| m.subspace.basis().column_iter().map(|c| c.into_owned()).collect::<Vec<_>>())
                .collect();
            let t = CMatrix::from_columns(&cols);
            let rank = t.svd(false, false).rank(1e-10);
            if rank < 5 {
                broken.push((i + 1, j + 1));
            }
        }
    }
    let ok = cert.exhaustive && cert.certified >= 2 && broken.is_empty();
    verdict(
        "2 (every 2-subset removal)",
        ok,
        &format!(
            "exhaustive search certifies {} erasure(s); pairs leaving a non-spanning family (1-based): {:?}",
            cert.certified, broken
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_02_two_tight_weight_bound_for_first_and_third() {
    let f = example_frame(Example::TwoTight, 5, tol()).unwrap();
    let e = erase(&f, &[0, 2]).unwrap();
    let a = e.erased_weight;
    let bound = e.guaranteed_lower.unwrap_or(f64::NAN);
    // oracle: λ_min of 4/3·(P_{W₂} + P_{W₄}) computed from the raw coordinate spans
    let spans = example_spans(Example::TwoTight, 5).unwrap();
    let w2 = projection_onto(&spans[1].0);
    let w4 = projection_onto(&spans[3].0);
    let (oracle_lo, _) = eigen_extremes(&(w2 + w4).scale(4.0 / 3.0));
    let ok = (a - 4.0 / 3.0).abs() <= 1e-12
        && (bound - 2.0 / 3.0).abs() <= 1e-12
        && e.remaining_lower >= 2.0 / 3.0 - 1e-9
        && (e.remaining_lower - oracle_lo).abs() <= 1e-12;
    verdict(
        "2 (J = {1,3})",
        ok,
        &format!(
            "a = {a}, weight bound {bound}, remaining lambda_min {} (oracle {oracle_lo})",
            e.remaining_lower
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_03_localized_and_uniform() {
    let mut details = Vec::new();
    let mut ok = true;
    for n in [2usize, 4, 8] {
        let w = example_frame(Example::Localized, n, tol()).unwrap();
        let (lo, hi) = redundancy_range(&w).unwrap();
        let report = classify(&w).unwrap();
        let v = example_frame(Example::Uniform, n, tol()).unwrap();
        let (vlo, vhi) = redundancy_range(&v).unwrap();
        let cert = max_robust_erasures(&v, v.len() - 1, ErasureSearch::Exhaustive).unwrap();
        let this = (lo - 1.0).abs() <= 1e-9
            && (hi - (n as f64 + 1.0)).abs() <= 1e-9
            && !report.tight
            && !report.orthonormal_fusion_basis
            && (vlo - 2.0).abs() <= 1e-9
            && (vhi - 2.0).abs() <= 1e-9
            && cert.certified == 1;
        ok &= this;
        details.push(format!(
            "n={n}: W ({lo}, {hi}) tight {} onb {}; V ({vlo}, {vhi}) robust to {}",
            report.tight, report.orthonormal_fusion_basis, cert.certified
        ));
    }
    verdict("3", ok, &details.join("; "));
    assert!(ok);
}

#[test]
fn criterion_04_orthonormal_basis() {
    let mut ok = true;
    let mut details = Vec::new();
    for n in [2usize, 3, 6] {
        let f = example_frame(Example::OrthonormalBasis, n, tol()).unwrap();
        let (lo, hi) = redundancy_range(&f).unwrap();
        let e = excess(&f);
        let cert = max_robust_erasures(&f, n - 1, ErasureSearch::Exhaustive).unwrap();
        let this = (lo - 1.0).abs() <= 1e-12 && (hi - 1.0).abs() <= 1e-12 && e == 0 && cert.certified == 0;
        ok &= this;
        details.push(format!("n={n}: ({lo}, {hi}) excess {e} robust to {}", cert.certified));
    }
    verdict("4", ok, &details.join("; "));
    assert!(ok);
}

#[test]
fn criterion_05_random_fusion_frames() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let shape = FrameShape::default();
    let frames: Vec<FusionFrame> = (0..200).map(|_| random_fusion_frame(&mut rng, &shape)).collect();

    // Rayleigh identity: quadratic form, eigen expansion and direct projection sum
    let mut rayleigh_gap: f64 = 0.0;
    let mut sandwich_violations = 0;
    let mut unitary_gap: f64 = 0.0;
    for f in &frames {
        let n = f.ambient_dim();
        let s1 = fusion_frame_operator(f, true);
        let (values, vectors) = hermitian_eigen(&s1).unwrap();
        let b = frame_bounds(f).unwrap();
        for x in unit_vectors(n, f.field(), 1000, rng.random()) {
            let eigen: f64 = values
                .iter()
                .zip(vectors.column_iter())
                .map(|(l, v)| l * v.dotc(&x).norm_sqr())
                .sum();
            let direct: f64 = f.members().iter().map(|m| (m.subspace.projection() * &x).norm_squared()).sum();
            let r = redundancy_at(f, &x).unwrap();
            rayleigh_gap = rayleigh_gap.max((r - eigen).abs()).max((r - direct).abs());
            let energy = weighted_energy(f, &x);
            let slack = 1e-9 * b.upper;
            if energy < b.lower - slack || energy > b.upper + slack {
                sandwich_violations += 1;
            }
        }
        let u = random_unitary(&mut rng, n, f.field());
        let g = apply_operator(f, &u).unwrap();
        let (lo, hi) = redundancy_range(f).unwrap();
        let (glo, ghi) = redundancy_range(&g).unwrap();
        unitary_gap = unitary_gap.max((lo - glo).abs()).max((hi - ghi).abs());
    }

    // additivity over random pairs of equal dimension and field
    let mut additivity_violations = 0;
    let mut shift_gap: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(1..=12);
        let field = random_field(&mut rng);
        let a = random_fusion_frame_in(&mut rng, n, field, &shape);
        let b = random_fusion_frame_in(&mut rng, n, field, &shape);
        let (alo, ahi) = redundancy_range(&a).unwrap();
        let (blo, bhi) = redundancy_range(&b).unwrap();
        let (ulo, uhi) = redundancy_range(&union(&a, &b).unwrap()).unwrap();
        let slack = 1e-9 * (ahi + bhi);
        if ulo < alo + blo - slack || uhi > ahi + bhi + slack {
            additivity_violations += 1;
        }
        let onb = random_orthogonal_decomposition(&mut rng, n, field, (1.0, 1.0));
        let (slo, shi) = redundancy_range(&union(&a, &onb).unwrap()).unwrap();
        shift_gap = shift_gap.max((slo - alo - 1.0).abs()).max((shi - ahi - 1.0).abs());
    }

    // condition-number sandwich, with image projections built without orthonormalization
    let mut condition_violations = 0;
    for f in frames.iter().take(100) {
        let n = f.ambient_dim();
        let u = random_invertible(&mut rng, n, f.field(), 4.0);
        let sv = u.clone().svd(false, false).singular_values;
        let k = sv.max() / sv.min();
        let s1: CMatrix = f
            .members()
            .iter()
            .map(|m| projection_onto(&(&u * m.subspace.basis())))
            .fold(CMatrix::zeros(n, n), |acc, p| acc + p);
        let (ilo, ihi) = eigen_extremes(&s1);
        let (lo, hi) = redundancy_range(f).unwrap();
        let eps = 1e-9;
        let inside = |before: f64, after: f64| {
            after >= before / (k * k) * (1.0 - eps) && after <= before * k * k * (1.0 + eps)
        };
        if !(inside(lo, ilo) && inside(hi, ihi)) {
            condition_violations += 1;
        }
    }

    let ok = rayleigh_gap <= 1e-10
        && sandwich_violations == 0
        && additivity_violations == 0
        && shift_gap <= 1e-9
        && unitary_gap <= 1e-9
        && condition_violations == 0;
    verdict(
        "5",
        ok,
        &format!(
            "rayleigh gap {rayleigh_gap:.2e}, bound violations {sandwich_violations}, additivity violations {additivity_violations}, \
             basis shift gap {shift_gap:.2e}, unitary gap {unitary_gap:.2e}, condition sandwich violations {condition_violations}"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_06_excess_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let shape = FrameShape::default();
    let mut mismatches = 0;
    let mut formula_mismatches = 0;
    for _ in 0..100 {
        let f = random_fusion_frame(&mut rng, &shape);
        let e = excess(&f);
        let dims: usize = f.dims().iter().sum();
        if e != dims - f.ambient_dim() {
            formula_mismatches += 1;
        }
        let u = random_unitary(&mut rng, f.ambient_dim(), f.field());
        let images = [
            excess(&apply_operator(&f, &u).unwrap()),
            excess(&f.scaled_weights(0.5).unwrap()),
            excess(&f.scaled_weights(3.0).unwrap()),
        ];
        if images.iter().any(|&x| x != e) {
            mismatches += 1;
        }
    }
    let mut riesz_nonzero = 0;
    for _ in 0..100 {
        let n = rng.random_range(1..=12);
        let field = random_field(&mut rng);
        let r = random_orthogonal_decomposition(&mut rng, n, field, (0.5, 2.0));
        if excess(&r) != 0 {
            riesz_nonzero += 1;
        }
    }
    let ok = mismatches == 0 && formula_mismatches == 0 && riesz_nonzero == 0;
    verdict(
        "6",
        ok,
        &format!(
            "invariance mismatches {mismatches}, sum-of-dims mismatches {formula_mismatches}, Riesz decompositions with excess {riesz_nonzero}"
        ),
    );
    assert!(ok);
}

/// Canonical dual through an explicit inverse, for use as an oracle.
fn oracle_canonical_dual(f: &VectorFrame) -> CMatrix {
    let s = f.vectors() * f.vectors().adjoint();
    s.try_inverse().expect("frame operator invertible") * f.vectors()
}

fn normalized_operator(v: &CMatrix) -> CMatrix {
    let mut u = v.clone();
    for mut c in u.column_iter_mut() {
        let n = c.norm();
        c.unscale_mut(n);
    }
    &u * u.adjoint()
}

#[test]
fn criterion_07_vector_frames() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sandwich_violations = 0;
    for _ in 0..100 {
        let n = rng.random_range(1..=8);
        let count = n + rng.random_range(0..=6);
        let field = random_field(&mut rng);
        let f = random_vector_frame(&mut rng, n, count, field);
        let s = dual_redundancy_sandwich(&f).unwrap();
        let (slo, shi) = eigen_extremes(&(f.vectors() * f.vectors().adjoint()));
        let k = shi / slo;
        let (rlo, rhi) = eigen_extremes(&normalized_operator(f.vectors()));
        let (dlo, dhi) = eigen_extremes(&normalized_operator(&oracle_canonical_dual(&f)));
        let eps = 1e-9;
        let inside = |r: f64| r >= (1.0 - eps) / (k * k) && r <= k * k * (1.0 + eps);
        if !(s.holds && inside(dlo / rlo) && inside(dhi / rhi)) {
            sandwich_violations += 1;
        }
    }

    // tight frames: canonical dual is Φ/A, and CΦ is a dual; non-tight: no constant works
    let mut tight_failures = 0;
    for _ in 0..50 {
        let n = rng.random_range(1..=6);
        let count = n + rng.random_range(0..=5);
        let a = rng.random_range(0.5..4.0);
        let field = random_field(&mut rng);
        let f = random_tight_vector_frame(&mut rng, n, count, field, a);
        let dual = canonical_dual(&f).unwrap();
        let scaled = f.vectors().unscale(a);
        let c = tight_dual_constant(&f).unwrap();
        let forward = (dual.vectors() - &scaled).iter().all(|z| z.norm() <= 1e-10);
        let converse = c.is_some_and(|c| (c - 1.0 / a).abs() <= 1e-9 / a);
        if !(forward && converse) {
            tight_failures += 1;
        }
    }
    let mut non_tight_failures = 0;
    for _ in 0..50 {
        let n = rng.random_range(2..=6);
        let count = n + rng.random_range(0..=5);
        let field = random_field(&mut rng);
        let f = random_vector_frame(&mut rng, n, count, field);
        let (lo, hi) = eigen_extremes(&(f.vectors() * f.vectors().adjoint()));
        if hi - lo <= 1e-6 * hi {
            continue;
        }
        // any C: ‖I − C·S‖ ≥ (hi − lo)/(hi + lo) > 0, so the library must refuse
        if tight_dual_constant(&f).unwrap().is_some() {
            non_tight_failures += 1;
        }
    }

    let mut norm_violations = 0;
    for _ in 0..100 {
        let n = rng.random_range(1..=6);
        let count = n + rng.random_range(0..=5);
        let field = random_field(&mut rng);
        let f = random_vector_frame(&mut rng, n, count, field);
        let eta = gaussian_matrix(&mut rng, n, count, field);
        let dual = alternate_dual(&f, &eta).unwrap();
        let x = random_unit_vector(n, field, &mut rng);
        let check = check_norm_inequality(&f, &dual, &x).unwrap();
        let lhs = (oracle_canonical_dual(&f).adjoint() * &x).norm();
        let rhs = (dual.vectors().adjoint() * &x).norm();
        if !(check.holds && lhs <= rhs + 1e-9) {
            norm_violations += 1;
        }
    }

    let ok = sandwich_violations == 0 && tight_failures == 0 && non_tight_failures == 0 && norm_violations == 0;
    verdict(
        "7",
        ok,
        &format!(
            "dual sandwich violations {sandwich_violations}/100, tight-dual failures {tight_failures}/50 tight and {non_tight_failures}/50 non-tight, \
             norm inequality violations {norm_violations}/100"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_08_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let shape = FrameShape::default();

    let mut additivity_failures = 0;
    for _ in 0..100 {
        let f = random_fusion_frame(&mut rng, &shape);
        let locals = random_local_frames(&mut rng, &f, true);
        let system = build_system(&f, &locals).unwrap();
        for x in unit_vectors(f.ambient_dim(), f.field(), 10, rng.random()) {
            let a = check_local_additivity(&system, &x).unwrap();
            if !(a.orthogonal_locals && a.equal && (a.fusion_value - a.local_sum).abs() <= 1e-9) {
                additivity_failures += 1;
            }
        }
    }

    // three unit vectors at 0°, 45° and 90° in a plane
    let plane = FusionFrame::from_members(
        2,
        Field::Real,
        vec![Member {
            subspace: Subspace::from_span(&CMatrix::identity(2, 2), Field::Real, &tol()).unwrap(),
            weight: 1.0,
        }],
        tol(),
    )
    .unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let locals = vec![from_real(&DMatrix::from_column_slice(2, 3, &[1.0, 0.0, h, h, 0.0, 1.0]))];
    let system = build_system(&plane, &locals).unwrap();
    let x = CVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    let counter = check_local_additivity(&system, &x).unwrap();
    let counter_gap = (counter.fusion_value - counter.local_sum).abs();

    let mut inconsistent = 0;
    let mut both_true = 0;
    for i in 0..100 {
        let f = if i % 2 == 0 {
            let n = rng.random_range(1..=10);
            let layers = rng.random_range(1..=3);
            let field = random_field(&mut rng);
            random_parseval_fusion_frame(&mut rng, n, field, layers)
        } else {
            random_fusion_frame(&mut rng, &shape)
        };
        let locals = random_parseval_local_frames(&mut rng, &f);
        let p = parseval_equivalences(&build_system(&f, &locals).unwrap()).unwrap();
        if !p.consistent || p.flattening_gap > 1e-12 {
            inconsistent += 1;
        }
        if p.global_parseval && p.fusion_parseval {
            both_true += 1;
        }
    }

    let ok = additivity_failures == 0 && !counter.orthogonal_locals && counter_gap > 1e-3 && inconsistent == 0 && both_true >= 50;
    verdict(
        "8",
        ok,
        &format!(
            "additivity failures {additivity_failures}/1000, counterexample gap {counter_gap:.3}, \
             inconsistent Parseval checks {inconsistent}/100 ({both_true} Parseval on both sides)"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_09_monte_carlo_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let shape = FrameShape::default();
    let mut outside = Vec::new();
    let mut far = Vec::new();
    let mut small = 0;
    for i in 0..50 {
        let f = random_fusion_frame(&mut rng, &shape);
        let (lo, hi) = redundancy_range(&f).unwrap();
        let s = sampled_redundancy(&f, 100_000, 900 + i, Execution::default());
        if s.min < lo - 1e-3 * hi || s.max > hi * (1.0 + 1e-9) {
            outside.push(i);
        }
        if f.ambient_dim() <= 6 {
            small += 1;
            let gap = (hi - s.max) / hi;
            if gap > 0.02 {
                far.push(format!("#{i} n={} {:?} gap {:.3}", f.ambient_dim(), f.field(), gap));
            }
        }
    }
    let ok = outside.is_empty() && far.is_empty();
    verdict(
        "9",
        ok,
        &format!(
            "samples outside the range: {outside:?}; frames with n <= 6 whose sampled max misses R+ by more than 2%: {}/{small} {far:?}",
            far.len()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_10_lines_match_vector_frames() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut gap: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(1..=8);
        let count = n + rng.random_range(0..=6);
        let field = random_field(&mut rng);
        let phi = random_vector_frame(&mut rng, n, count, field);
        let members = phi
            .vectors()
            .column_iter()
            .map(|c| Member {
                subspace: Subspace::from_span(&CMatrix::from_columns(&[c.into_owned()]), field, &tol()).unwrap(),
                weight: rng.random_range(0.5..2.0),
            })
            .collect();
        let lines = FusionFrame::from_members(n, field, members, tol()).unwrap();
        for x in unit_vectors(n, field, 20, rng.random()) {
            let a = redundancy_function(&phi, &x).unwrap();
            let b = redundancy_at(&lines, &x).unwrap();
            let c = projection_energy(&lines, &x);
            gap = gap.max((a - b).abs()).max((a - c).abs());
        }
        let (vlo, vhi) = vector_redundancy_range(&phi).unwrap();
        let (flo, fhi) = redundancy_range(&lines).unwrap();
        gap = gap.max((vlo - flo).abs()).max((vhi - fhi).abs());
    }
    let ok = gap <= 1e-12;
    verdict("10", ok, &format!("largest difference {gap:.2e}"));
    assert!(ok);
}
