//! Randomized invariants. Each case draws a seed and builds its inputs from a
//! ChaCha8 stream, so failures shrink to a single reproducible seed.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ffk_core::document::FrameDocument;
use ffk_core::duality::{alternate_dual_bounds, canonical_dual_fusion, verify_alternate_dual};
use ffk_core::fusion::{
    apply_operator, classify, excess, frame_bounds, fusion_frame_operator, is_minimal,
    max_robust_erasures_with, redundancy_at, redundancy_range, sampled_redundancy, union,
    weighted_energy, ErasureSearch, FusionFrame,
};
use ffk_core::numerics::{hermitian_eigen, hermitian_eigenvalues, max_abs_diff, CMatrix, Field};
use ffk_core::random::{
    gaussian_matrix, random_alternate_dual, random_field, random_fusion_frame,
    random_fusion_frame_in, random_orthogonal_decomposition, random_parseval_fusion_frame,
    random_tight_vector_frame, random_unitary, FrameShape,
};
use ffk_core::sampling::{random_unit_vector, unit_vectors};
use ffk_core::systems::orthonormal_flattened_operator;
use ffk_core::vector_frames::canonical_dual;
use ffk_core::{Execution, Tolerance};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn frame(seed: u64) -> (ChaCha8Rng, FusionFrame) {
    let mut r = rng(seed);
    let f = random_fusion_frame(&mut r, &FrameShape::default());
    (r, f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn redundancy_is_the_spectral_quadratic_form(seed in any::<u64>()) {
        let (_, f) = frame(seed);
        let (values, vectors) = hermitian_eigen(&fusion_frame_operator(&f, true)).unwrap();
        for x in unit_vectors(f.ambient_dim(), f.field(), 20, seed) {
            let expansion: f64 = values
                .iter()
                .zip(vectors.column_iter())
                .map(|(l, v)| l * v.dotc(&x).norm_sqr())
                .sum();
            prop_assert!((redundancy_at(&f, &x).unwrap() - expansion).abs() <= 1e-10);
        }
    }

    #[test]
    fn values_stay_within_bounds(seed in any::<u64>()) {
        let (_, f) = frame(seed);
        let b = frame_bounds(&f).unwrap();
        let (lo, hi) = redundancy_range(&f).unwrap();
        prop_assert!(b.lower > 0.0 && b.lower <= b.upper);
        prop_assert!(lo <= hi && hi <= f.len() as f64 + 1e-9);
        for x in unit_vectors(f.ambient_dim(), f.field(), 50, seed ^ 1) {
            let e = weighted_energy(&f, &x);
            let r = redundancy_at(&f, &x).unwrap();
            prop_assert!(e >= b.lower * (1.0 - 1e-9) && e <= b.upper * (1.0 + 1e-9));
            prop_assert!(r >= lo - 1e-9 * hi && r <= hi * (1.0 + 1e-9));
        }
    }

    #[test]
    fn average_redundancy_is_dimension_ratio(seed in any::<u64>()) {
        let (_, f) = frame(seed);
        let (lo, hi) = redundancy_range(&f).unwrap();
        let average = f.dims().iter().sum::<usize>() as f64 / f.ambient_dim() as f64;
        prop_assert!(lo <= average + 1e-9 && average <= hi + 1e-9);
    }

    #[test]
    fn uniform_redundancy_iff_normalized_operator_is_scalar(seed in any::<u64>(), tight in any::<bool>()) {
        let mut r = rng(seed);
        let f = if tight {
            let n = r.random_range(1..=8);
            let field = random_field(&mut r);
            let layers = r.random_range(1..=3);
            random_parseval_fusion_frame(&mut r, n, field, layers).scaled_weights(r.random_range(0.5..2.0)).unwrap()
        } else {
            random_fusion_frame(&mut r, &FrameShape::default())
        };
        let s1 = fusion_frame_operator(&f, true);
        let n = f.ambient_dim();
        let c = s1.trace().re / n as f64;
        let scalar = max_abs_diff(&s1, &CMatrix::identity(n, n).scale(c)) <= 1e-9 * c;
        prop_assert_eq!(classify(&f).unwrap().uniform_redundancy, scalar);
        if tight {
            prop_assert!(scalar);
        }
    }

    #[test]
    fn union_is_additive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=8);
        let field = random_field(&mut r);
        let shape = FrameShape::default();
        let a = random_fusion_frame_in(&mut r, n, field, &shape);
        let b = random_fusion_frame_in(&mut r, n, field, &shape);
        let u = union(&a, &b).unwrap();
        for x in unit_vectors(n, field, 20, seed) {
            let sum = redundancy_at(&a, &x).unwrap() + redundancy_at(&b, &x).unwrap();
            prop_assert!((redundancy_at(&u, &x).unwrap() - sum).abs() <= 1e-10);
        }
    }

    #[test]
    fn redundancy_is_unitarily_invariant(seed in any::<u64>()) {
        let (mut r, f) = frame(seed);
        let u = random_unitary(&mut r, f.ambient_dim(), f.field());
        let g = apply_operator(&f, &u).unwrap();
        for x in unit_vectors(f.ambient_dim(), f.field(), 20, seed) {
            let ux = &u * &x;
            prop_assert!((redundancy_at(&g, &ux).unwrap() - redundancy_at(&f, &x).unwrap()).abs() <= 1e-9);
        }
    }

    #[test]
    fn orthogonal_decompositions_have_unit_redundancy(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=10);
        let field = random_field(&mut r);
        let f = random_orthogonal_decomposition(&mut r, n, field, (0.5, 2.0));
        prop_assert!(is_minimal(&f) && f.is_mutually_orthogonal());
        let (lo, hi) = redundancy_range(&f).unwrap();
        prop_assert!((lo - 1.0).abs() <= 1e-10 && (hi - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn excess_and_redundancy_ignore_weight_scaling(seed in any::<u64>(), alpha in 0.1f64..10.0) {
        let (_, f) = frame(seed);
        let g = f.scaled_weights(alpha).unwrap();
        prop_assert_eq!(excess(&f), excess(&g));
        let (lo, hi) = redundancy_range(&f).unwrap();
        let (glo, ghi) = redundancy_range(&g).unwrap();
        prop_assert!((lo - glo).abs() <= 1e-12 && (hi - ghi).abs() <= 1e-12);
        let b = frame_bounds(&f).unwrap();
        let gb = frame_bounds(&g).unwrap();
        prop_assert!((gb.lower - alpha * alpha * b.lower).abs() <= 1e-9 * gb.upper);
    }

    #[test]
    fn excess_counts_surplus_dimensions(seed in any::<u64>()) {
        let (_, f) = frame(seed);
        prop_assert_eq!(excess(&f), f.dims().iter().sum::<usize>() - f.ambient_dim());
    }

    #[test]
    fn random_alternate_duals_reconstruct(seed in any::<u64>()) {
        let (mut r, f) = frame(seed);
        let g = random_alternate_dual(&mut r, &f);
        let cert = verify_alternate_dual(&f, &g).unwrap();
        prop_assert!(cert.is_dual, "residual {}", cert.residual);
        let bounds = alternate_dual_bounds(&f, &g, 200, seed, Execution::Sequential).unwrap();
        prop_assert!(bounds.bounds_hold);
    }

    #[test]
    fn canonical_dual_of_tight_fusion_frame_keeps_subspaces(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=8);
        let field = random_field(&mut r);
        let layers = r.random_range(1..=3);
        let f = random_parseval_fusion_frame(&mut r, n, field, layers);
        let d = canonical_dual_fusion(&f).unwrap();
        for (a, b) in f.members().iter().zip(d.members()) {
            prop_assert!(a.subspace.same_as(&b.subspace));
        }
        prop_assert!(verify_alternate_dual(&f, &d).unwrap().is_dual);
    }

    #[test]
    fn canonical_dual_of_tight_vector_frame_is_rescaled(seed in any::<u64>(), a in 0.25f64..4.0) {
        let mut r = rng(seed);
        let n = r.random_range(1..=6);
        let count = n + r.random_range(0..=4);
        let field = random_field(&mut r);
        let f = random_tight_vector_frame(&mut r, n, count, field, a);
        let d = canonical_dual(&f).unwrap();
        prop_assert!(max_abs_diff(d.vectors(), &f.vectors().unscale(a)) <= 1e-10);
    }

    #[test]
    fn orthonormal_flattening_matches_fusion_operator(seed in any::<u64>()) {
        let (_, f) = frame(seed);
        let gap = max_abs_diff(&orthonormal_flattened_operator(&f), &fusion_frame_operator(&f, false));
        prop_assert!(gap <= 1e-10 * f.bessel_bound().max(1.0));
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let (_, f) = frame(seed);
        let text = FrameDocument::from_frame(&f).to_json();
        let g = FrameDocument::parse(&text).unwrap().to_frame(Tolerance::default()).unwrap();
        prop_assert_eq!(f.weights(), g.weights());
        for (a, b) in f.members().iter().zip(g.members()) {
            prop_assert!(a.subspace.same_as(&b.subspace));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn erasure_search_is_schedule_independent(seed in any::<u64>()) {
        let (_, f) = frame(seed);
        let budget = f.len() - 1;
        let seq = max_robust_erasures_with(&f, budget, ErasureSearch::Exhaustive, Execution::Sequential).unwrap();
        let par = max_robust_erasures_with(&f, budget, ErasureSearch::Exhaustive, Execution::Parallel).unwrap();
        prop_assert_eq!(seq, par);
    }

    #[test]
    fn sampling_is_schedule_independent(seed in any::<u64>()) {
        let (_, f) = frame(seed);
        let seq = sampled_redundancy(&f, 5000, seed, Execution::Sequential);
        let par = sampled_redundancy(&f, 5000, seed, Execution::Parallel);
        prop_assert_eq!(seq, par);
    }

    #[test]
    fn sampled_hermitian_maximum_refines_to_top_eigenvalue(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = gaussian_matrix(&mut r, 6, 6, Field::Complex);
        let h = (&g + g.adjoint()).scale(0.5);
        let values = hermitian_eigenvalues(&h).unwrap();
        let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let bottom = values.iter().copied().fold(f64::INFINITY, f64::min);

        let mut best = random_unit_vector(6, Field::Complex, &mut r);
        let mut best_value = f64::NEG_INFINITY;
        for _ in 0..20_000 {
            let x = random_unit_vector(6, Field::Complex, &mut r);
            let value = (x.adjoint() * &h * &x)[(0, 0)].re;
            prop_assert!(value <= top + 1e-9);
            if value > best_value {
                best_value = value;
                best = x;
            }
        }
        // shifted power iteration from the best sample
        let shifted = &h - CMatrix::identity(6, 6).scale(bottom);
        let mut x = best;
        for _ in 0..5000 {
            let y = &shifted * &x;
            x = y.unscale(y.norm());
        }
        let refined = (x.adjoint() * &h * &x)[(0, 0)].re;
        prop_assert!((refined - top).abs() <= 1e-3, "refined {refined} vs {top}");
    }
}
