//! Haar-uniform sampling on the unit sphere with reproducible, schedule-independent streams.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::exec::{map_range, Execution};
use crate::numerics::{CVector, Field};

/// Samples per independent RNG stream.
const CHUNK: usize = 1024;

/// Normalized i.i.d. standard Gaussian coordinates.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, field: Field, rng: &mut R) -> CVector {
    loop {
        let v = random_gaussian_vector(n, field, rng);
        let norm = v.norm();
        if norm > 1e-300 {
            return v.unscale(norm);
        }
    }
}

pub fn random_gaussian_vector<R: Rng + ?Sized>(n: usize, field: Field, rng: &mut R) -> CVector {
    CVector::from_iterator(
        n,
        (0..n).map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = match field {
                Field::Real => 0.0,
                Field::Complex => rng.sample(StandardNormal),
            };
            Complex64::new(re, im)
        }),
    )
}

fn stream(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// `count` unit vectors drawn from the stream identified by `seed`.
pub fn unit_vectors(n: usize, field: Field, count: usize, seed: u64) -> Vec<CVector> {
    let chunks = count.div_ceil(CHUNK);
    (0..chunks)
        .flat_map(|c| {
            let mut rng = stream(seed, c);
            let len = CHUNK.min(count - c * CHUNK);
            (0..len)
                .map(|_| random_unit_vector(n, field, &mut rng))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Extremes of a function over sampled unit vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledRange {
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

/// Evaluates `f` at `samples` Haar-random unit vectors and records min and max.
/// The result depends only on `seed`, not on the execution strategy.
pub fn sample_extremes<F>(
    n: usize,
    field: Field,
    samples: usize,
    seed: u64,
    exec: Execution,
    f: F,
) -> SampledRange
where
    F: Fn(&CVector) -> f64 + Sync + Send,
{
    let chunks = samples.div_ceil(CHUNK);
    let partial = map_range(exec, 0..chunks, |c| {
        let mut rng = stream(seed, c);
        let len = CHUNK.min(samples - c * CHUNK);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for _ in 0..len {
            let x = random_unit_vector(n, field, &mut rng);
            let value = f(&x);
            lo = lo.min(value);
            hi = hi.max(value);
        }
        (lo, hi)
    });
    let (min, max) = partial.into_iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY),
        |(a, b), (lo, hi)| (a.min(lo), b.max(hi)),
    );
    SampledRange { min, max, samples }
}
