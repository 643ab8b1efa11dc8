//! Built-in coordinate-subspace families used as golden inputs.

use std::fmt;
use std::str::FromStr;

use crate::error::{FrameError, Result};
use crate::fusion::{build_fusion_frame, FusionFrame};
use crate::numerics::{CMatrix, Field, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Example {
    /// `span{e₁}` repeated `n+1` times followed by `span{e₂}, …, span{eₙ}`; unit weights.
    Localized,
    /// Every coordinate line twice; unit weights.
    Uniform,
    /// The coordinate lines once each.
    OrthonormalBasis,
    /// Four coordinate subspaces of `C⁵` weighted into a 2-tight family.
    TwoTight,
}

impl Example {
    pub const ALL: [Example; 4] = [
        Example::Localized,
        Example::Uniform,
        Example::OrthonormalBasis,
        Example::TwoTight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Example::Localized => "7.1",
            Example::Uniform => "7.1-V",
            Example::OrthonormalBasis => "7.2",
            Example::TwoTight => "7.3",
        }
    }

    pub fn field(self) -> Field {
        match self {
            Example::TwoTight => Field::Complex,
            _ => Field::Real,
        }
    }

    /// Ambient dimension used when none is requested.
    pub fn default_dim(self) -> usize {
        match self {
            Example::TwoTight => 5,
            _ => 4,
        }
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Example {
    type Err = FrameError;

    fn from_str(s: &str) -> Result<Self> {
        Example::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| FrameError::UnknownExample(s.to_string()))
    }
}

/// One member: coordinate indices (0-based) spanning it and its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateMember {
    pub coordinates: Vec<usize>,
    pub weight: f64,
}

/// Member list of a catalog family in dimension `n`.
pub fn example_members(example: Example, n: usize) -> Result<Vec<CoordinateMember>> {
    let line = |k: usize| CoordinateMember {
        coordinates: vec![k],
        weight: 1.0,
    };
    match example {
        Example::TwoTight => {
            if n != 5 {
                return Err(FrameError::InvalidExampleDimension {
                    name: example.name().into(),
                    requirement: "n = 5",
                });
            }
            let light = (2.0f64 / 3.0).sqrt();
            let heavy = 2.0 * 3.0f64.sqrt() / 3.0;
            Ok(vec![
                CoordinateMember { coordinates: vec![0, 1, 2], weight: light },
                CoordinateMember { coordinates: vec![1, 2, 3], weight: heavy },
                CoordinateMember { coordinates: vec![3, 4], weight: light },
                CoordinateMember { coordinates: vec![0, 4], weight: heavy },
            ])
        }
        _ if n < 2 => Err(FrameError::InvalidExampleDimension {
            name: example.name().into(),
            requirement: "n ≥ 2",
        }),
        Example::Localized => Ok(std::iter::repeat_n(0, n + 1)
            .chain(1..n)
            .map(line)
            .collect()),
        Example::Uniform => Ok((0..n).flat_map(|k| [line(k), line(k)]).collect()),
        Example::OrthonormalBasis => Ok((0..n).map(line).collect()),
    }
}

/// Spans as `n × dᵢ` matrices of coordinate vectors, paired with weights.
pub fn example_spans(example: Example, n: usize) -> Result<Vec<(CMatrix, f64)>> {
    Ok(example_members(example, n)?
        .into_iter()
        .map(|m| {
            let mut span = CMatrix::zeros(n, m.coordinates.len());
            for (j, &k) in m.coordinates.iter().enumerate() {
                span[(k, j)] = 1.0.into();
            }
            (span, m.weight)
        })
        .collect())
}

pub fn example_frame(example: Example, n: usize, tol: Tolerance) -> Result<FusionFrame> {
    build_fusion_frame(&example_spans(example, n)?, n, example.field(), tol)
}
