//! Erasure of members and robustness certificates.
//!
//! Removing members `J` with `a = Σ_{i∈J} v_i² < A` always leaves a fusion frame
//! with lower bound `A − a` (the weight bound). That condition is sufficient but
//! not necessary, so robustness is certified by the spectrum of the remaining
//! operator and the weight bound is reported alongside.

use serde::{Deserialize, Serialize};

use super::{fusion_frame_operator, FusionFrame, Member};
use crate::error::{FrameError, Result};
use crate::exec::{find_first, Execution};
use crate::numerics::{hermitian_eigenrange, CMatrix};

/// Largest member count searched exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 22;

/// Result of removing a set of members.
#[derive(Debug, Clone, PartialEq)]
pub struct Erasure {
    pub remaining: FusionFrame,
    /// Erased indices, ascending.
    pub erased: Vec<usize>,
    /// `a = Σ_{i∈J} v_i²`
    pub erased_weight: f64,
    /// `A − a` when `a < A`.
    pub guaranteed_lower: Option<f64>,
    /// `λ_min` of the remaining operator.
    pub remaining_lower: f64,
    /// Remaining family is still a fusion frame.
    pub survives: bool,
}

impl Erasure {
    /// The weight bound, when it applies, is respected by the computed spectrum.
    pub fn bound_verified(&self) -> bool {
        self.guaranteed_lower.is_none_or(|g| {
            self.remaining_lower >= g - self.remaining.tolerance().eig_rel
        })
    }
}

/// Removes the members listed in `erased` (0-based).
pub fn erase(frame: &FusionFrame, erased: &[usize]) -> Result<Erasure> {
    let bounds = super::frame_bounds(frame)?;
    let mut drop = vec![false; frame.len()];
    for &index in erased {
        if index >= frame.len() {
            return Err(FrameError::IndexOutOfRange {
                index,
                len: frame.len(),
            });
        }
        if drop[index] {
            return Err(FrameError::DuplicateIndex { index });
        }
        drop[index] = true;
    }
    let members: Vec<Member> = frame
        .members
        .iter()
        .zip(&drop)
        .filter(|(_, &d)| !d)
        .map(|(m, _)| m.clone())
        .collect();
    if members.is_empty() {
        return Err(FrameError::EmptyRemainder);
    }
    let erased_weight: f64 = frame
        .members
        .iter()
        .zip(&drop)
        .filter(|(_, &d)| d)
        .map(|(m, _)| m.weight * m.weight)
        .sum();
    let remaining = FusionFrame::from_members(frame.ambient_dim, frame.field, members, frame.tol)?;
    let mut sorted: Vec<usize> = erased.to_vec();
    sorted.sort_unstable();
    Ok(Erasure {
        erased: sorted,
        erased_weight,
        guaranteed_lower: (erased_weight < bounds.lower).then_some(bounds.lower - erased_weight),
        remaining_lower: remaining.lambda_min(),
        survives: remaining.is_frame(),
        remaining,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ErasureSearch {
    /// Exhaustive up to [`EXHAUSTIVE_LIMIT`] members, greedy beyond.
    #[default]
    Auto,
    Exhaustive,
    /// Adversarial greedy removal. Gives an upper estimate, not a proof.
    Greedy,
}

/// Which argument establishes the certified count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertifyingRule {
    /// Nothing to certify: some single erasure already breaks the frame (or budget 0).
    None,
    /// Every removal of that many members has `a < A`.
    WeightBound,
    /// Verified on the spectrum of every remaining operator.
    Spectral,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessCertificate {
    /// Largest `k ≤ budget` such that removing any `k` members leaves a fusion frame.
    pub certified: usize,
    pub budget: usize,
    /// The count was established by checking every subset.
    pub exhaustive: bool,
    /// Largest `k ≤ budget` whose `k` heaviest weights still sum below `A`.
    pub weight_bound_certified: usize,
    pub rule: CertifyingRule,
    /// A removal of `certified + 1` members that destroys the frame property, if found.
    pub breaking_set: Option<Vec<usize>>,
}

pub fn max_robust_erasures(
    frame: &FusionFrame,
    budget: usize,
    search: ErasureSearch,
) -> Result<RobustnessCertificate> {
    max_robust_erasures_with(frame, budget, search, Execution::default())
}

/// [`max_robust_erasures`] with an explicit execution strategy.
pub fn max_robust_erasures_with(
    frame: &FusionFrame,
    budget: usize,
    search: ErasureSearch,
    exec: Execution,
) -> Result<RobustnessCertificate> {
    let bounds = super::frame_bounds(frame)?;
    let n_members = frame.len();
    let exhaustive = match search {
        ErasureSearch::Exhaustive if n_members > EXHAUSTIVE_LIMIT => {
            return Err(FrameError::TooManyMembers {
                len: n_members,
                max: EXHAUSTIVE_LIMIT,
            })
        }
        ErasureSearch::Exhaustive => true,
        ErasureSearch::Greedy => false,
        ErasureSearch::Auto => n_members <= EXHAUSTIVE_LIMIT,
    };
    let cap = budget.min(n_members - 1);

    let s = fusion_frame_operator(frame, false);
    let parts: Vec<CMatrix> = frame
        .members
        .iter()
        .map(|m| m.subspace.projection().scale(m.weight * m.weight))
        .collect();
    let rank_rel = frame.tol.rank_rel;
    let survives = |removed: &[usize]| -> bool {
        let mut rest = s.clone();
        for &i in removed {
            rest -= &parts[i];
        }
        match hermitian_eigenrange(&rest) {
            Ok((lo, hi)) => hi > 0.0 && lo > rank_rel * hi,
            Err(_) => false,
        }
    };

    let mut certified = 0;
    let mut breaking_set = None;
    if exhaustive {
        for k in 1..=cap {
            let failing = find_first(exec, 0..(1u64 << n_members), |mask| {
                mask.count_ones() as usize == k && !survives(&mask_indices(mask))
            });
            if let Some(mask) = failing {
                breaking_set = Some(mask_indices(mask));
                break;
            }
            certified = k;
        }
        if breaking_set.is_none() && cap < n_members - 1 {
            // report the first breaking set just past the budget, if any
            breaking_set = find_first(exec, 0..(1u64 << n_members), |mask| {
                mask.count_ones() as usize == cap + 1 && !survives(&mask_indices(mask))
            })
            .map(mask_indices);
        }
    } else {
        let mut removed: Vec<usize> = Vec::new();
        while removed.len() < cap {
            let (worst, _) = (0..n_members)
                .filter(|i| !removed.contains(i))
                .map(|i| {
                    let mut trial = removed.clone();
                    trial.push(i);
                    let mut rest = s.clone();
                    for &j in &trial {
                        rest -= &parts[j];
                    }
                    let lo = hermitian_eigenrange(&rest).map(|r| r.0).unwrap_or(0.0);
                    (i, lo)
                })
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("at least one member remains");
            removed.push(worst);
            if !survives(&removed) {
                let mut set = removed.clone();
                set.sort_unstable();
                breaking_set = Some(set);
                break;
            }
            certified = removed.len();
        }
    }

    let weight_bound_certified = weight_bound_count(frame, bounds.lower).min(cap);
    let rule = if certified == 0 {
        CertifyingRule::None
    } else if weight_bound_certified >= certified {
        CertifyingRule::WeightBound
    } else {
        CertifyingRule::Spectral
    };
    Ok(RobustnessCertificate {
        certified,
        budget,
        exhaustive,
        weight_bound_certified,
        rule,
        breaking_set,
    })
}

/// Largest `k` such that the `k` heaviest squared weights sum below `A`.
fn weight_bound_count(frame: &FusionFrame, lower: f64) -> usize {
    let mut w2: Vec<f64> = frame.members.iter().map(|m| m.weight * m.weight).collect();
    w2.sort_by(|a, b| b.total_cmp(a));
    let mut total = 0.0;
    let mut k = 0;
    for w in w2 {
        total += w;
        if total < lower {
            k += 1;
        } else {
            break;
        }
    }
    k
}

fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask & (1u64 << i) != 0).collect()
}
