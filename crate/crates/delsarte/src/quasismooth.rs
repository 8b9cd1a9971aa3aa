//! Quasismoothness of hypersurfaces cut out by a list of monomials with
//! generic coefficients.
//!
//! For every nonempty set `I` of coordinates, the affine cone must be smooth
//! along the stratum where exactly the coordinates in `I` are nonzero. With
//! generic coefficients this holds if either
//!
//! * (a) some monomial is supported inside `I`, or
//! * (b) there are at least `|I|` variables `j` outside `I` such that some
//!   monomial is `x_j` times a monomial supported in `I`.
//!
//! Since any `|I|` distinct such `j` work, condition (b) reduces to counting
//! the candidates.

use thiserror::Error;

use crate::potential::Monomial;

/// Default cap on the variable count for the `2^k` subset enumeration.
pub const DEFAULT_VARIABLE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QsError {
    #[error("{variables} variables exceed the subset enumeration limit {limit}")]
    TooManyVariables { variables: usize, limit: usize },
    #[error("monomial list is empty")]
    Empty,
    #[error("monomials use {len} and {expected} variables; all monomials must agree")]
    MixedVariableCounts { len: usize, expected: usize },
}

/// Outcome of a quasismoothness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QsWitness {
    pub verdict: bool,
    /// Lexicographically smallest failing coordinate set, if any.
    pub failing_subset: Option<Vec<usize>>,
    /// For each set `I` that needed condition (b), one valid set `J` of
    /// `|I|` outside variables, sorted by `I`.
    pub condition_b_sets: Vec<(Vec<usize>, Vec<usize>)>,
}

fn support_mask(m: &Monomial) -> u64 {
    m.support().fold(0u64, |acc, j| acc | (1u64 << j))
}

fn mask_to_indices(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&j| mask & (1u64 << j) != 0).collect()
}

fn check_lengths(monomials: &[Monomial]) -> Result<usize, QsError> {
    let Some(first) = monomials.first() else {
        return Err(QsError::Empty);
    };
    let n = first.num_variables();
    for m in monomials {
        if m.num_variables() != n {
            return Err(QsError::MixedVariableCounts {
                len: m.num_variables(),
                expected: n,
            });
        }
    }
    Ok(n)
}

/// Whether the stratum with nonzero coordinates exactly `I` lies in the base
/// locus, i.e. no monomial is supported inside `I`.
pub fn stratum_in_base_locus(monomials: &[Monomial], stratum: &[usize]) -> bool {
    let mut inside = vec![false; monomials.first().map_or(0, |m| m.num_variables())];
    for &i in stratum {
        inside[i] = true;
    }
    !monomials.iter().any(|m| m.support().all(|j| inside[j]))
}

/// Quasismoothness with the default variable limit.
pub fn check_quasismooth(monomials: &[Monomial]) -> Result<QsWitness, QsError> {
    check_quasismooth_with_limit(monomials, DEFAULT_VARIABLE_LIMIT)
}

/// Quasismoothness of the hypersurface defined by the monomials with generic
/// coefficients, enumerating all `2^k - 1` nonempty coordinate sets.
pub fn check_quasismooth_with_limit(
    monomials: &[Monomial],
    limit: usize,
) -> Result<QsWitness, QsError> {
    let n = check_lengths(monomials)?;
    if n > limit || n > 63 {
        return Err(QsError::TooManyVariables {
            variables: n,
            limit: limit.min(63),
        });
    }

    let supports: Vec<u64> = monomials.iter().map(support_mask).collect();
    let one = crate::exactlin::Int::from(1);

    let mut failing: Option<Vec<usize>> = None;
    let mut condition_b_sets = Vec::new();
    for mask in 1u64..(1u64 << n) {
        if supports.iter().any(|s| s & !mask == 0) {
            continue;
        }
        let size = mask.count_ones() as usize;
        let mut candidates = Vec::new();
        for j in (0..n).filter(|&j| mask & (1u64 << j) == 0) {
            let jbit = 1u64 << j;
            let found = monomials
                .iter()
                .zip(&supports)
                .any(|(m, s)| s & jbit != 0 && s & !(mask | jbit) == 0 && *m.exponent(j) == one);
            if found {
                candidates.push(j);
            }
        }
        let i_set = mask_to_indices(mask, n);
        if candidates.len() >= size {
            candidates.truncate(size);
            condition_b_sets.push((i_set, candidates));
        } else if failing.as_ref().is_none_or(|f| i_set < *f) {
            failing = Some(i_set);
        }
    }
    condition_b_sets.sort();
    Ok(QsWitness {
        verdict: failing.is_none(),
        failing_subset: failing,
        condition_b_sets,
    })
}
