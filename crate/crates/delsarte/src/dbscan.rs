//! Weight-system database scanning.
//!
//! A weight-system file lists candidate ambient spaces; for each system this
//! module enumerates every Delsarte potential it supports, keeps the ones
//! whose hypersurface is a well-formed quasismooth Calabi-Yau, and ranks the
//! resulting quotients by minimal log discrepancy. The best candidates can be
//! re-verified with the toric oracle.

use std::cmp::Ordering;
use std::fmt;
use std::path::Path;

use num::{Integer, One, Signed, Zero};
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::bhk::{certify, mld_even_subquotient, mld_formula};
use crate::exactlin::{Int, Rat};
use crate::oracle::{mld_oracle, GroupMode, OracleOptions, StrataMode, DEFAULT_ELEMENT_BOUND};
use crate::potential::{serialize_potential, validate_delsarte, AtomKind, Monomial, Potential};
use crate::quasismooth::DEFAULT_VARIABLE_LIMIT;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("line {line}: expected weights and a degree, got {got:?}")]
    MalformedLine { line: usize, got: String },
    #[error("line {line}: {token:?} is not a decimal integer")]
    BadInteger { line: usize, token: String },
    #[error("line {line}: weight {value} is not positive")]
    NonPositiveWeight { line: usize, value: Int },
    #[error("line {line}: degree {value} is not positive")]
    NonPositiveDegree { line: usize, value: Int },
    #[error("line {line}: weights {weights:?} have gcd {gcd}, expected 1")]
    ImprimitiveWeights {
        line: usize,
        weights: Vec<Int>,
        gcd: Int,
    },
    #[error("line {line}: weights sum to {sum} but the degree is {degree}")]
    DegreeMismatch { line: usize, sum: Int, degree: Int },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

/// Positive weights with gcd 1 together with a positive degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    pub weights: Vec<Int>,
    pub degree: Int,
}

impl WeightSystem {
    pub fn num_variables(&self) -> usize {
        self.weights.len()
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, "; {})", self.degree)
    }
}

/// Parses weight systems from text, one per data line.
///
/// `#` starts a comment running to the end of the line. Each data line holds
/// the weights followed by the degree, whitespace-separated. Weights must be
/// positive with gcd 1; with `cy_only` they must also sum to the degree.
/// Line numbers in errors are 1-based.
pub fn parse_weight_systems(text: &str, cy_only: bool) -> Result<Vec<WeightSystem>, ScanError> {
    let mut out = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let data = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = data.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() < 2 {
            return Err(ScanError::MalformedLine {
                line,
                got: data.trim().to_string(),
            });
        }
        let mut values = Vec::with_capacity(tokens.len());
        for token in tokens {
            let value: Int = token.parse().map_err(|_| ScanError::BadInteger {
                line,
                token: token.to_string(),
            })?;
            values.push(value);
        }
        let degree = values.pop().expect("at least two tokens");
        let weights = values;
        for w in &weights {
            if !w.is_positive() {
                return Err(ScanError::NonPositiveWeight {
                    line,
                    value: w.clone(),
                });
            }
        }
        if !degree.is_positive() {
            return Err(ScanError::NonPositiveDegree {
                line,
                value: degree,
            });
        }
        let gcd = weights.iter().fold(Int::zero(), |acc, w| acc.gcd(w));
        if !gcd.is_one() {
            return Err(ScanError::ImprimitiveWeights { line, weights, gcd });
        }
        if cy_only {
            let sum: Int = weights.iter().sum();
            if sum != degree {
                return Err(ScanError::DegreeMismatch { line, sum, degree });
            }
        }
        out.push(WeightSystem { weights, degree });
    }
    Ok(out)
}

/// Reads a weight-system file; see [`parse_weight_systems`] for the format.
pub fn load_weight_systems(path: &Path, cy_only: bool) -> Result<Vec<WeightSystem>, ScanError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScanError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_weight_systems(&text, cy_only)
}

/// All Delsarte potentials a weight system supports, in a fixed order.
///
/// Variable `i` contributes one monomial of the system's degree `d`: a pure
/// power `x_i^b` with `b * a_i = d`, or a pointed power `x_i^b * x_j` with
/// `b * a_i + a_j = d`, always with `b >= 2`. Each variable may absorb at
/// most one pointer. The search tries the pure monomial first and pointed
/// monomials by ascending target, so reruns produce the same list; every
/// admissible assignment has an invertible exponent matrix in normal form,
/// but the result is still validated before being returned.
pub fn enumerate_delsarte(ws: &WeightSystem) -> Vec<Potential> {
    let dim = ws.num_variables();
    let two = Int::from(2);
    let mut choices: Vec<Vec<(Int, Option<usize>)>> = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut per_var = Vec::new();
        let (q, r) = ws.degree.div_rem(&ws.weights[i]);
        if r.is_zero() && q >= two {
            per_var.push((q, None));
        }
        for j in 0..dim {
            if j == i {
                continue;
            }
            let (q, r) = (&ws.degree - &ws.weights[j]).div_rem(&ws.weights[i]);
            if r.is_zero() && q >= two {
                per_var.push((q, Some(j)));
            }
        }
        if per_var.is_empty() {
            return Vec::new();
        }
        choices.push(per_var);
    }

    let mut out = Vec::new();
    let mut picked = vec![0usize; dim];
    let mut pointed_at = vec![false; dim];
    extend_assignment(&choices, 0, &mut picked, &mut pointed_at, &mut out);
    out
}

fn extend_assignment(
    choices: &[Vec<(Int, Option<usize>)>],
    level: usize,
    picked: &mut [usize],
    pointed_at: &mut [bool],
    out: &mut Vec<Potential>,
) {
    let dim = choices.len();
    if level == dim {
        let monomials: Vec<Monomial> = (0..dim)
            .map(|i| {
                let (b, target) = &choices[i][picked[i]];
                let mut pairs = vec![(i, b.clone())];
                if let Some(j) = target {
                    pairs.push((*j, Int::one()));
                }
                Monomial::from_pairs(dim, &pairs).expect("enumerated indices are in range")
            })
            .collect();
        let potential = Potential::new(monomials).expect("one monomial per variable");
        if validate_delsarte(&potential).is_ok() {
            out.push(potential);
        }
        return;
    }
    for index in 0..choices[level].len() {
        let target = choices[level][index].1;
        if let Some(j) = target {
            if pointed_at[j] {
                continue;
            }
            pointed_at[j] = true;
        }
        picked[level] = index;
        extend_assignment(choices, level + 1, picked, pointed_at, out);
        if let Some(j) = target {
            pointed_at[j] = false;
        }
    }
}

/// Which quotient family a scan ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    /// Every certified candidate, as the pair quotient by the full induced
    /// torus automorphisms.
    Pair,
    /// Only candidates whose quotient is itself a variety: single loops under
    /// the full induced automorphisms, and squared-variable-plus-loop
    /// potentials under the index-two subgroup.
    Variety,
}

/// Which quotient construction produced a candidate's mld.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateTag {
    PairAutT,
    VarietyLoop,
    VarietyEvenSubgroup,
}

impl CandidateTag {
    /// Stable label used in JSON output.
    pub fn label(self) -> &'static str {
        match self {
            CandidateTag::PairAutT => "pairAutT",
            CandidateTag::VarietyLoop => "varietyLoop",
            CandidateTag::VarietyEvenSubgroup => "varietyEvenSubgroup",
        }
    }

    fn oracle_mode(self) -> GroupMode {
        match self {
            CandidateTag::PairAutT | CandidateTag::VarietyLoop => GroupMode::AutT,
            CandidateTag::VarietyEvenSubgroup => GroupMode::EvenSubgroup,
        }
    }
}

/// One certified candidate on a weight system.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub potential: Potential,
    pub mld: Rat,
    pub tag: CandidateTag,
}

/// Scan configuration.
#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub mode: ScanMode,
    /// Re-verify the best candidate of this many leading records with the
    /// toric oracle.
    pub check_top: usize,
    /// Fixed worker count; `None` lets the thread pool decide. The ranking
    /// does not depend on this.
    pub jobs: Option<usize>,
    /// Group-size ceiling for the oracle cross-check.
    pub element_bound: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            mode: ScanMode::Pair,
            check_top: 1,
            jobs: None,
            element_bound: DEFAULT_ELEMENT_BOUND,
        }
    }
}

/// Scan result for one weight system.
#[derive(Debug, Clone)]
pub struct ScanRecord {
    pub system: WeightSystem,
    /// Certified candidates sorted by mld, then by exponent matrix.
    pub candidates: Vec<Candidate>,
    /// The first entry of `candidates`.
    pub best: Option<Candidate>,
    /// The first problem hit while processing this system, if any.
    pub error: Option<String>,
    /// Whether the toric oracle re-verified the best candidate.
    pub oracle_checked: bool,
}

impl ScanRecord {
    /// JSON form with sorted keys; every number is a decimal or `p/q` string.
    pub fn to_json(&self) -> serde_json::Value {
        let candidate = |c: &Candidate| {
            json!({
                "potential": serialize_potential(&c.potential),
                "mld": c.mld.to_string(),
                "tag": c.tag.label(),
            })
        };
        json!({
            "weights": self.system.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "degree": self.system.degree.to_string(),
            "candidates": self.candidates.iter().map(candidate).collect::<Vec<_>>(),
            "best": self.best.as_ref().map(candidate),
            "error": self.error,
            "oracleChecked": self.oracle_checked,
        })
    }
}

fn evaluate_system(ws: &WeightSystem, mode: ScanMode) -> ScanRecord {
    if ws.num_variables() > DEFAULT_VARIABLE_LIMIT {
        return ScanRecord {
            system: ws.clone(),
            candidates: Vec::new(),
            best: None,
            error: Some(format!(
                "{} variables exceed the supported limit of {DEFAULT_VARIABLE_LIMIT}",
                ws.num_variables()
            )),
            oracle_checked: false,
        };
    }
    let mut keyed: Vec<(Rat, Vec<Int>, Candidate)> = Vec::new();
    let mut error = None;
    for potential in enumerate_delsarte(ws) {
        let cert = match certify(&potential) {
            Ok(cert) => cert,
            Err(e) => {
                if error.is_none() {
                    error = Some(format!("{}: {e}", serialize_potential(&potential)));
                }
                continue;
            }
        };
        if !cert.is_complete() {
            continue;
        }
        let tagged = match mode {
            ScanMode::Pair => Some((mld_formula(&cert), CandidateTag::PairAutT)),
            ScanMode::Variety => {
                if cert.atoms.len() == 1 && cert.atoms[0].kind == AtomKind::Loop {
                    Some((mld_formula(&cert), CandidateTag::VarietyLoop))
                } else if cert.even_shape().is_some() {
                    Some((
                        mld_even_subquotient(&cert),
                        CandidateTag::VarietyEvenSubgroup,
                    ))
                } else {
                    None
                }
            }
        };
        let Some((mld, tag)) = tagged else { continue };
        let mld = mld.expect("complete certificate admits the formula");
        let key: Vec<Int> = cert
            .exponent_matrix
            .matrix()
            .rows()
            .flat_map(|row| row.iter().cloned())
            .collect();
        keyed.push((
            mld.clone(),
            key,
            Candidate {
                potential,
                mld,
                tag,
            },
        ));
    }
    keyed.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
    let candidates: Vec<Candidate> = keyed.into_iter().map(|(_, _, c)| c).collect();
    let best = candidates.first().cloned();
    ScanRecord {
        system: ws.clone(),
        candidates,
        best,
        error,
        oracle_checked: false,
    }
}

fn check_with_oracle(record: &mut ScanRecord, element_bound: u64) {
    let Some(best) = record.best.clone() else {
        return;
    };
    let cert = match certify(&best.potential) {
        Ok(cert) => cert,
        Err(e) => {
            record.error = Some(format!("oracle check: {e}"));
            return;
        }
    };
    let options = OracleOptions {
        mode: best.tag.oracle_mode(),
        strata: StrataMode::Exhaustive,
        element_bound,
    };
    match mld_oracle(&cert, &options) {
        Ok(report) if report.value == best.mld => record.oracle_checked = true,
        Ok(report) => {
            record.error = Some(format!(
                "oracle disagrees: formula {} vs oracle {}",
                best.mld, report.value
            ));
        }
        Err(e) => {
            record.error = Some(format!("oracle check: {e}"));
        }
    }
}

/// Evaluates every weight system and ranks the records by best mld.
///
/// Per-system failures never abort the scan; they are reported in the
/// record's error note. Records that produced no candidate sort after all
/// records that did, and ties keep input order, so the ranking is
/// deterministic and independent of the worker count. The leading
/// `check_top` records are then re-verified with the toric oracle.
pub fn scan_rank(systems: &[WeightSystem], options: &ScanOptions) -> Vec<ScanRecord> {
    let evaluate = || -> Vec<ScanRecord> {
        systems
            .par_iter()
            .map(|ws| evaluate_system(ws, options.mode))
            .collect()
    };
    let mut records = match options.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("worker pool")
            .install(evaluate),
        None => evaluate(),
    };
    records.sort_by(|x, y| match (&x.best, &y.best) {
        (Some(a), Some(b)) => a.mld.cmp(&b.mld),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    });
    for record in records.iter_mut().take(options.check_top) {
        check_with_oracle(record, options.element_bound);
    }
    records
}
