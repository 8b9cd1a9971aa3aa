//! Independent toric computation of minimal log discrepancies.
//!
//! The ambient quotient of weighted projective space by the induced symmetry
//! group is stratified by the sets of nonvanishing coordinates. Along the
//! stratum with nonvanishing set `I`, the hypersurface quotient is a finite
//! abelian quotient singularity whose group is the stabilizer
//!
//! ```text
//! G_I = { sigma * a + c  mod 1 : sigma rational, c in F, (sigma * a + c)_i = 0 for i in I }
//! ```
//!
//! where `a` is the weight vector and `F` the finite diagonal symmetry group
//! of the chosen mode. The local minimal log discrepancy is the smallest age
//! (sum of the retained fractional coordinates) of a stabilizer element that
//! is nonzero on the retained coordinates, capped at 1; the global value is
//! the minimum over strata.
//!
//! Everything is carried out in exact arithmetic over a common denominator
//! `L = |det A| * lcm(a_i)`: group elements are integer vectors mod `L`, and
//! the torus parameter `sigma` ranges over `(1/L) Z` because each stabilizer
//! congruence `a_i sigma = -c_i mod 1` only has solutions there.
//!
//! This module deliberately shares no mld logic with [`crate::bhk`]: it is
//! the oracle against which the closed formulas are tested.

use std::collections::HashSet;

use num::{Integer, One, Signed, Zero};
use thiserror::Error;

use crate::bhk::Certificate;
use crate::exactlin::{Int, Rat};
use crate::potential::AtomKind;

/// Default cap on the number of explicitly materialized group elements.
pub const DEFAULT_ELEMENT_BOUND: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle requires a Calabi-Yau, well-formed, quasismooth certificate ({reason})")]
    IncompleteCertificate { reason: String },
    #[error("oracle requires at least 3 variables")]
    TooFewVariables,
    #[error("exact scan needs at least {at_least} elements, exceeding the bound {bound}")]
    GroupTooLarge { at_least: u64, bound: u64 },
    #[error("exact arithmetic modulus {modulus} does not fit in 64 bits")]
    ModulusOverflow { modulus: String },
    #[error("group closure produced {got} elements, expected {expected}")]
    ClosureMismatch { got: u64, expected: String },
    #[error("potential is not a squared variable plus a single loop")]
    NotEvenShape,
    #[error("subgroup has index {index} in the full symmetry group, expected 2")]
    EvenIndexNotTwo { index: String },
    #[error("stratum {stratum:?} lies in the base locus but no coordinate is transverse; input is not quasismooth there")]
    NoTransverseCoordinate { stratum: Vec<usize> },
    #[error("stratum {stratum:?} is not a nonempty subset of the variables")]
    InvalidStratum { stratum: Vec<usize> },
}

/// Which diagonal symmetry group the computation quotients by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupMode {
    /// The full diagonal automorphism group of the potential.
    Full,
    /// The induced group: full group modulo the scaling torus part.
    AutT,
    /// The index-two subgroup generated by doubled automorphisms and the
    /// torus part; requires a squared variable plus a single loop.
    EvenSubgroup,
}

/// Which strata the oracle visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrataMode {
    /// All `2^(n+2) - 1` nonempty coordinate sets.
    Exhaustive,
    /// Only the strata that can realize the minimum: two-coordinate strata
    /// whose closures avoid the base locus (both variables carry pure
    /// powers) and single coordinates inside the base locus (the variable's
    /// monomial points at another).
    Remark,
}

#[derive(Debug, Clone)]
pub struct OracleOptions {
    pub mode: GroupMode,
    pub strata: StrataMode,
    pub element_bound: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            mode: GroupMode::AutT,
            strata: StrataMode::Exhaustive,
            element_bound: DEFAULT_ELEMENT_BOUND,
        }
    }
}

/// A diagonal symmetry, written additively: coordinate `i` acts by
/// `exp(2 pi i c_i)` where `c_i` is a rational in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracVector {
    coords: Vec<Rat>,
}

impl FracVector {
    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }
}

impl std::fmt::Display for FracVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A finite diagonal symmetry group, materialized as integer vectors over a
/// common denominator.
///
/// In `Full` mode `elements` lists the whole group. In `AutT` and
/// `EvenSubgroup` modes it lists one representative per coset of the torus
/// subgroup, lexicographically smallest first; the torus generator is kept
/// alongside, and the oracle reintroduces the continuous torus direction
/// analytically.
#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    mode: GroupMode,
    modulus: i64,
    dim: usize,
    degree: i64,
    weights: Vec<i64>,
    elements: Vec<Vec<i64>>,
    generators: Vec<Vec<i64>>,
    jf: Vec<i64>,
}

impl SymmetryGroup {
    pub fn mode(&self) -> GroupMode {
        self.mode
    }

    /// Number of stored elements: the group order in `Full` mode, the number
    /// of torus cosets otherwise.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Order of the torus subgroup, the degree of the weight system.
    pub fn torus_order(&self) -> i64 {
        self.degree
    }

    pub fn elements(&self) -> Vec<FracVector> {
        self.elements.iter().map(|e| self.to_frac(e)).collect()
    }

    pub fn generators(&self) -> Vec<FracVector> {
        self.generators.iter().map(|e| self.to_frac(e)).collect()
    }

    /// Generator of the torus subgroup: the weights divided by the degree.
    pub fn torus_generator(&self) -> FracVector {
        self.to_frac(&self.jf)
    }

    fn to_frac(&self, e: &[i64]) -> FracVector {
        FracVector {
            coords: e
                .iter()
                .map(|&n| Rat::new(Int::from(n), Int::from(self.modulus)))
                .collect(),
        }
    }
}

fn to_i64(x: &Int) -> Option<i64> {
    i64::try_from(x).ok()
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `m`, for `gcd(a, m) = 1`, `m >= 1`.
fn mod_inverse(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a.rem_euclid(m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    (old_s.rem_euclid(m as i128)) as i64
}

/// Merges `s = r1 mod m1` with `s = r2 mod m2`; `None` if incompatible.
fn merge_congruences(r1: i64, m1: i64, r2: i64, m2: i64) -> Option<(i64, i64)> {
    let g = gcd_i64(m1, m2);
    if (r2 - r1) % g != 0 {
        return None;
    }
    let m2g = m2 / g;
    let lcm = (m1 / g) * m2;
    let inv = mod_inverse((m1 / g).rem_euclid(m2g), m2g);
    let k = (((r2 - r1) / g).rem_euclid(m2g) as i128 * inv as i128).rem_euclid(m2g as i128);
    let r = (r1 as i128 + m1 as i128 * k).rem_euclid(lcm as i128) as i64;
    Some((r, lcm))
}

struct OracleContext {
    modulus: i64,
    dim: usize,
    degree: i64,
    weights: Vec<i64>,
}

impl OracleContext {
    fn new(cert: &Certificate) -> Result<Self, OracleError> {
        let dim = cert.potential.num_variables();
        let det = cert.exponent_matrix.determinant().abs();
        let lcm_w = cert
            .charges
            .weights
            .iter()
            .fold(Int::one(), |acc, w| acc.lcm(w));
        let modulus_big = &det * &lcm_w;
        let modulus = to_i64(&modulus_big).ok_or_else(|| OracleError::ModulusOverflow {
            modulus: modulus_big.to_string(),
        })?;
        let weights = cert
            .charges
            .weights
            .iter()
            .map(|w| to_i64(w).expect("weights divide the 64-bit modulus"))
            .collect();
        let degree = to_i64(&cert.charges.degree).expect("degree divides the 64-bit modulus");
        Ok(OracleContext {
            modulus,
            dim,
            degree,
            weights,
        })
    }

    /// A rational as an integer numerator over the common modulus.
    fn numerator(&self, x: &Rat) -> i64 {
        let scaled = x * Rat::from(Int::from(self.modulus));
        debug_assert!(scaled.is_integer());
        let n = scaled.to_integer().mod_floor(&Int::from(self.modulus));
        to_i64(&n).expect("reduced numerator fits")
    }

    /// The torus generator: weights over the degree.
    fn jf_vector(&self) -> Vec<i64> {
        let step = self.modulus / self.degree;
        self.weights
            .iter()
            .map(|&a| (a * step).rem_euclid(self.modulus))
            .collect()
    }

    fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        x.iter()
            .zip(y)
            .map(|(&u, &v)| (u + v) % self.modulus)
            .collect()
    }
}

/// Closure of the generators under addition mod 1, with an element bound.
fn closure(
    ctx: &OracleContext,
    generators: &[Vec<i64>],
    bound: u64,
) -> Result<Vec<Vec<i64>>, OracleError> {
    let zero = vec![0i64; ctx.dim];
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(zero.clone());
    let mut list = vec![zero];
    for g in generators {
        // Smallest t >= 1 with t*g in the current group; the extension
        // multiplies the order by exactly t.
        let mut t = 1u64;
        let mut cur = g.clone();
        while !seen.contains(&cur) {
            t += 1;
            if t * list.len() as u64 > bound {
                return Err(OracleError::GroupTooLarge {
                    at_least: t * list.len() as u64,
                    bound,
                });
            }
            cur = ctx.add(&cur, g);
        }
        let old_len = list.len();
        let mut multiple = g.clone();
        for _ in 1..t {
            for idx in 0..old_len {
                let e = ctx.add(&list[idx], &multiple);
                if seen.insert(e.clone()) {
                    list.push(e);
                }
            }
            multiple = ctx.add(&multiple, g);
        }
    }
    list.sort();
    Ok(list)
}

/// One representative per coset of the cyclic subgroup generated by `jf`,
/// each the lexicographically smallest member of its coset.
fn coset_representatives(
    ctx: &OracleContext,
    sorted_elements: &[Vec<i64>],
    jf: &[i64],
    subgroup_order: i64,
) -> Vec<Vec<i64>> {
    let mut covered: HashSet<Vec<i64>> = HashSet::new();
    let mut reps = Vec::new();
    for e in sorted_elements {
        if covered.contains(e) {
            continue;
        }
        reps.push(e.clone());
        let mut cur = e.clone();
        for _ in 0..subgroup_order {
            covered.insert(cur.clone());
            cur = ctx.add(&cur, jf);
        }
    }
    reps
}

/// Materializes the diagonal symmetry group of the requested mode.
///
/// `Full` and `AutT` close over all columns of the inverse exponent matrix;
/// `EvenSubgroup` closes over the doubled columns together with the torus
/// generator and checks that the result has index 2. The full group must stay
/// within `element_bound` elements in every mode, since the quotient modes
/// dedup cosets of an explicitly computed group.
pub fn symmetry_group(
    cert: &Certificate,
    mode: GroupMode,
    element_bound: u64,
) -> Result<SymmetryGroup, OracleError> {
    let ctx = OracleContext::new(cert)?;
    let det = cert.exponent_matrix.determinant().abs();
    let columns: Vec<Vec<i64>> = (0..ctx.dim)
        .map(|j| {
            cert.inverse
                .column(j)
                .iter()
                .map(|x| ctx.numerator(x))
                .collect()
        })
        .collect();
    let jf = ctx.jf_vector();

    let (generators, expected_order): (Vec<Vec<i64>>, Int) = match mode {
        GroupMode::Full | GroupMode::AutT => (columns, det.clone()),
        GroupMode::EvenSubgroup => {
            if cert.even_shape().is_none() {
                return Err(OracleError::NotEvenShape);
            }
            let mut gens: Vec<Vec<i64>> = columns.iter().map(|c| ctx.add(c, c)).collect();
            gens.push(jf.clone());
            (gens, &det / Int::from(2))
        }
    };

    if expected_order > Int::from(element_bound) {
        return Err(OracleError::GroupTooLarge {
            at_least: u64::try_from(&expected_order).unwrap_or(u64::MAX),
            bound: element_bound,
        });
    }
    let elements = closure(&ctx, &generators, element_bound)?;
    if Int::from(elements.len() as u64) != expected_order {
        if mode == GroupMode::EvenSubgroup {
            let index = det / Int::from(elements.len() as u64);
            return Err(OracleError::EvenIndexNotTwo {
                index: index.to_string(),
            });
        }
        return Err(OracleError::ClosureMismatch {
            got: elements.len() as u64,
            expected: expected_order.to_string(),
        });
    }

    let elements = match mode {
        GroupMode::Full => elements,
        GroupMode::AutT | GroupMode::EvenSubgroup => {
            coset_representatives(&ctx, &elements, &jf, ctx.degree)
        }
    };

    Ok(SymmetryGroup {
        mode,
        modulus: ctx.modulus,
        dim: ctx.dim,
        degree: ctx.degree,
        weights: ctx.weights,
        elements,
        generators,
        jf,
    })
}

/// How a stratum sits relative to the hypersurface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StratumCase {
    /// Some monomial survives on the stratum: the hypersurface meets it and
    /// contributes a transverse coordinate slice.
    MeetsHypersurface,
    /// No monomial survives: the stratum lies in the base locus and the
    /// hypersurface is locally a graph over the coordinate `transverse`.
    BaseLocus { transverse: usize },
}

/// The quotient singularity type along one stratum.
#[derive(Debug, Clone)]
pub struct QuotientSingularity {
    pub stratum: Vec<usize>,
    pub case: StratumCase,
    /// Coordinates whose characters enter the age computation.
    pub retained: Vec<usize>,
    modulus: i64,
    stabilizer: Vec<Vec<i64>>,
}

impl QuotientSingularity {
    /// The stabilizer elements as fractional vectors.
    pub fn stabilizer(&self) -> Vec<FracVector> {
        self.stabilizer
            .iter()
            .map(|e| FracVector {
                coords: e
                    .iter()
                    .map(|&n| Rat::new(Int::from(n), Int::from(self.modulus)))
                    .collect(),
            })
            .collect()
    }

    pub fn stabilizer_order(&self) -> usize {
        self.stabilizer.len()
    }
}

fn row_masks(cert: &Certificate) -> Vec<u32> {
    let m = cert.exponent_matrix.matrix();
    (0..m.dim())
        .map(|i| {
            (0..m.dim()).fold(0u32, |acc, j| {
                if m.entry(i, j).is_zero() {
                    acc
                } else {
                    acc | (1 << j)
                }
            })
        })
        .collect()
}

fn mask_indices(mask: u32, dim: usize) -> Vec<usize> {
    (0..dim).filter(|&j| mask & (1 << j) != 0).collect()
}

/// Smallest transverse coordinate for a base-locus stratum: the least `j`
/// outside the stratum such that some monomial is `x_j` times a monomial
/// supported on the stratum.
fn transverse_coordinate(cert: &Certificate, masks: &[u32], mask: u32) -> Option<usize> {
    let m = cert.exponent_matrix.matrix();
    let dim = m.dim();
    (0..dim).filter(|&j| mask & (1 << j) == 0).find(|&j| {
        let jbit = 1u32 << j;
        (0..dim).any(|i| {
            masks[i] & jbit != 0 && masks[i] & !(mask | jbit) == 0 && m.entry(i, j).is_one()
        })
    })
}

/// Classifies a stratum and computes its retained coordinate mask.
fn classify_stratum(
    cert: &Certificate,
    masks: &[u32],
    mask: u32,
    dim: usize,
) -> Result<(StratumCase, u32, usize), OracleError> {
    let full = if dim == 32 {
        u32::MAX
    } else {
        (1u32 << dim) - 1
    };
    let supported = masks.iter().filter(|&&s| s & !mask == 0).count();
    if supported == 0 {
        let j = transverse_coordinate(cert, masks, mask).ok_or_else(|| {
            OracleError::NoTransverseCoordinate {
                stratum: mask_indices(mask, dim),
            }
        })?;
        Ok((
            StratumCase::BaseLocus { transverse: j },
            !mask & full & !(1u32 << j),
            supported,
        ))
    } else {
        Ok((StratumCase::MeetsHypersurface, !mask & full, supported))
    }
}

/// Visits every stabilizer element of the stratum: for each stored coset
/// representative `c`, all torus parameters `sigma = s / modulus` solving
/// `a_i sigma + c_i = 0 mod 1` for every stratum coordinate `i`.
///
/// With coset representatives modulo the torus subgroup each stabilizer
/// element is produced exactly once; with a `Full` group each is produced
/// once per torus coset, so callers needing set semantics must dedup.
fn for_each_stabilizer(group: &SymmetryGroup, mask: u32, mut f: impl FnMut(&[i64])) {
    let modulus = group.modulus;
    let indices: Vec<usize> = mask_indices(mask, group.dim);
    let mut h = vec![0i64; group.dim];
    for c in &group.elements {
        let mut merged = Some((0i64, 1i64));
        for &i in &indices {
            let a = group.weights[i];
            let gamma = c[i];
            if gamma % a != 0 {
                merged = None;
                break;
            }
            let m = modulus / a;
            let r = (m - gamma / a) % m;
            merged = match merged {
                Some((r0, m0)) => merge_congruences(r0, m0, r, m),
                None => None,
            };
            if merged.is_none() {
                break;
            }
        }
        let Some((r, m)) = merged else { continue };
        let count = modulus / m;
        for t in 0..count {
            let s = r + t * m;
            for k in 0..group.dim {
                h[k] = ((s as i128 * group.weights[k] as i128 + c[k] as i128)
                    .rem_euclid(modulus as i128)) as i64;
            }
            f(&h);
        }
    }
}

/// The quotient singularity of the hypersurface quotient along one stratum.
///
/// The stabilizer is materialized as a sorted, deduplicated element list.
pub fn stratum_singularity(
    cert: &Certificate,
    group: &SymmetryGroup,
    stratum: &[usize],
) -> Result<QuotientSingularity, OracleError> {
    let dim = cert.potential.num_variables();
    if stratum.is_empty() || stratum.iter().any(|&i| i >= dim) {
        return Err(OracleError::InvalidStratum {
            stratum: stratum.to_vec(),
        });
    }
    let mask = stratum.iter().fold(0u32, |acc, &i| acc | (1 << i));
    let masks = row_masks(cert);
    let (case, retained_mask, _) = classify_stratum(cert, &masks, mask, dim)?;
    let mut stabilizer: Vec<Vec<i64>> = Vec::new();
    for_each_stabilizer(group, mask, |h| stabilizer.push(h.to_vec()));
    stabilizer.sort();
    stabilizer.dedup();
    Ok(QuotientSingularity {
        stratum: mask_indices(mask, dim),
        case,
        retained: mask_indices(retained_mask, dim),
        modulus: group.modulus,
        stabilizer,
    })
}

/// Minimal log discrepancy of a single quotient singularity: the smallest
/// stabilizer age over the retained coordinates, capped at 1.
pub fn mld_singularity(qs: &QuotientSingularity) -> Rat {
    let one = Rat::one();
    let mut best: Option<i128> = None;
    for h in &qs.stabilizer {
        let age: i128 = qs.retained.iter().map(|&j| h[j] as i128).sum();
        if age == 0 {
            continue;
        }
        if best.is_none_or(|b| age < b) {
            best = Some(age);
        }
    }
    match best {
        Some(age) => one.min(Rat::new(Int::from(age), Int::from(qs.modulus))),
        None => one,
    }
}

/// How an mld value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MldMethod {
    Formula,
    Oracle,
}

/// Evidence for an mld value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MldWitness {
    /// The mirror charge attaining the closed-formula minimum.
    MirrorWeight { index: usize },
    /// A stratum and stabilizer element attaining the oracle minimum.
    Stratum {
        stratum: Vec<usize>,
        case: StratumCase,
        element: Vec<Rat>,
    },
    /// No stratum contributed an age below 1.
    SmoothCap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MldReport {
    pub value: Rat,
    pub method: MldMethod,
    pub witness: MldWitness,
}

struct TierOneCandidate {
    age: i128,
    stratum: Vec<usize>,
    case: StratumCase,
    element: Vec<i64>,
}

/// Strata visited in `Remark` mode: pure-power pairs and pointed singletons.
fn remark_strata(masks: &[u32], dim: usize) -> Vec<u32> {
    let mut strata = Vec::new();
    let pure: Vec<bool> = (0..dim).map(|i| masks[i] == 1u32 << i).collect();
    for i in 0..dim {
        if !pure[i] {
            strata.push(1u32 << i);
        }
    }
    for i in 0..dim {
        for j in i + 1..dim {
            if pure[i] && pure[j] {
                strata.push((1u32 << i) | (1u32 << j));
            }
        }
    }
    strata.sort();
    strata
}

fn gate_complete(cert: &Certificate) -> Result<(), OracleError> {
    let reason = if !cert.calabi_yau {
        "charges do not sum to 1"
    } else if !cert.well_formed {
        "weight system is not well-formed"
    } else if !cert.quasismooth.verdict {
        "potential is not quasismooth"
    } else {
        return Ok(());
    };
    Err(OracleError::IncompleteCertificate {
        reason: reason.to_string(),
    })
}

/// Minimal log discrepancy by direct stratum-by-stratum toric computation.
///
/// Dispatches to a separable scan for pure Fermat potentials (the group is
/// never materialized) and to the generic coset scan otherwise. The result
/// carries the witness stratum and group element; ties are broken by value,
/// then stratum, then element, so the outcome is deterministic.
pub fn mld_oracle(cert: &Certificate, options: &OracleOptions) -> Result<MldReport, OracleError> {
    gate_complete(cert)?;
    let dim = cert.potential.num_variables();
    if dim < 3 {
        return Err(OracleError::TooFewVariables);
    }
    if options.mode == GroupMode::EvenSubgroup && cert.even_shape().is_none() {
        return Err(OracleError::NotEvenShape);
    }
    if cert.atoms.iter().all(|a| a.kind == AtomKind::Fermat) {
        return fermat_oracle(cert, options);
    }

    let mode = match options.mode {
        GroupMode::Full => GroupMode::AutT,
        m => m,
    };
    let group = symmetry_group(cert, mode, options.element_bound)?;
    let masks = row_masks(cert);
    let strata: Vec<u32> = match options.strata {
        StrataMode::Exhaustive => (1..(1u64 << dim) as u32).collect(),
        StrataMode::Remark => remark_strata(&masks, dim),
    };

    let mut best: Option<TierOneCandidate> = None;
    for mask in strata {
        let (case, retained_mask, supported) = classify_stratum(cert, &masks, mask, dim)?;
        if supported == 1 || retained_mask == 0 {
            continue;
        }
        let retained = mask_indices(retained_mask, dim);
        let stratum = mask_indices(mask, dim);
        for_each_stabilizer(&group, mask, |h| {
            let age: i128 = retained.iter().map(|&j| h[j] as i128).sum();
            if age == 0 {
                return;
            }
            let better = match &best {
                None => true,
                Some(b) => (age, &stratum, h) < (b.age, &b.stratum, b.element.as_slice()),
            };
            if better {
                best = Some(TierOneCandidate {
                    age,
                    stratum: stratum.clone(),
                    case,
                    element: h.to_vec(),
                });
            }
        });
    }

    let one = Rat::one();
    match best {
        Some(c) => {
            let value = Rat::new(Int::from(c.age), Int::from(group.modulus));
            if value < one {
                Ok(MldReport {
                    value,
                    method: MldMethod::Oracle,
                    witness: MldWitness::Stratum {
                        stratum: c.stratum,
                        case: c.case,
                        element: c
                            .element
                            .iter()
                            .map(|&n| Rat::new(Int::from(n), Int::from(group.modulus)))
                            .collect(),
                    },
                })
            } else {
                Ok(MldReport {
                    value: one,
                    method: MldMethod::Oracle,
                    witness: MldWitness::SmoothCap,
                })
            }
        }
        None => Ok(MldReport {
            value: one,
            method: MldMethod::Oracle,
            witness: MldWitness::SmoothCap,
        }),
    }
}

/// Separable oracle for pure Fermat potentials.
///
/// For `sigma = t / M` with `M = lcm(a_i b_i)` the stabilizer constraint on
/// coordinate `i` is `M | t a_i b_i`, and the minimal fractional part of a
/// stabilizer element at a retained coordinate is `((t a_i b_i) mod M) / (M b_i)`.
/// The stratum optimum is evaluated per `t` without materializing the group.
fn fermat_oracle(cert: &Certificate, options: &OracleOptions) -> Result<MldReport, OracleError> {
    let dim = cert.potential.num_variables();
    let m = cert.exponent_matrix.matrix();
    let weights = &cert.charges.weights;
    let mut scan_mod_big = Int::one();
    for i in 0..dim {
        scan_mod_big = scan_mod_big.lcm(&(&weights[i] * m.entry(i, i)));
    }
    let scan_mod = to_i64(&scan_mod_big).ok_or_else(|| OracleError::ModulusOverflow {
        modulus: scan_mod_big.to_string(),
    })?;
    if scan_mod as u64 > options.element_bound {
        return Err(OracleError::GroupTooLarge {
            at_least: scan_mod as u64,
            bound: options.element_bound,
        });
    }
    let a: Vec<i64> = weights
        .iter()
        .map(|w| to_i64(w).expect("weights divide the modulus"))
        .collect();
    let b: Vec<i64> = (0..dim)
        .map(|i| to_i64(m.entry(i, i)).expect("exponents divide the modulus"))
        .collect();
    let lcm_b = b.iter().fold(1i64, |acc, &x| acc / gcd_i64(acc, x) * x);
    // All candidate values share the denominator scan_mod * lcm_b.
    let den = scan_mod as i128 * lcm_b as i128;

    struct FermatCandidate {
        num: i128,
        stratum: Vec<usize>,
        element: Vec<(i64, i64)>,
    }
    let mut best: Option<FermatCandidate> = None;
    let mut consider = |num: i128, stratum: Vec<usize>, element: Vec<(i64, i64)>| {
        let better = match &best {
            None => true,
            Some(b) => (num, &stratum, &element) < (b.num, &b.stratum, &b.element),
        };
        if better {
            best = Some(FermatCandidate {
                num,
                stratum,
                element,
            });
        }
    };

    let frac = |t: i64, i: usize| -> i64 {
        (t as i128 * a[i] as i128 % scan_mod as i128 * b[i] as i128 % scan_mod as i128) as i64
    };
    for t in 0..scan_mod {
        // rem[i] = (t a_i b_i) mod M; zero iff sigma fixes coordinate i's
        // character, i.e. i may lie in the stratum.
        let rem: Vec<i64> = (0..dim).map(|i| frac(t, i)).collect();
        let fixed: Vec<usize> = (0..dim).filter(|&i| rem[i] == 0).collect();
        if fixed.len() < 2 {
            continue;
        }
        if fixed.len() < dim {
            // Some retained coordinate has a positive fractional part, so the
            // value is the full retained sum, the same for every admissible
            // stratum; the lexicographically least is the first two fixed
            // coordinates.
            let num: i128 = (0..dim)
                .map(|i| rem[i] as i128 * (lcm_b / b[i]) as i128)
                .sum();
            let stratum = vec![fixed[0], fixed[1]];
            let element: Vec<(i64, i64)> = (0..dim)
                .map(|i| {
                    if rem[i] == 0 {
                        (0, 1)
                    } else {
                        (rem[i], scan_mod * b[i])
                    }
                })
                .collect();
            consider(num, stratum, element);
        } else {
            // sigma fixes every character; the cheapest nonzero stabilizer
            // element contributes 1/b at a single retained coordinate.
            for i in 0..dim {
                for j in i + 1..dim {
                    let Some(beta) = (0..dim)
                        .filter(|&k| k != i && k != j)
                        .max_by_key(|&k| (b[k], k))
                    else {
                        continue;
                    };
                    let num = den / b[beta] as i128;
                    let mut element = vec![(0i64, 1i64); dim];
                    element[beta] = (1, b[beta]);
                    consider(num, vec![i, j], element);
                }
            }
        }
    }

    let one = Rat::one();
    match best {
        Some(c) => {
            let value = Rat::new(Int::from(c.num), Int::from(den));
            if value < one {
                Ok(MldReport {
                    value,
                    method: MldMethod::Oracle,
                    witness: MldWitness::Stratum {
                        stratum: c.stratum,
                        case: StratumCase::MeetsHypersurface,
                        element: c
                            .element
                            .iter()
                            .map(|&(n, d)| Rat::new(Int::from(n), Int::from(d)))
                            .collect(),
                    },
                })
            } else {
                Ok(MldReport {
                    value: one,
                    method: MldMethod::Oracle,
                    witness: MldWitness::SmoothCap,
                })
            }
        }
        None => Ok(MldReport {
            value: one,
            method: MldMethod::Oracle,
            witness: MldWitness::SmoothCap,
        }),
    }
}
