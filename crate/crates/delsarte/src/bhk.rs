//! Charges, weights, mirror data, symmetry group orders, and the closed
//! formulas for minimal log discrepancies of torus quotients.
//!
//! For an invertible exponent matrix `A` the charge of variable `i` is the
//! `i`-th row sum of `A^{-1}`; clearing denominators yields the weights and
//! degree of the ambient weighted projective space. Column sums give the
//! charges of the transposed potential, the mirror. The hypersurface is
//! Calabi-Yau exactly when the charges sum to 1.
//!
//! For a quasismooth, well-formed Calabi-Yau member, the minimal log
//! discrepancy of the quotient by the induced torus automorphisms equals the
//! smallest mirror charge. When the potential is a squared variable plus a
//! single loop, the quotient by the index-two subgroup of the induced
//! automorphisms is itself a Calabi-Yau variety and its minimal log
//! discrepancy is twice the smallest mirror charge.

use num::{Integer, One, Signed, Zero};
use thiserror::Error;

use crate::error::Error;
use crate::exactlin::{invert_matrix, Int, Rat, RatMatrix};
use crate::potential::{
    decompose_atoms, validate_delsarte, Atom, AtomKind, ExponentMatrix, Potential,
};
use crate::quasismooth::{check_quasismooth, QsWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BhkError {
    #[error("charge {index} is {value}; charges must be positive")]
    NonPositiveCharge { index: usize, value: Rat },
    #[error("weights {weights:?} have gcd {gcd}, expected 1")]
    ImprimitiveWeights { weights: Vec<Int>, gcd: Int },
    #[error("degree {degree} does not divide the symmetry group order {order}")]
    InconsistentOrders { degree: Int, order: Int },
    #[error("charges sum to {sum}, not 1; the hypersurface is not Calabi-Yau")]
    NotCalabiYau { sum: Rat },
    #[error("weight system is not well-formed")]
    NotWellFormed,
    #[error("potential is not quasismooth")]
    NotQuasismooth,
    #[error("potential is not a squared variable plus a single loop")]
    NotEvenShape,
}

/// Charges of a (possibly mirror) potential together with the integral
/// weight system they define.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeData {
    /// `charges[i]` is the charge of variable `i`, in lowest terms.
    pub charges: Vec<Rat>,
    /// Least common denominator of the charges.
    pub degree: Int,
    /// `weights[i] = charges[i] * degree`, an integer vector with gcd 1.
    pub weights: Vec<Int>,
}

impl ChargeData {
    fn from_charges(charges: Vec<Rat>) -> Result<Self, BhkError> {
        for (index, q) in charges.iter().enumerate() {
            if !q.is_positive() {
                return Err(BhkError::NonPositiveCharge {
                    index,
                    value: q.clone(),
                });
            }
        }
        let degree = charges.iter().fold(Int::one(), |acc, q| acc.lcm(q.denom()));
        let weights: Vec<Int> = charges
            .iter()
            .map(|q| {
                let w = q * Rat::from(degree.clone());
                debug_assert!(w.is_integer());
                w.to_integer()
            })
            .collect();
        let gcd = weights.iter().fold(Int::zero(), |acc, w| acc.gcd(w));
        if !gcd.is_one() {
            return Err(BhkError::ImprimitiveWeights { weights, gcd });
        }
        Ok(ChargeData {
            charges,
            degree,
            weights,
        })
    }

    /// Smallest charge and the first index attaining it.
    pub fn min_charge(&self) -> (Rat, usize) {
        let mut best = 0;
        for i in 1..self.charges.len() {
            if self.charges[i] < self.charges[best] {
                best = i;
            }
        }
        (self.charges[best].clone(), best)
    }
}

/// Charges from the row sums of the inverse exponent matrix.
pub fn charges_and_weights(inverse: &RatMatrix) -> Result<ChargeData, BhkError> {
    ChargeData::from_charges((0..inverse.dim()).map(|i| inverse.row_sum(i)).collect())
}

/// Mirror charges from the column sums of the inverse exponent matrix.
///
/// These are the charges of the transposed potential, aligned with the same
/// variables: `(A^T)^{-1} = (A^{-1})^T`, so its row sums are the column sums
/// of `A^{-1}`.
pub fn mirror_data(inverse: &RatMatrix) -> Result<ChargeData, BhkError> {
    ChargeData::from_charges((0..inverse.dim()).map(|j| inverse.column_sum(j)).collect())
}

/// Whether the charges sum to 1.
pub fn is_calabi_yau(cd: &ChargeData) -> bool {
    cd.charges.iter().sum::<Rat>().is_one()
}

/// Whether every subset of all but one weight has gcd 1.
pub fn check_well_formed(cd: &ChargeData) -> bool {
    let n = cd.weights.len();
    (0..n).all(|omit| {
        let gcd = cd
            .weights
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != omit)
            .fold(Int::zero(), |acc, (_, w)| acc.gcd(w));
        gcd.is_one()
    })
}

/// Orders of the diagonal symmetry groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupOrders {
    /// Order of the full diagonal automorphism group, `|det A|`.
    pub aut_f: Int,
    /// Order of the subgroup induced by the scaling torus, the degree `d`.
    pub j_f: Int,
    /// Order of the induced quotient group, `|det A| / d`.
    pub aut_t: Int,
}

pub fn group_orders(em: &ExponentMatrix, cd: &ChargeData) -> Result<GroupOrders, BhkError> {
    let aut_f = em.determinant().abs();
    let d = cd.degree.clone();
    let (quot, rem) = aut_f.div_rem(&d);
    if !rem.is_zero() {
        return Err(BhkError::InconsistentOrders {
            degree: d,
            order: aut_f,
        });
    }
    Ok(GroupOrders {
        aut_f,
        j_f: d,
        aut_t: quot,
    })
}

/// Everything the mld formulas and the toric oracle need about one potential.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub potential: Potential,
    pub exponent_matrix: ExponentMatrix,
    pub atoms: Vec<Atom>,
    pub inverse: RatMatrix,
    pub charges: ChargeData,
    pub mirror: ChargeData,
    pub orders: GroupOrders,
    pub calabi_yau: bool,
    pub well_formed: bool,
    pub quasismooth: QsWitness,
}

impl Certificate {
    /// True when the mld formulas apply: Calabi-Yau, well-formed, quasismooth.
    pub fn is_complete(&self) -> bool {
        self.calabi_yau && self.well_formed && self.quasismooth.verdict
    }

    fn require_complete(&self) -> Result<(), BhkError> {
        if !self.calabi_yau {
            return Err(BhkError::NotCalabiYau {
                sum: self.charges.charges.iter().sum(),
            });
        }
        if !self.well_formed {
            return Err(BhkError::NotWellFormed);
        }
        if !self.quasismooth.verdict {
            return Err(BhkError::NotQuasismooth);
        }
        Ok(())
    }

    /// The Fermat and loop atoms of a squared-variable-plus-loop potential.
    pub fn even_shape(&self) -> Option<(&Atom, &Atom)> {
        if self.atoms.len() != 2 {
            return None;
        }
        let (fermat, lp) = match (self.atoms[0].kind, self.atoms[1].kind) {
            (AtomKind::Fermat, AtomKind::Loop) => (&self.atoms[0], &self.atoms[1]),
            (AtomKind::Loop, AtomKind::Fermat) => (&self.atoms[1], &self.atoms[0]),
            _ => return None,
        };
        if fermat.exponents[0] == Int::from(2) {
            Some((fermat, lp))
        } else {
            None
        }
    }
}

/// Runs the full analysis pipeline on one potential.
pub fn certify(p: &Potential) -> Result<Certificate, Error> {
    let exponent_matrix = validate_delsarte(p)?;
    let atoms = decompose_atoms(&exponent_matrix);
    let inverse = invert_matrix(exponent_matrix.matrix())?;
    let charges = charges_and_weights(&inverse)?;
    let mirror = mirror_data(&inverse)?;
    let orders = group_orders(&exponent_matrix, &charges)?;
    let calabi_yau = is_calabi_yau(&charges);
    let well_formed = check_well_formed(&charges);
    let quasismooth = check_quasismooth(p.monomials())?;
    Ok(Certificate {
        potential: p.clone(),
        exponent_matrix,
        atoms,
        inverse,
        charges,
        mirror,
        orders,
        calabi_yau,
        well_formed,
        quasismooth,
    })
}

/// Minimal log discrepancy of the quotient of the hypersurface by its induced
/// torus automorphisms: the smallest mirror charge.
///
/// Requires a complete certificate (Calabi-Yau, well-formed, quasismooth).
pub fn mld_formula(cert: &Certificate) -> Result<Rat, BhkError> {
    cert.require_complete()?;
    Ok(cert.mirror.min_charge().0)
}

/// Minimal log discrepancy of the quotient by the index-two subgroup of the
/// induced automorphisms, for potentials of the shape squared variable plus
/// loop: twice the smallest mirror charge.
pub fn mld_even_subquotient(cert: &Certificate) -> Result<Rat, BhkError> {
    cert.require_complete()?;
    if cert.even_shape().is_none() {
        return Err(BhkError::NotEvenShape);
    }
    Ok(cert.mirror.min_charge().0 * Rat::from(Int::from(2)))
}
