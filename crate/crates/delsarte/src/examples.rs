//! Construction of the extremal loop-type families and related test families.
//!
//! The families here realize record-small minimal log discrepancies among
//! quotients of Calabi-Yau hypersurfaces by their toric automorphisms.  Their
//! exponents are built from the Sylvester sequence 2, 3, 7, 43, ... via an
//! alternating product symbol, and the key numerical facts about them (the
//! degree, the group order, the discrepancy denominator) satisfy exact integer
//! identities that [`verify_identity`] checks directly.

use num::{BigRational, Integer, One, Signed, Zero};
use thiserror::Error;

use crate::bhk::{certify, mld_even_subquotient, mld_formula, ChargeData};
use crate::exactlin::{Int, Rat};
use crate::potential::{validate_delsarte, Monomial, Potential};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExampleError {
    #[error("family is defined for n >= {min}, got n = {n}")]
    DimensionTooSmall { n: usize, min: usize },
    #[error("identity mismatch: {left} != {right} ({context})")]
    IdentityMismatch {
        left: Int,
        right: Int,
        context: String,
    },
}

/// First `k` terms of the Sylvester sequence `s_0 = 2`, `s_{i+1} = s_i^2 - s_i + 1`.
pub fn sylvester(k: usize) -> Vec<Int> {
    let mut s = Vec::with_capacity(k);
    let mut cur = Int::from(2);
    for _ in 0..k {
        s.push(cur.clone());
        cur = &cur * &cur - &cur + 1;
    }
    s
}

/// Alternating product symbol over a value sequence:
/// `B(v_1, ..., v_k) = sum_t (-1)^(k - t) v_1 ... v_t`, with `B() = 1`.
///
/// Satisfies the recurrence `B(v_1, ..., v_k) = v_1 ... v_k - B(v_1, ..., v_{k-1})`.
pub fn b_symbol(values: &[Int]) -> Int {
    let mut b = Int::one();
    let mut p = Int::one();
    for v in values {
        p *= v;
        b = &p - &b;
    }
    b
}

/// One member of the extremal family: a loop-type Calabi-Yau hypersurface of
/// dimension `n` whose quotient has minimal log discrepancy `1/m`.
#[derive(Debug, Clone)]
pub struct ExtremalExample {
    pub n: usize,
    /// Leading exponents `b_0, b_1, ...`; the final variable carries `v`.
    pub b: Vec<Int>,
    /// Exponent of the last variable.
    pub v: Int,
    /// Degree of the hypersurface, equal to the smallest weight sum.
    pub degree: Int,
    /// Denominator of the minimal log discrepancy.
    pub m: Int,
    pub potential: Potential,
    /// Charge data of the ambient weighted projective space.
    pub weights: ChargeData,
    /// Minimal log discrepancy of the quotient: `1/m` in every dimension.
    pub mld: Rat,
    /// Smallest mirror charge: `1/m` for odd `n`, `1/(2m)` for even `n`,
    /// where the doubling subgroup restores `1/m`.
    pub min_mirror_charge: Rat,
}

/// Builds the dimension-`n` member of the extremal family (`n >= 2`).
///
/// For odd `n` the potential is a single loop on `n + 2` variables and the
/// record holder is the quotient by the full induced group; for even `n` it is
/// a squared variable plus a loop, and the record holder is the quotient by
/// the index-two subgroup.  The construction is verified on the spot: the
/// certificate must come out Calabi-Yau, well-formed, and quasismooth, with
/// smallest weight 1 and the predicted discrepancies.
pub fn generate_extremal(n: usize) -> Result<ExtremalExample, crate::Error> {
    if n < 2 {
        return Err(ExampleError::DimensionTooSmall { n, min: 2 }.into());
    }
    let r = n / 2;
    let odd = n % 2 == 1;
    let pairs = if odd { r + 1 } else { r };

    // Index word for the product symbol: r+1, r, r+2, r-1, ..., ending at
    // index 1 (even) or 0 (odd).
    let mut word: Vec<usize> = Vec::with_capacity(2 * pairs);
    for j in 1..=pairs {
        word.push(r + j);
        word.push(r + 1 - j);
    }

    let mut b = sylvester(r + 1);
    for i in 1..=pairs {
        let prefix: Vec<Int> = word[..2 * (i - 1)].iter().map(|&t| b[t].clone()).collect();
        let factor = &b[r + 1 - i] - Int::one();
        b.push(Int::one() + &factor * &factor * b_symbol(&prefix));
    }

    let values =
        |indices: &[usize]| -> Vec<Int> { indices.iter().map(|&t| b[t].clone()).collect() };
    let mut v = Int::zero();
    for k in 0..word.len() {
        let term = b_symbol(&values(&word[k..]));
        if k % 2 == 0 {
            v += term;
        } else {
            v -= term;
        }
    }
    if !odd {
        v = Int::from(2) * v + 1;
    }
    let b_word = b_symbol(&values(&word));
    let degree = if odd {
        b_word.clone()
    } else {
        Int::from(2) * &b_word
    };
    let reversed: Vec<usize> = word.iter().rev().copied().collect();
    let m = b_symbol(&values(&reversed));

    let num_vars = n + 2;
    let last = num_vars - 1;
    let mut monomials: Vec<Vec<(usize, Int)>> = Vec::with_capacity(num_vars);
    if odd {
        monomials.push(vec![(0, b[0].clone()), (last, Int::one())]);
    } else {
        monomials.push(vec![(0, b[0].clone())]);
    }
    for j in 1..=r {
        monomials.push(vec![(j, b[j].clone()), (2 * r + 2 - j, Int::one())]);
    }
    monomials.push(vec![(r + 1, b[r + 1].clone()), (r, Int::one())]);
    for k in 2..=pairs {
        monomials.push(vec![(r + k, b[r + k].clone()), (r + 1 - k, Int::one())]);
    }
    monomials.push(vec![(last, v.clone()), (r + 1, Int::one())]);

    let monomials: Vec<Monomial> = monomials
        .iter()
        .map(|pairs| Monomial::from_pairs(num_vars, pairs))
        .collect::<Result<_, _>>()?;
    let potential = Potential::new(monomials)?;

    let cert = certify(&potential)?;
    assert_eq!(
        cert.charges.degree, degree,
        "degree deviates from the product symbol"
    );
    assert!(
        cert.charges.weights.iter().any(|w| w.is_one()),
        "smallest weight must be 1"
    );
    assert!(cert.is_complete(), "family member must certify completely");

    let expected_min = if odd {
        Rat::new(Int::one(), m.clone())
    } else {
        Rat::new(Int::one(), Int::from(2) * &m)
    };
    let (min_mirror, _) = cert.mirror.min_charge();
    assert_eq!(
        min_mirror, expected_min,
        "smallest mirror charge deviates from 1/m"
    );
    let mld = if odd {
        mld_formula(&cert)?
    } else {
        mld_even_subquotient(&cert)?
    };
    assert_eq!(
        mld,
        Rat::new(Int::one(), m.clone()),
        "record discrepancy must be 1/m"
    );

    Ok(ExtremalExample {
        n,
        b,
        v,
        degree,
        m,
        potential,
        weights: cert.charges,
        mld,
        min_mirror_charge: min_mirror,
    })
}

/// Checks the exact integer identities tying a family member together:
/// `m * degree - 1` equals `v` times the product of the `b_i` (all of them
/// for odd `n`, all but `b_0` for even `n`), and the exponent matrix
/// determinant equals `m * degree` (odd) or `2 * m * degree` (even).
pub fn verify_identity(example: &ExtremalExample) -> Result<(), crate::Error> {
    let odd = example.n % 2 == 1;
    let left = &example.m * &example.degree - Int::one();
    let skip = usize::from(!odd);
    let product: Int = example.b.iter().skip(skip).product();
    let right = &product * &example.v;
    if left != right {
        return Err(ExampleError::IdentityMismatch {
            left,
            right,
            context: "m*degree - 1 versus product(b) * v".to_string(),
        }
        .into());
    }

    let em = validate_delsarte(&example.potential)?;
    let det = em.determinant().abs();
    let expected = if odd {
        &example.m * &example.degree
    } else {
        Int::from(2) * &example.m * &example.degree
    };
    if det != expected {
        return Err(ExampleError::IdentityMismatch {
            left: det,
            right: expected,
            context: "determinant versus group order".to_string(),
        }
        .into());
    }
    Ok(())
}

/// A separable comparison family: `x_0^2 + x_1^3 + ... + x_n^{s_n} + x_{n+1}^{s_{n+1} - 1}`.
///
/// These are the smallest known discrepancies among hypersurfaces *without*
/// quotienting: the mld is `1/d` with `d = s_0 s_1 ... s_n`, which decays
/// doubly exponentially but far slower than `1/m` above.
#[derive(Debug, Clone)]
pub struct LiuExample {
    pub n: usize,
    pub potential: Potential,
    pub expected_weights: Vec<Int>,
    pub expected_degree: Int,
    pub expected_mld: Rat,
}

/// Builds the dimension-`n` Liu comparison hypersurface (`n >= 1`).
pub fn liu_potential(n: usize) -> Result<LiuExample, crate::Error> {
    if n < 1 {
        return Err(ExampleError::DimensionTooSmall { n, min: 1 }.into());
    }
    let s = sylvester(n + 2);
    let degree = &s[n + 1] - Int::one();
    let mut exponents: Vec<Int> = s[..=n].to_vec();
    exponents.push(degree.clone());
    let num_vars = n + 2;
    let monomials: Vec<Monomial> = exponents
        .iter()
        .enumerate()
        .map(|(i, e)| Monomial::from_pairs(num_vars, &[(i, e.clone())]))
        .collect::<Result<_, _>>()?;
    let potential = Potential::new(monomials)?;
    let expected_weights: Vec<Int> = exponents.iter().map(|e| &degree / e).collect();
    debug_assert!(exponents.iter().all(|e| degree.is_multiple_of(e)));
    Ok(LiuExample {
        n,
        potential,
        expected_weights,
        expected_degree: degree.clone(),
        expected_mld: BigRational::new(Int::one(), degree),
    })
}
