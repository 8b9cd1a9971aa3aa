//! Delsarte potentials: parsing, normal form, and atom decomposition.
//!
//! A potential is a sum of monomials, one per variable, whose exponent matrix
//! is invertible. In normal form each monomial is either a pure power
//! `x_i^{b_i}` or a pointed power `x_i^{b_i} x_j` with `b_i >= 2`, and no
//! variable is pointed at twice. The directed graph `i -> j` then splits the
//! variables into three kinds of atoms: isolated vertices (Fermat), directed
//! cycles (loops), and directed paths (chains).
//!
//! Grammar for the text form, whitespace-insensitive:
//!
//! ```text
//! potential := term ('+' term)*
//! term      := factor ('*'? factor)*
//! factor    := 'x' INDEX ('^' EXPONENT)?
//! ```
//!
//! The `'*'` between factors is optional, so `x1^3 x5` and `x1^3*x5` denote
//! the same monomial. Serialization always emits the starred form.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::exactlin::{determinant, Int, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PotentialError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("monomial has a negative exponent for variable {variable}")]
    NegativeExponent { variable: usize },
    #[error("monomial has all exponents zero")]
    ZeroMonomial,
    #[error("monomial has total degree 1; linear terms define no hypersurface singularity data")]
    LinearMonomial,
    #[error("variable index {index} exceeds the declared variable count {num_variables}")]
    IndexOutOfRange { index: usize, num_variables: usize },
    #[error("potential has {monomials} monomials in {variables} variables; a Delsarte potential needs equal counts")]
    WrongMonomialCount { monomials: usize, variables: usize },
    #[error("monomials use {len} and {expected} variables; all monomials must agree")]
    MixedVariableCounts { len: usize, expected: usize },
    #[error("potential is empty")]
    EmptyPotential,
    #[error("exponent matrix is singular")]
    Singular,
    #[error("monomial {index} ({monomial}) is not in normal form: {reason}")]
    NotNormalForm {
        index: usize,
        monomial: String,
        reason: String,
    },
    #[error("variable {variable} carries the high power of monomials {first} and {second}")]
    DuplicateOwner {
        variable: usize,
        first: usize,
        second: usize,
    },
    #[error("variable {variable} carries the high power of no monomial")]
    UnownedVariable { variable: usize },
    #[error("variable {variable} appears linearly in monomials {first} and {second}")]
    ColumnConflict {
        variable: usize,
        first: usize,
        second: usize,
    },
}

/// A monomial with nonnegative integer exponents and total degree at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<Int>,
}

impl Monomial {
    pub fn new(exps: Vec<Int>) -> Result<Self, PotentialError> {
        let mut degree = Int::zero();
        for (variable, e) in exps.iter().enumerate() {
            if e.is_negative() {
                return Err(PotentialError::NegativeExponent { variable });
            }
            degree += e;
        }
        if degree.is_zero() {
            return Err(PotentialError::ZeroMonomial);
        }
        if degree.is_one() {
            return Err(PotentialError::LinearMonomial);
        }
        Ok(Monomial { exps })
    }

    /// Builds a monomial over `num_variables` variables from sparse
    /// `(variable, exponent)` pairs; repeated variables accumulate.
    pub fn from_pairs(
        num_variables: usize,
        pairs: &[(usize, Int)],
    ) -> Result<Self, PotentialError> {
        let mut exps = vec![Int::zero(); num_variables];
        for (index, e) in pairs {
            if *index >= num_variables {
                return Err(PotentialError::IndexOutOfRange {
                    index: *index,
                    num_variables,
                });
            }
            exps[*index] += e;
        }
        Monomial::new(exps)
    }

    pub fn num_variables(&self) -> usize {
        self.exps.len()
    }

    pub fn exponent(&self, j: usize) -> &Int {
        &self.exps[j]
    }

    pub fn exponents(&self) -> &[Int] {
        &self.exps
    }

    pub fn degree(&self) -> Int {
        self.exps.iter().sum()
    }

    /// Indices of the variables with nonzero exponent, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(j, _)| j)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_monomial(self))
    }
}

/// A Delsarte potential: `k` monomials in `k` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Potential {
    monomials: Vec<Monomial>,
}

impl Potential {
    pub fn new(monomials: Vec<Monomial>) -> Result<Self, PotentialError> {
        let Some(first) = monomials.first() else {
            return Err(PotentialError::EmptyPotential);
        };
        let nv = first.num_variables();
        for m in &monomials {
            if m.num_variables() != nv {
                return Err(PotentialError::MixedVariableCounts {
                    len: m.num_variables(),
                    expected: nv,
                });
            }
        }
        if monomials.len() != nv {
            return Err(PotentialError::WrongMonomialCount {
                monomials: monomials.len(),
                variables: nv,
            });
        }
        Ok(Potential { monomials })
    }

    pub fn num_variables(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_potential(self))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> PotentialError {
        PotentialError::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn digits(&mut self, what: &str) -> Result<&'a str, PotentialError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err(format!("expected {what}")));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("digits are ascii"))
    }

    /// factor := 'x' INDEX ('^' EXPONENT)?
    fn factor(&mut self) -> Result<(usize, Int), PotentialError> {
        match self.peek() {
            Some(b'x') => self.pos += 1,
            _ => return Err(self.err("expected a variable like x0")),
        }
        let index: usize = self
            .digits("a variable index after 'x'")?
            .parse()
            .map_err(|_| self.err("variable index does not fit in a machine word"))?;
        let exponent = if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.digits("an exponent after '^'")?;
            Int::parse_bytes(digits.as_bytes(), 10).expect("digits parse as an integer")
        } else {
            Int::one()
        };
        Ok((index, exponent))
    }

    /// term := factor ('*'? factor)*
    fn term(&mut self) -> Result<BTreeMap<usize, Int>, PotentialError> {
        let mut exps = BTreeMap::new();
        let (i, e) = self.factor()?;
        *exps.entry(i).or_insert_with(Int::zero) += e;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let (i, e) = self.factor()?;
                    *exps.entry(i).or_insert_with(Int::zero) += e;
                }
                Some(b'x') => {
                    let (i, e) = self.factor()?;
                    *exps.entry(i).or_insert_with(Int::zero) += e;
                }
                _ => break,
            }
        }
        Ok(exps)
    }

    fn potential(&mut self) -> Result<Vec<(usize, BTreeMap<usize, Int>)>, PotentialError> {
        let mut terms = Vec::new();
        loop {
            let start = {
                self.skip_ws();
                self.pos
            };
            terms.push((start, self.term()?));
            match self.peek() {
                Some(b'+') => self.pos += 1,
                Some(_) => return Err(self.err("expected '+' or end of input")),
                None => break,
            }
        }
        Ok(terms)
    }
}

/// Parses a sum of monomials without requiring the Delsarte square shape.
///
/// With `num_variables = None` the variable count is inferred as one more than
/// the largest index that occurs.
pub fn parse_monomials(
    text: &str,
    num_variables: Option<usize>,
) -> Result<Vec<Monomial>, PotentialError> {
    let mut parser = Parser::new(text);
    let terms = parser.potential()?;
    let max_index = terms
        .iter()
        .flat_map(|(_, t)| t.keys().copied())
        .max()
        .unwrap_or(0);
    let nv = match num_variables {
        Some(nv) => {
            for (_, t) in &terms {
                if let Some(&index) = t.keys().find(|&&i| i >= nv) {
                    return Err(PotentialError::IndexOutOfRange {
                        index,
                        num_variables: nv,
                    });
                }
            }
            nv
        }
        None => max_index + 1,
    };
    terms
        .into_iter()
        .map(|(start, t)| {
            let mut exps = vec![Int::zero(); nv];
            for (i, e) in t {
                exps[i] = e;
            }
            Monomial::new(exps).map_err(|e| match e {
                PotentialError::ZeroMonomial | PotentialError::LinearMonomial => {
                    PotentialError::Syntax {
                        position: start,
                        message: e.to_string(),
                    }
                }
                other => other,
            })
        })
        .collect()
}

/// Parses a Delsarte potential: as many monomials as variables.
pub fn parse_potential(
    text: &str,
    num_variables: Option<usize>,
) -> Result<Potential, PotentialError> {
    Potential::new(parse_monomials(text, num_variables)?)
}

pub fn serialize_monomial(m: &Monomial) -> String {
    let factors: Vec<String> = m
        .support()
        .map(|j| {
            let e = m.exponent(j);
            if e.is_one() {
                format!("x{j}")
            } else {
                format!("x{j}^{e}")
            }
        })
        .collect();
    factors.join("*")
}

/// Emits the canonical text form: factors ascending by variable, joined by
/// `'*'`, terms joined by `" + "`.
pub fn serialize_potential(p: &Potential) -> String {
    p.monomials()
        .iter()
        .map(serialize_monomial)
        .collect::<Vec<_>>()
        .join(" + ")
}

/// The exponent matrix of a validated Delsarte potential, rows permuted so
/// that row `i` is the monomial whose high power is `x_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    matrix: IntMatrix,
    monomial_for_variable: Vec<usize>,
    determinant: Int,
}

impl ExponentMatrix {
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Original monomial index that owns each variable.
    pub fn monomial_for_variable(&self) -> &[usize] {
        &self.monomial_for_variable
    }

    pub fn determinant(&self) -> &Int {
        &self.determinant
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Checks that a potential is Delsarte in normal form and returns its
/// variable-aligned exponent matrix.
///
/// Checks, in order: invertibility of the exponent matrix, normal form of
/// every monomial (one variable with exponent at least 2, at most one other
/// variable and only with exponent exactly 1), the bijection between monomials
/// and their high-power variables, and that no variable is pointed at by two
/// monomials.
pub fn validate_delsarte(p: &Potential) -> Result<ExponentMatrix, PotentialError> {
    let n = p.num_variables();
    let raw = IntMatrix::from_rows(
        p.monomials()
            .iter()
            .map(|m| m.exponents().to_vec())
            .collect(),
    )
    .expect("potential is square by construction");
    if determinant(&raw).is_zero() {
        return Err(PotentialError::Singular);
    }

    let two = Int::from(2);
    let mut owner_of_variable: Vec<Option<usize>> = vec![None; n];
    let mut pointer_of_monomial: Vec<Option<usize>> = vec![None; n];
    for (index, m) in p.monomials().iter().enumerate() {
        let not_normal = |reason: &str| PotentialError::NotNormalForm {
            index,
            monomial: serialize_monomial(m),
            reason: reason.to_string(),
        };
        let mut own = None;
        let mut pointer = None;
        for j in m.support() {
            let e = m.exponent(j);
            if *e >= two {
                if own.is_some() {
                    return Err(not_normal("two variables carry exponent >= 2"));
                }
                own = Some(j);
            } else {
                if pointer.is_some() {
                    return Err(not_normal("two variables appear linearly"));
                }
                pointer = Some(j);
            }
        }
        let Some(own) = own else {
            return Err(not_normal("no variable carries exponent >= 2"));
        };
        if let Some(first) = owner_of_variable[own] {
            return Err(PotentialError::DuplicateOwner {
                variable: own,
                first,
                second: index,
            });
        }
        owner_of_variable[own] = Some(index);
        pointer_of_monomial[index] = pointer;
    }
    let monomial_for_variable: Vec<usize> = owner_of_variable
        .iter()
        .enumerate()
        .map(|(variable, o)| o.ok_or(PotentialError::UnownedVariable { variable }))
        .collect::<Result<_, _>>()?;

    let mut pointed_by: Vec<Option<usize>> = vec![None; n];
    for (index, pointer) in pointer_of_monomial.iter().enumerate() {
        if let Some(j) = *pointer {
            if let Some(first) = pointed_by[j] {
                return Err(PotentialError::ColumnConflict {
                    variable: j,
                    first,
                    second: index,
                });
            }
            pointed_by[j] = Some(index);
        }
    }

    let matrix = IntMatrix::from_rows(
        monomial_for_variable
            .iter()
            .map(|&mi| p.monomials()[mi].exponents().to_vec())
            .collect(),
    )
    .expect("square by construction");
    let det = determinant(&matrix);
    Ok(ExponentMatrix {
        matrix,
        monomial_for_variable,
        determinant: det,
    })
}

/// The three atomic potential shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomKind {
    Fermat,
    Loop,
    Chain,
}

impl AtomKind {
    pub fn name(self) -> &'static str {
        match self {
            AtomKind::Fermat => "fermat",
            AtomKind::Loop => "loop",
            AtomKind::Chain => "chain",
        }
    }
}

/// One atom of a Delsarte potential.
///
/// `indices` lists the member variables in canonical order: a Fermat atom has
/// one variable; a loop starts at its smallest variable and follows the
/// pointer edges around the cycle; a chain runs from its head (the variable no
/// monomial points at) to its tail (the pure power). `exponents[s]` is the
/// high power of `indices[s]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub kind: AtomKind,
    pub indices: Vec<usize>,
    pub exponents: Vec<Int>,
}

impl Atom {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Splits a validated exponent matrix into its atoms, sorted by smallest
/// member variable.
pub fn decompose_atoms(em: &ExponentMatrix) -> Vec<Atom> {
    let n = em.dim();
    let a = em.matrix();
    let out: Vec<Option<usize>> = (0..n)
        .map(|i| (0..n).find(|&j| j != i && a.entry(i, j).is_one()))
        .collect();
    let mut in_degree = vec![0usize; n];
    for target in out.iter().flatten() {
        in_degree[*target] += 1;
    }

    let mut visited = vec![false; n];
    let mut atoms = Vec::new();
    let exponent = |i: usize| a.entry(i, i).clone();

    for i in 0..n {
        if visited[i] || in_degree[i] != 0 {
            continue;
        }
        if out[i].is_none() {
            visited[i] = true;
            atoms.push(Atom {
                kind: AtomKind::Fermat,
                indices: vec![i],
                exponents: vec![exponent(i)],
            });
            continue;
        }
        let mut indices = vec![i];
        visited[i] = true;
        let mut cur = i;
        while let Some(next) = out[cur] {
            visited[next] = true;
            indices.push(next);
            cur = next;
        }
        let exponents = indices.iter().map(|&v| exponent(v)).collect();
        atoms.push(Atom {
            kind: AtomKind::Chain,
            indices,
            exponents,
        });
    }

    for i in 0..n {
        if visited[i] {
            continue;
        }
        let mut indices = vec![i];
        visited[i] = true;
        let mut cur = out[i].expect("cycle members have out-edges");
        while cur != i {
            visited[cur] = true;
            indices.push(cur);
            cur = out[cur].expect("cycle members have out-edges");
        }
        let exponents = indices.iter().map(|&v| exponent(v)).collect();
        atoms.push(Atom {
            kind: AtomKind::Loop,
            indices,
            exponents,
        });
    }

    atoms.sort_by_key(|atom| {
        atom.indices
            .iter()
            .copied()
            .min()
            .expect("atoms are nonempty")
    });
    atoms
}

/// The transposed (mirror) potential: monomial `i` of the result is row `i`
/// of the transposed exponent matrix.
pub fn transpose_potential(em: &ExponentMatrix) -> Potential {
    let t = em.matrix().transpose();
    let monomials = t
        .rows()
        .map(|r| Monomial::new(r.to_vec()).expect("transposed rows keep the diagonal power"))
        .collect();
    Potential::new(monomials).expect("transpose is square")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Int {
        Int::from(v)
    }

    const SURFACE: &str = "x0^2 + x1^3*x3 + x1*x2^5 + x2*x3^19";

    #[test]
    fn parse_and_serialize_round_trip() {
        let p = parse_potential(SURFACE, None).unwrap();
        assert_eq!(p.num_variables(), 4);
        assert_eq!(serialize_potential(&p), SURFACE);
        let again = parse_potential(&serialize_potential(&p), None).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn implicit_multiplication_matches_starred_form() {
        let starred = "x0^2 + x1^3*x5 + x2^7*x4 + x2*x3^37 + x1*x4^893 + x3*x5^904149";
        let spaced = "x0^2 + x1^3 x5 + x2^7 x4 + x2 x3^37 + x1 x4^893 + x3 x5^904149";
        assert_eq!(
            parse_potential(starred, None).unwrap(),
            parse_potential(spaced, None).unwrap()
        );
    }

    #[test]
    fn repeated_variables_accumulate() {
        let a = parse_potential("x0*x0 + x0*x1^2", None).unwrap();
        let b = parse_potential("x0^2 + x1^2*x0", None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_potential("x0^2 + ", None) {
            Err(PotentialError::Syntax { position, .. }) => assert_eq!(position, 7),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(
            parse_potential("y0^2", None),
            Err(PotentialError::Syntax { .. })
        ));
        assert!(matches!(
            parse_potential("x^2", None),
            Err(PotentialError::Syntax { .. })
        ));
        assert!(matches!(
            parse_potential("x0^", None),
            Err(PotentialError::Syntax { .. })
        ));
        assert!(matches!(
            parse_potential("", None),
            Err(PotentialError::Syntax { .. })
        ));
        assert!(matches!(
            parse_potential("x0^2 ++ x1^2", None),
            Err(PotentialError::Syntax { .. })
        ));
        assert!(matches!(
            parse_potential("x0^2 x", None),
            Err(PotentialError::Syntax { .. })
        ));
    }

    #[test]
    fn degenerate_terms_are_rejected() {
        assert!(matches!(
            parse_potential("x0^0", None),
            Err(PotentialError::Syntax { .. })
        ));
        assert!(matches!(
            parse_potential("x0", None),
            Err(PotentialError::Syntax { .. })
        ));
    }

    #[test]
    fn explicit_variable_count_is_enforced() {
        assert!(matches!(
            parse_potential("x5^2", Some(3)),
            Err(PotentialError::IndexOutOfRange {
                index: 5,
                num_variables: 3
            })
        ));
        assert!(matches!(
            parse_potential("x0^3", Some(2)),
            Err(PotentialError::WrongMonomialCount {
                monomials: 1,
                variables: 2
            })
        ));
    }

    #[test]
    fn inferred_count_requires_square() {
        assert!(matches!(
            parse_potential("x0^2 + x1^3 + x2^4 + x0*x1", None),
            Err(PotentialError::WrongMonomialCount {
                monomials: 4,
                variables: 3
            })
        ));
    }

    #[test]
    fn validate_aligns_rows_by_variable() {
        let p = parse_potential(SURFACE, None).unwrap();
        let em = validate_delsarte(&p).unwrap();
        let rows: Vec<Vec<Int>> = em.matrix().rows().map(|r| r.to_vec()).collect();
        assert_eq!(
            rows,
            vec![
                vec![int(2), int(0), int(0), int(0)],
                vec![int(0), int(3), int(0), int(1)],
                vec![int(0), int(1), int(5), int(0)],
                vec![int(0), int(0), int(1), int(19)],
            ]
        );
        assert_eq!(em.determinant(), &int(572));
        assert_eq!(em.monomial_for_variable(), &[0, 1, 2, 3]);

        let permuted = parse_potential("x1*x2^5 + x0^2 + x2*x3^19 + x1^3*x3", None).unwrap();
        let em2 = validate_delsarte(&permuted).unwrap();
        assert_eq!(em2.matrix(), em.matrix());
        assert_eq!(em2.monomial_for_variable(), &[1, 3, 0, 2]);
    }

    #[test]
    fn validate_reports_singular_before_shape() {
        let p = parse_potential("x0^2*x1^2 + x0*x1", None).unwrap();
        assert_eq!(validate_delsarte(&p), Err(PotentialError::Singular));
    }

    #[test]
    fn validate_rejects_bad_shapes() {
        let p = parse_potential("x0^2*x1 + x0^3*x2 + x1^2*x2", None).unwrap();
        assert!(matches!(
            validate_delsarte(&p),
            Err(PotentialError::DuplicateOwner { variable: 0, .. })
        ));

        let p = parse_potential("x0^2*x2 + x1^2*x2 + x2^3*x0", None).unwrap();
        assert!(matches!(
            validate_delsarte(&p),
            Err(PotentialError::ColumnConflict { variable: 2, .. })
        ));

        let p = parse_potential("x0^2*x1*x2 + x1^3 + x2^3", None).unwrap();
        assert!(matches!(
            validate_delsarte(&p),
            Err(PotentialError::NotNormalForm { index: 0, .. })
        ));
    }

    #[test]
    fn decompose_mixed_potential() {
        // Loop over 0 -> 3 -> 6 -> 4 -> 0, Fermat at 1, chain 2 -> 5.
        let text = "x0^2*x3 + x1^3 + x2^4*x5 + x3^5*x6 + x4^6*x0 + x5^7 + x6^8*x4";
        let p = parse_potential(text, None).unwrap();
        let atoms = decompose_atoms(&validate_delsarte(&p).unwrap());
        assert_eq!(atoms.len(), 3);
        assert_eq!(atoms[0].kind, AtomKind::Loop);
        assert_eq!(atoms[0].indices, vec![0, 3, 6, 4]);
        assert_eq!(atoms[0].exponents, vec![int(2), int(5), int(8), int(6)]);
        assert_eq!(atoms[1].kind, AtomKind::Fermat);
        assert_eq!(atoms[1].indices, vec![1]);
        assert_eq!(atoms[1].exponents, vec![int(3)]);
        assert_eq!(atoms[2].kind, AtomKind::Chain);
        assert_eq!(atoms[2].indices, vec![2, 5]);
        assert_eq!(atoms[2].exponents, vec![int(4), int(7)]);
    }

    #[test]
    fn loops_start_at_their_smallest_variable() {
        let p = parse_potential("x1^2*x0 + x0^2*x1", None).unwrap();
        let atoms = decompose_atoms(&validate_delsarte(&p).unwrap());
        assert_eq!(atoms.len(), 1);
        assert_eq!(atoms[0].kind, AtomKind::Loop);
        assert_eq!(atoms[0].indices, vec![0, 1]);
    }

    #[test]
    fn chains_run_head_to_tail() {
        let p = parse_potential("x0^3 + x1^2*x2 + x2^2", None).unwrap();
        let atoms = decompose_atoms(&validate_delsarte(&p).unwrap());
        assert_eq!(atoms.len(), 2);
        assert_eq!(atoms[0].kind, AtomKind::Fermat);
        assert_eq!(atoms[1].kind, AtomKind::Chain);
        assert_eq!(atoms[1].indices, vec![1, 2]);

        let reversed = parse_potential("x0^2 + x2^2*x1 + x1^3", None).unwrap();
        let atoms = decompose_atoms(&validate_delsarte(&reversed).unwrap());
        assert_eq!(atoms[1].kind, AtomKind::Chain);
        assert_eq!(atoms[1].indices, vec![2, 1]);
    }

    #[test]
    fn transpose_reverses_loop_direction() {
        let p = parse_potential(SURFACE, None).unwrap();
        let t = transpose_potential(&validate_delsarte(&p).unwrap());
        assert_eq!(
            serialize_potential(&t),
            "x0^2 + x1^3*x2 + x2^5*x3 + x1*x3^19"
        );
    }
}
