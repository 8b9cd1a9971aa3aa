//! Exact arithmetic for Delsarte hypersurfaces in weighted projective space.
//!
//! A Delsarte potential is a sum of `n + 2` monomials in `n + 2` variables whose
//! exponent matrix `A` is invertible. This crate parses such potentials, brings
//! them to normal form, decomposes them into Fermat, loop, and chain atoms, and
//! computes from `A^{-1}`:
//!
//! * the charges, degree, and weights of the ambient weighted projective space,
//! * the transposed (mirror) potential and its charge data,
//! * the diagonal symmetry groups of the hypersurface and their quotients,
//! * the minimal log discrepancy of the quotient of the hypersurface by its
//!   torus-induced automorphisms, both by a closed formula in the mirror
//!   charges and by a direct toric computation over the singular strata.
//!
//! The two mld routes are implemented independently so that one can serve as an
//! oracle for the other. All arithmetic is exact: integers are arbitrary
//! precision and every discrepancy is a rational number, never a float.
//!
//! The [`examples`] module constructs the Sylvester-sequence families whose
//! quotients have record-small minimal log discrepancies, and [`dbscan`] scans
//! weight-system lists for extremal candidates.

pub mod bhk;
pub mod dbscan;
pub mod error;
pub mod exactlin;
pub mod examples;
pub mod oracle;
pub mod potential;
pub mod quasismooth;
pub mod report;

pub use bhk::{
    certify, charges_and_weights, check_well_formed, group_orders, is_calabi_yau, mirror_data,
    mld_even_subquotient, mld_formula, Certificate, ChargeData, GroupOrders,
};
pub use dbscan::{
    enumerate_delsarte, load_weight_systems, parse_weight_systems, scan_rank, Candidate,
    CandidateTag, ScanError, ScanMode, ScanOptions, ScanRecord, WeightSystem,
};
pub use error::Error;
pub use exactlin::{
    assemble_atom_inverses, atom_inverse, determinant, invert_matrix, Int, IntMatrix, Rat,
    RatMatrix,
};
pub use examples::{
    b_symbol, generate_extremal, liu_potential, sylvester, verify_identity, ExampleError,
    ExtremalExample, LiuExample,
};
pub use oracle::{
    mld_oracle, mld_singularity, stratum_singularity, symmetry_group, FracVector, GroupMode,
    MldMethod, MldReport, MldWitness, OracleOptions, QuotientSingularity, StrataMode, StratumCase,
    SymmetryGroup, DEFAULT_ELEMENT_BOUND,
};
pub use potential::{
    decompose_atoms, parse_potential, serialize_potential, transpose_potential, validate_delsarte,
    Atom, AtomKind, ExponentMatrix, Monomial, Potential,
};
pub use quasismooth::{
    check_quasismooth, check_quasismooth_with_limit, stratum_in_base_locus, QsWitness,
    DEFAULT_VARIABLE_LIMIT,
};
pub use report::{analyze, AnalysisReport, AnalyzeOptions};
