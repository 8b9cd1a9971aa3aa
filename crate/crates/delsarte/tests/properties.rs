//! Randomized invariants of the full pipeline: round-trips, dual-route
//! linear algebra, mirror symmetry, quotient group orders, and agreement
//! between the closed formulas and the toric oracle.

use num::integer::gcd;
use proptest::prelude::*;

use delsarte::dbscan::{enumerate_delsarte, scan_rank, ScanMode, ScanOptions, WeightSystem};
use delsarte::oracle::{mld_oracle, GroupMode, OracleError, OracleOptions, StrataMode};
use delsarte::{
    assemble_atom_inverses, atom_inverse, certify, check_quasismooth, determinant, invert_matrix,
    is_calabi_yau, mld_even_subquotient, mld_formula, parse_potential, serialize_potential,
    transpose_potential, validate_delsarte, Atom, AtomKind, Int, IntMatrix, Monomial, Potential,
    Rat,
};

/// Valid Delsarte potentials: random diagonal exponents with pointer targets
/// drawn from a permutation, so no column absorbs two pointers.
fn potentials() -> impl Strategy<Value = Potential> {
    (1usize..=6)
        .prop_flat_map(|k| {
            (
                proptest::collection::vec(2i64..=9, k),
                proptest::collection::vec(any::<bool>(), k),
                Just((0..k).collect::<Vec<usize>>()).prop_shuffle(),
            )
        })
        .prop_map(|(exponents, pure, perm)| {
            let k = exponents.len();
            let monomials: Vec<Monomial> = (0..k)
                .map(|i| {
                    let mut pairs = vec![(i, Int::from(exponents[i]))];
                    if !pure[i] && perm[i] != i {
                        pairs.push((perm[i], Int::from(1)));
                    }
                    Monomial::from_pairs(k, &pairs).unwrap()
                })
                .collect();
            Potential::new(monomials).unwrap()
        })
}

/// Calabi-Yau weight systems with small entries and gcd 1.
fn cy_weight_systems() -> impl Strategy<Value = WeightSystem> {
    proptest::collection::vec(1i64..=10, 3..=5).prop_map(|raw| {
        let g = raw.iter().fold(0, |acc, &x| gcd(acc, x));
        let weights: Vec<Int> = raw.iter().map(|&x| Int::from(x / g)).collect();
        let degree: Int = weights.iter().sum();
        WeightSystem { weights, degree }
    })
}

fn atoms() -> impl Strategy<Value = Atom> {
    let fermat = (2i64..=9).prop_map(|b| Atom {
        kind: AtomKind::Fermat,
        indices: vec![0],
        exponents: vec![Int::from(b)],
    });
    let cyclic = (2usize..=8)
        .prop_flat_map(|k| proptest::collection::vec(2i64..=9, k))
        .prop_map(|bs| Atom {
            kind: AtomKind::Loop,
            indices: (0..bs.len()).collect(),
            exponents: bs.into_iter().map(Int::from).collect(),
        });
    let chain = (2usize..=8)
        .prop_flat_map(|k| proptest::collection::vec(2i64..=9, k))
        .prop_map(|bs| Atom {
            kind: AtomKind::Chain,
            indices: (0..bs.len()).collect(),
            exponents: bs.into_iter().map(Int::from).collect(),
        });
    prop_oneof![fermat, cyclic, chain]
}

/// The atom's exponent matrix in local position space: diagonal exponents,
/// a 1 one place to the right of the diagonal, wrapping only for loops.
fn local_matrix(atom: &Atom) -> IntMatrix {
    let k = atom.exponents.len();
    let mut rows = vec![vec![Int::from(0); k]; k];
    for s in 0..k {
        rows[s][s] = atom.exponents[s].clone();
        match atom.kind {
            AtomKind::Fermat => {}
            AtomKind::Loop => rows[s][(s + 1) % k] = Int::from(1),
            AtomKind::Chain => {
                if s + 1 < k {
                    rows[s][s + 1] = Int::from(1);
                }
            }
        }
    }
    IntMatrix::from_rows(rows).unwrap()
}

proptest! {
    #[test]
    fn serialization_round_trips(p in potentials()) {
        let text = serialize_potential(&p);
        prop_assert_eq!(parse_potential(&text, None).unwrap(), p);
    }

    #[test]
    fn monomial_order_is_immaterial(
        (p, shuffled) in potentials().prop_flat_map(|p| {
            let monomials = p.monomials().to_vec();
            (Just(p), Just(monomials).prop_shuffle())
        })
    ) {
        let reordered = Potential::new(shuffled).unwrap();
        let em = validate_delsarte(&p).unwrap();
        let em_reordered = validate_delsarte(&reordered).unwrap();
        prop_assert_eq!(em.matrix(), em_reordered.matrix());
        prop_assert_eq!(
            delsarte::decompose_atoms(&em),
            delsarte::decompose_atoms(&em_reordered)
        );
    }

    #[test]
    fn inverse_is_exact(p in potentials()) {
        let em = validate_delsarte(&p).unwrap();
        let inverse = invert_matrix(em.matrix()).unwrap();
        prop_assert!(inverse.left_mul_int(em.matrix()).is_identity());
    }

    #[test]
    fn closed_form_inverse_matches_elimination(atom in atoms()) {
        let matrix = local_matrix(&atom);
        prop_assert_eq!(atom_inverse(&atom), invert_matrix(&matrix).unwrap());
    }

    #[test]
    fn loop_determinant_identity(
        bs in (2usize..=8).prop_flat_map(|k| proptest::collection::vec(2i64..=9, k))
    ) {
        let k = bs.len();
        let atom = Atom {
            kind: AtomKind::Loop,
            indices: (0..k).collect(),
            exponents: bs.iter().map(|&b| Int::from(b)).collect(),
        };
        let product: Int = bs.iter().map(|&b| Int::from(b)).product();
        let corner = if k % 2 == 1 { Int::from(1) } else { Int::from(-1) };
        prop_assert_eq!(determinant(&local_matrix(&atom)), product + corner);
    }

    #[test]
    fn assembled_blocks_equal_the_global_inverse(p in potentials()) {
        let em = validate_delsarte(&p).unwrap();
        let atoms = delsarte::decompose_atoms(&em);
        let assembled = assemble_atom_inverses(&atoms, em.dim());
        prop_assert_eq!(assembled, invert_matrix(em.matrix()).unwrap());
    }

    #[test]
    fn transposition_is_an_involution(p in potentials()) {
        let em = validate_delsarte(&p).unwrap();
        let once = validate_delsarte(&transpose_potential(&em)).unwrap();
        let twice = validate_delsarte(&transpose_potential(&once)).unwrap();
        prop_assert_eq!(twice.matrix(), em.matrix());
    }

    #[test]
    fn mirror_charges_belong_to_the_transpose(p in potentials()) {
        let Ok(cert) = certify(&p) else { return Ok(()) };
        let transpose = transpose_potential(&cert.exponent_matrix);
        let Ok(mirror_cert) = certify(&transpose) else { return Ok(()) };
        prop_assert_eq!(&cert.mirror, &mirror_cert.charges);
        prop_assert_eq!(&cert.charges, &mirror_cert.mirror);
        prop_assert_eq!(
            is_calabi_yau(&cert.charges),
            is_calabi_yau(&mirror_cert.charges)
        );
    }

    #[test]
    fn group_orders_factor_through_the_degree(p in potentials()) {
        let Ok(cert) = certify(&p) else { return Ok(()) };
        let det = cert.exponent_matrix.determinant().clone();
        let abs = if det < Int::from(0) { -det } else { det };
        prop_assert_eq!(&cert.orders.aut_f, &abs);
        prop_assert_eq!(
            &cert.orders.aut_t * &cert.charges.degree,
            cert.orders.aut_f.clone()
        );
    }

    #[test]
    fn quasismoothness_is_relabeling_invariant(
        (p, perm) in potentials().prop_flat_map(|p| {
            let k = p.num_variables();
            (Just(p), Just((0..k).collect::<Vec<usize>>()).prop_shuffle())
        })
    ) {
        let relabeled: Vec<Monomial> = p
            .monomials()
            .iter()
            .map(|m| {
                let mut exps = vec![Int::from(0); m.num_variables()];
                for (j, e) in m.exponents().iter().enumerate() {
                    exps[perm[j]] = e.clone();
                }
                Monomial::new(exps).unwrap()
            })
            .collect();
        let original = check_quasismooth(p.monomials()).unwrap();
        let mapped = check_quasismooth(&relabeled).unwrap();
        prop_assert_eq!(original.verdict, mapped.verdict);
    }

    #[test]
    fn enumerated_candidates_recover_their_weight_system(ws in cy_weight_systems()) {
        for potential in enumerate_delsarte(&ws) {
            let cert = certify(&potential).unwrap();
            prop_assert!(cert.calabi_yau);
            prop_assert_eq!(&cert.charges.weights, &ws.weights);
            prop_assert_eq!(&cert.charges.degree, &ws.degree);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_agrees_with_the_formulas(ws in cy_weight_systems()) {
        let options = OracleOptions { element_bound: 100_000, ..OracleOptions::default() };
        for potential in enumerate_delsarte(&ws).into_iter().take(4) {
            let cert = certify(&potential).unwrap();
            if !cert.is_complete() {
                continue;
            }
            let expected = mld_formula(&cert).unwrap();
            match mld_oracle(&cert, &options) {
                Ok(report) => {
                    prop_assert_eq!(&report.value, &expected);
                    let remark = mld_oracle(
                        &cert,
                        &OracleOptions { strata: StrataMode::Remark, ..options.clone() },
                    );
                    prop_assert_eq!(remark.unwrap().value, expected);
                }
                Err(OracleError::GroupTooLarge { .. })
                | Err(OracleError::ModulusOverflow { .. }) => continue,
                Err(other) => return Err(TestCaseError::fail(other.to_string())),
            }
            if cert.even_shape().is_some() {
                let even = mld_oracle(
                    &cert,
                    &OracleOptions { mode: GroupMode::EvenSubgroup, ..options.clone() },
                );
                match even {
                    Ok(report) => {
                        prop_assert_eq!(report.value, mld_even_subquotient(&cert).unwrap());
                    }
                    Err(OracleError::GroupTooLarge { .. })
                    | Err(OracleError::ModulusOverflow { .. }) => continue,
                    Err(other) => return Err(TestCaseError::fail(other.to_string())),
                }
            }
        }
    }

    #[test]
    fn fermat_mld_is_the_smallest_reciprocal_exponent(ws in cy_weight_systems()) {
        for potential in enumerate_delsarte(&ws) {
            let cert = certify(&potential).unwrap();
            if !cert.is_complete() || cert.atoms.iter().any(|a| a.kind != AtomKind::Fermat) {
                continue;
            }
            let matrix = cert.exponent_matrix.matrix();
            let smallest = (0..matrix.dim())
                .map(|i| Rat::new(Int::from(1), matrix.entry(i, i).clone()))
                .min()
                .unwrap();
            prop_assert_eq!(mld_formula(&cert).unwrap(), smallest);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn scans_are_independent_of_the_worker_count(
        systems in proptest::collection::vec(cy_weight_systems(), 1..=4)
    ) {
        let options = ScanOptions {
            mode: ScanMode::Variety,
            check_top: 0,
            ..ScanOptions::default()
        };
        let sequential = scan_rank(&systems, &ScanOptions { jobs: Some(1), ..options.clone() });
        let parallel = scan_rank(&systems, &ScanOptions { jobs: Some(3), ..options.clone() });
        let as_lines = |records: &[delsarte::ScanRecord]| -> Vec<String> {
            records.iter().map(|r| r.to_json().to_string()).collect()
        };
        prop_assert_eq!(as_lines(&sequential), as_lines(&parallel));
    }
}
