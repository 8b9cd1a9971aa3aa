//! End-to-end acceptance gate. Each test covers one numbered criterion and
//! prints a single summary line, so a full run yields one pass/fail line per
//! criterion. Wall-clock budgets are asserted where a criterion states one.

use std::path::Path;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num::integer::gcd;
use num::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use delsarte::oracle::{mld_oracle, GroupMode, OracleError, OracleOptions};
use delsarte::{
    certify, check_quasismooth, generate_extremal, invert_matrix, liu_potential,
    mld_even_subquotient, mld_formula, parse_potential, scan_rank, serialize_potential,
    verify_identity, Atom, AtomKind, CandidateTag, ChargeData, Int, IntMatrix, Monomial, Rat,
    ScanMode, ScanOptions, ScanRecord, WeightSystem,
};

fn int(v: i64) -> Int {
    Int::from(v)
}

fn ints(values: &[i64]) -> Vec<Int> {
    values.iter().map(|&v| Int::from(v)).collect()
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Local exponent matrix of an atom, diagonal exponents with the pointer 1
/// one place right of the diagonal (wrapping only for loops).
fn local_matrix(atom: &Atom) -> IntMatrix {
    let k = atom.exponents.len();
    let mut rows = vec![vec![int(0); k]; k];
    for s in 0..k {
        rows[s][s] = atom.exponents[s].clone();
        match atom.kind {
            AtomKind::Fermat => {}
            AtomKind::Loop => rows[s][(s + 1) % k] = int(1),
            AtomKind::Chain => {
                if s + 1 < k {
                    rows[s][s + 1] = int(1);
                }
            }
        }
    }
    IntMatrix::from_rows(rows).unwrap()
}

/// Whether `value` is a nonnegative integer combination of the mirror
/// charges, i.e. `value * degree` is reachable from the mirror weights by an
/// unbounded coin sum.
fn is_charge_combination(value: &Rat, mirror: &ChargeData) -> bool {
    let target = value * Rat::from_integer(mirror.degree.clone());
    if !target.is_integer() {
        return false;
    }
    let Some(t) = target.to_integer().to_usize() else {
        return false;
    };
    let mut reachable = vec![false; t + 1];
    reachable[0] = true;
    for w in &mirror.weights {
        let Some(c) = w.to_usize() else { continue };
        if c == 0 || c > t {
            continue;
        }
        for i in c..=t {
            if reachable[i - c] {
                reachable[i] = true;
            }
        }
    }
    reachable[t]
}

#[test]
fn criterion_1_degree_22_surface_analysis() {
    let start = Instant::now();
    let potential = parse_potential("x0^2 + x1^3*x3 + x1*x2^5 + x2*x3^19", None).unwrap();
    let cert = certify(&potential).unwrap();

    assert_eq!(cert.charges.weights, ints(&[11, 7, 3, 1]));
    assert_eq!(cert.charges.degree, int(22));
    assert_eq!(cert.mirror.degree, int(26));
    let mut mirror_weights = cert.mirror.weights.clone();
    mirror_weights.sort();
    assert_eq!(mirror_weights, ints(&[1, 5, 7, 13]));
    assert_eq!(cert.orders.aut_t, int(26));

    let formula = mld_formula(&cert).unwrap();
    assert_eq!(formula, rat(1, 26));
    let even = mld_even_subquotient(&cert).unwrap();
    assert_eq!(even, rat(1, 13));

    let oracle = mld_oracle(&cert, &OracleOptions::default()).unwrap();
    assert_eq!(oracle.value, formula);
    let even_options = OracleOptions {
        mode: GroupMode::EvenSubgroup,
        ..OracleOptions::default()
    };
    let oracle_even = mld_oracle(&cert, &even_options).unwrap();
    assert_eq!(oracle_even.value, even);

    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(1),
        "took {elapsed:?}, budget 1 s"
    );
    println!(
        "criterion 1 PASS: degree-22 surface has mld 1/26 (even subquotient 1/13), \
         oracle agrees, in {elapsed:?}"
    );
}

#[test]
fn criterion_2_threefold_record_example() {
    let start = Instant::now();
    let example = generate_extremal(3).unwrap();

    assert_eq!(example.b, ints(&[2, 3, 5, 12]));
    assert_eq!(example.v, int(165));
    assert_eq!(example.degree, int(191));
    assert_eq!(example.m, int(311));
    assert_eq!(example.weights.weights, ints(&[95, 61, 26, 8, 1]));
    assert_eq!(example.mld, rat(1, 311));
    verify_identity(&example).unwrap();
    assert_eq!(int(311) * int(191) - int(1), int(2 * 3 * 5 * 12) * int(165));

    let cert = certify(&example.potential).unwrap();
    assert_eq!(mld_formula(&cert).unwrap(), rat(1, 311));
    let oracle = mld_oracle(&cert, &OracleOptions::default()).unwrap();
    assert_eq!(oracle.value, rat(1, 311));

    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(30),
        "took {elapsed:?}, budget 30 s"
    );
    println!(
        "criterion 2 PASS: n=3 record (95, 61, 26, 8, 1; 191) has mld 1/311, identity and \
         oracle agree, in {elapsed:?}"
    );
}

#[test]
fn criterion_3_fourfold_record_example() {
    let start = Instant::now();
    let example = generate_extremal(4).unwrap();

    assert_eq!(example.degree, int(925594));
    assert_eq!(example.m, int(677785));
    assert_eq!(
        example.weights.weights,
        ints(&[462797, 308531, 132129, 21445, 691, 1])
    );
    assert_eq!(
        serialize_potential(&example.potential),
        "x0^2 + x1^3*x5 + x2^7*x4 + x2*x3^37 + x1*x4^893 + x3*x5^904149"
    );
    assert_eq!(example.mld, rat(1, 677785));
    verify_identity(&example).unwrap();

    let cert = certify(&example.potential).unwrap();
    assert_eq!(mld_even_subquotient(&cert).unwrap(), rat(1, 677785));
    let formula_elapsed = start.elapsed();
    assert!(
        formula_elapsed < Duration::from_secs(1),
        "formula path took {formula_elapsed:?}, budget 1 s"
    );

    let even_options = OracleOptions {
        mode: GroupMode::EvenSubgroup,
        ..OracleOptions::default()
    };
    let oracle_note = match mld_oracle(&cert, &even_options) {
        Ok(report) => {
            assert_eq!(report.value, rat(1, 677785));
            "oracle agrees".to_string()
        }
        Err(OracleError::ModulusOverflow { .. }) | Err(OracleError::GroupTooLarge { .. }) => {
            "oracle skipped (group beyond exact-scan range)".to_string()
        }
        Err(other) => panic!("unexpected oracle failure: {other}"),
    };
    println!(
        "criterion 3 PASS: n=4 record has degree 925594 and mld 1/677785 in \
         {formula_elapsed:?}; {oracle_note}"
    );
}

#[test]
fn criterion_4_all_fermat_comparison_family() {
    for n in 1..=5usize {
        let example = liu_potential(n).unwrap();
        let cert = certify(&example.potential).unwrap();
        assert_eq!(
            cert.charges.weights, example.expected_weights,
            "weights mismatch at n={n}"
        );
        assert_eq!(cert.charges.degree, example.expected_degree);
        let formula = mld_formula(&cert).unwrap();
        assert_eq!(formula, example.expected_mld, "mld mismatch at n={n}");
        let reciprocal = Rat::from_integer(example.expected_degree.clone()).recip();
        assert_eq!(formula, reciprocal);
        if n <= 3 {
            let oracle = mld_oracle(&cert, &OracleOptions::default()).unwrap();
            assert_eq!(oracle.value, formula, "oracle mismatch at n={n}");
        }
    }
    println!(
        "criterion 4 PASS: all-Fermat family n=1..5 has weights d/s_i and mld 1/d, \
         oracle agrees for n<=3"
    );
}

#[test]
fn criterion_5_identity_and_gap_bounds() {
    let start = Instant::now();
    for n in 2..=8usize {
        let example = generate_extremal(n).unwrap();
        verify_identity(&example).unwrap();
        if n >= 3 {
            let threshold = Int::from(1) << (1usize << n);
            assert!(
                example.m > threshold,
                "gap bound fails at n={n}: m = {} <= 2^(2^{n})",
                example.m
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(5),
        "took {elapsed:?}, budget 5 s"
    );
    println!(
        "criterion 5 PASS: identity m*degree - 1 = prod(b)*v holds for n=2..8 and \
         1/m < 1/2^(2^n) for n=3..8, in {elapsed:?}"
    );
}

#[test]
fn criterion_6_closed_form_inverses() {
    let mut checked = 0usize;
    for kind in [AtomKind::Loop, AtomKind::Chain] {
        for k in 2..=6usize {
            for exponents in (0..k).map(|_| 2i64..=5).multi_cartesian_product() {
                let atom = Atom {
                    kind,
                    indices: (0..k).collect(),
                    exponents: exponents.iter().map(|&b| Int::from(b)).collect(),
                };
                let matrix = local_matrix(&atom);
                assert_eq!(
                    delsarte::atom_inverse(&atom),
                    invert_matrix(&matrix).unwrap(),
                    "inverse mismatch for {kind:?} with exponents {exponents:?}"
                );
                if kind == AtomKind::Loop {
                    let product: Int = exponents.iter().map(|&b| Int::from(b)).product();
                    let corner = if k % 2 == 1 { int(1) } else { int(-1) };
                    assert_eq!(delsarte::determinant(&matrix), product + corner);
                }
                checked += 1;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f_1e1d);
    for _ in 0..500 {
        let k = rng.gen_range(2..=8usize);
        let kind = if rng.gen_bool(0.5) {
            AtomKind::Loop
        } else {
            AtomKind::Chain
        };
        let exponents: Vec<Int> = (0..k).map(|_| int(rng.gen_range(2..=9))).collect();
        let atom = Atom {
            kind,
            indices: (0..k).collect(),
            exponents: exponents.clone(),
        };
        let matrix = local_matrix(&atom);
        assert_eq!(
            delsarte::atom_inverse(&atom),
            invert_matrix(&matrix).unwrap()
        );
        if kind == AtomKind::Loop {
            let product: Int = exponents.iter().product();
            let corner = if k % 2 == 1 { int(1) } else { int(-1) };
            assert_eq!(delsarte::determinant(&matrix), product + corner);
        }
        checked += 1;
    }
    println!(
        "criterion 6 PASS: closed-form atom inverses match elimination on {checked} \
         matrices, loop determinants match prod(b) + (-1)^(k-1)"
    );
}

/// Every Calabi-Yau weight system with four weights, descending, gcd 1, and
/// degree at most `max_degree`.
fn surface_weight_systems(max_degree: i64) -> Vec<WeightSystem> {
    let mut out = Vec::new();
    for d in 4..=max_degree {
        for a0 in 1..=d - 3 {
            for a1 in 1..=a0 {
                for a2 in 1..=a1 {
                    let a3 = d - a0 - a1 - a2;
                    if a3 < 1 || a3 > a2 {
                        continue;
                    }
                    if gcd(gcd(a0, a1), gcd(a2, a3)) != 1 {
                        continue;
                    }
                    out.push(WeightSystem {
                        weights: ints(&[a0, a1, a2, a3]),
                        degree: int(d),
                    });
                }
            }
        }
    }
    out
}

#[test]
fn criterion_7_oracle_formula_sweep() {
    let start = Instant::now();
    let options = OracleOptions::default();
    let mut surface_checked = 0usize;
    for ws in surface_weight_systems(60) {
        for potential in delsarte::enumerate_delsarte(&ws) {
            let cert = certify(&potential).unwrap();
            if !cert.is_complete() {
                continue;
            }
            let formula = mld_formula(&cert).unwrap();
            let report = mld_oracle(&cert, &options).unwrap();
            assert_eq!(
                report.value,
                formula,
                "oracle disagrees on {}",
                serialize_potential(&potential)
            );
            assert!(
                is_charge_combination(&report.value, &cert.mirror),
                "witness value {} is not a mirror-charge combination for {}",
                report.value,
                serialize_potential(&potential)
            );
            surface_checked += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x2026_0819);
    let mut threefold_checked = 0usize;
    for _ in 0..100 {
        let raw: Vec<i64> = (0..5).map(|_| rng.gen_range(1..=12)).collect();
        let g = raw.iter().fold(0, |acc, &x| gcd(acc, x));
        let weights: Vec<i64> = raw.iter().map(|&x| x / g).collect();
        let degree = weights.iter().sum();
        let ws = WeightSystem {
            weights: ints(&weights),
            degree: int(degree),
        };
        for potential in delsarte::enumerate_delsarte(&ws) {
            let cert = certify(&potential).unwrap();
            if !cert.is_complete() || cert.orders.aut_f > int(10_000) {
                continue;
            }
            let formula = mld_formula(&cert).unwrap();
            let report = mld_oracle(&cert, &options).unwrap();
            assert_eq!(report.value, formula);
            assert!(is_charge_combination(&report.value, &cert.mirror));
            threefold_checked += 1;
        }
    }

    assert!(
        surface_checked >= 100,
        "only {surface_checked} surface candidates checked"
    );
    assert!(
        threefold_checked >= 20,
        "only {threefold_checked} threefold candidates checked"
    );
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(600),
        "took {elapsed:?}, budget 10 min"
    );
    println!(
        "criterion 7 PASS: oracle equals formula and witnesses decompose over mirror \
         charges on {surface_checked} surface and {threefold_checked} threefold \
         candidates, in {elapsed:?}"
    );
}

#[test]
fn criterion_8_quasismoothness_checker() {
    for n in 0..=8usize {
        let vars = n + 2;
        let monomials: Vec<Monomial> = (0..vars)
            .map(|i| Monomial::from_pairs(vars, &[(i, int(i as i64 + 2))]).unwrap())
            .collect();
        let witness = check_quasismooth(&monomials).unwrap();
        assert!(
            witness.verdict,
            "Fermat potential of dimension {n} judged singular"
        );
    }

    let crafted = vec![
        Monomial::from_pairs(3, &[(0, int(2)), (1, int(1))]).unwrap(),
        Monomial::from_pairs(3, &[(2, int(3))]).unwrap(),
    ];
    let witness = check_quasismooth(&crafted).unwrap();
    assert!(!witness.verdict);
    assert_eq!(witness.failing_subset, Some(vec![1]));

    for n in 2..=8usize {
        let example = generate_extremal(n).unwrap();
        let witness = check_quasismooth(example.potential.monomials()).unwrap();
        assert!(
            witness.verdict,
            "extremal potential of dimension {n} judged singular"
        );
    }
    println!(
        "criterion 8 PASS: Fermat potentials up to dimension 8 and all extremal \
         examples are quasismooth; the crafted degenerate case fails with witness {{x1}}"
    );
}

#[test]
fn criterion_9_sample_scan_ranking() {
    let start = Instant::now();
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/sample_weight_systems.txt");
    let systems = delsarte::load_weight_systems(&path, true).unwrap();
    assert_eq!(systems.len(), 52);

    let options = ScanOptions {
        mode: ScanMode::Variety,
        check_top: 1,
        ..ScanOptions::default()
    };
    let render = |records: &[ScanRecord]| -> String {
        records
            .iter()
            .map(|r| r.to_json().to_string())
            .collect::<Vec<_>>()
            .join("\n")
    };
    let baseline = scan_rank(&systems, &options);

    let top = &baseline[0];
    assert_eq!(top.system.weights, ints(&[95, 61, 26, 8, 1]));
    assert_eq!(top.system.degree, int(191));
    let best = top.best.as_ref().unwrap();
    assert_eq!(best.mld, rat(1, 311));
    assert_eq!(best.tag, CandidateTag::VarietyLoop);
    assert!(top.oracle_checked);

    let baseline_text = render(&baseline);
    let rerun_text = render(&scan_rank(&systems, &options));
    assert_eq!(baseline_text, rerun_text, "reruns differ");
    for jobs in [1usize, 2, 4] {
        let jobs_options = ScanOptions {
            jobs: Some(jobs),
            ..options.clone()
        };
        let text = render(&scan_rank(&systems, &jobs_options));
        assert_eq!(baseline_text, text, "output differs with {jobs} workers");
    }

    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(120),
        "took {elapsed:?}, budget 2 min"
    );
    println!(
        "criterion 9 PASS: sample scan ranks (95, 61, 26, 8, 1; 191) first at mld 1/311, \
         byte-identical across reruns and worker counts, in {elapsed:?}"
    );
}
