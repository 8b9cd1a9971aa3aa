//! Full analysis of a single potential, bundled for machine consumption.
//!
//! [`analyze`] runs the whole pipeline on one potential and collects the
//! certificate, the closed-formula mld values where they apply, and the
//! oracle's answers when requested. The report tolerates incomplete
//! certificates: a valid Delsarte potential that is not Calabi-Yau still
//! yields a report, with the verdict flags false and the mld fields empty.

use serde_json::json;

use crate::bhk::{certify, mld_even_subquotient, mld_formula, Certificate};
use crate::error::Error;
use crate::exactlin::Rat;
use crate::oracle::{
    mld_oracle, GroupMode, MldMethod, MldReport, MldWitness, OracleOptions, StrataMode,
    StratumCase, DEFAULT_ELEMENT_BOUND,
};
use crate::potential::{serialize_potential, transpose_potential, Atom, Potential};

/// Configuration for [`analyze`].
#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    /// Run the toric oracle and compare it with the formulas.
    pub oracle: bool,
    pub strata: StrataMode,
    pub element_bound: u64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            oracle: false,
            strata: StrataMode::Exhaustive,
            element_bound: DEFAULT_ELEMENT_BOUND,
        }
    }
}

/// Everything [`analyze`] learned about one potential.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub certificate: Certificate,
    /// Smallest mirror charge, when the certificate is complete.
    pub mld: Option<Rat>,
    /// Index-two subquotient mld, when the shape admits one.
    pub mld_even: Option<Rat>,
    /// Oracle answer for the induced automorphism quotient.
    pub oracle: Option<MldReport>,
    /// Oracle answer for the index-two subquotient.
    pub oracle_even: Option<MldReport>,
    /// Why the oracle could not answer, when it was asked but failed.
    pub oracle_error: Option<String>,
    /// Whether every oracle answer matches the corresponding formula;
    /// `None` until both sides exist.
    pub agreement: Option<bool>,
}

/// Runs certification, the mld formulas, and optionally the oracle.
pub fn analyze(potential: &Potential, options: &AnalyzeOptions) -> Result<AnalysisReport, Error> {
    let certificate = certify(potential)?;
    let mld = mld_formula(&certificate).ok();
    let mld_even = certificate
        .even_shape()
        .and_then(|_| mld_even_subquotient(&certificate).ok());

    let mut oracle = None;
    let mut oracle_even = None;
    let mut oracle_error = None;
    if options.oracle {
        let run = |mode: GroupMode| {
            mld_oracle(
                &certificate,
                &OracleOptions {
                    mode,
                    strata: options.strata,
                    element_bound: options.element_bound,
                },
            )
        };
        match run(GroupMode::AutT) {
            Ok(report) => oracle = Some(report),
            Err(e) => oracle_error = Some(e.to_string()),
        }
        if oracle_error.is_none() && certificate.even_shape().is_some() {
            match run(GroupMode::EvenSubgroup) {
                Ok(report) => oracle_even = Some(report),
                Err(e) => oracle_error = Some(e.to_string()),
            }
        }
    }

    let agreement = match (&mld, &oracle) {
        (Some(formula), Some(answer)) => {
            let even_matches = match (&mld_even, &oracle_even) {
                (Some(formula_even), Some(answer_even)) => *formula_even == answer_even.value,
                (None, None) => true,
                _ => false,
            };
            Some(*formula == answer.value && even_matches)
        }
        _ => None,
    };

    Ok(AnalysisReport {
        certificate,
        mld,
        mld_even,
        oracle,
        oracle_even,
        oracle_error,
        agreement,
    })
}

fn atom_json(atom: &Atom) -> serde_json::Value {
    json!({
        "kind": atom.kind.name(),
        "variables": atom.indices,
        "exponents": atom.exponents.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
    })
}

pub fn witness_json(witness: &MldWitness) -> serde_json::Value {
    match witness {
        MldWitness::MirrorWeight { index } => json!({
            "type": "mirrorWeight",
            "index": index,
        }),
        MldWitness::Stratum {
            stratum,
            case,
            element,
        } => {
            let (case_name, transverse) = match case {
                StratumCase::MeetsHypersurface => ("meetsHypersurface", None),
                StratumCase::BaseLocus { transverse } => ("baseLocus", Some(*transverse)),
            };
            json!({
                "type": "stratum",
                "stratum": stratum,
                "case": case_name,
                "transverse": transverse,
                "element": element.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            })
        }
        MldWitness::SmoothCap => json!({ "type": "smoothCap" }),
    }
}

pub fn mld_report_json(report: &MldReport) -> serde_json::Value {
    let method = match report.method {
        MldMethod::Formula => "formula",
        MldMethod::Oracle => "oracle",
    };
    json!({
        "value": report.value.to_string(),
        "method": method,
        "witness": witness_json(&report.witness),
    })
}

impl AnalysisReport {
    /// JSON form with sorted keys; every number is a decimal or `p/q` string.
    pub fn to_json(&self) -> serde_json::Value {
        let cert = &self.certificate;
        let strings = |xs: &[crate::exactlin::Int]| -> Vec<String> {
            xs.iter().map(|x| x.to_string()).collect()
        };
        let rationals = |xs: &[Rat]| -> Vec<String> { xs.iter().map(|x| x.to_string()).collect() };
        json!({
            "potential": serialize_potential(&cert.potential),
            "numVariables": cert.potential.num_variables(),
            "atoms": cert.atoms.iter().map(atom_json).collect::<Vec<_>>(),
            "determinant": cert.exponent_matrix.determinant().to_string(),
            "charges": rationals(&cert.charges.charges),
            "weights": strings(&cert.charges.weights),
            "degree": cert.charges.degree.to_string(),
            "mirrorCharges": rationals(&cert.mirror.charges),
            "mirrorWeights": strings(&cert.mirror.weights),
            "mirrorDegree": cert.mirror.degree.to_string(),
            "mirrorPotential": serialize_potential(&transpose_potential(&cert.exponent_matrix)),
            "calabiYau": cert.calabi_yau,
            "wellFormed": cert.well_formed,
            "quasismooth": cert.quasismooth.verdict,
            "groupOrders": {
                "autF": cert.orders.aut_f.to_string(),
                "jF": cert.orders.j_f.to_string(),
                "autT": cert.orders.aut_t.to_string(),
            },
            "mldFormula": self.mld.as_ref().map(|x| x.to_string()),
            "mldEvenSubquotient": self.mld_even.as_ref().map(|x| x.to_string()),
            "oracle": self.oracle.as_ref().map(mld_report_json),
            "oracleEven": self.oracle_even.as_ref().map(mld_report_json),
            "oracleError": self.oracle_error,
            "agreement": self.agreement,
        })
    }
}
