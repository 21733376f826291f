//! Deterministic JSON reports.
//!
//! Every CLI run can emit a single JSON document. Determinism contract:
//! the same tool version, command, and inputs produce byte-identical
//! output. Nothing time- or environment-dependent is recorded; rationals
//! are serialized as exact `p/q` strings; map keys are sorted; the input is
//! identified by a SHA-256 digest of its canonical text form.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::calabi::{
    DenseHermitian, InducibilityReport, InducibilityVerdict, InducingMultipleSearch,
};
use crate::cone::{
    ConeInducibilityReport, ConeVerdict, FlatnessReport, RadialIdentityReport,
};
use crate::curvature::{BridgeReport, RicciFlatReport, RicciReport};
use crate::oracle::PointCheck;
use crate::series::{Coefficient, HermitianSeries, MultiIndex};

/// Stated conventions, embedded verbatim in every report so a result can be
/// interpreted without access to this source tree.
#[derive(Debug, Clone, Serialize)]
pub struct Conventions {
    pub monomial_order: String,
    pub metric_convention: String,
    pub radial_diastasis_constant: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            monomial_order: "graded: total degree first, then ascending lexicographic \
                             with the first variable most significant"
                .to_string(),
            metric_convention: "g_ab = d^2 phi / (dz_a dzbar_b); \
                                Ricci potential = -2 log det g"
                .to_string(),
            radial_diastasis_constant: "the recentered radial diastasis carries additive \
                                        constant eps^(2c) so it vanishes at its center; \
                                        for c = 1 this equals eps^2"
                .to_string(),
        }
    }
}

/// The report envelope. Field order is fixed; `result` is one of the typed
/// payloads below.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub input_hash: String,
    pub conventions: Conventions,
    pub result: Value,
}

impl Report {
    pub fn new(
        command: &str,
        parameters: BTreeMap<String, String>,
        input_canonical: &str,
        result: Value,
    ) -> Report {
        Report {
            schema_version: 1,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            parameters,
            input_hash: input_digest(input_canonical),
            conventions: Conventions::default(),
            result,
        }
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json_string(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }
}

/// `sha256:<hex>` digest of a canonical text.
pub fn input_digest(canonical: &str) -> String {
    let digest = Sha256::digest(canonical.as_bytes());
    let mut out = String::with_capacity(7 + 64);
    out.push_str("sha256:");
    for byte in digest {
        write!(out, "{byte:02x}").expect("string write");
    }
    out
}

/// Canonical text form of a potential: header line, then one line per
/// stored coefficient in graded order.
pub fn canonical_series_text(series: &HermitianSeries) -> String {
    let mut out = format!("n={} d={}\n", series.vars(), series.order_bound());
    for (m, k, c) in series.term_triples() {
        writeln!(out, "{m}|{k}|{}|{}", c.re, c.im).expect("string write");
    }
    out
}

pub fn rational_text(q: &BigRational) -> String {
    q.to_string()
}

fn coeff_value(c: &Coefficient) -> Value {
    json!({ "re": c.re.to_string(), "im": c.im.to_string() })
}

fn term_value(m: &MultiIndex, k: &MultiIndex, c: &Coefficient) -> Value {
    json!({ "m": m.0, "k": k.0, "re": c.re.to_string(), "im": c.im.to_string() })
}

pub fn series_terms_value(series: &HermitianSeries) -> Value {
    Value::Array(
        series
            .term_triples()
            .iter()
            .map(|(m, k, c)| term_value(m, k, c))
            .collect(),
    )
}

pub fn matrix_value(matrix: &DenseHermitian) -> Value {
    let dim = matrix.dim();
    Value::Array(
        (0..dim)
            .map(|j| Value::Array((0..dim).map(|k| coeff_value(matrix.get(j, k))).collect()))
            .collect(),
    )
}

fn witness_value(support: &[(MultiIndex, Coefficient)]) -> Value {
    Value::Array(
        support
            .iter()
            .map(|(m, c)| json!({ "monomial": m.0, "re": c.re.to_string(), "im": c.im.to_string() }))
            .collect(),
    )
}

pub fn inducibility_value(report: &InducibilityReport, vars: usize) -> Value {
    match &report.verdict {
        InducibilityVerdict::ConsistentUpTo {
            order,
            rank_lower_bound,
        } => {
            let weights: Vec<String> = report
                .certificate
                .as_ref()
                .map(|c| c.weights.iter().map(|w| w.to_string()).collect())
                .unwrap_or_default();
            json!({
                "status": "consistent_up_to",
                "order": order,
                "matrix_dim": report.matrix_dim,
                "rank_lower_bound": rank_lower_bound,
                "certificate_weights": weights,
            })
        }
        InducibilityVerdict::NotInduced { order, value, .. } => json!({
            "status": "not_induced",
            "order": order,
            "matrix_dim": report.matrix_dim,
            "witness": witness_value(&report.witness_support(vars)),
            "witness_value": value.to_string(),
        }),
    }
}

fn verdict_summary_value(verdict: &InducibilityVerdict) -> Value {
    match verdict {
        InducibilityVerdict::ConsistentUpTo {
            order,
            rank_lower_bound,
        } => json!({
            "status": "consistent_up_to",
            "order": order,
            "rank_lower_bound": rank_lower_bound,
        }),
        InducibilityVerdict::NotInduced { order, value, .. } => json!({
            "status": "not_induced",
            "order": order,
            "witness_value": value.to_string(),
        }),
    }
}

pub fn multiple_search_value(search: &InducingMultipleSearch) -> Value {
    json!({
        "minimal": search.minimal,
        "attempts": search.attempts.iter().map(|a| {
            let mut v = verdict_summary_value(&a.verdict);
            v["multiple"] = json!(a.multiple);
            v
        }).collect::<Vec<_>>(),
    })
}

pub fn cone_value(report: &ConeInducibilityReport, base_vars: usize) -> Value {
    let blocks: Vec<Value> = report
        .blocks
        .iter()
        .map(|b| json!({ "block": b.block, "dim": b.dim, "rank": b.rank }))
        .collect();
    match &report.verdict {
        ConeVerdict::ConsistentUpTo {
            order,
            rank_lower_bound,
        } => json!({
            "status": "consistent_up_to",
            "order": order,
            "rank_lower_bound": rank_lower_bound,
            "blocks": blocks,
        }),
        ConeVerdict::NotInduced {
            order,
            block,
            value,
            ..
        } => json!({
            "status": "not_induced",
            "order": order,
            "block": block,
            "witness": witness_value(&report.witness_support(base_vars)),
            "witness_value": value.to_string(),
            "blocks": blocks,
        }),
    }
}

fn obstruction_value(term: &Option<(MultiIndex, MultiIndex, Coefficient)>) -> Value {
    match term {
        None => Value::Null,
        Some((m, k, c)) => term_value(m, k, c),
    }
}

pub fn ricci_flat_value(report: &RicciFlatReport) -> Value {
    json!({
        "order": report.order,
        "flat": report.flat,
        "achieved_order": report.achieved_order,
        "first_obstruction": obstruction_value(&report.first_obstruction),
    })
}

pub fn ricci_report_value(report: &RicciReport) -> Value {
    json!({
        "order": report.order,
        "lambda": report.lambda.as_ref().map(|l| l.to_string()),
        "einstein": report.einstein,
        "residual_terms": report.residual_terms,
        "first_mismatch": obstruction_value(&report.first_mismatch),
        "ricci_potential": series_terms_value(&report.ricci_potential),
    })
}

pub fn bridge_value(report: &BridgeReport) -> Value {
    json!({
        "base_vars": report.base_vars,
        "einstein_target": report.einstein_target.to_string(),
        "base": ricci_report_value(&report.base_report),
        "base_is_einstein_target": report.base_is_einstein_target,
        "cone": ricci_flat_value(&report.cone_report),
        "cone_ricci_flat": report.cone_ricci_flat,
        "consistent": report.consistent,
    })
}

pub fn flatness_value(report: &FlatnessReport) -> Value {
    json!({
        "is_flat": report.is_flat,
        "note": report.note,
        "substituted": report.substituted.as_ref().map(series_terms_value),
    })
}

fn complex_value(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn point_check_value(check: &PointCheck) -> Value {
    json!({
        "point": check.point.iter().map(|&z| complex_value(z)).collect::<Vec<_>>(),
        "series_value": complex_value(check.series_value),
        "reference_value": complex_value(check.reference_value),
        "rel_error": check.rel_error,
    })
}

pub fn radial_identity_value(report: &RadialIdentityReport) -> Value {
    json!({
        "epsilon": report.epsilon.to_string(),
        "weight": report.weight.to_string(),
        "prefactor": report.prefactor.to_string(),
        "tolerance": report.tolerance,
        "max_rel_error": report.max_rel_error,
        "per_point": report.per_point.iter().map(point_check_value).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calabi::inducibility;
    use crate::cone::flat_potential;

    #[test]
    fn digest_is_stable() {
        assert_eq!(
            input_digest(""),
            "sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
        assert_eq!(input_digest("a"), input_digest("a"));
        assert_ne!(input_digest("a"), input_digest("b"));
    }

    #[test]
    fn canonical_text_is_graded_and_exact() {
        let flat = flat_potential(2, 2);
        let text = canonical_series_text(&flat);
        assert_eq!(text, "n=2 d=2\n(0,1)|(0,1)|1|0\n(1,0)|(1,0)|1|0\n");
    }

    #[test]
    fn report_serialization_is_deterministic() {
        let flat = flat_potential(1, 3);
        let analysis = inducibility(&flat, 3).unwrap();
        let mut params = BTreeMap::new();
        params.insert("order".to_string(), "3".to_string());
        params.insert("potential".to_string(), "flat:1".to_string());
        let make = || {
            Report::new(
                "analyze",
                params.clone(),
                &canonical_series_text(&flat),
                inducibility_value(&analysis, 1),
            )
            .to_json_string()
        };
        let a = make();
        let b = make();
        assert_eq!(a, b);
        assert!(a.contains("\"schema_version\": 1"));
        assert!(a.contains("\"status\": \"consistent_up_to\""));
        assert!(a.ends_with('\n'));
        assert!(!a.contains("time"));
    }

    #[test]
    fn witness_payload_labels_monomials() {
        let pq = crate::corpus::PotentialSpec::PerturbedQuartic
            .realize(3)
            .unwrap();
        let report = inducibility(&pq, 3).unwrap();
        let value = inducibility_value(&report, 1);
        assert_eq!(value["status"], "not_induced");
        assert_eq!(value["witness"][0]["monomial"], json!([3]));
        assert_eq!(value["witness_value"], "-1/12");
    }
}
