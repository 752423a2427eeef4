//! Machine-readable outcomes of identity checks and nonnegativity scans.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::series::ScanOutcome;

/// Verification status. Equality identities report `pass`/`fail`; conjecture
/// scans report `scan-pass`/`scan-fail` so a clean scan is never mistaken for
/// a verified equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "scan-pass")]
    ScanPass,
    #[serde(rename = "scan-fail")]
    ScanFail,
}

impl Status {
    pub fn is_ok(self) -> bool {
        matches!(self, Status::Pass | Status::ScanPass)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ScanPass => "scan-pass",
            Status::ScanFail => "scan-fail",
        };
        f.write_str(s)
    }
}

/// First discrepant or negative coefficient. Coefficients travel as decimal
/// strings so arbitrary precision survives every consumer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub q: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
}

impl Discrepancy {
    pub fn negative(q: usize, z: Option<i64>, value: &BigInt) -> Self {
        Discrepancy {
            q,
            z,
            value: Some(value.to_string()),
            lhs: None,
            rhs: None,
        }
    }

    pub fn unequal(q: usize, z: Option<i64>, lhs: &BigInt, rhs: &BigInt) -> Self {
        Discrepancy {
            q,
            z,
            value: None,
            lhs: Some(lhs.to_string()),
            rhs: Some(rhs.to_string()),
        }
    }
}

/// Outcome of a single identity check or conjecture scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub params: BTreeMap<String, i64>,
    pub status: Status,
    pub order: usize,
    #[serde(rename = "firstDiscrepancy")]
    pub first_discrepancy: Option<Discrepancy>,
    #[serde(rename = "elapsedMs")]
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(
        id: impl Into<String>,
        params: BTreeMap<String, i64>,
        status: Status,
        order: usize,
        first_discrepancy: Option<Discrepancy>,
    ) -> Self {
        VerificationReport {
            id: id.into(),
            params,
            status,
            order,
            first_discrepancy,
            elapsed_ms: None,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status.is_ok()
    }

    /// Fold a scan outcome into pass/fail (or scan-pass/scan-fail).
    pub fn from_scan(
        id: impl Into<String>,
        params: BTreeMap<String, i64>,
        order: usize,
        outcome: &ScanOutcome,
        conjectural: bool,
    ) -> Self {
        let (status, disc) = match outcome {
            ScanOutcome::AllNonnegative => (
                if conjectural {
                    Status::ScanPass
                } else {
                    Status::Pass
                },
                None,
            ),
            ScanOutcome::Negative {
                q_exp,
                z_exp,
                value,
            } => (
                if conjectural {
                    Status::ScanFail
                } else {
                    Status::Fail
                },
                Some(Discrepancy::negative(*q_exp, *z_exp, value)),
            ),
        };
        VerificationReport::new(id, params, status, order, disc)
    }
}

/// Outcome of a Saito-product nonnegativity scan for one N.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonnegReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub order: usize,
    /// Prefactor exponent as a reduced fraction "a/b".
    pub prefactor: String,
    pub pass: bool,
    #[serde(rename = "firstNegative")]
    pub first_negative: Option<FirstNegative>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstNegative {
    pub n: usize,
    pub coeff: String,
}

impl NonnegReport {
    pub fn new(n: u64, order: usize, prefactor: Ratio<i64>, outcome: &ScanOutcome) -> Self {
        let first_negative = match outcome {
            ScanOutcome::AllNonnegative => None,
            ScanOutcome::Negative { q_exp, value, .. } => Some(FirstNegative {
                n: *q_exp,
                coeff: value.to_string(),
            }),
        };
        NonnegReport {
            n,
            order,
            prefactor: format!("{}/{}", prefactor.numer(), prefactor.denom()),
            pass: first_negative.is_none(),
            first_negative,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_json_shape() {
        let mut params = BTreeMap::new();
        params.insert("a".to_string(), 3i64);
        let r = VerificationReport::new("THM1", params, Status::Pass, 40, None);
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(
            text,
            r#"{"id":"THM1","params":{"a":3},"status":"pass","order":40,"firstDiscrepancy":null,"elapsedMs":null}"#
        );
    }

    #[test]
    fn nonneg_report_json_shape() {
        let r = NonnegReport::new(6, 200, Ratio::new(5, 4), &ScanOutcome::AllNonnegative);
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(
            text,
            r#"{"N":6,"order":200,"prefactor":"5/4","pass":true,"firstNegative":null}"#
        );
    }
}
