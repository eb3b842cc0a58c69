//! The single-matrix report document.

use serde::Serialize;

use crate::algorithms::{RecursionStats, Verdict};
use crate::matrix::BinaryMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Preconditions {
    pub distinct_rows: bool,
    pub distinct_columns: bool,
    pub all_zero_column: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WitnessRef {
    pub line: u32,
    /// `None` for returns not tied to a column.
    pub column: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub m: usize,
    pub n: usize,
    /// `"a1"`, `"a2"` or `"oracle"`.
    pub algorithm: &'static str,
    pub verdict: Option<bool>,
    pub heavy_columns: Vec<usize>,
    pub witness: Option<WitnessRef>,
    pub preconditions: Preconditions,
    pub stats: RecursionStats,
}

impl Report {
    fn base(m: &BinaryMatrix, algorithm: &'static str) -> Self {
        let props = m.properties();
        Report {
            m: m.m(),
            n: m.n(),
            algorithm,
            verdict: None,
            heavy_columns: m.heavy_columns(),
            witness: None,
            preconditions: Preconditions {
                distinct_rows: props.distinct_rows,
                distinct_columns: props.distinct_columns,
                all_zero_column: props.has_all_zero_column,
            },
            stats: RecursionStats::default(),
        }
    }

    /// Report for the direct heavy-column scan; no verdict or witness.
    pub fn oracle(m: &BinaryMatrix) -> Self {
        Report::base(m, "oracle")
    }

    pub fn for_verdict(m: &BinaryMatrix, verdict: &Verdict) -> Self {
        Report {
            verdict: Some(verdict.value),
            witness: verdict.witness.map(|w| WitnessRef {
                line: w.line(verdict.algorithm, verdict.value),
                column: w.column,
            }),
            stats: verdict.stats,
            ..Report::base(m, verdict.algorithm.name())
        }
    }
}

pub fn serialize_report(report: &Report) -> String {
    serde_json::to_string(report).expect("report is always serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{run_a2, Algorithm, LineTag, Witness};

    #[test]
    fn verdict_report_schema() {
        let m = BinaryMatrix::from_strs(&["1"]).unwrap();
        let v = Verdict {
            algorithm: Algorithm::A1,
            value: true,
            witness: Some(Witness {
                tag: LineTag::N1Base,
                column: Some(1),
            }),
            stats: RecursionStats {
                calls: 7,
                max_depth: 0,
                cache_hits: 0,
                elapsed_ns: 12,
            },
        };
        let json = serialize_report(&Report::for_verdict(&m, &v));
        assert_eq!(
            json,
            r#"{"m":1,"n":1,"algorithm":"a1","verdict":true,"heavy_columns":[1],"witness":{"line":3,"column":1},"preconditions":{"distinct_rows":true,"distinct_columns":true,"all_zero_column":false},"stats":{"calls":7,"max_depth":0,"cache_hits":0,"elapsed_ns":12}}"#
        );
    }

    #[test]
    fn oracle_report_has_null_verdict() {
        let m = BinaryMatrix::from_strs(&["00", "01", "10"]).unwrap();
        let v: serde_json::Value =
            serde_json::from_str(&serialize_report(&Report::oracle(&m))).unwrap();
        assert_eq!(v["algorithm"], "oracle");
        assert!(v["verdict"].is_null() && v["witness"].is_null());
        assert_eq!(v["heavy_columns"], serde_json::json!([]));
    }

    #[test]
    fn m1_base_witness_has_null_column() {
        let m = BinaryMatrix::from_strs(&["00"]).unwrap();
        let r = Report::for_verdict(&m, &run_a2(&m));
        let v: serde_json::Value = serde_json::from_str(&serialize_report(&r)).unwrap();
        assert_eq!(v["witness"], serde_json::json!({"line": 1, "column": null}));
        assert_eq!(v["preconditions"]["all_zero_column"], true);
    }
}
