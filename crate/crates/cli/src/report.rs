//! Output records. Every rational is a string "p/q" or "n", so records
//! survive a JSON round trip unchanged.

use parchi::diagonal_trees::DiagonalTranscript;
use parchi::root_system::ChamberLevel;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeValue {
    pub tree: Vec<[usize; 2]>,
    pub value: String,
}

/// Truncation windows of one assembled integrand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSummary {
    pub target_degree: i64,
    pub excess: i64,
    pub pole_orders: Vec<i32>,
    pub windows: Vec<(i32, i32)>,
}

/// One evaluated characteristic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub command: String,
    pub mode: String,
    pub r: usize,
    pub g: i64,
    pub k: i64,
    pub lambda: Vec<String>,
    pub nu: Vec<Vec<i64>>,
    pub c: Vec<String>,
    pub basis: Vec<Vec<[usize; 2]>>,
    /// integer parts of c_Π′, identifying the chamber
    pub chamber: Vec<ChamberLevel>,
    pub value: String,
    pub per_basis: Vec<TreeValue>,
    pub windows: Vec<WindowSummary>,
    /// wall-clock time, only with --timing
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_us: Option<u64>,
    pub engine_version: String,
}

/// CSV row for a record; lists are joined with spaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRow {
    pub mode: String,
    pub r: usize,
    pub g: i64,
    pub k: i64,
    pub lambda: String,
    pub nu: String,
    pub c: String,
    pub value: String,
    pub elapsed_us: Option<u64>,
}

impl From<&ReportRecord> for CsvRow {
    fn from(x: &ReportRecord) -> Self {
        CsvRow {
            mode: x.mode.clone(),
            r: x.r,
            g: x.g,
            k: x.k,
            lambda: x.lambda.join(" "),
            nu: x
                .nu
                .iter()
                .map(|v| v.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
                .collect::<Vec<_>>()
                .join(" "),
            c: x.c.join(" "),
            value: x.value.clone(),
            elapsed_us: x.elapsed_us,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallcrossRecord {
    pub command: String,
    pub r: usize,
    pub g: i64,
    pub k: i64,
    pub lambda: Vec<String>,
    pub nu: Vec<Vec<i64>>,
    pub wall: parchi::WallSpec,
    pub c_plus: Vec<String>,
    pub c_minus: Vec<String>,
    /// χ(c⁺) − χ(c⁻)
    pub geometric: String,
    pub residue: String,
    pub residue_product: String,
    pub equal: bool,
    pub engine_version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalRecord {
    pub command: String,
    pub r: usize,
    /// true when the set came from --basis-file
    pub supplied: bool,
    pub basis: Vec<Vec<[usize; 2]>>,
    pub transcript: DiagonalTranscript,
    pub engine_version: String,
}
