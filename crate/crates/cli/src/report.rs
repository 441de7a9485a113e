//! Report records and their JSON/CSV encodings.
//!
//! JSON is compact, one document per run, with every real written to 17 significant
//! digits so that parsing it back restores the exact doubles. CSV uses the shortest
//! round-trip representation and a '.' decimal separator.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub k: f64,
    pub normalized: bool,
    pub zeros_source: String,
    pub max_zeros: usize,
    pub prune_eps: f64,
    pub experimental_low_k: bool,
    pub lhs: f64,
    pub main_term: f64,
    pub single_sum: f64,
    pub double_sum: f64,
    pub rhs_total: f64,
    pub tail_single: f64,
    pub tail_double: f64,
    pub zeros_used: usize,
    pub pairs_evaluated: u64,
    pub pairs_pruned: u64,
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    pub elapsed_lhs_s: f64,
    pub elapsed_rhs_s: f64,
    pub elapsed_total_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub lhs: f64,
    pub main: f64,
    pub single: f64,
    pub double: f64,
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    pub tail_single: f64,
    pub tail_double: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeRow {
    pub y: f64,
    pub direct_re: f64,
    pub direct_im: f64,
    pub explicit_re: f64,
    pub explicit_im: f64,
    pub residual: f64,
    pub envelope: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StildeReport {
    pub a: f64,
    pub zeros_source: String,
    pub max_zeros: usize,
    pub lambda_limit: usize,
    pub include_constant: bool,
    pub max_ratio: f64,
    pub points: Vec<EnvelopeRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    #[serde(rename = "M")]
    pub m: usize,
    pub partial_sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub alpha: f64,
    pub zeros_source: String,
    pub max_zeros: usize,
    pub cutoff: f64,
    pub final_increment: Option<f64>,
    pub partial_sums: Vec<ProbeRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplaceReport {
    pub s_re: f64,
    pub s_im: f64,
    pub a_re: f64,
    pub a_im: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub cutoff: f64,
    pub quadrature_re: f64,
    pub quadrature_im: f64,
    pub error_estimate: f64,
    pub closed_form_re: Option<f64>,
    pub closed_form_im: Option<f64>,
    pub abs_diff: Option<f64>,
}

/// serde_json formatter writing reals as `d.dddddddddddddddde±x` (17 significant digits).
struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> serde_json::Result<T> {
    serde_json::from_str(text)
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv emits UTF-8"))
}
