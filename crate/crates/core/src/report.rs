//! JSON and CSV encodings (schema version "1").
//!
//! Rationals travel as canonical `"p/q"` strings. Enclosures carry their
//! exact endpoints plus directed decimal renderings:
//!
//! ```json
//! {"lo": "p/q", "hi": "p/q", "dec_lo": "0.6156264703", "dec_hi": "0.6156264704"}
//! ```
//!
//! `dec_lo` is rounded toward −∞ and `dec_hi` toward +∞. The decimal fields
//! are ignored when an enclosure is read back.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bernoulli::Family;
use crate::certifier::{Certificate, CertificateKind, Witness};
use crate::constants::{ErrorReport, ScanRow, SqueezeResult};
use crate::kernel::{Enclosure, ExactRational, Sign};

pub const SCHEMA_VERSION: &str = "1";
/// Significant digits in `dec_lo` / `dec_hi`.
pub const DECIMAL_DIGITS: u32 = 10;

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct EnclosureRepr {
    lo: ExactRational,
    hi: ExactRational,
    #[serde(default, skip_deserializing)]
    dec_lo: String,
    #[serde(default, skip_deserializing)]
    dec_hi: String,
}

impl Serialize for Enclosure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EnclosureRepr {
            lo: self.lo().clone(),
            hi: self.hi().clone(),
            dec_lo: self.dec_lo(DECIMAL_DIGITS),
            dec_hi: self.dec_hi(DECIMAL_DIGITS),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Enclosure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = EnclosureRepr::deserialize(d)?;
        Enclosure::new(r.lo, r.hi).map_err(D::Error::custom)
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Sign::parse(&text).ok_or_else(|| D::Error::custom(format!("unknown sign {text:?}")))
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

impl Serialize for CertificateKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for CertificateKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "positivity" => Ok(CertificateKind::Positivity),
            "unique_zero" => Ok(CertificateKind::UniqueZero),
            other => Err(D::Error::custom(format!(
                "unknown certificate kind {other:?}"
            ))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct WitnessRepr {
    point: ExactRational,
    derivative_order: usize,
    sign: Sign,
    enclosure: Enclosure,
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WitnessRepr {
            point: self.point.clone(),
            derivative_order: self.derivative_order,
            sign: self.sign,
            enclosure: self.enclosure.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Witness {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = WitnessRepr::deserialize(d)?;
        Ok(Witness {
            point: r.point,
            derivative_order: r.derivative_order,
            sign: r.sign,
            enclosure: r.enclosure,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateRepr {
    kind: CertificateKind,
    family: Family,
    theta: ExactRational,
    m: usize,
    witnesses: Vec<Witness>,
    zero_bracket: Option<Enclosure>,
    min_bracket: Option<Enclosure>,
    depth_used: usize,
    domain_end: Enclosure,
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let c = self.clone();
        CertificateRepr {
            kind: c.kind,
            family: c.family,
            theta: c.theta,
            m: c.m,
            witnesses: c.witnesses,
            zero_bracket: c.zero_bracket,
            min_bracket: c.min_bracket,
            depth_used: c.depth_used,
            domain_end: c.domain_end,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Certificate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = CertificateRepr::deserialize(d)?;
        Ok(Certificate {
            kind: r.kind,
            family: r.family,
            theta: r.theta,
            m: r.m,
            witnesses: r.witnesses,
            zero_bracket: r.zero_bracket,
            min_bracket: r.min_bracket,
            depth_used: r.depth_used,
            domain_end: r.domain_end,
        })
    }
}

#[derive(Serialize)]
struct SqueezeRepr<'a> {
    family: Family,
    inequality: &'static str,
    x0: &'a ExactRational,
    best_constant: &'a Enclosure,
    theta_star: &'a ExactRational,
    upper_constant: &'a ExactRational,
    certified_interval_end: &'a ExactRational,
    lower_cert: &'a Certificate,
    upper_cert: &'a Certificate,
}

impl Serialize for SqueezeResult {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SqueezeRepr {
            family: self.family,
            inequality: self.family.description(),
            x0: &self.x0,
            best_constant: &self.best_constant,
            theta_star: self.theta(),
            upper_constant: &self.upper_constant,
            certified_interval_end: &self.certified_interval_end,
            lower_cert: &self.lower_cert,
            upper_cert: &self.upper_cert,
        }
        .serialize(s)
    }
}

#[derive(Serialize)]
struct ErrorReportRepr<'a> {
    family: Family,
    x0: &'a ExactRational,
    theta: &'a ExactRational,
    t0: &'a Enclosure,
    delta: &'a Enclosure,
}

impl Serialize for ErrorReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ErrorReportRepr {
            family: self.family,
            x0: &self.x0,
            theta: &self.theta,
            t0: &self.t0,
            delta: &self.delta,
        }
        .serialize(s)
    }
}

#[derive(Serialize)]
struct ScanRowRepr<'a> {
    x0: &'a ExactRational,
    best_constant: Option<&'a Enclosure>,
    t0: Option<&'a Enclosure>,
    delta: Option<&'a Enclosure>,
    error: Option<&'a str>,
}

impl Serialize for ScanRow {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (v, e) = match &self.outcome {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.as_str())),
        };
        ScanRowRepr {
            x0: &self.x0,
            best_constant: v.map(|v| &v.best_constant),
            t0: v.map(|v| &v.t0),
            delta: v.map(|v| &v.delta),
            error: e,
        }
        .serialize(s)
    }
}

/// One coefficient row of the `coeffs` command.
#[derive(Debug, Clone, Serialize)]
pub struct CoeffRow {
    pub k: usize,
    pub coefficient: ExactRational,
    /// Rounded toward −∞.
    pub decimal: String,
}

/// Top-level document written by every CLI command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputDocument {
    pub schema_version: String,
    pub command: String,
    pub inputs: serde_json::Map<String, serde_json::Value>,
    pub results: serde_json::Value,
    pub status: String,
    pub error_reason: Option<String>,
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::NonNumeric)
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 csv")
}

pub fn coeffs_csv(rows: &[CoeffRow]) -> String {
    let mut w = csv_writer();
    w.write_record(["k", "coefficient", "decimal"])
        .expect("in-memory write");
    for r in rows {
        w.write_record([
            r.k.to_string(),
            r.coefficient.to_string(),
            r.decimal.clone(),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

pub const SCAN_CSV_HEADER: [&str; 14] = [
    "x0",
    "best_constant_lo",
    "best_constant_hi",
    "best_constant_dec_lo",
    "best_constant_dec_hi",
    "t0_lo",
    "t0_hi",
    "t0_dec_lo",
    "t0_dec_hi",
    "delta_lo",
    "delta_hi",
    "delta_dec_lo",
    "delta_dec_hi",
    "error",
];

fn enclosure_cells(e: Option<&Enclosure>) -> [String; 4] {
    match e {
        Some(e) => [
            e.lo().to_string(),
            e.hi().to_string(),
            e.dec_lo(DECIMAL_DIGITS),
            e.dec_hi(DECIMAL_DIGITS),
        ],
        None => Default::default(),
    }
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut w = csv_writer();
    w.write_record(SCAN_CSV_HEADER).expect("in-memory write");
    for r in rows {
        let mut rec = vec![r.x0.to_string()];
        let v = r.outcome.as_ref().ok();
        rec.extend(enclosure_cells(v.map(|v| &v.best_constant)));
        rec.extend(enclosure_cells(v.map(|v| &v.t0)));
        rec.extend(enclosure_cells(v.map(|v| &v.delta)));
        rec.push(r.outcome.as_ref().err().cloned().unwrap_or_default());
        w.write_record(&rec).expect("in-memory write");
    }
    finish(w)
}
