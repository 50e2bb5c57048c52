//! Report records and their JSON-lines / CSV encodings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::congruences::{CaseSpec, Verdict};
use crate::error::{Error, Result};
use crate::exact::{format_rational, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedHypothesis,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SkippedHypothesis => "skipped-hypothesis",
        })
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pass" => Ok(Status::Pass),
            "fail" => Ok(Status::Fail),
            "skipped-hypothesis" => Ok(Status::SkippedHypothesis),
            _ => Err(Error::InvalidArgument(format!("unknown status {s:?}"))),
        }
    }
}

/// Valuation as it appears in reports: a JSON integer, or the string `"inf"`
/// when the left-hand side is exactly zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReportValuation(pub Valuation);

impl Serialize for ReportValuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Valuation::Finite(v) => s.serialize_i64(v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ReportValuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(ReportValuation(Valuation::Finite(v))),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl fmt::Display for ReportValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for ReportValuation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            return Ok(ReportValuation(Valuation::Infinite));
        }
        s.parse()
            .map(|v| ReportValuation(Valuation::Finite(v)))
            .map_err(|_| Error::InvalidArgument(format!("bad valuation {s:?}")))
    }
}

/// One line of a report. Skipped cases carry `null` in every verdict field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub theorem_id: String,
    pub p: u64,
    pub params: BTreeMap<String, u64>,
    pub required_exponent: Option<i64>,
    pub achieved_valuation: Option<ReportValuation>,
    pub tier: Option<u32>,
    pub pass: bool,
    pub status: Status,
    pub lhs: Option<String>,
    pub elapsed_ms: u64,
}

impl ReportRecord {
    pub fn from_verdict(v: &Verdict, elapsed_ms: u64) -> Self {
        ReportRecord {
            theorem_id: v.case.theorem.to_string(),
            p: v.case.p,
            params: v.case.params.clone(),
            required_exponent: Some(v.required_exponent),
            achieved_valuation: Some(ReportValuation(v.achieved_valuation)),
            tier: v.tier,
            pass: v.pass,
            status: if v.pass { Status::Pass } else { Status::Fail },
            lhs: Some(format_rational(&v.lhs)),
            elapsed_ms,
        }
    }

    pub fn skipped(case: &CaseSpec) -> Self {
        ReportRecord {
            theorem_id: case.theorem.to_string(),
            p: case.p,
            params: case.params.clone(),
            required_exponent: None,
            achieved_valuation: None,
            tier: None,
            pass: false,
            status: Status::SkippedHypothesis,
            lhs: None,
            elapsed_ms: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::InvalidArgument(format!(
                "unknown format {s:?} (expected json or csv)"
            ))),
        }
    }
}

const CSV_HEADER: [&str; 10] = [
    "theorem_id",
    "p",
    "params",
    "required_exponent",
    "achieved_valuation",
    "tier",
    "pass",
    "status",
    "lhs",
    "elapsed_ms",
];

/// `n=1;i=0`
fn format_params(params: &BTreeMap<String, u64>) -> String {
    params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn parse_params(s: &str) -> Result<BTreeMap<String, u64>> {
    let mut out = BTreeMap::new();
    for pair in s.split(';').filter(|p| !p.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("bad parameter {pair:?}")))?;
        let v = v
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad parameter value {pair:?}")))?;
        out.insert(k.to_string(), v);
    }
    Ok(out)
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

fn parse_opt<T: FromStr>(s: &str, field: &str) -> Result<Option<T>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| Error::InvalidArgument(format!("bad {field} {s:?}")))
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv: {e}"))
}

/// Serializes records. JSON: one object per line. CSV: header, then one row
/// per record with `lhs` always quoted.
pub fn emit(records: &[ReportRecord], format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = Vec::new();
            for r in records {
                serde_json::to_writer(&mut out, r).expect("records serialize");
                out.push(b'\n');
            }
            out
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .quote_style(csv::QuoteStyle::Never)
                .from_writer(Vec::new());
            w.write_record(CSV_HEADER).expect("in-memory write");
            for r in records {
                // every field but lhs is free of commas and quotes
                let lhs = format!("\"{}\"", r.lhs.as_deref().unwrap_or(""));
                w.write_record([
                    r.theorem_id.clone(),
                    r.p.to_string(),
                    format_params(&r.params),
                    opt(&r.required_exponent),
                    opt(&r.achieved_valuation),
                    opt(&r.tier),
                    r.pass.to_string(),
                    r.status.to_string(),
                    lhs,
                    r.elapsed_ms.to_string(),
                ])
                .expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
    }
}

/// Inverse of [`emit`].
pub fn parse(bytes: &[u8], format: Format) -> Result<Vec<ReportRecord>> {
    match format {
        Format::Json => bytes
            .split(|&b| b == b'\n')
            .filter(|line| !line.iter().all(u8::is_ascii_whitespace))
            .map(|line| {
                serde_json::from_slice(line)
                    .map_err(|e| Error::InvalidArgument(format!("json: {e}")))
            })
            .collect(),
        Format::Csv => {
            let mut rdr = csv::Reader::from_reader(bytes);
            let header = rdr.headers().map_err(csv_err)?.clone();
            if header.iter().ne(CSV_HEADER) {
                return Err(Error::InvalidArgument("unexpected CSV header".into()));
            }
            let mut out = Vec::new();
            for row in rdr.records() {
                let row = row.map_err(csv_err)?;
                let f = |i: usize| row.get(i).unwrap_or("");
                let parse_u64 = |i: usize, name: &str| {
                    f(i).parse::<u64>()
                        .map_err(|_| Error::InvalidArgument(format!("bad {name} {:?}", f(i))))
                };
                out.push(ReportRecord {
                    theorem_id: f(0).to_string(),
                    p: parse_u64(1, "p")?,
                    params: parse_params(f(2))?,
                    required_exponent: parse_opt(f(3), "required_exponent")?,
                    achieved_valuation: parse_opt(f(4), "achieved_valuation")?,
                    tier: parse_opt(f(5), "tier")?,
                    pass: f(6)
                        .parse()
                        .map_err(|_| Error::InvalidArgument(format!("bad pass {:?}", f(6))))?,
                    status: f(7).parse()?,
                    lhs: Some(f(8).to_string()).filter(|s| !s.is_empty()),
                    elapsed_ms: parse_u64(9, "elapsed_ms")?,
                });
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruences::{verify_eisenstein, verify_thm_ee10bis, TheoremId, TierMode};
    use crate::Context;
    use proptest::prelude::*;

    fn sample() -> Vec<ReportRecord> {
        let ctx = Context::new();
        let a = ReportRecord::from_verdict(&verify_eisenstein(7, &ctx).unwrap(), 3);
        let b = ReportRecord::from_verdict(
            &verify_thm_ee10bis(37, 0, 0, TierMode::Auto, &ctx).unwrap(),
            12,
        );
        let c = ReportRecord::skipped(&CaseSpec::new(TheoremId::ThmEe20, 3).with("n", 6));
        vec![a, b, c]
    }

    #[test]
    fn json_lines() {
        let records = sample();
        let out = emit(&records[..1], Format::Json);
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(text.contains("\"pass\":true"));
        assert!(text.contains("\"lhs\":\"119/6\""));
        assert!(text.contains("\"achieved_valuation\":1"));
    }

    #[test]
    fn csv_rows() {
        let records = sample();
        let text = String::from_utf8(emit(&records[..2], Format::Csv)).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(1).unwrap().contains(",\"119/6\","));
        assert!(text.lines().nth(2).unwrap().contains("i=0;n=0"));
    }

    #[test]
    fn infinite_valuation_encoding() {
        let mut r = sample().remove(0);
        r.achieved_valuation = Some(ReportValuation(Valuation::Infinite));
        let text = String::from_utf8(emit(&[r.clone()], Format::Json)).unwrap();
        assert!(text.contains("\"achieved_valuation\":\"inf\""));
        assert_eq!(parse(text.as_bytes(), Format::Json).unwrap(), vec![r]);
    }

    #[test]
    fn round_trips() {
        let records = sample();
        for format in [Format::Json, Format::Csv] {
            assert_eq!(parse(&emit(&records, format), format).unwrap(), records);
        }
        assert!(parse(b"", Format::Json).unwrap().is_empty());
    }

    fn arb_record() -> impl Strategy<Value = ReportRecord> {
        (
            prop::sample::select(TheoremId::all()),
            2u64..10_000,
            prop::collection::btree_map(
                prop::sample::select(vec!["n", "i", "k", "h", "j_terms"]),
                0u64..50,
                0..3,
            ),
            prop::option::of(0i64..40),
            prop::option::of(prop_oneof![
                (-5i64..60).prop_map(Valuation::Finite),
                Just(Valuation::Infinite)
            ]),
            prop::option::of(0u32..6),
            any::<bool>(),
            prop::sample::select(vec![Status::Pass, Status::Fail, Status::SkippedHypothesis]),
            prop::option::of(
                (-10_000i64..10_000, 1i64..10_000).prop_map(|(n, d)| format!("{n}/{d}")),
            ),
            0u64..100_000,
        )
            .prop_map(|(id, p, params, req, val, tier, pass, status, lhs, ms)| {
                ReportRecord {
                    theorem_id: id.to_string(),
                    p,
                    params: params
                        .into_iter()
                        .map(|(k, v)| (k.to_string(), v))
                        .collect(),
                    required_exponent: req,
                    achieved_valuation: val.map(ReportValuation),
                    tier,
                    pass,
                    status,
                    lhs,
                    elapsed_ms: ms,
                }
            })
    }

    proptest! {
        #[test]
        fn emit_parse_is_identity(records in prop::collection::vec(arb_record(), 0..8)) {
            for format in [Format::Json, Format::Csv] {
                prop_assert_eq!(parse(&emit(&records, format), format).unwrap(), records.clone());
            }
        }
    }
}
