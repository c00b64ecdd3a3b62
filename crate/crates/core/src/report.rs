//! Machine-readable reports of measure results and bound checks.
//!
//! Exact values are written as `"num/den"` strings (`"3"` for integers) so
//! that rationals survive JSON untouched. Field order is fixed.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::bounds::BoundReport;
use crate::error::{Error, Result};
use crate::measures::{MeasureResult, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::param(format!("unknown format `{s}` (json, csv or text)"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        })
    }
}

#[derive(Clone, Debug)]
pub enum ReportItem {
    Measure(MeasureResult),
    Bound(BoundReport),
}

impl From<MeasureResult> for ReportItem {
    fn from(r: MeasureResult) -> Self {
        ReportItem::Measure(r)
    }
}

impl From<BoundReport> for ReportItem {
    fn from(r: BoundReport) -> Self {
        ReportItem::Bound(r)
    }
}

/// One flat report record; the JSON object and the CSV row share it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub name: String,
    pub order: Option<usize>,
    pub value: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_bound: Option<f64>,
    pub witness: Option<serde_json::Value>,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub satisfied: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn value_string(v: &Value) -> (String, Option<f64>) {
    match v {
        Value::Exact(r) => (r.to_string(), None),
        Value::Real { value, error_bound } => (value.to_string(), Some(*error_bound)),
    }
}

/// Inverse of the exact value encoding.
pub fn parse_exact(s: &str) -> Option<Ratio<i64>> {
    match s.split_once('/') {
        Some((n, d)) => {
            let (n, d): (i64, i64) = (n.parse().ok()?, d.parse().ok()?);
            (d != 0).then(|| Ratio::new(n, d))
        }
        None => s.parse().ok().map(Ratio::from_integer),
    }
}

impl Row {
    pub fn from_item(item: &ReportItem) -> Result<Row> {
        Ok(match item {
            ReportItem::Measure(m) => {
                let (value, error_bound) = value_string(&m.value);
                Row {
                    name: m.measure.name().to_string(),
                    order: m.order,
                    value,
                    error_bound,
                    witness: m.witness.as_ref().map(to_json).transpose()?,
                    mode: m.evaluation.to_string(),
                    bound: None,
                    satisfied: None,
                    kind: None,
                    params: None,
                    ratio: None,
                    note: None,
                }
            }
            ReportItem::Bound(b) => {
                let (value, error_bound) = value_string(&b.measured);
                Row {
                    name: b.name.clone(),
                    order: b.params.ell,
                    value,
                    error_bound,
                    witness: None,
                    mode: b.mode.to_string(),
                    bound: Some(value_string(&b.theoretical).0),
                    satisfied: Some(b.satisfied),
                    kind: Some(b.kind.to_string()),
                    params: Some(to_json(&b.params)?),
                    ratio: b.ratio,
                    note: b.note.clone(),
                }
            }
        })
    }

    /// The value as a rational, when it was written exactly.
    pub fn exact_value(&self) -> Option<Ratio<i64>> {
        if self.error_bound.is_some() {
            None
        } else {
            parse_exact(&self.value)
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<serde_json::Value> {
    serde_json::to_value(v).map_err(|e| Error::Internal(e.to_string()))
}

fn io_error(err: std::io::Error) -> Error {
    Error::Io {
        path: "<report sink>".into(),
        source: err,
    }
}

/// Writes `items` to `sink`. Empty input is a parameter error.
pub fn emit_report<W: Write>(items: &[ReportItem], format: Format, mut sink: W) -> Result<()> {
    if items.is_empty() {
        return Err(Error::param("nothing to report"));
    }
    let rows = items.iter().map(Row::from_item).collect::<Result<Vec<_>>>()?;
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, &rows).map_err(|e| io_error(e.into()))?;
            writeln!(sink).map_err(io_error)?;
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut sink);
            w.write_record([
                "name", "order", "value", "error_bound", "mode", "bound", "satisfied", "kind", "ratio", "note", "witness",
            ])
            .map_err(|e| io_error(e.into()))?;
            for r in &rows {
                let opt = |v: Option<String>| v.unwrap_or_default();
                w.write_record([
                    r.name.clone(),
                    opt(r.order.map(|o| o.to_string())),
                    r.value.clone(),
                    opt(r.error_bound.map(|e| e.to_string())),
                    r.mode.clone(),
                    opt(r.bound.clone()),
                    opt(r.satisfied.map(|s| s.to_string())),
                    opt(r.kind.clone()),
                    opt(r.ratio.map(|x| x.to_string())),
                    opt(r.note.clone()),
                    opt(r.witness.as_ref().map(|w| w.to_string())),
                ])
                .map_err(|e| io_error(e.into()))?;
            }
            w.flush().map_err(io_error)?;
        }
        Format::Text => {
            for r in &rows {
                let name = match r.order {
                    Some(o) if r.bound.is_none() => format!("{}_{o}", r.name),
                    _ => r.name.clone(),
                };
                let mut line = format!("{name} = {} [{}]", r.value, r.mode);
                if let Some(b) = &r.bound {
                    let exact = r.kind.as_deref().is_some_and(|k| k.starts_with("exact"));
                    let verdict = match (r.satisfied == Some(true), exact) {
                        (true, _) => "ok",
                        (false, true) => "VIOLATED",
                        (false, false) => "exceeded (warning)",
                    };
                    line = format!(
                        "{name}: measured {} vs bound {} [{}] {verdict}",
                        r.value,
                        b,
                        r.kind.as_deref().unwrap_or("")
                    );
                    if let Some(order) = r.order {
                        line.push_str(&format!(" (l = {order})"));
                    }
                }
                if let Some(w) = &r.witness {
                    line.push_str(&format!(" witness {w}"));
                }
                if let Some(n) = &r.note {
                    line.push_str(&format!(" ({n})"));
                }
                writeln!(sink, "{line}").map_err(io_error)?;
            }
        }
    }
    sink.flush().map_err(io_error)
}

/// Parses a JSON report back into rows.
pub fn parse_json_report(text: &str) -> Result<Vec<Row>> {
    serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::bounds::weil_check;
    use crate::construct::Family;
    use crate::measures::{gamma, Mode};
    use crate::poly::Polynomial;

    fn sample() -> Vec<ReportItem> {
        let fam = Family::external(2, vec![vec![0, 1, 0, 1]]).unwrap();
        let g = gamma(&fam, 1, Mode::Exact(Budget::MEASURE)).unwrap();
        let w = weil_check(&Polynomial::from_high_first(&[1, 0, 1], 5), 5).unwrap();
        vec![g.into(), w.into()]
    }

    #[test]
    fn empty_is_rejected() {
        assert!(matches!(emit_report(&[], Format::Json, Vec::new()), Err(Error::Parameter(_))));
    }

    #[test]
    fn json_round_trip() {
        let items = sample();
        let mut buf = Vec::new();
        emit_report(&items[..1], Format::Json, &mut buf).unwrap();
        let rows = parse_json_report(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].value, "1/2");
        assert_eq!(rows[0].exact_value(), Some(Ratio::new(1, 2)));
        assert_eq!(rows[0].mode, "exact");

        let mut buf = Vec::new();
        emit_report(&items, Format::Json, &mut buf).unwrap();
        let rows = parse_json_report(std::str::from_utf8(&buf).unwrap()).unwrap();
        for (row, item) in rows.iter().zip(&items) {
            assert_eq!(row, &Row::from_item(item).unwrap());
        }
        assert_eq!(rows[1].satisfied, Some(true));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mut buf = Vec::new();
        emit_report(&sample(), Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("name,order,value,"));
        assert!(lines[1].starts_with("gamma,1,1/2,,exact,"));
    }

    #[test]
    fn text_labels_mode() {
        let mut buf = Vec::new();
        emit_report(&sample(), Format::Text, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("gamma_1 = 1/2 [exact]"));
        assert!(text.contains("weil: measured 1 vs bound"));
    }

    #[test]
    fn exact_parser() {
        assert_eq!(parse_exact("3"), Some(Ratio::from_integer(3)));
        assert_eq!(parse_exact("-3/6"), Some(Ratio::new(-1, 2)));
        assert_eq!(parse_exact("1/0"), None);
        assert_eq!(parse_exact("x"), None);
    }
}
