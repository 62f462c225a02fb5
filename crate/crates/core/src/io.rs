//! Tabular output: every table has a header row, and floats are written in
//! shortest round-trip form with a `.` decimal point regardless of locale.

use std::io::Write;

use serde_json::{Map, Value};

use crate::artime::ARPath;
use crate::error::Result;
use crate::mlrand::SampleBatch;
use crate::renewal::{CountPmf, RenewalPath};
use crate::scalar::Real;
use crate::stats::Bin;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_owned()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_owned()
    } else {
        format!("{x:?}").trim_end_matches(".0").to_owned()
    }
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self { headers: headers.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn with_rows(mut self, rows: impl IntoIterator<Item = Vec<f64>>) -> Self {
        rows.into_iter().for_each(|r| self.push(r));
        self
    }

    /// Two-column table `(header_index, header_value)` with a 0-based or 1-based index.
    pub fn indexed<T: Real>(index: &str, value: &str, first: usize, values: &[T]) -> Self {
        Self::new([index, value])
            .with_rows(values.iter().enumerate().map(|(i, v)| vec![(first + i) as f64, v.to_f64_lossy()]))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().from_writer(out);
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&x| format_f64(x)))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 output")
    }

    /// Array of objects keyed by header; non-finite values become `null`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .headers
                        .iter()
                        .zip(row)
                        .map(|(h, &x)| {
                            // integers print without a fraction
                            let v = if x.fract() == 0.0 && x.abs() < 9.0e15 {
                                Value::from(x as i64)
                            } else {
                                serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
                            };
                            (h.clone(), v)
                        })
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

impl<T: Real> From<&SampleBatch<T>> for Table {
    fn from(b: &SampleBatch<T>) -> Self {
        Table::indexed("index", "value", 0, &b.values)
    }
}

impl<T: Real> From<&RenewalPath<T>> for Table {
    fn from(p: &RenewalPath<T>) -> Self {
        Table::indexed("k", "t_k", 1, &p.event_times)
    }
}

impl<T: Real> From<&CountPmf<T>> for Table {
    fn from(p: &CountPmf<T>) -> Self {
        Table::indexed("k", "prob", 0, &p.probs)
    }
}

impl<T: Real> From<&ARPath<T>> for Table {
    fn from(p: &ARPath<T>) -> Self {
        Table::indexed("n", "u_n", 1, &p.values)
    }
}

impl<T: Real> From<&[Bin<T>]> for Table {
    fn from(bins: &[Bin<T>]) -> Self {
        Table::new(["bin_left", "bin_right", "count"])
            .with_rows(bins.iter().map(|b| vec![b.left.to_f64_lossy(), b.right.to_f64_lossy(), b.count as f64]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_formatting() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 1e22, 0.367_879_441_171_442_33, 3.0, -0.0] {
            let s = format_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
            assert!(!s.contains(','));
        }
        assert_eq!(format_f64(3.0), "3");
        assert_eq!(format_f64(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_has_header_and_rows() {
        let t = Table::indexed("index", "value", 0, &[0.5f64, 2.0]);
        assert_eq!(t.to_csv_string(), "index,value\n0,0.5\n1,2\n");
        let j = t.to_json();
        assert_eq!(j[1]["value"], 2);
        assert_eq!(j[0]["value"], 0.5);
    }

    #[test]
    fn empty_table_still_has_header() {
        assert_eq!(Table::new(["k", "t_k"]).to_csv_string(), "k,t_k\n");
    }
}
