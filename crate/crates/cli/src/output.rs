//! Result records and their file formats.
//!
//! CSV columns are `case`, the scenario's input columns in declaration
//! order, then `value`, `err_est`, `converged`, `tag`. Floats are written
//! in shortest round-trip scientific notation. JSON records hold one object
//! per line with the same fields. Either format may start with one
//! `# generated ...` line, which readers skip.

use std::io::{self, BufRead, Write};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::config::Format;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub case: String,
    pub inputs: IndexMap<String, f64>,
    pub value: f64,
    pub err_est: f64,
    pub converged: bool,
    pub tag: String,
}

pub const TRAILING_COLUMNS: [&str; 4] = ["value", "err_est", "converged", "tag"];

pub fn timestamp_line() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("# generated by vdwcalc {} at unix time {secs}", env!("CARGO_PKG_VERSION"))
}

pub fn write_records<W: Write>(records: &[Record], format: Format, header: Option<&str>, mut out: W) -> io::Result<()> {
    if let Some(h) = header {
        writeln!(out, "{h}")?;
    }
    match format {
        Format::Csv => write_csv(records, out),
        Format::JsonRecords => {
            for r in records {
                serde_json::to_writer(&mut out, r)?;
                out.write_all(b"\n")?;
            }
            out.flush()
        }
    }
}

fn write_csv<W: Write>(records: &[Record], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let keys: Vec<&str> = records.first().map(|r| r.inputs.keys().map(String::as_str).collect()).unwrap_or_default();
    let mut header = vec!["case"];
    header.extend(&keys);
    header.extend(TRAILING_COLUMNS);
    w.write_record(&header)?;
    for r in records {
        if r.inputs.keys().map(String::as_str).ne(keys.iter().copied()) {
            return Err(io::Error::new(io::ErrorKind::InvalidData, format!("record '{}' has different input columns", r.case)));
        }
        let mut row = vec![r.case.clone()];
        row.extend(r.inputs.values().map(|v| format!("{v:e}")));
        row.push(format!("{:e}", r.value));
        row.push(format!("{:e}", r.err_est));
        row.push(r.converged.to_string());
        row.push(r.tag.clone());
        w.write_record(&row)?;
    }
    w.flush()
}

/// Parses json-records output back into records.
pub fn read_json_records<R: BufRead>(input: R) -> io::Result<Vec<Record>> {
    let mut records = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        records.push(serde_json::from_str(&line)?);
    }
    Ok(records)
}

/// Parses CSV output back into records.
pub fn read_csv_records<R: io::Read>(input: R) -> io::Result<Vec<Record>> {
    let bad = |msg: String| io::Error::new(io::ErrorKind::InvalidData, msg);
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let header = rdr.headers()?.clone();
    let n = header.len();
    if n < 1 + TRAILING_COLUMNS.len() {
        return Err(bad("too few columns".into()));
    }
    let float = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("'{s}': {e}")));
    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let mut inputs = IndexMap::new();
        for i in 1..n - 4 {
            inputs.insert(header[i].to_string(), float(&row[i])?);
        }
        records.push(Record {
            case: row[0].to_string(),
            inputs,
            value: float(&row[n - 4])?,
            err_est: float(&row[n - 3])?,
            converged: row[n - 2].parse().map_err(|_| bad(format!("'{}' is not a bool", &row[n - 2])))?,
            tag: row[n - 1].to_string(),
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<Record> {
        (0..3)
            .map(|i| Record {
                case: "full".into(),
                inputs: IndexMap::from([("z_a".to_string(), -0.1 * (i + 1) as f64), ("z_b".to_string(), 1.0 / 3.0)]),
                value: -1.234_567_890_123_456_7e-300 * (i + 1) as f64,
                err_est: 1e-12,
                converged: i != 1,
                tag: "nonretarded".into(),
            })
            .collect()
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut buf = Vec::new();
        write_records(&sample(), Format::JsonRecords, Some("# generated"), &mut buf).unwrap();
        assert_eq!(read_json_records(&buf[..]).unwrap(), sample());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let mut buf = Vec::new();
        write_records(&sample(), Format::Csv, Some("# generated"), &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().nth(1).unwrap() == "case,z_a,z_b,value,err_est,converged,tag");
        assert_eq!(read_csv_records(&buf[..]).unwrap(), sample());
    }

    #[test]
    fn mismatched_columns_are_rejected() {
        let mut recs = sample();
        recs[2].inputs.insert("extra".into(), 1.0);
        assert!(write_records(&recs, Format::Csv, None, Vec::new()).is_err());
    }
}
