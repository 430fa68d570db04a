//! Trace files.
//!
//! JSON: `{"algorithm": .., "n": .., "snapshots": [{"label": .., "probs": [..]}]}`.
//! CSV: header `label,p0,p1,...` and one row per snapshot.
//! Floats are written in shortest round-trip form, so reading a file back
//! reproduces every value bit for bit.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::majorder::{lorenz_points, ProbVector, Trace, TraceReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TraceFormat {
    #[default]
    Json,
    Csv,
}

impl TraceFormat {
    /// Guesses from the file extension; anything but `.csv` is JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => TraceFormat::Csv,
            _ => TraceFormat::Json,
        }
    }
}

impl FromStr for TraceFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(TraceFormat::Json),
            "csv" => Ok(TraceFormat::Csv),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

pub fn write_trace<W: Write>(trace: &Trace, format: TraceFormat, out: W) -> Result<()> {
    if trace.is_empty() {
        return Err(Error::InvalidArgument("trace has no snapshots".into()));
    }
    match format {
        TraceFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, trace)?;
            out.write_all(b"\n")?;
        }
        TraceFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let dim = trace.dim().unwrap_or(0);
            let mut header = vec!["label".to_string()];
            header.extend((0..dim).map(|i| format!("p{i}")));
            w.write_record(&header)?;
            for s in trace.snapshots() {
                let mut row = vec![s.label.clone()];
                row.extend(s.probs.as_slice().iter().map(|p| p.to_string()));
                w.write_record(&row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Writes `trace` to `path`. Nothing is created if the trace is empty.
pub fn export_trace(trace: &Trace, path: &Path, format: TraceFormat) -> Result<()> {
    if trace.is_empty() {
        return Err(Error::InvalidArgument("trace has no snapshots".into()));
    }
    let file = BufWriter::new(File::create(path)?);
    write_trace(trace, format, file)
}

pub fn read_trace<R: Read>(input: R, format: TraceFormat) -> Result<Trace> {
    match format {
        TraceFormat::Json => serde_json::from_reader(input).map_err(|e| Error::Format(e.to_string())),
        TraceFormat::Csv => {
            let mut r = csv::Reader::from_reader(input);
            let dim = r.headers()?.len().saturating_sub(1);
            let n = if dim.is_power_of_two() {
                dim.trailing_zeros() as usize
            } else {
                0
            };
            let mut trace = Trace::new("imported", n);
            for record in r.records() {
                let record = record?;
                let mut fields = record.iter();
                let label = fields
                    .next()
                    .ok_or_else(|| Error::Format("empty row".into()))?;
                let probs = fields
                    .map(|f| {
                        f.trim()
                            .parse::<f64>()
                            .map_err(|e| Error::Format(format!("{f:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                trace.push(label, ProbVector::new(probs)?)?;
            }
            Ok(trace)
        }
    }
}

pub fn import_trace(path: &Path, format: TraceFormat) -> Result<Trace> {
    read_trace(File::open(path)?, format)
}

pub fn report_json(report: &TraceReport) -> Result<String> {
    Ok(serde_json::to_string(report)?)
}

/// Lorenz curves of every snapshot, one column per slice: header
/// `k,<label>,...`, then row `k` holds the sum of the `k+1` largest entries.
pub fn write_lorenz_csv<W: Write>(trace: &Trace, out: W) -> Result<()> {
    if trace.is_empty() {
        return Err(Error::InvalidArgument("trace has no snapshots".into()));
    }
    let columns: Vec<Vec<(usize, f64)>> = trace
        .snapshots()
        .iter()
        .map(|s| lorenz_points(&s.probs))
        .collect();
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["k".to_string()];
    header.extend(trace.snapshots().iter().map(|s| s.label.clone()));
    w.write_record(&header)?;
    for k in 0..columns[0].len() {
        let mut row = vec![k.to_string()];
        row.extend(columns.iter().map(|c| c[k].1.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn export_lorenz(trace: &Trace, path: &Path) -> Result<()> {
    if trace.is_empty() {
        return Err(Error::InvalidArgument("trace has no snapshots".into()));
    }
    write_lorenz_csv(trace, BufWriter::new(File::create(path)?))
}

/// Parses a Lorenz CSV back into `(labels, columns)`.
pub fn read_lorenz_csv<R: Read>(input: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_reader(input);
    let labels: Vec<String> = r.headers()?.iter().skip(1).map(str::to_string).collect();
    let mut columns = vec![Vec::new(); labels.len()];
    for record in r.records() {
        let record = record?;
        for (col, field) in columns.iter_mut().zip(record.iter().skip(1)) {
            col.push(
                field
                    .parse::<f64>()
                    .map_err(|e| Error::Format(format!("{field:?}: {e}")))?,
            );
        }
    }
    Ok((labels, columns))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorder::{greatest_element, least_element};

    fn sample() -> Trace {
        let mut t = Trace::new("demo", 2);
        t.push("a", least_element(4).unwrap()).unwrap();
        t.push("b", ProbVector::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap()).unwrap();
        t
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mut buf = Vec::new();
        write_trace(&sample(), TraceFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "label,p0,p1,p2,p3");
        assert_eq!(lines[1], "a,0.25,0.25,0.25,0.25");
    }

    #[test]
    fn json_schema() {
        let mut buf = Vec::new();
        write_trace(&sample(), TraceFormat::Json, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["algorithm"], "demo");
        assert_eq!(v["n"], 2);
        assert_eq!(v["snapshots"][1]["label"], "b");
        assert_eq!(v["snapshots"][1]["probs"][3], 0.4);
    }

    #[test]
    fn round_trips_are_exact() {
        let mut t = Trace::new("demo", 3);
        let weights: Vec<f64> = (1..=8).map(|i| (i as f64).sqrt() / 3.0).collect();
        t.push("x", ProbVector::from_weights(weights).unwrap()).unwrap();
        t.push("y", greatest_element(8).unwrap()).unwrap();
        for format in [TraceFormat::Json, TraceFormat::Csv] {
            let mut buf = Vec::new();
            write_trace(&t, format, &mut buf).unwrap();
            let back = read_trace(buf.as_slice(), format).unwrap();
            for (a, b) in t.snapshots().iter().zip(back.snapshots()) {
                assert_eq!(a.probs, b.probs);
                assert_eq!(a.label, b.label);
            }
        }
    }

    #[test]
    fn random_values_round_trip_bit_for_bit() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut t = Trace::new("demo", 5);
        for i in 0..200 {
            let w: Vec<f64> = (0..32).map(|_| rng.gen::<f64>()).collect();
            t.push(format!("s{i}"), ProbVector::from_weights(w).unwrap()).unwrap();
        }
        for format in [TraceFormat::Json, TraceFormat::Csv] {
            let mut buf = Vec::new();
            write_trace(&t, format, &mut buf).unwrap();
            let back = read_trace(buf.as_slice(), format).unwrap();
            for (a, b) in t.snapshots().iter().zip(back.snapshots()) {
                let bits = |v: &ProbVector| v.as_slice().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
                assert_eq!(bits(&a.probs), bits(&b.probs), "{format:?}");
            }
        }
    }

    #[test]
    fn empty_trace_is_rejected() {
        let t = Trace::new("empty", 1);
        assert!(write_trace(&t, TraceFormat::Csv, Vec::new()).is_err());
    }

    #[test]
    fn malformed_inputs() {
        let bad_dims = r#"{"algorithm":"x","n":1,"snapshots":[
            {"label":"a","probs":[0.5,0.5]},{"label":"b","probs":[1,0,0]}]}"#;
        assert!(read_trace(bad_dims.as_bytes(), TraceFormat::Json).is_err());
        assert!(read_trace("not json".as_bytes(), TraceFormat::Json).is_err());
        let bad_mass = "label,p0,p1\na,0.5,0.6\n";
        assert!(read_trace(bad_mass.as_bytes(), TraceFormat::Csv).is_err());
        let ragged = "label,p0,p1\na,0.5,0.5\nb,1\n";
        assert!(read_trace(ragged.as_bytes(), TraceFormat::Csv).is_err());
    }

    #[test]
    fn lorenz_table_layout() {
        let mut buf = Vec::new();
        write_lorenz_csv(&sample(), &mut buf).unwrap();
        let (labels, cols) = read_lorenz_csv(buf.as_slice()).unwrap();
        assert_eq!(labels, vec!["a", "b"]);
        assert_eq!(cols[0], vec![0.25, 0.5, 0.75, 1.0]);
        assert_eq!(cols[1][0], 0.4);
    }

    #[test]
    fn format_detection() {
        assert_eq!(TraceFormat::from_path(Path::new("x.CSV")), TraceFormat::Csv);
        assert_eq!(TraceFormat::from_path(Path::new("x.json")), TraceFormat::Json);
        assert_eq!("csv".parse::<TraceFormat>().unwrap(), TraceFormat::Csv);
        assert!("xml".parse::<TraceFormat>().is_err());
    }
}
