//! The tabular output format shared by every command.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Column order of every CSV the tool writes.
pub const HEADER: [&str; 9] = [
    "omega",
    "mu",
    "sigma",
    "ell",
    "delta_omega",
    "quantity",
    "value",
    "err",
    "status",
];

/// One output row: coordinates, a named quantity, its value and error bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub omega: f64,
    pub mu: f64,
    pub sigma: f64,
    pub ell: f64,
    pub delta_omega: f64,
    pub quantity: String,
    pub value: Option<f64>,
    pub err: Option<f64>,
    pub status: String,
}

impl Row {
    pub fn at(p: &harvestkit::Params, quantity: impl Into<String>) -> Self {
        Self {
            omega: p.gap_mean,
            mu: p.mass,
            sigma: p.size,
            ell: p.separation,
            delta_omega: p.gap_split,
            quantity: quantity.into(),
            value: None,
            err: None,
            status: "ok".into(),
        }
    }

    /// A row not tied to a parameter point; coordinates are zero.
    pub fn named(quantity: impl Into<String>) -> Self {
        Self {
            omega: 0.0,
            mu: 0.0,
            sigma: 0.0,
            ell: 0.0,
            delta_omega: 0.0,
            quantity: quantity.into(),
            value: None,
            err: None,
            status: "ok".into(),
        }
    }

    pub fn value(mut self, v: f64) -> Self {
        self.value = Some(v);
        self
    }

    pub fn err(mut self, e: f64) -> Self {
        self.err = (!e.is_nan()).then_some(e);
        self
    }

    pub fn status(mut self, s: impl Into<String>) -> Self {
        self.status = s.into();
        self
    }
}

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// 17 significant digits: enough to round-trip any `f64`.
fn number(v: f64) -> String {
    if v == 0.0 {
        if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        }
    } else if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn optional(v: Option<f64>) -> String {
    v.map(number).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Config(format!("cannot write table: {e}"));
    w.write_record(HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            number(r.omega),
            number(r.mu),
            number(r.sigma),
            number(r.ell),
            number(r.delta_omega),
            r.quantity.clone(),
            optional(r.value),
            optional(r.err),
            r.status.clone(),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| CliError::Config(format!("cannot write table: {e}")))
}

pub fn write_json<W: Write>(rows: &[Row], mut out: W) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut out, rows)
        .map_err(|e| CliError::Config(format!("cannot write table: {e}")))?;
    writeln!(out).map_err(|e| CliError::Config(format!("cannot write table: {e}")))
}

/// Reads a table written by [`write_csv`].
pub fn read_csv<R: Read>(input: R) -> CliResult<Vec<Row>> {
    let mut r = csv::Reader::from_reader(input);
    let bad = |msg: String| CliError::Config(format!("malformed table: {msg}"));
    let header = r.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().ne(HEADER) {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("{s:?}: {e}")));
    let opt = |s: &str| {
        if s.is_empty() {
            Ok(None)
        } else {
            num(s).map(Some)
        }
    };
    r.records()
        .map(|rec| {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            Ok(Row {
                omega: num(&rec[0])?,
                mu: num(&rec[1])?,
                sigma: num(&rec[2])?,
                ell: num(&rec[3])?,
                delta_omega: num(&rec[4])?,
                quantity: rec[5].to_string(),
                value: opt(&rec[6])?,
                err: opt(&rec[7])?,
                status: rec[8].to_string(),
            })
        })
        .collect()
}

pub fn read_json<R: Read>(input: R) -> CliResult<Vec<Row>> {
    serde_json::from_reader(input).map_err(|e| CliError::Config(format!("malformed table: {e}")))
}

/// Writes `rows` to `path`, or to stdout when no path is given.
pub fn emit(rows: &[Row], format: Format, path: Option<&std::path::Path>) -> CliResult<()> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p).map_err(
            |e| CliError::Config(format!("cannot create {}: {e}", p.display())),
        )?)),
        None => Box::new(std::io::stdout().lock()),
    };
    match format {
        Format::Csv => write_csv(rows, sink),
        Format::Json => write_json(rows, sink),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<Row> {
        let p = harvestkit::Params::new(2.5, 0.1, 0.2, 5.0).unwrap();
        vec![
            Row::at(&p, "negativity").value(1.0 / 3.0).err(1e-17),
            Row::at(&p, "signalling_fraction").status("undefined"),
            Row::at(&p.with_gap_split(-0.3), "L")
                .value(-0.0)
                .err(f64::NAN),
        ]
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let rows = sample();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        assert_eq!(read_csv(buf.as_slice()).unwrap(), rows);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("omega,mu,sigma,ell,delta_omega,quantity,value,err,status\n"));
        assert!(text.contains("3.3333333333333331e-1"));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let rows = sample();
        let mut buf = Vec::new();
        write_json(&rows, &mut buf).unwrap();
        assert_eq!(read_json(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn wrong_header_is_rejected() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }
}
