use std::fs::File;
use std::io::Write;
use std::path::Path;

use asaf_core::infotheory::OutagePoint;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const OUTAGE_HEADER: [&str; 13] = [
    "protocol", "N", "M", "T", "theta", "x", "r", "r_prime", "rho_db", "trials", "outages", "p_out", "std_err",
];
pub const BOUND_HEADER: [&str; 3] = ["r", "d_bound", "d_transmit"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutageRow {
    pub protocol: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub theta: i64,
    pub x: usize,
    pub r: f64,
    pub r_prime: f64,
    pub rho_db: f64,
    pub trials: u64,
    pub outages: u64,
    pub p_out: f64,
    pub std_err: f64,
}

impl OutageRow {
    pub fn point(&self) -> OutagePoint {
        OutagePoint {
            rho_db: self.rho_db,
            trials: self.trials,
            outages: self.outages,
            p_out: self.p_out,
            std_err: self.std_err,
        }
    }

    pub fn record(&self) -> [String; 13] {
        [
            self.protocol.clone(),
            self.n.to_string(),
            self.m.to_string(),
            self.t.to_string(),
            self.theta.to_string(),
            self.x.to_string(),
            self.r.to_string(),
            self.r_prime.to_string(),
            self.rho_db.to_string(),
            self.trials.to_string(),
            self.outages.to_string(),
            sig6(self.p_out),
            sig6(self.std_err),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub r: f64,
    pub d_bound: f64,
    pub d_transmit: f64,
}

/// Six significant digits in scientific notation.
pub fn sig6(v: f64) -> String {
    format!("{v:.5e}")
}

pub enum Table {
    Outage(Vec<OutageRow>),
    Bound(Vec<BoundRow>),
}

fn header_of(path: &Path) -> Result<(csv::Reader<File>, Vec<String>), CliError> {
    let mut reader = csv::Reader::from_path(path)?;
    let header = reader.headers()?.iter().map(str::to_string).collect();
    Ok((reader, header))
}

/// Reads an outage or bound CSV, detecting the schema from the header.
pub fn read_table(path: &Path) -> Result<Table, CliError> {
    let (mut reader, header) = header_of(path)?;
    if header == OUTAGE_HEADER {
        Ok(Table::Outage(reader.deserialize().collect::<Result<_, _>>()?))
    } else if header == BOUND_HEADER {
        Ok(Table::Bound(reader.deserialize().collect::<Result<_, _>>()?))
    } else {
        Err(CliError::Schema(format!(
            "{}: header `{}` is neither the outage nor the bound schema",
            path.display(),
            header.join(",")
        )))
    }
}

pub fn read_outage(path: &Path) -> Result<Vec<OutageRow>, CliError> {
    match read_table(path)? {
        Table::Outage(rows) => Ok(rows),
        Table::Bound(_) => Err(CliError::Schema(format!("{} is a bound CSV", path.display()))),
    }
}

/// Groups rows into curves keyed by `(protocol, r)`, in order of first appearance.
pub fn curves(rows: &[OutageRow]) -> Vec<((String, f64), Vec<&OutageRow>)> {
    let mut out: Vec<((String, f64), Vec<&OutageRow>)> = Vec::new();
    for row in rows {
        let key = (row.protocol.clone(), row.r);
        match out.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(row),
            None => out.push((key, vec![row])),
        }
    }
    out
}

/// CSV writer that flushes after every record.
pub struct RowWriter {
    inner: csv::Writer<File>,
}

impl RowWriter {
    pub fn create(path: &Path, header: &[&str]) -> Result<Self, CliError> {
        let mut inner = csv::Writer::from_path(path)?;
        inner.write_record(header)?;
        inner.flush()?;
        Ok(RowWriter { inner })
    }

    pub fn write<I, S>(&mut self, record: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.inner.write_record(record)?;
        self.inner.flush()?;
        Ok(())
    }
}

pub fn write_bound<W: Write>(out: W, rows: &[BoundRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BOUND_HEADER)?;
    for row in rows {
        w.write_record([row.r.to_string(), row.d_bound.to_string(), row.d_transmit.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
