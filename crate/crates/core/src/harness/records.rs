//! CSV persistence for regret records and rate-distortion points.
//!
//! Files are UTF-8 with LF line endings. Floats are written with Rust's
//! shortest round-trip formatting, so reading a file back reproduces every
//! value bit for bit.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::info::Distribution;
use crate::matrix::Matrix;
use crate::rd::DistortionMatrix;

pub const RECORD_HEADER: &str = "agent,param,trial,period,regret,cum_regret";
pub const RD_HEADER: &str = "method,param,rate_bits,distortion";

/// Regret of one agent in one period of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub agent: String,
    /// β or ε tag; empty for parameterless agents.
    pub param: String,
    pub trial: u32,
    /// 1-based period index.
    pub period: u32,
    pub regret: f64,
    pub cum_regret: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetMethod {
    /// Blahut-Arimoto target at multiplier `param`.
    Ba,
    /// Satisficing target with tolerance `param`.
    Sts,
}

impl TargetMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            TargetMethod::Ba => "BA",
            TargetMethod::Sts => "STS",
        }
    }
}

/// Rate and distortion of one learning target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdPoint {
    pub method: TargetMethod,
    pub param: f64,
    pub rate: f64,
    pub distortion: f64,
}

fn create(path: &Path) -> Result<File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path).map_err(|e| Error::io(path, e))
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

fn to_io(e: csv::Error) -> std::io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        k => std::io::Error::other(format!("{k:?}")),
    }
}

pub fn write_records_to<W: Write>(records: &[TrialRecord], out: W) -> std::io::Result<()> {
    let mut w = writer(out);
    w.write_record(RECORD_HEADER.split(',')).map_err(to_io)?;
    for r in records {
        let row = [
            r.agent.clone(),
            r.param.clone(),
            r.trial.to_string(),
            r.period.to_string(),
            r.regret.to_string(),
            r.cum_regret.to_string(),
        ];
        w.write_record(&row).map_err(to_io)?;
    }
    w.flush()
}

pub fn write_records(records: &[TrialRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_records_to(records, create(path)?).map_err(|e| Error::io(path, e))
}

fn csv_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Csv { path: path.display().to_string(), line, msg: msg.into() }
}

fn line_of(r: &csv::StringRecord) -> usize {
    r.position().map_or(0, |p| p.line() as usize)
}

/// Opens `path` and returns its header and data rows with their line numbers.
/// Rows must all have the header's field count.
fn read_table(path: &Path) -> Result<(csv::StringRecord, Vec<csv::StringRecord>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(file);
    let mut rows = reader.records();
    let wrap = |e: csv::Error| {
        let line = e.position().map_or(0, |p| p.line() as usize);
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            k => csv_err(path, line, format!("{k:?}")),
        }
    };
    let header = rows.next().ok_or_else(|| csv_err(path, 1, "missing header"))?.map_err(wrap)?;
    let mut data = Vec::new();
    for row in rows {
        let row = row.map_err(wrap)?;
        if row.len() != header.len() {
            return Err(csv_err(path, line_of(&row), format!("expected {} fields, got {}", header.len(), row.len())));
        }
        data.push(row);
    }
    Ok((header, data))
}

fn read_expecting(path: &Path, header: &str) -> Result<Vec<csv::StringRecord>> {
    let (found, rows) = read_table(path)?;
    if !found.iter().eq(header.split(',')) {
        return Err(csv_err(path, 1, format!("expected header `{header}`")));
    }
    Ok(rows)
}

fn field<T: std::str::FromStr>(path: &Path, row: &csv::StringRecord, i: usize, name: &str) -> Result<T> {
    let v = row[i].trim();
    v.parse().map_err(|_| csv_err(path, line_of(row), format!("invalid {name} `{v}`")))
}

pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<TrialRecord>> {
    let path = path.as_ref();
    read_expecting(path, RECORD_HEADER)?
        .iter()
        .map(|r| {
            Ok(TrialRecord {
                agent: r[0].to_string(),
                param: r[1].to_string(),
                trial: field(path, r, 2, "trial")?,
                period: field(path, r, 3, "period")?,
                regret: field(path, r, 4, "regret")?,
                cum_regret: field(path, r, 5, "cum_regret")?,
            })
        })
        .collect()
}

pub fn write_rd_points_to<W: Write>(points: &[RdPoint], out: W) -> std::io::Result<()> {
    let mut w = writer(out);
    w.write_record(RD_HEADER.split(',')).map_err(to_io)?;
    for p in points {
        let row = [p.method.as_str().to_string(), p.param.to_string(), p.rate.to_string(), p.distortion.to_string()];
        w.write_record(&row).map_err(to_io)?;
    }
    w.flush()
}

pub fn write_rd_points(points: &[RdPoint], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_rd_points_to(points, create(path)?).map_err(|e| Error::io(path, e))
}

pub fn read_rd_points(path: impl AsRef<Path>) -> Result<Vec<RdPoint>> {
    let path = path.as_ref();
    read_expecting(path, RD_HEADER)?
        .iter()
        .map(|r| {
            let method = match &r[0] {
                "BA" => TargetMethod::Ba,
                "STS" => TargetMethod::Sts,
                m => return Err(csv_err(path, line_of(r), format!("unknown method `{m}`"))),
            };
            Ok(RdPoint {
                method,
                param: field(path, r, 1, "param")?,
                rate: field(path, r, 2, "rate_bits")?,
                distortion: field(path, r, 3, "distortion")?,
            })
        })
        .collect()
}

/// Reads a source distribution: header `label,prob`, one row per environment.
pub fn read_source_csv(path: impl AsRef<Path>) -> Result<Distribution<f64>> {
    let path = path.as_ref();
    let rows = read_expecting(path, "label,prob")?;
    let labels = rows.iter().map(|r| r[0].trim().to_string()).collect();
    let probs = rows.iter().map(|r| field(path, r, 1, "prob")).collect::<Result<Vec<f64>>>()?;
    Distribution::new(labels, probs)
}

/// Reads a distortion matrix: header `label,<target labels...>`, then one
/// `env_label,d1,...,dk` row per environment.
pub fn read_distortion_csv(path: impl AsRef<Path>) -> Result<DistortionMatrix<f64>> {
    let path = path.as_ref();
    let (header, rows) = read_table(path)?;
    if header.get(0).map(str::trim) != Some("label") {
        return Err(csv_err(path, 1, "header must start with `label`"));
    }
    let col_labels: Vec<String> = header.iter().skip(1).map(|s| s.trim().to_string()).collect();
    let row_labels: Vec<String> = rows.iter().map(|r| r[0].trim().to_string()).collect();
    let mut data = Vec::with_capacity(rows.len() * col_labels.len());
    for r in &rows {
        for i in 1..r.len() {
            data.push(field(path, r, i, "distortion")?);
        }
    }
    let m = Matrix::from_vec(row_labels.len(), col_labels.len(), data)?;
    DistortionMatrix::new(row_labels, col_labels, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_stream_is_header_only() {
        let mut buf = Vec::new();
        write_records_to(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{RECORD_HEADER}\n"));
    }

    #[test]
    fn rejects_wrong_header() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.csv");
        std::fs::write(&p, "a,b\n").unwrap();
        assert!(matches!(read_records(&p), Err(Error::Csv { line: 1, .. })));
        std::fs::write(&p, format!("{RECORD_HEADER}\nts,,0,1,0.5\n")).unwrap();
        assert!(matches!(read_records(&p), Err(Error::Csv { line: 2, .. })));
    }

    #[test]
    fn rd_points_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("rd.csv");
        let pts = vec![
            RdPoint { method: TargetMethod::Ba, param: 0.1, rate: 1.0 / 3.0, distortion: 2e-7 },
            RdPoint { method: TargetMethod::Sts, param: 0.05, rate: 0.0, distortion: 0.012345678901234567 },
        ];
        write_rd_points(&pts, &p).unwrap();
        assert_eq!(read_rd_points(&p).unwrap(), pts);
    }

    #[test]
    fn reads_solver_inputs() {
        let dir = tempfile::tempdir().unwrap();
        let s = dir.path().join("s.csv");
        let d = dir.path().join("d.csv");
        std::fs::write(&s, "label,prob\nx,0.25\ny,0.75\n").unwrap();
        std::fs::write(&d, "label,a,b,c\nx,0,1,2\ny,1,0,0.5\n").unwrap();
        let src = read_source_csv(&s).unwrap();
        let dm = read_distortion_csv(&d).unwrap();
        assert_eq!(src.labels(), dm.row_labels());
        assert_eq!(dm.col_labels(), &["a", "b", "c"]);
        assert_eq!(dm.matrix().get(1, 2), 0.5);
        std::fs::write(&s, "label,prob\n\"x, low\",1\n").unwrap();
        assert_eq!(read_source_csv(&s).unwrap().labels(), &["x, low"]);
        std::fs::write(&d, "label,a\nx,0,1\n").unwrap();
        assert!(matches!(read_distortion_csv(&d), Err(Error::Csv { line: 2, .. })));
    }
}
