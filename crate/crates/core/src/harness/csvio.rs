//! CSV files.
//!
//! Fingerprint and sample files share one schema:
//!
//! ```text
//! loc_id,x_ft,y_ft,ap_1,...,ap_N
//! 1,10,5,-60,-40
//! ```
//!
//! readings are dBm, an empty cell marks a missing AP. Result tables are
//! `error_ft,cum_fraction` (CDF) and `shots,median_error_ft` (shot sweep, with
//! an `inf` row for the exact reference). Every number is written with 9
//! significant digits.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::fingerprint::{FingerprintDb, TestSample};

use super::experiments::{CdfReport, LocalizationRow, SweepReport};
use super::format::format_sig9;
use super::testbed::{records_to_db, records_to_samples, RssRecord};

pub const CDF_HEADER: &str = "error_ft,cum_fraction";
pub const SWEEP_HEADER: &str = "shots,median_error_ft";
pub const LOCALIZE_HEADER: &str = "loc_id,x_ft,y_ft,est_id,est_x_ft,est_y_ft,error_ft";

/// Header line for a file with `ap_count` AP columns.
pub fn rss_header(ap_count: usize) -> String {
    let mut h = String::from("loc_id,x_ft,y_ft");
    for i in 1..=ap_count {
        h.push_str(&format!(",ap_{i}"));
    }
    h
}

/// Parsed RSS file: AP count from the header plus the rows.
#[derive(Clone, Debug, PartialEq)]
pub struct RssTable {
    pub ap_count: usize,
    pub records: Vec<RssRecord>,
}

fn parse_err(path: &Path, row: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        row,
        message: message.into(),
    }
}

fn parse_f64(path: &Path, row: u64, column: &str, cell: &str) -> Result<f64> {
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(parse_err(
            path,
            row,
            format!("column {column}: {cell:?} is not a finite number"),
        )),
    }
}

pub fn read_rss_table(path: &Path) -> Result<RssTable> {
    let file = fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_rss_table(file, path)
}

/// Parse from any reader; `path` is only used in error messages.
pub fn parse_rss_table<R: io::Read>(reader: R, path: &Path) -> Result<RssTable> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = rdr.records();

    let header = match rows.next() {
        Some(r) => r.map_err(csv_err)?,
        None => return Err(parse_err(path, 1, "missing header")),
    };
    let ap_count = header.len().saturating_sub(3);
    if ap_count == 0 || header.iter().collect::<Vec<_>>().join(",") != rss_header(ap_count) {
        return Err(parse_err(
            path,
            1,
            format!(
                "malformed header {:?}, expected loc_id,x_ft,y_ft,ap_1,...,ap_N",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let mut records = Vec::new();
    for result in rows {
        let rec = result.map_err(csv_err)?;
        let row = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != header.len() {
            return Err(parse_err(
                path,
                row,
                format!("expected {} fields, found {}", header.len(), rec.len()),
            ));
        }
        let loc_id = rec[0]
            .parse::<u32>()
            .map_err(|_| parse_err(path, row, format!("loc_id {:?} is not an id", &rec[0])))?;
        let x_ft = parse_f64(path, row, "x_ft", &rec[1])?;
        let y_ft = parse_f64(path, row, "y_ft", &rec[2])?;
        let readings = (0..ap_count)
            .map(|i| {
                let cell = &rec[3 + i];
                if cell.is_empty() {
                    Ok(None)
                } else {
                    parse_f64(path, row, &format!("ap_{}", i + 1), cell).map(Some)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        records.push(RssRecord {
            loc_id,
            x_ft,
            y_ft,
            readings,
        });
    }
    Ok(RssTable { ap_count, records })
}

pub fn write_rss_table<W: Write>(
    out: &mut W,
    ap_count: usize,
    records: &[RssRecord],
) -> io::Result<()> {
    writeln!(out, "{}", rss_header(ap_count))?;
    for r in records {
        write!(
            out,
            "{},{},{}",
            r.loc_id,
            format_sig9(r.x_ft),
            format_sig9(r.y_ft)
        )?;
        for v in &r.readings {
            match v {
                Some(v) => write!(out, ",{}", format_sig9(*v))?,
                None => write!(out, ",")?,
            }
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn load_fingerprints(path: &Path, floor: f64) -> Result<FingerprintDb> {
    let table = read_rss_table(path)?;
    records_to_db(table.ap_count, &table.records, floor)
}

pub fn load_samples(path: &Path, floor: f64) -> Result<Vec<TestSample>> {
    let table = read_rss_table(path)?;
    records_to_samples(&table.records, floor)
}

pub fn write_cdf<W: Write>(out: &mut W, report: &CdfReport) -> io::Result<()> {
    writeln!(out, "{CDF_HEADER}")?;
    for row in &report.rows {
        writeln!(
            out,
            "{},{}",
            format_sig9(row.error_ft),
            format_sig9(row.cum_fraction)
        )?;
    }
    Ok(())
}

pub fn write_sweep<W: Write>(out: &mut W, report: &SweepReport) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for row in &report.rows {
        let shots = row
            .shots
            .map_or_else(|| "inf".to_string(), |k| k.to_string());
        writeln!(out, "{shots},{}", format_sig9(row.median_error_ft))?;
    }
    Ok(())
}

pub fn write_localizations<W: Write>(out: &mut W, rows: &[LocalizationRow]) -> io::Result<()> {
    writeln!(out, "{LOCALIZE_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.truth.id,
            format_sig9(r.truth.x),
            format_sig9(r.truth.y),
            r.estimate.id,
            format_sig9(r.estimate.x),
            format_sig9(r.estimate.y),
            format_sig9(r.error_ft)
        )?;
    }
    Ok(())
}

/// Write a file through `render`, creating parent directories.
pub fn save_with<F>(path: &Path, render: F) -> Result<()>
where
    F: FnOnce(&mut Vec<u8>) -> io::Result<()>,
{
    let io_err = |source| Error::Io {
        path: PathBuf::from(path),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err)?;
    }
    let mut buf = Vec::new();
    render(&mut buf).map_err(io_err)?;
    fs::write(path, buf).map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RssTable> {
        parse_rss_table(text.as_bytes(), Path::new("mem.csv"))
    }

    #[test]
    fn one_location() {
        let t = parse("loc_id,x_ft,y_ft,ap_1,ap_2\n1,10.0,5.0,-60,-40\n").unwrap();
        assert_eq!(t.ap_count, 2);
        let db = records_to_db(t.ap_count, &t.records, -100.0).unwrap();
        assert_eq!(db.len(), 1);
        let v = db.entries()[0].vector.values();
        assert!((v[0] - 0.5547).abs() < 1e-4 && (v[1] - 0.8321).abs() < 1e-4);
        assert_eq!(db.entries()[0].location.x, 10.0);
    }

    #[test]
    fn empty_cell_is_missing() {
        let t = parse("loc_id,x_ft,y_ft,ap_1,ap_2\n4,1,2,,-40\n").unwrap();
        assert_eq!(t.records[0].readings, vec![None, Some(-40.0)]);
        let samples = records_to_samples(&t.records, -100.0).unwrap();
        assert_eq!(samples[0].vector.values(), &[0.0, 1.0]);
    }

    #[test]
    fn ragged_row_names_the_row() {
        let err =
            parse("loc_id,x_ft,y_ft,ap_1,ap_2\n1,0,0,-50,-50\n2,1,1,-60,-40,-70\n").unwrap_err();
        match err {
            Error::Parse { row, message, .. } => {
                assert_eq!(row, 3);
                assert!(message.contains("expected 5 fields, found 6"), "{message}");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn bad_header_and_cells() {
        assert!(matches!(
            parse("id,x,y,ap_1\n"),
            Err(Error::Parse { row: 1, .. })
        ));
        assert!(matches!(
            parse("loc_id,x_ft,y_ft\n"),
            Err(Error::Parse { row: 1, .. })
        ));
        assert!(matches!(
            parse("loc_id,x_ft,y_ft,ap_2\n"),
            Err(Error::Parse { row: 1, .. })
        ));
        assert!(matches!(parse(""), Err(Error::Parse { row: 1, .. })));
        let err = parse("loc_id,x_ft,y_ft,ap_1\n1,0,zero,-50\n").unwrap_err();
        assert!(matches!(err, Error::Parse { row: 2, .. }), "{err}");
        assert!(err.to_string().contains("y_ft"));
        assert!(parse("loc_id,x_ft,y_ft,ap_1\n1,0,0,NaN\n").is_err());
        assert!(parse("loc_id,x_ft,y_ft,ap_1\n-1,0,0,-50\n").is_err());
    }

    #[test]
    fn write_then_read() {
        let records = vec![
            RssRecord {
                loc_id: 1,
                x_ft: 10.0,
                y_ft: 5.0,
                readings: vec![Some(-60.0), None],
            },
            RssRecord {
                loc_id: 2,
                x_ft: 1.0 / 3.0,
                y_ft: 55.5,
                readings: vec![Some(-71.123456789), Some(-40.0)],
            },
        ];
        let mut buf = Vec::new();
        write_rss_table(&mut buf, 2, &records).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(
            text,
            "loc_id,x_ft,y_ft,ap_1,ap_2\n1,10,5,-60,\n2,0.333333333,55.5,-71.1234568,-40\n"
        );
        let back = parse(&text).unwrap();
        let mut again = Vec::new();
        write_rss_table(&mut again, back.ap_count, &back.records).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn missing_file() {
        let err = read_rss_table(Path::new("/nonexistent/fp.csv")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
