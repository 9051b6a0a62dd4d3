//! CSV exchange format `n,value` for sequences and tables.

use std::io::{Read, Write};
use std::path::Path;

use crate::arith::{Sequence, Values};
use crate::error::{Error, Result};
use crate::scalar::{Exact, Param};

/// Reads a `n,value` CSV. Values written as `p/q` or decimals stay exact;
/// anything else (e.g. `1e400`, `NaN`) is rejected.
pub fn read_sequence<R: Read>(reader: R, label: &str) -> Result<Sequence> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let mut exact: Vec<Exact> = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(Error::Parse(format!("row {}: expected 2 fields", row + 1)));
        }
        let n: usize = rec[0]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("row {}: bad index {:?}", row + 1, &rec[0])))?;
        if n != row + 1 {
            return Err(Error::Parse(format!(
                "row {}: indices must run 1, 2, 3, ... (found {n})",
                row + 1
            )));
        }
        let p = Param::parse(&rec[1])?;
        exact.push(p.exact().cloned().expect("parsed params are exact"));
    }
    Sequence::exact(exact, label)
}

pub fn read_sequence_file(path: &Path) -> Result<Sequence> {
    let f = std::fs::File::open(path)?;
    read_sequence(f, &path.display().to_string())
}

/// Writes `n,value` rows: floats in shortest round-trip form, exact
/// entries as `p/q` (or `p` when integral).
pub fn write_sequence<W: Write>(writer: W, s: &Sequence) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["n", "value"])?;
    match s.values() {
        Values::Exact(v) => {
            for (i, x) in v.iter().enumerate() {
                w.write_record([(i + 1).to_string(), x.to_string()])?;
            }
        }
        Values::Float(v) => {
            for (i, x) in v.iter().enumerate() {
                w.write_record([(i + 1).to_string(), format_f64(*x)])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes an arbitrary two-column float table.
pub fn write_table<W: Write>(writer: W, header: [&str; 2], rows: &[(f64, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(header)?;
    for (a, b) in rows {
        w.write_record([format_f64(*a), format_f64(*b)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn format_f64(x: f64) -> String {
    // `{:?}` is the shortest representation that round-trips.
    format!("{x:?}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith;

    #[test]
    fn exact_round_trip() {
        let s = Sequence::exact(
            vec![Exact::new(1.into(), 3.into()), Exact::from_integer((-2).into())],
            "x",
        )
        .unwrap();
        let mut buf = Vec::new();
        write_sequence(&mut buf, &s).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "n,value\n1,1/3\n2,-2\n");
        let back = read_sequence(buf.as_slice(), "x").unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn float_output_round_trips_bitwise() {
        let s = arith::dh_sequence(5).unwrap();
        let mut buf = Vec::new();
        write_sequence(&mut buf, &s).unwrap();
        let back = read_sequence(buf.as_slice(), "dh").unwrap();
        assert_eq!(back.to_f64_vec(), s.to_f64_vec());
    }

    #[test]
    fn rejects_gaps() {
        let data = "n,value\n1,1\n3,2\n";
        assert!(read_sequence(data.as_bytes(), "x").is_err());
    }
}
