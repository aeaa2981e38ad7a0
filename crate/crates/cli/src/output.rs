//! CSV emission and ingestion.
//!
//! Numbers are written in scientific notation with 17 significant digits,
//! which reproduces every `f64` exactly when read back.

use std::io::{Read, Write};

use csv::{ReaderBuilder, Terminator, WriterBuilder};
use kdem_core::FoodRecord;
use serde::Deserialize;

use crate::CliError;

/// `x` with 17 significant digits, e.g. `1.4999037330000000e1`.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `header` then one row per entry of `columns[0]`.
pub fn write_columns<W: Write>(
    sink: W,
    header: &[&str],
    columns: &[&[f64]],
) -> Result<(), CliError> {
    let mut w = WriterBuilder::new()
        .terminator(Terminator::Any(b'\n'))
        .from_writer(sink);
    w.write_record(header)?;
    let rows = columns.first().map_or(0, |c| c.len());
    for i in 0..rows {
        w.write_record(columns.iter().map(|c| format_f64(c[i])))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a file written by [`write_columns`], returning the header and
/// the columns.
pub fn read_columns<R: Read>(source: R) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut r = ReaderBuilder::new().from_reader(source);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    let mut columns = vec![Vec::new(); header.len()];
    for (row, record) in r.records().enumerate() {
        let record = record?;
        for (col, field) in columns.iter_mut().zip(record.iter()) {
            col.push(field.parse().map_err(|_| {
                CliError::Input(format!("row {}: not a number: {field:?}", row + 1))
            })?);
        }
    }
    Ok((header, columns))
}

#[derive(Debug, Deserialize)]
struct FoodRow {
    product: String,
    contamination_q: f64,
    consumption_c: f64,
}

const FOOD_HEADER: [&str; 3] = ["product", "contamination_q", "consumption_c"];

/// Parses food records; errors name the offending data row (1-based).
pub fn read_food_records<R: Read>(source: R) -> Result<Vec<FoodRecord>, CliError> {
    let mut r = ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(source);
    let header = r.headers()?;
    if header.iter().ne(FOOD_HEADER) {
        return Err(CliError::Input(format!(
            "expected header {}, found {}",
            FOOD_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (i, row) in r.deserialize::<FoodRow>().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| CliError::Input(format!("row {row_no}: {e}")))?;
        let record = FoodRecord::new(row.product, row.contamination_q, row.consumption_c)
            .map_err(|e| CliError::Input(format!("row {row_no}: {e}")))?;
        out.push(record);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_round_trip() {
        let times = [0.0, 0.1, 1.0 / 3.0, 600.0];
        let values = [15.0, 14.999_037_33, f64::MIN_POSITIVE, 1e300];
        let mut buf = Vec::new();
        write_columns(&mut buf, &["time", "burden"], &[&times, &values]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("time,burden\n"));
        assert!(!text.contains('\r'));
        let (header, cols) = read_columns(buf.as_slice()).unwrap();
        assert_eq!(header, ["time", "burden"]);
        assert_eq!(cols[0], times);
        assert_eq!(cols[1], values);
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(format_f64(15.0), "1.5000000000000000e1");
    }

    #[test]
    fn food_rows() {
        let data = "product,contamination_q,consumption_c\nfish,1,3\nmilk,2,4\n";
        let recs = read_food_records(data.as_bytes()).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[1].contamination_q, 2.0);
        let bad = "product,contamination_q,consumption_c\nfish,1,3\nmilk,-2,4\n";
        let err = read_food_records(bad.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("row 2"), "{err}");
        let wrong = "product,q,c\nfish,1,3\n";
        assert!(read_food_records(wrong.as_bytes()).is_err());
    }
}
