//! Reading and writing the JSON and CSV file formats.

use std::fs;
use std::io::Read;
use std::path::Path as FsPath;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{parse_scalar, Scalar};

/// Parse JSON text; errors carry `source:line:column`.
pub fn parse_json<T: DeserializeOwned>(text: &str, source: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{source}:{}:{}: {e}", e.line(), e.column())))
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<FsPath>) -> Result<T> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_json(&text, &path.display().to_string())
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("values serialize to JSON")
}

pub fn write_json<T: Serialize>(path: impl AsRef<FsPath>, value: &T) -> Result<()> {
    let path = path.as_ref();
    let mut text = to_json_pretty(value);
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// One sample per row, all rows the same width. With `has_header` the first
/// row is skipped. Errors name the 1-based row and column.
pub fn parse_time_series_csv(reader: impl Read, has_header: bool, source: &str) -> Result<Vec<Vec<Scalar>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut samples: Vec<Vec<Scalar>> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Parse(format!("{source}: {e}")))?;
        let row = record.position().map_or(samples.len() + 1, |p| p.line() as usize);
        let sample = record
            .iter()
            .enumerate()
            .map(|(col, cell)| {
                parse_scalar(cell).map_err(|e| Error::Parse(format!("{source}:{row}:{}: {e}", col + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = samples.first() {
            if first.len() != sample.len() {
                return Err(Error::Parse(format!(
                    "{source}:{row}: expected {} columns, found {}",
                    first.len(),
                    sample.len()
                )));
            }
        }
        samples.push(sample);
    }
    Ok(samples)
}

pub fn read_time_series_csv(path: impl AsRef<FsPath>, has_header: bool) -> Result<Vec<Vec<Scalar>>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_time_series_csv(file, has_header, &path.display().to_string())
}
