//! The semicolon-delimited comment CSV.
//!
//! The first row is a header. Columns are located by name, so their order
//! in the file is free; the default names are
//! `no;username;komentar;label;tanggal;akun_target`. Fields holding the
//! delimiter, a quote or a newline are double-quoted with embedded quotes
//! doubled.

use std::io::{Read, Write};
use std::path::Path;

use rundung_core::corpus::{CommentRecord, RawRecord, FIELD_NAMES};
use serde::{Deserialize, Serialize};

use crate::error::{AppError, AppResult};

pub const DEFAULT_DELIMITER: u8 = b';';

/// Header names of the six fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ColumnMap {
    pub index: String,
    pub commenter: String,
    pub text: String,
    pub label: String,
    pub date: String,
    pub target: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            index: "no".into(),
            commenter: "username".into(),
            text: "komentar".into(),
            label: "label".into(),
            date: "tanggal".into(),
            target: "akun_target".into(),
        }
    }
}

impl ColumnMap {
    fn names(&self) -> [&str; 6] {
        [&self.index, &self.commenter, &self.text, &self.label, &self.date, &self.target]
    }
}

fn reader_builder(delimiter: u8) -> csv::ReaderBuilder {
    let mut b = csv::ReaderBuilder::new();
    b.delimiter(delimiter).has_headers(false).flexible(true);
    b
}

/// Reads rows without interpreting them. A row whose field count differs
/// from the header's is an error naming its line.
pub fn read_raw<R: Read>(input: R, delimiter: u8, columns: &ColumnMap) -> AppResult<Vec<RawRecord>> {
    let mut rdr = reader_builder(delimiter).from_reader(input);
    let mut rows = rdr.records();
    let header = match rows.next() {
        None => return Ok(Vec::new()),
        Some(h) => h.map_err(|e| AppError::Validation(format!("header: {e}")))?,
    };
    let header: Vec<String> = header.iter().map(|h| h.trim().trim_start_matches('\u{feff}').to_string()).collect();
    let mut positions = [0usize; 6];
    for (slot, (name, field)) in positions.iter_mut().zip(columns.names().into_iter().zip(FIELD_NAMES)) {
        *slot = header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| AppError::Validation(format!("header has no column {name:?} for the {field} field")))?;
    }
    let mut out = Vec::new();
    for row in rows {
        let row = row.map_err(|e| AppError::Validation(e.to_string()))?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
        if row.iter().all(|f| f.is_empty()) && row.len() <= 1 {
            continue;
        }
        if row.len() != header.len() {
            return Err(AppError::Validation(format!(
                "line {line}: expected {} fields, found {}",
                header.len(),
                row.len()
            )));
        }
        let fields = positions.map(|p| row[p].to_string());
        out.push(RawRecord { line, fields });
    }
    Ok(out)
}

/// Parses rows into records, failing on the first bad row.
pub fn parse_records(rows: &[RawRecord]) -> AppResult<Vec<CommentRecord>> {
    rows.iter().map(|r| r.to_record().map_err(AppError::Validation)).collect()
}

pub fn load_raw(path: &Path, delimiter: u8, columns: &ColumnMap) -> AppResult<Vec<RawRecord>> {
    let file = std::fs::File::open(path).map_err(|e| AppError::io(path, e))?;
    read_raw(std::io::BufReader::new(file), delimiter, columns)
}

/// Loads and interprets a corpus file, in file order.
pub fn load_corpus(path: &Path, delimiter: u8, columns: &ColumnMap) -> AppResult<Vec<CommentRecord>> {
    parse_records(&load_raw(path, delimiter, columns)?)
}

/// Writes records with a header using `columns`' names.
pub fn write_corpus<W: Write>(output: W, records: &[CommentRecord], delimiter: u8, columns: &ColumnMap) -> AppResult<()> {
    let mut w = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(output);
    let fmt = |e: csv::Error| AppError::Format(e.to_string());
    w.write_record(columns.names()).map_err(fmt)?;
    for r in records {
        w.write_record(RawRecord::from(r).fields.iter()).map_err(fmt)?;
    }
    w.flush().map_err(|e| AppError::Format(e.to_string()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rundung_core::Label;

    const HEADER: &str = "no;username;komentar;label;tanggal;akun_target\n";

    fn parse(text: &str) -> AppResult<Vec<CommentRecord>> {
        parse_records(&read_raw(text.as_bytes(), b';', &ColumnMap::default())?)
    }

    #[test]
    fn single_row() {
        let r = parse(&format!("{HEADER}1;userA;dasar jelek banget;Bullying;2024-01-05;artistX\n")).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].label, Label::Bullying);
        assert_eq!(r[0].text, "dasar jelek banget");
        assert_eq!(r[0].target_handle, "artistX");
    }

    #[test]
    fn header_only() {
        assert!(parse(HEADER).unwrap().is_empty());
        assert!(parse("").unwrap().is_empty());
    }

    #[test]
    fn wrong_field_count_names_line() {
        let err = parse(&format!("{HEADER}1;userA;teks;Bullying;2024-01-05\n")).unwrap_err();
        assert_eq!(err.to_string(), "line 2: expected 6 fields, found 5");
    }

    #[test]
    fn unknown_label_names_value() {
        let err = parse(&format!("{HEADER}1;u;teks;Spam;2024-01-05;t\n")).unwrap_err();
        assert!(err.to_string().contains("\"Spam\""), "{err}");
    }

    #[test]
    fn columns_found_by_name() {
        let text = "komentar;label;no;username;akun_target;tanggal\nhalo kak;Non-bullying;7;u;t;2024-02-01\n";
        let r = parse(text).unwrap();
        assert_eq!(r[0].index, 7);
        assert_eq!(r[0].label, Label::NonBullying);
        let mut cols = ColumnMap::default();
        cols.text = "comment".into();
        assert!(read_raw(text.as_bytes(), b';', &cols).is_err());
    }

    #[test]
    fn quoting_round_trip() {
        let records = vec![CommentRecord {
            index: 1,
            commenter_handle: "a".into(),
            text: "pakai ; titik koma dan \"kutip\"\nbaris baru".into(),
            label: Label::Bullying,
            posted_date: "2024-01-01".into(),
            target_handle: "b".into(),
        }];
        let mut buf = Vec::new();
        write_corpus(&mut buf, &records, b';', &ColumnMap::default()).unwrap();
        assert!(String::from_utf8_lossy(&buf).contains("\"pakai ; titik koma dan \"\"kutip\"\""));
        assert_eq!(parse(std::str::from_utf8(&buf).unwrap()).unwrap(), records);
    }
}
