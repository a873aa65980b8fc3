use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{Attribute, LabeledInstance};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Numeric,
    /// Free-form values, interned to codes in first-seen order.
    Nominal,
    /// Values are already non-negative integer codes.
    Code,
}

/// Column types for a CSV stream. The last column is always the label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CsvSchema {
    attributes: Option<Vec<ColumnKind>>,
    label: Option<ColumnKind>,
}

impl CsvSchema {
    /// Attribute kinds are inferred from the first data row; labels interned.
    pub fn inferred() -> Self {
        Self::default()
    }

    pub fn declared(attributes: Vec<ColumnKind>, label: ColumnKind) -> Self {
        Self {
            attributes: Some(attributes),
            label: Some(label),
        }
    }
}

/// Row-by-row reader over a CSV stream.
pub struct CsvStream {
    path: PathBuf,
    records: csv::StringRecordsIntoIter<BufReader<File>>,
    header: Vec<String>,
    kinds: Option<Vec<ColumnKind>>,
    label_kind: ColumnKind,
    dictionaries: Vec<HashMap<String, u32>>,
    labels: Vec<String>,
    label_codes: HashMap<String, u32>,
    position: u64,
}

/// Opens `path` for streaming. Only the header is read up front.
pub fn load_csv_stream(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<CsvStream> {
    let path = path.as_ref().to_path_buf();
    let file = File::open(&path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(BufReader::new(file));
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(&path, 1, e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    if header.len() < 2 {
        return Err(csv_error(&path, 1, "need at least one attribute column and a label"));
    }
    let arity = header.len() - 1;
    if let Some(kinds) = &schema.attributes {
        if kinds.len() != arity {
            return Err(Error::Schema(format!(
                "{}: schema declares {} attributes, header has {arity}",
                path.display(),
                kinds.len()
            )));
        }
    }
    Ok(CsvStream {
        records: reader.into_records(),
        header,
        kinds: schema.attributes.clone(),
        label_kind: schema.label.unwrap_or(ColumnKind::Nominal),
        dictionaries: vec![HashMap::new(); arity],
        labels: Vec::new(),
        label_codes: HashMap::new(),
        position: 0,
        path,
    })
}

fn csv_error(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

impl CsvStream {
    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn attribute_kinds(&self) -> Option<&[ColumnKind]> {
        self.kinds.as_deref()
    }

    /// Label names in code order (interned labels only).
    pub fn label_names(&self) -> &[String] {
        &self.labels
    }

    fn parse_row(&mut self, record: &csv::StringRecord, line: u64) -> Result<LabeledInstance> {
        let arity = self.header.len() - 1;
        if record.len() != arity + 1 {
            return Err(csv_error(
                &self.path,
                line,
                format!("expected {} fields, found {}", arity + 1, record.len()),
            ));
        }
        let kinds = self.kinds.get_or_insert_with(|| {
            record
                .iter()
                .take(arity)
                .map(|v| {
                    if v.parse::<f64>().is_ok() {
                        ColumnKind::Numeric
                    } else {
                        ColumnKind::Nominal
                    }
                })
                .collect()
        });
        let mut attributes = Vec::with_capacity(arity);
        for (i, (value, kind)) in record.iter().zip(kinds.iter()).enumerate() {
            let attr = match kind {
                ColumnKind::Numeric => Attribute::Numeric(value.parse().map_err(|_| {
                    csv_error(
                        &self.path,
                        line,
                        format!("column `{}`: `{value}` is not a number", self.header[i]),
                    )
                })?),
                ColumnKind::Code => Attribute::Nominal(value.parse().map_err(|_| {
                    csv_error(
                        &self.path,
                        line,
                        format!("column `{}`: `{value}` is not a code", self.header[i]),
                    )
                })?),
                ColumnKind::Nominal => {
                    let dict = &mut self.dictionaries[i];
                    let next = dict.len() as u32;
                    Attribute::Nominal(*dict.entry(value.to_owned()).or_insert(next))
                }
            };
            attributes.push(attr);
        }
        let raw_label = &record[arity];
        let label = match self.label_kind {
            ColumnKind::Code => raw_label.parse().map_err(|_| {
                csv_error(&self.path, line, format!("label `{raw_label}` is not a code"))
            })?,
            _ => match self.label_codes.get(raw_label) {
                Some(&code) => code,
                None => {
                    let code = self.labels.len() as u32;
                    self.labels.push(raw_label.to_owned());
                    self.label_codes.insert(raw_label.to_owned(), code);
                    code
                }
            },
        };
        self.position += 1;
        Ok(LabeledInstance {
            position: self.position,
            attributes,
            label,
            true_concept: 0,
        })
    }
}

impl Iterator for CsvStream {
    type Item = Result<LabeledInstance>;

    fn next(&mut self) -> Option<Self::Item> {
        let record = self.records.next()?;
        Some(match record {
            Ok(record) => {
                let line = record.position().map_or(self.position + 2, |p| p.line());
                self.parse_row(&record, line)
            }
            Err(e) => {
                let line = e.position().map_or(self.position + 2, |p| p.line());
                Err(csv_error(&self.path, line, e.to_string()))
            }
        })
    }
}

/// Writes instances as `attributes..., label`. Numeric values use Rust's
/// shortest round-trip formatting; nominal values and labels are codes.
pub fn write_csv_stream<I>(path: impl AsRef<Path>, attribute_names: &[String], instances: I) -> Result<()>
where
    I: IntoIterator<Item = LabeledInstance>,
{
    let mut out = BufWriter::new(File::create(path)?);
    let mut header = attribute_names.join(",");
    header.push_str(",class\n");
    out.write_all(header.as_bytes())?;
    let mut line = String::new();
    for inst in instances {
        line.clear();
        for a in &inst.attributes {
            match a {
                Attribute::Numeric(x) => line.push_str(&format!("{x:?}")),
                Attribute::Nominal(c) => line.push_str(&c.to_string()),
            }
            line.push(',');
        }
        line.push_str(&inst.label.to_string());
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn interns_labels_in_first_seen_order() {
        let f = write("x,y,class\n0.5,1.5,Up\n-2,3e-1,Down\n");
        let rows: Vec<_> = load_csv_stream(f.path(), &CsvSchema::inferred())
            .unwrap()
            .collect::<Result<_>>()
            .unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].label, 0);
        assert_eq!(rows[1].label, 1);
        assert_eq!(rows[1].attributes, vec![Attribute::Numeric(-2.0), Attribute::Numeric(0.3)]);
        assert_eq!(rows[1].position, 2);
    }

    #[test]
    fn header_only_is_an_empty_stream() {
        let f = write("x,y,class\n");
        let mut s = load_csv_stream(f.path(), &CsvSchema::inferred()).unwrap();
        assert!(s.next().is_none());
    }

    #[test]
    fn malformed_rows_name_their_line() {
        let f = write("x,y,class\n1,2,a\n3,b\n");
        let rows: Vec<_> = load_csv_stream(f.path(), &CsvSchema::inferred()).unwrap().collect();
        assert!(rows[0].is_ok());
        match &rows[1] {
            Err(Error::Csv { line, .. }) => assert_eq!(*line, 3),
            other => panic!("expected a csv error, got {other:?}"),
        }

        let f = write("x,y,class\n1,2,a\n1,oops,b\n");
        let rows: Vec<_> = load_csv_stream(f.path(), &CsvSchema::inferred()).unwrap().collect();
        let err = rows[1].as_ref().unwrap_err().to_string();
        assert!(err.contains("line 3") && err.contains("oops"), "{err}");
    }

    #[test]
    fn nominal_columns_are_interned_per_column() {
        let f = write("day,price,class\nmon,1,u\ntue,2,d\nmon,3,u\n");
        let rows: Vec<_> = load_csv_stream(f.path(), &CsvSchema::inferred())
            .unwrap()
            .collect::<Result<_>>()
            .unwrap();
        let days: Vec<_> = rows.iter().map(|r| r.attributes[0]).collect();
        assert_eq!(days, vec![Attribute::Nominal(0), Attribute::Nominal(1), Attribute::Nominal(0)]);
    }

    #[test]
    fn declared_schema_arity_is_checked() {
        let f = write("a,b,class\n1,2,0\n");
        let schema = CsvSchema::declared(vec![ColumnKind::Numeric], ColumnKind::Code);
        assert!(matches!(load_csv_stream(f.path(), &schema), Err(Error::Schema(_))));
    }
}
