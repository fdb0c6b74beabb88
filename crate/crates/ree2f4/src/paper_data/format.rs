//! Reader for the line-oriented table format of the files under `data/`.
//!
//! ```text
//! # comment
//! @table <id>              table id, exactly once
//! @<key> <value>           metadata of the table, or of the current section
//! @section <name>          starts a new section
//! @columns a | b | c       column names of the current section
//! @series - | ps | ...     per-column tags (optional)
//! label | cell | cell      a row; cell count must match @columns
//! ```

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RawRow {
    /// 1-based line number in the source file.
    pub line: usize,
    pub cells: Vec<String>,
}

impl RawRow {
    pub fn label(&self) -> &str {
        &self.cells[0]
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawSection {
    pub name: String,
    pub meta: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub series: Option<Vec<String>>,
    pub rows: Vec<RawRow>,
}

impl RawSection {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub id: String,
    pub meta: BTreeMap<String, String>,
    pub sections: Vec<RawSection>,
}

impl RawTable {
    pub fn section(&self, name: &str) -> Option<&RawSection> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.get(key).map(String::as_str)
    }
}

fn split_cells(s: &str) -> Vec<String> {
    s.split('|').map(|c| c.trim().to_string()).collect()
}

/// Parses a table file. `name` is used in error messages.
pub fn parse(name: &str, text: &str) -> Result<RawTable> {
    let err = |line: usize, column: usize, msg: String| Error::Schema {
        table: name.to_string(),
        line,
        column,
        msg,
    };
    let mut id = None;
    let mut meta = BTreeMap::new();
    let mut sections: Vec<RawSection> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        if let Some(rest) = s.strip_prefix('@') {
            let (key, value) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            let value = value.trim();
            match key {
                "table" => {
                    if id.is_some() {
                        return Err(err(line, 0, "duplicate @table".into()));
                    }
                    id = Some(value.to_string());
                }
                "section" => sections.push(RawSection {
                    name: value.to_string(),
                    ..Default::default()
                }),
                "columns" => {
                    if sections.last().is_none_or(|s| !s.columns.is_empty()) {
                        sections.push(RawSection::default());
                    }
                    let cols = split_cells(value);
                    if cols.iter().any(String::is_empty) {
                        return Err(err(line, 0, "empty column name".into()));
                    }
                    sections.last_mut().expect("pushed").columns = cols;
                }
                "series" => {
                    let Some(sec) = sections.last_mut().filter(|s| !s.columns.is_empty()) else {
                        return Err(err(line, 0, "@series before @columns".into()));
                    };
                    let tags = split_cells(value);
                    if tags.len() != sec.columns.len() {
                        return Err(err(
                            line,
                            0,
                            format!(
                                "@series has {} entries, expected {}",
                                tags.len(),
                                sec.columns.len()
                            ),
                        ));
                    }
                    sec.series = Some(tags);
                }
                _ => {
                    let target = match sections.last_mut() {
                        Some(sec) => &mut sec.meta,
                        None => &mut meta,
                    };
                    target.insert(key.to_string(), value.to_string());
                }
            }
            continue;
        }
        let Some(sec) = sections.last_mut().filter(|s| !s.columns.is_empty()) else {
            return Err(err(line, 0, "row before @columns".into()));
        };
        let cells = split_cells(s);
        if cells.len() != sec.columns.len() {
            return Err(err(
                line,
                cells.len().min(sec.columns.len()),
                format!(
                    "row has {} cells, expected {}",
                    cells.len(),
                    sec.columns.len()
                ),
            ));
        }
        if let Some(c) = cells.iter().position(String::is_empty) {
            return Err(err(line, c, "empty cell".into()));
        }
        sec.rows.push(RawRow { line, cells });
    }
    let id = id.ok_or_else(|| err(0, 0, "missing @table".into()))?;
    Ok(RawTable { id, meta, sections })
}
