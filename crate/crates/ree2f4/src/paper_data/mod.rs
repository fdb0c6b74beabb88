//! The published tables as checked, typed data.
//!
//! Every table lives in `data/<id>.tbl` (format described in [`format`]) and is
//! compiled into the library. `data/manifest.tbl` records a SHA-256 checksum per
//! file; loading a table verifies it. The same loaders also run against a data
//! directory on disk, which is what `ree2f4 validate-tables --dir` uses.

pub mod format;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use sha2::{Digest, Sha256};

use crate::algebra::{parse_sym, LPoly, MPoly, QPoly, SymPoly, QS2};
use crate::catalog::{self, classify_prime, CharRecord, PrimeCase, SeriesType};
use crate::error::{Error, Result};
use format::{RawRow, RawSection, RawTable};

/// An unknown decomposition number, e.g. `a`, `x15`, `a'`, or a generated
/// `star_<row>_<col>` symbol for an unspecified table cell.
pub type UnknownSym = String;

pub struct DataFile {
    pub id: &'static str,
    pub file: &'static str,
    pub text: &'static str,
}

macro_rules! data_files {
    ($($id:literal),* $(,)?) => {
        &[$(DataFile { id: $id, file: concat!($id, ".tbl"), text: include_str!(concat!("../../data/", $id, ".tbl")) }),*]
    };
}

/// All shipped tables, in manifest order.
pub const FILES: &[DataFile] = data_files!(
    "addscal-phi8m",
    "addscal-phi8p",
    "forced-values",
    "dec-ell3",
    "dec-g10",
    "dec-g2",
    "dec-g3",
    "dec-g5-cyc",
    "dec-g5-noncyc",
    "dec-g6",
    "dec-g8",
    "dec-linear",
    "dec-nilp",
    "dec-phi4",
    "dec-phi8m",
    "dec-phi8p",
    "hecke-expected",
    "proj-ell3",
    "proj-phi4",
    "proj-phi8m",
    "proj-phi8p",
    "rel-ell3",
    "rel-linear",
    "rel-phi4",
    "rel-phi8m",
    "rel-phi8p",
    "scalar-ell3",
    "scalar-g5-phi4",
    "scalar-phi4",
    "scalar-phi8m",
    "scalar-phi8p",
    "series",
    "reference-bounds",
    "unipotent",
);

const MANIFEST: &str = include_str!("../../data/manifest.tbl");
pub const MANIFEST_FILE: &str = "manifest.tbl";

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Renders a manifest for `(id, file, contents)` triples.
pub fn manifest_text<'a>(files: impl IntoIterator<Item = (&'a str, &'a str, &'a str)>) -> String {
    let mut out = String::from(
        "# Checksums of the data tables. Regenerate with 'ree2f4 validate-tables --write-manifest'.\n@table manifest\n@columns id | file | sha256\n",
    );
    for (id, file, text) in files {
        out.push_str(&format!("{id} | {file} | {}\n", sha256_hex(text)));
    }
    out
}

/// The manifest for the embedded tables, as it should be on disk.
pub fn embedded_manifest_text() -> String {
    manifest_text(FILES.iter().map(|f| (f.id, f.file, f.text)))
}

/// `id → (file, sha256)` from manifest text.
pub fn parse_manifest(text: &str) -> Result<BTreeMap<String, (String, String)>> {
    let t = format::parse(MANIFEST_FILE, text)?;
    let sec = single_section(&t)?;
    expect_columns(&t, sec, &["id", "file", "sha256"])?;
    Ok(sec
        .rows
        .iter()
        .map(|r| (r.cells[0].clone(), (r.cells[1].clone(), r.cells[2].clone())))
        .collect())
}

/// Where table text comes from.
pub trait Source {
    fn text(&self, id: &str) -> Result<String>;
    fn manifest(&self) -> Result<String>;

    /// Checks the checksum and parses the table.
    fn raw(&self, id: &str) -> Result<RawTable> {
        let manifest = parse_manifest(&self.manifest()?)?;
        let (file, sum) = manifest
            .get(id)
            .ok_or_else(|| Error::UnknownTable(id.to_string()))?;
        let text = self.text(id)?;
        if &sha256_hex(&text) != sum {
            return Err(Error::Checksum(file.clone()));
        }
        let t = format::parse(file, &text)?;
        if t.id != id {
            return Err(schema(
                &t,
                0,
                0,
                format!("file declares @table {}, expected {id}", t.id),
            ));
        }
        Ok(t)
    }
}

/// The tables compiled into the library.
pub struct Embedded;

impl Source for Embedded {
    fn text(&self, id: &str) -> Result<String> {
        FILES
            .iter()
            .find(|f| f.id == id)
            .map(|f| f.text.to_string())
            .ok_or_else(|| Error::UnknownTable(id.to_string()))
    }
    fn manifest(&self) -> Result<String> {
        Ok(MANIFEST.to_string())
    }
}

/// Tables read from a directory holding `manifest.tbl` and the `.tbl` files.
pub struct Directory<'a>(pub &'a Path);

impl Source for Directory<'_> {
    fn text(&self, id: &str) -> Result<String> {
        let manifest = parse_manifest(&self.manifest()?)?;
        let (file, _) = manifest
            .get(id)
            .ok_or_else(|| Error::UnknownTable(id.to_string()))?;
        Ok(std::fs::read_to_string(self.0.join(file))?)
    }
    fn manifest(&self) -> Result<String> {
        Ok(std::fs::read_to_string(self.0.join(MANIFEST_FILE))?)
    }
}

/// Parses an embedded table after checking its checksum.
pub fn raw(id: &str) -> Result<RawTable> {
    Embedded.raw(id)
}

fn schema(t: &RawTable, line: usize, column: usize, msg: impl Into<String>) -> Error {
    Error::Schema {
        table: t.id.clone(),
        line,
        column,
        msg: msg.into(),
    }
}

fn single_section(t: &RawTable) -> Result<&RawSection> {
    match t.sections.as_slice() {
        [s] => Ok(s),
        _ => Err(schema(
            t,
            0,
            0,
            format!("expected one section, found {}", t.sections.len()),
        )),
    }
}

fn expect_columns(t: &RawTable, sec: &RawSection, cols: &[&str]) -> Result<()> {
    if sec.columns != cols {
        return Err(schema(
            t,
            0,
            0,
            format!("columns must be {}", cols.join(" | ")),
        ));
    }
    Ok(())
}

fn table_case(t: &RawTable) -> Result<PrimeCase> {
    let key = t
        .meta("case")
        .ok_or_else(|| schema(t, 0, 0, "missing @case"))?;
    key.parse()
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

fn cell_expr(t: &RawTable, r: &RawRow, col: usize) -> Result<SymPoly> {
    let s = &r.cells[col];
    if s == "." {
        return Ok(SymPoly::zero());
    }
    parse_sym(s).map_err(|e| schema(t, r.line, col, e.to_string()))
}

fn cell_qpoly(t: &RawTable, r: &RawRow, col: usize) -> Result<QPoly> {
    cell_expr(t, r, col)?
        .as_constant()
        .and_then(|c| c.to_qpoly())
        .ok_or_else(|| schema(t, r.line, col, "expected a polynomial in q"))
}

fn cell_int(t: &RawTable, r: &RawRow, col: usize) -> Result<i64> {
    cell_expr(t, r, col)?
        .as_constant()
        .and_then(|c| c.as_constant())
        .and_then(|c| c.to_integer())
        .and_then(|c| c.to_i64())
        .ok_or_else(|| schema(t, r.line, col, "expected an integer"))
}

/// Checks that `p` is a non-negative integer at `n = 1..5`.
fn nonneg_integer_valued(p: &QPoly) -> bool {
    (1..=5).all(|n| {
        p.eval_at_q(n)
            .to_integer()
            .is_some_and(|v| v >= BigInt::zero())
    })
}

// ---------------------------------------------------------------------------
// Scalar products

#[derive(Debug, Clone, PartialEq)]
pub enum ScalarEntry {
    Value(QPoly),
    /// An unspecified non-negative integer.
    Star(UnknownSym),
}

impl ScalarEntry {
    pub fn value(&self) -> Option<&QPoly> {
        match self {
            ScalarEntry::Value(p) => Some(p),
            ScalarEntry::Star(_) => None,
        }
    }

    /// As a symbolic expression; stars become their unknown.
    pub fn to_sym(&self) -> SymPoly {
        match self {
            ScalarEntry::Value(p) => MPoly::constant(LPoly::from(p.clone())),
            ScalarEntry::Star(s) => MPoly::var(s),
        }
    }
}

impl fmt::Display for ScalarEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarEntry::Value(p) => write!(f, "{p}"),
            ScalarEntry::Star(_) => write!(f, "*"),
        }
    }
}

/// Scalar products `(χ, Ψ)` of ordinary characters (rows) with projective
/// characters (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarTable {
    pub id: String,
    pub case: PrimeCase,
    pub projectives: Option<String>,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub cells: Vec<Vec<ScalarEntry>>,
    /// Rows not listed have scalar product zero.
    pub sparse: bool,
}

impl ScalarTable {
    pub fn from_raw(t: &RawTable) -> Result<ScalarTable> {
        let case = table_case(t)?;
        let sec = single_section(t)?;
        if sec.columns.first().map(String::as_str) != Some("label") {
            return Err(schema(t, 0, 0, "first column must be label"));
        }
        let cols: Vec<String> = sec.columns[1..].to_vec();
        let mut rows = Vec::new();
        let mut cells = Vec::new();
        for r in &sec.rows {
            let mut line = Vec::new();
            for (j, col) in cols.iter().enumerate() {
                let s = &r.cells[j + 1];
                line.push(if s == "*" {
                    ScalarEntry::Star(format!("star_{}_{}", sanitize(r.label()), sanitize(col)))
                } else {
                    let p = cell_qpoly(t, r, j + 1)?;
                    if !nonneg_integer_valued(&p) {
                        return Err(schema(
                            t,
                            r.line,
                            j + 1,
                            "scalar product must be a non-negative integer for n = 1..5",
                        ));
                    }
                    ScalarEntry::Value(p)
                });
            }
            rows.push(r.label().to_string());
            cells.push(line);
        }
        Ok(ScalarTable {
            id: t.id.clone(),
            case,
            projectives: t.meta("projectives").map(str::to_string),
            rows,
            cols,
            cells,
            sparse: t.id.starts_with("addscal"),
        })
    }

    pub fn col_index(&self, col: &str) -> Option<usize> {
        self.cols.iter().position(|c| c == col)
    }

    /// `(row, col)`; zero for unlisted rows of a sparse table.
    pub fn get(&self, row: &str, col: &str) -> Option<ScalarEntry> {
        let j = self.col_index(col)?;
        match self.rows.iter().position(|r| r == row) {
            Some(i) => Some(self.cells[i][j].clone()),
            None if self.sparse => Some(ScalarEntry::Value(QPoly::zero())),
            None => None,
        }
    }

    /// Non-zero entries of a column, in row order.
    pub fn column(&self, col: &str) -> Option<Vec<(String, ScalarEntry)>> {
        let j = self.col_index(col)?;
        Some(
            self.rows
                .iter()
                .zip(&self.cells)
                .filter(|(_, line)| line[j] != ScalarEntry::Value(QPoly::zero()))
                .map(|(r, line)| (r.clone(), line[j].clone()))
                .collect(),
        )
    }

    pub fn stars(&self) -> Vec<UnknownSym> {
        self.cells
            .iter()
            .flatten()
            .filter_map(|c| match c {
                ScalarEntry::Star(s) => Some(s.clone()),
                _ => None,
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Projective constructions

#[derive(Debug, Clone, PartialEq)]
pub struct ProjRow {
    pub label: String,
    pub construction: String,
    pub comment: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjTable {
    pub id: String,
    pub case: PrimeCase,
    pub rows: Vec<ProjRow>,
}

impl ProjTable {
    pub fn from_raw(t: &RawTable) -> Result<ProjTable> {
        let case = table_case(t)?;
        let sec = single_section(t)?;
        expect_columns(t, sec, &["label", "construction", "comment"])?;
        let rows = sec
            .rows
            .iter()
            .map(|r| ProjRow {
                label: r.cells[0].clone(),
                construction: r.cells[1].clone(),
                comment: r.cells[2].clone(),
            })
            .collect();
        Ok(ProjTable {
            id: t.id.clone(),
            case,
            rows,
        })
    }
}

// ---------------------------------------------------------------------------
// Decomposition numbers

/// `constant + Σ coeff·unknown` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DecompEntry {
    pub constant: i64,
    pub terms: BTreeMap<UnknownSym, i64>,
}

impl DecompEntry {
    pub fn constant(c: i64) -> DecompEntry {
        DecompEntry {
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    /// Converts an affine expression with integer coefficients.
    pub fn from_sym(e: &SymPoly) -> Option<DecompEntry> {
        let int = |c: &LPoly| {
            c.as_constant()
                .and_then(|x| x.to_integer())
                .and_then(|x| x.to_i64())
        };
        let mut out = DecompEntry::default();
        for (m, c) in e.terms() {
            let v = int(c)?;
            match m.as_slice() {
                [] => out.constant = v,
                [(name, 1)] => {
                    out.terms.insert(name.clone(), v);
                }
                _ => return None,
            }
        }
        Some(out)
    }

    pub fn to_sym(&self) -> SymPoly {
        let mut e = MPoly::constant(LPoly::constant(QS2::from_int(self.constant)));
        for (u, c) in &self.terms {
            e = e.add(&MPoly::var(u).scale(&LPoly::constant(QS2::from_int(*c))));
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0 && self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value under an assignment of every unknown that occurs.
    pub fn eval(&self, values: &BTreeMap<String, i64>) -> Option<i64> {
        let mut v = self.constant;
        for (u, c) in &self.terms {
            v += c * values.get(u)?;
        }
        Some(v)
    }
}

impl fmt::Display for DecompEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sym())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DecCell {
    Entry(DecompEntry),
    /// Left unspecified in the table.
    Star,
}

impl DecCell {
    pub fn entry(&self) -> Option<&DecompEntry> {
        match self {
            DecCell::Entry(e) => Some(e),
            DecCell::Star => None,
        }
    }
}

impl fmt::Display for DecCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecCell::Entry(e) if e.is_zero() => write!(f, "."),
            DecCell::Entry(e) => write!(f, "{e}"),
            DecCell::Star => write!(f, "*"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecRow {
    pub label: String,
    pub cells: Vec<DecCell>,
    /// How many characters the row stands for, in `L` (the `ℓ`-part of the
    /// relevant factor) and `q`.
    pub count: SymPoly,
}

/// A unipotent decomposition table: the basic set rows followed by rows for
/// characters expressed through relations.
#[derive(Debug, Clone, PartialEq)]
pub struct DecTable {
    pub id: String,
    pub case: PrimeCase,
    pub cols: Vec<String>,
    /// Harish-Chandra series tag per column.
    pub series: Vec<String>,
    pub basic: Vec<DecRow>,
    pub continued: Vec<DecRow>,
}

fn dec_rows(t: &RawTable, sec: &RawSection, allow_star: bool) -> Result<Vec<DecRow>> {
    let has_count = sec.columns.last().map(String::as_str) == Some("count");
    let ncols = sec.columns.len() - 1 - usize::from(has_count);
    let mut rows = Vec::new();
    for r in &sec.rows {
        let mut cells = Vec::new();
        for j in 1..=ncols {
            if r.cells[j] == "*" {
                if !allow_star {
                    return Err(schema(t, r.line, j, "'*' is not allowed here"));
                }
                cells.push(DecCell::Star);
                continue;
            }
            let e = cell_expr(t, r, j)?;
            let d = DecompEntry::from_sym(&e).ok_or_else(|| {
                schema(
                    t,
                    r.line,
                    j,
                    "entry must be affine with integer coefficients",
                )
            })?;
            cells.push(DecCell::Entry(d));
        }
        let count = if has_count {
            cell_expr(t, r, ncols + 1)?
        } else {
            SymPoly::one()
        };
        if count.vars().iter().any(|v| v != "L") {
            return Err(schema(t, r.line, ncols + 1, "count may only use L and q"));
        }
        rows.push(DecRow {
            label: r.label().to_string(),
            cells,
            count,
        });
    }
    Ok(rows)
}

fn brauer_columns(t: &RawTable, sec: &RawSection) -> Result<Vec<String>> {
    if sec.columns.first().map(String::as_str) != Some("label") {
        return Err(schema(t, 0, 0, "first column must be label"));
    }
    let mut cols = sec.columns[1..].to_vec();
    if cols.last().map(String::as_str) == Some("count") {
        cols.pop();
    }
    Ok(cols)
}

impl DecTable {
    pub fn from_raw(t: &RawTable) -> Result<DecTable> {
        let case = table_case(t)?;
        let basic = t
            .section("basic")
            .ok_or_else(|| schema(t, 0, 0, "missing section basic"))?;
        let cont = t
            .section("continued")
            .ok_or_else(|| schema(t, 0, 0, "missing section continued"))?;
        let cols = brauer_columns(t, basic)?;
        if brauer_columns(t, cont)? != cols {
            return Err(schema(
                t,
                0,
                0,
                "basic and continued sections must share columns",
            ));
        }
        let series = match &basic.series {
            Some(s) => s[1..=cols.len()].to_vec(),
            None => return Err(schema(t, 0, 0, "basic section needs @series")),
        };
        let basic_rows = dec_rows(t, basic, false)?;
        if basic_rows.len() != cols.len() {
            return Err(schema(
                t,
                0,
                0,
                "basic set size must equal the number of Brauer columns",
            ));
        }
        Ok(DecTable {
            id: t.id.clone(),
            case,
            cols,
            series,
            basic: basic_rows,
            continued: dec_rows(t, cont, true)?,
        })
    }

    pub fn basic_labels(&self) -> Vec<String> {
        self.basic.iter().map(|r| r.label.clone()).collect()
    }

    pub fn row(&self, label: &str) -> Option<&DecRow> {
        self.basic
            .iter()
            .chain(&self.continued)
            .find(|r| r.label == label)
    }

    /// Unknowns occurring anywhere in the table.
    pub fn unknowns(&self) -> Vec<UnknownSym> {
        let mut out: Vec<UnknownSym> = Vec::new();
        for r in self.basic.iter().chain(&self.continued) {
            for c in &r.cells {
                if let DecCell::Entry(e) = c {
                    for u in e.terms.keys() {
                        if !out.contains(u) {
                            out.push(u.clone());
                        }
                    }
                }
            }
        }
        out
    }
}

/// One condition-dependent variant of a non-unipotent decomposition table.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesVariant {
    /// `phi8'`, `phi8''`, `phi1~`, `phi4`, `phi12` or `otherwise`.
    pub key: String,
    pub cols: Vec<String>,
    pub rows: Vec<DecRow>,
}

/// Decomposition numbers of the Lusztig series of one or more types.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesDecTable {
    pub id: String,
    pub types: Vec<String>,
    pub variants: Vec<SeriesVariant>,
}

impl SeriesDecTable {
    pub fn from_raw(t: &RawTable) -> Result<SeriesDecTable> {
        let types: Vec<String> = match (t.meta("type"), t.meta("types")) {
            (Some(ty), None) => vec![ty.to_string()],
            (None, Some(list)) => list.split_whitespace().map(str::to_string).collect(),
            _ => return Err(schema(t, 0, 0, "need exactly one of @type or @types")),
        };
        let mut variants = Vec::new();
        for sec in &t.sections {
            let cols = brauer_columns(t, sec)?;
            let rows = dec_rows(t, sec, false)?;
            if rows.len() < cols.len() {
                return Err(schema(
                    t,
                    0,
                    0,
                    format!("section {} has fewer rows than columns", sec.name),
                ));
            }
            variants.push(SeriesVariant {
                key: sec.name.clone(),
                cols,
                rows,
            });
        }
        Ok(SeriesDecTable {
            id: t.id.clone(),
            types,
            variants,
        })
    }

    pub fn variant(&self, key: &str) -> Option<&SeriesVariant> {
        self.variants.iter().find(|v| v.key == key)
    }
}

// ---------------------------------------------------------------------------
// Relations

/// The restriction of `label` to `ℓ`-regular elements as an integer
/// combination of the basic set.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationRow {
    pub label: String,
    pub coeffs: Vec<i64>,
    /// Number of characters of this kind, in `L = ℓ^f` and `q`; the relation
    /// exists when this is positive.
    pub count: SymPoly,
}

impl RelationRow {
    /// Number of characters at `q² = 2^(2n+1)` and `L = ℓ^f`.
    pub fn count_at(&self, n: u32, l_power: &BigInt) -> QS2 {
        eval_count(&self.count, n, l_power)
    }
}

/// Evaluates a count polynomial in `L` and `q`.
pub fn eval_count(count: &SymPoly, n: u32, l_power: &BigInt) -> QS2 {
    let at = count
        .at_q(n)
        .substitute("L", &MPoly::constant(QS2::from_bigint(l_power.clone())));
    at.as_constant().unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationTable {
    pub id: String,
    pub case: PrimeCase,
    pub basic: Vec<String>,
    pub rows: Vec<RelationRow>,
}

impl RelationTable {
    /// Reads the coefficients from `rel` and the counts from the continued
    /// section of the matching decomposition table.
    pub fn from_raw(rel: &RawTable, dec: &DecTable) -> Result<RelationTable> {
        let case = table_case(rel)?;
        if case != dec.case {
            return Err(schema(
                rel,
                0,
                0,
                "relation and decomposition tables disagree on the case",
            ));
        }
        let sec = single_section(rel)?;
        let basic: Vec<String> = sec.columns[1..].to_vec();
        if basic != dec.basic_labels() {
            return Err(schema(
                rel,
                0,
                0,
                "columns must be the basic set of the decomposition table",
            ));
        }
        let mut rows = Vec::new();
        for r in &sec.rows {
            let coeffs = (1..=basic.len())
                .map(|j| cell_int(rel, r, j))
                .collect::<Result<Vec<_>>>()?;
            let count = dec
                .continued
                .iter()
                .find(|d| d.label == r.label())
                .map(|d| d.count.clone())
                .ok_or_else(|| {
                    schema(
                        rel,
                        r.line,
                        0,
                        format!("{} has no row in {}", r.label(), dec.id),
                    )
                })?;
            rows.push(RelationRow {
                label: r.label().to_string(),
                coeffs,
                count,
            });
        }
        Ok(RelationTable {
            id: rel.id.clone(),
            case,
            basic,
            rows,
        })
    }

    pub fn row(&self, label: &str) -> Option<&RelationRow> {
        self.rows.iter().find(|r| r.label == label)
    }
}

/// Whether characters of the kind `row` exist at `(n, ℓ)`: evaluates the count
/// at `L = ℓ^f` and tests positivity.
pub fn relation_exists(row: &RelationRow, case: PrimeCase, n: u32, ell: u64) -> Result<bool> {
    let c = classify_prime(n, ell)?;
    if c.case != case {
        return Err(Error::Invalid(format!(
            "l={ell} at n={n} is in case {}, not {case}",
            c.case
        )));
    }
    let l_power = BigInt::from(ell).pow(c.f);
    Ok(row.count_at(n, &l_power).is_positive())
}

// ---------------------------------------------------------------------------
// Hecke algebra reference data

#[derive(Debug, Clone, PartialEq)]
pub struct HeckeBlock {
    pub key: String,
    pub cols: Vec<String>,
    pub rows: Vec<String>,
    pub entries: Vec<Vec<u32>>,
}

pub fn hecke_expected_from_raw(t: &RawTable) -> Result<Vec<HeckeBlock>> {
    let mut out = Vec::new();
    for sec in &t.sections {
        let mut rows = Vec::new();
        let mut entries = Vec::new();
        for r in &sec.rows {
            rows.push(r.label().to_string());
            entries.push(
                (1..sec.columns.len())
                    .map(|j| {
                        cell_int(t, r, j).and_then(|v| {
                            u32::try_from(v).map_err(|_| schema(t, r.line, j, "negative"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        out.push(HeckeBlock {
            key: sec.name.clone(),
            cols: sec.columns[1..].to_vec(),
            rows,
            entries,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Published bounds and pins

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    EllNe(u64),
    NMod { modulus: u32, residues: Vec<u32> },
}

/// A disjunction of atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicate(pub Vec<Atom>);

impl Predicate {
    pub fn eval(&self, n: u32, ell: u64) -> bool {
        self.0.iter().any(|a| match a {
            Atom::EllNe(k) => ell != *k,
            Atom::NMod { modulus, residues } => residues.contains(&(n % modulus)),
        })
    }

    fn parse(s: &str) -> Option<Predicate> {
        let mut atoms = Vec::new();
        for part in s.split(" or ") {
            let part = part.trim();
            if let Some(k) = part.strip_prefix("ell!=") {
                atoms.push(Atom::EllNe(k.parse().ok()?));
            } else {
                let rest = part.strip_prefix("n%")?;
                let (m, rs) = rest.split_once('=')?;
                let residues = rs
                    .split(',')
                    .map(|r| r.trim().parse().ok())
                    .collect::<Option<Vec<u32>>>()?;
                atoms.push(Atom::NMod {
                    modulus: m.parse().ok()?,
                    residues,
                });
            }
        }
        Some(Predicate(atoms))
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|a| match a {
                Atom::EllNe(k) => format!("ell!={k}"),
                Atom::NMod { modulus, residues } => {
                    format!(
                        "n%{modulus}={}",
                        residues
                            .iter()
                            .map(u32::to_string)
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                }
            })
            .collect();
        write!(f, "{}", parts.join(" or "))
    }
}

/// A published bound `lo ≤ u ≤ hi`, with stronger lower bounds under conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceBound {
    pub unknown: UnknownSym,
    pub lo: i64,
    pub hi: QPoly,
    pub cond: Vec<(i64, Predicate)>,
}

impl ReferenceBound {
    /// The lower bound that applies at `(n, ℓ)`.
    pub fn lo_at(&self, n: u32, ell: u64) -> i64 {
        self.cond
            .iter()
            .filter(|(_, p)| p.eval(n, ell))
            .map(|(v, _)| *v)
            .fold(self.lo, i64::max)
    }
}

pub fn reference_bounds_from_raw(t: &RawTable) -> Result<BTreeMap<PrimeCase, Vec<ReferenceBound>>> {
    let mut out = BTreeMap::new();
    for sec in &t.sections {
        let case: PrimeCase = sec.name.parse()?;
        let mut list = Vec::new();
        for r in &sec.rows {
            let mut cond = Vec::new();
            if r.cells[3] != "-" {
                for part in r.cells[3].split(';') {
                    let (v, p) = part
                        .trim()
                        .split_once(" if ")
                        .ok_or_else(|| schema(t, r.line, 3, "expected 'value if predicate'"))?;
                    let v: i64 = v
                        .trim()
                        .parse()
                        .map_err(|_| schema(t, r.line, 3, "bad value"))?;
                    let p =
                        Predicate::parse(p).ok_or_else(|| schema(t, r.line, 3, "bad predicate"))?;
                    cond.push((v, p));
                }
            }
            list.push(ReferenceBound {
                unknown: r.cells[0].clone(),
                lo: cell_int(t, r, 1)?,
                hi: cell_qpoly(t, r, 2)?,
                cond,
            });
        }
        out.insert(case, list);
    }
    Ok(out)
}

/// Values forced for one `(case, n, ℓ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pin {
    pub case: PrimeCase,
    pub n: u32,
    pub ell: u64,
    pub values: BTreeMap<UnknownSym, i64>,
}

pub fn pins_from_raw(t: &RawTable) -> Result<Vec<Pin>> {
    let sec = single_section(t)?;
    expect_columns(t, sec, &["case", "n", "ell", "values"])?;
    sec.rows
        .iter()
        .map(|r| {
            let mut values = BTreeMap::new();
            for kv in r.cells[3].split_whitespace() {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| schema(t, r.line, 3, "expected name=value"))?;
                values.insert(
                    k.to_string(),
                    v.parse().map_err(|_| schema(t, r.line, 3, "bad value"))?,
                );
            }
            Ok(Pin {
                case: r.cells[0].parse()?,
                n: r.cells[1]
                    .parse()
                    .map_err(|_| schema(t, r.line, 1, "bad n"))?,
                ell: r.cells[2]
                    .parse()
                    .map_err(|_| schema(t, r.line, 2, "bad ell"))?,
                values,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Registry

/// A loaded table.
#[derive(Debug, Clone, PartialEq)]
pub enum Table {
    Unipotent(Vec<CharRecord>),
    Series(Vec<SeriesType>),
    Scalar(ScalarTable),
    Projectives(ProjTable),
    Relations(RelationTable),
    Decomposition(DecTable),
    SeriesDecomposition(SeriesDecTable),
    HeckeExpected(Vec<HeckeBlock>),
    ReferenceBounds(BTreeMap<PrimeCase, Vec<ReferenceBound>>),
    Pins(Vec<Pin>),
}

impl Table {
    /// Short description for reports.
    pub fn summary(&self) -> String {
        match self {
            Table::Unipotent(v) => format!("{} unipotent characters", v.len()),
            Table::Series(v) => format!("{} series types", v.len()),
            Table::Scalar(s) => format!(
                "{} rows x {} projectives, {} stars",
                s.rows.len(),
                s.cols.len(),
                s.stars().len()
            ),
            Table::Projectives(p) => format!("{} projective characters", p.rows.len()),
            Table::Relations(r) => format!(
                "{} relations over a basic set of {}",
                r.rows.len(),
                r.basic.len()
            ),
            Table::Decomposition(d) => format!(
                "{} basic + {} further rows, {} Brauer columns",
                d.basic.len(),
                d.continued.len(),
                d.cols.len()
            ),
            Table::SeriesDecomposition(d) => {
                format!("types {}, {} variants", d.types.join(" "), d.variants.len())
            }
            Table::HeckeExpected(b) => format!("{} case blocks", b.len()),
            Table::ReferenceBounds(b) => format!("{} cases", b.len()),
            Table::Pins(p) => format!("{} pins", p.len()),
        }
    }
}

/// Loads and type-checks table `id` from `src`.
pub fn load_table_from(src: &dyn Source, id: &str) -> Result<Table> {
    let t = src.raw(id)?;
    Ok(match id {
        "unipotent" => Table::Unipotent(catalog::parse_unipotent(&t)?),
        "series" => Table::Series(catalog::parse_series(&t)?),
        "hecke-expected" => Table::HeckeExpected(hecke_expected_from_raw(&t)?),
        "reference-bounds" => Table::ReferenceBounds(reference_bounds_from_raw(&t)?),
        "forced-values" => Table::Pins(pins_from_raw(&t)?),
        _ if id.starts_with("scalar-") || id.starts_with("addscal-") => {
            Table::Scalar(ScalarTable::from_raw(&t)?)
        }
        _ if id.starts_with("proj-") => Table::Projectives(ProjTable::from_raw(&t)?),
        _ if id.starts_with("rel-") => {
            let dec_id = format!("dec-{}", &id[4..]);
            let dec = DecTable::from_raw(&src.raw(&dec_id)?)?;
            Table::Relations(RelationTable::from_raw(&t, &dec)?)
        }
        _ if id.starts_with("dec-g") || id == "dec-nilp" => {
            Table::SeriesDecomposition(SeriesDecTable::from_raw(&t)?)
        }
        _ if id.starts_with("dec-") => Table::Decomposition(DecTable::from_raw(&t)?),
        _ => return Err(Error::UnknownTable(id.to_string())),
    })
}

/// Loads an embedded table.
pub fn load_table(id: &str) -> Result<Table> {
    load_table_from(&Embedded, id)
}

/// Loads every table listed in the manifest of `src`; reports `(id, summary)`.
pub fn validate(src: &dyn Source) -> Result<Vec<(String, String)>> {
    let manifest = parse_manifest(&src.manifest()?)?;
    manifest
        .keys()
        .map(|id| Ok((id.clone(), load_table_from(src, id)?.summary())))
        .collect()
}

pub fn scalar_table(id: &str) -> Result<ScalarTable> {
    match load_table(id)? {
        Table::Scalar(s) => Ok(s),
        _ => Err(Error::UnknownTable(id.to_string())),
    }
}

fn tabled(case: PrimeCase) -> Result<&'static str> {
    if case.has_tables() {
        Ok(case.key())
    } else {
        Err(Error::NotHeckeCase)
    }
}

/// Scalar products of the main projective characters of a case with ℓ | |G|.
pub fn scalar(case: PrimeCase) -> Result<ScalarTable> {
    if case == PrimeCase::Linear {
        return Err(Error::UnknownTable("scalar-linear".into()));
    }
    scalar_table(&format!("scalar-{}", tabled(case)?))
}

/// Additional scalar products (cases Phi8p and Phi8m only).
pub fn additional_scalar(case: PrimeCase) -> Result<ScalarTable> {
    scalar_table(&format!("addscal-{}", tabled(case)?))
}

pub fn projectives(case: PrimeCase) -> Result<ProjTable> {
    match load_table(&format!("proj-{}", tabled(case)?))? {
        Table::Projectives(p) => Ok(p),
        _ => unreachable!("proj- ids load as projective tables"),
    }
}

pub fn decomposition(case: PrimeCase) -> Result<DecTable> {
    match load_table(&format!("dec-{}", tabled(case)?))? {
        Table::Decomposition(d) => Ok(d),
        _ => unreachable!("dec-<case> ids load as decomposition tables"),
    }
}

pub fn relations(case: PrimeCase) -> Result<RelationTable> {
    match load_table(&format!("rel-{}", tabled(case)?))? {
        Table::Relations(r) => Ok(r),
        _ => unreachable!("rel- ids load as relation tables"),
    }
}

pub fn series_decomposition(id: &str) -> Result<SeriesDecTable> {
    match load_table(id)? {
        Table::SeriesDecomposition(d) => Ok(d),
        _ => Err(Error::UnknownTable(id.to_string())),
    }
}

pub fn hecke_expected() -> Result<Vec<HeckeBlock>> {
    match load_table("hecke-expected")? {
        Table::HeckeExpected(b) => Ok(b),
        _ => unreachable!(),
    }
}

/// Reference bounds of a case; empty for a case without unknowns.
pub fn reference_bounds(case: PrimeCase) -> Result<Vec<ReferenceBound>> {
    if !case.has_tables() {
        return Err(Error::NotHeckeCase);
    }
    match load_table("reference-bounds")? {
        Table::ReferenceBounds(mut b) => Ok(b.remove(&case).unwrap_or_default()),
        _ => unreachable!(),
    }
}

pub fn pins() -> Result<Vec<Pin>> {
    match load_table("forced-values")? {
        Table::Pins(p) => Ok(p),
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> SymPoly {
        parse_sym(s).unwrap()
    }

    #[test]
    fn embedded_manifest_is_current() {
        assert_eq!(MANIFEST, embedded_manifest_text());
        let m = parse_manifest(MANIFEST).unwrap();
        assert_eq!(m.len(), FILES.len());
    }

    #[test]
    fn every_table_loads() {
        let report = validate(&Embedded).unwrap();
        assert_eq!(report.len(), FILES.len());
    }

    #[test]
    fn checksum_mismatch_is_reported() {
        struct Tampered;
        impl Source for Tampered {
            fn text(&self, id: &str) -> Result<String> {
                Ok(Embedded.text(id)?.replace("chi21 | q^24", "chi21 | q^23"))
            }
            fn manifest(&self) -> Result<String> {
                Embedded.manifest()
            }
        }
        assert!(matches!(Tampered.raw("unipotent"), Err(Error::Checksum(_))));
        assert!(matches!(
            load_table("no-such-table"),
            Err(Error::UnknownTable(_))
        ));
    }

    #[test]
    fn schema_errors_carry_coordinates() {
        let bad = "@table scalar-x\n@case phi4\n@columns label | Psi1\nchi1 | a+1\n";
        let t = format::parse("scalar-x", bad).unwrap();
        match ScalarTable::from_raw(&t) {
            Err(Error::Schema { line, column, .. }) => assert_eq!((line, column), (4, 1)),
            other => panic!("{other:?}"),
        }
        let neg = "@table scalar-x\n@case phi4\n@columns label | Psi1\nchi1 | q^2/3\n";
        assert!(ScalarTable::from_raw(&format::parse("x", neg).unwrap()).is_err());
    }

    #[test]
    fn unipotent_decomposition_layout() {
        let d = decomposition(PrimeCase::Phi4).unwrap();
        assert_eq!(d.basic.len(), 21);
        assert_eq!(d.continued.len(), 3);
        assert_eq!(d.cols.len(), 21);
        let chi21 = d.row("chi21").unwrap();
        assert_eq!(
            chi21.cells[7],
            DecCell::Entry(DecompEntry::from_sym(&sym("b")).unwrap())
        );
        let c = &d.row("chi15,1").unwrap().cells[16];
        assert_eq!(c.to_string(), "-3*a+d+4");
        let e = decomposition(PrimeCase::Ell3).unwrap();
        assert_eq!(e.basic.len(), 19);
        assert_eq!(e.cols[4], "phi5,1");
    }

    #[test]
    fn relation_row_layout() {
        let r = relations(PrimeCase::Linear).unwrap();
        let row = r.row("chi2,St").unwrap();
        let nonzero: Vec<(&str, i64)> = r
            .basic
            .iter()
            .zip(&row.coeffs)
            .filter(|(_, c)| **c != 0)
            .map(|(l, c)| (l.as_str(), *c))
            .collect();
        assert_eq!(
            nonzero,
            [
                ("chi5", 1),
                ("chi6", 1),
                ("chi7", 1),
                ("chi18", 1),
                ("chi21", 1)
            ]
        );
    }

    #[test]
    fn additional_scalar_column() {
        let t = additional_scalar(PrimeCase::Phi8p).unwrap();
        let col = t.column("Psi13'").unwrap();
        let expect = [
            ("chi13", "q/r2"),
            ("chi19", "(q^2+r2*q)/4"),
            ("chi21", "r2*q*(q^2+3*r2*q+4)/24"),
        ];
        assert_eq!(col.len(), expect.len());
        for ((l, e), (el, es)) in col.iter().zip(expect) {
            assert_eq!(l, el);
            assert_eq!(e, &ScalarEntry::Value(es.parse().unwrap()));
        }
        assert_eq!(
            t.get("chi1", "Psi13'"),
            Some(ScalarEntry::Value(QPoly::zero()))
        );
    }

    #[test]
    fn stars_become_fresh_unknowns() {
        let t = scalar(PrimeCase::Phi8p).unwrap();
        let stars = t.stars();
        assert!(!stars.is_empty());
        let mut sorted = stars.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), stars.len());
        assert_eq!(
            t.get("chi18", "Psi13"),
            Some(ScalarEntry::Star("star_chi18_Psi13".into()))
        );
    }

    #[test]
    fn relation_existence_examples() {
        let r = relations(PrimeCase::Phi4).unwrap();
        let row = r.row("chi15,1").unwrap();
        assert_eq!(classify_prime(2, 11).unwrap().case, PrimeCase::Phi4);
        assert!(!relation_exists(row, PrimeCase::Phi4, 2, 11).unwrap());
        let r3 = relations(PrimeCase::Ell3).unwrap();
        assert!(relation_exists(r3.row("chi6,1").unwrap(), PrimeCase::Ell3, 1, 3).unwrap());
        assert_eq!(
            r3.row("chi6,1").unwrap().count_at(1, &BigInt::from(9)),
            QS2::from_int(3)
        );
        let lin = relations(PrimeCase::Linear).unwrap();
        let row = lin.row("chi4,1").unwrap();
        // (L-1)(L-7)/16 at L = 7 and L = 31.
        assert_eq!(row.count_at(1, &BigInt::from(7)), QS2::from_int(0));
        assert_eq!(row.count_at(2, &BigInt::from(31)), QS2::from_int(45));
        assert!(!relation_exists(row, PrimeCase::Linear, 1, 7).unwrap());
        assert!(relation_exists(row, PrimeCase::Linear, 2, 31).unwrap());
        assert!(relation_exists(row, PrimeCase::Phi4, 1, 7).is_err());
    }

    fn small_primes(limit: u64) -> Vec<u64> {
        (3..limit).filter(|&p| catalog::is_prime(p)).collect()
    }

    /// Checks the published congruence conditions against direct evaluation of
    /// the counts, for every small prime of the case and `n ≤ 200`.
    fn check_shortcut(case: PrimeCase, label: &str, pred: impl Fn(u32, u64) -> bool) {
        let rel = relations(case).unwrap();
        let row = rel.row(label).unwrap();
        let mut checked = 0;
        for n in 1..=200 {
            for ell in small_primes(200) {
                if classify_prime(n, ell).unwrap().case != case {
                    continue;
                }
                assert_eq!(
                    relation_exists(row, case, n, ell).unwrap(),
                    pred(n, ell),
                    "{label} n={n} l={ell}"
                );
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn congruence_shortcuts_agree_with_counts() {
        check_shortcut(PrimeCase::Phi4, "chi15,1", |n, l| l != 11 || n % 55 == 27);
        check_shortcut(PrimeCase::Phi8p, "chi14,1", |n, l| {
            l != 5 || [7, 12].contains(&(n % 20))
        });
        check_shortcut(PrimeCase::Phi8m, "chi13,1", |n, l| {
            l != 5 || [2, 17].contains(&(n % 20))
        });
        check_shortcut(PrimeCase::Ell3, "chi6,1", |n, _| [1, 4].contains(&(n % 6)));
        check_shortcut(PrimeCase::Ell3, "chi15,1", |n, _| {
            [4, 13].contains(&(n % 18))
        });
    }

    #[test]
    fn published_bound_conditions_parse() {
        let b = reference_bounds(PrimeCase::Phi4).unwrap();
        let bb = b.iter().find(|t| t.unknown == "b").unwrap();
        assert_eq!(bb.lo_at(2, 11), 1);
        assert_eq!(bb.lo_at(27, 11), 2);
        assert_eq!(bb.lo_at(1, 13), 2);
        assert_eq!(bb.cond[0].1.to_string(), "ell!=11 or n%55=27");
        let e3 = reference_bounds(PrimeCase::Ell3).unwrap();
        let e = e3.iter().find(|t| t.unknown == "e").unwrap();
        assert_eq!((e.lo_at(2, 3), e.lo_at(1, 3), e.lo_at(4, 3)), (1, 2, 3));
    }

    #[test]
    fn pins_table() {
        let p = pins().unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p[0].values.get("x"), Some(&2));
        assert_eq!(p[2].case, PrimeCase::Ell3);
    }

    #[test]
    fn counts_are_integers_where_the_case_applies() {
        for case in PrimeCase::TABLED {
            let rel = relations(case).unwrap();
            for n in 1..=5 {
                for ell in small_primes(300) {
                    let c = classify_prime(n, ell).unwrap();
                    if c.case != case {
                        continue;
                    }
                    let l_power = BigInt::from(ell).pow(c.f);
                    for row in &rel.rows {
                        let v = row.count_at(n, &l_power);
                        assert!(
                            v.is_integer() && !v.is_negative(),
                            "{} {} n={n} l={ell}",
                            rel.id,
                            row.label
                        );
                    }
                }
            }
        }
    }
}
