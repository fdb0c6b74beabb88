//! Decomposition matrices of the unipotent blocks: basic sets, relation
//! expansion, structure checks, symbolic Brauer character degrees, and the
//! embedding of the Hecke algebra decomposition numbers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{LPoly, MPoly, QPoly, SymPoly};
use crate::catalog::{Catalog, PrimeCase};
use crate::error::{Error, Result};
use crate::hecke::{HeckeDecompMatrix, RepName};
use crate::paper_data::{
    self, DecCell, DecTable, DecompEntry, RelationRow, RelationTable, SeriesVariant,
};

/// Harish-Chandra series of a Brauer character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum HCSeries {
    Ps,
    A1,
    B2a,
    B2b,
    B2St,
    Cuspidal,
}

/// Levi subgroup a Harish-Chandra series is induced from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Levi {
    Torus,
    La,
    Lb,
    Whole,
}

impl HCSeries {
    pub const ALL: [HCSeries; 6] = [
        HCSeries::Ps,
        HCSeries::A1,
        HCSeries::B2a,
        HCSeries::B2b,
        HCSeries::B2St,
        HCSeries::Cuspidal,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            HCSeries::Ps => "ps",
            HCSeries::A1 => "A1",
            HCSeries::B2a => "2B2a",
            HCSeries::B2b => "2B2b",
            HCSeries::B2St => "2B2St",
            HCSeries::Cuspidal => "c",
        }
    }

    pub fn levi(self) -> Levi {
        match self {
            HCSeries::Ps => Levi::Torus,
            HCSeries::A1 => Levi::La,
            HCSeries::B2a | HCSeries::B2b | HCSeries::B2St => Levi::Lb,
            HCSeries::Cuspidal => Levi::Whole,
        }
    }
}

impl FromStr for HCSeries {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        HCSeries::ALL
            .into_iter()
            .find(|h| h.tag() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown Harish-Chandra series tag '{s}'")))
    }
}

impl fmt::Display for HCSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A decomposition matrix whose first `basic_len` rows are the basic set, in
/// the same order as the Brauer columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompMatrix {
    pub case: PrimeCase,
    pub ordinary_rows: Vec<String>,
    pub basic_len: usize,
    pub brauer_cols: Vec<(String, HCSeries)>,
    #[serde(serialize_with = "serialize_entries")]
    pub entries: Vec<Vec<DecompEntry>>,
}

fn serialize_entries<S: serde::Serializer>(
    e: &[Vec<DecompEntry>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<Vec<String>> = e
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect();
    strings.serialize(s)
}

fn combine(acc: &DecompEntry, coeff: i64, e: &DecompEntry) -> DecompEntry {
    let mut out = acc.clone();
    out.constant += coeff * e.constant;
    for (u, c) in &e.terms {
        *out.terms.entry(u.clone()).or_insert(0) += coeff * c;
    }
    out.terms.retain(|_, c| *c != 0);
    out
}

impl DecompMatrix {
    /// The basic-set part of an encoded table.
    pub fn from_table(t: &DecTable) -> Result<DecompMatrix> {
        let brauer_cols = t
            .cols
            .iter()
            .zip(&t.series)
            .map(|(c, s)| Ok((c.clone(), s.parse()?)))
            .collect::<Result<Vec<_>>>()?;
        let entries = t
            .basic
            .iter()
            .map(|r| {
                r.cells
                    .iter()
                    .map(|c| {
                        c.entry()
                            .cloned()
                            .ok_or_else(|| Error::Invalid(format!("'*' in basic row {}", r.label)))
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DecompMatrix {
            case: t.case,
            ordinary_rows: t.basic_labels(),
            basic_len: t.basic.len(),
            brauer_cols,
            entries,
        })
    }

    /// The basic-set matrix of a case with tables.
    pub fn load(case: PrimeCase) -> Result<DecompMatrix> {
        DecompMatrix::from_table(&paper_data::decomposition(case)?)
    }

    /// The basic-set matrix with every encoded relation appended.
    pub fn load_expanded(case: PrimeCase) -> Result<DecompMatrix> {
        let m = DecompMatrix::load(case)?;
        let rels = paper_data::relations(case)?;
        expand_relations(&m, &rels)
    }

    pub fn basic_labels(&self) -> &[String] {
        &self.ordinary_rows[..self.basic_len]
    }

    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.ordinary_rows.iter().position(|r| r == label)
    }

    pub fn col_index(&self, label: &str) -> Option<usize> {
        self.brauer_cols.iter().position(|(c, _)| c == label)
    }

    pub fn entry(&self, row: &str, col: &str) -> Option<&DecompEntry> {
        Some(&self.entries[self.row_index(row)?][self.col_index(col)?])
    }

    pub fn unknowns(&self) -> BTreeSet<String> {
        self.entries
            .iter()
            .flatten()
            .flat_map(|e| e.terms.keys().cloned())
            .collect()
    }

    /// Number of Brauer characters in each Harish-Chandra series.
    pub fn hc_census(&self) -> BTreeMap<HCSeries, usize> {
        let mut out = BTreeMap::new();
        for (_, s) in &self.brauer_cols {
            *out.entry(*s).or_insert(0) += 1;
        }
        out
    }

    /// Linkage classes: connected components of the graph joining a row and a
    /// column when the entry is nonzero. Returned as sets of column indices.
    pub fn column_blocks(&self) -> Vec<BTreeSet<usize>> {
        let ncols = self.brauer_cols.len();
        let mut parent: Vec<usize> = (0..ncols).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for row in &self.entries {
            let nz: Vec<usize> = (0..ncols).filter(|&j| !row[j].is_zero()).collect();
            for w in nz.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[a] = b;
            }
        }
        let mut blocks: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for j in 0..ncols {
            let r = find(&mut parent, j);
            blocks.entry(r).or_default().insert(j);
        }
        let mut out: Vec<_> = blocks.into_values().collect();
        out.sort_by_key(|b| *b.iter().next().expect("nonempty"));
        out
    }
}

impl fmt::Display for DecompMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| {
                        if e.is_zero() {
                            ".".into()
                        } else {
                            e.to_string()
                        }
                    })
                    .collect()
            })
            .collect();
        let lw = self
            .ordinary_rows
            .iter()
            .map(String::len)
            .max()
            .unwrap_or(0);
        let widths: Vec<usize> = (0..self.brauer_cols.len())
            .map(|j| {
                cells
                    .iter()
                    .map(|r| r[j].len())
                    .chain([self.brauer_cols[j].0.len()])
                    .max()
                    .unwrap_or(1)
            })
            .collect();
        write!(f, "{:lw$}", "")?;
        for (j, (c, _)) in self.brauer_cols.iter().enumerate() {
            write!(f, " {c:>w$}", w = widths[j])?;
        }
        writeln!(f)?;
        write!(f, "{:lw$}", "")?;
        for (j, (_, s)) in self.brauer_cols.iter().enumerate() {
            write!(f, " {:>w$}", s.tag(), w = widths[j])?;
        }
        writeln!(f)?;
        for (label, row) in self.ordinary_rows.iter().zip(&cells) {
            write!(f, "{label:lw$}")?;
            for (j, c) in row.iter().enumerate() {
                write!(f, " {c:>w$}", w = widths[j])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Appends `row(χ) = Σ_j a_{χ,j}·row(χ_j)` for each relation, using the basic rows of `m`.
pub fn expand_relations(m: &DecompMatrix, rels: &RelationTable) -> Result<DecompMatrix> {
    if rels.basic.as_slice() != m.basic_labels() {
        let stray = rels
            .basic
            .iter()
            .find(|l| !m.basic_labels().contains(l))
            .cloned()
            .unwrap_or_else(|| "basic set order".to_string());
        return Err(Error::NotInBasicSet(stray));
    }
    let mut out = m.clone();
    for r in &rels.rows {
        out.ordinary_rows.push(r.label.clone());
        out.entries.push(expand_row(m, r));
    }
    Ok(out)
}

fn expand_row(m: &DecompMatrix, r: &RelationRow) -> Vec<DecompEntry> {
    let ncols = m.brauer_cols.len();
    let mut row = vec![DecompEntry::constant(0); ncols];
    for (i, &a) in r.coeffs.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = combine(cell, a, &m.entries[i][j]);
        }
    }
    row
}

/// A disagreement between a computed row and the encoded table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowMismatch {
    pub row: String,
    pub col: String,
    pub computed: String,
    pub encoded: String,
}

/// Compares the appended rows of `m` with the continued section of the
/// encoded table; `*` cells match anything.
pub fn compare_with_table(m: &DecompMatrix, t: &DecTable) -> Vec<RowMismatch> {
    let mut out = Vec::new();
    for (label, row) in m.ordinary_rows.iter().zip(&m.entries).skip(m.basic_len) {
        let Some(enc) = t.continued.iter().find(|r| &r.label == label) else {
            out.push(RowMismatch {
                row: label.clone(),
                col: String::new(),
                computed: "row".into(),
                encoded: "missing".into(),
            });
            continue;
        };
        for ((e, cell), (col, _)) in row.iter().zip(&enc.cells).zip(&m.brauer_cols) {
            if let DecCell::Entry(x) = cell {
                if x != e {
                    out.push(RowMismatch {
                        row: label.clone(),
                        col: col.clone(),
                        computed: e.to_string(),
                        encoded: x.to_string(),
                    });
                }
            }
        }
    }
    out
}

/// Lower unitriangularity of the basic-set block.
pub fn check_unitriangular(m: &DecompMatrix) -> bool {
    let n = m.basic_len;
    if m.brauer_cols.len() != n {
        return false;
    }
    (0..n).all(|i| {
        (0..n).all(|j| {
            let e = &m.entries[i][j];
            match i.cmp(&j) {
                std::cmp::Ordering::Equal => *e == DecompEntry::constant(1),
                std::cmp::Ordering::Less => e.is_zero(),
                std::cmp::Ordering::Greater => true,
            }
        })
    })
}

/// Family index of every basic row, from the character catalog.
fn basic_families(m: &DecompMatrix) -> Result<Vec<u8>> {
    let cat = Catalog::get();
    m.basic_labels()
        .iter()
        .map(|l| {
            cat.unipotent_by_label(l)
                .and_then(|c| c.family)
                .ok_or_else(|| Error::Invalid(format!("{l} is not in a unipotent family")))
        })
        .collect()
}

/// With rows and columns grouped by family, the diagonal blocks are identity
/// matrices and the blocks above the diagonal vanish. Column `j` belongs to
/// the family of basic row `j`.
pub fn check_family_blocks(m: &DecompMatrix) -> Result<bool> {
    if !m.case.is_good() {
        return Err(Error::BadPrime);
    }
    let fam = basic_families(m)?;
    let n = m.basic_len;
    if m.brauer_cols.len() != n {
        return Ok(false);
    }
    for i in 0..n {
        for j in 0..n {
            let e = &m.entries[i][j];
            let ok = match fam[i].cmp(&fam[j]) {
                std::cmp::Ordering::Equal => *e == DecompEntry::constant(u8::from(i == j).into()),
                std::cmp::Ordering::Less => e.is_zero(),
                std::cmp::Ordering::Greater => true,
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `deg(φ_j) = χ_j(1) − Σ_{j' < j} d(χ_j, φ_{j'})·deg(φ_{j'})` over the first
/// `entries[0].len()` rows, which must form a unitriangular block.
pub fn forward_degrees(
    labels: &[String],
    entries: &[Vec<DecompEntry>],
    degree: impl Fn(&str) -> Option<QPoly>,
) -> Result<Vec<SymPoly>> {
    let ncols = entries.first().map_or(0, Vec::len);
    let mut out: Vec<SymPoly> = Vec::with_capacity(ncols);
    for (j, row) in entries.iter().enumerate().take(ncols) {
        let label = labels.get(j).ok_or(Error::OutOfRange(j))?;
        let d = degree(label).ok_or_else(|| Error::Invalid(format!("no degree for {label}")))?;
        let mut acc = MPoly::constant(LPoly::from(d));
        for (k, prev) in out.iter().enumerate() {
            let e = &row[k];
            if !e.is_zero() {
                acc = acc.sub(&e.to_sym().mul(prev));
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Symbolic degrees of the Brauer characters, in column order.
pub fn brauer_degrees(m: &DecompMatrix) -> Result<Vec<(String, SymPoly)>> {
    if !check_unitriangular(m) {
        return Err(Error::Invalid(format!(
            "{} basic block is not unitriangular",
            m.case
        )));
    }
    let cat = Catalog::get();
    let degs = forward_degrees(&m.ordinary_rows, &m.entries[..m.basic_len], |l| {
        cat.degree(l).cloned()
    })?;
    Ok(m.brauer_cols
        .iter()
        .map(|(c, _)| c.clone())
        .zip(degs)
        .collect())
}

/// Linear case: every linkage class of Brauer characters lies in a single
/// Harish-Chandra series.
pub fn blocks_are_single_series(m: &DecompMatrix) -> bool {
    m.column_blocks().iter().all(|b| {
        let tags: BTreeSet<HCSeries> = b.iter().map(|&j| m.brauer_cols[j].1).collect();
        tags.len() == 1
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DipperReport {
    /// Hecke column → Brauer column.
    pub column_map: Vec<(String, String)>,
    pub mismatches: Vec<String>,
}

impl DipperReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks that the Hecke decomposition numbers form the principal-series
/// submatrix of `m`: rows via the correspondence of representations with
/// unipotent characters, and each Hecke column sent to the diagonal column of
/// its first basic row.
pub fn dipper_check(m: &DecompMatrix, h: &HeckeDecompMatrix) -> Result<DipperReport> {
    let mut mismatches = Vec::new();
    let mut rows = Vec::new();
    for r in &h.rows {
        let rep = RepName::from_name(r)
            .ok_or_else(|| Error::Invalid(format!("unknown representation {r}")))?;
        let label = rep.fitting_label();
        let idx = m
            .row_index(label)
            .ok_or_else(|| Error::NotInBasicSet(label.to_string()))?;
        rows.push(idx);
    }
    let mut column_map = Vec::new();
    let mut mapped = Vec::new();
    for (c, name) in h.cols.iter().enumerate() {
        let first = (0..h.rows.len())
            .filter(|&r| h.entries[r][c] > 0)
            .map(|r| rows[r])
            .filter(|&i| i < m.basic_len)
            .min();
        let Some(i) = first else {
            mismatches.push(format!("hecke column {name} has no basic row"));
            continue;
        };
        column_map.push((name.clone(), m.brauer_cols[i].0.clone()));
        mapped.push((c, i));
    }
    let ps: BTreeSet<usize> = (0..m.brauer_cols.len())
        .filter(|&j| m.brauer_cols[j].1 == HCSeries::Ps)
        .collect();
    let image: BTreeSet<usize> = mapped.iter().map(|&(_, j)| j).collect();
    if image.len() != mapped.len() {
        mismatches.push("two hecke columns map to the same Brauer column".into());
    }
    if image != ps {
        mismatches.push(format!(
            "mapped columns {:?} differ from principal-series columns {:?}",
            image
                .iter()
                .map(|&j| &m.brauer_cols[j].0)
                .collect::<Vec<_>>(),
            ps.iter().map(|&j| &m.brauer_cols[j].0).collect::<Vec<_>>()
        ));
    }
    for (r, &i) in rows.iter().enumerate() {
        for &(c, j) in &mapped {
            let want = DecompEntry::constant(h.entries[r][c].into());
            if m.entries[i][j] != want {
                mismatches.push(format!(
                    "{} / {}: hecke {} vs matrix {}",
                    m.ordinary_rows[i], m.brauer_cols[j].0, want, m.entries[i][j]
                ));
            }
        }
    }
    Ok(DipperReport {
        column_map,
        mismatches,
    })
}

/// Decomposition tables of the non-unipotent series relevant to a case: one
/// `(table id, variant)` per table, chosen by which factor `ℓ` divides.
pub fn series_blocks(case: PrimeCase) -> Result<Vec<(String, SeriesVariant)>> {
    let (d2, d3, g5): (&str, &str, Option<(&str, &str)>) = match case {
        PrimeCase::Linear => ("otherwise", "phi1~", Some(("dec-g5-cyc", "phi1~"))),
        PrimeCase::Phi4 => ("otherwise", "phi4", Some(("dec-g5-noncyc", "phi4"))),
        PrimeCase::Phi8p => ("phi8'", "otherwise", Some(("dec-g5-cyc", "otherwise"))),
        PrimeCase::Phi8m => ("phi8''", "otherwise", Some(("dec-g5-cyc", "otherwise"))),
        PrimeCase::Ell3 => ("otherwise", "phi4", None),
        _ => return Err(Error::NotHeckeCase),
    };
    let mut picks: Vec<(&str, &str)> = vec![
        ("dec-g2", d2),
        ("dec-g3", d3),
        ("dec-g6", d3),
        ("dec-g8", d2),
        ("dec-g10", d2),
    ];
    picks.extend(g5);
    picks.push(("dec-nilp", "otherwise"));
    let mut out = Vec::new();
    for (id, key) in picks {
        let t = paper_data::series_decomposition(id)?;
        let v = t
            .variant(key)
            .or_else(|| t.variant("otherwise"))
            .ok_or_else(|| Error::UnknownTable(format!("{id}/{key}")))?;
        out.push((id.to_string(), v.clone()));
    }
    Ok(out)
}

/// A representative `(n, ℓ)` for each case with tables.
pub fn representative(case: PrimeCase) -> Result<(u32, u64)> {
    Ok(match case {
        PrimeCase::Linear => (1, 7),
        PrimeCase::Phi4 => (2, 11),
        PrimeCase::Phi8p => (1, 13),
        PrimeCase::Phi8m => (1, 5),
        PrimeCase::Ell3 => (1, 3),
        _ => return Err(Error::NotHeckeCase),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_sym;
    use crate::hecke::hecke_decomposition;

    fn entry(s: &str) -> DecompEntry {
        DecompEntry::from_sym(&parse_sym(s).unwrap()).unwrap()
    }

    #[test]
    fn expanded_rows_agree_with_encoded_tables() {
        for case in PrimeCase::TABLED {
            let m = DecompMatrix::load_expanded(case).unwrap();
            let t = paper_data::decomposition(case).unwrap();
            assert_eq!(
                m.ordinary_rows.len(),
                t.basic.len() + t.continued.len(),
                "{case}"
            );
            let bad = compare_with_table(&m, &t);
            assert!(bad.is_empty(), "{case}: {bad:?}");
        }
    }

    #[test]
    fn listed_expansions() {
        let m = DecompMatrix::load_expanded(PrimeCase::Phi4).unwrap();
        let row: Vec<String> = m.entries[m.row_index("chi6,1").unwrap()]
            .iter()
            .map(|e| e.to_string())
            .collect();
        let mut want = vec!["0".to_string(); 21];
        for (j, v) in [(3, "1"), (7, "1"), (8, "1"), (16, "a-2"), (17, "1")] {
            want[j] = v.into();
        }
        assert_eq!(row, want);
        let m = DecompMatrix::load_expanded(PrimeCase::Phi8p).unwrap();
        assert_eq!(m.entry("chi10,St", "phi5").unwrap(), &entry("1"));
        assert_eq!(m.entry("chi10,St", "phi18").unwrap(), &entry("1-2*j+w"));
        assert_eq!(m.entry("chi10,St", "phi19").unwrap(), &entry("x-1"));
        assert_eq!(m.entry("chi10,St", "phi21").unwrap(), &entry("1"));
    }

    #[test]
    fn zero_relation_gives_zero_row() {
        let m = DecompMatrix::load(PrimeCase::Phi4).unwrap();
        let mut rels = paper_data::relations(PrimeCase::Phi4).unwrap();
        rels.rows.truncate(1);
        rels.rows[0].coeffs.iter_mut().for_each(|c| *c = 0);
        let e = expand_relations(&m, &rels).unwrap();
        assert!(e.entries.last().unwrap().iter().all(DecompEntry::is_zero));
    }

    #[test]
    fn foreign_basic_set_is_rejected() {
        let m = DecompMatrix::load(PrimeCase::Phi4).unwrap();
        let rels = paper_data::relations(PrimeCase::Ell3).unwrap();
        assert!(
            matches!(expand_relations(&m, &rels), Err(Error::NotInBasicSet(l)) if l == "chi5,1")
        );
    }

    #[test]
    fn unitriangular_and_family_blocks() {
        for case in PrimeCase::TABLED {
            let m = DecompMatrix::load(case).unwrap();
            assert!(check_unitriangular(&m), "{case}");
            if case == PrimeCase::Ell3 {
                assert!(matches!(check_family_blocks(&m), Err(Error::BadPrime)));
            } else {
                assert!(check_family_blocks(&m).unwrap(), "{case}");
            }
        }
    }

    #[test]
    fn negative_controls() {
        let mut m = DecompMatrix::load(PrimeCase::Linear).unwrap();
        m.entries[2][5] = DecompEntry::constant(1);
        assert!(!check_unitriangular(&m));

        let mut m = DecompMatrix::load(PrimeCase::Phi8p).unwrap();
        for row in m.entries.iter_mut() {
            row.swap(1, 2);
        }
        m.brauer_cols.swap(1, 2);
        assert!(!check_family_blocks(&m).unwrap());

        // A nonzero entry below the diagonal but inside a family block.
        let mut m = DecompMatrix::load(PrimeCase::Phi8p).unwrap();
        m.entries[2][1] = DecompEntry::constant(1);
        assert!(check_unitriangular(&m));
        assert!(!check_family_blocks(&m).unwrap());
    }

    #[test]
    fn harish_chandra_census() {
        let m = DecompMatrix::load(PrimeCase::Phi4).unwrap();
        let c = m.hc_census();
        let get = |s| c.get(&s).copied().unwrap_or(0);
        assert_eq!(
            [
                HCSeries::Ps,
                HCSeries::A1,
                HCSeries::B2a,
                HCSeries::B2b,
                HCSeries::Cuspidal
            ]
            .map(get),
            [4, 1, 2, 2, 12]
        );
        for case in PrimeCase::TABLED {
            let m = DecompMatrix::load(case).unwrap();
            assert_eq!(m.hc_census().values().sum::<usize>(), m.basic_len);
        }
        assert_eq!(HCSeries::A1.levi(), Levi::La);
        assert_eq!("2B2St".parse::<HCSeries>().unwrap(), HCSeries::B2St);
    }

    #[test]
    fn linear_blocks_are_single_series() {
        let m = DecompMatrix::load_expanded(PrimeCase::Linear).unwrap();
        assert!(blocks_are_single_series(&m));
        let sizes: Vec<usize> = m.column_blocks().iter().map(BTreeSet::len).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 21);
        assert_eq!(sizes.iter().filter(|&&s| s == 7).count(), 1);
        let mut m2 = m.clone();
        m2.brauer_cols[0].1 = HCSeries::A1;
        assert!(!blocks_are_single_series(&m2));
    }

    #[test]
    fn degrees_by_forward_substitution() {
        let cat = Catalog::get();
        let m = DecompMatrix::load(PrimeCase::Phi8p).unwrap();
        let d = brauer_degrees(&m).unwrap();
        assert_eq!(d[0].1, SymPoly::one());
        let chi2 = MPoly::constant(LPoly::from(cat.degree("chi2").unwrap().clone()));
        assert_eq!(d[1].1, chi2);
        // chi5 row is (1,1,1,1,1,0,...): deg(phi5) = chi5(1) - 1 - 2·chi2(1) - chi4(1).
        let expect = ["chi5", "chi1", "chi2", "chi3", "chi4"]
            .iter()
            .map(|l| cat.degree(l).unwrap().clone())
            .enumerate()
            .fold(
                QPoly::zero(),
                |acc, (i, p)| if i == 0 { p } else { &acc - &p },
            );
        assert_eq!(d[4].1, MPoly::constant(LPoly::from(expect)));
        // Leading behaviour of deg(phi21).
        let top = &d[20].1;
        let coeff = |k| top.q_coefficient(k).to_string();
        assert_eq!(coeff(24), "1");
        assert_eq!(coeff(23), "-r2*x");
        assert_eq!(coeff(22), parse_sym("2*x*j-w").unwrap().to_string());
    }

    #[test]
    fn linear_degrees_are_exact_and_positive() {
        let m = DecompMatrix::load(PrimeCase::Linear).unwrap();
        for (label, d) in brauer_degrees(&m).unwrap() {
            let c = d
                .as_constant()
                .unwrap_or_else(|| panic!("{label} has unknowns"));
            for n in 1..=3 {
                assert!(c.eval_at_q(n).is_positive(), "{label} n={n}");
            }
        }
    }

    #[test]
    fn series_blocks_are_unitriangular() {
        for case in PrimeCase::TABLED {
            let blocks = series_blocks(case).unwrap();
            assert_eq!(blocks.len(), if case == PrimeCase::Ell3 { 6 } else { 7 });
            for (id, v) in blocks {
                let n = v.cols.len();
                for i in 0..n {
                    assert_eq!(
                        v.rows[i].cells[i],
                        DecCell::Entry(DecompEntry::constant(1)),
                        "{id}"
                    );
                    for j in i + 1..n {
                        assert_eq!(
                            v.rows[i].cells[j],
                            DecCell::Entry(DecompEntry::constant(0)),
                            "{id}"
                        );
                    }
                }
            }
        }
        let phi4 = series_blocks(PrimeCase::Phi4).unwrap();
        assert!(phi4
            .iter()
            .any(|(id, v)| id == "dec-g5-noncyc" && v.key == "phi4"));
        let p8 = series_blocks(PrimeCase::Phi8m).unwrap();
        assert!(p8.iter().any(|(id, v)| id == "dec-g2" && v.key == "phi8''"));
    }

    #[test]
    fn hecke_matrix_embeds_in_each_case() {
        for case in PrimeCase::TABLED {
            let m = DecompMatrix::load_expanded(case).unwrap();
            let (n, ell) = representative(case).unwrap();
            let h = hecke_decomposition(n, ell).unwrap();
            let r = dipper_check(&m, &h).unwrap();
            assert!(r.holds(), "{case}: {:?}", r.mismatches);
        }
        let m = DecompMatrix::load_expanded(PrimeCase::Phi8p).unwrap();
        let h = hecke_decomposition(1, 5).unwrap();
        assert!(!dipper_check(&m, &h).unwrap().holds());
    }
}
