//! The Hecke algebra of the principal series: the dihedral Weyl group of order
//! 16 with parameters `p_a = q²`, `p_b = q⁴`, its seven irreducible
//! representations, and their decomposition numbers modulo `ℓ`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::algebra::{QPoly, QS2};
use crate::catalog::{classify_prime, PrimeCase};
use crate::error::{Error, Result};
use crate::paper_data::{self, HeckeBlock};

/// The irreducible representations, in the row order of the decomposition matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RepName {
    Ind,
    Sigma1,
    S1,
    SMinus1,
    S0,
    Sigma2,
    Sgn,
}

impl RepName {
    pub const ALL: [RepName; 7] = [
        RepName::Ind,
        RepName::Sigma1,
        RepName::S1,
        RepName::SMinus1,
        RepName::S0,
        RepName::Sigma2,
        RepName::Sgn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RepName::Ind => "ind",
            RepName::Sigma1 => "sigma1",
            RepName::S1 => "S1",
            RepName::SMinus1 => "S-1",
            RepName::S0 => "S0",
            RepName::Sigma2 => "sigma2",
            RepName::Sgn => "sgn",
        }
    }

    pub fn from_name(s: &str) -> Option<RepName> {
        RepName::ALL.into_iter().find(|r| r.as_str() == s)
    }

    /// `ε` for the two-dimensional representations `S_ε`.
    pub fn epsilon(self) -> Option<i64> {
        match self {
            RepName::S1 => Some(1),
            RepName::SMinus1 => Some(-1),
            RepName::S0 => Some(0),
            _ => None,
        }
    }

    /// The unipotent character corresponding to the representation.
    pub fn fitting_label(self) -> &'static str {
        match self {
            RepName::Ind => "chi1",
            RepName::Sigma1 => "chi4",
            RepName::S1 => "chi5",
            RepName::SMinus1 => "chi6",
            RepName::S0 => "chi7",
            RepName::Sigma2 => "chi18",
            RepName::Sgn => "chi21",
        }
    }
}

impl fmt::Display for RepName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Representation name → unipotent character label.
pub fn fitting_labels() -> BTreeMap<&'static str, &'static str> {
    RepName::ALL
        .iter()
        .map(|r| (r.as_str(), r.fitting_label()))
        .collect()
}

pub type Matrix = Vec<Vec<QPoly>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(QPoly::zero(), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                .collect()
        })
        .collect()
}

fn mat_sub_scalar(a: &Matrix, s: &QPoly) -> Matrix {
    let mut m = a.clone();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = &row[i] - s;
    }
    m
}

fn mat_is_zero(a: &Matrix) -> bool {
    a.iter().flatten().all(QPoly::is_zero)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeckeRep {
    pub name: RepName,
    pub dim: usize,
    pub ta: Matrix,
    pub tb: Matrix,
}

/// The generators' eigenvalues: `T_a` has `q²` and `-1`, `T_b` has `q⁴` and `-1`.
fn pa() -> QPoly {
    QPoly::q().pow(2)
}

fn pb() -> QPoly {
    QPoly::q().pow(4)
}

/// The representation matrices of `T_a` and `T_b`.
pub fn build_rep(name: RepName) -> HeckeRep {
    let m1 = QPoly::int(-1);
    let one = |x: QPoly| vec![vec![x]];
    match name {
        RepName::Ind => HeckeRep {
            name,
            dim: 1,
            ta: one(pa()),
            tb: one(pb()),
        },
        RepName::Sgn => HeckeRep {
            name,
            dim: 1,
            ta: one(m1.clone()),
            tb: one(m1),
        },
        RepName::Sigma1 => HeckeRep {
            name,
            dim: 1,
            ta: one(m1),
            tb: one(pb()),
        },
        RepName::Sigma2 => HeckeRep {
            name,
            dim: 1,
            ta: one(pa()),
            tb: one(m1),
        },
        RepName::S1 | RepName::SMinus1 | RepName::S0 => {
            let eps = name.epsilon().expect("two-dimensional");
            let r2q = QPoly::monomial(QS2::sqrt2(), 1);
            let lower = &(&pa() + &r2q.scale(&QS2::from_int(eps))) + &QPoly::one();
            HeckeRep {
                name,
                dim: 2,
                ta: vec![vec![pa(), QPoly::zero()], vec![lower, m1.clone()]],
                tb: vec![vec![m1, pa()], vec![QPoly::zero(), pb()]],
            }
        }
    }
}

impl HeckeRep {
    /// `(T_a − q²)(T_a + 1) = 0` and `(T_b − q⁴)(T_b + 1) = 0`.
    pub fn satisfies_quadratic_relations(&self) -> bool {
        let m1 = QPoly::int(-1);
        let qa = mat_mul(
            &mat_sub_scalar(&self.ta, &pa()),
            &mat_sub_scalar(&self.ta, &m1),
        );
        let qb = mat_mul(
            &mat_sub_scalar(&self.tb, &pb()),
            &mat_sub_scalar(&self.tb, &m1),
        );
        mat_is_zero(&qa) && mat_is_zero(&qb)
    }

    /// `(T_a T_b)⁴ = (T_b T_a)⁴`.
    pub fn satisfies_braid_relation(&self) -> bool {
        let ab = mat_mul(&self.ta, &self.tb);
        let ba = mat_mul(&self.tb, &self.ta);
        let ab2 = mat_mul(&ab, &ab);
        let ba2 = mat_mul(&ba, &ba);
        mat_mul(&ab2, &ab2) == mat_mul(&ba2, &ba2)
    }

    fn reduce(&self, n: u32, ell: u64) -> Result<Vec<Vec<u64>>> {
        let red = |p: &QPoly| -> Result<u64> {
            let v = p
                .eval_at_q(n)
                .to_integer()
                .ok_or_else(|| Error::Invalid(format!("entry {p} is not an integer at n={n}")))?;
            Ok(v.mod_floor(&BigInt::from(ell))
                .to_u64()
                .expect("reduced below ell"))
        };
        let mut out = Vec::new();
        for m in [&self.ta, &self.tb] {
            for row in m {
                out.push(row.iter().map(red).collect::<Result<Vec<_>>>()?);
            }
        }
        Ok(out)
    }
}

/// Reduction of a one-dimensional representation: the images of `T_a`, `T_b` mod `ℓ`.
type Character = (u64, u64);

fn reduce_scalar(p: &QPoly, n: u32, ell: u64) -> u64 {
    let v = p.eval_at_q(n).to_integer().expect("integer at q");
    v.mod_floor(&BigInt::from(ell))
        .to_u64()
        .expect("reduced below ell")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeckeDecompMatrix {
    pub case: PrimeCase,
    pub n: u32,
    pub ell: u64,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<Vec<u32>>,
}

impl HeckeDecompMatrix {
    /// Dimension of each simple module: 2 for `new-d2-*` columns, else 1.
    pub fn column_dims(&self) -> Vec<u32> {
        self.cols
            .iter()
            .map(|c| if c.starts_with("new-d2-") { 2 } else { 1 })
            .collect()
    }

    /// Dimension of each row's representation, recovered from its composition factors.
    pub fn row_dims(&self) -> Vec<u32> {
        let dims = self.column_dims();
        self.entries
            .iter()
            .map(|r| r.iter().zip(&dims).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("rep,{}\n", self.cols.join(","));
        for (r, line) in self.rows.iter().zip(&self.entries) {
            let cells: Vec<String> = line.iter().map(u32::to_string).collect();
            out.push_str(&format!("{r},{}\n", cells.join(",")));
        }
        out
    }

    /// Equality with a reference block, including column names and order.
    pub fn matches(&self, block: &HeckeBlock) -> bool {
        self.rows == block.rows && self.cols == block.cols && self.entries == block.entries
    }
}

impl fmt::Display for HeckeDecompMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.cols.iter().map(String::len).max().unwrap_or(1).max(1);
        write!(f, "{:<7}", "")?;
        for c in &self.cols {
            write!(f, " {c:>w$}")?;
        }
        writeln!(f)?;
        for (r, line) in self.rows.iter().zip(&self.entries) {
            write!(f, "{r:<7}")?;
            for v in line {
                let s = if *v == 0 {
                    ".".to_string()
                } else {
                    v.to_string()
                };
                write!(f, " {s:>w$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Composition factors of the reduction of a two-dimensional representation:
/// `Some((sub, quotient))` when `T_a`, `T_b` have a common eigenvector mod `ℓ`.
fn split_two_dim(m: &[Vec<u64>], ell: u64, n: u32) -> Option<(Character, Character)> {
    let l = ell as i128;
    let (ta, tb) = (&m[0..2], &m[2..4]);
    let minus1 = ell - 1;
    let alphas = [reduce_scalar(&pa(), n, ell), minus1];
    let betas = [reduce_scalar(&pb(), n, ell), minus1];
    let sub = |x: u64, y: u64| (x + ell - y) % ell;
    for &alpha in &alphas {
        for &beta in &betas {
            // Rows of [T_a − α; T_b − β]; a common eigenvector exists iff the
            // stacked 4×2 matrix has rank below 2.
            let rows: Vec<[u64; 2]> = vec![
                [sub(ta[0][0], alpha), ta[0][1]],
                [ta[1][0], sub(ta[1][1], alpha)],
                [sub(tb[0][0], beta), tb[0][1]],
                [tb[1][0], sub(tb[1][1], beta)],
            ];
            let full_rank = (0..4).any(|i| {
                (i + 1..4).any(|j| {
                    let det = rows[i][0] as i128 * rows[j][1] as i128
                        - rows[i][1] as i128 * rows[j][0] as i128;
                    det.rem_euclid(l) != 0
                })
            });
            if !full_rank {
                let tra = (ta[0][0] + ta[1][1]) % ell;
                let trb = (tb[0][0] + tb[1][1]) % ell;
                return Some(((alpha, beta), (sub(tra, alpha), sub(trb, beta))));
            }
        }
    }
    None
}

/// Decomposition numbers of the Hecke algebra modulo `ℓ` at `q² = 2^(2n+1)`.
///
/// Columns are named after the first one-dimensional representation with the
/// given reduction, or `new-d2-<rep>` for a two-dimensional representation
/// that stays irreducible, and appear in order of first occurrence.
pub fn hecke_decomposition(n: u32, ell: u64) -> Result<HeckeDecompMatrix> {
    let class = classify_prime(n, ell)?;
    if !class.case.has_tables() {
        return Err(Error::NotHeckeCase);
    }
    let one_dim = [RepName::Ind, RepName::Sigma1, RepName::Sigma2, RepName::Sgn];
    let char_of = |r: RepName| -> Character {
        let rep = build_rep(r);
        (
            reduce_scalar(&rep.ta[0][0], n, ell),
            reduce_scalar(&rep.tb[0][0], n, ell),
        )
    };
    let name_of = |c: Character| -> Result<String> {
        one_dim
            .iter()
            .find(|&&r| char_of(r) == c)
            .map(|r| r.as_str().to_string())
            .ok_or_else(|| {
                Error::Invalid(format!(
                    "composition factor {c:?} is not a reduced one-dimensional representation"
                ))
            })
    };
    let mut cols: Vec<String> = Vec::new();
    let mut row_factors: Vec<Vec<String>> = Vec::new();
    for r in RepName::ALL {
        let rep = build_rep(r);
        let factors = if rep.dim == 1 {
            vec![name_of(char_of(r))?]
        } else {
            match split_two_dim(&rep.reduce(n, ell)?, ell, n) {
                Some((a, b)) => {
                    let mut f = vec![name_of(a)?, name_of(b)?];
                    let pos = |s: &String| one_dim.iter().position(|r| r.as_str() == s);
                    f.sort_by_key(pos);
                    f
                }
                None => vec![format!("new-d2-{}", r.as_str())],
            }
        };
        for f in &factors {
            if !cols.contains(f) {
                cols.push(f.clone());
            }
        }
        row_factors.push(factors);
    }
    let entries = row_factors
        .iter()
        .map(|fs| {
            cols.iter()
                .map(|c| fs.iter().filter(|f| *f == c).count() as u32)
                .collect()
        })
        .collect();
    Ok(HeckeDecompMatrix {
        case: class.case,
        n,
        ell,
        rows: RepName::ALL
            .iter()
            .map(|r| r.as_str().to_string())
            .collect(),
        cols,
        entries,
    })
}

/// Key of the reference block for a case; `ℓ = 3` shares the block of `ℓ | q²+1`.
pub fn expected_block_key(case: PrimeCase) -> Result<&'static str> {
    Ok(match case {
        PrimeCase::Linear => "linear",
        PrimeCase::Phi4 | PrimeCase::Ell3 => "phi4",
        PrimeCase::Phi8p => "phi8p",
        PrimeCase::Phi8m => "phi8m",
        _ => return Err(Error::NotHeckeCase),
    })
}

/// The reference decomposition numbers for a case.
pub fn expected_block(case: PrimeCase) -> Result<HeckeBlock> {
    let key = expected_block_key(case)?;
    paper_data::hecke_expected()?
        .into_iter()
        .find(|b| b.key == key)
        .ok_or_else(|| Error::UnknownTable(format!("hecke-expected/{key}")))
}

/// Computes the matrix and compares it with the reference block.
pub fn verify(n: u32, ell: u64) -> Result<(HeckeDecompMatrix, bool)> {
    let m = hecke_decomposition(n, ell)?;
    let ok = m.matches(&expected_block(m.case)?);
    Ok((m, ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representations_are_as_printed() {
        let s0 = build_rep(RepName::S0);
        assert_eq!(s0.ta[1][0], "q^2+1".parse().unwrap());
        assert_eq!(
            build_rep(RepName::S1).ta[1][0],
            "q^2+r2*q+1".parse().unwrap()
        );
        let sgn = build_rep(RepName::Sgn);
        assert_eq!(
            (sgn.ta[0][0].clone(), sgn.tb[0][0].clone()),
            (QPoly::int(-1), QPoly::int(-1))
        );
    }

    #[test]
    fn relations_hold_for_all_representations() {
        for r in RepName::ALL {
            let rep = build_rep(r);
            assert!(rep.satisfies_quadratic_relations(), "{r}");
            assert!(rep.satisfies_braid_relation(), "{r}");
        }
    }

    #[test]
    fn braid_relation_detects_a_wrong_entry() {
        let mut rep = build_rep(RepName::S1);
        rep.ta[1][0] = "q^2+2*r2*q+1".parse().unwrap();
        assert!(rep.satisfies_quadratic_relations());
        assert!(!rep.satisfies_braid_relation());
    }

    #[test]
    fn fitting_correspondence() {
        let f = fitting_labels();
        assert_eq!(f["ind"], "chi1");
        assert_eq!(f["S0"], "chi7");
        assert_eq!(f["sgn"], "chi21");
        assert_eq!(f.len(), 7);
    }

    #[test]
    fn identity_for_linear_primes() {
        let m = hecke_decomposition(1, 7).unwrap();
        assert_eq!(m.cols.len(), 7);
        for (i, row) in m.entries.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, u32::from(i == j));
            }
        }
    }

    #[test]
    fn listed_rows() {
        let m = hecke_decomposition(1, 13).unwrap();
        assert_eq!(m.cols, ["ind", "sigma1", "new-d2-S-1", "new-d2-S0"]);
        assert_eq!(m.entries[2], [1, 1, 0, 0]);
        let m = hecke_decomposition(1, 5).unwrap();
        assert_eq!(m.entries[3], [1, 1, 0, 0]);
        assert_eq!(m.entries[5], [1, 0, 0, 0]);
        assert!(m.entries.iter().all(|r| r.iter().any(|v| *v > 0)));
    }

    #[test]
    fn row_sums_are_dimensions() {
        for (n, ell) in [(1, 7), (1, 3), (1, 13), (1, 5), (2, 11)] {
            let m = hecke_decomposition(n, ell).unwrap();
            let dims: Vec<u32> = RepName::ALL
                .iter()
                .map(|r| build_rep(*r).dim as u32)
                .collect();
            assert_eq!(m.row_dims(), dims);
        }
    }

    #[test]
    fn result_depends_only_on_the_case() {
        let primes: Vec<u64> = (3..3000u64)
            .filter(|&p| crate::catalog::is_prime(p))
            .collect();
        let mut seen = BTreeMap::new();
        for n in 1..=6 {
            for &ell in &primes {
                let c = classify_prime(n, ell).unwrap().case;
                if !c.has_tables() {
                    assert!(matches!(
                        hecke_decomposition(n, ell),
                        Err(Error::NotHeckeCase)
                    ));
                    continue;
                }
                let (m, ok) = verify(n, ell).unwrap();
                assert!(ok, "n={n} l={ell}\n{m}");
                *seen.entry(c).or_insert(0) += 1;
            }
        }
        assert_eq!(seen.len(), 5);
    }

    #[test]
    fn merged_one_dimensional_reductions() {
        // ind and sigma1 agree mod l exactly when l | q²+1.
        let m = hecke_decomposition(2, 11).unwrap();
        assert_eq!(m.case, PrimeCase::Phi4);
        assert_eq!(m.entries[1], [1, 0, 0, 0]);
        assert!(matches!(
            hecke_decomposition(1, 37),
            Err(Error::NotHeckeCase)
        ));
        assert!(matches!(
            hecke_decomposition(1, 11),
            Err(Error::NotHeckeCase)
        ));
    }
}
