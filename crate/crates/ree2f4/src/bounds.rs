//! Bounds for the unknown decomposition numbers.
//!
//! Lower bounds come from non-negativity of every decomposition number, taking
//! into account which characters exist at a given `L = ℓ^f`. Upper bounds come
//! from projective characters: if `Ψ = Σ m_k Φ_k` then `(χ_i, Ψ) = Σ_k d_{ik} m_k`,
//! so a term `d_{ik} m_k` with known `m_k` is bounded by the scalar product.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::algebra::{LPoly, QPoly, SymPoly, QS2};
use crate::catalog::{classify_prime, PrimeCase};
use crate::decomp::{series_blocks, DecompMatrix};
use crate::error::{Error, Result};
use crate::paper_data::{self, eval_count, DecCell, DecompEntry, ScalarTable};

/// Values of `n` at which polynomial identities in `q` are sampled.
const SAMPLE_N: std::ops::RangeInclusive<u32> = 1..=8;

// ---------------------------------------------------------------------------
// Lower bounds

/// An entry that must be non-negative, present when `count` is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub entry: DecompEntry,
    pub count: SymPoly,
    pub source: String,
}

/// A stronger lower bound holding whenever `count` is positive at `L = ℓ^f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionalLo {
    #[serde(serialize_with = "serialize_display")]
    pub count: SymPoly,
    pub lo: i64,
}

fn serialize_display<T: fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Sample values of `L = ℓ^f` for a case.
fn l_domain(case: PrimeCase) -> Vec<BigInt> {
    if case == PrimeCase::Ell3 {
        (1..=10u32).map(|k| BigInt::from(3).pow(k)).collect()
    } else {
        (5..=400).map(BigInt::from).collect()
    }
}

fn count_positive(count: &SymPoly, l: &BigInt) -> bool {
    eval_count(count, 1, l).is_positive()
}

/// Non-negativity constraints of a case: the basic set, the rows obtained from
/// relations (skipping cells the encoded table leaves open), and the
/// non-unipotent series blocks.
pub fn constraints(case: PrimeCase) -> Result<Vec<Constraint>> {
    let table = paper_data::decomposition(case)?;
    let m = DecompMatrix::load_expanded(case)?;
    let mut out = Vec::new();
    for (i, (label, row)) in m.ordinary_rows.iter().zip(&m.entries).enumerate() {
        let (count, cells) = if i < m.basic_len {
            (SymPoly::one(), None)
        } else {
            let enc = table
                .continued
                .iter()
                .find(|r| &r.label == label)
                .ok_or_else(|| Error::Invalid(format!("{label} missing from {}", table.id)))?;
            (enc.count.clone(), Some(&enc.cells))
        };
        for (j, e) in row.iter().enumerate() {
            if cells.is_some_and(|c| c[j] == DecCell::Star) || e.is_constant() {
                continue;
            }
            out.push(Constraint {
                entry: e.clone(),
                count: count.clone(),
                source: format!("{}/{label}/{}", table.id, m.brauer_cols[j].0),
            });
        }
    }
    for (id, v) in series_blocks(case)? {
        for r in &v.rows {
            for (j, c) in r.cells.iter().enumerate() {
                if let DecCell::Entry(e) = c {
                    if !e.is_constant() {
                        out.push(Constraint {
                            entry: e.clone(),
                            count: r.count.clone(),
                            source: format!("{id}/{}/{}", r.label, v.cols[j]),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Tightens `lo` until every constraint is used to the full: from
/// `c₀ + Σ cᵢuᵢ ≥ 0` with `c_u > 0` and every other `cᵢ ≤ 0`, the bound
/// `u ≥ ⌈(−c₀ − Σ cᵢ·lo(uᵢ)) / c_u⌉` follows.
pub fn propagate(
    cons: &[&Constraint],
    mut lo: BTreeMap<String, i64>,
) -> Result<BTreeMap<String, i64>> {
    for c in cons {
        for u in c.entry.terms.keys() {
            lo.entry(u.clone()).or_insert(0);
        }
    }
    for _round in 0..1000 {
        let mut changed = false;
        for c in cons {
            let e = &c.entry;
            let positive: Vec<&String> = e
                .terms
                .iter()
                .filter(|(_, v)| **v > 0)
                .map(|(u, _)| u)
                .collect();
            let rest: i64 = e
                .terms
                .iter()
                .filter(|(_, v)| **v < 0)
                .map(|(u, v)| v * lo[u])
                .sum::<i64>()
                + e.constant;
            match positive.as_slice() {
                [] if rest < 0 => {
                    return Err(Error::Infeasible(format!(
                        "{} = {e} is forced negative",
                        c.source
                    )))
                }
                [u] => {
                    let cu = e.terms[*u];
                    let need = (-rest).div_euclid(cu) + i64::from((-rest).rem_euclid(cu) != 0);
                    if need > lo[*u] {
                        lo.insert((*u).clone(), need);
                        changed = true;
                    }
                }
                _ => {}
            }
        }
        if !changed {
            return Ok(lo);
        }
    }
    Err(Error::Infeasible(
        "lower-bound propagation does not terminate".into(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBounds {
    pub lo: BTreeMap<String, i64>,
    pub cond: BTreeMap<String, Vec<ConditionalLo>>,
}

/// Unconditional lower bounds and the stronger bounds that hold when the
/// characters of an optional row exist.
pub fn lower_bounds(case: PrimeCase) -> Result<LowerBounds> {
    let cons = constraints(case)?;
    // Counts are few and shared by many constraints; evaluate each once.
    let mut counts: Vec<&SymPoly> = Vec::new();
    let kind: Vec<usize> = cons
        .iter()
        .map(|c| match counts.iter().position(|k| **k == c.count) {
            Some(i) => i,
            None => {
                counts.push(&c.count);
                counts.len() - 1
            }
        })
        .collect();
    let domain = l_domain(case);
    let positive: Vec<Vec<bool>> = counts
        .iter()
        .map(|k| domain.iter().map(|l| count_positive(k, l)).collect())
        .collect();
    let optional: Vec<bool> = positive.iter().map(|p| p.iter().any(|x| !x)).collect();
    let always: Vec<&Constraint> = cons
        .iter()
        .zip(&kind)
        .filter(|(_, k)| !optional[**k])
        .map(|(c, _)| c)
        .collect();
    let lo = propagate(&always, BTreeMap::new())?;
    let mut cond: BTreeMap<String, Vec<ConditionalLo>> = BTreeMap::new();
    for (ci, count) in counts.iter().enumerate().filter(|(i, _)| optional[*i]) {
        let implied = |k: usize| {
            positive[ci]
                .iter()
                .zip(&positive[k])
                .all(|(here, there)| !here || *there)
        };
        let active: Vec<&Constraint> = cons
            .iter()
            .zip(&kind)
            .filter(|(_, k)| !optional[**k] || implied(**k))
            .map(|(c, _)| c)
            .collect();
        let lo_c = propagate(&active, lo.clone())?;
        for (u, v) in lo_c {
            if v > lo[&u] {
                cond.entry(u).or_default().push(ConditionalLo {
                    count: (*count).clone(),
                    lo: v,
                });
            }
        }
    }
    Ok(LowerBounds { lo, cond })
}

/// `L = ℓ^f` for `(n, ℓ)`.
pub fn l_power(n: u32, ell: u64) -> Result<(PrimeCase, BigInt)> {
    let c = classify_prime(n, ell)?;
    Ok((c.case, BigInt::from(ell).pow(c.f)))
}

// ---------------------------------------------------------------------------
// Upper bounds

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Rule {
    /// Multiplicity one of the relevant projective indecomposable.
    R1,
    /// Known non-unit multiplicity, division and rounding to an integer.
    R2,
    /// Multiplicity bounded below through another unknown's upper bound,
    /// followed by strict integer rounding.
    R3,
    /// No rule applies; the bound is taken from the reference table.
    Encoded,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::Encoded => "encoded-only",
        };
        f.write_str(s)
    }
}

/// One derived upper bound with its source.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Derivation {
    pub unknown: String,
    pub rule: Rule,
    /// `table/projective/row`.
    pub source: String,
    /// The bound before integer rounding.
    #[serde(serialize_with = "serialize_display")]
    pub raw: LPoly,
    #[serde(serialize_with = "serialize_display")]
    pub hi: LPoly,
}

fn is_integer_valued(p: &LPoly) -> bool {
    SAMPLE_N.into_iter().all(|n| p.eval_at_q(n).is_integer())
}

fn positive_on_samples(p: &LPoly) -> bool {
    SAMPLE_N.into_iter().all(|n| p.eval_at_q(n).is_positive())
}

/// Writes `b = P + r` with `r ∈ [0, 1)` a rational constant that is the same at
/// every sampled `n`, and returns the integer-valued part `P`, which bounds
/// every integer below `b`. `None` when no such decomposition exists.
pub fn integer_floor(b: &LPoly) -> Option<LPoly> {
    let mut frac: Option<BigRational> = None;
    for n in SAMPLE_N {
        let v = b.eval_at_q(n);
        if !v.is_rational() {
            return None;
        }
        let r = v.rat() - BigRational::from_integer(v.floor());
        match &frac {
            None => frac = Some(r),
            Some(f) if *f != r => return None,
            Some(_) => {}
        }
    }
    let r = frac?;
    let p = b - &LPoly::constant(QS2::from_rat(r));
    is_integer_valued(&p).then_some(p)
}

fn sym_const(p: &SymPoly) -> Option<LPoly> {
    p.as_constant()
}

/// Multiplicities `m_k` of the projective indecomposables in a projective
/// character, from its scalar products `v` with the basic set.
pub fn multiplicities(d: &[Vec<DecompEntry>], v: &[SymPoly]) -> Vec<SymPoly> {
    let mut m: Vec<SymPoly> = Vec::with_capacity(v.len());
    for (i, vi) in v.iter().enumerate() {
        let mut acc = vi.clone();
        for (k, mk) in m.iter().enumerate() {
            let e = &d[i][k];
            if !e.is_zero() {
                acc = acc.sub(&e.to_sym().mul(mk));
            }
        }
        m.push(acc);
    }
    m
}

/// A projective character's scalar products on a basic set.
struct Column<'a> {
    table: &'a str,
    name: &'a str,
    v: Vec<SymPoly>,
    m: Vec<SymPoly>,
}

fn columns<'a>(
    labels: &[String],
    d: &[Vec<DecompEntry>],
    t: &'a ScalarTable,
) -> Result<Vec<Column<'a>>> {
    let mut out = Vec::new();
    for name in &t.cols {
        let v = labels
            .iter()
            .map(|l| {
                t.get(l, name)
                    .map(|e| e.to_sym())
                    .ok_or_else(|| Error::Invalid(format!("{} has no row {l}", t.id)))
            })
            .collect::<Result<Vec<_>>>()?;
        let m = multiplicities(d, &v);
        out.push(Column {
            table: &t.id,
            name,
            v,
            m,
        });
    }
    Ok(out)
}

/// `Σ_{k' ≠ skip} d_{ik'} m_{k'}` over the terms that are known exactly; the
/// others are non-negative and are dropped.
fn exact_part(d_row: &[DecompEntry], m: &[SymPoly], skip: usize) -> LPoly {
    let mut acc = LPoly::zero();
    for (k, (e, mk)) in d_row.iter().zip(m).enumerate() {
        if k == skip || e.is_zero() {
            continue;
        }
        if let (true, Some(c)) = (e.is_constant(), sym_const(mk)) {
            acc = &acc + &c.scale(&QS2::from_int(e.constant));
        }
    }
    acc
}

fn single_unknown(e: &DecompEntry) -> Option<(&String, i64)> {
    match e.terms.iter().collect::<Vec<_>>().as_slice() {
        [(u, c)] => Some((*u, **c)),
        _ => None,
    }
}

/// Bounds from columns whose relevant multiplicity is known exactly.
fn direct_rules(labels: &[String], d: &[Vec<DecompEntry>], cols: &[Column]) -> Vec<Derivation> {
    let mut out = Vec::new();
    for col in cols {
        for i in 0..labels.len() {
            let Some(vi) = sym_const(&col.v[i]) else {
                continue;
            };
            for k in 0..i {
                let e = &d[i][k];
                let Some((u, beta)) = single_unknown(e) else {
                    continue;
                };
                let Some(mk) = sym_const(&col.m[k]) else {
                    continue;
                };
                if beta <= 0 || mk.is_zero() || !positive_on_samples(&mk) {
                    continue;
                }
                let alpha = QS2::from_int(e.constant);
                let num = &(&vi - &mk.scale(&alpha)) - &exact_part(&d[i], &col.m, k);
                let Ok(raw) = num.exact_div(&mk.scale(&QS2::from_int(beta))) else {
                    continue;
                };
                let hi = integer_floor(&raw).unwrap_or_else(|| raw.clone());
                out.push(Derivation {
                    unknown: u.clone(),
                    rule: if mk == LPoly::one() {
                        Rule::R1
                    } else {
                        Rule::R2
                    },
                    source: format!("{}/{}/{}", col.table, col.name, labels[i]),
                    raw,
                    hi,
                });
            }
        }
    }
    out
}

/// Bounds from columns where the relevant multiplicity `A = c₀ + c₁·v` is only
/// known through an upper bound on `v`: with `A ≥ P + c`, `c > 0`, and `W/P`
/// integer-valued, `u·A ≤ W` forces `u < W/P`, so `u ≤ W/P − 1`.
fn two_step_rules(
    labels: &[String],
    d: &[Vec<DecompEntry>],
    cols: &[Column],
    hi: &BTreeMap<String, LPoly>,
) -> Vec<Derivation> {
    let mut out = Vec::new();
    for col in cols {
        for i in 0..labels.len() {
            let Some(vi) = sym_const(&col.v[i]) else {
                continue;
            };
            for k in 0..i {
                let e = &d[i][k];
                let Some((u, 1)) = single_unknown(e) else {
                    continue;
                };
                if e.constant != 0 {
                    continue;
                }
                let mk = &col.m[k];
                let vars = mk.vars();
                if !mk.is_affine() || vars.len() != 1 {
                    continue;
                }
                let v = vars.iter().next().expect("one variable");
                let Some(hv) = hi.get(v) else { continue };
                let c1 = mk.linear_coeff(v);
                if c1.eventual_sign() != Ordering::Less {
                    continue;
                }
                let a_lo = &mk.constant_term() + &(&c1 * hv);
                let c = a_lo.coeff(0);
                if !c.is_rational() || !c.is_positive() {
                    continue;
                }
                let p = &a_lo - &LPoly::constant(c);
                if p.is_zero() || !positive_on_samples(&p) {
                    continue;
                }
                let w = &vi - &exact_part(&d[i], &col.m, k);
                let Ok(ratio) = w.exact_div(&p) else { continue };
                if !is_integer_valued(&ratio) || !positive_on_samples(&w) {
                    continue;
                }
                out.push(Derivation {
                    unknown: u.clone(),
                    rule: Rule::R3,
                    source: format!("{}/{}/{}", col.table, col.name, labels[i]),
                    raw: ratio.clone(),
                    hi: &ratio - &LPoly::one(),
                });
            }
        }
    }
    out
}

/// Whether `a` is the better (eventually smaller) bound.
fn eventually_below(a: &LPoly, b: &LPoly) -> bool {
    (a - b).eventual_sign() == Ordering::Less
}

fn best(cands: &[Derivation]) -> BTreeMap<String, Derivation> {
    let mut out: BTreeMap<String, Derivation> = BTreeMap::new();
    for c in cands {
        match out.get(&c.unknown) {
            Some(b) if !eventually_below(&c.hi, &b.hi) => {}
            _ => {
                out.insert(c.unknown.clone(), c.clone());
            }
        }
    }
    out
}

/// Basic sets, decomposition numbers and scalar tables for the upper-bound rules.
type Source = (Vec<String>, Vec<Vec<DecompEntry>>, ScalarTable);

fn upper_sources(case: PrimeCase) -> Result<Vec<Source>> {
    let mut out = Vec::new();
    if case == PrimeCase::Linear {
        return Ok(out);
    }
    let m = DecompMatrix::load(case)?;
    let basic = m.basic_labels().to_vec();
    out.push((basic.clone(), m.entries.clone(), paper_data::scalar(case)?));
    if matches!(case, PrimeCase::Phi8p | PrimeCase::Phi8m) {
        out.push((
            basic,
            m.entries.clone(),
            paper_data::additional_scalar(case)?,
        ));
    }
    if case == PrimeCase::Phi4 {
        let g5 = paper_data::series_decomposition("dec-g5-noncyc")?;
        let v = g5
            .variant("phi4")
            .ok_or_else(|| Error::UnknownTable("dec-g5-noncyc/phi4".into()))?;
        let n = v.cols.len();
        let labels = v.rows[..n].iter().map(|r| r.label.clone()).collect();
        let d = v.rows[..n]
            .iter()
            .map(|r| {
                r.cells
                    .iter()
                    .map(|c| c.entry().cloned().unwrap_or_default())
                    .collect()
            })
            .collect();
        out.push((labels, d, paper_data::scalar_table("scalar-g5-phi4")?));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpperBounds {
    /// The best bound per unknown.
    pub best: BTreeMap<String, Derivation>,
    /// Every bound found, in the order derived.
    pub all: Vec<Derivation>,
}

/// Upper bounds from all rules, the best per unknown.
pub fn upper_bounds(case: PrimeCase) -> Result<UpperBounds> {
    let sources = upper_sources(case)?;
    let mut all = Vec::new();
    let mut cols_per_source = Vec::new();
    for (labels, d, t) in &sources {
        let cols = columns(labels, d, t)?;
        all.extend(direct_rules(labels, d, &cols));
        cols_per_source.push(cols);
    }
    let first: BTreeMap<String, LPoly> = best(&all).into_iter().map(|(u, d)| (u, d.hi)).collect();
    for ((labels, d, _), cols) in sources.iter().zip(&cols_per_source) {
        all.extend(two_step_rules(labels, d, cols, &first));
    }
    Ok(UpperBounds {
        best: best(&all),
        all,
    })
}

// ---------------------------------------------------------------------------
// Bound sets

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnknownBound {
    pub unknown: String,
    pub lo: i64,
    pub cond: Vec<ConditionalLo>,
    pub derivation: Option<Derivation>,
    #[serde(serialize_with = "serialize_opt_display")]
    pub encoded_hi: Option<QPoly>,
}

fn serialize_opt_display<T: fmt::Display, S: serde::Serializer>(
    v: &Option<T>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_none(),
    }
}

impl UnknownBound {
    /// Derived upper bound, or the reference bound when no rule applies.
    pub fn hi(&self) -> Option<LPoly> {
        self.derivation
            .as_ref()
            .map(|d| d.hi.clone())
            .or_else(|| self.encoded_hi.clone().map(LPoly::from))
    }

    pub fn rule(&self) -> Rule {
        self.derivation.as_ref().map_or(Rule::Encoded, |d| d.rule)
    }

    pub fn lo_at_l(&self, n: u32, l: &BigInt) -> i64 {
        self.cond
            .iter()
            .filter(|c| eval_count(&c.count, n, l).is_positive())
            .map(|c| c.lo)
            .fold(self.lo, i64::max)
    }

    /// Integer upper bound at `n`.
    pub fn hi_at(&self, n: u32) -> Option<BigInt> {
        self.hi().map(|h| h.eval_at_q(n).floor())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSet {
    pub case: PrimeCase,
    pub bounds: BTreeMap<String, UnknownBound>,
}

impl BoundSet {
    pub fn compute(case: PrimeCase) -> Result<BoundSet> {
        let lower = lower_bounds(case)?;
        let upper = upper_bounds(case)?;
        let encoded = paper_data::reference_bounds(case)?;
        let names: BTreeSet<String> = lower
            .lo
            .keys()
            .cloned()
            .chain(upper.best.keys().cloned())
            .chain(encoded.iter().map(|b| b.unknown.clone()))
            .collect();
        let bounds = names
            .into_iter()
            .map(|u| {
                let b = UnknownBound {
                    unknown: u.clone(),
                    lo: lower.lo.get(&u).copied().unwrap_or(0),
                    cond: lower.cond.get(&u).cloned().unwrap_or_default(),
                    derivation: upper.best.get(&u).cloned(),
                    encoded_hi: encoded
                        .iter()
                        .find(|b| b.unknown == u)
                        .map(|b| b.hi.clone()),
                };
                (u, b)
            })
            .collect();
        Ok(BoundSet { case, bounds })
    }

    /// [`BoundSet::compute`], computed once per case.
    pub fn cached(case: PrimeCase) -> Result<&'static BoundSet> {
        static CACHE: [OnceLock<Result<BoundSet>>; 5] = [const { OnceLock::new() }; 5];
        let i = PrimeCase::TABLED
            .iter()
            .position(|&c| c == case)
            .ok_or(Error::NotHeckeCase)?;
        CACHE[i]
            .get_or_init(|| BoundSet::compute(case))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn get(&self, u: &str) -> Option<&UnknownBound> {
        self.bounds.get(u)
    }

    /// Lower bound at `(n, ℓ)`.
    pub fn lo_at(&self, u: &str, n: u32, ell: u64) -> Result<i64> {
        let b = self
            .get(u)
            .ok_or_else(|| Error::Invalid(format!("unknown {u}")))?;
        let (_, l) = l_power(n, ell)?;
        Ok(b.lo_at_l(n, &l))
    }

    /// Integer intervals at `(n, ℓ)`; an unknown without an upper bound gets `None`.
    pub fn evaluate(&self, n: u32, ell: u64) -> Result<BTreeMap<String, (i64, Option<BigInt>)>> {
        let (case, l) = l_power(n, ell)?;
        if case != self.case {
            return Err(Error::Invalid(format!(
                "l={ell} at n={n} is in case {case}, not {}",
                self.case
            )));
        }
        Ok(self
            .bounds
            .iter()
            .map(|(u, b)| (u.clone(), (b.lo_at_l(n, &l), b.hi_at(n))))
            .collect())
    }
}

/// Unknowns whose interval at `(n, ℓ)` is a single value.
pub fn corollary_pins(case: PrimeCase, n: u32, ell: u64) -> Result<BTreeMap<String, i64>> {
    let set = BoundSet::cached(case)?;
    let mut out = BTreeMap::new();
    for (u, (lo, hi)) in set.evaluate(n, ell)? {
        let Some(hi) = hi else { continue };
        let lo_big = BigInt::from(lo);
        match lo_big.cmp(&hi) {
            Ordering::Greater => {
                return Err(Error::Inconsistent(format!(
                    "{u}: lower bound {lo} exceeds upper bound {hi}"
                )))
            }
            Ordering::Equal => {
                out.insert(u, lo);
            }
            Ordering::Less => {}
        }
    }
    Ok(out)
}

/// Signed difference `a − b` as a polynomial, for reports.
pub fn difference(a: &LPoly, b: &QPoly) -> LPoly {
    a - &LPoly::from(b.clone())
}

/// Whether `a ≤ b` at every sampled `n` and eventually.
pub fn not_above(a: &LPoly, b: &QPoly) -> bool {
    let d = difference(a, b);
    d.eventual_sign() != Ordering::Greater
        && SAMPLE_N.into_iter().all(|n| !d.eval_at_q(n).is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_qpoly;
    use crate::catalog::is_prime;

    fn lp(s: &str) -> LPoly {
        LPoly::from(parse_qpoly(s).unwrap())
    }

    fn primes_below(n: u64) -> Vec<u64> {
        (3..n).filter(|&p| is_prime(p)).collect()
    }

    #[test]
    fn rounding_to_integer_valued_part() {
        assert_eq!(integer_floor(&lp("r2*q/4+1/2")).unwrap(), lp("r2*q/4"));
        assert_eq!(integer_floor(&lp("r2*q/4-1/2")).unwrap(), lp("r2*q/4-1"));
        assert_eq!(integer_floor(&lp("(q^2-2)/3")).unwrap(), lp("(q^2-2)/3"));
        assert!(integer_floor(&lp("q")).is_none());
    }

    #[test]
    fn propagation_and_infeasibility() {
        let c = |s: &str| Constraint {
            entry: DecompEntry::from_sym(&crate::algebra::parse_sym(s).unwrap()).unwrap(),
            count: SymPoly::one(),
            source: s.into(),
        };
        let cons = [c("a-2"), c("4-3*a+d"), c("2*e-d-1")];
        let refs: Vec<&Constraint> = cons.iter().collect();
        let lo = propagate(&refs, BTreeMap::new()).unwrap();
        assert_eq!((lo["a"], lo["d"], lo["e"]), (2, 2, 2));
        let bad = [c("a-2"), c("1-a")];
        let refs: Vec<&Constraint> = bad.iter().collect();
        assert!(matches!(
            propagate(&refs, BTreeMap::new()),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn lower_bounds_match_reference() {
        for case in PrimeCase::TABLED {
            let lower = lower_bounds(case).unwrap();
            for tb in paper_data::reference_bounds(case).unwrap() {
                assert_eq!(
                    lower.lo.get(&tb.unknown).copied().unwrap_or(0),
                    tb.lo,
                    "{case} {}",
                    tb.unknown
                );
            }
        }
        let phi8m = lower_bounds(PrimeCase::Phi8m).unwrap();
        let positive: Vec<&String> = phi8m
            .lo
            .iter()
            .filter(|(_, v)| **v > 0)
            .map(|(u, _)| u)
            .collect();
        assert_eq!(positive, ["s"]);
    }

    #[test]
    fn conditional_lower_bounds_follow_character_counts() {
        let primes = primes_below(120);
        for case in PrimeCase::TABLED {
            let set = BoundSet::compute(case).unwrap();
            let reference = paper_data::reference_bounds(case).unwrap();
            let mut checked = 0;
            for n in 1..=200 {
                for &ell in &primes {
                    if classify_prime(n, ell).unwrap().case != case {
                        continue;
                    }
                    for tb in &reference {
                        let got = set.lo_at(&tb.unknown, n, ell).unwrap();
                        assert_eq!(got, tb.lo_at(n, ell), "{case} {} n={n} l={ell}", tb.unknown);
                    }
                    checked += 1;
                }
            }
            assert!(checked > 0, "{case}");
        }
    }

    #[test]
    fn upper_bounds_match_reference() {
        for case in PrimeCase::TABLED {
            let set = BoundSet::compute(case).unwrap();
            for (u, b) in &set.bounds {
                let d = b
                    .derivation
                    .as_ref()
                    .unwrap_or_else(|| panic!("{case} {u} not derived"));
                let enc = b.encoded_hi.as_ref().unwrap();
                assert!(not_above(&d.hi, enc), "{case} {u}: {} vs {enc}", d.hi);
                assert_eq!(d.hi, LPoly::from(enc.clone()), "{case} {u}");
            }
        }
    }

    #[test]
    fn provenance_of_spelled_out_bounds() {
        let rule = |case, u: &str| {
            let b = BoundSet::compute(case).unwrap();
            let d = b.get(u).unwrap().derivation.clone().unwrap();
            (d.rule, d.source)
        };
        let (r, src) = rule(PrimeCase::Phi8p, "h");
        assert_eq!(r, Rule::R2);
        assert!(src.contains("Psi13'"), "{src}");
        let (r, src) = rule(PrimeCase::Phi4, "b");
        assert_eq!((r, src.as_str()), (Rule::R1, "scalar-phi4/Psi8/chi21"));
        let (r, src) = rule(PrimeCase::Phi8m, "x");
        assert_eq!(r, Rule::R3);
        assert!(src.contains("Psi11''"), "{src}");
        let up = upper_bounds(PrimeCase::Phi8p).unwrap();
        let h = &up.best["h"];
        assert_eq!(h.raw, lp("r2*q/4+1/2"));
        assert_eq!(
            up.best["u"].hi,
            lp("r2*q*(q^2+3*r2*q+4)/24").exact_div(&lp("q/r2")).unwrap()
        );
        assert!(upper_bounds(PrimeCase::Linear).unwrap().all.is_empty());
    }

    #[test]
    fn every_bound_is_valid_where_inhabited() {
        let primes = primes_below(2000);
        for case in PrimeCase::TABLED {
            let set = BoundSet::compute(case).unwrap();
            for n in 1..=5 {
                for &ell in primes
                    .iter()
                    .filter(|&&p| classify_prime(n, p).unwrap().case == case)
                {
                    for (u, (lo, hi)) in set.evaluate(n, ell).unwrap() {
                        assert!(BigInt::from(lo) <= hi.unwrap(), "{case} {u} n={n} l={ell}");
                    }
                }
            }
        }
    }

    #[test]
    fn single_unknown_entries_are_nonnegative_on_the_interval() {
        for case in PrimeCase::TABLED {
            let set = BoundSet::compute(case).unwrap();
            let (n, ell) = crate::decomp::representative(case).unwrap();
            let at = set.evaluate(n, ell).unwrap();
            let (_, l) = l_power(n, ell).unwrap();
            for c in constraints(case).unwrap() {
                let Some((u, k)) = single_unknown(&c.entry) else {
                    continue;
                };
                if !eval_count(&c.count, n, &l).is_positive() {
                    continue;
                }
                let (lo, hi) = &at[u];
                for v in [BigInt::from(*lo), hi.clone().unwrap()] {
                    assert!(
                        BigInt::from(c.entry.constant) + k * v >= BigInt::from(0),
                        "{case} {}",
                        c.source
                    );
                }
            }
        }
    }

    #[test]
    fn forced_values() {
        for pin in paper_data::pins().unwrap() {
            let got = corollary_pins(pin.case, pin.n, pin.ell).unwrap();
            assert_eq!(got, pin.values, "{} n={} l={}", pin.case, pin.n, pin.ell);
        }
        assert!(corollary_pins(PrimeCase::Phi8p, 1, 5).is_err());
    }
}
