//! Ordinary character degrees of 2F4(q²), Lusztig-series types, and the
//! classification of odd primes by the factor of the group order they divide.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{parse_qpoly, Factor, QPoly};
use crate::error::{Error, Result};
use crate::paper_data::{self, format::RawTable};

/// Harish-Chandra series of an ordinary unipotent character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CharSeries {
    Principal,
    B2a,
    B2b,
    Cuspidal,
    NotApplicable,
}

impl CharSeries {
    fn from_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "ps" => CharSeries::Principal,
            "2B2a" => CharSeries::B2a,
            "2B2b" => CharSeries::B2b,
            "c" => CharSeries::Cuspidal,
            "-" => CharSeries::NotApplicable,
            _ => return None,
        })
    }

    pub fn tag(self) -> &'static str {
        match self {
            CharSeries::Principal => "ps",
            CharSeries::B2a => "2B2a",
            CharSeries::B2b => "2B2b",
            CharSeries::Cuspidal => "c",
            CharSeries::NotApplicable => "-",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharRecord {
    pub label: String,
    pub degree: QPoly,
    /// Family index 1..7; unipotent characters only.
    pub family: Option<u8>,
    pub series: CharSeries,
    pub conj_partner: Option<String>,
    pub cuspidal: bool,
    /// Carter's notation, the distinguishing class and the value there; opaque.
    pub carter: String,
    pub class: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesChar {
    pub label: String,
    pub chevie: String,
    pub degree: QPoly,
}

/// One type `g2..g18` of Lusztig series: the characters of one series and the
/// number of series of this type.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesType {
    pub id: String,
    pub chars: Vec<SeriesChar>,
    pub count: QPoly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    pub unipotent: Vec<CharRecord>,
    pub series: Vec<SeriesType>,
}

fn schema(t: &RawTable, line: usize, column: usize, msg: impl Into<String>) -> Error {
    Error::Schema {
        table: t.id.clone(),
        line,
        column,
        msg: msg.into(),
    }
}

fn opt(s: &str) -> Option<String> {
    (s != "-").then(|| s.to_string())
}

/// Reads the unipotent character table.
pub fn parse_unipotent(uni: &RawTable) -> Result<Vec<CharRecord>> {
    let sec = uni
        .sections
        .first()
        .ok_or_else(|| schema(uni, 0, 0, "no rows"))?;
    let mut unipotent = Vec::new();
    for r in &sec.rows {
        let c = &r.cells;
        let degree = parse_qpoly(&c[1]).map_err(|e| schema(uni, r.line, 1, e.to_string()))?;
        let family: u8 = c[2]
            .parse()
            .map_err(|_| schema(uni, r.line, 2, "family must be 1..7"))?;
        if !(1..=7).contains(&family) {
            return Err(schema(uni, r.line, 2, "family must be 1..7"));
        }
        let series = CharSeries::from_tag(&c[3])
            .ok_or_else(|| schema(uni, r.line, 3, "unknown series tag"))?;
        unipotent.push(CharRecord {
            label: c[0].clone(),
            degree,
            family: Some(family),
            series,
            conj_partner: opt(&c[4]),
            cuspidal: series == CharSeries::Cuspidal,
            carter: c[5].clone(),
            class: c[6].clone(),
            value: c[7].clone(),
        });
    }
    if unipotent.len() != 21 {
        return Err(schema(uni, 0, 0, "expected 21 unipotent characters"));
    }
    Ok(unipotent)
}

/// Reads the table of Lusztig-series types.
pub fn parse_series(ser: &RawTable) -> Result<Vec<SeriesType>> {
    let sec = ser
        .sections
        .first()
        .ok_or_else(|| schema(ser, 0, 0, "no rows"))?;
    let mut series: Vec<SeriesType> = Vec::new();
    for r in &sec.rows {
        let c = &r.cells;
        let degree = parse_qpoly(&c[3]).map_err(|e| schema(ser, r.line, 3, e.to_string()))?;
        let count = parse_qpoly(&c[4]).map_err(|e| schema(ser, r.line, 4, e.to_string()))?;
        let ch = SeriesChar {
            label: c[1].clone(),
            chevie: c[2].clone(),
            degree,
        };
        match series.last_mut() {
            Some(t) if t.id == c[0] => {
                if t.count != count {
                    return Err(schema(ser, r.line, 4, "count differs within one type"));
                }
                t.chars.push(ch);
            }
            _ => series.push(SeriesType {
                id: c[0].clone(),
                chars: vec![ch],
                count,
            }),
        }
    }
    Ok(series)
}

impl Catalog {
    pub fn from_tables(uni: &RawTable, ser: &RawTable) -> Result<Catalog> {
        Ok(Catalog {
            unipotent: parse_unipotent(uni)?,
            series: parse_series(ser)?,
        })
    }

    /// The catalog shipped with the crate.
    pub fn get() -> &'static Catalog {
        static CAT: OnceLock<Catalog> = OnceLock::new();
        CAT.get_or_init(|| {
            let uni = paper_data::raw("unipotent").expect("embedded unipotent table");
            let ser = paper_data::raw("series").expect("embedded series table");
            Catalog::from_tables(&uni, &ser).expect("embedded catalog is valid")
        })
    }

    pub fn unipotent_by_label(&self, label: &str) -> Option<&CharRecord> {
        self.unipotent.iter().find(|c| c.label == label)
    }

    pub fn series_type(&self, id: &str) -> Option<&SeriesType> {
        self.series.iter().find(|t| t.id == id)
    }

    /// Degree of any ordinary character, unipotent (`chi7`) or not (`chi5,1`).
    pub fn degree(&self, label: &str) -> Option<&QPoly> {
        if let Some(c) = self.unipotent_by_label(label) {
            return Some(&c.degree);
        }
        self.series
            .iter()
            .flat_map(|t| &t.chars)
            .find(|c| c.label == label)
            .map(|c| &c.degree)
    }
}

/// The unipotent character `χ_i`, `1 ≤ i ≤ 21`.
pub fn unipotent_char(i: usize) -> Result<CharRecord> {
    if !(1..=21).contains(&i) {
        return Err(Error::OutOfRange(i));
    }
    Ok(Catalog::get().unipotent[i - 1].clone())
}

/// `Σ χ(1)²` over all irreducible characters, with each series type weighted by
/// its count.
pub fn sum_of_squares() -> QPoly {
    let cat = Catalog::get();
    let mut acc = cat
        .unipotent
        .iter()
        .fold(QPoly::zero(), |acc, c| &acc + &c.degree.pow(2));
    for t in &cat.series {
        let s = t
            .chars
            .iter()
            .fold(QPoly::zero(), |acc, c| &acc + &c.degree.pow(2));
        acc = &acc + &(&t.count * &s);
    }
    acc
}

/// `Σ χ(1)²` over the unipotent characters of one family.
pub fn family_sum_of_squares(family: u8) -> QPoly {
    Catalog::get()
        .unipotent
        .iter()
        .filter(|c| c.family == Some(family))
        .fold(QPoly::zero(), |acc, c| &acc + &c.degree.pow(2))
}

/// The smallest degree of a nontrivial ordinary character,
/// `(q/√2)(q²−1)(q²+1)²(q⁴−q²+1)` at `q² = 2^(2n+1)`.
pub fn d0(n: u32) -> BigInt {
    d0_poly()
        .eval_at_q(n)
        .to_integer()
        .expect("d0 is an integer")
}

pub fn d0_poly() -> QPoly {
    parse_qpoly("q/r2*(q^2-1)*(q^2+1)^2*(q^4-q^2+1)").expect("valid literal")
}

/// The prime cases distinguished by which factor of `|G|` the prime divides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PrimeCase {
    /// `ℓ | q²−1`
    Linear,
    /// `ℓ | q²+1`, `ℓ > 3`
    Phi4,
    /// `ℓ | q²+√2q+1`
    Phi8p,
    /// `ℓ | q²−√2q+1`
    Phi8m,
    /// `ℓ = 3`
    Ell3,
    /// `ℓ | φ12 φ24' φ24''`, `ℓ > 3`
    CyclicDefect,
    /// `ℓ` does not divide `|G|`
    NotDividing,
}

impl PrimeCase {
    /// The cases with unipotent decomposition tables.
    pub const TABLED: [PrimeCase; 5] = [
        PrimeCase::Linear,
        PrimeCase::Phi4,
        PrimeCase::Phi8p,
        PrimeCase::Phi8m,
        PrimeCase::Ell3,
    ];
    /// The cases with `ℓ > 3` and non-cyclic defect.
    pub const GOOD: [PrimeCase; 4] = [
        PrimeCase::Linear,
        PrimeCase::Phi4,
        PrimeCase::Phi8p,
        PrimeCase::Phi8m,
    ];

    pub fn key(self) -> &'static str {
        match self {
            PrimeCase::Linear => "linear",
            PrimeCase::Phi4 => "phi4",
            PrimeCase::Phi8p => "phi8p",
            PrimeCase::Phi8m => "phi8m",
            PrimeCase::Ell3 => "ell3",
            PrimeCase::CyclicDefect => "cyclic",
            PrimeCase::NotDividing => "none",
        }
    }

    /// Name used in reports, e.g. `Phi8p`.
    pub fn name(self) -> &'static str {
        match self {
            PrimeCase::Linear => "Linear",
            PrimeCase::Phi4 => "Phi4",
            PrimeCase::Phi8p => "Phi8p",
            PrimeCase::Phi8m => "Phi8m",
            PrimeCase::Ell3 => "Ell3",
            PrimeCase::CyclicDefect => "CyclicDefect",
            PrimeCase::NotDividing => "NotDividing",
        }
    }

    /// The factor whose `ℓ`-part is `ℓ^f`, when there is one.
    pub fn factor(self) -> Option<Factor> {
        match self {
            PrimeCase::Linear => Some(Factor::Phi1Tilde),
            PrimeCase::Phi4 | PrimeCase::Ell3 => Some(Factor::Phi4),
            PrimeCase::Phi8p => Some(Factor::Phi8p),
            PrimeCase::Phi8m => Some(Factor::Phi8pp),
            PrimeCase::CyclicDefect | PrimeCase::NotDividing => None,
        }
    }

    pub fn has_tables(self) -> bool {
        Self::TABLED.contains(&self)
    }

    pub fn is_good(self) -> bool {
        Self::GOOD.contains(&self)
    }
}

impl fmt::Display for PrimeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PrimeCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let k = s.to_ascii_lowercase();
        [
            PrimeCase::Linear,
            PrimeCase::Phi4,
            PrimeCase::Phi8p,
            PrimeCase::Phi8m,
            PrimeCase::Ell3,
            PrimeCase::CyclicDefect,
            PrimeCase::NotDividing,
        ]
        .into_iter()
        .find(|c| c.key() == k || c.name().eq_ignore_ascii_case(&k))
        .ok_or_else(|| Error::Invalid(format!("unknown prime case '{s}'")))
    }
}

/// Result of [`classify_prime`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub case: PrimeCase,
    /// `ℓ`-adic valuation of the evaluated factor; 0 when `ℓ ∤ |G|`.
    pub f: u32,
    /// Name of the divided factor.
    pub factor: Option<String>,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} f={}", self.case, self.f)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `v_ℓ(x)` for a positive integer `x`.
pub fn valuation(x: &BigInt, ell: u64) -> u32 {
    let l = BigInt::from(ell);
    let mut x = x.clone();
    let mut v = 0;
    while !x.is_zero() && (&x % &l).is_zero() {
        x /= &l;
        v += 1;
    }
    v
}

/// Value of a factor at `q² = 2^(2n+1)`, computed in the integers: every term
/// is `a·(q²)^k` or `b·√2q·(q²)^k`. Not meaningful for `φ1` and `φ2`, whose
/// values are irrational.
pub fn factor_value(f: Factor, n: u32) -> BigInt {
    let q2 = BigInt::from(1) << (2 * n + 1);
    let s = BigInt::from(1) << (n + 1);
    let mut acc = BigInt::zero();
    for (k, &(a, b)) in f.coeffs().iter().enumerate().rev() {
        let power = q2.pow((k / 2) as u32);
        acc += if k % 2 == 0 {
            power * a
        } else {
            power * &s * b
        };
    }
    acc
}

/// The same value reduced modulo `m`.
fn factor_value_mod(f: Factor, n: u32, m: u64) -> u64 {
    let m = m as u128;
    let pow = |e: u64| -> u128 {
        let (mut base, mut e, mut r) = (2u128 % m, e, 1u128 % m);
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        r
    };
    let q2 = pow(2 * n as u64 + 1);
    let s = pow(n as u64 + 1);
    let lift = |c: i64| -> u128 { (c.rem_euclid(m as i64)) as u128 };
    let mut acc = 0u128;
    let mut power = 1u128 % m;
    for (k, &(a, b)) in f.coeffs().iter().enumerate() {
        if k % 2 == 0 {
            if k > 0 {
                power = power * q2 % m;
            }
            acc = (acc + lift(a) * power) % m;
        } else {
            acc = (acc + lift(b) * s % m * power) % m;
        }
    }
    acc as u64
}

/// Classifies the odd prime `ℓ` for `q² = 2^(2n+1)`.
pub fn classify_prime(n: u32, ell: u64) -> Result<Classification> {
    if ell.is_multiple_of(2) {
        return Err(Error::EvenPrime(ell));
    }
    if n == 0 {
        return Err(Error::Invalid("n must be positive".into()));
    }
    if !is_prime(ell) {
        return Err(Error::Invalid(format!("{ell} is not prime")));
    }
    if ell == 3 {
        // 3 always divides q²+1 (and also φ12); the case is decided by ℓ alone.
        let v = factor_value(Factor::Phi4, n);
        return Ok(Classification {
            case: PrimeCase::Ell3,
            f: valuation(&v, 3),
            factor: Some(Factor::Phi4.name().to_string()),
        });
    }
    use Factor::*;
    let candidates = [
        (Phi1Tilde, PrimeCase::Linear),
        (Phi4, PrimeCase::Phi4),
        (Phi8p, PrimeCase::Phi8p),
        (Phi8pp, PrimeCase::Phi8m),
        (Phi12, PrimeCase::CyclicDefect),
        (Phi24p, PrimeCase::CyclicDefect),
        (Phi24pp, PrimeCase::CyclicDefect),
    ];
    let mut hits = Vec::new();
    for (fac, case) in candidates {
        if factor_value_mod(fac, n, ell) == 0 {
            hits.push((fac, case, valuation(&factor_value(fac, n), ell)));
        }
    }
    match hits.as_slice() {
        [] => Ok(Classification {
            case: PrimeCase::NotDividing,
            f: 0,
            factor: None,
        }),
        [(fac, case, f)] => Ok(Classification {
            case: *case,
            f: *f,
            factor: Some(fac.name().to_string()),
        }),
        _ => Err(Error::Inconsistent(format!(
            "{ell} divides more than one factor at n={n}"
        ))),
    }
}

/// Evaluates a polynomial expected to be a non-negative integer.
pub fn eval_integer(p: &QPoly, n: u32) -> Option<BigInt> {
    p.eval_at_q(n).to_integer()
}

/// `true` when every value of `p` at `n in 1..=5` is a positive integer.
pub fn positive_integer_valued(p: &QPoly) -> bool {
    (1..=5).all(|n| eval_integer(p, n).is_some_and(|v| v > BigInt::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::group_order;

    #[test]
    fn catalog_shape() {
        let cat = Catalog::get();
        assert_eq!(cat.unipotent.len(), 21);
        let mut sizes = [0usize; 7];
        for c in &cat.unipotent {
            sizes[c.family.unwrap() as usize - 1] += 1;
        }
        assert_eq!(sizes, [1, 2, 1, 13, 1, 2, 1]);
        let per_type: Vec<usize> = cat.series.iter().map(|t| t.chars.len()).collect();
        assert_eq!(
            per_type,
            [4, 2, 1, 3, 2, 1, 4, 1, 4, 1, 1, 1, 1, 1, 1, 1, 1]
        );
        assert_eq!(cat.series.first().unwrap().id, "g2");
        assert_eq!(cat.series.last().unwrap().id, "g18");
    }

    #[test]
    fn listed_records() {
        let c1 = unipotent_char(1).unwrap();
        assert_eq!(c1.degree, QPoly::one());
        assert_eq!(c1.series, CharSeries::Principal);
        let c2 = unipotent_char(2).unwrap();
        assert_eq!(
            c2.degree,
            parse_qpoly("q/r2*phi1*phi2*phi4^2*phi12").unwrap()
        );
        assert_eq!(c2.family, Some(2));
        assert_eq!(c2.series, CharSeries::B2a);
        assert_eq!(unipotent_char(21).unwrap().degree, QPoly::q().pow(24));
        assert!(matches!(unipotent_char(22), Err(Error::OutOfRange(22))));
        assert!(matches!(unipotent_char(0), Err(Error::OutOfRange(0))));
    }

    #[test]
    fn conjugate_pairs_are_an_involution_with_equal_degrees() {
        let cat = Catalog::get();
        let mut pairs = Vec::new();
        for c in &cat.unipotent {
            if let Some(p) = &c.conj_partner {
                let other = cat.unipotent_by_label(p).unwrap();
                assert_eq!(other.conj_partner.as_deref(), Some(c.label.as_str()));
                assert_eq!(other.degree, c.degree);
                pairs.push((c.label.clone(), p.clone()));
            }
        }
        let expect = [
            ("chi2", "chi3"),
            ("chi11", "chi12"),
            ("chi13", "chi14"),
            ("chi15", "chi16"),
            ("chi19", "chi20"),
        ];
        for (a, b) in expect {
            assert!(pairs.contains(&(a.to_string(), b.to_string())));
        }
        assert_eq!(pairs.len(), 10);
    }

    #[test]
    fn degrees_and_counts_are_integers() {
        let cat = Catalog::get();
        for c in &cat.unipotent {
            assert!(positive_integer_valued(&c.degree), "{}", c.label);
        }
        for t in &cat.series {
            for c in &t.chars {
                assert!(positive_integer_valued(&c.degree), "{}", c.label);
            }
            for n in 1..=5 {
                let v =
                    eval_integer(&t.count, n).unwrap_or_else(|| panic!("{} count at n={n}", t.id));
                assert!(v >= BigInt::zero());
            }
        }
    }

    #[test]
    fn sum_of_squares_is_group_order() {
        assert_eq!(family_sum_of_squares(1), QPoly::one());
        let s = sum_of_squares();
        assert!(
            (&s - &group_order()).is_zero(),
            "residual {}",
            &s - &group_order()
        );
        assert_eq!(s.eval_at_q(1), group_order().eval_at_q(1));
    }

    #[test]
    fn d0_values() {
        assert_eq!(d0(1), BigInt::from(64638));
        assert_eq!(d0(1), BigInt::from(2 * 7 * 81 * 57));
        assert_eq!(d0(2), BigInt::from(4i64 * 31 * 33 * 33 * 993));
        let chi2 = unipotent_char(2).unwrap().degree;
        for n in 1..=5 {
            assert_eq!(chi2.eval_at_q(n).to_integer().unwrap(), d0(n));
        }
    }

    #[test]
    fn d0_is_the_smallest_nontrivial_degree() {
        let cat = Catalog::get();
        for n in 1..=5 {
            let d = d0(n);
            let mut attained = Vec::new();
            let all = cat
                .unipotent
                .iter()
                .map(|c| (c.label.as_str(), &c.degree))
                .chain(
                    cat.series
                        .iter()
                        .flat_map(|t| t.chars.iter().map(|c| (c.label.as_str(), &c.degree))),
                );
            for (label, deg) in all {
                if label == "chi1" {
                    continue;
                }
                let v = eval_integer(deg, n).unwrap();
                assert!(v >= d, "{label} at n={n}");
                if v == d {
                    attained.push(label);
                }
            }
            assert_eq!(attained, ["chi2", "chi3"]);
        }
    }

    #[test]
    fn classification_examples() {
        let c = classify_prime(1, 13).unwrap();
        assert_eq!((c.case, c.f), (PrimeCase::Phi8p, 1));
        assert_eq!(c.to_string(), "Phi8p f=1");
        let c = classify_prime(1, 3).unwrap();
        assert_eq!((c.case, c.f), (PrimeCase::Ell3, 2));
        let c = classify_prime(1, 7).unwrap();
        assert_eq!((c.case, c.f), (PrimeCase::Linear, 1));
        assert_eq!(classify_prime(1, 5).unwrap().case, PrimeCase::Phi8m);
        assert_eq!(classify_prime(1, 37).unwrap().case, PrimeCase::CyclicDefect);
        assert_eq!(classify_prime(1, 11).unwrap().case, PrimeCase::NotDividing);
        assert!(matches!(classify_prime(1, 2), Err(Error::EvenPrime(2))));
    }

    #[test]
    fn integer_factor_values_match_polynomial_evaluation() {
        for f in Factor::ALL
            .into_iter()
            .filter(|f| !matches!(f, Factor::Phi1 | Factor::Phi2))
        {
            for n in 1..=6 {
                let v = factor_value(f, n);
                assert_eq!(
                    f.poly().eval_at_q(n).to_integer(),
                    Some(v.clone()),
                    "{f} n={n}"
                );
                for m in [3u64, 5, 7, 13, 97] {
                    let r = v.clone() % BigInt::from(m);
                    let r = if r < BigInt::zero() { r + m } else { r };
                    assert_eq!(BigInt::from(factor_value_mod(f, n, m)), r);
                }
            }
        }
    }

    #[test]
    fn classification_is_total() {
        // Every odd prime up to 10^6 lands in exactly one case.
        const LIMIT: usize = 1_000_000;
        let mut sieve = vec![true; LIMIT + 1];
        let mut primes = Vec::new();
        for p in 2..=LIMIT {
            if sieve[p] {
                if p > 2 {
                    primes.push(p as u64);
                }
                for k in (p * p..=LIMIT).step_by(p) {
                    sieve[k] = false;
                }
            }
        }
        for n in 1..=10 {
            for &p in &primes {
                classify_prime(n, p).unwrap();
            }
        }
    }

    #[test]
    fn case_names_roundtrip() {
        for c in PrimeCase::TABLED {
            assert_eq!(c.key().parse::<PrimeCase>().unwrap(), c);
            assert_eq!(c.name().parse::<PrimeCase>().unwrap(), c);
        }
    }
}
