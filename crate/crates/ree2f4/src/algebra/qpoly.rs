//! Dense polynomials in `q` over Q(√2), and their Laurent extension.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::qs2::QS2;
use crate::error::{Error, Result};

/// `Σ coeffs[k]·q^k`, never carrying trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<QS2>,
}

/// The value of `q` for `q² = 2^(2n+1)`, i.e. `2ⁿ·√2`.
pub fn q_value(n: u32) -> QS2 {
    QS2::new(
        Zero::zero(),
        num_rational::BigRational::from_integer(BigInt::from(2).pow(n)),
    )
}

impl QPoly {
    pub fn new(mut coeffs: Vec<QS2>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(QS2::one())
    }

    pub fn constant(c: QS2) -> Self {
        QPoly::new(vec![c])
    }

    pub fn int(n: i64) -> Self {
        QPoly::constant(QS2::from_int(n))
    }

    /// `c·q^k`.
    pub fn monomial(c: QS2, k: usize) -> Self {
        let mut v = vec![QS2::zero(); k + 1];
        v[k] = c;
        QPoly::new(v)
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        QPoly::monomial(QS2::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> QS2 {
        self.coeffs.get(k).cloned().unwrap_or_else(QS2::zero)
    }

    pub fn coeffs(&self) -> &[QS2] {
        &self.coeffs
    }

    pub fn leading(&self) -> QS2 {
        self.coeffs.last().cloned().unwrap_or_else(QS2::zero)
    }

    /// The constant value, if the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<QS2> {
        match self.coeffs.len() {
            0 => Some(QS2::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &QS2) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: u32) -> QPoly {
        let mut out = QPoly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn eval(&self, x: &QS2) -> QS2 {
        let mut acc = QS2::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Substitutes `q := 2ⁿ√2`.
    pub fn eval_at_q(&self, n: u32) -> QS2 {
        self.eval(&q_value(n))
    }

    /// True when every coefficient has zero √2-part.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(QS2::is_rational)
    }

    pub fn div_rem(&self, d: &QPoly) -> Result<(QPoly, QPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![QS2::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem[rem.len() - 1].checked_div(&lead)?;
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &(&c * dc);
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Ok((QPoly::new(quot), QPoly::new(rem)))
    }

    /// Quotient of an exact division; a nonzero remainder is an error.
    pub fn exact_div(&self, d: &QPoly) -> Result<QPoly> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision(r.to_string()))
        }
    }

    /// Sign for large `q`: the sign of the leading coefficient.
    pub fn eventual_sign(&self) -> Ordering {
        self.leading().signum()
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![QS2::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += &(a * b);
            }
        }
        QPoly::new(v)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
owned_ops!(QPoly);
owned_ops!(LPoly);

/// Formats `c·q^k` terms highest power first, e.g. `q^2+r2*q+1`.
pub(crate) fn fmt_terms(f: &mut fmt::Formatter<'_>, terms: &[(i32, &QS2)]) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    let multi = terms.len() > 1;
    for (idx, (k, c)) in terms.iter().enumerate() {
        let mixed = !c.is_rational() && !c.rat().is_zero();
        let cs = if mixed && multi {
            format!("({c})")
        } else {
            c.to_string()
        };
        let t = if *k == 0 {
            cs
        } else {
            let var = if *k == 1 {
                "q".to_string()
            } else {
                format!("q^{k}")
            };
            if c.is_one() {
                var
            } else if (-(*c).clone()).is_one() {
                format!("-{var}")
            } else {
                format!("{cs}*{var}")
            }
        };
        if idx > 0 && !t.starts_with('-') {
            write!(f, "+")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i32, &QS2)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i32, c))
            .collect();
        fmt_terms(f, &terms)
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

/// `q^low · poly`, allowing negative powers of `q`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LPoly {
    low: i32,
    poly: QPoly,
}

impl LPoly {
    pub fn new(low: i32, poly: QPoly) -> Self {
        let mut out = LPoly { low, poly };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.poly.is_zero() {
            self.low = 0;
            return;
        }
        let z = self.poly.coeffs.iter().take_while(|c| c.is_zero()).count();
        if z > 0 {
            self.poly = QPoly::new(self.poly.coeffs[z..].to_vec());
            self.low += z as i32;
        }
    }

    pub fn zero() -> Self {
        LPoly::default()
    }

    pub fn one() -> Self {
        LPoly::from(QPoly::one())
    }

    pub fn constant(c: QS2) -> Self {
        LPoly::from(QPoly::constant(c))
    }

    /// `c·q^k` for any integer `k`.
    pub fn monomial(c: QS2, k: i32) -> Self {
        LPoly::new(k, QPoly::constant(c))
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn high(&self) -> Option<i32> {
        self.poly.degree().map(|d| self.low + d as i32)
    }

    pub fn coeff(&self, k: i32) -> QS2 {
        if k < self.low {
            QS2::zero()
        } else {
            self.poly.coeff((k - self.low) as usize)
        }
    }

    /// Nonzero `(power, coefficient)` pairs, highest power first.
    pub fn terms(&self) -> Vec<(i32, QS2)> {
        self.poly
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (self.low + k as i32, c.clone()))
            .collect()
    }

    pub fn as_constant(&self) -> Option<QS2> {
        if self.is_zero() {
            Some(QS2::zero())
        } else if self.low == 0 {
            self.poly.as_constant()
        } else {
            None
        }
    }

    /// The polynomial, if no negative powers occur.
    pub fn to_qpoly(&self) -> Option<QPoly> {
        if self.is_zero() {
            return Some(QPoly::zero());
        }
        if self.low < 0 {
            return None;
        }
        let mut v = vec![QS2::zero(); self.low as usize];
        v.extend(self.poly.coeffs.iter().cloned());
        Some(QPoly::new(v))
    }

    pub fn scale(&self, c: &QS2) -> LPoly {
        LPoly::new(self.low, self.poly.scale(c))
    }

    pub fn shift(&self, k: i32) -> LPoly {
        LPoly::new(self.low + k, self.poly.clone())
    }

    pub fn eval(&self, x: &QS2) -> Result<QS2> {
        Ok(&self.poly.eval(x) * &x.pow(self.low)?)
    }

    pub fn eval_at_q(&self, n: u32) -> QS2 {
        self.eval(&q_value(n)).expect("q is nonzero")
    }

    pub fn leading(&self) -> QS2 {
        self.poly.leading()
    }

    pub fn eventual_sign(&self) -> Ordering {
        self.poly.eventual_sign()
    }

    /// Division by a monomial `c·q^k` is always exact.
    pub fn div_monomial(&self, c: &QS2, k: i32) -> Result<LPoly> {
        let inv = c.inv()?;
        Ok(LPoly::new(self.low - k, self.poly.scale(&inv)))
    }

    /// If the polynomial is a single term `c·q^k`, returns `(c, k)`.
    pub fn as_monomial(&self) -> Option<(QS2, i32)> {
        let t = self.terms();
        if t.len() == 1 {
            Some((t[0].1.clone(), t[0].0))
        } else {
            None
        }
    }

    /// Exact division; monomial divisors may introduce negative powers.
    pub fn exact_div(&self, d: &LPoly) -> Result<LPoly> {
        if let Some((c, k)) = d.as_monomial() {
            return self.div_monomial(&c, k);
        }
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = self.poly.exact_div(&d.poly)?;
        Ok(LPoly::new(self.low - d.low, q))
    }
}

impl From<QPoly> for LPoly {
    fn from(p: QPoly) -> Self {
        LPoly::new(0, p)
    }
}

impl Add for &LPoly {
    type Output = LPoly;
    fn add(self, o: &LPoly) -> LPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let a = &QPoly::monomial(QS2::one(), (self.low - low) as usize) * &self.poly;
        let b = &QPoly::monomial(QS2::one(), (o.low - low) as usize) * &o.poly;
        LPoly::new(low, &a + &b)
    }
}

impl Sub for &LPoly {
    type Output = LPoly;
    fn sub(self, o: &LPoly) -> LPoly {
        self + &(-o)
    }
}

impl Mul for &LPoly {
    type Output = LPoly;
    fn mul(self, o: &LPoly) -> LPoly {
        LPoly::new(self.low + o.low, &self.poly * &o.poly)
    }
}

impl Neg for &LPoly {
    type Output = LPoly;
    fn neg(self) -> LPoly {
        LPoly {
            low: self.low,
            poly: -&self.poly,
        }
    }
}

impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.terms();
        let refs: Vec<(i32, &QS2)> = t.iter().map(|(k, c)| (*k, c)).collect();
        fmt_terms(f, &refs)
    }
}

impl fmt::Debug for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LPoly({self})")
    }
}
