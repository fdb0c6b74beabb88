//! Exact arithmetic in the real quadratic field Q(√2).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// `rat + irr·√2` with arbitrary-precision rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QS2 {
    rat: Rat,
    irr: Rat,
}

fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

impl QS2 {
    pub fn new(rat: Rat, irr: Rat) -> Self {
        QS2 { rat, irr }
    }

    pub fn from_int(n: i64) -> Self {
        QS2 {
            rat: rat_int(n),
            irr: Rat::zero(),
        }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        QS2 {
            rat: Rat::from_integer(n),
            irr: Rat::zero(),
        }
    }

    pub fn from_rat(r: Rat) -> Self {
        QS2 {
            rat: r,
            irr: Rat::zero(),
        }
    }

    /// `p/q` as a rational element.
    pub fn frac(p: i64, q: i64) -> Self {
        QS2::from_rat(Rat::new(BigInt::from(p), BigInt::from(q)))
    }

    /// The element √2.
    pub fn sqrt2() -> Self {
        QS2 {
            rat: Rat::zero(),
            irr: Rat::one(),
        }
    }

    pub fn rat(&self) -> &Rat {
        &self.rat
    }

    pub fn irr(&self) -> &Rat {
        &self.irr
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    /// Galois conjugate `rat − irr·√2`.
    pub fn conj(&self) -> Self {
        QS2 {
            rat: self.rat.clone(),
            irr: -self.irr.clone(),
        }
    }

    /// Field norm `rat² − 2·irr²`.
    pub fn norm(&self) -> Rat {
        &self.rat * &self.rat - rat_int(2) * &self.irr * &self.irr
    }

    pub fn signum(&self) -> Ordering {
        let sa = self.rat.cmp(&Rat::zero());
        let sb = self.irr.cmp(&Rat::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (a, b) if a == b => a,
            // Mixed signs: |rat| vs |irr|·√2 decides, via the norm.
            (Ordering::Greater, _) => self.norm().cmp(&Rat::zero()),
            (_, _) => Rat::zero().cmp(&self.norm()),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn checked_div(&self, other: &QS2) -> Result<QS2> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = other.norm();
        let num = self * &other.conj();
        Ok(QS2 {
            rat: num.rat / &n,
            irr: num.irr / n,
        })
    }

    pub fn inv(&self) -> Result<QS2> {
        QS2::one().checked_div(self)
    }

    pub fn pow(&self, e: i32) -> Result<QS2> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut out = QS2::one();
        for _ in 0..e.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.irr.is_zero() && self.rat.is_integer() {
            Some(self.rat.to_integer())
        } else {
            None
        }
    }

    pub fn is_integer(&self) -> bool {
        self.to_integer().is_some()
    }

    /// Exact floor of the real value.
    pub fn floor(&self) -> BigInt {
        if self.irr.is_zero() {
            return self.rat.floor().to_integer();
        }
        // Write the value as (A + B√2)/D with D > 0. Since √2 is irrational,
        // sqrt(2B²) lies strictly between S and S+1, which pins the floor.
        let d = self.rat.denom().lcm(self.irr.denom());
        let a = (&self.rat * Rat::from_integer(d.clone())).to_integer();
        let b = (&self.irr * Rat::from_integer(d.clone())).to_integer();
        let s = (BigInt::from(2) * &b * &b).sqrt();
        let t = if b.is_positive() {
            a + s
        } else {
            a - s - BigInt::one()
        };
        t.div_floor(&d)
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Approximate value, for display only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.rat.to_f64().unwrap_or(f64::NAN)
            + self.irr.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }
}

impl Zero for QS2 {
    fn zero() -> Self {
        QS2 {
            rat: Rat::zero(),
            irr: Rat::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }
}

impl One for QS2 {
    fn one() -> Self {
        QS2::from_int(1)
    }
}

impl PartialOrd for QS2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QS2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl<'a> Add<&'a QS2> for &'a QS2 {
    type Output = QS2;
    fn add(self, o: &QS2) -> QS2 {
        QS2 {
            rat: &self.rat + &o.rat,
            irr: &self.irr + &o.irr,
        }
    }
}

impl<'a> Sub<&'a QS2> for &'a QS2 {
    type Output = QS2;
    fn sub(self, o: &QS2) -> QS2 {
        QS2 {
            rat: &self.rat - &o.rat,
            irr: &self.irr - &o.irr,
        }
    }
}

impl<'a> Mul<&'a QS2> for &'a QS2 {
    type Output = QS2;
    fn mul(self, o: &QS2) -> QS2 {
        QS2 {
            rat: &self.rat * &o.rat + rat_int(2) * &self.irr * &o.irr,
            irr: &self.rat * &o.irr + &self.irr * &o.rat,
        }
    }
}

impl Neg for &QS2 {
    type Output = QS2;
    fn neg(self) -> QS2 {
        QS2 {
            rat: -self.rat.clone(),
            irr: -self.irr.clone(),
        }
    }
}

impl Neg for QS2 {
    type Output = QS2;
    fn neg(self) -> QS2 {
        QS2 {
            rat: -self.rat,
            irr: -self.irr,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QS2> for QS2 {
            type Output = QS2;
            fn $m(self, o: QS2) -> QS2 {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a QS2> for QS2 {
            type Output = QS2;
            fn $m(self, o: &QS2) -> QS2 {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Panics on a zero divisor; use [`QS2::checked_div`] when that is possible.
impl Div<QS2> for QS2 {
    type Output = QS2;
    fn div(self, o: QS2) -> QS2 {
        self.checked_div(&o).expect("division by zero in Q(√2)")
    }
}

impl AddAssign<&QS2> for QS2 {
    fn add_assign(&mut self, o: &QS2) {
        self.rat += &o.rat;
        self.irr += &o.irr;
    }
}

impl SubAssign<&QS2> for QS2 {
    fn sub_assign(&mut self, o: &QS2) {
        self.rat -= &o.rat;
        self.irr -= &o.irr;
    }
}

impl MulAssign<&QS2> for QS2 {
    fn mul_assign(&mut self, o: &QS2) {
        *self = &*self * o;
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text: `3`, `-1/2`, `r2`, `3/4*r2`, `-1+2*r2`.
impl fmt::Display for QS2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let irr = if self.irr.is_zero() {
            None
        } else if self.irr.is_one() {
            Some("r2".to_string())
        } else if (-self.irr.clone()).is_one() {
            Some("-r2".to_string())
        } else {
            Some(format!("{}*r2", fmt_rat(&self.irr)))
        };
        match (self.rat.is_zero(), irr) {
            (true, None) => write!(f, "0"),
            (false, None) => write!(f, "{}", fmt_rat(&self.rat)),
            (true, Some(i)) => write!(f, "{i}"),
            (false, Some(i)) => {
                if i.starts_with('-') {
                    write!(f, "{}{}", fmt_rat(&self.rat), i)
                } else {
                    write!(f, "{}+{}", fmt_rat(&self.rat), i)
                }
            }
        }
    }
}

impl fmt::Debug for QS2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QS2({self})")
    }
}
