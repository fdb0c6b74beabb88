//! Sparse multivariate polynomials in named unknowns.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use super::qpoly::{LPoly, QPoly};
use super::qs2::QS2;

/// Coefficient ring interface shared by [`QS2`], [`QPoly`] and [`LPoly`].
pub trait Coeff: Clone + PartialEq + fmt::Display {
    fn c_zero() -> Self;
    fn c_one() -> Self;
    fn c_is_zero(&self) -> bool;
    fn c_add(&self, o: &Self) -> Self;
    fn c_mul(&self, o: &Self) -> Self;
    fn c_neg(&self) -> Self;
    fn c_from_qs2(x: QS2) -> Self;
    /// Whether the printed form needs parentheses as a factor.
    fn c_is_compound(&self) -> bool;
}

impl Coeff for QS2 {
    fn c_zero() -> Self {
        QS2::zero()
    }
    fn c_one() -> Self {
        QS2::one()
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn c_add(&self, o: &Self) -> Self {
        self + o
    }
    fn c_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_from_qs2(x: QS2) -> Self {
        x
    }
    fn c_is_compound(&self) -> bool {
        !self.is_rational() && !self.rat().is_zero()
    }
}

impl Coeff for QPoly {
    fn c_zero() -> Self {
        QPoly::zero()
    }
    fn c_one() -> Self {
        QPoly::one()
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn c_add(&self, o: &Self) -> Self {
        self + o
    }
    fn c_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_from_qs2(x: QS2) -> Self {
        QPoly::constant(x)
    }
    fn c_is_compound(&self) -> bool {
        self.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
            || self.coeffs().iter().any(|c| c.c_is_compound())
    }
}

impl Coeff for LPoly {
    fn c_zero() -> Self {
        LPoly::zero()
    }
    fn c_one() -> Self {
        LPoly::one()
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn c_add(&self, o: &Self) -> Self {
        self + o
    }
    fn c_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_from_qs2(x: QS2) -> Self {
        LPoly::constant(x)
    }
    fn c_is_compound(&self) -> bool {
        let t = self.terms();
        t.len() > 1 || t.iter().any(|(_, c)| c.c_is_compound())
    }
}

/// A monomial: sorted `(unknown, exponent)` pairs with positive exponents.
pub type Mono = Vec<(String, u32)>;

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut m: BTreeMap<String, u32> = a.iter().cloned().collect();
    for (v, e) in b {
        *m.entry(v.clone()).or_insert(0) += e;
    }
    m.into_iter().collect()
}

pub fn mono_degree(m: &Mono) -> u32 {
    m.iter().map(|(_, e)| e).sum()
}

fn mono_string(m: &Mono) -> String {
    m.iter()
        .map(|(v, e)| {
            if *e == 1 {
                v.clone()
            } else {
                format!("{v}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// `Σ coeff·monomial`, keyed by sorted monomials; zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct MPoly<C: Coeff> {
    terms: BTreeMap<Mono, C>,
}

impl<C: Coeff> Default for MPoly<C> {
    fn default() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: Coeff> MPoly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(C::c_one())
    }

    pub fn var(name: &str) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![(name.to_string(), 1)], C::c_one());
        p
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Mono, C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: C) {
        if c.c_is_zero() {
            return;
        }
        let mut m = m;
        m.retain(|(_, e)| *e > 0);
        m.sort();
        let entry = self.terms.entry(m.clone()).or_insert_with(C::c_zero);
        *entry = entry.c_add(&c);
        if entry.c_is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::c_zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Vec::new())
    }

    /// The constant value if no unknown occurs.
    pub fn as_constant(&self) -> Option<C> {
        if self.terms.keys().all(|m| m.is_empty()) {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(mono_degree).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.c_neg()))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(mono_mul(ma, mb), ca.c_mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, x)| (m.clone(), x.c_mul(c))))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Replaces every occurrence of `var` by `value`.
    pub fn substitute(&self, var: &str, value: &Self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut rest = Vec::new();
            let mut e = 0;
            for (v, k) in m {
                if v == var {
                    e = *k;
                } else {
                    rest.push((v.clone(), *k));
                }
            }
            let mut t = Self::from_terms([(rest, c.clone())]);
            for _ in 0..e {
                t = t.mul(value);
            }
            out = out.add(&t);
        }
        out
    }

    pub fn substitute_all(&self, values: &BTreeMap<String, Self>) -> Self {
        let mut out = self.clone();
        for (v, val) in values {
            out = out.substitute(v, val);
        }
        out
    }

    /// Linear part: coefficient of each unknown in degree-one monomials.
    pub fn is_affine(&self) -> bool {
        self.total_degree() <= 1
    }

    pub fn linear_coeff(&self, var: &str) -> C {
        self.coeff(&vec![(var.to_string(), 1)])
    }
}

impl<C: Coeff> fmt::Display for MPoly<C> {
    /// Highest total degree first, each term as `coeff*monomial`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Mono> = self.terms.keys().collect();
        keys.sort_by(|a, b| mono_degree(b).cmp(&mono_degree(a)).then_with(|| a.cmp(b)));
        for (i, m) in keys.iter().enumerate() {
            let c = &self.terms[*m];
            let cs = c.to_string();
            let t = if m.is_empty() {
                if c.c_is_compound() && self.terms.len() > 1 {
                    format!("({cs})")
                } else {
                    cs
                }
            } else if c == &C::c_one() {
                mono_string(m)
            } else if c == &C::c_one().c_neg() {
                format!("-{}", mono_string(m))
            } else if c.c_is_compound() {
                format!("({cs})*{}", mono_string(m))
            } else {
                format!("{cs}*{}", mono_string(m))
            };
            if i > 0 && !t.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

/// Symbolic expressions over unknowns with Laurent coefficients in `q`.
pub type SymPoly = MPoly<LPoly>;
/// Expressions at a fixed `q`, coefficients in Q(√2).
pub type NumPoly = MPoly<QS2>;

impl SymPoly {
    /// Evaluates all coefficients at `q = 2ⁿ√2`.
    pub fn at_q(&self, n: u32) -> NumPoly {
        self.map_coeffs(|c| c.eval_at_q(n))
    }

    /// Regroups by power of `q`: the coefficient of `q^k` as a polynomial in the unknowns.
    pub fn q_coefficient(&self, k: i32) -> NumPoly {
        MPoly::from_terms(self.terms().map(|(m, c)| (m.clone(), c.coeff(k))))
    }
}
