//! The smallest degree of a nontrivial Brauer character: every Brauer
//! character other than `φ₂`, `φ₃` (whose degree is `d₀`) has degree larger
//! than `d₀`, checked per case and `n` from the symbolic degrees and the bounds
//! on the unknown decomposition numbers.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{LPoly, MPoly, Mono, SymPoly, QS2};
use crate::bounds::{l_power, multiplicities, BoundSet};
use crate::catalog::{classify_prime, d0, Catalog, PrimeCase};
use crate::decomp::{brauer_degrees, forward_degrees, series_blocks, DecompMatrix};
use crate::error::{Error, Result};
use crate::paper_data::{self, DecompEntry, ScalarTable};

// ---------------------------------------------------------------------------
// Symbolic degrees of all Brauer characters

/// A Brauer character and its degree as a polynomial in `q` and the unknowns.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicDegree {
    pub label: String,
    /// `unipotent` or the id of a non-unipotent decomposition table.
    pub block: String,
    pub degree: SymPoly,
}

/// Degrees of the unipotent Brauer characters and of one representative of
/// every non-unipotent block relevant to the case.
pub fn symbolic_degrees(case: PrimeCase) -> Result<Vec<SymbolicDegree>> {
    let cat = Catalog::get();
    let m = DecompMatrix::load(case)?;
    let mut out: Vec<SymbolicDegree> = brauer_degrees(&m)?
        .into_iter()
        .map(|(label, degree)| SymbolicDegree {
            label,
            block: "unipotent".into(),
            degree,
        })
        .collect();
    for (id, v) in series_blocks(case)? {
        if id == "dec-nilp" {
            let t = paper_data::series_decomposition(&id)?;
            for ty in &t.types {
                let st = cat.series_type(ty).ok_or_else(|| {
                    Error::Invalid(format!("series type {ty} missing from the catalog"))
                })?;
                for ch in &st.chars {
                    out.push(SymbolicDegree {
                        label: ch.label.replacen("chi", "phi", 1),
                        block: id.clone(),
                        degree: MPoly::constant(LPoly::from(ch.degree.clone())),
                    });
                }
            }
            continue;
        }
        let n = v.cols.len();
        let labels: Vec<String> = v.rows[..n].iter().map(|r| r.label.clone()).collect();
        let entries: Vec<Vec<DecompEntry>> = v.rows[..n]
            .iter()
            .map(|r| {
                r.cells
                    .iter()
                    .map(|c| c.entry().cloned().unwrap_or_default())
                    .collect()
            })
            .collect();
        let degs = forward_degrees(&labels, &entries, |l| cat.degree(l).cloned())?;
        for (label, degree) in v.cols.iter().zip(degs) {
            out.push(SymbolicDegree {
                label: label.clone(),
                block: id.clone(),
                degree,
            });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Rewrite rules for the leading terms of deg(φ₂₁)

/// `κ·u ≥ κ·U`, where `U` bounds `u` above through a projective character.
#[derive(Debug, Clone, PartialEq)]
pub struct Inequality {
    pub unknown: String,
    /// The negative coefficient `κ` of `u·q^power` in the degree.
    pub kappa: QS2,
    pub power: i32,
    pub projective: String,
    /// `κ·U`.
    pub rhs: SymPoly,
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*{} >= {}", self.kappa, self.unknown, self.rhs)
    }
}

/// The scalar products of a named projective character on the basic set of a
/// case, and its multiplicities.
fn projective_column(case: PrimeCase, name: &str) -> Result<(Vec<SymPoly>, Vec<SymPoly>)> {
    let m = DecompMatrix::load(case)?;
    let mut tables: Vec<ScalarTable> = vec![paper_data::scalar(case)?];
    if let Ok(t) = paper_data::additional_scalar(case) {
        tables.push(t);
    }
    let t = tables
        .iter()
        .find(|t| t.col_index(name).is_some())
        .ok_or_else(|| Error::Invalid(format!("no projective {name} in case {case}")))?;
    let v = m
        .basic_labels()
        .iter()
        .map(|l| {
            t.get(l, name)
                .map(|e| e.to_sym())
                .ok_or_else(|| Error::Invalid(format!("{} has no row {l}", t.id)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mult = multiplicities(&m.entries, &v);
    Ok((v, mult))
}

/// `U = (V_i − Σ_{k' ≠ k, i} d_{ik'} m_{k'}) / m_k` for the unknown `u = d_{ik}`,
/// dropping the non-negative multiplicity of the diagonal projective.
pub fn upper_expression(
    case: PrimeCase,
    unknown: &str,
    projective: &str,
    row: &str,
) -> Result<SymPoly> {
    let m = DecompMatrix::load(case)?;
    let i = m
        .row_index(row)
        .filter(|&i| i < m.basic_len)
        .ok_or_else(|| Error::NotInBasicSet(row.into()))?;
    let (v, mult) = projective_column(case, projective)?;
    let target = DecompEntry::from_sym(&MPoly::var(unknown)).expect("a single unknown");
    let k = (0..i)
        .find(|&k| m.entries[i][k] == target && mult[k].as_constant().is_some_and(|c| !c.is_zero()))
        .ok_or_else(|| {
            Error::Invalid(format!(
                "{unknown} has no known multiplicity in {projective}/{row}"
            ))
        })?;
    let mk = mult[k].as_constant().expect("checked");
    let mut acc = v[i].clone();
    for (kk, e) in m.entries[i].iter().enumerate() {
        if kk == k || kk == i || e.is_zero() {
            continue;
        }
        acc = acc.sub(&e.to_sym().mul(&mult[kk]));
    }
    if acc.vars().contains(unknown) {
        return Err(Error::Invalid(format!(
            "{unknown} occurs on both sides in {projective}/{row}"
        )));
    }
    let mut out = SymPoly::zero();
    for (mono, c) in acc.terms() {
        out.add_term(mono.clone(), c.exact_div(&mk)?);
    }
    Ok(out)
}

/// The rules used for deg(φ₂₁): the unknown, the power of `q` it is attached
/// to, and the projective character bounding it. Each rule's right-hand side
/// may contain the unknown of an earlier rule with a positive coefficient.
fn rewrite_rules(case: PrimeCase) -> &'static [(&'static str, i32, &'static str)] {
    match case {
        PrimeCase::Phi8p => &[
            ("u", 20, "Psi13'"),
            ("w", 22, "Psi18'"),
            ("t", 20, "Psi11"),
            ("r", 20, "Psi9"),
            ("v", 20, "Psi17"),
        ],
        PrimeCase::Phi8m => &[
            ("t", 20, "Psi11'"),
            ("w", 22, "Psi18'"),
            ("u", 20, "Psi13"),
            ("r", 20, "Psi8"),
            ("v", 20, "Psi17"),
        ],
        _ => &[],
    }
}

/// The inequalities replacing the leading negative terms of deg(φ₂₁),
/// derived from the projective characters. Empty for cases where deg(φ₂₁)
/// is bounded by plain sign substitution.
pub fn inequality_set(case: PrimeCase) -> Result<Vec<Inequality>> {
    let rules = rewrite_rules(case);
    if rules.is_empty() {
        return Ok(Vec::new());
    }
    let top = phi21_degree(case)?;
    rules
        .iter()
        .map(|&(u, power, proj)| {
            let kappa = coefficient_of(&top, u, power);
            if !kappa.is_negative() {
                return Err(Error::Invalid(format!(
                    "{u}·q^{power} does not have a negative coefficient"
                )));
            }
            let upper = upper_expression(case, u, proj, "chi21")?;
            Ok(Inequality {
                unknown: u.into(),
                kappa: kappa.clone(),
                power,
                projective: proj.into(),
                rhs: upper.map_coeffs(|c| c.scale(&kappa)),
            })
        })
        .collect()
}

/// The five inequalities for `−u/2`, `−w`, `−t/2`, `−r/12`, `−v/3` when
/// `ℓ | q² + √2q + 1`.
pub fn inequality_set_phi8p() -> Result<Vec<Inequality>> {
    inequality_set(PrimeCase::Phi8p)
}

fn phi21_degree(case: PrimeCase) -> Result<SymPoly> {
    let m = DecompMatrix::load(case)?;
    brauer_degrees(&m)?
        .into_iter()
        .find(|(l, _)| l == "phi21")
        .map(|(_, d)| d)
        .ok_or_else(|| Error::Invalid("no phi21".into()))
}

/// Coefficient of `u·q^power` in `p`.
fn coefficient_of(p: &SymPoly, u: &str, power: i32) -> QS2 {
    p.coeff(&vec![(u.to_string(), 1)]).coeff(power)
}

/// Replaces `κ·u·q^power` by `rhs·q^power` for each inequality.
pub fn apply_inequalities(p: &SymPoly, rules: &[Inequality]) -> SymPoly {
    let mut out = p.clone();
    for r in rules {
        let shift = LPoly::monomial(QS2::from_int(1), r.power);
        let term = SymPoly::var(&r.unknown).scale(&LPoly::monomial(r.kappa.clone(), r.power));
        out = out.sub(&term).add(&r.rhs.scale(&shift));
    }
    out
}

// ---------------------------------------------------------------------------
// Lower bounds by sign substitution

/// Integer interval of an unknown at a given `(n, ℓ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: i64,
    /// Symbolic upper bound; `None` if unknown.
    pub hi: Option<LPoly>,
}

/// One monomial of the substitution trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceTerm {
    pub monomial: String,
    pub coefficient: String,
    /// `lo` or `hi`.
    pub endpoint: &'static str,
    pub contribution: String,
}

/// Result of replacing every unknown by the endpoint of its interval that
/// makes each monomial smallest.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstitutionBound {
    pub value: QS2,
    /// The bound as a polynomial in `q` when the signs were taken eventually.
    pub symbolic: Option<LPoly>,
    pub trace: Vec<TraceTerm>,
}

fn mono_string(m: &Mono) -> String {
    if m.is_empty() {
        return "1".into();
    }
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

/// How the sign of each coefficient is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignMode {
    /// The sign of the coefficient evaluated at `n`, with integer endpoints.
    Concrete,
    /// The eventual sign of the coefficient as a polynomial in `q`, with
    /// symbolic endpoints; the signs must agree with those at `n`.
    Eventual,
}

/// Lower bound of `p` at `n` with every unknown in its interval. All unknowns
/// are non-negative, so a monomial is smallest at the lower endpoints when its
/// coefficient is positive and at the upper endpoints otherwise.
pub fn substitute_by_sign(
    p: &SymPoly,
    intervals: &BTreeMap<String, Interval>,
    n: u32,
    mode: SignMode,
) -> Result<SubstitutionBound> {
    let mut value = QS2::zero();
    let mut symbolic = LPoly::zero();
    let mut trace = Vec::new();
    for (mono, coeff) in p.terms() {
        let at_n = coeff.eval_at_q(n);
        let positive = match mode {
            SignMode::Concrete => at_n.signum() != Ordering::Less,
            SignMode::Eventual => {
                let s = coeff.eventual_sign();
                if s != Ordering::Equal && at_n.signum() != s {
                    return Err(Error::Invalid(format!(
                        "coefficient of {} changes sign before n={n}",
                        mono_string(mono)
                    )));
                }
                s != Ordering::Less
            }
        };
        let mut num = QS2::from_int(1);
        let mut sym = LPoly::one();
        for (v, e) in mono {
            let iv = intervals
                .get(v)
                .ok_or_else(|| Error::Invalid(format!("no interval for {v}")))?;
            let (x_num, x_sym) = if positive {
                (QS2::from_int(iv.lo), LPoly::constant(QS2::from_int(iv.lo)))
            } else {
                let hi = iv
                    .hi
                    .as_ref()
                    .ok_or_else(|| Error::Invalid(format!("{v} has no upper bound")))?;
                (QS2::from_bigint(hi.eval_at_q(n).floor()), hi.clone())
            };
            for _ in 0..*e {
                num = &num * &x_num;
                sym = &sym * &x_sym;
            }
        }
        let contribution = &at_n * &num;
        value = &value + &contribution;
        symbolic = &symbolic + &(coeff * &sym);
        trace.push(TraceTerm {
            monomial: mono_string(mono),
            coefficient: at_n.to_string(),
            endpoint: if mono.is_empty() {
                "-"
            } else if positive {
                "lo"
            } else {
                "hi"
            },
            contribution: contribution.to_string(),
        });
    }
    if mode == SignMode::Eventual {
        value = symbolic.eval_at_q(n);
    }
    Ok(SubstitutionBound {
        value,
        symbolic: (mode == SignMode::Eventual).then_some(symbolic),
        trace,
    })
}

/// Intervals of all unknowns of a case at `(n, ℓ)`.
pub fn intervals(set: &BoundSet, n: u32, ell: u64) -> Result<BTreeMap<String, Interval>> {
    let (_, l) = l_power(n, ell)?;
    Ok(set
        .bounds
        .iter()
        .map(|(u, b)| {
            (
                u.clone(),
                Interval {
                    lo: b.lo_at_l(n, &l),
                    hi: b.hi(),
                },
            )
        })
        .collect())
}

/// Replaces unknowns whose interval is a single integer at `n` by that value.
pub fn substitute_pins(p: &SymPoly, iv: &BTreeMap<String, Interval>, n: u32) -> SymPoly {
    let mut out = p.clone();
    for (u, i) in iv {
        if let Some(hi) = &i.hi {
            if hi.eval_at_q(n).floor() == BigInt::from(i.lo) {
                out = out.substitute(u, &MPoly::constant(LPoly::constant(QS2::from_int(i.lo))));
            }
        }
    }
    out
}

/// The pipeline used for one Brauer character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Exact,
    SignSubstitution,
    RewriteThenSign,
    /// `deg = C + c·L` with `L` an integer combination of unknowns; `deg ≥ 1`
    /// forces `L ≥ ⌈(1 − C)/c⌉`.
    Integrality,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeLowerBound {
    pub method: Method,
    pub bound: SubstitutionBound,
}

/// Lower bound for the degree of a Brauer character at `(n, ℓ)`. For `n = 1`
/// unknowns with a single possible value are substituted first and signs are
/// taken at `n`; for `n ≥ 2` signs are taken as polynomials in `q`.
pub fn lower_bound_deg(label: &str, case: PrimeCase, n: u32, ell: u64) -> Result<DegreeLowerBound> {
    let degs = symbolic_degrees(case)?;
    let d = degs
        .iter()
        .find(|d| d.label == label)
        .ok_or_else(|| Error::Invalid(format!("no Brauer character {label} in case {case}")))?;
    let set = BoundSet::cached(case)?;
    bound_one(d, case, set, n, ell)
}

fn bound_one(
    d: &SymbolicDegree,
    case: PrimeCase,
    set: &BoundSet,
    n: u32,
    ell: u64,
) -> Result<DegreeLowerBound> {
    let iv = intervals(set, n, ell)?;
    let mut p = d.degree.clone();
    let mut method = if p.vars().is_empty() {
        Method::Exact
    } else {
        Method::SignSubstitution
    };
    if !rewrite_rules(case).is_empty() && d.label == "phi21" && d.block == "unipotent" {
        p = apply_inequalities(&p, &inequality_set(case)?);
        method = Method::RewriteThenSign;
    }
    let bound = if n == 1 {
        substitute_by_sign(&substitute_pins(&p, &iv, n), &iv, n, SignMode::Concrete)?
    } else {
        match substitute_by_sign(&p, &iv, n, SignMode::Eventual) {
            Ok(b) => b,
            Err(Error::Invalid(_)) => substitute_by_sign(&p, &iv, n, SignMode::Concrete)?,
            Err(e) => return Err(e),
        }
    };
    if let Some(v) = integrality_bound(&p, n) {
        if v > bound.value {
            let trace = vec![TraceTerm {
                monomial: "deg>=1".into(),
                coefficient: "-".into(),
                endpoint: "-",
                contribution: v.to_string(),
            }];
            return Ok(DegreeLowerBound {
                method: Method::Integrality,
                bound: SubstitutionBound {
                    value: v,
                    symbolic: None,
                    trace,
                },
            });
        }
    }
    Ok(DegreeLowerBound { method, bound })
}

/// Lower bound at `n` for a degree of the form `C + c·L`, where `c > 0` and
/// `L` has integer coefficients, from the fact that a degree is at least 1.
pub fn integrality_bound(p: &SymPoly, n: u32) -> Option<QS2> {
    let at = p.at_q(n);
    let constant = at.constant_term();
    let mut scale: Option<QS2> = None;
    for (m, c) in at.terms() {
        if m.is_empty() {
            continue;
        }
        let c = if c.is_negative() { -c } else { c.clone() };
        match &scale {
            None => scale = Some(c),
            Some(s) if c.checked_div(s).ok()?.is_integer() => {}
            Some(s) if s.checked_div(&c).ok()?.is_integer() => scale = Some(c),
            Some(_) => return None,
        }
    }
    let c = scale?;
    if !at
        .terms()
        .all(|(m, k)| m.is_empty() || k.checked_div(&c).is_ok_and(|r| r.is_integer()))
    {
        return None;
    }
    let k = (&QS2::from_int(1) - &constant).checked_div(&c).ok()?.ceil();
    Some(&constant + &(&c * &QS2::from_bigint(k)))
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Status {
    /// The degree has no unknowns.
    Known,
    /// A proven lower bound.
    BoundedBelow,
    /// The trivial character, excluded from the comparison.
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeEntry {
    pub label: String,
    pub block: String,
    pub status: Status,
    pub method: Method,
    /// Exact degree, or lower bound, as a string.
    pub value: String,
    /// `equals`, `exceeds` or `inconclusive` with respect to `d₀`.
    pub versus_d0: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Fails,
    /// Best effort for `ℓ = 3`: the listed characters could not be decided.
    Partial {
        unresolved: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeReport {
    pub case: PrimeCase,
    pub n: u32,
    pub ell: u64,
    pub d0: String,
    pub entries: Vec<DegreeEntry>,
    pub attaining_d0: Vec<String>,
    pub verdict: Verdict,
}

impl DegreeReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn entry(&self, label: &str) -> Option<&DegreeEntry> {
        self.entries
            .iter()
            .find(|e| e.label == label && e.block == "unipotent")
    }
}

/// Checks that `d₀` is attained exactly by `φ₂`, `φ₃` and exceeded by every
/// other Brauer character, at `(n, ℓ)`.
pub fn verify_theorem(case: PrimeCase, n: u32, ell: u64) -> Result<DegreeReport> {
    let class = classify_prime(n, ell)?;
    if class.case != case {
        return Err(Error::Invalid(format!(
            "l={ell} at n={n} is in case {}, not {case}",
            class.case
        )));
    }
    if !case.has_tables() {
        return Err(Error::NotHeckeCase);
    }
    let target = QS2::from_bigint(d0(n));
    let set = BoundSet::cached(case)?;
    let mut entries = Vec::new();
    let mut attaining = Vec::new();
    let mut unresolved = Vec::new();
    for d in symbolic_degrees(case)? {
        let lb = bound_one(&d, case, set, n, ell)?;
        let cmp = (&lb.bound.value - &target).signum();
        let status = if d.label == "phi1" && d.block == "unipotent" {
            Status::Trivial
        } else if lb.method == Method::Exact {
            Status::Known
        } else {
            Status::BoundedBelow
        };
        let versus = match (cmp, &status) {
            (_, Status::Trivial) => "trivial",
            (Ordering::Greater, _) => "exceeds",
            (Ordering::Equal, Status::Known) => "equals",
            _ => "inconclusive",
        };
        if versus == "equals" {
            attaining.push(d.label.clone());
        }
        if versus == "inconclusive" {
            unresolved.push(d.label.clone());
        }
        let trace = if status == Status::BoundedBelow {
            lb.bound.trace
        } else {
            Vec::new()
        };
        entries.push(DegreeEntry {
            label: d.label,
            block: d.block,
            status,
            method: lb.method,
            value: lb.bound.value.to_string(),
            versus_d0: versus.into(),
            trace,
        });
    }
    let verdict = if case == PrimeCase::Ell3 {
        Verdict::Partial { unresolved }
    } else if unresolved.is_empty() && attaining == ["phi2", "phi3"] {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    Ok(DegreeReport {
        case,
        n,
        ell,
        d0: d0(n).to_string(),
        entries,
        attaining_d0: attaining,
        verdict,
    })
}

/// Smallest prime in `case` at `n`, searching below `limit`.
pub fn some_prime(case: PrimeCase, n: u32, limit: u64) -> Option<u64> {
    (3..limit)
        .filter(|&p| crate::catalog::is_prime(p))
        .find(|&p| classify_prime(n, p).map(|c| c.case) == Ok(case))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_sym;
    use proptest::prelude::*;

    fn sym(s: &str) -> SymPoly {
        parse_sym(s).unwrap()
    }

    /// Drops the `q`-dependence of a parsed expression whose coefficients are constants.
    fn numeric(s: &str) -> crate::algebra::NumPoly {
        sym(s).map_coeffs(|c| c.as_constant().expect("constant coefficient"))
    }

    #[test]
    fn leading_coefficients_of_phi21() {
        let top = phi21_degree(PrimeCase::Phi8p).unwrap();
        assert_eq!(top.q_coefficient(24), numeric("1"));
        assert_eq!(top.q_coefficient(23), numeric("-r2*x"));
        assert_eq!(top.q_coefficient(22), numeric("2*x*j - w"));
        let printed = "x*h/2 - 1/4 + w*a/12 - t/2 + w*b/2 - 2*x*j*c/3 + x*e/2 + x*d/6 - x*j*b \
                       + 2*x*i/3 - r/12 - 5*x*j/2 + x*g/2 + 5*w/4 + w*c/3 - u/2 - x*j*a/6 - s/6 - v/3";
        assert_eq!(top.q_coefficient(20), numeric(printed));
        assert!(top.terms().all(|(_, c)| c.high().is_none_or(|h| h <= 24)));
    }

    #[test]
    fn printed_inequalities() {
        let printed = [
            ("u", "-1/2", "r2*q*x/8 + x/4 - x*h/2 - q^2/24 - r2*q/8 - 1/6"),
            ("w", "-1", "u + 3*r2*q*x/4 + x/2 - x*h - 2*x*j + r2*x/q - q^2/4 - r2*q/4 - 1"),
            (
                "t",
                "-1/2",
                "w*q^2/8 + w*r2*q/8 - w*b/2 + x*r2*q^3/8 - x*e/2 - x*j*q^2/4 - x*j*r2*q/4 + x*j*b - x*g/2 - q^4/8",
            ),
            (
                "r",
                "-1/12",
                "w*q^2/144 + w*r2*q/48 + w/36 - w*a/12 + x*r2*q^3/144 - x*r2*q/72 - x*d/6 - x*j*q^2/72 \
                 - x*j*r2*q/24 - x*j/18 + x*j*a/6 - q^4/144 + 1/36",
            ),
            (
                "v",
                "-1/3",
                "w*q^2/9 - 2*w/9 - w*c/3 + x*r2*q^3/9 + x*r2*q/9 - 2*x*i/3 - 2*x*j*q^2/9 + 4*x*j/9 \
                 + 2*x*j*c/3 - q^4/9 - 2/9",
            ),
        ];
        let rules = inequality_set_phi8p().unwrap();
        assert_eq!(rules.len(), printed.len());
        for (rule, (u, kappa, rhs)) in rules.iter().zip(printed) {
            assert_eq!(rule.unknown, u);
            assert_eq!(
                MPoly::constant(LPoly::constant(rule.kappa.clone())),
                sym(kappa),
                "{u}"
            );
            assert_eq!(rule.rhs, sym(rhs), "{u}");
        }
    }

    #[test]
    fn rewriting_removes_the_leading_negative_terms() {
        for case in [PrimeCase::Phi8p, PrimeCase::Phi8m] {
            let top = phi21_degree(case).unwrap();
            let rules = inequality_set(case).unwrap();
            assert_eq!(rules.len(), 5, "{case}");
            let q = apply_inequalities(&top, &rules);
            for r in &rules {
                assert!(
                    !coefficient_of(&q, &r.unknown, r.power).is_negative(),
                    "{case} {}",
                    r.unknown
                );
            }
        }
    }

    #[test]
    fn case_two_bound_for_phi21() {
        let lb = lower_bound_deg("phi21", PrimeCase::Phi8p, 1, 13).unwrap();
        assert_eq!(lb.method, Method::RewriteThenSign);
        assert_eq!(lb.bound.value, QS2::frac(11769507827, 3));
        assert!(lb.bound.value > QS2::from_bigint(d0(1)));
        // h = j = 1 and x = 2 are pinned at q² = 8, so no monomial mentions them.
        assert!(lb
            .bound
            .trace
            .iter()
            .all(|t| !t.monomial.split('*').any(|v| ["h", "j", "x"].contains(&v))));
        let total = lb.bound.trace.iter().fold(QS2::zero(), |acc, t| {
            let c: SymPoly = sym(&t.contribution);
            &acc + &c.as_constant().unwrap().as_constant().unwrap()
        });
        assert_eq!(total, lb.bound.value);
    }

    #[test]
    fn phi18_bound_from_its_defining_row() {
        // deg(φ₁₈) = χ₁₈(1) − φ₁(1) − φ₂(1) − φ₃(1) − φ₅(1) − a·φ₉(1) − b·(φ₁₁(1) + φ₁₂(1)) − c·φ₁₇(1),
        // evaluated with a, b, c at their upper bounds.
        let n = 2;
        let case = PrimeCase::Phi8p;
        let cat = Catalog::get();
        let m = DecompMatrix::load(case).unwrap();
        let degs: BTreeMap<String, QS2> = brauer_degrees(&m)
            .unwrap()
            .into_iter()
            .filter_map(|(l, d)| d.as_constant().map(|c| (l, c.eval_at_q(n))))
            .collect();
        let set = BoundSet::compute(case).unwrap();
        let hi = |u: &str| set.get(u).unwrap().hi().unwrap().eval_at_q(n);
        let phi = |l: &str| degs[l].clone();
        let mut oracle = cat.degree("chi18").unwrap().eval_at_q(n);
        for l in ["phi1", "phi2", "phi3", "phi5"] {
            oracle -= &phi(l);
        }
        oracle -= &(&hi("a") * &phi("phi9"));
        oracle -= &(&hi("b") * &(&phi("phi11") + &phi("phi12")));
        oracle -= &(&hi("c") * &phi("phi17"));
        let ell = some_prime(case, n, 1000).unwrap();
        let lb = lower_bound_deg("phi18", case, n, ell).unwrap();
        assert_eq!(lb.bound.value, oracle);
        assert!(oracle > QS2::from_bigint(d0(n)));
    }

    #[test]
    fn phi2_is_exactly_d0() {
        for case in PrimeCase::TABLED {
            for n in 1..=3 {
                let Some(ell) = some_prime(case, n, 5000) else {
                    continue;
                };
                let lb = lower_bound_deg("phi2", case, n, ell).unwrap();
                assert_eq!(lb.method, Method::Exact);
                assert_eq!(lb.bound.value, QS2::from_bigint(d0(n)));
            }
        }
    }

    #[test]
    fn smallest_degree_holds_for_good_primes() {
        for case in PrimeCase::GOOD {
            for n in 1..=3 {
                let Some(ell) = some_prime(case, n, 5000) else {
                    continue;
                };
                let r = verify_theorem(case, n, ell).unwrap();
                assert!(r.holds(), "{case} n={n} l={ell}: {:?}", r.entries);
                assert_eq!(r.attaining_d0, ["phi2", "phi3"]);
                assert_eq!(r.d0, d0(n).to_string());
            }
        }
    }

    #[test]
    fn representative_reports() {
        let r = verify_theorem(PrimeCase::Phi8p, 1, 13).unwrap();
        assert!(r.holds());
        assert_eq!(r.entry("phi21").unwrap().value, "11769507827/3");
        assert_eq!(r.d0, "64638");
        let r = verify_theorem(PrimeCase::Linear, 1, 7).unwrap();
        assert!(r.holds());
        assert!(r
            .entries
            .iter()
            .filter(|e| e.block == "unipotent")
            .all(|e| e.method == Method::Exact));
        assert!(verify_theorem(PrimeCase::Linear, 1, 13).is_err());
    }

    #[test]
    fn ell3_is_partial() {
        for n in 1..=3 {
            let r = verify_theorem(PrimeCase::Ell3, n, 3).unwrap();
            assert_eq!(
                r.verdict,
                Verdict::Partial {
                    unresolved: vec!["phi18".into(), "phi21".into()]
                }
            );
            assert_eq!(r.entry("phi10").unwrap().method, Method::Integrality);
        }
    }

    #[test]
    fn integrality_bound_examples() {
        // 5 + 3·(x − y) ≥ 1 forces x − y ≥ −1, so the degree is at least 2.
        assert_eq!(
            integrality_bound(&sym("5 + 3*x - 3*y"), 1),
            Some(QS2::from_int(2))
        );
        // −4 + 6x ≥ 1 forces x ≥ 1.
        assert_eq!(
            integrality_bound(&sym("6*x - 4"), 1),
            Some(QS2::from_int(2))
        );
        assert_eq!(integrality_bound(&sym("2*x + 3*y"), 1), None);
        assert_eq!(integrality_bound(&sym("7"), 1), None);
    }

    fn phi18_setup() -> (SymPoly, BTreeMap<String, Interval>) {
        let case = PrimeCase::Phi8p;
        let d = symbolic_degrees(case)
            .unwrap()
            .into_iter()
            .find(|d| d.label == "phi18")
            .unwrap();
        let set = BoundSet::compute(case).unwrap();
        (d.degree, intervals(&set, 2, 41).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn widening_never_raises_the_bound(pick in 0usize..16, down in 0i64..3, up in 0i64..50) {
            let (p, iv) = phi18_setup();
            let base = substitute_by_sign(&p, &iv, 2, SignMode::Concrete).unwrap().value;
            let mut wide = iv.clone();
            let key = wide.keys().nth(pick % wide.len()).unwrap().clone();
            let e = wide.get_mut(&key).unwrap();
            e.lo = (e.lo - down).max(0);
            e.hi = e.hi.as_ref().map(|h| h + &LPoly::constant(QS2::from_int(up)));
            let widened = substitute_by_sign(&p, &wide, 2, SignMode::Concrete).unwrap().value;
            prop_assert!(widened <= base);
        }
    }
}
