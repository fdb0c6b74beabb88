//! Exact arithmetic in Q(√2) and Q(√2)[q], the named factors of the group order.

pub mod mpoly;
pub mod parse;
pub mod qpoly;
pub mod qs2;

use std::fmt;

pub use mpoly::{Coeff, MPoly, Mono, NumPoly, SymPoly};
pub use parse::{parse_qpoly, parse_sym};
pub use qpoly::{q_value, LPoly, QPoly};
pub use qs2::{Rat, QS2};

use serde::{Deserialize, Serialize};

/// The cyclotomic-like factors of the order of 2F4(q²).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Factor {
    Phi1,
    Phi2,
    Phi4,
    Phi8p,
    Phi8pp,
    Phi12,
    Phi24p,
    Phi24pp,
    Phi1Tilde,
    Phi8,
    Phi24,
}

impl Factor {
    pub const ALL: [Factor; 11] = [
        Factor::Phi1,
        Factor::Phi2,
        Factor::Phi4,
        Factor::Phi8p,
        Factor::Phi8pp,
        Factor::Phi12,
        Factor::Phi24p,
        Factor::Phi24pp,
        Factor::Phi1Tilde,
        Factor::Phi8,
        Factor::Phi24,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Factor::Phi1 => "phi1",
            Factor::Phi2 => "phi2",
            Factor::Phi4 => "phi4",
            Factor::Phi8p => "phi8'",
            Factor::Phi8pp => "phi8''",
            Factor::Phi12 => "phi12",
            Factor::Phi24p => "phi24'",
            Factor::Phi24pp => "phi24''",
            Factor::Phi1Tilde => "phi1~",
            Factor::Phi8 => "phi8",
            Factor::Phi24 => "phi24",
        }
    }

    pub fn from_name(s: &str) -> Option<Factor> {
        Factor::ALL.into_iter().find(|f| f.name() == s)
    }

    /// Coefficients, lowest power first, as `(rational, √2-part)` pairs.
    pub(crate) fn coeffs(self) -> &'static [(i64, i64)] {
        match self {
            Factor::Phi1 => &[(-1, 0), (1, 0)],
            Factor::Phi2 => &[(1, 0), (1, 0)],
            Factor::Phi4 => &[(1, 0), (0, 0), (1, 0)],
            Factor::Phi8p => &[(1, 0), (0, 1), (1, 0)],
            Factor::Phi8pp => &[(1, 0), (0, -1), (1, 0)],
            Factor::Phi12 => &[(1, 0), (0, 0), (-1, 0), (0, 0), (1, 0)],
            Factor::Phi24p => &[(1, 0), (0, 1), (1, 0), (0, 1), (1, 0)],
            Factor::Phi24pp => &[(1, 0), (0, -1), (1, 0), (0, -1), (1, 0)],
            Factor::Phi1Tilde => &[(-1, 0), (0, 0), (1, 0)],
            Factor::Phi8 => &[(1, 0), (0, 0), (0, 0), (0, 0), (1, 0)],
            Factor::Phi24 => &[
                (1, 0),
                (0, 0),
                (0, 0),
                (0, 0),
                (-1, 0),
                (0, 0),
                (0, 0),
                (0, 0),
                (1, 0),
            ],
        }
    }

    pub fn poly(self) -> QPoly {
        QPoly::new(
            self.coeffs()
                .iter()
                .map(|&(a, b)| QS2::new(Rat::from_integer(a.into()), Rat::from_integer(b.into())))
                .collect(),
        )
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `q^24 φ1² φ2² φ4² φ8'² φ8''² φ12 φ24' φ24''`.
pub fn group_order() -> QPoly {
    use Factor::*;
    let parts = [
        (Phi1, 2),
        (Phi2, 2),
        (Phi4, 2),
        (Phi8p, 2),
        (Phi8pp, 2),
        (Phi12, 1),
        (Phi24p, 1),
        (Phi24pp, 1),
    ];
    parts
        .iter()
        .fold(QPoly::q().pow(24), |acc, (f, e)| &acc * &f.poly().pow(*e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn factor_identities() {
        use Factor::*;
        assert_eq!(&Phi8p.poly() * &Phi8pp.poly(), Phi8.poly());
        assert_eq!(&Phi24p.poly() * &Phi24pp.poly(), Phi24.poly());
        assert_eq!(&Phi1.poly() * &Phi2.poly(), Phi1Tilde.poly());
        assert_eq!(Phi8.poly().exact_div(&Phi8p.poly()).unwrap(), Phi8pp.poly());
        assert_eq!(Phi8p.poly().to_string(), "q^2+r2*q+1");
    }

    #[test]
    fn factor_values_at_n1() {
        assert_eq!(Factor::Phi8p.poly().eval_at_q(1), QS2::from_int(13));
        assert_eq!(Factor::Phi8pp.poly().eval_at_q(1), QS2::from_int(5));
    }

    #[test]
    fn order_shape() {
        let g = group_order();
        assert_eq!(g.degree(), Some(52));
        assert!(g.is_rational());
        // Independent oracle: multiply the evaluated factor values as integers.
        let expect = BigInt::from(2).pow(36) * 49 * 81 * 169 * 25 * 57 * 109 * 37;
        assert_eq!(g.eval_at_q(1).to_integer(), Some(expect));
        use Factor::*;
        let refactored = [
            (Phi1Tilde, 2),
            (Phi4, 2),
            (Phi8p, 2),
            (Phi8pp, 2),
            (Phi12, 1),
            (Phi24p, 1),
            (Phi24pp, 1),
        ]
        .iter()
        .fold(QPoly::q().pow(24), |acc, (f, e)| &acc * &f.poly().pow(*e));
        assert_eq!(refactored, g);
    }

    #[test]
    fn order_is_positive_integer() {
        for n in 1..=10 {
            let v = group_order().eval_at_q(n).to_integer().unwrap();
            assert!(v > BigInt::from(0));
        }
    }
}
