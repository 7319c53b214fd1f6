//! Hodge-Tate weights of the graded pieces and symbolic graded characters of the
//! ordinary filtrations, as monomials in a fixed set of character tokens.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HtTable {
    pub weight: i64,
    pub three_step: Vec<Vec<i64>>,
    pub four_step: Vec<Vec<i64>>,
    pub fil2_negative: bool,
}

/// Weights per graded piece, Gr^0 first.
pub fn ht_weight_table(l: i64) -> HtTable {
    let three_step = vec![vec![l - 2], vec![-1, -1], vec![-l]];
    let four_step = vec![vec![l - 1], vec![l - 2, 0, 0], vec![-1, -1, 1 - l], vec![-l]];
    let fil2_negative = four_step[2..].iter().flatten().all(|&w| w < 0);
    HtTable { weight: l, three_step, four_step, fil2_negative }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Token {
    /// Unramified characters attached to the two primes above p.
    Psi1,
    Psi2,
    /// Components of the finite-order character at the two primes.
    PsiCirc1,
    PsiCirc2,
    /// Cyclotomic character of the real quadratic field.
    Eta,
    /// Cyclotomic character over Q.
    EtaQ,
    /// Determinant character of the elliptic form, equal to EtaQ * ThetaQ.
    EpsQ,
    /// Finite-order part of that determinant.
    ThetaQ,
    /// Unramified character on the unit-root quotient of the elliptic form.
    Delta,
}

impl Token {
    pub const ALL: [Token; 9] = [
        Token::Psi1,
        Token::Psi2,
        Token::PsiCirc1,
        Token::PsiCirc2,
        Token::Eta,
        Token::EtaQ,
        Token::EpsQ,
        Token::ThetaQ,
        Token::Delta,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Token::Psi1 => "Psi_p1",
            Token::Psi2 => "Psi_p2",
            Token::PsiCirc1 => "psi_p1",
            Token::PsiCirc2 => "psi_p2",
            Token::Eta => "eta",
            Token::EtaQ => "eta_Q",
            Token::EpsQ => "eps_Q",
            Token::ThetaQ => "theta_Q",
            Token::Delta => "delta",
        }
    }
}

/// A monomial in the tokens.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharExpr(BTreeMap<Token, i64>);

impl CharExpr {
    pub fn one() -> Self {
        CharExpr::default()
    }

    pub fn token(t: Token) -> Self {
        Self::one().times(t, 1)
    }

    pub fn from_pairs(pairs: &[(Token, i64)]) -> Self {
        pairs.iter().fold(Self::one(), |acc, &(t, e)| acc.times(t, e))
    }

    pub fn times(mut self, t: Token, e: i64) -> Self {
        let v = self.0.entry(t).or_insert(0);
        *v += e;
        if *v == 0 {
            self.0.remove(&t);
        }
        self
    }

    pub fn mul(&self, o: &CharExpr) -> CharExpr {
        o.0.iter().fold(self.clone(), |acc, (&t, &e)| acc.times(t, e))
    }

    pub fn pow(&self, n: i64) -> CharExpr {
        CharExpr(self.0.iter().map(|(&t, &e)| (t, e * n)).filter(|(_, e)| *e != 0).collect())
    }

    pub fn inverse(&self) -> CharExpr {
        self.pow(-1)
    }

    pub fn exponent(&self, t: Token) -> i64 {
        self.0.get(&t).copied().unwrap_or(0)
    }

    /// Rewrite EpsQ as EtaQ * ThetaQ.
    pub fn normalize(&self) -> CharExpr {
        let e = self.exponent(Token::EpsQ);
        self.clone().times(Token::EpsQ, -e).times(Token::EtaQ, e).times(Token::ThetaQ, e)
    }

    pub fn equivalent(&self, o: &CharExpr) -> bool {
        self.normalize() == o.normalize()
    }

    /// Value at Frobenius given values of the tokens; None if a token is
    /// missing or a zero value is raised to a negative power.
    pub fn evaluate(&self, values: &BTreeMap<Token, BigRational>) -> Option<BigRational> {
        let mut acc = BigRational::one();
        for (t, &e) in &self.0 {
            let v = values.get(t)?;
            if v.is_zero() && e < 0 {
                return None;
            }
            let pe = num_traits::pow(v.clone(), e.unsigned_abs() as usize);
            acc = if e >= 0 { acc * pe } else { acc / pe };
        }
        Some(acc)
    }
}

impl fmt::Display for CharExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(t, &e)| if e == 1 { t.name().to_string() } else { format!("{}^{}", t.name(), e) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

use Token::*;

fn m(p: &[(Token, i64)]) -> CharExpr {
    CharExpr::from_pairs(p)
}

/// Graded pieces (each a list of one-dimensional summands) of the three-step
/// filtration on the Asai representation.
pub fn asai_filtration() -> Vec<Vec<CharExpr>> {
    vec![
        vec![m(&[(Psi1, 1), (Psi2, 1)])],
        vec![
            m(&[(Psi1, -1), (Psi2, 1), (PsiCirc1, -1), (Eta, 1), (EtaQ, 1)]),
            m(&[(Psi1, 1), (Psi2, -1), (PsiCirc2, -1), (Eta, 1), (EtaQ, 1)]),
        ],
        vec![m(&[(Psi1, -1), (Psi2, -1), (PsiCirc1, -1), (PsiCirc2, -1), (Eta, 2), (EtaQ, 2)])],
    ]
}

/// The two-step filtration on the elliptic representation.
pub fn elliptic_filtration() -> Vec<Vec<CharExpr>> {
    vec![vec![m(&[(Delta, 1)])], vec![m(&[(Delta, -1), (EtaQ, 1), (ThetaQ, 1), (PsiCirc1, 1), (PsiCirc2, 1)])]]
}

/// Determinant of the Asai representation.
pub fn asai_det() -> CharExpr {
    m(&[(PsiCirc1, -1), (PsiCirc2, -1), (Eta, 2), (EtaQ, 2)])
}

/// Twist applied to the Asai representation before tensoring with the elliptic one.
pub fn asai_twist() -> CharExpr {
    m(&[(Eta, -1), (EtaQ, -1)])
}

/// Four-step filtration on the twisted tensor product, computed as the tensor
/// product of the two filtrations.
pub fn product_filtration() -> Vec<Vec<CharExpr>> {
    let a = asai_filtration();
    let e = elliptic_filtration();
    let tw = asai_twist();
    let mut out: Vec<Vec<CharExpr>> = vec![Vec::new(); a.len() + e.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, ej) in e.iter().enumerate() {
            for x in ai {
                for y in ej {
                    out[i + j].push(x.mul(&tw).mul(y));
                }
            }
        }
    }
    out
}

/// The same pieces written in the closed form used for the Fil^2 summand.
pub fn product_filtration_closed_form() -> Vec<Vec<CharExpr>> {
    let psi = m(&[(Psi1, 1), (Psi2, 1)]);
    let ratio = m(&[(Psi1, 1), (Psi2, -1)]);
    let circ = m(&[(PsiCirc1, 1), (PsiCirc2, 1)]);
    let d = m(&[(Delta, 1)]);
    vec![
        vec![psi.mul(&d).mul(&m(&[(Eta, -1), (EtaQ, -1)]))],
        vec![
            psi.mul(&d.inverse()).mul(&m(&[(Eta, -1), (ThetaQ, 1)])).mul(&circ),
            ratio.inverse().mul(&d).mul(&m(&[(PsiCirc1, -1)])),
            ratio.mul(&d).mul(&m(&[(PsiCirc2, -1)])),
        ],
        vec![
            ratio.inverse().mul(&d.inverse()).mul(&m(&[(PsiCirc2, 1), (EpsQ, 1)])),
            ratio.mul(&d.inverse()).mul(&m(&[(PsiCirc1, 1), (EpsQ, 1)])),
            fil2_summand(),
        ],
        vec![psi.inverse().mul(&d.inverse()).mul(&m(&[(Eta, 1), (EtaQ, 2), (ThetaQ, 1)]))],
    ]
}

/// The distinguished summand of Gr^2: Psi^-1 delta eta eta_Q psi_circ^-1.
pub fn fil2_summand() -> CharExpr {
    m(&[(Psi1, -1), (Psi2, -1), (Delta, 1), (Eta, 1), (EtaQ, 1), (PsiCirc1, -1), (PsiCirc2, -1)])
}

pub fn product(pieces: &[Vec<CharExpr>]) -> CharExpr {
    pieces.iter().flatten().fold(CharExpr::one(), |acc, x| acc.mul(x))
}

/// Multiset equality of graded pieces up to the EpsQ relation.
pub fn same_filtration(a: &[Vec<CharExpr>], b: &[Vec<CharExpr>]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            let mut xs: Vec<CharExpr> = x.iter().map(CharExpr::normalize).collect();
            let mut ys: Vec<CharExpr> = y.iter().map(CharExpr::normalize).collect();
            xs.sort();
            ys.sort();
            xs == ys
        })
}
