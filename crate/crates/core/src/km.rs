//! Kishi–Miyake certificates.
//!
//! For coprime `u, v` with `F(Z) = Z³ − uvZ − u²` irreducible, a non-square
//! discriminant and one of the 3-adic side conditions (d.1)–(d.3), the
//! splitting field of `F` is an unramified cyclic cubic extension of
//! `Q(√disc F)`, so 3 divides that field's class number. This module checks
//! the hypotheses mechanically; the conclusion itself is trusted.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::number::{is_perfect_square, poly, squarefree_decompose, FactorBudget};

/// `Z³ + pZ + q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicDepressedCubic {
    pub p: BigInt,
    pub q: BigInt,
}

impl MonicDepressedCubic {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        Self { p: p.into(), q: q.into() }
    }

    /// Coefficients, lowest degree first.
    pub fn coefficients(&self) -> [BigInt; 4] {
        [self.q.clone(), self.p.clone(), BigInt::zero(), BigInt::one()]
    }

    pub fn eval(&self, z: &BigInt) -> BigInt {
        z * z * z + &self.p * z + &self.q
    }

    pub fn discriminant(&self) -> BigInt {
        cubic_discriminant(self)
    }
}

impl fmt::Display for MonicDepressedCubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^3")?;
        for (coeff, var) in [(&self.p, "Z"), (&self.q, "")] {
            if coeff.is_zero() {
                continue;
            }
            let sign = if coeff.is_negative() { '-' } else { '+' };
            let magnitude = coeff.abs();
            if var.is_empty() || !magnitude.is_one() {
                write!(f, " {sign} {magnitude}{var}")?;
            } else {
                write!(f, " {sign} {var}")?;
            }
        }
        Ok(())
    }
}

/// `Z³ − uvZ − u²`.
pub fn km_polynomial(u: &BigInt, v: &BigInt) -> MonicDepressedCubic {
    MonicDepressedCubic {
        p: -(u * v),
        q: -(u * u),
    }
}

/// `−4p³ − 27q²`.
pub fn cubic_discriminant(f: &MonicDepressedCubic) -> BigInt {
    let p3 = &f.p * &f.p * &f.p;
    let q2 = &f.q * &f.q;
    -(p3 * 4u32) - q2 * 27u32
}

/// Rational roots of a monic cubic. They are integers dividing `q`; they are
/// located by exact bisection so that `q` never needs to be factored.
pub fn cubic_rational_roots(f: &MonicDepressedCubic) -> Vec<BigInt> {
    poly::integer_roots(&f.coefficients())
}

/// First prime `p ≤ 13` modulo which the cubic has no root, if any. A monic
/// cubic without roots mod `p` is irreducible mod `p`, hence over `Q`; the
/// converse fails, so this can only confirm irreducibility.
pub fn irreducible_modulo_small_prime(f: &MonicDepressedCubic) -> Option<u32> {
    [2u32, 3, 5, 7, 11, 13].into_iter().find(|&p| {
        let modulus = BigInt::from(p);
        (0..p).all(|z| !f.eval(&BigInt::from(z)).mod_floor(&modulus).is_zero())
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DBranch {
    D1,
    D2,
    D3,
    None,
}

impl fmt::Display for DBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DBranch::D1 => "d1",
            DBranch::D2 => "d2",
            DBranch::D3 => "d3",
            DBranch::None => "none",
        })
    }
}

/// The hypothesis that failed first, in order (a), (b), (c), (d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KmCondition {
    #[serde(rename = "a")]
    Coprime,
    #[serde(rename = "b")]
    Irreducible,
    #[serde(rename = "c")]
    NonSquareDiscriminant,
    #[serde(rename = "d")]
    ThreeAdic,
}

impl fmt::Display for KmCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KmCondition::Coprime => "(a) gcd(u, v) = 1",
            KmCondition::Irreducible => "(b) F irreducible over Q",
            KmCondition::NonSquareDiscriminant => "(c) discriminant not a square",
            KmCondition::ThreeAdic => "(d) one of (d.1)-(d.3)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KmCertificate {
    pub u: BigInt,
    pub v: BigInt,
    pub polynomial: MonicDepressedCubic,
    pub cond_a: bool,
    pub cond_b: bool,
    pub cond_c: bool,
    pub d_branch: DBranch,
    /// `4u³v³ − 27u⁴`.
    pub discriminant: BigInt,
    /// The discriminant with the square factors found within budget removed.
    pub field_radicand: BigInt,
    /// Whether `field_radicand` is certainly squarefree.
    pub field_radicand_complete: bool,
    pub valid: bool,
    pub failed: Option<KmCondition>,
    pub notes: Vec<String>,
}

fn is_3_mod(x: &BigInt, residue: i64, modulus: i64) -> bool {
    x.mod_floor(&BigInt::from(modulus)) == BigInt::from(residue)
}

/// Which of (d.1)–(d.3) holds; they are mutually exclusive.
pub fn d_branch(u: &BigInt, v: &BigInt) -> DBranch {
    let three = BigInt::from(3);
    if !v.is_multiple_of(&three) {
        return DBranch::D1;
    }
    let uv = u * v;
    let near = |modulus: i64| {
        let m = BigInt::from(modulus);
        (u - v - 1u32).mod_floor(&m).is_zero() || (u - v + 1u32).mod_floor(&m).is_zero()
    };
    if is_3_mod(&uv, 3, 9) {
        if near(27) {
            DBranch::D3
        } else {
            DBranch::None
        }
    } else if near(9) {
        DBranch::D2
    } else {
        DBranch::None
    }
}

pub fn km_certificate(u: &BigInt, v: &BigInt, budget: &FactorBudget) -> KmCertificate {
    let polynomial = km_polynomial(u, v);
    let discriminant = cubic_discriminant(&polynomial);
    let mut notes = Vec::new();

    let cond_a = u.gcd(v).is_one();
    let cond_b = match irreducible_modulo_small_prime(&polynomial) {
        Some(p) => {
            notes.push(format!("irreducible modulo {p}"));
            true
        }
        None => cubic_rational_roots(&polynomial).is_empty(),
    };
    let cond_c = !is_perfect_square(&discriminant);
    let branch = d_branch(u, v);

    let (field_radicand, field_radicand_complete) = if discriminant.is_zero() {
        (BigInt::zero(), true)
    } else {
        match squarefree_decompose(&discriminant, budget) {
            Ok(d) => (d.kernel, d.complete),
            Err(_) => (discriminant.clone(), false),
        }
    };
    if cond_c && !field_radicand.is_zero() {
        match field_radicand.mod_floor(&BigInt::from(4)) {
            r if r == BigInt::from(2) => {
                notes.push("field radicand ≡ 2 (mod 4), so the discriminant is not a square".into())
            }
            r if r == BigInt::from(3) => {
                notes.push("field radicand ≡ 3 (mod 4), so the discriminant is not a square".into())
            }
            _ => {}
        }
    }
    if !field_radicand_complete {
        notes.push("field radicand not certified squarefree: factoring budget exhausted".into());
    }

    let failed = [
        (cond_a, KmCondition::Coprime),
        (cond_b, KmCondition::Irreducible),
        (cond_c, KmCondition::NonSquareDiscriminant),
        (branch != DBranch::None, KmCondition::ThreeAdic),
    ]
    .into_iter()
    .find(|(ok, _)| !ok)
    .map(|(_, c)| c);

    KmCertificate {
        u: u.clone(),
        v: v.clone(),
        polynomial,
        cond_a,
        cond_b,
        cond_c,
        d_branch: branch,
        discriminant,
        field_radicand,
        field_radicand_complete,
        valid: failed.is_none(),
        failed,
        notes,
    }
}
