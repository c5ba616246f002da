//! Integer utilities and quadratic-field bookkeeping shared by every other
//! module.

pub mod factor;
pub mod poly;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
pub use factor::FactorBudget;

/// `n = kernel · square_root_part²`, with `kernel` carrying the sign of `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub n: BigInt,
    pub kernel: BigInt,
    pub square_root_part: BigInt,
    /// `false` when an unfactored cofactor was folded into `kernel`.
    pub complete: bool,
}

pub fn squarefree_decompose(n: &BigInt, budget: &FactorBudget) -> Result<SquarefreeDecomposition> {
    if n.is_zero() {
        return Err(Error::Zero("n"));
    }
    let magnitude = n.magnitude();
    let sign = n.sign();

    if let Some((kernel, root)) = budget.known.as_ref().and_then(|k| k.get(magnitude)) {
        if &(kernel * root * root) == magnitude {
            return Ok(SquarefreeDecomposition {
                n: n.clone(),
                kernel: BigInt::from_biguint(sign, kernel.clone()),
                square_root_part: BigInt::from_biguint(Sign::Plus, root.clone()),
                complete: true,
            });
        }
    }

    let f = factor::factor(magnitude, budget);
    let mut kernel = BigUint::one();
    let mut root = BigUint::one();
    for (p, &e) in &f.primes {
        if e % 2 == 1 {
            kernel *= p;
        }
        root *= p.pow(e / 2);
    }
    let complete = match &f.residue {
        None => true,
        Some(residue) => {
            let r = residue.sqrt();
            if &(&r * &r) == residue {
                root *= r;
            } else {
                kernel *= residue;
            }
            false
        }
    };
    Ok(SquarefreeDecomposition {
        n: n.clone(),
        kernel: BigInt::from_biguint(sign, kernel),
        square_root_part: BigInt::from_biguint(Sign::Plus, root),
        complete,
    })
}

fn jacobi(mut a: BigInt, mut n: BigInt) -> i8 {
    // n odd, positive
    a = a.mod_floor(&n);
    let mut result = 1i8;
    let eight = BigInt::from(8);
    while !a.is_zero() {
        let twos = a.trailing_zeros().unwrap_or(0);
        if twos > 0 {
            a >>= twos;
            let r = (&n % &eight).to_u8().unwrap_or(0);
            if twos % 2 == 1 && (r == 3 || r == 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        let a4 = (&a % 4u32).to_u8().unwrap_or(0);
        let n4 = (&n % 4u32).to_u8().unwrap_or(0);
        if a4 == 3 && n4 == 3 {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Kronecker symbol `(a / n)`.
pub fn kronecker_symbol(a: &BigInt, n: &BigInt) -> i8 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut result = 1i8;
    let mut n = n.clone();
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    let twos = n.trailing_zeros().unwrap_or(0);
    if twos > 0 {
        if a.is_even() {
            return 0;
        }
        n >>= twos;
        let r = a.mod_floor(&BigInt::from(8)).to_u8().unwrap_or(0);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
    }
    result * jacobi(a.clone(), n)
}

pub fn kronecker_i64(a: i64, n: i64) -> i8 {
    kronecker_symbol(&BigInt::from(a), &BigInt::from(n))
}

/// Exact `k`-th root of `n` when one exists. Even roots of negative numbers
/// do not exist.
pub fn perfect_power_root(n: &BigInt, k: u32) -> Option<BigInt> {
    assert!(k >= 1, "root degree must be positive");
    if k % 2 == 0 && n.is_negative() {
        return None;
    }
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    perfect_power_root(n, 2).is_some()
}

/// Largest `e` with `pᵉ | n`.
pub fn p_adic_valuation(n: &BigInt, p: u64) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::Zero("n"));
    }
    if !factor::is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let mut m = n.magnitude().clone();
    let mut e = 0;
    while (&m % p).is_zero() {
        m /= p;
        e += 1;
    }
    Ok(e)
}

/// Valuation with `v_p(0) = ∞` represented as `None`.
pub(crate) fn valuation_or_infinite(n: &BigInt, p: u64) -> Option<u32> {
    p_adic_valuation(n, p).ok()
}

/// A quadratic field `Q(√radicand)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticField {
    #[serde(serialize_with = "crate::report::serialize_decimal")]
    pub radicand: BigInt,
    #[serde(serialize_with = "crate::report::serialize_decimal")]
    pub kernel: BigInt,
    #[serde(serialize_with = "crate::report::serialize_decimal")]
    pub square_root_part: BigInt,
    #[serde(serialize_with = "crate::report::serialize_decimal")]
    pub fundamental_discriminant: BigInt,
    pub is_real: bool,
    /// Whether the kernel is certainly squarefree.
    pub complete: bool,
}

impl QuadraticField {
    pub fn discriminant_i64(&self) -> Option<i64> {
        self.fundamental_discriminant.to_i64()
    }
}

/// Fundamental discriminant of a squarefree kernel: the kernel itself when it
/// is `≡ 1 (mod 4)`, otherwise four times it.
pub fn fundamental_discriminant_of_kernel(kernel: &BigInt) -> BigInt {
    if kernel.mod_floor(&BigInt::from(4)).is_one() {
        kernel.clone()
    } else {
        kernel * 4
    }
}

pub fn field_from_radicand(n: &BigInt, budget: &FactorBudget) -> Result<QuadraticField> {
    if n.is_zero() {
        return Err(Error::Zero("radicand"));
    }
    if is_perfect_square(n) {
        return Err(Error::SquareRadicand(n.clone()));
    }
    let decomposition = squarefree_decompose(n, budget)?;
    Ok(QuadraticField {
        radicand: n.clone(),
        fundamental_discriminant: fundamental_discriminant_of_kernel(&decomposition.kernel),
        is_real: decomposition.kernel.is_positive(),
        kernel: decomposition.kernel,
        square_root_part: decomposition.square_root_part,
        complete: decomposition.complete,
    })
}

/// Whether `disc` is the discriminant of a quadratic field (squarefree test
/// by complete factorisation of a 64-bit value).
pub fn is_fundamental_discriminant(disc: i64) -> bool {
    if disc == 0 || disc == 1 {
        return false;
    }
    let squarefree = |m: u64| m != 0 && factor::factor_u64(m).iter().all(|&(_, e)| e == 1);
    match disc.rem_euclid(4) {
        1 => squarefree(disc.unsigned_abs()),
        0 => {
            let m = disc / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}
