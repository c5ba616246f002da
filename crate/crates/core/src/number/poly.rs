//! Exact root finding for integer polynomials.
//!
//! Coefficients are stored lowest degree first. Integer roots are located
//! without factoring anything: the real line is cut into pieces on which the
//! polynomial is monotone (using a recursively computed superset of the
//! integer parts of the derivative's real roots), and sign changes are
//! bisected over the integers. Rational roots reduce to integer roots of a
//! monic rescaling.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::factor::{factor, FactorBudget};

fn trim(coeffs: &[BigInt]) -> &[BigInt] {
    let mut end = coeffs.len();
    while end > 0 && coeffs[end - 1].is_zero() {
        end -= 1;
    }
    &coeffs[..end]
}

/// Horner evaluation at an integer.
pub fn eval(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Horner evaluation at a rational.
pub fn eval_rational(coeffs: &[BigInt], x: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
        acc * x + BigRational::from_integer(c.clone())
    })
}

pub fn derivative(coeffs: &[BigInt]) -> Vec<BigInt> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

// Every real root lies strictly inside (-R, R).
fn root_bound(coeffs: &[BigInt]) -> BigInt {
    coeffs
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_default()
        + 1
}

fn sign_at(coeffs: &[BigInt], x: &BigInt) -> Sign {
    eval(coeffs, x).sign()
}

/// A superset of `{⌊r⌋ : r real root}`, sorted.
fn floor_candidates(coeffs: &[BigInt]) -> Vec<BigInt> {
    let coeffs = trim(coeffs);
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Vec::new();
    }
    if degree == 1 {
        return vec![(-&coeffs[0]).div_floor(&coeffs[1])];
    }

    let critical = floor_candidates(&derivative(coeffs));
    let bound = root_bound(coeffs);
    let low = -&bound;

    let mut breaks: BTreeSet<BigInt> = BTreeSet::new();
    breaks.insert(low.clone());
    breaks.insert(bound.clone());
    for c in &critical {
        for x in [c.clone(), c + 1] {
            if x > low && x < bound {
                breaks.insert(x);
            }
        }
    }

    let mut out: BTreeSet<BigInt> = critical.iter().cloned().collect();
    let breaks: Vec<BigInt> = breaks.into_iter().collect();
    for pair in breaks.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        let (s_lo, s_hi) = (sign_at(coeffs, lo), sign_at(coeffs, hi));
        if s_lo == Sign::NoSign {
            out.insert(lo.clone());
        }
        if s_hi == Sign::NoSign {
            out.insert(hi.clone());
        }
        if s_lo == Sign::NoSign || s_hi == Sign::NoSign || s_lo == s_hi {
            continue;
        }
        // Monotone on [lo, hi] (or a unit interval): bisect the sign change.
        let (mut l, mut h) = (lo.clone(), hi.clone());
        while &h - &l > BigInt::one() {
            let mid: BigInt = (&l + &h).div_floor(&BigInt::from(2));
            match sign_at(coeffs, &mid) {
                Sign::NoSign => {
                    l = mid;
                    break;
                }
                s if s == s_lo => l = mid,
                _ => h = mid,
            }
        }
        out.insert(l);
    }
    out.into_iter().collect()
}

/// All integer roots, ascending and without multiplicity.
pub fn integer_roots(coeffs: &[BigInt]) -> Vec<BigInt> {
    let coeffs = trim(coeffs);
    if coeffs.len() < 2 {
        return Vec::new();
    }
    floor_candidates(coeffs)
        .into_iter()
        .filter(|x| eval(coeffs, x).is_zero())
        .collect()
}

/// All rational roots, ascending and without multiplicity.
///
/// With leading coefficient `a`, `x` is a root of `f` iff `z = a·x` is a root
/// of the monic integer polynomial `a^(n-1)·f(z/a)`.
pub fn rational_roots(coeffs: &[BigInt]) -> Vec<BigRational> {
    let coeffs = trim(coeffs);
    if coeffs.len() < 2 {
        return Vec::new();
    }
    let n = coeffs.len() - 1;
    let lead = coeffs[n].clone();
    let monic: Vec<BigInt> = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if i == n {
                BigInt::one()
            } else {
                c * num_traits::pow(lead.clone(), n - 1 - i)
            }
        })
        .collect();
    let mut roots: Vec<BigRational> = integer_roots(&monic)
        .into_iter()
        .map(|z| BigRational::new(z, lead.clone()))
        .collect();
    roots.sort();
    roots
}

fn positive_divisors(n: &BigUint, budget: &FactorBudget) -> Option<Vec<BigUint>> {
    let f = factor(n, budget);
    if !f.is_complete() {
        return None;
    }
    let mut divisors = vec![BigUint::one()];
    for (p, &e) in &f.primes {
        let len = divisors.len();
        let mut pk = BigUint::one();
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                let d = &divisors[i] * &pk;
                divisors.push(d);
            }
        }
    }
    divisors.sort();
    Some(divisors)
}

/// Outcome of the classical rational-root-theorem scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorScan {
    pub roots: Vec<BigRational>,
    /// Number of distinct candidates `±p/q` evaluated.
    pub candidates_tested: usize,
}

/// Rational roots by enumerating `±p/q` with `p | a₀`, `q | aₙ` (after
/// removing the root 0). Returns `None` when either coefficient cannot be
/// factored within `budget`.
pub fn rational_roots_by_divisors(coeffs: &[BigInt], budget: &FactorBudget) -> Option<DivisorScan> {
    let coeffs = trim(coeffs);
    if coeffs.len() < 2 {
        return Some(DivisorScan {
            roots: Vec::new(),
            candidates_tested: 0,
        });
    }
    let shift = coeffs.iter().take_while(|c| c.is_zero()).count();
    let reduced = &coeffs[shift..];
    let mut roots = BTreeSet::new();
    if shift > 0 {
        roots.insert(BigRational::zero());
    }
    let mut tested = 0usize;
    if reduced.len() >= 2 {
        let ps = positive_divisors(reduced[0].magnitude(), budget)?;
        let qs = positive_divisors(reduced[reduced.len() - 1].magnitude(), budget)?;
        let mut seen = BTreeSet::new();
        for q in &qs {
            for p in &ps {
                for sign in [Sign::Plus, Sign::Minus] {
                    let x = BigRational::new(
                        BigInt::from_biguint(sign, p.clone()),
                        BigInt::from_biguint(Sign::Plus, q.clone()),
                    );
                    if !seen.insert(x.clone()) {
                        continue;
                    }
                    tested += 1;
                    if eval_rational(reduced, &x).is_zero() {
                        roots.insert(x);
                    }
                }
            }
        }
    }
    Some(DivisorScan {
        roots: roots.into_iter().collect(),
        candidates_tested: tested,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn from_roots(roots: &[i64], extra: &[i64]) -> Vec<BigInt> {
        let mut p = poly(extra);
        for &r in roots {
            let mut next = vec![BigInt::zero(); p.len() + 1];
            for (i, c) in p.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            p = next;
        }
        p
    }

    #[test]
    fn simple_roots() {
        // (x - 1)(x + 2)(x - 7)
        assert_eq!(
            integer_roots(&from_roots(&[1, -2, 7], &[1])),
            poly(&[-2, 1, 7])
        );
        // x³ - x - 1 has no integer root
        assert!(integer_roots(&poly(&[-1, -1, 0, 1])).is_empty());
    }

    #[test]
    fn repeated_and_clustered_roots() {
        // (x - 5)² (x - 6)³ (x² + 1)
        let p = from_roots(&[5, 5, 6, 6, 6], &[1, 0, 1]);
        assert_eq!(integer_roots(&p), poly(&[5, 6]));
    }

    #[test]
    fn rational_roots_of_nonmonic() {
        // (3x - 2)(2x + 5) = 6x² + 11x - 10
        let roots = rational_roots(&poly(&[-10, 11, 6]));
        assert_eq!(
            roots,
            vec![
                BigRational::new((-5).into(), 2.into()),
                BigRational::new(2.into(), 3.into())
            ]
        );
    }

    #[test]
    fn divisor_scan_matches() {
        let p = poly(&[-10, 11, 6]);
        let scan = rational_roots_by_divisors(&p, &FactorBudget::default()).unwrap();
        assert_eq!(scan.roots, rational_roots(&p));
        // x⁴ + 12x (root 0 and x³ = -12)
        let q = poly(&[0, 12, 0, 0, 3]);
        let scan = rational_roots_by_divisors(&q, &FactorBudget::default()).unwrap();
        assert_eq!(scan.roots, vec![BigRational::zero()]);
    }

    proptest! {
        #[test]
        fn planted_roots_are_found(
            roots in prop::collection::vec(-10_000i64..10_000, 1..4),
            extra in prop::collection::vec(-50i64..50, 1..3),
        ) {
            prop_assume!(extra.last().copied().unwrap_or(0) != 0);
            let p = from_roots(&roots, &extra);
            let found = integer_roots(&p);
            for r in &roots {
                prop_assert!(found.contains(&BigInt::from(*r)));
            }
            for r in &found {
                prop_assert!(eval(&p, r).is_zero());
            }
            // agreement with the divisor scan when there is no zero root
            if !roots.contains(&0) {
                let scan = rational_roots_by_divisors(&p, &FactorBudget::default()).unwrap();
                prop_assert_eq!(scan.roots, rational_roots(&p));
            }
        }
    }
}
