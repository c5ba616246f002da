//! Integer factorisation: trial division up to a bound, then Brent's variant
//! of Pollard rho under an iteration cap.
//!
//! Primality is decided by Miller–Rabin with a fixed set of prime bases. For
//! `n < 3.3·10²⁴` these bases are deterministic; above that the test is
//! probabilistic with a vanishingly small error rate.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};

/// Default trial-division bound.
pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;
/// Default total number of Pollard-rho iterations per factorisation.
pub const DEFAULT_RHO_ITERATIONS: u64 = 2_000_000;

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Previously completed decompositions, keyed by `|n|`: `(kernel, square_root_part)`.
pub type KnownDecompositions = HashMap<BigUint, (BigUint, BigUint)>;

/// Effort bound for factoring.
#[derive(Clone, Debug)]
pub struct FactorBudget {
    pub trial_bound: u64,
    pub rho_iterations: u64,
    /// Decompositions loaded from a cache; consulted before any factoring.
    pub known: Option<Arc<KnownDecompositions>>,
}

impl Default for FactorBudget {
    fn default() -> Self {
        Self {
            trial_bound: DEFAULT_TRIAL_BOUND,
            rho_iterations: DEFAULT_RHO_ITERATIONS,
            known: None,
        }
    }
}

impl FactorBudget {
    pub fn with_rho_iterations(rho_iterations: u64) -> Self {
        Self {
            rho_iterations,
            ..Self::default()
        }
    }
}

/// Prime factorisation of a positive integer, possibly with an unfactored
/// composite left over when the budget ran out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub primes: BTreeMap<BigUint, u32>,
    /// Product of the composite cofactors that rho could not split.
    pub residue: Option<BigUint>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.residue.is_none()
    }
}

fn sieve(bound: u64) -> Vec<u32> {
    let n = bound as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Primes `≤ bound`. Bounds up to the default are served from a shared table.
pub fn primes_up_to(bound: u64) -> std::borrow::Cow<'static, [u32]> {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    if bound <= DEFAULT_TRIAL_BOUND {
        let table = TABLE.get_or_init(|| sieve(DEFAULT_TRIAL_BOUND));
        let end = table.partition_point(|&p| (p as u64) <= bound);
        std::borrow::Cow::Borrowed(&table[..end])
    } else {
        std::borrow::Cow::Owned(sieve(bound))
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Miller–Rabin with fixed prime bases.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn rho_u64(n: u64, iterations_left: &mut u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let mut c = 1u64;
    while *iterations_left > 0 {
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let (mut x, mut y, mut q) = (2u64, 2u64, 1u64);
        let mut ys = y;
        let mut g = 1u64;
        let mut r = 1u64;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += steps;
                *iterations_left = iterations_left.saturating_sub(steps);
                if *iterations_left == 0 && g == 1 {
                    return None;
                }
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
        c += 1;
    }
    None
}

fn rho_big(n: &BigUint, iterations_left: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    let mut c = BigUint::one();
    let abs_diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    while *iterations_left > 0 {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = one.clone();
        let mut g = one.clone();
        let mut r = 1u64;
        const BATCH: u64 = 64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    q = (&q * abs_diff(&x, &y)) % n;
                }
                g = q.gcd(n);
                k += steps;
                *iterations_left = iterations_left.saturating_sub(steps);
                if *iterations_left == 0 && g.is_one() {
                    return None;
                }
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = abs_diff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
        c += 1u32;
    }
    None
}

fn split(n: &BigUint, iterations_left: &mut u64) -> Option<BigUint> {
    let root = n.sqrt();
    if &(&root * &root) == n {
        return Some(root);
    }
    match n.to_u64() {
        Some(small) => rho_u64(small, iterations_left).map(BigUint::from),
        None => rho_big(n, iterations_left),
    }
}

/// Factor a positive integer within `budget`.
///
/// Panics if `n` is zero.
pub fn factor(n: &BigUint, budget: &FactorBudget) -> Factorization {
    assert!(!n.is_zero(), "factor: zero input");
    let mut primes: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut rest = n.clone();

    let table = primes_up_to(budget.trial_bound);
    let mut small = rest.to_u64();
    let mut trial_exhausted = true;
    for &p in table.iter() {
        let p64 = p as u64;
        match small {
            Some(1) => break,
            Some(s) => {
                if p64 * p64 > s {
                    trial_exhausted = false;
                    break;
                }
                if s % p64 == 0 {
                    let mut s = s;
                    let mut e = 0;
                    while s % p64 == 0 {
                        s /= p64;
                        e += 1;
                    }
                    primes.insert(BigUint::from(p), e);
                    small = Some(s);
                    rest = BigUint::from(s);
                }
            }
            None => {
                if (&rest % p).is_zero() {
                    let mut e = 0;
                    while (&rest % p).is_zero() {
                        rest /= p;
                        e += 1;
                    }
                    primes.insert(BigUint::from(p), e);
                    small = rest.to_u64();
                }
            }
        }
    }

    if rest.is_one() {
        return Factorization { primes, residue: None };
    }
    // Every prime ≤ √rest was tried: rest is prime.
    let bound = BigUint::from(budget.trial_bound);
    if !trial_exhausted || (!table.is_empty() && &bound * &bound >= rest) {
        *primes.entry(rest).or_insert(0) += 1;
        return Factorization { primes, residue: None };
    }

    let mut residue: Option<BigUint> = None;
    let mut iterations_left = budget.rho_iterations;
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            *primes.entry(m).or_insert(0) += 1;
            continue;
        }
        match split(&m, &mut iterations_left) {
            Some(d) => {
                let other = &m / &d;
                stack.push(d);
                stack.push(other);
            }
            None => {
                residue = Some(match residue {
                    Some(r) => r * m,
                    None => m,
                });
            }
        }
    }
    Factorization { primes, residue }
}

/// Complete factorisation of a 64-bit integer, used by the form enumerators.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factor_u64: zero input");
    let mut out = Vec::new();
    let mut rest = n;
    let bound = (n as f64).sqrt() as u64 + 1;
    let table = primes_up_to(bound.min(DEFAULT_TRIAL_BOUND));
    for &p in table.iter() {
        let p = p as u64;
        if p * p > rest {
            break;
        }
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if rest > 1 {
        let covered = table.last().map_or(1, |&p| p as u64);
        if covered.saturating_mul(covered) >= rest || is_prime_u64(rest) {
            out.push((rest, 1));
        } else {
            let mut stack = vec![rest];
            let mut unlimited = u64::MAX;
            while let Some(m) = stack.pop() {
                if m == 1 {
                    continue;
                }
                if is_prime_u64(m) {
                    match out.iter_mut().find(|(p, _)| *p == m) {
                        Some(entry) => entry.1 += 1,
                        None => out.push((m, 1)),
                    }
                    continue;
                }
                let r = m.sqrt();
                let d = if r * r == m {
                    r
                } else {
                    rho_u64(m, &mut unlimited).expect("rho on 64-bit composite")
                };
                stack.push(d);
                stack.push(m / d);
            }
        }
    }
    out.sort_unstable();
    out
}

/// All positive divisors of `n` from its factorisation, ascending.
pub fn divisors_from_factors(factors: &[(u64, u32)]) -> Vec<u64> {
    let mut divisors = vec![1u64];
    for &(p, e) in factors {
        let len = divisors.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divisors.push(divisors[i] * pk);
            }
        }
    }
    divisors.sort_unstable();
    divisors
}
