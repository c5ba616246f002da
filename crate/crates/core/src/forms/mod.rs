//! Class numbers of quadratic fields from reduced binary quadratic forms.
//!
//! Real fields: the reduced indefinite forms of discriminant `Δ` split into
//! cycles under [`rho_step`]; the number of cycles is the narrow class
//! number. Imaginary fields: the class number is the number of reduced
//! positive-definite forms. All window comparisons against `√Δ` are done
//! with exact integer squares.

use std::collections::HashMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Roots;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::number::factor::{divisors_from_factors, factor_u64};
use crate::number::{field_from_radicand, is_fundamental_discriminant, FactorBudget};

/// Default cap on the number of reduced forms enumerated for one discriminant.
pub const DEFAULT_FORM_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BinaryQuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl BinaryQuadraticForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    pub fn discriminant(&self) -> i128 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        b * b - 4 * a * c
    }

    /// `0 < b < √Δ` and `√Δ − b < 2|a| < √Δ + b`, for `Δ > 0` nonsquare.
    pub fn is_reduced_indefinite(&self) -> bool {
        let disc = self.discriminant();
        if disc <= 0 || is_square_i128(disc) {
            return false;
        }
        let (a, b) = (self.a.unsigned_abs() as i128, self.b as i128);
        b > 0 && b * b < disc && disc < (2 * a + b).pow(2) && (2 * a - b <= 0 || (2 * a - b).pow(2) < disc)
    }

    /// `|b| ≤ a ≤ c`, with `b ≥ 0` when `|b| = a` or `a = c`, for `Δ < 0`.
    pub fn is_reduced_definite(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        self.discriminant() < 0
            && a > 0
            && b.abs() <= a
            && a <= c
            && (b >= 0 || (b.abs() != a && a != c))
    }
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

fn is_square_i128(n: i128) -> bool {
    n >= 0 && {
        let r = (n as u128).sqrt();
        r * r == n as u128
    }
}

fn check_discriminant(disc: i64) -> Result<()> {
    if disc == 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return Err(Error::BadDiscriminant(disc.into()));
    }
    Ok(())
}

fn check_real(disc: i64) -> Result<()> {
    check_discriminant(disc)?;
    if disc < 0 || is_square_i128(disc as i128) {
        return Err(Error::BadDiscriminant(disc.into()));
    }
    Ok(())
}

/// Result of a direct class-number computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassNumberResult {
    pub discriminant: i64,
    /// Number of rho-cycles (real fields only).
    pub narrow_h: Option<u64>,
    /// Wide class number; absent when only the narrow class number was asked for.
    pub h: Option<u64>,
    /// Norm of the fundamental unit (real fields only, when computed).
    pub unit_norm: Option<i8>,
    pub form_count: u64,
    pub elapsed: Duration,
}

impl ClassNumberResult {
    /// 3 | h, decided through the narrow class number for real fields
    /// (`h⁺ ∈ {h, 2h}`).
    pub fn divisible_by_3(&self) -> bool {
        match (self.narrow_h, self.h) {
            (Some(narrow), _) => narrow % 3 == 0,
            (None, Some(h)) => h % 3 == 0,
            (None, None) => false,
        }
    }
}

/// All reduced indefinite forms of discriminant `disc`, ordered by `(b, a)`.
pub fn enumerate_reduced_indefinite(disc: i64, cap: u64) -> Result<Vec<BinaryQuadraticForm>> {
    check_real(disc)?;
    let d = disc as i128;
    let root = (disc as u64).sqrt() as i64;
    let mut forms = Vec::new();
    let start = if disc % 2 == 0 { 2 } else { 1 };
    for b in (start..=root).step_by(2) {
        let n = ((d - (b as i128).pow(2)) / 4) as u64;
        let mut level = Vec::new();
        for t in divisors_from_factors(&factor_u64(n)) {
            let t = t as i128;
            let b = b as i128;
            let upper = 2 * t - b;
            if d < (2 * t + b).pow(2) && (upper <= 0 || upper * upper < d) {
                let a = t as i64;
                let c = (n / t as u64) as i64;
                level.push(BinaryQuadraticForm::new(-a, b as i64, c));
                level.push(BinaryQuadraticForm::new(a, b as i64, -c));
            }
        }
        level.sort_unstable_by_key(|f| f.a);
        forms.extend(level);
        if forms.len() as u64 > cap {
            return Err(Error::TooLarge { discriminant: disc, cap });
        }
    }
    Ok(forms)
}

/// One reduction step `(a, b, c) ↦ (c, b', a')` where `b' ≡ −b (mod 2|c|)` is
/// the unique residue in `(√Δ − 2|c|, √Δ)`.
pub fn rho_step(form: &BinaryQuadraticForm) -> Result<BinaryQuadraticForm> {
    if !form.is_reduced_indefinite() {
        return Err(Error::NotReduced { a: form.a, b: form.b, c: form.c });
    }
    let disc = form.discriminant();
    Ok(rho_unchecked(form, disc, (disc as u128).sqrt() as i128))
}

fn rho_unchecked(form: &BinaryQuadraticForm, disc: i128, root: i128) -> BinaryQuadraticForm {
    let c = form.c as i128;
    let modulus = 2 * c.abs();
    // window is [root + 1 − 2|c|, root]
    let b_next = root - (root + form.b as i128).rem_euclid(modulus);
    let a_next = (b_next * b_next - disc) / (4 * c);
    BinaryQuadraticForm::new(form.c, b_next as i64, a_next as i64)
}

/// Reduced forms partitioned into rho-cycles, each cycle starting at its
/// smallest member in `(b, a)` order.
pub fn rho_cycles(disc: i64, cap: u64) -> Result<Vec<Vec<BinaryQuadraticForm>>> {
    let forms = enumerate_reduced_indefinite(disc, cap)?;
    let index: HashMap<BinaryQuadraticForm, usize> =
        forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let d = disc as i128;
    let root = (disc as u128).sqrt() as i128;
    let mut seen = vec![false; forms.len()];
    let mut cycles = Vec::new();
    for start in 0..forms.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(forms[i]);
            let next = rho_unchecked(&forms[i], d, root);
            i = *index.get(&next).ok_or_else(|| {
                Error::Internal(format!("rho image {next} of {} is not reduced", forms[i]))
            })?;
        }
        if i != start {
            return Err(Error::Internal(format!(
                "rho orbit of {} does not close on itself",
                forms[start]
            )));
        }
        cycles.push(cycle);
    }
    Ok(cycles)
}

/// Narrow class number as the number of rho-cycles.
pub fn narrow_class_number(disc: i64, cap: u64) -> Result<ClassNumberResult> {
    let started = Instant::now();
    if !is_fundamental_discriminant(disc) {
        return Err(Error::NotFundamental(disc.into()));
    }
    let cycles = rho_cycles(disc, cap)?;
    Ok(ClassNumberResult {
        discriminant: disc,
        narrow_h: Some(cycles.len() as u64),
        h: None,
        unit_norm: None,
        form_count: cycles.iter().map(|c| c.len() as u64).sum(),
        elapsed: started.elapsed(),
    })
}

/// Narrow class number, unit norm and wide class number of a real field.
pub fn real_class_number(disc: i64, cap: u64) -> Result<ClassNumberResult> {
    let started = Instant::now();
    let mut result = narrow_class_number(disc, cap)?;
    let norm = fundamental_unit_norm(disc)?;
    let narrow = result.narrow_h.unwrap_or_default();
    let h = if norm == -1 {
        narrow
    } else if narrow % 2 == 0 {
        narrow / 2
    } else {
        return Err(Error::Internal(format!(
            "odd narrow class number {narrow} with unit norm +1 at Δ = {disc}"
        )));
    };
    result.h = Some(h);
    result.unit_norm = Some(norm);
    result.elapsed = started.elapsed();
    Ok(result)
}

/// Period length of the continued fraction of `(b₀ + √Δ)/2`, with `b₀` the
/// largest integer below `√Δ` of the parity of `Δ`.
pub fn continued_fraction_period(disc: i64) -> Result<u64> {
    check_real(disc)?;
    let d = disc as i128;
    let root = (disc as u128).sqrt() as i128;
    let p0 = if (root - d) % 2 == 0 { root } else { root - 1 };
    let q0 = 2i128;
    let (mut p, mut q) = (p0, q0);
    let mut period = 0u64;
    loop {
        let a = (p + root).div_euclid(q);
        p = a * q - p;
        q = (d - p * p) / q;
        period += 1;
        if p == p0 && q == q0 {
            return Ok(period);
        }
    }
}

/// Norm of the fundamental unit: `(−1)^period`.
pub fn fundamental_unit_norm(disc: i64) -> Result<i8> {
    let period = continued_fraction_period(disc)?;
    Ok(if period % 2 == 1 { -1 } else { 1 })
}

/// Reduced positive-definite forms of discriminant `disc < 0`, ordered by `(a, b)`.
pub fn enumerate_reduced_definite(disc: i64, cap: u64) -> Result<Vec<BinaryQuadraticForm>> {
    check_discriminant(disc)?;
    if disc > 0 {
        return Err(Error::BadDiscriminant(disc.into()));
    }
    let abs = disc.unsigned_abs();
    let limit = (abs / 3).sqrt();
    let mut forms = Vec::new();
    let start = if disc % 2 == 0 { 0 } else { 1 };
    for b in (start..=limit).step_by(2) {
        let n = (b * b + abs) / 4;
        for a in divisors_from_factors(&factor_u64(n)) {
            if a < b.max(1) {
                continue;
            }
            if a * a > n {
                break;
            }
            let c = n / a;
            let (a, bi, c) = (a as i64, b as i64, c as i64);
            forms.push(BinaryQuadraticForm::new(a, bi, c));
            if bi != 0 && bi != a && a != c {
                forms.push(BinaryQuadraticForm::new(a, -bi, c));
            }
        }
        if forms.len() as u64 > cap {
            return Err(Error::TooLarge { discriminant: disc, cap });
        }
    }
    forms.sort_unstable_by_key(|f| (f.a, f.b));
    Ok(forms)
}

pub fn imaginary_class_number(disc: i64, cap: u64) -> Result<ClassNumberResult> {
    let started = Instant::now();
    if disc >= 0 || !is_fundamental_discriminant(disc) {
        return Err(Error::NotFundamental(disc.into()));
    }
    let forms = enumerate_reduced_definite(disc, cap)?;
    Ok(ClassNumberResult {
        discriminant: disc,
        narrow_h: None,
        h: Some(forms.len() as u64),
        unit_norm: None,
        form_count: forms.len() as u64,
        elapsed: started.elapsed(),
    })
}

/// Reflection cross-check between `Q(√d)` and `Q(√−3d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScholzReport {
    pub d: BigInt,
    /// Squarefree kernel of `−3d`.
    pub imaginary_kernel: BigInt,
    pub imaginary: ClassNumberResult,
    pub holds: bool,
}

/// Computes `h(Q(√−3d))` and whether 3 divides it. The caller is expected to
/// have established `3 | h(Q(√d))`.
pub fn scholz_reflection(d: &BigInt, budget: &FactorBudget, cap: u64) -> Result<ScholzReport> {
    if d.sign() != num_bigint::Sign::Plus {
        return Err(Error::NonPositiveParameter(d.clone()));
    }
    let field = field_from_radicand(&(d * -3), budget)?;
    if !field.complete {
        return Err(Error::Internal(format!("could not factor −3·{d} within budget")));
    }
    let disc = field
        .discriminant_i64()
        .ok_or_else(|| Error::DiscriminantOutOfRange(field.fundamental_discriminant.clone()))?;
    let imaginary = imaginary_class_number(disc, cap)?;
    Ok(ScholzReport {
        d: d.clone(),
        imaginary_kernel: field.kernel,
        holds: imaginary.divisible_by_3(),
        imaginary,
    })
}

pub fn scholz_reflection_check(d: &BigInt, budget: &FactorBudget, cap: u64) -> Result<bool> {
    scholz_reflection(d, budget, cap).map(|r| r.holds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a: i64, b: i64, c: i64) -> BinaryQuadraticForm {
        BinaryQuadraticForm::new(a, b, c)
    }

    // Exhaustive scan over b < √Δ and every |a| < √Δ; independent of the
    // divisor-based enumeration.
    fn scan_reduced(disc: i64) -> Vec<BinaryQuadraticForm> {
        let mut out = Vec::new();
        let mut b = 1;
        while b * b < disc {
            for a in 1..=disc {
                if (2 * a - b) * (2 * a - b) >= disc && 2 * a > b {
                    break;
                }
                for a in [a, -a] {
                    let num = b * b - disc;
                    if num % (4 * a) == 0 {
                        let candidate = f(a, b, num / (4 * a));
                        if candidate.is_reduced_indefinite() {
                            out.push(candidate);
                        }
                    }
                }
            }
            b += 1;
        }
        out.sort_by_key(|f| (f.b, f.a));
        out
    }

    #[test]
    fn reduced_examples() {
        assert_eq!(enumerate_reduced_indefinite(5, 100).unwrap(), vec![f(-1, 1, 1), f(1, 1, -1)]);
        assert_eq!(scan_reduced(5), vec![f(-1, 1, 1), f(1, 1, -1)]);
        let twelve = enumerate_reduced_indefinite(12, 100).unwrap();
        assert_eq!(twelve, scan_reduced(12));
        assert_eq!(twelve, vec![f(-2, 2, 1), f(-1, 2, 2), f(1, 2, -2), f(2, 2, -1)]);
        assert_eq!(enumerate_reduced_indefinite(13, 100).unwrap(), vec![f(-1, 3, 1), f(1, 3, -1)]);
        assert!(enumerate_reduced_indefinite(16, 100).is_err());
        assert!(enumerate_reduced_indefinite(-4, 100).is_err());
        assert!(enumerate_reduced_indefinite(7, 100).is_err());
    }

    #[test]
    fn enumeration_matches_scan() {
        for disc in 2..3000i64 {
            if !matches!(disc % 4, 0 | 1) || is_square_i128(disc as i128) {
                continue;
            }
            assert_eq!(enumerate_reduced_indefinite(disc, u64::MAX).unwrap(), scan_reduced(disc), "Δ = {disc}");
        }
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho_step(&f(1, 1, -1)).unwrap(), f(-1, 1, 1));
        assert_eq!(rho_step(&f(-1, 1, 1)).unwrap(), f(1, 1, -1));
        assert_eq!(rho_step(&f(1, 2, -2)).unwrap(), f(-2, 2, 1));
        assert!(matches!(rho_step(&f(1, 5, 1)), Err(Error::NotReduced { .. })));
    }

    #[test]
    fn rho_is_a_permutation() {
        for disc in (5..4000i64).filter(|d| matches!(d % 4, 0 | 1) && !is_square_i128(*d as i128)) {
            let forms = enumerate_reduced_indefinite(disc, u64::MAX).unwrap();
            let mut preimages: HashMap<BinaryQuadraticForm, usize> = HashMap::new();
            for g in &forms {
                let image = rho_step(g).unwrap();
                assert!(image.is_reduced_indefinite());
                assert_eq!(image.discriminant(), disc as i128);
                *preimages.entry(image).or_default() += 1;
            }
            assert_eq!(preimages.len(), forms.len());
            assert!(preimages.values().all(|&n| n == 1));
        }
    }

    #[test]
    fn narrow_examples() {
        assert_eq!(narrow_class_number(5, 100).unwrap().narrow_h, Some(1));
        let twelve = narrow_class_number(12, 100).unwrap();
        assert_eq!((twelve.narrow_h, twelve.form_count), (Some(2), 4));
        assert_eq!(narrow_class_number(316, 1000).unwrap().narrow_h, Some(6));
        assert!(matches!(narrow_class_number(20, 100), Err(Error::NotFundamental(_))));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            narrow_class_number(10540, 3),
            Err(Error::TooLarge { discriminant: 10540, cap: 3 })
        ));
    }

    #[test]
    fn unit_norms() {
        assert_eq!(fundamental_unit_norm(8).unwrap(), -1);
        assert_eq!(fundamental_unit_norm(12).unwrap(), 1);
        assert_eq!(fundamental_unit_norm(5).unwrap(), -1);
        // Q(√79): unit 80 + 9√79, norm +1
        assert_eq!(fundamental_unit_norm(316).unwrap(), 1);
        let r = real_class_number(316, 1000).unwrap();
        assert_eq!((r.narrow_h, r.h, r.unit_norm), (Some(6), Some(3), Some(1)));
    }

    #[test]
    fn imaginary_examples() {
        assert_eq!(enumerate_reduced_definite(-3, 10).unwrap(), vec![f(1, 1, 1)]);
        assert_eq!(enumerate_reduced_definite(-4, 10).unwrap(), vec![f(1, 0, 1)]);
        assert_eq!(
            enumerate_reduced_definite(-23, 10).unwrap(),
            vec![f(1, 1, 6), f(2, -1, 3), f(2, 1, 3)]
        );
        assert_eq!(imaginary_class_number(-23, 10).unwrap().h, Some(3));
        assert!(imaginary_class_number(5, 10).is_err());
    }

    #[test]
    fn scholz_examples() {
        let budget = FactorBudget::default();
        for d in [79i64, 2635] {
            let report = scholz_reflection(&d.into(), &budget, DEFAULT_FORM_CAP).unwrap();
            assert!(report.holds, "d = {d}: h = {:?}", report.imaginary.h);
        }
        // 3 ∤ h⁺(844620) = 64, so nothing is forced on Q(√−70385)
        assert_eq!(narrow_class_number(844620, DEFAULT_FORM_CAP).unwrap().narrow_h, Some(64));
        let r = scholz_reflection(&211155.into(), &budget, DEFAULT_FORM_CAP).unwrap();
        assert_eq!(r.imaginary_kernel, BigInt::from(-70385));
        assert_eq!(r.imaginary.discriminant, -281540);
        assert_eq!(r.imaginary.h, Some(280));
        assert!(!r.holds);
        let r = scholz_reflection(&79.into(), &budget, DEFAULT_FORM_CAP).unwrap();
        assert_eq!(r.imaginary.discriminant, -948);
    }
}
