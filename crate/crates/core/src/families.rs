//! The three parametric families of real quadratic fields with class number
//! divisible by 3, the quadruple assembly built on top of them, and an
//! empirical distinctness scan of squarefree kernels.
//!
//! | family | radicand | generator |
//! |---|---|---|
//! | A | `216000x³ + 457200x² + 322580x + 75866` | KM pair `(4, 3(180x + 127))` |
//! | B | `432y³ + 1080y² + 900y + 223` | KM pair `(2, 6y + 5)` |
//! | C | `40500k³ + 89100k² + 65340k + 16215` | `α = (9 + √m)/2`, `m = 13500k³ + 29700k² + 21780k + 5405` |

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{real_class_number, ClassNumberResult, DEFAULT_FORM_CAP};
use crate::kishi::{kishi_certificate, HalfIntegralElement, KishiCertificate};
use crate::km::{km_certificate, KmCertificate};
use crate::number::{field_from_radicand, squarefree_decompose, FactorBudget, SquarefreeDecomposition};

/// Default bound on the fundamental discriminant for direct class-number checks.
pub const DEFAULT_DIRECT_THRESHOLD: u64 = 1_000_000_000;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub budget: FactorBudget,
    pub form_cap: u64,
    /// Direct class numbers are computed only up to this fundamental discriminant.
    pub direct_threshold: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            budget: FactorBudget::default(),
            form_cap: DEFAULT_FORM_CAP,
            direct_threshold: DEFAULT_DIRECT_THRESHOLD,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FamilyId {
    A,
    B,
    C,
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyId::A => "A",
            FamilyId::B => "B",
            FamilyId::C => "C",
        })
    }
}

impl std::str::FromStr for FamilyId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(FamilyId::A),
            "B" | "b" => Ok(FamilyId::B),
            "C" | "c" => Ok(FamilyId::C),
            other => Err(format!("unknown family {other:?} (expected A, B or C)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Km(KmCertificate),
    Kishi(KishiCertificate),
}

impl Certificate {
    pub fn is_valid(&self) -> bool {
        match self {
            Certificate::Km(c) => c.valid,
            Certificate::Kishi(c) => c.valid,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    KmPair { u: BigInt, v: BigInt },
    Element(HalfIntegralElement),
}

/// Outcome of the attempt to compute a class number directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DirectCheck {
    Computed(ClassNumberResult),
    Skipped(String),
}

impl DirectCheck {
    pub fn result(&self) -> Option<&ClassNumberResult> {
        match self {
            DirectCheck::Computed(r) => Some(r),
            DirectCheck::Skipped(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyInstance {
    pub family: FamilyId,
    pub parameter: BigInt,
    pub radicand: BigInt,
    pub generator: Generator,
    pub certificate: Certificate,
    pub decomposition: SquarefreeDecomposition,
    pub direct: DirectCheck,
    pub notes: Vec<String>,
}

pub fn family_a_radicand(x: &BigInt) -> BigInt {
    let x2 = x * x;
    &x2 * x * 216000 + &x2 * 457200 + x * 322580 + 75866
}

pub fn family_b_radicand(y: &BigInt) -> BigInt {
    let y2 = y * y;
    &y2 * y * 432 + &y2 * 1080 + y * 900 + 223
}

pub fn family_c_radicand(k: &BigInt) -> BigInt {
    let k2 = k * k;
    &k2 * k * 40500 + &k2 * 89100 + k * 65340 + 16215
}

/// `m = −d` for family C: `13500k³ + 29700k² + 21780k + 5405`.
pub fn family_c_element_radicand(k: &BigInt) -> BigInt {
    let k2 = k * k;
    &k2 * k * 13500 + &k2 * 29700 + k * 21780 + 5405
}

pub fn family_a_pair(x: &BigInt) -> (BigInt, BigInt) {
    (BigInt::from(4), (x * 180 + 127) * 3)
}

pub fn family_b_pair(y: &BigInt) -> (BigInt, BigInt) {
    (BigInt::from(2), y * 6 + 5)
}

pub fn family_c_element(k: &BigInt) -> HalfIntegralElement {
    HalfIntegralElement::new(9, 1, family_c_element_radicand(k))
        .expect("family C element radicand is ≡ 1 (mod 4) and not a square")
}

fn positive(parameter: BigInt) -> Result<BigInt> {
    if parameter.is_positive() {
        Ok(parameter)
    } else {
        Err(Error::NonPositiveParameter(parameter))
    }
}

fn decomposition_or_raw(n: &BigInt, budget: &FactorBudget) -> SquarefreeDecomposition {
    squarefree_decompose(n, budget).unwrap_or_else(|_| SquarefreeDecomposition {
        n: n.clone(),
        kernel: n.clone(),
        square_root_part: BigInt::from(1),
        complete: false,
    })
}

/// Computes `h⁺` (and `h`) of `Q(√radicand)` when the fundamental
/// discriminant is known exactly and does not exceed the threshold.
pub fn direct_check(radicand: &BigInt, opts: &VerifyOptions) -> DirectCheck {
    let field = match field_from_radicand(radicand, &opts.budget) {
        Ok(f) => f,
        Err(e) => return DirectCheck::Skipped(e.to_string()),
    };
    if !field.complete {
        return DirectCheck::Skipped("squarefree kernel unknown: factoring budget exhausted".into());
    }
    let disc = &field.fundamental_discriminant;
    if disc > &BigInt::from(opts.direct_threshold) {
        return DirectCheck::Skipped(format!(
            "fundamental discriminant {disc} exceeds the direct-check threshold {}",
            opts.direct_threshold
        ));
    }
    let Some(disc) = disc.to_i64() else {
        return DirectCheck::Skipped(format!("fundamental discriminant {disc} out of range"));
    };
    match real_class_number(disc, opts.form_cap) {
        Ok(r) => DirectCheck::Computed(r),
        Err(e @ Error::TooLarge { .. }) => DirectCheck::Skipped(e.to_string()),
        Err(e) => DirectCheck::Skipped(format!("direct computation failed: {e}")),
    }
}

fn contradiction(what: &str, notes: &[String]) -> Error {
    Error::TheoremContradiction(format!("{what}: {}", notes.join("; ")))
}

/// Instance of family A at `x ≥ 1`.
pub fn family_a(x: impl Into<BigInt>, opts: &VerifyOptions) -> Result<FamilyInstance> {
    let x = positive(x.into())?;
    let radicand = family_a_radicand(&x);
    let (u, v) = family_a_pair(&x);
    let cert = km_certificate(&u, &v, &opts.budget);
    if !cert.valid || cert.d_branch != crate::km::DBranch::D3 {
        return Err(contradiction(
            &format!("family A certificate at x = {x} (failed {:?}, branch {})", cert.failed, cert.d_branch),
            &cert.notes,
        ));
    }
    let ratio_ok = cert.discriminant == &radicand * 186624;
    let mut notes = vec![
        "discriminant identity: disc F = 186624·radicand = 432²·radicand (the 12⁴·radicand form is off by a factor 9)".to_string(),
    ];
    if !ratio_ok {
        return Err(Error::Internal(format!("family A discriminant identity fails at x = {x}")));
    }
    notes.push("radicand ≡ 2 (mod 4): not a square".into());
    Ok(FamilyInstance {
        family: FamilyId::A,
        decomposition: decomposition_or_raw(&radicand, &opts.budget),
        direct: direct_check(&radicand, opts),
        parameter: x,
        radicand,
        generator: Generator::KmPair { u, v },
        certificate: Certificate::Km(cert),
        notes,
    })
}

/// Instance of family B at `y ≥ 1`.
pub fn family_b(y: impl Into<BigInt>, opts: &VerifyOptions) -> Result<FamilyInstance> {
    let y = positive(y.into())?;
    let radicand = family_b_radicand(&y);
    let (u, v) = family_b_pair(&y);
    let cert = km_certificate(&u, &v, &opts.budget);
    if !cert.valid || cert.d_branch != crate::km::DBranch::D1 {
        return Err(contradiction(
            &format!("family B certificate at y = {y} (failed {:?}, branch {})", cert.failed, cert.d_branch),
            &cert.notes,
        ));
    }
    if cert.discriminant != &radicand * 16 {
        return Err(Error::Internal(format!("family B discriminant identity fails at y = {y}")));
    }
    let notes = vec![
        "discriminant identity: disc F = 16·radicand".to_string(),
        "radicand ≡ 3 (mod 4): not a square (radicand ≡ 1 (mod 3), not 2)".to_string(),
    ];
    Ok(FamilyInstance {
        family: FamilyId::B,
        decomposition: decomposition_or_raw(&radicand, &opts.budget),
        direct: direct_check(&radicand, opts),
        parameter: y,
        radicand,
        generator: Generator::KmPair { u, v },
        certificate: Certificate::Km(cert),
        notes,
    })
}

/// Instance of family C at `k ≥ 1`.
pub fn family_c(k: impl Into<BigInt>, opts: &VerifyOptions) -> Result<FamilyInstance> {
    let k = positive(k.into())?;
    let radicand = family_c_radicand(&k);
    let element = family_c_element(&k);
    let cert = kishi_certificate(&element);
    if !cert.valid {
        return Err(contradiction(&format!("family C certificate at k = {k}"), &cert.notes));
    }
    if cert.target_radicand != radicand || cert.norm != -num_traits::pow(&k * 15 + 11, 3) {
        return Err(Error::Internal(format!("family C identities fail at k = {k}")));
    }
    let notes = vec![
        "radicand = −3d with d = −m; norm = −(15k + 11)³".to_string(),
        "d ≡ 1 (mod 3) (so 3 ∤ d); radicand ≡ 3 (mod 4): not a square".to_string(),
    ];
    Ok(FamilyInstance {
        family: FamilyId::C,
        decomposition: decomposition_or_raw(&radicand, &opts.budget),
        direct: direct_check(&radicand, opts),
        parameter: k,
        radicand,
        generator: Generator::Element(element),
        certificate: Certificate::Kishi(cert),
        notes,
    })
}

pub fn family_instance(family: FamilyId, parameter: impl Into<BigInt>, opts: &VerifyOptions) -> Result<FamilyInstance> {
    match family {
        FamilyId::A => family_a(parameter, opts),
        FamilyId::B => family_b(parameter, opts),
        FamilyId::C => family_c(parameter, opts),
    }
}

/// Instances for every parameter in `from..=to`, in ascending order.
pub fn family_range(family: FamilyId, from: u64, to: u64, opts: &VerifyOptions) -> Vec<Result<FamilyInstance>> {
    (from..=to)
        .into_par_iter()
        .map(|p| family_instance(family, p, opts))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadrupleComponent {
    /// Human-readable description, e.g. `"A(D)"`.
    pub label: &'static str,
    pub radicand: BigInt,
    /// Absent only for the base field of a quadruple at arbitrary `D`.
    pub certificate: Option<Certificate>,
    pub decomposition: SquarefreeDecomposition,
    pub direct: DirectCheck,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadrupleReport {
    /// Family C parameter when `D` came from family C.
    pub k: Option<BigInt>,
    pub d: BigInt,
    pub components: [QuadrupleComponent; 4],
    pub notes: Vec<String>,
}

impl QuadrupleReport {
    pub fn radicands(&self) -> [&BigInt; 4] {
        [0, 1, 2, 3].map(|i| &self.components[i].radicand)
    }

    /// Whether every component that carries a certificate has a valid one.
    pub fn certificates_valid(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.certificate.as_ref().is_none_or(Certificate::is_valid))
    }
}

fn component(label: &'static str, radicand: BigInt, certificate: Option<Certificate>, opts: &VerifyOptions) -> QuadrupleComponent {
    QuadrupleComponent {
        label,
        decomposition: decomposition_or_raw(&radicand, &opts.budget),
        direct: direct_check(&radicand, opts),
        radicand,
        certificate,
    }
}

fn upper_components(d: &BigInt, opts: &VerifyOptions) -> [QuadrupleComponent; 3] {
    let (ua, va) = family_a_pair(d);
    let (ub, vb) = family_b_pair(d);
    [
        component("A(D)", family_a_radicand(d), Some(Certificate::Km(km_certificate(&ua, &va, &opts.budget))), opts),
        component("B(D)", family_b_radicand(d), Some(Certificate::Km(km_certificate(&ub, &vb, &opts.budget))), opts),
        component("C(D)", family_c_radicand(d), Some(Certificate::Kishi(kishi_certificate(&family_c_element(d)))), opts),
    ]
}

/// The quadruple `(Q(√D), Q(√A(D)), Q(√B(D)), Q(√C(D)))` with `D = C(k)`.
pub fn quadruple(k: impl Into<BigInt>, opts: &VerifyOptions) -> Result<QuadrupleReport> {
    let k = positive(k.into())?;
    let base = family_c(k.clone(), opts)?;
    let d = base.radicand.clone();
    let [a, b, c] = upper_components(&d, opts);
    let first = QuadrupleComponent {
        label: "D",
        radicand: d.clone(),
        certificate: Some(base.certificate),
        decomposition: base.decomposition,
        direct: base.direct,
    };
    Ok(QuadrupleReport {
        k: Some(k),
        d,
        components: [first, a, b, c],
        notes: vec!["D = C(k); every component certified by its own criterion".into()],
    })
}

/// The quadruple at an arbitrary positive `D`. The base field carries no
/// certificate; only its direct computation (when feasible) speaks for it.
pub fn quadruple_at(d: impl Into<BigInt>, opts: &VerifyOptions) -> Result<QuadrupleReport> {
    let d = positive(d.into())?;
    let [a, b, c] = upper_components(&d, opts);
    let first = component("D", d.clone(), None, opts);
    Ok(QuadrupleReport {
        k: None,
        d,
        components: [first, a, b, c],
        notes: vec!["arbitrary D: base field Q(√D) has no certificate; direct computation only".into()],
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanEntry {
    pub k: u64,
    pub radicand: BigInt,
    pub kernel: BigInt,
    pub complete: bool,
}

/// Squarefree kernels of family C radicands over a parameter range. This is
/// empirical evidence only: distinct kernels mean distinct fields.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DistinctnessReport {
    pub entries: Vec<ScanEntry>,
    /// `(k₁, k₂, kernel)` for each pair of parameters sharing a kernel.
    pub collisions: Vec<(u64, u64, BigInt)>,
    /// Parameters whose kernel could not be certified squarefree.
    pub incomplete: Vec<u64>,
}

impl DistinctnessReport {
    pub fn all_distinct(&self) -> bool {
        self.collisions.is_empty()
    }
}

pub fn kernel_distinctness_scan(from: u64, to: u64, opts: &VerifyOptions) -> Result<DistinctnessReport> {
    if from == 0 {
        return Err(Error::NonPositiveParameter(BigInt::zero()));
    }
    if from > to {
        return Ok(DistinctnessReport::default());
    }
    let entries: Vec<ScanEntry> = (from..=to)
        .into_par_iter()
        .map(|k| {
            let radicand = family_c_radicand(&BigInt::from(k));
            let d = decomposition_or_raw(&radicand, &opts.budget);
            ScanEntry {
                k,
                radicand,
                kernel: d.kernel,
                complete: d.complete,
            }
        })
        .collect();

    let mut by_kernel: BTreeMap<&BigInt, Vec<u64>> = BTreeMap::new();
    let mut incomplete = Vec::new();
    for e in &entries {
        if e.complete {
            by_kernel.entry(&e.kernel).or_default().push(e.k);
        } else {
            incomplete.push(e.k);
        }
    }
    let mut collisions = Vec::new();
    for (kernel, ks) in by_kernel {
        for (i, &k1) in ks.iter().enumerate() {
            for &k2 in &ks[i + 1..] {
                collisions.push((k1, k2, kernel.clone()));
            }
        }
    }
    collisions.sort();
    Ok(DistinctnessReport {
        entries,
        collisions,
        incomplete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn radicand_values() {
        assert_eq!(family_a_radicand(&big(1)), big(1071646));
        assert_eq!(family_a_radicand(&big(2)), big(216000 * 8 + 457200 * 4 + 322580 * 2 + 75866));
        assert_eq!(family_b_radicand(&big(1)), big(2635));
        assert_eq!(family_b_radicand(&big(2)), big(9799));
        assert_eq!(family_c_radicand(&big(1)), big(211155));
        assert_eq!(family_c_radicand(&big(2)), big(827295));
        assert_eq!(family_c_element_radicand(&big(1)), big(70385));
    }

    #[test]
    fn zero_parameter_rejected() {
        let opts = VerifyOptions::default();
        assert!(matches!(family_a(0, &opts), Err(Error::NonPositiveParameter(_))));
        assert!(matches!(family_b(-3, &opts), Err(Error::NonPositiveParameter(_))));
        assert!(matches!(quadruple(0, &opts), Err(Error::NonPositiveParameter(_))));
        assert!(matches!(kernel_distinctness_scan(0, 3, &opts), Err(Error::NonPositiveParameter(_))));
    }

    #[test]
    fn family_b_small() {
        let opts = VerifyOptions::default();
        let inst = family_b(1, &opts).unwrap();
        assert_eq!(inst.radicand, big(2635));
        assert_eq!(inst.generator, Generator::KmPair { u: big(2), v: big(11) });
        let Certificate::Km(cert) = &inst.certificate else { panic!() };
        assert_eq!(cert.discriminant, big(42160));
        let r = inst.direct.result().unwrap();
        assert_eq!(r.discriminant, 10540);
        assert!(r.divisible_by_3());
    }

    #[test]
    fn family_c_small() {
        let opts = VerifyOptions::default();
        let inst = family_c(2, &opts).unwrap();
        assert_eq!(inst.radicand, big(827295));
        let Certificate::Kishi(cert) = &inst.certificate else { panic!() };
        assert_eq!(cert.norm, big(-68921));
    }

    #[test]
    fn scan_edges() {
        let opts = VerifyOptions::default();
        let r = kernel_distinctness_scan(5, 4, &opts).unwrap();
        assert!(r.entries.is_empty() && r.all_distinct());
        let r = kernel_distinctness_scan(1, 1, &opts).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert!(r.all_distinct());
        let r = kernel_distinctness_scan(1, 10, &opts).unwrap();
        assert_eq!(r.entries.len(), 10);
        assert!(r.all_distinct() && r.incomplete.is_empty());
    }

    #[test]
    fn quadruple_at_arbitrary_d() {
        let opts = VerifyOptions::default();
        let q = quadruple_at(5, &opts).unwrap();
        assert!(q.components[0].certificate.is_none());
        assert!(q.certificates_valid());
        assert_eq!(q.components[1].radicand, family_a_radicand(&big(5)));
    }
}
