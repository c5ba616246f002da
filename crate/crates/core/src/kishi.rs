//! Certificates built from half-integral elements `α = (a + b√m)/2` whose
//! norm is a rational cube.
//!
//! `P_α(X) = X³ − 3·∛N(α)·X − T(α)` is reducible exactly when `α` is a cube
//! in `Q(√m)`. When `α` is not a cube, `gcd(N, T) = 1`, and 3 is not totally
//! ramified in the cubic field of `P_α`, the splitting field of `P_α` is an
//! unramified cyclic cubic extension of `Q(√D)`, where `d = −m` and
//! `D = −d/3` if `3 | d`, else `D = −3d`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::km::{cubic_discriminant, cubic_rational_roots, MonicDepressedCubic};
use crate::number::{is_perfect_square, perfect_power_root, valuation_or_infinite};

/// `(a + b√m)/2` with `m` a nonsquare.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfIntegralElement {
    pub a: BigInt,
    pub b: BigInt,
    pub m: BigInt,
}

impl HalfIntegralElement {
    /// Rejects square `m` and elements outside the ring of integers: for
    /// `m ≡ 1 (mod 4)` the parities of `a` and `b` must agree, otherwise both
    /// must be even.
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, m: impl Into<BigInt>) -> Result<Self> {
        let (a, b, m) = (a.into(), b.into(), m.into());
        if m.is_zero() || is_perfect_square(&m) {
            return Err(Error::SquareRadicand(m));
        }
        let integral = if m.mod_floor(&BigInt::from(4)).is_one() {
            a.is_even() == b.is_even()
        } else {
            a.is_even() && b.is_even()
        };
        if !integral {
            return Err(Error::NonIntegral { a, b, m });
        }
        Ok(Self { a, b, m })
    }

    pub fn trace(&self) -> BigInt {
        self.a.clone()
    }

    pub fn norm(&self) -> BigInt {
        (&self.a * &self.a - &self.b * &self.b * &self.m) / 4
    }
}

impl std::fmt::Display for HalfIntegralElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({} + {}·√{})/2", self.a, self.b, self.m)
    }
}

/// `(trace, norm)`.
pub fn norm_trace(e: &HalfIntegralElement) -> (BigInt, BigInt) {
    (e.trace(), e.norm())
}

/// `P_α = X³ − 3·∛N·X − T`.
pub fn p_alpha(e: &HalfIntegralElement) -> Result<MonicDepressedCubic> {
    let norm = e.norm();
    let root = perfect_power_root(&norm, 3).ok_or(Error::NormNotCube(norm))?;
    Ok(MonicDepressedCubic {
        p: root * -3,
        q: -e.trace(),
    })
}

/// Whether 3 is totally ramified in the cubic field of `X³ − aX − b`
/// (irreducible). Applies only when `v₃(a) < 2` or `v₃(b) < 3`.
pub fn llorente_nart_totally_ramified(a: &BigInt, b: &BigInt) -> Result<bool> {
    // None stands for v₃(0) = ∞
    let va = valuation_or_infinite(a, 3);
    let vb = valuation_or_infinite(b, 3);
    let below = |v: Option<u32>, k: u32| v.is_some_and(|v| v < k);
    if !below(va, 2) && !below(vb, 3) {
        return Err(Error::CriterionNotApplicable);
    }

    let modp = |x: &BigInt, m: i64| x.mod_floor(&BigInt::from(m));
    let three_divides = |x: &BigInt| modp(x, 3).is_zero();
    let b_sq = b * b;
    let a_plus_one = a + 1;

    let cond_i = match (vb, va) {
        (Some(vb), Some(va)) => vb >= 1 && vb <= va,
        (Some(vb), None) => vb >= 1,
        (None, Some(_)) => false,
        (None, None) => true,
    };
    let cond_ii = three_divides(a)
        && modp(a, 9) != BigInt::from(3)
        && !three_divides(b)
        && modp(&b_sq, 9) != modp(&a_plus_one, 9);
    let cond_iii = modp(a, 9) == BigInt::from(3)
        && !three_divides(b)
        && modp(&b_sq, 27) != modp(&a_plus_one, 27);
    Ok(cond_i || cond_ii || cond_iii)
}

/// `D` for `d = −m`: `−d/3` if `3 | d`, else `−3d`.
pub fn target_radicand(m: &BigInt) -> BigInt {
    if m.is_multiple_of(&BigInt::from(3)) {
        m / 3
    } else {
        m * 3
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KishiCertificate {
    pub element: HalfIntegralElement,
    pub trace: BigInt,
    pub norm: BigInt,
    pub norm_cube_root: Option<BigInt>,
    pub polynomial: Option<MonicDepressedCubic>,
    pub gcd_ok: bool,
    /// `P_α` has no rational root, equivalently `α` is not a cube.
    pub irreducible: bool,
    /// `None` when the 3-adic criterion could not be evaluated.
    pub totally_ramified_at_3: Option<bool>,
    pub not_totally_ramified_at_3: bool,
    pub valid: bool,
    /// `d = −m`, the sign convention of the base field `Q(√−d)`.
    pub d: BigInt,
    pub target_radicand: BigInt,
    /// `disc P_α`; the splitting field of `P_α` contains `Q(√resolvent)`.
    pub resolvent: Option<BigInt>,
    /// Whether `Q(√resolvent) = Q(√target_radicand)`, i.e. the cyclic cubic
    /// extension actually lies over the target field.
    pub resolvent_matches_target: Option<bool>,
    pub notes: Vec<String>,
}

pub fn kishi_certificate(e: &HalfIntegralElement) -> KishiCertificate {
    let (trace, norm) = norm_trace(e);
    let norm_cube_root = perfect_power_root(&norm, 3);
    let polynomial = p_alpha(e).ok();
    let gcd_ok = norm.gcd(&trace).is_one();
    let mut notes = vec![
        "element taken over K = Q(√m) with m = −d; conclusion drawn for L = Q(√D)".to_string(),
        "cubic-subfield condition v3(disc K') ≠ 5 taken as satisfied when 3 is not totally ramified; not computed".to_string(),
    ];

    let irreducible = polynomial
        .as_ref()
        .is_some_and(|f| cubic_rational_roots(f).is_empty());

    let totally_ramified_at_3 = match (&polynomial, irreducible) {
        (Some(f), true) => {
            // P_α = X³ − aX − b with a = −p, b = −q
            match llorente_nart_totally_ramified(&-&f.p, &-&f.q) {
                Ok(v) => Some(v),
                Err(_) => {
                    notes.push("3-adic ramification criterion not applicable".into());
                    None
                }
            }
        }
        _ => None,
    };
    let not_totally_ramified_at_3 = totally_ramified_at_3 == Some(false);
    if norm_cube_root.is_none() {
        notes.push(format!("norm {norm} is not a cube"));
    }

    let target = target_radicand(&e.m);
    let resolvent = polynomial.as_ref().map(cubic_discriminant);
    let resolvent_matches_target = resolvent.as_ref().map(|r| !r.is_zero() && is_perfect_square(&(r * &target)));
    if resolvent_matches_target == Some(false) {
        notes.push(format!(
            "quadratic resolvent field Q(√{}) differs from Q(√{target}): the cubic extension does not lie over the target field",
            resolvent.as_ref().expect("resolvent present")
        ));
    }

    let valid = norm_cube_root.is_some() && gcd_ok && irreducible && not_totally_ramified_at_3;
    KishiCertificate {
        element: e.clone(),
        trace,
        norm,
        norm_cube_root,
        polynomial,
        gcd_ok,
        irreducible,
        totally_ramified_at_3,
        not_totally_ramified_at_3,
        valid,
        d: -&e.m,
        target_radicand: target,
        resolvent,
        resolvent_matches_target,
        notes,
    }
}
