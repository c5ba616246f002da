use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use super::dec;
use crate::elliptic::{map_from_weierstrass, CubicCurve, NagellLutzScan, ThreeTorsionSearch, WeierstrassCurve};
use crate::error::Error;
use crate::families::{
    Certificate, DirectCheck, DistinctnessReport, FamilyId, FamilyInstance, Generator, QuadrupleComponent, QuadrupleReport,
};
use crate::forms::{ClassNumberResult, ScholzReport};
use crate::kishi::KishiCertificate;
use crate::km::{KmCertificate, MonicDepressedCubic};
use crate::number::{QuadraticField, SquarefreeDecomposition};

pub const SCHEMA_ID: &str = "quadclass.record/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    CertifiedByTheorem,
    DirectlyComputed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordStatus {
    /// Every certificate in the record holds.
    Valid,
    /// A computation finished; no certificate was involved.
    Computed,
    /// A certificate failed or a theorem's conclusion was contradicted.
    Invalid,
    /// A budget or cap stopped the computation before a verdict.
    Incomplete,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Subject {
    pub kind: String,
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationRecord {
    pub schema: &'static str,
    pub subject: Subject,
    pub subject_key: String,
    pub provenance: Vec<Provenance>,
    pub status: RecordStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direct: Option<Value>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    pub notes: Vec<String>,
    pub toolkit_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl VerificationRecord {
    fn new(kind: &str, id: impl Into<String>, parameter: Option<String>, status: RecordStatus) -> Self {
        let id = id.into();
        let subject_key = match &parameter {
            Some(p) => format!("{kind}/{id}/{p}"),
            None => format!("{kind}/{id}"),
        };
        Self {
            schema: SCHEMA_ID,
            subject: Subject {
                kind: kind.to_string(),
                id,
                parameter,
            },
            subject_key,
            provenance: Vec::new(),
            status,
            certificate: None,
            direct: None,
            details: Value::Null,
            notes: Vec::new(),
            toolkit_version: crate::VERSION,
            timestamp: None,
        }
    }

    fn with_provenance(mut self, p: Provenance) -> Self {
        if !self.provenance.contains(&p) {
            self.provenance.push(p);
            self.provenance.sort();
        }
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    /// Whether the record blocks a zero exit status with code 2.
    pub fn is_failure(&self) -> bool {
        self.status == RecordStatus::Invalid
    }

    pub fn is_error(&self) -> bool {
        self.status == RecordStatus::Error
    }
}

/// Controls the nondeterministic parts of a record.
#[derive(Clone, Copy, Debug, Default)]
pub struct Stamp {
    pub timing: bool,
}

impl Stamp {
    fn finish(self, mut r: VerificationRecord) -> VerificationRecord {
        if self.timing {
            r.timestamp = Some(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true));
        }
        if r.provenance.is_empty() {
            r.provenance.push(Provenance::DirectlyComputed);
        }
        r
    }
}

fn status_for_error(e: &Error) -> RecordStatus {
    match e {
        Error::TheoremContradiction(_) => RecordStatus::Invalid,
        Error::TooLarge { .. } | Error::DiscriminantOutOfRange(_) => RecordStatus::Incomplete,
        _ => RecordStatus::Error,
    }
}

pub fn error_record(kind: &str, id: &str, parameter: Option<String>, e: &Error, stamp: Stamp) -> VerificationRecord {
    let status = status_for_error(e);
    let mut r = VerificationRecord::new(kind, id, parameter, status);
    if status == RecordStatus::Invalid {
        r = r.with_provenance(Provenance::CertifiedByTheorem);
    }
    r.details = json!({ "error": e.to_string() });
    stamp.finish(r)
}

fn poly_json(f: &MonicDepressedCubic) -> Value {
    json!({ "text": f.to_string(), "p": dec(&f.p), "q": dec(&f.q) })
}

pub fn km_json(c: &KmCertificate) -> Value {
    json!({
        "criterion": "km",
        "valid": c.valid,
        "u": dec(&c.u),
        "v": dec(&c.v),
        "polynomial": poly_json(&c.polynomial),
        "cond_a": c.cond_a,
        "cond_b": c.cond_b,
        "cond_c": c.cond_c,
        "d_branch": c.d_branch,
        "failed": c.failed,
        "discriminant": dec(&c.discriminant),
        "field_radicand": dec(&c.field_radicand),
        "field_radicand_complete": c.field_radicand_complete,
        "notes": c.notes,
    })
}

pub fn kishi_json(c: &KishiCertificate) -> Value {
    json!({
        "criterion": "kishi",
        "valid": c.valid,
        "element": {
            "a": dec(&c.element.a),
            "b": dec(&c.element.b),
            "m": dec(&c.element.m),
            "text": c.element.to_string(),
        },
        "trace": dec(&c.trace),
        "norm": dec(&c.norm),
        "norm_cube_root": c.norm_cube_root.as_ref().map(dec),
        "polynomial": c.polynomial.as_ref().map(poly_json),
        "gcd_ok": c.gcd_ok,
        "irreducible": c.irreducible,
        "totally_ramified_at_3": c.totally_ramified_at_3,
        "not_totally_ramified_at_3": c.not_totally_ramified_at_3,
        "d": dec(&c.d),
        "target_radicand": dec(&c.target_radicand),
        "resolvent": c.resolvent.as_ref().map(dec),
        "resolvent_matches_target": c.resolvent_matches_target,
        "notes": c.notes,
    })
}

pub fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::Km(c) => km_json(c),
        Certificate::Kishi(c) => kishi_json(c),
    }
}

pub fn class_number_json(r: &ClassNumberResult, stamp: Stamp) -> Value {
    let mut v = json!({
        "status": "computed",
        "discriminant": r.discriminant,
        "narrow_h": r.narrow_h,
        "h": r.h,
        "unit_norm": r.unit_norm,
        "form_count": r.form_count,
        "divisible_by_3": r.divisible_by_3(),
    });
    if stamp.timing {
        v["elapsed_ms"] = json!(r.elapsed.as_millis() as u64);
    }
    v
}

pub fn direct_json(d: &DirectCheck, stamp: Stamp) -> Value {
    match d {
        DirectCheck::Computed(r) => class_number_json(r, stamp),
        DirectCheck::Skipped(reason) => json!({ "status": "skipped", "reason": reason }),
    }
}

fn decomposition_json(d: &SquarefreeDecomposition) -> Value {
    json!({
        "kernel": dec(&d.kernel),
        "square_root_part": dec(&d.square_root_part),
        "complete": d.complete,
    })
}

fn certificate_status(valid: bool, direct: &DirectCheck) -> RecordStatus {
    let direct_ok = direct.result().is_none_or(ClassNumberResult::divisible_by_3);
    if valid && direct_ok {
        RecordStatus::Valid
    } else {
        RecordStatus::Invalid
    }
}

fn direct_notes(direct: &DirectCheck, notes: &mut Vec<String>) {
    if let Some(r) = direct.result() {
        if !r.divisible_by_3() {
            notes.push(format!("direct computation contradicts 3 | h at discriminant {}", r.discriminant));
        }
    }
}

fn family_record_id(family: FamilyId) -> String {
    family.to_string()
}

pub fn family_record(inst: &FamilyInstance, stamp: Stamp) -> VerificationRecord {
    let mut r = VerificationRecord::new(
        "family",
        family_record_id(inst.family),
        Some(inst.parameter.to_string()),
        certificate_status(inst.certificate.is_valid(), &inst.direct),
    )
    .with_provenance(Provenance::CertifiedByTheorem);
    if inst.direct.result().is_some() {
        r = r.with_provenance(Provenance::DirectlyComputed);
    }
    let generator = match &inst.generator {
        Generator::KmPair { u, v } => json!({ "u": dec(u), "v": dec(v) }),
        Generator::Element(e) => json!({ "a": dec(&e.a), "b": dec(&e.b), "m": dec(&e.m) }),
    };
    r.certificate = Some(certificate_json(&inst.certificate));
    r.direct = Some(direct_json(&inst.direct, stamp));
    r.details = json!({
        "radicand": dec(&inst.radicand),
        "generator": generator,
        "decomposition": decomposition_json(&inst.decomposition),
    });
    r.notes = inst.notes.clone();
    direct_notes(&inst.direct, &mut r.notes);
    stamp.finish(r)
}

pub fn family_error_record(family: FamilyId, parameter: u64, e: &Error, stamp: Stamp) -> VerificationRecord {
    error_record("family", &family_record_id(family), Some(parameter.to_string()), e, stamp)
}

fn quadruple_id(q: &QuadrupleReport) -> (String, String) {
    match &q.k {
        Some(k) => ("k".to_string(), k.to_string()),
        None => ("D".to_string(), q.d.to_string()),
    }
}

fn component_record(q: &QuadrupleReport, c: &QuadrupleComponent, stamp: Stamp) -> VerificationRecord {
    let (id, param) = quadruple_id(q);
    let valid = c.certificate.as_ref().is_none_or(Certificate::is_valid);
    let mut r = VerificationRecord::new(
        "quadruple-component",
        format!("{id}={param}"),
        Some(c.label.to_string()),
        certificate_status(valid, &c.direct),
    );
    if c.certificate.is_some() {
        r = r.with_provenance(Provenance::CertifiedByTheorem);
    }
    if c.direct.result().is_some() {
        r = r.with_provenance(Provenance::DirectlyComputed);
    }
    r.certificate = c.certificate.as_ref().map(certificate_json);
    r.direct = Some(direct_json(&c.direct, stamp));
    r.details = json!({
        "D": dec(&q.d),
        "radicand": dec(&c.radicand),
        "decomposition": decomposition_json(&c.decomposition),
    });
    direct_notes(&c.direct, &mut r.notes);
    if c.certificate.is_none() && c.direct.result().is_none() {
        r.status = RecordStatus::Incomplete;
        r.notes.push("no certificate and no direct computation".into());
    }
    stamp.finish(r)
}

/// Four component records followed by one summary record.
pub fn quadruple_records(q: &QuadrupleReport, stamp: Stamp) -> Vec<VerificationRecord> {
    let mut out: Vec<VerificationRecord> = q.components.iter().map(|c| component_record(q, c, stamp)).collect();
    let (id, param) = quadruple_id(q);
    let status = if out.iter().any(VerificationRecord::is_failure) {
        RecordStatus::Invalid
    } else if out.iter().any(|r| r.status == RecordStatus::Incomplete) {
        RecordStatus::Incomplete
    } else {
        RecordStatus::Valid
    };
    let mut summary = VerificationRecord::new("quadruple", id, Some(param), status);
    for p in out.iter().flat_map(|r| r.provenance.clone()).collect::<Vec<_>>() {
        summary = summary.with_provenance(p);
    }
    summary.details = json!({
        "D": dec(&q.d),
        "k": q.k.as_ref().map(dec),
        "radicands": q.components.iter().map(|c| json!({ "label": c.label, "radicand": dec(&c.radicand) })).collect::<Vec<_>>(),
        "component_status": out.iter().map(|r| r.status).collect::<Vec<_>>(),
        "certificates_valid": q.certificates_valid(),
    });
    summary.notes = q.notes.clone();
    out.push(stamp.finish(summary));
    out
}

pub fn class_number_record(field: &QuadraticField, result: &ClassNumberResult, narrow_only: bool, stamp: Stamp) -> VerificationRecord {
    let id = if narrow_only { "narrow" } else { "class" };
    let mut r = VerificationRecord::new("classnumber", id, Some(field.radicand.to_string()), RecordStatus::Computed)
        .with_provenance(Provenance::DirectlyComputed);
    r.direct = Some(class_number_json(result, stamp));
    r.details = json!({
        "radicand": dec(&field.radicand),
        "kernel": dec(&field.kernel),
        "square_root_part": dec(&field.square_root_part),
        "fundamental_discriminant": dec(&field.fundamental_discriminant),
        "real": field.is_real,
    });
    stamp.finish(r)
}

/// `real` is the direct computation for `Q(√d)` when it was feasible.
pub fn scholz_record(report: &ScholzReport, real: Option<&ClassNumberResult>, stamp: Stamp) -> VerificationRecord {
    let applies = real.map(ClassNumberResult::divisible_by_3);
    let status = match applies {
        Some(true) if !report.holds => RecordStatus::Invalid,
        _ => RecordStatus::Computed,
    };
    let mut r = VerificationRecord::new("scholz", "reflection", Some(report.d.to_string()), status)
        .with_provenance(Provenance::DirectlyComputed);
    r.direct = real.map(|c| class_number_json(c, stamp));
    r.details = json!({
        "d": dec(&report.d),
        "imaginary_kernel": dec(&report.imaginary_kernel),
        "imaginary": class_number_json(&report.imaginary, stamp),
        "three_divides_real": applies,
        "three_divides_imaginary": report.holds,
    });
    match applies {
        Some(true) if report.holds => r.notes.push("3 | h(d) and 3 | h(−3d): reflection consistent".into()),
        Some(true) => r.notes.push("3 | h(d) but 3 ∤ h(−3d): reflection violated".into()),
        Some(false) => r.notes.push("3 ∤ h(d): reflection imposes nothing".into()),
        None => r.notes.push("h(d) not computed directly; only h(−3d) reported".into()),
    }
    stamp.finish(r)
}

fn rational_json(q: &BigRational) -> Value {
    Value::String(q.to_string())
}

fn point_json(p: &crate::elliptic::RationalPoint) -> Value {
    match p {
        crate::elliptic::RationalPoint::Infinity => json!("O"),
        crate::elliptic::RationalPoint::Affine { x, y } => json!({ "x": rational_json(x), "y": rational_json(y) }),
    }
}

pub struct TorsionInput<'a> {
    pub name: &'a str,
    pub curve: &'a CubicCurve,
    pub model: &'a WeierstrassCurve,
    pub scale: &'a BigInt,
    pub search: &'a ThreeTorsionSearch,
    pub scan: &'a NagellLutzScan,
}

pub fn torsion_record(t: &TorsionInput<'_>, stamp: Stamp) -> VerificationRecord {
    let nl3 = t.scan.of_order(3);
    let agree = !t.scan.complete || nl3 == t.search.points;
    let status = if agree { RecordStatus::Computed } else { RecordStatus::Error };
    let mut r = VerificationRecord::new("torsion", t.name, None, status).with_provenance(Provenance::DirectlyComputed);
    let verdict = if t.search.has_three_torsion() { "present" } else { "absent" };
    r.details = json!({
        "curve": t.curve.to_string(),
        "model": t.model.to_string(),
        "scale": dec(t.scale),
        "model_discriminant": dec(&t.model.discriminant()),
        "psi3": t.search.psi3.iter().map(dec).collect::<Vec<_>>(),
        "psi3_rational_roots": t.search.roots.iter().map(|c| json!({
            "x": rational_json(&c.x),
            "rhs": rational_json(&c.rhs),
            "rhs_is_square": c.y.is_some(),
        })).collect::<Vec<_>>(),
        "divisor_scan": {
            "candidates_tested": t.search.divisor_candidates_tested,
            "agrees": t.search.divisor_scan_agrees,
        },
        "three_torsion": verdict,
        "witnesses_model": t.search.points.iter().map(point_json).collect::<Vec<_>>(),
        "witnesses_curve": t.search.points.iter().map(|p| point_json(&map_from_weierstrass(p, t.scale))).collect::<Vec<_>>(),
        "nagell_lutz": {
            "complete": t.scan.complete,
            "y_candidates": t.scan.y_candidates,
            "torsion_points": t.scan.points.iter().map(|(p, o)| json!({ "point": point_json(p), "order": o })).collect::<Vec<_>>(),
        },
    });
    if t.search.has_three_torsion() {
        r.notes.push(format!("{} rational point(s) of order 3", t.search.points.len()));
    } else if t.search.roots.is_empty() {
        r.notes.push("psi3 has no rational root: no rational 3-torsion".into());
    } else {
        r.notes.push("every rational root of psi3 gives a non-square right-hand side: no rational 3-torsion".into());
    }
    if !agree {
        r.notes.push("division-polynomial search and Nagell-Lutz scan disagree".into());
    }
    stamp.finish(r)
}

pub fn scan_records(report: &DistinctnessReport, from: u64, to: u64, stamp: Stamp) -> Vec<VerificationRecord> {
    let mut out: Vec<VerificationRecord> = report
        .entries
        .iter()
        .map(|e| {
            let status = if e.complete { RecordStatus::Computed } else { RecordStatus::Incomplete };
            let mut r = VerificationRecord::new("scan-distinct", "C", Some(e.k.to_string()), status)
                .with_provenance(Provenance::DirectlyComputed);
            r.details = json!({ "radicand": dec(&e.radicand), "kernel": dec(&e.kernel), "complete": e.complete });
            stamp.finish(r)
        })
        .collect();
    let status = if report.incomplete.is_empty() { RecordStatus::Computed } else { RecordStatus::Incomplete };
    let mut summary = VerificationRecord::new("scan-distinct-summary", "C", Some(format!("{from}..{to}")), status)
        .with_provenance(Provenance::DirectlyComputed);
    summary.details = json!({
        "count": report.entries.len(),
        "all_distinct": report.all_distinct(),
        "collisions": report.collisions.iter().map(|(a, b, k)| json!({ "k1": a, "k2": b, "kernel": dec(k) })).collect::<Vec<_>>(),
        "incomplete": report.incomplete,
    });
    summary.notes.push("empirical evidence only; distinct kernels give distinct fields".into());
    out.push(stamp.finish(summary));
    out
}

pub fn km_record(c: &KmCertificate, stamp: Stamp) -> VerificationRecord {
    let status = if c.valid { RecordStatus::Valid } else { RecordStatus::Invalid };
    let mut r = VerificationRecord::new("km", format!("u={}", c.u), Some(format!("v={}", c.v)), status)
        .with_provenance(Provenance::CertifiedByTheorem);
    r.certificate = Some(km_json(c));
    stamp.finish(r)
}

pub fn kishi_record(c: &KishiCertificate, stamp: Stamp) -> VerificationRecord {
    let e = &c.element;
    let status = if c.valid { RecordStatus::Valid } else { RecordStatus::Invalid };
    let mut r = VerificationRecord::new("kishi", format!("m={}", e.m), Some(format!("a={},b={}", e.a, e.b)), status)
        .with_provenance(Provenance::CertifiedByTheorem);
    r.certificate = Some(kishi_json(c));
    stamp.finish(r)
}

/// Kernel cache lines contributed by a record set: `(radicand, kernel, square_root_part)`.
pub fn completed_decompositions(records: &[VerificationRecord]) -> Vec<(String, String, String)> {
    let mut out = Vec::new();
    for r in records {
        let Some(d) = r.details.get("decomposition") else { continue };
        let (Some(rad), Some(k), Some(s)) = (r.details.get("radicand"), d.get("kernel"), d.get("square_root_part")) else {
            continue;
        };
        if d.get("complete") != Some(&Value::Bool(true)) {
            continue;
        }
        if let (Some(rad), Some(k), Some(s)) = (rad.as_str(), k.as_str(), s.as_str()) {
            out.push((rad.to_string(), k.to_string(), s.to_string()));
        }
    }
    out
}
