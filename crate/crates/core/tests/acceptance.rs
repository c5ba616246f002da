//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria 3 and 4 fail on a genuine counterexample (3 ∤ h(Q(√211155))).
//! They are listed in `KNOWN_FAILURES` and the run stays green only while
//! each fails in exactly that way.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use quadclass::elliptic::{
    named_curve, nagell_lutz_scan, three_torsion_search, to_weierstrass, RationalPoint, WeierstrassCurve, CURVE_NAMES,
};
use quadclass::families::{
    family_a, family_a_pair, family_a_radicand, family_b, family_b_pair, family_b_radicand, family_c, family_c_element,
    family_c_element_radicand, family_c_radicand, DirectCheck, VerifyOptions,
};
use quadclass::forms::{imaginary_class_number, narrow_class_number, scholz_reflection_check, DEFAULT_FORM_CAP};
use quadclass::kishi::kishi_certificate;
use quadclass::km::{d_branch, km_certificate, DBranch};
use quadclass::number::FactorBudget;
use quadclass::report::run_command;

struct Verdict {
    pass: bool,
    detail: String,
    /// For criteria in `KNOWN_FAILURES`: the failure matches the documented counterexample.
    known_counterexample: bool,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
            known_counterexample: false,
        }
    }
}

const KNOWN_FAILURES: [u32; 2] = [3, 4];

fn opts() -> VerifyOptions {
    VerifyOptions::default()
}

/// Real fields from criteria 1–3 whose class number was computed directly
/// and found divisible by 3, as radicands.
#[derive(Default)]
struct Fields(BTreeSet<BigInt>);

fn criterion_1(fields: &mut Fields) -> Verdict {
    let o = opts();
    let mut problems = Vec::new();
    let mut checked = 0;
    for y in 1..=25u64 {
        let (u, v) = family_b_pair(&y.into());
        let cert = km_certificate(&u, &v, &o.budget);
        if !cert.valid || cert.d_branch != DBranch::D1 {
            problems.push(format!("y={y}: certificate"));
        }
        match family_b(y, &o) {
            Ok(inst) => match &inst.direct {
                DirectCheck::Computed(r) if r.divisible_by_3() => {
                    checked += 1;
                    fields.0.insert(inst.radicand.clone());
                }
                DirectCheck::Computed(r) => problems.push(format!("y={y}: h+ = {:?}", r.narrow_h)),
                DirectCheck::Skipped(why) if why.contains("cap") => {}
                DirectCheck::Skipped(why) => problems.push(format!("y={y}: skipped ({why})")),
            },
            Err(e) => problems.push(format!("y={y}: {e}")),
        }
    }
    Verdict::new(
        problems.is_empty(),
        format!("25 certificates via (d.1), {checked} direct checks with 3 | h+ {}", problems.join(", ")),
    )
}

fn criterion_2(fields: &mut Fields) -> Verdict {
    let o = opts();
    let mut problems = Vec::new();
    let (mut direct, mut skipped) = (0, 0);
    for x in 1..=10u64 {
        match family_a(x, &o) {
            Ok(inst) => {
                let quadclass::families::Certificate::Km(c) = &inst.certificate else {
                    problems.push(format!("x={x}: wrong certificate kind"));
                    continue;
                };
                if !c.valid || c.d_branch != DBranch::D3 {
                    problems.push(format!("x={x}: certificate"));
                }
                match &inst.direct {
                    DirectCheck::Computed(r) if r.divisible_by_3() => {
                        direct += 1;
                        fields.0.insert(inst.radicand.clone());
                    }
                    DirectCheck::Computed(r) => problems.push(format!("x={x}: h+ = {:?}", r.narrow_h)),
                    DirectCheck::Skipped(why) => {
                        if why.contains("threshold") {
                            skipped += 1;
                        } else {
                            problems.push(format!("x={x}: skipped ({why})"));
                        }
                    }
                }
            }
            Err(e) => problems.push(format!("x={x}: {e}")),
        }
    }
    Verdict::new(
        problems.is_empty() && direct + skipped == 10,
        format!("10 certificates via (d.3); {direct} direct with 3 | h+, {skipped} above 1e9 {}", problems.join(", ")),
    )
}

fn criterion_3(fields: &mut Fields) -> Verdict {
    let o = opts();
    let mut certs_ok = true;
    let mut divisible = Vec::new();
    let mut k1_narrow = None;
    for k in 1..=10u64 {
        let c = kishi_certificate(&family_c_element(&k.into()));
        certs_ok &= c.valid;
        if let Ok(inst) = family_c(k, &o) {
            if let Some(r) = inst.direct.result() {
                if k == 1 {
                    k1_narrow = r.narrow_h;
                }
                if r.divisible_by_3() {
                    divisible.push(k);
                    fields.0.insert(inst.radicand.clone());
                }
            }
        } else {
            certs_ok = false;
        }
    }
    let k1_ok = k1_narrow.is_some_and(|h| h % 3 == 0);
    let mut v = Verdict::new(
        certs_ok && k1_ok,
        format!(
            "10 certificates valid: {certs_ok}; h+(844620) = {k1_narrow:?}; 3 | h+ only for k in {divisible:?}"
        ),
    );
    v.known_counterexample = certs_ok && k1_narrow == Some(64);
    v
}

fn criterion_4() -> Verdict {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let outcome = run_command(["quadclass", "--no-timestamps", "verify-quadruple", "--k", "1"], &mut out, &mut err);
    let recs = &outcome.records;
    let shape = recs.len() == 5;
    let certs_valid = recs[..4.min(recs.len())]
        .iter()
        .all(|r| r.certificate.as_ref().is_some_and(|c| c["valid"] == true));
    let first_direct = recs.first().and_then(|r| r.direct.as_ref()).filter(|d| d["status"] == "computed");
    let first_divisible = first_direct.is_some_and(|d| d["divisible_by_3"] == true);
    let skipped = recs
        .iter()
        .skip(1)
        .take(3)
        .all(|r| r.direct.as_ref().is_some_and(|d| d["status"] == "skipped" && d["reason"].is_string()));
    let code = outcome.status.code();
    let mut v = Verdict::new(
        shape && certs_valid && first_divisible && skipped && code == 0,
        format!(
            "5 records: {shape}; 4 certificates valid: {certs_valid}; D direct h+ = {}; 3 skip reasons: {skipped}; exit {code}",
            first_direct.map(|d| d["narrow_h"].to_string()).unwrap_or_default()
        ),
    );
    v.known_counterexample = shape
        && certs_valid
        && skipped
        && code == 2
        && first_direct.is_some_and(|d| d["narrow_h"] == 64);
    v
}

fn criterion_5() -> Verdict {
    let mut rng = StdRng::seed_from_u64(5);
    let budget = FactorBudget::default();
    let mut bad = Vec::new();
    for _ in 0..50 {
        let x = BigInt::from(rng.gen_range(1u64..1_000_000_000_000));
        let (u, v) = family_a_pair(&x);
        if km_certificate(&u, &v, &budget).discriminant != family_a_radicand(&x) * 186624 {
            bad.push(format!("A x={x}"));
        }
        let y = BigInt::from(rng.gen_range(1u64..1_000_000_000_000));
        let (u, v) = family_b_pair(&y);
        if km_certificate(&u, &v, &budget).discriminant != family_b_radicand(&y) * 16 {
            bad.push(format!("B y={y}"));
        }
    }
    let flagged = family_a(1, &opts()).is_ok_and(|i| i.notes.iter().any(|n| n.contains("186624") && n.contains("12⁴")));
    Verdict::new(
        bad.is_empty() && flagged,
        format!("100 exact identities, {} mismatches; 12⁴ deviation flagged: {flagged}", bad.len()),
    )
}

fn modulo(n: &BigInt, m: i64) -> i64 {
    use num_integer::Integer;
    let r: BigInt = n.mod_floor(&BigInt::from(m));
    i64::try_from(r).unwrap()
}

fn criterion_6() -> Verdict {
    let budget = FactorBudget::default();
    let mut failures = Vec::new();
    let mut check = |label: &str, ok: bool| {
        if !ok {
            failures.push(label.to_string());
        }
    };
    // each radicand is a polynomial, so its residue mod n depends only on the parameter mod n
    for x in 0..4i64 {
        check("A ≡ 2 (4)", modulo(&family_a_radicand(&x.into()), 4) == 2);
    }
    for y in 0..12i64 {
        let r = family_b_radicand(&y.into());
        check("B ≡ 3 (4)", modulo(&r, 4) == 3);
        check("B ≡ 1 (3)", modulo(&r, 3) == 1);
    }
    for k in 0..12i64 {
        let k = BigInt::from(k);
        check("C ≡ 3 (4)", modulo(&family_c_radicand(&k), 4) == 3);
        let m = family_c_element_radicand(&k);
        check("C d = −m ≡ 1 (3)", modulo(&-&m, 3) == 1);
        check("C radicand = 3m", family_c_radicand(&k) == &m * 3);
        let n = &k * 15 + 11;
        check("C 3 ∤ 15k+11", modulo(&n, 3) != 0);
    }
    // (d.3) depends on v mod 27 and uv mod 9; (d.1) on v mod 3
    for x in 1..=27i64 {
        let (u, v) = family_a_pair(&x.into());
        check("A (d.3)", d_branch(&u, &v) == DBranch::D3 && km_certificate(&u, &v, &budget).valid);
    }
    for y in 1..=3i64 {
        let (u, v) = family_b_pair(&y.into());
        check("B (d.1)", d_branch(&u, &v) == DBranch::D1 && km_certificate(&u, &v, &budget).valid);
    }
    Verdict::new(failures.is_empty(), format!("{} failures {}", failures.len(), failures.join(", ")))
}

mod oracle {
    //! Brute-force reduced-form counting, independent of the library.

    fn isqrt(n: i64) -> i64 {
        let mut r = (n as f64).sqrt() as i64;
        while r * r > n {
            r -= 1;
        }
        while (r + 1) * (r + 1) <= n {
            r += 1;
        }
        r
    }

    fn squarefree(n: i64) -> bool {
        let n = n.abs();
        let mut p = 2;
        while p * p <= n {
            if n % (p * p) == 0 {
                return false;
            }
            p += 1;
        }
        true
    }

    pub fn is_fundamental(d: i64) -> bool {
        if d == 0 || d == 1 {
            return false;
        }
        match d.rem_euclid(4) {
            1 => squarefree(d),
            0 => {
                let q = d / 4;
                matches!(q.rem_euclid(4), 2 | 3) && squarefree(q)
            }
            _ => false,
        }
    }

    pub fn imaginary_h(d: i64) -> u64 {
        let n = -d;
        let mut h = 0;
        let mut a = 1;
        while 3 * a * a <= n {
            for b in -a + 1..=a {
                if (b * b + n) % (4 * a) != 0 {
                    continue;
                }
                let c = (b * b + n) / (4 * a);
                if c < a || (b < 0 && a == c) {
                    continue;
                }
                h += 1;
            }
            a += 1;
        }
        h
    }

    fn reduced_forms(d: i64) -> Vec<(i64, i64, i64)> {
        let s = isqrt(d);
        let mut out = Vec::new();
        for b in 1..=s {
            for a in 1..=s {
                let two_a = 2 * a;
                let lower_ok = (two_a + b) * (two_a + b) > d;
                let upper_ok = two_a <= b || (two_a - b) * (two_a - b) < d;
                if !(lower_ok && upper_ok) || (d - b * b) % (4 * a) != 0 {
                    continue;
                }
                let c = (d - b * b) / (4 * a);
                out.push((a, b, -c));
                out.push((-a, b, c));
            }
        }
        out.sort();
        out
    }

    fn next(f: (i64, i64, i64), d: i64) -> (i64, i64, i64) {
        let (_, b, c) = f;
        let s = isqrt(d);
        let m = 2 * c.abs();
        let t = (-b).rem_euclid(m);
        let b2 = t + m * ((s - t).div_euclid(m));
        (c, b2, (b2 * b2 - d) / (4 * c))
    }

    pub fn narrow_h(d: i64) -> u64 {
        let forms = reduced_forms(d);
        let mut seen = std::collections::HashSet::new();
        let mut cycles = 0;
        for &f in &forms {
            if !seen.insert(f) {
                continue;
            }
            cycles += 1;
            let mut g = next(f, d);
            while g != f {
                assert!(forms.binary_search(&g).is_ok(), "rho left the reduced set at {g:?}");
                seen.insert(g);
                g = next(g, d);
            }
        }
        cycles
    }
}

fn criterion_7() -> Verdict {
    let mut mismatches = Vec::new();
    let (mut real, mut imag) = (0, 0);
    for d in 2..=10_000i64 {
        if oracle::is_fundamental(d) {
            real += 1;
            let got = narrow_class_number(d, DEFAULT_FORM_CAP).ok().and_then(|r| r.narrow_h);
            if got != Some(oracle::narrow_h(d)) {
                mismatches.push(d);
            }
        }
        if oracle::is_fundamental(-d) {
            imag += 1;
            let got = imaginary_class_number(-d, DEFAULT_FORM_CAP).ok().and_then(|r| r.h);
            if got != Some(oracle::imaginary_h(-d)) {
                mismatches.push(-d);
            }
        }
    }
    Verdict::new(
        mismatches.is_empty(),
        format!("{real} real and {imag} imaginary discriminants; mismatches {mismatches:?}"),
    )
}

fn criterion_8(fields: &Fields) -> Verdict {
    let budget = FactorBudget::default();
    let failures: Vec<String> = fields
        .0
        .iter()
        .filter(|d| !scholz_reflection_check(d, &budget, DEFAULT_FORM_CAP).unwrap_or(false))
        .map(|d| d.to_string())
        .collect();
    Verdict::new(
        failures.is_empty() && !fields.0.is_empty(),
        format!("{} fields with 3 | h checked; failures {failures:?}", fields.0.len()),
    )
}

fn random_curve(rng: &mut StdRng) -> Option<(WeierstrassCurve, Vec<RationalPoint>)> {
    let a: i64 = rng.gen_range(-6..=6);
    let x1: i64 = rng.gen_range(-8..=8);
    let x2 = x1 + 1;
    let (y1, y2): (i64, i64) = (rng.gen_range(-12..=12), rng.gen_range(-12..=12));
    let b = -((y1 * y1 - y2 * y2) - (x1.pow(3) - x2.pow(3)) - a * (x1 * x1 - x2 * x2));
    let c = y1 * y1 - x1.pow(3) - a * x1 * x1 - b * x1;
    let w = WeierstrassCurve::new(a, b, c).ok()?;
    let p = RationalPoint::affine(x1, y1);
    let q = RationalPoint::affine(x2, y2);
    Some((w, vec![p, q]))
}

fn criterion_9() -> Verdict {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(9);
    let budget = FactorBudget::default();
    let mut curves = 0;
    let mut axiom_failures = 0;
    let (mut compared, mut disagreements) = (0, 0);
    while curves < 200 {
        let Some((w, pts)) = random_curve(&mut rng) else { continue };
        curves += 1;
        let o = RationalPoint::Infinity;
        let (p, q) = (&pts[0], &pts[1]);
        let add = |x: &RationalPoint, y: &RationalPoint| w.add_points(x, y).expect("points on curve");
        let pq = add(p, q);
        let r = add(&pq, p);
        let ok = w.contains(p)
            && w.contains(q)
            && w.contains(&pq)
            && add(p, &o) == *p
            && add(&o, q) == *q
            && add(p, &w.negate(p)) == o
            && pq == add(q, p)
            && add(&pq, &r) == add(p, &add(q, &r))
            && add(&add(p, p), q) == add(p, &add(p, q))
            && w.multiply(p, 3) == add(&add(p, p), p);
        if !ok {
            axiom_failures += 1;
        }
        let scan = nagell_lutz_scan(&w, &budget);
        let search = three_torsion_search(&w, &budget);
        if scan.complete && search.divisor_scan_agrees.is_some() {
            compared += 1;
            if scan.of_order(3) != search.points {
                disagreements += 1;
            }
        }
    }

    let mut verdicts = Vec::new();
    let mut definitive = true;
    for name in CURVE_NAMES {
        let curve = named_curve(name).expect("named curve");
        let (w, _) = to_weierstrass(&curve).expect("nonsingular");
        let search = three_torsion_search(&w, &budget);
        let scan = nagell_lutz_scan(&w, &budget);
        let witnesses_ok = search.points.iter().all(|p| w.contains(p) && w.order(p, 3) == Some(3));
        let transcript_ok = search.has_three_torsion() || search.roots.iter().all(|r| r.y.is_none());
        definitive &= search.divisor_scan_agrees == Some(true)
            && scan.complete
            && scan.of_order(3) == search.points
            && witnesses_ok
            && transcript_ok;
        verdicts.push(format!(
            "{name} {}",
            if search.has_three_torsion() { "present" } else { "absent" }
        ));
    }
    let elapsed = started.elapsed().as_secs();
    Verdict::new(
        axiom_failures == 0 && disagreements == 0 && compared > 0 && definitive && elapsed < 300,
        format!(
            "200 curves, {axiom_failures} axiom failures; {compared} compared, {disagreements} disagreements; {} ({elapsed}s)",
            verdicts.join(", ")
        ),
    )
}

fn criterion_10() -> Verdict {
    let commands: [&[&str]; 4] = [
        &["verify-family", "B", "--from", "1", "--to", "25"],
        &["verify-family", "A", "--from", "1", "--to", "10"],
        &["verify-family", "C", "--from", "1", "--to", "10"],
        &["verify-quadruple", "--k", "1"],
    ];
    let run = |jobs: &str| {
        let mut all = Vec::new();
        for cmd in commands {
            let mut argv = vec!["quadclass", "--no-timestamps", "--jobs", jobs];
            argv.extend_from_slice(cmd);
            let mut err = Vec::new();
            run_command(argv, &mut all, &mut err);
        }
        all
    };
    let first = run("4");
    let second = run("4");
    let serial = run("1");
    let lines = first.iter().filter(|&&b| b == b'\n').count();
    Verdict::new(
        !first.is_empty() && first == second && first == serial,
        format!("{lines} json lines, {} bytes, identical across runs and worker counts: {}", first.len(), first == second && first == serial),
    )
}

fn main() -> ExitCode {
    let mut fields = Fields::default();
    let criteria: Vec<(u32, &str, Box<dyn FnOnce(&mut Fields) -> Verdict>)> = vec![
        (1, "family B direct verification", Box::new(criterion_1)),
        (2, "family A direct verification", Box::new(criterion_2)),
        (3, "family C direct verification", Box::new(criterion_3)),
        (4, "quadruple assembly", Box::new(|_| criterion_4())),
        (5, "discriminant identities", Box::new(|_| criterion_5())),
        (6, "congruence ledger", Box::new(|_| criterion_6())),
        (7, "oracle equivalence", Box::new(|_| criterion_7())),
        (8, "Scholz reflection", Box::new(|f: &mut Fields| criterion_8(f))),
        (9, "elliptic suite", Box::new(|_| criterion_9())),
        (10, "determinism", Box::new(|_| criterion_10())),
    ];
    let mut unexpected = 0;
    for (n, title, run) in criteria {
        let started = Instant::now();
        let v = run(&mut fields);
        let secs = started.elapsed().as_secs_f64();
        let known = KNOWN_FAILURES.contains(&n);
        let tag = match (v.pass, known) {
            (true, false) => "PASS",
            (false, true) if v.known_counterexample => "FAIL (known counterexample)",
            (true, true) => "PASS (expected failure did not occur)",
            _ => "FAIL",
        };
        if !(v.pass && !known) && !(known && !v.pass && v.known_counterexample) {
            unexpected += 1;
        }
        println!("criterion {n:>2} {tag}: {title}: {} [{secs:.1}s]", v.detail.trim_end());
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria deviate from the recorded outcome");
        ExitCode::FAILURE
    }
}
