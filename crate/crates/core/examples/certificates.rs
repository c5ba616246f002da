//! The two cubic criteria on hand-picked inputs.
//!
//! ```text
//! cargo run --example certificates
//! ```

use num_bigint::BigInt;
use quadclass::kishi::{kishi_certificate, HalfIntegralElement};
use quadclass::km::km_certificate;
use quadclass::number::FactorBudget;

fn main() -> quadclass::Result<()> {
    let budget = FactorBudget::default();
    for (u, v) in [(2, 11), (4, 921), (2, 4), (1, 3)] {
        let c = km_certificate(&BigInt::from(u), &BigInt::from(v), &budget);
        println!(
            "F = {:<18} a={} b={} c={} d={}  valid={}  radicand {}",
            c.polynomial.to_string(),
            c.cond_a,
            c.cond_b,
            c.cond_c,
            c.d_branch,
            c.valid,
            c.field_radicand
        );
    }

    for (a, b, m) in [(9, 1, 70385), (1, 1, 5), (2, 0, 5)] {
        let c = kishi_certificate(&HalfIntegralElement::new(a, b, m)?);
        println!(
            "α = {:<18} N = {:<7} P = {:<14} valid={}  target {}  resolvent {:?}",
            c.element.to_string(),
            c.norm,
            c.polynomial.map(|p| p.to_string()).unwrap_or_default(),
            c.valid,
            c.target_radicand,
            c.resolvent
        );
        for note in &c.notes {
            println!("    {note}");
        }
    }
    Ok(())
}
