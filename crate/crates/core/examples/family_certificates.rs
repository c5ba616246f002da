//! Certificates and direct class-number checks for the first members of each
//! family.
//!
//! ```text
//! cargo run --example family_certificates
//! ```

use quadclass::families::{family_instance, Certificate, DirectCheck, FamilyId, VerifyOptions};

fn main() -> quadclass::Result<()> {
    let opts = VerifyOptions::default();
    for family in [FamilyId::A, FamilyId::B, FamilyId::C] {
        println!("family {family}");
        for p in 1..=4u64 {
            let inst = family_instance(family, p, &opts)?;
            let cert = match &inst.certificate {
                Certificate::Km(c) => format!("{} branch {}", c.polynomial, c.d_branch),
                Certificate::Kishi(c) => format!("α = {}, N = {}", c.element, c.norm),
            };
            let direct = match &inst.direct {
                DirectCheck::Computed(r) => format!("h+ = {}, 3 | h: {}", r.narrow_h.unwrap_or(0), r.divisible_by_3()),
                DirectCheck::Skipped(why) => format!("skipped: {why}"),
            };
            println!("  {p:>2}  radicand {:<12} {cert:<40} {direct}", inst.radicand);
        }
    }
    Ok(())
}
