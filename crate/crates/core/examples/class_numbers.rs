//! Class numbers from reduced forms, the unit norm, and the Scholz check.
//!
//! ```text
//! cargo run --example class_numbers -- 79
//! ```

use num_bigint::BigInt;
use quadclass::forms::{real_class_number, rho_cycles, scholz_reflection, DEFAULT_FORM_CAP};
use quadclass::number::{field_from_radicand, FactorBudget};

fn main() -> quadclass::Result<()> {
    let d: BigInt = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or_else(|| 79.into());
    let budget = FactorBudget::default();
    let field = field_from_radicand(&d, &budget)?;
    let disc = field.discriminant_i64().expect("small discriminant");
    println!("Q(√{d}): fundamental discriminant {disc}");

    let r = real_class_number(disc, DEFAULT_FORM_CAP)?;
    println!("h+ = {:?}, h = {:?}, N(ε) = {:?}, {} reduced forms", r.narrow_h, r.h, r.unit_norm, r.form_count);
    for (i, cycle) in rho_cycles(disc, DEFAULT_FORM_CAP)?.iter().enumerate().take(3) {
        let shown: Vec<String> = cycle.iter().take(4).map(ToString::to_string).collect();
        println!("  cycle {i}: {} ... ({} forms)", shown.join(" → "), cycle.len());
    }

    let s = scholz_reflection(&d, &budget, DEFAULT_FORM_CAP)?;
    println!("h(Q(√{})) = {:?}, 3 | h: {}", s.imaginary_kernel, s.imaginary.h, s.holds);
    Ok(())
}
