//! Assemble the quadruple of fields built on `D = C(k)`.
//!
//! ```text
//! cargo run --example quadruple -- 1
//! ```

use quadclass::families::{quadruple, DirectCheck, VerifyOptions};

fn main() -> quadclass::Result<()> {
    let k: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let report = quadruple(k, &VerifyOptions::default())?;
    println!("k = {k}, D = {}", report.d);
    for c in &report.components {
        let cert = c.certificate.as_ref().map_or("none".to_string(), |c| c.is_valid().to_string());
        let direct = match &c.direct {
            DirectCheck::Computed(r) => format!("h+ = {}", r.narrow_h.unwrap_or(0)),
            DirectCheck::Skipped(_) => "certificate only".to_string(),
        };
        println!("{:>5}  {:<26} valid certificate: {cert:<5}  {direct}", c.label, c.radicand);
        println!("       kernel {} (complete: {})", c.decomposition.kernel, c.decomposition.complete);
    }
    Ok(())
}
