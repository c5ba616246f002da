//! Squarefree kernels of family C radicands; distinct kernels mean distinct fields.
//!
//! ```text
//! cargo run --example distinctness_scan -- 1 50
//! ```

use quadclass::families::{kernel_distinctness_scan, VerifyOptions};

fn main() -> quadclass::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().expect("integer"));
    let from = args.next().unwrap_or(1);
    let to = args.next().unwrap_or(20);
    let report = kernel_distinctness_scan(from, to, &VerifyOptions::default())?;
    for e in report.entries.iter().take(10) {
        println!("k = {:>3}  kernel {}", e.k, e.kernel);
    }
    println!(
        "{} kernels, all distinct: {}, incomplete: {:?}",
        report.entries.len(),
        report.all_distinct(),
        report.incomplete
    );
    Ok(())
}
