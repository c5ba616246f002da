//! Rational 3-torsion on the curves attached to the families.
//!
//! ```text
//! cargo run --example elliptic_torsion
//! ```

use quadclass::elliptic::{named_curve, nagell_lutz_scan, three_torsion_search, to_weierstrass, CURVE_NAMES};
use quadclass::number::FactorBudget;

fn main() -> quadclass::Result<()> {
    let budget = FactorBudget::default();
    for name in CURVE_NAMES {
        let curve = named_curve(name).expect("known curve");
        let (model, scale) = to_weierstrass(&curve)?;
        println!("{name}: {curve}");
        println!("    {model}  (scale {scale})");

        let search = three_torsion_search(&model, &budget);
        for root in &search.roots {
            println!("    ψ3 root X = {}: rhs = {}, square: {}", root.x, root.rhs, root.y.is_some());
        }
        println!(
            "    divisor scan: {:?} candidates, agrees: {:?}",
            search.divisor_candidates_tested, search.divisor_scan_agrees
        );
        let scan = nagell_lutz_scan(&model, &budget);
        println!(
            "    Nagell-Lutz: {} torsion points from {} y-values (complete: {})",
            scan.points.len(),
            scan.y_candidates,
            scan.complete
        );
        println!("    3-torsion: {}", if search.has_three_torsion() { "present" } else { "absent" });
    }
    Ok(())
}
