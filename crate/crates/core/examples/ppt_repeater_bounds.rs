//! Repeater bounds for pairs of Werner states and the gap condition that
//! separates localisable from repeated randomness.
//!
//! cargo run --example ppt_repeater_bounds

use privrand::bounds::{gap_condition, mi_form_bound, ppt_repeater_bound, ppt_transposed_rate_bound, purity_form_bound};
use privrand::ensembles::{werner, WernerParams};

fn main() -> privrand::Result<()> {
    println!("{:>3} {:>5} {:>12} {:>12} {:>12} {:>12}  gap", "d", "alpha", "relent", "purity", "tensor", "2I(gamma)");
    for d in [2, 3, 5] {
        for alpha in [0.25, 0.6, 1.0] {
            let rho = werner(WernerParams::new(d, alpha)?);
            let rel = ppt_repeater_bound(&rho, &rho)?.value;
            let pur = purity_form_bound(&rho, &rho)?.value;
            let ten = ppt_transposed_rate_bound(&rho, &rho)?.value;
            let mi = mi_form_bound(&rho)?.value;
            let gap = gap_condition(&rho)?;
            println!(
                "{d:>3} {alpha:>5} {rel:>12.9} {pur:>12.9} {ten:>12.9} {mi:>12.9}  {} ({:+.4})",
                gap.holds, gap.margin
            );
        }
    }
    Ok(())
}
