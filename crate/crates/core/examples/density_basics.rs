//! Partial traces, partial transposes and an entropy report for a random
//! two-qutrit state.
//!
//! cargo run --example density_basics

use privrand::entropic::entropy_report;
use privrand::random::{random_density, rng_for};
use privrand::SubsystemLayout;

fn main() -> privrand::Result<()> {
    let mut rng = rng_for(3, 0);
    let rho = random_density(SubsystemLayout::bipartite(3, 3), &mut rng);
    let v = rho.validate()?;
    println!("trace {:.12}, min eigenvalue {:.3e}", v.trace, v.min_eigenvalue);
    println!("rho_A =\n{}", rho.marginal(&["A"])?.matrix());
    let ppt = rho.is_ppt(&["B"])?;
    println!("PPT: {} (min eigenvalue of the transpose {:.4})", ppt.ppt, ppt.min_eigenvalue);
    let r = entropy_report(&rho, &["B"])?;
    println!("S(AB)={:.6} S(A)={:.6} S(B)={:.6} I(A:B)={:.6}", r.s_ab, r.s_a, r.s_b, r.i_ab);
    Ok(())
}
