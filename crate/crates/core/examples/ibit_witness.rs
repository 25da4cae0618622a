//! Untwist-and-measure witness on noisy copies of the d=2 swap-twisted ibit,
//! against the lower bound (1 - eps) m - h(eps).
//!
//! cargo run --example ibit_witness

use privrand::bounds::ibit_witness_bound;
use privrand::ensembles::{alpha_v, alpha_v_twisting, depolarize_register};

fn main() -> privrand::Result<()> {
    let ibit = alpha_v(2)?;
    let spec = alpha_v_twisting(2)?;
    for eps in [0.0, 0.01, 0.05, 0.1, 0.2] {
        let noisy = depolarize_register(&ibit, "A", eps)?;
        let r = ibit_witness_bound(&noisy, &spec, 1, eps)?;
        println!("eps={eps:<5} witness={:.6} bound={:.6} pass={}", r.witness, r.bound, r.pass);
    }
    Ok(())
}
