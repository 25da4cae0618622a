//! The swap-twisted ibit family: one bit of localisable randomness at A,
//! yet its i.i.d. repeated randomness bound falls below one bit for d > 32.
//!
//! cargo run --release --example alpha_v_iid

use privrand::bounds::{alpha_iid_bound, iid_norm_bound};
use privrand::ensembles::alpha_v;
use privrand::entropic::localisable_randomness;
use privrand::Party;

fn main() -> privrand::Result<()> {
    for d in 2..=6 {
        let a = alpha_v(d)?;
        let lr = localisable_randomness(&a, Party::A)?;
        println!(
            "d={d}: R_A = {:?}, transposed distance to noise (pair) = {:.6}",
            lr.value,
            iid_norm_bound(&a, &a)?
        );
    }
    for d in [12, 16, 32, 33, 64, 128] {
        println!("alpha-iid bound at d={d}: {:.12}", alpha_iid_bound(d));
    }
    Ok(())
}
