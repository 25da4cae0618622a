//! Random dephasing-channel protocols leave the maximally mixed state
//! untouched; a reset channel, which is outside the class, does not.
//!
//! cargo run --example unitality

use privrand::clodcc::{random_circuit, verify_channel_unital, verify_unital};
use privrand::densop::{ops, ComplexMatrix, Party, Register, SubsystemLayout};
use privrand::random::rng_for;

fn main() -> privrand::Result<()> {
    let layout = SubsystemLayout::new(vec![
        Register::new("A", 2, Party::A),
        Register::new("C", 3, Party::C),
        Register::new("B", 2, Party::B),
    ])?;
    let mut rng = rng_for(1, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let c = random_circuit(&layout, 15, &mut rng);
        worst = worst.max(verify_unital(&c)?.deviation);
    }
    println!("100 random protocols: max deviation from I/D = {worst:.2e}");

    // trace out A and prepare |0><0| in its place
    let reset = |m: &ComplexMatrix| -> privrand::Result<ComplexMatrix> {
        let (rest, _) = ops::partial_trace(m, &layout, &["A"])?;
        Ok(ComplexMatrix::projector(&ops::basis_vector(2, 0)).kron(&rest))
    };
    let r = verify_channel_unital(&layout, reset)?;
    println!("reset channel: deviation {:.3}, unital = {}", r.deviation, r.pass);
    Ok(())
}
