//! A random private state rewritten as a local independent state whose
//! random dit sits at A, then at B.
//!
//! cargo run --example private_to_independent

use privrand::densop::{Party, Register, SubsystemLayout};
use privrand::ensembles::{private_state, private_to_independent, TwistingSpec};
use privrand::random::{random_density, random_unitary, rng_for};

fn main() -> privrand::Result<()> {
    let mut rng = rng_for(7, 0);
    let shield = SubsystemLayout::new(vec![Register::new("A'", 2, Party::A), Register::new("B'", 2, Party::B)])?;
    for d in [2, 3, 4, 6] {
        let us = (0..d).map(|_| random_unitary(4, &mut rng)).collect();
        let spec = TwistingSpec::new(d, us, shield.clone())?;
        let sigma = random_density(shield.clone(), &mut rng);
        let gamma = private_state(&spec, &sigma)?;
        for party in [Party::A, Party::B] {
            let idit = private_to_independent(&spec, &sigma, party)?;
            let diff = idit.in_private_order()?.matrix().max_abs_diff(gamma.matrix());
            println!("d={d} dit at {party}: max entry difference {diff:.2e}");
        }
    }
    Ok(())
}
