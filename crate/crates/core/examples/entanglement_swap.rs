//! Entanglement swapping as a dephasing-channel protocol, loaded from the
//! script in `examples/data/swap` and compared with the built-in circuit.
//!
//! cargo run --example entanglement_swap

use std::path::Path;

use privrand::clodcc::{apply, entanglement_swap, load_script, swap_input};
use privrand::ensembles::max_entangled;

fn main() -> privrand::Result<()> {
    let input = swap_input();
    let script = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/swap/swap.prr");
    let circuit = load_script(&script, input.layout())?.with_eve();
    let out = apply(&circuit, &input)?;
    let ab = out.state.marginal(&["A", "B"])?;
    let target = max_entangled(2)?.relabel(ab.layout().clone())?;
    println!("scripted: fidelity {:.12}", ab.fidelity(&target)?);
    println!("Eve learns {:.3} bits", out.eve.map_or(0.0, |e| e.entropy()));

    let raw = entanglement_swap(false)?;
    println!("without correction, A and B hold:\n{}", raw.ab.matrix());
    Ok(())
}
