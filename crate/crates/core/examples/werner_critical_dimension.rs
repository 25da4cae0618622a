//! Critical dimensions of Werner states over the default alpha grid.
//!
//! cargo run --example werner_critical_dimension

use privrand::werner::{critical_dimension, default_alpha_grid, write_dcri_csv, DEFAULT_D_MAX};

fn main() -> privrand::Result<()> {
    let rows = default_alpha_grid()
        .into_iter()
        .map(|a| critical_dimension(a, DEFAULT_D_MAX))
        .collect::<privrand::Result<Vec<_>>>()?;
    write_dcri_csv(&rows, std::io::stdout().lock())?;

    for c in rows.iter().filter(|c| c.discrepancy()) {
        println!(
            "alpha={}: scan gives {:?}, plot shows {:?}; exact equality at d={:?}",
            c.alpha, c.d_cri, c.reported, c.equality_at
        );
    }
    Ok(())
}
