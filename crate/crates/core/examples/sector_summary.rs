//! Prints per-state diagnostics for one momentum sector of the hard-core
//! strongly driven chain.

use cbhm::enumerate::enumerate_sector;
use cbhm::observables::{entanglement_entropy, ipr, EntanglementCut};
use cbhm::params::ModelParams;

fn main() -> cbhm::Result<()> {
    let params = ModelParams {
        omega: 10.0,
        n: 10,
        u1_infinite: true,
        u2_infinite: true,
        ..ModelParams::default()
    };
    for state in enumerate_sector(&params, 0)? {
        let s = entanglement_entropy(&state.state, EntanglementCut::Coupled)?;
        println!(
            "ε = {:+.6}  {:?}  IPR {:.4}  S {:.4}",
            state.energy, state.family, ipr(&state.state)?, s.s_total,
        );
    }
    Ok(())
}
