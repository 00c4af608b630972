// The tuple of (n−1)-qubit marginals and how to compare two of them.
//
//     cargo run --example marginals

use rdm_determined::ghz::{ghz_family, GhzParams};
use rdm_determined::rdm::{partial_trace_pure, ptr_tuple, ptr_tuple_pure, rdm_max_distance};
use rdm_determined::{PureState, C64};

fn main() -> rdm_determined::Result<()> {
    let w = PureState::w_state(4)?;
    let tuple = ptr_tuple_pure(&w)?;
    assert_eq!(tuple.parts().len(), 4);
    // Tracing out qubit 2 by hand gives the second entry.
    let by_hand = partial_trace_pure(&w, &[2])?;
    assert!(by_hand.distance(tuple.part(2)) < 1e-14);
    // Overlapping marginals agree on what they share.
    println!(
        "W4 consistency residual {:.1e}",
        tuple.consistency_residual()
    );
    assert!(tuple.consistency_residual() < 1e-14);

    // A GHZ state and the dephased mixture at z = 0 are indistinguishable
    // from any n−1 qubits.
    let params = GhzParams::from_weight(4, 0.7, 0.4)?;
    let pure = ptr_tuple_pure(&params.state())?;
    let mixed = ptr_tuple(&ghz_family(&params, C64::new(0.0, 0.0))?)?;
    let d = rdm_max_distance(&pure, &mixed)?;
    println!("GHZ vs dephased GHZ: largest marginal distance {d:.1e}");
    assert!(d < 1e-12);

    // W and GHZ of the same size are not.
    let d = rdm_max_distance(&tuple, &pure)?;
    println!("W4 vs GHZ4: {d:.3}");
    assert!(d > 0.1);
    Ok(())
}
