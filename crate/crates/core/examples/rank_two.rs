// A mixed state sharing the marginals of a pure n ≥ 3 qubit state has
// rank exactly 2.
//
//     cargo run --example rank_two

use rdm_determined::compat::rank2_check;
use rdm_determined::ghz::{ghz_family, GhzParams};
use rdm_determined::qstate::{numeric_rank, random_local_unitary, SplitMix64, RANK_THRESHOLD};
use rdm_determined::{DensityMatrix, PureState, C64};

fn main() -> rdm_determined::Result<()> {
    let mut rng = SplitMix64::new(8);
    for n in 3..=5 {
        let params = GhzParams::from_weight(n, 0.35, 0.9)?;
        let u = random_local_unitary(n, &mut rng);
        let psi = u.apply(&params.state());
        for z in [C64::new(0.0, 0.0), C64::new(0.4, -0.3), C64::new(-0.9, 0.0)] {
            let omega = u.apply_density(&ghz_family(&params, z)?);
            let rank = numeric_rank(omega.matrix(), RANK_THRESHOLD)?;
            println!("n = {n}, z = {z:.2}: rank {rank}");
            assert!(rank2_check(&psi, &omega)?);
        }
    }

    // Two qubits are outside the statement: the maximally mixed state
    // shares the one-qubit marginals of a Bell state.
    let bell = PureState::from_unnormalized(
        2,
        vec![
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        ],
    )?;
    assert!(rank2_check(&bell, &DensityMatrix::maximally_mixed(2)?).is_err());
    Ok(())
}
