// The verdict: determined by the marginals, or GHZ-type with a whole disk
// of compatible states.
//
//     cargo run --example determinedness

use rdm_determined::compat::{determinedness, determinedness_with, Determinedness, VerdictOptions};
use rdm_determined::ghz::GhzParams;
use rdm_determined::qstate::{haar_random_state, random_local_unitary, SplitMix64};
use rdm_determined::rdm::{ptr_tuple, ptr_tuple_pure, rdm_max_distance};
use rdm_determined::{PureState, C64};

fn main() -> rdm_determined::Result<()> {
    let mut rng = SplitMix64::new(3);

    let generic = haar_random_state(3, 17)?;
    let w = PureState::w_state(4)?;
    let ghz =
        random_local_unitary(4, &mut rng).apply(&GhzParams::from_weight(4, 0.3, 2.0)?.state());

    for (name, psi) in [("haar", &generic), ("W", &w), ("rotated GHZ", &ghz)] {
        let v = determinedness(psi)?;
        println!(
            "{name:12} {:?}  largest feasible step {:.2e}  ({} directions)",
            v.verdict, v.numeric_sup_tmax, v.samples_used
        );
        assert!(v.anomaly.is_none());
    }
    assert_eq!(determinedness(&generic)?.determined(), Some(true));
    assert_eq!(determinedness(&w)?.determined(), Some(true));

    // Undetermined: the verdict carries the family and the search found a
    // long marginal-preserving step.
    let v = determinedness(&ghz)?;
    assert_eq!(v.verdict, Determinedness::Undetermined);
    let family = v
        .witness_family
        .expect("undetermined verdicts carry a witness");
    println!("witness: {}", family.description());
    let other = family.member(C64::new(-1.0, 0.0))?;
    let d = rdm_max_distance(&ptr_tuple_pure(&ghz)?, &ptr_tuple(&other)?)?;
    println!(
        "far member: marginal distance {d:.1e}, distance to psi {:.3}",
        other.distance(&ghz.projector())
    );
    assert!(d < 1e-9);
    assert!(other.distance(&ghz.projector()) > 0.5);

    // Within √tol of GHZ, but not within tol: neither answer is safe.
    let eps = 1e-6;
    let mut amps = vec![C64::new(0.0, 0.0); 8];
    amps[0b000] = C64::new(1.0, 0.0);
    amps[0b111] = C64::new(1.0, 0.0);
    amps[0b010] = C64::new(eps, 0.0);
    amps[0b101] = C64::new(eps, 0.0);
    let near = PureState::from_unnormalized(3, amps)?;
    let v = determinedness_with(&near, &VerdictOptions::default())?;
    println!("near-GHZ at eps = {eps:e}: {:?}", v.verdict);
    assert_eq!(v.verdict, Determinedness::Inconclusive);
    assert_eq!(v.determined(), None);
    Ok(())
}
