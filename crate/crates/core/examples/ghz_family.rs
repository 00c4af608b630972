// The GHZ family F(z), |z| ≤ 1, and the local-unitary GHZ detector.
//
//     cargo run --example ghz_family

use rdm_determined::ghz::{detect_ghz_type, ghz_family, DetectorBranch, GhzParams, DEFAULT_TOL};
use rdm_determined::qstate::{numeric_rank, random_local_unitary, SplitMix64, RANK_THRESHOLD};
use rdm_determined::rdm::{ptr_tuple, ptr_tuple_pure, rdm_max_distance};
use rdm_determined::{PureState, C64};

fn main() -> rdm_determined::Result<()> {
    let params = GhzParams::from_weight(3, 0.8, 1.1)?;
    let psi = params.state();
    let reference = ptr_tuple_pure(&psi)?;

    // Every member shares ψ's marginals; z = 1 is ψ and the unit circle
    // holds the other pure members.
    for (re, im) in [(1.0, 0.0), (0.5, 0.0), (0.0, 0.0), (0.0, 1.0), (-1.0, 0.0)] {
        let z = C64::new(re, im);
        let member = ghz_family(&params, z)?;
        let d = rdm_max_distance(&reference, &ptr_tuple(&member)?)?;
        let rank = numeric_rank(member.matrix(), RANK_THRESHOLD)?;
        println!("z = {re:+.1}{im:+.1}i  rank {rank}  marginal distance {d:.1e}");
        assert!(d < 1e-12);
        assert_eq!(rank, if z.norm() > 0.999 { 1 } else { 2 });
    }
    assert!(ghz_family(&params, C64::new(1.1, 0.0)).is_err());

    // Hide the state behind a random local unitary; the detector finds
    // the amplitudes and the local bases again.
    let mut rng = SplitMix64::new(42);
    let hidden = random_local_unitary(3, &mut rng).apply(&psi);
    let cert = detect_ghz_type(&hidden, DEFAULT_TOL)?;
    let found = cert.params.expect("GHZ certificate carries amplitudes");
    println!(
        "detector: {:?} via {:?}, |a| = {:.9}, |b| = {:.9}",
        cert.verdict,
        cert.branch,
        found.a.norm(),
        found.b.norm()
    );
    assert!(cert.is_ghz());
    assert!((found.a.norm() - params.a.norm()).abs() < 1e-9);
    let back = PureState::new(3, cert.reassemble().expect("bases present"))?;
    assert!((back.inner(&hidden).norm() - 1.0).abs() < 1e-9);

    // Balanced GHZ has degenerate one-qubit spectra, handled separately.
    let balanced = GhzParams::from_weight(4, 0.5, 0.0)?.state();
    let cert = detect_ghz_type(
        &random_local_unitary(4, &mut rng).apply(&balanced),
        DEFAULT_TOL,
    )?;
    assert!(cert.is_ghz());
    assert_eq!(cert.branch, DetectorBranch::Degenerate);

    // The W state is not GHZ-type.
    assert!(!detect_ghz_type(&PureState::w_state(3)?, DEFAULT_TOL)?.is_ghz());
    Ok(())
}
