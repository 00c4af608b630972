// From a pure ψ and a mixed ω with the same marginals, build a second pure
// state with those marginals by pushing the mixture (1−a)ψψ† + aω past
// a = 1 until it loses rank.
//
//     cargo run --example pure_partner

use rdm_determined::construct::{eigen2, pure_partner, pure_partner_report};
use rdm_determined::ghz::{ghz_family, GhzParams};
use rdm_determined::qstate::{random_local_unitary, SplitMix64};
use rdm_determined::rdm::{ptr_tuple_pure, rdm_max_distance};
use rdm_determined::C64;

fn main() -> rdm_determined::Result<()> {
    let params = GhzParams::from_weight(3, 0.8, 0.0)?;
    let psi = params.state();
    let omega = ghz_family(&params, C64::new(0.0, 0.0))?;

    let r = pure_partner_report(&psi, &omega)?;
    println!(
        "a* = {:.6} in [{}, {:.6}], low eigenvalue at a* {:.1e}",
        r.a_star, r.legitimate_interval.0, r.legitimate_interval.1, r.low_at_star
    );
    println!(
        "partner: marginal distance {:.1e}, |<psi|psi'>| = {:.6}, omega = {:.4} psi + {:.4} psi'",
        r.rdm_distance,
        r.overlap,
        r.lambda,
        1.0 - r.lambda
    );
    // Dephasing sits halfway: the partner is α|000⟩ − β|111⟩, whose
    // overlap with ψ is |α|² − |β|².
    assert!((r.a_star - 2.0).abs() < 1e-9);
    assert!((r.overlap - 0.6).abs() < 1e-9);
    assert!(r.rdm_distance < 1e-10 && r.mixture_residual < 1e-10);

    // Same after a local unitary, with a generic member of the disk.
    let mut rng = SplitMix64::new(21);
    let u = random_local_unitary(3, &mut rng);
    let psi_u = u.apply(&psi);
    let omega_u = u.apply_density(&ghz_family(&params, C64::new(0.3, 0.2))?);
    let partner = pure_partner(&psi_u, &omega_u)?;
    let d = rdm_max_distance(&ptr_tuple_pure(&psi_u)?, &ptr_tuple_pure(&partner)?)?;
    println!(
        "rotated: marginal distance {d:.1e}, overlap {:.4}",
        psi_u.inner(&partner).norm()
    );
    assert!(d < 1e-10);
    assert!(psi_u.inner(&partner).norm() < 1.0 - 1e-6);

    // The 2×2 block behind it, [[1/2+z, ū], [u, 1/2−z]], has closed-form
    // eigenvalues 1/2 ± √(|u|²+z²).
    let (lo, hi) = eigen2(0.3, C64::new(0.1, 0.2));
    println!("eigen2(0.3, 0.1+0.2i) = ({lo:.6}, {hi:.6})");
    assert!((hi - lo - 2.0 * 0.14f64.sqrt()).abs() < 1e-15);

    // ω must be mixed.
    assert!(pure_partner(&psi, &psi.projector()).is_err());
    Ok(())
}
