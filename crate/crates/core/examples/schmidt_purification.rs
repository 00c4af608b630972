// One-qubit Schmidt splits, purifications of a compatible mixed state, and
// the environment-vector relations they obey.
//
//     cargo run --example schmidt_purification

use rdm_determined::ghz::{ghz_family, GhzParams};
use rdm_determined::qstate::haar_random_state;
use rdm_determined::schmidt::{product_split_test, proof_check, purify, schmidt_split};
use rdm_determined::{PureState, C64};

fn main() -> rdm_determined::Result<()> {
    // ψ = Σᵢ √qᵢ |αᵢ⟩_j ⊗ |χᵢ⟩ for every qubit j.
    let psi = haar_random_state(4, 5)?;
    for j in 1..=4 {
        let s = schmidt_split(&psi, j)?;
        println!("qubit {j}: q = ({:.4}, {:.4})", s.q[0], s.q[1]);
        assert!(s.reconstruction_residual(&psi) < 1e-12);
        assert!(!s.is_product());
    }

    // Product across qubit 1: only one Schmidt term.
    let product = PureState::basis(1, 0)?.tensor(&haar_random_state(2, 6)?);
    assert!(product_split_test(&product, 1, 1e-10)?);
    assert!(schmidt_split(&product, 1)?.alpha[1].is_none());

    // Purify a rank-2 member of the GHZ family and check every relation
    // between ψ's Schmidt data and the purification's environment vectors.
    let params = GhzParams::from_weight(3, 0.6, 0.7)?;
    let omega = ghz_family(&params, C64::new(0.2, 0.5))?;
    let pur = purify(&omega)?;
    println!(
        "purification: n = {}, environment dimension {}",
        pur.n(),
        pur.env_dim()
    );
    assert!(pur.reduced_state().distance(&omega) < 1e-12);

    let check = proof_check(&pur, &params.state())?;
    let main = check.main_constraint.unwrap_or(0.0);
    println!(
        "relations: worst residual {:.1e}, main constraint {main:.1e}, first lemma {}",
        check.relations.max(),
        check.lemma1_ok
    );
    assert!(check.relations.max() < 1e-9 && main < 1e-9 && check.lemma1_ok);
    Ok(())
}
