// Marginal-preserving perturbations: the full-weight Pauli span W, the
// longest PSD step along one direction, and the search over directions.
//
//     cargo run --example feasibility_search

use rdm_determined::compat::{
    fullweight_basis, marginal_norm, project_fullweight, search, tmax_along, Direction,
    SearchOptions,
};
use rdm_determined::ghz::GhzParams;
use rdm_determined::qstate::haar_random_state;
use rdm_determined::{CMatrix, C64};

fn main() -> rdm_determined::Result<()> {
    let basis = fullweight_basis(3)?;
    println!(
        "n = 3: {} full-weight words, first {:?}",
        basis.count(),
        basis.words()[0]
    );
    assert_eq!(basis.count(), 27);

    // Anything in W has vanishing marginals; projection onto W removes the
    // rest.
    let d = Direction::word(&basis, 5)?;
    assert!(marginal_norm(d.matrix(), 3)? < 1e-14);
    let arbitrary = haar_random_state(3, 1)?.projector();
    let p = project_fullweight(arbitrary.matrix(), 3)?;
    assert!(marginal_norm(&p, 3)? < 1e-14);

    // GHZ: ρ + t·Δ stays a state for t in [−√2, 0] along the coherence
    // |000⟩⟨111| + h.c.
    let ghz = GhzParams::from_weight(3, 0.5, 0.0)?.state().projector();
    let mut coh = CMatrix::zeros(8);
    coh[(0, 7)] = C64::new(1.0, 0.0);
    coh[(7, 0)] = C64::new(1.0, 0.0);
    let dir = Direction::from_matrix(&basis, &coh)?;
    let (lo, hi) = tmax_along(&ghz, &dir)?;
    println!("GHZ along the coherence: t in [{lo:.6}, {hi:.6}]");
    assert!((lo + 2f64.sqrt()).abs() < 1e-8 && hi.abs() < 1e-8);

    // The search finds the same for GHZ and nothing for a generic state.
    let opts = SearchOptions {
        restarts: 4,
        seed: 7,
        ..SearchOptions::default()
    };
    let g = search(&ghz, &opts)?;
    let h = search(&haar_random_state(3, 2)?.projector(), &opts)?;
    println!(
        "search: GHZ {:.4} via {:?}; Haar {:.1e}",
        g.sup_tmax, g.best_source, h.sup_tmax
    );
    assert!(g.sup_tmax > 1.4);
    assert!(h.sup_tmax < 1e-6);
    Ok(())
}
