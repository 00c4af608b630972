// Purifications of GHZ family members against ψ's Schmidt data: the
// relations hold for honest purifications and fail once Ω is disturbed.

use rdm_determined::ghz::{ghz_family, GhzParams};
use rdm_determined::qstate::{norm, SplitMix64};
use rdm_determined::schmidt::{
    env_vectors_from_split, extract_env_vectors, main_constraint_residual, proof_check, purify,
    schmidt_split, Purification,
};
use rdm_determined::{CMatrix, MultiIndex, C64};

/// Gram–Schmidt on the columns of `I + εG`, G complex Gaussian: a random
/// unitary at distance O(ε) from the identity.
fn near_identity_unitary(dim: usize, eps: f64, seed: u64) -> CMatrix {
    let mut rng = SplitMix64::new(seed);
    let mut cols: Vec<Vec<C64>> = (0..dim)
        .map(|c| {
            (0..dim)
                .map(|r| {
                    let g = rng.next_complex_gaussian() * eps;
                    if r == c {
                        g + 1.0
                    } else {
                        g
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..dim {
        for k in 0..c {
            let proj: C64 = cols[k]
                .iter()
                .zip(&cols[c])
                .map(|(a, b)| a.conj() * b)
                .sum();
            let prev = cols[k].clone();
            for (x, p) in cols[c].iter_mut().zip(prev) {
                *x -= proj * p;
            }
        }
        let s = norm(&cols[c]);
        cols[c].iter_mut().for_each(|x| *x /= s);
    }
    CMatrix::from_fn(dim, |r, c| cols[c][r])
}

fn worst(p: &Purification, psi: &rdm_determined::PureState) -> f64 {
    let check = proof_check(p, psi).unwrap();
    check
        .relations
        .max()
        .max(check.main_constraint.unwrap_or(0.0))
}

#[test]
fn honest_purifications_satisfy_every_relation() {
    for n in 3..=5 {
        for (k, z) in [
            C64::new(0.0, 0.0),
            C64::new(0.5, 0.0),
            C64::new(0.0, 0.5),
            C64::new(-0.3, 0.6),
        ]
        .into_iter()
        .enumerate()
        {
            let params = GhzParams::from_weight(n, 0.2 + 0.15 * k as f64, 0.5 * k as f64).unwrap();
            let omega = purify(&ghz_family(&params, z).unwrap()).unwrap();
            assert!(worst(&omega, &params.state()) <= 1e-9, "n={n} z={z}");
        }
    }
}

#[test]
fn disturbed_purifications_break_the_main_constraint() {
    for n in 3..=4 {
        let params = GhzParams::from_weight(n, 0.7, 0.3).unwrap();
        let omega = purify(&ghz_family(&params, C64::new(0.2, 0.1)).unwrap()).unwrap();
        let dim = omega.vector().len();
        let psi = params.state();
        for seed in 0..5 {
            let bent = omega
                .rotated(&near_identity_unitary(dim, 0.1, seed))
                .unwrap();
            // The full check refuses outright: the marginals moved.
            assert!(proof_check(&bent, &psi).is_err());
            let envs: Vec<_> = (1..=n)
                .map(|j| env_vectors_from_split(&bent, &schmidt_split(&psi, j).unwrap()).unwrap())
                .collect();
            let mut r: f64 = 0.0;
            for idx in MultiIndex::all(n) {
                for j in 0..n {
                    for k in (j + 1)..n {
                        r = r.max(main_constraint_residual(&envs[j], &envs[k], &psi, idx).unwrap());
                    }
                }
            }
            assert!(r > 1e-3, "n={n} seed={seed}: residual {r:.2e}");
        }
    }
}

#[test]
fn pure_omega_has_no_cross_terms() {
    let params = GhzParams::from_weight(3, 0.5, 0.0).unwrap();
    let psi = params.state();
    let omega = purify(&psi.projector()).unwrap();
    assert_eq!(omega.env_dim(), 1);
    let envs: Vec<_> = (1..=3)
        .map(|j| extract_env_vectors(&omega, &psi, j).unwrap())
        .collect();
    for j in 0..3 {
        for k in 0..3 {
            if j == k {
                continue;
            }
            for idx in MultiIndex::all(3) {
                let r = main_constraint_residual(&envs[j], &envs[k], &psi, idx).unwrap();
                assert!(r <= 1e-12);
            }
        }
    }
    assert!(
        main_constraint_residual(&envs[0], &envs[0], &psi, MultiIndex::from_flat(3, 0)).is_err()
    );
}
