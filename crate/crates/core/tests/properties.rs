// Randomized properties of each layer. Inputs are drawn from seeds so a
// failing case replays from the seed proptest prints.

use proptest::prelude::*;
use rdm_determined::cli::io::StateFile;
use rdm_determined::compat::{
    determinedness, fullweight_basis, rank2_check, tmax_along, Direction,
};
use rdm_determined::construct::{eigen2, pure_partner_report};
use rdm_determined::ghz::{detect_ghz_type, ghz_family, GhzParams, DEFAULT_TOL};
use rdm_determined::qstate::{
    haar_random_state, hermitian_eig, hermitian_eigenvalues, numeric_rank, random_local_unitary,
    MultiIndex, SplitMix64,
};
use rdm_determined::rdm::{
    partial_trace_matrix, partial_trace_pure, ptr_parts_matrix, ptr_tuple, ptr_tuple_pure,
    rdm_max_distance,
};
use rdm_determined::schmidt::{product_split_test, proof_check, purify, schmidt_split};
use rdm_determined::{CMatrix, DensityMatrix, PureState, C64};

fn random_hermitian(dim: usize, seed: u64) -> CMatrix {
    let mut rng = SplitMix64::new(seed);
    let g = CMatrix::from_fn(dim, |_, _| rng.next_complex_gaussian());
    g.hermitian_part()
}

fn params(n: usize, seed: u64) -> GhzParams {
    let mut rng = SplitMix64::new(seed);
    let p = 0.05 + 0.9 * rng.next_f64();
    GhzParams::from_weight(n, p, std::f64::consts::TAU * rng.next_f64()).unwrap()
}

/// A point of the closed unit disk, uniform in area.
fn disk_point(rng: &mut SplitMix64) -> C64 {
    C64::from_polar(
        rng.next_f64().sqrt(),
        std::f64::consts::TAU * rng.next_f64(),
    )
}

fn max_part_distance(a: &[CMatrix], b: &[CMatrix]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.distance(y))
        .fold(0.0, f64::max)
}

// qstate

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eig_reconstructs(dim in 1usize..=16, seed in any::<u64>()) {
        let m = random_hermitian(dim, seed);
        let e = hermitian_eig(&m).unwrap();
        prop_assert!(e.reconstruct().distance(&m) <= 1e-10 * dim as f64);
        prop_assert!(e.orthonormality_defect() <= 1e-10);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eigen2_matches_solver(z in -1.0f64..1.0, re in -1.0f64..1.0, im in -1.0f64..1.0) {
        let u = C64::new(re, im);
        let h = 0.5;
        let m = CMatrix::from_rows(&[
            vec![C64::new(h + z, 0.0), u.conj()],
            vec![u, C64::new(h - z, 0.0)],
        ])
        .unwrap();
        let v = hermitian_eigenvalues(&m).unwrap();
        let (lo, hi) = eigen2(z, u);
        prop_assert!((v[0] - lo).abs() <= 1e-12 && (v[1] - hi).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_is_monotone_in_threshold(dim in 2usize..=8, seed in any::<u64>(), t in 1e-6f64..1.0) {
        let m = random_hermitian(dim, seed);
        let m = m.matmul(&m);
        prop_assert!(numeric_rank(&m, t).unwrap() <= numeric_rank(&m, t / 10.0).unwrap());
    }

    #[test]
    fn pure_projectors_have_rank_one(n in 1usize..=5, seed in any::<u64>()) {
        let psi = haar_random_state(n, seed).unwrap();
        prop_assert_eq!(numeric_rank(psi.projector().matrix(), 1e-8).unwrap(), 1);
    }

    #[test]
    fn state_files_round_trip_bit_exactly(n in 1usize..=4, seed in any::<u64>()) {
        let psi = haar_random_state(n, seed).unwrap();
        let text = StateFile::Pure(psi.clone()).to_json();
        match StateFile::parse(&text).unwrap() {
            StateFile::Pure(back) => {
                for (a, b) in psi.amps().iter().zip(back.amps()) {
                    prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                    prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
                }
            }
            StateFile::Density(_) => prop_assert!(false, "kind changed"),
        }
        let rho = DensityMatrix::new(n, psi.projector().matrix().clone()).unwrap();
        let text = StateFile::Density(rho.clone()).to_json();
        prop_assert_eq!(StateFile::parse(&text).unwrap(), StateFile::Density(rho));
    }
}

#[test]
fn slot_complement_is_an_involution() {
    for n in 1..=6 {
        for idx in MultiIndex::all(n) {
            for j in 1..=n {
                let c = idx.complement(j);
                assert_eq!(c.complement(j), idx);
                assert_ne!(c.bit(j), idx.bit(j));
                assert_eq!(c.hamming(&idx), 1);
            }
        }
    }
}

// rdm

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn partial_trace_is_linear(n in 2usize..=4, seed in any::<u64>(), x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let d = 1 << n;
        let (a, b) = (random_hermitian(d, seed), random_hermitian(d, seed ^ 0x5555));
        let mut combo = a.scale(x);
        combo.add_scaled(&b, y);
        for j in 1..=n {
            let lhs = partial_trace_matrix(&combo, n, &[j]).unwrap();
            let mut rhs = partial_trace_matrix(&a, n, &[j]).unwrap().scale(x);
            rhs.add_scaled(&partial_trace_matrix(&b, n, &[j]).unwrap(), y);
            prop_assert!(lhs.distance(&rhs) < 1e-12);
        }
    }

    #[test]
    fn partial_traces_compose(seed in any::<u64>()) {
        let psi = haar_random_state(4, seed).unwrap();
        let once = partial_trace_pure(&psi, &[1, 2]).unwrap();
        let first = partial_trace_pure(&psi, &[1]).unwrap();
        let twice = partial_trace_matrix(first.matrix(), 3, &[1]).unwrap();
        prop_assert!(once.matrix().distance(&twice) < 1e-13);
    }

    #[test]
    fn marginals_do_not_determine_ghz(n in 3usize..=5, seed in any::<u64>()) {
        let p = params(n, seed);
        let a = p.state();
        let b = GhzParams::new(n, p.a, -p.b).unwrap().state();
        let d = rdm_max_distance(&ptr_tuple_pure(&a).unwrap(), &ptr_tuple_pure(&b).unwrap()).unwrap();
        prop_assert!(d < 1e-12);
        prop_assert!(a.projector().distance(&b.projector()) > 0.5 || p.imbalance() > 0.85);
    }
}

// schmidt

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn schmidt_splits_reconstruct(n in 3usize..=4, seed in any::<u64>()) {
        let psi = haar_random_state(n, seed).unwrap();
        for j in 1..=n {
            let s = schmidt_split(&psi, j).unwrap();
            prop_assert!(s.reconstruction_residual(&psi) <= 1e-9);
            prop_assert!((s.q[0] + s.q[1] - 1.0).abs() <= 1e-9);
            prop_assert!(s.q[0] >= s.q[1]);
        }
    }

    #[test]
    fn product_test_matches_spectrum(n in 3usize..=4, seed in any::<u64>(), product in any::<bool>()) {
        let psi = if product {
            haar_random_state(1, seed).unwrap().tensor(&haar_random_state(n - 1, seed ^ 1).unwrap())
        } else {
            haar_random_state(n, seed).unwrap()
        };
        let tol = 1e-10;
        let s = schmidt_split(&psi, 1).unwrap();
        let verdict = product_split_test(&psi, 1, tol).unwrap();
        prop_assert_eq!(verdict, s.q[1] <= tol);
        prop_assert_eq!(verdict, product);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    // Every relation between ψ's Schmidt data and a purification of a
    // compatible ω, including the first lemma as a property.
    #[test]
    fn purification_relations_hold(n in 3usize..=5, seed in any::<u64>()) {
        let p = params(n, seed);
        let mut rng = SplitMix64::new(seed ^ 0xabc);
        let z = disk_point(&mut rng) * 0.999;
        let omega = ghz_family(&p, z).unwrap();
        let check = proof_check(&purify(&omega).unwrap(), &p.state()).unwrap();
        prop_assert!(check.relations.max() <= 1e-9, "{:?}", check.relations);
        prop_assert!(check.main_constraint.unwrap_or(0.0) <= 1e-9);
        prop_assert!(check.lemma1_ok);
        for env in &check.envs {
            prop_assert!(env.lemma1_holds(1e-10, 1e-8));
        }
    }
}

// ghz

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn family_shares_marginals(n in 2usize..=5, seed in any::<u64>()) {
        let p = params(n, seed);
        let reference = ptr_tuple_pure(&p.state()).unwrap();
        let mut rng = SplitMix64::new(seed);
        for _ in 0..50 {
            let member = ghz_family(&p, disk_point(&mut rng)).unwrap();
            prop_assert!(rdm_max_distance(&reference, &ptr_tuple(&member).unwrap()).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn detection_is_lu_invariant(n in 3usize..=4, seed in any::<u64>(), kind in 0usize..4) {
        let psi = match kind {
            0 => params(n, seed).state(),
            1 => PureState::w_state(n).unwrap(),
            2 => haar_random_state(1, seed).unwrap().tensor(&haar_random_state(n - 1, seed + 1).unwrap()),
            _ => haar_random_state(n, seed).unwrap(),
        };
        let base = detect_ghz_type(&psi, DEFAULT_TOL).unwrap();
        let mut rng = SplitMix64::new(seed ^ 0xfeed);
        let rotated = random_local_unitary(n, &mut rng).apply(&psi);
        let cert = detect_ghz_type(&rotated, DEFAULT_TOL).unwrap();
        prop_assert_eq!(base.is_ghz(), cert.is_ghz());
        prop_assert_eq!(base.is_ghz(), kind == 0);
        if let (Some(a), Some(b)) = (base.params, cert.params) {
            prop_assert!((a.a.norm() - b.a.norm()).abs() <= 1e-8);
            prop_assert!((a.b.norm() - b.b.norm()).abs() <= 1e-8);
        }
        // Soundness: a positive certificate rebuilds the input.
        if cert.is_ghz() {
            let back = PureState::new(n, cert.reassemble().unwrap()).unwrap();
            prop_assert!(1.0 - back.inner(&rotated).norm() <= cert.residual.max(1e-12));
        }
    }
}

#[test]
fn haar_states_are_not_ghz() {
    for seed in 0..200u64 {
        let psi = haar_random_state(3 + (seed % 2) as usize, 5000 + seed).unwrap();
        assert!(
            !detect_ghz_type(&psi, DEFAULT_TOL).unwrap().is_ghz(),
            "seed {seed}"
        );
    }
}

// compat

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn feasible_steps_keep_marginals(n in 2usize..=4, seed in any::<u64>(), s in 0.05f64..1.0, u in 0.0f64..1.0) {
        let d = 1usize << n;
        let psi = haar_random_state(n, seed).unwrap();
        let mut m = psi.projector().matrix().scale(1.0 - s);
        m.add_scaled(&CMatrix::identity(d), s / d as f64);
        let rho = DensityMatrix::new(n, m).unwrap();
        let basis = fullweight_basis(n).unwrap();
        let mut rng = SplitMix64::new(seed ^ 0x77);
        let coeffs: Vec<f64> = (0..basis.count()).map(|_| rng.next_gaussian_pair().0).collect();
        let dir = Direction::from_coeffs(&basis, coeffs).unwrap();
        let (lo, hi) = tmax_along(&rho, &dir).unwrap();
        prop_assert!(lo < 0.0 && hi > 0.0);
        let t = lo + u * (hi - lo);
        let mut moved = rho.matrix().clone();
        moved.add_scaled(dir.matrix(), t);
        let a = ptr_parts_matrix(&moved, n).unwrap();
        let b = ptr_parts_matrix(rho.matrix(), n).unwrap();
        prop_assert!(max_part_distance(&a, &b) <= 1e-10);
        prop_assert!(moved.is_psd_shifted(1e-9));
    }

    #[test]
    fn family_members_have_rank_two(n in 3usize..=5, seed in any::<u64>()) {
        let p = params(n, seed);
        let mut rng = SplitMix64::new(seed);
        let z = disk_point(&mut rng) * 0.999;
        let u = random_local_unitary(n, &mut rng);
        let omega = u.apply_density(&ghz_family(&p, z).unwrap());
        prop_assert!(rank2_check(&u.apply(&p.state()), &omega).unwrap());
    }
}

// Haar and rotated GHZ states at n = 3, 4: the verdict is the negation of
// the detector and the numeric cross-check never disagrees.
#[test]
fn verdict_matches_detector() {
    for k in 0..250u64 {
        let n = 3 + (k % 2) as usize;
        let psi = if k < 200 {
            haar_random_state(n, 9000 + k).unwrap()
        } else {
            let mut rng = SplitMix64::new(k);
            random_local_unitary(n, &mut rng).apply(&params(n, k).state())
        };
        let v = determinedness(&psi).unwrap();
        let ghz = detect_ghz_type(&psi, DEFAULT_TOL).unwrap().is_ghz();
        assert_eq!(v.determined(), Some(!ghz), "sample {k}");
        assert_eq!(ghz, k >= 200);
        assert!(v.anomaly.is_none(), "sample {k}: {:?}", v.anomaly);
    }
}

// construct

#[test]
fn partner_round_trip_over_a_grid() {
    for i in 0..10 {
        let p = params(3 + i % 3, 300 + i as u64);
        let psi = p.state();
        for k in 0..10 {
            let z = C64::from_polar(0.05 + 0.09 * k as f64, 0.7 * k as f64);
            let omega = ghz_family(&p, z).unwrap();
            let r = pure_partner_report(&psi, &omega).unwrap();
            let far = psi.projector().distance(&r.partner.projector());
            assert!(far > 0.1, "params {i}, z {z}: distance {far}");
            assert!(r.rdm_distance <= 1e-8);
            // The low eigenvalue crosses zero exactly once, at a*.
            assert!(r.low_at_one > 0.0 && r.low_at_star.abs() <= 1e-10 && r.min_low_inside > 0.0);
            assert!(r.lambda > 0.0 && r.lambda < 1.0 && r.mixture_residual <= 1e-7);
        }
    }
}
