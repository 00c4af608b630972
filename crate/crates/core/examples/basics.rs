// States, the index convention, Pauli words and the eigensolver.
//
//     cargo run --example basics

use rdm_determined::qstate::{haar_random_state, hermitian_eig, MultiIndex, PauliWord, SplitMix64};
use rdm_determined::{PureState, C64};

fn main() -> rdm_determined::Result<()> {
    // Qubit 1 is the most significant bit: |011⟩ sits at flat index 3.
    let idx = MultiIndex::from_bits(&[0, 1, 1]).expect("bits are 0 or 1");
    assert_eq!(idx.flat(), 3);
    assert_eq!(idx.bit(1), 0);
    println!("|011> -> flat {}", idx.flat());

    let w = PureState::w_state(3)?;
    let ket = PureState::basis(3, 0b100)?;
    println!("<100|W> = {:.6}", ket.inner(&w));
    assert!((ket.inner(&w).norm() - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);

    // Amplitudes must be normalized unless asked otherwise.
    assert!(PureState::new(1, vec![C64::new(1.0, 0.0); 2]).is_err());
    let plus = PureState::from_unnormalized(1, vec![C64::new(1.0, 0.0); 2])?;

    let zz = PauliWord::parse("ZZ").expect("valid word");
    let bell = PureState::from_unnormalized(
        2,
        vec![
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        ],
    )?;
    let e = zz.expectation(bell.projector().matrix());
    println!("<ZZ> on Bell = {:.3}", e.re);
    assert!((e.re - 1.0).abs() < 1e-12);

    // Jacobi eigendecomposition of a random density matrix.
    let rho = haar_random_state(3, 11)?.tensor(&plus).projector();
    let eig = hermitian_eig(rho.matrix())?;
    println!(
        "eigenvalues of a pure projector: min {:.2e}, max {:.6}",
        eig.min_value(),
        eig.max_value()
    );
    assert!(eig.reconstruct().distance(rho.matrix()) < 1e-12);
    assert!((eig.max_value() - 1.0).abs() < 1e-12);

    // The sampler is reproducible from its seed.
    let (mut a, mut b) = (SplitMix64::new(5), SplitMix64::new(5));
    assert_eq!(a.next_u64(), b.next_u64());
    assert_eq!(haar_random_state(4, 9)?, haar_random_state(4, 9)?);
    Ok(())
}
