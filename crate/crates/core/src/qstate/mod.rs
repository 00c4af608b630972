//! State representations and the dense linear algebra everything else uses.

mod eig;
pub(crate) mod index;
pub(crate) mod local;
mod matrix;
mod pauli;
mod random;
pub(crate) mod state;

pub use eig::{hermitian_eig, hermitian_eigenvalues, numeric_rank, EigDecomposition};
pub use index::MultiIndex;
pub use local::LocalUnitary;
pub use matrix::{inner, norm, CMatrix};
pub use pauli::{Pauli, PauliWord};
pub use random::{haar_random_state, random_local_unitary, SplitMix64};
pub use state::{DensityMatrix, PureState};

pub type C64 = num_complex::Complex64;

/// Hermiticity tolerance accepted by [`hermitian_eig`].
pub const EIG_HERMITIAN_TOL: f64 = 1e-10;
/// Squared-norm tolerance for [`PureState`].
pub const NORM_TOL: f64 = 1e-10;
/// Entrywise Hermiticity tolerance for [`DensityMatrix`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Trace tolerance for [`DensityMatrix`].
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue still accepted as PSD.
pub const PSD_TOL: f64 = 1e-9;
/// Default eigenvalue threshold for [`numeric_rank`].
pub const RANK_THRESHOLD: f64 = 1e-8;

/// Flat-index bit position of 1-based qubit `j` among `n` qubits.
#[inline]
pub(crate) fn bit_pos(n: usize, j: usize) -> usize {
    n - j
}

pub(crate) fn check_qubit(n: usize, j: usize) -> crate::Result<()> {
    if j == 0 || j > n {
        return Err(crate::Error::QubitLabel { qubit: j, n });
    }
    Ok(())
}
