use super::{
    hermitian_eigenvalues, inner, norm, CMatrix, MultiIndex, C64, HERMITIAN_TOL, NORM_TOL, PSD_TOL,
    TRACE_TOL,
};
use crate::{Error, Result};

/// Normalized amplitude vector `Σ_I c_I |I⟩` over `2^n` basis states.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct PureState {
    n: usize,
    amps: Vec<C64>,
}

impl PureState {
    /// Rejects wrong lengths and squared norms off by more than `1e-10`.
    pub fn new(n: usize, amps: Vec<C64>) -> Result<Self> {
        check_len(n, amps.len())?;
        let norm_sqr: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization { norm_sqr });
        }
        Ok(Self { n, amps })
    }

    /// Scales a nonzero vector to unit norm. Intended for building states in
    /// code; data read from outside should go through [`PureState::new`].
    pub fn from_unnormalized(n: usize, mut amps: Vec<C64>) -> Result<Self> {
        check_len(n, amps.len())?;
        let nrm = norm(&amps);
        if !(nrm > 0.0) || !nrm.is_finite() {
            return Err(Error::Normalization {
                norm_sqr: nrm * nrm,
            });
        }
        amps.iter_mut().for_each(|z| *z /= nrm);
        Ok(Self { n, amps })
    }

    pub(crate) fn new_unchecked(n: usize, amps: Vec<C64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n);
        Self { n, amps }
    }

    /// `|I⟩` for a flat index.
    pub fn basis(n: usize, flat: usize) -> Result<Self> {
        check_len(n, 1 << n)?;
        if flat >= 1 << n {
            return Err(Error::Dimension {
                expected: 1 << n,
                found: flat + 1,
            });
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[flat] = C64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// `(|0…01⟩ + |0…10⟩ + … + |10…0⟩)/√n`
    pub fn w_state(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::QubitCount {
                n,
                requirement: "n ≥ 2 required",
            });
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        for k in 0..n {
            amps[1 << k] = C64::new(1.0, 0.0);
        }
        Self::from_unnormalized(n, amps)
    }

    /// Tensor product, `self` on the leading qubits.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        PureState::new_unchecked(self.n + other.n, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn amp(&self, idx: MultiIndex) -> C64 {
        self.amps[idx.flat()]
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &PureState) -> C64 {
        inner(&self.amps, &other.amps)
    }

    /// `|ψ⟩⟨ψ|`
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::new_unchecked(self.n, CMatrix::outer(&self.amps))
    }

    /// Multiplies by a global phase so the largest-magnitude amplitude is
    /// real and positive (ties go to the lowest index).
    pub fn with_canonical_phase(mut self) -> Self {
        canonicalize_phase(&mut self.amps);
        self
    }
}

/// Rotates `v` by a global phase so its largest-magnitude entry (lowest index
/// on ties within 1e-12) is real positive.
pub(crate) fn canonicalize_phase(v: &mut [C64]) {
    let mut best = 0usize;
    let mut best_mag = -1.0f64;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mag + 1e-12 {
            best = i;
            best_mag = m;
        }
    }
    if best_mag > 0.0 {
        let phase = v[best].conj() / best_mag;
        v.iter_mut().for_each(|z| *z *= phase);
        v[best] = C64::new(v[best].norm(), 0.0);
    }
}

fn check_len(n: usize, len: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::QubitCount {
            n,
            requirement: "n ≥ 1 required",
        });
    }
    if n > 16 {
        return Err(Error::QubitCount {
            n,
            requirement: "n ≤ 16 supported",
        });
    }
    if len != 1 << n {
        return Err(Error::Dimension {
            expected: 1 << n,
            found: len,
        });
    }
    Ok(())
}

/// Hermitian, unit-trace, positive-semidefinite `2^n × 2^n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    m: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-12 entrywise), trace (1e-10) and
    /// positivity (smallest eigenvalue ≥ −1e-9).
    pub fn new(n: usize, m: CMatrix) -> Result<Self> {
        check_len(n, m.dim())?;
        let max_asymmetry = m.max_asymmetry();
        if max_asymmetry > HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_asymmetry });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Trace { trace: tr.re });
        }
        let values = hermitian_eigenvalues(&m)?;
        if let Some(&min) = values.first() {
            if min < -PSD_TOL {
                return Err(Error::NotPsd {
                    min_eigenvalue: min,
                });
            }
        }
        Ok(Self { n, m })
    }

    pub(crate) fn new_unchecked(n: usize, m: CMatrix) -> Self {
        debug_assert_eq!(m.dim(), 1 << n);
        Self { n, m }
    }

    /// `I / 2^n`
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        check_len(n, 1 << n)?;
        Ok(Self::new_unchecked(
            n,
            CMatrix::identity(1 << n).scale(1.0 / (1u64 << n) as f64),
        ))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn distance(&self, other: &DensityMatrix) -> f64 {
        self.m.distance(&other.m)
    }

    /// `tr ρ²`
    pub fn purity(&self) -> f64 {
        self.m.hs_inner(&self.m).re
    }
}
