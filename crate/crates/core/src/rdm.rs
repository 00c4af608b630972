//! Partial traces and the map `ρ ↦ (ρ_(1), …, ρ_(n))` onto the tuple of
//! (n−1)-qubit reduced density matrices.

use crate::qstate::{bit_pos, check_qubit, CMatrix, DensityMatrix, PureState, C64};
use crate::{Error, Result};

/// Two tuples are the same marginals when [`rdm_max_distance`] is at most this.
pub const RDM_EQ_TOL: f64 = 1e-9;

/// For each traced-bit pattern `t`, the full indices of the kept basis states
/// in kept order: `table[t][a]`.
fn index_table(n: usize, traced: &[usize]) -> Vec<Vec<usize>> {
    let traced_pos: Vec<usize> = traced.iter().map(|&j| bit_pos(n, j)).collect();
    let kept_pos: Vec<usize> = (1..=n)
        .filter(|j| !traced.contains(j))
        .map(|j| bit_pos(n, j))
        .collect();
    let (nt, nk) = (traced_pos.len(), kept_pos.len());
    (0..1usize << nt)
        .map(|t| {
            (0..1usize << nk)
                .map(|a| {
                    let mut full = 0usize;
                    // kept_pos / traced_pos run from most to least significant
                    for (bit, &pos) in kept_pos.iter().enumerate() {
                        full |= ((a >> (nk - 1 - bit)) & 1) << pos;
                    }
                    for (bit, &pos) in traced_pos.iter().enumerate() {
                        full |= ((t >> (nt - 1 - bit)) & 1) << pos;
                    }
                    full
                })
                .collect()
        })
        .collect()
}

fn validate_subset(n: usize, qubits: &[usize]) -> Result<Vec<usize>> {
    if qubits.is_empty() {
        return Err(Error::Subset("empty subset".into()));
    }
    let mut sorted = qubits.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != qubits.len() {
        return Err(Error::Subset(format!("repeated qubit in {qubits:?}")));
    }
    for &j in &sorted {
        check_qubit(n, j)?;
    }
    if sorted.len() == n {
        return Err(Error::Subset("cannot trace out every qubit".into()));
    }
    Ok(sorted)
}

/// Partial trace of any `2^n × 2^n` matrix over the 1-based `qubits`.
/// The remaining qubits keep their relative order.
pub fn partial_trace_matrix(m: &CMatrix, n: usize, qubits: &[usize]) -> Result<CMatrix> {
    if m.dim() != 1 << n {
        return Err(Error::Dimension {
            expected: 1 << n,
            found: m.dim(),
        });
    }
    let traced = validate_subset(n, qubits)?;
    let table = index_table(n, &traced);
    let dk = 1usize << (n - traced.len());
    let mut out = CMatrix::zeros(dk);
    for rows in &table {
        for (a, &ra) in rows.iter().enumerate() {
            let src = m.row(ra);
            for (b, &rb) in rows.iter().enumerate() {
                out[(a, b)] += src[rb];
            }
        }
    }
    Ok(out)
}

pub fn partial_trace(rho: &DensityMatrix, qubits: &[usize]) -> Result<DensityMatrix> {
    let out = partial_trace_matrix(rho.matrix(), rho.n(), qubits)?;
    Ok(DensityMatrix::new_unchecked(rho.n() - qubits.len(), out))
}

/// `tr_S |ψ⟩⟨ψ|` straight from amplitudes.
pub fn partial_trace_pure(psi: &PureState, qubits: &[usize]) -> Result<DensityMatrix> {
    let n = psi.n();
    let traced = validate_subset(n, qubits)?;
    let table = index_table(n, &traced);
    let dk = 1usize << (n - traced.len());
    let amps = psi.amps();
    let mut out = CMatrix::zeros(dk);
    for rows in &table {
        for (a, &ra) in rows.iter().enumerate() {
            let x = amps[ra];
            if x == C64::new(0.0, 0.0) {
                continue;
            }
            for (b, &rb) in rows.iter().enumerate() {
                out[(a, b)] += x * amps[rb].conj();
            }
        }
    }
    Ok(DensityMatrix::new_unchecked(n - traced.len(), out))
}

/// The n-tuple of (n−1)-qubit reduced density matrices; part `j` (1-based)
/// has qubit `j` traced out.
#[derive(Clone, Debug, PartialEq)]
pub struct RdmTuple {
    n: usize,
    parts: Vec<DensityMatrix>,
}

impl RdmTuple {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[DensityMatrix] {
        &self.parts
    }

    /// Part with 1-based qubit `j` traced out.
    pub fn part(&self, j: usize) -> &DensityMatrix {
        &self.parts[j - 1]
    }

    /// Largest Frobenius gap between tracing `k` out of part `j` and `j` out
    /// of part `k`, over all `j < k`. Zero for `n = 2` comparisons of scalars
    /// is skipped: there the (n−2)-qubit state is the number 1.
    pub fn consistency_residual(&self) -> f64 {
        let n = self.n;
        if n < 3 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for j in 1..=n {
            for k in (j + 1)..=n {
                // inside part j, qubit k is relabelled k−1; inside part k, qubit j keeps its label
                let a = partial_trace_matrix(self.part(j).matrix(), n - 1, &[k - 1])
                    .expect("valid relabelled qubit");
                let b =
                    partial_trace_matrix(self.part(k).matrix(), n - 1, &[j]).expect("valid qubit");
                worst = worst.max(a.distance(&b));
            }
        }
        worst
    }
}

fn require_two(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::QubitCount {
            n,
            requirement: "n ≥ 2 required",
        });
    }
    Ok(())
}

pub fn ptr_tuple(rho: &DensityMatrix) -> Result<RdmTuple> {
    require_two(rho.n())?;
    let parts = (1..=rho.n())
        .map(|j| partial_trace(rho, &[j]))
        .collect::<Result<_>>()?;
    Ok(RdmTuple { n: rho.n(), parts })
}

pub fn ptr_tuple_pure(psi: &PureState) -> Result<RdmTuple> {
    require_two(psi.n())?;
    let parts = (1..=psi.n())
        .map(|j| partial_trace_pure(psi, &[j]))
        .collect::<Result<_>>()?;
    Ok(RdmTuple { n: psi.n(), parts })
}

/// Single-qubit partial traces of an arbitrary (possibly indefinite) matrix.
pub fn ptr_parts_matrix(m: &CMatrix, n: usize) -> Result<Vec<CMatrix>> {
    require_two(n)?;
    (1..=n).map(|j| partial_trace_matrix(m, n, &[j])).collect()
}

/// Per-part Frobenius distances between two tuples.
pub fn rdm_distances(a: &RdmTuple, b: &RdmTuple) -> Result<Vec<f64>> {
    if a.n != b.n {
        return Err(Error::Dimension {
            expected: a.n,
            found: b.n,
        });
    }
    Ok(a.parts
        .iter()
        .zip(&b.parts)
        .map(|(x, y)| x.distance(y))
        .collect())
}

/// `max_j ‖a_j − b_j‖_F`
pub fn rdm_max_distance(a: &RdmTuple, b: &RdmTuple) -> Result<f64> {
    Ok(rdm_distances(a, b)?.into_iter().fold(0.0, f64::max))
}

/// Errors with the worst qubit when the tuples differ by more than `tol`.
pub fn require_same_rdms(a: &RdmTuple, b: &RdmTuple, tol: f64) -> Result<f64> {
    let d = rdm_distances(a, b)?;
    let (worst, dist) =
        d.iter().copied().enumerate().fold(
            (0, 0.0f64),
            |acc, (i, x)| if x > acc.1 { (i, x) } else { acc },
        );
    if dist > tol {
        return Err(Error::RdmMismatch {
            qubit: worst + 1,
            distance: dist,
        });
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> PureState {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(
            2,
            vec![
                C64::new(r, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(r, 0.0),
            ],
        )
        .unwrap()
    }

    fn ghz3() -> PureState {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut a = vec![C64::new(0.0, 0.0); 8];
        a[0] = C64::new(r, 0.0);
        a[7] = C64::new(r, 0.0);
        PureState::new(3, a).unwrap()
    }

    fn diag(vals: &[f64]) -> CMatrix {
        CMatrix::from_fn(vals.len(), |r, c| {
            C64::new(if r == c { vals[r] } else { 0.0 }, 0.0)
        })
    }

    #[test]
    fn product_state_trace() {
        let rho = PureState::basis(2, 0).unwrap().projector();
        let out = partial_trace(&rho, &[2]).unwrap();
        assert_eq!(out.matrix(), &diag(&[1.0, 0.0]));
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let out = partial_trace(&bell().projector(), &[2]).unwrap();
        assert!(out.matrix().distance(&diag(&[0.5, 0.5])) < 1e-15);
        let t = ptr_tuple(&bell().projector()).unwrap();
        for p in t.parts() {
            assert!(p.matrix().distance(&diag(&[0.5, 0.5])) < 1e-15);
        }
    }

    #[test]
    fn ghz_marginals() {
        let expect = diag(&[0.5, 0.0, 0.0, 0.5]);
        let out = partial_trace(&ghz3().projector(), &[1]).unwrap();
        assert!(out.matrix().distance(&expect) < 1e-15);
        let t = ptr_tuple(&ghz3().projector()).unwrap();
        assert_eq!(t.parts().len(), 3);
        for p in t.parts() {
            assert!(p.matrix().distance(&expect) < 1e-15);
        }
        assert!(t.consistency_residual() < 1e-15);
    }

    #[test]
    fn subset_errors() {
        let rho = ghz3().projector();
        assert!(matches!(partial_trace(&rho, &[]), Err(Error::Subset(_))));
        assert!(matches!(
            partial_trace(&rho, &[1, 2, 3]),
            Err(Error::Subset(_))
        ));
        assert!(matches!(
            partial_trace(&rho, &[4]),
            Err(Error::QubitLabel { .. })
        ));
        assert!(matches!(
            partial_trace(&rho, &[2, 2]),
            Err(Error::Subset(_))
        ));
        let one = PureState::basis(1, 0).unwrap().projector();
        assert!(matches!(ptr_tuple(&one), Err(Error::QubitCount { .. })));
    }

    #[test]
    fn pure_fast_path_matches_matrix_path() {
        let psi = crate::qstate::haar_random_state(4, 5).unwrap();
        for s in [vec![1], vec![3], vec![2, 4], vec![1, 2, 3]] {
            let a = partial_trace_pure(&psi, &s).unwrap();
            let b = partial_trace(&psi.projector(), &s).unwrap();
            assert!(a.distance(&b) < 1e-14);
        }
    }

    #[test]
    fn mismatched_tuples_rejected() {
        let a = ptr_tuple(&bell().projector()).unwrap();
        let b = ptr_tuple(&ghz3().projector()).unwrap();
        assert!(rdm_max_distance(&a, &b).is_err());
    }
}
