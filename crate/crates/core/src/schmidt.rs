//! One-qubit Schmidt splits, purifications and environment vectors.
//!
//! For a pure `ψ` and a qubit `j`, `ψ = Σᵢ √qᵢ |χᵢ⟩|αᵢ⟩` with `q₀ ≥ q₁` and
//! `|αᵢ⟩` on qubit `j`. Given a purification `|Ω⟩` of a state with the same
//! marginals as `ψ`, contracting `Ω` against `χᵢ` yields vectors `|Eᵢ⟩` on
//! (qubit `j` ⊗ environment), and contracting those against `αᵣ` yields the
//! environment-only vectors `|e_{ir}⟩`. Their orthonormality relations and
//! the cross-qubit constraint
//!
//! ```text
//! c_I e^j_{i_j i_j} + c_{I_j} e^j_{i_j^c i_j} = c_I e^k_{i_k i_k} + c_{I_k} e^k_{i_k^c i_k}
//! ```
//!
//! are evaluated numerically here.
//!
//! Vector layouts: the environment is always the least significant factor.
//! `|Eᵢ⟩` is indexed `b·r + k` (qubit-`j` bit `b`, environment slot `k`);
//! `|Ωᵣ⟩` is indexed `rest·r + k` with `rest` the (n−1)-qubit label.

use crate::qstate::index::{insert_bit, remove_bit};
use crate::qstate::{
    bit_pos, check_qubit, hermitian_eig, inner, norm, CMatrix, DensityMatrix, LocalUnitary,
    MultiIndex, PureState, C64, PSD_TOL,
};
use crate::rdm::{partial_trace_pure, ptr_tuple, ptr_tuple_pure, require_same_rdms, RDM_EQ_TOL};
use crate::{Error, Result};

/// Below this `q₀·q₁` a split is treated as a product across the qubit.
pub const PRODUCT_SPLIT_EPS: f64 = 1e-12;

/// Eigenvalue cutoff for the environment dimension of a purification.
pub const PURIFY_RANK_THRESHOLD: f64 = 1e-10;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// `ψ = √q₀ |χ₀⟩|α₀⟩ + √q₁ |χ₁⟩|α₁⟩` across qubit `j`.
///
/// `chi` vectors have their largest-magnitude entry real positive; `alpha`
/// carries whatever phase the reconstruction then requires. When the split
/// is a product (`q₀q₁ ≤ 1e-12`) `alpha[1]` is not defined and is `None`.
#[derive(Clone, Debug)]
pub struct SchmidtSplit {
    pub n: usize,
    pub qubit: usize,
    pub q: [f64; 2],
    pub chi: [Vec<C64>; 2],
    pub alpha: [Option<[C64; 2]>; 2],
}

impl SchmidtSplit {
    pub fn is_product(&self) -> bool {
        self.q[0] * self.q[1] <= PRODUCT_SPLIT_EPS
    }

    /// `α₀`, always defined.
    pub fn alpha0(&self) -> [C64; 2] {
        self.alpha[0].expect("alpha0 is always defined")
    }

    /// `Σᵢ √qᵢ χᵢ ⊗ αᵢ` with `αᵢ` placed at slot `j`.
    pub fn reconstruct(&self) -> Vec<C64> {
        let pos = bit_pos(self.n, self.qubit);
        let mut out = vec![zero(); 1 << self.n];
        for i in 0..2 {
            let Some(alpha) = self.alpha[i] else { continue };
            let w = self.q[i].max(0.0).sqrt();
            for (rest, &x) in self.chi[i].iter().enumerate() {
                for b in 0..2 {
                    out[insert_bit(rest, pos, b)] += x * alpha[b] * w;
                }
            }
        }
        out
    }

    pub fn reconstruction_residual(&self, psi: &PureState) -> f64 {
        let r = self.reconstruct();
        r.iter()
            .zip(psi.amps())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Schmidt decomposition of `ψ` across qubit `j` (1-based).
///
/// `q` and `χ` come from the top two eigenpairs of `tr_j |ψ⟩⟨ψ|`; `αᵢ` is
/// `⟨χᵢ|ψ⟩` normalized. Degenerate `q₀ = q₁` leaves the `χ` pair in solver
/// order.
pub fn schmidt_split(psi: &PureState, j: usize) -> Result<SchmidtSplit> {
    let n = psi.n();
    if n < 2 {
        return Err(Error::QubitCount {
            n,
            requirement: "n ≥ 2 required",
        });
    }
    check_qubit(n, j)?;
    let rho = partial_trace_pure(psi, &[j])?;
    let eig = hermitian_eig(rho.matrix())?;
    let d = eig.dim();
    let q = [eig.values[d - 1], eig.values[d - 2].max(0.0)];
    let mut chi = [eig.vector(d - 1), eig.vector(d - 2)];
    for v in chi.iter_mut() {
        crate::qstate::state::canonicalize_phase(v);
    }
    let product = q[0] * q[1] <= PRODUCT_SPLIT_EPS;
    let pos = bit_pos(n, j);
    let mut alpha = [None, None];
    for i in 0..2 {
        if i == 1 && product {
            break;
        }
        let mut a = [zero(); 2];
        for (rest, x) in chi[i].iter().enumerate() {
            let xc = x.conj();
            for (b, slot) in a.iter_mut().enumerate() {
                *slot += xc * psi.amps()[insert_bit(rest, pos, b)];
            }
        }
        let nrm = norm(&a);
        if !(nrm > 0.0) {
            return Err(Error::Inconsistent(format!(
                "Schmidt vector {i} of qubit {j} has zero overlap with the state"
            )));
        }
        alpha[i] = Some([a[0] / nrm, a[1] / nrm]);
    }
    Ok(SchmidtSplit {
        n,
        qubit: j,
        q,
        chi,
        alpha,
    })
}

/// A pure state on n qubits ⊗ an `env_dim`-dimensional environment, indexed
/// `I·env_dim + k`.
#[derive(Clone, Debug)]
pub struct Purification {
    n: usize,
    env_dim: usize,
    omega: Vec<C64>,
}

impl Purification {
    /// Wraps an explicit joint vector; rejects wrong lengths and squared norms
    /// off by more than 1e-10.
    pub fn from_vector(n: usize, env_dim: usize, omega: Vec<C64>) -> Result<Self> {
        if env_dim == 0 || omega.len() != (1 << n) * env_dim {
            return Err(Error::Dimension {
                expected: (1 << n) * env_dim,
                found: omega.len(),
            });
        }
        let norm_sqr: f64 = omega.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > 1e-10 {
            return Err(Error::Normalization { norm_sqr });
        }
        Ok(Self { n, env_dim, omega })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    pub fn vector(&self) -> &[C64] {
        &self.omega
    }

    /// `tr_E |Ω⟩⟨Ω|`
    pub fn trace_out_env(&self) -> CMatrix {
        let d = 1usize << self.n;
        let r = self.env_dim;
        CMatrix::from_fn(d, |a, b| {
            (0..r)
                .map(|k| self.omega[a * r + k] * self.omega[b * r + k].conj())
                .sum()
        })
    }

    pub fn reduced_state(&self) -> DensityMatrix {
        DensityMatrix::new_unchecked(self.n, self.trace_out_env())
    }

    /// Applies a unitary on the joint space (row-major `(2^n·r)²` matrix).
    pub fn rotated(&self, u: &CMatrix) -> Result<Self> {
        if u.dim() != self.omega.len() {
            return Err(Error::Dimension {
                expected: self.omega.len(),
                found: u.dim(),
            });
        }
        Ok(Self {
            n: self.n,
            env_dim: self.env_dim,
            omega: u.mul_vec(&self.omega),
        })
    }
}

/// `|Ω⟩ = Σ_k √p_k |φ_k⟩|k⟩` over the eigenpairs of `ω` with `p_k > 1e-10`.
pub fn purify(omega: &DensityMatrix) -> Result<Purification> {
    let eig = hermitian_eig(omega.matrix())?;
    if eig.min_value() < -PSD_TOL {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.min_value(),
        });
    }
    let kept: Vec<usize> = (0..eig.dim())
        .rev()
        .filter(|&k| eig.values[k] > PURIFY_RANK_THRESHOLD)
        .collect();
    let r = kept.len();
    if r == 0 {
        return Err(Error::Trace { trace: 0.0 });
    }
    let d = eig.dim();
    let mut vec = vec![zero(); d * r];
    for (slot, &k) in kept.iter().enumerate() {
        let w = eig.values[k].sqrt();
        let phi = eig.vector(k);
        for (a, x) in phi.iter().enumerate() {
            vec[a * r + slot] = x * w;
        }
    }
    Ok(Purification {
        n: omega.n(),
        env_dim: r,
        omega: vec,
    })
}

/// Environment vectors of one qubit.
#[derive(Clone, Debug)]
pub struct EnvVectors {
    pub split: SchmidtSplit,
    pub env_dim: usize,
    pub rows: EnvRows,
}

#[derive(Clone, Debug)]
pub enum EnvRows {
    /// `q₀q₁ > 0`: every vector is defined.
    Full {
        /// `|Eᵢ⟩`, indexed `b·r + k`.
        big_e: [Vec<C64>; 2],
        /// `small[i][r] = |e_{ir}⟩`.
        small: [[Vec<C64>; 2]; 2],
        /// `|Ωᵣ⟩`, indexed `rest·r + k`.
        omega_split: [Vec<C64>; 2],
    },
    /// `q₁ = 0`: `|Ω⟩ = |χ₀⟩|E₀⟩` and only the `α₀` component of `E₀` is
    /// defined; the remaining vectors are absent.
    ProductSplit { big_e0: Vec<C64>, e00: Vec<C64> },
}

/// Maximal deviations in the orthonormality and consistency relations.
/// `None` entries are not defined for a product split.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize)]
pub struct EnvResiduals {
    /// `⟨E_{i'}|E_i⟩ = δ`
    pub big_e_orthonormality: f64,
    /// `⟨Ω_{r'}|Ω_r⟩ = δ`
    pub omega_orthonormality: Option<f64>,
    /// `Σ_r ⟨e_{i'r}|e_{ir}⟩ = δ`
    pub first_env_relation: Option<f64>,
    /// `Σ_i q_i ⟨e_{ir'}|e_{ir}⟩ = q_r δ`
    pub second_env_relation: Option<f64>,
    /// `√q_r Ω_r = Σ_i √q_i χ_i ⊗ e_{ir}`
    pub consistency: Option<f64>,
}

impl EnvResiduals {
    pub fn max(&self) -> f64 {
        [
            Some(self.big_e_orthonormality),
            self.omega_orthonormality,
            self.first_env_relation,
            self.second_env_relation,
            self.consistency,
        ]
        .into_iter()
        .flatten()
        .fold(0.0, f64::max)
    }
}

/// Contracts `Ω` against the split of the same qubit. No compatibility check:
/// use [`extract_env_vectors`] unless the purification is deliberately
/// incompatible.
pub fn env_vectors_from_split(omega: &Purification, split: &SchmidtSplit) -> Result<EnvVectors> {
    let n = omega.n();
    if split.n != n {
        return Err(Error::Dimension {
            expected: n,
            found: split.n,
        });
    }
    let r = omega.env_dim();
    let pos = bit_pos(n, split.qubit);
    let rest_dim = 1usize << (n - 1);
    let v = omega.vector();

    let contract_chi = |i: usize| -> Vec<C64> {
        let mut out = vec![zero(); 2 * r];
        for (rest, x) in split.chi[i].iter().enumerate() {
            let xc = x.conj();
            for b in 0..2 {
                let base = insert_bit(rest, pos, b) * r;
                for k in 0..r {
                    out[b * r + k] += xc * v[base + k];
                }
            }
        }
        let s = 1.0 / split.q[i].sqrt();
        out.iter_mut().for_each(|z| *z *= s);
        out
    };
    let contract_alpha_env = |big: &[C64], alpha: &[C64; 2]| -> Vec<C64> {
        (0..r)
            .map(|k| alpha[0].conj() * big[k] + alpha[1].conj() * big[r + k])
            .collect()
    };

    if split.is_product() {
        let big_e0 = contract_chi(0);
        let e00 = contract_alpha_env(&big_e0, &split.alpha0());
        return Ok(EnvVectors {
            split: split.clone(),
            env_dim: r,
            rows: EnvRows::ProductSplit { big_e0, e00 },
        });
    }

    let alpha = [split.alpha0(), split.alpha[1].expect("non-product split")];
    let big_e = [contract_chi(0), contract_chi(1)];
    let small = [
        [
            contract_alpha_env(&big_e[0], &alpha[0]),
            contract_alpha_env(&big_e[0], &alpha[1]),
        ],
        [
            contract_alpha_env(&big_e[1], &alpha[0]),
            contract_alpha_env(&big_e[1], &alpha[1]),
        ],
    ];
    let omega_split = [0, 1].map(|ri: usize| {
        let a = alpha[ri];
        let s = 1.0 / split.q[ri].sqrt();
        let mut out = vec![zero(); rest_dim * r];
        for rest in 0..rest_dim {
            let b0 = insert_bit(rest, pos, 0) * r;
            let b1 = insert_bit(rest, pos, 1) * r;
            for k in 0..r {
                out[rest * r + k] = (a[0].conj() * v[b0 + k] + a[1].conj() * v[b1 + k]) * s;
            }
        }
        out
    });
    Ok(EnvVectors {
        split: split.clone(),
        env_dim: r,
        rows: EnvRows::Full {
            big_e,
            small,
            omega_split,
        },
    })
}

/// Environment vectors of qubit `j` for a purification compatible with `ψ`.
///
/// Rejects, with the offending qubit and distance, a purification whose
/// reduced state does not share `ψ`'s marginals within 1e-9.
pub fn extract_env_vectors(omega: &Purification, psi: &PureState, j: usize) -> Result<EnvVectors> {
    check_compatible(omega, psi)?;
    let split = schmidt_split(psi, j)?;
    env_vectors_from_split(omega, &split)
}

fn check_compatible(omega: &Purification, psi: &PureState) -> Result<()> {
    if omega.n() != psi.n() {
        return Err(Error::Dimension {
            expected: psi.n(),
            found: omega.n(),
        });
    }
    let a = ptr_tuple(&omega.reduced_state())?;
    let b = ptr_tuple_pure(psi)?;
    require_same_rdms(&a, &b, RDM_EQ_TOL)?;
    Ok(())
}

impl EnvVectors {
    pub fn qubit(&self) -> usize {
        self.split.qubit
    }

    /// `|e_{ir}⟩` when defined.
    pub fn small(&self, i: usize, r: usize) -> Option<&[C64]> {
        match &self.rows {
            EnvRows::Full { small, .. } => Some(&small[i][r]),
            EnvRows::ProductSplit { e00, .. } => (i == 0 && r == 0).then_some(e00.as_slice()),
        }
    }

    pub fn residuals(&self) -> EnvResiduals {
        let q = self.split.q;
        match &self.rows {
            EnvRows::ProductSplit { big_e0, .. } => EnvResiduals {
                big_e_orthonormality: (inner(big_e0, big_e0).re - 1.0).abs(),
                ..Default::default()
            },
            EnvRows::Full {
                big_e,
                small,
                omega_split,
            } => {
                let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
                let mut eq3 = 0.0f64;
                let mut eq5 = 0.0f64;
                let mut first = 0.0f64;
                let mut second = 0.0f64;
                for a in 0..2 {
                    for b in 0..2 {
                        eq3 = eq3.max((inner(&big_e[a], &big_e[b]) - delta(a, b)).norm());
                        eq5 =
                            eq5.max((inner(&omega_split[a], &omega_split[b]) - delta(a, b)).norm());
                        let f: C64 = (0..2).map(|r| inner(&small[a][r], &small[b][r])).sum();
                        first = first.max((f - delta(a, b)).norm());
                        let s: C64 = (0..2)
                            .map(|i| inner(&small[i][a], &small[i][b]) * q[i])
                            .sum();
                        second = second.max((s - q[a] * delta(a, b)).norm());
                    }
                }
                let r = self.env_dim;
                let mut consistency = 0.0f64;
                for ri in 0..2 {
                    let mut diff: Vec<C64> =
                        omega_split[ri].iter().map(|z| z * q[ri].sqrt()).collect();
                    for i in 0..2 {
                        let w = q[i].sqrt();
                        for (rest, x) in self.split.chi[i].iter().enumerate() {
                            for k in 0..r {
                                diff[rest * r + k] -= x * small[i][ri][k] * w;
                            }
                        }
                    }
                    consistency = consistency.max(norm(&diff));
                }
                EnvResiduals {
                    big_e_orthonormality: eq3,
                    omega_orthonormality: Some(eq5),
                    first_env_relation: Some(first),
                    second_env_relation: Some(second),
                    consistency: Some(consistency),
                }
            }
        }
    }

    /// If `|e_{i i^c}⟩` vanishes (norm ≤ `zero_tol`) for some `i` on a
    /// non-product split, then `|e_{i^c i}⟩` must vanish too (norm ≤
    /// `conclusion_tol`). Returns `false` only on a counterexample.
    pub fn lemma1_holds(&self, zero_tol: f64, conclusion_tol: f64) -> bool {
        if self.split.is_product() {
            return true;
        }
        (0..2).all(|i| {
            let premise = norm(self.small(i, 1 - i).expect("full")) <= zero_tol;
            !premise || norm(self.small(1 - i, i).expect("full")) <= conclusion_tol
        })
    }

    /// Numerical dimension of `span{e₀₀, e₀₁, e₁₀, e₁₁}`: eigenvalues of
    /// their Gram matrix above `tol`.
    pub fn env_span_dim(&self, tol: f64) -> Result<usize> {
        let vecs: Vec<&[C64]> = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .filter_map(|&(i, r)| self.small(i, r))
            .collect();
        let g = CMatrix::from_fn(vecs.len(), |a, b| inner(vecs[a], vecs[b]));
        let eig = hermitian_eig(&g)?;
        Ok(eig.values.iter().filter(|&&v| v > tol).count())
    }
}

/// `ψ` expanded in the product basis `|I⟩ = |α¹_{i₁}⟩ ⋯ |αⁿ_{iₙ}⟩`.
#[derive(Clone, Debug)]
pub struct AlphaBasis {
    n: usize,
    coeffs: Vec<C64>,
}

impl AlphaBasis {
    /// `splits[m]` must be the split of qubit `m+1`, all non-product.
    pub fn new(psi: &PureState, splits: &[SchmidtSplit]) -> Result<Self> {
        let n = psi.n();
        if splits.len() != n || splits.iter().enumerate().any(|(m, s)| s.qubit != m + 1) {
            return Err(Error::Parameter(
                "need one split per qubit, in order".into(),
            ));
        }
        let mut u = Vec::with_capacity(n);
        let mut v = Vec::with_capacity(n);
        for s in splits {
            let Some(a1) = s.alpha[1] else {
                return Err(Error::Parameter(format!(
                    "qubit {} splits as a product; α₁ is undefined",
                    s.qubit
                )));
            };
            u.push(s.alpha0());
            v.push(a1);
        }
        let mut coeffs = psi.amps().to_vec();
        LocalUnitary::from_columns(&u, &v)
            .adjoint()
            .apply_vec(&mut coeffs);
        Ok(Self { n, coeffs })
    }

    /// Splits every qubit of `ψ` and expands it.
    pub fn from_state(psi: &PureState) -> Result<(Self, Vec<SchmidtSplit>)> {
        let splits = (1..=psi.n())
            .map(|j| schmidt_split(psi, j))
            .collect::<Result<Vec<_>>>()?;
        Ok((Self::new(psi, &splits)?, splits))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, idx: MultiIndex) -> C64 {
        self.coeffs[idx.flat()]
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// The nonzero-coefficient index closest to `idx` in Hamming distance
    /// (lowest flat index on ties), with that distance.
    pub fn nearest_nonzero(&self, idx: MultiIndex, tol: f64) -> Option<(MultiIndex, usize)> {
        MultiIndex::all(self.n)
            .filter(|m| self.coeff(*m).norm() > tol)
            .map(|m| (m, m.hamming(&idx)))
            .min_by_key(|&(m, d)| (d, m.flat()))
    }
}

/// `‖c_I e^j_{i_j i_j} + c_{I_j} e^j_{i_j^c i_j} − c_I e^k_{i_k i_k} − c_{I_k} e^k_{i_k^c i_k}‖`
/// with coefficients taken from `basis`.
pub fn main_constraint_residual_in(
    env_j: &EnvVectors,
    env_k: &EnvVectors,
    basis: &AlphaBasis,
    idx: MultiIndex,
) -> Result<f64> {
    let (j, k) = (env_j.qubit(), env_k.qubit());
    if j == k {
        return Err(Error::Parameter(format!(
            "main constraint needs j ≠ k, got j = k = {j}"
        )));
    }
    if env_j.env_dim != env_k.env_dim {
        return Err(Error::Dimension {
            expected: env_j.env_dim,
            found: env_k.env_dim,
        });
    }
    let side = |env: &EnvVectors, slot: usize| -> Result<Vec<C64>> {
        let b = idx.bit(slot) as usize;
        let (Some(diag), Some(cross)) = (env.small(b, b), env.small(1 - b, b)) else {
            return Err(Error::Parameter(format!(
                "qubit {slot} splits as a product; its environment vectors are incomplete"
            )));
        };
        let c = basis.coeff(idx);
        let cc = basis.coeff(idx.complement(slot));
        Ok(diag
            .iter()
            .zip(cross)
            .map(|(d, x)| c * d + cc * x)
            .collect())
    };
    let lhs = side(env_j, j)?;
    let rhs = side(env_k, k)?;
    Ok(lhs
        .iter()
        .zip(&rhs)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Main-constraint residual for qubits `env_j.qubit()` ≠ `env_k.qubit()` at
/// multi-index `idx`, expanding `ψ` in its own Schmidt product basis.
pub fn main_constraint_residual(
    env_j: &EnvVectors,
    env_k: &EnvVectors,
    psi: &PureState,
    idx: MultiIndex,
) -> Result<f64> {
    if env_j.qubit() == env_k.qubit() {
        return Err(Error::Parameter(format!(
            "main constraint needs j ≠ k, got j = k = {}",
            env_j.qubit()
        )));
    }
    let (basis, _) = AlphaBasis::from_state(psi)?;
    main_constraint_residual_in(env_j, env_k, &basis, idx)
}

/// Every relation for one compatible purification: environment vectors of
/// all qubits and the main constraint over all `(I, j < k)`.
#[derive(Clone, Debug)]
pub struct ProofCheck {
    pub envs: Vec<EnvVectors>,
    pub basis: Option<AlphaBasis>,
    pub relations: EnvResiduals,
    pub main_constraint: Option<f64>,
    pub lemma1_ok: bool,
}

pub fn proof_check(omega: &Purification, psi: &PureState) -> Result<ProofCheck> {
    check_compatible(omega, psi)?;
    let splits = (1..=psi.n())
        .map(|j| schmidt_split(psi, j))
        .collect::<Result<Vec<_>>>()?;
    let envs = splits
        .iter()
        .map(|s| env_vectors_from_split(omega, s))
        .collect::<Result<Vec<_>>>()?;
    let mut relations = EnvResiduals::default();
    for e in &envs {
        let r = e.residuals();
        relations.big_e_orthonormality = relations.big_e_orthonormality.max(r.big_e_orthonormality);
        let merge = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, y) => x.or(y),
        };
        relations.omega_orthonormality =
            merge(relations.omega_orthonormality, r.omega_orthonormality);
        relations.first_env_relation = merge(relations.first_env_relation, r.first_env_relation);
        relations.second_env_relation = merge(relations.second_env_relation, r.second_env_relation);
        relations.consistency = merge(relations.consistency, r.consistency);
    }
    let lemma1_ok = envs.iter().all(|e| e.lemma1_holds(1e-10, 1e-8));
    let (basis, main_constraint) = if splits.iter().all(|s| !s.is_product()) {
        let basis = AlphaBasis::new(psi, &splits)?;
        let mut worst = 0.0f64;
        for a in 0..envs.len() {
            for b in (a + 1)..envs.len() {
                for idx in MultiIndex::all(psi.n()) {
                    worst = worst.max(main_constraint_residual_in(
                        &envs[a], &envs[b], &basis, idx,
                    )?);
                }
            }
        }
        (Some(basis), Some(worst))
    } else {
        (None, None)
    };
    Ok(ProofCheck {
        envs,
        basis,
        relations,
        main_constraint,
        lemma1_ok,
    })
}

/// If `c_I = c_{I_j} = 0` and `c_{I_k} ≠ 0`, then `e^k_{i_k^c i_k} = 0`.
/// `false` only on a counterexample; premises use `zero_tol` on coefficients.
pub fn lemma2_holds(
    basis: &AlphaBasis,
    env_k: &EnvVectors,
    idx: MultiIndex,
    j: usize,
    zero_tol: f64,
    conclusion_tol: f64,
) -> bool {
    let k = env_k.qubit();
    let premise = j != k
        && basis.coeff(idx).norm() <= zero_tol
        && basis.coeff(idx.complement(j)).norm() <= zero_tol
        && basis.coeff(idx.complement(k)).norm() > zero_tol;
    if !premise {
        return true;
    }
    let b = idx.bit(k) as usize;
    env_k
        .small(1 - b, b)
        .is_none_or(|e| norm(e) <= conclusion_tol)
}

/// If `c_I = c_{I_j} = 0`, some qubit `k` has `e^k_{i_k^c i_k} = 0`.
pub fn lemma3_holds(
    basis: &AlphaBasis,
    envs: &[EnvVectors],
    idx: MultiIndex,
    j: usize,
    zero_tol: f64,
    conclusion_tol: f64,
) -> bool {
    let premise =
        basis.coeff(idx).norm() <= zero_tol && basis.coeff(idx.complement(j)).norm() <= zero_tol;
    if !premise {
        return true;
    }
    envs.iter().any(|e| {
        let b = idx.bit(e.qubit()) as usize;
        e.small(1 - b, b).is_some_and(|v| norm(v) <= conclusion_tol)
    })
}

/// Premise of the two-dimensional-span statement: `I`, `I'` differ in slot
/// `j`, agree in slot `k`, `c_I c_{I'} ≠ 0` and `c_I c_{I'} − c_{I'_j} c_{I_j} ≠ 0`.
pub fn span_lemma_premise(
    basis: &AlphaBasis,
    a: MultiIndex,
    b: MultiIndex,
    j: usize,
    k: usize,
    tol: f64,
) -> bool {
    if a.bit(j) == b.bit(j) || a.bit(k) != b.bit(k) {
        return false;
    }
    let cab = basis.coeff(a) * basis.coeff(b);
    let cross = basis.coeff(b.complement(j)) * basis.coeff(a.complement(j));
    cab.norm() > tol && (cab - cross).norm() > tol
}

/// `true` iff `ψ` factors as (qubit `j`) ⊗ (rest), i.e. `q₁ ≤ tol`.
///
/// Cross-checked against the amplitude minors `c_{0a}c_{1b} − c_{1a}c_{0b}`
/// of the `2 × 2^{n−1}` matrix obtained by isolating slot `j`: their squared
/// moduli sum to `q₀q₁`, which gives an independent `q₁`. A gap above
/// `10·tol` between the two routes is reported as an error.
pub fn product_split_test(psi: &PureState, j: usize, tol: f64) -> Result<bool> {
    let split = schmidt_split(psi, j)?;
    let spectral = split.q[1];
    let ratio = ratio_route_q1(psi, j);
    if (spectral - ratio).abs() > 10.0 * tol {
        return Err(Error::Inconsistent(format!(
            "product test for qubit {j}: spectral q₁ = {spectral:.3e}, ratio q₁ = {ratio:.3e}"
        )));
    }
    Ok(spectral <= tol)
}

/// `q₁` recovered from `Σ_{a<b} |c_{0a}c_{1b} − c_{1a}c_{0b}|² = q₀q₁`.
fn ratio_route_q1(psi: &PureState, j: usize) -> f64 {
    let n = psi.n();
    let pos = bit_pos(n, j);
    let half = 1usize << (n - 1);
    let row = |b: usize| -> Vec<C64> {
        (0..half)
            .map(|rest| psi.amps()[insert_bit(rest, pos, b)])
            .collect()
    };
    let (r0, r1) = (row(0), row(1));
    let mut det = 0.0;
    for a in 0..half {
        for b in (a + 1)..half {
            det += (r0[a] * r1[b] - r1[a] * r0[b]).norm_sqr();
        }
    }
    let det = det.min(0.25);
    2.0 * det / (1.0 + (1.0 - 4.0 * det).sqrt())
}

/// Indices of `ψ` with slot `j` removed, exposed for tests of the layout.
#[doc(hidden)]
pub fn rest_index(n: usize, j: usize, flat: usize) -> usize {
    remove_bit(flat, bit_pos(n, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::haar_random_state;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn ghz(n: usize, a: f64, b: f64) -> PureState {
        let mut amps = vec![c(0.0); 1 << n];
        amps[0] = c(a);
        amps[(1 << n) - 1] = c(b);
        PureState::new(n, amps).unwrap()
    }

    fn bell() -> PureState {
        ghz(
            2,
            std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
        )
    }

    #[test]
    fn bell_split_is_balanced() {
        let s = schmidt_split(&bell(), 1).unwrap();
        assert!((s.q[0] - 0.5).abs() < 1e-12 && (s.q[1] - 0.5).abs() < 1e-12);
        assert!(s.reconstruction_residual(&bell()) < 1e-12);
    }

    #[test]
    fn product_split_has_single_row() {
        let psi = PureState::basis(1, 0)
            .unwrap()
            .tensor(&haar_random_state(2, 4).unwrap());
        let s = schmidt_split(&psi, 1).unwrap();
        assert!((s.q[0] - 1.0).abs() < 1e-12 && s.q[1].abs() < 1e-12);
        assert!(s.is_product() && s.alpha[1].is_none());
        assert!(s.reconstruction_residual(&psi) < 1e-12);
    }

    #[test]
    fn unequal_ghz_split_every_qubit() {
        let psi = ghz(3, 0.8f64.sqrt(), 0.2f64.sqrt());
        for j in 1..=3 {
            let s = schmidt_split(&psi, j).unwrap();
            assert!((s.q[0] - 0.8).abs() < 1e-12 && (s.q[1] - 0.2).abs() < 1e-12);
            assert!(s.reconstruction_residual(&psi) < 1e-12);
            // χ phase convention
            for v in &s.chi {
                let peak = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
                let at = v
                    .iter()
                    .position(|z| (z.norm() - peak).abs() < 1e-12)
                    .unwrap();
                assert!(v[at].im.abs() < 1e-15 && v[at].re > 0.0);
            }
        }
        assert!(schmidt_split(&psi, 0).is_err());
        assert!(schmidt_split(&psi, 4).is_err());
    }

    #[test]
    fn purify_pure_projector() {
        let psi = haar_random_state(3, 11).unwrap();
        let p = purify(&psi.projector()).unwrap();
        assert_eq!(p.env_dim(), 1);
        assert!((inner(p.vector(), psi.amps()).norm() - 1.0).abs() < 1e-12);
        assert!(p.trace_out_env().distance(psi.projector().matrix()) < 1e-12);
    }

    #[test]
    fn purify_maximally_mixed_qubit() {
        let p = purify(&DensityMatrix::maximally_mixed(1).unwrap()).unwrap();
        assert_eq!(p.env_dim(), 2);
        assert!(p.trace_out_env().distance(&CMatrix::identity(2).scale(0.5)) < 1e-12);
        let nrm: f64 = p.vector().iter().map(|z| z.norm_sqr()).sum();
        assert!((nrm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_purification_has_diagonal_environment() {
        let psi = haar_random_state(3, 2).unwrap();
        let omega = purify(&psi.projector()).unwrap();
        for j in 1..=3 {
            let env = extract_env_vectors(&omega, &psi, j).unwrap();
            assert!(norm(env.small(0, 1).unwrap()) < 1e-12);
            assert!(norm(env.small(1, 0).unwrap()) < 1e-12);
            for i in 0..2 {
                assert!((norm(env.small(i, i).unwrap()) - 1.0).abs() < 1e-12);
            }
            assert!(env.residuals().max() < 1e-12);
            assert!(env.lemma1_holds(1e-10, 1e-8));
        }
        let check = proof_check(&omega, &psi).unwrap();
        assert!(check.main_constraint.unwrap() < 1e-12);
    }

    #[test]
    fn mismatched_purification_rejected() {
        let psi = ghz(
            3,
            std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
        );
        let other = purify(&haar_random_state(3, 1).unwrap().projector()).unwrap();
        match extract_env_vectors(&other, &psi, 1) {
            Err(Error::RdmMismatch { qubit, distance }) => {
                assert!((1..=3).contains(&qubit) && distance > 1e-9)
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn product_test_examples() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let zero_bell = PureState::basis(1, 0).unwrap().tensor(&bell());
        assert!(product_split_test(&zero_bell, 1, 1e-8).unwrap());
        assert!(!product_split_test(&zero_bell, 2, 1e-8).unwrap());
        assert!(!product_split_test(&ghz(3, r, r), 1, 1e-8).unwrap());
        let w = PureState::w_state(3).unwrap();
        assert!(!product_split_test(&w, 1, 1e-8).unwrap());
        let s = schmidt_split(&w, 1).unwrap();
        assert!((s.q[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_route_matches_spectrum() {
        for seed in 0..20 {
            let psi = haar_random_state(4, seed).unwrap();
            for j in 1..=4 {
                let s = schmidt_split(&psi, j).unwrap();
                assert!((s.q[1] - ratio_route_q1(&psi, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn main_constraint_rejects_same_qubit() {
        let psi = haar_random_state(3, 8).unwrap();
        let omega = purify(&psi.projector()).unwrap();
        let e = extract_env_vectors(&omega, &psi, 2).unwrap();
        let idx = MultiIndex::from_flat(3, 0);
        assert!(main_constraint_residual(&e, &e, &psi, idx).is_err());
    }

    #[test]
    fn layout_helper() {
        assert_eq!(rest_index(3, 2, 0b101), 0b11);
    }
}
