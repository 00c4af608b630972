//! Generalized GHZ states `α|0…0⟩ + β|1…1⟩`, the disk of mixed states that
//! share their marginals, and a detector for local-unitary equivalence to
//! that form.

use serde::Serialize;

use crate::qstate::{
    hermitian_eig, inner, norm, CMatrix, DensityMatrix, LocalUnitary, PureState, C64,
};
use crate::rdm::partial_trace_pure;
use crate::schmidt::schmidt_split;
use crate::{Error, Result};

/// Default detector tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Bound on `|⟨u_k|v_k⟩|` in an accepted certificate.
pub const FACTOR_OVERLAP_TOL: f64 = 1e-9;

const GRID: usize = 32;
const REFINE_STEPS: usize = 200;

/// Amplitudes of `α|0…0⟩ + β|1…1⟩` on `n` qubits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GhzParams {
    pub n: usize,
    pub a: C64,
    pub b: C64,
}

impl GhzParams {
    /// Requires `n ≥ 2`, `|α|² + |β|² = 1` within 1e-10 and both magnitudes
    /// above 1e-10. Nothing is renormalized.
    pub fn new(n: usize, a: C64, b: C64) -> Result<Self> {
        if n < 2 {
            return Err(Error::QubitCount {
                n,
                requirement: "n ≥ 2 required",
            });
        }
        if n > 16 {
            return Err(Error::QubitCount {
                n,
                requirement: "n ≤ 16 supported",
            });
        }
        let norm_sqr = a.norm_sqr() + b.norm_sqr();
        if (norm_sqr - 1.0).abs() > 1e-10 {
            return Err(Error::Normalization { norm_sqr });
        }
        if a.norm() <= 1e-10 || b.norm() <= 1e-10 {
            return Err(Error::Parameter(format!(
                "αβ ≠ 0 required, got |α| = {:.3e}, |β| = {:.3e}",
                a.norm(),
                b.norm()
            )));
        }
        Ok(Self { n, a, b })
    }

    /// `α = √p`, `β = √(1−p)·e^{iθ}`.
    pub fn from_weight(n: usize, p: f64, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parameter(format!("weight {p} outside [0, 1]")));
        }
        Self::new(
            n,
            C64::new(p.sqrt(), 0.0),
            C64::from_polar((1.0 - p).sqrt(), theta),
        )
    }

    pub fn state(&self) -> PureState {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << self.n];
        amps[0] = self.a;
        amps[(1 << self.n) - 1] = self.b;
        PureState::new_unchecked(self.n, amps)
    }

    /// `|α|² − |β|²`
    pub fn imbalance(&self) -> f64 {
        self.a.norm_sqr() - self.b.norm_sqr()
    }
}

pub fn make_ghz(n: usize, a: C64, b: C64) -> Result<PureState> {
    Ok(GhzParams::new(n, a, b)?.state())
}

/// `|α|²P₀ + |β|²P₁ + z·αβ̄|0…0⟩⟨1…1| + z̄·ᾱβ|1…1⟩⟨0…0|` for `|z| ≤ 1`.
///
/// Every member shares the marginals of the GHZ state: the off-diagonal
/// term acts nontrivially on every qubit, so each single-qubit partial trace
/// removes it. `z = 1` is the GHZ projector, `z = −1` the sign-flipped one.
pub fn ghz_family(params: &GhzParams, z: C64) -> Result<DensityMatrix> {
    if z.norm() > 1.0 + 1e-12 {
        return Err(Error::Parameter(format!(
            "|z| = {} exceeds 1; the family member would have a negative eigenvalue",
            z.norm()
        )));
    }
    let d = 1usize << params.n;
    let mut m = CMatrix::zeros(d);
    m[(0, 0)] = C64::new(params.a.norm_sqr(), 0.0);
    m[(d - 1, d - 1)] = C64::new(params.b.norm_sqr(), 0.0);
    let off = z * params.a * params.b.conj();
    m[(0, d - 1)] = off;
    m[(d - 1, 0)] = off.conj();
    Ok(DensityMatrix::new_unchecked(params.n, m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GhzVerdict {
    Ghz,
    NotGhz,
    /// The degenerate-branch search got close to, but not within, tolerance.
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorBranch {
    /// `q₀q₁ ≤ tol` across qubit 1.
    Product,
    /// Schmidt gap above `√tol`: local bases from single-qubit eigenvectors.
    NonDegenerate,
    /// Schmidt gap at most `√tol`: product-vector search in the χ-plane.
    Degenerate,
}

/// Outcome of [`detect_ghz_type`]. When the verdict is [`GhzVerdict::Ghz`],
/// `ψ ≈ a·⊗u_k + b·⊗v_k` within `residual`, `a` real positive, `|a| ≥ |b|`,
/// and only the magnitudes `|a|, |b|` are local-unitary invariants.
#[derive(Clone, Debug, Serialize)]
pub struct GhzCertificate {
    pub verdict: GhzVerdict,
    pub branch: DetectorBranch,
    pub schmidt_q: [f64; 2],
    /// Best candidate amplitudes (present whenever a candidate was assembled).
    pub params: Option<GhzParams>,
    /// `(u_k, v_k)` per qubit.
    pub local_bases: Option<Vec<[[C64; 2]; 2]>>,
    /// `‖ψ − a·⊗u − b·⊗v‖` of the best candidate.
    pub residual: f64,
    /// `max_k |⟨u_k|v_k⟩|`.
    pub factor_overlap: f64,
    pub diagnostics: String,
}

impl GhzCertificate {
    pub fn is_ghz(&self) -> bool {
        self.verdict == GhzVerdict::Ghz
    }

    /// `U` with `U|0…0⟩ = ⊗u_k` and `U|1…1⟩ = ⊗v_k`.
    pub fn local_unitary(&self) -> Option<LocalUnitary> {
        self.local_bases.as_ref().map(|bases| {
            let u: Vec<[C64; 2]> = bases.iter().map(|p| p[0]).collect();
            let v: Vec<[C64; 2]> = bases.iter().map(|p| p[1]).collect();
            LocalUnitary::from_columns(&u, &v)
        })
    }

    /// `a·⊗u + b·⊗v`
    pub fn reassemble(&self) -> Option<Vec<C64>> {
        let (params, lu) = (self.params?, self.local_unitary()?);
        let mut v = params.state().into_amps();
        lu.apply_vec(&mut v);
        Some(v)
    }
}

struct Candidate {
    params: GhzParams,
    bases: Vec<[[C64; 2]; 2]>,
    residual: f64,
    overlap: f64,
}

/// Decides whether `ψ = a·⊗u_k + b·⊗v_k` with `⟨u_k|v_k⟩ = 0` for all `k`
/// and `|a||b| > tol`.
///
/// Qubit 1 is split first; a product split is never GHZ-type. With a clear
/// Schmidt gap each single-qubit marginal has eigenvectors `(u_k, v_k)`
/// matching `(q₀, q₁)`. With a gap below `√tol` the marginals are maximally
/// mixed and carry no basis, so the 2-dimensional span of the qubit-1 Schmidt
/// vectors is searched for a fully product vector: a 32×32 grid on its Bloch
/// sphere minimizing total single-qubit impurity, then up to 200 rounds of
/// alternating projection between the product set and the span.
pub fn detect_ghz_type(psi: &PureState, tol: f64) -> Result<GhzCertificate> {
    let n = psi.n();
    if n < 2 {
        return Err(Error::QubitCount {
            n,
            requirement: "n ≥ 2 required",
        });
    }
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let q = qubit_spectrum(psi, 1)?;
    let gap = q[0] - q[1];

    if q[0] * q[1] <= tol {
        let cand = nondegenerate_candidate(psi)?;
        return Ok(certificate(
            GhzVerdict::NotGhz,
            DetectorBranch::Product,
            q,
            Some(cand),
            format!("product across qubit 1: q₀q₁ = {:.3e} ≤ tol", q[0] * q[1]),
        ));
    }

    if gap > tol.sqrt() {
        let cand = nondegenerate_candidate(psi)?;
        let ok = cand.residual <= tol
            && cand.overlap <= FACTOR_OVERLAP_TOL
            && cand.params.a.norm() * cand.params.b.norm() > tol;
        let diag = format!(
            "marginal eigenbases: residual {:.3e}, factor overlap {:.3e}",
            cand.residual, cand.overlap
        );
        let verdict = if ok {
            GhzVerdict::Ghz
        } else {
            GhzVerdict::NotGhz
        };
        return Ok(certificate(
            verdict,
            DetectorBranch::NonDegenerate,
            q,
            Some(cand),
            diag,
        ));
    }

    let (cand, search_diag) = degenerate_candidate(psi)?;
    let defect = cand.residual.max(cand.overlap);
    let ok = cand.residual <= tol
        && cand.overlap <= FACTOR_OVERLAP_TOL
        && cand.params.a.norm() * cand.params.b.norm() > tol;
    let verdict = if ok {
        GhzVerdict::Ghz
    } else if defect <= tol.sqrt() {
        GhzVerdict::Inconclusive
    } else {
        GhzVerdict::NotGhz
    };
    let diag = format!(
        "{search_diag}; residual {:.3e}, factor overlap {:.3e}",
        cand.residual, cand.overlap
    );
    Ok(certificate(
        verdict,
        DetectorBranch::Degenerate,
        q,
        Some(cand),
        diag,
    ))
}

fn certificate(
    verdict: GhzVerdict,
    branch: DetectorBranch,
    q: [f64; 2],
    cand: Option<Candidate>,
    diagnostics: String,
) -> GhzCertificate {
    match cand {
        Some(c) => GhzCertificate {
            verdict,
            branch,
            schmidt_q: q,
            params: Some(c.params),
            local_bases: Some(c.bases),
            residual: c.residual,
            factor_overlap: c.overlap,
            diagnostics,
        },
        None => GhzCertificate {
            verdict,
            branch,
            schmidt_q: q,
            params: None,
            local_bases: None,
            residual: 1.0,
            factor_overlap: 0.0,
            diagnostics,
        },
    }
}

/// Descending spectrum of the single-qubit marginal of qubit `k`.
fn qubit_spectrum(psi: &PureState, k: usize) -> Result<[f64; 2]> {
    let others: Vec<usize> = (1..=psi.n()).filter(|&m| m != k).collect();
    let rho = partial_trace_pure(psi, &others)?;
    let e = hermitian_eig(rho.matrix())?;
    Ok([e.values[1], e.values[0].max(0.0)])
}

/// Eigenpairs `(high, low)` of the marginal of qubit `k` of an
/// `nq`-qubit vector.
fn marginal_basis(v: &[C64], nq: usize, k: usize) -> Result<([C64; 2], [C64; 2], f64)> {
    let m = single_qubit_marginal(v, nq, k);
    let e = hermitian_eig(&m)?;
    let mut hi = [e.vectors[(0, 1)], e.vectors[(1, 1)]];
    let mut lo = [e.vectors[(0, 0)], e.vectors[(1, 0)]];
    crate::qstate::state::canonicalize_phase(&mut hi);
    crate::qstate::state::canonicalize_phase(&mut lo);
    let purity = m.hs_inner(&m).re;
    Ok((hi, lo, purity))
}

/// 2×2 marginal of qubit `k` (1-based) of an unnormalized `nq`-qubit vector.
fn single_qubit_marginal(v: &[C64], nq: usize, k: usize) -> CMatrix {
    let mask = 1usize << (nq - k);
    let mut m = CMatrix::zeros(2);
    for x in 0..v.len() {
        if x & mask == 0 {
            let (a, b) = (v[x], v[x | mask]);
            m[(0, 0)] += a * a.conj();
            m[(0, 1)] += a * b.conj();
            m[(1, 1)] += b * b.conj();
        }
    }
    m[(1, 0)] = m[(0, 1)].conj();
    m
}

fn product_vector(factors: &[[C64; 2]]) -> Vec<C64> {
    let mut out = vec![C64::new(1.0, 0.0)];
    for f in factors {
        out = out.iter().flat_map(|x| [x * f[0], x * f[1]]).collect();
    }
    out
}

/// Given `(u_k, v_k)` for every qubit, fixes `a = ⟨⊗u|ψ⟩` real positive and
/// measures the reconstruction.
fn assemble(psi: &PureState, mut u: Vec<[C64; 2]>, mut v: Vec<[C64; 2]>) -> Candidate {
    let mut a = inner(&product_vector(&u), psi.amps());
    let mut b = inner(&product_vector(&v), psi.amps());
    if a.norm() < b.norm() {
        std::mem::swap(&mut u, &mut v);
        std::mem::swap(&mut a, &mut b);
    }
    if a.norm() > 0.0 {
        let phase = a / a.norm();
        u[0] = [u[0][0] * phase, u[0][1] * phase];
        a = C64::new(a.norm(), 0.0);
    }
    let overlap = u
        .iter()
        .zip(&v)
        .map(|(x, y)| inner(x, y).norm())
        .fold(0.0, f64::max);
    let pu = product_vector(&u);
    let pv = product_vector(&v);
    let residual = psi
        .amps()
        .iter()
        .zip(pu.iter().zip(&pv))
        .map(|(p, (x, y))| (p - a * x - b * y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let bases = u.iter().zip(&v).map(|(x, y)| [*x, *y]).collect();
    Candidate {
        params: GhzParams { n: psi.n(), a, b },
        bases,
        residual,
        overlap,
    }
}

fn nondegenerate_candidate(psi: &PureState) -> Result<Candidate> {
    let n = psi.n();
    let mut u = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    for k in 1..=n {
        let (hi, lo, _) = marginal_basis(psi.amps(), n, k)?;
        u.push(hi);
        v.push(lo);
    }
    Ok(assemble(psi, u, v))
}

/// Distance of a unit vector from the product built from its marginals'
/// top eigenvectors, with those factors.
fn product_defect(v: &[C64], nq: usize) -> Result<(f64, Vec<[C64; 2]>)> {
    let mut factors = Vec::with_capacity(nq);
    for k in 1..=nq {
        factors.push(marginal_basis(v, nq, k)?.0);
    }
    let p = product_vector(&factors);
    let ov = inner(&p, v);
    let defect = v
        .iter()
        .zip(&p)
        .map(|(x, y)| (x - ov * y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok((defect, factors))
}

fn impurity(v: &[C64], nq: usize) -> f64 {
    (1..=nq)
        .map(|k| {
            let m = single_qubit_marginal(v, nq, k);
            1.0 - m.hs_inner(&m).re
        })
        .sum()
}

fn plane_point(chi: &[Vec<C64>; 2], x: C64, y: C64) -> Vec<C64> {
    chi[0]
        .iter()
        .zip(&chi[1])
        .map(|(a, b)| x * a + y * b)
        .collect()
}

fn degenerate_candidate(psi: &PureState) -> Result<(Candidate, String)> {
    let n = psi.n();
    let nq = n - 1;
    let split = schmidt_split(psi, 1)?;
    let chi = &split.chi;

    let mut best = (f64::INFINITY, C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    for it in 0..GRID {
        let theta = std::f64::consts::PI * (it as f64 + 0.5) / GRID as f64;
        for ip in 0..GRID {
            let phi = 2.0 * std::f64::consts::PI * ip as f64 / GRID as f64;
            let x = C64::new((theta / 2.0).cos(), 0.0);
            let y = C64::from_polar((theta / 2.0).sin(), phi);
            let f = impurity(&plane_point(chi, x, y), nq);
            if f < best.0 {
                best = (f, x, y);
            }
        }
    }
    let grid_min = best.0;
    let (mut x, mut y) = (best.1, best.2);

    let mut steps = 0;
    for step in 0..REFINE_STEPS {
        steps = step + 1;
        let phi = plane_point(chi, x, y);
        let (d, factors) = product_defect(&phi, nq)?;
        if d <= 1e-14 {
            break;
        }
        let p = product_vector(&factors);
        let (nx, ny) = (inner(&chi[0], &p), inner(&chi[1], &p));
        let s = (nx.norm_sqr() + ny.norm_sqr()).sqrt();
        if !(s > 0.0) {
            break;
        }
        x = nx / s;
        y = ny / s;
    }
    let phi = plane_point(chi, x, y);
    let perp = plane_point(chi, -y.conj(), x.conj());
    let (d_phi, f_phi) = product_defect(&phi, nq)?;
    let (d_perp, f_perp) = product_defect(&perp, nq)?;
    let diag = format!(
        "χ-plane search: grid impurity {grid_min:.3e}, {steps} refinement steps, \
         product defects {d_phi:.3e} / {d_perp:.3e}"
    );

    // qubit-1 factors by contracting ψ against the two product vectors
    let contract = |w: &[C64]| -> [C64; 2] {
        let half = 1usize << nq;
        let mut out = [C64::new(0.0, 0.0); 2];
        for (b, slot) in out.iter_mut().enumerate() {
            *slot = inner(w, &psi.amps()[b * half..(b + 1) * half]);
        }
        let s = norm(&out);
        if s > 0.0 {
            [out[0] / s, out[1] / s]
        } else {
            out
        }
    };
    let pu = product_vector(&f_phi);
    let pv = product_vector(&f_perp);
    let mut u = vec![contract(&pu)];
    let mut v = vec![contract(&pv)];
    u.extend(f_phi);
    v.extend(f_perp);
    Ok((assemble(psi, u, v), diag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{haar_random_state, random_local_unitary, SplitMix64};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn make_ghz_examples() {
        let s = make_ghz(3, r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2)).unwrap();
        for (i, a) in s.amps().iter().enumerate() {
            let e = if i == 0 || i == 7 { FRAC_1_SQRT_2 } else { 0.0 };
            assert_eq!(*a, r(e));
        }
        assert!(make_ghz(3, r(1.0), r(0.0)).is_err());
        assert!(make_ghz(3, r(0.8), r(0.8)).is_err());
        let s = make_ghz(4, r(0.8f64.sqrt()), C64::new(0.0, 0.2f64.sqrt())).unwrap();
        assert_eq!(s.amps().iter().filter(|z| z.norm() > 0.0).count(), 2);
        assert!((norm(s.amps()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn family_endpoints() {
        let p = GhzParams::new(3, r(0.8f64.sqrt()), r(0.2f64.sqrt())).unwrap();
        let one = ghz_family(&p, r(1.0)).unwrap();
        assert!(one.distance(&p.state().projector()) < 1e-15);
        let zero = ghz_family(&p, r(0.0)).unwrap();
        let e = hermitian_eig(zero.matrix()).unwrap();
        assert!((e.values[7] - 0.8).abs() < 1e-15 && (e.values[6] - 0.2).abs() < 1e-15);
        let flipped = GhzParams::new(3, p.a, -p.b).unwrap().state().projector();
        assert!(ghz_family(&p, r(-1.0)).unwrap().distance(&flipped) < 1e-15);
        assert!(ghz_family(&p, r(1.01)).is_err());
    }

    #[test]
    fn detects_rotated_unbalanced_ghz() {
        let p = GhzParams::new(3, r(0.8f64.sqrt()), r(0.2f64.sqrt())).unwrap();
        let mut rng = SplitMix64::new(17);
        let lu = random_local_unitary(3, &mut rng);
        let psi = lu.apply(&p.state());
        let cert = detect_ghz_type(&psi, DEFAULT_TOL).unwrap();
        assert_eq!(cert.verdict, GhzVerdict::Ghz, "{}", cert.diagnostics);
        assert_eq!(cert.branch, DetectorBranch::NonDegenerate);
        let got = cert.params.unwrap();
        assert!((got.a.norm() - 0.8f64.sqrt()).abs() < 1e-8);
        assert!((got.b.norm() - 0.2f64.sqrt()).abs() < 1e-8);
        let back = cert.reassemble().unwrap();
        let dist = back
            .iter()
            .zip(psi.amps())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(dist <= cert.residual + 1e-14);
    }

    #[test]
    fn detects_rotated_balanced_ghz() {
        for n in 2..=5 {
            let p = GhzParams::new(n, r(FRAC_1_SQRT_2), C64::new(0.0, FRAC_1_SQRT_2)).unwrap();
            let mut rng = SplitMix64::new(n as u64);
            let psi = random_local_unitary(n, &mut rng).apply(&p.state());
            let cert = detect_ghz_type(&psi, DEFAULT_TOL).unwrap();
            assert_eq!(cert.verdict, GhzVerdict::Ghz, "n={n}: {}", cert.diagnostics);
            assert_eq!(cert.branch, DetectorBranch::Degenerate);
            assert!(cert.residual < 1e-10);
        }
    }

    #[test]
    fn rejects_w_product_and_haar() {
        let w = detect_ghz_type(&PureState::w_state(3).unwrap(), DEFAULT_TOL).unwrap();
        assert_eq!(w.verdict, GhzVerdict::NotGhz);
        assert!(w.residual > 0.1);
        let bell = make_ghz(2, r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2)).unwrap();
        let zb = PureState::basis(1, 0).unwrap().tensor(&bell);
        let c = detect_ghz_type(&zb, DEFAULT_TOL).unwrap();
        assert_eq!(
            (c.verdict, c.branch),
            (GhzVerdict::NotGhz, DetectorBranch::Product)
        );
        for seed in 0..10 {
            let h = haar_random_state(4, seed).unwrap();
            assert_eq!(
                detect_ghz_type(&h, DEFAULT_TOL).unwrap().verdict,
                GhzVerdict::NotGhz
            );
        }
    }

    #[test]
    fn two_qubit_entangled_states_are_ghz_type() {
        for seed in 0..10 {
            let h = haar_random_state(2, seed).unwrap();
            let c = detect_ghz_type(&h, DEFAULT_TOL).unwrap();
            assert!(c.is_ghz(), "{}", c.diagnostics);
        }
    }

    #[test]
    fn nearly_orthogonal_factors_are_inconclusive() {
        // |000⟩ + |111⟩ + ε(|010⟩ + |101⟩): exact two-term product form whose
        // qubit-2 factors overlap by about 2ε
        let eps = 1e-6;
        let mut amps = vec![r(0.0); 8];
        amps[0] = r(1.0);
        amps[7] = r(1.0);
        amps[0b010] = r(eps);
        amps[0b101] = r(eps);
        let psi = PureState::from_unnormalized(3, amps).unwrap();
        let c = detect_ghz_type(&psi, DEFAULT_TOL).unwrap();
        assert_eq!(c.verdict, GhzVerdict::Inconclusive, "{}", c.diagnostics);
        assert!((c.factor_overlap - 2.0 * eps).abs() < 1e-9);

        let mut amps = psi.into_amps();
        amps[0b010] = r(0.1);
        amps[0b101] = r(0.1);
        let far = PureState::from_unnormalized(3, amps).unwrap();
        assert_eq!(
            detect_ghz_type(&far, DEFAULT_TOL).unwrap().verdict,
            GhzVerdict::NotGhz
        );
    }
}
