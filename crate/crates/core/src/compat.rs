//! States sharing a density matrix's (n−1)-qubit marginals.
//!
//! A Hermitian perturbation `Δ` leaves every (n−1)-qubit marginal unchanged
//! exactly when it lies in the real span `W` of the full-weight Pauli words
//! (no identity letter). The set of states with the marginals of `ρ` is
//! therefore `(ρ + W) ∩ PSD`, and this module probes it along directions of
//! `W`. The rigorous verdict comes from the GHZ detector; the search only
//! cross-checks it and reports disagreement instead of hiding it.

use serde::Serialize;

use crate::ghz::{detect_ghz_type, ghz_family, GhzCertificate, GhzParams, GhzVerdict, DEFAULT_TOL};
use crate::qstate::{
    hermitian_eig, numeric_rank, CMatrix, DensityMatrix, LocalUnitary, Pauli, PauliWord, PureState,
    SplitMix64, C64,
};
use crate::rdm::{
    ptr_parts_matrix, ptr_tuple, ptr_tuple_pure, rdm_max_distance, require_same_rdms, RDM_EQ_TOL,
};
use crate::{Error, Result};

/// `ρ + tΔ` counts as PSD while its smallest eigenvalue is at least `−PSD_SHIFT`.
pub const PSD_SHIFT: f64 = 1e-10;
/// A determined verdict is contradicted by a feasible step above this.
pub const ANOMALY_DETERMINED: f64 = 1e-4;
/// An undetermined verdict is contradicted when no step above this is found.
pub const ANOMALY_UNDETERMINED: f64 = 1e-6;
pub const DEFAULT_RESTARTS: usize = 64;

const BRACKET: f64 = 2.0;
const BISECT_TOL: f64 = 1e-12;
const BISECT_MAX: usize = 60;
/// Coordinate-ascent moves must beat the current step by this margin, so
/// steps at the PSD-shift noise floor do not trigger a bisection each.
const IMPROVE_REL: f64 = 1e-3;
const IMPROVE_ABS: f64 = 1e-9;
const DESCENT_MAX_N: usize = 6;
/// The Levenberg–Marquardt polish has `2^(n+1)` unknowns; past this it costs
/// more than the rest of the search.
const POLISH_MAX_N: usize = 5;

/// The `3^n` full-weight Pauli words, ordered as base-3 numerals over
/// `X < Y < Z` with qubit 1 most significant.
#[derive(Clone, Debug)]
pub struct FullWeightBasis {
    n: usize,
    words: Vec<PauliWord>,
}

impl FullWeightBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[PauliWord] {
        &self.words
    }

    /// `c_w = tr(P_w M) / 2^n`, so `Σ c_w P_w` is the component of a
    /// Hermitian `M` inside `W`.
    pub fn coefficients(&self, m: &CMatrix) -> Result<Vec<f64>> {
        check_dim(m, self.n)?;
        let scale = 1.0 / (1usize << self.n) as f64;
        Ok(self
            .words
            .iter()
            .map(|w| w.expectation(m).re * scale)
            .collect())
    }

    /// `Σ c_w P_w`
    pub fn combine(&self, coeffs: &[f64]) -> Result<CMatrix> {
        if coeffs.len() != self.count() {
            return Err(Error::Dimension {
                expected: self.count(),
                found: coeffs.len(),
            });
        }
        let mut m = CMatrix::zeros(1 << self.n);
        for (w, &c) in self.words.iter().zip(coeffs) {
            if c != 0.0 {
                w.accumulate(&mut m, c);
            }
        }
        Ok(m)
    }

    /// Words as Frobenius-unit matrices `P_w / √2^n`.
    pub fn normalized_matrices(&self) -> Vec<CMatrix> {
        let s = 1.0 / ((1usize << self.n) as f64).sqrt();
        self.words.iter().map(|w| w.to_matrix().scale(s)).collect()
    }
}

pub fn fullweight_basis(n: usize) -> Result<FullWeightBasis> {
    if !(2..=8).contains(&n) {
        return Err(Error::QubitCount {
            n,
            requirement: "2 ≤ n ≤ 8 required",
        });
    }
    let letters = [Pauli::X, Pauli::Y, Pauli::Z];
    let count = 3usize.pow(n as u32);
    let words: Vec<PauliWord> = (0..count)
        .map(|k| {
            let mut digits = vec![Pauli::X; n];
            let mut rest = k;
            for slot in digits.iter_mut().rev() {
                *slot = letters[rest % 3];
                rest /= 3;
            }
            PauliWord::new(digits)
        })
        .collect();
    if n <= 4 {
        for w in &words {
            let worst = marginal_norm(&w.to_matrix(), n)?;
            if worst > 1e-12 {
                return Err(Error::Inconsistent(format!(
                    "word {w} has a marginal of norm {worst:.3e}"
                )));
            }
        }
    }
    Ok(FullWeightBasis { n, words })
}

/// Largest Frobenius norm among the n single-qubit partial traces.
pub fn marginal_norm(m: &CMatrix, n: usize) -> Result<f64> {
    Ok(ptr_parts_matrix(m, n)?
        .iter()
        .map(CMatrix::frobenius_norm)
        .fold(0.0, f64::max))
}

/// Orthogonal projection of a Hermitian matrix onto `W`.
///
/// Applies `M ← M − tr_k(M) ⊗ I/2` on every qubit in turn; each factor kills
/// the words with an identity on qubit `k`, and the factors commute.
pub fn project_fullweight(m: &CMatrix, n: usize) -> Result<CMatrix> {
    check_dim(m, n)?;
    let d = 1usize << n;
    let mut out = m.clone();
    for k in 1..=n {
        let mask = 1usize << (n - k);
        for r in (0..d).filter(|r| r & mask == 0) {
            for c in (0..d).filter(|c| c & mask == 0) {
                let avg = (out[(r, c)] + out[(r | mask, c | mask)]) * 0.5;
                out[(r, c)] -= avg;
                out[(r | mask, c | mask)] -= avg;
            }
        }
    }
    Ok(out)
}

fn check_dim(m: &CMatrix, n: usize) -> Result<()> {
    if m.dim() != 1 << n {
        return Err(Error::Dimension {
            expected: 1 << n,
            found: m.dim(),
        });
    }
    Ok(())
}

/// A unit-Frobenius element of `W`.
#[derive(Clone, Debug)]
pub struct Direction {
    n: usize,
    coeffs: Vec<f64>,
    matrix: CMatrix,
}

impl Direction {
    /// Rescales `coeffs` so the matrix has Frobenius norm 1
    /// (`‖Σ c_w P_w‖_F² = 2^n Σ c_w²`).
    pub fn from_coeffs(basis: &FullWeightBasis, coeffs: Vec<f64>) -> Result<Self> {
        let sq: f64 = coeffs.iter().map(|c| c * c).sum();
        let fro = (sq * (1usize << basis.n) as f64).sqrt();
        if !(fro > 1e-300) || !fro.is_finite() {
            return Err(Error::Parameter(
                "direction has zero or non-finite norm".into(),
            ));
        }
        let coeffs: Vec<f64> = coeffs.into_iter().map(|c| c / fro).collect();
        let matrix = basis.combine(&coeffs)?;
        Ok(Self {
            n: basis.n,
            coeffs,
            matrix,
        })
    }

    /// The `k`-th basis word, normalized.
    pub fn word(basis: &FullWeightBasis, k: usize) -> Result<Self> {
        if k >= basis.count() {
            return Err(Error::Parameter(format!(
                "word index {k} ≥ {}",
                basis.count()
            )));
        }
        let mut c = vec![0.0; basis.count()];
        c[k] = 1.0;
        Self::from_coeffs(basis, c)
    }

    /// Projects a Hermitian matrix onto `W` and normalizes.
    pub fn from_matrix(basis: &FullWeightBasis, m: &CMatrix) -> Result<Self> {
        Self::from_coeffs(basis, basis.coefficients(m)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

fn shifted(rho: &CMatrix, delta: &CMatrix, t: f64) -> CMatrix {
    let mut m = rho.clone();
    m.add_scaled(delta, t);
    m
}

fn feasible(rho: &CMatrix, delta: &CMatrix, t: f64) -> bool {
    shifted(rho, delta, t).is_psd_shifted(PSD_SHIFT)
}

/// Largest `t ∈ [0, 2]` with `ρ + s·sign·Δ` PSD for the endpoint, by bisection.
fn bisect_step(rho: &CMatrix, delta: &CMatrix, sign: f64) -> f64 {
    if !feasible(rho, delta, 0.0) {
        return 0.0;
    }
    if feasible(rho, delta, sign * BRACKET) {
        return BRACKET;
    }
    let (mut lo, mut hi) = (0.0, BRACKET);
    for _ in 0..BISECT_MAX {
        if hi - lo <= BISECT_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if feasible(rho, delta, sign * mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `(t₋, t₊)`: the extreme steps with `ρ + tΔ` PSD (within `1e-10`) at the
/// endpoint. The PSD set is convex, so every step in between is feasible,
/// and since `Δ ∈ W` every such state has the marginals of `ρ`.
pub fn tmax_along(rho: &DensityMatrix, d: &Direction) -> Result<(f64, f64)> {
    if rho.n() != d.n {
        return Err(Error::Dimension {
            expected: 1 << rho.n(),
            found: 1 << d.n,
        });
    }
    let plus = bisect_step(rho.matrix(), &d.matrix, 1.0);
    let minus = bisect_step(rho.matrix(), &d.matrix, -1.0);
    Ok((-minus, plus))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SearchOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Stop as soon as the best step exceeds this.
    pub stop_above: Option<f64>,
    /// Run the overlap-descent candidate (n ≤ 6 only).
    pub overlap_descent: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            restarts: DEFAULT_RESTARTS,
            seed: 0,
            stop_above: None,
            overlap_descent: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "index")]
pub enum CandidateSource {
    /// A caller-supplied deviation, by position.
    Seeded(usize),
    OverlapDescent,
    BasisWord(usize),
    Restart(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    /// `max(t₊, −t₋)` over every direction tried.
    pub sup_tmax: f64,
    pub best_source: Option<CandidateSource>,
    /// Coefficients of the best direction over the full-weight basis.
    pub best_coeffs: Option<Vec<f64>>,
    /// Directions evaluated, counting every coordinate-ascent proposal.
    pub samples_used: usize,
    pub stopped_early: bool,
}

/// `max(t₊, −t₋)` over the basis words, `restarts` random directions each
/// refined by coordinate ascent (3·3^n single-coefficient moves), and one
/// overlap-descent direction. Deterministic in `seed`.
pub fn search_max_tmax(rho: &DensityMatrix, restarts: usize, seed: u64) -> Result<f64> {
    let opts = SearchOptions {
        restarts,
        seed,
        ..SearchOptions::default()
    };
    Ok(search(rho, &opts)?.sup_tmax)
}

struct Tracker {
    best: f64,
    source: Option<CandidateSource>,
    coeffs: Option<Vec<f64>>,
    samples: usize,
    stop_above: Option<f64>,
}

impl Tracker {
    fn offer(&mut self, t: f64, source: CandidateSource, coeffs: &[f64]) {
        if t > self.best {
            self.best = t;
            self.source = Some(source);
            self.coeffs = Some(coeffs.to_vec());
        }
    }

    fn done(&self) -> bool {
        self.stop_above.is_some_and(|s| self.best > s)
    }
}

/// Cheap test: is a step beyond `t` feasible in either sign?
fn beats(rho: &CMatrix, delta: &CMatrix, t: f64) -> bool {
    let probe = t * (1.0 + IMPROVE_REL) + IMPROVE_ABS;
    feasible(rho, delta, probe) || feasible(rho, delta, -probe)
}

fn two_sided(rho: &CMatrix, delta: &CMatrix) -> f64 {
    bisect_step(rho, delta, 1.0).max(bisect_step(rho, delta, -1.0))
}

pub fn search(rho: &DensityMatrix, opts: &SearchOptions) -> Result<SearchReport> {
    search_seeded(rho, opts, &[])
}

/// [`search`], trying the full-weight parts of `seeds` (Hermitian
/// deviations from `ρ`) before anything else.
pub fn search_seeded(
    rho: &DensityMatrix,
    opts: &SearchOptions,
    seeds: &[CMatrix],
) -> Result<SearchReport> {
    if opts.restarts < 1 {
        return Err(Error::Parameter("restarts must be at least 1".into()));
    }
    let n = rho.n();
    let basis = fullweight_basis(n)?;
    let m = rho.matrix();
    let mut tr = Tracker {
        best: 0.0,
        source: None,
        coeffs: None,
        samples: 0,
        stop_above: opts.stop_above,
    };
    let finish = |tr: Tracker, early: bool| SearchReport {
        sup_tmax: tr.best,
        best_source: tr.source,
        best_coeffs: tr.coeffs,
        samples_used: tr.samples,
        stopped_early: early,
    };

    for (i, seed) in seeds.iter().enumerate() {
        if seed.dim() != m.dim() {
            return Err(Error::Dimension {
                expected: m.dim(),
                found: seed.dim(),
            });
        }
        let c = basis.coefficients(&project_fullweight(seed, n)?)?;
        if l2(&c) < 1e-12 {
            continue;
        }
        let d = Direction::from_coeffs(&basis, c)?;
        tr.samples += 1;
        tr.offer(
            two_sided(m, &d.matrix),
            CandidateSource::Seeded(i),
            &d.coeffs,
        );
        if tr.done() {
            return Ok(finish(tr, true));
        }
    }

    if opts.overlap_descent && n <= DESCENT_MAX_N {
        if let Some(coeffs) = overlap_descent(rho, &basis)? {
            let d = Direction::from_coeffs(&basis, coeffs)?;
            tr.samples += 1;
            tr.offer(
                two_sided(m, &d.matrix),
                CandidateSource::OverlapDescent,
                &d.coeffs,
            );
            if tr.done() {
                return Ok(finish(tr, true));
            }
        }
    }

    let scale = 1.0 / ((1usize << n) as f64).sqrt();
    for (k, w) in basis.words.iter().enumerate() {
        tr.samples += 1;
        let delta = w.to_matrix().scale(scale);
        if beats(m, &delta, tr.best) {
            let mut c = vec![0.0; basis.count()];
            c[k] = scale;
            tr.offer(two_sided(m, &delta), CandidateSource::BasisWord(k), &c);
            if tr.done() {
                return Ok(finish(tr, true));
            }
        }
    }

    let count = basis.count();
    let step = 0.5 / (count as f64).sqrt();
    for r in 0..opts.restarts {
        let mut rng = SplitMix64::new(SplitMix64::derive(opts.seed, r as u64));
        // x is the unit coefficient vector; the matrix is Σ x_w P_w / (√2^n ‖x‖)
        let mut x: Vec<f64> = (0..count).map(|_| rng.next_gaussian_pair().0).collect();
        let mut raw = basis.combine(&x)?;
        let mut xn = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut local = two_sided(m, &raw.scale(scale / xn));
        tr.samples += 1;
        for it in 0..3 * count {
            let k = it % count;
            let delta_k = step * rng.next_gaussian_pair().0;
            let new_xk = x[k] + delta_k;
            let new_xn = (xn * xn - x[k] * x[k] + new_xk * new_xk).max(0.0).sqrt();
            if !(new_xn > 1e-12) {
                continue;
            }
            let mut cand = raw.clone();
            basis.words[k].accumulate(&mut cand, delta_k);
            let cand_dir = cand.scale(scale / new_xn);
            tr.samples += 1;
            if beats(m, &cand_dir, local) {
                local = two_sided(m, &cand_dir);
                x[k] = new_xk;
                xn = new_xn;
                raw = cand;
            }
        }
        let coeffs: Vec<f64> = x.iter().map(|v| v * scale / xn).collect();
        tr.offer(local, CandidateSource::Restart(r), &coeffs);
        if tr.done() {
            return Ok(finish(tr, true));
        }
    }
    Ok(finish(tr, false))
}

/// Projected descent on `tr(ρσ)` over `(ρ + W) ∩ PSD`: the state sharing
/// the marginals of `ρ` that is least like it. For a pure `ρ` the end point
/// is close to a pure partner, which is then polished by Levenberg–Marquardt
/// on the marginal equations so the resulting direction is exact.
fn overlap_descent(rho: &DensityMatrix, basis: &FullWeightBasis) -> Result<Option<Vec<f64>>> {
    let n = rho.n();
    let m = rho.matrix();
    let g = project_fullweight(m, n)?;
    let gn = g.frobenius_norm();
    if gn < 1e-12 {
        return Ok(None);
    }
    let g = g.scale(1.0 / gn);
    let mut s = m.clone();
    for _ in 0..10 {
        s.add_scaled(&g, -0.2);
        for _ in 0..2 {
            s = psd_clip(&s)?;
            let dev = project_fullweight(&s.sub(m), n)?;
            s = m.add(&dev);
        }
    }
    let delta = if rho.purity() > 1.0 - 1e-9 && n <= POLISH_MAX_N {
        let top = hermitian_eig(&s)?;
        let mut partner = top.vector(top.dim() - 1);
        let target = ptr_parts_matrix(m, n)?;
        let psi = top_vector(m)?;
        // A shrinking overlap penalty drags the solution along the partner
        // set toward the least-overlap member before the exact polish.
        for pen in [1e-1, 1e-2, 1e-3, 0.0] {
            partner = polish_partner(partner, &target, n, &psi, pen)?;
        }
        CMatrix::outer(&partner).sub(m)
    } else {
        s.sub(m)
    };
    if delta.frobenius_norm() < 1e-9 {
        return Ok(None);
    }
    let c = basis.coefficients(&delta)?;
    Ok((c.iter().any(|v| v.abs() > 0.0)).then_some(c))
}

fn psd_clip(m: &CMatrix) -> Result<CMatrix> {
    let e = hermitian_eig(&m.hermitian_part())?;
    let d = m.dim();
    let mut out = CMatrix::zeros(d);
    for (k, &l) in e.values.iter().enumerate() {
        if l > 0.0 {
            let v = e.vector(k);
            for r in 0..d {
                for c in 0..d {
                    out[(r, c)] += v[r] * v[c].conj() * l;
                }
            }
        }
    }
    Ok(out)
}

fn stacked(parts: &[CMatrix]) -> Vec<f64> {
    parts
        .iter()
        .flat_map(|p| p.as_slice().iter().flat_map(|z| [z.re, z.im]))
        .collect()
}

fn marginal_residual(phi: &[C64], target: &[CMatrix], n: usize) -> Result<Vec<f64>> {
    let parts = ptr_parts_matrix(&CMatrix::outer(phi), n)?;
    let diff: Vec<CMatrix> = parts.iter().zip(target).map(|(a, b)| a.sub(b)).collect();
    Ok(stacked(&diff))
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn top_vector(m: &CMatrix) -> Result<Vec<C64>> {
    let e = hermitian_eig(m)?;
    Ok(e.vector(e.dim() - 1))
}

/// Residual of the marginal equations, extended by `√pen·⟨ψ|φ⟩` when the
/// overlap penalty is on.
fn penalized_residual(
    phi: &[C64],
    target: &[CMatrix],
    n: usize,
    psi: &[C64],
    pen: f64,
) -> Result<Vec<f64>> {
    let mut r = marginal_residual(phi, target, n)?;
    if pen > 0.0 {
        let o = inner(psi, phi) * pen.sqrt();
        r.extend([o.re, o.im]);
    }
    Ok(r)
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Levenberg–Marquardt on `φ ↦ (tr_j φφ† − target_j)_j` over the real and
/// imaginary parts of `φ`, optionally penalizing overlap with `psi`.
fn polish_partner(
    start: Vec<C64>,
    target: &[CMatrix],
    n: usize,
    psi: &[C64],
    pen: f64,
) -> Result<Vec<C64>> {
    let d = 1usize << n;
    let mut phi = start;
    let mut mu = 1e-3;
    let mut r = penalized_residual(&phi, target, n, psi, pen)?;
    for _ in 0..30 {
        let rn = l2(&r);
        if rn < 1e-15 {
            break;
        }
        let cols: Vec<Vec<f64>> = (0..2 * d)
            .map(|a| {
                let mut e = vec![C64::new(0.0, 0.0); d];
                e[a % d] = if a < d {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 1.0)
                };
                let m = CMatrix::outer2(&e, &phi).add(&CMatrix::outer2(&phi, &e));
                let mut col = stacked(&ptr_parts_matrix(&m, n)?);
                if pen > 0.0 {
                    let o = inner(psi, &e) * pen.sqrt();
                    col.extend([o.re, o.im]);
                }
                Ok(col)
            })
            .collect::<Result<_>>()?;
        let p = 2 * d;
        let mut jtj = vec![0.0; p * p];
        let mut jtr = vec![0.0; p];
        for a in 0..p {
            jtr[a] = cols[a].iter().zip(&r).map(|(x, y)| x * y).sum();
            for b in a..p {
                let v: f64 = cols[a].iter().zip(&cols[b]).map(|(x, y)| x * y).sum();
                jtj[a * p + b] = v;
                jtj[b * p + a] = v;
            }
        }
        let mut accepted = false;
        while mu <= 1e8 {
            let mut sys = jtj.clone();
            for a in 0..p {
                sys[a * p + a] += mu * (jtj[a * p + a] + 1e-12);
            }
            let rhs: Vec<f64> = jtr.iter().map(|v| -v).collect();
            if let Some(x) = solve_spd(&sys, &rhs, p) {
                let cand: Vec<C64> = (0..d).map(|i| phi[i] + C64::new(x[i], x[i + d])).collect();
                let cr = penalized_residual(&cand, target, n, psi, pen)?;
                if l2(&cr) < rn {
                    phi = cand;
                    r = cr;
                    mu = (mu / 10.0).max(1e-12);
                    accepted = true;
                    break;
                }
            }
            mu *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    Ok(phi)
}

/// Cholesky solve of a symmetric positive definite `p × p` system.
fn solve_spd(a: &[f64], b: &[f64], p: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; p * p];
    for j in 0..p {
        let mut diag = a[j * p + j];
        for k in 0..j {
            diag -= l[j * p + k] * l[j * p + k];
        }
        if !(diag > 0.0) {
            return None;
        }
        let ljj = diag.sqrt();
        l[j * p + j] = ljj;
        for i in (j + 1)..p {
            let mut s = a[i * p + j];
            for k in 0..j {
                s -= l[i * p + k] * l[j * p + k];
            }
            l[i * p + j] = s / ljj;
        }
    }
    let mut y = b.to_vec();
    for i in 0..p {
        for k in 0..i {
            y[i] -= l[i * p + k] * y[k];
        }
        y[i] /= l[i * p + i];
    }
    for i in (0..p).rev() {
        for k in (i + 1)..p {
            y[i] -= l[k * p + i] * y[k];
        }
        y[i] /= l[i * p + i];
    }
    Some(y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Determinedness {
    Determined,
    Undetermined,
    Inconclusive,
}

/// The disk `{U·F(z)·U† : |z| ≤ 1}`, where `F` is the GHZ family of the
/// certified amplitudes and `U` the certificate's local unitary. `z = 1` is
/// (numerically) ψ itself.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessFamily {
    pub params: GhzParams,
    #[serde(skip)]
    pub local_unitary: LocalUnitary,
    pub checked_z: Vec<C64>,
    /// Largest marginal distance between a checked member and ψ.
    pub max_rdm_distance: f64,
}

impl WitnessFamily {
    pub fn member(&self, z: C64) -> Result<DensityMatrix> {
        let f = ghz_family(&self.params, z)?;
        Ok(self.local_unitary.apply_density(&f))
    }

    pub fn description(&self) -> String {
        format!(
            "U·F(z)·U† for |z| ≤ 1 with |α| = {:.12}, |β| = {:.12}",
            self.params.a.norm(),
            self.params.b.norm()
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompatVerdict {
    pub verdict: Determinedness,
    pub ghz_certificate: GhzCertificate,
    pub witness_family: Option<WitnessFamily>,
    pub numeric_sup_tmax: f64,
    pub samples_used: usize,
    pub search: SearchReport,
    /// Set when the theorem-backed verdict and the numeric search disagree.
    pub anomaly: Option<String>,
}

impl CompatVerdict {
    /// `None` when inconclusive.
    pub fn determined(&self) -> Option<bool> {
        match self.verdict {
            Determinedness::Determined => Some(true),
            Determinedness::Undetermined => Some(false),
            Determinedness::Inconclusive => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerdictOptions {
    pub tol: f64,
    pub search: SearchOptions,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            search: SearchOptions::default(),
        }
    }
}

pub fn determinedness(psi: &PureState) -> Result<CompatVerdict> {
    determinedness_with(psi, &VerdictOptions::default())
}

/// ψ is undetermined by its marginals exactly when it is local-unitary
/// equivalent to a GHZ state. The detector decides; the numeric search runs
/// as a cross-check and stops once its outcome can no longer change whether
/// an anomaly is raised.
pub fn determinedness_with(psi: &PureState, opts: &VerdictOptions) -> Result<CompatVerdict> {
    let n = psi.n();
    if n < 2 {
        return Err(Error::QubitCount {
            n,
            requirement: "n ≥ 2 required",
        });
    }
    let cert = detect_ghz_type(psi, opts.tol)?;
    let verdict = match cert.verdict {
        GhzVerdict::Ghz => Determinedness::Undetermined,
        GhzVerdict::NotGhz => Determinedness::Determined,
        GhzVerdict::Inconclusive => Determinedness::Inconclusive,
    };
    let mut anomalies = Vec::new();

    let witness = if verdict == Determinedness::Undetermined {
        let w = witness_family(psi, &cert)?;
        if w.max_rdm_distance > RDM_EQ_TOL {
            anomalies.push(format!(
                "witness family member differs from ψ's marginals by {:.3e}",
                w.max_rdm_distance
            ));
        }
        Some(w)
    } else {
        None
    };

    let threshold = match verdict {
        Determinedness::Undetermined => ANOMALY_UNDETERMINED,
        _ => ANOMALY_DETERMINED,
    };
    let search_opts = SearchOptions {
        stop_above: Some(
            opts.search
                .stop_above
                .map_or(threshold, |s| s.min(threshold)),
        ),
        ..opts.search
    };
    // The far end of the witness disk is the longest certified step, so it
    // goes first; the search still measures it independently.
    let seeds = match &witness {
        Some(w) => vec![w
            .member(C64::new(-1.0, 0.0))?
            .matrix()
            .sub(psi.projector().matrix())],
        None => Vec::new(),
    };
    let report = search_seeded(&psi.projector(), &search_opts, &seeds)?;
    let sup = report.sup_tmax;
    match verdict {
        Determinedness::Determined if sup > ANOMALY_DETERMINED => anomalies.push(format!(
            "detector says determined but a marginal-preserving step of {sup:.3e} is feasible"
        )),
        Determinedness::Undetermined if sup < ANOMALY_UNDETERMINED => anomalies.push(format!(
            "detector says undetermined but the search found no step above {sup:.3e}"
        )),
        _ => {}
    }
    Ok(CompatVerdict {
        verdict,
        ghz_certificate: cert,
        witness_family: witness,
        numeric_sup_tmax: sup,
        samples_used: report.samples_used,
        search: report,
        anomaly: (!anomalies.is_empty()).then(|| anomalies.join("; ")),
    })
}

fn witness_family(psi: &PureState, cert: &GhzCertificate) -> Result<WitnessFamily> {
    let (params, lu) = match (cert.params, cert.local_unitary()) {
        (Some(p), Some(u)) => (p, u),
        _ => {
            return Err(Error::Inconsistent(
                "GHZ certificate without local bases".into(),
            ))
        }
    };
    let params = GhzParams::new(params.n, params.a, params.b).or_else(|_| {
        let s = (params.a.norm_sqr() + params.b.norm_sqr()).sqrt();
        GhzParams::new(params.n, params.a / s, params.b / s)
    })?;
    let reference = ptr_tuple_pure(psi)?;
    let checked_z: Vec<C64> = [
        (1.0, 0.0),
        (0.5, 0.0),
        (0.0, 0.0),
        (-0.5, 0.0),
        (-1.0, 0.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (0.3, 0.4),
    ]
    .iter()
    .map(|&(re, im)| C64::new(re, im))
    .collect();
    let mut family = WitnessFamily {
        params,
        local_unitary: lu,
        checked_z: Vec::new(),
        max_rdm_distance: 0.0,
    };
    let mut worst: f64 = 0.0;
    for &z in &checked_z {
        let member = family.member(z)?;
        worst = worst.max(rdm_max_distance(&ptr_tuple(&member)?, &reference)?);
    }
    family.checked_z = checked_z;
    family.max_rdm_distance = worst;
    Ok(family)
}

/// `true` iff `ω` has numeric rank exactly 2. For a pure ψ and a mixed ω
/// sharing its marginals this always holds when `n ≥ 3`, so `false` signals
/// a violated theorem (or broken numerics) and callers should fail loudly.
/// Two qubits are rejected: `I/4` shares the marginals of a Bell state.
pub fn rank2_check(psi: &PureState, omega: &DensityMatrix) -> Result<bool> {
    if psi.n() != omega.n() {
        return Err(Error::Dimension {
            expected: psi.dim(),
            found: omega.dim(),
        });
    }
    if psi.n() < 3 {
        return Err(Error::QubitCount {
            n: psi.n(),
            requirement: "n ≥ 3 required for the rank-2 result",
        });
    }
    require_same_rdms(&ptr_tuple_pure(psi)?, &ptr_tuple(omega)?, RDM_EQ_TOL)?;
    let rank = numeric_rank(omega.matrix(), 1e-8)?;
    if rank < 2 {
        return Err(Error::NotMixed);
    }
    Ok(rank == 2)
}

/// Hermitian basis of `2^n × 2^n` matrices over the reals: `E_ii`, then for
/// `i < j` the pair `E_ij + E_ji`, `i(E_ij − E_ji)`.
fn hermitian_real_basis(n: usize) -> Vec<CMatrix> {
    let d = 1usize << n;
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in i..d {
            if i == j {
                let mut m = CMatrix::zeros(d);
                m[(i, i)] = C64::new(1.0, 0.0);
                out.push(m);
            } else {
                let mut re = CMatrix::zeros(d);
                re[(i, j)] = C64::new(1.0, 0.0);
                re[(j, i)] = C64::new(1.0, 0.0);
                out.push(re);
                let mut im = CMatrix::zeros(d);
                im[(i, j)] = C64::new(0.0, 1.0);
                im[(j, i)] = C64::new(0.0, -1.0);
                out.push(im);
            }
        }
    }
    out
}

/// Kernel of `Δ ↦ (tr_1 Δ, …, tr_n Δ)` on Hermitian matrices, computed
/// without reference to Pauli words: Gaussian elimination with partial
/// pivoting on the real constraint matrix, one free variable per kernel
/// vector, then Gram–Schmidt under `Re tr(A†B)`.
pub fn partial_trace_kernel(n: usize) -> Result<Vec<CMatrix>> {
    if !(2..=4).contains(&n) {
        return Err(Error::QubitCount {
            n,
            requirement: "2 ≤ n ≤ 4 required",
        });
    }
    let herm = hermitian_real_basis(n);
    let cols: Vec<Vec<f64>> = herm
        .iter()
        .map(|b| ptr_parts_matrix(b, n).map(|p| stacked(&p)))
        .collect::<Result<_>>()?;
    let (rows, ncols) = (cols[0].len(), cols.len());
    let mut a: Vec<Vec<f64>> = (0..rows)
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect();

    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == rows {
            break;
        }
        let (best, mag) = (row..rows)
            .map(|r| (r, a[r][col].abs()))
            .fold((row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if mag <= 1e-12 {
            continue;
        }
        a.swap(row, best);
        let piv = a[row][col];
        for v in a[row].iter_mut() {
            *v /= piv;
        }
        let pivot_row = a[row].clone();
        for (r, other) in a.iter_mut().enumerate() {
            if r != row && other[col] != 0.0 {
                let f = other[col];
                for (x, p) in other.iter_mut().zip(&pivot_row) {
                    *x -= f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut kernel = Vec::with_capacity(free.len());
    for &f in &free {
        let mut m = herm[f].clone();
        for (r, &pc) in pivots.iter().enumerate() {
            let coef = -a[r][f];
            if coef != 0.0 {
                m.add_scaled(&herm[pc], coef);
            }
        }
        kernel.push(m);
    }
    Ok(orthonormalize(&kernel))
}

/// Gram–Schmidt under the real Hilbert–Schmidt inner product, dropping
/// numerically dependent vectors.
pub fn orthonormalize(vs: &[CMatrix]) -> Vec<CMatrix> {
    let mut out: Vec<CMatrix> = Vec::with_capacity(vs.len());
    for v in vs {
        let mut w = v.clone();
        for _ in 0..2 {
            for u in &out {
                let c = u.hs_inner(&w).re;
                w.add_scaled(u, -c);
            }
        }
        let nw = w.frobenius_norm();
        if nw > 1e-10 {
            out.push(w.scale(1.0 / nw));
        }
    }
    out
}

/// Largest relative distance from a vector of `a` to the real span of the
/// orthonormal set `b`.
pub fn subspace_residual(a: &[CMatrix], b_orthonormal: &[CMatrix]) -> f64 {
    a.iter()
        .map(|v| {
            let mut w = v.clone();
            for u in b_orthonormal {
                let c = u.hs_inner(v).re;
                w.add_scaled(u, -c);
            }
            w.frobenius_norm() / v.frobenius_norm().max(1e-300)
        })
        .fold(0.0, f64::max)
}
