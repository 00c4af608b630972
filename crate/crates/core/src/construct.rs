//! From a pure ψ and a mixed ω with the same marginals, build a second pure
//! state with those marginals.
//!
//! Every mixture `(1−a)ψψ† + aω` keeps the marginals for all real `a`. ω has
//! rank 2 and ψ lies in its range, so the mixture lives on the plane
//! `span{ψ, ψ₂}` and is a density matrix exactly while its 2×2 block there
//! is PSD. Pushing `a` past 1 until the block's low eigenvalue reaches zero
//! leaves a rank-1 projector, the partner ψ′.

use serde::Serialize;

use crate::qstate::{
    hermitian_eig, inner, norm, numeric_rank, CMatrix, DensityMatrix, PureState, C64,
};
use crate::rdm::{ptr_tuple, ptr_tuple_pure, require_same_rdms, RDM_EQ_TOL};
use crate::{Error, Result};

/// Partner marginals must match ψ's within this.
pub const PARTNER_RDM_TOL: f64 = 1e-8;
/// Eigenvalue gap below which both orderings of ω's eigenvectors are tried.
pub const DEGENERATE_GAP: f64 = 1e-10;
const A_LIMIT: f64 = 1e6;
const CLOSED_FORM_MIN_DENOM: f64 = 1e-14;

/// `(1/2 − √(|u|²+z²), 1/2 + √(|u|²+z²))`: the spectrum of
/// `[[1/2+z, ū], [u, 1/2−z]]`.
pub fn eigen2(z: f64, u: C64) -> (f64, f64) {
    let r = (u.norm_sqr() + z * z).sqrt();
    (0.5 - r, 0.5 + r)
}

/// `(1−a)|ψ⟩⟨ψ| + aω`. Hermitian with unit trace and ψ's marginals for
/// every real `a`, but PSD only on the legitimate interval.
pub fn mixture_state(psi: &PureState, omega: &DensityMatrix, a: f64) -> Result<CMatrix> {
    check_pair(psi, omega)?;
    Ok(mixture_unchecked(psi, omega, a))
}

fn mixture_unchecked(psi: &PureState, omega: &DensityMatrix, a: f64) -> CMatrix {
    let mut m = CMatrix::outer(psi.amps()).scale(1.0 - a);
    m.add_scaled(omega.matrix(), a);
    m
}

fn check_pair(psi: &PureState, omega: &DensityMatrix) -> Result<()> {
    if psi.n() != omega.n() {
        return Err(Error::Dimension {
            expected: psi.dim(),
            found: omega.dim(),
        });
    }
    require_same_rdms(&ptr_tuple_pure(psi)?, &ptr_tuple(omega)?, RDM_EQ_TOL)?;
    Ok(())
}

/// ω written on its range `{φ₁, φ₂}` and the mixture written on
/// `{ψ, ψ₂}`, where `ψ = c₁φ₁ + c₂φ₂` and `ψ₂ = c̄₂φ₁ − c̄₁φ₂`.
#[derive(Clone, Debug, Serialize)]
pub struct TwoLevelRestriction {
    pub phi1: Vec<C64>,
    pub phi2: Vec<C64>,
    /// Eigenvalue of ω on φ₁.
    pub p: f64,
    pub c1: C64,
    pub c2: C64,
    pub psi2: Vec<C64>,
    /// `⟨ψ|ω|ψ⟩ = p|c₁|² + (1−p)|c₂|²`
    pub w: f64,
    /// `⟨ψ₂|ω|ψ⟩ = (2p−1)c₁c₂`
    pub x: C64,
}

impl TwoLevelRestriction {
    pub fn new(psi: &PureState, omega: &DensityMatrix, swap: bool) -> Result<Self> {
        let e = hermitian_eig(omega.matrix())?;
        let d = e.dim();
        let (i1, i2) = if swap { (d - 2, d - 1) } else { (d - 1, d - 2) };
        let phi1 = e.vector(i1);
        let phi2 = e.vector(i2);
        let c1 = inner(&phi1, psi.amps());
        let c2 = inner(&phi2, psi.amps());
        let weight = c1.norm_sqr() + c2.norm_sqr();
        if (weight - 1.0).abs() > 1e-9 {
            return Err(Error::TheoremViolation(format!(
                "ψ has weight {weight:.12} on the range of ω; a rank-2 ω sharing ψ's marginals must contain ψ"
            )));
        }
        let psi2: Vec<C64> = phi1
            .iter()
            .zip(&phi2)
            .map(|(a, b)| c2.conj() * a - c1.conj() * b)
            .collect();
        let w = omega.matrix().sandwich(psi.amps(), psi.amps()).re;
        let x = omega.matrix().sandwich(&psi2, psi.amps());
        Ok(Self {
            phi1,
            phi2,
            p: e.values[i1],
            c1,
            c2,
            psi2,
            w,
            x,
        })
    }

    /// `z(a)` of the block `[[1/2+z, ū], [u, 1/2−z]]`.
    pub fn z(&self, a: f64) -> f64 {
        0.5 - a * (1.0 - self.w)
    }

    /// `u(a) = a·x`, the lower off-diagonal entry of the block.
    pub fn u(&self, a: f64) -> C64 {
        self.x * a
    }

    pub fn block(&self, a: f64) -> [[C64; 2]; 2] {
        let (z, u) = (self.z(a), self.u(a));
        [
            [C64::new(0.5 + z, 0.0), u.conj()],
            [u, C64::new(0.5 - z, 0.0)],
        ]
    }

    pub fn low_eigenvalue(&self, a: f64) -> f64 {
        eigen2(self.z(a), self.u(a)).0
    }

    /// `|⟨ψ|ψ₂⟩|`
    pub fn orthogonality_defect(&self, psi: &PureState) -> f64 {
        inner(psi.amps(), &self.psi2).norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingSolver {
    ClosedForm,
    Bisection,
}

/// Everything [`pure_partner`] checked on the way.
#[derive(Clone, Debug, Serialize)]
pub struct PartnerReport {
    pub partner: PureState,
    pub restriction: TwoLevelRestriction,
    pub solver: CrossingSolver,
    /// The mixture is a density matrix exactly for `a` in this interval.
    pub legitimate_interval: (f64, f64),
    pub a_star: f64,
    pub low_at_one: f64,
    pub low_at_star: f64,
    /// Smallest low eigenvalue over an even grid of `(1, a*)`.
    pub min_low_inside: f64,
    pub rdm_distance: f64,
    pub overlap: f64,
    /// `ω ≈ λψψ† + (1−λ)ψ′ψ′†`, λ by least squares.
    pub lambda: f64,
    pub mixture_residual: f64,
    pub swapped_eigenvectors: bool,
}

/// See [`pure_partner_report`].
pub fn pure_partner(psi: &PureState, omega: &DensityMatrix) -> Result<PureState> {
    Ok(pure_partner_report(psi, omega)?.partner)
}

/// The pure partner of ψ inside the mixture line through ω.
///
/// In the `{ψ, ψ₂}` block, `det = a·[(1−w) − a((1−w)² + |x|²)]`, so the
/// interval is `[0, a*]` with `a* = (1−w) / ((1−w)² + |x|²)`, and `a* > 1`
/// because ω itself has rank 2. At `a*` the block is a rank-1 projector
/// whose range is ψ′.
pub fn pure_partner_report(psi: &PureState, omega: &DensityMatrix) -> Result<PartnerReport> {
    check_pair(psi, omega)?;
    let rank = numeric_rank(omega.matrix(), 1e-8)?;
    if rank < 2 {
        return Err(Error::NotMixed);
    }
    if rank > 2 && psi.n() < 3 {
        return Err(Error::Parameter(format!(
            "ω has rank {rank}; two-qubit inputs need a rank-2 ω (the rank-2 result starts at n = 3)"
        )));
    }
    if rank > 2 {
        return Err(Error::TheoremViolation(format!(
            "ω has rank {rank}, but a mixed state sharing a pure state's marginals has rank 2"
        )));
    }
    let e = hermitian_eig(omega.matrix())?;
    let d = e.dim();
    let gap = (e.values[d - 1] - e.values[d - 2]).abs();
    let orders: &[bool] = if gap < DEGENERATE_GAP {
        &[false, true]
    } else {
        &[false]
    };
    let mut last_err = None;
    for &swap in orders {
        match attempt(psi, omega, swap) {
            Ok(r) => return Ok(r),
            Err(err) => last_err = Some(err),
        }
    }
    Err(last_err.expect("at least one ordering tried"))
}

fn attempt(psi: &PureState, omega: &DensityMatrix, swap: bool) -> Result<PartnerReport> {
    let res = TwoLevelRestriction::new(psi, omega, swap)?;
    let orth = res.orthogonality_defect(psi);
    if orth > 1e-10 {
        return Err(Error::Inconsistent(format!("⟨ψ|ψ₂⟩ = {orth:.3e}")));
    }
    let (a_star, solver) = crossing(&res)?;

    let low_at_one = res.low_eigenvalue(1.0);
    let low_at_star = res.low_eigenvalue(a_star);
    let min_low_inside = (1..16)
        .map(|k| res.low_eigenvalue(1.0 + (a_star - 1.0) * k as f64 / 16.0))
        .fold(f64::INFINITY, f64::min);
    if !(low_at_one > 0.0) || low_at_star.abs() > 1e-10 || !(min_low_inside > 0.0) {
        return Err(Error::Inconsistent(format!(
            "crossing check failed: low eigenvalue {low_at_one:.3e} at a = 1, \
             {min_low_inside:.3e} inside, {low_at_star:.3e} at a* = {a_star}"
        )));
    }

    // eigenvalue-1 eigenvector of the rank-1 block: its larger column
    let b = res.block(a_star);
    let col = if b[0][0].norm_sqr() + b[1][0].norm_sqr() >= b[0][1].norm_sqr() + b[1][1].norm_sqr()
    {
        [b[0][0], b[1][0]]
    } else {
        [b[0][1], b[1][1]]
    };
    let scale = norm(&col);
    let (v1, v2) = (col[0] / scale, col[1] / scale);
    let amps: Vec<C64> = psi
        .amps()
        .iter()
        .zip(&res.psi2)
        .map(|(p, q)| v1 * p + v2 * q)
        .collect();
    let partner = PureState::from_unnormalized(psi.n(), amps)?.with_canonical_phase();

    let rdm_distance = require_same_rdms(
        &ptr_tuple_pure(&partner)?,
        &ptr_tuple_pure(psi)?,
        PARTNER_RDM_TOL,
    )
    .map_err(|err| Error::Inconsistent(format!("partner marginals: {err}")))?;
    let overlap = partner.inner(psi).norm();
    if overlap >= 1.0 - 1e-8 {
        return Err(Error::Inconsistent(format!(
            "partner coincides with ψ (|⟨ψ′|ψ⟩| = {overlap})"
        )));
    }

    let pp = partner.projector().into_matrix();
    let pq = psi.projector().into_matrix();
    let diff = pq.sub(&pp);
    let lambda = omega.matrix().sub(&pp).hs_inner(&diff).re / diff.hs_inner(&diff).re;
    let mut recon = pp.clone();
    recon.add_scaled(&diff, lambda);
    let mixture_residual = recon.distance(omega.matrix());
    if !(lambda > 0.0 && lambda < 1.0) || mixture_residual > 1e-8 {
        return Err(Error::Inconsistent(format!(
            "ω is not a mixture of ψ and ψ′: λ = {lambda}, residual {mixture_residual:.3e}"
        )));
    }

    Ok(PartnerReport {
        partner,
        restriction: res,
        solver,
        legitimate_interval: (0.0, a_star),
        a_star,
        low_at_one,
        low_at_star,
        min_low_inside,
        rdm_distance,
        overlap,
        lambda,
        mixture_residual,
        swapped_eigenvectors: swap,
    })
}

fn crossing(res: &TwoLevelRestriction) -> Result<(f64, CrossingSolver)> {
    let one_minus_w = 1.0 - res.w;
    let denom = one_minus_w * one_minus_w + res.x.norm_sqr();
    if denom >= CLOSED_FORM_MIN_DENOM {
        return Ok((one_minus_w / denom, CrossingSolver::ClosedForm));
    }
    let mut hi = 2.0;
    while res.low_eigenvalue(hi) > 0.0 {
        hi *= 2.0;
        if hi > A_LIMIT {
            return Err(Error::NoCrossing { a_upper: A_LIMIT });
        }
    }
    let mut lo = 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if res.low_eigenvalue(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok((lo, CrossingSolver::Bisection))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ghz::{ghz_family, GhzParams};
    use crate::rdm::rdm_max_distance;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn eigen2_examples() {
        assert_eq!(eigen2(0.0, r(0.0)), (0.5, 0.5));
        assert_eq!(eigen2(0.5, r(0.0)), (0.0, 1.0));
        let (lo, hi) = eigen2(0.3, r(0.4));
        assert!(lo.abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mixture_endpoints() {
        let p = GhzParams::new(3, r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2)).unwrap();
        let psi = p.state();
        let om = ghz_family(&p, r(0.0)).unwrap();
        assert!(
            mixture_state(&psi, &om, 0.0)
                .unwrap()
                .distance(psi.projector().matrix())
                < 1e-15
        );
        assert!(mixture_state(&psi, &om, 1.0).unwrap().distance(om.matrix()) < 1e-15);
        let at2 = mixture_state(&psi, &om, 2.0).unwrap();
        let flipped = GhzParams::new(3, p.a, -p.b).unwrap().state().projector();
        assert!(at2.distance(flipped.matrix()) < 1e-14);
    }

    #[test]
    fn balanced_partner() {
        let p = GhzParams::new(3, r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2)).unwrap();
        let rep = pure_partner_report(&p.state(), &ghz_family(&p, r(0.0)).unwrap()).unwrap();
        assert!((rep.a_star - 2.0).abs() < 1e-12);
        assert!(rep.overlap < 1e-12);
        let want = GhzParams::new(3, p.a, -p.b).unwrap().state();
        assert!((rep.partner.inner(&want).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unbalanced_and_interior_partners() {
        let p = GhzParams::new(3, r(0.8f64.sqrt()), r(0.2f64.sqrt())).unwrap();
        let rep = pure_partner_report(&p.state(), &ghz_family(&p, r(0.0)).unwrap()).unwrap();
        assert!((rep.overlap - 0.6).abs() < 1e-12);

        let b = GhzParams::new(3, r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2)).unwrap();
        let rep = pure_partner_report(&b.state(), &ghz_family(&b, r(0.5)).unwrap()).unwrap();
        assert!((rep.a_star - 4.0).abs() < 1e-12);
        let flipped = ghz_family(&b, r(-1.0)).unwrap();
        assert!(rep.partner.projector().distance(&flipped) < 1e-12);
        let d = rdm_max_distance(
            &ptr_tuple_pure(&rep.partner).unwrap(),
            &ptr_tuple_pure(&b.state()).unwrap(),
        );
        assert!(d.unwrap() < 1e-10);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = GhzParams::new(3, r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2)).unwrap();
        let psi = p.state();
        assert!(matches!(
            pure_partner(&psi, &psi.projector()),
            Err(Error::NotMixed)
        ));
        let mm = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(matches!(
            pure_partner(&psi, &mm),
            Err(Error::RdmMismatch { .. })
        ));
    }
}
