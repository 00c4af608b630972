use super::{bit_pos, inner, CMatrix, DensityMatrix, PureState, C64};

/// `U₁ ⊗ U₂ ⊗ … ⊗ Uₙ` with each factor a 2×2 unitary, `factors[k][r][c]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalUnitary {
    factors: Vec<[[C64; 2]; 2]>,
}

impl LocalUnitary {
    pub fn new(factors: Vec<[[C64; 2]; 2]>) -> Self {
        Self { factors }
    }

    pub fn identity(n: usize) -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self::new(vec![[[one, zero], [zero, one]]; n])
    }

    /// Factor `k` maps `|0⟩ ↦ u[k]` and `|1⟩ ↦ v[k]`.
    pub fn from_columns(u: &[[C64; 2]], v: &[[C64; 2]]) -> Self {
        Self::new(
            u.iter()
                .zip(v)
                .map(|(a, b)| [[a[0], b[0]], [a[1], b[1]]])
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[[[C64; 2]; 2]] {
        &self.factors
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.factors
                .iter()
                .map(|f| {
                    [
                        [f[0][0].conj(), f[1][0].conj()],
                        [f[0][1].conj(), f[1][1].conj()],
                    ]
                })
                .collect(),
        )
    }

    /// Largest `‖U_k†U_k − I‖_F` over the factors.
    pub fn unitarity_defect(&self) -> f64 {
        self.factors
            .iter()
            .map(|f| {
                let c0 = [f[0][0], f[1][0]];
                let c1 = [f[0][1], f[1][1]];
                let g = [
                    inner(&c0, &c0) - 1.0,
                    inner(&c0, &c1),
                    inner(&c1, &c0),
                    inner(&c1, &c1) - 1.0,
                ];
                g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
            })
            .fold(0.0, f64::max)
    }

    pub fn apply_vec(&self, v: &mut [C64]) {
        let n = self.n();
        assert_eq!(v.len(), 1 << n);
        for (k, f) in self.factors.iter().enumerate() {
            apply_gate(v, bit_pos(n, k + 1), f);
        }
    }

    pub fn apply(&self, psi: &PureState) -> PureState {
        let mut amps = psi.amps().to_vec();
        self.apply_vec(&mut amps);
        PureState::new_unchecked(psi.n(), amps)
    }

    /// `U M U†`
    pub fn conjugate(&self, m: &CMatrix) -> CMatrix {
        let d = m.dim();
        assert_eq!(d, 1 << self.n());
        let mut cols: Vec<Vec<C64>> = (0..d).map(|c| m.column(c)).collect();
        cols.iter_mut().for_each(|c| self.apply_vec(c));
        let half = CMatrix::from_fn(d, |r, c| cols[c][r]);
        let conj = LocalUnitary::new(
            self.factors
                .iter()
                .map(|f| {
                    [
                        [f[0][0].conj(), f[0][1].conj()],
                        [f[1][0].conj(), f[1][1].conj()],
                    ]
                })
                .collect(),
        );
        let mut rows = half.rows();
        rows.iter_mut().for_each(|r| conj.apply_vec(r));
        CMatrix::from_rows(&rows).expect("square")
    }

    pub fn apply_density(&self, rho: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::new_unchecked(rho.n(), self.conjugate(rho.matrix()))
    }
}

/// Applies a 2×2 gate to the qubit at flat bit position `pos`.
pub(crate) fn apply_gate(v: &mut [C64], pos: usize, g: &[[C64; 2]; 2]) {
    let mask = 1usize << pos;
    for x in 0..v.len() {
        if x & mask == 0 {
            let (a, b) = (v[x], v[x | mask]);
            v[x] = g[0][0] * a + g[0][1] * b;
            v[x | mask] = g[1][0] * a + g[1][1] * b;
        }
    }
}
