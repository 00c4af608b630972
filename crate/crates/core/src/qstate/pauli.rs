use std::fmt;

use super::{CMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Image of `|b⟩` as `(phase, b')` with `P|b⟩ = phase·|b'⟩`.
    #[inline]
    fn act(self, b: usize) -> (C64, usize) {
        match self {
            Pauli::I => (C64::new(1.0, 0.0), b),
            Pauli::X => (C64::new(1.0, 0.0), b ^ 1),
            Pauli::Y => {
                if b == 0 {
                    (C64::new(0.0, 1.0), 1)
                } else {
                    (C64::new(0.0, -1.0), 0)
                }
            }
            Pauli::Z => (C64::new(if b == 0 { 1.0 } else { -1.0 }, 0.0), b),
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis, letter `k` acting on qubit `k+1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliWord {
    letters: Vec<Pauli>,
}

impl PauliWord {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self { letters }
    }

    /// Parses strings like `"XIZ"`.
    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                'I' => Some(Pauli::I),
                'X' => Some(Pauli::X),
                'Y' => Some(Pauli::Y),
                'Z' => Some(Pauli::Z),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// The single nonzero entry of column `col`: `P|col⟩ = phase·|row⟩`.
    #[inline]
    pub fn column_entry(&self, col: usize) -> (usize, C64) {
        let n = self.letters.len();
        let mut phase = C64::new(1.0, 0.0);
        let mut row = 0usize;
        for (k, &p) in self.letters.iter().enumerate() {
            let pos = n - 1 - k;
            let (ph, b) = p.act((col >> pos) & 1);
            phase *= ph;
            row |= b << pos;
        }
        (row, phase)
    }

    /// `m += coeff · P`
    pub fn accumulate(&self, m: &mut CMatrix, coeff: f64) {
        for col in 0..m.dim() {
            let (row, phase) = self.column_entry(col);
            m[(row, col)] += phase * coeff;
        }
    }

    pub fn to_matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(1 << self.n());
        self.accumulate(&mut m, 1.0);
        m
    }

    /// `tr(P · m)`
    pub fn expectation(&self, m: &CMatrix) -> C64 {
        // tr(P m) = Σ_col Σ_row P[col][row]·m[row][col]; P[r][c] nonzero at r = image of c.
        (0..m.dim())
            .map(|c| {
                let (r, phase) = self.column_entry(c);
                phase * m[(c, r)]
            })
            .sum()
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_are_hermitian_unitary_and_traceless() {
        for s in ["X", "Y", "Z", "XY", "YZ", "IZ", "XYZ", "IIY", "II"] {
            let w = PauliWord::parse(s).unwrap();
            let m = w.to_matrix();
            assert_eq!(m.max_asymmetry(), 0.0, "{s}");
            let sq = m.matmul(&m);
            assert!(sq.distance(&CMatrix::identity(m.dim())) < 1e-15, "{s}");
            let tr = m.trace();
            if w.weight() == 0 {
                assert_eq!(tr.re, m.dim() as f64);
            } else {
                assert_eq!(tr.norm(), 0.0, "{s}");
            }
        }
    }

    #[test]
    fn y_matches_textbook_matrix() {
        let y = PauliWord::parse("Y").unwrap().to_matrix();
        assert_eq!(y[(0, 1)], C64::new(0.0, -1.0));
        assert_eq!(y[(1, 0)], C64::new(0.0, 1.0));
    }

    #[test]
    fn expectation_is_hs_inner() {
        let w = PauliWord::parse("XZ").unwrap();
        let m = CMatrix::from_fn(4, |r, c| C64::new((r * 4 + c) as f64, r as f64 - c as f64));
        let direct = w.to_matrix().matmul(&m).trace();
        assert!((w.expectation(&m) - direct).norm() < 1e-12);
        assert_eq!(w.to_string(), "XZ");
    }
}
