//! Entanglement, coherence and mixedness of a density matrix.
//!
//! Both concurrences are `max(0, l1 - l2 - ...)` over the square roots of
//! the spectrum of `rho * rho_tilde`, descending. They differ only in the
//! antiunitary "spin flip" that produces `rho_tilde`:
//!
//! * qubits: `(sigma_y x sigma_y) rho^* (sigma_y x sigma_y)` with complex
//!   conjugation in the computational basis;
//! * two fermions with a four-level single-particle space: `D rho D^-1`
//!   with `D = M K`, where `M` is a real signed permutation and `K` is
//!   complex conjugation taken in the basis
//!   `|2,2>, |2,1>, |2,0>, |2,-1>, |2,-2>, i|0,0>`. States are stored
//!   without the `i`, so the phase is put in and taken out by the diagonal
//!   unitary `P = diag(1, 1, 1, 1, 1, i)`.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, StateVector, SystemKind};
use crate::numerics::{self, ComplexMatrix};

/// Slack allowed above 1 before a concurrence is reported as an error.
pub const CONCURRENCE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FlipKind {
    FermionicD,
    QubitSigmaYY,
}

/// The spin-flip used to build `rho_tilde`.
#[derive(Debug, Clone)]
pub struct SpinFlipConvention {
    kind: FlipKind,
    flip: ComplexMatrix,
    phase: Vec<C64>,
}

impl SpinFlipConvention {
    pub fn fermionic() -> Self {
        let mut m = vec![vec![0.0; 6]; 6];
        m[0][4] = 1.0;
        m[1][3] = -1.0;
        m[2][2] = 1.0;
        m[3][1] = -1.0;
        m[4][0] = 1.0;
        m[5][5] = 1.0;
        let mut phase = vec![C64::new(1.0, 0.0); 6];
        phase[5] = C64::new(0.0, 1.0);
        Self {
            kind: FlipKind::FermionicD,
            flip: ComplexMatrix::from_real_rows(&m).expect("square"),
            phase,
        }
    }

    pub fn qubit() -> Self {
        let mut m = vec![vec![0.0; 4]; 4];
        m[0][3] = -1.0;
        m[1][2] = 1.0;
        m[2][1] = 1.0;
        m[3][0] = -1.0;
        Self {
            kind: FlipKind::QubitSigmaYY,
            flip: ComplexMatrix::from_real_rows(&m).expect("square"),
            phase: vec![C64::new(1.0, 0.0); 4],
        }
    }

    pub fn for_system(kind: SystemKind) -> Self {
        match kind {
            SystemKind::Fermionic => Self::fermionic(),
            SystemKind::Qubit => Self::qubit(),
        }
    }

    pub fn kind(&self) -> FlipKind {
        self.kind
    }

    /// The real involution `M`.
    pub fn flip_matrix(&self) -> &ComplexMatrix {
        &self.flip
    }

    /// Diagonal of `P`.
    pub fn phase_fix(&self) -> &[C64] {
        &self.phase
    }

    pub fn dim(&self) -> usize {
        self.flip.dim()
    }

    /// Amplitudes re-expressed in the phase-fixed basis: `c' = P^dagger c`.
    fn to_phased(&self, amps: &[C64]) -> Vec<C64> {
        amps.iter().zip(&self.phase).map(|(a, p)| a * p.conj()).collect()
    }
}

/// `rho_tilde` for the given convention, in the storage basis.
pub fn tilde(rho: &ComplexMatrix, conv: &SpinFlipConvention) -> Result<ComplexMatrix> {
    let n = conv.dim();
    if rho.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho.dim(),
        });
    }
    let p = &conv.phase;
    // rho' = P^dagger rho P, conjugated.
    let mut phased_conj = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            phased_conj[(i, j)] = (p[i].conj() * rho[(i, j)] * p[j]).conj();
        }
    }
    let flipped = &(&conv.flip * &phased_conj) * &conv.flip;
    // Back to the storage basis: P flipped P^dagger.
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = p[i] * flipped[(i, j)] * p[j].conj();
        }
    }
    Ok(out)
}

/// Fermionic or qubit concurrence, selected by the state's system.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    let conv = SpinFlipConvention::for_system(rho.system().kind());
    concurrence_with(rho.matrix(), &conv)
}

/// Concurrence of a raw matrix under an explicit convention.
pub fn concurrence_with(rho: &ComplexMatrix, conv: &SpinFlipConvention) -> Result<f64> {
    let rt = tilde(rho, conv)?;
    let lambda = numerics::product_spectrum_sqrt(rho, &rt)?;
    let value = lambda[0] - lambda[1..].iter().sum::<f64>();
    if value > 1.0 + CONCURRENCE_SLACK {
        return Err(Error::ConcurrenceOutOfRange(value));
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Rank-one shortcut `|<psi| flip |psi>|` for pure states.
pub fn pure_concurrence(psi: &StateVector) -> f64 {
    let conv = SpinFlipConvention::for_system(psi.system().kind());
    let c = conv.to_phased(psi.amplitudes());
    let n = c.len();
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let m = conv.flip[(i, j)];
            if m != C64::new(0.0, 0.0) {
                s += c[i] * m * c[j];
            }
        }
    }
    s.norm()
}

/// Sum of the moduli of all off-diagonal entries.
pub fn coherence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let n = m.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm();
            }
        }
    }
    s
}

/// `1 - Tr rho^2`.
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    let purity: f64 = rho.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum();
    1.0 - purity
}
