//! Level systems and initial states.
//!
//! Two systems are provided: a pair of identical fermions with a
//! four-dimensional single-particle space (six antisymmetric states
//! `|j,m>`), and a pair of distinguishable qubits in the computational
//! basis. In both, the pointer observable is the total `J_z` and the free
//! Hamiltonian is `omega0 * J_z`.
//!
//! States are stored in the plain angular-momentum basis. The phase
//! convention needed by the fermionic concurrence lives in
//! [`crate::measures`].

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{self, ComplexMatrix, HERMITIAN_TOL, PSD_TOL};

/// Normalization tolerance for state vectors.
pub const NORM_TOL: f64 = 1e-12;

const TRACE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    #[serde(rename = "fermion")]
    Fermionic,
    #[serde(rename = "qubit")]
    Qubit,
}

impl SystemKind {
    pub fn dim(self) -> usize {
        match self {
            SystemKind::Fermionic => 6,
            SystemKind::Qubit => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SystemKind::Fermionic => "fermion",
            SystemKind::Qubit => "qubit",
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fermion" | "fermions" | "fermionic" => Ok(SystemKind::Fermionic),
            "qubit" | "qubits" => Ok(SystemKind::Qubit),
            other => Err(Error::InvalidParameter(format!(
                "unknown system '{other}' (expected fermion or qubit)"
            ))),
        }
    }
}

const FERMION_LABELS: [&str; 6] = ["|2,2>", "|2,1>", "|2,0>", "|2,-1>", "|2,-2>", "|0,0>"];
const FERMION_POINTER: [f64; 6] = [2.0, 1.0, 0.0, -1.0, -2.0, 0.0];
const QUBIT_LABELS: [&str; 4] = ["|00>", "|01>", "|10>", "|11>"];
const QUBIT_POINTER: [f64; 4] = [1.0, 0.0, 0.0, -1.0];

/// A finite basis with pointer eigenvalues `L_n` and energies
/// `E_n = omega0 * L_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSystem {
    kind: SystemKind,
    omega0: f64,
    labels: &'static [&'static str],
    pointer: Vec<f64>,
    energies: Vec<f64>,
}

impl LevelSystem {
    pub fn new(kind: SystemKind, omega0: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega0 must be finite and >= 0, got {omega0}"
            )));
        }
        let (labels, pointer): (&'static [&'static str], &[f64]) = match kind {
            SystemKind::Fermionic => (&FERMION_LABELS, &FERMION_POINTER),
            SystemKind::Qubit => (&QUBIT_LABELS, &QUBIT_POINTER),
        };
        Ok(Self {
            kind,
            omega0,
            labels,
            pointer: pointer.to_vec(),
            energies: pointer.iter().map(|l| omega0 * l).collect(),
        })
    }

    pub fn fermionic() -> Self {
        Self::new(SystemKind::Fermionic, 0.0).expect("zero splitting is valid")
    }

    pub fn qubit() -> Self {
        Self::new(SystemKind::Qubit, 0.0).expect("zero splitting is valid")
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.pointer.len()
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn labels(&self) -> &[&'static str] {
        self.labels
    }

    /// Pointer (`J_z`) eigenvalues `L_n`.
    pub fn pointer(&self) -> &[f64] {
        &self.pointer
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// The same system with a different level splitting.
    pub fn with_omega0(&self, omega0: f64) -> Result<Self> {
        Self::new(self.kind, omega0)
    }
}

/// Normalized pure state over a [`LevelSystem`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    system: LevelSystem,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Wrap amplitudes that are already normalized within [`NORM_TOL`].
    pub fn new(system: LevelSystem, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != system.dim() {
            return Err(Error::DimensionMismatch {
                expected: system.dim(),
                found: amplitudes.len(),
            });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { system, amplitudes })
    }

    /// Rescale arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(system: LevelSystem, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != system.dim() {
            return Err(Error::DimensionMismatch {
                expected: system.dim(),
                found: amplitudes.len(),
            });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !(norm_sqr.is_finite() && norm_sqr > 0.0) {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let inv = 1.0 / norm_sqr.sqrt();
        Ok(Self {
            system,
            amplitudes: amplitudes.into_iter().map(|a| a * inv).collect(),
        })
    }

    /// Basis state `|n>` with 1-based index.
    pub fn basis(system: LevelSystem, n: usize) -> Result<Self> {
        if n == 0 || n > system.dim() {
            return Err(Error::InvalidParameter(format!(
                "basis index {n} out of range 1..={}",
                system.dim()
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); system.dim()];
        amps[n - 1] = C64::new(1.0, 0.0);
        Ok(Self {
            system,
            amplitudes: amps,
        })
    }

    pub fn system(&self) -> &LevelSystem {
        &self.system
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            system: self.system.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn with_system(&self, system: LevelSystem) -> Result<Self> {
        Self::new(system, self.amplitudes.clone())
    }
}

/// Slater determinant `(|ij> - |ji>)/sqrt(2)` of single-particle states
/// `i, j` in `1..=4`, expressed in the six-state antisymmetric basis.
pub fn slater_state(system: &LevelSystem, i: usize, j: usize) -> Result<StateVector> {
    if system.kind() != SystemKind::Fermionic {
        return Err(Error::InvalidParameter(
            "Slater determinants require the fermionic system".into(),
        ));
    }
    if !(1..=4).contains(&i) || !(1..=4).contains(&j) {
        return Err(Error::InvalidParameter(format!(
            "single-particle indices must lie in 1..=4, got ({i}, {j})"
        )));
    }
    if i == j {
        return Err(Error::InvalidParameter(format!(
            "Slater determinant with i = j = {i} vanishes"
        )));
    }
    let (lo, hi, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = [0.0f64; 6];
    match (lo, hi) {
        (1, 2) => amps[0] = 1.0,
        (1, 3) => amps[1] = 1.0,
        (2, 4) => amps[3] = 1.0,
        (3, 4) => amps[4] = 1.0,
        (1, 4) => {
            amps[2] = h;
            amps[5] = h;
        }
        (2, 3) => {
            amps[2] = -h;
            amps[5] = h;
        }
        _ => unreachable!(),
    }
    Ok(StateVector {
        system: system.clone(),
        amplitudes: amps.iter().map(|&a| C64::new(sign * a, 0.0)).collect(),
    })
}

/// The named initial states used throughout the scenarios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedState {
    /// `alpha |2,0> + beta |0,0>` (fermionic decoherence-free family).
    DfsFermion(C64),
    /// `alpha |01> + beta |10>` (qubit decoherence-free family).
    DfsQubit(C64),
    /// `(|01> + |10>)/sqrt(2)`.
    BellPhi,
    /// `(|2,1> + |2,-1>)/sqrt(2)`.
    F24,
    /// `(|2,2> + |2,-2>)/sqrt(2)`.
    F15,
    /// `(|00> + |11>)/sqrt(2)`.
    Q14,
    /// `(|2,2> + |2,1> + |2,0> + |2,-1>)/2`.
    F1234,
    /// Uniform superposition of the four computational states.
    Q1234,
    /// `sqrt(0.2)(|1> + |2> + |3>) + sqrt(0.4)|4>`.
    Q123_4,
    /// Fermionic basis state `|psi_n>` (1-based).
    FermionBasis(usize),
    /// Qubit basis state `|n>` (1-based).
    QubitBasis(usize),
    /// Slater determinant of single-particle states `(i, j)`.
    Slater(usize, usize),
}

impl NamedState {
    /// Parse a state name. Names of the decoherence-free families accept
    /// `alpha` either inline, as in `dfs_fermion(0.3)`, or via `alpha`.
    pub fn parse(name: &str, alpha: Option<C64>) -> Result<Self> {
        let name = name.trim();
        let (base, inline) = match name.find('(') {
            Some(open) if name.ends_with(')') => {
                let arg = &name[open + 1..name.len() - 1];
                let value: f64 = arg
                    .trim()
                    .parse()
                    .map_err(|_| Error::UnknownState(name.to_string()))?;
                (&name[..open], Some(C64::new(value, 0.0)))
            }
            Some(_) => return Err(Error::UnknownState(name.to_string())),
            None => (name, None),
        };
        let alpha_value = || -> Result<C64> {
            inline.or(alpha).ok_or_else(|| {
                Error::InvalidParameter(format!("state '{base}' requires a value for alpha"))
            })
        };
        let state = match base {
            "dfs_fermion" => NamedState::DfsFermion(alpha_value()?),
            "dfs_qubit" => NamedState::DfsQubit(alpha_value()?),
            _ if inline.is_some() => return Err(Error::UnknownState(name.to_string())),
            "bell_phi" => NamedState::BellPhi,
            "f24" => NamedState::F24,
            "f15" => NamedState::F15,
            "q14" => NamedState::Q14,
            "f1234" => NamedState::F1234,
            "q1234" => NamedState::Q1234,
            "q123_4" => NamedState::Q123_4,
            other => parse_indexed(other).ok_or_else(|| Error::UnknownState(other.to_string()))?,
        };
        Ok(state)
    }

    pub fn system_kind(&self) -> SystemKind {
        match self {
            NamedState::DfsFermion(_)
            | NamedState::F24
            | NamedState::F15
            | NamedState::F1234
            | NamedState::FermionBasis(_)
            | NamedState::Slater(..) => SystemKind::Fermionic,
            NamedState::DfsQubit(_)
            | NamedState::BellPhi
            | NamedState::Q14
            | NamedState::Q1234
            | NamedState::Q123_4
            | NamedState::QubitBasis(_) => SystemKind::Qubit,
        }
    }

    /// Build the state on a system with splitting `omega0`.
    pub fn build(&self, omega0: f64) -> Result<StateVector> {
        let system = LevelSystem::new(self.system_kind(), omega0)?;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let real = |v: &[f64]| v.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>();
        let amps = match *self {
            NamedState::DfsFermion(alpha) => {
                let beta = dfs_partner(alpha)?;
                let mut a = vec![C64::new(0.0, 0.0); 6];
                a[2] = alpha;
                a[5] = C64::new(beta, 0.0);
                a
            }
            NamedState::DfsQubit(alpha) => {
                let beta = dfs_partner(alpha)?;
                let mut a = vec![C64::new(0.0, 0.0); 4];
                a[1] = alpha;
                a[2] = C64::new(beta, 0.0);
                a
            }
            NamedState::BellPhi => real(&[0.0, h, h, 0.0]),
            NamedState::F24 => real(&[0.0, h, 0.0, h, 0.0, 0.0]),
            NamedState::F15 => real(&[h, 0.0, 0.0, 0.0, h, 0.0]),
            NamedState::Q14 => real(&[h, 0.0, 0.0, h]),
            NamedState::F1234 => real(&[0.5, 0.5, 0.5, 0.5, 0.0, 0.0]),
            NamedState::Q1234 => real(&[0.5, 0.5, 0.5, 0.5]),
            NamedState::Q123_4 => {
                let a = 0.2f64.sqrt();
                real(&[a, a, a, 0.4f64.sqrt()])
            }
            NamedState::FermionBasis(n) | NamedState::QubitBasis(n) => {
                return StateVector::basis(system, n);
            }
            NamedState::Slater(i, j) => return slater_state(&system, i, j),
        };
        StateVector::new(system, amps)
    }
}

fn parse_indexed(name: &str) -> Option<NamedState> {
    if let Some(rest) = name.strip_prefix("psi") {
        let n: usize = rest.parse().ok()?;
        return (1..=6).contains(&n).then_some(NamedState::FermionBasis(n));
    }
    if let Some(rest) = name.strip_prefix("ket") {
        let n: usize = rest.parse().ok()?;
        return (1..=4).contains(&n).then_some(NamedState::QubitBasis(n));
    }
    if let Some(rest) = name.strip_prefix("slater") {
        let mut digits = rest.chars().map(|c| c.to_digit(10).map(|d| d as usize));
        let (i, j) = (digits.next()??, digits.next()??);
        let ok = digits.next().is_none() && i != j && (1..=4).contains(&i) && (1..=4).contains(&j);
        return ok.then_some(NamedState::Slater(i, j));
    }
    None
}

fn dfs_partner(alpha: C64) -> Result<f64> {
    let a2 = alpha.norm_sqr();
    if !a2.is_finite() || a2 > 1.0 + NORM_TOL {
        return Err(Error::InvalidParameter(format!(
            "|alpha| must not exceed 1, got {}",
            alpha.norm()
        )));
    }
    Ok((1.0 - a2).max(0.0).sqrt())
}

/// Convenience wrapper around [`NamedState::parse`] and
/// [`NamedState::build`] with `omega0 = 0`.
pub fn named_state(name: &str, alpha: Option<C64>) -> Result<StateVector> {
    NamedState::parse(name, alpha)?.build(0.0)
}

/// Hermitian, unit-trace, positive-semidefinite matrix over a system.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    system: LevelSystem,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate and wrap a matrix.
    pub fn new(system: LevelSystem, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != system.dim() {
            return Err(Error::DimensionMismatch {
                expected: system.dim(),
                found: matrix.dim(),
            });
        }
        let dev = matrix.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                deviation: dev,
                tolerance: HERMITIAN_TOL,
            });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::BadTrace { trace });
        }
        let min = numerics::hermitian_eigenvalues(&matrix)?
            .last()
            .copied()
            .unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
        Ok(Self { system, matrix })
    }

    /// `|psi><psi|`.
    pub fn pure(psi: &StateVector) -> Self {
        Self {
            system: psi.system().clone(),
            matrix: ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()),
        }
    }

    /// `I / d`.
    pub fn maximally_mixed(system: LevelSystem) -> Self {
        let d = system.dim();
        Self {
            matrix: ComplexMatrix::identity(d).scale(C64::new(1.0 / d as f64, 0.0)),
            system,
        }
    }

    pub fn system(&self) -> &LevelSystem {
        &self.system
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// Rank-one projector for a pure state.
pub fn pure_density(psi: &StateVector) -> DensityMatrix {
    DensityMatrix::pure(psi)
}
