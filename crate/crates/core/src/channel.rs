//! The collective pure-dephasing channel.
//!
//! A system coupled through its pointer observable to a common bosonic
//! bath keeps its populations, while each coherence `rho_mn` is multiplied
//! by
//!
//! ```text
//! F_mn(t) = exp(i (E_n - E_m) t) * exp(-(L_m - L_n)^2 Gamma(t)) * exp(-i (L_m^2 - L_n^2) r(t))
//! ```
//!
//! with `r = Delta - Theta`. The bath enters only through `Gamma`, `Delta`
//! and `Theta`, evaluated here for the spectral density
//! `J(w) = 4 J0 w exp(-w / wc)` in one of four ways (see [`BathMode`]).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, LevelSystem};
use crate::numerics::ComplexMatrix;
use crate::quadrature::{self, Options};

/// Upper integration limit in units of the cutoff frequency.
pub const QUADRATURE_CUTOFF_MULTIPLE: f64 = 50.0;

/// `omega_c * beta` below which the low-temperature closed form is refused.
pub const LOW_T_MIN_RATIO: f64 = 10.0;

/// `omega_c * beta` below which the low-temperature closed form warns.
pub const LOW_T_WARN_RATIO: f64 = 50.0;

/// How the bath functions are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BathMode {
    /// Closed form at zero temperature.
    ClosedFormZeroT,
    /// Closed form valid for `omega_c * beta >> 1`.
    ClosedFormLowT,
    /// Adaptive quadrature of the continuum integrals.
    Quadrature,
    /// Finite sum over `n_modes` equally spaced bath oscillators.
    DiscreteModes { n_modes: usize, omega_max: f64 },
}

impl BathMode {
    pub fn name(&self) -> &'static str {
        match self {
            BathMode::ClosedFormZeroT => "zero-t",
            BathMode::ClosedFormLowT => "low-t",
            BathMode::Quadrature => "quadrature",
            BathMode::DiscreteModes { .. } => "discrete",
        }
    }

    /// Discrete mode with the default grid: 4000 modes up to `40 omega_c`.
    pub fn discrete_default(omega_c: f64) -> Self {
        BathMode::DiscreteModes {
            n_modes: 4000,
            omega_max: 40.0 * omega_c,
        }
    }
}

impl fmt::Display for BathMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bath parameters. `beta = f64::INFINITY` encodes zero temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    j0: f64,
    omega_c: f64,
    beta: f64,
    mode: BathMode,
}

impl Default for BathParams {
    fn default() -> Self {
        Self {
            j0: 1.0,
            omega_c: 1.0,
            beta: f64::INFINITY,
            mode: BathMode::ClosedFormZeroT,
        }
    }
}

impl BathParams {
    pub fn new(j0: f64, omega_c: f64, beta: f64, mode: BathMode) -> Result<Self> {
        if !(j0.is_finite() && j0 > 0.0) {
            return Err(Error::InvalidParameter(format!("j0 must be > 0, got {j0}")));
        }
        if !(omega_c.is_finite() && omega_c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega_c must be > 0, got {omega_c}"
            )));
        }
        if beta.is_nan() || beta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "beta must be > 0 or infinite, got {beta}"
            )));
        }
        match mode {
            BathMode::ClosedFormZeroT if beta.is_finite() => {
                return Err(Error::InvalidParameter(
                    "the zero-temperature closed form needs beta = infinity".into(),
                ));
            }
            BathMode::ClosedFormLowT if beta.is_finite() => {
                let ratio = omega_c * beta;
                if ratio < LOW_T_MIN_RATIO {
                    return Err(Error::InvalidParameter(format!(
                        "low-temperature closed form needs omega_c * beta >= {LOW_T_MIN_RATIO}, got {ratio}"
                    )));
                }
                if ratio < LOW_T_WARN_RATIO {
                    log::warn!(
                        "omega_c * beta = {ratio} is small; the low-temperature closed form may be inaccurate"
                    );
                }
            }
            BathMode::DiscreteModes { n_modes, omega_max } => {
                if n_modes == 0 || !(omega_max.is_finite() && omega_max > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "discrete bath needs n_modes >= 1 and omega_max > 0, got {n_modes} and {omega_max}"
                    )));
                }
            }
            _ => {}
        }
        Ok(Self {
            j0,
            omega_c,
            beta,
            mode,
        })
    }

    /// Build from the temperature in units of `T_c = omega_c`; a ratio of
    /// zero means zero temperature.
    pub fn from_temperature_ratio(j0: f64, omega_c: f64, ratio: f64, mode: BathMode) -> Result<Self> {
        if !(ratio.is_finite() && ratio >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "temperature ratio must be finite and >= 0, got {ratio}"
            )));
        }
        let beta = if ratio == 0.0 {
            f64::INFINITY
        } else {
            1.0 / (ratio * omega_c)
        };
        Self::new(j0, omega_c, beta, mode)
    }

    pub fn j0(&self) -> f64 {
        self.j0
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mode(&self) -> BathMode {
        self.mode
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.beta.is_infinite()
    }

    pub fn temperature(&self) -> f64 {
        if self.is_zero_temperature() {
            0.0
        } else {
            1.0 / self.beta
        }
    }

    /// `T / T_c` with `T_c = omega_c`.
    pub fn temperature_ratio(&self) -> f64 {
        self.temperature() / self.omega_c
    }

    pub fn with_mode(&self, mode: BathMode) -> Result<Self> {
        Self::new(self.j0, self.omega_c, self.beta, mode)
    }
}

/// `Gamma(t)`, `Delta(t)`, `Theta(t)` at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BathFunctions {
    pub gamma: f64,
    pub delta: f64,
    pub theta: f64,
}

impl BathFunctions {
    pub const ZERO: BathFunctions = BathFunctions {
        gamma: 0.0,
        delta: 0.0,
        theta: 0.0,
    };

    /// Phase function `r = Delta - Theta`.
    pub fn r(&self) -> f64 {
        self.delta - self.theta
    }
}

/// `ln(sinh(x) / x)` for `x >= 0`, accurate at both ends.
pub(crate) fn ln_sinhc(x: f64) -> f64 {
    if x < 0.1 {
        // sinh(x)/x - 1 = x^2/6 + x^4/120 + x^6/5040 + x^8/362880 + ...
        let x2 = x * x;
        let excess = x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0 * (1.0 + x2 / 72.0)));
        excess.ln_1p()
    } else if x > 20.0 {
        x - (2.0 * x).ln() + (-(-2.0 * x).exp()).ln_1p()
    } else {
        (x.sinh() / x).ln()
    }
}

fn coth_half(beta: f64, omega: f64) -> f64 {
    if beta.is_infinite() {
        1.0
    } else {
        1.0 / (0.5 * beta * omega).tanh()
    }
}

/// `exp(-w/wc) sin^2(w t/2) / w * coth(beta w / 2)`, continuous at `w = 0`.
fn gamma_integrand(omega: f64, t: f64, omega_c: f64, beta: f64) -> f64 {
    if omega == 0.0 {
        return if beta.is_infinite() { 0.0 } else { t * t / (2.0 * beta) };
    }
    let s = (0.5 * omega * t).sin();
    (-omega / omega_c).exp() * s * s / omega * coth_half(beta, omega)
}

/// `exp(-w/wc) sin(w t) / w`, continuous at `w = 0`.
fn delta_integrand(omega: f64, t: f64, omega_c: f64) -> f64 {
    if omega == 0.0 {
        return t;
    }
    (-omega / omega_c).exp() * (omega * t).sin() / omega
}

/// Evaluate the bath functions at time `t >= 0`.
pub fn bath_functions(params: &BathParams, t: f64) -> Result<BathFunctions> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(BathFunctions::ZERO);
    }
    let BathParams {
        j0,
        omega_c,
        beta,
        mode,
    } = *params;
    let wt = omega_c * t;
    let out = match mode {
        BathMode::ClosedFormZeroT | BathMode::ClosedFormLowT => {
            let mut gamma = j0 / 8.0 * (wt * wt).ln_1p();
            if mode == BathMode::ClosedFormLowT && beta.is_finite() {
                gamma += j0 / 4.0 * ln_sinhc(PI * t / beta);
            }
            BathFunctions {
                gamma,
                delta: wt.atan(),
                theta: wt,
            }
        }
        BathMode::Quadrature => {
            let upper = QUADRATURE_CUTOFF_MULTIPLE * omega_c;
            let panels = ((8.0 * upper * t) / (2.0 * PI)).ceil() as usize;
            let opts = Options {
                initial_panels: panels.max(64),
                ..Options::default()
            };
            let g = quadrature::integrate(|w| gamma_integrand(w, t, omega_c, beta), 0.0, upper, opts);
            let d = quadrature::integrate(|w| delta_integrand(w, t, omega_c), 0.0, upper, opts);
            BathFunctions {
                gamma: 0.5 * j0 * g.value,
                delta: d.value,
                theta: wt,
            }
        }
        BathMode::DiscreteModes { n_modes, omega_max } => {
            discrete_sums(j0, omega_c, beta, n_modes, omega_max, t)
        }
    };
    Ok(out)
}

// Mode sums with |g_k|^2 = J(w_k) dw at midpoints w_k = (k - 1/2) dw. The
// raw sums converge to 16x the continuum Gamma and 4 J0 x the continuum
// Delta and Theta; they are rescaled onto the continuum normalization.
fn discrete_sums(j0: f64, omega_c: f64, beta: f64, n: usize, omega_max: f64, t: f64) -> BathFunctions {
    let dw = omega_max / n as f64;
    let (mut gamma, mut delta, mut theta) = (0.0, 0.0, 0.0);
    for k in 0..n {
        let w = (k as f64 + 0.5) * dw;
        let g2 = 4.0 * j0 * w * (-w / omega_c).exp() * dw;
        let weight = g2 / (w * w);
        let s = (0.5 * w * t).sin();
        gamma += 2.0 * weight * s * s * coth_half(beta, w);
        delta += weight * (w * t).sin();
        theta += weight * w * t;
    }
    BathFunctions {
        gamma: gamma / 16.0,
        delta: delta / (4.0 * j0),
        theta: theta / (4.0 * j0),
    }
}

/// The matrix `F(t)` that multiplies `rho(0)` entrywise.
#[derive(Debug, Clone)]
pub struct DephasingFactors {
    pub t: f64,
    pub bath: BathFunctions,
    pub factors: ComplexMatrix,
}

/// Build `F(t)` from precomputed bath functions.
pub fn factors_from_bath(system: &LevelSystem, bath: BathFunctions, t: f64) -> DephasingFactors {
    let l = system.pointer();
    let e = system.energies();
    let n = system.dim();
    let r = bath.r();
    let mut f = ComplexMatrix::identity(n);
    for m in 0..n {
        for k in m + 1..n {
            let dl = l[m] - l[k];
            let modulus = (-dl * dl * bath.gamma).exp();
            let phase = (e[k] - e[m]) * t - (l[m] * l[m] - l[k] * l[k]) * r;
            let z = C64::from_polar(modulus, phase);
            f[(m, k)] = z;
            f[(k, m)] = z.conj();
        }
    }
    DephasingFactors {
        t,
        bath,
        factors: f,
    }
}

/// `F(t)` for a system under the given bath.
pub fn dephasing_factors(system: &LevelSystem, params: &BathParams, t: f64) -> Result<DephasingFactors> {
    let bath = bath_functions(params, t)?;
    Ok(factors_from_bath(system, bath, t))
}

/// Exact reduced state at time `t`: `rho_mn(t) = rho_mn(0) F_mn(t)`.
pub fn evolve(rho0: &DensityMatrix, params: &BathParams, t: f64) -> Result<DensityMatrix> {
    let f = dephasing_factors(rho0.system(), params, t)?;
    apply_factors(rho0, &f)
}

pub fn apply_factors(rho0: &DensityMatrix, f: &DephasingFactors) -> Result<DensityMatrix> {
    let m = rho0.matrix().hadamard(&f.factors);
    DensityMatrix::new(rho0.system().clone(), m)
}

impl FromStr for BathMode {
    type Err = Error;

    /// Parses `zero-t`, `low-t`, `quadrature` or `discrete` (the latter with
    /// the default grid for `omega_c = 1`).
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "zero-t" => Ok(BathMode::ClosedFormZeroT),
            "low-t" => Ok(BathMode::ClosedFormLowT),
            "quadrature" => Ok(BathMode::Quadrature),
            "discrete" => Ok(BathMode::discrete_default(1.0)),
            other => Err(Error::InvalidParameter(format!(
                "unknown mode '{other}' (expected zero-t, low-t, quadrature or discrete)"
            ))),
        }
    }
}
