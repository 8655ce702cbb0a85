//! Regime classification, time series and entanglement death/birth
//! detection.
//!
//! Times reported by this module ([`TimeSeries::times`], [`Event::time`])
//! are dimensionless, `omega_c * t`. Horizons passed in (`t_max`) are
//! physical times.

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{self, BathParams};
use crate::error::{Error, Result};
use crate::hilbert::{pure_density, DensityMatrix, LevelSystem, StateVector};
use crate::measures;
use crate::numerics::ComplexMatrix;

/// Concurrence at or below this value counts as zero.
pub const DEAD_THRESHOLD: f64 = 1e-12;

/// Minimum number of scan points used by [`detect_events`].
pub const MIN_SCAN_POINTS: usize = 2000;

/// Overlap tolerance separating the three regimes.
pub const OVERLAP_TOL: f64 = 1e-12;

/// Event times are refined to this fraction of the horizon.
const REFINE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Entirely inside the decoherence-free subspace.
    Invariant,
    /// No component in the decoherence-free subspace.
    Orthogonal,
    /// Some, but not all, weight in the decoherence-free subspace.
    Partial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// Concurrence drops to zero.
    Death,
    /// Concurrence rises from zero.
    Birth,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub kind: EventKind,
    /// `omega_c * t` of the crossing.
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub dfs_overlap: f64,
    pub regime: Regime,
    /// Concurrence is zero at `t = 0`, so the first event is a birth.
    pub initially_unentangled: bool,
    pub events: Vec<Event>,
}

/// Sampled dynamics of one initial state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub concurrence: Vec<f64>,
    pub coherence: Vec<f64>,
    pub linear_entropy: Vec<f64>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Projector onto the span of the basis states with zero pointer
/// eigenvalue.
pub fn dfs_projector(system: &LevelSystem) -> ComplexMatrix {
    let diag: Vec<f64> = system
        .pointer()
        .iter()
        .map(|&l| if l == 0.0 { 1.0 } else { 0.0 })
        .collect();
    ComplexMatrix::from_real_diagonal(&diag)
}

/// Weight of `psi` inside the decoherence-free subspace and the resulting
/// regime. No events are computed.
pub fn classify(psi: &StateVector) -> RegimeReport {
    let dfs_overlap: f64 = psi
        .system()
        .pointer()
        .iter()
        .zip(psi.amplitudes())
        .filter(|(l, _)| **l == 0.0)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    let regime = if dfs_overlap >= 1.0 - OVERLAP_TOL {
        Regime::Invariant
    } else if dfs_overlap <= OVERLAP_TOL {
        Regime::Orthogonal
    } else {
        Regime::Partial
    };
    RegimeReport {
        dfs_overlap,
        regime,
        initially_unentangled: false,
        events: Vec::new(),
    }
}

/// Classification plus detected events over `[0, t_max]`.
pub fn analyze(psi: &StateVector, params: &BathParams, t_max: f64) -> Result<RegimeReport> {
    analyze_on_grid(psi, params, t_max, MIN_SCAN_POINTS)
}

pub fn analyze_on_grid(
    psi: &StateVector,
    params: &BathParams,
    t_max: f64,
    scan_points: usize,
) -> Result<RegimeReport> {
    let mut report = classify(psi);
    let rho0 = pure_density(psi);
    report.initially_unentangled = measures::concurrence(&rho0)? <= DEAD_THRESHOLD;
    report.events = detect_events_on_grid(psi, params, t_max, scan_points)?;
    Ok(report)
}

fn sample_times(t_max: f64, n_steps: usize) -> Vec<f64> {
    let h = t_max / (n_steps - 1) as f64;
    (0..n_steps)
        .map(|k| if k + 1 == n_steps { t_max } else { k as f64 * h })
        .collect()
}

fn check_horizon(t_max: f64) -> Result<()> {
    if t_max.is_finite() && t_max > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "t_max must be finite and > 0, got {t_max}"
        )))
    }
}

/// Concurrence, coherence and linear entropy at `n_steps` equally spaced
/// times on `[0, t_max]`. Rows are evaluated in parallel; the output does
/// not depend on scheduling.
pub fn time_series(psi0: &StateVector, params: &BathParams, t_max: f64, n_steps: usize) -> Result<TimeSeries> {
    check_horizon(t_max)?;
    if n_steps < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 steps, got {n_steps}"
        )));
    }
    let rho0 = pure_density(psi0);
    let times = sample_times(t_max, n_steps);
    let rows: Vec<(f64, f64, f64)> = times
        .par_iter()
        .map(|&t| {
            let rho = channel::evolve(&rho0, params, t)?;
            Ok((
                measures::concurrence(&rho)?,
                measures::coherence(&rho),
                measures::linear_entropy(&rho),
            ))
        })
        .collect::<Result<_>>()?;
    let wc = params.omega_c();
    let mut series = TimeSeries {
        times: times.iter().map(|t| wc * t).collect(),
        concurrence: Vec::with_capacity(n_steps),
        coherence: Vec::with_capacity(n_steps),
        linear_entropy: Vec::with_capacity(n_steps),
    };
    for (c, coh, s) in rows {
        series.concurrence.push(c);
        series.coherence.push(coh);
        series.linear_entropy.push(s);
    }
    Ok(series)
}

struct Probe<'a> {
    rho0: &'a DensityMatrix,
    params: &'a BathParams,
}

impl Probe<'_> {
    fn concurrence(&self, t: f64) -> Result<f64> {
        measures::concurrence(&channel::evolve(self.rho0, self.params, t)?)
    }

    fn is_dead(&self, t: f64) -> Result<bool> {
        Ok(self.concurrence(t)? <= DEAD_THRESHOLD)
    }

    /// Crossing inside `[lo, hi]` where `is_dead(lo) != is_dead(hi)`.
    fn bisect(&self, mut lo: f64, mut hi: f64, dead_at_lo: bool, tol: f64) -> Result<f64> {
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if self.is_dead(mid)? == dead_at_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Golden-section search for a point in `[lo, hi]` where the
    /// concurrence is dead. Returns `None` if the minimum stays alive.
    fn find_dead_point(&self, mut lo: f64, mut hi: f64, tol: f64) -> Result<Option<f64>> {
        const INV_PHI: f64 = 0.618_033_988_749_894_8;
        let mut x1 = hi - INV_PHI * (hi - lo);
        let mut x2 = lo + INV_PHI * (hi - lo);
        let mut f1 = self.concurrence(x1)?;
        let mut f2 = self.concurrence(x2)?;
        loop {
            if f1 <= DEAD_THRESHOLD {
                return Ok(Some(x1));
            }
            if f2 <= DEAD_THRESHOLD {
                return Ok(Some(x2));
            }
            if hi - lo <= tol {
                return Ok(None);
            }
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - INV_PHI * (hi - lo);
                f1 = self.concurrence(x1)?;
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + INV_PHI * (hi - lo);
                f2 = self.concurrence(x2)?;
            }
        }
    }
}

/// Entanglement death and birth times on `[0, t_max]`.
pub fn detect_events(psi0: &StateVector, params: &BathParams, t_max: f64) -> Result<Vec<Event>> {
    detect_events_on_grid(psi0, params, t_max, MIN_SCAN_POINTS)
}

/// As [`detect_events`] with an explicit scan grid (at least
/// [`MIN_SCAN_POINTS`] points are always used).
///
/// Every change of `C <= DEAD_THRESHOLD` between neighbouring grid points is
/// bisected. Because the concurrence can touch zero at an isolated instant
/// (a double root) between two live grid points, every interior grid-local
/// minimum is also searched; if the search finds a dead point, the death
/// and the birth on either side of it are bisected.
pub fn detect_events_on_grid(
    psi0: &StateVector,
    params: &BathParams,
    t_max: f64,
    scan_points: usize,
) -> Result<Vec<Event>> {
    check_horizon(t_max)?;
    let n = scan_points.max(MIN_SCAN_POINTS);
    let rho0 = pure_density(psi0);
    let probe = Probe {
        rho0: &rho0,
        params,
    };
    let times = sample_times(t_max, n);
    let values: Vec<f64> = times
        .par_iter()
        .map(|&t| probe.concurrence(t))
        .collect::<Result<_>>()?;
    let dead: Vec<bool> = values.iter().map(|&c| c <= DEAD_THRESHOLD).collect();
    let tol = REFINE_TOL * t_max;

    let mut events = Vec::new();
    for k in 0..n - 1 {
        let (a, b) = (times[k], times[k + 1]);
        if dead[k] != dead[k + 1] {
            let time = probe.bisect(a, b, dead[k], tol)?;
            let kind = if dead[k] { EventKind::Birth } else { EventKind::Death };
            events.push((kind, time));
        }
    }
    for k in 1..n - 1 {
        let (prev, here, next) = (values[k - 1], values[k], values[k + 1]);
        let local_min = here <= prev && here <= next && (here < prev || here < next);
        if dead[k - 1] || dead[k] || dead[k + 1] || !local_min {
            continue;
        }
        let (a, b) = (times[k - 1], times[k + 1]);
        if let Some(zero) = probe.find_dead_point(a, b, tol)? {
            events.push((EventKind::Death, probe.bisect(a, zero, false, tol)?));
            events.push((EventKind::Birth, probe.bisect(zero, b, true, tol)?));
        }
    }
    events.sort_by(|x, y| x.1.total_cmp(&y.1));

    let wc = params.omega_c();
    Ok(events
        .into_iter()
        .map(|(kind, t)| Event { kind, time: wc * t })
        .collect())
}

/// Long-time limit of the linear entropy at zero temperature: only
/// coherences between states with equal pointer eigenvalue survive.
pub fn saturation_entropy(psi0: &StateVector) -> f64 {
    let l = psi0.system().pointer();
    let a = psi0.amplitudes();
    let mut surviving = 0.0;
    for m in 0..a.len() {
        for n in 0..a.len() {
            if l[m] == l[n] {
                surviving += a[m].norm_sqr() * a[n].norm_sqr();
            }
        }
    }
    1.0 - surviving
}
