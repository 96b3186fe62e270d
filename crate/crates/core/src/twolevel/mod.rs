//! Two-level atom driven by a classical field, in the interaction picture.
//!
//! Basis convention: `|e⟩ = (1, 0)`, `|g⟩ = (0, 1)`. The detuning is
//! `Δω = ω_A − ω`, so derivatives with respect to the atomic frequency `ω_A` equal
//! derivatives with respect to `Δω` (sign `+1`). Angular frequencies are in rad/s
//! and times in seconds.

pub mod rabi;
pub mod ramsey;

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::estimation::OutcomeDistribution;
use crate::linalg::{ComplexMatrix, ComplexVector, C64};

/// Index of `|e⟩` in the two-level basis.
pub const EXCITED: usize = 0;
/// Index of `|g⟩` in the two-level basis.
pub const GROUND: usize = 1;

pub fn excited() -> ComplexVector {
    ComplexVector::basis(2, EXCITED)
}

pub fn ground() -> ComplexVector {
    ComplexVector::basis(2, GROUND)
}

fn check_rate(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return invalid(format!("{name} must be positive and finite, got {value}"));
    }
    Ok(())
}

fn check_finite(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return invalid(format!("{name} must be finite, got {value}"));
    }
    Ok(())
}

fn check_duration(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return invalid(format!(
            "{name} must be non-negative and finite, got {value}"
        ));
    }
    Ok(())
}

/// A single square pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseParams {
    /// Rabi frequency `Ω0` (rad/s).
    pub omega0: f64,
    /// Detuning `Δω = ω_A − ω` (rad/s).
    pub delta: f64,
    /// Field phase `φ` (rad).
    pub phi: f64,
    /// Pulse duration (s).
    pub t: f64,
}

impl PulseParams {
    pub fn new(omega0: f64, delta: f64, phi: f64, t: f64) -> Result<Self> {
        check_rate("omega0", omega0)?;
        check_finite("delta", delta)?;
        check_finite("phi", phi)?;
        check_duration("t", t)?;
        Ok(Self {
            omega0,
            delta,
            phi,
            t,
        })
    }

    /// Pulse of duration `π/Ω0`.
    pub fn pi_pulse(omega0: f64, delta: f64, phi: f64) -> Result<Self> {
        check_rate("omega0", omega0)?;
        Self::new(omega0, delta, phi, PI / omega0)
    }

    /// Generalized Rabi frequency `Ω = √(Ω0² + Δω²)`.
    pub fn generalized_rabi(&self) -> f64 {
        self.omega0.hypot(self.delta)
    }

    /// `Θ = √(1 + (Δω/Ω0)²)`.
    pub fn theta(&self) -> f64 {
        theta(self.omega0, self.delta)
    }
}

pub(crate) fn theta(omega0: f64, delta: f64) -> f64 {
    (delta / omega0).hypot(1.0)
}

/// Two pulses of equal duration `τ` separated by a free evolution `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamseyParams {
    pub omega0: f64,
    pub delta: f64,
    /// Per-cavity interaction time `τ` (s).
    pub tau: f64,
    /// Free-evolution time `T` (s).
    pub big_t: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl RamseyParams {
    pub fn new(
        omega0: f64,
        delta: f64,
        tau: f64,
        big_t: f64,
        phi1: f64,
        phi2: f64,
    ) -> Result<Self> {
        check_rate("omega0", omega0)?;
        check_finite("delta", delta)?;
        check_rate("tau", tau)?;
        check_duration("big_t", big_t)?;
        check_finite("phi1", phi1)?;
        check_finite("phi2", phi2)?;
        Ok(Self {
            omega0,
            delta,
            tau,
            big_t,
            phi1,
            phi2,
        })
    }

    /// π/2 pulses (`τ = π/(2Ω0)`), `T = κτ`, `φ1 = 0`, `φ2 = phi`.
    pub fn standard(omega0: f64, delta: f64, kappa: f64, phi: f64) -> Result<Self> {
        check_rate("omega0", omega0)?;
        check_duration("kappa", kappa)?;
        let tau = PI / (2.0 * omega0);
        Self::new(omega0, delta, tau, kappa * tau, 0.0, phi)
    }

    /// `κ = T/τ`.
    pub fn kappa(&self) -> f64 {
        self.big_t / self.tau
    }

    pub fn first_pulse(&self) -> PulseParams {
        PulseParams {
            omega0: self.omega0,
            delta: self.delta,
            phi: self.phi1,
            t: self.tau,
        }
    }

    pub fn second_pulse(&self) -> PulseParams {
        PulseParams {
            omega0: self.omega0,
            delta: self.delta,
            phi: self.phi2,
            t: self.tau,
        }
    }
}

/// Interaction-picture propagator of one pulse,
/// `[[A, e^{−iφ}B], [e^{iφ}B, A*]]` with
/// `A = cos(Ωt/2) − i(Δω/Ω) sin(Ωt/2)` and `B = i(Ω0/Ω) sin(Ωt/2)`.
pub fn cavity_propagator(p: &PulseParams) -> ComplexMatrix {
    let omega = p.generalized_rabi();
    let (s, c) = (0.5 * omega * p.t).sin_cos();
    let a = C64::new(c, -p.delta / omega * s);
    let b = C64::new(0.0, p.omega0 / omega * s);
    let phase = C64::from_polar(1.0, p.phi);
    ComplexMatrix::from_rows2([[a, phase.conj() * b], [phase * b, a.conj()]])
}

/// `∂/∂Δω` of [`cavity_propagator`] at fixed `Ω0`, `φ`, `t`.
pub fn cavity_propagator_derivative(p: &PulseParams) -> ComplexMatrix {
    let omega = p.generalized_rabi();
    let (s, c) = (0.5 * omega * p.t).sin_cos();
    let (d, w0, t) = (p.delta, p.omega0, p.t);
    // dΩ/dΔ = Δ/Ω
    let da = C64::new(
        -0.5 * t * d / omega * s,
        -(w0 * w0 / omega.powi(3) * s + 0.5 * t * d * d / (omega * omega) * c),
    );
    let db = C64::new(0.0, w0 * d / (omega * omega) * (0.5 * t * c - s / omega));
    let phase = C64::from_polar(1.0, p.phi);
    ComplexMatrix::from_rows2([[da, phase.conj() * db], [phase * db, da.conj()]])
}

/// Free evolution, `diag(e^{−iΔωT/2}, e^{iΔωT/2})`.
pub fn free_propagator(delta: f64, big_t: f64) -> ComplexMatrix {
    let half = 0.5 * delta * big_t;
    ComplexMatrix::from_rows2([
        [C64::from_polar(1.0, -half), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::from_polar(1.0, half)],
    ])
}

/// `∂/∂Δω` of [`free_propagator`].
pub fn free_propagator_derivative(delta: f64, big_t: f64) -> ComplexMatrix {
    let half = 0.5 * delta * big_t;
    ComplexMatrix::from_rows2([
        [
            C64::new(0.0, -0.5 * big_t) * C64::from_polar(1.0, -half),
            C64::new(0.0, 0.0),
        ],
        [
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.5 * big_t) * C64::from_polar(1.0, half),
        ],
    ])
}

/// Population-measurement outcomes `(e, g)` of a pure state.
///
/// Both probabilities come from their own amplitude, so the small one keeps full
/// relative precision near resonance. Curvatures are `2|∂ψ_k|²`, which equals `∂²p_k`
/// wherever the amplitude `ψ_k` vanishes (the only place they are read).
pub fn population_outcomes(
    psi: &ComplexVector,
    dpsi: &ComplexVector,
) -> Result<OutcomeDistribution> {
    let mut probs = Vec::with_capacity(2);
    let mut dprobs = Vec::with_capacity(2);
    let mut curv = Vec::with_capacity(2);
    for k in [EXCITED, GROUND] {
        let (a, da) = (psi.get(k), dpsi.get(k));
        probs.push(a.norm_sqr());
        dprobs.push(2.0 * (a.conj() * da).re);
        curv.push(2.0 * da.norm_sqr());
    }
    OutcomeDistribution::new(["e", "g"], probs, dprobs)?.with_curvatures(curv)
}
