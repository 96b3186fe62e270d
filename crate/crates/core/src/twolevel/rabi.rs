//! Rabi interrogation: a single π-pulse (`t = π/Ω0`) applied to `|g⟩`.

use std::f64::consts::PI;

use super::{
    cavity_propagator, cavity_propagator_derivative, ground, population_outcomes, theta,
    PulseParams,
};
use crate::error::Result;
use crate::estimation::{self, FisherInfo, OutcomeDistribution, DEFAULT_FLOOR};
use crate::linalg::ComplexVector;

/// Coefficient of `(Δω/Ω0)²` in the resonance expansion of the Fisher information.
pub const CURVATURE: f64 = 8.0 - 0.75 * PI * PI;

/// `U(t)|g⟩`.
pub fn state(p: &PulseParams) -> ComplexVector {
    cavity_propagator(p) * ground()
}

/// `∂_{ω_A} U(t)|g⟩`.
pub fn state_derivative(p: &PulseParams) -> ComplexVector {
    cavity_propagator_derivative(p) * ground()
}

/// Excited-state probability after a π-pulse, `sin²(πΘ/2)/Θ²` with `Θ = √(1 + (Δω/Ω0)²)`.
pub fn excited_prob(omega0: f64, delta: f64) -> f64 {
    let th = theta(omega0, delta);
    let s = (0.5 * PI * th).sin();
    (s * s) / (th * th)
}

/// `∂_{ω_A}` of [`excited_prob`].
pub fn excited_prob_derivative(omega0: f64, delta: f64) -> f64 {
    let th = theta(omega0, delta);
    let (s, c) = (0.5 * PI * th).sin_cos();
    let dp_dtheta = (PI * s * c * th - 2.0 * s * s) / th.powi(3);
    let dtheta_ddelta = delta / (omega0 * omega0 * th);
    dp_dtheta * dtheta_ddelta
}

fn pi_pulse(omega0: f64, delta: f64) -> Result<PulseParams> {
    PulseParams::pi_pulse(omega0, delta, 0.0)
}

/// Outcome distribution `(e, g)` of the population measurement after a π-pulse.
pub fn outcomes(omega0: f64, delta: f64) -> Result<OutcomeDistribution> {
    let p = pi_pulse(omega0, delta)?;
    population_outcomes(&state(&p), &state_derivative(&p))
}

/// Fisher information of the population measurement (units of (rad/s)⁻²).
///
/// At exact resonance the ground-state term is 0/0; it resolves to `4|∂ψ_g|²`,
/// which equals `4/Ω0²`.
pub fn fisher(omega0: f64, delta: f64) -> Result<FisherInfo> {
    Ok(estimation::fisher_discrete(
        &outcomes(omega0, delta)?,
        DEFAULT_FLOOR,
    ))
}

/// Quantum Fisher information of the pure state after the π-pulse.
pub fn qfi(omega0: f64, delta: f64) -> Result<f64> {
    let p = pi_pulse(omega0, delta)?;
    estimation::qfi_pure(&state(&p), &state_derivative(&p))
}

/// Fisher information on resonance, `4/Ω0²`.
pub fn resonance_fisher(omega0: f64) -> f64 {
    4.0 / (omega0 * omega0)
}

/// Quadratic resonance expansion `[4 − (8 − 3π²/4)(Δω/Ω0)²]/Ω0²`.
pub fn fisher_expansion(omega0: f64, delta: f64) -> f64 {
    let x = delta / omega0;
    (4.0 - CURVATURE * x * x) / (omega0 * omega0)
}
