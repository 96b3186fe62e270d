//! Ramsey interrogation: π/2 pulse, free evolution for `T = κτ`, π/2 pulse.
//!
//! The state is always built from the propagator product
//! `U₂(τ) U_free(T) U₁(τ) |g⟩`. The printed closed form for the fringe is kept only
//! for auditing ([`closed_form_excited_prob`]).

use std::f64::consts::PI;

use super::{
    cavity_propagator, cavity_propagator_derivative, free_propagator, free_propagator_derivative,
    ground, population_outcomes, theta, RamseyParams, EXCITED,
};
use crate::error::Result;
use crate::estimation::{self, FisherInfo, OutcomeDistribution, DEFAULT_FLOOR};
use crate::linalg::ComplexVector;

/// `U₂(τ) U_free(T) U₁(τ) |g⟩`.
pub fn state(r: &RamseyParams) -> ComplexVector {
    let u1 = cavity_propagator(&r.first_pulse());
    let uf = free_propagator(r.delta, r.big_t);
    let u2 = cavity_propagator(&r.second_pulse());
    u2 * (uf * (u1 * ground()))
}

/// `∂_{ω_A}` of [`state`], by the product rule over the three propagators.
pub fn state_derivative(r: &RamseyParams) -> ComplexVector {
    let g = ground();
    let (p1, p2) = (r.first_pulse(), r.second_pulse());
    let (u1, du1) = (cavity_propagator(&p1), cavity_propagator_derivative(&p1));
    let (uf, duf) = (
        free_propagator(r.delta, r.big_t),
        free_propagator_derivative(r.delta, r.big_t),
    );
    let (u2, du2) = (cavity_propagator(&p2), cavity_propagator_derivative(&p2));
    let a = u1 * g;
    let da = du1 * g;
    let b = uf * a;
    let db = duf * a + uf * da;
    du2 * b + u2 * db
}

/// Excited-state probability for π/2 pulses (`τ = π/(2Ω0)`), `φ = 0` and free time `big_t`.
pub fn excited_prob(omega0: f64, delta: f64, big_t: f64) -> Result<f64> {
    let tau = PI / (2.0 * omega0);
    let r = RamseyParams::new(omega0, delta, tau, big_t, 0.0, 0.0)?;
    Ok(state(&r).get(EXCITED).norm_sqr())
}

/// Outcome distribution `(e, g)` after the full sequence.
pub fn outcomes(r: &RamseyParams) -> Result<OutcomeDistribution> {
    population_outcomes(&state(r), &state_derivative(r))
}

/// Fisher information of the population measurement.
///
/// On resonance with `φ = 0` the ground term is 0/0 and resolves to `4|∂ψ_g|²`,
/// which equals `4(1 + πκ/4)²/Ω0²`.
pub fn fisher(r: &RamseyParams) -> Result<FisherInfo> {
    Ok(estimation::fisher_discrete(&outcomes(r)?, DEFAULT_FLOOR))
}

pub fn qfi(r: &RamseyParams) -> Result<f64> {
    estimation::qfi_pure(&state(r), &state_derivative(r))
}

/// `4(1 + πκ/4)²/Ω0²`.
pub fn resonance_fisher(omega0: f64, kappa: f64) -> f64 {
    let gain = 1.0 + 0.25 * PI * kappa;
    4.0 * gain * gain / (omega0 * omega0)
}

/// Coefficient of `(Δω/Ω0)²` in the resonance expansion, `8 − 3π²/4 + (10 − 3π)(π/2)κ`.
pub fn curvature(kappa: f64) -> f64 {
    super::rabi::CURVATURE + (10.0 - 3.0 * PI) * 0.5 * PI * kappa
}

/// Quadratic resonance expansion of the Fisher information.
pub fn fisher_expansion(omega0: f64, kappa: f64, delta: f64) -> f64 {
    let x = delta / omega0;
    (resonance_fisher(1.0, kappa) - curvature(kappa) * x * x) / (omega0 * omega0)
}

/// Argument of the free-evolution trigonometric factors in the closed-form fringe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreePhase {
    /// `κΔω/(4Ω0)`, as printed.
    Printed,
    /// `πκΔω/(4Ω0)`, which equals `ΔωT/2` for `T = κπ/(2Ω0)`.
    WithPi,
}

/// Closed-form Ramsey fringe
/// `(4/Θ²) sin²(πΘ/4) [cos a cos(πΘ/4) − (Δω/Ω0)/Θ sin a sin(πΘ/4)]²`,
/// with `a` selected by `phase`.
pub fn closed_form_excited_prob(omega0: f64, delta: f64, kappa: f64, phase: FreePhase) -> f64 {
    let x = delta / omega0;
    let th = theta(omega0, delta);
    let a = match phase {
        FreePhase::Printed => kappa * x / 4.0,
        FreePhase::WithPi => PI * kappa * x / 4.0,
    };
    let (s, c) = (0.25 * PI * th).sin_cos();
    let bracket = a.cos() * c - x / th * a.sin() * s;
    4.0 / (th * th) * s * s * bracket * bracket
}
