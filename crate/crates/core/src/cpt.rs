//! Coherent population trapping in a symmetric Λ system.
//!
//! Levels `|1⟩`, `|2⟩` are the clock (ground) states and `|3⟩` the common excited
//! state. The steady state is taken in the no-saturation regime and depends on the
//! ground-coherence relaxation `γ2`, the excited-state relaxation `Γ*`, the pumping
//! rate `Γp` and the Raman detuning `Δω = (ω_L1 − ω_L2) − ω_A`.
//!
//! Because `Δω` decreases when `ω_A` grows, `∂_{ω_A} = −∂_{Δω}`; second derivatives
//! carry no sign change. All Fisher informations here are in s² (rates in s⁻¹).
//!
//! Besides the energy basis, populations are measured in the coupled/uncoupled basis
//! `|C⟩ = (|1⟩ + |2⟩)/√2`, `|NC⟩ = (|2⟩ − |1⟩)/√2`, obtained by projecting `ρ`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::estimation::{self, FisherInfo, OutcomeDistribution, ParamDensity, DEFAULT_FLOOR};
use crate::linalg::{ComplexMatrix, ComplexVector, EigenSystem, C64};

/// Excited-state relaxation rate used when none is given (s⁻¹).
pub const DEFAULT_GAMMA_STAR: f64 = 1e6;

const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptParams {
    /// Ground-state coherence relaxation rate `γ2` (s⁻¹).
    pub gamma2: f64,
    /// Excited-state relaxation rate `Γ*` (s⁻¹).
    pub gamma_star: f64,
    /// Optical pumping rate `Γp = Ω0²/(2Γ*)` (s⁻¹).
    pub gamma_p: f64,
    /// Raman detuning (rad/s).
    pub delta: f64,
}

impl CptParams {
    pub fn new(gamma2: f64, gamma_star: f64, gamma_p: f64, delta: f64) -> Result<Self> {
        if !gamma2.is_finite() || gamma2 < 0.0 {
            return invalid(format!(
                "gamma2 must be non-negative and finite, got {gamma2}"
            ));
        }
        if !gamma_star.is_finite() || gamma_star <= 0.0 {
            return invalid(format!(
                "gamma_star must be positive and finite, got {gamma_star}"
            ));
        }
        if !gamma_p.is_finite() || gamma_p <= 0.0 {
            return invalid(format!(
                "gamma_p must be positive and finite, got {gamma_p}"
            ));
        }
        if !delta.is_finite() {
            return invalid(format!("delta must be finite, got {delta}"));
        }
        Ok(Self {
            gamma2,
            gamma_star,
            gamma_p,
            delta,
        })
    }

    pub fn with_delta(&self, delta: f64) -> Self {
        Self { delta, ..*self }
    }

    /// `γ2 + 2Γp`, the width of the dark resonance.
    pub fn linewidth(&self) -> f64 {
        self.gamma2 + 2.0 * self.gamma_p
    }

    /// `Δ̃ = Δω/(γ2 + 2Γp)`.
    pub fn reduced_detuning(&self) -> f64 {
        self.delta / self.linewidth()
    }

    /// `γ̃ = γ2/(γ2 + 2Γp)`.
    pub fn reduced_gamma2(&self) -> f64 {
        self.gamma2 / self.linewidth()
    }

    /// `Γ̃p = Γp/(γ2 + 2Γp)`.
    pub fn reduced_pump(&self) -> f64 {
        self.gamma_p / self.linewidth()
    }

    fn pump_ratio(&self) -> f64 {
        2.0 * self.gamma_p / self.gamma_star
    }
}

/// Λ-system Hamiltonian (divided by ħ): `diag(ω1, ω2, ω3)` with couplings between
/// `|1⟩,|3⟩` and `|2⟩,|3⟩` set by the Rabi frequencies `Ω_R1`, `Ω_R2`.
///
/// The off-diagonal entries are `Ω_R/2`, the same convention as the two-level
/// rotating-frame Hamiltonian, so that `⟨3|H|C⟩ = Ω_R/√2` in the symmetric case.
pub fn hamiltonian(
    omega1: f64,
    omega2: f64,
    omega3: f64,
    omega_r1: f64,
    omega_r2: f64,
) -> ComplexMatrix {
    let r = |x: f64| C64::new(x, 0.0);
    let (c1, c2) = (0.5 * omega_r1, 0.5 * omega_r2);
    ComplexMatrix::from_rows3([
        [r(omega1), r(0.0), r(c1)],
        [r(0.0), r(omega2), r(c2)],
        [r(c1), r(c2), r(omega3)],
    ])
}

/// `|C⟩ = (|1⟩ + |2⟩)/√2`.
pub fn coupled_state() -> ComplexVector {
    let a = C64::new(FRAC_1_SQRT_2, 0.0);
    ComplexVector::from_array3([a, a, C64::new(0.0, 0.0)])
}

/// `|NC⟩ = (|2⟩ − |1⟩)/√2`.
pub fn uncoupled_state() -> ComplexVector {
    let a = C64::new(FRAC_1_SQRT_2, 0.0);
    ComplexVector::from_array3([-a, a, C64::new(0.0, 0.0)])
}

/// Energy level `|n⟩`, `n ∈ {1, 2, 3}`.
pub fn level(n: usize) -> ComplexVector {
    assert!((1..=3).contains(&n), "level index {n} out of range");
    ComplexVector::basis(3, n - 1)
}

/// Steady-state density matrix with its populations in the coupled basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptState {
    pub rho: ComplexMatrix,
    /// `(ρ_C, ρ_NC, ρ3)`.
    pub populations: [f64; 3],
}

struct Elements {
    rho33: f64,
    rho12: C64,
}

fn elements(p: &CptParams) -> Elements {
    let g = p.linewidth();
    let d = p.delta;
    let denom = g * g + d * d;
    let rho33 = p.pump_ratio() * (1.0 - 2.0 * p.gamma_p * g / denom);
    let rho12 = -p.gamma_p / C64::new(g, d);
    Elements { rho33, rho12 }
}

fn assemble(diag12: f64, rho33: f64, rho12: C64) -> ComplexMatrix {
    let z = C64::new(0.0, 0.0);
    let r = |x: f64| C64::new(x, 0.0);
    ComplexMatrix::from_rows3([
        [r(diag12), rho12, z],
        [rho12.conj(), r(diag12), z],
        [z, z, r(rho33)],
    ])
}

/// Steady-state density matrix in the basis `|1⟩, |2⟩, |3⟩`.
///
/// `ρ11 = ρ22 = (1 − ρ33)/2`,
/// `ρ33 = (2Γp/Γ*)[1 − 2Γp(γ2 + 2Γp)/((γ2 + 2Γp)² + Δω²)]`,
/// `ρ12 = −Γp/(γ2 + 2Γp + iΔω)`, `ρ13 = ρ23 = 0`.
///
/// Fails with [`Error::Unphysical`] when the smallest eigenvalue is below `−1e-10`
/// (this happens once `2Γp` exceeds `Γ*`, outside the no-saturation regime).
pub fn steady_state(p: &CptParams) -> Result<CptState> {
    let e = elements(p);
    let [r1, _, r3] = closed_form_eigenvalues(p);
    let min = r1.min(r3);
    if min < -PSD_TOL {
        return Err(Error::Unphysical { eigenvalue: min });
    }
    let rho = assemble(0.5 * (1.0 - e.rho33), e.rho33, e.rho12);
    let populations = project(&rho, &coupled_basis());
    Ok(CptState { rho, populations })
}

/// `∂_{ω_A} ρ = −∂_{Δω} ρ`.
pub fn steady_state_derivative(p: &CptParams) -> ComplexMatrix {
    let g = p.linewidth();
    let d = p.delta;
    let denom = g * g + d * d;
    let d33 = p.pump_ratio() * 4.0 * p.gamma_p * g * d / (denom * denom);
    let z = C64::new(g, d);
    let d12 = C64::new(0.0, p.gamma_p) / (z * z);
    -assemble(-0.5 * d33, d33, d12)
}

/// `∂²_{ω_A} ρ = ∂²_{Δω} ρ`.
pub fn steady_state_second_derivative(p: &CptParams) -> ComplexMatrix {
    let g = p.linewidth();
    let d = p.delta;
    let denom = g * g + d * d;
    let dd33 = p.pump_ratio() * 4.0 * p.gamma_p * g * (g * g - 3.0 * d * d) / denom.powi(3);
    let z = C64::new(g, d);
    let dd12 = C64::new(2.0 * p.gamma_p, 0.0) / (z * z * z);
    assemble(-0.5 * dd33, dd33, dd12)
}

/// Steady state and its `ω_A` derivative.
pub fn density(p: &CptParams) -> Result<ParamDensity> {
    let state = steady_state(p)?;
    ParamDensity::new(state.rho, steady_state_derivative(p))
}

/// `(ρ_C, ρ_NC, ρ3)` by projection onto `|C⟩`, `|NC⟩`, `|3⟩`.
pub fn coupled_populations(s: &CptState) -> [f64; 3] {
    project(&s.rho, &coupled_basis())
}

fn coupled_basis() -> [ComplexVector; 3] {
    [coupled_state(), uncoupled_state(), level(3)]
}

fn energy_basis() -> [ComplexVector; 3] {
    [level(1), level(2), level(3)]
}

fn project(m: &ComplexMatrix, basis: &[ComplexVector; 3]) -> [f64; 3] {
    basis.map(|v| m.expectation(&v, &v).expect("3-dimensional").re)
}

/// Measurement basis for the three-outcome population measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `|C⟩, |NC⟩, |3⟩`.
    Coupled,
    /// `|1⟩, |2⟩, |3⟩`.
    Energy,
}

impl Basis {
    fn vectors(self) -> [ComplexVector; 3] {
        match self {
            Basis::Coupled => coupled_basis(),
            Basis::Energy => energy_basis(),
        }
    }

    pub fn labels(self) -> [&'static str; 3] {
        match self {
            Basis::Coupled => ["C", "NC", "3"],
            Basis::Energy => ["1", "2", "3"],
        }
    }
}

/// A single level whose occupation is measured as a yes/no outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    C,
    NC,
    One,
    Two,
    Three,
}

impl Level {
    /// Basis containing this level and its index there.
    pub fn position(self) -> (Basis, usize) {
        match self {
            Level::C => (Basis::Coupled, 0),
            Level::NC => (Basis::Coupled, 1),
            Level::One => (Basis::Energy, 0),
            Level::Two => (Basis::Energy, 1),
            Level::Three => (Basis::Coupled, 2),
        }
    }

    pub fn all() -> [Level; 5] {
        [Level::C, Level::NC, Level::One, Level::Two, Level::Three]
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::C => "C",
            Level::NC => "NC",
            Level::One => "1",
            Level::Two => "2",
            Level::Three => "3",
        })
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "C" | "c" => Ok(Level::C),
            "NC" | "nc" => Ok(Level::NC),
            "1" => Ok(Level::One),
            "2" => Ok(Level::Two),
            "3" => Ok(Level::Three),
            other => invalid(format!(
                "unknown level '{other}' (expected C, NC, 1, 2 or 3)"
            )),
        }
    }
}

/// Populations in `basis` with first and second `ω_A` derivatives.
pub fn outcomes(p: &CptParams, basis: Basis) -> Result<OutcomeDistribution> {
    let state = steady_state(p)?;
    let vectors = basis.vectors();
    let probs = project(&state.rho, &vectors);
    let dprobs = project(&steady_state_derivative(p), &vectors);
    let curv = project(&steady_state_second_derivative(p), &vectors);
    OutcomeDistribution::new(basis.labels(), probs.to_vec(), dprobs.to_vec())?
        .with_curvatures(curv.to_vec())
}

/// Three-outcome Fisher information in the coupled basis `(ρ_C, ρ_NC, ρ3)`.
pub fn fisher_coupled(p: &CptParams) -> Result<FisherInfo> {
    Ok(estimation::fisher_discrete(
        &outcomes(p, Basis::Coupled)?,
        DEFAULT_FLOOR,
    ))
}

/// Three-outcome Fisher information in the energy basis `(ρ11, ρ22, ρ33)`.
pub fn fisher_energy(p: &CptParams) -> Result<FisherInfo> {
    Ok(estimation::fisher_discrete(
        &outcomes(p, Basis::Energy)?,
        DEFAULT_FLOOR,
    ))
}

/// Dichotomic Fisher information `(∂ρ_l)²/(ρ_l(1 − ρ_l))` for a single level.
///
/// The complement `1 − ρ_l` is taken as the sum of the other two populations, and the
/// 0/0 points (`ρ_l ∈ {0, 1}` with vanishing slope) resolve through the curvature.
pub fn fisher_single(p: &CptParams, level: Level) -> Result<FisherInfo> {
    let (basis, idx) = level.position();
    let full = outcomes(p, basis)?;
    let others: Vec<usize> = (0..3).filter(|&k| k != idx).collect();
    let binary = full.merged(others[0], others[1])?;
    Ok(estimation::fisher_discrete(&binary, DEFAULT_FLOOR))
}

/// Closed-form eigenvalues `(r1, r2, r3)`:
/// `r1,2 = ½(1 ∓ 2Γ̃p/√(1 + Δ̃²) − r3)`, `r3 = (2Γp/Γ*)(γ̃ + Δ̃²)/(1 + Δ̃²)`.
pub fn closed_form_eigenvalues(p: &CptParams) -> [f64; 3] {
    let dt = p.reduced_detuning();
    let s = 1.0 + dt * dt;
    let r3 = p.pump_ratio() * (p.reduced_gamma2() + dt * dt) / s;
    let split = 2.0 * p.reduced_pump() / s.sqrt();
    [0.5 * (1.0 - split - r3), 0.5 * (1.0 + split - r3), r3]
}

/// Closed-form eigenvectors paired with [`closed_form_eigenvalues`]:
/// `|ψ1⟩ = ((1 − iΔ̃)|1⟩ + √(1 + Δ̃²)|2⟩)/√(2(1 + Δ̃²))`,
/// `|ψ2⟩ = ((1 + iΔ̃)|2⟩ − √(1 + Δ̃²)|1⟩)/(√2(1 + iΔ̃))`, `|ψ3⟩ = |3⟩`.
pub fn closed_form_eigenvectors(p: &CptParams) -> [ComplexVector; 3] {
    let dt = p.reduced_detuning();
    let root = (1.0 + dt * dt).sqrt();
    let z = C64::new(0.0, 0.0);
    let psi1 = ComplexVector::from_array3([C64::new(1.0, -dt), C64::new(root, 0.0), z])
        * (1.0 / (2.0f64.sqrt() * root));
    let psi2 = ComplexVector::from_array3([C64::new(-root, 0.0), C64::new(1.0, dt), z])
        * (C64::new(1.0, 0.0) / (C64::new(1.0, dt) * 2.0f64.sqrt()));
    [psi1, psi2, level(3)]
}

/// Closed-form eigensystem of the steady state, sorted ascending.
pub fn eigensystem(p: &CptParams) -> EigenSystem {
    let r = closed_form_eigenvalues(p);
    let v = closed_form_eigenvectors(p);
    let mut pairs: Vec<(f64, ComplexVector)> = r.into_iter().zip(v).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (eigenvalues, eigenvectors) = pairs
        .into_iter()
        .map(|(r, v)| (r, v.phase_normalized()))
        .unzip();
    EigenSystem {
        eigenvalues,
        eigenvectors,
    }
}

/// Quantum Fisher information of the steady state.
///
/// Uses the continuous extension [`estimation::qfi_continuous`], which coincides with
/// the eigenbasis sum except where the rank of `ρ` drops (`γ2 = 0`, `Δω = 0`).
pub fn qfi(p: &CptParams) -> Result<f64> {
    let pd = density(p)?;
    estimation::qfi_continuous(&pd, &steady_state_second_derivative(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inner;

    fn typical_rates(gamma2: f64, delta: f64) -> CptParams {
        CptParams::new(gamma2, DEFAULT_GAMMA_STAR, 1e4, delta).unwrap()
    }

    #[test]
    fn zero_hamiltonian() {
        assert_eq!(
            hamiltonian(0.0, 0.0, 0.0, 0.0, 0.0),
            ComplexMatrix::zeros(3)
        );
    }

    #[test]
    fn uncoupled_state_is_dark() {
        let h = hamiltonian(0.3, -0.2, 5.0, 1.7, 1.7);
        let three = level(3);
        assert_eq!(
            h.expectation(&three, &uncoupled_state()).unwrap().norm(),
            0.0
        );
        let bright = h.expectation(&three, &coupled_state()).unwrap();
        assert!((bright.re - 1.7 * FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(bright.im, 0.0);
    }

    #[test]
    fn pure_dark_state_without_relaxation() {
        let s = steady_state(&typical_rates(0.0, 0.0)).unwrap();
        assert_eq!(s.rho.get(0, 1), C64::new(-0.5, 0.0));
        assert_eq!(s.rho.get(2, 2).re, 0.0);
        assert_eq!(s.rho.get(0, 0).re, 0.5);
        let [c, nc, three] = s.populations;
        assert!(c.abs() < 1e-15);
        assert!((nc - 1.0).abs() < 1e-15);
        assert_eq!(three, 0.0);
    }

    #[test]
    fn typical_rates_on_resonance() {
        let s = steady_state(&typical_rates(400.0, 0.0)).unwrap();
        assert!((s.rho.get(0, 1).re + 10000.0 / 20400.0).abs() < 1e-15);
        let rho33 = 0.02 * 400.0 / 20400.0;
        assert!((s.rho.get(2, 2).re - rho33).abs() < 1e-17);
        assert!((rho33 - 3.922e-4).abs() < 1e-7);
        let nc = (1.0 - rho33) / 2.0 + 10000.0 / 20400.0;
        assert!((s.populations[1] - nc).abs() < 1e-15);
        // (1 − 8/20400)/2 + 10000/20400 = 0.99
        assert!((s.populations[1] - 0.99).abs() < 1e-14);
    }

    #[test]
    fn far_off_resonance_coherence_vanishes() {
        let s = steady_state(&typical_rates(400.0, 1e12)).unwrap();
        let [c, nc, three] = s.populations;
        assert!((c - nc).abs() < 1e-8);
        assert!((c - (1.0 - three) / 2.0).abs() < 1e-8);
    }

    #[test]
    fn saturated_regime_is_rejected() {
        let p = CptParams::new(400.0, 1e4, 1e4, 0.0).unwrap();
        assert!(matches!(steady_state(&p), Err(Error::Unphysical { .. })));
        assert!(CptParams::new(-1.0, 1e6, 1e4, 0.0).is_err());
        assert!(CptParams::new(0.0, 0.0, 1e4, 0.0).is_err());
        assert!(CptParams::new(0.0, 1e6, 0.0, 0.0).is_err());
    }

    #[test]
    fn closed_form_eigenvectors_are_eigenvectors() {
        for delta in [-3e4, -500.0, 0.0, 2e4, 7.5e4] {
            let p = typical_rates(400.0, delta);
            let rho = steady_state(&p).unwrap().rho;
            let r = closed_form_eigenvalues(&p);
            for (rk, v) in r.iter().zip(closed_form_eigenvectors(&p)) {
                assert!((v.norm() - 1.0).abs() < 1e-14);
                let lhs = rho * v;
                assert!((lhs - v * *rk).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn resonance_eigenvalues_of_dark_state() {
        let r = closed_form_eigenvalues(&typical_rates(0.0, 0.0));
        assert_eq!(r, [0.0, 1.0, 0.0]);
        let v = closed_form_eigenvectors(&typical_rates(0.0, 0.0));
        assert!((inner(&v[1], &uncoupled_state()).unwrap().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_level_information_vanishes_on_resonance_with_relaxation() {
        for level in Level::all() {
            let fi = fisher_single(&typical_rates(400.0, 0.0), level).unwrap();
            assert_eq!(fi.value, 0.0, "level {level}");
        }
    }

    #[test]
    fn resonance_limit_without_relaxation() {
        // ρ_C and ρ3 vanish quadratically; the limit is (2 + 4Γp/Γ*)/(2Γp)².
        let p = typical_rates(0.0, 0.0);
        let expected = (2.0 + 4.0 * 1e4 / 1e6) / (2e4f64).powi(2);
        let fc = fisher_coupled(&p).unwrap();
        assert_eq!(fc.limit_terms, 2);
        assert!((fc.value - expected).abs() < 1e-12 * expected);
        assert!((qfi(&p).unwrap() - expected).abs() < 1e-9 * expected);
        // the literal eigenbasis sum drops the vanishing eigenvalues
        let literal = estimation::qfi(&density(&p).unwrap()).unwrap();
        assert!((literal - 1.0 / (2e4f64).powi(2)).abs() < 1e-9 * literal);
    }

    #[test]
    fn level_parsing() {
        assert_eq!("NC".parse::<Level>().unwrap(), Level::NC);
        assert_eq!("3".parse::<Level>().unwrap(), Level::Three);
        assert!("4".parse::<Level>().is_err());
        for l in Level::all() {
            assert_eq!(l.to_string().parse::<Level>().unwrap(), l);
        }
    }
}
