//! Classical and quantum Fisher information.
//!
//! The estimated parameter is the atomic frequency `ω_A` throughout; every derivative
//! stored in an [`OutcomeDistribution`] or a [`ParamDensity`] is a derivative with
//! respect to `ω_A`.
//!
//! Two routes to the quantum Fisher information are provided and must agree:
//! the eigenbasis sum ([`qfi`]) and `Tr[ρ L²]` with the symmetric logarithmic
//! derivative `L` from [`sld`] ([`qfi_from_sld`]).

use crate::error::{invalid, Error, Result};
use crate::linalg::{eig_hermitian, inner, ComplexMatrix, ComplexVector, EigenSystem, C64};

/// Outcomes with probability at or below this are excluded from the Fisher sum.
pub const DEFAULT_FLOOR: f64 = 1e-14;
/// Eigenvalue pairs with `r_n + r_m` at or below this are dropped from the QFI sum.
pub const PAIR_CUTOFF: f64 = 1e-12;
/// Eigenvalues at or below this span the kernel in [`qfi_continuous`].
pub const KERNEL_TOL: f64 = 1e-12;

const DIST_TOL: f64 = 1e-10;

/// Probabilities of a discrete measurement and their `ω_A` derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    labels: Vec<String>,
    probs: Vec<f64>,
    dprobs: Vec<f64>,
    curvatures: Option<Vec<f64>>,
}

impl OutcomeDistribution {
    pub fn new<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        probs: Vec<f64>,
        dprobs: Vec<f64>,
    ) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != probs.len() || probs.len() != dprobs.len() {
            return invalid(format!(
                "length mismatch: {} labels, {} probabilities, {} derivatives",
                labels.len(),
                probs.len(),
                dprobs.len()
            ));
        }
        if probs.is_empty() {
            return invalid("empty outcome distribution");
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < -1e-12) {
            return invalid(format!("probability {p} is negative or not finite"));
        }
        if dprobs.iter().any(|d| !d.is_finite()) {
            return invalid("derivative is not finite");
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > DIST_TOL {
            return invalid(format!("probabilities sum to {total}, not 1"));
        }
        let dtotal: f64 = dprobs.iter().sum();
        let dscale = dprobs.iter().fold(1.0, |m: f64, d| m.max(d.abs()));
        if dtotal.abs() > DIST_TOL * dscale {
            return invalid(format!("derivatives sum to {dtotal:e}, not 0"));
        }
        Ok(Self {
            labels,
            probs,
            dprobs,
            curvatures: None,
        })
    }

    /// Attaches second derivatives of the probabilities.
    ///
    /// They are only consulted for outcomes whose probability vanishes, where the
    /// term `(∂p)²/p` tends to `2 ∂²p`.
    pub fn with_curvatures(mut self, curvatures: Vec<f64>) -> Result<Self> {
        if curvatures.len() != self.probs.len() {
            return invalid("curvature length does not match outcome count");
        }
        self.curvatures = Some(curvatures);
        Ok(self)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn dprobs(&self) -> &[f64] {
        &self.dprobs
    }

    pub fn curvatures(&self) -> Option<&[f64]> {
        self.curvatures.as_deref()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Coarse-grains outcomes `a` and `b` into a single outcome labelled `a+b`.
    pub fn merged(&self, a: usize, b: usize) -> Result<Self> {
        if a == b || a >= self.len() || b >= self.len() {
            return invalid(format!("cannot merge outcomes {a} and {b}"));
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let mut out = self.clone();
        out.labels[lo] = format!("{}+{}", self.labels[lo], self.labels[hi]);
        out.probs[lo] += self.probs[hi];
        out.dprobs[lo] += self.dprobs[hi];
        out.labels.remove(hi);
        out.probs.remove(hi);
        out.dprobs.remove(hi);
        if let Some(c) = out.curvatures.as_mut() {
            c[lo] += c[hi];
            c.remove(hi);
        }
        Ok(out)
    }
}

/// A Fisher-information value with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherInfo {
    pub value: f64,
    /// An outcome had vanishing probability but a non-vanishing derivative, so its
    /// (divergent) term was dropped, or a 0/0 term had no curvature to resolve it.
    pub singular: bool,
    /// Number of 0/0 terms replaced by their analytic limit `2 ∂²p`.
    pub limit_terms: usize,
}

impl FisherInfo {
    fn regular(value: f64) -> Self {
        Self {
            value,
            singular: false,
            limit_terms: 0,
        }
    }
}

/// `Σ_l (∂p_l)² / p_l` over outcomes with `p_l > floor`.
///
/// Outcomes at or below the floor are handled as follows: if `|∂p_l| > √floor`
/// the term diverges and the result is flagged [`FisherInfo::singular`]; otherwise,
/// when curvatures are attached, the term is replaced by its limit `2 ∂²p_l`.
pub fn fisher_discrete(d: &OutcomeDistribution, floor: f64) -> FisherInfo {
    let mut info = FisherInfo::regular(0.0);
    let small = floor.sqrt();
    for (l, (&p, &dp)) in d.probs.iter().zip(&d.dprobs).enumerate() {
        if p > floor {
            info.value += dp * dp / p;
        } else if dp.abs() > small {
            info.singular = true;
        } else if let Some(c) = d.curvatures.as_ref() {
            info.value += 2.0 * c[l].max(0.0);
            info.limit_terms += 1;
        }
    }
    info
}

/// Fisher information of a dichotomic measurement, `(∂p)² / (p(1 − p))`.
///
/// When `p(1 − p) ≤ floor` and `|∂p| ≤ √floor` the expression is 0/0; it is then
/// resolved from the curvature `∂²p`: the limit is `2∂²p` next to `p = 0` and
/// `−2∂²p` next to `p = 1`. Without a curvature the term is flagged singular.
pub fn fisher_binary(p: f64, dp: f64, floor: f64, curvature: Option<f64>) -> Result<FisherInfo> {
    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return invalid(format!("probability {p} outside [0, 1]"));
    }
    let var = p * (1.0 - p);
    if var > floor {
        return Ok(FisherInfo::regular(dp * dp / var));
    }
    let unresolved = FisherInfo {
        value: 0.0,
        singular: true,
        limit_terms: 0,
    };
    if dp.abs() > floor.sqrt() {
        return Ok(unresolved);
    }
    Ok(match curvature {
        Some(c) => {
            let limit = if p <= 0.5 { 2.0 * c } else { -2.0 * c };
            FisherInfo {
                value: limit.max(0.0),
                singular: false,
                limit_terms: 1,
            }
        }
        None => unresolved,
    })
}

/// A density matrix together with its derivative with respect to `ω_A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamDensity {
    rho: ComplexMatrix,
    drho: ComplexMatrix,
}

impl ParamDensity {
    pub fn new(rho: ComplexMatrix, drho: ComplexMatrix) -> Result<Self> {
        if rho.dim() != drho.dim() {
            return Err(Error::DimensionMismatch {
                left: rho.dim(),
                right: drho.dim(),
            });
        }
        let tol = 1e-10;
        let dscale = drho.entries().map(|z| z.norm()).fold(1.0, f64::max);
        if !rho.is_hermitian(tol) {
            return Err(Error::NotHermitian {
                deviation: rho.hermitian_deviation(),
            });
        }
        if !drho.is_hermitian(tol * dscale) {
            return Err(Error::NotHermitian {
                deviation: drho.hermitian_deviation(),
            });
        }
        let tr = rho.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol {
            return invalid(format!("density matrix trace {tr} is not 1"));
        }
        let dtr = drho.trace();
        if dtr.norm() > tol * dscale {
            return invalid(format!("derivative trace {dtr} is not 0"));
        }
        let min = eig_hermitian(&rho)?.eigenvalues[0];
        if min < -tol {
            return Err(Error::Unphysical { eigenvalue: min });
        }
        Ok(Self { rho, drho })
    }

    /// `ρ = |ψ⟩⟨ψ|`, `∂ρ = |∂ψ⟩⟨ψ| + |ψ⟩⟨∂ψ|`.
    pub fn pure(psi: &ComplexVector, dpsi: &ComplexVector) -> Result<Self> {
        let rho = ComplexMatrix::outer(psi, psi)?;
        let drho = ComplexMatrix::outer(dpsi, psi)? + ComplexMatrix::outer(psi, dpsi)?;
        Self::new(rho, drho)
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn drho(&self) -> &ComplexMatrix {
        &self.drho
    }

    /// Eigensystem of `ρ` and `∂ρ` expressed in that eigenbasis.
    fn eigenframe(&self) -> Result<(EigenSystem, ComplexMatrix)> {
        let es = eig_hermitian(&self.rho)?;
        let v = es.basis_matrix();
        let d = v.dagger() * self.drho * v;
        Ok((es, d))
    }
}

/// Symmetric logarithmic derivative: the Hermitian `L` with `Lρ + ρL = 2∂ρ`.
///
/// In the eigenbasis of `ρ`, `L_nm = 2 (∂ρ)_nm / (r_n + r_m)`; entries with
/// `r_n + r_m ≤ PAIR_CUTOFF` (both directions in the kernel) are set to zero.
pub fn sld(pd: &ParamDensity) -> Result<ComplexMatrix> {
    let (es, d) = pd.eigenframe()?;
    let n = es.dim();
    let mut l = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let s = es.eigenvalues[i] + es.eigenvalues[j];
            if s > PAIR_CUTOFF {
                l.set(i, j, d.get(i, j) * (2.0 / s));
            }
        }
    }
    let v = es.basis_matrix();
    let l = v * l * v.dagger();
    Ok((l + l.dagger()) * 0.5)
}

/// Quantum Fisher information, `2 Σ |⟨ψ_n|∂ρ|ψ_m⟩|² / (r_n + r_m)` over pairs with
/// `r_n + r_m > PAIR_CUTOFF`.
pub fn qfi(pd: &ParamDensity) -> Result<f64> {
    let (es, d) = pd.eigenframe()?;
    let n = es.dim();
    let mut h = 0.0;
    for i in 0..n {
        for j in 0..n {
            let s = es.eigenvalues[i] + es.eigenvalues[j];
            if s > PAIR_CUTOFF {
                h += 2.0 * d.get(i, j).norm_sqr() / s;
            }
        }
    }
    Ok(h)
}

/// `Tr[ρ L²]` with `L` from [`sld`].
pub fn qfi_from_sld(pd: &ParamDensity) -> Result<f64> {
    let l = sld(pd)?;
    Ok((*pd.rho() * l * l).trace().re)
}

/// Quantum Fisher information extended continuously across points where the rank of
/// `ρ` drops.
///
/// The eigenbasis sum is discontinuous where an eigenvalue touches zero: terms
/// `(∂r)²/r` tend to `2∂²r` but are excluded exactly at the touching point. With the
/// second derivative of `ρ` available, the limit is
/// `2 Σ_{n,m ∈ S} |⟨ψ_n|∂ρ|ψ_m⟩|²/(r_n + r_m) + 2 Σ_{k ∉ S} ⟨ψ_k|∂²ρ|ψ_k⟩`,
/// where `S` is the support of `ρ`. Away from rank changes the result equals [`qfi`].
pub fn qfi_continuous(pd: &ParamDensity, d2rho: &ComplexMatrix) -> Result<f64> {
    if d2rho.dim() != pd.rho().dim() {
        return Err(Error::DimensionMismatch {
            left: pd.rho().dim(),
            right: d2rho.dim(),
        });
    }
    let (es, d) = pd.eigenframe()?;
    let n = es.dim();
    let support: Vec<bool> = es.eigenvalues.iter().map(|&r| r > KERNEL_TOL).collect();
    let mut h = 0.0;
    for i in (0..n).filter(|&i| support[i]) {
        for j in (0..n).filter(|&j| support[j]) {
            h += 2.0 * d.get(i, j).norm_sqr() / (es.eigenvalues[i] + es.eigenvalues[j]);
        }
    }
    for (k, v) in es.eigenvectors.iter().enumerate() {
        if !support[k] {
            h += 2.0 * d2rho.expectation(v, v)?.re.max(0.0);
        }
    }
    Ok(h)
}

/// Pure-state QFI, `4(⟨∂ψ|∂ψ⟩ − |⟨ψ|∂ψ⟩|²)`.
pub fn qfi_pure(psi: &ComplexVector, dpsi: &ComplexVector) -> Result<f64> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return invalid(format!("state has norm {norm}, expected 1"));
    }
    let dd = inner(dpsi, dpsi)?.re;
    let overlap = inner(psi, dpsi)?.norm_sqr();
    Ok(4.0 * (dd - overlap).max(0.0))
}

/// Values that can be differentiated by finite differences.
pub trait FiniteDifference: Sized {
    /// `(plus − minus) / span`.
    fn divided_difference(plus: Self, minus: Self, span: f64) -> Self;
}

impl FiniteDifference for f64 {
    fn divided_difference(plus: Self, minus: Self, span: f64) -> Self {
        (plus - minus) / span
    }
}

impl FiniteDifference for C64 {
    fn divided_difference(plus: Self, minus: Self, span: f64) -> Self {
        (plus - minus) / span
    }
}

impl FiniteDifference for ComplexVector {
    fn divided_difference(plus: Self, minus: Self, span: f64) -> Self {
        (plus - minus) * (1.0 / span)
    }
}

impl FiniteDifference for ComplexMatrix {
    fn divided_difference(plus: Self, minus: Self, span: f64) -> Self {
        (plus - minus) * (1.0 / span)
    }
}

/// `∛ε · max(|x|, scale)`, the step balancing truncation and rounding error.
pub fn default_step(x: f64, scale: f64) -> f64 {
    f64::EPSILON.cbrt() * x.abs().max(scale.abs())
}

/// Central difference `(f(x + h) − f(x − h)) / 2h`.
///
/// The divisor is the representable span `(x + h) − (x − h)` rather than `2h`.
pub fn central_diff<T, F>(f: F, x: f64, h: f64) -> Result<T>
where
    T: FiniteDifference,
    F: Fn(f64) -> T,
{
    if !h.is_finite() || h <= 0.0 {
        return invalid(format!("finite-difference step must be positive, got {h}"));
    }
    let (xp, xm) = (x + h, x - h);
    Ok(T::divided_difference(f(xp), f(xm), xp - xm))
}

/// [`central_diff`] with [`default_step`].
pub fn central_diff_scaled<T, F>(f: F, x: f64, scale: f64) -> Result<T>
where
    T: FiniteDifference,
    F: Fn(f64) -> T,
{
    central_diff(f, x, default_step(x, scale))
}
