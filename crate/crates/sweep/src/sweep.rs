//! Grid evaluation.
//!
//! Rabi and Ramsey sweeps use `x = Δω/Ω0` and report Fisher information in units of
//! `1/Ω0²`. CPT sweeps use `x = Δω/(2Γp)` and report it in units of `1/(2Γp)²`.

use clock_fisher::cpt::{self, Basis, CptParams};
use clock_fisher::estimation::{self, FisherInfo, OutcomeDistribution, DEFAULT_FLOOR};
use clock_fisher::twolevel::{self, PulseParams, RamseyParams};
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{CptBasis, Quantity, SchemeParams, SweepSpec};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("at detuning {x}: {source}")]
    Model {
        x: f64,
        #[source]
        source: clock_fisher::Error,
    },
    #[error("at detuning {x}: column `{column}` is not finite ({value})")]
    NonFinite { x: f64, column: String, value: f64 },
}

/// Evaluated sweep: one row per grid point, first column the detuning.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Grid points where a Fisher term could not be resolved.
    pub singular_points: usize,
}

/// Human-readable description of the x axis and the Fisher-information unit.
pub fn units(params: &SchemeParams) -> &'static str {
    match params {
        SchemeParams::Rabi { .. } | SchemeParams::Ramsey { .. } => {
            "detuning = delta_omega/omega0; fisher and qfi in units of 1/omega0^2"
        }
        SchemeParams::Cpt { .. } => {
            "detuning = delta_omega/(2 gamma_p); fisher and qfi in units of 1/(2 gamma_p)^2"
        }
    }
}

fn population_labels(params: &SchemeParams) -> Vec<String> {
    let labels: Vec<&str> = match params {
        SchemeParams::Rabi { .. } | SchemeParams::Ramsey { .. } => vec!["e", "g"],
        SchemeParams::Cpt { basis, .. } => population_basis(*basis).labels().to_vec(),
    };
    labels.into_iter().map(|l| format!("pop_{l}")).collect()
}

fn population_basis(b: CptBasis) -> Basis {
    match b {
        CptBasis::Coupled => Basis::Coupled,
        CptBasis::Energy => Basis::Energy,
        CptBasis::Single(level) => level.position().0,
    }
}

pub fn column_names(spec: &SweepSpec) -> Vec<String> {
    let mut cols = vec!["detuning".to_string()];
    for q in &spec.quantities {
        match q {
            Quantity::Populations => cols.extend(population_labels(&spec.params)),
            other => cols.push(other.name().to_string()),
        }
    }
    cols
}

/// Everything the quantities of one grid point are read from.
struct Point {
    prob: f64,
    fisher: FisherInfo,
    qfi: f64,
    populations: Vec<f64>,
}

fn two_level_point(
    psi: &clock_fisher::ComplexVector,
    dpsi: &clock_fisher::ComplexVector,
    unit: f64,
) -> clock_fisher::Result<Point> {
    let d: OutcomeDistribution = twolevel::population_outcomes(psi, dpsi)?;
    let mut fisher = estimation::fisher_discrete(&d, DEFAULT_FLOOR);
    fisher.value *= unit;
    let qfi = estimation::qfi_pure(psi, dpsi)? * unit;
    Ok(Point {
        prob: d.probs()[twolevel::EXCITED],
        fisher,
        qfi,
        populations: d.probs().to_vec(),
    })
}

fn evaluate(params: &SchemeParams, x: f64, wants_qfi: bool) -> clock_fisher::Result<Point> {
    match *params {
        SchemeParams::Rabi { omega0, phi } => {
            let p = PulseParams::pi_pulse(omega0, x * omega0, phi)?;
            let (psi, dpsi) = (
                twolevel::rabi::state(&p),
                twolevel::rabi::state_derivative(&p),
            );
            two_level_point(&psi, &dpsi, omega0 * omega0)
        }
        SchemeParams::Ramsey { omega0, kappa, phi } => {
            let r = RamseyParams::standard(omega0, x * omega0, kappa, phi)?;
            let (psi, dpsi) = (
                twolevel::ramsey::state(&r),
                twolevel::ramsey::state_derivative(&r),
            );
            two_level_point(&psi, &dpsi, omega0 * omega0)
        }
        SchemeParams::Cpt {
            gamma2,
            gamma_star,
            gamma_p,
            basis,
        } => {
            let scale = 2.0 * gamma_p;
            let p = CptParams::new(gamma2, gamma_star, gamma_p, x * scale)?;
            let unit = scale * scale;
            let state = cpt::steady_state(&p)?;
            let mut fisher = match basis {
                CptBasis::Coupled => cpt::fisher_coupled(&p)?,
                CptBasis::Energy => cpt::fisher_energy(&p)?,
                CptBasis::Single(level) => cpt::fisher_single(&p, level)?,
            };
            fisher.value *= unit;
            let qfi = if wants_qfi { cpt::qfi(&p)? * unit } else { 0.0 };
            let populations = match population_basis(basis) {
                Basis::Coupled => state.populations.to_vec(),
                Basis::Energy => (0..3).map(|k| state.rho.get(k, k).re).collect(),
            };
            Ok(Point {
                prob: state.populations[2],
                fisher,
                qfi,
                populations,
            })
        }
    }
}

/// Evaluates every grid point (in parallel) and returns the rows in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Table, SweepError> {
    let columns = column_names(spec);
    let wants_qfi = spec.quantities.contains(&Quantity::Qfi);
    let results: Vec<Result<(Vec<f64>, bool), SweepError>> = spec
        .grid
        .points()
        .into_par_iter()
        .map(|x| {
            let pt = evaluate(&spec.params, x, wants_qfi)
                .map_err(|source| SweepError::Model { x, source })?;
            let mut row = vec![x];
            for q in &spec.quantities {
                match q {
                    Quantity::Prob => row.push(pt.prob),
                    Quantity::Fisher => row.push(pt.fisher.value),
                    Quantity::Qfi => row.push(pt.qfi),
                    Quantity::Populations => row.extend_from_slice(&pt.populations),
                }
            }
            if let Some((col, &value)) = columns.iter().zip(&row).find(|(_, v)| !v.is_finite()) {
                return Err(SweepError::NonFinite {
                    x,
                    column: col.clone(),
                    value,
                });
            }
            Ok((
                row,
                pt.fisher.singular && spec.quantities.contains(&Quantity::Fisher),
            ))
        })
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut singular_points = 0;
    for r in results {
        let (row, singular) = r?;
        singular_points += usize::from(singular);
        rows.push(row);
    }
    Ok(Table {
        columns,
        rows,
        singular_points,
    })
}
