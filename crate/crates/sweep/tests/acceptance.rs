//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};

use clock_fisher::cpt::{self, CptParams, Level};
use clock_fisher::estimation::{self, central_diff, fisher_binary, ParamDensity, DEFAULT_FLOOR};
use clock_fisher::linalg::{eig_hermitian, inner};
use clock_fisher::twolevel::{
    rabi,
    ramsey::{self, FreePhase},
    PulseParams, RamseyParams, GROUND,
};
use clock_fisher::{ComplexMatrix, ComplexVector, C64};
use clock_sweep::config::{CptBasis, Format, Grid, Quantity, SchemeParams, SweepSpec};
use clock_sweep::run_sweep;
use rand::{rngs::StdRng, Rng, SeedableRng};

const GAMMA_STAR: f64 = 1e6;
const GAMMA_P: f64 = 1e4;
const TYPICAL_GAMMA2: f64 = 400.0;

const PROB_TOL: f64 = 1e-12;
const FISHER_RESONANCE_TOL: f64 = 1e-9;
const CURVATURE_REL_TOL: f64 = 0.01;
const FIT_HALF_WIDTH: f64 = 0.05;
const RATIO_REL_TOL: f64 = 1e-9;
const CRB_SLACK: f64 = 1e-8;
const OPTIMALITY_REL_TOL: f64 = 1e-6;
const EIGEN_TOL: f64 = 1e-10;
const ORACLE_REL_TOL: f64 = 1e-8;
const DERIVATIVE_REL_TOL: f64 = 1e-6;
const DERIVATIVE_FLOOR: f64 = 1e-8;
const CLOSED_FORM_TOL: f64 = 1e-10;

struct Verdict {
    pass: bool,
    detail: String,
}

type Check = fn() -> Verdict;

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn two_level_grid() -> Grid {
    Grid::new(-10.0, 10.0, 2001).unwrap()
}

fn cpt_grid() -> Grid {
    Grid::new(-2.0, 2.0, 401).unwrap()
}

fn cpt_at(gamma2: f64, x: f64) -> CptParams {
    CptParams::new(gamma2, GAMMA_STAR, GAMMA_P, x * 2.0 * GAMMA_P).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Least-squares `a + b x + c x²` on `|x| ≤ FIT_HALF_WIDTH`; returns `c`.
fn quadratic_coefficient(f: impl Fn(f64) -> f64) -> f64 {
    let n = 201;
    let mut s = [0.0f64; 5];
    let mut t = [0.0f64; 3];
    for i in 0..n {
        let x = -FIT_HALF_WIDTH + 2.0 * FIT_HALF_WIDTH * i as f64 / (n - 1) as f64;
        let y = f(x);
        let mut p = 1.0;
        for k in 0..5 {
            s[k] += p;
            if k < 3 {
                t[k] += p * y;
            }
            p *= x;
        }
    }
    let m = [[s[0], s[1], s[2]], [s[1], s[2], s[3]], [s[2], s[3], s[4]]];
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let mut mc = m;
    for r in 0..3 {
        mc[r][2] = t[r];
    }
    det(mc) / det(m)
}

fn two_level_spec(params: SchemeParams) -> SweepSpec {
    SweepSpec {
        params,
        grid: two_level_grid(),
        quantities: vec![Quantity::Fisher, Quantity::Qfi],
        format: Format::Csv,
        out: None,
    }
}

fn cpt_spec(gamma2: f64, basis: CptBasis) -> SweepSpec {
    SweepSpec {
        params: SchemeParams::Cpt {
            gamma2,
            gamma_star: GAMMA_STAR,
            gamma_p: GAMMA_P,
            basis,
        },
        grid: cpt_grid(),
        quantities: vec![Quantity::Fisher, Quantity::Qfi],
        format: Format::Csv,
        out: None,
    }
}

fn all_cpt_bases() -> Vec<CptBasis> {
    let mut b = vec![CptBasis::Coupled, CptBasis::Energy];
    b.extend(Level::all().map(CptBasis::Single));
    b
}

fn c1_rabi_resonance() -> Verdict {
    let p = rabi::excited_prob(1.0, 0.0);
    let mut worst = 0.0f64;
    for omega0 in [1.0, 0.3, 2.5] {
        let d = rabi::outcomes(omega0, 0.0).unwrap();
        let curv = d.curvatures().unwrap()[GROUND];
        let fi = fisher_binary(
            d.probs()[GROUND],
            d.dprobs()[GROUND],
            DEFAULT_FLOOR,
            Some(curv),
        )
        .unwrap();
        let expected = 4.0 / (omega0 * omega0);
        worst = worst.max((fi.value - expected).abs() * omega0 * omega0);
        worst = worst
            .max((rabi::fisher(omega0, 0.0).unwrap().value - expected).abs() * omega0 * omega0);
    }
    verdict(
        (p - 1.0).abs() <= PROB_TOL && worst <= FISHER_RESONANCE_TOL,
        format!("p_e = {p:.15}, max |F - 4/omega0^2|*omega0^2 = {worst:.2e}"),
    )
}

fn c2_rabi_zero() -> Verdict {
    let a = rabi::excited_prob(1.0, 3f64.sqrt());
    let b = rabi::excited_prob(2.0, 2.0 * 3f64.sqrt());
    let amp = rabi::state(&PulseParams::pi_pulse(1.0, 3f64.sqrt(), 0.0).unwrap())
        .get(0)
        .norm_sqr();
    let worst = a.abs().max(b.abs()).max(amp);
    verdict(
        worst <= PROB_TOL,
        format!("p_e(sqrt3 omega0) = {worst:.2e}"),
    )
}

fn c3_rabi_curvature() -> Verdict {
    let fit = quadratic_coefficient(|x| rabi::fisher(1.0, x).unwrap().value);
    let expected = -rabi::CURVATURE;
    let r = rel(fit, expected);
    verdict(
        r <= CURVATURE_REL_TOL,
        format!("fit {fit:.6}, expected {expected:.6}, rel err {r:.2e}"),
    )
}

fn c4_ramsey_reduction() -> Verdict {
    let worst = two_level_grid()
        .points()
        .into_iter()
        .map(|x| (ramsey::excited_prob(1.0, x, 0.0).unwrap() - rabi::excited_prob(1.0, x)).abs())
        .fold(0.0, f64::max);
    verdict(
        worst <= PROB_TOL,
        format!("max |p_ramsey(T=0) - p_rabi| = {worst:.2e} over 2001 points"),
    )
}

fn c5_resonance_ratio() -> Verdict {
    let rabi_fi = rabi::fisher(1.0, 0.0).unwrap().value;
    let mut worst = 0.0f64;
    for kappa in [1.0, 5.0, 10.0] {
        let r = RamseyParams::standard(1.0, 0.0, kappa, 0.0).unwrap();
        let ratio = ramsey::fisher(&r).unwrap().value / rabi_fi;
        let gain = 1.0 + PI * kappa / 4.0;
        worst = worst.max(rel(ratio, gain * gain));
    }
    verdict(
        worst <= RATIO_REL_TOL,
        format!("max rel err of F_ramsey/F_rabi vs (1+pi kappa/4)^2 = {worst:.2e}"),
    )
}

fn c6_ramsey_curvature() -> Verdict {
    let kappa = 5.0;
    let fit = quadratic_coefficient(|x| {
        let r = RamseyParams::standard(1.0, x, kappa, 0.0).unwrap();
        ramsey::fisher(&r).unwrap().value
    });
    let expected = -ramsey::curvature(kappa);
    let r = rel(fit, expected);
    verdict(
        r <= CURVATURE_REL_TOL,
        format!("kappa 5: fit {fit:.6}, expected {expected:.6}, rel err {r:.2e}"),
    )
}

fn c7_crb_hierarchy() -> Verdict {
    let mut specs = vec![
        two_level_spec(SchemeParams::Rabi {
            omega0: 1.0,
            phi: 0.0,
        }),
        two_level_spec(SchemeParams::Ramsey {
            omega0: 1.0,
            kappa: 5.0,
            phi: 0.0,
        }),
        two_level_spec(SchemeParams::Ramsey {
            omega0: 1.0,
            kappa: 10.0,
            phi: 0.0,
        }),
    ];
    for gamma2 in [0.0, TYPICAL_GAMMA2] {
        specs.extend(all_cpt_bases().into_iter().map(|b| cpt_spec(gamma2, b)));
    }
    let mut points = 0;
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for spec in &specs {
        let t = run_sweep(spec).unwrap();
        for row in &t.rows {
            let (fi, q) = (row[1], row[2]);
            points += 1;
            let excess = fi - q - CRB_SLACK * (1.0 + q);
            worst = worst.max(fi - q);
            if excess > 0.0 {
                violations += 1;
            }
        }
    }
    verdict(
        violations == 0,
        format!(
            "{points} points over {} sweeps, {violations} violations, max(F - Q) = {worst:.2e}",
            specs.len()
        ),
    )
}

fn c8_resonance_optimality() -> Verdict {
    let mut cases = vec![(
        "rabi",
        rabi::fisher(1.0, 0.0).unwrap().value,
        rabi::qfi(1.0, 0.0).unwrap(),
    )];
    for kappa in [1.0, 5.0, 10.0] {
        let r = RamseyParams::standard(1.0, 0.0, kappa, 0.0).unwrap();
        cases.push((
            "ramsey",
            ramsey::fisher(&r).unwrap().value,
            ramsey::qfi(&r).unwrap(),
        ));
    }
    let p = cpt_at(0.0, 0.0);
    cases.push((
        "cpt",
        cpt::fisher_coupled(&p).unwrap().value,
        cpt::qfi(&p).unwrap(),
    ));
    let worst = cases.iter().map(|&(_, f, q)| rel(f, q)).fold(0.0, f64::max);
    let cpt_detail = cases
        .last()
        .map(|&(_, f, q)| format!("cpt F {f:.6e} Q {q:.6e}"))
        .unwrap();
    verdict(
        worst <= OPTIMALITY_REL_TOL,
        format!("max |F-Q|/Q = {worst:.2e}; {cpt_detail}"),
    )
}

fn c9_cpt_dip() -> Verdict {
    let mut failures = Vec::new();
    let side = 0.2;
    let values = |p: &CptParams| -> Vec<(String, f64)> {
        let mut v = vec![
            ("coupled".to_string(), cpt::fisher_coupled(p).unwrap().value),
            ("energy".to_string(), cpt::fisher_energy(p).unwrap().value),
            ("qfi".to_string(), cpt::qfi(p).unwrap()),
        ];
        v.extend(Level::all().map(|l| {
            (
                format!("single:{l}"),
                cpt::fisher_single(p, l).unwrap().value,
            )
        }));
        v
    };
    let centre = values(&cpt_at(TYPICAL_GAMMA2, 0.0));
    for x in [-side, side] {
        for ((name, c), (_, s)) in centre.iter().zip(values(&cpt_at(TYPICAL_GAMMA2, x))) {
            let dips = *c < s;
            if !dips {
                failures.push(format!("{name} at x={x}"));
            }
        }
    }
    let grid = cpt_grid();
    let fi: Vec<f64> = grid
        .points()
        .iter()
        .map(|&x| cpt::fisher_coupled(&cpt_at(0.0, x)).unwrap().value)
        .collect();
    let argmax = (0..fi.len())
        .max_by(|&a, &b| fi[a].total_cmp(&fi[b]))
        .unwrap();
    if grid.point(argmax) != 0.0 {
        failures.push(format!("gamma2=0 maximum at x={}", grid.point(argmax)));
    }
    verdict(
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "{} measures dip at resonance; gamma2=0 coupled FI peaks at x=0",
                centre.len()
            )
        } else {
            format!("not satisfied: {}", failures.join(", "))
        },
    )
}

fn eigen_grid() -> Vec<CptParams> {
    let mut out = Vec::new();
    for i in 0..5 {
        let gamma2 = 10f64.powf(1.0 + i as f64);
        for j in 0..5 {
            let gamma_p = 10f64.powf(2.0 + 0.75 * j as f64);
            let width = gamma2 + 2.0 * gamma_p;
            for k in 0..21 {
                let x = -2.0 + 0.2 * k as f64;
                out.push(CptParams::new(gamma2, GAMMA_STAR, gamma_p, x * width).unwrap());
            }
        }
    }
    out
}

fn c10_cpt_eigensystem() -> Verdict {
    let grid = eigen_grid();
    let mut worst_value = 0.0f64;
    let mut worst_vector = 0.0f64;
    let mut vector_checks = 0;
    for p in &grid {
        let numeric = eig_hermitian(&cpt::steady_state(p).unwrap().rho).unwrap();
        let closed = cpt::eigensystem(p);
        for k in 0..3 {
            worst_value = worst_value.max((numeric.eigenvalues[k] - closed.eigenvalues[k]).abs());
        }
        let r = cpt::closed_form_eigenvalues(p);
        let vectors = cpt::closed_form_eigenvectors(p);
        for (m, v) in vectors.iter().enumerate() {
            let gap = (0..3)
                .filter(|&n| n != m)
                .map(|n| (r[n] - r[m]).abs())
                .fold(f64::INFINITY, f64::min);
            if gap <= 1e-8 {
                continue;
            }
            let k = (0..3).min_by(|&a, &b| {
                (numeric.eigenvalues[a] - r[m])
                    .abs()
                    .total_cmp(&(numeric.eigenvalues[b] - r[m]).abs())
            });
            let overlap = inner(&numeric.eigenvectors[k.unwrap()], v).unwrap().norm();
            worst_vector = worst_vector.max((overlap - 1.0).abs());
            vector_checks += 1;
        }
        if vectors[2] != cpt::level(3) {
            worst_vector = f64::INFINITY;
        }
    }
    verdict(
        worst_value <= EIGEN_TOL && worst_vector <= EIGEN_TOL,
        format!(
            "{} parameter sets: max eigenvalue err {worst_value:.2e}, max 1-|overlap| {worst_vector:.2e} ({vector_checks} vectors)",
            grid.len()
        ),
    )
}

fn c11_dark_state_algebra() -> Verdict {
    let mut worst_nc = 0.0f64;
    let mut worst_c = 0.0f64;
    for &(w1, w2, w3, omega0) in &[
        (0.0, 0.0, 0.0, 1.0),
        (-0.3, 0.4, 7.0, 2.5),
        (1e3, 1.2e3, 5e5, 1.4e5),
    ] {
        let h = cpt::hamiltonian(w1, w2, w3, omega0, omega0);
        let three = cpt::level(3);
        let nc = h.expectation(&three, &cpt::uncoupled_state()).unwrap();
        let c = h.expectation(&three, &cpt::coupled_state()).unwrap();
        worst_nc = worst_nc.max(nc.norm() / omega0);
        worst_c = worst_c.max((c - C64::new(omega0 / 2f64.sqrt(), 0.0)).norm() / omega0);
    }
    let rounding = 4.0 * f64::EPSILON;
    verdict(
        worst_nc <= rounding && worst_c <= rounding,
        format!(
            "|<3|H|NC>|/omega0 = {worst_nc:.1e}, |<3|H|C> - omega0/sqrt2|/omega0 = {worst_c:.1e}"
        ),
    )
}

fn c12_oracle_equivalence() -> Verdict {
    let mut params: Vec<CptParams> = Vec::new();
    for gamma2 in [0.0, TYPICAL_GAMMA2] {
        params.extend(cpt_grid().points().into_iter().map(|x| cpt_at(gamma2, x)));
    }
    params.extend(eigen_grid());
    let mut worst_sld = 0.0f64;
    for p in &params {
        let pd = cpt::density(p).unwrap();
        let a = estimation::qfi(&pd).unwrap();
        let b = estimation::qfi_from_sld(&pd).unwrap();
        worst_sld = worst_sld.max((a - b).abs() / a.abs().max(f64::MIN_POSITIVE));
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst_pure = 0.0f64;
    for i in 0..100 {
        let omega0 = rng.gen_range(0.5..2.0);
        let delta = rng.gen_range(-10.0..10.0) * omega0;
        let phi = rng.gen_range(-PI..PI);
        let (psi, dpsi) = if i % 2 == 0 {
            let p = PulseParams::pi_pulse(omega0, delta, phi).unwrap();
            (rabi::state(&p), rabi::state_derivative(&p))
        } else {
            let r = RamseyParams::standard(omega0, delta, rng.gen_range(0.0..12.0), phi).unwrap();
            (ramsey::state(&r), ramsey::state_derivative(&r))
        };
        let pure = estimation::qfi_pure(&psi, &dpsi).unwrap();
        let general = estimation::qfi(&ParamDensity::pure(&psi, &dpsi).unwrap()).unwrap();
        worst_pure = worst_pure.max(rel(general, pure));
    }
    verdict(
        worst_sld <= ORACLE_REL_TOL && worst_pure <= ORACLE_REL_TOL,
        format!(
            "{} CPT points: max rel |Q - Tr(rho L^2)| = {worst_sld:.2e}; 100 pure states: max rel = {worst_pure:.2e}",
            params.len()
        ),
    )
}

#[derive(Default)]
struct DerivativeAudit {
    checked: usize,
    worst: f64,
    worst_at: String,
}

impl DerivativeAudit {
    fn compare(&mut self, analytic: C64, numeric: C64, what: &dyn Fn() -> String) {
        let size = analytic.norm();
        if size <= DERIVATIVE_FLOOR {
            return;
        }
        self.checked += 1;
        let r = (analytic - numeric).norm() / size;
        if r > self.worst {
            self.worst = r;
            self.worst_at = what();
        }
    }

    fn real(&mut self, analytic: f64, numeric: f64, what: &dyn Fn() -> String) {
        self.compare(C64::new(analytic, 0.0), C64::new(numeric, 0.0), what);
    }

    fn vector(
        &mut self,
        analytic: &ComplexVector,
        numeric: &ComplexVector,
        what: &dyn Fn() -> String,
    ) {
        for k in 0..analytic.dim() {
            self.compare(analytic.get(k), numeric.get(k), what);
        }
    }

    fn matrix(
        &mut self,
        analytic: &ComplexMatrix,
        numeric: &ComplexMatrix,
        what: &dyn Fn() -> String,
    ) {
        for (a, n) in analytic.entries().zip(numeric.entries()) {
            self.compare(a, n, what);
        }
    }
}

/// Central-difference step balancing truncation `h²M₃/6` against rounding `ε/h`
/// for a function of order one whose third derivative is bounded by `M₃ = ℓ⁻³`:
/// `h = (3ε)^{1/3} ℓ`. `ℓ` is the detuning scale over which the function varies; a
/// step proportional to `|x|` over-smooths the fast Ramsey fringes far from resonance.
fn step(scale: f64) -> f64 {
    (3.0 * f64::EPSILON).cbrt() * scale
}

/// `p_k`, or `p_k − 1 = −Σ_{j≠k} p_j` when `shifted`. The shifted form has the same
/// derivative and keeps full relative precision when `p_k` is close to one.
fn outcome_value(probs: &[f64], k: usize, shifted: bool) -> f64 {
    if shifted {
        -probs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, p)| p)
            .sum::<f64>()
    } else {
        probs[k]
    }
}

fn c13_derivative_oracle() -> Verdict {
    let mut audit = DerivativeAudit::default();
    let rabi_h = step(1.0);
    for x in two_level_grid().points() {
        let p = PulseParams::pi_pulse(1.0, x, 0.0).unwrap();
        let fd: ComplexVector =
            central_diff(|y| rabi::state(&PulseParams { delta: y, ..p }), x, rabi_h).unwrap();
        audit.vector(&rabi::state_derivative(&p), &fd, &|| {
            format!("rabi state x={x}")
        });
        let d = rabi::outcomes(1.0, x).unwrap();
        for k in 0..2 {
            let shifted = d.probs()[k] > 0.5;
            let fd: f64 = central_diff(
                |y| outcome_value(rabi::outcomes(1.0, y).unwrap().probs(), k, shifted),
                x,
                rabi_h,
            )
            .unwrap();
            audit.real(d.dprobs()[k], fd, &|| format!("rabi p[{k}] x={x}"));
        }
        for kappa in [5.0, 10.0] {
            let r = RamseyParams::standard(1.0, x, kappa, 0.0).unwrap();
            // fringes oscillate as cos(xT/2) with T = κπ/2
            let h = step(1.0 / (1.0 + 0.5 * r.big_t));
            let at = |y: f64| RamseyParams { delta: y, ..r };
            let fd: ComplexVector = central_diff(|y| ramsey::state(&at(y)), x, h).unwrap();
            audit.vector(&ramsey::state_derivative(&r), &fd, &|| {
                format!("ramsey k={kappa} state x={x}")
            });
            let d = ramsey::outcomes(&r).unwrap();
            for k in 0..2 {
                let shifted = d.probs()[k] > 0.5;
                let fd: f64 = central_diff(
                    |y| outcome_value(ramsey::outcomes(&at(y)).unwrap().probs(), k, shifted),
                    x,
                    h,
                )
                .unwrap();
                audit.real(d.dprobs()[k], fd, &|| {
                    format!("ramsey k={kappa} p[{k}] x={x}")
                });
            }
        }
    }
    // CPT in the sweep variable x = Δω/(2Γp): ∂x = 2Γp ∂Δω = −2Γp ∂ωA.
    let s = 2.0 * GAMMA_P;
    for gamma2 in [0.0, TYPICAL_GAMMA2] {
        // resonance half-width in x
        let h = step((gamma2 + s) / s);
        for x in cpt_grid().points() {
            let p = cpt_at(gamma2, x);
            let fd: ComplexMatrix =
                central_diff(|y| cpt::steady_state(&cpt_at(gamma2, y)).unwrap().rho, x, h).unwrap();
            audit.matrix(&(cpt::steady_state_derivative(&p) * -s), &fd, &|| {
                format!("cpt rho g2={gamma2} x={x}")
            });
            let fd: ComplexMatrix = central_diff(
                |y| cpt::steady_state_derivative(&cpt_at(gamma2, y)) * -s,
                x,
                h,
            )
            .unwrap();
            audit.matrix(
                &(cpt::steady_state_second_derivative(&p) * (s * s)),
                &fd,
                &|| format!("cpt d2rho g2={gamma2} x={x}"),
            );
            for basis in [cpt::Basis::Coupled, cpt::Basis::Energy] {
                let d = cpt::outcomes(&p, basis).unwrap();
                for k in 0..3 {
                    let shifted = d.probs()[k] > 0.5;
                    let value = |y: f64| {
                        outcome_value(
                            cpt::outcomes(&cpt_at(gamma2, y), basis).unwrap().probs(),
                            k,
                            shifted,
                        )
                    };
                    let fd: f64 = central_diff(value, x, h).unwrap();
                    audit.real(-s * d.dprobs()[k], fd, &|| {
                        format!("cpt {basis:?} p[{k}] g2={gamma2} x={x}")
                    });
                }
            }
        }
    }
    verdict(
        audit.worst <= DERIVATIVE_REL_TOL,
        format!(
            "{} derivatives checked, max rel err {:.2e} ({})",
            audit.checked, audit.worst, audit.worst_at
        ),
    )
}

fn c14_closed_form_audit() -> Verdict {
    let kappa = 5.0;
    let big_t = kappa * PI / 2.0;
    let mut worst = [0.0f64; 2];
    for x in two_level_grid().points() {
        let composed = ramsey::excited_prob(1.0, x, big_t).unwrap();
        for (i, phase) in [FreePhase::WithPi, FreePhase::Printed]
            .into_iter()
            .enumerate()
        {
            let cf = ramsey::closed_form_excited_prob(1.0, x, kappa, phase);
            worst[i] = worst[i].max((cf - composed).abs());
        }
    }
    let with_pi = worst[0] <= CLOSED_FORM_TOL;
    let printed = worst[1] <= CLOSED_FORM_TOL;
    let matched = match (with_pi, printed) {
        (true, true) => "both variants",
        (true, false) => "argument pi*kappa*x/4 (with pi)",
        (false, true) => "argument kappa*x/4 (as printed)",
        (false, false) => "neither variant",
    };
    verdict(
        with_pi || printed,
        format!(
            "matches composition: {matched}; max err with pi {:.2e}, without {:.2e}",
            worst[0], worst[1]
        ),
    )
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

fn c15_cli_golden() -> Verdict {
    let three = "--quantities=prob,fisher,qfi";
    let cases: [(&str, Vec<&str>); 5] = [
        ("rabi.csv", vec!["rabi", "--grid=-10:10:2001", three]),
        (
            "ramsey_kappa5.csv",
            vec!["ramsey", "--kappa=5", "--grid=-10:10:2001", three],
        ),
        (
            "ramsey_kappa10.csv",
            vec!["ramsey", "--kappa=10", "--grid=-10:10:2001", three],
        ),
        (
            "cpt_coupled.csv",
            vec![
                "cpt",
                "--gamma2=400",
                "--gamma-p=1e4",
                "--basis=coupled",
                "--grid=-2:2:401",
                three,
            ],
        ),
        (
            "cpt_energy.csv",
            vec![
                "cpt",
                "--gamma2=400",
                "--gamma-p=1e4",
                "--basis=energy",
                "--grid=-2:2:401",
                three,
            ],
        ),
    ];
    let mut mismatched = Vec::new();
    for (file, args) in &cases {
        let expected = std::fs::read(golden_dir().join(file)).unwrap();
        let out = Command::new(env!("CARGO_BIN_EXE_clock-sweep"))
            .args(args)
            .output()
            .unwrap();
        if !out.status.success() || out.stdout != expected {
            mismatched.push(*file);
        }
    }
    verdict(
        mismatched.is_empty(),
        if mismatched.is_empty() {
            format!("{} golden CSVs reproduced byte-for-byte", cases.len())
        } else {
            format!("differs: {}", mismatched.join(", "))
        },
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 15] = [
        (
            "Rabi resonance probability and Fisher limit",
            c1_rabi_resonance,
        ),
        ("Rabi first zero at sqrt(3) omega0", c2_rabi_zero),
        ("Rabi Fisher curvature near resonance", c3_rabi_curvature),
        ("Ramsey with T=0 reduces to Rabi", c4_ramsey_reduction),
        ("Ramsey/Rabi resonance Fisher ratio", c5_resonance_ratio),
        ("Ramsey Fisher curvature (kappa 5)", c6_ramsey_curvature),
        (
            "Cramer-Rao hierarchy F <= Q on all sweeps",
            c7_crb_hierarchy,
        ),
        ("Resonance optimality F = Q", c8_resonance_optimality),
        ("CPT resonance dip and gamma2=0 peak", c9_cpt_dip),
        ("CPT closed-form eigensystem", c10_cpt_eigensystem),
        ("Dark-state matrix elements", c11_dark_state_algebra),
        ("QFI oracle equivalence", c12_oracle_equivalence),
        (
            "Analytic derivatives vs central differences",
            c13_derivative_oracle,
        ),
        ("Ramsey closed-form audit", c14_closed_form_audit),
        ("CLI golden files", c15_cli_golden),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| verdict(false, "panicked"));
        if !v.pass {
            failed += 1;
        }
        println!(
            "[{}] {:>2}. {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
