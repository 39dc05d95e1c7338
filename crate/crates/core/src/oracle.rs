//! Independent numerical reference for the boundary-value problem.
//!
//! The system is rewritten as eight first-order equations in
//! `(f, f', f'', f''', θ, θ', φ, φ')`, integrated with fixed-step classical
//! RK4 from η = 0, and the four missing initial slopes
//! `(f''(0), f'''(0), θ'(0), φ'(0))` are found by damped Newton iteration on
//! the terminal conditions `f(1) = 1/2, f'(1) = 0, θ(1) = φ(1) = 0`.
//!
//! Nothing here shares code with the series solver beyond [`FlowParams`].

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{check_grid, FlowParams, HpmOptions, HpmSolution};
use crate::poly::Polynomial;

pub const DEFAULT_STEPS: usize = 400;
const MIN_STEPS: usize = 100;

type State = [f64; 8];

/// Shooting controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootOptions {
    pub steps: usize,
    /// Max-abs terminal residual accepted as converged.
    pub tol: f64,
    pub max_iter: usize,
    /// Step halvings tried when a Newton step does not reduce the residual.
    pub max_halvings: usize,
}

impl Default for ShootOptions {
    fn default() -> Self {
        Self {
            steps: DEFAULT_STEPS,
            tol: 1e-8,
            max_iter: 50,
            max_halvings: 8,
        }
    }
}

/// Trajectory of one integration from η = 0 to η = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSolution {
    pub eta: Vec<f64>,
    pub f: Vec<f64>,
    pub fprime: Vec<f64>,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    /// `(f''(0), f'''(0), θ'(0), φ'(0))`.
    pub unknowns: [f64; 4],
    /// `(f(1) − 1/2, f'(1), θ(1), φ(1))`.
    pub terminal_residuals: [f64; 4],
    /// Full state at η = 1.
    pub terminal_state: [f64; 8],
    /// Newton iterations taken; zero for a bare integration.
    pub iterations: usize,
}

impl OracleSolution {
    pub fn nusselt(&self) -> f64 {
        -self.terminal_state[5]
    }

    pub fn max_residual(&self) -> f64 {
        max_abs(&self.terminal_residuals)
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn rhs(p: &FlowParams, eta: f64, y: &State) -> State {
    let [f, f1, f2, f3, _th, th1, _ph, ph1] = *y;
    let f4 = p.s * (eta * f3 + 3.0 * f2 - 2.0 * f * f3) + p.m * p.m * f2;
    let th2 = -p.pr * p.s * (2.0 * f * th1 - eta * th1) - p.pr * p.nb * th1 * ph1 - p.pr * p.nt * th1 * th1;
    let ph2 = -p.le * p.s * (2.0 * f * ph1 - eta * ph1) - (p.nt / p.nb) * th2;
    [f1, f2, f3, f4, th1, th2, ph1, ph2]
}

fn axpy(y: &State, h: f64, k: &State) -> State {
    std::array::from_fn(|i| y[i] + h * k[i])
}

fn rk4_step(p: &FlowParams, eta: f64, y: &State, h: f64) -> State {
    let k1 = rhs(p, eta, y);
    let k2 = rhs(p, eta + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = rhs(p, eta + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = rhs(p, eta + h, &axpy(y, h, &k3));
    std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

fn initial_state(p: &FlowParams, u: [f64; 4]) -> State {
    [p.a, 0.0, u[0], u[1], 1.0, u[2], 1.0, u[3]]
}

fn residuals(y: &State) -> [f64; 4] {
    [y[0] - 0.5, y[1], y[4], y[6]]
}

fn check_inputs(p: &FlowParams, steps: usize) -> Result<()> {
    p.validate()?;
    if p.nb == 0.0 {
        return Err(Error::ZeroBrownian);
    }
    if steps < MIN_STEPS {
        return Err(Error::InvalidParams(format!(
            "oracle needs at least {MIN_STEPS} steps, got {steps}"
        )));
    }
    Ok(())
}

/// Terminal state only; the shooting inner loop.
fn terminal(p: &FlowParams, u: [f64; 4], steps: usize) -> Result<State> {
    let h = 1.0 / steps as f64;
    let mut y = initial_state(p, u);
    for i in 0..steps {
        let eta = i as f64 * h;
        y = rk4_step(p, eta, &y, h);
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::BlowUp { eta: eta + h });
        }
    }
    Ok(y)
}

/// Integrates the initial-value problem with the given missing slopes and
/// records the trajectory at every step point.
pub fn integrate_ivp(params: &FlowParams, unknowns: [f64; 4], steps: usize) -> Result<OracleSolution> {
    check_inputs(params, steps)?;
    let h = 1.0 / steps as f64;
    let mut y = initial_state(params, unknowns);
    let mut sol = OracleSolution {
        eta: Vec::with_capacity(steps + 1),
        f: Vec::with_capacity(steps + 1),
        fprime: Vec::with_capacity(steps + 1),
        theta: Vec::with_capacity(steps + 1),
        phi: Vec::with_capacity(steps + 1),
        unknowns,
        terminal_residuals: [0.0; 4],
        terminal_state: y,
        iterations: 0,
    };
    let mut record = |eta: f64, y: &State| {
        sol.eta.push(eta);
        sol.f.push(y[0]);
        sol.fprime.push(y[1]);
        sol.theta.push(y[4]);
        sol.phi.push(y[6]);
    };
    record(0.0, &y);
    for i in 0..steps {
        let eta = i as f64 * h;
        y = rk4_step(params, eta, &y, h);
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::BlowUp { eta: eta + h });
        }
        let next = if i + 1 == steps { 1.0 } else { (i + 1) as f64 * h };
        record(next, &y);
    }
    sol.terminal_state = y;
    sol.terminal_residuals = residuals(&y);
    Ok(sol)
}

/// Shooting guess read off a series solution's derivatives at η = 0.
pub fn guess_from_hpm(sol: &HpmSolution) -> [f64; 4] {
    let f = sol.f();
    let at0 = |p: &Polynomial, k: usize| p.derivative(k).eval(0.0);
    [
        at0(&f, 2),
        at0(&f, 3),
        at0(&sol.theta(), 1),
        at0(&sol.phi(), 1),
    ]
}

/// Default guess: the order-3 series (falls back to the order-0 slopes).
pub fn default_guess(params: &FlowParams) -> [f64; 4] {
    match crate::flow::expand_with(params, &HpmOptions::default()) {
        Ok(sol) => guess_from_hpm(&sol),
        Err(_) => [3.0 - 6.0 * params.a, 6.0 * (2.0 * params.a - 1.0), -1.0, -1.0],
    }
}

/// Damped Newton shooting with a forward-difference Jacobian.
pub fn shoot(params: &FlowParams, guess: [f64; 4], opts: &ShootOptions) -> Result<OracleSolution> {
    check_inputs(params, opts.steps)?;
    let eval = |u: [f64; 4]| -> Result<[f64; 4]> { Ok(residuals(&terminal(params, u, opts.steps)?)) };

    let mut u = guess;
    let mut r = eval(u)?;
    let mut iterations = 0;
    while max_abs(&r) > opts.tol {
        if iterations == opts.max_iter {
            return Err(Error::NoConvergence {
                iterations,
                residuals: r,
            });
        }
        iterations += 1;

        let mut jac = Matrix4::<f64>::zeros();
        for j in 0..4 {
            let h = (1e-6 * u[j].abs()).max(1e-8);
            let mut up = u;
            up[j] += h;
            let rp = eval(up)?;
            for i in 0..4 {
                jac[(i, j)] = (rp[i] - r[i]) / h;
            }
        }
        let step = jac
            .lu()
            .solve(&(-Vector4::from(r)))
            .filter(|s| s.iter().all(|v| v.is_finite()))
            .ok_or(Error::SingularJacobian { unknowns: u })?;

        let norm = max_abs(&r);
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let trial: [f64; 4] = std::array::from_fn(|i| u[i] + lambda * step[i]);
            // a blown-up trial counts as "no decrease"
            if let Ok(rt) = eval(trial) {
                let better = max_abs(&rt) < norm;
                accepted = Some((trial, rt));
                if better {
                    break;
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((next_u, next_r)) => {
                u = next_u;
                r = next_r;
            }
            None => {
                return Err(Error::NoConvergence {
                    iterations,
                    residuals: r,
                })
            }
        }
    }

    let mut sol = integrate_ivp(params, u, opts.steps)?;
    sol.iterations = iterations;
    Ok(sol)
}

/// Max-abs and RMS discrepancy for one profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldError {
    pub max_abs: f64,
    pub rms: f64,
}

impl FieldError {
    fn between(a: &[f64], b: &[f64]) -> Self {
        let n = a.len().max(1) as f64;
        let (max_abs, sq) = a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold((0.0_f64, 0.0), |(m, s), d| (m.max(d), s + d * d));
        Self {
            max_abs,
            rms: (sq / n).sqrt(),
        }
    }
}

/// Series-vs-oracle discrepancies on the oracle grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub order: usize,
    pub f: FieldError,
    pub fprime: FieldError,
    pub theta: FieldError,
    pub phi: FieldError,
    /// `Nu_hpm − Nu_oracle`.
    pub nusselt_diff: f64,
}

pub fn compare(hpm: &HpmSolution, oracle: &OracleSolution) -> Result<ErrorReport> {
    check_grid(&oracle.eta)?;
    let table = crate::flow::evaluate(hpm, &oracle.eta)?;
    Ok(ErrorReport {
        order: hpm.order(),
        f: FieldError::between(&table.f, &oracle.f),
        fprime: FieldError::between(&table.fprime, &oracle.fprime),
        theta: FieldError::between(&table.theta, &oracle.theta),
        phi: FieldError::between(&table.phi, &oracle.phi),
        nusselt_diff: crate::flow::nusselt(hpm) - oracle.nusselt(),
    })
}
