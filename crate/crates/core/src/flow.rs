//! The coupled squeezing-flow system and its perturbation series.
//!
//! In similarity form the momentum, energy and concentration equations read
//!
//! ```text
//! f'''' − S(ηf''' + 3f'' − 2ff''') − M²f'' = 0
//! θ''  + Pr·S(2fθ' − ηθ') + Pr·Nb·θ'φ' + Pr·Nt·θ'² = 0
//! φ''  + Le·S(2fφ' − ηφ') + (Nt/Nb)·θ'' = 0
//! ```
//!
//! with `f(0) = A, f'(0) = 0, f(1) = 1/2, f'(1) = 0`, `θ(0) = φ(0) = 1` and
//! `θ(1) = φ(1) = 0`. The linear parts `f''''`, `θ''`, `φ''` are inverted
//! exactly at each order; everything else is moved to the right-hand side
//! and evaluated on the already-completed lower orders. Collecting powers of
//! the embedding parameter gives, for k ≥ 1,
//!
//! ```text
//! f_k''''  =  S(η f_{k−1}''' + 3 f_{k−1}'') − 2S Σ f_i f_j''' + M² f_{k−1}''
//! θ_k''    = −Pr·S(2 Σ f_i θ_j' − η θ_{k−1}') − Pr·Nb Σ θ_i' φ_j' − Pr·Nt Σ θ_i' θ_j'
//! φ_k''    = −Le·S(2 Σ f_i φ_j' − η φ_{k−1}') − (Nt/Nb) θ_{k−1}''
//! ```
//!
//! where each `Σ` runs over `i + j = k − 1`. Order 0 carries the full
//! boundary conditions and every later order the homogeneous ones.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hpm::{residual_norm, solve_quartic_term, solve_second_term, FourPointBc, TwoPointBc};
use crate::poly::Polynomial;

/// Highest perturbation order the solver will build.
pub const MAX_ORDER: usize = 10;

/// Tolerance on the coefficientwise ODE residual of every stored term,
/// relative to the magnitude of its right-hand side.
pub const TERM_RESIDUAL_TOL: f64 = 1e-9;

/// Sample count used when measuring a term's size on `[0, 1]`.
const TERM_SIZE_SAMPLES: usize = 200;

/// Nondimensional parameters of one crisp problem instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowParams {
    /// Squeeze number.
    #[serde(rename = "S")]
    pub s: f64,
    /// Suction (A > 0) or injection (A < 0) parameter; also `f(0)`.
    #[serde(rename = "A")]
    pub a: f64,
    /// Hartmann number.
    #[serde(rename = "M")]
    pub m: f64,
    /// Prandtl number.
    #[serde(rename = "Pr")]
    pub pr: f64,
    /// Brownian motion parameter.
    #[serde(rename = "Nb")]
    pub nb: f64,
    /// Thermophoresis parameter.
    #[serde(rename = "Nt")]
    pub nt: f64,
    /// Lewis number.
    #[serde(rename = "Le")]
    pub le: f64,
}

impl Default for FlowParams {
    fn default() -> Self {
        Self {
            s: 1.0,
            a: 1.0,
            m: 1.0,
            pr: 1.0,
            nb: 0.1,
            nt: 0.1,
            le: 1.0,
        }
    }
}

impl FlowParams {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("S", self.s),
            ("A", self.a),
            ("M", self.m),
            ("Pr", self.pr),
            ("Nb", self.nb),
            ("Nt", self.nt),
            ("Le", self.le),
        ];
        for (name, value) in named {
            if !value.is_finite() {
                return Err(Error::InvalidParams(format!("{name} = {value} is not finite")));
            }
        }
        Ok(())
    }

    fn require_nb(&self) -> Result<()> {
        if self.nb == 0.0 {
            Err(Error::ZeroBrownian)
        } else {
            Ok(())
        }
    }
}

/// Truncation control for [`expand_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HpmOptions {
    /// Highest order computed; at most [`MAX_ORDER`].
    pub max_order: usize,
    /// Stop once the newest term triple has max-abs value on `[0, 1]` below
    /// this. `None` always runs to `max_order`.
    pub auto_tol: Option<f64>,
}

impl Default for HpmOptions {
    fn default() -> Self {
        Self {
            max_order: 3,
            auto_tol: Some(1e-8),
        }
    }
}

impl HpmOptions {
    pub fn fixed(order: usize) -> Self {
        Self {
            max_order: order,
            auto_tol: None,
        }
    }
}

/// Perturbation terms for `f`, `θ` and `φ`, orders `0..=order`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HpmSolution {
    params: FlowParams,
    f_terms: Vec<Polynomial>,
    theta_terms: Vec<Polynomial>,
    phi_terms: Vec<Polynomial>,
    auto_stopped: bool,
}

impl HpmSolution {
    pub fn params(&self) -> &FlowParams {
        &self.params
    }

    /// Highest order held.
    pub fn order(&self) -> usize {
        self.f_terms.len() - 1
    }

    /// True when the auto-stop tolerance ended the expansion before the
    /// requested maximum order.
    pub fn auto_stopped(&self) -> bool {
        self.auto_stopped
    }

    pub fn f_terms(&self) -> &[Polynomial] {
        &self.f_terms
    }

    pub fn theta_terms(&self) -> &[Polynomial] {
        &self.theta_terms
    }

    pub fn phi_terms(&self) -> &[Polynomial] {
        &self.phi_terms
    }

    /// Solution truncated to orders `0..=order` (clamped to what is held).
    pub fn truncated(&self, order: usize) -> HpmSolution {
        let n = order.min(self.order()) + 1;
        HpmSolution {
            params: self.params,
            f_terms: self.f_terms[..n].to_vec(),
            theta_terms: self.theta_terms[..n].to_vec(),
            phi_terms: self.phi_terms[..n].to_vec(),
            auto_stopped: false,
        }
    }

    pub fn f(&self) -> Polynomial {
        partial_sum(&self.f_terms)
    }

    pub fn theta(&self) -> Polynomial {
        partial_sum(&self.theta_terms)
    }

    pub fn phi(&self) -> Polynomial {
        partial_sum(&self.phi_terms)
    }
}

fn partial_sum(terms: &[Polynomial]) -> Polynomial {
    terms
        .iter()
        .fold(Polynomial::zero(), |acc, t| &acc + t)
}

/// `Σ_{i+j=k−1} a_i·b_j`.
fn cauchy(k: usize, a: &[Polynomial], b: &[Polynomial]) -> Polynomial {
    (0..k).fold(Polynomial::zero(), |acc, i| &acc + &(&a[i] * &b[k - 1 - i]))
}

/// Profiles of the partial sums on an η grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileTable {
    pub eta: Vec<f64>,
    pub f: Vec<f64>,
    pub fprime: Vec<f64>,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
}

/// `n` equally spaced points from 0 to 1 inclusive.
pub fn uniform_grid(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 points, got {n}")));
    }
    let last = (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { 1.0 } else { i as f64 / last })
        .collect())
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if let Some(&x) = grid.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::InvalidGrid(format!("point {x} outside [0, 1]")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("points must be strictly increasing".into()));
    }
    Ok(())
}

/// Order-0 triple: the linear parts solved with the full boundary conditions.
///
/// `f₀ = (2A − 1)η³ + (3/2 − 3A)η² + A`, `θ₀ = φ₀ = 1 − η`.
pub fn order0(params: &FlowParams) -> (Polynomial, Polynomial, Polynomial) {
    let zero = Polynomial::zero();
    let f0 = solve_quartic_term(
        &zero,
        FourPointBc {
            value0: params.a,
            slope0: 0.0,
            value1: 0.5,
            slope1: 0.0,
        },
    );
    let unit_drop = TwoPointBc {
        value0: 1.0,
        value1: 0.0,
    };
    let theta0 = solve_second_term(&zero, unit_drop);
    let phi0 = solve_second_term(&zero, unit_drop);
    (f0, theta0, phi0)
}

/// Right-hand side of `f_k'''' = rhs` given `prior_f[0..k]`.
pub fn rhs_f(k: usize, prior_f: &[Polynomial], params: &FlowParams) -> Polynomial {
    assert!(k >= 1 && prior_f.len() >= k, "rhs_f needs orders 0..{k}");
    let last = &prior_f[k - 1];
    let d2 = last.derivative(2);
    let d3 = last.derivative(3);
    let third: Vec<Polynomial> = prior_f[..k].iter().map(|p| p.derivative(3)).collect();

    let linear = Polynomial::linear_combination(&(&Polynomial::eta() * &d3), 1.0, &d2, 3.0);
    let convective = cauchy(k, prior_f, &third);
    let squeeze = Polynomial::linear_combination(&linear, params.s, &convective, -2.0 * params.s);
    Polynomial::linear_combination(&squeeze, 1.0, &d2, params.m * params.m)
}

/// Right-hand side of `θ_k'' = rhs` given orders `0..k` of all three fields.
pub fn rhs_theta(
    k: usize,
    prior_f: &[Polynomial],
    prior_theta: &[Polynomial],
    prior_phi: &[Polynomial],
    params: &FlowParams,
) -> Polynomial {
    assert!(k >= 1, "rhs_theta needs k >= 1");
    let dtheta: Vec<Polynomial> = prior_theta[..k].iter().map(|p| p.derivative(1)).collect();
    let dphi: Vec<Polynomial> = prior_phi[..k].iter().map(|p| p.derivative(1)).collect();
    let pr = params.pr;

    let convection = Polynomial::linear_combination(
        &cauchy(k, prior_f, &dtheta),
        2.0,
        &(&Polynomial::eta() * &dtheta[k - 1]),
        -1.0,
    );
    let brownian = cauchy(k, &dtheta, &dphi);
    let thermophoresis = cauchy(k, &dtheta, &dtheta);

    let out = Polynomial::linear_combination(&convection, -pr * params.s, &brownian, -pr * params.nb);
    Polynomial::linear_combination(&out, 1.0, &thermophoresis, -pr * params.nt)
}

/// Right-hand side of `φ_k'' = rhs`. Needs `Nb ≠ 0`.
pub fn rhs_phi(
    k: usize,
    prior_f: &[Polynomial],
    prior_theta: &[Polynomial],
    prior_phi: &[Polynomial],
    params: &FlowParams,
) -> Result<Polynomial> {
    assert!(k >= 1, "rhs_phi needs k >= 1");
    params.require_nb()?;
    let dphi: Vec<Polynomial> = prior_phi[..k].iter().map(|p| p.derivative(1)).collect();

    let convection = Polynomial::linear_combination(
        &cauchy(k, prior_f, &dphi),
        2.0,
        &(&Polynomial::eta() * &dphi[k - 1]),
        -1.0,
    );
    let thermal = prior_theta[k - 1].derivative(2);
    Ok(Polynomial::linear_combination(
        &convection,
        -params.le * params.s,
        &thermal,
        -params.nt / params.nb,
    ))
}

fn checked_term(
    field: &'static str,
    order: usize,
    term: Polynomial,
    derivative: usize,
    rhs: &Polynomial,
) -> Result<Polynomial> {
    let residual = residual_norm(&term, derivative, rhs);
    if !(residual <= TERM_RESIDUAL_TOL * rhs.max_abs_coeff().max(1.0)) {
        return Err(Error::ResidualCheck {
            field,
            order,
            residual,
        });
    }
    Ok(term)
}

/// Builds exactly `order` correction orders on top of order 0.
pub fn expand(params: &FlowParams, order: usize) -> Result<HpmSolution> {
    expand_with(params, &HpmOptions::fixed(order))
}

/// Builds the series up to `opts.max_order`, stopping early once the newest
/// term triple drops below `opts.auto_tol` on `[0, 1]`.
pub fn expand_with(params: &FlowParams, opts: &HpmOptions) -> Result<HpmSolution> {
    params.validate()?;
    if opts.max_order > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            requested: opts.max_order,
            cap: MAX_ORDER,
        });
    }
    if opts.max_order >= 1 {
        params.require_nb()?;
    }

    let (f0, theta0, phi0) = order0(params);
    let mut f_terms = vec![f0];
    let mut theta_terms = vec![theta0];
    let mut phi_terms = vec![phi0];
    let mut auto_stopped = false;

    for k in 1..=opts.max_order {
        let rf = rhs_f(k, &f_terms, params);
        let rt = rhs_theta(k, &f_terms, &theta_terms, &phi_terms, params);
        let rp = rhs_phi(k, &f_terms, &theta_terms, &phi_terms, params)?;

        let fk = checked_term("f", k, solve_quartic_term(&rf, FourPointBc::HOMOGENEOUS), 4, &rf)?;
        let tk = checked_term("theta", k, solve_second_term(&rt, TwoPointBc::HOMOGENEOUS), 2, &rt)?;
        let pk = checked_term("phi", k, solve_second_term(&rp, TwoPointBc::HOMOGENEOUS), 2, &rp)?;

        let size = [&fk, &tk, &pk]
            .iter()
            .map(|t| t.max_abs_on_unit(TERM_SIZE_SAMPLES))
            .fold(0.0, f64::max);
        f_terms.push(fk);
        theta_terms.push(tk);
        phi_terms.push(pk);

        if let Some(tol) = opts.auto_tol {
            if size < tol {
                auto_stopped = k < opts.max_order;
                break;
            }
        }
    }

    Ok(HpmSolution {
        params: *params,
        f_terms,
        theta_terms,
        phi_terms,
        auto_stopped,
    })
}

/// Evaluates the partial sums on `grid` (strictly increasing, inside `[0, 1]`).
pub fn evaluate(sol: &HpmSolution, grid: &[f64]) -> Result<ProfileTable> {
    check_grid(grid)?;
    let f = sol.f();
    let df = f.derivative(1);
    let theta = sol.theta();
    let phi = sol.phi();
    Ok(ProfileTable {
        eta: grid.to_vec(),
        f: grid.iter().map(|&x| f.eval(x)).collect(),
        fprime: grid.iter().map(|&x| df.eval(x)).collect(),
        theta: grid.iter().map(|&x| theta.eval(x)).collect(),
        phi: grid.iter().map(|&x| phi.eval(x)).collect(),
    })
}

/// Wall heat-transfer rate `Nu = −θ'(1)` of the partial sum.
pub fn nusselt(sol: &HpmSolution) -> f64 {
    -sol.theta().derivative(1).eval(1.0)
}
