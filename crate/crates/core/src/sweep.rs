//! Envelope bands over interval parameter boxes.
//!
//! Each uncertain parameter is sampled through its parametric form on an
//! equally spaced α grid (α = 0 and α = 1 always included), the full
//! Cartesian product of draws is solved, and the band is the pointwise
//! min/max of the resulting profiles.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{evaluate, expand_with, uniform_grid, FlowParams, HpmOptions, ProfileTable};
use crate::interval::Interval;

pub const DEFAULT_SPREAD: f64 = 0.05;
pub const DEFAULT_ALPHA_SAMPLES: usize = 5;
pub const DEFAULT_ETA_POINTS: usize = 101;

/// The three parameters that may carry interval uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum UncertainParam {
    S,
    A,
    M,
}

impl UncertainParam {
    pub const ALL: [UncertainParam; 3] = [UncertainParam::S, UncertainParam::A, UncertainParam::M];

    pub fn get(self, p: &FlowParams) -> f64 {
        match self {
            UncertainParam::S => p.s,
            UncertainParam::A => p.a,
            UncertainParam::M => p.m,
        }
    }

    fn set(self, p: &mut FlowParams, value: f64) {
        match self {
            UncertainParam::S => p.s = value,
            UncertainParam::A => p.a = value,
            UncertainParam::M => p.m = value,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            UncertainParam::S => "S",
            UncertainParam::A => "A",
            UncertainParam::M => "M",
        }
    }

    pub fn parse(name: &str) -> Option<UncertainParam> {
        match name.trim() {
            "S" => Some(UncertainParam::S),
            "A" => Some(UncertainParam::A),
            "M" => Some(UncertainParam::M),
            _ => None,
        }
    }
}

impl fmt::Display for UncertainParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Crisp base parameters plus optional intervals on S, A and M.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncertainSpec {
    /// Crisp values; S, A, M here are used only where no interval is set.
    pub base: FlowParams,
    pub s: Option<Interval>,
    pub a: Option<Interval>,
    pub m: Option<Interval>,
    pub alpha_samples: usize,
    pub eta_points: usize,
}

impl UncertainSpec {
    pub fn crisp(base: FlowParams) -> Self {
        Self {
            base,
            s: None,
            a: None,
            m: None,
            alpha_samples: DEFAULT_ALPHA_SAMPLES,
            eta_points: DEFAULT_ETA_POINTS,
        }
    }

    pub fn with_interval(mut self, param: UncertainParam, interval: Interval) -> Self {
        *self.slot(param) = Some(interval);
        self
    }

    /// Interval `base·(1 ± spread)` on each listed parameter.
    pub fn with_relative_spread(mut self, params: &[UncertainParam], spread: f64) -> Result<Self> {
        for &p in params {
            let iv = Interval::from_relative_spread(p.get(&self.base), spread)?;
            *self.slot(p) = Some(iv);
        }
        Ok(self)
    }

    fn slot(&mut self, param: UncertainParam) -> &mut Option<Interval> {
        match param {
            UncertainParam::S => &mut self.s,
            UncertainParam::A => &mut self.a,
            UncertainParam::M => &mut self.m,
        }
    }

    pub fn interval(&self, param: UncertainParam) -> Option<Interval> {
        match param {
            UncertainParam::S => self.s,
            UncertainParam::A => self.a,
            UncertainParam::M => self.m,
        }
    }

    /// Uncertain parameters in S, A, M order.
    pub fn uncertain(&self) -> Vec<(UncertainParam, Interval)> {
        UncertainParam::ALL
            .iter()
            .filter_map(|&p| self.interval(p).map(|iv| (p, iv)))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.alpha_samples < 2 {
            return Err(Error::InvalidSpec(format!(
                "alpha_samples must be >= 2, got {}",
                self.alpha_samples
            )));
        }
        if self.eta_points < 2 {
            return Err(Error::InvalidSpec(format!(
                "eta_points must be >= 2, got {}",
                self.eta_points
            )));
        }
        Ok(())
    }
}

/// Equally spaced α values on `[0, 1]`, endpoints exact.
fn alpha_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i == n - 1 { 1.0 } else { i as f64 / (n - 1) as f64 })
        .collect()
}

/// Cartesian grid of parameter draws; a crisp spec yields one draw.
pub fn sample_box(spec: &UncertainSpec) -> Result<Vec<FlowParams>> {
    spec.validate()?;
    let alphas = alpha_grid(spec.alpha_samples);
    let mut draws = vec![spec.base];
    for (param, iv) in spec.uncertain() {
        let values = alphas
            .iter()
            .map(|&alpha| iv.param_form(alpha))
            .collect::<Result<Vec<_>>>()?;
        draws = draws
            .iter()
            .flat_map(|d| {
                values.iter().map(move |&v| {
                    let mut next = *d;
                    param.set(&mut next, v);
                    next
                })
            })
            .collect();
    }
    Ok(draws)
}

/// Profile fields a band can be built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    F,
    Fprime,
    Theta,
    Phi,
}

impl Field {
    pub const ALL: [Field; 4] = [Field::F, Field::Fprime, Field::Theta, Field::Phi];
    /// The three fields whose sensitivity is ranked.
    pub const RANKED: [Field; 3] = [Field::Fprime, Field::Theta, Field::Phi];

    pub fn name(self) -> &'static str {
        match self {
            Field::F => "f",
            Field::Fprime => "fprime",
            Field::Theta => "theta",
            Field::Phi => "phi",
        }
    }

    pub fn parse(name: &str) -> Option<Field> {
        Field::ALL.into_iter().find(|f| f.name() == name.trim())
    }

    fn column(self, table: &ProfileTable) -> &[f64] {
        match self {
            Field::F => &table.f,
            Field::Fprime => &table.fprime,
            Field::Theta => &table.theta,
            Field::Phi => &table.phi,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Band {
    fn seed(values: &[f64]) -> Self {
        Self {
            lower: values.to_vec(),
            upper: values.to_vec(),
        }
    }

    fn absorb(&mut self, values: &[f64]) {
        for ((lo, hi), &v) in self.lower.iter_mut().zip(self.upper.iter_mut()).zip(values) {
            *lo = lo.min(v);
            *hi = hi.max(v);
        }
    }

    pub fn contains(&self, values: &[f64], tol: f64) -> bool {
        values
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&v, (&lo, &hi))| lo - tol <= v && v <= hi + tol)
    }
}

/// Pointwise bounds of `f`, `f'`, `θ` and `φ` over all draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeBand {
    pub eta: Vec<f64>,
    pub f: Band,
    pub fprime: Band,
    pub theta: Band,
    pub phi: Band,
    pub draws: usize,
}

impl EnvelopeBand {
    pub fn band(&self, field: Field) -> &Band {
        match field {
            Field::F => &self.f,
            Field::Fprime => &self.fprime,
            Field::Theta => &self.theta,
            Field::Phi => &self.phi,
        }
    }

    fn band_mut(&mut self, field: Field) -> &mut Band {
        match field {
            Field::F => &mut self.f,
            Field::Fprime => &mut self.fprime,
            Field::Theta => &mut self.theta,
            Field::Phi => &mut self.phi,
        }
    }
}

/// Solves every draw (in parallel) and reduces to a band on `grid`.
pub fn envelope_from_draws(
    draws: &[FlowParams],
    grid: &[f64],
    opts: &HpmOptions,
) -> Result<EnvelopeBand> {
    if draws.is_empty() {
        return Err(Error::InvalidSpec("no parameter draws".into()));
    }
    let tables = draws
        .par_iter()
        .enumerate()
        .map(|(index, p)| {
            expand_with(p, opts)
                .and_then(|sol| evaluate(&sol, grid))
                .map_err(|e| Error::Draw {
                    index,
                    s: p.s,
                    a: p.a,
                    m: p.m,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>>>()?;

    let first = &tables[0];
    let mut band = EnvelopeBand {
        eta: grid.to_vec(),
        f: Band::seed(&first.f),
        fprime: Band::seed(&first.fprime),
        theta: Band::seed(&first.theta),
        phi: Band::seed(&first.phi),
        draws: draws.len(),
    };
    for table in &tables[1..] {
        for field in Field::ALL {
            band.band_mut(field).absorb(field.column(table));
        }
    }
    Ok(band)
}

pub fn envelope(spec: &UncertainSpec, opts: &HpmOptions) -> Result<EnvelopeBand> {
    let draws = sample_box(spec)?;
    let grid = uniform_grid(spec.eta_points)?;
    envelope_from_draws(&draws, &grid, opts)
}

/// Width summary of one band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthMetrics {
    pub max_width: f64,
    /// Trapezoidal integral of `upper − lower` over the grid.
    pub integral_width: f64,
}

pub fn band_width(band: &EnvelopeBand, field: Field) -> WidthMetrics {
    let b = band.band(field);
    let widths: Vec<f64> = b.upper.iter().zip(&b.lower).map(|(u, l)| u - l).collect();
    let max_width = widths.iter().copied().fold(0.0, f64::max);
    let integral_width = band
        .eta
        .windows(2)
        .zip(widths.windows(2))
        .map(|(x, w)| 0.5 * (x[1] - x[0]) * (w[0] + w[1]))
        .sum();
    WidthMetrics {
        max_width,
        integral_width,
    }
}

/// One of the three two-parameter uncertainty combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pairing {
    #[serde(rename = "S,M")]
    SM,
    #[serde(rename = "S,A")]
    SA,
    #[serde(rename = "A,M")]
    AM,
}

impl Pairing {
    pub const ALL: [Pairing; 3] = [Pairing::SM, Pairing::SA, Pairing::AM];

    pub fn params(self) -> [UncertainParam; 2] {
        match self {
            Pairing::SM => [UncertainParam::S, UncertainParam::M],
            Pairing::SA => [UncertainParam::S, UncertainParam::A],
            Pairing::AM => [UncertainParam::A, UncertainParam::M],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Pairing::SM => "S,M",
            Pairing::SA => "S,A",
            Pairing::AM => "A,M",
        }
    }

    /// Widest pairing reported by the published sensitivity study.
    pub fn published_widest(field: Field) -> Pairing {
        match field {
            Field::F | Field::Fprime => Pairing::AM,
            Field::Theta | Field::Phi => Pairing::SA,
        }
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingWidths {
    pub pairing: Pairing,
    pub fprime: WidthMetrics,
    pub theta: WidthMetrics,
    pub phi: WidthMetrics,
}

impl PairingWidths {
    pub fn get(&self, field: Field) -> WidthMetrics {
        match field {
            Field::Fprime | Field::F => self.fprime,
            Field::Theta => self.theta,
            Field::Phi => self.phi,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldRanking {
    pub field: Field,
    /// Widest first, by integral width.
    pub order: Vec<Pairing>,
    pub published_widest: Pairing,
    /// `None` when every width is zero.
    pub agrees: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub base: FlowParams,
    pub spread: f64,
    pub alpha_samples: usize,
    pub eta_points: usize,
    pub options: HpmOptions,
    pub pairings: Vec<PairingWidths>,
    pub rankings: Vec<FieldRanking>,
    /// All widths are zero, so no ranking is meaningful.
    pub degenerate: bool,
}

/// Runs the (S,M), (S,A), (A,M) sweeps around `base` with relative `spread`
/// and ranks the pairings per field by integral band width.
pub fn sensitivity_report(
    base: &FlowParams,
    spread: f64,
    alpha_samples: usize,
    eta_points: usize,
    opts: &HpmOptions,
) -> Result<SensitivityReport> {
    if !spread.is_finite() || spread < 0.0 {
        return Err(Error::InvalidSpec(format!("spread must be >= 0, got {spread}")));
    }
    let mut pairings = Vec::with_capacity(3);
    for pairing in Pairing::ALL {
        let spec = UncertainSpec {
            alpha_samples,
            eta_points,
            ..UncertainSpec::crisp(*base)
        }
        .with_relative_spread(&pairing.params(), spread)?;
        let band = envelope(&spec, opts)?;
        pairings.push(PairingWidths {
            pairing,
            fprime: band_width(&band, Field::Fprime),
            theta: band_width(&band, Field::Theta),
            phi: band_width(&band, Field::Phi),
        });
    }

    let degenerate = pairings.iter().all(|p| {
        Field::RANKED
            .iter()
            .all(|&f| p.get(f).integral_width == 0.0 && p.get(f).max_width == 0.0)
    });

    let rankings = Field::RANKED
        .iter()
        .map(|&field| {
            let mut ranked: Vec<&PairingWidths> = pairings.iter().collect();
            // stable sort keeps S,M / S,A / A,M order among ties
            ranked.sort_by(|x, y| {
                y.get(field)
                    .integral_width
                    .total_cmp(&x.get(field).integral_width)
            });
            let order: Vec<Pairing> = ranked.iter().map(|p| p.pairing).collect();
            let published = Pairing::published_widest(field);
            let all_zero = ranked.iter().all(|p| p.get(field).integral_width == 0.0);
            FieldRanking {
                field,
                agrees: (!all_zero).then(|| order[0] == published),
                order,
                published_widest: published,
            }
        })
        .collect();

    Ok(SensitivityReport {
        base: *base,
        spread,
        alpha_samples,
        eta_points,
        options: *opts,
        pairings,
        rankings,
        degenerate,
    })
}
