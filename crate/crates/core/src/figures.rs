//! Tabulated data behind the four plots: pair negativity, line vs triangle
//! surfaces, rectangle vs gamma surfaces at `p_γ = 1/2`, and the
//! entropy-negativity plane.

use thiserror::Error;

use crate::frontier::{find_above_werner, scan_simplex, FrontierError, RngStream, SearchConfig};
use crate::linalg::LinalgError;
use crate::measures::{negativity, LINES_CURVE_MAX_ENTROPY, WERNER_CURVE_MAX_ENTROPY};
use crate::measures::{curve_lines, curve_werner, MeasureError};
use crate::output::{Dataset, Value};
use crate::weyl::{named_family, Family, StateError};

#[derive(Debug, Error)]
pub enum FigureError {
    #[error("no figure {0}; valid ids are 1 to 4")]
    InvalidFigure(u32),
    #[error("figure 4 needs an explicit seed")]
    MissingSeed,
    #[error("resolution must be at least 1")]
    ZeroResolution,
    #[error(transparent)]
    Frontier(#[from] FrontierError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Entropy bands searched for the above-Werner points of figure 4.
pub const SEARCH_BANDS: [(f64, f64); 3] = [(0.70, 0.80), (0.80, 0.90), (0.90, WERNER_CURVE_MAX_ENTROPY)];

#[derive(Debug, Clone, PartialEq)]
pub struct FigureOptions {
    /// Grid steps per unit probability, or per curve.
    pub resolution: usize,
    pub seed: Option<u64>,
    pub simplex_count: usize,
    pub search_budget: usize,
    pub workers: usize,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self { resolution: 60, seed: None, simplex_count: 2000, search_budget: 2000, workers: 1 }
    }
}

pub fn figure_dataset(fig: u32, opts: &FigureOptions) -> Result<Dataset, FigureError> {
    if opts.resolution == 0 {
        return Err(FigureError::ZeroResolution);
    }
    match fig {
        1 => pair_figure(opts.resolution),
        2 => line_triangle_figure(opts.resolution),
        3 => rectangle_gamma_figure(opts.resolution),
        4 => plane_figure(opts),
        other => Err(FigureError::InvalidFigure(other)),
    }
}

fn pair_figure(res: usize) -> Result<Dataset, FigureError> {
    let mut d = Dataset::new(vec!["p", "negativity"]);
    for i in 0..=res {
        let p = i as f64 / res as f64;
        let q = (res - i) as f64 / res as f64;
        let n = negativity(&named_family(Family::Pair, &[p, q])?)?;
        d.push(vec![Value::Num(p), Value::Num(n)]);
    }
    Ok(d)
}

fn line_triangle_figure(res: usize) -> Result<Dataset, FigureError> {
    let mut d = Dataset::new(vec!["p_alpha", "p_beta", "p_gamma", "n_line", "n_triangle"]);
    let r = res as f64;
    for i in 0..=res {
        for j in 0..=res - i {
            let probs = [i as f64 / r, j as f64 / r, (res - i - j) as f64 / r];
            let line = negativity(&named_family(Family::Line, &probs)?)?;
            let triangle = negativity(&named_family(Family::Triangle, &probs)?)?;
            d.push(vec![
                Value::Num(probs[0]),
                Value::Num(probs[1]),
                Value::Num(probs[2]),
                Value::Num(line),
                Value::Num(triangle),
            ]);
        }
    }
    Ok(d)
}

fn rectangle_gamma_figure(res: usize) -> Result<Dataset, FigureError> {
    let mut d = Dataset::new(vec!["p_alpha", "p_beta", "p_gamma", "p_delta", "n_q", "n_gamma"]);
    let r = res as f64;
    // p_delta = 1/2 - p_alpha - p_beta; rows where it would be negative are skipped
    for i in 0..=res {
        for j in 0..=res {
            if 2 * (i + j) > res {
                continue;
            }
            let probs = [i as f64 / r, j as f64 / r, 0.5, (res - 2 * i - 2 * j) as f64 / (2.0 * r)];
            let q = negativity(&named_family(Family::Rectangle, &probs)?)?;
            let g = negativity(&named_family(Family::Gamma, &probs)?)?;
            d.push(probs.iter().map(|&x| Value::Num(x)).chain([Value::Num(q), Value::Num(g)]).collect());
        }
    }
    Ok(d)
}

fn plane_figure(opts: &FigureOptions) -> Result<Dataset, FigureError> {
    let seed = opts.seed.ok_or(FigureError::MissingSeed)?;
    let mut d = Dataset::new(vec!["section", "s", "n"]);
    for rec in scan_simplex(seed, opts.simplex_count.max(1), opts.workers)? {
        d.push(vec![Value::Text("simplex"), Value::Num(rec.point.s), Value::Num(rec.point.n)]);
    }
    let res = opts.resolution;
    for i in 0..=res {
        let s = LINES_CURVE_MAX_ENTROPY * i as f64 / res as f64;
        d.push(vec![Value::Text("curve_lines"), Value::Num(s), Value::Num(curve_lines(s)?)]);
    }
    for i in 0..=res {
        let s = WERNER_CURVE_MAX_ENTROPY * i as f64 / res as f64;
        d.push(vec![Value::Text("curve_werner"), Value::Num(s), Value::Num(curve_werner(s)?)]);
    }
    for (k, &band) in SEARCH_BANDS.iter().enumerate() {
        let result = find_above_werner(&RngStream::new(seed, k as u64), &SearchConfig::new(band, opts.search_budget.max(1)))?;
        for a in result.accepted.iter().filter(|a| a.in_band && a.margin > 0.0) {
            d.push(vec![Value::Text("search"), Value::Num(a.point.s), Value::Num(a.point.n)]);
        }
    }
    Ok(d)
}
