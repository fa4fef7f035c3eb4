//! Monte-Carlo exploration of the entropy-negativity plane.
//!
//! Randomness is always drawn from a [`RngStream`]: a ChaCha8 generator keyed
//! by a user seed plus a stream number. Scans give sample `i` its own stream,
//! so results do not depend on how samples are split across workers.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use thiserror::Error;

use num_complex::Complex;

use crate::linalg::{ComplexMatrix, DensityMatrix, LinalgError, DIM};
use crate::measures::{werner_ceiling, EntropyNegativityPoint, WERNER_CURVE_MAX_ENTROPY};
use crate::weyl::{bell_diagonal_part, simplex_state, ProbabilityVector9};

#[derive(Debug, Error)]
pub enum FrontierError {
    #[error("numerical failure at seed {seed}, stream {stream}: {source}")]
    Numerical {
        seed: u64,
        stream: u64,
        #[source]
        source: LinalgError,
    },
    #[error("invalid entropy band [{lo}, {hi}]: need 0 <= lo < hi <= 15/16")]
    InvalidBand { lo: f64, hi: f64 },
    #[error("{0} must be at least 1")]
    ZeroCount(&'static str),
    #[error("rank {0} outside 1..=9")]
    InvalidRank(usize),
    #[error("could not build worker pool: {0}")]
    Pool(String),
}

/// Identifies one deterministic random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    fn fail(&self, source: LinalgError) -> FrontierError {
        FrontierError::Numerical { seed: self.seed, stream: self.stream, source }
    }
}

/// Uniform points of the 8-simplex from normalized standard exponentials.
pub fn sample_simplex(stream: &RngStream, count: usize) -> Vec<ProbabilityVector9<f64>> {
    let mut rng = stream.rng();
    (0..count).map(|_| draw_simplex_point(&mut rng)).collect()
}

fn draw_simplex_point<R: Rng + ?Sized>(rng: &mut R) -> ProbabilityVector9<f64> {
    loop {
        let raw: [f64; 9] = std::array::from_fn(|_| rng.sample(Exp1));
        if let Ok(p) = ProbabilityVector9::normalized(raw) {
            return p;
        }
    }
}

/// `9 x rank` matrix of independent standard complex Gaussians.
pub fn gaussian_factor<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> ComplexMatrix<f64> {
    ComplexMatrix::from_fn(DIM, rank, |_, _| {
        Complex::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

/// `G G† / tr(G G†)` with a Gaussian `9 x rank` factor `G`.
pub fn sample_general_state<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> Result<DensityMatrix<f64>, FrontierError> {
    if !(1..=DIM).contains(&rank) {
        return Err(FrontierError::InvalidRank(rank));
    }
    loop {
        // a zero factor has probability zero; redraw if it happens
        if let Ok(rho) = DensityMatrix::from_factor(&gaussian_factor(rng, rank)) {
            return Ok(rho);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    Simplex,
    General,
    Search,
}

impl Source {
    pub fn label(self) -> &'static str {
        match self {
            Source::Simplex => "simplex",
            Source::General => "general",
            Source::Search => "search",
        }
    }
}

/// One plotted point and where it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRecord {
    pub point: EntropyNegativityPoint<f64>,
    pub source: Source,
    pub seed_path: RngStream,
}

fn run_indexed<T, F>(count: usize, workers: usize, job: F) -> Result<Vec<T>, FrontierError>
where
    T: Send,
    F: Fn(u64) -> Result<T, FrontierError> + Sync + Send,
{
    if workers <= 1 {
        return (0..count as u64).map(job).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| FrontierError::Pool(e.to_string()))?;
    pool.install(|| (0..count as u64).into_par_iter().map(job).collect())
}

/// `(S_L, N)` of `count` uniform simplex states. Sample `i` uses stream `i` of `seed`.
pub fn scan_simplex(seed: u64, count: usize, workers: usize) -> Result<Vec<ScanRecord>, FrontierError> {
    if count == 0 {
        return Err(FrontierError::ZeroCount("count"));
    }
    run_indexed(count, workers, |i| {
        let path = RngStream::new(seed, i);
        let p = draw_simplex_point(&mut path.rng());
        let point = EntropyNegativityPoint::of(&simplex_state(&p)).map_err(|e| path.fail(e))?;
        Ok(ScanRecord { point, source: Source::Simplex, seed_path: path })
    })
}

/// `(S_L, N)` of `count` Gaussian-factor states of the given rank.
pub fn scan_general(seed: u64, count: usize, rank: usize, workers: usize) -> Result<Vec<ScanRecord>, FrontierError> {
    if count == 0 {
        return Err(FrontierError::ZeroCount("count"));
    }
    run_indexed(count, workers, |i| {
        let path = RngStream::new(seed, i);
        let rho = sample_general_state(&mut path.rng(), rank)?;
        let point = EntropyNegativityPoint::of(&rho).map_err(|e| path.fail(e))?;
        Ok(ScanRecord { point, source: Source::General, seed_path: path })
    })
}

/// Which states the search may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchSpace {
    /// Any two-qutrit state.
    General,
    /// Every candidate is replaced by its Bell-diagonal part.
    BellDiagonal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub band: (f64, f64),
    pub budget: usize,
    pub space: SearchSpace,
    pub starts: usize,
    pub initial_step: f64,
    pub min_step: f64,
    /// Consecutive rejections before the step is halved.
    pub patience: usize,
    pub band_penalty: f64,
}

impl SearchConfig {
    pub fn new(band: (f64, f64), budget: usize) -> Self {
        Self {
            band,
            budget,
            space: SearchSpace::General,
            starts: 100,
            initial_step: 0.05,
            min_step: 1e-4,
            patience: 20,
            band_penalty: 10.0,
        }
    }

    pub fn bell_diagonal(mut self) -> Self {
        self.space = SearchSpace::BellDiagonal;
        self
    }

    fn validate(&self) -> Result<(), FrontierError> {
        let (lo, hi) = self.band;
        if !(lo >= 0.0 && lo < hi && hi <= WERNER_CURVE_MAX_ENTROPY) {
            return Err(FrontierError::InvalidBand { lo, hi });
        }
        if self.budget == 0 {
            return Err(FrontierError::ZeroCount("budget"));
        }
        if self.starts == 0 {
            return Err(FrontierError::ZeroCount("starts"));
        }
        Ok(())
    }

    fn band_distance(&self, s: f64) -> f64 {
        let (lo, hi) = self.band;
        (lo - s).max(s - hi).max(0.0)
    }
}

/// A state accepted during the search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceptedPoint {
    pub iteration: usize,
    pub point: EntropyNegativityPoint<f64>,
    pub margin: f64,
    pub in_band: bool,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub state: DensityMatrix<f64>,
    pub point: EntropyNegativityPoint<f64>,
    /// `n - curve_werner(s)` of `state`.
    pub margin: f64,
    pub iterations: usize,
    /// Best penalized objective after each iteration; non-decreasing.
    pub objective_trace: Vec<f64>,
    pub accepted: Vec<AcceptedPoint>,
}

impl SearchResult {
    pub fn in_band(&self, config: &SearchConfig) -> bool {
        config.band_distance(self.point.s) == 0.0
    }
}

struct Candidate {
    factor: ComplexMatrix<f64>,
    state: DensityMatrix<f64>,
    point: EntropyNegativityPoint<f64>,
    margin: f64,
    objective: f64,
}

fn evaluate(config: &SearchConfig, factor: ComplexMatrix<f64>) -> Result<Option<Candidate>, LinalgError> {
    let state = match DensityMatrix::from_factor(&factor) {
        Ok(rho) => rho,
        Err(LinalgError::InvalidState(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let state = match config.space {
        SearchSpace::General => state,
        SearchSpace::BellDiagonal => bell_diagonal_part(&state),
    };
    let point = EntropyNegativityPoint::of(&state)?;
    let margin = point.n - werner_ceiling(point.s);
    let objective = margin - config.band_penalty * config.band_distance(point.s);
    Ok(Some(Candidate { factor, state, point, margin, objective }))
}

/// Stochastic hill climbing on `n - curve_werner(s)` inside an entropy band.
///
/// Starts from the best of `config.starts` full-rank Gaussian-factor states,
/// then perturbs the factor `G' = G + εΔ` and keeps strict improvements of
/// the penalized objective. `ε` halves after `patience` rejections in a row,
/// never dropping below `min_step`. A non-positive margin in the result means
/// nothing above the Werner curve was found.
pub fn find_above_werner(stream: &RngStream, config: &SearchConfig) -> Result<SearchResult, FrontierError> {
    config.validate()?;
    let mut rng = stream.rng();
    let fail = |e| stream.fail(e);

    let mut best: Option<Candidate> = None;
    let mut drawn = 0;
    while drawn < config.starts {
        let g = gaussian_factor(&mut rng, DIM);
        if let Some(c) = evaluate(config, g).map_err(fail)? {
            drawn += 1;
            if best.as_ref().is_none_or(|b| c.objective > b.objective) {
                best = Some(c);
            }
        }
    }
    let mut best = best.expect("at least one start");
    let mut accepted = vec![AcceptedPoint {
        iteration: 0,
        point: best.point,
        margin: best.margin,
        in_band: config.band_distance(best.point.s) == 0.0,
    }];
    let mut trace = Vec::with_capacity(config.budget);
    let mut step = config.initial_step;
    let mut rejections = 0;

    for iteration in 1..=config.budget {
        let delta = gaussian_factor(&mut rng, DIM);
        let proposal = &best.factor + &delta.scale_real(step);
        match evaluate(config, proposal).map_err(fail)? {
            Some(c) if c.objective > best.objective => {
                best = c;
                rejections = 0;
                accepted.push(AcceptedPoint {
                    iteration,
                    point: best.point,
                    margin: best.margin,
                    in_band: config.band_distance(best.point.s) == 0.0,
                });
            }
            _ => {
                rejections += 1;
                if rejections >= config.patience {
                    step = (step * 0.5).max(config.min_step);
                    rejections = 0;
                }
            }
        }
        trace.push(best.objective);
    }

    Ok(SearchResult {
        state: best.state,
        point: best.point,
        margin: best.margin,
        iterations: config.budget,
        objective_trace: trace,
        accepted,
    })
}
