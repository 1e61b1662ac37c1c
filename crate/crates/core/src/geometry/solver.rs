//! Multi-start Levenberg-Marquardt search for zeros of the test map.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::dd::{self, DD};
use super::embedding::{normalize, EmbeddingSpec, Vec3};
use super::testmap::{
    distance_data, distance_jacobian, distance_to_y, distinct_margin, pair_distances, retract,
    tau_matrix, Config4, DistanceData, TestMapValue, PAIRS,
};
use super::GeometryError;

pub const DEFAULT_TOL: f64 = 1e-16;
pub const DEFAULT_DISTINCT_MARGIN: f64 = 1e-3;
/// Starts closer than this to the excluded set are redrawn.
pub const START_Y_EXCLUSION: f64 = 0.05;
const MAX_ITER: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveParams {
    pub starts: usize,
    pub seed: u64,
    pub tol: f64,
    pub distinct_margin: f64,
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams {
            starts: 16,
            seed: 42,
            tol: DEFAULT_TOL,
            distinct_margin: DEFAULT_DISTINCT_MARGIN,
        }
    }
}

/// A four-point problem: unknowns, test-map residuals and margins.
pub(crate) trait Problem: Sync {
    type Config: Copy + Send;

    fn chart_dim(&self) -> usize;
    fn start(&self, index: usize, rng: &mut ChaCha8Rng) -> Self::Config;
    fn distances(&self, c: &Self::Config) -> [f64; 6];
    /// Rows follow [`PAIRS`], columns the chart coordinates.
    fn distance_jacobian(&self, c: &Self::Config) -> DMatrix<f64>;
    fn retract(&self, c: &Self::Config, delta: &[f64]) -> Self::Config;
    fn distinct_margin(&self, c: &Self::Config) -> f64;
    fn distance_to_y(&self, c: &Self::Config) -> f64;
    /// Distances recomputed in double-double when possible.
    fn distances_extended(&self, c: &Self::Config) -> [DD; 6];
    fn coordinates(&self, c: &Self::Config) -> Vec<f64>;
}

fn tau(d: &[f64; 6]) -> DVector<f64> {
    DVector::from_row_slice(&TestMapValue::from_distances(d).as_array())
}

pub(crate) fn residual_extended(d: &[DD; 6]) -> f64 {
    let quarter = DD::new(0.25);
    let half = DD::new(0.5);
    let mean_side = (d[0] + d[1] + d[2] + d[3]) * quarter;
    let mean_diag = (d[4] + d[5]) * half;
    let mut acc = DD::new(0.0);
    for (k, v) in d.iter().enumerate() {
        let dev = *v - if k < 4 { mean_side } else { mean_diag };
        acc = acc + dev.square();
    }
    acc.to_f64()
}

fn levenberg_marquardt<P: Problem>(p: &P, start: P::Config, tol: f64) -> P::Config {
    let t = {
        let m = tau_matrix();
        DMatrix::from_fn(6, 6, |i, j| m[i][j])
    };
    let n = p.chart_dim();
    let mut x = start;
    let mut r = tau(&p.distances(&x));
    let mut f = r.norm_squared();
    let mut lambda = 1e-3;
    let mut iterations = 0;
    while iterations < MAX_ITER && f > tol * 1e-8 {
        iterations += 1;
        let j = &t * p.distance_jacobian(&x);
        let jt = j.transpose();
        let a = &jt * &j;
        let g = &jt * &r;
        let mut accepted = false;
        for _ in 0..30 {
            let damped = &a + DMatrix::<f64>::identity(n, n) * lambda;
            let Some(chol) = damped.cholesky() else {
                lambda *= 10.0;
                continue;
            };
            let delta = -chol.solve(&g);
            let xn = p.retract(&x, delta.as_slice());
            let rn = tau(&p.distances(&xn));
            let fnew = rn.norm_squared();
            if fnew < f {
                x = xn;
                r = rn;
                f = fnew;
                lambda = (lambda / 3.0).max(1e-14);
                accepted = delta.norm() > 1e-16;
                break;
            }
            lambda *= 4.0;
        }
        if !accepted {
            break;
        }
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Margins {
    /// Smallest pairwise geodesic distance of the parameter points.
    pub distinct: f64,
    /// Geodesic distance to the excluded set `(x, y, x, y)`.
    pub to_y: f64,
    /// Threshold both margins must exceed.
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Certified,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    /// Parameter points: unit vectors on the sphere, or angles on the circle.
    pub config: Vec<Vec<f64>>,
    pub distances: DistanceData,
    pub delta: f64,
    pub phi_diag: f64,
    /// `||tau||^2` recomputed in double-double arithmetic.
    pub residual: f64,
    /// `||tau||^2` in plain f64.
    pub residual_f64: f64,
    pub margins: Margins,
    pub certified: bool,
    pub status: SolveStatus,
    pub seed: u64,
    pub starts: usize,
    pub rejected_starts: usize,
    pub certified_starts: usize,
    pub tol: f64,
    /// Largest of `|d12-d23|, |d23-d34|, |d34-d14|, |d13-d24|`.
    pub max_equality_gap: f64,
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

struct Candidate<C> {
    config: C,
    coords: Vec<f64>,
    residual: f64,
    distinct: f64,
    to_y: f64,
    certified: bool,
}

/// Certified first; then larger distance to the excluded set; then smaller
/// residual; then lexicographic coordinates.
fn rank<C>(a: &Candidate<C>, b: &Candidate<C>) -> Ordering {
    b.certified
        .cmp(&a.certified)
        .then_with(|| {
            if a.certified && (a.to_y - b.to_y).abs() > 1e-9 {
                b.to_y.total_cmp(&a.to_y)
            } else {
                Ordering::Equal
            }
        })
        .then_with(|| a.residual.total_cmp(&b.residual))
        .then_with(|| {
            a.coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}

pub(crate) fn solve_problem<P: Problem>(
    p: &P,
    params: &SolveParams,
) -> Result<SolveReport, GeometryError> {
    if params.starts == 0 {
        return Err(GeometryError::NoStarts);
    }
    let runs: Vec<(Candidate<P::Config>, usize)> = (0..params.starts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_add(i as u64));
            let mut rejected = 0;
            let mut start = p.start(i, &mut rng);
            while p.distance_to_y(&start) < START_Y_EXCLUSION {
                rejected += 1;
                start = p.start(i, &mut rng);
            }
            let config = levenberg_marquardt(p, start, params.tol);
            let ext = residual_extended(&p.distances_extended(&config));
            let distinct = p.distinct_margin(&config);
            let to_y = p.distance_to_y(&config);
            let certified = ext < params.tol
                && distinct > params.distinct_margin
                && to_y > params.distinct_margin;
            let cand = Candidate {
                config,
                coords: p.coordinates(&config),
                residual: ext,
                distinct,
                to_y,
                certified,
            };
            (cand, rejected)
        })
        .collect();
    let rejected_starts = runs.iter().map(|r| r.1).sum();
    let certified_starts = runs.iter().filter(|r| r.0.certified).count();
    let best = runs
        .into_iter()
        .map(|r| r.0)
        .min_by(rank)
        .expect("at least one start");
    let d = p.distances(&best.config);
    let data = DistanceData::from_pairs(&d);
    let gap = [
        (data.d12 - data.d23).abs(),
        (data.d23 - data.d34).abs(),
        (data.d34 - data.d14).abs(),
        (data.d13 - data.d24).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let coords = best.coords;
    let per_point = coords.len() / 4;
    Ok(SolveReport {
        config: coords.chunks(per_point).map(|c| c.to_vec()).collect(),
        distances: data,
        delta: data.delta,
        phi_diag: data.phi_diag,
        residual: best.residual,
        residual_f64: tau(&d).norm_squared(),
        margins: Margins {
            distinct: best.distinct,
            to_y: best.to_y,
            threshold: params.distinct_margin,
        },
        certified: best.certified,
        status: if best.certified {
            SolveStatus::Certified
        } else {
            SolveStatus::NotCertified
        },
        seed: params.seed,
        starts: params.starts,
        rejected_starts,
        certified_starts,
        tol: params.tol,
        max_equality_gap: gap,
    })
}

/// The canonical square on the equator.
pub const SQUARE: Config4 = [
    [1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0],
    [-1.0, 0.0, 0.0],
    [0.0, -1.0, 0.0],
];

pub fn random_unit_vector(rng: &mut ChaCha8Rng) -> Vec3 {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).sqrt();
    normalize(&[s * phi.cos(), s * phi.sin(), z])
}

struct SphereProblem<'a> {
    embedding: &'a EmbeddingSpec,
}

impl Problem for SphereProblem<'_> {
    type Config = Config4;

    fn chart_dim(&self) -> usize {
        8
    }

    fn start(&self, index: usize, rng: &mut ChaCha8Rng) -> Config4 {
        if index == 0 {
            SQUARE
        } else {
            [(); 4].map(|_| random_unit_vector(rng))
        }
    }

    fn distances(&self, c: &Config4) -> [f64; 6] {
        pair_distances(self.embedding, c)
    }

    fn distance_jacobian(&self, c: &Config4) -> DMatrix<f64> {
        let j = distance_jacobian(self.embedding, c);
        DMatrix::from_fn(6, 8, |i, k| j[i][k])
    }

    fn retract(&self, c: &Config4, delta: &[f64]) -> Config4 {
        retract(c, delta)
    }

    fn distinct_margin(&self, c: &Config4) -> f64 {
        distinct_margin(c)
    }

    fn distance_to_y(&self, c: &Config4) -> f64 {
        distance_to_y(c)
    }

    fn distances_extended(&self, c: &Config4) -> [DD; 6] {
        if self.embedding.metric.is_euclidean() {
            let f: Vec<Vec3> = c.iter().map(|p| self.embedding.evaluate(p)).collect();
            PAIRS.map(|(i, j)| dd::distance(&f[i], &f[j]))
        } else {
            pair_distances(self.embedding, c).map(DD::new)
        }
    }

    fn coordinates(&self, c: &Config4) -> Vec<f64> {
        c.iter().flatten().copied().collect()
    }
}

/// Search for four distinct points on the embedded sphere whose images have
/// equal sides and equal diagonals.
pub fn solve(
    embedding: &EmbeddingSpec,
    params: &SolveParams,
) -> Result<SolveReport, GeometryError> {
    solve_problem(&SphereProblem { embedding }, params)
}

/// Distance data of a sphere configuration given as reported coordinates.
pub fn report_distances(embedding: &EmbeddingSpec, config: &[Vec<f64>]) -> DistanceData {
    let c: Config4 = [0, 1, 2, 3].map(|i| [config[i][0], config[i][1], config[i][2]]);
    distance_data(embedding, &c)
}
