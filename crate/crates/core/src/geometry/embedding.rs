//! Embeddings of the unit sphere into a metric space.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::GeometryError;

pub type Vec3 = [f64; 3];

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn normalize(a: &Vec3) -> Vec3 {
    let n = norm(a);
    [a[0] / n, a[1] / n, a[2] / n]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Great-circle distance between unit vectors.
pub fn geodesic(a: &Vec3, b: &Vec3) -> f64 {
    // atan2 form is accurate for both tiny and near-antipodal angles
    norm(&cross(a, b)).atan2(dot(a, b))
}

/// Orthonormal basis of the tangent plane at a unit vector.
pub fn tangent_basis(p: &Vec3) -> (Vec3, Vec3) {
    let axis = if p[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let d = dot(&axis, p);
    let e1 = normalize(&[axis[0] - d * p[0], axis[1] - d * p[1], axis[2] - d * p[2]]);
    let e2 = cross(p, &e1);
    (e1, e2)
}

/// One real spherical harmonic term `c * Y_lm`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Harmonic {
    pub l: u32,
    pub m: i32,
    pub c: f64,
}

/// `Y_lm` as the polynomial `N * P_l^(|m|)(z) * Re/Im((x + iy)^|m|)`.
#[derive(Debug, Clone, PartialEq)]
struct HarmonicPoly {
    norm: f64,
    m: i32,
    /// `d^|m| P_l / dz^|m|`, lowest degree first.
    legendre: Vec<f64>,
    /// One more derivative, for the gradient.
    legendre_d: Vec<f64>,
}

fn legendre(l: u32) -> Vec<f64> {
    let mut prev = vec![1.0];
    if l == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 1.0];
    for n in 1..l as usize {
        let mut next = vec![0.0; n + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += (2 * n + 1) as f64 * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= n as f64 * c;
        }
        for c in next.iter_mut() {
            *c /= (n + 1) as f64;
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn derivative(p: &[f64]) -> Vec<f64> {
    if p.len() <= 1 {
        return vec![0.0];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| i as f64 * c)
        .collect()
}

fn horner(p: &[f64], z: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * z + c)
}

/// `(x + iy)^k` as (re, im).
fn complex_pow(x: f64, y: f64, k: u32) -> (f64, f64) {
    (0..k).fold((1.0, 0.0), |(a, b), _| (a * x - b * y, a * y + b * x))
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

impl HarmonicPoly {
    fn new(l: u32, m: i32) -> Self {
        let am = m.unsigned_abs();
        let mut p = legendre(l);
        for _ in 0..am {
            p = derivative(&p);
        }
        let mut n =
            ((2 * l + 1) as f64 / (4.0 * PI) * factorial(l - am) / factorial(l + am)).sqrt();
        if m != 0 {
            n *= 2f64.sqrt();
        }
        let legendre_d = derivative(&p);
        HarmonicPoly {
            norm: n,
            m,
            legendre: p,
            legendre_d,
        }
    }

    fn angular(&self, x: f64, y: f64, k: u32) -> (f64, f64) {
        let (re, im) = complex_pow(x, y, k);
        if self.m >= 0 {
            (re, im)
        } else {
            (im, re)
        }
    }

    fn value(&self, p: &Vec3) -> f64 {
        let am = self.m.unsigned_abs();
        let (a, _) = self.angular(p[0], p[1], am);
        self.norm * horner(&self.legendre, p[2]) * a
    }

    /// Gradient of the polynomial extension to R^3.
    fn gradient(&self, p: &Vec3) -> Vec3 {
        let am = self.m.unsigned_abs();
        let lz = horner(&self.legendre, p[2]);
        let dlz = horner(&self.legendre_d, p[2]);
        let (a, _) = self.angular(p[0], p[1], am);
        let (gx, gy) = if am == 0 {
            (0.0, 0.0)
        } else {
            // d/dx (x+iy)^k = k (x+iy)^(k-1), d/dy = i k (x+iy)^(k-1)
            let (re, im) = complex_pow(p[0], p[1], am - 1);
            let k = am as f64;
            if self.m >= 0 {
                (k * re, -k * im)
            } else {
                (k * im, k * re)
            }
        };
        [
            self.norm * lz * gx,
            self.norm * lz * gy,
            self.norm * dlz * a,
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EmbeddingKind {
    Round {
        r: f64,
    },
    Ellipsoid {
        a: f64,
        b: f64,
        c: f64,
    },
    /// `p -> (1 + sum c_lm Y_lm(p)) p`.
    RadialHarmonic {
        terms: Vec<Harmonic>,
    },
}

pub type MetricFn = dyn Fn(&Vec3, &Vec3) -> f64 + Send + Sync;

#[derive(Clone)]
pub enum Metric {
    Euclidean,
    /// `l^p` distance of the ambient coordinates (`p >= 1`).
    Minkowski(f64),
    Custom(Arc<MetricFn>),
}

impl Metric {
    pub fn distance(&self, a: &Vec3, b: &Vec3) -> f64 {
        match self {
            Metric::Euclidean => norm(&[a[0] - b[0], a[1] - b[1], a[2] - b[2]]),
            Metric::Minkowski(p) => (0..3)
                .map(|i| (a[i] - b[i]).abs().powf(*p))
                .sum::<f64>()
                .powf(1.0 / p),
            Metric::Custom(f) => f(a, b),
        }
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self, Metric::Euclidean)
    }

    /// Sample triples of points and check symmetry, nonnegativity and the
    /// triangle inequality.
    pub fn spot_check(&self, samples: usize, seed: u64) -> Result<(), GeometryError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut point = || -> Vec3 {
            [
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ]
        };
        for _ in 0..samples {
            let (x, y, z) = (point(), point(), point());
            let (dxy, dyx) = (self.distance(&x, &y), self.distance(&y, &x));
            if dxy < 0.0 || !dxy.is_finite() {
                return Err(GeometryError::MetricViolation(format!(
                    "d{x:?},{y:?} = {dxy}"
                )));
            }
            if (dxy - dyx).abs() > 1e-12 * (1.0 + dxy) {
                return Err(GeometryError::MetricViolation(format!(
                    "asymmetric at {x:?}, {y:?}"
                )));
            }
            let lhs = self.distance(&x, &z);
            let rhs = dxy + self.distance(&y, &z);
            if lhs > rhs + 1e-12 * (1.0 + rhs) {
                return Err(GeometryError::MetricViolation(format!(
                    "triangle inequality fails at {x:?}, {y:?}, {z:?}"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Euclidean => write!(f, "Euclidean"),
            Metric::Minkowski(p) => write!(f, "Minkowski({p})"),
            Metric::Custom(_) => write!(f, "Custom"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EmbeddingSpec {
    pub kind: EmbeddingKind,
    pub metric: Metric,
    harmonics: Vec<(f64, HarmonicPoly)>,
}

/// Resolution of the positivity grid for radial embeddings.
const GRID_THETA: usize = 181;
const GRID_PHI: usize = 360;

impl EmbeddingSpec {
    pub fn new(kind: EmbeddingKind) -> Result<Self, GeometryError> {
        Self::with_metric(kind, Metric::Euclidean)
    }

    pub fn with_metric(kind: EmbeddingKind, metric: Metric) -> Result<Self, GeometryError> {
        let bad = |s: String| Err(GeometryError::NonInjectiveSpec(s));
        let mut harmonics = Vec::new();
        match &kind {
            EmbeddingKind::Round { r } if !(*r > 0.0) => {
                return bad(format!("radius {r} is not positive"))
            }
            EmbeddingKind::Ellipsoid { a, b, c } if !(*a > 0.0 && *b > 0.0 && *c > 0.0) => {
                return bad(format!("semi-axes ({a}, {b}, {c}) must be positive"))
            }
            EmbeddingKind::RadialHarmonic { terms } => {
                for t in terms {
                    if t.m.unsigned_abs() > t.l {
                        return bad(format!("|m| = {} exceeds l = {}", t.m.abs(), t.l));
                    }
                    harmonics.push((t.c, HarmonicPoly::new(t.l, t.m)));
                }
            }
            _ => {}
        }
        let spec = EmbeddingSpec {
            kind,
            metric,
            harmonics,
        };
        if !spec.harmonics.is_empty() {
            let min = spec.min_radius_on_grid();
            if min <= 0.0 {
                return bad(format!("radial function reaches {min:.3e} <= 0"));
            }
        }
        Ok(spec)
    }

    pub fn round(r: f64) -> Self {
        Self::new(EmbeddingKind::Round { r }).expect("positive radius")
    }

    pub fn ellipsoid(a: f64, b: f64, c: f64) -> Result<Self, GeometryError> {
        Self::new(EmbeddingKind::Ellipsoid { a, b, c })
    }

    pub fn radial(terms: &[(u32, i32, f64)]) -> Result<Self, GeometryError> {
        Self::new(EmbeddingKind::RadialHarmonic {
            terms: terms
                .iter()
                .map(|&(l, m, c)| Harmonic { l, m, c })
                .collect(),
        })
    }

    fn min_radius_on_grid(&self) -> f64 {
        let mut min = f64::INFINITY;
        for i in 0..GRID_THETA {
            let theta = PI * i as f64 / (GRID_THETA - 1) as f64;
            for j in 0..GRID_PHI {
                let phi = 2.0 * PI * j as f64 / GRID_PHI as f64;
                let p = [
                    theta.sin() * phi.cos(),
                    theta.sin() * phi.sin(),
                    theta.cos(),
                ];
                min = min.min(self.radius(&p));
            }
        }
        min
    }

    fn radius(&self, p: &Vec3) -> f64 {
        1.0 + self
            .harmonics
            .iter()
            .map(|(c, h)| c * h.value(p))
            .sum::<f64>()
    }

    fn radius_gradient(&self, p: &Vec3) -> Vec3 {
        let mut g = [0.0; 3];
        for (c, h) in &self.harmonics {
            let hg = h.gradient(p);
            for i in 0..3 {
                g[i] += c * hg[i];
            }
        }
        g
    }

    /// Image of a unit vector.
    pub fn evaluate(&self, p: &Vec3) -> Vec3 {
        match &self.kind {
            EmbeddingKind::Round { r } => [r * p[0], r * p[1], r * p[2]],
            EmbeddingKind::Ellipsoid { a, b, c } => [a * p[0], b * p[1], c * p[2]],
            EmbeddingKind::RadialHarmonic { .. } => {
                let r = self.radius(p);
                [r * p[0], r * p[1], r * p[2]]
            }
        }
    }

    /// Derivative of the embedding at `p` along a tangent vector `v`.
    pub fn differential(&self, p: &Vec3, v: &Vec3) -> Vec3 {
        match &self.kind {
            EmbeddingKind::Round { r } => [r * v[0], r * v[1], r * v[2]],
            EmbeddingKind::Ellipsoid { a, b, c } => [a * v[0], b * v[1], c * v[2]],
            EmbeddingKind::RadialHarmonic { .. } => {
                let r = self.radius(p);
                let dr = dot(&self.radius_gradient(p), v);
                [
                    dr * p[0] + r * v[0],
                    dr * p[1] + r * v[1],
                    dr * p[2] + r * v[2],
                ]
            }
        }
    }

    /// Typical length used to scale tolerances.
    pub fn scale(&self) -> f64 {
        match &self.kind {
            EmbeddingKind::Round { r } => *r,
            EmbeddingKind::Ellipsoid { a, b, c } => a.max(*b).max(*c),
            EmbeddingKind::RadialHarmonic { .. } => 1.0,
        }
    }
}

impl FromStr for EmbeddingSpec {
    type Err = GeometryError;

    /// `round:R`, `ellipsoid:a,b,c`, `harmonic:l,m,c[;l,m,c...]`.
    fn from_str(s: &str) -> Result<Self, GeometryError> {
        let err = || GeometryError::Parse(format!("bad embedding {s:?}"));
        let (kind, args) = s.split_once(':').ok_or_else(err)?;
        let nums = |a: &str| -> Result<Vec<f64>, GeometryError> {
            a.split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| err()))
                .collect()
        };
        match kind.trim() {
            "round" => match nums(args)?.as_slice() {
                [r] => Self::new(EmbeddingKind::Round { r: *r }),
                _ => Err(err()),
            },
            "ellipsoid" => match nums(args)?.as_slice() {
                [a, b, c] => Self::ellipsoid(*a, *b, *c),
                _ => Err(err()),
            },
            "harmonic" | "radial-harmonic" => {
                let mut terms = Vec::new();
                for t in args.split(';').filter(|t| !t.trim().is_empty()) {
                    match nums(t)?.as_slice() {
                        [l, m, c] if l.fract() == 0.0 && m.fract() == 0.0 && *l >= 0.0 => {
                            terms.push((*l as u32, *m as i32, *c))
                        }
                        _ => return Err(err()),
                    }
                }
                Self::radial(&terms)
            }
            _ => Err(err()),
        }
    }
}
