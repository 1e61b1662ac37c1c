//! Inscribed squares in closed planar curves.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::dd::{self, DD};
use super::solver::{solve_problem, Problem, SolveParams, SolveReport};
use super::testmap::PAIRS;
use super::GeometryError;

/// A closed curve `theta -> r(theta) (cos theta, sin theta)` or an ellipse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveSpec {
    Circle {
        r: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    /// `r(theta) = 1 + a cos(k theta)`.
    Star {
        a: f64,
        k: u32,
    },
}

impl CurveSpec {
    pub fn new(c: CurveSpec) -> Result<Self, GeometryError> {
        let bad = |s: String| Err(GeometryError::NonInjectiveSpec(s));
        match c {
            CurveSpec::Circle { r } if !(r > 0.0) => bad(format!("radius {r} is not positive")),
            CurveSpec::Ellipse { a, b } if !(a > 0.0 && b > 0.0) => {
                bad(format!("semi-axes ({a}, {b}) must be positive"))
            }
            CurveSpec::Star { a, .. } if !(a.abs() < 1.0) => {
                bad(format!("|a| = {} must be below 1", a.abs()))
            }
            ok => Ok(ok),
        }
    }

    pub fn point(&self, t: f64) -> [f64; 2] {
        match *self {
            CurveSpec::Circle { r } => [r * t.cos(), r * t.sin()],
            CurveSpec::Ellipse { a, b } => [a * t.cos(), b * t.sin()],
            CurveSpec::Star { a, k } => {
                let r = 1.0 + a * (k as f64 * t).cos();
                [r * t.cos(), r * t.sin()]
            }
        }
    }

    pub fn tangent(&self, t: f64) -> [f64; 2] {
        match *self {
            CurveSpec::Circle { r } => [-r * t.sin(), r * t.cos()],
            CurveSpec::Ellipse { a, b } => [-a * t.sin(), b * t.cos()],
            CurveSpec::Star { a, k } => {
                let kf = k as f64;
                let r = 1.0 + a * (kf * t).cos();
                let dr = -a * kf * (kf * t).sin();
                [dr * t.cos() - r * t.sin(), dr * t.sin() + r * t.cos()]
            }
        }
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveSpec::Circle { r } => write!(f, "circle:{r}"),
            CurveSpec::Ellipse { a, b } => write!(f, "ellipse:{a},{b}"),
            CurveSpec::Star { a, k } => write!(f, "star:{a},{k}"),
        }
    }
}

impl FromStr for CurveSpec {
    type Err = GeometryError;

    /// `circle:R`, `ellipse:a,b`, `star:a,k`.
    fn from_str(s: &str) -> Result<Self, GeometryError> {
        let err = || GeometryError::Parse(format!("bad curve {s:?}"));
        let (kind, args) = s.split_once(':').ok_or_else(err)?;
        let nums: Vec<f64> = args
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| err()))
            .collect::<Result<_, _>>()?;
        let c = match (kind.trim(), nums.as_slice()) {
            ("circle", [r]) => CurveSpec::Circle { r: *r },
            ("ellipse", [a, b]) => CurveSpec::Ellipse { a: *a, b: *b },
            ("star", [a, k]) if k.fract() == 0.0 && *k >= 1.0 => CurveSpec::Star {
                a: *a,
                k: *k as u32,
            },
            _ => return Err(err()),
        };
        CurveSpec::new(c)
    }
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

struct CurveProblem<'a> {
    curve: &'a CurveSpec,
}

impl Problem for CurveProblem<'_> {
    type Config = [f64; 4];

    fn chart_dim(&self) -> usize {
        4
    }

    fn start(&self, index: usize, rng: &mut ChaCha8Rng) -> [f64; 4] {
        if index == 0 {
            [0.0, PI / 2.0, PI, 3.0 * PI / 2.0]
        } else {
            let mut t = [(); 4].map(|_| rng.gen_range(0.0..TAU));
            t.sort_by(f64::total_cmp);
            t
        }
    }

    fn distances(&self, c: &[f64; 4]) -> [f64; 6] {
        let p = c.map(|t| self.curve.point(t));
        PAIRS.map(|(i, j)| (p[i][0] - p[j][0]).hypot(p[i][1] - p[j][1]))
    }

    fn distance_jacobian(&self, c: &[f64; 4]) -> DMatrix<f64> {
        let p = c.map(|t| self.curve.point(t));
        let v = c.map(|t| self.curve.tangent(t));
        let mut jac = DMatrix::zeros(6, 4);
        for (row, &(i, j)) in PAIRS.iter().enumerate() {
            let diff = [p[i][0] - p[j][0], p[i][1] - p[j][1]];
            let d = diff[0].hypot(diff[1]);
            if d == 0.0 {
                continue;
            }
            jac[(row, i)] += (diff[0] * v[i][0] + diff[1] * v[i][1]) / d;
            jac[(row, j)] -= (diff[0] * v[j][0] + diff[1] * v[j][1]) / d;
        }
        jac
    }

    fn retract(&self, c: &[f64; 4], delta: &[f64]) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| (c[i] + delta[i]).rem_euclid(TAU))
    }

    fn distinct_margin(&self, c: &[f64; 4]) -> f64 {
        PAIRS
            .iter()
            .map(|&(i, j)| angle_gap(c[i], c[j]))
            .fold(f64::INFINITY, f64::min)
    }

    fn distance_to_y(&self, c: &[f64; 4]) -> f64 {
        let a = angle_gap(c[0], c[2]);
        let b = angle_gap(c[1], c[3]);
        ((a * a + b * b) / 2.0).sqrt()
    }

    fn distances_extended(&self, c: &[f64; 4]) -> [DD; 6] {
        let p = c.map(|t| self.curve.point(t));
        PAIRS.map(|(i, j)| dd::distance(&p[i], &p[j]))
    }

    fn coordinates(&self, c: &[f64; 4]) -> Vec<f64> {
        c.to_vec()
    }
}

/// Search for four distinct points on the curve forming a square.
pub fn square_peg_solve(
    curve: &CurveSpec,
    params: &SolveParams,
) -> Result<SolveReport, GeometryError> {
    solve_problem(&CurveProblem { curve }, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(curve: CurveSpec, bound: f64) {
        let r = square_peg_solve(&curve, &SolveParams::default()).unwrap();
        assert!(r.certified, "{curve}: {r:?}");
        assert!(r.residual < bound, "{curve}: {}", r.residual);
        let d = r.distances;
        assert!(r.max_equality_gap < 1e-6 * d.d12);
        // a planar rhombus with equal diagonals is a square
        assert!((d.d13 - 2f64.sqrt() * d.d12).abs() < 1e-6 * d.d12);
    }

    #[test]
    fn circle_ellipse_star() {
        check(CurveSpec::Circle { r: 1.0 }, 1e-12);
        check(CurveSpec::Ellipse { a: 1.0, b: 0.6 }, 1e-8);
        check(CurveSpec::Star { a: 0.2, k: 3 }, 1e-8);
    }

    #[test]
    fn parsing_and_validation() {
        assert_eq!(
            "ellipse:1.0,0.6".parse::<CurveSpec>().unwrap(),
            CurveSpec::Ellipse { a: 1.0, b: 0.6 }
        );
        assert_eq!(
            "star:0.2,3".parse::<CurveSpec>().unwrap(),
            CurveSpec::Star { a: 0.2, k: 3 }
        );
        assert!(matches!(
            "star:1.5,3".parse::<CurveSpec>(),
            Err(GeometryError::NonInjectiveSpec(_))
        ));
        assert!(matches!(
            "blob:1".parse::<CurveSpec>(),
            Err(GeometryError::Parse(_))
        ));
    }

    #[test]
    fn tangent_matches_finite_difference() {
        let c = CurveSpec::Star { a: 0.3, k: 5 };
        for t in [0.1, 1.0, 2.5, 4.0] {
            let h = 1e-6;
            let (p, m) = (c.point(t + h), c.point(t - h));
            let v = c.tangent(t);
            for i in 0..2 {
                assert!(((p[i] - m[i]) / (2.0 * h) - v[i]).abs() < 1e-7);
            }
        }
    }
}
