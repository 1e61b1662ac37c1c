//! The test map on four-point configurations and its dihedral symmetry.

use serde::Serialize;

use super::embedding::{geodesic, normalize, tangent_basis, EmbeddingSpec, Vec3};

/// Four points on the unit sphere.
pub type Config4 = [Vec3; 4];

/// Pairs in the order `d12, d23, d34, d14, d13, d24`: four sides, then the
/// two diagonals.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3)];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceData {
    pub d12: f64,
    pub d13: f64,
    pub d14: f64,
    pub d23: f64,
    pub d24: f64,
    pub d34: f64,
    /// Sum of the four sides.
    pub delta: f64,
    /// Sum of the two diagonals.
    pub phi_diag: f64,
}

impl DistanceData {
    /// From distances in [`PAIRS`] order.
    pub fn from_pairs(d: &[f64; 6]) -> Self {
        DistanceData {
            d12: d[0],
            d23: d[1],
            d34: d[2],
            d14: d[3],
            d13: d[4],
            d24: d[5],
            delta: d[0] + d[1] + d[2] + d[3],
            phi_diag: d[4] + d[5],
        }
    }

    pub fn sides(&self) -> [f64; 4] {
        [self.d12, self.d23, self.d34, self.d14]
    }

    pub fn diagonals(&self) -> [f64; 2] {
        [self.d13, self.d24]
    }
}

/// `t` are side deviations from the mean side, `s` diagonal deviations from
/// the mean diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestMapValue {
    pub t: [f64; 4],
    pub s: [f64; 2],
}

impl TestMapValue {
    pub fn from_distances(d: &[f64; 6]) -> Self {
        let mean_side = (d[0] + d[1] + d[2] + d[3]) / 4.0;
        let mean_diag = (d[4] + d[5]) / 2.0;
        TestMapValue {
            t: [
                d[0] - mean_side,
                d[1] - mean_side,
                d[2] - mean_side,
                d[3] - mean_side,
            ],
            s: [d[4] - mean_diag, d[5] - mean_diag],
        }
    }

    pub fn as_array(&self) -> [f64; 6] {
        [
            self.t[0], self.t[1], self.t[2], self.t[3], self.s[0], self.s[1],
        ]
    }

    pub fn norm_squared(&self) -> f64 {
        self.as_array().iter().map(|x| x * x).sum()
    }
}

/// Linear map from distances to `(t, s)`.
pub fn tau_matrix() -> [[f64; 6]; 6] {
    let mut m = [[0.0; 6]; 6];
    for (k, row) in m.iter_mut().enumerate().take(4) {
        for (j, v) in row.iter_mut().enumerate().take(4) {
            *v = if j == k { 0.75 } else { -0.25 };
        }
    }
    m[4][4] = 0.5;
    m[4][5] = -0.5;
    m[5][4] = -0.5;
    m[5][5] = 0.5;
    m
}

/// Element `w^rot j^refl` of the dihedral group of order 8, where `w` shifts
/// the points `(x1,x2,x3,x4) -> (x2,x3,x4,x1)` and `j` reverses them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct D8 {
    pub rot: u8,
    pub refl: bool,
}

impl D8 {
    pub const IDENTITY: D8 = D8 {
        rot: 0,
        refl: false,
    };
    pub const OMEGA: D8 = D8 {
        rot: 1,
        refl: false,
    };
    pub const J: D8 = D8 { rot: 0, refl: true };

    pub fn all() -> Vec<D8> {
        (0..4)
            .flat_map(|rot| [false, true].map(|refl| D8 { rot, refl }))
            .collect()
    }

    /// Generator word applied right to left: first `j` (if any), then `w`
    /// `rot` times.
    fn word(self) -> Vec<D8> {
        let mut w = Vec::new();
        if self.refl {
            w.push(D8::J);
        }
        w.extend(std::iter::repeat_n(D8::OMEGA, self.rot as usize));
        w
    }

    fn act_generator<T: Copy>(g: D8, x: [T; 4]) -> [T; 4] {
        if g.refl {
            [x[3], x[2], x[1], x[0]]
        } else {
            [x[1], x[2], x[3], x[0]]
        }
    }

    pub fn act_config<T: Copy>(self, c: [T; 4]) -> [T; 4] {
        self.word()
            .into_iter()
            .fold(c, |acc, g| D8::act_generator(g, acc))
    }

    /// Induced action on the values: `w` permutes sides cyclically, `j` sends
    /// `(t1,t2,t3,t4)` to `(t3,t2,t1,t4)`, and both swap the diagonals.
    pub fn act_value(self, v: &TestMapValue) -> TestMapValue {
        self.word().into_iter().fold(*v, |acc, g| {
            let t = acc.t;
            let t = if g.refl {
                [t[2], t[1], t[0], t[3]]
            } else {
                [t[1], t[2], t[3], t[0]]
            };
            TestMapValue {
                t,
                s: [acc.s[1], acc.s[0]],
            }
        })
    }
}

/// Distances between the images of the four points, in [`PAIRS`] order.
pub fn pair_distances(e: &EmbeddingSpec, c: &Config4) -> [f64; 6] {
    let f: Vec<Vec3> = c.iter().map(|p| e.evaluate(p)).collect();
    PAIRS.map(|(i, j)| e.metric.distance(&f[i], &f[j]))
}

pub fn distance_data(e: &EmbeddingSpec, c: &Config4) -> DistanceData {
    DistanceData::from_pairs(&pair_distances(e, c))
}

pub fn test_map(e: &EmbeddingSpec, c: &Config4) -> TestMapValue {
    TestMapValue::from_distances(&pair_distances(e, c))
}

/// Apply chart coordinates `delta` (two per point, in the tangent basis) and
/// renormalise.
pub fn retract(c: &Config4, delta: &[f64]) -> Config4 {
    let mut out = *c;
    for (i, p) in c.iter().enumerate() {
        let (e1, e2) = tangent_basis(p);
        let (a, b) = (delta[2 * i], delta[2 * i + 1]);
        out[i] = normalize(&[
            p[0] + a * e1[0] + b * e2[0],
            p[1] + a * e1[1] + b * e2[1],
            p[2] + a * e1[2] + b * e2[2],
        ]);
    }
    out
}

/// Move along the great circle through `c` in the chart directions `dir`
/// by arc length `h` (used for finite differences).
pub fn exp_map(c: &Config4, dir: &[f64], h: f64) -> Config4 {
    let mut out = *c;
    for (i, p) in c.iter().enumerate() {
        let (e1, e2) = tangent_basis(p);
        let v = [
            dir[2 * i] * e1[0] + dir[2 * i + 1] * e2[0],
            dir[2 * i] * e1[1] + dir[2 * i + 1] * e2[1],
            dir[2 * i] * e1[2] + dir[2 * i + 1] * e2[2],
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n == 0.0 {
            continue;
        }
        let (s, co) = ((h * n).sin(), (h * n).cos());
        out[i] = normalize(&[
            co * p[0] + s * v[0] / n,
            co * p[1] + s * v[1] / n,
            co * p[2] + s * v[2] / n,
        ]);
    }
    out
}

/// Jacobian of the six distances with respect to the eight chart
/// coordinates. Analytic for the Euclidean metric; central differences
/// (`h = 1e-6`) otherwise. Coincident points contribute zero.
pub fn distance_jacobian(e: &EmbeddingSpec, c: &Config4) -> [[f64; 8]; 6] {
    let mut jac = [[0.0; 8]; 6];
    if !e.metric.is_euclidean() {
        let h = 1e-6;
        for k in 0..8 {
            let mut dir = [0.0; 8];
            dir[k] = 1.0;
            let plus = pair_distances(e, &exp_map(c, &dir, h));
            let minus = pair_distances(e, &exp_map(c, &dir, -h));
            for (row, (p, m)) in jac.iter_mut().zip(plus.iter().zip(&minus)) {
                row[k] = (p - m) / (2.0 * h);
            }
        }
        return jac;
    }
    let f: Vec<Vec3> = c.iter().map(|p| e.evaluate(p)).collect();
    // df_i along each tangent basis vector
    let df: Vec<[Vec3; 2]> = c
        .iter()
        .map(|p| {
            let (e1, e2) = tangent_basis(p);
            [e.differential(p, &e1), e.differential(p, &e2)]
        })
        .collect();
    for (row, &(i, j)) in jac.iter_mut().zip(PAIRS.iter()) {
        let diff = [f[i][0] - f[j][0], f[i][1] - f[j][1], f[i][2] - f[j][2]];
        let d = (diff[0] * diff[0] + diff[1] * diff[1] + diff[2] * diff[2]).sqrt();
        if d == 0.0 {
            continue;
        }
        for a in 0..2 {
            let gi = (diff[0] * df[i][a][0] + diff[1] * df[i][a][1] + diff[2] * df[i][a][2]) / d;
            let gj = (diff[0] * df[j][a][0] + diff[1] * df[j][a][1] + diff[2] * df[j][a][2]) / d;
            row[2 * i + a] += gi;
            row[2 * j + a] -= gj;
        }
    }
    jac
}

/// `||tau||^2` and its gradient in the eight chart coordinates:
/// `dR/d(side k) = 2 t_k`, `dR/d(diagonal k) = 2 s_k`.
pub fn residual_and_gradient(e: &EmbeddingSpec, c: &Config4) -> (f64, [f64; 8]) {
    let v = test_map(e, c);
    let jac = distance_jacobian(e, c);
    let weights = [
        2.0 * v.t[0],
        2.0 * v.t[1],
        2.0 * v.t[2],
        2.0 * v.t[3],
        2.0 * v.s[0],
        2.0 * v.s[1],
    ];
    let mut g = [0.0; 8];
    for (w, row) in weights.iter().zip(&jac) {
        for k in 0..8 {
            g[k] += w * row[k];
        }
    }
    (v.norm_squared(), g)
}

/// Central-difference gradient along great circles.
pub fn numeric_gradient(e: &EmbeddingSpec, c: &Config4, h: f64) -> [f64; 8] {
    let mut g = [0.0; 8];
    for (k, gk) in g.iter_mut().enumerate() {
        let mut dir = [0.0; 8];
        dir[k] = 1.0;
        let plus = test_map(e, &exp_map(c, &dir, h)).norm_squared();
        let minus = test_map(e, &exp_map(c, &dir, -h)).norm_squared();
        *gk = (plus - minus) / (2.0 * h);
    }
    g
}

/// Smallest pairwise great-circle distance among the four points.
pub fn distinct_margin(c: &Config4) -> f64 {
    PAIRS
        .iter()
        .map(|&(i, j)| geodesic(&c[i], &c[j]))
        .fold(f64::INFINITY, f64::min)
}

/// Geodesic distance in `(S^2)^4` to the set of configurations `(x,y,x,y)`.
pub fn distance_to_y(c: &Config4) -> f64 {
    let a = geodesic(&c[0], &c[2]);
    let b = geodesic(&c[1], &c[3]);
    ((a * a + b * b) / 2.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const SQUARE: Config4 = [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, -1.0, 0.0],
    ];

    fn random_config(rng: &mut ChaCha8Rng) -> Config4 {
        [(); 4].map(|_| {
            normalize(&[
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ])
        })
    }

    #[test]
    fn square_is_a_zero() {
        let v = test_map(&EmbeddingSpec::round(1.0), &SQUARE);
        assert_eq!(v.norm_squared(), 0.0);
        let d = distance_data(&EmbeddingSpec::round(1.0), &SQUARE);
        assert!((d.d12 - 2f64.sqrt()).abs() < 1e-15);
        assert!((d.d13 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn hand_evaluated_config() {
        let c = [
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, -1.0, 0.0],
        ];
        let v = test_map(&EmbeddingSpec::round(1.0), &c);
        let r2 = 2f64.sqrt();
        for t in v.t {
            assert!(t.abs() < 1e-15);
        }
        assert!((v.s[0] - (r2 - 2.0) / 2.0).abs() < 1e-15);
        assert!((v.s[1] - (2.0 - r2) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn group_has_eight_elements_acting_faithfully() {
        let labels = [1, 2, 3, 4];
        let images: std::collections::HashSet<[i32; 4]> =
            D8::all().iter().map(|g| g.act_config(labels)).collect();
        assert_eq!(images.len(), 8);
        assert_eq!(D8::OMEGA.act_config(labels), [2, 3, 4, 1]);
        assert_eq!(D8::J.act_config(labels), [4, 3, 2, 1]);
    }

    #[test]
    fn equivariance_and_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let e = EmbeddingSpec::ellipsoid(1.0, 1.3, 0.7).unwrap();
        for _ in 0..50 {
            let c = random_config(&mut rng);
            let v = test_map(&e, &c);
            let arr = v.as_array();
            assert!((arr[0] + arr[1] + arr[2] + arr[3]).abs() < 1e-12);
            assert!((arr[4] + arr[5]).abs() < 1e-12);
            for g in D8::all() {
                let lhs = test_map(&e, &g.act_config(c)).as_array();
                let rhs = g.act_value(&v).as_array();
                for k in 0..6 {
                    assert!((lhs[k] - rhs[k]).abs() < 1e-12);
                }
                let r = test_map(&e, &g.act_config(c)).norm_squared();
                assert!((r - v.norm_squared()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gradient_vanishes_at_zero() {
        let (r, g) = residual_and_gradient(&EmbeddingSpec::round(1.0), &SQUARE);
        assert_eq!(r, 0.0);
        assert!(g.iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn analytic_gradient_matches_numeric() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let e = EmbeddingSpec::radial(&[(2, 1, 0.15)]).unwrap();
        for _ in 0..10 {
            let c = random_config(&mut rng);
            let (_, ga) = residual_and_gradient(&e, &c);
            let gn = numeric_gradient(&e, &c, 1e-6);
            let diff: f64 = ga
                .iter()
                .zip(&gn)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            let n: f64 = ga.iter().map(|a| a * a).sum::<f64>().sqrt();
            assert!(diff <= 1e-6 * n, "{diff} vs {n}");
        }
    }

    #[test]
    fn margins() {
        assert!((distinct_margin(&SQUARE) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((distance_to_y(&SQUARE) - std::f64::consts::PI).abs() < 1e-15);
        let degenerate = [SQUARE[0], SQUARE[1], SQUARE[0], SQUARE[1]];
        assert_eq!(distance_to_y(&degenerate), 0.0);
    }
}
