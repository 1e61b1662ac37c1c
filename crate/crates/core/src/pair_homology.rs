//! Homology of the pairs `((S^d)^4, Y)` with `Y = {(x, y, x, y)}` for
//! `d = 2` (sphere case) and `d = 1` (circle case), as `Z[Z4]`-modules, and
//! the shift to the cohomology of the complement.
//!
//! Homology classes of a product of spheres are indexed by subsets of the
//! factors. Module actions in this file use the basis convention: the action
//! matrix sends the basis vector of a subset `S` to `±` the basis vector of
//! `S + 1`, the sign being the Koszul sign for odd-dimensional factors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cohomology::cohomology;
use crate::linalg::{homology_at, kernel_basis, smith_normal_form, FinAbGroup, IntMatrix};
use crate::zgmodule::{is_equivariant, Coeff, ModuleError, ZGModule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("unsupported product space: factor dimension {factor_dim}, {copies} copies")]
    UnsupportedShape { factor_dim: usize, copies: usize },
    #[error("inclusion map in degree {0} is not equivariant")]
    NotEquivariant(usize),
    #[error("inclusion map in degree {0} is not injective")]
    NotInjective(usize),
    #[error("cokernel in degree {0} has torsion")]
    TorsionCokernel(usize),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// `(S^factor_dim)^copies` with `w` shifting the factors cyclically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProductSpace {
    pub factor_dim: usize,
    pub copies: usize,
}

impl ProductSpace {
    pub fn new(factor_dim: usize, copies: usize) -> Result<Self, PairError> {
        if !matches!(factor_dim, 1 | 2) || !matches!(copies, 2 | 4) {
            return Err(PairError::UnsupportedShape { factor_dim, copies });
        }
        Ok(ProductSpace { factor_dim, copies })
    }

    pub fn top_degree(&self) -> usize {
        self.factor_dim * self.copies
    }

    /// Subsets of the factors carrying the classes of degree `k`, in
    /// lexicographic order. Empty unless `factor_dim | k`.
    pub fn basis(&self, k: usize) -> Vec<Vec<usize>> {
        if !k.is_multiple_of(self.factor_dim) || k > self.top_degree() {
            return Vec::new();
        }
        combinations(self.copies, k / self.factor_dim)
    }

    /// Action of the cyclic shift on `H_k`.
    pub fn action(&self, k: usize) -> IntMatrix {
        let basis = self.basis(k);
        let mut a = IntMatrix::zeros(basis.len(), basis.len());
        for (j, s) in basis.iter().enumerate() {
            let shifted: Vec<usize> = s.iter().map(|&i| (i + 1) % self.copies).collect();
            let (sorted, sign) = self.sort_with_sign(&shifted);
            let i = basis
                .iter()
                .position(|b| *b == sorted)
                .expect("shifted subset");
            a[(i, j)] = BigInt::from(sign);
        }
        a
    }

    /// Sorts a product of factor classes, returning the Koszul sign.
    fn sort_with_sign(&self, factors: &[usize]) -> (Vec<usize>, i64) {
        let mut v = factors.to_vec();
        let mut swaps = 0;
        for i in 0..v.len() {
            for j in 0..v.len() - 1 - i {
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    swaps += 1;
                }
            }
        }
        let sign = if self.factor_dim % 2 == 1 && swaps % 2 == 1 {
            -1
        } else {
            1
        };
        (v, sign)
    }

    /// Homology module in degree `k` (rank 0 where the homology vanishes).
    pub fn homology_module(&self, k: usize) -> ZGModule {
        let label = format!("H{k}");
        ZGModule::new(4, self.action(k), label, Coeff::Z).expect("shift has order dividing 4")
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Graded homology of a product space, one module per degree `0..=top`.
pub fn product_homology(space: &ProductSpace) -> Vec<ZGModule> {
    (0..=space.top_degree())
        .map(|k| space.homology_module(k))
        .collect()
}

/// Equivariant map `H_k(source) -> H_k(target)`.
#[derive(Debug, Clone)]
pub struct EquivariantMap {
    pub degree: usize,
    pub matrix: IntMatrix,
    pub source: ZGModule,
    pub target: ZGModule,
}

impl EquivariantMap {
    pub fn is_equivariant(&self) -> bool {
        is_equivariant(&self.matrix, &self.source, &self.target)
    }

    pub fn is_injective(&self) -> bool {
        smith_normal_form(&self.matrix).rank() == self.matrix.cols()
    }
}

/// Image of the class of `y`-subset `s` under `(x, y) -> (x, y, x, y)`,
/// computed as the cross product of the diagonal classes `x1 + x3` and
/// `x2 + x4`.
fn diagonal_image(x: &ProductSpace, s: &[usize]) -> Vec<(Vec<usize>, i64)> {
    let fibres = [[0usize, 2], [1, 3]];
    let mut terms: Vec<(Vec<usize>, i64)> = vec![(Vec::new(), 1)];
    for &a in s {
        let mut next = Vec::new();
        for (prefix, coeff) in &terms {
            for &i in &fibres[a] {
                if prefix.contains(&i) {
                    continue;
                }
                let mut p = prefix.clone();
                p.push(i);
                next.push((p, *coeff));
            }
        }
        terms = next;
    }
    terms
        .into_iter()
        .map(|(p, c)| {
            let (sorted, sign) = x.sort_with_sign(&p);
            (sorted, c * sign)
        })
        .collect()
}

/// Matrix of the inclusion `Y -> X` in degree `k`, derived from the cross
/// product of diagonal classes.
pub fn inclusion_matrix(x: &ProductSpace, y: &ProductSpace, k: usize) -> IntMatrix {
    let xb = x.basis(k);
    let yb = y.basis(k);
    let mut m = IntMatrix::zeros(xb.len(), yb.len());
    for (j, s) in yb.iter().enumerate() {
        for (subset, c) in diagonal_image(x, s) {
            let i = xb.iter().position(|b| *b == subset).expect("image subset");
            m[(i, j)] += BigInt::from(c);
        }
    }
    m
}

/// The sphere-case inclusion maps in degrees 2 and 4, entered as given:
/// `y1 -> x1 + x3`, `y2 -> x2 + x4`, `y1y2 -> x1x2 + x2x3 + x3x4 + x1x4`.
pub fn sphere_inclusion_given(k: usize) -> Option<IntMatrix> {
    match k {
        0 => Some(IntMatrix::identity(1)),
        2 => Some(IntMatrix::from_rows(&[[1, 0], [0, 1], [1, 0], [0, 1]])),
        // X basis order: x1x2, x1x3, x1x4, x2x3, x2x4, x3x4
        4 => Some(IntMatrix::from_rows(&[[1], [0], [1], [1], [0], [1]])),
        _ => None,
    }
}

/// Which pair is being studied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairCase {
    /// `(S^2)^4` relative to `Y = (S^2)^2`
    Sphere,
    /// `(S^1)^4` relative to `Y = (S^1)^2`
    Circle,
}

impl std::str::FromStr for PairCase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sphere" => Ok(PairCase::Sphere),
            "circle" => Ok(PairCase::Circle),
            other => Err(format!("unknown case `{other}` (expected sphere|circle)")),
        }
    }
}

impl PairCase {
    pub fn spaces(self) -> (ProductSpace, ProductSpace) {
        let d = match self {
            PairCase::Sphere => 2,
            PairCase::Circle => 1,
        };
        (
            ProductSpace::new(d, 4).expect("valid shape"),
            ProductSpace::new(d, 2).expect("valid shape"),
        )
    }

    pub fn top_degree(self) -> usize {
        self.spaces().0.top_degree()
    }

    /// Inclusion maps in every degree where `H_k(Y)` is nonzero. The sphere
    /// case uses the given matrices; the circle case the cross-product rule.
    pub fn inclusion_maps(self) -> Vec<EquivariantMap> {
        let (x, y) = self.spaces();
        (0..=y.top_degree())
            .filter(|&k| !y.basis(k).is_empty())
            .map(|k| {
                let matrix = match self {
                    PairCase::Sphere => {
                        sphere_inclusion_given(k).expect("given in every degree of Y")
                    }
                    PairCase::Circle => inclusion_matrix(&x, &y, k),
                };
                EquivariantMap {
                    degree: k,
                    matrix,
                    source: y.homology_module(k),
                    target: x.homology_module(k),
                }
            })
            .collect()
    }

    pub fn relative_table(self) -> Result<RelativeHomologyTable, PairError> {
        let (x, _) = self.spaces();
        relative_table(&x, &self.inclusion_maps())
    }
}

/// `H_k(X, Y)` for `k = 0..=top`, as modules with the induced action.
#[derive(Debug, Clone)]
pub struct RelativeHomologyTable {
    pub top_degree: usize,
    /// Sign by which `w` acts on the fundamental class of `X`.
    pub orientation_sign: i64,
    pub degrees: Vec<ZGModule>,
    pub euler_x: i64,
    pub euler_y: i64,
}

impl RelativeHomologyTable {
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .enumerate()
            .map(|(k, m)| {
                if k % 2 == 0 {
                    m.rank() as i64
                } else {
                    -(m.rank() as i64)
                }
            })
            .sum()
    }
}

/// Cokernel of an injective equivariant map with torsion-free cokernel,
/// with the induced action.
fn cokernel_module(map: &EquivariantMap) -> Result<ZGModule, PairError> {
    let snf = smith_normal_form(&map.matrix);
    let r = snf.rank();
    if snf.invariant_factors().iter().any(|d| !d.is_one()) {
        return Err(PairError::TorsionCokernel(map.degree));
    }
    let n = map.matrix.rows();
    let conj = &(&snf.left * map.target.action()) * &snf.left_inv;
    let action = conj.submatrix(r..n, r..n);
    Ok(ZGModule::new(
        4,
        action,
        format!("H{}(X,Y)", map.degree),
        Coeff::Z,
    )?)
}

/// Relative homology from the long exact sequence of the pair, assuming every
/// inclusion map is injective (so `H_k(X, Y) = coker(H_k(Y) -> H_k(X))`).
pub fn relative_table(
    x: &ProductSpace,
    maps: &[EquivariantMap],
) -> Result<RelativeHomologyTable, PairError> {
    let by_degree: BTreeMap<usize, &EquivariantMap> = maps.iter().map(|m| (m.degree, m)).collect();
    let mut degrees = Vec::new();
    let mut euler_y = 0i64;
    for k in 0..=x.top_degree() {
        let hx = x.homology_module(k);
        let module = match by_degree.get(&k) {
            Some(map) => {
                if !map.is_equivariant() {
                    return Err(PairError::NotEquivariant(k));
                }
                if !map.is_injective() {
                    return Err(PairError::NotInjective(k));
                }
                let sign = if k % 2 == 0 { 1 } else { -1 };
                euler_y += sign * map.source.rank() as i64;
                cokernel_module(map)?
            }
            None => hx.with_label(format!("H{k}(X,Y)")),
        };
        degrees.push(module);
    }
    let euler_x = (0..=x.top_degree())
        .map(|k| {
            let r = x.basis(k).len() as i64;
            if k % 2 == 0 {
                r
            } else {
                -r
            }
        })
        .sum();
    let orientation_sign = x.action(x.top_degree())[(0, 0)].to_i64().expect("sign");
    Ok(RelativeHomologyTable {
        top_degree: x.top_degree(),
        orientation_sign,
        degrees,
        euler_x,
        euler_y,
    })
}

/// `H^i(X \ Y) = H_(top - i)(X, Y)`, twisted by the orientation character
/// of `X` (trivial in the sphere case).
pub fn dual_cohomology(table: &RelativeHomologyTable) -> Vec<ZGModule> {
    (0..=table.top_degree)
        .map(|i| {
            let m = &table.degrees[table.top_degree - i];
            m.twisted(table.orientation_sign)
                .expect("twisting by a sign keeps the order")
                .with_label(format!("H^{i}(Omega)"))
        })
        .collect()
}

/// Isomorphism invariants of a module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub rank: usize,
    pub char_poly: Vec<BigInt>,
    pub invariants: FinAbGroup,
    pub coinvariants: FinAbGroup,
    pub cohomology: Vec<FinAbGroup>,
}

/// Characteristic polynomial coefficients `c_0, ..., c_n` (monic) by the
/// Faddeev-LeVerrier recursion; the divisions are exact over the integers.
pub fn char_poly(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = IntMatrix::zeros(n, n);
    for k in 1..=n {
        m = (a * &m).add(&IntMatrix::identity(n).scale(&coeffs[n - k + 1]));
        let am = a * &m;
        let trace: BigInt = (0..n).map(|i| am[(i, i)].clone()).sum();
        coeffs[n - k] = -trace / BigInt::from(k);
    }
    coeffs
}

pub fn fingerprint(m: &ZGModule) -> Fingerprint {
    let aug = m.augmentation_matrix();
    let invariants = homology_at(&IntMatrix::zeros(m.rank(), 0), &aug).expect("zero composite");
    let coinvariants = homology_at(&aug, &IntMatrix::zeros(0, m.rank())).expect("zero composite");
    Fingerprint {
        rank: m.rank(),
        char_poly: char_poly(m.action()),
        invariants: invariants.group,
        coinvariants: coinvariants.group,
        cohomology: cohomology(m, 3, Coeff::Z).groups(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Identification {
    /// Name of the candidate for which an equivariant unimodular basis change
    /// was found.
    pub matched: Option<String>,
    /// `P` with `P * action(m) = action(candidate) * P`, `|det P| = 1`.
    pub basis_change: Option<IntMatrix>,
    pub fingerprint: Fingerprint,
    /// Candidates sharing the fingerprint (informational).
    pub same_fingerprint: Vec<String>,
}

/// Coefficient bound for the search over the lattice of intertwiners.
pub const IDENTIFY_COEFF_BOUND: i64 = 3;

/// Lattice basis of the equivariant maps `source -> target`.
pub fn intertwiner_basis(source: &ZGModule, target: &ZGModule) -> Vec<IntMatrix> {
    let (rs, rt) = (source.rank(), target.rank());
    let n = rs * rt;
    if n == 0 {
        return Vec::new();
    }
    // unknown P (rt x rs), row-major index i * rs + j; equation P A_s - A_t P = 0
    let a_s = source.action();
    let a_t = target.action();
    let mut eq = IntMatrix::zeros(n, n);
    for i in 0..rt {
        for j in 0..rs {
            let row = i * rs + j;
            for k in 0..rs {
                eq[(row, i * rs + k)] += &a_s[(k, j)];
            }
            for k in 0..rt {
                eq[(row, k * rs + j)] -= &a_t[(i, k)];
            }
        }
    }
    let mut basis: Vec<Vec<BigInt>> = kernel_basis(&eq).columns();
    size_reduce(&mut basis);
    basis
        .iter()
        .map(|v| {
            let mut p = IntMatrix::zeros(rt, rs);
            for i in 0..rt {
                for j in 0..rs {
                    p[(i, j)] = v[i * rs + j].clone();
                }
            }
            p
        })
        .collect()
}

/// Greedy pairwise size reduction of a lattice basis (sum of squares norm).
fn size_reduce(basis: &mut [Vec<BigInt>]) {
    let norm = |v: &[BigInt]| -> BigInt { v.iter().map(|x| x * x).sum() };
    loop {
        let mut improved = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                for sign in [1i64, -1] {
                    let cand: Vec<BigInt> = basis[i]
                        .iter()
                        .zip(&basis[j])
                        .map(|(a, b)| a + b * BigInt::from(sign))
                        .collect();
                    if norm(&cand) < norm(&basis[i]) {
                        basis[i] = cand;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
}

/// Coefficient vectors in `[-bound, bound]^dim`, grouped by increasing max-norm.
fn coefficient_vectors(dim: usize, bound: i64) -> impl Iterator<Item = Vec<i64>> {
    (1..=bound).flat_map(move |level| {
        let side = (2 * level + 1) as u64;
        let total = side.pow(dim as u32);
        (0..total).filter_map(move |mut code| {
            let mut v = Vec::with_capacity(dim);
            for _ in 0..dim {
                v.push((code % side) as i64 - level);
                code /= side;
            }
            (v.iter().any(|x| x.abs() == level)).then_some(v)
        })
    })
}

/// Searches for an equivariant isomorphism from `m` onto one of the
/// candidates.
pub fn identify_module(m: &ZGModule, candidates: &[ZGModule]) -> Identification {
    let fp = fingerprint(m);
    let mut same_fingerprint = Vec::new();
    for cand in candidates {
        if cand.order() != m.order() || cand.coeff() != m.coeff() || cand.rank() != m.rank() {
            continue;
        }
        let cand_fp = fingerprint(cand);
        if cand_fp != fp {
            continue;
        }
        same_fingerprint.push(cand.label().to_string());
        if m.rank() == 0 {
            return Identification {
                matched: Some(cand.label().to_string()),
                basis_change: Some(IntMatrix::zeros(0, 0)),
                fingerprint: fp,
                same_fingerprint,
            };
        }
        let basis = intertwiner_basis(m, cand);
        for coeffs in coefficient_vectors(basis.len(), IDENTIFY_COEFF_BOUND) {
            let mut p = IntMatrix::zeros(cand.rank(), m.rank());
            for (c, b) in coeffs.iter().zip(&basis) {
                if *c != 0 {
                    p = p.add(&b.scale(&BigInt::from(*c)));
                }
            }
            if p.det().abs().is_one() {
                return Identification {
                    matched: Some(cand.label().to_string()),
                    basis_change: Some(p),
                    fingerprint: fp,
                    same_fingerprint,
                };
            }
        }
    }
    Identification {
        matched: None,
        basis_change: None,
        fingerprint: fp,
        same_fingerprint,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zgmodule::{direct_sum, z4_module, ModuleName};

    fn named(names: &[ModuleName]) -> Vec<ZGModule> {
        names.iter().map(|&n| z4_module(n)).collect()
    }

    #[test]
    fn product_ranks() {
        let x = ProductSpace::new(2, 4).unwrap();
        let ranks: Vec<usize> = (0..=8).map(|k| x.basis(k).len()).collect();
        assert_eq!(ranks, vec![1, 0, 4, 0, 6, 0, 4, 0, 1]);
        assert_eq!(ranks.iter().sum::<usize>(), 16);
        assert!(matches!(
            ProductSpace::new(3, 4),
            Err(PairError::UnsupportedShape { .. })
        ));
    }

    #[test]
    fn sphere_degree_four_orbits() {
        let x = ProductSpace::new(2, 4).unwrap();
        let h4 = x.homology_module(4);
        let want = direct_sum(
            &z4_module(ModuleName::Regular),
            &z4_module(ModuleName::Coset2),
        )
        .unwrap();
        assert!(identify_module(&h4, &[want]).matched.is_some());
        let y = ProductSpace::new(2, 2).unwrap();
        assert_eq!(y.action(4), IntMatrix::identity(1));
    }

    #[test]
    fn circle_signs() {
        let x = ProductSpace::new(1, 4).unwrap();
        assert_eq!(x.action(4)[(0, 0)], BigInt::from(-1));
        assert_eq!(x.action(1).pow(4), IntMatrix::identity(4));
        // (S^1)^2: x1 x2 -> x2 x1 = -x1 x2
        let torus = ProductSpace::new(1, 2).unwrap();
        assert_eq!(torus.action(2)[(0, 0)], BigInt::from(-1));
        // torus homology ranks 1, 2, 1
        let ranks: Vec<usize> = (0..=2).map(|k| torus.basis(k).len()).collect();
        assert_eq!(ranks, vec![1, 2, 1]);
    }

    #[test]
    fn given_maps_agree_with_cross_products() {
        let (x, y) = PairCase::Sphere.spaces();
        for k in [0, 2, 4] {
            assert_eq!(
                inclusion_matrix(&x, &y, k),
                sphere_inclusion_given(k).unwrap(),
                "degree {k}"
            );
        }
    }

    #[test]
    fn inclusion_maps_are_equivariant_and_injective() {
        for case in [PairCase::Sphere, PairCase::Circle] {
            for map in case.inclusion_maps() {
                assert!(map.is_equivariant(), "{case:?} degree {}", map.degree);
                assert!(map.is_injective());
            }
        }
    }

    #[test]
    fn sphere_relative_table() {
        let t = PairCase::Sphere.relative_table().unwrap();
        let ranks: Vec<usize> = t.degrees.iter().map(|m| m.rank()).collect();
        assert_eq!(ranks, vec![0, 0, 2, 0, 5, 0, 4, 0, 1]);
        assert_eq!(t.euler_characteristic(), 12);
        assert_eq!(t.euler_x - t.euler_y, 12);
        let n = identify_module(&t.degrees[2], &named(&[ModuleName::N]));
        assert_eq!(n.matched.as_deref(), Some("N"));
        let m_plus = direct_sum(&z4_module(ModuleName::M), &z4_module(ModuleName::Coset2)).unwrap();
        assert!(identify_module(&t.degrees[4], &[m_plus]).matched.is_some());
    }

    #[test]
    fn quotient_by_diagonal_classes_is_n() {
        // Z^4 / <x1 + x3, x2 + x4> with basis (x1, x2): x1 -> x2, x2 -> x3 = -x1
        let q = ZGModule::new(4, IntMatrix::from_rows(&[[0, -1], [1, 0]]), "q", Coeff::Z).unwrap();
        let id = identify_module(&q, &named(&[ModuleName::N]));
        let p = id.basis_change.unwrap();
        assert_eq!(&p * q.action(), z4_module(ModuleName::N).action() * &p);
    }

    #[test]
    fn regular_is_not_four_trivials() {
        let four = (0..3).fold(z4_module(ModuleName::Trivial), |acc, _| {
            direct_sum(&acc, &z4_module(ModuleName::Trivial)).unwrap()
        });
        let id = identify_module(&z4_module(ModuleName::Regular), &[four]);
        assert!(id.matched.is_none());
        assert!(id.same_fingerprint.is_empty());
    }

    #[test]
    fn identification_is_basis_invariant() {
        let m = z4_module(ModuleName::M);
        let p = IntMatrix::from_rows(&[[0, 1, 0], [1, 0, 0], [1, 1, 1]]);
        let p_inv = IntMatrix::from_rows(&[[0, 1, 0], [1, 0, 0], [-1, -1, 1]]);
        assert_eq!(&p * &p_inv, IntMatrix::identity(3));
        let conj = &(&p * m.action()) * &p_inv;
        let permuted = ZGModule::new(4, conj, "M'", Coeff::Z).unwrap();
        assert_eq!(
            identify_module(&permuted, std::slice::from_ref(&m))
                .matched
                .as_deref(),
            Some("M")
        );
        assert_eq!(
            identify_module(&m, std::slice::from_ref(&m))
                .matched
                .as_deref(),
            Some("M")
        );
    }

    #[test]
    fn sphere_dual_cohomology() {
        let t = PairCase::Sphere.relative_table().unwrap();
        let h = dual_cohomology(&t);
        let m_plus = direct_sum(&z4_module(ModuleName::M), &z4_module(ModuleName::Coset2)).unwrap();
        let expect: [(usize, Vec<ZGModule>); 4] = [
            (0, named(&[ModuleName::Trivial])),
            (2, named(&[ModuleName::Regular])),
            (4, vec![m_plus]),
            (6, named(&[ModuleName::N])),
        ];
        for (deg, cands) in expect {
            assert!(
                identify_module(&h[deg], &cands).matched.is_some(),
                "degree {deg}"
            );
        }
        for deg in [1, 3, 5, 7, 8] {
            assert_eq!(h[deg].rank(), 0, "degree {deg}");
        }
    }

    #[test]
    fn circle_table() {
        let t = PairCase::Circle.relative_table().unwrap();
        let ranks: Vec<usize> = t.degrees.iter().map(|m| m.rank()).collect();
        assert_eq!(ranks, vec![0, 2, 5, 4, 1]);
        assert_eq!(t.euler_characteristic(), 0);
        assert_eq!(t.orientation_sign, -1);
        let h = dual_cohomology(&t);
        assert!(identify_module(&h[0], &named(&[ModuleName::Trivial]))
            .matched
            .is_some());
    }

    #[test]
    fn every_action_has_order_four() {
        for case in [PairCase::Sphere, PairCase::Circle] {
            for m in case.relative_table().unwrap().degrees {
                assert_eq!(m.action().pow(4), IntMatrix::identity(m.rank()));
            }
        }
    }

    #[test]
    fn char_poly_of_rotation() {
        assert_eq!(
            char_poly(z4_module(ModuleName::N).action()),
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]
        );
    }
}
