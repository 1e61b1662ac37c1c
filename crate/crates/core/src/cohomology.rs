//! Cohomology of a finite cyclic group with coefficients in a `ZGModule`,
//! computed from the 2-periodic resolution. Cochains in every degree are the
//! module itself; the coboundary out of degree `p` is `A - I` for even `p`
//! and the norm `I + A + ... + A^(n-1)` for odd `p`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{
    homology_at_mod, is_exact_at, solve_integer, FinAbGroup, IntMatrix, Subquotient,
};
use crate::zgmodule::{
    coset_module, is_equivariant, named_module, z4_module, Coeff, CyclicGroup, ModuleName, ZGModule,
};

pub const DEFAULT_MAX_DEGREE: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("long exact sequence fails to be exact at {0}")]
    NotExact(String),
    #[error("not a short exact sequence of modules: {0}")]
    InvalidSequence(String),
    #[error("degree {0} exceeds the computed range")]
    DegreeOutOfRange(usize),
}

/// The periodic cochain complex of a module, up to a top degree.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    pub module: ZGModule,
    /// `differentials[p]` maps degree `p` to degree `p + 1`.
    pub differentials: Vec<IntMatrix>,
}

impl CochainComplex {
    pub fn new(module: &ZGModule, max_degree: usize) -> Self {
        let aug = module.augmentation_matrix();
        let norm = module.norm_matrix();
        let differentials = (0..=max_degree)
            .map(|p| {
                if p % 2 == 0 {
                    aug.clone()
                } else {
                    norm.clone()
                }
            })
            .collect();
        CochainComplex {
            module: module.clone(),
            differentials,
        }
    }

    /// Coboundary out of degree `p`.
    pub fn d(&self, p: usize) -> &IntMatrix {
        &self.differentials[p]
    }

    /// Coboundary into degree `p` (zero map into degree 0).
    pub fn d_into(&self, p: usize) -> IntMatrix {
        if p == 0 {
            IntMatrix::zeros(self.module.rank(), 0)
        } else {
            self.differentials[p - 1].clone()
        }
    }

    /// `d_{p+1} d_p = 0` for every consecutive pair, modulo the coefficients.
    pub fn squares_to_zero(&self) -> bool {
        let m = self.module.coeff().modulus();
        self.differentials
            .windows(2)
            .all(|w| (&w[1] * &w[0]).reduce_mod(m).is_zero())
    }
}

/// `H^p(Z_n; module)` for `p = 0..=max_degree`, each with representative
/// cocycles and a coordinate map.
#[derive(Debug, Clone)]
pub struct CohomologyTable {
    pub module: ZGModule,
    pub degrees: Vec<Subquotient>,
}

impl CohomologyTable {
    pub fn max_degree(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn group(&self, p: usize) -> &FinAbGroup {
        &self.degrees[p].group
    }

    pub fn groups(&self) -> Vec<FinAbGroup> {
        self.degrees.iter().map(|d| d.group.clone()).collect()
    }

    pub fn at(&self, p: usize) -> Result<&Subquotient, CohomologyError> {
        self.degrees
            .get(p)
            .ok_or(CohomologyError::DegreeOutOfRange(p))
    }
}

/// Cohomology of `module` (reduced mod 2 first when `coeff` is F2).
pub fn cohomology(module: &ZGModule, max_degree: usize, coeff: Coeff) -> CohomologyTable {
    let module = match (coeff, module.coeff()) {
        (Coeff::F2, Coeff::Z) => crate::zgmodule::mod2_reduce(module),
        _ => module.clone(),
    };
    // one extra differential so the top degree has its outgoing map
    let complex = CochainComplex::new(&module, max_degree + 1);
    let modulus = module.coeff().modulus();
    let degrees = (0..=max_degree)
        .map(|p| {
            homology_at_mod(&complex.d_into(p), complex.d(p), modulus)
                .expect("periodic resolution squares to zero")
        })
        .collect();
    CohomologyTable { module, degrees }
}

/// Homomorphism between two finitely generated abelian groups, written on
/// their canonical generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupHom {
    pub source: Vec<BigInt>,
    pub target: Vec<BigInt>,
    pub matrix: IntMatrix,
}

impl GroupHom {
    pub fn is_zero(&self) -> bool {
        (0..self.matrix.rows()).all(|i| {
            let o = &self.target[i];
            self.matrix.row(i).iter().all(|x| {
                if o.is_zero() {
                    x.is_zero()
                } else {
                    (x % o).is_zero()
                }
            })
        })
    }

    pub fn is_injective(&self) -> bool {
        let zero_in = IntMatrix::zeros(self.source.len(), 0);
        is_exact_at(&zero_in, &self.matrix, &self.source, &self.target)
    }

    pub fn is_surjective(&self) -> bool {
        let zero_out = IntMatrix::zeros(0, self.target.len());
        is_exact_at(&self.matrix, &zero_out, &self.target, &[])
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn compose(&self, first: &GroupHom) -> GroupHom {
        GroupHom {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: &self.matrix * &first.matrix,
        }
    }
}

/// Map between cohomology groups induced by a cochain-level matrix.
fn induced(source: &Subquotient, target: &Subquotient, cochain_map: &IntMatrix) -> GroupHom {
    let cols: Vec<Vec<BigInt>> = source
        .generators
        .iter()
        .map(|g| {
            let image = cochain_map.mul_vec(g);
            target
                .coordinates(&image)
                .expect("cochain map sends cocycles to cocycles")
        })
        .collect();
    GroupHom {
        source: source.orders.clone(),
        target: target.orders.clone(),
        matrix: IntMatrix::from_columns(target.orders.len(), &cols),
    }
}

/// Multiplication by the periodicity class `H^p -> H^(p+2)`. On periodic
/// cochains this is the identity; in degree 0 it projects invariants onto
/// `ker(A - I) / im(norm)`.
pub fn u_action(module: &ZGModule, p: usize, coeff: Coeff) -> GroupHom {
    let table = cohomology(module, p + 2, coeff);
    let identity = IntMatrix::identity(table.module.rank());
    induced(&table.degrees[p], &table.degrees[p + 2], &identity)
}

/// `0 -> sub --inclusion--> mid --projection--> quot -> 0`.
#[derive(Debug, Clone)]
pub struct ShortExactSequence {
    pub sub: ZGModule,
    pub mid: ZGModule,
    pub quot: ZGModule,
    pub inclusion: IntMatrix,
    pub projection: IntMatrix,
}

impl ShortExactSequence {
    pub fn validate(&self) -> Result<(), CohomologyError> {
        let bad = |s: &str| Err(CohomologyError::InvalidSequence(s.to_string()));
        if self.sub.order() != self.mid.order() || self.mid.order() != self.quot.order() {
            return bad("group orders differ");
        }
        if self.inclusion.rows() != self.mid.rank() || self.inclusion.cols() != self.sub.rank() {
            return bad("inclusion has the wrong shape");
        }
        if self.projection.rows() != self.quot.rank() || self.projection.cols() != self.mid.rank() {
            return bad("projection has the wrong shape");
        }
        if !is_equivariant(&self.inclusion, &self.sub, &self.mid) {
            return bad("inclusion is not equivariant");
        }
        if !is_equivariant(&self.projection, &self.mid, &self.quot) {
            return bad("projection is not equivariant");
        }
        let a = self.sub.coordinate_orders();
        let b = self.mid.coordinate_orders();
        let c = self.quot.coordinate_orders();
        let zero_into_a = IntMatrix::zeros(a.len(), 0);
        let zero_out_of_c = IntMatrix::zeros(0, c.len());
        if !is_exact_at(&zero_into_a, &self.inclusion, &a, &b) {
            return bad("inclusion is not injective");
        }
        if !is_exact_at(&self.inclusion, &self.projection, &b, &c) {
            return bad("image of inclusion differs from kernel of projection");
        }
        if !is_exact_at(&self.projection, &zero_out_of_c, &c, &[]) {
            return bad("projection is not surjective");
        }
        Ok(())
    }
}

/// `0 -> Z --norm--> Z[Z_n] -> Z[Z_n]/<norm> -> 0`, the last term being `M`
/// for `n = 4`.
pub fn norm_sequence() -> ShortExactSequence {
    let quot = z4_module(ModuleName::M);
    ShortExactSequence {
        sub: z4_module(ModuleName::Trivial),
        mid: z4_module(ModuleName::Regular),
        quot,
        inclusion: IntMatrix::from_rows(&[[1], [1], [1], [1]]),
        projection: IntMatrix::from_rows(&[[1, 0, 0, -1], [0, 1, 0, -1], [0, 0, 1, -1]]),
    }
}

/// `0 -> N --(p,q) -> (p,q,-p,-q)--> Z[Z4] -> L -> 0`.
pub fn n_sequence() -> ShortExactSequence {
    ShortExactSequence {
        sub: z4_module(ModuleName::N),
        mid: z4_module(ModuleName::Regular),
        quot: z4_module(ModuleName::L),
        inclusion: IntMatrix::from_rows(&[[1, 0], [0, 1], [-1, 0], [0, -1]]),
        projection: IntMatrix::from_rows(&[[1, 0, 1, 0], [0, 1, 0, 1]]),
    }
}

/// `0 -> Z --x2--> Z -> Z/2 -> 0` with trivial action of `Z_n`.
pub fn bockstein_sequence(n: usize) -> ShortExactSequence {
    let g = CyclicGroup::new(n).expect("positive order");
    let t = named_module(ModuleName::Trivial, g).expect("trivial module");
    ShortExactSequence {
        sub: t.clone(),
        mid: t.clone(),
        quot: crate::zgmodule::mod2_reduce(&t),
        inclusion: IntMatrix::from_rows(&[[2]]),
        projection: IntMatrix::from_rows(&[[1]]),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LesPosition {
    pub name: String,
    pub group: String,
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LesReport {
    pub positions: Vec<LesPosition>,
}

impl LesReport {
    pub fn all_exact(&self) -> bool {
        self.positions.iter().all(|p| p.exact)
    }
}

/// Connecting map `H^p(quot) -> H^(p+1)(sub)` by the snake construction on
/// cochains.
fn connecting_map(
    ses: &ShortExactSequence,
    p: usize,
    quot_table: &CohomologyTable,
    sub_table: &CohomologyTable,
    mid_complex: &CochainComplex,
) -> GroupHom {
    let modulus_c = ses.quot.coeff().modulus();
    let modulus_b = ses.mid.coeff().modulus();
    let lift_matrix = with_relations(&ses.projection, modulus_c);
    let pull_matrix = with_relations(&ses.inclusion, modulus_b);
    let source = &quot_table.degrees[p];
    let target = &sub_table.degrees[p + 1];
    let cols: Vec<Vec<BigInt>> = source
        .generators
        .iter()
        .map(|z| {
            let lift = solve_integer(&lift_matrix, z).expect("projection is surjective");
            let b = lift[..ses.mid.rank()].to_vec();
            let db = mid_complex.d(p).mul_vec(&b);
            let pre = solve_integer(&pull_matrix, &db)
                .expect("coboundary of a lift lies in the submodule");
            let a = pre[..ses.sub.rank()].to_vec();
            target.coordinates(&a).expect("snake image is a cocycle")
        })
        .collect();
    GroupHom {
        source: source.orders.clone(),
        target: target.orders.clone(),
        matrix: IntMatrix::from_columns(target.orders.len(), &cols),
    }
}

/// `[map | modulus * I]`, so that solving against it solves modulo `modulus`.
fn with_relations(map: &IntMatrix, modulus: u64) -> IntMatrix {
    if modulus == 0 {
        map.clone()
    } else {
        map.hstack(&IntMatrix::identity(map.rows()).scale(&BigInt::from(modulus)))
    }
}

/// Checks exactness of the long exact cohomology sequence of `ses` at every
/// position from `H^0(sub)` through `H^max_degree(quot)`.
pub fn les_verify(
    ses: &ShortExactSequence,
    max_degree: usize,
) -> Result<LesReport, CohomologyError> {
    ses.validate()?;
    let top = max_degree + 1;
    let ha = cohomology(&ses.sub, top, ses.sub.coeff());
    let hb = cohomology(&ses.mid, top, ses.mid.coeff());
    let hc = cohomology(&ses.quot, top, ses.quot.coeff());
    let mid_complex = CochainComplex::new(&ses.mid, top + 1);

    // the sequence as a flat list of (name, group orders, map to next)
    let mut names = Vec::new();
    let mut groups: Vec<&Subquotient> = Vec::new();
    let mut maps: Vec<GroupHom> = Vec::new();
    for p in 0..=max_degree {
        names.push(format!("H^{p}({})", ses.sub.label()));
        groups.push(&ha.degrees[p]);
        maps.push(induced(&ha.degrees[p], &hb.degrees[p], &ses.inclusion));
        names.push(format!("H^{p}({})", ses.mid.label()));
        groups.push(&hb.degrees[p]);
        maps.push(induced(&hb.degrees[p], &hc.degrees[p], &ses.projection));
        names.push(format!("H^{p}({})", ses.quot.label()));
        groups.push(&hc.degrees[p]);
        maps.push(connecting_map(ses, p, &hc, &ha, &mid_complex));
    }

    let mut positions = Vec::new();
    for k in 0..groups.len() {
        let incoming = if k == 0 {
            IntMatrix::zeros(groups[0].orders.len(), 0)
        } else {
            maps[k - 1].matrix.clone()
        };
        let outgoing = &maps[k];
        let exact = is_exact_at(
            &incoming,
            &outgoing.matrix,
            &groups[k].orders,
            &outgoing.target,
        );
        positions.push(LesPosition {
            name: names[k].clone(),
            group: groups[k].group.to_string(),
            exact,
        });
        if !exact {
            return Err(CohomologyError::NotExact(names[k].clone()));
        }
    }
    Ok(LesReport { positions })
}

#[derive(Debug, Clone, Serialize)]
pub struct ShapiroReport {
    pub induced: Vec<String>,
    pub subgroup: Vec<String>,
    pub matches: bool,
}

/// Compares `H^*(Z_n; Z[Z_n/Z_d])` with `H^*(Z_d; Z)` degreewise.
pub fn shapiro_check(
    group: CyclicGroup,
    d: usize,
    max_degree: usize,
) -> Result<ShapiroReport, crate::zgmodule::ModuleError> {
    let induced_module = coset_module(group.order, d)?;
    let sub = named_module(ModuleName::Trivial, CyclicGroup::new(d)?)?;
    let a = cohomology(&induced_module, max_degree, Coeff::Z).groups();
    let b = cohomology(&sub, max_degree, Coeff::Z).groups();
    Ok(ShapiroReport {
        matches: a == b,
        induced: a.iter().map(|g| g.to_string()).collect(),
        subgroup: b.iter().map(|g| g.to_string()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zgmodule::direct_sum;

    fn groups(name: ModuleName, top: usize, coeff: Coeff) -> Vec<String> {
        cohomology(&z4_module(name), top, coeff)
            .groups()
            .iter()
            .map(|g| g.to_string())
            .collect()
    }

    #[test]
    fn trivial_module() {
        assert_eq!(
            groups(ModuleName::Trivial, 5, Coeff::Z),
            ["Z", "0", "Z4", "0", "Z4", "0"]
        );
    }

    #[test]
    fn regular_module() {
        assert_eq!(
            groups(ModuleName::Regular, 4, Coeff::Z),
            ["Z", "0", "0", "0", "0"]
        );
    }

    #[test]
    fn coset_module_matches_z2() {
        assert_eq!(
            groups(ModuleName::Coset2, 4, Coeff::Z),
            ["Z", "0", "Z2", "0", "Z2"]
        );
    }

    #[test]
    fn m_and_n() {
        assert_eq!(
            groups(ModuleName::M, 4, Coeff::Z),
            ["0", "Z4", "0", "Z4", "0"]
        );
        assert_eq!(
            groups(ModuleName::N, 4, Coeff::Z),
            ["0", "Z2", "0", "Z2", "0"]
        );
        assert_eq!(
            groups(ModuleName::L, 4, Coeff::Z),
            groups(ModuleName::Coset2, 4, Coeff::Z)
        );
    }

    #[test]
    fn f2_trivial_is_f2_everywhere() {
        assert!(groups(ModuleName::Trivial, 8, Coeff::F2)
            .iter()
            .all(|g| g == "Z2"));
    }

    #[test]
    fn f2_n_matches_f2_coset() {
        assert_eq!(
            groups(ModuleName::N, 8, Coeff::F2),
            groups(ModuleName::Coset2, 8, Coeff::F2)
        );
    }

    #[test]
    fn complex_squares_to_zero() {
        for name in ModuleName::ALL {
            assert!(CochainComplex::new(&z4_module(name), 6).squares_to_zero());
        }
    }

    #[test]
    fn u_action_examples() {
        assert!(u_action(&z4_module(ModuleName::Coset2), 2, Coeff::Z).is_isomorphism());
        assert!(u_action(&z4_module(ModuleName::Regular), 0, Coeff::Z).is_zero());
        assert!(u_action(&z4_module(ModuleName::M), 1, Coeff::Z).is_isomorphism());
        // degree 0 -> 2 on the trivial module is the projection Z -> Z4
        let h = u_action(&z4_module(ModuleName::Trivial), 0, Coeff::Z);
        assert!(h.is_surjective() && !h.is_injective());
    }

    #[test]
    fn u_twice_on_coset_is_iso() {
        let c = z4_module(ModuleName::Coset2);
        let twice = u_action(&c, 4, Coeff::Z).compose(&u_action(&c, 2, Coeff::Z));
        assert!(twice.is_isomorphism());
    }

    #[test]
    fn sequences_are_exact() {
        for ses in [norm_sequence(), n_sequence(), bockstein_sequence(2)] {
            let report = les_verify(&ses, 8).unwrap();
            assert!(report.all_exact());
            assert_eq!(report.positions.len(), 27);
        }
    }

    #[test]
    fn les_detects_a_non_exact_sequence() {
        let mut ses = norm_sequence();
        ses.inclusion = IntMatrix::from_rows(&[[2], [2], [2], [2]]);
        assert!(matches!(
            les_verify(&ses, 4),
            Err(CohomologyError::InvalidSequence(_))
        ));
    }

    #[test]
    fn shapiro_examples() {
        let g = CyclicGroup::z4();
        for d in [1, 2, 4] {
            let r = shapiro_check(g, d, 9).unwrap();
            assert!(r.matches, "d = {d}: {:?} vs {:?}", r.induced, r.subgroup);
        }
        assert_eq!(
            shapiro_check(g, 2, 4).unwrap().induced,
            ["Z", "0", "Z2", "0", "Z2"]
        );
    }

    #[test]
    fn direct_sum_cohomology_adds() {
        let s = direct_sum(&z4_module(ModuleName::M), &z4_module(ModuleName::Coset2)).unwrap();
        let g: Vec<String> = cohomology(&s, 3, Coeff::Z)
            .groups()
            .iter()
            .map(|g| g.to_string())
            .collect();
        assert_eq!(g, ["Z", "Z4", "Z2", "Z4"]);
    }
}
