use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use tetra_core::index_ring::{
    ideal_contains_ideal, mod2_reduce_ideal, CohRingElement, GradedIdeal, RingKind,
};
use tetra_core::linalg::IntMatrix;
use tetra_core::pair_homology::intertwiner_basis;
use tetra_core::rep::{character_roundtrip, chern_top, RealRep, RepSum};
use tetra_core::zgmodule::{direct_sum, is_equivariant, z4_module, ModuleName};

const BOUND: usize = 10;

fn ring() -> impl Strategy<Value = RingKind> {
    prop_oneof![Just(RingKind::Integral), Just(RingKind::Mod2)]
}

/// Homogeneous generators of positive degree.
fn generators(ring: RingKind) -> impl Strategy<Value = Vec<CohRingElement>> {
    prop::collection::vec((1..=BOUND, 1i64..4), 0..4).prop_map(move |v| {
        v.into_iter()
            .map(|(d, c)| CohRingElement::monomial(ring, d, c))
            .collect()
    })
}

fn ring_and_gens() -> impl Strategy<Value = (RingKind, Vec<CohRingElement>)> {
    ring().prop_flat_map(|r| (Just(r), generators(r)))
}

/// Degree-`d` elements of the ideal, found by closing `{r * g}` under addition.
fn brute_force_piece(ring: RingKind, gens: &[CohRingElement], d: usize) -> BTreeSet<i64> {
    let m = ring.modulus(d);
    let mut products = BTreeSet::new();
    for g in gens {
        let Some(dg) = g.degree() else { continue };
        if dg > d {
            continue;
        }
        for c in 0..ring.modulus(d - dg).max(4) {
            let r = CohRingElement::monomial(ring, d - dg, c);
            products.insert(r.mul(g).unwrap().coefficient(d));
        }
    }
    let mut closure: BTreeSet<i64> = [0].into();
    loop {
        let next: BTreeSet<i64> = closure
            .iter()
            .flat_map(|a| products.iter().map(move |b| (a + b).rem_euclid(m)))
            .chain(closure.iter().copied())
            .collect();
        if next == closure {
            return closure;
        }
        closure = next;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn saturation_matches_brute_force((ring, gens) in ring_and_gens()) {
        let ideal = GradedIdeal::from_generators(ring, &gens, BOUND).unwrap();
        for d in 1..=BOUND {
            let m = ring.modulus(d);
            let piece = brute_force_piece(ring, &gens, d);
            let from_table: BTreeSet<i64> = (0..m).filter(|x| x % ideal.table()[d] == 0).collect();
            prop_assert_eq!(piece, from_table, "degree {}", d);
        }
    }

    #[test]
    fn saturation_is_idempotent((ring, gens) in ring_and_gens()) {
        let ideal = GradedIdeal::from_generators(ring, &gens, BOUND).unwrap();
        prop_assert_eq!(ideal.resaturate().table().to_vec(), ideal.table().to_vec());
        let again = GradedIdeal::from_generators(ring, &ideal.minimal_generators(), BOUND).unwrap();
        prop_assert_eq!(again.table(), ideal.table());
        prop_assert_eq!(GradedIdeal::from_table(ring, ideal.table()).unwrap().table().to_vec(), ideal.table().to_vec());
    }

    #[test]
    fn saturation_is_monotone((ring, gens) in ring_and_gens(), extra in 0usize..4) {
        let small = GradedIdeal::from_generators(ring, &gens[..extra.min(gens.len())], BOUND).unwrap();
        let large = GradedIdeal::from_generators(ring, &gens, BOUND).unwrap();
        prop_assert!(ideal_contains_ideal(&large, &small).unwrap());
        for g in &gens {
            prop_assert!(large.contains(g).unwrap());
        }
    }

    #[test]
    fn reduction_mod_two_commutes(gens in generators(RingKind::Integral), a in 0usize..6, b in 0usize..6, c in 0i64..4, e in 0i64..4) {
        let ideal = GradedIdeal::from_generators(RingKind::Integral, &gens, BOUND).unwrap();
        let reduced: Vec<CohRingElement> = gens.iter().map(CohRingElement::mod2_reduce).collect();
        let direct = GradedIdeal::from_generators(RingKind::Mod2, &reduced, BOUND).unwrap();
        prop_assert_eq!(mod2_reduce_ideal(&ideal).table().to_vec(), direct.table().to_vec());
        let x = CohRingElement::u_power(c, a);
        let y = CohRingElement::u_power(e, b);
        prop_assert_eq!(x.mul(&y).unwrap().mod2_reduce(), x.mod2_reduce().mul(&y.mod2_reduce()).unwrap());
    }

    #[test]
    fn chern_top_is_multiplicative(a in prop::collection::vec(0usize..4, 0..4), b in prop::collection::vec(0usize..4, 0..4)) {
        let (ra, rb) = (RepSum::from_labels(4, &a), RepSum::from_labels(4, &b));
        let lhs = chern_top(&ra.concat(&rb).unwrap()).unwrap();
        let rhs = chern_top(&ra).unwrap().mul(&chern_top(&rb).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn decomposition_preserves_characters(parts in prop::collection::vec(prop_oneof![Just("u4"), Just("u2"), Just("triv")], 1..4)) {
        let r: RealRep = parts.join("x").parse().unwrap();
        prop_assert!(character_roundtrip(&r).unwrap());
    }

    #[test]
    fn intertwiners_are_equivariant(
        src in prop::sample::select(ModuleName::ALL.to_vec()),
        tgt in prop::sample::select(ModuleName::ALL.to_vec()),
        coeffs in prop::collection::vec(-3i64..=3, 8),
    ) {
        let s = z4_module(src);
        let t = direct_sum(&z4_module(tgt), &z4_module(ModuleName::M)).unwrap();
        let basis = intertwiner_basis(&s, &t);
        let mut combo = IntMatrix::zeros(t.rank(), s.rank());
        for (b, c) in basis.iter().zip(coeffs.iter().cycle()) {
            prop_assert!(is_equivariant(b, &s, &t));
            combo = combo.add(&b.scale(&BigInt::from(*c)));
        }
        prop_assert!(is_equivariant(&combo, &s, &t));
    }
}
