use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use tetra_core::linalg::{
    homology_at, kernel_basis, mod2_rank_kernel, smith_normal_form, FinAbGroup, IntMatrix,
};

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, c), r)
            .prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

fn minor(m: &IntMatrix, rows: &[usize], cols: &[usize]) -> BigInt {
    let sub: Vec<Vec<i64>> = rows
        .iter()
        .map(|&i| {
            cols.iter()
                .map(|&j| i64::try_from(&m[(i, j)]).unwrap())
                .collect()
        })
        .collect();
    IntMatrix::from_rows(&sub).det()
}

/// Invariant factors as ratios of determinantal divisors.
fn determinantal_factors(m: &IntMatrix) -> Vec<BigInt> {
    let mut prev = BigInt::from(1);
    let mut out = Vec::new();
    for k in 1..=m.rows().min(m.cols()) {
        let mut g = BigInt::zero();
        for r in combinations(m.rows(), k) {
            for c in combinations(m.cols(), k) {
                g = g.gcd(&minor(m, &r, &c));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

/// A unimodular matrix and its inverse from a sequence of row operations.
fn unimodular(n: usize) -> impl Strategy<Value = (IntMatrix, IntMatrix)> {
    prop::collection::vec((0..n, 0..n, -3i64..=3), 0..8).prop_map(move |ops| {
        let mut p = IntMatrix::identity(n);
        let mut p_inv = IntMatrix::identity(n);
        for (i, j, c) in ops {
            if i == j {
                continue;
            }
            let mut e = IntMatrix::identity(n);
            e[(i, j)] = BigInt::from(c);
            let mut e_inv = IntMatrix::identity(n);
            e_inv[(i, j)] = BigInt::from(-c);
            p = &e * &p;
            p_inv = &p_inv * &e_inv;
        }
        (p, p_inv)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_factorisation_and_divisibility(m in matrix(4, 4)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(&(&s.left * &m) * &s.right, s.diag.clone());
        prop_assert_eq!(&s.left * &s.left_inv, IntMatrix::identity(m.rows()));
        prop_assert_eq!(&s.right * &s.right_inv, IntMatrix::identity(m.cols()));
        let f = s.invariant_factors();
        prop_assert!(f.iter().all(|d| d.is_positive()));
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        for i in 0..s.diag.rows() {
            for j in 0..s.diag.cols() {
                if i != j {
                    prop_assert!(s.diag[(i, j)].is_zero());
                }
            }
        }
    }

    #[test]
    fn snf_matches_determinantal_divisors(m in matrix(4, 4)) {
        prop_assert_eq!(smith_normal_form(&m).invariant_factors(), determinantal_factors(&m));
    }

    #[test]
    fn homology_is_basis_invariant(
        d_out in matrix(3, 4),
        coeffs in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 4),
        ops in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..8),
    ) {
        let n = d_out.cols();
        let k = kernel_basis(&d_out);
        let c: Vec<Vec<i64>> = coeffs.iter().take(k.cols()).cloned().collect();
        let d_in = if c.is_empty() { IntMatrix::zeros(n, 3) } else { &k * &IntMatrix::from_rows(&c) };
        let h = homology_at(&d_in, &d_out).unwrap().group;
        // change of basis in the middle
        let mut p = IntMatrix::identity(n);
        let mut p_inv = IntMatrix::identity(n);
        for (i, j, c) in ops {
            let (i, j) = (i % n, j % n);
            if i == j { continue; }
            let mut e = IntMatrix::identity(n);
            e[(i, j)] = BigInt::from(c);
            let mut e_inv = IntMatrix::identity(n);
            e_inv[(i, j)] = BigInt::from(-c);
            p = &e * &p;
            p_inv = &p_inv * &e_inv;
        }
        let h2 = homology_at(&(&p * &d_in), &(&d_out * &p_inv)).unwrap().group;
        prop_assert_eq!(h, h2);
    }

    #[test]
    fn snf_is_invariant_under_unimodular_change((p, _) in unimodular(3), (q, _) in unimodular(3), m in matrix(3, 3)) {
        let m = if m.rows() == 3 && m.cols() == 3 { m } else { IntMatrix::identity(3) };
        let a = smith_normal_form(&m).invariant_factors();
        let b = smith_normal_form(&(&(&p * &m) * &q)).invariant_factors();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn f2_rank_nullity(m in matrix(5, 6)) {
        let (rank, kernel) = mod2_rank_kernel(&m);
        prop_assert_eq!(rank + kernel.len(), m.cols());
        for v in &kernel {
            let bv: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
            prop_assert!(m.mul_vec(&bv).iter().all(|x| x.is_even()));
        }
    }
}

#[test]
fn cokernel_group_of_diagonal() {
    let m = IntMatrix::from_rows(&[[2, 0], [0, 6]]);
    let d_out = IntMatrix::zeros(0, 2);
    assert_eq!(
        homology_at(&m, &d_out).unwrap().group,
        FinAbGroup::new(0, &[2, 6])
    );
}
