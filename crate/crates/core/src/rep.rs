//! Real representations of `Z_n`, their decomposition into complex lines
//! `V^k` (generator acting by `e^{2 pi i k / n}`), top Chern classes and the
//! index of a representation sphere.
//!
//! Characters are handled exactly as integer polynomials in a primitive
//! `n`-th root of unity, reduced modulo the cyclotomic polynomial.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::index_ring::{CohRingElement, GradedIdeal, IndexError, RingKind};
use crate::linalg::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("action does not have order dividing {0}")]
    OrderMismatch(usize),
    #[error("representations of different groups")]
    GroupMismatch,
    #[error("character is not a sum of irreducibles: {0}")]
    BadCharacter(String),
    #[error("sphere of a representation with a trivial summand has no index")]
    TrivialSummand,
    #[error("unpaired real line V^{0} is not a complex summand")]
    UnpairedRealLine(usize),
    #[error("Chern classes are implemented for Z4 only, got Z{0}")]
    UnsupportedGroup(usize),
    #[error("unknown representation {0:?}")]
    UnknownRep(String),
    #[error(transparent)]
    Index(#[from] IndexError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealRep {
    order: usize,
    action: IntMatrix,
    label: String,
}

impl RealRep {
    pub fn new(
        order: usize,
        action: IntMatrix,
        label: impl Into<String>,
    ) -> Result<Self, RepError> {
        if order == 0
            || !action.is_square()
            || action.pow(order) != IntMatrix::identity(action.rows())
        {
            return Err(RepError::OrderMismatch(order));
        }
        Ok(RealRep {
            order,
            action,
            label: label.into(),
        })
    }

    /// `{x in R^4 : sum x = 0}` with the generator shifting coordinates.
    pub fn u4() -> Self {
        Self::new(
            4,
            IntMatrix::from_rows(&[[-1, 1, 0], [-1, 0, 1], [-1, 0, 0]]),
            "U4",
        )
        .unwrap()
    }

    /// `{x in R^2 : x1 + x2 = 0}` with the generator swapping coordinates.
    pub fn u2() -> Self {
        Self::new(4, IntMatrix::from_rows(&[[-1]]), "U2").unwrap()
    }

    pub fn trivial(order: usize, dim: usize) -> Self {
        Self::new(order, IntMatrix::identity(dim), "R").unwrap()
    }

    pub fn direct_sum(&self, other: &RealRep) -> Result<Self, RepError> {
        if self.order != other.order {
            return Err(RepError::GroupMismatch);
        }
        Self::new(
            self.order,
            self.action.block_diag(&other.action),
            format!("{}x{}", self.label, other.label),
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.action.rows()
    }

    pub fn action(&self) -> &IntMatrix {
        &self.action
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Traces of `A^j` for `j = 0..n`.
    pub fn character(&self) -> Vec<i64> {
        let mut p = IntMatrix::identity(self.dim());
        (0..self.order)
            .map(|_| {
                let t: i64 = (0..self.dim())
                    .map(|i| i64::try_from(&p[(i, i)]).expect("trace fits in i64"))
                    .sum();
                p = &p * &self.action;
                t
            })
            .collect()
    }
}

impl FromStr for RealRep {
    type Err = RepError;

    /// `u4`, `u2`, `triv`, joined by `x` or `+`.
    fn from_str(s: &str) -> Result<Self, RepError> {
        let parts: Vec<&str> = s.split(['x', '+']).map(str::trim).collect();
        let mut acc: Option<RealRep> = None;
        for p in parts {
            let r = match p.to_ascii_lowercase().as_str() {
                "u4" => RealRep::u4(),
                "u2" => RealRep::u2(),
                "triv" | "r" => RealRep::trivial(4, 1),
                _ => return Err(RepError::UnknownRep(s.to_string())),
            };
            acc = Some(match acc {
                None => r,
                Some(a) => a.direct_sum(&r)?,
            });
        }
        acc.ok_or_else(|| RepError::UnknownRep(s.to_string()))
    }
}

/// Exact arithmetic in `Z[zeta_n]`.
mod cyclo {
    /// Coefficients of `Phi_n`, lowest degree first.
    pub fn cyclotomic(n: usize) -> Vec<i64> {
        // x^n - 1 divided by Phi_d for every proper divisor d
        let mut num = vec![0i64; n + 1];
        num[0] = -1;
        num[n] = 1;
        for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
            num = divide_exact(&num, &cyclotomic(d));
        }
        num
    }

    fn divide_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let mut q = vec![0i64; a.len() - db];
        for i in (0..q.len()).rev() {
            let c = r[i + db];
            q[i] = c;
            for (j, &bj) in b.iter().enumerate() {
                r[i + j] -= c * bj;
            }
        }
        debug_assert!(r.iter().all(|&x| x == 0));
        q
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub fn reduce(a: &[i64], m: &[i64]) -> Vec<i64> {
        let mut r = a.to_vec();
        let dm = m.len() - 1;
        for i in (dm..r.len()).rev() {
            let c = r[i];
            if c != 0 {
                for (j, &mj) in m.iter().enumerate() {
                    r[i - dm + j] -= c * mj;
                }
            }
        }
        r.truncate(dm.max(1));
        while r.len() > 1 && *r.last().unwrap() == 0 {
            r.pop();
        }
        r
    }
}

/// Complex multiplicity of `V^k` in the complexification, for every `k`.
pub fn complex_multiplicities(rep: &RealRep) -> Result<Vec<usize>, RepError> {
    let n = rep.order;
    let chi = rep.character();
    let phi = cyclo::cyclotomic(n);
    (0..n)
        .map(|k| {
            // sum_j chi(g^j) zeta^{-jk}
            let mut poly = vec![0i64; n];
            for (j, &c) in chi.iter().enumerate() {
                poly[(n * n - j * k) % n] += c;
            }
            let r = cyclo::reduce(&poly, &phi);
            if r.len() != 1 || r[0] % n as i64 != 0 || r[0] < 0 {
                return Err(RepError::BadCharacter(format!("{:?} at k={k}", r)));
            }
            Ok((r[0] / n as i64) as usize)
        })
        .collect()
}

/// One summand of a decomposition. `real` marks a single real line with the
/// generator acting by `+1` or `-1`, recorded under the label `V^k` of the
/// complex line with the same eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RepLine {
    pub k: usize,
    pub real: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepSum {
    pub order: usize,
    pub lines: Vec<RepLine>,
}

impl RepSum {
    pub fn from_labels(order: usize, ks: &[usize]) -> Self {
        let mut lines: Vec<RepLine> = ks
            .iter()
            .map(|&k| RepLine {
                k: k % order,
                real: false,
            })
            .collect();
        lines.sort();
        RepSum { order, lines }
    }

    /// The multiset of `k` labels, sorted.
    pub fn labels(&self) -> Vec<usize> {
        self.lines.iter().map(|l| l.k).collect()
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn has_trivial_summand(&self) -> bool {
        self.lines.iter().any(|l| l.k == 0)
    }

    pub fn unpaired_real_lines(&self) -> Vec<usize> {
        self.lines.iter().filter(|l| l.real).map(|l| l.k).collect()
    }

    pub fn concat(&self, other: &RepSum) -> Result<RepSum, RepError> {
        if self.order != other.order {
            return Err(RepError::GroupMismatch);
        }
        let mut lines = self.lines.clone();
        lines.extend(other.lines.iter().copied());
        lines.sort();
        Ok(RepSum {
            order: self.order,
            lines,
        })
    }

    /// Character of the underlying real representation as cyclotomic
    /// polynomials (reduced mod `Phi_n`), one per group element.
    pub fn realified_character(&self) -> Vec<Vec<i64>> {
        let n = self.order;
        let phi = cyclo::cyclotomic(n);
        (0..n)
            .map(|j| {
                let mut poly = vec![0i64; n];
                for l in &self.lines {
                    let e = (j * l.k) % n;
                    poly[e] += 1;
                    if !l.real {
                        poly[(n - e) % n] += 1;
                    }
                }
                cyclo::reduce(&poly, &phi)
            })
            .collect()
    }
}

impl fmt::Display for RepSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lines.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .lines
            .iter()
            .map(|l| {
                if l.real {
                    format!("V^{}(real)", l.k)
                } else {
                    format!("V^{}", l.k)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Decompose into complex lines. Conjugate pairs `V^k, V^{n-k}` give one line
/// with the smaller `k`; real lines with eigenvalue `+1` or `-1` are paired
/// two at a time into `V^0` or `V^{n/2}`, and an odd one out is kept as a
/// real line.
pub fn decompose(rep: &RealRep) -> Result<RepSum, RepError> {
    let n = rep.order;
    let m = complex_multiplicities(rep)?;
    let mut lines = Vec::new();
    for k in 0..n {
        let self_conjugate = (2 * k) % n == 0;
        if self_conjugate {
            lines.extend(std::iter::repeat_n(RepLine { k, real: false }, m[k] / 2));
            if m[k] % 2 == 1 {
                lines.push(RepLine { k, real: true });
            }
        } else if k < n - k {
            if m[k] != m[n - k] {
                return Err(RepError::BadCharacter(format!(
                    "V^{k} and V^{} differ",
                    n - k
                )));
            }
            lines.extend(std::iter::repeat_n(RepLine { k, real: false }, m[k]));
        }
    }
    lines.sort();
    Ok(RepSum { order: n, lines })
}

/// Whether realifying the decomposition reproduces the character of `rep`.
pub fn character_roundtrip(rep: &RealRep) -> Result<bool, RepError> {
    let sum = decompose(rep)?;
    let phi = cyclo::cyclotomic(rep.order);
    let direct: Vec<Vec<i64>> = rep
        .character()
        .iter()
        .map(|&c| cyclo::reduce(&[c], &phi))
        .collect();
    Ok(direct == sum.realified_character())
}

/// `c_top = prod_k c_1(V^k) = (prod k) U^len` in `H*(Z4; Z)`.
pub fn chern_top(r: &RepSum) -> Result<CohRingElement, RepError> {
    if r.order != 4 {
        return Err(RepError::UnsupportedGroup(r.order));
    }
    let coeff: i64 = r.lines.iter().map(|l| l.k as i64).product();
    Ok(CohRingElement::u_power(coeff, r.lines.len()))
}

/// `Index S(V) = <c_top(V)>`.
pub fn sphere_index(r: &RepSum, bound: usize) -> Result<GradedIdeal, RepError> {
    if r.has_trivial_summand() {
        return Err(RepError::TrivialSummand);
    }
    if let Some(&k) = r.unpaired_real_lines().first() {
        return Err(RepError::UnpairedRealLine(k));
    }
    let c = chern_top(r)?;
    Ok(GradedIdeal::from_generators(
        RingKind::Integral,
        &[c],
        bound,
    )?)
}
