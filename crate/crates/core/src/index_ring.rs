//! Graded rings `Z[U]/4U` (|U| = 2) and `F2[e,u]/e^2` (|e| = 1, |u| = 2),
//! and graded ideals in them stored as one subgroup per degree.
//!
//! Every homogeneous piece of either ring is cyclic (Z, Z/4, F2 or 0), so a
//! subgroup is determined by a single nonnegative divisor `g`: the subgroup
//! is `gZ` reduced modulo the degree's modulus, with `g = modulus` meaning 0.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

pub const DEFAULT_DEGREE_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("degree {degree} exceeds the ideal's bound {bound}")]
    DegreeOutOfRange { degree: usize, bound: usize },
    #[error("cannot parse ring element {0:?}")]
    Parse(String),
    #[error("generator {0} is not homogeneous")]
    NotHomogeneous(String),
    #[error("table is not closed under multiplication: {0}")]
    NotAnIdeal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RingKind {
    /// `H*(Z4; Z) = Z[U]/4U`.
    Integral,
    /// `H*(Z4; F2) = F2[e,u]/e^2`.
    Mod2,
}

impl RingKind {
    /// Order of the degree-`d` piece, with 0 standing for `Z`.
    pub fn modulus(self, d: usize) -> i64 {
        match self {
            RingKind::Integral if d == 0 => 0,
            RingKind::Integral if d.is_multiple_of(2) => 4,
            RingKind::Integral => 1,
            RingKind::Mod2 => 2,
        }
    }

    /// Canonical representative of `c` in degree `d`.
    pub fn reduce(self, d: usize, c: i64) -> i64 {
        match self.modulus(d) {
            0 => c,
            m => c.rem_euclid(m),
        }
    }

    /// Degree of the periodicity generator (`U` or `u`).
    pub fn generator_name(self) -> &'static str {
        match self {
            RingKind::Integral => "U",
            RingKind::Mod2 => "u",
        }
    }

    /// Whether the product of the degree-`a` and degree-`b` monomials is nonzero
    /// as a monomial (coefficients aside).
    fn monomials_multiply(self, a: usize, b: usize) -> bool {
        match self {
            RingKind::Integral => a.is_multiple_of(2) && b.is_multiple_of(2),
            RingKind::Mod2 => !(a % 2 == 1 && b % 2 == 1),
        }
    }

    fn monomial(self, d: usize) -> String {
        let pow = |name: &str, k: usize| match k {
            0 => String::new(),
            1 => name.to_string(),
            _ => format!("{name}^{k}"),
        };
        match self {
            RingKind::Integral => pow("U", d / 2),
            RingKind::Mod2 => format!("{}{}", if d % 2 == 1 { "e" } else { "" }, pow("u", d / 2)),
        }
    }
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingKind::Integral => write!(f, "Z[U]/4U"),
            RingKind::Mod2 => write!(f, "F2[e,u]/e^2"),
        }
    }
}

/// Element of one of the two rings, as a map degree -> coefficient on the
/// unique monomial of that degree. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CohRingElement {
    ring: RingKind,
    terms: BTreeMap<usize, i64>,
}

impl CohRingElement {
    pub fn zero(ring: RingKind) -> Self {
        CohRingElement {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: RingKind) -> Self {
        Self::monomial(ring, 0, 1)
    }

    /// `c` times the monomial of degree `d`.
    pub fn monomial(ring: RingKind, d: usize, c: i64) -> Self {
        Self::from_terms(ring, [(d, c)])
    }

    /// `c U^k`.
    pub fn u_power(c: i64, k: usize) -> Self {
        Self::monomial(RingKind::Integral, 2 * k, c)
    }

    pub fn from_terms(ring: RingKind, terms: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (d, c) in terms {
            *acc.entry(d).or_insert(0) += c;
        }
        let terms = acc
            .into_iter()
            .map(|(d, c)| (d, ring.reduce(d, c)))
            .filter(|&(_, c)| c != 0)
            .collect();
        CohRingElement { ring, terms }
    }

    pub fn ring(&self) -> RingKind {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<usize, i64> {
        &self.terms
    }

    pub fn coefficient(&self, d: usize) -> i64 {
        self.terms.get(&d).copied().unwrap_or(0)
    }

    /// The degree if the element is homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        match self.terms.len() {
            1 => self.terms.keys().next().copied(),
            _ => None,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.len() <= 1
    }

    pub fn add(&self, other: &Self) -> Result<Self, IndexError> {
        if self.ring != other.ring {
            return Err(IndexError::RingMismatch);
        }
        Ok(Self::from_terms(
            self.ring,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(&d, &c)| (d, c)),
        ))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, IndexError> {
        if self.ring != other.ring {
            return Err(IndexError::RingMismatch);
        }
        let ring = self.ring;
        let mut out = Vec::new();
        for (&a, &ca) in &self.terms {
            for (&b, &cb) in &other.terms {
                if ring.monomials_multiply(a, b) {
                    out.push((a + b, ca * cb));
                }
            }
        }
        Ok(Self::from_terms(ring, out))
    }

    /// `U -> u`, coefficients mod 2.
    pub fn mod2_reduce(&self) -> Self {
        match self.ring {
            RingKind::Mod2 => self.clone(),
            RingKind::Integral => {
                Self::from_terms(RingKind::Mod2, self.terms.iter().map(|(&d, &c)| (d, c)))
            }
        }
    }

    /// Parse in a fixed ring; bare integers are degree-0 elements.
    pub fn parse_in(ring: RingKind, s: &str) -> Result<Self, IndexError> {
        let e = s.parse::<CohRingElement>()?;
        if e.ring == ring {
            return Ok(e);
        }
        if e.terms.keys().all(|&d| d == 0) {
            return Ok(Self::from_terms(ring, e.terms));
        }
        Err(IndexError::RingMismatch)
    }
}

fn parse_term(t: &str) -> Result<(Option<RingKind>, usize, i64), IndexError> {
    let err = || IndexError::Parse(t.to_string());
    let t: String = t.chars().filter(|c| !c.is_whitespace()).collect();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1, rest.to_string()),
        None => (1, t.clone()),
    };
    let digits: String = body.chars().take_while(|c| c.is_ascii_digit()).collect();
    let coeff: i64 = if digits.is_empty() {
        1
    } else {
        digits.parse().map_err(|_| err())?
    };
    let mut rest = body[digits.len()..].trim_start_matches('*').to_string();
    if digits.is_empty() && rest.is_empty() {
        return Err(err());
    }
    let mut ring = None;
    let mut degree = 0usize;
    let mut e_count = 0usize;
    while !rest.is_empty() {
        let letter = rest.chars().next().unwrap();
        rest.remove(0);
        let mut exp = 1usize;
        if let Some(r) = rest.strip_prefix('^') {
            let d: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
            if d.is_empty() {
                return Err(err());
            }
            exp = d.parse().map_err(|_| err())?;
            rest = r[d.len()..].to_string();
        }
        rest = rest.trim_start_matches('*').to_string();
        let (kind, weight) = match letter {
            'U' => (RingKind::Integral, 2),
            'u' => (RingKind::Mod2, 2),
            'e' => {
                e_count += exp;
                (RingKind::Mod2, 1)
            }
            _ => return Err(err()),
        };
        if ring.is_some_and(|r| r != kind) {
            return Err(IndexError::RingMismatch);
        }
        ring = Some(kind);
        degree += weight * exp;
    }
    if e_count > 1 {
        // e^2 = 0
        return Ok((ring, degree, 0));
    }
    Ok((ring, degree, sign * coeff))
}

impl FromStr for CohRingElement {
    type Err = IndexError;

    fn from_str(s: &str) -> Result<Self, IndexError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(IndexError::Parse(s.to_string()));
        }
        let normalized = s.replace('-', "+-");
        let mut ring: Option<RingKind> = None;
        let mut terms = Vec::new();
        for t in normalized
            .split('+')
            .map(str::trim)
            .filter(|t| !t.is_empty())
        {
            let (r, d, c) = parse_term(t)?;
            if let Some(r) = r {
                if ring.is_some_and(|x| x != r) {
                    return Err(IndexError::RingMismatch);
                }
                ring = Some(r);
            }
            terms.push((d, c));
        }
        Ok(Self::from_terms(ring.unwrap_or(RingKind::Integral), terms))
    }
}

impl fmt::Display for CohRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&d, &c)| {
                let mono = self.ring.monomial(d);
                match (c, mono.is_empty()) {
                    (_, true) => c.to_string(),
                    (1, false) => mono,
                    (-1, false) => format!("-{mono}"),
                    _ => format!("{c}{mono}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for CohRingElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Whether subgroup `g` (as a divisor) of a cyclic group of order `m`
/// contains the element `c`.
fn divides_mod(g: i64, c: i64, m: i64) -> bool {
    let c = if m == 0 { c } else { c.rem_euclid(m) };
    if g == 0 {
        c == 0
    } else {
        c % g == 0
    }
}

/// Homogeneous ideal, stored degreewise up to `bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedIdeal {
    ring: RingKind,
    bound: usize,
    generators: Vec<CohRingElement>,
    /// `table[d]` generates the degree-`d` subgroup; equals the modulus when
    /// that subgroup is zero.
    table: Vec<i64>,
}

impl GradedIdeal {
    /// Saturate homogeneous generators up to `bound`.
    pub fn from_generators(
        ring: RingKind,
        gens: &[CohRingElement],
        bound: usize,
    ) -> Result<Self, IndexError> {
        for g in gens {
            if g.ring != ring {
                return Err(IndexError::RingMismatch);
            }
            if !g.is_homogeneous() {
                return Err(IndexError::NotHomogeneous(g.to_string()));
            }
        }
        let gens: Vec<CohRingElement> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        let table = (0..=bound)
            .map(|d| {
                let m = ring.modulus(d);
                gens.iter().fold(m, |acc, g| {
                    let dg = g.degree().expect("nonzero homogeneous");
                    if dg <= d && ring.monomials_multiply(d - dg, dg) {
                        acc.gcd(&g.coefficient(dg))
                    } else {
                        acc
                    }
                })
            })
            .collect();
        Ok(GradedIdeal {
            ring,
            bound,
            generators: gens,
            table,
        })
    }

    pub fn zero(ring: RingKind, bound: usize) -> Self {
        Self::from_generators(ring, &[], bound).expect("empty generator list")
    }

    /// Ideal from a per-degree divisor table; fails unless the table is closed
    /// under multiplication by the ring generators.
    pub fn from_table(ring: RingKind, table: &[i64]) -> Result<Self, IndexError> {
        if table.is_empty() {
            return Err(IndexError::NotAnIdeal("empty table".into()));
        }
        let bound = table.len() - 1;
        let canon: Vec<i64> = table
            .iter()
            .enumerate()
            .map(|(d, &g)| match ring.modulus(d) {
                0 => g.abs(),
                m => g.gcd(&m),
            })
            .collect();
        let step: &[usize] = match ring {
            RingKind::Integral => &[2],
            RingKind::Mod2 => &[1, 2],
        };
        for d in 0..=bound {
            for &s in step {
                if d + s > bound || !ring.monomials_multiply(d, s) {
                    continue;
                }
                let m = ring.modulus(d + s);
                if !divides_mod(canon[d + s], canon[d], m) {
                    return Err(IndexError::NotAnIdeal(format!(
                        "degree {d} times {} leaves degree {}",
                        ring.monomial(s),
                        d + s
                    )));
                }
            }
        }
        let gens = minimal_generators(ring, &canon);
        Ok(GradedIdeal {
            ring,
            bound,
            generators: gens,
            table: canon,
        })
    }

    pub fn ring(&self) -> RingKind {
        self.ring
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn generators(&self) -> &[CohRingElement] {
        &self.generators
    }

    pub fn table(&self) -> &[i64] {
        &self.table
    }

    /// Minimal homogeneous generating set read off the table.
    pub fn minimal_generators(&self) -> Vec<CohRingElement> {
        minimal_generators(self.ring, &self.table)
    }

    /// Recompute the table from the minimal generators.
    pub fn resaturate(&self) -> Self {
        Self::from_generators(self.ring, &self.minimal_generators(), self.bound)
            .expect("generators are homogeneous")
    }

    pub fn is_zero(&self) -> bool {
        self.table
            .iter()
            .enumerate()
            .all(|(d, &g)| g == self.ring.modulus(d))
    }

    /// Number of elements of the degree-`d` piece, `None` for infinite.
    pub fn degree_size(&self, d: usize) -> Option<i64> {
        let m = self.ring.modulus(d);
        let g = self.table[d];
        match (m, g) {
            (0, 0) => Some(1),
            (0, _) => None,
            _ => Some(m / g),
        }
    }

    pub fn contains(&self, x: &CohRingElement) -> Result<bool, IndexError> {
        if x.ring != self.ring {
            return Err(IndexError::RingMismatch);
        }
        if x.max_degree() > self.bound {
            return Err(IndexError::DegreeOutOfRange {
                degree: x.max_degree(),
                bound: self.bound,
            });
        }
        Ok(x.terms
            .iter()
            .all(|(&d, &c)| divides_mod(self.table[d], c, self.ring.modulus(d))))
    }

    /// `self ⊇ other`, checked on the generators of `other`.
    pub fn contains_ideal(&self, other: &GradedIdeal) -> Result<bool, IndexError> {
        ideal_contains_ideal(self, other)
    }
}

fn minimal_generators(ring: RingKind, table: &[i64]) -> Vec<CohRingElement> {
    let mut gens: Vec<CohRingElement> = Vec::new();
    for (d, &g) in table.iter().enumerate() {
        let m = ring.modulus(d);
        let from_lower = gens.iter().fold(m, |acc, x| {
            let dx = x.degree().expect("homogeneous");
            if ring.monomials_multiply(d - dx, dx) {
                acc.gcd(&x.coefficient(dx))
            } else {
                acc
            }
        });
        if !divides_mod(from_lower, g, m) {
            gens.push(CohRingElement::monomial(ring, d, g));
        }
    }
    gens
}

impl fmt::Display for GradedIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens = self.minimal_generators();
        if gens.is_empty() {
            return write!(f, "<0>");
        }
        let s: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
        write!(f, "<{}>", s.join(", "))
    }
}

impl Serialize for GradedIdeal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            ring: RingKind,
            bound: usize,
            generators: Vec<String>,
            table: &'a [i64],
        }
        Repr {
            ring: self.ring,
            bound: self.bound,
            generators: self
                .minimal_generators()
                .iter()
                .map(|g| g.to_string())
                .collect(),
            table: &self.table,
        }
        .serialize(s)
    }
}

/// Parse `"<eu^2, u^3>"` or `"U^3"`; `"<0>"` and `""` give the zero ideal.
pub fn parse_ideal(ring: RingKind, s: &str, bound: usize) -> Result<GradedIdeal, IndexError> {
    let inner = s
        .trim()
        .trim_start_matches('<')
        .trim_end_matches('>')
        .trim();
    let gens = inner
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| CohRingElement::parse_in(ring, t))
        .collect::<Result<Vec<_>, _>>()?;
    GradedIdeal::from_generators(ring, &gens, bound)
}

pub fn ideal_contains_ideal(a: &GradedIdeal, b: &GradedIdeal) -> Result<bool, IndexError> {
    if a.ring != b.ring {
        return Err(IndexError::RingMismatch);
    }
    let bound = a.bound.min(b.bound);
    Ok((0..=bound).all(|d| divides_mod(a.table[d], b.table[d], a.ring.modulus(d))))
}

/// Image of an integral ideal under `Z[U]/4U -> F2[e,u]/e^2`, `U -> u`.
pub fn mod2_reduce_ideal(i: &GradedIdeal) -> GradedIdeal {
    if i.ring == RingKind::Mod2 {
        return i.clone();
    }
    let gens: Vec<CohRingElement> = i
        .minimal_generators()
        .iter()
        .map(CohRingElement::mod2_reduce)
        .collect();
    GradedIdeal::from_generators(RingKind::Mod2, &gens, i.bound)
        .expect("reduced generators are homogeneous")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    NoEquivariantMap,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NoEquivariantMap => write!(f, "NoEquivariantMap"),
            Verdict::Inconclusive => write!(f, "Inconclusive"),
        }
    }
}

/// An equivariant map `X -> Y` forces `Index X ⊇ Index Y`; failure of the
/// containment rules the map out.
pub fn no_map_verdict(
    index_domain: &GradedIdeal,
    index_target: &GradedIdeal,
) -> Result<Verdict, IndexError> {
    Ok(if ideal_contains_ideal(index_domain, index_target)? {
        Verdict::Inconclusive
    } else {
        Verdict::NoEquivariantMap
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> CohRingElement {
        s.parse().unwrap()
    }

    fn ideal(ring: RingKind, s: &str) -> GradedIdeal {
        parse_ideal(ring, s, DEFAULT_DEGREE_BOUND).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(el("2U^2").to_string(), "2U^2");
        assert_eq!(el("e*u^2").to_string(), "eu^2");
        assert_eq!(el("eu^2"), el("e*u^2"));
        assert_eq!(el("u^3").degree(), Some(6));
        assert_eq!(el("6U^2"), el("2U^2"));
        assert_eq!(el("4U"), CohRingElement::zero(RingKind::Integral));
        assert!(el("e*e").is_zero());
        assert_eq!(el("3 + U").to_string(), "3 + U");
        assert!(matches!(
            "U*u".parse::<CohRingElement>(),
            Err(IndexError::RingMismatch)
        ));
        assert!("x".parse::<CohRingElement>().is_err());
    }

    #[test]
    fn multiplication_rules() {
        let e = el("e");
        assert!(e.mul(&e).unwrap().is_zero());
        assert_eq!(
            el("2U").mul(&el("2U")).unwrap(),
            CohRingElement::zero(RingKind::Integral)
        );
        assert_eq!(el("U").mul(&el("2U^2")).unwrap(), el("2U^3"));
        assert_eq!(el("e").mul(&el("u^2")).unwrap(), el("eu^2"));
    }

    #[test]
    fn u_cubed_table() {
        let i = ideal(RingKind::Integral, "U^3");
        for d in 0..=12 {
            let expect = if d >= 6 && d % 2 == 0 {
                Some(4)
            } else {
                Some(1)
            };
            assert_eq!(i.degree_size(d), expect, "degree {d}");
        }
    }

    #[test]
    fn two_u_squared_table() {
        let i = ideal(RingKind::Integral, "2U^2");
        assert_eq!(i.degree_size(4), Some(2));
        assert_eq!(i.degree_size(6), Some(2));
        assert_eq!(i.degree_size(2), Some(1));
        assert!(i.contains(&el("2U^3")).unwrap());
        assert!(!i.contains(&el("U^3")).unwrap());
        assert!(ideal(RingKind::Integral, "<0>").is_zero());
    }

    #[test]
    fn membership_examples() {
        assert!(!ideal(RingKind::Integral, "U^3")
            .contains(&el("2U^2"))
            .unwrap());
        assert!(ideal(RingKind::Mod2, "eu^2, u^3")
            .contains(&el("u^3"))
            .unwrap());
        let small = GradedIdeal::from_generators(RingKind::Integral, &[el("U")], 4).unwrap();
        assert!(matches!(
            small.contains(&el("U^3")),
            Err(IndexError::DegreeOutOfRange {
                degree: 6,
                bound: 4
            })
        ));
    }

    #[test]
    fn containment_and_verdicts() {
        let u2 = ideal(RingKind::Integral, "U^2");
        let u3 = ideal(RingKind::Integral, "U^3");
        let t = ideal(RingKind::Integral, "2U^2");
        assert!(ideal_contains_ideal(&u2, &t).unwrap());
        assert!(!ideal_contains_ideal(&u3, &t).unwrap());
        assert!(ideal_contains_ideal(&u3, &GradedIdeal::zero(RingKind::Integral, 12)).unwrap());
        assert_eq!(no_map_verdict(&u3, &t).unwrap(), Verdict::NoEquivariantMap);
        assert_eq!(no_map_verdict(&u2, &t).unwrap(), Verdict::Inconclusive);
        let f2 = ideal(RingKind::Mod2, "<eu^2, u^3>");
        assert_eq!(
            no_map_verdict(&f2, &GradedIdeal::zero(RingKind::Mod2, 12)).unwrap(),
            Verdict::Inconclusive
        );
        assert!(matches!(
            no_map_verdict(&f2, &t),
            Err(IndexError::RingMismatch)
        ));
    }

    #[test]
    fn reduction_mod_two() {
        assert!(mod2_reduce_ideal(&ideal(RingKind::Integral, "2U^2")).is_zero());
        assert_eq!(
            mod2_reduce_ideal(&ideal(RingKind::Integral, "U^3")),
            ideal(RingKind::Mod2, "u^3")
        );
        assert_eq!(
            mod2_reduce_ideal(&ideal(RingKind::Integral, "2U^2, U^3")),
            ideal(RingKind::Mod2, "u^3")
        );
    }

    #[test]
    fn minimal_generators_and_tables() {
        let i = ideal(RingKind::Mod2, "u^3, eu^2, eu^4, u^5");
        assert_eq!(i.to_string(), "<eu^2, u^3>");
        assert_eq!(
            ideal(RingKind::Integral, "2U^2, U^3").to_string(),
            "<2U^2, U^3>"
        );
        assert_eq!(ideal(RingKind::Integral, "2U^2, 3U^2").to_string(), "<U^2>");
        let t = ideal(RingKind::Integral, "2U^2");
        assert_eq!(
            GradedIdeal::from_table(RingKind::Integral, t.table()).unwrap(),
            t
        );
        assert!(matches!(
            GradedIdeal::from_table(RingKind::Integral, &[0, 1, 1, 1, 4]),
            Err(IndexError::NotAnIdeal(_))
        ));
        assert_eq!(t.resaturate(), t);
    }

    #[test]
    fn generators_must_be_homogeneous() {
        assert!(matches!(
            GradedIdeal::from_generators(RingKind::Integral, &[el("U + U^2")], 6),
            Err(IndexError::NotHomogeneous(_))
        ));
    }
}
