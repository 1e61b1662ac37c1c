//! Serre spectral sequence of the Borel construction for a cyclic group
//! acting on the configuration space: `E2^{p,q} = H^p(Z4; H^q(Omega))`.
//!
//! Every entry is a direct sum of labelled cyclic components. Later pages are
//! tracked as a cycle lattice `Z_r` and a boundary lattice `B_r` inside the
//! `E2` coordinates, so `E_r^{p,q} = Z_r / B_r`. Differentials come from a
//! ledger of generator rules, validated on every page.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::cohomology;
use crate::index_ring::{GradedIdeal, IndexError, RingKind};
use crate::linalg::{
    column_space_basis, kernel_basis, FinAbGroup, IntMatrix, LatticeSolver, Subquotient,
};
use crate::pair_homology::{dual_cohomology, identify_module, PairCase, PairError};
use crate::zgmodule::{direct_sum, mod2_reduce, z4_module, Coeff, ModuleName, ZGModule};

pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000;
pub const MAX_SEARCH_WINDOW: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("malformed ledger rule at line {line}: {reason}")]
    MalformedRule { line: usize, reason: String },
    #[error("entry ({p},{q}) = {group} survives above the total-degree bound")]
    ConvergenceViolation { p: usize, q: usize, group: String },
    #[error("search needs {needed} ledgers, budget is {budget}")]
    SearchBudgetExceeded { needed: u128, budget: u64 },
    #[error("search window {0} exceeds the maximum {MAX_SEARCH_WINDOW}")]
    WindowTooLarge(usize),
    #[error("cannot decompose fiber cohomology in degree {0} into known summands")]
    UnidentifiedFiber(usize),
    #[error("row 0 is not a single trivial summand")]
    NoEdgeRow,
    #[error("unknown case {0:?} (expected sphere-z|sphere-f2|circle-z)")]
    UnknownCase(String),
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Index(#[from] IndexError),
}

/// The three pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpectralCase {
    SphereZ,
    SphereF2,
    CircleZ,
}

impl SpectralCase {
    pub const ALL: [SpectralCase; 3] = [
        SpectralCase::SphereZ,
        SpectralCase::SphereF2,
        SpectralCase::CircleZ,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SpectralCase::SphereZ => "sphere-z",
            SpectralCase::SphereF2 => "sphere-f2",
            SpectralCase::CircleZ => "circle-z",
        }
    }

    pub fn pair_case(self) -> PairCase {
        match self {
            SpectralCase::CircleZ => PairCase::Circle,
            _ => PairCase::Sphere,
        }
    }

    pub fn coeff(self) -> Coeff {
        match self {
            SpectralCase::SphereF2 => Coeff::F2,
            _ => Coeff::Z,
        }
    }

    pub fn ring(self) -> RingKind {
        match self.coeff() {
            Coeff::Z => RingKind::Integral,
            Coeff::F2 => RingKind::Mod2,
        }
    }

    /// Dimension of the orbit space: nothing survives above it.
    pub fn total_bound(self) -> usize {
        self.pair_case().top_degree()
    }

    pub fn default_window(self) -> usize {
        match self {
            SpectralCase::CircleZ => 8,
            _ => 10,
        }
    }

    pub fn default_ledger(self) -> DifferentialLedger {
        let text = match self {
            SpectralCase::SphereZ => SPHERE_Z_LEDGER,
            SpectralCase::SphereF2 => SPHERE_F2_LEDGER,
            SpectralCase::CircleZ => CIRCLE_Z_LEDGER,
        };
        text.parse().expect("built-in ledger parses")
    }
}

impl fmt::Display for SpectralCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpectralCase {
    type Err = SpectralError;
    fn from_str(s: &str) -> Result<Self, SpectralError> {
        SpectralCase::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| SpectralError::UnknownCase(s.to_string()))
    }
}

pub const SPHERE_Z_LEDGER: &str = "\
# d3: T^i Upsilon -> T^(i+2) s, from i = 1 on (set range=i>=0 to include the first column)
page=3 from=(1,6) gen=Upsilon to=(4,4) image=T^2*s range=i>=1
# d5: U^i Lambda -> U^(i+3)
page=5 from=(1,4) gen=Lambda to=(6,0) image=U^3 range=i>=0
";

pub const SPHERE_F2_LEDGER: &str = "\
page=3 from=(1,6) gen=e*y to=(4,4) image=u^2*s range=i>=0
page=3 from=(0,6) gen=y to=(3,4) image=e*u*s range=i>=0
page=5 from=(0,4) gen=l to=(5,0) image=e*u^2 range=i>=0
page=5 from=(1,4) gen=e*l to=(6,0) image=u^3 range=i>=0
";

pub const CIRCLE_Z_LEDGER: &str = "\
page=2 from=(1,3) gen=Upsilon to=(3,2) image=T*Upsilon range=i>=0
page=3 from=(1,2) gen=Lambda to=(4,0) image=U^2 range=i>=0
";

/// One indecomposable summand of a fiber cohomology group, with the naming
/// scheme for its cohomology classes: the class in degree
/// `base_degree + 2k (+1)` is `(e *) symbol^k * base`.
#[derive(Debug, Clone, Serialize)]
pub struct FiberSummand {
    pub name: ModuleName,
    #[serde(skip)]
    pub module: ZGModule,
    pub base: String,
    pub symbol: String,
    pub base_degree: usize,
}

impl FiberSummand {
    pub fn new(name: ModuleName, coeff: Coeff) -> Self {
        let z = z4_module(name);
        let (base, symbol, base_degree) = match (coeff, name) {
            (Coeff::Z, ModuleName::Trivial) => ("1", "U", 0),
            (Coeff::Z, ModuleName::Regular) => ("R", "U", 0),
            (Coeff::Z, ModuleName::M) => ("Lambda", "U", 1),
            (Coeff::Z, ModuleName::Coset2) => ("s", "T", 0),
            (Coeff::Z, ModuleName::N) => ("Upsilon", "T", 1),
            (Coeff::Z, ModuleName::L) => ("w", "T", 0),
            (Coeff::F2, ModuleName::Trivial) => ("1", "u", 0),
            (Coeff::F2, ModuleName::Regular) => ("R", "u", 0),
            (Coeff::F2, ModuleName::M) => ("l", "u", 0),
            (Coeff::F2, ModuleName::Coset2) => ("s", "u", 0),
            (Coeff::F2, ModuleName::N) => ("y", "u", 0),
            (Coeff::F2, ModuleName::L) => ("w", "u", 0),
        };
        let module = match coeff {
            Coeff::Z => z,
            Coeff::F2 => mod2_reduce(&z),
        };
        FiberSummand {
            name,
            module,
            base: base.into(),
            symbol: symbol.into(),
            base_degree,
        }
    }

    /// Label of the class in degree `p`.
    pub fn label(&self, p: usize, coeff: Coeff) -> String {
        let shift = p.saturating_sub(self.base_degree);
        let mut parts = Vec::new();
        let k = match coeff {
            Coeff::F2 => {
                if shift % 2 == 1 {
                    parts.push("e".to_string());
                }
                shift / 2
            }
            Coeff::Z => shift / 2,
        };
        match k {
            0 => {}
            1 => parts.push(self.symbol.clone()),
            _ => parts.push(format!("{}^{k}", self.symbol)),
        }
        if self.base != "1" || parts.is_empty() {
            parts.push(self.base.clone());
        }
        parts.join("*")
    }
}

/// Fiber cohomology `H^q(Omega)` decomposed into named summands, by row.
#[derive(Debug, Clone, Serialize)]
pub struct Fiber {
    pub coeff: Coeff,
    pub rows: BTreeMap<usize, Vec<FiberSummand>>,
}

impl Fiber {
    pub fn from_names(coeff: Coeff, rows: &[(usize, &[ModuleName])]) -> Self {
        let rows = rows
            .iter()
            .map(|(q, names)| {
                (
                    *q,
                    names.iter().map(|&n| FiberSummand::new(n, coeff)).collect(),
                )
            })
            .collect();
        Fiber { coeff, rows }
    }

    pub fn max_row(&self) -> usize {
        self.rows.keys().next_back().copied().unwrap_or(0)
    }
}

fn decomposition_catalogue() -> Vec<(Vec<ModuleName>, ZGModule)> {
    use ModuleName::*;
    let sums: [&[ModuleName]; 8] = [
        &[Trivial],
        &[Regular],
        &[M],
        &[N],
        &[Coset2],
        &[M, Coset2],
        &[M, N],
        &[N, Coset2],
    ];
    sums.iter()
        .map(|names| {
            let mut m = z4_module(names[0]);
            for &n in &names[1..] {
                m = direct_sum(&m, &z4_module(n)).expect("same group");
            }
            let label = names
                .iter()
                .map(|n| n.as_str())
                .collect::<Vec<_>>()
                .join("+");
            (names.to_vec(), m.with_label(label))
        })
        .collect()
}

/// Decompose `H^*(Omega)` for a case via the pair homology and duality.
pub fn fiber_for_case(case: SpectralCase) -> Result<Fiber, SpectralError> {
    let table = case.pair_case().relative_table()?;
    let catalogue = decomposition_catalogue();
    let candidates: Vec<ZGModule> = catalogue.iter().map(|(_, m)| m.clone()).collect();
    let mut rows = BTreeMap::new();
    for (q, m) in dual_cohomology(&table).iter().enumerate() {
        if m.rank() == 0 {
            continue;
        }
        let id = identify_module(m, &candidates);
        let label = id.matched.ok_or(SpectralError::UnidentifiedFiber(q))?;
        let names = &catalogue
            .iter()
            .find(|(_, c)| c.label() == label)
            .expect("matched label")
            .0;
        rows.insert(
            q,
            names
                .iter()
                .map(|&n| FiberSummand::new(n, case.coeff()))
                .collect(),
        );
    }
    Ok(Fiber {
        coeff: case.coeff(),
        rows,
    })
}

/// One cyclic component of an `E2` entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub label: String,
    /// Index of the fiber summand in its row.
    pub summand: usize,
    /// Order, 0 for `Z`.
    pub order: u64,
}

#[derive(Debug, Clone)]
pub struct SSEntry {
    pub p: usize,
    pub q: usize,
    pub components: Vec<Component>,
    /// Basis of `Z_r` in component coordinates.
    pub cycles: IntMatrix,
    /// Generators of `B_r`, including the component orders.
    pub boundaries: IntMatrix,
}

impl SSEntry {
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn subquotient(&self) -> Subquotient {
        Subquotient::new(&self.cycles, &self.boundaries)
    }

    pub fn group(&self) -> FinAbGroup {
        self.subquotient().group
    }

    pub fn is_zero(&self) -> bool {
        self.group().is_trivial()
    }

    /// Canonical generators written in component labels.
    pub fn generator_labels(&self) -> Vec<String> {
        self.subquotient()
            .generators
            .iter()
            .map(|v| render_combination(v, &self.components))
            .collect()
    }
}

fn render_combination(v: &[BigInt], comps: &[Component]) -> String {
    let terms: Vec<String> = v
        .iter()
        .zip(comps)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, comp)| {
            if c == &BigInt::from(1) {
                comp.label.clone()
            } else {
                format!("{c}*{}", comp.label)
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// One page `E_r`, entries keyed by `(p, q)`; zero `E2` entries are absent.
#[derive(Debug, Clone)]
pub struct SSPage {
    pub r: usize,
    pub p_max: usize,
    pub coeff: Coeff,
    pub fiber: Fiber,
    pub entries: BTreeMap<(usize, usize), SSEntry>,
}

impl SSPage {
    pub fn entry(&self, p: usize, q: usize) -> Option<&SSEntry> {
        self.entries.get(&(p, q))
    }

    pub fn group(&self, p: usize, q: usize) -> FinAbGroup {
        self.entry(p, q)
            .map(SSEntry::group)
            .unwrap_or_else(FinAbGroup::zero)
    }

    pub fn rows(&self) -> Vec<usize> {
        self.fiber.rows.keys().copied().collect()
    }

    fn bases(&self, q: usize) -> Vec<String> {
        self.fiber
            .rows
            .get(&q)
            .map(|s| s.iter().map(|x| x.base.clone()).collect())
            .unwrap_or_default()
    }

    /// Component index of the class with the given base in entry `(p, q)`.
    fn component_of(&self, p: usize, q: usize, base: &str) -> Option<usize> {
        let summands = self.fiber.rows.get(&q)?;
        let entry = self.entry(p, q)?;
        entry
            .components
            .iter()
            .position(|c| summands[c.summand].base == base)
    }
}

/// `E2^{p,q} = H^p(Z4; H^q)` for `p <= p_max`.
pub fn build_e2(fiber: &Fiber, p_max: usize) -> SSPage {
    let mut entries = BTreeMap::new();
    for (&q, summands) in &fiber.rows {
        let tables: Vec<_> = summands
            .iter()
            .map(|s| cohomology(&s.module, p_max, fiber.coeff))
            .collect();
        for p in 0..=p_max {
            let mut comps = Vec::new();
            for (j, (s, t)) in summands.iter().zip(&tables).enumerate() {
                let orders = &t.degrees[p].orders;
                let single = orders.len() == 1;
                for (k, o) in orders.iter().enumerate() {
                    let base = s.label(p, fiber.coeff);
                    let label = if single { base } else { format!("{base}#{k}") };
                    comps.push(Component {
                        label,
                        summand: j,
                        order: o.to_u64().expect("small order"),
                    });
                }
            }
            if comps.is_empty() {
                continue;
            }
            let n = comps.len();
            let rel: Vec<Vec<BigInt>> = comps
                .iter()
                .enumerate()
                .filter(|(_, c)| c.order != 0)
                .map(|(i, c)| {
                    let mut v = vec![BigInt::zero(); n];
                    v[i] = BigInt::from(c.order);
                    v
                })
                .collect();
            entries.insert(
                (p, q),
                SSEntry {
                    p,
                    q,
                    components: comps,
                    cycles: IntMatrix::identity(n),
                    boundaries: IntMatrix::from_columns(n, &rel),
                },
            );
        }
    }
    SSPage {
        r: 2,
        p_max,
        coeff: fiber.coeff,
        fiber: fiber.clone(),
        entries,
    }
}

/// `E2` for a case, wide enough that a window of `p_window` columns is
/// unaffected by truncation.
pub fn build_case_e2(case: SpectralCase, p_window: usize) -> Result<SSPage, SpectralError> {
    let fiber = fiber_for_case(case)?;
    let p_max = p_window + fiber.max_row() + 2;
    Ok(build_e2(&fiber, p_max))
}

/// One line of a ledger: `d_page(symbol^i * gen at from) = symbol^i * image`
/// for every `i` in the range, both positions shifted by `2i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerRule {
    pub line: usize,
    pub page: usize,
    pub from: (usize, usize),
    pub gen: String,
    pub to: (usize, usize),
    pub image: String,
    pub i_min: usize,
}

impl fmt::Display for LedgerRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "page={} from=({},{}) gen={} to=({},{}) image={} range=i>={}",
            self.page,
            self.from.0,
            self.from.1,
            self.gen,
            self.to.0,
            self.to.1,
            self.image,
            self.i_min
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialLedger {
    pub rules: Vec<LedgerRule>,
}

fn parse_position(s: &str) -> Option<(usize, usize)> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

impl FromStr for DifferentialLedger {
    type Err = SpectralError;

    fn from_str(text: &str) -> Result<Self, SpectralError> {
        let mut rules = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let bad = |reason: String| SpectralError::MalformedRule { line, reason };
            let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
            for tok in content.split_whitespace() {
                let (k, v) = tok
                    .split_once('=')
                    .ok_or_else(|| bad(format!("expected key=value, got {tok:?}")))?;
                if fields.insert(k, v).is_some() {
                    return Err(bad(format!("duplicate key {k:?}")));
                }
            }
            let get = |k: &str| {
                fields
                    .get(k)
                    .copied()
                    .ok_or_else(|| bad(format!("missing key {k:?}")))
            };
            let page: usize = get("page")?
                .parse()
                .map_err(|_| bad("page is not a number".into()))?;
            let from =
                parse_position(get("from")?).ok_or_else(|| bad("from is not (p,q)".into()))?;
            let to = parse_position(get("to")?).ok_or_else(|| bad("to is not (p,q)".into()))?;
            let i_min = match fields.get("range") {
                None => 0,
                Some(r) => r
                    .strip_prefix("i>=")
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| bad(format!("range must be i>=k, got {r:?}")))?,
            };
            if let Some(k) = fields
                .keys()
                .find(|k| !["page", "from", "to", "gen", "image", "range"].contains(k))
            {
                return Err(bad(format!("unknown key {k:?}")));
            }
            rules.push(LedgerRule {
                line,
                page,
                from,
                gen: get("gen")?.to_string(),
                to,
                image: get("image")?.to_string(),
                i_min,
            });
        }
        Ok(DifferentialLedger { rules })
    }
}

impl fmt::Display for DifferentialLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Degree contributed by a product of `U`, `T`, `u` (2 each) and `e` (1).
fn symbol_degree(s: &str) -> Option<usize> {
    let mut deg = 0;
    let mut rest = s.trim_matches('*');
    while !rest.is_empty() {
        let c = rest.chars().next()?;
        let weight = match c {
            'U' | 'T' | 'u' => 2,
            'e' => 1,
            _ => return None,
        };
        rest = &rest[1..];
        let mut exp = 1;
        if let Some(r) = rest.strip_prefix('^') {
            let digits: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
            exp = digits.parse().ok()?;
            rest = &r[digits.len()..];
        }
        if c == 'e' && exp > 1 {
            return None;
        }
        deg += weight * exp;
        rest = rest.trim_start_matches('*');
    }
    Some(deg)
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Term {
    coeff: i64,
    shift: usize,
    base: String,
}

fn parse_term(t: &str, bases: &[String]) -> Result<Term, String> {
    let t: String = t.chars().filter(|c| !c.is_whitespace()).collect();
    let (sign, body) = match t.strip_prefix('-') {
        Some(r) => (-1, r.to_string()),
        None => (1, t.clone()),
    };
    let digits: String = body.chars().take_while(|c| c.is_ascii_digit()).collect();
    let coeff: i64 = if digits.is_empty() {
        1
    } else {
        digits
            .parse()
            .map_err(|_| format!("bad coefficient in {t:?}"))?
    };
    let rest = body[digits.len()..].trim_start_matches('*');
    if rest.is_empty() {
        return Ok(Term {
            coeff: sign * coeff,
            shift: 0,
            base: "1".into(),
        });
    }
    let mut sorted: Vec<&String> = bases.iter().filter(|b| b.as_str() != "1").collect();
    sorted.sort_by_key(|b| std::cmp::Reverse(b.len()));
    for b in sorted {
        if let Some(prefix) = rest.strip_suffix(b.as_str()) {
            if let Some(shift) = symbol_degree(prefix) {
                return Ok(Term {
                    coeff: sign * coeff,
                    shift,
                    base: b.clone(),
                });
            }
        }
    }
    match symbol_degree(rest) {
        Some(shift) => Ok(Term {
            coeff: sign * coeff,
            shift,
            base: "1".into(),
        }),
        None => Err(format!("unknown generator {t:?}")),
    }
}

fn parse_expr(s: &str, bases: &[String]) -> Result<Vec<Term>, String> {
    let s = s.trim();
    if s == "0" {
        return Ok(Vec::new());
    }
    s.replace('-', "+-")
        .split('+')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_term(t, bases))
        .collect()
}

/// A differential on one source component, in `E2` coordinates.
#[derive(Debug, Clone)]
pub struct Instance {
    pub page: usize,
    pub src: (usize, usize),
    pub src_comp: usize,
    pub tgt: (usize, usize),
    pub image: Vec<BigInt>,
    pub line: usize,
}

fn base_degree_of(page: &SSPage, q: usize, base: &str) -> Option<usize> {
    page.fiber
        .rows
        .get(&q)?
        .iter()
        .find(|s| s.base == base)
        .map(|s| s.base_degree)
}

/// Expand ledger rules into per-component instances within `p <= p_max`.
pub fn expand_ledger(
    e2: &SSPage,
    ledger: &DifferentialLedger,
) -> Result<Vec<Instance>, SpectralError> {
    let mut out = Vec::new();
    for rule in &ledger.rules {
        let bad = |reason: String| SpectralError::MalformedRule {
            line: rule.line,
            reason,
        };
        let r = rule.page;
        let (p0, q0) = rule.from;
        let (p1, q1) = rule.to;
        if r < 2 {
            return Err(bad(format!("page {r} is below 2")));
        }
        let dp = p1 as i64 - p0 as i64;
        let dq = q1 as i64 - q0 as i64;
        if dp != r as i64 || dq != 1 - r as i64 {
            return Err(bad(format!(
                "bidegree ({dp},{dq}) does not match page {r}, expected ({r},{})",
                1 - r as i64
            )));
        }
        let src_bases = e2.bases(q0);
        let tgt_bases = e2.bases(q1);
        let gen = parse_expr(&rule.gen, &src_bases).map_err(&bad)?;
        let [gen] = gen.as_slice() else {
            return Err(bad(format!(
                "gen must be a single generator, got {:?}",
                rule.gen
            )));
        };
        if gen.coeff != 1 {
            return Err(bad("gen must have coefficient 1".into()));
        }
        let image = parse_expr(&rule.image, &tgt_bases).map_err(&bad)?;
        let check_degree = |t: &Term, q: usize, p: usize| -> Result<(), SpectralError> {
            let bd = base_degree_of(e2, q, &t.base)
                .ok_or_else(|| bad(format!("no generator {:?} in row {q}", t.base)))?;
            if bd + t.shift != p {
                return Err(bad(format!(
                    "label degree {} does not match column {p}",
                    bd + t.shift
                )));
            }
            Ok(())
        };
        check_degree(gen, q0, p0)?;
        for t in &image {
            check_degree(t, q1, p1)?;
        }
        let mut i = rule.i_min;
        loop {
            let (ps, pt) = (p0 + 2 * i, p1 + 2 * i);
            if pt > e2.p_max {
                break;
            }
            let first = i == rule.i_min;
            let Some(src_comp) = e2.component_of(ps, q0, &gen.base) else {
                if first {
                    return Err(bad(format!("no class {:?} at ({ps},{q0})", gen.base)));
                }
                i += 1;
                continue;
            };
            let tgt_dim = e2.entry(pt, q1).map(SSEntry::dim).unwrap_or(0);
            let mut img = vec![BigInt::zero(); tgt_dim];
            for t in &image {
                let c = e2
                    .component_of(pt, q1, &t.base)
                    .ok_or_else(|| bad(format!("no class {:?} at ({pt},{q1})", t.base)))?;
                img[c] += t.coeff;
            }
            if tgt_dim == 0 && !first {
                i += 1;
                continue;
            }
            if tgt_dim == 0 {
                return Err(bad(format!("target ({pt},{q1}) is zero")));
            }
            out.push(Instance {
                page: r,
                src: (ps, q0),
                src_comp,
                tgt: (pt, q1),
                image: img,
                line: rule.line,
            });
            i += 1;
        }
    }
    Ok(out)
}

fn lattice_contains_all(lattice: &IntMatrix, vectors: &IntMatrix) -> bool {
    let solver = LatticeSolver::new(lattice);
    vectors.columns().iter().all(|c| solver.contains(c))
}

/// `{ z in Z : d z in B }`.
fn preimage(cycles: &IntMatrix, d: &IntMatrix, boundaries: &IntMatrix) -> IntMatrix {
    let a = cycles.cols();
    if a == 0 {
        return cycles.clone();
    }
    let dz = d * cycles;
    let neg_b = boundaries.scale(&BigInt::from(-1));
    let k = kernel_basis(&dz.hstack(&neg_b));
    let x = k.submatrix(0..a, 0..k.cols());
    column_space_basis(&(cycles * &x))
}

/// The sequence of pages `E2, E3, ...` up to `E_infinity`.
#[derive(Debug, Clone)]
pub struct SpectralRun {
    pub pages: Vec<SSPage>,
    pub total_bound: usize,
    pub p_window: usize,
}

impl SpectralRun {
    pub fn final_page(&self) -> &SSPage {
        self.pages.last().expect("at least E2")
    }

    pub fn page(&self, r: usize) -> Option<&SSPage> {
        self.pages.iter().find(|p| p.r == r)
    }
}

/// Source position to (target, matrix, ledger line).
type PageDifferentials = BTreeMap<(usize, usize), ((usize, usize), IntMatrix, usize)>;

/// Differential matrices on page `r`, keyed by source position.
fn page_differentials(page: &SSPage, instances: &[Instance]) -> PageDifferentials {
    let mut ds = PageDifferentials::new();
    for inst in instances.iter().filter(|i| i.page == page.r) {
        let (Some(src), Some(tgt)) = (
            page.entry(inst.src.0, inst.src.1),
            page.entry(inst.tgt.0, inst.tgt.1),
        ) else {
            continue;
        };
        let entry = ds
            .entry(inst.src)
            .or_insert_with(|| (inst.tgt, IntMatrix::zeros(tgt.dim(), src.dim()), inst.line));
        for (i, v) in inst.image.iter().enumerate() {
            entry.1[(i, inst.src_comp)] += v;
        }
    }
    ds
}

fn validate_page(page: &SSPage, ds: &PageDifferentials) -> Result<(), SpectralError> {
    let r = page.r;
    for (&src, (tgt, d, line)) in ds {
        let bad = |reason: String| SpectralError::MalformedRule {
            line: *line,
            reason,
        };
        let s = &page.entries[&src];
        let t = &page.entries[tgt];
        if !lattice_contains_all(&t.boundaries, &(d * &s.boundaries)) {
            return Err(bad(if r == 2 {
                format!("map {src:?} -> {tgt:?} is not a homomorphism")
            } else {
                format!("map {src:?} -> {tgt:?} is not well defined on E{r}")
            }));
        }
        if !lattice_contains_all(&t.cycles.hstack(&t.boundaries), &(d * &s.cycles)) {
            return Err(bad(format!(
                "image of {src:?} is not a class of E{r} at {tgt:?}"
            )));
        }
        if let Some((tgt2, d2, _)) = ds.get(tgt) {
            let t2 = &page.entries[tgt2];
            let comp = &(d2 * d) * &s.cycles;
            if !lattice_contains_all(&t2.boundaries, &comp) {
                return Err(bad(format!("d{r} o d{r} is nonzero on {src:?}")));
            }
        }
    }
    Ok(())
}

fn next_page(page: &SSPage, ds: &PageDifferentials) -> SSPage {
    let mut next = page.clone();
    next.r = page.r + 1;
    for (src, (tgt, d, _)) in ds {
        let s = &page.entries[src];
        let t = &page.entries[tgt];
        let z = preimage(&s.cycles, d, &t.boundaries);
        next.entries.get_mut(src).expect("source").cycles = z;
        let image = d * &s.cycles;
        let nt = next.entries.get_mut(tgt).expect("target");
        nt.boundaries = column_space_basis(&nt.boundaries.hstack(&image));
    }
    next
}

/// Apply already expanded differentials page by page and check convergence.
pub fn run_instances(
    e2: &SSPage,
    instances: &[Instance],
    total_bound: usize,
    p_window: usize,
) -> Result<SpectralRun, SpectralError> {
    let last = instances
        .iter()
        .map(|i| i.page)
        .max()
        .unwrap_or(0)
        .max(e2.fiber.max_row() + 1);
    let mut pages = vec![e2.clone()];
    for _ in 2..=last {
        let page = pages.last().expect("nonempty");
        let ds = page_differentials(page, instances);
        validate_page(page, &ds)?;
        let next = next_page(page, &ds);
        pages.push(next);
    }
    let run = SpectralRun {
        pages,
        total_bound,
        p_window,
    };
    check_convergence(run.final_page(), total_bound, p_window)?;
    Ok(run)
}

/// First nonzero entry with `p + q > total_bound` and `p <= p_window`,
/// ordered by total degree then `p`.
pub fn check_convergence(
    page: &SSPage,
    total_bound: usize,
    p_window: usize,
) -> Result<(), SpectralError> {
    let mut keys: Vec<(usize, usize)> = page
        .entries
        .keys()
        .copied()
        .filter(|&(p, q)| p + q > total_bound && p <= p_window)
        .collect();
    keys.sort_by_key(|&(p, q)| (p + q, p));
    for (p, q) in keys {
        let g = page.group(p, q);
        if !g.is_trivial() {
            return Err(SpectralError::ConvergenceViolation {
                p,
                q,
                group: g.to_string(),
            });
        }
    }
    Ok(())
}

/// Expand and apply a ledger.
pub fn run_ledger(
    e2: &SSPage,
    ledger: &DifferentialLedger,
    total_bound: usize,
    p_window: usize,
) -> Result<SpectralRun, SpectralError> {
    let instances = expand_ledger(e2, ledger)?;
    run_instances(e2, &instances, total_bound, p_window)
}

/// Kernel of `H^*(Z4) = E2^{*,0} -> E_inf^{*,0}`, up to degree `bound`.
pub fn edge_index(einf: &SSPage, bound: usize) -> Result<GradedIdeal, SpectralError> {
    let row = einf.fiber.rows.get(&0).ok_or(SpectralError::NoEdgeRow)?;
    if row.len() != 1 || row[0].name != ModuleName::Trivial {
        return Err(SpectralError::NoEdgeRow);
    }
    let ring = match einf.coeff {
        Coeff::Z => RingKind::Integral,
        Coeff::F2 => RingKind::Mod2,
    };
    let table: Vec<i64> = (0..=bound.min(einf.p_max))
        .map(|p| {
            let m = ring.modulus(p);
            match einf.entry(p, 0) {
                None => m,
                Some(e) => e
                    .boundaries
                    .columns()
                    .iter()
                    .fold(BigInt::from(m), |acc, c| acc.gcd(&c[0]))
                    .to_i64()
                    .expect("small"),
            }
        })
        .collect();
    Ok(GradedIdeal::from_table(ring, &table)?)
}

/// A family of differentials linear over the periodicity class:
/// `d_page(U^i x) = c U^i y` for `i >= i0`, where `x` runs over one summand's
/// classes of a fixed parity and `y` over one target summand.
#[derive(Debug, Clone, Serialize)]
pub struct Family {
    pub page: usize,
    pub src_row: usize,
    pub src_summand: usize,
    pub base_p: usize,
    pub tgt_row: usize,
    pub tgt_summand: usize,
    /// `(c, i0)` choices; absence is always an extra option.
    pub choices: Vec<(i64, usize)>,
}

fn comp_for_summand(page: &SSPage, p: usize, q: usize, summand: usize) -> Option<(usize, u64)> {
    let e = page.entry(p, q)?;
    e.components
        .iter()
        .position(|c| c.summand == summand)
        .map(|i| (i, e.components[i].order))
}

/// Enumerate candidate families on `E2`.
pub fn candidate_families(e2: &SSPage, p_window: usize) -> Vec<Family> {
    let rows = e2.rows();
    let max_row = e2.fiber.max_row();
    let mut out = Vec::new();
    for r in 2..=max_row + 1 {
        for &q in &rows {
            if q + 1 < r {
                continue;
            }
            let tq = q + 1 - r;
            let Some(tgt_summands) = e2.fiber.rows.get(&tq) else {
                continue;
            };
            for sj in 0..e2.fiber.rows[&q].len() {
                for parity in 0..2 {
                    for tj in 0..tgt_summands.len() {
                        let base = (0..=p_window).filter(|p| p % 2 == parity).find(|&p| {
                            comp_for_summand(e2, p, q, sj).is_some()
                                && comp_for_summand(e2, p + r, tq, tj).is_some()
                        });
                        let Some(bp) = base else { continue };
                        let (_, os) = comp_for_summand(e2, bp, q, sj).expect("base");
                        let (_, ot) = comp_for_summand(e2, bp + r, tq, tj).expect("base");
                        let coeffs: Vec<i64> = match ot {
                            0 => vec![1, -1],
                            _ => (1..ot as i64)
                                .filter(|c| os == 0 || (c * os as i64) % ot as i64 == 0)
                                .collect(),
                        };
                        let next = comp_for_summand(e2, bp + 2, q, sj).map(|x| x.1);
                        // a later start is only consistent with U-linearity when U
                        // does not map the base class onto the next one
                        let starts: &[usize] = match next {
                            Some(o) if o != os => &[0, 1],
                            _ => &[0],
                        };
                        let choices = coeffs
                            .iter()
                            .flat_map(|&c| starts.iter().map(move |&s| (c, s)))
                            .collect::<Vec<_>>();
                        if !choices.is_empty() {
                            out.push(Family {
                                page: r,
                                src_row: q,
                                src_summand: sj,
                                base_p: bp,
                                tgt_row: tq,
                                tgt_summand: tj,
                                choices,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

fn family_instances(e2: &SSPage, f: &Family, c: i64, i0: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    let mut i = i0;
    while f.base_p + 2 * i + f.page <= e2.p_max {
        let ps = f.base_p + 2 * i;
        let pt = ps + f.page;
        if let (Some((sc, _)), Some((tc, _))) = (
            comp_for_summand(e2, ps, f.src_row, f.src_summand),
            comp_for_summand(e2, pt, f.tgt_row, f.tgt_summand),
        ) {
            let mut image = vec![BigInt::zero(); e2.entry(pt, f.tgt_row).expect("target").dim()];
            image[tc] = BigInt::from(c);
            out.push(Instance {
                page: f.page,
                src: (ps, f.src_row),
                src_comp: sc,
                tgt: (pt, f.tgt_row),
                image,
                line: 0,
            });
        }
        i += 1;
    }
    out
}

fn family_rule(e2: &SSPage, f: &Family, c: i64, i0: usize) -> String {
    let ps = f.base_p + 2 * i0;
    let pt = ps + f.page;
    let src = &e2.fiber.rows[&f.src_row][f.src_summand];
    let tgt = &e2.fiber.rows[&f.tgt_row][f.tgt_summand];
    let image = if c == 1 {
        tgt.label(pt, e2.coeff)
    } else {
        format!("{c}*{}", tgt.label(pt, e2.coeff))
    };
    format!(
        "page={} from=({ps},{}) gen={} to=({pt},{}) image={image} range=i>=0",
        f.page,
        f.src_row,
        src.label(ps, e2.coeff),
        f.tgt_row
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibleLedger {
    pub index: u64,
    pub rules: Vec<String>,
    pub kernel: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ForcedSearchReport {
    pub families: Vec<Family>,
    pub examined: u64,
    pub rejected_malformed: u64,
    pub rejected_convergence: u64,
    pub admissible: Vec<AdmissibleLedger>,
    /// Distinct row-0 kernels, sorted.
    pub kernels: Vec<String>,
}

impl ForcedSearchReport {
    pub fn unique_kernel(&self) -> Option<&str> {
        match self.kernels.as_slice() {
            [k] => Some(k),
            _ => None,
        }
    }
}

enum Outcome {
    Admissible(AdmissibleLedger),
    Malformed,
    Divergent,
}

/// Run every combination of candidate families and collect the row-0
/// kernels of those that pass validation and convergence.
pub fn forced_pattern_search(
    e2: &SSPage,
    total_bound: usize,
    p_window: usize,
    budget: u64,
) -> Result<ForcedSearchReport, SpectralError> {
    if p_window > MAX_SEARCH_WINDOW {
        return Err(SpectralError::WindowTooLarge(p_window));
    }
    let families = candidate_families(e2, p_window);
    let radices: Vec<u64> = families
        .iter()
        .map(|f| f.choices.len() as u64 + 1)
        .collect();
    let needed: u128 = radices.iter().map(|&r| r as u128).product();
    if needed > budget as u128 {
        return Err(SpectralError::SearchBudgetExceeded { needed, budget });
    }
    let total = needed as u64;
    let outcomes: Vec<Outcome> = (0..total)
        .into_par_iter()
        .map(|index| {
            let mut code = index;
            let mut instances = Vec::new();
            let mut rules = Vec::new();
            for (f, &radix) in families.iter().zip(&radices) {
                let digit = (code % radix) as usize;
                code /= radix;
                if digit > 0 {
                    let (c, i0) = f.choices[digit - 1];
                    instances.extend(family_instances(e2, f, c, i0));
                    rules.push(family_rule(e2, f, c, i0));
                }
            }
            match run_instances(e2, &instances, total_bound, p_window) {
                Ok(run) => match edge_index(run.final_page(), p_window) {
                    Ok(k) => Outcome::Admissible(AdmissibleLedger {
                        index,
                        rules,
                        kernel: k.to_string(),
                    }),
                    Err(_) => Outcome::Malformed,
                },
                Err(SpectralError::ConvergenceViolation { .. }) => Outcome::Divergent,
                Err(_) => Outcome::Malformed,
            }
        })
        .collect();
    let mut report = ForcedSearchReport {
        families,
        examined: total,
        rejected_malformed: 0,
        rejected_convergence: 0,
        admissible: Vec::new(),
        kernels: Vec::new(),
    };
    for o in outcomes {
        match o {
            Outcome::Admissible(a) => report.admissible.push(a),
            Outcome::Malformed => report.rejected_malformed += 1,
            Outcome::Divergent => report.rejected_convergence += 1,
        }
    }
    let mut kernels: Vec<String> = report.admissible.iter().map(|a| a.kernel.clone()).collect();
    kernels.sort();
    kernels.dedup();
    report.kernels = kernels;
    Ok(report)
}

/// Serializable summary of one entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntrySummary {
    pub p: usize,
    pub q: usize,
    pub group: String,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageSummary {
    pub r: usize,
    pub entries: Vec<EntrySummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageTables {
    pub case: String,
    pub p_window: usize,
    pub rows: Vec<usize>,
    pub pages: Vec<PageSummary>,
}

impl PageTables {
    /// Nonzero entries with `p <= p_window` of every page.
    pub fn from_run(case: &str, run: &SpectralRun) -> Self {
        let rows = run.pages[0].rows();
        let pages = run
            .pages
            .iter()
            .map(|page| PageSummary {
                r: page.r,
                entries: page
                    .entries
                    .values()
                    .filter(|e| e.p <= run.p_window)
                    .map(|e| EntrySummary {
                        p: e.p,
                        q: e.q,
                        group: e.group().to_string(),
                        generators: e.generator_labels(),
                    })
                    .filter(|s| s.group != "0")
                    .collect(),
            })
            .collect();
        PageTables {
            case: case.to_string(),
            p_window: run.p_window,
            rows,
            pages,
        }
    }

    pub fn group(&self, r: usize, p: usize, q: usize) -> String {
        self.pages
            .iter()
            .find(|pg| pg.r == r)
            .and_then(|pg| pg.entries.iter().find(|e| e.p == p && e.q == q))
            .map(|e| e.group.clone())
            .unwrap_or_else(|| "0".into())
    }

    /// Grid per page, top row first.
    pub fn to_ascii(&self) -> String {
        let mut out = String::new();
        for pg in &self.pages {
            let cells: Vec<Vec<String>> = self
                .rows
                .iter()
                .rev()
                .map(|&q| {
                    (0..=self.p_window)
                        .map(|p| self.group(pg.r, p, q))
                        .collect()
                })
                .collect();
            let width = cells
                .iter()
                .flatten()
                .map(|c| c.len())
                .max()
                .unwrap_or(1)
                .max(self.p_window.to_string().len());
            out.push_str(&format!("{} E{}\n", self.case, pg.r));
            for (row, &q) in cells.iter().zip(self.rows.iter().rev()) {
                out.push_str(&format!("q={q:<3}|"));
                for c in row {
                    let c = if c == "0" { "." } else { c.as_str() };
                    out.push_str(&format!(" {c:>width$}"));
                }
                out.push('\n');
            }
            out.push_str("     +");
            out.push_str(&"-".repeat((width + 1) * (self.p_window + 1)));
            out.push_str("\n      ");
            for p in 0..=self.p_window {
                out.push_str(&format!(" {p:>width$}"));
            }
            out.push_str("\n\n");
        }
        out
    }

    /// One row per `(p, q, page)` over the full grid, zeros included.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("case,page,p,q,group\n");
        for pg in &self.pages {
            for &q in &self.rows {
                for p in 0..=self.p_window {
                    out.push_str(&format!(
                        "{},{},{p},{q},{}\n",
                        self.case,
                        pg.r,
                        self.group(pg.r, p, q)
                    ));
                }
            }
        }
        out
    }
}
