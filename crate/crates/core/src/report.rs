//! End-to-end verification of the algebraic chain and the numerical witness.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::cohomology::{
    cohomology, les_verify, n_sequence, norm_sequence, shapiro_check, u_action, CohomologyError,
};
use crate::geometry::curve::{square_peg_solve, CurveSpec};
use crate::geometry::embedding::EmbeddingSpec;
use crate::geometry::solver::{solve, SolveParams};
use crate::geometry::GeometryError;
use crate::index_ring::{
    ideal_contains_ideal, mod2_reduce_ideal, no_map_verdict, parse_ideal, GradedIdeal, IndexError,
    RingKind, Verdict,
};
use crate::pair_homology::{dual_cohomology, identify_module, PairCase, PairError};
use crate::rep::{chern_top, decompose, sphere_index, RealRep, RepError};
use crate::spectral::{
    build_case_e2, edge_index, fiber_for_case, run_ledger, DifferentialLedger, PageTables, SSPage,
    SpectralCase, SpectralError, SpectralRun,
};
use crate::zgmodule::{
    direct_sum, z4_module, Coeff, CyclicGroup, ModuleError, ModuleName, ZGModule,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("check failed: {0}")]
    Check(String),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("unknown format {0:?} (expected ascii|csv|json)")]
    UnknownFormat(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), ReportError> {
    if cond {
        Ok(())
    } else {
        Err(ReportError::Check(what()))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Cohomological degree bound for tables, windows and ideals.
    pub max_degree: usize,
    /// Replacement ledgers per case.
    pub ledgers: BTreeMap<SpectralCase, DifferentialLedger>,
    pub embedding: EmbeddingSpec,
    pub curve: CurveSpec,
    pub solver: SolveParams,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_degree: 10,
            ledgers: BTreeMap::new(),
            embedding: EmbeddingSpec::ellipsoid(1.0, 1.3, 0.7).expect("valid ellipsoid"),
            curve: CurveSpec::Ellipse { a: 1.0, b: 0.6 },
            solver: SolveParams::default(),
        }
    }
}

impl VerifyOptions {
    pub fn ledger(&self, case: SpectralCase) -> DifferentialLedger {
        self.ledgers
            .get(&case)
            .cloned()
            .unwrap_or_else(|| case.default_ledger())
    }

    pub fn window(&self, case: SpectralCase) -> usize {
        case.default_window().min(self.max_degree)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    pub name: String,
    /// The statement being checked.
    pub claim: String,
    pub passed: bool,
    pub detail: String,
    pub millis: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MasterReport {
    pub steps: Vec<StepReport>,
    /// Verdict per spectral case.
    pub verdicts: BTreeMap<String, Verdict>,
    pub indices: BTreeMap<String, String>,
    pub all_passed: bool,
    /// Name and error of the step that aborted the run.
    pub failure: Option<(String, String)>,
}

impl MasterReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let mark = if s.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "[{mark}] {:<24} {}\n       {}\n",
                s.name, s.claim, s.detail
            ));
        }
        for (case, v) in &self.verdicts {
            out.push_str(&format!("verdict {case}: {v}\n"));
        }
        if let Some((step, err)) = &self.failure {
            out.push_str(&format!("aborted at {step}: {err}\n"));
        }
        out
    }
}

/// Outcome of one spectral pipeline.
#[derive(Debug, Clone)]
pub struct CasePipeline {
    pub case: SpectralCase,
    pub e2: SSPage,
    pub run: SpectralRun,
    pub index: GradedIdeal,
}

/// E2, ledger run and edge index for one case.
pub fn run_case(case: SpectralCase, opts: &VerifyOptions) -> Result<CasePipeline, ReportError> {
    let window = opts.window(case);
    let e2 = build_case_e2(case, window)?;
    let run = run_ledger(&e2, &opts.ledger(case), case.total_bound(), window)?;
    let index = edge_index(run.final_page(), window)?;
    Ok(CasePipeline {
        case,
        e2,
        run,
        index,
    })
}

/// Index of the target sphere `S(U4 x U2)` computed from its characteristic class.
pub fn target_index(bound: usize) -> Result<GradedIdeal, ReportError> {
    let rep = RealRep::u4().direct_sum(&RealRep::u2())?;
    Ok(sphere_index(&decompose(&rep)?, bound)?)
}

fn groups(m: &ZGModule, top: usize, coeff: Coeff) -> Vec<String> {
    cohomology(m, top, coeff)
        .groups()
        .iter()
        .map(|g| g.to_string())
        .collect()
}

/// Expected periodic pattern: `first`, then alternating odd/even values.
fn pattern(top: usize, first: &str, odd: &str, even: &str) -> Vec<String> {
    (0..=top)
        .map(|p| match p {
            0 => first,
            p if p % 2 == 1 => odd,
            _ => even,
        })
        .map(String::from)
        .collect()
}

fn step_cohomology(opts: &VerifyOptions) -> Result<String, ReportError> {
    let top = opts.max_degree.min(9);
    let cases = [
        (ModuleName::Trivial, pattern(top, "Z", "0", "Z4")),
        (ModuleName::Regular, pattern(top, "Z", "0", "0")),
        (ModuleName::Coset2, pattern(top, "Z", "0", "Z2")),
        (ModuleName::M, pattern(top, "0", "Z4", "0")),
        (ModuleName::N, pattern(top, "0", "Z2", "0")),
    ];
    for (name, want) in &cases {
        let got = groups(&z4_module(*name), top, Coeff::Z);
        check(&got == want, || {
            format!("H*(Z4; {}) = {got:?}, expected {want:?}", name.as_str())
        })?;
    }
    let shapiro = shapiro_check(CyclicGroup::z4(), 2, top)?;
    check(shapiro.matches, || {
        format!(
            "Shapiro comparison failed: {:?} vs {:?}",
            shapiro.induced, shapiro.subgroup
        )
    })?;
    for p in (1..top).step_by(2) {
        check(
            u_action(&z4_module(ModuleName::M), p, Coeff::Z).is_isomorphism(),
            || format!("U is not an isomorphism on H^{p}(M)"),
        )?;
    }
    let les_top = opts.max_degree.min(8);
    let mut positions = 0;
    for ses in [norm_sequence(), n_sequence()] {
        let r = les_verify(&ses, les_top)?;
        positions += r.positions.len();
    }
    Ok(format!("5 tables through degree {top}, Shapiro, U on H^odd(M), {positions} exact positions through degree {les_top}"))
}

fn named_sum(names: &[ModuleName]) -> ZGModule {
    names[1..].iter().fold(z4_module(names[0]), |acc, n| {
        direct_sum(&acc, &z4_module(*n)).expect("same group")
    })
}

fn step_pair_homology() -> Result<String, ReportError> {
    let t = PairCase::Sphere.relative_table()?;
    let ranks: Vec<usize> = t.degrees.iter().map(|m| m.rank()).collect();
    check(t.degrees[3].rank() == 0 && t.degrees[5].rank() == 0, || {
        format!("sphere ranks {ranks:?}")
    })?;
    let id2 = identify_module(&t.degrees[2], &[z4_module(ModuleName::N)]);
    check(id2.matched.is_some(), || "H_2(X,Y) is not N".into())?;
    let id4 = identify_module(
        &t.degrees[4],
        &[named_sum(&[ModuleName::M, ModuleName::Coset2])],
    );
    check(id4.matched.is_some(), || {
        "H_4(X,Y) is not M + Z[Z4/Z2]".into()
    })?;
    check(t.euler_characteristic() == 12, || {
        format!("Euler characteristic {}", t.euler_characteristic())
    })?;
    let dual = dual_cohomology(&t);
    let expected: [(usize, &[ModuleName]); 4] = [
        (0, &[ModuleName::Trivial]),
        (2, &[ModuleName::Regular]),
        (4, &[ModuleName::M, ModuleName::Coset2]),
        (6, &[ModuleName::N]),
    ];
    for (q, m) in dual.iter().enumerate() {
        match expected.iter().find(|(d, _)| *d == q) {
            Some((_, names)) => check(
                identify_module(m, &[named_sum(names)]).matched.is_some(),
                || format!("H^{q}(Omega) does not match"),
            )?,
            None => check(m.rank() == 0, || format!("H^{q}(Omega) should vanish"))?,
        }
    }
    let c = PairCase::Circle.relative_table()?;
    let circle_ranks: Vec<usize> = c.degrees.iter().map(|m| m.rank()).collect();
    Ok(format!(
        "sphere ranks {ranks:?}, chi = 12, H^*(Omega) = Z | Z[Z4] | M+Z[Z4/Z2] | N; circle ranks {circle_ranks:?}"
    ))
}

/// Compare every `E2^{p,q}` with the cohomology of the fiber row computed directly.
fn check_e2_rows(e2: &SSPage, p_window: usize) -> Result<(), ReportError> {
    for (q, summands) in &e2.fiber.rows {
        let names: Vec<ModuleName> = summands.iter().map(|s| s.name).collect();
        let module = named_sum(&names);
        let module = match e2.coeff {
            Coeff::Z => module,
            Coeff::F2 => crate::zgmodule::mod2_reduce(&module),
        };
        let oracle = cohomology(&module, p_window, e2.coeff).groups();
        for (p, want) in oracle.iter().enumerate() {
            let got = e2.group(p, *q);
            check(&got == want, || {
                format!("E2^({p},{q}) = {got}, expected {want}")
            })?;
        }
    }
    Ok(())
}

/// Runs `f` as a named step; `None` means it failed and was recorded.
fn step<T>(
    report: &mut MasterReport,
    name: &str,
    claim: &str,
    f: impl FnOnce() -> Result<(T, String), ReportError>,
) -> Option<T> {
    let start = Instant::now();
    let result = f();
    let millis = start.elapsed().as_secs_f64() * 1e3;
    let (value, passed, detail) = match result {
        Ok((v, d)) => (Some(v), true, d),
        Err(e) => {
            report.failure = Some((name.to_string(), e.to_string()));
            (None, false, e.to_string())
        }
    };
    report.steps.push(StepReport {
        name: name.into(),
        claim: claim.into(),
        passed,
        detail,
        millis,
    });
    value
}

/// Runs every verification step in order, stopping at the first failure.
pub fn verify_all(opts: &VerifyOptions) -> MasterReport {
    let mut r = MasterReport {
        steps: Vec::new(),
        verdicts: BTreeMap::new(),
        indices: BTreeMap::new(),
        all_passed: false,
        failure: None,
    };
    let bound = opts.max_degree;
    let case = SpectralCase::SphereZ;
    let window = opts.window(case);

    macro_rules! run {
        ($name:expr, $claim:expr, $body:expr) => {
            match step(&mut r, $name, $claim, $body) {
                Some(v) => v,
                None => return r,
            }
        };
    }

    run!(
        "cohomology",
        "H*(Z4;Z) = Z[U]/4U; regular, coset, M and N tables; exact long sequences",
        || { Ok(((), step_cohomology(opts)?)) }
    );
    run!(
        "pair-homology",
        "H_*(X,Y) has N in degree 2, M + Z[Z4/Z2] in degree 4, zeros in 3 and 5; duality gives H^*(Omega)",
        || Ok(((), step_pair_homology()?))
    );
    let e2 = run!("e2", "E2 rows are H^*(Z4; H^q(Omega))", || {
        let e2 = build_case_e2(case, window)?;
        check_e2_rows(&e2, window)?;
        let d = format!(
            "rows {:?} match the cohomology oracle for p <= {window}",
            e2.rows()
        );
        Ok((e2, d))
    });
    let run = run!(
        "ledger-run",
        "d3 and d5 leave nothing above total degree 8",
        || {
            let run = run_ledger(&e2, &opts.ledger(case), case.total_bound(), window)?;
            let d = format!(
                "E{} vanishes for p+q > {} with p <= {window}",
                run.final_page().r,
                case.total_bound()
            );
            Ok((run, d))
        }
    );
    let omega = run!("edge-index", "Index(Omega; Z) = <U^3>", || {
        let omega = edge_index(run.final_page(), window)?;
        let want = parse_ideal(RingKind::Integral, "<U^3>", omega.bound())?;
        check(omega == want, || {
            format!("edge index {omega}, expected {want}")
        })?;
        let d = format!(
            "kernel of the edge map through degree {} is {omega}",
            omega.bound()
        );
        Ok((omega, d))
    });
    r.indices.insert("omega-sphere-z".into(), omega.to_string());
    let target = run!(
        "chern-index",
        "Index(S(U4 x U2); Z) = <2U^2>, generated by the top Chern class",
        || {
            let rep = RealRep::u4().direct_sum(&RealRep::u2())?;
            let lines = decompose(&rep)?;
            let top = chern_top(&lines)?;
            let idx = sphere_index(&lines, bound)?;
            let want = parse_ideal(RingKind::Integral, "<2U^2>", bound)?;
            check(idx == want, || {
                format!("sphere index {idx}, expected {want}")
            })?;
            Ok((idx, format!("U4 x U2 = {lines}, c_top = {top}")))
        }
    );
    r.indices.insert("target-z".into(), target.to_string());
    let v = run!(
        "no-map-verdict",
        "<2U^2> is not in <U^3>, so there is no equivariant map Omega -> S(U4 x U2)",
        || {
            let v = no_map_verdict(&omega, &target)?;
            check(v == Verdict::NoEquivariantMap, || format!("verdict {v}"))?;
            Ok((v, format!("contains({omega}, 2U^2) = false")))
        }
    );
    r.verdicts.insert(case.to_string(), v);
    let (idx, v) = run!(
        "f2-pipeline",
        "mod 2: j^*(2U^2) = 0 and Index(Omega; F2) = <eu^2, u^3>; no conclusion",
        || {
            let target2 = mod2_reduce_ideal(&target);
            check(target2.is_zero(), || {
                format!("mod-2 target index {target2}")
            })?;
            let p = run_case(SpectralCase::SphereF2, opts)?;
            check_e2_rows(&p.e2, opts.window(SpectralCase::SphereF2))?;
            let want = parse_ideal(RingKind::Mod2, "<eu^2, u^3>", p.index.bound())?;
            check(p.index == want, || {
                format!("F2 edge index {}, expected {want}", p.index)
            })?;
            let v = no_map_verdict(&p.index, &target2)?;
            check(v == Verdict::Inconclusive, || format!("verdict {v}"))?;
            let d = format!("target index {target2}, Omega index {}", p.index);
            Ok(((p.index, v), d))
        }
    );
    r.indices.insert("omega-sphere-f2".into(), idx.to_string());
    r.verdicts.insert(SpectralCase::SphereF2.to_string(), v);
    let (idx, v) = run!(
        "square-peg",
        "circle case: Index(Omega) = <U^2> contains <2U^2>; no conclusion",
        || {
            let t = PairCase::Circle.relative_table()?;
            let p = run_case(SpectralCase::CircleZ, opts)?;
            check_e2_rows(&p.e2, opts.window(SpectralCase::CircleZ))?;
            let want = parse_ideal(RingKind::Integral, "<U^2>", p.index.bound())?;
            check(p.index == want, || {
                format!("circle edge index {}, expected {want}", p.index)
            })?;
            check(ideal_contains_ideal(&p.index, &target)?, || {
                "<U^2> should contain <2U^2>".into()
            })?;
            let v = no_map_verdict(&p.index, &target)?;
            check(v == Verdict::Inconclusive, || format!("verdict {v}"))?;
            let d = format!(
                "relative Euler characteristic {}, Omega index {}",
                t.euler_characteristic(),
                p.index
            );
            Ok(((p.index, v), d))
        }
    );
    r.indices.insert("omega-circle-z".into(), idx.to_string());
    r.verdicts.insert(SpectralCase::CircleZ.to_string(), v);
    run!(
        "numerical-witness",
        "the test map has a zero at four distinct points off Y",
        || {
            let s = solve(&opts.embedding, &opts.solver)?;
            check(s.certified, || {
                format!("sphere solve not certified (residual {:e})", s.residual)
            })?;
            let c = square_peg_solve(&opts.curve, &opts.solver)?;
            check(c.certified, || {
                format!("curve solve not certified (residual {:e})", c.residual)
            })?;
            let d = format!(
                "sphere residual {:.1e}, margin {:.3}; curve {} residual {:.1e}",
                s.residual, s.margins.distinct, opts.curve, c.residual
            );
            Ok(((), d))
        }
    );
    r.all_passed = true;
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Ascii,
    Csv,
    Json,
}

impl std::str::FromStr for TableFormat {
    type Err = ReportError;
    fn from_str(s: &str) -> Result<Self, ReportError> {
        match s {
            "ascii" | "text" => Ok(TableFormat::Ascii),
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::Json),
            other => Err(ReportError::UnknownFormat(other.to_string())),
        }
    }
}

/// Page tables of a case in the requested format.
pub fn emit_tables(
    case: SpectralCase,
    format: TableFormat,
    opts: &VerifyOptions,
) -> Result<String, ReportError> {
    let p = run_case(case, opts)?;
    let tables = PageTables::from_run(case.as_str(), &p.run);
    Ok(match format {
        TableFormat::Ascii => tables.to_ascii(),
        TableFormat::Csv => tables.to_csv(),
        TableFormat::Json => {
            serde_json::to_string_pretty(&tables).expect("tables serialise") + "\n"
        }
    })
}

/// Fiber rows of a case, e.g. `q=4: M + coset2`.
pub fn fiber_summary(case: SpectralCase) -> Result<Vec<String>, ReportError> {
    let f = fiber_for_case(case)?;
    Ok(f.rows
        .iter()
        .map(|(q, s)| {
            format!(
                "q={q}: {}",
                s.iter()
                    .map(|x| x.name.as_str())
                    .collect::<Vec<_>>()
                    .join(" + ")
            )
        })
        .collect())
}
