//! Acceptance suite: one line per criterion, non-zero exit if a required
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tetra_core::cohomology::{
    cohomology, les_verify, n_sequence, norm_sequence, shapiro_check, u_action,
};
use tetra_core::geometry::embedding::{normalize, EmbeddingSpec};
use tetra_core::geometry::solver::{solve, SolveParams, SolveReport};
use tetra_core::geometry::testmap::{
    numeric_gradient, residual_and_gradient, test_map, Config4, D8,
};
use tetra_core::index_ring::{
    ideal_contains_ideal, mod2_reduce_ideal, no_map_verdict, parse_ideal, CohRingElement, RingKind,
    Verdict,
};
use tetra_core::pair_homology::{dual_cohomology, identify_module, PairCase};
use tetra_core::rep::{chern_top, decompose, sphere_index, RealRep};
use tetra_core::spectral::{
    build_case_e2, edge_index, forced_pattern_search, run_ledger, DifferentialLedger, SpectralCase,
    SpectralError, DEFAULT_SEARCH_BUDGET,
};
use tetra_core::zgmodule::{direct_sum, z4_module, Coeff, CyclicGroup, ModuleName, ZGModule};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || {
        format!(
            "took {:.2} s, limit {:.0} s",
            t.as_secs_f64(),
            limit.as_secs_f64()
        )
    })
}

fn table(m: &ZGModule, top: usize) -> Vec<String> {
    cohomology(m, top, Coeff::Z)
        .groups()
        .iter()
        .map(|g| g.to_string())
        .collect()
}

fn periodic(top: usize, first: &str, odd: &str, even: &str) -> Vec<String> {
    (0..=top)
        .map(|p| {
            if p == 0 {
                first
            } else if p % 2 == 1 {
                odd
            } else {
                even
            }
            .to_string()
        })
        .collect()
}

fn sum(names: &[ModuleName]) -> ZGModule {
    names[1..].iter().fold(z4_module(names[0]), |a, n| {
        direct_sum(&a, &z4_module(*n)).unwrap()
    })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let top = 9;
    let expected = [
        (ModuleName::Trivial, periodic(top, "Z", "0", "Z4")),
        (ModuleName::Regular, periodic(top, "Z", "0", "0")),
        (ModuleName::M, periodic(top, "0", "Z4", "0")),
        (ModuleName::N, periodic(top, "0", "Z2", "0")),
    ];
    for (name, want) in &expected {
        let got = table(&z4_module(*name), top);
        ensure(&got == want, || format!("{}: {got:?}", name.as_str()))?;
    }
    let shapiro = shapiro_check(CyclicGroup::z4(), 2, top).map_err(|e| e.to_string())?;
    ensure(shapiro.matches, || {
        format!("coset2 {:?} vs Z2 {:?}", shapiro.induced, shapiro.subgroup)
    })?;
    ensure(shapiro.induced == periodic(top, "Z", "0", "Z2"), || {
        format!("coset2 {:?}", shapiro.induced)
    })?;
    for p in (1..top).step_by(2) {
        ensure(
            u_action(&z4_module(ModuleName::M), p, Coeff::Z).is_isomorphism(),
            || format!("U on H^{p}(M)"),
        )?;
    }
    let mut positions = 0;
    for ses in [norm_sequence(), n_sequence()] {
        let r = les_verify(&ses, 8).map_err(|e| e.to_string())?;
        ensure(r.all_exact(), || "long exact sequence not exact".into())?;
        positions += r.positions.len();
    }
    within(Duration::from_secs(1), start)?;
    Ok(format!(
        "5 tables through degree 9, {positions} exact positions"
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let t = PairCase::Sphere
        .relative_table()
        .map_err(|e| e.to_string())?;
    ensure(t.degrees[3].rank() == 0 && t.degrees[5].rank() == 0, || {
        "degrees 3 and 5 nonzero".into()
    })?;
    let n = identify_module(&t.degrees[2], &[z4_module(ModuleName::N)]);
    ensure(n.matched.is_some(), || "degree 2 is not N".into())?;
    let m = identify_module(&t.degrees[4], &[sum(&[ModuleName::M, ModuleName::Coset2])]);
    ensure(m.matched.is_some(), || {
        "degree 4 is not M + Z[Z4/Z2]".into()
    })?;
    ensure(t.euler_characteristic() == 12, || {
        format!("Euler characteristic {}", t.euler_characteristic())
    })?;
    let dual = dual_cohomology(&t);
    let want: [(usize, &[ModuleName]); 4] = [
        (0, &[ModuleName::Trivial]),
        (2, &[ModuleName::Regular]),
        (4, &[ModuleName::M, ModuleName::Coset2]),
        (6, &[ModuleName::N]),
    ];
    for (q, module) in dual.iter().enumerate() {
        match want.iter().find(|(d, _)| *d == q) {
            Some((_, names)) => ensure(
                identify_module(module, &[sum(names)]).matched.is_some(),
                || format!("H^{q}(Omega) mismatch"),
            )?,
            None => ensure(module.rank() == 0, || format!("H^{q}(Omega) nonzero"))?,
        }
    }
    within(Duration::from_secs(1), start)?;
    Ok("H_2 = N, H_4 = M + Z[Z4/Z2], chi = 12, H^* = Z | Z[Z4] | M+Z[Z4/Z2] | N".into())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let case = SpectralCase::SphereZ;
    let e2 = build_case_e2(case, 10).map_err(|e| e.to_string())?;
    let rows: [(usize, &[ModuleName]); 4] = [
        (0, &[ModuleName::Trivial]),
        (2, &[ModuleName::Regular]),
        (4, &[ModuleName::M, ModuleName::Coset2]),
        (6, &[ModuleName::N]),
    ];
    for (q, names) in rows {
        let oracle = cohomology(&sum(names), 10, Coeff::Z).groups();
        for (p, g) in oracle.iter().enumerate() {
            ensure(&e2.group(p, q) == g, || {
                format!("E2^({p},{q}) = {}, oracle {g}", e2.group(p, q))
            })?;
        }
    }
    let run = run_ledger(&e2, &case.default_ledger(), 8, 10).map_err(|e| e.to_string())?;
    let last = run.final_page();
    for (&(p, q), _) in last
        .entries
        .iter()
        .filter(|((p, q), _)| p + q > 8 && *p <= 10)
    {
        ensure(last.group(p, q).is_trivial(), || {
            format!("E_inf^({p},{q}) = {}", last.group(p, q))
        })?;
    }
    let idx = edge_index(last, 10).map_err(|e| e.to_string())?;
    let want = parse_ideal(RingKind::Integral, "<U^3>", 10).unwrap();
    ensure(idx == want, || format!("edge index {idx}"))?;
    let empty = DifferentialLedger::default();
    match run_ledger(&e2, &empty, 8, 10) {
        Err(SpectralError::ConvergenceViolation { p, q, .. }) => {
            within(Duration::from_secs(1), start)?;
            Ok(format!(
                "rows match, vanishing above 8, index {idx}, empty ledger fails at ({p},{q})"
            ))
        }
        other => Err(format!("empty ledger gave {:?}", other.map(|_| ()))),
    }
}

fn target_index(bound: usize) -> Result<tetra_core::index_ring::GradedIdeal, String> {
    let rep = RealRep::u4()
        .direct_sum(&RealRep::u2())
        .map_err(|e| e.to_string())?;
    let lines = decompose(&rep).map_err(|e| e.to_string())?;
    sphere_index(&lines, bound).map_err(|e| e.to_string())
}

fn omega_index(case: SpectralCase) -> Result<tetra_core::index_ring::GradedIdeal, String> {
    let w = case.default_window();
    let e2 = build_case_e2(case, w).map_err(|e| e.to_string())?;
    let run = run_ledger(&e2, &case.default_ledger(), case.total_bound(), w)
        .map_err(|e| e.to_string())?;
    edge_index(run.final_page(), w).map_err(|e| e.to_string())
}

fn criterion_4() -> Outcome {
    let rep = RealRep::u4()
        .direct_sum(&RealRep::u2())
        .map_err(|e| e.to_string())?;
    let top = chern_top(&decompose(&rep).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(top == CohRingElement::u_power(2, 2), || {
        format!("c_top = {top}")
    })?;
    let target = target_index(10)?;
    ensure(
        target == parse_ideal(RingKind::Integral, "<2U^2>", 10).unwrap(),
        || format!("index {target}"),
    )?;
    let omega = omega_index(SpectralCase::SphereZ)?;
    ensure(!omega.contains(&top).unwrap(), || {
        "2U^2 lies in <U^3>".into()
    })?;
    let v = no_map_verdict(&omega, &target).unwrap();
    ensure(v == Verdict::NoEquivariantMap, || format!("verdict {v}"))?;
    Ok(format!(
        "c_top = {top}, contains({omega}, 2U^2) = false, {v}"
    ))
}

fn criterion_5() -> Outcome {
    let omega = omega_index(SpectralCase::SphereF2)?;
    let target = mod2_reduce_ideal(&target_index(omega.bound())?);
    ensure(target.is_zero(), || format!("mod-2 target {target}"))?;
    let want = parse_ideal(RingKind::Mod2, "<eu^2, u^3>", omega.bound()).unwrap();
    ensure(omega == want, || format!("F2 index {omega}"))?;
    let v = no_map_verdict(&omega, &target).unwrap();
    ensure(v == Verdict::Inconclusive, || format!("verdict {v}"))?;
    Ok(format!("j^*<2U^2> = {target}, index {omega}, {v}"))
}

fn criterion_6() -> Outcome {
    let t = PairCase::Circle
        .relative_table()
        .map_err(|e| e.to_string())?;
    let omega = omega_index(SpectralCase::CircleZ)?;
    let u2 = parse_ideal(RingKind::Integral, "<U^2>", omega.bound()).unwrap();
    ensure(omega == u2, || format!("circle index {omega}"))?;
    let target = target_index(omega.bound())?;
    ensure(ideal_contains_ideal(&u2, &target).unwrap(), || {
        "<U^2> does not contain <2U^2>".into()
    })?;
    let v = no_map_verdict(&omega, &target).unwrap();
    ensure(v == Verdict::Inconclusive, || format!("verdict {v}"))?;
    let ranks: Vec<usize> = t.degrees.iter().map(|m| m.rank()).collect();
    Ok(format!(
        "relative ranks {ranks:?}, index {omega} contains <2U^2>, {v}"
    ))
}

fn describe(r: &SolveReport) -> String {
    format!(
        "residual {:.1e}, distinct {:.3}, to-Y {:.3}, {} of {} starts certified",
        r.residual, r.margins.distinct, r.margins.to_y, r.certified_starts, r.starts
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let radius = 1.0;
    let r = solve(
        &EmbeddingSpec::round(radius),
        &SolveParams {
            starts: 16,
            seed: 42,
            ..SolveParams::default()
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(r.certified, || format!("not certified: {}", describe(&r)))?;
    ensure(r.residual < 1e-12, || format!("residual {:e}", r.residual))?;
    let side = 2f64.sqrt() * radius;
    for d in [
        r.distances.d12,
        r.distances.d23,
        r.distances.d34,
        r.distances.d14,
    ] {
        ensure(((d - side) / side).abs() < 1e-8, || format!("side {d}"))?;
    }
    within(Duration::from_secs(5), start)?;
    Ok(format!(
        "{}, {:.2} s",
        describe(&r),
        start.elapsed().as_secs_f64()
    ))
}

fn criterion_8() -> Outcome {
    let mut lines = Vec::new();
    for spec in [
        "ellipsoid:1.0,1.3,0.7",
        "harmonic:2,1,0.15",
        "harmonic:3,2,0.1",
    ] {
        let start = Instant::now();
        let e: EmbeddingSpec = spec
            .parse()
            .map_err(|e: tetra_core::geometry::GeometryError| e.to_string())?;
        let r = solve(
            &e,
            &SolveParams {
                starts: 64,
                seed: 42,
                ..SolveParams::default()
            },
        )
        .map_err(|e| e.to_string())?;
        ensure(r.certified, || {
            format!("{spec}: not certified: {}", describe(&r))
        })?;
        ensure(r.residual < 1e-8, || {
            format!("{spec}: residual {:e}", r.residual)
        })?;
        ensure(r.margins.distinct > 1e-3, || {
            format!("{spec}: margin {}", r.margins.distinct)
        })?;
        let d = r.distances;
        let sides = [d.d12, d.d23, d.d34, d.d14];
        let mean = sides.iter().sum::<f64>() / 4.0;
        ensure(
            sides.iter().all(|s| ((s - mean) / mean).abs() < 1e-8),
            || format!("{spec}: sides {sides:?}"),
        )?;
        ensure(((d.d13 - d.d24) / d.d13).abs() < 1e-8, || {
            format!("{spec}: diagonals {} {}", d.d13, d.d24)
        })?;
        within(Duration::from_secs(60), start)?;
        lines.push(format!("{spec} {:.2} s", start.elapsed().as_secs_f64()));
    }
    Ok(lines.join("; "))
}

fn random_config(rng: &mut ChaCha8Rng) -> Config4 {
    [(); 4].map(|_| loop {
        let v = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        if v.iter().map(|x: &f64| x * x).sum::<f64>() > 1e-2 {
            break normalize(&v);
        }
    })
}

fn families() -> Vec<(&'static str, EmbeddingSpec)> {
    vec![
        ("round", EmbeddingSpec::round(1.0)),
        (
            "ellipsoid",
            EmbeddingSpec::ellipsoid(1.0, 1.3, 0.7).unwrap(),
        ),
        (
            "harmonic",
            EmbeddingSpec::radial(&[(2, 1, 0.15), (3, 2, 0.1)]).unwrap(),
        ),
    ]
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0f64;
    for (_, e) in families() {
        for _ in 0..1000 {
            let c = random_config(&mut rng);
            let v = test_map(&e, &c);
            for g in D8::all() {
                let lhs = test_map(&e, &g.act_config(c)).as_array();
                let rhs = g.act_value(&v).as_array();
                for k in 0..6 {
                    worst = worst.max((lhs[k] - rhs[k]).abs());
                }
            }
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!(
        "3 x 1000 configs x 8 elements, max deviation {worst:.1e}"
    ))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst = 0f64;
    for (name, e) in families() {
        for _ in 0..100 {
            let c = random_config(&mut rng);
            let (_, ga) = residual_and_gradient(&e, &c);
            let gn = numeric_gradient(&e, &c, 1e-6);
            let diff = ga
                .iter()
                .zip(&gn)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            let norm = ga.iter().map(|a| a * a).sum::<f64>().sqrt();
            let rel = diff / norm;
            ensure(rel <= 1e-6, || format!("{name}: relative error {rel:e}"))?;
            worst = worst.max(rel);
        }
    }
    Ok(format!("3 x 100 configs, max relative error {worst:.1e}"))
}

fn criterion_11() -> Outcome {
    let case = SpectralCase::SphereZ;
    let e2 = build_case_e2(case, 10).map_err(|e| e.to_string())?;
    let r = forced_pattern_search(&e2, case.total_bound(), 10, DEFAULT_SEARCH_BUDGET)
        .map_err(|e| e.to_string())?;
    let summary = format!(
        "{} families, {} patterns examined, {} admissible, kernels {:?}",
        r.families.len(),
        r.examined,
        r.admissible.len(),
        r.kernels
    );
    match r.unique_kernel() {
        Some("<U^3>") => Ok(summary),
        _ => Err(format!("kernel not unique <U^3>: {summary}")),
    }
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, bool, fn() -> Outcome); 11] = [
        (1, "cohomology tables", true, criterion_1),
        (2, "pair homology", true, criterion_2),
        (3, "spectral chain", true, criterion_3),
        (4, "main verdict", true, criterion_4),
        (5, "F2 pipeline", true, criterion_5),
        (6, "square-peg pipeline", true, criterion_6),
        (7, "solver, round sphere", true, criterion_7),
        (8, "solver, deformed spheres", true, criterion_8),
        (9, "equivariance", true, criterion_9),
        (10, "gradient check", true, criterion_10),
        (
            11,
            "forced-pattern search (informational)",
            false,
            criterion_11,
        ),
    ];
    let mut failed = 0;
    for (id, name, required, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS {name} [{secs:.2} s]: {detail}"),
            Err(why) if required => {
                failed += 1;
                println!("criterion {id:>2} FAIL {name} [{secs:.2} s]: {why}");
            }
            Err(why) => println!("criterion {id:>2} INFO {name} [{secs:.2} s]: {why}"),
        }
    }
    if failed == 0 {
        println!("acceptance: all required criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} required criteria failed");
        ExitCode::FAILURE
    }
}
