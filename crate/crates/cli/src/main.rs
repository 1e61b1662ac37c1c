use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use tetra_core::cohomology::{cohomology, u_action};
use tetra_core::config::{ConfigFile, RunConfig};
use tetra_core::geometry::curve::{square_peg_solve, CurveSpec};
use tetra_core::geometry::embedding::EmbeddingSpec;
use tetra_core::geometry::solver::{solve, SolveParams, SolveReport};
use tetra_core::index_ring::{mod2_reduce_ideal, RingKind};
use tetra_core::pair_homology::{dual_cohomology, PairCase};
use tetra_core::rep::{chern_top, complex_multiplicities, decompose, sphere_index, RealRep};
use tetra_core::report::{
    emit_tables, fiber_summary, run_case, verify_all, TableFormat, VerifyOptions,
};
use tetra_core::spectral::{
    build_case_e2, forced_pattern_search, DifferentialLedger, SpectralCase, DEFAULT_SEARCH_BUDGET,
};
use tetra_core::zgmodule::{mod2_reduce, z4_module, Coeff, ModuleName};

#[derive(Parser)]
#[command(
    name = "tetra",
    version,
    about = "Equivariant obstruction and inscribed-tetrahedron toolkit"
)]
struct Cli {
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// text | json (tables also accept ascii | csv).
    #[arg(long, global = true)]
    format: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Degree bound for cohomology tables, windows and ideals.
    #[arg(long, global = true)]
    max_degree: Option<usize>,
    /// key = value configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the whole verification chain.
    VerifyAll {
        /// Replacement ledger for the sphere case.
        #[arg(long)]
        ledger: Option<PathBuf>,
    },
    /// Cohomology of Z4 with coefficients in a named module.
    Cohomology {
        /// trivial | regular | coset2 | M | N | L
        #[arg(long, default_value = "trivial")]
        module: String,
        /// z | f2
        #[arg(long, default_value = "z")]
        coeff: String,
    },
    /// Relative homology of the configuration pair and its dual.
    PairHomology {
        /// sphere | circle
        #[arg(long, default_value = "sphere")]
        case: String,
    },
    /// Spectral sequence pages, edge index and forced-pattern search.
    Spectral {
        /// sphere-z | sphere-f2 | circle-z
        #[arg(long)]
        case: Option<String>,
        /// ascii | csv | json
        #[arg(long)]
        emit_pages: Option<String>,
        /// Print the index ideal.
        #[arg(long)]
        index: bool,
        /// Differential ledger file.
        #[arg(long)]
        ledger: Option<PathBuf>,
        /// Enumerate admissible differential patterns.
        #[arg(long)]
        search: bool,
    },
    /// Decomposition, top Chern class and sphere index of a representation.
    Chern {
        #[arg(long, default_value = "u4xu2")]
        rep: String,
        #[arg(long, default_value = "z4")]
        group: String,
        /// z | f2
        #[arg(long, default_value = "z")]
        coeff: String,
    },
    /// Search for a D8-symmetric tetrahedron on an embedded sphere.
    SolveTetra {
        /// round:R | ellipsoid:a,b,c | harmonic:l,m,c[;l,m,c]
        #[arg(long)]
        embedding: Option<String>,
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        distinct_margin: Option<f64>,
    },
    /// Search for an inscribed square in a planar curve.
    SolveSquare {
        /// circle:R | ellipse:a,b | star:a,k
        #[arg(long)]
        curve: Option<String>,
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        distinct_margin: Option<f64>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::VerifyAll { .. } => "verify-all",
            Command::Cohomology { .. } => "cohomology",
            Command::PairHomology { .. } => "pair-homology",
            Command::Spectral { .. } => "spectral",
            Command::Chern { .. } => "chern",
            Command::SolveTetra { .. } => "solve-tetra",
            Command::SolveSquare { .. } => "solve-square",
        }
    }
}

fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = RunConfig::defaults(cli.command.name());
    if let Some(path) = &cli.config {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        cfg.apply_file(&ConfigFile::parse(&text)?)?;
    }
    let mut flags: Vec<(&str, String)> = Vec::new();
    if let Some(v) = &cli.out {
        flags.push(("out", v.display().to_string()));
    }
    if let Some(v) = &cli.format {
        flags.push(("format", v.clone()));
    }
    if let Some(v) = cli.seed {
        flags.push(("seed", v.to_string()));
    }
    if let Some(v) = cli.max_degree {
        flags.push(("max-degree", v.to_string()));
    }
    match &cli.command {
        Command::VerifyAll { ledger } => {
            if let Some(l) = ledger {
                flags.push(("ledger", l.display().to_string()));
            }
        }
        Command::Spectral { case, ledger, .. } => {
            if let Some(c) = case {
                flags.push(("case", c.clone()));
            }
            if let Some(l) = ledger {
                flags.push(("ledger", l.display().to_string()));
            }
        }
        Command::SolveTetra {
            embedding,
            starts,
            tol,
            distinct_margin,
        } => {
            if let Some(e) = embedding {
                flags.push(("embedding", e.clone()));
            }
            push_solver_flags(&mut flags, *starts, *tol, *distinct_margin);
        }
        Command::SolveSquare {
            curve,
            starts,
            tol,
            distinct_margin,
        } => {
            if let Some(c) = curve {
                flags.push(("curve", c.clone()));
            }
            push_solver_flags(&mut flags, *starts, *tol, *distinct_margin);
        }
        _ => {}
    }
    for (k, v) in flags {
        cfg.set(k, &v)?;
    }
    Ok(cfg)
}

fn push_solver_flags(
    flags: &mut Vec<(&str, String)>,
    starts: Option<usize>,
    tol: Option<f64>,
    margin: Option<f64>,
) {
    if let Some(s) = starts {
        flags.push(("starts", s.to_string()));
    }
    if let Some(t) = tol {
        flags.push(("tol", t.to_string()));
    }
    if let Some(m) = margin {
        flags.push(("distinct-margin", m.to_string()));
    }
}

fn read_ledger(path: &PathBuf) -> Result<DifferentialLedger> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text.parse()?)
}

fn parse_coeff(s: &str) -> Result<Coeff> {
    match s.to_ascii_lowercase().as_str() {
        "z" => Ok(Coeff::Z),
        "f2" | "z2" => Ok(Coeff::F2),
        other => bail!("unknown coefficients {other:?} (expected z|f2)"),
    }
}

fn options(cfg: &RunConfig) -> Result<VerifyOptions> {
    let mut opts = VerifyOptions {
        max_degree: cfg.max_degree,
        embedding: cfg.embedding.parse()?,
        curve: cfg.curve.parse()?,
        solver: solver_params(cfg),
        ..VerifyOptions::default()
    };
    if let Some(path) = &cfg.ledger {
        opts.ledgers.insert(cfg.case, read_ledger(path)?);
    }
    Ok(opts)
}

fn solver_params(cfg: &RunConfig) -> SolveParams {
    SolveParams {
        starts: cfg.starts,
        seed: cfg.seed,
        tol: cfg.tol,
        distinct_margin: cfg.distinct_margin,
    }
}

fn json_out(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serialisable") + "\n"
}

fn solve_text(r: &SolveReport) -> String {
    let d = &r.distances;
    let mut s = String::new();
    s.push_str(&format!("status     {:?}\n", r.status));
    for (i, p) in r.config.iter().enumerate() {
        let coords: Vec<String> = p.iter().map(|x| format!("{x:+.12}")).collect();
        s.push_str(&format!("x{}         ({})\n", i + 1, coords.join(", ")));
    }
    s.push_str(&format!(
        "sides      {:.12} {:.12} {:.12} {:.12}\n",
        d.d12, d.d23, d.d34, d.d14
    ));
    s.push_str(&format!("diagonals  {:.12} {:.12}\n", d.d13, d.d24));
    s.push_str(&format!(
        "residual   {:.3e} (f64 {:.3e}, tol {:.1e})\n",
        r.residual, r.residual_f64, r.tol
    ));
    s.push_str(&format!(
        "margins    distinct {:.6}, to Y {:.6} (threshold {:.1e})\n",
        r.margins.distinct, r.margins.to_y, r.margins.threshold
    ));
    s.push_str(&format!(
        "starts     {} (seed {}, {} certified, {} redrawn near Y)\n",
        r.starts, r.seed, r.certified_starts, r.rejected_starts
    ));
    s
}

/// Output text and whether the command succeeded.
fn execute(cli: &Cli, cfg: &RunConfig) -> Result<(String, bool)> {
    let json = cfg.format == "json";
    match &cli.command {
        Command::VerifyAll { .. } => {
            let opts = options(cfg)?;
            let report = verify_all(&opts);
            let text = if json {
                json_out(&report)
            } else {
                report.to_text()
            };
            Ok((text, report.all_passed))
        }
        Command::Cohomology { module, coeff } => {
            let name: ModuleName = module.parse()?;
            let coeff = parse_coeff(coeff)?;
            let mut m = z4_module(name);
            if coeff == Coeff::F2 {
                m = mod2_reduce(&m);
            }
            let table = cohomology(&m, cfg.max_degree, coeff);
            let groups: Vec<String> = table.groups().iter().map(|g| g.to_string()).collect();
            let u_iso: Vec<bool> = (0..cfg.max_degree.saturating_sub(1))
                .map(|p| u_action(&m, p, coeff).is_isomorphism())
                .collect();
            let text = if json {
                json_out(
                    &json!({"module": name.as_str(), "coeff": format!("{coeff:?}"), "groups": groups, "u_isomorphism": u_iso}),
                )
            } else {
                let mut s = format!("H^p(Z4; {}) with {coeff:?} coefficients\n", name.as_str());
                for (p, g) in groups.iter().enumerate() {
                    let u = u_iso
                        .get(p)
                        .map(|b| if *b { "  U iso" } else { "" })
                        .unwrap_or("");
                    s.push_str(&format!("  p={p:<2} {g}{u}\n"));
                }
                s
            };
            Ok((text, true))
        }
        Command::PairHomology { case } => {
            let case: PairCase = case.parse().map_err(anyhow::Error::msg)?;
            let t = case.relative_table()?;
            let dual = dual_cohomology(&t);
            let spectral_case = if case == PairCase::Sphere {
                SpectralCase::SphereZ
            } else {
                SpectralCase::CircleZ
            };
            let fiber = fiber_summary(spectral_case)?;
            let ranks: Vec<usize> = t.degrees.iter().map(|m| m.rank()).collect();
            let dual_ranks: Vec<usize> = dual.iter().map(|m| m.rank()).collect();
            let text = if json {
                json_out(&json!({
                    "case": format!("{case:?}"),
                    "relative_ranks": ranks,
                    "euler_characteristic": t.euler_characteristic(),
                    "orientation_sign": t.orientation_sign,
                    "dual_ranks": dual_ranks,
                    "fiber": fiber,
                }))
            } else {
                format!(
                    "H_k(X,Y) ranks     {ranks:?}\nEuler char         {}\norientation sign   {}\nH^q(Omega) ranks   {dual_ranks:?}\n{}\n",
                    t.euler_characteristic(),
                    t.orientation_sign,
                    fiber.join("\n")
                )
            };
            Ok((text, true))
        }
        Command::Spectral {
            emit_pages,
            index,
            search,
            ..
        } => {
            let opts = options(cfg)?;
            let case = cfg.case;
            let mut out = String::new();
            if let Some(fmt) = emit_pages {
                let fmt: TableFormat = fmt.parse()?;
                out.push_str(&emit_tables(case, fmt, &opts)?);
            }
            if *index {
                let p = run_case(case, &opts)?;
                out.push_str(&if json {
                    json_out(&json!({"case": case.as_str(), "index": p.index.to_string()}))
                } else {
                    format!("Index({case}) = {}\n", p.index)
                });
            }
            if *search {
                let window = opts.window(case);
                let e2 = build_case_e2(case, window)?;
                let r =
                    forced_pattern_search(&e2, case.total_bound(), window, DEFAULT_SEARCH_BUDGET)?;
                out.push_str(&if json {
                    json_out(&r)
                } else {
                    format!(
                        "families {}, examined {}, malformed {}, divergent {}, admissible {}\nkernels {:?}\nunique {}\n",
                        r.families.len(),
                        r.examined,
                        r.rejected_malformed,
                        r.rejected_convergence,
                        r.admissible.len(),
                        r.kernels,
                        r.unique_kernel().unwrap_or("no")
                    )
                });
            }
            if out.is_empty() {
                let p = run_case(case, &opts)?;
                out = emit_tables(case, TableFormat::Ascii, &opts)?;
                out.push_str(&format!("Index({case}) = {}\n", p.index));
            }
            Ok((out, true))
        }
        Command::Chern { rep, group, coeff } => {
            if !group.eq_ignore_ascii_case("z4") {
                bail!("Chern classes are implemented for Z4 only, got {group}");
            }
            let coeff = parse_coeff(coeff)?;
            let r: RealRep = rep.parse()?;
            let lines = decompose(&r)?;
            let mult = complex_multiplicities(&r)?;
            let top = chern_top(&lines)?;
            let mut idx = sphere_index(&lines, cfg.max_degree)?;
            if coeff == Coeff::F2 {
                idx = mod2_reduce_ideal(&idx);
            }
            let top_shown = if coeff == Coeff::F2 {
                top.mod2_reduce().to_string()
            } else {
                top.to_string()
            };
            let mut notes = Vec::new();
            if mult.get(2).copied().unwrap_or(0) >= 2 {
                notes.push(
                    "two real lines on which the generator acts by -1 are combined into one complex line V^2".to_string(),
                );
            }
            let ring = if coeff == Coeff::F2 {
                RingKind::Mod2
            } else {
                RingKind::Integral
            };
            let text = if json {
                json_out(&json!({
                    "rep": rep, "decomposition": lines.to_string(), "complex_multiplicities": mult,
                    "chern_top": top_shown, "sphere_index": idx.to_string(), "ring": format!("{ring:?}"), "notes": notes,
                }))
            } else {
                let mut s = format!(
                    "{rep} = {lines}\ncomplex multiplicities {mult:?}\nc_top = {top_shown}\nIndex S({rep}) = {idx}\n"
                );
                for n in notes {
                    s.push_str(&format!("note: {n}\n"));
                }
                s
            };
            Ok((text, true))
        }
        Command::SolveTetra { .. } => {
            let e: EmbeddingSpec = cfg.embedding.parse()?;
            let r = solve(&e, &solver_params(cfg))?;
            let text = if json {
                r.to_json() + "\n"
            } else {
                solve_text(&r)
            };
            Ok((text, r.certified))
        }
        Command::SolveSquare { .. } => {
            let c: CurveSpec = cfg.curve.parse()?;
            let r = square_peg_solve(&c, &solver_params(cfg))?;
            let text = if json {
                r.to_json() + "\n"
            } else {
                solve_text(&r)
            };
            Ok((text, r.certified))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = resolve_config(&cli).and_then(|cfg| {
        let (text, ok) = execute(&cli, &cfg)?;
        match &cfg.out {
            Some(path) => {
                fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?
            }
            None => print!("{text}"),
        }
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
