//! Command-line front end: input parsing, dispatch and report
//! serialization. Exit codes: 0 success, 1 input error, 2 internal
//! invariant violation.

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::classify::{classify, classify_degree, crosscheck, hh_assembly};
use crate::error::{Error, Result};
use crate::lattice::{in_interior, q_polyhedron, LatticeVector};
use crate::report::{
    classify_json, classify_tsv, load_cone, ConeReport, QPolyhedronReport, T1_TSV_HEADER,
};
use crate::surface::{e1_page, poisson_cohomology, surface_t1_dims, EntryStatus, MupKind};
use crate::t1::T1Context;
use crate::toric::jacobian_ring_dim;

/// Environment variable carrying the default enumeration window bound.
pub const WINDOW_ENV: &str = "TORIC_DEFORM_WINDOW";

fn default_window() -> i64 {
    std::env::var(WINDOW_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(12)
}

#[derive(Debug, Parser)]
#[command(
    name = "toric-deform",
    about = "Deformation invariants of affine Gorenstein toric varieties, in exact arithmetic"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the labeled dual rays and canonical degree of a cone.
    Dual(DualArgs),
    /// Degreewise T¹ dimensions from the vertex/edge/span formula.
    T1(T1Args),
    /// Closed-form classification of all nonzero T¹ degrees, with the
    /// evaluator crosscheck and the HH²/HH³ assembly.
    Classify(ClassifyArgs),
    /// Invariants of the Gorenstein surfaces A_n.
    Surface(SurfaceArgs),
    /// Seeded property suites.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct DualArgs {
    /// Cone file: {"rays": [[x,y,z],…]} or {"polygon": [[x,y],…]}.
    #[arg(long)]
    pub cone: String,
    /// Also report the cross-section polyhedron Q(R) at this degree.
    #[arg(long)]
    pub degree: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct T1Args {
    #[arg(long)]
    pub cone: String,
    /// Degree as raw coordinates "x,y,z".
    #[arg(long)]
    pub degree: Option<String>,
    /// Degree as "q,j,p" meaning qR* − p·s_j (1-indexed edge j; positive p
    /// subtracts).
    #[arg(long)]
    pub degree_sym: Option<String>,
    /// Hodge index i (1..=5); all of 1..=3 when omitted.
    #[arg(long)]
    pub hodge: Option<usize>,
    /// Scan bounds "qmax,pmax": all degrees qR* ± p·s_j plus the pairing box.
    #[arg(long)]
    pub scan: Option<String>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub cone: String,
    /// Crosscheck bounds "qmax,pmax".
    #[arg(long)]
    pub scan: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Include the HH²/HH³ assembly in the JSON report.
    #[arg(long, default_value_t = false)]
    pub hh: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurfaceReportKind {
    Dims,
    E1,
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MupArg {
    Pig,
    Zero,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Surface index n ≥ 1 of A_n = k[x,y,z]/(xy − z^{n+1}).
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum)]
    pub report: SurfaceReportKind,
    #[arg(long, value_enum, default_value = "pig")]
    pub mu_p: MupArg,
    /// Enumeration window bound (weight cutoff).
    #[arg(long)]
    pub window: Option<i64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteKind {
    PalLemma,
    McPoisson,
    Gauge,
    HodgeProjectors,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub suite: SuiteKind,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Artin coefficient spec for suites that use one, e.g. "t^3".
    #[arg(long, default_value = "t^3")]
    pub artin: String,
}

fn parse_csv_i64(text: &str, expected: usize, what: &str) -> Result<Vec<i64>> {
    let parts: Vec<i64> = text
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::input(format!("cannot parse {} from \"{}\"", what, text)))?;
    if parts.len() != expected {
        return Err(Error::input(format!(
            "{} needs {} comma-separated integers",
            what, expected
        )));
    }
    Ok(parts)
}

fn resolve_degree(ctx: &T1Context, args_deg: &Option<String>, sym: &Option<String>) -> Result<Option<LatticeVector>> {
    match (args_deg, sym) {
        (Some(_), Some(_)) => Err(Error::input("give either --degree or --degree-sym, not both")),
        (Some(d), None) => {
            let c = parse_csv_i64(d, 3, "--degree")?;
            Ok(Some(LatticeVector::m_from(&c)))
        }
        (None, Some(s)) => {
            let c = parse_csv_i64(s, 3, "--degree-sym")?;
            let j = usize::try_from(c[1])
                .ok()
                .filter(|j| (1..=ctx.cone.n_rays()).contains(j))
                .ok_or_else(|| Error::input("edge index out of range in --degree-sym"))?;
            Ok(Some(ctx.cone.symbolic_degree(c[0], j - 1, c[2])))
        }
        (None, None) => Ok(None),
    }
}

/// Run a parsed command, printing the report; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e);
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Dual(a) => cmd_dual(a),
        Command::T1(a) => cmd_t1(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Surface(a) => cmd_surface(a),
        Command::Check(a) => cmd_check(a),
    }
}

fn cmd_dual(a: DualArgs) -> Result<()> {
    let cone = load_cone(&a.cone)?;
    let report = ConeReport::new(&cone);
    match a.format {
        Format::Json => {
            if let Some(d) = &a.degree {
                let c = parse_csv_i64(d, 3, "--degree")?;
                let q = q_polyhedron(&cone, &LatticeVector::m_from(&c));
                let combined = serde_json::json!({
                    "schema": crate::report::SCHEMA_VERSION,
                    "cone": report,
                    "q_polyhedron": QPolyhedronReport::new(&q),
                });
                println!("{}", serde_json::to_string_pretty(&combined)?);
            } else {
                println!("{}", serde_json::to_string_pretty(&report)?);
            }
        }
        Format::Tsv => {
            for (j, (r, s)) in report.rays.iter().zip(&report.dual_rays).enumerate() {
                println!(
                    "{}\t{},{},{}\t{},{},{}\t{}",
                    j + 1,
                    r[0],
                    r[1],
                    r[2],
                    s[0],
                    s[1],
                    s[2],
                    report.edge_lengths[j]
                );
            }
        }
    }
    Ok(())
}

fn cmd_t1(a: T1Args) -> Result<()> {
    let cone = load_cone(&a.cone)?;
    let ctx = T1Context::new(cone);
    if let Some(scan) = &a.scan {
        let b = parse_csv_i64(scan, 2, "--scan")?;
        let (q_max, p_max) = (b[0], b[1]);
        let mut degrees = Vec::new();
        for q in 1..=q_max {
            for j in 0..ctx.cone.n_rays() {
                for p in -p_max..=p_max {
                    degrees.push(ctx.cone.symbolic_degree(q, j, p));
                }
            }
        }
        degrees.extend(crate::t1::pairing_box_degrees(&ctx.cone, q_max));
        degrees.sort();
        degrees.dedup();
        println!("{}", T1_TSV_HEADER);
        for r in &degrees {
            let label = classify_degree(&ctx, r)?.label;
            for i in 1..=3usize {
                let dim = ctx.t1_dim(r, i)?;
                if dim > 0 {
                    println!("{}", crate::report::t1_tsv_row(r, i, dim, &label));
                }
            }
        }
        return Ok(());
    }
    let degree = resolve_degree(&ctx, &a.degree, &a.degree_sym)?
        .ok_or_else(|| Error::input("t1 needs --degree, --degree-sym or --scan"))?;
    let label = classify_degree(&ctx, &degree)?.label;
    println!("{}", T1_TSV_HEADER);
    let indices: Vec<usize> = match a.hodge {
        Some(i) if (1..=5).contains(&i) => vec![i],
        Some(i) => {
            return Err(Error::input(format!("Hodge index {} out of range 1..=5", i)))
        }
        None => vec![1, 2, 3],
    };
    for i in indices {
        println!(
            "{}",
            crate::report::t1_tsv_row(&degree, i, ctx.t1_dim(&degree, i)?, &label)
        );
    }
    Ok(())
}

fn cmd_classify(a: ClassifyArgs) -> Result<()> {
    let cone = load_cone(&a.cone)?;
    let ctx = T1Context::new(cone);
    let report = classify(&ctx)?;
    let checked = match &a.scan {
        Some(scan) => {
            let b = parse_csv_i64(scan, 2, "--scan")?;
            let mismatches = crosscheck(&ctx, b[0], b[1])?;
            Some((b[0], b[1], mismatches))
        }
        None => None,
    };
    match a.format {
        Format::Tsv => {
            print!("{}", classify_tsv(&report, &ctx.cone));
        }
        Format::Json => {
            let mut json = serde_json::to_value(classify_json(
                &report,
                checked.as_ref().map(|(q, p, m)| (*q, *p, m.as_slice())),
            ))?;
            if a.hh {
                let hh = hh_assembly(&report);
                json["hh2"] = serde_json::json!({
                    "families": hh.hh2_families.len(),
                    "sporadic": hh.hh2_sporadic.iter().map(|(d, dim, labels)| {
                        serde_json::json!({"degree": d.coords_i64(), "dim": dim, "labels": labels})
                    }).collect::<Vec<_>>(),
                    "placeholders": hh.hh2_placeholders,
                });
                json["hh3"] = serde_json::json!({
                    "families": hh.hh3_families.len(),
                    "sporadic": hh.hh3_sporadic.iter().map(|(d, dim, labels)| {
                        serde_json::json!({"degree": d.coords_i64(), "dim": dim, "labels": labels})
                    }).collect::<Vec<_>>(),
                    "placeholders": hh.hh3_placeholders,
                });
            }
            println!("{}", serde_json::to_string_pretty(&json)?);
        }
    }
    // A crosscheck mismatch is an internal invariant violation.
    if let Some((_, _, m)) = &checked {
        if !m.is_empty() {
            return Err(Error::Invariant(format!(
                "classifier disagrees with the evaluator at {} degree/Hodge pairs",
                m.len()
            )));
        }
    }
    Ok(())
}

fn cmd_surface(a: SurfaceArgs) -> Result<()> {
    let window = a.window.unwrap_or_else(default_window);
    match a.report {
        SurfaceReportKind::Dims => {
            let table = surface_t1_dims(a.n, window)?;
            match a.format {
                Format::Tsv => {
                    println!("degree_x\tdegree_y\tdim_weight1\tdim_weight2");
                    for (r, (d1, d2)) in &table {
                        let c = r.coords_i64();
                        println!("{}\t{}\t{}\t{}", c[0], c[1], d1, d2);
                    }
                }
                Format::Json => {
                    let rows: Vec<_> = table
                        .iter()
                        .map(|(r, (d1, d2))| {
                            serde_json::json!({"degree": r.coords_i64(), "dims": [d1, d2]})
                        })
                        .collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&serde_json::json!({
                            "schema": crate::report::SCHEMA_VERSION,
                            "n": a.n,
                            "window": window,
                            "jacobian_ring_dim": jacobian_ring_dim(a.n).0,
                            "table": rows,
                        }))?
                    );
                }
            }
        }
        SurfaceReportKind::E1 => {
            let page = e1_page(a.n, 6, 6);
            let rows: Vec<_> = page
                .iter()
                .map(|e| {
                    let status = match &e.status {
                        EntryStatus::Dim(d) => format!("dim {}", d),
                        EntryStatus::Module => "module".to_string(),
                        EntryStatus::Zero => "0".to_string(),
                        EntryStatus::Unknown => "unknown".to_string(),
                    };
                    serde_json::json!({
                        "j": e.j, "k": e.k,
                        "group": format!("H^{}_({})", e.cohomology_degree, e.j),
                        "status": status,
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "schema": crate::report::SCHEMA_VERSION,
                    "n": a.n,
                    "entries": rows,
                }))?
            );
        }
        SurfaceReportKind::Poisson => {
            let kind = match a.mu_p {
                MupArg::Pig => MupKind::PiG,
                MupArg::Zero => MupKind::Zero,
            };
            let r = poisson_cohomology(a.n, kind, window)?;
            let per = |v: &Vec<(LatticeVector, usize)>| {
                v.iter()
                    .map(|(d, k)| serde_json::json!({"degree": d.coords_i64(), "dim": k}))
                    .collect::<Vec<_>>()
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "schema": crate::report::SCHEMA_VERSION,
                    "n": r.n,
                    "window": r.window_bound,
                    "h0_per_degree": per(&r.h0_per_degree),
                    "coker_per_degree": per(&r.coker_per_degree),
                    "h1_total": r.h1_total,
                    "h2_total": r.h2_total,
                    "window_stable": r.window_stable,
                    "notes": r.notes,
                }))?
            );
            if !r.window_stable {
                return Err(Error::Invariant(
                    "Poisson cohomology tables are not window-stable".into(),
                ));
            }
        }
    }
    Ok(())
}

fn cmd_check(a: CheckArgs) -> Result<()> {
    let _ring = crate::dgla::ArtinRing::parse(&a.artin)?;
    let report = match a.suite {
        SuiteKind::PalLemma => {
            crate::suites::pal_lemma_suite(a.seed, a.trials.unwrap_or(100), 4)?
        }
        SuiteKind::McPoisson => crate::suites::mc_poisson_suite(a.seed, a.trials.unwrap_or(200))?,
        SuiteKind::Gauge => crate::suites::gauge_suite(a.seed, a.trials.unwrap_or(50), 3)?,
        SuiteKind::HodgeProjectors => {
            crate::suites::hodge_projector_suite(a.seed, a.trials.unwrap_or(200), 6)?
        }
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    if report.passed {
        Ok(())
    } else {
        Err(Error::Invariant(format!(
            "suite {} failed {} checks",
            report.suite,
            report.failures.len()
        )))
    }
}
