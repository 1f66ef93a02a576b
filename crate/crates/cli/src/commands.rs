use crate::{
    CliError, DataArgs, Format, RunConfig, EXIT_FREDHOLM_ONLY, EXIT_HYPOTHESIS, EXIT_INTERNAL, EXIT_IO, EXIT_NOT_FREDHOLM,
    EXIT_OK, EXIT_PARSE,
};
use goursat_core::battery::{run_battery, SCHEMA_VERSION};
use goursat_core::borel_lab::{summability_verdict, BorelError};
use goursat_core::char_roots::{root_groups, slopes_consistency, CharRootsError, RootGroupView};
use goursat_core::expr_parser::{format_operator, format_series, parse_operator, parse_series, Operator};
use goursat_core::goursat_solver::{solve_truncated, GoursatProblem, SolverError};
use goursat_core::newton_polygon::{build_polygon, PolygonError, SideKind};
use goursat_core::par::Execution;
use goursat_core::series_core::{BiSeries, GoursatData, SeriesError};
use goursat_core::solvability::{classify, SolvabilityError, VerdictKind};
use num_rational::BigRational;
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::new(EXIT_IO, format!("cannot read {}: {e}", path.display())))
}

/// Write through a sibling temporary file and rename, so readers never see a partial report.
fn write_atomic(path: &Path, body: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::new(EXIT_IO, format!("cannot write {}: {e}", path.display()));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, body).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn emit(cfg: &RunConfig, body: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(p) => write_atomic(p, body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn to_json(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn load_operator(arg: &str) -> Result<Operator, CliError> {
    let text = match arg.strip_prefix('@') {
        Some(path) => read_file(Path::new(path))?,
        None => arg.to_string(),
    };
    parse_operator(text.trim()).map_err(|e| CliError::new(EXIT_PARSE, format!("operator: {e}")))
}

fn load_series(path: &Path) -> Result<BiSeries, CliError> {
    parse_series(&read_file(path)?).map_err(|e| CliError::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn parse_pair(s: &str, what: &str) -> Result<(u32, u32), CliError> {
    let bad = || CliError::new(EXIT_PARSE, format!("--{what} expects 'a,b' with non-negative integers, got '{s}'"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn series_err(e: SeriesError) -> CliError {
    CliError::new(EXIT_HYPOTHESIS, e.to_string())
}

/// φ files contribute their k = 0 row, ψ files their β = 0 column.
fn load_data(d: &DataArgs) -> Result<(GoursatData, Option<BiSeries>), CliError> {
    let phis = d.phi.iter().map(|p| load_series(p).map(|s| s.z_section(0))).collect::<Result<Vec<_>, _>>()?;
    let psis = d.psi.iter().map(|p| load_series(p).map(|s| s.t_section(0))).collect::<Result<Vec<_>, _>>()?;
    let rhs = d.rhs.as_deref().map(load_series).transpose()?;
    if phis.is_empty() && psis.is_empty() {
        return Err(CliError::new(EXIT_HYPOTHESIS, "no Goursat data: pass --phi and/or --psi"));
    }
    Ok((GoursatData::new(phis, psis).map_err(series_err)?, rhs))
}

fn artifact_dir(cfg: &RunConfig) -> Result<PathBuf, CliError> {
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| CliError::new(EXIT_IO, format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

fn polygon_json(op: &Operator) -> Value {
    let np = build_polygon(op);
    let sides: Vec<Value> = np
        .sides
        .iter()
        .map(|s| {
            let (kind, slope, idx) = match &s.kind {
                SideKind::Horizontal => ("horizontal", Some("0".to_string()), None),
                SideKind::Finite { slope, s } => ("finite", Some(slope.to_string()), Some(s.to_string())),
                SideKind::Vertical => ("vertical", None, Some("0".to_string())),
            };
            json!({
                "kind": kind,
                "slope": slope,
                "s": idx,
                "from": [s.from.x, s.from.y],
                "to": [s.to.x, s.to.y],
                "terms": s.contributing,
            })
        })
        .collect();
    json!({
        "vertices": np.vertices.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
        "sides": sides,
        "positiveSlopes": np.positive_slopes().iter().map(|k| k.to_string()).collect::<Vec<_>>(),
    })
}

fn roots_err(e: CharRootsError) -> CliError {
    match e {
        CharRootsError::NoTimeDerivative => CliError::new(EXIT_HYPOTHESIS, e.to_string()),
        e => CliError::new(EXIT_INTERNAL, e.to_string()),
    }
}

pub fn analyze(cfg: &RunConfig, operator: &str) -> Result<u8, CliError> {
    let op = load_operator(operator)?;
    let groups = root_groups(&op, cfg.precision_bits).map_err(roots_err)?;
    let consistency = slopes_consistency(&op, cfg.precision_bits).map_err(roots_err)?;
    let polygon = polygon_json(&op);
    let views: Vec<RootGroupView> = groups.iter().map(RootGroupView::from).collect();
    let report = json!({
        "schemaVersion": SCHEMA_VERSION,
        "command": "analyze",
        "operator": format_operator(&op),
        "precisionBits": cfg.precision_bits,
        "polygon": polygon,
        "rootGroups": views,
        "consistency": consistency,
    });
    let body = match cfg.format {
        Format::Json => to_json(&report),
        Format::Text => {
            let slopes = report["polygon"]["positiveSlopes"].as_array().unwrap();
            let slopes: Vec<&str> = slopes.iter().map(|v| v.as_str().unwrap()).collect();
            let mut t = format!("operator: {}\npositive slopes: [{}]\n", report["operator"].as_str().unwrap(), slopes.join(", "));
            for g in &views {
                let ls: Vec<String> = g.leaders.iter().map(|l| format!("{:+.6}{:+.6}i (x{})", l.re, l.im, l.mult)).collect();
                t.push_str(&format!("root group q = {}, kappa = {}: {}\n", g.q, g.kappa, ls.join(", ")));
            }
            t.push_str(&format!("slopes consistent: {}\n", if consistency.all_ok { "yes" } else { "no" }));
            t
        }
    };
    emit(cfg, &body)?;
    Ok(EXIT_OK)
}

fn solvability_err(e: SolvabilityError) -> CliError {
    match e {
        SolvabilityError::Polygon(p @ PolygonError::NoContact { .. })
        | SolvabilityError::Polygon(p @ PolygonError::InvalidIndex(_)) => CliError::new(EXIT_HYPOTHESIS, p.to_string()),
        SolvabilityError::Roots(r) => roots_err(r),
        e => CliError::new(EXIT_INTERNAL, e.to_string()),
    }
}

pub fn check(cfg: &RunConfig, operator: &str, s: &str, j: u32, alpha: u32) -> Result<u8, CliError> {
    let op = load_operator(operator)?;
    let s_val: BigRational =
        s.trim().parse().map_err(|_| CliError::new(EXIT_PARSE, format!("--s expects a rational, got '{s}'")))?;
    let v = classify(&op, &s_val, j, alpha, cfg.n_max, cfg.precision_bits, Execution::default()).map_err(solvability_err)?;
    let code = if v.bijective_so_far() {
        EXIT_OK
    } else if v.kind == VerdictKind::NotFredholm {
        EXIT_NOT_FREDHOLM
    } else {
        EXIT_FREDHOLM_ONLY
    };
    let report = json!({
        "schemaVersion": SCHEMA_VERSION,
        "command": "check",
        "operator": format_operator(&op),
        "s": s_val.to_string(),
        "j": j,
        "alpha": alpha,
        "nMax": cfg.n_max,
        "precisionBits": cfg.precision_bits,
        "verdict": v,
        "bijectiveSoFar": v.bijective_so_far(),
        "exitCode": code,
    });
    let body = match cfg.format {
        Format::Json => to_json(&report),
        Format::Text => {
            let w = match &v.w_interval {
                Some(w) => format!("({}, {})", w.lo, w.hi),
                None => "none".into(),
            };
            let mut t = format!(
                "verdict: {:?}\nw-interval: {w}\nspectral witness: {}\nbijective so far: {}\n",
                v.kind,
                v.spectral_w.map_or("none".to_string(), |x| x.to_string()),
                if v.bijective_so_far() { "yes" } else { "no" }
            );
            for n in &v.notes {
                t.push_str(&format!("note: {n}\n"));
            }
            t
        }
    };
    emit(cfg, &body)?;
    Ok(code)
}

fn solver_err(e: SolverError) -> CliError {
    match e {
        SolverError::WindowNotDetermined { .. } | SolverError::InconsistentSystem { .. } => {
            CliError::new(EXIT_NOT_FREDHOLM, e.to_string())
        }
        SolverError::NotNormalForm(_) | SolverError::DataMismatch { .. } | SolverError::Series(_) => {
            CliError::new(EXIT_HYPOTHESIS, e.to_string())
        }
        e => CliError::new(EXIT_INTERNAL, e.to_string()),
    }
}

pub fn solve(cfg: &RunConfig, operator: &str, data: &DataArgs, window: &str, trunc: &str) -> Result<u8, CliError> {
    let op = load_operator(operator)?;
    let (wt, wz) = parse_pair(window, "window")?;
    let (tt, tz) = parse_pair(trunc, "trunc")?;
    let (gd, rhs) = load_data(data)?;
    let f = rhs.unwrap_or_else(|| BiSeries::zero(tt, tz));
    let p = GoursatProblem::new(op, f, gd);
    let (u, rep) = solve_truncated(&p, tt, tz, wt, wz).map_err(solver_err)?;
    let dir = artifact_dir(cfg)?;
    write_atomic(&dir.join("solution.series"), &format_series(&u))?;
    let report = json!({
        "schemaVersion": SCHEMA_VERSION,
        "command": "solve",
        "operator": format_operator(&p.op),
        "j": p.j(),
        "alpha": p.alpha(),
        "report": rep,
        "artifacts": ["solution.series", "solve_report.json"],
    });
    let json_body = to_json(&report);
    write_atomic(&dir.join("solve_report.json"), &json_body)?;
    match cfg.format {
        Format::Json => print!("{json_body}"),
        Format::Text => println!(
            "window ({wt},{wz}) at truncation ({tt},{tz}): uniquely determined = {}, residual exactly zero = {}",
            rep.uniquely_determined, rep.residual_exact_zero
        ),
    }
    Ok(EXIT_OK)
}

fn borel_err(e: BorelError) -> CliError {
    match e {
        BorelError::HypothesisViolated(_) | BorelError::Precondition(_) | BorelError::TooShort { .. } | BorelError::Series(_) => {
            CliError::new(EXIT_HYPOTHESIS, e.to_string())
        }
        e => CliError::new(EXIT_INTERNAL, e.to_string()),
    }
}

pub fn borel(cfg: &RunConfig, operator: &str, data: &DataArgs, direction: f64, trunc_t: u32) -> Result<u8, CliError> {
    if !direction.is_finite() {
        return Err(CliError::new(EXIT_PARSE, "--direction must be finite"));
    }
    let op = load_operator(operator)?;
    let (gd, rhs) = load_data(data)?;
    let tz = gd.phis().iter().chain(gd.psis()).map(|s| s.trunc()).min().unwrap_or(0);
    let f = rhs.unwrap_or_else(|| BiSeries::zero(trunc_t, tz));
    let p = GoursatProblem::new(op, f, gd);
    let r = summability_verdict(&p, direction, cfg.precision_bits).map_err(borel_err)?;
    let dir = artifact_dir(cfg)?;
    let csv = r.t_profile.as_ref().map_or_else(|| "r,re,im,method\n".to_string(), |pr| pr.to_csv());
    write_atomic(&dir.join("borel_profile.csv"), &csv)?;
    let report = json!({
        "schemaVersion": SCHEMA_VERSION,
        "command": "borel",
        "operator": format_operator(&p.op),
        "verdictLabel": r.verdict.label(),
        "summability": r,
        "artifacts": ["borel_profile.csv", "summability.json"],
    });
    let json_body = to_json(&report);
    write_atomic(&dir.join("summability.json"), &json_body)?;
    match cfg.format {
        Format::Json => print!("{json_body}"),
        Format::Text => println!("direction {direction}: {}", r.verdict.label()),
    }
    Ok(EXIT_OK)
}

pub fn verify(cfg: &RunConfig) -> Result<u8, CliError> {
    let report = run_battery(cfg.seed, cfg.precision_bits, Execution::default());
    let body = match cfg.format {
        Format::Json => to_json(&report),
        Format::Text => {
            let mut t: String = report.checks.iter().map(|c| c.line() + "\n").collect();
            t.push_str(if report.all_passed { "all checks passed\n" } else { "some checks FAILED\n" });
            t
        }
    };
    emit(cfg, &body)?;
    Ok(if report.all_passed { EXIT_OK } else { EXIT_INTERNAL })
}
