use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use bohr_kit::radii::{sharp_radius, TheoremId, TheoremParams};
use bohr_kit::verify::{
    check_holds, empirical_radius, lemma_suite, sharpness_witness, Verdict, VerifyConfig,
};
use bohr_kit::FunctionalKind;

#[derive(Parser)]
#[command(
    name = "bohr-kit",
    version,
    about = "Sharp Bohr-type radii: closed forms, inequality verification, witness search, sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form sharp radius of a theorem instance
    Radius {
        #[command(flatten)]
        theorem: TheoremArgs,
    },
    /// Supremum-over-a verdict for a theorem at a fixed radius
    Verify {
        #[command(flatten)]
        theorem: TheoremArgs,
        /// Radius at which to test the inequality
        #[arg(long)]
        r: f64,
        /// Functional side to check: majorant or extremal
        #[arg(long, default_value = "majorant")]
        kind: String,
        #[command(flatten)]
        tols: TolArgs,
    },
    /// Recover the sharp radius empirically by bisecting the violation predicate
    Empirical {
        #[command(flatten)]
        theorem: TheoremArgs,
        /// Bisection width for the recovered radius
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        tols: TolArgs,
    },
    /// Search for a sharpness witness at a fixed radius
    Witness {
        #[command(flatten)]
        theorem: TheoremArgs,
        #[arg(long)]
        r: f64,
        #[command(flatten)]
        tols: TolArgs,
    },
    /// Run the lemma property suites
    Lemmas {
        /// Grid points per axis (at least 16)
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Grid sweep of radii, one CSV row or JSON object per cell
    Sweep {
        #[command(flatten)]
        theorem: TheoremArgs,
        /// Axis spec, repeatable: name=start:stop:step
        #[arg(long = "axis")]
        axes: Vec<String>,
        /// Output format: csv or json
        #[arg(long = "out", default_value = "csv")]
        out: String,
        /// Also recover each radius empirically
        #[arg(long)]
        empirical: bool,
        /// Bisection width for --empirical
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Worker threads (default: BOHR_KIT_JOBS or 1)
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        tols: TolArgs,
    },
}

#[derive(Args)]
struct TheoremArgs {
    /// Theorem selector: 31, 32, 33, 34, or 12
    #[arg(long)]
    theorem: String,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Args)]
struct TolArgs {
    /// Absolute tolerance for the scalar solvers
    #[arg(long = "abs-tol")]
    abs_tol: Option<f64>,
    /// Grid points for supremum searches
    #[arg(long = "grid")]
    grid: Option<usize>,
    /// Excess above 1 that counts as a violation
    #[arg(long = "violation-eps")]
    violation_eps: Option<f64>,
}

impl TolArgs {
    fn config(&self) -> VerifyConfig<f64> {
        let mut cfg = VerifyConfig::default();
        if let Some(tol) = self.abs_tol {
            cfg.tol.abs_tol = tol;
        }
        if let Some(grid) = self.grid {
            cfg.tol.grid_points = grid;
        }
        if let Some(eps) = self.violation_eps {
            cfg.violation_eps = eps;
        }
        cfg
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn parse_theorem(args: &TheoremArgs) -> Result<(TheoremId, TheoremParams<f64>), String> {
    let id = TheoremId::from_tag(&args.theorem)
        .ok_or_else(|| format!("unknown theorem {:?}; expected 31, 32, 33, 34 or 12", args.theorem))?;
    let need = |opt: Option<f64>, name: &str| {
        opt.ok_or_else(|| format!("theorem {} requires --{name}", id.tag()))
    };
    let params = match id {
        TheoremId::T31 | TheoremId::T32 => TheoremParams::PowerWeight {
            p: need(args.p, "p")?,
            lambda: need(args.lambda, "lambda")?,
        },
        TheoremId::T33 => TheoremParams::ConvexPower {
            t: need(args.t, "t")?,
            p: need(args.p, "p")?,
        },
        TheoremId::T34 => TheoremParams::Convex { t: need(args.t, "t")? },
        TheoremId::T12 => TheoremParams::Lacunary {
            n: args.n.ok_or_else(|| "theorem 12 requires --n".to_string())?,
        },
    };
    params.validate(id).map_err(|e| e.to_string())?;
    Ok((id, params))
}

fn params_json(params: &TheoremParams<f64>) -> serde_json::Value {
    match params {
        TheoremParams::PowerWeight { p, lambda } => json!({"p": p, "lambda": lambda}),
        TheoremParams::ConvexPower { t, p } => json!({"t": t, "p": p}),
        TheoremParams::Convex { t } => json!({"t": t}),
        TheoremParams::Lacunary { n } => json!({"n": n}),
    }
}

fn kind_from(label: &str) -> Result<FunctionalKind, String> {
    match label {
        "majorant" => Ok(FunctionalKind::Majorant),
        "extremal" => Ok(FunctionalKind::Extremal),
        other => Err(format!("unknown kind {other:?}; expected majorant or extremal")),
    }
}

/// 17-significant-digit rendering for stable CSV output.
fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Radius { theorem } => cmd_radius(&theorem),
        Command::Verify { theorem, r, kind, tols } => cmd_verify(&theorem, r, &kind, &tols),
        Command::Empirical { theorem, tol, tols } => cmd_empirical(&theorem, tol, &tols),
        Command::Witness { theorem, r, tols } => cmd_witness(&theorem, r, &tols),
        Command::Lemmas { grid } => cmd_lemmas(grid),
        Command::Sweep { theorem, axes, out, empirical, tol, jobs, tols } => {
            cmd_sweep(&theorem, &axes, &out, empirical, tol, jobs, &tols)
        }
    }
}

fn cmd_radius(theorem: &TheoremArgs) -> ExitCode {
    let (id, params) = match parse_theorem(theorem) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let result = match sharp_radius(id, &params) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let record = json!({
        "record": "radius",
        "theorem": id.tag(),
        "params": params_json(&params),
        "radius": result.value,
        "branch": result.branch.label(),
        "region": result.region.label(),
        "residual": result.residual,
    });
    println!("{record}");
    ExitCode::SUCCESS
}

fn cmd_verify(theorem: &TheoremArgs, r: f64, kind: &str, tols: &TolArgs) -> ExitCode {
    let (id, params) = match parse_theorem(theorem) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let kind = match kind_from(kind) {
        Ok(k) => k,
        Err(e) => return usage_error(e),
    };
    let report = match check_holds(id, &params, r, kind, &tols.config()) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let record = json!({
        "record": "verify",
        "theorem": id.tag(),
        "params": params_json(&params),
        "r": r,
        "kind": kind.label(),
        "sup_value": report.sup_value,
        "argmax_a": report.argmax_a,
        "verdict": report.verdict.label(),
        "margin": report.margin,
    });
    println!("{record}");
    match report.verdict {
        Verdict::Holds | Verdict::Exploratory => ExitCode::SUCCESS,
        Verdict::Violated => ExitCode::from(1),
    }
}

fn cmd_empirical(theorem: &TheoremArgs, tol: f64, tols: &TolArgs) -> ExitCode {
    let (id, params) = match parse_theorem(theorem) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    if !(tol > 0.0) {
        return usage_error("--tol must be positive");
    }
    let empirical = match empirical_radius(id, &params, tol, &tols.config()) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let closed = match sharp_radius(id, &params) {
        Ok(v) => v.value,
        Err(e) => return usage_error(e),
    };
    let record = json!({
        "record": "empirical",
        "theorem": id.tag(),
        "params": params_json(&params),
        "tol": tol,
        "empirical_radius": empirical,
        "closed_form": closed,
        "difference": empirical - closed,
    });
    println!("{record}");
    ExitCode::SUCCESS
}

fn cmd_witness(theorem: &TheoremArgs, r: f64, tols: &TolArgs) -> ExitCode {
    let (id, params) = match parse_theorem(theorem) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let witness = match sharpness_witness(id, &params, r, &tols.config()) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let record = json!({
        "record": "witness",
        "theorem": id.tag(),
        "params": params_json(&params),
        "r": r,
        "found": witness.found,
        "a": witness.a,
        "excess": witness.excess,
    });
    println!("{record}");
    ExitCode::SUCCESS
}

fn cmd_lemmas(grid: usize) -> ExitCode {
    if grid < 16 {
        return usage_error("--grid must be at least 16");
    }
    let report = lemma_suite::<f64>(grid);
    for sub in &report.sub_suites {
        if sub.passed() {
            println!("PASS {} ({} checks)", sub.name, sub.checks);
        } else {
            println!(
                "FAIL {} ({} of {} checks failed; first: {})",
                sub.name,
                sub.failures,
                sub.checks,
                sub.first_failure.as_deref().unwrap_or("n/a")
            );
        }
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

struct Axis {
    name: String,
    values: Vec<f64>,
}

fn parse_axis(spec: &str) -> Result<Axis, String> {
    let (name, range) = spec
        .split_once('=')
        .ok_or_else(|| format!("bad axis {spec:?}; expected name=start:stop:step"))?;
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("bad axis range {range:?}; expected start:stop:step"));
    }
    let parse = |s: &str| {
        s.parse::<f64>()
            .map_err(|e| format!("bad axis number {s:?}: {e}"))
    };
    let (start, stop, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
    if !(step > 0.0) || start > stop {
        return Err(format!("axis {spec:?} needs step > 0 and start <= stop"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    let values = (0..count).map(|i| start + step * i as f64).collect();
    Ok(Axis { name: name.to_string(), values })
}

fn axis_names_for(id: TheoremId) -> &'static [&'static str] {
    match id {
        TheoremId::T31 | TheoremId::T32 => &["p", "lambda"],
        TheoremId::T33 => &["t", "p"],
        TheoremId::T34 => &["t"],
        TheoremId::T12 => &["n"],
    }
}

fn cell_params(
    id: TheoremId,
    base: &TheoremArgs,
    axes: &[Axis],
    cell: &[usize],
) -> Result<TheoremParams<f64>, String> {
    let lookup = |name: &str, flag: Option<f64>| -> Result<f64, String> {
        for (axis, &idx) in axes.iter().zip(cell) {
            if axis.name == name {
                return Ok(axis.values[idx]);
            }
        }
        flag.ok_or_else(|| format!("theorem {} requires --{name} or an axis for it", id.tag()))
    };
    let params = match id {
        TheoremId::T31 | TheoremId::T32 => TheoremParams::PowerWeight {
            p: lookup("p", base.p)?,
            lambda: lookup("lambda", base.lambda)?,
        },
        TheoremId::T33 => TheoremParams::ConvexPower {
            t: lookup("t", base.t)?,
            p: lookup("p", base.p)?,
        },
        TheoremId::T34 => TheoremParams::Convex { t: lookup("t", base.t)? },
        TheoremId::T12 => {
            let n = lookup("n", base.n.map(f64::from))?;
            TheoremParams::Lacunary { n: n.round() as u32 }
        }
    };
    params.validate(id).map_err(|e| e.to_string())?;
    Ok(params)
}

fn cmd_sweep(
    theorem: &TheoremArgs,
    axis_specs: &[String],
    out: &str,
    with_empirical: bool,
    emp_tol: f64,
    jobs: Option<usize>,
    tols: &TolArgs,
) -> ExitCode {
    let id = match TheoremId::from_tag(&theorem.theorem) {
        Some(id) => id,
        None => return usage_error(format!("unknown theorem {:?}", theorem.theorem)),
    };
    if axis_specs.is_empty() {
        return usage_error("sweep requires at least one --axis");
    }
    if out != "csv" && out != "json" {
        return usage_error(format!("unknown output format {out:?}; expected csv or json"));
    }
    let mut axes = Vec::new();
    for spec in axis_specs {
        match parse_axis(spec) {
            Ok(axis) => {
                if !axis_names_for(id).contains(&axis.name.as_str()) {
                    return usage_error(format!(
                        "axis {:?} is not a parameter of theorem {}",
                        axis.name,
                        id.tag()
                    ));
                }
                axes.push(axis);
            }
            Err(e) => return usage_error(e),
        }
    }

    // enumerate cells in row-major axis order
    let dims: Vec<usize> = axes.iter().map(|a| a.values.len()).collect();
    let total: usize = dims.iter().product();
    let mut cells: Vec<Vec<usize>> = Vec::with_capacity(total);
    for mut flat in 0..total {
        let mut idx = vec![0; dims.len()];
        for d in (0..dims.len()).rev() {
            idx[d] = flat % dims[d];
            flat /= dims[d];
        }
        cells.push(idx);
    }

    // all parameter cells must be valid before any output is emitted
    let mut cell_p = Vec::with_capacity(total);
    for cell in &cells {
        match cell_params(id, theorem, &axes, cell) {
            Ok(p) => cell_p.push(p),
            Err(e) => return usage_error(e),
        }
    }

    let jobs = jobs
        .or_else(|| std::env::var("BOHR_KIT_JOBS").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(1)
        .max(1);
    let cfg = tols.config();

    let render = |params: &TheoremParams<f64>, cell: &[usize]| -> String {
        let result = sharp_radius(id, params).expect("cell pre-validated");
        let empirical = if with_empirical {
            empirical_radius(id, params, emp_tol, &cfg).ok()
        } else {
            None
        };
        match out {
            "csv" => {
                let mut fields = vec![id.tag().to_string()];
                for (axis, &i) in axes.iter().zip(cell) {
                    fields.push(g17(axis.values[i]));
                }
                fields.push(g17(result.value));
                fields.push(result.branch.label().to_string());
                fields.push(result.region.label().to_string());
                fields.push(g17(result.residual));
                if with_empirical {
                    fields.push(empirical.map(g17).unwrap_or_default());
                }
                fields.join(",")
            }
            _ => {
                let mut record = json!({
                    "record": "sweep",
                    "theorem": id.tag(),
                    "params": params_json(params),
                    "radius": result.value,
                    "branch": result.branch.label(),
                    "region": result.region.label(),
                    "residual": result.residual,
                });
                if with_empirical {
                    record["empirical_radius"] = json!(empirical);
                }
                record.to_string()
            }
        }
    };

    let rows: Vec<String> = if jobs == 1 {
        cell_p.iter().zip(&cells).map(|(p, c)| render(p, c)).collect()
    } else {
        let mut rows = vec![String::new(); total];
        let chunks: Vec<(usize, &mut [String])> = {
            let chunk = total.div_ceil(jobs);
            rows.chunks_mut(chunk).enumerate().map(|(i, c)| (i * chunk, c)).collect()
        };
        std::thread::scope(|scope| {
            for (offset, slot) in chunks {
                let cell_p = &cell_p;
                let cells = &cells;
                let render = &render;
                scope.spawn(move || {
                    for (i, row) in slot.iter_mut().enumerate() {
                        *row = render(&cell_p[offset + i], &cells[offset + i]);
                    }
                });
            }
        });
        rows
    };

    let stdout = std::io::stdout();
    let mut out_lock = stdout.lock();
    if out == "csv" {
        let mut header = vec!["theorem".to_string()];
        header.extend(axes.iter().map(|a| a.name.clone()));
        header.extend(["radius", "branch", "region", "residual"].map(String::from));
        if with_empirical {
            header.push("empirical".into());
        }
        let _ = writeln!(out_lock, "{}", header.join(","));
    }
    for row in rows {
        let _ = writeln!(out_lock, "{row}");
        let _ = out_lock.flush();
    }
    ExitCode::SUCCESS
}
