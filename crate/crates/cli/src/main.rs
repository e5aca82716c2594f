mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use spiv_core::explorer::{
    quartic_residual_check, scan_grid, search_btob, state_from_uv, trace_cc_region, Window,
    QUARTIC_WORD,
};
use spiv_core::integrator::{integrate, solve, IntegratorOptions, Side, Trajectory};
use spiv_core::params::{ExactParams, ParameterTriple, SignCase, SystemState};
use spiv_core::rational::{
    extract_identities, hermite_family, relation_vanishes, singularity_profile, verify_spiv,
    RationalTriple, SpivResidual,
};
use spiv_core::sequences::{
    enumerate_finite_at, forced_predecessors, forced_successors, unique_finite_sequence,
    validate_sequence, SymbolSequence, Validation,
};
use spiv_core::symmetry::{act_on_rational, reduce_to_positive, GroupWord};

#[derive(Parser)]
#[command(
    name = "spiv",
    version,
    about = "Real solutions of the symmetric Painleve IV system"
)]
#[command(args_override_self = true)]
struct Cli {
    /// key = value file supplying defaults for the subcommand's flags
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate one initial value through poles; trajectory CSV or events JSON
    Integrate(IntegrateArgs),
    /// Pole counts, endpoint classes and symbol sequence of one solution
    Classify(ClassifyArgs),
    /// Pole-count scan over a window of initial values at an anchor
    Scan(ScanArgs),
    /// Locate connecting orbits between B ends
    Btob(BtobArgs),
    /// Boundary of the pole-free C-to-C region
    Ccregion(CcArgs),
    /// Exact rational solutions, their relations and singularities
    Rational(RationalArgs),
    /// Admissible symbol sequences
    Sequences(SequencesArgs),
    /// Reduce parameters to the positive alcove, or run the alpha1 = 2 check
    Reduce(ReduceArgs),
}

#[derive(Args, Clone)]
struct Tolerances {
    /// Relative tolerance of the step controller
    #[arg(long, default_value_t = 1e-10, value_parser = positive)]
    rtol: f64,
    /// Absolute tolerance of the step controller
    #[arg(long, default_value_t = 1e-12, value_parser = positive)]
    atol: f64,
    /// Integrate to +-horizon before classifying the ends
    #[arg(long, default_value_t = 10.0, value_parser = positive)]
    horizon: f64,
    /// Stop a side after this many poles (counts as infinitely many)
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pole_cap: u64,
}

impl Tolerances {
    fn options(&self) -> IntegratorOptions {
        IntegratorOptions {
            rtol: self.rtol,
            atol: self.atol,
            horizon: self.horizon,
            pole_cap: self.pole_cap as usize,
            ..IntegratorOptions::default()
        }
    }
}

#[derive(Args)]
struct InitialValue {
    /// Parameters a1,a2,a3 (or a1,a2); fractions allowed
    #[arg(long, allow_hyphen_values = true, value_parser = parse_alpha)]
    alpha: ParameterTriple,
    /// Abscissa of the initial value
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    x0: f64,
    /// f1,f2,f3 at x0 (or f1,f2 with f3 = x0 - f1 - f2)
    #[arg(long, allow_hyphen_values = true, conflicts_with = "uv")]
    f0: Option<String>,
    /// Plane coordinates u,v at x0 instead of f0
    #[arg(long, allow_hyphen_values = true)]
    uv: Option<String>,
}

impl InitialValue {
    fn state(&self) -> Result<SystemState, String> {
        if let Some(s) = &self.f0 {
            let v = floats(s, "--f0")?;
            return match v.as_slice() {
                [a, b] => Ok(SystemState::new(self.x0, [*a, *b, self.x0 - a - b])),
                [a, b, c] => {
                    let st = SystemState::new(self.x0, [*a, *b, *c]);
                    if st.constraint_defect().abs() > 1e-9 * (1.0 + self.x0.abs()) {
                        return Err(format!("--f0: f1 + f2 + f3 must equal x0 = {}", self.x0));
                    }
                    Ok(st)
                }
                _ => Err("--f0: expected two or three values".into()),
            };
        }
        if let Some(s) = &self.uv {
            return match floats(s, "--uv")?.as_slice() {
                [u, v] => Ok(state_from_uv(self.x0, *u, *v)),
                _ => Err("--uv: expected u,v".into()),
            };
        }
        Err("one of --f0 or --uv is required".into())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TrajFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct IntegrateArgs {
    #[command(flatten)]
    init: InitialValue,
    /// One-sided target; without it both sides are integrated to the horizon
    #[arg(long, allow_hyphen_values = true)]
    to: Option<f64>,
    #[command(flatten)]
    tol: Tolerances,
    /// csv: x,f1,f2,f3,chart per accepted step; json: pole and zero events
    #[arg(long, value_enum, default_value = "csv")]
    format: TrajFormat,
    /// Output file (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    init: InitialValue,
    #[command(flatten)]
    tol: Tolerances,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Clone)]
struct Plane {
    /// Parameters a1,a2,a3 (or a1,a2)
    #[arg(long, allow_hyphen_values = true, value_parser = parse_alpha)]
    alpha: ParameterTriple,
    /// Abscissa of the plane of initial values
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    anchor: f64,
    /// u_min,u_max,v_min,v_max
    #[arg(long, default_value = "-3,3,-3,3", allow_hyphen_values = true, value_parser = parse_window)]
    window: Window,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanFormat {
    Csv,
    Ppm,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    plane: Plane,
    /// Grid points per axis: N or NU,NV (at least 2)
    #[arg(long, default_value = "201", value_parser = parse_res)]
    res: (usize, usize),
    #[command(flatten)]
    tol: Tolerances,
    #[arg(long, value_enum, default_value = "csv")]
    format: ScanFormat,
    /// Output file (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the raster to this file
    #[arg(long)]
    ppm: Option<PathBuf>,
}

#[derive(Args)]
struct BtobArgs {
    #[command(flatten)]
    plane: Plane,
    /// Coarse label grid used to seed the search
    #[arg(long, default_value_t = 21, value_parser = clap::value_parser!(u64).range(2..))]
    res: u64,
    /// Stop refining when the bracket perimeter is below this
    #[arg(long, default_value_t = 1e-8, value_parser = positive)]
    tol: f64,
    /// Half-width of the interval on which the result must stay near B
    #[arg(long, default_value_t = 5.0, value_parser = positive)]
    verify_horizon: f64,
    #[command(flatten)]
    integ: Tolerances,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CcArgs {
    #[command(flatten)]
    plane: Plane,
    /// Resolution of the scan that supplies the interior point
    #[arg(long, default_value_t = 41, value_parser = clap::value_parser!(u64).range(2..))]
    res: u64,
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(3..))]
    rays: u64,
    /// Bisection tolerance along each ray
    #[arg(long, default_value_t = 1e-6, value_parser = positive)]
    tol: f64,
    #[command(flatten)]
    integ: Tolerances,
    /// Boundary CSV (u,v); stdout if absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Base {
    Center,
    Vertex,
}

#[derive(Args)]
struct RationalArgs {
    /// Word in s (sigma) and t (tau), leftmost acting last
    #[arg(long, default_value = "")]
    word: String,
    /// Fundamental solution the word acts on
    #[arg(long, value_enum, default_value = "center")]
    base: Base,
    /// Use the alpha1 = 0 family member with this integer alpha2 instead
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["word", "base"])]
    hermite: Option<i64>,
    /// Print the polynomial relations the components satisfy
    #[arg(long)]
    identities: bool,
    /// Print the real poles and the symbol sequence
    #[arg(long)]
    profile: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SequencesArgs {
    /// Parameters; defaults to the representative of --case
    #[arg(long, allow_hyphen_values = true, value_parser = parse_alpha)]
    alpha: Option<ParameterTriple>,
    /// Sign case such as +++ or ++-
    #[arg(long, allow_hyphen_values = true, value_parser = parse_case)]
    case: Option<SignCase>,
    /// List admissible finite sequences
    #[arg(long)]
    finite: bool,
    /// Most interior poles in --finite
    #[arg(long, default_value_t = 6)]
    max: usize,
    /// Longest test word of the admissibility check
    #[arg(long, default_value_t = 1)]
    depth: usize,
    /// Extend a prefix such as "C A1" while the next symbol is forced
    #[arg(long)]
    forced: Option<String>,
    /// Grow the sequence to the left instead
    #[arg(long)]
    backward: bool,
    /// Symbols to add in --forced
    #[arg(long, default_value_t = 12)]
    count: usize,
    /// The unique finite sequence at --alpha
    #[arg(long)]
    unique: bool,
    /// Check a sequence against the transition tables
    #[arg(long)]
    validate: Option<String>,
}

#[derive(Args)]
struct ReduceArgs {
    /// Parameters; exact when written as decimals or fractions
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    /// Instead, build the alpha1 = 2 solution from the alpha1 = 0 family
    /// at --alpha and report the sPIV and quartic residuals
    #[arg(long)]
    quartic: bool,
    /// f2 at the left end of --interval for --quartic
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    c: f64,
    /// x_lo,x_hi for --quartic
    #[arg(long, default_value = "0.2,1.2", allow_hyphen_values = true)]
    interval: String,
    #[arg(long, default_value_t = 21)]
    points: usize,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn parse_alpha(s: &str) -> Result<ParameterTriple, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_case(s: &str) -> Result<SignCase, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// Comma-separated numbers; `n/d` fractions allowed.
fn floats(s: &str, flag: &str) -> Result<Vec<f64>, String> {
    let one = |t: &str| -> Option<f64> {
        match t.split_once('/') {
            Some((n, d)) => Some(n.trim().parse::<f64>().ok()? / d.trim().parse::<f64>().ok()?),
            None => t.parse().ok(),
        }
    };
    s.split(',')
        .map(|t| one(t.trim()).ok_or_else(|| format!("{flag}: cannot read {t:?}")))
        .collect()
}

fn parse_window(s: &str) -> Result<Window, String> {
    match floats(s, "--window")?.as_slice() {
        &[u_min, u_max, v_min, v_max] if u_min < u_max && v_min < v_max => Ok(Window {
            u_min,
            u_max,
            v_min,
            v_max,
        }),
        [_, _, _, _] => Err("window must have u_min < u_max and v_min < v_max".into()),
        _ => Err("expected u_min,u_max,v_min,v_max".into()),
    }
}

fn parse_res(s: &str) -> Result<(usize, usize), String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("cannot read {t:?}"))
        })
        .collect::<Result<_, _>>()?;
    let r = match v.as_slice() {
        [n] => (*n, *n),
        [a, b] => (*a, *b),
        _ => return Err("expected N or NU,NV".into()),
    };
    if r.0 < 2 || r.1 < 2 {
        return Err("resolution must be at least 2 per axis".into());
    }
    Ok(r)
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn compact(s: &SymbolSequence) -> String {
    s.to_string().replace(' ', "")
}

type Res = Result<(), Box<dyn std::error::Error>>;

fn summary(t: &Trajectory) -> serde_json::Value {
    let class = |c: Option<spiv_core::integrator::AsymptoticClass>| c.map(|c| c.to_string());
    json!({
        "sequence": compact(&t.sequence()),
        "n_minus": t.pole_count(Side::Left),
        "n_plus": t.pole_count(Side::Right),
        "left_class": class(t.left_class),
        "right_class": class(t.right_class),
        "events": t.events_json(),
    })
}

fn run_integrate(a: IntegrateArgs) -> Res {
    let f0 = a.init.state()?;
    let opts = a.tol.options();
    let t = match a.to {
        Some(x) => integrate(&f0, &a.init.alpha, x, &opts)?,
        None => solve(&f0, &a.init.alpha, &opts)?,
    };
    let mut w = sink(&a.out)?;
    match a.format {
        TrajFormat::Csv => t.write_csv(&mut w)?,
        TrajFormat::Json => writeln!(w, "{}", serde_json::to_string_pretty(&summary(&t))?)?,
    }
    w.flush()?;
    Ok(())
}

fn run_classify(a: ClassifyArgs) -> Res {
    let t = solve(&a.init.state()?, &a.init.alpha, &a.tol.options())?;
    let mut w = sink(&None)?;
    if a.json {
        let mut s = summary(&t);
        s.as_object_mut().map(|o| o.remove("events"));
        writeln!(w, "{}", serde_json::to_string_pretty(&s)?)?;
    } else {
        let class = |c: Option<spiv_core::integrator::AsymptoticClass>| {
            c.map_or("?".to_string(), |c| c.to_string())
        };
        writeln!(w, "sequence {}", compact(&t.sequence()))?;
        writeln!(w, "n_minus {}", t.pole_count(Side::Left))?;
        writeln!(w, "n_plus {}", t.pole_count(Side::Right))?;
        writeln!(w, "left {}", class(t.left_class))?;
        writeln!(w, "right {}", class(t.right_class))?;
        for (x, k) in t.poles() {
            writeln!(w, "pole {k} {x:.16e}")?;
        }
    }
    w.flush()?;
    Ok(())
}

fn run_scan(a: ScanArgs) -> Res {
    let p = &a.plane;
    let s = scan_grid(&p.alpha, p.anchor, p.window, a.res, &a.tol.options())?;
    let mut w = sink(&a.out)?;
    match a.format {
        ScanFormat::Csv => s.write_csv(&mut w)?,
        ScanFormat::Ppm => s.write_ppm(&mut w)?,
    }
    w.flush()?;
    if let Some(path) = &a.ppm {
        let mut f = BufWriter::new(File::create(path)?);
        s.write_ppm(&mut f)?;
        f.flush()?;
    }
    Ok(())
}

fn run_btob(a: BtobArgs) -> Res {
    let p = &a.plane;
    let found = search_btob(
        &p.alpha,
        p.anchor,
        p.window,
        a.res as usize,
        a.tol,
        a.verify_horizon,
        &a.integ.options(),
    )?;
    let mut w = sink(&None)?;
    if a.json {
        let v: Vec<_> = found
            .iter()
            .map(|b| {
                json!({
                    "left": format!("B{}", b.left), "right": format!("B{}", b.right),
                    "u": b.u, "v": b.v, "perimeter": b.perimeter, "iterations": b.iterations,
                    "zero_counts": b.zero_counts,
                    "table": b.table_changes.map(|c| c.to_string()),
                    "matches_table": b.matches_table(),
                })
            })
            .collect();
        writeln!(w, "{}", serde_json::to_string_pretty(&v)?)?;
    } else {
        writeln!(
            w,
            "left,right,u,v,perimeter,zeros_f1,zeros_f2,zeros_f3,table,matches_table"
        )?;
        for b in &found {
            let table = b.table_changes.map_or("-".to_string(), |c| c.to_string());
            writeln!(
                w,
                "B{},B{},{:.16e},{:.16e},{:.16e},{},{},{},\"{}\",{}",
                b.left,
                b.right,
                b.u,
                b.v,
                b.perimeter,
                b.zero_counts[0],
                b.zero_counts[1],
                b.zero_counts[2],
                table,
                b.matches_table()
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

fn run_cc(a: CcArgs) -> Res {
    let p = &a.plane;
    let opts = a.integ.options();
    let n = a.res as usize;
    let s = scan_grid(&p.alpha, p.anchor, p.window, (n, n), &opts)?;
    let b = trace_cc_region(&p.alpha, p.anchor, &s, a.rays as usize, a.tol, &opts)?;
    let mut w = sink(&a.out)?;
    b.write_csv(&mut w)?;
    w.flush()?;
    eprintln!("area {:.16e}", b.area);
    Ok(())
}

fn run_rational(a: RationalArgs) -> Res {
    let (r, w) = match a.hermite {
        Some(n) => (hermite_family(n), None),
        None => {
            let w: GroupWord = a.word.parse()?;
            let base = match a.base {
                Base::Center => RationalTriple::fundamental_center(),
                Base::Vertex => RationalTriple::fundamental_vertex(),
            };
            (act_on_rational(&w, &base)?, Some(w))
        }
    };
    let ok = verify_spiv(&r) == SpivResidual::Zero;
    let identities = match (&w, a.identities) {
        (Some(w), true) => extract_identities(w, &r)?,
        _ => Vec::new(),
    };
    let profile = if a.profile {
        Some(singularity_profile(&r)?)
    } else {
        None
    };
    let mut out = sink(&None)?;
    if a.json {
        let mut v = json!({ "triple": r.to_json(), "verified": ok });
        if a.identities {
            v["identities"] = identities
                .iter()
                .map(|i| json!({"relation": i.to_string(), "vanishes": relation_vanishes(i, &r)}))
                .collect();
        }
        if let Some(pr) = &profile {
            v["sequence"] = json!(compact(&pr.sequence));
            v["poles"] = pr
                .poles
                .iter()
                .map(|p| json!({"type": p.kind.to_string(), "x": p.location.approx()}))
                .collect();
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
    } else {
        write!(out, "{r}")?;
        writeln!(out, "spiv residual {}", if ok { "0" } else { "nonzero" })?;
        for (i, rel) in identities.iter().enumerate() {
            let z = if relation_vanishes(rel, &r) {
                "0"
            } else {
                "nonzero"
            };
            writeln!(out, "R{} = {rel}  -> {z}", i + 1)?;
        }
        if let Some(pr) = &profile {
            writeln!(out, "sequence {}", compact(&pr.sequence))?;
            for p in &pr.poles {
                writeln!(out, "pole {} {:.16e}", p.kind, p.location.approx())?;
            }
        }
    }
    out.flush()?;
    if !ok {
        return Err("constructed triple does not satisfy the system".into());
    }
    Ok(())
}

fn run_sequences(a: SequencesArgs) -> Res {
    let p = match (&a.alpha, a.case) {
        (Some(p), _) => p.clone(),
        (None, Some(c)) => c.representative(),
        (None, None) => {
            return Err(Box::new(Usage(
                "one of --alpha or --case is required".into(),
            )))
        }
    };
    let mut w = sink(&None)?;
    let mut did = false;
    if a.finite {
        for s in enumerate_finite_at(&p, a.max, a.depth)? {
            writeln!(w, "{}", compact(&s))?;
        }
        did = true;
    }
    if let Some(pre) = &a.forced {
        let pre = pre.trim();
        let text = match (a.backward, pre.starts_with("..."), pre.ends_with("...")) {
            (true, false, _) => format!("... {pre}"),
            (false, _, false) => format!("{pre} ..."),
            _ => pre.to_string(),
        };
        let s: SymbolSequence = text.parse()?;
        let out = if a.backward {
            forced_predecessors(&s, &p, a.count, a.depth)?
        } else {
            forced_successors(&s, &p, a.count, a.depth)?
        };
        writeln!(w, "{}", compact(&out))?;
        did = true;
    }
    if a.unique {
        writeln!(w, "{}", compact(&unique_finite_sequence(&p)?))?;
        did = true;
    }
    if let Some(s) = &a.validate {
        let s: SymbolSequence = s.parse()?;
        match validate_sequence(&s, &p)? {
            Validation::Valid => writeln!(w, "valid")?,
            Validation::Violation { position } => writeln!(w, "violation at pair {position}")?,
        }
        did = true;
    }
    w.flush()?;
    if !did {
        return Err(Box::new(Usage(
            "nothing to do: give --finite, --forced, --unique or --validate".into(),
        )));
    }
    Ok(())
}

fn run_reduce(a: ReduceArgs) -> Res {
    let mut w = sink(&None)?;
    if a.quartic {
        let p: ParameterTriple = parse_alpha(&a.alpha).map_err(Usage)?;
        let iv = floats(&a.interval, "--interval").map_err(Usage)?;
        let [lo, hi] = iv[..] else {
            return Err(Box::new(Usage("--interval: expected x_lo,x_hi".into())));
        };
        let word: GroupWord = QUARTIC_WORD.parse()?;
        let r = quartic_residual_check(
            &p,
            &word,
            a.c,
            (lo, hi),
            a.points,
            &IntegratorOptions::default(),
        )?;
        writeln!(w, "{}", serde_json::to_string_pretty(&r)?)?;
    } else if let Ok(p) = a.alpha.parse::<ExactParams>() {
        let (word, image) = reduce_to_positive(&p)?;
        writeln!(
            w,
            "word {}",
            if word.is_empty() {
                "id".to_string()
            } else {
                word.to_string()
            }
        )?;
        writeln!(w, "image {image}")?;
        if let Ok(s) = unique_finite_sequence(&p) {
            writeln!(w, "finite {}", compact(&s))?;
        }
    } else {
        let p: ParameterTriple = parse_alpha(&a.alpha).map_err(Usage)?;
        let (word, image) = reduce_to_positive(&p)?;
        writeln!(
            w,
            "word {}",
            if word.is_empty() {
                "id".to_string()
            } else {
                word.to_string()
            }
        )?;
        let im = image.as_array();
        writeln!(w, "image {:.16e},{:.16e},{:.16e}", im[0], im[1], im[2])?;
    }
    w.flush()?;
    Ok(())
}

/// A bad combination of flags detected after parsing.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn threads() -> Result<(), String> {
    let Ok(v) = std::env::var("SPIV_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("SPIV_THREADS: expected a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let args = match config::merge(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let result = match cli.cmd {
        Cmd::Integrate(a) => a
            .init
            .state()
            .map_err(|e| Usage(e).into())
            .and_then(|_| run_integrate(a)),
        Cmd::Classify(a) => a
            .init
            .state()
            .map_err(|e| Usage(e).into())
            .and_then(|_| run_classify(a)),
        Cmd::Scan(a) => run_scan(a),
        Cmd::Btob(a) => run_btob(a),
        Cmd::Ccregion(a) => run_cc(a),
        Cmd::Rational(a) => run_rational(a),
        Cmd::Sequences(a) => run_sequences(a),
        Cmd::Reduce(a) => run_reduce(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Usage>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
