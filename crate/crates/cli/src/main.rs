mod config;
mod output;

use std::fs::File;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use arithdyn::freeness::{find_relation_with_budget, DEFAULT_MAX_DEGREE};
use arithdyn::heights::HeightValue;
use arithdyn::henon::{canonical_heights_henon, green_henon, is_periodic_henon};
use arithdyn::intersect::{
    density_report, equidistribution_check, height_decay_report, solve_common_with, solve_equalizer_with, Budget, Law,
    SolutionVariety,
};
use arithdyn::mapspec::{format_map, format_point, parse_map, parse_point, parse_poly};
use arithdyn::p1dyn::{canonical_height_p1, green_p1, is_preperiodic_p1, split_height, P1Point};
use arithdyn::places::{LocalGreen, LocalValue, Place};
use arithdyn::poly::QPoly;
use arithdyn::rational::{fmt_q, rational_box, Q};
use arithdyn::rittlab::{
    classify, common_normal_form, fmt_linear_list, linearly_related, normal_form_xsht, ritt_first_step, symmetry_group,
    SymmetryGroup,
};
use arithdyn::skewprod::{green_skew, height_skew, is_preperiodic_skew, SkewPoint};
use arithdyn::system::DynamicalSystem;
use arithdyn::Error;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use config::{pick, pick_list, pick_or, Format, RunConfig};
use output::{Cell, Table};

/// Canonical heights, Green functions, common zeros, freeness and Ritt
/// classification for polynomial and rational dynamics over Q.
#[derive(Parser, Debug)]
#[command(name = "arithdyn", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// TOML file whose keys mirror the long flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    max_len: Option<usize>,
    /// Coefficient budget in bits for exact elimination
    #[arg(long, global = true)]
    budget_bits: Option<u64>,
    /// Output file (relative paths resolve under ARITHDYN_OUT_DIR when set)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug, Default)]
struct PointArgs {
    #[arg(long)]
    map: Option<String>,
    /// Repeatable: `1/4`, `inf`, `(1, 2)`
    #[arg(long, allow_hyphen_values = true)]
    point: Vec<String>,
    /// All points with |numerator|, denominator <= N
    #[arg(long = "box")]
    box_bound: Option<i64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical heights of points
    Height(PointArgs),
    /// Local Green functions at chosen places
    Green {
        #[command(flatten)]
        pts: PointArgs,
        /// Repeatable: `inf` or a prime
        #[arg(long)]
        place: Vec<String>,
    },
    /// Exact preperiodicity with certificates
    Preperiodic(PointArgs),
    /// Common zeros of F^m = C (and G^n = C when G is given)
    CommonZeros {
        #[arg(long = "F")]
        f: Option<String>,
        #[arg(long = "G")]
        g: Option<String>,
        #[arg(long = "C")]
        c: Option<String>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Shortest relation between compositions of F and G
    Freeness {
        #[arg(long = "F")]
        f: Option<String>,
        #[arg(long = "G")]
        g: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Decomposition and conjugacy tools for one-variable polynomials
    Ritt {
        #[command(subcommand)]
        cmd: RittCommand,
    },
    /// Period points against a reference law
    Equidist {
        #[arg(long)]
        map: Option<String>,
        #[arg(long)]
        period: Option<usize>,
        /// circle, arcsine or dirac:<real>
        #[arg(long)]
        law: Option<String>,
        /// Histogram CSV path
        #[arg(long)]
        histogram: Option<PathBuf>,
    },
    /// Common-zero counts over a grid of (m, n) and the lowest-degree curve through them
    DensityReport {
        #[arg(long = "F")]
        f: Option<String>,
        #[arg(long = "G")]
        g: Option<String>,
        #[arg(long = "C")]
        c: Option<String>,
        #[arg(long)]
        m_max: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        curve_degree: Option<usize>,
    },
    /// Heights of the solutions of F^m = C for m = 1..m-max
    Decay {
        #[arg(long = "F")]
        f: Option<String>,
        #[arg(long = "C")]
        c: Option<String>,
        #[arg(long)]
        m_max: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum RittCommand {
    /// Power-conjugate, Chebyshev-conjugate or not special
    Classify {
        #[arg(long)]
        poly: String,
    },
    /// f = l1 o g o l2
    Related {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// phi with phi o f o phi^-1 = x^s h(x^t)
    NormalForm {
        #[arg(long)]
        poly: String,
    },
    /// Linear maps sigma with f o sigma = f
    Symmetry {
        #[arg(long)]
        poly: String,
    },
    /// Linear mu with A = D o mu and C = mu^-1 o B
    FirstStep {
        #[arg(long)]
        a: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        d: String,
        #[arg(long)]
        b: String,
    },
    /// One phi putting f and g in the form eps x^s h(x^t)
    CommonForm {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
}

enum Failure {
    Usage(String),
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Usage(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 1,
            Failure::Core(e) => match e {
                Error::Parse { .. } => 2,
                Error::DegreeBudgetExceeded { .. } | Error::CoefficientBlowup { .. } | Error::PrecisionExhausted(_) => 3,
                _ => 1,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(s) | Failure::Io(s) => s.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

type Outcome = Result<Table, Failure>;

struct Ctx {
    file: RunConfig,
    tol: f64,
    budget: Budget,
    max_len: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file = match &cli.global.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let g = &cli.global;
    let tol = pick_or(&g.tol, &file.tol, 1e-9);
    if !(tol > 0.0) {
        return Err(Failure::Usage("`--tol` must be positive".into()));
    }
    let bits = pick_or(&g.budget_bits, &file.budget_bits, Budget::default().bits);
    let ctx = Ctx { tol, budget: Budget { bits, ..Budget::default() }, max_len: pick_or(&g.max_len, &file.max_len, 4), file: file.clone() };
    let format = pick_or(&g.format, &file.format, Format::Csv);
    let out = g.out.clone().or(file.out.clone());
    let table = dispatch(&cli.command, &ctx)?;
    match out {
        Some(path) => {
            let path = resolve_out(path);
            let mut f = File::create(&path).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
            table.write_to(format, &mut f).map_err(|e| Failure::Io(e.to_string()))
        }
        None => table.write_to(format, &mut io::stdout().lock()).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn resolve_out(p: PathBuf) -> PathBuf {
    match std::env::var_os("ARITHDYN_OUT_DIR") {
        Some(dir) if p.is_relative() => PathBuf::from(dir).join(p),
        _ => p,
    }
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Outcome {
    let file = &ctx.file;
    match cmd {
        Command::Height(a) => cmd_height(a, ctx),
        Command::Green { pts, place } => cmd_green(pts, &pick_list(place, &file.place), ctx),
        Command::Preperiodic(a) => cmd_preperiodic(a, ctx),
        Command::CommonZeros { f, g, c, m, n } => {
            let f = parse_map("F", &pick(f, &file.f_map, "F")?)?;
            let g = g.clone().or(file.g_map.clone()).map(|s| parse_map("G", &s)).transpose()?;
            let c = parse_map("C", &pick(c, &file.c_map, "C")?)?;
            let m = pick_or(m, &file.m, 1);
            let sol = match &g {
                Some(g) => solve_common_with(&f, g, &c, m, pick_or(n, &file.n, 1), ctx.budget)?,
                None => solve_equalizer_with(&f, m, &c, ctx.budget)?,
            };
            Ok(solution_table(&sol))
        }
        Command::Freeness { f, g, samples } => {
            let f = parse_map("F", &pick(f, &file.f_map, "F")?)?;
            let g = parse_map("G", &pick(g, &file.g_map, "G")?)?;
            let samples = pick_or(samples, &file.samples, 5);
            let mut t = Table::new(&["found", "w1", "w2", "equal_length", "verified", "map"]);
            match find_relation_with_budget(&f, &g, ctx.max_len, samples, DEFAULT_MAX_DEGREE)? {
                Some(c) => t.push(vec![
                    true.into(),
                    c.w1.to_string().into(),
                    c.w2.to_string().into(),
                    c.equal_length.into(),
                    c.verified.into(),
                    format_map(&c.map).into(),
                ]),
                None => t.push(vec![false.into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty]),
            }
            Ok(t)
        }
        Command::Ritt { cmd } => cmd_ritt(cmd),
        Command::Equidist { map, period, law, histogram } => {
            let f = match parse_map("map", &pick(map, &file.map, "map")?)? {
                DynamicalSystem::P1(f) => f,
                other => return Err(Error::Unsupported(format!("period points of {} maps", other.kind())).into()),
            };
            let n = pick(period, &file.period, "period")?;
            let law_s = pick_or(law, &file.law, "circle".to_string());
            let law = parse_law(&law_s)?;
            let r = equidistribution_check(&f, n, law)?;
            if let Some(path) = histogram.clone().or(file.histogram.clone()) {
                let mut h = Table::new(&["bin_center", "empirical_mass", "reference_mass"]);
                for b in &r.histogram {
                    h.push(vec![b.center.into(), b.empirical.into(), b.reference.into()]);
                }
                let path = resolve_out(path);
                let mut out = File::create(&path).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
                h.write_to(Format::Csv, &mut out).map_err(|e| Failure::Io(e.to_string()))?;
            }
            let mut t = Table::new(&["period", "law", "points", "includes_infinity", "ks", "off_support_mass"]);
            t.push(vec![n.into(), law_s.into(), r.points.into(), r.includes_infinity.into(), r.ks.into(), r.off_support_mass.into()]);
            Ok(t)
        }
        Command::DensityReport { f, g, c, m_max, n_max, curve_degree } => {
            let f = parse_map("F", &pick(f, &file.f_map, "F")?)?;
            let g = parse_map("G", &pick(g, &file.g_map, "G")?)?;
            let c = parse_map("C", &pick(c, &file.c_map, "C")?)?;
            let ms: Vec<usize> = (1..=pick_or(m_max, &file.m_max, 2)).collect();
            let ns: Vec<usize> = (1..=pick_or(n_max, &file.n_max, 2)).collect();
            let r = density_report(&f, &g, &c, &ms, &ns, pick_or(curve_degree, &file.curve_degree, 3))?;
            let mut t = Table::new(&["kind", "m", "n", "count", "curve_degree", "curve", "verified"]);
            for cell in &r.cells {
                t.push(vec!["cell".into(), cell.m.into(), cell.n.into(), cell.count.into(), Cell::Empty, Cell::Empty, Cell::Empty]);
            }
            match &r.curve {
                Some(cv) => {
                    for b in &cv.basis {
                        t.push(vec!["curve".into(), Cell::Empty, Cell::Empty, r.total_points.into(), cv.degree.into(), b.to_string().into(), cv.verified.into()]);
                    }
                }
                None => t.push(vec!["no_curve".into(), Cell::Empty, Cell::Empty, r.total_points.into(), Cell::Empty, Cell::Empty, Cell::Empty]),
            }
            Ok(t)
        }
        Command::Decay { f, c, m_max } => {
            let f = parse_map("F", &pick(f, &file.f_map, "F")?)?;
            let c = parse_map("C", &pick(c, &file.c_map, "C")?)?;
            let ms: Vec<usize> = (1..=pick_or(m_max, &file.m_max, 4)).collect();
            let mut t = Table::new(&["m", "count", "max_height", "max_error", "dm_times_max", "normalized"]);
            for r in height_decay_report(&f, &c, &ms, ctx.tol)? {
                t.push(vec![r.m.into(), r.count.into(), r.max_height.into(), r.max_error.into(), r.dm_times_max.into(), r.normalized.into()]);
            }
            Ok(t)
        }
    }
}

fn parse_law(s: &str) -> Result<Law, Failure> {
    let t = s.trim().to_ascii_lowercase();
    match t.as_str() {
        "circle" => Ok(Law::Circle),
        "arcsine" => Ok(Law::Arcsine),
        _ => match t.strip_prefix("dirac:") {
            Some(v) => v
                .trim()
                .parse::<f64>()
                .map(|c| Law::Dirac(Complex64::new(c, 0.0)))
                .map_err(|_| Failure::Core(Error::Parse { field: "law".into(), pos: 6, msg: format!("bad point mass `{v}`") })),
            None => Err(Failure::Core(Error::Parse { field: "law".into(), pos: 0, msg: format!("unknown law `{s}`") })),
        },
    }
}

fn points_for(a: &PointArgs, ctx: &Ctx, dim: usize) -> Result<Vec<Vec<P1Point>>, Failure> {
    let specs = pick_list(&a.point, &ctx.file.point);
    let mut pts = Vec::new();
    for s in &specs {
        let p = parse_point("point", s)?;
        if p.len() != dim {
            return Err(Error::Parse { field: "point".into(), pos: 0, msg: format!("expected {dim} coordinates, found {}", p.len()) }.into());
        }
        pts.push(p);
    }
    if let Some(n) = a.box_bound.or(ctx.file.box_bound) {
        let b: Vec<P1Point> = rational_box(n, n).into_iter().map(P1Point::Finite).collect();
        match dim {
            1 => pts.extend(b.into_iter().map(|x| vec![x])),
            2 => pts.extend(b.iter().flat_map(|x| b.iter().map(move |y| vec![x.clone(), y.clone()]))),
            _ => return Err(Failure::Usage("`--box` needs a map of dimension 1 or 2".into())),
        }
    }
    if pts.is_empty() {
        return Err(Failure::Usage("missing required value `--point` (or `--box`)".into()));
    }
    Ok(pts)
}

fn map_arg(a: &PointArgs, ctx: &Ctx) -> Result<DynamicalSystem, Failure> {
    Ok(parse_map("map", &pick(&a.map, &ctx.file.map, "map")?)?)
}

fn affine2(p: &[P1Point]) -> Result<[Q; 2], Failure> {
    match (p[0].finite(), p[1].finite()) {
        (Some(x), Some(y)) => Ok([x.clone(), y.clone()]),
        _ => Err(Error::Parse { field: "point".into(), pos: 0, msg: "affine point expected".into() }.into()),
    }
}

/// The height as text: exactly `0`, or the value followed by its exact finite part.
fn finite_part(h: &HeightValue) -> String {
    let parts: Vec<String> = h.finite.iter().filter(|(_, e)| !num_traits::Zero::is_zero(*e)).map(|(p, e)| format!("{}*log({p})", fmt_q(e))).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn height_cell(h: &HeightValue) -> Cell {
    if h.is_exact_zero() {
        Cell::Exact("0".into())
    } else {
        Cell::Float(h.total())
    }
}

fn cmd_height(a: &PointArgs, ctx: &Ctx) -> Outcome {
    let f = map_arg(a, ctx)?;
    let mut t = Table::new(&["point", "height", "finite_part", "htilde", "error_bound", "preperiodic"]);
    for p in points_for(a, ctx, f.dim())? {
        let (h, tilde, pre) = match &f {
            DynamicalSystem::P1(g) => (canonical_height_p1(g, &p[0], ctx.tol)?, None, is_preperiodic_p1(g, &p[0])?.preperiodic),
            DynamicalSystem::Split(s) => {
                let mut pre = true;
                for (c, x) in s.components().iter().zip(&p) {
                    pre &= is_preperiodic_p1(c, x)?.preperiodic;
                }
                (split_height(s, &p, ctx.tol)?, None, pre)
            }
            DynamicalSystem::Henon(hm) => {
                let q = affine2(&p)?;
                let hh = canonical_heights_henon(hm, &q, ctx.tol)?;
                (hh.hhat, Some(hh.htilde), is_periodic_henon(hm, &q)?.periodic)
            }
            DynamicalSystem::Skew(s) => {
                let q = affine2(&p)?;
                (height_skew(s, &SkewPoint::Rational(q.clone()), ctx.tol)?, None, is_preperiodic_skew(s, &q)?.preperiodic)
            }
            DynamicalSystem::Poly2(_) => return Err(Error::Unsupported("canonical heights for general polynomial maps".into()).into()),
        };
        let err = h.error_bound() + tilde.as_ref().map_or(0.0, HeightValue::error_bound);
        t.push(vec![
            format_point(&p).into(),
            height_cell(&h),
            finite_part(&h).into(),
            tilde.as_ref().map_or(Cell::Empty, height_cell),
            err.into(),
            pre.into(),
        ]);
    }
    Ok(t)
}

fn green_cells(g: &LocalGreen) -> (Cell, Cell) {
    let exact = match &g.value {
        LocalValue::LogP(e) => Cell::Exact(format!("{}*log({})", fmt_q(e), g.place)),
        LocalValue::Numeric { .. } => Cell::Empty,
    };
    let value = if g.is_exact_zero() { Cell::Exact("0".into()) } else { Cell::Float(g.to_f64()) };
    (value, exact)
}

fn parse_place(s: &str) -> Result<Place, Failure> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("arch") {
        return Ok(Place::Archimedean);
    }
    let p: u64 = t.parse().map_err(|_| Failure::Core(Error::Parse { field: "place".into(), pos: 0, msg: format!("expected `inf` or a prime, found `{t}`") }))?;
    Ok(Place::finite(p).map_err(|_| Error::Parse { field: "place".into(), pos: 0, msg: format!("{p} is not prime") })?)
}

fn cmd_green(a: &PointArgs, places: &[String], ctx: &Ctx) -> Outcome {
    let f = map_arg(a, ctx)?;
    let places: Vec<Place> = if places.is_empty() { vec![Place::Archimedean] } else { places.iter().map(|s| parse_place(s)).collect::<Result<_, _>>()? };
    let mut t = Table::new(&["point", "place", "green", "log_p_multiple", "green_minus", "error_bound"]);
    for p in points_for(a, ctx, f.dim())? {
        for &v in &places {
            let (g, minus) = match &f {
                DynamicalSystem::P1(m) => (green_p1(m, &p[0], v, ctx.tol)?, None),
                DynamicalSystem::Henon(h) => {
                    let pair = green_henon(h, &affine2(&p)?, v, ctx.tol)?;
                    (pair.g_plus, Some(pair.g_minus))
                }
                DynamicalSystem::Skew(s) => (green_skew(s, &affine2(&p)?, v, ctx.tol)?, None),
                other => return Err(Error::Unsupported(format!("local Green functions of {} maps", other.kind())).into()),
            };
            let (value, exact) = green_cells(&g);
            let err = g.error() + minus.as_ref().map_or(0.0, LocalGreen::error);
            t.push(vec![
                format_point(&p).into(),
                v.to_string().into(),
                value,
                exact,
                minus.as_ref().map_or(Cell::Empty, |m| green_cells(m).0),
                err.into(),
            ]);
        }
    }
    Ok(t)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn cmd_preperiodic(a: &PointArgs, ctx: &Ctx) -> Outcome {
    let f = map_arg(a, ctx)?;
    let mut t = Table::new(&["point", "preperiodic", "tail", "cycle"]);
    for p in points_for(a, ctx, f.dim())? {
        let (pre, tail, cycle) = match &f {
            DynamicalSystem::P1(g) => {
                let c = is_preperiodic_p1(g, &p[0])?;
                (c.preperiodic, c.tail, c.cycle)
            }
            DynamicalSystem::Split(s) => {
                let (mut pre, mut tail, mut cycle) = (true, 0, 1);
                for (c, x) in s.components().iter().zip(&p) {
                    let cert = is_preperiodic_p1(c, x)?;
                    pre &= cert.preperiodic;
                    tail = tail.max(cert.tail);
                    cycle = cycle / gcd(cycle, cert.cycle.max(1)) * cert.cycle.max(1);
                }
                if pre {
                    (true, tail, cycle)
                } else {
                    (false, 0, 0)
                }
            }
            DynamicalSystem::Henon(h) => {
                let c = is_periodic_henon(h, &affine2(&p)?)?;
                (c.periodic, 0, c.period)
            }
            DynamicalSystem::Skew(s) => {
                let c = is_preperiodic_skew(s, &affine2(&p)?)?;
                (c.preperiodic, c.tail, c.cycle)
            }
            DynamicalSystem::Poly2(_) => return Err(Error::Unsupported("preperiodicity for general polynomial maps".into()).into()),
        };
        let n = |k: usize| if pre { Cell::from(k) } else { Cell::Empty };
        t.push(vec![format_point(&p).into(), pre.into(), n(tail), n(cycle)]);
    }
    Ok(t)
}

/// Integer coefficients, lowest degree first.
fn int_list(p: &QPoly) -> String {
    let c: Vec<String> = p.primitive_int().iter().map(|c| c.to_string()).collect();
    format!("[{}]", c.join(","))
}

fn q_list(p: &QPoly) -> String {
    let c: Vec<String> = p.coeffs().iter().map(fmt_q).collect();
    format!("[{}]", if c.is_empty() { "0".into() } else { c.join(",") })
}

fn solution_table(s: &SolutionVariety) -> Table {
    let mut t = Table::new(&["component", "minpoly", "degree", "coords", "rational_point", "multiplicity", "verified"]);
    for (i, c) in s.components.iter().enumerate() {
        let coords: Vec<String> = c.point.coords().iter().map(q_list).collect();
        let rational = c.point.as_rational().map_or(Cell::Empty, |v| {
            let parts: Vec<String> = v.iter().map(fmt_q).collect();
            Cell::Exact(format!("({})", parts.join(", ")))
        });
        t.push(vec![
            i.into(),
            int_list(c.point.field()).into(),
            c.point.degree().into(),
            coords.join("; ").into(),
            rational,
            (c.multiplicity as usize).into(),
            c.verified.into(),
        ]);
    }
    if s.includes_infinity {
        t.push(vec!["inf".into(), Cell::Empty, 1usize.into(), "inf".into(), "inf".into(), 1usize.into(), true.into()]);
    }
    t
}

fn cmd_ritt(cmd: &RittCommand) -> Outcome {
    let p = |name: &str, s: &str| parse_poly(name, s);
    match cmd {
        RittCommand::Classify { poly } => {
            let f = p("poly", poly)?;
            let mut t = Table::new(&["poly", "verdict"]);
            t.push(vec![f.to_string().into(), classify(&f)?.into()]);
            Ok(t)
        }
        RittCommand::Related { f, g } => {
            let (f, g) = (p("f", f)?, p("g", g)?);
            let mut t = Table::new(&["related", "l1", "l2"]);
            match linearly_related(&f, &g)? {
                Some((l1, l2)) => t.push(vec![true.into(), l1.to_string().into(), l2.to_string().into()]),
                None => t.push(vec![false.into(), Cell::Empty, Cell::Empty]),
            }
            Ok(t)
        }
        RittCommand::NormalForm { poly } => {
            let nf = normal_form_xsht(&p("poly", poly)?)?;
            let mut t = Table::new(&["s", "t", "h", "phi"]);
            t.push(vec![nf.s.into(), nf.t.into(), q_list(&nf.h).into(), nf.phi.to_string().into()]);
            Ok(t)
        }
        RittCommand::Symmetry { poly } => {
            let mut t = Table::new(&["group", "order", "center", "rational_elements"]);
            match symmetry_group(&p("poly", poly)?)? {
                SymmetryGroup::AllScalings => t.push(vec!["all_scalings".into(), Cell::Empty, Cell::Empty, Cell::Empty]),
                SymmetryGroup::Finite { order, rational, center } => {
                    t.push(vec!["finite".into(), order.into(), fmt_q(&center).into(), fmt_linear_list(&rational).into()])
                }
            }
            Ok(t)
        }
        RittCommand::FirstStep { a, c, d, b } => {
            let mus = ritt_first_step(&p("a", a)?, &p("c", c)?, &p("d", d)?, &p("b", b)?)?;
            let mut t = Table::new(&["mu"]);
            for mu in mus {
                t.push(vec![mu.to_string().into()]);
            }
            Ok(t)
        }
        RittCommand::CommonForm { f, g } => {
            let mut t = Table::new(&["found", "phi", "eps1", "eps2", "s", "t", "h"]);
            match common_normal_form(&p("f", f)?, &p("g", g)?)? {
                Some(c) => t.push(vec![
                    true.into(),
                    c.phi.to_string().into(),
                    fmt_q(&c.eps1).into(),
                    fmt_q(&c.eps2).into(),
                    c.r.s.into(),
                    c.r.t.into(),
                    q_list(&c.r.h).into(),
                ]),
                None => t.push(vec![false.into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty]),
            }
            Ok(t)
        }
    }
}
