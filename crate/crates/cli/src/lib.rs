//! Command-line front end: parsing, dispatch and report formatting.

pub mod parse;
pub mod render;

use std::fmt::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use puiseux_core::algebra::rat::{fmt_rat, parse_rat, Rat};
use puiseux_core::algebra::{GaussRat, MPoly, Ring, Var, DEFAULT_PRECISION};
use puiseux_core::expansion::{build_tree, critical_points, expand_roots, truncate_at, valuation, Depth};
use puiseux_core::polygon::{build_polygon, polygon_of, XiPolynomial};
use puiseux_core::series::{contact_order_curve, contact_order_series, PuiseuxSeries};
use puiseux_core::stability::{check_deformation, check_poly_family, verify_fundamental_lemma, PolyFamily, Verdict};
use puiseux_core::truncation::{root_deformation_family, root_truncation};
use serde_json::{json, Value};

pub use parse::{parse_poly, parse_series, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "puiseux", version, about = "Newton-Puiseux analysis of plane curve singularities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Expansion depth `p/q`; the default stops a few terms past separation.
    #[arg(long, global = true)]
    pub depth: Option<String>,
    /// Working precision in bits for numeric root isolation.
    #[arg(long, env = "PUISEUX_PRECISION", global = true)]
    pub precision: Option<u32>,
    /// Write an SVG figure (polygon and tree commands).
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// Worker threads for per-critical-point checks.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Reject inputs that are not mini-regular in x instead of changing
    /// coordinates.
    #[arg(long, global = true)]
    pub no_regularize: bool,
    /// Read the polynomial from a file instead of the command line.
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Puiseux roots of f(x, y) = 0 as series in y.
    Expand {
        /// Polynomial in x and y (or --file)
        #[arg(allow_hyphen_values = true)]
        input: Option<String>,
    },
    /// Newton polygon of f, or of f(alpha + x, y) with --at.
    Polygon {
        /// Polynomial in x and y (or --file)
        #[arg(allow_hyphen_values = true)]
        input: Option<String>,
        /// Centre alpha, a series in y such as "y^(3/2)"
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Kuo-Lu tree, bars and critical points.
    Tree {
        /// Polynomial in x and y (or --file)
        #[arg(allow_hyphen_values = true)]
        input: Option<String>,
    },
    /// Root truncation, and with --family the interpolating deformation.
    Truncate {
        /// Polynomial in x and y (or --file)
        #[arg(allow_hyphen_values = true)]
        input: Option<String>,
        /// Also print F_root(x, y, t)
        #[arg(long)]
        family: bool,
    },
    /// Morse stability of a deformation F(x, y, t).
    Stability {
        /// Polynomial in x and y (or --file)
        #[arg(allow_hyphen_values = true)]
        input: Option<String>,
        /// Treat the input as a polynomial family p(z, t) with z written as x.
        #[arg(long)]
        poly_family: bool,
        /// Recompute the critical structure at these t and compare with t = 0.
        #[arg(long, value_delimiter = ',')]
        lemma: Option<Vec<String>>,
    },
    /// Contact order of two series, or the contact height of a series
    /// with the roots of --phi.
    Contact {
        /// Series in y, e.g. "y^(3/2) + y^(7/4)"
        #[arg(allow_hyphen_values = true)]
        a: String,
        /// Second series (omit with --phi)
        #[arg(allow_hyphen_values = true)]
        b: Option<String>,
        /// Polynomial whose roots the series is compared with
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
        /// Contact of the curves (maximum over conjugates).
        #[arg(long)]
        curve: bool,
    },
    /// Puiseux characteristic exponents of a series, and of its truncation
    /// with --phi.
    Pairs {
        /// Series in y
        #[arg(allow_hyphen_values = true)]
        a: String,
        /// Polynomial used to truncate the series at h(mu_phi)
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
    },
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError { code: EXIT_USAGE, message: format!("parse error: {e}") }
    }
}

impl From<puiseux_core::Error> for CliError {
    fn from(e: puiseux_core::Error) -> Self {
        let code = if e.is_inconclusive() { EXIT_INCONCLUSIVE } else { EXIT_COMPUTATION };
        CliError { code, message: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError { code: EXIT_USAGE, message: msg.into() }
}

/// Everything a command produced; `code` is nonzero only for inconclusive
/// verdicts.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub json: Value,
    pub svg: Option<String>,
    pub code: i32,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Output { text, json, svg: None, code: EXIT_OK }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub depth: Depth,
    pub precision: u32,
    pub regularize: bool,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let depth = match &cli.depth {
            None => Depth::Auto,
            Some(s) => Depth::Exponent(
                parse_rat(s.trim()).filter(|r| r > &Rat::from_integer(0.into())).ok_or_else(|| usage(format!("invalid depth '{s}'")))?,
            ),
        };
        Ok(RunConfig { depth, precision: cli.precision.unwrap_or(DEFAULT_PRECISION), regularize: !cli.no_regularize })
    }
}

/// Make `f` mini-regular in `x` by `y ↦ y + c x` for the least `c ≥ 0`.
/// The test uses the `t = 0` part when `t` is present.
pub fn mini_regularize(f: &MPoly) -> Option<(MPoly, i64)> {
    let f0 = f.eval_var(Var::T, &GaussRat::zero());
    let m = f0.xy_order()?;
    for c in 0.. {
        let sub = MPoly::var(Var::Y).add(&MPoly::from_int(c).mul(&MPoly::var(Var::X)));
        let g0 = f0.subs(Var::Y, &sub);
        if !g0.xy_homogeneous_part(m).coeff(&[m, 0, 0]).is_zero() {
            let g = if c == 0 { f.clone() } else { f.subs(Var::Y, &sub) };
            return Some((g, c));
        }
    }
    unreachable!()
}

fn read_input(cli: &Cli, positional: &Option<String>) -> Result<String, CliError> {
    match (positional, &cli.file) {
        (Some(_), Some(_)) => Err(usage("give the polynomial either inline or with --file, not both")),
        (Some(s), None) => Ok(s.clone()),
        (None, Some(p)) => std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display()))),
        (None, None) => {
            let mut s = String::new();
            std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| usage(e.to_string()))?;
            Ok(s)
        }
    }
}

struct Prepared {
    f: MPoly,
    note: Option<String>,
}

fn prepare(src: &str, cfg: &RunConfig, allow_t: bool) -> Result<Prepared, CliError> {
    let f = parse_poly(src)?;
    if !allow_t && f.involves(Var::T) {
        return Err(usage("this command takes a polynomial in x and y only"));
    }
    if f.is_zero() {
        return Err(usage("the polynomial is zero"));
    }
    if !cfg.regularize {
        return Ok(Prepared { f, note: None });
    }
    match mini_regularize(&f) {
        Some((g, 0)) => Ok(Prepared { f: g, note: None }),
        Some((g, c)) => Ok(Prepared { f: g, note: Some(format!("substituted y -> y + {c}*x to make the input mini-regular in x")) }),
        None => Err(usage("the polynomial has no singular point at the origin to analyse")),
    }
}

fn with_note(mut text: String, note: &Option<String>) -> String {
    if let Some(n) = note {
        text = format!("note: {n}\n{text}");
    }
    text
}

fn xi(f: &MPoly) -> Result<XiPolynomial, CliError> {
    Ok(XiPolynomial::from_mpoly(f)?)
}

fn cmd_expand(cli: &Cli, cfg: &RunConfig, input: &Option<String>) -> Result<Output, CliError> {
    let p = prepare(&read_input(cli, input)?, cfg, false)?;
    let branches = expand_roots(&xi(&p.f)?, &cfg.depth, cfg.precision)?;
    let mut s = String::new();
    for (i, b) in branches.iter().enumerate() {
        writeln!(
            s,
            "[{i}] x = {}  (multiplicity {}, separation {})",
            b.series,
            b.multiplicity,
            render::fmt_opt(&b.separation_depth)
        )
        .unwrap();
    }
    let json = json!({ "input": p.f.to_string(), "regularization": p.note, "branches": branches });
    Ok(Output::new(with_note(s, &p.note), json))
}

fn cmd_polygon(cli: &Cli, cfg: &RunConfig, input: &Option<String>, at: &Option<String>) -> Result<Output, CliError> {
    let p = prepare(&read_input(cli, input)?, cfg, false)?;
    let phi = xi(&p.f)?;
    let poly = match at {
        Some(a) => build_polygon(&phi, &parse_series(a)?)?,
        None => polygon_of(&phi)?,
    };
    let mut out = Output::new(
        with_note(render::polygon_text(&poly), &p.note),
        json!({ "input": p.f.to_string(), "regularization": p.note, "polygon": poly }),
    );
    out.svg = Some(render::polygon_svg(&poly));
    Ok(out)
}

fn cmd_tree(cli: &Cli, cfg: &RunConfig, input: &Option<String>) -> Result<Output, CliError> {
    let p = prepare(&read_input(cli, input)?, cfg, false)?;
    let phi = xi(&p.f)?;
    let branches = expand_roots(&phi, &Depth::Auto, cfg.precision)?;
    let tree = build_tree(&phi, branches)?;
    let crit = critical_points(&tree, cfg.precision)?;
    let mut out = Output::new(
        with_note(render::tree_text(&tree, &crit), &p.note),
        json!({ "input": p.f.to_string(), "regularization": p.note, "tree": tree, "critical_points": crit }),
    );
    out.svg = Some(render::tree_svg(&tree, &crit));
    Ok(out)
}

fn cmd_truncate(cli: &Cli, cfg: &RunConfig, input: &Option<String>, family: bool) -> Result<Output, CliError> {
    let p = prepare(&read_input(cli, input)?, cfg, false)?;
    let r = root_truncation(&p.f, cfg.precision)?;
    let mut s = String::new();
    let kind = if r.polynomial { "" } else { " (power series, shown to stored depth)" };
    writeln!(s, "f_root = {}{kind}", r.fhat).unwrap();
    for t in &r.roots {
        writeln!(s, "  root {} (multiplicity {}, e = {})", t.series, t.multiplicity, render::fmt_opt(&t.e)).unwrap();
    }
    for l in &r.snapped {
        writeln!(s, "  recognised {l}").unwrap();
    }
    let mut json = json!({ "input": p.f.to_string(), "regularization": p.note, "truncation": r });
    if family {
        let fam = root_deformation_family(&p.f, cfg.precision)?;
        writeln!(s, "F_root = {}", fam.family).unwrap();
        if fam.depth_capped {
            writeln!(s, "  (remainders stored to the expansion depth)").unwrap();
        }
        json["family"] = serde_json::to_value(&fam).expect("serialisable");
    }
    Ok(Output::new(with_note(s, &p.note), json))
}

fn verdict_code(v: Verdict) -> i32 {
    if v == Verdict::Inconclusive {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    }
}

fn cmd_stability(
    cli: &Cli,
    cfg: &RunConfig,
    input: &Option<String>,
    poly_family: bool,
    lemma: &Option<Vec<String>>,
) -> Result<Output, CliError> {
    let src = read_input(cli, input)?;
    if poly_family {
        let fam = PolyFamily::from_mpoly(&parse_poly(&src)?)?;
        let r = check_poly_family(&fam, cfg.precision)?;
        let mut s = format!("family p_t(z) = {}\nverdict: {}\n", r.family, r.verdict);
        if let Some(c) = r.failing_condition {
            writeln!(s, "failing condition: ({c})").unwrap();
        }
        if let Some(w) = &r.witness {
            writeln!(s, "witness: {w}").unwrap();
        }
        let mut out = Output::new(s, json!({ "report": r }));
        out.code = verdict_code(r.verdict);
        return Ok(out);
    }
    let p = prepare(&src, cfg, true)?;
    let r = check_deformation(&p.f, cfg.precision)?;
    let mut s = format!("verdict: {} ({})\n", r.verdict, r.criterion);
    if let Some(c) = &r.failing_condition {
        writeln!(s, "failing condition: {c}").unwrap();
    }
    if let Some(w) = &r.witness {
        writeln!(s, "witness: {w}").unwrap();
    }
    for c in &r.critical_points {
        writeln!(
            s,
            "critical point gamma = {} (m_crit {}, L = {}): shift B_t = {}, {}",
            c.gamma,
            c.multiplicity,
            render::fmt_opt(&c.lojasiewicz),
            c.shift,
            c.verdict
        )
        .unwrap();
        if let Some(d) = &c.witness_dot {
            writeln!(s, "  t-dot ({}, {}) below the polygon", d.k, fmt_rat(&d.q)).unwrap();
        }
        for f in &c.families {
            writeln!(s, "  co-slope {}: {} -> {}", fmt_rat(&f.coslope), f.report.family, f.report.verdict).unwrap();
        }
    }
    if let Some(k) = r.root_polygons_constant {
        writeln!(s, "root polygons constant at sampled t: {k}").unwrap();
    }
    let mut json = json!({ "input": p.f.to_string(), "regularization": p.note, "report": r });
    let mut code = verdict_code(r.verdict);
    if let Some(ts) = lemma {
        let ts: Vec<Rat> = ts
            .iter()
            .map(|t| parse_rat(t.trim()).ok_or_else(|| usage(format!("invalid sample '{t}'"))))
            .collect::<Result<_, _>>()?;
        let l = verify_fundamental_lemma(&p.f, &ts, cfg.precision)?;
        for smp in &l.samples {
            writeln!(s, "sample t = {}: {}", fmt_rat(&smp.t), if smp.matches { "matches t = 0" } else { "differs" }).unwrap();
            for m in &smp.mismatches {
                writeln!(s, "  {m}").unwrap();
            }
        }
        if !l.passed {
            code = EXIT_COMPUTATION;
        }
        json["lemma"] = serde_json::to_value(&l).expect("serialisable");
    }
    let mut out = Output::new(with_note(s, &p.note), json);
    out.code = code;
    Ok(out)
}

fn phi_branches(src: &str, cfg: &RunConfig) -> Result<(XiPolynomial, Vec<puiseux_core::expansion::RootBranch>), CliError> {
    let f = parse_poly(src)?;
    let phi = xi(&f)?;
    let b = expand_roots(&phi, &Depth::Auto, cfg.precision)?;
    Ok((phi, b))
}

/// `h(μ_φ)` and `μ_φ`: the largest contact of `μ` with a root and the
/// truncation there.
fn truncation_data(mu: &PuiseuxSeries, src: &str, cfg: &RunConfig) -> Result<(Option<Rat>, PuiseuxSeries, String), CliError> {
    let (phi, branches) = phi_branches(src, cfg)?;
    let t = truncate_at(mu, &branches)?;
    let mut h: Option<Option<Rat>> = None;
    for b in &branches {
        let c = contact_order_series(mu, &b.series)?;
        h = Some(match (h, c) {
            (None, c) => c,
            (Some(None), _) | (_, None) => None,
            (Some(Some(a)), Some(b)) => Some(a.max(b)),
        });
    }
    let v = valuation(&phi, mu)?;
    Ok((h.flatten(), t, v.to_string()))
}

fn cmd_contact(cfg: &RunConfig, a: &str, b: &Option<String>, phi: &Option<String>, curve: bool) -> Result<Output, CliError> {
    let mu = parse_series(a)?;
    match (b, phi) {
        (Some(b), None) => {
            let nu = parse_series(b)?;
            let c = if curve { contact_order_curve(&mu, &nu, cfg.precision)? } else { contact_order_series(&mu, &nu)? };
            let s = format!("contact order: {}\n", render::fmt_opt(&c));
            Ok(Output::new(s, json!({ "contact": c.as_ref().map(fmt_rat) })))
        }
        (None, Some(src)) => {
            let (h, t, v) = truncation_data(&mu, src, cfg)?;
            let s = format!("h(mu_phi) = {}\nmu_phi = {t}\nval_phi(mu) = {v}\n", render::fmt_opt(&h));
            Ok(Output::new(
                s,
                json!({ "height": h.as_ref().map(fmt_rat), "truncation": t, "valuation": v }),
            ))
        }
        _ => Err(usage("contact takes either a second series or --phi")),
    }
}

fn pairs_str(s: &PuiseuxSeries) -> String {
    let v: Vec<String> = s.puiseux_pairs().iter().map(fmt_rat).collect();
    format!("{{{}}}", v.join(", "))
}

fn cmd_pairs(cfg: &RunConfig, a: &str, phi: &Option<String>) -> Result<Output, CliError> {
    let mu = parse_series(a)?;
    let mut s = format!("chi_puis(mu) = {}\n", pairs_str(&mu));
    let own: Vec<String> = mu.puiseux_pairs().iter().map(fmt_rat).collect();
    let mut json = json!({ "pairs": own });
    if let Some(src) = phi {
        let (h, t, _) = truncation_data(&mu, src, cfg)?;
        writeln!(s, "mu_phi = {t}\nh(mu_phi) = {}\nchi_puis(mu_phi) = {}", render::fmt_opt(&h), pairs_str(&t)).unwrap();
        let tp: Vec<String> = t.puiseux_pairs().iter().map(fmt_rat).collect();
        json["truncation"] = json!({ "series": t, "height": h.as_ref().map(fmt_rat), "pairs": tp });
    }
    Ok(Output::new(s, json))
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let cfg = RunConfig::from_cli(cli)?;
    match &cli.command {
        Command::Expand { input } => cmd_expand(cli, &cfg, input),
        Command::Polygon { input, at } => cmd_polygon(cli, &cfg, input, at),
        Command::Tree { input } => cmd_tree(cli, &cfg, input),
        Command::Truncate { input, family } => cmd_truncate(cli, &cfg, input, *family),
        Command::Stability { input, poly_family, lemma } => cmd_stability(cli, &cfg, input, *poly_family, lemma),
        Command::Contact { a, b, phi, curve } => cmd_contact(&cfg, a, b, phi, *curve),
        Command::Pairs { a, phi } => cmd_pairs(&cfg, a, phi),
    }
}

/// Parse arguments, run, and return `(exit code, stdout, stderr)`.
pub fn execute<I, S>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let msg = e.render().to_string();
            return if code == EXIT_OK { (code, msg, String::new()) } else { (code, String::new(), msg) };
        }
    };
    let go = || run(&cli);
    let res = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(go),
            Err(e) => Err(usage(e.to_string())),
        },
        None => go(),
    };
    match res {
        Ok(out) => {
            if let (Some(path), Some(svg)) = (&cli.svg, &out.svg) {
                if let Err(e) = std::fs::write(path, svg) {
                    return (EXIT_USAGE, String::new(), format!("error: {}: {e}\n", path.display()));
                }
            } else if cli.svg.is_some() {
                return (EXIT_USAGE, String::new(), "error: --svg applies to the polygon and tree commands\n".into());
            }
            let stdout = match cli.format {
                Format::Text => out.text,
                Format::Json => serde_json::to_string_pretty(&out.json).expect("serialisable") + "\n",
            };
            (out.code, stdout, String::new())
        }
        Err(e) => (e.code, String::new(), format!("error: {}\n", e.message)),
    }
}
