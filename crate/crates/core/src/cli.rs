//! The `icube` command line.
//!
//! Every subcommand writes machine-readable output to stdout. Failures are a
//! single JSON line `{"error": "..."}` on stderr with exit code 1 for a failed
//! verification and 2 for anything the caller got wrong.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::classify::{
    classify_direction, classify_uv, cross_validate, probe_discreteness, truncated_sqrt,
    Classification, Direction, RealParam, UvInput,
};
use crate::digits::{
    canonical, is_imaginary_cube_digit_set, AnyDigitSet, DigitFamily, DigitSetFile, Fractal,
};
use crate::enumerate::congruence_classes;
use crate::error::{Error, Result};
use crate::expansion::closed_form::{LemmaSetId, SliceClosedForm};
use crate::expansion::{
    decide_membership, has_nontrivial_zero_expansion, is_complete_residue_system, lemma_heights,
    slice,
};
use crate::json::{int_value, vec2_value, vec3_value};
use crate::lattice::{parse_decimal, parse_rat, pow, IVec3, Rat, Window2, Window3};
use crate::render::{coverage_series_points, project_points, render_direction, ProjectionMap};

pub const THREADS_ENV: &str = "ICUBE_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "icube",
    version,
    about = "Fractal imaginary cubes: classification, verification, enumeration, rendering"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a projection of S, H or T has positive area.
    Classify {
        #[arg(long, value_parser = parse_fractal)]
        fractal: Fractal,
        /// Integer direction `a,b,c`.
        #[arg(long, value_parser = parse_direction, allow_hyphen_values = true, conflicts_with = "uv", required_unless_present = "uv")]
        dir: Option<IVec3>,
        /// Planar parameters `u,v` (decimals or `p/q`).
        #[arg(long, allow_hyphen_values = true)]
        uv: Option<String>,
        /// Treat `--uv` values as truncations of irrational numbers.
        #[arg(long, requires = "uv")]
        irrational: bool,
        /// Skip the expansion oracle for `--dir`.
        #[arg(long)]
        no_oracle: bool,
        #[arg(long)]
        json: bool,
    },
    /// Rasterize the projection along a direction to a PGM file.
    Render {
        #[arg(long, value_parser = parse_fractal)]
        fractal: Fractal,
        #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
        dir: IVec3,
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        res: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Covered-area fractions for depths 1..=max-depth, as CSV.
    Coverage {
        #[arg(long, value_parser = parse_fractal)]
        fractal: Fractal,
        #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
        dir: IVec3,
        #[arg(long)]
        max_depth: u32,
        #[arg(long)]
        res: usize,
    },
    /// Compare decider output with the closed forms on a window.
    VerifyLemma {
        #[arg(long, value_enum)]
        which: LemmaWhich,
        /// Half-width of the window.
        #[arg(long)]
        window: u64,
        /// Restrict to the height `3^m(3^n - 1)`.
        #[arg(long, value_parser = parse_params)]
        params: Option<(u32, u32)>,
        /// Write each computed slice as JSON into this directory.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Run the zero-expansion oracle on a digit-set file.
    Oracle {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        digits_file: PathBuf,
    },
    /// Count Latin squares and congruence classes of cubes.
    Enumerate {
        #[arg(long)]
        degree: u32,
    },
    /// Search for a short vector in the projected lattice.
    Probe {
        #[arg(long, value_parser = parse_fractal)]
        fractal: Fractal,
        /// Decimal, `p/q`, or `sqrt(n)`.
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long)]
        l: u32,
        /// Take the decimals as exact values.
        #[arg(long)]
        exact: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LemmaWhich {
    /// `E(2, Δ(D_S′))` against its closed form in space.
    Ds,
    /// Slices of `E(3, Δ(D_T′))`.
    T0,
    /// Slices of `E(3, Δ(D_H′))`.
    H0,
}

fn parse_fractal(s: &str) -> std::result::Result<Fractal, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_direction(s: &str) -> std::result::Result<IVec3, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected a,b,c, got {s:?}"));
    }
    let v: Vec<BigInt> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<BigInt>()
                .map_err(|_| format!("direction entries must be integers, got {p:?}"))
        })
        .collect::<std::result::Result<_, _>>()?;
    Ok(IVec3::new(v[0].clone(), v[1].clone(), v[2].clone()))
}

fn parse_params(s: &str) -> std::result::Result<(u32, u32), String> {
    let (m, n) = s
        .split_once(',')
        .ok_or_else(|| format!("expected m,n, got {s:?}"))?;
    let m = m.trim().parse().map_err(|_| format!("bad m in {s:?}"))?;
    let n = n.trim().parse().map_err(|_| format!("bad n in {s:?}"))?;
    Ok((m, n))
}

/// A failed run: the exit code and the message for stderr.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OracleDisagreement(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

fn verification_failure(message: String) -> Failure {
    Failure { code: 1, message }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

/// Parses `argv` (program name first), runs the command, and returns the
/// exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let msg = e.render().to_string();
                    let first = msg
                        .lines()
                        .next()
                        .unwrap_or("usage error")
                        .trim_start_matches("error: ");
                    report(err, first);
                    2
                }
            };
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(f) => {
            report(err, &f.message);
            return f.code;
        }
    };
    let mut buf: Vec<u8> = Vec::new();
    let result = pool.install(|| execute(&cli.command, &mut buf));
    if let Err(e) = out.write_all(&buf).and_then(|_| out.flush()) {
        report(err, &e.to_string());
        return 2;
    }
    match result {
        Ok(code) => code,
        Err(f) => {
            report(err, &f.message);
            f.code
        }
    }
}

fn report(err: &mut dyn Write, message: &str) {
    let _ = writeln!(err, "{}", json!({ "error": message }));
}

fn thread_pool() -> std::result::Result<rayon::ThreadPool, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            usage(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))
        })?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| usage(format!("cannot start thread pool: {e}")))
}

fn emit(out: &mut dyn Write, v: &Value) -> std::result::Result<(), Failure> {
    writeln!(out, "{v}").map_err(|e| Failure::from(Error::Io(e)))
}

fn execute(cmd: &Command, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    match cmd {
        Command::Classify {
            fractal,
            dir,
            uv,
            irrational,
            no_oracle,
            json,
        } => {
            let c = classify(
                *fractal,
                dir.as_ref(),
                uv.as_deref(),
                *irrational,
                *no_oracle,
            )?;
            if *json {
                emit(out, &c.to_json())?;
            } else {
                let what = match (&c.reduced, &c.uv) {
                    (Some(r), _) => format!("direction {r}"),
                    (None, Some(uv)) => format!("parameters {uv}"),
                    (None, None) => "irrational parameters".to_string(),
                };
                writeln!(
                    out,
                    "{fractal} {what}: {} ({})",
                    c.verdict.as_str(),
                    c.rule.name()
                )
                .map_err(|e| Failure::from(Error::Io(e)))?;
            }
            Ok(0)
        }
        Command::Render {
            fractal,
            dir,
            depth,
            res,
            out: path,
        } => {
            let (raster, proj) = render_direction(*fractal, dir, *depth, *res)?;
            raster.write_pgm(path)?;
            let (covered, total) = raster.coverage_counts();
            let point = crate::render::CoveragePoint {
                depth: *depth,
                covered,
                total,
            };
            emit(
                out,
                &json!({
                    "fractal": fractal.name(),
                    "direction": vec3_value(dir),
                    "depth": depth,
                    "resolution": res,
                    "out": path.display().to_string(),
                    "covered_pixels": covered,
                    "region_pixels": total,
                    "coverage": point.fraction_string(),
                    "collisions": proj.collisions.len(),
                }),
            )?;
            Ok(0)
        }
        Command::Coverage {
            fractal,
            dir,
            max_depth,
            res,
        } => {
            if *max_depth < 2 {
                return Err(usage("max-depth must be at least 2"));
            }
            let map = ProjectionMap::for_family((*fractal).into(), dir.clone())?;
            let proj = project_points(&canonical((*fractal).into()), &map);
            let series = coverage_series_points(proj.k, &proj.points, *max_depth, *res)?;
            write!(out, "{}", series.to_csv()).map_err(|e| Failure::from(Error::Io(e)))?;
            Ok(0)
        }
        Command::VerifyLemma {
            which,
            window,
            params,
            dump,
        } => {
            let report = verify_lemma(*which, *window, *params, dump.as_deref())?;
            let mismatches = report["mismatches"].as_u64().unwrap_or(0);
            emit(out, &report)?;
            if mismatches > 0 {
                return Err(verification_failure(format!(
                    "{mismatches} mismatches between decider and closed form"
                )));
            }
            Ok(0)
        }
        Command::Oracle { k, digits_file } => {
            let text = std::fs::read_to_string(digits_file)?;
            let set = DigitSetFile::parse(&text)?;
            let report = oracle_report(*k, &set)?;
            emit(out, &report)?;
            Ok(0)
        }
        Command::Enumerate { degree } => {
            let report = congruence_classes(*degree)?;
            emit(out, &report.to_json())?;
            Ok(0)
        }
        Command::Probe {
            fractal,
            u,
            v,
            l,
            exact,
        } => {
            let u = real_param(u, *exact)?;
            let v = real_param(v, *exact)?;
            let w = probe_discreteness(*fractal, &u, &v, *l)?;
            emit(out, &w.to_json())?;
            Ok(0)
        }
    }
}

fn classify(
    f: Fractal,
    dir: Option<&IVec3>,
    uv: Option<&str>,
    irrational: bool,
    no_oracle: bool,
) -> std::result::Result<Classification, Failure> {
    if let Some(d) = dir {
        let direction = Direction::exact(d)?;
        let plane_parallel = matches!(&direction, Direction::Exact(r) if r.sum().is_zero());
        if no_oracle || plane_parallel {
            return Ok(classify_direction(f, &direction)?);
        }
        return Ok(cross_validate(f, d)?.classification);
    }
    let uv = uv.ok_or_else(|| usage("one of --dir or --uv is required"))?;
    let (u, v) = uv
        .split_once(',')
        .ok_or_else(|| usage(format!("expected u,v, got {uv:?}")))?;
    if irrational {
        let u = real_param(u, false)?;
        let v = real_param(v, false)?;
        return Ok(classify_direction(f, &Direction::real(u, v, true)?)?);
    }
    let u = parse_rat(u)?;
    let v = parse_rat(v)?;
    Ok(classify_uv(
        f,
        &UvInput::Real {
            u: RealParam::exact(u),
            v: RealParam::exact(v),
            irrational: false,
        },
    )?)
}

/// `sqrt(n)` is truncated to 128 fractional bits; a decimal with `d`
/// fractional digits carries error `10^−d` unless `exact`.
fn real_param(s: &str, exact: bool) -> Result<RealParam> {
    let t = s.trim();
    if let Some(inner) = t.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        let n: u64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad radicand in {t:?}")))?;
        return Ok(truncated_sqrt(n, 128));
    }
    if t.contains('/') {
        return Ok(RealParam::exact(parse_rat(t)?));
    }
    let (value, digits) = parse_decimal(t)?;
    if exact {
        return Ok(RealParam::exact(value));
    }
    Ok(RealParam {
        approx: value,
        error: Rat::new(BigInt::one(), pow(10, digits)),
    })
}

fn verify_lemma(
    which: LemmaWhich,
    window: u64,
    params: Option<(u32, u32)>,
    dump: Option<&std::path::Path>,
) -> std::result::Result<Value, Failure> {
    if window == 0 || window > 1 << 20 {
        return Err(usage(format!("window must be in 1..=2^20, got {window}")));
    }
    if let Some(dir) = dump {
        std::fs::create_dir_all(dir).map_err(Error::Io)?;
    }
    match which {
        LemmaWhich::Ds => {
            if params.is_some() {
                return Err(usage("--params applies only to t0 and h0"));
            }
            let digits = canonical(DigitFamily::SPrime).delta().points().to_vec();
            let pts = Window3::centered(window).points();
            let rows: Vec<(IVec3, bool, bool)> = pts
                .par_iter()
                .map(|p| {
                    let decided = decide_membership(2, &digits, p)?.is_member();
                    let closed = LemmaSetId::CS.contains3(p).expect("spatial set");
                    Ok((p.clone(), decided, closed))
                })
                .collect::<Result<_>>()?;
            let bad: Vec<&(IVec3, bool, bool)> = rows.iter().filter(|r| r.1 != r.2).collect();
            if let Some(dir) = dump {
                let members: Vec<Value> = rows
                    .iter()
                    .filter(|r| r.1)
                    .map(|r| vec3_value(&r.0))
                    .collect();
                let doc = json!({ "window": window, "points": members });
                std::fs::write(dir.join("ds.json"), format!("{doc}\n")).map_err(Error::Io)?;
            }
            Ok(json!({
                "which": "ds",
                "window": window,
                "closed_form": LemmaSetId::CS.to_string(),
                "checked": rows.len(),
                "members": rows.iter().filter(|r| r.1).count(),
                "mismatches": bad.len(),
                "first_mismatches": bad.iter().take(10).map(|r| json!({
                    "point": vec3_value(&r.0), "decider": r.1, "closed_form": r.2,
                })).collect::<Vec<_>>(),
            }))
        }
        LemmaWhich::T0 | LemmaWhich::H0 => {
            let (fractal, family, name) = if which == LemmaWhich::T0 {
                (Fractal::T, DigitFamily::TPrime, "t0")
            } else {
                (Fractal::H, DigitFamily::HPrime, "h0")
            };
            let heights = match params {
                Some((m, n)) if n >= 1 => vec![pow(3, m) * (pow(3, n) - BigInt::one())],
                Some(_) => return Err(usage("n must be at least 1")),
                None => lemma_heights(&[0, 1, 2], &[1, 2, 3]),
            };
            let digits = canonical(family).delta().points().to_vec();
            let win = Window2::centered(window);
            let mut total = 0usize;
            let mut entries = Vec::new();
            for z in &heights {
                let form = SliceClosedForm::for_height(fractal, z)
                    .expect("lemma heights have closed forms");
                let s = slice(3, &digits, z, &win)?;
                let pts = win.points();
                let bad: Vec<Value> = pts
                    .iter()
                    .filter(|p| s.contains(p) != form.contains(p))
                    .map(|p| json!({ "point": vec2_value(p), "decider": s.contains(p) }))
                    .collect();
                total += bad.len();
                if let Some(dir) = dump {
                    let path = dir.join(format!("{name}_z{z}.json"));
                    std::fs::write(path, format!("{}\n", s.to_json())).map_err(Error::Io)?;
                }
                entries.push(json!({
                    "z": int_value(z),
                    "closed_form": form.describe(),
                    "members": s.points.len(),
                    "mismatches": bad.len(),
                    "first_mismatches": bad.into_iter().take(10).collect::<Vec<_>>(),
                }));
            }
            Ok(json!({
                "which": name,
                "window": window,
                "checked": heights.len() * win.points().len(),
                "heights": entries,
                "mismatches": total,
            }))
        }
    }
}

fn oracle_report(k: u32, set: &AnyDigitSet) -> std::result::Result<Value, Failure> {
    match set {
        AnyDigitSet::Plane(d) => {
            if d.k() != k {
                return Err(usage(format!(
                    "--k {k} does not match the file's k = {}",
                    d.k()
                )));
            }
            let (scale, ints) = d.integerize();
            let zero = has_nontrivial_zero_expansion(&ints)?;
            let residue = is_complete_residue_system(&ints)?;
            if residue && zero.exists() {
                return Err(Error::OracleDisagreement(
                    "complete residue system yet a zero expansion exists".into(),
                )
                .into());
            }
            let verdict = if zero.exists() { "null" } else { "positive" };
            let witness = zero.word.as_ref().map_or(Value::Null, |w| {
                Value::Array(w.iter().map(vec2_value).collect())
            });
            Ok(json!({
                "k": k,
                "dim": 2,
                "scale": int_value(&scale),
                "verdict": verdict,
                "complete_residue_system": residue,
                "witness": witness,
                "states": zero.states,
            }))
        }
        AnyDigitSet::Space(d) => {
            if d.k() != k {
                return Err(usage(format!(
                    "--k {k} does not match the file's k = {}",
                    d.k()
                )));
            }
            let cube = is_imaginary_cube_digit_set(d).unwrap_or(false);
            let square = if cube {
                crate::digits::to_latin_square(d)
                    .map(|h| json!(h.rows()))
                    .unwrap_or(Value::Null)
            } else {
                Value::Null
            };
            Ok(json!({
                "k": k,
                "dim": 3,
                "imaginary_cube": cube,
                "latin_square": square,
            }))
        }
    }
}
