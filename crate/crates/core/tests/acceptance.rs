//! Exit criteria. Runs every check and prints one PASS/FAIL line each.
//! With `ICUBE_ACCEPTANCE_STRICT=1` any FAIL makes the process exit nonzero.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use icube::classify::{
    classify_direction, cross_validate, integer_direction, nk_mk_1_positive, probe_discreteness,
    rotate_h, truncated_sqrt, Direction, Rule, Verdict,
};
use icube::digits::{canonical, DigitFamily, Fractal};
use icube::enumerate::{congruence_classes, latin_square_lower_bound, representative_digit_sets};
use icube::expansion::closed_form::{LemmaSetId, SliceClosedForm};
use icube::expansion::windows::{
    closed_form_view, decider_view, structural_defects, ReferenceWindow,
};
use icube::expansion::{decide_membership, lemma_heights, slice};
use icube::lattice::{reduce_direction, IVec3, Window2, Window3};
use icube::render::{coverage_series_points, project_points, ProjectionMap};

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    ensure(t.elapsed() < limit, || {
        format!("took {:.1?}, limit {limit:?}", t.elapsed())
    })
}

fn enumeration_counts() -> Outcome {
    let t = Instant::now();
    let expected = [(2, 2, 1), (3, 12, 2), (4, 576, 36), (5, 161_280, 3482)];
    let mut seen = Vec::new();
    for (k, squares, classes) in expected {
        let r = congruence_classes(k).map_err(|e| e.to_string())?;
        ensure(r.latin_squares == squares, || {
            format!(
                "k={k}: {} Latin squares, expected {squares}",
                r.latin_squares
            )
        })?;
        ensure(r.classes.len() == classes, || {
            format!("k={k}: {} classes, expected {classes}", r.classes.len())
        })?;
        ensure(r.orbit_total() == r.latin_squares, || {
            format!("k={k}: orbit sizes do not sum to the total")
        })?;
        let bound = latin_square_lower_bound(k);
        ensure(
            BigRational::from_integer(BigInt::from(squares)) > bound,
            || format!("k={k}: count below lower bound {bound}"),
        )?;
        seen.push(format!("{k}:{}", r.classes.len()));
    }
    within(t, Duration::from_secs(120))?;
    Ok(format!(
        "classes {} under {} in {:.1?}",
        seen.join(" "),
        "octahedral-48",
        t.elapsed()
    ))
}

fn spatial_window() -> Outcome {
    let t = Instant::now();
    let digits = canonical(DigitFamily::SPrime).delta().points().to_vec();
    let pts = Window3::centered(16).points();
    let mismatches: usize = pts
        .par_iter()
        .map(|p| {
            let decided = decide_membership(2, &digits, p)
                .expect("decider")
                .is_member();
            (decided != LemmaSetId::CS.contains3(p).unwrap()) as usize
        })
        .sum();
    ensure(pts.len() == 35_937, || format!("{} points", pts.len()))?;
    ensure(mismatches == 0, || format!("{mismatches} mismatches"))?;
    within(t, Duration::from_secs(30))?;
    Ok(format!(
        "{} points, 0 mismatches in {:.1?}",
        pts.len(),
        t.elapsed()
    ))
}

fn slice_windows() -> Outcome {
    let t = Instant::now();
    let win = Window2::centered(30);
    let heights = lemma_heights(&[0, 1, 2], &[1, 2, 3]);
    let mut checked = 0usize;
    for (f, fam) in [
        (Fractal::T, DigitFamily::TPrime),
        (Fractal::H, DigitFamily::HPrime),
    ] {
        let digits = canonical(fam).delta().points().to_vec();
        for z in &heights {
            let form = SliceClosedForm::for_height(f, z)
                .ok_or_else(|| format!("no closed form at z={z}"))?;
            let s = slice(3, &digits, z, &win).map_err(|e| e.to_string())?;
            let bad = win
                .points()
                .into_iter()
                .filter(|p| s.contains(p) != form.contains(p))
                .count();
            ensure(bad == 0, || {
                format!("{f} z={z}: {bad} mismatches against {}", form.describe())
            })?;
            checked += win.points().len();
        }
    }
    for w in ReferenceWindow::all() {
        let decided = decider_view(&w).map_err(|e| e.to_string())?;
        let closed = closed_form_view(&w).map_err(|e| e.to_string())?;
        ensure(decided == closed, || {
            format!("{} window: decider and closed forms differ", w.name)
        })?;
        let defects = structural_defects(&w, &decided);
        ensure(defects.is_empty(), || {
            format!("{} window: {}", w.name, defects.join("; "))
        })?;
    }
    within(t, Duration::from_secs(120))?;
    Ok(format!(
        "{} heights x 2 families, {checked} slice points, 3 reference windows in {:.1?}",
        heights.len(),
        t.elapsed()
    ))
}

fn triangulation() -> Outcome {
    let t = Instant::now();
    let mut dirs = Vec::new();
    for a in -6i64..=6 {
        for b in -6i64..=6 {
            for c in -6i64..=6 {
                let v = IVec3::new(a, b, c);
                if a + b + c == 0 {
                    continue;
                }
                if reduce_direction(&v).ok() == Some(v.clone()) {
                    dirs.push(v);
                }
            }
        }
    }
    let mut nulls = 0;
    for f in Fractal::ALL {
        let outcomes: Vec<_> = dirs
            .par_iter()
            .map(|v| cross_validate(f, v).map_err(|e| e.to_string()))
            .collect();
        for o in outcomes {
            if o?.classification.verdict == Verdict::Null {
                nulls += 1;
            }
        }
    }
    within(t, Duration::from_secs(300))?;
    Ok(format!(
        "{} directions x 3 fractals agree ({nulls} null) in {:.1?}",
        dirs.len(),
        t.elapsed()
    ))
}

fn mod3(n: &BigInt) -> i64 {
    let r = n.mod_floor(&BigInt::from(3));
    i64::try_from(r).unwrap()
}

// α ≡ β ≡ γ ≡ −(α+β+γ)/3 ≢ 0 (mod 3)
fn rotated_class(v: &IVec3) -> bool {
    let s = v.sum();
    if mod3(&s) != 0 {
        return false;
    }
    let third = -(s / BigInt::from(3));
    let t = mod3(&third);
    t != 0 && mod3(&v.x) == t && mod3(&v.y) == t && mod3(&v.z) == t
}

fn rotation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1c0b);
    let mut forward = 0;
    while forward < 1000 {
        let v = IVec3::new(
            rng.gen_range(-50i64..=50),
            rng.gen_range(-50i64..=50),
            rng.gen_range(-50i64..=50),
        );
        if mod3(&v.sum()) == 0 {
            continue;
        }
        let img = rotate_h(&v);
        let w = integer_direction(&img).map_err(|e| e.to_string())?;
        ensure(rotated_class(&w), || {
            format!("rotate_H{v} = {w} is not in the rotated class")
        })?;
        let back = rotate_h(&w);
        let u = integer_direction(&back).map_err(|e| e.to_string())?;
        let r = reduce_direction(&v).map_err(|e| e.to_string())?;
        ensure(u == r || u == -&r, || {
            format!("rotate_H twice sends {v} to {u}")
        })?;
        // exact involution on the rational image
        ensure(
            rotate_h_rat(&img) == [v.x.clone(), v.y.clone(), v.z.clone()],
            || format!("{v} is not fixed by two turns"),
        )?;
        let pos = classify_direction(Fractal::H, &Direction::exact(&w).unwrap()).unwrap();
        ensure(pos.rule == Rule::HRotated, || {
            format!("{w} classified {}", pos.rule.name())
        })?;
        forward += 1;
    }
    let mut backward = 0;
    while backward < 1000 {
        let v = IVec3::new(
            rng.gen_range(-50i64..=50),
            rng.gen_range(-50i64..=50),
            rng.gen_range(-50i64..=50),
        );
        if !rotated_class(&v) {
            continue;
        }
        let w = integer_direction(&rotate_h(&v)).map_err(|e| e.to_string())?;
        ensure(mod3(&w.sum()) != 0, || {
            format!("rotate_H{v} = {w} has 3 | a+b+c")
        })?;
        backward += 1;
    }
    Ok(format!(
        "{forward} forward, {backward} backward, involution exact"
    ))
}

fn rotate_h_rat(v: &[icube::lattice::Rat; 3]) -> [BigInt; 3] {
    let two = icube::lattice::Rat::from_integer(BigInt::from(2));
    let three = icube::lattice::Rat::from_integer(BigInt::from(3));
    let (a, b, c) = (&v[0], &v[1], &v[2]);
    let out = [
        (-a + &two * b + &two * c) / &three,
        (&two * a - b + &two * c) / &three,
        (&two * a + &two * b - c) / &three,
    ];
    out.map(|r| {
        assert!(r.is_integer());
        r.to_integer()
    })
}

fn residue_shortcut() -> Outcome {
    let reps = representative_digit_sets(4).map_err(|e| e.to_string())?;
    ensure(reps.len() == 36, || {
        format!("{} representatives", reps.len())
    })?;
    let mut passed = 0;
    for d in &reps {
        for n in 0..=2 {
            for m in 0..=2 {
                nk_mk_1_positive(d, &BigInt::from(n), &BigInt::from(m))
                    .map_err(|e| format!("{:?} along ({n}k, {m}k, 1): {e}", d.points()))?;
                passed += 1;
            }
        }
    }
    Ok(format!(
        "{passed}/{} complete residue systems",
        reps.len() * 9
    ))
}

const POSITIVE: [(Fractal, [i64; 3]); 12] = [
    (Fractal::S, [1, 0, 0]),
    (Fractal::S, [1, -1, 1]),
    (Fractal::S, [2, 1, 0]),
    (Fractal::S, [1, 2, 0]),
    (Fractal::T, [0, 0, 1]),
    (Fractal::T, [1, -1, 1]),
    (Fractal::T, [1, 1, 0]),
    (Fractal::H, [0, 1, 0]),
    (Fractal::H, [-1, 2, 2]),
    (Fractal::H, [1, 1, -5]),
    (Fractal::H, [4, 1, 1]),
    (Fractal::H, [1, -1, 1]),
];

const NULL: [(Fractal, [i64; 3]); 12] = [
    (Fractal::S, [1, 1, 0]),
    (Fractal::S, [1, 0, 1]),
    (Fractal::S, [0, 1, 1]),
    (Fractal::S, [1, 1, 2]),
    (Fractal::T, [1, 1, 1]),
    (Fractal::T, [1, 2, 0]),
    (Fractal::T, [0, 1, 2]),
    (Fractal::T, [1, -1, 3]),
    (Fractal::H, [1, 1, 1]),
    (Fractal::H, [1, 2, 0]),
    (Fractal::H, [2, 1, 0]),
    (Fractal::H, [1, -1, 3]),
];

const MIN_POSITIVE_COVERAGE: f64 = 0.05;
const MIN_POSITIVE_RATIO: f64 = 0.8;
const MAX_NULL_COVERAGE: f64 = 0.02;

fn coverage() -> Outcome {
    let t = Instant::now();
    let series = |f: Fractal, d: [i64; 3]| {
        let v = IVec3::new(d[0], d[1], d[2]);
        let map = ProjectionMap::for_family(f.into(), v).expect("not parallel");
        let proj = project_points(&canonical(f.into()), &map);
        coverage_series_points(f.k(), &proj.points, 8, 256).expect("rasterize")
    };
    let mut failures = Vec::new();
    for (f, d) in POSITIVE {
        let v = classify_direction(f, &Direction::exact(&IVec3::new(d[0], d[1], d[2])).unwrap())
            .unwrap();
        if v.verdict != Verdict::Positive {
            failures.push(format!("{f}{d:?} is not classified positive"));
        }
        let s = series(f, d);
        let (c6, c8) = (s.at(6).unwrap(), s.at(8).unwrap());
        if c8 < MIN_POSITIVE_COVERAGE || c8 / c6 < MIN_POSITIVE_RATIO {
            failures.push(format!(
                "positive {f}{d:?}: c8={c8:.4} c8/c6={:.3}",
                c8 / c6
            ));
        }
    }
    let mut null_max: f64 = 0.0;
    for (f, d) in NULL {
        let v = classify_direction(f, &Direction::exact(&IVec3::new(d[0], d[1], d[2])).unwrap())
            .unwrap();
        if v.verdict != Verdict::Null {
            failures.push(format!("{f}{d:?} is not classified null"));
        }
        let s = series(f, d);
        let (c4, c8) = (s.at(4).unwrap(), s.at(8).unwrap());
        null_max = null_max.max(c8);
        if c8 >= MAX_NULL_COVERAGE || c8 >= c4 {
            failures.push(format!("null {f}{d:?}: c4={c4:.4} c8={c8:.4}"));
        }
    }
    if t.elapsed() > Duration::from_secs(180) {
        failures.push(format!("took {:.1?}", t.elapsed()));
    }
    if failures.is_empty() {
        Ok(format!(
            "24 directions, max null coverage {null_max:.4}, in {:.1?}",
            t.elapsed()
        ))
    } else {
        Err(format!(
            "{} failing: {}",
            failures.len(),
            failures.join("; ")
        ))
    }
}

fn probe() -> Outcome {
    let u = truncated_sqrt(2, 64);
    let v = truncated_sqrt(3, 64);
    let mut runs = 0;
    for f in Fractal::ALL {
        for l in [2, 4, 6] {
            let w = probe_discreteness(f, &u, &v, l).map_err(|e| e.to_string())?;
            let again = probe_discreteness(f, &u, &v, l).map_err(|e| e.to_string())?;
            ensure(w == again, || format!("{f} l={l}: runs differ"))?;
            ensure(!w.y.is_zero(), || format!("{f} l={l}: zero witness"))?;
            ensure(w.norm_sq <= w.bound_sq, || {
                format!("{f} l={l}: |phi(y)|^2 = {} above bound", w.norm_sq)
            })?;
            let budget = BigInt::from(f.k()).pow(2 * l) + 1;
            ensure(BigInt::from(w.samples) <= budget, || {
                format!("{f} l={l}: {} samples", w.samples)
            })?;
            runs += 1;
        }
    }
    Ok(format!(
        "{runs} probes (k=2 via S, k=3 via T and H) found short nonzero witnesses"
    ))
}

fn run_cli(args: &[&str], threads: usize) -> Result<(Vec<u8>, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_icube"))
        .args(args)
        .env("ICUBE_THREADS", threads.to_string())
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.stdout, out.status.code().unwrap_or(-1)))
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .map(|rd| {
            rd.filter_map(|e| e.ok())
                .map(|e| {
                    (
                        e.file_name().to_string_lossy().into_owned(),
                        std::fs::read(e.path()).unwrap_or_default(),
                    )
                })
                .collect()
        })
        .unwrap_or_default();
    v.sort();
    v
}

/// stdout, exit code, rendered image, dumped files
type Run = (Vec<u8>, i32, Option<Vec<u8>>, Vec<(String, Vec<u8>)>);

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root = tmp.path();
    let digits = root.join("digits.json");
    std::fs::write(
        &digits,
        r#"{"k": 2, "dim": 2, "points": [[0,0],[1,0],[0,1],[1,1]]}"#,
    )
    .map_err(|e| e.to_string())?;
    let pgm = root.join("image.pgm");
    let dump = root.join("dump");
    let digits_s = digits.to_string_lossy().into_owned();
    let pgm_s = pgm.to_string_lossy().into_owned();
    let dump_s = dump.to_string_lossy().into_owned();
    let invocations: Vec<Vec<&str>> = vec![
        vec!["enumerate", "--degree", "4"],
        vec!["classify", "--fractal", "T", "--dir", "1,1,0", "--json"],
        vec!["classify", "--fractal", "H", "--dir", "1,1,-5", "--json"],
        vec!["classify", "--fractal", "S", "--dir", "1,1,0", "--json"],
        vec![
            "render",
            "--fractal",
            "S",
            "--dir",
            "1,-1,1",
            "--depth",
            "8",
            "--res",
            "512",
            "--out",
            &pgm_s,
        ],
        vec![
            "coverage",
            "--fractal",
            "T",
            "--dir",
            "1,1,0",
            "--max-depth",
            "6",
            "--res",
            "128",
        ],
        vec!["verify-lemma", "--which", "ds", "--window", "8"],
        vec![
            "verify-lemma",
            "--which",
            "h0",
            "--window",
            "12",
            "--dump",
            &dump_s,
        ],
        vec!["oracle", "--k", "2", "--digits-file", &digits_s],
        vec![
            "probe",
            "--fractal",
            "S",
            "--u",
            "sqrt(2)",
            "--v",
            "sqrt(3)",
            "--l",
            "4",
        ],
    ];
    let max = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .max(4);
    for args in &invocations {
        let mut seen: Option<Run> = None;
        for threads in [1, max, 1, max] {
            let _ = std::fs::remove_file(&pgm);
            let _ = std::fs::remove_dir_all(&dump);
            let (stdout, code) = run_cli(args, threads)?;
            ensure(code == 0, || {
                format!("`{}` exited with {code}", args.join(" "))
            })?;
            let artifact = std::fs::read(&pgm).ok();
            let dumped = read_dir_sorted(&dump);
            let run = (stdout, code, artifact, dumped);
            match &seen {
                None => seen = Some(run),
                Some(first) => ensure(first == &run, || {
                    format!("`{}` differs at {threads} threads", args.join(" "))
                })?,
            }
        }
    }
    Ok(format!(
        "{} invocations x 4 runs at 1 and {max} threads byte-identical",
        invocations.len()
    ))
}

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("enumeration counts", enumeration_counts),
        ("spatial expansion-set window", spatial_window),
        ("slice closed forms and reference windows", slice_windows),
        ("three-route classification agreement", triangulation),
        ("half-turn rotation classes", rotation),
        (
            "residue-system shortcut on degree-4 classes",
            residue_shortcut,
        ),
        ("coverage behavior", coverage),
        ("discreteness probe", probe),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} ({:.1?})", i + 1, t.elapsed());
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 && std::env::var("ICUBE_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
