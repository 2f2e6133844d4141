//! Coverage of projected images across depths for a list of directions,
//! next to the exact classification of each direction.
//!
//! Usage: cargo run --release --example coverage_survey [resolution]

use icube::classify::{classify_direction, Direction};
use icube::digits::Fractal;
use icube::lattice::IVec3;
use icube::render::{coverage_series_points, project_points, ProjectionMap};

const DIRECTIONS: &[(Fractal, [i64; 3])] = &[
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

fn main() -> icube::Result<()> {
    let res: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(256);
    println!("fractal direction verdict   c(4)     c(6)     c(7)     c(8)     c8/c6");
    for (f, [a, b, c]) in DIRECTIONS {
        let v = IVec3::new(*a, *b, *c);
        let class = classify_direction(*f, &Direction::exact(&v)?)?;
        let map = ProjectionMap::for_family((*f).into(), v.clone())?;
        let proj = project_points(&f.digit_set(), &map);
        let s = coverage_series_points(f.k(), &proj.points, 8, res)?;
        let c = |d| s.at(d).unwrap();
        println!(
            "{f}       {:<9} {:<9} {:.6} {:.6} {:.6} {:.6} {:.3}",
            v.to_string(),
            class.verdict.as_str(),
            c(4),
            c(6),
            c(7),
            c(8),
            c(8) / c(6)
        );
    }
    Ok(())
}
