//! Classifies every reduced direction in a cube of integer vectors by three
//! independent routes and reports how many of each verdict were found.
//!
//! Usage: cargo run --release --example triangulate [bound]

use std::collections::BTreeMap;

use icube::classify::{cross_validate, Verdict};
use icube::digits::Fractal;
use icube::lattice::{reduce_direction, IVec3};
use rayon::prelude::*;

fn main() -> icube::Result<()> {
    let bound: i64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(6);
    let mut dirs = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                let v = IVec3::new(a, b, c);
                if v.is_zero() || v.sum() == 0.into() {
                    continue;
                }
                if reduce_direction(&v)? == v {
                    dirs.push(v);
                }
            }
        }
    }
    println!(
        "{} reduced directions with components in [-{bound}, {bound}]",
        dirs.len()
    );

    for f in Fractal::ALL {
        let results: Vec<_> = dirs.par_iter().map(|v| cross_validate(f, v)).collect();
        let mut tally: BTreeMap<&str, usize> = BTreeMap::new();
        for r in results {
            let cv = r?;
            *tally.entry(cv.classification.rule.name()).or_default() += 1;
            if cv.classification.verdict == Verdict::Null {
                *tally.entry("(null)").or_default() += 1;
            }
        }
        println!("{f}: all three routes agree; {tally:?}");
    }
    Ok(())
}
