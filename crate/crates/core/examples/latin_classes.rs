//! Counts Latin squares and cube congruence classes for each degree.
//!
//! `cargo run --release --example latin_classes [max_degree]`

use std::time::Instant;

use icube::enumerate::{congruence_classes_under, latin_square_lower_bound, SymmetryGroup};

fn main() -> icube::Result<()> {
    let max: u32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    println!(
        "{:>2} {:>8} {:>14} {:>8} {:>8} {:>8}",
        "k", "squares", "lower bound", "classes", "proper", "secs"
    );
    for k in 2..=max {
        let t = Instant::now();
        let full = congruence_classes_under(k, SymmetryGroup::Octahedral)?;
        let proper = congruence_classes_under(k, SymmetryGroup::Rotations)?;
        let bound = latin_square_lower_bound(k);
        println!(
            "{:>2} {:>8} {:>14.2} {:>8} {:>8} {:>8.2}",
            k,
            full.latin_squares,
            num_traits::ToPrimitive::to_f64(&bound).unwrap_or(f64::NAN),
            full.classes.len(),
            proper.classes.len(),
            t.elapsed().as_secs_f64()
        );
        let mut sizes: Vec<usize> = full.classes.iter().map(|c| c.orbit_size).collect();
        sizes.sort_unstable();
        sizes.dedup();
        println!("   orbit sizes under the full group: {sizes:?}");
    }
    Ok(())
}
