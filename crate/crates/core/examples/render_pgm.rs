//! Renders the projection of a fractal along a direction to a PGM file.
//!
//! Usage: cargo run --release --example render_pgm [S|H|T] [a,b,c] [depth] [res] [out.pgm]

use icube::digits::Fractal;
use icube::lattice::IVec3;
use icube::render::render_direction;

fn main() -> icube::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let fractal: Fractal = args.first().map_or("T", String::as_str).parse()?;
    let dir: Vec<i64> = args
        .get(1)
        .map_or("1,1,0", String::as_str)
        .split(',')
        .map(|s| s.trim().parse().expect("integer component"))
        .collect();
    let depth = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(7);
    let res = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(384);
    let out = args
        .get(4)
        .cloned()
        .unwrap_or_else(|| format!("{fractal}_{}_{}_{}.pgm", dir[0], dir[1], dir[2]));

    let (raster, digits) =
        render_direction(fractal, &IVec3::new(dir[0], dir[1], dir[2]), depth, res)?;
    raster.write_pgm(out.as_ref())?;
    println!(
        "{fractal} along ({}, {}, {}), depth {depth}, {res} px -> {out}",
        dir[0], dir[1], dir[2]
    );
    println!(
        "coverage {:.4}, {} projected digits",
        raster.coverage(),
        digits.points.len()
    );
    if digits.has_collisions() {
        println!("digits collide: the projection has measure zero");
    }
    Ok(())
}
