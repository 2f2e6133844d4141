//! The canonical digit sets of S, H and T, their difference sets, and the
//! Latin squares behind the imaginary-cube property.

use icube::digits::{
    canonical, is_imaginary_cube_digit_set, normalize_to_grid, to_latin_square, DigitFamily,
    Fractal,
};

fn main() -> icube::Result<()> {
    for f in Fractal::ALL {
        let d = f.digit_set();
        let pts: Vec<String> = d.points().iter().map(ToString::to_string).collect();
        println!("{f}: k = {}, D = {{{}}}", f.k(), pts.join(", "));
        println!("  |D - D| = {}", d.delta().len());
        println!(
            "  imaginary cube digit set: {}",
            is_imaginary_cube_digit_set(&d)?
        );
        let h = to_latin_square(&normalize_to_grid(&d)?)?;
        for row in h.rows() {
            println!("    {row}");
        }
        let primed = f.primed();
        println!("  primed set has |D' - D'| = {}", primed.delta().len());
    }
    let sp = canonical(DigitFamily::SPrime);
    println!(
        "S' spans a tetrahedron, imaginary cube: {}",
        is_imaginary_cube_digit_set(&sp)?
    );
    Ok(())
}
