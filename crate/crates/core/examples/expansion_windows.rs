//! Exact membership in expansion sets: a few certified expansions, and the
//! levels of the reference windows drawn as text.
//!
//! Usage: cargo run --example expansion_windows

use icube::digits::{canonical, DigitFamily, Fractal};
use icube::expansion::closed_form::SliceClosedForm;
use icube::expansion::decide_membership;
use icube::expansion::windows::{
    closed_form_view, decider_view, level, structural_defects, ReferenceWindow,
};
use icube::lattice::{IVec2, IVec3};

fn main() -> icube::Result<()> {
    let digits = canonical(DigitFamily::TPrime).delta().points().to_vec();
    for p in [[5, -3, 2], [2, 2, 1], [-30, -28, 2]] {
        let p = IVec3::from_i64(p);
        let cert = decide_membership(3, &digits, &p)?;
        match &cert.word {
            Some(word) => {
                let w: Vec<String> = word.iter().map(ToString::to_string).collect();
                println!("{p} = sum 3^j d_j with d = {}", w.join(" "));
            }
            None => println!(
                "{p} has no expansion ({} states searched)",
                cert.visited.len()
            ),
        }
    }

    for w in ReferenceWindow::all() {
        let view = decider_view(&w)?;
        println!();
        println!("{} window, x in {:?}, y in {:?}", w.name, w.x, w.y);
        println!(
            "  agrees with closed forms: {}",
            view == closed_form_view(&w)?
        );
        println!(
            "  structural defects: {}",
            structural_defects(&w, &view).len()
        );
        for &z in w.zs.iter().take(3) {
            let members = level(&view, z);
            let fractal = match w.family {
                DigitFamily::HPrime => Fractal::H,
                _ => Fractal::T,
            };
            let form = match w.family {
                DigitFamily::SPrime => None,
                _ => SliceClosedForm::for_height(fractal, &z.into()),
            };
            println!(
                "  z = {z}{}",
                form.map(|f| format!(": {}", f.describe()))
                    .unwrap_or_default()
            );
            for y in (w.y.0..=w.y.1).rev() {
                let row: String = (w.x.0..=w.x.1)
                    .map(|x| {
                        if members.contains(&IVec2::new(x, y)) {
                            '#'
                        } else {
                            '.'
                        }
                    })
                    .collect();
                println!("    {row}");
            }
        }
    }
    Ok(())
}
