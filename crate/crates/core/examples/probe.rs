//! Searches for short lattice vectors under the projection with irrational
//! parameters (sqrt 2, sqrt 3) by pigeonholing.

use icube::classify::{classify_uv, probe_discreteness, truncated_sqrt, UvInput};
use icube::digits::Fractal;

fn main() -> icube::Result<()> {
    let u = truncated_sqrt(2, 96);
    let v = truncated_sqrt(3, 96);
    for f in Fractal::ALL {
        let verdict = classify_uv(
            f,
            &UvInput::Real {
                u: u.clone(),
                v: v.clone(),
                irrational: true,
            },
        )?;
        println!(
            "{f}: {} ({})",
            verdict.verdict.as_str(),
            verdict.rule.name()
        );
        for l in [2, 4, 6, 8] {
            let w = probe_discreteness(f, &u, &v, l)?;
            println!(
                "  l = {l}: y = {} after {} samples, |phi(y)|^2 = {:.3e} (bound {:.3e}), in E: {:?}",
                w.y,
                w.samples,
                ratio(&w.norm_sq),
                ratio(&w.bound_sq),
                w.in_expansion_set
            );
        }
    }
    Ok(())
}

fn ratio(r: &icube::lattice::Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
