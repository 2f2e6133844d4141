//! Reference windows of the primed expansion sets.
//!
//! Each window lists a few heights, a rectangle, and a handful of lattice
//! translations `t ∈ kE` whose translates `t + Δ(D)` lie inside `E`. A view
//! of the window records the members, the points of `kE` ("circled"), and
//! those translates, each computed two ways: by the exact decider and by the
//! closed forms.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::digits::{canonical, DigitFamily, Fractal};
use crate::error::Result;
use crate::lattice::{IVec2, IVec3};

use super::closed_form::{LemmaSetId, SliceClosedForm};
use super::decide_membership;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceWindow {
    pub name: &'static str,
    pub family: DigitFamily,
    pub x: (i64, i64),
    pub y: (i64, i64),
    pub zs: Vec<i64>,
    pub translations: Vec<[i64; 3]>,
}

impl ReferenceWindow {
    pub fn s_prime() -> Self {
        ReferenceWindow {
            name: "s-prime",
            family: DigitFamily::SPrime,
            x: (-2, 6),
            y: (-2, 6),
            zs: (-1..=4).collect(),
            translations: vec![[0, 0, 0], [0, 4, 2]],
        }
    }

    pub fn t_prime() -> Self {
        ReferenceWindow {
            name: "t-prime",
            family: DigitFamily::TPrime,
            x: (-14, 3),
            y: (-11, 3),
            zs: vec![-1, 0, 1, 2, 3, 6],
            translations: vec![[0, 0, 0], [3, -3, 3], [0, 3, 3], [-3, 0, 3], [-6, -6, 0]],
        }
    }

    pub fn h_prime() -> Self {
        ReferenceWindow {
            name: "h-prime",
            family: DigitFamily::HPrime,
            x: (-4, 16),
            y: (-4, 16),
            zs: vec![-1, 0, 1, 2, 3, 6],
            translations: vec![[0, 0, 0], [3, 12, 0], [9, 6, 3]],
        }
    }

    pub fn all() -> Vec<Self> {
        vec![Self::s_prime(), Self::t_prime(), Self::h_prime()]
    }

    pub fn k(&self) -> u32 {
        canonical(self.family).k()
    }

    /// Window points, ordered by height then lexicographically.
    pub fn points(&self) -> Vec<IVec3> {
        let mut out = Vec::new();
        for &z in &self.zs {
            for x in self.x.0..=self.x.1 {
                for y in self.y.0..=self.y.1 {
                    out.push(IVec3::from_i64([x, y, z]));
                }
            }
        }
        out
    }

    pub fn contains(&self, p: &IVec3) -> bool {
        let Some([x, y, z]) = p.to_i64() else {
            return false;
        };
        (self.x.0..=self.x.1).contains(&x)
            && (self.y.0..=self.y.1).contains(&y)
            && self.zs.contains(&z)
    }

    /// Closed-form membership in the expansion set of `Δ(D)`.
    pub fn closed_form_member(&self, p: &IVec3) -> bool {
        match self.family {
            DigitFamily::SPrime => LemmaSetId::CS.contains3(p).expect("spatial"),
            DigitFamily::TPrime | DigitFamily::HPrime => {
                let f = if self.family == DigitFamily::TPrime {
                    Fractal::T
                } else {
                    Fractal::H
                };
                SliceClosedForm::for_height(f, &p.z)
                    .expect("reference heights have closed forms")
                    .contains(&p.xy())
            }
            other => panic!("no reference window for {other:?}"),
        }
    }
}

/// A window evaluated along one route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowView {
    pub members: Vec<IVec3>,
    /// Window points lying in `kE`.
    pub circled: Vec<IVec3>,
    /// For each translation: the part of `t + Δ(D)` inside the window.
    pub translates: Vec<(IVec3, Vec<IVec3>)>,
}

fn view(w: &ReferenceWindow, member: impl Fn(&IVec3) -> Result<bool> + Sync) -> Result<WindowView> {
    let k = BigInt::from(w.k());
    let pts = w.points();
    let flags: Vec<(bool, bool)> = pts
        .par_iter()
        .map(|p| {
            let m = member(p)?;
            let c = match p.div_exact(&k) {
                Some(q) => member(&q)?,
                None => false,
            };
            Ok((m, c))
        })
        .collect::<Result<_>>()?;
    let members = pts
        .iter()
        .zip(&flags)
        .filter(|(_, f)| f.0)
        .map(|(p, _)| p.clone())
        .collect();
    let circled = pts
        .iter()
        .zip(&flags)
        .filter(|(_, f)| f.1)
        .map(|(p, _)| p.clone())
        .collect();
    let delta = canonical(w.family).delta();
    let translates = w
        .translations
        .iter()
        .map(|&t| {
            let t = IVec3::from_i64(t);
            let mut inside: Vec<IVec3> = delta
                .points()
                .iter()
                .map(|d| &t + d)
                .filter(|p| w.contains(p))
                .collect();
            inside.sort();
            (t, inside)
        })
        .collect();
    Ok(WindowView {
        members,
        circled,
        translates,
    })
}

/// The window as computed by the exact decider.
pub fn decider_view(w: &ReferenceWindow) -> Result<WindowView> {
    let digits = canonical(w.family).delta().points().to_vec();
    let k = w.k();
    view(w, |p| Ok(decide_membership(k, &digits, p)?.is_member()))
}

/// The window as given by the closed forms.
pub fn closed_form_view(w: &ReferenceWindow) -> Result<WindowView> {
    view(w, |p| Ok(w.closed_form_member(p)))
}

/// Structural checks on one view: every translation lies in `kE`, every
/// translate lies in `E`, and `kE ⊆ E`.
pub fn structural_defects(w: &ReferenceWindow, v: &WindowView) -> Vec<String> {
    let k = BigInt::from(w.k());
    let mut out = Vec::new();
    let digits = canonical(w.family).delta().points().to_vec();
    for (t, pts) in &v.translates {
        let in_ke = t
            .div_exact(&k)
            .map(|q| {
                decide_membership(w.k(), &digits, &q)
                    .map(|c| c.is_member())
                    .unwrap_or(false)
            })
            .unwrap_or(false);
        if !in_ke {
            out.push(format!("translation {t} is not in {k}E"));
        }
        for p in pts {
            if v.members.binary_search_by(|m| cmp_window(m, p)).is_err() {
                out.push(format!("{p} in {t} + delta is not in E"));
            }
        }
    }
    for c in &v.circled {
        if v.members.binary_search_by(|m| cmp_window(m, c)).is_err() {
            out.push(format!("circled point {c} is not in E"));
        }
    }
    out
}

// Window order: height first, then (x, y).
fn cmp_window(a: &IVec3, b: &IVec3) -> std::cmp::Ordering {
    (&a.z, &a.x, &a.y).cmp(&(&b.z, &b.x, &b.y))
}

/// The members of a view at one height, as planar points.
pub fn level(v: &WindowView, z: i64) -> Vec<IVec2> {
    let z = BigInt::from(z);
    v.members
        .iter()
        .filter(|p| p.z == z)
        .map(IVec3::xy)
        .collect()
}
