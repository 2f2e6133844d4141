//! Radix expansion sets `E(k, D) = { Σ_j k^j d_j : d_j ∈ D }` over lattice
//! digit sets.
//!
//! Two independent routes compute the same sets: forward iteration of
//! `E(t) = k E(t−1) + D` (pruned to what can still reach a window) and the
//! reverse digit-peeling graph search in [`decide_membership`]. The closed
//! forms in [`closed_form`] serve as a third, purely arithmetic route.

pub mod closed_form;
mod engine;
pub mod windows;

pub use closed_form::{lemma_set_member, LemmaSetId, SliceClosedForm, SliceShape};
pub use engine::{LatticePoint, Vector};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::digits::DigitSet2;
use crate::error::{Error, Result};
use crate::json::{int_value, vec2_value};
use crate::lattice::{pow, IVec2, IVec3, Window2, Window3};
use engine::{shrink, SearchOutcome};

/// Largest radix for which the machine-integer kernels are used.
const SMALL_RADIX: u32 = 1 << 10;

/// A finite region of the lattice.
pub trait Region<V> {
    fn contains(&self, p: &V) -> bool;
    /// Smallest `R ≥ 0` with the region inside `{‖p‖∞ ≤ R}`.
    fn radius(&self) -> BigInt;
}

impl Region<IVec2> for Window2 {
    fn contains(&self, p: &IVec2) -> bool {
        Window2::contains(self, p)
    }
    fn radius(&self) -> BigInt {
        Window2::radius(self)
    }
}

impl Region<IVec3> for Window3 {
    fn contains(&self, p: &IVec3) -> bool {
        Window3::contains(self, p)
    }
    fn radius(&self) -> BigInt {
        Window3::radius(self)
    }
}

/// A finite piece of an expansion set, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionSet<V> {
    pub k: u32,
    pub digits: Vec<V>,
    /// Number of digits used (for a stabilized set, the step count at which
    /// the iteration became stationary).
    pub depth: u32,
    pub points: Vec<V>,
}

impl<V: Ord> ExpansionSet<V> {
    pub fn contains(&self, p: &V) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn prepare<V: Vector>(k: u32, digits: &[V]) -> Result<Vec<V>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "radix must be at least 2, got {k}"
        )));
    }
    if digits.is_empty() {
        return Err(Error::InvalidDigitSet("empty digit set".into()));
    }
    let mut d = digits.to_vec();
    d.sort();
    d.dedup();
    Ok(d)
}

type SmallPair<V> = (Vec<<V as Vector>::Small>, Vec<<V as Vector>::Small>);

fn small_problem<V: Vector>(k: u32, digits: &[V], extra: &[V]) -> Option<SmallPair<V>> {
    if k > SMALL_RADIX {
        return None;
    }
    Some((shrink(digits)?, shrink(extra)?))
}

fn widen<V: Vector>(points: Vec<V::Small>) -> Vec<V> {
    points.iter().map(V::from_small).collect()
}

/// `E(k, digits, t) ∩ window`, exactly.
///
/// A point that still has `j` digits to receive can only land in a window of
/// radius `R` if its norm is at most `⌊R/k^j⌋ + ⌊M/(k−1)⌋ + 1`, where `M` is
/// the largest digit norm; everything else is dropped as soon as it appears.
pub fn iterate_expansion<V: Vector, W: Region<V>>(
    k: u32,
    digits: &[V],
    t: u32,
    window: &W,
) -> Result<ExpansionSet<V>> {
    let digits = prepare(k, digits)?;
    let r = window.radius();
    let tail = engine::max_norm(&digits) / BigInt::from(k - 1);
    let bound = |j: u32| -> BigInt { &r / pow(k, j) + &tail + 1 };

    let raw: Vec<V> = match small_problem(k, &digits, &[]) {
        Some((small, _)) if bound(0) < BigInt::from(engine::SMALL_LIMIT) => {
            let pts =
                engine::iterate_pruned(k, &small, t, |j| bound(j).to_i64().unwrap_or(i64::MAX));
            widen(pts)
        }
        _ => engine::iterate_pruned(k, &digits, t, bound),
    };
    let points = raw.into_iter().filter(|p| window.contains(p)).collect();
    Ok(ExpansionSet {
        k,
        digits,
        depth: t,
        points,
    })
}

/// `E(k, digits) ∩ window`, by iterating to a certified fixed point.
///
/// Every prefix of an expansion that lands in the window stays inside the
/// box `‖e‖∞ ≤ R + ⌊M/(k−1)⌋`, so iterating `P ← (kP + D) ∩ box` from `{0}`
/// until it stops changing yields every window point of `E`. The iteration
/// also runs at least `⌈log_k R⌉ + ⌈log_k(M/(k−1) + 1)⌉ + 2` steps.
pub fn stable_expansion<V: Vector, W: Region<V>>(
    k: u32,
    digits: &[V],
    window: &W,
) -> Result<ExpansionSet<V>> {
    let digits = prepare(k, digits)?;
    if !digits.iter().any(LatticePoint::is_origin) {
        return Err(Error::InvalidDigitSet(
            "stabilization needs the zero vector among the digits".into(),
        ));
    }
    let r = window.radius();
    let m = engine::max_norm(&digits);
    let km1 = BigInt::from(k - 1);
    let tail = &m / &km1;
    let tail_ceil = (&m + &km1 - 1) / &km1;
    let bound = &r + &tail;
    let min_depth = engine::ceil_log(k, &r) + engine::ceil_log(k, &(tail_ceil + 1)) + 2;

    let (raw, depth): (Vec<V>, u32) = match small_problem(k, &digits, &[]) {
        Some((small, _)) if bound < BigInt::from(engine::SMALL_LIMIT) => {
            let b = bound.to_i64().expect("bounded");
            let (pts, depth) = engine::iterate_to_fixpoint(k, &small, &b, min_depth);
            (widen(pts), depth)
        }
        _ => engine::iterate_to_fixpoint(k, &digits, &bound, min_depth),
    };
    let points = raw.into_iter().filter(|p| window.contains(p)).collect();
    Ok(ExpansionSet {
        k,
        digits,
        depth,
        points,
    })
}

/// Outcome of an exact membership query `target ∈ E(k, D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipCertificate<V> {
    pub k: u32,
    pub target: V,
    /// Expansion word `d_0, d_1, …` (little-endian) when the target is a member.
    pub word: Option<Vec<V>>,
    /// When not a member: every state reachable from the target, none of
    /// which is the origin.
    pub visited: Vec<V>,
}

impl<V: Vector> MembershipCertificate<V> {
    pub fn is_member(&self) -> bool {
        self.word.is_some()
    }

    /// Re-evaluates `Σ k^j d_j` and compares it with the target.
    pub fn verify(&self) -> bool {
        match &self.word {
            Some(word) => radix_sum(self.k, word) == self.target,
            None => !self.visited.iter().any(LatticePoint::is_origin),
        }
    }
}

/// `Σ_j k^j w_j`.
pub fn radix_sum<V: LatticePoint>(k: u32, word: &[V]) -> V {
    word.iter()
        .rev()
        .fold(V::origin(), |acc, d| acc.times(k).plus(d))
}

/// Exact membership in `E(k, D)` by reverse digit peeling.
///
/// States `r` start at the target and move to `(r − d)/k` whenever that is a
/// lattice point; the target is a member iff the origin is reachable. Any
/// state with `‖r‖∞ > M/(k−1)` strictly shrinks, so the search is finite.
pub fn decide_membership<V: Vector>(
    k: u32,
    digits: &[V],
    target: &V,
) -> Result<MembershipCertificate<V>> {
    let digits = prepare(k, digits)?;
    let outcome = match small_problem(k, &digits, std::slice::from_ref(target)) {
        Some((small, z)) => match engine::membership(k, &small, &z[0]) {
            SearchOutcome::Found(w) => SearchOutcome::Found(widen(w)),
            SearchOutcome::Exhausted(v) => SearchOutcome::Exhausted(widen(v)),
        },
        None => engine::membership(k, &digits, target),
    };
    let (word, visited) = match outcome {
        SearchOutcome::Found(w) => (Some(w), Vec::new()),
        SearchOutcome::Exhausted(v) => (None, v),
    };
    Ok(MembershipCertificate {
        k,
        target: target.clone(),
        word,
        visited,
    })
}

/// Result of the search for a nontrivial radix expansion of zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroExpansion<V> {
    pub k: u32,
    /// A word over the digits, not all zero, with `Σ k^j w_j = 0`.
    pub word: Option<Vec<V>>,
    /// Number of states explored when no word exists.
    pub states: usize,
}

impl<V> ZeroExpansion<V> {
    pub fn exists(&self) -> bool {
        self.word.is_some()
    }
}

/// Searches for a nonzero word over `digits` whose radix sum is zero.
pub fn find_zero_expansion<V: Vector>(k: u32, digits: &[V]) -> Result<ZeroExpansion<V>> {
    let digits = prepare(k, digits)?;
    let outcome = match small_problem(k, &digits, &[]) {
        Some((small, _)) => match engine::zero_cycle(k, &small) {
            SearchOutcome::Found(w) => SearchOutcome::Found(widen(w)),
            SearchOutcome::Exhausted(v) => SearchOutcome::Exhausted(widen(v)),
        },
        None => engine::zero_cycle(k, &digits),
    };
    Ok(match outcome {
        SearchOutcome::Found(w) => ZeroExpansion {
            k,
            word: Some(w),
            states: 0,
        },
        SearchOutcome::Exhausted(v) => ZeroExpansion {
            k,
            word: None,
            states: v.len(),
        },
    })
}

/// Does zero have a nontrivial `(k, Δ(D))`-expansion? For an integral
/// planar digit set this holds exactly when the attractor of `(k, D)` is a
/// Lebesgue null set.
pub fn has_nontrivial_zero_expansion(d: &DigitSet2) -> Result<ZeroExpansion<IVec2>> {
    let pts = d.integer_points()?;
    let delta = crate::digits::DeltaSet::from_points(d.k(), &pts);
    find_zero_expansion(d.k(), delta.points())
}

/// Are the digits pairwise incongruent modulo `kℤ × kℤ`, covering every class?
pub fn is_complete_residue_system(d: &DigitSet2) -> Result<bool> {
    let pts = d.integer_points()?;
    let k = BigInt::from(d.k());
    let mut residues: Vec<(BigInt, BigInt)> = pts
        .iter()
        .map(|p| (mod_floor(&p.x, &k), mod_floor(&p.y, &k)))
        .collect();
    residues.sort();
    residues.dedup();
    Ok(residues.len() == pts.len() && BigInt::from(residues.len()) == &k * &k)
}

fn mod_floor(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a % m;
    if r.is_negative() {
        r + m
    } else {
        r
    }
}

/// The slice `{ (x, y) ∈ window : (x, y, z) ∈ E(k, D) }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceReport {
    pub z: BigInt,
    pub window: Window2,
    pub points: Vec<IVec2>,
}

impl SliceReport {
    pub fn contains(&self, p: &IVec2) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "z": int_value(&self.z),
            "window": [vec2_value(self.window.lo()), vec2_value(self.window.hi())],
            "points": self.points.iter().map(vec2_value).collect::<Vec<_>>(),
        })
    }
}

/// Computes a slice with the exact decider, one query per window point.
/// Queries run in parallel; the result is in lexicographic order.
pub fn slice(k: u32, digits: &[IVec3], z: &BigInt, window: &Window2) -> Result<SliceReport> {
    let digits = prepare(k, digits)?;
    let candidates = window.points();
    let flags: Vec<bool> = candidates
        .par_iter()
        .map(|p| decide_membership(k, &digits, &p.with_z(z)).map(|c| c.is_member()))
        .collect::<Result<_>>()?;
    let points = candidates
        .into_iter()
        .zip(flags)
        .filter_map(|(p, keep)| keep.then_some(p))
        .collect();
    Ok(SliceReport {
        z: z.clone(),
        window: window.clone(),
        points,
    })
}

/// Heights `3^n` for `n < count` and `3^m(3^n − 1)` for the given grids.
pub fn lemma_heights(ms: &[u32], ns: &[u32]) -> Vec<BigInt> {
    let mut zs = vec![BigInt::zero()];
    for &n in ns.iter().chain(std::iter::once(&0)) {
        zs.push(pow(3, n));
    }
    for &m in ms {
        for &n in ns {
            if n > 0 {
                zs.push(pow(3, m) * (pow(3, n) - BigInt::one()));
            }
        }
    }
    zs.sort();
    zs.dedup();
    zs
}
