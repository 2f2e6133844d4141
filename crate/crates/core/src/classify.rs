//! Positive-measure classification of projected fractal imaginary cubes.
//!
//! Three routes reach a verdict for a rational direction `(a, b, c)`:
//! arithmetic on `(a, b, c)` itself, arithmetic on the parameters `(p, q, r)`
//! of the projected planar digit set, and the zero-expansion search over the
//! differenced projected digit set. [`cross_validate`] runs all three.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::digits::{canonical, is_imaginary_cube_digit_set, DigitFamily, DigitSet3, Fractal};
use crate::error::{Error, Result};
use crate::expansion::{
    has_nontrivial_zero_expansion, is_complete_residue_system, LemmaSetId, SliceClosedForm,
};
use crate::json::{int_value, vec2_value, vec3_value};
use crate::lattice::{gcd3, pow, rat_int, rat_string, reduce_direction, IVec2, IVec3, Rat};
use crate::render::{project_digit_set, project_points, PlaneConvention, ProjectionMap};

/// An approximate real number: the true value lies within `error` of
/// `approx`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealParam {
    pub approx: Rat,
    pub error: Rat,
}

impl RealParam {
    pub fn exact(v: Rat) -> Self {
        RealParam {
            approx: v,
            error: Rat::zero(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.error.is_zero()
    }
}

/// Largest error accepted for a value declared irrational.
pub fn max_irrational_error() -> Rat {
    Rat::new(BigInt::one(), pow(2, 64))
}

/// A projection direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Integer direction, kept gcd-reduced with its first nonzero entry
    /// positive.
    Exact(IVec3),
    /// Planar family parameters given numerically. When `irrational` is
    /// false the approximations are taken as exact rationals.
    Real {
        u: RealParam,
        v: RealParam,
        irrational: bool,
    },
}

impl Direction {
    pub fn exact(v: &IVec3) -> Result<Self> {
        Ok(Direction::Exact(reduce_direction(v)?))
    }

    pub fn real(u: RealParam, v: RealParam, irrational: bool) -> Result<Self> {
        if irrational {
            let limit = max_irrational_error();
            if u.error > limit || v.error > limit {
                return Err(Error::InsufficientPrecision(
                    "irrational parameters need an error bound of at most 2^-64".into(),
                ));
            }
        }
        Ok(Direction::Real { u, v, irrational })
    }
}

/// Reduced parameters `u = p/r`, `v = q/r` with `r > 0`, `gcd(p, q, r) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UVParams {
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
}

impl UVParams {
    pub fn new(p: BigInt, q: BigInt, r: BigInt) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::InvalidArgument("r must be nonzero".into()));
        }
        let g = gcd3(&p, &q, &r);
        let s = if r.is_negative() { -g } else { g };
        Ok(UVParams {
            p: p / &s,
            q: q / &s,
            r: r / &s,
        })
    }

    pub fn from_uv(u: &Rat, v: &Rat) -> Self {
        let r = u.denom().lcm(v.denom());
        let p = u.numer() * (&r / u.denom());
        let q = v.numer() * (&r / v.denom());
        UVParams::new(p, q, r).expect("positive denominator")
    }

    pub fn u(&self) -> Rat {
        Rat::new(self.p.clone(), self.r.clone())
    }

    pub fn v(&self) -> Rat {
        Rat::new(self.q.clone(), self.r.clone())
    }

    pub fn negated(&self) -> Self {
        UVParams {
            p: -&self.p,
            q: -&self.q,
            r: self.r.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "p": int_value(&self.p), "q": int_value(&self.q), "r": int_value(&self.r) })
    }
}

impl fmt::Display for UVParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p, q, r) = ({}, {}, {})", self.p, self.q, self.r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Positive,
    Null,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Positive => "positive",
            Verdict::Null => "null",
        }
    }
}

/// Which criterion decided the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    OddSum,
    ThreeNondiv,
    HRotated,
    PlaneParallel,
    EvenSum,
    ThreeDiv,
    Irrational,
    ResidueShortcut,
}

impl Rule {
    pub fn verdict(self) -> Verdict {
        match self {
            Rule::OddSum | Rule::ThreeNondiv | Rule::HRotated | Rule::ResidueShortcut => {
                Verdict::Positive
            }
            Rule::PlaneParallel | Rule::EvenSum | Rule::ThreeDiv | Rule::Irrational => {
                Verdict::Null
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::OddSum => "OddSum",
            Rule::ThreeNondiv => "ThreeNondiv",
            Rule::HRotated => "HRotated",
            Rule::PlaneParallel => "PlaneParallel",
            Rule::EvenSum => "EvenSum",
            Rule::ThreeDiv => "ThreeDiv",
            Rule::Irrational => "Irrational",
            Rule::ResidueShortcut => "ResidueShortcut",
        }
    }
}

/// What the expansion oracle found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleEvidence {
    /// A nonzero word over `Δ(D)` of the integerized projected digit set
    /// whose radix sum vanishes.
    ZeroExpansion { word: Vec<IVec2> },
    /// Two digits project to the same point.
    DigitCollision { first: IVec3, second: IVec3 },
    /// The search visited this many states without finding a zero word.
    Exhausted { states: usize },
    /// The projected digits form a complete residue system mod `kℤ²`.
    CompleteResidueSystem,
}

impl OracleEvidence {
    pub fn verdict(&self) -> Verdict {
        match self {
            OracleEvidence::ZeroExpansion { .. } | OracleEvidence::DigitCollision { .. } => {
                Verdict::Null
            }
            OracleEvidence::Exhausted { .. } | OracleEvidence::CompleteResidueSystem => {
                Verdict::Positive
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let witness = match self {
            OracleEvidence::ZeroExpansion { word } => {
                Value::Array(word.iter().map(vec2_value).collect())
            }
            _ => Value::Null,
        };
        let mut v = json!({ "checked": true, "witness": witness });
        let kind = match self {
            OracleEvidence::ZeroExpansion { .. } => "zero-expansion",
            OracleEvidence::DigitCollision { first, second } => {
                v["collision"] = json!([vec3_value(first), vec3_value(second)]);
                "digit-collision"
            }
            OracleEvidence::Exhausted { states } => {
                v["states"] = json!(states);
                "exhausted"
            }
            OracleEvidence::CompleteResidueSystem => "complete-residue-system",
        };
        v["evidence"] = json!(kind);
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub fractal: Option<Fractal>,
    pub direction: Option<IVec3>,
    pub reduced: Option<IVec3>,
    pub verdict: Verdict,
    pub rule: Rule,
    pub uv: Option<UVParams>,
    pub oracle: Option<OracleEvidence>,
}

impl Classification {
    fn new(fractal: Option<Fractal>, rule: Rule) -> Self {
        Classification {
            fractal,
            direction: None,
            reduced: None,
            verdict: rule.verdict(),
            rule,
            uv: None,
            oracle: None,
        }
    }

    pub fn to_json(&self) -> Value {
        let opt3 = |v: &Option<IVec3>| v.as_ref().map_or(Value::Null, vec3_value);
        json!({
            "fractal": self.fractal.map_or(Value::Null, |f| json!(f.name())),
            "direction": opt3(&self.direction),
            "reduced": opt3(&self.reduced),
            "verdict": self.verdict.as_str(),
            "rule": self.rule.name(),
            "uv": self.uv.as_ref().map_or(Value::Null, UVParams::to_json),
            "oracle": self
                .oracle
                .as_ref()
                .map_or_else(|| json!({ "checked": false, "witness": null }), OracleEvidence::to_json),
        })
    }
}

fn mod3(n: &BigInt) -> BigInt {
    n.mod_floor(&BigInt::from(3))
}

/// `a ≡ b ≡ c ≡ −(a+b+c)/3 ≢ 0 (mod 3)`; requires `3 | a+b+c`.
fn h_rotated_class(v: &IVec3) -> bool {
    let s = v.sum();
    if !mod3(&s).is_zero() {
        return false;
    }
    let t = mod3(&(-(s / BigInt::from(3))));
    !t.is_zero() && mod3(&v.x) == t && mod3(&v.y) == t && mod3(&v.z) == t
}

fn direction_rule(f: Fractal, v: &IVec3) -> Rule {
    let s = v.sum();
    if s.is_zero() {
        return Rule::PlaneParallel;
    }
    match f {
        Fractal::S if s.is_odd() => Rule::OddSum,
        Fractal::S => Rule::EvenSum,
        Fractal::T | Fractal::H if !mod3(&s).is_zero() => Rule::ThreeNondiv,
        Fractal::H if h_rotated_class(v) => Rule::HRotated,
        Fractal::T | Fractal::H => Rule::ThreeDiv,
    }
}

/// Classifies the projection of the fractal `f` along `d`.
pub fn classify_direction(f: Fractal, d: &Direction) -> Result<Classification> {
    match d {
        Direction::Exact(v) => {
            let reduced = reduce_direction(v)?;
            let rule = direction_rule(f, &reduced);
            let uv = if rule == Rule::PlaneParallel {
                None
            } else {
                direction_to_uv(f, &reduced)?.into_iter().next()
            };
            Ok(Classification {
                direction: Some(v.clone()),
                reduced: Some(reduced),
                uv,
                ..Classification::new(Some(f), rule)
            })
        }
        Direction::Real { u, v, irrational } => classify_uv(
            f,
            &UvInput::Real {
                u: u.clone(),
                v: v.clone(),
                irrational: *irrational,
            },
        ),
    }
}

/// The parameters `(p, q, r)` of the planar family member the fractal
/// projects to along `(a, b, c)`. For H both sign branches are returned;
/// the planar H family is symmetric under `(u, v) ↦ (−u, −v)`.
pub fn direction_to_uv(f: Fractal, v: &IVec3) -> Result<Vec<UVParams>> {
    let (a, b, c) = (&v.x, &v.y, &v.z);
    let s = v.sum();
    if s.is_zero() {
        return Err(Error::ParallelToPlane(v.to_string()));
    }
    Ok(match f {
        Fractal::S => vec![UVParams::new(-a + b + c, a - b + c, s)?],
        Fractal::T => vec![UVParams::new(b + c - a * 2, a + c - b * 2, s)?],
        Fractal::H => {
            let first = UVParams::new(b + c - a * 2, a + c - b * 2, s)?;
            let second = first.negated();
            vec![first, second]
        }
    })
}

/// Input to [`classify_uv`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UvInput {
    Exact(UVParams),
    Real {
        u: RealParam,
        v: RealParam,
        irrational: bool,
    },
}

fn uv_rule(f: Fractal, uv: &UVParams) -> Rule {
    let (p, q, r) = (&uv.p, &uv.q, &uv.r);
    match f {
        Fractal::S if p.is_odd() && q.is_odd() && r.is_odd() => Rule::OddSum,
        Fractal::S => Rule::EvenSum,
        _ => {
            let (p, q, r) = (mod3(p), mod3(q), mod3(r));
            if p == q && q == r {
                Rule::ThreeNondiv
            } else if f == Fractal::H && p == q && q == mod3(&-r) {
                Rule::HRotated
            } else {
                Rule::ThreeDiv
            }
        }
    }
}

/// Classifies the planar family member with parameters `(u, v)`.
pub fn classify_uv(f: Fractal, input: &UvInput) -> Result<Classification> {
    let uv = match input {
        UvInput::Exact(uv) => uv.clone(),
        UvInput::Real {
            irrational: true, ..
        } => return Ok(Classification::new(Some(f), Rule::Irrational)),
        UvInput::Real {
            u,
            v,
            irrational: false,
        } => UVParams::from_uv(&u.approx, &v.approx),
    };
    Ok(Classification {
        uv: Some(uv.clone()),
        ..Classification::new(Some(f), uv_rule(f, &uv))
    })
}

/// Image of `v` under the half-turn about `(1, 1, 1)`:
/// `(α, β, γ)/3` with `(α, β, γ) = a(−1,2,2) + b(2,−1,2) + c(2,2,−1)`.
pub fn rotate_h(v: &IVec3) -> [Rat; 3] {
    let (a, b, c) = (&v.x, &v.y, &v.z);
    let alpha = -a + b * 2 + c * 2;
    let beta = a * 2 - b + c * 2;
    let gamma = a * 2 + b * 2 - c;
    [alpha, beta, gamma].map(|n| Rat::new(n, BigInt::from(3)))
}

/// The smallest positive integer multiple of a rational triple.
pub fn integer_direction(v: &[Rat; 3]) -> Result<IVec3> {
    let den = v.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = v.iter().map(|r| r.numer() * (&den / r.denom())).collect();
    let w = IVec3::new(ints[0].clone(), ints[1].clone(), ints[2].clone());
    if w.is_zero() {
        return Err(Error::DegenerateDirection);
    }
    let g = gcd3(&w.x, &w.y, &w.z);
    Ok(w.div_exact(&g).expect("gcd divides"))
}

/// Report of [`cross_validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossValidation {
    /// The direction classification, with the oracle evidence attached.
    pub classification: Classification,
    /// Classification of the planar parameters of each branch.
    pub uv_classifications: Vec<Classification>,
    pub oracle: OracleEvidence,
}

/// Runs the oracle on the projected canonical digit set.
pub fn projection_oracle(f: Fractal, v: &IVec3) -> Result<OracleEvidence> {
    let digits = canonical(f.into());
    let map = ProjectionMap::for_family(f.into(), v.clone())?;
    let proj = project_points(&digits, &map);
    if let Some(&(i, j)) = proj.collisions.first() {
        return Ok(OracleEvidence::DigitCollision {
            first: digits.points()[i].clone(),
            second: digits.points()[j].clone(),
        });
    }
    let (_, scaled) = project_digit_set(&digits, &map)?.integerize();
    let z = has_nontrivial_zero_expansion(&scaled)?;
    Ok(match z.word {
        Some(word) => OracleEvidence::ZeroExpansion { word },
        None => OracleEvidence::Exhausted { states: z.states },
    })
}

/// Classifies `v` by direction arithmetic, by planar-parameter arithmetic
/// and by the expansion oracle; any disagreement is an error.
pub fn cross_validate(f: Fractal, v: &IVec3) -> Result<CrossValidation> {
    let reduced = reduce_direction(v)?;
    if reduced.sum().is_zero() {
        return Err(Error::ParallelToPlane(v.to_string()));
    }
    let mut classification = classify_direction(f, &Direction::Exact(v.clone()))?;
    let uv_classifications = direction_to_uv(f, &reduced)?
        .into_iter()
        .map(|uv| classify_uv(f, &UvInput::Exact(uv)))
        .collect::<Result<Vec<_>>>()?;
    let oracle = projection_oracle(f, &reduced)?;

    for c in &uv_classifications {
        if c.verdict != classification.verdict {
            return Err(Error::OracleDisagreement(format!(
                "{f} along {reduced}: direction rule {} but {} gives {}",
                classification.rule.name(),
                c.uv.as_ref().expect("exact"),
                c.rule.name()
            )));
        }
    }
    if oracle.verdict() != classification.verdict {
        return Err(Error::OracleDisagreement(format!(
            "{f} along {reduced}: direction rule {} ({}) but the expansion oracle says {}",
            classification.rule.name(),
            classification.verdict.as_str(),
            oracle.verdict().as_str()
        )));
    }
    classification.oracle = Some(oracle.clone());
    Ok(CrossValidation {
        classification,
        uv_classifications,
        oracle,
    })
}

/// Positivity along `(nk, mk, 1)` for a fractal imaginary cube digit set:
/// the projected digits form a complete residue system modulo `kℤ²`.
pub fn nk_mk_1_positive(d: &DigitSet3, n: &BigInt, m: &BigInt) -> Result<Classification> {
    if !is_imaginary_cube_digit_set(d)? {
        return Err(Error::NotImaginaryCube);
    }
    let k = BigInt::from(d.k());
    let dir = IVec3::new(n * &k, m * &k, BigInt::one());
    let proj = project_digit_set(d, &ProjectionMap::new(dir.clone(), PlaneConvention::XY)?)?;
    if !is_complete_residue_system(&proj)? {
        return Err(Error::OracleDisagreement(format!(
            "projection along {dir} is not a complete residue system"
        )));
    }
    Ok(Classification {
        direction: Some(dir.clone()),
        reduced: Some(reduce_direction(&dir)?),
        oracle: Some(OracleEvidence::CompleteResidueSystem),
        ..Classification::new(None, Rule::ResidueShortcut)
    })
}

/// A lattice vector `y ≠ 0` whose image `φ(y)` is short.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeWitness {
    pub fractal: Fractal,
    pub k: u32,
    pub l: u32,
    pub i: u64,
    pub j: u64,
    /// Number of samples drawn, at most `k^{2l} + 1`.
    pub samples: u64,
    pub y: IVec3,
    /// `φ(y)` evaluated exactly at the given approximations.
    pub image: [Rat; 2],
    /// `|φ(y)|²`, and the bound `2k^{−2l}` it satisfies.
    pub norm_sq: Rat,
    pub bound_sq: Rat,
    /// Upper bound on `|φ_true(y) − φ(y)|∞` from the input error bounds.
    pub input_error: Rat,
    /// Whether `y` lies in the expansion set of the differenced primed digit
    /// set, by the closed forms; `None` where no closed form applies.
    pub in_expansion_set: Option<bool>,
}

impl ProbeWitness {
    pub fn to_json(&self) -> Value {
        json!({
            "fractal": self.fractal.name(),
            "k": self.k,
            "l": self.l,
            "i": self.i,
            "j": self.j,
            "samples": self.samples,
            "y": vec3_value(&self.y),
            "image": [rat_string(&self.image[0]), rat_string(&self.image[1])],
            "norm_sq": rat_string(&self.norm_sq),
            "bound_sq": rat_string(&self.bound_sq),
            "input_error": rat_string(&self.input_error),
            "in_expansion_set": self.in_expansion_set,
        })
    }
}

/// Pigeonhole search for a short nonzero vector in the projected lattice.
///
/// The projection `φ(x, y, z) = (x + s z, y + t z)` sends the primed digit
/// set of `f` to the planar family member with parameters `(u, v)`; here
/// `(s, t) = (u, v)` for S and H and `(u − 1, v − 1)` for T. Among the
/// `k^{2l} + 1` points `({k^i s}, {k^i t})`, two share a cell of side
/// `k^{−l}`, and the corresponding `y` has `|φ(y)| ≤ √2·k^{−l}`.
pub fn probe_discreteness(
    f: Fractal,
    u: &RealParam,
    v: &RealParam,
    l: u32,
) -> Result<ProbeWitness> {
    if l == 0 {
        return Err(Error::InvalidArgument("l must be at least 1".into()));
    }
    let k = f.k();
    let kb = BigInt::from(k);
    let cells = pow(k, l);
    let budget = pow(k, 2 * l);
    let limit = Rat::new(BigInt::one(), &budget * 256);
    if u.error > limit || v.error > limit {
        return Err(Error::InsufficientPrecision(format!(
            "input error must be at most k^(-2l)/256 = 1/{} for l = {l}",
            &budget * 256
        )));
    }
    let shift = if f == Fractal::T {
        Rat::one()
    } else {
        Rat::zero()
    };
    let s = [&u.approx - &shift, &v.approx - &shift];

    // fractional part {k^i s} = num/den, advanced by num ← k·num mod den
    let den: Vec<BigInt> = s.iter().map(|x| x.denom().clone()).collect();
    let mut num: Vec<BigInt> = s.iter().map(|x| x.numer().mod_floor(x.denom())).collect();
    let mut first_seen: HashMap<(BigInt, BigInt), u64> = HashMap::new();
    let max_samples: u64 = (&budget + 1u32).try_into().map_err(|_| {
        Error::InvalidArgument(format!(
            "k^(2l) = {budget} samples is beyond the supported range"
        ))
    })?;
    let mut found = None;
    for idx in 0..max_samples {
        let cell = (&num[0] * &cells / &den[0], &num[1] * &cells / &den[1]);
        if let Some(&i) = first_seen.get(&cell) {
            found = Some((i, idx));
            break;
        }
        first_seen.insert(cell, idx);
        for a in 0..2 {
            num[a] = (&num[a] * &kb).mod_floor(&den[a]);
        }
    }
    let (i, j) = found.expect("pigeonhole: k^(2l)+1 samples in k^(2l) cells");

    let floor_at = |x: &Rat, e: u64| (x * rat_int(&pow(k, e as u32))).floor().to_integer();
    let kj = pow(k, j as u32);
    let ki = pow(k, i as u32);
    let y = IVec3::new(
        floor_at(&s[0], j) - floor_at(&s[0], i),
        floor_at(&s[1], j) - floor_at(&s[1], i),
        -(&kj - &ki),
    );
    let z = rat_int(&y.z);
    let image = [rat_int(&y.x) + &s[0] * &z, rat_int(&y.y) + &s[1] * &z];
    let norm_sq = &image[0] * &image[0] + &image[1] * &image[1];
    let bound_sq = Rat::new(BigInt::from(2), budget);
    let input_error = std::cmp::max(u.error.clone(), v.error.clone()) * z.abs();
    let in_expansion_set = match f {
        Fractal::S => LemmaSetId::CS.contains3(&y),
        _ => SliceClosedForm::for_height(f, &y.z).map(|c| c.contains(&y.xy())),
    };
    Ok(ProbeWitness {
        fractal: f,
        k,
        l,
        i,
        j,
        samples: j + 1,
        y,
        image,
        norm_sq,
        bound_sq,
        input_error,
        in_expansion_set,
    })
}

/// `⌊√n · 2^bits⌋ / 2^bits`, the truncation of `√n` to `bits` fractional
/// bits, with its error bound `2^−bits`.
pub fn truncated_sqrt(n: u64, bits: u32) -> RealParam {
    let scale = pow(2, bits);
    let root = (BigInt::from(n) * &scale * &scale).sqrt();
    RealParam {
        approx: Rat::new(root, scale.clone()),
        error: Rat::new(BigInt::one(), scale),
    }
}

/// Family-specific digit family of the primed set used by the probe.
pub fn probe_family(f: Fractal) -> DigitFamily {
    match f {
        Fractal::S => DigitFamily::SPrime,
        Fractal::H => DigitFamily::HPrime,
        Fractal::T => DigitFamily::TPrime,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;

    fn d(a: i64, b: i64, c: i64) -> Direction {
        Direction::exact(&IVec3::new(a, b, c)).unwrap()
    }

    fn rule(f: Fractal, a: i64, b: i64, c: i64) -> Rule {
        classify_direction(f, &d(a, b, c)).unwrap().rule
    }

    fn uv(p: i64, q: i64, r: i64) -> UVParams {
        UVParams::new(p.into(), q.into(), r.into()).unwrap()
    }

    #[test]
    fn direction_examples() {
        assert_eq!(rule(Fractal::S, 1, -1, 1), Rule::OddSum);
        assert_eq!(rule(Fractal::S, 1, 2, 0), Rule::OddSum);
        assert_eq!(rule(Fractal::S, 1, 1, 0), Rule::EvenSum);
        assert_eq!(rule(Fractal::T, 1, 1, 1), Rule::ThreeDiv);
        assert_eq!(rule(Fractal::T, 1, 1, 0), Rule::ThreeNondiv);
        assert_eq!(rule(Fractal::H, -1, 2, 2), Rule::HRotated);
        assert_eq!(rule(Fractal::H, 4, 1, 1), Rule::HRotated);
        assert_eq!(rule(Fractal::H, 1, 1, -5), Rule::HRotated);
        assert_eq!(rule(Fractal::H, 1, 1, 1), Rule::ThreeDiv);
        assert_eq!(rule(Fractal::S, 1, -1, 0), Rule::PlaneParallel);
        assert!(matches!(
            Direction::exact(&IVec3::zero()),
            Err(Error::DegenerateDirection)
        ));
    }

    #[test]
    fn uv_examples() {
        let one = |f, (a, b, c): (i64, i64, i64)| {
            direction_to_uv(f, &IVec3::new(a, b, c)).unwrap()[0].clone()
        };
        assert_eq!(one(Fractal::S, (1, -1, 1)), uv(-1, 3, 1));
        assert_eq!(one(Fractal::S, (2, 1, 0)), uv(-1, 1, 3));
        assert_eq!(one(Fractal::T, (1, -1, 1)), uv(-2, 4, 1));
        assert_eq!(
            direction_to_uv(Fractal::H, &IVec3::new(1, 0, 0))
                .unwrap()
                .len(),
            2
        );
        assert!(direction_to_uv(Fractal::T, &IVec3::new(1, -1, 0)).is_err());
        // negative r is normalized
        assert_eq!(uv(2, 4, -6), uv(-1, -2, 3));
    }

    #[test]
    fn uv_rule_examples() {
        let r = |f, t| classify_uv(f, &UvInput::Exact(t)).unwrap().rule;
        assert_eq!(r(Fractal::S, uv(3, 3, 1)), Rule::OddSum);
        assert_eq!(r(Fractal::T, uv(1, 1, 1)), Rule::ThreeNondiv);
        assert_eq!(r(Fractal::H, uv(1, 1, 2)), Rule::HRotated);
        assert_eq!(r(Fractal::S, uv(2, 1, 1)), Rule::EvenSum);
        let irr = UvInput::Real {
            u: truncated_sqrt(2, 64),
            v: truncated_sqrt(3, 64),
            irrational: true,
        };
        assert_eq!(
            classify_uv(Fractal::T, &irr).unwrap().rule,
            Rule::Irrational
        );
    }

    #[test]
    fn declared_irrational_needs_precision() {
        let coarse = RealParam {
            approx: rat(14142, 10000),
            error: rat(1, 10000),
        };
        assert!(matches!(
            Direction::real(coarse.clone(), coarse, true),
            Err(Error::InsufficientPrecision(_))
        ));
        let fine = Direction::real(truncated_sqrt(2, 64), truncated_sqrt(3, 64), true).unwrap();
        assert_eq!(
            classify_direction(Fractal::S, &fine).unwrap().rule,
            Rule::Irrational
        );
    }

    #[test]
    fn rotation_examples() {
        let third = |n| rat(n, 3);
        assert_eq!(
            rotate_h(&IVec3::new(1, 0, 0)),
            [third(-1), third(2), third(2)]
        );
        assert_eq!(
            rotate_h(&IVec3::new(1, 1, 1)),
            [rat(1, 1), rat(1, 1), rat(1, 1)]
        );
        assert_eq!(
            rotate_h(&IVec3::new(1, 1, -5)),
            [rat(-3, 1), rat(-3, 1), rat(3, 1)]
        );
        assert_eq!(
            integer_direction(&rotate_h(&IVec3::new(1, 1, -5))).unwrap(),
            IVec3::new(-1, -1, 1)
        );
    }

    #[test]
    fn cross_validation_examples() {
        let cv = cross_validate(Fractal::S, &IVec3::new(1, 1, 0)).unwrap();
        assert_eq!(cv.classification.verdict, Verdict::Null);
        assert!(!matches!(cv.oracle, OracleEvidence::Exhausted { .. }));

        let cv = cross_validate(Fractal::S, &IVec3::new(1, -1, 1)).unwrap();
        assert!(matches!(cv.oracle, OracleEvidence::Exhausted { .. }));
        let cv = cross_validate(Fractal::H, &IVec3::new(-1, 2, 2)).unwrap();
        assert_eq!(cv.classification.verdict, Verdict::Positive);
        assert!(cross_validate(Fractal::T, &IVec3::new(1, -1, 0)).is_err());
    }

    #[test]
    fn residue_shortcut_examples() {
        let one = BigInt::one();
        let zero = BigInt::zero();
        let c = nk_mk_1_positive(&canonical(DigitFamily::S), &zero, &zero).unwrap();
        assert_eq!(c.rule, Rule::ResidueShortcut);
        assert!(nk_mk_1_positive(&canonical(DigitFamily::T), &one, &one).is_ok());
        assert!(matches!(
            nk_mk_1_positive(&canonical(DigitFamily::SPrime), &one, &zero),
            Err(Error::NotImaginaryCube)
        ));
    }

    #[test]
    fn probe_on_rational_input_collides_immediately() {
        let one = RealParam::exact(rat(1, 1));
        let w = probe_discreteness(Fractal::S, &one, &one, 3).unwrap();
        assert_eq!((w.i, w.j), (0, 1));
        assert_eq!(w.y, IVec3::new(1, 1, -1));
        assert!(w.norm_sq.is_zero());
    }

    #[test]
    fn probe_bound_holds() {
        let (u, v) = (truncated_sqrt(2, 64), truncated_sqrt(3, 64));
        for f in Fractal::ALL {
            for l in [1, 2, 3] {
                let w = probe_discreteness(f, &u, &v, l).unwrap();
                assert!(!w.y.is_zero());
                assert!(w.norm_sq <= w.bound_sq);
                let budget: u64 = pow(f.k(), 2 * l).try_into().unwrap();
                assert!(w.samples <= budget + 1);
            }
        }
        let coarse = RealParam {
            approx: rat(141, 100),
            error: rat(1, 100),
        };
        assert!(probe_discreteness(Fractal::S, &coarse, &coarse, 2).is_err());
    }
}
