//! Digit sets of the iterated function systems `x ↦ (x + d) / k`.
//!
//! Holds the canonical sets of the Sierpinski tetrahedron and the H and T
//! fractals (plus the primed variants whose expansion sets have closed
//! forms), the Latin-square construction, and differenced sets `D - D`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::{parse_rat, rat_string, IVec2, IVec3, Rat, RatVec2};

/// The three fractal imaginary cubes of degree at most 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fractal {
    S,
    H,
    T,
}

impl Fractal {
    pub const ALL: [Fractal; 3] = [Fractal::S, Fractal::H, Fractal::T];

    pub fn k(self) -> u32 {
        match self {
            Fractal::S => 2,
            Fractal::H | Fractal::T => 3,
        }
    }

    pub fn digit_set(self) -> DigitSet3 {
        canonical(self.into())
    }

    /// The primed digit set projecting onto the same planar family.
    pub fn primed(self) -> DigitSet3 {
        canonical(match self {
            Fractal::S => DigitFamily::SPrime,
            Fractal::H => DigitFamily::HPrime,
            Fractal::T => DigitFamily::TPrime,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Fractal::S => "S",
            Fractal::H => "H",
            Fractal::T => "T",
        }
    }
}

impl fmt::Display for Fractal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fractal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "S" => Ok(Fractal::S),
            "H" => Ok(Fractal::H),
            "T" => Ok(Fractal::T),
            _ => Err(Error::Parse(format!(
                "unknown fractal {s:?}; expected S, H or T"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DigitFamily {
    S,
    H,
    T,
    SPrime,
    TPrime,
    HPrime,
}

impl From<Fractal> for DigitFamily {
    fn from(f: Fractal) -> Self {
        match f {
            Fractal::S => DigitFamily::S,
            Fractal::H => DigitFamily::H,
            Fractal::T => DigitFamily::T,
        }
    }
}

/// Three-dimensional digit set: radix `k` and `k²` distinct lattice points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitSet3 {
    k: u32,
    points: Vec<IVec3>,
}

/// Planar digit set with exact rational points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitSet2 {
    k: u32,
    points: Vec<RatVec2>,
}

/// `Δ(D) = D − D`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaSet<P> {
    k: u32,
    points: Vec<P>,
}

fn check_radix(k: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidDigitSet(format!("radix {k} < 2")));
    }
    Ok(())
}

fn distinct_sorted<P: Ord + Clone + fmt::Display>(k: u32, points: Vec<P>) -> Result<Vec<P>> {
    check_radix(k)?;
    let want = (k as usize) * (k as usize);
    let set: BTreeSet<P> = points.iter().cloned().collect();
    if set.len() != points.len() {
        return Err(Error::InvalidDigitSet("repeated point".into()));
    }
    if set.len() != want {
        return Err(Error::InvalidDigitSet(format!(
            "{} points, expected k² = {want}",
            set.len()
        )));
    }
    Ok(set.into_iter().collect())
}

impl DigitSet3 {
    pub fn new(k: u32, points: Vec<IVec3>) -> Result<Self> {
        Ok(DigitSet3 {
            k,
            points: distinct_sorted(k, points)?,
        })
    }

    pub fn from_i64(k: u32, points: &[[i64; 3]]) -> Result<Self> {
        DigitSet3::new(k, points.iter().map(|&p| IVec3::from_i64(p)).collect())
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn points(&self) -> &[IVec3] {
        &self.points
    }

    pub fn contains(&self, p: &IVec3) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn translate(&self, t: &IVec3) -> DigitSet3 {
        DigitSet3::new(self.k, self.points.iter().map(|p| p + t).collect())
            .expect("translation is injective")
    }

    pub fn delta(&self) -> DeltaSet<IVec3> {
        DeltaSet::from_points(self.k, &self.points)
    }
}

impl DigitSet2 {
    pub fn new(k: u32, points: Vec<RatVec2>) -> Result<Self> {
        Ok(DigitSet2 {
            k,
            points: distinct_sorted(k, points)?,
        })
    }

    pub fn from_ints(k: u32, points: &[[i64; 2]]) -> Result<Self> {
        DigitSet2::new(
            k,
            points
                .iter()
                .map(|&[x, y]| RatVec2::from_ints(x, y))
                .collect(),
        )
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn points(&self) -> &[RatVec2] {
        &self.points
    }

    pub fn is_integral(&self) -> bool {
        self.points.iter().all(RatVec2::is_integral)
    }

    /// Lattice points, or [`Error::NotIntegral`].
    pub fn integer_points(&self) -> Result<Vec<IVec2>> {
        self.points
            .iter()
            .map(|p| p.to_ivec().ok_or(Error::NotIntegral))
            .collect()
    }

    /// Least common multiple of all coordinate denominators.
    pub fn denominator(&self) -> BigInt {
        self.points
            .iter()
            .flat_map(|p| [p.x.denom().clone(), p.y.denom().clone()])
            .fold(BigInt::one(), |acc, d| acc.lcm(&d))
    }

    /// Scales by the common denominator so every point is a lattice point.
    /// Positive scaling preserves measure positivity of the attractor.
    pub fn integerize(&self) -> (BigInt, DigitSet2) {
        let s = self.denominator();
        let sr = Rat::from_integer(s.clone());
        let scaled = DigitSet2 {
            k: self.k,
            points: self.points.iter().map(|p| p.scale(&sr)).collect(),
        };
        (s, scaled)
    }

    pub fn delta(&self) -> DeltaSet<RatVec2> {
        DeltaSet::from_points(self.k, &self.points)
    }
}

impl<P> DeltaSet<P>
where
    P: Clone + Ord,
    for<'a> &'a P: std::ops::Sub<&'a P, Output = P>,
{
    pub fn from_points(k: u32, points: &[P]) -> Self {
        let set: BTreeSet<P> = points
            .iter()
            .flat_map(|a| points.iter().map(move |b| a - b))
            .collect();
        DeltaSet {
            k,
            points: set.into_iter().collect(),
        }
    }
}

impl<P: Ord> DeltaSet<P> {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &P) -> bool {
        self.points.binary_search(p).is_ok()
    }
}

impl DeltaSet<IVec3> {
    /// Slice at height `z`, as a sorted planar set.
    pub fn slice(&self, z: &BigInt) -> Vec<IVec2> {
        self.points
            .iter()
            .filter(|p| &p.z == z)
            .map(IVec3::xy)
            .collect()
    }
}

fn set3(k: u32, pts: &[[i64; 3]]) -> DigitSet3 {
    DigitSet3::from_i64(k, pts).expect("canonical digit sets are valid")
}

/// The canonical digit sets, with the coordinates used throughout: `{0,1}`
/// for S, the centered `{-1,0,1}` convention for H and T.
pub fn canonical(family: DigitFamily) -> DigitSet3 {
    match family {
        DigitFamily::S => set3(2, &[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]),
        DigitFamily::H => set3(
            3,
            &[
                [0, 0, 0],
                [0, 1, -1],
                [0, -1, 1],
                [1, 0, -1],
                [-1, 0, 1],
                [1, -1, 0],
                [-1, 1, 0],
                [1, 1, 1],
                [-1, -1, -1],
            ],
        ),
        DigitFamily::T => set3(
            3,
            &[
                [1, -1, -1],
                [-1, 1, -1],
                [-1, -1, 1],
                [-1, 0, 0],
                [0, -1, 0],
                [0, 0, -1],
                [0, 1, 1],
                [1, 0, 1],
                [1, 1, 0],
            ],
        ),
        DigitFamily::SPrime => set3(2, &[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]),
        DigitFamily::TPrime => set3(
            3,
            &[
                [1, -1, 0],
                [-1, 1, 0],
                [-1, -1, 0],
                [-1, 0, 0],
                [0, -1, 0],
                [0, 0, 0],
                [0, 1, 1],
                [1, 0, 1],
                [1, 1, 1],
            ],
        ),
        DigitFamily::HPrime => set3(
            3,
            &[
                [0, 0, 0],
                [1, 0, 0],
                [1, -1, 0],
                [0, -1, 0],
                [-1, 0, 0],
                [-1, 1, 0],
                [0, 1, 0],
                [0, 0, 1],
                [0, 0, -1],
            ],
        ),
    }
}

/// Latin square `h: K × K → K` over `K = {0, …, k-1}`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatinSquare {
    order: usize,
    cells: Vec<u8>,
}

impl LatinSquare {
    pub fn new(order: usize, cells: Vec<u8>) -> Result<Self> {
        if order == 0 || cells.len() != order * order {
            return Err(Error::InvalidLatinSquare(format!(
                "expected {} entries",
                order * order
            )));
        }
        let full: u64 = (1u64 << order) - 1;
        for i in 0..order {
            let mut row = 0u64;
            let mut col = 0u64;
            for j in 0..order {
                let (r, c) = (cells[i * order + j] as usize, cells[j * order + i] as usize);
                if r >= order || c >= order {
                    return Err(Error::InvalidLatinSquare(format!(
                        "entry out of range 0..{order}"
                    )));
                }
                row |= 1 << r;
                col |= 1 << c;
            }
            if row != full {
                return Err(Error::InvalidLatinSquare(format!(
                    "row {i} repeats an entry"
                )));
            }
            if col != full {
                return Err(Error::InvalidLatinSquare(format!(
                    "column {i} repeats an entry"
                )));
            }
        }
        Ok(LatinSquare { order, cells })
    }

    pub fn from_fn(order: usize, h: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut cells = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                let v = h(i, j);
                cells.push(
                    u8::try_from(v)
                        .map_err(|_| Error::InvalidLatinSquare("entry too large".into()))?,
                );
            }
        }
        LatinSquare::new(order, cells)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.cells[i * self.order + j] as usize
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    /// Rows rendered as digit strings, e.g. `["01", "10"]`.
    pub fn rows(&self) -> Vec<String> {
        self.cells
            .chunks(self.order)
            .map(|row| {
                row.iter()
                    .map(|&c| char::from_digit(c as u32, 36).unwrap())
                    .collect()
            })
            .collect()
    }
}

/// `{(i, j, h(i, j))}` for a Latin square `h`.
pub fn from_latin_square(h: &LatinSquare) -> DigitSet3 {
    let n = h.order();
    let pts = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| IVec3::new(i as i64, j as i64, h.get(i, j) as i64))
        .collect();
    DigitSet3::new(n as u32, pts).expect("Latin square cells are distinct")
}

/// Translates `D` into `{0, …, k-1}³`, accepting either that grid or the
/// centered grid `{-(k-1)/2, …, (k-1)/2}³` for odd `k`.
pub fn normalize_to_grid(d: &DigitSet3) -> Result<DigitSet3> {
    let k = BigInt::from(d.k());
    let in_range = |lo: &BigInt, hi: &BigInt| {
        d.points()
            .iter()
            .all(|p| p.components().into_iter().all(|c| lo <= c && c <= hi))
    };
    let zero = BigInt::zero();
    let top = &k - 1;
    if in_range(&zero, &top) {
        return Ok(d.clone());
    }
    if d.k() % 2 == 1 {
        let h = &top / 2;
        if in_range(&-&h, &h) {
            return Ok(d.translate(&IVec3 {
                x: h.clone(),
                y: h.clone(),
                z: h,
            }));
        }
    }
    let bad = d
        .points()
        .iter()
        .find(|p| {
            p.components()
                .into_iter()
                .any(|c| c.is_negative() || c > &top)
        })
        .unwrap();
    Err(Error::OutsideGrid(bad.to_string()))
}

/// True iff every axis projection of `D` is a bijection onto `K × K`,
/// i.e. `D` is the cell set of a Latin square.
pub fn is_imaginary_cube_digit_set(d: &DigitSet3) -> Result<bool> {
    let g = normalize_to_grid(d)?;
    let k = g.k() as usize;
    let coords: Vec<[usize; 3]> = g
        .points()
        .iter()
        .map(|p| p.components().map(|c| c.to_usize().unwrap()))
        .collect();
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let mut seen = vec![false; k * k];
        for c in &coords {
            let idx = c[a] * k + c[b];
            if seen[idx] {
                return Ok(false);
            }
            seen[idx] = true;
        }
    }
    Ok(true)
}

/// Inverse of [`from_latin_square`] on imaginary-cube digit sets.
pub fn to_latin_square(d: &DigitSet3) -> Result<LatinSquare> {
    if !is_imaginary_cube_digit_set(d)? {
        return Err(Error::NotImaginaryCube);
    }
    let g = normalize_to_grid(d)?;
    let k = g.k() as usize;
    let mut cells = vec![0u8; k * k];
    for p in g.points() {
        let [i, j, h] = p.components().map(|c| c.to_usize().unwrap());
        cells[i * k + j] = h as u8;
    }
    LatinSquare::new(k, cells)
}

/// JSON digit-set document `{"k": int, "dim": 2|3, "points": [[..], ..]}`.
/// Planar coordinates may be integers or `"p/q"` strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DigitSetFile {
    pub k: u32,
    pub dim: u8,
    pub points: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyDigitSet {
    Plane(DigitSet2),
    Space(DigitSet3),
}

fn value_to_rat(v: &Value) -> Result<Rat> {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            parse_rat(&s)
        }
        Value::String(s) => parse_rat(s),
        _ => Err(Error::Parse(format!("bad coordinate {v}"))),
    }
}

pub fn rat_to_value(r: &Rat) -> Value {
    if r.is_integer() {
        crate::json::int_value(r.numer())
    } else {
        Value::String(rat_string(r))
    }
}

impl DigitSetFile {
    pub fn parse(text: &str) -> Result<AnyDigitSet> {
        let doc: DigitSetFile = serde_json::from_str(text)?;
        doc.into_digit_set()
    }

    pub fn into_digit_set(self) -> Result<AnyDigitSet> {
        let coords: Vec<Vec<Rat>> = self
            .points
            .iter()
            .map(|p| p.iter().map(value_to_rat).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        if coords.iter().any(|c| c.len() != self.dim as usize) {
            return Err(Error::InvalidDigitSet(format!(
                "every point needs {} coordinates",
                self.dim
            )));
        }
        match self.dim {
            2 => Ok(AnyDigitSet::Plane(DigitSet2::new(
                self.k,
                coords
                    .into_iter()
                    .map(|c| RatVec2::new(c[0].clone(), c[1].clone()))
                    .collect(),
            )?)),
            3 => {
                let pts = coords
                    .into_iter()
                    .map(|c| {
                        if c.iter().all(|v| v.is_integer()) {
                            Ok(IVec3 {
                                x: c[0].to_integer(),
                                y: c[1].to_integer(),
                                z: c[2].to_integer(),
                            })
                        } else {
                            Err(Error::NotIntegral)
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnyDigitSet::Space(DigitSet3::new(self.k, pts)?))
            }
            d => Err(Error::InvalidDigitSet(format!(
                "dim must be 2 or 3, got {d}"
            ))),
        }
    }

    pub fn from_plane(d: &DigitSet2) -> Self {
        DigitSetFile {
            k: d.k(),
            dim: 2,
            points: d
                .points()
                .iter()
                .map(|p| vec![rat_to_value(&p.x), rat_to_value(&p.y)])
                .collect(),
        }
    }

    pub fn from_space(d: &DigitSet3) -> Self {
        DigitSetFile {
            k: d.k(),
            dim: 3,
            points: d
                .points()
                .iter()
                .map(|p| {
                    p.components()
                        .into_iter()
                        .map(crate::json::int_value)
                        .collect()
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int;

    fn v(x: i64, y: i64, z: i64) -> IVec3 {
        IVec3::new(x, y, z)
    }

    #[test]
    fn canonical_sizes_and_radices() {
        for (fam, k) in [
            (DigitFamily::S, 2),
            (DigitFamily::SPrime, 2),
            (DigitFamily::H, 3),
            (DigitFamily::T, 3),
            (DigitFamily::TPrime, 3),
            (DigitFamily::HPrime, 3),
        ] {
            let d = canonical(fam);
            assert_eq!(d.k(), k);
            assert_eq!(d.points().len(), (k * k) as usize);
        }
        let s_prime = canonical(DigitFamily::SPrime);
        assert_eq!(
            s_prime.points(),
            &[v(0, 0, 0), v(0, 0, 1), v(0, 1, 0), v(1, 0, 0)]
        );
        let t_prime = canonical(DigitFamily::TPrime);
        assert!(t_prime.contains(&v(1, -1, 0)) && t_prime.contains(&v(1, 1, 1)));
        let h_prime = canonical(DigitFamily::HPrime);
        assert!(h_prime.contains(&v(0, 0, 1)) && h_prime.contains(&v(0, 0, -1)));
    }

    #[test]
    fn latin_square_digit_sets() {
        let xor = LatinSquare::from_fn(2, |i, j| i ^ j).unwrap();
        assert_eq!(
            from_latin_square(&xor),
            DigitSet3::from_i64(2, &[[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]]).unwrap()
        );
        let xnor = LatinSquare::from_fn(2, |i, j| 1 - (i ^ j)).unwrap();
        assert_eq!(from_latin_square(&xnor), canonical(DigitFamily::S));
        assert!(matches!(
            LatinSquare::new(2, vec![0, 0, 1, 1]),
            Err(Error::InvalidLatinSquare(_))
        ));
        assert!(matches!(
            LatinSquare::new(2, vec![0, 1, 0, 1]),
            Err(Error::InvalidLatinSquare(_))
        ));
    }

    #[test]
    fn imaginary_cube_check() {
        assert!(is_imaginary_cube_digit_set(&canonical(DigitFamily::S)).unwrap());
        assert!(is_imaginary_cube_digit_set(&canonical(DigitFamily::T)).unwrap());
        assert!(is_imaginary_cube_digit_set(&canonical(DigitFamily::H)).unwrap());
        let shifted_t = canonical(DigitFamily::T).translate(&v(1, 1, 1));
        assert!(is_imaginary_cube_digit_set(&shifted_t).unwrap());
        let flat = DigitSet3::from_i64(2, &[[0, 0, 0], [0, 1, 0], [1, 0, 0], [1, 1, 0]]).unwrap();
        assert!(!is_imaginary_cube_digit_set(&flat).unwrap());
        let outside =
            DigitSet3::from_i64(2, &[[0, 0, 0], [0, 1, 0], [1, 0, 0], [1, 1, 5]]).unwrap();
        assert!(matches!(
            is_imaginary_cube_digit_set(&outside),
            Err(Error::OutsideGrid(_))
        ));
        assert!(!is_imaginary_cube_digit_set(&canonical(DigitFamily::SPrime)).unwrap());
    }

    #[test]
    fn delta_examples() {
        let d = canonical(DigitFamily::SPrime).delta();
        assert_eq!(d.len(), 13);
        assert!(d.contains(&v(1, -1, 0)) && d.contains(&v(0, 0, -1)));
        let single = DeltaSet::from_points(1, &[IVec2::zero()]);
        assert_eq!(single.points(), &[IVec2::zero()]);

        // Δ(D_T')_0 = {(i, j) : |i|, |j|, |i + j| < 3}
        let dt = canonical(DigitFamily::TPrime).delta();
        let slice0 = dt.slice(&int(0));
        let mut expected = Vec::new();
        for i in -2i64..=2 {
            for j in -2i64..=2 {
                if (i + j).abs() < 3 {
                    expected.push(IVec2::new(i, j));
                }
            }
        }
        assert_eq!(slice0, expected);
        // Δ(D_T')_1 = {(i, j) : i, j < 3 ∧ i + j > 0}
        assert!(dt
            .slice(&int(1))
            .iter()
            .all(|p| p.x < int(3) && p.y < int(3) && (&p.x + &p.y) > int(0)));
    }

    #[test]
    fn h_prime_delta_slices() {
        let dh = canonical(DigitFamily::HPrime).delta();
        assert_eq!(dh.slice(&int(2)), vec![IVec2::zero()]);
        assert_eq!(dh.slice(&int(-2)), vec![IVec2::zero()]);
        assert_eq!(dh.slice(&int(1)).len(), 7); // J
        assert_eq!(dh.slice(&int(0)).len(), 19); // G'_1
    }

    #[test]
    fn digit_set_json_roundtrip() {
        let d = DigitSet2::new(
            2,
            vec![
                RatVec2::from_ints(0, 0),
                RatVec2::from_ints(1, 0),
                RatVec2::from_ints(0, 1),
                RatVec2::new(crate::lattice::rat(1, 3), crate::lattice::rat(-1, 3)),
            ],
        )
        .unwrap();
        let text = serde_json::to_string(&DigitSetFile::from_plane(&d)).unwrap();
        assert_eq!(DigitSetFile::parse(&text).unwrap(), AnyDigitSet::Plane(d));
        let s = canonical(DigitFamily::S);
        let text = serde_json::to_string(&DigitSetFile::from_space(&s)).unwrap();
        assert_eq!(DigitSetFile::parse(&text).unwrap(), AnyDigitSet::Space(s));
        assert!(
            DigitSetFile::parse(r#"{"k":2,"dim":2,"points":[[0,0],[0,0],[1,0],[0,1]]}"#).is_err()
        );
    }

    proptest::proptest! {
        #[test]
        fn delta_is_symmetric_with_zero(pts in proptest::collection::btree_set((-4i64..4, -4i64..4), 4)) {
            let pts: Vec<IVec2> = pts.into_iter().map(|(x, y)| IVec2::new(x, y)).collect();
            let d = DeltaSet::from_points(2, &pts);
            proptest::prop_assert!(d.contains(&IVec2::zero()));
            for p in d.points() {
                proptest::prop_assert!(d.contains(&-p));
            }
            let k2 = 4usize;
            proptest::prop_assert!(d.len() <= k2 * (k2 - 1) + 1);
        }
    }
}
