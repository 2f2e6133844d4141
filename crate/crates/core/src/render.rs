//! Projection of spatial digit sets and rasterization of planar attractors.
//!
//! The rasterizer works entirely in integers: digits are scaled to a common
//! denominator, and every level-`n` cell `F_w(A₀)` of the approximation
//! sequence `A₀ ⊇ F(A₀) ⊇ F²(A₀) ⊇ …` is mapped to pixel indices with exact
//! floor/ceil division. The seed `A₀` is the bounding box of the fixed points
//! `d/(k−1)`, which `F` maps into itself.

use std::fmt::Write as _;
use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::digits::{canonical, DigitFamily, DigitSet2, DigitSet3, Fractal};
use crate::error::{Error, Result};
use crate::lattice::{rat_int, IVec3, Rat, RatVec2};

/// Target plane of a projection, with its affine planar coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlaneConvention {
    /// `x + y + z = 1`; `(0,0,1), (1,0,0), (0,1,0)` get coordinates
    /// `(0,0), (1,0), (0,1)`.
    SumOne,
    /// `x + y + z = 0`; `(0,0,0), (−1,0,1), (0,−1,1)` get coordinates
    /// `(0,0), (1,0), (0,1)`.
    SumZero,
    /// `x + y + z = −1`; `(0,0,−1), (1,0,0), (0,1,0)` get coordinates
    /// `(0,0), (1,0), (0,1)`.
    SumMinusOne,
    /// The `xy`-plane with its own coordinates.
    XY,
}

impl PlaneConvention {
    /// The plane paired with each digit family.
    pub fn for_family(f: DigitFamily) -> Self {
        match f {
            DigitFamily::S => PlaneConvention::SumOne,
            DigitFamily::H => PlaneConvention::SumZero,
            DigitFamily::T => PlaneConvention::SumMinusOne,
            DigitFamily::SPrime | DigitFamily::TPrime | DigitFamily::HPrime => PlaneConvention::XY,
        }
    }

    fn level(self) -> i64 {
        match self {
            PlaneConvention::SumOne => 1,
            PlaneConvention::SumZero => 0,
            PlaneConvention::SumMinusOne => -1,
            PlaneConvention::XY => 0,
        }
    }
}

/// Parallel projection along an integer direction onto a target plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionMap {
    direction: IVec3,
    plane: PlaneConvention,
}

impl ProjectionMap {
    pub fn new(direction: IVec3, plane: PlaneConvention) -> Result<Self> {
        if direction.is_zero() {
            return Err(Error::DegenerateDirection);
        }
        let parallel = match plane {
            PlaneConvention::XY => direction.z.is_zero(),
            _ => direction.sum().is_zero(),
        };
        if parallel {
            return Err(Error::ParallelToPlane(direction.to_string()));
        }
        Ok(ProjectionMap { direction, plane })
    }

    pub fn for_family(f: DigitFamily, direction: IVec3) -> Result<Self> {
        ProjectionMap::new(direction, PlaneConvention::for_family(f))
    }

    pub fn direction(&self) -> &IVec3 {
        &self.direction
    }

    pub fn plane(&self) -> PlaneConvention {
        self.plane
    }

    pub fn apply(&self, p: &IVec3) -> RatVec2 {
        let d = &self.direction;
        let (x, y) = (rat_int(&p.x), rat_int(&p.y));
        if self.plane == PlaneConvention::XY {
            let t = Rat::new(p.z.clone(), d.z.clone());
            return RatVec2::new(x - &t * rat_int(&d.x), y - &t * rat_int(&d.y));
        }
        // move along the direction until the coordinate sum hits the plane
        let lambda = Rat::new(BigInt::from(self.plane.level()) - p.sum(), d.sum());
        let px = x + &lambda * rat_int(&d.x);
        let py = y + &lambda * rat_int(&d.y);
        match self.plane {
            PlaneConvention::SumZero => RatVec2::new(-px, -py),
            _ => RatVec2::new(px, py),
        }
    }
}

/// Image of a digit set as a multiset, with the merged pairs listed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectedDigits {
    pub k: u32,
    /// One image per input digit, in the input order.
    pub points: Vec<RatVec2>,
    /// Index pairs `(i, j)`, `i < j`, with equal images.
    pub collisions: Vec<(usize, usize)>,
}

impl ProjectedDigits {
    pub fn has_collisions(&self) -> bool {
        !self.collisions.is_empty()
    }

    /// Distinct images, sorted.
    pub fn distinct(&self) -> Vec<RatVec2> {
        let mut v = self.points.clone();
        v.sort();
        v.dedup();
        v
    }
}

pub fn project_points(d: &DigitSet3, map: &ProjectionMap) -> ProjectedDigits {
    let points: Vec<RatVec2> = d.points().iter().map(|p| map.apply(p)).collect();
    let mut collisions = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                collisions.push((i, j));
            }
        }
    }
    ProjectedDigits {
        k: d.k(),
        points,
        collisions,
    }
}

/// The projected planar digit set; fails when two digits merge, since the
/// image is then not a digit set of `k²` points.
pub fn project_digit_set(d: &DigitSet3, map: &ProjectionMap) -> Result<DigitSet2> {
    let proj = project_points(d, map);
    if let Some(&(i, j)) = proj.collisions.first() {
        return Err(Error::DigitCollision(format!(
            "{} and {} along {}",
            d.points()[i],
            d.points()[j],
            map.direction
        )));
    }
    DigitSet2::new(d.k(), proj.points)
}

/// A coverage bitmap, row-major with the top row first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub depth: u32,
    bits: Vec<u8>,
    /// Scaled seed box `[lo, hi]` per axis, in units of `1/(scale·(k−1))`.
    pub lo: [i128; 2],
    pub hi: [i128; 2],
    pub scale: BigInt,
}

impl Raster {
    pub fn get(&self, col: usize, row: usize) -> bool {
        self.bits[row * self.width + col] != 0
    }

    pub fn covered(&self) -> usize {
        self.bits.iter().filter(|&&b| b != 0).count()
    }

    /// Pixel index range `[start, end)` of the framed seed box on each axis.
    pub fn region(&self) -> (usize, usize) {
        let r = self.width;
        (r / 20, (19 * r).div_ceil(20))
    }

    /// Covered pixels and total pixels of the framed seed box.
    pub fn coverage_counts(&self) -> (u64, u64) {
        let (a, b) = self.region();
        let mut covered = 0u64;
        for row in a..b {
            for col in a..b {
                covered += self.get(col, row) as u64;
            }
        }
        (covered, ((b - a) * (b - a)) as u64)
    }

    pub fn coverage(&self) -> f64 {
        let (c, t) = self.coverage_counts();
        c as f64 / t as f64
    }

    /// Binary PGM: 0 background, 255 covered.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.bits.iter().map(|&b| if b != 0 { 255 } else { 0 }));
        out
    }

    /// Plain PBM (`1` = covered).
    pub fn to_pbm(&self) -> String {
        let mut out = format!("P1\n{} {}\n", self.width, self.height);
        for row in self.bits.chunks(self.width) {
            let line: Vec<&str> = row
                .iter()
                .map(|&b| if b != 0 { "1" } else { "0" })
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn write_pgm(&self, path: &std::path::Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(&self.to_pgm())?;
        Ok(())
    }
}

struct Frame {
    k: i128,
    res: i128,
    depth: u32,
    digits: Vec<[i128; 2]>,
    /// Seed box `[seed_lo, seed_lo + seed_span]`, scaled by `k − 1`.
    seed_lo: [i128; 2],
    seed_span: [i128; 2],
    /// Box mapped onto `[0.05R, 0.95R]`; wider than the seed box only on
    /// axes where the seed box is flat.
    frame_lo: [i128; 2],
    frame_span: [i128; 2],
    /// `k^level` for each level up to the depth.
    powers: Vec<i128>,
}

impl Frame {
    /// Pixel range `[first, last]` covered by the cell `(A₀ + (k−1)e)/k^level`.
    fn range(&self, axis: usize, level: u32, e: i128) -> (usize, usize) {
        let kp = self.powers[level as usize];
        let lo = self.frame_lo[axis];
        let span = self.frame_span[axis];
        let den = 20 * span * kp;
        let base = span * kp - 18 * lo * kp;
        let x_lo = self.seed_lo[axis] + (self.k - 1) * e;
        let x_hi = x_lo + self.seed_span[axis];
        let a = Integer::div_floor(&(self.res * (base + 18 * x_lo)), &den);
        let b = Integer::div_ceil(&(self.res * (base + 18 * x_hi)), &den) - 1;
        let last = b.max(a);
        let clamp = |v: i128| v.clamp(0, self.res - 1) as usize;
        (clamp(a), clamp(last))
    }

    fn walk(&self, level: u32, e: [i128; 2], bits: &mut [u8]) {
        let res = self.res as usize;
        let (x0, x1) = self.range(0, level, e[0]);
        let (y0, y1) = self.range(1, level, e[1]);
        // rows count downward from the top
        let (r0, r1) = (res - 1 - y1, res - 1 - y0);
        if level == self.depth || (x0 == x1 && y0 == y1) {
            for row in r0..=r1 {
                bits[row * res + x0..=row * res + x1].fill(1);
            }
            return;
        }
        if (x1 - x0 + 1) * (r1 - r0 + 1) <= 64
            && (r0..=r1).all(|row| {
                bits[row * res + x0..=row * res + x1]
                    .iter()
                    .all(|&b| b != 0)
            })
        {
            return;
        }
        for d in &self.digits {
            self.walk(
                level + 1,
                [self.k * e[0] + d[0], self.k * e[1] + d[1]],
                bits,
            );
        }
    }
}

/// Rasterizes the level-`depth` approximation of the attractor of
/// `x ↦ (x + d)/k`, `d ∈ points` (repeated points are allowed).
///
/// The seed box is framed into `[0.05R, 0.95R]` on each axis; a pixel is
/// covered iff some level-`depth` cell box meets its interior.
pub fn rasterize_points(k: u32, points: &[RatVec2], depth: u32, res: usize) -> Result<Raster> {
    if res < 16 {
        return Err(Error::InvalidArgument(format!(
            "resolution {res} is below 16"
        )));
    }
    if k < 2 || points.is_empty() {
        return Err(Error::InvalidDigitSet(
            "need k ≥ 2 and at least one digit".into(),
        ));
    }
    let scale = points
        .iter()
        .flat_map(|p| [p.x.denom().clone(), p.y.denom().clone()])
        .fold(BigInt::from(1), |acc, d| acc.lcm(&d));
    let to_int = |r: &Rat| -> Result<i128> {
        (r.numer() * (&scale / r.denom()))
            .to_i64()
            .map(i128::from)
            .ok_or(Error::Overflow)
    };
    let mut digits: Vec<[i128; 2]> = points
        .iter()
        .map(|p| Ok([to_int(&p.x)?, to_int(&p.y)?]))
        .collect::<Result<_>>()?;
    digits.sort();
    digits.dedup();

    let mut seed_lo = [0i128; 2];
    let mut seed_span = [0i128; 2];
    let mut frame_lo = [0i128; 2];
    let mut frame_span = [0i128; 2];
    for axis in 0..2 {
        let a = digits.iter().map(|d| d[axis]).min().unwrap();
        let b = digits.iter().map(|d| d[axis]).max().unwrap();
        seed_lo[axis] = a;
        seed_span[axis] = b - a;
        // a flat axis is framed in the middle of a box of width 2
        (frame_lo[axis], frame_span[axis]) = if a == b { (a - 1, 2) } else { (a, b - a) };
    }

    let k128 = k as i128;
    let mut powers = vec![1i128];
    for _ in 0..depth {
        let next = powers
            .last()
            .unwrap()
            .checked_mul(k128)
            .ok_or(Error::Overflow)?;
        powers.push(next);
    }
    // every intermediate product is bounded by this
    let mag = frame_lo
        .iter()
        .chain(frame_span.iter())
        .map(|v| v.abs())
        .max()
        .unwrap()
        + 2;
    let kp = *powers.last().unwrap();
    mag.checked_mul(kp)
        .and_then(|v| v.checked_mul(40 * k128))
        .and_then(|v| v.checked_mul(res as i128))
        .ok_or(Error::Overflow)?;

    let frame = Frame {
        k: k128,
        res: res as i128,
        depth,
        digits,
        seed_lo,
        seed_span,
        frame_lo,
        frame_span,
        powers,
    };
    let size = res * res;
    let bits = if depth == 0 {
        let mut bits = vec![0u8; size];
        frame.walk(0, [0, 0], &mut bits);
        bits
    } else {
        frame
            .digits
            .par_iter()
            .map(|d| {
                let mut bits = vec![0u8; size];
                frame.walk(1, *d, &mut bits);
                bits
            })
            .reduce(
                || vec![0u8; size],
                |mut a, b| {
                    a.iter_mut().zip(&b).for_each(|(x, y)| *x |= y);
                    a
                },
            )
    };
    let hi = [seed_lo[0] + seed_span[0], seed_lo[1] + seed_span[1]];
    Ok(Raster {
        width: res,
        height: res,
        depth,
        bits,
        lo: seed_lo,
        hi,
        scale,
    })
}

pub fn rasterize(d: &DigitSet2, depth: u32, res: usize) -> Result<Raster> {
    rasterize_points(d.k(), d.points(), depth, res)
}

/// Projects the canonical digit set of `f` along `direction` onto its plane
/// and rasterizes the result. Merged digits are rendered once.
pub fn render_direction(
    f: Fractal,
    direction: &IVec3,
    depth: u32,
    res: usize,
) -> Result<(Raster, ProjectedDigits)> {
    let map = ProjectionMap::for_family(f.into(), direction.clone())?;
    let proj = project_points(&canonical(f.into()), &map);
    let raster = rasterize_points(proj.k, &proj.points, depth, res)?;
    Ok((raster, proj))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoveragePoint {
    pub depth: u32,
    pub covered: u64,
    pub total: u64,
}

impl CoveragePoint {
    pub fn fraction(&self) -> f64 {
        self.covered as f64 / self.total as f64
    }

    /// The fraction to six decimals, rounding half to even, computed exactly.
    pub fn fraction_string(&self) -> String {
        let scaled = self.covered as u128 * 1_000_000;
        let total = self.total as u128;
        let (mut q, r) = (scaled / total, scaled % total);
        if 2 * r > total || (2 * r == total && q % 2 == 1) {
            q += 1;
        }
        format!("{}.{:06}", q / 1_000_000, q % 1_000_000)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageSeries {
    pub resolution: usize,
    pub points: Vec<CoveragePoint>,
}

impl CoverageSeries {
    pub fn at(&self, depth: u32) -> Option<f64> {
        self.points
            .iter()
            .find(|p| p.depth == depth)
            .map(CoveragePoint::fraction)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("depth,fraction\n");
        for p in &self.points {
            writeln!(out, "{},{}", p.depth, p.fraction_string()).unwrap();
        }
        out
    }
}

/// Covered fraction of the framed seed box at depths `1..=max_depth`.
pub fn coverage_series_points(
    k: u32,
    points: &[RatVec2],
    max_depth: u32,
    res: usize,
) -> Result<CoverageSeries> {
    if max_depth < 1 {
        return Err(Error::InvalidArgument(
            "coverage needs a maximum depth of at least 1".into(),
        ));
    }
    let points = (1..=max_depth)
        .map(|depth| {
            let (covered, total) = rasterize_points(k, points, depth, res)?.coverage_counts();
            Ok(CoveragePoint {
                depth,
                covered,
                total,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CoverageSeries {
        resolution: res,
        points,
    })
}

pub fn coverage_series(d: &DigitSet2, max_depth: u32, res: usize) -> Result<CoverageSeries> {
    coverage_series_points(d.k(), d.points(), max_depth, res)
}

/// Drops coordinate `axis` of every digit: the projection along a
/// coordinate axis.
pub fn axis_projection(d: &DigitSet3, axis: usize) -> Vec<RatVec2> {
    d.points()
        .iter()
        .map(|p| {
            let c = p.components();
            let (a, b) = match axis {
                0 => (c[1], c[2]),
                1 => (c[0], c[2]),
                _ => (c[0], c[1]),
            };
            RatVec2::new(rat_int(a), rat_int(b))
        })
        .collect()
}

/// Does the attractor of `D` project onto a full square along each
/// coordinate axis? Checked geometrically: every axis image, rasterized at
/// `depth`, covers its whole framed box.
pub fn projects_to_squares(d: &DigitSet3, depth: u32, res: usize) -> Result<bool> {
    for axis in 0..3 {
        let r = rasterize_points(d.k(), &axis_projection(d, axis), depth, res)?;
        let (c, t) = r.coverage_counts();
        if c != t {
            return Ok(false);
        }
    }
    Ok(true)
}
