//! Exact integer and rational lattice arithmetic.
//!
//! Every coordinate is an arbitrary-precision integer or a reduced
//! rational, so no construction in this crate can overflow.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Reduced rational number; the denominator is always positive.
pub type Rat = BigRational;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: &BigInt) -> Rat {
    Rat::from_integer(v.clone())
}

/// `k^e` as a big integer.
pub fn pow(k: u32, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(k), e as usize)
}

/// Point of the integer lattice ℤ³.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IVec3 {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
}

/// Point of the integer lattice ℤ².
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IVec2 {
    pub x: BigInt,
    pub y: BigInt,
}

/// Point of ℚ².
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVec2 {
    pub x: Rat,
    pub y: Rat,
}

impl IVec3 {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, z: impl Into<BigInt>) -> Self {
        IVec3 {
            x: x.into(),
            y: y.into(),
            z: z.into(),
        }
    }

    pub fn zero() -> Self {
        IVec3::new(0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn components(&self) -> [&BigInt; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn sum(&self) -> BigInt {
        &self.x + &self.y + &self.z
    }

    pub fn norm_inf(&self) -> BigInt {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        IVec3 {
            x: &self.x * s,
            y: &self.y * s,
            z: &self.z * s,
        }
    }

    /// Exact division; `None` unless `s` divides every component.
    pub fn div_exact(&self, s: &BigInt) -> Option<Self> {
        let (qx, rx) = self.x.div_rem(s);
        let (qy, ry) = self.y.div_rem(s);
        let (qz, rz) = self.z.div_rem(s);
        (rx.is_zero() && ry.is_zero() && rz.is_zero()).then_some(IVec3 {
            x: qx,
            y: qy,
            z: qz,
        })
    }

    pub fn to_i64(&self) -> Option<[i64; 3]> {
        Some([self.x.to_i64()?, self.y.to_i64()?, self.z.to_i64()?])
    }

    pub fn from_i64(v: [i64; 3]) -> Self {
        IVec3::new(v[0], v[1], v[2])
    }

    pub fn xy(&self) -> IVec2 {
        IVec2 {
            x: self.x.clone(),
            y: self.y.clone(),
        }
    }
}

impl IVec2 {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        IVec2 {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn zero() -> Self {
        IVec2::new(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn norm_inf(&self) -> BigInt {
        self.x.abs().max(self.y.abs())
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        IVec2 {
            x: &self.x * s,
            y: &self.y * s,
        }
    }

    pub fn div_exact(&self, s: &BigInt) -> Option<Self> {
        let (qx, rx) = self.x.div_rem(s);
        let (qy, ry) = self.y.div_rem(s);
        (rx.is_zero() && ry.is_zero()).then_some(IVec2 { x: qx, y: qy })
    }

    pub fn to_i64(&self) -> Option<[i64; 2]> {
        Some([self.x.to_i64()?, self.y.to_i64()?])
    }

    pub fn from_i64(v: [i64; 2]) -> Self {
        IVec2::new(v[0], v[1])
    }

    pub fn to_rat(&self) -> RatVec2 {
        RatVec2 {
            x: rat_int(&self.x),
            y: rat_int(&self.y),
        }
    }

    pub fn with_z(&self, z: &BigInt) -> IVec3 {
        IVec3 {
            x: self.x.clone(),
            y: self.y.clone(),
            z: z.clone(),
        }
    }
}

impl RatVec2 {
    pub fn new(x: Rat, y: Rat) -> Self {
        RatVec2 { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        RatVec2 {
            x: rat(x, 1),
            y: rat(y, 1),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    /// The lattice point, when both coordinates are integers.
    pub fn to_ivec(&self) -> Option<IVec2> {
        self.is_integral().then(|| IVec2 {
            x: self.x.to_integer(),
            y: self.y.to_integer(),
        })
    }

    pub fn scale(&self, s: &Rat) -> Self {
        RatVec2 {
            x: &self.x * s,
            y: &self.y * s,
        }
    }
}

macro_rules! impl_vec_ops {
    ($t:ident { $($f:ident),+ }) => {
        impl Add for &$t {
            type Output = $t;
            fn add(self, o: &$t) -> $t { $t { $($f: &self.$f + &o.$f),+ } }
        }
        impl Sub for &$t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t { $t { $($f: &self.$f - &o.$f),+ } }
        }
        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t { $t { $($f: -&self.$f),+ } }
        }
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t { &self + &o }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t { &self - &o }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t { -&self }
        }
    };
}

impl_vec_ops!(IVec3 { x, y, z });
impl_vec_ops!(IVec2 { x, y });
impl_vec_ops!(RatVec2 { x, y });

impl Mul<&BigInt> for &IVec3 {
    type Output = IVec3;
    fn mul(self, s: &BigInt) -> IVec3 {
        self.scale(s)
    }
}

impl fmt::Display for IVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl fmt::Display for IVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for RatVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Inclusive axis-aligned box in ℤ².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window2 {
    lo: IVec2,
    hi: IVec2,
}

/// Inclusive axis-aligned box in ℤ³.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window3 {
    lo: IVec3,
    hi: IVec3,
}

impl Window2 {
    pub fn new(lo: IVec2, hi: IVec2) -> Result<Self> {
        if lo.x > hi.x || lo.y > hi.y {
            return Err(Error::InvalidWindow(format!("{lo} > {hi}")));
        }
        Ok(Window2 { lo, hi })
    }

    pub fn from_bounds(x: (i64, i64), y: (i64, i64)) -> Result<Self> {
        Window2::new(IVec2::new(x.0, y.0), IVec2::new(x.1, y.1))
    }

    /// `[-r, r]²`.
    pub fn centered(r: u64) -> Self {
        let r = r as i64;
        Window2 {
            lo: IVec2::new(-r, -r),
            hi: IVec2::new(r, r),
        }
    }

    pub fn lo(&self) -> &IVec2 {
        &self.lo
    }

    pub fn hi(&self) -> &IVec2 {
        &self.hi
    }

    pub fn contains(&self, p: &IVec2) -> bool {
        self.lo.x <= p.x && p.x <= self.hi.x && self.lo.y <= p.y && p.y <= self.hi.y
    }

    /// Largest absolute coordinate of any point in the window.
    pub fn radius(&self) -> BigInt {
        self.lo.norm_inf().max(self.hi.norm_inf())
    }

    /// All points in lexicographic `(x, y)` order.
    pub fn points(&self) -> Vec<IVec2> {
        let mut out = Vec::new();
        let mut x = self.lo.x.clone();
        while x <= self.hi.x {
            let mut y = self.lo.y.clone();
            while y <= self.hi.y {
                out.push(IVec2 {
                    x: x.clone(),
                    y: y.clone(),
                });
                y += 1;
            }
            x += 1;
        }
        out
    }

    pub fn len(&self) -> BigInt {
        (&self.hi.x - &self.lo.x + 1) * (&self.hi.y - &self.lo.y + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl Window3 {
    pub fn new(lo: IVec3, hi: IVec3) -> Result<Self> {
        if lo.x > hi.x || lo.y > hi.y || lo.z > hi.z {
            return Err(Error::InvalidWindow(format!("{lo} > {hi}")));
        }
        Ok(Window3 { lo, hi })
    }

    pub fn from_bounds(x: (i64, i64), y: (i64, i64), z: (i64, i64)) -> Result<Self> {
        Window3::new(IVec3::new(x.0, y.0, z.0), IVec3::new(x.1, y.1, z.1))
    }

    /// `[-r, r]³`.
    pub fn centered(r: u64) -> Self {
        let r = r as i64;
        Window3 {
            lo: IVec3::new(-r, -r, -r),
            hi: IVec3::new(r, r, r),
        }
    }

    pub fn lo(&self) -> &IVec3 {
        &self.lo
    }

    pub fn hi(&self) -> &IVec3 {
        &self.hi
    }

    pub fn contains(&self, p: &IVec3) -> bool {
        self.lo.x <= p.x
            && p.x <= self.hi.x
            && self.lo.y <= p.y
            && p.y <= self.hi.y
            && self.lo.z <= p.z
            && p.z <= self.hi.z
    }

    pub fn radius(&self) -> BigInt {
        self.lo.norm_inf().max(self.hi.norm_inf())
    }

    /// All points in lexicographic `(x, y, z)` order.
    pub fn points(&self) -> Vec<IVec3> {
        let mut out = Vec::new();
        let mut x = self.lo.x.clone();
        while x <= self.hi.x {
            let mut y = self.lo.y.clone();
            while y <= self.hi.y {
                let mut z = self.lo.z.clone();
                while z <= self.hi.z {
                    out.push(IVec3 {
                        x: x.clone(),
                        y: y.clone(),
                        z: z.clone(),
                    });
                    z += 1;
                }
                y += 1;
            }
            x += 1;
        }
        out
    }

    /// The `z = c` section as a planar window.
    pub fn slice_window(&self) -> Window2 {
        Window2 {
            lo: self.lo.xy(),
            hi: self.hi.xy(),
        }
    }
}

pub fn gcd3(a: &BigInt, b: &BigInt, c: &BigInt) -> BigInt {
    a.gcd(b).gcd(c)
}

/// Divides out the content of `v` and makes the first nonzero component
/// positive, so `v` and `-v` reduce to the same direction.
pub fn reduce_direction(v: &IVec3) -> Result<IVec3> {
    if v.is_zero() {
        return Err(Error::DegenerateDirection);
    }
    let g = gcd3(&v.x, &v.y, &v.z);
    let mut r = v.div_exact(&g).expect("gcd divides every component");
    let first = [&r.x, &r.y, &r.z]
        .into_iter()
        .find(|c| !c.is_zero())
        .cloned()
        .unwrap();
    if first.is_negative() {
        r = -r;
    }
    Ok(r)
}

/// Balanced ternary digits of `z`, least significant first; empty for zero.
pub fn balanced_ternary(z: &BigInt) -> Vec<i8> {
    let three = BigInt::from(3);
    let mut digits = Vec::new();
    let mut n = z.clone();
    while !n.is_zero() {
        let r = n.mod_floor(&three);
        let d: i8 = match r.to_u8().unwrap() {
            0 => 0,
            1 => 1,
            _ => -1,
        };
        n = (n - BigInt::from(d)) / &three;
        digits.push(d);
    }
    digits
}

/// Evaluates `Σ a_i 3^i`.
pub fn eval_balanced_ternary(digits: &[i8]) -> BigInt {
    digits
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, &d| acc * 3 + BigInt::from(d))
}

/// `(v_p(n), n / p^v_p(n))` for `n ≠ 0`.
pub fn split_power(n: &BigInt, p: u32) -> (u32, BigInt) {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

/// Exponent `e` with `n = p^e`, if `n` is a positive power of `p`.
pub fn exact_log(n: &BigInt, p: u32) -> Option<u32> {
    if !n.is_positive() {
        return None;
    }
    let (v, rest) = split_power(n, p);
    rest.is_one().then_some(v)
}

/// Renders a rational as `n` or `n/d`.
pub fn rat_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `n`, `n/d`, or a finite decimal such as `-1.25` into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    let (value, _) = parse_decimal(s)?;
    Ok(value)
}

/// Parses a finite decimal into an exact rational together with the number
/// of fractional digits printed.
pub fn parse_decimal(s: &str) -> Result<(Rat, u32)> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a decimal number: {s:?}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().all(|c| c.is_ascii_digit()) || !fp.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{ip}{fp}");
    let mut num: BigInt = digits.parse().map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let places = fp.len() as u32;
    Ok((Rat::new(num, pow(10, places)), places))
}
