//! Closed-form descriptions of expansion sets of the primed digit sets.
//!
//! These are pure arithmetic predicates. They never consult the expansion
//! machinery, which makes them usable as an independent oracle for it.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::digits::Fractal;
use crate::error::{Error, Result};
use crate::lattice::{exact_log, pow, split_power, IVec2, IVec3};

/// The named lattice subsets appearing in the closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LemmaSetId {
    /// `ℤ³ \ B_S`, the expansion set of `Δ(D_S′)`.
    CS,
    /// `{ 2ⁿ(x, y, z) : x, y, z odd, n ≥ 0 }`.
    BS,
    /// `{ (i, j) : i, j ≤ 0, i + j ≥ −3^{m+1} }`.
    A(u32),
    /// `3ℤ²`.
    B3Z,
    /// `{ i, j ≥ −3^m, i + j ≤ 2·3^m } ∪ { i, j ≤ 3^m, i + j ≥ −2·3^m }`.
    APrime(u32),
    /// `{ |i|, |j|, |i + j| < 3^m }`.
    GPrime(u32),
    /// `{ i ≡ j ≢ 0 (mod 3) }`.
    BPrime,
    /// `{ |i|, |j|, |i + j| ≤ 1 }`.
    J,
}

impl LemmaSetId {
    pub fn dim(self) -> usize {
        match self {
            LemmaSetId::CS | LemmaSetId::BS => 3,
            _ => 2,
        }
    }

    /// Membership of a planar point; `None` for the spatial sets.
    pub fn contains2(self, p: &IVec2) -> Option<bool> {
        let (i, j) = (&p.x, &p.y);
        Some(match self {
            LemmaSetId::CS | LemmaSetId::BS => return None,
            LemmaSetId::A(m) => {
                let s = pow(3, m + 1);
                !i.is_positive() && !j.is_positive() && i + j >= -s
            }
            LemmaSetId::B3Z => divides(&BigInt::from(3), i) && divides(&BigInt::from(3), j),
            LemmaSetId::APrime(m) => {
                // two triangles with legs of length 2·3^m, meeting in the
                // hexagon |i|, |j|, |i+j| ≤ 3^m
                let s = pow(3, m);
                let sum = i + j;
                let neg = -&s;
                (i >= &neg && j >= &neg && sum <= s) || (i <= &s && j <= &s && sum >= neg)
            }
            LemmaSetId::GPrime(m) => {
                let s = pow(3, m);
                i.abs() < s && j.abs() < s && (i + j).abs() < s
            }
            LemmaSetId::BPrime => {
                let three = BigInt::from(3);
                let (a, b) = (i.mod_floor(&three), j.mod_floor(&three));
                a == b && !a.is_zero()
            }
            LemmaSetId::J => {
                let one = BigInt::one();
                i.abs() <= one && j.abs() <= one && (i + j).abs() <= one
            }
        })
    }

    /// Membership of a spatial point; `None` for the planar sets.
    pub fn contains3(self, p: &IVec3) -> Option<bool> {
        match self {
            LemmaSetId::BS => Some(in_b_s(p)),
            LemmaSetId::CS => Some(!in_b_s(p)),
            _ => None,
        }
    }

    /// Bounding box `[lo, hi]²` of the bounded planar sets.
    fn bounds(self) -> Option<(BigInt, BigInt)> {
        match self {
            LemmaSetId::A(m) => Some((-pow(3, m + 1), BigInt::zero())),
            LemmaSetId::APrime(m) => {
                let s = pow(3, m + 1);
                Some((-&s, s))
            }
            LemmaSetId::GPrime(m) => {
                let s = pow(3, m) - 1;
                Some((-&s, s))
            }
            LemmaSetId::J => Some((BigInt::from(-1), BigInt::one())),
            _ => None,
        }
    }
}

impl fmt::Display for LemmaSetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LemmaSetId::CS => write!(f, "C_S"),
            LemmaSetId::BS => write!(f, "B_S"),
            LemmaSetId::A(m) => write!(f, "A_{m}"),
            LemmaSetId::B3Z => write!(f, "B_3Z"),
            LemmaSetId::APrime(m) => write!(f, "A'_{m}"),
            LemmaSetId::GPrime(m) => write!(f, "G'_{m}"),
            LemmaSetId::BPrime => write!(f, "B'"),
            LemmaSetId::J => write!(f, "J"),
        }
    }
}

fn divides(d: &BigInt, n: &BigInt) -> bool {
    (n % d).is_zero()
}

/// All three coordinates nonzero with the same 2-adic valuation.
fn in_b_s(p: &IVec3) -> bool {
    let cs = p.components();
    if cs.iter().any(|c| c.is_zero()) {
        return false;
    }
    let v: Vec<u32> = cs.iter().map(|c| split_power(c, 2).0).collect();
    v[0] == v[1] && v[1] == v[2]
}

/// Evaluates a named set at a point given by its coordinates.
pub fn lemma_set_member(id: LemmaSetId, p: &[BigInt]) -> Result<bool> {
    match (id.dim(), p) {
        (2, [x, y]) => Ok(id
            .contains2(&IVec2::new(x.clone(), y.clone()))
            .expect("planar set")),
        (3, [x, y, z]) => Ok(id
            .contains3(&IVec3::new(x.clone(), y.clone(), z.clone()))
            .expect("spatial set")),
        (d, _) => Err(Error::InvalidArgument(format!(
            "{id} is a subset of Z^{d}, got a point with {} coordinates",
            p.len()
        ))),
    }
}

/// A union of cosets `s·ℤ² + offsets`.
struct Cosets {
    modulus: BigInt,
    offsets: Vec<IVec2>,
}

impl Cosets {
    /// `3^n · 3ℤ²`.
    fn scaled_b(n: u32) -> Self {
        Cosets {
            modulus: pow(3, n + 1),
            offsets: vec![IVec2::zero()],
        }
    }

    /// `3^n · B′ = 3^{n+1}ℤ² + 3^n{(1,1), (2,2)}`.
    fn scaled_b_prime(n: u32) -> Self {
        let s = pow(3, n);
        Cosets {
            modulus: pow(3, n + 1),
            offsets: vec![IVec2::new(s.clone(), s.clone()), IVec2::new(&s * 2, &s * 2)],
        }
    }

    fn contains(&self, p: &IVec2) -> bool {
        self.offsets.iter().any(|o| {
            let q = p - o;
            divides(&self.modulus, &q.x) && divides(&self.modulus, &q.y)
        })
    }

    /// Is `p ∈ self + region` for a bounded region?
    fn plus_contains(&self, region: LemmaSetId, p: &IVec2) -> bool {
        let (lo, hi) = region.bounds().expect("bounded region");
        let s = &self.modulus;
        self.offsets.iter().any(|o| {
            // lattice translates q = s·(a, b) + o with p − q inside [lo, hi]²
            let rx = &p.x - &o.x;
            let ry = &p.y - &o.y;
            let (ax0, ax1) = ((&rx - &hi).div_ceil(s), (&rx - &lo).div_floor(s));
            let (ay0, ay1) = ((&ry - &hi).div_ceil(s), (&ry - &lo).div_floor(s));
            let mut a = ax0;
            while a <= ax1 {
                let mut b = ay0.clone();
                while b <= ay1 {
                    let d = IVec2::new(&rx - s * &a, &ry - s * &b);
                    if region.contains2(&d).expect("planar") {
                        return true;
                    }
                    b += 1;
                }
                a += 1;
            }
            false
        })
    }
}

/// The heights at which a closed form for the slice is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SliceShape {
    /// `z = 0`.
    Zero,
    /// `z = 3ⁿ`.
    Power { n: u32 },
    /// `z = 3^m(3ⁿ − 1)`, `n > 0`.
    Mixed { m: u32, n: u32 },
}

impl SliceShape {
    /// Recognizes `|z|`; `None` for heights of no listed form.
    pub fn of(z: &BigInt) -> Option<Self> {
        if z.is_zero() {
            return Some(SliceShape::Zero);
        }
        let (m, w) = split_power(&z.abs(), 3);
        if w.is_one() {
            return Some(SliceShape::Power { n: m });
        }
        exact_log(&(w + 1), 3).map(|n| SliceShape::Mixed { m, n })
    }

    pub fn height(self) -> BigInt {
        match self {
            SliceShape::Zero => BigInt::zero(),
            SliceShape::Power { n } => pow(3, n),
            SliceShape::Mixed { m, n } => pow(3, m) * (pow(3, n) - 1),
        }
    }
}

/// Closed form of the slice `E(3, Δ(D′))_z` for `D′ = D_T′` or `D_H′`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SliceClosedForm {
    pub fractal: Fractal,
    pub shape: SliceShape,
    /// Negative heights: the expansion set is symmetric under `p ↦ −p`.
    pub negated: bool,
}

impl SliceClosedForm {
    /// `None` when the family has no planar closed forms (S) or the height
    /// is of no listed form.
    pub fn for_height(fractal: Fractal, z: &BigInt) -> Option<Self> {
        if fractal == Fractal::S {
            return None;
        }
        let shape = SliceShape::of(z)?;
        Some(SliceClosedForm {
            fractal,
            shape,
            negated: z.is_negative(),
        })
    }

    pub fn height(&self) -> BigInt {
        let h = self.shape.height();
        if self.negated {
            -h
        } else {
            h
        }
    }

    pub fn contains(&self, p: &IVec2) -> bool {
        if self.negated {
            return self.contains_positive(&-p);
        }
        self.contains_positive(p)
    }

    fn contains_positive(&self, p: &IVec2) -> bool {
        match (self.fractal, self.shape) {
            (_, SliceShape::Zero) => true,
            (Fractal::T, SliceShape::Power { n }) => !Cosets::scaled_b(n).contains(p),
            (Fractal::T, SliceShape::Mixed { m, n }) => {
                !Cosets::scaled_b(m).contains(p)
                    && !Cosets::scaled_b(m + n).plus_contains(LemmaSetId::A(m), p)
            }
            (Fractal::H, SliceShape::Power { n }) => !Cosets::scaled_b_prime(n).contains(p),
            (Fractal::H, SliceShape::Mixed { m, n }) => {
                let outer = Cosets::scaled_b_prime(m + n);
                let main = !Cosets::scaled_b_prime(m).contains(p)
                    && !outer.plus_contains(LemmaSetId::APrime(m), p);
                main || outer.plus_contains(LemmaSetId::GPrime(m), p)
            }
            (Fractal::S, _) => unreachable!("no planar closed form for S"),
        }
    }

    /// Human-readable formula.
    pub fn describe(&self) -> String {
        let body = match (self.fractal, self.shape) {
            (_, SliceShape::Zero) => "Z^2".to_string(),
            (Fractal::T, SliceShape::Power { n }) => format!("Z^2 \\ 3^{n}B"),
            (Fractal::T, SliceShape::Mixed { m, n }) => {
                format!("Z^2 \\ 3^{m}B \\ (3^{}B + A_{m})", m + n)
            }
            (Fractal::H, SliceShape::Power { n }) => format!("Z^2 \\ 3^{n}B'"),
            (Fractal::H, SliceShape::Mixed { m, n }) => {
                format!(
                    "(Z^2 \\ 3^{m}B' \\ (3^{k}B' + A'_{m})) u (3^{k}B' + G'_{m})",
                    k = m + n
                )
            }
            (Fractal::S, _) => unreachable!(),
        };
        if self.negated {
            format!("-({body})")
        } else {
            body
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn spec_examples() {
        assert!(!lemma_set_member(LemmaSetId::CS, &[b(1), b(1), b(1)]).unwrap());
        assert!(lemma_set_member(LemmaSetId::BPrime, &[b(2), b(5)]).unwrap());
        assert!(lemma_set_member(LemmaSetId::A(0), &[b(0), b(-3)]).unwrap());
        assert!(!lemma_set_member(LemmaSetId::A(0), &[b(1), b(0)]).unwrap());
        assert!(lemma_set_member(LemmaSetId::J, &[b(0), b(0), b(0)]).is_err());
    }

    #[test]
    fn dyadic_odd_set() {
        assert!(lemma_set_member(LemmaSetId::BS, &[b(2), b(-6), b(10)]).unwrap());
        assert!(!lemma_set_member(LemmaSetId::BS, &[b(2), b(4), b(10)]).unwrap());
        assert!(!lemma_set_member(LemmaSetId::BS, &[b(0), b(1), b(1)]).unwrap());
        assert!(lemma_set_member(LemmaSetId::CS, &[b(1), b(1), b(0)]).unwrap());
    }

    #[test]
    fn shapes() {
        assert_eq!(SliceShape::of(&b(0)), Some(SliceShape::Zero));
        assert_eq!(SliceShape::of(&b(1)), Some(SliceShape::Power { n: 0 }));
        assert_eq!(SliceShape::of(&b(-27)), Some(SliceShape::Power { n: 3 }));
        assert_eq!(
            SliceShape::of(&b(2)),
            Some(SliceShape::Mixed { m: 0, n: 1 })
        );
        assert_eq!(
            SliceShape::of(&b(6)),
            Some(SliceShape::Mixed { m: 1, n: 1 })
        );
        assert_eq!(
            SliceShape::of(&b(72)),
            Some(SliceShape::Mixed { m: 2, n: 2 })
        );
        assert_eq!(SliceShape::of(&b(4)), None);
        assert_eq!(SliceShape::of(&b(5)), None);
    }

    #[test]
    fn hexagram_region() {
        let a = |i, j| lemma_set_member(LemmaSetId::APrime(1), &[b(i), b(j)]).unwrap();
        assert!(a(-3, 6) && a(-6, 3) && a(3, 3) && a(6, -3) && a(0, 0));
        assert!(!a(-3, 7) && !a(4, 4) && !a(-4, -4) && !a(-7, 3));
        assert!(a(-2, 4) && !a(-4, 4));
    }

    #[test]
    fn slices_match_the_decider() {
        use crate::digits::{canonical, DigitFamily};
        use crate::expansion::slice;
        use crate::lattice::Window2;
        let win = Window2::centered(14);
        for (f, fam) in [
            (Fractal::T, DigitFamily::TPrime),
            (Fractal::H, DigitFamily::HPrime),
        ] {
            let digits = canonical(fam).delta().points().to_vec();
            for z in [0, 1, 2, 3, 6, 8, 9, 18, 24, 26, -2, -6, -8] {
                let z = b(z);
                let form = SliceClosedForm::for_height(f, &z).unwrap();
                let s = slice(3, &digits, &z, &win).unwrap();
                for p in win.points() {
                    assert_eq!(s.contains(&p), form.contains(&p), "{f} z = {z} at {p}");
                }
            }
        }
    }

    // Direct enumeration of (s·ℤ² + offsets) + region over a generous range of
    // lattice translates.
    fn brute_plus(c: &Cosets, region: LemmaSetId, p: &IVec2) -> bool {
        let s = &c.modulus;
        (-45..=45).any(|a| {
            (-45..=45).any(|bb| {
                c.offsets.iter().any(|o| {
                    let q = IVec2::new(s * a + &o.x, s * bb + &o.y);
                    region.contains2(&(p - &q)).unwrap()
                })
            })
        })
    }

    proptest! {
        #[test]
        fn coset_sums_match_enumeration(x in -40i64..40, y in -40i64..40, m in 0u32..2, n in 0u32..2) {
            let p = IVec2::new(x, y);
            for (c, r) in [
                (Cosets::scaled_b(m + n), LemmaSetId::A(m)),
                (Cosets::scaled_b_prime(m + n), LemmaSetId::APrime(m)),
                (Cosets::scaled_b_prime(m + n), LemmaSetId::GPrime(m)),
            ] {
                prop_assert_eq!(c.plus_contains(r, &p), brute_plus(&c, r, &p));
            }
        }

        #[test]
        fn b_prime_cosets_match_definition(x in -60i64..60, y in -60i64..60, n in 0u32..3) {
            let p = IVec2::new(x, y);
            let s = pow(3, n);
            let direct = match p.div_exact(&s) {
                Some(q) => LemmaSetId::BPrime.contains2(&q).unwrap(),
                None => false,
            };
            prop_assert_eq!(Cosets::scaled_b_prime(n).contains(&p), direct);
        }
    }
}
