//! Latin squares of small order and the cube arrangements they induce,
//! counted up to symmetries of the cube.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::digits::{from_latin_square, LatinSquare};
use crate::error::{Error, Result};

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 5;

fn check_degree(k: u32) -> Result<usize> {
    if (MIN_DEGREE..=MAX_DEGREE).contains(&k) {
        Ok(k as usize)
    } else {
        Err(Error::DegreeOutOfRange(k))
    }
}

/// All Latin squares of order `k`, in lexicographic order of their cells.
pub fn all_latin_squares(k: u32) -> Result<Vec<LatinSquare>> {
    let n = check_degree(k)?;
    let first_rows = permutations(n);
    let chunks: Vec<Vec<LatinSquare>> = first_rows
        .par_iter()
        .map(|row| {
            let mut grid = vec![0u8; n * n];
            grid[..n].copy_from_slice(row);
            let mut cols = vec![0u32; n];
            for (j, &v) in row.iter().enumerate() {
                cols[j] |= 1 << v;
            }
            let mut out = Vec::new();
            fill(n, n, &mut grid, &mut cols, 0, &mut out);
            out
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

// Fills cell `pos` onward. `row_used` tracks symbols in the current row.
fn fill(
    n: usize,
    pos: usize,
    grid: &mut [u8],
    cols: &mut [u32],
    row_used: u32,
    out: &mut Vec<LatinSquare>,
) {
    if pos == n * n {
        out.push(
            LatinSquare::new(n, grid.to_vec())
                .expect("backtracking keeps rows and columns distinct"),
        );
        return;
    }
    let j = pos % n;
    let row_used = if j == 0 { 0 } else { row_used };
    for v in 0..n as u8 {
        let bit = 1u32 << v;
        if row_used & bit != 0 || cols[j] & bit != 0 {
            continue;
        }
        grid[pos] = v;
        cols[j] |= bit;
        fill(n, pos + 1, grid, cols, row_used | bit, out);
        cols[j] &= !bit;
    }
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = Vec::with_capacity(n);
    fn go(n: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n as u8 {
            if !cur.contains(&v) {
                cur.push(v);
                go(n, cur, out);
                cur.pop();
            }
        }
    }
    go(n, &mut cur, &mut out);
    out
}

/// `(k!)^{2k} / k^{k²}`, a lower bound on the number of Latin squares of order `k`.
pub fn latin_square_lower_bound(k: u32) -> BigRational {
    let fact: BigInt = (1..=k).map(BigInt::from).product();
    let num = num_traits::pow(fact, 2 * k as usize);
    let den = num_traits::pow(BigInt::from(k), (k * k) as usize);
    BigRational::new(num, den)
}

/// Symmetry group acting on the `k³` cells of the cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymmetryGroup {
    /// All 48 isometries, mirror images included.
    Octahedral,
    /// The 24 proper rotations.
    Rotations,
}

impl SymmetryGroup {
    pub fn order(self) -> usize {
        match self {
            SymmetryGroup::Octahedral => 48,
            SymmetryGroup::Rotations => 24,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SymmetryGroup::Octahedral => "octahedral-48",
            SymmetryGroup::Rotations => "rotations-24",
        }
    }

    /// Signed axis permutations: `(perm, flips)` sends coordinate `perm[i]`
    /// to slot `i`, mirrored when bit `i` of `flips` is set.
    pub fn elements(self) -> Vec<([usize; 3], u8)> {
        const PERMS: [([usize; 3], bool); 6] = [
            ([0, 1, 2], true),
            ([1, 2, 0], true),
            ([2, 0, 1], true),
            ([0, 2, 1], false),
            ([2, 1, 0], false),
            ([1, 0, 2], false),
        ];
        let mut out = Vec::with_capacity(48);
        for (perm, even) in PERMS {
            for flips in 0u8..8 {
                let proper = even == (flips.count_ones() % 2 == 0);
                if self == SymmetryGroup::Octahedral || proper {
                    out.push((perm, flips));
                }
            }
        }
        out
    }
}

impl fmt::Display for SymmetryGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `k²` occupied cells of the `k × k × k` grid, one bit per cell.
///
/// Cell `(x, y, z)` has index `x k² + y k + z` and is stored at bit
/// `127 - index`, so a larger mask is a lexicographically smaller sorted
/// cell list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeArrangement {
    k: u32,
    mask: u128,
}

impl CubeArrangement {
    pub fn from_cells(k: u32, cells: &[[usize; 3]]) -> Result<Self> {
        let n = check_degree(k)?;
        let mut mask = 0u128;
        for &[x, y, z] in cells {
            if x >= n || y >= n || z >= n {
                return Err(Error::OutsideGrid(format!("({x}, {y}, {z})")));
            }
            mask |= 1u128 << (127 - (x * n * n + y * n + z));
        }
        Ok(CubeArrangement { k, mask })
    }

    pub fn from_latin_square(h: &LatinSquare) -> Result<Self> {
        let n = h.order();
        let cells: Vec<[usize; 3]> = (0..n)
            .flat_map(|i| (0..n).map(move |j| [i, j, h.get(i, j)]))
            .collect();
        Self::from_cells(n as u32, &cells)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Occupied cells in increasing index order.
    pub fn cells(&self) -> Vec<[usize; 3]> {
        let n = self.k as usize;
        let mut out = Vec::with_capacity(self.len());
        let mut m = self.mask;
        while m != 0 {
            let top = 127 - m.leading_zeros() as usize;
            let idx = 127 - top;
            out.push([idx / (n * n), (idx / n) % n, idx % n]);
            m &= !(1u128 << top);
        }
        out
    }

    pub fn to_latin_square(&self) -> Result<LatinSquare> {
        crate::digits::to_latin_square(&self.to_digit_set()?)
    }

    pub fn to_digit_set(&self) -> Result<crate::digits::DigitSet3> {
        let pts: Vec<[i64; 3]> = self.cells().iter().map(|c| c.map(|v| v as i64)).collect();
        crate::digits::DigitSet3::from_i64(self.k, &pts)
    }
}

/// Cell-index permutation tables for every element of a group.
struct CellAction {
    k: usize,
    tables: Vec<Vec<u8>>,
}

impl CellAction {
    fn new(k: usize, group: SymmetryGroup) -> Self {
        let tables = group
            .elements()
            .into_iter()
            .map(|(perm, flips)| {
                (0..k * k * k)
                    .map(|idx| {
                        let c = [idx / (k * k), (idx / k) % k, idx % k];
                        let mut d = [0usize; 3];
                        for i in 0..3 {
                            let v = c[perm[i]];
                            d[i] = if flips >> i & 1 == 1 { k - 1 - v } else { v };
                        }
                        (d[0] * k * k + d[1] * k + d[2]) as u8
                    })
                    .collect()
            })
            .collect();
        CellAction { k, tables }
    }

    fn apply(&self, table: &[u8], mask: u128) -> u128 {
        let mut out = 0u128;
        let mut m = mask;
        while m != 0 {
            let top = 127 - m.leading_zeros() as usize;
            out |= 1u128 << (127 - table[127 - top] as usize);
            m &= !(1u128 << top);
        }
        out
    }

    fn orbit(&self, a: CubeArrangement) -> Vec<u128> {
        let mut v: Vec<u128> = self.tables.iter().map(|t| self.apply(t, a.mask)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn canonical(&self, a: CubeArrangement) -> CubeArrangement {
        debug_assert_eq!(a.k as usize, self.k);
        let mask = self
            .tables
            .iter()
            .map(|t| self.apply(t, a.mask))
            .max()
            .unwrap_or(a.mask);
        CubeArrangement { k: a.k, mask }
    }
}

/// Lexicographically least arrangement in the orbit of `a`.
pub fn canonical_form(a: CubeArrangement, group: SymmetryGroup) -> CubeArrangement {
    CellAction::new(a.k as usize, group).canonical(a)
}

/// Number of distinct arrangements in the orbit of `a`.
pub fn orbit_size(a: CubeArrangement, group: SymmetryGroup) -> usize {
    CellAction::new(a.k as usize, group).orbit(a).len()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceClass {
    pub representative: CubeArrangement,
    pub orbit_size: usize,
}

impl CongruenceClass {
    pub fn to_json(&self) -> Value {
        let square = self
            .representative
            .to_latin_square()
            .map(|h| h.rows())
            .unwrap_or_default();
        json!({
            "cells": self.representative.cells(),
            "square": square,
            "orbit_size": self.orbit_size,
        })
    }
}

#[derive(Clone, Debug)]
pub struct EnumerationReport {
    pub k: u32,
    pub group: SymmetryGroup,
    pub latin_squares: usize,
    pub classes: Vec<CongruenceClass>,
}

impl EnumerationReport {
    pub fn lower_bound(&self) -> BigRational {
        latin_square_lower_bound(self.k)
    }

    pub fn exceeds_lower_bound(&self) -> bool {
        BigRational::from_integer(BigInt::from(self.latin_squares)) > self.lower_bound()
    }

    /// Sum of orbit sizes, which equals the Latin-square count.
    pub fn orbit_total(&self) -> usize {
        self.classes.iter().map(|c| c.orbit_size).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "latin_squares": self.latin_squares,
            "classes": self.classes.len(),
            "group": self.group.name(),
            "representatives": self.classes.iter().map(CongruenceClass::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Congruence classes of degree-`k` fractal imaginary cubes under the full
/// symmetry group of the cube.
pub fn congruence_classes(k: u32) -> Result<EnumerationReport> {
    congruence_classes_under(k, SymmetryGroup::Octahedral)
}

pub fn congruence_classes_under(k: u32, group: SymmetryGroup) -> Result<EnumerationReport> {
    let n = check_degree(k)?;
    let squares = all_latin_squares(k)?;
    let action = CellAction::new(n, group);
    let canon: Vec<u128> = squares
        .par_iter()
        .map(|h| {
            Ok(action
                .canonical(CubeArrangement::from_latin_square(h)?)
                .mask)
        })
        .collect::<Result<_>>()?;
    let mut counts: BTreeMap<u128, usize> = BTreeMap::new();
    for m in canon {
        *counts.entry(m).or_default() += 1;
    }
    // Larger mask first: representatives listed in lexicographic order.
    let classes = counts
        .into_iter()
        .rev()
        .map(|(mask, orbit_size)| CongruenceClass {
            representative: CubeArrangement { k, mask },
            orbit_size,
        })
        .collect();
    Ok(EnumerationReport {
        k,
        group,
        latin_squares: squares.len(),
        classes,
    })
}

/// Representatives of the degree-`k` classes as Latin squares.
pub fn class_representatives(k: u32) -> Result<Vec<LatinSquare>> {
    congruence_classes(k)?
        .classes
        .iter()
        .map(|c| c.representative.to_latin_square())
        .collect()
}

/// The representative digit sets `{(i, j, h(i, j))}`.
pub fn representative_digit_sets(k: u32) -> Result<Vec<crate::digits::DigitSet3>> {
    Ok(class_representatives(k)?
        .iter()
        .map(from_latin_square)
        .collect())
}

/// Exact integer form of [`latin_square_lower_bound`], rounded down.
pub fn lower_bound_floor(k: u32) -> BigInt {
    let b = latin_square_lower_bound(k);
    if b.is_integer() {
        b.to_integer()
    } else {
        b.floor().to_integer()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::is_imaginary_cube_digit_set;
    use std::collections::HashSet;

    // Every row is a permutation; keep the tuples whose columns are too.
    fn brute_force_count(k: usize) -> usize {
        let perms = permutations(k);
        let mut count = 0;
        let mut idx = vec![0usize; k];
        loop {
            let ok = (0..k).all(|j| {
                let mut seen = 0u32;
                idx.iter().all(|&r| {
                    let b = 1 << perms[r][j];
                    let fresh = seen & b == 0;
                    seen |= b;
                    fresh
                })
            });
            if ok {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == k {
                    return count;
                }
                idx[i] += 1;
                if idx[i] < perms.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    // Orbits via integer matrices acting on doubled centered coordinates.
    fn brute_force_classes(k: usize) -> usize {
        let mut mats: Vec<[[i32; 3]; 3]> = Vec::new();
        let gens: [[[i32; 3]; 3]; 3] = [
            [[0, 1, 0], [0, 0, 1], [1, 0, 0]],
            [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
            [[-1, 0, 0], [0, 1, 0], [0, 0, 1]],
        ];
        mats.push([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let mul = |a: &[[i32; 3]; 3], b: &[[i32; 3]; 3]| {
            let mut c = [[0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    c[i][j] = (0..3).map(|l| a[i][l] * b[l][j]).sum();
                }
            }
            c
        };
        let mut i = 0;
        while i < mats.len() {
            for g in &gens {
                let m = mul(g, &mats[i]);
                if !mats.contains(&m) {
                    mats.push(m);
                }
            }
            i += 1;
        }
        assert_eq!(mats.len(), 48);
        let c = k as i32 - 1;
        let mut seen: HashSet<Vec<[i32; 3]>> = HashSet::new();
        let mut classes = 0;
        for h in all_latin_squares(k as u32).unwrap() {
            let pts: Vec<[i32; 3]> = (0..k)
                .flat_map(|i| (0..k).map(move |j| (i, j)))
                .map(|(i, j)| {
                    [
                        2 * i as i32 - c,
                        2 * j as i32 - c,
                        2 * h.get(i, j) as i32 - c,
                    ]
                })
                .collect();
            let mut key = pts.clone();
            key.sort();
            if seen.contains(&key) {
                continue;
            }
            classes += 1;
            for m in &mats {
                let mut img: Vec<[i32; 3]> = pts
                    .iter()
                    .map(|p| {
                        let mut q = [0; 3];
                        for r in 0..3 {
                            q[r] = (0..3).map(|l| m[r][l] * p[l]).sum();
                        }
                        q
                    })
                    .collect();
                img.sort();
                seen.insert(img);
            }
        }
        classes
    }

    #[test]
    fn latin_square_counts_match_brute_force() {
        for k in 2..=4 {
            let n = all_latin_squares(k as u32).unwrap().len();
            assert_eq!(n, brute_force_count(k), "k = {k}");
        }
        assert_eq!(all_latin_squares(2).unwrap().len(), 2);
        assert_eq!(all_latin_squares(3).unwrap().len(), 12);
        assert_eq!(all_latin_squares(4).unwrap().len(), 576);
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        let v = all_latin_squares(4).unwrap();
        assert!(v.windows(2).all(|w| w[0].cells() < w[1].cells()));
    }

    #[test]
    fn degree_out_of_range() {
        assert!(matches!(
            all_latin_squares(1),
            Err(Error::DegreeOutOfRange(1))
        ));
        assert!(matches!(
            all_latin_squares(6),
            Err(Error::DegreeOutOfRange(6))
        ));
        assert!(matches!(
            congruence_classes(0),
            Err(Error::DegreeOutOfRange(0))
        ));
    }

    #[test]
    fn lower_bound_values() {
        assert_eq!(
            latin_square_lower_bound(2),
            BigRational::from_integer(BigInt::from(1))
        );
        assert_eq!(lower_bound_floor(3), BigInt::from(2));
        assert_eq!(lower_bound_floor(4), BigInt::from(25));
        for k in 2..=4 {
            let r = congruence_classes(k).unwrap();
            assert!(r.exceeds_lower_bound());
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(SymmetryGroup::Octahedral.elements().len(), 48);
        assert_eq!(SymmetryGroup::Rotations.elements().len(), 24);
    }

    #[test]
    fn small_class_counts() {
        assert_eq!(congruence_classes(2).unwrap().classes.len(), 1);
        assert_eq!(congruence_classes(3).unwrap().classes.len(), 2);
        assert_eq!(congruence_classes(4).unwrap().classes.len(), 36);
    }

    #[test]
    fn class_counts_match_matrix_orbits() {
        for k in 2..=4u32 {
            assert_eq!(
                congruence_classes(k).unwrap().classes.len(),
                brute_force_classes(k as usize),
                "k = {k}"
            );
        }
    }

    #[test]
    fn orbits_partition_the_squares() {
        for k in 2..=4 {
            let r = congruence_classes(k).unwrap();
            assert_eq!(r.orbit_total(), r.latin_squares);
            for c in &r.classes {
                assert_eq!(48 % c.orbit_size, 0);
                assert_eq!(
                    orbit_size(c.representative, SymmetryGroup::Octahedral),
                    c.orbit_size
                );
                assert_eq!(
                    canonical_form(c.representative, SymmetryGroup::Octahedral),
                    c.representative
                );
                assert!(
                    is_imaginary_cube_digit_set(&c.representative.to_digit_set().unwrap()).unwrap()
                );
            }
        }
    }

    #[test]
    fn canonical_is_lexicographic_minimum() {
        let action = CellAction::new(3, SymmetryGroup::Octahedral);
        for h in all_latin_squares(3).unwrap() {
            let a = CubeArrangement::from_latin_square(&h).unwrap();
            let min = action
                .orbit(a)
                .into_iter()
                .map(|m| CubeArrangement { k: 3, mask: m }.cells())
                .min()
                .unwrap();
            assert_eq!(action.canonical(a).cells(), min);
        }
    }

    #[test]
    fn cells_round_trip() {
        let h = LatinSquare::from_fn(3, |i, j| (i + j) % 3).unwrap();
        let a = CubeArrangement::from_latin_square(&h).unwrap();
        assert_eq!(a.len(), 9);
        assert_eq!(a.to_latin_square().unwrap(), h);
    }

    #[test]
    fn report_json_shape() {
        let v = congruence_classes(3).unwrap().to_json();
        assert_eq!(v["k"], 3);
        assert_eq!(v["latin_squares"], 12);
        assert_eq!(v["classes"], 2);
        assert_eq!(v["group"], "octahedral-48");
        assert_eq!(v["representatives"].as_array().unwrap().len(), 2);
    }
}
