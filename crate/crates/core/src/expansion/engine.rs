//! Dimension- and width-generic search kernels.
//!
//! Every kernel runs on either machine integers (`[i64; N]`) or big-integer
//! vectors. Callers convert to the machine form when all inputs are small
//! enough that no intermediate state can overflow.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::lattice::{IVec2, IVec3};

/// Magnitude below which the `i64` kernels are used.
pub(crate) const SMALL_LIMIT: i64 = 1 << 40;

pub trait LatticePoint: Clone + Eq + Hash + Ord + Send + Sync + std::fmt::Debug {
    type Scalar: Ord + Clone + Send + Sync;

    fn origin() -> Self;
    fn is_origin(&self) -> bool;
    fn minus(&self, o: &Self) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn times(&self, k: u32) -> Self;
    fn div_by(&self, k: u32) -> Option<Self>;
    fn norm_inf(&self) -> Self::Scalar;
    fn scalar(b: &BigInt) -> Self::Scalar;
}

impl<const N: usize> LatticePoint for [i64; N] {
    type Scalar = i64;

    fn origin() -> Self {
        [0; N]
    }
    fn is_origin(&self) -> bool {
        self.iter().all(|&c| c == 0)
    }
    fn minus(&self, o: &Self) -> Self {
        std::array::from_fn(|i| self[i] - o[i])
    }
    fn plus(&self, o: &Self) -> Self {
        std::array::from_fn(|i| self[i] + o[i])
    }
    fn times(&self, k: u32) -> Self {
        std::array::from_fn(|i| self[i] * k as i64)
    }
    fn div_by(&self, k: u32) -> Option<Self> {
        let k = k as i64;
        self.iter()
            .all(|c| c % k == 0)
            .then(|| std::array::from_fn(|i| self[i] / k))
    }
    fn norm_inf(&self) -> i64 {
        self.iter().map(|c| c.abs()).max().unwrap_or(0)
    }
    fn scalar(b: &BigInt) -> i64 {
        b.to_i64().unwrap_or(i64::MAX)
    }
}

macro_rules! impl_big_point {
    ($t:ident, $zero:expr) => {
        impl LatticePoint for $t {
            type Scalar = BigInt;

            fn origin() -> Self {
                $zero
            }
            fn is_origin(&self) -> bool {
                self.is_zero()
            }
            fn minus(&self, o: &Self) -> Self {
                self - o
            }
            fn plus(&self, o: &Self) -> Self {
                self + o
            }
            fn times(&self, k: u32) -> Self {
                self.scale(&BigInt::from(k))
            }
            fn div_by(&self, k: u32) -> Option<Self> {
                self.div_exact(&BigInt::from(k))
            }
            fn norm_inf(&self) -> BigInt {
                $t::norm_inf(self)
            }
            fn scalar(b: &BigInt) -> BigInt {
                b.clone()
            }
        }
    };
}

impl_big_point!(IVec2, IVec2::zero());
impl_big_point!(IVec3, IVec3::zero());

/// A big-integer lattice vector with a machine-integer twin.
pub trait Vector: LatticePoint<Scalar = BigInt> {
    type Small: LatticePoint<Scalar = i64>;
    fn to_small(&self) -> Option<Self::Small>;
    fn from_small(s: &Self::Small) -> Self;
}

impl Vector for IVec2 {
    type Small = [i64; 2];
    fn to_small(&self) -> Option<[i64; 2]> {
        self.to_i64()
            .filter(|v| v.iter().all(|c| c.abs() <= SMALL_LIMIT))
    }
    fn from_small(s: &[i64; 2]) -> Self {
        IVec2::from_i64(*s)
    }
}

impl Vector for IVec3 {
    type Small = [i64; 3];
    fn to_small(&self) -> Option<[i64; 3]> {
        self.to_i64()
            .filter(|v| v.iter().all(|c| c.abs() <= SMALL_LIMIT))
    }
    fn from_small(s: &[i64; 3]) -> Self {
        IVec3::from_i64(*s)
    }
}

/// Converts a whole problem to the machine representation, if it fits.
pub(crate) fn shrink<V: Vector>(items: &[V]) -> Option<Vec<V::Small>> {
    items.iter().map(V::to_small).collect()
}

pub(crate) enum SearchOutcome<P> {
    /// Digit word, least significant first.
    Found(Vec<P>),
    /// Every state reachable from the start, none of them the origin.
    Exhausted(Vec<P>),
}

/// Breadth-first search in the digit-peeling graph `r → (r − d) / k`.
///
/// Each start is a state together with the digit that led to it from a
/// virtual root (`None` for a plain start state). Returns the first word
/// that reaches the origin.
fn peel_search<P: LatticePoint>(
    k: u32,
    digits: &[P],
    starts: Vec<(P, Option<usize>)>,
) -> SearchOutcome<P> {
    // state -> (predecessor state, digit index used to reach it)
    let mut parent: HashMap<P, (Option<P>, Option<usize>)> = HashMap::new();
    let mut queue = VecDeque::new();

    let rebuild = |parent: &HashMap<P, (Option<P>, Option<usize>)>, last: &P, last_digit: usize| {
        let mut word = vec![digits[last_digit].clone()];
        let mut cur = last.clone();
        loop {
            let (prev, d) = parent[&cur].clone();
            if let Some(d) = d {
                word.push(digits[d].clone());
            }
            match prev {
                Some(p) => cur = p,
                None => break,
            }
        }
        word.reverse();
        word
    };

    for (s, d) in starts {
        if let Entry::Vacant(e) = parent.entry(s.clone()) {
            e.insert((None, d));
            queue.push_back(s);
        }
    }

    while let Some(r) = queue.pop_front() {
        for (i, d) in digits.iter().enumerate() {
            let Some(next) = r.minus(d).div_by(k) else {
                continue;
            };
            if next.is_origin() {
                return SearchOutcome::Found(rebuild(&parent, &r, i));
            }
            if let Entry::Vacant(e) = parent.entry(next.clone()) {
                e.insert((Some(r.clone()), Some(i)));
                queue.push_back(next);
            }
        }
    }
    let mut closure: Vec<P> = parent.into_keys().collect();
    closure.sort();
    SearchOutcome::Exhausted(closure)
}

/// Does `z` have a `(k, digits)`-expansion? The reachable state set is
/// finite: any state with `‖r‖∞ > M/(k−1)` strictly shrinks.
pub(crate) fn membership<P: LatticePoint>(k: u32, digits: &[P], z: &P) -> SearchOutcome<P> {
    if z.is_origin() {
        return SearchOutcome::Found(Vec::new());
    }
    peel_search(k, digits, vec![(z.clone(), None)])
}

/// Searches for a word, not all zero, with `Σ k^j δ_j = 0`.
///
/// Leading zero digits only keep the state at the origin, so the search
/// starts from the successors of the origin under nonzero digits. Those
/// stay inside the box `‖r‖∞ ≤ M/(k−1)`.
pub(crate) fn zero_cycle<P: LatticePoint>(k: u32, digits: &[P]) -> SearchOutcome<P> {
    let origin = P::origin();
    let starts: Vec<(P, Option<usize>)> = digits
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_origin())
        .filter_map(|(i, d)| origin.minus(d).div_by(k).map(|s| (s, Some(i))))
        .collect();
    peel_search(k, digits, starts)
}

/// `E(k, D, t)` pruned by a per-level norm bound. `bound(j)` must be a
/// necessary condition for a point with `j` digits still to be appended.
pub(crate) fn iterate_pruned<P: LatticePoint>(
    k: u32,
    digits: &[P],
    t: u32,
    bound: impl Fn(u32) -> P::Scalar,
) -> Vec<P> {
    let mut current: Vec<P> = vec![P::origin()];
    for level in 1..=t {
        let b = bound(t - level);
        let mut next: HashSet<P> = HashSet::with_capacity(current.len() * 2);
        for e in &current {
            let base = e.times(k);
            for d in digits {
                let p = base.plus(d);
                if p.norm_inf() <= b {
                    next.insert(p);
                }
            }
        }
        current = next.into_iter().collect();
    }
    current.sort();
    current
}

/// Iterates `P ← (kP + D) ∩ {‖·‖∞ ≤ bound}` from `{0}` to its fixed point.
/// Returns the fixed point and the number of steps taken. The digit set
/// must contain the origin, which makes the iteration monotone.
pub(crate) fn iterate_to_fixpoint<P: LatticePoint>(
    k: u32,
    digits: &[P],
    bound: &P::Scalar,
    min_depth: u32,
) -> (Vec<P>, u32) {
    let mut current: HashSet<P> = HashSet::from([P::origin()]);
    let mut depth = 0;
    loop {
        let mut next: HashSet<P> = HashSet::with_capacity(current.len() * 2);
        for e in &current {
            let base = e.times(k);
            for d in digits {
                let p = base.plus(d);
                if &p.norm_inf() <= bound {
                    next.insert(p);
                }
            }
        }
        depth += 1;
        let stable = next == current;
        current = next;
        if stable && depth >= min_depth {
            break;
        }
    }
    let mut out: Vec<P> = current.into_iter().collect();
    out.sort();
    (out, depth)
}

/// `⌈log_k(n)⌉` for `n ≥ 1`; zero for `n ≤ 1`.
pub(crate) fn ceil_log(k: u32, n: &BigInt) -> u32 {
    let k = BigInt::from(k);
    let mut p = BigInt::from(1);
    let mut e = 0;
    while &p < n {
        p *= &k;
        e += 1;
    }
    e
}

pub(crate) fn max_norm<P: LatticePoint<Scalar = BigInt>>(digits: &[P]) -> BigInt {
    digits
        .iter()
        .map(|d| d.norm_inf())
        .max()
        .unwrap_or_else(BigInt::zero)
}
