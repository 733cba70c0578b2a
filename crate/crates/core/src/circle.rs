//! The structure `M_n`: a circle with its clockwise ternary order `S` and the
//! rotation `g_n` by a `1/n` turn.
//!
//! Points are exact rationals in `[0, 1)` (fractions of a full turn) and
//! clockwise means increasing coordinate. Every type over a finite set is
//! realized by a rational point, so the dense countable model stands in for
//! the saturated one.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Rotation order `n` of `M_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModelParams {
    n: i64,
}

impl ModelParams {
    pub fn new(n: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(n));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// Reduces an integer into the canonical residue range `[0, n)`.
    pub fn residue(&self, k: i64) -> i64 {
        k.rem_euclid(self.n)
    }

    fn step(&self) -> Rational {
        Rational::new(1, self.n as i128)
    }
}

/// A point of the circle, stored as a reduced fraction in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CirclePoint(Rational);

fn frac(x: Rational) -> Rational {
    x - x.floor()
}

impl CirclePoint {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        Self(frac(Rational::new(num, den)))
    }

    pub fn from_ratio(r: Rational) -> Self {
        Self(frac(r))
    }

    pub fn zero() -> Self {
        Self(Rational::zero())
    }

    pub fn value(&self) -> Rational {
        self.0
    }

    /// Clockwise distance travelled from `self` to `other`, in `[0, 1)`.
    pub fn forward_to(&self, other: &CirclePoint) -> Rational {
        frac(other.0 - self.0)
    }
}

impl fmt::Debug for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for CirclePoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad rational literal {s:?}"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p, q),
            None => (s, "1"),
        };
        let p: i128 = p.trim().parse().map_err(|_| bad())?;
        let q: i128 = q.trim().parse().map_err(|_| bad())?;
        if q <= 0 || p.gcd(&q) != 1 {
            return Err(bad());
        }
        if p < 0 || p >= q {
            return Err(Error::Parse(format!("{s:?} is not in [0, 1)")));
        }
        Ok(Self(Rational::new(p, q)))
    }
}

impl Serialize for CirclePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CirclePoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Applies `g_n^i`.
pub fn rotate(p: CirclePoint, i: i64, params: ModelParams) -> CirclePoint {
    CirclePoint::from_ratio(p.0 + params.step() * Rational::from_integer(i as i128))
}

/// `S(a, b, c)`: the three points are distinct and `b` comes before `c`
/// going clockwise from `a`.
pub fn s_pred(a: CirclePoint, b: CirclePoint, c: CirclePoint) -> bool {
    if a == b || b == c || a == c {
        return false;
    }
    a.forward_to(&b) < a.forward_to(&c)
}

/// `Ŝ(x, y, z) ≡ (x ≠ z ∧ S(x, y, z)) ∨ (x = z ∧ x ≠ y)`.
pub fn s_hat_pred(x: CirclePoint, y: CirclePoint, z: CirclePoint) -> bool {
    (x != z && s_pred(x, y, z)) || (x == z && x != y)
}

/// The orbit element lying in `[0, 1/n)`.
pub fn canonical_rep(p: CirclePoint, params: ModelParams) -> CirclePoint {
    let n = Rational::from_integer(params.n as i128);
    let scaled = p.0 * n;
    CirclePoint(frac(scaled) / n)
}

pub fn same_orbit(a: CirclePoint, b: CirclePoint, params: ModelParams) -> bool {
    canonical_rep(a, params) == canonical_rep(b, params)
}

/// All `n` points of the orbit of `p`, in clockwise order starting at `p`.
pub fn orbit(p: CirclePoint, params: ModelParams) -> Vec<CirclePoint> {
    (0..params.n).map(|i| rotate(p, i, params)).collect()
}

/// Ŝ-distance of `b` from `a`: the residue `k` with `Ŝ(g^k a, b, g^{k+1} a)`.
pub fn shd(a: CirclePoint, b: CirclePoint, params: ModelParams) -> Result<i64> {
    let scaled = a.forward_to(&b) * Rational::from_integer(params.n as i128);
    if scaled.is_integer() {
        return Err(Error::SameOrbit);
    }
    Ok(scaled.floor().to_integer() as i64)
}

/// Evaluates `lo ≤ k ≤ hi` with `k` read modulo `n` (cyclic interval).
pub fn in_cyclic_range(k: i64, lo: i64, hi: i64, params: ModelParams) -> bool {
    if hi < lo {
        return false;
    }
    if hi - lo + 1 >= params.n {
        return true;
    }
    (k - lo).rem_euclid(params.n) <= hi - lo
}

/// Ordered tuple of realizations, as in `f(u) = [a_0, …, a_k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointTuple(pub Vec<CirclePoint>);

impl PointTuple {
    pub fn new(points: Vec<CirclePoint>) -> Self {
        Self(points)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn points(&self) -> &[CirclePoint] {
        &self.0
    }

    /// True when the points have pairwise disjoint orbits.
    pub fn is_independent(&self, params: ModelParams) -> bool {
        let reps: BTreeSet<_> = self.0.iter().map(|p| canonical_rep(*p, params)).collect();
        reps.len() == self.0.len()
    }
}

impl From<Vec<CirclePoint>> for PointTuple {
    fn from(v: Vec<CirclePoint>) -> Self {
        Self(v)
    }
}

/// Atomic diagram of a tuple. Every arc `[k/n, (k+1)/n)` measured from `a_0`
/// holds exactly one orbit point of each `a_j`, at the offset of `a_j`; so the
/// diagram is fixed by the grouping and order of those offsets together with
/// each `Ŝd(a_0, a_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeFingerprint {
    groups: Vec<Vec<usize>>,
    sectors: Vec<i64>,
}

impl TypeFingerprint {
    pub fn of(tuple: &PointTuple, params: ModelParams) -> Self {
        let Some(origin) = tuple.0.first() else {
            return Self { groups: Vec::new(), sectors: Vec::new() };
        };
        let n = Rational::from_integer(params.n as i128);
        let mut offsets: Vec<(Rational, usize)> = Vec::with_capacity(tuple.len());
        let mut sectors = Vec::with_capacity(tuple.len());
        for (j, p) in tuple.0.iter().enumerate() {
            let scaled = origin.forward_to(p) * n;
            let sector = scaled.floor();
            sectors.push(sector.to_integer() as i64);
            offsets.push((scaled - sector, j));
        }
        offsets.sort();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut last: Option<Rational> = None;
        for (off, j) in offsets {
            if last == Some(off) {
                groups.last_mut().expect("group").push(j);
            } else {
                groups.push(vec![j]);
                last = Some(off);
            }
        }
        Self { groups, sectors }
    }
}

/// Equal types over the empty set (quantifier elimination reduces this to
/// equality of atomic diagrams).
pub fn same_type(t1: &PointTuple, t2: &PointTuple, params: ModelParams) -> Result<bool> {
    if t1.len() != t2.len() {
        return Err(Error::LengthMismatch(t1.len(), t2.len()));
    }
    Ok(TypeFingerprint::of(t1, params) == TypeFingerprint::of(t2, params))
}

/// Open real interval `(lo, hi)` with `0 < hi - lo <= 1`, read modulo 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub lo: Rational,
    pub hi: Rational,
}

impl Arc {
    /// The sector `(g^k(anchor), g^{k+1}(anchor))`.
    pub fn sector(anchor: CirclePoint, k: i64, params: ModelParams) -> Self {
        let lo = rotate(anchor, k, params).0;
        Self { lo, hi: lo + params.step() }
    }

    /// The clockwise open arc from `from` to `to` (the whole circle minus
    /// `from` when they coincide).
    pub fn between(from: CirclePoint, to: CirclePoint) -> Self {
        let mut len = from.forward_to(&to);
        if len.is_zero() {
            len = Rational::one();
        }
        Self { lo: from.0, hi: from.0 + len }
    }

    pub fn intersect(&self, other: &Arc) -> Option<Arc> {
        for shift in [-1i128, 0, 1] {
            let s = Rational::from_integer(shift);
            let lo = self.lo.max(other.lo + s);
            let hi = self.hi.min(other.hi + s);
            if lo < hi {
                return Some(Arc { lo, hi });
            }
        }
        None
    }

    pub fn contains(&self, p: CirclePoint) -> bool {
        let off = frac(p.0 - self.lo);
        !off.is_zero() && off < self.hi - self.lo
    }
}

/// First point of `arc` in dyadic midpoint order whose orbit avoids every
/// point of `excluded`.
pub fn pick_in_arc(arc: Arc, excluded: &[CirclePoint], params: ModelParams) -> Result<CirclePoint> {
    if arc.hi <= arc.lo {
        return Err(Error::EmptyArc);
    }
    let reps: BTreeSet<_> = excluded.iter().map(|p| canonical_rep(*p, params)).collect();
    let len = arc.hi - arc.lo;
    for depth in 0..48u32 {
        let parts = 1i128 << (depth + 1);
        for i in 0..(1i128 << depth) {
            let x = arc.lo + len * Rational::new(2 * i + 1, parts);
            let p = CirclePoint::from_ratio(x);
            if !reps.contains(&canonical_rep(p, params)) {
                return Ok(p);
            }
        }
    }
    Err(Error::EmptyArc)
}

/// A point `x` with `Ŝd(anchor, x) = residue` for every constraint, whose
/// orbit avoids all anchors and all `avoid` points. Deterministic.
pub fn pick_generic(
    constraints: &[(CirclePoint, i64)],
    avoid: &[CirclePoint],
    params: ModelParams,
) -> Result<CirclePoint> {
    let mut arc = Arc { lo: Rational::zero(), hi: params.step() };
    for (i, (anchor, k)) in constraints.iter().enumerate() {
        let sector = Arc::sector(*anchor, *k, params);
        arc = if i == 0 { sector } else { arc.intersect(&sector).ok_or(Error::EmptyArc)? };
    }
    let mut excluded: Vec<CirclePoint> = avoid.to_vec();
    excluded.extend(constraints.iter().map(|(a, _)| *a));
    pick_in_arc(arc, &excluded, params)
}

/// Lascar distance over the empty set. Two points are adjacent when equal or
/// within a strict `1/n` arc of each other, so `d(a, b)` is the least number of
/// steps, each shorter than `1/n`, needed to cover the shorter angular gap.
pub fn lascar_distance(a: CirclePoint, b: CirclePoint, params: ModelParams) -> u64 {
    if a == b {
        return 0;
    }
    let d = a.forward_to(&b);
    let theta = d.min(Rational::one() - d);
    let scaled = theta * Rational::from_integer(params.n as i128);
    let whole = scaled.floor().to_integer() as u64;
    whole + 1
}

/// `a = b ∨ S(a, b, g(a)) ∨ S(b, a, g(b))`.
pub fn lascar_adjacent(a: CirclePoint, b: CirclePoint, params: ModelParams) -> bool {
    a == b || s_pred(a, b, rotate(a, 1, params)) || s_pred(b, a, rotate(b, 1, params))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: i128, b: i128) -> CirclePoint {
        CirclePoint::new(a, b)
    }

    fn m(n: i64) -> ModelParams {
        ModelParams::new(n).unwrap()
    }

    #[test]
    fn rotate_examples() {
        assert_eq!(rotate(p(1, 3), 1, m(4)), p(7, 12));
        assert_eq!(rotate(p(2, 7), 0, m(5)), p(2, 7));
        assert_eq!(rotate(p(9, 10), 2, m(4)), p(2, 5));
        assert_eq!(rotate(p(3, 11), 6, m(6)), p(3, 11));
    }

    #[test]
    fn order_predicates() {
        assert!(s_pred(p(0, 1), p(1, 8), p(1, 4)));
        assert!(!s_pred(p(0, 1), p(1, 4), p(1, 8)));
        assert!(!s_pred(p(0, 1), p(0, 1), p(1, 4)));
        assert!(s_hat_pred(p(0, 1), p(1, 8), p(1, 4)));
        assert!(s_hat_pred(p(0, 1), p(1, 8), p(0, 1)));
        assert!(!s_hat_pred(p(0, 1), p(0, 1), p(0, 1)));
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_rep(p(7, 12), m(4)), p(1, 12));
        assert_eq!(canonical_rep(p(0, 1), m(7)), p(0, 1));
        assert_eq!(canonical_rep(p(1, 5), m(5)), p(0, 1));
    }

    #[test]
    fn shd_examples() {
        assert_eq!(shd(p(0, 1), p(3, 10), m(4)), Ok(1));
        assert_eq!(shd(p(3, 10), p(0, 1), m(4)), Ok(2));
        assert_eq!(shd(p(0, 1), p(1, 8), m(4)), Ok(0));
        assert_eq!(shd(p(0, 1), p(1, 2), m(4)), Err(Error::SameOrbit));
    }

    #[test]
    fn shd_matches_hat_predicate() {
        let params = m(5);
        let a = p(3, 17);
        let b = p(11, 13);
        let k = shd(a, b, params).unwrap();
        assert!(s_hat_pred(rotate(a, k, params), b, rotate(a, k + 1, params)));
    }

    #[test]
    fn same_type_examples() {
        let params = m(4);
        let t = |a: CirclePoint, b: CirclePoint| PointTuple::new(vec![a, b]);
        assert!(same_type(&t(p(0, 1), p(3, 10)), &t(p(1, 2), p(4, 5)), params).unwrap());
        assert!(same_type(&t(p(0, 1), p(3, 10)), &t(p(0, 1), p(3, 10)), params).unwrap());
        assert!(!same_type(&t(p(0, 1), p(3, 10)), &t(p(0, 1), p(3, 5)), params).unwrap());
        assert_eq!(
            same_type(&t(p(0, 1), p(3, 10)), &PointTuple::new(vec![p(0, 1)]), params),
            Err(Error::LengthMismatch(2, 1))
        );
    }

    #[test]
    fn coincidences_are_part_of_the_type() {
        let params = m(4);
        let same = PointTuple::new(vec![p(1, 8), p(1, 8)]);
        let rotated = PointTuple::new(vec![p(1, 8), p(5, 8)]);
        let generic = PointTuple::new(vec![p(1, 8), p(1, 7)]);
        assert!(!same_type(&same, &rotated, params).unwrap());
        assert!(!same_type(&same, &generic, params).unwrap());
    }

    #[test]
    fn pick_generic_examples() {
        let params = m(4);
        assert_eq!(pick_generic(&[(p(0, 1), 1)], &[p(3, 10)], params), Ok(p(3, 8)));
        assert_eq!(pick_generic(&[], &[], params), Ok(p(1, 8)));
        assert_eq!(pick_generic(&[(p(0, 1), 0), (p(0, 1), 1)], &[], params), Err(Error::EmptyArc));
    }

    #[test]
    fn pick_generic_skips_excluded_orbits() {
        let params = m(4);
        // 3/8 is excluded through its orbit mate 1/8.
        let x = pick_generic(&[(p(0, 1), 1)], &[p(1, 8)], params).unwrap();
        assert_eq!(x, p(5, 16));
        assert_eq!(shd(p(0, 1), x, params), Ok(1));
    }

    #[test]
    fn lascar_examples() {
        let params = m(4);
        assert_eq!(lascar_distance(p(0, 1), p(0, 1), params), 0);
        assert_eq!(lascar_distance(p(0, 1), p(1, 8), params), 1);
        assert_eq!(lascar_distance(p(0, 1), p(1, 2), params), 3);
        assert_eq!(lascar_distance(p(0, 1), p(1, 4), params), 2);
    }

    #[test]
    fn cyclic_ranges() {
        let params = m(5);
        assert!(in_cyclic_range(4, 3, 5, params));
        assert!(in_cyclic_range(0, 3, 5, params));
        assert!(!in_cyclic_range(1, 3, 5, params));
        assert!(in_cyclic_range(1, -2, 3, params));
    }

    #[test]
    fn literal_round_trip() {
        for s in ["0/1", "3/10", "7/12"] {
            let q: CirclePoint = s.parse().unwrap();
            assert_eq!(q.to_string(), s);
        }
        assert!("2/4".parse::<CirclePoint>().is_err());
        assert!("5/4".parse::<CirclePoint>().is_err());
        assert!("1/0".parse::<CirclePoint>().is_err());
        assert!("x".parse::<CirclePoint>().is_err());
    }
}
