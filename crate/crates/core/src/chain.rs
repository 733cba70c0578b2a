//! Chain algebra over any simplex representation: standard forms, boundary
//! maps, shells, subchains and the signed relabelling action `σ*`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite set of naturals, kept strictly increasing.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct SupportSet(Vec<u32>);

impl SupportSet {
    pub fn new<I: IntoIterator<Item = u32>>(vertices: I) -> Self {
        let set: BTreeSet<u32> = vertices.into_iter().collect();
        Self(set.into_iter().collect())
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Position of `v` in increasing order.
    pub fn rank(&self, v: u32) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    pub fn without(&self, v: u32) -> SupportSet {
        Self(self.0.iter().copied().filter(|x| *x != v).collect())
    }

    pub fn with(&self, v: u32) -> SupportSet {
        Self::new(self.0.iter().copied().chain(std::iter::once(v)))
    }

    pub fn union(&self, other: &SupportSet) -> SupportSet {
        Self::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn intersection(&self, other: &SupportSet) -> SupportSet {
        Self(self.0.iter().copied().filter(|v| other.contains(*v)).collect())
    }

    pub fn difference(&self, other: &SupportSet) -> SupportSet {
        Self(self.0.iter().copied().filter(|v| !other.contains(*v)).collect())
    }

    pub fn max_vertex(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// All subsets, in order of increasing size then lexicographic.
    pub fn subsets(&self) -> Vec<SupportSet> {
        let k = self.0.len();
        let mut out: Vec<SupportSet> = (0u64..(1u64 << k))
            .map(|mask| Self((0..k).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect()))
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    pub fn nonempty_subsets(&self) -> Vec<SupportSet> {
        self.subsets().into_iter().filter(|s| !s.is_empty()).collect()
    }

    /// Comma-joined key, e.g. `"0,1"`.
    pub fn key(&self) -> String {
        self.0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse_key(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let vs: std::result::Result<Vec<u32>, _> = s.split(',').map(|x| x.trim().parse()).collect();
        let vs = vs.map_err(|_| Error::Parse(format!("bad vertex list {s:?}")))?;
        Self::try_from(vs)
    }
}

impl TryFrom<Vec<u32>> for SupportSet {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        if v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse(format!("support {v:?} is not strictly increasing")));
        }
        Ok(Self(v))
    }
}

impl From<SupportSet> for Vec<u32> {
    fn from(s: SupportSet) -> Self {
        s.0
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

/// A finitely supported bijection of the naturals, stored by its moved points.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Permutation {
    moved: BTreeMap<u32, u32>,
}

impl Permutation {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Result<Self> {
        let mut moved = BTreeMap::new();
        for (a, b) in pairs {
            if a == b {
                continue;
            }
            if moved.insert(a, b).is_some() {
                return Err(Error::InvalidPermutation(format!("{a} mapped twice")));
            }
        }
        let domain: BTreeSet<u32> = moved.keys().copied().collect();
        let image: BTreeSet<u32> = moved.values().copied().collect();
        if domain != image {
            return Err(Error::InvalidPermutation("moved set is not closed".into()));
        }
        Ok(Self { moved })
    }

    pub fn transposition(a: u32, b: u32) -> Self {
        if a == b {
            return Self::identity();
        }
        Self { moved: [(a, b), (b, a)].into_iter().collect() }
    }

    pub fn apply(&self, v: u32) -> u32 {
        self.moved.get(&v).copied().unwrap_or(v)
    }

    pub fn inverse(&self) -> Self {
        Self { moved: self.moved.iter().map(|(a, b)| (*b, *a)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.moved.is_empty()
    }

    pub fn image(&self, s: &SupportSet) -> SupportSet {
        SupportSet::new(s.vertices().iter().map(|v| self.apply(*v)))
    }

    /// Sign of the vertex permutation induced on `s` (the `|σ_i|` factor).
    pub fn induced_sign(&self, s: &SupportSet) -> i64 {
        let images: Vec<u32> = s.vertices().iter().map(|v| self.apply(*v)).collect();
        let mut inversions = 0usize;
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                if images[i] > images[j] {
                    inversions += 1;
                }
            }
        }
        if inversions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// A non-empty, downward closed family of subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveCategory {
    objects: BTreeSet<SupportSet>,
}

impl PrimitiveCategory {
    pub fn new<I: IntoIterator<Item = SupportSet>>(objects: I) -> Result<Self> {
        let objects: BTreeSet<SupportSet> = objects.into_iter().collect();
        if objects.is_empty() {
            return Err(Error::Parse("primitive category must be non-empty".into()));
        }
        for u in &objects {
            for w in u.subsets() {
                if !objects.contains(&w) {
                    return Err(Error::Parse(format!("{u} is present but {w} is not")));
                }
            }
        }
        Ok(Self { objects })
    }

    pub fn power_set(s: &SupportSet) -> Self {
        Self { objects: s.subsets().into_iter().collect() }
    }

    pub fn objects(&self) -> impl Iterator<Item = &SupportSet> {
        self.objects.iter()
    }

    pub fn contains(&self, u: &SupportSet) -> bool {
        self.objects.contains(u)
    }

    /// `X_t`: objects disjoint from `t`.
    pub fn avoiding(&self, t: &SupportSet) -> Self {
        Self { objects: self.objects.iter().filter(|k| k.intersection(t).is_empty()).cloned().collect() }
    }

    /// `X|_t`: objects `k` of `X_t` with `t ∪ k` in `X`.
    pub fn localized(&self, t: &SupportSet) -> Self {
        Self { objects: self.avoiding(t).objects.into_iter().filter(|k| self.objects.contains(&k.union(t))).collect() }
    }

    pub fn splits_at(&self, t: &SupportSet) -> bool {
        self.avoiding(t) == self.localized(t)
    }
}

/// What the chain algebra needs from a simplex representation.
pub trait Simplex: Clone + Ord + fmt::Debug {
    fn support(&self) -> &SupportSet;

    /// Restriction to `P(u)` for `u ⊆ supp`. `u` may be empty.
    fn restrict(&self, u: &SupportSet) -> Self;

    /// `f ∘ σ⁻¹`: the simplex transported along `σ`.
    fn relabel(&self, sigma: &Permutation) -> Self;

    fn dimension(&self) -> isize {
        self.support().len() as isize - 1
    }

    /// `∂^i f`: restriction dropping the `i`-th vertex.
    fn face_index(&self, i: usize) -> Self {
        let v = self.support().vertices()[i];
        self.restrict(&self.support().without(v))
    }
}

/// An integer formal sum of simplices, always in standard form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain<S: Simplex> {
    terms: BTreeMap<S, i64>,
}

impl<S: Simplex> Default for Chain<S> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<S: Simplex> Chain<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(s: S) -> Self {
        Self::from_terms([(1, s)])
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, S)>>(terms: I) -> Self {
        let mut c = Self::zero();
        for (k, s) in terms {
            c.add_term(k, s);
        }
        c
    }

    pub fn add_term(&mut self, coeff: i64, s: S) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(s) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&S, i64)> {
        self.terms.iter().map(|(s, k)| (s, *k))
    }

    pub fn coeff(&self, s: &S) -> i64 {
        self.terms.get(s).copied().unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `|c| = Σ |n_i|`.
    pub fn length(&self) -> u64 {
        self.terms.values().map(|k| k.unsigned_abs()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Union of the term supports.
    pub fn support(&self) -> SupportSet {
        self.terms.keys().fold(SupportSet::empty(), |acc, s| acc.union(s.support()))
    }

    /// Common dimension of all terms; `None` for the zero chain.
    pub fn dimension(&self) -> Result<Option<isize>> {
        let mut dims = self.terms.keys().map(|s| s.dimension());
        let Some(first) = dims.next() else { return Ok(None) };
        if dims.any(|d| d != first) {
            return Err(Error::MixedDimension);
        }
        Ok(Some(first))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(s, c)| (c * k, s.clone())))
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, k) in &other.terms {
            out.add_term(*k, s.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `c^{j_0…j_k}`: the terms whose support is exactly `u`.
    pub fn with_support(&self, u: &SupportSet) -> Self {
        Self::from_terms(self.terms.iter().filter(|(s, _)| s.support() == u).map(|(s, k)| (*k, s.clone())))
    }

    /// Terms expanded into unit multiples, in term order.
    pub fn unit_terms(&self) -> Vec<(i64, S)> {
        let mut out = Vec::new();
        for (s, k) in &self.terms {
            for _ in 0..k.unsigned_abs() {
                out.push((k.signum(), s.clone()));
            }
        }
        out
    }
}

/// `∂(c) = Σ_i (-1)^i ∂^i(c)`.
pub fn boundary<S: Simplex>(c: &Chain<S>) -> Result<Chain<S>> {
    c.dimension()?;
    let mut out = Chain::zero();
    for (f, k) in c.terms() {
        for i in 0..f.support().len() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            out.add_term(sign * k, f.face_index(i));
        }
    }
    Ok(out)
}

/// True iff `c = ±Σ(-1)^i f_i` over `n+2` simplices of dimension `n` with
/// `∂^i f_j = ∂^{j-1} f_i` for all `i < j`.
pub fn is_shell<S: Simplex>(c: &Chain<S>) -> bool {
    let Ok(Some(dim)) = c.dimension() else { return false };
    if dim < 0 {
        return false;
    }
    let size = dim as usize + 1;
    if c.num_terms() != size + 1 || c.terms().any(|(_, k)| k.abs() != 1) {
        return false;
    }
    let total = c.support();
    if total.len() != size + 1 {
        return false;
    }
    let mut ordered: Vec<Option<(&S, i64)>> = vec![None; size + 1];
    for (f, k) in c.terms() {
        let missing = total.difference(f.support());
        if missing.len() != 1 {
            return false;
        }
        let i = total.rank(missing.vertices()[0]).expect("vertex of total support");
        if ordered[i].is_some() {
            return false;
        }
        ordered[i] = Some((f, k));
    }
    let ordered: Vec<(&S, i64)> = ordered.into_iter().map(|t| t.expect("filled")).collect();
    let eps = ordered[0].1;
    for (i, (_, k)) in ordered.iter().enumerate() {
        let expected = if i % 2 == 0 { eps } else { -eps };
        if *k != expected {
            return false;
        }
    }
    let vs = total.vertices();
    for j in 0..ordered.len() {
        for i in 0..j {
            let common = total.without(vs[i]).without(vs[j]);
            if ordered[j].0.restrict(&common) != ordered[i].0.restrict(&common) {
                return false;
            }
        }
    }
    true
}

/// `σ*(c) = Σ n_i |σ_i| f_i ∘ σ_i⁻¹`.
pub fn sigma_star<S: Simplex>(sigma: &Permutation, c: &Chain<S>) -> Chain<S> {
    Chain::from_terms(c.terms().map(|(f, k)| (k * sigma.induced_sign(f.support()), f.relabel(sigma))))
}

/// `d` is a subsummand of `c`: every term of `d` occurs in `c` with the same
/// sign and no larger magnitude.
pub fn subchain_of<S: Simplex>(d: &Chain<S>, c: &Chain<S>) -> bool {
    d.terms().all(|(f, m)| {
        let n = c.coeff(f);
        n * m > 0 && m.abs() <= n.abs()
    })
}

/// `c - d + d'`, requiring `d` to be a subsummand of `c`.
pub fn replace_subsummand<S: Simplex>(c: &Chain<S>, d: &Chain<S>, replacement: &Chain<S>) -> Result<Chain<S>> {
    if !subchain_of(d, c) {
        return Err(Error::NotSubchain);
    }
    Ok(c.sub(d).add(replacement))
}

#[derive(Serialize, Deserialize)]
struct TermRepr<S> {
    coeff: i64,
    simplex: S,
}

#[derive(Serialize, Deserialize)]
struct ChainRepr<S> {
    terms: Vec<TermRepr<S>>,
}

impl<S: Simplex + Serialize> Serialize for Chain<S> {
    fn serialize<Z: serde::Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let repr = ChainRepr { terms: self.terms.iter().map(|(s, k)| TermRepr { coeff: *k, simplex: s }).collect() };
        repr.serialize(serializer)
    }
}

impl<'de, S: Simplex + DeserializeOwned> Deserialize<'de> for Chain<S> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ChainRepr::<S>::deserialize(deserializer)?;
        Ok(Chain::from_terms(repr.terms.into_iter().map(|t| (t.coeff, t.simplex))))
    }
}
