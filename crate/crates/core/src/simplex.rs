//! Simplices of `A(p_n)` as closed independent functors over the empty base.
//!
//! A simplex on support `s` stores one point tuple per nonempty `u ⊆ s`,
//! indexed by the vertices of `u` in increasing order. Singleton levels hold
//! canonical orbit representatives (the 1-type is unique, so they carry no
//! information beyond the orbit); larger levels hold actual image points.
//! Transition maps are never stored: `f^u_v` is the unique elementary map
//! sending `f(u)` to the matching positions of `f(v)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chain::{Chain, Permutation, Simplex, SupportSet};
use crate::circle::{canonical_rep, pick_generic, same_orbit, same_type, shd, CirclePoint, ModelParams, PointTuple};
use crate::error::{Error, Result};

pub type SimplexChain = Chain<FunctorSimplex>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctorSimplex {
    support: SupportSet,
    levels: BTreeMap<SupportSet, PointTuple>,
}

fn restrict_tuple(tuple: &PointTuple, from: &SupportSet, to: &SupportSet) -> PointTuple {
    PointTuple::new(to.vertices().iter().map(|v| tuple.points()[from.rank(*v).expect("vertex in level")]).collect())
}

impl FunctorSimplex {
    /// Validates and normalizes raw level data.
    pub fn new(support: SupportSet, levels: BTreeMap<SupportSet, PointTuple>, params: ModelParams) -> Result<Self> {
        let mut normalized = BTreeMap::new();
        for u in support.nonempty_subsets() {
            let tuple = levels.get(&u).ok_or_else(|| Error::MissingLevel(u.vertices().to_vec()))?;
            if tuple.len() != u.len() {
                return Err(Error::MissingLevel(u.vertices().to_vec()));
            }
            if !tuple.is_independent(params) {
                return Err(Error::DependentLevel(u.vertices().to_vec()));
            }
            let tuple = if u.len() == 1 {
                PointTuple::new(vec![canonical_rep(tuple.points()[0], params)])
            } else {
                tuple.clone()
            };
            normalized.insert(u, tuple);
        }
        if let Some(extra) = levels.keys().find(|u| !u.is_empty() && !u.is_subset(&support)) {
            return Err(Error::NotInSupport(extra.vertices().to_vec()));
        }
        let f = Self { support, levels: normalized };
        f.check_compatibility(params)?;
        Ok(f)
    }

    fn check_compatibility(&self, params: ModelParams) -> Result<()> {
        for (v, big) in &self.levels {
            if v.len() < 3 {
                continue;
            }
            for (u, small) in &self.levels {
                if u.len() < 2 || u.len() >= v.len() || !u.is_subset(v) {
                    continue;
                }
                if !same_type(small, &restrict_tuple(big, v, u), params)? {
                    return Err(Error::IncompatibleLevels(u.vertices().to_vec(), v.vertices().to_vec()));
                }
            }
        }
        Ok(())
    }

    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    pub fn levels(&self) -> &BTreeMap<SupportSet, PointTuple> {
        &self.levels
    }

    pub fn level(&self, u: &SupportSet) -> Option<&PointTuple> {
        self.levels.get(u)
    }

    /// The level at the whole support; empty for the empty simplex.
    pub fn top(&self) -> PointTuple {
        self.levels.get(&self.support).cloned().unwrap_or_default()
    }

    /// Realization of vertex `v` inside the top tuple.
    pub fn top_point(&self, v: u32) -> Option<CirclePoint> {
        let i = self.support.rank(v)?;
        self.levels.get(&self.support).map(|t| t.points()[i])
    }

    /// Revalidates deserialized data against `params`.
    pub fn validated(self, params: ModelParams) -> Result<Self> {
        Self::new(self.support, self.levels, params)
    }

    /// Replaces the levels on `P(u)` by those of `donor` (a simplex on `u`)
    /// and revalidates.
    pub fn with_face(&self, donor: &FunctorSimplex, params: ModelParams) -> Result<Self> {
        let u = donor.support();
        if !u.is_subset(&self.support) {
            return Err(Error::NotInSupport(u.vertices().to_vec()));
        }
        let mut levels = self.levels.clone();
        for (w, t) in donor.levels() {
            levels.insert(w.clone(), t.clone());
        }
        Self::new(self.support.clone(), levels, params)
    }
}

impl Default for PointTuple {
    fn default() -> Self {
        PointTuple::new(Vec::new())
    }
}

/// Builds a validated simplex from its level map.
pub fn make_simplex(
    support: SupportSet,
    levels: BTreeMap<SupportSet, PointTuple>,
    params: ModelParams,
) -> Result<FunctorSimplex> {
    FunctorSimplex::new(support, levels, params)
}

/// The simplex whose levels are `top` restricted to every nonempty subset.
pub fn simplex_from_top(support: SupportSet, top: &[CirclePoint], params: ModelParams) -> Result<FunctorSimplex> {
    if top.len() != support.len() {
        return Err(Error::MissingLevel(support.vertices().to_vec()));
    }
    let full = PointTuple::new(top.to_vec());
    let levels = support
        .nonempty_subsets()
        .into_iter()
        .map(|u| {
            let t = restrict_tuple(&full, &support, &u);
            (u, t)
        })
        .collect();
    FunctorSimplex::new(support, levels, params)
}

/// `f ↾ P(u)`.
pub fn face(f: &FunctorSimplex, u: &SupportSet) -> Result<FunctorSimplex> {
    if !u.is_subset(&f.support) {
        return Err(Error::NotInSupport(u.vertices().to_vec()));
    }
    Ok(FunctorSimplex {
        support: u.clone(),
        levels: f.levels.iter().filter(|(w, _)| w.is_subset(u)).map(|(w, t)| (w.clone(), t.clone())).collect(),
    })
}

/// `g(v) = f(σ⁻¹(v))`: moves every level along `σ`, reordering tuple
/// positions to follow the new vertex order.
pub fn permute_simplex(f: &FunctorSimplex, sigma: &Permutation) -> FunctorSimplex {
    let levels = f
        .levels
        .iter()
        .map(|(u, t)| {
            let mut moved: Vec<(u32, CirclePoint)> =
                u.vertices().iter().zip(t.points()).map(|(v, p)| (sigma.apply(*v), *p)).collect();
            moved.sort_by_key(|(v, _)| *v);
            let key = SupportSet::new(moved.iter().map(|(v, _)| *v));
            (key, PointTuple::new(moved.into_iter().map(|(_, p)| p).collect()))
        })
        .collect();
    FunctorSimplex { support: sigma.image(&f.support), levels }
}

impl Simplex for FunctorSimplex {
    fn support(&self) -> &SupportSet {
        &self.support
    }

    fn restrict(&self, u: &SupportSet) -> Self {
        face(self, u).expect("restriction to a subset of the support")
    }

    fn relabel(&self, sigma: &Permutation) -> Self {
        permute_simplex(self, sigma)
    }
}

/// Assigns top-level points vertex by vertex.
struct Placement {
    params: ModelParams,
    points: BTreeMap<u32, CirclePoint>,
}

impl Placement {
    fn new(params: ModelParams) -> Self {
        Self { params, points: BTreeMap::new() }
    }

    fn seed(&mut self, f: &FunctorSimplex) {
        let top = f.top();
        for (v, p) in f.support().vertices().iter().zip(top.points()) {
            self.points.insert(*v, *p);
        }
    }

    /// Places `v` with `Ŝd(x_w, x_v) = r` for every `(w, r)`, preferring the
    /// first of `candidates` that already qualifies.
    fn place(&mut self, v: u32, constraints: &[(u32, i64)], candidates: &[CirclePoint]) -> Result<CirclePoint> {
        let mut anchored: Vec<(CirclePoint, i64)> = Vec::new();
        for (w, r) in constraints {
            let anchor = self.points[w];
            if let Some((_, prev)) = anchored.iter().find(|(a, _)| *a == anchor) {
                if *prev != *r {
                    return Err(Error::EmptyArc);
                }
                continue;
            }
            anchored.push((anchor, self.params.residue(*r)));
        }
        let avoid: Vec<CirclePoint> = self.points.values().copied().collect();
        let params = self.params;
        let fits = |p: &CirclePoint| {
            avoid.iter().all(|q| !same_orbit(*p, *q, params))
                && anchored.iter().all(|(a, r)| shd(*a, *p, params).ok() == Some(*r))
        };
        let p = match candidates.iter().find(|p| fits(p)) {
            Some(p) => *p,
            None => pick_generic(&anchored, &avoid, params)?,
        };
        self.points.insert(v, p);
        Ok(p)
    }

    fn tuple(&self, u: &SupportSet) -> PointTuple {
        PointTuple::new(u.vertices().iter().map(|v| self.points[v]).collect())
    }
}

/// Fills every level from the first donor containing it, falling back to the
/// placed top tuple.
fn assemble(
    support: &SupportSet,
    placement: &Placement,
    donors: &[&FunctorSimplex],
    params: ModelParams,
) -> Result<FunctorSimplex> {
    let mut levels = BTreeMap::new();
    for u in support.nonempty_subsets() {
        let level = donors
            .iter()
            .find(|d| u.is_subset(d.support()))
            .and_then(|d| d.level(&u).cloned())
            .unwrap_or_else(|| placement.tuple(&u));
        levels.insert(u, level);
    }
    FunctorSimplex::new(support.clone(), levels, params)
}

/// A simplex on the union of the supports whose face on each input support is
/// that input, literally. Inputs must agree on pairwise overlaps. Fails with
/// `EmptyArc` or `IncompatibleLevels` when no such amalgam exists.
pub fn amalgamate_family(simplices: &[&FunctorSimplex], params: ModelParams) -> Result<FunctorSimplex> {
    let Some(first) = simplices.first() else {
        return Ok(FunctorSimplex { support: SupportSet::empty(), levels: BTreeMap::new() });
    };
    for (i, f) in simplices.iter().enumerate() {
        for g in &simplices[i + 1..] {
            let common = f.support().intersection(g.support());
            if face(f, &common)? != face(g, &common)? {
                return Err(Error::FaceMismatch(common.vertices().to_vec()));
            }
        }
    }
    let union = simplices.iter().fold(SupportSet::empty(), |acc, f| acc.union(f.support()));
    let mut placement = Placement::new(params);
    placement.seed(first);
    for v in union.vertices() {
        if placement.points.contains_key(v) {
            continue;
        }
        let mut constraints = Vec::new();
        let mut candidates = Vec::new();
        for h in simplices.iter().filter(|h| h.support().contains(*v)) {
            let hv = h.top_point(*v).expect("vertex in support");
            candidates.push(hv);
            for w in h.support().vertices() {
                if placement.points.contains_key(w) {
                    let hw = h.top_point(*w).expect("vertex in support");
                    constraints.push((*w, shd(hw, hv, params)?));
                }
            }
        }
        placement.place(*v, &constraints, &candidates)?;
    }
    for h in simplices {
        if !same_type(&placement.tuple(h.support()), &h.top(), params)? {
            return Err(Error::IncompatibleLevels(h.support().vertices().to_vec(), union.vertices().to_vec()));
        }
    }
    assemble(&union, &placement, simplices, params)
}

/// Strong 2-amalgamation: `h` on `supp f ∪ supp g` with `h ↾ P(supp f) = f`
/// and `h ↾ P(supp g) = g`.
pub fn strong_amalgam(f: &FunctorSimplex, g: &FunctorSimplex, params: ModelParams) -> Result<FunctorSimplex> {
    let common = f.support().intersection(g.support());
    if face(f, &common)? != face(g, &common)? {
        return Err(Error::FaceMismatch(common.vertices().to_vec()));
    }
    if g.support().is_subset(f.support()) {
        return Ok(f.clone());
    }
    if f.support().is_subset(g.support()) {
        return Ok(g.clone());
    }
    amalgamate_family(&[f, g], params)
}

/// Pairwise Ŝd residues for a 1- or 2-simplex, listed for the vertex pairs
/// `(0,1)`, `(0,2)`, `(1,2)` of the sorted support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShdSpec {
    Edge(i64),
    Triangle { k01: i64, k02: i64, k12: i64 },
}

impl ShdSpec {
    fn size(&self) -> usize {
        match self {
            ShdSpec::Edge(_) => 2,
            ShdSpec::Triangle { .. } => 3,
        }
    }

    /// Residue of `Ŝd(x_i, x_j)` for positions `i ≠ j`.
    fn residue(&self, i: usize, j: usize, params: ModelParams) -> i64 {
        if i > j {
            return params.residue(-self.residue(j, i, params) - 1);
        }
        let r = match (self, i, j) {
            (ShdSpec::Edge(k), 0, 1) => *k,
            (ShdSpec::Triangle { k01, .. }, 0, 1) => *k01,
            (ShdSpec::Triangle { k02, .. }, 0, 2) => *k02,
            (ShdSpec::Triangle { k12, .. }, 1, 2) => *k12,
            _ => unreachable!("position out of range"),
        };
        params.residue(r)
    }

    /// `k01 + k12 ≤ Ŝd(x_0, x_2) ≤ k01 + k12 + 1`.
    pub fn is_consistent(&self, params: ModelParams) -> bool {
        match self {
            ShdSpec::Edge(_) => true,
            ShdSpec::Triangle { k01, k02, k12 } => {
                crate::circle::in_cyclic_range(*k02, k01 + k12, k01 + k12 + 1, params)
            }
        }
    }
}

/// A simplex whose top tuple has the given pairwise Ŝd residues, reusing the
/// level data of `shared_faces` verbatim. Without shared faces the first
/// vertex sits at `0`.
pub fn simplex_from_distances(
    support: &SupportSet,
    spec: ShdSpec,
    shared_faces: &[&FunctorSimplex],
    params: ModelParams,
) -> Result<FunctorSimplex> {
    if support.len() != spec.size() {
        return Err(Error::InconsistentSpec);
    }
    if !spec.is_consistent(params) {
        return Err(Error::InconsistentSpec);
    }
    for f in shared_faces {
        if !f.support().is_subset(support) {
            return Err(Error::NotInSupport(f.support().vertices().to_vec()));
        }
    }
    for (i, f) in shared_faces.iter().enumerate() {
        for g in &shared_faces[i + 1..] {
            let common = f.support().intersection(g.support());
            if face(f, &common)? != face(g, &common)? {
                return Err(Error::FaceMismatch(common.vertices().to_vec()));
            }
        }
    }
    let pos = |v: u32| support.rank(v).expect("vertex in support");
    let mut placement = Placement::new(params);
    match shared_faces.first() {
        Some(f) => placement.seed(f),
        None => {
            placement.points.insert(support.vertices()[0], CirclePoint::zero());
        }
    }
    let seeded: Vec<u32> = placement.points.keys().copied().collect();
    for (i, w) in seeded.iter().enumerate() {
        for v in &seeded[i + 1..] {
            let actual = shd(placement.points[w], placement.points[v], params)?;
            if actual != spec.residue(pos(*w), pos(*v), params) {
                return Err(Error::InconsistentSpec);
            }
        }
    }
    for v in support.vertices() {
        if placement.points.contains_key(v) {
            continue;
        }
        let constraints: Vec<(u32, i64)> =
            placement.points.keys().map(|w| (*w, spec.residue(pos(*w), pos(*v), params))).collect();
        placement.place(*v, &constraints, &[]).map_err(|e| match e {
            Error::EmptyArc => Error::InconsistentSpec,
            e => e,
        })?;
    }
    for f in shared_faces {
        if !same_type(&placement.tuple(f.support()), &f.top(), params)? {
            return Err(Error::FaceMismatch(f.support().vertices().to_vec()));
        }
    }
    assemble(support, &placement, shared_faces, params)
}

/// `f|_t`: the simplex on `supp f ∖ t` over the base `f(t)`, whose level at
/// `v` is `f(t ∪ v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizedSimplex {
    pub base: SupportSet,
    pub support: SupportSet,
    pub levels: BTreeMap<SupportSet, PointTuple>,
}

impl LocalizedSimplex {
    /// With an empty base this is an ordinary simplex.
    pub fn into_simplex(self) -> Option<FunctorSimplex> {
        if !self.base.is_empty() {
            return None;
        }
        let levels = self.levels.into_iter().filter(|(u, _)| !u.is_empty()).collect();
        Some(FunctorSimplex { support: self.support, levels })
    }
}

pub fn localize(f: &FunctorSimplex, t: &SupportSet) -> Result<LocalizedSimplex> {
    if !t.is_subset(f.support()) {
        return Err(Error::NotInSupport(t.vertices().to_vec()));
    }
    let rest = f.support().difference(t);
    let levels = rest
        .subsets()
        .into_iter()
        .map(|v| {
            let level = f.level(&v.union(t)).cloned().unwrap_or_default();
            (v, level)
        })
        .collect();
    Ok(LocalizedSimplex { base: t.clone(), support: rest, levels })
}

#[derive(Serialize, Deserialize)]
struct SimplexRepr {
    support: SupportSet,
    levels: BTreeMap<String, PointTuple>,
}

impl Serialize for FunctorSimplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SimplexRepr {
            support: self.support.clone(),
            levels: self.levels.iter().map(|(u, t)| (u.key(), t.clone())).collect(),
        }
        .serialize(serializer)
    }
}

/// Structural checks only; call [`FunctorSimplex::validated`] once `n` is known.
impl<'de> Deserialize<'de> for FunctorSimplex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = SimplexRepr::deserialize(deserializer)?;
        let mut levels = BTreeMap::new();
        for (key, tuple) in repr.levels {
            let u = SupportSet::parse_key(&key).map_err(D::Error::custom)?;
            if u.is_empty() || !u.is_subset(&repr.support) || u.len() != tuple.len() {
                return Err(D::Error::custom(format!("bad level {key:?}")));
            }
            levels.insert(u, tuple);
        }
        if levels.len() + 1 != 1usize << repr.support.len() {
            return Err(D::Error::custom("levels must cover every nonempty subset of the support"));
        }
        Ok(FunctorSimplex { support: repr.support, levels })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::CirclePoint as P;

    fn n4() -> ModelParams {
        ModelParams::new(4).unwrap()
    }

    fn s(vs: &[u32]) -> SupportSet {
        SupportSet::new(vs.iter().copied())
    }

    fn t(ps: &[(i128, i128)]) -> PointTuple {
        PointTuple::new(ps.iter().map(|(a, b)| P::new(*a, *b)).collect())
    }

    #[test]
    fn make_simplex_examples() {
        let f = make_simplex(s(&[0]), [(s(&[0]), t(&[(0, 1)]))].into(), n4()).unwrap();
        assert_eq!(f.support().len(), 1);

        let levels = [(s(&[0]), t(&[(0, 1)])), (s(&[1]), t(&[(0, 1)])), (s(&[0, 1]), t(&[(0, 1), (3, 10)]))];
        assert!(make_simplex(s(&[0, 1]), levels.into(), n4()).is_ok());

        let levels = [(s(&[0]), t(&[(0, 1)])), (s(&[1]), t(&[(0, 1)])), (s(&[0, 1]), t(&[(0, 1), (1, 4)]))];
        assert_eq!(make_simplex(s(&[0, 1]), levels.into(), n4()), Err(Error::DependentLevel(vec![0, 1])));

        let levels = [(s(&[0]), t(&[(0, 1)])), (s(&[0, 1]), t(&[(0, 1), (3, 10)]))];
        assert_eq!(make_simplex(s(&[0, 1]), levels.into(), n4()), Err(Error::MissingLevel(vec![1])));
    }

    #[test]
    fn incompatible_levels_rejected() {
        let good = simplex_from_top(s(&[0, 1, 2]), &[P::new(0, 1), P::new(3, 10), P::new(5, 8)], n4()).unwrap();
        let mut levels = good.levels().clone();
        levels.insert(s(&[0, 1]), t(&[(0, 1), (1, 8)]));
        assert_eq!(
            make_simplex(s(&[0, 1, 2]), levels, n4()),
            Err(Error::IncompatibleLevels(vec![0, 1], vec![0, 1, 2]))
        );
        // A type-equal but literally different face level is accepted.
        let mut levels = good.levels().clone();
        levels.insert(s(&[0, 1]), t(&[(1, 2), (4, 5)]));
        assert!(make_simplex(s(&[0, 1, 2]), levels, n4()).is_ok());
    }

    #[test]
    fn faces() {
        let f = simplex_from_top(s(&[0, 1, 2]), &[P::new(0, 1), P::new(3, 10), P::new(5, 8)], n4()).unwrap();
        assert_eq!(face(&f, f.support()).unwrap(), f);
        let e = face(&f, &s(&[1, 2])).unwrap();
        assert_eq!(e.levels().len(), 3);
        assert!(face(&f, &s(&[3])).is_err());
        let w = s(&[2]);
        assert_eq!(face(&e, &w).unwrap(), face(&f, &w).unwrap());
    }

    #[test]
    fn faces_equal_despite_different_tops() {
        let f = simplex_from_top(s(&[0, 1, 2]), &[P::new(0, 1), P::new(3, 10), P::new(5, 8)], n4()).unwrap();
        let base = face(&f, &s(&[0, 1])).unwrap();
        let g = simplex_from_distances(&s(&[0, 1, 2]), ShdSpec::Triangle { k01: 1, k02: 3, k12: 1 }, &[&base], n4())
            .unwrap();
        assert_ne!(f.top(), g.top());
        assert_eq!(face(&f, &s(&[0, 1])).unwrap(), face(&g, &s(&[0, 1])).unwrap());
    }

    #[test]
    fn permutation_transport() {
        let f = simplex_from_top(s(&[0, 1, 3]), &[P::new(0, 1), P::new(3, 10), P::new(5, 8)], n4()).unwrap();
        assert_eq!(permute_simplex(&f, &Permutation::identity()), f);
        let g = permute_simplex(&f, &Permutation::transposition(3, 4));
        assert_eq!(g.support(), &s(&[0, 1, 4]));
        assert_eq!(g.top(), f.top());

        let e = simplex_from_top(s(&[0, 1]), &[P::new(0, 1), P::new(3, 10)], n4()).unwrap();
        let swapped = permute_simplex(&e, &Permutation::transposition(0, 1));
        assert_eq!(swapped.top(), t(&[(3, 10), (0, 1)]));
        assert_eq!(swapped.level(&s(&[0])).unwrap(), e.level(&s(&[1])).unwrap());
        assert!(swapped.clone().validated(n4()).is_ok());
    }

    #[test]
    fn amalgams() {
        let n = n4();
        let g = simplex_from_top(s(&[0, 1, 2]), &[P::new(0, 1), P::new(3, 10), P::new(5, 8)], n).unwrap();
        let f = face(&g, &s(&[0, 1])).unwrap();
        assert_eq!(strong_amalgam(&f, &g, n).unwrap(), g);
        assert_eq!(strong_amalgam(&g, &g, n).unwrap(), g);

        let edge = face(&g, &s(&[1, 2])).unwrap();
        let h =
            simplex_from_distances(&s(&[1, 2, 3]), ShdSpec::Triangle { k01: 1, k02: 2, k12: 1 }, &[&edge], n).unwrap();
        let mu = strong_amalgam(&g, &h, n).unwrap();
        assert_eq!(mu.support(), &s(&[0, 1, 2, 3]));
        assert_eq!(face(&mu, g.support()).unwrap(), g);
        assert_eq!(face(&mu, h.support()).unwrap(), h);

        let other = simplex_from_top(s(&[1, 2, 3]), &[P::new(1, 8), P::new(3, 10), P::new(7, 10)], n).unwrap();
        assert_eq!(strong_amalgam(&g, &other, n), Err(Error::FaceMismatch(vec![1, 2])));
    }

    #[test]
    fn from_distances_examples() {
        let n = n4();
        let e = simplex_from_distances(&s(&[0, 1]), ShdSpec::Edge(1), &[], n).unwrap();
        assert_eq!(e.top(), t(&[(0, 1), (3, 8)]));
        assert_eq!(
            simplex_from_distances(&s(&[0, 1, 2]), ShdSpec::Triangle { k01: 1, k02: 0, k12: 1 }, &[], n),
            Err(Error::InconsistentSpec)
        );
        let a = simplex_from_distances(&s(&[0, 1]), ShdSpec::Edge(1), &[], n).unwrap();
        let b = simplex_from_distances(&s(&[1, 2]), ShdSpec::Edge(2), &[&face(&a, &s(&[1])).unwrap()], n).unwrap();
        let tri =
            simplex_from_distances(&s(&[0, 1, 2]), ShdSpec::Triangle { k01: 1, k02: 3, k12: 2 }, &[&a, &b], n).unwrap();
        assert_eq!(face(&tri, &s(&[0, 1])).unwrap(), a);
        assert_eq!(face(&tri, &s(&[1, 2])).unwrap(), b);
    }

    #[test]
    fn localization() {
        let f = simplex_from_top(s(&[0, 1, 2]), &[P::new(0, 1), P::new(3, 10), P::new(5, 8)], n4()).unwrap();
        assert_eq!(localize(&f, &SupportSet::empty()).unwrap().into_simplex().unwrap(), f);
        let l = localize(&f, &s(&[2])).unwrap();
        assert_eq!(l.support, s(&[0, 1]));
        assert_eq!(l.levels[&s(&[0])], f.level(&s(&[0, 2])).unwrap().clone());
        let all = localize(&f, f.support()).unwrap();
        assert!(all.support.is_empty());
        assert_eq!(all.levels.len(), 1);
        assert!(localize(&f, &s(&[5])).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = simplex_from_top(s(&[0, 1, 2]), &[P::new(0, 1), P::new(3, 10), P::new(5, 8)], n4()).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.contains("\"0,1\":[\"0/1\",\"3/10\"]"));
        let back: FunctorSimplex = serde_json::from_str(&text).unwrap();
        assert_eq!(back.validated(n4()).unwrap(), f);
        assert!(serde_json::from_str::<FunctorSimplex>(r#"{"support":[0,1],"levels":{"0":["0/1"]}}"#).is_err());
    }
}
