use std::collections::BTreeMap;

use serde::Serialize;

use super::{build_shell, override_levels, FillMethod, FillReport, ShellSpec};
use crate::chain::SupportSet;
use crate::circle::{same_type, CirclePoint, ModelParams, PointTuple};
use crate::error::{Error, Result};
use crate::simplex::{simplex_from_top, SimplexChain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    Arithmetic,
    Grid,
}

/// The least odd `2m + 1 ≤ max_len` such that some `t ∈ [−m−1, m]` is
/// congruent to `k₄`.
pub fn oracle_min_fill_arithmetic(spec: &ShellSpec, max_len: u64) -> Option<u64> {
    let (n, k4) = (spec.params.n(), spec.k4());
    (0..)
        .map(|m: i64| (m, 2 * m as u64 + 1))
        .take_while(|(_, len)| *len <= max_len)
        .find(|(m, _)| (-m - 1..=*m).any(|t| (t - k4).rem_euclid(n) == 0))
        .map(|(_, len)| len)
}

pub fn oracle_min_fill(spec: &ShellSpec, max_len: u64, kind: OracleKind) -> Option<u64> {
    match kind {
        OracleKind::Arithmetic => oracle_min_fill_arithmetic(spec, max_len),
        OracleKind::Grid => GridOracle::new(spec.params, spec.k1, max_len).ok()?.min_len(spec.k2, spec.k3),
    }
}

const MAX_GRID_N: i64 = 16;

type Balance = [i8; MAX_GRID_N as usize];

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn or(&mut self, other: &Bits) {
        for (x, y) in self.0.iter_mut().zip(&other.0) {
            *x |= y;
        }
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, bits)| (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b))
    }
}

/// Exhaustive search over chain-walks `Σ (−1)ⁱ tᵢ` on `{0,1,2}` with
/// `tᵢ = [a,dᵢ,dᵢ₊₁]` (even `i`) or `[a,dᵢ₊₁,dᵢ]` (odd `i`), `a = 0`, and
/// every `dᵢ` a multiple of `1/(4n²)`, for one value of `k₁`.
///
/// A walk of odd length `L` bounds the shell with residues `(k₁, k₂, k₃)`
/// when `Ŝd(a,d_L) = k₂` and the `{1,2}` faces, counted by type, leave one
/// uncancelled face of type `−k₃−1`. The search runs breadth-first over
/// states (point, face balance), storing each layer as a bitset of points
/// per balance.
pub struct GridOracle {
    params: ModelParams,
    k1: i64,
    max_len: u64,
    unit: usize,
    size: usize,
    succ: Vec<Vec<Bits>>,
    layers: Vec<BTreeMap<Balance, Bits>>,
    best: Vec<Option<u64>>,
}

impl GridOracle {
    pub fn new(params: ModelParams, k1: i64, max_len: u64) -> Result<Self> {
        let n = params.n();
        if n > MAX_GRID_N || max_len > 120 {
            return Err(Error::InvalidParams(n));
        }
        if !(0..n).contains(&k1) {
            return Err(Error::OutOfRange { target: k1, lo: 0, hi: n - 1 });
        }
        let unit = 4 * n as usize;
        let size = unit * n as usize;
        let mut succ = vec![vec![Bits::new(size); n as usize]; size];
        for (p, row) in succ.iter_mut().enumerate() {
            if p % unit == 0 {
                continue;
            }
            for q in 0..size {
                let diff = (q + size - p) % size;
                if q % unit != 0 && !diff.is_multiple_of(unit) {
                    row[diff / unit].set(q);
                }
            }
        }
        let mut start = Bits::new(size);
        for p in (k1 as usize * unit + 1)..((k1 as usize + 1) * unit) {
            start.set(p);
        }
        let mut oracle = GridOracle {
            params,
            k1,
            max_len,
            unit,
            size,
            succ,
            layers: vec![BTreeMap::from([([0; MAX_GRID_N as usize], start)])],
            best: vec![None; (n * n) as usize],
        };
        oracle.run();
        Ok(oracle)
    }

    fn n(&self) -> usize {
        self.params.n() as usize
    }

    /// Face-balance change of step `i` when `Ŝd(dᵢ,dᵢ₊₁) = r`.
    fn delta(&self, i: usize, r: usize) -> (usize, i8) {
        if i.is_multiple_of(2) {
            (r, 1)
        } else {
            ((2 * self.n() - r - 1) % self.n(), -1)
        }
    }

    fn run(&mut self) {
        let n = self.n();
        let mut found = 0;
        for len in 1..=self.max_len as usize {
            let budget = (self.max_len as usize - len) as i64 + 1;
            let mut next: BTreeMap<Balance, Bits> = BTreeMap::new();
            for (bal, points) in &self.layers[len - 1] {
                for r in 0..n {
                    let (slot, sign) = self.delta(len - 1, r);
                    let mut nb = *bal;
                    nb[slot] += sign;
                    if nb.iter().map(|x| i64::from(x.unsigned_abs())).sum::<i64>() > budget {
                        continue;
                    }
                    let mut reach = Bits::new(self.size);
                    for p in points.ones() {
                        reach.or(&self.succ[p][r]);
                    }
                    next.entry(nb).or_insert_with(|| Bits::new(self.size)).or(&reach);
                }
            }
            if len % 2 == 1 {
                for (bal, points) in &next {
                    let Some(q) = unit_slot(bal, n) else { continue };
                    let k3 = (2 * n - q - 1) % n;
                    for p in points.ones() {
                        let k2 = p / self.unit;
                        let cell = &mut self.best[k2 * n + k3];
                        if cell.is_none() {
                            *cell = Some(len as u64);
                            found += 1;
                        }
                    }
                }
            }
            self.layers.push(next);
            if found == n * n {
                break;
            }
        }
    }

    /// Least fill length found for `(k₁, k₂, k₃)`, if any up to `max_len`.
    pub fn min_len(&self, k2: i64, k3: i64) -> Option<u64> {
        let n = self.params.n();
        if !(0..n).contains(&k2) || !(0..n).contains(&k3) {
            return None;
        }
        self.best[(k2 * n + k3) as usize]
    }

    /// Grid indices of `d₀, …, d_L` for a shortest walk realizing `(k₂, k₃)`.
    fn witness_path(&self, k2: i64, k3: i64) -> Option<Vec<usize>> {
        let n = self.n();
        let len = self.min_len(k2, k3)? as usize;
        let q = (2 * n - k3 as usize - 1) % n;
        let mut bal: Balance = [0; MAX_GRID_N as usize];
        bal[q] = 1;
        let mut p = self.layers[len].get(&bal)?.ones().find(|p| p / self.unit == k2 as usize)?;
        let mut path = vec![p];
        for i in (0..len).rev() {
            let (prev_bal, prev) = (0..n).find_map(|r| {
                let (slot, sign) = self.delta(i, r);
                let mut pb = bal;
                pb[slot] -= sign;
                let set = self.layers[i].get(&pb)?;
                set.ones().find(|x| self.succ[*x][r].get(p)).map(|x| (pb, x))
            })?;
            bal = prev_bal;
            p = prev;
            path.push(p);
        }
        path.reverse();
        Some(path)
    }

    /// A concrete fill of `build_shell((k₁, k₂, k₃))` read off the search,
    /// with `{1,2}` faces paired by type.
    pub fn witness(&self, k2: i64, k3: i64) -> Result<FillReport> {
        let params = self.params;
        let spec = ShellSpec::new(params, self.k1, k2, k3)?;
        let shell = build_shell(&spec);
        let path = self.witness_path(k2, k3).ok_or(Error::WalkNotFound)?;
        let den = self.size as i128;
        let a = CirclePoint::zero();
        let d: Vec<CirclePoint> = path.iter().map(|j| CirclePoint::new(*j as i128, den)).collect();
        let len = d.len() - 1;

        let e12 = SupportSet::new([1, 2]);
        let mut plus: Vec<(usize, PointTuple)> = Vec::new();
        let mut minus: Vec<usize> = Vec::new();
        for i in 0..len {
            if i % 2 == 0 {
                plus.push((i, PointTuple::new(vec![d[i], d[i + 1]])));
            } else {
                minus.push(i);
            }
        }
        let mut face12: BTreeMap<usize, PointTuple> = BTreeMap::new();
        for i in minus {
            let own = PointTuple::new(vec![d[i + 1], d[i]]);
            let slot = plus.iter().position(|(_, t)| same_type(t, &own, params).unwrap_or(false));
            let (_, t) = plus.remove(slot.ok_or(Error::WalkNotFound)?);
            face12.insert(i, t);
        }
        let [(open, _)] = plus.as_slice() else { return Err(Error::WalkNotFound) };
        face12.insert(*open, shell.s12.level(&e12).cloned().unwrap_or_default());

        let singles = [(0, &shell.s01), (1, &shell.s01), (2, &shell.s02)].map(|(v, f)| {
            let u = SupportSet::new([v]);
            let t = f.level(&u).cloned().unwrap_or_default();
            (u, t)
        });
        let mut terms = Vec::with_capacity(len);
        for i in 0..len {
            let top = if i % 2 == 0 { [a, d[i], d[i + 1]] } else { [a, d[i + 1], d[i]] };
            let mut overrides = singles.to_vec();
            if let Some(t) = face12.get(&i) {
                overrides.push((e12.clone(), t.clone()));
            }
            if i == 0 {
                let u = SupportSet::new([0, 1]);
                overrides.push((u.clone(), shell.s01.level(&u).cloned().unwrap_or_default()));
            }
            if i == len - 1 {
                let u = SupportSet::new([0, 2]);
                overrides.push((u.clone(), shell.s02.level(&u).cloned().unwrap_or_default()));
            }
            let t = simplex_from_top(SupportSet::new([0, 1, 2]), &top, params)?;
            terms.push((if i % 2 == 0 { 1 } else { -1 }, override_levels(&t, &overrides, params)?));
        }
        Ok(FillReport::new(SimplexChain::from_terms(terms), FillMethod::Oracle, &shell))
    }
}

fn unit_slot(bal: &Balance, n: usize) -> Option<usize> {
    let mut slot = None;
    for (i, x) in bal.iter().enumerate().take(n) {
        match (x, slot) {
            (0, _) => {}
            (1, None) => slot = Some(i),
            _ => return None,
        }
    }
    slot
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shell_lab::n_s_of;

    fn spec(n: i64, k1: i64, k2: i64, k3: i64) -> ShellSpec {
        ShellSpec::new(ModelParams::new(n).unwrap(), k1, k2, k3).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(oracle_min_fill_arithmetic(&spec(5, 0, 0, 2), 9), Some(5));
        assert_eq!(oracle_min_fill_arithmetic(&spec(2, 1, 0, 1), 3), Some(1));
        assert_eq!(oracle_min_fill_arithmetic(&spec(4, 0, 2, 0), 1), None);
    }

    #[test]
    fn grid_matches_formula_small_n() {
        for n in 2..=4 {
            let params = ModelParams::new(n).unwrap();
            for k1 in 0..n {
                let g = GridOracle::new(params, k1, 2 * n as u64 + 1).unwrap();
                for k2 in 0..n {
                    for k3 in 0..n {
                        assert_eq!(g.min_len(k2, k3), Some(n_s_of(&spec(n, k1, k2, k3))), "{n} {k1} {k2} {k3}");
                    }
                }
            }
        }
    }

    #[test]
    fn grid_witnesses_fill_their_shells() {
        let params = ModelParams::new(5).unwrap();
        let g = GridOracle::new(params, 0, 9).unwrap();
        assert_eq!(g.min_len(0, 2), Some(5));
        for (k2, k3) in [(0, 2), (1, 1), (3, 4)] {
            let w = g.witness(k2, k3).unwrap();
            assert!(w.verified, "{k2} {k3}");
            assert_eq!(Some(w.length), g.min_len(k2, k3));
        }
        assert_eq!(oracle_min_fill(&spec(4, 0, 2, 0), 1, OracleKind::Grid), None);
    }
}
