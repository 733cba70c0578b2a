use std::ops::RangeInclusive;

use serde::Serialize;

use super::{boundary_term, require_one_shell, CrSite, Rewriter};
use crate::chain::SupportSet;
use crate::error::{Error, Result};
use crate::simplex::{FunctorSimplex, SimplexChain};

/// Signed 1-simplex, as it occurs in a boundary.
pub type SignedEdge = (i64, FunctorSimplex);

/// An ordered sequence of signed 2-simplices around a center vertex, each
/// term's outgoing center edge cancelling the next term's incoming one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainWalk {
    pub center: u32,
    pub terms: Vec<(i64, FunctorSimplex)>,
    /// `k_0, …, k_{m+1}`.
    pub sequence: Vec<u32>,
}

impl ChainWalk {
    /// Derives the walk sequence from the first label `k0`.
    pub fn new(center: u32, k0: u32, terms: Vec<(i64, FunctorSimplex)>) -> Result<Self> {
        let mut sequence = vec![k0];
        for (_, b) in &terms {
            let k = *sequence.last().expect("nonempty");
            if !b.support().contains(center) || !b.support().contains(k) || b.support().len() != 3 {
                return Err(Error::NotCentered(center));
            }
            let next = b.support().without(center).without(k);
            sequence.push(next.vertices()[0]);
        }
        Ok(Self { center, terms, sequence })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn chain(&self) -> SimplexChain {
        SimplexChain::from_terms(self.terms.iter().cloned())
    }

    fn edge(&self, i: usize, label: u32) -> SignedEdge {
        let (eps, b) = &self.terms[i];
        boundary_term(*eps, b, &SupportSet::new([self.center, label]))
    }

    /// `(∂ε₀b₀)` on `{center, k₀}`.
    pub fn from_edge(&self) -> SignedEdge {
        self.edge(0, self.sequence[0])
    }

    /// `(∂ε_m b_m)` on `{center, k_{m+1}}`.
    pub fn to_edge(&self) -> SignedEdge {
        self.edge(self.len() - 1, self.sequence[self.len()])
    }

    /// Conditions (1)–(3) of a chain-walk from `from` to `to`.
    pub fn is_walk_between(&self, from: &SignedEdge, to: &SignedEdge) -> bool {
        if self.is_empty() || self.sequence.len() != self.len() + 1 {
            return false;
        }
        for (i, (eps, b)) in self.terms.iter().enumerate() {
            let expected = SupportSet::new([self.center, self.sequence[i], self.sequence[i + 1]]);
            if eps.abs() != 1 || b.support() != &expected || expected.len() != 3 {
                return false;
            }
        }
        if self.from_edge() != *from || self.to_edge() != *to {
            return false;
        }
        (0..self.len() - 1).all(|i| {
            let (a, f) = self.edge(i, self.sequence[i + 1]);
            let (b, g) = self.edge(i + 1, self.sequence[i + 1]);
            f == g && a + b == 0
        })
    }

    pub fn walk_sequence_json(&self) -> String {
        serde_json::to_string(&self.sequence).expect("integers serialize")
    }
}

struct WalkItem {
    simplex: FunctorSimplex,
    sign: i64,
    count: u64,
    /// `(entry label, entry edge, exit label, exit edge)` for both directions.
    passes: [(u32, SignedEdge, u32, SignedEdge); 2],
}

struct WalkSearch<'a> {
    items: Vec<WalkItem>,
    used: Vec<u64>,
    to: &'a SignedEdge,
    last: Option<&'a FunctorSimplex>,
    path: Vec<usize>,
    labels: Vec<u32>,
    best: Option<(Vec<usize>, Vec<u32>)>,
    expansions: u64,
}

const MAX_EXPANSIONS: u64 = 2_000_000;

impl WalkSearch<'_> {
    fn run(&mut self, need: &SignedEdge, k: u32) {
        for idx in 0..self.items.len() {
            if self.used[idx] >= self.items[idx].count {
                continue;
            }
            for pass in 0..2 {
                if self.expansions >= MAX_EXPANSIONS {
                    return;
                }
                let (entry, entry_edge, exit, exit_edge) = &self.items[idx].passes[pass];
                if *entry != k || entry_edge != need {
                    continue;
                }
                self.expansions += 1;
                let (exit, exit_edge) = (*exit, exit_edge.clone());
                self.used[idx] += 1;
                self.path.push(idx);
                self.labels.push(exit);
                let ends_here = exit_edge == *self.to && self.last.is_none_or(|l| *l == self.items[idx].simplex);
                if ends_here && self.best.as_ref().is_none_or(|(b, _)| b.len() < self.path.len()) {
                    self.best = Some((self.path.clone(), self.labels.clone()));
                }
                let next = (-exit_edge.0, exit_edge.1);
                self.run(&next, exit);
                self.labels.pop();
                self.path.pop();
                self.used[idx] -= 1;
            }
        }
    }
}

/// The longest chain-walk in `c` around `center` from `from` to `to`,
/// optionally forced to end with the term `last`. Ties keep the first walk
/// found scanning terms in chain order.
pub(crate) fn longest_walk(
    c: &SimplexChain,
    from: &SignedEdge,
    to: &SignedEdge,
    center: u32,
    last: Option<&FunctorSimplex>,
) -> Option<ChainWalk> {
    let k0 = from.1.support().without(center);
    if k0.len() != 1 || !from.1.support().contains(center) {
        return None;
    }
    let k0 = k0.vertices()[0];
    let items: Vec<WalkItem> = c
        .terms()
        .filter(|(f, _)| f.support().len() == 3 && f.support().contains(center))
        .map(|(f, n)| {
            let others = f.support().without(center);
            let (a, b) = (others.vertices()[0], others.vertices()[1]);
            let ea = boundary_term(n.signum(), f, &SupportSet::new([center, a]));
            let eb = boundary_term(n.signum(), f, &SupportSet::new([center, b]));
            WalkItem {
                simplex: f.clone(),
                sign: n.signum(),
                count: n.unsigned_abs(),
                passes: [(a, ea.clone(), b, eb.clone()), (b, eb, a, ea)],
            }
        })
        .collect();
    let mut search = WalkSearch {
        used: vec![0; items.len()],
        items,
        to,
        last,
        path: Vec::new(),
        labels: vec![k0],
        best: None,
        expansions: 0,
    };
    search.run(from, k0);
    let (path, labels) = search.best?;
    let terms = path.iter().map(|i| (search.items[*i].sign, search.items[*i].simplex.clone())).collect();
    Some(ChainWalk { center, terms, sequence: labels })
}

/// A maximal chain-walk in `c` from `from` to `to` around `center`.
pub fn extract_chain_walk(c: &SimplexChain, from: &SignedEdge, to: &SignedEdge, center: u32) -> Result<ChainWalk> {
    require_one_shell(c)?;
    longest_walk(c, from, to, center, None).ok_or(Error::WalkNotFound)
}

/// A walk after collapsing a section, plus the off-center terms the
/// collapse produced (they stay in the ambient chain).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduct {
    pub walk: ChainWalk,
    pub residual: SimplexChain,
}

/// Replaces terms `i` and `i+1` by the center face of their crossing.
pub(crate) fn merge_adjacent(walk: &ChainWalk, i: usize, rw: &mut Rewriter) -> Result<(ChainWalk, SimplexChain)> {
    if i + 1 >= walk.len() {
        return Err(Error::Reduction(format!("no terms {i}, {} to merge", i + 1)));
    }
    if walk.sequence[i] == walk.sequence[i + 2] {
        return Err(Error::HypothesisFails);
    }
    let (e1, b1) = &walk.terms[i];
    let (e2, b2) = &walk.terms[i + 1];
    let site = CrSite::new(b1, *e1, b2, *e2)?;
    let replaced = rw.crossing(&site)?;
    let mut merged = None;
    let mut residual = SimplexChain::zero();
    for (f, k) in replaced.terms() {
        if f.support().contains(walk.center) {
            merged = Some((k, f.clone()));
        } else {
            residual.add_term(k, f.clone());
        }
    }
    let merged = merged.ok_or_else(|| Error::Reduction("crossing lost the center".into()))?;
    let mut terms = walk.terms.clone();
    terms.splice(i..i + 2, [merged]);
    let mut sequence = walk.sequence.clone();
    sequence.remove(i + 1);
    Ok((ChainWalk { center: walk.center, terms, sequence }, residual))
}

/// Collapses the section `j..=m'` into one simplex on
/// `{center, k_j, k_{m'+1}}` by repeated CR operations, working from the
/// right when no `k_i` in the section equals `k_{m'+1}`, else from the left
/// when no later label equals `k_j`.
pub fn reduct(walk: &ChainWalk, section: RangeInclusive<usize>, rw: &mut Rewriter) -> Result<Reduct> {
    let (j, m) = (*section.start(), *section.end());
    if j > m || m >= walk.len() {
        return Err(Error::Reduction(format!("section {j}..={m} out of range")));
    }
    let seq = &walk.sequence;
    let from_right = (j..=m).all(|i| seq[i] != seq[m + 1]);
    let from_left = (j + 1..=m + 1).all(|i| seq[i] != seq[j]);
    if j < m && !from_right && !from_left {
        return Err(Error::HypothesisFails);
    }
    let mut current = walk.clone();
    let mut residual = SimplexChain::zero();
    for step in 0..(m - j) {
        let i = if from_right { m - 1 - step } else { j };
        let (next, extra) = merge_adjacent(&current, i, rw)?;
        current = next;
        residual = residual.add(&extra);
    }
    Ok(Reduct { walk: current, residual })
}
