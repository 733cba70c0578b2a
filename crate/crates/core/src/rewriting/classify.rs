use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::Serialize;

use super::{apply_cr_with, apply_rs, find_cr_sites, require_one_shell, smallest_fresh_vertex, AmalgamPolicy};
use crate::chain::Simplex;
use crate::circle::ModelParams;
use crate::error::{Error, Result};
use crate::simplex::{FunctorSimplex, SimplexChain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ChainKind {
    RN,
    NR,
}

struct Item<'a> {
    simplex: &'a FunctorSimplex,
    coeff: i64,
    faces: Vec<(usize, i64)>,
}

struct Balancer<'a> {
    items: Vec<Item<'a>>,
    closes: Vec<Vec<usize>>,
    balance: Vec<i64>,
    chosen: Vec<i64>,
    found: Vec<Vec<i64>>,
    limit: usize,
    nodes: u64,
}

const MAX_NODES: u64 = 5_000_000;

impl Balancer<'_> {
    fn run(&mut self, i: usize, nonzero: bool) {
        if self.found.len() >= self.limit || self.nodes >= MAX_NODES {
            return;
        }
        self.nodes += 1;
        if i == self.items.len() {
            if nonzero {
                self.found.push(self.chosen.clone());
            }
            return;
        }
        let coeff = self.items[i].coeff;
        for m in (0..=coeff.abs()).rev() {
            let take = m * coeff.signum();
            for (f, s) in &self.items[i].faces {
                self.balance[*f] += take * s;
            }
            if self.closes[i].iter().all(|f| self.balance[*f] == 0) {
                self.chosen[i] = take;
                self.run(i + 1, nonzero || m > 0);
                self.chosen[i] = 0;
            }
            for (f, s) in &self.items[i].faces {
                self.balance[*f] -= take * s;
            }
        }
    }
}

/// Nonzero subsummands of the given terms in which every face accepted by
/// `keep_face` cancels. At most `limit` are returned.
fn balanced_subsummands<F>(terms: &[(&FunctorSimplex, i64)], keep_face: F, limit: usize) -> Vec<SimplexChain>
where
    F: Fn(&FunctorSimplex) -> bool,
{
    let mut face_ids: BTreeMap<FunctorSimplex, usize> = BTreeMap::new();
    let mut items = Vec::new();
    for (f, k) in terms {
        let mut faces = Vec::new();
        for i in 0..f.support().len() {
            let g = f.face_index(i);
            if !keep_face(&g) {
                continue;
            }
            let next = face_ids.len();
            let id = *face_ids.entry(g).or_insert(next);
            faces.push((id, if i % 2 == 0 { 1 } else { -1 }));
        }
        items.push(Item { simplex: f, coeff: *k, faces });
    }
    let mut last = vec![0usize; face_ids.len()];
    for (i, item) in items.iter().enumerate() {
        for (f, _) in &item.faces {
            last[*f] = i;
        }
    }
    let mut closes = vec![Vec::new(); items.len()];
    for (f, i) in last.iter().enumerate() {
        closes[*i].push(f);
    }
    let n = items.len();
    let mut b = Balancer {
        items,
        closes,
        balance: vec![0; face_ids.len()],
        chosen: vec![0; n],
        found: Vec::new(),
        limit,
        nodes: 0,
    };
    b.run(0, false);
    b.found
        .iter()
        .map(|sel| SimplexChain::from_terms(sel.iter().zip(&b.items).map(|(m, it)| (*m, it.simplex.clone()))))
        .collect()
}

/// Subsummands with a vanishing support, tagged by the vanishing vertex.
pub(crate) fn vanishing_subsummands(c: &SimplexChain, per_vertex: usize) -> Vec<(u32, SimplexChain)> {
    let mut out = Vec::new();
    for j in c.support().vertices() {
        let terms: Vec<(&FunctorSimplex, i64)> = c.terms().filter(|(f, _)| f.support().contains(*j)).collect();
        for d in balanced_subsummands(&terms, |g| g.support().contains(*j), per_vertex) {
            out.push((*j, d));
        }
    }
    out
}

/// A subsummand `d` and a vertex `j ∈ supp d` with `j ∉ supp ∂d`.
pub fn find_vanishing_subsummand(c: &SimplexChain) -> Option<(u32, SimplexChain)> {
    vanishing_subsummands(c, 1).into_iter().next()
}

/// A nonzero subsummand with zero boundary.
pub fn has_zero_boundary_subsummand(c: &SimplexChain) -> Option<SimplexChain> {
    let terms: Vec<(&FunctorSimplex, i64)> = c.terms().collect();
    balanced_subsummands(&terms, |_| true, 1).into_iter().next()
}

/// RN iff some subsummand has a vanishing support.
pub fn classify(c: &SimplexChain) -> Result<ChainKind> {
    require_one_shell(c)?;
    Ok(if find_vanishing_subsummand(c).is_some() { ChainKind::RN } else { ChainKind::NR })
}

/// Breadth-first search of the CR/RS neighbourhood of `c`. `Ok(false)` means
/// a shorter equivalent chain or a zero-boundary subsummand was reached;
/// `Ok(true)` means the whole reachable class was explored without one.
pub fn is_minimal(c: &SimplexChain, budget: usize, params: ModelParams) -> Result<bool> {
    require_one_shell(c)?;
    if has_zero_boundary_subsummand(c).is_some() {
        return Ok(false);
    }
    if find_vanishing_subsummand(c).is_none() {
        return Ok(true);
    }
    let length = c.length();
    let mut seen: HashSet<SimplexChain> = HashSet::new();
    seen.insert(c.clone());
    let mut queue = VecDeque::from([c.clone()]);
    while let Some(state) = queue.pop_front() {
        let mut next = Vec::new();
        for site in find_cr_sites(&state) {
            for policy in [AmalgamPolicy::ReuseTerms, AmalgamPolicy::Generic] {
                if let Ok(out) = apply_cr_with(&state, &site, policy, params) {
                    next.push(out);
                }
            }
        }
        let fresh = smallest_fresh_vertex(&state.support());
        for (j, d) in vanishing_subsummands(&state, 8) {
            next.push(apply_rs(&state, &d, j, fresh)?);
        }
        for out in next {
            if out.length() < length || has_zero_boundary_subsummand(&out).is_some() {
                return Ok(false);
            }
            if seen.insert(out.clone()) {
                if seen.len() > budget {
                    return Err(Error::BudgetExhausted(budget));
                }
                queue.push_back(out);
            }
        }
    }
    Ok(true)
}
