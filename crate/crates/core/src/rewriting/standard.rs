use std::collections::HashSet;

use super::walk::{longest_walk, merge_adjacent, SignedEdge};
use super::{
    classify, find_vanishing_subsummand, is_minimal, require_one_shell, smallest_fresh_vertex, AmalgamPolicy,
    ChainKind, ChainWalk, CrSite, Rewriter, TraceEntry,
};
use crate::chain::{boundary, SupportSet};
use crate::circle::ModelParams;
use crate::error::{Error, Result};
use crate::simplex::{face, FunctorSimplex, SimplexChain};

pub const DEFAULT_BUDGET: usize = 10_000;

/// Output of [`to_standard_rn`]: the standard representation and the
/// operations that produced it.
#[derive(Debug, Clone)]
pub struct StandardForm {
    pub walk: ChainWalk,
    pub trace: Vec<TraceEntry>,
}

impl StandardForm {
    pub fn chain(&self) -> SimplexChain {
        self.walk.chain()
    }
}

struct ShellFaces {
    f01: FunctorSimplex,
    f02: FunctorSimplex,
    f12: FunctorSimplex,
}

fn shell_faces(d: &SimplexChain) -> Result<ShellFaces> {
    let pick = |vs: [u32; 2], sign: i64| {
        let u = SupportSet::new(vs);
        let terms: Vec<(&FunctorSimplex, i64)> = d.terms().filter(|(f, _)| f.support() == &u).collect();
        match terms.as_slice() {
            [(f, k)] if *k == sign => Ok((*f).clone()),
            _ => Err(Error::NotOneShellBoundary),
        }
    };
    Ok(ShellFaces { f01: pick([0, 1], 1)?, f02: pick([0, 2], -1)?, f12: pick([1, 2], 1)? })
}

/// The standard-form postconditions: `walk` is a chain-walk from `f₀₁` to
/// `-f₀₂` centered at 0 that equals `c` as a chain, of odd length at least 3,
/// whose last term `a₂ₙ` has coefficient 1, support `{0,1,2}` and `∂⁰a₂ₙ = f₁₂`.
pub fn is_standard_rn(walk: &ChainWalk, c: &SimplexChain) -> bool {
    let Ok(d) = boundary(c) else { return false };
    let Ok(shell) = shell_faces(&d) else { return false };
    let from = (1, shell.f01.clone());
    let to = (-1, shell.f02.clone());
    if walk.center != 0 || !walk.is_walk_between(&from, &to) || walk.chain() != *c {
        return false;
    }
    if walk.len() < 3 || walk.len().is_multiple_of(2) || walk.terms[0].0 != 1 {
        return false;
    }
    let (eps, last) = walk.terms.last().expect("nonempty");
    *eps == 1
        && last.support() == &SupportSet::new([0, 1, 2])
        && face(last, &SupportSet::new([1, 2])).ok().as_ref() == Some(&shell.f12)
}

fn existing_standard(c: &SimplexChain, shell: &ShellFaces) -> Option<ChainWalk> {
    let from = (1, shell.f01.clone());
    let to = (-1, shell.f02.clone());
    let full = SupportSet::new([0, 1, 2]);
    c.terms()
        .filter(|(f, k)| *k > 0 && f.support() == &full)
        .filter_map(|(f, _)| longest_walk(c, &from, &to, 0, Some(f)))
        .find(|w| is_standard_rn(w, c))
}

/// Rewrites `alpha` until one chain-walk around `center` from `from` to `to`
/// (ending with `last`, when given) covers it, by renaming `center` away from
/// the rest and crossing walk terms with the rest.
fn center_at(
    mut alpha: SimplexChain,
    center: u32,
    from: &SignedEdge,
    to: &SignedEdge,
    last: Option<&FunctorSimplex>,
    rw: &mut Rewriter,
) -> Result<(SimplexChain, ChainWalk)> {
    let length = alpha.length();
    for _ in 0..(4 * length + 16) {
        let walk = longest_walk(&alpha, from, to, center, last).ok_or(Error::WalkNotFound)?;
        let beta = walk.chain();
        if beta == alpha {
            return Ok((alpha, walk));
        }
        let gamma = alpha.sub(&beta);
        if boundary(&gamma)?.is_zero() {
            return Err(Error::NotMinimal);
        }
        if gamma.support().contains(center) {
            let fresh = smallest_fresh_vertex(&alpha.support());
            alpha = rw.rs(&alpha, &gamma, center, fresh)?;
            continue;
        }
        let site = walk
            .terms
            .iter()
            .filter(|(_, b)| last != Some(b))
            .flat_map(|(e, b)| gamma.terms().map(move |(g, m)| (b, *e, g, m.signum())))
            .find_map(|(b, e, g, m)| CrSite::new(b, e, g, m).ok())
            .ok_or_else(|| Error::Reduction(format!("no crossing between the walk around {center} and the rest")))?;
        alpha = rw.cr(&alpha, &site)?;
        if alpha.length() < length {
            return Err(Error::NotMinimal);
        }
    }
    Err(Error::Reduction(format!("recentering at {center} did not converge")))
}

/// Merge positions reducing `sequence` to its two endpoints, where a merge at
/// `i` removes `sequence[i+1]` and requires `sequence[i] ≠ sequence[i+2]`.
fn plan_merges(sequence: &[u32]) -> Option<Vec<usize>> {
    fn go(seq: &[u32], dead: &mut HashSet<Vec<u32>>, plan: &mut Vec<usize>) -> bool {
        if seq.len() == 2 {
            return true;
        }
        if dead.contains(seq) || dead.len() > 200_000 {
            return false;
        }
        for i in 0..seq.len() - 2 {
            if seq[i] == seq[i + 2] {
                continue;
            }
            let mut next = seq.to_vec();
            next.remove(i + 1);
            plan.push(i);
            if go(&next, dead, plan) {
                return true;
            }
            plan.pop();
        }
        dead.insert(seq.to_vec());
        false
    }
    let mut plan = Vec::new();
    go(sequence, &mut HashSet::new(), &mut plan).then_some(plan)
}

/// Reduces a minimal RN chain with boundary `f₁₂ - f₀₂ + f₀₁` on `{0,1,2}` to
/// an equivalent standard representation. Inputs already in standard form
/// are returned unchanged. Only a definite `false` from the budgeted
/// minimality search rejects the input.
pub fn to_standard_rn(c: &SimplexChain, budget: usize, params: ModelParams) -> Result<StandardForm> {
    let d = require_one_shell(c)?;
    let shell = shell_faces(&d)?;
    if let Some(walk) = existing_standard(c, &shell) {
        return Ok(StandardForm { walk, trace: Vec::new() });
    }
    if classify(c)? == ChainKind::NR {
        return Err(Error::NotRN);
    }
    if let Ok(false) = is_minimal(c, budget, params) {
        return Err(Error::NotMinimal);
    }
    let mut rw = Rewriter::new(params, AmalgamPolicy::Generic);
    let mut alpha = c.clone();
    if alpha.support().len() <= 3 {
        let (j, sub) = find_vanishing_subsummand(&alpha).ok_or(Error::NotRN)?;
        let fresh = smallest_fresh_vertex(&alpha.support());
        alpha = rw.rs(&alpha, &sub, j, fresh)?;
    }

    let (_, walk) = center_at(alpha, 2, &(-1, shell.f02.clone()), &(1, shell.f12.clone()), None, &mut rw)?;
    let plan = plan_merges(&walk.sequence).ok_or_else(|| Error::Reduction("walk sequence does not reduce".into()))?;
    let mut walk = walk;
    let mut residual = SimplexChain::zero();
    for i in plan {
        let (next, extra) = merge_adjacent(&walk, i, &mut rw)?;
        walk = next;
        residual = residual.add(&extra);
    }
    let (eps, core) = walk.terms[0].clone();
    if eps != 1 || core.support() != &SupportSet::new([0, 1, 2]) {
        return Err(Error::Reduction("collapsed walk is not a single positive {0,1,2} term".into()));
    }
    let alpha = walk.chain().add(&residual);
    if alpha.length() != c.length() {
        return Err(Error::NotMinimal);
    }

    let (alpha, walk) = center_at(alpha, 0, &(1, shell.f01.clone()), &(-1, shell.f02.clone()), Some(&core), &mut rw)?;
    if boundary(&alpha)? != d || alpha.length() != c.length() || !is_standard_rn(&walk, &alpha) {
        return Err(Error::Reduction("result fails the standard-form postconditions".into()));
    }
    Ok(StandardForm { walk, trace: rw.into_trace() })
}
