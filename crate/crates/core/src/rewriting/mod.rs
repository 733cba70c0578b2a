//! The CR and RS operations on 2-chains, chain-walks and their reducts,
//! RN/NR classification, minimality search and reduction to standard form.

mod classify;
mod standard;
mod walk;

pub use classify::{classify, find_vanishing_subsummand, has_zero_boundary_subsummand, is_minimal, ChainKind};
pub use standard::{is_standard_rn, to_standard_rn, StandardForm, DEFAULT_BUDGET};
pub use walk::{extract_chain_walk, reduct, ChainWalk, Reduct, SignedEdge};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::chain::{boundary, is_shell, sigma_star, subchain_of, Permutation, SupportSet};
use crate::circle::ModelParams;
use crate::error::{Error, Result};
use crate::simplex::{amalgamate_family, face, FunctorSimplex, SimplexChain};

fn parity(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The term of `∂(ε b)` on the face `b ↾ P(u)`, with its sign.
pub fn boundary_term(eps: i64, b: &FunctorSimplex, u: &SupportSet) -> (i64, FunctorSimplex) {
    let omitted = b.support().difference(u).vertices()[0];
    let rank = b.support().rank(omitted).expect("omitted vertex");
    (eps * parity(rank), face(b, u).expect("face of b"))
}

/// Boundary must be a 1-shell.
pub(crate) fn require_one_shell(c: &SimplexChain) -> Result<SimplexChain> {
    if c.dimension()? != Some(2) {
        return Err(Error::NotOneShellBoundary);
    }
    let d = boundary(c)?;
    if !is_shell(&d) {
        return Err(Error::NotOneShellBoundary);
    }
    Ok(d)
}

pub(crate) fn smallest_fresh_vertex(support: &SupportSet) -> u32 {
    (0..).find(|v| !support.contains(*v)).expect("some vertex is free")
}

/// Two terms `ε₁α₁ + ε₂α₂` with supports `{ℓ₁,ℓ₂,k₁}` and `{ℓ₁,ℓ₂,k₂}` whose
/// common edge cancels in `∂(ε₁α₁ + ε₂α₂)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrSite {
    pub alpha1: FunctorSimplex,
    pub eps1: i64,
    pub alpha2: FunctorSimplex,
    pub eps2: i64,
    pub k1: u32,
    pub k2: u32,
    pub l1: u32,
    pub l2: u32,
}

impl CrSite {
    /// Checks the shape of the pair and builds the site, or explains why not.
    pub fn new(alpha1: &FunctorSimplex, eps1: i64, alpha2: &FunctorSimplex, eps2: i64) -> Result<Self> {
        if alpha1.support().len() != 3 || alpha2.support().len() != 3 {
            return Err(Error::InvalidSite("terms must be 2-simplices".into()));
        }
        if eps1.abs() != 1 || eps2.abs() != 1 {
            return Err(Error::InvalidSite("signs must be ±1".into()));
        }
        let common = alpha1.support().intersection(alpha2.support());
        if common.len() != 2 {
            return Err(Error::InvalidSite("supports must share exactly two vertices".into()));
        }
        if face(alpha1, &common)? != face(alpha2, &common)? {
            return Err(Error::InvalidSite("terms disagree on their common edge".into()));
        }
        let (s1, _) = boundary_term(eps1, alpha1, &common);
        let (s2, _) = boundary_term(eps2, alpha2, &common);
        if s1 + s2 != 0 {
            return Err(Error::InvalidSite("common edge does not cancel".into()));
        }
        let k1 = alpha1.support().difference(&common).vertices()[0];
        let k2 = alpha2.support().difference(&common).vertices()[0];
        Ok(Self {
            alpha1: alpha1.clone(),
            eps1,
            alpha2: alpha2.clone(),
            eps2,
            k1,
            k2,
            l1: common.vertices()[0],
            l2: common.vertices()[1],
        })
    }

    fn vertex_sign(&self, v: u32) -> i64 {
        let all = SupportSet::new([self.k1, self.k2, self.l1, self.l2]);
        parity(all.rank(v).expect("site vertex"))
    }

    pub fn support1(&self) -> SupportSet {
        SupportSet::new([self.k1, self.k2, self.l1])
    }

    pub fn support2(&self) -> SupportSet {
        SupportSet::new([self.k1, self.k2, self.l2])
    }

    /// `w' = -σ (sgn(ℓ₂) β₁ + sgn(ℓ₁) β₂)` with `σ = ε₁ sgn(k₂)`, where
    /// `β_i = μ ↾ P({k₁,k₂,ℓ_i})` and `sgn(v) = (-1)^rank(v)` in `{k₁,k₂,ℓ₁,ℓ₂}`.
    pub fn replacement(&self, mu: &FunctorSimplex) -> Result<SimplexChain> {
        let sigma = self.eps1 * self.vertex_sign(self.k2);
        let b1 = face(mu, &self.support1())?;
        let b2 = face(mu, &self.support2())?;
        Ok(SimplexChain::from_terms([
            (-sigma * self.vertex_sign(self.l2), b1),
            (-sigma * self.vertex_sign(self.l1), b2),
        ]))
    }

    fn describe(&self) -> String {
        format!("k1={} k2={} l1={} l2={} eps1={} eps2={}", self.k1, self.k2, self.l1, self.l2, self.eps1, self.eps2)
    }
}

/// Every pair of distinct terms of `c` forming a CR site, in term order.
pub fn find_cr_sites(c: &SimplexChain) -> Vec<CrSite> {
    let terms: Vec<(&FunctorSimplex, i64)> = c.terms().collect();
    let mut out = Vec::new();
    for (i, (f, m)) in terms.iter().enumerate() {
        for (g, n) in &terms[i + 1..] {
            if let Ok(site) = CrSite::new(f, m.signum(), g, n.signum()) {
                out.push(site);
            }
        }
    }
    out
}

/// How the 3-simplex `μ` of a CR operation is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmalgamPolicy {
    /// Prefer a `μ` whose new faces are terms already present in the chain.
    ReuseTerms,
    /// Always the strong amalgam of the two site terms.
    Generic,
}

fn crossing_amalgam(
    c: &SimplexChain,
    site: &CrSite,
    policy: AmalgamPolicy,
    params: ModelParams,
) -> Result<FunctorSimplex> {
    if policy == AmalgamPolicy::ReuseTerms {
        let (s1, s2) = (site.support1(), site.support2());
        let c1: Vec<&FunctorSimplex> = c.terms().map(|(f, _)| f).filter(|f| f.support() == &s1).collect();
        let c2: Vec<&FunctorSimplex> = c.terms().map(|(f, _)| f).filter(|f| f.support() == &s2).collect();
        let mut tries: Vec<Vec<&FunctorSimplex>> = Vec::new();
        for a in &c1 {
            for b in &c2 {
                tries.push(vec![a, b]);
            }
        }
        tries.extend(c2.iter().map(|b| vec![*b]));
        tries.extend(c1.iter().map(|a| vec![*a]));
        for extra in tries {
            let mut family = vec![&site.alpha1, &site.alpha2];
            family.extend(extra);
            if let Ok(mu) = amalgamate_family(&family, params) {
                return Ok(mu);
            }
        }
    }
    amalgamate_family(&[&site.alpha1, &site.alpha2], params)
}

/// `c - w + w'` for the site `w = ε₁α₁ + ε₂α₂`.
pub fn apply_cr_with(
    c: &SimplexChain,
    site: &CrSite,
    policy: AmalgamPolicy,
    params: ModelParams,
) -> Result<SimplexChain> {
    let checked = CrSite::new(&site.alpha1, site.eps1, &site.alpha2, site.eps2)?;
    if checked != *site {
        return Err(Error::InvalidSite("site data is inconsistent".into()));
    }
    let w = SimplexChain::from_terms([(site.eps1, site.alpha1.clone()), (site.eps2, site.alpha2.clone())]);
    if !subchain_of(&w, c) {
        return Err(Error::InvalidSite("site terms are not a subsummand".into()));
    }
    let mu = crossing_amalgam(c, site, policy, params)?;
    Ok(c.sub(&w).add(&site.replacement(&mu)?))
}

/// CR operation with term reuse for `μ`.
pub fn apply_cr(c: &SimplexChain, site: &CrSite, params: ModelParams) -> Result<SimplexChain> {
    apply_cr_with(c, site, AmalgamPolicy::ReuseTerms, params)
}

/// RS operation: replaces `d` by `σ*(d)` for the transposition `j ↔ k`.
pub fn apply_rs(c: &SimplexChain, d: &SimplexChain, j: u32, k: u32) -> Result<SimplexChain> {
    if !subchain_of(d, c) || d.is_zero() {
        return Err(Error::NotSubchain);
    }
    if !d.support().contains(j) || boundary(d)?.support().contains(j) {
        return Err(Error::NotVanishing(j));
    }
    if c.support().contains(k) {
        return Err(Error::VertexInUse(k));
    }
    let sigma = Permutation::transposition(j, k);
    Ok(c.sub(d).add(&sigma_star(&sigma, d)))
}

/// SHA-256 of the canonical JSON encoding.
pub fn chain_hash(c: &SimplexChain) -> String {
    let text = serde_json::to_string(c).expect("chains serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub op: &'static str,
    pub site: String,
    pub before: String,
    pub after: String,
}

/// Applies operations while recording an audit trail.
#[derive(Debug, Clone)]
pub struct Rewriter {
    params: ModelParams,
    policy: AmalgamPolicy,
    trace: Vec<TraceEntry>,
}

impl Rewriter {
    pub fn new(params: ModelParams, policy: AmalgamPolicy) -> Self {
        Self { params, policy, trace: Vec::new() }
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn trace(&self) -> &[TraceEntry] {
        &self.trace
    }

    pub fn into_trace(self) -> Vec<TraceEntry> {
        self.trace
    }

    fn record(&mut self, op: &'static str, site: String, before: &SimplexChain, after: &SimplexChain) {
        self.trace.push(TraceEntry { op, site, before: chain_hash(before), after: chain_hash(after) });
    }

    pub fn cr(&mut self, c: &SimplexChain, site: &CrSite) -> Result<SimplexChain> {
        let out = apply_cr_with(c, site, self.policy, self.params)?;
        self.record("CR", site.describe(), c, &out);
        Ok(out)
    }

    pub fn rs(&mut self, c: &SimplexChain, d: &SimplexChain, j: u32, k: u32) -> Result<SimplexChain> {
        let out = apply_rs(c, d, j, k)?;
        self.record("RS", format!("j={j} k={k} terms={}", d.num_terms()), c, &out);
        Ok(out)
    }

    /// `w'` for a site without touching any chain.
    pub fn crossing(&mut self, site: &CrSite) -> Result<SimplexChain> {
        let w = SimplexChain::from_terms([(site.eps1, site.alpha1.clone()), (site.eps2, site.alpha2.clone())]);
        let out = apply_cr_with(&w, site, AmalgamPolicy::Generic, self.params)?;
        self.record("CR", site.describe(), &w, &out);
        Ok(out)
    }
}

/// One JSON object per line.
pub fn trace_to_jsonl(trace: &[TraceEntry]) -> String {
    trace.iter().map(|e| serde_json::to_string(e).expect("trace serializes") + "\n").collect()
}
