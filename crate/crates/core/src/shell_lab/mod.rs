//! Parameterized 1-shells in `M_n`, their minimal fills, the oracles that
//! certify minimal fill lengths, and the Lascar-distance fill.

mod lascar;
mod oracle;
mod table;

pub use lascar::fill_shell_lascar;
pub use oracle::{oracle_min_fill, oracle_min_fill_arithmetic, GridOracle, OracleKind};
pub use table::{table_rows, TableRow};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::chain::{boundary, SupportSet};
use crate::circle::{pick_generic, same_type, shd, CirclePoint, ModelParams, PointTuple};
use crate::error::{Error, Result};
use crate::rewriting::ChainWalk;
use crate::simplex::{simplex_from_top, FunctorSimplex, SimplexChain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ShellSpec {
    pub params: ModelParams,
    pub k1: i64,
    pub k2: i64,
    pub k3: i64,
}

impl ShellSpec {
    pub fn new(params: ModelParams, k1: i64, k2: i64, k3: i64) -> Result<Self> {
        for k in [k1, k2, k3] {
            if !(0..params.n()).contains(&k) {
                return Err(Error::OutOfRange { target: k, lo: 0, hi: params.n() - 1 });
            }
        }
        Ok(Self { params, k1, k2, k3 })
    }

    /// `0 ≤ k₄ < n` with `k₄ ≡ k₂ − (k₁ − k₃)`.
    pub fn k4(&self) -> i64 {
        self.params.residue(self.k2 - self.k1 + self.k3)
    }

    /// Every spec for `params`, in lexicographic order.
    pub fn all(params: ModelParams) -> impl Iterator<Item = ShellSpec> {
        let n = params.n();
        (0..n).flat_map(move |k1| (0..n).flat_map(move |k2| (0..n).map(move |k3| ShellSpec { params, k1, k2, k3 })))
    }
}

/// `n_s = min{2(n − k₄) − 1, 2k₄ + 1}`.
pub fn n_s_of(spec: &ShellSpec) -> u64 {
    let (n, k4) = (spec.params.n(), spec.k4());
    (2 * (n - k4) - 1).min(2 * k4 + 1) as u64
}

/// The 1-shell `s₁₂ − s₀₂ + s₀₁` on `{0,1,2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shell1 {
    pub s01: FunctorSimplex,
    pub s02: FunctorSimplex,
    pub s12: FunctorSimplex,
}

impl Shell1 {
    pub fn chain(&self) -> SimplexChain {
        SimplexChain::from_terms([(1, self.s12.clone()), (-1, self.s02.clone()), (1, self.s01.clone())])
    }

    /// Reads a shell back from its chain, accepting either orientation.
    pub fn from_chain(c: &SimplexChain) -> Result<Self> {
        let sign = if c.terms().any(|(f, k)| f.support() == &SupportSet::new([0, 1]) && k < 0) { -1 } else { 1 };
        let c = c.scale(sign);
        let pick = |vs: [u32; 2], k: i64| {
            let u = SupportSet::new(vs);
            let found: Vec<_> = c.terms().filter(|(f, _)| f.support() == &u).collect();
            match found.as_slice() {
                [(f, m)] if *m == k => Ok((*f).clone()),
                _ => Err(Error::NotOneShellBoundary),
            }
        };
        let shell = Shell1 { s01: pick([0, 1], 1)?, s02: pick([0, 2], -1)?, s12: pick([1, 2], 1)? };
        if shell.chain() != c || c.num_terms() != 3 || !boundary(&c)?.is_zero() {
            return Err(Error::NotOneShellBoundary);
        }
        Ok(shell)
    }

    /// The residues `Ŝd(a,c)`, `Ŝd(a,b)`, `Ŝd(b,c′)` of the three edges.
    pub fn spec(&self, params: ModelParams) -> Result<ShellSpec> {
        let edge = |f: &FunctorSimplex| -> Result<(CirclePoint, CirclePoint)> {
            let t = f.top();
            match t.points() {
                [x, y] => Ok((*x, *y)),
                _ => Err(Error::NotOneShellBoundary),
            }
        };
        let (a, c) = edge(&self.s01)?;
        let (a2, b) = edge(&self.s02)?;
        let (c2, b2) = edge(&self.s12)?;
        ShellSpec::new(params, shd(a, c, params)?, shd(a2, b, params)?, shd(b2, c2, params)?)
    }

    fn singletons(&self) -> [(SupportSet, PointTuple); 3] {
        let single = |f: &FunctorSimplex, v: u32| {
            let u = SupportSet::new([v]);
            let t = f.level(&u).cloned().unwrap_or_default();
            (u, t)
        };
        [single(&self.s01, 0), single(&self.s01, 1), single(&self.s02, 2)]
    }
}

/// `f` with the given levels replaced, revalidated.
pub(crate) fn override_levels(
    f: &FunctorSimplex,
    overrides: &[(SupportSet, PointTuple)],
    params: ModelParams,
) -> Result<FunctorSimplex> {
    let mut levels: BTreeMap<SupportSet, PointTuple> = f.levels().clone();
    for (u, t) in overrides {
        levels.insert(u.clone(), t.clone());
    }
    FunctorSimplex::new(f.support().clone(), levels, params)
}

fn level_of(f: &FunctorSimplex, vs: [u32; 2]) -> (SupportSet, PointTuple) {
    let u = SupportSet::new(vs);
    let t = f.level(&u).cloned().unwrap_or_default();
    (u, t)
}

/// Points `a, c, b, c′` with `Ŝd(a,c)=k₁`, `Ŝd(a,b)=k₂`, `Ŝd(b,c′)=k₃`, and
/// the shell `[c′,b] − [a,b] + [a,c]` on them.
pub fn build_shell(spec: &ShellSpec) -> Shell1 {
    let params = spec.params;
    let pick = |cs: &[(CirclePoint, i64)], avoid: &[CirclePoint]| {
        pick_generic(cs, avoid, params).expect("a single sector constraint is always satisfiable")
    };
    let a = pick(&[], &[]);
    let c = pick(&[(a, spec.k1)], &[]);
    let b = pick(&[(a, spec.k2)], &[c]);
    let c2 = pick(&[(b, spec.k3)], &[a, c]);
    let s01 = simplex_from_top(SupportSet::new([0, 1]), &[a, c], params).expect("independent pair");
    let s02 = simplex_from_top(SupportSet::new([0, 2]), &[a, b], params).expect("independent pair");
    let s12 = simplex_from_top(SupportSet::new([1, 2]), &[c2, b], params).expect("independent pair");
    let s12 = override_levels(&s12, &[(SupportSet::new([1]), PointTuple::new(vec![c]))], params)
        .expect("singleton levels are unconstrained");
    Shell1 { s01, s02, s12 }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FillMethod {
    Construction,
    Oracle,
    Lascar,
}

#[derive(Debug, Clone, Serialize)]
pub struct FillReport {
    pub chain: SimplexChain,
    pub length: u64,
    pub method: FillMethod,
    /// Whether `∂chain` equals the target shell exactly.
    pub verified: bool,
}

impl FillReport {
    pub fn new(chain: SimplexChain, method: FillMethod, shell: &Shell1) -> Self {
        let verified = boundary(&chain).map(|d| d == shell.chain()).unwrap_or(false);
        Self { length: chain.length(), chain, method, verified }
    }
}

/// Output of [`realize_distance_walk`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceWalk {
    pub a: CirclePoint,
    pub d: Vec<CirclePoint>,
}

/// Places `d₁, d₂, …` one at a time with `Ŝd(dᵢ,dᵢ₊₁)=lᵢ`, taking the upper
/// of the two possible values of `Ŝd(a,dᵢ₊₁)` on the first `raise` steps.
fn place_steps(
    a: CirclePoint,
    d0: CirclePoint,
    k: i64,
    l_seq: &[i64],
    raise: usize,
    avoid: &[CirclePoint],
    params: ModelParams,
) -> Result<Vec<CirclePoint>> {
    let mut d = vec![d0];
    let mut placed: Vec<CirclePoint> = avoid.iter().copied().chain([a, d0]).collect();
    let mut running = k;
    for (i, l) in l_seq.iter().enumerate() {
        running += l + i64::from(i < raise);
        let prev = *d.last().expect("nonempty");
        let next = pick_generic(&[(prev, *l), (a, running)], &placed, params)?;
        placed.push(next);
        d.push(next);
    }
    Ok(d)
}

/// Points `a, d₀, …, d_{m+1}` with `Ŝd(a,d₀)=k`, `Ŝd(dᵢ,dᵢ₊₁)=lᵢ` and
/// `Ŝd(a,d_{m+1}) ≡ target`, for any `target` in `[k+L_m, k+L_m+m+1]`.
pub fn realize_distance_walk(k: i64, l_seq: &[i64], target: i64, params: ModelParams) -> Result<DistanceWalk> {
    if l_seq.len() as i64 >= params.n() {
        return Err(Error::TooLong(l_seq.len(), params.n()));
    }
    let total: i64 = l_seq.iter().sum();
    let (lo, hi) = (k + total, k + total + l_seq.len() as i64);
    if target < lo || target > hi {
        return Err(Error::OutOfRange { target, lo, hi });
    }
    let a = pick_generic(&[], &[], params)?;
    let d0 = pick_generic(&[(a, k)], &[], params)?;
    let d = place_steps(a, d0, k, l_seq, (target - lo) as usize, &[], params)?;
    Ok(DistanceWalk { a, d })
}

/// The chain-walk `γ = Σ (−1)ⁱ rᵢ` on `{0,1,2}` of length `n_s` with `∂γ` the
/// given shell.
pub fn construct_min_fill(spec: &ShellSpec, shell: &Shell1) -> Result<FillReport> {
    let params = spec.params;
    let n_s = n_s_of(spec) as usize;
    let m_s = (n_s - 1) / 2;
    let mut l_seq = Vec::with_capacity(n_s);
    for _ in 0..m_s {
        l_seq.extend([0, -1]);
    }
    l_seq.push(-spec.k3 - 1);
    let raise = params.residue(spec.k4() + m_s as i64 + 1) as usize;
    if raise > n_s {
        return Err(Error::InconsistentSpec);
    }

    let s01_top = shell.s01.top();
    let (a, c) = (s01_top.points()[0], s01_top.points()[1]);
    let mut avoid: Vec<CirclePoint> = shell.s02.top().points().to_vec();
    avoid.extend(shell.s12.top().points());
    let d = place_steps(a, c, spec.k1, &l_seq, raise, &avoid, params)?;

    let full = SupportSet::new([0, 1, 2]);
    let singletons = shell.singletons();
    let mut terms = Vec::with_capacity(n_s);
    for i in 0..n_s {
        let top = if i % 2 == 0 { [a, d[i], d[i + 1]] } else { [a, d[i + 1], d[i]] };
        let mut overrides: Vec<(SupportSet, PointTuple)> = singletons.to_vec();
        if i == 0 {
            overrides.push(level_of(&shell.s01, [0, 1]));
        }
        if i == n_s - 1 {
            overrides.push(level_of(&shell.s02, [0, 2]));
            overrides.push(level_of(&shell.s12, [1, 2]));
        } else if i % 2 == 1 {
            overrides.push((SupportSet::new([1, 2]), PointTuple::new(vec![d[i - 1], d[i]])));
        }
        let r = simplex_from_top(full.clone(), &top, params)?;
        let r = override_levels(&r, &overrides, params)?;
        terms.push((if i % 2 == 0 { 1 } else { -1 }, r));
    }
    Ok(FillReport::new(SimplexChain::from_terms(terms), FillMethod::Construction, shell))
}

/// Verdict of [`check_weak_3a`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Weak3a {
    pub holds: bool,
    /// The lexicographically least spec with `n_s > 3`, and its `n_s`.
    pub witness: Option<(ShellSpec, u64)>,
}

pub fn check_weak_3a(params: ModelParams) -> Weak3a {
    let witness = ShellSpec::all(params).map(|s| (s, n_s_of(&s))).find(|(_, len)| *len > 3);
    Weak3a { holds: witness.is_none(), witness }
}

/// Output of [`walk_to_points`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkPoints {
    pub a: CirclePoint,
    pub d: Vec<CirclePoint>,
    /// `kᵢ < kᵢ₊₁` for each term.
    pub ascending: Vec<bool>,
}

impl WalkPoints {
    /// `Ŝd(dᵢ, dᵢ₊₁)` for each step.
    pub fn steps(&self, params: ModelParams) -> Result<Vec<i64>> {
        self.d.windows(2).map(|w| shd(w[0], w[1], params)).collect()
    }
}

/// Lays the triangles of a walk centered at 0 side by side: one point `a`
/// for the center and one point `dᵢ` per walk label, honoring every `Ŝd`
/// residue read off the terms.
pub fn walk_to_points(walk: &ChainWalk, params: ModelParams) -> Result<WalkPoints> {
    if walk.center != 0 || walk.terms.iter().any(|(_, b)| !b.support().contains(0)) {
        return Err(Error::NotCentered(0));
    }
    let mut tops = Vec::with_capacity(walk.len());
    let mut ascending = Vec::with_capacity(walk.len());
    for (i, (_, b)) in walk.terms.iter().enumerate() {
        let (from, to) = (walk.sequence[i], walk.sequence[i + 1]);
        let (Some(x0), Some(xf), Some(xt)) = (b.top_point(0), b.top_point(from), b.top_point(to)) else {
            return Err(Error::NotCentered(0));
        };
        tops.push((x0, xf, xt));
        ascending.push(from < to);
    }
    let (x0, xf, _) = tops[0];
    let a = pick_generic(&[], &[], params)?;
    let mut d = vec![pick_generic(&[(a, shd(x0, xf, params)?)], &[a], params)?];
    let mut placed = vec![a, d[0]];
    for (x0, xf, xt) in &tops {
        let prev = *d.last().expect("nonempty");
        let next = pick_generic(&[(prev, shd(*xf, *xt, params)?), (a, shd(*x0, *xt, params)?)], &placed, params)
            .map_err(|_| Error::InconsistentSpec)?;
        placed.push(next);
        d.push(next);
    }
    for (i, ((x0, xf, xt), up)) in tops.iter().zip(&ascending).enumerate() {
        let (ours, theirs) =
            if *up { ([a, d[i], d[i + 1]], [*x0, *xf, *xt]) } else { ([a, d[i + 1], d[i]], [*x0, *xt, *xf]) };
        if !same_type(&PointTuple::new(ours.to_vec()), &PointTuple::new(theirs.to_vec()), params)? {
            return Err(Error::InconsistentSpec);
        }
    }
    Ok(WalkPoints { a, d, ascending })
}

/// The five-term chain `a₁ + a₂ + a₃ − a₄ − a₅` on `{0,1,2}` whose faces are
/// identified as `a₂¹² = a₄¹²`, `a₃¹² = a₅¹²`, `a₁⁰² = a₅⁰²`, `a₃⁰² = a₄⁰²`,
/// `a₁⁰¹ = a₄⁰¹`, `a₂⁰¹ = a₅⁰¹`, all other faces distinct. Its boundary is
/// `a₁¹² − a₂⁰² + a₃⁰¹`.
pub fn nr_example(params: ModelParams) -> Result<SimplexChain> {
    let mut placed = Vec::new();
    let fresh_pair = |placed: &mut Vec<CirclePoint>| -> Result<PointTuple> {
        let x = pick_generic(&[], placed, params)?;
        placed.push(x);
        let y = pick_generic(&[(x, 0)], placed, params)?;
        placed.push(y);
        Ok(PointTuple::new(vec![x, y]))
    };
    let x: Vec<PointTuple> = (0..3).map(|_| fresh_pair(&mut placed)).collect::<Result<_>>()?;
    let y: Vec<PointTuple> = (0..3).map(|_| fresh_pair(&mut placed)).collect::<Result<_>>()?;
    let z: Vec<PointTuple> = (0..3).map(|_| fresh_pair(&mut placed)).collect::<Result<_>>()?;
    let t0 = pick_generic(&[], &placed, params)?;
    let t1 = pick_generic(&[(t0, 0)], &placed, params)?;
    let t2 = pick_generic(&[(t0, 0), (t1, 0)], &placed, params)?;
    let top = simplex_from_top(SupportSet::new([0, 1, 2]), &[t0, t1, t2], params)?;
    let term = |xi: usize, yi: usize, zi: usize| {
        override_levels(
            &top,
            &[
                (SupportSet::new([1, 2]), x[xi].clone()),
                (SupportSet::new([0, 2]), y[yi].clone()),
                (SupportSet::new([0, 1]), z[zi].clone()),
            ],
            params,
        )
    };
    Ok(SimplexChain::from_terms([
        (1, term(0, 1, 1)?),
        (1, term(1, 0, 2)?),
        (1, term(2, 2, 0)?),
        (-1, term(1, 2, 1)?),
        (-1, term(2, 1, 2)?),
    ]))
}
