use num_traits::One;

use super::{level_of, override_levels, FillMethod, FillReport, Shell1};
use crate::chain::SupportSet;
use crate::circle::{
    lascar_adjacent, lascar_distance, pick_generic, pick_in_arc, same_type, shd, Arc, CirclePoint, ModelParams,
    PointTuple, Rational,
};
use crate::error::{Error, Result};
use crate::simplex::{simplex_from_top, FunctorSimplex, SimplexChain};

fn pair(x: CirclePoint, y: CirclePoint) -> PointTuple {
    PointTuple::new(vec![x, y])
}

/// Points `c = c₀, …, c_N = c′`, consecutive ones within an open `1/n` arc,
/// the intermediate ones orbit-disjoint from `placed`.
fn lascar_path(
    c: CirclePoint,
    c2: CirclePoint,
    placed: &mut Vec<CirclePoint>,
    params: ModelParams,
) -> Result<Vec<CirclePoint>> {
    let n_steps = lascar_distance(c, c2, params) as i128;
    let forward = c.forward_to(&c2);
    let (theta, dir) = if forward <= Rational::one() - forward {
        (forward, Rational::one())
    } else {
        (Rational::one() - forward, -Rational::one())
    };
    let step = theta / Rational::from_integer(n_steps);
    let slack = (Rational::new(1, params.n() as i128) - step) / Rational::from_integer(4);
    let mut path = vec![c];
    for i in 1..n_steps {
        let target = c.value() + dir * step * Rational::from_integer(i);
        let next = pick_in_arc(Arc { lo: target - slack, hi: target + slack }, placed, params)?;
        placed.push(next);
        path.push(next);
    }
    path.push(c2);
    Ok(path)
}

/// A point `e` orbit-disjoint from `placed` with `Ŝd(e,x) = Ŝd(e,y)`, for
/// `x, y` within an open `1/n` arc of each other.
fn witness(x: CirclePoint, y: CirclePoint, placed: &[CirclePoint], params: ModelParams) -> Result<CirclePoint> {
    let (lo, hi) = if x.forward_to(&y) < y.forward_to(&x) { (x, y) } else { (y, x) };
    let arc = Arc { lo: lo.value() + lo.forward_to(&hi), hi: lo.value() + Rational::new(1, params.n() as i128) };
    let e = pick_in_arc(arc, placed, params)?;
    if shd(e, x, params)? != shd(e, y, params)? {
        return Err(Error::InconsistentSpec);
    }
    Ok(e)
}

/// The shell's points `a, c, b, c′`, re-placing `b` (and then `c′`) when the
/// shell's three edges do not share them literally.
fn shell_points(shell: &Shell1, params: ModelParams) -> Result<[CirclePoint; 4]> {
    let spec = shell.spec(params)?;
    let (s01, s02, s12) = (shell.s01.top(), shell.s02.top(), shell.s12.top());
    let (a, c) = (s01.points()[0], s01.points()[1]);
    let (c2, b) = (s12.points()[0], s12.points()[1]);
    if s02.points()[0] == a && s02.points()[1] == b {
        return Ok([a, c, b, c2]);
    }
    let q = shd(c2, b, params)?;
    if let Ok(b) = pick_generic(&[(a, spec.k2), (c2, q)], &[c], params) {
        return Ok([a, c, b, c2]);
    }
    let b = pick_generic(&[(a, spec.k2)], &[c], params)?;
    let c2 = pick_generic(&[(b, spec.k3)], &[a, c], params)?;
    Ok([a, c, b, c2])
}

/// A fill of length `2N + 1`, `N` the Lascar distance between the two
/// realizations `c` (in `s₀₁`) and `c′` (in `s₁₂`) of vertex 1: pairs
/// `[a,cᵢ,eᵢ] − [a,cᵢ₊₁,eᵢ]` on `{0,1,3}` walk `c` to `c′`, and
/// `[c′,b,e] − [a,b,e]` closes the shell.
pub fn fill_shell_lascar(shell: &Shell1, params: ModelParams) -> Result<FillReport> {
    let [a, c, b, c2] = shell_points(shell, params)?;
    let singles: Vec<(SupportSet, PointTuple)> =
        [(0, a), (1, c), (2, b)].into_iter().map(|(v, p)| (SupportSet::new([v]), PointTuple::new(vec![p]))).collect();
    let build = |vs: [u32; 3], top: [CirclePoint; 3], extra: Vec<(SupportSet, PointTuple)>| -> Result<FunctorSimplex> {
        let support = SupportSet::new(vs);
        let f = simplex_from_top(support.clone(), &top, params)?;
        let mut overrides: Vec<_> = singles.iter().filter(|(u, _)| u.is_subset(&support)).cloned().collect();
        overrides.extend(extra);
        override_levels(&f, &overrides, params)
    };

    if c == c2 {
        if !PointTuple::new(vec![a, c, b]).is_independent(params) {
            return Err(Error::InconsistentSpec);
        }
        let f = build(
            [0, 1, 2],
            [a, c, b],
            vec![level_of(&shell.s01, [0, 1]), level_of(&shell.s02, [0, 2]), level_of(&shell.s12, [1, 2])],
        )?;
        return Ok(FillReport::new(SimplexChain::single(f), FillMethod::Lascar, shell));
    }

    let mut placed = vec![a, b, c, c2];
    let path = lascar_path(c, c2, &mut placed, params)?;
    if !path.windows(2).all(|w| lascar_adjacent(w[0], w[1], params) && w[0] != w[1]) {
        return Err(Error::InconsistentSpec);
    }
    let n_steps = path.len() - 1;
    let mut terms = Vec::with_capacity(2 * n_steps + 1);
    let mut e = CirclePoint::zero();
    for i in 0..n_steps {
        e = witness(path[i], path[i + 1], &placed, params)?;
        placed.push(e);
        let e_single = (SupportSet::new([3]), PointTuple::new(vec![e]));
        let mut plus_extra = vec![e_single.clone()];
        if i == 0 {
            plus_extra.push(level_of(&shell.s01, [0, 1]));
        }
        terms.push((1, build([0, 1, 3], [a, path[i], e], plus_extra)?));
        if i + 1 < n_steps {
            let minus_extra = vec![e_single, (SupportSet::new([1, 3]), pair(path[i], e))];
            terms.push((-1, build([0, 1, 3], [a, path[i + 1], e], minus_extra)?));
        }
    }
    let e_single = (SupportSet::new([3]), PointTuple::new(vec![e]));
    let last = path[n_steps - 1];
    terms.push((-1, build([0, 2, 3], [a, b, e], vec![e_single.clone(), level_of(&shell.s02, [0, 2])])?));
    terms.push((
        1,
        build(
            [1, 2, 3],
            [c2, b, e],
            vec![e_single, level_of(&shell.s12, [1, 2]), (SupportSet::new([1, 3]), pair(last, e))],
        )?,
    ));
    if !same_type(&pair(last, e), &pair(c2, e), params)? {
        return Err(Error::InconsistentSpec);
    }
    Ok(FillReport::new(SimplexChain::from_terms(terms), FillMethod::Lascar, shell))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shell_lab::{build_shell, ShellSpec};

    #[test]
    fn built_shells_fill() {
        for n in 2..=6 {
            let params = ModelParams::new(n).unwrap();
            for spec in ShellSpec::all(params).step_by(7) {
                let shell = build_shell(&spec);
                let report = fill_shell_lascar(&shell, params).unwrap();
                assert!(report.verified, "{spec:?}");
                let c = shell.s01.top().points()[1];
                let c2 = shell.s12.top().points()[0];
                assert_eq!(report.length, 2 * lascar_distance(c, c2, params) + 1);
            }
        }
    }

    #[test]
    fn antipodal_shell_needs_seven_terms() {
        let params = ModelParams::new(4).unwrap();
        let (a, c, b, c2) =
            (CirclePoint::new(1, 8), CirclePoint::zero(), CirclePoint::new(3, 16), CirclePoint::new(1, 2));
        let s01 = simplex_from_top(SupportSet::new([0, 1]), &[a, c], params).unwrap();
        let s02 = simplex_from_top(SupportSet::new([0, 2]), &[a, b], params).unwrap();
        let s12 = simplex_from_top(SupportSet::new([1, 2]), &[c2, b], params).unwrap();
        let s12 = override_levels(&s12, &[(SupportSet::new([1]), PointTuple::new(vec![c]))], params).unwrap();
        let shell = Shell1 { s01, s02, s12 };
        assert!(crate::chain::is_shell(&shell.chain()));
        let report = fill_shell_lascar(&shell, params).unwrap();
        assert!(report.verified);
        assert_eq!(report.length, 7);
    }
}
