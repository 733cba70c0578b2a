#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use shellfill::chain::{Permutation, SupportSet};
use shellfill::circle::{in_cyclic_range, shd, CirclePoint, ModelParams, PointTuple};
use shellfill::rewriting::{apply_cr_with, apply_rs, find_cr_sites, find_vanishing_subsummand, AmalgamPolicy};
use shellfill::shell_lab::{build_shell, construct_min_fill, fill_shell_lascar, n_s_of, ShellSpec};
use shellfill::simplex::{simplex_from_top, FunctorSimplex, SimplexChain};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn params(n: i64) -> ModelParams {
    ModelParams::new(n).unwrap()
}

pub fn random_point(rng: &mut ChaCha8Rng) -> CirclePoint {
    CirclePoint::new(rng.gen_range(0..997), 997)
}

pub fn random_independent(rng: &mut ChaCha8Rng, k: usize, params: ModelParams) -> Vec<CirclePoint> {
    loop {
        let pts: Vec<CirclePoint> = (0..k).map(|_| random_point(rng)).collect();
        if PointTuple::new(pts.clone()).is_independent(params) {
            return pts;
        }
    }
}

pub fn random_support(rng: &mut ChaCha8Rng, size: usize, universe: u32) -> SupportSet {
    let mut all: Vec<u32> = (0..universe).collect();
    all.shuffle(rng);
    SupportSet::new(all.into_iter().take(size))
}

pub fn random_simplex(rng: &mut ChaCha8Rng, dim: usize, params: ModelParams) -> FunctorSimplex {
    let support = random_support(rng, dim + 1, 7);
    let pts = random_independent(rng, dim + 1, params);
    simplex_from_top(support, &pts, params).unwrap()
}

pub fn random_chain(rng: &mut ChaCha8Rng, dim: usize, params: ModelParams) -> SimplexChain {
    let terms = rng.gen_range(1..=5);
    SimplexChain::from_terms((0..terms).map(|_| {
        let k = *[-2i64, -1, 1, 2].choose(rng).unwrap();
        (k, random_simplex(rng, dim, params))
    }))
}

pub fn random_permutation(rng: &mut ChaCha8Rng) -> Permutation {
    let mut image: Vec<u32> = (0..8).collect();
    image.shuffle(rng);
    Permutation::from_pairs((0..8).zip(image)).unwrap()
}

pub fn random_spec(rng: &mut ChaCha8Rng, params: ModelParams) -> ShellSpec {
    let n = params.n();
    ShellSpec::new(params, rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)).unwrap()
}

/// Fills of built shells: the minimal construction and the Lascar fill.
pub fn fills(spec: &ShellSpec) -> Vec<SimplexChain> {
    let shell = build_shell(spec);
    vec![construct_min_fill(spec, &shell).unwrap().chain, fill_shell_lascar(&shell, spec.params).unwrap().chain]
}

/// A minimal fill of `spec` (with `n_s ≥ 3`) moved off standard form by a
/// few seeded CR and RS operations that keep its length.
pub fn scrambled_min_fill(rng: &mut ChaCha8Rng, spec: &ShellSpec, steps: usize) -> SimplexChain {
    assert!(n_s_of(spec) >= 3);
    let params = spec.params;
    let mut c = construct_min_fill(spec, &build_shell(spec)).unwrap().chain;
    for _ in 0..steps {
        let sites = find_cr_sites(&c);
        if rng.gen_bool(0.5) && !sites.is_empty() {
            let site = &sites[rng.gen_range(0..sites.len())];
            if let Ok(next) = apply_cr_with(&c, site, AmalgamPolicy::Generic, params) {
                if next.length() == c.length() {
                    c = next;
                }
            }
        } else if let Some((j, d)) = find_vanishing_subsummand(&c) {
            let fresh = c.support().max_vertex().unwrap() + 1;
            c = apply_rs(&c, &d, j, fresh).unwrap();
        }
    }
    c
}

/// `Ŝd(y,x) = −Ŝd(x,y) − 1` and, when `k ≤ Ŝd(x,y) ≤ l−1` with
/// `k ≢ l`, `m + k ≤ Ŝd(x,z) ≤ m + l` for `m = Ŝd(y,z)`.
pub fn check_shd_calculus(seed: u64, n: i64) -> Result<(), String> {
    let params = params(n);
    let mut r = rng(seed);
    let [x, y, z] = <[CirclePoint; 3]>::try_from(random_independent(&mut r, 3, params)).unwrap();
    let sxy = shd(x, y, params).unwrap();
    if shd(y, x, params).unwrap() != params.residue(-sxy - 1) {
        return Err(format!("antisymmetry fails at {x} {y}"));
    }
    let width = r.gen_range(1..n.max(2));
    let k = sxy - r.gen_range(0..width);
    let l = k + width;
    if params.residue(k - l) == 0 {
        return Ok(());
    }
    let m = shd(y, z, params).unwrap();
    if !in_cyclic_range(shd(x, z, params).unwrap(), m + k, m + l, params) {
        return Err(format!("composition fails at {x} {y} {z} (k={k}, l={l})"));
    }
    Ok(())
}
