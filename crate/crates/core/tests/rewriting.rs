mod common;

use common::*;
use shellfill::chain::{boundary, SupportSet};
use shellfill::error::Error;
use shellfill::rewriting::{
    apply_rs, boundary_term, classify, extract_chain_walk, is_minimal, is_standard_rn, reduct, to_standard_rn,
    AmalgamPolicy, ChainKind, Rewriter, SignedEdge,
};
use shellfill::shell_lab::{build_shell, construct_min_fill, fill_shell_lascar, n_s_of, nr_example, ShellSpec};
use shellfill::simplex::SimplexChain;

const BUDGET: usize = 200;

fn spec(n: i64, k1: i64, k2: i64, k3: i64) -> ShellSpec {
    ShellSpec::new(params(n), k1, k2, k3).unwrap()
}

fn edge_of(c: &SimplexChain, support: &[u32], on: &[u32]) -> SignedEdge {
    let s = SupportSet::new(support.iter().copied());
    let (b, eps) = c.terms().find(|(f, _)| f.support() == &s).unwrap();
    boundary_term(eps, b, &SupportSet::new(on.iter().copied()))
}

/// A Lascar fill of length 3, on `{0,1,3}`, `{0,2,3}` and `{1,2,3}`.
fn short_lascar_fill() -> (ShellSpec, SimplexChain) {
    for n in 3..=6 {
        for s in ShellSpec::all(params(n)) {
            let fill = fill_shell_lascar(&build_shell(&s), s.params).unwrap();
            if fill.length == 3 && fill.verified {
                return (s, fill.chain);
            }
        }
    }
    panic!("no length-3 Lascar fill");
}

#[test]
fn min_fill_walks_alternate() {
    for n in 3..=8 {
        for k3 in 0..n {
            let s = spec(n, 0, 0, k3);
            let shell = build_shell(&s);
            let fill = construct_min_fill(&s, &shell).unwrap().chain;
            let walk = extract_chain_walk(&fill, &(1, shell.s01.clone()), &(-1, shell.s02.clone()), 0).unwrap();
            assert_eq!(walk.len() as u64, n_s_of(&s));
            let expected: Vec<u32> = (0..=walk.len()).map(|i| if i % 2 == 0 { 1 } else { 2 }).collect();
            assert_eq!(walk.sequence, expected);
            assert_eq!(walk.chain(), fill);
        }
    }
}

#[test]
fn single_simplex_walk() {
    let s = spec(4, 1, 1, 0);
    let shell = build_shell(&s);
    let fill = construct_min_fill(&s, &shell).unwrap().chain;
    assert_eq!(fill.length(), 1);
    let walk = extract_chain_walk(&fill, &(1, shell.s01.clone()), &(-1, shell.s02.clone()), 0).unwrap();
    assert_eq!(walk.sequence, vec![1, 2]);
    assert_eq!(walk.walk_sequence_json(), "[1,2]");
}

#[test]
fn reduct_collapses_a_section() {
    let (s, fill) = short_lascar_fill();
    let from = edge_of(&fill, &[0, 2, 3], &[0, 2]);
    let to = edge_of(&fill, &[1, 2, 3], &[1, 2]);
    let walk = extract_chain_walk(&fill, &from, &to, 2).unwrap();
    assert_eq!(walk.sequence, vec![0, 3, 1]);

    let mut rw = Rewriter::new(s.params, AmalgamPolicy::Generic);
    let r = reduct(&walk, 0..=1, &mut rw).unwrap();
    assert_eq!(r.walk.sequence, vec![0, 1]);
    assert!(r.walk.is_walk_between(&from, &to));
    let rest = fill.sub(&walk.chain());
    let after = r.walk.chain().add(&r.residual).add(&rest);
    assert_eq!(boundary(&after).unwrap(), boundary(&fill).unwrap());
    assert!(!rw.trace().is_empty());

    let unchanged = reduct(&walk, 1..=1, &mut rw).unwrap();
    assert_eq!(unchanged.walk, walk);
    assert!(unchanged.residual.is_zero());
}

#[test]
fn reduct_needs_a_free_end() {
    let s = spec(5, 0, 0, 2);
    let shell = build_shell(&s);
    let fill = construct_min_fill(&s, &shell).unwrap().chain;
    let walk = extract_chain_walk(&fill, &(1, shell.s01.clone()), &(-1, shell.s02.clone()), 0).unwrap();
    let mut rw = Rewriter::new(s.params, AmalgamPolicy::Generic);
    assert_eq!(reduct(&walk, 0..=2, &mut rw).unwrap_err(), Error::HypothesisFails);
    assert_eq!(reduct(&walk, 0..=1, &mut rw).unwrap_err(), Error::HypothesisFails);
    assert!(rw.trace().is_empty());
}

#[test]
fn classification() {
    let p = params(5);
    let single = construct_min_fill(&spec(5, 1, 1, 0), &build_shell(&spec(5, 1, 1, 0))).unwrap().chain;
    assert_eq!(classify(&single).unwrap(), ChainKind::NR);
    assert_eq!(classify(&nr_example(p).unwrap()).unwrap(), ChainKind::NR);
    let (_, fill) = short_lascar_fill();
    assert_eq!(classify(&fill).unwrap(), ChainKind::RN);
    let long = construct_min_fill(&spec(5, 0, 0, 2), &build_shell(&spec(5, 0, 0, 2))).unwrap().chain;
    assert_eq!(classify(&long).unwrap(), ChainKind::RN);
    assert!(classify(&SimplexChain::zero()).is_err());
}

#[test]
fn renaming_keeps_boundary_and_length() {
    let (_, fill) = short_lascar_fill();
    let d = boundary(&fill).unwrap();
    let sub: SimplexChain =
        SimplexChain::from_terms(fill.terms().filter(|(f, _)| f.support().contains(3)).map(|(f, k)| (k, f.clone())));
    let renamed = apply_rs(&fill, &sub, 3, 4).unwrap();
    assert_eq!(boundary(&renamed).unwrap(), d);
    assert_eq!(renamed.length(), fill.length());
    assert!(!renamed.support().contains(3));
    assert_eq!(apply_rs(&fill, &sub, 0, 4), Err(Error::NotVanishing(0)));
    assert_eq!(apply_rs(&fill, &sub, 3, 1), Err(Error::VertexInUse(1)));
}

#[test]
fn minimality() {
    let p = params(5);
    assert!(is_minimal(&nr_example(p).unwrap(), BUDGET, p).unwrap());
    let (s, fill) = short_lascar_fill();
    assert_eq!(n_s_of(&s), 1);
    assert!(!is_minimal(&fill, BUDGET, s.params).unwrap());
    assert_eq!(to_standard_rn(&fill, BUDGET, s.params).unwrap_err(), Error::NotMinimal);
}

#[test]
fn standard_form_is_idempotent() {
    for s in [spec(3, 1, 2, 0), spec(5, 0, 0, 2)] {
        let shell = build_shell(&s);
        let fill = construct_min_fill(&s, &shell).unwrap().chain;
        let sf = to_standard_rn(&fill, BUDGET, s.params).unwrap();
        assert!(is_standard_rn(&sf.walk, &sf.chain()));
        let again = to_standard_rn(&sf.chain(), BUDGET, s.params).unwrap();
        assert!(again.trace.is_empty());
        assert_eq!(again.chain(), sf.chain());
    }
}

#[test]
fn standard_form_of_scrambled_fills() {
    let mut r = rng(3);
    let mut reduced = 0;
    for n in 3..=5 {
        for k3 in 0..n {
            let s = spec(n, 0, 0, k3);
            if n_s_of(&s) < 3 {
                continue;
            }
            let c = scrambled_min_fill(&mut r, &s, 4);
            if classify(&c).unwrap() == ChainKind::NR {
                continue;
            }
            let sf = to_standard_rn(&c, BUDGET, s.params).unwrap();
            assert!(is_standard_rn(&sf.walk, &sf.chain()));
            assert_eq!(boundary(&sf.chain()).unwrap(), build_shell(&s).chain());
            assert_eq!(sf.chain().length(), c.length());
            reduced += 1;
        }
    }
    assert!(reduced > 0);
}

#[test]
fn nr_input_is_rejected() {
    let p = params(5);
    let alpha = nr_example(p).unwrap();
    assert_eq!(to_standard_rn(&alpha, BUDGET, p).unwrap_err(), Error::NotRN);
}
