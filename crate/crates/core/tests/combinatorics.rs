use std::collections::HashSet;
use std::sync::OnceLock;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ravol::census::{self, CensusResult};
use ravol::generators::{antiprism, lobell, replay};
use ravol::polyhedron::prismatic_circuits;
use ravol::{andreev_check, Kind, Polyhedron};

fn ideal() -> &'static CensusResult {
    static C: OnceLock<CensusResult> = OnceLock::new();
    C.get_or_init(|| census::ideal_census(13).unwrap())
}

fn compact() -> &'static CensusResult {
    static C: OnceLock<CensusResult> = OnceLock::new();
    C.get_or_init(|| census::compact_census(32).unwrap())
}

fn sample() -> Vec<Polyhedron> {
    let mut out: Vec<Polyhedron> = ideal()
        .members()
        .chain(compact().members())
        .map(|m| m.code.decode().unwrap())
        .collect();
    out.push(antiprism(9).unwrap());
    out.push(lobell(7).unwrap());
    out
}

fn shuffled(p: &Polyhedron, seed: u64) -> Polyhedron {
    let mut perm: Vec<usize> = (0..p.vertex_count()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    p.relabel(&perm)
}

#[test]
fn census_members_satisfy_face_count_identities() {
    for m in ideal().members() {
        let p = m.code.decode().unwrap();
        let c = p.counts();
        assert_eq!(c.ideal_defect(), 0, "{}", m.code);
        assert_eq!(c.f, c.v + 2);
    }
    for m in compact().members() {
        let p = m.code.decode().unwrap();
        let c = p.counts();
        assert_eq!(c.compact_defect(), 0, "{}", m.code);
        assert_eq!(2 * c.f, c.v + 4);
    }
}

#[test]
fn compact_census_is_closed_and_valid() {
    for (&n, members) in &compact().levels {
        assert_eq!(n % 2, 0);
        for m in members {
            let p = m.code.decode().unwrap();
            let r = andreev_check(&p);
            assert!(r.valid() && r.kind == Kind::Compact, "{}", m.code);
            assert!(p.faces().iter().all(|f| f.len() >= 5));
        }
    }
}

#[test]
fn census_is_monotone_in_n_max() {
    let small = census::ideal_census(11).unwrap();
    for (n, level) in &small.levels {
        let a: Vec<_> = level.iter().map(|m| &m.code).collect();
        assert_eq!(a, ideal().codes(*n));
    }
    let small = census::compact_census(28).unwrap();
    for (n, level) in &small.levels {
        let a: Vec<_> = level.iter().map(|m| &m.code).collect();
        assert_eq!(a, compact().codes(*n));
    }
}

#[test]
fn provenance_logs_replay() {
    for res in [ideal(), compact()] {
        for m in res.members() {
            let log = res.replay_log(&m.code).expect("members have logs");
            let p = replay(&log).unwrap();
            assert_eq!(p.canonical_code(), m.code);
        }
    }
}

#[test]
fn codes_survive_many_relabelings() {
    let p = antiprism(4).unwrap();
    let code = p.canonical_code();
    for seed in 0..1000 {
        assert_eq!(shuffled(&p, seed).canonical_code(), code);
    }
}

#[test]
fn census_codes_are_distinct_and_valid() {
    for res in [ideal(), compact()] {
        let mut seen = HashSet::new();
        for m in res.members() {
            assert!(seen.insert(m.code.clone()));
            assert_eq!(m.code.decode().unwrap().canonical_code(), m.code);
        }
    }
}

#[test]
fn circuits_cross_disjoint_edges() {
    for p in sample().iter().take(40) {
        for k in 3..=5 {
            for c in prismatic_circuits(p, k) {
                let mut ends = HashSet::new();
                for &(u, v) in &c.crossed_edges {
                    assert!(ends.insert(u) && ends.insert(v));
                }
            }
        }
    }
}

#[test]
fn validity_implies_steinitz() {
    for p in sample() {
        let r = andreev_check(&p);
        if r.valid() {
            assert!(p.is_steinitz() && p.face_count() >= 6);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn code_invariant_under_relabel_and_mirror(i in 0usize..1000, seed in any::<u64>()) {
        let all = sample();
        let p = &all[i % all.len()];
        let code = p.canonical_code();
        prop_assert_eq!(shuffled(p, seed).canonical_code(), code.clone());
        prop_assert_eq!(p.mirror().canonical_code(), code);
    }

    #[test]
    fn dual_is_an_involution(i in 0usize..1000) {
        let all = sample();
        let p = &all[i % all.len()];
        let d = p.dual();
        prop_assert_eq!(d.vertex_count(), p.face_count());
        prop_assert_eq!(d.dual().canonical_code(), p.canonical_code());
    }
}
