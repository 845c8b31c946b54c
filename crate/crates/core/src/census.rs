//! Exhaustive enumeration of ideal and compact right-angled polyhedra by
//! closing the seed families under their generating moves, and the growth
//! graphs those moves induce.

use std::collections::{BTreeMap, HashMap};

use dashmap::mapref::entry::Entry;
use dashmap::DashMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::{
    antiprism, connect_sum, edge_twist_candidates, lobell, Matching, MoveDescriptor, MoveError,
    ReplayLog,
};
use crate::numerics::PrecisionSpec;
use crate::polyhedron::{andreev_check, CanonicalCode, Kind, Polyhedron};
use crate::volumes::lobell_volume;

/// Default largest vertex count for the ideal census.
pub const IDEAL_N_LIMIT: usize = 21;
/// Default largest vertex count for the compact census.
pub const COMPACT_N_LIMIT: usize = 34;
/// Default cap on the number of stored polyhedra.
pub const NODE_CAP: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CensusError {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Move(#[from] MoveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusConfig {
    pub n_max: usize,
    /// Largest `n_max` accepted.
    pub n_limit: usize,
    /// Largest number of polyhedra stored before giving up.
    pub node_cap: usize,
}

impl CensusConfig {
    pub fn ideal(n_max: usize) -> Self {
        CensusConfig {
            n_max,
            n_limit: IDEAL_N_LIMIT,
            node_cap: NODE_CAP,
        }
    }

    pub fn compact(n_max: usize) -> Self {
        CensusConfig {
            n_max,
            n_limit: COMPACT_N_LIMIT,
            node_cap: NODE_CAP,
        }
    }
}

/// How a census member was first reached: a named seed, or one move applied
/// to the canonical representative of `parent`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Origin {
    pub parent: Option<CanonicalCode>,
    pub seed: Option<String>,
    pub step: Option<MoveDescriptor>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusMember {
    pub code: CanonicalCode,
    pub origin: Origin,
    /// Volume known from closed forms and isometric gluings (compact only).
    pub volume: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    /// Move results (and seeds) produced for this vertex count.
    pub candidates: usize,
    /// Candidates whose code was already produced.
    pub dedup_hits: usize,
    /// Distinct codes rejected by the realizability check.
    pub rejected: usize,
    pub members: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusResult {
    pub kind: Kind,
    pub n_max: usize,
    /// Members per vertex count, sorted by code.
    pub levels: BTreeMap<usize, Vec<CensusMember>>,
    pub stats: BTreeMap<usize, LevelStats>,
}

impl CensusResult {
    pub fn counts(&self) -> BTreeMap<usize, usize> {
        self.levels.iter().map(|(&n, m)| (n, m.len())).collect()
    }

    pub fn codes(&self, n: usize) -> Vec<&CanonicalCode> {
        self.levels
            .get(&n)
            .map(|m| m.iter().map(|x| &x.code).collect())
            .unwrap_or_default()
    }

    pub fn members(&self) -> impl Iterator<Item = &CensusMember> {
        self.levels.values().flatten()
    }

    pub fn get(&self, code: &CanonicalCode) -> Option<&CensusMember> {
        let level = self.levels.get(&code.vertex_count())?;
        level
            .binary_search_by(|m| m.code.cmp(code))
            .ok()
            .map(|i| &level[i])
    }

    /// The chain of moves from a seed that rebuilds `code`.
    pub fn replay_log(&self, code: &CanonicalCode) -> Option<ReplayLog> {
        let mut moves = Vec::new();
        let mut cur = self.get(code)?;
        while let (Some(parent), Some(step)) = (&cur.origin.parent, &cur.origin.step) {
            moves.push(step.clone());
            cur = self.get(parent)?;
        }
        moves.reverse();
        Some(ReplayLog {
            seed: cur.code.clone(),
            moves,
        })
    }
}

/// A produced polyhedron competing for a code; the smallest key wins so the
/// result does not depend on scheduling.
struct Candidate {
    key: Vec<usize>,
    origin: Origin,
    poly: Polyhedron,
    volume: Option<f64>,
}

struct Store {
    map: DashMap<CanonicalCode, Candidate>,
}

impl Store {
    fn new() -> Self {
        Store {
            map: DashMap::new(),
        }
    }

    fn offer(&self, poly: Polyhedron, key: Vec<usize>, origin: Origin, volume: Option<f64>) {
        let cand = Candidate {
            key,
            origin,
            poly,
            volume,
        };
        match self.map.entry(cand.poly.canonical_code()) {
            Entry::Occupied(mut o) => {
                if cand.key < o.get().key {
                    o.insert(cand);
                }
            }
            Entry::Vacant(v) => {
                v.insert(cand);
            }
        }
    }
}

fn seed_origin(name: String) -> Origin {
    Origin {
        parent: None,
        seed: Some(name),
        step: None,
    }
}

fn step_origin(parent: &CanonicalCode, step: MoveDescriptor) -> Origin {
    Origin {
        parent: Some(parent.clone()),
        seed: None,
        step: Some(step),
    }
}

/// A census level under construction: the members (with tagged canonical
/// representatives) in code order.
struct Level {
    members: Vec<CensusMember>,
    reps: Vec<Polyhedron>,
}

/// Validates the distinct codes offered for one vertex count and turns them
/// into a sorted level.
fn finish_level(
    store: Store,
    candidates: usize,
    kind: Kind,
    keep_reps: bool,
) -> (Level, LevelStats) {
    let mut entries: Vec<(CanonicalCode, Candidate)> = store.map.into_iter().collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let distinct = entries.len();
    let checked: Vec<Option<(CensusMember, Polyhedron)>> = entries
        .into_par_iter()
        .map(|(code, c)| {
            let report = andreev_check(&c.poly);
            if !report.valid() || report.kind != kind {
                return None;
            }
            let rep = if keep_reps {
                c.poly.canonical_representative().1
            } else {
                c.poly.clone()
            };
            Some((
                CensusMember {
                    code,
                    origin: c.origin,
                    volume: c.volume,
                },
                rep,
            ))
        })
        .collect();
    let rejected = checked.iter().filter(|x| x.is_none()).count();
    let (members, reps): (Vec<_>, Vec<_>) = checked.into_iter().flatten().unzip();
    let stats = LevelStats {
        candidates,
        dedup_hits: candidates - distinct,
        rejected,
        members: members.len(),
    };
    (
        Level {
            members,
            reps: if keep_reps { reps } else { Vec::new() },
        },
        stats,
    )
}

fn check_budget(config: &CensusConfig, stored: usize) -> Result<(), CensusError> {
    if stored > config.node_cap {
        return Err(CensusError::BudgetExceeded(format!(
            "{stored} polyhedra stored, cap {}",
            config.node_cap
        )));
    }
    Ok(())
}

fn check_n_max(config: &CensusConfig, min: usize) -> Result<(), CensusError> {
    if config.n_max < min {
        return Err(CensusError::BadParameter(format!(
            "n_max must be at least {min}"
        )));
    }
    if config.n_max > config.n_limit {
        return Err(CensusError::BudgetExceeded(format!(
            "n_max {} above limit {}",
            config.n_max, config.n_limit
        )));
    }
    Ok(())
}

/// All ideal right-angled polyhedra with 6..=n_max vertices: antiprisms closed
/// under edge twists.
pub fn ideal_census(n_max: usize) -> Result<CensusResult, CensusError> {
    ideal_census_with(CensusConfig::ideal(n_max))
}

pub fn ideal_census_with(config: CensusConfig) -> Result<CensusResult, CensusError> {
    check_n_max(&config, 6)?;
    let mut levels = BTreeMap::new();
    let mut stats = BTreeMap::new();
    let mut stored = 0;
    let mut prev: Vec<CensusMember> = Vec::new();
    for n in 6..=config.n_max {
        let store = Store::new();
        let mut candidates = 0;
        if n % 2 == 0 {
            store.offer(
                antiprism(n / 2)?,
                vec![0],
                seed_origin(format!("A({})", n / 2)),
                None,
            );
            candidates += 1;
        }
        let produced: usize = prev
            .par_iter()
            .enumerate()
            .map(|(i, parent)| {
                let p = parent.code.decode().expect("stored codes decode");
                let mut count = 0;
                for (j, (e1, e2)) in edge_twist_candidates(&p).into_iter().enumerate() {
                    let step = MoveDescriptor::Twist { e1, e2 };
                    if let Ok(q) = step.apply(&p) {
                        store.offer(q, vec![1, i, j], step_origin(&parent.code, step), None);
                        count += 1;
                    }
                }
                count
            })
            .sum();
        candidates += produced;
        let (level, st) = finish_level(store, candidates, Kind::Ideal, false);
        stored += level.members.len();
        check_budget(&config, stored)?;
        stats.insert(n, st);
        prev = level.members.clone();
        levels.insert(n, level.members);
    }
    Ok(CensusResult {
        kind: Kind::Ideal,
        n_max: config.n_max,
        levels,
        stats,
    })
}

/// All compact right-angled polyhedra with 20..=n_max vertices: Löbell
/// polyhedra closed under edge additions and connected sums.
pub fn compact_census(n_max: usize) -> Result<CensusResult, CensusError> {
    compact_census_with(CensusConfig::compact(n_max))
}

pub fn compact_census_with(config: CensusConfig) -> Result<CensusResult, CensusError> {
    check_n_max(&config, 20)?;
    let mut built: BTreeMap<usize, Level> = BTreeMap::new();
    let mut stats = BTreeMap::new();
    let mut stored = 0;
    for n in (20..=config.n_max).step_by(2) {
        let store = Store::new();
        let mut candidates = 0;
        if n % 4 == 0 {
            let m = n / 4;
            let vol = lobell_volume(m as u64, PrecisionSpec::double())
                .expect("m >= 5")
                .value;
            store.offer(
                lobell(m)?,
                vec![0, 0],
                seed_origin(format!("L({m})")),
                Some(vol),
            );
            candidates += 1;
        }
        if let Some(prev) = built.get(&(n - 2)) {
            candidates += prev
                .members
                .par_iter()
                .zip(prev.reps.par_iter())
                .enumerate()
                .map(|(i, (parent, p))| additions(&store, i, parent, p))
                .sum::<usize>();
        }
        candidates += sums(&store, &built, n)?;
        let (level, st) = finish_level(store, candidates, Kind::Compact, true);
        stored += level.members.len();
        check_budget(&config, stored)?;
        stats.insert(n, st);
        built.insert(n, level);
    }
    let levels = built.into_iter().map(|(n, l)| (n, l.members)).collect();
    Ok(CensusResult {
        kind: Kind::Compact,
        n_max: config.n_max,
        levels,
        stats,
    })
}

fn additions(store: &Store, i: usize, parent: &CensusMember, p: &Polyhedron) -> usize {
    let mut count = 0;
    let mut j = 0;
    for face in p.faces() {
        let k = face.len();
        for s in 0..k {
            for t in s + 2..k {
                if (t + 1) % k == s {
                    continue;
                }
                let ea = (face[s], face[(s + 1) % k]);
                let eb = (face[t], face[(t + 1) % k]);
                let step = MoveDescriptor::Addition {
                    face: face.clone(),
                    ea,
                    eb,
                };
                j += 1;
                if let Ok(q) = step.apply(p) {
                    count += 1;
                    store.offer(q, vec![1, 1, i, j], step_origin(&parent.code, step), None);
                }
            }
        }
    }
    count
}

/// Connected sums of two earlier members whose glued k-gons leave `n`
/// vertices (n1 + n2 − 2k = n).
fn sums(store: &Store, built: &BTreeMap<usize, Level>, n: usize) -> Result<usize, CensusError> {
    let mut jobs = Vec::new();
    for (&n1, l1) in built {
        for (&n2, l2) in built.range(n1..) {
            if (n1 + n2 <= n) || !(n1 + n2 - n).is_multiple_of(2) {
                continue;
            }
            let k = (n1 + n2 - n) / 2;
            if k < 5 {
                continue;
            }
            for i1 in 0..l1.members.len() {
                let start = if n1 == n2 { i1 } else { 0 };
                for i2 in start..l2.members.len() {
                    jobs.push((n1, i1, n2, i2, k));
                }
            }
        }
    }
    let counts: Vec<Result<usize, CensusError>> = jobs
        .par_iter()
        .map(|&(n1, i1, n2, i2, k)| {
            let (m1, p1) = (&built[&n1].members[i1], &built[&n1].reps[i1]);
            let (m2, p2) = (&built[&n2].members[i2], &built[&n2].reps[i2]);
            let mut count = 0;
            for f1 in (0..p1.face_count()).filter(|&f| p1.face(f).len() == k) {
                for f2 in (0..p2.face_count()).filter(|&f| p2.face(f).len() == k) {
                    for reflect in [false, true] {
                        for offset in 0..k {
                            let sum =
                                connect_sum(p1, f1, p2, f2, Matching::Single { offset, reflect })?
                                    .remove(0);
                            count += 1;
                            let volume = match (sum.isometric, m1.volume, m2.volume) {
                                (true, Some(a), Some(b)) => Some(a + b),
                                _ => None,
                            };
                            let step = MoveDescriptor::Compose {
                                face: p1.face(f1).to_vec(),
                                other: m2.code.clone(),
                                other_face: p2.face(f2).to_vec(),
                                offset,
                                reflect,
                            };
                            let key = vec![
                                volume.is_none() as usize,
                                2,
                                n1,
                                i1,
                                n2,
                                i2,
                                f1,
                                f2,
                                reflect as usize,
                                offset,
                            ];
                            store.offer(sum.poly, key, step_origin(&m1.code, step), volume);
                        }
                    }
                }
            }
            Ok(count)
        })
        .collect();
    counts.into_iter().sum()
}

/// Moves a growth graph may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    Twist,
    Addition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthNode {
    pub code: CanonicalCode,
    pub generation: usize,
}

/// Nodes in generation order (sorted by code within a generation) and
/// undirected edges between node indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthGraph {
    pub nodes: Vec<GrowthNode>,
    pub edges: Vec<(usize, usize)>,
}

impl GrowthGraph {
    pub fn generation_sizes(&self) -> Vec<usize> {
        let mut sizes = Vec::new();
        for node in &self.nodes {
            if sizes.len() <= node.generation {
                sizes.resize(node.generation + 1, 0);
            }
            sizes[node.generation] += 1;
        }
        sizes
    }
}

fn move_results(p: &Polyhedron, moves: &[MoveKind]) -> Vec<Polyhedron> {
    let mut out = Vec::new();
    for mv in moves {
        match mv {
            MoveKind::Twist => {
                for (e1, e2) in edge_twist_candidates(p) {
                    if let Ok(q) = crate::generators::edge_twist(p, e1, e2) {
                        out.push(q);
                    }
                }
            }
            MoveKind::Addition => {
                for (f, face) in p.faces().iter().enumerate() {
                    let k = face.len();
                    for s in 0..k {
                        for t in s + 2..k {
                            if (t + 1) % k == s {
                                continue;
                            }
                            let ea = (face[s], face[(s + 1) % k]);
                            let eb = (face[t], face[(t + 1) % k]);
                            if let Ok((q, report)) = crate::generators::edge_addition(p, f, ea, eb)
                            {
                                if report.valid() {
                                    out.push(q);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Breadth-first growth from `seed`: generation i+1 holds the polyhedra first
/// reached by one move from generation i. Twist results are kept only when
/// they are right-angled.
pub fn growth_graph(
    seed: &Polyhedron,
    moves: &[MoveKind],
    depth: usize,
    node_cap: usize,
) -> Result<GrowthGraph, CensusError> {
    let seed_report = andreev_check(seed);
    if !seed_report.valid() {
        return Err(CensusError::BadParameter(
            "seed is not a right-angled polyhedron".into(),
        ));
    }
    let kind = seed_report.kind;
    let seed_code = seed.canonical_code();
    let mut index: HashMap<CanonicalCode, usize> = HashMap::new();
    let mut nodes = vec![GrowthNode {
        code: seed_code.clone(),
        generation: 0,
    }];
    index.insert(seed_code, 0);
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    for generation in 1..=depth {
        let expanded: Vec<Vec<(CanonicalCode, bool)>> = frontier
            .par_iter()
            .map(|&i| {
                let p = nodes[i].code.decode().expect("stored codes decode");
                move_results(&p, moves)
                    .into_iter()
                    .map(|q| {
                        let ok = {
                            let r = andreev_check(&q);
                            r.valid() && r.kind == kind
                        };
                        (q.canonical_code(), ok)
                    })
                    .collect()
            })
            .collect();
        let mut fresh: Vec<CanonicalCode> = expanded
            .iter()
            .flatten()
            .filter(|(c, ok)| *ok && !index.contains_key(c))
            .map(|(c, _)| c.clone())
            .collect();
        fresh.sort();
        fresh.dedup();
        for code in fresh {
            index.insert(code.clone(), nodes.len());
            nodes.push(GrowthNode { code, generation });
        }
        if nodes.len() > node_cap {
            return Err(CensusError::BudgetExceeded(format!(
                "{} nodes, cap {node_cap}",
                nodes.len()
            )));
        }
        for (&i, children) in frontier.iter().zip(&expanded) {
            for (c, ok) in children {
                if *ok {
                    let j = index[c];
                    edges.push((i.min(j), i.max(j)));
                }
            }
        }
        frontier = nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.generation == generation)
            .map(|(i, _)| i)
            .collect();
    }
    edges.sort_unstable();
    edges.dedup();
    Ok(GrowthGraph { nodes, edges })
}
