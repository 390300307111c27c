//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test -p tangle-forge --test acceptance`.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tangle_core::graph::build_sk;
use tangle_core::iso::{apply_iso, random_relabeling, verify_iso};
use tangle_core::orientation::{enumerate_consistent, enumerate_profiles, is_p_submodular};
use tangle_core::tree::{canonical_tree_set, compute_mp, TreeSetOptions};
use tangle_core::{verify_nested_set, Family, Graph, GraphSystem, NestedSet, RawSystem, SepId, SeparationSystem};

const SEEDS_PER_INSTANCE: u64 = 20;
const FISH_TRIPLES: usize = 20_000;
const CORPUS_BUDGET: Duration = Duration::from_secs(60);
const SMALL_SYSTEMS_BUDGET: Duration = Duration::from_secs(300);

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            pass,
            detail: detail.into(),
        }
    }
}

struct Instance {
    name: String,
    gs: GraphSystem,
    family: Family,
}

fn corpus_graphs() -> Vec<(String, Graph)> {
    let mut graphs = Vec::new();
    for n in 2..=6 {
        graphs.push((format!("P{n}"), Graph::path(n)));
    }
    for n in 3..=6 {
        graphs.push((format!("C{n}"), Graph::cycle(n)));
    }
    graphs.push(("K1,3".into(), Graph::star(3)));
    graphs.push(("K1,4".into(), Graph::star(4)));
    graphs.push(("K4".into(), Graph::complete(4)));
    graphs.push(("K5".into(), Graph::complete(5)));
    graphs.push(("grid2x3".into(), Graph::grid(2, 3)));
    graphs
}

/// Every corpus graph and k in 1..=4 with a non-empty profile set.
fn corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    for (name, g) in corpus_graphs() {
        for k in 1..=4 {
            let gs = build_sk(&g, k, 12).expect("corpus graphs are small");
            let profiles = enumerate_profiles(&gs, 256).expect("corpus systems are below the cap");
            if profiles.is_empty() {
                continue;
            }
            let family = Family::new(gs.system(), profiles).expect("profiles are consistent and distinct");
            out.push(Instance {
                name: format!("{name} k={k}"),
                gs,
                family,
            });
        }
    }
    out
}

fn first_failures(failures: &[String]) -> String {
    let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
    format!("{} failures, e.g. {}", failures.len(), shown.join(" | "))
}

fn end_to_end(corpus: &[Instance], outputs: &mut HashMap<String, NestedSet>) -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut separations = 0;
    for inst in corpus {
        let sys = inst.gs.system();
        match canonical_tree_set(sys, &inst.family, TreeSetOptions::default()) {
            Ok(n) => {
                let report = verify_nested_set(sys, &inst.family, &n);
                if !report.is_ok() {
                    failures.push(format!("{}: {}", inst.name, report.violations[0]));
                }
                separations += n.separations.len();
                outputs.insert(inst.name.clone(), n);
            }
            Err(e) => failures.push(format!("{}: {e}", inst.name)),
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "{} instances, {} separations chosen, {:.2?} (budget {:?})",
        corpus.len(),
        separations,
        elapsed,
        CORPUS_BUDGET
    );
    if failures.is_empty() {
        Verdict::new(elapsed < CORPUS_BUDGET, detail)
    } else {
        Verdict::new(false, format!("{detail}; {}", first_failures(&failures)))
    }
}

fn canonicity(corpus: &[Instance], outputs: &HashMap<String, NestedSet>) -> Verdict {
    let mut failures = Vec::new();
    let mut checks = 0;
    for inst in corpus {
        let Some(base) = outputs.get(&inst.name) else {
            failures.push(format!("{}: no base output", inst.name));
            continue;
        };
        let sys = inst.gs.system();
        for seed in 0..SEEDS_PER_INSTANCE {
            let (image, phi) = random_relabeling(sys, seed);
            if let Err(v) = verify_iso(&phi, sys, &image) {
                failures.push(format!("{} seed {seed}: relabeling is not an isomorphism ({v:?})", inst.name));
                continue;
            }
            let image_family = apply_iso(&phi, sys, &image, &inst.family);
            let expected = phi.image_of_separations(&image, &base.separations);
            match canonical_tree_set(&image, &image_family, TreeSetOptions::default()) {
                Ok(n) if n.separations == expected => {}
                Ok(n) => failures.push(format!(
                    "{} seed {seed}: expected {expected:?}, got {:?}",
                    inst.name, n.separations
                )),
                Err(e) => failures.push(format!("{} seed {seed}: {e}", inst.name)),
            }
            checks += 1;
        }
    }
    let detail = format!("{checks} relabelings over {} instances, {SEEDS_PER_INSTANCE} seeds each", corpus.len());
    if failures.is_empty() {
        Verdict::new(true, detail)
    } else {
        Verdict::new(false, format!("{detail}; {}", first_failures(&failures)))
    }
}

fn profiles_submodular(corpus: &[Instance]) -> Verdict {
    let failing: Vec<String> = corpus
        .iter()
        .filter(|inst| !is_p_submodular(inst.gs.system(), &inst.family))
        .map(|inst| inst.name.clone())
        .collect();
    let detail = format!("{} systems with their full profile families", corpus.len());
    if failing.is_empty() {
        Verdict::new(true, detail)
    } else {
        Verdict::new(false, format!("{detail}; {}", first_failures(&failing)))
    }
}

/// The constructor checks its round invariants as it goes; this re-checks
/// every traced round against the original system.
fn lemma_checks(corpus: &[Instance]) -> Verdict {
    let mut failures = Vec::new();
    let mut rounds = 0;
    for inst in corpus {
        let sys = inst.gs.system();
        let fam = &inst.family;
        let n = match canonical_tree_set(sys, fam, TreeSetOptions::default()) {
            Ok(n) => n,
            Err(e) => {
                failures.push(format!("{}: {e}", inst.name));
                continue;
            }
        };
        if n.rounds.first().map(|r| r.maximal.iter().map(|m| m.separations.clone()).collect::<Vec<_>>())
            .is_some_and(|traced| traced != compute_mp(sys, fam))
        {
            failures.push(format!("{}: first round disagrees with a fresh computation", inst.name));
        }
        // separations present in the current round, as canonical ids
        let mut present: Vec<SepId> = sys.separations().to_vec();
        for (i, round) in n.rounds.iter().enumerate() {
            rounds += 1;
            let at = format!("{} round {i}", inst.name);
            if round.maximal.iter().all(|m| m.separations.is_empty()) {
                failures.push(format!("{at}: no exclusive separation"));
            }
            for (j, a) in round.maximal.iter().enumerate() {
                let pairs = a.separations.iter().enumerate().flat_map(|(x, &r)| a.separations[x + 1..].iter().map(move |&s| (r, s)));
                for (r, s) in pairs {
                    if sys.nested(r, s) {
                        failures.push(format!("{at}: {r} and {s} in one maximal set are nested"));
                    }
                }
                for b in &round.maximal[j + 1..] {
                    for &r in &a.separations {
                        if let Some(&s) = b.separations.iter().find(|&&s| sys.crosses(r, s)) {
                            failures.push(format!("{at}: {r} and {s} in different maximal sets cross"));
                        }
                    }
                }
            }
            let nonempty = round.maximal.iter().filter(|m| !m.separations.is_empty()).count();
            if round.representatives.len() != nonempty {
                failures.push(format!("{at}: {} representatives for {nonempty} maximal sets", round.representatives.len()));
            }
            for rep in &round.representatives {
                let r = rep.separation;
                let owners: Vec<usize> = round.members.iter().copied().filter(|&p| fam.contains(p, r)).collect();
                if owners != vec![rep.member] {
                    failures.push(format!("{at}: representative {r} is not exclusive for member {}", rep.member));
                }
                let set = &round.maximal.iter().find(|m| m.member == rep.member).expect("traced").separations;
                if set.iter().any(|&x| !sys.leq(r, x)) {
                    failures.push(format!("{at}: representative {r} is not below its maximal set"));
                }
                for &t in &present {
                    if set.iter().all(|&x| sys.nested(t, x)) && !sys.nested(t, r) {
                        failures.push(format!("{at}: {t} is nested with the maximal set of {} but not with {r}", rep.member));
                    }
                }
                if let Some(&t) = round.surviving_separations.iter().chain(&round.selected).find(|&&t| sys.crosses(t, r)) {
                    failures.push(format!("{at}: representative {r} crosses {t}"));
                }
            }
            present = round.surviving_separations.clone();
            let members = &round.surviving_members;
            for (x, &p) in members.iter().enumerate() {
                for &q in &members[x + 1..] {
                    let split = round.surviving_separations.iter().any(|&s| fam.contains(p, s) != fam.contains(q, s));
                    if !split {
                        failures.push(format!("{at}: surviving members {p} and {q} are no longer distinguished"));
                    }
                }
            }
        }
    }
    let detail = format!("{rounds} rounds over {} runs re-checked", corpus.len());
    if failures.is_empty() {
        Verdict::new(true, detail)
    } else {
        Verdict::new(false, format!("{detail}; {}", first_failures(&failures)))
    }
}

fn corners_stay_nested(corpus: &[Instance]) -> Verdict {
    // (system, crossing pairs of unoriented separations)
    let systems: Vec<(&SeparationSystem, Vec<(SepId, SepId)>)> = corpus
        .iter()
        .map(|inst| {
            let sys = inst.gs.system();
            let reps = sys.separations();
            let pairs: Vec<(SepId, SepId)> = reps
                .iter()
                .enumerate()
                .flat_map(|(i, &r)| reps[i + 1..].iter().map(move |&s| (r, s)))
                .filter(|&(r, s)| sys.crosses(r, s))
                .collect();
            (sys, pairs)
        })
        .filter(|(_, pairs)| !pairs.is_empty())
        .collect();
    if systems.is_empty() {
        return Verdict::new(false, "no corpus system has a crossing pair");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut triples = 0;
    let mut corners = 0;
    let mut failures = Vec::new();
    let mut attempts = 0;
    while triples < FISH_TRIPLES && attempts < 50 * FISH_TRIPLES {
        attempts += 1;
        let (sys, pairs) = &systems[rng.gen_range(0..systems.len())];
        let &(r, s) = pairs.choose(&mut rng).expect("non-empty");
        let candidates: Vec<SepId> = sys
            .separations()
            .iter()
            .copied()
            .filter(|&t| sys.nested(t, r) && sys.nested(t, s))
            .collect();
        let Some(&t) = candidates.choose(&mut rng) else {
            continue;
        };
        triples += 1;
        for x in [r, sys.inv(r)] {
            for y in [s, sys.inv(s)] {
                for corner in [sys.supremum(&[x, y]), sys.infimum(&[x, y])].into_iter().flatten() {
                    corners += 1;
                    if !sys.nested(corner, t) {
                        failures.push(format!("corner {corner} of {x},{y} crosses {t}"));
                    }
                }
            }
        }
    }
    let detail = format!("{triples} triples, {corners} existing corners checked");
    if failures.is_empty() && triples >= 10_000 {
        Verdict::new(true, detail)
    } else {
        Verdict::new(false, format!("{detail}; {}", first_failures(&failures)))
    }
}

/// Small separation systems, enumerated exhaustively up to isomorphism.
mod small {
    use std::collections::HashSet;

    /// Strict order rows on `2m <= 8` oriented ids, bit `b` of `up[a]` set
    /// iff `a < b`. The inverse of `a` is `a ^ 1`.
    pub type Rows = [u8; 8];

    pub fn is_valid(up: &Rows, n: usize) -> bool {
        for a in 0..n {
            if up[a] >> a & 1 == 1 {
                return false;
            }
            for b in 0..n {
                if up[a] >> b & 1 == 0 {
                    continue;
                }
                if up[b] >> a & 1 == 1 || up[b] & !up[a] != 0 {
                    return false;
                }
                // a < b must mirror to b* < a*
                if up[b ^ 1] >> (a ^ 1) & 1 == 0 {
                    return false;
                }
            }
        }
        true
    }

    fn relabelings(m: usize) -> Vec<[usize; 8]> {
        let mut perms: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..m {
            perms = perms
                .into_iter()
                .flat_map(|p| {
                    (0..m).filter(|i| !p.contains(i)).map(|i| {
                        let mut q = p.clone();
                        q.push(i);
                        q
                    }).collect::<Vec<_>>()
                })
                .collect();
        }
        let mut out = Vec::new();
        for p in &perms {
            for flips in 0..1usize << m {
                let mut map = [0; 8];
                for (i, &target) in p.iter().enumerate() {
                    let f = flips >> i & 1;
                    map[2 * i] = 2 * target + f;
                    map[2 * i + 1] = 2 * target + (1 - f);
                }
                out.push(map);
            }
        }
        out
    }

    fn key(up: &Rows, n: usize, maps: &[[usize; 8]]) -> u64 {
        maps.iter()
            .map(|map| {
                let mut k = 0u64;
                for a in 0..n {
                    for b in 0..n {
                        if up[a] >> b & 1 == 1 {
                            k |= 1 << (map[a] * 8 + map[b]);
                        }
                    }
                }
                k
            })
            .min()
            .unwrap_or(0)
    }

    /// One representative per isomorphism class of systems with `m`
    /// separations. Each class with `m` separations restricts to a class with
    /// `m - 1`, so extending the smaller representatives by one new pair in
    /// every possible way reaches all of them.
    pub fn classes(m: usize) -> Vec<Rows> {
        assert!(m <= 4);
        if m == 0 {
            return vec![[0; 8]];
        }
        let maps = relabelings(m);
        let old_n = 2 * (m - 1);
        let (x, xi) = (old_n, old_n + 1);
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for old in classes(m - 1) {
            for below in 0u16..1 << old_n {
                for above in 0u16..1 << old_n {
                    for between in 0..3 {
                        let mut up = old;
                        for (a, row) in up.iter_mut().enumerate().take(old_n) {
                            if below >> a & 1 == 1 {
                                *row |= 1 << x;
                            }
                            // a < x* iff x < a*
                            if above >> (a ^ 1) & 1 == 1 {
                                *row |= 1 << xi;
                            }
                        }
                        up[x] = above as u8;
                        // x* < a iff a* < x
                        up[xi] = (0..old_n).filter(|&a| below >> (a ^ 1) & 1 == 1).fold(0, |acc, a| acc | 1 << a);
                        match between {
                            1 => up[x] |= 1 << xi,
                            2 => up[xi] |= 1 << x,
                            _ => {}
                        }
                        if is_valid(&up, 2 * m) && seen.insert(key(&up, 2 * m, &maps)) {
                            out.push(up);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Oracle view of one small system: oriented membership masks and poset
/// corners computed straight from the order rows.
struct SmallOracle {
    n: usize,
    up: small::Rows,
    /// Oriented ids contained in each consistent orientation.
    members: Vec<u8>,
}

impl SmallOracle {
    fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.up[a] >> b & 1 == 1
    }

    fn nested(&self, r: usize, s: usize) -> bool {
        [r, r ^ 1]
            .iter()
            .any(|&x| [s, s ^ 1].iter().any(|&y| self.leq(x, y) || self.leq(y, x)))
    }

    fn sup(&self, r: usize, s: usize) -> Option<usize> {
        let upper: Vec<usize> = (0..self.n).filter(|&z| self.leq(r, z) && self.leq(s, z)).collect();
        upper.iter().copied().find(|&z| upper.iter().all(|&w| self.leq(z, w)))
    }

    fn inf(&self, r: usize, s: usize) -> Option<usize> {
        let lower: Vec<usize> = (0..self.n).filter(|&z| self.leq(z, r) && self.leq(z, s)).collect();
        lower.iter().copied().find(|&z| lower.iter().all(|&w| self.leq(w, z)))
    }

    fn holds(&self, p: usize, a: usize) -> bool {
        self.members[p] >> a & 1 == 1
    }

    /// For the first oriented crossing pair with neither a family join nor a
    /// family meet: the members blocking each corner, `None` where the corner
    /// does not exist at all.
    fn failing_pair(&self, family: u32) -> Option<(Option<u32>, Option<u32>)> {
        let in_family = |p: usize| family >> p & 1 == 1;
        for i in (0..self.n).step_by(2) {
            for j in (i + 2..self.n).step_by(2) {
                if self.nested(i, j) {
                    continue;
                }
                for r in [i, i ^ 1] {
                    for s in [j, j ^ 1] {
                        let blockers = |corner: Option<usize>, x: usize, y: usize, need: fn(usize) -> usize| {
                            corner.map(|c| {
                                (0..self.members.len())
                                    .filter(|&p| in_family(p) && self.holds(p, x) && self.holds(p, y) && !self.holds(p, need(c)))
                                    .fold(0u32, |acc, p| acc | 1 << p)
                            })
                        };
                        let join = blockers(self.sup(r, s), r, s, |c| c);
                        let meet = blockers(self.inf(r, s), r ^ 1, s ^ 1, |c| c ^ 1);
                        if join != Some(0) && meet != Some(0) {
                            return Some((join, meet));
                        }
                    }
                }
            }
        }
        None
    }

    /// All inclusion-maximal subfamilies for which the system is submodular.
    /// Submodularity is inherited by subfamilies, so every such family avoids
    /// the blockers of one corner of each failing pair.
    fn maximal_submodular_families(&self) -> Vec<u32> {
        let mut leaves = HashSet::new();
        let mut visited = HashSet::new();
        let mut stack = vec![(1u32 << self.members.len()) - 1];
        while let Some(family) = stack.pop() {
            if !visited.insert(family) {
                continue;
            }
            match self.failing_pair(family) {
                None => {
                    leaves.insert(family);
                }
                Some((join, meet)) => {
                    stack.extend(join.map(|b| family & !b));
                    stack.extend(meet.map(|b| family & !b));
                }
            }
        }
        let mut out: Vec<u32> = leaves
            .iter()
            .copied()
            .filter(|&f| !leaves.iter().any(|&g| g != f && g & f == f))
            .collect();
        out.sort_unstable();
        out
    }

    /// Whether some pairwise nested set of separations tells every two
    /// members of `family` apart.
    fn nested_distinguishing_set_exists(&self, family: u32) -> bool {
        let m = self.n / 2;
        let chosen: Vec<usize> = (0..self.members.len()).filter(|&p| family >> p & 1 == 1).collect();
        (0u32..1 << m).any(|set| {
            let seps: Vec<usize> = (0..m).filter(|&i| set >> i & 1 == 1).map(|i| 2 * i).collect();
            let nested = seps
                .iter()
                .enumerate()
                .all(|(i, &r)| seps[i + 1..].iter().all(|&s| self.nested(r, s)));
            nested
                && chosen.iter().enumerate().all(|(i, &p)| {
                    chosen[i + 1..]
                        .iter()
                        .all(|&q| seps.iter().any(|&s| self.holds(p, s) != self.holds(q, s)))
                })
        })
    }
}

fn small_systems() -> Verdict {
    let start = Instant::now();
    let mut systems = 0;
    let mut skipped = 0;
    let mut families = 0;
    let mut failures = Vec::new();
    let mut per_m = Vec::new();
    for m in 0..=4 {
        let classes = small::classes(m);
        per_m.push(classes.len());
        for up in classes {
            systems += 1;
            let n = 2 * m;
            let raw = RawSystem {
                m,
                inv: (0..m).map(|i| [2 * i, 2 * i + 1]).collect(),
                leq: (0..n)
                    .flat_map(|a| (0..n).filter(move |&b| up[a] >> b & 1 == 1).map(move |b| [a, b]))
                    .collect(),
                labels: Default::default(),
            };
            let sys = match SeparationSystem::from_raw(&raw) {
                Ok(sys) => sys,
                Err(e) => {
                    failures.push(format!("m={m} {up:?}: generated system rejected: {e}"));
                    continue;
                }
            };
            let consistent = enumerate_consistent(&sys, 30).expect("m <= 4");
            let members = consistent
                .iter()
                .map(|o| (0..n).filter(|&a| o.contains(&sys, a)).fold(0u8, |acc, a| acc | 1 << a))
                .collect();
            let oracle = SmallOracle { n, up, members };
            let maximal = oracle.maximal_submodular_families();
            if maximal.is_empty() {
                skipped += 1;
            }
            for family in maximal {
                families += 1;
                let chosen = (0..consistent.len())
                    .filter(|&p| family >> p & 1 == 1)
                    .map(|p| consistent[p].clone())
                    .collect();
                let fam = Family::new(&sys, chosen).expect("distinct consistent orientations");
                let label = format!("m={m} leq={:?} family={family:#b}", raw.leq);
                if !is_p_submodular(&sys, &fam) {
                    failures.push(format!("{label}: library disagrees on submodularity"));
                    continue;
                }
                match canonical_tree_set(&sys, &fam, TreeSetOptions::default()) {
                    Ok(nested) => {
                        let report = verify_nested_set(&sys, &fam, &nested);
                        if !report.is_ok() {
                            failures.push(format!("{label}: {}", report.violations[0]));
                        }
                        if !oracle.nested_distinguishing_set_exists(family) {
                            failures.push(format!("{label}: oracle finds no nested distinguishing set"));
                        }
                    }
                    Err(e) => failures.push(format!("{label}: {e}")),
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "{systems} systems up to isomorphism (per m = 0..=4: {per_m:?}), {skipped} admit no submodular family, \
         {families} maximal families, {elapsed:.2?} (budget {SMALL_SYSTEMS_BUDGET:?})"
    );
    if failures.is_empty() {
        Verdict::new(elapsed < SMALL_SYSTEMS_BUDGET, detail)
    } else {
        Verdict::new(false, format!("{detail}; {}", first_failures(&failures)))
    }
}

fn worked_fixtures() -> Verdict {
    let mut failures = Vec::new();

    let single = SeparationSystem::from_generators(1, &[[0, 1]], &[]).unwrap();
    let fam = Family::new(&single, vec!["1".parse().unwrap(), "0".parse().unwrap()]).unwrap();
    if compute_mp(&single, &fam) != vec![vec![0], vec![1]] {
        failures.push("single separation: maximal sets".to_string());
    }
    match canonical_tree_set(&single, &fam, TreeSetOptions::default()) {
        Ok(n) if n.separations == vec![0] => {}
        other => failures.push(format!("single separation: {other:?}")),
    }

    // r = {0,1}, s = {2,3} with 0 <= 2. Members: {1,3}, {0,3}, {0,2}.
    let chain = SeparationSystem::from_generators(2, &[[0, 1], [2, 3]], &[[0, 2]]).unwrap();
    let fam = Family::new(&chain, ["00", "10", "11"].iter().map(|b| b.parse().unwrap()).collect()).unwrap();
    // {1,3} alone holds 1, {0,2} alone holds 2, and {0,3} shares 0 and 3.
    let expected_mp = vec![vec![1], vec![], vec![2]];
    if compute_mp(&chain, &fam) != expected_mp {
        failures.push(format!("chain: maximal sets {:?}", compute_mp(&chain, &fam)));
    }
    match canonical_tree_set(&chain, &fam, TreeSetOptions::default()) {
        Ok(n) => {
            if n.separations != vec![0, 2] {
                failures.push(format!("chain: N = {:?}", n.separations));
            }
            let round = &n.rounds[0];
            let reps: Vec<(usize, SepId)> = round.representatives.iter().map(|r| (r.member, r.separation)).collect();
            if n.rounds.len() != 1 || reps != vec![(0, 1), (2, 2)] || round.surviving_members != vec![1] {
                failures.push(format!("chain: trace {round:?}"));
            }
        }
        Err(e) => failures.push(format!("chain: {e}")),
    }

    if failures.is_empty() {
        Verdict::new(true, "single separation N = {s}; chain N = {r, s} with maximal sets [[1], [], [2]]")
    } else {
        Verdict::new(false, failures.join("; "))
    }
}

fn forge(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_tangle-forge"))
        .current_dir(dir)
        .env_remove("TANGLE_FORGE_CAP")
        .args(args)
        .output()
        .expect("binary runs")
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().expect("temp dir");
    let graphs = [
        ("c5.txt", "5\n0 1\n1 2\n2 3\n3 4\n4 0\n", "2"),
        ("k4.txt", "4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n", "3"),
        ("grid.txt", "6\n0 1\n1 2\n3 4\n4 5\n0 3\n1 4\n2 5\n", "2"),
    ];
    let mut compared = 0;
    let mut failures = Vec::new();
    for (file, text, k) in graphs {
        fs::write(dir.path().join(file), text).unwrap();
        let mut runs: Vec<Vec<Vec<u8>>> = Vec::new();
        for run in 0..2 {
            let (s, p, n, d) = (
                format!("s{run}.json"),
                format!("p{run}.json"),
                format!("n{run}.json"),
                format!("t{run}.dot"),
            );
            let steps: Vec<Vec<&str>> = vec![
                vec!["sk", "--graph", file, "-k", k, "--out", &s],
                vec!["profiles", "--system", &s, "--graph", file, "-k", k, "--out", &p],
                vec!["check", "--system", &s, "--family", &p, "--graph", file, "-k", k],
                vec!["tree-set", "--system", &s, "--family", &p, "--out", &n, "--dot", &d, "--trace"],
                vec!["canon-test", "--system", &s, "--family", &p, "--seeds", "5", "--seed", "42"],
            ];
            let mut outputs = Vec::new();
            for step in steps {
                let out = forge(dir.path(), &step);
                if !out.status.success() {
                    failures.push(format!("{file} {}: {}", step[0], String::from_utf8_lossy(&out.stderr).trim()));
                }
                outputs.push(out.stdout);
                outputs.push(out.stderr);
            }
            for f in [&s, &p, &n, &d] {
                outputs.push(fs::read(dir.path().join(f)).unwrap_or_default());
            }
            runs.push(outputs);
        }
        compared += runs[0].len();
        if runs[0] != runs[1] {
            failures.push(format!("{file}: outputs differ between runs"));
        }
    }
    let detail = format!("{compared} output streams and files compared across two runs");
    if failures.is_empty() {
        Verdict::new(true, detail)
    } else {
        Verdict::new(false, format!("{detail}; {}", first_failures(&failures)))
    }
}

fn main() {
    // libtest flags such as --nocapture are accepted and ignored.
    let corpus = corpus();
    let mut outputs = HashMap::new();
    let results = [
        ("1", "end-to-end on the graph corpus", end_to_end(&corpus, &mut outputs)),
        ("2", "canonicity under relabeling", canonicity(&corpus, &outputs)),
        ("3", "graph systems are submodular for their profiles", profiles_submodular(&corpus)),
        ("4", "round invariants never fire on valid input", lemma_checks(&corpus)),
        ("5", "corners of crossing pairs stay nested with common neighbours", corners_stay_nested(&corpus)),
        ("6", "exhaustive small systems agree with the oracle", small_systems()),
        ("7", "worked fixtures", worked_fixtures()),
        ("8", "CLI output is deterministic", determinism()),
    ];
    let mut failed = 0;
    for (id, name, verdict) in &results {
        let status = if verdict.pass { "PASS" } else { "FAIL" };
        println!("{status} criterion {id}: {name} ({})", verdict.detail);
        failed += usize::from(!verdict.pass);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
