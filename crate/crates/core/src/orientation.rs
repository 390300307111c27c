//! Orientations, consistency, profiles, and joins and meets that respect a
//! family of orientations.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::GraphSystem;
use crate::sepsys::{SepId, SeparationSystem};

/// Default cap on `m` for the exhaustive `2^m` consistency filter.
pub const DEFAULT_FILTER_CAP: usize = 30;

/// Default cap on `m` for the pruned profile search.
pub const DEFAULT_PROFILE_CAP: usize = 128;

/// One orientation per unoriented separation. Bit `i` refers to the `i`-th
/// entry of [`SeparationSystem::separations`]; a set bit selects the
/// lower-id orientation, a clear bit its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orientation {
    chosen: FixedBitSet,
}

impl Orientation {
    pub fn from_bits(chosen: FixedBitSet) -> Self {
        Orientation { chosen }
    }

    /// Low `m` bits of `mask`, bit `i` for separation `i`.
    pub fn from_mask(m: usize, mask: u64) -> Self {
        let mut chosen = FixedBitSet::with_capacity(m);
        for i in 0..m {
            chosen.set(i, mask >> i & 1 == 1);
        }
        Orientation { chosen }
    }

    /// Builds the orientation containing exactly the oriented separations in
    /// `members`, which must pick one orientation of every separation.
    pub fn from_oriented(sys: &SeparationSystem, members: &FixedBitSet) -> Self {
        let mut chosen = FixedBitSet::with_capacity(sys.separation_count());
        for (i, &rep) in sys.separations().iter().enumerate() {
            debug_assert!(members[rep] != members[sys.inv(rep)]);
            chosen.set(i, members[rep]);
        }
        Orientation { chosen }
    }

    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.chosen
    }

    /// The orientation chosen for separation index `i`.
    pub fn pick(&self, sys: &SeparationSystem, i: usize) -> SepId {
        let rep = sys.separations()[i];
        if self.chosen[i] {
            rep
        } else {
            sys.inv(rep)
        }
    }

    pub fn contains(&self, sys: &SeparationSystem, a: SepId) -> bool {
        self.pick(sys, sys.separation_index(a)) == a
    }

    /// Chosen oriented separations as a set over all `2m` ids.
    pub fn oriented(&self, sys: &SeparationSystem) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(sys.len());
        set.extend((0..self.len()).map(|i| self.pick(sys, i)));
        set
    }
}

/// Numeric order of the bit pattern, separation `m - 1` most significant.
impl Ord for Orientation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            (0..self.len())
                .rev()
                .map(|i| self.chosen[i].cmp(&other.chosen[i]))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for Orientation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Bit string, character `i` for separation `i`.
impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.chosen[i] { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Orientation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chosen = FixedBitSet::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => chosen.insert(i),
                '0' => {}
                other => return Err(format!("unexpected character {other:?} in orientation")),
            }
        }
        Ok(Orientation { chosen })
    }
}

/// A pair `(r, s)` of distinct chosen separations with `inv(r) <= s`.
pub fn inconsistency(sys: &SeparationSystem, o: &Orientation) -> Option<(SepId, SepId)> {
    let chosen = o.oriented(sys);
    for r in chosen.ones() {
        // inv(r) <= s for s != r in the orientation
        if let Some(s) = sys.up_set(sys.inv(r)).intersection(&chosen).find(|&s| s != r) {
            return Some((r, s));
        }
    }
    None
}

pub fn is_consistent(sys: &SeparationSystem, o: &Orientation) -> bool {
    inconsistency(sys, o).is_none()
}

/// A pair `(r, s)` in `o` whose inverses meet (in the ambient universe of
/// graph separations) inside `o`.
pub fn profile_violation(gs: &GraphSystem, o: &Orientation) -> Option<(SepId, SepId)> {
    let sys = gs.system();
    let chosen = o.oriented(sys);
    for r in chosen.ones() {
        for s in chosen.ones().filter(|&s| s >= r) {
            if let Some(meet) = gs.universe_meet(sys.inv(r), sys.inv(s)) {
                if chosen[meet] {
                    return Some((r, s));
                }
            }
        }
    }
    None
}

/// Consistent and satisfying the profile property in the graph universe.
pub fn is_profile(gs: &GraphSystem, o: &Orientation) -> bool {
    is_consistent(gs.system(), o) && profile_violation(gs, o).is_none()
}

/// All consistent orientations, by filtering all `2^m` candidates. Sorted by
/// bit pattern.
pub fn enumerate_consistent(sys: &SeparationSystem, cap: usize) -> Result<Vec<Orientation>> {
    let m = sys.separation_count();
    if m > cap.min(63) {
        return Err(Error::CapExceeded {
            what: "orientation enumeration",
            size: m,
            cap,
        });
    }
    Ok((0..1u64 << m)
        .map(|mask| Orientation::from_mask(m, mask))
        .filter(|o| is_consistent(sys, o))
        .collect())
}

/// All profiles of a graph system `S_k`, sorted by bit pattern. Uses a
/// backtracking search that prunes on consistency and the profile property,
/// so `m` may be far beyond the `2^m` filter's reach.
pub fn enumerate_profiles(gs: &GraphSystem, cap: usize) -> Result<Vec<Orientation>> {
    let sys = gs.system();
    let m = sys.separation_count();
    if m > cap {
        return Err(Error::CapExceeded {
            what: "profile search",
            size: m,
            cap,
        });
    }
    let mut search = ProfileSearch {
        gs,
        chosen: FixedBitSet::with_capacity(sys.len()),
        found: Vec::new(),
    };
    let forbidden = FixedBitSet::with_capacity(sys.len());
    search.extend(0, &forbidden);
    let mut found = search.found;
    found.sort();
    Ok(found)
}

struct ProfileSearch<'a> {
    gs: &'a GraphSystem,
    chosen: FixedBitSet,
    found: Vec<Orientation>,
}

impl ProfileSearch<'_> {
    /// `forbidden` holds every universe meet of inverses of chosen pairs.
    fn extend(&mut self, depth: usize, forbidden: &FixedBitSet) {
        let sys = self.gs.system();
        if depth == sys.separation_count() {
            self.found.push(Orientation::from_oriented(sys, &self.chosen));
            return;
        }
        let rep = sys.separations()[depth];
        for x in [rep, sys.inv(rep)] {
            if forbidden[x] || !sys.up_set(sys.inv(x)).is_disjoint(&self.chosen) {
                continue;
            }
            let mut next = forbidden.clone();
            let mut ok = true;
            for y in self.chosen.ones().chain(std::iter::once(x)) {
                if let Some(meet) = self.gs.universe_meet(sys.inv(x), sys.inv(y)) {
                    if meet == x || self.chosen[meet] {
                        ok = false;
                        break;
                    }
                    next.insert(meet);
                }
            }
            if !ok {
                continue;
            }
            self.chosen.insert(x);
            self.extend(depth + 1, &next);
            self.chosen.set(x, false);
        }
    }
}

/// A set of distinct consistent orientations of one system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    members: Vec<Orientation>,
    sets: Vec<FixedBitSet>,
}

impl Family {
    /// Checks that every member orients `sys`, is consistent, and that no two
    /// members coincide.
    pub fn new(sys: &SeparationSystem, members: Vec<Orientation>) -> Result<Self> {
        let m = sys.separation_count();
        for (i, o) in members.iter().enumerate() {
            if o.len() != m {
                return Err(Error::OrientationLength {
                    expected: m,
                    got: o.len(),
                });
            }
            if let Some((r, s)) = inconsistency(sys, o) {
                return Err(Error::Inconsistent { member: i, r, s });
            }
        }
        for (i, a) in members.iter().enumerate() {
            if let Some(j) = members[i + 1..].iter().position(|b| a == b) {
                return Err(Error::DuplicateMember {
                    first: i,
                    second: i + 1 + j,
                });
            }
        }
        let sets = members.iter().map(|o| o.oriented(sys)).collect();
        Ok(Family { members, sets })
    }

    pub fn members(&self) -> &[Orientation] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Member `p` as a set of oriented ids.
    pub fn member_set(&self, p: usize) -> &FixedBitSet {
        &self.sets[p]
    }

    #[inline]
    pub fn contains(&self, p: usize, a: SepId) -> bool {
        self.sets[p][a]
    }

    /// Members containing both `r` and `s`.
    pub fn containing_both(&self, r: SepId, s: SepId) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&p| self.sets[p][r] && self.sets[p][s])
    }
}

/// The supremum of `r` and `s` if it exists and every member containing both
/// also contains it.
pub fn p_join(sys: &SeparationSystem, fam: &Family, r: SepId, s: SepId) -> Option<SepId> {
    let join = sys.join(r, s)?;
    fam.containing_both(r, s).all(|p| fam.contains(p, join)).then_some(join)
}

/// The infimum of `r` and `s` if it exists and every member containing both
/// inverses contains the inverse of the infimum.
pub fn p_meet(sys: &SeparationSystem, fam: &Family, r: SepId, s: SepId) -> Option<SepId> {
    let meet = sys.meet(r, s)?;
    let co = sys.inv(meet);
    fam.containing_both(sys.inv(r), sys.inv(s))
        .all(|p| fam.contains(p, co))
        .then_some(meet)
}

/// First oriented pair of crossing separations with neither a family join
/// nor a family meet. Every orientation of every crossing pair is tried.
pub fn p_submodularity_witness(sys: &SeparationSystem, fam: &Family) -> Option<(SepId, SepId)> {
    let reps = sys.separations();
    for (i, &a) in reps.iter().enumerate() {
        for &b in &reps[i + 1..] {
            if sys.nested(a, b) {
                continue;
            }
            for r in [a, sys.inv(a)] {
                for s in [b, sys.inv(b)] {
                    if p_join(sys, fam, r, s).is_none() && p_meet(sys, fam, r, s).is_none() {
                        return Some((r, s));
                    }
                }
            }
        }
    }
    None
}

pub fn is_p_submodular(sys: &SeparationSystem, fam: &Family) -> bool {
    p_submodularity_witness(sys, fam).is_none()
}
