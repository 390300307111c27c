//! Canonical nested sets distinguishing a family of consistent orientations.
//!
//! Each round looks at the *exclusive* separations, those lying in exactly
//! one member of the family. For every member `P` the maximal `P`-exclusive
//! separations form a set `M_P`; when it is non-empty its infimum `s_P` is
//! `P`'s representative. The representatives of one round are pairwise
//! nested and go into the output. The next round works on the separations
//! nested with every `M_P` and on the members whose `M_P` was empty.
//!
//! Every object above is determined by the order, the involution and the
//! family alone; nothing is picked by index. This is what makes the result
//! commute with isomorphisms, and any place where such an object fails to
//! exist is reported as an error instead of being patched with a choice.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Lemma, Result};
use crate::orientation::{p_submodularity_witness, Family, Orientation};
use crate::sepsys::{SepId, SeparationSystem};

/// How many members of the family contain each oriented separation.
#[derive(Debug, Clone)]
pub struct ExclusivityIndex {
    counts: Vec<usize>,
    owner: Vec<Option<usize>>,
}

impl ExclusivityIndex {
    pub fn new(sys: &SeparationSystem, fam: &Family) -> Self {
        let mut counts = vec![0; sys.len()];
        let mut owner = vec![None; sys.len()];
        for p in 0..fam.len() {
            for a in fam.member_set(p).ones() {
                counts[a] += 1;
                owner[a] = Some(p);
            }
        }
        for (a, o) in owner.iter_mut().enumerate() {
            if counts[a] != 1 {
                *o = None;
            }
        }
        ExclusivityIndex { counts, owner }
    }

    pub fn count(&self, a: SepId) -> usize {
        self.counts[a]
    }

    /// The unique member containing `a`, if exactly one does.
    pub fn owner(&self, a: SepId) -> Option<usize> {
        self.owner[a]
    }

    pub fn is_exclusive_for(&self, a: SepId, p: usize) -> bool {
        self.owner[a] == Some(p)
    }
}

/// For every member `P`, the maximal `P`-exclusive separations, ascending.
pub fn compute_mp(sys: &SeparationSystem, fam: &Family) -> Vec<Vec<SepId>> {
    let index = ExclusivityIndex::new(sys, fam);
    let mut exclusive = vec![FixedBitSet::with_capacity(sys.len()); fam.len()];
    for a in 0..sys.len() {
        if let Some(p) = index.owner(a) {
            exclusive[p].insert(a);
        }
    }
    exclusive
        .iter()
        .map(|set| {
            set.ones()
                .filter(|&a| set.ones().all(|b| b == a || !sys.leq(a, b)))
                .collect()
        })
        .collect()
}

/// Infimum `s_P` of a non-empty `M_P`, checked to exist, to be `P`-exclusive,
/// and to be nested with every separation nested with all of `M_P`.
pub fn infimum_sp(sys: &SeparationSystem, fam: &Family, p: usize, mp: &[SepId]) -> Result<SepId> {
    if mp.is_empty() || fam.len() < 2 {
        return Err(Error::precondition(
            Lemma::RepresentativeInfimum,
            format!("member {p}: needs a non-empty maximal set and at least two members"),
        ));
    }
    let inf = sys.infimum(mp).ok_or_else(|| {
        Error::precondition(
            Lemma::RepresentativeInfimum,
            format!("member {p}: maximal exclusive set {mp:?} has no infimum"),
        )
    })?;
    let index = ExclusivityIndex::new(sys, fam);
    if !index.is_exclusive_for(inf, p) {
        return Err(Error::precondition(
            Lemma::RepresentativeInfimum,
            format!("member {p}: infimum {inf} is not exclusive for it"),
        ));
    }
    for &t in sys.separations() {
        if mp.iter().all(|&r| sys.nested(t, r)) && !sys.nested(t, inf) {
            return Err(Error::precondition(
                Lemma::RepresentativeInfimum,
                format!("member {p}: {t} is nested with the maximal set but not with its infimum {inf}"),
            ));
        }
    }
    Ok(inf)
}

/// The separations nested with every `M_P`, and the members with empty `M_P`
/// restricted to them.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub system: SeparationSystem,
    /// Old id of every new oriented id.
    pub origin: Vec<SepId>,
    pub family: Family,
    /// Index in the input family of every surviving member.
    pub members: Vec<usize>,
}

/// Restricts to the survivors of one round. The surviving system must still
/// be submodular for, and distinguish, the surviving members.
pub fn restrict(sys: &SeparationSystem, fam: &Family, mp: &[Vec<SepId>]) -> Result<Restriction> {
    let all_maximal: Vec<SepId> = mp.iter().flatten().copied().collect();
    let mut keep = FixedBitSet::with_capacity(sys.len());
    keep.extend((0..sys.len()).filter(|&a| all_maximal.iter().all(|&r| sys.nested(a, r))));
    let (system, origin) = sys.subsystem(&keep);
    let members: Vec<usize> = (0..fam.len()).filter(|&q| mp[q].is_empty()).collect();
    let orientations = members
        .iter()
        .map(|&q| {
            let mut set = FixedBitSet::with_capacity(system.len());
            set.extend((0..system.len()).filter(|&a| fam.contains(q, origin[a])));
            Orientation::from_oriented(&system, &set)
        })
        .collect();
    let family = Family::new(&system, orientations).map_err(|e| match e {
        Error::DuplicateMember { first, second } => Error::precondition(
            Lemma::RestrictionDistinguishes,
            format!(
                "members {} and {} coincide on the surviving separations",
                members[first], members[second]
            ),
        ),
        other => Error::precondition(Lemma::RestrictionDistinguishes, other.to_string()),
    })?;
    if let Some((r, s)) = p_submodularity_witness(&system, &family) {
        return Err(Error::precondition(
            Lemma::RestrictionSubmodular,
            format!("surviving pair ({}, {}) has neither join nor meet", origin[r], origin[s]),
        ));
    }
    Ok(Restriction {
        system,
        origin,
        family,
        members,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalSet {
    pub member: usize,
    pub separations: Vec<SepId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representative {
    pub member: usize,
    pub separation: SepId,
}

/// Trace of one round, in ids of the original system and indices of the
/// original family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub members: Vec<usize>,
    pub maximal: Vec<MaximalSet>,
    pub representatives: Vec<Representative>,
    /// Unoriented separations added in this round.
    pub selected: Vec<SepId>,
    pub surviving_separations: Vec<SepId>,
    pub surviving_members: Vec<usize>,
}

/// A pair of family members and a separation of the nested set telling them
/// apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub first: usize,
    pub second: usize,
    pub separation: SepId,
}

/// Output of [`canonical_tree_set`]. Separations are canonical ids of the
/// input system, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestedSet {
    pub separations: Vec<SepId>,
    pub certificates: Vec<Certificate>,
    pub rounds: Vec<Round>,
}

#[derive(Debug, Clone, Copy)]
pub struct TreeSetOptions {
    /// Reject inputs that are not submodular for the family before starting.
    pub check_submodularity: bool,
}

impl Default for TreeSetOptions {
    fn default() -> Self {
        TreeSetOptions {
            check_submodularity: true,
        }
    }
}

/// Builds the canonical nested set of `sys` distinguishing `fam`.
pub fn canonical_tree_set(sys: &SeparationSystem, fam: &Family, options: TreeSetOptions) -> Result<NestedSet> {
    if options.check_submodularity {
        if let Some((r, s)) = p_submodularity_witness(sys, fam) {
            return Err(Error::NotSubmodular { r, s });
        }
    }

    let mut system = sys.clone();
    let mut family = fam.clone();
    let mut origin: Vec<SepId> = (0..sys.len()).collect();
    let mut members: Vec<usize> = (0..fam.len()).collect();
    let mut selected = BTreeSet::new();
    let mut rounds = Vec::new();

    while family.len() > 1 {
        let mp = compute_mp(&system, &family);
        check_maximal_sets(&system, &mp)?;

        let mut representatives = Vec::new();
        for (p, set) in mp.iter().enumerate() {
            if !set.is_empty() {
                representatives.push((p, infimum_sp(&system, &family, p, set)?));
            }
        }

        let restriction = restrict(&system, &family, &mp)?;
        check_representatives(&system, &representatives, &restriction.origin)?;

        let to_original = |a: SepId| sys.canonical(origin[a]);
        let round_selected: BTreeSet<SepId> = representatives.iter().map(|&(_, s)| to_original(s)).collect();
        let surviving_separations: Vec<SepId> = restriction
            .origin
            .iter()
            .map(|&a| to_original(a))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        rounds.push(Round {
            members: members.clone(),
            maximal: mp
                .iter()
                .enumerate()
                .map(|(p, set)| MaximalSet {
                    member: members[p],
                    separations: set.iter().map(|&a| origin[a]).collect(),
                })
                .collect(),
            representatives: representatives
                .iter()
                .map(|&(p, s)| Representative {
                    member: members[p],
                    separation: origin[s],
                })
                .collect(),
            selected: round_selected.iter().copied().collect(),
            surviving_separations,
            surviving_members: restriction.members.iter().map(|&q| members[q]).collect(),
        });
        selected.extend(round_selected);

        origin = restriction.origin.iter().map(|&a| origin[a]).collect();
        members = restriction.members.iter().map(|&q| members[q]).collect();
        system = restriction.system;
        family = restriction.family;
    }

    let separations: Vec<SepId> = selected.into_iter().collect();
    let certificates = certificates(fam, &separations, sys);
    Ok(NestedSet {
        separations,
        certificates,
        rounds,
    })
}

fn check_maximal_sets(sys: &SeparationSystem, mp: &[Vec<SepId>]) -> Result<()> {
    if !sys.is_empty() && mp.iter().all(Vec::is_empty) {
        return Err(Error::precondition(
            Lemma::ExclusiveExists,
            "no member has an exclusive separation",
        ));
    }
    for (p, set) in mp.iter().enumerate() {
        for (i, &r) in set.iter().enumerate() {
            if let Some(&s) = set[i + 1..].iter().find(|&&s| sys.nested(r, s)) {
                return Err(Error::precondition(
                    Lemma::MaximalSetCrosses,
                    format!("member {p}: maximal exclusive separations {r} and {s} are nested"),
                ));
            }
        }
        for (q, other) in mp.iter().enumerate().skip(p + 1) {
            for &r in set {
                if let Some(&s) = other.iter().find(|&&s| sys.crosses(r, s)) {
                    return Err(Error::precondition(
                        Lemma::MaximalSetsNested,
                        format!("{r} (member {p}) crosses {s} (member {q})"),
                    ));
                }
            }
        }
    }
    Ok(())
}

fn check_representatives(sys: &SeparationSystem, reps: &[(usize, SepId)], surviving: &[SepId]) -> Result<()> {
    for (i, &(p, r)) in reps.iter().enumerate() {
        if let Some(&(q, s)) = reps[i + 1..].iter().find(|&&(_, s)| sys.crosses(r, s)) {
            return Err(Error::precondition(
                Lemma::RepresentativesNested,
                format!("representatives {r} (member {p}) and {s} (member {q}) cross"),
            ));
        }
        if let Some(&t) = surviving.iter().find(|&&t| sys.crosses(r, t)) {
            return Err(Error::precondition(
                Lemma::RepresentativesNested,
                format!("surviving separation {t} crosses representative {r}"),
            ));
        }
    }
    Ok(())
}

/// For every pair of members, the smallest separation of `separations` that
/// the two orient differently.
fn certificates(fam: &Family, separations: &[SepId], sys: &SeparationSystem) -> Vec<Certificate> {
    let mut out = Vec::new();
    for first in 0..fam.len() {
        for second in first + 1..fam.len() {
            let found = separations
                .iter()
                .find(|&&s| fam.contains(first, s) != fam.contains(second, s));
            if let Some(&separation) = found {
                debug_assert_eq!(separation, sys.canonical(separation));
                out.push(Certificate {
                    first,
                    second,
                    separation,
                });
            }
        }
    }
    out
}
