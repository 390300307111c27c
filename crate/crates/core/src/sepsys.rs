//! Finite separation systems: a poset with an order-reversing, fixed-point-free
//! involution.
//!
//! Oriented separations are dense indices `0..2m`. The order is stored as a
//! full relation (one bitset row of up-sets and one of down-sets per element),
//! so every comparison is a single bit lookup. An unoriented separation is
//! identified by the smaller id of its two orientations.

use std::collections::BTreeMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an oriented separation.
pub type SepId = usize;

/// A separation system as written on disk: `m` unoriented separations, the
/// involution as a list of pairs, and the order as a list of `[a, b]` pairs
/// meaning `a <= b`. Reflexive pairs may be omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSystem {
    pub m: usize,
    pub inv: Vec<[usize; 2]>,
    pub leq: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<usize, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    IdOutOfRange { id: usize },
    InvolutionFixedPoint { id: SepId },
    InvolutionDuplicate { id: SepId },
    InvolutionMissing { id: SepId },
    NotAntisymmetric { a: SepId, b: SepId },
    NotTransitive { a: SepId, b: SepId, c: SepId },
    NotOrderReversing { a: SepId, b: SepId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::IdOutOfRange { id } => write!(f, "id {id} out of range"),
            Violation::InvolutionFixedPoint { id } => write!(f, "involution fixed point at {id}"),
            Violation::InvolutionDuplicate { id } => write!(f, "{id} is paired more than once"),
            Violation::InvolutionMissing { id } => write!(f, "{id} has no inverse"),
            Violation::NotAntisymmetric { a, b } => {
                write!(f, "{a} <= {b} and {b} <= {a} but {a} != {b}")
            }
            Violation::NotTransitive { a, b, c } => {
                write!(f, "{a} <= {b} <= {c} but not {a} <= {c}")
            }
            Violation::NotOrderReversing { a, b } => {
                write!(f, "{a} <= {b} but the inverse of {b} is not below the inverse of {a}")
            }
        }
    }
}

/// Every axiom violation found in a raw system. Empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks all separation-system axioms on a raw description.
pub fn validate(raw: &RawSystem) -> ValidationReport {
    let n = 2 * raw.m;
    let mut violations = Vec::new();
    let in_range = |id: usize, violations: &mut Vec<Violation>| {
        if id >= n {
            violations.push(Violation::IdOutOfRange { id });
            false
        } else {
            true
        }
    };

    let mut partner: Vec<Option<SepId>> = vec![None; n];
    for &[a, b] in &raw.inv {
        let ok_a = in_range(a, &mut violations);
        let ok_b = in_range(b, &mut violations);
        if !(ok_a && ok_b) {
            continue;
        }
        if a == b {
            violations.push(Violation::InvolutionFixedPoint { id: a });
            continue;
        }
        for (x, y) in [(a, b), (b, a)] {
            if partner[x].is_some() {
                violations.push(Violation::InvolutionDuplicate { id: x });
            } else {
                partner[x] = Some(y);
            }
        }
    }
    let mut involution_ok = violations.is_empty();
    for (id, p) in partner.iter().enumerate() {
        if p.is_none() {
            // fixed points were already reported
            if !violations.contains(&Violation::InvolutionFixedPoint { id }) {
                violations.push(Violation::InvolutionMissing { id });
            }
            involution_ok = false;
        }
    }

    let mut leq = identity_relation(n);
    for &[a, b] in &raw.leq {
        let ok_a = in_range(a, &mut violations);
        let ok_b = in_range(b, &mut violations);
        if ok_a && ok_b {
            leq[a].insert(b);
        }
    }
    for &id in raw.labels.keys() {
        in_range(id, &mut violations);
    }

    for (a, row) in leq.iter().enumerate() {
        for b in row.ones().filter(|&b| b > a) {
            if leq[b][a] {
                violations.push(Violation::NotAntisymmetric { a, b });
            }
        }
    }
    for a in 0..n {
        let mut missing = FixedBitSet::with_capacity(n);
        for b in leq[a].ones() {
            let mut beyond = leq[b].clone();
            beyond.difference_with(&leq[a]);
            beyond.difference_with(&missing);
            for c in beyond.ones() {
                violations.push(Violation::NotTransitive { a, b, c });
            }
            missing.union_with(&beyond);
        }
    }
    if involution_ok {
        for a in 0..n {
            for b in leq[a].ones() {
                let (ib, ia) = (partner[b].unwrap(), partner[a].unwrap());
                if !leq[ib][ia] {
                    violations.push(Violation::NotOrderReversing { a, b });
                }
            }
        }
    }
    ValidationReport { violations }
}

fn identity_relation(n: usize) -> Vec<FixedBitSet> {
    (0..n)
        .map(|i| {
            let mut row = FixedBitSet::with_capacity(n);
            row.insert(i);
            row
        })
        .collect()
}

/// A validated, immutable separation system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationSystem {
    inv: Vec<SepId>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    labels: BTreeMap<SepId, String>,
    reps: Vec<SepId>,
    rep_index: Vec<usize>,
}

impl SeparationSystem {
    /// Validates `raw` and builds the system. The order must already be
    /// transitive and order-reversing; see [`SeparationSystem::from_generators`]
    /// for the closing variant.
    pub fn from_raw(raw: &RawSystem) -> Result<Self> {
        let report = validate(raw);
        if !report.is_valid() {
            return Err(Error::Invalid(report));
        }
        let n = 2 * raw.m;
        let mut inv = vec![0; n];
        for &[a, b] in &raw.inv {
            inv[a] = b;
            inv[b] = a;
        }
        let mut up = identity_relation(n);
        for &[a, b] in &raw.leq {
            up[a].insert(b);
        }
        Ok(Self::from_parts(inv, up, raw.labels.clone()))
    }

    /// Builds a system from generator pairs, closing them under the
    /// involution (`a <= b` adds `inv b <= inv a`) and transitivity before
    /// validating.
    pub fn from_generators(m: usize, inv: &[[usize; 2]], generators: &[[usize; 2]]) -> Result<Self> {
        let probe = RawSystem {
            m,
            inv: inv.to_vec(),
            leq: Vec::new(),
            labels: BTreeMap::new(),
        };
        let report = validate(&probe);
        let n = 2 * m;
        if !report.is_valid() || generators.iter().flatten().any(|&id| id >= n) {
            // fall through to the full report
            let mut raw = probe;
            raw.leq = generators.to_vec();
            return Err(Error::Invalid(validate(&raw)));
        }
        let mut partner = vec![0; n];
        for &[a, b] in inv {
            partner[a] = b;
            partner[b] = a;
        }
        let mut rel = identity_relation(n);
        for &[a, b] in generators {
            rel[a].insert(b);
            rel[partner[b]].insert(partner[a]);
        }
        // Warshall; the mirror of a transitive order-reversing generator set
        // stays order-reversing under closure.
        for k in 0..n {
            let row_k = rel[k].clone();
            for row in rel.iter_mut() {
                if row[k] {
                    row.union_with(&row_k);
                }
            }
        }
        let raw = RawSystem {
            m,
            inv: inv.to_vec(),
            leq: relation_pairs(&rel),
            labels: BTreeMap::new(),
        };
        Self::from_raw(&raw)
    }

    /// Assembles a system from an involution and up-set rows that are already
    /// known to satisfy every axiom.
    pub(crate) fn from_parts(inv: Vec<SepId>, up: Vec<FixedBitSet>, labels: BTreeMap<SepId, String>) -> Self {
        let n = inv.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in up.iter().enumerate() {
            for b in row.ones() {
                down[b].insert(a);
            }
        }
        let reps: Vec<SepId> = (0..n).filter(|&a| a < inv[a]).collect();
        let mut rep_index = vec![0; n];
        for (i, &r) in reps.iter().enumerate() {
            rep_index[r] = i;
            rep_index[inv[r]] = i;
        }
        SeparationSystem {
            inv,
            up,
            down,
            labels,
            reps,
            rep_index,
        }
    }

    /// The on-disk form: involution pairs `[low, high]` sorted by `low`, and
    /// strict order pairs in lexicographic order.
    pub fn to_raw(&self) -> RawSystem {
        RawSystem {
            m: self.separation_count(),
            inv: self.reps.iter().map(|&r| [r, self.inv[r]]).collect(),
            leq: relation_pairs(&self.up),
            labels: self.labels.clone(),
        }
    }

    /// Number of oriented separations.
    pub fn len(&self) -> usize {
        self.inv.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv.is_empty()
    }

    /// Number of unoriented separations.
    pub fn separation_count(&self) -> usize {
        self.reps.len()
    }

    #[inline]
    pub fn inv(&self, a: SepId) -> SepId {
        self.inv[a]
    }

    #[inline]
    pub fn leq(&self, a: SepId, b: SepId) -> bool {
        self.up[a][b]
    }

    #[inline]
    pub fn lt(&self, a: SepId, b: SepId) -> bool {
        a != b && self.up[a][b]
    }

    /// `{b : a <= b}`
    pub fn up_set(&self, a: SepId) -> &FixedBitSet {
        &self.up[a]
    }

    /// `{b : b <= a}`
    pub fn down_set(&self, a: SepId) -> &FixedBitSet {
        &self.down[a]
    }

    /// Canonical id of the unoriented separation underlying `a`.
    #[inline]
    pub fn canonical(&self, a: SepId) -> SepId {
        a.min(self.inv[a])
    }

    /// Canonical ids of all unoriented separations, ascending.
    pub fn separations(&self) -> &[SepId] {
        &self.reps
    }

    /// Position of the unoriented separation of `a` within [`Self::separations`].
    #[inline]
    pub fn separation_index(&self, a: SepId) -> usize {
        self.rep_index[a]
    }

    pub fn label(&self, a: SepId) -> Option<&str> {
        self.labels.get(&a).map(String::as_str)
    }

    pub fn labels(&self) -> &BTreeMap<SepId, String> {
        &self.labels
    }

    /// Label if present, otherwise `s<id>`.
    pub fn display_name(&self, a: SepId) -> String {
        self.label(a).map_or_else(|| format!("s{a}"), str::to_owned)
    }

    /// Whether some orientation of `r` lies below some orientation of `s`.
    pub fn nested(&self, r: SepId, s: SepId) -> bool {
        let (ri, si) = (self.inv[r], self.inv[s]);
        self.leq(r, s) || self.leq(r, si) || self.leq(ri, s) || self.leq(ri, si)
    }

    pub fn crosses(&self, r: SepId, s: SepId) -> bool {
        !self.nested(r, s)
    }

    pub fn comparable(&self, r: SepId, s: SepId) -> bool {
        self.leq(r, s) || self.leq(s, r)
    }

    /// `r <= inv(s)`
    pub fn points_towards(&self, r: SepId, s: SepId) -> bool {
        self.leq(r, self.inv[s])
    }

    /// `inv(r) <= s`
    pub fn points_away(&self, r: SepId, s: SepId) -> bool {
        self.leq(self.inv[r], s)
    }

    /// Greatest element of `set`, if it has one.
    pub fn greatest_in(&self, set: &FixedBitSet) -> Option<SepId> {
        let mut candidate = set.ones().next()?;
        for x in set.ones() {
            if self.leq(candidate, x) {
                candidate = x;
            }
        }
        set.is_subset(&self.down[candidate]).then_some(candidate)
    }

    /// Least element of `set`, if it has one.
    pub fn least_in(&self, set: &FixedBitSet) -> Option<SepId> {
        let mut candidate = set.ones().next()?;
        for x in set.ones() {
            if self.leq(x, candidate) {
                candidate = x;
            }
        }
        set.is_subset(&self.up[candidate]).then_some(candidate)
    }

    /// Infimum of a non-empty set in this poset.
    ///
    /// Panics if `set` is empty.
    pub fn infimum(&self, set: &[SepId]) -> Option<SepId> {
        let (&first, rest) = set.split_first().expect("infimum of an empty set");
        let mut lower = self.down[first].clone();
        for &x in rest {
            lower.intersect_with(&self.down[x]);
        }
        self.greatest_in(&lower)
    }

    /// Supremum of a non-empty set in this poset.
    ///
    /// Panics if `set` is empty.
    pub fn supremum(&self, set: &[SepId]) -> Option<SepId> {
        let (&first, rest) = set.split_first().expect("supremum of an empty set");
        let mut upper = self.up[first].clone();
        for &x in rest {
            upper.intersect_with(&self.up[x]);
        }
        self.least_in(&upper)
    }

    pub fn meet(&self, r: SepId, s: SepId) -> Option<SepId> {
        let mut lower = self.down[r].clone();
        lower.intersect_with(&self.down[s]);
        self.greatest_in(&lower)
    }

    pub fn join(&self, r: SepId, s: SepId) -> Option<SepId> {
        let mut upper = self.up[r].clone();
        upper.intersect_with(&self.up[s]);
        self.least_in(&upper)
    }

    /// Restriction to the oriented separations in `keep`, which must be closed
    /// under the involution. New ids follow the order of the old ones; the
    /// returned vector maps each new id to its old id.
    pub fn subsystem(&self, keep: &FixedBitSet) -> (SeparationSystem, Vec<SepId>) {
        let origin: Vec<SepId> = keep.ones().collect();
        let n = origin.len();
        let mut new_id = vec![usize::MAX; self.len()];
        for (i, &old) in origin.iter().enumerate() {
            new_id[old] = i;
        }
        let inv = origin
            .iter()
            .map(|&old| {
                let partner = new_id[self.inv[old]];
                assert!(partner != usize::MAX, "subsystem not closed under the involution");
                partner
            })
            .collect();
        let up = origin
            .iter()
            .map(|&old| {
                let mut row = FixedBitSet::with_capacity(n);
                for b in self.up[old].ones() {
                    if new_id[b] != usize::MAX {
                        row.insert(new_id[b]);
                    }
                }
                row
            })
            .collect();
        let labels = self
            .labels
            .iter()
            .filter(|(id, _)| new_id[**id] != usize::MAX)
            .map(|(id, l)| (new_id[*id], l.clone()))
            .collect();
        (SeparationSystem::from_parts(inv, up, labels), origin)
    }
}

fn relation_pairs(rows: &[FixedBitSet]) -> Vec<[usize; 2]> {
    rows.iter()
        .enumerate()
        .flat_map(|(a, row)| row.ones().filter(move |&b| b != a).map(move |b| [a, b]))
        .collect()
}
