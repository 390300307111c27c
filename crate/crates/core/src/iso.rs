//! Isomorphisms of separation systems and seeded relabelings used to test
//! that constructions do not depend on how a system is presented.

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::orientation::{is_consistent, Family, Orientation};
use crate::sepsys::{SepId, SeparationSystem};

/// A bijection between the oriented ids of two systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SepIso {
    map: Vec<SepId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoViolation {
    SizeMismatch { from: usize, to: usize },
    NotBijective { id: SepId },
    Involution { s: SepId },
    Order { r: SepId, s: SepId },
}

impl SepIso {
    pub fn new(map: Vec<SepId>) -> Self {
        SepIso { map }
    }

    pub fn identity(n: usize) -> Self {
        SepIso { map: (0..n).collect() }
    }

    #[inline]
    pub fn apply(&self, a: SepId) -> SepId {
        self.map[a]
    }

    pub fn as_slice(&self) -> &[SepId] {
        &self.map
    }

    pub fn inverse(&self) -> SepIso {
        let mut map = vec![0; self.map.len()];
        for (a, &b) in self.map.iter().enumerate() {
            map[b] = a;
        }
        SepIso { map }
    }

    /// Image of a set of unoriented separations, as ascending canonical ids
    /// of the target system.
    pub fn image_of_separations(&self, target: &SeparationSystem, seps: &[SepId]) -> Vec<SepId> {
        let mut out: Vec<SepId> = seps.iter().map(|&s| target.canonical(self.map[s])).collect();
        out.sort_unstable();
        out
    }
}

/// Checks that `phi` is a bijection `a -> b` commuting with the involution
/// and preserving the order in both directions.
pub fn verify_iso(phi: &SepIso, a: &SeparationSystem, b: &SeparationSystem) -> Result<(), IsoViolation> {
    if phi.map.len() != a.len() || a.len() != b.len() {
        return Err(IsoViolation::SizeMismatch {
            from: a.len(),
            to: b.len(),
        });
    }
    let mut seen = FixedBitSet::with_capacity(b.len());
    for (id, &x) in phi.map.iter().enumerate() {
        if x >= b.len() || seen.put(x) {
            return Err(IsoViolation::NotBijective { id });
        }
    }
    for s in 0..a.len() {
        if phi.apply(a.inv(s)) != b.inv(phi.apply(s)) {
            return Err(IsoViolation::Involution { s });
        }
    }
    for r in 0..a.len() {
        for s in 0..a.len() {
            if a.leq(r, s) != b.leq(phi.apply(r), phi.apply(s)) {
                return Err(IsoViolation::Order { r, s });
            }
        }
    }
    Ok(())
}

/// The image of `sys` under the relabeling `phi` (which need only be a
/// permutation respecting the involution pairs).
pub fn image_system(phi: &SepIso, sys: &SeparationSystem) -> SeparationSystem {
    let n = sys.len();
    let mut inv = vec![0; n];
    let mut up = vec![FixedBitSet::with_capacity(n); n];
    for a in 0..n {
        inv[phi.apply(a)] = phi.apply(sys.inv(a));
        up[phi.apply(a)].extend(sys.up_set(a).ones().map(|b| phi.apply(b)));
    }
    let labels = sys
        .labels()
        .iter()
        .map(|(&id, label)| (phi.apply(id), label.clone()))
        .collect();
    SeparationSystem::from_parts(inv, up, labels)
}

/// `{phi(P) | P in fam}` as a family of `target`, in the same member order.
///
/// Panics if an image member is inconsistent, which cannot happen when `phi`
/// is an isomorphism.
pub fn apply_iso(phi: &SepIso, source: &SeparationSystem, target: &SeparationSystem, fam: &Family) -> Family {
    let members = (0..fam.len())
        .map(|p| {
            let mut set = FixedBitSet::with_capacity(target.len());
            set.extend(fam.member_set(p).ones().map(|a| phi.apply(a)));
            let image = Orientation::from_oriented(target, &set);
            assert!(is_consistent(target, &image), "image of a consistent orientation is inconsistent");
            image
        })
        .collect();
    debug_assert_eq!(source.len(), target.len());
    Family::new(target, members).expect("isomorphic image of a valid family")
}

/// A seed-determined relabeling of `sys` together with the isomorphism onto
/// it. Separations land on random slots with random orientation, and the
/// involution pairs of the image are spread over random id pairs.
pub fn random_relabeling(sys: &SeparationSystem, seed: u64) -> (SeparationSystem, SepIso) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = sys.len();
    let mut slots: Vec<SepId> = (0..n).collect();
    slots.shuffle(&mut rng);
    let mut order: Vec<SepId> = sys.separations().to_vec();
    order.shuffle(&mut rng);
    let mut map = vec![0; n];
    for (i, &rep) in order.iter().enumerate() {
        let (x, y) = if rng.gen_bool(0.5) { (rep, sys.inv(rep)) } else { (sys.inv(rep), rep) };
        map[x] = slots[2 * i];
        map[y] = slots[2 * i + 1];
    }
    let phi = SepIso::new(map);
    (image_system(&phi, sys), phi)
}
