//! Independent re-check of a claimed nested set.
//!
//! Works only from the raw order, the involution and the members' bit
//! strings, so that a bug in the constructor cannot hide behind a shared
//! helper.

use std::fmt;

use serde::Serialize;

use crate::orientation::Family;
use crate::sepsys::{SepId, SeparationSystem};
use crate::tree::NestedSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerifyViolation {
    NotInSystem { separation: SepId },
    Duplicate { separation: SepId },
    Crossing { r: SepId, s: SepId },
    NotTreeSet { r: SepId, s: SepId },
    Undistinguished { first: usize, second: usize },
    BadCertificate { first: usize, second: usize, separation: SepId },
}

impl fmt::Display for VerifyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VerifyViolation::NotInSystem { separation } => write!(f, "{separation} is not a separation of the system"),
            VerifyViolation::Duplicate { separation } => write!(f, "{separation} listed twice"),
            VerifyViolation::Crossing { r, s } => write!(f, "{r} and {s} cross"),
            VerifyViolation::NotTreeSet { r, s } => {
                write!(f, "an orientation of {r} lies below both orientations of {s}")
            }
            VerifyViolation::Undistinguished { first, second } => {
                write!(f, "pair undistinguished: members {first} and {second}")
            }
            VerifyViolation::BadCertificate {
                first,
                second,
                separation,
            } => write!(f, "{separation} does not distinguish members {first} and {second}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub violations: Vec<VerifyViolation>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Whether member `p` contains oriented separation `a`, read straight from
/// its bit string.
fn holds(sys: &SeparationSystem, fam: &Family, p: usize, a: SepId) -> bool {
    let low = a.min(sys.inv(a));
    let bit = sys.separations().binary_search(&low).map(|i| fam.members()[p].bits()[i]);
    match bit {
        Ok(bit) => bit == (a == low),
        Err(_) => false,
    }
}

/// Checks that `n` lies in the system, is nested, is a tree set, and
/// distinguishes every pair of members, and that its certificates are sound.
pub fn verify_nested_set(sys: &SeparationSystem, fam: &Family, n: &NestedSet) -> VerifyReport {
    let mut violations = Vec::new();
    let mut seps = Vec::new();
    for &s in &n.separations {
        if s >= sys.len() {
            violations.push(VerifyViolation::NotInSystem { separation: s });
        } else if seps.contains(&s) || seps.contains(&sys.inv(s)) {
            violations.push(VerifyViolation::Duplicate { separation: s });
        } else {
            seps.push(s);
        }
    }

    for (i, &r) in seps.iter().enumerate() {
        for &s in &seps[i + 1..] {
            let orient = |x: SepId| [x, sys.inv(x)];
            let nested = orient(r)
                .iter()
                .any(|&x| orient(s).iter().any(|&y| sys.leq(x, y) || sys.leq(y, x)));
            if !nested {
                violations.push(VerifyViolation::Crossing { r, s });
            }
        }
    }

    for &r in &seps {
        for &s in &seps {
            if r == s {
                continue;
            }
            let (si, ri) = (sys.inv(s), sys.inv(r));
            if [r, ri].iter().any(|&x| sys.leq(x, s) && sys.leq(x, si)) {
                violations.push(VerifyViolation::NotTreeSet { r, s });
            }
        }
    }

    for first in 0..fam.len() {
        for second in first + 1..fam.len() {
            let split = seps
                .iter()
                .any(|&s| holds(sys, fam, first, s) != holds(sys, fam, second, s));
            if !split {
                violations.push(VerifyViolation::Undistinguished { first, second });
            }
        }
    }

    for c in &n.certificates {
        let sound = c.first < fam.len()
            && c.second < fam.len()
            && seps.contains(&c.separation)
            && holds(sys, fam, c.first, c.separation) != holds(sys, fam, c.second, c.separation);
        if !sound {
            violations.push(VerifyViolation::BadCertificate {
                first: c.first,
                second: c.second,
                separation: c.separation,
            });
        }
    }

    VerifyReport { violations }
}
