use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{GroupElement, GroupSpec};
use crate::error::{Error, Result};

/// Default element-count cap for ball enumeration.
pub const DEFAULT_BALL_CAP: usize = 10_000_000;

/// The ball `B(r)` of the word metric, enumerated exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallTable {
    pub radius: u64,
    /// Elements sorted by their normal form.
    pub elements: Vec<GroupElement>,
    pub volume: u64,
    /// `shells[i]` is the number of elements at distance exactly `i`.
    pub shells: Vec<u64>,
}

impl BallTable {
    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }
}

/// Breadth-first enumeration of `B(r)`, failing once more than `cap`
/// elements have been discovered.
pub fn ball(r: u64, spec: &GroupSpec, cap: usize) -> Result<BallTable> {
    spec.validate()?;
    let gens = spec.generators();
    let id = spec.identity();
    let mut seen: HashSet<GroupElement> = HashSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([(id, 0u64)]);
    let mut shells = vec![1u64];
    while let Some((g, d)) = queue.pop_front() {
        if d == r {
            continue;
        }
        for s in &gens {
            let h = spec.mul_unchecked(&g, s);
            if seen.insert(h.clone()) {
                if seen.len() > cap {
                    return Err(Error::Resource(format!(
                        "ball enumeration exceeded {cap} elements while building radius {}",
                        d + 1
                    )));
                }
                if shells.len() <= (d + 1) as usize {
                    shells.push(0);
                }
                shells[(d + 1) as usize] += 1;
                queue.push_back((h, d + 1));
            }
        }
    }
    // finite groups can stop growing before r
    shells.resize(r as usize + 1, 0);
    let mut elements: Vec<GroupElement> = seen.into_iter().collect();
    elements.sort();
    let volume = elements.len() as u64;
    Ok(BallTable { radius: r, elements, volume, shells })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(ball(1, &GroupSpec::lattice(2), 100).unwrap().volume, 5);
        assert_eq!(ball(2, &GroupSpec::free(2), 100).unwrap().volume, 17);
        for spec in [GroupSpec::lattice(3), GroupSpec::free(3), GroupSpec::Heisenberg, GroupSpec::cyclic(4)] {
            let b = ball(0, &spec, 10).unwrap();
            assert_eq!(b.volume, 1);
            assert!(b.contains(&spec.identity()));
        }
    }

    #[test]
    fn cap_reports_radius() {
        let err = ball(10, &GroupSpec::free(2), 1000).unwrap_err();
        match err {
            Error::Resource(msg) => assert!(msg.contains("radius")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn finite_group_saturates() {
        let b = ball(10, &GroupSpec::cyclic(5), 100).unwrap();
        assert_eq!(b.volume, 5);
        assert_eq!(b.shells, vec![1, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn nested() {
        let spec = GroupSpec::Heisenberg;
        let b2 = ball(2, &spec, 100_000).unwrap();
        let b3 = ball(3, &spec, 100_000).unwrap();
        assert!(b2.elements.iter().all(|g| b3.contains(g)));
        assert!(b3.volume > b2.volume);
    }
}
