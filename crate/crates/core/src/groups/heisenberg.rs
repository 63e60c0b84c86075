//! Word metric on the integer Heisenberg group by breadth-first search.
//!
//! Shells are memoized process-wide and only ever grow, so repeated queries
//! share the exploration already done.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

const GENS: [[i64; 3]; 4] = [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0]];

struct Shells {
    dist: HashMap<[i64; 3], u64>,
    frontier: Vec<[i64; 3]>,
    sizes: Vec<u64>,
}

impl Shells {
    fn new() -> Self {
        let mut dist = HashMap::new();
        dist.insert([0, 0, 0], 0);
        Shells { dist, frontier: vec![[0, 0, 0]], sizes: vec![1] }
    }

    fn radius(&self) -> u64 {
        self.sizes.len() as u64 - 1
    }

    fn grow(&mut self, cap: usize) -> Result<()> {
        let r = self.radius() + 1;
        let mut next = Vec::new();
        for t in &self.frontier {
            for g in GENS {
                let p = [t[0] + g[0], t[1] + g[1], t[2] + g[2] + t[0] * g[1]];
                if let Entry::Vacant(e) = self.dist.entry(p) {
                    e.insert(r);
                    next.push(p);
                }
            }
        }
        if self.dist.len() > cap {
            // roll back so the memo stays a union of complete shells
            for p in &next {
                self.dist.remove(p);
            }
            return Err(Error::Resource(format!("Heisenberg ball enumeration exceeded {cap} elements at radius {r}")));
        }
        self.sizes.push(next.len() as u64);
        self.frontier = next;
        Ok(())
    }
}

fn shells() -> &'static Mutex<Shells> {
    static SHELLS: OnceLock<Mutex<Shells>> = OnceLock::new();
    SHELLS.get_or_init(|| Mutex::new(Shells::new()))
}

pub(crate) fn word_length(t: [i64; 3], cap: usize) -> Result<u64> {
    let mut s = shells().lock().unwrap_or_else(|e| e.into_inner());
    loop {
        if let Some(&d) = s.dist.get(&t) {
            return Ok(d);
        }
        s.grow(cap)?;
    }
}

/// Sphere sizes `|S(0)|, ..., |S(r)|`.
pub(crate) fn sphere_sizes(r: u64, cap: usize) -> Result<Vec<u64>> {
    let mut s = shells().lock().unwrap_or_else(|e| e.into_inner());
    while s.radius() < r {
        s.grow(cap)?;
    }
    Ok(s.sizes[..=r as usize].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_shells() {
        let sizes = sphere_sizes(3, 1_000_000).unwrap();
        assert_eq!(sizes[0], 1);
        assert_eq!(sizes[1], 4);
        // X^2, Y^2, XY, YX, and inverse/mixed-sign words: 12 distinct elements at distance 2
        assert_eq!(sizes[2], 12);
    }

    #[test]
    fn central_powers() {
        assert_eq!(word_length([0, 0, 1], 1_000_000).unwrap(), 4);
        assert_eq!(word_length([0, 0, -1], 1_000_000).unwrap(), 4);
        // Z^4 = [X^2, Y^2]; a closed lattice loop of length 6 encloses area at most 2
        assert_eq!(word_length([0, 0, 4], 1_000_000).unwrap(), 8);
    }
}
