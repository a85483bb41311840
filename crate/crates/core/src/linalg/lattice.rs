use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::chainring::ChainRing;
use crate::error::{Error, Result};

use super::submodule::{IsoProfile, Submodule};

/// Default cap on `|R^[m]|` for lattice enumeration.
pub const DEFAULT_LATTICE_GUARD: u64 = 6561;

/// Every submodule of `R^[m]`, sorted by size and then canonical generators.
#[derive(Clone, Debug)]
pub struct Lattice {
    ring: Arc<ChainRing>,
    m: usize,
    members: Vec<Submodule>,
    index: HashMap<Submodule, usize>,
}

/// One row of a lattice dump.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeEntry {
    pub generators: Vec<Vec<u32>>,
    pub size: u64,
    pub iso_profile: Vec<u32>,
    pub rank: usize,
}

impl Lattice {
    /// Enumerates the lattice by adjoining one generator at a time, `m` rounds
    /// deep; every submodule of `R^[m]` needs at most `m` generators.
    pub fn enumerate(ring: &Arc<ChainRing>, m: usize, guard: u64) -> Result<Self> {
        let needed = (ring.size() as u64)
            .checked_pow(m as u32)
            .unwrap_or(u64::MAX);
        if needed > guard {
            return Err(Error::GuardExceeded {
                what: format!("R^{m} over {}", ring.name()),
                needed,
                limit: guard,
            });
        }
        let vectors: Vec<Vec<u32>> = (0..needed as u32)
            .map(|mut c| {
                let mut v = vec![0; m];
                for slot in v.iter_mut().rev() {
                    *slot = c % ring.size();
                    c /= ring.size();
                }
                v
            })
            .collect();
        let cyclic: Vec<Submodule> = {
            let mut seen = HashSet::new();
            vectors
                .iter()
                .map(|v| {
                    Submodule::span(ring, m, std::slice::from_ref(v)).expect("vector length is m")
                })
                .filter(|s| seen.insert(s.clone()))
                .collect()
        };
        let mut all: HashSet<Submodule> = cyclic.iter().cloned().collect();
        let mut frontier: Vec<Submodule> = cyclic.clone();
        for _ in 1..m {
            let mut next = Vec::new();
            for a in &frontier {
                for c in &cyclic {
                    let s = a.sum(c).expect("same ambient");
                    if all.insert(s.clone()) {
                        next.push(s);
                    }
                }
            }
            frontier = next;
        }
        let mut members: Vec<Submodule> = all.into_iter().collect();
        members.sort();
        let index = members
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Self {
            ring: ring.clone(),
            m,
            members,
            index,
        })
    }

    pub fn ring(&self) -> &Arc<ChainRing> {
        &self.ring
    }

    pub fn ambient(&self) -> usize {
        self.m
    }

    pub fn members(&self) -> &[Submodule] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, sub: &Submodule) -> Option<usize> {
        self.index.get(sub).copied()
    }

    pub fn dump(&self) -> Vec<LatticeEntry> {
        self.members
            .iter()
            .map(|s| LatticeEntry {
                generators: s.generators().row_vecs(),
                size: s.size(),
                iso_profile: s.iso_profile().0.clone(),
                rank: s.module_rank(),
            })
            .collect()
    }
}

/// Möbius function of a submodule lattice, ordered by inclusion.
#[derive(Clone, Debug)]
pub struct MoebiusTable {
    lattice: Lattice,
    leq: Vec<bool>,
    mu: Vec<i64>,
}

impl MoebiusTable {
    pub fn new(lattice: Lattice) -> Self {
        let n = lattice.len();
        let mut leq = vec![false; n * n];
        for (i, b) in lattice.members.iter().enumerate() {
            for (j, v) in lattice.members.iter().enumerate() {
                leq[i * n + j] = v.contains(b).expect("one lattice");
            }
        }
        // Members are sorted by size, so every W strictly between B and V has
        // an index strictly between theirs.
        let mut mu = vec![0i64; n * n];
        for b in 0..n {
            mu[b * n + b] = 1;
            for v in b + 1..n {
                if !leq[b * n + v] {
                    continue;
                }
                let total: i64 = (b..v)
                    .filter(|w| leq[b * n + w] && leq[w * n + v])
                    .map(|w| mu[b * n + w])
                    .sum();
                mu[b * n + v] = -total;
            }
        }
        Self { lattice, leq, mu }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn leq(&self, b: usize, v: usize) -> bool {
        self.leq[b * self.lattice.len() + v]
    }

    /// `μ(B, V)` by lattice index.
    pub fn mu(&self, b: usize, v: usize) -> Result<i64> {
        if !self.leq(b, v) {
            return Err(Error::NotComparable(b, v));
        }
        Ok(self.mu[b * self.lattice.len() + v])
    }

    /// Nonzero entries as `(B, V, μ(B, V))`.
    pub fn triples(&self) -> Vec<(usize, usize, i64)> {
        let n = self.lattice.len();
        (0..n * n)
            .filter(|k| self.leq[*k] && self.mu[*k] != 0)
            .map(|k| (k / n, k % n, self.mu[k]))
            .collect()
    }
}

/// Number of cyclic submodules of size `q^t` in a module with the given
/// profile: `(|M[π^t]| − |M[π^{t−1}]|) / (q^t − q^{t−1})`.
pub fn count_rank1_in(q: u64, profile: &IsoProfile, t: u32) -> Result<u64> {
    if t == 0 || t as usize >= profile.0.len() {
        return Err(Error::Dimension(format!("t = {t} outside [1, s]")));
    }
    let hi = q.pow(profile.0[t as usize]);
    let lo = q.pow(profile.0[t as usize - 1]);
    let denom = q.pow(t) - q.pow(t - 1);
    let num = hi - lo;
    if !num.is_multiple_of(denom) {
        return Err(Error::Inconsistency(format!(
            "{num} not divisible by {denom}"
        )));
    }
    Ok(num / denom)
}

/// Rank-1 submodules of `R^[m]` with `q^t` elements.
pub fn count_rank1_submodules(ring: &ChainRing, m: usize, t: u32) -> Result<u64> {
    let s = ring.s();
    let lambda = vec![s; m];
    count_rank1_in(ring.q() as u64, &IsoProfile::from_partition(&lambda, s), t)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::linalg::axpy;

    fn ring(name: &str) -> Arc<ChainRing> {
        ChainRing::parse(name).unwrap()
    }

    /// All subsets of R^m closed under + and R-scaling (m = 2 over a ring of
    /// size 4 means 2^16 subsets).
    fn closure_oracle(r: &ChainRing, m: usize) -> usize {
        let n = r.size() as usize;
        let total = n.pow(m as u32);
        assert!(total <= 16);
        let vec_of = |mut c: usize| {
            let mut v = vec![0u32; m];
            for slot in v.iter_mut().rev() {
                *slot = (c % n) as u32;
                c /= n;
            }
            v
        };
        let code_of = |v: &[u32]| v.iter().fold(0usize, |acc, x| acc * n + *x as usize);
        let mut count = 0;
        for mask in 0u32..(1 << total) {
            if mask & 1 == 0 {
                continue;
            }
            let closed = (0..total).filter(|a| mask >> a & 1 == 1).all(|a| {
                (0..total).filter(|b| mask >> b & 1 == 1).all(|b| {
                    let mut v = vec_of(a);
                    axpy(r, &mut v, 1, &vec_of(b));
                    mask >> code_of(&v) & 1 == 1
                }) && (0..r.size()).all(|c| {
                    let v: Vec<u32> = vec_of(a).iter().map(|x| r.mul_code(c, *x)).collect();
                    mask >> code_of(&v) & 1 == 1
                })
            });
            if closed {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn lattice_sizes_match_closure_oracle() {
        let z4 = ring("Z4");
        assert_eq!(Lattice::enumerate(&z4, 1, 6561).unwrap().len(), 3);
        assert_eq!(closure_oracle(&z4, 2), 15);
        assert_eq!(Lattice::enumerate(&z4, 2, 6561).unwrap().len(), 15);
        let f2u2 = ring("F2u2");
        assert_eq!(
            Lattice::enumerate(&f2u2, 2, 6561).unwrap().len(),
            closure_oracle(&f2u2, 2)
        );
        let f2 = ring("F2");
        assert_eq!(closure_oracle(&f2, 2), 5);
        assert_eq!(Lattice::enumerate(&f2, 2, 6561).unwrap().len(), 5);
        assert_eq!(
            Lattice::enumerate(&f2, 3, 6561).unwrap().len(),
            1 + 7 + 7 + 1
        );
    }

    #[test]
    fn guard_is_enforced() {
        let z9 = ring("Z9");
        assert!(matches!(
            Lattice::enumerate(&z9, 5, 6561),
            Err(Error::GuardExceeded { .. })
        ));
        assert!(Lattice::enumerate(&z9, 2, 6561).is_ok());
    }

    #[test]
    fn lattice_is_sorted_and_duplicate_free() {
        let lat = Lattice::enumerate(&ring("Z8"), 2, 6561).unwrap();
        let set: BTreeSet<_> = lat.members().iter().cloned().collect();
        assert_eq!(set.len(), lat.len());
        assert!(lat.members().windows(2).all(|w| w[0] < w[1]));
        assert!(lat.members()[0].is_zero());
        assert_eq!(lat.members().last().unwrap().size(), 64);
    }

    #[test]
    fn moebius_on_chains_and_fields() {
        let z4 = ring("Z4");
        let chain = MoebiusTable::new(Lattice::enumerate(&z4, 1, 6561).unwrap());
        assert_eq!(chain.mu(0, 0).unwrap(), 1);
        assert_eq!(chain.mu(0, 1).unwrap(), -1);
        assert_eq!(chain.mu(0, 2).unwrap(), 0);
        assert_eq!(chain.mu(1, 2).unwrap(), -1);
        assert_eq!(chain.mu(2, 0), Err(Error::NotComparable(2, 0)));

        let f2 = ring("F2");
        let plane = MoebiusTable::new(Lattice::enumerate(&f2, 2, 6561).unwrap());
        assert_eq!(plane.mu(0, 4).unwrap(), 2);
    }

    /// Σ_{B ⊆ W ⊆ V} μ(B, W) = [B = V] on every interval.
    #[test]
    fn moebius_sums_telescope() {
        for name in ["Z4", "F2u2", "F3", "Z9"] {
            let t = MoebiusTable::new(Lattice::enumerate(&ring(name), 2, 6561).unwrap());
            let n = t.lattice().len();
            for b in 0..n {
                for v in 0..n {
                    if !t.leq(b, v) {
                        continue;
                    }
                    let total: i64 = (0..n)
                        .filter(|w| t.leq(b, *w) && t.leq(*w, v))
                        .map(|w| t.mu(b, w).unwrap())
                        .sum();
                    assert_eq!(total, i64::from(b == v));
                }
            }
        }
    }

    #[test]
    fn rank1_counts() {
        let z4 = ring("Z4");
        assert_eq!(count_rank1_submodules(&z4, 2, 1).unwrap(), 3);
        assert_eq!(count_rank1_submodules(&z4, 2, 2).unwrap(), 6);
        assert_eq!(count_rank1_submodules(&ring("F2"), 2, 1).unwrap(), 3);
        let lat = Lattice::enumerate(&z4, 2, 6561).unwrap();
        for t in 1..=2 {
            let direct = lat
                .members()
                .iter()
                .filter(|s| s.module_rank() == 1 && s.log_size() == t)
                .count();
            assert_eq!(direct as u64, count_rank1_submodules(&z4, 2, t).unwrap());
        }
        assert!(count_rank1_submodules(&z4, 2, 0).is_err());
        assert!(count_rank1_submodules(&z4, 2, 3).is_err());
    }
}
