use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chainring::ChainRing;
use crate::error::{Error, Result};

use super::howell::howell_rows_with_pivots;
use super::smith::smith_form;
use super::{axpy, scale, RMatrix};

/// `(c_0, …, c_s)` with `c_t = log_q |{y ∈ A : π^t y = 0}|`.
///
/// Two modules over a chain ring are isomorphic exactly when their profiles
/// agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IsoProfile(pub Vec<u32>);

impl IsoProfile {
    /// Profile of `⊕ R/Rπ^{λ_i}`.
    pub fn from_partition(lambda: &[u32], s: u32) -> Self {
        Self(
            (0..=s)
                .map(|t| lambda.iter().map(|l| (*l).min(t)).sum())
                .collect(),
        )
    }

    /// Minimal number of generators, `c_1`.
    pub fn rank(&self) -> usize {
        self.0.get(1).copied().unwrap_or(0) as usize
    }

    pub fn log_size(&self) -> u32 {
        *self.0.last().expect("profile has s+1 entries")
    }
}

/// A submodule of `R^[m]`, stored as its Howell-form generator matrix.
///
/// Equality and hashing look only at the canonical generators, so equal
/// submodules compare equal regardless of how they were generated.
#[derive(Clone)]
pub struct Submodule {
    gens: RMatrix,
    pivots: Vec<(usize, u32)>,
    profile: IsoProfile,
}

impl PartialEq for Submodule {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}

impl Eq for Submodule {}

impl Hash for Submodule {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.gens.ring().id().hash(state);
        self.gens.cols().hash(state);
        self.gens.data().hash(state);
    }
}

impl PartialOrd for Submodule {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by size, then by canonical generator codes.
impl Ord for Submodule {
    fn cmp(&self, other: &Self) -> Ordering {
        self.log_size()
            .cmp(&other.log_size())
            .then_with(|| self.gens.data().cmp(other.gens.data()))
            .then_with(|| self.gens.cols().cmp(&other.gens.cols()))
    }
}

impl fmt::Debug for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{:?}", self.gens.row_vecs())
    }
}

impl Serialize for Submodule {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Submodule", 3)?;
        st.serialize_field("generators", &self.gens.row_vecs())?;
        st.serialize_field("size", &self.size())?;
        st.serialize_field("iso_profile", &self.profile.0)?;
        st.end()
    }
}

impl Submodule {
    /// The span of `vectors` inside `R^[ambient]`.
    pub fn span(ring: &Arc<ChainRing>, ambient: usize, vectors: &[Vec<u32>]) -> Result<Self> {
        let m = RMatrix::from_rows(ring, ambient, vectors)?;
        Ok(Self::from_rows_unchecked(ring, ambient, m.row_vecs()))
    }

    pub(crate) fn from_rows_unchecked(
        ring: &Arc<ChainRing>,
        ambient: usize,
        vectors: Vec<Vec<u32>>,
    ) -> Self {
        let (rows, pivots) = howell_rows_with_pivots(ring, ambient, vectors);
        let gens = RMatrix::from_rows(ring, ambient, &rows).expect("Howell rows are well-formed");
        let s = ring.s();
        let lambda: Vec<u32> = smith_form(&gens)
            .invariants
            .0
            .iter()
            .map(|e| s - e)
            .collect();
        let profile = IsoProfile::from_partition(&lambda, s);
        debug_assert_eq!(
            profile.log_size(),
            pivots.iter().map(|(_, e)| s - e).sum::<u32>()
        );
        Self {
            gens,
            pivots,
            profile,
        }
    }

    pub fn zero(ring: &Arc<ChainRing>, ambient: usize) -> Self {
        Self::from_rows_unchecked(ring, ambient, Vec::new())
    }

    pub fn full(ring: &Arc<ChainRing>, ambient: usize) -> Self {
        Self::from_rows_unchecked(ring, ambient, RMatrix::identity(ring, ambient).row_vecs())
    }

    pub fn ring(&self) -> &Arc<ChainRing> {
        self.gens.ring()
    }

    pub fn ambient(&self) -> usize {
        self.gens.cols()
    }

    /// Canonical (Howell) generators, one per row.
    pub fn generators(&self) -> &RMatrix {
        &self.gens
    }

    /// `log_q |A|`.
    pub fn log_size(&self) -> u32 {
        self.profile.log_size()
    }

    pub fn size(&self) -> u64 {
        (self.ring().q() as u64).pow(self.log_size())
    }

    pub fn iso_profile(&self) -> &IsoProfile {
        &self.profile
    }

    /// Minimal number of generators.
    pub fn module_rank(&self) -> usize {
        self.profile.rank()
    }

    /// `log_q |{y ∈ A : π^t y = 0}|`.
    pub fn torsion_log(&self, t: u32) -> u32 {
        self.profile.0[t.min(self.ring().s()) as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.gens.rows() == 0
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.ring().id() != other.ring().id() {
            return Err(Error::MixedRing);
        }
        if self.ambient() != other.ambient() {
            return Err(Error::Dimension(format!(
                "submodules of R^{} and R^{}",
                self.ambient(),
                other.ambient()
            )));
        }
        Ok(())
    }

    pub fn contains_vector(&self, v: &[u32]) -> bool {
        if v.len() != self.ambient() {
            return false;
        }
        let ring = self.ring();
        let mut v = v.to_vec();
        for (k, &(j, e)) in self.pivots.iter().enumerate() {
            let (rep, quot) = ring.split_code(v[j], e);
            if rep != 0 {
                return false;
            }
            axpy(ring, &mut v, ring.neg_code(quot), self.gens.row(k));
        }
        v.iter().all(|c| *c == 0)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        self.same_space(other)?;
        Ok(other.log_size() <= self.log_size()
            && (0..other.gens.rows()).all(|i| self.contains_vector(other.gens.row(i))))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut rows = self.gens.row_vecs();
        rows.extend(other.gens.row_vecs());
        Ok(Self::from_rows_unchecked(self.ring(), self.ambient(), rows))
    }

    /// `A^‡ = {v : ⟨u, v⟩ = 0 for all u ∈ A}` under the standard inner product.
    pub fn annihilator(&self) -> Self {
        kernel(&self.gens)
    }

    /// `V ∩ W = (V^‡ + W^‡)^‡`.
    pub fn intersection(&self, other: &Self) -> Result<Self> {
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    /// `πA`.
    pub fn times_pi(&self) -> Self {
        let ring = self.ring();
        let pi = ring.pi_pow_code(1);
        let rows = self
            .gens
            .row_vecs()
            .iter()
            .map(|r| scale(ring, pi, r))
            .collect();
        Self::from_rows_unchecked(ring, self.ambient(), rows)
    }

    /// `{y : πy ∈ A}`, computed as `(π·A^‡)^‡`.
    pub fn pi_preimage(&self) -> Self {
        self.annihilator().times_pi().annihilator()
    }

    /// All elements, each exactly once.
    pub fn elements(&self) -> Vec<Vec<u32>> {
        let ring = self.ring();
        let s = ring.s();
        let mut out = vec![vec![0; self.ambient()]];
        for (k, &(_, e)) in self.pivots.iter().enumerate() {
            let reps = (ring.q() as u64).pow(s - e) as u32;
            let row = self.gens.row(k);
            let mut next = Vec::with_capacity(out.len() * reps as usize);
            for v in &out {
                for c in 0..reps {
                    let mut w = v.clone();
                    axpy(ring, &mut w, c, row);
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }
}

/// `{x ∈ R^[cols] : g·x = 0}`, read off from the Smith transforms of `g`.
pub fn kernel(g: &RMatrix) -> Submodule {
    let ring = g.ring();
    let s = ring.s();
    let f = smith_form(g);
    let n = g.cols();
    let exps = &f.invariants.0;
    let rows = (0..n)
        .map(|i| {
            let factor = match exps.get(i) {
                Some(e) => ring.pi_pow_code(s - e),
                None => 1,
            };
            scale(ring, factor, &f.right.column(i))
        })
        .collect();
    Submodule::from_rows_unchecked(ring, n, rows)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;

    fn ring(name: &str) -> Arc<ChainRing> {
        ChainRing::parse(name).unwrap()
    }

    fn all_vectors(r: &ChainRing, m: usize) -> Vec<Vec<u32>> {
        let n = r.size();
        (0..n.pow(m as u32))
            .map(|mut c| {
                let mut v = vec![0; m];
                for slot in v.iter_mut().rev() {
                    *slot = c % n;
                    c /= n;
                }
                v
            })
            .collect()
    }

    fn dot(r: &ChainRing, a: &[u32], b: &[u32]) -> u32 {
        a.iter()
            .zip(b)
            .fold(0, |acc, (x, y)| r.add_code(acc, r.mul_code(*x, *y)))
    }

    #[test]
    fn kernel_examples() {
        let z4 = ring("Z4");
        assert!(kernel(&RMatrix::identity(&z4, 2)).is_zero());
        assert_eq!(kernel(&RMatrix::zeros(&z4, 2, 2)), Submodule::full(&z4, 2));
        let k = kernel(&RMatrix::new(&z4, 1, 2, vec![2, 0]).unwrap());
        assert_eq!(k.size(), 8);
        let brute: BTreeSet<_> = all_vectors(&z4, 2)
            .into_iter()
            .filter(|v| (2 * v[0]) % 4 == 0)
            .collect();
        assert_eq!(brute.len(), 8);
        assert_eq!(k.elements().into_iter().collect::<BTreeSet<_>>(), brute);
    }

    #[test]
    fn annihilator_examples() {
        let z4 = ring("Z4");
        assert_eq!(
            Submodule::zero(&z4, 2).annihilator(),
            Submodule::full(&z4, 2)
        );
        assert!(Submodule::full(&z4, 2).annihilator().is_zero());
        let a = Submodule::span(&z4, 2, &[vec![2, 0]]).unwrap();
        let expected = Submodule::span(&z4, 2, &[vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(a.annihilator(), expected);
        assert_eq!(expected.size(), 8);
    }

    #[test]
    fn profiles_and_ranks() {
        let z4 = ring("Z4");
        let zero = Submodule::zero(&z4, 2);
        assert_eq!(zero.iso_profile().0, vec![0, 0, 0]);
        assert_eq!(zero.module_rank(), 0);
        let full = Submodule::full(&z4, 2);
        assert_eq!(full.iso_profile().0, vec![0, 2, 4]);
        assert_eq!(full.module_rank(), 2);
        let a = Submodule::span(&z4, 2, &[vec![2, 0]]).unwrap();
        assert_eq!(a.iso_profile().0, vec![0, 1, 1]);
        assert_eq!(a.module_rank(), 1);
        // span{(2,1)} ≅ Z/4 even though its Howell pivots are (2, 2).
        let b = Submodule::span(&z4, 2, &[vec![2, 1]]).unwrap();
        assert_eq!(b.iso_profile().0, vec![0, 1, 2]);
        assert_eq!(b.module_rank(), 1);
    }

    /// Every span of up to two vectors in R^2: size, enumeration, torsion,
    /// membership and annihilator facts against brute force.
    #[test]
    fn brute_force_cross_checks() {
        for name in ["Z4", "F2u2", "F3", "Z8"] {
            let r = ring(name);
            let vectors = all_vectors(&r, 2);
            let step = if r.size() > 4 { 7 } else { 1 };
            for a in vectors.iter().step_by(step) {
                for b in vectors.iter().step_by(step) {
                    let sub = Submodule::span(&r, 2, &[a.clone(), b.clone()]).unwrap();
                    let elems: BTreeSet<_> = sub.elements().into_iter().collect();
                    assert_eq!(elems.len() as u64, sub.size());
                    assert_eq!(sub.elements().len() as u64, sub.size());
                    for v in &vectors {
                        assert_eq!(sub.contains_vector(v), elems.contains(v));
                    }
                    for t in 0..=r.s() {
                        let pt = r.pi_pow_code(t);
                        let torsion = elems
                            .iter()
                            .filter(|y| y.iter().all(|c| r.mul_code(pt, *c) == 0))
                            .count();
                        assert_eq!(torsion as u64, (r.q() as u64).pow(sub.torsion_log(t)));
                    }
                    let ann = sub.annihilator();
                    let brute: BTreeSet<_> = vectors
                        .iter()
                        .filter(|v| elems.iter().all(|u| dot(&r, u, v) == 0))
                        .cloned()
                        .collect();
                    assert_eq!(ann.elements().into_iter().collect::<BTreeSet<_>>(), brute);
                    assert_eq!(sub.size() * ann.size(), (r.size() as u64).pow(2));
                    assert_eq!(ann.annihilator(), sub);
                    let pre: BTreeSet<_> = vectors
                        .iter()
                        .filter(|y| {
                            elems.contains(
                                &y.iter()
                                    .map(|c| r.mul_code(r.pi_pow_code(1), *c))
                                    .collect::<Vec<_>>(),
                            )
                        })
                        .cloned()
                        .collect();
                    assert_eq!(
                        sub.pi_preimage()
                            .elements()
                            .into_iter()
                            .collect::<BTreeSet<_>>(),
                        pre
                    );
                }
            }
        }
    }

    #[test]
    fn intersection_and_sum_match_sets() {
        let r = ring("Z4");
        let vectors = all_vectors(&r, 2);
        let subs: Vec<Submodule> = vectors
            .iter()
            .map(|v| Submodule::span(&r, 2, std::slice::from_ref(v)).unwrap())
            .collect();
        for a in &subs {
            for b in &subs {
                let ea: BTreeSet<_> = a.elements().into_iter().collect();
                let eb: BTreeSet<_> = b.elements().into_iter().collect();
                let meet: BTreeSet<_> = ea.intersection(&eb).cloned().collect();
                let i = a.intersection(b).unwrap();
                assert_eq!(i.elements().into_iter().collect::<BTreeSet<_>>(), meet);
                let sum = a.sum(b).unwrap();
                assert!(sum.contains(a).unwrap() && sum.contains(b).unwrap());
                assert_eq!(a.contains(b).unwrap(), eb.is_subset(&ea));
            }
        }
    }

    #[test]
    fn mixed_ambients_are_rejected() {
        let r = ring("Z4");
        let a = Submodule::zero(&r, 2);
        let b = Submodule::zero(&r, 3);
        assert!(a.contains(&b).is_err());
        let c = Submodule::zero(&ring("F4"), 2);
        assert_eq!(a.sum(&c), Err(Error::MixedRing));
    }
}
