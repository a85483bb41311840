//! The tuple space `(R^[m])^n ≅ Mat_{m,n}(R)` and its partitions by rank
//! support, isomorphism type of the support, rank weight and Hamming data.
//!
//! A tuple `α = (α_1, …, α_n)` is stored as the `m × n` matrix whose columns
//! are the `α_i`. Elements are indexed by their column-major entry codes read
//! as a base-`|R|` numeral, first entry most significant, so index 0 is the
//! zero tuple.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chainring::ChainRing;
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::linalg::{IsoProfile, RMatrix, SmithInvariants, Submodule};

/// Default cap on the number of tuples a space may hold.
pub const DEFAULT_SPACE_GUARD: u64 = 6561;

/// `(R^[m])^n`, fully enumerated.
pub struct TupleSpace {
    ring: Arc<ChainRing>,
    m: usize,
    n: usize,
    len: usize,
    entries: Vec<u32>,
}

impl fmt::Debug for TupleSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TupleSpace({})", self.name())
    }
}

impl TupleSpace {
    pub fn new(ring: &Arc<ChainRing>, m: usize, n: usize, guard: u64) -> Result<Arc<Self>> {
        if m == 0 || n == 0 {
            return Err(Error::Dimension(format!(
                "m = {m}, n = {n}; both must be ≥ 1"
            )));
        }
        let needed = (ring.size() as u64)
            .checked_pow((m * n) as u32)
            .unwrap_or(u64::MAX);
        if needed > guard {
            return Err(Error::GuardExceeded {
                what: format!("Mat_{{{m},{n}}}({})", ring.name()),
                needed,
                limit: guard,
            });
        }
        let len = needed as usize;
        let k = m * n;
        let size = ring.size();
        let mut entries = vec![0u32; len * k];
        for (idx, chunk) in entries.chunks_mut(k).enumerate() {
            let mut c = idx as u32;
            for slot in chunk.iter_mut().rev() {
                *slot = c % size;
                c /= size;
            }
        }
        Ok(Arc::new(Self {
            ring: ring.clone(),
            m,
            n,
            len,
            entries,
        }))
    }

    pub fn ring(&self) -> &Arc<ChainRing> {
        &self.ring
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of tuples, `|R|^{mn}`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn name(&self) -> String {
        format!("{} m={} n={}", self.ring.name(), self.m, self.n)
    }

    /// Same ring and shape.
    pub fn same_as(&self, other: &Self) -> bool {
        self.ring.id() == other.ring.id() && self.m == other.m && self.n == other.n
    }

    /// Column-major entry codes of tuple `idx`.
    pub fn entries(&self, idx: usize) -> &[u32] {
        let k = self.m * self.n;
        &self.entries[idx * k..(idx + 1) * k]
    }

    /// The `j`-th component `α_j ∈ R^[m]`.
    pub fn column(&self, idx: usize, j: usize) -> &[u32] {
        &self.entries(idx)[j * self.m..(j + 1) * self.m]
    }

    pub fn columns(&self, idx: usize) -> Vec<Vec<u32>> {
        (0..self.n).map(|j| self.column(idx, j).to_vec()).collect()
    }

    /// The tuple as an `m × n` matrix.
    pub fn matrix(&self, idx: usize) -> RMatrix {
        let e = self.entries(idx);
        let mut data = vec![0; self.m * self.n];
        for j in 0..self.n {
            for i in 0..self.m {
                data[i * self.n + j] = e[j * self.m + i];
            }
        }
        RMatrix::new(&self.ring, self.m, self.n, data).expect("shape matches")
    }

    /// Index of the tuple with the given column-major entries.
    pub fn index_of(&self, entries: &[u32]) -> Result<usize> {
        if entries.len() != self.m * self.n {
            return Err(Error::Dimension(format!(
                "{} entries for Mat_{{{},{}}}",
                entries.len(),
                self.m,
                self.n
            )));
        }
        let size = self.ring.size();
        if let Some(bad) = entries.iter().find(|c| **c >= size) {
            return Err(Error::Malformed(format!(
                "{bad} is not an element code of {}",
                self.ring.name()
            )));
        }
        Ok(self.encode(entries.iter().copied()))
    }

    /// Index of an `m × n` matrix.
    pub fn index_of_matrix(&self, a: &RMatrix) -> Result<usize> {
        if a.ring().id() != self.ring.id() {
            return Err(Error::MixedRing);
        }
        if a.rows() != self.m || a.cols() != self.n {
            return Err(Error::Dimension(format!(
                "{}x{} matrix in Mat_{{{},{}}}",
                a.rows(),
                a.cols(),
                self.m,
                self.n
            )));
        }
        Ok(self.encode((0..self.n).flat_map(|j| (0..self.m).map(move |i| a.code(i, j)))))
    }

    fn encode(&self, codes: impl Iterator<Item = u32>) -> usize {
        let size = self.ring.size() as usize;
        codes.fold(0usize, |acc, c| acc * size + c as usize)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let r = &self.ring;
        self.encode(
            self.entries(a)
                .iter()
                .zip(self.entries(b))
                .map(|(x, y)| r.add_code(*x, *y)),
        )
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        let r = &self.ring;
        self.encode(
            self.entries(a)
                .iter()
                .zip(self.entries(b))
                .map(|(x, y)| r.sub_code(*x, *y)),
        )
    }

    pub fn neg(&self, a: usize) -> usize {
        let r = &self.ring;
        self.encode(self.entries(a).iter().map(|x| r.neg_code(*x)))
    }

    /// `c·α`.
    pub fn scale(&self, c: u32, a: usize) -> usize {
        let r = &self.ring;
        self.encode(self.entries(a).iter().map(|x| r.mul_code(c, *x)))
    }

    /// `⟨α, β⟩ = Σ_i α_i · β_i`, the trace inner product of the matrices.
    #[inline]
    pub fn inner(&self, a: usize, b: usize) -> u32 {
        let r = &self.ring;
        self.entries(a)
            .iter()
            .zip(self.entries(b))
            .fold(0, |acc, (x, y)| r.add_code(acc, r.mul_code(*x, *y)))
    }
}

/// `σ(α)`: the span of the components of `α` in `R^[m]`.
pub fn rank_support(space: &TupleSpace, idx: usize) -> Submodule {
    Submodule::span(space.ring(), space.m(), &space.columns(idx)).expect("columns have length m")
}

/// `rank_R(σ(α))`.
pub fn rank_weight(space: &TupleSpace, idx: usize) -> usize {
    rank_support(space, idx).module_rank()
}

/// Which factor of the pairing a partition lives on: `M^Ω` (left, the `Λ`
/// partitions) or `N^Ω` (right, the `Ψ` partitions). Over a commutative ring
/// both are the same tuple space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// What the elements of a class have in common.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ClassLabel {
    Support(Submodule),
    Iso(IsoProfile),
    Rank(usize),
    /// Character sums over the classes of the partition being dualized.
    Signature(Vec<CycInt>),
    SmithClass(SmithInvariants),
    HammingSupport(Vec<usize>),
    HammingWeight(usize),
}

/// A partition of a tuple space.
///
/// Class ids are assigned in order of first occurrence along the element
/// order, so two partitions are equal exactly when their `class_of` arrays
/// are identical.
#[derive(Clone, Debug)]
pub struct Partition {
    space: Arc<TupleSpace>,
    side: Side,
    class_of: Vec<u32>,
    labels: Vec<ClassLabel>,
    sizes: Vec<u64>,
    reps: Vec<usize>,
}

/// JSON form of a partition.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionDump {
    pub space: String,
    pub side: Side,
    pub classes: Vec<ClassDump>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassDump {
    pub label: ClassLabel,
    pub size: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<Vec<u32>>>,
}

impl Partition {
    /// Groups elements by key. `keys[i]` is the key of element `i`.
    pub fn from_keys<K, F>(space: &Arc<TupleSpace>, side: Side, keys: Vec<K>, label: F) -> Self
    where
        K: Eq + Hash,
        F: Fn(&K) -> ClassLabel,
    {
        assert_eq!(keys.len(), space.len(), "one key per element");
        let mut ids: HashMap<&K, u32> = HashMap::new();
        let mut class_of = Vec::with_capacity(keys.len());
        let mut labels = Vec::new();
        let mut sizes = Vec::new();
        let mut reps = Vec::new();
        for (i, k) in keys.iter().enumerate() {
            let next = labels.len() as u32;
            let id = *ids.entry(k).or_insert_with(|| {
                labels.push(label(k));
                sizes.push(0);
                reps.push(i);
                next
            });
            sizes[id as usize] += 1;
            class_of.push(id);
        }
        Self {
            space: space.clone(),
            side,
            class_of,
            labels,
            sizes,
            reps,
        }
    }

    pub fn space(&self) -> &Arc<TupleSpace> {
        &self.space
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Number of classes.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn class_of(&self, idx: usize) -> usize {
        self.class_of[idx] as usize
    }

    /// Class id of every element, in element order.
    pub fn assignment(&self) -> &[u32] {
        &self.class_of
    }

    pub fn label(&self, class: usize) -> &ClassLabel {
        &self.labels[class]
    }

    pub fn labels(&self) -> &[ClassLabel] {
        &self.labels
    }

    pub fn size(&self, class: usize) -> u64 {
        self.sizes[class]
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    /// The first element of the class.
    pub fn representative(&self, class: usize) -> usize {
        self.reps[class]
    }

    pub fn members(&self, class: usize) -> Vec<usize> {
        self.class_of
            .iter()
            .enumerate()
            .filter(|(_, c)| **c as usize == class)
            .map(|(i, _)| i)
            .collect()
    }

    /// Members of every class, indexed by class id.
    pub fn all_members(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .sizes
            .iter()
            .map(|s| Vec::with_capacity(*s as usize))
            .collect();
        for (i, c) in self.class_of.iter().enumerate() {
            out[*c as usize].push(i);
        }
        out
    }

    /// The same classes, viewed on the other side of the pairing.
    pub fn mirrored(&self) -> Self {
        Self {
            side: self.side.flip(),
            ..self.clone()
        }
    }

    fn comparable(&self, other: &Self) -> Result<()> {
        if self.space.same_as(&other.space) && self.side == other.side {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Self) -> Result<bool> {
        self.comparable(other)?;
        let mut image: Vec<Option<u32>> = vec![None; self.len()];
        for (mine, theirs) in self.class_of.iter().zip(&other.class_of) {
            match image[*mine as usize] {
                None => image[*mine as usize] = Some(*theirs),
                Some(t) if t != *theirs => return Ok(false),
                Some(_) => {}
            }
        }
        Ok(true)
    }

    /// Same classes, labels ignored.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.comparable(other)?;
        Ok(self.class_of == other.class_of)
    }

    /// The class containing only the zero tuple, if there is one.
    pub fn zero_class(&self) -> Option<usize> {
        let c = self.class_of(0);
        (self.sizes[c] == 1).then_some(c)
    }

    pub fn dump(&self, with_members: bool) -> PartitionDump {
        let members = with_members.then(|| self.all_members());
        PartitionDump {
            space: self.space.name(),
            side: self.side,
            classes: (0..self.len())
                .map(|c| ClassDump {
                    label: self.labels[c].clone(),
                    size: self.sizes[c],
                    members: members.as_ref().map(|all| {
                        all[c]
                            .iter()
                            .map(|i| self.space.entries(*i).to_vec())
                            .collect()
                    }),
                })
                .collect(),
        }
    }
}

pub fn refines(p: &Partition, q: &Partition) -> Result<bool> {
    p.refines(q)
}

pub fn partitions_equal(p: &Partition, q: &Partition) -> Result<bool> {
    p.equals(q)
}

fn supports(space: &TupleSpace) -> Vec<Submodule> {
    (0..space.len())
        .into_par_iter()
        .map(|i| rank_support(space, i))
        .collect()
}

/// `Λ_1` (left) or `Ψ_1` (right): same rank support.
pub fn partition_by_support(space: &Arc<TupleSpace>, side: Side) -> Partition {
    Partition::from_keys(space, side, supports(space), |s| {
        ClassLabel::Support(s.clone())
    })
}

/// `Λ_2` / `Ψ_2`: isomorphic rank supports.
pub fn partition_by_iso(space: &Arc<TupleSpace>, side: Side) -> Partition {
    let keys = supports(space)
        .into_iter()
        .map(|s| s.iso_profile().clone())
        .collect();
    Partition::from_keys(space, side, keys, |p| ClassLabel::Iso(p.clone()))
}

/// `Λ_3` / `Ψ_3`: same rank weight.
pub fn partition_by_rank(space: &Arc<TupleSpace>, side: Side) -> Partition {
    let keys = supports(space)
        .into_iter()
        .map(|s| s.module_rank())
        .collect();
    Partition::from_keys(space, side, keys, |r| ClassLabel::Rank(*r))
}

/// Hamming support and Hamming weight partitions of `B^Ω` with
/// `B = R^[m]`: a component counts as nonzero when any of its entries is.
pub fn hamming_partitions(space: &Arc<TupleSpace>, side: Side) -> (Partition, Partition) {
    let support_sets: Vec<Vec<usize>> = (0..space.len())
        .map(|i| {
            (0..space.n())
                .filter(|j| space.column(i, *j).iter().any(|c| *c != 0))
                .collect()
        })
        .collect();
    let weights = support_sets.iter().map(Vec::len).collect();
    let by_support = Partition::from_keys(space, side, support_sets, |s| {
        ClassLabel::HammingSupport(s.clone())
    });
    let by_weight = Partition::from_keys(space, side, weights, |w| ClassLabel::HammingWeight(*w));
    (by_support, by_weight)
}
