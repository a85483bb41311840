//! Association-scheme checks for translation-invariant relations on the
//! tuple space, the Smith-class partition and the rank-metric suite.
//!
//! A partition `Γ` of an abelian group `H` defines the relations
//! `(x, y) ∈ R_U ⟺ y − x ∈ U`. These form an association scheme exactly when
//! `{0}` is a class, classes are closed under negation, and
//! `N_{U,V}(w) = #{η ∈ U : w − η ∈ V}` depends only on the class of `w`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::chainring::{ChainRing, CharChoice};
use crate::cyclotomic::CycInt;
use crate::duality::{is_reflexive, Pairing};
use crate::error::{Error, Result};
use crate::linalg::{rank, smith_form, RMatrix};
use crate::rankspace::{ClassLabel, Partition, Side, TupleSpace};

/// Two points of one class with different intersection numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeWitness {
    pub u: usize,
    pub v: usize,
    pub w_class: usize,
    /// Tuple indices.
    pub w: usize,
    pub z: usize,
    pub count_w: u64,
    pub count_z: u64,
    /// Column-major entries of `w` and `z`.
    pub w_entries: Vec<u32>,
    pub z_entries: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeVerdict {
    pub is_scheme: bool,
    pub negation_closed: bool,
    pub witness: Option<SchemeWitness>,
}

/// `#{η ∈ U : w − η ∈ V}` by direct enumeration.
pub fn intersection_number(p: &Partition, u: usize, v: usize, w: usize) -> u64 {
    let sp = p.space();
    (0..sp.len())
        .filter(|eta| p.class_of(*eta) == u && p.class_of(sp.sub(w, *eta)) == v)
        .count() as u64
}

/// Decides whether the difference relations of `p` form an association
/// scheme. Requires `{0}` to be a class. A failure carries the first
/// violating `(U, V, w, z)` in lexicographic order.
pub fn check_association_scheme(p: &Partition) -> Result<SchemeVerdict> {
    if p.zero_class().is_none() {
        return Err(Error::MissingClass("{0} is not a class".into()));
    }
    let sp = p.space();
    let k = p.len();
    let members = p.all_members();
    let negation_closed = members.iter().all(|ms| {
        let target = p.class_of(sp.neg(ms[0]));
        ms.iter().all(|x| p.class_of(sp.neg(*x)) == target)
    });
    if !negation_closed {
        return Ok(SchemeVerdict {
            is_scheme: false,
            negation_closed,
            witness: None,
        });
    }

    let tables: Vec<Vec<u32>> = (0..sp.len())
        .into_par_iter()
        .map(|w| {
            let mut t = vec![0u32; k * k];
            for eta in 0..sp.len() {
                t[p.class_of(eta) * k + p.class_of(sp.sub(w, eta))] += 1;
            }
            t
        })
        .collect();

    for u in 0..k {
        for v in 0..k {
            let cell = u * k + v;
            for w in 0..sp.len() {
                let class = p.class_of(w);
                let z = members[class]
                    .iter()
                    .copied()
                    .find(|z| tables[*z][cell] != tables[w][cell]);
                if let Some(z) = z {
                    let witness = SchemeWitness {
                        u,
                        v,
                        w_class: class,
                        w,
                        z,
                        count_w: intersection_number(p, u, v, w),
                        count_z: intersection_number(p, u, v, z),
                        w_entries: sp.entries(w).to_vec(),
                        z_entries: sp.entries(z).to_vec(),
                    };
                    if witness.count_w != tables[w][cell] as u64
                        || witness.count_z != tables[z][cell] as u64
                        || witness.count_w == witness.count_z
                    {
                        return Err(Error::Inconsistency(
                            "scheme witness did not re-check".into(),
                        ));
                    }
                    return Ok(SchemeVerdict {
                        is_scheme: false,
                        negation_closed,
                        witness: Some(witness),
                    });
                }
            }
        }
    }
    Ok(SchemeVerdict {
        is_scheme: true,
        negation_closed,
        witness: None,
    })
}

/// `γ = η_1 α η_2` for invertible `η_1, η_2`, decided by Smith invariants.
pub fn matrix_equivalent(a: &RMatrix, c: &RMatrix) -> Result<bool> {
    if a.ring().id() != c.ring().id() {
        return Err(Error::MixedRing);
    }
    if a.rows() != c.rows() || a.cols() != c.cols() {
        return Err(Error::Dimension("matrices of different shapes".into()));
    }
    Ok(smith_form(a).invariants == smith_form(c).invariants)
}

/// `Φ`: matrices grouped by rank.
pub fn rank_partition(space: &Arc<TupleSpace>, side: Side) -> Partition {
    let keys: Vec<usize> = (0..space.len())
        .into_par_iter()
        .map(|i| rank(&space.matrix(i)))
        .collect();
    Partition::from_keys(space, side, keys, |r| ClassLabel::Rank(*r))
}

/// `Δ`: matrices grouped by the equivalence class of their transpose.
pub fn delta_partition(space: &Arc<TupleSpace>) -> Result<Partition> {
    let keys = (0..space.len())
        .into_par_iter()
        .map(|i| {
            let a = space.matrix(i);
            let t = smith_form(&a.transpose()).invariants;
            if t != smith_form(&a).invariants {
                return Err(Error::Inconsistency(format!(
                    "transpose changed the Smith class of {a:?}"
                )));
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Partition::from_keys(space, Side::Left, keys, |s| {
        ClassLabel::SmithClass(s.clone())
    }))
}

/// `Σ_{rk β = 1} f(α, β)` for every `α`.
pub fn rank1_sums(f: &Pairing) -> Result<Vec<CycInt>> {
    let phi = rank_partition(f.space(), Side::Right);
    let class = (0..phi.len())
        .find(|c| phi.label(*c) == &ClassLabel::Rank(1))
        .ok_or_else(|| Error::MissingClass("rank 1".into()))?;
    Ok((0..f.space().len())
        .into_par_iter()
        .map(|a| f.class_sums(a, &phi).swap_remove(class))
        .collect())
}

/// Whether `α` and `γ` have the same rank-1 character sum.
pub fn rank1_signature_equal(sums: &[CycInt], a: usize, c: usize) -> bool {
    sums[a] == sums[c]
}

/// One row of the rank-metric scheme table.
#[derive(Clone, Debug, Serialize)]
pub struct SchemeRow {
    pub ring: String,
    pub m: usize,
    pub n: usize,
    pub is_field: bool,
    pub is_scheme: bool,
    pub witness: Option<SchemeWitness>,
    /// `Φ` is reflexive.
    #[serde(rename = "reflexivity_crosscheck")]
    pub reflexive: bool,
    /// The scheme verdict agrees with reflexivity and with `R` being a field.
    pub consistent: bool,
}

/// Runs the scheme check and the reflexivity cross-check on `Mat_{m,n}(R)`
/// for each ring.
pub fn theorem_5_2_suite(
    rings: &[Arc<ChainRing>],
    m: usize,
    n: usize,
    guard: u64,
    choice: CharChoice,
) -> Result<Vec<SchemeRow>> {
    if m < 2 || n < 2 {
        return Err(Error::Dimension(format!(
            "needs m, n ≥ 2, got m = {m}, n = {n}"
        )));
    }
    rings
        .iter()
        .map(|ring| {
            let space = TupleSpace::new(ring, m, n, guard)?;
            let phi = rank_partition(&space, Side::Right);
            let verdict = check_association_scheme(&phi)?;
            let reflexive = is_reflexive(&Pairing::new(&space, choice), &phi)?.reflexive;
            Ok(SchemeRow {
                ring: ring.name(),
                m,
                n,
                is_field: ring.is_field(),
                is_scheme: verdict.is_scheme,
                witness: verdict.witness,
                reflexive,
                consistent: verdict.is_scheme == reflexive && verdict.is_scheme == ring.is_field(),
            })
        })
        .collect()
}
