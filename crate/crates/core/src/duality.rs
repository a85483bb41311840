//! The character pairing on the tuple space, dual partitions, generalized
//! Krawtchouk matrices and the closed forms for their entries.
//!
//! `f(α, β) = χ(⟨α, β⟩)` with `⟨α, β⟩ = Σ_i α_i·β_i`. Every character sum is
//! accumulated as a histogram of exponents of `ζ` and then canonicalized, so
//! all comparisons are exact.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::chainring::CharChoice;
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::linalg::{MoebiusTable, Submodule};
use crate::rankspace::{ClassLabel, Partition, Side, TupleSpace};

/// `f(α, β) = χ(⟨α, β⟩)` on a tuple space paired with itself.
#[derive(Clone, Debug)]
pub struct Pairing {
    space: Arc<TupleSpace>,
    choice: CharChoice,
}

impl Pairing {
    pub fn new(space: &Arc<TupleSpace>, choice: CharChoice) -> Self {
        Self {
            space: space.clone(),
            choice,
        }
    }

    pub fn space(&self) -> &Arc<TupleSpace> {
        &self.space
    }

    pub fn choice(&self) -> CharChoice {
        self.choice
    }

    /// Order of the roots of unity the character takes values in.
    pub fn order(&self) -> u32 {
        self.space.ring().char_order()
    }

    /// `k` with `f(α, β) = ζ^k`.
    #[inline]
    pub fn exponent(&self, a: usize, b: usize) -> u32 {
        self.space
            .ring()
            .phi_code(self.space.inner(a, b), self.choice)
    }

    pub fn pair(&self, a: usize, b: usize) -> CycInt {
        CycInt::root(self.order(), self.exponent(a, b) as i64)
            .expect("character order is a prime power")
    }

    /// Only the zero tuple pairs trivially with everything.
    pub fn is_non_degenerate(&self) -> bool {
        (0..self.space.len())
            .into_par_iter()
            .filter(|b| (0..self.space.len()).all(|a| self.exponent(a, *b) == 0))
            .count()
            == 1
    }

    /// `(Σ_{y ∈ B} f(x, y))_{B ∈ p}`. The pairing is symmetric, so this serves
    /// both the left and the right sums.
    pub fn class_sums(&self, x: usize, p: &Partition) -> Vec<CycInt> {
        let ord = self.order() as usize;
        let mut counts = vec![0u64; p.len() * ord];
        for (y, c) in p.assignment().iter().enumerate() {
            counts[*c as usize * ord + self.exponent(x, y) as usize] += 1;
        }
        counts
            .chunks(ord)
            .map(|h| {
                CycInt::from_exponent_counts(ord as u32, h)
                    .expect("histogram has one slot per exponent")
            })
            .collect()
    }

    /// `Σ_{y ∈ ys} f(x, y)`, adding one root of unity at a time.
    pub fn direct_sum(&self, x: usize, ys: &[usize]) -> Result<CycInt> {
        let mut total = CycInt::zero(self.order())?;
        for y in ys {
            total = total.try_add(&self.pair(x, *y))?;
        }
        Ok(total)
    }

    fn check_space(&self, p: &Partition) -> Result<()> {
        if self.space.same_as(p.space()) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Groups every element by its class-sum signature against `p`.
    fn dual(&self, p: &Partition) -> Result<Partition> {
        self.check_space(p)?;
        let keys: Vec<Vec<CycInt>> = (0..self.space.len())
            .into_par_iter()
            .map(|x| self.class_sums(x, p))
            .collect();
        Ok(Partition::from_keys(
            &self.space,
            p.side().flip(),
            keys,
            |sig| ClassLabel::Signature(sig.clone()),
        ))
    }
}

/// `l(Γ)` for a partition `Γ` of the right factor.
pub fn left_dual_partition(f: &Pairing, gamma: &Partition) -> Result<Partition> {
    if gamma.side() != Side::Right {
        return Err(Error::SpaceMismatch);
    }
    f.dual(gamma)
}

/// `r(Λ)` for a partition `Λ` of the left factor.
pub fn right_dual_partition(f: &Pairing, lambda: &Partition) -> Result<Partition> {
    if lambda.side() != Side::Left {
        return Err(Error::SpaceMismatch);
    }
    f.dual(lambda)
}

/// `l` or `r`, whichever applies to the side `p` lives on.
pub fn dual_partition(f: &Pairing, p: &Partition) -> Result<Partition> {
    f.dual(p)
}

/// A generalized Krawtchouk matrix indexed by `Λ × Γ`.
///
/// With `side == Left` this is `ρ(A, B) = Σ_{b ∈ B} f(a, b)` for `a ∈ A`;
/// with `side == Right` it is `ε(A, B) = Σ_{c ∈ A} f(c, d)` for `d ∈ B`.
#[derive(Clone, Debug)]
pub struct KrawtchoukMatrix {
    side: Side,
    rows: Partition,
    cols: Partition,
    entries: Vec<Vec<CycInt>>,
}

/// A matrix entry as emitted: an integer where integral, else coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum EntryDump {
    Integer(i64),
    Cyclotomic(CycInt),
}

#[derive(Clone, Debug, Serialize)]
pub struct KrawtchoukDump {
    pub side: Side,
    pub space: String,
    pub rows: Vec<ClassLabel>,
    pub cols: Vec<ClassLabel>,
    pub entries: Vec<Vec<EntryDump>>,
}

impl KrawtchoukMatrix {
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn rows(&self) -> &Partition {
        &self.rows
    }

    pub fn cols(&self) -> &Partition {
        &self.cols
    }

    pub fn entry(&self, a: usize, b: usize) -> &CycInt {
        &self.entries[a][b]
    }

    pub fn entries(&self) -> &[Vec<CycInt>] {
        &self.entries
    }

    /// All entries as integers, if every one is integral.
    pub fn as_integers(&self) -> Option<Vec<Vec<i64>>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(CycInt::as_integer).collect())
            .collect()
    }

    pub fn dump(&self) -> KrawtchoukDump {
        KrawtchoukDump {
            side: self.side,
            space: self.rows.space().name(),
            rows: self.rows.labels().to_vec(),
            cols: self.cols.labels().to_vec(),
            entries: self
                .entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| match e.as_integer() {
                            Some(k) => EntryDump::Integer(k),
                            None => EntryDump::Cyclotomic(e.clone()),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// One line per row, entries separated by commas; non-integral entries
    /// are written as their coefficient vectors joined by `;`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.entries {
            let cells: Vec<String> = row
                .iter()
                .map(|e| match e.as_integer() {
                    Some(k) => k.to_string(),
                    None => e
                        .coeffs()
                        .iter()
                        .map(i64::to_string)
                        .collect::<Vec<_>>()
                        .join(";"),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Builds `ρ` (`side == Left`) or `ε` (`side == Right`) for a partition `Λ`
/// of the left factor and `Γ` of the right factor, after checking that `Λ`
/// refines `l(Γ)` (resp. `Γ` refines `r(Λ)`).
pub fn krawtchouk(
    f: &Pairing,
    lambda: &Partition,
    gamma: &Partition,
    side: Side,
) -> Result<KrawtchoukMatrix> {
    if lambda.side() != Side::Left || gamma.side() != Side::Right {
        return Err(Error::SpaceMismatch);
    }
    f.check_space(lambda)?;
    f.check_space(gamma)?;
    let (summed, indexed) = match side {
        Side::Left => (gamma, lambda),
        Side::Right => (lambda, gamma),
    };
    let dual = f.dual(summed)?;
    if !indexed.refines(&dual)? {
        let (which, of) = match side {
            Side::Left => ("Λ", "l(Γ)"),
            Side::Right => ("Γ", "r(Λ)"),
        };
        return Err(Error::RefinementViolated(format!(
            "{which} does not refine {of}"
        )));
    }
    let members = indexed.all_members();
    let mut by_index = Vec::with_capacity(indexed.len());
    for (c, ms) in members.iter().enumerate() {
        let first = f.class_sums(ms[0], summed);
        let last = f.class_sums(*ms.last().expect("classes are non-empty"), summed);
        if first != last {
            return Err(Error::Inconsistency(format!(
                "Krawtchouk entry depends on the representative of class {c}"
            )));
        }
        by_index.push(first);
    }
    let entries = match side {
        Side::Left => by_index,
        Side::Right => (0..lambda.len())
            .map(|a| (0..gamma.len()).map(|b| by_index[b][a].clone()).collect())
            .collect(),
    };
    Ok(KrawtchoukMatrix {
        side,
        rows: lambda.clone(),
        cols: gamma.clone(),
        entries,
    })
}

/// `Σ_{B ≤ V ∩ A^‡} |B|^n μ(B, V)`, the value of `Σ_{τ(β) = V} f(α, β)` for
/// any `α` with `σ(α) = A`.
pub fn closed_form_support(
    table: &MoebiusTable,
    a: &Submodule,
    v: &Submodule,
    n: usize,
) -> Result<i64> {
    let lat = table.lattice();
    let vi = lat
        .index_of(v)
        .ok_or_else(|| Error::MissingClass(format!("{v:?} is not in the lattice")))?;
    let meet = v.intersection(&a.annihilator())?;
    let mi = lat
        .index_of(&meet)
        .ok_or_else(|| Error::MissingClass(format!("{meet:?} is not in the lattice")))?;
    let mut total = 0i64;
    for (bi, b) in lat.members().iter().enumerate() {
        if table.leq(bi, mi) {
            let size = i64::try_from(b.size()).expect("lattice sizes fit in i64");
            let term = size
                .checked_pow(n as u32)
                .and_then(|p| p.checked_mul(table.mu(bi, vi).expect("B ≤ V ∩ A^‡ ≤ V")))
                .expect("closed form overflowed i64");
            total = total.checked_add(term).expect("closed form overflowed i64");
        }
    }
    Ok(total)
}

fn ipow(q: i64, e: u32) -> i64 {
    q.checked_pow(e).expect("power overflowed i64")
}

/// The three-case value of `Σ_{τ(β) = V} f(α, β)` for a cyclic `V`.
pub fn closed_form_rank1(a: &Submodule, v: &Submodule, n: usize) -> Result<i64> {
    if v.module_rank() != 1 {
        return Err(Error::NotRankOne);
    }
    let q = v.ring().q() as i64;
    let t = v.log_size();
    let n = n as u32;
    let ann = a.annihilator();
    Ok(if !ann.contains(&v.times_pi())? {
        0
    } else if !ann.contains(v)? {
        -ipow(q, (t - 1) * n)
    } else {
        ipow(q, t * n) - ipow(q, (t - 1) * n)
    })
}

/// `Σ_{rank τ(β) = 1} f(α, β)` from the torsion profile `c` of `A^‡`, with
/// `A = σ(α) ≤ R^[m]`.
pub fn closed_form_rank1_total(a: &Submodule, n: usize) -> Result<i64> {
    let ring = a.ring();
    let q = ring.q() as i64;
    let s = ring.s();
    let m = a.ambient() as u32;
    let n = n as u32;
    let ann = a.annihilator();
    let c = |i: u32| ann.torsion_log(i);
    let mut h = 0i64;
    for t in 1..=s {
        h += ipow(q, c(t) + t * (n - 1) + 1);
        h -= ipow(q, c(t - 1) + t * (n - 1) + 1);
    }
    for t in 1..s {
        h += ipow(q, c(t - 1) + t * (n - 1) + m);
        h -= ipow(q, c(t) + t * (n - 1) + m);
    }
    h -= ipow(q, m) - 1;
    if h % (q - 1) != 0 {
        return Err(Error::Inconsistency(format!(
            "{h} is not divisible by q - 1 = {}",
            q - 1
        )));
    }
    Ok(h / (q - 1))
}

/// `Σ_{supp(β) = I} f(α, β) = (−1)^{|I ∩ D|} (Q − 1)^{|I − D|}` for `D = supp(α)`
/// and `|B| = Q`.
pub fn hamming_support_sum(group_order: i64, support: &[usize], i: &[usize]) -> i64 {
    let inside = i.iter().filter(|x| support.contains(x)).count() as u32;
    let outside = i.len() as u32 - inside;
    (-1i64).pow(inside) * ipow(group_order - 1, outside)
}

/// `Σ_{wt(β) = w} f(α, β)` for `wt(α) = s`, length `n`, `|B| = Q`.
pub fn hamming_weight_sum(group_order: i64, n: usize, s: usize, w: usize) -> i64 {
    (0..=w)
        .map(|t| {
            (-1i64).pow(t as u32)
                * ipow(group_order - 1, (w - t) as u32)
                * binomial(s, t)
                * binomial(n - s, w - t)
        })
        .sum()
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Number of `k`-dimensional subspaces of `F_q^d`.
pub fn gaussian_binomial(q: i64, d: u32, k: u32) -> i64 {
    if k > d {
        return 0;
    }
    let mut num = 1i64;
    let mut den = 1i64;
    for i in 0..k {
        num *= ipow(q, d - i) - 1;
        den *= ipow(q, i + 1) - 1;
    }
    num / den
}

/// Möbius function of the subspace lattice of a vector space over `F_q`
/// between subspaces of dimensions `a ≤ b`.
pub fn field_moebius(q: i64, a: u32, b: u32) -> i64 {
    let k = b - a;
    (-1i64).pow(k) * ipow(q, k * k.saturating_sub(1) / 2)
}

/// The field-case support sum `Σ_t (−1)^{v−t} q^{tn + C(v−t, 2)} [d choose t]_q`
/// with `v = dim V` and `d = dim(V ∩ A^‡)`.
pub fn field_support_sum(q: i64, n: u32, v: u32, d: u32) -> i64 {
    (0..=v)
        .map(|t| {
            let k = v - t;
            (-1i64).pow(k)
                * ipow(q, t * n + k * k.saturating_sub(1) / 2)
                * gaussian_binomial(q, d, t)
        })
        .sum()
}

/// Result of a reflexivity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReflexivityVerdict {
    pub reflexive: bool,
    pub classes: usize,
    pub dual_classes: usize,
    /// `Γ = r(l(Γ))`.
    pub double_dual_equal: bool,
    /// `|Γ| = |l(Γ)|`.
    pub counts_equal: bool,
}

/// Decides reflexivity both by the double dual and by the class count and
/// insists the two criteria agree.
pub fn is_reflexive(f: &Pairing, gamma: &Partition) -> Result<ReflexivityVerdict> {
    let dual = f.dual(gamma)?;
    let double = f.dual(&dual)?;
    let double_dual_equal = double.equals(gamma)?;
    let counts_equal = gamma.len() == dual.len();
    if double_dual_equal != counts_equal {
        return Err(Error::Inconsistency(format!(
            "double dual {} but class counts {} vs {}",
            if double_dual_equal {
                "agrees"
            } else {
                "differs"
            },
            gamma.len(),
            dual.len()
        )));
    }
    if !gamma.refines(&double)? && !double.refines(gamma)? {
        return Err(Error::Inconsistency(
            "r(l(Γ)) and Γ are incomparable".into(),
        ));
    }
    Ok(ReflexivityVerdict {
        reflexive: double_dual_equal,
        classes: gamma.len(),
        dual_classes: dual.len(),
        double_dual_equal,
        counts_equal,
    })
}

/// `Λ` refines `l(Γ)` and `Γ` refines `r(Λ)`.
pub fn mutually_dual(f: &Pairing, lambda: &Partition, gamma: &Partition) -> Result<bool> {
    let l = left_dual_partition(f, gamma)?;
    let r = right_dual_partition(f, lambda)?;
    let verdict = lambda.refines(&l)? && gamma.refines(&r)?;
    if verdict && (lambda.len() != gamma.len() || !lambda.equals(&l)? || !gamma.equals(&r)?) {
        return Err(Error::Inconsistency(
            "mutually dual pair is not a pair of exact duals".into(),
        ));
    }
    Ok(verdict)
}

/// `Σ_A ε(A, U)·conj(ρ(A, V)) = |G|·[U = V]` and
/// `Σ_B conj(ρ(I, B))·ε(J, B) = |G|·[I = J]`.
pub fn orthogonality_check(rho: &KrawtchoukMatrix, eps: &KrawtchoukMatrix) -> Result<bool> {
    if rho.side != Side::Left || eps.side != Side::Right {
        return Err(Error::SpaceMismatch);
    }
    if !rho.rows.equals(&eps.rows)? || !rho.cols.equals(&eps.cols)? {
        return Err(Error::SpaceMismatch);
    }
    let order = rho.rows.space().ring().char_order();
    let g = rho.rows.space().len() as i64;
    let expect = |same: bool| CycInt::from_integer(order, if same { g } else { 0 });
    let (nl, ng) = (rho.rows.len(), rho.cols.len());
    for u in 0..ng {
        for v in 0..ng {
            let terms = (0..nl)
                .map(|a| eps.entry(a, u).try_mul(&rho.entry(a, v).conj()))
                .collect::<Result<Vec<_>>>()?;
            if CycInt::sum(&terms)? != expect(u == v)? {
                return Ok(false);
            }
        }
    }
    for i in 0..nl {
        for j in 0..nl {
            let terms = (0..ng)
                .map(|b| rho.entry(i, b).conj().try_mul(eps.entry(j, b)))
                .collect::<Result<Vec<_>>>()?;
            if CycInt::sum(&terms)? != expect(i == j)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The three statements compared for a pair `α, γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    /// `σ(α) ≅ σ(γ)`.
    pub isomorphic_supports: bool,
    /// Equal sums over every rank-weight class.
    pub all_rank_sums_equal: bool,
    /// Equal sums over the rank-1 class.
    pub rank1_sums_equal: bool,
}

impl EquivalenceReport {
    pub fn consistent(&self) -> bool {
        self.isomorphic_supports == self.all_rank_sums_equal
            && self.all_rank_sums_equal == self.rank1_sums_equal
    }
}

/// Precomputed data for comparing pairs of tuples by isomorphism type of the
/// support and by their rank-weight character sums.
#[derive(Clone, Debug)]
pub struct RankSumComparator {
    iso: Partition,
    dual_of_rank: Partition,
    rank1_class: usize,
}

impl RankSumComparator {
    /// Requires `m, n ≥ 2`.
    pub fn new(f: &Pairing) -> Result<Self> {
        let space = f.space();
        if space.m() < 2 || space.n() < 2 {
            return Err(Error::Dimension(format!(
                "needs m, n ≥ 2, got m = {}, n = {}",
                space.m(),
                space.n()
            )));
        }
        let iso = crate::rankspace::partition_by_iso(space, Side::Left);
        let psi3 = crate::rankspace::partition_by_rank(space, Side::Right);
        let rank1_class = (0..psi3.len())
            .find(|c| psi3.label(*c) == &ClassLabel::Rank(1))
            .ok_or_else(|| Error::MissingClass("rank 1".into()))?;
        let dual_of_rank = left_dual_partition(f, &psi3)?;
        Ok(Self {
            iso,
            dual_of_rank,
            rank1_class,
        })
    }

    fn signature(&self, x: usize) -> &[CycInt] {
        match self.dual_of_rank.label(self.dual_of_rank.class_of(x)) {
            ClassLabel::Signature(sig) => sig,
            other => unreachable!("dual partitions carry signatures, got {other:?}"),
        }
    }

    /// The rank-1 class sum of `α`.
    pub fn rank1_sum(&self, x: usize) -> &CycInt {
        &self.signature(x)[self.rank1_class]
    }

    /// `l(Ψ_3)`.
    pub fn dual_of_rank(&self) -> &Partition {
        &self.dual_of_rank
    }

    pub fn report(&self, a: usize, c: usize) -> EquivalenceReport {
        EquivalenceReport {
            isomorphic_supports: self.iso.class_of(a) == self.iso.class_of(c),
            all_rank_sums_equal: self.dual_of_rank.class_of(a) == self.dual_of_rank.class_of(c),
            rank1_sums_equal: self.rank1_sum(a) == self.rank1_sum(c),
        }
    }

    /// Checks every ordered pair and returns the inconsistent ones.
    pub fn scan_all(&self) -> Vec<(usize, usize)> {
        let len = self.iso.space().len();
        (0..len)
            .into_par_iter()
            .flat_map_iter(|a| {
                (0..len)
                    .filter(move |c| !self.report(a, *c).consistent())
                    .map(move |c| (a, c))
            })
            .collect()
    }
}

/// Compares `α` and `γ` on all three statements; a disagreement is an error.
pub fn theorem_4_2_equivalence(f: &Pairing, a: usize, c: usize) -> Result<EquivalenceReport> {
    let report = RankSumComparator::new(f)?.report(a, c);
    if report.consistent() {
        Ok(report)
    } else {
        Err(Error::Inconsistency(format!(
            "statements disagree: {report:?}"
        )))
    }
}
