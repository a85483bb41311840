//! Submodule codes in the tuple space, their duals, class distributions and
//! the MacWilliams transform through a Krawtchouk matrix.

use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycInt;
use crate::duality::KrawtchoukMatrix;
use crate::error::{Error, Result};
use crate::linalg::{kernel, RMatrix};
use crate::rankspace::{Partition, Side, TupleSpace};

/// An `R`-submodule of the tuple space with its members listed.
#[derive(Clone, Debug)]
pub struct Code {
    space: Arc<TupleSpace>,
    generators: Vec<usize>,
    elements: Vec<usize>,
}

/// On-disk form of a code: generator matrices given by their row-major
/// entry codes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub ring: String,
    pub m: usize,
    pub n: usize,
    pub generators: Vec<Vec<u32>>,
}

impl Code {
    /// The span of `generators` (tuple indices).
    pub fn span(space: &Arc<TupleSpace>, generators: Vec<usize>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| **g >= space.len()) {
            return Err(Error::Malformed(format!(
                "tuple index {g} outside the space"
            )));
        }
        let size = space.ring().size();
        let mut seen = vec![false; space.len()];
        seen[0] = true;
        let mut elements = vec![0usize];
        for g in &generators {
            let multiples: Vec<usize> = (0..size).map(|c| space.scale(c, *g)).collect();
            let current = elements.clone();
            for x in current {
                for y in &multiples {
                    let z = space.add(x, *y);
                    if !seen[z] {
                        seen[z] = true;
                        elements.push(z);
                    }
                }
            }
        }
        elements.sort_unstable();
        let code = Self {
            space: space.clone(),
            generators,
            elements,
        };
        code.check_closed(&seen)?;
        Ok(code)
    }

    /// The span of generator matrices given row-major.
    pub fn from_matrices(space: &Arc<TupleSpace>, generators: &[Vec<u32>]) -> Result<Self> {
        let idx = generators
            .iter()
            .map(|g| {
                let a = RMatrix::new(space.ring(), space.m(), space.n(), g.clone())?;
                space.index_of_matrix(&a)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::span(space, idx)
    }

    pub fn from_file(space: &Arc<TupleSpace>, file: &CodeFile) -> Result<Self> {
        if file.m != space.m() || file.n != space.n() {
            return Err(Error::Dimension(format!(
                "code file is for m = {}, n = {}",
                file.m, file.n
            )));
        }
        Self::from_matrices(space, &file.generators)
    }

    /// Contains 0, and is closed under adding `c·g` for every generator `g`
    /// and under scaling; together these give closure under the module
    /// operations.
    fn check_closed(&self, member: &[bool]) -> Result<()> {
        let sp = &self.space;
        let size = sp.ring().size();
        for &x in &self.elements {
            for c in 0..size {
                let scaled = sp.scale(c, x);
                let shifted = self.generators.iter().map(|g| sp.add(x, sp.scale(c, *g)));
                if !member[scaled] || shifted.into_iter().any(|z| !member[z]) {
                    return Err(Error::Inconsistency("code is not closed".into()));
                }
            }
        }
        if self.elements.len() > sp.len() || !sp.len().is_multiple_of(self.elements.len()) {
            return Err(Error::Inconsistency("|C| does not divide |G|".into()));
        }
        Ok(())
    }

    pub fn space(&self) -> &Arc<TupleSpace> {
        &self.space
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Members in increasing index order.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn to_file(&self) -> CodeFile {
        CodeFile {
            ring: self.space.ring().name(),
            m: self.space.m(),
            n: self.space.n(),
            generators: self
                .generators
                .iter()
                .map(|g| self.space.matrix(*g).data().to_vec())
                .collect(),
        }
    }
}

/// `C^‡ = {β : ⟨α, β⟩ = 0 for all α ∈ C}`, solved as the kernel of the
/// generators flattened into rows of length `mn`. Since `χ` is generating and
/// `C` is a submodule this is also `{β : f(α, β) = 1 for all α ∈ C}`.
pub fn dual_code(c: &Code) -> Result<Code> {
    let sp = &c.space;
    let rows: Vec<Vec<u32>> = c
        .generators
        .iter()
        .map(|g| sp.entries(*g).to_vec())
        .collect();
    let g = RMatrix::from_rows(sp.ring(), sp.m() * sp.n(), &rows)?;
    let k = kernel(&g);
    let gens = (0..k.generators().rows())
        .map(|i| sp.index_of(k.generators().row(i)))
        .collect::<Result<Vec<_>>>()?;
    let dual = Code::span(sp, gens)?;
    if dual.len() as u64 != k.size() || c.len() * dual.len() != sp.len() {
        return Err(Error::Inconsistency(format!(
            "|C| = {}, |C^‡| = {}, |G| = {}",
            c.len(),
            dual.len(),
            sp.len()
        )));
    }
    Ok(dual)
}

/// `(|C ∩ A|)_{A ∈ P}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Distribution {
    pub counts: Vec<u64>,
}

impl Distribution {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

pub fn distribution(c: &Code, p: &Partition) -> Result<Distribution> {
    if !c.space.same_as(p.space()) {
        return Err(Error::SpaceMismatch);
    }
    let mut counts = vec![0u64; p.len()];
    for x in &c.elements {
        counts[p.class_of(*x)] += 1;
    }
    Ok(Distribution { counts })
}

/// Applies the MacWilliams transform of `k` to the distribution of a code of
/// size `code_size`.
///
/// For `ρ` the input is a distribution over `Λ` and the result the predicted
/// distribution of the dual over `Γ`:
/// `|C|·|C^‡ ∩ B| = Σ_A |C ∩ A|·ρ(A, B)`. For `ε` the roles swap:
/// `|D|·|^‡D ∩ A| = Σ_B |D ∩ B|·ε(A, B)`.
pub fn macwilliams_predict(
    dist: &Distribution,
    code_size: u64,
    k: &KrawtchoukMatrix,
) -> Result<Distribution> {
    let (n_in, n_out) = match k.side() {
        Side::Left => (k.rows().len(), k.cols().len()),
        Side::Right => (k.cols().len(), k.rows().len()),
    };
    if dist.counts.len() != n_in {
        return Err(Error::Dimension(format!(
            "distribution has {} classes, matrix expects {n_in}",
            dist.counts.len()
        )));
    }
    let entry = |i: usize, o: usize| match k.side() {
        Side::Left => k.entry(i, o),
        Side::Right => k.entry(o, i),
    };
    let counts = (0..n_out)
        .map(|o| {
            let terms: Vec<CycInt> = (0..n_in)
                .map(|i| entry(i, o).scale(dist.counts[i] as i64))
                .collect();
            let total = CycInt::sum(&terms)?;
            let value = total.as_integer().ok_or_else(|| {
                Error::Inconsistency(format!("non-integral transform value {total} at class {o}"))
            })?;
            if value < 0 || value % code_size as i64 != 0 {
                return Err(Error::Inconsistency(format!(
                    "transform value {value} at class {o} is not a multiple of |C| = {code_size}"
                )));
            }
            Ok(value as u64 / code_size)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Distribution { counts })
}

/// Predicted against actual distribution of the dual code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MacWilliamsReport {
    pub side: Side,
    pub code_size: u64,
    pub dual_size: u64,
    pub distribution: Distribution,
    pub predicted: Distribution,
    pub actual: Distribution,
    pub verified: bool,
}

/// Checks the identity for `c` with the given Krawtchouk matrix. With `ρ`,
/// `c` is taken on the left factor; with `ε`, on the right.
pub fn macwilliams_verify(c: &Code, k: &KrawtchoukMatrix) -> Result<MacWilliamsReport> {
    let (own, other) = match k.side() {
        Side::Left => (k.rows(), k.cols()),
        Side::Right => (k.cols(), k.rows()),
    };
    let dual = dual_code(c)?;
    let dist = distribution(c, own)?;
    let predicted = macwilliams_predict(&dist, c.len() as u64, k)?;
    let actual = distribution(&dual, other)?;
    Ok(MacWilliamsReport {
        side: k.side(),
        code_size: c.len() as u64,
        dual_size: dual.len() as u64,
        distribution: dist,
        verified: predicted == actual,
        predicted,
        actual,
    })
}

/// One code `R·α` per distinct cyclic submodule of the space.
pub fn cyclic_codes(space: &Arc<TupleSpace>) -> Result<Vec<Code>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in 0..space.len() {
        let c = Code::span(space, vec![x])?;
        if seen.insert(c.elements().to_vec()) {
            out.push(c);
        }
    }
    Ok(out)
}

/// `count` codes, each spanned by one to three uniformly drawn tuples.
pub fn random_codes(space: &Arc<TupleSpace>, count: usize, seed: u64) -> Result<Vec<Code>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=3);
            let gens = (0..k).map(|_| rng.gen_range(0..space.len())).collect();
            Code::span(space, gens)
        })
        .collect()
}
