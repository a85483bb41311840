//! Matrices over a chain ring and the module theory built on them.

mod howell;
mod lattice;
mod smith;
mod submodule;

use std::fmt;
use std::sync::Arc;

use crate::chainring::{ChainRing, RingElem};
use crate::error::{Error, Result};

pub use howell::howell_form;
pub use lattice::{
    count_rank1_in, count_rank1_submodules, Lattice, LatticeEntry, MoebiusTable,
    DEFAULT_LATTICE_GUARD,
};
pub use smith::{rank, smith_form, SmithForm, SmithInvariants};
pub use submodule::{kernel, IsoProfile, Submodule};

/// Dense row-major matrix of ring-element codes.
#[derive(Clone)]
pub struct RMatrix {
    ring: Arc<ChainRing>,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl PartialEq for RMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.ring.id() == other.ring.id()
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for RMatrix {}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RMatrix[{}; {}x{}](",
            self.ring.name(),
            self.rows,
            self.cols
        )?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, ")")
    }
}

impl RMatrix {
    /// Builds a matrix from row-major codes.
    pub fn new(ring: &Arc<ChainRing>, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|c| **c >= ring.size()) {
            return Err(Error::InvalidRing(format!(
                "code {bad} outside {}",
                ring.name()
            )));
        }
        Ok(Self {
            ring: ring.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(ring: &Arc<ChainRing>, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension(format!(
                "row of length {} in a {cols}-column matrix",
                r.len()
            )));
        }
        Self::new(ring, rows.len(), cols, rows.concat())
    }

    pub fn from_elems(
        ring: &Arc<ChainRing>,
        rows: usize,
        cols: usize,
        elems: &[RingElem],
    ) -> Result<Self> {
        let probe = ring.zero();
        let mut data = Vec::with_capacity(elems.len());
        for e in elems {
            // Re-adding zero rejects elements of other rings.
            data.push(ring.add(*e, probe)?.code());
        }
        Self::new(ring, rows, cols, data)
    }

    pub fn zeros(ring: &Arc<ChainRing>, rows: usize, cols: usize) -> Self {
        Self {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(ring: &Arc<ChainRing>, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn ring(&self) -> &Arc<ChainRing> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn code(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn get(&self, i: usize, j: usize) -> RingElem {
        self.ring
            .elem(self.code(i, j))
            .expect("entries are validated")
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.code(i, j)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| *c == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.code(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ring.id() != other.ring.id() {
            return Err(Error::MixedRing);
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let r = &self.ring;
        let mut out = Self::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0;
                for k in 0..self.cols {
                    acc = r.add_code(acc, r.mul_code(self.code(i, k), other.code(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }
}

/// `a + c·b` on code vectors.
pub(crate) fn axpy(ring: &ChainRing, a: &mut [u32], c: u32, b: &[u32]) {
    if c == 0 {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x = ring.add_code(*x, ring.mul_code(c, *y));
    }
}

pub(crate) fn scale(ring: &ChainRing, c: u32, v: &[u32]) -> Vec<u32> {
    v.iter().map(|x| ring.mul_code(c, *x)).collect()
}
