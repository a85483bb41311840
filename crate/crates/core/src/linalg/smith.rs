use serde::{Deserialize, Serialize};

use super::{axpy, RMatrix};

/// Sorted Smith exponents `e_1 ≤ … ≤ e_min(m,n)`; exponent `s` stands for a
/// zero diagonal entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SmithInvariants(pub Vec<u32>);

impl SmithInvariants {
    /// Number of exponents below `s`.
    pub fn rank(&self, s: u32) -> usize {
        self.0.iter().filter(|e| **e < s).count()
    }
}

/// `left · a · right = diag(π^{e_1}, …)`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub invariants: SmithInvariants,
    pub left: RMatrix,
    pub right: RMatrix,
}

/// Smith normal form over the chain ring. Pivots are chosen by minimal
/// valuation, ties going to the smallest `(row, col)`.
pub fn smith_form(a: &RMatrix) -> SmithForm {
    let ring = a.ring().clone();
    let (m, n) = (a.rows(), a.cols());
    let s = ring.s();
    let mut d = a.clone();
    let mut left = RMatrix::identity(&ring, m);
    let mut right = RMatrix::identity(&ring, n);
    let mut exps = Vec::with_capacity(m.min(n));

    for k in 0..m.min(n) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..m {
            for j in k..n {
                let v = ring.val_code(d.code(i, j));
                if v < s && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((e, pi, pj)) = best else {
            exps.resize(m.min(n), s);
            break;
        };
        swap_rows(&mut d, k, pi);
        swap_rows(&mut left, k, pi);
        swap_cols(&mut d, k, pj);
        swap_cols(&mut right, k, pj);

        let (_, unit) = ring.split_code(d.code(k, k), e);
        let inv = ring.inv_code(unit).expect("pivot cofactor is a unit");
        scale_row(&mut d, k, inv);
        scale_row(&mut left, k, inv);

        for i in k + 1..m {
            let x = d.code(i, k);
            if x != 0 {
                let c = ring.neg_code(ring.split_code(x, e).1);
                add_row_multiple(&mut d, i, k, c);
                add_row_multiple(&mut left, i, k, c);
            }
        }
        for j in k + 1..n {
            let x = d.code(k, j);
            if x != 0 {
                let c = ring.neg_code(ring.split_code(x, e).1);
                add_col_multiple(&mut d, j, k, c);
                add_col_multiple(&mut right, j, k, c);
            }
        }
        exps.push(e);
    }
    SmithForm {
        invariants: SmithInvariants(exps),
        left,
        right,
    }
}

/// Matrix rank: the number of nonzero Smith diagonal entries.
pub fn rank(a: &RMatrix) -> usize {
    smith_form(a).invariants.rank(a.ring().s())
}

fn swap_rows(a: &mut RMatrix, i: usize, j: usize) {
    if i != j {
        for c in 0..a.cols() {
            let (x, y) = (a.code(i, c), a.code(j, c));
            a.set(i, c, y);
            a.set(j, c, x);
        }
    }
}

fn swap_cols(a: &mut RMatrix, i: usize, j: usize) {
    if i != j {
        for r in 0..a.rows() {
            let (x, y) = (a.code(r, i), a.code(r, j));
            a.set(r, i, y);
            a.set(r, j, x);
        }
    }
}

fn scale_row(a: &mut RMatrix, i: usize, c: u32) {
    let ring = a.ring().clone();
    for col in 0..a.cols() {
        a.set(i, col, ring.mul_code(c, a.code(i, col)));
    }
}

/// row_i += c·row_k
fn add_row_multiple(a: &mut RMatrix, i: usize, k: usize, c: u32) {
    let ring = a.ring().clone();
    let src = a.row(k).to_vec();
    let cols = a.cols();
    let dst = &mut a.data[i * cols..(i + 1) * cols];
    axpy(&ring, dst, c, &src);
}

/// col_j += c·col_k
fn add_col_multiple(a: &mut RMatrix, j: usize, k: usize, c: u32) {
    let ring = a.ring().clone();
    for r in 0..a.rows() {
        let v = ring.add_code(a.code(r, j), ring.mul_code(c, a.code(r, k)));
        a.set(r, j, v);
    }
}
