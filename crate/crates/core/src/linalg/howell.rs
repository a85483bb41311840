use crate::chainring::ChainRing;

use super::{axpy, scale, RMatrix};

/// Canonical generator matrix of the row span of `g`.
///
/// Output rows are in echelon form with strictly increasing pivot columns,
/// every pivot equal to `π^e`, entries above a pivot reduced to the canonical
/// representative modulo `Rπ^e`, and the Howell property: every element of
/// the span that vanishes on the first `j` columns is a combination of the
/// rows whose pivot lies beyond column `j`. Row spans are equal exactly when
/// the Howell forms are equal.
pub fn howell_form(g: &RMatrix) -> RMatrix {
    let ring = g.ring();
    let rows = howell_rows(ring, g.cols(), g.row_vecs());
    RMatrix::from_rows(ring, g.cols(), &rows).expect("Howell rows keep the column count")
}

/// Howell rows plus their `(pivot column, exponent)` pairs.
pub(crate) fn howell_rows_with_pivots(
    ring: &ChainRing,
    cols: usize,
    input: Vec<Vec<u32>>,
) -> (Vec<Vec<u32>>, Vec<(usize, u32)>) {
    let s = ring.s();
    let mut work: Vec<Vec<u32>> = input
        .into_iter()
        .filter(|r| r.iter().any(|c| *c != 0))
        .collect();
    let mut out: Vec<Vec<u32>> = Vec::new();
    let mut pivots = Vec::new();

    for j in 0..cols {
        let best = work
            .iter()
            .enumerate()
            .filter(|(_, r)| r[j] != 0)
            .min_by_key(|(i, r)| (ring.val_code(r[j]), *i))
            .map(|(i, _)| i);
        let Some(bi) = best else { continue };
        let mut pivot = work.remove(bi);
        let e = ring.val_code(pivot[j]);
        let (_, unit) = ring.split_code(pivot[j], e);
        let inv = ring.inv_code(unit).expect("pivot cofactor is a unit");
        pivot = scale(ring, inv, &pivot);
        debug_assert_eq!(pivot[j], ring.pi_pow_code(e));

        for r in work.iter_mut() {
            if r[j] != 0 {
                let (rep, quot) = ring.split_code(r[j], e);
                debug_assert_eq!(rep, 0);
                axpy(ring, r, ring.neg_code(quot), &pivot);
            }
        }
        // π^{s-e}·pivot vanishes at column j but may not lie in the span of the
        // remaining rows; keeping it is what gives the Howell property.
        if e > 0 {
            let extra = scale(ring, ring.pi_pow_code(s - e), &pivot);
            if extra.iter().any(|c| *c != 0) {
                work.push(extra);
            }
        }
        work.retain(|r| r.iter().any(|c| *c != 0));
        out.push(pivot);
        pivots.push((j, e));
    }
    debug_assert!(work.is_empty());

    for k in 0..out.len() {
        let (j, e) = pivots[k];
        let pivot_row = out[k].clone();
        for row in out.iter_mut().take(k) {
            let (_, quot) = ring.split_code(row[j], e);
            axpy(ring, row, ring.neg_code(quot), &pivot_row);
        }
    }
    (out, pivots)
}

pub(crate) fn howell_rows(ring: &ChainRing, cols: usize, input: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    howell_rows_with_pivots(ring, cols, input).0
}
