//! Smith Normal Form over the valuation ring O_K.
//!
//! For M of rank r this produces Q M P^-1 = diag(pi^a1, ..., pi^ar, 0)
//! with a1 <= ... <= ar and P, Q unimodular over O_K (integral entries,
//! determinant of valuation 0). The exponents are unique; the
//! transition matrices are not.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{ExtValuation, ValuedScalar};

#[derive(Debug, Clone)]
pub struct SnfDecomposition {
    pub q: Matrix,
    pub q_inv: Matrix,
    pub s: Matrix,
    pub p: Matrix,
    pub p_inv: Matrix,
    /// Valuations a_1 <= ... <= a_r of the invariant factors.
    pub exponents: Vec<i64>,
}

impl SnfDecomposition {
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// Diagonal entry s_i as a scalar (zero beyond the rank).
    pub fn diagonal_entry(&self, i: usize) -> &ValuedScalar {
        self.s.get(i, i)
    }
}

/// Min-valuation pivoting: the pivot is an entry of minimal valuation in
/// the remaining block (ties: smallest row, then column index), so every
/// elimination multiplier entry/pivot lies in O_K and all elementary
/// operations are unimodular over O_K.
pub fn smith_normal_form(m: &Matrix) -> SnfDecomposition {
    let descriptor = m.descriptor().clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut q = Matrix::identity(&descriptor, rows);
    let mut q_inv = Matrix::identity(&descriptor, rows);
    let mut p = Matrix::identity(&descriptor, cols);
    let mut p_inv = Matrix::identity(&descriptor, cols);
    let mut exponents = Vec::new();

    let mut k = 0;
    while k < rows.min(cols) {
        // locate a minimal-valuation entry in the trailing block
        let mut best: Option<(ExtValuation, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let v = s.get(i, j).valuation();
                if v == ExtValuation::Infinity {
                    continue;
                }
                if best.map_or(true, |(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((pivot_val, pi, pj)) = best else {
            break; // trailing block is zero
        };

        // move the pivot to (k, k)
        s.swap_rows(k, pi);
        q.swap_rows(k, pi);
        q_inv.swap_cols(k, pi);
        s.swap_cols(k, pj);
        p_inv.swap_cols(k, pj);
        p.swap_rows(k, pj);

        // eliminate the pivot column and row; multipliers are integral
        let pivot = s.get(k, k).clone();
        for i in k + 1..rows {
            if s.get(i, k).is_zero() {
                continue;
            }
            let c = s.get(i, k).div(&pivot).expect("pivot is nonzero").neg();
            s.add_row_multiple(i, k, &c);
            q.add_row_multiple(i, k, &c);
            // (E_{add})^-1 on the right of Q^-1: col_k -= c * col_i
            let c_neg = c.neg();
            q_inv.add_col_multiple(k, i, &c_neg);
        }
        for j in k + 1..cols {
            if s.get(k, j).is_zero() {
                continue;
            }
            let c = s.get(k, j).div(&pivot).expect("pivot is nonzero").neg();
            s.add_col_multiple(j, k, &c);
            p_inv.add_col_multiple(j, k, &c);
            let c_neg = c.neg();
            p.add_row_multiple(k, j, &c_neg);
        }

        // normalize the pivot to an exact uniformizer power: divide the
        // row by the unit pivot/pi^a
        let a = pivot_val.finite().expect("pivot is nonzero");
        let power = descriptor.power_of_uniformizer(a);
        let unit = pivot.div(&power).expect("uniformizer power is nonzero");
        let unit_inv = unit.inv().expect("unit is nonzero");
        s.scale_row(k, &unit_inv);
        q.scale_row(k, &unit_inv);
        q_inv.scale_col(k, &unit);

        exponents.push(a);
        k += 1;
    }

    // min-valuation pivoting yields nondecreasing exponents already;
    // assert rather than re-sort
    debug_assert!(exponents.windows(2).all(|w| w[0] <= w[1]));

    SnfDecomposition {
        q,
        q_inv,
        s,
        p,
        p_inv,
        exponents,
    }
}

/// Partial sums a_1 + ... + a_k of the invariant-factor exponents via the
/// classical minor characterization: the k-th partial sum is the minimal
/// valuation over all k x k minors. Exponential in the size; capped at 4.
pub fn snf_invariants_by_minors(m: &Matrix) -> Result<Vec<i64>> {
    const MAX: usize = 4;
    if m.rows() > MAX || m.cols() > MAX {
        return Err(Error::SizeTooLarge { max: MAX });
    }
    let mut exponents = Vec::new();
    let mut prev_sum = 0i64;
    for k in 1..=m.rows().min(m.cols()) {
        let mut min_val = ExtValuation::Infinity;
        for rows_sel in combinations(m.rows(), k) {
            for cols_sel in combinations(m.cols(), k) {
                let minor = submatrix(m, &rows_sel, &cols_sel);
                let v = minor.determinant()?.valuation();
                if v < min_val {
                    min_val = v;
                }
            }
        }
        match min_val {
            ExtValuation::Finite(sum) => {
                exponents.push(sum - prev_sum);
                prev_sum = sum;
            }
            ExtValuation::Infinity => break, // rank reached
        }
    }
    Ok(exponents)
}

fn submatrix(m: &Matrix, rows: &[usize], cols: &[usize]) -> Matrix {
    let grid = rows
        .iter()
        .map(|&i| cols.iter().map(|&j| m.get(i, j).clone()).collect())
        .collect();
    Matrix::from_rows(m.descriptor(), grid).expect("rectangular selection")
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
