//! Dense Householder reduction of a tall matrix to a lower-triangular block
//! stacked over zeros, used as a reference for the sparse release path.

use std::sync::Arc;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::release::ConstraintMatrix;
use crate::tree::HierarchicalTree;

pub const DEFAULT_LQR_CAP: usize = 2_000;

/// Entries at or below this magnitude count as zero in structural checks.
pub const ZERO_TOL: f64 = 1e-12;

/// Reflects the rows `rows` of `m` so that column `col` keeps only the entry
/// at `rows[0]`, which becomes the positive norm of the selected entries.
///
/// The reflection vector is `ω = x − ‖x‖e₁` for the selected subvector `x`.
/// When `x` is already `‖x‖e₁` nothing changes.
pub fn householder_step(m: &DenseMatrix, rows: &[usize], col: usize) -> Result<DenseMatrix> {
    let mut out = m.clone();
    householder_in_place(&mut out, rows, col)?;
    Ok(out)
}

fn householder_in_place(m: &mut DenseMatrix, rows: &[usize], col: usize) -> Result<()> {
    if col >= m.cols() {
        return Err(Error::IndexOutOfRange {
            index: col,
            size: m.cols(),
        });
    }
    if let Some(&r) = rows.iter().find(|&&r| r >= m.rows()) {
        return Err(Error::IndexOutOfRange {
            index: r,
            size: m.rows(),
        });
    }
    let mut sorted = rows.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParam("selected rows must be distinct".into()));
    }
    let Some((&pivot, rest)) = rows.split_first() else {
        return Err(Error::ZeroPivotColumn(col));
    };

    let x: Vec<f64> = rows.iter().map(|&r| m[(r, col)]).collect();
    let tail_sq: f64 = x[1..].iter().map(|v| v * v).sum();
    let norm = (x[0] * x[0] + tail_sq).sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroPivotColumn(col));
    }
    if tail_sq == 0.0 && x[0] > 0.0 {
        return Ok(());
    }
    let mut omega = x;
    // x₀ − ‖x‖ without cancellation when x₀ > 0
    omega[0] = if omega[0] <= 0.0 {
        omega[0] - norm
    } else {
        -tail_sq / (omega[0] + norm)
    };
    let omega_sq: f64 = omega.iter().map(|v| v * v).sum();

    for c in 0..m.cols() {
        if c == col {
            continue;
        }
        let dot: f64 = rows.iter().zip(&omega).map(|(&r, w)| w * m[(r, c)]).sum();
        if dot == 0.0 {
            continue;
        }
        let f = 2.0 * dot / omega_sq;
        for (&r, w) in rows.iter().zip(&omega) {
            m[(r, c)] -= f * w;
        }
    }
    m[(pivot, col)] = norm;
    for &r in rest {
        m[(r, col)] = 0.0;
    }
    Ok(())
}

/// Reduces an `n × k` matrix (`n ≥ k`) to `R = QM` whose top `k × k` block is
/// lower triangular with positive diagonal and whose other rows are zero.
///
/// Columns are processed last to first. Step `s` reflects column
/// `c = k − s` over row `c`, the rows above it and all rows below the block.
pub fn lo_qr(m: &DenseMatrix) -> Result<DenseMatrix> {
    lo_qr_observed(m, |_, _| {})
}

/// Like [`lo_qr`], calling `observe(step, &current)` after each reflection
/// (`step` counts from 1).
pub fn lo_qr_observed<F>(m: &DenseMatrix, mut observe: F) -> Result<DenseMatrix>
where
    F: FnMut(usize, &DenseMatrix),
{
    let (n, k) = (m.rows(), m.cols());
    if n > DEFAULT_LQR_CAP {
        return Err(Error::SizeCapExceeded {
            n,
            cap: DEFAULT_LQR_CAP,
        });
    }
    if n < k {
        return Err(Error::RankDeficient(n));
    }
    let mut r = m.clone();
    for step in 1..=k {
        let c = k - step;
        let rows: Vec<usize> = std::iter::once(c).chain(0..c).chain(k..n).collect();
        householder_in_place(&mut r, &rows, c).map_err(|e| match e {
            Error::ZeroPivotColumn(c) => Error::RankDeficient(c),
            other => other,
        })?;
        observe(step, &r);
    }
    Ok(r)
}

/// Outcome of [`check_reduction_invariants`].
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionReport {
    pub steps_checked: usize,
    pub violation: Option<String>,
}

impl ReductionReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Runs [`lo_qr`] on the constraint matrix of `tree` and checks after each of
/// the first `n₁ − 1` steps that
/// - the top block has exactly the nonzero pattern of the internal-node
///   generation matrix (diagonal plus `(i, parent(i))`),
/// - each lower row has exactly one nonzero,
/// - the last `step` columns of the lower block are zero.
pub fn check_reduction_invariants(tree: &HierarchicalTree) -> Result<ReductionReport> {
    let n1 = tree.internal_count();
    let m = ConstraintMatrix::new(Arc::new(tree.clone())).to_dense();
    let n = m.rows();
    let mut steps_checked = 0;
    let mut violation = None;
    lo_qr_observed(&m, |step, r| {
        if violation.is_some() || step + 1 > n1 {
            return;
        }
        steps_checked += 1;
        violation = first_violation(tree, r, step, n1, n).map(|v| format!("step {step}: {v}"));
    })?;
    Ok(ReductionReport {
        steps_checked,
        violation,
    })
}

fn first_violation(tree: &HierarchicalTree, r: &DenseMatrix, step: usize, n1: usize, n: usize) -> Option<String> {
    let nonzero = |i: usize, j: usize| r[(i, j)].abs() > ZERO_TOL;
    for i in 0..n1 {
        for j in 0..n1 {
            let expected = i == j || tree.parent(i) == Some(j);
            if nonzero(i, j) != expected {
                return Some(format!("upper block entry ({i}, {j}) = {:e}", r[(i, j)]));
            }
        }
    }
    for i in n1..n {
        let count = (0..n1).filter(|&j| nonzero(i, j)).count();
        if count != 1 {
            return Some(format!("lower row {i} has {count} nonzeros"));
        }
        if let Some(j) = (n1 - step..n1).find(|&j| nonzero(i, j)) {
            return Some(format!("lower entry ({i}, {j}) = {:e} not eliminated", r[(i, j)]));
        }
    }
    None
}
