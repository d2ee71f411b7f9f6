//! Dense eigendecomposition oracle for small Schreier graphs.

use nalgebra::{DMatrix, SymmetricEigen};

use super::{SchreierGraph, SpectraError};

/// Largest vertex count the dense oracle accepts.
pub const DENSE_LIMIT: usize = 2000;

/// Every eigenvalue of the adjacency matrix, ascending.
pub fn dense_spectrum(g: &SchreierGraph) -> Result<Vec<f64>, SpectraError> {
    let size = g.vertex_count();
    if size > DENSE_LIMIT {
        return Err(SpectraError::DenseTooLarge { size, limit: DENSE_LIMIT });
    }
    let a = DMatrix::from_row_slice(size, size, &g.dense());
    let mut values: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// The extreme eigenvalues after removing one copy of `2r` and, for
/// bipartite graphs, one copy of `-2r`; `None` if nothing is left.
pub fn dense_extremes(g: &SchreierGraph) -> Result<Option<(f64, f64)>, SpectraError> {
    let mut values = dense_spectrum(g)?;
    values.pop();
    if g.bipartition().is_some() && !values.is_empty() {
        values.remove(0);
    }
    Ok(values.first().map(|&lo| (lo, *values.last().unwrap())))
}
