//! Dense and sparse linear algebra kernels. Matrices here are small (element
//! level, at most 24×24) or sparse SPD (global systems).

mod dense;
mod eigen;
mod envelope;
mod sparse;

pub use dense::{invert, lu_solve, DenseMatrix, LuFactors, PIVOT_THRESHOLD};
pub use eigen::{
    condition_number_spd, condition_number_spd_sparse, spd_extreme_eigenvalues,
    symmetric_eigenvalues, SYMMETRY_TOL,
};
pub use envelope::{reverse_cuthill_mckee, EnvelopeCholesky};
pub use sparse::{cg_solve, cg_solve_detailed, CgOutcome, SparseMatrix, TripletBuilder};

use crate::error::{Error, Result};

/// Least-squares slope of `log(err)` against `log(h)`.
pub fn fit_loglog_slope(hs: &[f64], errs: &[f64]) -> Result<f64> {
    if hs.len() != errs.len() || hs.len() < 2 {
        return Err(Error::InvalidInput(
            "need at least two (h, err) pairs of equal length".into(),
        ));
    }
    if hs.iter().chain(errs).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidInput("log-log fit needs positive data".into()));
    }
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("all h values coincide".into()));
    }
    Ok(sxy / sxx)
}

/// Rates between successive refinements: `log(e_k/e_{k+1}) / log(h_k/h_{k+1})`.
pub fn successive_rates(hs: &[f64], errs: &[f64]) -> Vec<f64> {
    hs.windows(2)
        .zip(errs.windows(2))
        .map(|(h, e)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .collect()
}
