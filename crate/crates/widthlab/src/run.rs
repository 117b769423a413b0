//! Parallel drivers. `WIDTHLAB_THREADS` caps the worker count.

use rayon::prelude::*;
use widthlab_core::engine::{width_exponent, WidthStatus};
use widthlab_core::lattice::{fit_loglog, lattice_sum, LatticeSum};
use widthlab_core::{Error, ExponentParams};

use crate::report::{CliError, FitSummary, LatticeReport, LatticeRow};

pub const THREADS_ENV: &str = "WIDTHLAB_THREADS";

pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.parse().map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a positive integer")))?;
        b = b.num_threads(n.max(1));
    }
    b.build().map_err(|e| CliError::Io(e.to_string()))
}

/// Lattice sums over `grid` (in parallel, results in grid order) and their log-log fit.
pub fn lattice_report(params: &ExponentParams, grid: &[u64]) -> Result<LatticeReport, CliError> {
    let r = width_exponent(params)?;
    if r.status != WidthStatus::Determined {
        return Err(Error::NotDetermined.into());
    }
    let theta = r.theta_star.unwrap_or(f64::NAN);
    let pool = thread_pool()?;
    let sums: Vec<LatticeSum> = pool.install(|| {
        grid.par_iter().map(|&n| lattice_sum(params, n)).collect::<Result<Vec<_>, Error>>()
    })?;
    let pts: Vec<(u64, f64)> = sums.iter().map(|s| (s.n, s.sum)).collect();
    let fit = fit_loglog(&pts)?;
    Ok(LatticeReport {
        params: *params,
        rows: sums.iter().map(LatticeRow::from).collect(),
        fit: FitSummary {
            slope: fit.slope,
            r_squared: fit.r_squared,
            theta_star: theta,
            relative_error: (fit.slope + theta).abs() / theta,
        },
    })
}

pub fn rows_csv(rows: &[LatticeRow]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}
