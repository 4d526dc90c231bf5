//! Index-parallel map with a sequential fallback.
//!
//! With the `parallel` feature the map runs on the rayon pool when asked to;
//! without it, or with `parallel = false`, it runs in order on the calling
//! thread. Output order is the index order either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_indices<T, F>(n: u64, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = parallel;
    (0..n).map(f).collect()
}

/// Whether `map_indices(.., true, ..)` actually runs in parallel.
pub const fn available() -> bool {
    cfg!(feature = "parallel")
}

/// Sample mean and standard error of the mean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleStats {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

impl SampleStats {
    pub fn from_slice(values: &[f64]) -> Self {
        let count = values.len();
        let n = count as f64;
        let mean = values.iter().sum::<f64>() / n;
        let variance = if count > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            count,
            mean,
            variance,
            std_error: (variance / n).sqrt(),
        }
    }
}
