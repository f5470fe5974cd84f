//! Data-parallel helpers. With the `parallel` feature the batch loops run on
//! rayon's pool; without it, or with [`Execution::Sequential`], they run in
//! order on the calling thread. Results are always returned in input order.

/// How batch loops (grid scans, τ sweeps, enumerations) are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Maps `f` over `0..n`, preserving order.
pub fn map_range<R, F>(exec: Execution, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Sums `f` over `0..n`. The parallel reduction splits into fixed-size
/// chunks summed in order, so the result does not depend on scheduling.
pub fn sum_range<F>(exec: Execution, n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    const CHUNK: usize = 4096;
    let chunks = n.div_ceil(CHUNK);
    let partial = map_range(exec, chunks, |c| {
        let end = ((c + 1) * CHUNK).min(n);
        (c * CHUNK..end).map(&f).sum::<f64>()
    });
    partial.into_iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = map(Execution::Sequential, &xs, |x| x * x);
        let b = map(Execution::Parallel, &xs, |x| x * x);
        assert_eq!(a, b);
        let s1 = sum_range(Execution::Sequential, 100_000, |i| (i as f64).sqrt());
        let s2 = sum_range(Execution::Parallel, 100_000, |i| (i as f64).sqrt());
        assert_eq!(s1.to_bits(), s2.to_bits());
    }
}
