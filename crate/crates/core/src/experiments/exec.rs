//! Trial execution. Results always come back in trial order, so aggregation
//! is identical whichever executor ran the trials.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Executor {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Executor {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Executor::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Executor::Sequential
        }
    }
}

impl Executor {
    pub fn run<T, F>(self, trials: u64, run: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        match self {
            Executor::Sequential => run_sequential(trials, run),
            #[cfg(feature = "parallel")]
            Executor::Parallel => run_parallel(trials, run),
        }
    }
}

pub fn run_sequential<T, F>(trials: u64, run: F) -> Vec<T>
where
    F: Fn(u64) -> T,
{
    (0..trials).map(run).collect()
}

#[cfg(feature = "parallel")]
pub fn run_parallel<T, F>(trials: u64, run: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..trials).into_par_iter().map(run).collect()
}

/// Run `f` with at most `workers` threads available to the parallel
/// executor. `None` keeps the global pool. Without the `parallel` feature
/// this just calls `f`.
#[cfg(feature = "parallel")]
pub fn with_workers<R, F>(workers: Option<usize>, f: F) -> Result<R, rayon::ThreadPoolBuildError>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    match workers {
        None => Ok(f()),
        Some(n) => Ok(rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build()?.install(f)),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_workers<R, F>(_workers: Option<usize>, f: F) -> Result<R, std::convert::Infallible>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    Ok(f())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_preserved() {
        let seq = Executor::Sequential.run(1000, |i| i * i);
        assert_eq!(seq, Executor::default().run(1000, |i| i * i));
        assert_eq!(seq[999], 999 * 999);
    }

    #[test]
    fn workers_scope() {
        let v = with_workers(Some(3), || Executor::default().run(10, |i| i + 1)).unwrap();
        assert_eq!(v, (1..=10).collect::<Vec<_>>());
    }
}
