use crate::Result;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How per-interface work inside a time step is scheduled.
///
/// `Parallel` silently degrades to `Serial` when the crate is built without
/// the `parallel` feature. Both modes evaluate exactly the same arithmetic per
/// interface, so results are bitwise identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Runs `f` on consecutive `chunk`-sized pieces of `data` with per-worker state.
pub(crate) fn try_for_each_chunk<T, S, I, F>(exec: Execution, data: &mut [T], chunk: usize, init: I, f: F) -> Result<()>
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize, &mut [T]) -> Result<()> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return data.par_chunks_mut(chunk).enumerate().try_for_each_init(&init, |state, (idx, c)| f(state, idx, c));
    }
    let _ = exec;
    let mut state = init();
    for (idx, c) in data.chunks_mut(chunk).enumerate() {
        f(&mut state, idx, c)?;
    }
    Ok(())
}

/// Maximum of `f(i)` over `0..n` (`0.0` for an empty range). NaN propagates.
pub(crate) fn map_max<F>(exec: Execution, n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let combine = |a: f64, b: f64| {
        if a.is_nan() || b.is_nan() {
            f64::NAN
        } else {
            a.max(b)
        }
    };
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(&f).reduce(|| 0.0, combine);
    }
    let _ = exec;
    (0..n).map(f).fold(0.0, combine)
}
