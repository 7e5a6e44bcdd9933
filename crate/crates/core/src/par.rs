//! Data-parallel helpers. With the `parallel` feature the batch entry points can
//! dispatch to rayon; without it everything runs sequentially. Output order
//! always matches input order, so results never depend on the execution mode.

/// How batch computations (census, rank blocks, batch reductions) are run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Map `$f` over `$slice` under execution mode `$exec`, collecting into whatever
/// the caller asks for.
macro_rules! par_map {
    ($exec:expr, $slice:expr, $f:expr) => {{
        match $exec {
            #[cfg(feature = "parallel")]
            $crate::par::Execution::Parallel => {
                use rayon::iter::{IntoParallelRefIterator, ParallelIterator};
                $slice.par_iter().map($f).collect()
            }
            $crate::par::Execution::Sequential => $slice.iter().map($f).collect(),
        }
    }};
}

pub(crate) use par_map;
