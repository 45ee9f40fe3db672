//! Switch between rayon and plain iteration.
//!
//! With the `parallel` feature the data-parallel kernels use rayon unless
//! [`set_parallel`] turned them off at runtime; without it everything runs
//! sequentially.

use std::sync::atomic::{AtomicBool, Ordering};

static ENABLED: AtomicBool = AtomicBool::new(true);

/// Enables or disables the rayon paths at runtime (no effect without the
/// `parallel` feature).
pub fn set_parallel(on: bool) {
    ENABLED.store(on, Ordering::Relaxed);
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel") && ENABLED.load(Ordering::Relaxed)
}

macro_rules! if_rayon {
    ($rayon_value: expr, $else_value: expr) => {{
        #[cfg(feature = "parallel")]
        {
            if $crate::par::parallel_enabled() {
                $rayon_value
            } else {
                $else_value
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            $else_value
        }
    }};
}
pub(crate) use if_rayon;

/// Maps `f` over `0..n`, in parallel when enabled, keeping index order.
pub fn map_indices<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if_rayon!(
        {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(&f).collect()
        },
        (0..n).map(&f).collect()
    )
}
