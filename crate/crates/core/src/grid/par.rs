//! Slab-parallel loops with a switch for single-worker execution.
//!
//! Every parallel loop partitions its output by the slowest axis and every reduction is
//! combined slab by slab in index order, so results do not depend on the worker count.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

static SERIAL: AtomicBool = AtomicBool::new(false);

/// Forces every grid loop onto the calling thread.
pub fn set_serial(serial: bool) {
    SERIAL.store(serial, Ordering::SeqCst);
}

pub fn is_serial() -> bool {
    SERIAL.load(Ordering::SeqCst)
}

/// Calls `f(slab_index, slab)` on consecutive chunks of `slab` elements.
pub fn for_slabs<F>(out: &mut [f64], slab: usize, f: F)
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    if is_serial() {
        out.chunks_mut(slab).enumerate().for_each(|(i, s)| f(i, s));
    } else {
        out.par_chunks_mut(slab).enumerate().for_each(|(i, s)| f(i, s));
    }
}

/// Fallible variant; the error of the lowest failing slab is returned.
pub fn try_for_slabs<E, F>(out: &mut [f64], slab: usize, f: F) -> Result<(), E>
where
    E: Send,
    F: Fn(usize, &mut [f64]) -> Result<(), E> + Sync + Send,
{
    let results: Vec<Result<(), E>> = if is_serial() {
        out.chunks_mut(slab).enumerate().map(|(i, s)| f(i, s)).collect()
    } else {
        out.par_chunks_mut(slab).enumerate().map(|(i, s)| f(i, s)).collect()
    };
    results.into_iter().collect()
}

/// Maps `f` over `0..count` and returns the results in index order.
pub fn map_indices<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if is_serial() {
        (0..count).map(f).collect()
    } else {
        (0..count).into_par_iter().map(f).collect()
    }
}
