//! Benchmark fixtures shared by the criterion targets.

use hopflab_core::sampling::stream_rng;
use hopflab_core::{FiberSampler, HopfFamily, UnitVector};

/// Two fibers of `family` through fixed random points of `S^dim`.
pub fn fiber_pair(family: HopfFamily, dim: usize) -> (FiberSampler, FiberSampler) {
    let mut rng = stream_rng(0xbe4c, 0);
    let x = UnitVector::random(dim, &mut rng);
    let y = UnitVector::random(dim, &mut rng);
    (
        family.fiber(&x).expect("supported dimension"),
        family.fiber(&y).expect("supported dimension"),
    )
}
