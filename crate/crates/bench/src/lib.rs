//! Inputs shared by the benchmarks.

use desitter_core::{trotter_evolve, ModelParams, StateVector, TrotterPlan};

/// One hole on site 0 of an `n`-site lattice, the usual starting point.
pub fn single_hole(n: usize) -> StateVector {
    StateVector::basis_state(n, 1).expect("n is in range")
}

/// A spread-out state: the single hole after two Trotter steps at `m = 1`.
pub fn spread_state(n: usize) -> StateVector {
    let params = ModelParams::new(n, 0.1, 1.0).expect("n is even");
    let plan = TrotterPlan::new(0.5, 2)
        .expect("valid plan")
        .retaining_states();
    let mut states = trotter_evolve(&single_hole(n), &params, &plan)
        .expect("evolution succeeds")
        .states
        .expect("states retained");
    states.pop().expect("final state")
}
