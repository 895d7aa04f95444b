//! Fixtures shared by the benchmarks.

use imw_core::lp::{build_lp, LpProblem};
use imw_core::macwilliams::macwilliams_from_sectors;
use imw_core::{conjugation_sectors, su2_irrep, Decomposition};

pub fn su2_decomposition(two_j: u32) -> Decomposition {
    conjugation_sectors(&su2_irrep(two_j)).expect("su2 decomposition")
}

/// LP for spin `two_j / 2` detecting every sector of depth below `d`.
pub fn su2_lp(two_j: u32, k: usize, d: usize) -> LpProblem {
    let m = macwilliams_from_sectors(&su2_decomposition(two_j)).expect("transform");
    let detected: Vec<usize> = (1..m.size()).filter(|&i| m.depths[i] < d).collect();
    build_lp(&m, k, &detected).expect("lp")
}
