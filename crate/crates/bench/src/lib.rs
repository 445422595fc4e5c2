//! Shared fixtures for the benchmarks.

use hmuni_core::HMPair;

/// Unimodular pairs small enough for the completion oracle.
pub fn unimodular_pairs() -> Vec<(&'static str, HMPair)> {
    vec![
        ("edge+point 222", HMPair::parse("1 2 3", "12 3", &[2, 2, 2]).unwrap()),
        ("four-cycle 2222", HMPair::parse("1 2 3 4", "12 23 34 14", &[2, 2, 2, 2]).unwrap()),
        ("triangle 322", HMPair::parse("1 2 3", "12 13 23", &[3, 2, 2]).unwrap()),
        ("ghost 2223", HMPair::parse("1 2 3 4", "123 14 24", &[2, 2, 2, 3]).unwrap()),
    ]
}
