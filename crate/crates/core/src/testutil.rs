//! Fixtures shared between unit and integration tests.
//!
//! The two-group, two-location instance here (50 cases per group, capacity
//! 50 per location, scores 0.9/0.7 and 0.2/0.1) is the standard worked
//! example used throughout the test suite.

use crate::domain::{Case, Instance, LocationSpec, SamplePath};

/// Two locations with capacity 50 each, horizon 100, groups A and B.
pub fn fig1_instance() -> Instance {
    Instance::new(
        vec![
            LocationSpec { id: "L1".into(), capacity: 50 },
            LocationSpec { id: "L2".into(), capacity: 50 },
        ],
        100,
        vec!["A".into(), "B".into()],
    )
    .expect("valid fixture instance")
}

/// Fifty A cases (scores 0.9, 0.7) followed by fifty B cases (0.2, 0.1).
pub fn fig1_path(instance: &Instance) -> SamplePath {
    let mut cases = Vec::with_capacity(100);
    for _ in 0..50 {
        cases.push(Case::new(0, vec![0.9, 0.7]));
    }
    for _ in 0..50 {
        cases.push(Case::new(1, vec![0.2, 0.1]));
    }
    SamplePath::new(instance, cases).expect("valid fixture path")
}

/// Score vector for a group in the fixture: A maps to (0.9, 0.7), B to
/// (0.2, 0.1).
pub fn fig1_scores(group: usize) -> Vec<f64> {
    match group {
        0 => vec![0.9, 0.7],
        _ => vec![0.2, 0.1],
    }
}
