//! Domain types: instances, arriving cases, sample paths, and assignments.
//!
//! An [`Instance`] fixes the static side of the problem (locations with
//! capacities, a horizon of `T` cases, a universe of groups). A
//! [`SamplePath`] is one realization of the arrival process: `T` cases, each
//! carrying a group label and a per-location score vector. Assignments come
//! in two flavours, fractional matrices over the feasibility polytope and
//! integral location choices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for fractional feasibility checks.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// A resettlement location with a hard capacity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocationSpec {
    pub id: String,
    /// Maximum number of cases this location can absorb.
    pub capacity: u64,
}

/// Static problem data: locations, horizon, and the group universe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    locations: Vec<LocationSpec>,
    horizon: usize,
    groups: Vec<String>,
}

impl Instance {
    /// Validates and builds an instance.
    ///
    /// Requires unique location and group identifiers, and total capacity at
    /// least `horizon` so that every case is placeable.
    pub fn new(locations: Vec<LocationSpec>, horizon: usize, groups: Vec<String>) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::Validation("horizon must be positive".into()));
        }
        if locations.is_empty() {
            return Err(Error::Validation("at least one location required".into()));
        }
        if groups.is_empty() {
            return Err(Error::Validation("at least one group required".into()));
        }
        let total: u64 = locations.iter().map(|l| l.capacity).sum();
        if total < horizon as u64 {
            return Err(Error::Validation(format!(
                "total capacity {} is below horizon {}",
                total, horizon
            )));
        }
        for (i, a) in locations.iter().enumerate() {
            if locations[..i].iter().any(|b| b.id == a.id) {
                return Err(Error::Validation(format!("duplicate location id '{}'", a.id)));
            }
        }
        for (i, a) in groups.iter().enumerate() {
            if groups[..i].contains(a) {
                return Err(Error::Validation(format!("duplicate group id '{a}'")));
            }
        }
        Ok(Self { locations, horizon, groups })
    }

    pub fn locations(&self) -> &[LocationSpec] {
        &self.locations
    }

    /// Number of locations `M`.
    pub fn num_locations(&self) -> usize {
        self.locations.len()
    }

    /// Horizon `T`: the number of cases per sample path.
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn groups(&self) -> &[String] {
        &self.groups
    }

    /// Number of groups `G`.
    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }

    /// Index of a group id within the universe.
    pub fn group_index(&self, id: &str) -> Option<usize> {
        self.groups.iter().position(|g| g == id)
    }

    /// Capacities as a vector aligned with `locations()`.
    pub fn capacities(&self) -> Vec<u64> {
        self.locations.iter().map(|l| l.capacity).collect()
    }

    /// Fractional capacity of location `j`: `s_j / T`.
    pub fn fractional_capacity(&self, j: usize) -> f64 {
        self.locations[j].capacity as f64 / self.horizon as f64
    }

    /// Smallest fractional capacity across locations.
    pub fn min_fractional_capacity(&self) -> f64 {
        (0..self.num_locations())
            .map(|j| self.fractional_capacity(j))
            .fold(f64::INFINITY, f64::min)
    }
}

/// One arriving case: a group label and a score per location.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    /// Index into `Instance::groups`.
    pub group: usize,
    /// Estimated success probability at each location, in `[0, 1]`.
    pub scores: Vec<f64>,
}

impl Case {
    pub fn new(group: usize, scores: Vec<f64>) -> Self {
        Self { group, scores }
    }

    /// Best score over all locations; 0 for an empty score vector.
    pub fn max_score(&self) -> f64 {
        self.scores.iter().copied().fold(0.0_f64, f64::max)
    }

    fn validate(&self, instance: &Instance) -> Result<()> {
        if self.group >= instance.num_groups() {
            return Err(Error::Validation(format!(
                "group index {} out of range (G = {})",
                self.group,
                instance.num_groups()
            )));
        }
        if self.scores.len() != instance.num_locations() {
            return Err(Error::Shape(format!(
                "case has {} scores, instance has {} locations",
                self.scores.len(),
                instance.num_locations()
            )));
        }
        for &w in &self.scores {
            if !(0.0..=1.0).contains(&w) || !w.is_finite() {
                return Err(Error::Validation(format!("score {w} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// An ordered realization of exactly `T` cases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePath {
    cases: Vec<Case>,
}

impl SamplePath {
    /// Validates the path against an instance (length `T`, score ranges).
    pub fn new(instance: &Instance, cases: Vec<Case>) -> Result<Self> {
        if cases.len() != instance.horizon() {
            return Err(Error::Shape(format!(
                "path has {} cases, horizon is {}",
                cases.len(),
                instance.horizon()
            )));
        }
        for case in &cases {
            case.validate(instance)?;
        }
        Ok(Self { cases })
    }

    pub fn cases(&self) -> &[Case] {
        &self.cases
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }
}

/// Per-group arrival counts `N(g, t)` over the first `t` cases.
pub fn group_counts(instance: &Instance, path: &SamplePath, t: usize) -> Result<Vec<usize>> {
    if t > path.len() {
        return Err(Error::Argument(format!("t = {t} exceeds path length {}", path.len())));
    }
    let mut counts = vec![0usize; instance.num_groups()];
    for case in &path.cases()[..t] {
        counts[case.group] += 1;
    }
    Ok(counts)
}

/// Indices of group-`g` cases among the first `t` arrivals (the set `A(g, t)`).
pub fn group_indices(path: &SamplePath, group: usize, t: usize) -> Result<Vec<usize>> {
    if t > path.len() {
        return Err(Error::Argument(format!("t = {t} exceeds path length {}", path.len())));
    }
    Ok(path.cases()[..t]
        .iter()
        .enumerate()
        .filter(|(_, c)| c.group == group)
        .map(|(i, _)| i)
        .collect())
}

/// A fractional assignment: a `T x M` matrix with unit row sums and
/// capacity-bounded column sums.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalAssignment {
    pub matrix: Vec<Vec<f64>>,
}

impl FractionalAssignment {
    pub fn new(matrix: Vec<Vec<f64>>) -> Self {
        Self { matrix }
    }
}

/// Checks membership of a fractional assignment in the feasibility polytope:
/// every row sums to 1 and column `j` uses at most `s_j`, both within
/// [`FEASIBILITY_TOL`].
pub fn check_fractional_feasibility(
    instance: &Instance,
    assignment: &FractionalAssignment,
) -> Result<bool> {
    let t = instance.horizon();
    let m = instance.num_locations();
    if assignment.matrix.len() != t {
        return Err(Error::Shape(format!(
            "assignment has {} rows, horizon is {t}",
            assignment.matrix.len()
        )));
    }
    for row in &assignment.matrix {
        if row.len() != m {
            return Err(Error::Shape(format!("row has {} entries, expected {m}", row.len())));
        }
    }
    let mut col_sums = vec![0.0_f64; m];
    for row in &assignment.matrix {
        let mut row_sum = 0.0;
        for (j, &v) in row.iter().enumerate() {
            if v < -FEASIBILITY_TOL || v > 1.0 + FEASIBILITY_TOL {
                return Ok(false);
            }
            row_sum += v;
            col_sums[j] += v;
        }
        if (row_sum - 1.0).abs() > FEASIBILITY_TOL {
            return Ok(false);
        }
    }
    for (j, &s) in col_sums.iter().enumerate() {
        if s > instance.locations()[j].capacity as f64 + FEASIBILITY_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sentinel-aware integral assignment: one chosen location per case.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralAssignment {
    chosen: Vec<Option<usize>>,
}

impl IntegralAssignment {
    /// An all-unassigned assignment for a horizon of `t` cases.
    pub fn unassigned(t: usize) -> Self {
        Self { chosen: vec![None; t] }
    }

    /// Builds a complete assignment, validating capacities.
    pub fn complete(instance: &Instance, chosen: Vec<usize>) -> Result<Self> {
        let mut a = Self::unassigned(chosen.len());
        if chosen.len() != instance.horizon() {
            return Err(Error::Shape(format!(
                "assignment has {} entries, horizon is {}",
                chosen.len(),
                instance.horizon()
            )));
        }
        for (t, j) in chosen.into_iter().enumerate() {
            a.assign(instance, t, j)?;
        }
        Ok(a)
    }

    /// Records case `t` at location `j`, enforcing capacity.
    pub fn assign(&mut self, instance: &Instance, t: usize, j: usize) -> Result<()> {
        if j >= instance.num_locations() {
            return Err(Error::Argument(format!("location index {j} out of range")));
        }
        if self.chosen[t].is_some() {
            return Err(Error::Invariant(format!("case {t} assigned twice")));
        }
        let used = self.chosen.iter().flatten().filter(|&&c| c == j).count() as u64;
        if used + 1 > instance.locations()[j].capacity {
            return Err(Error::Invariant(format!(
                "capacity of location {j} ({}) exceeded",
                instance.locations()[j].capacity
            )));
        }
        self.chosen[t] = Some(j);
        Ok(())
    }

    /// Location of case `t`, or `None` while still unassigned.
    pub fn chosen(&self, t: usize) -> Option<usize> {
        self.chosen[t]
    }

    /// True once every case has a location.
    pub fn is_complete(&self) -> bool {
        self.chosen.iter().all(Option::is_some)
    }

    /// Complete assignment as a plain index vector.
    pub fn to_indices(&self) -> Result<Vec<usize>> {
        self.chosen
            .iter()
            .map(|c| c.ok_or_else(|| Error::Invariant("assignment incomplete".into())))
            .collect()
    }

    /// Number of cases currently placed at location `j`.
    pub fn usage(&self, j: usize) -> usize {
        self.chosen.iter().flatten().filter(|&&c| c == j).count()
    }
}

/// Average score `alpha_g` realized by group `g` under a complete assignment.
///
/// Empty groups average to 0.
pub fn group_average_score(
    instance: &Instance,
    path: &SamplePath,
    assignment: &IntegralAssignment,
    group: usize,
) -> Result<f64> {
    if !assignment.is_complete() {
        return Err(Error::Argument("assignment incomplete".into()));
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for (t, case) in path.cases().iter().enumerate() {
        if case.group == group {
            let j = assignment.chosen(t).expect("complete");
            total += case.scores[j];
            count += 1;
        }
    }
    let _ = instance;
    Ok(total / (count.max(1) as f64))
}

/// Population-wide average score of a complete assignment.
pub fn global_average_score(path: &SamplePath, assignment: &IntegralAssignment) -> Result<f64> {
    if !assignment.is_complete() {
        return Err(Error::Argument("assignment incomplete".into()));
    }
    let total: f64 = path
        .cases()
        .iter()
        .enumerate()
        .map(|(t, c)| c.scores[assignment.chosen(t).expect("complete")])
        .sum();
    Ok(total / path.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{fig1_instance, fig1_path};

    #[test]
    fn instance_rejects_deficient_capacity() {
        let locs = vec![
            LocationSpec { id: "a".into(), capacity: 1 },
            LocationSpec { id: "b".into(), capacity: 1 },
        ];
        let err = Instance::new(locs, 3, vec!["g".into()]).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn instance_rejects_duplicate_ids() {
        let locs = vec![
            LocationSpec { id: "a".into(), capacity: 2 },
            LocationSpec { id: "a".into(), capacity: 2 },
        ];
        assert!(Instance::new(locs, 2, vec!["g".into()]).is_err());
    }

    #[test]
    fn fractional_capacities_are_derived() {
        let inst = fig1_instance();
        assert_eq!(inst.fractional_capacity(0), 0.5);
        assert_eq!(inst.min_fractional_capacity(), 0.5);
    }

    #[test]
    fn group_counts_fig1() {
        let inst = fig1_instance();
        let path = fig1_path(&inst);
        let counts = group_counts(&inst, &path, 100).unwrap();
        assert_eq!(counts, vec![50, 50]);
        assert_eq!(group_counts(&inst, &path, 0).unwrap(), vec![0, 0]);
    }

    #[test]
    fn group_counts_small_prefix() {
        let inst = Instance::new(
            vec![LocationSpec { id: "l".into(), capacity: 3 }],
            3,
            vec!["A".into(), "B".into()],
        )
        .unwrap();
        let path = SamplePath::new(
            &inst,
            vec![
                Case::new(0, vec![0.5]),
                Case::new(1, vec![0.5]),
                Case::new(0, vec![0.5]),
            ],
        )
        .unwrap();
        assert_eq!(group_counts(&inst, &path, 2).unwrap(), vec![1, 1]);
        assert!(group_counts(&inst, &path, 4).is_err());
        assert_eq!(group_indices(&path, 0, 3).unwrap(), vec![0, 2]);
    }

    #[test]
    fn group_average_hand_values() {
        let inst = Instance::new(
            vec![
                LocationSpec { id: "1".into(), capacity: 1 },
                LocationSpec { id: "2".into(), capacity: 1 },
            ],
            2,
            vec!["g".into(), "h".into()],
        )
        .unwrap();
        let path = SamplePath::new(
            &inst,
            vec![Case::new(0, vec![0.9, 0.3]), Case::new(0, vec![0.2, 0.7])],
        )
        .unwrap();
        let a = IntegralAssignment::complete(&inst, vec![0, 1]).unwrap();
        let avg = group_average_score(&inst, &path, &a, 0).unwrap();
        assert!((avg - 0.8).abs() < 1e-12);
        // empty group averages to zero
        assert_eq!(group_average_score(&inst, &path, &a, 1).unwrap(), 0.0);
    }

    #[test]
    fn singleton_group_average_is_its_score() {
        let inst = Instance::new(
            vec![LocationSpec { id: "1".into(), capacity: 1 }],
            1,
            vec!["g".into()],
        )
        .unwrap();
        let path = SamplePath::new(&inst, vec![Case::new(0, vec![0.57])]).unwrap();
        let a = IntegralAssignment::complete(&inst, vec![0]).unwrap();
        assert_eq!(group_average_score(&inst, &path, &a, 0).unwrap(), 0.57);
    }

    #[test]
    fn fractional_feasibility_cases() {
        let inst = Instance::new(
            vec![
                LocationSpec { id: "1".into(), capacity: 1 },
                LocationSpec { id: "2".into(), capacity: 1 },
            ],
            2,
            vec!["g".into()],
        )
        .unwrap();
        let identity = FractionalAssignment::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(check_fractional_feasibility(&inst, &identity).unwrap());
        let overfull = FractionalAssignment::new(vec![vec![1.0, 0.0], vec![1.0, 0.0]]);
        assert!(!check_fractional_feasibility(&inst, &overfull).unwrap());
        let bad_shape = FractionalAssignment::new(vec![vec![1.0]]);
        assert!(check_fractional_feasibility(&inst, &bad_shape).is_err());
    }

    #[test]
    fn split_row_is_feasible() {
        let inst = Instance::new(
            vec![
                LocationSpec { id: "1".into(), capacity: 1 },
                LocationSpec { id: "2".into(), capacity: 1 },
            ],
            1,
            vec!["g".into()],
        )
        .unwrap();
        let half = FractionalAssignment::new(vec![vec![0.5, 0.5]]);
        assert!(check_fractional_feasibility(&inst, &half).unwrap());
    }

    #[test]
    fn integral_assignment_enforces_capacity() {
        let inst = Instance::new(
            vec![
                LocationSpec { id: "1".into(), capacity: 1 },
                LocationSpec { id: "2".into(), capacity: 1 },
            ],
            2,
            vec!["g".into()],
        )
        .unwrap();
        assert!(IntegralAssignment::complete(&inst, vec![0, 0]).is_err());
        assert!(IntegralAssignment::complete(&inst, vec![0, 1]).is_ok());
    }
}
