//! Transportation problems: every row ships exactly one unit into capacity-
//! bounded columns.
//!
//! Integral capacities take a successive-shortest-path min-cost-flow route
//! (unit augmentations keep the solution integral); fractional capacities
//! fall back to the simplex.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{solve_lp, LinearProgram, LpStatus, Relation, Sense};
use crate::error::{Error, Result};

const INTEGRALITY_TOL: f64 = 1e-9;

/// `n` unit-demand rows against `M` capacity-bounded columns.
#[derive(Debug, Clone)]
pub struct TransportationProblem {
    /// `n x M` weight matrix.
    pub weights: Vec<Vec<f64>>,
    /// Column capacities; fractional values are allowed.
    pub capacities: Vec<f64>,
}

impl TransportationProblem {
    pub fn new(weights: Vec<Vec<f64>>, capacities: Vec<f64>) -> Self {
        Self { weights, capacities }
    }

    fn validate(&self) -> Result<()> {
        let m = self.capacities.len();
        for row in &self.weights {
            if row.len() != m {
                return Err(Error::Shape(format!(
                    "weight row has {} entries, {} columns expected",
                    row.len(),
                    m
                )));
            }
        }
        if self.capacities.iter().any(|&c| c < 0.0 || !c.is_finite()) {
            return Err(Error::Validation("capacities must be non-negative".into()));
        }
        let total: f64 = self.capacities.iter().sum();
        if total + INTEGRALITY_TOL < self.weights.len() as f64 {
            return Err(Error::Infeasible(format!(
                "total capacity {total} cannot absorb {} rows",
                self.weights.len()
            )));
        }
        Ok(())
    }
}

/// Optimizes total weight over the transportation polytope.
///
/// Returns the objective value and the fractional assignment rows (each
/// summing to one). With integral capacities the rows are 0/1.
pub fn solve_transportation(
    problem: &TransportationProblem,
    maximize: bool,
) -> Result<(f64, Vec<Vec<f64>>)> {
    problem.validate()?;
    let n = problem.weights.len();
    if n == 0 {
        return Ok((0.0, Vec::new()));
    }
    let integral = problem
        .capacities
        .iter()
        .all(|&c| (c - c.round()).abs() <= INTEGRALITY_TOL);
    if integral {
        solve_by_flow(problem, maximize)
    } else {
        solve_by_lp(problem, maximize)
    }
}

/// Entry in the Dijkstra heap; ordering is by distance with index ties, so
/// traversal order is deterministic.
#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; reverse for min behaviour.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct FlowEdge {
    to: usize,
    residual: u64,
    cost: f64,
    twin: usize,
}

struct FlowGraph {
    adj: Vec<Vec<usize>>,
    edges: Vec<FlowEdge>,
}

impl FlowGraph {
    fn new(nodes: usize) -> Self {
        Self { adj: vec![Vec::new(); nodes], edges: Vec::new() }
    }

    fn link(&mut self, from: usize, to: usize, capacity: u64, cost: f64) {
        let e = self.edges.len();
        self.edges.push(FlowEdge { to, residual: capacity, cost, twin: e + 1 });
        self.edges.push(FlowEdge { to: from, residual: 0, cost: -cost, twin: e });
        self.adj[from].push(e);
        self.adj[to].push(e + 1);
    }
}

/// Successive shortest paths with Johnson potentials; all reduced costs stay
/// non-negative because the raw costs are shifted to be non-negative.
fn solve_by_flow(problem: &TransportationProblem, maximize: bool) -> Result<(f64, Vec<Vec<f64>>)> {
    let n = problem.weights.len();
    let m = problem.capacities.len();
    let source = 0;
    let sink = n + m + 1;
    let row_node = |t: usize| 1 + t;
    let col_node = |j: usize| 1 + n + j;

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for row in &problem.weights {
        for &w in row {
            lo = lo.min(w);
            hi = hi.max(w);
        }
    }
    let shift_cost = |w: f64| if maximize { hi - w } else { w - lo };

    let mut graph = FlowGraph::new(n + m + 2);
    for t in 0..n {
        graph.link(source, row_node(t), 1, 0.0);
    }
    for (t, row) in problem.weights.iter().enumerate() {
        for (j, &w) in row.iter().enumerate() {
            graph.link(row_node(t), col_node(j), 1, shift_cost(w));
        }
    }
    for (j, &cap) in problem.capacities.iter().enumerate() {
        graph.link(col_node(j), sink, cap.round() as u64, 0.0);
    }

    let nodes = n + m + 2;
    let mut potential = vec![0.0_f64; nodes];
    let mut dist = vec![f64::INFINITY; nodes];
    let mut prev_edge = vec![usize::MAX; nodes];

    for _ in 0..n {
        dist.fill(f64::INFINITY);
        prev_edge.fill(usize::MAX);
        dist[source] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(HeapEntry { dist: 0.0, node: source });
        while let Some(HeapEntry { dist: du, node: u }) = heap.pop() {
            if du > dist[u] + 1e-12 {
                continue;
            }
            for &e in &graph.adj[u] {
                let edge = &graph.edges[e];
                if edge.residual == 0 {
                    continue;
                }
                let nd = dist[u] + edge.cost + potential[u] - potential[edge.to];
                if nd + 1e-12 < dist[edge.to] {
                    dist[edge.to] = nd;
                    prev_edge[edge.to] = e;
                    heap.push(HeapEntry { dist: nd, node: edge.to });
                }
            }
        }
        if prev_edge[sink] == usize::MAX {
            return Err(Error::Infeasible("transportation network has no augmenting path".into()));
        }
        for v in 0..nodes {
            if dist[v].is_finite() {
                potential[v] += dist[v];
            }
        }
        let mut v = sink;
        while v != source {
            let e = prev_edge[v];
            graph.edges[e].residual -= 1;
            let twin = graph.edges[e].twin;
            graph.edges[twin].residual += 1;
            v = graph.edges[twin].to;
        }
    }

    // Read the chosen column per row off the residual network.
    let mut rows = vec![vec![0.0; m]; n];
    let mut total = 0.0;
    for t in 0..n {
        let mut chosen = None;
        for &e in &graph.adj[row_node(t)] {
            let edge = &graph.edges[e];
            if edge.to != source && edge.residual == 0 && edge.cost >= 0.0 {
                chosen = Some(edge.to - 1 - n);
                break;
            }
        }
        let j = chosen.ok_or_else(|| Error::Invariant("row left unassigned by flow".into()))?;
        rows[t][j] = 1.0;
        total += problem.weights[t][j];
    }
    Ok((total, rows))
}

fn solve_by_lp(problem: &TransportationProblem, maximize: bool) -> Result<(f64, Vec<Vec<f64>>)> {
    let n = problem.weights.len();
    let m = problem.capacities.len();
    let sense = if maximize { Sense::Maximize } else { Sense::Minimize };
    let mut objective = Vec::with_capacity(n * m);
    for row in &problem.weights {
        objective.extend_from_slice(row);
    }
    let mut lp = LinearProgram::new(sense, objective);
    for t in 0..n {
        let mut row = vec![0.0; n * m];
        for j in 0..m {
            row[t * m + j] = 1.0;
        }
        lp.add_constraint(row, Relation::Eq, 1.0);
    }
    for (j, &cap) in problem.capacities.iter().enumerate() {
        let mut row = vec![0.0; n * m];
        for t in 0..n {
            row[t * m + j] = 1.0;
        }
        lp.add_constraint(row, Relation::Le, cap);
    }
    let sol = solve_lp(&lp)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => {
            return Err(Error::Infeasible("transportation program infeasible".into()))
        }
        LpStatus::Unbounded => {
            return Err(Error::Invariant("bounded transportation program reported unbounded".into()))
        }
    }
    let mut rows = vec![vec![0.0; m]; n];
    for t in 0..n {
        for j in 0..m {
            rows[t][j] = sol.primal[t * m + j].clamp(0.0, 1.0);
        }
    }
    Ok((sol.objective, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_pair_placement() {
        let p = TransportationProblem::new(
            vec![vec![0.9, 0.7], vec![0.9, 0.7]],
            vec![1.0, 1.0],
        );
        let (value, rows) = solve_transportation(&p, true).unwrap();
        assert!((value - 1.6).abs() < 1e-9);
        for row in &rows {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn single_open_column() {
        let p = TransportationProblem::new(
            vec![vec![0.9, 0.4], vec![0.5, 0.3], vec![0.2, 0.6]],
            vec![0.0, 3.0],
        );
        let (value, rows) = solve_transportation(&p, true).unwrap();
        assert!((value - (0.4 + 0.3 + 0.6)).abs() < 1e-9);
        for row in &rows {
            assert_eq!(row[0], 0.0);
        }
    }

    #[test]
    fn deficient_capacity_is_an_error() {
        let p = TransportationProblem::new(vec![vec![1.0], vec![1.0]], vec![1.0]);
        assert!(matches!(solve_transportation(&p, true), Err(Error::Infeasible(_))));
    }

    #[test]
    fn flow_matches_lp_route() {
        // Integral capacities solved by both routes must agree.
        let weights = vec![
            vec![0.12, 0.81, 0.33],
            vec![0.77, 0.42, 0.58],
            vec![0.91, 0.05, 0.49],
            vec![0.27, 0.64, 0.70],
        ];
        let caps = vec![2.0, 1.0, 1.0];
        let p = TransportationProblem::new(weights, caps);
        let (by_flow, _) = solve_by_flow(&p, true).unwrap();
        let (by_lp, _) = solve_by_lp(&p, true).unwrap();
        assert!((by_flow - by_lp).abs() < 1e-7, "{by_flow} vs {by_lp}");
        let (min_flow, _) = solve_by_flow(&p, false).unwrap();
        let (min_lp, _) = solve_by_lp(&p, false).unwrap();
        assert!((min_flow - min_lp).abs() < 1e-7);
    }

    #[test]
    fn fractional_caps_take_lp_route() {
        // One row, capacities below one at every column: value is the best
        // feasible mix, here 0.5 * 0.9 + 0.5 * 0.7.
        let p = TransportationProblem::new(vec![vec![0.9, 0.7]], vec![0.5, 0.9]);
        let (value, rows) = solve_transportation(&p, true).unwrap();
        assert!((value - (0.5 * 0.9 + 0.5 * 0.7)).abs() < 1e-9);
        assert!((rows[0][0] - 0.5).abs() < 1e-9);
    }
}
