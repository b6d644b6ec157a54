//! Linear programming: a dense revised-simplex solver plus a min-cost-flow
//! fast path for transportation-structured problems.
//!
//! Every offline benchmark and fairness rule in this crate reduces to one of
//! these two solvers. The simplex uses Bland's anti-cycling rule throughout,
//! so results are deterministic; degenerate ties resolve to the lowest
//! variable index.

mod simplex;
mod transport;

pub use transport::{solve_transportation, TransportationProblem};

use crate::error::{Error, Result};

/// Optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// Constraint relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// A single dense constraint row.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Self { coeffs, relation, rhs }
    }
}

/// A linear program over real variables with per-variable bounds.
///
/// Bounds default to `[0, +inf)`; a lower bound of `f64::NEG_INFINITY`
/// makes a variable free.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    /// A program with all variables bounded to `[0, +inf)`.
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self { sense, objective, constraints: Vec::new(), bounds: vec![(0.0, f64::INFINITY); n] }
    }

    pub fn add_constraint(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint::new(coeffs, relation, rhs));
    }

    /// Marks variable `j` as free (unbounded below and above).
    pub fn set_free(&mut self, j: usize) {
        self.bounds[j] = (f64::NEG_INFINITY, f64::INFINITY);
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::Shape(format!(
                "{} bounds for {n} variables",
                self.bounds.len()
            )));
        }
        for c in &self.constraints {
            if c.coeffs.len() != n {
                return Err(Error::Shape(format!(
                    "constraint row has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
            if !c.rhs.is_finite() {
                return Err(Error::Shape("constraint rhs must be finite".into()));
            }
        }
        for &(l, u) in &self.bounds {
            if l > u {
                return Err(Error::Shape(format!("empty bound interval [{l}, {u}]")));
            }
        }
        Ok(())
    }
}

/// Termination status of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output. `primal` and `duals` are meaningful only when `Optimal`;
/// `duals[i]` is the shadow price of constraint `i` in the original sense
/// (the rate of change of the optimum per unit of `rhs[i]`).
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub primal: Vec<f64>,
    pub duals: Vec<f64>,
}

/// Solver knobs. The iteration cap guards against stalls; the defaults match
/// the documented contract.
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Maximum simplex pivots; `None` means `10 * (rows + cols)^2`.
    pub max_iterations: Option<usize>,
    /// Entries below this magnitude are not eligible pivots.
    pub pivot_tol: f64,
    /// Phase-1 residual above this is reported as infeasible.
    pub feasibility_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { max_iterations: None, pivot_tol: 1e-10, feasibility_tol: 1e-7 }
    }
}

/// Solves a linear program with default options.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    solve_lp_with(lp, &SolverOptions::default())
}

/// Solves a linear program with explicit options.
pub fn solve_lp_with(lp: &LinearProgram, options: &SolverOptions) -> Result<LpSolution> {
    lp.validate()?;
    simplex::solve(lp, options)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn simple_box_maximum() {
        // max x1 + x2 s.t. x1 <= 1, x2 <= 2
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 1.0]);
        lp.add_constraint(vec![1.0, 0.0], Relation::Le, 1.0);
        lp.add_constraint(vec![0.0, 1.0], Relation::Le, 2.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_close(sol.objective, 3.0, 1e-9);
        assert_close(sol.primal[0], 1.0, 1e-9);
        assert_close(sol.primal[1], 2.0, 1e-9);
    }

    #[test]
    fn infeasible_interval() {
        // min x1 s.t. x1 >= 2, x1 <= 1
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0]);
        lp.add_constraint(vec![1.0], Relation::Ge, 2.0);
        lp.add_constraint(vec![1.0], Relation::Le, 1.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.add_constraint(vec![-1.0], Relation::Le, 1.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_and_free_variable() {
        // min x + y s.t. x + y = 3, x - y = 1, y free
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 1.0]);
        lp.set_free(1);
        lp.add_constraint(vec![1.0, 1.0], Relation::Eq, 3.0);
        lp.add_constraint(vec![1.0, -1.0], Relation::Eq, 1.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_close(sol.primal[0], 2.0, 1e-9);
        assert_close(sol.primal[1], 1.0, 1e-9);
    }

    #[test]
    fn finite_bounds_respected() {
        // max x + 2y with x in [0.5, 2], y in [-1, 1], x + y <= 2
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 2.0]);
        lp.bounds[0] = (0.5, 2.0);
        lp.bounds[1] = (-1.0, 1.0);
        lp.add_constraint(vec![1.0, 1.0], Relation::Le, 2.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_close(sol.objective, 3.0, 1e-9);
        assert_close(sol.primal[1], 1.0, 1e-9);
    }

    #[test]
    fn duals_price_binding_rows() {
        // max 3x + 2y s.t. x + y <= 4, x <= 2. Optimum at (2, 2), value 10.
        // Shadow prices: 2 for the sum row, 1 for the box row.
        let mut lp = LinearProgram::new(Sense::Maximize, vec![3.0, 2.0]);
        lp.add_constraint(vec![1.0, 1.0], Relation::Le, 4.0);
        lp.add_constraint(vec![1.0, 0.0], Relation::Le, 2.0);
        let sol = solve_lp(&lp).unwrap();
        assert_close(sol.objective, 10.0, 1e-9);
        assert_close(sol.duals[0], 2.0, 1e-9);
        assert_close(sol.duals[1], 1.0, 1e-9);
    }

    #[test]
    fn negative_rhs_rows_normalize() {
        // min x s.t. -x <= -2  (i.e. x >= 2)
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0]);
        lp.add_constraint(vec![-1.0], Relation::Le, -2.0);
        let sol = solve_lp(&lp).unwrap();
        assert_close(sol.objective, 2.0, 1e-9);
    }

    #[test]
    fn shape_errors_rejected() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 1.0]);
        lp.add_constraint(vec![1.0], Relation::Le, 1.0);
        assert!(matches!(solve_lp(&lp), Err(Error::Shape(_))));
    }

    #[test]
    fn degenerate_cycling_guard() {
        // Beale's classic cycling example; Bland's rule must terminate.
        let mut lp = LinearProgram::new(
            Sense::Minimize,
            vec![-0.75, 150.0, -0.02, 6.0],
        );
        lp.add_constraint(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0);
        lp.add_constraint(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0);
        lp.add_constraint(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_close(sol.objective, -0.05, 1e-9);
    }
}
