//! Self-contained LP and MIP solver core.
//!
//! The solver is a bounded-variable two-phase primal simplex (Dantzig pricing
//! with a Bland anti-cycling fallback) plus a best-bound branch-and-bound
//! driver for binary variables. It is deliberately small: dense basis inverse
//! with periodic refactorization, power-of-two equilibration scaling, and no
//! cut generation. All tolerances live in [`SolverOptions`].

pub mod mip;
mod simplex;
mod writer;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Row sense of a linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// Variable integrality marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Integrality {
    Continuous,
    Binary,
}

/// Termination status of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// A linear program in `min c'x` form with row constraints and variable
/// bounds. Rows are stored sparse; bounds may be infinite.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    objective: Vec<f64>,
    rows: Vec<Vec<(usize, f64)>>,
    relations: Vec<Relation>,
    rhs: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    integrality: Vec<Integrality>,
    names: Vec<Option<String>>,
    basis_hints: Vec<(RowId, usize)>,
}

/// Index of a row returned by [`LinearProgram::add_row`].
pub type RowId = usize;

impl LinearProgram {
    /// Creates a program with `n_vars` continuous variables, zero objective,
    /// and free bounds.
    pub fn new(n_vars: usize) -> Self {
        Self {
            objective: vec![0.0; n_vars],
            rows: Vec::new(),
            relations: Vec::new(),
            rhs: Vec::new(),
            lower: vec![f64::NEG_INFINITY; n_vars],
            upper: vec![f64::INFINITY; n_vars],
            integrality: vec![Integrality::Continuous; n_vars],
            names: vec![None; n_vars],
            basis_hints: Vec::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn set_objective(&mut self, var: usize, coeff: f64) {
        self.objective[var] = coeff;
    }

    pub fn objective_coeff(&self, var: usize) -> f64 {
        self.objective[var]
    }

    /// Sets both bounds; `NEG_INFINITY`/`INFINITY` mean unbounded.
    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        assert!(
            lower <= upper,
            "variable {var}: lower bound {lower} exceeds upper bound {upper}"
        );
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn bounds(&self, var: usize) -> (f64, f64) {
        (self.lower[var], self.upper[var])
    }

    pub fn mark_binary(&mut self, var: usize) {
        self.integrality[var] = Integrality::Binary;
        self.lower[var] = self.lower[var].max(0.0);
        self.upper[var] = self.upper[var].min(1.0);
    }

    pub fn integrality(&self, var: usize) -> Integrality {
        self.integrality[var]
    }

    pub fn binary_vars(&self) -> Vec<usize> {
        (0..self.n_vars())
            .filter(|&j| self.integrality[j] == Integrality::Binary)
            .collect()
    }

    pub fn has_binaries(&self) -> bool {
        self.integrality.iter().any(|&i| i == Integrality::Binary)
    }

    pub fn set_name(&mut self, var: usize, name: impl Into<String>) {
        self.names[var] = Some(name.into());
    }

    pub(crate) fn var_name(&self, var: usize) -> String {
        self.names[var].clone().unwrap_or_else(|| format!("x{var}"))
    }

    /// Adds a constraint row from sparse `(var, coeff)` terms. Terms on the
    /// same variable are summed.
    pub fn add_row(&mut self, terms: &[(usize, f64)], relation: Relation, rhs: f64) -> RowId {
        let mut row: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
        for &(j, v) in terms {
            assert!(j < self.n_vars(), "row references unknown variable {j}");
            if v == 0.0 {
                continue;
            }
            match row.iter_mut().find(|(k, _)| *k == j) {
                Some((_, acc)) => *acc += v,
                None => row.push((j, v)),
            }
        }
        row.sort_by_key(|&(j, _)| j);
        self.rows.push(row);
        self.relations.push(relation);
        self.rhs.push(rhs);
        self.rows.len() - 1
    }

    pub fn row(&self, r: RowId) -> (&[(usize, f64)], Relation, f64) {
        (&self.rows[r], self.relations[r], self.rhs[r])
    }

    /// Suggests starting the simplex with `var` basic in `row`. Only honored
    /// when `var` appears in exactly that one row and its value stays within
    /// bounds; several hints may target the same row, first feasible wins.
    pub fn hint_basis(&mut self, row: RowId, var: usize) {
        self.basis_hints.push((row, var));
    }

    pub(crate) fn basis_hints(&self) -> &[(RowId, usize)] {
        &self.basis_hints
    }

    pub(crate) fn rows(&self) -> &[Vec<(usize, f64)>] {
        &self.rows
    }

    pub(crate) fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub(crate) fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub(crate) fn lower_bounds(&self) -> &[f64] {
        &self.lower
    }

    pub(crate) fn upper_bounds(&self) -> &[f64] {
        &self.upper
    }

    pub(crate) fn objective_vec(&self) -> &[f64] {
        &self.objective
    }

    /// Objective value of a point.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Margin by which a Farkas ray `y` certifies infeasibility:
    /// `y'b - sup { y'(Ax + s) : x, s within bounds }`, where `s` are the
    /// implicit row slacks. A strictly positive margin proves that no point
    /// within the bounds satisfies all rows.
    pub fn farkas_violation(&self, y: &[f64]) -> f64 {
        assert_eq!(y.len(), self.n_rows());
        // sup over x of (y'A) x, separable per variable
        let mut yta = vec![0.0; self.n_vars()];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                yta[j] += y[i] * v;
            }
        }
        let mut sup = 0.0;
        for j in 0..self.n_vars() {
            let a = yta[j];
            if a.abs() <= 1e-12 {
                continue;
            }
            let at = if a > 0.0 { self.upper[j] } else { self.lower[j] };
            if !at.is_finite() {
                return f64::NEG_INFINITY;
            }
            sup += a * at;
        }
        // sup over slack values: s in [0,inf) for Le, (-inf,0] for Ge, {0} for Eq
        for (i, rel) in self.relations.iter().enumerate() {
            let yi = y[i];
            match rel {
                Relation::Le if yi > 1e-12 => return f64::NEG_INFINITY,
                Relation::Ge if yi < -1e-12 => return f64::NEG_INFINITY,
                _ => {}
            }
        }
        let ytb: f64 = y.iter().zip(&self.rhs).map(|(yi, bi)| yi * bi).sum();
        ytb - sup
    }

    /// Writes the program in CPLEX LP interchange format for cross-checking
    /// against external solvers.
    pub fn write_lp_format<W: std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        writer::write_lp(self, w)
    }
}

/// Solution of an LP or MIP solve.
///
/// `duals[i]` is the shadow price of row `i` (the derivative of the optimal
/// objective with respect to the row's right-hand side). `reduced_costs[j]`
/// is the derivative with respect to variable `j`'s active bound. For a MIP,
/// both are taken from the LP with the binaries fixed at the incumbent.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    pub duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub objective: f64,
    /// Farkas infeasibility certificate (per row), present when
    /// `status == Infeasible` and a ray was recovered.
    pub farkas: Option<Vec<f64>>,
    /// Absolute optimality gap (MIP only; 0 for proven optima and LPs).
    pub gap: f64,
    pub iterations: usize,
    pub nodes: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// The dual objective implied by `duals`/`reduced_costs`; equals the
    /// primal objective within `tol_dual` at an optimum.
    pub fn dual_objective(&self, lp: &LinearProgram) -> f64 {
        let mut obj: f64 = self
            .duals
            .iter()
            .zip(lp.rhs())
            .map(|(y, b)| y * b)
            .sum();
        for j in 0..lp.n_vars() {
            let d = self.reduced_costs[j];
            if d.abs() <= 1e-12 {
                continue;
            }
            let (lo, up) = lp.bounds(j);
            // reduced cost prices the bound the variable sits on
            let x = self.primal[j];
            let at = if (x - lo).abs() <= (up - x).abs() { lo } else { up };
            if at.is_finite() {
                obj += d * at;
            }
        }
        obj
    }
}

/// Solver tolerances and limits. Defaults match the values used throughout
/// the planning stack.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Primal feasibility tolerance on scaled data.
    pub tol_feas: f64,
    /// Relative primal/dual objective agreement required at optima.
    pub tol_dual: f64,
    /// Integrality tolerance for binaries.
    pub tol_int: f64,
    /// Absolute MIP optimality gap.
    pub gap_abs: f64,
    pub iteration_limit: usize,
    pub node_limit: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol_feas: 1e-7,
            tol_dual: 1e-6,
            tol_int: 1e-6,
            gap_abs: 1e-9,
            iteration_limit: 200_000,
            node_limit: 1_000_000,
        }
    }
}

/// Errors for structurally unusable programs (solver outcomes such as
/// infeasibility are reported through [`LpStatus`], not here).
#[derive(Debug, Error)]
pub enum LpError {
    #[error("variable {var}: lower bound {lower} exceeds upper bound {upper}")]
    BadBounds { var: usize, lower: f64, upper: f64 },
    #[error("non-finite coefficient in row {row}")]
    BadCoefficient { row: usize },
    #[error("binary variable {var} has bounds outside [0, 1]")]
    BadBinaryBounds { var: usize },
}

fn check(lp: &LinearProgram) -> Result<(), LpError> {
    for j in 0..lp.n_vars() {
        let (lo, up) = lp.bounds(j);
        if lo > up || lo.is_nan() || up.is_nan() {
            return Err(LpError::BadBounds { var: j, lower: lo, upper: up });
        }
        if lp.integrality(j) == Integrality::Binary && (lo < -1e-9 || up > 1.0 + 1e-9) {
            return Err(LpError::BadBinaryBounds { var: j });
        }
    }
    for (i, row) in lp.rows().iter().enumerate() {
        if row.iter().any(|(_, v)| !v.is_finite()) || !lp.rhs()[i].is_finite() {
            return Err(LpError::BadCoefficient { row: i });
        }
    }
    Ok(())
}

/// Solves a pure LP (integrality markers are ignored).
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    solve_lp_with(lp, &SolverOptions::default())
}

pub fn solve_lp_with(lp: &LinearProgram, options: &SolverOptions) -> Result<LpSolution, LpError> {
    check(lp)?;
    Ok(simplex::solve(lp, lp.lower_bounds(), lp.upper_bounds(), options))
}

/// Solves a MIP by branch-and-bound over LP relaxations. Returns the proven
/// optimum when the gap closes below `gap_abs`, otherwise the best incumbent
/// with the remaining gap reported.
pub fn solve_mip(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    solve_mip_with(lp, &SolverOptions::default())
}

pub fn solve_mip_with(lp: &LinearProgram, options: &SolverOptions) -> Result<LpSolution, LpError> {
    check(lp)?;
    Ok(mip::branch_and_bound(lp, options))
}

/// Solver abstraction: anything that maps a [`LinearProgram`] to an
/// [`LpSolution`]. The built-in core is the reference implementation; an
/// external solver can be substituted behind this trait.
pub trait Solve {
    fn solve(&self, lp: &LinearProgram) -> Result<LpSolution, LpError>;
}

/// The built-in simplex/branch-and-bound solver.
#[derive(Debug, Clone, Default)]
pub struct BuiltinSolver {
    pub options: SolverOptions,
}

impl Solve for BuiltinSolver {
    fn solve(&self, lp: &LinearProgram) -> Result<LpSolution, LpError> {
        if lp.has_binaries() {
            solve_mip_with(lp, &self.options)
        } else {
            solve_lp_with(lp, &self.options)
        }
    }
}
