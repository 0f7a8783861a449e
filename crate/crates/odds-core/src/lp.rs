//! Linear-program containers and the three formulations: the flow LP, its
//! dual in raw (P1) and reduced (P) form, and the classical reduced LP for
//! the secretary problem.
//!
//! Variable and constraint names are fixed (`y_i`, `z_i`, `w_i`, `alpha_i`;
//! `Cap_i`, `Cons_i`, `Source`, `Reward_i`, `Link_i`, `Stop_i`, `Mono_i`,
//! `Terminal`) and rows and columns are emitted in a fixed order, so
//! exported problems are deterministic and diffable.

use crate::types::{FlowSolution, Instance, ValueVector};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

impl Rel {
    pub fn symbol(&self) -> &'static str {
        match self {
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ge => ">=",
        }
    }
}

/// Opaque handle to a declared variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarId(pub usize);

#[derive(Debug, Clone)]
pub struct Variable {
    pub name: String,
    pub objective: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(VarId, f64)>,
    pub rel: Rel,
    pub rhs: f64,
}

/// A general linear program over named variables.
///
/// Construction panics on malformed input (non-finite coefficients,
/// duplicate names, references to undeclared variables): those are
/// programming errors in the builders, not runtime conditions.
#[derive(Debug, Clone)]
pub struct LpProblem {
    name: String,
    sense: Sense,
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
}

impl LpProblem {
    pub fn new(name: impl Into<String>, sense: Sense) -> Self {
        LpProblem {
            name: name.into(),
            sense,
            variables: Vec::new(),
            constraints: Vec::new(),
        }
    }

    /// Declares a variable; `lower`/`upper` may be infinite.
    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        objective: f64,
        lower: f64,
        upper: f64,
    ) -> VarId {
        let name = name.into();
        assert!(objective.is_finite(), "objective for {name} must be finite");
        assert!(!lower.is_nan() && !upper.is_nan(), "bounds for {name} must not be NaN");
        assert!(lower <= upper, "empty bound interval for {name}");
        assert!(
            self.variables.iter().all(|v| v.name != name),
            "duplicate variable name {name}"
        );
        self.variables.push(Variable {
            name,
            objective,
            lower,
            upper,
        });
        VarId(self.variables.len() - 1)
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(VarId, f64)>,
        rel: Rel,
        rhs: f64,
    ) {
        let name = name.into();
        assert!(rhs.is_finite(), "rhs of {name} must be finite");
        assert!(
            self.constraints.iter().all(|c| c.name != name),
            "duplicate constraint name {name}"
        );
        for &(VarId(idx), coeff) in &terms {
            assert!(idx < self.variables.len(), "{name} references undeclared variable");
            assert!(coeff.is_finite(), "coefficient in {name} must be finite");
        }
        self.constraints.push(Constraint {
            name,
            terms,
            rel,
            rhs,
        });
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn constraint_index(&self, name: &str) -> Option<usize> {
        self.constraints.iter().position(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpBuildError {
    #[error("a reduced secretary LP needs n >= 1")]
    EmptyProblem,
}

/// Which dual formulation to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualForm {
    /// The raw LP dual of the flow formulation, with explicit `alpha`
    /// variables.
    P1,
    /// The reduced form with `alpha_i = w_{i-1} - w_i` eliminated: exactly
    /// the DP equation's constraint system.
    P,
}

/// The flow formulation:
///
/// ```text
///     max  sum_i R_i y_i
///     s.t. Cap_i:  y_i - p_i z_{i-1} <= 0
///          Cons_i: y_i + z_i - z_{i-1} = 0
///          Source: z_0 = 1
///          y_i >= 0, z_i free.
/// ```
///
/// The capacity rows are stored multiplied through by `p_i > 0` (the usual
/// statement divides by `p_i`), which keeps the constraint matrix free of
/// divisions.  `z` carries no sign bound: nonnegativity is implied by the
/// other rows.  Columns are `y_1..y_n, z_0..z_n`.
pub fn build_flow_lp(inst: &Instance) -> LpProblem {
    let n = inst.n();
    let mut prob = LpProblem::new(format!("ff_n{n}"), Sense::Maximize);
    let y: Vec<VarId> = (1..=n)
        .map(|i| prob.add_var(format!("y_{i}"), inst.rewards()[i - 1], 0.0, f64::INFINITY))
        .collect();
    let z: Vec<VarId> = (0..=n)
        .map(|i| prob.add_var(format!("z_{i}"), 0.0, f64::NEG_INFINITY, f64::INFINITY))
        .collect();
    for i in 1..=n {
        prob.add_constraint(
            format!("Cap_{i}"),
            vec![(y[i - 1], 1.0), (z[i - 1], -inst.p()[i - 1])],
            Rel::Le,
            0.0,
        );
    }
    for i in 1..=n {
        prob.add_constraint(
            format!("Cons_{i}"),
            vec![(y[i - 1], 1.0), (z[i], 1.0), (z[i - 1], -1.0)],
            Rel::Eq,
            0.0,
        );
    }
    prob.add_constraint("Source", vec![(z[0], 1.0)], Rel::Eq, 1.0);
    prob
}

/// The dual of the flow formulation, in either form.
///
/// P1 keeps the raw dual rows `Reward_i: w_i + alpha_i/p_i >= R_i` and
/// `Link_i: w_{i-1} - w_i - alpha_i = 0`; P eliminates `alpha` and states
/// `Stop_i: w_{i-1} >= q_i w_i + p_i R_i` and `Mono_i: w_{i-1} >= w_i`.
/// Both minimize `w_0` subject to `Terminal: w_n = 0`.
pub fn build_dual_lp(inst: &Instance, form: DualForm) -> LpProblem {
    let n = inst.n();
    let tag = match form {
        DualForm::P1 => "p1",
        DualForm::P => "p",
    };
    let mut prob = LpProblem::new(format!("{tag}_n{n}"), Sense::Minimize);
    let w: Vec<VarId> = (0..=n)
        .map(|i| {
            let obj = if i == 0 { 1.0 } else { 0.0 };
            prob.add_var(format!("w_{i}"), obj, f64::NEG_INFINITY, f64::INFINITY)
        })
        .collect();
    match form {
        DualForm::P1 => {
            let alpha: Vec<VarId> = (1..=n)
                .map(|i| prob.add_var(format!("alpha_{i}"), 0.0, 0.0, f64::INFINITY))
                .collect();
            for i in 1..=n {
                prob.add_constraint(
                    format!("Reward_{i}"),
                    vec![(w[i], 1.0), (alpha[i - 1], 1.0 / inst.p()[i - 1])],
                    Rel::Ge,
                    inst.rewards()[i - 1],
                );
            }
            for i in 1..=n {
                prob.add_constraint(
                    format!("Link_{i}"),
                    vec![(w[i - 1], 1.0), (w[i], -1.0), (alpha[i - 1], -1.0)],
                    Rel::Eq,
                    0.0,
                );
            }
        }
        DualForm::P => {
            for i in 1..=n {
                prob.add_constraint(
                    format!("Stop_{i}"),
                    vec![(w[i - 1], 1.0), (w[i], -inst.q_at(i - 1))],
                    Rel::Ge,
                    inst.p()[i - 1] * inst.rewards()[i - 1],
                );
            }
            for i in 1..=n {
                prob.add_constraint(
                    format!("Mono_{i}"),
                    vec![(w[i - 1], 1.0), (w[i], -1.0)],
                    Rel::Ge,
                    0.0,
                );
            }
        }
    }
    prob.add_constraint("Terminal", vec![(w[n], 1.0)], Rel::Eq, 0.0);
    prob
}

/// The reduced LP for the secretary problem:
///
/// ```text
///     max  sum_i (i/n) y_i
///     s.t. Cap_i: i * y_i <= 1 - sum_{k<i} y_k,    y_i >= 0.
/// ```
///
/// Obtained from the flow formulation at `p_i = 1/i`, `R_i = i/n` by
/// eliminating `z_i = 1 - (y_1 + ... + y_i)`; the rows keep the `Cap_i`
/// names they descend from.
pub fn build_secretary_reduced_lp(n: usize) -> Result<LpProblem, LpBuildError> {
    if n == 0 {
        return Err(LpBuildError::EmptyProblem);
    }
    let mut prob = LpProblem::new(format!("secretary_reduced_n{n}"), Sense::Maximize);
    let y: Vec<VarId> = (1..=n)
        .map(|i| prob.add_var(format!("y_{i}"), i as f64 / n as f64, 0.0, f64::INFINITY))
        .collect();
    for i in 1..=n {
        let mut terms: Vec<(VarId, f64)> = (1..i).map(|k| (y[k - 1], 1.0)).collect();
        terms.push((y[i - 1], i as f64));
        prob.add_constraint(format!("Cap_{i}"), terms, Rel::Le, 1.0);
    }
    Ok(prob)
}

/// Reads the `(y, z)` flow out of a primal solution of [`build_flow_lp`].
pub fn flow_from_ff_primal(inst: &Instance, primal: &[f64]) -> FlowSolution {
    let n = inst.n();
    assert_eq!(primal.len(), 2 * n + 1, "not a flow-LP primal");
    FlowSolution::new(primal[..n].to_vec(), primal[n..].to_vec())
        .expect("simplex primal values are finite")
}

/// Reads the DP-style value vector `w_0..w_n` out of the dual values of
/// [`build_flow_lp`]: `w_0` from the `Source` row, `w_i` from `Cons_i`.
pub fn values_from_ff_duals(inst: &Instance, duals: &[f64]) -> ValueVector {
    let n = inst.n();
    assert_eq!(duals.len(), 2 * n + 1, "not a flow-LP dual vector");
    let mut w = Vec::with_capacity(n + 1);
    w.push(duals[2 * n]); // Source
    w.extend_from_slice(&duals[n..2 * n]); // Cons_1 .. Cons_n
    ValueVector::new(w).expect("simplex dual values are finite")
}

/// Reads `w_0..w_n` out of a primal solution of [`build_dual_lp`]
/// (either form: the `w` block comes first).
pub fn values_from_dual_primal(inst: &Instance, primal: &[f64]) -> ValueVector {
    let n = inst.n();
    assert!(primal.len() > n, "not a dual-LP primal");
    ValueVector::new(primal[..=n].to_vec()).expect("simplex primal values are finite")
}
