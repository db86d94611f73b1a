//! Problem representation and instance curation.
//!
//! A [`MilpInstance`] is the problem
//! `argmin { c'x | Ax {<=,>=,=} b, l <= x <= u, x_j integer for j in J }`,
//! stored row-wise with sparse coefficient vectors. [`Cut`] is a candidate
//! inequality `alpha'x <= beta` together with provenance metadata.

mod features;
mod mps;

pub use features::{select_diverse_subset, FEATURE_COLUMNS};
pub use mps::{parse_mps, write_mps};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("instance invalid: {0}")]
    Invalid(String),
    #[error("requested subset of size {k} from population of {population}")]
    SubsetTooLarge { k: usize, population: usize },
}

/// Sense of a constraint row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSense {
    Le,
    Ge,
    Eq,
}

impl RowSense {
    /// One-letter MPS row code.
    pub fn mps_code(self) -> char {
        match self {
            RowSense::Le => 'L',
            RowSense::Ge => 'G',
            RowSense::Eq => 'E',
        }
    }
}

/// A single constraint row with sparse coefficients.
///
/// Indices are strictly increasing and less than the instance's variable
/// count.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub coeffs: Vec<(usize, f64)>,
    pub sense: RowSense,
    pub rhs: f64,
}

impl Row {
    /// Activity `a'x` of this row at the point `x`.
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, v)| v * x[j]).sum()
    }

    /// Whether `x` satisfies this row within `tol`.
    pub fn satisfied_by(&self, x: &[f64], tol: f64) -> bool {
        let act = self.activity(x);
        match self.sense {
            RowSense::Le => act <= self.rhs + tol,
            RowSense::Ge => act >= self.rhs - tol,
            RowSense::Eq => (act - self.rhs).abs() <= tol,
        }
    }
}

/// A mixed-integer linear program in minimization or maximization form.
#[derive(Debug, Clone, PartialEq)]
pub struct MilpInstance {
    pub name: String,
    pub objective: Vec<f64>,
    pub var_names: Vec<String>,
    pub rows: Vec<Row>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Integrality mask: `true` marks variables constrained to integer values.
    pub integrality: Vec<bool>,
    pub minimize: bool,
}

impl MilpInstance {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Objective value `c'x` in the instance's stated sense.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// A variable is binary when it is integral with bounds [0, 1].
    pub fn is_binary(&self, j: usize) -> bool {
        self.integrality[j] && self.lower[j] == 0.0 && self.upper[j] == 1.0
    }

    /// Check every structural invariant, returning the first violation.
    pub fn validate(&self) -> Result<(), ModelError> {
        let n = self.num_vars();
        let err = |msg: String| Err(ModelError::Invalid(msg));
        if self.var_names.len() != n
            || self.lower.len() != n
            || self.upper.len() != n
            || self.integrality.len() != n
        {
            return err("field lengths disagree with variable count".into());
        }
        for (j, c) in self.objective.iter().enumerate() {
            if !c.is_finite() {
                return err(format!("objective coefficient {j} is not finite"));
            }
        }
        for j in 0..n {
            if self.lower[j].is_nan() || self.upper[j].is_nan() {
                return err(format!("bound of variable {j} is NaN"));
            }
            if self.lower[j].is_finite() && self.upper[j].is_finite() && self.lower[j] > self.upper[j] {
                return err(format!(
                    "variable {j} has lower bound {} above upper bound {}",
                    self.lower[j], self.upper[j]
                ));
            }
        }
        for (i, row) in self.rows.iter().enumerate() {
            if !row.rhs.is_finite() {
                return err(format!("row {i} has non-finite rhs"));
            }
            let mut prev = None;
            for &(j, v) in &row.coeffs {
                if j >= n {
                    return err(format!("row {i} references variable {j} out of range"));
                }
                if let Some(p) = prev {
                    if j <= p {
                        return err(format!("row {i} has non-increasing indices"));
                    }
                }
                if !v.is_finite() {
                    return err(format!("row {i} has non-finite coefficient at {j}"));
                }
                prev = Some(j);
            }
        }
        Ok(())
    }

    /// True when every integrality-constrained entry of `x` is within `tol`
    /// of an integer.
    pub fn is_integral(&self, x: &[f64], tol: f64) -> bool {
        self.integrality
            .iter()
            .zip(x)
            .all(|(&int, &v)| !int || (v - v.round()).abs() <= tol)
    }
}

/// Provenance of a generated cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutOrigin {
    /// Separation round the cut was generated in (0-based).
    pub round: usize,
    pub generator: &'static str,
    /// Index of the basic variable whose tableau row produced the cut.
    pub tableau_row: usize,
}

/// A candidate inequality `alpha'x <= beta` over the structural variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    /// Sparse coefficients with strictly increasing indices; all entries
    /// finite and nonzero.
    pub alpha: Vec<(usize, f64)>,
    pub beta: f64,
    pub origin: CutOrigin,
}

impl Cut {
    pub fn new(alpha: Vec<(usize, f64)>, beta: f64, origin: CutOrigin) -> Self {
        debug_assert!(!alpha.is_empty());
        debug_assert!(alpha.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(alpha.iter().all(|&(_, v)| v.is_finite() && v != 0.0));
        Cut { alpha, beta, origin }
    }

    pub fn nnz(&self) -> usize {
        self.alpha.len()
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.alpha.iter().map(|&(_, v)| v * v).sum::<f64>().sqrt()
    }

    /// `alpha'x` at the point `x`.
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.alpha.iter().map(|&(j, v)| v * x[j]).sum()
    }

    /// Violation `alpha'x - beta`; positive when `x` is cut off.
    pub fn violation(&self, x: &[f64]) -> f64 {
        self.activity(x) - self.beta
    }

    /// Density `nnz / n`.
    pub fn density(&self, n: usize) -> f64 {
        self.nnz() as f64 / n as f64
    }
}

/// Structural summary of an instance, every field in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceFeatures {
    pub frac_rows_le: f64,
    pub frac_rows_ge: f64,
    pub frac_rows_eq: f64,
    pub frac_vars_binary: f64,
    pub frac_vars_integer: f64,
    pub frac_vars_continuous: f64,
    pub avg_row_density: f64,
    pub max_row_density: f64,
    pub objective_density: f64,
}

impl InstanceFeatures {
    /// Feature vector in the fixed column order of [`FEATURE_COLUMNS`].
    pub fn as_vec(&self) -> [f64; 9] {
        [
            self.frac_rows_le,
            self.frac_rows_ge,
            self.frac_rows_eq,
            self.frac_vars_binary,
            self.frac_vars_integer,
            self.frac_vars_continuous,
            self.avg_row_density,
            self.max_row_density,
            self.objective_density,
        ]
    }
}

/// Compute the feature summary of an instance.
///
/// Binary means integral with bounds [0, 1]. An instance with zero rows has
/// all row fractions and densities equal to zero.
pub fn compute_features(inst: &MilpInstance) -> InstanceFeatures {
    let n = inst.num_vars();
    let m = inst.num_rows();
    let (mut le, mut ge, mut eq) = (0usize, 0usize, 0usize);
    let mut density_sum = 0.0;
    let mut density_max = 0.0f64;
    for row in &inst.rows {
        match row.sense {
            RowSense::Le => le += 1,
            RowSense::Ge => ge += 1,
            RowSense::Eq => eq += 1,
        }
        let d = row.coeffs.len() as f64 / n as f64;
        density_sum += d;
        density_max = density_max.max(d);
    }
    let mut binary = 0usize;
    let mut integer = 0usize;
    for j in 0..n {
        if inst.is_binary(j) {
            binary += 1;
        } else if inst.integrality[j] {
            integer += 1;
        }
    }
    let row_frac = |k: usize| if m == 0 { 0.0 } else { k as f64 / m as f64 };
    InstanceFeatures {
        frac_rows_le: row_frac(le),
        frac_rows_ge: row_frac(ge),
        frac_rows_eq: row_frac(eq),
        frac_vars_binary: binary as f64 / n as f64,
        frac_vars_integer: integer as f64 / n as f64,
        frac_vars_continuous: (n - binary - integer) as f64 / n as f64,
        avg_row_density: if m == 0 { 0.0 } else { density_sum / m as f64 },
        max_row_density: density_max,
        objective_density: inst.objective.iter().filter(|c| **c != 0.0).count() as f64 / n as f64,
    }
}
