use std::fmt;

use serde::{Deserialize, Serialize};

use super::eigen::hermitian_eigen;
use super::state::DensityOperator;

/// Numerical tolerances for the structural invariants of states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Max entrywise `|ρ_ij − conj(ρ_ji)|`.
    pub hermiticity: f64,
    /// Max `|Tr ρ − 1|`.
    pub trace: f64,
    /// Smallest admissible eigenvalue (negative).
    pub eigenvalue_floor: f64,
    /// Max `| ‖ψ‖ − 1 |` for kets.
    pub normalization: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-10,
            trace: 1e-10,
            eigenvalue_floor: -1e-9,
            normalization: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub hermiticity_defect: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
    /// `|Tr ρ − 1|`, including any imaginary part of the trace.
    pub trace_defect: f64,
    pub passed: bool,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hermiticity defect {:e}, min eigenvalue {:e}, trace defect {:e} ({})",
            self.hermiticity_defect,
            self.min_eigenvalue,
            self.trace_defect,
            if self.passed { "pass" } else { "fail" }
        )
    }
}

pub fn validate_density(rho: &DensityOperator) -> ValidationReport {
    validate_density_with(rho, &Tolerances::default())
}

pub fn validate_density_with(rho: &DensityOperator, tol: &Tolerances) -> ValidationReport {
    let m = rho.matrix();
    let hermiticity_defect = m.hermiticity_defect();
    let min_eigenvalue = hermitian_eigen(m).values.last().copied().unwrap_or(0.0);
    let tr = m.trace();
    let trace_defect = (tr - 1.0).norm();
    let passed = hermiticity_defect <= tol.hermiticity
        && min_eigenvalue >= tol.eigenvalue_floor
        && trace_defect <= tol.trace;
    ValidationReport {
        hermiticity_defect,
        min_eigenvalue,
        trace_defect,
        passed,
    }
}
