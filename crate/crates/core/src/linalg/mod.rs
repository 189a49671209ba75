//! Dense complex linear algebra over labeled qubit registers.

mod eigen;
mod layout;
mod matrix;
mod state;
mod validate;

pub use eigen::{hermitian_eigen, HermitianEigen};
pub use layout::{QubitLayout, MAX_QUBITS};
pub use matrix::{Matrix, C64, ONE, ZERO};
pub use state::{
    expectation_value, hermitian_eigenvalues, permute_subsystems, tensor_product, DensityOperator, Ket,
    Operator, Subsystems,
};
pub use validate::{validate_density, validate_density_with, Tolerances, ValidationReport};

pub(crate) use matrix::orthonormalize_columns;
pub(crate) use state::check_weights;

#[cfg(test)]
mod tests;
