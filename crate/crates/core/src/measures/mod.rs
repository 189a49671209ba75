//! Reference entanglement quantities for two-qubit states and their ensembles.

mod oracle;

pub use oracle::decomposition_infimum_oracle;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    check_weights, hermitian_eigen, validate_density, DensityOperator, Ket, Matrix, Subsystems, C64,
};

/// Two-qubit concurrence, in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Concurrence(f64);

impl Concurrence {
    pub fn new(value: f64) -> Result<Self> {
        if !(value.is_finite() && (-1e-10..=1.0 + 1e-10).contains(&value)) {
            return Err(Error::OutOfRange {
                what: "concurrence",
                value,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(Self(value.clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Concurrence> for f64 {
    fn from(c: Concurrence) -> f64 {
        c.0
    }
}

/// Weighted pure two-qubit states `{pᵢ, |Ψᵢ⟩}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureEnsemble {
    members: Vec<(f64, Ket)>,
}

impl PureEnsemble {
    pub fn new(members: Vec<(f64, Ket)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidEnsemble("no members".into()));
        }
        check_weights(members.iter().map(|(w, _)| *w))?;
        for (_, ket) in &members {
            if ket.layout().num_qubits() != 2 {
                return Err(Error::InvalidEnsemble(format!(
                    "member on {} is not a two-qubit state",
                    ket.layout()
                )));
            }
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(f64, Ket)] {
        &self.members
    }

    /// `Σ pᵢ |Ψᵢ⟩⟨Ψᵢ|`, the single-copy state this decomposition describes.
    pub fn density(&self) -> Result<DensityOperator> {
        let layout = self.members[0].1.layout().clone();
        let parts = self
            .members
            .iter()
            .map(|(w, k)| Ok((*w, k.relabel(layout.labels())?.to_density())))
            .collect::<Result<Vec<_>>>()?;
        DensityOperator::mixture(&parts)
    }
}

fn require_two_qubits(n: usize) -> Result<()> {
    if n != 2 {
        return Err(Error::DimensionMismatch { expected: 4, found: 1 << n });
    }
    Ok(())
}

/// `2 √det ρ_A` for a pure state of two qubits (first label is the A side).
pub fn pure_concurrence(psi: &Ket) -> Result<Concurrence> {
    require_two_qubits(psi.layout().num_qubits())?;
    let a = &psi.layout().labels()[0];
    let reduced = psi.to_density().partial_trace(&[a])?;
    let det = reduced.matrix().det2().re.max(0.0);
    Concurrence::new((2.0 * det.sqrt()).min(1.0))
}

/// `σ_y ⊗ σ_y` in the computational basis: the antidiagonal `(−1, 1, 1, −1)`.
fn sigma_yy() -> Matrix {
    let mut m = Matrix::zeros(4);
    m[(0, 3)] = C64::new(-1.0, 0.0);
    m[(1, 2)] = C64::new(1.0, 0.0);
    m[(2, 1)] = C64::new(1.0, 0.0);
    m[(3, 0)] = C64::new(-1.0, 0.0);
    m
}

/// Spin-flipped state `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`, with `ρ*` the entrywise
/// conjugate in the computational basis of the layout.
pub fn spin_flip(rho: &DensityOperator) -> Result<Matrix> {
    require_two_qubits(rho.layout().num_qubits())?;
    let y = sigma_yy();
    Ok(&(&y * &rho.matrix().conj()) * &y)
}

/// Descending `λᵢ`, the square roots of the eigenvalues of `ρ ρ̃`.
///
/// `ρ ρ̃` has the spectrum of `M M†` with `M = √ρ (σ_y ⊗ σ_y) √ρ*`, so the `λᵢ`
/// are the singular values of `M`: the positive half of the spectrum of the
/// Hermitian dilation `[[0, M], [M†, 0]]`. Squaring and re-rooting is avoided,
/// which keeps vanishing `λᵢ` at rounding level instead of its square root.
/// Eigenvalues of `ρ` below 1e-14 are treated as zero when forming `√ρ`.
pub fn wootters_lambdas(rho: &DensityOperator) -> Result<Vec<f64>> {
    require_two_qubits(rho.layout().num_qubits())?;
    let eig = hermitian_eigen(rho.matrix());
    let roots: Vec<C64> = eig
        .values
        .iter()
        .map(|&x| C64::new(if x > 1e-14 { x.sqrt() } else { 0.0 }, 0.0))
        .collect();
    let sqrt_rho = &(&eig.vectors * &Matrix::from_diagonal(&roots)) * &eig.vectors.adjoint();
    let m = &(&sqrt_rho * &sigma_yy()) * &sqrt_rho.conj();
    let dilation = Matrix::from_fn(8, |i, j| match (i < 4, j < 4) {
        (true, false) => m[(i, j - 4)],
        (false, true) => m[(j, i - 4)].conj(),
        _ => C64::new(0.0, 0.0),
    });
    let mut lambdas: Vec<f64> = hermitian_eigen(&dilation).values[..4]
        .iter()
        .map(|&x| x.max(0.0))
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok(lambdas)
}

/// Closed-form convex-roof concurrence of a two-qubit density operator.
pub fn wootters_concurrence(rho: &DensityOperator) -> Result<Concurrence> {
    require_two_qubits(rho.layout().num_qubits())?;
    let report = validate_density(rho);
    if !report.passed {
        return Err(Error::InvalidDensity(report));
    }
    let l = wootters_lambdas(rho)?;
    Concurrence::new((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

fn binary_entropy(p: f64) -> f64 {
    [p, 1.0 - p]
        .into_iter()
        .filter(|&x| x > 0.0)
        .map(|x| -x * x.log2())
        .sum()
}

/// Entanglement of formation in ebits, `h((1 + √(1 − C²))/2)`.
pub fn eof_from_concurrence(c: f64) -> Result<f64> {
    let c = Concurrence::new(c)?.value();
    Ok(binary_entropy((1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0))
}

/// `Σ pᵢ C(Ψᵢ)`
pub fn ensemble_average_concurrence(e: &PureEnsemble) -> Result<f64> {
    e.members
        .iter()
        .map(|(w, k)| Ok(w * pure_concurrence(k)?.value()))
        .sum()
}

/// `[Σ pᵢ C(Ψᵢ)]² / 4`: the antisymmetric probability implied by the average concurrence.
pub fn antisym_probability_from_mean_concurrence(e: &PureEnsemble) -> Result<f64> {
    let mean = ensemble_average_concurrence(e)?;
    Ok(mean * mean / 4.0)
}

/// `Σ pᵢ C(Ψᵢ)² / 4`: the antisymmetric probability of `Σ pᵢ (|Ψᵢ⟩⟨Ψᵢ|)^{⊗2}`,
/// by linearity of the trace.
pub fn antisym_probability_from_member_concurrences(e: &PureEnsemble) -> Result<f64> {
    e.members
        .iter()
        .map(|(w, k)| {
            let c = pure_concurrence(k)?.value();
            Ok(w * c * c / 4.0)
        })
        .sum()
}

/// Average entropy of entanglement `Σ pᵢ S(Tr_B |Ψᵢ⟩⟨Ψᵢ|)` across the cut
/// `a_side | rest`. Any decomposition of a state bounds its entanglement of
/// formation from above by this value.
pub fn ensemble_upper_bound_entanglement<S: AsRef<str>>(members: &[(f64, Ket)], a_side: &[S]) -> Result<f64> {
    let first = members
        .first()
        .ok_or_else(|| Error::InvalidEnsemble("no members".into()))?;
    check_weights(members.iter().map(|(w, _)| *w))?;
    let layout = first.1.layout();
    if a_side.is_empty() || a_side.len() >= layout.num_qubits() {
        return Err(Error::Bipartition(format!(
            "A side must be a nonempty proper subset of {layout}"
        )));
    }
    for label in a_side {
        if !layout.contains(label.as_ref()) {
            return Err(Error::Bipartition(format!("`{}` is not in {layout}", label.as_ref())));
        }
    }
    let mut total = 0.0;
    for (w, ket) in members {
        if ket.layout() != layout {
            return Err(Error::Bipartition(format!(
                "member on {} differs from {layout}",
                ket.layout()
            )));
        }
        total += w * ket.to_density().partial_trace(a_side)?.entropy();
    }
    Ok(total)
}
