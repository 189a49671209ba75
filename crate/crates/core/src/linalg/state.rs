use serde::{Deserialize, Serialize};

use super::eigen::hermitian_eigen;
use super::layout::{scatter_bits, QubitLayout};
use super::matrix::{Matrix, C64, ZERO};
use super::validate::{validate_density_with, Tolerances};
use crate::error::{Error, Result};

/// Shared structure of registers over labeled qubits.
pub trait Subsystems: Sized {
    fn layout(&self) -> &QubitLayout;

    /// Kronecker composition; the result layout is `self`'s labels followed by `other`'s.
    fn tensor(&self, other: &Self) -> Result<Self>;

    /// Reorders the tensor factors so that the layout reads `order`.
    fn permute<S: AsRef<str>>(&self, order: &[S]) -> Result<Self>;

    /// Renames labels positionally without touching the entries.
    fn relabel<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self>;
}

pub fn tensor_product<T: Subsystems>(a: &T, b: &T) -> Result<T> {
    a.tensor(b)
}

pub fn permute_subsystems<T: Subsystems, S: AsRef<str>>(x: &T, order: &[S]) -> Result<T> {
    x.permute(order)
}

fn check_dim(layout: &QubitLayout, found: usize) -> Result<()> {
    if layout.dim() != found {
        return Err(Error::DimensionMismatch {
            expected: layout.dim(),
            found,
        });
    }
    Ok(())
}

fn check_finite(matrix: &Matrix) -> Result<()> {
    match matrix.first_non_finite() {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

fn relabeled<S: AsRef<str>>(layout: &QubitLayout, labels: &[S]) -> Result<QubitLayout> {
    if labels.len() != layout.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: layout.num_qubits(),
            found: labels.len(),
        });
    }
    QubitLayout::new(labels.iter().map(|s| s.as_ref().to_string()))
}

/// Old-layout index for every new-layout index under a reordering.
fn permutation_map<S: AsRef<str>>(layout: &QubitLayout, order: &[S]) -> Result<(QubitLayout, Vec<usize>)> {
    let positions = layout.permutation_positions(order)?;
    let n = layout.num_qubits();
    let map = (0..layout.dim()).map(|j| scatter_bits(j, &positions, n)).collect();
    let new_layout = QubitLayout::new(order.iter().map(|s| s.as_ref().to_string()))?;
    Ok((new_layout, map))
}

fn permute_matrix(m: &Matrix, map: &[usize]) -> Matrix {
    Matrix::from_fn(m.dim(), |i, j| m[(map[i], map[j])])
}

/// Normalized pure state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ket {
    layout: QubitLayout,
    amplitudes: Vec<C64>,
}

impl Ket {
    /// Requires unit norm within the normalization tolerance.
    pub fn new(layout: QubitLayout, amplitudes: Vec<C64>) -> Result<Self> {
        check_dim(&layout, amplitudes.len())?;
        if let Some(i) = amplitudes.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > Tolerances::default().normalization {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { layout, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm; rejects the zero vector.
    pub fn normalized(layout: QubitLayout, amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if !(n.is_finite() && n > 1e-300) {
            return Err(Error::NotNormalized(n));
        }
        Self::new(layout, amplitudes.into_iter().map(|z| z / n).collect())
    }

    pub fn basis(layout: QubitLayout, index: usize) -> Result<Self> {
        let dim = layout.dim();
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index,
            });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self { layout, amplitudes })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Result<C64> {
        same_layout(&self.layout, &other.layout)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator {
            layout: self.layout.clone(),
            matrix: Matrix::outer(&self.amplitudes, &self.amplitudes),
        }
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn same_layout(a: &QubitLayout, b: &QubitLayout) -> Result<()> {
    if a != b {
        return Err(Error::LayoutMismatch {
            expected: a.labels().to_vec(),
            found: b.labels().to_vec(),
        });
    }
    Ok(())
}

impl Subsystems for Ket {
    fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    fn tensor(&self, other: &Self) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(Self { layout, amplitudes })
    }

    fn permute<S: AsRef<str>>(&self, order: &[S]) -> Result<Self> {
        let (layout, map) = permutation_map(&self.layout, order)?;
        let amplitudes = map.iter().map(|&i| self.amplitudes[i]).collect();
        Ok(Self { layout, amplitudes })
    }

    fn relabel<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        Ok(Self {
            layout: relabeled(&self.layout, labels)?,
            amplitudes: self.amplitudes.clone(),
        })
    }
}

/// Square operator on a labeled register (projectors, observables).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Operator {
    layout: QubitLayout,
    matrix: Matrix,
}

impl Operator {
    pub fn new(layout: QubitLayout, matrix: Matrix) -> Result<Self> {
        check_dim(&layout, matrix.dim())?;
        check_finite(&matrix)?;
        Ok(Self { layout, matrix })
    }

    pub fn identity(layout: QubitLayout) -> Self {
        let matrix = Matrix::identity(layout.dim());
        Self { layout, matrix }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        same_layout(&self.layout, &other.layout)?;
        Ok(Self {
            layout: self.layout.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn apply(&self, ket: &Ket) -> Result<Vec<C64>> {
        same_layout(&self.layout, &ket.layout)?;
        Ok(self.matrix.apply(&ket.amplitudes))
    }
}

impl Subsystems for Operator {
    fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            layout: self.layout.concat(&other.layout)?,
            matrix: self.matrix.kron(&other.matrix),
        })
    }

    fn permute<S: AsRef<str>>(&self, order: &[S]) -> Result<Self> {
        let (layout, map) = permutation_map(&self.layout, order)?;
        Ok(Self {
            layout,
            matrix: permute_matrix(&self.matrix, &map),
        })
    }

    fn relabel<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        Ok(Self {
            layout: relabeled(&self.layout, labels)?,
            matrix: self.matrix.clone(),
        })
    }
}

/// Density operator: Hermitian, positive semidefinite, unit trace.
///
/// [`DensityOperator::new`] enforces the invariants; [`DensityOperator::new_unchecked`]
/// only checks shape, for intermediate sums and for inspecting broken inputs with
/// [`validate_density`](super::validate_density).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityOperator {
    layout: QubitLayout,
    matrix: Matrix,
}

impl DensityOperator {
    pub fn new(layout: QubitLayout, matrix: Matrix) -> Result<Self> {
        Self::with_tolerances(layout, matrix, &Tolerances::default())
    }

    pub fn with_tolerances(layout: QubitLayout, matrix: Matrix, tol: &Tolerances) -> Result<Self> {
        let rho = Self::new_unchecked(layout, matrix)?;
        let report = validate_density_with(&rho, tol);
        if !report.passed {
            return Err(Error::InvalidDensity(report));
        }
        Ok(rho)
    }

    pub fn new_unchecked(layout: QubitLayout, matrix: Matrix) -> Result<Self> {
        check_dim(&layout, matrix.dim())?;
        check_finite(&matrix)?;
        Ok(Self { layout, matrix })
    }

    pub fn maximally_mixed(layout: QubitLayout) -> Self {
        let d = layout.dim();
        Self {
            matrix: Matrix::identity(d).scale_real(1.0 / d as f64),
            layout,
        }
    }

    /// `Σ wᵢ ρᵢ` over operators sharing one layout; weights must be a probability vector.
    pub fn mixture(members: &[(f64, DensityOperator)]) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidEnsemble("empty mixture".into()))?;
        check_weights(members.iter().map(|(w, _)| *w))?;
        let mut acc = Matrix::zeros(first.1.layout.dim());
        for (w, rho) in members {
            same_layout(&first.1.layout, &rho.layout)?;
            acc = &acc + &rho.matrix.scale_real(*w);
        }
        Self::new(first.1.layout.clone(), acc)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.matrix).values
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .filter(|&p| p > 1e-15)
            .map(|p| -p * p.log2())
            .sum()
    }

    /// Reduces onto `keep`; the result lists the kept labels in their original order.
    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptySelection);
        }
        for label in keep {
            self.layout.position(label.as_ref())?;
        }
        let n = self.layout.num_qubits();
        let (kept, traced): (Vec<usize>, Vec<usize>) =
            (0..n).partition(|&p| keep.iter().any(|k| k.as_ref() == self.layout.labels()[p]));
        let layout = QubitLayout::new(kept.iter().map(|&p| self.layout.labels()[p].clone()))?;
        let dk = 1 << kept.len();
        let dt = 1 << traced.len();
        let offsets: Vec<usize> = (0..dt).map(|t| scatter_bits(t, &traced, n)).collect();
        let mut out = Matrix::zeros(dk);
        for i in 0..dk {
            let fi = scatter_bits(i, &kept, n);
            for j in 0..dk {
                let fj = scatter_bits(j, &kept, n);
                out[(i, j)] = offsets.iter().map(|&t| self.matrix[(fi | t, fj | t)]).sum();
            }
        }
        Ok(Self { layout, matrix: out })
    }

    /// `U ρ U†` for a unitary acting on the same layout.
    pub fn conjugate_by(&self, u: &Operator) -> Result<Self> {
        same_layout(&self.layout, u.layout())?;
        Ok(Self {
            layout: self.layout.clone(),
            matrix: &(&u.matrix * &self.matrix) * &u.matrix.adjoint(),
        })
    }
}

pub(crate) fn check_weights(weights: impl Iterator<Item = f64>) -> Result<()> {
    let mut sum = 0.0;
    for w in weights {
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::InvalidEnsemble(format!("weight {w} is not a probability")));
        }
        sum += w;
    }
    if (sum - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidEnsemble(format!("weights sum to {sum}, not 1")));
    }
    Ok(())
}

impl Subsystems for DensityOperator {
    fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            layout: self.layout.concat(&other.layout)?,
            matrix: self.matrix.kron(&other.matrix),
        })
    }

    fn permute<S: AsRef<str>>(&self, order: &[S]) -> Result<Self> {
        let (layout, map) = permutation_map(&self.layout, order)?;
        Ok(Self {
            layout,
            matrix: permute_matrix(&self.matrix, &map),
        })
    }

    fn relabel<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        Ok(Self {
            layout: relabeled(&self.layout, labels)?,
            matrix: self.matrix.clone(),
        })
    }
}

/// `Tr(obs · ρ)` for a Hermitian observable.
pub fn expectation_value(obs: &Operator, rho: &DensityOperator) -> Result<f64> {
    same_layout(&obs.layout, &rho.layout)?;
    let tol = Tolerances::default();
    let defect = obs.matrix.hermiticity_defect();
    if defect > tol.hermiticity {
        return Err(Error::NotHermitian(defect));
    }
    let value = obs.matrix.trace_product(&rho.matrix);
    if value.im.abs() > tol.hermiticity {
        return Err(Error::ComplexExpectation(value.im));
    }
    Ok(value.re)
}

/// Real spectrum of a Hermitian operator, descending.
pub fn hermitian_eigenvalues(m: &Operator) -> Result<Vec<f64>> {
    let defect = m.matrix.hermiticity_defect();
    if defect > Tolerances::default().hermiticity {
        return Err(Error::NotHermitian(defect));
    }
    Ok(hermitian_eigen(&m.matrix).values)
}
