//! Two-copy state families on the register `(A1, B1, A2, B2)`.
//!
//! Copy `k` is the bipartite system `(Ak, Bk)`; Alice holds `A1, A2` and Bob
//! holds `B1, B2`. States are stored copy-major; [`TwoCopyState::side_major`]
//! gives the `(A1, A2, B1, B2)` view.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    check_weights, validate_density_with, DensityOperator, Ket, Matrix, QubitLayout, Subsystems, Tolerances, C64,
    ZERO,
};
use crate::measures::PureEnsemble;
use crate::projectors::Symmetry;

pub const COPY_MAJOR: [&str; 4] = ["A1", "B1", "A2", "B2"];
pub const SIDE_MAJOR: [&str; 4] = ["A1", "A2", "B1", "B2"];
pub const COPY_ONE: [&str; 2] = ["A1", "B1"];
pub const COPY_TWO: [&str; 2] = ["A2", "B2"];

/// Riemann-sum resolution used when discretized mode is requested without a count.
pub const DEFAULT_PHASE_POINTS: usize = 64;

pub fn copy_major_layout() -> QubitLayout {
    QubitLayout::new(COPY_MAJOR).expect("static layout")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    PureCopies,
    DeFinetti,
    PureDeFinetti,
    PhaseAveraged,
    Adversarial,
    Custom,
}

/// Joint state of two bipartite copies, copy-major.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoCopyState {
    state: DensityOperator,
    provenance: Provenance,
}

impl TwoCopyState {
    /// Wraps an arbitrary operator on `(A1, B1, A2, B2)` after validating it.
    pub fn custom(state: DensityOperator, tol: &Tolerances) -> Result<Self> {
        Self::checked(state, Provenance::Custom, tol)
    }

    fn checked(state: DensityOperator, provenance: Provenance, tol: &Tolerances) -> Result<Self> {
        if state.layout().labels() != COPY_MAJOR {
            return Err(Error::LayoutMismatch {
                expected: COPY_MAJOR.iter().map(|s| s.to_string()).collect(),
                found: state.layout().labels().to_vec(),
            });
        }
        let report = validate_density_with(&state, tol);
        if !report.passed {
            return Err(Error::InvalidDensity(report));
        }
        Ok(Self { state, provenance })
    }

    fn built(state: DensityOperator, provenance: Provenance) -> Result<Self> {
        Self::checked(state, provenance, &Tolerances::default())
    }

    pub fn density(&self) -> &DensityOperator {
        &self.state
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// State of copy 1 on `(A1, B1)`.
    pub fn single_copy_marginal(&self) -> Result<DensityOperator> {
        self.state.partial_trace(&COPY_ONE)
    }

    pub fn side_major(&self) -> Result<DensityOperator> {
        self.state.permute(&SIDE_MAJOR)
    }

    /// The state with copies 1 and 2 exchanged (`SWAP_{A1A2} · SWAP_{B1B2}` conjugation).
    pub fn copies_exchanged(&self) -> Result<DensityOperator> {
        self.state.permute(&["A2", "B2", "A1", "B1"])?.relabel(&COPY_MAJOR)
    }
}

/// Weighted per-copy states `{pᵢ, ρ⁽ⁱ⁾}` on one bipartite pair.
#[derive(Clone, Debug, PartialEq)]
pub struct DeFinettiEnsemble {
    members: Vec<(f64, DensityOperator)>,
}

impl DeFinettiEnsemble {
    pub fn new(members: Vec<(f64, DensityOperator)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidEnsemble("no members".into()));
        }
        check_weights(members.iter().map(|(w, _)| *w))?;
        for (_, rho) in &members {
            if rho.layout().num_qubits() != 2 {
                return Err(Error::InvalidEnsemble(format!(
                    "member on {} is not a two-qubit state",
                    rho.layout()
                )));
            }
            let report = crate::linalg::validate_density(rho);
            if !report.passed {
                return Err(Error::InvalidDensity(report));
            }
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(f64, DensityOperator)] {
        &self.members
    }

    /// `Σ pᵢ ρ⁽ⁱ⁾` on `(A1, B1)`.
    pub fn average(&self) -> Result<DensityOperator> {
        let parts = self
            .members
            .iter()
            .map(|(w, rho)| Ok((*w, rho.relabel(&COPY_ONE)?)))
            .collect::<Result<Vec<_>>>()?;
        DensityOperator::mixture(&parts)
    }
}

fn two_copies(rho: &DensityOperator) -> Result<DensityOperator> {
    rho.relabel(&COPY_ONE)?.tensor(&rho.relabel(&COPY_TWO)?)
}

fn require_pair(n: usize) -> Result<()> {
    if n != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: 1 << n,
        });
    }
    Ok(())
}

/// `|Ψ⟩⟨Ψ| ⊗ |Ψ⟩⟨Ψ|`
pub fn identical_pure_copies(psi: &Ket) -> Result<TwoCopyState> {
    require_pair(psi.layout().num_qubits())?;
    let one = psi.relabel(&COPY_ONE)?;
    let two = psi.relabel(&COPY_TWO)?;
    TwoCopyState::built(one.tensor(&two)?.to_density(), Provenance::PureCopies)
}

/// `Σ pᵢ ρ⁽ⁱ⁾ ⊗ ρ⁽ⁱ⁾`
pub fn de_finetti_state(e: &DeFinettiEnsemble) -> Result<TwoCopyState> {
    let parts = e
        .members
        .iter()
        .map(|(w, rho)| Ok((*w, two_copies(rho)?)))
        .collect::<Result<Vec<_>>>()?;
    TwoCopyState::built(DensityOperator::mixture(&parts)?, Provenance::DeFinetti)
}

/// `Σ pᵢ |Ψᵢ⟩⟨Ψᵢ| ⊗ |Ψᵢ⟩⟨Ψᵢ|`
pub fn pure_de_finetti_state(e: &PureEnsemble) -> Result<TwoCopyState> {
    let parts = e
        .members()
        .iter()
        .map(|(w, psi)| Ok((*w, two_copies(&psi.to_density())?)))
        .collect::<Result<Vec<_>>>()?;
    TwoCopyState::built(DensityOperator::mixture(&parts)?, Provenance::PureDeFinetti)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseMode {
    /// Closed form of the integral over the phase.
    Exact,
    /// Uniform Riemann sum with the given number of points (at least 3).
    Discretized(usize),
}

/// `(|01⟩ + e^{iφ}|10⟩)/√2` on `(A, B)`.
pub fn phase_member(phi: f64) -> Ket {
    let amps = vec![ZERO, C64::new(FRAC_1_SQRT_2, 0.0), C64::from_polar(FRAC_1_SQRT_2, phi), ZERO];
    Ket::new(QubitLayout::new(["A", "B"]).expect("static layout"), amps).expect("unit norm")
}

/// Uniform ensemble of [`phase_member`] at `φ = 2πk/points`.
pub fn phase_ensemble(points: usize) -> Result<PureEnsemble> {
    if points < 3 {
        return Err(Error::TooFewPhasePoints(points));
    }
    let w = 1.0 / points as f64;
    PureEnsemble::new(
        (0..points)
            .map(|k| (w, phase_member(TAU * k as f64 / points as f64)))
            .collect(),
    )
}

/// Two copies of a maximally entangled pair sharing one unknown phase.
///
/// Exact mode is `¼|0101⟩⟨0101| + ¼|1010⟩⟨1010| + ½|Ψ_L⟩⟨Ψ_L|` with
/// [`logical_bell_state`] `|Ψ_L⟩`. The integrand only carries Fourier modes
/// `|k| ≤ 2` in the phase, so every uniform grid with at least 3 points
/// reproduces it up to rounding.
pub fn phase_averaged_state(mode: PhaseMode) -> Result<TwoCopyState> {
    let rho = match mode {
        PhaseMode::Exact => {
            let layout = copy_major_layout();
            let parts = phase_decomposition()
                .into_iter()
                .map(|(w, k)| (w, k.to_density()))
                .collect::<Vec<_>>();
            let mut acc = Matrix::zeros(layout.dim());
            for (w, rho) in &parts {
                acc = &acc + &rho.matrix().scale_real(*w);
            }
            DensityOperator::new(layout, acc)?
        }
        PhaseMode::Discretized(points) => {
            let mut s = pure_de_finetti_state(&phase_ensemble(points)?)?;
            s.provenance = Provenance::PhaseAveraged;
            return Ok(s);
        }
    };
    TwoCopyState::built(rho, Provenance::PhaseAveraged)
}

/// `(|0_L⟩|1_L⟩ + |1_L⟩|0_L⟩)/√2` with `|0_L⟩ = |01⟩`, `|1_L⟩ = |10⟩`, on `(A1, B1, A2, B2)`.
///
/// Alice's logical qubit is carried by `(A1, A2)` and Bob's by `(B1, B2)`:
/// `|0_L⟩_A|1_L⟩_B = |01⟩_{A1A2}|10⟩_{B1B2} = |0110⟩` in copy-major order, and
/// the other branch is `|1001⟩`. Read per copy instead, `|0110⟩` is
/// `|0_L⟩_{copy 1}|1_L⟩_{copy 2}`; the two groupings give the same vector.
pub fn logical_bell_state() -> Ket {
    let mut amps = vec![ZERO; 16];
    amps[0b0110] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[0b1001] = C64::new(FRAC_1_SQRT_2, 0.0);
    Ket::new(copy_major_layout(), amps).expect("unit norm")
}

/// Decomposition of the exact phase-averaged state into two unentangled
/// correlated states and the logical Bell state, on `(A1, B1, A2, B2)`.
///
/// The product members are `|0101⟩` and `|1010⟩` copy-major, which read
/// side-major as `|00⟩_{A1A2}|11⟩_{B1B2}` and `|11⟩_{A1A2}|00⟩_{B1B2}`.
pub fn phase_decomposition() -> Vec<(f64, Ket)> {
    let layout = copy_major_layout();
    vec![
        (0.25, Ket::basis(layout.clone(), 0b0101).expect("in range")),
        (0.25, Ket::basis(layout, 0b1010).expect("in range")),
        (0.5, logical_bell_state()),
    ]
}

/// Adversarial preparation: the same symmetry type on Alice's pair and on
/// Bob's pair. Antisymmetric is the singlet on `(A1, A2)` and on `(B1, B2)`;
/// symmetric is `(|01⟩ + |10⟩)/√2` on both pairs.
pub fn eve_state(kind: Symmetry) -> Result<TwoCopyState> {
    let sign = match kind {
        Symmetry::Symmetric => 1.0,
        Symmetry::Antisymmetric => -1.0,
    };
    let pair = |a: &str, b: &str| {
        let amps = vec![ZERO, C64::new(FRAC_1_SQRT_2, 0.0), C64::new(sign * FRAC_1_SQRT_2, 0.0), ZERO];
        Ket::new(QubitLayout::new([a, b])?, amps)
    };
    let ket = pair("A1", "A2")?.tensor(&pair("B1", "B2")?)?.permute(&COPY_MAJOR)?;
    TwoCopyState::built(ket.to_density(), Provenance::Adversarial)
}
