//! Config-driven scenarios: parse a document, build the named state, evaluate
//! it, and check any embedded expectations.

mod config;
mod report;

pub use config::{
    config_to_toml, parse_config, Amplitude, Expectation, Member, PhaseModeName, Quantity, ScenarioConfig,
    ScenarioKind, ToleranceOverrides,
};
pub use report::{emit_report, format_significant, ReportFormat};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DensityOperator, Ket, Matrix, QubitLayout, Tolerances};
use crate::measures::{
    antisym_probability_from_mean_concurrence, antisym_probability_from_member_concurrences,
    ensemble_average_concurrence, PureEnsemble,
};
use crate::projectors::Symmetry;
use crate::protocol::{evaluate_scenario, sample_outcomes, EstimateVerdict, EvaluateOptions, ShotRecord};
use crate::states::{
    copy_major_layout, de_finetti_state, eve_state, identical_pure_copies, phase_averaged_state, phase_decomposition,
    phase_ensemble, pure_de_finetti_state, DeFinettiEnsemble, PhaseMode, TwoCopyState,
};

/// Ensemble-level quantities for scenarios built from a pure-state ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleFunctionals {
    /// `Σ pᵢ C(Ψᵢ)`
    pub mean_concurrence: f64,
    /// `[Σ pᵢ C(Ψᵢ)]² / 4`
    pub mean_concurrence_functional: f64,
    /// `Σ pᵢ C(Ψᵢ)² / 4`, equal to `P_a` of the two-copy state.
    pub member_concurrence_functional: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimOutcome {
    pub quantity: Quantity,
    pub expected: f64,
    pub tolerance: f64,
    /// `None` when the report has no such quantity (e.g. no decomposition given).
    pub actual: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub config: ScenarioConfig,
    pub verdict: EstimateVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<ShotRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functionals: Option<EnsembleFunctionals>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<ClaimOutcome>,
    /// All checks passed (vacuously true without expectations).
    pub passed: bool,
}

impl ScenarioReport {
    pub fn quantity(&self, q: Quantity) -> Option<f64> {
        let v = &self.verdict;
        let f = self.functionals.as_ref();
        match q {
            Quantity::PAAlice => Some(v.p_a_alice),
            Quantity::PABob => Some(v.p_a_bob),
            Quantity::NaiveConcurrence => Some(v.naive_concurrence),
            Quantity::EstimatorValid => Some(if v.estimator_valid { 1.0 } else { 0.0 }),
            Quantity::DisagreementProb => Some(v.disagreement_prob),
            Quantity::PAa => Some(v.outcomes.p_aa),
            Quantity::PAs => Some(v.outcomes.p_as),
            Quantity::PSa => Some(v.outcomes.p_sa),
            Quantity::PSs => Some(v.outcomes.p_ss),
            Quantity::TruthSingleCopyConcurrence => Some(v.truth_single_copy_concurrence),
            Quantity::TruthDecompositionBound => v.truth_decomposition_bound,
            Quantity::MeanConcurrenceFunctional => f.map(|f| f.mean_concurrence_functional),
            Quantity::MemberConcurrenceFunctional => f.map(|f| f.member_concurrence_functional),
            Quantity::SampledDisagreement => self
                .shots
                .map(|s| (s.counts.as_ + s.counts.sa) as f64 / s.shots as f64),
        }
    }
}

/// Builds and evaluates the configured scenario. Deterministic in the config.
pub fn run(config: &ScenarioConfig) -> Result<ScenarioReport> {
    run_inner(config).map_err(|source| Error::Scenario {
        scenario: config.scenario.name().to_string(),
        source: Box::new(source),
    })
}

fn run_inner(config: &ScenarioConfig) -> Result<ScenarioReport> {
    let violations = config.violations();
    if !violations.is_empty() {
        return Err(Error::Config(violations));
    }
    let tol = config.tolerances.state();
    let mut decomposition = decomposition_members(config)?;
    let mut ensemble = None;
    let state = match config.scenario {
        ScenarioKind::PureCopies => {
            let psi = pair_ket(config.ket.as_deref().unwrap_or_default())?;
            ensemble = Some(PureEnsemble::new(vec![(1.0, psi.clone())])?);
            identical_pure_copies(&psi)?
        }
        ScenarioKind::DeFinetti => {
            let members = config
                .members
                .iter()
                .map(|m| {
                    let rho = match (&m.ket, &m.density) {
                        (Some(k), _) => pair_ket(k)?.to_density(),
                        (None, Some(d)) => pair_density(d, &tol)?,
                        (None, None) => unreachable!("rejected by validation"),
                    };
                    Ok((m.weight, rho))
                })
                .collect::<Result<Vec<_>>>()?;
            de_finetti_state(&DeFinettiEnsemble::new(members)?)?
        }
        ScenarioKind::PureDeFinetti => {
            let e = pure_members(config)?;
            let s = pure_de_finetti_state(&e)?;
            ensemble = Some(e);
            s
        }
        ScenarioKind::PhaseAveraged => {
            let (mode, points) = match config.phase_mode {
                PhaseModeName::Exact => (PhaseMode::Exact, 4),
                PhaseModeName::Discretized => {
                    let n = config.phase_points_or_default();
                    (PhaseMode::Discretized(n), n)
                }
            };
            ensemble = Some(phase_ensemble(points)?);
            decomposition.get_or_insert_with(phase_decomposition);
            phase_averaged_state(mode)?
        }
        ScenarioKind::EveAntisym => eve_state(Symmetry::Antisymmetric)?,
        ScenarioKind::EveSym => eve_state(Symmetry::Symmetric)?,
        ScenarioKind::Custom => {
            let m = matrix(config.density.as_deref().unwrap_or_default())?;
            let rho = DensityOperator::with_tolerances(copy_major_layout(), m, &tol)?;
            TwoCopyState::custom(rho, &tol)?
        }
    };

    let options = EvaluateOptions {
        decomposition,
        validity_tolerance: config.tolerances.validity(),
    };
    let verdict = evaluate_scenario(&state, &options)?;
    let shots = config
        .shots
        .map(|n| sample_outcomes(&state, n, config.seed))
        .transpose()?;
    let functionals = ensemble.as_ref().map(functionals).transpose()?;

    let mut report = ScenarioReport {
        config: config.clone(),
        verdict,
        shots,
        functionals,
        checks: Vec::new(),
        passed: true,
    };
    report.checks = config
        .expect
        .iter()
        .map(|e| {
            let actual = report.quantity(e.quantity);
            ClaimOutcome {
                quantity: e.quantity,
                expected: e.value,
                tolerance: e.tolerance,
                actual,
                passed: actual.is_some_and(|a| (a - e.value).abs() <= e.tolerance),
            }
        })
        .collect();
    report.passed = report.checks.iter().all(|c| c.passed);
    Ok(report)
}

fn functionals(e: &PureEnsemble) -> Result<EnsembleFunctionals> {
    Ok(EnsembleFunctionals {
        mean_concurrence: ensemble_average_concurrence(e)?,
        mean_concurrence_functional: antisym_probability_from_mean_concurrence(e)?,
        member_concurrence_functional: antisym_probability_from_member_concurrences(e)?,
    })
}

fn pair_layout() -> QubitLayout {
    QubitLayout::new(["A", "B"]).expect("static labels")
}

fn amplitudes(a: &[Amplitude]) -> Vec<crate::linalg::C64> {
    a.iter().map(|x| x.value()).collect()
}

fn pair_ket(a: &[Amplitude]) -> Result<Ket> {
    Ket::normalized(pair_layout(), amplitudes(a))
}

fn matrix(rows: &[Vec<Amplitude>]) -> Result<Matrix> {
    Matrix::from_rows(rows.iter().map(|r| amplitudes(r)).collect())
}

fn pair_density(rows: &[Vec<Amplitude>], tol: &Tolerances) -> Result<DensityOperator> {
    DensityOperator::with_tolerances(pair_layout(), matrix(rows)?, tol)
}

fn pure_members(config: &ScenarioConfig) -> Result<PureEnsemble> {
    let members = config
        .members
        .iter()
        .map(|m| Ok((m.weight, pair_ket(m.ket.as_deref().unwrap_or_default())?)))
        .collect::<Result<Vec<_>>>()?;
    PureEnsemble::new(members)
}

fn decomposition_members(config: &ScenarioConfig) -> Result<Option<Vec<(f64, Ket)>>> {
    if config.decomposition.is_empty() {
        return Ok(None);
    }
    config
        .decomposition
        .iter()
        .map(|m| {
            let k = Ket::normalized(copy_major_layout(), amplitudes(m.ket.as_deref().unwrap_or_default()))?;
            Ok((m.weight, k))
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}
