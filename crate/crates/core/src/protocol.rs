//! The antisymmetric-projection estimate, its two-sided extension, shot
//! sampling, and end-to-end comparison against reference entanglement values.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{expectation_value, Ket, Operator};
use crate::measures::{ensemble_upper_bound_entanglement, wootters_concurrence};
use crate::projectors::{embed_pair_projector, pair_projector, Symmetry};
use crate::random::seeded_rng;
use crate::states::{copy_major_layout, TwoCopyState};

/// Identical pure qubit copies satisfy `P_a = C²/4 ≤ 1/4`; the estimate is
/// flagged invalid above `1/4 + VALIDITY_TOLERANCE`.
pub const VALIDITY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Alice,
    Bob,
}

impl Side {
    pub fn pair(self) -> (&'static str, &'static str) {
        match self {
            Side::Alice => ("A1", "A2"),
            Side::Bob => ("B1", "B2"),
        }
    }
}

/// Projector onto the `kind` subspace of one side's pair, on `(A1, B1, A2, B2)`.
pub fn side_projector(side: Side, kind: Symmetry) -> Result<Operator> {
    embed_pair_projector(&pair_projector(kind, side.pair())?, &copy_major_layout())
}

/// `Tr[P_a ρ]` on one side's pair of qubits.
pub fn antisym_probability(state: &TwoCopyState, side: Side) -> Result<f64> {
    expectation_value(&side_projector(side, Symmetry::Antisymmetric)?, state.density())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NaiveEstimate {
    /// `2 √P_a`, never clamped to `[0, 1]`.
    pub concurrence: f64,
    pub valid: bool,
}

pub fn naive_concurrence_estimate(p_a: f64) -> Result<NaiveEstimate> {
    naive_concurrence_estimate_with(p_a, VALIDITY_TOLERANCE)
}

pub fn naive_concurrence_estimate_with(p_a: f64, tolerance: f64) -> Result<NaiveEstimate> {
    if !(p_a.is_finite() && (-1e-10..=1.0 + 1e-10).contains(&p_a)) {
        return Err(Error::OutOfRange {
            what: "antisymmetric probability",
            value: p_a,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(NaiveEstimate {
        concurrence: 2.0 * p_a.max(0.0).sqrt(),
        valid: p_a <= 0.25 + tolerance,
    })
}

/// Joint (Alice, Bob) outcome probabilities; `a` = antisymmetric, `s` = symmetric.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub p_aa: f64,
    pub p_as: f64,
    pub p_sa: f64,
    pub p_ss: f64,
}

impl OutcomeDistribution {
    /// `[aa, as, sa, ss]`
    pub fn as_array(&self) -> [f64; 4] {
        [self.p_aa, self.p_as, self.p_sa, self.p_ss]
    }

    pub fn alice_antisym(&self) -> f64 {
        self.p_aa + self.p_as
    }

    pub fn bob_antisym(&self) -> f64 {
        self.p_aa + self.p_sa
    }
}

/// Ideal simultaneous measurement of the two commuting side projectors.
pub fn joint_outcome_distribution(state: &TwoCopyState) -> Result<OutcomeDistribution> {
    let mut p = [0.0; 4];
    let kinds = [Symmetry::Antisymmetric, Symmetry::Symmetric];
    for (i, &x) in kinds.iter().enumerate() {
        let alice = side_projector(Side::Alice, x)?;
        for (j, &y) in kinds.iter().enumerate() {
            let joint = alice.compose(&side_projector(Side::Bob, y)?)?;
            p[2 * i + j] = expectation_value(&joint, state.density())?;
        }
    }
    Ok(OutcomeDistribution {
        p_aa: p[0],
        p_as: p[1],
        p_sa: p[2],
        p_ss: p[3],
    })
}

/// Probability that Alice and Bob obtain different outcomes.
pub fn disagreement_probability(d: &OutcomeDistribution) -> f64 {
    d.p_as + d.p_sa
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub aa: u64,
    #[serde(rename = "as")]
    pub as_: u64,
    pub sa: u64,
    pub ss: u64,
}

impl OutcomeCounts {
    pub fn as_array(&self) -> [u64; 4] {
        [self.aa, self.as_, self.sa, self.ss]
    }

    pub fn total(&self) -> u64 {
        self.as_array().iter().sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub shots: u64,
    pub seed: u64,
    pub counts: OutcomeCounts,
}

pub fn sample_outcomes(state: &TwoCopyState, shots: u64, seed: u64) -> Result<ShotRecord> {
    sample_distribution(&joint_outcome_distribution(state)?, shots, seed)
}

/// I.i.d. draws by inverse-CDF on one ChaCha20 stream per `seed`. Rounding
/// negatives are dropped and the distribution renormalized before sampling.
pub fn sample_distribution(d: &OutcomeDistribution, shots: u64, seed: u64) -> Result<ShotRecord> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let p = d.as_array().map(|x| x.max(0.0));
    let total: f64 = p.iter().sum();
    let mut cdf = [0.0; 4];
    let mut acc = 0.0;
    for (c, x) in cdf.iter_mut().zip(p) {
        acc += x / total;
        *c = acc;
    }
    let mut rng = seeded_rng(seed, 0);
    let mut counts = [0u64; 4];
    for _ in 0..shots {
        let u: f64 = rng.random();
        // last nonempty outcome absorbs u ≥ cdf[3] from rounding
        let k = cdf
            .iter()
            .position(|&c| u < c)
            .unwrap_or_else(|| p.iter().rposition(|&x| x > 0.0).unwrap_or(3));
        counts[k] += 1;
    }
    Ok(ShotRecord {
        shots,
        seed,
        counts: OutcomeCounts {
            aa: counts[0],
            as_: counts[1],
            sa: counts[2],
            ss: counts[3],
        },
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvaluateOptions {
    /// Pure-state decomposition of the two-copy state, split `(A1, A2) | (B1, B2)`.
    pub decomposition: Option<Vec<(f64, Ket)>>,
    pub validity_tolerance: f64,
}

impl Default for EvaluateOptions {
    fn default() -> Self {
        Self {
            decomposition: None,
            validity_tolerance: VALIDITY_TOLERANCE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateVerdict {
    pub p_a_alice: f64,
    pub p_a_bob: f64,
    /// `2 √p_a_alice`
    pub naive_concurrence: f64,
    pub estimator_valid: bool,
    pub disagreement_prob: f64,
    pub outcomes: OutcomeDistribution,
    /// Wootters concurrence of copy 1.
    pub truth_single_copy_concurrence: f64,
    /// Average entanglement entropy of the supplied decomposition (ebits).
    pub truth_decomposition_bound: Option<f64>,
}

pub fn evaluate_scenario(state: &TwoCopyState, options: &EvaluateOptions) -> Result<EstimateVerdict> {
    let outcomes = joint_outcome_distribution(state)?;
    let p_a_alice = antisym_probability(state, Side::Alice)?;
    let p_a_bob = antisym_probability(state, Side::Bob)?;
    let naive = naive_concurrence_estimate_with(p_a_alice, options.validity_tolerance)?;
    let truth = wootters_concurrence(&state.single_copy_marginal()?)?.value();
    let bound = options
        .decomposition
        .as_deref()
        .map(|members| ensemble_upper_bound_entanglement(members, &["A1", "A2"]))
        .transpose()?;
    Ok(EstimateVerdict {
        p_a_alice,
        p_a_bob,
        naive_concurrence: naive.concurrence,
        estimator_valid: naive.valid,
        disagreement_prob: disagreement_probability(&outcomes),
        outcomes,
        truth_single_copy_concurrence: truth,
        truth_decomposition_bound: bound,
    })
}

#[cfg(test)]
mod tests;
