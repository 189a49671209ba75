//! Scenario documents: TOML in, validated [`ScenarioConfig`] out.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Tolerances, C64};
use crate::protocol::VALIDITY_TOLERANCE;
use crate::states::DEFAULT_PHASE_POINTS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    PureCopies,
    DeFinetti,
    PureDeFinetti,
    PhaseAveraged,
    EveAntisym,
    EveSym,
    Custom,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 7] = [
        Self::PureCopies,
        Self::DeFinetti,
        Self::PureDeFinetti,
        Self::PhaseAveraged,
        Self::EveAntisym,
        Self::EveSym,
        Self::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::PureCopies => "pure-copies",
            Self::DeFinetti => "de-finetti",
            Self::PureDeFinetti => "pure-de-finetti",
            Self::PhaseAveraged => "phase-averaged",
            Self::EveAntisym => "eve-antisym",
            Self::EveSym => "eve-sym",
            Self::Custom => "custom",
        }
    }

    /// One-line summary including the keys the scenario reads.
    pub fn summary(self) -> &'static str {
        match self {
            Self::PureCopies => "|Ψ⟩⊗|Ψ⟩ from `ket` (4 amplitudes)",
            Self::DeFinetti => "Σ pᵢ ρᵢ⊗ρᵢ from `members` (each a `ket` or 4×4 `density`)",
            Self::PureDeFinetti => "Σ pᵢ |Ψᵢ⟩⟨Ψᵢ|⊗|Ψᵢ⟩⟨Ψᵢ| from `members` with `ket`",
            Self::PhaseAveraged => "phase-averaged copies of (|01⟩+e^{iφ}|10⟩)/√2; `phase_mode`, `phase_points`",
            Self::EveAntisym => "singlet on (A1,A2) and on (B1,B2)",
            Self::EveSym => "Ψ⁺ on (A1,A2) and on (B1,B2)",
            Self::Custom => "explicit 16×16 `density` on (A1,B1,A2,B2)",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A real number or a `[re, im]` pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Amplitude {
    Real(f64),
    Complex([f64; 2]),
}

impl Amplitude {
    pub fn value(self) -> C64 {
        match self {
            Self::Real(re) => C64::new(re, 0.0),
            Self::Complex([re, im]) => C64::new(re, im),
        }
    }
}

impl From<C64> for Amplitude {
    fn from(z: C64) -> Self {
        if z.im == 0.0 {
            Self::Real(z.re)
        } else {
            Self::Complex([z.re, z.im])
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseModeName {
    #[default]
    Exact,
    Discretized,
}

/// Weighted ensemble entry: exactly one of `ket` or `density`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Member {
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ket: Option<Vec<Amplitude>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<Vec<Vec<Amplitude>>>,
}

/// Partial override of the default tolerances.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hermiticity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalue_floor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<f64>,
    /// Slack on `P_a ≤ 1/4` before the estimate is flagged invalid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validity: Option<f64>,
}

impl ToleranceOverrides {
    pub fn state(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            hermiticity: self.hermiticity.unwrap_or(d.hermiticity),
            trace: self.trace.unwrap_or(d.trace),
            eigenvalue_floor: self.eigenvalue_floor.unwrap_or(d.eigenvalue_floor),
            normalization: self.normalization.unwrap_or(d.normalization),
        }
    }

    pub fn validity(&self) -> f64 {
        self.validity.unwrap_or(VALIDITY_TOLERANCE)
    }
}

/// Report quantities that an expectation can pin down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    PAAlice,
    PABob,
    NaiveConcurrence,
    /// 1 when the estimate is inside its validity domain, else 0.
    EstimatorValid,
    DisagreementProb,
    PAa,
    PAs,
    PSa,
    PSs,
    TruthSingleCopyConcurrence,
    TruthDecompositionBound,
    /// `[Σ pᵢ Cᵢ]² / 4`, ensemble scenarios only.
    MeanConcurrenceFunctional,
    /// `Σ pᵢ Cᵢ² / 4`, ensemble scenarios only.
    MemberConcurrenceFunctional,
    /// Sampled `(A,S) + (S,A)` frequency, needs shots.
    SampledDisagreement,
}

impl fmt::Display for Quantity {
    /// The config-file spelling, e.g. `p_a_alice`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match serde_json::to_value(self) {
            Ok(serde_json::Value::String(s)) => f.write_str(&s),
            _ => write!(f, "{self:?}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub quantity: Quantity,
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(default)]
    pub phase_mode: PhaseModeName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ket: Option<Vec<Amplitude>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub members: Vec<Member>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<Vec<Vec<Amplitude>>>,
    /// Pure decomposition of the two-copy state on (A1,B1,A2,B2), 16 amplitudes per member.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub decomposition: Vec<Member>,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expect: Vec<Expectation>,
}

impl ScenarioConfig {
    /// A config with only the scenario set; everything else at defaults.
    pub fn new(scenario: ScenarioKind) -> Self {
        Self {
            scenario,
            description: None,
            seed: 0,
            shots: None,
            phase_mode: PhaseModeName::Exact,
            phase_points: None,
            ket: None,
            members: Vec::new(),
            density: None,
            decomposition: Vec::new(),
            tolerances: ToleranceOverrides::default(),
            expect: Vec::new(),
        }
    }

    /// Switches to a discretized phase average with `points` samples.
    pub fn set_phase_points(&mut self, points: usize) {
        self.phase_mode = PhaseModeName::Discretized;
        self.phase_points = Some(points);
    }

    pub fn phase_points_or_default(&self) -> usize {
        self.phase_points.unwrap_or(DEFAULT_PHASE_POINTS)
    }

    /// Every violation of the schema's semantic rules, in document order.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let tol = self.tolerances.state();
        use ScenarioKind::*;

        let needs_ket = self.scenario == PureCopies;
        let needs_members = matches!(self.scenario, DeFinetti | PureDeFinetti);
        let needs_density = self.scenario == Custom;
        match (&self.ket, needs_ket) {
            (Some(k), true) => check_amplitudes(&mut v, "ket", k, 4),
            (None, true) => v.push("`ket` is required for pure-copies".into()),
            (Some(_), false) => v.push(format!("`ket` is not used by {}", self.scenario)),
            (None, false) => {}
        }
        if needs_members {
            if self.members.is_empty() {
                v.push(format!("`members` is required for {}", self.scenario));
            }
            for (i, m) in self.members.iter().enumerate() {
                let at = format!("members[{i}]");
                match (&m.ket, &m.density) {
                    (Some(k), None) => check_amplitudes(&mut v, &format!("{at}.ket"), k, 4),
                    (None, Some(d)) if self.scenario == DeFinetti => {
                        check_square(&mut v, &format!("{at}.density"), d, 4)
                    }
                    (None, Some(_)) => v.push(format!("{at}: pure-de-finetti members need `ket`, not `density`")),
                    (Some(_), Some(_)) => v.push(format!("{at}: give either `ket` or `density`, not both")),
                    (None, None) => v.push(format!("{at}: missing `ket` or `density`")),
                }
            }
            check_weights(&mut v, "members", &self.members, tol.normalization);
        } else if !self.members.is_empty() {
            v.push(format!("`members` is not used by {}", self.scenario));
        }
        match (&self.density, needs_density) {
            (Some(d), true) => check_square(&mut v, "density", d, 16),
            (None, true) => v.push("`density` is required for custom".into()),
            (Some(_), false) => v.push(format!("`density` is not used by {}", self.scenario)),
            (None, false) => {}
        }

        if self.scenario == PhaseAveraged {
            match (self.phase_mode, self.phase_points) {
                (PhaseModeName::Exact, Some(_)) => {
                    v.push("`phase_points` needs phase_mode = \"discretized\"".into())
                }
                (PhaseModeName::Discretized, Some(n)) if n < 3 => {
                    v.push(format!("phase_points = {n}: at least 3 are required"))
                }
                _ => {}
            }
        } else if self.phase_mode != PhaseModeName::Exact || self.phase_points.is_some() {
            v.push(format!("phase settings are not used by {}", self.scenario));
        }

        for (i, m) in self.decomposition.iter().enumerate() {
            let at = format!("decomposition[{i}]");
            match (&m.ket, &m.density) {
                (Some(k), None) => check_amplitudes(&mut v, &format!("{at}.ket"), k, 16),
                _ => v.push(format!("{at}: members need exactly a `ket`")),
            }
        }
        if !self.decomposition.is_empty() {
            check_weights(&mut v, "decomposition", &self.decomposition, tol.normalization);
        }

        if self.shots == Some(0) {
            v.push("shots must be positive".into());
        }
        let t = &self.tolerances;
        for (name, x) in [
            ("hermiticity", t.hermiticity),
            ("trace", t.trace),
            ("normalization", t.normalization),
            ("validity", t.validity),
        ] {
            if let Some(x) = x {
                if !(x.is_finite() && x >= 0.0) {
                    v.push(format!("tolerances.{name} = {x}: must be finite and non-negative"));
                }
            }
        }
        if let Some(x) = t.eigenvalue_floor {
            if !(x.is_finite() && x <= 0.0) {
                v.push(format!("tolerances.eigenvalue_floor = {x}: must be finite and non-positive"));
            }
        }
        for (i, e) in self.expect.iter().enumerate() {
            if !e.value.is_finite() {
                v.push(format!("expect[{i}]: value must be finite"));
            }
            if !(e.tolerance.is_finite() && e.tolerance >= 0.0) {
                v.push(format!("expect[{i}]: tolerance must be finite and non-negative"));
            }
        }
        v
    }
}

fn check_amplitudes(v: &mut Vec<String>, at: &str, amps: &[Amplitude], len: usize) {
    if amps.len() != len {
        v.push(format!("{at}: expected {len} amplitudes, found {}", amps.len()));
        return;
    }
    if let Some(i) = amps.iter().position(|a| {
        let z = a.value();
        !(z.re.is_finite() && z.im.is_finite())
    }) {
        v.push(format!("{at}[{i}]: amplitude is not finite"));
        return;
    }
    let norm: f64 = amps.iter().map(|a| a.value().norm_sqr()).sum();
    if norm == 0.0 {
        v.push(format!("{at}: zero vector cannot be normalized"));
    }
}

fn check_square(v: &mut Vec<String>, at: &str, rows: &[Vec<Amplitude>], dim: usize) {
    if rows.len() != dim {
        v.push(format!("{at}: expected {dim} rows, found {}", rows.len()));
        return;
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            v.push(format!("{at}[{i}]: expected {dim} entries, found {}", row.len()));
        } else if row.iter().any(|a| {
            let z = a.value();
            !(z.re.is_finite() && z.im.is_finite())
        }) {
            v.push(format!("{at}[{i}]: entry is not finite"));
        }
    }
}

fn check_weights(v: &mut Vec<String>, at: &str, members: &[Member], tolerance: f64) {
    let mut total = 0.0;
    for (i, m) in members.iter().enumerate() {
        if !(m.weight.is_finite() && m.weight >= 0.0) {
            v.push(format!("{at}[{i}].weight = {}: must be finite and non-negative", m.weight));
        }
        total += m.weight;
    }
    if !members.is_empty() && (total - 1.0).abs() > tolerance.max(1e-12) {
        v.push(format!("{at}: weights sum to {total}, not 1"));
    }
}

/// Parses and validates a TOML scenario document. Errors list every violation.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let raw: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(vec![e.message().to_string()]))?;
    // the scenario name is checked up front so an unknown one is reported by name
    // alongside any other problems rather than as an opaque enum error
    let mut early = Vec::new();
    match raw.get("scenario") {
        Some(toml::Value::String(s)) if ScenarioKind::parse(s).is_none() => {
            let known: Vec<_> = ScenarioKind::ALL.iter().map(|k| k.name()).collect();
            early.push(format!("unknown scenario \"{s}\"; expected one of {}", known.join(", ")));
        }
        Some(toml::Value::String(_)) => {}
        Some(_) => early.push("`scenario` must be a string".into()),
        None => early.push("missing `scenario`".into()),
    }
    if !early.is_empty() {
        return Err(Error::Config(early));
    }
    let config: ScenarioConfig = toml::Value::Table(raw)
        .try_into()
        .map_err(|e: toml::de::Error| Error::Config(vec![e.message().to_string()]))?;
    let violations = config.violations();
    if violations.is_empty() {
        Ok(config)
    } else {
        Err(Error::Config(violations))
    }
}

/// Serializes back to the TOML document schema.
pub fn config_to_toml(config: &ScenarioConfig) -> Result<String> {
    toml::to_string(config).map_err(|e| Error::Serialization(e.to_string()))
}
