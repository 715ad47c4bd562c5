//! Scenario definitions: a θ-parameterized state family, a list of operators,
//! a θ grid and the bound identifiers to emit.
//!
//! Scenarios are either taken from the builtin catalog or loaded from a JSON
//! config file with the same shape as [`Scenario`].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::quantum::{self, Axis, DensityMatrix, PureState, State, UnitaryOperator};

/// Inclusive grid `start, …, stop` with `count ≥ 2` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Default for ThetaGrid {
    fn default() -> Self {
        Self {
            start: 0.0,
            stop: 2.0 * PI,
            count: 721,
        }
    }
}

impl ThetaGrid {
    pub fn points(&self) -> Vec<f64> {
        let last = self.count - 1;
        let step = (self.stop - self.start) / last as f64;
        (0..self.count)
            .map(|i| {
                if i == last {
                    self.stop
                } else {
                    self.start + i as f64 * step
                }
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::scenario("grid.count", format!("{} < 2", self.count)));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::scenario("grid", "endpoints must be finite"));
        }
        Ok(())
    }
}

/// Parses `pi`, `2pi`, `0.5*pi`, `pi/4`, `-pi/2` or a plain number.
pub fn parse_angle(s: &str) -> Option<f64> {
    let s = s.trim().to_ascii_lowercase();
    if let Ok(v) = s.parse::<f64>() {
        return Some(v);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim().to_string(), d.trim().parse::<f64>().ok()?),
        None => (s.clone(), 1.0),
    };
    let coef = num.strip_suffix("pi")?.trim_end_matches('*').trim();
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().ok()?,
    };
    Some(coef * PI / den)
}

impl FromStr for ThetaGrid {
    type Err = Error;

    /// `start:stop:count`, e.g. `0:2pi:721`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(Error::scenario(
                "grid",
                format!("expected start:stop:count, got `{s}`"),
            ));
        };
        let start = parse_angle(start)
            .ok_or_else(|| Error::scenario("grid.start", format!("bad angle `{start}`")))?;
        let stop = parse_angle(stop)
            .ok_or_else(|| Error::scenario("grid.stop", format!("bad angle `{stop}`")))?;
        let count = count
            .trim()
            .parse()
            .map_err(|_| Error::scenario("grid.count", format!("bad count `{count}`")))?;
        let grid = Self { start, stop, count };
        grid.validate()?;
        Ok(grid)
    }
}

/// A complex number written as `[re, im]` in config files.
pub type ComplexLiteral = [f64; 2];

fn literal(z: &ComplexLiteral) -> Complex64 {
    Complex64::new(z[0], z[1])
}

fn matrix_from_literal(rows: &[Vec<ComplexLiteral>]) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(literal).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

/// θ-parameterized state families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StateFamily {
    /// `cos θ|0⟩ − sin θ|d−1⟩`.
    ClockShift { d: usize },
    /// `½(I + r·σ)` with `r = (1/3, 2/3 cos θ, 2/3 sin θ)`.
    QubitMixed,
    /// `½cos(θ/2)|0⟩ + (√3/2)sin(θ/2)|1⟩ + ½sin(θ/2)|2⟩ + (√3/2)cos(θ/2)|3⟩`.
    FourLevel,
    /// `(1/3)(I + √3 n·λ)` with `n = (cos θ/√3, 0, 0, 0, 0, sin θ/√3, 0, 0)`.
    QutritMixed,
    /// `cos θ|0⟩ + ½ sin θ|1⟩ + (√3/2) sin θ|4⟩`.
    FiveLevel,
    /// θ-independent pure state.
    FixedPure { amplitudes: Vec<ComplexLiteral> },
    /// θ-independent density matrix.
    FixedDensity { matrix: Vec<Vec<ComplexLiteral>> },
}

impl StateFamily {
    pub fn at(&self, theta: f64) -> Result<State> {
        let (s, c) = theta.sin_cos();
        Ok(match self {
            StateFamily::ClockShift { d } => {
                if *d < 2 {
                    return Err(Error::scenario("state.d", format!("{d} < 2")));
                }
                let mut amps = vec![0.0; *d];
                amps[0] = c;
                amps[d - 1] = -s;
                State::Pure(PureState::from_real(&amps)?)
            }
            StateFamily::QubitMixed => State::Mixed(quantum::bloch_qubit([
                1.0 / 3.0,
                2.0 / 3.0 * c,
                2.0 / 3.0 * s,
            ])?),
            StateFamily::FourLevel => {
                let (sh, ch) = (theta / 2.0).sin_cos();
                let r3 = 3f64.sqrt() / 2.0;
                State::Pure(PureState::from_real(&[
                    0.5 * ch,
                    r3 * sh,
                    0.5 * sh,
                    r3 * ch,
                ])?)
            }
            StateFamily::QutritMixed => {
                let r = 1.0 / 3f64.sqrt();
                State::Mixed(quantum::gellmann_qutrit([
                    r * c,
                    0.0,
                    0.0,
                    0.0,
                    0.0,
                    r * s,
                    0.0,
                    0.0,
                ])?)
            }
            StateFamily::FiveLevel => State::Pure(PureState::from_real(&[
                c,
                0.5 * s,
                0.0,
                0.0,
                3f64.sqrt() / 2.0 * s,
            ])?),
            StateFamily::FixedPure { amplitudes } => {
                State::Pure(PureState::new(amplitudes.iter().map(literal).collect())?)
            }
            StateFamily::FixedDensity { matrix } => {
                State::Mixed(DensityMatrix::new(matrix_from_literal(matrix)?)?)
            }
        })
    }
}

/// Named operator constructors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum OperatorSpec {
    Identity {
        dim: usize,
    },
    Clock {
        d: usize,
    },
    Shift {
        d: usize,
    },
    /// `e^{i·angle·σ_axis}`.
    PauliExp {
        axis: String,
        angle: f64,
    },
    /// 3×3 rotation about a coordinate axis.
    Rotation3 {
        axis: String,
        angle: f64,
    },
    /// `diag(e^{i·φ_1}, …, e^{i·φ_n})`.
    DiagonalPhases {
        phases: Vec<f64>,
    },
    /// `e^{i·angle}` times another operator.
    Phased {
        angle: f64,
        of: Box<OperatorSpec>,
    },
    /// Literal matrix, rows of `[re, im]` entries.
    Matrix {
        rows: Vec<Vec<ComplexLiteral>>,
    },
}

impl OperatorSpec {
    pub fn build(&self) -> Result<UnitaryOperator> {
        match self {
            OperatorSpec::Identity { dim } => {
                if *dim == 0 {
                    return Err(Error::scenario("operators.dim", "must be positive"));
                }
                Ok(UnitaryOperator::identity(*dim))
            }
            OperatorSpec::Clock { d } => quantum::clock(*d),
            OperatorSpec::Shift { d } => quantum::shift(*d),
            OperatorSpec::PauliExp { axis, angle } => {
                Ok(quantum::pauli_exp(axis.parse::<Axis>()?, *angle))
            }
            OperatorSpec::Rotation3 { axis, angle } => {
                Ok(quantum::rotation3(axis.parse::<Axis>()?, *angle))
            }
            OperatorSpec::DiagonalPhases { phases } => {
                if phases.is_empty() {
                    return Err(Error::scenario("operators.phases", "empty"));
                }
                let diag: Vec<Complex64> = phases
                    .iter()
                    .map(|&p| Complex64::from_polar(1.0, p))
                    .collect();
                UnitaryOperator::new(ComplexMatrix::from_diag(&diag))
            }
            OperatorSpec::Phased { angle, of } => Ok(of.build()?.with_phase(*angle)),
            OperatorSpec::Matrix { rows } => UnitaryOperator::new(matrix_from_literal(rows)?),
        }
    }
}

/// Identifier of an emitted curve. Text forms: `I<k>`, `Imax<k>`, `LB2`,
/// `LB3`, `detG`, `prod3_k<k>`, `prod3hat_k<k>`, `prod4_k<k>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum BoundId {
    /// `I_k(A, B)`.
    Chain(usize),
    /// `max_{π₁,π₂} (π₁, π₂) I_k(A, B)`.
    ChainMax(usize),
    Lb2,
    Lb3,
    DetG,
    /// `√(I_k J_k K_k)`.
    Prod3(usize),
    /// `√(Î_k Ĵ_k K̂_k)`.
    Prod3Hat(usize),
    /// `I_k(A, B) · I_k(C, D)`.
    Prod4(usize),
}

impl BoundId {
    pub fn order(&self) -> Option<usize> {
        match *self {
            BoundId::Chain(k)
            | BoundId::ChainMax(k)
            | BoundId::Prod3(k)
            | BoundId::Prod3Hat(k)
            | BoundId::Prod4(k) => Some(k),
            BoundId::Lb2 | BoundId::Lb3 | BoundId::DetG => None,
        }
    }

    /// Operator counts this bound is defined for.
    fn operator_count(&self) -> Option<usize> {
        match self {
            BoundId::Chain(_) | BoundId::ChainMax(_) | BoundId::Lb2 => Some(2),
            BoundId::Lb3 | BoundId::Prod3(_) | BoundId::Prod3Hat(_) => Some(3),
            BoundId::Prod4(_) => Some(4),
            BoundId::DetG => None,
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundId::Chain(k) => write!(f, "I{k}"),
            BoundId::ChainMax(k) => write!(f, "Imax{k}"),
            BoundId::Lb2 => write!(f, "LB2"),
            BoundId::Lb3 => write!(f, "LB3"),
            BoundId::DetG => write!(f, "detG"),
            BoundId::Prod3(k) => write!(f, "prod3_k{k}"),
            BoundId::Prod3Hat(k) => write!(f, "prod3hat_k{k}"),
            BoundId::Prod4(k) => write!(f, "prod4_k{k}"),
        }
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::scenario("bounds", format!("unknown bound id `{s}`"));
        let order = |digits: &str| -> Result<usize> {
            match digits.parse::<usize>() {
                Ok(k) if k >= 2 && digits.chars().all(|c| c.is_ascii_digit()) => Ok(k),
                _ => Err(bad()),
            }
        };
        match s {
            "LB2" => return Ok(BoundId::Lb2),
            "LB3" => return Ok(BoundId::Lb3),
            "detG" => return Ok(BoundId::DetG),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("Imax") {
            Ok(BoundId::ChainMax(order(rest)?))
        } else if let Some(rest) = s.strip_prefix("prod3hat_k") {
            Ok(BoundId::Prod3Hat(order(rest)?))
        } else if let Some(rest) = s.strip_prefix("prod3_k") {
            Ok(BoundId::Prod3(order(rest)?))
        } else if let Some(rest) = s.strip_prefix("prod4_k") {
            Ok(BoundId::Prod4(order(rest)?))
        } else if let Some(rest) = s.strip_prefix('I') {
            Ok(BoundId::Chain(order(rest)?))
        } else {
            Err(bad())
        }
    }
}

impl TryFrom<String> for BoundId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BoundId> for String {
    fn from(b: BoundId) -> String {
        b.to_string()
    }
}

pub const DEFAULT_SEED: u64 = 2019;

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub state: StateFamily,
    pub operators: Vec<OperatorSpec>,
    #[serde(default)]
    pub grid: ThetaGrid,
    pub bounds: Vec<BoundId>,
    /// Seed for the heuristic permutation search (`N > 6`).
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario =
            serde_json::from_str(text).map_err(|e| Error::scenario("config", e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn build_operators(&self) -> Result<Vec<UnitaryOperator>> {
        self.operators
            .iter()
            .enumerate()
            .map(|(i, spec)| {
                spec.build().map_err(|e| match e {
                    Error::Scenario { .. } => e,
                    other => Error::scenario(format!("operators[{i}]"), other.to_string()),
                })
            })
            .collect()
    }

    /// Checks every field, naming the offending one on failure.
    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::scenario("name", "empty"));
        }
        self.grid.validate()?;
        let count = self.operators.len();
        if !(2..=4).contains(&count) {
            return Err(Error::scenario(
                "operators",
                format!("{count} operators; expected 2, 3 or 4"),
            ));
        }
        let ops = self.build_operators()?;
        let state = self
            .state
            .at(self.grid.start)
            .map_err(|e| Error::scenario("state", e.to_string()))?;
        for (i, u) in ops.iter().enumerate() {
            if u.dim() != state.dim() {
                return Err(Error::scenario(
                    format!("operators[{i}]"),
                    format!(
                        "dimension {} does not match state dimension {}",
                        u.dim(),
                        state.dim()
                    ),
                ));
            }
        }
        if self.bounds.is_empty() {
            return Err(Error::scenario("bounds", "no bounds requested"));
        }
        let n_eff = state.effective_dim();
        for b in &self.bounds {
            if let Some(needed) = b.operator_count() {
                if needed != count {
                    return Err(Error::scenario(
                        "bounds",
                        format!("`{b}` needs {needed} operators, scenario has {count}"),
                    ));
                }
            }
            if let Some(k) = b.order() {
                if k > n_eff {
                    return Err(Error::scenario(
                        "bounds",
                        format!("`{b}` has k = {k} > N = {n_eff}"),
                    ));
                }
            }
        }
        Ok(())
    }
}

fn ids(
    f: impl Fn(usize) -> BoundId,
    ks: std::ops::RangeInclusive<usize>,
) -> impl Iterator<Item = BoundId> {
    ks.map(f)
}

fn clock_shift(name: &str, description: &str, d: usize, bounds: Vec<BoundId>) -> Scenario {
    Scenario {
        name: name.into(),
        description: description.into(),
        state: StateFamily::ClockShift { d },
        operators: vec![OperatorSpec::Clock { d }, OperatorSpec::Shift { d }],
        grid: ThetaGrid::default(),
        bounds,
        seed: DEFAULT_SEED,
    }
}

/// Names of the builtin scenarios, in catalog order.
pub const BUILTIN_NAMES: [&str; 10] = [
    "example1-d2",
    "example1-d3",
    "example1-d4",
    "example1-d5",
    "example1-remark",
    "example2",
    "example3",
    "example4",
    "example5",
    "example6",
];

pub fn builtin(name: &str) -> Option<Scenario> {
    use BoundId::*;
    let pi8 = PI / 8.0;
    let scenario = match name {
        "example1-d2" | "example1-d3" | "example1-d4" | "example1-d5" => {
            let d: usize = name[name.len() - 1..].parse().expect("digit suffix");
            let mut bounds: Vec<BoundId> = ids(Chain, 2..=d).collect();
            bounds.extend([Lb2, DetG]);
            clock_shift(
                name,
                &format!(
                    "clock and shift in d = {d}, state cos t|0> - sin t|{}>",
                    d - 1
                ),
                d,
                bounds,
            )
        }
        "example1-remark" => clock_shift(
            name,
            "qutrit clock and shift: permutation-strengthened I2, I3",
            3,
            vec![Chain(2), Chain(3), ChainMax(2), ChainMax(3), Lb2],
        ),
        "example2" => Scenario {
            name: name.into(),
            description: "qubit mixed state, A = exp(i pi sy/8), B = exp(i pi sz/8)".into(),
            state: StateFamily::QubitMixed,
            operators: vec![
                OperatorSpec::PauliExp {
                    axis: "y".into(),
                    angle: pi8,
                },
                OperatorSpec::PauliExp {
                    axis: "z".into(),
                    angle: pi8,
                },
            ],
            grid: ThetaGrid::default(),
            bounds: vec![Chain(2), Chain(3), Chain(4), Lb2, DetG],
            seed: DEFAULT_SEED,
        },
        "example3" => {
            let c = vec![
                vec![[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
                vec![[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
                vec![[0.0, 0.0], [0.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
                vec![[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [-1.0, 0.0]],
            ];
            let mut bounds = vec![Lb3, DetG];
            bounds.extend(ids(Prod3, 2..=4));
            bounds.extend(ids(Prod3Hat, 2..=4));
            Scenario {
                name: name.into(),
                description: "four-level pure state, clock, shift and a swap-reflection".into(),
                state: StateFamily::FourLevel,
                operators: vec![
                    OperatorSpec::Clock { d: 4 },
                    OperatorSpec::Shift { d: 4 },
                    OperatorSpec::Matrix { rows: c },
                ],
                grid: ThetaGrid::default(),
                bounds,
                seed: DEFAULT_SEED,
            }
        }
        "example4" => {
            let mut bounds = vec![Lb3, DetG];
            bounds.extend(ids(Prod3, 2..=4));
            bounds.extend(ids(Prod3Hat, 2..=4));
            Scenario {
                name: name.into(),
                description: "qubit mixed state with Pauli exponentials about y, z, x".into(),
                state: StateFamily::QubitMixed,
                operators: vec![
                    OperatorSpec::PauliExp {
                        axis: "y".into(),
                        angle: pi8,
                    },
                    OperatorSpec::PauliExp {
                        axis: "z".into(),
                        angle: pi8,
                    },
                    OperatorSpec::PauliExp {
                        axis: "x".into(),
                        angle: pi8,
                    },
                ],
                grid: ThetaGrid::default(),
                bounds,
                seed: DEFAULT_SEED,
            }
        }
        "example5" => {
            let mut bounds = vec![Lb3, DetG];
            bounds.extend(ids(Prod3, 2..=9));
            bounds.extend(ids(Prod3Hat, 2..=9));
            Scenario {
                name: name.into(),
                description: "qutrit mixed state with rotations R_Z(pi/4), R_Y(-pi/4), R_X(pi/3)"
                    .into(),
                state: StateFamily::QutritMixed,
                operators: vec![
                    OperatorSpec::Rotation3 {
                        axis: "z".into(),
                        angle: PI / 4.0,
                    },
                    OperatorSpec::Rotation3 {
                        axis: "y".into(),
                        angle: -PI / 4.0,
                    },
                    OperatorSpec::Rotation3 {
                        axis: "x".into(),
                        angle: PI / 3.0,
                    },
                ],
                grid: ThetaGrid::default(),
                bounds,
                seed: DEFAULT_SEED,
            }
        }
        "example6" => {
            let phases: Vec<f64> = (-2..=2).map(|j| 2.0 * PI * j as f64 / 5.0).collect();
            let mut bounds = vec![DetG];
            bounds.extend(ids(Prod4, 2..=5));
            Scenario {
                name: name.into(),
                description: "five-level pure state, conjugate clock pair and phased shifts".into(),
                state: StateFamily::FiveLevel,
                operators: vec![
                    OperatorSpec::DiagonalPhases {
                        phases: phases.clone(),
                    },
                    OperatorSpec::DiagonalPhases {
                        phases: phases.iter().map(|p| -p).collect(),
                    },
                    OperatorSpec::Shift { d: 5 },
                    OperatorSpec::Phased {
                        angle: PI / 2.0,
                        of: Box::new(OperatorSpec::Shift { d: 5 }),
                    },
                ],
                grid: ThetaGrid::default(),
                bounds,
                seed: DEFAULT_SEED,
            }
        }
        _ => return None,
    };
    Some(scenario)
}

pub fn catalog() -> Vec<Scenario> {
    BUILTIN_NAMES
        .iter()
        .map(|n| builtin(n).expect("catalog names are builtin"))
        .collect()
}
