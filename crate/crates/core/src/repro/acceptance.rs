//! The acceptance suite: every check reports its worst deviation against a
//! fixed tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, AmplitudePair, SearchStrategy, DEFAULT_RESTARTS};
use crate::error::{Error, Result};
use crate::matrix::{self, ComplexMatrix};
use crate::oracle::{self, Seed};
use crate::quantum::{self, DensityMatrix, State, UnitaryOperator};

use super::run::{evaluate, run_scenario, CurvePoint};
use super::scenario::{builtin, BoundId, StateFamily, ThetaGrid};

/// One line of the acceptance report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub criterion: String,
    pub tolerance: f64,
    pub worst_deviation: f64,
    pub pass: bool,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} {}: worst deviation {:.3e} (tolerance {:.0e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.criterion,
            self.worst_deviation,
            self.tolerance
        )
    }
}

/// Worst-case tracker. Equalities record `|a − b|`; inequalities `a ≥ b`
/// record the violation `max(b − a, 0)`. Non-finite values fail.
struct Tracker {
    criterion: String,
    tolerance: f64,
    worst: f64,
    ok: bool,
}

impl Tracker {
    fn new(criterion: &str, tolerance: f64) -> Self {
        Self {
            criterion: criterion.into(),
            tolerance,
            worst: 0.0,
            ok: true,
        }
    }

    fn record(&mut self, deviation: f64) {
        if deviation.is_finite() {
            self.worst = self.worst.max(deviation);
        } else {
            self.ok = false;
            self.worst = f64::MAX;
        }
    }

    fn eq(&mut self, a: f64, b: f64) {
        self.record((a - b).abs());
    }

    fn ge(&mut self, a: f64, b: f64) {
        self.record(if a.is_finite() && b.is_finite() {
            (b - a).max(0.0)
        } else {
            f64::NAN
        });
    }

    fn fail(&mut self) {
        self.ok = false;
    }

    fn finish(self) -> CriterionResult {
        CriterionResult {
            pass: self.ok && self.worst <= self.tolerance,
            criterion: self.criterion,
            tolerance: self.tolerance,
            worst_deviation: self.worst,
        }
    }
}

fn errored(criterion: &str, tolerance: f64, e: &Error) -> CriterionResult {
    CriterionResult {
        criterion: format!("{criterion} [error: {e}]"),
        tolerance,
        worst_deviation: f64::MAX,
        pass: false,
    }
}

fn guarded(
    criterion: &str,
    tolerance: f64,
    f: impl FnOnce(&mut Tracker) -> Result<()>,
) -> CriterionResult {
    let mut t = Tracker::new(criterion, tolerance);
    match f(&mut t) {
        Ok(()) => t.finish(),
        Err(e) => errored(criterion, tolerance, &e),
    }
}

fn value(p: &CurvePoint, id: BoundId) -> Result<f64> {
    p.get(id)
        .ok_or_else(|| Error::scenario("bounds", format!("`{id}` not emitted by the scenario")))
}

fn curve(name: &str) -> Result<Vec<CurvePoint>> {
    let s = builtin(name)
        .ok_or_else(|| Error::scenario("name", format!("unknown builtin `{name}`")))?;
    run_scenario(&s)
}

/// Seed for instance `index` of suite `suite`.
fn instance_seed(seed: u64, suite: u64, index: u64) -> Seed {
    Seed(seed).derive(suite * 1_000_000 + index)
}

/// Variance identities over random unitaries, states of dimension 2–5.
pub fn variance_identities(seed: u64) -> Vec<CriterionResult> {
    let mut closed = Tracker::new(
        "1a variance equals 1 - |<A>|^2 (1000 random instances)",
        1e-10,
    );
    let mut purified = Tracker::new(
        "1b purified variance equals trace variance (1000 random instances)",
        1e-12,
    );
    let mut run = || -> Result<()> {
        for i in 0..1000u64 {
            let dim = 2 + (i % 4) as usize;
            let mixed = (i / 4) % 2 == 1;
            let (state, a, _) = oracle::random_instance(instance_seed(seed, 1, i), dim, mixed)?;
            let var = quantum::variance(&a, &state)?;
            closed.eq(var, 1.0 - quantum::expectation(&a, &state)?.norm_sqr());
            let rho = match &state {
                State::Mixed(rho) => rho.clone(),
                State::Pure(psi) => DensityMatrix::from_pure(psi),
            };
            purified.eq(quantum::variance_purified(&a, &rho)?, var);
        }
        Ok(())
    };
    match run() {
        Ok(()) => vec![closed.finish(), purified.finish()],
        Err(e) => vec![
            errored(&closed.criterion, 1e-10, &e),
            errored(&purified.criterion, 1e-12, &e),
        ],
    }
}

/// Chain monotonicity and endpoints on random operator pairs.
pub fn chain_soundness(seed: u64) -> Vec<CriterionResult> {
    vec![guarded(
        "2 chain nonincreasing, I1 = product, I_N >= LB2 (500 random pairs)",
        1e-10,
        |t| {
            for i in 0..500u64 {
                let dim = 2 + (i % 4) as usize;
                let mixed = (i / 4) % 2 == 1;
                let (state, a, b) = oracle::random_instance(instance_seed(seed, 2, i), dim, mixed)?;
                let c = bounds::chain(&bounds::amplitude_pair(&a, &b, &state)?);
                t.ge(0.0, c.worst_ascent().max(0.0));
                let product = quantum::variance(&a, &state)? * quantum::variance(&b, &state)?;
                t.eq(c.values[0], product);
                t.ge(
                    *c.values.last().expect("nonempty chain"),
                    bounds::lb2(&a, &b, &state)?,
                );
            }
            Ok(())
        },
    )]
}

/// The clock/shift equalities for `d = 2..5`.
pub fn clock_shift_equalities() -> Vec<CriterionResult> {
    use BoundId::{Chain, Lb2};
    (2..=5usize)
        .map(|d| {
            let label = match d {
                2 => "3 example1-d2: product = I2",
                3 => "3 example1-d3: I3 = LB2, I2 >= I3",
                4 => "3 example1-d4: I2 = I3, I4 = LB2",
                _ => "3 example1-d5: I2 = I3 = I4, I5 = LB2",
            };
            guarded(label, 1e-9, |t| {
                for p in curve(&format!("example1-d{d}"))? {
                    match d {
                        2 => t.eq(p.variance_product, value(&p, Chain(2))?),
                        3 => {
                            t.eq(value(&p, Chain(3))?, value(&p, Lb2)?);
                            t.ge(value(&p, Chain(2))?, value(&p, Chain(3))?);
                        }
                        _ => {
                            for k in 2..d - 1 {
                                t.eq(value(&p, Chain(k))?, value(&p, Chain(k + 1))?);
                            }
                            t.eq(value(&p, Chain(d))?, value(&p, Lb2)?);
                        }
                    }
                }
                Ok(())
            })
        })
        .collect()
}

/// Permutation strengthening on the qutrit clock/shift state.
pub fn permutation_remark() -> Vec<CriterionResult> {
    use BoundId::{Chain, ChainMax};
    let points = curve("example1-remark");
    let mut out = vec![];
    out.push(guarded(
        "4a example1-remark: max over S3 x S3 of I2 = product",
        1e-9,
        |t| {
            for p in points.as_ref().map_err(Clone::clone)? {
                t.eq(value(p, ChainMax(2))?, p.variance_product);
            }
            Ok(())
        },
    ));
    out.push(guarded(
        "4b example1-remark: strengthened I3 >= I3",
        1e-10,
        |t| {
            for p in points.as_ref().map_err(Clone::clone)? {
                t.ge(value(p, ChainMax(3))?, value(p, Chain(3))?);
            }
            Ok(())
        },
    ));
    out
}

/// Closed form of `vec(√ρ)` for the qubit mixed family, column stacked.
pub fn qubit_purification_closed_form(theta: f64) -> [Complex64; 4] {
    let (s, c) = theta.sin_cos();
    let n = 2.0 * 15f64.sqrt();
    [
        Complex64::new((5.0 + 2.0 * s) / n, 0.0),
        Complex64::new(1.0 / n, 2.0 * c / n),
        Complex64::new(1.0 / n, -2.0 * c / n),
        Complex64::new((5.0 - 2.0 * s) / n, 0.0),
    ]
}

/// Compares `vectorize(√ρ(θ))` with the closed form over `grid`.
pub fn qubit_purification(
    grid: &ThetaGrid,
    vectorize: fn(&ComplexMatrix) -> Vec<Complex64>,
) -> CriterionResult {
    guarded(
        "5a example2: purified vector matches closed form",
        1e-10,
        |t| {
            for theta in grid.points() {
                let State::Mixed(rho) = StateFamily::QubitMixed.at(theta)? else {
                    return Err(Error::scenario("state", "expected a mixed state"));
                };
                let v = vectorize(&matrix::psd_sqrt(rho.matrix())?);
                let expected = qubit_purification_closed_form(theta);
                if v.len() != expected.len() {
                    t.fail();
                    continue;
                }
                for (got, want) in v.iter().zip(expected) {
                    t.record((got - want).norm());
                }
            }
            Ok(())
        },
    )
}

pub fn qubit_ordering() -> CriterionResult {
    use BoundId::{Chain, Lb2};
    guarded(
        "5b example2: product >= I2 >= I3 >= I4 >= LB2",
        1e-10,
        |t| {
            for p in curve("example2")? {
                let seq = [
                    p.variance_product,
                    value(&p, Chain(2))?,
                    value(&p, Chain(3))?,
                    value(&p, Chain(4))?,
                    value(&p, Lb2)?,
                ];
                for w in seq.windows(2) {
                    t.ge(w[0], w[1]);
                }
            }
            Ok(())
        },
    )
}

/// Three-operator Gram identity on random instances of dimension 2–4.
pub fn gram_identity(seed: u64) -> Vec<CriterionResult> {
    let mut identity = Tracker::new("6a det G = product - LB3 (200 random instances)", 1e-9);
    let mut nonneg = Tracker::new("6b det G >= 0 (200 random instances)", 1e-9);
    let mut pure = Tracker::new("6c det G = 0 for pure states with dim <= 3", 1e-9);
    let mut run = || -> Result<()> {
        for i in 0..200u64 {
            let dim = 2 + (i % 3) as usize;
            let mixed = (i / 3) % 2 == 1;
            let mut rng = instance_seed(seed, 6, i).rng();
            let state = oracle::random_state(&mut rng, dim, mixed);
            let ops: Vec<UnitaryOperator> = (0..3)
                .map(|_| oracle::random_unitary(&mut rng, dim))
                .collect();
            let refs: Vec<&UnitaryOperator> = ops.iter().collect();
            let det = bounds::gram(&refs, &state)?.determinant;
            let product = bounds::variance_product(&refs, &state)?;
            identity.eq(
                det,
                product - bounds::lb3(refs[0], refs[1], refs[2], &state)?,
            );
            nonneg.ge(det, 0.0);
            if !mixed && dim <= 3 {
                pure.eq(det, 0.0);
            }
        }
        Ok(())
    };
    let trackers = match run() {
        Ok(()) => return vec![identity.finish(), nonneg.finish(), pure.finish()],
        Err(e) => (e, [identity, nonneg, pure]),
    };
    let (e, ts) = trackers;
    ts.into_iter()
        .map(|t| errored(&t.criterion, t.tolerance, &e))
        .collect()
}

/// Soundness of the three-operator products and, for the qutrit rotations,
/// dominance over LB3 for `k = 2..6`.
pub fn three_operator_products() -> Vec<CriterionResult> {
    let mut out = vec![];
    let mut example5 = None;
    for name in ["example3", "example4", "example5"] {
        let points = curve(name);
        out.push(guarded(
            &format!("7a {name}: every product bound <= product"),
            1e-9,
            |t| {
                for p in points.as_ref().map_err(Clone::clone)? {
                    for &(id, v) in &p.bounds {
                        if matches!(id, BoundId::Prod3(_) | BoundId::Prod3Hat(_)) {
                            t.ge(p.variance_product, v);
                        }
                    }
                }
                Ok(())
            },
        ));
        if name == "example5" {
            example5 = Some(points);
        }
    }
    let points = example5.expect("example5 evaluated");
    out.push(guarded(
        "7b example5: prod3 >= LB3 for k = 2..6",
        1e-9,
        |t| {
            for p in points.as_ref().map_err(Clone::clone)? {
                let lb = value(p, BoundId::Lb3)?;
                for k in 2..=6 {
                    t.ge(value(p, BoundId::Prod3(k))?, lb);
                }
            }
            Ok(())
        },
    ));
    out
}

/// Saturation of the four-operator product and the Gram determinant zeros.
pub fn four_operator_saturation() -> Vec<CriterionResult> {
    let points = curve("example6");
    let mut out = vec![];
    out.push(guarded(
        "8a example6: product = I_k J_k for k = 2..5",
        1e-9,
        |t| {
            for p in points.as_ref().map_err(Clone::clone)? {
                for k in 2..=5 {
                    t.eq(p.variance_product, value(p, BoundId::Prod4(k))?);
                }
            }
            Ok(())
        },
    ));
    out.push(guarded("8b example6: det G >= 0", 1e-9, |t| {
        for p in points.as_ref().map_err(Clone::clone)? {
            t.ge(value(p, BoundId::DetG)?, 0.0);
        }
        Ok(())
    }));
    out.push(guarded(
        "8c example6: det G = 0 at theta = 0, pi, 2pi",
        1e-9,
        |t| {
            let s = builtin("example6").expect("builtin");
            let ops = s.build_operators()?;
            for theta in [0.0, PI, 2.0 * PI] {
                let p = evaluate(theta, &s.state.at(theta)?, &ops, &[BoundId::DetG], s.seed)?;
                t.eq(value(&p, BoundId::DetG)?, 0.0);
            }
            Ok(())
        },
    ));
    out
}

/// Heuristic versus exhaustive search, and engine versus oracle exhaustive.
pub fn permutation_search(seed: u64) -> Vec<CriterionResult> {
    let mut bracket = Tracker::new(
        "9a heuristic within [I_k, exhaustive] (100 instances, N <= 5)",
        1e-12,
    );
    let mut agree = Tracker::new(
        "9b exhaustive search matches oracle, same permutation pair",
        1e-12,
    );
    let mut run = || -> Result<()> {
        for i in 0..100u64 {
            let n = 2 + (i % 4) as usize;
            let (x, y) = oracle::random_moduli(instance_seed(seed, 9, i), n);
            let p = AmplitudePair::from_moduli(&x, &y)?;
            for k in 1..=n {
                let exhaustive = bounds::max_permuted_i_k(&p, k, SearchStrategy::Exhaustive)?;
                let heuristic = bounds::max_permuted_i_k(
                    &p,
                    k,
                    SearchStrategy::Heuristic {
                        seed: instance_seed(seed, 90, i).0,
                        restarts: DEFAULT_RESTARTS,
                    },
                )?;
                bracket.ge(heuristic.value, bounds::i_k(&p, k)?);
                bracket.ge(exhaustive.value, heuristic.value);

                let (oracle_value, oracle_perm) = oracle::exhaustive_perm_max(&x, &y, k)?;
                agree.eq(exhaustive.value, oracle_value);
                if exhaustive.perm != oracle_perm {
                    agree.fail();
                }
            }
        }
        Ok(())
    };
    match run() {
        Ok(()) => vec![bracket.finish(), agree.finish()],
        Err(e) => vec![
            errored(&bracket.criterion, 1e-12, &e),
            errored(&agree.criterion, 1e-12, &e),
        ],
    }
}

/// Engine `I_k` against the literal triple-loop reference.
pub fn oracle_agreement(seed: u64) -> Vec<CriterionResult> {
    vec![guarded(
        "10 engine I_k matches reference sums (500 vectors, N <= 9)",
        1e-12,
        |t| {
            for i in 0..500u64 {
                let n = 1 + (i % 9) as usize;
                let (x, y) = oracle::random_moduli(instance_seed(seed, 10, i), n);
                let p = AmplitudePair::from_moduli(&x, &y)?;
                for k in 1..=n {
                    t.eq(bounds::i_k(&p, k)?, oracle::i_k_reference(&x, &y, k)?);
                }
            }
            Ok(())
        },
    )]
}

/// Runs every criterion in order.
pub fn check_all(seed: u64) -> Vec<CriterionResult> {
    let mut out = variance_identities(seed);
    out.extend(chain_soundness(seed));
    out.extend(clock_shift_equalities());
    out.extend(permutation_remark());
    out.push(qubit_purification(&ThetaGrid::default(), matrix::vec));
    out.push(qubit_ordering());
    out.extend(gram_identity(seed));
    out.extend(three_operator_products());
    out.extend(four_operator_saturation());
    out.extend(permutation_search(seed));
    out.extend(oracle_agreement(seed));
    out
}

pub fn all_pass(results: &[CriterionResult]) -> bool {
    results.iter().all(|r| r.pass)
}
