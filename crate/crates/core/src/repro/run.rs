//! Curve evaluation over a θ grid and CSV / JSON writers.

use std::io::Write;

use rayon::prelude::*;
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::bounds::{self, BoundMode, SearchStrategy};
use crate::error::{Error, Result};
use crate::quantum::{State, UnitaryOperator};

use super::scenario::{BoundId, Scenario};

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub theta: f64,
    pub variance_product: f64,
    /// Bound values in the order they were requested.
    pub bounds: Vec<(BoundId, f64)>,
}

impl CurvePoint {
    pub fn get(&self, id: BoundId) -> Option<f64> {
        self.bounds.iter().find(|(b, _)| *b == id).map(|&(_, v)| v)
    }
}

impl Serialize for CurvePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2 + self.bounds.len()))?;
        map.serialize_entry("theta", &self.theta)?;
        map.serialize_entry("variance_product", &self.variance_product)?;
        for (id, v) in &self.bounds {
            map.serialize_entry(&id.to_string(), v)?;
        }
        map.end()
    }
}

/// Evaluates the requested bounds for one state.
pub fn evaluate(
    theta: f64,
    state: &State,
    ops: &[UnitaryOperator],
    bounds: &[BoundId],
    seed: u64,
) -> Result<CurvePoint> {
    let refs: Vec<&UnitaryOperator> = ops.iter().collect();
    let variance_product = bounds::variance_product(&refs, state)?;
    let strengthened = BoundMode::Strengthened(SearchStrategy::Auto { seed });

    let pair = match refs.as_slice() {
        [a, b] => Some(bounds::amplitude_pair(a, b, state)?),
        _ => None,
    };
    let need_pair = || {
        pair.as_ref()
            .ok_or_else(|| Error::scenario("bounds", "pair bound needs two operators"))
    };
    let chain = pair.as_ref().map(bounds::chain);
    let triple = || -> Result<[&UnitaryOperator; 3]> {
        refs.as_slice()
            .try_into()
            .map_err(|_| Error::scenario("bounds", "three-operator bound needs three operators"))
    };

    let mut values = Vec::with_capacity(bounds.len());
    for &id in bounds {
        let v = match id {
            BoundId::Chain(k) => {
                chain
                    .as_ref()
                    .and_then(|c| c.get(k))
                    .ok_or(Error::IndexOutOfRange {
                        index: k,
                        max: state.effective_dim(),
                    })?
            }
            BoundId::ChainMax(k) => {
                bounds::max_permuted_i_k(need_pair()?, k, SearchStrategy::Auto { seed })?.value
            }
            BoundId::Lb2 => need_pair()?.inner_product().norm_sqr(),
            BoundId::Lb3 => {
                let [a, b, c] = triple()?;
                bounds::lb3(a, b, c, state)?
            }
            BoundId::DetG => bounds::gram(&refs, state)?.determinant,
            BoundId::Prod3(k) => bounds::product3_bound(triple()?, state, k, BoundMode::Plain)?,
            BoundId::Prod3Hat(k) => bounds::product3_bound(triple()?, state, k, strengthened)?,
            BoundId::Prod4(k) => {
                let [a, b, c, d]: [&UnitaryOperator; 4] = refs
                    .as_slice()
                    .try_into()
                    .map_err(|_| Error::scenario("bounds", "prod4 needs four operators"))?;
                bounds::product4_bound([[a, b], [c, d]], state, k)?
            }
        };
        values.push((id, v));
    }
    Ok(CurvePoint {
        theta,
        variance_product,
        bounds: values,
    })
}

/// One [`CurvePoint`] per grid point, in grid order.
pub fn run_scenario(s: &Scenario) -> Result<Vec<CurvePoint>> {
    s.validate()?;
    let ops = s.build_operators()?;
    s.grid
        .points()
        .into_par_iter()
        .map(|theta| {
            let state = s.state.at(theta)?;
            evaluate(theta, &state, &ops, &s.bounds, s.seed)
        })
        .collect()
}

/// 15 significant digits.
pub fn format_value(v: f64) -> String {
    format!("{v:.14e}")
}

pub fn write_csv<W: Write>(points: &[CurvePoint], bounds: &[BoundId], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::scenario("output", e.to_string());
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["theta".to_string(), "variance_product".to_string()];
    header.extend(bounds.iter().map(ToString::to_string));
    w.write_record(&header).map_err(io)?;
    for p in points {
        let mut row = vec![format_value(p.theta), format_value(p.variance_product)];
        for &id in bounds {
            let v = p.get(id).ok_or_else(|| {
                Error::scenario("bounds", format!("`{id}` missing from curve point"))
            })?;
            row.push(format_value(v));
        }
        w.write_record(&row).map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::scenario("output", e.to_string()))
}

pub fn write_json<W: Write>(points: &[CurvePoint], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, points).map_err(|e| Error::scenario("output", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repro::scenario::{builtin, OperatorSpec, ThetaGrid};

    fn small(name: &str, count: usize) -> Scenario {
        let mut s = builtin(name).unwrap();
        s.grid = ThetaGrid {
            start: 0.0,
            stop: 1.0,
            count,
        };
        s
    }

    #[test]
    fn one_point_per_grid_entry() {
        let s = small("example2", 7);
        let pts = run_scenario(&s).unwrap();
        assert_eq!(pts.len(), 7);
        assert_eq!(pts[6].theta, 1.0);
        assert_eq!(pts[0].bounds.len(), s.bounds.len());
    }

    #[test]
    fn identity_operators_give_zero_curves() {
        let mut s = small("example1-d3", 5);
        s.operators = vec![
            OperatorSpec::Identity { dim: 3 },
            OperatorSpec::Identity { dim: 3 },
        ];
        for p in run_scenario(&s).unwrap() {
            assert!(p.variance_product.abs() < 1e-15);
            for (id, v) in p.bounds {
                assert!(v.abs() < 1e-15, "{id} = {v}");
            }
        }
    }

    #[test]
    fn csv_layout() {
        let s = small("example1-d2", 3);
        let pts = run_scenario(&s).unwrap();
        let mut buf = Vec::new();
        write_csv(&pts, &s.bounds, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "theta,variance_product,I2,LB2,detG");
        assert_eq!(lines.len(), 4);
        let theta: f64 = lines[3].split(',').next().unwrap().parse().unwrap();
        assert_eq!(theta, 1.0);
    }

    #[test]
    fn json_layout() {
        let s = small("example1-d2", 2);
        let pts = run_scenario(&s).unwrap();
        let mut buf = Vec::new();
        write_json(&pts, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 2);
        for key in ["theta", "variance_product", "I2", "LB2", "detG"] {
            assert!(arr[0].get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn format_has_fifteen_digits() {
        assert_eq!(format_value(1.0 / 3.0), "3.33333333333333e-1");
    }
}
