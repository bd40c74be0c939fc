//! Instance-file loading for the command-line front end.
//!
//! An instance is a JSON document with a geometry descriptor, named
//! measures, and an optional cost function:
//!
//! ```json
//! {
//!   "geometry": {"kind": "euclidean", "dim": 1,
//!                "points": [[2], [8], [3], [9]], "reservoir": [[0]]},
//!   "measures": {"mu": [[0, 1], [1, 1]], "nu": [[2, 1], [3, 1]]},
//!   "cost": {"direct": [[0, 2, 1.5]], "source": [[0, 2]], "sink": [[2, 3]]}
//! }
//! ```
//!
//! Geometry kinds mirror the library constructors: `euclidean` (with
//! `dim`, `points`, `reservoir`), `halfplane` (with `norm`: `"linf"` or
//! `"l2"`, and `points` as `[birth, death]` pairs), and `explicit` (with
//! `matrix` and `reservoir_distances`). Measures are lists of
//! `[point_index, weight]` pairs; negative weights are allowed where a
//! signed measure is expected.
//!
//! Every numeric field may be a JSON number or a string: strings admit
//! exact rationals (`"1/3"`), and numbers are re-parsed from their literal
//! text so that `0.1` means exactly 1/10 in rational mode rather than the
//! nearest double. This is what makes serialize → re-read round-trips
//! bit-exact.
//!
//! A separate import path reads persistence diagrams from CSV files
//! (columns `birth,death[,weight]`, weight defaulting to 1, header row
//! optional) and assembles a half-plane instance with the L∞ ground
//! metric from them.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde_json::Value;

use crate::duality::PairCost;
use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, SignedMeasure};
use crate::metric_pair::{HalfplaneNorm, MetricPair, PointId};
use crate::scalar::Scalar;

/// A parsed instance: the metric pair, the named atom lists, and the
/// optional cost function for the two-potential dual.
pub struct Instance<S: Scalar> {
    pair: Arc<MetricPair<S>>,
    measures: BTreeMap<String, Vec<(PointId, S)>>,
    cost: Option<RawCost<S>>,
}

struct RawCost<S> {
    direct: Vec<(PointId, PointId, S)>,
    source: Vec<(PointId, S)>,
    sink: Vec<(PointId, S)>,
}

impl<S: Scalar> Instance<S> {
    /// Loads a JSON instance file. `seed` drives the sampled validation of
    /// large explicit distance matrices.
    pub fn from_json_file(path: &Path, seed: u64) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let root: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
            reason: format!("{}: {e}", path.display()),
        })?;
        Self::from_json(&root, seed)
    }

    /// Parses an instance from a JSON value.
    pub fn from_json(root: &Value, seed: u64) -> Result<Self> {
        let obj = as_object(root, "instance")?;
        let pair = parse_geometry(require(obj, "geometry")?, seed)?;

        let mut measures = BTreeMap::new();
        if let Some(ms) = obj.get("measures") {
            for (name, atoms) in as_object(ms, "measures")? {
                measures.insert(name.clone(), parse_atom_list(atoms, name)?);
            }
        }

        let cost = match obj.get("cost") {
            None => None,
            Some(c) => Some(parse_cost(c)?),
        };

        Ok(Instance {
            pair: Arc::new(pair),
            measures,
            cost,
        })
    }

    /// Builds a half-plane (L∞) instance from persistence-diagram CSV
    /// files. The measures are named `"0"`, `"1"`, … in file order.
    pub fn from_diagram_csvs(paths: &[std::path::PathBuf]) -> Result<Self> {
        let mut points: Vec<(S, S)> = Vec::new();
        let mut measures = BTreeMap::new();
        for (file_index, path) in paths.iter().enumerate() {
            let mut atoms = Vec::new();
            for row in read_diagram_rows(path)? {
                let (birth, death, weight) = row;
                atoms.push((PointId(points.len()), weight));
                points.push((birth, death));
            }
            measures.insert(file_index.to_string(), atoms);
        }
        let pair = MetricPair::halfplane(HalfplaneNorm::LInf, &points)?;
        Ok(Instance {
            pair: Arc::new(pair),
            measures,
            cost: None,
        })
    }

    /// The instance's metric pair.
    pub fn pair(&self) -> &Arc<MetricPair<S>> {
        &self.pair
    }

    fn atoms(&self, name: &str) -> Result<&[(PointId, S)]> {
        self.measures
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Parse {
                reason: format!("instance has no measure named {name:?}"),
            })
    }

    /// Builds the named (non-negative) measure; returns it with the mass
    /// dropped onto the reservoir by the quotient.
    pub fn measure(&self, name: &str) -> Result<(DiscreteMeasure<S>, S)> {
        DiscreteMeasure::new(&self.pair, self.atoms(name)?)
    }

    /// Builds the named signed measure (negative weights allowed).
    pub fn signed_measure(&self, name: &str) -> Result<(SignedMeasure<S>, S)> {
        SignedMeasure::new(&self.pair, self.atoms(name)?)
    }

    /// The instance's cost function, if one was supplied.
    pub fn pair_cost(&self) -> Result<Option<PairCost<S>>> {
        match &self.cost {
            None => Ok(None),
            Some(raw) => Ok(Some(PairCost::new(&raw.direct, &raw.source, &raw.sink)?)),
        }
    }
}

// ---------------------------------------------------------------------
// JSON helpers
// ---------------------------------------------------------------------

fn as_object<'v>(
    v: &'v Value,
    what: &str,
) -> Result<&'v serde_json::Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Parse {
        reason: format!("{what} must be a JSON object"),
    })
}

fn as_array<'v>(v: &'v Value, what: &str) -> Result<&'v Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse {
        reason: format!("{what} must be a JSON array"),
    })
}

fn require<'v>(obj: &'v serde_json::Map<String, Value>, key: &str) -> Result<&'v Value> {
    obj.get(key).ok_or_else(|| Error::Parse {
        reason: format!("missing required field {key:?}"),
    })
}

/// Parses a scalar from a JSON number (via its literal text, so decimals
/// stay exact in rational mode) or from a string (admitting `"p/q"`).
fn parse_scalar<S: Scalar>(v: &Value, what: &str) -> Result<S> {
    match v {
        Value::Number(n) => S::parse_decimal(&n.to_string()),
        Value::String(s) => S::parse_decimal(s),
        _ => Err(Error::Parse {
            reason: format!("{what} must be a number or numeric string"),
        }),
    }
}

fn parse_index(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| Error::Parse {
            reason: format!("{what} must be a non-negative integer point index"),
        })
}

fn parse_atom_list<S: Scalar>(v: &Value, name: &str) -> Result<Vec<(PointId, S)>> {
    let mut out = Vec::new();
    for entry in as_array(v, &format!("measure {name:?}"))? {
        let pair = as_array(entry, "measure atom")?;
        if pair.len() != 2 {
            return Err(Error::Parse {
                reason: format!("measure {name:?}: each atom must be [point_index, weight]"),
            });
        }
        let idx = parse_index(&pair[0], "atom point index")?;
        let w = parse_scalar(&pair[1], "atom weight")?;
        out.push((PointId(idx), w));
    }
    Ok(out)
}

fn parse_point_list<S: Scalar>(v: &Value, what: &str) -> Result<Vec<Vec<S>>> {
    let mut out = Vec::new();
    for point in as_array(v, what)? {
        let coords = as_array(point, "point")?;
        let mut row = Vec::with_capacity(coords.len());
        for c in coords {
            row.push(parse_scalar(c, "coordinate")?);
        }
        out.push(row);
    }
    Ok(out)
}

fn parse_geometry<S: Scalar>(v: &Value, seed: u64) -> Result<MetricPair<S>> {
    let obj = as_object(v, "geometry")?;
    let kind = require(obj, "kind")?
        .as_str()
        .ok_or_else(|| Error::Parse {
            reason: "geometry kind must be a string".into(),
        })?;
    match kind {
        "euclidean" => {
            let dim = parse_index(require(obj, "dim")?, "dim")?;
            let points = parse_point_list(require(obj, "points")?, "points")?;
            let reservoir = parse_point_list(require(obj, "reservoir")?, "reservoir")?;
            MetricPair::euclidean(dim, &points, &reservoir)
        }
        "halfplane" => {
            let norm = match obj.get("norm").and_then(Value::as_str) {
                None | Some("linf") => HalfplaneNorm::LInf,
                Some("l2") => HalfplaneNorm::L2,
                Some(other) => {
                    return Err(Error::Parse {
                        reason: format!("unknown halfplane norm {other:?} (expected linf or l2)"),
                    })
                }
            };
            let raw = parse_point_list(require(obj, "points")?, "points")?;
            let mut points = Vec::with_capacity(raw.len());
            for (i, bd) in raw.into_iter().enumerate() {
                let [birth, death]: [S; 2] = bd.try_into().map_err(|_| Error::Parse {
                    reason: format!("halfplane point {i} must be a [birth, death] pair"),
                })?;
                points.push((birth, death));
            }
            MetricPair::halfplane(norm, &points)
        }
        "explicit" => {
            let matrix = parse_point_list(require(obj, "matrix")?, "matrix")?;
            let reservoir = as_array(require(obj, "reservoir_distances")?, "reservoir_distances")?
                .iter()
                .map(|v| parse_scalar(v, "reservoir distance"))
                .collect::<Result<Vec<S>>>()?;
            MetricPair::explicit_with_seed(matrix, reservoir, seed)
        }
        other => Err(Error::Parse {
            reason: format!("unknown geometry kind {other:?} (expected euclidean, halfplane, or explicit)"),
        }),
    }
}

fn parse_cost<S: Scalar>(v: &Value) -> Result<RawCost<S>> {
    let obj = as_object(v, "cost")?;
    let mut cost = RawCost {
        direct: Vec::new(),
        source: Vec::new(),
        sink: Vec::new(),
    };
    if let Some(entries) = obj.get("direct") {
        for e in as_array(entries, "cost.direct")? {
            let triple = as_array(e, "cost.direct entry")?;
            if triple.len() != 3 {
                return Err(Error::Parse {
                    reason: "cost.direct entries must be [from, to, cost]".into(),
                });
            }
            cost.direct.push((
                PointId(parse_index(&triple[0], "cost source index")?),
                PointId(parse_index(&triple[1], "cost sink index")?),
                parse_scalar(&triple[2], "cost value")?,
            ));
        }
    }
    for (field, out) in [("source", &mut cost.source), ("sink", &mut cost.sink)] {
        if let Some(entries) = obj.get(field) {
            for e in as_array(entries, &format!("cost.{field}"))? {
                let pair = as_array(e, "cost entry")?;
                if pair.len() != 2 {
                    return Err(Error::Parse {
                        reason: format!("cost.{field} entries must be [index, cost]"),
                    });
                }
                out.push((
                    PointId(parse_index(&pair[0], "cost point index")?),
                    parse_scalar(&pair[1], "cost value")?,
                ));
            }
        }
    }
    Ok(cost)
}

// ---------------------------------------------------------------------
// CSV diagram import
// ---------------------------------------------------------------------

/// Reads one persistence-diagram CSV: rows `birth,death[,weight]`, with an
/// optional `birth,death,weight` header.
fn read_diagram_rows<S: Scalar>(path: &Path) -> Result<Vec<(S, S, S)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Parse {
            reason: format!("{}: {e}", path.display()),
        })?;

    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            reason: format!("{}: {e}", path.display()),
        })?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        // A header row is recognized by its first field not parsing as a
        // number.
        if line == 0 && S::parse_decimal(record.get(0).unwrap_or_default()).is_err() {
            continue;
        }
        if record.len() < 2 || record.len() > 3 {
            return Err(Error::Parse {
                reason: format!(
                    "{}: row {} must have 2 or 3 fields (birth,death[,weight])",
                    path.display(),
                    line + 1
                ),
            });
        }
        let field = |i: usize| -> Result<S> {
            S::parse_decimal(record.get(i).unwrap_or_default()).map_err(|e| Error::Parse {
                reason: format!("{}: row {}: {e}", path.display(), line + 1),
            })
        };
        let birth = field(0)?;
        let death = field(1)?;
        let weight = if record.len() == 3 {
            field(2)?
        } else {
            S::one()
        };
        rows.push((birth, death, weight));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use std::io::Write;

    fn json_instance() -> Value {
        serde_json::from_str(
            r#"{
                "geometry": {"kind": "euclidean", "dim": 1,
                             "points": [[2], [8], [3], [9]],
                             "reservoir": [[0]]},
                "measures": {"mu": [[0, 1], [1, 1]],
                             "nu": [[2, 1], [3, 1]]}
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn parses_the_euclidean_instance() {
        let instance: Instance<f64> = Instance::from_json(&json_instance(), 0).unwrap();
        let (mu, dropped) = instance.measure("mu").unwrap();
        assert_eq!(dropped, 0.0);
        assert_eq!(mu.total_mass(), 2.0);
        assert_eq!(instance.pair().point_count(), 4);
    }

    #[test]
    fn rational_mode_reads_decimals_exactly() {
        let root: Value = serde_json::from_str(
            r#"{
                "geometry": {"kind": "euclidean", "dim": 1,
                             "points": [[0.1], ["1/3"]], "reservoir": [[0]]},
                "measures": {"m": [[0, 0.3], [1, "2/7"]]}
            }"#,
        )
        .unwrap();
        let instance: Instance<Rational> = Instance::from_json(&root, 0).unwrap();
        let (m, _) = instance.measure("m").unwrap();
        let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
        assert_eq!(m.weight(PointId(0)), r(3, 10));
        assert_eq!(m.weight(PointId(1)), r(2, 7));
        assert_eq!(instance.pair().dist_to_reservoir(PointId(1)).unwrap(), r(1, 3));
    }

    #[test]
    fn missing_measure_is_a_parse_error() {
        let instance: Instance<f64> = Instance::from_json(&json_instance(), 0).unwrap();
        assert!(matches!(
            instance.measure("nope"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn malformed_geometry_is_rejected() {
        let root: Value =
            serde_json::from_str(r#"{"geometry": {"kind": "donut"}, "measures": {}}"#).unwrap();
        assert!(matches!(
            Instance::<f64>::from_json(&root, 0),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn parses_cost_matrices() {
        let root: Value = serde_json::from_str(
            r#"{
                "geometry": {"kind": "euclidean", "dim": 1,
                             "points": [[1], [4]], "reservoir": [[0]]},
                "measures": {"a": [[0, 1]], "b": [[1, 1]]},
                "cost": {"direct": [[0, 1, 7]], "source": [[0, 2]], "sink": [[1, 3]]}
            }"#,
        )
        .unwrap();
        let instance: Instance<f64> = Instance::from_json(&root, 0).unwrap();
        assert!(instance.pair_cost().unwrap().is_some());
    }

    #[test]
    fn reads_diagram_csvs_with_and_without_headers() {
        let dir = tempfile::tempdir().unwrap();
        let path_a = dir.path().join("a.csv");
        let path_b = dir.path().join("b.csv");
        let mut fa = std::fs::File::create(&path_a).unwrap();
        writeln!(fa, "birth,death,weight").unwrap();
        writeln!(fa, "1,5,1").unwrap();
        writeln!(fa, "2,3,2.5").unwrap();
        drop(fa);
        let mut fb = std::fs::File::create(&path_b).unwrap();
        writeln!(fb, "0,4").unwrap();
        drop(fb);

        let instance: Instance<f64> =
            Instance::from_diagram_csvs(&[path_a, path_b]).unwrap();
        let (a, _) = instance.measure("0").unwrap();
        let (b, _) = instance.measure("1").unwrap();
        assert_eq!(a.total_mass(), 3.5);
        assert_eq!(b.total_mass(), 1.0); // weight defaulted to 1
        // Two points from file a plus one from file b.
        assert_eq!(instance.pair().point_count(), 3);
    }

    #[test]
    fn diagram_csv_rejects_birth_after_death() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "5,1\n").unwrap();
        assert!(Instance::<f64>::from_diagram_csvs(&[path]).is_err());
    }
}
