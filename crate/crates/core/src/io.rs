//! JSON map and point files.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::map::CombinatorialMap;
use crate::points::{PointConfiguration, SphereRef};
use crate::rational::{format_rational, parse_decimal, parse_rational, Rational};

/// How coordinate entries are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NumberMode {
    /// Only `p/q` strings and JSON integers.
    #[default]
    Exact,
    /// Also decimal strings and JSON floats, converted verbatim to rationals.
    FloatImport,
}

#[derive(Serialize, Deserialize)]
struct MapFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    vertices: usize,
    faces: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<[usize; 2]>>,
}

#[derive(Serialize, Deserialize)]
struct SphereFile {
    center: Vec<Value>,
    radius_squared: Value,
}

#[derive(Serialize, Deserialize)]
struct PointFile {
    dimension: usize,
    coordinates: Vec<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sphere: Option<SphereFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    faces: Option<Vec<Vec<usize>>>,
}

pub fn parse_map(text: &str) -> Result<CombinatorialMap> {
    let raw: MapFile = serde_json::from_str(text)?;
    let mut map = CombinatorialMap::new(raw.vertices, raw.faces)?;
    if let Some(declared) = raw.edges {
        let mut edges: Vec<Edge> = Vec::with_capacity(declared.len());
        for [u, v] in declared {
            if u == v {
                return Err(Error::EdgeMismatch(format!("loop at vertex {u}")));
            }
            edges.push(Edge::new(u, v));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::EdgeMismatch(format!("edge {} listed twice", w[0])));
        }
        let derived = map.edges();
        if let Some(e) = edges.iter().find(|e| derived.binary_search(e).is_err()) {
            return Err(Error::EdgeMismatch(format!("edge {e} is not on any face")));
        }
        if let Some(e) = derived.iter().find(|e| edges.binary_search(e).is_err()) {
            return Err(Error::EdgeMismatch(format!("face edge {e} is missing")));
        }
    }
    if let Some(name) = raw.name {
        map = map.with_name(name);
    }
    Ok(map)
}

/// Canonical form: faces as given, edges sorted.
pub fn serialize_map(map: &CombinatorialMap) -> String {
    let file = MapFile {
        name: map.name().map(str::to_owned),
        vertices: map.n_vertices(),
        faces: map.faces().to_vec(),
        edges: Some(map.edges().iter().map(|e| [e.0, e.1]).collect()),
    };
    serde_json::to_string_pretty(&file).expect("map serializes")
}

fn scalar(v: &Value, mode: NumberMode) -> Result<Rational> {
    match (v, mode) {
        (Value::String(s), NumberMode::Exact) => parse_rational(s),
        (Value::String(s), NumberMode::FloatImport) => parse_rational(s).or_else(|_| parse_decimal(s)),
        (Value::Number(n), _) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        (Value::Number(n), NumberMode::FloatImport) => parse_decimal(&n.to_string()),
        _ => Err(Error::InvalidRational(v.to_string())),
    }
}

fn vector(vs: &[Value], mode: NumberMode) -> Result<Vec<Rational>> {
    vs.iter().map(|v| scalar(v, mode)).collect()
}

pub fn parse_points(text: &str, mode: NumberMode) -> Result<PointConfiguration> {
    let raw: PointFile = serde_json::from_str(text)?;
    let points = raw.coordinates.iter().map(|p| vector(p, mode)).collect::<Result<Vec<_>>>()?;
    let mut pc = PointConfiguration::new(raw.dimension, points)?;
    if let Some(s) = raw.sphere {
        pc = pc.with_sphere(SphereRef::new(vector(&s.center, mode)?, scalar(&s.radius_squared, mode)?)?)?;
    }
    if let Some(faces) = raw.faces {
        pc = pc.with_claimed_faces(faces)?;
    }
    Ok(pc)
}

fn strings(v: &[Rational]) -> Vec<Value> {
    v.iter().map(|x| Value::String(format_rational(x))).collect()
}

pub fn serialize_points(pc: &PointConfiguration) -> String {
    let file = PointFile {
        dimension: pc.dimension(),
        coordinates: pc.points().iter().map(|p| strings(p)).collect(),
        sphere: pc.sphere().map(|s| SphereFile {
            center: strings(&s.center),
            radius_squared: Value::String(format_rational(&s.radius_sq)),
        }),
        faces: pc.claimed_faces().map(<[_]>::to_vec),
    };
    serde_json::to_string_pretty(&file).expect("points serialize")
}
