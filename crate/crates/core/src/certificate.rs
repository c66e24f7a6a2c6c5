//! Verdicts and the certificates that back them.
//!
//! Every certificate can be re-checked from its own data plus the map it
//! refers to; `verify` never trusts the search that produced it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::budgets::Budgets;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::map::CombinatorialMap;
use crate::rational::{serde_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
            Answer::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Inscribable,
    Circumscribable,
    HyperboloidInscribable,
    CylinderInscribable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleUnit {
    Pi,
}

/// A row of the angle system, named independently of LP internals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowLabel {
    /// weight(e) − t ≥ 0
    Lower(Edge),
    /// weight(e) + t ≤ 1
    Upper(Edge),
    /// Σ_F weight = 2 for face F of the system map
    Face(usize),
    /// Σ_C weight − t ≥ 2 for a non-facial cycle of the system map
    Circuit(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplier {
    pub row: RowLabel,
    #[serde(with = "serde_rational")]
    pub value: Rational,
}

/// What a dual vector proves about the margin LP.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DualConclusion {
    /// t* ≤ bound
    Bound {
        #[serde(with = "serde_rational")]
        bound: Rational,
    },
    /// the rows admit no solution at all
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    /// An independent vertex set larger than half, or exactly half with an edge
    /// avoiding it.
    IndependentSetObstruction { set: Vec<usize>, n_vertices: usize, white_edge: Option<Edge> },
    /// Pairwise non-adjacent faces covering more than half the faces, or exactly
    /// half with an edge between two white faces (given as a primal edge).
    PaintObstruction { black_faces: Vec<usize>, n_faces: usize, white_edge: Option<Edge> },
    ToughnessViolation { removed: Vec<usize>, components: Vec<Vec<usize>> },
    SupertoughViolation { removed: Vec<usize>, components: Vec<Vec<usize>> },
    BipartiteClasses { left: Vec<usize>, right: Vec<usize> },
    OddCycle { cycle: Vec<usize> },
    HamiltonianCycle { cycle: Vec<usize> },
    /// Vertex connectivity with a minimum separating set; `polar` refers to the dual graph.
    ConnectivityWitness { polar: bool, connectivity: usize, cutset: Vec<usize> },
    /// Edge weights in units of π. With `polar` the system lives on the dual map
    /// and weights are keyed by the primal edge each dual edge crosses.
    AngleAssignment {
        unit: AngleUnit,
        polar: bool,
        #[serde(with = "edge_weights")]
        weights: BTreeMap<Edge, Rational>,
        #[serde(with = "serde_rational")]
        margin: Rational,
    },
    /// Dual multipliers for the margin LP. Edge labels are primal edges; with
    /// `polar`, face and circuit labels refer to the dual map.
    LpDualWitness { polar: bool, conclusion: DualConclusion, multipliers: Vec<Multiplier> },
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidCertificate(msg.into())
}

fn check_vertices(g: &Graph, vs: &[usize]) -> Result<()> {
    let mut seen = vec![false; g.n()];
    for &v in vs {
        if v >= g.n() {
            return Err(invalid(format!("vertex {v} out of range")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(invalid(format!("vertex {v} repeated")));
        }
    }
    Ok(())
}

fn check_cycle(g: &Graph, cycle: &[usize]) -> Result<()> {
    check_vertices(g, cycle)?;
    if cycle.len() < 3 {
        return Err(invalid("cycle shorter than 3"));
    }
    for i in 0..cycle.len() {
        let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        if !g.has_edge(u, v) {
            return Err(invalid(format!("{u}-{v} is not an edge")));
        }
    }
    Ok(())
}

fn check_independent(g: &Graph, set: &[usize]) -> Result<()> {
    check_vertices(g, set)?;
    for (i, &u) in set.iter().enumerate() {
        if let Some(&v) = set[i + 1..].iter().find(|&&v| g.has_edge(u, v)) {
            return Err(invalid(format!("{u} and {v} are adjacent")));
        }
    }
    Ok(())
}

/// Half-or-more test shared by the vertex and facet versions of the obstruction.
fn check_majority(size: usize, total: usize, white_edge_ok: impl FnOnce() -> Result<bool>) -> Result<()> {
    if 2 * size > total {
        Ok(())
    } else if 2 * size == total {
        if white_edge_ok()? {
            Ok(())
        } else {
            Err(invalid("exactly half, but no edge between two unmarked elements"))
        }
    } else {
        Err(invalid(format!("{size} of {total} is not at least half")))
    }
}

fn check_components(g: &Graph, removed: &[usize], claimed: &[Vec<usize>]) -> Result<usize> {
    check_vertices(g, removed)?;
    let mut actual = g.components_without(removed);
    let mut claimed = claimed.to_vec();
    for c in actual.iter_mut().chain(claimed.iter_mut()) {
        c.sort_unstable();
    }
    actual.sort();
    claimed.sort();
    if actual != claimed {
        return Err(invalid("component list does not match the graph"));
    }
    Ok(actual.len())
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::IndependentSetObstruction { .. } => "IndependentSetObstruction",
            Certificate::PaintObstruction { .. } => "PaintObstruction",
            Certificate::ToughnessViolation { .. } => "ToughnessViolation",
            Certificate::SupertoughViolation { .. } => "SupertoughViolation",
            Certificate::BipartiteClasses { .. } => "BipartiteClasses",
            Certificate::OddCycle { .. } => "OddCycle",
            Certificate::HamiltonianCycle { .. } => "HamiltonianCycle",
            Certificate::ConnectivityWitness { .. } => "ConnectivityWitness",
            Certificate::AngleAssignment { .. } => "AngleAssignment",
            Certificate::LpDualWitness { .. } => "LpDualWitness",
        }
    }

    /// Re-checks a certificate that only refers to a graph.
    pub fn verify_graph(&self, g: &Graph) -> Result<()> {
        match self {
            Certificate::IndependentSetObstruction { set, n_vertices, white_edge } => {
                if *n_vertices != g.n() {
                    return Err(invalid("vertex count mismatch"));
                }
                check_independent(g, set)?;
                check_majority(set.len(), g.n(), || {
                    Ok(white_edge.is_some_and(|e| g.has_edge(e.0, e.1) && !set.contains(&e.0) && !set.contains(&e.1)))
                })
            }
            Certificate::ToughnessViolation { removed, components } => {
                let c = check_components(g, removed, components)?;
                if c > removed.len() {
                    Ok(())
                } else {
                    Err(invalid(format!("{c} components after removing {} vertices", removed.len())))
                }
            }
            Certificate::SupertoughViolation { removed, components } => {
                let c = check_components(g, removed, components)?;
                if removed.len() >= 2 && c >= removed.len() {
                    Ok(())
                } else {
                    Err(invalid(format!("{c} components after removing {} vertices", removed.len())))
                }
            }
            Certificate::BipartiteClasses { left, right } => {
                let mut all: Vec<usize> = left.iter().chain(right).copied().collect();
                check_vertices(g, &all)?;
                all.sort_unstable();
                if all.len() != g.n() {
                    return Err(invalid("classes do not cover the graph"));
                }
                check_independent(g, left)?;
                check_independent(g, right)
            }
            Certificate::OddCycle { cycle } => {
                check_cycle(g, cycle)?;
                if cycle.len() % 2 == 1 {
                    Ok(())
                } else {
                    Err(invalid("cycle has even length"))
                }
            }
            Certificate::HamiltonianCycle { cycle } => {
                check_cycle(g, cycle)?;
                if cycle.len() == g.n() {
                    Ok(())
                } else {
                    Err(invalid("cycle misses vertices"))
                }
            }
            Certificate::ConnectivityWitness { polar: false, connectivity, cutset } => {
                check_vertices(g, cutset)?;
                let (k, _) = g.vertex_connectivity();
                if k != *connectivity || cutset.len() != k {
                    return Err(invalid(format!("connectivity is {k}")));
                }
                let complete = g.edge_count() * 2 == g.n() * (g.n().saturating_sub(1));
                if complete || g.components_without(cutset).len() >= 2 {
                    Ok(())
                } else {
                    Err(invalid("cutset does not separate"))
                }
            }
            _ => Err(invalid(format!("{} needs the combinatorial map", self.kind()))),
        }
    }

    /// Re-checks the certificate against map `m`.
    pub fn verify(&self, m: &CombinatorialMap, budgets: &Budgets) -> Result<()> {
        match self {
            Certificate::PaintObstruction { black_faces, n_faces, white_edge } => {
                if *n_faces != m.faces().len() {
                    return Err(invalid("face count mismatch"));
                }
                let dual = m.dual();
                check_independent(&dual.graph(), black_faces)?;
                check_majority(black_faces.len(), *n_faces, || {
                    let Some(e) = white_edge else { return Ok(false) };
                    let (f, g) = m.faces_of_edge(*e).ok_or_else(|| invalid(format!("{e} is not an edge")))?;
                    Ok(!black_faces.contains(&f) && !black_faces.contains(&g))
                })
            }
            Certificate::ConnectivityWitness { polar: true, connectivity, cutset } => {
                Certificate::ConnectivityWitness { polar: false, connectivity: *connectivity, cutset: cutset.clone() }
                    .verify_graph(&m.dual().graph())
            }
            Certificate::AngleAssignment { polar, weights, margin, .. } => {
                crate::hrs::verify_angle_assignment(m, *polar, weights, margin, budgets)
            }
            Certificate::LpDualWitness { polar, conclusion, multipliers } => {
                crate::hrs::verify_dual_witness(m, *polar, conclusion, multipliers)
            }
            _ => self.verify_graph(&m.graph()),
        }
    }
}

/// Which evidence path produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Exact LP over every enumerated circuit.
    FullCircuits,
    /// Constraint generation checked by the light-circuit oracle.
    Lazy,
    /// Combinatorial characterisation or obstruction.
    Combinatorial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: Property,
    pub answer: Answer,
    pub certificates: Vec<Certificate>,
    #[serde(with = "serde_rational::option", skip_serializing_if = "Option::is_none", default)]
    pub margin: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode: Option<Mode>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(property: Property, answer: Answer) -> Self {
        Verdict { property, answer, certificates: Vec::new(), margin: None, mode: None, notes: Vec::new() }
    }

    pub fn unknown(property: Property, note: impl Into<String>) -> Self {
        let mut v = Verdict::new(property, Answer::Unknown);
        v.notes.push(note.into());
        v
    }

    /// Re-checks every attached certificate.
    pub fn verify(&self, m: &CombinatorialMap, budgets: &Budgets) -> Result<()> {
        self.certificates.iter().try_for_each(|c| c.verify(m, budgets))
    }
}

/// Edge-keyed rational maps written as `{"u-v": "p/q"}`.
pub mod edge_weights {
    use super::*;
    use serde::{de::Error as _, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(w: &BTreeMap<Edge, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(w.iter().map(|(e, r)| (e.key(), crate::rational::format_rational(r))))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<Edge, Rational>, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                let e = Edge::parse_key(&k).ok_or_else(|| D::Error::custom(format!("bad edge key {k:?}")))?;
                let r = crate::rational::parse_rational(&v).map_err(D::Error::custom)?;
                Ok((e, r))
            })
            .collect()
    }
}
