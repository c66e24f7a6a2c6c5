//! Circumscribability and inscribability through the edge-angle system.
//!
//! Weights are in units of π. A map is circumscribable iff some weights satisfy
//! 0 < w < 1 on edges, Σ w = 2 around every face and Σ w > 2 along every simple
//! cycle that does not bound a face. Strictness is handled by maximising a
//! common margin `t`; the open system is feasible iff the optimum t* is positive.
//! Inscribability of `m` is circumscribability of its dual.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::budgets::Budgets;
use crate::certificate::{AngleUnit, Answer, Certificate, DualConclusion, Mode, Multiplier, Property, RowLabel, Verdict};
use crate::combinatorial::hamiltonian_cycle;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::lp::{LpOutcome, LpProblem, Sense};
use crate::map::{cycle_edges, CombinatorialMap};
use crate::rational::{int, Rational};

/// Circuits added per round of constraint generation.
const ROWS_PER_ROUND: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub vertices: Vec<usize>,
    pub facial: bool,
}

/// Calls `emit` once per simple cycle: rooted at its smallest vertex, with the
/// second vertex smaller than the last.
fn for_each_cycle(g: &Graph, mut emit: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    fn dfs(g: &Graph, path: &mut Vec<usize>, on_path: &mut [bool], emit: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
        let root = path[0];
        let last = *path.last().unwrap();
        for &w in g.neighbors(last) {
            if w == root && path.len() >= 3 && path[1] < last {
                emit(path)?;
            } else if w > root && !on_path[w] {
                on_path[w] = true;
                path.push(w);
                dfs(g, path, on_path, emit)?;
                path.pop();
                on_path[w] = false;
            }
        }
        Ok(())
    }
    let mut on_path = vec![false; g.n()];
    for root in 0..g.n() {
        on_path[root] = true;
        dfs(g, &mut vec![root], &mut on_path, &mut emit)?;
        on_path[root] = false;
    }
    Ok(())
}

/// Every vertex-simple cycle exactly once, flagged facial iff it bounds a face.
pub fn enumerate_simple_circuits(m: &CombinatorialMap, budget: usize) -> Result<Vec<Circuit>> {
    let facial = m.facial_edge_sets();
    let mut out = Vec::new();
    for_each_cycle(&m.graph(), |path| {
        if out.len() == budget {
            return Err(Error::budget("simple cycle count", budget));
        }
        let mut es = cycle_edges(path);
        es.sort_unstable();
        out.push(Circuit { vertices: path.to_vec(), facial: facial.contains_key(&es) });
        Ok(())
    })?;
    Ok(out)
}

/// The angle system of a map, or of its dual when `polar`; edges are labelled by
/// the primal edges of the map the caller holds.
pub struct AngleSystem {
    system: CombinatorialMap,
    polar: bool,
    labels: Vec<Edge>,
    index: HashMap<Edge, usize>,
    label_index: HashMap<Edge, usize>,
    facial: HashMap<Vec<Edge>, usize>,
}

/// Result of the margin LP over a given set of circuit rows.
#[derive(Clone, Debug)]
pub enum MarginResult {
    Optimal { margin: Rational, weights: Vec<Rational>, multipliers: Vec<Multiplier> },
    /// The rows have no solution; t* = −∞.
    Infeasible { multipliers: Vec<Multiplier> },
}

/// Sparse coefficients, sense and right-hand side of one LP row.
type Row = (Vec<(usize, Rational)>, Sense, Rational);

impl AngleSystem {
    pub fn new(m: &CombinatorialMap, polar: bool) -> Self {
        let system = if polar { m.dual() } else { m.clone() };
        let labels: Vec<Edge> = if polar {
            let corr = m.dual_edge_correspondence();
            system.edges().iter().map(|e| corr[e]).collect()
        } else {
            system.edges().to_vec()
        };
        let index = system.edge_index();
        let label_index = labels.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let facial = system.facial_edge_sets();
        AngleSystem { system, polar, labels, index, label_index, facial }
    }

    pub fn system_map(&self) -> &CombinatorialMap {
        &self.system
    }

    pub fn n_edges(&self) -> usize {
        self.labels.len()
    }

    fn cycle_indices(&self, cycle: &[usize]) -> Option<Vec<usize>> {
        cycle_edges(cycle).iter().map(|e| self.index.get(e).copied()).collect()
    }

    fn is_facial(&self, cycle: &[usize]) -> bool {
        let mut es = cycle_edges(cycle);
        es.sort_unstable();
        self.facial.contains_key(&es)
    }

    fn row(&self, label: &RowLabel) -> Result<Row> {
        let t = self.n_edges();
        let edge = |e: &Edge| {
            self.label_index.get(e).copied().ok_or_else(|| Error::InvalidCertificate(format!("unknown edge {e}")))
        };
        Ok(match label {
            RowLabel::Lower(e) => (vec![(edge(e)?, int(1)), (t, int(-1))], Sense::Ge, int(0)),
            RowLabel::Upper(e) => (vec![(edge(e)?, int(1)), (t, int(1))], Sense::Le, int(1)),
            RowLabel::Face(f) => {
                let face = self.system.faces().get(*f).ok_or_else(|| Error::InvalidCertificate(format!("no face {f}")))?;
                let idx = self.cycle_indices(face).expect("face edges exist");
                (idx.into_iter().map(|i| (i, int(1))).collect(), Sense::Eq, int(2))
            }
            RowLabel::Circuit(c) => {
                let idx = self
                    .cycle_indices(c)
                    .filter(|_| c.len() >= 3)
                    .ok_or_else(|| Error::InvalidCertificate(format!("{c:?} is not a cycle")))?;
                let mut seen = vec![false; self.system.n_vertices()];
                if c.iter().any(|&v| std::mem::replace(&mut seen[v], true)) {
                    return Err(Error::InvalidCertificate(format!("{c:?} is not simple")));
                }
                if self.is_facial(c) {
                    return Err(Error::InvalidCertificate(format!("{c:?} bounds a face")));
                }
                let mut coeffs: Vec<(usize, Rational)> = idx.into_iter().map(|i| (i, int(1))).collect();
                coeffs.push((t, int(-1)));
                (coeffs, Sense::Ge, int(2))
            }
        })
    }

    fn base_labels(&self) -> Vec<RowLabel> {
        let mut rows: Vec<RowLabel> = self.labels.iter().map(|&e| RowLabel::Lower(e)).collect();
        rows.extend(self.labels.iter().map(|&e| RowLabel::Upper(e)));
        rows.extend((0..self.system.faces().len()).map(RowLabel::Face));
        rows
    }

    /// LP with one free weight per edge and the free margin as last variable.
    pub fn build_lp(&self, labels: &[RowLabel]) -> Result<LpProblem> {
        let t = self.n_edges();
        let mut lp = LpProblem::new(t + 1);
        for j in 0..=t {
            lp.set_free(j);
        }
        lp.set_objective(t, int(1));
        for label in labels {
            let (coeffs, sense, rhs) = self.row(label)?;
            lp.add_row(coeffs, sense, rhs);
        }
        Ok(lp)
    }

    /// Maximises the margin over box, face and the given circuit rows.
    pub fn solve_max_margin(&self, circuits: &[Vec<usize>]) -> MarginResult {
        let mut labels = self.base_labels();
        labels.extend(circuits.iter().cloned().map(RowLabel::Circuit));
        let lp = self.build_lp(&labels).expect("rows are built from the system itself");
        let keep = |y: &[Rational]| -> Vec<Multiplier> {
            labels
                .iter()
                .zip(y)
                .filter(|(_, v)| !v.is_zero())
                .map(|(row, value)| Multiplier { row: row.clone(), value: value.clone() })
                .collect()
        };
        match lp.solve() {
            LpOutcome::Optimal(sol) => {
                let margin = sol.x[self.n_edges()].clone();
                let mut weights = sol.x;
                weights.pop();
                MarginResult::Optimal { margin, weights, multipliers: keep(&sol.duals) }
            }
            LpOutcome::Infeasible { farkas } => MarginResult::Infeasible { multipliers: keep(&farkas) },
            LpOutcome::Unbounded => unreachable!("the margin is at most 1/2 on every box row"),
        }
    }

    fn weight_map(&self, weights: &[Rational]) -> BTreeMap<Edge, Rational> {
        self.labels.iter().copied().zip(weights.iter().cloned()).collect()
    }

    fn cycle_weight(&self, cycle_idx: &[usize], weights: &[Rational]) -> Rational {
        cycle_idx.iter().map(|&i| &weights[i]).sum()
    }

    /// Non-facial simple cycles of weight below `threshold`, up to `limit` of them,
    /// found by depth-first search pruned with exact shortest-path distances.
    /// Requires positive weights.
    pub fn light_circuits(
        &self,
        weights: &[Rational],
        threshold: &Rational,
        limit: usize,
        node_budget: u64,
    ) -> Result<Vec<Vec<usize>>> {
        debug_assert!(weights.iter().all(Signed::is_positive));
        let g = self.system.graph();
        let n = g.n();
        let w = |u: usize, v: usize| &weights[self.index[&Edge::new(u, v)]];
        let mut found: Vec<(Rational, Vec<usize>)> = Vec::new();
        let mut nodes = 0u64;
        for root in 0..n {
            // Dijkstra from the root inside vertices >= root
            let mut dist: Vec<Option<Rational>> = vec![None; n];
            let mut done = vec![false; n];
            dist[root] = Some(Rational::zero());
            loop {
                let next = (root..n).filter(|&v| !done[v] && dist[v].is_some()).min_by(|&a, &b| dist[a].cmp(&dist[b]));
                let Some(u) = next else { break };
                done[u] = true;
                let du = dist[u].clone().unwrap();
                for &v in g.neighbors(u).iter().filter(|&&v| v >= root) {
                    let cand = &du + w(u, v);
                    if dist[v].as_ref().is_none_or(|d| cand < *d) {
                        dist[v] = Some(cand);
                    }
                }
            }
            struct Dfs<'a> {
                g: &'a Graph,
                dist: &'a [Option<Rational>],
                threshold: &'a Rational,
                nodes: &'a mut u64,
                node_budget: u64,
            }
            fn go(
                s: &mut Dfs,
                w: &dyn Fn(usize, usize) -> Rational,
                path: &mut Vec<usize>,
                on_path: &mut [bool],
                len: &Rational,
                out: &mut Vec<(Rational, Vec<usize>)>,
            ) -> Result<()> {
                *s.nodes += 1;
                if *s.nodes > s.node_budget {
                    return Err(Error::budget("light-circuit search nodes", s.node_budget as usize));
                }
                let root = path[0];
                let last = *path.last().unwrap();
                for &v in s.g.neighbors(last) {
                    let total = len + w(last, v);
                    if v == root {
                        if path.len() >= 3 && path[1] < last && total < *s.threshold {
                            out.push((total, path.clone()));
                        }
                        continue;
                    }
                    if v < root || on_path[v] {
                        continue;
                    }
                    match &s.dist[v] {
                        Some(d) if &total + d < *s.threshold => {}
                        _ => continue,
                    }
                    on_path[v] = true;
                    path.push(v);
                    go(s, w, path, on_path, &total, out)?;
                    path.pop();
                    on_path[v] = false;
                }
                Ok(())
            }
            let mut state = Dfs { g: &g, dist: &dist, threshold, nodes: &mut nodes, node_budget };
            let mut on_path = vec![false; n];
            on_path[root] = true;
            let mut raw = Vec::new();
            go(&mut state, &|u, v| w(u, v).clone(), &mut vec![root], &mut on_path, &Rational::zero(), &mut raw)?;
            found.extend(raw.into_iter().filter(|(_, c)| !self.is_facial(c)));
        }
        found.sort();
        Ok(found.into_iter().take(limit).map(|(_, c)| c).collect())
    }

    fn assignment(&self, weights: &[Rational], margin: Rational) -> Certificate {
        Certificate::AngleAssignment { unit: AngleUnit::Pi, polar: self.polar, weights: self.weight_map(weights), margin }
    }

    fn decide(&self, property: Property, budgets: &Budgets) -> Verdict {
        let mut verdict = Verdict::new(property, Answer::Unknown);
        let enumerated = enumerate_simple_circuits(&self.system, budgets.cycles);
        let full: Option<Vec<(Vec<usize>, Vec<usize>)>> = enumerated.as_ref().ok().map(|cs| {
            cs.iter()
                .filter(|c| !c.facial)
                .map(|c| (c.vertices.clone(), self.cycle_indices(&c.vertices).unwrap()))
                .collect()
        });
        verdict.mode = Some(if full.is_some() { Mode::FullCircuits } else { Mode::Lazy });
        if let Err(e) = &enumerated {
            verdict.notes.push(format!("{e}; using constraint generation with the light-circuit oracle"));
        }
        let mut active: Vec<Vec<usize>> = Vec::new();
        loop {
            match self.solve_max_margin(&active) {
                MarginResult::Infeasible { multipliers } => {
                    verdict.answer = Answer::No;
                    verdict.certificates.push(Certificate::LpDualWitness {
                        polar: self.polar,
                        conclusion: DualConclusion::Infeasible,
                        multipliers,
                    });
                    return verdict;
                }
                MarginResult::Optimal { margin, weights, multipliers } => {
                    if !margin.is_positive() {
                        // adding rows cannot raise the optimum, so this already settles NO
                        verdict.answer = Answer::No;
                        verdict.margin = Some(margin.clone());
                        verdict.certificates.push(Certificate::LpDualWitness {
                            polar: self.polar,
                            conclusion: DualConclusion::Bound { bound: margin },
                            multipliers,
                        });
                        return verdict;
                    }
                    let threshold = &margin + int(2);
                    let violated = match &full {
                        Some(list) => {
                            let mut v: Vec<(Rational, &Vec<usize>)> = list
                                .iter()
                                .map(|(c, idx)| (self.cycle_weight(idx, &weights), c))
                                .filter(|(s, _)| *s < threshold)
                                .collect();
                            v.sort();
                            v.into_iter().take(ROWS_PER_ROUND).map(|(_, c)| c.clone()).collect()
                        }
                        None => match self.light_circuits(&weights, &threshold, ROWS_PER_ROUND, budgets.separation_nodes) {
                            Ok(v) => v,
                            Err(e) => {
                                verdict.notes.push(e.to_string());
                                return verdict;
                            }
                        },
                    };
                    if violated.is_empty() {
                        verdict.answer = Answer::Yes;
                        verdict.margin = Some(margin.clone());
                        verdict.certificates.push(self.assignment(&weights, margin));
                        return verdict;
                    }
                    active.extend(violated);
                }
            }
        }
    }
}

pub fn decide_circumscribable(m: &CombinatorialMap, budgets: &Budgets) -> Verdict {
    AngleSystem::new(m, false).decide(Property::Circumscribable, budgets)
}

/// Circumscribability of the dual; certificates keep primal edge labels.
pub fn decide_inscribable(m: &CombinatorialMap, budgets: &Budgets) -> Verdict {
    AngleSystem::new(m, true).decide(Property::Inscribable, budgets)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quadric {
    Hyperboloid,
    Cylinder,
}

/// Inscribable in the hyperboloid or cylinder iff sphere-inscribable with a Hamiltonian graph.
pub fn decide_quadric_inscribable(m: &CombinatorialMap, quadric: Quadric, budgets: &Budgets) -> Verdict {
    let property = match quadric {
        Quadric::Hyperboloid => Property::HyperboloidInscribable,
        Quadric::Cylinder => Property::CylinderInscribable,
    };
    quadric_from(property, decide_inscribable(m, budgets), m, budgets)
}

pub(crate) fn quadric_from(property: Property, sphere: Verdict, m: &CombinatorialMap, budgets: &Budgets) -> Verdict {
    let mut verdict = Verdict::new(property, Answer::Unknown);
    verdict.mode = sphere.mode;
    if sphere.answer == Answer::No {
        verdict.answer = Answer::No;
        verdict.certificates = sphere.certificates;
        verdict.notes.push("not inscribable in the sphere".into());
        return verdict;
    }
    let ham = hamiltonian_cycle(&m.graph(), budgets);
    match ham {
        Ok(None) => {
            verdict.answer = Answer::No;
            verdict.notes.push("graph has no Hamiltonian cycle (exhaustive search)".into());
        }
        Err(e) => verdict.notes.push(e.to_string()),
        Ok(Some(cycle)) => {
            verdict.certificates.push(Certificate::HamiltonianCycle { cycle });
            if sphere.answer == Answer::Yes {
                verdict.answer = Answer::Yes;
                verdict.margin = sphere.margin;
                verdict.certificates.extend(sphere.certificates);
            } else {
                verdict.notes.extend(sphere.notes);
            }
        }
    }
    verdict
}

/// Re-expresses a polar certificate on `m` as the plain certificate on `m.dual()`.
pub fn relabel_to_dual(cert: &Certificate, m: &CombinatorialMap) -> Certificate {
    let to_dual: HashMap<Edge, Edge> = m.dual_edge_correspondence().into_iter().map(|(d, p)| (p, d)).collect();
    let edge = |e: &Edge| to_dual[e];
    match cert {
        Certificate::AngleAssignment { unit, polar: true, weights, margin } => Certificate::AngleAssignment {
            unit: *unit,
            polar: false,
            weights: weights.iter().map(|(e, w)| (edge(e), w.clone())).collect(),
            margin: margin.clone(),
        },
        Certificate::LpDualWitness { polar: true, conclusion, multipliers } => Certificate::LpDualWitness {
            polar: false,
            conclusion: conclusion.clone(),
            multipliers: multipliers
                .iter()
                .map(|mu| Multiplier {
                    row: match &mu.row {
                        RowLabel::Lower(e) => RowLabel::Lower(edge(e)),
                        RowLabel::Upper(e) => RowLabel::Upper(edge(e)),
                        other => other.clone(),
                    },
                    value: mu.value.clone(),
                })
                .collect(),
        },
        other => other.clone(),
    }
}

pub(crate) fn verify_angle_assignment(
    m: &CombinatorialMap,
    polar: bool,
    weights: &BTreeMap<Edge, Rational>,
    margin: &Rational,
    budgets: &Budgets,
) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidCertificate(msg));
    let sys = AngleSystem::new(m, polar);
    if weights.len() != sys.n_edges() {
        return bad(format!("{} weights for {} edges", weights.len(), sys.n_edges()));
    }
    if !margin.is_positive() {
        return bad("margin is not positive".into());
    }
    let mut w = Vec::with_capacity(sys.n_edges());
    for e in &sys.labels {
        let Some(x) = weights.get(e) else { return bad(format!("no weight for edge {e}")) };
        if *x < *margin || *x > Rational::one() - margin {
            return bad(format!("weight of {e} is outside [margin, 1 - margin]"));
        }
        w.push(x.clone());
    }
    for (f, face) in sys.system.faces().iter().enumerate() {
        if sys.cycle_weight(&sys.cycle_indices(face).unwrap(), &w) != int(2) {
            return bad(format!("face {f} does not sum to 2"));
        }
    }
    let threshold = margin + int(2);
    match enumerate_simple_circuits(&sys.system, budgets.cycles) {
        Ok(circuits) => {
            for c in circuits.iter().filter(|c| !c.facial) {
                if sys.cycle_weight(&sys.cycle_indices(&c.vertices).unwrap(), &w) < threshold {
                    return bad(format!("circuit {:?} is too light", c.vertices));
                }
            }
        }
        Err(_) => {
            let light = sys.light_circuits(&w, &threshold, 1, budgets.separation_nodes)?;
            if let Some(c) = light.first() {
                return bad(format!("circuit {c:?} is too light"));
            }
        }
    }
    Ok(())
}

pub(crate) fn verify_dual_witness(
    m: &CombinatorialMap,
    polar: bool,
    conclusion: &DualConclusion,
    multipliers: &[Multiplier],
) -> Result<()> {
    let sys = AngleSystem::new(m, polar);
    let labels: Vec<RowLabel> = multipliers.iter().map(|mu| mu.row.clone()).collect();
    let lp = sys.build_lp(&labels)?;
    let y: Vec<Rational> = multipliers.iter().map(|mu| mu.value.clone()).collect();
    let ok = match conclusion {
        DualConclusion::Infeasible => lp.is_farkas_certificate(&y),
        DualConclusion::Bound { bound } => {
            !bound.is_positive() && lp.dual_bound(&y).is_some_and(|b| b <= *bound)
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidCertificate("dual multipliers do not prove a nonpositive margin".into()))
    }
}
