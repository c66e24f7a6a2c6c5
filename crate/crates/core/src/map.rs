//! Combinatorial types of 3-polytopes: a vertex count plus the facial cycles.
//!
//! The face list doubles as the planar embedding. A map is accepted when every
//! edge lies on exactly two faces, the graph is 3-connected and the Euler
//! relation holds; by Whitney's theorem this pins down the embedding.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialMap {
    name: Option<String>,
    n_vertices: usize,
    faces: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    edge_faces: BTreeMap<Edge, (usize, usize)>,
}

impl CombinatorialMap {
    /// Validates and builds a map. Checks run in a fixed order: face shape,
    /// edge/face incidence, 3-connectivity, Euler relation.
    pub fn new(n_vertices: usize, faces: Vec<Vec<usize>>) -> Result<Self> {
        for (i, face) in faces.iter().enumerate() {
            if face.len() < 3 {
                return Err(Error::DegenerateFace { face: i, reason: format!("length {}", face.len()) });
            }
            if let Some(&v) = face.iter().find(|&&v| v >= n_vertices) {
                return Err(Error::DegenerateFace { face: i, reason: format!("vertex {v} out of range") });
            }
            let distinct: BTreeSet<_> = face.iter().collect();
            if distinct.len() != face.len() {
                return Err(Error::DegenerateFace { face: i, reason: "repeated vertex".into() });
            }
        }

        let mut incidence: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
        for (i, face) in faces.iter().enumerate() {
            for e in cycle_edges(face) {
                incidence.entry(e).or_default().push(i);
            }
        }
        if let Some((e, fs)) = incidence.iter().find(|(_, fs)| fs.len() != 2) {
            return Err(Error::EdgeNotInTwoFaces { u: e.0, v: e.1, count: fs.len() });
        }
        let edge_faces: BTreeMap<Edge, (usize, usize)> =
            incidence.into_iter().map(|(e, fs)| (e, (fs[0], fs[1]))).collect();
        let edges: Vec<Edge> = edge_faces.keys().copied().collect();

        let graph = Graph::from_edges(n_vertices, edges.iter().map(|e| (e.0, e.1)));
        let (connectivity, cutset) = graph.vertex_connectivity();
        if n_vertices < 4 || connectivity < 3 {
            return Err(Error::NotThreeConnected { connectivity, cutset });
        }

        let euler = n_vertices as i64 - edges.len() as i64 + faces.len() as i64;
        if euler != 2 {
            return Err(Error::EulerViolation { vertices: n_vertices, edges: edges.len(), faces: faces.len() });
        }

        Ok(CombinatorialMap { name: None, n_vertices, faces, edges, edge_faces })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_index(&self) -> HashMap<Edge, usize> {
        self.edges.iter().enumerate().map(|(i, &e)| (e, i)).collect()
    }

    /// The two faces on either side of an edge.
    pub fn faces_of_edge(&self, e: Edge) -> Option<(usize, usize)> {
        self.edge_faces.get(&e).copied()
    }

    pub fn graph(&self) -> Graph {
        Graph::from_edges(self.n_vertices, self.edges.iter().map(|e| (e.0, e.1)))
    }

    pub fn face_edges(&self, face: usize) -> Vec<Edge> {
        let mut es = cycle_edges(&self.faces[face]);
        es.sort_unstable();
        es
    }

    /// Lookup from sorted boundary edge set to face index; identifies a cycle
    /// with a face regardless of rotation or direction.
    pub fn facial_edge_sets(&self) -> HashMap<Vec<Edge>, usize> {
        (0..self.faces.len()).map(|f| (self.face_edges(f), f)).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_vertices];
        for e in &self.edges {
            deg[e.0] += 1;
            deg[e.1] += 1;
        }
        deg
    }

    /// Faces around `v` in rotation order (consecutive faces share an edge at `v`).
    pub fn vertex_star(&self, v: usize) -> Vec<usize> {
        let around: Vec<usize> = (0..self.faces.len()).filter(|&f| self.faces[f].contains(&v)).collect();
        let Some(&start) = around.first() else {
            return Vec::new();
        };
        let mut star = vec![start];
        let mut face = start;
        let mut via = neighbours_in_face(&self.faces[start], v).1;
        loop {
            let (a, b) = self.edge_faces[&Edge::new(v, via)];
            let next = if a == face { b } else { a };
            if next == start {
                break;
            }
            star.push(next);
            let (p, q) = neighbours_in_face(&self.faces[next], v);
            via = if p == via { q } else { p };
            face = next;
        }
        star
    }

    /// Polar map: one vertex per face, one face per vertex star. Dual vertex `i`
    /// is face `i` of `self`; dual face `j` surrounds vertex `j` of `self`.
    pub fn dual(&self) -> CombinatorialMap {
        let faces = (0..self.n_vertices).map(|v| self.vertex_star(v)).collect();
        let mut dual = CombinatorialMap::new(self.faces.len(), faces).expect("dual of a valid map is valid");
        dual.name = self.name.as_ref().map(|n| format!("dual of {n}"));
        dual
    }

    /// For every edge of the dual map, the edge of `self` it crosses.
    pub fn dual_edge_correspondence(&self) -> BTreeMap<Edge, Edge> {
        self.edge_faces.iter().map(|(&e, &(f, g))| (Edge::new(f, g), e)).collect()
    }

    /// Builds a new map by erecting a pyramid over each listed face.
    pub fn stack_on_faces(&self, targets: &[usize]) -> Result<CombinatorialMap> {
        let targets: BTreeSet<usize> = targets.iter().copied().collect();
        let mut n = self.n_vertices;
        let mut faces = Vec::new();
        for (i, face) in self.faces.iter().enumerate() {
            if targets.contains(&i) {
                let apex = n;
                n += 1;
                for w in 0..face.len() {
                    faces.push(vec![face[w], face[(w + 1) % face.len()], apex]);
                }
            } else {
                faces.push(face.clone());
            }
        }
        CombinatorialMap::new(n, faces)
    }

    /// A vertex bijection `self -> other` carrying faces to faces, if one exists.
    pub fn isomorphism_to(&self, other: &CombinatorialMap) -> Option<Vec<usize>> {
        if self.n_vertices != other.n_vertices
            || self.edges.len() != other.edges.len()
            || self.faces.len() != other.faces.len()
        {
            return None;
        }
        let mut lens_a: Vec<usize> = self.faces.iter().map(Vec::len).collect();
        let mut lens_b: Vec<usize> = other.faces.iter().map(Vec::len).collect();
        lens_a.sort_unstable();
        lens_b.sort_unstable();
        if lens_a != lens_b {
            return None;
        }
        let ga = self.graph();
        let gb = other.graph();
        let target_faces: BTreeSet<Vec<usize>> = other
            .faces
            .iter()
            .map(|f| {
                let mut s = f.clone();
                s.sort_unstable();
                s
            })
            .collect();
        let mut mapping = vec![usize::MAX; self.n_vertices];
        let mut used = vec![false; self.n_vertices];
        let order = bfs_order(&ga);
        let mut found = None;
        extend_iso(&ga, &gb, &order, 0, &mut mapping, &mut used, &mut |m| {
            let ok = self.faces.iter().all(|f| {
                let mut img: Vec<usize> = f.iter().map(|&v| m[v]).collect();
                img.sort_unstable();
                target_faces.contains(&img)
            });
            if ok {
                found = Some(m.to_vec());
            }
            ok
        });
        found
    }
}

fn bfs_order(g: &Graph) -> Vec<usize> {
    let mut order = Vec::with_capacity(g.n());
    let mut seen = vec![false; g.n()];
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    order
}

fn extend_iso(
    ga: &Graph,
    gb: &Graph,
    order: &[usize],
    depth: usize,
    mapping: &mut [usize],
    used: &mut [bool],
    accept: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if depth == order.len() {
        return accept(mapping);
    }
    let v = order[depth];
    for w in 0..gb.n() {
        if used[w] || ga.degree(v) != gb.degree(w) {
            continue;
        }
        let consistent = ga
            .neighbors(v)
            .iter()
            .filter(|&&u| mapping[u] != usize::MAX)
            .all(|&u| gb.has_edge(mapping[u], w))
            && order[..depth]
                .iter()
                .filter(|&&u| !ga.has_edge(u, v))
                .all(|&u| !gb.has_edge(mapping[u], w));
        if !consistent {
            continue;
        }
        mapping[v] = w;
        used[w] = true;
        if extend_iso(ga, gb, order, depth + 1, mapping, used, accept) {
            return true;
        }
        mapping[v] = usize::MAX;
        used[w] = false;
    }
    false
}

pub(crate) fn cycle_edges(cycle: &[usize]) -> Vec<Edge> {
    (0..cycle.len()).map(|i| Edge::new(cycle[i], cycle[(i + 1) % cycle.len()])).collect()
}

fn neighbours_in_face(face: &[usize], v: usize) -> (usize, usize) {
    let i = face.iter().position(|&x| x == v).expect("vertex on face");
    let k = face.len();
    (face[(i + k - 1) % k], face[(i + 1) % k])
}
