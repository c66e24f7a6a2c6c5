//! Simple undirected graphs with the handful of traversals the tests need.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

/// Unordered vertex pair stored with `0 < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    pub fn new(u: usize, v: usize) -> Self {
        if u < v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }

    pub fn key(&self) -> String {
        format!("{}-{}", self.0, self.1)
    }

    pub fn parse_key(s: &str) -> Option<Edge> {
        let (a, b) = s.split_once('-')?;
        Some(Edge::new(a.parse().ok()?, b.parse().ok()?))
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    /// Builds a simple graph; loops and repeated edges are dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut sets = vec![BTreeSet::new(); n];
        for (u, v) in edges {
            if u != v {
                sets[u].insert(v);
                sets[v].insert(u);
            }
        }
        Graph { adj: sets.into_iter().map(|s| s.into_iter().collect()).collect() }
    }

    pub fn complete(n: usize) -> Self {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for (u, nb) in self.adj.iter().enumerate() {
            out.extend(nb.iter().filter(|&&v| v > u).map(|&v| Edge(u, v)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Graph induced on the vertices not in `removed`, with the original labels kept
    /// (removed vertices become isolated and are reported separately by callers).
    pub fn without(&self, removed: &[usize]) -> Graph {
        let gone: BTreeSet<usize> = removed.iter().copied().collect();
        let edges = self
            .edges()
            .into_iter()
            .filter(|e| !gone.contains(&e.0) && !gone.contains(&e.1))
            .map(|e| (e.0, e.1));
        Graph::from_edges(self.n(), edges)
    }

    /// Connected components of the subgraph induced by vertices not in `removed`.
    pub fn components_without(&self, removed: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        for &r in removed {
            seen[r] = true;
        }
        let mut comps = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components_without(&[]).len() <= 1
    }

    /// Two-coloring if the graph is bipartite, otherwise an odd cycle.
    pub fn bipartition(&self) -> std::result::Result<(Vec<usize>, Vec<usize>), Vec<usize>> {
        let n = self.n();
        let mut color = vec![u8::MAX; n];
        let mut parent = vec![usize::MAX; n];
        for s in 0..n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        parent[v] = u;
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return Err(odd_cycle(&parent, u, v));
                    }
                }
            }
        }
        let left = (0..n).filter(|&v| color[v] == 0).collect();
        let right = (0..n).filter(|&v| color[v] == 1).collect();
        Ok((left, right))
    }

    /// Adjacency as bit masks; only valid for graphs with at most 64 vertices.
    pub fn bitsets(&self) -> Vec<u64> {
        assert!(self.n() <= 64);
        self.adj.iter().map(|nb| nb.iter().fold(0u64, |m, &v| m | (1 << v))).collect()
    }

    /// Vertex connectivity and a minimum separating set (empty for complete graphs,
    /// whose connectivity is `n - 1` by convention).
    pub fn vertex_connectivity(&self) -> (usize, Vec<usize>) {
        let n = self.n();
        if n == 0 {
            return (0, Vec::new());
        }
        let comps = self.components_without(&[]);
        if comps.len() > 1 {
            return (0, Vec::new());
        }
        let mut best = (n - 1, Vec::new());
        for s in 0..n {
            // some vertex of a minimum cut's complement is among the first best+1 vertices
            if s > best.0 {
                break;
            }
            for t in s + 1..n {
                if self.has_edge(s, t) {
                    continue;
                }
                let (value, cut) = self.min_vertex_cut(s, t, best.0);
                if value < best.0 {
                    best = (value, cut);
                }
            }
        }
        best
    }

    /// Minimum s-t vertex separator by unit-capacity max-flow on the split graph.
    /// Stops augmenting once the flow reaches `limit`.
    fn min_vertex_cut(&self, s: usize, t: usize, limit: usize) -> (usize, Vec<usize>) {
        let n = self.n();
        // node v_in = 2v, v_out = 2v + 1
        let mut net = FlowNet::new(2 * n);
        for v in 0..n {
            let cap = if v == s || v == t { n } else { 1 };
            net.add_arc(2 * v, 2 * v + 1, cap);
        }
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb {
                net.add_arc(2 * u + 1, 2 * v, n);
            }
        }
        let source = 2 * s + 1;
        let sink = 2 * t;
        let mut flow = 0;
        while flow < limit && net.augment(source, sink) {
            flow += 1;
        }
        if flow >= limit {
            return (limit, Vec::new());
        }
        let reach = net.reachable(source);
        let cut = (0..n).filter(|&v| reach[2 * v] && !reach[2 * v + 1]).collect();
        (flow, cut)
    }
}

fn odd_cycle(parent: &[usize], u: usize, v: usize) -> Vec<usize> {
    let path_to_root = |mut x: usize| {
        let mut p = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            p.push(x);
        }
        p
    };
    let pu = path_to_root(u);
    let pv = path_to_root(v);
    let on_pv: BTreeSet<usize> = pv.iter().copied().collect();
    let lca = *pu.iter().find(|x| on_pv.contains(x)).expect("same tree");
    let mut cycle: Vec<usize> = pu.iter().copied().take_while(|&x| x != lca).collect();
    cycle.push(lca);
    let mut back: Vec<usize> = pv.iter().copied().take_while(|&x| x != lca).collect();
    back.reverse();
    cycle.extend(back);
    cycle
}

struct FlowNet {
    head: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<usize>,
    next: Vec<usize>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet { head: vec![usize::MAX; nodes], to: Vec::new(), cap: Vec::new(), next: Vec::new() }
    }

    fn add_arc(&mut self, u: usize, v: usize, c: usize) {
        for (a, b, cc) in [(u, v, c), (v, u, 0)] {
            self.to.push(b);
            self.cap.push(cc);
            self.next.push(self.head[a]);
            self.head[a] = self.to.len() - 1;
        }
    }

    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut via = vec![usize::MAX; self.head.len()];
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let mut e = self.head[u];
            while e != usize::MAX {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    via[v] = e;
                    if v == t {
                        let mut x = t;
                        while x != s {
                            let arc = via[x];
                            self.cap[arc] -= 1;
                            self.cap[arc ^ 1] += 1;
                            x = self.to[arc ^ 1];
                        }
                        return true;
                    }
                    queue.push_back(v);
                }
                e = self.next[e];
            }
        }
        false
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let mut e = self.head[u];
            while e != usize::MAX {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
                e = self.next[e];
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    #[test]
    fn connectivity_of_small_graphs() {
        assert_eq!(Graph::complete(5).vertex_connectivity().0, 4);
        let (k, cut) = cycle(6).vertex_connectivity();
        assert_eq!(k, 2);
        assert_eq!(cut.len(), 2);
        assert!(cycle(6).components_without(&cut).len() > 1);
        let disconnected = Graph::from_edges(4, [(0, 1), (2, 3)]);
        assert_eq!(disconnected.vertex_connectivity().0, 0);
    }

    #[test]
    fn bipartition_or_odd_cycle() {
        assert!(cycle(6).bipartition().is_ok());
        let odd = cycle(5).bipartition().unwrap_err();
        assert_eq!(odd.len() % 2, 1);
        for w in 0..odd.len() {
            assert!(cycle(5).has_edge(odd[w], odd[(w + 1) % odd.len()]));
        }
    }
}
