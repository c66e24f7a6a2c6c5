//! Graph-theoretic necessary and sufficient conditions, each with a certificate.

use crate::budgets::Budgets;
use crate::certificate::{Answer, Certificate, Mode, Property, Verdict};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::map::CombinatorialMap;

/// Branch and bound over bitsets, vertices tried in (degree, index) order.
struct IndependentSearch {
    adj: Vec<u64>,
    best: u64,
    best_size: u32,
}

impl IndependentSearch {
    fn clique_cover_bound(&self, mut rest: u64) -> u32 {
        let mut cliques = 0;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            let mut common = self.adj[v] & rest;
            rest &= !(1 << v);
            while common != 0 {
                let u = common.trailing_zeros() as usize;
                rest &= !(1 << u);
                common &= self.adj[u] & !(1 << u);
            }
            cliques += 1;
        }
        cliques
    }

    fn expand(&mut self, chosen: u64, cand: u64) {
        let size = chosen.count_ones();
        if cand == 0 {
            if size > self.best_size {
                self.best = chosen;
                self.best_size = size;
            }
            return;
        }
        if size + self.clique_cover_bound(cand) <= self.best_size {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        let bit = 1u64 << v;
        self.expand(chosen | bit, cand & !bit & !self.adj[v]);
        self.expand(chosen, cand & !bit);
    }
}

/// A maximum independent set, sorted.
pub fn max_independent_set(g: &Graph, limit: usize) -> Result<Vec<usize>> {
    let n = g.n();
    if n > limit.min(64) {
        return Err(Error::budget("vertex count for independent set search", limit.min(64)));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let adj = order.iter().map(|&v| g.neighbors(v).iter().fold(0u64, |acc, &u| acc | 1 << pos[u])).collect();
    let mut search = IndependentSearch { adj, best: 0, best_size: 0 };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    search.expand(0, all);
    let mut set: Vec<usize> = (0..n).filter(|&i| search.best >> i & 1 == 1).map(|i| order[i]).collect();
    set.sort_unstable();
    Ok(set)
}

fn edge_avoiding(g: &Graph, set: &[usize]) -> Option<Edge> {
    g.edges().into_iter().find(|e| !set.contains(&e.0) && !set.contains(&e.1))
}

/// Certificate of non-inscribability when a maximum independent set exceeds half
/// the vertices, or meets half exactly in a non-bipartite graph.
pub fn independent_set_obstruction(g: &Graph, budgets: &Budgets) -> Result<Option<Certificate>> {
    let set = max_independent_set(g, budgets.independent_set)?;
    let n = g.n();
    let qualifies = 2 * set.len() > n || (2 * set.len() == n && g.bipartition().is_err());
    Ok(qualifies.then(|| Certificate::IndependentSetObstruction {
        white_edge: if 2 * set.len() == n { edge_avoiding(g, &set) } else { None },
        set,
        n_vertices: n,
    }))
}

/// The facet version: independent faces in the dual graph mean non-circumscribable.
pub fn steinitz_paint_test(m: &CombinatorialMap, budgets: &Budgets) -> Result<Option<Certificate>> {
    let dual = m.dual();
    let corr = m.dual_edge_correspondence();
    Ok(independent_set_obstruction(&dual.graph(), budgets)?.map(|c| match c {
        Certificate::IndependentSetObstruction { set, n_vertices, white_edge } => Certificate::PaintObstruction {
            black_faces: set,
            n_faces: n_vertices,
            white_edge: white_edge.map(|e| corr[&e]),
        },
        other => other,
    }))
}

fn bit_components(adj: &[u64], alive: u64) -> Vec<u64> {
    let mut rest = alive;
    let mut comps = Vec::new();
    while rest != 0 {
        let mut comp = rest & rest.wrapping_neg();
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = adj[v] & alive & !comp;
            comp |= new;
            frontier |= new;
        }
        rest &= !comp;
        comps.push(comp);
    }
    comps
}

fn bits_to_vec(mut b: u64) -> Vec<usize> {
    let mut out = Vec::new();
    while b != 0 {
        out.push(b.trailing_zeros() as usize);
        b &= b - 1;
    }
    out
}

/// A removed vertex set with the components it leaves.
type Cutset = (Vec<usize>, Vec<Vec<usize>>);

/// First cutset `S` (by size, then lexicographic bitmask) with `violates(|S|, c(G−S))`.
fn scan_cutsets(g: &Graph, limit: usize, violates: impl Fn(usize, usize) -> bool) -> Result<Option<Cutset>> {
    let n = g.n();
    if n > limit.min(63) {
        return Err(Error::budget("vertex count for subset enumeration", limit.min(63)));
    }
    let adj: Vec<u64> = (0..n).map(|v| g.neighbors(v).iter().fold(0, |a, &u| a | 1 << u)).collect();
    let full = (1u64 << n) - 1;
    for k in 1..n.saturating_sub(1) {
        // Gosper's hack over all k-subsets
        let mut s: u64 = (1 << k) - 1;
        while s <= full {
            let comps = bit_components(&adj, full & !s);
            if comps.len() >= 2 && violates(k, comps.len()) {
                return Ok(Some((bits_to_vec(s), comps.into_iter().map(bits_to_vec).collect())));
            }
            let c = s & s.wrapping_neg();
            let r = s + c;
            s = (((r ^ s) >> 2) / c) | r;
        }
    }
    Ok(None)
}

/// `None` when the graph is 1-tough, else a cutset leaving more components than its size.
pub fn is_one_tough(g: &Graph, limit: usize) -> Result<Option<Certificate>> {
    Ok(scan_cutsets(g, limit, |k, c| c > k)?
        .map(|(removed, components)| Certificate::ToughnessViolation { removed, components }))
}

/// `None` when the graph is 1-supertough, else a cutset of size ≥ 2 leaving at
/// least as many components as its size.
pub fn is_one_supertough(g: &Graph, limit: usize) -> Result<Option<Certificate>> {
    Ok(scan_cutsets(g, limit, |k, c| k >= 2 && c >= k)?
        .map(|(removed, components)| Certificate::SupertoughViolation { removed, components }))
}

pub fn vertex_connectivity(g: &Graph) -> Certificate {
    let (connectivity, cutset) = g.vertex_connectivity();
    Certificate::ConnectivityWitness { polar: false, connectivity, cutset }
}

pub fn degree_range_check(g: &Graph, lo: usize, hi: usize) -> bool {
    (0..g.n()).all(|v| (lo..=hi).contains(&g.degree(v)))
}

struct HamiltonSearch<'a> {
    g: &'a Graph,
    adj: Vec<u64>,
    path: Vec<usize>,
    steps: u64,
    max_steps: u64,
}

impl HamiltonSearch<'_> {
    /// Every unvisited vertex still needs two usable neighbours.
    fn feasible(&self, visited: u64, last: usize) -> bool {
        let open = !visited | 1 << last | 1;
        let mut rest = !visited & ((1u64 << self.g.n()) - 1);
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if (self.adj[v] & open).count_ones() < 2 {
                return false;
            }
        }
        true
    }

    fn extend(&mut self, visited: u64) -> Result<bool> {
        self.steps += 1;
        if self.steps > self.max_steps {
            return Err(Error::budget("Hamiltonian search steps", self.max_steps as usize));
        }
        let last = *self.path.last().unwrap();
        if self.path.len() == self.g.n() {
            return Ok(self.adj[last] & 1 == 1);
        }
        if !self.feasible(visited, last) {
            return Ok(false);
        }
        for &next in self.g.neighbors(last) {
            if visited >> next & 1 == 0 {
                self.path.push(next);
                if self.extend(visited | 1 << next)? {
                    return Ok(true);
                }
                self.path.pop();
            }
        }
        Ok(false)
    }
}

/// A Hamiltonian cycle starting at vertex 0, or `None` if exhaustive search excludes one.
pub fn hamiltonian_cycle(g: &Graph, budgets: &Budgets) -> Result<Option<Vec<usize>>> {
    let n = g.n();
    if n > budgets.hamiltonian.min(63) {
        return Err(Error::budget("vertex count for Hamiltonian search", budgets.hamiltonian.min(63)));
    }
    if n < 3 {
        return Ok(None);
    }
    let adj = (0..n).map(|v| g.neighbors(v).iter().fold(0u64, |a, &u| a | 1 << u)).collect();
    let mut search = HamiltonSearch { g, adj, path: vec![0], steps: 0, max_steps: budgets.hamiltonian_steps };
    Ok(if search.extend(1)? { Some(search.path) } else { None })
}

/// Exact inscribability verdict for simple polytopes: inscribable iff the graph
/// is bipartite with a 4-connected dual, or it is 1-supertough. `None` when
/// some vertex degree differs from 3.
pub fn simple_polytope_characterization(m: &CombinatorialMap, budgets: &Budgets) -> Result<Option<Verdict>> {
    let g = m.graph();
    if !degree_range_check(&g, 3, 3) {
        return Ok(None);
    }
    let mut verdict = Verdict::new(Property::Inscribable, Answer::No);
    verdict.mode = Some(Mode::Combinatorial);
    match g.bipartition() {
        Ok((left, right)) => {
            let (k, cutset) = m.dual().graph().vertex_connectivity();
            let witness = Certificate::ConnectivityWitness { polar: true, connectivity: k, cutset };
            if k >= 4 {
                verdict.answer = Answer::Yes;
                verdict.certificates = vec![Certificate::BipartiteClasses { left, right }, witness];
                return Ok(Some(verdict));
            }
            verdict.certificates.push(witness);
        }
        Err(cycle) => verdict.certificates.push(Certificate::OddCycle { cycle }),
    }
    match is_one_supertough(&g, budgets.subsets)? {
        Some(violation) => verdict.certificates.push(violation),
        None => {
            verdict.answer = Answer::Yes;
            verdict.certificates.clear();
            verdict.notes.push("graph is 1-supertough (exhaustive cutset enumeration)".into());
        }
    }
    Ok(Some(verdict))
}
