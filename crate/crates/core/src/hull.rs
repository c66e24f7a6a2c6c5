//! Exhaustive facet enumeration and face lattices for small point sets.
//!
//! Every affinely independent `d`-subset spans a candidate hyperplane; it is a
//! facet hyperplane iff all points lie in one closed halfspace. Lower faces are
//! the intersections of facets.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{affine_rank, nullspace};
use crate::points::PointConfiguration;
use crate::rational::{dot, sub, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HullBudget {
    pub max_points: usize,
    pub max_dimension: usize,
}

impl Default for HullBudget {
    fn default() -> Self {
        HullBudget { max_points: 12, max_dimension: 7 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceLattice {
    pub dimension: usize,
    /// `faces_by_rank[k]` lists the k-faces as sorted vertex-index sets.
    pub faces_by_rank: Vec<Vec<Vec<usize>>>,
    /// `incidences[k]` holds pairs `(i, j)` with k-face `i` inside (k+1)-face `j`.
    pub incidences: Vec<Vec<(usize, usize)>>,
}

impl FaceLattice {
    /// Closes a facet list under intersection and ranks faces by affine dimension.
    /// Facet vertex sets are taken as given.
    pub fn from_facets(pc: &PointConfiguration, facets: &[Vec<usize>]) -> FaceLattice {
        let d = pc.dimension();
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        let facets: Vec<Vec<usize>> = facets
            .iter()
            .map(|f| {
                let mut s = f.clone();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        let mut frontier: Vec<Vec<usize>> = Vec::new();
        for f in &facets {
            if all.insert(f.clone()) {
                frontier.push(f.clone());
            }
        }
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for f in &frontier {
                for g in &facets {
                    let meet: Vec<usize> = f.iter().copied().filter(|v| g.binary_search(v).is_ok()).collect();
                    if !meet.is_empty() && all.insert(meet.clone()) {
                        next.push(meet);
                    }
                }
            }
            frontier = next;
        }
        let mut faces_by_rank = vec![Vec::new(); d];
        for face in all {
            let pts: Vec<&[Rational]> = face.iter().map(|&v| pc.point(v)).collect();
            let r = affine_rank(&pts);
            if r < d {
                faces_by_rank[r].push(face);
            }
        }
        let incidences = (0..d.saturating_sub(1))
            .map(|k| {
                let mut pairs = Vec::new();
                for (i, small) in faces_by_rank[k].iter().enumerate() {
                    for (j, big) in faces_by_rank[k + 1].iter().enumerate() {
                        if small.iter().all(|v| big.binary_search(v).is_ok()) {
                            pairs.push((i, j));
                        }
                    }
                }
                pairs
            })
            .collect();
        FaceLattice { dimension: d, faces_by_rank, incidences }
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        self.faces_by_rank.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn faces(&self, rank: usize) -> &[Vec<usize>] {
        self.faces_by_rank.get(rank).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.faces(0).iter().map(|f| f[0]).collect()
    }

    /// f-vector `(f_0, ..., f_{d-1})`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces_by_rank.iter().map(Vec::len).collect()
    }

    /// Number of facets containing each ridge.
    pub fn ridge_degrees(&self) -> Vec<usize> {
        let d = self.dimension;
        if d < 2 {
            return Vec::new();
        }
        let mut count = vec![0; self.faces(d - 2).len()];
        for &(i, _) in &self.incidences[d - 2] {
            count[i] += 1;
        }
        count
    }

    /// Sorted facet list, for set comparisons.
    pub fn facet_set(&self) -> BTreeSet<Vec<usize>> {
        self.facets().iter().cloned().collect()
    }

    /// Lattice with vertex `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> BTreeMap<usize, BTreeSet<Vec<usize>>> {
        self.faces_by_rank
            .iter()
            .enumerate()
            .map(|(k, faces)| {
                let set = faces
                    .iter()
                    .map(|f| {
                        let mut g: Vec<usize> = f.iter().map(|&v| perm[v]).collect();
                        g.sort_unstable();
                        g
                    })
                    .collect();
                (k, set)
            })
            .collect()
    }
}

/// Points on the hyperplane through `subset`, if that hyperplane supports the configuration.
fn supporting_facet(pc: &PointConfiguration, subset: &[usize]) -> Option<Vec<usize>> {
    let d = pc.dimension();
    let base = pc.point(subset[0]);
    let diffs: Vec<Vec<Rational>> = subset[1..].iter().map(|&i| sub(pc.point(i), base)).collect();
    let normal = if diffs.is_empty() {
        // d = 1: the hyperplane is the point itself
        vec![Rational::from_integer(1.into())]
    } else {
        let ns = nullspace(&diffs, d);
        if ns.len() != 1 {
            return None;
        }
        ns.into_iter().next().unwrap()
    };
    let offset = dot(&normal, base);
    let mut on = Vec::new();
    let (mut above, mut below) = (false, false);
    for (i, p) in pc.points().iter().enumerate() {
        let s = dot(&normal, p) - &offset;
        if s.is_zero() {
            on.push(i);
        } else if s.is_positive() {
            above = true;
        } else {
            below = true;
        }
        if above && below {
            return None;
        }
    }
    Some(on)
}

/// All facets of the convex hull, plus lower faces, computed exactly.
pub fn facet_enumeration(pc: &PointConfiguration, budget: HullBudget) -> Result<FaceLattice> {
    let d = pc.dimension();
    let n = pc.len();
    if n > budget.max_points {
        return Err(Error::budget("point count for facet enumeration", budget.max_points));
    }
    if d > budget.max_dimension {
        return Err(Error::budget("dimension for facet enumeration", budget.max_dimension));
    }
    let all: Vec<&[Rational]> = pc.points().iter().map(Vec::as_slice).collect();
    let rank = affine_rank(&all);
    if d == 0 || rank < d {
        return Err(Error::DegenerateSpan { dimension: d, rank });
    }

    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for subset in combinations(n, d) {
        if facets.iter().any(|f| subset.iter().all(|v| f.binary_search(v).is_ok())) {
            continue;
        }
        if let Some(on) = supporting_facet(pc, &subset) {
            facets.insert(on);
        }
    }

    // drop points that are not extreme: a vertex is the only point common to its facets
    let is_vertex: Vec<bool> = (0..n)
        .map(|v| {
            let mut meet: Option<BTreeSet<usize>> = None;
            for f in facets.iter().filter(|f| f.binary_search(&v).is_ok()) {
                let fs: BTreeSet<usize> = f.iter().copied().collect();
                meet = Some(match meet {
                    None => fs,
                    Some(m) => m.intersection(&fs).copied().collect(),
                });
            }
            meet.is_some_and(|m| m.len() == 1)
        })
        .collect();
    let facets: Vec<Vec<usize>> =
        facets.into_iter().map(|f| f.into_iter().filter(|&v| is_vertex[v]).collect()).collect();
    Ok(FaceLattice::from_facets(pc, &facets))
}

/// All k-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn pc(points: &[&[i64]]) -> PointConfiguration {
        let d = points[0].len();
        PointConfiguration::new(d, points.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).count(), 10);
        assert_eq!(combinations(4, 0).count(), 1);
        assert_eq!(combinations(3, 4).count(), 0);
        assert_eq!(combinations(7, 4).last().unwrap(), vec![3, 4, 5, 6]);
    }

    #[test]
    fn simplex_has_four_triangles() {
        let lat = facet_enumeration(&pc(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), HullBudget::default())
            .unwrap();
        assert_eq!(lat.f_vector(), vec![4, 6, 4]);
        assert!(lat.ridge_degrees().iter().all(|&c| c == 2));
    }

    #[test]
    fn interior_point_is_in_no_facet() {
        let lat = facet_enumeration(
            &pc(&[&[0, 0, 0], &[4, 0, 0], &[0, 4, 0], &[0, 0, 4], &[1, 1, 1]]),
            HullBudget::default(),
        )
        .unwrap();
        assert_eq!(lat.facets().len(), 4);
        assert!(lat.facets().iter().all(|f| !f.contains(&4)));
        assert_eq!(lat.vertices(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn cube_and_a_point_on_an_edge() {
        let mut pts: Vec<Vec<i64>> = Vec::new();
        for x in [-1, 1] {
            for y in [-1, 1] {
                for z in [-1, 1] {
                    pts.push(vec![x, y, z]);
                }
            }
        }
        pts.push(vec![1, 1, 0]);
        let refs: Vec<&[i64]> = pts.iter().map(Vec::as_slice).collect();
        let lat = facet_enumeration(&pc(&refs), HullBudget::default()).unwrap();
        assert_eq!(lat.f_vector(), vec![8, 12, 6]);
        assert!(lat.facets().iter().all(|f| f.len() == 4 && !f.contains(&8)));
    }

    #[test]
    fn degenerate_span_and_budget() {
        let flat = pc(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]);
        assert!(matches!(facet_enumeration(&flat, HullBudget::default()), Err(Error::DegenerateSpan { rank: 2, .. })));
        let tiny = HullBudget { max_points: 3, max_dimension: 7 };
        assert!(facet_enumeration(&flat, tiny).unwrap_err().is_budget());
    }
}
