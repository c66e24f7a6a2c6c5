//! Cut, avoid and tangency tests of faces against a ball, and the (i,j)- and
//! k-scribedness reports built from them.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::budgets::Budgets;
use crate::error::{Error, Result};
use crate::hull::{combinations, FaceLattice};
use crate::linalg::{rank, solve};
use crate::lp::{LpOutcome, LpProblem, Sense};
use crate::points::{PointConfiguration, SphereRef};
use crate::rational::{dot, int, norm_sq, serde_rational, sub, Rational};

/// Exact per-vertex test `‖v − center‖² = radius²`.
pub fn on_sphere_check(pc: &PointConfiguration, s: &SphereRef) -> Result<Vec<bool>> {
    if s.dimension() != pc.dimension() {
        return Err(Error::DimensionMismatch { expected: pc.dimension(), found: s.dimension() });
    }
    Ok(pc.squared_radii(s).into_iter().map(|r| r == s.radius_sq).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinNorm {
    #[serde(with = "serde_rational")]
    pub value: Rational,
    /// The minimizer, in original coordinates.
    #[serde(with = "serde_rational::vec")]
    pub point: Vec<Rational>,
    /// True iff the minimizer has all barycentric coordinates strictly positive.
    pub interior: bool,
}

fn check_face(pc: &PointConfiguration, face: &[usize]) -> Result<()> {
    if face.is_empty() {
        return Err(Error::InvalidArgument("empty face".into()));
    }
    if let Some(&v) = face.iter().find(|&&v| v >= pc.len()) {
        return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
    }
    Ok(())
}

/// Projection of `c` onto the affine hull of `pts`, if they are affinely
/// independent; returns barycentric coordinates.
fn project(pts: &[&[Rational]], c: &[Rational]) -> Option<Vec<Rational>> {
    let base = pts[0];
    let dirs: Vec<Vec<Rational>> = pts[1..].iter().map(|p| sub(p, base)).collect();
    if rank(&dirs) < dirs.len() {
        return None;
    }
    let gram: Vec<Vec<Rational>> = dirs.iter().map(|a| dirs.iter().map(|b| dot(a, b)).collect()).collect();
    let target = sub(c, base);
    let rhs: Vec<Rational> = dirs.iter().map(|a| dot(a, &target)).collect();
    let mu = if dirs.is_empty() { Vec::new() } else { solve(&gram, &rhs)? };
    let mut lambda = vec![int(1) - mu.iter().sum::<Rational>()];
    lambda.extend(mu);
    Some(lambda)
}

fn combine(pts: &[&[Rational]], lambda: &[Rational]) -> Vec<Rational> {
    let mut x = vec![Rational::zero(); pts[0].len()];
    for (p, l) in pts.iter().zip(lambda) {
        for (xi, pi) in x.iter_mut().zip(p.iter()) {
            *xi += l * pi;
        }
    }
    x
}

/// True iff `x` is in the relative interior of the hull of `pts`:
/// maximise `s` subject to `x = Σ λᵢ pᵢ`, `Σ λᵢ = 1`, `λᵢ ≥ s`.
fn in_relative_interior(pts: &[&[Rational]], x: &[Rational]) -> bool {
    let m = pts.len();
    let mut lp = LpProblem::new(m + 1);
    lp.set_free(m);
    lp.set_objective(m, int(1));
    for k in 0..x.len() {
        lp.add_row((0..m).map(|i| (i, pts[i][k].clone())).collect(), Sense::Eq, x[k].clone());
    }
    lp.add_row((0..m).map(|i| (i, int(1))).collect(), Sense::Eq, int(1));
    for i in 0..m {
        lp.add_row(vec![(i, int(1)), (m, int(-1))], Sense::Ge, int(0));
    }
    match lp.solve() {
        LpOutcome::Optimal(sol) => sol.value.is_positive(),
        _ => false,
    }
}

/// Exact minimum of `‖x − center‖²` over the hull of a face, by enumerating
/// affinely independent vertex subsets and projecting onto their hulls.
pub fn min_norm_sq_over_face(pc: &PointConfiguration, face: &[usize], s: &SphereRef, budgets: &Budgets) -> Result<MinNorm> {
    check_face(pc, face)?;
    if face.len() > budgets.active_set {
        return Err(Error::budget("face size for active-set enumeration", budgets.active_set));
    }
    let pts: Vec<&[Rational]> = face.iter().map(|&v| pc.point(v)).collect();
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    for size in 1..=face.len().min(pc.dimension() + 1) {
        for subset in combinations(face.len(), size) {
            let sub_pts: Vec<&[Rational]> = subset.iter().map(|&i| pts[i]).collect();
            let Some(lambda) = project(&sub_pts, &s.center) else { continue };
            if lambda.iter().any(|l| !l.is_positive()) {
                continue;
            }
            let x = combine(&sub_pts, &lambda);
            let value = norm_sq(&sub(&x, &s.center));
            if best.as_ref().is_none_or(|(b, _)| value < *b) {
                best = Some((value, x));
            }
        }
    }
    let (value, point) = best.expect("singletons are always candidates");
    let interior = in_relative_interior(&pts, &point);
    Ok(MinNorm { value, point, interior })
}

/// A face cuts the ball iff a point of the closed ball lies in its relative interior.
pub fn face_cuts(pc: &PointConfiguration, face: &[usize], s: &SphereRef, budgets: &Budgets) -> Result<bool> {
    let m = min_norm_sq_over_face(pc, face, s, budgets)?;
    Ok(m.value < s.radius_sq || (m.value == s.radius_sq && m.interior))
}

fn in_hull(pts: &[&[Rational]], x: &[Rational]) -> bool {
    let m = pts.len();
    let mut lp = LpProblem::new(m);
    for k in 0..x.len() {
        lp.add_row((0..m).map(|i| (i, pts[i][k].clone())).collect(), Sense::Eq, x[k].clone());
    }
    lp.add_row((0..m).map(|i| (i, int(1))).collect(), Sense::Eq, int(1));
    matches!(lp.solve(), LpOutcome::Optimal(_))
}

/// Some `a` with `a·v = b` on the face and `a·u ≤ b − 1` on every point outside
/// its hull. Non-vertex points inside the face's hull lie on the hyperplane.
fn is_proper_face(pts: &[Vec<Rational>], face: &[usize]) -> bool {
    let d = pts[0].len();
    let face_pts: Vec<&[Rational]> = face.iter().map(|&v| pts[v].as_slice()).collect();
    let mut lp = LpProblem::new(d + 1);
    for j in 0..=d {
        lp.set_free(j);
    }
    for (i, p) in pts.iter().enumerate() {
        let mut coeffs: Vec<(usize, Rational)> = p.iter().cloned().enumerate().collect();
        coeffs.push((d, int(-1)));
        if face.contains(&i) {
            lp.add_row(coeffs, Sense::Eq, int(0));
        } else if !in_hull(&face_pts, p) {
            lp.add_row(coeffs, Sense::Le, int(-1));
        }
    }
    matches!(lp.solve(), LpOutcome::Optimal(_))
}

/// Smallest `‖a‖²` over `a·v = 1` (face) and `a·u ≤ 1` (all points), by
/// enumerating active sets and taking minimum-norm solutions. `None` if infeasible.
fn min_norm_support(pts: &[Vec<Rational>], face: &[usize]) -> Option<Rational> {
    let d = pts[0].len();
    let others: Vec<usize> = (0..pts.len()).filter(|i| !face.contains(i)).collect();
    let mut best: Option<Rational> = None;
    for size in 0..=others.len().min(d) {
        for active in combinations(others.len(), size) {
            let rows: Vec<&Vec<Rational>> = face.iter().chain(active.iter().map(|&k| &others[k])).map(|&i| &pts[i]).collect();
            let gram: Vec<Vec<Rational>> = rows.iter().map(|a| rows.iter().map(|b| dot(a, b)).collect()).collect();
            let Some(mu) = solve(&gram, &vec![int(1); rows.len()]) else { continue };
            let mut a = vec![Rational::zero(); d];
            for (row, m) in rows.iter().zip(&mu) {
                for (ak, rk) in a.iter_mut().zip(row.iter()) {
                    *ak += m * rk;
                }
            }
            if others.iter().any(|&u| dot(&pts[u], &a) > int(1)) {
                continue;
            }
            let value = norm_sq(&a);
            if best.as_ref().is_none_or(|b| value < *b) {
                best = Some(value);
            }
        }
    }
    best
}

/// A face avoids the ball iff some supporting hyperplane of the face has the
/// polytope and the ball in one closed halfspace.
pub fn face_avoids(pc: &PointConfiguration, face: &[usize], s: &SphereRef, budgets: &Budgets) -> Result<bool> {
    check_face(pc, face)?;
    if pc.len() > budgets.hull.max_points {
        return Err(Error::budget("point count for the support problem", budgets.hull.max_points));
    }
    let pts = pc.recentered(&s.center);
    let mut sorted = face.to_vec();
    sorted.sort_unstable();
    if !is_proper_face(&pts, &sorted) {
        return Err(Error::InfeasibleSupport(sorted));
    }
    Ok(min_norm_support(&pts, &sorted).is_some_and(|v| v * &s.radius_sq <= int(1)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceStatus {
    pub rank: usize,
    pub vertices: Vec<usize>,
    pub cuts: bool,
    pub avoids: bool,
    pub tangent: bool,
    #[serde(with = "serde_rational")]
    pub min_norm_sq: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScribeQuery {
    Ij { i: usize, j: usize },
    K { k: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScribeReport {
    pub query: ScribeQuery,
    pub holds: bool,
    pub faces: Vec<FaceStatus>,
    /// First face that breaks the query, if any.
    pub failure: Option<Vec<usize>>,
}

pub fn face_status(pc: &PointConfiguration, rank: usize, face: &[usize], s: &SphereRef, budgets: &Budgets) -> Result<FaceStatus> {
    let m = min_norm_sq_over_face(pc, face, s, budgets)?;
    let cuts = m.value < s.radius_sq || (m.value == s.radius_sq && m.interior);
    let avoids = face_avoids(pc, face, s, budgets)?;
    Ok(FaceStatus { rank, vertices: face.to_vec(), cuts, avoids, tangent: avoids && m.value == s.radius_sq, min_norm_sq: m.value })
}

fn statuses(
    pc: &PointConfiguration,
    lattice: &FaceLattice,
    ranks: &[usize],
    s: &SphereRef,
    budgets: &Budgets,
    parallel: bool,
) -> Result<Vec<FaceStatus>> {
    let jobs: Vec<(usize, &Vec<usize>)> = ranks.iter().flat_map(|&r| lattice.faces(r).iter().map(move |f| (r, f))).collect();
    if parallel {
        jobs.par_iter().map(|(r, f)| face_status(pc, *r, f, s, budgets)).collect()
    } else {
        jobs.iter().map(|(r, f)| face_status(pc, *r, f, s, budgets)).collect()
    }
}

fn check_rank(lattice: &FaceLattice, r: usize) -> Result<()> {
    if r >= lattice.dimension {
        return Err(Error::InvalidArgument(format!("face rank {r} must be below dimension {}", lattice.dimension)));
    }
    Ok(())
}

/// All i-faces avoid the ball and all j-faces cut it.
pub fn check_ij_scribed(
    pc: &PointConfiguration,
    lattice: &FaceLattice,
    s: &SphereRef,
    i: usize,
    j: usize,
    budgets: &Budgets,
    parallel: bool,
) -> Result<ScribeReport> {
    check_rank(lattice, j)?;
    if i > j {
        return Err(Error::InvalidArgument(format!("need i <= j, got ({i}, {j})")));
    }
    let ranks: Vec<usize> = if i == j { vec![i] } else { vec![i, j] };
    let faces = statuses(pc, lattice, &ranks, s, budgets, parallel)?;
    let failure = faces
        .iter()
        .find(|f| (f.rank == i && !f.avoids) || (f.rank == j && !f.cuts))
        .map(|f| f.vertices.clone());
    Ok(ScribeReport { query: ScribeQuery::Ij { i, j }, holds: failure.is_none(), faces, failure })
}

/// All k-faces tangent: they avoid the ball and touch the sphere.
pub fn check_k_scribed(
    pc: &PointConfiguration,
    lattice: &FaceLattice,
    s: &SphereRef,
    k: usize,
    budgets: &Budgets,
    parallel: bool,
) -> Result<ScribeReport> {
    check_rank(lattice, k)?;
    let faces = statuses(pc, lattice, &[k], s, budgets, parallel)?;
    let failure = faces.iter().find(|f| !f.tangent).map(|f| f.vertices.clone());
    Ok(ScribeReport { query: ScribeQuery::K { k }, holds: failure.is_none(), faces, failure })
}
