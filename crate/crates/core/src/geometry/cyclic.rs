//! Cyclic polytope generators, face-lattice verification and k-sets.

use std::collections::BTreeSet;

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hull::{combinations, facet_enumeration, HullBudget};
use crate::lp::{LpOutcome, LpProblem, Sense};
use crate::points::{PointConfiguration, SphereRef};
use crate::rational::{frac, int, Rational};

fn sorted_distinct(params: &[Rational]) -> Result<Vec<Rational>> {
    let mut seen = BTreeSet::new();
    for (i, p) in params.iter().enumerate() {
        if !seen.insert(p) {
            return Err(Error::Duplicate(i));
        }
    }
    Ok(seen.into_iter().cloned().collect())
}

/// Integers `−⌊n/2⌋, …` used when no parameters are given.
pub fn default_parameters(n: usize) -> Vec<Rational> {
    let shift = (n / 2) as i64;
    (0..n as i64).map(|i| int(i - shift)).collect()
}

/// Points on the trigonometric moment curve `(sin t, cos t, sin 2t, cos 2t, …)`
/// with `t = 2·atan(u)`, so every coordinate is rational. Points are ordered by
/// increasing `u` and lie on the sphere of squared radius `d/2`.
pub fn generate_cyclic_trig(d: usize, params: &[Rational]) -> Result<PointConfiguration> {
    if d < 4 || d % 2 == 1 {
        return Err(Error::InvalidArgument(format!("trigonometric construction needs even d >= 4, got {d}")));
    }
    if params.len() <= d {
        return Err(Error::InvalidArgument(format!("need n > d, got n = {} and d = {d}", params.len())));
    }
    let us = sorted_distinct(params)?;
    let points = us
        .iter()
        .map(|u| {
            let q = Rational::one() + u * u;
            let (c, s) = ((Rational::one() - u * u) / &q, (u + u) / &q);
            let (mut ck, mut sk) = (Rational::one(), int(0));
            let mut x = Vec::with_capacity(d);
            for _ in 0..d / 2 {
                // (cos kt + i sin kt)(cos t + i sin t)
                let next_c = &ck * &c - &sk * &s;
                let next_s = &sk * &c + &ck * &s;
                ck = next_c;
                sk = next_s;
                x.push(sk.clone());
                x.push(ck.clone());
            }
            x
        })
        .collect();
    PointConfiguration::new(d, points)?.with_sphere(SphereRef::centered(d, frac(d as i64, 2))?)
}

/// Points `(t, t², …, t^d)` on the moment curve, ordered by increasing `t`.
pub fn generate_cyclic_moment(d: usize, params: &[Rational]) -> Result<PointConfiguration> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let ts = sorted_distinct(params)?;
    let points = ts
        .iter()
        .map(|t| {
            let mut x = Vec::with_capacity(d);
            let mut p = t.clone();
            for _ in 0..d {
                x.push(p.clone());
                p = &p * t;
            }
            x
        })
        .collect();
    PointConfiguration::new(d, points)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeCheck {
    pub matches: bool,
    pub first_failure: Option<String>,
}

/// Compares claimed facets, as vertex sets, with the exhaustively computed ones.
pub fn verify_face_lattice(pc: &PointConfiguration, claimed: &[Vec<usize>], budget: HullBudget) -> Result<LatticeCheck> {
    let actual = facet_enumeration(pc, budget)?.facet_set();
    let claimed: BTreeSet<Vec<usize>> = claimed
        .iter()
        .map(|f| {
            let mut f = f.clone();
            f.sort_unstable();
            f
        })
        .collect();
    let first_failure = claimed
        .iter()
        .find(|f| !actual.contains(*f))
        .map(|f| format!("claimed facet {f:?} is not a facet"))
        .or_else(|| actual.iter().find(|f| !claimed.contains(*f)).map(|f| format!("facet {f:?} is missing")));
    Ok(LatticeCheck { matches: first_failure.is_none(), first_failure })
}

/// True iff some hyperplane strictly separates `subset` from the other points.
pub fn is_separable(pc: &PointConfiguration, subset: &[usize]) -> bool {
    let d = pc.dimension();
    let mut lp = LpProblem::new(d + 1);
    for j in 0..=d {
        lp.set_free(j);
    }
    for (i, p) in pc.points().iter().enumerate() {
        let mut coeffs: Vec<(usize, Rational)> = p.iter().cloned().enumerate().collect();
        coeffs.push((d, int(-1)));
        if subset.contains(&i) {
            lp.add_row(coeffs, Sense::Ge, int(1));
        } else {
            lp.add_row(coeffs, Sense::Le, int(-1));
        }
    }
    matches!(lp.solve(), LpOutcome::Optimal(_))
}

/// All k-subsets strictly separable from the rest by a hyperplane. By
/// convention `k = n` gives the full set and `k = 0` the empty set.
pub fn k_sets(pc: &PointConfiguration, k: usize, budget: HullBudget) -> Result<Vec<Vec<usize>>> {
    let n = pc.len();
    if n > budget.max_points {
        return Err(Error::budget("point count for k-set enumeration", budget.max_points));
    }
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
    }
    if k == 0 || k == n {
        return Ok(vec![(0..k).collect()]);
    }
    Ok(combinations(n, k).filter(|s| is_separable(pc, s)).collect())
}
