//! Spherical cap systems: visibility caps, intersection graphs, ply depth and
//! the random-hyperplane separator experiment.
//!
//! A cap is `{x ∈ S^{d−1} : ⟨p, x⟩ ≥ c·‖p‖}` for a rational axis `p` and a
//! cosine `c ∈ (−1, 1]`. The cosine is kept in whichever exact form the cap was
//! built from, so caps whose cosine is irrational (visibility caps of spheres
//! with a non-square radius) are still handled exactly through `c²` and its sign.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::points::PointConfiguration;
use crate::rational::{
    dot, from_f64, int, norm_sq, serde_rational, sign_of_sqrt_sum, sqrt_exact, sub, to_f64, Rational, SqrtTerm,
};

/// Exact form of a cap's angular-radius cosine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CapBound {
    /// The cosine itself.
    Cos(Rational),
    /// The squared cosine; `obtuse` marks a negative cosine.
    CosSq { value: Rational, obtuse: bool },
    /// Halfspace offset `h`, i.e. the cap is `⟨p, x⟩ ≥ h` on the unit sphere.
    Offset(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphericalCap {
    axis: Vec<Rational>,
    axis_norm_sq: Rational,
    bound: CapBound,
    cos_sq: Rational,
    obtuse: bool,
}

impl SphericalCap {
    pub fn new(axis: Vec<Rational>, bound: CapBound) -> Result<Self> {
        let axis_norm_sq = norm_sq(&axis);
        if axis_norm_sq.is_zero() {
            return Err(Error::InvalidArgument("cap axis must be nonzero".into()));
        }
        let (cos_sq, obtuse) = match &bound {
            CapBound::Cos(c) => (c * c, c.is_negative()),
            CapBound::CosSq { value, obtuse } => {
                if value.is_negative() {
                    return Err(Error::InvalidArgument("squared cosine must be non-negative".into()));
                }
                (value.clone(), *obtuse && !value.is_zero())
            }
            CapBound::Offset(h) => (h * h / &axis_norm_sq, h.is_negative()),
        };
        if cos_sq > Rational::one() || (obtuse && cos_sq.is_one()) {
            return Err(Error::InvalidArgument("cap cosine must lie in (-1, 1]".into()));
        }
        Ok(SphericalCap { axis, axis_norm_sq, bound, cos_sq, obtuse })
    }

    /// Cap `⟨p, x⟩ ≥ h` on the unit sphere.
    pub fn from_offset(axis: Vec<Rational>, offset: Rational) -> Result<Self> {
        Self::new(axis, CapBound::Offset(offset))
    }

    pub fn from_cos(axis: Vec<Rational>, cos: Rational) -> Result<Self> {
        Self::new(axis, CapBound::Cos(cos))
    }

    pub fn dimension(&self) -> usize {
        self.axis.len()
    }

    pub fn axis(&self) -> &[Rational] {
        &self.axis
    }

    pub fn axis_norm_sq(&self) -> &Rational {
        &self.axis_norm_sq
    }

    pub fn bound(&self) -> &CapBound {
        &self.bound
    }

    pub fn cos_radius_sq(&self) -> &Rational {
        &self.cos_sq
    }

    /// True when the angular radius exceeds π/2.
    pub fn is_obtuse(&self) -> bool {
        self.obtuse
    }

    fn sigma(&self) -> Rational {
        if self.obtuse {
            int(-1)
        } else {
            int(1)
        }
    }

    /// The cosine, when it is rational.
    pub fn cos_radius(&self) -> Option<Rational> {
        match &self.bound {
            CapBound::Cos(c) => Some(c.clone()),
            _ => sqrt_exact(&self.cos_sq).map(|c| c * self.sigma()),
        }
    }

    /// The offset `h = c·‖p‖`, when it is rational.
    pub fn offset(&self) -> Option<Rational> {
        match &self.bound {
            CapBound::Offset(h) => Some(h.clone()),
            _ => sqrt_exact(&(&self.cos_sq * &self.axis_norm_sq)).map(|h| h * self.sigma()),
        }
    }

    pub fn cos_radius_f64(&self) -> f64 {
        let c = to_f64(&self.cos_sq).sqrt();
        if self.obtuse {
            -c
        } else {
            c
        }
    }

    pub fn angular_radius_f64(&self) -> f64 {
        self.cos_radius_f64().clamp(-1.0, 1.0).acos()
    }

    pub fn axis_unit_f64(&self) -> Vec<f64> {
        let n = to_f64(&self.axis_norm_sq).sqrt();
        self.axis.iter().map(|a| to_f64(a) / n).collect()
    }

    /// Sign of `⟨p, x⟩ − c·‖p‖·‖x‖`: the direction of `x` is inside the open
    /// cap for `Greater`, on its boundary for `Equal`.
    pub fn side(&self, x: &[Rational]) -> Ordering {
        let radicand = &self.cos_sq * &self.axis_norm_sq * norm_sq(x);
        sign_of_sqrt_sum(&[SqrtTerm::rational(dot(&self.axis, x)), SqrtTerm::new(-self.sigma(), radicand)])
    }

    /// Membership of the direction of a nonzero `x` in the closed cap.
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.side(x) != Ordering::Less
    }

    /// Membership of the direction of a nonzero `x` in the open cap.
    pub fn contains_in_interior(&self, x: &[Rational]) -> bool {
        self.side(x) == Ordering::Greater
    }

    /// Whether the closed cap meets the great sphere orthogonal to `normal`.
    /// A cap of radius at least π/2 meets every great sphere; otherwise the
    /// test is `⟨n, p⟩² ≤ ‖n‖²‖p‖² sin²r`.
    pub fn hit_by_hyperplane(&self, normal: &[Rational]) -> bool {
        if self.obtuse || self.cos_sq.is_zero() {
            return true;
        }
        let g = dot(normal, &self.axis);
        &g * &g <= norm_sq(normal) * &self.axis_norm_sq * (Rational::one() - &self.cos_sq)
    }

    /// Whether the closed caps share a point: the angle between the axes is at
    /// most the sum of the radii. Decided exactly; a float estimate settles
    /// clear cases first.
    pub fn intersects(&self, other: &SphericalCap) -> bool {
        self.intersects_with(&FloatCap::of(self), other, &FloatCap::of(other))
    }

    fn intersects_with(&self, fa: &FloatCap, other: &SphericalCap, fb: &FloatCap) -> bool {
        let cos_theta: f64 = fa.axis.iter().zip(&fb.axis).map(|(x, y)| x * y).sum();
        let theta = cos_theta.clamp(-1.0, 1.0).acos();
        let reach = fa.radius + fb.radius;
        if theta > reach + FLOAT_MARGIN && reach < std::f64::consts::PI - FLOAT_MARGIN {
            return false;
        }
        if theta < reach - FLOAT_MARGIN {
            return true;
        }
        self.intersects_exact(other)
    }

    fn intersects_exact(&self, other: &SphericalCap) -> bool {
        let (si, sj) = (self.sigma(), other.sigma());
        // radii sum to at least π exactly when c_i + c_j ≤ 0
        let sum = sign_of_sqrt_sum(&[SqrtTerm::new(si.clone(), self.cos_sq.clone()), SqrtTerm::new(sj.clone(), other.cos_sq.clone())]);
        if sum != Ordering::Greater {
            return true;
        }
        // cos θ ≥ cos(r_i + r_j) = c_i c_j − s_i s_j
        let one = Rational::one();
        let g = dot(&self.axis, &other.axis);
        let terms = [
            SqrtTerm::new(g, one.clone() / (&self.axis_norm_sq * &other.axis_norm_sq)),
            SqrtTerm::new(-(si * sj), &self.cos_sq * &other.cos_sq),
            SqrtTerm::new(one.clone(), (&one - &self.cos_sq) * (&one - &other.cos_sq)),
        ];
        sign_of_sqrt_sum(&terms) != Ordering::Less
    }

    /// Same closed cap, possibly with a differently scaled axis.
    pub fn same_as(&self, other: &SphericalCap) -> bool {
        let g = dot(&self.axis, &other.axis);
        g.is_positive()
            && &g * &g == &self.axis_norm_sq * &other.axis_norm_sq
            && self.cos_sq == other.cos_sq
            && self.obtuse == other.obtuse
    }
}

/// Float decisions closer than this to the boundary are redone exactly. Errors
/// of the float estimates are many orders of magnitude smaller.
const FLOAT_MARGIN: f64 = 1e-6;

/// Floating-point shadow of a cap for fast filtering.
struct FloatCap {
    axis: Vec<f64>,
    radius: f64,
    sin_radius: f64,
}

impl FloatCap {
    fn of(cap: &SphericalCap) -> Self {
        let radius = cap.angular_radius_f64();
        FloatCap { axis: cap.axis_unit_f64(), radius, sin_radius: radius.sin() }
    }

    /// `Some(hit)` when the float estimate is conclusive.
    fn hit(&self, cap: &SphericalCap, normal: &[f64]) -> Option<bool> {
        if cap.obtuse || cap.cos_sq.is_zero() {
            return Some(true);
        }
        let c: f64 = self.axis.iter().zip(normal).map(|(a, b)| a * b).sum::<f64>().abs();
        let gap = c - self.sin_radius;
        (gap.abs() > FLOAT_MARGIN).then_some(gap < 0.0)
    }
}

/// Cap of unit-sphere points visible from `v`: `{x : ⟨v, x⟩ ≥ 1}`.
pub fn visibility_cap(v: &[Rational]) -> Result<SphericalCap> {
    if norm_sq(v) <= Rational::one() {
        return Err(Error::PointInsideBall(0));
    }
    SphericalCap::from_offset(v.to_vec(), Rational::one())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapSystem {
    dimension: usize,
    caps: Vec<SphericalCap>,
    provenance: Option<Vec<usize>>,
}

impl CapSystem {
    pub fn new(dimension: usize, caps: Vec<SphericalCap>) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::InvalidArgument("caps need dimension at least 2".into()));
        }
        for c in &caps {
            if c.dimension() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, found: c.dimension() });
            }
        }
        Ok(CapSystem { dimension, caps, provenance: None })
    }

    /// Records the source vertex of each cap.
    pub fn with_provenance(mut self, provenance: Vec<usize>) -> Result<Self> {
        if provenance.len() != self.caps.len() {
            return Err(Error::InvalidArgument("provenance must list one source per cap".into()));
        }
        self.provenance = Some(provenance);
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn caps(&self) -> &[SphericalCap] {
        &self.caps
    }

    pub fn len(&self) -> usize {
        self.caps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.caps.is_empty()
    }

    pub fn provenance(&self) -> Option<&[usize]> {
        self.provenance.as_deref()
    }

    /// Mean of the unit axes, in floating point.
    pub fn mean_axis(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.dimension];
        for c in &self.caps {
            for (mi, ai) in m.iter_mut().zip(c.axis_unit_f64()) {
                *mi += ai;
            }
        }
        let n = self.caps.len().max(1) as f64;
        m.iter().map(|x| x / n).collect()
    }
}

/// Visibility caps of every point, taken with respect to the configuration's
/// sphere (the unit sphere at the origin when none is attached) and rescaled
/// to the unit sphere.
pub fn visibility_caps(pc: &PointConfiguration) -> Result<CapSystem> {
    let d = pc.dimension();
    let (center, r2) = match pc.sphere() {
        Some(s) => (s.center.clone(), s.radius_sq.clone()),
        None => (vec![int(0); d], Rational::one()),
    };
    let root = sqrt_exact(&r2);
    let mut caps = Vec::with_capacity(pc.len());
    for (i, p) in pc.points().iter().enumerate() {
        let u = sub(p, &center);
        let n = norm_sq(&u);
        if n <= r2 {
            return Err(Error::PointInsideBall(i));
        }
        let bound = match &root {
            Some(r) => CapBound::Offset(r.clone()),
            None => CapBound::CosSq { value: &r2 / &n, obtuse: false },
        };
        caps.push(SphericalCap::new(u, bound)?);
    }
    CapSystem::new(d, caps)?.with_provenance((0..pc.len()).collect())
}

pub fn cap_intersection_graph(cs: &CapSystem) -> Graph {
    let caps = cs.caps();
    let floats: Vec<FloatCap> = caps.iter().map(FloatCap::of).collect();
    let (caps, floats) = (&caps, &floats);
    let edges: Vec<(usize, usize)> = (0..caps.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            (i + 1..caps.len()).filter(move |&j| caps[i].intersects_with(&floats[i], &caps[j], &floats[j])).map(move |j| (i, j))
        })
        .collect();
    Graph::from_edges(caps.len(), edges)
}

/// Where the maximum depth is attained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PlyWitness {
    /// No caps at all.
    Empty,
    Axis { cap: usize },
    /// Near a crossing of two boundary circles, inside both caps; `branch` picks
    /// one of the two crossing points.
    Crossing { caps: [usize; 2], branch: i8 },
    /// Just inside a boundary circle that crosses no other circle.
    Circle { cap: usize },
    /// A sampled direction.
    Sample,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlyDepth {
    pub depth: usize,
    /// False for Monte Carlo lower bounds.
    pub exact: bool,
    pub witness: PlyWitness,
    /// Approximate location of the witness on the sphere.
    pub point: Vec<f64>,
}

fn cross(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn unit_f64(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

/// Exact maximum number of open caps sharing a point, for `d = 3`.
///
/// The maximum is attained in a cell of the circle arrangement that lies inside
/// every circle bounding it. Such a cell has either a crossing of two circles on
/// its boundary, where its depth is read off inside both caps, or is bounded by
/// circles crossing nothing, in which case one of them gives the depth. Axes
/// are evaluated as well. Identical caps are merged with multiplicity and
/// tangencies need no special care; three circles through one point are
/// reported as [`Error::DegenerateConfiguration`].
pub fn ply_depth(cs: &CapSystem) -> Result<PlyDepth> {
    if cs.dimension() != 3 {
        return Err(Error::MonteCarloOnly(cs.dimension()));
    }
    let all = cs.caps();
    let mut reps: Vec<usize> = Vec::new();
    let mut mult: Vec<usize> = Vec::new();
    for (i, c) in all.iter().enumerate() {
        match reps.iter().position(|&r| all[r].same_as(c)) {
            Some(k) => mult[k] += 1,
            None => {
                reps.push(i);
                mult.push(1);
            }
        }
    }
    if reps.is_empty() {
        return Ok(PlyDepth { depth: 0, exact: true, witness: PlyWitness::Empty, point: vec![0.0, 0.0, 1.0] });
    }
    let caps: Vec<&SphericalCap> = reps.iter().map(|&r| &all[r]).collect();
    let offsets = caps
        .iter()
        .zip(&reps)
        .map(|(c, &r)| c.offset().ok_or_else(|| Error::Unsupported(format!("cap {r} has an irrational offset; exact ply depth needs rational offsets"))))
        .collect::<Result<Vec<_>>>()?;
    let m = caps.len();
    let mut best = (0usize, PlyWitness::Empty, vec![0.0, 0.0, 1.0]);
    let mut consider = |depth: usize, witness: PlyWitness, point: Vec<f64>| {
        if depth > best.0 {
            best = (depth, witness, point);
        }
    };

    for k in 0..m {
        let depth: usize = (0..m).filter(|&l| caps[l].contains_in_interior(caps[k].axis())).map(|l| mult[l]).sum();
        consider(depth, PlyWitness::Axis { cap: reps[k] }, caps[k].axis_unit_f64());
    }

    let one = Rational::one();
    let mut crossed = vec![false; m];
    for i in 0..m {
        for j in i + 1..m {
            let (pi, pj) = (caps[i].axis(), caps[j].axis());
            let (ni, nj) = (caps[i].axis_norm_sq(), caps[j].axis_norm_sq());
            let g = dot(pi, pj);
            let det = ni * nj - &g * &g;
            if det.is_zero() {
                continue;
            }
            // closest point of the line ⟨p_i,x⟩ = h_i, ⟨p_j,x⟩ = h_j to the origin
            let alpha = (&offsets[i] * nj - &offsets[j] * &g) / &det;
            let beta = (&offsets[j] * ni - &offsets[i] * &g) / &det;
            let q: Vec<Rational> = pi.iter().zip(pj).map(|(a, b)| &alpha * a + &beta * b).collect();
            let dir = cross(pi, pj);
            let lambda = (&one - norm_sq(&q)) / &det;
            if !lambda.is_positive() {
                continue;
            }
            crossed[i] = true;
            crossed[j] = true;
            for branch in [1i8, -1] {
                let s = int(branch as i64);
                let mut depth = mult[i] + mult[j];
                for l in (0..m).filter(|&l| l != i && l != j) {
                    let a = dot(caps[l].axis(), &q) - &offsets[l];
                    let b = &s * dot(caps[l].axis(), &dir);
                    match sign_of_sqrt_sum(&[SqrtTerm::rational(a), SqrtTerm::new(b, lambda.clone())]) {
                        Ordering::Greater => depth += mult[l],
                        Ordering::Less => {}
                        Ordering::Equal => {
                            return Err(Error::DegenerateConfiguration(format!(
                                "boundary circles of caps {}, {} and {} share a point",
                                reps[i], reps[j], reps[l]
                            )))
                        }
                    }
                }
                let root = to_f64(&lambda).sqrt() * branch as f64;
                let point: Vec<f64> = q.iter().zip(&dir).map(|(a, b)| to_f64(a) + root * to_f64(b)).collect();
                consider(depth, PlyWitness::Crossing { caps: [reps[i], reps[j]], branch }, unit_f64(&point));
            }
        }
    }

    for k in (0..m).filter(|&k| !crossed[k]) {
        let (pk, nk, hk) = (caps[k].axis(), caps[k].axis_norm_sq(), &offsets[k]);
        let rho_sq = &one - hk * hk / nk;
        if !rho_sq.is_positive() {
            continue;
        }
        // a point of circle k lies strictly inside cap l iff the maximum of
        // ⟨p_l, x⟩ over the circle exceeds h_l
        let mut depth = mult[k];
        for l in (0..m).filter(|&l| l != k) {
            let g = dot(caps[l].axis(), pk);
            let perp = caps[l].axis_norm_sq() - &g * &g / nk;
            let terms = [SqrtTerm::rational(hk * &g / nk - &offsets[l]), SqrtTerm::new(one.clone(), &rho_sq * perp)];
            if sign_of_sqrt_sum(&terms) == Ordering::Greater {
                depth += mult[l];
            }
        }
        consider(depth, PlyWitness::Circle { cap: reps[k] }, caps[k].axis_unit_f64());
    }

    let (depth, witness, point) = best;
    Ok(PlyDepth { depth, exact: true, witness, point })
}

fn gaussian_direction(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Monte Carlo lower bound on the ply depth in any dimension. Each sample is
/// rationalized and its depth evaluated exactly, so the bound is sound.
pub fn ply_lower_bound(cs: &CapSystem, samples: usize, seed: u64) -> PlyDepth {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = PlyDepth { depth: 0, exact: false, witness: PlyWitness::Sample, point: vec![0.0; cs.dimension()] };
    let axes: Vec<(Vec<f64>, f64)> = cs.caps().iter().map(|c| (c.axis_unit_f64(), c.cos_radius_f64())).collect();
    for _ in 0..samples {
        let x = unit_f64(&gaussian_direction(&mut rng, cs.dimension()));
        let exact: Vec<Rational> = x.iter().map(|&v| from_f64(v)).collect();
        let depth = cs
            .caps()
            .iter()
            .zip(&axes)
            .filter(|(cap, (a, c))| {
                let margin = a.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() - c;
                if margin.abs() > 1e-9 {
                    margin > 0.0
                } else {
                    cap.contains_in_interior(&exact)
                }
            })
            .count();
        if depth > best.depth {
            best.depth = depth;
            best.point = x;
        }
    }
    best
}

/// One random hyperplane through the origin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparatorTrial {
    pub trial: usize,
    /// Sampled normal, rationalized exactly from the floating-point draw. It is
    /// not normalized; the hit test does not depend on its length.
    #[serde(with = "serde_rational::vec")]
    pub normal: Vec<Rational>,
    pub hit_count: usize,
    pub hits: Vec<usize>,
    /// Components of the intersection graph after removing hit caps.
    pub component_count: usize,
    pub largest_component: usize,
    /// True when the remaining caps fall into at least two components.
    pub splits: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparatorReport {
    pub n_caps: usize,
    pub dimension: usize,
    pub trials: usize,
    pub seed: u64,
    /// Hits count closed caps.
    pub hit_counts: Vec<usize>,
    pub min_hits: usize,
    #[serde(with = "serde_rational")]
    pub median_hits: Rational,
    #[serde(with = "serde_rational")]
    pub mean_hits: Rational,
    /// Median divided by `√n`.
    pub empirical_constant: f64,
    pub intersection_edges: usize,
    pub best: SeparatorTrial,
}

fn run_trial(cs: &CapSystem, floats: &[FloatCap], graph: &Graph, seed: u64, trial: usize) -> SeparatorTrial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let draw = gaussian_direction(&mut rng, cs.dimension());
    let normal: Vec<Rational> = draw.iter().map(|&x| from_f64(x)).collect();
    let unit = unit_f64(&draw);
    let hits: Vec<usize> = (0..cs.len())
        .filter(|&i| floats[i].hit(&cs.caps()[i], &unit).unwrap_or_else(|| cs.caps()[i].hit_by_hyperplane(&normal)))
        .collect();
    let components = graph.components_without(&hits);
    SeparatorTrial {
        trial,
        normal,
        hit_count: hits.len(),
        hits,
        component_count: components.len(),
        largest_component: components.iter().map(Vec::len).max().unwrap_or(0),
        splits: components.len() >= 2,
    }
}

/// Samples `trials` hyperplanes through the origin. Trial `t` draws its normal
/// from a ChaCha8 stream keyed by `(seed, t)`, so serial and parallel runs give
/// the same report.
pub fn random_hyperplane_separator(cs: &CapSystem, trials: usize, seed: u64, parallel: bool) -> Result<SeparatorReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let graph = cap_intersection_graph(cs);
    let floats: Vec<FloatCap> = cs.caps().iter().map(FloatCap::of).collect();
    let runs: Vec<SeparatorTrial> = if parallel {
        (0..trials).into_par_iter().map(|t| run_trial(cs, &floats, &graph, seed, t)).collect()
    } else {
        (0..trials).map(|t| run_trial(cs, &floats, &graph, seed, t)).collect()
    };
    let hit_counts: Vec<usize> = runs.iter().map(|r| r.hit_count).collect();
    let mut sorted = hit_counts.clone();
    sorted.sort_unstable();
    let mid = trials / 2;
    let median_hits = if trials % 2 == 1 {
        int(sorted[mid] as i64)
    } else {
        Rational::new((sorted[mid - 1] + sorted[mid]).into(), 2.into())
    };
    let mean_hits = Rational::new(hit_counts.iter().sum::<usize>().into(), trials.into());
    let best = runs.iter().min_by_key(|r| (r.hit_count, r.trial)).cloned().expect("at least one trial");
    let empirical_constant = if cs.is_empty() { 0.0 } else { to_f64(&median_hits) / (cs.len() as f64).sqrt() };
    Ok(SeparatorReport {
        n_caps: cs.len(),
        dimension: cs.dimension(),
        trials,
        seed,
        min_hits: sorted[0],
        hit_counts,
        median_hits,
        mean_hits,
        empirical_constant,
        intersection_edges: graph.edge_count(),
        best,
    })
}

/// Mean unit-axis length below which a system counts as balanced.
pub const BALANCE_THRESHOLD: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Normalization {
    /// Always "heuristic": the result is not a certified centerpoint.
    pub normalized: &'static str,
    pub iterations_run: usize,
    pub mean_axis_norm_before: f64,
    pub mean_axis_norm_after: f64,
}

/// Heuristic balancing of a cap system by sphere-preserving (Möbius) maps.
///
/// Each round takes the mean unit axis `m` and applies the conformal map that
/// pushes the sphere away from `m/‖m‖`, with strength `min(‖m‖, 0.9)`. Caps map
/// to caps; the new axes and offsets are computed in floating point and stored
/// exactly as offsets. Stops once `‖m‖` drops below [`BALANCE_THRESHOLD`].
/// This is not an exact centerpoint computation.
pub fn centerpoint_normalize(cs: &CapSystem, iterations: usize) -> Result<(CapSystem, Normalization)> {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let before = norm(&cs.mean_axis());
    let mut current = cs.clone();
    let mut run = 0;
    while run < iterations {
        let m = current.mean_axis();
        let len = norm(&m);
        if len < BALANCE_THRESHOLD {
            break;
        }
        let u: Vec<f64> = m.iter().map(|x| x / len).collect();
        let beta = len.min(0.9);
        let gamma = 1.0 / (1.0 - beta * beta).sqrt();
        let mut caps = Vec::with_capacity(current.len());
        for cap in current.caps() {
            let p = cap.axis_unit_f64();
            let h = cap.cos_radius_f64();
            // covector (−h, p) under the inverse boost
            let wu: f64 = p.iter().zip(&u).map(|(a, b)| a * b).sum();
            let wt = -h;
            let new_t = gamma * (wt + beta * wu);
            let new_u = gamma * (beta * wt + wu);
            let axis: Vec<f64> = p.iter().zip(&u).map(|(a, b)| a + (new_u - wu) * b).collect();
            let axis: Vec<Rational> = axis.into_iter().map(from_f64).collect();
            caps.push(SphericalCap::from_offset(axis, from_f64(-new_t))?);
        }
        let mut next = CapSystem::new(current.dimension(), caps)?;
        next.provenance = current.provenance.clone();
        current = next;
        run += 1;
    }
    let after = norm(&current.mean_axis());
    Ok((current, Normalization { normalized: "heuristic", iterations_run: run, mean_axis_norm_before: before, mean_axis_norm_after: after }))
}

/// Exact unit vector near the direction `v` (d = 3), via inverse stereographic
/// projection of a point rounded to the grid `1/scale`.
pub fn rational_unit_vector(v: [f64; 3], scale: i64) -> Vec<Rational> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let (x, y, z) = (v[0] / n, v[1] / n, v[2] / n);
    // project from the pole farther away from v
    let flip = z > 0.0;
    let zz = if flip { -z } else { z };
    let round = |t: f64| Rational::new(((t * scale as f64).round() as i64).into(), scale.into());
    let a = round(x / (1.0 - zz));
    let b = round(y / (1.0 - zz));
    let s = &a * &a + &b * &b;
    let den = &s + int(1);
    let two = int(2);
    let mut out = vec![&two * &a / &den, &two * &b / &den, (&s - int(1)) / &den];
    if flip {
        out[2] = -out[2].clone();
    }
    out
}

/// Nearly uniform 1-ply system on `S²`: jittered Fibonacci axes (exact unit
/// vectors) and radii just under half the distance to the nearest other axis,
/// so the closed caps are pairwise disjoint.
pub fn near_uniform_caps(n: usize, seed: u64) -> Result<CapSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let jitter = 0.25 / (n.max(1) as f64).sqrt();
    let axes: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let z = (1.0 - (2 * i + 1) as f64 / n as f64 + jitter * (rng.random::<f64>() - 0.5) / 4.0).clamp(-1.0, 1.0);
            let phi = golden * i as f64 + jitter * (rng.random::<f64>() - 0.5);
            let r = (1.0 - z * z).sqrt();
            rational_unit_vector([r * phi.cos(), r * phi.sin(), z], 1 << 20)
        })
        .collect();
    let unit: Vec<Vec<f64>> = axes.iter().map(|a| a.iter().map(to_f64).collect()).collect();
    let mut caps = Vec::with_capacity(n);
    for i in 0..n {
        let nearest = (0..n)
            .filter(|&j| j != i)
            .map(|j| unit[i].iter().zip(&unit[j]).map(|(a, b)| a * b).sum::<f64>().clamp(-1.0, 1.0).acos())
            .fold(std::f64::consts::PI, f64::min);
        let radius = 0.999 * nearest / 2.0;
        caps.push(SphericalCap::from_cos(axes[i].clone(), from_f64(radius.cos()))?);
    }
    CapSystem::new(3, caps)
}

/// Random caps on `S²` with exact unit axes and cosines drawn from
/// `[cos_min, cos_max]`, both on small dyadic grids.
pub fn random_caps(n: usize, seed: u64, cos_min: f64, cos_max: f64) -> Result<CapSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let caps = (0..n)
        .map(|_| {
            let v = gaussian_direction(&mut rng, 3);
            let axis = rational_unit_vector([v[0], v[1], v[2]], 1024);
            let c = cos_min + (cos_max - cos_min) * rng.random::<f64>();
            SphericalCap::from_cos(axis, Rational::new(((c * 1024.0).round() as i64).into(), 1024.into()))
        })
        .collect::<Result<Vec<_>>>()?;
    CapSystem::new(3, caps)
}

#[derive(Serialize, Deserialize)]
struct CapFile {
    #[serde(with = "serde_rational::vec")]
    axis: Vec<Rational>,
    #[serde(with = "serde_rational::option", skip_serializing_if = "Option::is_none", default)]
    cos_radius: Option<Rational>,
    #[serde(with = "serde_rational::option", skip_serializing_if = "Option::is_none", default)]
    cos_radius_sq: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    obtuse: Option<bool>,
    #[serde(with = "serde_rational::option", skip_serializing_if = "Option::is_none", default)]
    offset: Option<Rational>,
}

#[derive(Serialize, Deserialize)]
struct CapSystemFile {
    dimension: usize,
    caps: Vec<CapFile>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    provenance: Option<Vec<usize>>,
}

/// Reads a cap system. Each cap gives its axis and exactly one of
/// `cos_radius`, `cos_radius_sq` (with optional `obtuse`) or `offset`.
pub fn parse_caps(text: &str) -> Result<CapSystem> {
    let raw: CapSystemFile = serde_json::from_str(text)?;
    let caps = raw
        .caps
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            let bound = match (c.cos_radius, c.cos_radius_sq, c.offset) {
                (Some(v), None, None) => CapBound::Cos(v),
                (None, Some(value), None) => CapBound::CosSq { value, obtuse: c.obtuse.unwrap_or(false) },
                (None, None, Some(h)) => CapBound::Offset(h),
                _ => return Err(Error::Malformed(format!("cap {i} needs exactly one of cos_radius, cos_radius_sq, offset"))),
            };
            SphericalCap::new(c.axis, bound)
        })
        .collect::<Result<Vec<_>>>()?;
    let cs = CapSystem::new(raw.dimension, caps)?;
    match raw.provenance {
        Some(p) => cs.with_provenance(p),
        None => Ok(cs),
    }
}

pub fn serialize_caps(cs: &CapSystem) -> String {
    let caps = cs
        .caps()
        .iter()
        .map(|c| {
            let mut f = CapFile { axis: c.axis.clone(), cos_radius: None, cos_radius_sq: None, obtuse: None, offset: None };
            match &c.bound {
                CapBound::Cos(v) => f.cos_radius = Some(v.clone()),
                CapBound::CosSq { value, obtuse } => {
                    f.cos_radius_sq = Some(value.clone());
                    f.obtuse = obtuse.then_some(true);
                }
                CapBound::Offset(h) => f.offset = Some(h.clone()),
            }
            f
        })
        .collect();
    let file = CapSystemFile { dimension: cs.dimension(), caps, provenance: cs.provenance.clone() };
    serde_json::to_string_pretty(&file).expect("caps serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn system(caps: Vec<SphericalCap>) -> CapSystem {
        CapSystem::new(3, caps).unwrap()
    }

    #[test]
    fn visibility_cap_radius_and_boundary() {
        let c = visibility_cap(&v(&[2, 0, 0])).unwrap();
        assert_eq!(c.cos_radius(), Some(frac(1, 2)));
        assert!((c.angular_radius_f64() - std::f64::consts::FRAC_PI_3).abs() < 1e-12);
        assert_eq!(visibility_cap(&v(&[0, 0, 10])).unwrap().cos_radius(), Some(frac(1, 10)));
        assert!(matches!(visibility_cap(&v(&[1, 0, 0])), Err(Error::PointInsideBall(0))));
        // from (5/3, 0, 0) the tangency circle is x1 = 3/5
        let c = visibility_cap(&[frac(5, 3), int(0), int(0)]).unwrap();
        assert_eq!(c.side(&[frac(3, 5), frac(4, 5), int(0)]), Ordering::Equal);
        assert!(c.contains(&[frac(3, 5), frac(4, 5), int(0)]));
        assert!(!c.contains_in_interior(&[frac(3, 5), frac(4, 5), int(0)]));
        assert!(c.contains_in_interior(&v(&[7, 1, 0])));
    }

    #[test]
    fn cap_validation() {
        assert!(SphericalCap::from_cos(v(&[0, 0, 0]), frac(1, 2)).is_err());
        assert!(SphericalCap::from_cos(v(&[0, 0, 1]), int(-1)).is_err());
        assert!(SphericalCap::from_offset(v(&[0, 0, 2]), int(3)).is_err());
        assert!(SphericalCap::from_cos(v(&[0, 0, 1]), int(1)).is_ok());
    }

    #[test]
    fn intersection_examples() {
        let half = frac(1, 2);
        let a = SphericalCap::from_cos(v(&[0, 0, 1]), half.clone()).unwrap();
        let b = SphericalCap::from_cos(v(&[0, 0, -3]), half.clone()).unwrap();
        assert!(!a.intersects(&b) && !a.intersects_exact(&b));
        assert!(a.intersects(&a.clone()));
        // axes with cos θ = −3/5 and both radii θ/2 (cos² = 1/5): tangent
        let tangent = CapBound::CosSq { value: frac(1, 5), obtuse: false };
        let p = SphericalCap::new(v(&[0, 0, 1]), tangent.clone()).unwrap();
        let q = SphericalCap::new(v(&[0, 4, -3]), tangent).unwrap();
        assert!(p.intersects(&q) && p.intersects_exact(&q));
        let q_small = SphericalCap::new(v(&[0, 4, -3]), CapBound::CosSq { value: frac(201, 1000), obtuse: false }).unwrap();
        assert!(!p.intersects(&q_small));
        // radii summing to at least π always meet
        let big = SphericalCap::from_cos(v(&[1, 0, 0]), frac(-1, 3)).unwrap();
        assert!(big.intersects_exact(&SphericalCap::from_cos(v(&[-1, 0, 0]), frac(1, 3)).unwrap()));
        assert!(!big.intersects_exact(&SphericalCap::from_cos(v(&[-1, 0, 0]), frac(1, 2)).unwrap()));
    }

    #[test]
    fn octahedron_visibility_graph_contains_its_edges() {
        let mut pts = Vec::new();
        for i in 0..3 {
            for s in [2, -2] {
                let mut p = vec![int(0); 3];
                p[i] = int(s);
                pts.push(p);
            }
        }
        let pc = PointConfiguration::new(3, pts).unwrap();
        let g = cap_intersection_graph(&visibility_caps(&pc).unwrap());
        // radius π/3 each: orthogonal axes meet, antipodal ones do not
        assert_eq!(g.edge_count(), 12);
        assert!(!g.has_edge(0, 1) && g.has_edge(0, 2));
    }

    #[test]
    fn ply_small_cases() {
        let half = frac(1, 2);
        let disjoint = system(vec![
            SphericalCap::from_cos(v(&[0, 0, 1]), half.clone()).unwrap(),
            SphericalCap::from_cos(v(&[0, 0, -1]), half.clone()).unwrap(),
        ]);
        assert_eq!(ply_depth(&disjoint).unwrap().depth, 1);
        let twin = system(vec![
            SphericalCap::from_cos(v(&[0, 0, 1]), half.clone()).unwrap(),
            SphericalCap::from_offset(v(&[0, 0, 4]), int(2)).unwrap(),
            SphericalCap::from_cos(v(&[0, 0, -1]), half.clone()).unwrap(),
        ]);
        assert_eq!(ply_depth(&twin).unwrap().depth, 2);
        assert_eq!(ply_depth(&system(vec![])).unwrap().depth, 0);
        let flat = CapSystem::new(4, vec![SphericalCap::from_cos(v(&[0, 0, 0, 1]), half).unwrap()]).unwrap();
        assert!(matches!(ply_depth(&flat), Err(Error::MonteCarloOnly(4))));
    }

    #[test]
    fn ply_handles_internal_tangency() {
        // upper hemisphere and a cap inside it touching the equator
        let k = SphericalCap::from_cos(v(&[0, 0, 1]), int(0)).unwrap();
        let l = SphericalCap::from_cos(vec![int(0), frac(3, 5), frac(4, 5)], frac(3, 5)).unwrap();
        let r = ply_depth(&system(vec![k, l])).unwrap();
        assert_eq!(r.depth, 2);
    }

    #[test]
    fn triple_points_are_reported() {
        let hemi = |a: &[i64]| SphericalCap::from_cos(v(a), int(0)).unwrap();
        let cs = system(vec![hemi(&[1, 0, 0]), hemi(&[0, 1, 0]), hemi(&[1, 1, 0])]);
        assert!(matches!(ply_depth(&cs), Err(Error::DegenerateConfiguration(_))));
    }

    /// Oracle: best depth over a dense set of float samples.
    fn sampled_depth(cs: &CapSystem, samples: usize) -> usize {
        let caps: Vec<(Vec<f64>, f64)> = cs.caps().iter().map(|c| (c.axis_unit_f64(), c.cos_radius_f64())).collect();
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        (0..samples)
            .map(|i| {
                let z = 1.0 - (2 * i + 1) as f64 / samples as f64;
                let r = (1.0 - z * z).sqrt();
                let x = [r * (golden * i as f64).cos(), r * (golden * i as f64).sin(), z];
                caps.iter().filter(|(a, c)| a[0] * x[0] + a[1] * x[1] + a[2] * x[2] > c + 1e-12).count()
            })
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn octahedron_ply_matches_sampling() {
        let caps = [[2, 0, 0], [-2, 0, 0], [0, 2, 0], [0, -2, 0], [0, 0, 2], [0, 0, -2]]
            .iter()
            .map(|p| visibility_cap(&v(p)).unwrap())
            .collect();
        let cs = system(caps);
        let exact = ply_depth(&cs).unwrap();
        assert_eq!(exact.depth, 3);
        assert_eq!(sampled_depth(&cs, 100_000), 3);
        assert!(ply_lower_bound(&cs, 2000, 1).depth <= 3);
    }

    #[test]
    fn random_systems_match_sampling() {
        for seed in 0..3 {
            let cs = random_caps(10, seed, 0.6, 0.95).unwrap();
            let exact = ply_depth(&cs).unwrap().depth;
            let sampled = sampled_depth(&cs, 40_000);
            assert!(sampled <= exact && exact <= sampled + 1, "seed {seed}: exact {exact}, sampled {sampled}");
        }
    }

    #[test]
    fn near_uniform_system_is_one_ply() {
        let cs = near_uniform_caps(60, 3).unwrap();
        assert!(cs.caps().iter().all(|c| c.axis_norm_sq().is_one()));
        assert_eq!(cap_intersection_graph(&cs).edge_count(), 0);
        assert_eq!(ply_depth(&cs).unwrap().depth, 1);
    }

    #[test]
    fn single_cap_separator_matches_direct_evaluation() {
        let cs = system(vec![SphericalCap::from_cos(v(&[0, 0, 1]), frac(1, 2)).unwrap()]);
        for seed in 0..20 {
            let report = random_hyperplane_separator(&cs, 1, seed, false).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(0);
            let n = gaussian_direction(&mut rng, 3);
            let len = n.iter().map(|x| x * x).sum::<f64>().sqrt();
            let hit = (n[2] / len).abs() <= (std::f64::consts::FRAC_PI_3).sin();
            assert_eq!(report.hit_counts, vec![hit as usize]);
        }
    }

    #[test]
    fn separator_is_deterministic_and_exact() {
        let cs = near_uniform_caps(80, 11).unwrap();
        let serial = random_hyperplane_separator(&cs, 30, 7, false).unwrap();
        let parallel = random_hyperplane_separator(&cs, 30, 7, true).unwrap();
        assert_eq!(serial, parallel);
        let recount: Vec<usize> = (0..cs.len()).filter(|&i| cs.caps()[i].hit_by_hyperplane(&serial.best.normal)).collect();
        assert_eq!(recount, serial.best.hits);
        assert_eq!(serial.best.hit_count, recount.len());
        assert_eq!(serial.min_hits, serial.best.hit_count);
    }

    #[test]
    fn tiny_polar_caps_are_usually_missed() {
        let caps = (0..10)
            .map(|i| SphericalCap::from_cos(vec![frac(i, 1000), int(0), int(1)], frac(9999, 10000)).unwrap())
            .collect();
        let report = random_hyperplane_separator(&system(caps), 101, 5, false).unwrap();
        assert_eq!(report.median_hits, int(0));
    }

    #[test]
    fn normalization_behaviour() {
        let clustered = system(
            (0..8)
                .map(|i| {
                    let axis = rational_unit_vector([(i as f64).cos() * 0.3, (i as f64).sin() * 0.3, 1.0], 1024);
                    SphericalCap::from_cos(axis, frac(99, 100)).unwrap()
                })
                .collect(),
        );
        let (same, info) = centerpoint_normalize(&clustered, 0).unwrap();
        assert_eq!(same, clustered);
        assert_eq!(info.iterations_run, 0);
        let (spread, info) = centerpoint_normalize(&clustered, 20).unwrap();
        assert_eq!(info.normalized, "heuristic");
        assert!(info.mean_axis_norm_after < info.mean_axis_norm_before / 2.0);
        assert_eq!(spread.len(), 8);

        let balanced = system([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0]].iter().map(|a| SphericalCap::from_cos(v(a), frac(1, 2)).unwrap()).collect());
        let (out, info) = centerpoint_normalize(&balanced, 5).unwrap();
        assert_eq!(out, balanced);
        assert_eq!(info.iterations_run, 0);
    }

    #[test]
    fn cap_json_keeps_each_bound_form() {
        let cs = system(vec![
            SphericalCap::from_cos(v(&[0, 0, 1]), frac(1, 2)).unwrap(),
            SphericalCap::new(v(&[1, 1, 0]), CapBound::CosSq { value: frac(1, 3), obtuse: true }).unwrap(),
            SphericalCap::from_offset(v(&[0, 3, 0]), int(2)).unwrap(),
        ])
        .with_provenance(vec![4, 5, 6])
        .unwrap();
        let text = serialize_caps(&cs);
        assert!(text.contains("\"cos_radius\": \"1/2\"") && text.contains("\"obtuse\": true"));
        assert_eq!(parse_caps(&text).unwrap(), cs);
        let bad = r#"{"dimension": 3, "caps": [{"axis": ["1", "0", "0"], "cos_radius": "1/2", "offset": "1"}]}"#;
        assert!(matches!(parse_caps(bad), Err(Error::Malformed(_))));
    }
}
