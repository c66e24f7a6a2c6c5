//! Labeled point sets with exact coordinates.

use std::collections::BTreeSet;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::linalg::affine_rank;
use crate::rational::{norm_sq, sub, Rational};

/// A sphere given by its center and squared radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereRef {
    pub center: Vec<Rational>,
    pub radius_sq: Rational,
}

impl SphereRef {
    pub fn new(center: Vec<Rational>, radius_sq: Rational) -> Result<Self> {
        if !radius_sq.is_positive() {
            return Err(Error::InvalidArgument("sphere radius_squared must be positive".into()));
        }
        Ok(SphereRef { center, radius_sq })
    }

    pub fn centered(dimension: usize, radius_sq: Rational) -> Result<Self> {
        SphereRef::new(vec![crate::rational::int(0); dimension], radius_sq)
    }

    pub fn dimension(&self) -> usize {
        self.center.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfiguration {
    dimension: usize,
    points: Vec<Vec<Rational>>,
    sphere: Option<SphereRef>,
    claimed_faces: Option<Vec<Vec<usize>>>,
}

impl PointConfiguration {
    pub fn new(dimension: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        for p in &points {
            if p.len() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, found: p.len() });
            }
        }
        let mut seen = BTreeSet::new();
        for (i, p) in points.iter().enumerate() {
            if !seen.insert(p) {
                return Err(Error::Duplicate(i));
            }
        }
        Ok(PointConfiguration { dimension, points, sphere: None, claimed_faces: None })
    }

    pub fn with_sphere(mut self, sphere: SphereRef) -> Result<Self> {
        if sphere.dimension() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, found: sphere.dimension() });
        }
        self.sphere = Some(sphere);
        Ok(self)
    }

    /// Attaches claimed facets; each must have at least `d` affinely independent vertices.
    pub fn with_claimed_faces(mut self, faces: Vec<Vec<usize>>) -> Result<Self> {
        for (i, face) in faces.iter().enumerate() {
            if let Some(&v) = face.iter().find(|&&v| v >= self.points.len()) {
                return Err(Error::DegenerateFace { face: i, reason: format!("vertex {v} out of range") });
            }
            let pts: Vec<&[Rational]> = face.iter().map(|&v| self.points[v].as_slice()).collect();
            if face.len() < self.dimension || affine_rank(&pts) + 1 < self.dimension {
                return Err(Error::DegenerateFace {
                    face: i,
                    reason: format!("fewer than {} affinely independent vertices", self.dimension),
                });
            }
        }
        self.claimed_faces = Some(faces);
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[Rational] {
        &self.points[i]
    }

    pub fn sphere(&self) -> Option<&SphereRef> {
        self.sphere.as_ref()
    }

    pub fn claimed_faces(&self) -> Option<&[Vec<usize>]> {
        self.claimed_faces.as_deref()
    }

    /// Coordinates translated so that `center` becomes the origin.
    pub fn recentered(&self, center: &[Rational]) -> Vec<Vec<Rational>> {
        self.points.iter().map(|p| sub(p, center)).collect()
    }

    /// Squared distances from the sphere center, one per point.
    pub fn squared_radii(&self, sphere: &SphereRef) -> Vec<Rational> {
        self.points.iter().map(|p| norm_sq(&sub(p, &sphere.center))).collect()
    }

    /// Same configuration with every coordinate scaled by `factor` about the origin.
    pub fn scaled(&self, factor: &Rational) -> Self {
        PointConfiguration {
            dimension: self.dimension,
            points: self.points.iter().map(|p| p.iter().map(|x| x * factor).collect()).collect(),
            sphere: self.sphere.clone(),
            claimed_faces: self.claimed_faces.clone(),
        }
    }

    /// Same configuration with point `i` moved to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut points = vec![Vec::new(); self.points.len()];
        for (i, &j) in perm.iter().enumerate() {
            points[j] = self.points[i].clone();
        }
        PointConfiguration {
            dimension: self.dimension,
            points,
            sphere: self.sphere.clone(),
            claimed_faces: self
                .claimed_faces
                .as_ref()
                .map(|fs| fs.iter().map(|f| f.iter().map(|&v| perm[v]).collect()).collect()),
        }
    }
}
