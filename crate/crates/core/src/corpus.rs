//! Named combinatorial types and a few exact realizations.

use crate::error::{Error, Result};
use crate::map::CombinatorialMap;
use crate::points::{PointConfiguration, SphereRef};
use crate::rational::int;

pub fn tetrahedron() -> CombinatorialMap {
    CombinatorialMap::new(4, vec![vec![0, 1, 2], vec![0, 3, 1], vec![1, 3, 2], vec![0, 2, 3]])
        .unwrap()
        .with_name("tetrahedron")
}

/// Vertex `i` sits at `(2b₂−1, 2b₁−1, 2b₀−1)` for the bits of `i`.
pub fn cube() -> CombinatorialMap {
    let faces = vec![
        vec![0, 1, 3, 2],
        vec![4, 5, 7, 6],
        vec![0, 1, 5, 4],
        vec![2, 3, 7, 6],
        vec![0, 2, 6, 4],
        vec![1, 3, 7, 5],
    ];
    CombinatorialMap::new(8, faces).unwrap().with_name("cube")
}

/// Vertex `i` is the center of cube face `i`.
pub fn octahedron() -> CombinatorialMap {
    cube().dual().with_name("octahedron")
}

pub fn icosahedron() -> CombinatorialMap {
    let u = |i: usize| 1 + i % 5;
    let l = |i: usize| 6 + i % 5;
    let mut faces = Vec::new();
    for i in 0..5 {
        faces.push(vec![0, u(i), u(i + 1)]);
        faces.push(vec![u(i), u(i + 1), l(i)]);
        faces.push(vec![l(i), l(i + 1), u(i + 1)]);
        faces.push(vec![11, l(i), l(i + 1)]);
    }
    CombinatorialMap::new(12, faces).unwrap().with_name("icosahedron")
}

pub fn dodecahedron() -> CombinatorialMap {
    icosahedron().dual().with_name("dodecahedron")
}

pub fn triakis_tetrahedron() -> CombinatorialMap {
    let t = tetrahedron();
    let all: Vec<usize> = (0..t.faces().len()).collect();
    t.stack_on_faces(&all).unwrap().with_name("triakis-tetrahedron")
}

pub fn triakis_octahedron() -> CombinatorialMap {
    let o = octahedron();
    let all: Vec<usize> = (0..o.faces().len()).collect();
    o.stack_on_faces(&all).unwrap().with_name("triakis-octahedron")
}

/// Vertex `(a, b)` is the cut point near corner `a` on the simplex edge `ab`.
pub fn truncated_tetrahedron() -> CombinatorialMap {
    let id = |a: usize, b: usize| a * 3 + if b < a { b } else { b - 1 };
    let mut faces = Vec::new();
    for a in 0..4 {
        faces.push((0..4).filter(|&b| b != a).map(|b| id(a, b)).collect());
    }
    for skip in 0..4 {
        let f: Vec<usize> = (0..4).filter(|&x| x != skip).collect();
        let (a, b, c) = (f[0], f[1], f[2]);
        faces.push(vec![id(a, b), id(b, a), id(b, c), id(c, b), id(c, a), id(a, c)]);
    }
    CombinatorialMap::new(12, faces).unwrap().with_name("truncated-tetrahedron")
}

pub fn prism(n: usize) -> Result<CombinatorialMap> {
    if n < 3 {
        return Err(Error::InvalidArgument("prism needs n >= 3".into()));
    }
    let mut faces = vec![(0..n).collect(), (n..2 * n).collect()];
    for i in 0..n {
        let j = (i + 1) % n;
        faces.push(vec![i, j, n + j, n + i]);
    }
    Ok(CombinatorialMap::new(2 * n, faces)?.with_name(format!("prism-{n}")))
}

pub fn antiprism(n: usize) -> Result<CombinatorialMap> {
    if n < 3 {
        return Err(Error::InvalidArgument("antiprism needs n >= 3".into()));
    }
    let mut faces = vec![(0..n).collect(), (n..2 * n).collect()];
    for i in 0..n {
        let j = (i + 1) % n;
        faces.push(vec![i, j, n + i]);
        faces.push(vec![n + i, j, n + j]);
    }
    Ok(CombinatorialMap::new(2 * n, faces)?.with_name(format!("antiprism-{n}")))
}

pub fn pyramid(n: usize) -> Result<CombinatorialMap> {
    if n < 3 {
        return Err(Error::InvalidArgument("pyramid needs n >= 3".into()));
    }
    let mut faces = vec![(0..n).collect::<Vec<_>>()];
    faces.extend((0..n).map(|i| vec![i, (i + 1) % n, n]));
    Ok(CombinatorialMap::new(n + 1, faces)?.with_name(format!("pyramid-{n}")))
}

pub fn bipyramid(n: usize) -> Result<CombinatorialMap> {
    if n < 3 {
        return Err(Error::InvalidArgument("bipyramid needs n >= 3".into()));
    }
    let mut faces = Vec::new();
    for i in 0..n {
        faces.push(vec![i, (i + 1) % n, n]);
        faces.push(vec![i, (i + 1) % n, n + 1]);
    }
    Ok(CombinatorialMap::new(n + 2, faces)?.with_name(format!("bipyramid-{n}")))
}

/// Cube vertices 0..8 plus face centers 8..14; one rhombus per cube edge.
pub fn rhombic_dodecahedron() -> CombinatorialMap {
    let c = cube();
    let faces = c
        .edges()
        .iter()
        .map(|&e| {
            let (f, g) = c.faces_of_edge(e).unwrap();
            vec![e.0, 8 + f, e.1, 8 + g]
        })
        .collect();
    CombinatorialMap::new(14, faces).unwrap().with_name("rhombic-dodecahedron")
}

/// Two cubes with one vertex cut from each, glued along the three dangling edges.
/// Simple and bipartite, with a three-edge cut that is not a vertex star.
pub fn glued_cubes() -> CombinatorialMap {
    let faces = vec![
        vec![0, 1, 3, 2],
        vec![0, 1, 5, 4],
        vec![0, 2, 6, 4],
        vec![6, 2, 3, 7, 11, 10],
        vec![6, 4, 5, 8, 12, 10],
        vec![3, 1, 5, 8, 9, 7],
        vec![10, 11, 13, 12],
        vec![8, 9, 13, 12],
        vec![7, 9, 13, 11],
    ];
    CombinatorialMap::new(14, faces).unwrap().with_name("glued-cubes")
}

pub fn cuboctahedron() -> CombinatorialMap {
    rhombic_dodecahedron().dual().with_name("cuboctahedron")
}

/// Tetrahedron with `depth` vertices stacked one onto another, always on the
/// newest facet.
pub fn stacked(depth: usize) -> CombinatorialMap {
    let mut m = tetrahedron();
    let mut target = 0;
    for _ in 0..depth {
        m = m.stack_on_faces(&[target]).unwrap();
        // the pyramid replaces face `target` by three triangles starting at the same index
        target += 2;
    }
    m.with_name(format!("stacked-{depth}"))
}

pub const NAMES: &[&str] = &[
    "tetrahedron",
    "cube",
    "octahedron",
    "dodecahedron",
    "icosahedron",
    "triakis-tetrahedron",
    "triakis-octahedron",
    "truncated-tetrahedron",
    "prism-3",
    "prism-4",
    "prism-5",
    "prism-6",
    "prism-7",
    "prism-8",
    "antiprism-4",
    "antiprism-5",
    "pyramid-4",
    "pyramid-5",
    "bipyramid-5",
    "rhombic-dodecahedron",
    "cuboctahedron",
    "glued-cubes",
    "stacked-1",
    "stacked-2",
    "stacked-3",
];

fn suffix(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.parse().ok()
}

/// Looks up a named combinatorial type; `simplex` is an alias of the tetrahedron.
pub fn named_map(name: &str) -> Result<CombinatorialMap> {
    Ok(match name {
        "tetrahedron" | "simplex" => tetrahedron(),
        "cube" => cube(),
        "octahedron" => octahedron(),
        "dodecahedron" => dodecahedron(),
        "icosahedron" => icosahedron(),
        "triakis-tetrahedron" => triakis_tetrahedron(),
        "triakis-octahedron" => triakis_octahedron(),
        "truncated-tetrahedron" => truncated_tetrahedron(),
        "rhombic-dodecahedron" => rhombic_dodecahedron(),
        "cuboctahedron" => cuboctahedron(),
        "glued-cubes" => glued_cubes(),
        _ => {
            if let Some(n) = suffix(name, "prism-") {
                prism(n)?
            } else if let Some(n) = suffix(name, "antiprism-") {
                antiprism(n)?
            } else if let Some(n) = suffix(name, "bipyramid-") {
                bipyramid(n)?
            } else if let Some(n) = suffix(name, "pyramid-") {
                pyramid(n)?
            } else if let Some(k) = suffix(name, "stacked-") {
                stacked(k)
            } else {
                return Err(Error::InvalidArgument(format!("unknown polytope {name:?}")));
            }
        }
    })
}

pub fn all_maps() -> Vec<CombinatorialMap> {
    NAMES.iter().map(|n| named_map(n).unwrap()).collect()
}

fn config(points: Vec<[i64; 3]>, radius_sq: i64, faces: Vec<Vec<usize>>) -> PointConfiguration {
    PointConfiguration::new(3, points.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect())
        .and_then(|pc| pc.with_sphere(SphereRef::centered(3, int(radius_sq))?))
        .and_then(|pc| pc.with_claimed_faces(faces))
        .unwrap()
}

/// Exact realizations with their circumscribing sphere, vertex labels matching [`named_map`].
pub fn named_points(name: &str) -> Result<PointConfiguration> {
    Ok(match name {
        "tetrahedron" | "simplex" => {
            config(vec![[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], 3, tetrahedron().faces().to_vec())
        }
        "cube" => {
            let pts = (0..8).map(|i| [2 * ((i >> 2) & 1) - 1, 2 * ((i >> 1) & 1) - 1, 2 * (i & 1) - 1]).collect();
            config(pts, 3, cube().faces().to_vec())
        }
        "octahedron" => {
            let pts = vec![[-1, 0, 0], [1, 0, 0], [0, -1, 0], [0, 1, 0], [0, 0, -1], [0, 0, 1]];
            config(pts, 1, octahedron().faces().to_vec())
        }
        _ => return Err(Error::InvalidArgument(format!("no coordinates stored for {name:?}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_counts() {
        let expect = [
            ("triakis-tetrahedron", 8, 18, 12),
            ("truncated-tetrahedron", 12, 18, 8),
            ("dodecahedron", 20, 30, 12),
            ("icosahedron", 12, 30, 20),
            ("rhombic-dodecahedron", 14, 24, 12),
            ("cuboctahedron", 12, 24, 14),
            ("triakis-octahedron", 14, 36, 24),
            ("stacked-3", 7, 15, 10),
            ("antiprism-5", 10, 20, 12),
        ];
        for (name, v, e, f) in expect {
            let m = named_map(name).unwrap();
            assert_eq!((m.n_vertices(), m.edges().len(), m.faces().len()), (v, e, f), "{name}");
        }
        assert!(all_maps().len() >= 20);
    }

    #[test]
    fn hand_built_truncation_is_dual_to_triakis() {
        let t = truncated_tetrahedron();
        assert!(t.dual().isomorphism_to(&triakis_tetrahedron()).is_some());
        let sizes: Vec<usize> = t.faces().iter().map(Vec::len).collect();
        assert_eq!(sizes.iter().filter(|&&s| s == 3).count(), 4);
        assert_eq!(sizes.iter().filter(|&&s| s == 6).count(), 4);
    }

    #[test]
    fn stacked_vertices_have_expected_degrees() {
        // each stacking adds one degree-3 vertex and raises three degrees
        let d = stacked(2).degrees();
        assert_eq!(d.iter().sum::<usize>(), 2 * 12);
        assert_eq!(d.iter().filter(|&&x| x == 3).count(), 2);
    }

    #[test]
    fn stored_coordinates_lie_on_their_sphere() {
        for name in ["tetrahedron", "cube", "octahedron"] {
            let pc = named_points(name).unwrap();
            let s = pc.sphere().unwrap().clone();
            assert!(pc.squared_radii(&s).iter().all(|r| *r == s.radius_sq), "{name}");
        }
    }
}
