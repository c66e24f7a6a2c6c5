use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::sample::subsequence;

use scribe_core::budgets::Budgets;
use scribe_core::caps::{ply_depth, ply_lower_bound, random_caps, rational_unit_vector, visibility_cap};
use scribe_core::certificate::{Answer, Certificate};
use scribe_core::combinatorial::{independent_set_obstruction, is_one_supertough, is_one_tough, steinitz_paint_test};
use scribe_core::corpus::{antiprism, bipyramid, prism, pyramid, tetrahedron};
use scribe_core::geometry::{face_avoids, face_status};
use scribe_core::hrs::{decide_circumscribable, decide_inscribable, enumerate_simple_circuits, AngleSystem, MarginResult};
use scribe_core::hull::{facet_enumeration, HullBudget};
use scribe_core::points::{PointConfiguration, SphereRef};
use scribe_core::rational::{dot, frac, int, Rational};
use scribe_core::CombinatorialMap;

/// Small 3-polytope maps: stacked tetrahedra, prism-like families and their duals.
fn polytope_map() -> impl Strategy<Value = CombinatorialMap> {
    let stacked = prop::collection::vec(0usize..64, 0..6).prop_map(|picks| {
        picks.into_iter().fold(tetrahedron(), |m, p| {
            let f = p % m.faces().len();
            m.stack_on_faces(&[f]).unwrap()
        })
    });
    let family = (0usize..4, 3usize..8).prop_map(|(kind, n)| match kind {
        0 => prism(n).unwrap(),
        1 => antiprism(n.max(4)).unwrap(),
        2 => pyramid(n).unwrap(),
        _ => bipyramid(n).unwrap(),
    });
    (prop_oneof![stacked, family], any::<bool>()).prop_map(|(m, dual)| if dual { m.dual() } else { m })
}

/// Distinct integer points in a small box; degenerate spans are skipped by the caller.
fn point_cloud() -> impl Strategy<Value = PointConfiguration> {
    prop::collection::btree_set(prop::array::uniform3(-4i64..=4), 5..9)
        .prop_map(|pts| PointConfiguration::new(3, pts.into_iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()).unwrap())
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn euler_and_handshake(m in polytope_map()) {
        let (v, e, f) = (m.n_vertices(), m.edges().len(), m.faces().len());
        prop_assert_eq!(v + f, e + 2);
        prop_assert_eq!(m.faces().iter().map(Vec::len).sum::<usize>(), 2 * e);
        prop_assert_eq!(m.degrees().iter().sum::<usize>(), 2 * e);
    }

    #[test]
    fn dual_is_an_involution(m in polytope_map()) {
        let dd = m.dual().dual();
        prop_assert!(dd.isomorphism_to(&m).is_some());
        prop_assert_eq!(m.dual().n_vertices(), m.faces().len());
    }

    #[test]
    fn paint_obstructions_are_genuine(m in polytope_map()) {
        let b = Budgets::default();
        if let Some(Certificate::PaintObstruction { black_faces, n_faces, .. }) = steinitz_paint_test(&m, &b).unwrap() {
            prop_assert!(2 * black_faces.len() >= n_faces);
            for (i, &f) in black_faces.iter().enumerate() {
                let fe: BTreeSet<_> = m.face_edges(f).into_iter().collect();
                for &g in &black_faces[i + 1..] {
                    prop_assert!(m.face_edges(g).iter().all(|e| !fe.contains(e)), "faces {} and {} share an edge", f, g);
                }
            }
        }
    }

    #[test]
    fn supertough_implies_tough(m in polytope_map()) {
        let g = m.graph();
        prop_assume!(g.n() <= 16);
        if is_one_supertough(&g, 16).unwrap().is_none() {
            prop_assert!(is_one_tough(&g, 16).unwrap().is_none());
        }
    }

    #[test]
    fn verdicts_are_certified_and_sound(m in polytope_map()) {
        let b = Budgets::default();
        let ins = decide_inscribable(&m, &b);
        let circ = decide_circumscribable(&m, &b);
        prop_assert_ne!(ins.answer, Answer::Unknown);
        ins.verify(&m, &b).unwrap();
        circ.verify(&m, &b).unwrap();
        if ins.answer == Answer::Yes {
            prop_assert!(independent_set_obstruction(&m.graph(), &b).unwrap().is_none());
            prop_assert!(steinitz_paint_test(&m.dual(), &b).unwrap().is_none());
        }
        if circ.answer == Answer::Yes {
            prop_assert!(steinitz_paint_test(&m, &b).unwrap().is_none());
        }
    }

    #[test]
    fn margin_never_grows_with_more_rows(m in polytope_map(), polar in any::<bool>(), picks in subsequence((0..40).collect::<Vec<usize>>(), 0..12)) {
        let sys = AngleSystem::new(&m, polar);
        let circuits: Vec<Vec<usize>> = enumerate_simple_circuits(sys.system_map(), 100_000)
            .unwrap()
            .into_iter()
            .filter(|c| !c.facial)
            .map(|c| c.vertices)
            .collect();
        prop_assume!(!circuits.is_empty());
        let rows: Vec<Vec<usize>> = picks.iter().map(|&p| circuits[p % circuits.len()].clone()).collect();
        let margin = |k: usize| match sys.solve_max_margin(&rows[..k]) {
            MarginResult::Optimal { margin, .. } => Some(margin),
            MarginResult::Infeasible { .. } => None,
        };
        let mut previous = margin(0);
        for k in 1..=rows.len() {
            let next = margin(k);
            // None stands for minus infinity and must stay there
            prop_assert!(next <= previous, "margin rose from {:?} to {:?}", previous, next);
            previous = next;
        }
    }

    #[test]
    fn facets_follow_relabelling(pc in point_cloud(), seed in any::<u64>()) {
        let Ok(lat) = facet_enumeration(&pc, HullBudget::default()) else { return Ok(()) };
        let n = pc.len();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by_key(|&i| (seed.rotate_left(i as u32 * 7) ^ i as u64, i));
        let moved = facet_enumeration(&pc.permuted(&perm), HullBudget::default()).unwrap();
        let expected: BTreeSet<Vec<usize>> = lat
            .facets()
            .iter()
            .map(|f| {
                let mut g: Vec<usize> = f.iter().map(|&v| perm[v]).collect();
                g.sort_unstable();
                g
            })
            .collect();
        prop_assert_eq!(moved.facet_set(), expected);
        prop_assert!(lat.ridge_degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn scaling_outward_keeps_faces_clear(pc in point_cloud(), r2 in 1i64..12, num in 5i64..12) {
        let Ok(lat) = facet_enumeration(&pc, HullBudget::default()) else { return Ok(()) };
        let b = Budgets::default();
        let s = SphereRef::centered(3, frac(r2, 4)).unwrap();
        let big = pc.scaled(&frac(num, 4));
        for rank in 0..3 {
            for face in lat.faces(rank) {
                let status = face_status(&pc, rank, face, &s, &b).unwrap();
                if status.tangent {
                    prop_assert!(status.avoids, "tangent face {:?} does not avoid", face);
                }
                if status.avoids {
                    prop_assert!(face_avoids(&big, face, &s, &b).unwrap());
                }
            }
        }
    }

    #[test]
    fn visibility_cap_is_the_visible_region(v in prop::array::uniform3(-6i64..=6), x in prop::array::uniform3(-1.0f64..1.0)) {
        let v: Vec<Rational> = v.iter().map(|&c| frac(c, 2)).collect();
        let cap = match visibility_cap(&v) {
            Ok(cap) => cap,
            Err(_) => { prop_assume!(dot(&v, &v) <= int(1)); return Ok(()) }
        };
        prop_assume!(x.iter().any(|c| c.abs() > 1e-3));
        let p = rational_unit_vector(x, 64);
        prop_assert_eq!(dot(&p, &p), int(1));
        prop_assert_eq!(cap.contains(&p), dot(&v, &p) >= int(1));
    }

    #[test]
    fn sampling_never_beats_exact_ply(seed in any::<u64>(), n in 2usize..14) {
        let cs = random_caps(n, seed, 0.5, 0.95).unwrap();
        let exact = ply_depth(&cs).unwrap();
        prop_assert!(ply_lower_bound(&cs, 2_000, seed).depth <= exact.depth);
        prop_assert!(exact.depth >= 1 && exact.depth <= n);
        for (i, a) in cs.caps().iter().enumerate() {
            for b in &cs.caps()[i + 1..] {
                prop_assert_eq!(a.intersects(b), b.intersects(a));
            }
        }
    }
}
