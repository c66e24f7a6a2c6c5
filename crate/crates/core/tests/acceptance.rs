//! Acceptance criteria, one line of output each. Runs without the libtest
//! harness so the summary is always printed.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;

use scribe_core::budgets::Budgets;
use scribe_core::caps::{near_uniform_caps, cap_intersection_graph, ply_depth, random_caps, random_hyperplane_separator, CapSystem};
use scribe_core::certificate::{Answer, Certificate, DualConclusion, Verdict};
use scribe_core::combinatorial::{
    degree_range_check, hamiltonian_cycle, independent_set_obstruction, is_one_tough, simple_polytope_characterization,
    steinitz_paint_test,
};
use scribe_core::corpus::{all_maps, named_map, named_points};
use scribe_core::geometry::{check_ij_scribed, check_k_scribed, default_parameters, face_cuts, generate_cyclic_trig, k_sets};
use scribe_core::hrs::{decide_circumscribable, decide_inscribable, decide_quadric_inscribable, relabel_to_dual, Quadric};
use scribe_core::hull::{combinations, facet_enumeration, HullBudget};
use scribe_core::points::SphereRef;
use scribe_core::rational::{int, norm_sq, to_f64, Rational};
use scribe_core::{CombinatorialMap, Edge, Graph};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Oracle: every simple cycle of `g` as its edge set, by plain DFS from each
/// smallest vertex (each cycle is found twice, once per direction).
fn all_cycles(g: &Graph) -> BTreeSet<BTreeSet<Edge>> {
    fn go(g: &Graph, path: &mut Vec<usize>, out: &mut BTreeSet<BTreeSet<Edge>>) {
        let (root, last) = (path[0], *path.last().unwrap());
        for &w in g.neighbors(last) {
            if w == root && path.len() >= 3 {
                let mut edges: BTreeSet<Edge> = path.windows(2).map(|p| Edge::new(p[0], p[1])).collect();
                edges.insert(Edge::new(last, root));
                out.insert(edges);
            } else if w > root && !path.contains(&w) {
                path.push(w);
                go(g, path, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    for r in 0..g.n() {
        go(g, &mut vec![r], &mut out);
    }
    out
}

/// Checks an angle assignment from scratch: facial sums exactly 2 and every
/// other simple cycle strictly above 2, all weights in (0, 1).
fn check_angles(m: &CombinatorialMap, v: &Verdict) -> Result<usize, String> {
    let Some(Certificate::AngleAssignment { polar, weights, .. }) = v.certificates.iter().find(|c| c.kind() == "AngleAssignment") else {
        return Err(format!("{:?}: no angle assignment", m.name()));
    };
    let (system, label): (CombinatorialMap, BTreeMap<Edge, Edge>) = if *polar {
        (m.dual(), m.dual_edge_correspondence())
    } else {
        (m.clone(), m.edges().iter().map(|&e| (e, e)).collect())
    };
    let w = |e: &Edge| weights.get(&label[e]).cloned().ok_or_else(|| format!("missing weight for {e}"));
    for x in weights.values() {
        ensure(*x > int(0) && *x < int(1), || format!("weight {x} outside (0, 1)"))?;
    }
    let faces: BTreeSet<BTreeSet<Edge>> = system.faces().iter().map(|f| (0..f.len()).map(|i| Edge::new(f[i], f[(i + 1) % f.len()])).collect()).collect();
    let cycles = all_cycles(&system.graph());
    for c in &cycles {
        let sum = c.iter().map(w).collect::<Result<Vec<Rational>, String>>()?.into_iter().sum::<Rational>();
        if faces.contains(c) {
            ensure(sum == int(2), || format!("face sums to {sum}"))?;
        } else {
            ensure(sum > int(2), || format!("non-facial cycle sums to {sum}"))?;
        }
    }
    Ok(cycles.len())
}

fn name(m: &CombinatorialMap) -> String {
    m.name().unwrap_or("?").to_string()
}

fn criterion_1() -> Check {
    let b = Budgets::default();
    let tt = named_map("triakis-tetrahedron").unwrap();
    let obstruction = independent_set_obstruction(&tt.graph(), &b).map_err(|e| e.to_string())?.ok_or("no obstruction for the triakis tetrahedron")?;
    obstruction.verify(&tt, &b).map_err(|e| e.to_string())?;
    let v = decide_inscribable(&tt, &b);
    ensure(v.answer == Answer::No, || "triakis tetrahedron not NO".into())?;
    let witness = v.certificates.iter().find(|c| c.kind() == "LpDualWitness").ok_or("no dual witness")?;
    match witness {
        Certificate::LpDualWitness { conclusion: DualConclusion::Bound { bound }, .. } => {
            ensure(*bound <= int(0), || format!("dual bound {bound} > 0"))?
        }
        Certificate::LpDualWitness { conclusion: DualConclusion::Infeasible, .. } => {}
        _ => unreachable!(),
    }
    witness.verify(&tt, &b).map_err(|e| e.to_string())?;
    let trunc = named_map("truncated-tetrahedron").unwrap();
    let v = decide_circumscribable(&trunc, &b);
    ensure(v.answer == Answer::No, || "truncated tetrahedron circumscribable".into())?;
    v.verify(&trunc, &b).map_err(|e| e.to_string())?;
    let mut cycles = 0;
    for n in ["tetrahedron", "cube", "octahedron", "dodecahedron", "icosahedron"] {
        let m = named_map(n).unwrap();
        for v in [decide_inscribable(&m, &b), decide_circumscribable(&m, &b)] {
            ensure(v.answer == Answer::Yes, || format!("{n}: {:?} is {}", v.property, v.answer))?;
            v.verify(&m, &b).map_err(|e| e.to_string())?;
            cycles += check_angles(&m, &v)?;
        }
    }
    Ok(format!("2 NO verdicts certified, 10 angle assignments checked over {cycles} cycles"))
}

fn criterion_2() -> Check {
    let b = Budgets::default();
    let maps = all_maps();
    for m in &maps {
        let d = m.dual();
        let v = decide_inscribable(m, &b);
        let w = decide_circumscribable(&d, &b);
        ensure(v.answer == w.answer, || format!("{}: inscribable {} but dual circumscribable {}", name(m), v.answer, w.answer))?;
        let back = decide_inscribable(&d, &b);
        let forth = decide_circumscribable(m, &b);
        ensure(back.answer == forth.answer, || format!("{}: reverse direction differs", name(m)))?;
        for c in &v.certificates {
            relabel_to_dual(c, m).verify(&d, &b).map_err(|e| format!("{}: transferred {} fails: {e}", name(m), c.kind()))?;
        }
    }
    Ok(format!("{} maps, both directions, certificates transferred", maps.len()))
}

fn criterion_3() -> Check {
    let b = Budgets::default();
    let maps = all_maps();
    ensure(maps.len() >= 20, || "corpus too small".into())?;
    for n in ["prism-3", "prism-8", "stacked-3", "triakis-octahedron"] {
        ensure(maps.iter().any(|m| m.name() == Some(n)), || format!("{n} missing from corpus"))?;
    }
    let mut yes = 0;
    for m in &maps {
        if decide_inscribable(m, &b).answer == Answer::Yes {
            yes += 1;
            let g = m.graph();
            ensure(independent_set_obstruction(&g, &b).map_err(|e| e.to_string())?.is_none(), || format!("{}: independent-set obstruction", name(m)))?;
            ensure(is_one_tough(&g, b.subsets).map_err(|e| e.to_string())?.is_none(), || format!("{}: toughness violation", name(m)))?;
            ensure(steinitz_paint_test(&m.dual(), &b).map_err(|e| e.to_string())?.is_none(), || format!("{}: dual paint obstruction", name(m)))?;
        }
        if decide_circumscribable(m, &b).answer == Answer::Yes {
            ensure(steinitz_paint_test(m, &b).map_err(|e| e.to_string())?.is_none(), || format!("{}: paint obstruction", name(m)))?;
        }
    }
    Ok(format!("{} maps, {yes} inscribable, no obstruction fired on them", maps.len()))
}

fn criterion_4() -> Check {
    let b = Budgets::default();
    let mut applicable = Vec::new();
    for m in all_maps() {
        let g = m.graph();
        if g.vertex_connectivity().0 >= 4 || degree_range_check(&g, 4, 6) {
            let v = decide_inscribable(&m, &b);
            ensure(v.answer == Answer::Yes, || format!("{}: {}", name(&m), v.answer))?;
            applicable.push(name(&m));
        }
    }
    ensure(!applicable.is_empty(), || "no map satisfies a sufficient condition".into())?;
    Ok(format!("{} maps ({})", applicable.len(), applicable.join(", ")))
}

fn criterion_5() -> Check {
    let b = Budgets::default();
    let mut checked = Vec::new();
    for m in all_maps() {
        if let Some(v) = simple_polytope_characterization(&m, &b).map_err(|e| e.to_string())? {
            let hrs = decide_inscribable(&m, &b);
            ensure(v.answer == hrs.answer, || format!("{}: characterization {} vs angle system {}", name(&m), v.answer, hrs.answer))?;
            v.verify(&m, &b).map_err(|e| e.to_string())?;
            checked.push(format!("{}={}", name(&m), v.answer));
        }
    }
    Ok(format!("{} simple maps agree: {}", checked.len(), checked.join(" ")))
}

fn criterion_6() -> Check {
    let b = Budgets::default();
    let cube = named_map("cube").unwrap();
    let v = decide_quadric_inscribable(&cube, Quadric::Hyperboloid, &b);
    ensure(v.answer == Answer::Yes, || "cube not hyperboloid-inscribable".into())?;
    let Some(Certificate::HamiltonianCycle { cycle }) = v.certificates.iter().find(|c| c.kind() == "HamiltonianCycle") else {
        return Err("no Hamiltonian certificate".into());
    };
    let g = cube.graph();
    let distinct: BTreeSet<_> = cycle.iter().collect();
    ensure(cycle.len() == 8 && distinct.len() == 8, || "cycle does not visit every vertex once".into())?;
    ensure((0..8).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % 8])), || "cycle uses a non-edge".into())?;
    for n in ["triakis-tetrahedron", "rhombic-dodecahedron"] {
        let m = named_map(n).unwrap();
        let v = decide_quadric_inscribable(&m, Quadric::Hyperboloid, &b);
        ensure(v.answer == Answer::No, || format!("{n}: {}", v.answer))?;
    }
    // the triakis tetrahedron fails on sphere-inscribability, not on Hamiltonicity
    ensure(hamiltonian_cycle(&named_map("triakis-tetrahedron").unwrap().graph(), &b).map_err(|e| e.to_string())?.is_some(), || "no cycle found".into())?;
    Ok("cube YES with Hamiltonian cycle; triakis tetrahedron and rhombic dodecahedron NO".into())
}

/// Oracle: Gale's evenness condition for cyclic 4-polytopes.
fn gale(n: usize) -> BTreeSet<Vec<usize>> {
    combinations(n, 4)
        .filter(|s| {
            let out: Vec<usize> = (0..n).filter(|i| !s.contains(i)).collect();
            out.iter().all(|&i| out.iter().filter(|&&j| j > i).all(|&j| s.iter().filter(|&&x| i < x && x < j).count() % 2 == 0))
        })
        .collect()
}

fn criterion_7() -> Check {
    for n in 6..=10 {
        let pc = generate_cyclic_trig(4, &default_parameters(n)).map_err(|e| e.to_string())?;
        ensure(pc.points().iter().all(|p| norm_sq(p) == int(2)), || format!("n = {n}: vertex off the sphere"))?;
        let lat = facet_enumeration(&pc, HullBudget::default()).map_err(|e| e.to_string())?;
        ensure(lat.facets().len() == n * (n - 3) / 2, || format!("n = {n}: {} facets", lat.facets().len()))?;
        ensure(lat.faces(1).len() == n * (n - 1) / 2, || format!("n = {n}: not 2-neighborly"))?;
        ensure(lat.facet_set() == gale(n), || format!("n = {n}: facets differ from Gale evenness"))?;
    }
    Ok("n = 6..10 on the sphere, n(n-3)/2 facets, 2-neighborly, Gale lattice".into())
}

fn criterion_8() -> Check {
    let pc = generate_cyclic_trig(4, &default_parameters(8)).map_err(|e| e.to_string())?;
    let budget = HullBudget::default();
    let facets = facet_enumeration(&pc, budget).map_err(|e| e.to_string())?.facet_set();
    let fives = k_sets(&pc, 5, budget).map_err(|e| e.to_string())?;
    let threes: BTreeSet<Vec<usize>> = k_sets(&pc, 3, budget).map_err(|e| e.to_string())?.into_iter().collect();
    ensure(!fives.is_empty(), || "no 5-sets".into())?;
    // a 5-set is separable exactly when its complementary 3-set is
    let complements: BTreeSet<Vec<usize>> = fives.iter().map(|s| (0..8).filter(|i| !s.contains(i)).collect()).collect();
    ensure(complements == threes, || "5-sets and complementary 3-sets disagree".into())?;
    let sphere = SphereRef::centered(4, int(2)).unwrap();
    let b = Budgets::default();
    for s in &fives {
        let f = facets.iter().find(|f| f.iter().all(|v| s.contains(v))).ok_or_else(|| format!("5-set {s:?} contains no facet"))?;
        ensure(face_cuts(&pc, f, &sphere, &b).map_err(|e| e.to_string())?, || format!("facet {f:?} misses the ball"))?;
    }
    Ok(format!("{} of {} 5-subsets are 5-sets; each contains a facet that cuts the ball", fives.len(), combinations(8, 5).count()))
}

fn criterion_9() -> Check {
    let b = Budgets::default();
    let tet = named_points("tetrahedron").unwrap();
    let cube = named_points("cube").unwrap();
    let s = |r2: i64| SphereRef::centered(3, int(r2)).unwrap();
    let lt = facet_enumeration(&tet, b.hull).map_err(|e| e.to_string())?;
    let lc = facet_enumeration(&cube, b.hull).map_err(|e| e.to_string())?;
    let checks = [
        ("tetrahedron (0,2)", check_ij_scribed(&tet, &lt, &s(3), 0, 2, &b, false)),
        ("cube (0,2)", check_ij_scribed(&cube, &lc, &s(3), 0, 2, &b, false)),
        ("cube r^2=1 2-scribed", check_k_scribed(&cube, &lc, &s(1), 2, &b, false)),
        ("cube r^2=2 1-scribed", check_k_scribed(&cube, &lc, &s(2), 1, &b, false)),
    ];
    for (what, r) in checks {
        ensure(r.map_err(|e| e.to_string())?.holds, || format!("{what} fails"))?;
    }
    Ok("tetrahedron and cube (0,2)-scribed, cube 2-scribed and 1-scribed".into())
}

/// Oracle: best depth over Fibonacci samples plus rings around every circle
/// crossing, all computed in floating point.
fn sampled_depth(cs: &CapSystem) -> usize {
    let caps: Vec<(Vec<f64>, f64)> = cs.caps().iter().map(|c| (c.axis_unit_f64(), c.cos_radius_f64())).collect();
    let depth = |x: &[f64]| caps.iter().filter(|(a, c)| a[0] * x[0] + a[1] * x[1] + a[2] * x[2] > c + 1e-12).count();
    let normalize = |v: [f64; 3]| {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / n, v[1] / n, v[2] / n]
    };
    let samples = 100_000;
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut best = (0..samples)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / samples as f64;
            let r = (1.0 - z * z).sqrt();
            depth(&[r * (golden * i as f64).cos(), r * (golden * i as f64).sin(), z])
        })
        .max()
        .unwrap_or(0);
    for (i, (a, ca)) in caps.iter().enumerate() {
        for (b, cb) in &caps[i + 1..] {
            // x = alpha a + beta b + t (a × b) with a.x = ca, b.x = cb, |x| = 1
            let g = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
            let det = 1.0 - g * g;
            if det < 1e-12 {
                continue;
            }
            let alpha = (ca - cb * g) / det;
            let beta = (cb - ca * g) / det;
            let q = [alpha * a[0] + beta * b[0], alpha * a[1] + beta * b[1], alpha * a[2] + beta * b[2]];
            let m = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
            let rest = (1.0 - (q[0] * q[0] + q[1] * q[1] + q[2] * q[2])) / det;
            if rest <= 0.0 {
                continue;
            }
            for sign in [1.0, -1.0] {
                let t = sign * rest.sqrt();
                let x = [q[0] + t * m[0], q[1] + t * m[1], q[2] + t * m[2]];
                let u = normalize(m);
                let v = normalize([x[1] * u[2] - x[2] * u[1], x[2] * u[0] - x[0] * u[2], x[0] * u[1] - x[1] * u[0]]);
                for k in 0..32 {
                    let phi = k as f64 * std::f64::consts::PI / 16.0;
                    let e = 1e-5;
                    let y = normalize([
                        x[0] + e * (phi.cos() * u[0] + phi.sin() * v[0]),
                        x[1] + e * (phi.cos() * u[1] + phi.sin() * v[1]),
                        x[2] + e * (phi.cos() * u[2] + phi.sin() * v[2]),
                    ]);
                    best = best.max(depth(&y));
                }
            }
        }
    }
    best
}

fn criterion_10() -> Check {
    let seed = 7;
    let mut medians = Vec::new();
    for n in [125, 500] {
        let cs = near_uniform_caps(n, seed).map_err(|e| e.to_string())?;
        // pairwise disjoint closed caps form a 1-ply system
        ensure(cap_intersection_graph(&cs).edge_count() == 0, || format!("n = {n}: caps overlap"))?;
        let report = random_hyperplane_separator(&cs, 200, seed, true).map_err(|e| e.to_string())?;
        medians.push(to_f64(&report.median_hits));
    }
    let ratio = medians[1] / medians[0];
    ensure((1.4..=3.0).contains(&ratio), || format!("median ratio {ratio:.3} outside [1.4, 3.0] (medians {medians:?})"))?;
    let mut depths = Vec::new();
    for (seed, n) in [(1u64, 20usize), (2, 25), (3, 30), (4, 35), (5, 40)] {
        let cs = random_caps(n, seed, 0.6, 0.95).map_err(|e| e.to_string())?;
        let exact = ply_depth(&cs).map_err(|e| e.to_string())?.depth;
        let sampled = sampled_depth(&cs);
        ensure(exact == sampled, || format!("seed {seed}: exact {exact}, sampled {sampled}"))?;
        depths.push(exact);
    }
    Ok(format!(
        "medians {} and {} (ratio {ratio:.3}, C = {:.3}); ply {depths:?} matches sampling",
        medians[0],
        medians[1],
        medians[1] / 500f64.sqrt()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("named-example verdicts", criterion_1),
        ("duality", criterion_2),
        ("soundness cross-check", criterion_3),
        ("sufficient conditions", criterion_4),
        ("simple-polytope characterization", criterion_5),
        ("quadric criterion", criterion_6),
        ("inscribed cyclic construction", criterion_7),
        ("k-set property", criterion_8),
        ("scribedness", criterion_9),
        ("caps and separator", criterion_10),
    ];
    let mut failed = 0;
    for (i, (what, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {what}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {what}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
