//! The full analysis pipeline over one combinatorial map and its report.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::budgets::Budgets;
use crate::certificate::{Answer, Certificate, Property, Verdict};
use crate::combinatorial::{
    degree_range_check, independent_set_obstruction, is_one_supertough, is_one_tough, simple_polytope_characterization,
    steinitz_paint_test, vertex_connectivity,
};
use crate::error::Result;
use crate::hrs::{decide_circumscribable, decide_inscribable, quadric_from};
use crate::map::CombinatorialMap;

pub const SCHEMA_VERSION: u32 = 1;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputIdentity {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub sha256: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Violated,
    Unknown,
    NotApplicable,
}

/// One step of the pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TestOutcome {
    pub test: &'static str,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<Certificate>,
}

impl TestOutcome {
    fn new(test: &'static str, status: Status, detail: impl Into<String>) -> Self {
        TestOutcome { test, status, detail: detail.into(), certificates: Vec::new() }
    }

    fn with(mut self, cert: Certificate) -> Self {
        self.certificates.push(cert);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub inscribable: Verdict,
    pub circumscribable: Verdict,
    pub hyperboloid: Verdict,
    pub cylinder: Verdict,
}

impl Verdicts {
    pub fn all(&self) -> [&Verdict; 4] {
        [&self.inscribable, &self.circumscribable, &self.hyperboloid, &self.cylinder]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub input: InputIdentity,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub budgets: Budgets,
    pub tests: Vec<TestOutcome>,
    pub verdicts: Verdicts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificates_verified: Option<bool>,
}

fn answer_status(a: Answer) -> Status {
    match a {
        Answer::Yes => Status::Holds,
        Answer::No => Status::Violated,
        Answer::Unknown => Status::Unknown,
    }
}

/// Falls back on combinatorial evidence when the angle system gave no answer,
/// and attaches every obstruction to a NO.
fn merge(mut verdict: Verdict, obstructions: &[Certificate], sufficient: Option<(&str, Vec<Certificate>)>) -> Verdict {
    if verdict.answer == Answer::Unknown {
        if !obstructions.is_empty() {
            verdict.answer = Answer::No;
            verdict.notes.push("decided by a combinatorial obstruction".into());
        } else if let Some((why, certs)) = sufficient {
            verdict.answer = Answer::Yes;
            verdict.notes.push(format!("decided by a sufficient condition: {why}"));
            verdict.certificates.extend(certs);
        }
    }
    match verdict.answer {
        Answer::No => verdict.certificates.extend(obstructions.iter().cloned()),
        Answer::Yes if !obstructions.is_empty() => {
            verdict.notes.push("inconsistent evidence: an obstruction was found for a YES".into())
        }
        _ => {}
    }
    verdict
}

/// Runs every test in a fixed order and never stops on a verdict.
pub fn analyze(m: &CombinatorialMap, input: &[u8], budgets: &Budgets) -> AnalysisReport {
    let g = m.graph();
    let mut tests = Vec::new();
    tests.push(TestOutcome::new(
        "validation",
        Status::Holds,
        format!("3-connected planar map, V = {}, E = {}, F = {}", m.n_vertices(), m.edges().len(), m.faces().len()),
    ));

    let mut insc_obstructions = Vec::new();
    let mut circ_obstructions = Vec::new();
    let budget_note = |name: &'static str, e: crate::error::Error| TestOutcome::new(name, Status::Unknown, e.to_string());

    tests.push(match independent_set_obstruction(&g, budgets) {
        Ok(Some(c)) => {
            insc_obstructions.push(c.clone());
            TestOutcome::new("independent_set", Status::Violated, "independent set too large: not inscribable").with(c)
        }
        Ok(None) => TestOutcome::new("independent_set", Status::Holds, "no independent-set obstruction"),
        Err(e) => budget_note("independent_set", e),
    });
    tests.push(match steinitz_paint_test(m, budgets) {
        Ok(Some(c)) => {
            circ_obstructions.push(c.clone());
            TestOutcome::new("paint", Status::Violated, "more than half the faces can be painted: not circumscribable").with(c)
        }
        Ok(None) => TestOutcome::new("paint", Status::Holds, "no painting obstruction"),
        Err(e) => budget_note("paint", e),
    });
    tests.push(match is_one_tough(&g, budgets.subsets) {
        Ok(Some(c)) => {
            insc_obstructions.push(c.clone());
            TestOutcome::new("one_tough", Status::Violated, "graph is not 1-tough: not inscribable").with(c)
        }
        Ok(None) => TestOutcome::new("one_tough", Status::Holds, "graph is 1-tough"),
        Err(e) => budget_note("one_tough", e),
    });
    tests.push(match is_one_supertough(&g, budgets.subsets) {
        Ok(Some(c)) => TestOutcome::new("one_supertough", Status::Violated, "graph is not 1-supertough").with(c),
        Ok(None) => TestOutcome::new("one_supertough", Status::Holds, "graph is 1-supertough"),
        Err(e) => budget_note("one_supertough", e),
    });

    let connectivity = vertex_connectivity(&g);
    let k = match &connectivity {
        Certificate::ConnectivityWitness { connectivity, .. } => *connectivity,
        _ => unreachable!("vertex_connectivity returns a connectivity witness"),
    };
    let four_connected = k >= 4;
    let detail = if four_connected { format!("{k}-connected: inscribable") } else { format!("{k}-connected") };
    tests.push(TestOutcome::new("connectivity", Status::Holds, detail).with(connectivity.clone()));
    let degrees_ok = degree_range_check(&g, 4, 6);
    tests.push(TestOutcome::new(
        "degree_range",
        if degrees_ok { Status::Holds } else { Status::NotApplicable },
        if degrees_ok { "all degrees in [4, 6]: inscribable" } else { "some degree outside [4, 6]" },
    ));

    let simple = match simple_polytope_characterization(m, budgets) {
        Ok(Some(v)) => {
            let mut t = TestOutcome::new("simple_characterization", answer_status(v.answer), format!("simple polytope: inscribable {}", v.answer));
            t.certificates = v.certificates.clone();
            tests.push(t);
            Some(v)
        }
        Ok(None) => {
            tests.push(TestOutcome::new("simple_characterization", Status::NotApplicable, "not a simple polytope"));
            None
        }
        Err(e) => {
            tests.push(budget_note("simple_characterization", e));
            None
        }
    };

    let hrs_insc = decide_inscribable(m, budgets);
    let mut t = TestOutcome::new("angle_system_inscribable", answer_status(hrs_insc.answer), format!("inscribable {}", hrs_insc.answer));
    t.certificates = hrs_insc.certificates.clone();
    tests.push(t);
    let hrs_circ = decide_circumscribable(m, budgets);
    let mut t = TestOutcome::new("angle_system_circumscribable", answer_status(hrs_circ.answer), format!("circumscribable {}", hrs_circ.answer));
    t.certificates = hrs_circ.certificates.clone();
    tests.push(t);

    let mut sufficient: Option<(&str, Vec<Certificate>)> = None;
    if four_connected {
        sufficient = Some(("4-connected graph", vec![connectivity]));
    } else if degrees_ok {
        sufficient = Some(("all degrees in [4, 6]", Vec::new()));
    }
    let mut inscribable = hrs_insc;
    if inscribable.answer == Answer::Unknown {
        if let Some(v) = simple.filter(|v| v.answer != Answer::Unknown) {
            let notes = std::mem::take(&mut inscribable.notes);
            inscribable = v;
            inscribable.notes.extend(notes);
            inscribable.notes.push("decided by the simple-polytope characterization".into());
        }
    }
    let inscribable = merge(inscribable, &insc_obstructions, sufficient);
    let circumscribable = merge(hrs_circ, &circ_obstructions, None);

    let hyperboloid = quadric_from(Property::HyperboloidInscribable, inscribable.clone(), m, budgets);
    let cylinder = quadric_from(Property::CylinderInscribable, inscribable.clone(), m, budgets);
    tests.push(TestOutcome::new("quadric", answer_status(hyperboloid.answer), format!("hyperboloid and cylinder {}", hyperboloid.answer)));

    AnalysisReport {
        schema: SCHEMA_VERSION,
        input: InputIdentity { name: m.name().map(str::to_string), sha256: sha256_hex(input) },
        vertices: m.n_vertices(),
        edges: m.edges().len(),
        faces: m.faces().len(),
        budgets: budgets.clone(),
        tests,
        verdicts: Verdicts { inscribable, circumscribable, hyperboloid, cylinder },
        certificates_verified: None,
    }
}

impl AnalysisReport {
    pub fn has_unknown(&self) -> bool {
        self.verdicts.all().iter().any(|v| v.answer == Answer::Unknown)
    }

    /// Re-checks every certificate in the report from its data alone.
    pub fn verify_certificates(&self, m: &CombinatorialMap, budgets: &Budgets) -> Result<()> {
        for t in &self.tests {
            t.certificates.iter().try_for_each(|c| c.verify(m, budgets))?;
        }
        self.verdicts.all().iter().try_for_each(|v| v.verify(m, budgets))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let name = self.input.name.as_deref().unwrap_or("<unnamed>");
        let _ = writeln!(out, "map {name} (sha256 {})", self.input.sha256);
        let _ = writeln!(out, "V = {}, E = {}, F = {}", self.vertices, self.edges, self.faces);
        for t in &self.tests {
            let status = match t.status {
                Status::Holds => "holds",
                Status::Violated => "violated",
                Status::Unknown => "unknown",
                Status::NotApplicable => "n/a",
            };
            let certs: Vec<&str> = t.certificates.iter().map(Certificate::kind).collect();
            let _ = write!(out, "  {:<30} {:<9} {}", t.test, status, t.detail);
            if !certs.is_empty() {
                let _ = write!(out, " [{}]", certs.join(", "));
            }
            out.push('\n');
        }
        for v in self.verdicts.all() {
            let label = serde_json::to_value(v.property).ok().and_then(|p| p.as_str().map(str::to_string)).unwrap_or_default();
            let _ = write!(out, "{label}: {}", v.answer);
            if let Some(margin) = &v.margin {
                let _ = write!(out, " (margin {margin})");
            }
            out.push('\n');
            for note in &v.notes {
                let _ = writeln!(out, "    {note}");
            }
        }
        if let Some(ok) = self.certificates_verified {
            let _ = writeln!(out, "certificates verified: {}", if ok { "yes" } else { "NO" });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::named_map;

    fn report(name: &str) -> AnalysisReport {
        analyze(&named_map(name).unwrap(), name.as_bytes(), &Budgets::default())
    }

    #[test]
    fn triakis_tetrahedron_has_two_independent_certificates() {
        let r = report("triakis-tetrahedron");
        let v = &r.verdicts.inscribable;
        assert_eq!(v.answer, Answer::No);
        let kinds: Vec<&str> = v.certificates.iter().map(Certificate::kind).collect();
        assert!(kinds.contains(&"IndependentSetObstruction") && kinds.contains(&"LpDualWitness"), "{kinds:?}");
        assert_eq!(r.verdicts.hyperboloid.answer, Answer::No);
    }

    #[test]
    fn cube_and_truncated_tetrahedron() {
        let cube = report("cube");
        assert_eq!(cube.verdicts.inscribable.answer, Answer::Yes);
        assert_eq!(cube.verdicts.circumscribable.answer, Answer::Yes);
        assert_eq!(cube.verdicts.hyperboloid.answer, Answer::Yes);
        assert!(!cube.has_unknown());
        let t = report("truncated-tetrahedron");
        assert_eq!(t.verdicts.circumscribable.answer, Answer::No);
        assert!(t.verdicts.circumscribable.certificates.iter().any(|c| c.kind() == "PaintObstruction"));
    }

    #[test]
    fn reports_verify_and_are_stable() {
        let m = named_map("glued-cubes").unwrap();
        let a = analyze(&m, b"x", &Budgets::default());
        a.verify_certificates(&m, &Budgets::default()).unwrap();
        let b = analyze(&m, b"x", &Budgets::default());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.to_text().contains("inscribable: NO"));
    }

    #[test]
    fn budget_exhaustion_is_unknown_not_a_guess() {
        let m = named_map("icosahedron").unwrap();
        let budgets = Budgets { cycles: 10, separation_nodes: 5, independent_set: 4, subsets: 4, ..Budgets::default() };
        let r = analyze(&m, b"", &budgets);
        assert!(r.tests.iter().any(|t| t.status == Status::Unknown));
        // the 5-connected icosahedron is still settled by the sufficient condition
        assert_ne!(r.verdicts.inscribable.answer, Answer::No);
    }
}
