use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use scribe_core::budgets::Budgets;
use scribe_core::caps::{
    cap_intersection_graph, centerpoint_normalize, near_uniform_caps, parse_caps, ply_depth, ply_lower_bound,
    random_caps, random_hyperplane_separator, serialize_caps, visibility_caps, CapSystem,
};
use scribe_core::certificate::{Answer, Verdict};
use scribe_core::corpus::named_map;
use scribe_core::geometry::{
    check_ij_scribed, check_k_scribed, default_parameters, generate_cyclic_moment, generate_cyclic_trig,
    on_sphere_check, verify_face_lattice,
};
use scribe_core::hrs::{decide_circumscribable, decide_inscribable, decide_quadric_inscribable, Quadric};
use scribe_core::hull::facet_enumeration;
use scribe_core::io::{parse_map, parse_points, serialize_map, serialize_points, NumberMode};
use scribe_core::points::{PointConfiguration, SphereRef};
use scribe_core::rational::parse_rational;
use scribe_core::report::{analyze, sha256_hex, SCHEMA_VERSION};
use scribe_core::{CombinatorialMap, Error, Result};

#[derive(Parser)]
#[command(name = "scribe", version, about = "Exact inscribability, scribedness and cap-separator analyses")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest vertex count for exhaustive subset searches.
    #[arg(long, global = true)]
    budget_subsets: Option<usize>,
    /// Largest number of simple cycles enumerated before switching to lazy separation.
    #[arg(long, global = true)]
    budget_cycles: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Run separator trials and per-face checks on all cores.
    #[arg(long, global = true)]
    parallel: bool,
    /// Re-check every certificate in the report from its data alone.
    #[arg(long, global = true)]
    verify_certificates: bool,
    /// Accept decimal coordinates, converted verbatim to rationals.
    #[arg(long, global = true)]
    float_import: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyArg {
    All,
    Inscribable,
    Circumscribable,
    Hyperboloid,
    Cylinder,
}

#[derive(Subcommand)]
enum Command {
    /// Run every combinatorial test and the angle systems on a map file.
    Analyze { map: PathBuf },
    /// Decide one property (or all four) with certificates.
    Decide {
        map: PathBuf,
        #[arg(long, value_enum, default_value_t = PropertyArg::All)]
        property: PropertyArg,
    },
    /// Write a generated map, point or cap file.
    Generate {
        /// cyclic-trig, cyclic-moment, stacked, near-uniform-caps, random-caps, or a corpus name.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        /// Curve parameters as comma-separated rationals.
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check a realization: sphere membership, face lattice and optionally a map.
    Check {
        points: PathBuf,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Test (i,j)-scribedness or k-scribedness of a realization.
    Scribe {
        points: PathBuf,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Sphere centred at the origin with this squared radius, overriding the file.
        #[arg(long)]
        radius_squared: Option<String>,
    },
    /// Intersection graph and ply depth of a cap file or of the visibility caps of a point file.
    Caps {
        input: PathBuf,
        /// Samples for the Monte Carlo lower bound outside dimension 3.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Rounds of the heuristic centerpoint normalization.
        #[arg(long, default_value_t = 0)]
        normalize: usize,
    },
    /// Random-hyperplane separator experiment.
    Separator {
        input: PathBuf,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

struct Outcome {
    json: Value,
    text: String,
    unknown: bool,
}

impl Outcome {
    fn new(json: Value, text: String) -> Self {
        Outcome { json, text, unknown: false }
    }
}

struct Input {
    bytes: Vec<u8>,
    text: String,
}

fn read(path: &Path) -> Result<Input> {
    let bytes = fs::read(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Error::Malformed(format!("{} is not UTF-8", path.display())))?;
    Ok(Input { bytes, text })
}

fn identity(input: &Input, name: Option<&str>) -> Value {
    let mut v = json!({ "sha256": sha256_hex(&input.bytes) });
    if let Some(n) = name {
        v["name"] = json!(n);
    }
    v
}

fn envelope(command: &str, input: Value, body: Value) -> Value {
    let mut v = json!({ "schema": SCHEMA_VERSION, "command": command, "input": input });
    if let (Value::Object(out), Value::Object(extra)) = (&mut v, body) {
        out.extend(extra);
    }
    v
}

fn load_map(path: &Path) -> Result<(Input, CombinatorialMap)> {
    let input = read(path)?;
    let mut m = parse_map(&input.text)?;
    if m.name().is_none() {
        if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
            m = m.with_name(stem);
        }
    }
    Ok((input, m))
}

fn number_mode(g: &Global) -> NumberMode {
    if g.float_import {
        NumberMode::FloatImport
    } else {
        NumberMode::Exact
    }
}

fn budgets(g: &Global) -> Budgets {
    let mut b = Budgets::default();
    if let Some(s) = g.budget_subsets {
        b.subsets = s;
        b.independent_set = s;
    }
    if let Some(c) = g.budget_cycles {
        b.cycles = c;
    }
    b
}

fn verify(verdicts: &[&Verdict], m: &CombinatorialMap, b: &Budgets) -> Result<()> {
    verdicts.iter().try_for_each(|v| v.verify(m, b))
}

fn verdict_lines(verdicts: &[&Verdict]) -> String {
    let mut out = String::new();
    for v in verdicts {
        let kinds: Vec<&str> = v.certificates.iter().map(|c| c.kind()).collect();
        let label = serde_json::to_value(v.property).ok().and_then(|p| p.as_str().map(str::to_string)).unwrap_or_default();
        out.push_str(&format!("{label}: {} [{}]\n", v.answer, kinds.join(", ")));
        for n in &v.notes {
            out.push_str(&format!("    {n}\n"));
        }
    }
    out
}

fn cmd_analyze(g: &Global, path: &Path) -> Result<Outcome> {
    let (input, m) = load_map(path)?;
    let b = budgets(g);
    let mut report = analyze(&m, &input.bytes, &b);
    if g.verify_certificates {
        let ok = report.verify_certificates(&m, &b);
        report.certificates_verified = Some(ok.is_ok());
        ok?;
    }
    let unknown = report.has_unknown();
    let mut json = serde_json::to_value(&report)?;
    json["command"] = json!("analyze");
    Ok(Outcome { json, text: report.to_text(), unknown })
}

fn cmd_decide(g: &Global, path: &Path, property: PropertyArg) -> Result<Outcome> {
    let (input, m) = load_map(path)?;
    let b = budgets(g);
    let mut verdicts = Vec::new();
    let want = |p: PropertyArg| matches!(property, PropertyArg::All) || std::mem::discriminant(&property) == std::mem::discriminant(&p);
    if want(PropertyArg::Inscribable) {
        verdicts.push(decide_inscribable(&m, &b));
    }
    if want(PropertyArg::Circumscribable) {
        verdicts.push(decide_circumscribable(&m, &b));
    }
    if want(PropertyArg::Hyperboloid) {
        verdicts.push(decide_quadric_inscribable(&m, Quadric::Hyperboloid, &b));
    }
    if want(PropertyArg::Cylinder) {
        verdicts.push(decide_quadric_inscribable(&m, Quadric::Cylinder, &b));
    }
    let refs: Vec<&Verdict> = verdicts.iter().collect();
    let mut body = json!({ "verdicts": verdicts });
    if g.verify_certificates {
        let ok = verify(&refs, &m, &b);
        body["certificates_verified"] = json!(ok.is_ok());
        ok?;
    }
    let unknown = verdicts.iter().any(|v| v.answer == Answer::Unknown);
    let json = envelope("decide", identity(&input, m.name()), body);
    Ok(Outcome { json, text: verdict_lines(&refs), unknown })
}

fn cmd_generate(g: &Global, family: &str, n: Option<usize>, d: Option<usize>, params: &[String]) -> Result<String> {
    let params = || -> Result<Vec<_>> {
        if params.is_empty() {
            Ok(default_parameters(n.unwrap_or(8)))
        } else {
            params.iter().map(|p| parse_rational(p.trim())).collect()
        }
    };
    Ok(match family {
        "cyclic-trig" => serialize_points(&generate_cyclic_trig(d.unwrap_or(4), &params()?)?),
        "cyclic-moment" => serialize_points(&generate_cyclic_moment(d.unwrap_or(4), &params()?)?),
        "stacked" => serialize_map(&named_map(&format!("stacked-{}", n.unwrap_or(1)))?),
        "near-uniform-caps" => serialize_caps(&near_uniform_caps(n.unwrap_or(125), g.seed)?),
        "random-caps" => serialize_caps(&random_caps(n.unwrap_or(20), g.seed, 0.6, 0.95)?),
        name => serialize_map(&named_map(name)?),
    })
}

fn load_points(g: &Global, path: &Path) -> Result<(Input, PointConfiguration)> {
    let input = read(path)?;
    let pc = parse_points(&input.text, number_mode(g))?;
    Ok((input, pc))
}

fn cmd_check(g: &Global, path: &Path, map: Option<&Path>) -> Result<Outcome> {
    let (input, pc) = load_points(g, path)?;
    let b = budgets(g);
    let lattice = facet_enumeration(&pc, b.hull)?;
    let mut body = json!({ "dimension": pc.dimension(), "points": pc.len(), "f_vector": lattice.f_vector() });
    let mut pass = true;
    let mut text = format!("{} points in dimension {}, f-vector {:?}\n", pc.len(), pc.dimension(), lattice.f_vector());
    if let Some(s) = pc.sphere() {
        let on = on_sphere_check(&pc, s)?;
        let off: Vec<usize> = (0..on.len()).filter(|&i| !on[i]).collect();
        pass &= off.is_empty();
        text.push_str(&format!("on sphere: {}\n", if off.is_empty() { "all".to_string() } else { format!("not {off:?}") }));
        body["off_sphere"] = json!(off);
    }
    if lattice.dimension >= 2 {
        let n_vertices = lattice.vertices().len();
        let pairs = lattice.faces(1).len();
        let neighborly = pairs == n_vertices * (n_vertices - 1) / 2;
        body["two_neighborly"] = json!(neighborly);
        text.push_str(&format!("2-neighborly: {neighborly}\n"));
    }
    if let Some(claimed) = pc.claimed_faces() {
        let check = verify_face_lattice(&pc, claimed, b.hull)?;
        pass &= check.matches;
        text.push_str(&format!("claimed facets: {}\n", check.first_failure.as_deref().unwrap_or("match")));
        body["claimed_facets"] = serde_json::to_value(&check)?;
    }
    if let Some(mp) = map {
        let (_, m) = load_map(mp)?;
        let faces: std::collections::BTreeSet<Vec<usize>> = m
            .faces()
            .iter()
            .map(|f| {
                let mut f = f.clone();
                f.sort_unstable();
                f
            })
            .collect();
        let matches = pc.dimension() == 3 && m.n_vertices() == pc.len() && faces == lattice.facet_set();
        pass &= matches;
        text.push_str(&format!("map facets: {}\n", if matches { "match" } else { "differ" }));
        body["map_matches"] = json!(matches);
    }
    body["pass"] = json!(pass);
    text.push_str(if pass { "PASS\n" } else { "FAIL\n" });
    Ok(Outcome::new(envelope("check", identity(&input, None), body), text))
}

fn cmd_scribe(g: &Global, path: &Path, i: Option<usize>, j: Option<usize>, k: Option<usize>, r2: Option<&str>) -> Result<Outcome> {
    let (input, pc) = load_points(g, path)?;
    let b = budgets(g);
    let sphere = match r2 {
        Some(r) => SphereRef::centered(pc.dimension(), parse_rational(r)?)?,
        None => pc.sphere().cloned().ok_or_else(|| Error::Malformed("no sphere given; use --radius-squared".into()))?,
    };
    let lattice = facet_enumeration(&pc, b.hull)?;
    let report = match (i, j, k) {
        (None, None, Some(k)) => check_k_scribed(&pc, &lattice, &sphere, k, &b, g.parallel)?,
        (Some(i), Some(j), None) => check_ij_scribed(&pc, &lattice, &sphere, i, j, &b, g.parallel)?,
        _ => return Err(Error::InvalidArgument("give either --i and --j, or --k".into())),
    };
    let query = match (i, j, k) {
        (_, _, Some(k)) => format!("{k}-scribed"),
        (Some(i), Some(j), _) => format!("({i},{j})-scribed"),
        _ => unreachable!(),
    };
    let mut text = format!("{query}: {}\n", if report.holds { "YES" } else { "NO" });
    if let Some(f) = &report.failure {
        text.push_str(&format!("    first failing face {f:?}\n"));
    }
    let body = json!({ "answer": if report.holds { "YES" } else { "NO" }, "report": report });
    Ok(Outcome::new(envelope("scribe", identity(&input, None), body), text))
}

fn load_caps(g: &Global, path: &Path) -> Result<(Input, CapSystem)> {
    let input = read(path)?;
    let value: Value = serde_json::from_str(&input.text)?;
    let cs = if value.get("caps").is_some() {
        parse_caps(&input.text)?
    } else {
        visibility_caps(&parse_points(&input.text, number_mode(g))?)?
    };
    Ok((input, cs))
}

fn cmd_caps(g: &Global, path: &Path, samples: usize, rounds: usize) -> Result<Outcome> {
    let (input, mut cs) = load_caps(g, path)?;
    let mut body = json!({});
    let mut text = String::new();
    if rounds > 0 {
        let (normalized, info) = centerpoint_normalize(&cs, rounds)?;
        text.push_str(&format!(
            "normalized (heuristic): mean axis norm {:.4} -> {:.4} in {} rounds\n",
            info.mean_axis_norm_before, info.mean_axis_norm_after, info.iterations_run
        ));
        body["normalization"] = serde_json::to_value(&info)?;
        cs = normalized;
    }
    let graph = cap_intersection_graph(&cs);
    let edges: Vec<[usize; 2]> = graph.edges().iter().map(|e| [e.0, e.1]).collect();
    let ply = match ply_depth(&cs) {
        Ok(p) => p,
        Err(e @ (Error::MonteCarloOnly(_) | Error::Unsupported(_) | Error::DegenerateConfiguration(_))) => {
            text.push_str(&format!("exact ply depth unavailable ({e}); Monte Carlo lower bound\n"));
            body["ply_note"] = json!(e.to_string());
            ply_lower_bound(&cs, samples, g.seed)
        }
        Err(e) => return Err(e),
    };
    text.push_str(&format!("{} caps in dimension {}, {} intersecting pairs\n", cs.len(), cs.dimension(), edges.len()));
    text.push_str(&format!("ply depth {} ({})\n", ply.depth, if ply.exact { "exact" } else { "lower bound" }));
    body["caps"] = json!(cs.len());
    body["dimension"] = json!(cs.dimension());
    body["intersection_edges"] = json!(edges);
    body["ply"] = serde_json::to_value(&ply)?;
    Ok(Outcome::new(envelope("caps", identity(&input, None), body), text))
}

fn cmd_separator(g: &Global, path: &Path, trials: usize) -> Result<Outcome> {
    let (input, cs) = load_caps(g, path)?;
    let report = random_hyperplane_separator(&cs, trials, g.seed, g.parallel)?;
    let text = format!(
        "{} caps, {} trials, seed {}\nhits: min {}, median {}, mean {} (closed caps)\nmedian / sqrt(n) = {:.4}\nbest trial {}: {} hits, {} components (largest {})\n",
        report.n_caps,
        report.trials,
        report.seed,
        report.min_hits,
        report.median_hits,
        report.mean_hits,
        report.empirical_constant,
        report.best.trial,
        report.best.hit_count,
        report.best.component_count,
        report.best.largest_component,
    );
    let body = json!({ "report": report });
    Ok(Outcome::new(envelope("separator", identity(&input, None), body), text))
}

/// Writes to stdout, treating a closed pipe as a normal end of output.
fn emit(text: &str) {
    let mut out = io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
        }
    }
}

fn run(cli: &Cli) -> Result<Option<Outcome>> {
    let g = &cli.global;
    Ok(Some(match &cli.command {
        Command::Analyze { map } => cmd_analyze(g, map)?,
        Command::Decide { map, property } => cmd_decide(g, map, *property)?,
        Command::Generate { family, n, d, params, output } => {
            let text = cmd_generate(g, family, *n, *d, params)?;
            match output {
                Some(path) => fs::write(path, text + "\n").map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?,
                None => emit(&format!("{text}\n")),
            }
            return Ok(None);
        }
        Command::Check { points, map } => cmd_check(g, points, map.as_deref())?,
        Command::Scribe { points, i, j, k, radius_squared } => cmd_scribe(g, points, *i, *j, *k, radius_squared.as_deref())?,
        Command::Caps { input, samples, normalize } => cmd_caps(g, input, *samples, *normalize)?,
        Command::Separator { input, trials } => cmd_separator(g, input, *trials)?,
    }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(out)) => {
            if cli.global.json {
                emit(&format!("{}\n", serde_json::to_string_pretty(&out.json).expect("report serializes")));
            } else {
                emit(&out.text);
            }
            if out.unknown {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
