//! Command-line front end.
//!
//! Every command prints one JSON document on standard output (or writes it
//! to `--out`); progress goes to standard error through `log`. Failures
//! print `{"error": {"operation", "variant", "message"}}` and exit with 1.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::Error;
use crate::fan::{canonicalize, check_balancing_curve, IntVec, TropicalCollection};
use crate::format::{
    fan_from_json, fan_to_json, group_from_json, group_to_json, int_json, ledger_from_json, ledger_to_json,
    map_from_json, parse_rows, parse_vec, poly_from_json, read_fan_lines, rows_json, vec_json, vertices_csv,
};
use crate::hull::{convex_hull, MAX_HULL_DIM, MAX_HULL_POINTS};
use crate::linalg::{Int, IntMatrix};
use crate::newton::{
    auto_seed, certify_facet_detail, complete_polytope, crossing_records, multidegree, ray_shoot, shoot, walk,
    SearchOptions, VertexWitness, WitnessSource,
};
use crate::oracle::{check_shoot, check_walks, OracleError};
use crate::pushforward::{hadamard_square, product_fan, weighted_image};
use crate::symmetry::CoordSymmetryGroup;

#[derive(Debug, Parser)]
#[command(name = "tropnewton", version, about = "Newton polytopes from weighted tropical hypersurfaces")]
pub struct RunConfig {
    /// Seed for all perturbations and sample points.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "TROPNEWTON_JOBS")]
    pub jobs: Option<usize>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Vertex of the Newton polytope maximizing an objective.
    Shoot {
        #[arg(long)]
        fan: PathBuf,
        /// Comma-separated integers.
        #[arg(long, allow_hyphen_values = true, required_unless_present = "objectives")]
        objective: Option<String>,
        /// JSON file with a list of objectives.
        #[arg(long)]
        objectives: Option<PathBuf>,
    },
    /// Vertices met along the coordinate lines through an objective.
    Walk {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        objective: String,
        /// Direction along the coordinate lines: -1, 1, or both when omitted.
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<i32>,
    },
    /// Decides whether `normal·x <= bound` defines a facet.
    Certify {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        normal: String,
        #[arg(long, allow_hyphen_values = true)]
        bound: String,
    },
    /// Full vertex and facet description from one or more seed vertices.
    Complete {
        #[arg(long)]
        fan: PathBuf,
        /// `auto`, or a JSON file holding `{v, objective}` or a ledger.
        #[arg(long, default_value = "auto")]
        seed_vertex: String,
        /// `trivial`, `cube:M`, or a group JSON file.
        #[arg(long, default_value = "trivial")]
        group: String,
        /// Also write the vertices as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Skip coordinate walks from new vertices.
        #[arg(long)]
        no_walk: bool,
    },
    /// Image of a fan under a monomial map, with push-forward weights.
    Minkowski {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        target_dim: Option<usize>,
    },
    /// Product of two fans.
    Product {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
    /// Tropical Hadamard square `T + T` with weights divided by `delta`.
    Hadamard {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        delta: Option<u64>,
    },
    /// Orbit of an integer vector under a coordinate group.
    Orbit {
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        /// Print the full orbit, not just its size.
        #[arg(long)]
        list: bool,
    },
    /// Compares ray shooting against an explicit polynomial.
    Oracle {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, default_value_t = 20)]
        check_shoot: usize,
        #[arg(long, default_value_t = 0)]
        check_walk: usize,
    },
    /// Multidegree of a vertex under a grading matrix.
    Multidegree {
        #[arg(long)]
        grading: PathBuf,
        #[arg(long)]
        vertex: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Shoot { .. } => "shoot",
            Command::Walk { .. } => "walk",
            Command::Certify { .. } => "certify",
            Command::Complete { .. } => "complete",
            Command::Minkowski { .. } => "minkowski",
            Command::Product { .. } => "product",
            Command::Hadamard { .. } => "hadamard",
            Command::Orbit { .. } => "orbit",
            Command::Oracle { .. } => "oracle",
            Command::Multidegree { .. } => "multidegree",
        }
    }
}

/// Exit status and the text destined for standard output.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

pub fn error_json(operation: &str, e: &Error) -> Value {
    json!({ "error": { "operation": operation, "variant": e.variant_name(), "message": e.to_string() } })
}

/// Parses arguments and runs; usage errors are reported like any other.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, stdout: e.to_string() };
            }
            let err = Error::Usage(e.to_string().lines().next().unwrap_or("").to_string());
            Outcome { code: 1, stdout: format!("{}\n", error_json("cli", &err)) }
        }
    }
}

pub fn run(cfg: &RunConfig) -> Outcome {
    let op = cfg.command.name();
    let result = match rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs.unwrap_or(0)).build() {
        Ok(pool) => pool.install(|| execute(cfg)),
        Err(e) => Err(Error::Usage(format!("cannot start worker pool: {e}"))),
    };
    let (code, value) = match result {
        Ok(v) => (0, v),
        Err(e) => {
            log::error!("{op}: {e}");
            (1, error_json(op, &e))
        }
    };
    let text = format!("{}\n", serde_json::to_string(&value).unwrap_or_default());
    if code == 0 {
        if let Some(path) = &cfg.out {
            if let Err(e) = fs::write(path, &text) {
                let err = io_error(path, e);
                return Outcome { code: 1, stdout: format!("{}\n", error_json(op, &err)) };
            }
            return Outcome { code, stdout: String::new() };
        }
    }
    Outcome { code, stdout: text }
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), msg: e.to_string() }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Io { path: path.display().to_string(), msg: e.to_string() })
}

/// `.jsonl` files are streamed cone by cone; anything else is one document.
/// Repeated cones are merged, and must agree on their weights.
fn load_fan(path: &Path) -> Result<TropicalCollection, Error> {
    let t = if path.extension().is_some_and(|e| e == "jsonl") {
        let f = fs::File::open(path).map_err(|e| io_error(path, e))?;
        read_fan_lines(BufReader::new(f))?
    } else {
        fan_from_json(&read_json(path)?)?
    };
    let t = canonicalize(&t)?;
    log::info!("{}: {} cones in dimension {}", path.display(), t.len(), t.ambient_dim());
    Ok(t)
}

fn parse_list(s: &str, what: &str) -> Result<IntVec, Error> {
    s.split(',')
        .map(|x| x.trim().parse::<Int>().map_err(|_| Error::Usage(format!("{what}: `{x}` is not an integer"))))
        .collect()
}

fn parse_scalar(s: &str, what: &str) -> Result<Int, Error> {
    s.trim().parse::<Int>().map_err(|_| Error::Usage(format!("{what}: `{s}` is not an integer")))
}

fn load_group(spec: &str, n: usize) -> Result<CoordSymmetryGroup, Error> {
    if spec == "trivial" {
        return Ok(CoordSymmetryGroup::trivial(n));
    }
    if let Some(m) = spec.strip_prefix("cube:") {
        let m = m.parse().map_err(|_| Error::Usage(format!("bad cube dimension `{m}`")))?;
        return Ok(CoordSymmetryGroup::hyperoctahedral_on_cube(m)?);
    }
    Ok(group_from_json(&read_json(Path::new(spec))?)?)
}

fn witness_json(w: &VertexWitness) -> Value {
    json!({ "v": vec_json(&w.vertex), "objective": vec_json(&w.objective), "source": w.source })
}

fn load_seeds(path: &Path) -> Result<Vec<VertexWitness>, Error> {
    let v = read_json(path)?;
    if v.get("vertices").is_some() {
        return Ok(ledger_from_json(&v)?.vertices.into_values().collect());
    }
    let vertex = parse_vec(v.get("v").ok_or(Error::Usage("seed file needs `v`".into()))?, "v")?;
    let objective =
        parse_vec(v.get("objective").ok_or(Error::Usage("seed file needs `objective`".into()))?, "objective")?;
    Ok(vec![VertexWitness { vertex, objective, source: WitnessSource::Shoot }])
}

fn load_vertex(path: &Path) -> Result<IntVec, Error> {
    let v = read_json(path)?;
    let inner = v.get("v").or_else(|| v.get("vertex")).unwrap_or(&v);
    Ok(parse_vec(inner, "vertex")?)
}

/// A grading matrix as rows, or the lineality of a fan file.
fn load_grading(path: &Path) -> Result<IntMatrix, Error> {
    let v = read_json(path)?;
    let rows = match v.get("grading").or_else(|| v.get("lineality")) {
        Some(r) => parse_rows(r, "grading")?,
        None => parse_rows(&v, "grading")?,
    };
    let cols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Usage("grading rows have different lengths".into()));
    }
    Ok(IntMatrix::from_rows(&rows, cols))
}

fn hull_summary(vertices: &[IntVec]) -> Value {
    let dim = vertices.first().map_or(0, |v| v.len());
    if vertices.len() > MAX_HULL_POINTS || (dim > MAX_HULL_DIM && vertices.len() > MAX_HULL_DIM + 1) {
        return Value::Null;
    }
    match convex_hull(vertices) {
        Ok(h) => json!({
            "dim": h.affine_dim,
            "vertices": h.vertices.len(),
            "edges": h.edges.len(),
            "facets": h.facets.len(),
        }),
        Err(e) => {
            log::warn!("hull summary skipped: {e}");
            Value::Null
        }
    }
}

fn execute(cfg: &RunConfig) -> Result<Value, Error> {
    let opts = SearchOptions { seed: cfg.seed, ..Default::default() };
    match &cfg.command {
        Command::Shoot { fan, objective, objectives } => {
            let t = load_fan(fan)?;
            let ws = match (objective, objectives) {
                (Some(o), _) => vec![parse_list(o, "objective")?],
                (None, Some(p)) => parse_rows(&read_json(p)?, "objectives")?,
                (None, None) => return Err(Error::Usage("need --objective or --objectives".into())),
            };
            let mut out = Vec::with_capacity(ws.len());
            for w in &ws {
                out.push(witness_json(&ray_shoot(&t, w)?));
            }
            Ok(json!({ "shots": out }))
        }
        Command::Walk { fan, objective, sign } => {
            let t = load_fan(fan)?;
            let w = parse_list(objective, "objective")?;
            let start = shoot(&t, &w)?;
            let signs: Vec<i32> = match sign {
                Some(s) if *s == 1 || *s == -1 => vec![*s],
                Some(s) => return Err(Error::Usage(format!("sign must be 1 or -1, got {s}"))),
                None => vec![-1, 1],
            };
            let mut found = Vec::new();
            for s in signs {
                let records = crossing_records(&t, &w, s)?;
                for wit in walk(&t, &w, &start.vertex, &records, s, &opts)? {
                    found.push(json!({ "sign": s, "v": vec_json(&wit.vertex), "objective": vec_json(&wit.objective) }));
                }
            }
            Ok(json!({ "start": vec_json(&start.vertex), "vertices": found }))
        }
        Command::Certify { fan, normal, bound } => {
            let t = load_fan(fan)?;
            let z = parse_list(normal, "normal")?;
            let a = parse_scalar(bound, "bound")?;
            let c = certify_facet_detail(&t, &z, &a, &opts)?;
            Ok(json!({
                "certified": c.certified,
                "normal_rank": c.normal_rank,
                "witness": c.shot.as_ref().map(witness_json),
            }))
        }
        Command::Complete { fan, seed_vertex, group, csv, no_walk } => {
            let t = load_fan(fan)?;
            let g = load_group(group, t.ambient_dim())?;
            let seeds = if seed_vertex == "auto" {
                vec![auto_seed(&t, &opts)?]
            } else {
                load_seeds(Path::new(seed_vertex))?
            };
            let opts = SearchOptions { walk_new_vertices: !no_walk, ..opts };
            let ledger = complete_polytope(&t, &seeds, &g, &opts)?;
            log::info!("{} vertices, {} facets", ledger.vertices.len(), ledger.facets.len());
            if let Some(p) = csv {
                fs::write(p, vertices_csv(&ledger)).map_err(|e| io_error(p, e))?;
            }
            let mut v = ledger_to_json(&ledger);
            v["summary"] = hull_summary(&ledger.vertex_list());
            Ok(v)
        }
        Command::Minkowski { fan, map, target_dim } => {
            let t = load_fan(fan)?;
            let mut m = map_from_json(&read_json(map)?)?;
            if m.lambda.cols() == 0 && !t.lineality().is_empty() {
                m.lambda = IntMatrix::from_columns(t.lineality(), t.ambient_dim());
            }
            Ok(fan_to_json(&weighted_image(&t, &m, *target_dim, cfg.seed)?))
        }
        Command::Product { fan, other } => {
            let a = load_fan(fan)?;
            let b = load_fan(other)?;
            Ok(fan_to_json(&product_fan(&a, &b)?))
        }
        Command::Hadamard { fan, delta } => {
            let t = load_fan(fan)?;
            let delta = delta.unwrap_or_else(|| {
                log::warn!("no --delta given: using degree 1; multiplicities may be a multiple of the true ones");
                1
            });
            if t.cone_dim() == Some(1) && !check_balancing_curve(&t)? {
                log::warn!("input curve is not balanced");
            }
            Ok(fan_to_json(&hadamard_square(&t, delta, cfg.seed)?))
        }
        Command::Orbit { group, vector, list } => {
            let v = parse_list(vector, "vector")?;
            let g = load_group(group, v.len())?;
            let orbit = g.orbit(&v)?;
            let mut out = json!({
                "size": orbit.len(),
                "canonical": vec_json(&g.canonical_rep(&v)?),
                "group_order": g.order()?,
                "group": group_to_json(&g),
            });
            if *list {
                out["orbit"] = rows_json(&orbit);
            }
            Ok(out)
        }
        Command::Oracle { poly, check_shoot: k, check_walk } => {
            let (_, pts) = poly_from_json(&read_json(poly)?)?;
            let report = check_shoot(&pts, *k, cfg.seed)?;
            log::info!("{}/{} shots agree", report.matched, report.checked);
            let mut out = serde_json::to_value(&report).unwrap_or(Value::Null);
            if *check_walk > 0 {
                let (checked, bad) = check_walks(&pts, *check_walk, cfg.seed)?;
                out["walk_checked"] = json!(checked);
                out["walk_failures"] = Value::Array(bad.iter().map(witness_json).collect());
            }
            if report.matched != report.checked {
                return Err(OracleError::Disagreement { failed: report.checked - report.matched, checked: report.checked }.into());
            }
            Ok(out)
        }
        Command::Multidegree { grading, vertex } => {
            let g = load_grading(grading)?;
            let v = load_vertex(vertex)?;
            let d = multidegree(&g, &v)?;
            Ok(json!({ "multidegree": vec_json(&d), "degree": int_json(&d.iter().sum()) }))
        }
    }
}
