//! JSON and CSV file formats.
//!
//! Integers are written as decimal strings so that no precision is lost in
//! other JSON readers. On input, strings, JSON numbers and `"a/b"` fractions
//! (which must reduce to integers) are all accepted.

use std::io::{BufRead, Write};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::fan::{FanError, IntVec, TropicalCollection, WeightedCone};
use crate::linalg::{Int, IntMatrix};
use crate::newton::{FacetInequality, PolytopeLedger, VertexWitness, WitnessSource};
use crate::pushforward::MonomialMapSpec;
use crate::symmetry::{CoordSymmetryGroup, SymmetryError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("missing field `{0}`")]
    MissingField(&'static str),
    #[error("bad value at {path}: {msg}")]
    BadValue { path: String, msg: String },
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}

impl FormatError {
    pub fn variant_name(&self) -> &'static str {
        match self {
            FormatError::Json(_) => "Json",
            FormatError::MissingField(_) => "MissingField",
            FormatError::BadValue { .. } => "BadValue",
            FormatError::Io(_) => "Io",
            FormatError::Fan(e) => e.variant_name(),
            FormatError::Symmetry(e) => e.variant_name(),
        }
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json(e.to_string())
    }
}

impl From<std::io::Error> for FormatError {
    fn from(e: std::io::Error) -> Self {
        FormatError::Io(e.to_string())
    }
}

fn bad(path: &str, msg: impl Into<String>) -> FormatError {
    FormatError::BadValue { path: path.to_string(), msg: msg.into() }
}

fn field<'a>(obj: &'a Value, name: &'static str) -> Result<&'a Value, FormatError> {
    obj.get(name).ok_or(FormatError::MissingField(name))
}

pub fn parse_int(v: &Value, path: &str) -> Result<Int, FormatError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Int::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(Int::from(u))
            } else {
                Err(bad(path, format!("{n} is not an integer")))
            }
        }
        Value::String(s) => {
            let s = s.trim();
            match s.split_once('/') {
                None => BigInt::from_str(s).map_err(|_| bad(path, format!("`{s}` is not an integer"))),
                Some((a, b)) => {
                    let a = BigInt::from_str(a.trim()).map_err(|_| bad(path, format!("`{s}` is not a fraction")))?;
                    let b = BigInt::from_str(b.trim()).map_err(|_| bad(path, format!("`{s}` is not a fraction")))?;
                    if b.is_zero() {
                        return Err(bad(path, "zero denominator"));
                    }
                    let (q, r) = a.div_rem(&b);
                    if !r.is_zero() {
                        return Err(bad(path, format!("`{s}` is not integral")));
                    }
                    Ok(q)
                }
            }
        }
        _ => Err(bad(path, "expected an integer")),
    }
}

pub fn parse_usize(v: &Value, path: &str) -> Result<usize, FormatError> {
    parse_int(v, path)?.to_usize().ok_or_else(|| bad(path, "expected a non-negative size"))
}

pub fn parse_u64(v: &Value, path: &str) -> Result<u64, FormatError> {
    parse_int(v, path)?.to_u64().ok_or_else(|| bad(path, "expected a non-negative 64-bit integer"))
}

pub fn parse_vec(v: &Value, path: &str) -> Result<IntVec, FormatError> {
    let arr = v.as_array().ok_or_else(|| bad(path, "expected an array"))?;
    arr.iter().enumerate().map(|(i, x)| parse_int(x, &format!("{path}[{i}]"))).collect()
}

pub fn parse_rows(v: &Value, path: &str) -> Result<Vec<IntVec>, FormatError> {
    let arr = v.as_array().ok_or_else(|| bad(path, "expected an array of arrays"))?;
    arr.iter().enumerate().map(|(i, x)| parse_vec(x, &format!("{path}[{i}]"))).collect()
}

fn check_len(rows: &[IntVec], n: usize, path: &str) -> Result<(), FormatError> {
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(bad(&format!("{path}[{i}]"), format!("length {} instead of {n}", r.len())));
        }
    }
    Ok(())
}

pub fn int_json(x: &Int) -> Value {
    Value::String(x.to_string())
}

pub fn vec_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

pub fn rows_json(rows: &[IntVec]) -> Value {
    Value::Array(rows.iter().map(|r| vec_json(r)).collect())
}

pub fn parse_cone(v: &Value, n: usize, path: &str) -> Result<WeightedCone, FormatError> {
    let rays = parse_rows(field(v, "rays")?, &format!("{path}.rays"))?;
    check_len(&rays, n, &format!("{path}.rays"))?;
    let m = match v.get("multiplicity") {
        Some(m) => parse_u64(m, &format!("{path}.multiplicity"))?,
        None => return Err(FormatError::MissingField("multiplicity")),
    };
    Ok(WeightedCone::new(rays, m))
}

pub fn cone_json(c: &WeightedCone) -> Value {
    json!({ "rays": rows_json(&c.rays), "multiplicity": c.multiplicity.to_string() })
}

fn fan_header(v: &Value) -> Result<(usize, Vec<IntVec>), FormatError> {
    let n = parse_usize(field(v, "ambient_dim")?, "ambient_dim")?;
    let lin = match v.get("lineality") {
        Some(l) => parse_rows(l, "lineality")?,
        None => vec![],
    };
    check_len(&lin, n, "lineality")?;
    Ok((n, lin))
}

/// Reads a fan, expanding the orbit-compressed form if present.
pub fn fan_from_json(v: &Value) -> Result<TropicalCollection, FormatError> {
    if let Some(reps) = v.get("orbit_representatives") {
        let group = group_from_json(field(v, "group")?)?;
        let n = match v.get("ambient_dim") {
            Some(d) => parse_usize(d, "ambient_dim")?,
            None => group.n_coords(),
        };
        if n != group.n_coords() {
            return Err(bad("group", format!("acts on {} coordinates, fan lives in {n}", group.n_coords())));
        }
        let lin = match v.get("lineality") {
            Some(l) => parse_rows(l, "lineality")?,
            None => vec![],
        };
        check_len(&lin, n, "lineality")?;
        let arr = reps.as_array().ok_or_else(|| bad("orbit_representatives", "expected an array"))?;
        let cones: Result<Vec<_>, _> = arr
            .iter()
            .enumerate()
            .map(|(i, c)| parse_cone(c, n, &format!("orbit_representatives[{i}]")))
            .collect();
        let reps = TropicalCollection::new(n, lin, cones?)?;
        return Ok(group.expand(&reps)?);
    }
    let (n, lin) = fan_header(v)?;
    let arr = field(v, "cones")?.as_array().ok_or_else(|| bad("cones", "expected an array"))?;
    let cones: Result<Vec<_>, _> =
        arr.iter().enumerate().map(|(i, c)| parse_cone(c, n, &format!("cones[{i}]"))).collect();
    Ok(TropicalCollection::new(n, lin, cones?)?)
}

pub fn fan_from_str(s: &str) -> Result<TropicalCollection, FormatError> {
    fan_from_json(&serde_json::from_str(s)?)
}

pub fn fan_to_json(t: &TropicalCollection) -> Value {
    json!({
        "ambient_dim": t.ambient_dim(),
        "lineality": rows_json(t.lineality()),
        "cones": t.cones().iter().map(cone_json).collect::<Vec<_>>(),
    })
}

/// Streams a fan stored as JSON lines: a header object with `ambient_dim`
/// and `lineality`, then one cone object per line. Blank lines are skipped.
pub struct ConeStream<R> {
    lines: std::io::Lines<R>,
    pub ambient_dim: usize,
    pub lineality: Vec<IntVec>,
    line_no: usize,
}

impl<R: BufRead> ConeStream<R> {
    pub fn new(reader: R) -> Result<Self, FormatError> {
        let mut lines = reader.lines();
        let mut line_no = 0;
        loop {
            line_no += 1;
            let line = lines.next().ok_or(FormatError::MissingField("ambient_dim"))??;
            if line.trim().is_empty() {
                continue;
            }
            let (ambient_dim, lineality) = fan_header(&serde_json::from_str(&line)?)?;
            return Ok(ConeStream { lines, ambient_dim, lineality, line_no });
        }
    }
}

impl<R: BufRead> Iterator for ConeStream<R> {
    type Item = Result<WeightedCone, FormatError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.line_no += 1;
            let line = match self.lines.next()? {
                Ok(l) => l,
                Err(e) => return Some(Err(e.into())),
            };
            if line.trim().is_empty() {
                continue;
            }
            let path = format!("line {}", self.line_no);
            return Some(
                serde_json::from_str::<Value>(&line)
                    .map_err(FormatError::from)
                    .and_then(|v| parse_cone(&v, self.ambient_dim, &path)),
            );
        }
    }
}

pub fn read_fan_lines<R: BufRead>(reader: R) -> Result<TropicalCollection, FormatError> {
    let stream = ConeStream::new(reader)?;
    let (n, lin) = (stream.ambient_dim, stream.lineality.clone());
    let cones: Result<Vec<_>, _> = stream.collect();
    Ok(TropicalCollection::new(n, lin, cones?)?)
}

pub fn write_fan_lines<W: Write>(t: &TropicalCollection, mut w: W) -> Result<(), FormatError> {
    let header = json!({ "ambient_dim": t.ambient_dim(), "lineality": rows_json(t.lineality()) });
    writeln!(w, "{header}")?;
    for c in t.cones() {
        writeln!(w, "{}", cone_json(c))?;
    }
    Ok(())
}

pub fn group_from_json(v: &Value) -> Result<CoordSymmetryGroup, FormatError> {
    if let Some(m) = v.get("hyperoctahedral_cube") {
        return Ok(CoordSymmetryGroup::hyperoctahedral_on_cube(parse_usize(m, "hyperoctahedral_cube")?)?);
    }
    let n = parse_usize(field(v, "n_coords")?, "n_coords")?;
    let gens = match v.get("generators") {
        Some(g) => parse_rows(g, "generators")?,
        None => vec![],
    };
    let gens: Result<Vec<Vec<usize>>, FormatError> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            g.iter()
                .map(|x| x.to_usize().ok_or_else(|| bad(&format!("generators[{i}]"), "negative entry")))
                .collect()
        })
        .collect();
    Ok(CoordSymmetryGroup::from_generators(n, gens?)?)
}

pub fn group_to_json(g: &CoordSymmetryGroup) -> Value {
    json!({ "n_coords": g.n_coords(), "generators": g.generators() })
}

pub fn matrix_from_json(v: &Value, path: &str) -> Result<IntMatrix, FormatError> {
    let rows = parse_rows(v, path)?;
    let cols = rows.first().map_or(0, |r| r.len());
    check_len(&rows, cols, path)?;
    Ok(IntMatrix::from_rows(&rows, cols))
}

pub fn matrix_to_json(m: &IntMatrix) -> Value {
    rows_json(&m.row_vecs())
}

/// `{ "A": rows, "delta": k, "lambda": rows }`; `lambda` holds lattice
/// generators as rows and may be omitted.
pub fn map_from_json(v: &Value) -> Result<MonomialMapSpec, FormatError> {
    let a = matrix_from_json(field(v, "A")?, "A")?;
    let delta = match v.get("delta") {
        Some(d) => parse_u64(d, "delta")?,
        None => 1,
    };
    let lambda = match v.get("lambda") {
        Some(l) => {
            let rows = parse_rows(l, "lambda")?;
            check_len(&rows, a.cols(), "lambda")?;
            IntMatrix::from_columns(&rows, a.cols())
        }
        None => IntMatrix::zeros(a.cols(), 0),
    };
    Ok(MonomialMapSpec { a, delta, lambda })
}

/// Exponent vectors of a polynomial: `{ "n": n, "monomials": [[...], ...] }`.
pub fn poly_from_json(v: &Value) -> Result<(usize, Vec<IntVec>), FormatError> {
    let n = parse_usize(field(v, "n")?, "n")?;
    let monos = parse_rows(field(v, "monomials")?, "monomials")?;
    check_len(&monos, n, "monomials")?;
    if monos.is_empty() {
        return Err(bad("monomials", "empty"));
    }
    for (i, m) in monos.iter().enumerate() {
        if m.iter().any(|x| x < &Int::zero()) {
            return Err(bad(&format!("monomials[{i}]"), "negative exponent"));
        }
    }
    Ok((n, monos))
}

pub fn ledger_to_json(l: &PolytopeLedger) -> Value {
    let vertices: Vec<Value> = l
        .vertices
        .values()
        .map(|w| {
            let src = serde_json::to_value(w.source).unwrap_or(Value::Null);
            json!({ "v": vec_json(&w.vertex), "objective": vec_json(&w.objective), "source": src })
        })
        .collect();
    let facets: Vec<Value> = l
        .facets
        .iter()
        .map(|f| json!({ "normal": vec_json(&f.normal), "bound": int_json(&f.bound), "certified": f.certified }))
        .collect();
    let mut obj = Map::new();
    obj.insert("vertices".into(), Value::Array(vertices));
    obj.insert("facets".into(), Value::Array(facets));
    Value::Object(obj)
}

pub fn ledger_from_json(v: &Value) -> Result<PolytopeLedger, FormatError> {
    let mut ledger = PolytopeLedger::default();
    let verts = field(v, "vertices")?.as_array().ok_or_else(|| bad("vertices", "expected an array"))?;
    for (i, x) in verts.iter().enumerate() {
        let path = format!("vertices[{i}]");
        let vertex = parse_vec(field(x, "v")?, &format!("{path}.v"))?;
        let objective = parse_vec(field(x, "objective")?, &format!("{path}.objective"))?;
        let source = match x.get("source") {
            Some(s) => serde_json::from_value(s.clone()).map_err(|e| bad(&path, e.to_string()))?,
            None => WitnessSource::Shoot,
        };
        ledger.vertices.insert(vertex.clone(), VertexWitness { vertex, objective, source });
    }
    if let Some(fs) = v.get("facets") {
        let fs = fs.as_array().ok_or_else(|| bad("facets", "expected an array"))?;
        for (i, f) in fs.iter().enumerate() {
            let path = format!("facets[{i}]");
            ledger.facets.push(FacetInequality {
                normal: parse_vec(field(f, "normal")?, &format!("{path}.normal"))?,
                bound: parse_int(field(f, "bound")?, &format!("{path}.bound"))?,
                certified: f.get("certified").and_then(Value::as_bool).unwrap_or(false),
            });
        }
    }
    Ok(ledger)
}

/// One vertex per line, comma separated.
pub fn vertices_csv(l: &PolytopeLedger) -> String {
    let mut out = String::new();
    for v in l.vertices.keys() {
        let row: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ints;

    #[test]
    fn integers_in_three_spellings() {
        assert_eq!(parse_int(&json!(5), "x").unwrap(), Int::from(5));
        assert_eq!(parse_int(&json!("-123456789012345678901234567890"), "x").unwrap().to_string(),
                   "-123456789012345678901234567890");
        assert_eq!(parse_int(&json!("6/3"), "x").unwrap(), Int::from(2));
        assert!(parse_int(&json!("1/2"), "x").is_err());
        assert!(parse_int(&json!(1.5), "x").is_err());
        assert!(parse_int(&json!("1/0"), "x").is_err());
    }

    #[test]
    fn fan_round_trip() {
        let t = TropicalCollection::new(
            2,
            vec![],
            vec![
                WeightedCone::new(vec![ints(&[1, 1])], 1),
                WeightedCone::new(vec![ints(&[-1, 0])], 1),
                WeightedCone::new(vec![ints(&[0, -1])], 1),
            ],
        )
        .unwrap();
        let v = fan_to_json(&t);
        assert!(v["cones"][0]["rays"][0][0].is_string());
        assert_eq!(fan_from_json(&v).unwrap(), t);
        let mut buf = Vec::new();
        write_fan_lines(&t, &mut buf).unwrap();
        assert_eq!(read_fan_lines(&buf[..]).unwrap(), t);
    }

    #[test]
    fn orbit_compressed() {
        let v = json!({
            "group": { "n_coords": 2, "generators": [[1, 0]] },
            "orbit_representatives": [ { "rays": [[1, 0]], "multiplicity": 1 } ]
        });
        assert_eq!(fan_from_json(&v).unwrap().len(), 2);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(fan_from_str("{"), Err(FormatError::Json(_))));
        assert!(matches!(fan_from_str("{}"), Err(FormatError::MissingField("ambient_dim"))));
        assert!(matches!(
            fan_from_str(r#"{"ambient_dim":2,"cones":[{"rays":[[1]],"multiplicity":1}]}"#),
            Err(FormatError::BadValue { .. })
        ));
        assert!(matches!(
            fan_from_str(r#"{"ambient_dim":2,"cones":[{"rays":[[1,0]],"multiplicity":-1}]}"#),
            Err(FormatError::BadValue { .. })
        ));
    }

    #[test]
    fn groups_and_maps() {
        let g = group_from_json(&json!({ "hyperoctahedral_cube": 3 })).unwrap();
        assert_eq!(g.order().unwrap(), 48);
        let m = map_from_json(&json!({ "A": [[1, 0, 1, 0], [0, 1, 0, 1]], "delta": "2" })).unwrap();
        assert_eq!((m.a.rows(), m.a.cols(), m.delta, m.lambda.cols()), (2, 4, 2, 0));
        let (n, monos) = poly_from_json(&json!({ "n": 2, "monomials": [[0, 0], [1, 0]] })).unwrap();
        assert_eq!((n, monos.len()), (2, 2));
        assert!(poly_from_json(&json!({ "n": 1, "monomials": [[-1]] })).is_err());
    }

    #[test]
    fn ledger_round_trip() {
        let mut l = PolytopeLedger::default();
        let w = VertexWitness { vertex: ints(&[1, 0]), objective: ints(&[2, 1]), source: WitnessSource::Walk };
        l.vertices.insert(w.vertex.clone(), w);
        l.facets.push(FacetInequality { normal: ints(&[1, 1]), bound: Int::from(1), certified: true });
        let v = ledger_to_json(&l);
        let back = ledger_from_json(&v).unwrap();
        assert_eq!(back.vertices, l.vertices);
        assert_eq!(back.facets, l.facets);
        assert_eq!(vertices_csv(&l), "1,0\n");
    }
}
