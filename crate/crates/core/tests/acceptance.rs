//! One line per acceptance criterion; exits non-zero if any fails.
//!
//! Set `TROPNEWTON_K24_FAN` to an orbit-compressed fan file to run the
//! ingestion checks of criterion 8 on real data as well.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use tropnewton::fan::{check_balancing_curve, IntVec, TropicalCollection, WeightedCone};
use tropnewton::format::{fan_from_json, fan_from_str, group_to_json, rows_json};
use tropnewton::hull::{convex_hull, weighted_normal_skeleton};
use tropnewton::linalg::{integer_kernel, ints, lattice_index, smith_index_oracle, Int, IntMatrix, LinalgError};
use tropnewton::newton::{auto_seed, complete_polytope, containing_normal_rank, multidegree, PolytopeLedger, SearchOptions};
use tropnewton::oracle::{check_shoot, check_walks, random_exponents};
use tropnewton::pushforward::hadamard_square;
use tropnewton::symmetry::CoordSymmetryGroup;

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn curve(rays: &[[i64; 3]]) -> TropicalCollection {
    let cones = rays.iter().map(|r| WeightedCone::new(vec![ints(r)], 1)).collect();
    TropicalCollection::new(3, vec![], cones).unwrap()
}

fn six_ray_curve() -> TropicalCollection {
    curve(&[[1, 0, 0], [1, 0, 1], [1, 1, 0], [1, 1, 2], [1, 2, 1], [-5, -4, -4]])
}

fn axes() -> TropicalCollection {
    curve(&[[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]])
}

fn complete(t: &TropicalCollection) -> Result<PolytopeLedger, String> {
    let opts = SearchOptions::default();
    let seed = auto_seed(t, &opts).map_err(|e| e.to_string())?;
    complete_polytope(t, &[seed], &CoordSymmetryGroup::trivial(t.ambient_dim()), &opts).map_err(|e| e.to_string())
}

fn f_vector(t: &TropicalCollection) -> Result<(usize, usize, usize), String> {
    let ledger = complete(t)?;
    let h = convex_hull(&ledger.vertex_list()).map_err(|e| e.to_string())?;
    Ok((h.vertices.len(), h.edges.len(), h.facets.len()))
}

fn within(start: Instant, limit: Duration, detail: String) -> Outcome {
    let took = start.elapsed();
    if took > limit {
        Err(format!("{detail}; took {took:.2?} (limit {limit:?})"))
    } else {
        Ok(format!("{detail}; {took:.2?}"))
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let c = six_ray_curve();
    if !check_balancing_curve(&c).map_err(|e| e.to_string())? {
        return Err("curve not balanced".into());
    }
    let sq = hadamard_square(&c, 1, 0).map_err(|e| e.to_string())?;
    let fv = f_vector(&sq)?;
    let detail = format!("{} cones, f-vector {:?}", sq.len(), fv);
    if sq.len() != 15 || fv != (16, 25, 11) {
        return Err(detail);
    }
    within(start, Duration::from_secs(10), detail)
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let sq = hadamard_square(&axes(), 1, 0).map_err(|e| e.to_string())?;
    let fv = f_vector(&sq)?;
    let detail = format!("{} cones, f-vector {:?}", sq.len(), fv);
    if fv != (8, 12, 6) {
        return Err(detail);
    }
    within(start, Duration::from_secs(5), detail)
}

fn lambda_rows() -> Vec<IntVec> {
    let mut rows = vec![ints(&[1; 16])];
    for b in 0..4 {
        rows.push((0..16).map(|k| Int::from((k >> (3 - b)) & 1)).collect());
    }
    rows
}

fn parity_sums(v: &[i64]) -> (i64, i64) {
    let even = (0..16usize).filter(|k| k.count_ones() % 2 == 0).map(|k| v[k]).sum();
    let odd = (0..16usize).filter(|k| k.count_ones() % 2 == 1).map(|k| v[k]).sum();
    (even, odd)
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let vertex = [0i64, 0, 1, 17, 13, 6, 17, 1, 17, 1, 6, 13, 1, 17, 0, 0];
    let grading = IntMatrix::from_rows(&lambda_rows(), 16);
    let deg = multidegree(&grading, &ints(&vertex)).map_err(|e| e.to_string())?;
    if deg != ints(&[110, 55, 55, 55, 55]) {
        return Err(format!("multidegree {deg:?}"));
    }
    let g = CoordSymmetryGroup::hyperoctahedral_on_cube(4).map_err(|e| e.to_string())?;
    let orbit = g.orbit(&vertex).map_err(|e| e.to_string())?;
    if orbit.len() != 192 {
        return Err(format!("orbit size {}", orbit.len()));
    }
    let worst = orbit.iter().map(|v| parity_sums(v)).map(|(e, o)| e.min(o)).min().unwrap();
    if worst < 32 {
        return Err(format!("parity sum {worst} < 32 in the orbit"));
    }
    let (e, o) = parity_sums(&vertex);
    within(start, Duration::from_secs(1), format!("multidegree (110,55,55,55,55), orbit 192, parity sums {e}/{o}"))
}

fn corpus() -> Vec<Vec<IntVec>> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    (0..500)
        .map(|_| {
            let n = rng.gen_range(1..=4);
            random_exponents(&mut rng, n, 15, 8)
        })
        .collect()
}

fn criterion_4(polys: &[Vec<IntVec>]) -> Outcome {
    let start = Instant::now();
    let (mut checked, mut matched) = (0, 0);
    for (i, p) in polys.iter().enumerate() {
        let r = check_shoot(p, 20, i as u64).map_err(|e| format!("polynomial {i}: {e}"))?;
        checked += r.checked;
        matched += r.matched;
    }
    let detail = format!("{matched}/{checked} objectives over {} polynomials", polys.len());
    if matched != checked || checked < 500 * 20 {
        return Err(detail);
    }
    within(start, Duration::from_secs(120), detail)
}

fn criterion_5(polys: &[Vec<IntVec>]) -> Outcome {
    let start = Instant::now();
    let (mut checked, mut failed) = (0, 0);
    for (i, p) in polys.iter().enumerate() {
        let (c, bad) = check_walks(p, 4, i as u64).map_err(|e| format!("polynomial {i}: {e}"))?;
        checked += c;
        failed += bad.len();
    }
    let detail = format!("{} of {checked} walk witnesses re-shoot to their vertex", checked - failed);
    if failed > 0 || checked == 0 {
        return Err(detail);
    }
    within(start, Duration::from_secs(120), detail)
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> IntMatrix {
    IntMatrix::new(rows, cols, (0..rows * cols).map(|_| Int::from(rng.gen_range(-9i64..=9))).collect())
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut compared, mut rank_drops) = (0, 0);
    while compared < 1000 {
        let d = rng.gen_range(1..=6);
        let r = rng.gen_range(1..=6);
        let k = rng.gen_range(1..=r);
        let a = random_matrix(&mut rng, d, r);
        let b = random_matrix(&mut rng, r, k);
        if b.rank() < k {
            continue;
        }
        let ab = a.mul(&b).unwrap();
        let ours = lattice_index(&a, &b);
        match (smith_index_oracle(&ab), smith_index_oracle(&b), ours) {
            (Ok(num), Ok(den), Ok(x)) if x == &num / &den => compared += 1,
            (Err(LinalgError::RankDrop { .. }), _, Err(LinalgError::RankDrop { .. })) => rank_drops += 1,
            (x, y, z) => return Err(format!("A={a:?} B={b:?}: smith {x:?}/{y:?}, ours {z:?}")),
        }
    }
    within(start, Duration::from_secs(30), format!("{compared} indices agree, {rank_drops} rank drops agree"))
}

fn same_as_hull(name: &str, t: &TropicalCollection) -> Result<String, String> {
    let ledger = complete(t)?;
    let h = convex_hull(&ledger.vertex_list()).map_err(|e| e.to_string())?;
    let hull_facets: BTreeSet<(IntVec, Int)> = h.facets.iter().map(|f| (f.normal.clone(), f.bound.clone())).collect();
    let ours: BTreeSet<(IntVec, Int)> = ledger.facets.iter().map(|f| (f.normal.clone(), f.bound.clone())).collect();
    if h.vertices.len() != ledger.vertices.len() || hull_facets != ours {
        return Err(format!("{name}: ledger differs from hull"));
    }
    Ok(format!("{name} {}v/{}f", h.vertices.len(), h.facets.len()))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let tri = convex_hull(&[ints(&[0, 0]), ints(&[1, 0]), ints(&[0, 1])]).map_err(|e| e.to_string())?;
    let tri = weighted_normal_skeleton(&tri).map_err(|e| e.to_string())?;
    let cube = hadamard_square(&axes(), 2, 0).map_err(|e| e.to_string())?;
    let square = hadamard_square(&six_ray_curve(), 1, 0).map_err(|e| e.to_string())?;
    let parts = [same_as_hull("triangle", &tri)?, same_as_hull("cube", &cube)?, same_as_hull("curve", &square)?];
    within(start, Duration::from_secs(30), parts.join(", "))
}

const FACET_RAYS: [[i64; 16]; 8] = [
    [1, 0, 0, 1, 0, 1, 1, 2, 2, 1, 1, 0, 1, 0, 0, 1],
    [1, 3, 3, 1, 3, 1, 1, 3, 1, 3, 3, 1, 3, 1, 1, 3],
    [2, 1, 1, 0, 1, 0, 0, 0, 2, 1, 1, 0, 1, 0, 0, 0],
    [2, 1, 1, 2, 1, 2, 2, 1, 1, 2, 2, 1, 2, 1, 1, 2],
    [3, 2, 2, 1, 2, 1, 1, 0, 2, 1, 1, 0, 1, 0, 0, 0],
    [3, 3, 3, 3, 3, 3, 3, 3, 1, 3, 3, 1, 3, 1, 1, 3],
    [-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [-1, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0, -1, -1, -1, -1],
];

/// Codimension-one cones through `w` whose normals span the complement of
/// the lineality space and `w`: the local picture at a facet normal.
fn cones_through(w: &IntVec, lambda: &[IntVec]) -> Vec<WeightedCone> {
    let mut base = lambda.to_vec();
    base.push(w.clone());
    let normals = integer_kernel(&base, 16);
    normals
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let mut rows = base.clone();
            rows.push(l.clone());
            let mut rays = integer_kernel(&rows, 16);
            rays.push(w.clone());
            WeightedCone::new(rays, 1 + (i as u64 % 2))
        })
        .collect()
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let lambda = lambda_rows();
    let b4 = CoordSymmetryGroup::hyperoctahedral_on_cube(4).map_err(|e| e.to_string())?;

    // published counts are consistent with orbits of a group of order 384
    let table = [(2, 1), (8, 2), (12, 1), (16, 3), (24, 1), (32, 1), (48, 7), (64, 3), (96, 15), (192, 67), (384, 145)];
    let orbits: usize = table.iter().map(|&(_, c)| c).sum();
    let facets: usize = table.iter().map(|&(s, c)| s * c).sum();
    if orbits != 246 || facets != 70_646 || table.iter().any(|&(s, _)| 384 % s != 0) {
        return Err(format!("facet table sums to {facets} in {orbits} orbits"));
    }
    // (orbit representatives, expanded total) for vertices and for cones
    for (reps, total) in [(44_938usize, 17_214_912usize), (18_972, 6_865_824)] {
        if reps * 384 < total {
            return Err(format!("{total} exceeds {reps} full orbits"));
        }
    }

    // orbit sizes of the facet directions (modulo the lineality space) appear in the table
    let sizes: BTreeSet<usize> = table.iter().map(|&(s, _)| s).collect();
    let dummy = TropicalCollection::new(16, lambda.clone(), vec![]).map_err(|e| e.to_string())?;
    let proj = dummy.projector();
    for w in FACET_RAYS {
        let wr = proj.reduce_primitive(&ints(&w)).ok_or("facet ray in the lineality space")?;
        let mut orbit: BTreeSet<IntVec> = BTreeSet::new();
        for g in b4.elements().map_err(|e| e.to_string())? {
            let image = tropnewton::symmetry::act(g, &wr);
            orbit.insert(proj.reduce_primitive(&image).unwrap());
        }
        if !sizes.contains(&orbit.len()) {
            return Err(format!("facet direction {w:?} has orbit size {}", orbit.len()));
        }
    }

    // ingestion of orbit-compressed data: expansion count and weights
    let w0 = ints(&FACET_RAYS[0]);
    let reps = cones_through(&w0, &lambda);
    let doc = json!({
        "group": group_to_json(&b4),
        "ambient_dim": 16,
        "lineality": rows_json(&lambda),
        "orbit_representatives": reps.iter().map(|c| json!({
            "rays": rows_json(&c.rays),
            "multiplicity": c.multiplicity.to_string(),
        })).collect::<Vec<_>>(),
    });
    let expanded = fan_from_json(&doc).map_err(|e| e.to_string())?;
    let reps_t = TropicalCollection::new(16, lambda.clone(), reps.clone()).map_err(|e| e.to_string())?;
    let mut expected: BTreeSet<Vec<IntVec>> = BTreeSet::new();
    for id in 0..reps_t.len() {
        for c in b4.orbit_cones(&reps_t, id).map_err(|e| e.to_string())? {
            expected.insert(c.rays);
        }
    }
    if expanded.len() != expected.len() {
        return Err(format!("expanded {} cones, expected {}", expanded.len(), expected.len()));
    }
    if expanded.cones().iter().any(|c| c.multiplicity != 1 && c.multiplicity != 2) {
        return Err("multiplicity outside {1,2}".into());
    }

    // rank stage of facet certification at each listed direction
    let needed = 16 - lambda.len() - 1;
    let mut ranks = Vec::new();
    for w in FACET_RAYS {
        let w = ints(&w);
        let local = TropicalCollection::new(16, lambda.clone(), cones_through(&w, &lambda)).map_err(|e| e.to_string())?;
        let rank = containing_normal_rank(&local, &w).map_err(|e| e.to_string())?;
        if rank < needed {
            return Err(format!("rank {rank} < {needed} at {w:?}"));
        }
        ranks.push(rank);
    }
    let rank0 = containing_normal_rank(&expanded, &w0).map_err(|e| e.to_string())?;
    let generic: IntVec = (0..16).map(|i| Int::from(i * i % 7 + 3 * i)).collect();
    let control = containing_normal_rank(&expanded, &generic).map_err(|e| e.to_string())?;
    if rank0 < needed || control >= needed {
        return Err(format!("expanded rank {rank0}, control rank {control}"));
    }

    let mut detail = format!(
        "synthetic: {} reps -> {} cones, weights in {{1,2}}, 8 directions reach rank {needed}",
        reps.len(),
        expanded.len()
    );
    if let Ok(path) = std::env::var("TROPNEWTON_K24_FAN") {
        let text = std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
        let t = fan_from_str(&text).map_err(|e| e.to_string())?;
        if t.len() != 6_865_824 || t.cones().iter().any(|c| c.multiplicity != 1 && c.multiplicity != 2) {
            return Err(format!("{path}: {} cones", t.len()));
        }
        detail.push_str(&format!("; {path}: {} cones", t.len()));
    } else {
        detail.push_str("; full data not supplied (TROPNEWTON_K24_FAN)");
    }
    within(start, Duration::from_secs(60), detail)
}

fn main() {
    let polys = corpus();
    let criteria: Vec<(&str, Check)> = vec![
        ("1 six-ray curve: 15 cones, 16 vertices, 25 edges, 11 facets", Box::new(criterion_1)),
        ("2 cube from the coordinate axes: f-vector (8,12,6)", Box::new(criterion_2)),
        ("3 multidegree, orbit size and parity bounds", Box::new(criterion_3)),
        ("4 shooting agrees with direct maximization", Box::new(|| criterion_4(&polys))),
        ("5 walk witnesses re-shoot consistently", Box::new(|| criterion_5(&polys))),
        ("6 lattice index equals Smith normal form index", Box::new(criterion_6)),
        ("7 completion equals the hull of its vertices", Box::new(criterion_7)),
        ("8 orbit-compressed ingestion and facet rank stage", Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name} ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} ({detail})");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
