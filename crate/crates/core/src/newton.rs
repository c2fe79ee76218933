//! Newton polytope reconstruction from a weighted tropical hypersurface.
//!
//! Convention: objectives are maximized. For an objective `w` in no cone,
//! the vertex `P^w` has `i`-th coordinate equal to the weighted number of
//! crossings of the ray `w - t*e_i`, `t > 0`, with the hypersurface, each
//! crossing of cone `σ` counting `m_σ * |ℓ^σ_i|`. The polytope obtained this
//! way lies in the nonnegative orthant and touches every coordinate
//! hyperplane.

use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::{signed_unit, FanError, IntVec, IntersectionRecord, LineMeet, TropicalCollection};
use crate::hull::{cone_facets, HullError};
use crate::linalg::{dot, primitive_int, rank_of, Int, IntMatrix, LinalgError, Rat};
use crate::symmetry::{CoordSymmetryGroup, SymmetryError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NewtonError {
    #[error("objective lies in cone {0}")]
    ObjectiveInCone(usize),
    #[error("ray in direction {coord} meets the boundary of cone {cone}")]
    GenericityViolation { cone: usize, coord: usize },
    #[error("cones crossed at t = {param} along coordinate {coord} have different normals")]
    NonParallelTie { coord: usize, param: Rat },
    #[error("intersection records are inconsistent: {0}")]
    InconsistentRecords(String),
    #[error("walked vertex {walked:?} differs from re-shot vertex {shot:?}")]
    WalkMismatch { walked: IntVec, shot: IntVec },
    #[error("no generic objective found near {0:?}")]
    NoGenericObjective(IntVec),
    #[error("point still lies in a cone after stepping along every coordinate")]
    ExhaustedCoordinates,
    #[error("no progress: inequality {normal:?}·x <= {bound} at vertex {vertex:?} neither certifies nor yields a new vertex")]
    NoProgress { vertex: IntVec, normal: IntVec, bound: Int },
    #[error("seed {0:?} is not reproduced by shooting at its objective")]
    InvalidSeed(IntVec),
    #[error("no seed vertices")]
    EmptySeeds,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl NewtonError {
    pub fn variant_name(&self) -> &'static str {
        match self {
            NewtonError::ObjectiveInCone(_) => "ObjectiveInCone",
            NewtonError::GenericityViolation { .. } => "GenericityViolation",
            NewtonError::NonParallelTie { .. } => "NonParallelTie",
            NewtonError::InconsistentRecords(_) => "InconsistentRecords",
            NewtonError::WalkMismatch { .. } => "WalkMismatch",
            NewtonError::NoGenericObjective(_) => "NoGenericObjective",
            NewtonError::ExhaustedCoordinates => "ExhaustedCoordinates",
            NewtonError::NoProgress { .. } => "NoProgress",
            NewtonError::InvalidSeed(_) => "InvalidSeed",
            NewtonError::EmptySeeds => "EmptySeeds",
            NewtonError::DimensionMismatch(_) => "DimensionMismatch",
            NewtonError::Fan(e) => e.variant_name(),
            NewtonError::Hull(e) => e.variant_name(),
            NewtonError::Symmetry(e) => e.variant_name(),
            NewtonError::Linalg(e) => e.variant_name(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    Shoot,
    Walk,
    FacetRepair,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexWitness {
    pub vertex: IntVec,
    pub objective: IntVec,
    pub source: WitnessSource,
}

/// `normal·x <= bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacetInequality {
    pub normal: IntVec,
    pub bound: Int,
    pub certified: bool,
}

/// Reconstruction state: known vertices with witnesses, certified facets, and
/// the edge directions (cone normals) of the input.
#[derive(Clone, Debug, Default)]
pub struct PolytopeLedger {
    pub vertices: BTreeMap<IntVec, VertexWitness>,
    pub facets: Vec<FacetInequality>,
    pub edge_directions: BTreeSet<IntVec>,
}

impl PolytopeLedger {
    pub fn vertex_list(&self) -> Vec<IntVec> {
        self.vertices.keys().cloned().collect()
    }
}

/// Knobs shared by the search routines.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Seed for the perturbations used to restore genericity.
    pub seed: u64,
    /// Attempts before giving up on a generic perturbation.
    pub max_perturbations: usize,
    /// Walk along coordinate directions from every newly found vertex.
    pub walk_new_vertices: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { seed: 0, max_perturbations: 64, walk_new_vertices: true }
    }
}

/// Result of one shot: the vertex and every crossing, sorted by
/// `(coord, param, cone_id)`.
#[derive(Clone, Debug)]
pub struct Shot {
    pub vertex: IntVec,
    pub records: Vec<IntersectionRecord>,
}

#[derive(Default)]
struct ShotAcc {
    sums: Vec<Int>,
    records: Vec<IntersectionRecord>,
    in_cone: Option<usize>,
    violation: Option<(usize, usize)>,
    fan_error: Option<(usize, FanError)>,
}

fn min_opt<T: Ord + Copy>(a: Option<T>, b: Option<T>) -> Option<T> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl ShotAcc {
    fn new(n: usize) -> Self {
        ShotAcc { sums: vec![Int::zero(); n], ..Default::default() }
    }

    fn merge(mut self, other: ShotAcc) -> ShotAcc {
        for (a, b) in self.sums.iter_mut().zip(other.sums) {
            *a += b;
        }
        self.records.extend(other.records);
        self.in_cone = min_opt(self.in_cone, other.in_cone);
        self.violation = min_opt(self.violation, other.violation);
        self.fan_error = match (self.fan_error, other.fan_error) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, None) => a,
            (None, b) => b,
        };
        self
    }
}

fn check_dim(t: &TropicalCollection, w: &[Int]) -> Result<(), NewtonError> {
    if w.len() != t.ambient_dim() {
        return Err(NewtonError::DimensionMismatch(format!(
            "objective of length {} in ambient dimension {}",
            w.len(),
            t.ambient_dim()
        )));
    }
    Ok(())
}

fn shoot_cone(t: &TropicalCollection, id: usize, ws: &[IntVec], accs: &mut [ShotAcc]) {
    let factor = match t.factor(id) {
        Ok(f) => f,
        Err(e) => {
            for acc in accs.iter_mut() {
                acc.fan_error = Some((id, e.clone()));
            }
            return;
        }
    };
    let Some(normal) = factor.normal().cloned() else {
        let e = FanError::WrongCodimension {
            cone: id,
            kernel_dim: t.ambient_dim().saturating_sub(t.cones()[id].rays.len() + t.lineality_dim()),
        };
        for acc in accs.iter_mut() {
            acc.fan_error = Some((id, e.clone()));
        }
        return;
    };
    let m = Int::from(t.cones()[id].multiplicity);
    let n = t.ambient_dim();
    for (w, acc) in ws.iter().zip(accs.iter_mut()) {
        if factor.contains(w).0 {
            acc.in_cone = min_opt(acc.in_cone, Some(id));
            continue;
        }
        for i in 0..n {
            if normal[i].is_zero() {
                continue;
            }
            let dir = signed_unit(n, i, -1);
            if let Some(LineMeet::Point { t: param, boundary }) = factor.line_meet(w, &dir) {
                if !param.is_positive() {
                    continue;
                }
                if boundary {
                    acc.violation = min_opt(acc.violation, Some((id, i)));
                    continue;
                }
                acc.sums[i] += &m * normal[i].abs();
                acc.records.push(IntersectionRecord { cone_id: id, coord: i, param, boundary_hit: false });
            }
        }
    }
}

fn finish(acc: ShotAcc) -> Result<Shot, NewtonError> {
    if let Some((_, e)) = acc.fan_error {
        return Err(e.into());
    }
    if let Some(id) = acc.in_cone {
        return Err(NewtonError::ObjectiveInCone(id));
    }
    if let Some((cone, coord)) = acc.violation {
        return Err(NewtonError::GenericityViolation { cone, coord });
    }
    let mut records = acc.records;
    records.sort_by(|a, b| (a.coord, &a.param, a.cone_id).cmp(&(b.coord, &b.param, b.cone_id)));
    Ok(Shot { vertex: acc.sums, records })
}

/// Shoots several objectives in one parallel pass over the cones.
pub fn shoot_many(t: &TropicalCollection, ws: &[IntVec]) -> Vec<Result<Shot, NewtonError>> {
    let n = t.ambient_dim();
    let mut early: Vec<Option<NewtonError>> = ws.iter().map(|w| check_dim(t, w).err()).collect();
    let valid: Vec<IntVec> = ws
        .iter()
        .zip(&early)
        .map(|(w, e)| if e.is_none() { w.clone() } else { vec![Int::zero(); n] })
        .collect();
    let fresh = || (0..valid.len()).map(|_| ShotAcc::new(n)).collect::<Vec<_>>();
    let accs = (0..t.len())
        .into_par_iter()
        .fold(fresh, |mut accs, id| {
            shoot_cone(t, id, &valid, &mut accs);
            accs
        })
        .reduce(fresh, |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect());
    accs.into_iter()
        .zip(early.iter_mut())
        .map(|(acc, e)| match e.take() {
            Some(err) => Err(err),
            None => finish(acc),
        })
        .collect()
}

pub fn shoot(t: &TropicalCollection, w: &[Int]) -> Result<Shot, NewtonError> {
    shoot_many(t, &[w.to_vec()]).pop().expect("one result")
}

/// The vertex of the Newton polytope maximizing `w`.
pub fn ray_shoot(t: &TropicalCollection, w: &[Int]) -> Result<VertexWitness, NewtonError> {
    let s = shoot(t, w)?;
    Ok(VertexWitness { vertex: s.vertex, objective: w.to_vec(), source: WitnessSource::Shoot })
}

/// Same results as calling [`ray_shoot`] on each objective; errors are
/// reported per objective.
pub fn ray_shoot_batch(t: &TropicalCollection, ws: &[IntVec]) -> Vec<Result<VertexWitness, NewtonError>> {
    shoot_many(t, ws)
        .into_iter()
        .zip(ws)
        .map(|(r, w)| {
            r.map(|s| VertexWitness { vertex: s.vertex, objective: w.clone(), source: WitnessSource::Shoot })
        })
        .collect()
}

/// Crossings of `w + sign*t*e_i`, `t > 0`, for every coordinate, sorted by
/// `(coord, param, cone_id)`. Boundary crossings are kept and flagged.
pub fn crossing_records(t: &TropicalCollection, w: &[Int], sign: i32) -> Result<Vec<IntersectionRecord>, NewtonError> {
    check_dim(t, w)?;
    let n = t.ambient_dim();
    let per_cone: Vec<Result<Vec<IntersectionRecord>, NewtonError>> = (0..t.len())
        .into_par_iter()
        .map(|id| {
            let f = t.factor(id)?;
            if f.contains(w).0 {
                return Err(NewtonError::ObjectiveInCone(id));
            }
            let l = t.normal(id)?;
            let mut out = Vec::new();
            for i in (0..n).filter(|&i| !l[i].is_zero()) {
                if let Some(LineMeet::Point { t: param, boundary }) = f.line_meet(w, &signed_unit(n, i, sign)) {
                    if param.is_positive() {
                        out.push(IntersectionRecord { cone_id: id, coord: i, param, boundary_hit: boundary });
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut records = Vec::new();
    for r in per_cone {
        records.extend(r?);
    }
    records.sort_by(|a, b| (a.coord, &a.param, a.cone_id).cmp(&(b.coord, &b.param, b.cone_id)));
    Ok(records)
}

fn in_no_cone(t: &TropicalCollection, p: &[Int]) -> Result<bool, NewtonError> {
    let hits: Result<Vec<bool>, FanError> = (0..t.len()).into_par_iter().map(|id| Ok(t.contains(id, p)?.0)).collect();
    Ok(!hits?.into_iter().any(|b| b))
}

/// Whether the segment `[a, b]` meets any cone.
fn segment_meets_cone(t: &TropicalCollection, a: &[Int], b: &[Int]) -> Result<bool, NewtonError> {
    let dir: IntVec = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let zero = Rat::zero();
    let one = Rat::one();
    let hits: Result<Vec<bool>, FanError> = (0..t.len())
        .into_par_iter()
        .map(|id| {
            Ok(match t.line_meet(id, a, &dir)? {
                LineMeet::Empty => false,
                LineMeet::Point { t: s, .. } => s >= zero && s <= one,
                LineMeet::Interval { lo, hi } => {
                    lo.as_ref().is_none_or(|l| *l <= one) && hi.as_ref().is_none_or(|h| *h >= zero)
                }
            })
        })
        .collect();
    Ok(hits?.into_iter().any(|b| b))
}

fn rng_for(seed: u64, w: &[Int]) -> ChaCha8Rng {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    w.hash(&mut h);
    ChaCha8Rng::seed_from_u64(seed ^ h.finish())
}

fn nearest_integers_inside(lo: &Rat, hi: Option<&Rat>) -> Vec<Int> {
    // integers strictly inside (lo, hi), nearest the midpoint first, at most 8
    match hi {
        None => {
            let start = lo.floor().to_integer() + Int::one();
            (0..8).map(|k| &start + Int::from(k)).collect()
        }
        Some(hi) => {
            let first = lo.floor().to_integer() + Int::one();
            let last = hi.ceil().to_integer() - Int::one();
            if first > last {
                return Vec::new();
            }
            let mid = ((lo + hi) / Rat::from_integer(Int::from(2))).round().to_integer();
            let mid = mid.clamp(first.clone(), last.clone());
            let mut out = vec![mid.clone()];
            let mut step = Int::one();
            while out.len() < 8 {
                let below = &mid - &step;
                let above = &mid + &step;
                let mut grew = false;
                if below >= first {
                    out.push(below);
                    grew = true;
                }
                if above <= last && out.len() < 8 {
                    out.push(above);
                    grew = true;
                }
                if !grew {
                    break;
                }
                step += 1;
            }
            out
        }
    }
}

/// Walks from `vertex` (the shot at `w`) across the walls met by
/// `w + sign*t*e_i` in order, emitting each vertex passed with an integral
/// objective strictly inside the corresponding segment.
pub fn walk(
    t: &TropicalCollection,
    w: &[Int],
    vertex: &[Int],
    records: &[IntersectionRecord],
    sign: i32,
    opts: &SearchOptions,
) -> Result<Vec<VertexWitness>, NewtonError> {
    check_dim(t, w)?;
    let n = t.ambient_dim();
    let mut out = Vec::new();
    for i in 0..n {
        let recs: Vec<&IntersectionRecord> = records.iter().filter(|r| r.coord == i).collect();
        if let Some(bad) = recs.iter().find(|r| !r.param.is_positive()) {
            return Err(NewtonError::InconsistentRecords(format!("parameter {} is not positive", bad.param)));
        }
        if let Some(bad) = recs.iter().find(|r| r.boundary_hit) {
            return Err(NewtonError::GenericityViolation { cone: bad.cone_id, coord: i });
        }
        let mut sorted = recs.clone();
        sorted.sort_by(|a, b| (&a.param, a.cone_id).cmp(&(&b.param, b.cone_id)));
        let mut groups: Vec<(Rat, Vec<usize>)> = Vec::new();
        for r in sorted {
            match groups.last_mut() {
                Some((p, ids)) if *p == r.param => ids.push(r.cone_id),
                _ => groups.push((r.param.clone(), vec![r.cone_id])),
            }
        }
        let mut v: IntVec = vertex.to_vec();
        for (g, (param, ids)) in groups.iter().enumerate() {
            let mut normal: Option<IntVec> = None;
            let mut weight = Int::zero();
            for &id in ids {
                let mut l = t.normal(id)?;
                if l[i].is_negative() {
                    l.iter_mut().for_each(|x| *x = -x.clone());
                }
                match &normal {
                    None => normal = Some(l),
                    Some(prev) if *prev != l => {
                        return Err(NewtonError::NonParallelTie { coord: i, param: param.clone() })
                    }
                    _ => {}
                }
                weight += Int::from(t.cones()[id].multiplicity);
            }
            let l = normal.expect("nonempty group");
            let step = Int::from(sign) * &weight;
            for (x, y) in v.iter_mut().zip(&l) {
                *x += &step * y;
            }
            let hi = groups.get(g + 1).map(|(p, _)| p);
            let (objective, shot) = segment_objective(t, w, i, sign, param, hi, opts)?;
            if shot.vertex != v {
                return Err(NewtonError::WalkMismatch { walked: v, shot: shot.vertex });
            }
            out.push(VertexWitness { vertex: v.clone(), objective, source: WitnessSource::Walk });
        }
    }
    Ok(out)
}

/// An integral objective on the open segment `w + sign*t*e_coord`,
/// `lo < t < hi`, whose shot meets no cone boundary. Integers nearest the
/// midpoint are tried first; then `w` is rescaled so the segment holds more
/// integers; last, a same-chamber perturbation is used.
pub fn segment_objective(
    t: &TropicalCollection,
    w: &[Int],
    coord: usize,
    sign: i32,
    lo: &Rat,
    hi: Option<&Rat>,
    opts: &SearchOptions,
) -> Result<(IntVec, Shot), NewtonError> {
    let s = Int::from(sign);
    let mut scale = Int::one();
    let mut fallback: Option<IntVec> = None;
    for _ in 0..6 {
        let sr = Rat::from_integer(scale.clone());
        let lo_s = lo * &sr;
        let hi_s = hi.map(|h| h * &sr);
        for p in nearest_integers_inside(&lo_s, hi_s.as_ref()) {
            let mut obj: IntVec = w.iter().map(|x| x * &scale).collect();
            obj[coord] += &s * &p;
            match shoot(t, &obj) {
                Ok(shot) => return Ok((obj, shot)),
                Err(NewtonError::GenericityViolation { .. }) => {
                    fallback.get_or_insert(obj);
                }
                Err(e) => return Err(e),
            }
        }
        let width = match hi {
            Some(h) => h - lo,
            None => Rat::one(),
        };
        let need = (Rat::from_integer(Int::from(4)) / width).ceil().to_integer().max(Int::from(2));
        scale *= need;
    }
    match fallback {
        Some(obj) => generic_objective(t, &obj, opts),
        None => Err(NewtonError::NoGenericObjective(w.to_vec())),
    }
}

/// An objective in the same open chamber as `w` whose shot meets no cone
/// boundary, together with that shot. `w` itself is used when it qualifies.
pub fn generic_objective(t: &TropicalCollection, w: &[Int], opts: &SearchOptions) -> Result<(IntVec, Shot), NewtonError> {
    match shoot(t, w) {
        Ok(s) => return Ok((w.to_vec(), s)),
        Err(NewtonError::GenericityViolation { .. }) => {}
        Err(e) => return Err(e),
    }
    let mut rng = rng_for(opts.seed, w);
    for k in 0..opts.max_perturbations {
        let scale = Int::from(1u64 << (k / 4 + 2).min(40));
        let cand: IntVec = w.iter().map(|x| x * &scale + Int::from(rng.gen_range(-3i64..=3))).collect();
        if cand.iter().all(Zero::is_zero) || segment_meets_cone(t, w, &cand)? {
            continue;
        }
        match shoot(t, &cand) {
            Ok(s) => return Ok((cand, s)),
            Err(NewtonError::GenericityViolation { .. }) | Err(NewtonError::ObjectiveInCone(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(NewtonError::NoGenericObjective(w.to_vec()))
}

/// Moves `w` off the hypersurface by successive steps along `-e_1, -e_2, ...`,
/// each shorter than the distance to the next cone entered, so the result
/// lies in an open chamber whose closure contains `w`.
pub fn find_chamber_vector(t: &TropicalCollection, w: &[Int]) -> Result<IntVec, NewtonError> {
    check_dim(t, w)?;
    let n = t.ambient_dim();
    let mut cur: IntVec = w.to_vec();
    for i in 0..=n {
        if in_no_cone(t, &cur)? {
            return Ok(cur);
        }
        if i == n {
            break;
        }
        let dir = signed_unit(n, i, -1);
        let entries: Result<Vec<Option<Rat>>, FanError> = (0..t.len())
            .into_par_iter()
            .map(|id| {
                Ok(match t.line_meet(id, &cur, &dir)? {
                    LineMeet::Point { t: s, .. } if s.is_positive() => Some(s),
                    LineMeet::Interval { lo: Some(l), .. } if l.is_positive() => Some(l),
                    _ => None,
                })
            })
            .collect();
        let t_min = entries?.into_iter().flatten().min();
        let step = match t_min {
            None => Rat::one(),
            Some(m) if m > Rat::one() => Rat::one(),
            Some(m) => m / Rat::from_integer(Int::from(2)),
        };
        // cur - step*e_i, rescaled to integers (cones are invariant under scaling)
        let den = step.denom().clone();
        cur.iter_mut().for_each(|x| *x *= &den);
        cur[i] -= step.numer();
        let g = crate::linalg::gcd_slice(&cur);
        if !g.is_zero() && !g.is_one() {
            cur.iter_mut().for_each(|x| *x = &*x / &g);
        }
    }
    Err(NewtonError::ExhaustedCoordinates)
}

/// Outcome of a facet check, with the shot used for the bound comparison.
#[derive(Clone, Debug)]
pub struct Certification {
    pub certified: bool,
    /// Rank of the normals of the cones containing the candidate normal.
    pub normal_rank: usize,
    pub shot: Option<VertexWitness>,
}

/// Rank of the normals of all cones containing `w` (boundary included).
pub fn containing_normal_rank(t: &TropicalCollection, w: &[Int]) -> Result<usize, NewtonError> {
    check_dim(t, w)?;
    let normals: Result<Vec<Option<IntVec>>, FanError> = (0..t.len())
        .into_par_iter()
        .map(|id| if t.contains(id, w)?.0 { Ok(Some(t.normal(id)?)) } else { Ok(None) })
        .collect();
    let mut normals: Vec<IntVec> = normals?.into_iter().flatten().collect();
    normals.sort();
    normals.dedup();
    Ok(rank_of(&normals))
}

pub fn certify_facet_detail(
    t: &TropicalCollection,
    w: &[Int],
    a: &Int,
    opts: &SearchOptions,
) -> Result<Certification, NewtonError> {
    let n = t.ambient_dim();
    let d = t.lineality_dim();
    let rank = containing_normal_rank(t, w)?;
    if rank + d + 1 < n {
        return Ok(Certification { certified: false, normal_rank: rank, shot: None });
    }
    let chamber = find_chamber_vector(t, w)?;
    let (objective, shot) = generic_objective(t, &chamber, opts)?;
    let certified = dot(w, &shot.vertex) == *a;
    Ok(Certification {
        certified,
        normal_rank: rank,
        shot: Some(VertexWitness { vertex: shot.vertex, objective, source: WitnessSource::FacetRepair }),
    })
}

/// Whether `w·x <= a` defines a facet of the Newton polytope.
pub fn certify_facet(t: &TropicalCollection, w: &[Int], a: &Int, opts: &SearchOptions) -> Result<bool, NewtonError> {
    Ok(certify_facet_detail(t, w, a, opts)?.certified)
}

/// A vertex maximizing `z`, shooting from a chamber next to `z`.
pub fn shoot_near(t: &TropicalCollection, z: &[Int], opts: &SearchOptions) -> Result<VertexWitness, NewtonError> {
    let chamber = find_chamber_vector(t, z)?;
    let (objective, shot) = generic_objective(t, &chamber, opts)?;
    Ok(VertexWitness { vertex: shot.vertex, objective, source: WitnessSource::FacetRepair })
}

pub fn multidegree(grading: &IntMatrix, vertex: &[Int]) -> Result<IntVec, NewtonError> {
    Ok(grading.mul_vec(vertex)?)
}

fn sub(a: &[Int], b: &[Int]) -> IntVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn neg(a: &[Int]) -> IntVec {
    a.iter().map(|x| -x.clone()).collect()
}

/// Adds the orbit of a witness; returns whether anything was new.
fn add_orbit(
    ledger: &mut PolytopeLedger,
    group: &CoordSymmetryGroup,
    w: &VertexWitness,
) -> Result<bool, NewtonError> {
    if ledger.vertices.contains_key(&w.vertex) {
        return Ok(false);
    }
    for (v, obj) in group.orbit_with(&w.vertex, &w.objective)? {
        ledger.vertices.entry(v.clone()).or_insert(VertexWitness { vertex: v, objective: obj, source: w.source });
    }
    Ok(true)
}

fn walk_from(
    t: &TropicalCollection,
    w: &VertexWitness,
    opts: &SearchOptions,
) -> Vec<VertexWitness> {
    let mut found = Vec::new();
    for sign in [-1, 1] {
        let records = match crossing_records(t, &w.objective, sign) {
            Ok(r) => r,
            Err(e) => {
                log::debug!("walk from {:?} skipped: {e}", w.vertex);
                continue;
            }
        };
        match walk(t, &w.objective, &w.vertex, &records, sign, opts) {
            Ok(v) => found.extend(v),
            Err(e) => log::debug!("walk from {:?} (sign {sign}) stopped: {e}", w.vertex),
        }
    }
    found
}

/// Candidate facet inequalities of the cone at `v` spanned by known vertices.
fn tangent_candidates(
    t: &TropicalCollection,
    ledger: &PolytopeLedger,
    v: &[Int],
) -> Vec<(IntVec, Int)> {
    let n = t.ambient_dim();
    let verts: Vec<&IntVec> = ledger.vertices.keys().filter(|u| u.as_slice() != v).collect();
    let mut rays: Vec<IntVec> = verts
        .iter()
        .filter_map(|u| {
            let d = primitive_int(&sub(u, v)).ok()?;
            (ledger.edge_directions.contains(&d) || ledger.edge_directions.contains(&neg(&d))).then_some(d)
        })
        .collect();
    rays.sort();
    rays.dedup();
    let facets = loop {
        let f = cone_facets(&rays, n);
        let violators: Vec<IntVec> = verts
            .iter()
            .map(|u| sub(u, v))
            .filter(|d| {
                f.outward.iter().any(|a| dot(a, d).is_positive()) || f.equations.iter().any(|e| !dot(e, d).is_zero())
            })
            .filter_map(|d| primitive_int(&d).ok())
            .collect();
        if violators.is_empty() {
            break f;
        }
        rays.extend(violators);
        rays.sort();
        rays.dedup();
    };
    let proj = t.projector();
    let mut out: Vec<(IntVec, Int)> = Vec::new();
    for e in &facets.equations {
        if let Some(z) = proj.reduce_primitive(e) {
            let nz = neg(&z);
            out.push((z.clone(), dot(&z, v)));
            out.push((nz.clone(), dot(&nz, v)));
        }
    }
    for a in &facets.outward {
        if let Some(z) = proj.reduce_primitive(a) {
            out.push((z.clone(), dot(&z, v)));
        }
    }
    out
}

/// Grows the vertex set from the seeds until every facet of the tangent
/// cones at known vertices is certified as a facet of the Newton polytope.
pub fn complete_polytope(
    t: &TropicalCollection,
    seeds: &[VertexWitness],
    group: &CoordSymmetryGroup,
    opts: &SearchOptions,
) -> Result<PolytopeLedger, NewtonError> {
    if seeds.is_empty() {
        return Err(NewtonError::EmptySeeds);
    }
    let mut ledger = PolytopeLedger::default();
    for id in 0..t.len() {
        ledger.edge_directions.insert(t.normal(id)?);
    }
    let mut pending: Vec<VertexWitness> = Vec::new();
    for s in seeds {
        check_dim(t, &s.vertex)?;
        let shot = shoot(t, &s.objective)?;
        if shot.vertex != s.vertex {
            return Err(NewtonError::InvalidSeed(s.vertex.clone()));
        }
        if add_orbit(&mut ledger, group, s)? {
            pending.push(s.clone());
        }
    }
    let mut certified: BTreeSet<(IntVec, Int)> = BTreeSet::new();
    let mut rejected: BTreeSet<(IntVec, Int)> = BTreeSet::new();
    loop {
        if opts.walk_new_vertices {
            while let Some(w) = pending.pop() {
                for found in walk_from(t, &w, opts) {
                    if add_orbit(&mut ledger, group, &found)? {
                        pending.push(found);
                    }
                }
            }
        }
        pending.clear();
        let mut reps: BTreeSet<IntVec> = BTreeSet::new();
        for v in ledger.vertices.keys() {
            reps.insert(group.canonical_rep(v)?);
        }
        let mut progress = false;
        let mut stuck: Option<(IntVec, IntVec, Int)> = None;
        'reps: for v in &reps {
            for (z, b) in tangent_candidates(t, &ledger, v) {
                let key = (z.clone(), b.clone());
                if certified.contains(&key) || rejected.contains(&key) {
                    continue;
                }
                let cert = certify_facet_detail(t, &z, &b, opts)?;
                if cert.certified {
                    log::debug!("certified {z:?}·x <= {b}");
                    certified.insert(key);
                    continue;
                }
                let found = match cert.shot {
                    Some(s) => s,
                    None => shoot_near(t, &z, opts)?,
                };
                if add_orbit(&mut ledger, group, &found)? {
                    log::debug!("new vertex {:?} from {z:?}", found.vertex);
                    pending.push(found);
                    progress = true;
                    break 'reps;
                }
                rejected.insert(key);
                stuck.get_or_insert((v.clone(), z, b));
            }
        }
        if progress {
            continue;
        }
        if let Some((vertex, normal, bound)) = stuck {
            return Err(NewtonError::NoProgress { vertex, normal, bound });
        }
        break;
    }
    let mut facets: BTreeSet<(IntVec, Int)> = BTreeSet::new();
    for (z, b) in &certified {
        for g in group.orbit(z)? {
            facets.insert((g, b.clone()));
        }
    }
    ledger.facets = facets.into_iter().map(|(normal, bound)| FacetInequality { normal, bound, certified: true }).collect();
    Ok(ledger)
}

/// Shoots a pseudo-random objective to obtain a first vertex.
pub fn auto_seed(t: &TropicalCollection, opts: &SearchOptions) -> Result<VertexWitness, NewtonError> {
    let n = t.ambient_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.max_perturbations.max(1) {
        let w: IntVec = (0..n).map(|_| Int::from(rng.gen_range(-1000i64..=1000))).collect();
        match shoot(t, &w) {
            Ok(s) => return Ok(VertexWitness { vertex: s.vertex, objective: w, source: WitnessSource::Shoot }),
            Err(NewtonError::GenericityViolation { .. }) | Err(NewtonError::ObjectiveInCone(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(NewtonError::NoGenericObjective(vec![Int::zero(); n]))
}

/// Small-integer view used in logs and tests.
pub fn to_i64s(v: &[Int]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::WeightedCone;
    use crate::linalg::ints;

    fn triangle() -> TropicalCollection {
        let cones = [[1, 1], [-1, 0], [0, -1]].iter().map(|r| WeightedCone::new(vec![ints(r)], 1)).collect();
        TropicalCollection::new(2, vec![], cones).unwrap()
    }

    fn segment() -> TropicalCollection {
        TropicalCollection::new(1, vec![], vec![WeightedCone::new(vec![], 2)]).unwrap()
    }

    #[test]
    fn shoot_examples() {
        assert_eq!(ray_shoot(&triangle(), &ints(&[2, 1])).unwrap().vertex, ints(&[1, 0]));
        assert_eq!(ray_shoot(&segment(), &ints(&[1])).unwrap().vertex, ints(&[2]));
        let batch = ray_shoot_batch(&triangle(), &[ints(&[2, 1]), ints(&[1, 2]), ints(&[-1, -1])]);
        let got: Vec<IntVec> = batch.into_iter().map(|r| r.unwrap().vertex).collect();
        assert_eq!(got, vec![ints(&[1, 0]), ints(&[0, 1]), ints(&[0, 0])]);
        assert_eq!(ray_shoot(&triangle(), &ints(&[1, 1])), Err(NewtonError::ObjectiveInCone(0)));
        // (1,0) - t*e_2 passes through the apex
        assert!(matches!(
            ray_shoot(&triangle(), &ints(&[0, 1])),
            Err(NewtonError::GenericityViolation { coord: 1, .. })
        ));
    }

    #[test]
    fn walk_examples() {
        let t = triangle();
        let opts = SearchOptions::default();
        let s = shoot(&t, &ints(&[2, 1])).unwrap();
        let out = walk(&t, &ints(&[2, 1]), &s.vertex, &s.records, -1, &opts).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].vertex, ints(&[0, 1]));
        assert_eq!(ray_shoot(&t, &out[0].objective).unwrap().vertex, ints(&[0, 1]));

        let seg = segment();
        let s = shoot(&seg, &ints(&[1])).unwrap();
        let out = walk(&seg, &ints(&[1]), &s.vertex, &s.records, -1, &opts).unwrap();
        assert_eq!(out[0].vertex, ints(&[0]));
        assert_eq!(out[0].objective, ints(&[-1]));
        assert!(walk(&seg, &ints(&[-1]), &ints(&[0]), &[], -1, &opts).unwrap().is_empty());
    }

    #[test]
    fn chamber_vectors() {
        let t = triangle();
        let c = find_chamber_vector(&t, &ints(&[1, 1])).unwrap();
        assert!(in_no_cone(&t, &c).unwrap());
        assert_eq!(find_chamber_vector(&t, &ints(&[2, 1])).unwrap(), ints(&[2, 1]));
        let c = find_chamber_vector(&segment(), &ints(&[0])).unwrap();
        assert!(c[0].is_negative());
    }

    #[test]
    fn certify_examples() {
        let t = triangle();
        let opts = SearchOptions::default();
        assert!(certify_facet(&t, &ints(&[1, 1]), &Int::from(1), &opts).unwrap());
        assert!(!certify_facet(&t, &ints(&[1, 0]), &Int::from(1), &opts).unwrap());
        assert!(!certify_facet(&t, &ints(&[1, 1]), &Int::from(2), &opts).unwrap());
        assert!(certify_facet(&t, &ints(&[-1, 0]), &Int::from(0), &opts).unwrap());
    }

    #[test]
    fn complete_triangle() {
        let t = triangle();
        let opts = SearchOptions { walk_new_vertices: false, ..Default::default() };
        let seed = ray_shoot(&t, &ints(&[2, 1])).unwrap();
        let ledger = complete_polytope(&t, &[seed], &CoordSymmetryGroup::trivial(2), &opts).unwrap();
        assert_eq!(ledger.vertex_list(), vec![ints(&[0, 0]), ints(&[0, 1]), ints(&[1, 0])]);
        let f: Vec<(IntVec, Int)> = ledger.facets.iter().map(|f| (f.normal.clone(), f.bound.clone())).collect();
        assert_eq!(
            f,
            vec![(ints(&[-1, 0]), Int::from(0)), (ints(&[0, -1]), Int::from(0)), (ints(&[1, 1]), Int::from(1))]
        );
    }

    #[test]
    fn multidegree_examples() {
        let lambda = IntMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(multidegree(&lambda, &ints(&[2, 3])).unwrap(), ints(&[5, 3]));
        assert_eq!(multidegree(&IntMatrix::identity(2), &ints(&[2, 3])).unwrap(), ints(&[2, 3]));
        assert_eq!(multidegree(&IntMatrix::zeros(1, 2), &ints(&[2, 3])).unwrap(), ints(&[0]));
        assert!(multidegree(&IntMatrix::identity(3), &ints(&[2, 3])).is_err());
    }
}
