//! Exact convex geometry at desk scale: double description, convex hulls,
//! and the weighted codimension-one normal fan of a lattice polytope.
//!
//! This is the independent side of the reconstruction checks: it computes
//! polytopes directly from points, so its answers can be compared with what
//! ray shooting and completion recover from the tropical data alone.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::fan::{FanError, IntVec, TropicalCollection, WeightedCone};
use crate::linalg::{dot, gcd_slice, primitive_int, rank_of, saturate, Int, OrthProjector};
use crate::newton::FacetInequality;

pub const MAX_HULL_POINTS: usize = 10_000;
pub const MAX_HULL_DIM: usize = 6;
pub const MAX_DD_RAYS: usize = 200;
pub const MAX_DD_DIM: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HullError {
    #[error("input exceeds desk-scale limits: {0}")]
    ScaleExceeded(String),
    #[error("empty point set")]
    EmptyInput,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Fan(#[from] FanError),
}

impl HullError {
    pub fn variant_name(&self) -> &'static str {
        match self {
            HullError::ScaleExceeded(_) => "ScaleExceeded",
            HullError::EmptyInput => "EmptyInput",
            HullError::DimensionMismatch(_) => "DimensionMismatch",
            HullError::Fan(e) => e.variant_name(),
        }
    }
}

/// Generators of `{y : c·y >= 0 for every constraint c}`.
#[derive(Clone, Debug, Default)]
pub struct ConeGenerators {
    pub lineality: Vec<IntVec>,
    /// Extreme rays modulo the lineality space (not reduced).
    pub rays: Vec<IntVec>,
}

struct DdRay {
    v: IntVec,
    zeros: Vec<u64>,
}

fn bit_set(z: &mut [u64], i: usize) {
    z[i / 64] |= 1 << (i % 64);
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn popcount(a: &[u64]) -> u32 {
    a.iter().map(|x| x.count_ones()).sum()
}

fn combine(a: &Int, u: &[Int], b: &Int, v: &[Int]) -> IntVec {
    let w: IntVec = u.iter().zip(v).map(|(x, y)| a * x - b * y).collect();
    primitive_int(&w).unwrap_or(w)
}

/// Double description: H-representation to generators.
///
/// Constraints are added one at a time. While a constraint is nonzero on the
/// current lineality space, a lineality vector is promoted to a ray; after
/// that, the usual positive/negative split is combined along adjacent pairs,
/// with adjacency decided combinatorially from the zero sets.
pub fn double_description(constraints: &[IntVec], dim: usize) -> ConeGenerators {
    let words = constraints.len().div_ceil(64).max(1);
    let mut lin: Vec<IntVec> = (0..dim)
        .map(|i| {
            let mut e = vec![Int::zero(); dim];
            e[i] = Int::from(1);
            e
        })
        .collect();
    let mut rays: Vec<DdRay> = Vec::new();
    for (ci, c) in constraints.iter().enumerate() {
        if let Some(p) = lin.iter().position(|l| !dot(c, l).is_zero()) {
            let mut lp = lin.remove(p);
            let mut cp = dot(c, &lp);
            if cp.is_negative() {
                lp.iter_mut().for_each(|x| *x = -x.clone());
                cp = -cp;
            }
            for l in lin.iter_mut() {
                let cl = dot(c, l);
                if !cl.is_zero() {
                    *l = combine(&cp, l, &cl, &lp);
                }
            }
            for r in rays.iter_mut() {
                let cr = dot(c, &r.v);
                if !cr.is_zero() {
                    r.v = combine(&cp, &r.v, &cr, &lp);
                }
                bit_set(&mut r.zeros, ci);
            }
            let mut zeros = vec![0u64; words];
            for j in 0..ci {
                bit_set(&mut zeros, j);
            }
            rays.push(DdRay { v: primitive_int(&lp).unwrap_or(lp), zeros });
            continue;
        }
        let vals: Vec<Int> = rays.iter().map(|r| dot(c, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    bit_set(&mut r.zeros, ci);
                }
            }
            continue;
        }
        let pointed_dim = dim - lin.len();
        let mut fresh: Vec<DdRay> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common: Vec<u64> =
                    rays[p].zeros.iter().zip(&rays[q].zeros).map(|(a, b)| a & b).collect();
                if pointed_dim >= 2 && (popcount(&common) as usize) < pointed_dim - 2 {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !is_subset(&common, &r.zeros));
                if !adjacent {
                    continue;
                }
                let v = combine(&vals[p], &rays[q].v, &vals[q], &rays[p].v);
                let mut zeros = common;
                bit_set(&mut zeros, ci);
                fresh.push(DdRay { v, zeros });
            }
        }
        let mut kept: Vec<DdRay> = Vec::with_capacity(rays.len() + fresh.len());
        for (r, v) in rays.into_iter().zip(vals) {
            if v.is_negative() {
                continue;
            }
            let mut r = r;
            if v.is_zero() {
                bit_set(&mut r.zeros, ci);
            }
            kept.push(r);
        }
        kept.extend(fresh);
        rays = kept;
    }
    ConeGenerators { lineality: lin, rays: rays.into_iter().map(|r| r.v).collect() }
}

/// Facets and equations of the polyhedral cone `cone(rays)`.
#[derive(Clone, Debug, Default)]
pub struct ConeFacets {
    /// Outward normals `a` with `a·x <= 0` on the cone, primitive and lying in
    /// the span of the rays.
    pub outward: Vec<IntVec>,
    /// Hermite basis of the vectors vanishing on the rays.
    pub equations: Vec<IntVec>,
}

pub fn cone_facets(rays: &[IntVec], dim: usize) -> ConeFacets {
    let gens = double_description(rays, dim);
    let equations = saturate(&gens.lineality, dim);
    let proj = OrthProjector::new(&equations);
    let mut outward: Vec<IntVec> = gens
        .rays
        .iter()
        .filter_map(|e| {
            let neg: IntVec = e.iter().map(|x| -x.clone()).collect();
            proj.reduce_primitive(&neg)
        })
        .collect();
    outward.sort();
    outward.dedup();
    ConeFacets { outward, equations }
}

/// Irredundant inequalities `normal·x <= bound` for `apex + cone(rays)`.
/// Equations of a lower-dimensional cone appear as pairs of opposite
/// inequalities.
pub fn dual_description(rays: &[IntVec], apex: &[Int]) -> Result<Vec<FacetInequality>, HullError> {
    let dim = apex.len();
    if rays.len() > MAX_DD_RAYS || dim > MAX_DD_DIM {
        return Err(HullError::ScaleExceeded(format!("{} rays in dimension {}", rays.len(), dim)));
    }
    if let Some(r) = rays.iter().find(|r| r.len() != dim) {
        return Err(HullError::DimensionMismatch(format!("ray of length {} with apex of length {}", r.len(), dim)));
    }
    let f = cone_facets(rays, dim);
    let mut out: Vec<FacetInequality> = Vec::new();
    for a in f.outward {
        let bound = dot(&a, apex);
        out.push(FacetInequality { normal: a, bound, certified: false });
    }
    for e in f.equations {
        let neg: IntVec = e.iter().map(|x| -x.clone()).collect();
        out.push(FacetInequality { bound: dot(&e, apex), normal: e, certified: false });
        out.push(FacetInequality { bound: dot(&neg, apex), normal: neg, certified: false });
    }
    out.sort_by(|a, b| a.normal.cmp(&b.normal));
    Ok(out)
}

/// Exact V- and H-representation of the convex hull of a point set.
#[derive(Clone, Debug)]
pub struct Hull {
    pub ambient_dim: usize,
    pub affine_dim: usize,
    /// Sorted lexicographically.
    pub vertices: Vec<IntVec>,
    /// `normal·x <= bound`, normals primitive and parallel to the affine span.
    pub facets: Vec<FacetInequality>,
    /// Hermite basis of the normals to the affine span.
    pub equations: Vec<IntVec>,
    /// Vertex index pairs `(i, j)` with `i < j`.
    pub edges: Vec<(usize, usize)>,
}

impl Hull {
    pub fn f_vector_ends(&self) -> (usize, usize, usize) {
        (self.vertices.len(), self.edges.len(), self.facets.len())
    }

    fn tight(&self, p: &[Int]) -> Vec<usize> {
        (0..self.facets.len()).filter(|&f| dot(&self.facets[f].normal, p) == self.facets[f].bound).collect()
    }

    /// Whether `p` satisfies every facet inequality and equation.
    pub fn contains(&self, p: &[Int]) -> bool {
        let v0 = &self.vertices[0];
        self.facets.iter().all(|f| dot(&f.normal, p) <= f.bound)
            && self.equations.iter().all(|e| dot(e, p) == dot(e, v0))
    }
}

pub fn convex_hull(points: &[IntVec]) -> Result<Hull, HullError> {
    let Some(first) = points.first() else {
        return Err(HullError::EmptyInput);
    };
    let n = first.len();
    if points.iter().any(|p| p.len() != n) {
        return Err(HullError::DimensionMismatch("points of different lengths".into()));
    }
    if points.len() > MAX_HULL_POINTS {
        return Err(HullError::ScaleExceeded(format!("{} points", points.len())));
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let diffs: Vec<IntVec> =
        pts.iter().skip(1).map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect()).collect();
    let affine_dim = rank_of(&diffs);
    if affine_dim > MAX_HULL_DIM {
        return Err(HullError::ScaleExceeded(format!("affine dimension {affine_dim}")));
    }
    let homog: Vec<IntVec> = pts
        .iter()
        .map(|p| std::iter::once(Int::from(1)).chain(p.iter().cloned()).collect())
        .collect();
    let gens = double_description(&homog, n + 1);
    let eq_parts: Vec<IntVec> = gens.lineality.iter().map(|l| l[1..].to_vec()).collect();
    let equations = saturate(&eq_parts, n);
    let proj = OrthProjector::new(&equations);
    let mut facets: Vec<FacetInequality> = Vec::new();
    for r in &gens.rays {
        let neg: IntVec = r[1..].iter().map(|x| -x.clone()).collect();
        let Some(normal) = proj.reduce_primitive(&neg) else {
            continue;
        };
        let bound = pts.iter().map(|p| dot(&normal, p)).max().expect("nonempty");
        facets.push(FacetInequality { normal, bound, certified: true });
    }
    facets.sort_by(|a, b| a.normal.cmp(&b.normal).then(a.bound.cmp(&b.bound)));
    facets.dedup_by(|a, b| a.normal == b.normal);

    let mut hull = Hull { ambient_dim: n, affine_dim, vertices: Vec::new(), facets, equations, edges: Vec::new() };
    let tight_sets: Vec<Vec<usize>>;
    if affine_dim == 0 {
        hull.vertices = vec![pts[0].clone()];
        return Ok(hull);
    } else {
        let mut verts = Vec::new();
        let mut tights = Vec::new();
        for p in &pts {
            let t = hull.tight(p);
            let normals: Vec<IntVec> = t.iter().map(|&f| hull.facets[f].normal.clone()).collect();
            if rank_of(&normals) == affine_dim {
                verts.push(p.clone());
                tights.push(t);
            }
        }
        hull.vertices = verts;
        tight_sets = tights;
    }
    let nv = hull.vertices.len();
    if affine_dim == 1 {
        hull.edges = vec![(0, 1)];
        return Ok(hull);
    }
    for i in 0..nv {
        for j in i + 1..nv {
            let common: Vec<IntVec> = tight_sets[i]
                .iter()
                .filter(|f| tight_sets[j].contains(f))
                .map(|&f| hull.facets[f].normal.clone())
                .collect();
            if common.len() + 1 >= affine_dim && rank_of(&common) == affine_dim - 1 {
                hull.edges.push((i, j));
            }
        }
    }
    Ok(hull)
}

/// The codimension-one skeleton of the normal fan of `hull`, one cone per
/// edge, weighted by the lattice length of the edge.
pub fn weighted_normal_skeleton(hull: &Hull) -> Result<TropicalCollection, HullError> {
    let n = hull.ambient_dim;
    let mut cones = Vec::with_capacity(hull.edges.len());
    let tight: Vec<Vec<usize>> = hull.vertices.iter().map(|v| hull.tight(v)).collect();
    for &(i, j) in &hull.edges {
        let rays: Vec<IntVec> = tight[i]
            .iter()
            .filter(|f| tight[j].contains(f))
            .map(|&f| hull.facets[f].normal.clone())
            .collect();
        let diff: IntVec = hull.vertices[j].iter().zip(&hull.vertices[i]).map(|(a, b)| a - b).collect();
        let len = gcd_slice(&diff);
        let m: u64 = u64::try_from(&len)
            .map_err(|_| HullError::ScaleExceeded(format!("edge length {len} exceeds 64 bits")))?;
        cones.push(WeightedCone::new(rays, m));
    }
    Ok(TropicalCollection::new(n, hull.equations.clone(), cones)?)
}
