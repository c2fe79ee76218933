//! Tropical images under monomial maps.
//!
//! The image of a weighted collection under an integer matrix `A` is the set
//! of images `A(σ)` of its maximal cones. Weights are assigned afterwards by
//! the push-forward formula: at a point `x` of an image cone,
//!
//! `m(x) = (1/δ) Σ m_σ · [L_x ∩ Z^d : A(L_σ ∩ Z^r)]`
//!
//! summed over the source cones `σ` mapping onto that image cone, where
//! `L_σ`, `L_x` are linear spans and `δ` is the degree of the map.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::fan::{triangulate, FanError, IntVec, TropicalCollection, WeightedCone};
use crate::linalg::{
    hermite_normal_form, lattice_index, rank_of, saturate, saturation_index, Int, IntMatrix, LinalgError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PushError {
    #[error("fiber sum {sum} is not divisible by the degree {delta}")]
    NonIntegralResult { sum: Int, delta: u64 },
    #[error("source cone {0} has a positive-dimensional fiber beyond the lineality space")]
    InfiniteFiber(usize),
    #[error("image of the source lattice is not primitive (index {0})")]
    NonPrimitiveImageLattice(Int),
    #[error("given vectors are not in the lineality space")]
    NotInLineality,
    #[error("sample point {0:?} is not in the image of every listed fiber cone")]
    IrregularSample(IntVec),
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("multiplicity {0} does not fit in 64 bits")]
    Overflow(Int),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl PushError {
    pub fn variant_name(&self) -> &'static str {
        match self {
            PushError::NonIntegralResult { .. } => "NonIntegralResult",
            PushError::InfiniteFiber(_) => "InfiniteFiber",
            PushError::NonPrimitiveImageLattice(_) => "NonPrimitiveImageLattice",
            PushError::NotInLineality => "NotInLineality",
            PushError::IrregularSample(_) => "IrregularSample",
            PushError::ZeroDegree => "ZeroDegree",
            PushError::Overflow(_) => "Overflow",
            PushError::DimensionMismatch(_) => "DimensionMismatch",
            PushError::Fan(e) => e.variant_name(),
            PushError::Linalg(e) => e.variant_name(),
        }
    }
}

/// A monomial map `A: Z^r -> Z^d` of degree `delta`; `lambda` holds a basis
/// of the source lineality lattice as columns (empty: use the collection's).
#[derive(Clone, Debug)]
pub struct MonomialMapSpec {
    pub a: IntMatrix,
    pub delta: u64,
    pub lambda: IntMatrix,
}

impl MonomialMapSpec {
    pub fn new(a: IntMatrix, delta: u64) -> Self {
        let r = a.cols();
        MonomialMapSpec { a, delta, lambda: IntMatrix::zeros(r, 0) }
    }
}

/// The product collection in `R^{n1+n2}`: cones `σ×τ` with weight `m_σ m_τ`.
pub fn product_fan(t1: &TropicalCollection, t2: &TropicalCollection) -> Result<TropicalCollection, PushError> {
    let (n1, n2) = (t1.ambient_dim(), t2.ambient_dim());
    let left = |v: &IntVec| -> IntVec { v.iter().cloned().chain(std::iter::repeat_n(Int::zero(), n2)).collect() };
    let right = |v: &IntVec| -> IntVec { std::iter::repeat_n(Int::zero(), n1).chain(v.iter().cloned()).collect() };
    let lineality: Vec<IntVec> = t1.lineality().iter().map(left).chain(t2.lineality().iter().map(right)).collect();
    let mut cones = Vec::with_capacity(t1.len() * t2.len());
    for c1 in t1.cones() {
        for c2 in t2.cones() {
            let rays = c1.rays.iter().map(left).chain(c2.rays.iter().map(right)).collect();
            cones.push(WeightedCone::new(rays, c1.multiplicity * c2.multiplicity));
        }
    }
    Ok(TropicalCollection::new(n1 + n2, lineality, cones)?)
}

fn image_lineality(t: &TropicalCollection, a: &IntMatrix) -> Result<Vec<IntVec>, PushError> {
    let imgs: Result<Vec<IntVec>, LinalgError> = t.lineality().iter().map(|l| a.mul_vec(l)).collect();
    Ok(saturate(&imgs?, a.rows()))
}

/// Simplicial pieces of `A(σ)` (rays only; the image lineality is shared).
fn image_pieces(
    t: &TropicalCollection,
    id: usize,
    a: &IntMatrix,
    lin: &[IntVec],
) -> Result<(usize, Vec<Vec<IntVec>>), PushError> {
    let proj = crate::linalg::OrthProjector::new(lin);
    let mut rays: Vec<IntVec> = Vec::new();
    for r in &t.cones()[id].rays {
        if let Some(x) = proj.reduce_primitive(&a.mul_vec(r)?) {
            rays.push(x);
        }
    }
    rays.sort();
    rays.dedup();
    let dim = rank_of(&rays) + lin.len();
    Ok((dim, triangulate(&rays)?))
}

/// Image collection with, for each output cone, the source cones it came from.
pub struct ImageWithSources {
    pub image: TropicalCollection,
    pub sources: Vec<Vec<usize>>,
}

/// `A(σ)` for every cone, keeping images of dimension `target_dim` (default:
/// the largest dimension that occurs). Output weights are 0 (pending).
pub fn minkowski_image_with_sources(
    t: &TropicalCollection,
    a: &IntMatrix,
    target_dim: Option<usize>,
) -> Result<ImageWithSources, PushError> {
    if a.cols() != t.ambient_dim() {
        return Err(PushError::DimensionMismatch(format!(
            "map has {} columns, collection lives in dimension {}",
            a.cols(),
            t.ambient_dim()
        )));
    }
    let d = a.rows();
    let lin = image_lineality(t, a)?;
    let per_cone: Result<Vec<(usize, Vec<Vec<IntVec>>)>, PushError> =
        (0..t.len()).into_par_iter().map(|id| image_pieces(t, id, a, &lin)).collect();
    let per_cone = per_cone?;
    let target = target_dim.unwrap_or_else(|| per_cone.iter().map(|(k, _)| *k).max().unwrap_or(0));
    let mut merged: BTreeMap<Vec<IntVec>, Vec<usize>> = BTreeMap::new();
    for (id, (dim, pieces)) in per_cone.into_iter().enumerate() {
        if dim != target {
            continue;
        }
        for p in pieces {
            merged.entry(p).or_default().push(id);
        }
    }
    let (keys, sources): (Vec<_>, Vec<_>) = merged.into_iter().unzip();
    let cones = keys.into_iter().map(|r| WeightedCone::new(r, 0)).collect();
    Ok(ImageWithSources { image: TropicalCollection::new(d, lin, cones)?, sources })
}

pub fn minkowski_image(
    t: &TropicalCollection,
    map: &MonomialMapSpec,
    target_dim: Option<usize>,
) -> Result<TropicalCollection, PushError> {
    Ok(minkowski_image_with_sources(t, &map.a, target_dim)?.image)
}

fn source_lattice(t: &TropicalCollection, map: &MonomialMapSpec) -> Vec<IntVec> {
    if map.lambda.cols() == 0 {
        t.lineality().to_vec()
    } else {
        map.lambda.column_vecs()
    }
}

/// Refuses maps whose image of the source lineality lattice is not saturated.
pub fn check_primitive_image(t: &TropicalCollection, map: &MonomialMapSpec) -> Result<(), PushError> {
    let lam = source_lattice(t, map);
    let imgs: Result<Vec<IntVec>, LinalgError> = lam.iter().map(|l| map.a.mul_vec(l)).collect();
    let idx = saturation_index(&imgs?, map.a.rows());
    if !idx.is_one() {
        return Err(PushError::NonPrimitiveImageLattice(idx));
    }
    Ok(())
}

/// `[L_x ∩ Z^d : A(L_σ ∩ Z^r)]` for source cone `id`.
///
/// When `A` is injective on `L_σ` this is [`lattice_index`] on a basis of
/// the saturated span. A kernel is allowed only inside the source lineality
/// (fibers are then finite modulo lineality), and the index is taken in the
/// quotient, which equals the saturation index of `A(L_σ ∩ Z^r)`.
pub fn fiber_index(t: &TropicalCollection, id: usize, map: &MonomialMapSpec) -> Result<Int, PushError> {
    let r = t.ambient_dim();
    let gens: Vec<IntVec> = t.cones()[id].rays.iter().chain(t.lineality()).cloned().collect();
    let basis = saturate(&gens, r);
    let k = basis.len();
    let b = IntMatrix::from_rows(&basis, r).transpose();
    let ab = map.a.mul(&b)?;
    let image_rank = ab.rank();
    if image_rank == k {
        return Ok(lattice_index(&map.a, &b)?);
    }
    let lam = source_lattice(t, map);
    let lam_imgs: Result<Vec<IntVec>, LinalgError> = lam.iter().map(|l| map.a.mul_vec(l)).collect();
    let lam_kernel = rank_of(&lam) - rank_of(&lam_imgs?);
    if k - image_rank > lam_kernel {
        return Err(PushError::InfiniteFiber(id));
    }
    Ok(saturation_index(&ab.column_vecs(), map.a.rows()))
}

/// `(1/δ) Σ m_σ · index_σ` over the given fiber cones of `source`.
pub fn pushforward_multiplicity(
    source: &TropicalCollection,
    fibers: &[usize],
    map: &MonomialMapSpec,
) -> Result<u64, PushError> {
    if map.delta == 0 {
        return Err(PushError::ZeroDegree);
    }
    let mut sum = Int::zero();
    for &id in fibers {
        sum += Int::from(source.cones()[id].multiplicity) * fiber_index(source, id, map)?;
    }
    let delta = Int::from(map.delta);
    if !(&sum % &delta).is_zero() {
        return Err(PushError::NonIntegralResult { sum, delta: map.delta });
    }
    let m = sum / delta;
    m.to_u64().ok_or(PushError::Overflow(m))
}

/// A point in the relative interior of a cone: a positive combination of its
/// rays with pseudo-random coefficients in `[8, 15]`.
pub fn interior_sample(cone: &WeightedCone, n: usize, rng: &mut ChaCha8Rng) -> IntVec {
    let mut x = vec![Int::zero(); n];
    for r in &cone.rays {
        let c = Int::from(rng.gen_range(8i64..=15));
        for (xi, ri) in x.iter_mut().zip(r) {
            *xi += &c * ri;
        }
    }
    x
}

/// Source cones whose image contains `x`.
pub fn fibers_at(
    source: &TropicalCollection,
    map: &MonomialMapSpec,
    lin: &[IntVec],
    x: &[Int],
) -> Result<Vec<usize>, PushError> {
    let d = map.a.rows();
    let hits: Result<Vec<bool>, PushError> = (0..source.len())
        .into_par_iter()
        .map(|id| {
            let (_, pieces) = image_pieces(source, id, &map.a, lin)?;
            for p in pieces {
                let f = crate::fan::ConeFactor::new(&p, lin, d, id)?;
                if f.contains(x).0 {
                    return Ok(true);
                }
            }
            Ok(false)
        })
        .collect();
    Ok(hits?.into_iter().enumerate().filter_map(|(i, h)| h.then_some(i)).collect())
}

/// Multiplicity of the image at `x` by scanning every source cone; `x` must
/// be a regular point of the image. Only fibers of full image dimension
/// `target_dim` count.
pub fn multiplicity_at_point(
    source: &TropicalCollection,
    map: &MonomialMapSpec,
    target_dim: usize,
    x: &[Int],
) -> Result<u64, PushError> {
    let lin = image_lineality(source, &map.a)?;
    let mut fibers = Vec::new();
    for id in fibers_at(source, map, &lin, x)? {
        if image_pieces(source, id, &map.a, &lin)?.0 == target_dim {
            fibers.push(id);
        }
    }
    pushforward_multiplicity(source, &fibers, map)
}

/// Image of `t` under `map`, weighted by the push-forward formula.
///
/// Each output cone is weighted from the source cones that produce it,
/// evaluated at a pseudo-random interior sample point. Restricting to the
/// producing cones (rather than every cone whose image contains the sample)
/// keeps the result additive when distinct image cones overlap, so that the
/// collection is correct as a set with weights.
pub fn weighted_image(
    t: &TropicalCollection,
    map: &MonomialMapSpec,
    target_dim: Option<usize>,
    seed: u64,
) -> Result<TropicalCollection, PushError> {
    if map.delta == 0 {
        return Err(PushError::ZeroDegree);
    }
    check_primitive_image(t, map)?;
    let ImageWithSources { image, sources } = minkowski_image_with_sources(t, &map.a, target_dim)?;
    let d = image.ambient_dim();
    let lin = image.lineality().to_vec();
    let mults: Result<Vec<u64>, PushError> = (0..image.len())
        .into_par_iter()
        .map(|cid| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(cid as u64));
            let x = interior_sample(&image.cones()[cid], d, &mut rng);
            for &sid in &sources[cid] {
                let (_, pieces) = image_pieces(t, sid, &map.a, &lin)?;
                let mut inside = false;
                for p in pieces {
                    if crate::fan::ConeFactor::new(&p, &lin, d, sid)?.contains(&x).0 {
                        inside = true;
                        break;
                    }
                }
                if !inside {
                    return Err(PushError::IrregularSample(x));
                }
            }
            pushforward_multiplicity(t, &sources[cid], map)
        })
        .collect();
    Ok(image.with_multiplicities(&mults?))
}

/// `(I|I)` applied to `T × T`: the tropicalization of the Hadamard square.
pub fn hadamard_square(t: &TropicalCollection, delta: u64, seed: u64) -> Result<TropicalCollection, PushError> {
    let n = t.ambient_dim();
    let prod = product_fan(t, t)?;
    let mut a = IntMatrix::zeros(n, 2 * n);
    for i in 0..n {
        a.set(i, i, Int::one());
        a.set(i, n + i, Int::one());
    }
    let lambda = if prod.lineality().is_empty() {
        IntMatrix::zeros(2 * n, 0)
    } else {
        IntMatrix::from_rows(prod.lineality(), 2 * n).transpose()
    };
    let map = MonomialMapSpec { a, delta, lambda };
    weighted_image(&prod, &map, Some(n.saturating_sub(1)), seed)
}

/// Projects `t` along a sublattice of its lineality space given by the
/// columns of `l`. Weights are unchanged.
pub fn quotient_by_lineality(t: &TropicalCollection, l: &IntMatrix) -> Result<TropicalCollection, PushError> {
    let n = t.ambient_dim();
    if l.rows() != n {
        return Err(PushError::DimensionMismatch(format!("{} rows for ambient dimension {}", l.rows(), n)));
    }
    let cols: Vec<IntVec> = l.column_vecs().into_iter().filter(|c| c.iter().any(|x| !x.is_zero())).collect();
    if cols.is_empty() {
        return Ok(t.clone());
    }
    let base = rank_of(t.lineality());
    for c in &cols {
        let mut rows = t.lineality().to_vec();
        rows.push(c.clone());
        if rank_of(&rows) != base {
            return Err(PushError::NotInLineality);
        }
    }
    let lm = IntMatrix::from_rows(&cols, n).transpose();
    let k = lm.rank();
    let (_, u) = hermite_normal_form(&lm);
    let pi = IntMatrix::from_rows(&u.row_vecs()[k..], n);
    let image = |v: &IntVec| pi.mul_vec(v);
    let lin: Result<Vec<IntVec>, LinalgError> = t.lineality().iter().map(image).collect();
    let lin: Vec<IntVec> = lin?.into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect();
    let lin = saturate(&lin, n - k);
    let mut cones = Vec::with_capacity(t.len());
    for c in t.cones() {
        let rays: Result<Vec<IntVec>, LinalgError> = c.rays.iter().map(image).collect();
        cones.push(WeightedCone::new(rays?, c.multiplicity));
    }
    Ok(TropicalCollection::new(n - k, lin, cones)?)
}
