//! Weighted cones and tropical hypersurfaces given as plain sets of cones.
//!
//! A [`TropicalCollection`] is an unordered list of [`WeightedCone`]s sharing
//! one lineality space. No fan structure is assumed: cones may cross each
//! other, and everything downstream (ray shooting in particular) only ever
//! asks "which cones does this line meet, and where".

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{
    bareiss_echelon, dot, hermite_rows, integer_kernel, inverse, normalize_sign, primitive_int,
    rank_of, rat_from_int, saturate, Int, IntMatrix, LinalgError, OrthProjector, Rat,
};

pub type IntVec = Vec<Int>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("cone {0}: generators are linearly dependent (triangulate first)")]
    NonSimplicialCone(usize),
    #[error("cone {cone}: coordinate direction {coord} is parallel to the cone's hyperplane")]
    SingularSystem { cone: usize, coord: usize },
    #[error("cone {cone}: expected a one-dimensional normal space, found {kernel_dim}")]
    WrongCodimension { cone: usize, kernel_dim: usize },
    #[error("the same cone appears with multiplicities {first} and {second}")]
    MultiplicityConflict { first: u64, second: u64 },
    #[error("cone {0} has more than one ray modulo lineality")]
    NotACurve(usize),
    #[error("cones have different dimensions ({0} and {1})")]
    ImpureCollection(usize, usize),
    #[error("lineality generators are linearly dependent")]
    DependentLineality,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl FanError {
    pub fn variant_name(&self) -> &'static str {
        match self {
            FanError::NonSimplicialCone(_) => "NonSimplicialCone",
            FanError::SingularSystem { .. } => "SingularSystem",
            FanError::WrongCodimension { .. } => "WrongCodimension",
            FanError::MultiplicityConflict { .. } => "MultiplicityConflict",
            FanError::NotACurve(_) => "NotACurve",
            FanError::ImpureCollection(..) => "ImpureCollection",
            FanError::DependentLineality => "DependentLineality",
            FanError::DimensionMismatch(_) => "DimensionMismatch",
            FanError::Linalg(e) => e.variant_name(),
        }
    }
}

/// A polyhedral cone `cone(rays) + lineality` with an integer weight.
///
/// The lineality space is stored once on the owning collection. A
/// multiplicity of 0 marks a weight that has not been assigned yet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedCone {
    pub rays: Vec<IntVec>,
    pub multiplicity: u64,
}

impl WeightedCone {
    pub fn new(rays: Vec<IntVec>, multiplicity: u64) -> Self {
        WeightedCone { rays, multiplicity }
    }
}

/// A transversal crossing of the line `w + sign*t*e_coord` with a cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionRecord {
    pub cone_id: usize,
    /// Zero-based coordinate index.
    pub coord: usize,
    pub param: Rat,
    pub boundary_hit: bool,
}

/// How a line `base + t*dir` meets a codimension-one cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineMeet {
    Empty,
    /// A single crossing; `boundary` is set when the crossing point lies on
    /// the relative boundary of the cone.
    Point { t: Rat, boundary: bool },
    /// The line lies in the cone's hyperplane; the cone contains the points
    /// with `lo <= t <= hi` (`None` meaning unbounded).
    Interval { lo: Option<Rat>, hi: Option<Rat> },
}

impl LineMeet {
    pub fn contains(&self, t: &Rat) -> bool {
        match self {
            LineMeet::Empty => false,
            LineMeet::Point { t: s, .. } => s == t,
            LineMeet::Interval { lo, hi } => {
                lo.as_ref().is_none_or(|l| l <= t) && hi.as_ref().is_none_or(|h| t <= h)
            }
        }
    }
}

/// Cached exact factorization of a cone's generator matrix.
///
/// `rows` picks coordinates on which the generators are independent; `adj`
/// and `det` are the integer adjugate and determinant of that square block,
/// so coefficients of a point `p` in the span are `adj * p[rows] / det`.
#[derive(Clone, Debug)]
pub struct ConeFactor {
    gens: Vec<IntVec>,
    n_rays: usize,
    rows: Vec<usize>,
    adj: Vec<IntVec>,
    det: Int,
    normal: Option<IntVec>,
}

impl ConeFactor {
    pub fn new(rays: &[IntVec], lineality: &[IntVec], n: usize, cone_id: usize) -> Result<Self, FanError> {
        let gens: Vec<IntVec> = rays.iter().chain(lineality).cloned().collect();
        let k = gens.len();
        let mut echelon = gens.clone();
        let (pivots, _) = bareiss_echelon(&mut echelon);
        if pivots.len() < k {
            return Err(FanError::NonSimplicialCone(cone_id));
        }
        let rows: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let (adj, det) = if k == 0 {
            (Vec::new(), Int::one())
        } else {
            let block: Vec<Vec<Rat>> = rows
                .iter()
                .map(|&s| gens.iter().map(|g| rat_from_int(&g[s])).collect())
                .collect();
            let block_int = IntMatrix::from_rows(
                &rows.iter().map(|&s| gens.iter().map(|g| g[s].clone()).collect()).collect::<Vec<_>>(),
                k,
            );
            let det = block_int.determinant();
            let inv = inverse(&crate::linalg::ExactMatrix::from_rows(&block, k))
                .expect("pivot block is invertible");
            let det_r = rat_from_int(&det);
            let adj = (0..k)
                .map(|i| (0..k).map(|j| (inv.get(i, j) * &det_r).to_integer()).collect())
                .collect();
            (adj, det)
        };
        let normal = if k + 1 == n {
            let mut ker = integer_kernel(&gens, n);
            if ker.len() == 1 {
                let mut l = ker.pop().unwrap();
                normalize_sign(&mut l);
                Some(l)
            } else {
                None
            }
        } else {
            None
        };
        Ok(ConeFactor { gens, n_rays: rays.len(), rows, adj, det, normal })
    }

    pub fn normal(&self) -> Option<&IntVec> {
        self.normal.as_ref()
    }

    /// `adj * p[rows]`, i.e. `det` times the generator coefficients of `p`.
    fn scaled_coeffs(&self, p: &[Int]) -> Vec<Int> {
        self.adj
            .iter()
            .map(|row| row.iter().zip(&self.rows).map(|(a, &s)| a * &p[s]).sum())
            .collect()
    }

    fn in_span(&self, p: &[Int], scaled: &[Int]) -> bool {
        if let Some(l) = &self.normal {
            return dot(l, p).is_zero();
        }
        let n = p.len();
        (0..n).all(|r| {
            let lhs: Int = self.gens.iter().zip(scaled).map(|(g, c)| &g[r] * c).sum();
            lhs == &p[r] * &self.det
        })
    }

    /// Membership of an integral point: `(inside, relative interior)`.
    pub fn contains(&self, p: &[Int]) -> (bool, bool) {
        let scaled = self.scaled_coeffs(p);
        if !self.in_span(p, &scaled) {
            return (false, false);
        }
        let sd = self.det.signum();
        let signs: Vec<Int> = scaled[..self.n_rays].iter().map(|c| c.signum() * &sd).collect();
        let inside = signs.iter().all(|s| !s.is_negative());
        let interior = inside && signs.iter().all(|s| s.is_positive());
        (inside, interior)
    }

    /// Membership of a rational point.
    pub fn contains_rat(&self, p: &[Rat]) -> (bool, bool) {
        let l = p.iter().fold(Int::one(), |l, x| num_integer::Integer::lcm(&l, x.denom()));
        let scaled: Vec<Int> = p.iter().map(|x| (x * rat_from_int(&l)).to_integer()).collect();
        self.contains(&scaled)
    }

    /// Intersection with `base + t*dir`. Requires a codimension-one cone.
    pub fn line_meet(&self, base: &[Int], dir: &[Int]) -> Option<LineMeet> {
        let l = self.normal.as_ref()?;
        let lb = dot(l, base);
        let le = dot(l, dir);
        let alpha = self.scaled_coeffs(base);
        let beta = self.scaled_coeffs(dir);
        let sd = self.det.signum();
        if !le.is_zero() {
            // t = -lb/le; sign of (alpha + t*beta) is sign(alpha*le - lb*beta) * sign(le).
            let sl = le.signum();
            let mut boundary = false;
            for j in 0..self.n_rays {
                let s = (&alpha[j] * &le - &lb * &beta[j]).signum() * &sl * &sd;
                if s.is_negative() {
                    return Some(LineMeet::Empty);
                }
                if s.is_zero() {
                    boundary = true;
                }
            }
            return Some(LineMeet::Point { t: Rat::new(-lb, le), boundary });
        }
        if !lb.is_zero() {
            return Some(LineMeet::Empty);
        }
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for j in 0..self.n_rays {
            let a = &alpha[j] * &sd;
            let b = &beta[j] * &sd;
            if b.is_zero() {
                if a.is_negative() {
                    return Some(LineMeet::Empty);
                }
                continue;
            }
            let bound = Rat::new(-a, b.clone());
            if b.is_positive() {
                if lo.as_ref().is_none_or(|x| bound > *x) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|x| bound < *x) {
                hi = Some(bound);
            }
        }
        if let (Some(a), Some(b)) = (&lo, &hi) {
            if a > b {
                return Some(LineMeet::Empty);
            }
        }
        Some(LineMeet::Interval { lo, hi })
    }
}

/// An unordered collection of weighted cones with a common lineality space.
#[derive(Debug)]
pub struct TropicalCollection {
    ambient_dim: usize,
    lineality: Vec<IntVec>,
    cones: Vec<WeightedCone>,
    factors: Vec<OnceLock<Result<Arc<ConeFactor>, FanError>>>,
    projector: OnceLock<OrthProjector>,
}

impl Clone for TropicalCollection {
    fn clone(&self) -> Self {
        TropicalCollection::from_parts(self.ambient_dim, self.lineality.clone(), self.cones.clone())
    }
}

impl PartialEq for TropicalCollection {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.lineality == other.lineality
            && self.cones == other.cones
    }
}

impl TropicalCollection {
    fn from_parts(ambient_dim: usize, lineality: Vec<IntVec>, cones: Vec<WeightedCone>) -> Self {
        let factors = (0..cones.len()).map(|_| OnceLock::new()).collect();
        TropicalCollection { ambient_dim, lineality, cones, factors, projector: OnceLock::new() }
    }

    /// Validates the input and splits non-simplicial cones by a placing
    /// triangulation. The lineality basis is replaced by the Hermite basis of
    /// its saturation; zero rays are dropped.
    pub fn new(
        ambient_dim: usize,
        lineality: Vec<IntVec>,
        cones: Vec<WeightedCone>,
    ) -> Result<Self, FanError> {
        for v in lineality.iter().chain(cones.iter().flat_map(|c| c.rays.iter())) {
            if v.len() != ambient_dim {
                return Err(FanError::DimensionMismatch(format!(
                    "vector of length {} in ambient dimension {}",
                    v.len(),
                    ambient_dim
                )));
            }
        }
        if rank_of(&lineality) < lineality.len() {
            return Err(FanError::DependentLineality);
        }
        let lineality = saturate(&lineality, ambient_dim);
        let projector = OrthProjector::new(&lineality);
        let mut out = Vec::with_capacity(cones.len());
        let mut dim: Option<usize> = None;
        for cone in cones {
            let mut rays: Vec<IntVec> =
                cone.rays.iter().filter_map(|r| projector.reduce_primitive(r)).collect();
            rays.sort();
            rays.dedup();
            let r = rank_of(&rays);
            let d = r + lineality.len();
            match dim {
                None => dim = Some(d),
                Some(e) if e != d => return Err(FanError::ImpureCollection(e, d)),
                _ => {}
            }
            if r == rays.len() {
                out.push(WeightedCone::new(rays, cone.multiplicity));
            } else {
                for piece in triangulate(&rays)? {
                    out.push(WeightedCone::new(piece, cone.multiplicity));
                }
            }
        }
        let t = TropicalCollection::from_parts(ambient_dim, lineality, out);
        let _ = t.projector.set(projector);
        Ok(t)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn lineality(&self) -> &[IntVec] {
        &self.lineality
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality.len()
    }

    pub fn cones(&self) -> &[WeightedCone] {
        &self.cones
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// Common dimension of the cones (lineality included); `None` if empty.
    pub fn cone_dim(&self) -> Option<usize> {
        self.cones.first().map(|c| c.rays.len() + self.lineality.len())
    }

    pub fn projector(&self) -> &OrthProjector {
        self.projector.get_or_init(|| OrthProjector::new(&self.lineality))
    }

    pub fn with_multiplicities(&self, mults: &[u64]) -> TropicalCollection {
        let cones = self
            .cones
            .iter()
            .zip(mults)
            .map(|(c, &m)| WeightedCone::new(c.rays.clone(), m))
            .collect();
        TropicalCollection::from_parts(self.ambient_dim, self.lineality.clone(), cones)
    }

    pub fn factor(&self, id: usize) -> Result<Arc<ConeFactor>, FanError> {
        self.factors[id]
            .get_or_init(|| {
                ConeFactor::new(&self.cones[id].rays, &self.lineality, self.ambient_dim, id).map(Arc::new)
            })
            .clone()
    }

    /// Primitive normal of a codimension-one cone, first nonzero entry positive.
    pub fn normal(&self, id: usize) -> Result<IntVec, FanError> {
        let f = self.factor(id)?;
        match f.normal() {
            Some(l) => Ok(l.clone()),
            None => Err(FanError::WrongCodimension {
                cone: id,
                kernel_dim: self.ambient_dim - self.cones[id].rays.len() - self.lineality.len(),
            }),
        }
    }

    pub fn contains(&self, id: usize, p: &[Int]) -> Result<(bool, bool), FanError> {
        Ok(self.factor(id)?.contains(p))
    }

    pub fn line_meet(&self, id: usize, base: &[Int], dir: &[Int]) -> Result<LineMeet, FanError> {
        let f = self.factor(id)?;
        f.line_meet(base, dir).ok_or_else(|| FanError::WrongCodimension {
            cone: id,
            kernel_dim: self.ambient_dim.saturating_sub(self.cones[id].rays.len() + self.lineality.len()),
        })
    }

    /// Crossing of `w + sign*t*e_coord`, `t > 0`, with cone `id`.
    pub fn ray_cone_intersection(
        &self,
        id: usize,
        w: &[Int],
        coord: usize,
        sign: i32,
    ) -> Result<Option<IntersectionRecord>, FanError> {
        let l = self.normal(id)?;
        if l[coord].is_zero() {
            return Err(FanError::SingularSystem { cone: id, coord });
        }
        let dir = signed_unit(self.ambient_dim, coord, sign);
        match self.line_meet(id, w, &dir)? {
            LineMeet::Point { t, boundary } if t.is_positive() => Ok(Some(IntersectionRecord {
                cone_id: id,
                coord,
                param: t,
                boundary_hit: boundary,
            })),
            _ => Ok(None),
        }
    }
}

pub fn signed_unit(n: usize, coord: usize, sign: i32) -> IntVec {
    let mut e = vec![Int::zero(); n];
    e[coord] = Int::from(sign.signum());
    e
}

/// Standalone membership test; see [`TropicalCollection::contains`] for the
/// cached variant.
pub fn cone_contains(
    cone: &WeightedCone,
    lineality: &[IntVec],
    p: &[Rat],
) -> Result<(bool, bool), FanError> {
    Ok(ConeFactor::new(&cone.rays, lineality, p.len(), 0)?.contains_rat(p))
}

/// Standalone crossing computation for a single cone.
pub fn ray_cone_intersection(
    cone: &WeightedCone,
    lineality: &[IntVec],
    w: &[Int],
    coord: usize,
    sign: i32,
) -> Result<Option<IntersectionRecord>, FanError> {
    let t = TropicalCollection::from_parts(w.len(), lineality.to_vec(), vec![cone.clone()]);
    t.ray_cone_intersection(0, w, coord, sign)
}

pub fn primitive_normal(cone: &WeightedCone, lineality: &[IntVec], n: usize) -> Result<IntVec, FanError> {
    let gens: Vec<IntVec> = cone.rays.iter().chain(lineality).cloned().collect();
    let mut ker = integer_kernel(&gens, n);
    if ker.len() != 1 {
        return Err(FanError::WrongCodimension { cone: 0, kernel_dim: ker.len() });
    }
    let mut l = ker.pop().unwrap();
    normalize_sign(&mut l);
    Ok(l)
}

/// Reduces rays modulo lineality, sorts them, and merges identical cones.
pub fn canonicalize(t: &TropicalCollection) -> Result<TropicalCollection, FanError> {
    let proj = t.projector();
    let mut merged: BTreeMap<Vec<IntVec>, u64> = BTreeMap::new();
    for cone in t.cones() {
        let mut rays: Vec<IntVec> = cone.rays.iter().filter_map(|r| proj.reduce_primitive(r)).collect();
        rays.sort();
        rays.dedup();
        match merged.get(&rays) {
            Some(&m) if m != cone.multiplicity => {
                return Err(FanError::MultiplicityConflict { first: m, second: cone.multiplicity })
            }
            Some(_) => {}
            None => {
                merged.insert(rays, cone.multiplicity);
            }
        }
    }
    let cones = merged.into_iter().map(|(r, m)| WeightedCone::new(r, m)).collect();
    Ok(TropicalCollection::from_parts(t.ambient_dim, t.lineality.clone(), cones))
}

/// True iff the weighted sum of the rays lies in the lineality space.
pub fn check_balancing_curve(t: &TropicalCollection) -> Result<bool, FanError> {
    let n = t.ambient_dim();
    let mut sum = vec![Int::zero(); n];
    for (id, cone) in t.cones().iter().enumerate() {
        if cone.rays.len() != 1 {
            return Err(FanError::NotACurve(id));
        }
        let m = Int::from(cone.multiplicity);
        for (s, x) in sum.iter_mut().zip(&cone.rays[0]) {
            *s += &m * x;
        }
    }
    Ok(t.projector().project(&sum).iter().all(Zero::is_zero))
}

/// Deterministic placing triangulation of the pointed cone spanned by `rays`.
///
/// Rays are placed in lexicographic order; each new ray is joined to every
/// boundary facet of the current triangulation that it sees from outside.
/// Returns the ray sets of the maximal simplicial pieces.
pub fn triangulate(rays: &[IntVec]) -> Result<Vec<Vec<IntVec>>, FanError> {
    let mut sorted: Vec<IntVec> = rays.iter().filter_map(|r| primitive_int(r).ok()).collect();
    sorted.sort();
    sorted.dedup();
    let k = rank_of(&sorted);
    if k == 0 {
        return Ok(vec![Vec::new()]);
    }
    // coordinates on which the span projects isomorphically
    let mut ech = sorted.clone();
    let coords: Vec<usize> = bareiss_echelon(&mut ech).0.iter().map(|&(_, c)| c).collect();
    let local: Vec<IntVec> = sorted.iter().map(|r| coords.iter().map(|&c| r[c].clone()).collect()).collect();

    let mut initial: Vec<usize> = Vec::new();
    for i in 0..local.len() {
        let mut cand: Vec<IntVec> = initial.iter().map(|&j| local[j].clone()).collect();
        cand.push(local[i].clone());
        if rank_of(&cand) == cand.len() {
            initial.push(i);
            if initial.len() == k {
                break;
            }
        }
    }
    let mut simplices: Vec<Vec<usize>> = vec![initial.clone()];
    for i in 0..local.len() {
        if initial.contains(&i) {
            continue;
        }
        let mut facet_count: BTreeMap<Vec<usize>, (usize, usize)> = BTreeMap::new();
        for s in &simplices {
            for drop in 0..s.len() {
                let mut f: Vec<usize> = s.clone();
                let opp = f.remove(drop);
                f.sort();
                facet_count.entry(f).and_modify(|e| e.0 += 1).or_insert((1, opp));
            }
        }
        let mut added = Vec::new();
        for (f, (count, opp)) in facet_count {
            if count != 1 {
                continue;
            }
            let frows: Vec<IntVec> = f.iter().map(|&j| local[j].clone()).collect();
            let mut nrm = integer_kernel(&frows, k).pop().expect("facet spans a hyperplane");
            if dot(&nrm, &local[opp]).is_negative() {
                nrm.iter_mut().for_each(|x| *x = -x.clone());
            }
            if dot(&nrm, &local[i]).is_negative() {
                let mut s = f.clone();
                s.push(i);
                added.push(s);
            }
        }
        simplices.extend(added);
    }
    let mut pieces: Vec<Vec<IntVec>> = simplices
        .into_iter()
        .map(|s| {
            let mut p: Vec<IntVec> = s.iter().map(|&j| sorted[j].clone()).collect();
            p.sort();
            p
        })
        .collect();
    pieces.sort();
    Ok(pieces)
}

/// Hermite basis of the saturated span of `gens` (used for lineality spaces).
pub fn lineality_basis(gens: &[IntVec], n: usize) -> Vec<IntVec> {
    hermite_rows(&saturate(gens, n), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ints, rat};

    fn cone(rays: &[&[i64]], m: u64) -> WeightedCone {
        WeightedCone::new(rays.iter().map(|r| ints(r)).collect(), m)
    }

    fn rats(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn contains_examples() {
        let c = cone(&[&[1, 0]], 1);
        assert_eq!(cone_contains(&c, &[], &rats(&[2, 0])).unwrap(), (true, true));
        assert_eq!(cone_contains(&c, &[], &rats(&[0, 0])).unwrap(), (true, false));
        let c = cone(&[&[1, 1]], 1);
        assert_eq!(cone_contains(&c, &[], &rats(&[1, 2])).unwrap(), (false, false));
        let dependent = cone(&[&[1, 0], &[2, 0]], 1);
        assert_eq!(cone_contains(&dependent, &[], &rats(&[1, 0])), Err(FanError::NonSimplicialCone(0)));
    }

    #[test]
    fn intersection_examples() {
        let c = cone(&[&[1, 1]], 1);
        let r = ray_cone_intersection(&c, &[], &ints(&[2, 1]), 0, -1).unwrap().unwrap();
        assert_eq!((r.param.clone(), r.boundary_hit), (rat(1, 1), false));
        assert_eq!(ray_cone_intersection(&c, &[], &ints(&[2, 1]), 1, -1).unwrap(), None);
        // (1,1) - t*e_2 meets the ray cone{(1,0)} at (1,0), which is a
        // relative-interior point; only the apex is boundary.
        let c = cone(&[&[1, 0]], 1);
        let r = ray_cone_intersection(&c, &[], &ints(&[1, 1]), 1, -1).unwrap().unwrap();
        assert_eq!((r.param, r.boundary_hit), (rat(1, 1), false));
        let r = ray_cone_intersection(&c, &[], &ints(&[0, 1]), 1, -1).unwrap().unwrap();
        assert_eq!((r.param, r.boundary_hit), (rat(1, 1), true));
        assert_eq!(
            ray_cone_intersection(&c, &[], &ints(&[1, 1]), 0, -1),
            Err(FanError::SingularSystem { cone: 0, coord: 0 })
        );
    }

    #[test]
    fn normals() {
        assert_eq!(primitive_normal(&cone(&[&[1, 0, 0], &[0, 1, 0]], 1), &[], 3).unwrap(), ints(&[0, 0, 1]));
        assert_eq!(primitive_normal(&cone(&[&[1, 1]], 1), &[], 2).unwrap(), ints(&[1, -1]));
        assert!(matches!(
            primitive_normal(&cone(&[&[1, 0, 0]], 1), &[], 3),
            Err(FanError::WrongCodimension { kernel_dim: 2, .. })
        ));
        let t = TropicalCollection::new(1, vec![], vec![cone(&[], 2)]).unwrap();
        assert_eq!(t.normal(0).unwrap(), ints(&[1]));
    }

    #[test]
    fn canonicalize_examples() {
        let t = TropicalCollection::new(2, vec![], vec![cone(&[&[1, 1], &[0, 1]], 1), cone(&[&[0, 1], &[1, 1]], 1)])
            .unwrap();
        assert_eq!(canonicalize(&t).unwrap().len(), 1);
        let t = TropicalCollection::new(2, vec![], vec![cone(&[&[2, 2]], 1)]).unwrap();
        assert_eq!(canonicalize(&t).unwrap().cones()[0].rays, vec![ints(&[1, 1])]);
        let t = TropicalCollection::new(2, vec![], vec![cone(&[&[1, 1]], 1), cone(&[&[1, 1]], 2)]).unwrap();
        assert_eq!(canonicalize(&t), Err(FanError::MultiplicityConflict { first: 1, second: 2 }));
    }

    #[test]
    fn balancing_examples() {
        let curve = [[1, 0, 0], [1, 0, 1], [1, 1, 0], [1, 1, 2], [1, 2, 1], [-5, -4, -4]];
        let cones = curve.iter().map(|r| cone(&[r], 1)).collect();
        assert!(check_balancing_curve(&TropicalCollection::new(3, vec![], cones).unwrap()).unwrap());
        let axes: Vec<WeightedCone> = (0..3)
            .flat_map(|i| {
                [1i64, -1].into_iter().map(move |s| {
                    let mut r = vec![0i64; 3];
                    r[i] = s;
                    cone(&[&r], 1)
                })
            })
            .collect();
        assert!(check_balancing_curve(&TropicalCollection::new(3, vec![], axes).unwrap()).unwrap());
        let single = TropicalCollection::new(2, vec![], vec![cone(&[&[1, 0]], 1)]).unwrap();
        assert!(!check_balancing_curve(&single).unwrap());
    }

    #[test]
    fn balancing_modulo_lineality() {
        // tropical line in R^3 modulo (1,1,1)
        let cones = vec![cone(&[&[1, 0, 0]], 1), cone(&[&[0, 1, 0]], 1), cone(&[&[0, 0, 1]], 1)];
        let t = TropicalCollection::new(3, vec![ints(&[1, 1, 1])], cones).unwrap();
        assert!(check_balancing_curve(&t).unwrap());
    }

    #[test]
    fn triangulation_of_square_cone() {
        let rays = vec![ints(&[1, 0, 1]), ints(&[0, 1, 1]), ints(&[-1, 0, 1]), ints(&[0, -1, 1])];
        let pieces = triangulate(&rays).unwrap();
        assert_eq!(pieces.len(), 2);
        for p in &pieces {
            assert_eq!(rank_of(p), 3);
        }
    }

    #[test]
    fn non_simplicial_input_is_split() {
        let t = TropicalCollection::new(
            3,
            vec![],
            vec![cone(&[&[1, 0, 0], &[1, 1, 0], &[0, 1, 0]], 3)],
        )
        .unwrap();
        // the middle ray is redundant, so placing yields a single piece
        assert_eq!(t.len(), 1);
        assert_eq!(t.cones()[0].rays, vec![ints(&[0, 1, 0]), ints(&[1, 0, 0])]);
        assert_eq!(t.cones()[0].multiplicity, 3);
    }

    #[test]
    fn line_meet_interval() {
        let t = TropicalCollection::new(2, vec![], vec![cone(&[&[1, 0]], 1)]).unwrap();
        // line (-3,0) + t(1,0) is in the cone for t >= 3
        let m = t.line_meet(0, &ints(&[-3, 0]), &ints(&[1, 0])).unwrap();
        assert_eq!(m, LineMeet::Interval { lo: Some(rat(3, 1)), hi: None });
        assert!(m.contains(&rat(5, 1)));
    }
}
