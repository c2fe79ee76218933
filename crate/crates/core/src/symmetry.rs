//! Coordinate permutation groups, orbits and canonical representatives.
//!
//! A group element is a one-line permutation `g` of `0..n`, acting by
//! `(g·v)[g[j]] = v[j]`. Signed symmetries of a cube are encoded in the
//! permutation they induce on the cube's vertices, so one mechanism covers
//! both the hyperoctahedral groups and arbitrary permutation groups.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::OnceLock;

use thiserror::Error;

use crate::fan::{FanError, IntVec, TropicalCollection, WeightedCone};
use crate::linalg::rank_of;

pub const MAX_GROUP_ELEMENTS: usize = 1_000_000;
pub const MAX_CUBE_DIM: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("group exceeds the enumeration limit: {0}")]
    TooLarge(String),
    #[error("generator {0} is not a permutation of 0..{1}")]
    InvalidPermutation(usize, usize),
    #[error("dimension mismatch: vector of length {got}, group acts on {expected} coordinates")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the group does not preserve the lineality space")]
    LinealityNotInvariant,
    #[error(transparent)]
    Fan(#[from] FanError),
}

impl SymmetryError {
    pub fn variant_name(&self) -> &'static str {
        match self {
            SymmetryError::TooLarge(_) => "TooLarge",
            SymmetryError::InvalidPermutation(..) => "InvalidPermutation",
            SymmetryError::DimensionMismatch { .. } => "DimensionMismatch",
            SymmetryError::LinealityNotInvariant => "LinealityNotInvariant",
            SymmetryError::Fan(e) => e.variant_name(),
        }
    }
}

#[derive(Debug)]
pub struct CoordSymmetryGroup {
    n_coords: usize,
    generators: Vec<Vec<usize>>,
    elements: OnceLock<Result<Vec<Vec<usize>>, SymmetryError>>,
}

impl Clone for CoordSymmetryGroup {
    fn clone(&self) -> Self {
        CoordSymmetryGroup {
            n_coords: self.n_coords,
            generators: self.generators.clone(),
            elements: OnceLock::new(),
        }
    }
}

pub fn act<T: Clone>(g: &[usize], v: &[T]) -> Vec<T> {
    let mut out = v.to_vec();
    for (j, x) in v.iter().enumerate() {
        out[g[j]] = x.clone();
    }
    out
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&j| p[j]).collect()
}

impl CoordSymmetryGroup {
    pub fn trivial(n_coords: usize) -> Self {
        CoordSymmetryGroup { n_coords, generators: Vec::new(), elements: OnceLock::new() }
    }

    pub fn from_generators(n_coords: usize, generators: Vec<Vec<usize>>) -> Result<Self, SymmetryError> {
        for (i, g) in generators.iter().enumerate() {
            let mut seen = vec![false; n_coords];
            if g.len() != n_coords {
                return Err(SymmetryError::InvalidPermutation(i, n_coords));
            }
            for &x in g {
                if x >= n_coords || seen[x] {
                    return Err(SymmetryError::InvalidPermutation(i, n_coords));
                }
                seen[x] = true;
            }
        }
        Ok(CoordSymmetryGroup { n_coords, generators, elements: OnceLock::new() })
    }

    /// Symmetries of the `m`-cube acting on its `2^m` vertices, indexed by
    /// bit strings with the first bit most significant. Generated by the
    /// per-axis bit flips and the adjacent axis swaps.
    pub fn hyperoctahedral_on_cube(m: usize) -> Result<Self, SymmetryError> {
        if m == 0 || m > MAX_CUBE_DIM {
            return Err(SymmetryError::TooLarge(format!("cube dimension {m} (supported: 1..={MAX_CUBE_DIM})")));
        }
        let n = 1usize << m;
        let bit = |axis: usize| 1usize << (m - 1 - axis);
        let mut gens = Vec::new();
        for axis in 0..m {
            gens.push((0..n).map(|x| x ^ bit(axis)).collect());
        }
        for axis in 0..m - 1 {
            let (a, b) = (bit(axis), bit(axis + 1));
            gens.push(
                (0..n)
                    .map(|x| {
                        let (xa, xb) = (x & a != 0, x & b != 0);
                        let mut y = x & !(a | b);
                        if xa {
                            y |= b;
                        }
                        if xb {
                            y |= a;
                        }
                        y
                    })
                    .collect(),
            );
        }
        CoordSymmetryGroup::from_generators(n, gens)
    }

    pub fn n_coords(&self) -> usize {
        self.n_coords
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(|g| g.iter().enumerate().all(|(i, &x)| i == x))
    }

    /// All group elements, by closure over the generators.
    pub fn elements(&self) -> Result<&[Vec<usize>], SymmetryError> {
        self.elements
            .get_or_init(|| {
                let id: Vec<usize> = (0..self.n_coords).collect();
                let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
                let mut out = vec![id.clone()];
                let mut queue = VecDeque::from([id]);
                while let Some(e) = queue.pop_front() {
                    for g in &self.generators {
                        let h = compose(g, &e);
                        if seen.insert(h.clone()) {
                            if out.len() >= MAX_GROUP_ELEMENTS {
                                return Err(SymmetryError::TooLarge(format!(
                                    "more than {MAX_GROUP_ELEMENTS} elements"
                                )));
                            }
                            out.push(h.clone());
                            queue.push_back(h);
                        }
                    }
                }
                out.sort();
                Ok(out)
            })
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(Clone::clone)
    }

    pub fn order(&self) -> Result<usize, SymmetryError> {
        Ok(self.elements()?.len())
    }

    fn check_dim(&self, len: usize) -> Result<(), SymmetryError> {
        if len != self.n_coords {
            return Err(SymmetryError::DimensionMismatch { expected: self.n_coords, got: len });
        }
        Ok(())
    }

    /// The orbit of `v`, sorted. Computed by closure over the generators, so
    /// the group itself is never enumerated.
    pub fn orbit<T: Clone + Ord>(&self, v: &[T]) -> Result<Vec<Vec<T>>, SymmetryError> {
        Ok(self.orbit_with::<T, u8>(v, &[])?.into_iter().map(|(x, _)| x).collect())
    }

    /// Orbit of `v` together with, for each orbit point `g·v`, the image
    /// `g·w` of a companion vector under one such `g`.
    pub fn orbit_with<T: Clone + Ord, U: Clone>(
        &self,
        v: &[T],
        w: &[U],
    ) -> Result<Vec<(Vec<T>, Vec<U>)>, SymmetryError> {
        self.check_dim(v.len())?;
        let mut seen: BTreeSet<Vec<T>> = BTreeSet::from([v.to_vec()]);
        let mut out = vec![(v.to_vec(), w.to_vec())];
        let mut i = 0;
        while i < out.len() {
            for g in &self.generators {
                let gv = act(g, &out[i].0);
                if seen.insert(gv.clone()) {
                    let gw = if w.is_empty() { Vec::new() } else { act(g, &out[i].1) };
                    out.push((gv, gw));
                }
            }
            i += 1;
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    pub fn canonical_rep<T: Clone + Ord>(&self, v: &[T]) -> Result<Vec<T>, SymmetryError> {
        Ok(self.orbit(v)?.swap_remove(0))
    }

    pub fn stabilizer_order<T: Clone + Eq>(&self, v: &[T]) -> Result<usize, SymmetryError> {
        self.check_dim(v.len())?;
        Ok(self.elements()?.iter().filter(|g| act(g, v) == v).count())
    }

    /// Checks that every generator maps the lineality span of `t` to itself.
    pub fn preserves_lineality(&self, t: &TropicalCollection) -> bool {
        let lin = t.lineality();
        let r = lin.len();
        self.generators.iter().all(|g| {
            lin.iter().all(|l| {
                let mut rows = lin.to_vec();
                rows.push(act(g, l));
                rank_of(&rows) == r
            })
        })
    }

    /// The orbit of cone `id` of `t`: images of every ray, each image cone
    /// put into canonical form (rays reduced modulo lineality, sorted).
    pub fn orbit_cones(&self, t: &TropicalCollection, id: usize) -> Result<Vec<WeightedCone>, SymmetryError> {
        self.check_dim(t.ambient_dim())?;
        if !self.preserves_lineality(t) {
            return Err(SymmetryError::LinealityNotInvariant);
        }
        let proj = t.projector();
        let key = |rays: &[IntVec]| -> Vec<IntVec> {
            let mut r: Vec<IntVec> = rays.iter().filter_map(|x| proj.reduce_primitive(x)).collect();
            r.sort();
            r.dedup();
            r
        };
        let start = key(&t.cones()[id].rays);
        let mut seen: BTreeSet<Vec<IntVec>> = BTreeSet::from([start.clone()]);
        let mut queue = vec![start];
        let mut i = 0;
        while i < queue.len() {
            for g in &self.generators {
                let image: Vec<IntVec> = queue[i].iter().map(|r| act(g, r)).collect();
                let k = key(&image);
                if seen.insert(k.clone()) {
                    queue.push(k);
                }
            }
            i += 1;
        }
        let m = t.cones()[id].multiplicity;
        Ok(seen.into_iter().map(|r| WeightedCone::new(r, m)).collect())
    }

    /// Expands a collection of orbit representatives into the full collection.
    pub fn expand(&self, reps: &TropicalCollection) -> Result<TropicalCollection, SymmetryError> {
        let mut all: BTreeSet<Vec<IntVec>> = BTreeSet::new();
        let mut cones = Vec::new();
        for id in 0..reps.len() {
            for c in self.orbit_cones(reps, id)? {
                if all.insert(c.rays.clone()) {
                    cones.push(c);
                }
            }
        }
        Ok(TropicalCollection::new(reps.ambient_dim(), reps.lineality().to_vec(), cones)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_group_orders() {
        assert_eq!(CoordSymmetryGroup::hyperoctahedral_on_cube(1).unwrap().order().unwrap(), 2);
        assert_eq!(CoordSymmetryGroup::hyperoctahedral_on_cube(2).unwrap().order().unwrap(), 8);
        assert_eq!(CoordSymmetryGroup::hyperoctahedral_on_cube(3).unwrap().order().unwrap(), 48);
        assert_eq!(CoordSymmetryGroup::hyperoctahedral_on_cube(4).unwrap().order().unwrap(), 384);
        assert!(matches!(CoordSymmetryGroup::hyperoctahedral_on_cube(9), Err(SymmetryError::TooLarge(_))));
    }

    #[test]
    fn orbits() {
        let b4 = CoordSymmetryGroup::hyperoctahedral_on_cube(4).unwrap();
        assert_eq!(b4.orbit(&[7i64; 16]).unwrap().len(), 1);
        let v: Vec<i64> = (0..16).map(|i| i * i + 3 * i).collect();
        assert_eq!(b4.orbit(&v).unwrap().len(), 384);
        let swap = CoordSymmetryGroup::from_generators(2, vec![vec![1, 0]]).unwrap();
        assert_eq!(swap.canonical_rep(&[1, 0]).unwrap(), vec![0, 1]);
        assert_eq!(swap.canonical_rep(&[3, 3]).unwrap(), vec![3, 3]);
        assert!(matches!(swap.orbit(&[1, 2, 3]), Err(SymmetryError::DimensionMismatch { .. })));
    }

    #[test]
    fn invalid_generators() {
        assert!(CoordSymmetryGroup::from_generators(3, vec![vec![0, 0, 1]]).is_err());
        assert!(CoordSymmetryGroup::from_generators(3, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn orbit_with_tracks_companion() {
        let swap = CoordSymmetryGroup::from_generators(2, vec![vec![1, 0]]).unwrap();
        let o = swap.orbit_with(&[5, 1], &[10, 2]).unwrap();
        assert_eq!(o, vec![(vec![1, 5], vec![2, 10]), (vec![5, 1], vec![10, 2])]);
    }
}
