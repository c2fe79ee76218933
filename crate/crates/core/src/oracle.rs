//! Cross-checks against polynomials with known exponents.
//!
//! For an explicit exponent set the Newton polytope and its weighted normal
//! skeleton are computed directly; ray shooting over the skeleton must then
//! reproduce the `w`-maximal exponent, translated so that the polytope
//! touches every coordinate hyperplane from the positive side.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::fan::{IntVec, TropicalCollection};
use crate::hull::{convex_hull, weighted_normal_skeleton, HullError};
use crate::linalg::{dot, Int};
use crate::newton::{crossing_records, shoot, walk, NewtonError, SearchOptions, VertexWitness};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
    #[error("no generic objective found after {0} draws")]
    NoGenericObjective(usize),
    #[error("{failed} of {checked} shots disagree with the direct maximum")]
    Disagreement { failed: usize, checked: usize },
}

impl OracleError {
    pub fn variant_name(&self) -> &'static str {
        match self {
            OracleError::Hull(e) => e.variant_name(),
            OracleError::Newton(e) => e.variant_name(),
            OracleError::NoGenericObjective(_) => "NoGenericObjective",
            OracleError::Disagreement { .. } => "Disagreement",
        }
    }
}

/// The unique `w`-maximal point translated by the coordinatewise minimum,
/// or `None` on a tie.
pub fn normalized_argmax(points: &[IntVec], w: &[Int]) -> Option<IntVec> {
    let n = w.len();
    let mut best: Option<(Int, &IntVec)> = None;
    let mut tied = false;
    for p in points {
        let s = dot(p, w);
        match &best {
            Some((b, q)) if s < *b || (s == *b && p == *q) => {}
            Some((b, _)) if s == *b => tied = true,
            _ => {
                best = Some((s, p));
                tied = false;
            }
        }
    }
    if tied {
        return None;
    }
    let (_, p) = best?;
    let shift: Vec<Int> = (0..n).map(|i| points.iter().map(|q| q[i].clone()).min().unwrap_or_default()).collect();
    Some(p.iter().zip(&shift).map(|(a, b)| a - b).collect())
}

pub fn skeleton_of(points: &[IntVec]) -> Result<TropicalCollection, OracleError> {
    Ok(weighted_normal_skeleton(&convex_hull(points)?)?)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct OracleReport {
    pub checked: usize,
    pub matched: usize,
    pub mismatches: Vec<(Vec<String>, Vec<String>, Vec<String>)>,
}

fn strs(v: &[Int]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Draws objectives with entries in `[-range, range]` until one is generic
/// both for the exponent set and for the skeleton.
fn generic_draw(
    points: &[IntVec],
    t: &TropicalCollection,
    rng: &mut ChaCha8Rng,
    range: i64,
) -> Result<(IntVec, IntVec, IntVec), OracleError> {
    let n = t.ambient_dim();
    const DRAWS: usize = 1000;
    for _ in 0..DRAWS {
        let w: IntVec = (0..n).map(|_| Int::from(rng.gen_range(-range..=range))).collect();
        if w.iter().all(Zero::is_zero) {
            continue;
        }
        let Some(expected) = normalized_argmax(points, &w) else { continue };
        match shoot(t, &w) {
            Ok(s) => return Ok((w, expected, s.vertex)),
            Err(NewtonError::GenericityViolation { .. }) | Err(NewtonError::ObjectiveInCone(_)) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(OracleError::NoGenericObjective(DRAWS))
}

/// Compares ray shooting with the direct maximum for `count` objectives.
pub fn check_shoot(points: &[IntVec], count: usize, seed: u64) -> Result<OracleReport, OracleError> {
    let t = skeleton_of(points)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = OracleReport::default();
    for _ in 0..count {
        let (w, expected, got) = generic_draw(points, &t, &mut rng, 1000)?;
        report.checked += 1;
        if expected == got {
            report.matched += 1;
        } else {
            report.mismatches.push((strs(&w), strs(&expected), strs(&got)));
        }
    }
    Ok(report)
}

/// Walks from `count` objectives in both directions and re-shoots every
/// emitted witness. Objectives whose walk lines touch a cone boundary are
/// redrawn. Returns the number of witnesses checked and those whose
/// objective shoots elsewhere.
pub fn check_walks(
    points: &[IntVec],
    count: usize,
    seed: u64,
) -> Result<(usize, Vec<VertexWitness>), OracleError> {
    let t = skeleton_of(points)?;
    let opts = SearchOptions { seed, ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut origins = 0;
    let mut draws = 0;
    while origins < count {
        draws += 1;
        if draws > 50 * count.max(1) {
            return Err(OracleError::NoGenericObjective(draws));
        }
        let (w, _, v) = generic_draw(points, &t, &mut rng, 1000)?;
        let mut emitted = Vec::new();
        let mut generic = true;
        for sign in [-1, 1] {
            let records = crossing_records(&t, &w, sign)?;
            match walk(&t, &w, &v, &records, sign, &opts) {
                Ok(ws) => emitted.extend(ws),
                Err(NewtonError::GenericityViolation { .. }) => generic = false,
                Err(e) => return Err(e.into()),
            }
        }
        if !generic {
            continue;
        }
        origins += 1;
        for wit in emitted {
            checked += 1;
            if shoot(&t, &wit.objective)?.vertex != wit.vertex {
                bad.push(wit);
            }
        }
    }
    Ok((checked, bad))
}

/// A random exponent set with `n` variables, at most `max_terms` distinct
/// monomials and exponents in `0..=max_exp`.
pub fn random_exponents(rng: &mut impl Rng, n: usize, max_terms: usize, max_exp: i64) -> Vec<IntVec> {
    let k = rng.gen_range(1..=max_terms);
    let mut pts: Vec<IntVec> =
        (0..k).map(|_| (0..n).map(|_| Int::from(rng.gen_range(0..=max_exp))).collect()).collect();
    pts.sort();
    pts.dedup();
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ints;

    #[test]
    fn argmax_examples() {
        let tri = vec![ints(&[0, 0]), ints(&[1, 0]), ints(&[0, 1])];
        assert_eq!(normalized_argmax(&tri, &ints(&[2, 1])), Some(ints(&[1, 0])));
        assert_eq!(normalized_argmax(&tri, &ints(&[1, 1])), None);
        let shifted = vec![ints(&[3, 5]), ints(&[4, 5]), ints(&[3, 6])];
        assert_eq!(normalized_argmax(&shifted, &ints(&[-1, 3])), Some(ints(&[0, 1])));
    }

    #[test]
    fn triangle_round_trip() {
        let tri = vec![ints(&[0, 0]), ints(&[2, 0]), ints(&[0, 2]), ints(&[1, 1])];
        let r = check_shoot(&tri, 20, 0).unwrap();
        assert_eq!((r.checked, r.matched), (20, 20));
        let (checked, bad) = check_walks(&tri, 5, 0).unwrap();
        assert!(checked > 0);
        assert!(bad.is_empty());
    }

    #[test]
    fn single_monomial() {
        let r = check_shoot(&[ints(&[2, 3, 1])], 5, 1).unwrap();
        assert_eq!(r.matched, 5);
    }
}
