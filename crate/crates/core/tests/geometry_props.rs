use proptest::prelude::*;
use tropnewton::fan::{canonicalize, check_balancing_curve, cone_contains, ray_cone_intersection, IntVec, TropicalCollection};
use tropnewton::hull::{convex_hull, weighted_normal_skeleton};
use tropnewton::linalg::{dot, rank_of, rat_from_int, Int, IntMatrix, Rat};
use tropnewton::oracle::{normalized_argmax, skeleton_of};
use tropnewton::newton::shoot;
use tropnewton::pushforward::{
    minkowski_image, product_fan, pushforward_multiplicity, quotient_by_lineality, MonomialMapSpec,
};
use tropnewton::symmetry::CoordSymmetryGroup;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() }
}

fn points(n: usize, max: usize) -> impl Strategy<Value = Vec<IntVec>> {
    prop::collection::vec(prop::collection::vec(0i64..=6, n), 1..=max)
        .prop_map(|ps| ps.into_iter().map(|p| p.into_iter().map(Int::from).collect()).collect())
}

fn int_vec(n: usize, lo: i64, hi: i64) -> impl Strategy<Value = IntVec> {
    prop::collection::vec(lo..=hi, n).prop_map(|v| v.into_iter().map(Int::from).collect())
}

fn reversed(t: &TropicalCollection) -> TropicalCollection {
    let mut cones = t.cones().to_vec();
    cones.reverse();
    for c in &mut cones {
        c.rays.reverse();
    }
    TropicalCollection::new(t.ambient_dim(), t.lineality().to_vec(), cones).unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn canonicalize_is_idempotent_and_order_free(pts in points(3, 8)) {
        let t = skeleton_of(&pts).unwrap();
        let c = canonicalize(&t).unwrap();
        prop_assert_eq!(canonicalize(&c).unwrap(), c.clone());
        prop_assert_eq!(canonicalize(&reversed(&t)).unwrap(), c);
    }

    #[test]
    fn crossings_lie_in_their_cones(pts in points(3, 8), w in int_vec(3, -50, 50)) {
        let t = skeleton_of(&pts).unwrap();
        let n = t.ambient_dim();
        for cone in t.cones() {
            for coord in 0..n {
                for sign in [-1, 1] {
                    let rec = match ray_cone_intersection(cone, t.lineality(), &w, coord, sign) {
                        Ok(Some(r)) => r,
                        _ => continue,
                    };
                    let mut p: Vec<Rat> = w.iter().map(rat_from_int).collect();
                    p[coord] += Rat::from_integer(Int::from(sign)) * &rec.param;
                    let (inside, interior) = cone_contains(cone, t.lineality(), &p).unwrap();
                    prop_assert!(inside);
                    prop_assert_eq!(rec.boundary_hit, !interior);
                }
            }
        }
    }

    #[test]
    fn hull_duality(pts in points(4, 10)) {
        let h = convex_hull(&pts).unwrap();
        for p in &pts {
            prop_assert!(h.contains(p));
        }
        for f in &h.facets {
            let tight: Vec<&IntVec> = h.vertices.iter().filter(|v| dot(&f.normal, v) == f.bound).collect();
            for v in &h.vertices {
                prop_assert!(dot(&f.normal, v) <= f.bound);
            }
            let diffs: Vec<IntVec> = tight.iter().map(|v| v.iter().zip(tight[0]).map(|(a, b)| a - b).collect()).collect();
            prop_assert_eq!(rank_of(&diffs) + 1, h.affine_dim);
        }
        for e in &h.equations {
            let c = dot(e, &pts[0]);
            for p in &pts {
                prop_assert_eq!(dot(e, p), c.clone());
            }
        }
    }

    #[test]
    fn polygon_skeleton_is_balanced(pts in points(2, 8)) {
        let h = convex_hull(&pts).unwrap();
        if h.affine_dim == 2 {
            let t = weighted_normal_skeleton(&h).unwrap();
            prop_assert!(check_balancing_curve(&t).unwrap());
        }
    }

    #[test]
    fn shooting_matches_argmax(pts in points(3, 10), w in int_vec(3, -200, 200)) {
        let t = skeleton_of(&pts).unwrap();
        if let (Some(expected), Ok(s)) = (normalized_argmax(&pts, &w), shoot(&t, &w)) {
            prop_assert_eq!(s.vertex, expected);
        }
    }

    #[test]
    fn product_weights_multiply(a in points(2, 6), b in points(2, 6)) {
        let (ta, tb) = (skeleton_of(&a).unwrap(), skeleton_of(&b).unwrap());
        let p = product_fan(&ta, &tb).unwrap();
        prop_assert_eq!(p.len(), ta.len() * tb.len());
        for (i, ca) in ta.cones().iter().enumerate() {
            for (j, cb) in tb.cones().iter().enumerate() {
                prop_assert_eq!(p.cones()[i * tb.len() + j].multiplicity, ca.multiplicity * cb.multiplicity);
            }
        }
    }

    #[test]
    fn image_ignores_cone_order(pts in points(3, 8)) {
        let t = skeleton_of(&pts).unwrap();
        let a = IntMatrix::from_i64_rows(&[&[1, 1, 0], &[0, 1, 1]]);
        let map = MonomialMapSpec::new(a, 1);
        prop_assert_eq!(minkowski_image(&t, &map, None).unwrap(), minkowski_image(&reversed(&t), &map, None).unwrap());
    }

    #[test]
    fn identity_pushforward_keeps_weight(pts in points(3, 8)) {
        let t = skeleton_of(&pts).unwrap();
        let map = MonomialMapSpec::new(IntMatrix::identity(3), 1);
        for id in 0..t.len() {
            prop_assert_eq!(pushforward_multiplicity(&t, &[id], &map).unwrap(), t.cones()[id].multiplicity);
        }
    }

    #[test]
    fn quotient_keeps_weights(pts in points(3, 8)) {
        let lifted: Vec<IntVec> = pts.iter().map(|p| { let mut q = p.clone(); q.push(Int::from(3) - &p[0] - &p[1]); q }).collect();
        let t = skeleton_of(&lifted).unwrap();
        let l = IntMatrix::from_columns(t.lineality(), 4);
        let q = quotient_by_lineality(&t, &l).unwrap();
        let mut before: Vec<u64> = t.cones().iter().map(|c| c.multiplicity).collect();
        let mut after: Vec<u64> = q.cones().iter().map(|c| c.multiplicity).collect();
        before.sort();
        after.sort();
        prop_assert_eq!(before, after);
        prop_assert_eq!(q.lineality_dim(), 0);
    }

    #[test]
    fn orbit_stabilizer(v in int_vec(8, 0, 2)) {
        let g = CoordSymmetryGroup::hyperoctahedral_on_cube(3).unwrap();
        let orbit = g.orbit(&v).unwrap();
        prop_assert_eq!(orbit.len() * g.stabilizer_order(&v).unwrap(), g.order().unwrap());
        prop_assert!(orbit.contains(&g.canonical_rep(&v).unwrap()));
        prop_assert_eq!(&g.canonical_rep(&v).unwrap(), orbit.iter().min().unwrap());
    }

    #[test]
    fn cube_group_from_other_generators(v in int_vec(8, 0, 3)) {
        // cube vertices indexed by bits (b0 b1 b2), first bit most significant
        let idx = |b: [usize; 3]| b[0] * 4 + b[1] * 2 + b[2];
        let perm = |f: &dyn Fn([usize; 3]) -> [usize; 3]| -> Vec<usize> {
            let mut g = vec![0; 8];
            for k in 0..8 {
                let b = [k >> 2 & 1, k >> 1 & 1, k & 1];
                g[k] = idx(f(b));
            }
            g
        };
        let cycle = perm(&|b| [b[2], b[0], b[1]]);
        let swap = perm(&|b| [b[1], b[0], b[2]]);
        let flip = perm(&|b| [1 - b[0], b[1], b[2]]);
        let other = CoordSymmetryGroup::from_generators(8, vec![cycle, swap, flip]).unwrap();
        let std = CoordSymmetryGroup::hyperoctahedral_on_cube(3).unwrap();
        prop_assert_eq!(other.order().unwrap(), 48);
        prop_assert_eq!(other.orbit(&v).unwrap(), std.orbit(&v).unwrap());
    }
}

#[test]
fn trivial_group_orbits_are_points() {
    let g = CoordSymmetryGroup::trivial(4);
    let v: IntVec = [3, 1, 4, 1].iter().map(|&x| Int::from(x)).collect();
    assert_eq!(g.orbit(&v).unwrap(), vec![v.clone()]);
    assert_eq!(g.stabilizer_order(&v).unwrap(), 1);
}
