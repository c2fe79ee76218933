use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use tropnewton::linalg::*;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(-9i64..=9, r * c)
            .prop_map(move |d| IntMatrix::new(r, c, d.into_iter().map(Int::from).collect()))
    })
}

fn vector(n: usize) -> impl Strategy<Value = Vec<Int>> {
    prop::collection::vec(-20i64..=20, n).prop_map(|v| v.into_iter().map(Int::from).collect())
}

/// `A` (d×r) and `B` (r×k) with `k <= r`.
fn pair() -> impl Strategy<Value = (IntMatrix, IntMatrix)> {
    matrix(6, 6).prop_flat_map(|a| {
        let r = a.cols();
        (Just(a), (1..=r).prop_flat_map(move |k| {
            prop::collection::vec(-9i64..=9, r * k)
                .prop_map(move |d| IntMatrix::new(r, k, d.into_iter().map(Int::from).collect()))
        }))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn hermite_form_invariants(m in matrix(6, 6)) {
        let (h, u) = hermite_normal_form(&m);
        prop_assert_eq!(u.mul(&m).unwrap(), h.clone());
        prop_assert!(u.determinant().abs().is_one());
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for r in 0..h.rows() {
            let row = h.row(r);
            match row.iter().position(|x| !x.is_zero()) {
                None => seen_zero = true,
                Some(p) => {
                    prop_assert!(!seen_zero, "zero row above a nonzero row");
                    prop_assert!(last_pivot.map_or(true, |q| p > q));
                    prop_assert!(row[p].is_positive());
                    for above in 0..r {
                        let x = h.get(above, p);
                        prop_assert!(!x.is_negative() && x < &row[p]);
                    }
                    last_pivot = Some(p);
                }
            }
        }
        let nonzero = h.row_vecs().iter().filter(|r| r.iter().any(|x| !x.is_zero())).count();
        prop_assert_eq!(nonzero, m.rank());
    }

    #[test]
    fn lattice_index_matches_smith((a, b) in pair()) {
        if b.rank() < b.cols() {
            return Ok(());
        }
        let ours = lattice_index(&a, &b);
        let ab = a.mul(&b).unwrap();
        match (smith_index_oracle(&ab), smith_index_oracle(&b)) {
            (Ok(num), Ok(den)) => prop_assert_eq!(ours.unwrap(), num / den),
            (Err(LinalgError::RankDrop { .. }), _) => {
                let is_rank_drop = matches!(ours, Err(LinalgError::RankDrop { .. }));
                prop_assert!(is_rank_drop);
            }
            (x, y) => prop_assert!(false, "unexpected oracle result {:?} {:?}", x, y),
        }
    }

    #[test]
    fn gcd_of_minors_matches_smith(m in matrix(6, 6)) {
        let full = m.rank() == m.rows().min(m.cols());
        let g = gcd_maximal_minors(&m);
        prop_assert_eq!(g.is_zero(), !full);
        if full {
            let t = if m.rows() < m.cols() { m.transpose() } else { m.clone() };
            prop_assert_eq!(g, smith_index_oracle(&t).unwrap());
        }
    }

    #[test]
    fn primitive_vectors(v in vector(5)) {
        match primitive_int(&v) {
            Err(LinalgError::ZeroVector) => prop_assert!(v.iter().all(Zero::is_zero)),
            Err(e) => prop_assert!(false, "{:?}", e),
            Ok(p) => {
                prop_assert!(gcd_slice(&p).is_one());
                let g = gcd_slice(&v);
                for (a, b) in v.iter().zip(&p) {
                    prop_assert_eq!(a, &(b * &g));
                }
            }
        }
    }

    #[test]
    fn kernel_is_saturated_and_annihilated(m in matrix(4, 6)) {
        let rows = m.row_vecs();
        let n = m.cols();
        let k = integer_kernel(&rows, n);
        prop_assert_eq!(k.len(), n - m.rank());
        for v in &k {
            for r in &rows {
                prop_assert!(dot(r, v).is_zero());
            }
        }
        prop_assert!(saturation_index(&k, n).is_one());
        let s = saturate(&rows, n);
        prop_assert_eq!(saturate(&s, n), s.clone());
        prop_assert_eq!(s.len(), m.rank());
    }

    #[test]
    fn solve_recovers_solution((m, x) in matrix(5, 4).prop_flat_map(|m| { let c = m.cols(); (Just(m), vector(c)) })) {
        let b: Vec<Int> = m.mul_vec(&x).unwrap();
        let sol = solve_exact(&m.to_exact(), &ExactVector::from_ints(&b));
        if m.rank() == m.cols() {
            prop_assert_eq!(sol.unwrap(), ExactVector::from_ints(&x));
        } else {
            prop_assert_eq!(sol, Err(LinalgError::Underdetermined));
        }
    }

    #[test]
    fn bareiss_rank_agrees_with_hermite(m in matrix(6, 6)) {
        let (h, _) = hermite_normal_form(&m);
        let nonzero = h.row_vecs().iter().filter(|r| r.iter().any(|x| !x.is_zero())).count();
        prop_assert_eq!(m.rank(), nonzero);
        prop_assert_eq!(m.rank(), m.to_exact().rank());
    }
}

#[test]
fn projector_removes_lineality() {
    let p = OrthProjector::new(&[ints(&[1, 1, 1])]);
    assert_eq!(p.reduce_primitive(&ints(&[2, 2, 2])), None);
    assert_eq!(p.reduce_primitive(&ints(&[1, 0, 0])), Some(ints(&[2, -1, -1])));
}
