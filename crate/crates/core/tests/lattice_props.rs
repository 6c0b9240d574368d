use latpierce::lattice::{is_canonical, parse_basis};
use latpierce::rational::q;
use latpierce::{canonicalize, gauss_reduce, LatticeBasis, Point, Rational};
use proptest::prelude::*;

fn arb_entry() -> impl Strategy<Value = Rational> {
    (-36i64..=36, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

fn arb_basis() -> impl Strategy<Value = LatticeBasis> {
    (arb_entry(), arb_entry(), arb_entry(), arb_entry())
        .prop_map(|(a, b, c, d)| LatticeBasis::new(a, b, c, d))
        .prop_filter("non-degenerate", |b| !b.is_degenerate())
}

/// Integer matrices of determinant ±1 with small entries.
fn arb_unimodular() -> impl Strategy<Value = [[i64; 2]; 2]> {
    (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3)
        .prop_map(|(p, q, r, s)| [[p, q], [r, s]])
        .prop_filter("det ±1", |m| (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs() == 1)
}

fn same_lattice(x: &LatticeBasis, y: &LatticeBasis) -> bool {
    x.area() == y.area() && [x.u(), x.v()].iter().all(|p| y.coords(p).is_some())
}

fn brute_shortest(b: &LatticeBasis) -> Rational {
    let r = gauss_reduce(b).unwrap();
    // The reduced basis is short, so small coefficients of it suffice.
    (-4i64..=4)
        .flat_map(|i| (-4i64..=4).map(move |j| (i, j)))
        .filter(|&p| p != (0, 0))
        .map(|(i, j)| r.point(i, j).norm2())
        .min()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn gauss_reduce_finds_a_shortest_vector(b in arb_basis()) {
        let r = gauss_reduce(&b).unwrap();
        prop_assert!(same_lattice(&r, &b));
        let (u, v) = (r.u(), r.v());
        prop_assert!(u.norm2() <= v.norm2());
        prop_assert!(u.dot(&v).abs() * 2 <= u.norm2());
        prop_assert_eq!(u.norm2(), brute_shortest(&b));
    }

    #[test]
    fn canonical_form_invariants(b in arb_basis()) {
        let cb = canonicalize(&b).unwrap();
        prop_assert!(cb.violations().is_empty(), "{:?}", cb.violations());
        prop_assert!(cb.family_transform.has_unit_scales());
        prop_assert_eq!(cb.area(), b.area());
        prop_assert!(same_lattice(&cb.basis, &b.transformed(&cb.family_transform)));
        prop_assert_eq!(&cb.lambda2, &brute_shortest(&b));
        prop_assert_eq!(&cb.lambda2 * &cb.mu2, cb.area().square());
    }

    #[test]
    fn canonicalize_is_idempotent(b in arb_basis()) {
        let cb = canonicalize(&b).unwrap();
        prop_assert!(is_canonical(&cb.basis));
        let again = canonicalize(&cb.basis).unwrap();
        prop_assert_eq!(&again.basis, &cb.basis);
        prop_assert!(again.family_transform.is_identity());
    }

    #[test]
    fn canonical_form_ignores_basis_choice(b in arb_basis(), m in arb_unimodular()) {
        let (u, v) = (b.u(), b.v());
        let u2 = u.scale_int(m[0][0]).add(&v.scale_int(m[0][1]));
        let v2 = u.scale_int(m[1][0]).add(&v.scale_int(m[1][1]));
        let other = LatticeBasis::from_vectors(&u2, &v2);
        let (x, y) = (canonicalize(&b).unwrap(), canonicalize(&other).unwrap());
        prop_assert_eq!(x.basis, y.basis);
        prop_assert_eq!(x.family_transform.kind(), y.family_transform.kind());
    }
}

#[test]
fn canonical_examples() {
    let cases = [
        ([(5, 3), (1, 1), (8, 3), (3, 2)], [(5, 3), (1, 1), (1, 1), (5, 2)]),
        ([(1, 1), (1, 1), (1, 1), (4, 1)], [(1, 1), (1, 1), (3, 1), (2, 1)]),
        ([(1, 1), (2, 1), (1, 1), (3, 1)], [(1, 1), (2, 1), (2, 1), (1, 1)]),
        ([(1, 1), (5, 3), (5, 2), (1, 1)], [(1, 1), (5, 3), (5, 2), (1, 1)]),
    ];
    for (input, expected) in cases {
        let cb = canonicalize(&LatticeBasis::from_fracs(input)).unwrap();
        assert_eq!(cb.basis, LatticeBasis::from_fracs(expected), "input {input:?}");
        assert!(cb.family_transform.is_identity());
    }
}

#[test]
fn degenerate_basis_is_rejected() {
    let b = LatticeBasis::from_fracs([(1, 1), (2, 1), (2, 1), (-4, 1)]);
    assert!(b.is_degenerate());
    assert!(canonicalize(&b).is_err());
    assert!(gauss_reduce(&b).is_err());
}

#[test]
fn parse_forms_agree() {
    let x = parse_basis("5/3 1 8/3 3/2").unwrap();
    let y = parse_basis("u=(5/3, 1) v=(8/3, -3/2)").unwrap();
    assert_eq!(x, y);
    assert_eq!(x.v(), Point::new(q(8, 3), q(-3, 2)));
    assert!(parse_basis("1 2 3").is_err());
}
