use latpierce::rational::{q, rational_gcd};
use latpierce::Rational;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

/// Mixes small values with values near the i64 edge so both representations
/// and the promotion path get exercised.
fn arb_rational() -> impl Strategy<Value = Rational> {
    let small = (-50i64..=50, 1i64..=24).prop_map(|(n, d)| q(n, d));
    let wide = (any::<i64>(), 1i64..=i64::MAX).prop_map(|(n, d)| q(n, d));
    prop_oneof![3 => small, 1 => wide]
}

fn big(r: &Rational) -> BigRational {
    r.to_big()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn arithmetic_matches_big_oracle(x in arb_rational(), y in arb_rational()) {
        prop_assert_eq!((&x + &y).to_big(), big(&x) + big(&y));
        prop_assert_eq!((&x - &y).to_big(), big(&x) - big(&y));
        prop_assert_eq!((&x * &y).to_big(), big(&x) * big(&y));
        if !y.is_zero() {
            prop_assert_eq!(x.checked_div(&y).unwrap().to_big(), big(&x) / big(&y));
        } else {
            prop_assert!(x.checked_div(&y).is_err());
        }
        prop_assert_eq!(x.cmp(&y), big(&x).cmp(&big(&y)));
    }

    #[test]
    fn field_laws(x in arb_rational(), y in arb_rational(), z in arb_rational()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x - &x), &Rational::ZERO);
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.recip(), Rational::ONE);
        }
    }

    #[test]
    fn equal_values_have_one_representation(n in -1000i64..1000, d in 1i64..1000, m in 1i64..1000) {
        let a = q(n, d);
        let b = q(n * m, d * m);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.to_string(), b.to_string());
        prop_assert_eq!(Rational::from_big(big(&a)), b);
    }

    #[test]
    fn floor_ceil_bracket(x in arb_rational()) {
        let f = Rational::from_bigints(x.floor(), BigInt::from(1));
        let c = Rational::from_bigints(x.ceil(), BigInt::from(1));
        prop_assert!(f <= x && x < &f + 1);
        prop_assert!(c >= x && x > &c - 1);
        prop_assert_eq!(x.is_integer(), f == c);
    }

    #[test]
    fn display_parse_roundtrip(x in arb_rational()) {
        let parsed: Rational = x.to_string().parse().unwrap();
        prop_assert_eq!(&parsed, &x);
        let short: Rational = x.to_short_string().parse().unwrap();
        prop_assert_eq!(short, x);
    }

    #[test]
    fn gcd_generates_both(x in arb_rational(), y in arb_rational()) {
        prop_assume!(!(x.is_zero() && y.is_zero()));
        let g = rational_gcd(&x, &y).unwrap();
        prop_assert!(g.is_positive());
        prop_assert!(x.checked_div(&g).unwrap().is_integer());
        prop_assert!(y.checked_div(&g).unwrap().is_integer());
    }

    #[test]
    fn sqrt_bounds_enclose(n in 0i64..1_000_000, d in 1i64..1000, bits in 4u32..60) {
        let x = q(n, d);
        let (lo, hi) = x.sqrt_bounds(bits);
        prop_assert!(lo.square() <= x && x <= hi.square());
        let width = (&hi - &lo).to_big();
        prop_assert!(!width.is_negative());
        prop_assert!(width * BigRational::from_integer(BigInt::from(1u8) << bits) <= BigRational::from_integer(BigInt::from(1)));
        if let Some(r) = x.exact_sqrt() {
            prop_assert_eq!(r.square(), x);
        }
    }
}

#[test]
fn gcd_of_zeros_is_an_error() {
    assert!(rational_gcd(&Rational::ZERO, &Rational::ZERO).is_err());
    assert!(!BigRational::zero().is_positive());
}
