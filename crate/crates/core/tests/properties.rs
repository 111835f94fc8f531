//! Property-based invariants with shrinking, complementing the seeded
//! suites: canonical-form uniqueness, ring axioms, filtration behavior,
//! and calculus laws on arbitrary small inputs.

use proptest::prelude::*;

use sphere_av::rational::{rat_i, Rat};
use sphere_av::ring::{
    parse_localized, partial, valuation, Chart, Coord, LocalizedFun, SphereFun, SpherePoint,
    DEFAULT_VALUATION_CAP,
};

/// Formal term lists (coef, a, b, z-exponent) with z-exponents up to 3, so
/// normalization genuinely has to rewrite.
fn formal_terms() -> impl Strategy<Value = Vec<(i64, u32, u32, u32)>> {
    prop::collection::vec((-3i64..=3, 0u32..=3, 0u32..=3, 0u32..=3), 1..5)
}

fn to_fun(terms: &[(i64, u32, u32, u32)]) -> SphereFun {
    SphereFun::from_terms(terms.iter().map(|&(c, a, b, e)| (rat_i(c), a, b, e)))
}

fn sphere_fun() -> impl Strategy<Value = SphereFun> {
    formal_terms().prop_map(|t| to_fun(&t))
}

fn localized() -> impl Strategy<Value = LocalizedFun> {
    (formal_terms(), 0u32..=2).prop_map(|(t, k)| LocalizedFun::new(to_fun(&t), (0, 0, k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Normalization is a ring homomorphism from formal polynomials: the
    /// canonical form of a product equals the product of canonical forms.
    #[test]
    fn normalize_is_multiplicative(s in formal_terms(), t in formal_terms()) {
        let mut product = Vec::new();
        for &(c1, a1, b1, e1) in &s {
            for &(c2, a2, b2, e2) in &t {
                product.push((c1 * c2, a1 + a2, b1 + b2, e1 + e2));
            }
        }
        prop_assert_eq!(to_fun(&product), to_fun(&s).mul(&to_fun(&t)));
    }

    #[test]
    fn ring_axioms(f in sphere_fun(), g in sphere_fun(), h in sphere_fun()) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
    }

    /// The sphere ring is a domain: z-adic degrees add under products.
    #[test]
    fn degree_is_additive(f in localized(), g in localized()) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        prop_assert_eq!(
            f.mul(&g).degree_z().unwrap(),
            f.degree_z().unwrap() + g.degree_z().unwrap()
        );
    }

    #[test]
    fn coordinate_division_undoes_multiplication(f in sphere_fun()) {
        for c in Coord::ALL {
            let back = f.mul(&SphereFun::coordinate(c)).divide_by_coordinate(c);
            prop_assert_eq!(back.as_ref(), Ok(&f));
        }
    }

    #[test]
    fn partial_satisfies_leibniz(f in localized(), g in localized()) {
        for chart in [Chart::Z, Chart::X, Chart::Y] {
            let (t1, _) = chart.parameters();
            let lhs = partial(&f.mul(&g), t1, chart);
            let rhs = partial(&f, t1, chart).mul(&g).add(&f.mul(&partial(&g, t1, chart)));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn chart_partials_commute(f in localized()) {
        for chart in [Chart::Z, Chart::X, Chart::Y] {
            let (t1, t2) = chart.parameters();
            prop_assert_eq!(
                partial(&partial(&f, t1, chart), t2, chart),
                partial(&partial(&f, t2, chart), t1, chart)
            );
        }
    }

    /// Vanishing order is zero exactly at points where the element is a
    /// chart unit.
    #[test]
    fn valuation_zero_iff_nonvanishing(f in sphere_fun(), u in -2i64..=2, v in -2i64..=2) {
        prop_assume!(!f.is_zero());
        let p = SpherePoint::from_stereographic(&rat_i(u), &rat_i(v));
        prop_assume!(!num_is_zero(p.z()));
        let fl = LocalizedFun::from_sphere(f);
        let val = valuation(&fl, &p, Chart::Z, DEFAULT_VALUATION_CAP).unwrap();
        prop_assert_eq!(val == 0, !num_is_zero(&fl.eval(&p).unwrap()));
    }

    /// Printing any localized element re-parses to the same value.
    #[test]
    fn print_parse_round_trip(f in localized()) {
        let printed = f.to_string();
        let reparsed = parse_localized(&printed).unwrap();
        prop_assert_eq!(f, reparsed, "printed form: {}", printed);
    }
}

fn num_is_zero(r: &Rat) -> bool {
    use num_traits::Zero;
    r.is_zero()
}
