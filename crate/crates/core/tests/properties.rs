use std::collections::HashMap;

use proptest::prelude::*;

use rbq_core::algebra::{parse_element, SsqElement};
use rbq_core::catalog::{sample_assignment, Catalog};
use rbq_core::exactmath::{parse_poly, ratio, Monomial, MultiPoly, RatFunc, Rational, Ring, Var};
use rbq_core::operator::{cached_system, theorem31_residuals, OperatorMatrix, StructureMatrices, WeightMode};
use rbq_core::sampling;

const VARS: [&str; 5] = ["a11", "a23", "a", "b", "lambda"];

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

fn monomial() -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0u32..=2, VARS.len()).prop_map(|exps| {
        Monomial::from_factors(
            VARS.iter()
                .zip(exps)
                .filter(|(_, e)| *e > 0)
                .map(|(v, e)| (Var::new(v), e)),
        )
    })
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec((monomial(), rational()), 0..6).prop_map(MultiPoly::from_terms)
}

/// Products of factors that vanish only on a thin set.
const DENOMINATORS: [&str; 5] = ["a", "b", "b+lambda", "lambda-b", "a-2*a23"];

fn denominator() -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec(0usize..DENOMINATORS.len(), 0..3).prop_map(|idx| {
        idx.iter()
            .fold(MultiPoly::one(), |acc, &i| acc.mul(&parse_poly(DENOMINATORS[i]).unwrap()))
    })
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(), denominator()).prop_map(|(n, d)| RatFunc::from_poly(n).div(&RatFunc::from_poly(d)).unwrap())
}

fn assignment() -> impl Strategy<Value = HashMap<Var, Rational>> {
    proptest::collection::vec(rational(), VARS.len())
        .prop_map(|vals| VARS.iter().map(|v| Var::new(v)).zip(vals).collect())
}

fn element() -> impl Strategy<Value = SsqElement<Rational>> {
    proptest::array::uniform4(rational()).prop_map(SsqElement::new)
}

fn matrix() -> impl Strategy<Value = OperatorMatrix<Rational>> {
    (proptest::array::uniform4(proptest::array::uniform4(rational())), rational())
        .prop_map(|(e, l)| OperatorMatrix::new(e, l))
}

/// A catalog instance, optionally with one entry perturbed, so that both
/// Rota-Baxter and non-Rota-Baxter matrices occur often.
fn mixed_matrix() -> impl Strategy<Value = OperatorMatrix<Rational>> {
    (any::<u64>(), 0usize..3, 0usize..16, rational()).prop_map(|(seed, mode, pos, delta)| {
        let mut rng = sampling::rng(seed);
        let fams = Catalog::shipped().families();
        let f = &fams[(seed % fams.len() as u64) as usize];
        let lambda = match f.weight {
            WeightMode::Zero => Rational::zero(),
            WeightMode::SymbolicLambda => sampling::nonzero_rational(&mut rng, 5),
        };
        let a = sample_assignment(f, &mut rng, &lambda).unwrap();
        let mut p = f.instantiate(&a, &lambda).unwrap();
        if mode == 1 {
            let v = p.entry(pos / 4, pos % 4) + delta;
            p.set_entry(pos / 4, pos % 4, v);
        }
        p
    })
}

fn catalog_instance() -> impl Strategy<Value = (OperatorMatrix<Rational>, WeightMode)> {
    any::<u64>().prop_map(|seed| {
        let mut rng = sampling::rng(seed);
        let fams = Catalog::shipped().families();
        let f = &fams[(seed % fams.len() as u64) as usize];
        let lambda = match f.weight {
            WeightMode::Zero => Rational::zero(),
            WeightMode::SymbolicLambda => sampling::nonzero_rational(&mut rng, 5),
        };
        let a = sample_assignment(f, &mut rng, &lambda).unwrap();
        (f.instantiate(&a, &lambda).unwrap(), f.weight)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn canonical_form_is_idempotent(p in poly()) {
        let again = MultiPoly::from_terms(p.terms().map(|(m, c)| (m.clone(), c.clone())));
        prop_assert_eq!(&again, &p);
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p.clone());
        let (_, prim) = p.primitive_part();
        prop_assert_eq!(prim.primitive_part().1, prim);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn polynomial_ring_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(p.add(&q).add(&r), p.add(&q.add(&r)));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.add(&q), q.add(&p));
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert_eq!(p.sub(&p), MultiPoly::zero());
    }

    #[test]
    fn eval_is_a_homomorphism(p in poly(), q in poly(), at in assignment()) {
        let ev = |x: &MultiPoly| x.eval(&at).unwrap();
        prop_assert_eq!(ev(&p.mul(&q)), ev(&p) * ev(&q));
        prop_assert_eq!(ev(&p.add(&q)), ev(&p) + ev(&q));
    }

    #[test]
    fn bilinearity(x in element(), y in element(), z in element(), s in rational()) {
        prop_assert_eq!(x.add_scale(&y, &s).multiply(&z), x.multiply(&z).add_scale(&y.multiply(&z), &s));
        prop_assert_eq!(z.multiply(&x.add_scale(&y, &s)), z.multiply(&x).add_scale(&z.multiply(&y), &s));
    }

    #[test]
    fn expansion_agrees_with_closed_form(x in element(), y in element()) {
        prop_assert_eq!(x.multiply(&y), x.multiply_closed_form(&y));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rational_function_field_laws(p in ratfunc(), q in ratfunc(), r in ratfunc()) {
        prop_assert_eq!(p.add(&q).add(&r), p.add(&q.add(&r)));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert_eq!(p.sub(&p), RatFunc::zero());
    }

    #[test]
    fn clearing_denominators_is_sound(n in poly(), d in denominator(), at in assignment()) {
        let r = RatFunc::from_poly(n.clone()).div(&RatFunc::from_poly(d.clone())).unwrap();
        let dv = d.eval(&at).unwrap();
        prop_assume!(!dv.is_zero());
        let (num, factors) = r.clear();
        let mut den = Rational::from_integer(1.into());
        for (f, e) in r.denominator_factors() {
            prop_assert!(factors.contains(f));
            for _ in 0..*e {
                den *= f.eval(&at).unwrap();
            }
        }
        prop_assume!(!den.is_zero());
        prop_assert_eq!(num.eval(&at).unwrap() / den, n.eval(&at).unwrap() / dv);
    }

    #[test]
    fn element_print_parse_round_trip(x in element()) {
        let back = parse_element(&x.to_string()).unwrap().to_rational().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn symbolic_element_round_trip(c in proptest::array::uniform4(ratfunc())) {
        let x = SsqElement::new(c);
        prop_assert_eq!(parse_element(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn unit_law_and_nilpotent_ideal(x in element(), u in rational(), v in rational(), s in rational(), t in rational()) {
        let one = SsqElement::unit();
        prop_assert_eq!(one.multiply(&x), x.clone());
        prop_assert_eq!(x.multiply(&one), x);
        let n1 = SsqElement::new([Rational::zero(), Rational::zero(), u, v]);
        let n2 = SsqElement::new([Rational::zero(), Rational::zero(), s, t]);
        prop_assert!(n1.multiply(&n2).is_zero());
    }

    #[test]
    fn associativity(x in element(), y in element(), z in element()) {
        prop_assert_eq!(x.multiply(&y).multiply(&z), x.multiply(&y.multiply(&z)));
    }

    #[test]
    fn image_products_through_c(p in matrix()) {
        let s = StructureMatrices::get();
        for i in 0..4 {
            for j in 0..4 {
                prop_assert_eq!(s.image_product(&p, i, j), p.column(i).multiply(&p.column(j)));
            }
        }
    }
}

fn all_three(p: &OperatorMatrix<Rational>) -> (bool, bool, bool) {
    let defect = p.is_rota_baxter().holds();
    let residual = theorem31_residuals(p).iter().flatten().flatten().all(|x| x.is_zero());
    let system = cached_system(WeightMode::SymbolicLambda).vanishes_at(p);
    (defect, residual, system)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn characterizations_agree_on_random_matrices(p in matrix()) {
        let (a, b, c) = all_three(&p);
        prop_assert_eq!(a, b);
        prop_assert_eq!(a, c);
    }

    #[test]
    fn characterizations_agree_near_catalog(p in mixed_matrix()) {
        let (a, b, c) = all_three(&p);
        prop_assert_eq!(a, b);
        prop_assert_eq!(a, c);
        if p.weight().is_zero() {
            prop_assert_eq!(a, cached_system(WeightMode::Zero).vanishes_at(&p));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn basis_pairs_suffice((p, _) in catalog_instance(), xs in proptest::collection::vec((element(), element()), 100)) {
        prop_assert!(p.is_rota_baxter().holds());
        for (x, y) in &xs {
            prop_assert!(p.rb_defect(x, y).is_zero());
        }
    }

    #[test]
    fn weight_zero_homogeneity((p, w) in catalog_instance()) {
        if w == WeightMode::Zero {
            prop_assert!(p.scale(&Rational::from_integer(2.into())).is_rota_baxter().holds());
        }
    }

    #[test]
    fn companion_is_rota_baxter((p, _) in catalog_instance()) {
        prop_assert!(p.companion().is_rota_baxter().holds());
    }
}
