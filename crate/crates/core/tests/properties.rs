use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tc_core::arnold::{build_presentation, AlgebraElement, ArnoldAlgebra};
use tc_core::bounds::{assemble_report, BoundsReport};
use tc_core::export::{export_algebra, load_algebra, AlgebraDocument};
use tc_core::field::{Field, FieldSpec, Rational, Rationals};
use tc_core::tensor::{diagonal_restriction, tensor_multiply, TensorElement};
use tc_core::zero_divisors::Caps;

/// `(weight, [(index, coefficient)])` drawn against a fixed algebra.
fn element(alg: &ArnoldAlgebra, pick: (usize, Vec<(usize, i64)>)) -> AlgebraElement {
    let w = pick.0 % (alg.top_weight() + 1);
    let dim = alg.dim(w);
    let coords: Vec<(usize, BigInt)> = pick.1.iter().map(|(i, c)| (i % dim, BigInt::from(*c))).collect();
    alg.element(w, &coords)
}

fn pick() -> impl Strategy<Value = (usize, Vec<(usize, i64)>)> {
    (0usize..8, prop::collection::vec((0usize..64, -4i64..=4), 1..4))
}

fn algebra(n: u32, m: u32) -> ArnoldAlgebra {
    ArnoldAlgebra::new(build_presentation(n.into(), m.into()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative(n in 2u32..=4, m in 2u32..=5, a in pick(), b in pick(), c in pick()) {
        let alg = algebra(n, m);
        let (a, b, c) = (element(&alg, a), element(&alg, b), element(&alg, c));
        let left = alg.multiply(&alg.multiply(&a, &b).unwrap(), &c).unwrap();
        let right = alg.multiply(&a, &alg.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn diagonal_is_multiplicative(
        n in 2u32..=4, m in 2u32..=5,
        a in pick(), b in pick(), c in pick(), d in pick(),
    ) {
        let alg = algebra(n, m);
        let x = TensorElement::cross(&element(&alg, a), &element(&alg, b)).unwrap();
        let y = TensorElement::cross(&element(&alg, c), &element(&alg, d)).unwrap();
        let lhs = diagonal_restriction(&alg, &tensor_multiply(&alg, &x, &y).unwrap()).unwrap();
        let rhs = alg
            .multiply(&diagonal_restriction(&alg, &x).unwrap(), &diagonal_restriction(&alg, &y).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rational_fast_path_matches_bigrational(
        a in any::<i64>(), b in 1i64..=i64::MAX, c in any::<i64>(), d in 1i64..=i64::MAX,
    ) {
        let q = Rationals;
        let big = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        let x = q.mul(&Rational::from(a), &q.inv(&Rational::from(b)));
        let y = q.mul(&Rational::from(c), &q.inv(&Rational::from(d)));
        prop_assert_eq!(q.add(&x, &y).to_big(), big(a, b) + big(c, d));
        prop_assert_eq!(q.sub(&x, &y).to_big(), big(a, b) - big(c, d));
        prop_assert_eq!(q.mul(&x, &y).to_big(), big(a, b) * big(c, d));
        // canonical form makes equality structural
        prop_assert_eq!(q.sub(&q.add(&x, &y), &y), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn report_json_round_trips(m in 1u32..=10, n in 1u32..=4, p in prop::sample::select(vec![0u64, 2, 3, 5])) {
        let field = if p == 0 { FieldSpec::Rational } else { FieldSpec::Prime(p) };
        let caps = Caps { max_n: 3, ..Caps::default() };
        if let Ok(report) = assemble_report(m, n, field, &caps) {
            let text = serde_json::to_string(&report).unwrap();
            let back: BoundsReport = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, report);
        }
    }
}

#[test]
fn algebra_document_round_trips() {
    for (n, m) in [(1u32, 2u32), (2, 3), (3, 2), (3, 5), (4, 4)] {
        let alg = algebra(n, m);
        let doc = export_algebra(&alg);
        let text = doc.to_json();
        let parsed = AlgebraDocument::from_json(&text).unwrap();
        assert_eq!(parsed, doc);
        let mut rng = ChaCha8Rng::seed_from_u64(u64::from(n * 10 + m));
        let loaded = load_algebra(&parsed, alg.presentation(), &mut rng).unwrap();
        assert_eq!(loaded.structure_table(), alg.structure_table());
        assert_eq!(export_algebra(&loaded).to_json(), text);
    }
}

#[test]
fn closed_form_inside_every_interval() {
    let caps = Caps::default();
    for m in 2..=9 {
        for n in 1..=4 {
            let r = assemble_report(m, n, FieldSpec::Rational, &caps).unwrap();
            assert!(r.lower.unwrap() <= r.closed_form && r.closed_form <= r.upper.unwrap(), "{r:?}");
        }
    }
}
