use l2link::blocks::{self, BlockForm};
use l2link::invariants::{capacities, heights, signature_counts, torsion_signatures};
use l2link::linalg::{determinant, smith_normal_form, LaurentMatrix};
use l2link::scalars::{Cyc, Field, LaurentPoly, Rational};
use l2link::TraceSpec;
use proptest::prelude::*;

const ALL_TRACES: [TraceSpec; 5] = [
    TraceSpec::Interior,
    TraceSpec::Terminal,
    TraceSpec::Initial,
    TraceSpec::DixmierPlus,
    TraceSpec::DixmierMinus,
];

fn field(n: u32) -> Field {
    Field::new(n).unwrap()
}

fn cyc(f: &Field, c: &[(i64, i64)]) -> Cyc {
    let coeffs = c
        .iter()
        .take(f.degree())
        .map(|&(p, q)| Rational::new(p.into(), q.into()))
        .collect();
    f.from_coeffs(coeffs).unwrap()
}

fn scalar() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-6i64..=6, 1i64..=4), 4)
}

fn poly(f: &Field, low: i64, terms: &[Vec<(i64, i64)>]) -> LaurentPoly {
    LaurentPoly::from_terms(
        f,
        terms
            .iter()
            .enumerate()
            .map(|(k, c)| (low + k as i64, cyc(f, c))),
    )
}

fn poly_terms() -> impl Strategy<Value = (i64, Vec<Vec<(i64, i64)>>)> {
    (-2i64..=2, prop::collection::vec(scalar(), 0..4))
}

fn block_form() -> impl Strategy<Value = BlockForm> {
    (
        0i64..4,
        prop::collection::vec((1usize..=3, prop::bool::ANY, 1usize..=2), 1..4),
    )
        .prop_map(|(point, items)| {
            let items: Vec<_> = items
                .into_iter()
                .map(|(k, s, m)| (k, if s { 1 } else { -1 }, m))
                .collect();
            BlockForm::new(point, &items).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_multiplication_is_a_commutative_ring(
        a in scalar(), b in scalar(), c in scalar(), n in prop::sample::select(vec![4u32, 8, 12])
    ) {
        let f = field(n);
        let (a, b, c) = (cyc(&f, &a), cyc(&f, &b), cyc(&f, &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn nonzero_scalars_invert(a in scalar(), n in prop::sample::select(vec![4u32, 8, 12])) {
        let f = field(n);
        let a = cyc(&f, &a);
        prop_assume!(!a.is_zero());
        let inv = a.inv().unwrap();
        prop_assert!((&a * &inv).is_one());
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(a in scalar(), b in scalar()) {
        let f = field(8);
        let (a, b) = (cyc(&f, &a), cyc(&f, &b));
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert!((&a * &a.conj()).is_real());
    }

    #[test]
    fn division_with_remainder(x in poly_terms(), d in poly_terms()) {
        let f = field(4);
        let x = poly(&f, x.0, &x.1);
        let d = poly(&f, d.0, &d.1);
        prop_assume!(!d.is_zero());
        let (q, r) = x.div_rem(&d);
        prop_assert_eq!(&(&q * &d) + &r, x);
        prop_assert!(r.is_zero() || r.width() < d.width());
    }

    #[test]
    fn smith_form_verifies(
        entries in prop::collection::vec(poly_terms(), 4..=9),
        rows in 1usize..=3,
    ) {
        let f = field(4);
        let cols = entries.len() / rows;
        prop_assume!(cols >= 1);
        let m: Vec<Vec<LaurentPoly>> = (0..rows)
            .map(|i| (0..cols).map(|j| {
                let (low, t) = &entries[i * cols + j];
                poly(&f, *low, t)
            }).collect())
            .collect();
        let a = LaurentMatrix::from_rows(&f, m).unwrap();
        let s = smith_normal_form(&a);
        prop_assert!(s.verify(&a));
        if a.is_square() {
            let d = determinant(&a);
            let prod = s.diagonal.iter().fold(LaurentPoly::one(&f), |acc, x| &acc * x);
            prop_assert_eq!(d.is_zero(), prod.is_zero());
            if !d.is_zero() {
                prop_assert!(d.divides(&prod) && prod.divides(&d));
            }
        }
    }

    #[test]
    fn block_forms_round_trip(form in block_form(), q in 0u8..2) {
        let f = field(4);
        let l = blocks::to_linking_form(&form, &f, q).unwrap();
        prop_assert!(l.is_hermitian());
        let inv = signature_counts(&l).unwrap();
        prop_assert!(inv.is_nondegenerate());
        prop_assert_eq!(inv.counts, form.counts());
    }

    #[test]
    fn capacities_agree_with_the_block_model(form in block_form()) {
        let h = heights(&form.counts());
        for t in TraceSpec::NORMAL {
            prop_assert_eq!(capacities(&h, t).unwrap(), blocks::capacity(&form, t).unwrap());
        }
    }

    #[test]
    fn torsion_signatures_agree_and_add(a in block_form(), b in block_form()) {
        let b = BlockForm::new(a.point(), &b.triples()).unwrap();
        let sum = blocks::perp_sum(&a, &b).unwrap();
        for t in TraceSpec::DIXMIER {
            let ta = blocks::tsig(&a, t).unwrap();
            prop_assert_eq!(torsion_signatures(&a.counts()).under(t).unwrap(), ta);
            prop_assert_eq!(blocks::tsig(&sum, t).unwrap(), ta + blocks::tsig(&b, t).unwrap());
        }
    }

    #[test]
    fn hyperbolic_forms_have_balanced_invariants(form in block_form()) {
        let doubled = blocks::perp_sum(&form, &form.mirror()).unwrap();
        prop_assert!(blocks::hyperbolic_test(&doubled));
        for t in TraceSpec::DIXMIER {
            prop_assert_eq!(blocks::tsig(&doubled, t).unwrap(), 0);
        }
        for t in ALL_TRACES {
            if let Ok((plus, minus)) = blocks::capacity(&doubled, t) {
                prop_assert_eq!(plus, minus);
            }
        }
    }

    #[test]
    fn canonical_metabolizer_is_a_metabolizer(form in block_form()) {
        let sub = blocks::metabolizer(&form);
        for t in TraceSpec::DIXMIER {
            let e = blocks::excess(&form, &sub, t).unwrap();
            prop_assert!(e.is_metabolizer);
            prop_assert!(e.bounds_hold());
        }
    }
}
