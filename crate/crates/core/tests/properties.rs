use proptest::prelude::*;

use relforge_core::format::{parse_expr, parse_relation, print_expr, print_relation};
use relforge_core::ops::{add, compose_val, transform};
use relforge_core::{decompose, DecomposeOptions, Monoid, Relation, SuperpositionExpr, TransformSpec, ValueSet};

fn relation(arity: usize, order: usize) -> impl Strategy<Value = Relation> {
    let n = order.pow(arity as u32);
    prop::collection::vec(0u64..(1 << order), n).prop_map(move |bits| {
        Relation::from_cells(arity, order, bits.into_iter().map(ValueSet::from_bits).collect()).unwrap()
    })
}

fn unary(order: usize) -> impl Strategy<Value = Relation> {
    relation(1, order)
}

fn expr(arity: usize, order: usize) -> impl Strategy<Value = SuperpositionExpr> {
    let leaf = (1..=arity).prop_map(SuperpositionExpr::Var);
    leaf.prop_recursive(4, 24, 3, move |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..4).prop_map(SuperpositionExpr::Sum),
            (unary(order), inner).prop_map(|(f, e)| SuperpositionExpr::Apply(f, Box::new(e))),
        ]
    })
}

proptest! {
    #[test]
    fn relation_text_round_trips(r in (1usize..=3, 1usize..=4).prop_flat_map(|(a, o)| relation(a, o))) {
        prop_assert_eq!(parse_relation(&print_relation(&r)).unwrap(), r);
    }

    #[test]
    fn expression_text_round_trips(e in expr(3, 3)) {
        prop_assert_eq!(parse_expr(&print_expr(&e)).unwrap(), e);
    }

    #[test]
    fn addition_is_commutative_and_associative(
        a in relation(2, 3), b in relation(2, 3), c in relation(2, 3),
    ) {
        let m = Monoid::modular(3);
        prop_assert_eq!(add(&a, &b, &m).unwrap(), add(&b, &a, &m).unwrap());
        let left = add(&add(&a, &b, &m).unwrap(), &c, &m).unwrap();
        let right = add(&a, &add(&b, &c, &m).unwrap(), &m).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn decomposition_tabulates_back(r in relation(2, 4), prune in any::<bool>()) {
        let m = Monoid::modular(4);
        let d = decompose(&r, &m, DecomposeOptions { prune_zero: prune }).unwrap();
        prop_assert_eq!(d.expr.to_relation(2, &m).unwrap(), r);
    }

    #[test]
    fn nested_decomposition_tabulates_back(r in relation(3, 3)) {
        let m = Monoid::modular(3);
        let d = decompose(&r, &m, DecomposeOptions::default()).unwrap();
        prop_assert_eq!(d.expr.to_relation(3, &m).unwrap(), r);
    }

    #[test]
    fn image_is_union_of_evaluations(r in unary(5), bits in 0u64..32) {
        let s = ValueSet::from_bits(bits);
        let expected = s.iter().fold(ValueSet::EMPTY, |acc, x| acc.union(r.eval(&[x])));
        prop_assert_eq!(r.image_unary(s), expected);
    }

    #[test]
    fn converse_is_an_involution(r in relation(1, 4)) {
        prop_assert_eq!(r.converse().converse(), r);
    }

    #[test]
    fn transform_then_inverse_is_identity(r in relation(2, 3), k in 0usize..6) {
        let spec = TransformSpec::all(2)[k].clone();
        let back = transform(&transform(&r, &spec).unwrap(), &spec.inverse()).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn composing_with_identity_is_neutral(r in relation(2, 3)) {
        let id = Relation::identity(3).unwrap();
        prop_assert_eq!(compose_val(&r, &id).unwrap(), r);
    }
}
