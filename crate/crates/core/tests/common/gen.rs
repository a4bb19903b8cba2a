//! Deterministic random inputs for the property and acceptance suites.

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use holeforge::types::{ConstraintSet, Subst, TyVar, Type};

pub struct Sampler(TestRunner);

impl Sampler {
    pub fn new(seed: u8) -> Sampler {
        let rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]);
        Sampler(TestRunner::new_with_rng(Config::default(), rng))
    }

    pub fn draw<S: Strategy>(&mut self, s: S) -> S::Value {
        s.new_tree(&mut self.0).expect("strategy").current()
    }
}

pub fn int() -> Type {
    Type::con("Int")
}

pub fn boolean() -> Type {
    Type::con("Bool")
}

pub fn maybe(t: Type) -> Type {
    Type::data("Maybe", vec![t])
}

/// Types over Int, Bool, Maybe, lists and arrows whose unification
/// variables come from `vars`.
pub fn arb_type(vars: std::ops::Range<u32>) -> BoxedStrategy<Type> {
    let leaf = if vars.is_empty() {
        prop_oneof![Just(int()), Just(boolean())].boxed()
    } else {
        prop_oneof![
            Just(int()),
            Just(boolean()),
            vars.clone().prop_map(Type::uvar),
            vars.prop_map(Type::uvar)
        ]
        .boxed()
    };
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Type::list),
            inner.clone().prop_map(maybe),
            (inner.clone(), inner).prop_map(|(a, b)| Type::arrow(a, b)),
        ]
    })
    .boxed()
}

/// A substitution binding some of `0..n`, each to a type over strictly
/// larger variables, closed so that it is idempotent.
pub fn arb_solution(n: u32) -> BoxedStrategy<Subst> {
    let per_var: Vec<BoxedStrategy<Option<Type>>> = (0..n)
        .map(|i| proptest::option::weighted(0.7, arb_type(i + 1..n)).boxed())
        .collect();
    per_var
        .prop_map(move |binds| {
            let mut s = Subst::new();
            for (i, t) in binds.into_iter().enumerate().rev() {
                if let Some(t) = t {
                    let t = t.apply(&s);
                    s.bind(TyVar::Uvar(holeforge::types::Uvar(i as u32)), t);
                }
            }
            s
        })
        .boxed()
}

fn restrict(s: &Subst, keep: &[bool]) -> Subst {
    s.iter()
        .filter(|(v, _)| match v {
            TyVar::Uvar(u) => keep.get(u.0 as usize).copied().unwrap_or(false),
            _ => false,
        })
        .map(|(v, t)| (v.clone(), t.clone()))
        .collect()
}

/// Constraint sets solved by a planted substitution: each equality relates
/// two partial instances of one type.
pub fn arb_solvable(n: u32) -> BoxedStrategy<(ConstraintSet, Subst)> {
    arb_solution(n)
        .prop_flat_map(move |theta| {
            let eqs = proptest::collection::vec(
                (
                    arb_type(0..n),
                    proptest::collection::vec(any::<bool>(), n as usize),
                    proptest::collection::vec(any::<bool>(), n as usize),
                ),
                1..6,
            );
            (Just(theta), eqs)
        })
        .prop_map(|(theta, eqs)| {
            let mut c = ConstraintSet::new();
            for (t, k1, k2) in eqs {
                c.insert(t.apply(&restrict(&theta, &k1)), t.apply(&restrict(&theta, &k2)));
            }
            (c, theta)
        })
        .boxed()
}
