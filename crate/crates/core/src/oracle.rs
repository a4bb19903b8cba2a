//! Brute-force enumeration of application terms, used as a test oracle
//! for generation.

use std::collections::BTreeSet;

use crate::constraints::Solver;
use crate::context::Context;
use crate::syntax::Expr;
use crate::typecheck::{Checker, Locals};
use crate::types::Type;

/// Every variable/application term of at most `max_size` nodes built from
/// `locals` and `atoms` that checks against `goal`. No lambdas, no cases.
pub fn brute_force_enumerate(ctx: &Context, locals: &[(String, Type)], atoms: &[Expr], goal: &Type, max_size: usize) -> BTreeSet<Expr> {
    let leaves: Vec<Expr> = locals
        .iter()
        .map(|(x, _)| Expr::var(x.clone()))
        .chain(atoms.iter().cloned())
        .collect();
    // by_size[n]: all trees with exactly n nodes (odd n only)
    let mut by_size: Vec<Vec<Expr>> = vec![Vec::new(); max_size + 1];
    if max_size >= 1 {
        by_size[1] = leaves;
    }
    for n in (3..=max_size).step_by(2) {
        let mut out = Vec::new();
        for fs in (1..n - 1).step_by(2) {
            let asz = n - 1 - fs;
            for f in &by_size[fs] {
                for a in &by_size[asz] {
                    out.push(Expr::app(f.clone(), a.clone()));
                }
            }
        }
        by_size[n] = out;
    }
    let env = Locals(locals.to_vec());
    by_size
        .into_iter()
        .flatten()
        .filter(|e| Checker::new(ctx).check(&env, e, goal, &Solver::new()).is_ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::Program;

    #[test]
    fn single_local() {
        let ctx = Context::new();
        let got = brute_force_enumerate(&ctx, &[("s1".into(), Type::rigid("a"))], &[], &Type::rigid("a"), 1);
        assert_eq!(got, BTreeSet::from([Expr::var("s1")]));
    }

    #[test]
    fn no_lambdas_at_arrow_goals() {
        let ctx = Context::new();
        let a = Type::rigid("a");
        assert!(brute_force_enumerate(&ctx, &[], &[], &Type::arrow(a.clone(), a), 3).is_empty());
    }

    #[test]
    fn map_context() {
        let p = Program::empty()
            .load("data Bool = True | False\nmap :: (a -> b) -> [a] -> [b]\nisEven :: Int -> Bool\n")
            .unwrap();
        let got = brute_force_enumerate(
            &p.ctx,
            &[("l".into(), Type::list(Type::con("Int")))],
            &[Expr::var("map"), Expr::var("isEven")],
            &Type::list(Type::con("Bool")),
            5,
        );
        assert_eq!(
            got,
            BTreeSet::from([Expr::app(Expr::app(Expr::var("map"), Expr::var("isEven")), Expr::var("l"))])
        );
    }
}
