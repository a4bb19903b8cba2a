//! Constraint-threaded term generation (gen-var, gen-app).

use crate::constraints::{instantiate, Solver};
use crate::syntax::Expr;
use crate::types::{FreshSupply, Type};

use super::{Scope, Synth};

/// Constraints and fresh-variable supply threaded through generation.
#[derive(Debug, Clone)]
pub struct GenState {
    pub solver: Solver,
    pub supply: FreshSupply,
}

impl GenState {
    pub fn new(solver: Solver, supply: FreshSupply) -> GenState {
        GenState { solver, supply }
    }
}

impl Synth<'_> {
    /// Every application term of depth at most `depth` whose type can be
    /// made equal to `goal`, with the state it was generated under.
    pub fn generate(&self, scope: &Scope, goal: &Type, depth: usize, st: &GenState) -> Vec<(Expr, GenState)> {
        let goal = st.solver.resolve(goal);
        let mut out = Vec::new();
        for (x, t) in &scope.locals {
            self.count_head();
            if let Ok(solver) = st.solver.want(&goal, t) {
                self.trace(|| format!("gen-var {x} : {}", crate::pretty::show_type(&goal)));
                out.push((Expr::var(x.clone()), GenState::new(solver, st.supply.clone())));
            }
        }
        for c in &self.components {
            self.count_head();
            let mut supply = st.supply.clone();
            let (ty, bundled, _) = instantiate(&c.scheme, &mut supply);
            let Ok(solver) = st.solver.want_all(&bundled) else { continue };
            if let Ok(solver) = solver.want(&goal, &ty) {
                self.trace(|| {
                    format!(
                        "gen-var {} : {}",
                        crate::pretty::show_expr_inline(&c.expr),
                        crate::pretty::show_type(&goal)
                    )
                });
                out.push((c.expr.clone(), GenState::new(solver, supply)));
            }
        }
        if depth > 0 {
            let mut supply = st.supply.clone();
            let alpha = supply.fresh_type();
            let fn_goal = Type::arrow(alpha.clone(), goal.clone());
            let head_state = GenState::new(st.solver.clone(), supply);
            for (f, fs) in self.generate(scope, &fn_goal, depth - 1, &head_state) {
                let arg_goal = fs.solver.resolve(&alpha);
                for (a, s) in self.generate(scope, &arg_goal, depth - 1, &fs) {
                    self.trace(|| {
                        format!(
                            "gen-app {} : {}",
                            crate::pretty::show_expr_inline(&Expr::app(f.clone(), a.clone())),
                            crate::pretty::show_type(&goal)
                        )
                    });
                    out.push((Expr::app(f.clone(), a), s));
                }
            }
        }
        out
    }
}
