//! Bidirectional type checking over the constraint solver. Besides
//! accepting or rejecting terms it reports, for every hole, the type and
//! local environment the hole must be filled in.

use thiserror::Error;

use crate::constraints::{instantiate, Solver, UnifyError};
use crate::context::Context;
use crate::pretty::{show_expr_inline, show_type};
use crate::syntax::{Expr, HoleId, MatchBranch};
use crate::types::{ConstraintSet, FreshSupply, Scheme, Type};
use crate::value::Example;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeErrorKind {
    Mismatch,
    Unbound,
    NonExhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub message: String,
}

impl TypeError {
    fn mismatch(message: impl Into<String>) -> TypeError {
        TypeError {
            kind: TypeErrorKind::Mismatch,
            message: message.into(),
        }
    }

    fn unbound(message: impl Into<String>) -> TypeError {
        TypeError {
            kind: TypeErrorKind::Unbound,
            message: message.into(),
        }
    }
}

/// Monomorphic local variables, innermost last.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Locals(pub Vec<(String, Type)>);

impl Locals {
    pub fn lookup(&self, x: &str) -> Option<&Type> {
        self.0.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    pub fn extend(&self, x: &str, t: Type) -> Locals {
        let mut out = self.clone();
        out.0.push((x.to_string(), t));
        out
    }

    /// Visible names, innermost binding of each name only, outermost first.
    pub fn visible(&self) -> Vec<(String, Type)> {
        let mut out: Vec<(String, Type)> = Vec::new();
        for (x, t) in self.0.iter().rev() {
            if !out.iter().any(|(y, _)| y == x) {
                out.push((x.clone(), t.clone()));
            }
        }
        out.reverse();
        out
    }
}

/// Everything known at a hole.
#[derive(Debug, Clone)]
pub struct HoleSite {
    pub id: HoleId,
    pub ty: Type,
    pub locals: Locals,
    /// Givens at the hole (GADT matches) and wanteds solved so far.
    pub solver: Solver,
    /// `(binder, scrutinee)` for every pattern binder that destructures a
    /// variable on the path to the hole.
    pub subterms: Vec<(String, String)>,
    /// Variables already scrutinized on the path.
    pub scrutinized: Vec<String>,
}

pub struct Checker<'a> {
    pub ctx: &'a Context,
    pub supply: FreshSupply,
    pub holes: Vec<HoleSite>,
    subterms: Vec<(String, String)>,
    scrutinized: Vec<String>,
}

fn clash(e: &Expr, err: UnifyError, solver: &Solver) -> TypeError {
    let eq = err.equality();
    TypeError::mismatch(format!(
        "cannot match `{}` with `{}` in `{}`",
        show_type(&solver.resolve(&eq.lhs)),
        show_type(&solver.resolve(&eq.rhs)),
        show_expr_inline(e)
    ))
}

impl<'a> Checker<'a> {
    pub fn new(ctx: &'a Context) -> Checker<'a> {
        Checker::with_supply(ctx, FreshSupply::new())
    }

    pub fn with_supply(ctx: &'a Context, supply: FreshSupply) -> Checker<'a> {
        Checker {
            ctx,
            supply,
            holes: Vec::new(),
            subterms: Vec::new(),
            scrutinized: Vec::new(),
        }
    }

    fn want(&self, e: &Expr, s: &Solver, a: &Type, b: &Type) -> Result<Solver, TypeError> {
        s.want(a, b).map_err(|err| clash(e, err, s))
    }

    /// Type of a global name, instantiated; bundled constraints are wanted.
    fn global(&mut self, e: &Expr, s: &Solver) -> Result<(Type, Solver), TypeError> {
        let (scheme, what) = match e {
            Expr::Var(x) => match self.ctx.vars.get(x) {
                Some(sc) => (sc.clone(), x),
                None => return Err(TypeError::unbound(format!("variable `{x}` is not in scope"))),
            },
            Expr::Ctor(k) => match self.ctx.ctor(k) {
                Some(sig) => (sig.scheme(), k),
                None => return Err(TypeError::unbound(format!("constructor `{k}` is not declared"))),
            },
            _ => unreachable!(),
        };
        let (ty, bundled, _) = instantiate(&scheme, &mut self.supply);
        let s = s
            .want_all(&bundled)
            .map_err(|_| TypeError::mismatch(format!("constraints of `{what}` cannot hold here")))?;
        Ok((ty, s))
    }

    pub fn infer(&mut self, env: &Locals, e: &Expr, s: &Solver) -> Result<(Type, Solver), TypeError> {
        match e {
            Expr::Var(x) => match env.lookup(x) {
                Some(t) => Ok((t.clone(), s.clone())),
                None => self.global(e, s),
            },
            Expr::Ctor(_) => self.global(e, s),
            Expr::Const(c) => match self.ctx.poly_const(c) {
                Some(a) => Ok((Type::rigid(a), s.clone())),
                None => Err(TypeError::unbound(format!("constant `{c}` is not declared"))),
            },
            Expr::App(f, a) => {
                let (tf, s) = self.infer(env, f, s)?;
                let (dom, cod, s) = match s.resolve(&tf) {
                    Type::Arrow(d, c) => (*d, *c, s),
                    other => {
                        let d = self.supply.fresh_type();
                        let c = self.supply.fresh_type();
                        let s = s.want(&other, &Type::arrow(d.clone(), c.clone())).map_err(|_| {
                            TypeError::mismatch(format!(
                                "`{}` of type `{}` is applied to an argument",
                                show_expr_inline(f),
                                show_type(&s.resolve(&other))
                            ))
                        })?;
                        (d, c, s)
                    }
                };
                let s = self.check(env, a, &dom, &s)?;
                Ok((cod, s))
            }
            _ => {
                let t = self.supply.fresh_type();
                let s = self.check(env, e, &t, s)?;
                Ok((t, s))
            }
        }
    }

    pub fn check(&mut self, env: &Locals, e: &Expr, expected: &Type, s: &Solver) -> Result<Solver, TypeError> {
        match e {
            Expr::Hole(id) => {
                self.holes.push(HoleSite {
                    id: *id,
                    ty: expected.clone(),
                    locals: env.clone(),
                    solver: s.clone(),
                    subterms: self.subterms.clone(),
                    scrutinized: self.scrutinized.clone(),
                });
                Ok(s.clone())
            }
            Expr::Lam(x, body) => {
                let (dom, cod, s) = match s.resolve(expected) {
                    Type::Arrow(d, c) => (*d, *c, s.clone()),
                    Type::Uvar(_) => {
                        let d = self.supply.fresh_type();
                        let c = self.supply.fresh_type();
                        let s = self.want(e, s, expected, &Type::arrow(d.clone(), c.clone()))?;
                        (d, c, s)
                    }
                    other => {
                        return Err(TypeError::mismatch(format!(
                            "lambda `{}` cannot have type `{}`",
                            show_expr_inline(e),
                            show_type(&other)
                        )))
                    }
                };
                self.check(&env.extend(x, dom), body, &cod, &s)
            }
            Expr::Case(scrut, branches) => self.check_case(env, e, scrut, branches, expected, s),
            _ => {
                let (t, s) = self.infer(env, e, s)?;
                self.want(e, &s, &t, expected)
            }
        }
    }

    fn check_case(
        &mut self,
        env: &Locals,
        e: &Expr,
        scrut: &Expr,
        branches: &[MatchBranch],
        expected: &Type,
        s: &Solver,
    ) -> Result<Solver, TypeError> {
        let (ts, mut s) = self.infer(env, scrut, s)?;
        let (head, args) = match s.resolve(&ts) {
            Type::Data(h, args) => (h, args),
            Type::Uvar(_) => {
                let first = branches
                    .first()
                    .and_then(|b| self.ctx.ctor(&b.ctor))
                    .ok_or_else(|| TypeError::mismatch(format!("cannot type the scrutinee of `{}`", show_expr_inline(e))))?;
                let decl = &self.ctx.datatypes[&first.result_head];
                let args: Vec<Type> = (0..decl.arity).map(|_| self.supply.fresh_type()).collect();
                let t = Type::data(decl.name.clone(), args.clone());
                s = self.want(e, &s, &ts, &t)?;
                (decl.name.clone(), args)
            }
            other => {
                return Err(TypeError::mismatch(format!(
                    "cannot match on `{}` of type `{}`",
                    show_expr_inline(scrut),
                    show_type(&other)
                )))
            }
        };
        let decl = self
            .ctx
            .datatype(&head)
            .ok_or_else(|| TypeError::unbound(format!("unknown datatype `{head}`")))?;
        if decl.opaque {
            return Err(TypeError::mismatch(format!("values of `{head}` cannot be matched")));
        }
        for (i, b) in branches.iter().enumerate() {
            if !decl.ctors.contains(&b.ctor) {
                return Err(TypeError::mismatch(format!("constructor `{}` does not belong to `{head}`", b.ctor)));
            }
            if branches[..i].iter().any(|c| c.ctor == b.ctor) {
                return Err(TypeError::mismatch(format!("constructor `{}` is matched twice", b.ctor)));
            }
        }
        if let Some(missing) = decl.ctors.iter().find(|k| !branches.iter().any(|b| &b.ctor == *k)) {
            return Err(TypeError {
                kind: TypeErrorKind::NonExhaustive,
                message: format!("case on `{}` does not handle `{missing}`", show_expr_inline(scrut)),
            });
        }
        let scrut_var = match scrut {
            Expr::Var(x) if env.lookup(x).is_some() => Some(x.clone()),
            _ => None,
        };
        for b in branches {
            let sig = self.ctx.ctor(&b.ctor).expect("checked above").clone();
            if sig.arity() != b.binders.len() {
                return Err(TypeError::mismatch(format!(
                    "constructor `{}` takes {} argument(s), pattern binds {}",
                    b.ctor,
                    sig.arity(),
                    b.binders.len()
                )));
            }
            let theta: crate::types::Subst = sig
                .quantified
                .iter()
                .cloned()
                .zip(args.iter().cloned())
                .map(|(q, t)| (crate::types::TyVar::Rigid(q), t))
                .collect();
            let local_givens = sig.bundled.apply(&theta);
            let mut benv = env.clone();
            for (x, t) in b.binders.iter().zip(&sig.arg_types) {
                benv = benv.extend(x, t.apply(&theta));
            }
            let saved = (self.subterms.len(), self.scrutinized.len());
            if let Some(v) = &scrut_var {
                self.scrutinized.push(v.clone());
                for x in &b.binders {
                    self.subterms.push((x.clone(), v.clone()));
                }
            }
            let result = match s.assume(&local_givens.apply(s.subst())) {
                // Unreachable branch: only scoping is checked.
                Err(_) => self.check_scope(&benv, &b.body),
                Ok(bs) => self.check(&benv, &b.body, expected, &bs).map(|after| {
                    // Learned facts that hold without the local givens flow out.
                    for eq in after.wanted().iter() {
                        if !bs.wanted().contains(eq) {
                            if let Ok(next) = s.want(&eq.lhs, &eq.rhs) {
                                s = next;
                            }
                        }
                    }
                }),
            };
            self.subterms.truncate(saved.0);
            self.scrutinized.truncate(saved.1);
            result?;
        }
        Ok(s)
    }

    fn check_scope(&mut self, env: &Locals, e: &Expr) -> Result<(), TypeError> {
        let bound: Vec<String> = env.0.iter().map(|(x, _)| x.clone()).collect();
        for x in e.free_vars() {
            if !bound.contains(&x) && !self.ctx.vars.contains_key(&x) {
                return Err(TypeError::unbound(format!("variable `{x}` is not in scope")));
            }
        }
        let mut bad = None;
        e.walk(&mut |sub| match sub {
            Expr::Ctor(k) if self.ctx.ctor(k).is_none() => bad = Some(format!("constructor `{k}` is not declared")),
            Expr::Hole(id) => self.holes.push(HoleSite {
                id: *id,
                ty: Type::con("Unreachable"),
                locals: env.clone(),
                solver: Solver::new(),
                subterms: self.subterms.clone(),
                scrutinized: self.scrutinized.clone(),
            }),
            _ => {}
        });
        match bad {
            Some(m) => Err(TypeError::unbound(m)),
            None => Ok(()),
        }
    }

    /// `Γ ⊢ χ : τ`
    pub fn check_example(&mut self, x: &Example, expected: &Type, s: &Solver) -> Result<Solver, TypeError> {
        match x {
            Example::Io(input, out) => {
                let (dom, cod, s) = match s.resolve(expected) {
                    Type::Arrow(d, c) => (*d, *c, s.clone()),
                    Type::Uvar(_) => {
                        let d = self.supply.fresh_type();
                        let c = self.supply.fresh_type();
                        let s = self.want(&input.0, s, expected, &Type::arrow(d.clone(), c.clone()))?;
                        (d, c, s)
                    }
                    other => {
                        return Err(TypeError::mismatch(format!(
                            "example expects a function, but the type is `{}`",
                            show_type(&other)
                        )))
                    }
                };
                let s = self.check(&Locals::default(), &input.0, &dom, &s)?;
                self.check_example(out, &cod, &s)
            }
            other => {
                let v = other.to_value().and_then(|v| v.to_expr()).expect("first-order example");
                self.check(&Locals::default(), &v, expected, s)
            }
        }
    }
}

/// Checks a closed term against a closed type under `givens`.
pub fn check_expr(ctx: &Context, e: &Expr, ty: &Type, givens: &ConstraintSet) -> Result<(), TypeError> {
    let s = Solver::with_givens(givens).map_err(|_| TypeError::mismatch("inconsistent assumptions"))?;
    Checker::new(ctx).check(&Locals::default(), e, ty, &s).map(|_| ())
}

/// Infers the type of a closed term; remaining unification variables are
/// left in the result.
pub fn infer_expr(ctx: &Context, e: &Expr) -> Result<Type, TypeError> {
    let mut c = Checker::new(ctx);
    let (t, s) = c.infer(&Locals::default(), e, &Solver::new())?;
    Ok(s.resolve(&t))
}

/// Checks a (possibly holed) binding against its signature and returns the
/// hole sites. The binding's own name must already be in `ctx`.
pub fn check_binding(ctx: &Context, scheme: &Scheme, body: &Expr) -> Result<Vec<HoleSite>, TypeError> {
    let s = Solver::with_givens(&scheme.constraints).map_err(|_| TypeError::mismatch("the signature's constraints are inconsistent"))?;
    let mut c = Checker::new(ctx);
    let fin = c.check(&Locals::default(), body, &scheme.body, &s)?;
    let mut holes = c.holes;
    for h in &mut holes {
        h.ty = h.solver.resolve(&fin.resolve(&h.ty));
        let mut merged = h.solver.clone();
        for eq in fin.wanted().iter() {
            if let Ok(next) = merged.want(&eq.lhs, &eq.rhs) {
                merged = next;
            }
        }
        h.ty = merged.resolve(&h.ty);
        h.locals = Locals(h.locals.0.iter().map(|(x, t)| (x.clone(), merged.resolve(t))).collect());
        h.solver = merged;
    }
    holes.sort_by_key(|h| h.id);
    Ok(holes)
}

/// Infers a binding without signature; the result is generalized over its
/// remaining unification variables, which become rigid `t0, t1, ..`.
pub fn infer_binding(ctx: &Context, name: &str, body: &Expr) -> Result<Scheme, TypeError> {
    let mut c = Checker::new(ctx);
    let self_ty = c.supply.fresh_type();
    let env = Locals::default().extend(name, self_ty.clone());
    let s = c.check(&env, body, &self_ty, &Solver::new())?;
    if !c.holes.is_empty() {
        return Err(TypeError::mismatch(format!("`{name}` has holes but no type signature")));
    }
    let t = s.resolve(&self_ty);
    let mut uvars = std::collections::BTreeSet::new();
    t.collect_uvars(&mut uvars);
    let taken = t.rigids();
    let mut names = (0..).map(|i| format!("t{i}")).filter(|n| !taken.contains(n));
    let sub: crate::types::Subst = uvars
        .into_iter()
        .map(|u| (crate::types::TyVar::Uvar(u), Type::rigid(names.next().unwrap())))
        .collect();
    Ok(Scheme::closed(t.apply(&sub)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::CtorSig;
    use crate::types::Equality;

    fn ctx() -> Context {
        let mut c = Context::new();
        let a = || Type::rigid("a");
        let k = |n: &str, args: Vec<Type>, head: &str, q: &[&str]| CtorSig {
            name: n.into(),
            quantified: q.iter().map(|s| s.to_string()).collect(),
            bundled: ConstraintSet::new(),
            arg_types: args,
            result_head: head.into(),
        };
        c.add_datatype("Int", &[], vec![], true).unwrap();
        c.add_datatype(
            "Bool",
            &[],
            vec![k("True", vec![], "Bool", &[]), k("False", vec![], "Bool", &[])],
            false,
        )
        .unwrap();
        c.add_datatype(
            "Maybe",
            &["a".into()],
            vec![k("Nothing", vec![], "Maybe", &["a"]), k("Just", vec![a()], "Maybe", &["a"])],
            false,
        )
        .unwrap();
        let exp = |t: Type| Type::data("Exp", vec![t]);
        let mut plus = k("Plus", vec![exp(Type::con("Int")), exp(Type::con("Int"))], "Exp", &["a"]);
        plus.bundled.insert(a(), Type::con("Int"));
        c.add_datatype("Exp", &["a".into()], vec![k("Lit", vec![a()], "Exp", &["a"]), plus], false)
            .unwrap();
        c.ensure_literal("0").unwrap();
        c
    }

    fn from_maybe_body() -> Expr {
        Expr::lams(
            ["s".to_string(), "m".to_string()],
            Expr::case(
                Expr::var("m"),
                vec![
                    MatchBranch {
                        ctor: "Nothing".into(),
                        binders: vec![],
                        body: Expr::var("s"),
                    },
                    MatchBranch {
                        ctor: "Just".into(),
                        binders: vec!["x".into()],
                        body: Expr::var("x"),
                    },
                ],
            ),
        )
    }

    fn from_maybe_ty() -> Scheme {
        Scheme::closed(Type::arrows(
            [Type::rigid("a"), Type::data("Maybe", vec![Type::rigid("a")])],
            Type::rigid("a"),
        ))
    }

    #[test]
    fn accepts_from_maybe() {
        let c = ctx();
        assert!(check_binding(&c, &from_maybe_ty(), &from_maybe_body()).unwrap().is_empty());
    }

    #[test]
    fn rigid_goal_rejects_specialization() {
        let c = ctx();
        let bad = Expr::lams(["s".to_string(), "m".to_string()], Expr::ctor("0"));
        let err = check_binding(&c, &from_maybe_ty(), &bad).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::Mismatch);
    }

    #[test]
    fn non_exhaustive_case_is_rejected() {
        let c = ctx();
        let body = Expr::lams(
            ["s".to_string(), "m".to_string()],
            Expr::case(
                Expr::var("m"),
                vec![MatchBranch {
                    ctor: "Nothing".into(),
                    binders: vec![],
                    body: Expr::var("s"),
                }],
            ),
        );
        let err = check_binding(&c, &from_maybe_ty(), &body).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::NonExhaustive);
    }

    #[test]
    fn holes_report_types_and_scope() {
        let c = ctx();
        let body = Expr::lams(
            ["s".to_string(), "m".to_string()],
            Expr::case(
                Expr::var("m"),
                vec![
                    MatchBranch {
                        ctor: "Nothing".into(),
                        binders: vec![],
                        body: Expr::Hole(0),
                    },
                    MatchBranch {
                        ctor: "Just".into(),
                        binders: vec!["x".into()],
                        body: Expr::Hole(1),
                    },
                ],
            ),
        );
        let holes = check_binding(&c, &from_maybe_ty(), &body).unwrap();
        assert_eq!(holes.len(), 2);
        assert_eq!(holes[1].ty, Type::rigid("a"));
        assert_eq!(holes[1].locals.lookup("x"), Some(&Type::rigid("a")));
        assert_eq!(holes[1].subterms, vec![("x".to_string(), "m".to_string())]);
        assert_eq!(holes[1].scrutinized, vec!["m".to_string()]);
    }

    #[test]
    fn gadt_match_refines_result_type() {
        // eval :: Exp a -> a; eval e = case e of Lit x -> x; Plus l r -> 0
        let c = ctx();
        let sc = Scheme::closed(Type::arrow(Type::data("Exp", vec![Type::rigid("a")]), Type::rigid("a")));
        let body = Expr::lam(
            "e",
            Expr::case(
                Expr::var("e"),
                vec![
                    MatchBranch {
                        ctor: "Lit".into(),
                        binders: vec!["x".into()],
                        body: Expr::var("x"),
                    },
                    MatchBranch {
                        ctor: "Plus".into(),
                        binders: vec!["l".into(), "r".into()],
                        body: Expr::Hole(0),
                    },
                ],
            ),
        );
        let holes = check_binding(&c, &sc, &body).unwrap();
        assert!(holes[0].solver.entails(&Type::rigid("a"), &Type::con("Int")));
        let filled = body.fill_hole(0, &Expr::ctor("0"));
        assert!(check_binding(&c, &sc, &filled).unwrap().is_empty());
        assert!(holes[0]
            .solver
            .givens()
            .contains(&Equality::new(Type::rigid("a"), Type::con("Int"))));
    }

    #[test]
    fn infers_unsigned_bindings() {
        let c = ctx();
        let sc = infer_binding(&c, "k", &Expr::lam("x", Expr::app(Expr::ctor("Just"), Expr::var("x")))).unwrap();
        assert_eq!(crate::pretty::show_scheme(&sc), "t0 -> Maybe t0");
        let ty = infer_expr(&c, &Expr::app(Expr::ctor("Just"), Expr::ctor("True"))).unwrap();
        assert_eq!(ty, Type::data("Maybe", vec![Type::con("Bool")]));
    }

    #[test]
    fn unbound_names_are_reported() {
        let c = ctx();
        let err = check_expr(&c, &Expr::var("nope"), &Type::con("Bool"), &ConstraintSet::new()).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::Unbound);
    }
}
