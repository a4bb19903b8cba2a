//! Example refinement: lambda, constructor, case and guess rules.

use crate::constraints::instantiate;
use crate::eval::{filter_worlds, refine_lambda_worlds, Verdict};
use crate::pretty::{ctor_name, show_expr_inline, show_type};
use crate::syntax::{Expr, MatchBranch};
use crate::types::{Subst, TyVar, Type};
use crate::value::{Example, World};

use super::generate::GenState;
use super::{Partial, Scope, Synth, Worlds};

impl Synth<'_> {
    pub fn refine(&self, scope: &Scope, goal: &Type, worlds: &Worlds, case_depth: usize, st: &GenState) -> Vec<Partial> {
        let resolved = st.solver.resolve(goal);
        if &resolved != goal {
            if let Type::Rigid(a) = goal {
                self.trace(|| format!("refine-gadt-unify {a} := {}", show_type(&resolved)));
            }
        }
        let goal = resolved;
        if let Worlds::Ex(ws) = worlds {
            if ws.is_empty() {
                return self.guess(scope, &goal, worlds, st);
            }
        }
        let mut out = Vec::new();
        if let Type::Arrow(dom, cod) = &goal {
            let lam_ok = match worlds {
                Worlds::Free => true,
                Worlds::Ex(ws) => ws.iter().all(|w| matches!(w.goal, Example::Io(..))),
            };
            if lam_ok {
                out.extend(self.refine_lam(scope, dom, cod, worlds, case_depth, st));
            }
        }
        if let (Type::Data(..), Worlds::Ex(ws)) = (&goal, worlds) {
            out.extend(self.refine_data(scope, &goal, ws, case_depth, st));
        }
        if case_depth > 0 {
            out.extend(self.refine_case(scope, &goal, worlds, case_depth, st));
        }
        out.extend(self.guess(scope, &goal, worlds, st));
        self.prune(out)
    }

    fn refine_lam(&self, scope: &Scope, dom: &Type, cod: &Type, worlds: &Worlds, case_depth: usize, st: &GenState) -> Vec<Partial> {
        let x = self.fresh_name(scope, dom, &[]);
        self.trace(|| format!("refine-gadt-lam \\{x} : {}", show_type(dom)));
        let inner = match worlds {
            Worlds::Free => Worlds::Free,
            Worlds::Ex(ws) => match refine_lambda_worlds(&self.search_evaluator(), ws, &x) {
                Some(ws) => Worlds::Ex(ws),
                None => return Vec::new(),
            },
        };
        let scope = scope.bind_arg(&x, dom.clone(), self.rec.as_ref().map(|r| r.arg));
        self.refine(&scope, cod, &inner, case_depth, st)
            .into_iter()
            .map(|p| Partial {
                expr: Expr::lam(x.clone(), p.expr),
                verdict: p.verdict,
            })
            .collect()
    }

    fn refine_data(&self, scope: &Scope, goal: &Type, ws: &[World], case_depth: usize, st: &GenState) -> Vec<Partial> {
        let Some(k) = ws[0].goal.head() else { return Vec::new() };
        if ws.iter().any(|w| w.goal.head() != Some(k)) {
            return Vec::new();
        }
        let Some(sig) = self.ctx.ctor(k) else { return Vec::new() };
        let mut supply = st.supply.clone();
        let (ty, bundled, _) = instantiate(&sig.scheme(), &mut supply);
        let (args, result) = ty.split_arrows();
        let Ok(solver) = st.solver.want(goal, result) else {
            return Vec::new();
        };
        if !solver.entails_all(&bundled) {
            return Vec::new();
        }
        self.trace(|| format!("refine-gadt-data {} : {}", ctor_name(k), show_type(goal)));
        let st = GenState::new(solver, supply);
        let mut combos: Vec<Partial> = vec![Partial {
            expr: Expr::ctor(k),
            verdict: Verdict::Satisfied,
        }];
        for (i, arg_ty) in args.iter().enumerate() {
            let sub: Vec<World> = ws
                .iter()
                .map(|w| World {
                    env: w.env.clone(),
                    goal: match &w.goal {
                        Example::Ctor(_, xs) => xs[i].clone(),
                        _ => unreachable!("all worlds are constructor-headed"),
                    },
                })
                .collect();
            let arg_ty = st.solver.resolve(arg_ty);
            let options = self.refine(scope, &arg_ty, &Worlds::Ex(sub), case_depth, &st);
            if options.is_empty() {
                return Vec::new();
            }
            combos = self.cross(&combos, &options, |f, a| Expr::app(f.clone(), a.clone()));
        }
        combos
    }

    fn refine_case(&self, scope: &Scope, goal: &Type, worlds: &Worlds, case_depth: usize, st: &GenState) -> Vec<Partial> {
        let mut out = Vec::new();
        for (x, t) in &scope.locals {
            if scope.scrutinized.contains(x) {
                continue;
            }
            let Type::Data(head, ty_args) = st.solver.resolve(t) else {
                continue;
            };
            let Some(decl) = self.ctx.datatype(&head) else { continue };
            if decl.opaque || decl.ctors.is_empty() {
                continue;
            }
            // Every world must know which constructor `x` is built with.
            let mut per_ctor = Vec::new();
            let mut decidable = true;
            for sig in self.ctx.ctors_of(&head) {
                let binders = self.fresh_binders(scope, sig, &ty_args);
                let filtered = match worlds {
                    Worlds::Free => Worlds::Free,
                    Worlds::Ex(ws) => match filter_worlds(ws, x, &sig.name, &binders) {
                        Some(f) => Worlds::Ex(f),
                        None => {
                            decidable = false;
                            break;
                        }
                    },
                };
                per_ctor.push((sig.clone(), binders, filtered));
            }
            if !decidable {
                continue;
            }
            self.trace(|| format!("refine-gadt-case {x} : {}", show_type(t)));
            let mut combos: Vec<(Vec<MatchBranch>, Verdict)> = vec![(Vec::new(), Verdict::Satisfied)];
            for (sig, binders, filtered) in per_ctor {
                let branches = self.refine_match(scope, x, &ty_args, &sig, binders, goal, &filtered, worlds, case_depth, st);
                if branches.is_empty() {
                    combos.clear();
                    break;
                }
                let mut next = Vec::new();
                for (bs, v) in &combos {
                    for (b, bv) in &branches {
                        let mut bs = bs.clone();
                        bs.push(b.clone());
                        next.push((bs, v.and(*bv)));
                    }
                }
                next.sort_by_cached_key(|(bs, v)| (*v, bs.iter().map(|b| b.body.size()).sum::<usize>()));
                next.truncate(self.inner_cap());
                combos = next;
            }
            for (bs, v) in combos {
                out.push(Partial {
                    expr: Expr::case(Expr::var(x.clone()), bs),
                    verdict: v,
                });
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn refine_match(
        &self,
        scope: &Scope,
        x: &str,
        ty_args: &[Type],
        sig: &crate::context::CtorSig,
        binders: Vec<String>,
        goal: &Type,
        filtered: &Worlds,
        parent: &Worlds,
        case_depth: usize,
        st: &GenState,
    ) -> Vec<(MatchBranch, Verdict)> {
        let theta: Subst = sig
            .quantified
            .iter()
            .cloned()
            .zip(ty_args.iter().cloned())
            .map(|(q, t)| (TyVar::Rigid(q), t))
            .collect();
        let local = sig.bundled.apply(&theta).apply(st.solver.subst());
        let branch = |body: Expr| MatchBranch {
            ctor: sig.name.clone(),
            binders: binders.clone(),
            body,
        };
        let solver = match st.solver.assume(&local) {
            Ok(s) => s,
            Err(_) => {
                self.trace(|| format!("refine-gadt-match {} unreachable", ctor_name(&sig.name)));
                let body = binders
                    .first()
                    .map(|b| Expr::var(b.clone()))
                    .or_else(|| scope.locals.first().map(|(y, _)| Expr::var(y.clone())))
                    .or_else(|| self.components.first().map(|c| c.expr.clone()));
                return body.map(|b| (branch(b), Verdict::Unknown)).into_iter().collect();
            }
        };
        if !local.is_empty() {
            self.trace(|| {
                format!(
                    "refine-gadt-match {} assumes {}",
                    ctor_name(&sig.name),
                    crate::pretty::show_constraints(&local)
                )
            });
        } else {
            self.trace(|| format!("refine-gadt-match {}", ctor_name(&sig.name)));
        }
        let mut inner = scope.clone();
        inner.scrutinized.push(x.to_string());
        let decreasing = scope.is_decreasing_source(x);
        for (b, t) in binders.iter().zip(&sig.arg_types) {
            inner = inner.bind(b, solver.resolve(&t.apply(&theta)));
            if decreasing {
                inner.decreasing.push(b.clone());
            }
        }
        let st = GenState::new(solver, st.supply.clone());
        let bodies = match (filtered, parent) {
            (Worlds::Ex(f), Worlds::Ex(p)) if f.is_empty() && !p.is_empty() => self.guess(&inner, goal, filtered, &st),
            _ => self.refine(&inner, goal, filtered, case_depth - 1, &st),
        };
        bodies.into_iter().map(|p| (branch(p.expr), p.verdict)).collect()
    }

    /// refine-gadt-guess: generated terms checked against every world.
    pub(super) fn guess(&self, scope: &Scope, goal: &Type, worlds: &Worlds, st: &GenState) -> Vec<Partial> {
        let mut out: Vec<Partial> = Vec::new();
        let ev = self.search_evaluator();
        for (e, _) in self.generate(scope, goal, self.budget.max_app_depth, st) {
            if !self.recursion_guard(&e, scope) {
                continue;
            }
            let verdict = match worlds {
                Worlds::Free => Verdict::Unknown,
                Worlds::Ex(ws) if ws.is_empty() => Verdict::Unknown,
                Worlds::Ex(ws) => {
                    let mut v = Verdict::Satisfied;
                    for w in ws {
                        v = v.and(ev.example_satisfies(&w.env, &e, &w.goal));
                        if v == Verdict::Contradicted {
                            break;
                        }
                    }
                    v
                }
            };
            if verdict == Verdict::Contradicted {
                continue;
            }
            self.trace(|| format!("refine-gadt-guess {} : {}", show_expr_inline(&e), show_type(goal)));
            out.push(Partial { expr: e, verdict });
        }
        self.prune(out)
    }

    fn cross(&self, left: &[Partial], right: &[Partial], join: impl Fn(&Expr, &Expr) -> Expr) -> Vec<Partial> {
        let mut out = Vec::new();
        for l in left {
            for r in right {
                out.push(Partial {
                    expr: join(&l.expr, &r.expr),
                    verdict: l.verdict.and(r.verdict),
                });
            }
        }
        self.prune(out)
    }
}
