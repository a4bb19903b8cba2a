//! Call-by-value evaluation with fuel, partial results, and checking
//! expressions against examples.

use std::sync::Arc;

use indexmap::IndexMap;

use crate::context::Context;
use crate::syntax::Expr;
use crate::value::{Example, Value, ValueEnv, World, WorldSet};

pub const DEFAULT_FUEL: u64 = 10_000;

/// Closed top-level definitions available to evaluation.
#[derive(Debug, Clone, Default)]
pub struct Globals(pub IndexMap<String, Arc<Expr>>);

impl Globals {
    pub fn insert(&mut self, name: impl Into<String>, body: Expr) {
        self.0.insert(name.into(), Arc::new(body));
    }
}

/// How saturated calls of the function under synthesis are answered.
#[derive(Debug, Clone)]
pub enum Recursion<'a> {
    None,
    /// Looked up in the input/output table derived from the examples.
    Examples {
        name: &'a str,
        arity: usize,
        table: &'a [(Vec<Value>, Value)],
    },
    /// Evaluated with the candidate body.
    Body {
        name: &'a str,
        arity: usize,
        body: &'a Expr,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalOutcome {
    Value(Value),
    /// The result is only partially known.
    Stuck(Value),
    OutOfFuel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Satisfied,
    Unknown,
    Contradicted,
}

impl Verdict {
    /// Contradiction dominates, then unknown.
    pub fn and(self, other: Verdict) -> Verdict {
        self.max(other)
    }
}

#[derive(Debug)]
struct OutOfFuel;

#[derive(Clone)]
pub struct Evaluator<'a> {
    pub ctx: &'a Context,
    pub globals: &'a Globals,
    pub recursion: Recursion<'a>,
    /// Steps allowed for each top-level evaluation.
    pub fuel: u64,
}

struct Run<'e, 'a> {
    ev: &'e Evaluator<'a>,
    fuel: u64,
}

impl<'a> Evaluator<'a> {
    pub fn new(ctx: &'a Context, globals: &'a Globals) -> Evaluator<'a> {
        Evaluator {
            ctx,
            globals,
            recursion: Recursion::None,
            fuel: DEFAULT_FUEL,
        }
    }

    pub fn with_recursion(mut self, r: Recursion<'a>) -> Evaluator<'a> {
        self.recursion = r;
        self
    }

    pub fn with_fuel(mut self, fuel: u64) -> Evaluator<'a> {
        self.fuel = fuel;
        self
    }

    fn run(&self) -> Run<'_, 'a> {
        Run { ev: self, fuel: self.fuel }
    }

    pub fn eval_expr(&self, env: &ValueEnv, e: &Expr) -> EvalOutcome {
        match self.run().eval(env, e) {
            Ok(v) if contains_stuck(&v) => EvalOutcome::Stuck(v),
            Ok(v) => EvalOutcome::Value(v),
            Err(OutOfFuel) => EvalOutcome::OutOfFuel,
        }
    }

    /// Does `e`, evaluated in `env`, agree with `x`?
    pub fn example_satisfies(&self, env: &ValueEnv, e: &Expr, x: &Example) -> Verdict {
        let mut run = self.run();
        match run.eval(env, e) {
            Ok(v) => run.compare(&v, x).unwrap_or(Verdict::Unknown),
            Err(OutOfFuel) => Verdict::Unknown,
        }
    }

    pub fn value_satisfies(&self, v: &Value, x: &Example) -> Verdict {
        self.run().compare(v, x).unwrap_or(Verdict::Unknown)
    }
}

fn contains_stuck(v: &Value) -> bool {
    match v {
        Value::Stuck => true,
        Value::Ctor(_, args) => args.iter().any(contains_stuck),
        _ => false,
    }
}

impl Run<'_, '_> {
    fn tick(&mut self) -> Result<(), OutOfFuel> {
        if self.fuel == 0 {
            return Err(OutOfFuel);
        }
        self.fuel -= 1;
        Ok(())
    }

    fn eval(&mut self, env: &ValueEnv, e: &Expr) -> Result<Value, OutOfFuel> {
        self.tick()?;
        match e {
            Expr::Const(c) => Ok(Value::Const(c.clone())),
            Expr::Hole(_) => Ok(Value::Stuck),
            Expr::Var(x) => self.var(env, x),
            Expr::Ctor(k) => self.ctor(k),
            Expr::Lam(x, body) => Ok(Value::Closure {
                binder: x.clone(),
                body: Arc::new(body.as_ref().clone()),
                env: env.clone(),
            }),
            Expr::App(..) => {
                let (head, args) = e.spine();
                if let Expr::Ctor(k) = head {
                    let arity = self.ev.ctx.ctor(k).map(|s| s.arity());
                    if arity == Some(args.len()) {
                        let vals = args.iter().map(|a| self.eval(env, a)).collect::<Result<_, _>>()?;
                        return Ok(Value::Ctor(k.clone(), vals));
                    }
                }
                let mut f = self.eval(env, head)?;
                for a in args {
                    let v = self.eval(env, a)?;
                    f = self.apply(f, v)?;
                }
                Ok(f)
            }
            Expr::Case(s, branches) => {
                let v = self.eval(env, s)?;
                match v {
                    Value::Ctor(k, fields) => match branches.iter().find(|b| b.ctor == k) {
                        Some(b) if b.binders.len() == fields.len() => {
                            let mut benv = env.clone();
                            for (x, f) in b.binders.iter().zip(fields) {
                                benv.push(x.clone(), f);
                            }
                            self.eval(&benv, &b.body)
                        }
                        _ => Ok(Value::Stuck),
                    },
                    _ => Ok(Value::Stuck),
                }
            }
        }
    }

    fn var(&mut self, env: &ValueEnv, x: &str) -> Result<Value, OutOfFuel> {
        if let Some(v) = env.lookup(x) {
            return Ok(v.clone());
        }
        match &self.ev.recursion {
            Recursion::Examples { name, .. } | Recursion::Body { name, .. } if *name == x => {
                return Ok(Value::Recursive {
                    name: x.to_string(),
                    args: Vec::new(),
                })
            }
            _ => {}
        }
        match self.ev.globals.0.get(x) {
            Some(body) => {
                let body = body.clone();
                self.eval(&ValueEnv::new(), &body)
            }
            None => Ok(Value::Stuck),
        }
    }

    /// Partially applied constructors become closures over fresh binders.
    fn ctor(&mut self, k: &str) -> Result<Value, OutOfFuel> {
        let arity = match self.ev.ctx.ctor(k) {
            Some(sig) => sig.arity(),
            None => return Ok(Value::Stuck),
        };
        if arity == 0 {
            return Ok(Value::Ctor(k.to_string(), Vec::new()));
        }
        let names: Vec<String> = (0..arity).map(|i| format!("#{i}")).collect();
        let sat = Expr::apps(Expr::ctor(k), names.iter().map(Expr::var));
        let body = Expr::lams(names[1..].iter().cloned(), sat);
        Ok(Value::Closure {
            binder: names[0].clone(),
            body: Arc::new(body),
            env: ValueEnv::new(),
        })
    }

    fn apply(&mut self, f: Value, a: Value) -> Result<Value, OutOfFuel> {
        self.tick()?;
        match f {
            Value::Closure { binder, body, env } => self.eval(&env.extend(binder, a), &body),
            Value::Recursive { name, mut args } => {
                args.push(a);
                let arity = match &self.ev.recursion {
                    Recursion::Examples { arity, .. } | Recursion::Body { arity, .. } => *arity,
                    Recursion::None => return Ok(Value::Stuck),
                };
                if args.len() < arity {
                    return Ok(Value::Recursive { name, args });
                }
                self.call_recursive(args)
            }
            _ => Ok(Value::Stuck),
        }
    }

    fn call_recursive(&mut self, args: Vec<Value>) -> Result<Value, OutOfFuel> {
        match self.ev.recursion.clone() {
            Recursion::Examples { table, .. } => {
                if !args.iter().all(Value::is_first_order) {
                    return Ok(Value::Stuck);
                }
                Ok(table
                    .iter()
                    .find(|(inputs, _)| *inputs == args)
                    .map(|(_, out)| out.clone())
                    .unwrap_or(Value::Stuck))
            }
            Recursion::Body { body, .. } => {
                let mut f = self.eval(&ValueEnv::new(), body)?;
                for a in args {
                    f = self.apply(f, a)?;
                }
                Ok(f)
            }
            Recursion::None => Ok(Value::Stuck),
        }
    }

    fn compare(&mut self, v: &Value, x: &Example) -> Result<Verdict, OutOfFuel> {
        Ok(match (v, x) {
            (Value::Stuck, _) => Verdict::Unknown,
            (_, Example::Io(input, out)) => match v {
                Value::Closure { .. } | Value::Recursive { .. } => {
                    let arg = self.eval(&ValueEnv::new(), &input.0)?;
                    let r = self.apply(v.clone(), arg)?;
                    self.compare(&r, out)?
                }
                _ => Verdict::Contradicted,
            },
            (Value::Const(a), Example::Const(b)) => {
                if a == b {
                    Verdict::Satisfied
                } else {
                    Verdict::Contradicted
                }
            }
            (Value::Ctor(k, args), Example::Ctor(j, xs)) => {
                if k != j || args.len() != xs.len() {
                    Verdict::Contradicted
                } else {
                    let mut verdict = Verdict::Satisfied;
                    for (a, x) in args.iter().zip(xs) {
                        verdict = verdict.and(self.compare(a, x)?);
                        if verdict == Verdict::Contradicted {
                            break;
                        }
                    }
                    verdict
                }
            }
            (Value::Recursive { .. } | Value::Closure { .. }, _) => Verdict::Unknown,
            _ => Verdict::Contradicted,
        })
    }
}

/// Input/output table for example-based recursion. Rows whose inputs are
/// not first order are skipped.
pub fn recursion_table(ctx: &Context, globals: &Globals, rows: &[Example]) -> Vec<(Vec<Value>, Value)> {
    let ev = Evaluator::new(ctx, globals);
    rows.iter()
        .filter_map(|row| {
            let (inputs, out) = row.uncurry();
            let vals: Vec<Value> = inputs
                .iter()
                .map(|i| match ev.eval_expr(&ValueEnv::new(), i) {
                    EvalOutcome::Value(v) if v.is_first_order() => Some(v),
                    _ => None,
                })
                .collect::<Option<_>>()?;
            Some((vals, out.to_value()?))
        })
        .collect()
}

/// Worlds after binding `x` to each world's next input.
pub fn refine_lambda_worlds(ev: &Evaluator, worlds: &[World], x: &str) -> Option<WorldSet> {
    worlds
        .iter()
        .map(|w| match &w.goal {
            Example::Io(input, out) => match ev.eval_expr(&ValueEnv::new(), &input.0) {
                EvalOutcome::Value(v) => Some(World {
                    env: w.env.extend(x, v),
                    goal: out.as_ref().clone(),
                }),
                _ => None,
            },
            _ => None,
        })
        .collect()
}

/// Worlds in which `scrutinee` is built with `ctor`, with the fields bound
/// to `binders`. `None` when some world cannot decide.
pub fn filter_worlds(worlds: &[World], scrutinee: &str, ctor: &str, binders: &[String]) -> Option<WorldSet> {
    let mut out = Vec::new();
    for w in worlds {
        match w.env.lookup(scrutinee) {
            Some(Value::Ctor(k, fields)) => {
                if k == ctor && fields.len() == binders.len() {
                    let mut env = w.env.clone();
                    for (x, f) in binders.iter().zip(fields) {
                        env.push(x.clone(), f.clone());
                    }
                    out.push(World { env, goal: w.goal.clone() });
                }
            }
            _ => return None,
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::CtorSig;
    use crate::syntax::MatchBranch;
    use crate::types::{ConstraintSet, Type};

    fn ctx() -> Context {
        let mut c = Context::new();
        let k = |n: &str, args: Vec<Type>, head: &str, q: &[&str]| CtorSig {
            name: n.into(),
            quantified: q.iter().map(|s| s.to_string()).collect(),
            bundled: ConstraintSet::new(),
            arg_types: args,
            result_head: head.into(),
        };
        let a = Type::rigid("a");
        c.add_datatype(
            "[]",
            &["a".into()],
            vec![k("[]", vec![], "[]", &["a"]), k(":", vec![a.clone(), Type::list(a)], "[]", &["a"])],
            false,
        )
        .unwrap();
        c
    }

    fn list(items: &[&str]) -> Value {
        items
            .iter()
            .rev()
            .fold(Value::ctor("[]", vec![]), |t, x| Value::ctor(":", vec![Value::constant(*x), t]))
    }

    fn list_ex(items: &[&str]) -> Example {
        list(items).to_example().unwrap()
    }

    fn cons(x: Expr, xs: Expr) -> Expr {
        Expr::apps(Expr::ctor(":"), [x, xs])
    }

    /// stutter l = case l of [] -> []; (:) a l2 -> a : a : stutter l2
    fn stutter() -> Expr {
        Expr::lam(
            "l",
            Expr::case(
                Expr::var("l"),
                vec![
                    MatchBranch {
                        ctor: "[]".into(),
                        binders: vec![],
                        body: Expr::ctor("[]"),
                    },
                    MatchBranch {
                        ctor: ":".into(),
                        binders: vec!["a".into(), "l2".into()],
                        body: cons(
                            Expr::var("a"),
                            cons(Expr::var("a"), Expr::app(Expr::var("stutter"), Expr::var("l2"))),
                        ),
                    },
                ],
            ),
        )
    }

    #[test]
    fn recursion_through_the_body() {
        let c = ctx();
        let g = Globals::default();
        let body = stutter();
        let ev = Evaluator::new(&c, &g).with_recursion(Recursion::Body {
            name: "stutter",
            arity: 1,
            body: &body,
        });
        let r = ev.eval_expr(&ValueEnv::new(), &Expr::app(body.clone(), list(&["a1", "a2"]).to_expr().unwrap()));
        assert_eq!(r, EvalOutcome::Value(list(&["a1", "a1", "a2", "a2"])));
    }

    #[test]
    fn example_recursion_leaves_unknown_calls_stuck() {
        let c = ctx();
        let g = Globals::default();
        let table = vec![(vec![list(&[])], list(&[]))];
        let body = stutter();
        let ev = Evaluator::new(&c, &g).with_recursion(Recursion::Examples {
            name: "stutter",
            arity: 1,
            table: &table,
        });
        let env = ValueEnv::new().extend("l", list(&["a1"]));
        let app = Expr::app(body.clone(), Expr::var("l"));
        assert_eq!(ev.example_satisfies(&env, &app, &list_ex(&["a1", "a1"])), Verdict::Satisfied);
        let env2 = ValueEnv::new().extend("l", list(&["a1", "a2"]));
        assert_eq!(
            ev.example_satisfies(&env2, &app, &list_ex(&["a1", "a1", "a2", "a2"])),
            Verdict::Unknown
        );
        // Known prefix already disagrees.
        assert_eq!(
            ev.example_satisfies(&env2, &app, &list_ex(&["a2", "a2", "a1", "a1"])),
            Verdict::Contradicted
        );
    }

    #[test]
    fn fuel_bounds_divergence() {
        let c = ctx();
        let g = Globals::default();
        let looping = Expr::lam("x", Expr::app(Expr::var("f"), Expr::var("x")));
        let ev = Evaluator::new(&c, &g)
            .with_recursion(Recursion::Body {
                name: "f",
                arity: 1,
                body: &looping,
            })
            .with_fuel(500);
        let r = ev.eval_expr(&ValueEnv::new(), &Expr::app(Expr::var("f"), Expr::ctor("[]")));
        assert_eq!(r, EvalOutcome::OutOfFuel);
    }

    #[test]
    fn partial_constructors_and_io_examples() {
        let c = ctx();
        let g = Globals::default();
        let ev = Evaluator::new(&c, &g);
        let x = Example::io(Value::constant("a1"), list_ex(&["a1"]));
        let f = Expr::app(Expr::ctor(":"), Expr::Const("a1".into()));
        let wrong = Example::io(Value::constant("a1"), list_ex(&["a2"]));
        let g2 = Expr::lam("y", cons(Expr::var("y"), Expr::ctor("[]")));
        assert_eq!(ev.example_satisfies(&ValueEnv::new(), &g2, &x), Verdict::Satisfied);
        assert_eq!(ev.example_satisfies(&ValueEnv::new(), &g2, &wrong), Verdict::Contradicted);
        let partial = ev.eval_expr(&ValueEnv::new(), &Expr::app(f, Expr::ctor("[]")));
        assert_eq!(partial, EvalOutcome::Value(list(&["a1"])));
    }

    #[test]
    fn worlds_split_by_constructor() {
        let worlds = vec![
            World {
                env: ValueEnv::new().extend("l", list(&[])),
                goal: list_ex(&[]),
            },
            World {
                env: ValueEnv::new().extend("l", list(&["a1"])),
                goal: list_ex(&["a1", "a1"]),
            },
        ];
        let cons_worlds = filter_worlds(&worlds, "l", ":", &["a".into(), "l2".into()]).unwrap();
        assert_eq!(cons_worlds.len(), 1);
        assert_eq!(cons_worlds[0].env.lookup("a"), Some(&Value::constant("a1")));
        let stuck = vec![World {
            env: ValueEnv::new().extend("l", Value::constant("c")),
            goal: list_ex(&[]),
        }];
        assert!(filter_worlds(&stuck, "l", "[]", &[]).is_none());
    }
}
