//! Type-and-example directed search for hole fillers.

mod generate;
mod refine;

use std::cell::{Cell, RefCell};
use std::collections::BTreeMap;

use crate::context::{Context, CtorSig};
use crate::eval::{filter_worlds, recursion_table, refine_lambda_worlds, Evaluator, Globals, Recursion, Verdict, DEFAULT_FUEL};
use crate::parser::{Diagnostic, ErrorCode, OptionMap};
use crate::pretty::{show_expr_inline, show_type};
use crate::program::{Goal, Program};
use crate::syntax::{Expr, HoleId};
use crate::types::{FreshSupply, Scheme, Subst, TyVar, Type, Uvar, LIST};
use crate::value::{TopExample, ValueEnv, World};

pub use generate::GenState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_app_depth: usize,
    pub max_case_depth: usize,
    pub max_candidates: usize,
    pub fuel: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_app_depth: 3,
            max_case_depth: 2,
            max_candidates: 10,
            fuel: DEFAULT_FUEL,
        }
    }
}

impl SearchBudget {
    /// The budget with a goal's `depth` / `maxCandidates` options applied.
    pub fn with_options(mut self, opts: &OptionMap) -> SearchBudget {
        if let Some(d) = opts.depth {
            self.max_app_depth = d;
        }
        if let Some(n) = opts.max_candidates {
            self.max_candidates = n;
        }
        self
    }
}

/// How components are offered to generation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Mode {
    /// Polymorphic components are instantiated lazily through constraints.
    #[default]
    Constraint,
    /// Polymorphic components are expanded up front into every ground
    /// instance over a small type universe.
    Naive,
}

#[derive(Debug, Clone, Default)]
pub struct SynthOptions {
    pub mode: Mode,
    pub trace: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CandidateVerdict {
    Ok,
    Unknown,
}

impl CandidateVerdict {
    pub fn tag(self) -> &'static str {
        match self {
            CandidateVerdict::Ok => "ok",
            CandidateVerdict::Unknown => "?",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    /// The term placed in the hole.
    pub expr: Expr,
    /// The whole binding body with the hole filled.
    pub body: Expr,
    pub verdict: CandidateVerdict,
    pub per_row: Vec<Verdict>,
}

#[derive(Debug, Clone)]
pub struct HoleResult {
    pub hole: HoleId,
    pub goal: Type,
    pub candidates: Vec<Candidate>,
    pub heads_examined: u64,
    pub trace: Vec<String>,
}

/// A generation component: a global, a constructor or the function
/// being synthesized.
#[derive(Debug, Clone)]
pub struct Component {
    pub expr: Expr,
    pub scheme: Scheme,
}

/// Monomorphic locals visible at a search point.
#[derive(Debug, Clone, Default)]
pub struct Scope {
    pub locals: Vec<(String, Type)>,
    /// Binders that are strict subterms of the recursion argument.
    pub decreasing: Vec<String>,
    pub scrutinized: Vec<String>,
    /// The variable standing for the recursion argument, once bound.
    pub rec_param: Option<String>,
    /// How many goal arguments have been bound by lambdas so far.
    pub arg_index: usize,
}

impl Scope {
    pub fn bind(&self, x: &str, t: Type) -> Scope {
        let mut out = self.clone();
        out.locals.retain(|(y, _)| y != x);
        out.locals.push((x.to_string(), t));
        out
    }

    /// Binds the next goal argument.
    pub fn bind_arg(&self, x: &str, t: Type, rec_arg: Option<usize>) -> Scope {
        let mut out = self.bind(x, t);
        if rec_arg == Some(out.arg_index) {
            out.rec_param = Some(x.to_string());
        }
        out.arg_index += 1;
        out
    }

    pub fn is_decreasing_source(&self, x: &str) -> bool {
        self.rec_param.as_deref() == Some(x) || self.decreasing.iter().any(|d| d == x)
    }
}

#[derive(Debug, Clone)]
pub enum Worlds {
    /// No examples at all: every candidate is unknown.
    Free,
    Ex(Vec<World>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partial {
    pub expr: Expr,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct RecInfo {
    pub name: String,
    pub arity: usize,
    pub arg: usize,
    pub table: Vec<(Vec<crate::value::Value>, crate::value::Value)>,
}

pub struct Synth<'a> {
    pub ctx: &'a Context,
    pub globals: &'a Globals,
    pub components: Vec<Component>,
    pub budget: SearchBudget,
    pub rec: Option<RecInfo>,
    heads: Cell<u64>,
    trace: RefCell<Option<Vec<String>>>,
}

impl<'a> Synth<'a> {
    pub fn new(ctx: &'a Context, globals: &'a Globals, components: Vec<Component>, budget: SearchBudget) -> Synth<'a> {
        Synth {
            ctx,
            globals,
            components,
            budget,
            rec: None,
            heads: Cell::new(0),
            trace: RefCell::new(None),
        }
    }

    pub fn with_recursion(mut self, rec: Option<RecInfo>) -> Synth<'a> {
        self.rec = rec;
        self
    }

    pub fn with_trace(self, on: bool) -> Synth<'a> {
        *self.trace.borrow_mut() = on.then(Vec::new);
        self
    }

    pub fn heads_examined(&self) -> u64 {
        self.heads.get()
    }

    pub fn take_trace(&self) -> Vec<String> {
        self.trace.borrow_mut().take().unwrap_or_default()
    }

    fn count_head(&self) {
        self.heads.set(self.heads.get() + 1);
    }

    fn trace(&self, line: impl FnOnce() -> String) {
        if let Some(t) = self.trace.borrow_mut().as_mut() {
            t.push(line());
        }
    }

    fn inner_cap(&self) -> usize {
        (self.budget.max_candidates * 4).max(64)
    }

    fn search_evaluator(&self) -> Evaluator<'_> {
        let ev = Evaluator::new(self.ctx, self.globals).with_fuel(self.budget.fuel);
        match &self.rec {
            Some(r) => ev.with_recursion(Recursion::Examples {
                name: &r.name,
                arity: r.arity,
                table: &r.table,
            }),
            None => ev,
        }
    }

    fn taken(&self, scope: &Scope, name: &str) -> bool {
        scope.locals.iter().any(|(y, _)| y == name) || self.ctx.vars.contains_key(name) || self.rec.as_ref().is_some_and(|r| r.name == name)
    }

    /// `prefix1`, `prefix2`, .. with a prefix chosen from the type.
    fn fresh_name(&self, scope: &Scope, ty: &Type, avoid: &[String]) -> String {
        let prefix = match ty {
            Type::Rigid(a) => a.chars().next().unwrap_or('x').to_string(),
            Type::Data(h, _) if h == LIST => "l".to_string(),
            Type::Data(h, _) => h
                .chars()
                .next()
                .map(|c| c.to_ascii_lowercase())
                .filter(char::is_ascii_alphabetic)
                .unwrap_or('x')
                .to_string(),
            Type::Arrow(..) => "f".to_string(),
            Type::Uvar(_) => "x".to_string(),
        };
        (1..)
            .map(|k| format!("{prefix}{k}"))
            .find(|n| !avoid.contains(n) && !self.taken(scope, n))
            .expect("infinitely many names")
    }

    fn fresh_binders(&self, scope: &Scope, sig: &CtorSig, ty_args: &[Type]) -> Vec<String> {
        let theta: Subst = sig
            .quantified
            .iter()
            .cloned()
            .zip(ty_args.iter().cloned())
            .map(|(q, t)| (TyVar::Rigid(q), t))
            .collect();
        let mut out = Vec::new();
        for t in &sig.arg_types {
            let n = self.fresh_name(scope, &t.apply(&theta), &out);
            out.push(n);
        }
        out
    }

    /// Every occurrence of the recursive function is a saturated call whose
    /// recursion argument is a strict subterm of the original argument.
    fn recursion_guard(&self, e: &Expr, scope: &Scope) -> bool {
        let Some(r) = &self.rec else { return true };
        fn ok(e: &Expr, r: &RecInfo, scope: &Scope) -> bool {
            let (head, args) = e.spine();
            if let Expr::Var(f) = head {
                if f == &r.name {
                    let structural = args.len() == r.arity && matches!(args[r.arg], Expr::Var(v) if scope.decreasing.contains(v));
                    if !structural {
                        return false;
                    }
                }
            }
            let inner = match head {
                Expr::Lam(_, b) => ok(b, r, scope),
                Expr::Case(s, bs) => ok(s, r, scope) && bs.iter().all(|b| ok(&b.body, r, scope)),
                _ => true,
            };
            inner && args.iter().all(|a| ok(a, r, scope))
        }
        ok(e, r, scope)
    }

    /// Dedups, ranks by (verdict, size, structure) and caps.
    fn prune(&self, out: Vec<Partial>) -> Vec<Partial> {
        let mut keyed: Vec<(Verdict, usize, Partial)> = out.into_iter().map(|p| (p.verdict, p.expr.size(), p)).collect();
        keyed.sort_by(|a, b| (a.0, a.1, &a.2.expr).cmp(&(b.0, b.1, &b.2.expr)));
        keyed.dedup_by(|a, b| a.2.expr == b.2.expr);
        keyed.truncate(self.inner_cap());
        keyed.into_iter().map(|(_, _, p)| p).collect()
    }
}

/// Components for a goal: context globals and constructors (or the `ctx`
/// option's selection), plus the goal itself when it may recurse.
pub fn components(ctx: &Context, exclude: &[String], opts: &OptionMap, rec: Option<(&str, &Scheme)>) -> Vec<Component> {
    let allowed = |n: &str| match &opts.ctx {
        Some(names) => names.iter().any(|m| m == n),
        None => !exclude.iter().any(|m| m == n),
    };
    let mut out = Vec::new();
    for (n, s) in &ctx.vars {
        if allowed(n) {
            out.push(Component {
                expr: Expr::var(n.clone()),
                scheme: s.clone(),
            });
        }
    }
    for (n, k) in &ctx.ctors {
        if allowed(n) {
            out.push(Component {
                expr: Expr::ctor(n.clone()),
                scheme: k.scheme(),
            });
        }
    }
    if let Some((name, scheme)) = rec {
        out.push(Component {
            expr: Expr::var(name),
            scheme: scheme.clone(),
        });
    }
    out
}

/// Ground types used to expand polymorphic components in naive mode:
/// nullary datatypes, the goal's rigid variables, and unary datatypes
/// applied to those.
pub fn type_universe(ctx: &Context, rigids: &[String]) -> Vec<Type> {
    let mut base: Vec<Type> = ctx
        .datatypes
        .values()
        .filter(|d| d.arity == 0)
        .map(|d| Type::con(d.name.clone()))
        .collect();
    base.extend(rigids.iter().map(Type::rigid));
    let mut out = base.clone();
    for d in ctx.datatypes.values().filter(|d| d.arity == 1) {
        for b in &base {
            out.push(Type::data(d.name.clone(), vec![b.clone()]));
        }
    }
    out
}

/// Replaces each polymorphic component by its ground instances.
pub fn expand_naive(comps: Vec<Component>, universe: &[Type]) -> Vec<Component> {
    let mut out = Vec::new();
    for c in comps {
        let q = &c.scheme.quantified;
        if q.is_empty() {
            out.push(c);
            continue;
        }
        let mut idx = vec![0usize; q.len()];
        'outer: loop {
            let theta: Subst = q
                .iter()
                .zip(&idx)
                .map(|(a, &i)| (TyVar::Rigid(a.clone()), universe[i].clone()))
                .collect();
            let bundled = c.scheme.constraints.apply(&theta);
            if crate::constraints::consistent(&bundled) {
                out.push(Component {
                    expr: c.expr.clone(),
                    scheme: Scheme {
                        quantified: Vec::new(),
                        constraints: bundled,
                        body: c.scheme.body.apply(&theta),
                    },
                });
            }
            for k in (0..idx.len()).rev() {
                idx[k] += 1;
                if idx[k] < universe.len() {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
    }
    out
}

fn max_uvar(ts: impl IntoIterator<Item = Type>) -> u32 {
    let mut set = std::collections::BTreeSet::new();
    for t in ts {
        t.collect_uvars(&mut set);
    }
    set.iter().next_back().map_or(0, |Uvar(u)| u + 1)
}

/// Worlds reaching each hole of a skeleton.
fn hole_worlds(ev: &Evaluator, e: &Expr, worlds: &Worlds, out: &mut BTreeMap<HoleId, Worlds>) {
    let lost = || match worlds {
        Worlds::Free => Worlds::Free,
        Worlds::Ex(_) => Worlds::Ex(Vec::new()),
    };
    match e {
        Expr::Hole(h) => {
            out.insert(*h, worlds.clone());
        }
        Expr::Lam(x, b) => {
            let inner = match worlds {
                Worlds::Free => Worlds::Free,
                Worlds::Ex(ws) => Worlds::Ex(refine_lambda_worlds(ev, ws, x).unwrap_or_default()),
            };
            hole_worlds(ev, b, &inner, out);
        }
        Expr::Case(s, bs) => {
            hole_worlds(ev, s, &lost(), out);
            for b in bs {
                let inner = match (worlds, s.as_ref()) {
                    (Worlds::Free, _) => Worlds::Free,
                    (Worlds::Ex(ws), Expr::Var(x)) => Worlds::Ex(filter_worlds(ws, x, &b.ctor, &b.binders).unwrap_or_default()),
                    (Worlds::Ex(_), _) => Worlds::Ex(Vec::new()),
                };
                hole_worlds(ev, &b.body, &inner, out);
            }
        }
        Expr::App(f, a) => {
            hole_worlds(ev, f, &lost(), out);
            hole_worlds(ev, a, &lost(), out);
        }
        _ => {}
    }
}

fn canonical_key(e: &Expr) -> String {
    show_expr_inline(&e.alpha_canonical())
}

/// Fills every hole of `goal`, one result per hole in id order.
pub fn synthesize_goal(prog: &Program, goal: &Goal, budget: &SearchBudget, opts: &SynthOptions) -> Result<Vec<HoleResult>, Diagnostic> {
    let ctx = goal.context(&prog.ctx);
    let budget = budget.with_options(&goal.options);
    let rows = goal.examples.as_ref().map(|x| x.rows.clone()).unwrap_or_default();
    let worlds = if rows.is_empty() {
        Worlds::Free
    } else {
        Worlds::Ex(
            rows.iter()
                .map(|r| World {
                    env: ValueEnv::new(),
                    goal: r.clone(),
                })
                .collect(),
        )
    };
    let rec = goal.options.rec_arg.map(|arg| RecInfo {
        name: goal.name.clone(),
        arity: goal.arity(),
        arg,
        table: recursion_table(&ctx, &prog.globals, &rows),
    });
    let exclude: Vec<String> = prog.goals.iter().map(|g| g.name.clone()).collect();
    let mut comps = components(
        &ctx,
        &exclude,
        &goal.options,
        rec.as_ref().map(|_| (goal.name.as_str(), &goal.scheme)),
    );
    if opts.mode == Mode::Naive {
        let rigids: Vec<String> = goal.scheme.quantified.clone();
        comps = expand_naive(comps, &type_universe(&ctx, &rigids));
    } else {
        comps.retain(|c| !matches!(c.expr, Expr::Const(_)));
    }

    let mut per_hole = BTreeMap::new();
    {
        let ev = Evaluator::new(&ctx, &prog.globals).with_fuel(budget.fuel);
        let ev = match &rec {
            Some(r) => ev.with_recursion(Recursion::Examples {
                name: &r.name,
                arity: r.arity,
                table: &r.table,
            }),
            None => ev,
        };
        hole_worlds(&ev, &goal.body, &worlds, &mut per_hole);
    }

    let mut results = Vec::new();
    for site in &goal.holes {
        let hole_ty = site.solver.resolve(&site.ty);
        let start = max_uvar(
            std::iter::once(hole_ty.clone())
                .chain(site.locals.0.iter().map(|(_, t)| t.clone()))
                .chain(site.solver.constraints().iter().flat_map(|e| [e.lhs.clone(), e.rhs.clone()])),
        );
        let synth = Synth::new(&ctx, &prog.globals, comps.clone(), budget)
            .with_recursion(rec.clone())
            .with_trace(opts.trace);
        let rec_param = goal.options.rec_arg.and_then(|i| goal.params.get(i).cloned());
        let mut scope = Scope {
            locals: site
                .locals
                .visible()
                .into_iter()
                .map(|(x, t)| (x, site.solver.resolve(&t)))
                .collect(),
            decreasing: Vec::new(),
            scrutinized: site.scrutinized.clone(),
            rec_param,
            arg_index: goal.params.len(),
        };
        for (b, v) in &site.subterms {
            if scope.is_decreasing_source(v) {
                scope.decreasing.push(b.clone());
            }
        }
        let hole_worlds = per_hole.get(&site.id).cloned().unwrap_or(Worlds::Ex(Vec::new()));
        let st = GenState::new(site.solver.clone(), FreshSupply::starting_at(start));
        synth.trace(|| format!("hole ?{} : {}", site.id, show_type(&hole_ty)));
        let partials = synth.refine(&scope, &hole_ty, &hole_worlds, budget.max_case_depth, &st);
        let candidates = finalize(&ctx, &prog.globals, goal, site.id, &rows, &budget, partials);
        results.push(HoleResult {
            hole: site.id,
            goal: hole_ty,
            candidates,
            heads_examined: synth.heads_examined(),
            trace: synth.take_trace(),
        });
    }
    Ok(results)
}

/// Final verdicts against the top-level rows, α-dedup, ranking, cap.
fn finalize(
    ctx: &Context,
    globals: &Globals,
    goal: &Goal,
    hole: HoleId,
    rows: &[crate::value::Example],
    budget: &SearchBudget,
    partials: Vec<Partial>,
) -> Vec<Candidate> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out: Vec<(usize, String, Candidate)> = Vec::new();
    for p in partials {
        let body = goal.body.fill_hole(hole, &p.expr);
        let key = canonical_key(&body);
        if !seen.insert(key) {
            continue;
        }
        let ev = Evaluator::new(ctx, globals).with_fuel(budget.fuel).with_recursion(Recursion::Body {
            name: &goal.name,
            arity: goal.arity(),
            body: &body,
        });
        let per_row: Vec<Verdict> = rows.iter().map(|r| ev.example_satisfies(&ValueEnv::new(), &body, r)).collect();
        if per_row.contains(&Verdict::Contradicted) {
            continue;
        }
        let verdict = if !rows.is_empty() && per_row.iter().all(|v| *v == Verdict::Satisfied) {
            CandidateVerdict::Ok
        } else {
            CandidateVerdict::Unknown
        };
        out.push((
            body.size(),
            show_expr_inline(&body),
            Candidate {
                expr: p.expr,
                body,
                verdict,
                per_row,
            },
        ));
    }
    out.sort_by(|a, b| (a.2.verdict, a.0, &a.1).cmp(&(b.2.verdict, b.0, &b.1)));
    out.truncate(budget.max_candidates);
    out.into_iter().map(|(_, _, c)| c).collect()
}

/// Synthesizes a whole binding `name :: s` from examples alone.
pub fn synthesize_binding(
    prog: &Program,
    name: &str,
    s: &Scheme,
    examples: Option<TopExample>,
    options: OptionMap,
    budget: &SearchBudget,
) -> Result<Vec<Candidate>, Diagnostic> {
    let site =
        crate::typecheck::check_binding(&prog.ctx, s, &Expr::Hole(0)).map_err(|e| Diagnostic::new(ErrorCode::Type, 1, 1, e.message))?;
    let goal = Goal {
        name: name.to_string(),
        scheme: s.clone(),
        params: Vec::new(),
        body: Expr::Hole(0),
        examples,
        options,
        holes: site,
        loc: Default::default(),
    };
    let mut prog = prog.clone();
    prog.goals.push(goal.clone());
    let mut r = synthesize_goal(&prog, &goal, budget, &SynthOptions::default())?;
    Ok(r.pop().map(|h| h.candidates).unwrap_or_default())
}
