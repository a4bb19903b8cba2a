//! Elaboration of parsed source files: builds the typing context, checks
//! well-formedness and collects the goals to synthesize.

use std::collections::BTreeSet;

use crate::constraints::Solver;
use crate::context::{Context, ContextError, CtorSig, DataDecl};
use crate::eval::Globals;
use crate::parser::{self, Diagnostic, ErrorCode, ExampleBlock, Loc, OptionMap, SourceFile};
use crate::syntax::{Expr, MatchBranch};
use crate::typecheck::{check_binding, infer_binding, Checker, HoleSite, TypeError, TypeErrorKind};
use crate::types::{ConstraintSet, Scheme, Type, LIST};
use crate::value::{Example, ExampleError, TopExample, ValueKey};

/// A binding with holes, ready for synthesis.
#[derive(Debug, Clone)]
pub struct Goal {
    pub name: String,
    pub scheme: Scheme,
    pub params: Vec<String>,
    /// `\params -> rhs`
    pub body: Expr,
    pub examples: Option<TopExample>,
    pub options: OptionMap,
    pub holes: Vec<HoleSite>,
    pub loc: Loc,
}

impl Goal {
    pub fn arity(&self) -> usize {
        self.scheme.body.arity()
    }

    /// The context extended with this goal's polymorphic constants.
    pub fn context(&self, base: &Context) -> Context {
        let mut ctx = base.clone();
        if let Some(x) = &self.examples {
            for (c, a) in &x.constants {
                ctx.poly_consts.insert(c.clone(), a.clone());
            }
        }
        ctx
    }
}

#[derive(Debug, Clone)]
pub struct Program {
    pub ctx: Context,
    pub globals: Globals,
    pub goals: Vec<Goal>,
}

/// Int (opaque, literal constructors) and lists.
pub fn builtin_context() -> Context {
    let mut ctx = Context::new();
    ctx.add_datatype("Int", &[], Vec::new(), true).expect("builtin");
    let a = Type::rigid("a");
    let list = |name: &str, args: Vec<Type>| CtorSig {
        name: name.to_string(),
        quantified: vec!["a".to_string()],
        bundled: ConstraintSet::new(),
        arg_types: args,
        result_head: LIST.to_string(),
    };
    ctx.add_datatype(
        LIST,
        &["a".to_string()],
        vec![list("[]", Vec::new()), list(":", vec![a.clone(), Type::list(a)])],
        false,
    )
    .expect("builtin");
    ctx
}

impl Program {
    pub fn empty() -> Program {
        Program {
            ctx: builtin_context(),
            globals: Globals::default(),
            goals: Vec::new(),
        }
    }

    /// Parses and elaborates `src` on top of `self` (typically the empty
    /// program or the prelude).
    pub fn load(&self, src: &str) -> Result<Program, Diagnostic> {
        let file = parser::parse_source_file(src)?;
        self.elaborate(&file)
    }

    pub fn elaborate(&self, file: &SourceFile) -> Result<Program, Diagnostic> {
        let mut p = Program {
            ctx: self.ctx.clone(),
            globals: self.globals.clone(),
            goals: Vec::new(),
        };
        p.datatypes(file)?;
        p.signatures(file)?;
        p.literals(file)?;
        p.bindings(file)?;
        p.blocks(file)?;
        Ok(p)
    }

    pub fn goal(&self, name: &str) -> Option<&Goal> {
        self.goals.iter().find(|g| g.name == name)
    }

    fn datatypes(&mut self, file: &SourceFile) -> Result<(), Diagnostic> {
        for d in file.datatypes() {
            let err = |e: ContextError| ill_formed(&d.loc, e.to_string());
            if self.ctx.datatypes.contains_key(&d.name) {
                return Err(err(ContextError::DuplicateDatatype(d.name.clone())));
            }
            for (i, p) in d.params.iter().enumerate() {
                if d.params[..i].contains(p) {
                    return Err(err(ContextError::RepeatedTypeVar(d.name.clone())));
                }
            }
            self.ctx.datatypes.insert(
                d.name.clone(),
                DataDecl {
                    name: d.name.clone(),
                    arity: d.params.len(),
                    ctors: Vec::new(),
                    opaque: d.ctors.is_empty() && !d.gadt_syntax,
                },
            );
        }
        for d in file.datatypes() {
            for k in &d.ctors {
                self.ctx.add_ctor(k.clone()).map_err(|e| ill_formed(&d.loc, e.to_string()))?;
            }
        }
        Ok(())
    }

    fn signatures(&mut self, file: &SourceFile) -> Result<(), Diagnostic> {
        let mut seen = BTreeSet::new();
        for s in file.signatures() {
            if !seen.insert(s.name.clone()) {
                return Err(ill_formed(&s.loc, format!("duplicate signature for `{}`", s.name)));
            }
            self.ctx
                .add_var(&s.name, s.scheme.clone())
                .map_err(|e| ill_formed(&s.loc, e.to_string()))?;
        }
        for b in file.example_blocks() {
            let Some(sig) = &b.sig else { continue };
            match file.signature(&b.name) {
                Some(top) if !same_scheme(&top.scheme, sig) => {
                    return Err(ill_formed(
                        &b.loc,
                        format!("example block signature for `{}` differs from its declaration", b.name),
                    ))
                }
                Some(_) => {}
                None => {
                    if !seen.insert(b.name.clone()) {
                        return Err(ill_formed(&b.loc, format!("duplicate signature for `{}`", b.name)));
                    }
                    self.ctx
                        .add_var(&b.name, sig.clone())
                        .map_err(|e| ill_formed(&b.loc, e.to_string()))?;
                }
            }
        }
        Ok(())
    }

    fn literals(&mut self, file: &SourceFile) -> Result<(), Diagnostic> {
        let mut lits = BTreeSet::new();
        let mut collect = |e: &Expr| {
            e.walk(&mut |sub| {
                if let Expr::Ctor(k) = sub {
                    if k.chars().all(|c| c.is_ascii_digit()) {
                        lits.insert(k.clone());
                    }
                }
            })
        };
        for b in file.bindings() {
            collect(&b.rhs);
        }
        for blk in file.example_blocks() {
            for r in &blk.rows {
                r.inputs.iter().for_each(&mut collect);
                collect(&r.output);
            }
        }
        for l in lits {
            self.ctx
                .ensure_literal(&l)
                .map_err(|e| Diagnostic::new(ErrorCode::IllFormed, 1, 1, e.to_string()))?;
        }
        Ok(())
    }

    fn bindings(&mut self, file: &SourceFile) -> Result<(), Diagnostic> {
        let mut seen = BTreeSet::new();
        for b in file.bindings() {
            if !seen.insert(b.name.clone()) {
                return Err(ill_formed(&b.loc, format!("`{}` is defined twice", b.name)));
            }
            let body = b.body();
            let signed = self
                .ctx
                .vars
                .get(&b.name)
                .cloned()
                .filter(|_| file.signature(&b.name).is_some() || file.example_block(&b.name).is_some_and(|x| x.sig.is_some()));
            if b.rhs.has_holes() {
                let Some(scheme) = signed else {
                    return Err(Diagnostic::new(
                        ErrorCode::Type,
                        b.loc.line,
                        b.loc.col,
                        format!("`{}` has holes but no type signature", b.name),
                    ));
                };
                let holes = check_binding(&self.ctx, &scheme, &body).map_err(|e| type_error(&b.loc, e))?;
                self.goals.push(Goal {
                    name: b.name.clone(),
                    scheme,
                    params: b.params.clone(),
                    body,
                    examples: None,
                    options: OptionMap::default(),
                    holes,
                    loc: b.loc.clone(),
                });
                continue;
            }
            match signed {
                Some(scheme) => {
                    check_binding(&self.ctx, &scheme, &body).map_err(|e| type_error(&b.loc, e))?;
                }
                None => {
                    let scheme = infer_binding(&self.ctx, &b.name, &body).map_err(|e| type_error(&b.loc, e))?;
                    self.ctx.add_var(&b.name, scheme).map_err(|e| ill_formed(&b.loc, e.to_string()))?;
                }
            }
            self.globals.insert(b.name.clone(), body);
        }
        Ok(())
    }

    fn blocks(&mut self, file: &SourceFile) -> Result<(), Diagnostic> {
        let mut seen = BTreeSet::new();
        for blk in file.example_blocks() {
            if !seen.insert(blk.name.clone()) {
                return Err(bad_example(&blk.loc, format!("second example block for `{}`", blk.name)));
            }
            let scheme = match self.ctx.vars.get(&blk.name) {
                Some(s) => s.clone(),
                None => {
                    return Err(Diagnostic::new(
                        ErrorCode::Unbound,
                        blk.loc.line,
                        blk.loc.col,
                        format!("example block for unknown function `{}`", blk.name),
                    ))
                }
            };
            let top = if blk.rows.is_empty() {
                None
            } else {
                Some(self.top_example(blk, &scheme)?)
            };
            if let Some(n) = blk.options.rec_arg {
                if n >= scheme.body.arity() {
                    return Err(Diagnostic::new(
                        ErrorCode::UnknownOption,
                        blk.loc.line,
                        blk.loc.col,
                        format!("recArg {n} is out of range for `{}`", blk.name),
                    ));
                }
            }
            if let Some(names) = &blk.options.ctx {
                for n in names {
                    if !self.ctx.vars.contains_key(n) && self.ctx.ctor(n).is_none() {
                        return Err(Diagnostic::new(
                            ErrorCode::Unbound,
                            blk.loc.line,
                            blk.loc.col,
                            format!("ctx names unknown component `{n}`"),
                        ));
                    }
                }
            }
            if let Some(goal) = self.goals.iter_mut().find(|g| g.name == blk.name) {
                goal.examples = top;
                goal.options = blk.options.clone();
            } else if blk.options != OptionMap::default() && !self.globals.0.contains_key(&blk.name) {
                return Err(bad_example(&blk.loc, format!("`{}` has no definition to synthesize", blk.name)));
            }
        }
        Ok(())
    }

    fn top_example(&self, blk: &ExampleBlock, scheme: &Scheme) -> Result<TopExample, Diagnostic> {
        let mut constants: Vec<(String, String)> = Vec::new();
        let mut rows = Vec::new();
        let arity = scheme.body.arity();
        for r in &blk.rows {
            if r.inputs.len() != arity {
                return Err(bad_example(
                    &r.loc,
                    format!("`{}` takes {arity} argument(s), example gives {}", r.name, r.inputs.len()),
                ));
            }
            let mut inputs = Vec::new();
            for i in &r.inputs {
                inputs.push(constify(i, &scheme.quantified, &mut constants, &r.loc)?);
            }
            let out = constify(&r.output, &scheme.quantified, &mut constants, &r.loc)?;
            let out =
                to_example(&out).ok_or_else(|| bad_example(&r.loc, "example outputs must be built from constructors and constants"))?;
            let row = inputs.into_iter().rev().fold(out, |acc, i| Example::Io(ValueKey(i), Box::new(acc)));
            rows.push((row, r));
        }
        for (i, (row, r)) in rows.iter().enumerate() {
            let (ins, out) = row.uncurry();
            for (other, _) in &rows[..i] {
                let (ins2, out2) = other.uncurry();
                if ins == ins2 && out != out2 {
                    return Err(bad_example(&r.loc, "two examples give different outputs for the same inputs"));
                }
            }
        }
        let mut ctx = self.ctx.clone();
        for (c, a) in &constants {
            ctx.poly_consts.insert(c.clone(), a.clone());
        }
        let givens =
            Solver::with_givens(&scheme.constraints).map_err(|_| bad_example(&blk.loc, "the signature's constraints are inconsistent"))?;
        for (row, r) in &rows {
            let mut checker = Checker::new(&ctx);
            checker
                .check_example(row, &scheme.body, &givens)
                .map_err(|e| type_error(&r.loc, e))?;
        }
        let rows: Vec<Example> = rows.into_iter().map(|(x, _)| x).collect();
        TopExample::new(constants, rows).map_err(|e: ExampleError| bad_example(&blk.loc, e.to_string()))
    }
}

fn same_scheme(a: &Scheme, b: &Scheme) -> bool {
    a.body == b.body && a.constraints == b.constraints && {
        let (mut x, mut y) = (a.quantified.clone(), b.quantified.clone());
        x.sort();
        y.sort();
        x == y
    }
}

/// Free identifiers of an example row become polymorphic constants; they
/// must be a quantified variable followed by digits, such as `a1`.
fn constify(e: &Expr, quantified: &[String], consts: &mut Vec<(String, String)>, loc: &Loc) -> Result<Expr, Diagnostic> {
    fn go(e: &Expr, bound: &mut Vec<String>, q: &[String], consts: &mut Vec<(String, String)>, loc: &Loc) -> Result<Expr, Diagnostic> {
        Ok(match e {
            Expr::Var(x) if bound.contains(x) => e.clone(),
            Expr::Var(x) => {
                let digits = x.trim_start_matches(|c: char| !c.is_ascii_digit());
                let prefix = &x[..x.len() - digits.len()];
                let valid = !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) && q.iter().any(|v| v == prefix);
                if !valid {
                    return Err(bad_example(loc, format!("`{x}` is not a constant of a quantified type variable")));
                }
                if !consts.iter().any(|(c, _)| c == x) {
                    consts.push((x.clone(), prefix.to_string()));
                }
                Expr::Const(x.clone())
            }
            Expr::Lam(x, b) => {
                bound.push(x.clone());
                let b = go(b, bound, q, consts, loc)?;
                bound.pop();
                Expr::lam(x.clone(), b)
            }
            Expr::App(f, a) => Expr::app(go(f, bound, q, consts, loc)?, go(a, bound, q, consts, loc)?),
            Expr::Case(s, bs) => {
                let s = go(s, bound, q, consts, loc)?;
                let mut out = Vec::new();
                for b in bs {
                    let n = bound.len();
                    bound.extend(b.binders.iter().cloned());
                    let body = go(&b.body, bound, q, consts, loc)?;
                    bound.truncate(n);
                    out.push(MatchBranch { body, ..b.clone() });
                }
                Expr::case(s, out)
            }
            Expr::Hole(_) => return Err(bad_example(loc, "holes cannot appear in examples")),
            _ => e.clone(),
        })
    }
    go(e, &mut Vec::new(), quantified, consts, loc)
}

fn to_example(e: &Expr) -> Option<Example> {
    match e {
        Expr::Const(c) => Some(Example::Const(c.clone())),
        _ => {
            let (head, args) = e.spine();
            match head {
                Expr::Ctor(k) => Some(Example::Ctor(k.clone(), args.into_iter().map(to_example).collect::<Option<_>>()?)),
                _ => None,
            }
        }
    }
}

fn ill_formed(loc: &Loc, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(ErrorCode::IllFormed, loc.line, loc.col, msg)
}

fn bad_example(loc: &Loc, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(ErrorCode::BadExample, loc.line, loc.col, msg)
}

fn type_error(loc: &Loc, e: TypeError) -> Diagnostic {
    let code = match e.kind {
        TypeErrorKind::Mismatch => ErrorCode::Type,
        TypeErrorKind::Unbound => ErrorCode::Unbound,
        TypeErrorKind::NonExhaustive => ErrorCode::NonExhaustive,
    };
    Diagnostic::new(code, loc.line, loc.col, e.message)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prelude::PRELUDE;

    fn prelude() -> Program {
        Program::empty().load(PRELUDE).unwrap()
    }

    #[test]
    fn prelude_is_well_formed() {
        let p = prelude();
        assert!(p.ctx.vars.contains_key("map"));
        assert!(p.globals.0.contains_key("map"));
        assert!(!p.globals.0.contains_key("isEven"));
        assert!(p.ctx.ctor("Plus").unwrap().has_constraints());
    }

    #[test]
    fn goals_collect_examples_and_constants() {
        let src = "\
fromMaybe' :: a -> Maybe a -> a
fromMaybe' s m = _
{@
  fromMaybe' a1 Nothing = a1
  fromMaybe' a1 (Just a2) = a2
@}
";
        let p = prelude().load(src).unwrap();
        let g = p.goal("fromMaybe'").unwrap();
        let x = g.examples.as_ref().unwrap();
        assert_eq!(
            x.constants,
            vec![("a1".to_string(), "a".to_string()), ("a2".to_string(), "a".to_string())]
        );
        assert_eq!(x.rows.len(), 2);
        assert_eq!(g.holes.len(), 1);
        assert_eq!(g.holes[0].ty, Type::rigid("a"));
    }

    #[test]
    fn ill_typed_examples_are_rejected() {
        let src = "f :: a -> Maybe a\nf x = _\n{@\n  f a1 = Just True\n@}\n";
        let err = prelude().load(src).unwrap_err();
        assert_eq!(err.code, ErrorCode::Type);
        assert_eq!(err.line, 4);
    }

    #[test]
    fn unknown_example_names_are_rejected() {
        let src = "f :: a -> a\nf x = _\n{@\n  f b1 = b1\n@}\n";
        let err = prelude().load(src).unwrap_err();
        assert_eq!(err.code, ErrorCode::BadExample);
    }

    #[test]
    fn inconsistent_rows_are_rejected() {
        let src = "f :: a -> a -> a\nf x y = _\n{@\n  f a1 a2 = a1\n  f a1 a2 = a2\n@}\n";
        assert_eq!(prelude().load(src).unwrap_err().code, ErrorCode::BadExample);
    }

    #[test]
    fn ill_formed_declarations() {
        let err = Program::empty().load("data T = K Foo\n").unwrap_err();
        assert_eq!(err.code, ErrorCode::IllFormed);
        let err = Program::empty().load("data T a = K b\n").unwrap_err();
        assert_eq!(err.code, ErrorCode::IllFormed);
        let err = Program::empty().load("f x = _\n").unwrap_err();
        assert_eq!(err.code, ErrorCode::Type);
        let err = prelude().load("g :: Bool -> Bool\ng b = case b of\n  True -> False\n").unwrap_err();
        assert_eq!(err.code, ErrorCode::NonExhaustive);
    }

    #[test]
    fn unsigned_bindings_are_inferred() {
        let p = prelude().load("twice f x = f (f x)\n").unwrap();
        assert_eq!(crate::pretty::show_scheme(&p.ctx.vars["twice"]), "(t0 -> t0) -> t0 -> t0");
    }

    #[test]
    fn literals_are_int_constructors() {
        let p = prelude().load("z :: Exp Int\nz = Plus (Lit 1) (Lit 2)\n").unwrap();
        assert_eq!(p.ctx.ctor("2").unwrap().result_head, "Int");
    }
}
