//! Canonical rendering of types, terms, values and examples. All CLI output
//! and golden files go through these functions.

use std::fmt::Write;

use crate::syntax::{Expr, MatchBranch};
use crate::types::{ConstraintSet, Equality, Scheme, Type, LIST};
use crate::value::{Example, Value};

pub fn ctor_name(k: &str) -> String {
    if k == ":" {
        "(:)".to_string()
    } else {
        k.to_string()
    }
}

pub fn show_type(t: &Type) -> String {
    let mut s = String::new();
    write_type(&mut s, t, 0);
    s
}

// prec 0: top, 1: left of arrow, 2: datatype argument
fn write_type(out: &mut String, t: &Type, prec: u8) {
    match t {
        Type::Uvar(v) => write!(out, "{v}").unwrap(),
        Type::Rigid(a) => out.push_str(a),
        Type::Data(h, args) if h == LIST && args.len() == 1 => {
            out.push('[');
            write_type(out, &args[0], 0);
            out.push(']');
        }
        Type::Data(h, args) if args.is_empty() => out.push_str(h),
        Type::Data(h, args) => {
            if prec >= 2 {
                out.push('(');
            }
            out.push_str(h);
            for a in args {
                out.push(' ');
                write_type(out, a, 2);
            }
            if prec >= 2 {
                out.push(')');
            }
        }
        Type::Arrow(d, c) => {
            if prec >= 1 {
                out.push('(');
            }
            write_type(out, d, 1);
            out.push_str(" -> ");
            write_type(out, c, 0);
            if prec >= 1 {
                out.push(')');
            }
        }
    }
}

pub fn show_equality(eq: &Equality) -> String {
    format!("{} ~ {}", show_type(&eq.lhs), show_type(&eq.rhs))
}

pub fn show_constraints(c: &ConstraintSet) -> String {
    let parts: Vec<String> = c.iter().map(show_equality).collect();
    format!("{{{}}}", parts.join(", "))
}

/// `a -> Maybe a -> a`, with an explicit `forall` only when some quantified
/// variable does not occur in the body, and a context when constrained.
pub fn show_scheme(s: &Scheme) -> String {
    let mut out = String::new();
    let body_rigids = s.body.rigids();
    if s.quantified.iter().any(|q| !body_rigids.contains(q)) {
        write!(out, "forall {}. ", s.quantified.join(" ")).unwrap();
    }
    if !s.constraints.is_empty() {
        let parts: Vec<String> = s.constraints.iter().map(show_equality).collect();
        write!(out, "({}) => ", parts.join(", ")).unwrap();
    }
    out.push_str(&show_type(&s.body));
    out
}

/// Multi-line rendering with case branches one per line.
pub fn show_expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e, 0, Pos::Tail);
    s
}

/// Single-line rendering: cases use `{ ..; .. }`.
pub fn show_expr_inline(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e, 0, Pos::Inline);
    s
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pos {
    /// Nothing follows on the same line; cases may use layout.
    Tail,
    /// Head of an application.
    Head,
    /// Argument of an application.
    Arg,
    /// Everything rendered on one line.
    Inline,
}

fn write_expr(out: &mut String, e: &Expr, indent: usize, pos: Pos) {
    match e {
        Expr::Const(c) | Expr::Var(c) => out.push_str(c),
        Expr::Ctor(k) => out.push_str(&ctor_name(k)),
        Expr::Hole(_) => out.push('_'),
        Expr::Lam(x, body) => {
            let paren = matches!(pos, Pos::Head | Pos::Arg);
            if paren {
                out.push('(');
            }
            write!(out, "\\{x} -> ").unwrap();
            let inner = if paren || pos == Pos::Inline { Pos::Inline } else { Pos::Tail };
            write_expr(out, body, indent, inner);
            if paren {
                out.push(')');
            }
        }
        Expr::App(f, a) => {
            let paren = pos == Pos::Arg;
            if paren {
                out.push('(');
            }
            write_expr(out, f, indent, Pos::Head);
            out.push(' ');
            write_arg(out, a, indent);
            if paren {
                out.push(')');
            }
        }
        Expr::Case(s, branches) => {
            if pos == Pos::Tail {
                out.push_str("case ");
                write_expr(out, s, indent, Pos::Inline);
                out.push_str(" of");
                for b in branches {
                    out.push('\n');
                    out.push_str(&" ".repeat(indent + 2));
                    write_pattern(out, b);
                    out.push_str(" -> ");
                    write_expr(out, &b.body, indent + 2, Pos::Tail);
                }
            } else {
                let paren = matches!(pos, Pos::Head | Pos::Arg);
                if paren {
                    out.push('(');
                }
                out.push_str("case ");
                write_expr(out, s, indent, Pos::Inline);
                out.push_str(" of { ");
                for (i, b) in branches.iter().enumerate() {
                    if i > 0 {
                        out.push_str("; ");
                    }
                    write_pattern(out, b);
                    out.push_str(" -> ");
                    write_expr(out, &b.body, indent, Pos::Inline);
                }
                out.push_str(" }");
                if paren {
                    out.push(')');
                }
            }
        }
    }
}

fn write_arg(out: &mut String, a: &Expr, indent: usize) {
    match a {
        Expr::App(..) | Expr::Lam(..) | Expr::Case(..) => write_expr(out, a, indent, Pos::Arg),
        _ => write_expr(out, a, indent, Pos::Inline),
    }
}

fn write_pattern(out: &mut String, b: &MatchBranch) {
    out.push_str(&ctor_name(&b.ctor));
    for x in &b.binders {
        out.push(' ');
        out.push_str(x);
    }
}

/// Complete lists as `[x, y]`; other constructor spines in prefix form.
pub fn show_value(v: &Value) -> String {
    let mut s = String::new();
    write_value(&mut s, v, false);
    s
}

fn list_items(v: &Value) -> Option<Vec<&Value>> {
    let mut items = Vec::new();
    let mut cur = v;
    loop {
        match cur {
            Value::Ctor(k, args) if k == "[]" && args.is_empty() => return Some(items),
            Value::Ctor(k, args) if k == ":" && args.len() == 2 => {
                items.push(&args[0]);
                cur = &args[1];
            }
            _ => return None,
        }
    }
}

fn write_value(out: &mut String, v: &Value, arg: bool) {
    match v {
        Value::Const(c) => out.push_str(c),
        Value::Ctor(k, args) => {
            if let Some(items) = list_items(v) {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, item, false);
                }
                out.push(']');
            } else if args.is_empty() {
                out.push_str(&ctor_name(k));
            } else {
                if arg {
                    out.push('(');
                }
                out.push_str(&ctor_name(k));
                for a in args {
                    out.push(' ');
                    write_value(out, a, true);
                }
                if arg {
                    out.push(')');
                }
            }
        }
        Value::Closure { binder, body, .. } => {
            let lam = Expr::lam(binder.clone(), body.as_ref().clone());
            write_expr(out, &lam, 0, if arg { Pos::Arg } else { Pos::Inline });
        }
        Value::Stuck => out.push('?'),
        Value::Recursive { name, args } => {
            if arg && !args.is_empty() {
                out.push('(');
            }
            out.push_str(name);
            for a in args {
                out.push(' ');
                write_value(out, a, true);
            }
            if arg && !args.is_empty() {
                out.push(')');
            }
        }
    }
}

/// Renders an expression that denotes a value (example inputs) with list
/// sugar.
pub fn show_value_expr(e: &Expr) -> String {
    match expr_to_value(e) {
        Some(v) => show_value(&v),
        None => show_expr_inline(e),
    }
}

fn expr_to_value(e: &Expr) -> Option<Value> {
    match e {
        Expr::Const(c) => Some(Value::Const(c.clone())),
        _ => {
            let (head, args) = e.spine();
            match head {
                Expr::Ctor(k) => Some(Value::Ctor(k.clone(), args.into_iter().map(expr_to_value).collect::<Option<_>>()?)),
                _ => None,
            }
        }
    }
}

pub fn show_example(x: &Example) -> String {
    let mut s = String::new();
    write_example(&mut s, x, false);
    s
}

fn write_example(out: &mut String, x: &Example, arg: bool) {
    match x {
        Example::Io(input, output) => {
            if arg {
                out.push('(');
            }
            let shown = show_value_expr(&input.0);
            let needs_paren = shown.contains(' ') && !shown.starts_with('[') && !shown.starts_with('(');
            if needs_paren {
                write!(out, "({shown})").unwrap();
            } else {
                out.push_str(&shown);
            }
            out.push_str(" => ");
            write_example(out, output, false);
            if arg {
                out.push(')');
            }
        }
        other => match other.to_value() {
            Some(v) => write_value(out, &v, arg),
            None => unreachable!("non-IO examples are first order"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::MatchBranch;

    #[test]
    fn arrows_are_right_associative() {
        let t = Type::arrows(
            [Type::arrow(Type::rigid("a"), Type::rigid("b")), Type::list(Type::rigid("a"))],
            Type::list(Type::rigid("b")),
        );
        assert_eq!(show_type(&t), "(a -> b) -> [a] -> [b]");
        let m = Type::data("Maybe", vec![Type::data("Maybe", vec![Type::rigid("a")])]);
        assert_eq!(show_type(&m), "Maybe (Maybe a)");
        assert_eq!(show_type(&Type::uvar(3)), "?3");
    }

    #[test]
    fn case_branches_one_per_line() {
        let e = Expr::case(
            Expr::var("m1"),
            vec![
                MatchBranch {
                    ctor: "Nothing".into(),
                    binders: vec![],
                    body: Expr::var("s1"),
                },
                MatchBranch {
                    ctor: "Just".into(),
                    binders: vec!["a1".into()],
                    body: Expr::var("a1"),
                },
            ],
        );
        assert_eq!(show_expr(&e), "case m1 of\n  Nothing -> s1\n  Just a1 -> a1");
        assert_eq!(show_expr_inline(&e), "case m1 of { Nothing -> s1; Just a1 -> a1 }");
    }

    #[test]
    fn application_is_left_associative() {
        let e = Expr::apps(
            Expr::ctor(":"),
            [
                Expr::var("a1"),
                Expr::apps(Expr::ctor(":"), [Expr::var("a1"), Expr::app(Expr::var("stutter"), Expr::var("l2"))]),
            ],
        );
        assert_eq!(show_expr(&e), "(:) a1 ((:) a1 (stutter l2))");
    }

    #[test]
    fn lists_use_sugar_in_values() {
        let v = Value::ctor(
            ":",
            vec![
                Value::constant("a1"),
                Value::ctor(":", vec![Value::constant("a2"), Value::ctor("[]", vec![])]),
            ],
        );
        assert_eq!(show_value(&v), "[a1, a2]");
    }
}
