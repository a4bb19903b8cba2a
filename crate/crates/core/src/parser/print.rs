use std::fmt::Write;

use super::{BindingSrc, DataSrc, ExampleBlock, Item, OptionMap, SourceFile};
use crate::context::CtorSig;
use crate::pretty::{ctor_name, show_equality, show_expr, show_expr_inline, show_type};
use crate::syntax::Expr;
use crate::types::{Scheme, Type, LIST};

/// Renders a source file so that parsing the output yields the same file
/// (up to locations).
pub fn print_source(file: &SourceFile) -> String {
    let mut out = String::new();
    for (i, item) in file.items.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match item {
            Item::Data(d) => print_data(&mut out, d),
            Item::Sig(s) => writeln!(out, "{} :: {}", s.name, print_scheme(&s.scheme)).unwrap(),
            Item::Binding(b) => print_binding(&mut out, b),
            Item::Examples(b) => print_block(&mut out, b),
        }
    }
    out
}

/// Like `show_scheme`, but always explicit about a quantifier order that
/// differs from first occurrence.
pub fn print_scheme(s: &Scheme) -> String {
    let mut out = String::new();
    if s.quantified != Scheme::closed(s.body.clone()).quantified {
        write!(out, "forall {}. ", s.quantified.join(" ")).unwrap();
    }
    if !s.constraints.is_empty() {
        let parts: Vec<String> = s.constraints.iter().map(show_equality).collect();
        write!(out, "({}) => ", parts.join(", ")).unwrap();
    }
    out.push_str(&show_type(&s.body));
    out
}

fn atype(t: &Type) -> String {
    let s = show_type(t);
    match t {
        Type::Arrow(..) => format!("({s})"),
        Type::Data(h, args) if !args.is_empty() && h != LIST => format!("({s})"),
        _ => s,
    }
}

fn print_data(out: &mut String, d: &DataSrc) {
    write!(out, "data {}", d.name).unwrap();
    for p in &d.params {
        write!(out, " {p}").unwrap();
    }
    if d.gadt_syntax {
        out.push_str(" where\n");
        for k in &d.ctors {
            writeln!(out, "  {} :: {}", ctor_name(&k.name), gadt_sig(k)).unwrap();
        }
        return;
    }
    for (i, k) in d.ctors.iter().enumerate() {
        out.push_str(if i == 0 { " = " } else { " | " });
        out.push_str(&ctor_name(&k.name));
        for a in &k.arg_types {
            write!(out, " {}", atype(a)).unwrap();
        }
    }
    out.push('\n');
}

fn gadt_sig(k: &CtorSig) -> String {
    let mut out = String::new();
    if !k.bundled.is_empty() {
        let parts: Vec<String> = k.bundled.iter().map(show_equality).collect();
        write!(out, "({}) => ", parts.join(", ")).unwrap();
    }
    out.push_str(&show_type(&k.scheme().body));
    out
}

fn print_binding(out: &mut String, b: &BindingSrc) {
    out.push_str(&b.name);
    for p in &b.params {
        write!(out, " {p}").unwrap();
    }
    writeln!(out, " = {}", show_expr(&b.rhs)).unwrap();
}

fn print_block(out: &mut String, b: &ExampleBlock) {
    out.push_str("{@\n");
    if let Some(s) = &b.sig {
        writeln!(out, "  {} :: {}", b.name, print_scheme(s)).unwrap();
    }
    for r in &b.rows {
        write!(out, "  {}", r.name).unwrap();
        for i in &r.inputs {
            write!(out, " {}", sugared_atom(i)).unwrap();
        }
        writeln!(out, " = {}", sugared(&r.output)).unwrap();
    }
    if b.options != OptionMap::default() {
        out.push_str("@@\n");
        let o = &b.options;
        if let Some(ctx) = &o.ctx {
            let names: Vec<String> = ctx.iter().map(|n| ctor_name(n)).collect();
            writeln!(out, "  ctx = ({})", names.join(", ")).unwrap();
        }
        if let Some(n) = o.rec_arg {
            writeln!(out, "  recArg = {n}").unwrap();
        }
        if let Some(n) = o.depth {
            writeln!(out, "  depth = {n}").unwrap();
        }
        if let Some(n) = o.max_candidates {
            writeln!(out, "  maxCandidates = {n}").unwrap();
        }
    }
    out.push_str("@}\n");
}

fn list_items(e: &Expr) -> Option<Vec<&Expr>> {
    let mut items = Vec::new();
    let mut cur = e;
    loop {
        let (head, args) = cur.spine();
        match (head, args.as_slice()) {
            (Expr::Ctor(k), []) if k == "[]" => return Some(items),
            (Expr::Ctor(k), [x, xs]) if k == ":" => {
                items.push(*x);
                cur = xs;
            }
            _ => return None,
        }
    }
}

/// Example-side rendering: complete lists use `[..]` sugar.
pub fn sugared(e: &Expr) -> String {
    if let Some(items) = list_items(e) {
        let parts: Vec<String> = items.into_iter().map(sugared).collect();
        return format!("[{}]", parts.join(", "));
    }
    match e {
        Expr::App(..) => {
            let (head, args) = e.spine();
            if matches!(head, Expr::Ctor(_) | Expr::Var(_) | Expr::Const(_)) {
                let mut s = sugared(head);
                for a in args {
                    s.push(' ');
                    s.push_str(&sugared_atom(a));
                }
                s
            } else {
                show_expr_inline(e)
            }
        }
        _ => show_expr_inline(e),
    }
}

pub fn sugared_atom(e: &Expr) -> String {
    let s = sugared(e);
    match e {
        Expr::App(..) | Expr::Lam(..) | Expr::Case(..) if !s.starts_with('[') => format!("({s})"),
        _ => s,
    }
}
