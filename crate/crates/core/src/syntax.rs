//! Terms of the object language.

use std::collections::BTreeSet;

pub type HoleId = u32;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    /// A polymorphic example constant `c`.
    Const(String),
    Var(String),
    Ctor(String),
    Lam(String, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    Case(Box<Expr>, Vec<MatchBranch>),
    Hole(HoleId),
}

/// `K x1 .. xk -> body`
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatchBranch {
    pub ctor: String,
    pub binders: Vec<String>,
    pub body: Expr,
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn ctor(name: impl Into<String>) -> Expr {
        Expr::Ctor(name.into())
    }

    pub fn lam(binder: impl Into<String>, body: Expr) -> Expr {
        Expr::Lam(binder.into(), Box::new(body))
    }

    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(Box::new(f), Box::new(a))
    }

    pub fn apps(head: Expr, args: impl IntoIterator<Item = Expr>) -> Expr {
        args.into_iter().fold(head, Expr::app)
    }

    pub fn case(scrutinee: Expr, branches: Vec<MatchBranch>) -> Expr {
        Expr::Case(Box::new(scrutinee), branches)
    }

    /// Nested lambdas over `binders`.
    pub fn lams(binders: impl IntoIterator<Item = String>, body: Expr) -> Expr {
        let binders: Vec<String> = binders.into_iter().collect();
        binders.into_iter().rev().fold(body, |acc, b| Expr::lam(b, acc))
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Expr, Vec<&Expr>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Expr::App(f, a) = cur {
            args.push(a.as_ref());
            cur = f.as_ref();
        }
        args.reverse();
        (cur, args)
    }

    /// Number of AST nodes; a match branch counts as one node plus its body.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) | Expr::Ctor(_) | Expr::Hole(_) => 1,
            Expr::Lam(_, b) => 1 + b.size(),
            Expr::App(f, a) => 1 + f.size() + a.size(),
            Expr::Case(s, bs) => 1 + s.size() + bs.iter().map(|b| 1 + b.body.size()).sum::<usize>(),
        }
    }

    /// Nesting depth of applications.
    pub fn app_depth(&self) -> usize {
        match self {
            Expr::App(f, a) => 1 + f.app_depth().max(a.app_depth()),
            Expr::Lam(_, b) => b.app_depth(),
            Expr::Case(s, bs) => bs
                .iter()
                .map(|b| b.body.app_depth())
                .chain(std::iter::once(s.app_depth()))
                .max()
                .unwrap_or(0),
            _ => 0,
        }
    }

    pub fn holes(&self) -> Vec<HoleId> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let Expr::Hole(h) = e {
                out.push(*h);
            }
        });
        out
    }

    pub fn has_holes(&self) -> bool {
        !self.holes().is_empty()
    }

    /// Pre-order traversal.
    pub fn walk(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Lam(_, b) => b.walk(f),
            Expr::App(g, a) => {
                g.walk(f);
                a.walk(f);
            }
            Expr::Case(s, bs) => {
                s.walk(f);
                for b in bs {
                    b.body.walk(f);
                }
            }
            _ => {}
        }
    }

    /// Replaces hole `id` by `fill`.
    pub fn fill_hole(&self, id: HoleId, fill: &Expr) -> Expr {
        match self {
            Expr::Hole(h) if *h == id => fill.clone(),
            Expr::Lam(x, b) => Expr::lam(x.clone(), b.fill_hole(id, fill)),
            Expr::App(g, a) => Expr::app(g.fill_hole(id, fill), a.fill_hole(id, fill)),
            Expr::Case(s, bs) => Expr::case(
                s.fill_hole(id, fill),
                bs.iter()
                    .map(|b| MatchBranch {
                        ctor: b.ctor.clone(),
                        binders: b.binders.clone(),
                        body: b.body.fill_hole(id, fill),
                    })
                    .collect(),
            ),
            _ => self.clone(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(e: &Expr, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match e {
                Expr::Var(x) => {
                    if !bound.contains(x) {
                        out.insert(x.clone());
                    }
                }
                Expr::Lam(x, b) => {
                    bound.push(x.clone());
                    go(b, bound, out);
                    bound.pop();
                }
                Expr::App(f, a) => {
                    go(f, bound, out);
                    go(a, bound, out);
                }
                Expr::Case(s, bs) => {
                    go(s, bound, out);
                    for b in bs {
                        let n = bound.len();
                        bound.extend(b.binders.iter().cloned());
                        go(&b.body, bound, out);
                        bound.truncate(n);
                    }
                }
                _ => {}
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// α-canonical form: bound variables renamed `b0, b1, ...` in binding
    /// order; free variables untouched.
    pub fn alpha_canonical(&self) -> Expr {
        fn go(e: &Expr, scope: &mut Vec<(String, String)>, next: &mut usize) -> Expr {
            match e {
                Expr::Var(x) => match scope.iter().rev().find(|(from, _)| from == x) {
                    Some((_, to)) => Expr::Var(to.clone()),
                    None => e.clone(),
                },
                Expr::Lam(x, b) => {
                    let fresh = format!("b{next}");
                    *next += 1;
                    scope.push((x.clone(), fresh.clone()));
                    let body = go(b, scope, next);
                    scope.pop();
                    Expr::lam(fresh, body)
                }
                Expr::App(f, a) => {
                    let f = go(f, scope, next);
                    Expr::app(f, go(a, scope, next))
                }
                Expr::Case(s, bs) => {
                    let s = go(s, scope, next);
                    let bs = bs
                        .iter()
                        .map(|b| {
                            let n = scope.len();
                            let binders: Vec<String> = b
                                .binders
                                .iter()
                                .map(|x| {
                                    let fresh = format!("b{next}");
                                    *next += 1;
                                    scope.push((x.clone(), fresh.clone()));
                                    fresh
                                })
                                .collect();
                            let body = go(&b.body, scope, next);
                            scope.truncate(n);
                            MatchBranch {
                                ctor: b.ctor.clone(),
                                binders,
                                body,
                            }
                        })
                        .collect();
                    Expr::case(s, bs)
                }
                _ => e.clone(),
            }
        }
        go(self, &mut Vec::new(), &mut 0)
    }

    pub fn alpha_eq(&self, other: &Expr) -> bool {
        self.alpha_canonical() == other.alpha_canonical()
    }
}

/// A top-level binding `name = body`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub name: String,
    pub body: Expr,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_equivalence_renames_binders_only() {
        let a = Expr::lam("x", Expr::app(Expr::var("f"), Expr::var("x")));
        let b = Expr::lam("y", Expr::app(Expr::var("f"), Expr::var("y")));
        let c = Expr::lam("y", Expr::app(Expr::var("g"), Expr::var("y")));
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&c));
    }

    #[test]
    fn alpha_canonical_respects_shadowing() {
        let e = Expr::lam("x", Expr::lam("x", Expr::var("x")));
        let k = Expr::lam("a", Expr::lam("b", Expr::var("a")));
        assert!(!e.alpha_eq(&k));
        assert!(e.alpha_eq(&Expr::lam("p", Expr::lam("q", Expr::var("q")))));
    }

    #[test]
    fn spine_and_sizes() {
        let e = Expr::apps(Expr::var("map"), [Expr::var("isEven"), Expr::var("l")]);
        let (h, args) = e.spine();
        assert_eq!(h, &Expr::var("map"));
        assert_eq!(args.len(), 2);
        assert_eq!(e.size(), 5);
        assert_eq!(e.app_depth(), 2);
    }
}
