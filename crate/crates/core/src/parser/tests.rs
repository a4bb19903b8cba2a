use super::*;
use crate::pretty::show_type;

const FROM_MAYBE: &str = "\
data Maybe a = Nothing | Just a

fromMaybe :: a -> Maybe a -> a
fromMaybe s m = _

{@
  fromMaybe a1 Nothing = a1
  fromMaybe a1 (Just a2) = a2
@}
";

#[test]
fn parses_goal_file() {
    let f = parse_source_file(FROM_MAYBE).unwrap();
    assert_eq!(f.items.len(), 4);
    let sig = f.signature("fromMaybe").unwrap();
    assert_eq!(show_type(&sig.scheme.body), "a -> Maybe a -> a");
    assert_eq!(sig.scheme.quantified, vec!["a".to_string()]);
    let goal = f.goals().next().unwrap();
    assert_eq!(goal.params, vec!["s".to_string(), "m".to_string()]);
    assert_eq!(goal.rhs, Expr::Hole(0));
    let block = f.example_block("fromMaybe").unwrap();
    assert_eq!(block.rows.len(), 2);
    assert_eq!(block.rows[1].inputs[1], Expr::app(Expr::ctor("Just"), Expr::var("a2")));
}

#[test]
fn gadt_result_indices_become_constraints() {
    let src = "data Exp a where\n  Lit :: a -> Exp a\n  Plus :: Exp Int -> Exp Int -> Exp Int\n";
    let f = parse_source_file(src).unwrap();
    let d = f.datatypes().next().unwrap();
    let plus = &d.ctors[1];
    assert_eq!(plus.quantified, vec!["a".to_string()]);
    assert!(plus
        .bundled
        .contains(&crate::types::Equality::new(Type::rigid("a"), Type::con("Int"))));
    let braces = "data Exp a where { Lit :: a -> Exp a; Plus :: (a ~ Int) => Exp Int -> Exp Int -> Exp a }";
    let g = parse_source_file(braces).unwrap();
    assert_eq!(g.datatypes().next().unwrap().ctors, d.ctors);
}

#[test]
fn case_layout_and_nesting() {
    let src = "f m n = case m of\n  Nothing -> n\n  Just x -> case n of\n    Nothing -> x\n    Just y -> y\ng = _\n";
    let f = parse_source_file(src).unwrap();
    let b = f.bindings().next().unwrap();
    match &b.rhs {
        Expr::Case(_, branches) => {
            assert_eq!(branches.len(), 2);
            assert!(matches!(branches[1].body, Expr::Case(_, ref inner) if inner.len() == 2));
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(f.bindings().count(), 2);
}

#[test]
fn list_sugar_and_cons() {
    let e = parse_expr("[x, y]").unwrap();
    let cons = parse_expr("x : y : []").unwrap();
    let prefix = parse_expr("(:) x ((:) y [])").unwrap();
    assert_eq!(e, cons);
    assert_eq!(e, prefix);
    assert_eq!(show_type(&parse_type("[a] -> (a -> b) -> [b]").unwrap()), "[a] -> (a -> b) -> [b]");
}

#[test]
fn holes_are_numbered_per_binding() {
    let f = parse_source_file("f x = g _ _h\ng y = _\n").unwrap();
    let bs: Vec<_> = f.bindings().collect();
    assert_eq!(bs[0].rhs.holes(), vec![0, 1]);
    assert_eq!(bs[1].rhs.holes(), vec![0]);
}

#[test]
fn options_are_validated() {
    let ok = parse_source_file("{@\n  f x = x\n@@\n  ctx = (map, Just)\n  recArg = 1\n@}\n").unwrap();
    let b = ok.example_blocks().next().unwrap();
    assert_eq!(b.options.ctx.as_deref(), Some(&["map".to_string(), "Just".to_string()][..]));
    assert_eq!(b.options.rec_arg, Some(1));
    let err = parse_source_file("{@\n  f x = x\n@@\n  speed = 3\n@}\n").unwrap_err();
    assert_eq!(err.code, ErrorCode::UnknownOption);
    assert_eq!((err.line, err.col), (4, 3));
}

#[test]
fn unbalanced_blocks_are_reported() {
    let err = parse_source_file("{@\n  f x = x\n").unwrap_err();
    assert_eq!(err.code, ErrorCode::UnbalancedBlock);
    assert_eq!((err.line, err.col), (1, 1));
    let err = parse_source_file("f x = x\n@}\n").unwrap_err();
    assert_eq!(err.code, ErrorCode::UnbalancedBlock);
}

#[test]
fn syntax_errors_carry_positions() {
    let err = parse_source_file("f x = (x\n").unwrap_err();
    assert_eq!(err.code, ErrorCode::Syntax);
    assert_eq!(err.line, 1);
    assert_eq!(err.render("a.syn"), format!("a.syn:1:{}: {} [E002]", err.col, err.message));
}

#[test]
fn rows_parse_standalone() {
    let r = parse_example_row("stutter [a1, a2] = [a1, a1, a2, a2]").unwrap();
    assert_eq!(r.name, "stutter");
    assert_eq!(r.inputs.len(), 1);
    assert_eq!(sugared(&r.output), "[a1, a1, a2, a2]");
}

#[test]
fn printed_source_reparses() {
    let src = "\
data List a = Nil | Cons a (List a)
data Exp a where
  Lit :: a -> Exp a
  If :: Exp Bool -> Exp a -> Exp a -> Exp a

map :: (a -> b) -> [a] -> [b]

f :: forall b a. a -> b -> a
f x y = case x of
  Nil -> \\z -> g (case y of { A -> z; B -> _ }) _
  Cons h t -> h : t

{@
  f :: forall b a. a -> b -> a
  f a1 [Just b1] = a1
@@
  depth = 2
  maxCandidates = 5
@}
";
    let f = parse_source_file(src).unwrap();
    let printed = print_source(&f);
    let g = parse_source_file(&printed).unwrap();
    assert_eq!(strip(&f), strip(&g), "{printed}");
    assert_eq!(print_source(&g), printed);
}

/// Drops locations so files can be compared structurally.
pub(super) fn strip(f: &SourceFile) -> SourceFile {
    let zero = || Loc { line: 0, col: 0 };
    SourceFile {
        items: f
            .items
            .iter()
            .cloned()
            .map(|i| match i {
                Item::Data(d) => Item::Data(DataSrc { loc: zero(), ..d }),
                Item::Sig(s) => Item::Sig(SigSrc { loc: zero(), ..s }),
                Item::Binding(b) => Item::Binding(BindingSrc { loc: zero(), ..b }),
                Item::Examples(b) => Item::Examples(ExampleBlock {
                    loc: zero(),
                    rows: b.rows.into_iter().map(|r| RowSrc { loc: zero(), ..r }).collect(),
                    ..b
                }),
            })
            .collect(),
    }
}

mod roundtrip {
    use super::*;
    use proptest::prelude::*;

    fn arb_type() -> impl Strategy<Value = Type> {
        let leaf = prop_oneof![
            prop::sample::select(vec!["a", "b"]).prop_map(Type::rigid),
            prop::sample::select(vec!["Int", "Bool"]).prop_map(Type::con),
        ];
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::arrow(a, b)),
                inner.clone().prop_map(Type::list),
                inner.prop_map(|a| Type::data("Maybe", vec![a])),
            ]
        })
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            prop::sample::select(vec!["x", "y", "g"]).prop_map(Expr::var),
            prop::sample::select(vec!["Nothing", "Just", ":", "[]", "True"]).prop_map(Expr::ctor),
            Just(Expr::Hole(0)),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(f, a)| Expr::app(f, a)),
                inner.clone().prop_map(|b| Expr::lam("z", b)),
                (inner.clone(), inner.clone(), inner).prop_map(|(s, n, j)| Expr::case(
                    s,
                    vec![
                        MatchBranch {
                            ctor: "Nothing".into(),
                            binders: vec![],
                            body: n
                        },
                        MatchBranch {
                            ctor: "Just".into(),
                            binders: vec!["w".into()],
                            body: j
                        },
                    ]
                )),
            ]
        })
    }

    fn renumber(e: &Expr) -> Expr {
        let mut next = 0;
        fn go(e: &Expr, next: &mut u32) -> Expr {
            match e {
                Expr::Hole(_) => {
                    *next += 1;
                    Expr::Hole(*next - 1)
                }
                Expr::Lam(x, b) => Expr::lam(x.clone(), go(b, next)),
                Expr::App(f, a) => {
                    let f = go(f, next);
                    Expr::app(f, go(a, next))
                }
                Expr::Case(s, bs) => {
                    let s = go(s, next);
                    Expr::case(
                        s,
                        bs.iter()
                            .map(|b| MatchBranch {
                                body: go(&b.body, next),
                                ..b.clone()
                            })
                            .collect(),
                    )
                }
                other => other.clone(),
            }
        }
        go(e, &mut next)
    }

    proptest! {
        #[test]
        fn types_round_trip(t in arb_type()) {
            prop_assert_eq!(parse_type(&show_type(&t)).unwrap(), t);
        }

        #[test]
        fn bindings_round_trip(e in arb_expr()) {
            let e = renumber(&e);
            let file = SourceFile { items: vec![Item::Binding(BindingSrc {
                name: "f".into(),
                params: vec!["x".into()],
                rhs: e,
                loc: Loc { line: 0, col: 0 },
            })]};
            let printed = print_source(&file);
            let back = parse_source_file(&printed).map_err(|d| TestCaseError::fail(format!("{d}\n{printed}")))?;
            prop_assert_eq!(strip(&back), file, "{}", printed);
        }

        #[test]
        fn inline_expressions_round_trip(e in arb_expr()) {
            let e = renumber(&e);
            let printed = crate::pretty::show_expr_inline(&e);
            prop_assert_eq!(parse_expr(&printed).unwrap(), e);
        }
    }
}
