#![allow(dead_code)]

pub mod gen;

use std::path::PathBuf;

use holeforge::parser::parse_expr;
use holeforge::program::{Goal, Program};
use holeforge::syntax::Expr;
use holeforge::synth::{synthesize_goal, Candidate, HoleResult, SearchBudget, SynthOptions};
use holeforge::types::{Equality, Subst, TyVar, Type, Uvar};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn load(name: &str) -> Program {
    let path = corpus_dir().join(format!("{name}.syn"));
    let src = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    Program::empty().load(&src).unwrap_or_else(|d| panic!("{name}: {d}"))
}

pub fn only_goal(p: &Program) -> &Goal {
    assert_eq!(p.goals.len(), 1);
    &p.goals[0]
}

pub fn run(p: &Program, opts: &SynthOptions) -> Vec<HoleResult> {
    synthesize_goal(p, only_goal(p), &SearchBudget::default(), opts).expect("synthesis")
}

pub fn candidates(name: &str) -> Vec<Candidate> {
    let p = load(name);
    let mut r = run(&p, &SynthOptions::default());
    assert_eq!(r.len(), 1);
    r.remove(0).candidates
}

pub fn expr(src: &str) -> Expr {
    parse_expr(src).unwrap_or_else(|d| panic!("{src}: {d}"))
}

/// Renames unification variables to 0, 1, .. in order of first occurrence
/// and orients the equality canonically.
pub fn canonical_equality(eq: &Equality) -> Equality {
    let orient = |a: &Type, b: &Type| {
        let mut seen: Vec<Uvar> = Vec::new();
        fn walk(t: &Type, seen: &mut Vec<Uvar>) {
            match t {
                Type::Uvar(u) if !seen.contains(u) => seen.push(*u),
                Type::Data(_, xs) => xs.iter().for_each(|x| walk(x, seen)),
                Type::Arrow(d, c) => {
                    walk(d, seen);
                    walk(c, seen);
                }
                _ => {}
            }
        }
        walk(a, &mut seen);
        walk(b, &mut seen);
        let s: Subst = seen
            .iter()
            .enumerate()
            .map(|(i, u)| (TyVar::Uvar(*u), Type::uvar(i as u32 + 1000)))
            .collect();
        (a.apply(&s), b.apply(&s))
    };
    let (lhs, rhs) = std::cmp::min(orient(&eq.lhs, &eq.rhs), orient(&eq.rhs, &eq.lhs));
    Equality { lhs, rhs }
}
