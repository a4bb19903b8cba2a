//! Unification, consistency, entailment and scheme instantiation.
//!
//! Two solving modes exist. Plain [`unify`] is textbook first-order
//! unification in which every variable, rigid or not, may be bound; it is
//! the meaning of `unify(C)` for an arbitrary constraint set and is what
//! local (GADT) assumptions are solved with. [`Solver`] layers *wanted*
//! constraints on top of such assumptions: in wanted constraints rigid
//! variables are constants, so a goal `a` can never be instantiated to
//! `Maybe β` by generation unless an assumption says so.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::pretty::show_equality;
use crate::types::{ConstraintSet, Equality, FreshSupply, Scheme, Subst, TyVar, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("cannot unify {}", show_equality(.0))]
    Clash(Equality),
    #[error("occurs check failed: {}", show_equality(.0))]
    Occurs(Equality),
}

impl UnifyError {
    pub fn equality(&self) -> &Equality {
        match self {
            UnifyError::Clash(e) | UnifyError::Occurs(e) => e,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Every variable may be bound.
    Flexible,
    /// Only unification variables may be bound.
    RigidConstants,
}

fn bind_var(s: &mut Subst, var: TyVar, t: Type, orig: &Equality) -> Result<(), UnifyError> {
    if t == var.to_type() {
        return Ok(());
    }
    if t.occurs(&var) {
        return Err(UnifyError::Occurs(orig.clone()));
    }
    s.bind(var, t);
    Ok(())
}

fn unify_into(s: &mut Subst, a: &Type, b: &Type, mode: Mode, orig: &Equality) -> Result<(), UnifyError> {
    let a = a.apply(s);
    let b = b.apply(s);
    if a == b {
        return Ok(());
    }
    match (&a, &b) {
        (Type::Uvar(x), Type::Uvar(y)) => {
            // the smaller id represents the class
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            bind_var(s, TyVar::Uvar(*hi), Type::Uvar(*lo), orig)
        }
        (Type::Uvar(x), t) | (t, Type::Uvar(x)) => bind_var(s, TyVar::Uvar(*x), t.clone(), orig),
        (Type::Rigid(x), Type::Rigid(y)) if mode == Mode::Flexible => {
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            bind_var(s, TyVar::Rigid(hi.clone()), Type::Rigid(lo.clone()), orig)
        }
        (Type::Rigid(x), t) | (t, Type::Rigid(x)) if mode == Mode::Flexible => bind_var(s, TyVar::Rigid(x.clone()), t.clone(), orig),
        (Type::Data(h1, xs), Type::Data(h2, ys)) if h1 == h2 && xs.len() == ys.len() => {
            for (x, y) in xs.iter().zip(ys) {
                unify_into(s, x, y, mode, orig)?;
            }
            Ok(())
        }
        (Type::Arrow(d1, c1), Type::Arrow(d2, c2)) => {
            unify_into(s, d1, d2, mode, orig)?;
            unify_into(s, c1, c2, mode, orig)
        }
        _ => Err(UnifyError::Clash(orig.clone())),
    }
}

/// Most general unifier of `c`, or the first equality that cannot be
/// satisfied.
pub fn unify(c: &ConstraintSet) -> Result<Subst, UnifyError> {
    let mut s = Subst::new();
    for eq in c.iter() {
        unify_into(&mut s, &eq.lhs, &eq.rhs, Mode::Flexible, eq)?;
    }
    Ok(s)
}

pub fn consistent(c: &ConstraintSet) -> bool {
    unify(c).is_ok()
}

/// `C ⊨ a ~ b`. Panics when `c` is inconsistent.
pub fn entails(c: &ConstraintSet, a: &Type, b: &Type) -> bool {
    let theta = unify(c).expect("entailment queried under inconsistent constraints");
    a.apply(&theta) == b.apply(&theta)
}

/// The most resolved form of `t` under `c`. Panics when `c` is inconsistent.
pub fn solve_for(c: &ConstraintSet, t: &Type) -> Type {
    let theta = unify(c).expect("solveFor queried under inconsistent constraints");
    t.apply(&theta)
}

/// Replaces each quantified variable with a fresh unification variable.
pub fn instantiate(s: &Scheme, supply: &mut FreshSupply) -> (Type, ConstraintSet, Subst) {
    let theta: Subst = s
        .quantified
        .iter()
        .map(|a| (TyVar::Rigid(a.clone()), supply.fresh_type()))
        .collect();
    (s.body.apply(&theta), s.constraints.apply(&theta), theta)
}

/// Assumptions plus wanted constraints, kept in solved form. Every value
/// of this type is consistent; extension returns a new value or an error.
#[derive(Debug, Clone, Default)]
pub struct Solver {
    given: Arc<ConstraintSet>,
    wanted: Arc<ConstraintSet>,
    subst: Arc<Subst>,
}

impl Solver {
    pub fn new() -> Solver {
        Solver::default()
    }

    pub fn with_givens(given: &ConstraintSet) -> Result<Solver, UnifyError> {
        Solver::new().assume(given)
    }

    /// Adds local assumptions. Rigid variables in assumptions may be
    /// bound; wanted constraints are re-solved on top.
    pub fn assume(&self, extra: &ConstraintSet) -> Result<Solver, UnifyError> {
        let given = self.given.union(extra);
        let mut subst = unify(&given)?;
        for eq in self.wanted.iter() {
            unify_into(&mut subst, &eq.lhs, &eq.rhs, Mode::RigidConstants, eq)?;
        }
        Ok(Solver {
            given: Arc::new(given),
            wanted: self.wanted.clone(),
            subst: Arc::new(subst),
        })
    }

    /// Adds the wanted equality `a ~ b`.
    pub fn want(&self, a: &Type, b: &Type) -> Result<Solver, UnifyError> {
        let mut next = self.clone();
        next.want_mut(a, b)?;
        Ok(next)
    }

    pub fn want_mut(&mut self, a: &Type, b: &Type) -> Result<(), UnifyError> {
        let eq = Equality::new(a.clone(), b.clone());
        if self.wanted.contains(&eq) {
            return Ok(());
        }
        // Both sides are resolved, so the new bindings never touch the
        // domain of the current substitution and compose with it directly.
        let mut delta = Subst::new();
        unify_into(&mut delta, &self.resolve(a), &self.resolve(b), Mode::RigidConstants, &eq)?;
        if !delta.is_empty() {
            self.subst = Arc::new(self.subst.then(&delta));
        }
        Arc::make_mut(&mut self.wanted).insert_eq(eq);
        Ok(())
    }

    pub fn want_all(&self, c: &ConstraintSet) -> Result<Solver, UnifyError> {
        let mut next = self.clone();
        for eq in c.iter() {
            next.want_mut(&eq.lhs, &eq.rhs)?;
        }
        Ok(next)
    }

    pub fn resolve(&self, t: &Type) -> Type {
        t.apply(&self.subst)
    }

    pub fn entails(&self, a: &Type, b: &Type) -> bool {
        self.resolve(a) == self.resolve(b)
    }

    pub fn entails_all(&self, c: &ConstraintSet) -> bool {
        c.iter().all(|eq| self.entails(&eq.lhs, &eq.rhs))
    }

    pub fn givens(&self) -> &ConstraintSet {
        &self.given
    }

    pub fn wanted(&self) -> &ConstraintSet {
        &self.wanted
    }

    /// Every constraint recorded so far.
    pub fn constraints(&self) -> ConstraintSet {
        self.given.union(&self.wanted)
    }

    pub fn subst(&self) -> &Subst {
        &self.subst
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::pretty::show_constraints(&self.constraints()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Uvar;

    fn int() -> Type {
        Type::con("Int")
    }
    fn boolean() -> Type {
        Type::con("Bool")
    }
    fn u(i: u32) -> Type {
        Type::uvar(i)
    }

    /// α2 → α1 → [Bool] ~ (γ1 → γ2) → [γ1] → [γ2], γ1 → γ2 ~ Int → Bool,
    /// α1 ~ [Int] with α1=1, α2=2, γ1=11, γ2=12.
    pub(crate) fn map_constraints() -> ConstraintSet {
        [
            (
                Type::arrows([u(2), u(1)], Type::list(boolean())),
                Type::arrows([Type::arrow(u(11), u(12)), Type::list(u(11))], Type::list(u(12))),
            ),
            (Type::arrow(u(11), u(12)), Type::arrow(int(), boolean())),
            (u(1), Type::list(int())),
        ]
        .into_iter()
        .collect()
    }

    #[test]
    fn empty_set_has_empty_unifier() {
        assert!(unify(&ConstraintSet::new()).unwrap().is_empty());
        assert!(consistent(&ConstraintSet::new()));
    }

    #[test]
    fn int_bool_is_inconsistent() {
        let c = ConstraintSet::new().with(int(), boolean());
        assert!(matches!(unify(&c), Err(UnifyError::Clash(_))));
        assert!(!consistent(&c));
    }

    #[test]
    fn map_derivation_unifier() {
        let theta = unify(&map_constraints()).unwrap();
        assert_eq!(u(2).apply(&theta), Type::arrow(int(), boolean()));
        assert_eq!(u(1).apply(&theta), Type::list(int()));
        assert_eq!(u(11).apply(&theta), int());
        assert_eq!(u(12).apply(&theta), boolean());
        assert!(theta.is_idempotent());
        assert!(consistent(&map_constraints()));
        assert_eq!(solve_for(&map_constraints(), &u(1)), Type::list(int()));
    }

    #[test]
    fn occurs_check() {
        let c = ConstraintSet::new().with(u(0), Type::list(u(0)));
        assert!(matches!(unify(&c), Err(UnifyError::Occurs(_))));
    }

    #[test]
    fn entailment_examples() {
        let c = ConstraintSet::new().with(u(1), Type::list(u(11))).with(u(11), int());
        assert!(entails(&c, &u(1), &Type::list(int())));
        assert!(entails(&ConstraintSet::new(), &u(5), &u(5)));
        let a = ConstraintSet::new().with(Type::rigid("a"), int());
        assert!(!entails(&a, &Type::rigid("a"), &boolean()));
        assert_eq!(solve_for(&a, &Type::rigid("a")), int());
        assert_eq!(solve_for(&ConstraintSet::new(), &boolean()), boolean());
    }

    #[test]
    fn unresolved_class_is_represented_by_smallest_id() {
        let c = ConstraintSet::new().with(u(7), u(3)).with(u(3), u(5));
        assert_eq!(solve_for(&c, &u(7)), u(3));
    }

    #[test]
    fn instantiate_map_scheme() {
        let a = || Type::rigid("a");
        let b = || Type::rigid("b");
        let s = Scheme::poly(
            vec!["a".into(), "b".into()],
            Type::arrows([Type::arrow(a(), b()), Type::list(a())], Type::list(b())),
        );
        let mut supply = FreshSupply::starting_at(40);
        let (body, bundled, theta) = instantiate(&s, &mut supply);
        assert_eq!(
            body,
            Type::arrows([Type::arrow(u(40), u(41)), Type::list(u(40))], Type::list(u(41)))
        );
        assert!(bundled.is_empty());
        assert_eq!(theta.len(), 2);
    }

    #[test]
    fn instantiate_bundled_constraints() {
        let exp = |t: Type| Type::data("Exp", vec![t]);
        let s = Scheme {
            quantified: vec!["b".into()],
            constraints: ConstraintSet::new().with(Type::rigid("b"), int()),
            body: Type::arrows([exp(int()), exp(int())], exp(Type::rigid("b"))),
        };
        let mut supply = FreshSupply::new();
        let (body, bundled, _) = instantiate(&s, &mut supply);
        assert_eq!(body, Type::arrows([exp(int()), exp(int())], exp(u(0))));
        assert_eq!(bundled, ConstraintSet::new().with(u(0), int()));
        let mono = Scheme::mono(int());
        let (body, bundled, theta) = instantiate(&mono, &mut supply);
        assert_eq!(body, int());
        assert!(bundled.is_empty() && theta.is_empty());
    }

    #[test]
    fn wanted_constraints_cannot_bind_rigid_variables() {
        let s = Solver::new();
        assert!(s.want(&Type::rigid("a"), &Type::data("Maybe", vec![u(0)])).is_err());
        assert!(s.want(&Type::rigid("a"), &Type::rigid("b")).is_err());
        let ok = s.want(&u(0), &Type::rigid("a")).unwrap();
        assert_eq!(ok.resolve(&u(0)), Type::rigid("a"));
    }

    #[test]
    fn assumptions_refine_rigid_variables() {
        let s = Solver::with_givens(&ConstraintSet::new().with(Type::rigid("a"), int())).unwrap();
        assert!(s.entails(&Type::rigid("a"), &int()));
        let t = s.want(&u(0), &Type::rigid("a")).unwrap();
        assert_eq!(t.resolve(&u(0)), int());
        assert!(s.want(&Type::rigid("a"), &boolean()).is_err());
        // wanted first, assumption later
        let w = Solver::new().want(&u(1), &Type::rigid("a")).unwrap();
        let w = w.assume(&ConstraintSet::new().with(Type::rigid("a"), int())).unwrap();
        assert_eq!(w.resolve(&u(1)), int());
        let _ = Uvar(0);
    }
}
