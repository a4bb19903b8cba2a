//! The type language: monotypes, schemes, equality constraints and
//! substitutions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Identifier of a unification variable. Rendered as `?N`, a namespace no
/// parsed identifier can occupy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Uvar(pub u32);

impl fmt::Display for Uvar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Uvar(Uvar),
    Rigid(String),
    Data(String, Vec<Type>),
    Arrow(Box<Type>, Box<Type>),
}

/// Name of the built-in list datatype; printed as `[τ]`.
pub const LIST: &str = "[]";

impl Type {
    pub fn data(head: impl Into<String>, args: Vec<Type>) -> Type {
        Type::Data(head.into(), args)
    }

    pub fn con(head: impl Into<String>) -> Type {
        Type::Data(head.into(), Vec::new())
    }

    pub fn rigid(name: impl Into<String>) -> Type {
        Type::Rigid(name.into())
    }

    pub fn uvar(id: u32) -> Type {
        Type::Uvar(Uvar(id))
    }

    pub fn list(elem: Type) -> Type {
        Type::Data(LIST.to_string(), vec![elem])
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }

    /// Right-nested arrow `a1 -> ... -> an -> result`.
    pub fn arrows(args: impl IntoIterator<Item = Type>, result: Type) -> Type {
        let args: Vec<Type> = args.into_iter().collect();
        args.into_iter().rev().fold(result, |acc, arg| Type::arrow(arg, acc))
    }

    /// Splits `a1 -> ... -> an -> r` into its argument list and result.
    pub fn split_arrows(&self) -> (Vec<&Type>, &Type) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Type::Arrow(d, c) = cur {
            args.push(d.as_ref());
            cur = c.as_ref();
        }
        (args, cur)
    }

    pub fn arity(&self) -> usize {
        self.split_arrows().0.len()
    }

    pub fn apply(&self, s: &Subst) -> Type {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Type::Uvar(v) => s.get(&TyVar::Uvar(*v)).cloned().unwrap_or_else(|| self.clone()),
            Type::Rigid(a) => s.get(&TyVar::Rigid(a.clone())).cloned().unwrap_or_else(|| self.clone()),
            Type::Data(h, args) => Type::Data(h.clone(), args.iter().map(|t| t.apply(s)).collect()),
            Type::Arrow(d, c) => Type::arrow(d.apply(s), c.apply(s)),
        }
    }

    pub fn collect_uvars(&self, out: &mut BTreeSet<Uvar>) {
        match self {
            Type::Uvar(v) => {
                out.insert(*v);
            }
            Type::Rigid(_) => {}
            Type::Data(_, args) => args.iter().for_each(|t| t.collect_uvars(out)),
            Type::Arrow(d, c) => {
                d.collect_uvars(out);
                c.collect_uvars(out);
            }
        }
    }

    pub fn collect_rigids(&self, out: &mut BTreeSet<String>) {
        match self {
            Type::Uvar(_) => {}
            Type::Rigid(a) => {
                out.insert(a.clone());
            }
            Type::Data(_, args) => args.iter().for_each(|t| t.collect_rigids(out)),
            Type::Arrow(d, c) => {
                d.collect_rigids(out);
                c.collect_rigids(out);
            }
        }
    }

    pub fn rigids(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_rigids(&mut out);
        out
    }

    pub fn occurs(&self, var: &TyVar) -> bool {
        match (self, var) {
            (Type::Uvar(v), TyVar::Uvar(w)) => v == w,
            (Type::Rigid(a), TyVar::Rigid(b)) => a == b,
            (Type::Data(_, args), _) => args.iter().any(|t| t.occurs(var)),
            (Type::Arrow(d, c), _) => d.occurs(var) || c.occurs(var),
            _ => false,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Type::Uvar(_) => false,
            Type::Rigid(_) => true,
            Type::Data(_, args) => args.iter().all(Type::is_ground),
            Type::Arrow(d, c) => d.is_ground() && c.is_ground(),
        }
    }

    /// Number of type constructors along the deepest path.
    pub fn depth(&self) -> usize {
        match self {
            Type::Uvar(_) | Type::Rigid(_) => 1,
            Type::Data(_, args) => 1 + args.iter().map(Type::depth).max().unwrap_or(0),
            Type::Arrow(d, c) => 1 + d.depth().max(c.depth()),
        }
    }
}

/// Exact set of unification variables occurring in a type-bearing value.
pub trait FreeUvars {
    fn free_uvars(&self) -> BTreeSet<Uvar>;
}

impl FreeUvars for Type {
    fn free_uvars(&self) -> BTreeSet<Uvar> {
        let mut out = BTreeSet::new();
        self.collect_uvars(&mut out);
        out
    }
}

impl FreeUvars for ConstraintSet {
    fn free_uvars(&self) -> BTreeSet<Uvar> {
        let mut out = BTreeSet::new();
        for eq in self.iter() {
            eq.lhs.collect_uvars(&mut out);
            eq.rhs.collect_uvars(&mut out);
        }
        out
    }
}

impl FreeUvars for Subst {
    fn free_uvars(&self) -> BTreeSet<Uvar> {
        let mut out = BTreeSet::new();
        for (k, t) in self.iter() {
            if let TyVar::Uvar(v) = k {
                out.insert(*v);
            }
            t.collect_uvars(&mut out);
        }
        out
    }
}

/// A type variable that a substitution may map: either a unification
/// variable or a named rigid variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TyVar {
    Uvar(Uvar),
    Rigid(String),
}

impl TyVar {
    pub fn to_type(&self) -> Type {
        match self {
            TyVar::Uvar(v) => Type::Uvar(*v),
            TyVar::Rigid(a) => Type::Rigid(a.clone()),
        }
    }
}

/// A type equality `lhs ~ rhs`, stored with the smaller side first so that
/// flipped duplicates compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Equality {
    pub lhs: Type,
    pub rhs: Type,
}

impl Equality {
    pub fn new(a: Type, b: Type) -> Equality {
        if a <= b {
            Equality { lhs: a, rhs: b }
        } else {
            Equality { lhs: b, rhs: a }
        }
    }

    pub fn apply(&self, s: &Subst) -> Equality {
        Equality::new(self.lhs.apply(s), self.rhs.apply(s))
    }
}

/// A set of type equalities.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstraintSet(BTreeSet<Equality>);

impl ConstraintSet {
    pub fn new() -> ConstraintSet {
        ConstraintSet::default()
    }

    pub fn insert(&mut self, a: Type, b: Type) -> bool {
        self.0.insert(Equality::new(a, b))
    }

    pub fn insert_eq(&mut self, eq: Equality) -> bool {
        self.0.insert(eq)
    }

    pub fn with(mut self, a: Type, b: Type) -> ConstraintSet {
        self.insert(a, b);
        self
    }

    pub fn extend(&mut self, other: &ConstraintSet) {
        self.0.extend(other.0.iter().cloned());
    }

    pub fn union(&self, other: &ConstraintSet) -> ConstraintSet {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = &Equality> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, eq: &Equality) -> bool {
        self.0.contains(eq)
    }

    pub fn is_subset(&self, other: &ConstraintSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn apply(&self, s: &Subst) -> ConstraintSet {
        ConstraintSet(self.0.iter().map(|e| e.apply(s)).collect())
    }

    pub fn rigids(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for eq in self.iter() {
            eq.lhs.collect_rigids(&mut out);
            eq.rhs.collect_rigids(&mut out);
        }
        out
    }
}

impl FromIterator<(Type, Type)> for ConstraintSet {
    fn from_iter<I: IntoIterator<Item = (Type, Type)>>(iter: I) -> Self {
        ConstraintSet(iter.into_iter().map(|(a, b)| Equality::new(a, b)).collect())
    }
}

impl FromIterator<Equality> for ConstraintSet {
    fn from_iter<I: IntoIterator<Item = Equality>>(iter: I) -> Self {
        ConstraintSet(iter.into_iter().map(|e| Equality::new(e.lhs, e.rhs)).collect())
    }
}

/// A finite, idempotent map from type variables to types.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Subst(BTreeMap<TyVar, Type>);

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn singleton(var: TyVar, ty: Type) -> Subst {
        let mut m = BTreeMap::new();
        m.insert(var, ty);
        Subst(m)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, var: &TyVar) -> Option<&Type> {
        self.0.get(var)
    }

    pub fn contains(&self, var: &TyVar) -> bool {
        self.0.contains_key(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TyVar, &Type)> {
        self.0.iter()
    }

    /// Binds `var := ty`, keeping the map idempotent. `ty` must already be
    /// resolved under `self` and must not mention `var`.
    pub fn bind(&mut self, var: TyVar, ty: Type) {
        debug_assert!(!ty.occurs(&var));
        let single = Subst::singleton(var.clone(), ty.clone());
        for range in self.0.values_mut() {
            if range.occurs(&var) {
                *range = range.apply(&single);
            }
        }
        self.0.insert(var, ty);
    }

    /// `other ∘ self`: applying the result equals applying `self` then
    /// `other`.
    pub fn then(&self, other: &Subst) -> Subst {
        let mut out: BTreeMap<TyVar, Type> = self.0.iter().map(|(k, t)| (k.clone(), t.apply(other))).collect();
        for (k, t) in other.0.iter() {
            out.entry(k.clone()).or_insert_with(|| t.clone());
        }
        Subst(out)
    }

    pub fn is_idempotent(&self) -> bool {
        self.0.values().all(|t| t.apply(self) == *t)
    }
}

impl FromIterator<(TyVar, Type)> for Subst {
    fn from_iter<I: IntoIterator<Item = (TyVar, Type)>>(iter: I) -> Self {
        Subst(iter.into_iter().collect())
    }
}

/// `∀ quantified. constraints => body`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    pub quantified: Vec<String>,
    pub constraints: ConstraintSet,
    pub body: Type,
}

impl Scheme {
    pub fn mono(body: Type) -> Scheme {
        Scheme {
            quantified: Vec::new(),
            constraints: ConstraintSet::new(),
            body,
        }
    }

    pub fn poly(quantified: Vec<String>, body: Type) -> Scheme {
        Scheme {
            quantified,
            constraints: ConstraintSet::new(),
            body,
        }
    }

    /// Quantifies every rigid variable of `body` in order of first
    /// occurrence.
    pub fn closed(body: Type) -> Scheme {
        let mut seen = Vec::new();
        fn walk(t: &Type, seen: &mut Vec<String>) {
            match t {
                Type::Rigid(a) if !seen.contains(a) => seen.push(a.clone()),
                Type::Data(_, args) => args.iter().for_each(|x| walk(x, seen)),
                Type::Arrow(d, c) => {
                    walk(d, seen);
                    walk(c, seen);
                }
                _ => {}
            }
        }
        walk(&body, &mut seen);
        Scheme::poly(seen, body)
    }

    pub fn free_rigids(&self) -> BTreeSet<String> {
        let mut out = self.body.rigids();
        out.extend(self.constraints.rigids());
        for q in &self.quantified {
            out.remove(q);
        }
        out
    }
}

/// Mints unification variable ids. Confined to a single synthesis session.
#[derive(Debug, Clone, Default)]
pub struct FreshSupply {
    counter: u32,
}

impl FreshSupply {
    pub fn new() -> FreshSupply {
        FreshSupply::default()
    }

    /// A supply whose ids start at `start`, used to give independent search
    /// branches disjoint ranges.
    pub fn starting_at(start: u32) -> FreshSupply {
        FreshSupply { counter: start }
    }

    pub fn fresh(&mut self) -> Uvar {
        let id = self.counter;
        self.counter = self.counter.checked_add(1).expect("fresh supply exhausted");
        Uvar(id)
    }

    pub fn fresh_type(&mut self) -> Type {
        Type::Uvar(self.fresh())
    }

    pub fn peek(&self) -> u32 {
        self.counter
    }
}
