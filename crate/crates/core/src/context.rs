//! Typing contexts: datatype declarations, constructor signatures, variable
//! schemes and polymorphic example constants.

use indexmap::IndexMap;
use thiserror::Error;

use crate::types::{ConstraintSet, Scheme, Type};

/// `K : ∀ quantified. bundled => arg_types -> result_head quantified`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtorSig {
    pub name: String,
    pub quantified: Vec<String>,
    pub bundled: ConstraintSet,
    pub arg_types: Vec<Type>,
    pub result_head: String,
}

impl CtorSig {
    pub fn result_type(&self) -> Type {
        Type::data(self.result_head.clone(), self.quantified.iter().map(Type::rigid).collect())
    }

    pub fn scheme(&self) -> Scheme {
        Scheme {
            quantified: self.quantified.clone(),
            constraints: self.bundled.clone(),
            body: Type::arrows(self.arg_types.iter().cloned(), self.result_type()),
        }
    }

    pub fn arity(&self) -> usize {
        self.arg_types.len()
    }

    pub fn has_constraints(&self) -> bool {
        !self.bundled.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataDecl {
    pub name: String,
    pub arity: usize,
    pub ctors: Vec<String>,
    /// Opaque datatypes (literals) have an open constructor set and cannot
    /// be scrutinized.
    pub opaque: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("duplicate datatype `{0}`")]
    DuplicateDatatype(String),
    #[error("duplicate constructor `{0}`")]
    DuplicateCtor(String),
    #[error("unknown datatype `{0}`")]
    UnknownDatatype(String),
    #[error("datatype `{name}` expects {expected} argument(s), found {found}")]
    ArityMismatch { name: String, expected: usize, found: usize },
    #[error("type variable `{var}` is not bound in the signature of `{owner}`")]
    UnboundTypeVar { owner: String, var: String },
    #[error("constructor `{ctor}` does not build a value of `{datatype}`")]
    WrongResult { ctor: String, datatype: String },
    #[error("type variables of `{0}` must be distinct")]
    RepeatedTypeVar(String),
}

#[derive(Debug, Clone, Default)]
pub struct Context {
    pub vars: IndexMap<String, Scheme>,
    pub ctors: IndexMap<String, CtorSig>,
    pub poly_consts: IndexMap<String, String>,
    pub datatypes: IndexMap<String, DataDecl>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    /// Adds a datatype and its constructors after checking them.
    pub fn add_datatype(&mut self, name: &str, params: &[String], ctors: Vec<CtorSig>, opaque: bool) -> Result<(), ContextError> {
        if self.datatypes.contains_key(name) {
            return Err(ContextError::DuplicateDatatype(name.to_string()));
        }
        for (i, p) in params.iter().enumerate() {
            if params[..i].contains(p) {
                return Err(ContextError::RepeatedTypeVar(name.to_string()));
            }
        }
        // Registered first so that recursive occurrences resolve.
        self.datatypes.insert(
            name.to_string(),
            DataDecl {
                name: name.to_string(),
                arity: params.len(),
                ctors: Vec::new(),
                opaque,
            },
        );
        let result = ctors.into_iter().try_for_each(|sig| self.add_ctor(sig));
        if result.is_err() {
            let names = self.datatypes[name].ctors.clone();
            for c in names {
                self.ctors.shift_remove(&c);
            }
            self.datatypes.shift_remove(name);
        }
        result
    }

    /// Adds one constructor to an already declared datatype.
    pub fn add_ctor(&mut self, sig: CtorSig) -> Result<(), ContextError> {
        if self.ctors.contains_key(&sig.name) {
            return Err(ContextError::DuplicateCtor(sig.name.clone()));
        }
        let decl = self
            .datatypes
            .get(&sig.result_head)
            .ok_or_else(|| ContextError::UnknownDatatype(sig.result_head.clone()))?;
        if decl.arity != sig.quantified.len() {
            return Err(ContextError::WrongResult {
                ctor: sig.name.clone(),
                datatype: sig.result_head.clone(),
            });
        }
        for (i, q) in sig.quantified.iter().enumerate() {
            if sig.quantified[..i].contains(q) {
                return Err(ContextError::RepeatedTypeVar(sig.name.clone()));
            }
        }
        let scheme = sig.scheme();
        if let Some(var) = scheme.free_rigids().into_iter().next() {
            return Err(ContextError::UnboundTypeVar {
                owner: sig.name.clone(),
                var,
            });
        }
        for t in sig.arg_types.iter() {
            self.check_type(t)?;
        }
        for eq in sig.bundled.iter() {
            self.check_type(&eq.lhs)?;
            self.check_type(&eq.rhs)?;
        }
        let head = sig.result_head.clone();
        self.datatypes[&head].ctors.push(sig.name.clone());
        self.ctors.insert(sig.name.clone(), sig);
        Ok(())
    }

    /// Adds a variable with a closed scheme.
    pub fn add_var(&mut self, name: &str, scheme: Scheme) -> Result<(), ContextError> {
        self.check_type(&scheme.body)?;
        if let Some(var) = scheme.free_rigids().into_iter().next() {
            return Err(ContextError::UnboundTypeVar {
                owner: name.to_string(),
                var,
            });
        }
        self.vars.insert(name.to_string(), scheme);
        Ok(())
    }

    /// Every datatype occurrence refers to a declared datatype at its
    /// declared arity.
    pub fn check_type(&self, t: &Type) -> Result<(), ContextError> {
        match t {
            Type::Uvar(_) | Type::Rigid(_) => Ok(()),
            Type::Data(h, args) => {
                let decl = self.datatypes.get(h).ok_or_else(|| ContextError::UnknownDatatype(h.clone()))?;
                if decl.arity != args.len() {
                    return Err(ContextError::ArityMismatch {
                        name: h.clone(),
                        expected: decl.arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_type(a))
            }
            Type::Arrow(d, c) => {
                self.check_type(d)?;
                self.check_type(c)
            }
        }
    }

    pub fn ctor(&self, name: &str) -> Option<&CtorSig> {
        self.ctors.get(name)
    }

    pub fn datatype(&self, name: &str) -> Option<&DataDecl> {
        self.datatypes.get(name)
    }

    /// Constructors of `datatype` in declaration order.
    pub fn ctors_of(&self, datatype: &str) -> impl Iterator<Item = &CtorSig> {
        self.datatypes
            .get(datatype)
            .into_iter()
            .flat_map(|d| d.ctors.iter())
            .filter_map(|c| self.ctors.get(c))
    }

    /// Registers an integer literal as a nullary constructor of the opaque
    /// `Int` datatype.
    pub fn ensure_literal(&mut self, lit: &str) -> Result<(), ContextError> {
        if self.ctors.contains_key(lit) {
            return Ok(());
        }
        self.add_ctor(CtorSig {
            name: lit.to_string(),
            quantified: Vec::new(),
            bundled: ConstraintSet::new(),
            arg_types: Vec::new(),
            result_head: "Int".to_string(),
        })
    }

    /// Rigid type variable of a polymorphic constant.
    pub fn poly_const(&self, name: &str) -> Option<&str> {
        self.poly_consts.get(name).map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(name: &str, q: &[&str], args: Vec<Type>, head: &str) -> CtorSig {
        CtorSig {
            name: name.into(),
            quantified: q.iter().map(|s| s.to_string()).collect(),
            bundled: ConstraintSet::new(),
            arg_types: args,
            result_head: head.into(),
        }
    }

    #[test]
    fn exp_gadt_is_well_formed() {
        let mut ctx = Context::new();
        ctx.add_datatype("Int", &[], vec![], true).unwrap();
        ctx.add_datatype("Bool", &[], vec![sig("True", &[], vec![], "Bool")], false)
            .unwrap();
        let exp = |t: Type| Type::data("Exp", vec![t]);
        let int = Type::con("Int");
        let mut plus = sig("Plus", &["b"], vec![exp(int.clone()), exp(int.clone())], "Exp");
        plus.bundled.insert(Type::rigid("b"), int.clone());
        ctx.add_datatype(
            "Exp",
            &["a".into()],
            vec![sig("Lit", &["a"], vec![Type::rigid("a")], "Exp"), plus],
            false,
        )
        .unwrap();
        assert_eq!(ctx.datatypes["Exp"].ctors, vec!["Lit", "Plus"]);
    }

    #[test]
    fn unquantified_argument_variable_is_rejected() {
        let mut ctx = Context::new();
        let err = ctx
            .add_datatype("Box", &["a".into()], vec![sig("Box", &["a"], vec![Type::rigid("z")], "Box")], false)
            .unwrap_err();
        assert!(matches!(err, ContextError::UnboundTypeVar { .. }));
        assert!(ctx.datatype("Box").is_none());
    }

    #[test]
    fn duplicate_constructor_is_rejected() {
        let mut ctx = Context::new();
        ctx.add_datatype("A", &[], vec![sig("Lit", &[], vec![], "A")], false).unwrap();
        let err = ctx.add_datatype("B", &[], vec![sig("Lit", &[], vec![], "B")], false).unwrap_err();
        assert_eq!(err, ContextError::DuplicateCtor("Lit".into()));
    }

    #[test]
    fn arity_is_checked() {
        let mut ctx = Context::new();
        ctx.add_datatype("Maybe", &["a".into()], vec![], false).unwrap();
        let err = ctx.add_var("x", Scheme::mono(Type::con("Maybe"))).unwrap_err();
        assert!(matches!(err, ContextError::ArityMismatch { .. }));
    }
}
