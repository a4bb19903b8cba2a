//! Runtime values, examples and example worlds.

use std::sync::Arc;

use thiserror::Error;

use crate::syntax::Expr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    /// A polymorphic constant, compared by name.
    Const(String),
    Closure {
        binder: String,
        body: Arc<Expr>,
        env: ValueEnv,
    },
    /// A saturated constructor application.
    Ctor(String, Vec<Value>),
    /// The function under synthesis applied to `args` so far. What a
    /// saturated application means is decided by the evaluator's recursion
    /// mode (example lookup or the candidate body).
    Recursive {
        name: String,
        args: Vec<Value>,
    },
    /// Evaluation could not proceed here (a hole, a missing example, a
    /// match on a constant).
    Stuck,
}

impl Value {
    pub fn ctor(name: impl Into<String>, args: Vec<Value>) -> Value {
        Value::Ctor(name.into(), args)
    }

    pub fn constant(name: impl Into<String>) -> Value {
        Value::Const(name.into())
    }

    pub fn head(&self) -> Option<&str> {
        match self {
            Value::Ctor(k, _) => Some(k),
            _ => None,
        }
    }

    /// Built from constants and constructors only.
    pub fn is_first_order(&self) -> bool {
        match self {
            Value::Const(_) => true,
            Value::Ctor(_, args) => args.iter().all(Value::is_first_order),
            _ => false,
        }
    }

    /// First-order values viewed as examples; closures have no example
    /// form.
    pub fn to_example(&self) -> Option<Example> {
        match self {
            Value::Const(c) => Some(Example::Const(c.clone())),
            Value::Ctor(k, args) => Some(Example::Ctor(k.clone(), args.iter().map(Value::to_example).collect::<Option<_>>()?)),
            _ => None,
        }
    }

    /// Expression that evaluates to this value, when one exists.
    pub fn to_expr(&self) -> Option<Expr> {
        match self {
            Value::Const(c) => Some(Expr::Const(c.clone())),
            Value::Ctor(k, args) => Some(Expr::apps(
                Expr::Ctor(k.clone()),
                args.iter().map(Value::to_expr).collect::<Option<Vec<_>>>()?,
            )),
            Value::Closure { binder, body, env } if env.is_empty() => Some(Expr::lam(binder.clone(), body.as_ref().clone())),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Example {
    Const(String),
    Ctor(String, Vec<Example>),
    /// `input => output`
    Io(ValueKey, Box<Example>),
}

/// Input values of examples. Only first-order values and closed lambdas
/// can be written in examples, so they are stored by their syntax.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValueKey(pub Expr);

impl Example {
    pub fn ctor(name: impl Into<String>, args: Vec<Example>) -> Example {
        Example::Ctor(name.into(), args)
    }

    pub fn constant(name: impl Into<String>) -> Example {
        Example::Const(name.into())
    }

    pub fn io(input: Value, output: Example) -> Example {
        let key = input.to_expr().expect("example inputs are closed values");
        Example::Io(ValueKey(key), Box::new(output))
    }

    /// The value an example denotes, when it is first order.
    pub fn to_value(&self) -> Option<Value> {
        match self {
            Example::Const(c) => Some(Value::Const(c.clone())),
            Example::Ctor(k, args) => Some(Value::Ctor(k.clone(), args.iter().map(Example::to_value).collect::<Option<_>>()?)),
            Example::Io(..) => None,
        }
    }

    pub fn head(&self) -> Option<&str> {
        match self {
            Example::Ctor(k, _) => Some(k),
            _ => None,
        }
    }

    /// Inputs and final output of a curried IO example.
    pub fn uncurry(&self) -> (Vec<&Expr>, &Example) {
        let mut inputs = Vec::new();
        let mut cur = self;
        while let Example::Io(v, out) = cur {
            inputs.push(&v.0);
            cur = out.as_ref();
        }
        (inputs, cur)
    }

    pub fn constants(&self, out: &mut Vec<String>) {
        match self {
            Example::Const(c) => out.push(c.clone()),
            Example::Ctor(_, args) => args.iter().for_each(|a| a.constants(out)),
            Example::Io(v, o) => {
                v.0.walk(&mut |e| {
                    if let Expr::Const(c) = e {
                        out.push(c.clone());
                    }
                });
                o.constants(out);
            }
        }
    }
}

/// `∀ c1:a1 .. cn:an. rows`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopExample {
    pub constants: Vec<(String, String)>,
    pub rows: Vec<Example>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExampleError {
    #[error("polymorphic constant `{0}` is declared twice")]
    DuplicateConstant(String),
    #[error("polymorphic constant `{0}` is not declared")]
    UndeclaredConstant(String),
    #[error("an example block needs at least one row")]
    NoRows,
}

impl TopExample {
    pub fn new(constants: Vec<(String, String)>, rows: Vec<Example>) -> Result<Self, ExampleError> {
        if rows.is_empty() {
            return Err(ExampleError::NoRows);
        }
        for (i, (c, _)) in constants.iter().enumerate() {
            if constants[..i].iter().any(|(d, _)| d == c) {
                return Err(ExampleError::DuplicateConstant(c.clone()));
            }
        }
        let mut used = Vec::new();
        rows.iter().for_each(|r| r.constants(&mut used));
        if let Some(c) = used.into_iter().find(|c| !constants.iter().any(|(d, _)| d == c)) {
            return Err(ExampleError::UndeclaredConstant(c));
        }
        Ok(TopExample { constants, rows })
    }
}

/// Variable bindings of an example world; later bindings shadow earlier
/// ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValueEnv(Vec<(String, Value)>);

impl ValueEnv {
    pub fn new() -> ValueEnv {
        ValueEnv::default()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn lookup(&self, name: &str) -> Option<&Value> {
        self.0.iter().rev().find(|(x, _)| x == name).map(|(_, v)| v)
    }

    pub fn extend(&self, name: impl Into<String>, value: Value) -> ValueEnv {
        let mut out = self.clone();
        out.push(name, value);
        out
    }

    pub fn push(&mut self, name: impl Into<String>, value: Value) {
        self.0.push((name.into(), value));
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.0.iter().map(|(x, v)| (x.as_str(), v))
    }
}

/// `S ↦ χ`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct World {
    pub env: ValueEnv,
    pub goal: Example,
}

pub type WorldSet = Vec<World>;
