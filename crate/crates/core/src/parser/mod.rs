//! Surface syntax (`.syn` files): datatype declarations, signatures,
//! bindings with holes and example blocks. See `docs/format.md`.

mod lexer;
mod print;

use std::fmt;

use crate::context::CtorSig;
use crate::syntax::{Expr, MatchBranch};
use crate::types::{ConstraintSet, Scheme, Type, LIST};

pub use lexer::{lex, Tok, Token};
pub use print::{print_scheme, print_source, sugared};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCode {
    Lexical,
    Syntax,
    UnbalancedBlock,
    UnknownOption,
    IllFormed,
    BadExample,
    Type,
    Unbound,
    NonExhaustive,
}

impl ErrorCode {
    pub fn code(self) -> &'static str {
        match self {
            ErrorCode::Lexical => "E001",
            ErrorCode::Syntax => "E002",
            ErrorCode::UnbalancedBlock => "E003",
            ErrorCode::UnknownOption => "E004",
            ErrorCode::IllFormed => "E005",
            ErrorCode::BadExample => "E006",
            ErrorCode::Type => "E007",
            ErrorCode::Unbound => "E008",
            ErrorCode::NonExhaustive => "E009",
        }
    }
}

/// A located error. Rendered as `line:col: message [code]`; the CLI
/// prefixes the file name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: ErrorCode,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: ErrorCode, line: usize, col: usize, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            code,
            line,
            col,
            message: message.into(),
        }
    }

    pub fn render(&self, file: &str) -> String {
        format!("{file}:{}:{}: {} [{}]", self.line, self.col, self.message, self.code.code())
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {} [{}]", self.line, self.col, self.message, self.code.code())
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Loc {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataSrc {
    pub name: String,
    pub params: Vec<String>,
    pub ctors: Vec<CtorSig>,
    /// Declared with `where` (constructor signatures) rather than `=`.
    pub gadt_syntax: bool,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigSrc {
    pub name: String,
    pub scheme: Scheme,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingSrc {
    pub name: String,
    pub params: Vec<String>,
    pub rhs: Expr,
    pub loc: Loc,
}

impl BindingSrc {
    pub fn body(&self) -> Expr {
        Expr::lams(self.params.iter().cloned(), self.rhs.clone())
    }
}

/// `f in1 .. inN = out` inside an example block; identifiers are kept as
/// variables until elaboration decides which are polymorphic constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSrc {
    pub name: String,
    pub inputs: Vec<Expr>,
    pub output: Expr,
    pub loc: Loc,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OptionMap {
    pub ctx: Option<Vec<String>>,
    pub rec_arg: Option<usize>,
    pub depth: Option<usize>,
    pub max_candidates: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleBlock {
    pub name: String,
    pub sig: Option<Scheme>,
    pub rows: Vec<RowSrc>,
    pub options: OptionMap,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Data(DataSrc),
    Sig(SigSrc),
    Binding(BindingSrc),
    Examples(ExampleBlock),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceFile {
    pub items: Vec<Item>,
}

impl SourceFile {
    pub fn datatypes(&self) -> impl Iterator<Item = &DataSrc> {
        self.items.iter().filter_map(|i| match i {
            Item::Data(d) => Some(d),
            _ => None,
        })
    }

    pub fn signatures(&self) -> impl Iterator<Item = &SigSrc> {
        self.items.iter().filter_map(|i| match i {
            Item::Sig(s) => Some(s),
            _ => None,
        })
    }

    pub fn bindings(&self) -> impl Iterator<Item = &BindingSrc> {
        self.items.iter().filter_map(|i| match i {
            Item::Binding(b) => Some(b),
            _ => None,
        })
    }

    pub fn example_blocks(&self) -> impl Iterator<Item = &ExampleBlock> {
        self.items.iter().filter_map(|i| match i {
            Item::Examples(b) => Some(b),
            _ => None,
        })
    }

    pub fn signature(&self, name: &str) -> Option<&SigSrc> {
        self.signatures().find(|s| s.name == name)
    }

    pub fn example_block(&self, name: &str) -> Option<&ExampleBlock> {
        self.example_blocks().find(|b| b.name == name)
    }

    /// Bindings whose right-hand side contains at least one hole.
    pub fn goals(&self) -> impl Iterator<Item = &BindingSrc> {
        self.bindings().filter(|b| b.rhs.has_holes())
    }
}

pub fn parse_source_file(src: &str) -> Result<SourceFile, Diagnostic> {
    let toks = lex(src)?;
    let mut items = Vec::new();
    for group in split_top_level(&toks)? {
        let mut p = Parser::new(group);
        let item = p.item()?;
        p.expect_end()?;
        items.push(item);
    }
    Ok(SourceFile { items })
}

/// Parses a single example row `f in1 .. inN = out`.
pub fn parse_example_row(src: &str) -> Result<RowSrc, Diagnostic> {
    let toks = lex(src)?;
    let mut p = Parser::new(&toks);
    let row = p.row()?;
    p.expect_end()?;
    Ok(row)
}

pub fn parse_expr(src: &str) -> Result<Expr, Diagnostic> {
    let toks = lex(src)?;
    let mut p = Parser::new(&toks);
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

pub fn parse_type(src: &str) -> Result<Type, Diagnostic> {
    let toks = lex(src)?;
    let mut p = Parser::new(&toks);
    let t = p.ty()?;
    p.expect_end()?;
    Ok(t)
}

/// Top-level items start at column 1; example blocks run to their `@}`.
fn split_top_level(toks: &[Token]) -> Result<Vec<&[Token]>, Diagnostic> {
    let mut groups = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        let start = i;
        if toks[i].tok == Tok::BlockOpen {
            let close = toks[i..]
                .iter()
                .position(|t| t.tok == Tok::BlockClose)
                .map(|k| i + k)
                .ok_or_else(|| {
                    Diagnostic::new(
                        ErrorCode::UnbalancedBlock,
                        toks[i].line,
                        toks[i].col,
                        "example block is not closed by `@}`",
                    )
                })?;
            if let Some(inner) = toks[i + 1..close].iter().find(|t| t.tok == Tok::BlockOpen) {
                return Err(Diagnostic::new(
                    ErrorCode::UnbalancedBlock,
                    inner.line,
                    inner.col,
                    "example blocks cannot nest",
                ));
            }
            i = close + 1;
        } else {
            i += 1;
            while i < toks.len() && !(toks[i].bol && toks[i].col == 1) {
                if matches!(toks[i].tok, Tok::BlockOpen | Tok::BlockClose | Tok::BlockSep) {
                    return Err(Diagnostic::new(
                        ErrorCode::UnbalancedBlock,
                        toks[i].line,
                        toks[i].col,
                        format!("unexpected {}", toks[i].tok.describe()),
                    ));
                }
                i += 1;
            }
            if toks[start].tok == Tok::BlockClose || toks[start].tok == Tok::BlockSep {
                return Err(Diagnostic::new(
                    ErrorCode::UnbalancedBlock,
                    toks[start].line,
                    toks[start].col,
                    format!("unexpected {}", toks[start].tok.describe()),
                ));
            }
        }
        groups.push(&toks[start..i]);
    }
    Ok(groups)
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    /// Innermost layout column first on top; a token that begins a line at
    /// or left of it ends the current construct. 0 disables layout.
    layout: Vec<(usize, usize)>,
    holes: u32,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'a> Parser<'a> {
    fn new(toks: &'a [Token]) -> Parser<'a> {
        Parser {
            toks,
            pos: 0,
            layout: Vec::new(),
            holes: 0,
        }
    }

    /// `layout` holds (column, index of the item's first token).
    fn blocked(&self, idx: usize) -> bool {
        let t = &self.toks[idx];
        match self.layout.last() {
            Some(&(c, start)) if c > 0 => idx != start && t.bol && t.col <= c,
            _ => false,
        }
    }

    fn peek_token(&self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos)?;
        if self.blocked(self.pos) {
            None
        } else {
            Some(t)
        }
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.peek_token().map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos + k)?;
        if k > 0 && self.blocked(self.pos + k) {
            return None;
        }
        self.peek()?;
        Some(&t.tok)
    }

    fn loc(&self) -> Loc {
        match self.toks.get(self.pos).or_else(|| self.toks.last()) {
            Some(t) => Loc { line: t.line, col: t.col },
            None => Loc { line: 1, col: 1 },
        }
    }

    fn error(&self, msg: impl Into<String>) -> Diagnostic {
        let l = self.loc();
        Diagnostic::new(ErrorCode::Syntax, l.line, l.col, msg)
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of declaration")),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, wanted: &str) -> PResult<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn expect_end(&self) -> PResult<()> {
        match self.toks.get(self.pos) {
            None => Ok(()),
            Some(t) => Err(Diagnostic::new(
                ErrorCode::Syntax,
                t.line,
                t.col,
                format!("unexpected {}", t.tok.describe()),
            )),
        }
    }

    fn lower(&mut self, wanted: &str) -> PResult<String> {
        match self.peek() {
            Some(Tok::Lower(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn upper(&mut self, wanted: &str) -> PResult<String> {
        match self.peek() {
            Some(Tok::Upper(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    /// Runs `f` with layout disabled (inside brackets).
    fn nested<T>(&mut self, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        self.layout.push((0, 0));
        let r = f(self);
        self.layout.pop();
        r
    }

    /// A sequence of items either in `{ a; b }` form or laid out one per
    /// line at a common column.
    fn block<T>(&mut self, what: &str, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        let mut out = Vec::new();
        if self.eat(&Tok::LBrace) {
            self.layout.push((0, 0));
            let r = (|| loop {
                out.push(item(self)?);
                if self.eat(&Tok::Semi) {
                    continue;
                }
                self.expect(&Tok::RBrace, &format!("`;` or `}}` after {what}"))?;
                return Ok(());
            })();
            self.layout.pop();
            r?;
            return Ok(out);
        }
        let first = match self.peek_token() {
            Some(t) => t,
            None => return Err(self.unexpected(what)),
        };
        if !first.bol {
            return Err(self.error(format!("{what}s start on a new line or inside `{{ }}`")));
        }
        let col = first.col;
        loop {
            self.layout.push((col, self.pos));
            let r = item(self);
            self.layout.pop();
            out.push(r?);
            match self.toks.get(self.pos) {
                Some(t) if matches!(t.tok, Tok::BlockSep | Tok::BlockClose) => return Ok(out),
                Some(t) if t.bol && t.col == col && !self.blocked(self.pos) => continue,
                Some(t) if t.bol && t.col > col && !self.blocked(self.pos) => {
                    return Err(Diagnostic::new(
                        ErrorCode::Syntax,
                        t.line,
                        t.col,
                        format!("unexpected {}", t.tok.describe()),
                    ))
                }
                _ => return Ok(out),
            }
        }
    }

    // ---- items ----

    fn item(&mut self) -> PResult<Item> {
        let loc = self.loc();
        match self.peek() {
            Some(Tok::Data) => self.data().map(Item::Data),
            Some(Tok::BlockOpen) => self.example_block().map(Item::Examples),
            Some(Tok::Lower(name)) => {
                let name = name.clone();
                if self.peek_at(1) == Some(&Tok::DoubleColon) {
                    self.pos += 2;
                    let scheme = self.scheme()?;
                    Ok(Item::Sig(SigSrc { name, scheme, loc }))
                } else {
                    self.binding().map(Item::Binding)
                }
            }
            _ => Err(self.unexpected("a declaration")),
        }
    }

    fn data(&mut self) -> PResult<DataSrc> {
        let loc = self.loc();
        self.expect(&Tok::Data, "`data`")?;
        let name = self.upper("a datatype name")?;
        let mut params = Vec::new();
        while let Some(Tok::Lower(p)) = self.peek() {
            params.push(p.clone());
            self.pos += 1;
        }
        if self.eat(&Tok::Where) {
            let ctors = if self.peek().is_none() && self.pos >= self.toks.len() {
                Vec::new()
            } else {
                self.block("constructor signature", |p| p.gadt_ctor(&name, &params))?
            };
            return Ok(DataSrc {
                name,
                params,
                ctors,
                gadt_syntax: true,
                loc,
            });
        }
        let mut ctors = Vec::new();
        if self.eat(&Tok::Equals) {
            loop {
                ctors.push(self.plain_ctor(&name, &params)?);
                if !self.eat(&Tok::Bar) {
                    break;
                }
            }
        }
        Ok(DataSrc {
            name,
            params,
            ctors,
            gadt_syntax: false,
            loc,
        })
    }

    fn plain_ctor(&mut self, data: &str, params: &[String]) -> PResult<CtorSig> {
        let name = self.ctor_name()?;
        let mut args = Vec::new();
        while self.starts_atype() {
            args.push(self.atype()?);
        }
        Ok(CtorSig {
            name,
            quantified: params.to_vec(),
            bundled: ConstraintSet::new(),
            arg_types: args,
            result_head: data.to_string(),
        })
    }

    fn ctor_name(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Upper(k)) => {
                let k = k.clone();
                self.pos += 1;
                Ok(k)
            }
            Some(Tok::LParen) if self.peek_at(1) == Some(&Tok::Colon) && self.peek_at(2) == Some(&Tok::RParen) => {
                self.pos += 3;
                Ok(":".to_string())
            }
            Some(Tok::LBracket) if self.peek_at(1) == Some(&Tok::RBracket) => {
                self.pos += 2;
                Ok("[]".to_string())
            }
            _ => Err(self.unexpected("a constructor name")),
        }
    }

    /// `K :: [(eqs) =>] t1 -> .. -> T r1 .. rn`. Result arguments that are
    /// not distinct variables become bundled equalities.
    fn gadt_ctor(&mut self, data: &str, params: &[String]) -> PResult<CtorSig> {
        let loc = self.loc();
        let name = self.ctor_name()?;
        self.expect(&Tok::DoubleColon, "`::`")?;
        let (explicit, mut bundled) = self.forall_and_context()?;
        let ty = self.ty()?;
        let (args, result) = ty.split_arrows();
        let err = |msg: String| Diagnostic::new(ErrorCode::IllFormed, loc.line, loc.col, msg);
        let result_args = match result {
            Type::Data(h, rargs) if h == data => rargs.clone(),
            _ => return Err(err(format!("constructor `{name}` must return `{data}`"))),
        };
        let mut used = ty.rigids();
        used.extend(bundled.rigids());
        let mut quantified: Vec<String> = Vec::new();
        for (i, r) in result_args.iter().enumerate() {
            match r {
                Type::Rigid(v) if !quantified.contains(v) => quantified.push(v.clone()),
                other => {
                    let mut fresh = params.get(i).cloned().unwrap_or_else(|| format!("t{i}"));
                    while used.contains(&fresh) || quantified.contains(&fresh) {
                        fresh.push('\'');
                    }
                    used.insert(fresh.clone());
                    bundled.insert(Type::Rigid(fresh.clone()), other.clone());
                    quantified.push(fresh);
                }
            }
        }
        if let Some(extra) = explicit.iter().find(|v| !quantified.contains(v)) {
            return Err(err(format!(
                "type variable `{extra}` of `{name}` does not occur in its result type"
            )));
        }
        Ok(CtorSig {
            name,
            quantified,
            bundled,
            arg_types: args.into_iter().cloned().collect(),
            result_head: data.to_string(),
        })
    }

    /// Optional `forall a b.` and `(t ~ t', ..) =>` prefix.
    fn forall_and_context(&mut self) -> PResult<(Vec<String>, ConstraintSet)> {
        let mut vars = Vec::new();
        if self.eat(&Tok::Forall) {
            while let Some(Tok::Lower(v)) = self.peek() {
                vars.push(v.clone());
                self.pos += 1;
            }
            self.expect(&Tok::Dot, "`.` after forall")?;
        }
        let mut c = ConstraintSet::new();
        if self.has_context_arrow() {
            let parenthesized = self.eat(&Tok::LParen);
            self.nested(|p| {
                loop {
                    let l = p.ty()?;
                    p.expect(&Tok::Tilde, "`~`")?;
                    let r = p.ty()?;
                    c.insert(l, r);
                    if !(parenthesized && p.eat(&Tok::Comma)) {
                        break;
                    }
                }
                if parenthesized {
                    p.expect(&Tok::RParen, "`)`")?;
                }
                Ok(())
            })?;
            self.expect(&Tok::FatArrow, "`=>`")?;
        }
        Ok((vars, c))
    }

    fn has_context_arrow(&self) -> bool {
        let mut k = 0;
        while let Some(t) = self.peek_at(k) {
            match t {
                Tok::FatArrow => return true,
                Tok::Semi | Tok::RBrace | Tok::Equals => return false,
                _ => k += 1,
            }
        }
        false
    }

    fn scheme(&mut self) -> PResult<Scheme> {
        let loc = self.loc();
        let (vars, constraints) = self.forall_and_context()?;
        let body = self.ty()?;
        let mut scheme = Scheme::closed(body);
        if !vars.is_empty() {
            if let Some(v) = scheme.quantified.iter().find(|v| !vars.contains(v)) {
                return Err(Diagnostic::new(
                    ErrorCode::IllFormed,
                    loc.line,
                    loc.col,
                    format!("type variable `{v}` is not bound by the forall"),
                ));
            }
            scheme.quantified = vars;
        }
        scheme.constraints = constraints;
        Ok(scheme)
    }

    fn binding(&mut self) -> PResult<BindingSrc> {
        let loc = self.loc();
        let name = self.lower("a binding name")?;
        let mut params = Vec::new();
        while let Some(Tok::Lower(p)) = self.peek() {
            params.push(p.clone());
            self.pos += 1;
        }
        self.expect(&Tok::Equals, "`=`")?;
        self.holes = 0;
        let rhs = self.expr()?;
        Ok(BindingSrc { name, params, rhs, loc })
    }

    fn example_block(&mut self) -> PResult<ExampleBlock> {
        let loc = self.loc();
        self.expect(&Tok::BlockOpen, "`{@`")?;
        let mut sig = None;
        let mut rows = Vec::new();
        let mut sig_name = None;
        let mut options = OptionMap::default();
        let at_section_end = |p: &Self| matches!(p.toks.get(p.pos).map(|t| &t.tok), Some(Tok::BlockSep | Tok::BlockClose));
        if !at_section_end(self) {
            let entries = self.block("example row", |p| {
                if matches!(p.peek(), Some(Tok::Lower(_))) && p.peek_at(1) == Some(&Tok::DoubleColon) {
                    let name = p.lower("a name")?;
                    p.pos += 1;
                    Ok(Err((name, p.scheme()?)))
                } else {
                    p.row().map(Ok)
                }
            })?;
            for e in entries {
                match e {
                    Ok(r) => rows.push(r),
                    Err((name, s)) => {
                        if sig.is_some() {
                            return Err(Diagnostic::new(
                                ErrorCode::Syntax,
                                loc.line,
                                loc.col,
                                "an example block takes at most one signature",
                            ));
                        }
                        sig_name = Some(name);
                        sig = Some(s);
                    }
                }
            }
        }
        if self.toks.get(self.pos).map(|t| &t.tok) == Some(&Tok::BlockSep) {
            self.pos += 1;
            if !at_section_end(self) {
                let entries = self.block("option", |p| p.option())?;
                for (key, value, l) in entries {
                    apply_option(&mut options, &key, value, l)?;
                }
            }
        }
        match self.toks.get(self.pos) {
            Some(t) if t.tok == Tok::BlockClose => self.pos += 1,
            _ => return Err(self.unexpected("`@}`")),
        }
        let mut names = rows.iter().map(|r| r.name.clone()).chain(sig_name.clone());
        let name = names.next().ok_or_else(|| {
            Diagnostic::new(
                ErrorCode::BadExample,
                loc.line,
                loc.col,
                "an example block needs a signature or at least one row",
            )
        })?;
        if let Some(other) = rows.iter().map(|r| &r.name).chain(sig_name.iter()).find(|n| **n != name) {
            return Err(Diagnostic::new(
                ErrorCode::BadExample,
                loc.line,
                loc.col,
                format!("example block mixes rows for `{name}` and `{other}`"),
            ));
        }
        Ok(ExampleBlock {
            name,
            sig,
            rows,
            options,
            loc,
        })
    }

    fn row(&mut self) -> PResult<RowSrc> {
        let loc = self.loc();
        let name = self.lower("the function name")?;
        let mut inputs = Vec::new();
        while self.peek().is_some() && self.peek() != Some(&Tok::Equals) {
            inputs.push(self.atom()?);
        }
        self.expect(&Tok::Equals, "`=`")?;
        let output = self.expr()?;
        Ok(RowSrc { name, inputs, output, loc })
    }

    fn option(&mut self) -> PResult<(String, OptionValue, Loc)> {
        let loc = self.loc();
        let key = self.lower("an option name")?;
        self.expect(&Tok::Equals, "`=`")?;
        let value = match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                OptionValue::Int(n.parse().map_err(|_| self.error("integer out of range"))?)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let names = self.nested(|p| {
                    let mut names = Vec::new();
                    if p.eat(&Tok::RParen) {
                        return Ok(names);
                    }
                    loop {
                        let n = match p.peek() {
                            Some(Tok::Lower(n)) => {
                                let n = n.clone();
                                p.pos += 1;
                                n
                            }
                            _ => p.ctor_name()?,
                        };
                        names.push(n);
                        if p.eat(&Tok::Comma) {
                            continue;
                        }
                        p.expect(&Tok::RParen, "`,` or `)`")?;
                        return Ok(names);
                    }
                })?;
                OptionValue::Names(names)
            }
            _ => return Err(self.unexpected("an integer or a parenthesized name list")),
        };
        Ok((key, value, loc))
    }

    // ---- types ----

    fn starts_atype(&self) -> bool {
        matches!(self.peek(), Some(Tok::Lower(_) | Tok::Upper(_) | Tok::LParen | Tok::LBracket))
    }

    fn ty(&mut self) -> PResult<Type> {
        let dom = self.btype()?;
        if self.eat(&Tok::Arrow) {
            let cod = self.ty()?;
            Ok(Type::arrow(dom, cod))
        } else {
            Ok(dom)
        }
    }

    fn btype(&mut self) -> PResult<Type> {
        if let Some(Tok::Upper(h)) = self.peek() {
            let h = h.clone();
            self.pos += 1;
            let mut args = Vec::new();
            while self.starts_atype() {
                args.push(self.atype()?);
            }
            return Ok(Type::Data(h, args));
        }
        self.atype()
    }

    fn atype(&mut self) -> PResult<Type> {
        match self.peek() {
            Some(Tok::Lower(v)) => {
                let v = v.clone();
                self.pos += 1;
                Ok(Type::Rigid(v))
            }
            Some(Tok::Upper(h)) => {
                let h = h.clone();
                self.pos += 1;
                Ok(Type::Data(h, Vec::new()))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                self.nested(|p| {
                    let t = p.ty()?;
                    p.expect(&Tok::RParen, "`)`")?;
                    Ok(t)
                })
            }
            Some(Tok::LBracket) => {
                self.pos += 1;
                self.nested(|p| {
                    let t = p.ty()?;
                    p.expect(&Tok::RBracket, "`]`")?;
                    Ok(Type::Data(LIST.to_string(), vec![t]))
                })
            }
            _ => Err(self.unexpected("a type")),
        }
    }

    // ---- expressions ----

    fn expr(&mut self) -> PResult<Expr> {
        match self.peek() {
            Some(Tok::Backslash) => {
                self.pos += 1;
                let mut binders = vec![self.lower("a lambda binder")?];
                while let Some(Tok::Lower(x)) = self.peek() {
                    binders.push(x.clone());
                    self.pos += 1;
                }
                self.expect(&Tok::Arrow, "`->`")?;
                let body = self.expr()?;
                Ok(Expr::lams(binders, body))
            }
            Some(Tok::Case) => {
                self.pos += 1;
                let scrutinee = self.nested_until_of()?;
                self.expect(&Tok::Of, "`of`")?;
                let branches = self.block("case branch", |p| p.branch())?;
                Ok(Expr::case(scrutinee, branches))
            }
            _ => {
                let head = self.application()?;
                if self.eat(&Tok::Colon) {
                    let tail = self.expr()?;
                    Ok(Expr::apps(Expr::ctor(":"), [head, tail]))
                } else {
                    Ok(head)
                }
            }
        }
    }

    fn nested_until_of(&mut self) -> PResult<Expr> {
        self.nested(|p| p.expr())
    }

    fn branch(&mut self) -> PResult<MatchBranch> {
        let (ctor, binders) = if let (Some(Tok::Lower(x)), Some(Tok::Colon)) = (self.peek(), self.peek_at(1)) {
            let x = x.clone();
            self.pos += 2;
            let xs = self.lower("a binder")?;
            (":".to_string(), vec![x, xs])
        } else {
            let ctor = self.ctor_name()?;
            let mut binders = Vec::new();
            while let Some(Tok::Lower(x)) = self.peek() {
                binders.push(x.clone());
                self.pos += 1;
            }
            (ctor, binders)
        };
        self.expect(&Tok::Arrow, "`->`")?;
        let body = self.expr()?;
        Ok(MatchBranch { ctor, binders, body })
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Lower(_) | Tok::Upper(_) | Tok::Int(_) | Tok::Hole(_) | Tok::LParen | Tok::LBracket)
        )
    }

    fn application(&mut self) -> PResult<Expr> {
        let mut e = self.atom()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            e = Expr::app(e, arg);
        }
        Ok(e)
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.peek() {
            Some(Tok::Lower(x)) => {
                let x = x.clone();
                self.pos += 1;
                Ok(Expr::Var(x))
            }
            Some(Tok::Upper(k)) => {
                let k = k.clone();
                self.pos += 1;
                Ok(Expr::Ctor(k))
            }
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(Expr::Ctor(n))
            }
            Some(Tok::Hole(_)) => {
                self.pos += 1;
                let id = self.holes;
                self.holes += 1;
                Ok(Expr::Hole(id))
            }
            Some(Tok::LParen) => {
                if self.peek_at(1) == Some(&Tok::Colon) && self.peek_at(2) == Some(&Tok::RParen) {
                    self.pos += 3;
                    return Ok(Expr::ctor(":"));
                }
                self.pos += 1;
                self.nested(|p| {
                    let e = p.expr()?;
                    p.expect(&Tok::RParen, "`)`")?;
                    Ok(e)
                })
            }
            Some(Tok::LBracket) => {
                self.pos += 1;
                self.nested(|p| {
                    let mut items = Vec::new();
                    if !p.eat(&Tok::RBracket) {
                        loop {
                            items.push(p.expr()?);
                            if p.eat(&Tok::Comma) {
                                continue;
                            }
                            p.expect(&Tok::RBracket, "`,` or `]`")?;
                            break;
                        }
                    }
                    Ok(items
                        .into_iter()
                        .rev()
                        .fold(Expr::ctor("[]"), |tail, x| Expr::apps(Expr::ctor(":"), [x, tail])))
                })
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}

enum OptionValue {
    Int(usize),
    Names(Vec<String>),
}

fn apply_option(opts: &mut OptionMap, key: &str, value: OptionValue, loc: Loc) -> PResult<()> {
    let bad = |msg: String| Diagnostic::new(ErrorCode::UnknownOption, loc.line, loc.col, msg);
    match (key, value) {
        ("ctx", OptionValue::Names(ns)) => opts.ctx = Some(ns),
        ("recArg", OptionValue::Int(n)) => opts.rec_arg = Some(n),
        ("depth", OptionValue::Int(n)) if n > 0 => opts.depth = Some(n),
        ("maxCandidates", OptionValue::Int(n)) if n > 0 => opts.max_candidates = Some(n),
        ("ctx" | "recArg" | "depth" | "maxCandidates", _) => return Err(bad(format!("invalid value for option `{key}`"))),
        _ => return Err(bad(format!("unknown option `{key}`"))),
    }
    Ok(())
}

#[cfg(test)]
mod tests;
