//! Surface syntax: specification files, data formulas, and propositional
//! temporal formulas.
//!
//! ```text
//! spec_file   := header* "spec" [":"] ltl
//! header      := "structure" struct_expr ";" | "streams" INT ";" | "lookback" INT ";"
//!              | "constant" IDENT ["=" literal] ";"
//! struct_expr := "eq" | "dlo" | "aba" | "product" "(" struct_expr ("," struct_expr)* ")"
//! ltl         := ltl ("->" | "<->") ltl | ltl "|" ltl | ltl "&" ltl | ltl ("U" | "S") ltl
//!              | ("!" | "X" | "Y" | "G" | "F") ltl | "{" fo "}" | "TRUE" | "FALSE" | "(" ltl ")"
//! ```
//!
//! Binary operators are listed loosest first; `->`, `<->`, `U` and `S` group
//! to the right. Identifiers such as `YTRUE` or `XXFALSE` abbreviate unary
//! chains over a constant. Stream references are `x<i>` / `y<i>` with an
//! optional lag `[-j]`; `x` and `y` stand for `x1` and `y1`. Comments run
//! from `#` or `//` to the end of the line.

use std::fmt;

use crate::error::{Error, Result};
use crate::fo::{FixOp, Fixpoint, Formula, Term};
use crate::ltl::Ltl;
use crate::structure::{Element, Structure};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Int(s) => write!(f, "`{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

const SYMBOLS: &[&str] = &[
    "<->", "->", "&&", "||", "!=", "<=", ">=", "{", "}", "(", ")", "[", "]", ";", ":", ",", ".", "@", "!", "~",
    "&", "|", "=", "<", ">", "-", "/",
];

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start_col = col;
        if c.is_ascii_alphabetic() || c == '_' {
            let s: String = chars[i..]
                .iter()
                .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                .collect();
            i += s.len();
            col += s.len();
            out.push(Token {
                tok: Tok::Ident(s),
                line,
                col: start_col,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let s: String = chars[i..].iter().take_while(|c| c.is_ascii_digit()).collect();
            i += s.len();
            col += s.len();
            out.push(Token {
                tok: Tok::Int(s),
                line,
                col: start_col,
            });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                i += s.len();
                col += s.len();
                out.push(Token {
                    tok: Tok::Sym(s),
                    line,
                    col: start_col,
                });
            }
            None => {
                return Err(Error::Syntax {
                    line,
                    col,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

/// A reference to input (`x`) or output (`y`) stream `index` (1-based) at lag `lag`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StreamRef {
    pub output: bool,
    pub index: usize,
    pub lag: usize,
}

impl StreamRef {
    /// Canonical variable name: `x1`, `y2[-1]`.
    pub fn name(&self) -> String {
        let base = format!("{}{}", if self.output { 'y' } else { 'x' }, self.index);
        if self.lag == 0 {
            base
        } else {
            format!("{base}[-{}]", self.lag)
        }
    }

    pub fn from_name(name: &str) -> Option<StreamRef> {
        let (base, lag) = match name.split_once("[-") {
            Some((b, rest)) => (b, rest.strip_suffix(']')?.parse().ok()?),
            None => (name, 0),
        };
        let output = match base.chars().next()? {
            'x' => false,
            'y' => true,
            _ => return None,
        };
        let digits = &base[1..];
        let index = if digits.is_empty() {
            1
        } else if digits.chars().all(|c| c.is_ascii_digit()) && !digits.starts_with('0') {
            digits.parse().ok()?
        } else {
            return None;
        };
        Some(StreamRef { output, index, lag })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructExpr {
    Eq,
    Dlo,
    Aba,
    Product(Vec<StructExpr>),
}

impl StructExpr {
    pub fn build(&self) -> Structure {
        match self {
            StructExpr::Eq => Structure::eq(),
            StructExpr::Dlo => Structure::dlo(),
            StructExpr::Aba => Structure::aba(),
            StructExpr::Product(cs) => {
                Structure::product(cs.iter().map(|c| c.build()).collect()).expect("nonempty product")
            }
        }
    }
}

impl fmt::Display for StructExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructExpr::Eq => write!(f, "eq"),
            StructExpr::Dlo => write!(f, "dlo"),
            StructExpr::Aba => write!(f, "aba"),
            StructExpr::Product(cs) => {
                write!(f, "product(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstDecl {
    pub name: String,
    pub value: Option<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceSpec {
    pub structure_expr: StructExpr,
    /// The declared structure expanded by the declared constants.
    pub structure: Structure,
    pub streams: usize,
    pub lookback: usize,
    pub constants: Vec<ConstDecl>,
    pub formula: Ltl<Formula>,
}

impl SurfaceSpec {
    pub fn new(
        structure_expr: StructExpr,
        streams: usize,
        lookback: usize,
        constants: Vec<ConstDecl>,
        formula: Ltl<Formula>,
    ) -> Result<Self> {
        let base = structure_expr.build();
        let structure = if constants.is_empty() {
            base
        } else {
            base.with_constants(constants.iter().map(|c| (c.name.clone(), c.value.clone())).collect())?
        };
        Ok(SurfaceSpec {
            structure_expr,
            structure,
            streams,
            lookback,
            constants,
            formula,
        })
    }

    /// Every stream reference occurring free in an atom.
    pub fn stream_refs(&self) -> Vec<StreamRef> {
        let mut out = std::collections::BTreeSet::new();
        self.formula.for_each_atom(&mut |a: &Formula| {
            for v in a.free_vars() {
                if let Some(r) = StreamRef::from_name(&v) {
                    out.insert(r);
                }
            }
        });
        out.into_iter().collect()
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "structure {};", self.structure_expr)?;
        writeln!(f, "streams {};", self.streams)?;
        writeln!(f, "lookback {};", self.lookback)?;
        for c in &self.constants {
            match &c.value {
                Some(v) => writeln!(f, "constant {} = {v};", c.name)?,
                None => writeln!(f, "constant {};", c.name)?,
            }
        }
        let body = self.formula.map_atoms(&mut |a: &Formula| Ltl::Atom(format!("{{ {a} }}")));
        writeln!(f, "spec: {body}")
    }
}

/// Soft failures allow backtracking; hard ones abort the parse.
struct PErr {
    hard: bool,
    pos: usize,
    err: Error,
}

type PResult<T> = std::result::Result<T, PErr>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum FreeVars {
    /// Free identifiers must be stream references within the declared bounds.
    Streams { streams: usize, lookback: usize },
    /// Any free identifier is a variable.
    Any,
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    consts: Vec<String>,
    free: FreeVars,
    bound: Vec<String>,
    rels: Vec<(String, usize)>,
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "exists" | "forall" | "pfp" | "lfp" | "gfp" | "TRUE" | "FALSE")
}

fn unary_chain(s: &str) -> Option<(Vec<char>, bool)> {
    let (ops, val) = if let Some(p) = s.strip_suffix("TRUE") {
        (p, true)
    } else {
        let p = s.strip_suffix("FALSE")?;
        (p, false)
    };
    if !ops.is_empty() && ops.chars().all(|c| matches!(c, 'X' | 'Y' | 'G' | 'F')) {
        Some((ops.chars().collect(), val))
    } else {
        None
    }
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [Token], consts: Vec<String>, free: FreeVars) -> Self {
        Parser {
            toks,
            pos: 0,
            consts,
            free,
            bound: Vec::new(),
            rels: Vec::new(),
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, off: usize) -> &Tok {
        &self.toks[(self.pos + off).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn at_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn syntax(&self, msg: impl Into<String>) -> Error {
        let t = &self.toks[self.pos];
        Error::Syntax {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        }
    }

    fn soft(&self, msg: impl Into<String>) -> PErr {
        PErr {
            hard: false,
            pos: self.pos,
            err: self.syntax(msg),
        }
    }

    fn hard(&self, err: Error) -> PErr {
        PErr {
            hard: true,
            pos: self.pos,
            err,
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.soft(format!("expected `{s}`, found {}", self.peek())))
        }
    }

    fn expect_ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => Err(self.soft(format!("expected an identifier, found {t}"))),
        }
    }

    fn expect_int(&mut self) -> PResult<usize> {
        match self.peek().clone() {
            Tok::Int(s) => {
                self.bump();
                s.parse().map_err(|_| self.soft("integer out of range"))
            }
            t => Err(self.soft(format!("expected an integer, found {t}"))),
        }
    }

    // ---- temporal layer ----

    fn ltl<A>(&mut self, atom: &mut impl FnMut(&mut Self) -> PResult<Ltl<A>>) -> PResult<Ltl<A>> {
        let lhs = self.ltl_or(atom)?;
        if self.eat_sym("->") {
            Ok(Ltl::implies(lhs, self.ltl(atom)?))
        } else if self.eat_sym("<->") {
            Ok(Ltl::iff(lhs, self.ltl(atom)?))
        } else {
            Ok(lhs)
        }
    }

    fn ltl_or<A>(&mut self, atom: &mut impl FnMut(&mut Self) -> PResult<Ltl<A>>) -> PResult<Ltl<A>> {
        let mut lhs = self.ltl_and(atom)?;
        while self.eat_sym("|") || self.eat_sym("||") {
            lhs = Ltl::or(lhs, self.ltl_and(atom)?);
        }
        Ok(lhs)
    }

    fn ltl_and<A>(&mut self, atom: &mut impl FnMut(&mut Self) -> PResult<Ltl<A>>) -> PResult<Ltl<A>> {
        let mut lhs = self.ltl_until(atom)?;
        while self.eat_sym("&") || self.eat_sym("&&") {
            lhs = Ltl::and(lhs, self.ltl_until(atom)?);
        }
        Ok(lhs)
    }

    fn ltl_until<A>(&mut self, atom: &mut impl FnMut(&mut Self) -> PResult<Ltl<A>>) -> PResult<Ltl<A>> {
        let lhs = self.ltl_unary(atom)?;
        if self.at_ident("U") {
            self.bump();
            Ok(Ltl::until(lhs, self.ltl_until(atom)?))
        } else if self.at_ident("S") {
            self.bump();
            Ok(Ltl::since(lhs, self.ltl_until(atom)?))
        } else {
            Ok(lhs)
        }
    }

    fn ltl_unary<A>(&mut self, atom: &mut impl FnMut(&mut Self) -> PResult<Ltl<A>>) -> PResult<Ltl<A>> {
        if self.eat_sym("!") || self.eat_sym("~") {
            return Ok(Ltl::not(self.ltl_unary(atom)?));
        }
        if let Tok::Ident(s) = self.peek().clone() {
            let op: Option<fn(Ltl<A>) -> Ltl<A>> = match s.as_str() {
                "X" => Some(Ltl::next),
                "Y" => Some(Ltl::yesterday),
                "G" => Some(Ltl::globally),
                "F" => Some(Ltl::finally),
                _ => None,
            };
            if let Some(op) = op {
                self.bump();
                return Ok(op(self.ltl_unary(atom)?));
            }
            if s == "TRUE" || s == "FALSE" {
                self.bump();
                return Ok(if s == "TRUE" { Ltl::True } else { Ltl::False });
            }
            if let Some((ops, val)) = unary_chain(&s) {
                self.bump();
                let mut f = if val { Ltl::True } else { Ltl::False };
                for c in ops.into_iter().rev() {
                    f = match c {
                        'X' => Ltl::next(f),
                        'Y' => Ltl::yesterday(f),
                        'G' => Ltl::globally(f),
                        _ => Ltl::finally(f),
                    };
                }
                return Ok(f);
            }
        }
        if self.eat_sym("(") {
            let f = self.ltl(atom)?;
            self.expect_sym(")")?;
            return Ok(f);
        }
        atom(self)
    }

    fn data_atom(&mut self) -> PResult<Ltl<Formula>> {
        if !self.eat_sym("{") {
            return Err(self.soft(format!("expected a temporal formula, found {}", self.peek())));
        }
        let f = self.fo()?;
        self.expect_sym("}")?;
        Ok(Ltl::Atom(f))
    }

    fn prop_atom(&mut self) -> PResult<Ltl<String>> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) && !matches!(s.as_str(), "U" | "S") => {
                self.bump();
                Ok(Ltl::Atom(s))
            }
            t => Err(self.soft(format!("expected a proposition, found {t}"))),
        }
    }

    // ---- first-order layer ----

    fn fo(&mut self) -> PResult<Formula> {
        let lhs = self.fo_or()?;
        if self.eat_sym("->") {
            Ok(Formula::implies(lhs, self.fo()?))
        } else if self.eat_sym("<->") {
            let rhs = self.fo()?;
            Ok(Formula::and(
                Formula::implies(lhs.clone(), rhs.clone()),
                Formula::implies(rhs, lhs),
            ))
        } else {
            Ok(lhs)
        }
    }

    fn fo_or(&mut self) -> PResult<Formula> {
        let mut lhs = self.fo_and()?;
        while self.eat_sym("|") || self.eat_sym("||") {
            lhs = Formula::or(lhs, self.fo_and()?);
        }
        Ok(lhs)
    }

    fn fo_and(&mut self) -> PResult<Formula> {
        let mut lhs = self.fo_unary()?;
        while self.eat_sym("&") || self.eat_sym("&&") {
            lhs = Formula::and(lhs, self.fo_unary()?);
        }
        Ok(lhs)
    }

    /// Tries alternatives in order, keeping the error that got furthest.
    fn alt<T>(&mut self, options: &mut [&mut dyn FnMut(&mut Self) -> PResult<T>]) -> PResult<T> {
        let start = self.pos;
        let mut best: Option<PErr> = None;
        for opt in options.iter_mut() {
            self.pos = start;
            match opt(self) {
                Ok(v) => return Ok(v),
                Err(e) if e.hard => return Err(e),
                Err(e) => {
                    if best.as_ref().is_none_or(|b| e.pos >= b.pos) {
                        best = Some(e);
                    }
                }
            }
        }
        self.pos = start;
        Err(best.expect("at least one alternative"))
    }

    fn fo_unary(&mut self) -> PResult<Formula> {
        if self.eat_sym("!") {
            return Ok(Formula::not(self.fo_unary()?));
        }
        if let Tok::Ident(s) = self.peek().clone() {
            match s.as_str() {
                "exists" | "forall" => {
                    self.bump();
                    let v = self.expect_ident()?;
                    self.expect_sym(".")?;
                    self.bound.push(v.clone());
                    let body = self.fo();
                    self.bound.pop();
                    let body = body?;
                    return Ok(if s == "exists" {
                        Formula::exists(&v, body)
                    } else {
                        Formula::forall(&v, body)
                    });
                }
                "pfp" | "lfp" | "gfp" => return self.fixpoint(),
                "TRUE" => {
                    self.bump();
                    return Ok(Formula::True);
                }
                "FALSE" => {
                    self.bump();
                    return Ok(Formula::False);
                }
                _ => {
                    if self.rels.iter().any(|(r, _)| *r == s) && self.peek_at(1) == &Tok::Sym("(") {
                        return self.rel_app();
                    }
                }
            }
        }
        self.alt(&mut [
            &mut |p: &mut Self| p.relation_atom(),
            &mut |p: &mut Self| {
                if p.eat_sym("~") {
                    Ok(Formula::not(p.fo_unary()?))
                } else if p.eat_sym("(") {
                    let f = p.fo()?;
                    p.expect_sym(")")?;
                    Ok(f)
                } else {
                    Err(p.soft(format!("expected a formula, found {}", p.peek())))
                }
            },
        ])
    }

    fn fixpoint(&mut self) -> PResult<Formula> {
        let op = match self.bump() {
            Tok::Ident(s) if s == "pfp" => FixOp::Pfp,
            Tok::Ident(s) if s == "lfp" => FixOp::Lfp,
            _ => FixOp::Gfp,
        };
        let rel = self.expect_ident()?;
        self.expect_sym("(")?;
        let mut params = Vec::new();
        if !self.at_sym(")") {
            loop {
                params.push(self.expect_ident()?);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym(")")?;
        self.expect_sym(".")?;
        let nb = self.bound.len();
        self.bound.extend(params.iter().cloned());
        self.rels.push((rel.clone(), params.len()));
        let body = self.fo();
        self.rels.pop();
        self.bound.truncate(nb);
        let body = body?;
        self.expect_sym("@")?;
        self.expect_sym("(")?;
        let args = self.term_list()?;
        if args.len() != params.len() {
            return Err(self.hard(Error::Arity(format!(
                "{rel} has {} parameters but is applied to {} terms",
                params.len(),
                args.len()
            ))));
        }
        Ok(Formula::Fix(Box::new(Fixpoint {
            op,
            rel,
            params,
            body,
            args,
        })))
    }

    fn term_list(&mut self) -> PResult<Vec<Term>> {
        let mut args = Vec::new();
        if !self.at_sym(")") {
            loop {
                args.push(self.term()?);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym(")")?;
        Ok(args)
    }

    fn rel_app(&mut self) -> PResult<Formula> {
        let name = self.expect_ident()?;
        self.expect_sym("(")?;
        let args = self.term_list()?;
        let arity = self.rels.iter().rev().find(|(r, _)| *r == name).map(|(_, a)| *a).unwrap_or(0);
        if args.len() != arity {
            return Err(self.hard(Error::Arity(format!(
                "{name} has arity {arity} but is applied to {} terms",
                args.len()
            ))));
        }
        Ok(Formula::Rel(name, args))
    }

    fn relop(&mut self) -> Option<&'static str> {
        ["=", "!=", "<", "<=", ">", ">="].into_iter().find(|&op| self.eat_sym(op)).map(|v| v as _)
    }

    fn at_relop(&self) -> bool {
        ["=", "!=", "<", "<=", ">", ">="].iter().any(|op| self.at_sym(op))
    }

    fn relation_atom(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        let op = self
            .relop()
            .ok_or_else(|| self.soft(format!("expected a relation symbol, found {}", self.peek())))?;
        // A greedy right-hand side followed by another relation symbol means a
        // Boolean connective was swallowed; retry with a simple term.
        let save = self.pos;
        let mut rhs = self.term()?;
        if self.at_relop() {
            self.pos = save;
            rhs = self.term_unary()?;
        }
        Ok(match op {
            "=" => Formula::eq(lhs, rhs),
            "!=" => Formula::not(Formula::eq(lhs, rhs)),
            "<" => Formula::lt(lhs, rhs),
            ">" => Formula::lt(rhs, lhs),
            "<=" => Formula::or(Formula::lt(lhs.clone(), rhs.clone()), Formula::eq(lhs, rhs)),
            _ => Formula::or(Formula::lt(rhs.clone(), lhs.clone()), Formula::eq(lhs, rhs)),
        })
    }

    fn term(&mut self) -> PResult<Term> {
        let mut lhs = self.term_meet()?;
        while self.at_sym("|") {
            let save = self.pos;
            self.bump();
            match self.term_meet() {
                Ok(r) => lhs = Term::Join(Box::new(lhs), Box::new(r)),
                Err(e) if e.hard => return Err(e),
                Err(_) => {
                    self.pos = save;
                    break;
                }
            }
        }
        Ok(lhs)
    }

    fn term_meet(&mut self) -> PResult<Term> {
        let mut lhs = self.term_unary()?;
        while self.at_sym("&") {
            let save = self.pos;
            self.bump();
            match self.term_unary() {
                Ok(r) => lhs = Term::Meet(Box::new(lhs), Box::new(r)),
                Err(e) if e.hard => return Err(e),
                Err(_) => {
                    self.pos = save;
                    break;
                }
            }
        }
        Ok(lhs)
    }

    fn term_unary(&mut self) -> PResult<Term> {
        if self.eat_sym("~") {
            return Ok(Term::Compl(Box::new(self.term_unary()?)));
        }
        let mut t = self.term_primary()?;
        while self.at_sym(".") && matches!(self.peek_at(1), Tok::Int(_)) {
            self.bump();
            let i = self.expect_int()?;
            if i == 0 {
                return Err(self.hard(self.syntax("projection indices start at 1")));
            }
            t = Term::Proj(Box::new(t), i - 1);
        }
        Ok(t)
    }

    fn term_primary(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Int(s) if s == "0" => {
                self.bump();
                Ok(Term::Zero)
            }
            Tok::Int(s) if s == "1" => {
                self.bump();
                Ok(Term::One)
            }
            Tok::Sym("(") => {
                self.bump();
                let t = self.term()?;
                self.expect_sym(")")?;
                Ok(t)
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                if self.rels.iter().any(|(r, _)| *r == s) {
                    return Err(self.soft(format!("relation `{s}` used as a term")));
                }
                let at = self.pos;
                self.bump();
                self.resolve_ident(s, at)
            }
            t => Err(self.soft(format!("expected a term, found {t}"))),
        }
    }

    fn resolve_ident(&mut self, s: String, at: usize) -> PResult<Term> {
        if self.bound.contains(&s) {
            return Ok(Term::Var(s));
        }
        if self.consts.contains(&s) {
            return Ok(Term::Const(s));
        }
        match self.free {
            FreeVars::Any => Ok(Term::Var(s)),
            FreeVars::Streams { streams, lookback } => {
                let lag = if self.at_sym("[") && self.peek_at(1) == &Tok::Sym("-") {
                    self.bump();
                    self.bump();
                    let j = self.expect_int()?;
                    self.expect_sym("]")?;
                    j
                } else {
                    0
                };
                let undeclared = |kind: &'static str| PErr {
                    hard: true,
                    pos: at,
                    err: Error::Undeclared { kind, name: s.clone() },
                };
                let mut r = match StreamRef::from_name(&s) {
                    Some(r) if r.index >= 1 && r.index <= streams => r,
                    Some(_) => return Err(undeclared("stream")),
                    None => return Err(undeclared("identifier")),
                };
                r.lag = lag;
                if lag > lookback {
                    return Err(self.hard(Error::LagExceeded {
                        stream: s.clone(),
                        lag,
                        lookback,
                    }));
                }
                Ok(Term::Var(r.name()))
            }
        }
    }

    fn struct_expr(&mut self) -> PResult<StructExpr> {
        let name = self.expect_ident()?;
        match name.as_str() {
            "eq" => Ok(StructExpr::Eq),
            "dlo" => Ok(StructExpr::Dlo),
            "aba" => Ok(StructExpr::Aba),
            "product" => {
                self.expect_sym("(")?;
                let mut cs = vec![self.struct_expr()?];
                while self.eat_sym(",") {
                    cs.push(self.struct_expr()?);
                }
                self.expect_sym(")")?;
                Ok(StructExpr::Product(cs))
            }
            other => Err(self.hard(Error::Undeclared {
                kind: "structure",
                name: other.to_string(),
            })),
        }
    }

    /// Raw literal text up to the next `;`.
    fn literal_text(&mut self) -> String {
        let mut s = String::new();
        while !self.at_sym(";") && self.peek() != &Tok::Eof {
            match self.bump() {
                Tok::Ident(x) | Tok::Int(x) => s.push_str(&x),
                Tok::Sym(x) => s.push_str(x),
                Tok::Eof => {}
            }
        }
        s
    }

    fn finish(&self) -> PResult<()> {
        if self.peek() == &Tok::Eof {
            Ok(())
        } else {
            Err(self.soft(format!("unexpected {} after the formula", self.peek())))
        }
    }
}

fn unwrap_perr<T>(r: PResult<T>) -> Result<T> {
    r.map_err(|e| e.err)
}

/// Parses a specification file.
pub fn parse_spec(text: &str) -> Result<SurfaceSpec> {
    let toks = lex(text)?;
    let mut p = Parser::new(&toks, Vec::new(), FreeVars::Any);
    let mut structure = None;
    let mut streams = 1;
    let mut lookback = 0;
    let mut consts: Vec<(String, Option<String>)> = Vec::new();
    loop {
        let Tok::Ident(kw) = p.peek().clone() else {
            return Err(p.syntax(format!("expected a header or `spec`, found {}", p.peek())));
        };
        p.bump();
        match kw.as_str() {
            "structure" => structure = Some(unwrap_perr(p.struct_expr())?),
            "streams" => streams = unwrap_perr(p.expect_int())?,
            "lookback" => lookback = unwrap_perr(p.expect_int())?,
            "constant" => {
                let name = unwrap_perr(p.expect_ident())?;
                let value = if p.eat_sym("=") { Some(p.literal_text()) } else { None };
                consts.push((name, value));
            }
            "spec" => {
                p.eat_sym(":");
                break;
            }
            other => return Err(p.syntax(format!("unknown header `{other}`"))),
        }
        unwrap_perr(p.expect_sym(";"))?;
    }
    if streams == 0 {
        return Err(Error::Precondition("at least one stream is required".into()));
    }
    let structure_expr = structure.ok_or_else(|| p.syntax("missing `structure` header"))?;
    let base = structure_expr.build();
    let constants = consts
        .into_iter()
        .map(|(name, v)| {
            Ok(ConstDecl {
                value: v.map(|v| base.parse_element(&v)).transpose()?,
                name,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    p.consts = constants.iter().map(|c| c.name.clone()).collect();
    p.free = FreeVars::Streams { streams, lookback };
    let formula = unwrap_perr(p.ltl(&mut |p: &mut Parser| p.data_atom()))?;
    unwrap_perr(p.finish())?;
    SurfaceSpec::new(structure_expr, streams, lookback, constants, formula)
}

/// Parses a standalone data formula; identifiers other than `constants`
/// are variables.
pub fn parse_fo(text: &str, constants: &[String]) -> Result<Formula> {
    let toks = lex(text)?;
    let mut p = Parser::new(&toks, constants.to_vec(), FreeVars::Any);
    let f = unwrap_perr(p.fo())?;
    unwrap_perr(p.finish())?;
    Ok(f)
}

/// Parses a propositional temporal formula (atoms are identifiers).
pub fn parse_prop_ltl(text: &str) -> Result<Ltl<String>> {
    let toks = lex(text)?;
    let mut p = Parser::new(&toks, Vec::new(), FreeVars::Any);
    let f = unwrap_perr(p.ltl(&mut |p: &mut Parser| p.prop_atom()))?;
    unwrap_perr(p.finish())?;
    Ok(f)
}

pub fn parse_struct_expr(text: &str) -> Result<StructExpr> {
    let toks = lex(text)?;
    let mut p = Parser::new(&toks, Vec::new(), FreeVars::Any);
    let e = unwrap_perr(p.struct_expr())?;
    unwrap_perr(p.finish())?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fo::var;

    #[test]
    fn echo_spec() {
        let s = parse_spec("structure eq; streams 1; lookback 0; spec G { y1 = x1 }").unwrap();
        assert_eq!(s.streams, 1);
        assert_eq!(s.lookback, 0);
        assert_eq!(s.formula, Ltl::globally(Ltl::Atom(Formula::eq(var("y1"), var("x1")))));
    }

    #[test]
    fn lagged_reference() {
        let s = parse_spec("structure eq; streams 1; lookback 1; spec G ( YTRUE -> { x1 = y1[-1] } )").unwrap();
        assert_eq!(
            s.formula,
            Ltl::globally(Ltl::implies(
                Ltl::yesterday(Ltl::True),
                Ltl::Atom(Formula::eq(var("x1"), var("y1[-1]")))
            ))
        );
        assert_eq!(
            s.stream_refs(),
            vec![
                StreamRef { output: false, index: 1, lag: 0 },
                StreamRef { output: true, index: 1, lag: 1 }
            ]
        );
    }

    #[test]
    fn lag_exceeding_lookback() {
        let e = parse_spec("structure eq; streams 1; lookback 1; spec G { y1[-2] = x1 }").unwrap_err();
        assert!(matches!(e, Error::LagExceeded { lag: 2, lookback: 1, .. }), "{e}");
    }

    #[test]
    fn undeclared_stream_and_constant() {
        let e = parse_spec("structure eq; streams 1; spec G { y2 = x1 }").unwrap_err();
        assert!(matches!(e, Error::Undeclared { kind: "stream", .. }), "{e}");
        let e = parse_spec("structure eq; streams 1; spec G { y1 = c }").unwrap_err();
        assert!(matches!(e, Error::Undeclared { .. }), "{e}");
    }

    #[test]
    fn syntax_error_position() {
        let e = parse_spec("structure eq;\nspec G { y1 = }").unwrap_err();
        match e {
            Error::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn aliases_and_synonyms() {
        let a = parse_spec("structure eq; lookback 1; spec G { y = x[-0] }").unwrap();
        let b = parse_spec("structure eq; lookback 1; spec G { y1 = x1 }").unwrap();
        assert_eq!(a.formula, b.formula);
    }

    #[test]
    fn boolean_algebra_terms_and_connectives() {
        let s = parse_spec("structure aba; spec G{ (y & x = 0) & ~(y = 0) }").unwrap();
        let y = || var("y1");
        let x = || var("x1");
        let expect = Formula::and(
            Formula::eq(Term::Meet(Box::new(y()), Box::new(x())), Term::Zero),
            Formula::not(Formula::eq(y(), Term::Zero)),
        );
        assert_eq!(s.formula, Ltl::globally(Ltl::Atom(expect)));
        // Connective between atoms is not swallowed by a term.
        let f = parse_fo("a = b & b = c", &[]).unwrap();
        assert_eq!(
            f,
            Formula::and(Formula::eq(var("a"), var("b")), Formula::eq(var("b"), var("c")))
        );
    }

    #[test]
    fn fixpoint_syntax() {
        let f = parse_fo(
            "lfp R(x). (x = a | x = b | exists u. exists v. (R(u) & R(v) & u < x & x < v)) @ (x)",
            &["a".into(), "b".into()],
        )
        .unwrap();
        let Formula::Fix(fx) = &f else { panic!() };
        assert_eq!(fx.op, FixOp::Lfp);
        assert_eq!(fx.params, ["x"]);
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), ["x"]);
        assert!(parse_fo("lfp R(x). R(x, x) @ (x)", &[]).is_err());
    }

    #[test]
    fn printed_formulas_reparse() {
        for src in [
            "exists z. (x < z & z < y)",
            "~(a & ~b) = 0 -> !(a = 1)",
            "pfp R(x). !R(x) @ (y)",
            "x.1 = y.2 | x != y",
        ] {
            let f = parse_fo(src, &[]).unwrap();
            assert_eq!(parse_fo(&f.to_string(), &[]).unwrap(), f, "{f}");
        }
    }

    #[test]
    fn spec_round_trip() {
        let src = "structure product(eq, dlo); streams 2; lookback 2; constant c = (3|1/2); constant d;\n\
                   spec: G ((YTRUE -> { y2.2 < x1[-2].2 }) & ({ x2 = c } U { y1 != d })) & F X !{ y1[-1] = y2 }";
        let s = parse_spec(src).unwrap();
        let again = parse_spec(&s.to_string()).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn propositional_formulas() {
        let f = parse_prop_ltl("G (P_a -> X (q1 | !q2)) & (a U b) <-> YYTRUE").unwrap();
        assert_eq!(parse_prop_ltl(&f.to_string()).unwrap(), f);
        assert_eq!(parse_prop_ltl("XXTRUE").unwrap(), Ltl::next(Ltl::next(Ltl::True)));
    }

    #[test]
    fn stream_names() {
        let r = StreamRef::from_name("y12[-3]").unwrap();
        assert_eq!((r.output, r.index, r.lag), (true, 12, 3));
        assert_eq!(r.name(), "y12[-3]");
        assert!(StreamRef::from_name("z1").is_none());
        assert!(StreamRef::from_name("x01").is_none());
    }
}
