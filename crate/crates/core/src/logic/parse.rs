use super::{Equation, PpFormula, Quasiequation, Term};
use crate::algebra::Signature;
use crate::{Error, Result};

/// A 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(usize),
    Punct(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: Pos,
}

const PUNCT: [&str; 14] = [":=", "=>", "->", "(", ")", "[", "]", "{", "}", ",", ";", ":", "=", "&"];
const PUNCT1: [&str; 3] = [".", "/", "+"];

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
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
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                pos,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - start;
            let s: String = chars[start..i].iter().collect();
            let n = s
                .parse()
                .map_err(|_| syntax(pos, format!("number `{}` too large", s)))?;
            out.push(Token { tok: Tok::Num(n), pos });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let p = PUNCT
            .iter()
            .chain(PUNCT1.iter())
            .find(|p| rest.starts_with(**p))
            .ok_or_else(|| syntax(pos, format!("unexpected character `{}`", c)))?;
        i += p.len();
        col += p.len();
        out.push(Token {
            tok: Tok::Punct(p),
            pos,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, column: col },
    });
    Ok(out)
}

fn syntax(pos: Pos, message: impl Into<String>) -> Error {
    Error::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            tokens: lex(text)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> Error {
        let found = match self.peek() {
            Tok::Ident(s) => format!("`{}`", s),
            Tok::Num(n) => format!("`{}`", n),
            Tok::Punct(p) => format!("`{}`", p),
            Tok::Eof => "end of input".to_string(),
        };
        syntax(self.pos(), format!("expected {}, found {}", expected, found))
    }

    fn is(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn eat(&mut self, p: &str) -> bool {
        if self.is(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<()> {
        if self.eat(p) {
            Ok(())
        } else {
            Err(self.error(&format!("`{}`", p)))
        }
    }

    fn is_keyword(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == k)
    }

    fn keyword(&mut self, k: &str) -> Result<()> {
        if self.is_keyword(k) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("`{}`", k)))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.bump().pos)),
            _ => Err(self.error("identifier")),
        }
    }

    fn number(&mut self) -> Result<usize> {
        match *self.peek() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.error("number")),
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => Err(self.error("end of input")),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let (name, _) = self.ident()?;
        if !self.eat("(") {
            return Ok(Term::Var(name));
        }
        let mut args = Vec::new();
        if !self.eat(")") {
            loop {
                args.push(self.term()?);
                if self.eat(")") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(Term::App(name, args))
    }

    fn equation(&mut self) -> Result<Equation> {
        let left = self.term()?;
        self.expect("=")?;
        Ok(Equation::new(left, self.term()?))
    }

    fn conjunction(&mut self) -> Result<Vec<Equation>> {
        let mut out = vec![self.equation()?];
        while self.eat("&") {
            out.push(self.equation()?);
        }
        Ok(out)
    }

    fn quasiequation(&mut self) -> Result<Quasiequation> {
        if self.eat("=>") {
            return Ok(Quasiequation::equation(self.equation()?));
        }
        let pos = self.pos();
        let mut conj = self.conjunction()?;
        if self.eat("=>") {
            return Ok(Quasiequation {
                premises: conj,
                conclusion: self.equation()?,
            });
        }
        if conj.len() != 1 {
            return Err(syntax(pos, "a conjunction needs `=>` and a conclusion"));
        }
        Ok(Quasiequation::equation(conj.remove(0)))
    }

    fn pp_formula(&mut self) -> Result<PpFormula> {
        let mut bound = Vec::new();
        if self.is_keyword("exists") {
            self.bump();
            self.expect("[")?;
            if !self.eat("]") {
                loop {
                    bound.push(self.ident()?.0);
                    if self.eat("]") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
            self.expect(".")?;
        }
        let pos = self.pos();
        PpFormula::new(bound, self.conjunction()?).map_err(|e| syntax(pos, e.to_string()))
    }

    fn table(&mut self) -> Result<RawTable> {
        if let Tok::Num(n) = *self.peek() {
            self.bump();
            return Ok(RawTable::Elem(n));
        }
        self.expect("[")?;
        let mut rows = Vec::new();
        if !self.eat("]") {
            loop {
                rows.push(self.table()?);
                if self.eat("]") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(RawTable::Rows(rows))
    }

    fn decl(&mut self) -> Result<Decl> {
        let pos = self.pos();
        let (kw, _) = self.ident()?;
        let kind = match kw.as_str() {
            "signature" => {
                let (name, _) = self.ident()?;
                self.expect("{")?;
                let mut symbols = Vec::new();
                while !self.eat("}") {
                    let (sym, p) = self.ident()?;
                    self.expect("/")?;
                    symbols.push((sym, self.number()?, p));
                    self.eat(";");
                }
                DeclKind::Signature { name, symbols }
            }
            "algebra" => {
                let (name, _) = self.ident()?;
                self.expect(":")?;
                let (signature, _) = self.ident()?;
                self.expect("{")?;
                self.keyword("universe")?;
                let size = self.number()?;
                self.eat(";");
                let mut ops = Vec::new();
                while !self.eat("}") {
                    self.keyword("op")?;
                    let (sym, p) = self.ident()?;
                    self.expect("=")?;
                    ops.push((sym, self.table()?, p));
                    self.eat(";");
                }
                DeclKind::Algebra {
                    name,
                    signature,
                    size,
                    ops,
                }
            }
            "quasivariety" => {
                let (name, _) = self.ident()?;
                self.expect(":")?;
                let (signature, _) = self.ident()?;
                self.expect("=")?;
                let body = if self.is_keyword("generated") {
                    self.bump();
                    self.expect("(")?;
                    let mut gens = Vec::new();
                    loop {
                        gens.push(self.ident()?);
                        if self.eat(")") {
                            break;
                        }
                        self.expect(",")?;
                    }
                    QuasivarietyBody::Generated(gens)
                } else if self.is_keyword("axioms") {
                    self.bump();
                    self.expect("{")?;
                    let mut axioms = Vec::new();
                    while !self.eat("}") {
                        let pos = self.pos();
                        axioms.push(AxiomDecl {
                            axiom: self.quasiequation()?,
                            pos,
                        });
                        if !self.is("}") {
                            self.expect(";")?;
                        }
                    }
                    QuasivarietyBody::Axioms(axioms)
                } else {
                    return Err(self.error("`generated` or `axioms`"));
                };
                DeclKind::Quasivariety { name, signature, body }
            }
            "ppop" => {
                let (name, _) = self.ident()?;
                self.expect("/")?;
                let arity = self.number()?;
                self.keyword("over")?;
                let (signature, _) = self.ident()?;
                self.expect(":=")?;
                DeclKind::PpOp {
                    name,
                    arity,
                    signature,
                    formula: self.pp_formula()?,
                }
            }
            "expansion" => {
                let (name, _) = self.ident()?;
                self.expect(":=")?;
                let (base, _) = self.ident()?;
                let body = if self.eat("+") {
                    self.expect("{")?;
                    let mut ops = Vec::new();
                    while !self.eat("}") {
                        let (sym, p) = self.ident()?;
                        self.expect(":=")?;
                        ops.push((sym, self.ident()?.0, p));
                        self.eat(";");
                    }
                    ExpansionBody::PpOps(ops)
                } else if self.eat("->") {
                    ExpansionBody::Target(self.ident()?.0)
                } else {
                    return Err(self.error("`+` or `->`"));
                };
                DeclKind::Expansion { name, base, body }
            }
            "translation" => {
                let (name, _) = self.ident()?;
                self.expect(":")?;
                let (source, _) = self.ident()?;
                self.expect("->")?;
                let (target, _) = self.ident()?;
                self.expect("{")?;
                let mut map = Vec::new();
                while !self.eat("}") {
                    let (sym, p) = self.ident()?;
                    self.expect(":=")?;
                    map.push((sym, self.term()?, p));
                    self.eat(";");
                }
                DeclKind::Translation {
                    name,
                    source,
                    target,
                    map,
                }
            }
            _ => {
                return Err(syntax(
                    pos,
                    format!(
                        "unknown declaration `{}` (expected signature, algebra, quasivariety, ppop, expansion or translation)",
                        kw
                    ),
                ))
            }
        };
        Ok(Decl { kind, pos })
    }
}

/// An operation table as written: a bare element or nested rows.
#[derive(Clone, Debug, PartialEq)]
pub enum RawTable {
    Elem(usize),
    Rows(Vec<RawTable>),
}

impl RawTable {
    /// Flattens a table of the given depth into row-major order.
    pub fn flatten(&self, depth: usize, width: usize) -> std::result::Result<Vec<usize>, String> {
        let mut out = Vec::new();
        self.flatten_into(depth, width, &mut out)?;
        Ok(out)
    }

    fn flatten_into(&self, depth: usize, width: usize, out: &mut Vec<usize>) -> std::result::Result<(), String> {
        match (self, depth) {
            (RawTable::Elem(e), 0) => {
                out.push(*e);
                Ok(())
            }
            (RawTable::Elem(_), _) => Err(format!("expected a list nested {} deep, found an element", depth)),
            (RawTable::Rows(_), 0) => Err("expected an element, found a list".into()),
            (RawTable::Rows(rows), _) => {
                if rows.len() != width {
                    return Err(format!(
                        "expected a row of length {}, found length {}",
                        width,
                        rows.len()
                    ));
                }
                rows.iter().try_for_each(|r| r.flatten_into(depth - 1, width, out))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomDecl {
    pub axiom: Quasiequation,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum QuasivarietyBody {
    Generated(Vec<(String, Pos)>),
    Axioms(Vec<AxiomDecl>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExpansionBody {
    /// `new symbol := ppop name`
    PpOps(Vec<(String, String, Pos)>),
    Target(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum DeclKind {
    Signature {
        name: String,
        symbols: Vec<(String, usize, Pos)>,
    },
    Algebra {
        name: String,
        signature: String,
        size: usize,
        ops: Vec<(String, RawTable, Pos)>,
    },
    Quasivariety {
        name: String,
        signature: String,
        body: QuasivarietyBody,
    },
    PpOp {
        name: String,
        arity: usize,
        signature: String,
        formula: PpFormula,
    },
    Expansion {
        name: String,
        base: String,
        body: ExpansionBody,
    },
    Translation {
        name: String,
        source: String,
        target: String,
        map: Vec<(String, Term, Pos)>,
    },
}

/// A top-level workspace declaration. Terms inside are unresolved: bare
/// identifiers are variables until checked against a signature.
#[derive(Clone, Debug, PartialEq)]
pub struct Decl {
    pub kind: DeclKind,
    pub pos: Pos,
}

impl Decl {
    pub fn name(&self) -> &str {
        match &self.kind {
            DeclKind::Signature { name, .. }
            | DeclKind::Algebra { name, .. }
            | DeclKind::Quasivariety { name, .. }
            | DeclKind::PpOp { name, .. }
            | DeclKind::Expansion { name, .. }
            | DeclKind::Translation { name, .. } => name,
        }
    }
}

pub fn parse_workspace(text: &str) -> Result<Vec<Decl>> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    while *p.peek() != Tok::Eof {
        out.push(p.decl()?);
        p.eat(";");
    }
    Ok(out)
}

fn parse_with<T>(text: &str, f: impl FnOnce(&mut Parser) -> Result<T>) -> Result<T> {
    let mut p = Parser::new(text)?;
    let out = f(&mut p)?;
    p.finish()?;
    Ok(out)
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term> {
    parse_with(text, Parser::term)?.resolve(sig)
}

pub fn parse_equation(text: &str, sig: &Signature) -> Result<Equation> {
    parse_with(text, Parser::equation)?.resolve(sig)
}

pub fn parse_quasiequation(text: &str, sig: &Signature) -> Result<Quasiequation> {
    parse_with(text, Parser::quasiequation)?.resolve(sig)
}

pub fn parse_pp_formula(text: &str, sig: &Signature) -> Result<PpFormula> {
    parse_with(text, Parser::pp_formula)?.resolve(sig)
}
