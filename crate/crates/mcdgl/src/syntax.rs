//! Lexer and parser for problem files.
//!
//! A file is a header line naming the kind of problem followed by one
//! statement per line. `#` starts a comment. See `docs/input-format.md`.

use mcdgl_core::Scalar;
use num_bigint::BigInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {}, column {}: {message}", pos.line, pos.column)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

type PResult<T> = Result<T, ParseError>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: Pos,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(line: usize, text: &str) -> PResult<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos {
            line,
            column: i + 1,
        };
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            break;
        } else if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                pos,
            });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Int(digits.parse().expect("ascii digits")),
                pos,
            });
        } else if "+-*/^[](),=:;|".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                pos,
            });
            i += 1;
        } else {
            return Err(ParseError::new(pos, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// Bracket expression: generator names, rational scalars, `[a,b]`, `+`,
/// `-`, parentheses and `ad(x)^k y`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Zero(Pos),
    Name(String, Pos),
    Scale(Scalar, Box<Expr>),
    Sum(Vec<Expr>),
    Bracket(Box<Expr>, Box<Expr>, Pos),
    Ad {
        x: Box<Expr>,
        power: usize,
        y: Box<Expr>,
        pos: Pos,
    },
}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Zero(p) | Expr::Name(_, p) | Expr::Bracket(_, _, p) => *p,
            Expr::Ad { pos, .. } => *pos,
            Expr::Scale(_, e) => e.pos(),
            Expr::Sum(terms) => terms.first().map(Expr::pos).unwrap_or(Pos { line: 0, column: 0 }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    FreeDgl,
    GradedAlgebra,
    NilpotentLie,
}

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::FreeDgl => "free-dgl",
            Kind::GradedAlgebra => "graded-algebra",
            Kind::NilpotentLie => "nilpotent-lie",
        }
    }
}

pub type Name = (String, Pos);

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    /// `generators x:1 y:3` or `basis a:4 b:6`.
    Generators(Vec<(Name, i32)>),
    Window {
        degree: Option<i32>,
        length: Option<usize>,
    },
    /// `names x y z`: generator names of a Quillen model.
    Names(Vec<Name>),
    /// `d v = expr`.
    Differential(Name, Expr),
    /// `filtration z w | w` lists the proper steps `V^1, ..., V^{q-1}`.
    Filtration(Vec<Vec<Name>>),
    /// `derivation theta 0: u = expr; v = expr`.
    Derivation {
        name: Name,
        degree: i32,
        values: Vec<(Name, Expr)>,
    },
    /// `product a*p = q`.
    Product(Name, Name, Expr),
    /// `bracket [a,b] = c`.
    Bracket(Name, Name, Expr),
    Class(usize),
    Truncation {
        lower: i32,
        upper: usize,
        length: Option<usize>,
    },
    /// `task verb args...`, the arguments as they would appear on the
    /// command line.
    Task { verb: String, args: Vec<String> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Statement {
    pub pos: Pos,
    pub body: Body,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub kind: Kind,
    pub statements: Vec<Statement>,
}

struct Cursor<'a> {
    toks: &'a [Token],
    i: usize,
    end: Pos,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Token], line: usize, len: usize) -> Self {
        Cursor {
            toks,
            i: 0,
            end: Pos {
                line,
                column: len + 1,
            },
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.i + 1).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map(|t| t.pos).unwrap_or(self.end)
    }

    fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.is_sym(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let found = match self.peek() {
            None => "end of line".to_string(),
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Int(n)) => format!("`{n}`"),
            Some(Tok::Sym(c)) => format!("`{c}`"),
        };
        ParseError::new(self.pos(), format!("expected {wanted}, found {found}"))
    }

    fn ident(&mut self) -> PResult<Name> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let r = (s.clone(), self.pos());
                self.i += 1;
                Ok(r)
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn uint(&mut self) -> PResult<BigInt> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.i += 1;
                Ok(n)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    fn int(&mut self) -> PResult<i32> {
        let pos = self.pos();
        let neg = self.eat('-');
        let n = self.uint()?;
        let n = if neg { -n } else { n };
        i32::try_from(n).map_err(|_| ParseError::new(pos, "number out of range"))
    }

    fn usize(&mut self) -> PResult<usize> {
        let pos = self.pos();
        let n = self.uint()?;
        usize::try_from(n).map_err(|_| ParseError::new(pos, "number out of range"))
    }

    fn finish(&self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    fn scalar(&mut self) -> PResult<Scalar> {
        let pos = self.pos();
        let n = self.uint()?;
        if self.eat('/') {
            let d = self.uint()?;
            if d == BigInt::from(0) {
                return Err(ParseError::new(pos, "zero denominator"));
            }
            Ok(Scalar::new(n, d))
        } else {
            Ok(Scalar::from_integer(n))
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut terms = Vec::new();
        let mut neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let t = self.term()?;
            terms.push(if neg {
                Expr::Scale(Scalar::from_integer((-1).into()), Box::new(t))
            } else {
                t
            });
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            Expr::Sum(terms)
        })
    }

    fn term(&mut self) -> PResult<Expr> {
        if matches!(self.peek(), Some(Tok::Int(_))) {
            let pos = self.pos();
            let c = self.scalar()?;
            let starred = self.eat('*');
            if !starred && !self.atom_follows() {
                if num_traits::Zero::is_zero(&c) {
                    return Ok(Expr::Zero(pos));
                }
                return Err(ParseError::new(pos, "a scalar must multiply an element"));
            }
            let a = self.atom()?;
            return Ok(Expr::Scale(c, Box::new(a)));
        }
        self.atom()
    }

    fn atom_follows(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Sym('[')) | Some(Tok::Sym('(')))
    }

    fn atom(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Ident(s)) if s == "ad" && self.peek2() == Some(&Tok::Sym('(')) => {
                self.i += 2;
                let x = self.expr()?;
                self.expect(')')?;
                let power = if self.eat('^') { self.usize()? } else { 1 };
                let y = self.atom()?;
                Ok(Expr::Ad {
                    x: Box::new(x),
                    power,
                    y: Box::new(y),
                    pos,
                })
            }
            Some(Tok::Ident(_)) => {
                let (n, p) = self.ident()?;
                Ok(Expr::Name(n, p))
            }
            Some(Tok::Sym('[')) => {
                self.i += 1;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                Ok(Expr::Bracket(Box::new(a), Box::new(b), pos))
            }
            Some(Tok::Sym('(')) => {
                self.i += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => Err(self.unexpected("an element")),
        }
    }

    fn key_value(&mut self, keys: &[&str]) -> PResult<(String, Pos)> {
        let (k, p) = self.ident()?;
        if !keys.contains(&k.as_str()) {
            return Err(ParseError::new(
                p,
                format!("unknown key `{k}`, expected one of {}", keys.join(", ")),
            ));
        }
        self.expect('=')?;
        Ok((k, p))
    }
}

/// Parses a standalone expression, e.g. a command-line argument.
pub fn parse_expr(text: &str) -> PResult<Expr> {
    let toks = lex(1, text)?;
    let mut c = Cursor::new(&toks, 1, text.chars().count());
    let e = c.expr()?;
    c.finish()?;
    Ok(e)
}

/// Splits a task line into words; double quotes group words.
fn split_words(pos: Pos, text: &str) -> PResult<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut any = false;
    for c in text.chars() {
        match c {
            '"' => {
                quoted = !quoted;
                any = true;
            }
            '#' if !quoted => break,
            c if c.is_whitespace() && !quoted => {
                if any {
                    out.push(std::mem::take(&mut cur));
                    any = false;
                }
            }
            c => {
                cur.push(c);
                any = true;
            }
        }
    }
    if quoted {
        return Err(ParseError::new(pos, "unterminated quote"));
    }
    if any {
        out.push(cur);
    }
    Ok(out)
}

fn header(line: usize, text: &str) -> PResult<Kind> {
    let word = text.split('#').next().unwrap_or("").trim();
    let column = text.len() - text.trim_start().len() + 1;
    match word {
        "free-dgl" => Ok(Kind::FreeDgl),
        "graded-algebra" => Ok(Kind::GradedAlgebra),
        "nilpotent-lie" => Ok(Kind::NilpotentLie),
        other => Err(ParseError::new(
            Pos { line, column },
            format!("expected `free-dgl`, `graded-algebra` or `nilpotent-lie`, found `{other}`"),
        )),
    }
}

pub fn parse_document(text: &str) -> PResult<Document> {
    let mut kind = None;
    let mut statements = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        if kind.is_none() {
            kind = Some(header(line, raw)?);
            continue;
        }
        statements.push(statement(line, raw)?);
    }
    match kind {
        Some(kind) => Ok(Document { kind, statements }),
        None => Err(ParseError::new(
            Pos { line: 1, column: 1 },
            "empty document",
        )),
    }
}

fn statement(line: usize, raw: &str) -> PResult<Statement> {
    let trimmed = raw.trim_start();
    let column = raw.len() - trimmed.len() + 1;
    let pos = Pos { line, column };
    if let Some(rest) = trimmed.strip_prefix("task") {
        if rest.is_empty() || rest.starts_with(char::is_whitespace) {
            let mut words = split_words(pos, rest)?;
            if words.is_empty() {
                return Err(ParseError::new(pos, "task needs a verb"));
            }
            let verb = words.remove(0);
            return Ok(Statement {
                pos,
                body: Body::Task { verb, args: words },
            });
        }
    }
    let toks = lex(line, raw)?;
    let mut c = Cursor::new(&toks, line, raw.chars().count());
    let (kw, _) = c.ident()?;
    let body = match kw.as_str() {
        "generators" | "basis" => {
            let mut gens = Vec::new();
            while !c.at_end() {
                let name = c.ident()?;
                c.expect(':')?;
                let d = c.int()?;
                gens.push((name, d));
                c.eat(',');
            }
            Body::Generators(gens)
        }
        "names" => {
            let mut names = Vec::new();
            while !c.at_end() {
                names.push(c.ident()?);
                c.eat(',');
            }
            Body::Names(names)
        }
        "window" => {
            let (mut degree, mut length) = (None, None);
            while !c.at_end() {
                let (k, _) = c.key_value(&["degree", "length"])?;
                if k == "degree" {
                    degree = Some(c.int()?);
                } else {
                    length = Some(c.usize()?);
                }
            }
            Body::Window { degree, length }
        }
        "truncation" => {
            let (mut lower, mut upper, mut length) = (None, None, None);
            while !c.at_end() {
                let (k, _) = c.key_value(&["lower", "upper", "length"])?;
                match k.as_str() {
                    "lower" => lower = Some(c.int()?),
                    "upper" => upper = Some(c.usize()?),
                    _ => length = Some(c.usize()?),
                }
            }
            match (lower, upper) {
                (Some(lower), Some(upper)) => Body::Truncation {
                    lower,
                    upper,
                    length,
                },
                _ => return Err(ParseError::new(pos, "truncation needs lower= and upper=")),
            }
        }
        "class" => Body::Class(c.usize()?),
        "d" => {
            let g = c.ident()?;
            c.expect('=')?;
            Body::Differential(g, c.expr()?)
        }
        "filtration" => {
            let mut steps = vec![Vec::new()];
            while !c.at_end() {
                if c.eat('|') {
                    steps.push(Vec::new());
                    continue;
                }
                steps.last_mut().expect("nonempty").push(c.ident()?);
                c.eat(',');
            }
            Body::Filtration(steps)
        }
        "derivation" => {
            let name = c.ident()?;
            let degree = c.int()?;
            c.expect(':')?;
            let mut values = Vec::new();
            loop {
                let g = c.ident()?;
                c.expect('=')?;
                values.push((g, c.expr()?));
                if !c.eat(';') {
                    break;
                }
            }
            Body::Derivation {
                name,
                degree,
                values,
            }
        }
        "product" => {
            let a = c.ident()?;
            c.expect('*')?;
            let b = c.ident()?;
            c.expect('=')?;
            Body::Product(a, b, c.expr()?)
        }
        "bracket" => {
            c.expect('[')?;
            let a = c.ident()?;
            c.expect(',')?;
            let b = c.ident()?;
            c.expect(']')?;
            c.expect('=')?;
            Body::Bracket(a, b, c.expr()?)
        }
        other => return Err(ParseError::new(pos, format!("unknown statement `{other}`"))),
    };
    c.finish()?;
    Ok(Statement { pos, body })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions() {
        let e = parse_expr("ad(x)^2 y - 1/2*[x,[x,y]] + 3 z").unwrap();
        match e {
            Expr::Sum(t) => assert_eq!(t.len(), 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr("0").unwrap(), Expr::Zero(_)));
        let err = parse_expr("[x,y").unwrap_err();
        assert_eq!(err.pos.column, 5);
        assert!(parse_expr("2").is_err());
        assert!(parse_expr("x $ y").is_err());
    }

    #[test]
    fn documents() {
        let text = "# wedge\nfree-dgl\ngenerators x:1 y:3\nwindow degree=9\nd y = 0\nderivation dy -1: y = [x,x]\ntask basis --kind dder --degree \"-1\"\n";
        let doc = parse_document(text).unwrap();
        assert_eq!(doc.kind, Kind::FreeDgl);
        assert_eq!(doc.statements.len(), 5);
        match &doc.statements[4].body {
            Body::Task { verb, args } => {
                assert_eq!(verb, "basis");
                assert_eq!(args, &["--kind", "dder", "--degree", "-1"]);
            }
            other => panic!("{other:?}"),
        }
        let err = parse_document("free-dgl\ngenerators x:1\nwindow depth=3\n").unwrap_err();
        assert_eq!((err.pos.line, err.pos.column), (3, 8));
        let err = parse_document("free-dgl\n  derivation t 0 u = x\n").unwrap_err();
        assert_eq!((err.pos.line, err.pos.column), (2, 18));
        assert!(parse_document("\n# nothing\n").is_err());
        assert!(parse_document("dgl\n").is_err());
    }
}
