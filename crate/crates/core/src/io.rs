//! Plain-text problem files.
//!
//! ```text
//! file        := section*
//! section     := dimensions | x_bounds | y_bounds | objective | constraints
//! dimensions  := "dimensions" "{" ( ("n" | "p") "=" INT )* "}"
//! x_bounds    := "x_bounds" "{" interval* "}"
//! y_bounds    := "y_bounds" "{" interval* "}"
//! interval    := "[" NUM NUM "]"
//! objective   := "objective" "{" function "}"
//! constraints := "constraints" "{" ( (NAME ":")? function )* "}"
//! function    := term ( "+"? term )*
//! term        := "max" "{" piece ( ";" piece )* "}"
//! piece       := vector vector NUM
//! vector      := "[" NUM* "]"
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Every section must
//! appear exactly once; `constraints` may be empty. `NUM` is a decimal or
//! scientific literal; exact scalar types also accept `a/b`. Integer bounds
//! must be integers and continuous bounds must be finite.

use std::fmt::Write as _;

use thiserror::Error;

use crate::problem::{MinlpProblem, ProblemError};
use crate::pwl::{AffinePiece, MaxAffineTerm, PwlFunction};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("{line}:{col}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
        found: String,
    },
    #[error("{line}:{col}: in section {section}: {message}")]
    Semantic {
        section: String,
        line: usize,
        col: usize,
        message: String,
    },
    #[error("missing section {0}")]
    MissingSection(&'static str),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Colon,
    Semi,
    Eq,
    Plus,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Vec<Spanned> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let single = match c {
                '{' => Some(Tok::LBrace),
                '}' => Some(Tok::RBrace),
                '[' => Some(Tok::LBracket),
                ']' => Some(Tok::RBracket),
                ':' => Some(Tok::Colon),
                ';' => Some(Tok::Semi),
                '=' => Some(Tok::Eq),
                '+' if !chars.get(i + 1).is_some_and(|n| n.is_ascii_alphanumeric() || *n == '.') => {
                    Some(Tok::Plus)
                }
                _ => None,
            };
            if c.is_whitespace() {
                i += 1;
            } else if let Some(tok) = single {
                out.push(Spanned { tok, line: li + 1, col });
                i += 1;
            } else {
                let start = i;
                while i < chars.len() && !chars[i].is_whitespace() && !"{}[]:;=#".contains(chars[i]) {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Word(chars[start..i].iter().collect()),
                    line: li + 1,
                    col,
                });
            }
        }
    }
    let line = text.lines().count().max(1);
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col: text.lines().last().map_or(1, |l| l.chars().count() + 1),
    });
    out
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    section: &'static str,
}

struct RawPiece<T> {
    a: Vec<T>,
    b: Vec<T>,
    c: T,
    line: usize,
    col: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, expected: &str) -> ParseError {
        let t = self.peek();
        ParseError::Syntax {
            line: t.line,
            col: t.col,
            expected: expected.to_string(),
            found: t.tok.describe(),
        }
    }

    fn semantic(&self, at: &Spanned, message: impl Into<String>) -> ParseError {
        ParseError::Semantic {
            section: self.section.to_string(),
            line: at.line,
            col: at.col,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Spanned, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.syntax(&tok.describe()))
        }
    }

    fn word(&mut self, what: &str) -> Result<(String, Spanned), ParseError> {
        match &self.peek().tok {
            Tok::Word(w) => {
                let w = w.clone();
                Ok((w, self.bump()))
            }
            _ => Err(self.syntax(what)),
        }
    }

    fn number<T: Scalar>(&mut self) -> Result<T, ParseError> {
        let (w, at) = self.word("a number")?;
        let lower = w.trim_start_matches(['+', '-']).to_ascii_lowercase();
        if matches!(lower.as_str(), "inf" | "infinity" | "nan") {
            return Err(self.semantic(&at, format!("value `{w}` must be finite")));
        }
        match T::parse_literal(&w) {
            Some(v) if v.approx_f64().is_finite() => Ok(v),
            Some(_) => Err(self.semantic(&at, format!("value `{w}` must be finite"))),
            None => Err(ParseError::Syntax {
                line: at.line,
                col: at.col,
                expected: "a number".into(),
                found: format!("`{w}`"),
            }),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let (w, at) = self.word("an integer")?;
        if let Ok(v) = w.parse::<i64>() {
            return Ok(v);
        }
        if w.parse::<f64>().is_ok() {
            Err(self.semantic(&at, format!("`{w}` is not an integer")))
        } else {
            Err(ParseError::Syntax {
                line: at.line,
                col: at.col,
                expected: "an integer".into(),
                found: format!("`{w}`"),
            })
        }
    }

    fn vector<T: Scalar>(&mut self) -> Result<Vec<T>, ParseError> {
        self.expect(Tok::LBracket)?;
        let mut v = Vec::new();
        while self.peek().tok != Tok::RBracket {
            v.push(self.number()?);
        }
        self.bump();
        Ok(v)
    }

    fn intervals<V>(&mut self, mut item: impl FnMut(&mut Self) -> Result<V, ParseError>) -> Result<Vec<(V, V)>, ParseError> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        while self.peek().tok == Tok::LBracket {
            self.bump();
            let lo = item(self)?;
            let hi = item(self)?;
            self.expect(Tok::RBracket)?;
            out.push((lo, hi));
        }
        self.expect(Tok::RBrace)?;
        Ok(out)
    }

    fn term<T: Scalar>(&mut self) -> Result<Vec<RawPiece<T>>, ParseError> {
        let at = self.peek().clone();
        match &at.tok {
            Tok::Word(w) if w == "max" => {
                self.bump();
            }
            _ => return Err(self.syntax("`max`")),
        }
        self.expect(Tok::LBrace)?;
        let mut pieces = Vec::new();
        loop {
            let at = self.peek().clone();
            let a = self.vector()?;
            let b = self.vector()?;
            let c = self.number()?;
            pieces.push(RawPiece {
                a,
                b,
                c,
                line: at.line,
                col: at.col,
            });
            match self.peek().tok {
                Tok::Semi => {
                    self.bump();
                }
                Tok::RBrace => {
                    self.bump();
                    return Ok(pieces);
                }
                _ => return Err(self.syntax("`;` or `}`")),
            }
        }
    }

    fn function<T: Scalar>(&mut self, n: usize, p: usize, what: &str) -> Result<PwlFunction<T>, ParseError> {
        let mut terms = vec![self.term::<T>()?];
        loop {
            match &self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Tok::Word(w) if w == "max" => terms.push(self.term()?),
                _ => break,
            }
        }
        let mut built = Vec::with_capacity(terms.len());
        for pieces in terms {
            let mut out = Vec::with_capacity(pieces.len());
            for pc in pieces {
                let at = Spanned {
                    tok: Tok::Eof,
                    line: pc.line,
                    col: pc.col,
                };
                if pc.a.len() != n {
                    return Err(self.semantic(&at, format!("{what}: x-coefficient vector has length {}, expected n = {n}", pc.a.len())));
                }
                if pc.b.len() != p {
                    return Err(self.semantic(&at, format!("{what}: y-coefficient vector has length {}, expected p = {p}", pc.b.len())));
                }
                out.push(AffinePiece::new(pc.a, pc.b, pc.c));
            }
            built.push(MaxAffineTerm::new(out).map_err(ProblemError::from)?);
        }
        Ok(PwlFunction::new(built).map_err(ProblemError::from)?)
    }
}

/// Parses a problem file.
pub fn parse_problem<T: Scalar>(text: &str) -> Result<MinlpProblem<T>, ParseError> {
    let mut ps = Parser {
        toks: tokenize(text),
        pos: 0,
        section: "",
    };
    let mut dims: Option<(usize, usize)> = None;
    let mut x_bounds: Option<(Vec<(T, T)>, Spanned)> = None;
    let mut y_bounds: Option<(Vec<(i64, i64)>, Spanned)> = None;
    let mut objective: Option<PwlFunction<T>> = None;
    let mut constraints: Option<(Vec<String>, Vec<PwlFunction<T>>)> = None;

    while ps.peek().tok != Tok::Eof {
        let (name, at) = ps.word("a section name")?;
        let section: &'static str = match name.as_str() {
            "dimensions" => "dimensions",
            "x_bounds" => "x_bounds",
            "y_bounds" => "y_bounds",
            "objective" => "objective",
            "constraints" => "constraints",
            _ => {
                return Err(ParseError::Syntax {
                    line: at.line,
                    col: at.col,
                    expected: "a section name".into(),
                    found: format!("`{name}`"),
                })
            }
        };
        ps.section = section;
        let seen = match section {
            "dimensions" => dims.is_some(),
            "x_bounds" => x_bounds.is_some(),
            "y_bounds" => y_bounds.is_some(),
            "objective" => objective.is_some(),
            _ => constraints.is_some(),
        };
        if seen {
            return Err(ps.semantic(&at, "section appears twice"));
        }
        let need_dims = |ps: &Parser| dims.ok_or_else(|| ps.semantic(&at, "must follow the dimensions section"));
        match section {
            "dimensions" => {
                ps.expect(Tok::LBrace)?;
                let (mut n, mut p) = (None, None);
                while ps.peek().tok != Tok::RBrace {
                    let (key, kat) = ps.word("`n` or `p`")?;
                    ps.expect(Tok::Eq)?;
                    let v = ps.integer()?;
                    if v < 0 {
                        return Err(ps.semantic(&kat, format!("{key} must be nonnegative")));
                    }
                    let slot = match key.as_str() {
                        "n" => &mut n,
                        "p" => &mut p,
                        _ => {
                            return Err(ParseError::Syntax {
                                line: kat.line,
                                col: kat.col,
                                expected: "`n` or `p`".into(),
                                found: format!("`{key}`"),
                            })
                        }
                    };
                    if slot.replace(v as usize).is_some() {
                        return Err(ps.semantic(&kat, format!("{key} given twice")));
                    }
                }
                ps.bump();
                match (n, p) {
                    (Some(n), Some(p)) => dims = Some((n, p)),
                    _ => return Err(ps.semantic(&at, "both n and p are required")),
                }
            }
            "x_bounds" => {
                let b = ps.intervals(|ps| ps.number::<T>())?;
                x_bounds = Some((b, at));
            }
            "y_bounds" => {
                let b = ps.intervals(Parser::integer)?;
                y_bounds = Some((b, at));
            }
            "objective" => {
                let (n, p) = need_dims(&ps)?;
                ps.expect(Tok::LBrace)?;
                objective = Some(ps.function(n, p, "objective")?);
                ps.expect(Tok::RBrace)?;
            }
            _ => {
                let (n, p) = need_dims(&ps)?;
                ps.expect(Tok::LBrace)?;
                let (mut names, mut funcs) = (Vec::new(), Vec::new());
                while ps.peek().tok != Tok::RBrace {
                    let name = match (&ps.peek().tok, ps.toks.get(ps.pos + 1).map(|t| &t.tok)) {
                        (Tok::Word(w), Some(Tok::Colon)) if w != "max" => {
                            let w = w.clone();
                            let nat = ps.bump();
                            ps.bump();
                            if names.contains(&w) {
                                return Err(ps.semantic(&nat, format!("duplicate constraint name {w}")));
                            }
                            w
                        }
                        _ => format!("g{}", names.len() + 1),
                    };
                    funcs.push(ps.function(n, p, &format!("constraint {name}"))?);
                    names.push(name);
                }
                ps.bump();
                constraints = Some((names, funcs));
            }
        }
    }

    let (n, p) = dims.ok_or(ParseError::MissingSection("dimensions"))?;
    let (xb, xat) = x_bounds.ok_or(ParseError::MissingSection("x_bounds"))?;
    let (yb, yat) = y_bounds.ok_or(ParseError::MissingSection("y_bounds"))?;
    let objective = objective.ok_or(ParseError::MissingSection("objective"))?;
    let (names, funcs) = constraints.ok_or(ParseError::MissingSection("constraints"))?;
    let box_err = |section: &str, at: &Spanned, message: String| ParseError::Semantic {
        section: section.to_string(),
        line: at.line,
        col: at.col,
        message,
    };
    if xb.len() != n {
        return Err(box_err("x_bounds", &xat, format!("{} intervals given, expected n = {n}", xb.len())));
    }
    if yb.len() != p {
        return Err(box_err("y_bounds", &yat, format!("{} intervals given, expected p = {p}", yb.len())));
    }
    for (j, (lo, hi)) in xb.iter().enumerate() {
        if lo > hi {
            return Err(box_err("x_bounds", &xat, format!("interval {} is empty: [{lo} {hi}]", j + 1)));
        }
    }
    for (j, (lo, hi)) in yb.iter().enumerate() {
        if lo > hi {
            return Err(box_err("y_bounds", &yat, format!("interval {} is empty: [{lo} {hi}]", j + 1)));
        }
    }
    Ok(MinlpProblem::with_names(objective, funcs, names, xb, yb)?)
}

fn write_function<T: Scalar>(out: &mut String, f: &PwlFunction<T>) {
    let vec = |v: &[T]| {
        let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        format!("[{}]", items.join(" "))
    };
    let terms: Vec<String> = f
        .terms()
        .iter()
        .map(|t| {
            let pieces: Vec<String> = t
                .pieces()
                .iter()
                .map(|pc| format!("{} {} {}", vec(&pc.a), vec(&pc.b), pc.c))
                .collect();
            format!("max {{ {} }}", pieces.join(" ; "))
        })
        .collect();
    out.push_str(&terms.join(" + "));
}

/// Writes a problem in the file format. Numbers use the shortest text that
/// reads back to the same value.
pub fn serialize_problem<T: Scalar>(prob: &MinlpProblem<T>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "dimensions {{ n = {} p = {} }}", prob.n(), prob.p());
    let xb: Vec<String> = prob.x_bounds().iter().map(|(l, u)| format!("[{l} {u}]")).collect();
    let _ = writeln!(s, "x_bounds {{ {} }}", xb.join(" "));
    let yb: Vec<String> = prob.y_bounds().iter().map(|(l, u)| format!("[{l} {u}]")).collect();
    let _ = writeln!(s, "y_bounds {{ {} }}", yb.join(" "));
    s.push_str("objective {\n  ");
    write_function(&mut s, prob.objective());
    s.push_str("\n}\nconstraints {\n");
    for (name, g) in prob.constraint_names().iter().zip(prob.constraints()) {
        let _ = write!(s, "  {name}: ");
        write_function(&mut s, g);
        s.push('\n');
    }
    s.push_str("}\n");
    s
}
