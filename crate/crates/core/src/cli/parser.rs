//! Line-oriented system-file language.
//!
//! ```text
//! system cr_jacobian
//! base x y
//! unknown u v
//! param G [diff x -> Gu*u[1,0] + Gv*v[1,0], y -> Gu*u[0,1] + Gv*v[0,1]]
//! invertible G
//! eq E1 = u[1,0] - v[0,1]
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::jetcalc::{terms_add, terms_const, terms_mul, terms_scale, terms_var, DiffPoly, JetVar, MultiIndex, Terms, UniverseBuilder, Var};
use crate::system::PdeSystem;
use crate::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagKind {
    Lexical,
    Syntax,
    UnknownIdentifier,
    Arity,
    Duplicate,
    Semantic,
}

impl fmt::Display for DiagKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DiagKind::Lexical => "lexical error",
            DiagKind::Syntax => "syntax error",
            DiagKind::UnknownIdentifier => "unknown identifier",
            DiagKind::Arity => "arity error",
            DiagKind::Duplicate => "duplicate declaration",
            DiagKind::Semantic => "error",
        };
        write!(f, "{s}")
    }
}

/// Parse diagnostic; line and column are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub kind: DiagKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.line, self.col, self.kind, self.message)
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Q),
    Ident(String),
    Jet(String, Vec<u32>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Neg(_) => 2,
            Expr::Mul(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(q) if !q.is_integer() => 3,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.prec();
        if p < min {
            write!(f, "(")?;
        }
        match self {
            Expr::Num(q) => write!(f, "{q}")?,
            Expr::Ident(s) => write!(f, "{s}")?,
            Expr::Jet(s, idx) => {
                let parts: Vec<String> = idx.iter().map(|x| x.to_string()).collect();
                write!(f, "{s}[{}]", parts.join(","))?
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_prec(f, 3)?
            }
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 2)?
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 2)?
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 3)?;
                write!(f, "*")?;
                b.fmt_prec(f, 4)?
            }
            Expr::Pow(a, e) => {
                a.fmt_prec(f, 5)?;
                write!(f, "^{e}")?
            }
        }
        if p < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSpec {
    pub name: String,
    /// (base variable, value of the total derivative in that direction)
    pub rules: Vec<(String, Expr)>,
}

/// Parsed and name-checked system file.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SystemFile {
    pub name: String,
    pub base: Vec<String>,
    pub unknowns: Vec<String>,
    pub params: Vec<ParamSpec>,
    pub invertibles: Vec<Expr>,
    pub equations: Vec<(String, Expr)>,
}

impl fmt::Display for SystemFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "system {}", self.name)?;
        writeln!(f, "base {}", self.base.join(" "))?;
        if !self.unknowns.is_empty() {
            writeln!(f, "unknown {}", self.unknowns.join(" "))?;
        }
        for p in &self.params {
            if p.rules.is_empty() {
                writeln!(f, "param {}", p.name)?;
            } else {
                let r: Vec<String> = p.rules.iter().map(|(d, e)| format!("{d} -> {e}")).collect();
                writeln!(f, "param {} [diff {}]", p.name, r.join(", "))?;
            }
        }
        for e in &self.invertibles {
            writeln!(f, "invertible {e}")?;
        }
        for (n, e) in &self.equations {
            writeln!(f, "eq {n} = {e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(Q),
    Sym(char),
    Arrow,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

fn lex(line: &str, lineno: usize) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[st..i].iter().collect()), col });
            continue;
        }
        if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let num: String = chars[st..i].iter().collect();
            let mut q = Q::from_integer(num.parse().expect("digits"));
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                i += 1;
                let st2 = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let den: String = chars[st2..i].iter().collect();
                let d: num_bigint::BigInt = den.parse().expect("digits");
                if d.is_zero() {
                    return Err(Diagnostic { line: lineno, col, kind: DiagKind::Lexical, message: "zero denominator".into() });
                }
                q /= Q::from_integer(d);
            }
            out.push(Token { tok: Tok::Num(q), col });
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Token { tok: Tok::Arrow, col });
            i += 2;
            continue;
        }
        if "+-*^()[],=".contains(c) {
            out.push(Token { tok: Tok::Sym(c), col });
            i += 1;
            continue;
        }
        return Err(Diagnostic {
            line: lineno,
            col,
            kind: DiagKind::Lexical,
            message: if c == '/' {
                "no division operator; declare an invertible instead".into()
            } else {
                format!("unexpected character `{c}`")
            },
        });
    }
    Ok(out)
}

#[derive(Default)]
struct Names {
    base: Vec<String>,
    symbols: HashSet<String>,
}

struct P<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    eol_col: usize,
    names: &'a Names,
}

impl<'a> P<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.col).unwrap_or(self.eol_col)
    }

    fn err(&self, kind: DiagKind, message: impl Into<String>) -> Diagnostic {
        Diagnostic { line: self.line, col: self.col(), kind, message: message.into() }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), Diagnostic> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(DiagKind::Syntax, format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Result<String, Diagnostic> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err(DiagKind::Syntax, "expected an identifier")),
        }
    }

    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, Diagnostic> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.term()?)));
        }
        self.term()
    }

    fn term(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.power()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Expr, Diagnostic> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(q)) if q.is_integer() => {
                    self.pos += 1;
                    let e: u32 = q
                        .to_integer()
                        .try_into()
                        .map_err(|_| self.err(DiagKind::Syntax, "exponent too large"))?;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return Err(self.err(DiagKind::Syntax, "exponent must be a non-negative integer")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, Diagnostic> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(Expr::Num(q))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let is_base = self.names.base.contains(&name);
                if !is_base && !self.names.symbols.contains(&name) {
                    return Err(Diagnostic {
                        line: self.line,
                        col,
                        kind: DiagKind::UnknownIdentifier,
                        message: format!("`{name}` is not declared"),
                    });
                }
                if self.peek() == Some(&Tok::Sym('[')) {
                    if is_base {
                        return Err(self.err(DiagKind::Arity, format!("base variable `{name}` has no jets")));
                    }
                    self.pos += 1;
                    let mut idx = Vec::new();
                    loop {
                        match self.peek().cloned() {
                            Some(Tok::Num(q)) if q.is_integer() => {
                                self.pos += 1;
                                idx.push(
                                    q.to_integer()
                                        .try_into()
                                        .map_err(|_| self.err(DiagKind::Syntax, "index too large"))?,
                                );
                            }
                            _ => return Err(self.err(DiagKind::Syntax, "expected a non-negative integer index")),
                        }
                        if self.eat(',') {
                            continue;
                        }
                        self.expect(']')?;
                        break;
                    }
                    let n = self.names.base.len();
                    if idx.len() != n {
                        return Err(Diagnostic {
                            line: self.line,
                            col,
                            kind: DiagKind::Arity,
                            message: format!("`{name}` takes {n} indices, got {}", idx.len()),
                        });
                    }
                    Ok(Expr::Jet(name, idx))
                } else {
                    Ok(Expr::Ident(name))
                }
            }
            _ => Err(self.err(DiagKind::Syntax, "expected a number, identifier or `(`")),
        }
    }
}

/// Parses a whole system file.
pub fn parse(text: &str) -> Result<SystemFile, Diagnostic> {
    let lines: Vec<(usize, Vec<Token>, usize)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| lex(l, i + 1).map(|t| (i + 1, t, l.chars().count() + 1)))
        .collect::<Result<_, _>>()?;

    // first pass: declarations, so rules may mention symbols declared later
    let mut names = Names::default();
    let mut sf = SystemFile::default();
    let mut seen: HashMap<String, (usize, usize)> = HashMap::new();
    let mut have_system = false;
    let mut have_base = false;
    for (ln, toks, _) in &lines {
        let Some(Token { tok: Tok::Ident(kw), col }) = toks.first() else {
            if let Some(t) = toks.first() {
                return Err(Diagnostic { line: *ln, col: t.col, kind: DiagKind::Syntax, message: "expected a keyword".into() });
            }
            continue;
        };
        let mut declare = |t: &Token, list: &mut Vec<String>| -> Result<(), Diagnostic> {
            let Tok::Ident(name) = &t.tok else {
                return Err(Diagnostic { line: *ln, col: t.col, kind: DiagKind::Syntax, message: "expected an identifier".into() });
            };
            if let Some((l0, _)) = seen.get(name) {
                return Err(Diagnostic {
                    line: *ln,
                    col: t.col,
                    kind: DiagKind::Duplicate,
                    message: format!("`{name}` already declared on line {l0}"),
                });
            }
            seen.insert(name.clone(), (*ln, t.col));
            list.push(name.clone());
            Ok(())
        };
        match kw.as_str() {
            "system" => {
                if have_system {
                    return Err(Diagnostic { line: *ln, col: *col, kind: DiagKind::Duplicate, message: "second `system` line".into() });
                }
                have_system = true;
                match toks.get(1) {
                    Some(Token { tok: Tok::Ident(n), .. }) if toks.len() == 2 => sf.name = n.clone(),
                    _ => {
                        let c = toks.get(1).map(|t| t.col).unwrap_or(col + 6);
                        return Err(Diagnostic { line: *ln, col: c, kind: DiagKind::Syntax, message: "expected `system NAME`".into() });
                    }
                }
            }
            "base" => {
                if have_base {
                    return Err(Diagnostic { line: *ln, col: *col, kind: DiagKind::Duplicate, message: "second `base` line".into() });
                }
                have_base = true;
                for t in &toks[1..] {
                    declare(t, &mut sf.base)?;
                }
                if sf.base.is_empty() || sf.base.len() > crate::jetcalc::MAX_DIM {
                    return Err(Diagnostic {
                        line: *ln,
                        col: *col,
                        kind: DiagKind::Syntax,
                        message: format!("between 1 and {} base variables required", crate::jetcalc::MAX_DIM),
                    });
                }
            }
            "unknown" => {
                for t in &toks[1..] {
                    declare(t, &mut sf.unknowns)?;
                }
            }
            "param" => {
                let Some(t) = toks.get(1) else {
                    return Err(Diagnostic { line: *ln, col: col + 5, kind: DiagKind::Syntax, message: "expected a parameter name".into() });
                };
                let mut v = Vec::new();
                declare(t, &mut v)?;
                sf.params.push(ParamSpec { name: v.remove(0), rules: Vec::new() });
            }
            "invertible" | "eq" => {}
            other => {
                return Err(Diagnostic { line: *ln, col: *col, kind: DiagKind::Syntax, message: format!("unknown keyword `{other}`") });
            }
        }
    }
    if !have_system {
        return Err(Diagnostic { line: 1, col: 1, kind: DiagKind::Syntax, message: "missing `system NAME` line".into() });
    }
    if !have_base {
        return Err(Diagnostic { line: 1, col: 1, kind: DiagKind::Syntax, message: "missing `base` line".into() });
    }
    names.base = sf.base.clone();
    names.symbols = sf.unknowns.iter().chain(sf.params.iter().map(|p| &p.name)).cloned().collect();

    let mut eq_names: HashSet<String> = HashSet::new();
    let mut param_k = 0;
    for (ln, toks, eol) in &lines {
        let Some(Token { tok: Tok::Ident(kw), .. }) = toks.first() else { continue };
        let mut p = P { toks, pos: 1, line: *ln, eol_col: *eol, names: &names };
        match kw.as_str() {
            "param" => {
                p.pos = 2;
                let spec_idx = param_k;
                param_k += 1;
                if p.eat('[') {
                    match p.peek() {
                        Some(Tok::Ident(d)) if d == "diff" => p.pos += 1,
                        _ => return Err(p.err(DiagKind::Syntax, "expected `diff`")),
                    }
                    loop {
                        let col = p.col();
                        let dir = p.ident()?;
                        if !names.base.contains(&dir) {
                            return Err(Diagnostic {
                                line: *ln,
                                col,
                                kind: DiagKind::UnknownIdentifier,
                                message: format!("`{dir}` is not a base variable"),
                            });
                        }
                        if sf.params[spec_idx].rules.iter().any(|(d, _)| *d == dir) {
                            return Err(Diagnostic { line: *ln, col, kind: DiagKind::Duplicate, message: format!("second rule for `{dir}`") });
                        }
                        if p.peek() != Some(&Tok::Arrow) {
                            return Err(p.err(DiagKind::Syntax, "expected `->`"));
                        }
                        p.pos += 1;
                        let e = p.expr()?;
                        sf.params[spec_idx].rules.push((dir, e));
                        if p.eat(',') {
                            continue;
                        }
                        p.expect(']')?;
                        break;
                    }
                }
            }
            "invertible" => {
                let e = p.expr()?;
                sf.invertibles.push(e);
            }
            "eq" => {
                let col = p.col();
                let name = p.ident()?;
                if !eq_names.insert(name.clone()) {
                    return Err(Diagnostic { line: *ln, col, kind: DiagKind::Duplicate, message: format!("equation `{name}` defined twice") });
                }
                p.expect('=')?;
                let e = p.expr()?;
                sf.equations.push((name, e));
            }
            _ => continue,
        }
        if p.pos < toks.len() {
            return Err(p.err(DiagKind::Syntax, "unexpected trailing input"));
        }
    }
    Ok(sf)
}

/// Evaluates an expression against a name resolver.
fn eval(e: &Expr, res: &dyn Fn(&str, Option<&[u32]>) -> Var) -> Terms {
    match e {
        Expr::Num(q) => terms_const(q.clone()),
        Expr::Ident(s) => terms_var(res(s, None)),
        Expr::Jet(s, idx) => terms_var(res(s, Some(idx))),
        Expr::Neg(a) => terms_scale(&eval(a, res), &-Q::one()),
        Expr::Add(a, b) => terms_add(&eval(a, res), &eval(b, res)),
        Expr::Sub(a, b) => terms_add(&eval(a, res), &terms_scale(&eval(b, res), &-Q::one())),
        Expr::Mul(a, b) => terms_mul(&eval(a, res), &eval(b, res)),
        Expr::Pow(a, k) => {
            let x = eval(a, res);
            let mut acc = terms_const(Q::one());
            for _ in 0..*k {
                acc = terms_mul(&acc, &x);
            }
            acc
        }
    }
}

impl SystemFile {
    /// Builds the universe and the equations.
    pub fn to_system(&self) -> crate::Result<PdeSystem> {
        let params: Vec<&str> = self.params.iter().map(|p| p.name.as_str()).collect();
        let unknowns: Vec<&str> = self.unknowns.iter().map(String::as_str).collect();
        let base: Vec<&str> = self.base.iter().map(String::as_str).collect();
        let mut b = UniverseBuilder::new(&base, &unknowns, &params)?;
        let n = self.base.len();
        let resolver = |b: &UniverseBuilder| {
            let b = b.clone();
            move |name: &str, idx: Option<&[u32]>| -> Var {
                if let Some(i) = b.base_index(name) {
                    return Var::Base(i);
                }
                let sym = b.symbol_index(name).expect("checked by the parser");
                let idx = match idx {
                    Some(ix) => MultiIndex::from_slice(ix),
                    None => MultiIndex::zero(n),
                };
                Var::Jet(JetVar { sym, idx })
            }
        };
        let res = resolver(&b);
        for p in &self.params {
            let sym = b.symbol_index(&p.name).expect("declared");
            for (d, e) in &p.rules {
                let dir = b.base_index(d).expect("checked by the parser") as usize;
                b.set_rule(sym, dir, eval(e, &res))?;
            }
        }
        let mut uni = b.build();
        // invertibles may mention rule-carrying jets: normalize them first
        for e in &self.invertibles {
            let d = DiffPoly::from_terms(&uni, eval(e, &res)).expand_rules()?;
            uni = uni.with_invertible(d.into_terms());
        }
        let mut eqs = Vec::new();
        for (name, e) in &self.equations {
            let f = DiffPoly::from_terms(&uni, eval(e, &res)).expand_rules()?;
            eqs.push((name.clone(), f));
        }
        PdeSystem::new(&self.name, &uni, eqs)
    }
}

/// Parses one expression over an existing universe (no rule expansion).
pub fn parse_expr(uni: &Arc<crate::jetcalc::Universe>, text: &str) -> Result<DiffPoly, Diagnostic> {
    let toks = lex(text, 1)?;
    let names = Names {
        base: uni.base_names().to_vec(),
        symbols: uni.symbols().iter().map(|s| s.name.clone()).collect(),
    };
    let mut p = P { toks: &toks, pos: 0, line: 1, eol_col: text.chars().count() + 1, names: &names };
    let e = p.expr()?;
    if p.pos < toks.len() {
        return Err(p.err(DiagKind::Syntax, "unexpected trailing input"));
    }
    let n = uni.n();
    let u2 = uni.clone();
    let res = move |name: &str, idx: Option<&[u32]>| -> Var {
        if let Some(i) = u2.base_index(name) {
            return Var::Base(i);
        }
        let sym = u2.symbol_index(name).expect("checked by the parser");
        let idx = idx.map(MultiIndex::from_slice).unwrap_or_else(|| MultiIndex::zero(n));
        Var::Jet(JetVar { sym, idx })
    };
    Ok(DiffPoly::from_terms(uni, eval(&e, &res)))
}

/// Parses an expression in the system's universe and expands parameter rules.
pub fn expr(system: &PdeSystem, text: &str) -> crate::Result<DiffPoly> {
    parse_expr(&system.uni, text)
        .map_err(|d| crate::Error::Invalid(d.to_string()))?
        .expand_rules()
}
