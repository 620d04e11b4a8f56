//! Expression language for scalar fields over `x1..xn`.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | atom ('^' INT)?
//! atom   := NUMBER | 'x' INT | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus, so `-x1^2` is `-(x1^2)`. Exponents are
//! non-negative integer literals, which keeps every field polynomial (or
//! rational) and symbolic differentiation total.

use std::fmt;
use std::ops;

use thiserror::Error;

/// Errors raised while parsing or evaluating an expression.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    /// Positions are 1-based character columns.
    #[error("syntax error at position {position}: expected {expected}, found {found}")]
    Syntax {
        position: usize,
        expected: String,
        found: String,
    },
    #[error("unknown variable x{index} at position {position} (dimension is {n})")]
    UnknownVariable {
        index: usize,
        n: usize,
        position: usize,
    },
    #[error("exponent at position {position} is not a non-negative integer")]
    NonIntegerExponent { position: usize },
    #[error("division by zero in denominator `{location}`")]
    DivisionByZero { location: String },
    #[error("point has dimension {got}, expression needs at least {needed}")]
    DimensionMismatch { needed: usize, got: usize },
}

/// Abstract syntax tree of a scalar field. Variables are 0-based
/// (`Var(0)` prints as `x1`).
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
}

impl Expr {
    pub fn constant(c: f64) -> Self {
        Expr::Const(c)
    }

    pub fn var(k: usize) -> Self {
        Expr::Var(k)
    }

    pub fn pow(self, k: u32) -> Self {
        Expr::Pow(Box::new(self), k)
    }

    /// Largest variable index (0-based) referenced by the tree.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(k) => Some(*k),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                match (a.max_var(), b.max_var()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
            Expr::Pow(a, _) | Expr::Neg(a) => a.max_var(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.size() + b.size()
            }
            Expr::Pow(a, _) | Expr::Neg(a) => 1 + a.size(),
        }
    }

    /// Evaluates the tree at `x`, visiting children left to right.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64, ExprError> {
        if let Some(k) = self.max_var() {
            if k >= x.len() {
                return Err(ExprError::DimensionMismatch {
                    needed: k + 1,
                    got: x.len(),
                });
            }
        }
        self.eval_unchecked(x)
    }

    fn eval_unchecked(&self, x: &[f64]) -> Result<f64, ExprError> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var(k) => x[*k],
            Expr::Add(a, b) => a.eval_unchecked(x)? + b.eval_unchecked(x)?,
            Expr::Sub(a, b) => a.eval_unchecked(x)? - b.eval_unchecked(x)?,
            Expr::Mul(a, b) => a.eval_unchecked(x)? * b.eval_unchecked(x)?,
            Expr::Div(a, b) => {
                let num = a.eval_unchecked(x)?;
                let den = b.eval_unchecked(x)?;
                if den == 0.0 {
                    return Err(ExprError::DivisionByZero {
                        location: b.to_string(),
                    });
                }
                num / den
            }
            Expr::Pow(a, k) => a.eval_unchecked(x)?.powi(*k as i32),
            Expr::Neg(a) => -a.eval_unchecked(x)?,
        })
    }

    /// Exact partial derivative with respect to variable `k` (0-based).
    ///
    /// Only trivial identities (`0·e`, `1·e`, `e + 0`, ...) are folded while
    /// building the result; there is no general simplifier.
    pub fn differentiate(&self, k: usize) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var(j) => Expr::Const(if *j == k { 1.0 } else { 0.0 }),
            Expr::Add(a, b) => fold_add(a.differentiate(k), b.differentiate(k)),
            Expr::Sub(a, b) => fold_sub(a.differentiate(k), b.differentiate(k)),
            Expr::Mul(a, b) => fold_add(
                fold_mul(a.differentiate(k), (**b).clone()),
                fold_mul((**a).clone(), b.differentiate(k)),
            ),
            Expr::Div(a, b) => {
                // (a'b - ab') / b^2
                let num = fold_sub(
                    fold_mul(a.differentiate(k), (**b).clone()),
                    fold_mul((**a).clone(), b.differentiate(k)),
                );
                if is_zero(&num) {
                    Expr::Const(0.0)
                } else {
                    Expr::Div(Box::new(num), Box::new((**b).clone().pow(2)))
                }
            }
            Expr::Pow(a, p) => match *p {
                0 => Expr::Const(0.0),
                1 => a.differentiate(k),
                p => {
                    let inner = a.differentiate(k);
                    let outer = if p == 2 {
                        (**a).clone()
                    } else {
                        (**a).clone().pow(p - 1)
                    };
                    fold_mul(fold_mul(Expr::Const(p as f64), outer), inner)
                }
            },
            Expr::Neg(a) => fold_neg(a.differentiate(k)),
        }
    }

    /// Replaces every `Var(k)` by `sub(k)`.
    pub fn substitute(&self, sub: &dyn Fn(usize) -> Expr) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(k) => sub(*k),
            Expr::Add(a, b) => Expr::Add(Box::new(a.substitute(sub)), Box::new(b.substitute(sub))),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.substitute(sub)), Box::new(b.substitute(sub))),
            Expr::Mul(a, b) => Expr::Mul(Box::new(a.substitute(sub)), Box::new(b.substitute(sub))),
            Expr::Div(a, b) => Expr::Div(Box::new(a.substitute(sub)), Box::new(b.substitute(sub))),
            Expr::Pow(a, p) => Expr::Pow(Box::new(a.substitute(sub)), *p),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(sub))),
        }
    }
}

fn is_zero(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if *c == 0.0)
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if *c == 1.0)
}

fn fold_add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
        _ if is_zero(&a) => b,
        _ if is_zero(&b) => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn fold_sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
        _ if is_zero(&b) => a,
        _ if is_zero(&a) => fold_neg(b),
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn fold_mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
        _ if is_zero(&a) || is_zero(&b) => Expr::Const(0.0),
        _ if is_one(&a) => b,
        _ if is_one(&b) => a,
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn fold_neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

/// Fully parenthesized output that `parse` reads back to an equivalent tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c < 0.0 => write!(f, "(-{:?})", -c),
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Var(k) => write!(f, "x{}", k + 1),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, p) => write!(f, "({a})^{p}"),
            Expr::Neg(a) => write!(f, "(-{a})"),
        }
    }
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { value: f64, integral: bool },
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num { value, .. } => format!("number {value}"),
            Tok::Var(k) => format!("variable x{k}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Spanned {
    tok: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            'x' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    return Err(ExprError::Syntax {
                        position: start + 1,
                        expected: "variable index after 'x'".into(),
                        found: chars
                            .get(start)
                            .map_or("end of input".into(), |c| format!("'{c}'")),
                    });
                }
                let digits: String = chars[start..j].iter().collect();
                let index = digits.parse::<usize>().unwrap_or(usize::MAX);
                out.push(Spanned {
                    tok: Tok::Var(index),
                    pos,
                });
                i = j;
                continue;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let (tok, next) = lex_number(&chars, i)?;
                out.push(Spanned { tok, pos });
                i = next;
                continue;
            }
            other => {
                return Err(ExprError::Syntax {
                    position: pos,
                    expected: "number, variable, operator or parenthesis".into(),
                    found: format!("'{other}'"),
                })
            }
        };
        out.push(Spanned { tok, pos });
        i += 1;
    }
    out.push(Spanned {
        tok: Tok::End,
        pos: chars.len() + 1,
    });
    Ok(out)
}

fn lex_number(chars: &[char], start: usize) -> Result<(Tok, usize), ExprError> {
    let mut j = start;
    let mut integral = true;
    let mut digits = 0;
    while j < chars.len() && chars[j].is_ascii_digit() {
        j += 1;
        digits += 1;
    }
    if j < chars.len() && chars[j] == '.' {
        integral = false;
        j += 1;
        while j < chars.len() && chars[j].is_ascii_digit() {
            j += 1;
            digits += 1;
        }
    }
    if digits == 0 {
        return Err(ExprError::Syntax {
            position: start + 1,
            expected: "digits".into(),
            found: "'.'".into(),
        });
    }
    if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
        let mut k = j + 1;
        if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
            k += 1;
        }
        let exp_start = k;
        while k < chars.len() && chars[k].is_ascii_digit() {
            k += 1;
        }
        if k == exp_start {
            return Err(ExprError::Syntax {
                position: k + 1,
                expected: "exponent digits".into(),
                found: chars
                    .get(k)
                    .map_or("end of input".into(), |c| format!("'{c}'")),
            });
        }
        integral = false;
        j = k;
    }
    let text: String = chars[start..j].iter().collect();
    let value = text.parse::<f64>().map_err(|_| ExprError::Syntax {
        position: start + 1,
        expected: "number".into(),
        found: text.clone(),
    })?;
    Ok((Tok::Num { value, integral }, j))
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> &Spanned {
        let t = &self.toks[self.at];
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ExprError {
        let t = self.peek();
        ExprError::Syntax {
            position: t.pos,
            expected: expected.into(),
            found: t.tok.describe(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    lhs = lhs + self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    lhs = lhs - self.term()?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    lhs = lhs * self.factor()?;
                }
                Tok::Slash => {
                    self.bump();
                    lhs = lhs / self.factor()?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.peek();
        match t.tok {
            Tok::Num {
                value,
                integral: true,
            } if value <= u32::MAX as f64 => {
                self.bump();
                Ok(base.pow(value as u32))
            }
            Tok::Num { .. } => Err(ExprError::NonIntegerExponent { position: t.pos }),
            _ => Err(self.unexpected("non-negative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let t = self.peek();
        let pos = t.pos;
        match t.tok {
            Tok::Num { value, .. } => {
                self.bump();
                Ok(Expr::Const(value))
            }
            Tok::Var(index) => {
                if index == 0 || index > self.n {
                    return Err(ExprError::UnknownVariable {
                        index,
                        n: self.n,
                        position: pos,
                    });
                }
                self.bump();
                Ok(Expr::Var(index - 1))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    return Err(self.unexpected("')'"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("number, variable or '('")),
        }
    }
}

/// Parses `text` as a field over `x1..xn`.
pub fn parse(text: &str, n: usize) -> Result<Expr, ExprError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, n };
    let e = p.expr()?;
    if p.peek().tok != Tok::End {
        return Err(p.unexpected("operator or end of input"));
    }
    Ok(e)
}

/// Gradient expressions `∂e/∂x_k`, `k = 0..n`.
pub fn gradient(e: &Expr, n: usize) -> Vec<Expr> {
    (0..n).map(|k| e.differentiate(k)).collect()
}
