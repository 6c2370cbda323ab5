//! Parser for textual Gauss-map specifications.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('+' | '-') unary | power
//! power   := atom ('^' exponent)?
//! exponent:= ['-'] INT | '(' ['-'] INT ')'
//! atom    := NUMBER | 'z' | 'i' | 'wp' | 'wpp' | NAME | '(' expr ')'
//! ```
//!
//! `NUMBER` is an integer or a finite decimal (`0.25` is read exactly as
//! 1/4). Exponents are integer literals with `|n| <= 64`; `z^2^3` is a syntax
//! error. `wp` and `wpp` stand for the Weierstrass function of the square
//! torus and its derivative and may not be mixed with `z`. Every other name
//! is a parameter and must be bound, except that elliptic expressions may
//! leave torus constants (such as `a`) to be supplied at evaluation time.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{GaussianRational, RationalMap};

pub const MAX_EXPONENT: i32 = 64;

pub type Bindings = BTreeMap<String, GaussianRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unbound parameter `{name}` at {position}")]
    UnboundParameter { name: String, position: usize },
    #[error("division by the zero polynomial at {position}")]
    DivisionByZero { position: usize },
    #[error("exponent at {position} must be an integer literal")]
    NonIntegerExponent { position: usize },
    #[error("exponent {exponent} at {position} exceeds the limit of {MAX_EXPONENT}")]
    ExponentOutOfRange { position: usize, exponent: i64 },
    #[error("`{token}` at {position} cannot be used in a {kind} expression")]
    WrongKind {
        token: String,
        position: usize,
        kind: &'static str,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionKind {
    Rational,
    EllipticSymbolic,
}

/// Source text with its bindings, as given by the user.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionExpr {
    pub source: String,
    pub kind: FunctionKind,
    pub bindings: Bindings,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParsedFunction {
    Rational(RationalMap),
    Elliptic(EllipticExpr),
}

impl FunctionExpr {
    pub fn new(source: impl Into<String>, bindings: Bindings) -> Result<Self, ParseError> {
        let source = source.into();
        let ast = Parser::new(&source)?.parse()?;
        let kind = if ast.mentions_elliptic() {
            FunctionKind::EllipticSymbolic
        } else {
            FunctionKind::Rational
        };
        Ok(Self {
            source,
            kind,
            bindings,
        })
    }

    pub fn lower(&self) -> Result<ParsedFunction, ParseError> {
        parse_function(&self.source, &self.bindings)
    }
}

/// Parses `text`, choosing the elliptic kind when `wp`/`wpp` occur.
pub fn parse_function(text: &str, bindings: &Bindings) -> Result<ParsedFunction, ParseError> {
    let ast = Parser::new(text)?.parse()?;
    if ast.mentions_elliptic() {
        Ok(ParsedFunction::Elliptic(EllipticExpr::from_ast(ast, bindings)?))
    } else {
        Ok(ParsedFunction::Rational(lower_rational(&ast, bindings)?))
    }
}

/// Parses a rational function of `z`; elliptic tokens are rejected.
pub fn parse_rational(text: &str, bindings: &Bindings) -> Result<RationalMap, ParseError> {
    let ast = Parser::new(text)?.parse()?;
    lower_rational(&ast, bindings)
}

pub fn parse_elliptic(text: &str, bindings: &Bindings) -> Result<EllipticExpr, ParseError> {
    let ast = Parser::new(text)?.parse()?;
    EllipticExpr::from_ast(ast, bindings)
}

/// Parses a bare constant such as `2`, `-1/2` or `1+i`.
pub fn parse_constant(text: &str) -> Result<GaussianRational, ParseError> {
    let map = parse_rational(text, &Bindings::new())?;
    if !map.is_constant() {
        return Err(ParseError::Syntax {
            position: 0,
            message: "expected a constant".into(),
        });
    }
    Ok(map.numerator().coeff(0))
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Number(GaussianRational),
    Z(usize),
    Imag,
    Param(String, usize),
    Wp(usize),
    Wpp(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>, usize),
    Pow(Box<Node>, i32),
}

impl Node {
    fn mentions_elliptic(&self) -> bool {
        match self {
            Node::Wp(_) | Node::Wpp(_) => true,
            Node::Number(_) | Node::Z(_) | Node::Imag | Node::Param(..) => false,
            Node::Neg(a) | Node::Pow(a, _) => a.mentions_elliptic(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b, _) => {
                a.mentions_elliptic() || b.mentions_elliptic()
            }
        }
    }
}

fn lower_rational(node: &Node, bindings: &Bindings) -> Result<RationalMap, ParseError> {
    Ok(match node {
        Node::Number(c) => RationalMap::constant(c.clone()),
        Node::Z(_) => RationalMap::z(),
        Node::Imag => RationalMap::constant(GaussianRational::i()),
        Node::Param(name, position) => match bindings.get(name) {
            Some(v) => RationalMap::constant(v.clone()),
            None => {
                return Err(ParseError::UnboundParameter {
                    name: name.clone(),
                    position: *position,
                })
            }
        },
        Node::Wp(position) | Node::Wpp(position) => {
            return Err(ParseError::WrongKind {
                token: if matches!(node, Node::Wp(_)) { "wp" } else { "wpp" }.into(),
                position: *position,
                kind: "rational",
            })
        }
        Node::Neg(a) => lower_rational(a, bindings)?.neg(),
        Node::Add(a, b) => lower_rational(a, bindings)?.add(&lower_rational(b, bindings)?),
        Node::Sub(a, b) => lower_rational(a, bindings)?.sub(&lower_rational(b, bindings)?),
        Node::Mul(a, b) => lower_rational(a, bindings)?.mul(&lower_rational(b, bindings)?),
        Node::Div(a, b, position) => lower_rational(a, bindings)?
            .div(&lower_rational(b, bindings)?)
            .map_err(|_| ParseError::DivisionByZero { position: *position })?,
        Node::Pow(a, n) => {
            let base = lower_rational(a, bindings)?;
            base.pow(*n)
                .map_err(|_| ParseError::DivisionByZero { position: 0 })?
        }
    })
}

/// First-order jet `(value, d/dz value)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: Complex64,
    pub derivative: Complex64,
}

impl Jet {
    pub fn constant(value: Complex64) -> Self {
        Self {
            value,
            derivative: Complex64::zero(),
        }
    }
}

/// Values of the Weierstrass function and its first two derivatives at a
/// point, which is all an elliptic expression needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeierstrassJet {
    pub p: Complex64,
    pub dp: Complex64,
    pub ddp: Complex64,
}

/// A rational expression in `wp`, `wpp` and named torus constants.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticExpr {
    root: Node,
}

impl EllipticExpr {
    fn from_ast(ast: Node, bindings: &Bindings) -> Result<Self, ParseError> {
        fn substitute(node: Node, bindings: &Bindings) -> Result<Node, ParseError> {
            Ok(match node {
                Node::Z(position) => {
                    return Err(ParseError::WrongKind {
                        token: "z".into(),
                        position,
                        kind: "elliptic",
                    })
                }
                Node::Param(name, position) => match bindings.get(&name) {
                    Some(v) => Node::Number(v.clone()),
                    None => Node::Param(name, position),
                },
                Node::Neg(a) => Node::Neg(Box::new(substitute(*a, bindings)?)),
                Node::Pow(a, n) => Node::Pow(Box::new(substitute(*a, bindings)?), n),
                Node::Add(a, b) => Node::Add(Box::new(substitute(*a, bindings)?), Box::new(substitute(*b, bindings)?)),
                Node::Sub(a, b) => Node::Sub(Box::new(substitute(*a, bindings)?), Box::new(substitute(*b, bindings)?)),
                Node::Mul(a, b) => Node::Mul(Box::new(substitute(*a, bindings)?), Box::new(substitute(*b, bindings)?)),
                Node::Div(a, b, p) => Node::Div(Box::new(substitute(*a, bindings)?), Box::new(substitute(*b, bindings)?), p),
                other => other,
            })
        }
        Ok(Self {
            root: substitute(ast, bindings)?,
        })
    }

    /// Names left for the torus to supply.
    pub fn free_constants(&self) -> Vec<String> {
        fn walk(node: &Node, out: &mut Vec<String>) {
            match node {
                Node::Param(name, _) => {
                    if !out.contains(name) {
                        out.push(name.clone());
                    }
                }
                Node::Neg(a) | Node::Pow(a, _) => walk(a, out),
                Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b, _) => {
                    walk(a, out);
                    walk(b, out);
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    /// Value and z-derivative at a point of the torus.
    pub fn eval(
        &self,
        w: &WeierstrassJet,
        constants: &BTreeMap<String, Complex64>,
    ) -> Result<Jet, ParseError> {
        eval_jet(&self.root, w, constants)
    }
}

fn eval_jet(node: &Node, w: &WeierstrassJet, constants: &BTreeMap<String, Complex64>) -> Result<Jet, ParseError> {
    Ok(match node {
        Node::Number(c) => Jet::constant(c.to_complex()),
        Node::Imag => Jet::constant(Complex64::i()),
        Node::Z(position) => {
            return Err(ParseError::WrongKind {
                token: "z".into(),
                position: *position,
                kind: "elliptic",
            })
        }
        Node::Param(name, position) => match constants.get(name) {
            Some(v) => Jet::constant(*v),
            None => {
                return Err(ParseError::UnboundParameter {
                    name: name.clone(),
                    position: *position,
                })
            }
        },
        Node::Wp(_) => Jet {
            value: w.p,
            derivative: w.dp,
        },
        Node::Wpp(_) => Jet {
            value: w.dp,
            derivative: w.ddp,
        },
        Node::Neg(a) => {
            let a = eval_jet(a, w, constants)?;
            Jet {
                value: -a.value,
                derivative: -a.derivative,
            }
        }
        Node::Add(a, b) => {
            let (a, b) = (eval_jet(a, w, constants)?, eval_jet(b, w, constants)?);
            Jet {
                value: a.value + b.value,
                derivative: a.derivative + b.derivative,
            }
        }
        Node::Sub(a, b) => {
            let (a, b) = (eval_jet(a, w, constants)?, eval_jet(b, w, constants)?);
            Jet {
                value: a.value - b.value,
                derivative: a.derivative - b.derivative,
            }
        }
        Node::Mul(a, b) => {
            let (a, b) = (eval_jet(a, w, constants)?, eval_jet(b, w, constants)?);
            Jet {
                value: a.value * b.value,
                derivative: a.derivative * b.value + a.value * b.derivative,
            }
        }
        Node::Div(a, b, _) => {
            let (a, b) = (eval_jet(a, w, constants)?, eval_jet(b, w, constants)?);
            Jet {
                value: a.value / b.value,
                derivative: (a.derivative * b.value - a.value * b.derivative) / (b.value * b.value),
            }
        }
        Node::Pow(a, n) => {
            let a = eval_jet(a, w, constants)?;
            let value = a.value.powi(*n);
            Jet {
                value,
                derivative: a.value.powi(*n - 1) * a.derivative * (*n as f64),
            }
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(GaussianRational, bool),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos] as char;
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let tok = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '0'..='9' | '.' => {
                while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'.') {
                    pos += 1;
                }
                let lit = &text[start..pos];
                let (value, integral) = parse_decimal(lit).ok_or_else(|| ParseError::Syntax {
                    position: start,
                    message: format!("malformed number `{lit}`"),
                })?;
                out.push((Token::Number(value, integral), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                    pos += 1;
                }
                out.push((Token::Ident(text[start..pos].to_string()), start));
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    position: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((tok, start));
        pos += 1;
    }
    out.push((Token::End, text.len()));
    Ok(out)
}

fn parse_decimal(lit: &str) -> Option<(GaussianRational, bool)> {
    let mut parts = lit.split('.');
    let int_part = parts.next()?;
    let frac_part = parts.next();
    if parts.next().is_some() || (int_part.is_empty() && frac_part.is_none_or(str::is_empty)) {
        return None;
    }
    let int_val: BigInt = if int_part.is_empty() { BigInt::zero() } else { int_part.parse().ok()? };
    match frac_part {
        None => Some((GaussianRational::from_real(BigRational::from_integer(int_val)), true)),
        Some(f) => {
            let frac_val: BigInt = if f.is_empty() { BigInt::zero() } else { f.parse().ok()? };
            let scale = BigInt::from(10).pow(f.len() as u32);
            let r = BigRational::new(int_val * &scale + frac_val, scale);
            Some((GaussianRational::from_real(r), false))
        }
    }
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Self {
            tokens: tokenize(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn position(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> (Token, usize) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.position(),
            message: message.into(),
        })
    }

    fn parse(mut self) -> Result<Node, ParseError> {
        if *self.peek() == Token::End {
            return self.error("empty expression");
        }
        let node = self.expr()?;
        if *self.peek() != Token::End {
            return self.error(format!("unexpected {:?}", self.peek()));
        }
        Ok(node)
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Token::Plus => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Token::Minus => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Token::Star => {
                    self.bump();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Token::Slash => {
                    let (_, at) = self.bump();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?), at);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        match self.peek() {
            Token::Minus => {
                self.bump();
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Token::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Token::Caret {
            return Ok(base);
        }
        self.bump();
        let exponent = self.exponent()?;
        Ok(Node::Pow(Box::new(base), exponent))
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        let parenthesized = *self.peek() == Token::LParen;
        if parenthesized {
            self.bump();
        }
        let negative = *self.peek() == Token::Minus;
        if negative {
            self.bump();
        }
        let at = self.position();
        let value = match self.bump().0 {
            Token::Number(v, true) => v,
            Token::Number(_, false) | Token::Ident(_) | Token::LParen => {
                return Err(ParseError::NonIntegerExponent { position: at })
            }
            _ => {
                return Err(ParseError::Syntax {
                    position: at,
                    message: "expected an integer exponent".into(),
                })
            }
        };
        if parenthesized {
            if *self.peek() != Token::RParen {
                return self.error("expected `)` after exponent");
            }
            self.bump();
        }
        let magnitude = value.re().to_integer();
        let n: i64 = i64::try_from(&magnitude).unwrap_or(i64::MAX);
        let n = if negative { -n } else { n };
        if n.abs() > MAX_EXPONENT as i64 {
            return Err(ParseError::ExponentOutOfRange {
                position: at,
                exponent: n,
            });
        }
        Ok(n as i32)
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        let (tok, at) = self.bump();
        match tok {
            Token::Number(v, _) => Ok(Node::Number(v)),
            Token::Ident(name) => Ok(match name.as_str() {
                "z" => Node::Z(at),
                "i" => Node::Imag,
                "wp" => Node::Wp(at),
                "wpp" => Node::Wpp(at),
                _ => Node::Param(name, at),
            }),
            Token::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Token::RParen {
                    return self.error("expected `)`");
                }
                self.bump();
                Ok(inner)
            }
            Token::End => Err(ParseError::Syntax {
                position: at,
                message: "unexpected end of input".into(),
            }),
            other => Err(ParseError::Syntax {
                position: at,
                message: format!("unexpected {other:?}"),
            }),
        }
    }
}

/// Convenience for building bindings in code and tests.
pub fn bindings<'a>(pairs: impl IntoIterator<Item = (&'a str, GaussianRational)>) -> Bindings {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Polynomial;

    fn rat(text: &str, b: &Bindings) -> RationalMap {
        parse_rational(text, b).unwrap()
    }

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::from_integers(c)
    }

    #[test]
    fn monomial() {
        let m = rat("z^2", &Bindings::new());
        assert_eq!(m.numerator(), &poly(&[0, 0, 1]));
        assert_eq!(m.denominator(), &poly(&[1]));
    }

    #[test]
    fn k1_gauss_map_with_parameter() {
        let b = bindings([("a", GaussianRational::from(2))]);
        let m = rat("(z*(z+a))/(a*z+1)", &b);
        let expect = RationalMap::new(poly(&[0, 2, 1]), poly(&[1, 2])).unwrap();
        assert_eq!(m, expect);
    }

    #[test]
    fn k2_gauss_map() {
        let m = rat("z*(z+6)/(2*z+5)", &Bindings::new());
        assert_eq!(m, RationalMap::new(poly(&[0, 6, 1]), poly(&[5, 2])).unwrap());
    }

    #[test]
    fn complex_literals_and_decimals() {
        let c = parse_constant("1/2+3*i").unwrap();
        assert_eq!(c.to_string(), "1/2+3*i");
        assert_eq!(parse_constant("0.25").unwrap(), GaussianRational::from_ratio(1, 4));
        assert_eq!(parse_constant("-(2)^-2").unwrap(), GaussianRational::from_ratio(-1, 4));
    }

    #[test]
    fn precedence() {
        // -z^2 is -(z^2); 1/2*z is (1/2)*z
        assert_eq!(rat("-z^2", &Bindings::new()), RationalMap::from_poly(poly(&[0, 0, -1])));
        let half = rat("1/2*z", &Bindings::new());
        assert_eq!(half.numerator().coeff(1), GaussianRational::from_ratio(1, 2));
    }

    #[test]
    fn errors_carry_positions() {
        let b = Bindings::new();
        assert!(matches!(
            parse_rational("z + * 2", &b),
            Err(ParseError::Syntax { position: 4, .. })
        ));
        assert_eq!(
            parse_rational("z+a", &b),
            Err(ParseError::UnboundParameter { name: "a".into(), position: 2 })
        );
        assert_eq!(
            parse_rational("1/(z-z)", &b),
            Err(ParseError::DivisionByZero { position: 1 })
        );
        assert_eq!(
            parse_rational("z^1.5", &b),
            Err(ParseError::NonIntegerExponent { position: 2 })
        );
        assert_eq!(
            parse_rational("z^n", &bindings([("n", 2.into())])),
            Err(ParseError::NonIntegerExponent { position: 2 })
        );
        assert!(matches!(
            parse_rational("z^65", &b),
            Err(ParseError::ExponentOutOfRange { exponent: 65, .. })
        ));
        assert!(matches!(parse_rational("z^2^3", &b), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_rational("", &b), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_rational("(z", &b), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_rational("wp", &b), Err(ParseError::WrongKind { .. })));
        assert!(matches!(parse_elliptic("wp+z", &b), Err(ParseError::WrongKind { .. })));
    }

    #[test]
    fn zero_to_negative_power_is_division_by_zero() {
        assert!(matches!(
            parse_rational("(z-z)^-1", &Bindings::new()),
            Err(ParseError::DivisionByZero { .. })
        ));
    }

    #[test]
    fn elliptic_jet_derivative() {
        let e = parse_elliptic("wpp/wp", &Bindings::new()).unwrap();
        let w = WeierstrassJet {
            p: Complex64::new(2.0, 1.0),
            dp: Complex64::new(-1.0, 0.5),
            ddp: Complex64::new(3.0, -2.0),
        };
        let j = e.eval(&w, &BTreeMap::new()).unwrap();
        assert!((j.value - w.dp / w.p).norm() < 1e-15);
        let expect = (w.ddp * w.p - w.dp * w.dp) / (w.p * w.p);
        assert!((j.derivative - expect).norm() < 1e-14);
    }

    #[test]
    fn elliptic_free_constants_resolve_at_evaluation() {
        let e = parse_elliptic("2*(wp^2-3*a^2)/wpp", &Bindings::new()).unwrap();
        assert_eq!(e.free_constants(), vec!["a".to_string()]);
        let w = WeierstrassJet {
            p: Complex64::new(1.0, 0.0),
            dp: Complex64::new(2.0, 0.0),
            ddp: Complex64::new(0.0, 0.0),
        };
        assert!(e.eval(&w, &BTreeMap::new()).is_err());
        let consts = BTreeMap::from([("a".to_string(), Complex64::new(1.0, 0.0))]);
        let j = e.eval(&w, &consts).unwrap();
        assert!((j.value - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn kind_detection() {
        let f = FunctionExpr::new("wpp/wp", Bindings::new()).unwrap();
        assert_eq!(f.kind, FunctionKind::EllipticSymbolic);
        let g = FunctionExpr::new("z^3", Bindings::new()).unwrap();
        assert_eq!(g.kind, FunctionKind::Rational);
        assert!(matches!(g.lower().unwrap(), ParsedFunction::Rational(_)));
    }
}
