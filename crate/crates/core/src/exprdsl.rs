//! Expression language for scalar functions of `t` with named parameters.
//!
//! Grammar:
//!
//! ```text
//! expr    := term { ('+' | '-') term }
//! term    := factor { ('*' | '/') factor }
//! factor  := unary [ '^' factor ]
//! unary   := '-' unary | primary
//! primary := NUMBER | IDENT | IDENT '(' expr { ',' expr } ')' | '(' expr ')'
//! ```
//!
//! `t` is the variable; any other bare identifier is a parameter. Calls must
//! name a builtin. Note that unary minus binds tighter than `^`, so `-t^2`
//! is `(-t)^2`.
//!
//! Derivatives come from dual-number propagation. `diff(f)` evaluates f′; its
//! own derivative is a central difference of f′ with h = 1e−5·(1+|t|).

use crate::error::{domain, Error, Result};
use crate::geometry::{ct_k, deficit_k, deficit_prime_k, s_k, s_prime_k};
use crate::specfun;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// [`fd_step`] capped at t/2 for t > 0, so stencils stay on the positive axis.
pub fn fd_step_radial(t: f64) -> f64 {
    if t > 0.0 {
        fd_step(t).min(0.5 * t)
    } else {
        fd_step(t)
    }
}

/// Central-difference step 1e−5·(1+|t|).
pub fn fd_step(t: f64) -> f64 {
    1e-5 * (1.0 + t.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Abs,
    Sqrt,
    Exp,
    Log,
    Pow,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Coth,
    Ct,
    S,
    Deficit,
    BesselJ,
    BesselRatio,
    Hyp2f1,
    Gamma,
    Diff,
}

impl Builtin {
    pub const ALL: [Builtin; 19] = [
        Builtin::Abs,
        Builtin::Sqrt,
        Builtin::Exp,
        Builtin::Log,
        Builtin::Pow,
        Builtin::Sin,
        Builtin::Cos,
        Builtin::Sinh,
        Builtin::Cosh,
        Builtin::Tanh,
        Builtin::Coth,
        Builtin::Ct,
        Builtin::S,
        Builtin::Deficit,
        Builtin::BesselJ,
        Builtin::BesselRatio,
        Builtin::Hyp2f1,
        Builtin::Gamma,
        Builtin::Diff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Abs => "abs",
            Builtin::Sqrt => "sqrt",
            Builtin::Exp => "exp",
            Builtin::Log => "log",
            Builtin::Pow => "pow",
            Builtin::Sin => "sin",
            Builtin::Cos => "cos",
            Builtin::Sinh => "sinh",
            Builtin::Cosh => "cosh",
            Builtin::Tanh => "tanh",
            Builtin::Coth => "coth",
            Builtin::Ct => "ct",
            Builtin::S => "s",
            Builtin::Deficit => "D",
            Builtin::BesselJ => "besselj",
            Builtin::BesselRatio => "besselratio",
            Builtin::Hyp2f1 => "hyp2f1",
            Builtin::Gamma => "gamma",
            Builtin::Diff => "diff",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Builtin::Pow | Builtin::BesselJ | Builtin::BesselRatio => 2,
            Builtin::Hyp2f1 => 4,
            _ => 1,
        }
    }

    pub fn lookup(name: &str) -> Option<Builtin> {
        Builtin::ALL.iter().copied().find(|b| b.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var,
    Param(String),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Call(Builtin, Vec<Node>),
}

impl Node {
    fn depends_on_t(&self) -> bool {
        match self {
            Node::Num(_) | Node::Param(_) => false,
            Node::Var => true,
            Node::Neg(a) => a.depends_on_t(),
            Node::Bin(_, a, b) => a.depends_on_t() || b.depends_on_t(),
            Node::Call(_, args) => args.iter().any(Node::depends_on_t),
        }
    }

    fn collect_params(&self, out: &mut BTreeSet<String>) {
        match self {
            Node::Num(_) | Node::Var => {}
            Node::Param(p) => {
                out.insert(p.clone());
            }
            Node::Neg(a) => a.collect_params(out),
            Node::Bin(_, a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
            Node::Call(f, args) => {
                if matches!(f, Builtin::Ct | Builtin::S | Builtin::Deficit) {
                    out.insert("kappa".to_string());
                }
                for a in args {
                    a.collect_params(out);
                }
            }
        }
    }

    /// Precedence level: 0 sum, 1 product, 2 power, 3 unary, 4 primary.
    fn level(&self) -> u8 {
        match self {
            Node::Bin(BinOp::Add | BinOp::Sub, ..) => 0,
            Node::Bin(BinOp::Mul | BinOp::Div, ..) => 1,
            Node::Bin(BinOp::Pow, ..) => 2,
            Node::Neg(_) => 3,
            _ => 4,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min_level: u8) -> fmt::Result {
        let paren = self.level() < min_level;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Node::Num(v) => write!(f, "{v:?}")?,
            Node::Var => f.write_str("t")?,
            Node::Param(p) => f.write_str(p)?,
            Node::Neg(a) => {
                f.write_str("-")?;
                a.write(f, 3)?;
            }
            Node::Bin(op, a, b) => {
                let (sym, l, r) = match op {
                    BinOp::Add => (" + ", 0, 1),
                    BinOp::Sub => (" - ", 0, 1),
                    BinOp::Mul => ("*", 1, 2),
                    BinOp::Div => ("/", 1, 2),
                    BinOp::Pow => ("^", 3, 2),
                };
                a.write(f, l)?;
                f.write_str(sym)?;
                b.write(f, r)?;
            }
            Node::Call(b, args) => {
                write!(f, "{}(", b.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    a.write(f, 0)?;
                }
                f.write_str(")")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Parameter values keyed by name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamBinding {
    values: BTreeMap<String, f64>,
}

impl ParamBinding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.values.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<f64> {
        self.get(name).ok_or_else(|| Error::Unbound(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Copy every entry of `other` into `self`, overwriting.
    pub fn extend(&mut self, other: &ParamBinding) {
        for (k, v) in other.iter() {
            self.set(k, v);
        }
    }
}

/// Parsed expression. Cheap to clone and safe to share across threads.
#[derive(Debug, Clone)]
pub struct ScalarExpr {
    root: Arc<Node>,
    params: Arc<BTreeSet<String>>,
}

impl PartialEq for ScalarExpr {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.write(f, 0)
    }
}

impl std::str::FromStr for ScalarExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Value and derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: f64,
}

impl Dual {
    fn constant(v: f64) -> Self {
        Self { v, d: 0.0 }
    }
}

struct Ctx<'a> {
    t: f64,
    binding: &'a ParamBinding,
    deriv: bool,
}

impl ScalarExpr {
    pub fn parse(source: &str) -> Result<Self> {
        let mut p = Parser::new(source);
        let node = p.expr()?;
        p.skip_ws();
        if let Some(c) = p.peek() {
            return Err(p.err(format!("unexpected `{c}`")));
        }
        Ok(Self::from_node(node))
    }

    fn from_node(node: Node) -> Self {
        let mut params = BTreeSet::new();
        node.collect_params(&mut params);
        Self {
            root: Arc::new(node),
            params: Arc::new(params),
        }
    }

    /// Constant expression with the given value.
    pub fn constant(v: f64) -> Self {
        if v < 0.0 {
            Self::from_node(Node::Neg(Box::new(Node::Num(-v))))
        } else {
            Self::from_node(Node::Num(v))
        }
    }

    /// Names that must be bound for evaluation (includes `kappa` for ct, s, D).
    pub fn params_required(&self) -> &BTreeSet<String> {
        &self.params
    }

    pub fn depends_on_t(&self) -> bool {
        self.root.depends_on_t()
    }

    pub fn eval(&self, t: f64, binding: &ParamBinding) -> Result<f64> {
        let ctx = Ctx { t, binding, deriv: false };
        Ok(eval_node(&self.root, &ctx)?.v)
    }

    pub fn eval_d(&self, t: f64, binding: &ParamBinding) -> Result<(f64, f64)> {
        let ctx = Ctx { t, binding, deriv: true };
        let r = eval_node(&self.root, &ctx)?;
        Ok((r.v, r.d))
    }

    /// Replace every parameter that `binding` defines by its numeric value.
    pub fn substitute(&self, binding: &ParamBinding) -> Self {
        fn go(n: &Node, b: &ParamBinding) -> Node {
            match n {
                Node::Param(p) => match b.get(p) {
                    Some(v) if v < 0.0 => Node::Neg(Box::new(Node::Num(-v))),
                    Some(v) => Node::Num(v),
                    None => n.clone(),
                },
                Node::Neg(a) => Node::Neg(Box::new(go(a, b))),
                Node::Bin(op, a, c) => Node::Bin(*op, Box::new(go(a, b)), Box::new(go(c, b))),
                Node::Call(f, args) => Node::Call(*f, args.iter().map(|a| go(a, b)).collect()),
                _ => n.clone(),
            }
        }
        let mut node = go(&self.root, binding);
        // ct, s and D still read kappa from the binding at evaluation time.
        let _ = &mut node;
        Self::from_node(node)
    }
}

fn wrap(node: &Node, e: Error) -> Error {
    match e {
        Error::InExpr { .. } | Error::Unbound(_) | Error::UnsupportedDerivative(_) => e,
        other => Error::InExpr {
            expr: ScalarExpr::from_node(node.clone()).to_string(),
            source: Box::new(other),
        },
    }
}

fn require_constant(node: &Node, arg: &Node, what: &str) -> Result<()> {
    if arg.depends_on_t() {
        Err(Error::UnsupportedDerivative(format!(
            "{what} with a t-dependent parameter in `{}`",
            ScalarExpr::from_node(node.clone())
        )))
    } else {
        Ok(())
    }
}

fn pow_value(x: f64, y: f64) -> Result<f64> {
    if x < 0.0 && y != y.round() {
        return Err(domain("^", format!("negative base {x} with non-integer exponent {y}")));
    }
    if x == 0.0 && y < 0.0 {
        return Err(domain("^", format!("zero base with negative exponent {y}")));
    }
    let v = x.powf(y);
    if !v.is_finite() {
        return Err(domain("^", format!("{x}^{y} overflows")));
    }
    Ok(v)
}

fn eval_pow(node: &Node, base: &Node, expo: &Node, a: Dual, b: Dual, ctx: &Ctx) -> Result<Dual> {
    let v = pow_value(a.v, b.v).map_err(|e| wrap(node, e))?;
    if !ctx.deriv {
        return Ok(Dual::constant(v));
    }
    let mut d = 0.0;
    if a.d != 0.0 {
        if a.v == 0.0 {
            if b.v == 1.0 {
                d += a.d;
            } else if b.v < 1.0 {
                return Err(wrap(node, domain("^", "derivative unbounded at zero base")));
            }
        } else {
            d += b.v * pow_value(a.v, b.v - 1.0).map_err(|e| wrap(node, e))? * a.d;
        }
    }
    if expo.depends_on_t() && b.d != 0.0 {
        if !(a.v > 0.0) {
            if a.v == 0.0 && b.v > 0.0 {
                return Ok(Dual { v, d });
            }
            return Err(wrap(node, domain("^", "t-dependent exponent needs a positive base")));
        }
        d += v * a.v.ln() * b.d;
    }
    let _ = base;
    Ok(Dual { v, d })
}

fn kappa_of(ctx: &Ctx) -> Result<f64> {
    ctx.binding.require("kappa")
}

fn eval_node(node: &Node, ctx: &Ctx) -> Result<Dual> {
    match node {
        Node::Num(v) => Ok(Dual::constant(*v)),
        Node::Var => Ok(Dual { v: ctx.t, d: 1.0 }),
        Node::Param(p) => Ok(Dual::constant(ctx.binding.require(p)?)),
        Node::Neg(a) => {
            let a = eval_node(a, ctx)?;
            Ok(Dual { v: -a.v, d: -a.d })
        }
        Node::Bin(op, l, r) => {
            let a = eval_node(l, ctx)?;
            let b = eval_node(r, ctx)?;
            match op {
                BinOp::Add => Ok(Dual { v: a.v + b.v, d: a.d + b.d }),
                BinOp::Sub => Ok(Dual { v: a.v - b.v, d: a.d - b.d }),
                BinOp::Mul => Ok(Dual { v: a.v * b.v, d: a.d * b.v + a.v * b.d }),
                BinOp::Div => {
                    if b.v == 0.0 {
                        return Err(wrap(node, domain("/", "division by zero")));
                    }
                    let v = a.v / b.v;
                    Ok(Dual { v, d: (a.d - v * b.d) / b.v })
                }
                BinOp::Pow => eval_pow(node, l, r, a, b, ctx),
            }
        }
        Node::Call(f, args) => eval_call(node, *f, args, ctx),
    }
}

fn chain(x: Dual, v: f64, dv: impl FnOnce() -> Result<f64>, ctx: &Ctx) -> Result<Dual> {
    if !ctx.deriv || x.d == 0.0 {
        return Ok(Dual::constant(v));
    }
    Ok(Dual { v, d: dv()? * x.d })
}

fn eval_call(node: &Node, f: Builtin, args: &[Node], ctx: &Ctx) -> Result<Dual> {
    if f == Builtin::Diff {
        return eval_diff(node, &args[0], ctx);
    }
    if f == Builtin::Gamma && ctx.deriv && args[0].depends_on_t() {
        return Err(Error::UnsupportedDerivative("gamma".to_string()));
    }
    let vals = args
        .iter()
        .map(|a| eval_node(a, ctx))
        .collect::<Result<Vec<_>>>()?;
    let x = *vals.last().expect("arity checked at parse");
    let r = (|| -> Result<Dual> {
        match f {
            Builtin::Abs => {
                let s = if x.v > 0.0 { 1.0 } else if x.v < 0.0 { -1.0 } else { 0.0 };
                chain(x, x.v.abs(), || Ok(s), ctx)
            }
            Builtin::Sqrt => {
                if x.v < 0.0 {
                    return Err(domain("sqrt", format!("negative argument {}", x.v)));
                }
                let v = x.v.sqrt();
                chain(x, v, || {
                    if v == 0.0 {
                        Err(domain("sqrt", "derivative unbounded at 0"))
                    } else {
                        Ok(0.5 / v)
                    }
                }, ctx)
            }
            Builtin::Exp => {
                let v = x.v.exp();
                chain(x, v, || Ok(v), ctx)
            }
            Builtin::Log => {
                if !(x.v > 0.0) {
                    return Err(domain("log", format!("nonpositive argument {}", x.v)));
                }
                chain(x, x.v.ln(), || Ok(1.0 / x.v), ctx)
            }
            Builtin::Pow => eval_pow(node, &args[0], &args[1], vals[0], vals[1], ctx),
            Builtin::Sin => chain(x, x.v.sin(), || Ok(x.v.cos()), ctx),
            Builtin::Cos => chain(x, x.v.cos(), || Ok(-x.v.sin()), ctx),
            Builtin::Sinh => chain(x, x.v.sinh(), || Ok(x.v.cosh()), ctx),
            Builtin::Cosh => chain(x, x.v.cosh(), || Ok(x.v.sinh()), ctx),
            Builtin::Tanh => {
                let v = x.v.tanh();
                chain(x, v, || Ok(1.0 - v * v), ctx)
            }
            Builtin::Coth => {
                if x.v == 0.0 {
                    return Err(domain("coth", "pole at 0"));
                }
                let v = 1.0 / x.v.tanh();
                chain(x, v, || Ok(1.0 - v * v), ctx)
            }
            Builtin::Ct => {
                let k = kappa_of(ctx)?;
                let v = ct_k(k, x.v)?;
                chain(x, v, || Ok(-k - v * v), ctx)
            }
            Builtin::S => {
                let k = kappa_of(ctx)?;
                chain(x, s_k(k, x.v)?, || s_prime_k(k, x.v), ctx)
            }
            Builtin::Deficit => {
                let k = kappa_of(ctx)?;
                chain(x, deficit_k(k, x.v)?, || deficit_prime_k(k, x.v), ctx)
            }
            Builtin::BesselJ => {
                if ctx.deriv {
                    require_constant(node, &args[0], "besselj derivative")?;
                }
                let nu = vals[0].v;
                chain(x, specfun::bessel_j(nu, x.v)?, || specfun::bessel_j_deriv(nu, x.v), ctx)
            }
            Builtin::BesselRatio => {
                if ctx.deriv {
                    require_constant(node, &args[0], "besselratio derivative")?;
                }
                let nu = vals[0].v;
                chain(x, specfun::bessel_ratio(nu, x.v)?, || specfun::bessel_ratio_deriv(nu, x.v), ctx)
            }
            Builtin::Hyp2f1 => {
                if ctx.deriv {
                    for a in &args[..3] {
                        require_constant(node, a, "hyp2f1 derivative")?;
                    }
                }
                let (a, b, c) = (vals[0].v, vals[1].v, vals[2].v);
                chain(x, specfun::hyp2f1(a, b, c, x.v)?, || specfun::hyp2f1_deriv(a, b, c, x.v), ctx)
            }
            Builtin::Gamma => Ok(Dual::constant(specfun::gamma(x.v)?)),
            Builtin::Diff => unreachable!(),
        }
    })();
    r.map_err(|e| wrap(node, e))
}

fn eval_diff(_node: &Node, inner: &Node, ctx: &Ctx) -> Result<Dual> {
    let at = |t: f64| -> Result<f64> {
        let c = Ctx { t, binding: ctx.binding, deriv: true };
        Ok(eval_node(inner, &c)?.d)
    };
    let v = at(ctx.t)?;
    if !ctx.deriv || !inner.depends_on_t() {
        return Ok(Dual::constant(v));
    }
    let h = fd_step_radial(ctx.t);
    let d = (at(ctx.t + h)? - at(ctx.t - h)?) / (2.0 * h);
    Ok(Dual { v, d })
}

// ---------------------------------------------------------------------------
// Parser

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn line_col(&self, pos: usize) -> (usize, usize) {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, col)
    }

    fn err_at(&self, pos: usize, msg: impl Into<String>) -> Error {
        let (line, col) = self.line_col(pos);
        Error::Syntax { line, col, msg: msg.into() }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        self.err_at(self.pos, msg)
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Node::Bin(BinOp::Add, Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Node::Bin(BinOp::Sub, Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = Node::Bin(BinOp::Mul, Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat('/') {
                lhs = Node::Bin(BinOp::Div, Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Node> {
        let base = self.unary()?;
        if self.eat('^') {
            let expo = self.factor()?;
            return Ok(Node::Bin(BinOp::Pow, Box::new(base), Box::new(expo)));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Node> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(start),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let ident = &self.src[start..self.pos];
                self.skip_ws();
                if self.peek() == Some('(') {
                    let Some(b) = Builtin::lookup(ident) else {
                        return Err(self.err_at(start, format!("unknown function `{ident}`")));
                    };
                    self.pos += 1;
                    let mut args = Vec::new();
                    if !self.eat(')') {
                        loop {
                            args.push(self.expr()?);
                            if self.eat(',') {
                                continue;
                            }
                            if self.eat(')') {
                                break;
                            }
                            return Err(self.err("expected `,` or `)`"));
                        }
                    }
                    if args.len() != b.arity() {
                        return Err(Error::Arity {
                            name: ident.to_string(),
                            expected: b.arity(),
                            got: args.len(),
                        });
                    }
                    Ok(Node::Call(b, args))
                } else if ident == "t" {
                    Ok(Node::Var)
                } else {
                    Ok(Node::Param(ident.to_string()))
                }
            }
            Some(c) => Err(self.err(format!("unexpected `{c}`"))),
        }
    }

    fn number(&mut self, start: usize) -> Result<Node> {
        let bytes = self.src.as_bytes();
        let mut i = self.pos;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
            i += 1;
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if j < bytes.len() && bytes[j].is_ascii_digit() {
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        let text = &self.src[start..i];
        let v: f64 = text
            .parse()
            .map_err(|_| self.err_at(start, format!("malformed number `{text}`")))?;
        self.pos = i;
        Ok(Node::Num(v))
    }
}
