//! Scalar expressions in one or two named variables.
//!
//! Every coordinate function in this crate is an [`Expr`]: parsed from text,
//! or assembled with the [`Node`] builders when a constructor composes user
//! functions with linear maps. Evaluation is generic over [`Taylor`], so one
//! tree yields plain values, [`Jet1`] curve jets or [`Jet2`] surface jets.

mod eval;
mod lexer;
mod parser;
mod sampled;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::jets::{Elementary, Jet1, Jet2, JetError, Taylor};
use crate::scalar::Scalar;

pub use lexer::{tokenize, Token, TokenKind};
pub use sampled::HermiteTable;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier `{name}` at byte {position}")]
    UnknownIdentifier { name: String, position: usize },
    #[error("bad use of `{name}` at byte {position}: {message}")]
    Arity {
        name: String,
        position: usize,
        message: String,
    },
    #[error("invalid variable list: {0}")]
    InvalidVariables(String),
}

impl ParseError {
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::UnknownIdentifier { position, .. }
            | ParseError::Arity { position, .. } => Some(*position),
            ParseError::InvalidVariables(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("{source} in `{subexpr}`")]
    Jet { source: JetError, subexpr: String },
    #[error("`{name}` evaluated at {at}, outside its sampled range [{lo}, {hi}]")]
    OutsideSampledRange { name: String, at: f64, lo: f64, hi: f64 },
    #[error("expression takes {expected} argument(s), got {got}")]
    Arity { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Asin,
    Atan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
}

impl Func {
    pub const ALL: [Func; 10] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Asin,
        Func::Atan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Asin => "asin",
            Func::Atan => "atan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn elementary(self) -> Elementary {
        match self {
            Func::Sin => Elementary::Sin,
            Func::Cos => Elementary::Cos,
            Func::Tan => Elementary::Tan,
            Func::Asin => Elementary::Asin,
            Func::Atan => Elementary::Atan,
            Func::Exp => Elementary::Exp,
            Func::Log => Elementary::Ln,
            Func::Sqrt => Elementary::Sqrt,
            Func::Sinh => Elementary::Sinh,
            Func::Cosh => Elementary::Cosh,
        }
    }
}

/// Expression tree. Variables are indices into the owning [`Expr`]'s name
/// list.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var(usize),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
    /// A tabulated function, e.g. a numerically integrated profile.
    Sampled(Arc<HermiteTable>, Box<Node>),
}

impl Node {
    /// A constant; negative values become `Neg(Const)` so that printed trees
    /// re-parse to the same shape.
    pub fn c(x: f64) -> Node {
        if x < 0.0 {
            Node::Neg(Box::new(Node::Const(-x)))
        } else {
            Node::Const(x)
        }
    }

    pub fn var(i: usize) -> Node {
        Node::Var(i)
    }

    pub fn call(f: Func, arg: Node) -> Node {
        Node::Call(f, Box::new(arg))
    }

    pub fn pow(self, exp: Node) -> Node {
        Node::Binary(BinOp::Pow, Box::new(self), Box::new(exp))
    }

    /// `k * node`, with 0, 1 and -1 folded.
    pub fn scaled(k: f64, node: Node) -> Node {
        if k == 0.0 {
            Node::Const(0.0)
        } else if k == 1.0 {
            node
        } else if k == -1.0 {
            Node::Neg(Box::new(node))
        } else {
            Node::c(k) * node
        }
    }

    /// Sum of terms, dropping literal zeros.
    pub fn sum(terms: impl IntoIterator<Item = Node>) -> Node {
        terms
            .into_iter()
            .filter(|t| *t != Node::Const(0.0))
            .reduce(|a, b| match b {
                Node::Neg(inner) => a - *inner,
                b => a + b,
            })
            .unwrap_or(Node::Const(0.0))
    }

    /// `Σ k_i * var_i + offset`.
    pub fn affine(coeffs: &[f64], offset: f64) -> Node {
        let terms = coeffs.iter().enumerate().map(|(i, &k)| Node::scaled(k, Node::Var(i)));
        Node::sum(terms.chain(std::iter::once(Node::c(offset))))
    }

    pub fn max_var(&self) -> Option<usize> {
        match self {
            Node::Const(_) => None,
            Node::Var(i) => Some(*i),
            Node::Neg(a) | Node::Call(_, a) | Node::Sampled(_, a) => a.max_var(),
            Node::Binary(_, a, b) => a.max_var().max(b.max_var()),
        }
    }

    pub fn depends_on(&self, var: usize) -> bool {
        match self {
            Node::Const(_) => false,
            Node::Var(i) => *i == var,
            Node::Neg(a) | Node::Call(_, a) | Node::Sampled(_, a) => a.depends_on(var),
            Node::Binary(_, a, b) => a.depends_on(var) || b.depends_on(var),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.max_var().is_none()
    }

    /// Replaces every `Var(i)` with `args[i]`.
    pub fn substitute(&self, args: &[Node]) -> Node {
        match self {
            Node::Const(c) => Node::Const(*c),
            Node::Var(i) => args[*i].clone(),
            Node::Neg(a) => Node::Neg(Box::new(a.substitute(args))),
            Node::Binary(op, a, b) => Node::Binary(*op, Box::new(a.substitute(args)), Box::new(b.substitute(args))),
            Node::Call(f, a) => Node::Call(*f, Box::new(a.substitute(args))),
            Node::Sampled(t, a) => Node::Sampled(t.clone(), Box::new(a.substitute(args))),
        }
    }

    pub fn display<'a>(&'a self, vars: &'a [String]) -> NodeDisplay<'a> {
        NodeDisplay { node: self, vars }
    }

    fn precedence(&self) -> u8 {
        match self {
            Node::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Node::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Node::Neg(_) => 3,
            Node::Binary(BinOp::Pow, ..) => 4,
            _ => 5,
        }
    }
}

macro_rules! node_binop {
    ($tr:ident, $method:ident, $op:expr) => {
        impl $tr for Node {
            type Output = Node;

            fn $method(self, rhs: Node) -> Node {
                Node::Binary($op, Box::new(self), Box::new(rhs))
            }
        }
    };
}

node_binop!(Add, add, BinOp::Add);
node_binop!(Sub, sub, BinOp::Sub);
node_binop!(Mul, mul, BinOp::Mul);
node_binop!(Div, div, BinOp::Div);

impl Neg for Node {
    type Output = Node;

    fn neg(self) -> Node {
        Node::Neg(Box::new(self))
    }
}

/// Canonical printer: minimal parentheses under the parser's precedence, so
/// that printing a parsed tree and parsing it again yields an equal tree.
pub struct NodeDisplay<'a> {
    node: &'a Node,
    vars: &'a [String],
}

impl NodeDisplay<'_> {
    fn child<'b>(&'b self, node: &'b Node, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = NodeDisplay { node, vars: self.vars };
        if node.precedence() < min_prec {
            write!(f, "({d})")
        } else {
            write!(f, "{d}")
        }
    }
}

impl fmt::Display for NodeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Node::Const(c) if *c < 0.0 => write!(f, "({c:?})"),
            Node::Const(c) => write!(f, "{c:?}"),
            Node::Var(i) => match self.vars.get(*i) {
                Some(name) => f.write_str(name),
                None => write!(f, "${i}"),
            },
            Node::Neg(a) => {
                f.write_str("-")?;
                self.child(a, 3, f)
            }
            Node::Binary(op, a, b) => {
                let (lp, rp) = match op {
                    BinOp::Add | BinOp::Sub => (1, 2),
                    BinOp::Mul | BinOp::Div => (2, 3),
                    BinOp::Pow => (5, 3),
                };
                self.child(a, lp, f)?;
                match op {
                    BinOp::Pow => f.write_str("^")?,
                    _ => write!(f, " {} ", op.symbol())?,
                }
                self.child(b, rp, f)
            }
            Node::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                self.child(a, 0, f)?;
                f.write_str(")")
            }
            Node::Sampled(t, a) => {
                write!(f, "{}(", t.name())?;
                self.child(a, 0, f)?;
                f.write_str(")")
            }
        }
    }
}

/// An expression tree together with its declared variable names.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    vars: Vec<String>,
}

impl Expr {
    /// Parses `source` with the given variable names (one or two, distinct).
    pub fn parse<S: AsRef<str>>(source: &str, vars: &[S]) -> Result<Expr, ParseError> {
        let vars = validate_vars(vars)?;
        let root = parser::parse(source, &vars)?;
        Ok(Expr { root, vars })
    }

    /// Wraps an assembled tree; every variable index must be declared.
    pub fn from_node<S: AsRef<str>>(root: Node, vars: &[S]) -> Result<Expr, ParseError> {
        let vars = validate_vars(vars)?;
        if let Some(i) = root.max_var() {
            if i >= vars.len() {
                return Err(ParseError::InvalidVariables(format!(
                    "tree uses variable #{i} but only {} are declared",
                    vars.len()
                )));
            }
        }
        Ok(Expr { root, vars })
    }

    pub fn constant<S: AsRef<str>>(c: f64, vars: &[S]) -> Expr {
        Expr::from_node(Node::c(c), vars).expect("constant trees use no variables")
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    /// The tree with its variables replaced, for composing into another
    /// expression.
    pub fn substitute(&self, args: &[Node]) -> Node {
        assert_eq!(args.len(), self.arity(), "substitution arity mismatch");
        self.root.substitute(args)
    }

    pub fn eval<T: Scalar, J: Taylor<T>>(&self, args: &[J]) -> Result<J, EvalError> {
        if args.len() != self.arity() {
            return Err(EvalError::Arity {
                expected: self.arity(),
                got: args.len(),
            });
        }
        eval::eval(&self.root, args, &self.vars)
    }

    pub fn eval_value<T: Scalar + Taylor<T>>(&self, args: &[T]) -> Result<T, EvalError> {
        self.eval(args)
    }

    /// Value and three derivatives of a one-variable expression at `x`.
    pub fn eval_jet1<T: Scalar>(&self, x: T) -> Result<Jet1<T>, EvalError> {
        self.eval(&[Jet1::seed(x)])
    }

    /// Value, gradient and Hessian at `(u, v)`. A one-variable expression is
    /// read as a function of `u`.
    pub fn eval_jet2<T: Scalar>(&self, u: T, v: T) -> Result<Jet2<T>, EvalError> {
        match self.arity() {
            1 => self.eval(&[Jet2::seed_u(u)]),
            _ => self.eval(&[Jet2::seed_u(u), Jet2::seed_v(v)]),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root.display(&self.vars))
    }
}

fn validate_vars<S: AsRef<str>>(vars: &[S]) -> Result<Vec<String>, ParseError> {
    if vars.is_empty() || vars.len() > 2 {
        return Err(ParseError::InvalidVariables(format!(
            "expected one or two variables, got {}",
            vars.len()
        )));
    }
    let names: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
    for name in &names {
        let mut chars = name.chars();
        let ok_start = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
        if !ok_start || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(ParseError::InvalidVariables(format!("`{name}` is not an identifier")));
        }
        if Func::from_name(name).is_some() || parser::named_constant(name).is_some() {
            return Err(ParseError::InvalidVariables(format!("`{name}` is reserved")));
        }
    }
    if names.len() == 2 && names[0] == names[1] {
        return Err(ParseError::InvalidVariables("variable names must be distinct".into()));
    }
    Ok(names)
}
