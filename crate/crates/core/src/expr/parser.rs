//! Recursive descent over the grammar
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' factor)?
//! atom   := number | name | name '(' expr ')' | '(' expr ')'
//! ```

use super::lexer::{tokenize, Token, TokenKind};
use super::{BinOp, Func, Node, ParseError};

const MAX_DEPTH: usize = 256;

pub fn parse(source: &str, vars: &[String]) -> Result<Node, ParseError> {
    let tokens = tokenize(source)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        vars,
        depth: 0,
        end: source.len(),
    };
    let node = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(ParseError::Syntax {
            position: t.position,
            message: format!("unexpected `{}` after expression", t.lexeme),
        });
    }
    Ok(node)
}

struct Parser<'a, 'v> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    vars: &'v [String],
    depth: usize,
    end: usize,
}

impl<'a> Parser<'a, '_> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token<'a>> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.position)
    }

    fn eat_op(&mut self, ops: &[char]) -> Option<char> {
        match self.peek().map(|t| t.kind) {
            Some(TokenKind::Op(c)) if ops.contains(&c) => {
                self.pos += 1;
                Some(c)
            }
            _ => None,
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::Syntax {
                position: self.here(),
                message: format!("expression nested deeper than {MAX_DEPTH} levels"),
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        while let Some(op) = self.eat_op(&['+', '-']) {
            let rhs = self.term()?;
            let op = if op == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.factor()?;
        while let Some(op) = self.eat_op(&['*', '/']) {
            let rhs = self.factor()?;
            let op = if op == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Node, ParseError> {
        self.enter()?;
        let node = if self.eat_op(&['-']).is_some() {
            Node::Neg(Box::new(self.factor()?))
        } else {
            self.power()?
        };
        self.depth -= 1;
        Ok(node)
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.atom()?;
        if self.eat_op(&['^']).is_some() {
            let exp = self.factor()?;
            return Ok(Node::Binary(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        let position = self.here();
        let Some(tok) = self.next() else {
            return Err(ParseError::Syntax {
                position,
                message: "unexpected end of input".into(),
            });
        };
        match tok.kind {
            TokenKind::Number(v) => Ok(Node::Const(v)),
            TokenKind::LParen => {
                let inner = self.expr()?;
                self.expect_rparen(tok.position)?;
                Ok(inner)
            }
            TokenKind::Ident => self.name(tok),
            _ => Err(ParseError::Syntax {
                position,
                message: format!("unexpected `{}`", tok.lexeme),
            }),
        }
    }

    fn name(&mut self, tok: Token<'a>) -> Result<Node, ParseError> {
        let called = matches!(self.peek().map(|t| t.kind), Some(TokenKind::LParen));
        if let Some(func) = Func::from_name(tok.lexeme) {
            if !called {
                return Err(ParseError::Arity {
                    name: tok.lexeme.to_string(),
                    position: tok.position,
                    message: "function requires one parenthesized argument".into(),
                });
            }
            let open = self.next().map_or(tok.position, |t| t.position);
            if matches!(self.peek().map(|t| t.kind), Some(TokenKind::RParen)) {
                return Err(ParseError::Arity {
                    name: tok.lexeme.to_string(),
                    position: tok.position,
                    message: "function takes exactly one argument, got none".into(),
                });
            }
            let arg = self.expr()?;
            if matches!(self.peek().map(|t| t.kind), Some(TokenKind::Comma)) {
                return Err(ParseError::Arity {
                    name: tok.lexeme.to_string(),
                    position: tok.position,
                    message: "function takes exactly one argument".into(),
                });
            }
            self.expect_rparen(open)?;
            return Ok(Node::Call(func, Box::new(arg)));
        }

        let node = if let Some(i) = self.vars.iter().position(|v| v == tok.lexeme) {
            Node::Var(i)
        } else if let Some(c) = named_constant(tok.lexeme) {
            Node::Const(c)
        } else {
            return Err(ParseError::UnknownIdentifier {
                name: tok.lexeme.to_string(),
                position: tok.position,
            });
        };
        if called {
            return Err(ParseError::Arity {
                name: tok.lexeme.to_string(),
                position: tok.position,
                message: "not a function".into(),
            });
        }
        Ok(node)
    }

    fn expect_rparen(&mut self, open: usize) -> Result<(), ParseError> {
        let position = self.here();
        match self.next() {
            Some(t) if t.kind == TokenKind::RParen => Ok(()),
            Some(t) => Err(ParseError::Syntax {
                position,
                message: format!("expected `)` to close `(` at {open}, found `{}`", t.lexeme),
            }),
            None => Err(ParseError::Syntax {
                position,
                message: format!("expected `)` to close `(` at {open}"),
            }),
        }
    }
}

pub fn named_constant(name: &str) -> Option<f64> {
    match name {
        "pi" => Some(std::f64::consts::PI),
        "e" => Some(std::f64::consts::E),
        _ => None,
    }
}
