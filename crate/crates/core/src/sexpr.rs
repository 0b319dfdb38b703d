//! S-expression text form of terms: `(var i)` and `(name arg ...)`.

use std::fmt;

use thiserror::Error;

use crate::signature::{Signature, VAR_KEYWORD};
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct SyntaxError {
    pub column: usize,
    pub message: String,
}

/// Display adapter resolving operator names through a signature.
pub struct Sexpr<'a> {
    sig: &'a Signature,
    term: &'a Term,
}

impl Term {
    pub fn display<'a>(&'a self, sig: &'a Signature) -> Sexpr<'a> {
        Sexpr { sig, term: self }
    }
}

impl fmt::Display for Sexpr<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(i) => write!(f, "({VAR_KEYWORD} {i})"),
            Term::Op(op, args) => {
                match self.sig.operator(*op) {
                    Some(o) => write!(f, "({}", o.name)?,
                    None => write!(f, "(#{}", op.0)?,
                }
                for a in args {
                    write!(f, " {}", a.display(self.sig))?;
                }
                f.write_str(")")
            }
        }
    }
}

pub fn print_term(sig: &Signature, t: &Term) -> String {
    t.display(sig).to_string()
}

#[derive(Debug, PartialEq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

fn tokenize(text: &str) -> Vec<(usize, Token)> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            '(' => {
                out.push((i + 1, Token::Open));
                chars.next();
            }
            ')' => {
                out.push((i + 1, Token::Close));
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut atom = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c == '(' || c == ')' || c.is_whitespace() {
                        break;
                    }
                    atom.push(c);
                    chars.next();
                }
                out.push((i + 1, Token::Atom(atom)));
            }
        }
    }
    out
}

/// Parse a term. Scope is not checked here; the context is supplied
/// separately to [`crate::term::check_wellformed`].
pub fn parse_term(sig: &Signature, text: &str) -> Result<Term, SyntaxError> {
    let tokens = tokenize(text);
    let mut pos = 0;
    let t = parse_at(sig, &tokens, &mut pos, text.len() + 1)?;
    if let Some((column, _)) = tokens.get(pos) {
        return Err(SyntaxError {
            column: *column,
            message: "trailing input after term".into(),
        });
    }
    Ok(t)
}

fn parse_at(sig: &Signature, tokens: &[(usize, Token)], pos: &mut usize, end: usize) -> Result<Term, SyntaxError> {
    let err = |column: usize, message: String| SyntaxError { column, message };
    let (column, tok) = tokens.get(*pos).ok_or_else(|| err(end, "expected '(', found end of input".into()))?;
    if *tok != Token::Open {
        return Err(err(*column, "expected '('".into()));
    }
    *pos += 1;
    let (head_col, head) = match tokens.get(*pos) {
        Some((c, Token::Atom(a))) => (*c, a.clone()),
        Some((c, _)) => return Err(err(*c, "expected an operator name or 'var'".into())),
        None => return Err(err(end, "unexpected end of input".into())),
    };
    *pos += 1;
    let term = if head == VAR_KEYWORD {
        let index = match tokens.get(*pos) {
            Some((c, Token::Atom(a))) => a
                .parse::<usize>()
                .ok()
                .filter(|&i| i > 0)
                .ok_or_else(|| err(*c, format!("'{a}' is not a positive index")))?,
            Some((c, _)) => return Err(err(*c, "expected a variable index".into())),
            None => return Err(err(end, "unexpected end of input".into())),
        };
        *pos += 1;
        Term::Var(index)
    } else {
        let op = sig.lookup(&head).ok_or_else(|| err(head_col, format!("unknown operator '{head}'")))?;
        let mut args = Vec::new();
        while matches!(tokens.get(*pos), Some((_, Token::Open))) {
            args.push(parse_at(sig, tokens, pos, end)?);
        }
        Term::Op(op, args)
    };
    match tokens.get(*pos) {
        Some((_, Token::Close)) => {
            *pos += 1;
            Ok(term)
        }
        Some((c, _)) => Err(err(*c, "expected ')'".into())),
        None => Err(err(end, "expected ')', found end of input".into())),
    }
}
