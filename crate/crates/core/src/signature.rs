//! Binding signatures: named operators with binding arities.
//!
//! File format, one operator per line:
//!
//! ```text
//! # comment
//! lam: (1)
//! app: (0,0)
//! unit: ()
//! ```
//!
//! Component `i` of an arity is the number of variables the operator binds in
//! its `i`-th argument.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index of an operator in its signature (declaration order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpId(pub u32);

impl OpId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator {
    pub name: String,
    pub arity: Vec<usize>,
}

impl Operator {
    pub fn args(&self) -> usize {
        self.arity.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Signature {
    operators: Vec<Operator>,
    by_name: HashMap<String, OpId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("{line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: duplicate operator '{name}'")]
    Duplicate { line: usize, column: usize, name: String },
    #[error("{line}:{column}: negative arity component '{token}'")]
    NegativeArity { line: usize, column: usize, token: String },
    #[error("{line}:{column}: '{name}' is reserved for variables")]
    Reserved { line: usize, column: usize, name: String },
    #[error("invalid operator name '{0}'")]
    InvalidName(String),
}

/// Name used by the term syntax for variables; no operator may take it.
pub const VAR_KEYWORD: &str = "var";

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Build from `(name, arity)` pairs.
    pub fn from_ops<S: Into<String>>(ops: impl IntoIterator<Item = (S, Vec<usize>)>) -> Result<Self, SignatureError> {
        let mut sig = Signature::empty();
        for (name, arity) in ops {
            let name = name.into();
            if !is_identifier(&name) || name == VAR_KEYWORD {
                return Err(SignatureError::InvalidName(name));
            }
            if sig.by_name.contains_key(&name) {
                return Err(SignatureError::Duplicate { line: 0, column: 0, name });
            }
            sig.push(name, arity);
        }
        Ok(sig)
    }

    /// The running example: `lam: (1)`, `app: (0,0)`.
    pub fn lambda() -> Self {
        Self::from_ops([("lam", vec![1]), ("app", vec![0, 0])]).unwrap()
    }

    fn push(&mut self, name: String, arity: Vec<usize>) {
        let id = OpId(self.operators.len() as u32);
        self.by_name.insert(name.clone(), id);
        self.operators.push(Operator { name, arity });
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operator(&self, id: OpId) -> Option<&Operator> {
        self.operators.get(id.index())
    }

    pub fn arity(&self, id: OpId) -> &[usize] {
        &self.operators[id.index()].arity
    }

    pub fn name(&self, id: OpId) -> &str {
        &self.operators[id.index()].name
    }

    pub fn lookup(&self, name: &str) -> Option<OpId> {
        self.by_name.get(name).copied()
    }

    pub fn ops(&self) -> impl Iterator<Item = (OpId, &Operator)> + '_ {
        self.operators.iter().enumerate().map(|(i, op)| (OpId(i as u32), op))
    }

    /// Largest argument count over all operators (0 for the empty signature).
    pub fn max_args(&self) -> usize {
        self.operators.iter().map(Operator::args).max().unwrap_or(0)
    }

    pub fn parse(text: &str) -> Result<Self, SignatureError> {
        let mut sig = Signature::empty();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let (name, arity, column) = parse_line(line, lineno + 1)?;
            if name == VAR_KEYWORD {
                return Err(SignatureError::Reserved {
                    line: lineno + 1,
                    column,
                    name,
                });
            }
            if sig.by_name.contains_key(&name) {
                return Err(SignatureError::Duplicate {
                    line: lineno + 1,
                    column,
                    name,
                });
            }
            sig.push(name, arity);
        }
        Ok(sig)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, op) in self.operators.iter().enumerate() {
            if k > 0 {
                f.write_str("\n")?;
            }
            let parts: Vec<String> = op.arity.iter().map(usize::to_string).collect();
            write!(f, "{}: ({})", op.name, parts.join(","))?;
        }
        Ok(())
    }
}

/// Canonical text form; `Signature::parse` inverts it.
pub fn print_signature(sig: &Signature) -> String {
    sig.to_string()
}

pub fn parse_signature(text: &str) -> Result<Signature, SignatureError> {
    Signature::parse(text)
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Cursor {
            chars: src.char_indices().collect(),
            pos: 0,
            line,
            _src: src,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, message: impl Into<String>) -> SignatureError {
        SignatureError::Syntax {
            line: self.line,
            column: self.column(),
            message: message.into(),
        }
    }

    fn expect(&mut self, want: char) -> Result<(), SignatureError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected '{want}', found '{c}'"))),
            None => Err(self.error(format!("expected '{want}', found end of line"))),
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            s.push(c);
            self.pos += 1;
        }
        s
    }
}

fn parse_line(line: &str, lineno: usize) -> Result<(String, Vec<usize>, usize), SignatureError> {
    let mut cur = Cursor::new(line, lineno);
    cur.skip_ws();
    let name_col = cur.column();
    let name = cur.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
    if !is_identifier(&name) {
        return Err(SignatureError::Syntax {
            line: lineno,
            column: name_col,
            message: "expected an operator name".into(),
        });
    }
    cur.expect(':')?;
    cur.expect('(')?;
    let mut arity = Vec::new();
    cur.skip_ws();
    if cur.peek() == Some(')') {
        cur.pos += 1;
    } else {
        loop {
            cur.skip_ws();
            let col = cur.column();
            if cur.peek() == Some('-') {
                cur.pos += 1;
                let digits = cur.take_while(|c| c.is_ascii_digit());
                return Err(SignatureError::NegativeArity {
                    line: lineno,
                    column: col,
                    token: format!("-{digits}"),
                });
            }
            let digits = cur.take_while(|c| c.is_ascii_digit());
            if digits.is_empty() {
                return Err(cur.error("expected a natural number"));
            }
            let n = digits
                .parse::<usize>()
                .map_err(|_| cur.error(format!("arity component '{digits}' is too large")))?;
            arity.push(n);
            cur.skip_ws();
            match cur.peek() {
                Some(',') => cur.pos += 1,
                Some(')') => {
                    cur.pos += 1;
                    break;
                }
                Some(c) => return Err(cur.error(format!("expected ',' or ')', found '{c}'"))),
                None => return Err(cur.error("unterminated arity")),
            }
        }
    }
    cur.skip_ws();
    if let Some(c) = cur.peek() {
        return Err(cur.error(format!("unexpected '{c}' after arity")));
    }
    Ok((name, arity, name_col))
}
