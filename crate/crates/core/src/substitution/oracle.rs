//! Named terms and textbook capture-avoiding substitution.
//!
//! This is a second, independent route to single-variable substitution:
//! terms are converted to a named representation, substituted by the
//! classical rename-on-clash algorithm, and converted back.

use std::collections::{BTreeMap, BTreeSet};

use crate::contexts::Mode;
use crate::signature::{OpId, Signature};
use crate::substitution::check_split_problem;
use crate::term::{Term, TermError};

pub type Name = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Named {
    Var(Name),
    Op(OpId, Vec<Abs>),
}

/// An argument: the names it binds and its body.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Abs {
    pub binders: Vec<Name>,
    pub body: Named,
}

/// Supply of names not used so far.
#[derive(Clone, Debug)]
pub struct Fresh {
    next: Name,
}

impl Fresh {
    pub fn starting_at(next: Name) -> Self {
        Fresh { next }
    }

    /// Start above every name (free or bound) occurring in `terms`.
    pub fn above(terms: &[&Named]) -> Self {
        let top = terms.iter().map(|t| max_name(t)).max().unwrap_or(0);
        Fresh { next: top + 1 }
    }

    pub fn name(&mut self) -> Name {
        let n = self.next;
        self.next += 1;
        n
    }
}

fn max_name(t: &Named) -> Name {
    match t {
        Named::Var(x) => *x,
        Named::Op(_, args) => args
            .iter()
            .map(|a| a.binders.iter().copied().max().unwrap_or(0).max(max_name(&a.body)))
            .max()
            .unwrap_or(0),
    }
}

/// Convert a nameless term. `env[k]` names level `k + 1`; binders take
/// fresh names.
pub fn to_named(sig: &Signature, t: &Term, env: &mut Vec<Name>, fresh: &mut Fresh) -> Result<Named, TermError> {
    match t {
        Term::Var(i) => env.get(i.wrapping_sub(1)).map(|&x| Named::Var(x)).ok_or(TermError::Scope {
            index: *i,
            allowed: env.len(),
        }),
        Term::Op(op, args) => {
            let arity = &sig.operator(*op).ok_or(TermError::UnknownOperator(op.0))?.arity;
            let mut out = Vec::with_capacity(args.len());
            for (a, &w) in args.iter().zip(arity) {
                let binders: Vec<Name> = (0..w).map(|_| fresh.name()).collect();
                let base = env.len();
                env.extend(&binders);
                let body = to_named(sig, a, env, fresh)?;
                env.truncate(base);
                out.push(Abs { binders, body });
            }
            Ok(Named::Op(*op, out))
        }
    }
}

/// Convert back. A name resolves to its innermost binding in `env`.
pub fn from_named(sig: &Signature, t: &Named, env: &mut Vec<Name>) -> Result<Term, TermError> {
    match t {
        Named::Var(x) => env.iter().rposition(|y| y == x).map(|k| Term::Var(k + 1)).ok_or(TermError::Scope {
            index: *x as usize,
            allowed: env.len(),
        }),
        Named::Op(op, args) => {
            let arity = &sig.operator(*op).ok_or(TermError::UnknownOperator(op.0))?.arity;
            let mut out = Vec::with_capacity(args.len());
            for (a, &w) in args.iter().zip(arity) {
                if a.binders.len() != w {
                    return Err(TermError::Arity {
                        name: sig.name(*op).to_string(),
                        expected: w,
                        found: a.binders.len(),
                    });
                }
                let base = env.len();
                env.extend(&a.binders);
                out.push(from_named(sig, &a.body, env)?);
                env.truncate(base);
            }
            Ok(Term::Op(*op, out))
        }
    }
}

pub fn free_names(t: &Named) -> BTreeSet<Name> {
    match t {
        Named::Var(x) => BTreeSet::from([*x]),
        Named::Op(_, args) => args
            .iter()
            .flat_map(|a| {
                let mut fv = free_names(&a.body);
                for b in &a.binders {
                    fv.remove(b);
                }
                fv
            })
            .collect(),
    }
}

/// Simultaneous capture-avoiding substitution. A binder that would capture
/// a free name of the substituted terms is renamed to a fresh name first.
pub fn substitute(t: &Named, map: &BTreeMap<Name, Named>, fresh: &mut Fresh) -> Named {
    match t {
        Named::Var(x) => map.get(x).cloned().unwrap_or(Named::Var(*x)),
        Named::Op(op, args) => {
            let args = args
                .iter()
                .map(|a| {
                    let mut inner = map.clone();
                    for b in &a.binders {
                        inner.remove(b);
                    }
                    let live: BTreeSet<Name> = free_names(&a.body);
                    let exposed: BTreeSet<Name> = inner.iter().filter(|(k, _)| live.contains(k)).flat_map(|(_, v)| free_names(v)).collect();
                    let binders = a
                        .binders
                        .iter()
                        .map(|&b| {
                            if exposed.contains(&b) {
                                let y = fresh.name();
                                inner.insert(b, Named::Var(y));
                                y
                            } else {
                                b
                            }
                        })
                        .collect();
                    Abs {
                        binders,
                        body: substitute(&a.body, &inner, fresh),
                    }
                })
                .collect();
            Named::Op(*op, args)
        }
    }
}

/// Alpha-equivalence of two named terms over free names `1..=ctx`.
pub fn alpha_eq(sig: &Signature, a: &Named, b: &Named, ctx: usize) -> bool {
    let env = |()| (1..=ctx as Name).collect::<Vec<_>>();
    match (from_named(sig, a, &mut env(())), from_named(sig, b, &mut env(()))) {
        (Ok(x), Ok(y)) => x == y,
        _ => false,
    }
}

/// Same contract as the recursive split substitution, computed through
/// named terms. Body positions `1..=p` are named `1..=p`, the distinguished
/// position `p + 1`, and payload positions `p + 2..=p + q + 1`.
pub fn oracle_substitute(sig: &Signature, mode: Mode, body: &Term, p: usize, payload: &Term, q: usize) -> Result<Term, TermError> {
    check_split_problem(sig, mode, body, p, payload, q)?;
    let z = (p + 1) as Name;
    let ys: Vec<Name> = (p + 2..=p + q + 1).map(|k| k as Name).collect();
    let mut fresh = Fresh::starting_at((p + q + 2) as Name);
    let named_body = to_named(sig, body, &mut (1..=z).collect(), &mut fresh)?;
    let named_payload = to_named(sig, payload, &mut ys.clone(), &mut fresh)?;
    let result = substitute(&named_body, &BTreeMap::from([(z, named_payload)]), &mut fresh);
    let mut env: Vec<Name> = (1..z).collect();
    env.extend(ys);
    from_named(sig, &result, &mut env)
}
