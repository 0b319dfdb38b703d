//! Substitution algebras used as fold targets in the initiality checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use crate::contexts::Mode;
use crate::fold::{Algebra, FreeVarAlgebra};
use crate::signature::{OpId, Signature};
use crate::substitution::oracle::{alpha_eq, free_names, from_named, substitute, Abs, Fresh, Name, Named};
use crate::substitution::replace_split_raw;
use crate::term::{Term, TermError};

/// An algebra carrying its own single-variable substitution: a body at
/// `p + 1` and a payload at `q` give a value at `p + q`.
pub trait SubstAlgebra: Algebra<Carrier: Clone + Debug + Send + Sync> + Sync {
    fn name(&self) -> &'static str;

    fn substitute(&self, sig: &Signature, mode: Mode, body: &Self::Carrier, p: usize, payload: &Self::Carrier, q: usize) -> Self::Carrier;

    /// Equality of carrier values at context `ctx`.
    fn same(&self, sig: &Signature, a: &Self::Carrier, b: &Self::Carrier, ctx: usize) -> bool;

    fn render(&self, sig: &Signature, c: &Self::Carrier) -> String {
        let _ = sig;
        format!("{c:?}")
    }
}

/// Terms decorated with their operator-node count.
pub struct SizeDecorated;

impl Algebra for SizeDecorated {
    type Carrier = (Term, usize);

    fn var(&self, _ctx: usize, index: usize) -> (Term, usize) {
        (Term::Var(index), 0)
    }

    fn op(&self, _sig: &Signature, _ctx: usize, op: OpId, args: Vec<(Term, usize)>) -> Result<(Term, usize), TermError> {
        let size = 1 + args.iter().map(|a| a.1).sum::<usize>();
        Ok((Term::Op(op, args.into_iter().map(|a| a.0).collect()), size))
    }
}

impl SubstAlgebra for SizeDecorated {
    fn name(&self) -> &'static str {
        "size-decorated"
    }

    fn substitute(&self, sig: &Signature, mode: Mode, body: &(Term, usize), p: usize, payload: &(Term, usize), q: usize) -> (Term, usize) {
        let copies = body.0.occurrences(p + 1);
        (replace_split_raw(sig, mode, &body.0, p, &payload.0, q), body.1 + copies * payload.1)
    }

    fn same(&self, _sig: &Signature, a: &(Term, usize), b: &(Term, usize), _ctx: usize) -> bool {
        a == b
    }

    fn render(&self, sig: &Signature, c: &(Term, usize)) -> String {
        format!("{} [{}]", c.0.display(sig), c.1)
    }
}

/// The terminal algebra.
pub struct OnePoint;

impl Algebra for OnePoint {
    type Carrier = ();

    fn var(&self, _ctx: usize, _index: usize) {}

    fn op(&self, _sig: &Signature, _ctx: usize, _op: OpId, _args: Vec<()>) -> Result<(), TermError> {
        Ok(())
    }
}

impl SubstAlgebra for OnePoint {
    fn name(&self) -> &'static str {
        "one-point"
    }

    fn substitute(&self, _sig: &Signature, _mode: Mode, _body: &(), _p: usize, _payload: &(), _q: usize) {}

    fn same(&self, _sig: &Signature, _a: &(), _b: &(), _ctx: usize) -> bool {
        true
    }
}

/// Named terms. Position `i` of a context is named `i`, and the variables
/// bound by an argument at context `ctx` are named `ctx + 1, ...`, so
/// binders routinely clash with free names of substituted terms and the
/// rename-on-clash step is exercised.
pub struct NamedTerms;

impl Algebra for NamedTerms {
    type Carrier = Named;

    fn var(&self, _ctx: usize, index: usize) -> Named {
        Named::Var(index as Name)
    }

    fn op(&self, sig: &Signature, ctx: usize, op: OpId, args: Vec<Named>) -> Result<Named, TermError> {
        let arity = &sig.operator(op).ok_or(TermError::UnknownOperator(op.0))?.arity;
        Ok(Named::Op(
            op,
            args.into_iter()
                .zip(arity)
                .map(|(body, &w)| Abs {
                    binders: (ctx + 1..=ctx + w).map(|x| x as Name).collect(),
                    body,
                })
                .collect(),
        ))
    }
}

impl SubstAlgebra for NamedTerms {
    fn name(&self) -> &'static str {
        "named"
    }

    fn substitute(&self, _sig: &Signature, _mode: Mode, body: &Named, p: usize, payload: &Named, q: usize) -> Named {
        let mut fresh = Fresh::above(&[body, payload, &Named::Var((p + q) as Name)]);
        let shift: BTreeMap<Name, Named> = (1..=q).map(|j| (j as Name, Named::Var((p + j) as Name))).collect();
        let moved = substitute(payload, &shift, &mut fresh);
        substitute(body, &BTreeMap::from([((p + 1) as Name, moved)]), &mut fresh)
    }

    fn same(&self, sig: &Signature, a: &Named, b: &Named, ctx: usize) -> bool {
        alpha_eq(sig, a, b, ctx)
    }

    fn render(&self, sig: &Signature, c: &Named) -> String {
        let top = free_names(c).last().copied().unwrap_or(0);
        match from_named(sig, c, &mut (1..=top).collect()) {
            Ok(t) => t.display(sig).to_string(),
            Err(_) => format!("{c:?}"),
        }
    }
}

/// Sets of free positions.
pub struct FreeVars;

impl Algebra for FreeVars {
    type Carrier = BTreeSet<usize>;

    fn var(&self, ctx: usize, index: usize) -> BTreeSet<usize> {
        FreeVarAlgebra.var(ctx, index)
    }

    fn op(&self, sig: &Signature, ctx: usize, op: OpId, args: Vec<BTreeSet<usize>>) -> Result<BTreeSet<usize>, TermError> {
        FreeVarAlgebra.op(sig, ctx, op, args)
    }
}

impl SubstAlgebra for FreeVars {
    fn name(&self) -> &'static str {
        "free-vars"
    }

    fn substitute(&self, _sig: &Signature, _mode: Mode, body: &BTreeSet<usize>, p: usize, payload: &BTreeSet<usize>, _q: usize) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = body.iter().copied().filter(|&i| i != p + 1).collect();
        if body.contains(&(p + 1)) {
            out.extend(payload.iter().map(|j| p + j));
        }
        out
    }

    fn same(&self, _sig: &Signature, a: &BTreeSet<usize>, b: &BTreeSet<usize>, _ctx: usize) -> bool {
        a == b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fold::fold;

    #[test]
    fn named_substitution_renames_clashing_binders() {
        let sig = Signature::lambda();
        let lam = |b| Term::Op(OpId(0), vec![b]);
        let app = |a, b| Term::Op(OpId(1), vec![a, b]);
        // body lam(app(3, 2)) at 2 binds the name 3, which is where the
        // payload's position 2 lands after the block shift by p = 1.
        let body = fold(&sig, &NamedTerms, &lam(app(Term::Var(3), Term::Var(2))), 2).unwrap();
        let payload = fold(&sig, &NamedTerms, &Term::Var(2), 2).unwrap();
        let r = NamedTerms.substitute(&sig, Mode::Cartesian, &body, 1, &payload, 2);
        let expected = fold(&sig, &NamedTerms, &lam(app(Term::Var(4), Term::Var(3))), 3).unwrap();
        assert!(NamedTerms.same(&sig, &r, &expected, 3));
    }

    #[test]
    fn size_decoration() {
        let sig = Signature::lambda();
        let app = |a, b| Term::Op(OpId(1), vec![a, b]);
        let body = fold(&sig, &SizeDecorated, &app(Term::Var(1), Term::Var(1)), 1).unwrap();
        let payload = fold(&sig, &SizeDecorated, &app(Term::Var(1), Term::Var(1)), 1).unwrap();
        let r = SizeDecorated.substitute(&sig, Mode::Cartesian, &body, 0, &payload, 1);
        assert_eq!(r.1, 3);
    }
}
