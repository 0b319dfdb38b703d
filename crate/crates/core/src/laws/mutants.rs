//! Deliberately wrong substitutions. Both satisfy the unit laws (a) and (b)
//! but not the associativity and exchange laws; they exercise the checkers.

use crate::contexts::Mode;
use crate::signature::Signature;
use crate::substitution::{replace_split_raw, Substitution};
use crate::term::{rename_raw, Term};

/// Exchanges the two arguments of the result's root when body and payload
/// both contain operator nodes and the root has two arguments of equal
/// binding width.
#[derive(Clone, Copy, Debug, Default)]
pub struct RootSwap;

impl Substitution for RootSwap {
    fn replace_split(&self, sig: &Signature, mode: Mode, body: &Term, p: usize, payload: &Term, q: usize) -> Term {
        let r = replace_split_raw(sig, mode, body, p, payload, q);
        if !(body.has_ops() && payload.has_ops()) {
            return r;
        }
        match r {
            Term::Op(op, mut args) if args.len() == 2 && sig.arity(op)[0] == sig.arity(op)[1] => {
                args.swap(0, 1);
                Term::Op(op, args)
            }
            other => other,
        }
    }
}

/// Exchanges positions `1` and `p + 1` of the result when the body has free
/// positions besides the distinguished one and the payload has operator
/// nodes.
#[derive(Clone, Copy, Debug, Default)]
pub struct BlockTwist;

impl Substitution for BlockTwist {
    fn replace_split(&self, sig: &Signature, mode: Mode, body: &Term, p: usize, payload: &Term, q: usize) -> Term {
        let r = replace_split_raw(sig, mode, body, p, payload, q);
        if p == 0 || q == 0 || !payload.has_ops() {
            return r;
        }
        rename_raw(&r, p + q, p + q, &|i| {
            if i == 1 {
                p + 1
            } else if i == p + 1 {
                1
            } else {
                i
            }
        })
    }
}
