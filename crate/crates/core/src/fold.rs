//! Structural recursion out of the term algebra.

use std::collections::{BTreeSet, HashMap};

use crate::signature::{OpId, Signature};
use crate::term::{Term, TermError};

/// A `(V + Σ)`-algebra: a carrier indexed by context size with a variable
/// case and one case per operator. Argument `j` of an operator with arity
/// component `n_j` arrives as a value at context `ctx + n_j`.
pub trait Algebra {
    type Carrier;

    fn var(&self, ctx: usize, index: usize) -> Self::Carrier;

    fn op(&self, sig: &Signature, ctx: usize, op: OpId, args: Vec<Self::Carrier>) -> Result<Self::Carrier, TermError>;
}

/// The unique map from terms at `ctx` into `alg` commuting with the variable
/// and operator cases.
pub fn fold<A: Algebra + ?Sized>(sig: &Signature, alg: &A, t: &Term, ctx: usize) -> Result<A::Carrier, TermError> {
    match t {
        Term::Var(i) => Ok(alg.var(ctx, *i)),
        Term::Op(op, args) => {
            let arity = sig.operator(*op).ok_or(TermError::UnknownOperator(op.0))?.arity.clone();
            let values = args
                .iter()
                .zip(&arity)
                .map(|(a, &w)| fold(sig, alg, a, ctx + w))
                .collect::<Result<Vec<_>, _>>()?;
            alg.op(sig, ctx, *op, values)
        }
    }
}

type VarCase<C> = Box<dyn Fn(usize, usize) -> C + Send + Sync>;
type OpCase<C> = Box<dyn Fn(usize, Vec<C>) -> C + Send + Sync>;

/// An algebra given by closures, with operator cases looked up by name.
/// Folding a term that uses an operator without a case fails with
/// [`TermError::MissingOpCase`].
pub struct FnAlgebra<C> {
    var_case: VarCase<C>,
    op_cases: HashMap<String, OpCase<C>>,
}

impl<C> FnAlgebra<C> {
    pub fn new(var_case: impl Fn(usize, usize) -> C + Send + Sync + 'static) -> Self {
        FnAlgebra {
            var_case: Box::new(var_case),
            op_cases: HashMap::new(),
        }
    }

    pub fn with_op(mut self, name: &str, case: impl Fn(usize, Vec<C>) -> C + Send + Sync + 'static) -> Self {
        self.op_cases.insert(name.to_string(), Box::new(case));
        self
    }
}

impl<C> Algebra for FnAlgebra<C> {
    type Carrier = C;

    fn var(&self, ctx: usize, index: usize) -> C {
        (self.var_case)(ctx, index)
    }

    fn op(&self, sig: &Signature, ctx: usize, op: OpId, args: Vec<C>) -> Result<C, TermError> {
        let name = sig.name(op);
        let case = self.op_cases.get(name).ok_or_else(|| TermError::MissingOpCase(name.to_string()))?;
        Ok(case(ctx, args))
    }
}

/// Rebuilds the term: folding into it is the identity.
pub struct TermAlgebra;

impl Algebra for TermAlgebra {
    type Carrier = Term;

    fn var(&self, _ctx: usize, index: usize) -> Term {
        Term::Var(index)
    }

    fn op(&self, _sig: &Signature, _ctx: usize, op: OpId, args: Vec<Term>) -> Result<Term, TermError> {
        Ok(Term::Op(op, args))
    }
}

/// Operator-node count.
pub struct SizeAlgebra;

impl Algebra for SizeAlgebra {
    type Carrier = usize;

    fn var(&self, _ctx: usize, _index: usize) -> usize {
        0
    }

    fn op(&self, _sig: &Signature, _ctx: usize, _op: OpId, args: Vec<usize>) -> Result<usize, TermError> {
        Ok(1 + args.iter().sum::<usize>())
    }
}

/// Set of free positions of the context.
pub struct FreeVarAlgebra;

impl Algebra for FreeVarAlgebra {
    type Carrier = BTreeSet<usize>;

    fn var(&self, _ctx: usize, index: usize) -> BTreeSet<usize> {
        BTreeSet::from([index])
    }

    fn op(&self, _sig: &Signature, ctx: usize, _op: OpId, args: Vec<BTreeSet<usize>>) -> Result<BTreeSet<usize>, TermError> {
        Ok(args.into_iter().flatten().filter(|&i| i <= ctx).collect())
    }
}
