//! Single-variable substitution by structural recursion.
//!
//! The distinguished variable of a body at context `p + 1` is always its
//! last position. The result of substituting a payload at `q` lives at
//! `p + q` with the body's free positions first and the payload's block on
//! top. Under a binder of width `b` the distinguished position is moved past
//! the bound block with `b` adjacent exchanges, the recursion runs one level
//! down, and a block exchange puts the payload's positions back below the
//! binders. Arguments that do not receive the variable are strengthened and
//! re-indexed instead.

pub mod oracle;

use serde::{Deserialize, Serialize};

use crate::contexts::{generator, GeneratorKind, Mode, Renaming, Structural};
use crate::signature::{OpId, Signature};
use crate::term::{check_component, check_wellformed, rename_raw, rename_unchecked, strengthen, OccurrenceProfile, Requirement, Term, TermError};

/// Which components of a pairing over `n + 1` use position `n + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProductRuleCase {
    LeftHasIt,
    RightHasIt,
    Neither,
    Both,
}

impl ProductRuleCase {
    pub fn allowed(mode: Mode) -> &'static [ProductRuleCase] {
        use ProductRuleCase::*;
        match mode {
            Mode::Linear => &[LeftHasIt, RightHasIt],
            Mode::Affine => &[LeftHasIt, RightHasIt, Neither],
            Mode::Relevant => &[LeftHasIt, RightHasIt, Both],
            Mode::Cartesian => &[Both],
        }
    }

    pub fn left_uses(self) -> bool {
        matches!(self, ProductRuleCase::LeftHasIt | ProductRuleCase::Both)
    }

    pub fn right_uses(self) -> bool {
        matches!(self, ProductRuleCase::RightHasIt | ProductRuleCase::Both)
    }
}

/// Check that the components jointly form a mode-valid pairing. Component
/// `j` lives at `comps[j].1`; position `i` is shared by every component whose
/// context reaches it. Returns the per-component profiles.
pub fn check_pairing(sig: &Signature, mode: Mode, comps: &[(&Term, usize)]) -> Result<Vec<OccurrenceProfile>, TermError> {
    let profiles = comps
        .iter()
        .map(|&(t, n)| check_component(sig, mode, t, n))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(required) = Requirement::of(mode) {
        let top = comps.iter().map(|c| c.1).max().unwrap_or(0);
        for position in 1..=top {
            let count: usize = profiles.iter().filter(|p| p.ctx() >= position).map(|p| p.count(position)).sum();
            if !mode.admits_count(count) {
                return Err(TermError::ModeViolation { position, count, required });
            }
        }
    }
    Ok(profiles)
}

/// Classify a pairing over `ambient = n + 1` by which side uses the top
/// position.
pub fn product_rule_case(sig: &Signature, mode: Mode, left: &Term, right: &Term, ambient: usize) -> Result<ProductRuleCase, TermError> {
    if ambient == 0 {
        return Err(TermError::Position { position: 1, ambient });
    }
    check_pairing(sig, mode, &[(left, ambient), (right, ambient)])?;
    let tag = if mode == Mode::Cartesian {
        ProductRuleCase::Both
    } else {
        match (left.mentions(ambient), right.mentions(ambient)) {
            (true, false) => ProductRuleCase::LeftHasIt,
            (false, true) => ProductRuleCase::RightHasIt,
            (false, false) => ProductRuleCase::Neither,
            (true, true) => ProductRuleCase::Both,
        }
    };
    if !ProductRuleCase::allowed(mode).contains(&tag) {
        return Err(TermError::Inconsistent(format!("tag {tag:?} is not allowed in {mode} mode")));
    }
    Ok(tag)
}

/// Summand element of a tagged pairing over `n + 1`: the side that uses the
/// top position keeps it, the other side is strengthened to `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub tag: ProductRuleCase,
    pub left: (Term, usize),
    pub right: (Term, usize),
}

/// Decompose a pairing over `ambient` into its summand.
pub fn decompose(sig: &Signature, mode: Mode, left: &Term, right: &Term, ambient: usize) -> Result<Summand, TermError> {
    let tag = product_rule_case(sig, mode, left, right, ambient)?;
    let side = |t: &Term, uses: bool| -> Result<(Term, usize), TermError> {
        if uses {
            Ok((t.clone(), ambient))
        } else {
            Ok((strengthen(t, ambient, ambient)?, ambient - 1))
        }
    };
    Ok(Summand {
        tag,
        left: side(left, tag.left_uses())?,
        right: side(right, tag.right_uses())?,
    })
}

/// Inverse of [`decompose`].
pub fn reconstruct(summand: &Summand, ambient: usize) -> (Term, Term) {
    let lift = |(t, n): &(Term, usize)| rename_raw(t, *n, ambient, &|i| i);
    (lift(&summand.left), lift(&summand.right))
}

/// A substitution operation on terms: body at `p + 1`, payload at `q`,
/// result at `p + q`. Implementations do no validation.
pub trait Substitution: Sync {
    fn replace_split(&self, sig: &Signature, mode: Mode, body: &Term, p: usize, payload: &Term, q: usize) -> Term;
}

/// The structurally recursive substitution.
#[derive(Clone, Copy, Debug, Default)]
pub struct Recursive;

impl Substitution for Recursive {
    fn replace_split(&self, sig: &Signature, mode: Mode, body: &Term, p: usize, payload: &Term, q: usize) -> Term {
        replace_split_raw(sig, mode, body, p, payload, q)
    }
}

fn shift_block(t: &Term, q: usize, by: usize) -> Term {
    rename_raw(t, q, q + by, &|i| i + by)
}

/// Renaming on `p + b + q` carrying `[body p][binders b][payload q]` to
/// `[body p][payload q][binders b]`.
fn block_exchange(p: usize, b: usize, q: usize) -> Renaming {
    let map = (1..=p + b + q)
        .map(|i| {
            if i <= p {
                i
            } else if i <= p + b {
                i + q
            } else {
                i - b
            }
        })
        .collect();
    Renaming::new(Mode::Linear, p + b + q, map).expect("block exchange is a bijection")
}

/// Does argument substitution reach an argument using `p + 1`?
fn routed(mode: Mode, arg: &Term, p: usize) -> bool {
    mode == Mode::Cartesian || arg.mentions(p + 1)
}

/// The recursion without precondition checks.
pub fn replace_split_raw(sig: &Signature, mode: Mode, body: &Term, p: usize, payload: &Term, q: usize) -> Term {
    match body {
        Term::Var(i) if *i == p + 1 => shift_block(payload, q, p),
        Term::Var(i) => Term::Var(*i),
        Term::Op(op, args) => {
            let arity = sig.arity(*op);
            let args = args
                .iter()
                .zip(arity)
                .map(|(arg, &b)| {
                    let ambient = p + 1 + b;
                    if routed(mode, arg, p) {
                        let mut moved = arg.clone();
                        for k in 0..b {
                            let s = generator(GeneratorKind::Swap, p + 1 + k, ambient, Mode::Linear).expect("swap inside the ambient context");
                            moved = rename_unchecked(&moved, &s);
                        }
                        let inner = replace_split_raw(sig, mode, &moved, p + b, payload, q);
                        rename_unchecked(&inner, &block_exchange(p, b, q))
                    } else {
                        let stripped = strengthen(arg, ambient, p + 1).expect("unrouted argument does not use the position");
                        rename_raw(&stripped, p + b, p + q + b, &|i| if i <= p { i } else { i + q })
                    }
                })
                .collect();
            Term::Op(*op, args)
        }
    }
}

/// Preconditions shared by every split-context substitution.
pub fn check_split_problem(sig: &Signature, mode: Mode, body: &Term, p: usize, payload: &Term, q: usize) -> Result<(), TermError> {
    check_wellformed(sig, mode, body, p + 1)?;
    check_wellformed(sig, mode, payload, q)?;
    Ok(())
}

/// Substitute `payload` (at `q`) for the last position of `body` (at
/// `p + 1`), giving a term at `p + q`.
pub fn replace_split(sig: &Signature, mode: Mode, body: &Term, p: usize, payload: &Term, q: usize) -> Result<Term, TermError> {
    check_split_problem(sig, mode, body, p, payload, q)?;
    Ok(replace_split_raw(sig, mode, body, p, payload, q))
}

/// Identify the two blocks of a term at `2n`.
pub fn codiagonal(t: &Term, n: usize) -> Term {
    rename_raw(t, 2 * n, n, &|i| if i <= n { i } else { i - n })
}

/// Shared-context substitution through any split substitution.
pub fn replace_shared_with(sigma: &dyn Substitution, sig: &Signature, mode: Mode, body: &Term, n: usize, payload: &Term) -> Term {
    codiagonal(&sigma.replace_split(sig, mode, body, n, payload, n), n)
}

pub fn check_shared_problem(sig: &Signature, mode: Mode, body: &Term, n: usize, payload: &Term) -> Result<(), TermError> {
    match mode {
        Mode::Cartesian => {
            check_wellformed(sig, mode, body, n + 1)?;
            check_wellformed(sig, mode, payload, n)?;
        }
        Mode::Relevant => {
            let profiles = check_pairing(sig, mode, &[(body, n + 1), (payload, n)])?;
            if profiles[0].count(n + 1) == 0 {
                return Err(TermError::ModeViolation {
                    position: n + 1,
                    count: 0,
                    required: Requirement::AtLeastOnce,
                });
            }
        }
        Mode::Linear | Mode::Affine => {
            return Err(TermError::Capability {
                mode,
                rule: Structural::Contraction,
            })
        }
    }
    Ok(())
}

/// Substitute `payload` (at `n`) for the last position of `body` (at
/// `n + 1`) over a shared context. Cartesian and relevant only.
pub fn replace_shared(sig: &Signature, mode: Mode, body: &Term, n: usize, payload: &Term) -> Result<Term, TermError> {
    check_shared_problem(sig, mode, body, n, payload)?;
    Ok(replace_shared_with(&Recursive, sig, mode, body, n, payload))
}

/// Partial composition through any split substitution: `u` (at `q`) for
/// position `i` of `t` (at `n`). The result lives at `n - 1 + q` with `u`'s
/// block at `i..i + q`.
#[allow(clippy::too_many_arguments)]
pub fn compose_at_with(sigma: &dyn Substitution, sig: &Signature, mode: Mode, t: &Term, n: usize, i: usize, u: &Term, q: usize) -> Term {
    let p = n - 1;
    let moved = rename_raw(t, n, n, &|j| match j.cmp(&i) {
        std::cmp::Ordering::Less => j,
        std::cmp::Ordering::Equal => n,
        std::cmp::Ordering::Greater => j - 1,
    });
    let r = sigma.replace_split(sig, mode, &moved, p, u, q);
    rename_raw(&r, p + q, p + q, &|j| {
        if j > p {
            i + (j - p) - 1
        } else if j < i {
            j
        } else {
            j + q
        }
    })
}

pub fn compose_at(sig: &Signature, mode: Mode, t: &Term, n: usize, i: usize, u: &Term, q: usize) -> Result<Term, TermError> {
    if i == 0 || i > n {
        return Err(TermError::Position { position: i, ambient: n });
    }
    check_wellformed(sig, mode, t, n)?;
    check_wellformed(sig, mode, u, q)?;
    Ok(compose_at_with(&Recursive, sig, mode, t, n, i, u, q))
}

/// Check that `sigma` on `Op(op, args)` at `p + 1` is rebuilt from its
/// action on the arguments: the distinguished position is sent into the
/// arguments that use it (all arguments in cartesian mode), moved above each
/// binder block by a cyclic renaming, and the other arguments are only
/// re-indexed. Returns `false` when the sides differ or the routing does not
/// fit the mode.
#[allow(clippy::too_many_arguments)]
pub fn check_sigma_homomorphism_with(
    sigma: &dyn Substitution,
    sig: &Signature,
    mode: Mode,
    op: OpId,
    args: &[Term],
    p: usize,
    payload: &Term,
    q: usize,
) -> Result<bool, TermError> {
    let body = Term::Op(op, args.to_vec());
    check_split_problem(sig, mode, &body, p, payload, q)?;
    let arity = sig.arity(op);
    let selected: Vec<bool> = args.iter().map(|a| routed(mode, a, p)).collect();
    let hits = selected.iter().filter(|&&s| s).count();
    let shape_ok = match mode {
        Mode::Linear => hits == 1,
        Mode::Affine => hits <= 1,
        Mode::Relevant => hits >= 1,
        Mode::Cartesian => hits == args.len(),
    };
    if !shape_ok {
        return Ok(false);
    }
    let lhs = sigma.replace_split(sig, mode, &body, p, payload, q);
    let mut rebuilt = Vec::with_capacity(args.len());
    for ((arg, &b), &sel) in args.iter().zip(arity).zip(&selected) {
        if sel {
            let top = p + 1 + b;
            let cycled = rename_raw(arg, top, top, &|i| {
                if i <= p {
                    i
                } else if i == p + 1 {
                    top
                } else {
                    i - 1
                }
            });
            let inner = sigma.replace_split(sig, mode, &cycled, p + b, payload, q);
            rebuilt.push(rename_raw(&inner, p + b + q, p + b + q, &|i| {
                if i <= p {
                    i
                } else if i <= p + b {
                    i + q
                } else {
                    i - b
                }
            }));
        } else {
            rebuilt.push(rename_raw(arg, p + 1 + b, p + q + b, &|i| if i <= p { i } else { i + q - 1 }));
        }
    }
    Ok(lhs == Term::Op(op, rebuilt))
}

pub fn check_sigma_homomorphism(sig: &Signature, mode: Mode, op: OpId, args: &[Term], p: usize, payload: &Term, q: usize) -> Result<bool, TermError> {
    check_sigma_homomorphism_with(&Recursive, sig, mode, op, args, p, payload, q)
}
