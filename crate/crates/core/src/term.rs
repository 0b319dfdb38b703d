//! Well-scoped terms over a binding signature.
//!
//! Variables are numbered by *level*: a term over context `n` refers to its
//! free positions as `1..=n`, and an argument under a binder of width `b`
//! lives in context `n + b` with the bound variables at the top,
//! `n + 1..=n + b`. Because levels are absolute, `Var(i)` with `i <= n` is the
//! free position `i` wherever it occurs in the tree.

use std::fmt;

use thiserror::Error;

use crate::contexts::{generator, ContextError, GeneratorKind, Mode, Renaming, Structural};
use crate::signature::{OpId, Signature};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    Op(OpId, Vec<Term>),
}

/// Occurrence requirement violated by a mode check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Requirement {
    ExactlyOnce,
    AtMostOnce,
    AtLeastOnce,
}

impl Requirement {
    pub fn of(mode: Mode) -> Option<Requirement> {
        match mode {
            Mode::Cartesian => None,
            Mode::Linear => Some(Requirement::ExactlyOnce),
            Mode::Affine => Some(Requirement::AtMostOnce),
            Mode::Relevant => Some(Requirement::AtLeastOnce),
        }
    }
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Requirement::ExactlyOnce => "exactly once",
            Requirement::AtMostOnce => "at most once",
            Requirement::AtLeastOnce => "at least once",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("scope error: variable {index} is out of scope (allowed 1..={allowed})")]
    Scope { index: usize, allowed: usize },
    #[error("mode violation: position {position} occurs {count} times but must occur {required}")]
    ModeViolation { position: usize, count: usize, required: Requirement },
    #[error("unknown operator #{0}")]
    UnknownOperator(u32),
    #[error("operator '{name}' expects {expected} arguments, found {found}")]
    Arity { name: String, expected: usize, found: usize },
    #[error("{rule} is not available in {mode} mode")]
    Capability { mode: Mode, rule: Structural },
    #[error("renaming domain {domain} does not match the ambient context {ambient}")]
    DomainMismatch { domain: usize, ambient: usize },
    #[error("position {position} is out of range for context {ambient}")]
    Position { position: usize, ambient: usize },
    #[error("position {position} is used, so it cannot be removed")]
    PositionInUse { position: usize },
    #[error("no operation case for operator '{0}'")]
    MissingOpCase(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Context(#[from] ContextError),
}

/// Free-occurrence counts of positions `1..=n` of a term at context `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccurrenceProfile {
    counts: Vec<usize>,
}

impl OccurrenceProfile {
    pub fn new(counts: Vec<usize>) -> Self {
        OccurrenceProfile { counts }
    }

    pub fn ctx(&self) -> usize {
        self.counts.len()
    }

    /// Occurrences of the 1-based position `i`.
    pub fn count(&self, i: usize) -> usize {
        self.counts[i - 1]
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Positions occurring at least once.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.counts.len()).filter(|&i| self.count(i) > 0).collect()
    }

    /// First position that `mode` rejects, with its count.
    pub fn first_violation(&self, mode: Mode) -> Option<(usize, usize)> {
        (1..=self.counts.len()).map(|i| (i, self.count(i))).find(|&(_, c)| !mode.admits_count(c))
    }
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    /// Number of operator nodes.
    pub fn ops(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Op(_, args) => 1 + args.iter().map(Term::ops).sum::<usize>(),
        }
    }

    /// Number of `Var(i)` leaves.
    pub fn occurrences(&self, i: usize) -> usize {
        match self {
            Term::Var(j) => usize::from(*j == i),
            Term::Op(_, args) => args.iter().map(|a| a.occurrences(i)).sum(),
        }
    }

    pub fn mentions(&self, i: usize) -> bool {
        match self {
            Term::Var(j) => *j == i,
            Term::Op(_, args) => args.iter().any(|a| a.mentions(i)),
        }
    }

    pub fn has_ops(&self) -> bool {
        matches!(self, Term::Op(..))
    }
}

/// Walk `t` at context `ctx`, checking scopes and arities, and the occurrence
/// requirement of `binder_mode` for every bound variable. Returns the counts
/// of the free positions.
pub fn scan(sig: &Signature, binder_mode: Mode, t: &Term, ctx: usize) -> Result<OccurrenceProfile, TermError> {
    let mut counts = vec![0usize; ctx];
    scan_into(sig, binder_mode, t, &mut counts)?;
    Ok(OccurrenceProfile::new(counts))
}

fn scan_into(sig: &Signature, mode: Mode, t: &Term, counts: &mut Vec<usize>) -> Result<(), TermError> {
    match t {
        Term::Var(i) => {
            if *i == 0 || *i > counts.len() {
                return Err(TermError::Scope {
                    index: *i,
                    allowed: counts.len(),
                });
            }
            counts[i - 1] += 1;
            Ok(())
        }
        Term::Op(op, args) => {
            let operator = sig.operator(*op).ok_or(TermError::UnknownOperator(op.0))?;
            if operator.args() != args.len() {
                return Err(TermError::Arity {
                    name: operator.name.clone(),
                    expected: operator.args(),
                    found: args.len(),
                });
            }
            for (arg, &width) in args.iter().zip(&operator.arity) {
                let base = counts.len();
                counts.resize(base + width, 0);
                scan_into(sig, mode, arg, counts)?;
                if let Some(required) = Requirement::of(mode) {
                    for position in base + 1..=base + width {
                        let count = counts[position - 1];
                        if !mode.admits_count(count) {
                            return Err(TermError::ModeViolation { position, count, required });
                        }
                    }
                }
                counts.truncate(base);
            }
            Ok(())
        }
    }
}

/// Check that `t` is a mode-wellformed term at context `n`.
///
/// Scope and arity problems are reported before mode problems. Under a
/// binder, each bound position must satisfy the mode's occurrence
/// requirement within its scope; at the root the same holds for `1..=n`.
pub fn check_wellformed(sig: &Signature, mode: Mode, t: &Term, n: usize) -> Result<OccurrenceProfile, TermError> {
    check_scope(sig, t, n)?;
    let profile = scan(sig, mode, t, n)?;
    if let (Some(required), Some((position, count))) = (Requirement::of(mode), profile.first_violation(mode)) {
        return Err(TermError::ModeViolation { position, count, required });
    }
    Ok(profile)
}

/// Scope and arity check only.
pub fn check_scope(sig: &Signature, t: &Term, n: usize) -> Result<OccurrenceProfile, TermError> {
    scan(sig, Mode::Cartesian, t, n)
}

/// Check `t` as one component of a pairing: bound variables must satisfy the
/// mode, while the root positions only need the per-component bound
/// (at most once for linear and affine, anything otherwise). Joint
/// conditions are checked by the caller on the combined profile.
pub fn check_component(sig: &Signature, mode: Mode, t: &Term, n: usize) -> Result<OccurrenceProfile, TermError> {
    check_scope(sig, t, n)?;
    let profile = scan(sig, mode, t, n)?;
    if matches!(mode, Mode::Linear | Mode::Affine) {
        if let Some((position, count)) = profile.first_violation(Mode::Affine) {
            return Err(TermError::ModeViolation {
                position,
                count,
                required: Requirement::AtMostOnce,
            });
        }
    }
    Ok(profile)
}

/// Rename free positions of `t` (at `from`) by `f`, landing in context `to`.
/// Bound variables follow: level `from + k` becomes `to + k`. No validity
/// checks; callers are responsible for `f` mapping into `1..=to`.
pub fn rename_raw(t: &Term, from: usize, to: usize, f: &dyn Fn(usize) -> usize) -> Term {
    match t {
        Term::Var(i) if *i <= from => Term::Var(f(*i)),
        Term::Var(i) => Term::Var(i - from + to),
        Term::Op(op, args) => Term::Op(*op, args.iter().map(|a| rename_raw(a, from, to, f)).collect()),
    }
}

/// Apply a renaming without checking the term.
pub fn rename_unchecked(t: &Term, rho: &Renaming) -> Term {
    rename_raw(t, rho.domain(), rho.codomain(), &|i| rho.apply(i))
}

/// Functorial action of a renaming on a term at context `ambient`.
///
/// `t` must be wellformed in the renaming's mode; the result is wellformed
/// at the codomain.
pub fn rename(sig: &Signature, t: &Term, ambient: usize, rho: &Renaming) -> Result<Term, TermError> {
    if rho.domain() != ambient {
        return Err(TermError::DomainMismatch {
            domain: rho.domain(),
            ambient,
        });
    }
    check_wellformed(sig, rho.mode(), t, ambient)?;
    Ok(rename_unchecked(t, rho))
}

/// Add an unused top position: `t` at `n` becomes a term at `n + 1`.
pub fn weaken(sig: &Signature, mode: Mode, t: &Term, n: usize) -> Result<Term, TermError> {
    if !mode.has_weakening() {
        return Err(TermError::Capability {
            mode,
            rule: Structural::Weakening,
        });
    }
    let rho = generator(GeneratorKind::Weaken, n + 1, n, mode)?;
    rename(sig, t, n, &rho)
}

/// Merge the last two positions of `t` at `n` (so `n >= 2`) into one.
pub fn contract(sig: &Signature, mode: Mode, t: &Term, n: usize) -> Result<Term, TermError> {
    if !mode.has_contraction() {
        return Err(TermError::Capability {
            mode,
            rule: Structural::Contraction,
        });
    }
    if n < 2 {
        return Err(TermError::Position { position: 2, ambient: n });
    }
    let rho = generator(GeneratorKind::Contract, n - 1, n, mode)?;
    rename(sig, t, n, &rho)
}

/// Exchange the last two positions of `t` at `n` (so `n >= 2`).
pub fn swap_last(sig: &Signature, mode: Mode, t: &Term, n: usize) -> Result<Term, TermError> {
    if n < 2 {
        return Err(TermError::Position { position: 2, ambient: n });
    }
    let rho = generator(GeneratorKind::Swap, n - 1, n, mode)?;
    rename(sig, t, n, &rho)
}

/// The generic variable at context `n + 1`: `Var(n + 1)`.
pub fn generic_variable(n: usize) -> Term {
    Term::Var(n + 1)
}

/// Remove the unused position `position` of `t` at `n`, giving a term at
/// `n - 1`.
pub fn strengthen(t: &Term, n: usize, position: usize) -> Result<Term, TermError> {
    if position == 0 || position > n {
        return Err(TermError::Position { position, ambient: n });
    }
    if t.mentions(position) {
        return Err(TermError::PositionInUse { position });
    }
    Ok(rename_raw(t, n, n - 1, &|i| if i < position { i } else { i - 1 }))
}

/// Re-express a term at `n` as a term at `n + k` with `k` unused top
/// positions. Only bound variables move.
pub fn embed(t: &Term, n: usize, k: usize) -> Term {
    rename_raw(t, n, n + k, &|i| i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contexts::Renaming;

    fn sig() -> Signature {
        Signature::lambda()
    }
    fn lam(b: Term) -> Term {
        Term::Op(OpId(0), vec![b])
    }
    fn app(a: Term, b: Term) -> Term {
        Term::Op(OpId(1), vec![a, b])
    }
    fn v(i: usize) -> Term {
        Term::Var(i)
    }

    #[test]
    fn wellformed_examples() {
        let p = check_wellformed(&sig(), Mode::Linear, &app(v(1), v(2)), 2).unwrap();
        assert_eq!(p.counts(), &[1, 1]);
        assert_eq!(
            check_wellformed(&sig(), Mode::Linear, &lam(v(1)), 1),
            Err(TermError::ModeViolation {
                position: 2,
                count: 0,
                required: Requirement::ExactlyOnce
            })
        );
        let p = check_wellformed(&sig(), Mode::Relevant, &app(v(1), v(1)), 1).unwrap();
        assert_eq!(p.counts(), &[2]);
    }

    #[test]
    fn scope_errors_come_first() {
        assert_eq!(
            check_wellformed(&sig(), Mode::Linear, &app(v(1), v(3)), 2),
            Err(TermError::Scope { index: 3, allowed: 2 })
        );
        assert!(matches!(
            check_wellformed(&sig(), Mode::Cartesian, &Term::Op(OpId(1), vec![v(1)]), 1),
            Err(TermError::Arity { .. })
        ));
        assert!(matches!(
            check_wellformed(&sig(), Mode::Cartesian, &Term::Op(OpId(9), vec![]), 1),
            Err(TermError::UnknownOperator(9))
        ));
    }

    #[test]
    fn rename_examples() {
        let s = Renaming::parse("[2 1]", Mode::Linear, None).unwrap();
        assert_eq!(rename(&sig(), &app(v(1), v(2)), 2, &s).unwrap(), app(v(2), v(1)));
        let w = Renaming::new(Mode::Affine, 2, vec![1]).unwrap();
        let t = lam(app(v(1), v(2)));
        assert_eq!(rename(&sig(), &t, 1, &w).unwrap(), lam(app(v(1), v(3))));
        assert!(matches!(rename(&sig(), &t, 2, &w), Err(TermError::DomainMismatch { .. })));
    }

    #[test]
    fn structural_examples() {
        let s = sig();
        assert_eq!(weaken(&s, Mode::Affine, &v(1), 1).unwrap(), v(1));
        assert_eq!(weaken(&s, Mode::Cartesian, &lam(v(2)), 1).unwrap(), lam(v(3)));
        assert!(matches!(weaken(&s, Mode::Linear, &v(1), 1), Err(TermError::Capability { .. })));
        assert_eq!(contract(&s, Mode::Cartesian, &app(v(1), v(2)), 2).unwrap(), app(v(1), v(1)));
        assert_eq!(contract(&s, Mode::Cartesian, &v(3), 3).unwrap(), v(2));
        assert!(matches!(contract(&s, Mode::Affine, &v(1), 2), Err(TermError::Capability { .. })));
        assert_eq!(swap_last(&s, Mode::Linear, &app(v(1), v(2)), 2).unwrap(), app(v(2), v(1)));
        assert_eq!(swap_last(&s, Mode::Cartesian, &lam(app(v(1), v(3))), 2).unwrap(), lam(app(v(2), v(3))));
        assert!(swap_last(&s, Mode::Cartesian, &v(1), 1).is_err());
    }

    #[test]
    fn contract_after_weaken_is_identity() {
        let s = sig();
        let t = lam(app(v(2), app(v(1), v(3))));
        let w = weaken(&s, Mode::Cartesian, &t, 2).unwrap();
        assert_eq!(contract(&s, Mode::Cartesian, &w, 3).unwrap(), t);
    }

    #[test]
    fn generic_variable_modes() {
        assert_eq!(generic_variable(0), v(1));
        let g = generic_variable(2);
        assert_eq!(g, v(3));
        assert!(check_wellformed(&sig(), Mode::Cartesian, &g, 3).is_ok());
        assert!(check_wellformed(&sig(), Mode::Affine, &g, 3).is_ok());
        assert!(matches!(
            check_wellformed(&sig(), Mode::Linear, &g, 3),
            Err(TermError::ModeViolation { position: 1, count: 0, .. })
        ));
    }

    #[test]
    fn strengthen_and_embed() {
        let t = lam(app(v(1), v(3)));
        assert_eq!(strengthen(&t, 2, 2).unwrap(), lam(app(v(1), v(2))));
        assert_eq!(embed(&lam(app(v(1), v(2))), 1, 1), t);
        assert!(matches!(strengthen(&t, 2, 1), Err(TermError::PositionInUse { .. })));
    }

    #[test]
    fn component_check_relaxes_root_only() {
        let s = sig();
        assert!(check_component(&s, Mode::Linear, &v(2), 3).is_ok());
        assert!(check_component(&s, Mode::Linear, &app(v(1), v(1)), 1).is_err());
        assert!(check_component(&s, Mode::Linear, &lam(v(1)), 1).is_err());
        assert!(check_component(&s, Mode::Relevant, &v(1), 3).is_ok());
    }
}
