//! Exhaustive checks of the substitution laws at bounded size.
//!
//! Every check enumerates its instances in a fixed order, evaluates them
//! with the configured [`Execution`] strategy and keeps the first failures
//! in that order. Single-term contexts range over `0..=max_ctx`; the total
//! operator count of an instance's inputs is at most `max_ops`.

pub mod algebras;
pub mod mutants;
mod report;

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

pub use report::{render_table, ApplicabilityMatrix, Counterexample, LawId, LawReport, Status};

use crate::contexts::{enumerate_renamings, Mode, Renaming};
use crate::enumeration::{compositions, for_each_product, Ceilings, Demand, EnumerationError, Enumerator, TupleShape};
use crate::exec::Execution;
use crate::fold::fold;
use crate::signature::Signature;
use crate::substitution::oracle::oracle_substitute;
use crate::substitution::{
    check_sigma_homomorphism_with, compose_at_with, decompose, reconstruct, replace_shared_with, ProductRuleCase, Recursive, Substitution,
};
use crate::term::{check_wellformed, embed, rename_raw, strengthen, weaken, Term, TermError};

use algebras::{FreeVars, NamedTerms, OnePoint, SizeDecorated, SubstAlgebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LawBounds {
    pub max_ctx: usize,
    pub max_ops: usize,
    /// Counterexamples kept per report.
    pub max_failures: usize,
    pub execution: Execution,
}

impl Default for LawBounds {
    fn default() -> Self {
        LawBounds {
            max_ctx: 3,
            max_ops: 3,
            max_failures: 5,
            execution: Execution::default(),
        }
    }
}

impl LawBounds {
    pub fn new(max_ctx: usize, max_ops: usize) -> Self {
        LawBounds {
            max_ctx,
            max_ops,
            ..Default::default()
        }
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LawError {
    #[error("law '{law}' does not apply in {mode} mode")]
    Inapplicable { law: LawId, mode: Mode },
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Term(#[from] TermError),
}

/// Result of one instance: whether it is nondegenerate, and its
/// counterexample if it failed.
type Outcome = (bool, Option<Counterexample>);

fn show(sig: &Signature, t: &Term, ctx: usize) -> String {
    format!("{} @{}", t.display(sig), ctx)
}

fn any_ops(ts: &[&Term]) -> bool {
    ts.iter().any(|t| t.has_ops())
}

/// Runs law checks for one signature, mode and substitution.
pub struct LawChecker<'a> {
    sig: &'a Signature,
    mode: Mode,
    bounds: LawBounds,
    sigma: &'a dyn Substitution,
}

impl<'a> LawChecker<'a> {
    pub fn new(sig: &'a Signature, mode: Mode, bounds: LawBounds) -> Result<Self, LawError> {
        Ceilings::default().check(bounds.max_ctx + 1, bounds.max_ops)?;
        Ok(LawChecker {
            sig,
            mode,
            bounds,
            sigma: &Recursive,
        })
    }

    /// Check a different substitution operation against the same laws.
    pub fn with_substitution(mut self, sigma: &'a dyn Substitution) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    fn enumerator(&self) -> Enumerator<'a> {
        Enumerator::new(self.sig, self.mode)
    }

    /// Tuples of independently wellformed terms at the given contexts.
    fn independent(&self, e: &mut Enumerator<'a>, ctxs: &[usize], max_ops: usize) -> Vec<Vec<Term>> {
        let mut out = Vec::new();
        for budgets in compositions(max_ops, ctxs.len(), false) {
            let lists: Vec<_> = ctxs.iter().zip(&budgets).map(|(&c, &b)| e.terms(c, b)).collect();
            if lists.iter().any(|l| l.is_empty()) {
                continue;
            }
            for_each_product(&lists, |ts| out.push(ts.to_vec()));
        }
        crate::enumeration::sort_tuples(&mut out);
        out
    }

    /// Split-context problems: body at `p + 1`, payload at `q`.
    fn split_problems(&self, max_ops: usize) -> Vec<(usize, usize, Term, Term)> {
        let mut e = self.enumerator();
        let mut out = Vec::new();
        for p1 in 1..=self.bounds.max_ctx {
            for q in 0..=self.bounds.max_ctx {
                for ts in self.independent(&mut e, &[p1, q], max_ops) {
                    let mut it = ts.into_iter();
                    out.push((p1 - 1, q, it.next().unwrap(), it.next().unwrap()));
                }
            }
        }
        out
    }

    fn run<T: Sync>(&self, law: LawId, instances: &[T], check: impl Fn(&T) -> Outcome + Sync + Send) -> LawReport {
        let outcomes = self.bounds.execution.map(instances, check);
        let nondegenerate = outcomes.iter().filter(|o| o.0).count();
        let failure_count = outcomes.iter().filter(|o| o.1.is_some()).count();
        let failures = outcomes.into_iter().filter_map(|o| o.1).take(self.bounds.max_failures).collect();
        LawReport::new(law, self.mode, instances.len(), nondegenerate, failure_count, failures)
    }

    fn compare(&self, inputs: impl FnOnce() -> Vec<String>, lhs: &Term, rhs: &Term, ctx: usize) -> Option<Counterexample> {
        (lhs != rhs).then(|| Counterexample {
            inputs: inputs(),
            lhs: show(self.sig, lhs, ctx),
            rhs: show(self.sig, rhs, ctx),
        })
    }

    fn split(&self, body: &Term, p: usize, payload: &Term, q: usize) -> Term {
        self.sigma.replace_split(self.sig, self.mode, body, p, payload, q)
    }

    fn shared(&self, body: &Term, n: usize, payload: &Term) -> Term {
        replace_shared_with(self.sigma, self.sig, self.mode, body, n, payload)
    }

    fn compose(&self, t: &Term, n: usize, i: usize, u: &Term, q: usize) -> Term {
        compose_at_with(self.sigma, self.sig, self.mode, t, n, i, u, q)
    }

    /// Check one substitution-algebra axiom.
    pub fn axiom(&self, law: LawId) -> Result<LawReport, LawError> {
        if !law.is_axiom() || !ApplicabilityMatrix::applies(self.mode, law) {
            return Err(LawError::Inapplicable { law, mode: self.mode });
        }
        let sig = self.sig;
        let b = self.bounds;
        let mut e = self.enumerator();
        Ok(match law {
            LawId::A => {
                let mut inst = Vec::new();
                for q in 0..=b.max_ctx {
                    for s in 0..=b.max_ops {
                        inst.extend(e.terms(q, s).iter().map(|u| (q, u.clone())));
                    }
                }
                self.run(law, &inst, |(q, u)| {
                    let lhs = self.split(&Term::Var(1), 0, u, *q);
                    (u.has_ops(), self.compare(|| vec![show(sig, u, *q)], &lhs, u, *q))
                })
            }
            LawId::B => {
                let mut inst = Vec::new();
                for n in 1..=b.max_ctx {
                    for s in 0..=b.max_ops {
                        inst.extend(e.terms(n, s).iter().map(|t| (n, t.clone())));
                    }
                }
                self.run(law, &inst, |(n, t)| {
                    let lhs = self.split(t, n - 1, &Term::Var(1), 1);
                    (t.has_ops(), self.compare(|| vec![show(sig, t, *n)], &lhs, t, *n))
                })
            }
            LawId::C => {
                let inst = self.c_instances();
                self.run(law, &inst, |(n, m, k, ts)| {
                    let (n, m, k) = (*n, *m, *k);
                    let (t, u, v) = (&ts[0], &ts[1], &ts[2]);
                    let tu = self.compose(t, n, n, u, m);
                    let lhs = self.compose(&tu, n - 1 + m, n - 1 + m, v, k);
                    let uv = self.compose(u, m, m, v, k);
                    let rhs = self.compose(t, n, n, &uv, m - 1 + k);
                    let ctx = n + m + k - 2;
                    let inputs = || vec![show(sig, t, n), show(sig, u, m), show(sig, v, k)];
                    (any_ops(&[t, u, v]), self.compare(inputs, &lhs, &rhs, ctx))
                })
            }
            LawId::D => {
                let inst = self.d_instances();
                self.run(law, &inst, |(n, m, k, i, j, ts)| {
                    let (n, m, k, i, j) = (*n, *m, *k, *i, *j);
                    let (t, u, v) = (&ts[0], &ts[1], &ts[2]);
                    let tv = self.compose(t, n, j, v, k);
                    let lhs = self.compose(&tv, n - 1 + k, i, u, m);
                    let tu = self.compose(t, n, i, u, m);
                    let rhs = self.compose(&tu, n - 1 + m, j + m - 1, v, k);
                    let ctx = n + m + k - 2;
                    let inputs = || vec![show(sig, t, n), format!("i={i} j={j}"), show(sig, u, m), show(sig, v, k)];
                    (any_ops(&[t, u, v]), self.compare(inputs, &lhs, &rhs, ctx))
                })
            }
            LawId::E => {
                let mut inst = Vec::new();
                for n in 0..b.max_ctx {
                    let qs: Vec<usize> = if self.mode == Mode::Cartesian {
                        vec![n]
                    } else {
                        (0..=b.max_ctx).collect()
                    };
                    for q in qs {
                        for ts in self.independent(&mut e, &[n, q], b.max_ops) {
                            inst.push((n, q, ts));
                        }
                    }
                }
                self.run(law, &inst, |(n, q, ts)| {
                    let (n, q) = (*n, *q);
                    let (t, u) = (&ts[0], &ts[1]);
                    let w = match weaken(sig, self.mode, t, n) {
                        Ok(w) => w,
                        Err(err) => return (true, Some(error_example(vec![show(sig, t, n)], err))),
                    };
                    let inputs = || vec![show(sig, t, n), show(sig, u, q)];
                    let outcome = if self.mode == Mode::Cartesian {
                        self.compare(inputs, &self.shared(&w, n, u), t, n)
                    } else {
                        self.compare(inputs, &self.split(&w, n, u, q), &embed(t, n, q), n + q)
                    };
                    (any_ops(&[t, u]), outcome)
                })
            }
            LawId::F => {
                let mut inst = Vec::new();
                for n in 0..=b.max_ctx.saturating_sub(2) {
                    let shape = TupleShape {
                        ctxs: vec![n + 2, n + 1, n],
                        demands: vec![Demand::of(self.mode); n + 2],
                    };
                    for ts in e.tuples(&shape, b.max_ops, false) {
                        if self.mode == Mode::Relevant && !(ts[0].mentions(n + 1) && ts[1].mentions(n + 1)) {
                            continue;
                        }
                        inst.push((n, ts));
                    }
                }
                self.run(law, &inst, |(n, ts)| {
                    let n = *n;
                    let (t, u, v) = (&ts[0], &ts[1], &ts[2]);
                    let lhs = self.shared(&self.shared(t, n + 1, u), n, v);
                    let swapped = swap_top(t, n + 2);
                    let left = self.shared(&swapped, n + 1, &embed(v, n, 1));
                    let rhs = self.shared(&left, n, &self.shared(u, n, v));
                    let inputs = || vec![show(sig, t, n + 2), show(sig, u, n + 1), show(sig, v, n)];
                    (any_ops(&[t, u, v]), self.compare(inputs, &lhs, &rhs, n))
                })
            }
            _ => unreachable!(),
        })
    }

    /// Associativity instances: `t` at `n`, `u` at `m >= 1`, `v` at `k`.
    fn c_instances(&self) -> Vec<(usize, usize, usize, Vec<Term>)> {
        let b = self.bounds;
        let mut e = self.enumerator();
        let mut inst = Vec::new();
        for n in 1..=b.max_ctx {
            for m in 1..=b.max_ctx {
                for k in 0..=b.max_ctx {
                    for ts in self.independent(&mut e, &[n, m, k], b.max_ops) {
                        inst.push((n, m, k, ts));
                    }
                }
            }
        }
        inst
    }

    /// Exchange instances: `t` at `n >= 2` with positions `i < j`, `u` at
    /// `m`, `v` at `k`.
    fn d_instances(&self) -> Vec<(usize, usize, usize, usize, usize, Vec<Term>)> {
        let b = self.bounds;
        let mut e = self.enumerator();
        let mut inst = Vec::new();
        for n in 2..=b.max_ctx {
            for m in 0..=b.max_ctx {
                for k in 0..=b.max_ctx {
                    let tuples = self.independent(&mut e, &[n, m, k], b.max_ops);
                    for j in 2..=n {
                        for i in 1..j {
                            inst.extend(tuples.iter().map(|ts| (n, m, k, i, j, ts.clone())));
                        }
                    }
                }
            }
        }
        inst
    }

    /// Instances of the extended lemma: `t` at `n + 2`, `u` at `n + 1`,
    /// `v` at `n`, jointly a mode-valid pairing. Besides the pairings
    /// enumerated directly, every associativity and exchange instance is
    /// included in pairing form, its three terms placed side by side in
    /// disjoint blocks of the shared context.
    fn lemma_instances(&self) -> Vec<(usize, Vec<Term>)> {
        let mut e = self.enumerator();
        let mut inst = Vec::new();
        for n in 0..=self.bounds.max_ctx.saturating_sub(2) {
            let shape = TupleShape {
                ctxs: vec![n + 2, n + 1, n],
                demands: vec![Demand::of(self.mode); n + 2],
            };
            inst.extend(e.tuples(&shape, self.bounds.max_ops, false).into_iter().map(|ts| (n, ts)));
        }
        for (n, m, k, ts) in self.c_instances() {
            let big = n - 1 + m - 1 + k;
            let t = rename_raw(&ts[0], n, big + 2, &|i| if i < n { i } else { big + 2 });
            let u = rename_raw(&ts[1], m, big + 1, &|i| if i < m { n - 1 + i } else { big + 1 });
            let v = rename_raw(&ts[2], k, big, &|i| n - 1 + m - 1 + i);
            inst.push((big, vec![t, u, v]));
        }
        for (n, m, k, i, j, ts) in self.d_instances() {
            let big = n - 2 + m + k;
            let t = rename_raw(&ts[0], n, big + 2, &|x| {
                if x == i {
                    big + 2
                } else if x == j {
                    big + 1
                } else {
                    x - usize::from(x > i) - usize::from(x > j)
                }
            });
            let u = rename_raw(&ts[1], m, big + 1, &|x| n - 2 + x);
            let v = rename_raw(&ts[2], k, big, &|x| n - 2 + m + x);
            inst.push((big, vec![t, u, v]));
        }
        inst
    }

    /// The single routed equation: both sides substitute `u` for `n + 2`
    /// and `v` for `n + 1`, in the two orders, routing `v` only to the
    /// components that use `n + 1`.
    pub fn extended_lemma(&self) -> Result<LawReport, LawError> {
        if self.mode == Mode::Cartesian {
            return Err(LawError::Inapplicable {
                law: LawId::ExtendedLemma,
                mode: self.mode,
            });
        }
        let inst = self.lemma_instances();
        Ok(self.run(LawId::ExtendedLemma, &inst, |(n, ts)| self.lemma_instance(*n, &ts[0], &ts[1], &ts[2])))
    }

    fn lemma_instance(&self, n: usize, t: &Term, u: &Term, v: &Term) -> Outcome {
        let sig = self.sig;
        let lhs = self.shared(&self.shared(t, n + 1, u), n, v);
        let rhs = match (t.mentions(n + 1), u.mentions(n + 1)) {
            (true, false) => {
                let left = self.shared(&swap_top(t, n + 2), n + 1, &embed(v, n, 1));
                self.shared(&left, n, &strengthen(u, n + 1, n + 1).unwrap())
            }
            (false, true) => self.shared(&strengthen(t, n + 2, n + 1).unwrap(), n, &self.shared(u, n, v)),
            (false, false) => self.shared(&strengthen(t, n + 2, n + 1).unwrap(), n, &strengthen(u, n + 1, n + 1).unwrap()),
            (true, true) => {
                let left = self.shared(&swap_top(t, n + 2), n + 1, &embed(v, n, 1));
                self.shared(&left, n, &self.shared(u, n, v))
            }
        };
        let inputs = || vec![show(sig, t, n + 2), show(sig, u, n + 1), show(sig, v, n)];
        (any_ops(&[t, u, v]), self.compare(inputs, &lhs, &rhs, n))
    }

    /// Renaming the two blocks of a result equals substituting renamed
    /// inputs. Inputs have at most `max_ops - 1` operator nodes and the
    /// renamed contexts stay within `max_ctx`.
    pub fn naturality(&self) -> Result<LawReport, LawError> {
        let sig = self.sig;
        let b = self.bounds;
        let mut renamings: HashMap<(usize, usize), Vec<Renaming>> = HashMap::new();
        let mut get = |m: usize, n: usize| -> Result<Vec<Renaming>, LawError> {
            if let Some(r) = renamings.get(&(m, n)) {
                return Ok(r.clone());
            }
            let r = enumerate_renamings(m, n, self.mode).map_err(TermError::from)?;
            renamings.insert((m, n), r.clone());
            Ok(r)
        };
        let mut inst = Vec::new();
        for (p, q, t, u) in self.split_problems(b.max_ops.saturating_sub(1)) {
            for p2 in 0..b.max_ctx {
                for rb in get(p, p2)? {
                    for q2 in 0..=b.max_ctx {
                        for rp in get(q, q2)? {
                            inst.push((p, q, t.clone(), u.clone(), rb.clone(), rp));
                        }
                    }
                }
            }
        }
        Ok(self.run(LawId::Naturality, &inst, |(p, q, t, u, rb, rp)| {
            let (p, q) = (*p, *q);
            let (p2, q2) = (rb.codomain(), rp.codomain());
            let r = self.split(t, p, u, q);
            let lhs = rename_raw(&r, p + q, p2 + q2, &|i| if i <= p { rb.apply(i) } else { p2 + rp.apply(i - p) });
            let t2 = rename_raw(t, p + 1, p2 + 1, &|i| if i <= p { rb.apply(i) } else { p2 + 1 });
            let u2 = rename_raw(u, q, q2, &|i| rp.apply(i));
            let rhs = self.split(&t2, p2, &u2, q2);
            let inputs = || vec![show(sig, t, p + 1), show(sig, u, q), format!("body {rb}"), format!("payload {rp}")];
            (any_ops(&[t, u]), self.compare(inputs, &lhs, &rhs, p2 + q2))
        }))
    }

    /// Product-rule decomposition of pairings over `n + 1` for
    /// `n < max_ctx + 1`: round trip on every pairing, and the summands
    /// enumerated on their own reconstruct exactly the pairings.
    pub fn leibniz(&self) -> Result<LawReport, LawError> {
        let sig = self.sig;
        let mode = self.mode;
        let mut e = self.enumerator();
        let mut inst = Vec::new();
        let mut extra = Vec::new();
        for a in 1..=self.bounds.max_ctx + 1 {
            let pairs = e.tuples(&TupleShape::shared(mode, 2, a), self.bounds.max_ops, false);
            let mut from_summands: Vec<(ProductRuleCase, Vec<Term>)> = Vec::new();
            for &tag in ProductRuleCase::allowed(mode) {
                let (lc, rc) = (if tag.left_uses() { a } else { a - 1 }, if tag.right_uses() { a } else { a - 1 });
                let mut demands = vec![Demand::of(mode); a - 1];
                if tag != ProductRuleCase::Neither {
                    demands.push(Demand::used(mode));
                }
                let shape = TupleShape { ctxs: vec![lc, rc], demands };
                for ts in e.tuples(&shape, self.bounds.max_ops, false) {
                    if tag == ProductRuleCase::Both && mode == Mode::Relevant && !(ts[0].mentions(a) && ts[1].mentions(a)) {
                        continue;
                    }
                    let s = crate::substitution::Summand {
                        tag,
                        left: (ts[0].clone(), lc),
                        right: (ts[1].clone(), rc),
                    };
                    let (l, r) = reconstruct(&s, a);
                    from_summands.push((tag, vec![l, r]));
                }
            }
            let pair_set: BTreeSet<&Vec<Term>> = pairs.iter().collect();
            let summand_set: BTreeSet<&Vec<Term>> = from_summands.iter().map(|x| &x.1).collect();
            if from_summands.len() != pairs.len() || pair_set != summand_set {
                extra.push(Counterexample {
                    inputs: vec![format!("ambient {a}")],
                    lhs: format!("{} pairings", pairs.len()),
                    rhs: format!("{} summand elements ({} distinct)", from_summands.len(), summand_set.len()),
                });
            }
            let tags: HashMap<&Vec<Term>, ProductRuleCase> = from_summands.iter().map(|(t, p)| (p, *t)).collect();
            for p in pairs.iter() {
                inst.push((a, p.clone(), tags.get(p).copied()));
            }
        }
        let mut report = self.run(LawId::Leibniz, &inst, |(a, pair, expected)| {
            let a = *a;
            let inputs = || vec![show(sig, &pair[0], a), show(sig, &pair[1], a)];
            let fail = |lhs: String, rhs: String| Some(Counterexample { inputs: inputs(), lhs, rhs });
            let nondeg = any_ops(&[&pair[0], &pair[1]]);
            match decompose(sig, mode, &pair[0], &pair[1], a) {
                Err(err) => (nondeg, Some(error_example(inputs(), err))),
                Ok(s) => {
                    let (l, r) = reconstruct(&s, a);
                    if l != pair[0] || r != pair[1] {
                        (nondeg, fail(show(sig, &l, a), show(sig, &r, a)))
                    } else if *expected != Some(s.tag) {
                        (nondeg, fail(format!("{:?}", s.tag), format!("{expected:?}")))
                    } else {
                        (nondeg, None)
                    }
                }
            }
        });
        if !extra.is_empty() {
            report.failure_count += extra.len();
            report.failures.splice(0..0, extra);
            report.failures.truncate(self.bounds.max_failures);
            report.status = Status::Fail;
        }
        Ok(report)
    }

    /// Substitution commutes with the operators: the result on an operator
    /// node is rebuilt from the routed results on its arguments.
    pub fn homomorphism(&self) -> Result<LawReport, LawError> {
        let sig = self.sig;
        let inst: Vec<_> = self
            .split_problems(self.bounds.max_ops)
            .into_iter()
            .filter(|(_, _, t, _)| t.has_ops())
            .collect();
        Ok(self.run(LawId::Homomorphism, &inst, |(p, q, t, u)| {
            let Term::Op(op, args) = t else { unreachable!() };
            let inputs = || vec![show(sig, t, p + 1), show(sig, u, *q)];
            match check_sigma_homomorphism_with(self.sigma, sig, self.mode, *op, args, *p, u, *q) {
                Ok(true) => (true, None),
                Ok(false) => (
                    true,
                    Some(Counterexample {
                        inputs: inputs(),
                        lhs: show(sig, &self.split(t, *p, u, *q), p + q),
                        rhs: "routed reconstruction differs".into(),
                    }),
                ),
                Err(err) => (true, Some(error_example(inputs(), err))),
            }
        }))
    }

    /// Agreement with the named-term substitution, and wellformedness of
    /// every result.
    pub fn oracle(&self) -> Result<LawReport, LawError> {
        let sig = self.sig;
        let inst = self.split_problems(self.bounds.max_ops);
        Ok(self.run(LawId::Oracle, &inst, |(p, q, t, u)| {
            let (p, q) = (*p, *q);
            let inputs = || vec![show(sig, t, p + 1), show(sig, u, q)];
            let lhs = self.split(t, p, u, q);
            let rhs = match oracle_substitute(sig, self.mode, t, p, u, q) {
                Ok(r) => r,
                Err(err) => return (any_ops(&[t, u]), Some(error_example(inputs(), err))),
            };
            let outcome = self.compare(inputs, &lhs, &rhs, p + q).or_else(|| {
                check_wellformed(sig, self.mode, &lhs, p + q)
                    .err()
                    .map(|err| error_example(vec![show(sig, t, p + 1), show(sig, u, q)], err))
            });
            (any_ops(&[t, u]), outcome)
        }))
    }

    /// Fold into `alg`: homomorphism and generic-variable equations,
    /// commutation with substitution, and a bottom-up value table forced by
    /// the equations agreeing with the fold.
    pub fn initiality_for<A: SubstAlgebra>(&self, alg: &A) -> Result<LawReport, LawError> {
        let sig = self.sig;
        let name = alg.name();
        let label = |mut v: Vec<String>| {
            v.insert(0, format!("algebra {name}"));
            v
        };
        let problems = self.split_problems(self.bounds.max_ops);
        let mut report = self.run(LawId::Initiality, &problems, |(p, q, t, u)| {
            let (p, q) = (*p, *q);
            let inputs = || label(vec![show(sig, t, p + 1), show(sig, u, q)]);
            let nondeg = any_ops(&[t, u]);
            let step = || -> Result<Option<Counterexample>, TermError> {
                let ft = fold(sig, alg, t, p + 1)?;
                let fu = fold(sig, alg, u, q)?;
                let generic = fold(sig, alg, &Term::Var(p + 1), p + 1)?;
                if !alg.same(sig, &generic, &alg.var(p + 1, p + 1), p + 1) {
                    return Ok(Some(Counterexample {
                        inputs: inputs(),
                        lhs: alg.render(sig, &generic),
                        rhs: "generic variable".into(),
                    }));
                }
                if let Term::Op(op, args) = t {
                    let vals = args
                        .iter()
                        .zip(sig.arity(*op))
                        .map(|(a, &w)| fold(sig, alg, a, p + 1 + w))
                        .collect::<Result<Vec<_>, _>>()?;
                    let rebuilt = alg.op(sig, p + 1, *op, vals)?;
                    if !alg.same(sig, &ft, &rebuilt, p + 1) {
                        return Ok(Some(Counterexample {
                            inputs: inputs(),
                            lhs: alg.render(sig, &ft),
                            rhs: alg.render(sig, &rebuilt),
                        }));
                    }
                }
                let lhs = fold(sig, alg, &self.split(t, p, u, q), p + q)?;
                let rhs = alg.substitute(sig, self.mode, &ft, p, &fu, q);
                Ok((!alg.same(sig, &lhs, &rhs, p + q)).then(|| Counterexample {
                    inputs: inputs(),
                    lhs: alg.render(sig, &lhs),
                    rhs: alg.render(sig, &rhs),
                }))
            };
            match step() {
                Ok(c) => (nondeg, c),
                Err(err) => (nondeg, Some(error_example(inputs(), err))),
            }
        });

        // Value table over all subterms, each entry computed only from
        // entries already in the table.
        let mut e = self.enumerator();
        let mut entries: BTreeSet<(usize, Term, usize)> = BTreeSet::new();
        for n in 0..=self.bounds.max_ctx {
            for s in 0..=self.bounds.max_ops {
                for t in e.terms(n, s).iter() {
                    collect_subterms(sig, t, n, &mut entries);
                }
            }
        }
        let mut table: HashMap<(Term, usize), A::Carrier> = HashMap::new();
        let mut table_failures = Vec::new();
        let mut checked = 0;
        for (_, t, n) in &entries {
            let value = match t {
                Term::Var(i) => alg.var(*n, *i),
                Term::Op(op, args) => {
                    let vals: Vec<A::Carrier> = args
                        .iter()
                        .zip(sig.arity(*op))
                        .map(|(a, &w)| table[&(a.clone(), n + w)].clone())
                        .collect();
                    alg.op(sig, *n, *op, vals)?
                }
            };
            let folded = fold(sig, alg, t, *n)?;
            checked += 1;
            if !alg.same(sig, &value, &folded, *n) {
                table_failures.push(Counterexample {
                    inputs: label(vec![show(sig, t, *n)]),
                    lhs: alg.render(sig, &value),
                    rhs: alg.render(sig, &folded),
                });
            }
            table.insert((t.clone(), *n), value);
        }
        report.instances += checked;
        report.failure_count += table_failures.len();
        report.failures.extend(table_failures);
        report.failures.truncate(self.bounds.max_failures);
        if report.failure_count > 0 {
            report.status = Status::Fail;
        }
        Ok(report)
    }

    /// Initiality against the built-in fixture algebras, merged into one
    /// report.
    pub fn initiality(&self) -> Result<LawReport, LawError> {
        let reports = [
            self.initiality_for(&SizeDecorated)?,
            self.initiality_for(&OnePoint)?,
            self.initiality_for(&NamedTerms)?,
            self.initiality_for(&FreeVars)?,
        ];
        Ok(merge(LawId::Initiality, self.mode, &reports, self.bounds.max_failures))
    }

    /// Every applicable check in a fixed order.
    pub fn suite(&self) -> Result<Vec<LawReport>, LawError> {
        let mut out = Vec::new();
        for &law in ApplicabilityMatrix::axioms(self.mode) {
            out.push(self.axiom(law)?);
        }
        if self.mode != Mode::Cartesian {
            out.push(self.extended_lemma_equivalence()?.lemma);
        }
        out.push(self.naturality()?);
        out.push(self.leibniz()?);
        out.push(self.homomorphism()?);
        out.push(self.oracle()?);
        out.push(self.initiality()?);
        Ok(out)
    }

    /// The extended lemma together with the axioms it is equivalent to
    /// (associativity and exchange, plus weakening or the substitution
    /// lemma where the mode has them), evaluated at the same bounds. A
    /// disagreement between the two verdicts is recorded as a failure of
    /// the lemma report when (a), (b) and naturality hold.
    pub fn extended_lemma_equivalence(&self) -> Result<LemmaEquivalence, LawError> {
        let mut lemma = self.extended_lemma()?;
        let axioms = ApplicabilityMatrix::axioms(self.mode)
            .iter()
            .filter(|l| !matches!(l, LawId::A | LawId::B))
            .map(|&l| self.axiom(l))
            .collect::<Result<Vec<_>, _>>()?;
        let axioms_pass = axioms.iter().all(LawReport::passed);
        let hypotheses = self.axiom(LawId::A)?.passed() && self.axiom(LawId::B)?.passed() && self.naturality()?.passed();
        let equivalent = axioms_pass == lemma.passed();
        if hypotheses && !equivalent {
            lemma.failure_count += 1;
            lemma.failures.insert(
                0,
                Counterexample {
                    inputs: axioms.iter().map(|r| format!("{} {}", r.law, r.status)).collect(),
                    lhs: format!("axioms pass: {axioms_pass}"),
                    rhs: format!("lemma pass: {}", lemma.failure_count == 1),
                },
            );
            lemma.failures.truncate(self.bounds.max_failures);
            lemma.status = Status::Fail;
        }
        Ok(LemmaEquivalence {
            lemma,
            axioms,
            axioms_pass,
            hypotheses,
            equivalent,
        })
    }
}

#[derive(Clone, Debug)]
pub struct LemmaEquivalence {
    pub lemma: LawReport,
    pub axioms: Vec<LawReport>,
    pub axioms_pass: bool,
    /// Whether (a), (b) and naturality hold; the equivalence is only
    /// claimed, and only reported as a failure, under these.
    pub hypotheses: bool,
    pub equivalent: bool,
}

fn swap_top(t: &Term, n: usize) -> Term {
    rename_raw(t, n, n, &|i| {
        if i == n {
            n - 1
        } else if i == n - 1 {
            n
        } else {
            i
        }
    })
}

fn error_example(inputs: Vec<String>, err: TermError) -> Counterexample {
    Counterexample {
        inputs,
        lhs: format!("error: {err}"),
        rhs: String::new(),
    }
}

fn collect_subterms(sig: &Signature, t: &Term, n: usize, out: &mut BTreeSet<(usize, Term, usize)>) {
    if let Term::Op(op, args) = t {
        for (a, &w) in args.iter().zip(sig.arity(*op)) {
            collect_subterms(sig, a, n + w, out);
        }
    }
    out.insert((t.ops(), t.clone(), n));
}

fn merge(law: LawId, mode: Mode, reports: &[LawReport], cap: usize) -> LawReport {
    LawReport::new(
        law,
        mode,
        reports.iter().map(|r| r.instances).sum(),
        reports.iter().map(|r| r.nondegenerate).sum(),
        reports.iter().map(|r| r.failure_count).sum(),
        reports.iter().flat_map(|r| r.failures.clone()).take(cap).collect(),
    )
}

pub fn check_axiom(sig: &Signature, mode: Mode, law: LawId, bounds: LawBounds) -> Result<LawReport, LawError> {
    LawChecker::new(sig, mode, bounds)?.axiom(law)
}

pub fn check_extended_substitution_lemma(sig: &Signature, mode: Mode, bounds: LawBounds) -> Result<LemmaEquivalence, LawError> {
    LawChecker::new(sig, mode, bounds)?.extended_lemma_equivalence()
}

pub fn check_initiality(sig: &Signature, mode: Mode, bounds: LawBounds) -> Result<LawReport, LawError> {
    LawChecker::new(sig, mode, bounds)?.initiality()
}

pub fn run_suite(sig: &Signature, mode: Mode, bounds: LawBounds) -> Result<Vec<LawReport>, LawError> {
    LawChecker::new(sig, mode, bounds)?.suite()
}

/// No report failed. Vacuous reports (no instances within the bounds) do
/// not count as failures.
pub fn all_pass(reports: &[LawReport]) -> bool {
    reports.iter().all(LawReport::passed)
}
