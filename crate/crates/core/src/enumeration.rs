//! Exhaustive generation of mode-wellformed terms and pairings.
//!
//! Generation is top-down. Every position of the context carries a
//! [`Demand`] on its number of occurrences, and an operator node splits each
//! demand among its arguments before recursing. A demand that cannot be met
//! within an argument's operator budget is pruned there. The naive
//! generate-and-filter functions at the bottom of the module are the
//! reference the generator is tested against.

use std::collections::HashMap;
use std::env;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::contexts::Mode;
use crate::signature::Signature;
use crate::term::{check_component, check_wellformed, Term};

/// Occurrence budget of one context position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Demand {
    Zero,
    One,
    AtMostOne,
    AtLeastOne,
    Any,
}

impl Demand {
    pub fn admits(self, count: usize) -> bool {
        match self {
            Demand::Zero => count == 0,
            Demand::One => count == 1,
            Demand::AtMostOne => count <= 1,
            Demand::AtLeastOne => count >= 1,
            Demand::Any => true,
        }
    }

    /// Demand on a position that must be used as the mode requires.
    pub fn of(mode: Mode) -> Demand {
        match mode {
            Mode::Cartesian => Demand::Any,
            Mode::Linear => Demand::One,
            Mode::Affine => Demand::AtMostOne,
            Mode::Relevant => Demand::AtLeastOne,
        }
    }

    /// Demand on a distinguished position that a pairing component is
    /// known to use.
    pub fn used(mode: Mode) -> Demand {
        match mode {
            Mode::Cartesian => Demand::Any,
            Mode::Linear | Mode::Affine => Demand::One,
            Mode::Relevant => Demand::AtLeastOne,
        }
    }

    /// Demand on a root position of a single pairing component, before the
    /// joint condition is imposed.
    pub fn component(mode: Mode) -> Demand {
        match mode {
            Mode::Linear | Mode::Affine => Demand::AtMostOne,
            Mode::Cartesian | Mode::Relevant => Demand::Any,
        }
    }

    fn forces_use(self) -> bool {
        matches!(self, Demand::One | Demand::AtLeastOne)
    }

    /// Ways to share this demand among `k` parts. Each alternative fixes,
    /// for every part, the demand it has to meet.
    fn splits(self, k: usize) -> Vec<Vec<Demand>> {
        let single = |j: usize, d: Demand| {
            let mut v = vec![Demand::Zero; k];
            v[j] = d;
            v
        };
        match self {
            Demand::Zero => vec![vec![Demand::Zero; k]],
            Demand::Any => vec![vec![Demand::Any; k]],
            Demand::One => (0..k).map(|j| single(j, Demand::One)).collect(),
            Demand::AtMostOne => std::iter::once(vec![Demand::Zero; k])
                .chain((0..k).map(|j| single(j, Demand::One)))
                .collect(),
            Demand::AtLeastOne => (1u32..1 << k)
                .map(|mask| {
                    (0..k)
                        .map(|j| if mask & (1 << j) != 0 { Demand::AtLeastOne } else { Demand::Zero })
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("{what} {value} exceeds the ceiling {limit}")]
    CeilingExceeded { what: &'static str, value: usize, limit: usize },
}

/// Upper limits on enumeration requests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ceilings {
    pub max_ops: usize,
    pub max_ctx: usize,
}

impl Default for Ceilings {
    fn default() -> Self {
        Ceilings { max_ops: 5, max_ctx: 6 }
    }
}

/// Environment variable overriding the operator-count ceiling.
pub const MAX_OPS_ENV: &str = "SUBSTRATE_MAX_OPS";

impl Ceilings {
    /// Defaults, with `SUBSTRATE_MAX_OPS` applied when it parses.
    pub fn from_env() -> Self {
        let mut c = Ceilings::default();
        if let Some(n) = env::var(MAX_OPS_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            c.max_ops = n;
        }
        c
    }

    pub fn check(&self, ctx: usize, ops: usize) -> Result<(), EnumerationError> {
        if ops > self.max_ops {
            return Err(EnumerationError::CeilingExceeded {
                what: "operator budget",
                value: ops,
                limit: self.max_ops,
            });
        }
        if ctx > self.max_ctx {
            return Err(EnumerationError::CeilingExceeded {
                what: "context size",
                value: ctx,
                limit: self.max_ctx,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBounds {
    pub max_ops: usize,
    pub ctx: usize,
    pub mode: Mode,
}

/// Shape of a tuple of terms sharing a prefix of their contexts.
///
/// Component `j` lives in context `ctxs[j]`; global position `i` is visible
/// to every component whose context reaches `i`, and the components jointly
/// have to meet `demands[i - 1]` there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleShape {
    pub ctxs: Vec<usize>,
    pub demands: Vec<Demand>,
}

impl TupleShape {
    /// Pairing of `k` components over the same context `n`.
    pub fn shared(mode: Mode, k: usize, n: usize) -> Self {
        TupleShape {
            ctxs: vec![n; k],
            demands: vec![Demand::of(mode); n],
        }
    }
}

type CacheKey = (usize, Vec<Demand>);

/// Memoizing generator for one signature and binder mode.
pub struct Enumerator<'s> {
    sig: &'s Signature,
    mode: Mode,
    cache: HashMap<CacheKey, Arc<Vec<Term>>>,
}

impl<'s> Enumerator<'s> {
    pub fn new(sig: &'s Signature, mode: Mode) -> Self {
        Enumerator {
            sig,
            mode,
            cache: HashMap::new(),
        }
    }

    pub fn signature(&self) -> &'s Signature {
        self.sig
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Upper bound on the variable leaves of a term with `ops` operator nodes.
    fn max_leaves(&self, ops: usize) -> usize {
        if ops == 0 {
            return 1;
        }
        let k = self.sig.max_args();
        if k == 0 {
            0
        } else {
            ops * (k - 1) + 1
        }
    }

    /// Terms with exactly `ops` operator nodes over `demands.len()`
    /// positions, meeting every demand. Generation order is deterministic
    /// but not sorted.
    pub fn exact(&mut self, ops: usize, demands: &[Demand]) -> Arc<Vec<Term>> {
        let key = (ops, demands.to_vec());
        if let Some(hit) = self.cache.get(&key) {
            return Arc::clone(hit);
        }
        let out = Arc::new(self.generate(ops, demands));
        self.cache.insert(key, Arc::clone(&out));
        out
    }

    fn generate(&mut self, ops: usize, demands: &[Demand]) -> Vec<Term> {
        let mut out = Vec::new();
        let must = demands.iter().filter(|d| d.forces_use()).count();
        if must > self.max_leaves(ops) {
            return out;
        }
        if ops == 0 {
            for (k, &d) in demands.iter().enumerate() {
                if d.admits(1) && demands.iter().enumerate().all(|(j, e)| j == k || e.admits(0)) {
                    out.push(Term::Var(k + 1));
                }
            }
            return out;
        }
        let binder = Demand::of(self.mode);
        let sig = self.sig;
        for (id, op) in sig.ops() {
            let k = op.args();
            if k == 0 {
                if ops == 1 && demands.iter().all(|d| d.admits(0)) {
                    out.push(Term::Op(id, vec![]));
                }
                continue;
            }
            for budgets in compositions(ops - 1, k, true) {
                let caps: Vec<usize> = budgets.iter().map(|&b| self.max_leaves(b)).collect();
                let visible = vec![(0..k).collect::<Vec<_>>(); demands.len()];
                for parts in distribute(demands, &visible, &caps) {
                    let mut lists = Vec::with_capacity(k);
                    for (j, mut part) in parts.into_iter().enumerate() {
                        part.extend(std::iter::repeat_n(binder, op.arity[j]));
                        let list = self.exact(budgets[j], &part);
                        if list.is_empty() {
                            break;
                        }
                        lists.push(list);
                    }
                    if lists.len() == k {
                        for_each_product(&lists, |args| out.push(Term::Op(id, args.to_vec())));
                    }
                }
            }
        }
        out
    }

    /// Mode-wellformed terms at `ctx` with exactly `ops` operator nodes.
    pub fn terms(&mut self, ctx: usize, ops: usize) -> Arc<Vec<Term>> {
        let demands = vec![Demand::of(self.mode); ctx];
        self.exact(ops, &demands)
    }

    /// Tuples of the given shape whose total operator count is at most
    /// `max_ops` (or exactly `max_ops` when `exact` is set), sorted by total
    /// size and then lexicographically.
    pub fn tuples(&mut self, shape: &TupleShape, max_ops: usize, exact: bool) -> Vec<Vec<Term>> {
        self.tuples_with_budgets(shape, &compositions(max_ops, shape.ctxs.len(), exact))
    }

    /// Tuples where component `j` has at most `max_ops` operator nodes.
    pub fn tuples_per_component(&mut self, shape: &TupleShape, max_ops: usize) -> Vec<Vec<Term>> {
        let k = shape.ctxs.len();
        let mut budgets = vec![vec![]];
        for _ in 0..k {
            budgets = budgets
                .into_iter()
                .flat_map(|b: Vec<usize>| {
                    (0..=max_ops).map(move |o| {
                        let mut b = b.clone();
                        b.push(o);
                        b
                    })
                })
                .collect();
        }
        self.tuples_with_budgets(shape, &budgets)
    }

    fn tuples_with_budgets(&mut self, shape: &TupleShape, all_budgets: &[Vec<usize>]) -> Vec<Vec<Term>> {
        let k = shape.ctxs.len();
        let visible: Vec<Vec<usize>> = (1..=shape.demands.len())
            .map(|i| (0..k).filter(|&j| shape.ctxs[j] >= i).collect())
            .collect();
        let mut out = Vec::new();
        for budgets in all_budgets {
            let caps: Vec<usize> = budgets.iter().map(|&b| self.max_leaves(b)).collect();
            for parts in distribute(&shape.demands, &visible, &caps) {
                let mut lists = Vec::with_capacity(k);
                for (j, part) in parts.iter().enumerate() {
                    let list = self.exact(budgets[j], part);
                    if list.is_empty() {
                        break;
                    }
                    lists.push(list);
                }
                if lists.len() == k {
                    for_each_product(&lists, |ts| out.push(ts.to_vec()));
                }
            }
        }
        sort_tuples(&mut out);
        out
    }
}

pub fn sort_tuples(tuples: &mut [Vec<Term>]) {
    tuples.sort_by_cached_key(|ts| (ts.iter().map(Term::ops).sum::<usize>(), ts.clone()));
}

/// Sequences of `k` naturals summing to `total` (or at most `total` when
/// `exact` is false), in lexicographic order.
pub fn compositions(total: usize, k: usize, exact: bool) -> Vec<Vec<usize>> {
    fn go(left: usize, k: usize, exact: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            if !exact || left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in 0..=left {
            cur.push(x);
            go(left - x, k - 1, exact, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, k, exact, &mut Vec::new(), &mut out);
    out
}

/// Split each position's demand among the parts that can see it. Returns,
/// per alternative, one demand vector per part listing the visible
/// positions in order. `caps[j]` bounds how many positions part `j` may be
/// forced to use.
fn distribute(demands: &[Demand], visible: &[Vec<usize>], caps: &[usize]) -> Vec<Vec<Vec<Demand>>> {
    fn go(
        i: usize,
        demands: &[Demand],
        visible: &[Vec<usize>],
        caps: &[usize],
        used: &mut Vec<usize>,
        cur: &mut Vec<Vec<Demand>>,
        out: &mut Vec<Vec<Vec<Demand>>>,
    ) {
        if i == demands.len() {
            out.push(cur.clone());
            return;
        }
        let parts = &visible[i];
        for choice in demands[i].splits(parts.len()) {
            let ok = parts.iter().zip(&choice).all(|(&j, d)| !d.forces_use() || used[j] < caps[j]);
            if !ok {
                continue;
            }
            for (&j, &d) in parts.iter().zip(&choice) {
                if d.forces_use() {
                    used[j] += 1;
                }
                cur[j].push(d);
            }
            go(i + 1, demands, visible, caps, used, cur, out);
            for (&j, &d) in parts.iter().zip(&choice) {
                if d.forces_use() {
                    used[j] -= 1;
                }
                cur[j].pop();
            }
        }
    }
    let k = caps.len();
    let mut out = Vec::new();
    go(0, demands, visible, caps, &mut vec![0; k], &mut vec![Vec::new(); k], &mut out);
    out
}

pub(crate) fn for_each_product(lists: &[Arc<Vec<Term>>], mut f: impl FnMut(&[Term])) {
    let k = lists.len();
    let mut idx = vec![0usize; k];
    let mut cur: Vec<Term> = lists.iter().map(|l| l[0].clone()).collect();
    loop {
        f(&cur);
        let mut j = k;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < lists[j].len() {
                cur[j] = lists[j][idx[j]].clone();
                break;
            }
            idx[j] = 0;
            cur[j] = lists[j][0].clone();
        }
    }
}

/// Canonical order: fewer operator nodes first, then structural order
/// (variables before operators, operators by declaration order, arguments
/// lexicographically).
pub fn sort_terms(terms: &mut [Term]) {
    terms.sort_by_cached_key(|t| (t.ops(), t.clone()));
}

/// Mode-wellformed terms at `bounds.ctx` with at most `bounds.max_ops`
/// operator nodes, in canonical order.
pub fn enumerate_terms(sig: &Signature, bounds: EnumerationBounds, ceilings: Ceilings) -> Result<Vec<Term>, EnumerationError> {
    ceilings.check(bounds.ctx, bounds.max_ops)?;
    let mut e = Enumerator::new(sig, bounds.mode);
    let mut out: Vec<Term> = (0..=bounds.max_ops).flat_map(|s| e.terms(bounds.ctx, s).as_ref().clone()).collect();
    sort_terms(&mut out);
    Ok(out)
}

/// Mode-valid pairings over `bounds.ctx`, each component with at most
/// `bounds.max_ops` operator nodes.
pub fn enumerate_pairs(sig: &Signature, bounds: EnumerationBounds, ceilings: Ceilings) -> Result<Vec<(Term, Term)>, EnumerationError> {
    ceilings.check(bounds.ctx, bounds.max_ops)?;
    let mut e = Enumerator::new(sig, bounds.mode);
    let shape = TupleShape::shared(bounds.mode, 2, bounds.ctx);
    Ok(e.tuples_per_component(&shape, bounds.max_ops)
        .into_iter()
        .map(|mut v| {
            let b = v.pop().unwrap();
            let a = v.pop().unwrap();
            (a, b)
        })
        .collect())
}

/// `counts[n][s]`: number of mode-wellformed terms at context `n` with
/// exactly `s` operator nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub mode: Mode,
    pub counts: Vec<Vec<u64>>,
}

impl CountTable {
    pub fn get(&self, n: usize, s: usize) -> u64 {
        self.counts[n][s]
    }

    /// `n,s,count` lines, with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,s,count\n");
        for (n, row) in self.counts.iter().enumerate() {
            for (s, c) in row.iter().enumerate() {
                let _ = writeln!(out, "{n},{s},{c}");
            }
        }
        out
    }

    /// Aligned table with one row per context size and one column per size.
    pub fn to_text(&self) -> String {
        let cols = self.counts.first().map_or(0, Vec::len);
        let width = self.counts.iter().flatten().map(|c| c.to_string().len()).max().unwrap_or(1).max(3);
        let mut out = format!("{:>4}", "n\\s");
        for s in 0..cols {
            let _ = write!(out, " {:>width$}", s);
        }
        out.push('\n');
        for (n, row) in self.counts.iter().enumerate() {
            let _ = write!(out, "{:>4}", n);
            for c in row {
                let _ = write!(out, " {:>width$}", c);
            }
            out.push('\n');
        }
        out
    }
}

pub fn count_table(sig: &Signature, mode: Mode, max_n: usize, max_ops: usize, ceilings: Ceilings) -> Result<CountTable, EnumerationError> {
    ceilings.check(max_n, max_ops)?;
    let mut e = Enumerator::new(sig, mode);
    let counts = (0..=max_n).map(|n| (0..=max_ops).map(|s| e.terms(n, s).len() as u64).collect()).collect();
    Ok(CountTable { mode, counts })
}

/// Every scope-correct term at `ctx` with exactly `ops` operator nodes,
/// ignoring modes entirely.
pub fn raw_terms(sig: &Signature, ctx: usize, ops: usize) -> Vec<Term> {
    let mut out = Vec::new();
    if ops == 0 {
        out.extend((1..=ctx).map(Term::Var));
        return out;
    }
    for (id, op) in sig.ops() {
        let k = op.args();
        if k == 0 {
            if ops == 1 {
                out.push(Term::Op(id, vec![]));
            }
            continue;
        }
        for budgets in compositions(ops - 1, k, true) {
            let lists: Vec<Arc<Vec<Term>>> = budgets
                .iter()
                .zip(&op.arity)
                .map(|(&b, &w)| Arc::new(raw_terms(sig, ctx + w, b)))
                .collect();
            if lists.iter().any(|l| l.is_empty()) {
                continue;
            }
            for_each_product(&lists, |args| out.push(Term::Op(id, args.to_vec())));
        }
    }
    out
}

/// Generate-and-filter reference for [`Enumerator::terms`], sorted.
pub fn naive_terms(sig: &Signature, mode: Mode, ctx: usize, ops: usize) -> Vec<Term> {
    let mut out: Vec<Term> = raw_terms(sig, ctx, ops)
        .into_iter()
        .filter(|t| check_wellformed(sig, mode, t, ctx).is_ok())
        .collect();
    sort_terms(&mut out);
    out
}

/// Generate-and-filter reference for tuples: all products of component
/// candidates, kept when the joint occurrence counts meet the demands.
pub fn naive_tuples(sig: &Signature, mode: Mode, shape: &TupleShape, max_ops: usize, exact: bool) -> Vec<Vec<Term>> {
    let k = shape.ctxs.len();
    let mut out = Vec::new();
    for budgets in compositions(max_ops, k, exact) {
        let lists: Vec<Arc<Vec<Term>>> = budgets
            .iter()
            .zip(&shape.ctxs)
            .map(|(&b, &c)| {
                Arc::new(
                    raw_terms(sig, c, b)
                        .into_iter()
                        .filter(|t| check_component(sig, mode, t, c).is_ok())
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        if lists.iter().any(|l| l.is_empty()) {
            continue;
        }
        for_each_product(&lists, |ts| {
            let ok = shape.demands.iter().enumerate().all(|(i, d)| {
                let total: usize = ts
                    .iter()
                    .zip(&shape.ctxs)
                    .filter(|(_, &c)| c > i)
                    .map(|(t, _)| t.occurrences(i + 1))
                    .sum();
                d.admits(total)
            });
            if ok {
                out.push(ts.to_vec());
            }
        });
    }
    sort_tuples(&mut out);
    out
}
