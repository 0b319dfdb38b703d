use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::sample::Index;

use substrate_core::contexts::{enumerate_renamings, Mode, Renaming};
use substrate_core::enumeration::{enumerate_terms, Ceilings, EnumerationBounds};
use substrate_core::fold::{fold, SizeAlgebra, TermAlgebra};
use substrate_core::sexpr::{parse_term, print_term};
use substrate_core::substitution::oracle::oracle_substitute;
use substrate_core::substitution::{check_shared_problem, compose_at, replace_shared, replace_split};
use substrate_core::term::{check_wellformed, rename, swap_last, Term};
use substrate_core::Signature;

const MODES: [Mode; 4] = [Mode::Cartesian, Mode::Linear, Mode::Affine, Mode::Relevant];

fn terms(mode: Mode, ctx: usize, ops: usize) -> Vec<Term> {
    let bounds = EnumerationBounds { max_ops: ops, ctx, mode };
    enumerate_terms(&Signature::lambda(), bounds, Ceilings::default()).unwrap()
}

fn pick<T: Clone>(items: &[T], ix: &Index) -> Option<T> {
    (!items.is_empty()).then(|| items[ix.index(items.len())].clone())
}

fn mode() -> impl Strategy<Value = Mode> {
    prop::sample::select(MODES.to_vec())
}

fn renaming(mode: Mode, m: usize, n: usize, ix: &Index) -> Option<Renaming> {
    pick(&enumerate_renamings(m, n, mode).unwrap(), ix)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rename_is_functorial(mode in mode(), m in 0..=3usize, k in 0..=3usize, l in 0..=3usize, ops in 0..=3usize,
                            it in any::<Index>(), i1 in any::<Index>(), i2 in any::<Index>()) {
        let sig = Signature::lambda();
        let t = pick(&terms(mode, m, ops), &it);
        let r1 = renaming(mode, m, k, &i1);
        let r2 = renaming(mode, k, l, &i2);
        prop_assume!(t.is_some() && r1.is_some() && r2.is_some());
        let (t, r1, r2) = (t.unwrap(), r1.unwrap(), r2.unwrap());
        let once = rename(&sig, &t, m, &r2.compose(&r1).unwrap()).unwrap();
        let twice = rename(&sig, &rename(&sig, &t, m, &r1).unwrap(), k, &r2).unwrap();
        prop_assert_eq!(&once, &twice);
        check_wellformed(&sig, mode, &once, l).unwrap();
        prop_assert_eq!(rename(&sig, &t, m, &Renaming::identity(m, mode)).unwrap(), t);
    }

    #[test]
    fn split_substitution_preserves_mode_and_counts_copies(mode in mode(), p in 0..=2usize, q in 0..=3usize,
                                                           b_ops in 0..=3usize, u_ops in 0..=2usize,
                                                           ib in any::<Index>(), iu in any::<Index>()) {
        let sig = Signature::lambda();
        let body = pick(&terms(mode, p + 1, b_ops), &ib);
        let payload = pick(&terms(mode, q, u_ops), &iu);
        prop_assume!(body.is_some() && payload.is_some());
        let (body, payload) = (body.unwrap(), payload.unwrap());
        let r = replace_split(&sig, mode, &body, p, &payload, q).unwrap();
        check_wellformed(&sig, mode, &r, p + q).unwrap();
        let copies = body.occurrences(p + 1);
        prop_assert_eq!(r.ops(), body.ops() + copies * payload.ops());
        match mode {
            Mode::Linear => prop_assert_eq!(copies, 1),
            Mode::Affine => prop_assert!(copies <= 1),
            Mode::Relevant => prop_assert!(copies >= 1),
            Mode::Cartesian => {}
        }
        prop_assert_eq!(oracle_substitute(&sig, mode, &body, p, &payload, q).unwrap(), r);
    }

    #[test]
    fn shared_substitution_preserves_mode(relevant in any::<bool>(), n in 0..=3usize, b_ops in 0..=3usize, u_ops in 0..=2usize,
                                          ib in any::<Index>(), iu in any::<Index>()) {
        let sig = Signature::lambda();
        let mode = if relevant { Mode::Relevant } else { Mode::Cartesian };
        // Relevant payloads need only cover what the body leaves uncovered.
        let body = pick(&terms(Mode::Cartesian, n + 1, b_ops), &ib);
        let payload = pick(&terms(Mode::Cartesian, n, u_ops), &iu);
        prop_assume!(body.is_some() && payload.is_some());
        let (body, payload) = (body.unwrap(), payload.unwrap());
        prop_assume!(check_shared_problem(&sig, mode, &body, n, &payload).is_ok());
        let r = replace_shared(&sig, mode, &body, n, &payload).unwrap();
        check_wellformed(&sig, mode, &r, n).unwrap();
    }

    #[test]
    fn composition_preserves_mode(mode in mode(), n in 1..=3usize, q in 0..=2usize, t_ops in 0..=2usize, u_ops in 0..=2usize,
                                  i in 1..=3usize, it in any::<Index>(), iu in any::<Index>()) {
        prop_assume!(i <= n);
        let sig = Signature::lambda();
        let t = pick(&terms(mode, n, t_ops), &it);
        let u = pick(&terms(mode, q, u_ops), &iu);
        prop_assume!(t.is_some() && u.is_some());
        let (t, u) = (t.unwrap(), u.unwrap());
        let r = compose_at(&sig, mode, &t, n, i, &u, q).unwrap();
        check_wellformed(&sig, mode, &r, n - 1 + q).unwrap();
        prop_assert_eq!(r.ops(), t.ops() + t.occurrences(i) * u.ops());
    }

    #[test]
    fn substitution_is_natural(mode in mode(), p in 0..=2usize, q in 0..=2usize, p2 in 0..=2usize, q2 in 0..=2usize,
                               b_ops in 0..=2usize, u_ops in 0..=2usize,
                               ib in any::<Index>(), iu in any::<Index>(), ir in any::<Index>(), is in any::<Index>()) {
        let sig = Signature::lambda();
        let body = pick(&terms(mode, p + 1, b_ops), &ib);
        let payload = pick(&terms(mode, q, u_ops), &iu);
        let rb = renaming(mode, p, p2, &ir);
        let rp = renaming(mode, q, q2, &is);
        prop_assume!(body.is_some() && payload.is_some() && rb.is_some() && rp.is_some());
        let (body, payload, rb, rp) = (body.unwrap(), payload.unwrap(), rb.unwrap(), rp.unwrap());
        let lhs = rename(&sig, &replace_split(&sig, mode, &body, p, &payload, q).unwrap(), p + q, &rb.sum(&rp).unwrap()).unwrap();
        let body2 = rename(&sig, &body, p + 1, &rb.extend(1)).unwrap();
        let payload2 = rename(&sig, &payload, q, &rp).unwrap();
        let rhs = replace_split(&sig, mode, &body2, p2, &payload2, q2).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unit_laws(mode in mode(), n in 0..=3usize, ops in 0..=3usize, it in any::<Index>()) {
        let sig = Signature::lambda();
        let t = pick(&terms(mode, n, ops), &it);
        prop_assume!(t.is_some());
        let t = t.unwrap();
        prop_assert_eq!(&replace_split(&sig, mode, &Term::Var(1), 0, &t, n).unwrap(), &t);
        let body = pick(&terms(mode, n + 1, ops), &it);
        if let Some(body) = body {
            prop_assert_eq!(replace_split(&sig, mode, &body, n, &Term::Var(1), 1).unwrap(), body);
        }
    }

    #[test]
    fn swap_last_is_an_involution(mode in mode(), n in 2..=3usize, ops in 0..=3usize, it in any::<Index>()) {
        let sig = Signature::lambda();
        let t = pick(&terms(mode, n, ops), &it);
        prop_assume!(t.is_some());
        let t = t.unwrap();
        let once = swap_last(&sig, mode, &t, n).unwrap();
        check_wellformed(&sig, mode, &once, n).unwrap();
        prop_assert_eq!(swap_last(&sig, mode, &once, n).unwrap(), t);
    }

    #[test]
    fn printing_and_folding_round_trip(mode in mode(), n in 0..=3usize, ops in 0..=3usize, it in any::<Index>()) {
        let sig = Signature::lambda();
        let t = pick(&terms(mode, n, ops), &it);
        prop_assume!(t.is_some());
        let t = t.unwrap();
        prop_assert_eq!(&parse_term(&sig, &print_term(&sig, &t)).unwrap(), &t);
        prop_assert_eq!(&fold(&sig, &TermAlgebra, &t, n).unwrap(), &t);
        prop_assert_eq!(fold(&sig, &SizeAlgebra, &t, n).unwrap(), t.ops());
    }
}

#[test]
fn linear_sets_are_permutation_invariant() {
    let sig = Signature::lambda();
    for n in 0..=3 {
        for s in 0..=3 {
            let set: BTreeSet<Term> = terms(Mode::Linear, n, s).into_iter().filter(|t| t.ops() == s).collect();
            for rho in enumerate_renamings(n, n, Mode::Linear).unwrap() {
                let image: BTreeSet<Term> = set.iter().map(|t| rename(&sig, t, n, &rho).unwrap()).collect();
                assert_eq!(image, set, "n={n} s={s} rho={rho}");
            }
        }
    }
}

#[test]
fn mode_sets_are_nested() {
    for n in 0..=3 {
        for s in 0..=3 {
            let set = |m| terms(m, n, s).into_iter().collect::<BTreeSet<Term>>();
            let (c, l, a, r) = (set(Mode::Cartesian), set(Mode::Linear), set(Mode::Affine), set(Mode::Relevant));
            assert!(l.is_subset(&a) && l.is_subset(&r), "n={n} s={s}");
            assert!(a.is_subset(&c) && r.is_subset(&c), "n={n} s={s}");
            assert_eq!(l, &a & &r, "n={n} s={s}");
        }
    }
}
