use substrate_core::contexts::{enumerate_renamings, generated_closure, Mode};
use substrate_core::laws::{
    all_pass, check_axiom, check_extended_substitution_lemma, check_initiality, mutants, run_suite, ApplicabilityMatrix, LawBounds, LawChecker,
    LawError, LawId, Status,
};
use substrate_core::Signature;

const MODES: [Mode; 4] = [Mode::Cartesian, Mode::Linear, Mode::Affine, Mode::Relevant];

fn small() -> LawBounds {
    LawBounds::new(2, 2)
}

#[test]
fn cartesian_f_at_two() {
    let r = check_axiom(&Signature::lambda(), Mode::Cartesian, LawId::F, small()).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert!(r.nondegenerate > 0);
}

#[test]
fn linear_e_is_inapplicable() {
    let e = check_axiom(&Signature::lambda(), Mode::Linear, LawId::E, small()).unwrap_err();
    assert!(matches!(e, LawError::Inapplicable { .. }));
    assert!(e.to_string().contains("does not apply"));
}

#[test]
fn constant_signature_suite_passes() {
    let sig = Signature::parse("c: ()\nlam: (1)\napp: (0,0)\n").unwrap();
    for mode in MODES {
        let reports = run_suite(&sig, mode, small()).unwrap();
        assert!(all_pass(&reports), "{mode}: {reports:?}");
        for law in ApplicabilityMatrix::axioms(mode) {
            let r = reports.iter().find(|r| r.law == *law).unwrap();
            assert!(r.instances > 0 && r.nondegenerate > 0, "{mode} {law}");
        }
    }
}

#[test]
fn empty_signature_is_variables_only() {
    let sig = Signature::empty();
    for mode in MODES {
        let reports = run_suite(&sig, mode, small()).unwrap();
        assert!(all_pass(&reports), "{mode}");
        for law in [LawId::A, LawId::B] {
            let r = reports.iter().find(|r| r.law == law).unwrap();
            assert_eq!(r.status, Status::Pass);
            assert_eq!(r.nondegenerate, 0);
        }
    }
}

#[test]
fn extended_lemma_agrees_with_axioms() {
    let sig = Signature::lambda();
    for mode in [Mode::Linear, Mode::Affine, Mode::Relevant] {
        let eq = check_extended_substitution_lemma(&sig, mode, small()).unwrap();
        assert!(eq.hypotheses && eq.axioms_pass && eq.equivalent, "{mode}");
        assert_eq!(eq.lemma.status, Status::Pass);
        assert!(eq.lemma.nondegenerate > 0);
    }
}

#[test]
fn broken_substitution_fails_both_sides() {
    // Swapping the arguments of the root node passes (a), (b) and naturality
    // but breaks associativity; the lemma must notice too.
    let sig = Signature::lambda();
    for mode in [Mode::Linear, Mode::Affine, Mode::Relevant] {
        let c = LawChecker::new(&sig, mode, LawBounds::new(3, 3))
            .unwrap()
            .with_substitution(&mutants::RootSwap);
        let eq = c.extended_lemma_equivalence().unwrap();
        assert!(eq.hypotheses, "{mode}");
        assert!(!eq.axioms_pass, "{mode}");
        assert!(!eq.lemma.passed(), "{mode}");
        assert!(eq.equivalent, "{mode}");
    }
}

#[test]
fn unnatural_substitution_is_outside_the_equivalence() {
    let sig = Signature::lambda();
    for mode in [Mode::Linear, Mode::Affine, Mode::Relevant] {
        let c = LawChecker::new(&sig, mode, LawBounds::new(3, 3))
            .unwrap()
            .with_substitution(&mutants::BlockTwist);
        let eq = c.extended_lemma_equivalence().unwrap();
        assert!(!eq.hypotheses, "{mode}");
        assert!(!eq.axioms_pass, "{mode}");
        assert!(!c.naturality().unwrap().passed(), "{mode}");
    }
}

#[test]
fn initiality_for_every_mode() {
    for mode in MODES {
        let r = check_initiality(&Signature::lambda(), mode, small()).unwrap();
        assert_eq!(r.status, Status::Pass, "{mode}");
        assert!(r.instances > 0);
    }
}

#[test]
fn closure_is_free_up_to_four() {
    for mode in MODES {
        let closure = generated_closure(mode, 4).unwrap();
        let mut all = std::collections::BTreeSet::new();
        for m in 0..=4 {
            for n in 0..=4 {
                all.extend(enumerate_renamings(m, n, mode).unwrap());
            }
        }
        assert_eq!(closure, all, "{mode}");
    }
}

#[test]
fn composition_is_associative_and_unital() {
    use substrate_core::contexts::Renaming;
    for mode in MODES {
        for a in 0..=3 {
            for b in 0..=3 {
                for c in 0..=3 {
                    for d in 0..=3 {
                        let (fs, gs, hs) = (
                            enumerate_renamings(a, b, mode).unwrap(),
                            enumerate_renamings(b, c, mode).unwrap(),
                            enumerate_renamings(c, d, mode).unwrap(),
                        );
                        for f in &fs {
                            assert_eq!(&Renaming::identity(b, mode).compose(f).unwrap(), f);
                            assert_eq!(&f.compose(&Renaming::identity(a, mode)).unwrap(), f);
                            for g in &gs {
                                let gf = g.compose(f).unwrap();
                                for h in &hs {
                                    assert_eq!(h.compose(&gf).unwrap(), h.compose(g).unwrap().compose(f).unwrap());
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
