//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Bounds, seeds and thresholds are the constants below.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use substrate_core::contexts::{enumerate_renamings, generated_closure, Mode};
use substrate_core::enumeration::{count_table, naive_terms, Ceilings};
use substrate_core::laws::{
    all_pass, check_extended_substitution_lemma, mutants, run_suite, ApplicabilityMatrix, LawBounds, LawChecker, LawId, LawReport,
};
use substrate_core::Signature;

const MAX_CTX: usize = 3;
const MAX_OPS: usize = 3;
const SUITE_TIME_LIMIT: Duration = Duration::from_secs(60);
const MIN_ORACLE_INSTANCES: usize = 1000;

const RANDOM_SIGNATURES: usize = 5;
const SEED: u64 = 0x5eed;
const MAX_DRAWS: usize = 5000;
const MAX_OPERATORS: usize = 3;
const MAX_ARGS: usize = 3;
const MAX_WIDTH: usize = 2;
/// Tractability cutoff: cartesian terms with exactly `MAX_OPS` operators at
/// context `MAX_CTX`. lam/app has 962.
const MAX_CARTESIAN_TERMS: u64 = 3000;

const CLOSURE_SIZE: usize = 4;

/// (ctx, ops, mode, count) for lam/app, exact operator counts.
const COUNT_FIXTURES: &[(usize, usize, Mode, u64)] = &[
    (1, 1, Mode::Cartesian, 3),
    (1, 1, Mode::Affine, 2),
    (1, 1, Mode::Relevant, 1),
    (1, 1, Mode::Linear, 0),
    (2, 1, Mode::Linear, 2),
    (0, 1, Mode::Cartesian, 1),
    (0, 1, Mode::Linear, 1),
    (0, 1, Mode::Affine, 1),
    (0, 1, Mode::Relevant, 1),
];

struct Line {
    criterion: usize,
    pass: bool,
    detail: String,
}

fn bounds() -> LawBounds {
    LawBounds::new(MAX_CTX, MAX_OPS)
}

fn report(reports: &[LawReport], law: LawId) -> Option<&LawReport> {
    reports.iter().find(|r| r.law == law)
}

/// Cartesian terms at `n` with exactly `s` operators, counted without
/// building them.
fn cartesian_count(sig: &Signature, n: usize, s: usize) -> u64 {
    fn args(sig: &Signature, widths: &[usize], n: usize, s: usize) -> u64 {
        match widths.split_first() {
            None => u64::from(s == 0),
            Some((&w, rest)) => (0..=s).map(|a| cartesian_count(sig, n + w, a) * args(sig, rest, n, s - a)).sum(),
        }
    }
    if s == 0 {
        return n as u64;
    }
    sig.ops().map(|(_, op)| args(sig, &op.arity, n, s - 1)).sum()
}

fn draw(rng: &mut ChaCha8Rng) -> Signature {
    let k = rng.gen_range(1..=MAX_OPERATORS);
    let ops: Vec<(String, Vec<usize>)> = (0..k)
        .map(|i| {
            let args = rng.gen_range(0..=MAX_ARGS);
            (format!("op{i}"), (0..args).map(|_| rng.gen_range(0..=MAX_WIDTH)).collect())
        })
        .collect();
    Signature::from_ops(ops).unwrap()
}

fn arities(sig: &Signature) -> Vec<Vec<usize>> {
    let mut a: Vec<_> = sig.ops().map(|(_, op)| op.arity.clone()).collect();
    a.sort();
    a
}

/// Every applicable axiom has an instance with an operator in it.
fn nondegenerate(mode: Mode, reports: &[LawReport]) -> bool {
    ApplicabilityMatrix::axioms(mode)
        .iter()
        .all(|&l| report(reports, l).is_some_and(|r| r.nondegenerate > 0))
}

/// Signatures drawn until `RANDOM_SIGNATURES` are accepted. A draw is
/// rejected when it repeats an earlier one or lam/app, when it exceeds the
/// tractability cutoff, or when some applicable axiom has only
/// operator-free instances. Pass or fail never decides rejection.
fn random_signatures() -> (Vec<Signature>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut seen = BTreeSet::from([arities(&Signature::lambda())]);
    let mut out = Vec::new();
    let mut draws = 0;
    while out.len() < RANDOM_SIGNATURES && draws < MAX_DRAWS {
        draws += 1;
        let sig = draw(&mut rng);
        if !seen.insert(arities(&sig)) || cartesian_count(&sig, MAX_CTX, MAX_OPS) > MAX_CARTESIAN_TERMS {
            continue;
        }
        let usable = Mode::ALL.iter().all(|&mode| {
            let checker = LawChecker::new(&sig, mode, bounds()).unwrap();
            let reports: Vec<_> = ApplicabilityMatrix::axioms(mode).iter().map(|&l| checker.axiom(l).unwrap()).collect();
            nondegenerate(mode, &reports)
        });
        if usable {
            out.push(sig);
        }
    }
    (out, draws)
}

fn axiom_suites(lambda: &[(Mode, Vec<LawReport>, Duration)]) -> Line {
    let (sigs, draws) = random_signatures();
    let mut pass = sigs.len() == RANDOM_SIGNATURES;
    let mut parts = Vec::new();
    let mut check = |name: String, runs: &[(Mode, Vec<LawReport>, Duration)]| {
        let elapsed: Duration = runs.iter().map(|r| r.2).sum();
        let mut ok = elapsed < SUITE_TIME_LIMIT;
        let mut pairs = 0;
        for (mode, reports, _) in runs {
            for &law in ApplicabilityMatrix::axioms(*mode) {
                pairs += 1;
                ok &= report(reports, law).is_some_and(|r| r.passed() && r.instances > 0 && r.nondegenerate > 0);
            }
        }
        pass &= ok;
        parts.push(format!(
            "{name} {pairs} pairs {:.1}s {}",
            elapsed.as_secs_f64(),
            if ok { "ok" } else { "FAILED" }
        ));
    };
    check("lam/app".into(), lambda);
    for sig in &sigs {
        let runs: Vec<_> = Mode::ALL.iter().map(|&m| timed_suite(sig, m)).collect();
        check(format!("[{}]", sig.to_string().trim().replace('\n', "; ")), &runs);
    }
    Line {
        criterion: 1,
        pass,
        detail: format!("axiom suites, {} random signatures from {draws} draws: {}", sigs.len(), parts.join(", ")),
    }
}

fn timed_suite(sig: &Signature, mode: Mode) -> (Mode, Vec<LawReport>, Duration) {
    let start = Instant::now();
    let reports = run_suite(sig, mode, bounds()).unwrap();
    (mode, reports, start.elapsed())
}

fn per_law(criterion: usize, what: &str, lambda: &[(Mode, Vec<LawReport>, Duration)], law: LawId, min_total: usize) -> Line {
    let mut total = 0;
    let mut pass = true;
    let mut parts = Vec::new();
    for (mode, reports, _) in lambda {
        let r = report(reports, law).unwrap();
        total += r.instances;
        pass &= r.passed() && r.instances > 0;
        parts.push(format!("{mode} {}/{} failing", r.failure_count, r.instances));
    }
    pass &= total >= min_total;
    Line {
        criterion,
        pass,
        detail: format!("{what}: {total} instances (need {min_total}), {}", parts.join(", ")),
    }
}

fn lemma_equivalence() -> Line {
    let sig = Signature::lambda();
    let mut pass = true;
    let mut parts = Vec::new();
    for mode in [Mode::Linear, Mode::Affine, Mode::Relevant] {
        let eq = check_extended_substitution_lemma(&sig, mode, bounds()).unwrap();
        let ok = eq.hypotheses && eq.equivalent && eq.axioms_pass && eq.lemma.passed();
        // A substitution that breaks associativity must fail both sides.
        let broken = LawChecker::new(&sig, mode, bounds())
            .unwrap()
            .with_substitution(&mutants::RootSwap)
            .extended_lemma_equivalence()
            .unwrap();
        let broken_ok = broken.hypotheses && broken.equivalent && !broken.axioms_pass;
        pass &= ok && broken_ok;
        parts.push(format!(
            "{mode} {} instances {}, root-swap mutant {}",
            eq.lemma.instances,
            if ok { "both pass" } else { "MISMATCH" },
            if broken_ok { "both fail" } else { "MISMATCH" }
        ));
    }
    Line {
        criterion: 4,
        pass,
        detail: format!("extended lemma iff axioms: {}", parts.join(", ")),
    }
}

fn freeness() -> Line {
    let mut pass = true;
    let mut parts = Vec::new();
    for mode in Mode::ALL {
        let closure = generated_closure(mode, CLOSURE_SIZE).unwrap();
        let mut all = BTreeSet::new();
        for m in 0..=CLOSURE_SIZE {
            for n in 0..=CLOSURE_SIZE {
                all.extend(enumerate_renamings(m, n, mode).unwrap());
            }
        }
        pass &= closure == all;
        parts.push(format!("{mode} {}/{}", closure.len(), all.len()));
    }
    Line {
        criterion: 5,
        pass,
        detail: format!("generated closure = enumeration up to {CLOSURE_SIZE}: {}", parts.join(", ")),
    }
}

fn count_fixtures() -> Line {
    let sig = Signature::lambda();
    let mut pass = true;
    let mut parts = Vec::new();
    for &(n, s, mode, expected) in COUNT_FIXTURES {
        let naive = naive_terms(&sig, mode, n, s).len() as u64;
        let table = count_table(&sig, mode, n, s, Ceilings::default()).unwrap().get(n, s);
        let ok = naive == expected && table == expected;
        pass &= ok;
        parts.push(format!("({n},{s},{mode})={table}{}", if ok { "" } else { " MISMATCH" }));
    }
    Line {
        criterion: 6,
        pass,
        detail: format!("count fixtures against filter and frozen values: {}", parts.join(" ")),
    }
}

fn cli_runs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut runs: Vec<Vec<String>> = Vec::new();
    for mode in Mode::ALL {
        let base = vec!["check-laws".to_string(), "lam.sig".into(), "--mode".into(), mode.to_string()];
        runs.push(base.clone());
        runs.push([base, vec!["--json".into()]].concat());
        runs.push(
            [
                "enumerate",
                "lam.sig",
                "--mode",
                mode.name(),
                "--ctx",
                "3",
                "--ops",
                "3",
                "--table",
                "csv",
            ]
            .map(String::from)
            .to_vec(),
        );
    }
    runs.into_iter()
        .map(|args| {
            let out = Command::new(env!("CARGO_BIN_EXE_substrate"))
                .args(&args)
                .current_dir(dir)
                .output()
                .unwrap();
            let mut bytes = out.stdout;
            bytes.extend(format!("exit {:?}\n", out.status.code()).into_bytes());
            (args.join(" "), bytes)
        })
        .collect()
}

fn determinism() -> Line {
    let dir: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let first = cli_runs(&dir);
    let second = cli_runs(&dir);
    let differing: Vec<_> = first.iter().zip(&second).filter(|(a, b)| a.1 != b.1).map(|(a, _)| a.0.clone()).collect();
    let bytes: usize = first.iter().map(|r| r.1.len()).sum();
    let clean = first.iter().all(|r| r.1.ends_with(b"exit Some(0)\n"));
    Line {
        criterion: 8,
        pass: differing.is_empty() && clean,
        detail: format!(
            "{} CLI runs repeated, {bytes} bytes, {} differing{}",
            first.len(),
            differing.len(),
            if clean { "" } else { ", nonzero exit" }
        ),
    }
}

fn main() -> ExitCode {
    let lambda_sig = Signature::lambda();
    let lambda: Vec<_> = Mode::ALL.iter().map(|&m| timed_suite(&lambda_sig, m)).collect();
    let mut lines = vec![
        axiom_suites(&lambda),
        per_law(2, "oracle agreement", &lambda, LawId::Oracle, MIN_ORACLE_INSTANCES),
        per_law(3, "product-rule bijections", &lambda, LawId::Leibniz, 1),
        lemma_equivalence(),
        freeness(),
        count_fixtures(),
        per_law(7, "initiality", &lambda, LawId::Initiality, 1),
        determinism(),
    ];
    lines.sort_by_key(|l| l.criterion);
    let lambda_ok = lambda.iter().all(|r| all_pass(&r.1));
    for l in &lines {
        println!("criterion {}: {} {}", l.criterion, if l.pass { "PASS" } else { "FAIL" }, l.detail);
    }
    println!("lam/app full suite: {}", if lambda_ok { "all laws pass" } else { "FAILURES" });
    if lines.iter().all(|l| l.pass) && lambda_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
