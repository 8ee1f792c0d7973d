//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! The lemma suite at default configuration is run once and shared by the
//! criteria that read it.

use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use lambda_delta::ast::{alpha_eq, Term, Theta, ThetaEntry, Type};
use lambda_delta::hereditary::{ctype, hsubst, shsubst};
use lamdelta::gen::{gen_context, gen_term, gen_type, GenConfig};
use lamdelta::suite::{run_suite, SuiteResult};
use lamdelta::syntax::{parse_term, print_term};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn b() -> Type {
    Type::base("b")
}

fn bb() -> Type {
    Type::arrow(b(), b())
}

fn suite() -> &'static (SuiteResult, Duration) {
    static SUITE: OnceLock<(SuiteResult, Duration)> = OnceLock::new();
    SUITE.get_or_init(|| {
        let cfg = GenConfig::default();
        assert_eq!(cfg.seed, 0xC0FFEE);
        assert_eq!(cfg.max_term_size, 30);
        assert_eq!(cfg.max_type_depth, 3);
        let start = Instant::now();
        let result = run_suite(&cfg, 500);
        (result, start.elapsed())
    })
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lamdelta"))
}

#[test]
fn criterion_1_golden_beta_example() {
    // [\f:(b->b). f / x]^{(b->b)->(b->b)} ((x (\y:b. y)) z) = z, with the
    // displayed intermediate facts.
    let t = Term::lam("f", bb(), Term::var("f"));
    let cut = Type::arrow(bb(), bb());
    let inner = Term::app(Term::var("x"), Term::lam("y", b(), Term::var("y")));
    let target = Term::app(inner.clone(), Term::var("z"));

    assert_eq!(ctype(&cut, "x", &Term::var("x")), Some(cut.clone()));
    let mid = hsubst(&t, "x", &cut, &inner).unwrap();
    assert!(alpha_eq(&mid, &Term::lam("y", b(), Term::var("y"))));

    hsubst(&t, "x", &cut, &target).unwrap(); // warm-up outside the timed run
    let start = Instant::now();
    let got = hsubst(&t, "x", &cut, &target).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(print_term(&got), "z");
    assert!(
        elapsed < Duration::from_millis(1),
        "took {elapsed:?}, budget 1ms"
    );
    println!("PASS criterion 1: golden beta example prints `z` in {elapsed:?}");
}

#[test]
fn criterion_2_golden_structural_example() {
    let inner_delta = Term::delta(
        "f'",
        Type::neg(bb()),
        Term::app(Term::var("f'"), Term::lam("z", b(), Term::var("z"))),
    );
    let t = Term::delta(
        "f",
        Type::neg(bb()),
        Term::app(Term::var("f"), inner_delta.clone()),
    );
    let target = Term::app(Term::var("x"), Term::var("u"));
    let expected = Term::delta(
        "z1",
        Type::neg(b()),
        Term::app(
            Term::var("z1"),
            Term::delta(
                "z2",
                Type::neg(b()),
                Term::app(Term::var("z2"), Term::var("u")),
            ),
        ),
    );

    hsubst(&t, "x", &bb(), &target).unwrap();
    let start = Instant::now();
    let got = hsubst(&t, "x", &bb(), &target).unwrap();
    let elapsed = start.elapsed();
    assert!(alpha_eq(&got, &expected), "got {got}");
    assert!(
        elapsed < Duration::from_millis(1),
        "took {elapsed:?}, budget 1ms"
    );

    // The two intermediate structural substitutions displayed in the
    // worked example.
    let theta1 = Theta::single("f", "z1", Term::var("u"));
    let mid1 = shsubst(
        &theta1,
        &b(),
        &b(),
        &Term::app(Term::var("f"), inner_delta),
    )
    .unwrap();
    let expected1 = Term::app(
        Term::var("z1"),
        Term::delta(
            "z2",
            Type::neg(b()),
            Term::app(Term::var("z2"), Term::var("u")),
        ),
    );
    assert!(alpha_eq(&mid1, &expected1), "got {mid1}");

    let theta2 = theta1.extended(ThetaEntry {
        source: "f'".into(),
        continuation: "z2".into(),
        argument: Term::var("u"),
    });
    let mid2 = shsubst(
        &theta2,
        &b(),
        &b(),
        &Term::app(Term::var("f'"), Term::lam("z", b(), Term::var("z"))),
    )
    .unwrap();
    assert_eq!(mid2, Term::app(Term::var("z2"), Term::var("u")));
    println!("PASS criterion 2: golden structural example reproduced in {elapsed:?}");
}

#[test]
fn criterion_3_lemma_suite_at_defaults() {
    let (result, elapsed) = suite();
    let required = [
        "weakening",
        "substitution-for-typing",
        "preservation",
        "ctype-decrease",
        "ctype-agreement",
        "hsubst-totality-type-preservation",
        "shsubst-totality-type-preservation",
        "hsubst-normality-preservation",
        "shsubst-normality-preservation",
        "head-variable",
        "soundness-hsubst-vs-reduction",
        "soundness-shsubst-vs-uplift",
        "norm-agreement",
    ];
    for name in required {
        let report = result
            .reports
            .iter()
            .find(|r| r.name == name)
            .unwrap_or_else(|| panic!("property {name} missing"));
        assert_eq!(report.cases, 500, "{name} ran {} cases", report.cases);
        assert!(
            report.failures.is_empty(),
            "{name} failed:\n{}",
            result.render()
        );
    }
    assert!(result.passed(), "suite failed:\n{}", result.render());
    assert!(
        *elapsed < Duration::from_secs(60),
        "suite took {elapsed:?}, budget 60s"
    );
    println!(
        "PASS criterion 3: lemma suite, seed 0xC0FFEE, 500 cases/property, 0 failures in {elapsed:?}"
    );
}

#[test]
fn criterion_4_confluence_at_desk_scale() {
    let (result, _) = suite();
    let report = result
        .reports
        .iter()
        .find(|r| r.name == "confluence-local-join")
        .expect("confluence property registered");
    assert_eq!(report.cases, 300, "ran {} qualifying terms", report.cases);
    assert!(
        report.failures.is_empty(),
        "confluence failures:\n{}",
        result.render()
    );
    println!("PASS criterion 4: 300 multi-redex terms, all reduct pairs join within depth 8");
}

#[test]
fn criterion_5_clause_coverage() {
    let (result, _) = suite();
    let cov = &result.coverage;
    for (i, n) in cov.hsubst.iter().enumerate() {
        assert!(*n > 0, "hsubst clause {i} never fired: {:?}", cov.hsubst);
    }
    for (i, n) in cov.shsubst.iter().enumerate() {
        assert!(*n > 0, "shsubst clause {i} never fired: {:?}", cov.shsubst);
    }
    println!(
        "PASS criterion 5: all 7 hsubst and 8 shsubst clauses fired (hsubst {:?}, shsubst {:?})",
        cov.hsubst, cov.shsubst
    );
}

#[test]
fn criterion_6_determinism() {
    let selftest = |_: ()| {
        bin()
            .args(["selftest", "--seed", "0xC0FFEE", "--cases", "40"])
            .output()
            .expect("run selftest")
    };
    let a = selftest(());
    let c = selftest(());
    assert!(a.status.success());
    assert_eq!(a.stdout, c.stdout, "selftest reports differ between runs");

    let example = "(delta f:~(b->b). f (delta f':~(b->b). f' (\\z:b. z))) u";
    let norm = |_: ()| {
        bin()
            .args(["norm", "-e", example, "--ctx", "u:b"])
            .output()
            .expect("run norm")
    };
    let n1 = norm(());
    let n2 = norm(());
    assert!(n1.status.success());
    assert_eq!(n1.stdout, n2.stdout, "norm outputs differ between runs");

    let trace = |_: ()| {
        bin()
            .args(["trace", "-e", example, "--ctx", "u:b"])
            .output()
            .expect("run trace")
    };
    let t1 = trace(());
    let t2 = trace(());
    assert!(t1.status.success());
    assert_eq!(t1.stdout, t2.stdout, "trace outputs differ between runs");
    println!("PASS criterion 6: selftest, norm and trace outputs byte-identical across runs");
}

#[test]
fn criterion_7_cli_round_trip_and_exit_codes() {
    // 1000 generated well-typed terms survive print-then-parse up to α.
    let cfg = GenConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut produced = 0usize;
    while produced < 1000 {
        let ctx = gen_context(&cfg, &mut rng);
        let goal = gen_type(&cfg, &mut rng);
        let Ok(t) = gen_term(&cfg, &mut rng, &ctx, &goal, cfg.max_term_size) else {
            continue;
        };
        let printed = print_term(&t);
        let back = parse_term(&printed)
            .unwrap_or_else(|e| panic!("printed term failed to reparse: {printed}: {e}"));
        assert!(alpha_eq(&t, &back), "round trip broke: {printed}");
        produced += 1;
    }

    // One fixture per exit-code class.
    let run = |args: &[&str]| {
        bin()
            .args(args)
            .output()
            .expect("run lamdelta")
            .status
            .code()
            .expect("exit code")
    };
    assert_eq!(run(&["check", "-e", "x", "--ctx", "x:b"]), 0, "success");
    assert_eq!(run(&["check", "-e", "\\x:b"]), 1, "parse error");
    assert_eq!(run(&["check", "-e", "delta x:b. x"]), 1, "type error");
    assert_eq!(
        run(&[
            "norm",
            "-e",
            "((\\f:(b->b). f) (\\y:b. y)) z",
            "--ctx",
            "z:b",
            "--method",
            "step",
            "--fuel",
            "1"
        ]),
        2,
        "fuel exhaustion"
    );
    assert_eq!(
        run(&["eq", "\\x:b. x", "u", "--ctx", "u:b"]),
        2,
        "eq type mismatch"
    );
    assert_eq!(
        run(&["eq", "\\x:b. x", "\\x:b. u", "--ctx", "u:b"]),
        1,
        "eq not equal"
    );
    println!("PASS criterion 7: 1000-term print/parse round trip and exit-code contract");
}
