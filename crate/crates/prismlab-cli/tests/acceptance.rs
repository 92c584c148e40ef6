//! Acceptance gate: ten named criteria, each implemented as one test that
//! prints a single `PASS` line when it holds (a failed assertion is the
//! corresponding `FAIL` line).  Criteria 1–9 exercise the library directly;
//! criterion 10 drives the installed binary.
//!
//! Expected values are frozen literals or computed by small independent
//! oracles local to this file (an additive Pascal triangle, a brute-force
//! cyclic-generator search); they never call the code path under test.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use prismlab::arith::{FpPoly, Monomial, RingSpec, TruncSeries};
use prismlab::cohen::{correspondence_automorphism, CohenError};
use prismlab::delta::DeltaRingSpec;
use prismlab::exactalg::{fp_reduce, FpMatrix};
use prismlab::koszul::{ht_filtration_table, ht_rank};
use prismlab::kunzartin::{artin_build, frobenius_flat, ArtinAlgebra};
use prismlab::localring::{
    hilbert_samuel, regularity_verdict, LocalPresentation, RegularityStatus,
};
use prismlab::pdenv::counterexample_report;
use prismlab::prism::{normalize_orientation, regseq_suite, verify_prism, PrismKind};
use prismlab::reader::parse_expression;

// ---------------------------------------------------------------------------
// shared helpers
// ---------------------------------------------------------------------------

fn ring(p: u32, precision: u32, cap: u32, vars: &[&str]) -> Arc<RingSpec> {
    RingSpec::new(
        p,
        precision,
        cap,
        vars.iter().map(|s| s.to_string()).collect(),
    )
    .expect("valid ring window")
}

fn series(src: &str, ring: &Arc<RingSpec>) -> TruncSeries {
    parse_expression(src, ring).expect("valid expression")
}

/// Workspace root (this file lives in crates/prismlab-cli/tests/).
fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .expect("workspace root")
}

/// Independent binomial oracle: an additively built Pascal triangle.
/// `pascal(n, k) = C(n, k)`; row size is generous for every use below.
fn pascal_table(n_max: usize) -> Vec<Vec<u64>> {
    let mut tri = vec![vec![0u64; n_max + 1]; n_max + 1];
    for n in 0..=n_max {
        tri[n][0] = 1;
        for k in 1..=n {
            tri[n][k] = tri[n - 1][k - 1] + if k < n { tri[n - 1][k] } else { 0 };
        }
    }
    tri
}

fn pass(line: &str) {
    println!("acceptance {line}: PASS");
}

// ---------------------------------------------------------------------------
// criterion 1 — delta-axiom suite
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_delta_axiom_suite() {
    let start = Instant::now();
    for &p in &[2u32, 3, 5] {
        let r = ring(p, 6, 12, &["T", "S"]);
        let spec = DeltaRingSpec::rank_one(&r);
        let report = spec.check_delta_axioms(1000, 0xACCE_0001 + u64::from(p));
        assert_eq!(report.samples, 1000, "p={p}: sample count");
        assert!(report.unit_laws_hold, "p={p}: unit laws");
        assert!(
            report.violations.is_empty(),
            "p={p}: axiom violations: {:?}",
            report.violations
        );
        assert!(report.all_hold(), "p={p}: all axioms");
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(5),
        "axiom suite took {elapsed:?}, budget is 5 s"
    );
    pass("01 delta-axiom-suite (p in {2,3,5}, precision 6, cap 12, 1000 pairs each)");
}

// ---------------------------------------------------------------------------
// criterion 2 — Frobenius-lift law on the fiber
// ---------------------------------------------------------------------------

/// Sample a window element whose monomials all have degree <= `max_deg`,
/// so the rank-one Frobenius image stays inside the window exactly.
fn sample_bounded(rng: &mut ChaCha8Rng, ring: &Arc<RingSpec>, max_deg: u32) -> TruncSeries {
    let modulus = i128::from(ring.prime()).pow(ring.precision());
    let nterms = rng.gen_range(0..=5usize);
    let mut acc: BTreeMap<Monomial, i128> = BTreeMap::new();
    for _ in 0..nterms {
        let e0 = rng.gen_range(0..=max_deg);
        let e1 = rng.gen_range(0..=max_deg - e0);
        let c = rng.gen_range(0..modulus);
        *acc.entry(Monomial::from_exps(vec![e0, e1])).or_insert(0) += c;
    }
    let terms: Vec<(Monomial, i128)> = acc.into_iter().map(|(m, c)| (m, c % modulus)).collect();
    TruncSeries::from_terms(ring, terms).expect("bounded sample in window")
}

#[test]
fn criterion_02_frobenius_lift_law() {
    for &p in &[2u32, 3, 5] {
        let r = ring(p, 4, 12, &["T", "S"]);
        let spec = DeltaRingSpec::rank_one(&r);
        let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0002 + u64::from(p));
        let max_deg = 12 / p;
        for i in 0..500 {
            let a = sample_bounded(&mut rng, &r, max_deg);
            let phi_a = spec.phi(&a).expect("phi image stays in window");
            let lhs = phi_a.fiber_reduce();
            let rhs = a.fiber_reduce().pow(p);
            assert_eq!(
                lhs, rhs,
                "p={p}, sample {i}: fiber(phi(a)) != fiber(a)^p for a={a}"
            );
        }
    }
    pass("02 frobenius-lift-law (500 samples per p in {2,3,5}, exact comparison)");
}

// ---------------------------------------------------------------------------
// criterion 3 — nine-condition agreement across a prism corpus
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_nine_condition_agreement() {
    // (p, precision, cap, vars, orientation, expect transversal)
    type PrismCase = (u32, u32, u32, Vec<&'static str>, &'static str, bool);
    let corpus: Vec<PrismCase> = vec![
        (5, 3, 12, vec!["T"], "5 - T^2", true),
        (5, 3, 12, vec!["T", "S"], "5 - T*S", true),
        (5, 3, 1, vec![], "5", false),
        (2, 4, 8, vec!["T"], "2 - T", true),
        (3, 3, 10, vec!["T"], "3 - T^3", true),
        (2, 3, 1, vec![], "2", false),
        (3, 3, 6, vec!["T", "S"], "3 - T - S", true),
    ];
    assert!(corpus.len() >= 6, "corpus must contain at least six prisms");

    for (p, n, cap, vars, d_src, transversal) in corpus {
        let r = ring(p, n, cap, &vars);
        let spec = DeltaRingSpec::rank_one(&r);
        let d = series(d_src, &r);
        let prism = verify_prism(&spec, &d).expect("corpus orientation verifies");
        let expected_kind = if transversal {
            PrismKind::Transversal
        } else {
            PrismKind::Crystalline
        };
        assert_eq!(prism.kind(), expected_kind, "{d_src}: classification");

        let report = regseq_suite(&prism, 2).expect("window admits the twist suite");
        assert_eq!(
            report.conditions.len(),
            9,
            "{d_src}: nine conditions evaluated"
        );
        assert!(
            report.all_agree,
            "{d_src}: conditions disagree: {:#?}",
            report.conditions
        );
        assert_eq!(report.overall, transversal, "{d_src}: overall verdict");
        for cond in &report.conditions {
            assert_eq!(
                cond.holds, transversal,
                "{d_src}: condition {} ({}) diverges",
                cond.index, cond.condition
            );
        }
    }
    pass("03 nine-condition-agreement (7 prisms incl. p-T^2, p-TS, and (Zp, p))");
}

// ---------------------------------------------------------------------------
// criterion 4 — regular-prism deformation and Hilbert–Samuel growth
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_regular_deformation() {
    // (p, cap, vars, orientation, expected dim of A/(d))
    let corpus: Vec<(u32, u32, Vec<&str>, &str, u64)> = vec![
        (2, 16, vec!["T"], "2 - T^2", 1),
        (2, 16, vec!["T", "S"], "2 - T*S", 2),
        (2, 8, vec![], "2", 0),
        (3, 8, vec!["T"], "3 - T", 1),
        (5, 8, vec!["T"], "5 - T", 1),
    ];
    let tri = pascal_table(12);

    for (p, cap, vars, d_src, dim) in corpus {
        // Precision 9 so the ninth coefficient digit exists and lengths up to
        // s = 8 are sampled exactly.
        let r = ring(p, 9, cap, &vars);
        let spec = DeltaRingSpec::rank_one(&r);
        let d = series(d_src, &r);
        let prism = verify_prism(&spec, &d).expect("regular-family orientation verifies");
        let pres = LocalPresentation::new(spec.clone(), prism.normalized_f().clone(), vec![])
            .expect("presentation over the regular base");

        let verdict = regularity_verdict(&pres).expect("verdict computes");
        assert_eq!(
            verdict.status,
            RegularityStatus::ProvenRegular,
            "{d_src}: expected ProvenRegular, got {verdict:?}"
        );
        assert_eq!(verdict.dim, Some(dim), "{d_src}: certified dimension");

        let hs = hilbert_samuel(&pres, 8).expect("lengths to depth 8");
        assert_eq!(hs.len(), 8, "{d_src}: eight sampled lengths");
        for s in 1..=8u64 {
            let expected = tri[(s - 1 + dim) as usize][dim as usize];
            assert_eq!(
                hs[(s - 1) as usize],
                expected,
                "{d_src}: length of R/m^{s} should be C({}, {dim})",
                s - 1 + dim
            );
        }
    }
    pass("04 regular-deformation (ProvenRegular + binomial Hilbert-Samuel, s <= 8)");
}

// ---------------------------------------------------------------------------
// criterion 5 — Hodge–Tate graded ranks
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_hodge_tate_ranks() {
    let tri = pascal_table(20);
    let binom = |n: u32, k: u32| -> u64 { tri[n as usize][k as usize] };

    for r in 0..=6u32 {
        for i in 0..=12u32 {
            // Closed form against the independent triangle.
            let expected = if r == 0 {
                u64::from(i == 0)
            } else {
                binom(r + i - 1, i)
            };
            assert_eq!(ht_rank(r, i), expected, "rank D_{i}({r})");

            // Pascal recursion in both arguments.
            if r >= 1 && i >= 1 {
                assert_eq!(
                    ht_rank(r, i),
                    ht_rank(r - 1, i) + ht_rank(r, i - 1),
                    "Pascal recursion at (r={r}, i={i})"
                );
            }
        }

        // Hockey-stick partial sums, cross-checked against the table output.
        let table = ht_filtration_table(r, 12);
        assert_eq!(table.ranks.len(), 13);
        assert_eq!(table.filtration.len(), 13);
        let mut running = 0u64;
        for j in 0..=12u32 {
            running += ht_rank(r, j);
            assert_eq!(
                running,
                binom(r + j, j),
                "hockey-stick sum at (r={r}, j={j})"
            );
            assert_eq!(
                table.filtration[j as usize], running,
                "filtration total at (r={r}, j={j})"
            );
            assert_eq!(
                table.twists[j as usize],
                -i64::from(j),
                "twist tag at j={j}"
            );
        }
    }

    // The r = 0 row is the unit table (1, 0, 0, ...).
    let unit = ht_filtration_table(0, 12);
    assert_eq!(unit.ranks[0], 1);
    assert!(
        unit.ranks[1..].iter().all(|&d| d == 0),
        "r=0 tail must vanish"
    );
    pass("05 hodge-tate-ranks (Pascal + hockey-stick, r <= 6, i <= 12, unit row)");
}

// ---------------------------------------------------------------------------
// criterion 6 — Kunz-style Artinian Frobenius flatness
// ---------------------------------------------------------------------------

/// Brute-force freeness oracle: `F_*S` is free over `S` iff it is cyclic,
/// iff some vector v has {e_j^p . v : j} spanning the whole algebra.  The
/// search is exhaustive over all p^dim coordinate vectors.
fn brute_force_free(algebra: &ArtinAlgebra) -> bool {
    let n = algebra.dim();
    let p = algebra.prime();
    let total = u64::from(p).pow(n as u32);
    let pth_powers: Vec<Vec<u64>> = (0..n)
        .map(|j| algebra.pow(&algebra.basis_vector(j), p))
        .collect();
    'candidates: for code in 1..total {
        let mut v = vec![0u64; n];
        let mut c = code;
        for slot in v.iter_mut() {
            *slot = c % u64::from(p);
            c /= u64::from(p);
        }
        let rows: Vec<Vec<u64>> = pth_powers.iter().map(|e| algebra.mul(e, &v)).collect();
        let matrix = match FpMatrix::from_rows(p, rows) {
            Ok(m) => m,
            Err(_) => continue 'candidates,
        };
        if fp_reduce(&matrix).rank == n {
            return true;
        }
    }
    false
}

#[test]
fn criterion_06_kunz_artinian_tester() {
    let start = Instant::now();
    for &p in &[2u32, 3, 5] {
        let t1 = |e: u32| FpPoly::var(p, 1, 0).pow(e);
        let t2 = |e: u32| FpPoly::var(p, 2, 0).pow(e);
        let s2 = |e: u32| FpPoly::var(p, 2, 1).pow(e);

        // The field itself is Frobenius-flat.
        let field = artin_build(&[t1(1)]).expect("field builds");
        assert_eq!(field.dim(), 1);
        assert!(frobenius_flat(&field).flat, "p={p}: F_p must be flat");

        // Truncated polynomial rings are not.
        for e in [2u32, 3, 4] {
            let alg = artin_build(&[t1(e)]).expect("truncation builds");
            assert_eq!(alg.dim(), e as usize);
            let cert = frobenius_flat(&alg);
            assert!(
                !cert.flat,
                "p={p}: F_p[T]/(T^{e}) must not be flat: {}",
                cert.reason
            );
        }

        // Corpus of algebras of dimension <= 4: tester agrees with the
        // brute-force cyclic-generator oracle on every one.
        let corpus: Vec<(Vec<FpPoly>, usize)> = vec![
            (vec![t1(1)], 1),
            (vec![t1(2)], 2),
            (vec![t1(3)], 3),
            (vec![t1(4)], 4),
            (vec![t2(2), t2(1).mul(&s2(1)), s2(2)], 3),
            (vec![t2(2), s2(2)], 4),
            (vec![t2(1), s2(3)], 3),
            (vec![t2(3), t2(1).mul(&s2(1)), s2(2)], 4),
        ];
        for (gens, expected_dim) in corpus {
            let alg = artin_build(&gens).expect("corpus algebra builds");
            assert_eq!(alg.dim(), expected_dim, "p={p}: corpus dimension");
            assert!(alg.dim() <= 4);
            let fast = frobenius_flat(&alg).flat;
            let slow = brute_force_free(&alg);
            assert_eq!(
                fast, slow,
                "p={p}, dim={expected_dim}: tester disagrees with brute-force oracle"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(10),
        "Kunz suite took {elapsed:?}, budget is 10 s"
    );
    pass("06 kunz-artinian (field flat, truncations not, oracle agreement dim <= 4)");
}

// ---------------------------------------------------------------------------
// criterion 7 — divided-power counterexample
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_divided_power_counterexample() {
    for &p in &[2u32, 3, 5] {
        let t0 = Instant::now();
        let top = (p * p) as usize;
        let report = counterexample_report(p, 3, top).expect("counterexample computes");
        let elapsed = t0.elapsed();

        assert!(
            report.t_nonzero_in_fiber,
            "p={p}: T must be nonzero in the fiber"
        );
        assert!(
            report.t_pth_power_zero,
            "p={p}: T^p must vanish in the fiber"
        );
        assert!(
            !report.fiber_flatness.flat,
            "p={p}: fiber Frobenius must fail flatness: {}",
            report.fiber_flatness.reason
        );
        assert_eq!(
            report.quotient_status,
            RegularityStatus::ProvenRegular,
            "p={p}: the quotient F_p is regular"
        );
        assert_eq!(report.base_dim, 2, "p={p}: dim of the one-variable base");
        assert_eq!(report.emdim_plus_one, 1, "p={p}: small-base budget");
        assert!(
            !report.small_base,
            "p={p}: base must fail the small-base bound"
        );
        assert!(report.verdict, "p={p}: conjunction of expected outcomes");

        if p == 5 {
            assert!(
                elapsed < Duration::from_secs(30),
                "p=5 counterexample took {elapsed:?}, budget is 30 s"
            );
        }
    }
    pass("07 divided-power-counterexample (p in {2,3,5}, precision 3, window p^2)");
}

// ---------------------------------------------------------------------------
// criterion 8 — orientation normalization with recorded unit
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_orientation_normalization() {
    let r = ring(5, 6, 10, &["T"]);
    let spec = DeltaRingSpec::rank_one(&r);
    let d = series("2*p - T", &r);

    let (f, unit) = normalize_orientation(&spec, &d).expect("2p - T is distinguished");
    assert_eq!(unit, TruncSeries::scalar(&r, 2), "recorded unit");
    // 2^{-1} = (5^6 + 1)/2 = 7813 modulo 5^6, so f = 7813*T.
    assert_eq!(f.to_string(), "7813*T", "normalized tail");

    // The unit witnesses the rewriting exactly: u * (p - f) = d.
    let p_minus_f = TruncSeries::p(&r).try_sub(&f).expect("p - f in window");
    let recomposed = unit.try_mul(&p_minus_f).expect("unit multiple in window");
    assert_eq!(
        recomposed, d,
        "u * (p - f) must reproduce the input bit-exactly"
    );

    // Re-verification: both the original orientation and its canonical form
    // generate verified transversal prisms with the same normalized tail.
    let prism = verify_prism(&spec, &d).expect("original orientation verifies");
    assert_eq!(prism.normalized_f(), &f);
    assert_eq!(prism.kind(), PrismKind::Transversal);
    assert_eq!(prism.certificate().normalization_unit, "2");

    let prism2 = verify_prism(&spec, &p_minus_f).expect("canonical form verifies");
    assert_eq!(prism2.normalized_f(), &f);
    assert_eq!(prism2.kind(), PrismKind::Transversal);
    pass("08 orientation-normalization (2p - T, unit 2, tail 7813*T, re-verified)");
}

// ---------------------------------------------------------------------------
// criterion 9 — presentation correspondence
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_presentation_correspondence() {
    let r = ring(5, 3, 6, &["T"]);
    let spec = DeltaRingSpec::rank_one(&r);
    let gens = vec![series("p - T^2", &r)];

    // Identity matrix: accepted with full rank and one membership witness.
    let identity = vec![vec![TruncSeries::one(&r)]];
    let report = correspondence_automorphism(&spec, &gens, &gens, &identity)
        .expect("identity correspondence verifies");
    assert_eq!(report.rank_mod_m, 1);
    assert_eq!(report.witnesses.len(), 1);

    // Sign flip T -> -T: (-T)^2 = T^2, so the same ideal is reproduced.
    let flip = vec![vec![TruncSeries::scalar(&r, -1)]];
    let report = correspondence_automorphism(&spec, &gens, &gens, &flip)
        .expect("sign-flip correspondence verifies");
    assert_eq!(report.rank_mod_m, 1);
    assert_eq!(report.witnesses.len(), 1);

    // Degenerate matrix: rejected for rank failure modulo the maximal ideal.
    let degenerate = vec![vec![TruncSeries::zero(&r)]];
    let err = correspondence_automorphism(&spec, &gens, &gens, &degenerate)
        .expect_err("zero matrix must be rejected");
    assert_eq!(err, CohenError::NotInvertibleModM { rank: 0, needed: 1 });
    pass("09 presentation-correspondence (identity, sign flip, degenerate rejection)");
}

// ---------------------------------------------------------------------------
// criterion 10 — CLI determinism
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_prismlab");
    let root = workspace_root();

    let invocations: Vec<Vec<&str>> = vec![
        vec!["verify-prism", "--spec", "ex/p-minus-T2.spec"],
        vec!["normalize", "--spec", "ex/two-p-minus-T.spec"],
        vec!["classify", "--spec", "ex/zp-crystalline.spec"],
        vec!["regseq", "--spec", "ex/regseq-chain.spec", "--i-max", "2"],
        vec!["regularity", "--spec", "ex/nonreduced-fiber.spec"],
        vec![
            "hilbert-samuel",
            "--spec",
            "ex/p-minus-T2.spec",
            "--s-max",
            "3",
        ],
        vec!["kunz-artinian", "--spec", "ex/kunz-nonfree.spec"],
        vec!["hodge-tate", "--rank-r", "3", "--j-max", "5"],
        vec!["lci-check", "--spec", "ex/p-minus-TS.spec"],
        vec!["counterexample", "--prime", "3", "--precision", "3"],
        vec![
            "correspond",
            "--spec",
            "ex/p-minus-TS.spec",
            "--iprime",
            "ex/p-minus-21TS.spec",
            "--matrix",
            "2,0;0,3",
        ],
        vec![
            "axioms",
            "--spec",
            "ex/frobenius-custom.spec",
            "--samples",
            "32",
            "--seed",
            "7",
        ],
    ];

    for args in &invocations {
        for format in ["text", "json"] {
            let run = |threads: Option<&str>| {
                let mut cmd = Command::new(bin);
                cmd.current_dir(&root).arg("--format").arg(format);
                if let Some(t) = threads {
                    cmd.arg("--threads").arg(t);
                }
                cmd.args(args).output().expect("binary runs")
            };
            let first = run(None);
            let second = run(None);
            let single = run(Some("1"));
            let quad = run(Some("4"));

            let label = format!("{} --format {format}", args.join(" "));
            assert_eq!(
                first.stdout, second.stdout,
                "{label}: repeated runs must be byte-identical"
            );
            assert_eq!(
                first.status.code(),
                second.status.code(),
                "{label}: exit codes must repeat"
            );
            assert_eq!(
                single.stdout, quad.stdout,
                "{label}: 1-thread and 4-thread output must agree"
            );
            assert_eq!(
                first.stdout, single.stdout,
                "{label}: thread pool must not change output"
            );
            assert_eq!(first.stderr, second.stderr, "{label}: stderr must repeat");
            assert_eq!(
                single.status.code(),
                quad.status.code(),
                "{label}: exit codes must not depend on threads"
            );
        }
    }
    pass("10 cli-determinism (12 commands x 2 formats, repeated and 1-vs-4 threads)");
}
