//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line.

mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{
    akiyama_tanigawa, closed_form_coeff, from_big, oracle_value, q, series_coeffs, to_big,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use squeeze_core::bernoulli::coeff;
use squeeze_core::certifier::{
    certify_positivity, certify_unique_zero, verify_certificate, CertificateKind,
};
use squeeze_core::cli::run;
use squeeze_core::constants::best_constant;
use squeeze_core::kernel::pi_half_lo;
use squeeze_core::series::PerturbedSeries;
use squeeze_core::{Enclosure, ExactRational, Family, Settings, Sign};

fn cli(args: &[&str], stdin: &str) -> (i32, Value) {
    let mut argv = vec!["squeeze"];
    argv.extend_from_slice(args);
    let mut input = stdin.as_bytes();
    let out = run(argv, &mut input);
    let doc = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, doc)
}

fn enclosure_of(v: &Value) -> Enclosure {
    serde_json::from_value(v.clone()).expect("enclosure")
}

/// The enclosure meets `[center - tol, center + tol]`.
fn near(e: &Enclosure, center: &str, tol: &str) -> bool {
    let c = q(center);
    let t = q(tol);
    e.lo() <= &(&c + &t) && e.hi() >= &(&c - &t)
}

fn best_constant_cli(family: &str, center: &str) {
    let (code, doc) = cli(
        &[
            "constant", "--family", family, "--x0", "1", "--width", "1e-7",
        ],
        "",
    );
    assert_eq!(code, 0, "{doc}");
    let e = enclosure_of(&doc["results"]["best_constant"]);
    assert!(e.width() <= q("1e-7"), "width {}", e.width().to_f64());
    assert!(near(&e, center, "1e-6"), "{e}");
}

fn error_cli(family: &str, t0: &str, delta: &str) {
    let (code, doc) = cli(&["error", "--family", family, "--x0", "1"], "");
    assert_eq!(code, 0, "{doc}");
    let t = enclosure_of(&doc["results"]["t0"]);
    let d = enclosure_of(&doc["results"]["delta"]);
    assert!(near(&t, t0, "5e-6"), "t0 {t}");
    assert!(near(&d, delta, "5e-7"), "delta {d}");
}

fn coefficients() {
    let bern = akiyama_tanigawa(20);
    for fam in Family::ALL {
        let symbolic = series_coeffs(fam, 10);
        for k in 1..=10 {
            let got = to_big(&coeff(fam, k).unwrap());
            assert_eq!(got, symbolic[k - 1], "{fam} k={k} vs series");
            assert_eq!(
                got,
                closed_form_coeff(fam, k, &bern),
                "{fam} k={k} vs closed form"
            );
        }
    }
    let spots = [
        (Family::LogCos, 2, "1/12"),
        (Family::LogCos, 3, "1/45"),
        (Family::LogCos, 4, "17/2520"),
        (Family::LogTanRatio, 2, "7/90"),
        (Family::LogTanRatio, 3, "62/2835"),
        (Family::LogTanRatio, 4, "127/18900"),
    ];
    for (fam, k, v) in spots {
        assert_eq!(coeff(fam, k).unwrap(), q(v), "{fam} k={k}");
    }
}

fn positivity() {
    let st = Settings::default();
    for (fam, theta) in [(Family::LogCos, "1/2"), (Family::LogTanRatio, "1/3")] {
        let cert = certify_positivity(fam, &q(theta), &st).unwrap();
        assert_eq!(cert.kind, CertificateKind::Positivity);
        assert!(verify_certificate(&cert, &st).valid);
    }
}

fn squeeze_round_trip() {
    for fam in ["logcos", "logtan"] {
        let mut argv = vec!["squeeze", "certify", "--family", fam, "--x0", "1"];
        let out = run(argv.drain(..), &mut std::io::empty());
        assert_eq!(out.code, 0, "{}", out.stdout);
        let doc: Value = serde_json::from_str(&out.stdout).unwrap();
        let end = q(doc["results"]["certified_interval_end"].as_str().unwrap());
        assert!(end >= q("1"));
        let (code, verdict) = cli(&["verify", "--in", "-"], &out.stdout);
        assert_eq!(code, 0, "{verdict}");
        assert_eq!(verdict["results"]["valid"], Value::Bool(true));
    }
}

fn containment() {
    let st = Settings::default();
    let bound = pi_half_lo() * &q("0.95");
    let width = q("1e-4");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
    for fam in Family::ALL {
        for _ in 0..200 {
            let den: i64 = rng.gen_range(1_000..1_000_000_007);
            let num: i64 = rng.gen_range(1..den);
            let x = &bound * &ExactRational::frac(num, den);
            let theta = ExactRational::frac(rng.gen_range(0..1_000), 1_000);
            let series = PerturbedSeries::new(fam, theta.clone());
            for d in 0..=1 {
                let (lo, hi) = oracle_value(fam, &to_big(&theta), &to_big(&x), d);
                let oracle = Enclosure::new(from_big(&lo), from_big(&hi)).unwrap();
                let e = series.eval(&x, d, &width, &st).unwrap();
                assert!(
                    e.contains_enclosure(&oracle),
                    "{fam} x={x} theta={theta} d={d}: {e} misses oracle"
                );
            }
        }
    }
}

fn soundness() {
    let st = Settings::default();
    let theta = q("0.6");
    let cert = certify_unique_zero(Family::LogCos, &theta, &q("1e-7"), &q("1e-6"), &st).unwrap();
    let zero = cert.zero_bracket.clone().unwrap();
    let min = cert.min_bracket.clone().unwrap();
    assert!(min.hi() < zero.lo());
    let series = PerturbedSeries::new(Family::LogCos, theta);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let right_end = pi_half_lo() * &q("0.99");
    for i in 0..100 {
        let u = ExactRational::frac(rng.gen_range(1..1_000_000), 1_000_000);
        let left = zero.lo() * &u;
        let right = zero.hi() + &(&(&right_end - zero.hi()) * &u);
        let sl = series
            .certified_sign(&left, 0, &st)
            .unwrap()
            .enclosure
            .sign();
        let sr = series
            .certified_sign(&right, 0, &st)
            .unwrap()
            .enclosure
            .sign();
        assert_eq!(sl, Sign::Negative, "sample {i} at {left}");
        assert_eq!(sr, Sign::Positive, "sample {i} at {right}");
    }
}

fn monotone_and_limits() {
    let st = Settings::default();
    let width = q("1e-7");
    for fam in Family::ALL {
        let encs: Vec<Enclosure> = (1..=7)
            .map(|i| best_constant(fam, &ExactRational::frac(2 * i, 10), &width, &st).unwrap())
            .collect();
        for w in encs.windows(2) {
            assert!(w[0].hi() < w[1].lo(), "{fam}: {} then {}", w[0], w[1]);
        }
        let small = best_constant(fam, &q("1/100"), &width, &st).unwrap();
        let c1 = fam.c1();
        assert!(
            small.lo() > &c1 && small.hi() < &(&c1 + &q("1e-5")),
            "{fam}: {small}"
        );
    }
}

fn optimality_probe() {
    let st = Settings::default();
    let eps = q("1e-3");
    let x = q("1e-2");
    for fam in Family::ALL {
        let bound = &(&fam.c1() + &eps) * &(&x * &x);
        let neg_log = PerturbedSeries::new(fam, ExactRational::zero())
            .eval(&x, 0, &q("1e-20"), &st)
            .unwrap();
        assert!(neg_log.hi() < &bound, "{fam}: {neg_log}");
        let shifted = PerturbedSeries::new(fam, &fam.c1() + &eps);
        assert_eq!(
            shifted.certified_sign(&x, 0, &st).unwrap().enclosure.sign(),
            Sign::Negative
        );
    }
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    check: fn(),
}

#[test]
fn acceptance() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion {
            id: 1,
            name: "best constant a ~ 0.615626",
            limit: secs(1),
            check: || best_constant_cli("logcos", "0.615626"),
        },
        Criterion {
            id: 2,
            name: "best constant b ~ 0.443023",
            limit: secs(1),
            check: || best_constant_cli("logtan", "0.443023"),
        },
        Criterion {
            id: 3,
            name: "error analysis logcos",
            limit: secs(5),
            check: || error_cli("logcos", "0.736713", "0.0339435"),
        },
        Criterion {
            id: 4,
            name: "error analysis logtan",
            limit: secs(5),
            check: || error_cli("logtan", "0.737815", "0.0324168"),
        },
        Criterion {
            id: 5,
            name: "coefficient exactness",
            limit: secs(1),
            check: coefficients,
        },
        Criterion {
            id: 6,
            name: "positivity certificates",
            limit: None,
            check: positivity,
        },
        Criterion {
            id: 7,
            name: "squeeze reproduction and verify",
            limit: None,
            check: squeeze_round_trip,
        },
        Criterion {
            id: 8,
            name: "oracle containment",
            limit: secs(30),
            check: containment,
        },
        Criterion {
            id: 9,
            name: "unique-zero soundness sampling",
            limit: None,
            check: soundness,
        },
        Criterion {
            id: 10,
            name: "monotonicity and small-x0 limits",
            limit: None,
            check: monotone_and_limits,
        },
        Criterion {
            id: 11,
            name: "upper-constant optimality probe",
            limit: None,
            check: optimality_probe,
        },
    ];
    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.check));
        let elapsed = start.elapsed();
        let verdict = match (&outcome, c.limit) {
            (Err(_), _) => Err("assertion failed".to_string()),
            (Ok(()), Some(limit)) if elapsed > limit => Err(format!("exceeded {limit:?}")),
            _ => Ok(()),
        };
        let line = match verdict {
            Ok(()) => format!("PASS criterion {:>2}: {} ({:.2?})\n", c.id, c.name, elapsed),
            Err(why) => {
                failed.push(c.id);
                format!(
                    "FAIL criterion {:>2}: {} ({:.2?}): {why}\n",
                    c.id, c.name, elapsed
                )
            }
        };
        // Written straight to stdout so the summary shows without --nocapture.
        std::io::stdout().write_all(line.as_bytes()).ok();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
