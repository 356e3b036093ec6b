//! One line per acceptance criterion, written straight to stderr so it shows
//! without `--nocapture`.

use std::collections::HashMap;
use std::io::Write;
use std::time::{Duration, Instant};

use bohrlab::bohr;
use bohrlab::bounds::{self, Region};
use bohrlab::multiindex::{self, binomial, IndexTuple};
use bohrlab::optimize::OptConfig;
use bohrlab::polynomial;
use bohrlab::witness;
use bohrlab::{Exponent, ExponentPair};
use num_bigint::BigUint;
use serde_json::Value;

fn e(s: &str) -> Exponent {
    s.parse().unwrap()
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("bohrlab").chain(args.iter().copied());
    let code = bohrlab_cli::run_with_env(argv, None, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn json_result(text: &str) -> Value {
    serde_json::from_str::<Value>(text).unwrap()["result"].clone()
}

fn csv_rows(text: &str) -> Vec<HashMap<String, String>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    lines
        .map(|l| {
            header
                .iter()
                .zip(l.split(','))
                .map(|(h, v)| (h.to_string(), v.to_string()))
                .collect()
        })
        .collect()
}

fn num(row: &HashMap<String, String>, key: &str) -> Option<f64> {
    row.get(key).filter(|s| !s.is_empty()).map(|s| s.parse().unwrap())
}

type Outcome = (bool, String);

fn c1_one_dimension() -> Outcome {
    let (code, out) = cli(&["bohr", "oned", "--tol", "1e-3", "--format", "json"]);
    let r = json_result(&out);
    let (lo, hi) = (r["lower"].as_f64().unwrap(), r["upper"].as_f64().unwrap());
    let third = 1.0 / 3.0;
    (
        code == 0 && lo <= third && third <= hi && hi - lo <= 2e-3,
        format!("[{lo:.6}, {hi:.6}] width {:.2e}", hi - lo),
    )
}

fn c2_linear() -> Outcome {
    let (code, out) = cli(&["sweep", "--kind", "linear"]);
    let rows = csv_rows(&out);
    let worst = rows.iter().map(|r| num(r, "rel_err").unwrap()).fold(0.0, f64::max);
    let contains = rows.iter().all(|r| r["k1_contains"] == "true");
    (
        code == 0 && rows.len() == 75 && worst <= 0.01 && contains,
        format!("{} cases, max rel err {worst:.2e}, K_1 brackets contain 1/χ: {contains}", rows.len()),
    )
}

fn c3_identities() -> Outcome {
    for m in 0..=8u32 {
        for n in 1..=8usize {
            let mut total = BigUint::from(0u32);
            let mut count = 0u64;
            let mut it = multiindex::enumerate_lambda(m, n).unwrap();
            while let Some(a) = it.advance() {
                total += multiindex::multiplicity_of(a);
                count += 1;
            }
            if total != BigUint::from(n).pow(m) {
                return (false, format!("Σ m!/α! ≠ n^m at m={m} n={n}"));
            }
            if binomial((n + m as usize - 1) as u64, m as u64) != BigUint::from(count)
                || multiindex::lambda_card(m, n) != BigUint::from(count)
            {
                return (false, format!("|Λ| mismatch at m={m} n={n}"));
            }
            if m == 0 {
                continue;
            }
            let mut jt = multiindex::enumerate_j(m, n).unwrap();
            while let Some(t) = jt.advance() {
                let j = IndexTuple::new(t.to_vec(), n).unwrap();
                let alpha = multiindex::tuple_to_alpha(&j, n).unwrap();
                if multiindex::alpha_to_tuple(&alpha) != j {
                    return (false, format!("roundtrip fails at {j}"));
                }
            }
        }
    }
    (true, "m ≤ 8, n ≤ 8".into())
}

fn c4_j_sum() -> Outcome {
    let mut worst: f64 = 0.0;
    for m in 1..=6 {
        for n in 1..=8 {
            for beta in [0.0, 0.5, 1.0, 2.0] {
                let a = bounds::j_sum_naive(m, n, beta, 1 << 24).unwrap();
                let b = bounds::j_sum_partition(m, n, beta).unwrap();
                worst = worst.max((a - b).abs() / a);
            }
        }
    }
    (worst <= 1e-12, format!("max rel diff {worst:.2e}"))
}

fn c5_soundness() -> Outcome {
    let (code, out) = cli(&["sweep", "--kind", "brackets", "--witnesses"]);
    let small = ["4/3", "3/2", "2"];
    let rows: Vec<_> = csv_rows(&out)
        .into_iter()
        .filter(|r| small.contains(&r["p"].as_str()) && small.contains(&r["q"].as_str()))
        .collect();
    let mut violations = 0;
    let mut brute_cases = 0;
    for r in &rows {
        if r["consistent"] != "true" || num(r, "lower").unwrap() > num(r, "upper").unwrap() {
            violations += 1;
        }
        if let (Some(b), Some(l)) = (num(r, "brute_raw"), num(r, "lemma_upper")) {
            brute_cases += 1;
            if b > l {
                violations += 1;
            }
        }
    }
    (
        code == 0 && violations == 0 && rows.len() == 6 * 4 * 16,
        format!("{} brackets, {brute_cases} brute cases, {violations} violations", rows.len()),
    )
}

fn c6_envelope() -> Outcome {
    let pair = ExponentPair::new(Exponent::TWO, Exponent::TWO);
    let mut max: (f64, u32, u32) = (0.0, 0, 0);
    let mut worst_peak = 0;
    for m in 1..=12 {
        let seq: Vec<f64> = (4..=48)
            .map(|k| bounds::envelope_constant(m, 1u64 << k, &pair).unwrap().value)
            .collect();
        for (i, &v) in seq.iter().enumerate().take(9) {
            if v > max.0 {
                max = (v, m, 4 + i as u32);
            }
        }
        let peak = (0..seq.len()).max_by(|&a, &b| seq[a].total_cmp(&seq[b])).unwrap();
        if seq[peak..].windows(2).any(|w| w[1] > w[0]) || peak + 8 >= seq.len() {
            return (false, format!("m={m} is not eventually nonincreasing"));
        }
        worst_peak = worst_peak.max(peak + 4);
    }
    (
        max.0 <= 10.0,
        format!(
            "max {:.6} at m={} n=2^{}; nonincreasing after n=2^{worst_peak} for every m",
            max.0, max.1, max.2
        ),
    )
}

fn c7_regions() -> Outcome {
    let (code, out) = cli(&["bound", "region", "--p", "inf", "--q", "inf"]);
    let r = json_result(&out);
    let mut ok = code == 0 && r["region"] == "II" && r["rate"] == "sqrt(log n)/sqrt(n)";
    for q in ["4/3", "3/2", "2", "3", "inf"] {
        let rep = bounds::region_classify(Exponent::TWO, e(q));
        ok &= rep.n_exponent == Exponent::ONE.recip() - e(q).recip()
            && rep.log_exponent == Exponent::TWO.recip();
    }
    for (p, q) in [("4", "4/3"), ("6", "3/2"), ("inf", "2")] {
        let rep = bounds::region_classify(e(p), e(q));
        ok &= rep.region == Region::I && rep.boundary_i_ii && rep.rate_string() == "1";
    }
    for p in ["1", "4/3", "2", "4", "inf"] {
        ok &= bounds::region_classify(e(p), Exponent::ONE).rate_string() == "1";
    }
    (ok, "(∞,∞) II, p=2 II=III, 1/q=1/2+1/p and q=1 give 1".into())
}

fn c8_wiener() -> Outcome {
    let norm_cfg = OptConfig::default().with_restarts(24).serial();
    let mut fails = 0;
    let mut worst: f64 = 0.0;
    for i in 0..1000u64 {
        let n = 1 + (i % 3) as usize;
        let degree = 1 + ((i / 3) % 4) as u32;
        let p = if i % 2 == 0 { Exponent::TWO } else { Exponent::INF };
        let s = polynomial::random_series(n, degree, 10_000 + i, 1 << 12, p, &norm_cfg).unwrap();
        let r = bohr::wiener_check(&s, p, 1.0, &norm_cfg).unwrap();
        if !r.all_pass {
            fails += 1;
        }
        for row in &r.rows {
            if row.bound > 0.0 {
                worst = worst.max(row.norm / row.bound);
            }
        }
    }
    let m = bohr::wiener_check(&polynomial::moebius_series(0.5, 40).unwrap(), Exponent::TWO, 1.0, &norm_cfg).unwrap();
    let eq = (m.rows[0].norm - (1.0 - 0.25)).abs();
    (
        fails == 0 && eq <= 1e-9,
        format!("{fails} of 1000 fail, max ‖P_m‖/(1−|a₀|²) {worst:.4}; Möbius gap {eq:.1e}"),
    )
}

fn c9_lempoly() -> Outcome {
    let cfg = OptConfig::default().with_restarts(24).serial();
    let mut fails = 0;
    let mut total = 0;
    for m in [2, 3] {
        for p in ["1", "2", "inf"] {
            for i in 0..50 {
                let poly = polynomial::gaussian_poly_seeded(m, 4, 1000 * m as u64 + i).unwrap();
                if !witness::lempoly_check(&poly, e(p), 1.05, &cfg).unwrap().all_pass {
                    fails += 1;
                }
                total += 1;
            }
        }
    }
    (fails == 0, format!("{fails} of {total} fail"))
}

fn c10_radius() -> Outcome {
    let mut bad = 0;
    let mut rows_seen = 0;
    for args in [
        vec!["sweep", "--kind", "radius"],
        vec!["sweep", "--kind", "radius", "--n", "1,2,3,4", "--mmax", "4", "--witnesses"],
    ] {
        let (code, out) = cli(&args);
        if code != 0 {
            return (false, format!("{args:?} exited {code}"));
        }
        for r in csv_rows(&out) {
            rows_seen += 1;
            let upper = num(&r, "upper").unwrap();
            if upper > 1.0 / 3.0 + 1e-9 || upper > num(&r, "min_km_upper").unwrap() + 1e-9 {
                bad += 1;
            }
            if num(&r, "lower").unwrap() > upper {
                bad += 1;
            }
        }
    }
    (bad == 0, format!("{rows_seen} K brackets, {bad} violations"))
}

fn c11_reproducible() -> Outcome {
    let runs = [
        vec!["selftest"],
        vec!["sweep", "--kind", "brackets", "--n", "1..6", "--witnesses", "--seed", "5"],
        vec!["sweep", "--kind", "envelope"],
    ];
    for args in &runs {
        let (c1, a) = cli(args);
        let (c2, b) = cli(args);
        if c1 != 0 || c2 != 0 || a != b {
            return (false, format!("{args:?} differs between runs"));
        }
    }
    (true, "selftest and two sweeps byte-identical".into())
}

#[test]
fn acceptance() {
    let criteria: [(u32, &str, Option<Duration>, fn() -> Outcome); 11] = [
        (1, "one-dimensional Bohr radius", Some(Duration::from_secs(60)), c1_one_dimension),
        (2, "linear case exactness", Some(Duration::from_secs(300)), c2_linear),
        (3, "exact identities", None, c3_identities),
        (4, "j-sum oracle equivalence", Some(Duration::from_secs(60)), c4_j_sum),
        (5, "bracket soundness", None, c5_soundness),
        (6, "envelope boundedness", None, c6_envelope),
        (7, "region map", None, c7_regions),
        (8, "Wiener suite", None, c8_wiener),
        (9, "slice inequality suite", None, c9_lempoly),
        (10, "K ≤ 1/3 and K ≤ K_m", None, c10_radius),
        (11, "reproducibility", None, c11_reproducible),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let (ok, detail) = f();
        let took = start.elapsed();
        let in_time = limit.is_none_or(|l| took <= l);
        let pass = ok && in_time;
        let mut line = format!(
            "{} {id:>2} {name}: {detail} ({:.1} s)",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
        if !in_time {
            line.push_str(&format!(" over the {} s limit", limit.unwrap().as_secs()));
        }
        writeln!(std::io::stderr(), "{line}").unwrap();
        if !pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
