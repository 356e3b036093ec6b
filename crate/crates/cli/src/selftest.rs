//! Built-in property suite; every line is deterministic for a fixed seed.

use bohrlab::bohr::{self, OneDConfig};
use bohrlab::bounds::{self, Region};
use bohrlab::multiindex::{self, binomial, IndexTuple};
use bohrlab::optimize::OptConfig;
use bohrlab::polynomial::{self, HomPoly};
use bohrlab::witness::{self, BracketConfig};
use bohrlab::{Exponent, ExponentPair, Result};
use num_bigint::BigUint;

use crate::output::Table;
use crate::RunConfig;

struct Check {
    name: &'static str,
    outcome: Result<(bool, String)>,
}

fn e(s: &str) -> Exponent {
    s.parse().expect("literal exponent")
}

fn identities() -> Result<(bool, String)> {
    let mut cases = 0;
    for m in 0..=6u32 {
        for n in 1..=6usize {
            let mut total = BigUint::from(0u32);
            let mut count: u64 = 0;
            let mut it = multiindex::enumerate_lambda(m, n)?;
            while let Some(a) = it.advance() {
                total += multiindex::multiplicity_of(a);
                count += 1;
            }
            if total != BigUint::from(n).pow(m) || binomial((n + m as usize - 1) as u64, m as u64) != count.into() {
                return Ok((false, format!("m={m} n={n}")));
            }
            let mut jt = multiindex::enumerate_j(m.max(1), n)?;
            while let Some(t) = jt.advance() {
                let j = IndexTuple::new(t.to_vec(), n)?;
                if multiindex::alpha_to_tuple(&multiindex::tuple_to_alpha(&j, n)?) != j {
                    return Ok((false, format!("roundtrip m={m} n={n}")));
                }
            }
            cases += 1;
        }
    }
    Ok((true, format!("{cases} (m,n) cases")))
}

fn j_sum_oracle() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for m in 1..=6 {
        for n in 1..=8 {
            for beta in [0.0, 0.5, 1.0, 2.0] {
                let a = bounds::j_sum_naive(m, n, beta, 1 << 20)?;
                let b = bounds::j_sum_partition(m, n, beta)?;
                worst = worst.max((a - b).abs() / a.max(1.0));
            }
        }
    }
    Ok((worst <= 1e-12, format!("max rel diff {worst:.3e}")))
}

fn regions() -> Result<(bool, String)> {
    let inf = bounds::region_classify(Exponent::INF, Exponent::INF);
    let mut ok = inf.region == Region::II && inf.rate_string() == "sqrt(log n)/sqrt(n)";
    for q in ["4/3", "2", "4", "inf"] {
        let r = bounds::region_classify(Exponent::TWO, e(q));
        ok &= r.boundary_ii_iii && r.n_exponent == Exponent::ONE.recip() - e(q).recip();
    }
    for (p, q) in [("4", "4/3"), ("inf", "2"), ("6", "3/2")] {
        let r = bounds::region_classify(e(p), e(q));
        ok &= r.region == Region::I && r.boundary_i_ii && r.rate_string() == "1";
    }
    for p in ["1", "2", "inf"] {
        ok &= bounds::region_classify(e(p), Exponent::ONE).rate_string() == "1";
    }
    Ok((ok, inf.rate_string()))
}

fn linear_brackets() -> Result<(bool, String)> {
    let grid = ["1", "4/3", "2", "4", "inf"];
    let mut ok = true;
    for p in grid {
        for q in grid {
            let pair = ExponentPair::new(e(p), e(q));
            for n in [2, 8, 32] {
                let exact = ((pair.q_conj().recip_f64() - pair.p_conj().recip_f64()) * (n as f64).ln())
                    .exp()
                    .max(1.0);
                ok &= bohr::k_m_bracket(1, n, &pair, &BracketConfig::analytic())?.contains(1.0 / exact, 1e-12);
            }
        }
    }
    Ok((ok, "75 cases".into()))
}

fn bracket_grid() -> Result<(bool, String)> {
    let grid = ["1", "4/3", "3/2", "2"];
    let mut count = 0;
    for p in grid {
        for q in grid {
            let pair = ExponentPair::new(e(p), e(q));
            if pair.q > pair.p {
                continue;
            }
            for m in 1..=4 {
                for n in 1..=16 {
                    if !witness::chi_bracket(m, n, &pair, &BracketConfig::analytic())?.is_consistent() {
                        return Ok((false, format!("{pair} m={m} n={n}")));
                    }
                    count += 1;
                }
            }
        }
    }
    Ok((true, format!("{count} brackets")))
}

fn envelope() -> Result<(bool, String)> {
    let pair = ExponentPair::new(Exponent::TWO, Exponent::TWO);
    let mut max: f64 = 0.0;
    for m in 1..=12 {
        for k in 4..=12 {
            max = max.max(bounds::envelope_constant(m, 1 << k, &pair)?.value);
        }
    }
    Ok((max <= 10.0, format!("max {max:.6}")))
}

fn radius() -> Result<(bool, String)> {
    let mut ok = true;
    for (p, q) in [("inf", "inf"), ("2", "1"), ("3/2", "4/3"), ("4", "inf"), ("1", "2")] {
        let pair = ExponentPair::new(e(p), e(q));
        for n in [1, 4, 16, 64] {
            let k = bohr::k_bracket(n, &pair, 5, &BracketConfig::analytic())?;
            ok &= k.lower <= k.upper && k.upper <= bohr::ONE_THIRD + 1e-9;
            for m in 1..=5 {
                ok &= k.upper <= bohr::k_m_bracket(m, n, &pair, &BracketConfig::analytic())?.upper + 1e-9;
            }
        }
    }
    Ok((ok, "K ≤ min(1/3, K_m)".into()))
}

fn one_dimension(seed: u64) -> Result<(bool, String)> {
    let cfg = OneDConfig {
        random_series: 200,
        seed,
        ..Default::default()
    };
    let b = bohr::bohr_1d_bracket(1e-3, &cfg)?;
    let ok = b.lower <= bohr::ONE_THIRD && bohr::ONE_THIRD <= b.upper && b.upper - b.lower <= 2e-3;
    Ok((ok, format!("[{:.6}, {:.6}]", b.lower, b.upper)))
}

fn wiener(seed: u64) -> Result<(bool, String)> {
    let opt = OptConfig::default().with_restarts(16).with_seed(seed);
    let moebius = bohr::wiener_check(&polynomial::moebius_series(0.5, 40)?, Exponent::TWO, 1.0, &opt)?;
    let mut ok = moebius.all_pass && (moebius.rows[0].norm - 0.75).abs() < 1e-9;
    for i in 0..20 {
        let p = if i % 2 == 0 { Exponent::TWO } else { Exponent::INF };
        let s = polynomial::random_series(1 + i % 3, 1 + (i % 4) as u32, seed.wrapping_add(i as u64), 1000, p, &opt)?;
        ok &= bohr::wiener_check(&s, p, 1.0, &opt)?.all_pass;
    }
    Ok((ok, "moebius + 20 random".into()))
}

fn lempoly(seed: u64) -> Result<(bool, String)> {
    let opt = OptConfig::default().with_restarts(16).with_seed(seed);
    let mut ok = true;
    for m in [2, 3] {
        for p in ["1", "2", "inf"] {
            for i in 0..3 {
                let poly = polynomial::gaussian_poly_seeded(m, 4, seed.wrapping_add(i))?;
                ok &= witness::lempoly_check(&poly, e(p), witness::DEFAULT_SLACK, &opt)?.all_pass;
            }
        }
    }
    Ok((ok, "18 polynomials".into()))
}

fn json_roundtrip(seed: u64) -> Result<(bool, String)> {
    let poly = polynomial::gaussian_poly_seeded(3, 3, seed)?;
    let back = HomPoly::from_json(&poly.to_json())?;
    let series = polynomial::moebius_series(0.3, 6)?;
    let sback = polynomial::TruncatedSeries::from_json(&series.to_json())?;
    Ok((back == poly && sback == series, "poly + series".into()))
}

/// Runs every check; returns the table and the number of failures.
pub fn run(cfg: &RunConfig) -> (Table, usize) {
    let seed = cfg.seed;
    let checks = [
        Check { name: "identities", outcome: identities() },
        Check { name: "j-sum-oracle", outcome: j_sum_oracle() },
        Check { name: "regions", outcome: regions() },
        Check { name: "linear-brackets", outcome: linear_brackets() },
        Check { name: "bracket-grid", outcome: bracket_grid() },
        Check { name: "envelope", outcome: envelope() },
        Check { name: "radius", outcome: radius() },
        Check { name: "one-dimension", outcome: one_dimension(seed) },
        Check { name: "wiener", outcome: wiener(seed) },
        Check { name: "lempoly", outcome: lempoly(seed) },
        Check { name: "json-roundtrip", outcome: json_roundtrip(seed) },
    ];
    let mut table = Table::new(&["check", "status", "detail"]);
    let mut failures = 0;
    for c in checks {
        let (pass, detail) = match c.outcome {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        table.push(vec![c.name.into(), if pass { "pass" } else { "fail" }.into(), detail]);
    }
    (table, failures)
}
