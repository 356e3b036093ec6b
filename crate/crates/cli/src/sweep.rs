//! Fixed-grid tables backing the acceptance suites.

use bohrlab::bohr;
use bohrlab::bounds;
use bohrlab::multiindex::lambda_card;
use bohrlab::optimize::OptConfig;
use bohrlab::witness::{self, BracketConfig, BruteConfig, SignSearchConfig, BRUTE_MAX_SUPPORT};
use bohrlab::{Exponent, ExponentPair};
use rayon::prelude::*;

use crate::output::{sci, Artifact, Table};
use crate::{CliError, RunConfig, SweepArgs, SweepKind};

fn e(s: &str) -> Exponent {
    s.parse().expect("literal exponent")
}

pub const SMALL_EXPONENTS: [&str; 4] = ["1", "4/3", "3/2", "2"];
pub const LINEAR_EXPONENTS: [&str; 5] = ["1", "4/3", "2", "4", "inf"];
pub const RADIUS_EXPONENTS: [&str; 6] = ["1", "4/3", "3/2", "2", "4", "inf"];

/// Searches sized for full-grid sweeps.
pub fn sweep_bracket_config(seed: u64, slack: f64) -> BracketConfig {
    BracketConfig {
        sign_search: Some(SignSearchConfig {
            seed,
            sweeps: 20,
            cap: 120,
            samples: 256,
            opt: OptConfig::default().with_restarts(8),
            ..Default::default()
        }),
        brute: Some(BruteConfig {
            seed,
            samples: 200,
            deflate: slack,
            ..Default::default()
        }),
        slack,
        ..Default::default()
    }
}

fn pairs(grid: &[&str], q_le_p: bool) -> Vec<ExponentPair> {
    let mut out = Vec::new();
    for p in grid {
        for q in grid {
            let pair = ExponentPair::new(e(p), e(q));
            if !q_le_p || pair.q <= pair.p {
                out.push(pair);
            }
        }
    }
    out
}

pub fn run(cfg: &RunConfig, a: &SweepArgs) -> Result<Artifact, CliError> {
    let n_grid = a.n.as_ref().map(|l| l.0.clone());
    let table = match a.kind {
        SweepKind::Brackets => {
            let ns = n_grid.unwrap_or_else(|| (1..=16).collect());
            brackets(cfg, a.mmax.unwrap_or(4), &ns, a.witnesses)?
        }
        SweepKind::Envelope => {
            let ns = n_grid.unwrap_or_else(|| (4..=12).map(|k| 1u64 << k).collect());
            envelope(a.mmax.unwrap_or(12), &ns)?
        }
        SweepKind::Radius => {
            let ns = n_grid.unwrap_or_else(|| vec![1, 2, 4, 8, 16, 32, 64]);
            radius(cfg, a.mmax.unwrap_or(6), &ns, a.witnesses)?
        }
        SweepKind::Linear => {
            let ns = n_grid.unwrap_or_else(|| vec![2, 8, 32]);
            linear(cfg, &ns)?
        }
    };
    Ok(Artifact::table(table))
}

fn usize_list(ns: &[u64]) -> Result<Vec<usize>, CliError> {
    ns.iter()
        .map(|&n| usize::try_from(n).map_err(|_| CliError::Usage(format!("n = {n} is too large"))))
        .collect()
}

/// χ brackets with the small-range bound and, with witnesses, the raw brute-force ratio.
pub fn brackets(cfg: &RunConfig, mmax: u32, ns: &[u64], witnesses: bool) -> Result<Table, CliError> {
    let ns = usize_list(ns)?;
    let bc = if witnesses {
        sweep_bracket_config(cfg.seed, cfg.slack)
    } else {
        BracketConfig {
            slack: cfg.slack,
            ..BracketConfig::analytic()
        }
    };
    let mut jobs = Vec::new();
    for pair in pairs(&SMALL_EXPONENTS, true) {
        for m in 1..=mmax {
            for &n in &ns {
                jobs.push((pair, m, n));
            }
        }
    }
    let rows = jobs
        .par_iter()
        .map(|&(pair, m, n)| -> Result<Vec<String>, CliError> {
            let b = witness::chi_bracket(m, n, &pair, &bc)?;
            let lemma = if pair.in_small_range() {
                sci(bounds::chi_upper_small_pq(m, n, &pair)?)
            } else {
                String::new()
            };
            let brute = match &bc.brute {
                Some(br) if lambda_card(m, n) <= BRUTE_MAX_SUPPORT.into() => {
                    sci(witness::brute_chi(m, n, &pair, br)?.raw)
                }
                _ => String::new(),
            };
            Ok(vec![
                m.to_string(),
                n.to_string(),
                pair.p.to_string(),
                pair.q.to_string(),
                sci(b.lower),
                b.lower_src.to_string(),
                sci(b.upper),
                b.upper_src.to_string(),
                lemma,
                brute,
                b.flags.join(";"),
                b.is_consistent().to_string(),
            ])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&[
        "m", "n", "p", "q", "lower", "lower_src", "upper", "upper_src", "lemma_upper", "brute_raw", "flags",
        "consistent",
    ]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

/// Envelope constants at `p = q = 2`.
pub fn envelope(mmax: u32, ns: &[u64]) -> Result<Table, CliError> {
    let pair = ExponentPair::new(Exponent::TWO, Exponent::TWO);
    let jobs: Vec<(u32, u64)> = (1..=mmax).flat_map(|m| ns.iter().map(move |&n| (m, n))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(m, n)| -> Result<Vec<String>, CliError> {
            let env = bounds::envelope_constant(m, n, &pair)?;
            let regimes: Vec<String> = env.regimes.iter().map(ToString::to_string).collect();
            Ok(vec![
                m.to_string(),
                n.to_string(),
                sci(env.value),
                regimes.join(";"),
                "no-constant".into(),
                "closed-form".into(),
            ])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&["m", "n", "value", "regime", "flags", "provenance"]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

/// `K` brackets next to the smallest `K_m` upper endpoint.
pub fn radius(cfg: &RunConfig, mmax: u32, ns: &[u64], witnesses: bool) -> Result<Table, CliError> {
    let ns = usize_list(ns)?;
    let bc = if witnesses {
        sweep_bracket_config(cfg.seed, cfg.slack)
    } else {
        BracketConfig {
            slack: cfg.slack,
            ..BracketConfig::analytic()
        }
    };
    let jobs: Vec<(ExponentPair, usize)> = pairs(&RADIUS_EXPONENTS, false)
        .into_iter()
        .flat_map(|p| ns.iter().map(move |&n| (p, n)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(pair, n)| -> Result<Vec<String>, CliError> {
            let per_m = (1..=mmax)
                .map(|m| bohr::k_m_bracket(m, n, &pair, &bc))
                .collect::<Result<Vec<_>, _>>()?;
            let k = bohr::k_bracket_from_parts(n, &pair, &per_m, &bc)?;
            let min_km = per_m.iter().map(|b| b.upper).fold(f64::INFINITY, f64::min);
            let region = bounds::region_classify(pair.p, pair.q);
            Ok(vec![
                n.to_string(),
                pair.p.to_string(),
                pair.q.to_string(),
                sci(k.lower),
                k.lower_src.to_string(),
                sci(k.upper),
                k.upper_src.to_string(),
                sci(min_km),
                region.region.to_string(),
                if n >= 2 { sci(region.rate(n as f64)) } else { String::new() },
                k.flags.join(";"),
            ])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&[
        "n", "p", "q", "lower", "lower_src", "upper", "upper_src", "min_km_upper", "region", "rate", "flags",
    ]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

/// Degree one: brute force and the bracket against `max(1, n^{1/q′−1/p′})`.
pub fn linear(cfg: &RunConfig, ns: &[u64]) -> Result<Table, CliError> {
    let ns = usize_list(ns)?;
    let brute = BruteConfig {
        seed: cfg.seed,
        samples: 32,
        deflate: cfg.slack,
        ..Default::default()
    };
    let jobs: Vec<(ExponentPair, usize)> = pairs(&LINEAR_EXPONENTS, false)
        .into_iter()
        .flat_map(|p| ns.iter().map(move |&n| (p, n)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(pair, n)| -> Result<Vec<String>, CliError> {
            let exact = ((pair.q_conj().recip_f64() - pair.p_conj().recip_f64()) * (n as f64).ln())
                .exp()
                .max(1.0);
            let raw = witness::brute_chi(1, n, &pair, &brute)?.raw;
            let k1 = bohr::k_m_bracket(1, n, &pair, &BracketConfig::analytic())?;
            Ok(vec![
                pair.p.to_string(),
                pair.q.to_string(),
                n.to_string(),
                sci(exact),
                sci(raw),
                sci((raw - exact).abs() / exact),
                sci(k1.lower),
                sci(k1.upper),
                k1.contains(1.0 / exact, 1e-12).to_string(),
            ])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&[
        "p", "q", "n", "closed_form", "brute_raw", "rel_err", "k1_lower", "k1_upper", "k1_contains",
    ]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}
