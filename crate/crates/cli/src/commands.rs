//! One handler per subcommand.

use std::fs;
use std::path::Path;

use bohrlab::bohr::{self, OneDConfig};
use bohrlab::bounds;
use bohrlab::multiindex::{self, DEFAULT_STREAM_BUDGET};
use bohrlab::optimize;
use bohrlab::polynomial::{self, HomPoly, TruncatedSeries};
use bohrlab::witness::{self, BracketConfig, BruteConfig, SignSearchConfig};
use bohrlab::{Exponent, ExponentPair};
use serde::Serialize;
use serde_json::json;

use crate::output::{sci, unwrap_result, Artifact, Table};
use crate::{
    selftest, sweep, BohrCmd, BoundArgs, BoundCmd, CliError, Command, EnumerateArgs, NormArgs, PolyCmd, RunConfig,
    SetKind, WitnessArgs, WitnessCmd,
};

/// The artifact and the number of failed selftest checks.
pub fn dispatch(cfg: &RunConfig) -> Result<(Artifact, usize), CliError> {
    let artifact = match &cfg.command {
        Command::Enumerate(a) => enumerate(cfg, a)?,
        Command::Poly(c) => poly(cfg, c)?,
        Command::Norm(a) => norm(cfg, a)?,
        Command::Bound(c) => bound(c)?,
        Command::Witness(c) => witness_cmd(cfg, c)?,
        Command::Bohr(c) => bohr_cmd(cfg, c)?,
        Command::Sweep(a) => sweep::run(cfg, a)?,
        Command::Selftest => {
            let (table, failures) = selftest::run(cfg);
            return Ok((Artifact::table(table), failures));
        }
    };
    Ok((artifact, 0))
}

/// Witness searches seeded from the run.
pub fn bracket_config(cfg: &RunConfig, analytic: bool) -> BracketConfig {
    if analytic {
        return BracketConfig {
            slack: cfg.slack,
            ..BracketConfig::analytic()
        };
    }
    let mut sign = SignSearchConfig {
        seed: cfg.seed,
        ..Default::default()
    };
    if let Some(b) = cfg.budget {
        sign.cap = usize::try_from(b).unwrap_or(usize::MAX);
    }
    BracketConfig {
        sign_search: Some(sign),
        brute: Some(BruteConfig {
            seed: cfg.seed,
            deflate: cfg.slack,
            ..Default::default()
        }),
        slack: cfg.slack,
        ..Default::default()
    }
}

fn enumerate(cfg: &RunConfig, a: &EnumerateArgs) -> Result<Artifact, CliError> {
    let budget = cfg.budget.unwrap_or(DEFAULT_STREAM_BUDGET);
    let mut table = Table::new(&["index", "exponents", "multiplicity"]);
    let mut push = |exps: &[u32], mult: String| {
        let joined: Vec<String> = exps.iter().map(u32::to_string).collect();
        let i = table.rows.len() + 1;
        table.push(vec![i.to_string(), joined.join(";"), mult]);
    };
    match a.set {
        SetKind::Lambda | SetKind::LambdaK => {
            let mut it = match (a.set, a.k) {
                (SetKind::LambdaK, Some(k)) => multiindex::enumerate_lambda_k_with_budget(a.m, a.n, k, budget)?,
                (SetKind::LambdaK, None) => return Err(CliError::Usage("--set lambda-k needs --k".into())),
                _ => multiindex::enumerate_lambda_with_budget(a.m, a.n, budget)?,
            };
            while let Some(alpha) = it.advance() {
                push(alpha, multiindex::multiplicity_of(alpha).to_string());
            }
        }
        SetKind::J => {
            let mut it = multiindex::enumerate_j_with_budget(a.m, a.n, budget)?;
            while let Some(t) = it.advance() {
                let j = multiindex::IndexTuple::new(t.to_vec(), a.n)?;
                push(t, multiindex::tuple_multiplicity(&j).to_string());
            }
        }
    }
    Ok(Artifact::table(table))
}

fn parse_signs(s: &str) -> Result<Vec<i8>, CliError> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            other => Err(CliError::Usage(format!("signs must be + or -, got {other:?}"))),
        })
        .collect()
}

fn poly(cfg: &RunConfig, c: &PolyCmd) -> Result<Artifact, CliError> {
    let value = match c {
        PolyCmd::Random { m, n } => polynomial::gaussian_poly_seeded(*m, *n, cfg.seed)?.to_json_value(),
        PolyCmd::Sign { m, n, signs } => {
            let signs = match signs {
                Some(s) => parse_signs(s)?,
                None => polynomial::random_signs(*m, *n, cfg.seed, cfg.budget.unwrap_or(DEFAULT_STREAM_BUDGET))?,
            };
            polynomial::sign_polynomial_from_slice(*m, *n, &signs)?.to_json_value()
        }
        PolyCmd::Moebius { a, degree } => return Artifact::json(&polynomial::moebius_series(*a, *degree)?.to_json_value()),
        PolyCmd::Series { n, degree, p } => {
            let budget = cfg.budget.unwrap_or(1 << 20);
            let s = polynomial::random_series(*n, *degree, cfg.seed, budget, *p, &cfg.opt())?;
            return Artifact::json(&s.to_json_value());
        }
    };
    Artifact::json(&value)
}

fn read_poly(path: &Path) -> Result<HomPoly, CliError> {
    Ok(HomPoly::from_json(&unwrap_result(&fs::read_to_string(path)?)?)?)
}

fn read_series(path: &Path) -> Result<TruncatedSeries, CliError> {
    Ok(TruncatedSeries::from_json(&unwrap_result(&fs::read_to_string(path)?)?)?)
}

#[derive(Serialize)]
struct NormOut {
    value: f64,
    witness: Vec<num_complex::Complex64>,
    converged: bool,
    restarts: usize,
    gap: f64,
    provenance: &'static str,
}

fn norm(cfg: &RunConfig, a: &NormArgs) -> Result<Artifact, CliError> {
    let poly = read_poly(&a.poly)?;
    let est = if a.majorant {
        optimize::majorant_sup(&poly, a.q.unwrap_or(a.p), &cfg.opt())?
    } else {
        if a.q.is_some() {
            return Err(CliError::Usage("--q only applies with --majorant".into()));
        }
        optimize::sup_norm(&poly, a.p, &cfg.opt())?
    };
    Artifact::json(&NormOut {
        value: est.value,
        provenance: if est.exact { "closed-form" } else { "estimate" },
        witness: est.witness,
        converged: est.converged,
        restarts: est.restarts,
        gap: est.gap,
    })
}

fn to_u32(v: u64, what: &str) -> Result<u32, CliError> {
    u32::try_from(v).map_err(|_| CliError::Usage(format!("{what} = {v} is too large")))
}

fn to_usize(v: u64, what: &str) -> Result<usize, CliError> {
    usize::try_from(v).map_err(|_| CliError::Usage(format!("{what} = {v} is too large")))
}

fn bound(c: &BoundCmd) -> Result<Artifact, CliError> {
    let (kind, a): (&str, &BoundArgs) = match c {
        BoundCmd::Jsum(a) => ("jsum", a),
        BoundCmd::Chiupper(a) => ("chiupper", a),
        BoundCmd::Envelope(a) => ("envelope", a),
        BoundCmd::Region(a) => ("region", a),
        BoundCmd::Rate(a) => ("rate", a),
        BoundCmd::Bayart(a) => ("bayart", a),
    };
    let e = ExponentPair::new(a.p, a.q);
    if kind == "region" {
        let r = bounds::region_classify(a.p, a.q);
        let mut flags = Vec::new();
        if r.boundary_i_ii {
            flags.push("boundary-i-ii");
        }
        if r.boundary_ii_iii {
            flags.push("boundary-ii-iii");
        }
        if r.extrapolated {
            flags.push("extrapolated");
        }
        flags.push("no-constant");
        let mut table = Table::new(&["p", "q", "region", "rate", "n_exponent", "log_exponent", "flags"]);
        table.push(vec![
            a.p.to_string(),
            a.q.to_string(),
            r.region.to_string(),
            r.rate_string(),
            r.n_exponent.to_string(),
            r.log_exponent.to_string(),
            flags.join(";"),
        ]);
        let mut art = Artifact::table(table);
        art.json = json!({
            "p": a.p,
            "q": a.q,
            "region": r.region,
            "rate": r.rate_string(),
            "n_exponent": r.n_exponent.to_string(),
            "log_exponent": r.log_exponent.to_string(),
            "flags": flags,
        });
        art.default_format = crate::Format::Json;
        return Ok(art);
    }
    let beta = a.beta_override.unwrap_or_else(|| e.beta_f64());
    let mut table = Table::new(&["m", "n", "p", "q", "value", "regime", "flags", "provenance"]);
    for &m in &a.m.0 {
        let m = to_u32(m, "m")?;
        for &n in &a.n.0 {
            let (value, regime, flags) = match kind {
                "jsum" => (bounds::j_sum_partition(m, to_usize(n, "n")?, beta)?, String::new(), String::new()),
                "chiupper" => {
                    let ln = bounds::ln_chi_upper_small_pq(m, to_usize(n, "n")?, &e, a.exp_base)?;
                    (ln.exp(), String::new(), format!("exp-base-{}", exp_base_str(a.exp_base)))
                }
                "envelope" => {
                    let env = bounds::envelope_constant(m, n, &e)?;
                    let regimes: Vec<String> = env.regimes.iter().map(ToString::to_string).collect();
                    (env.value, regimes.join(";"), "no-constant".into())
                }
                "rate" => {
                    let region = bounds::region_classify(a.p, a.q).region;
                    (bounds::rate(a.p, a.q, n as f64)?, region.to_string(), "no-constant".into())
                }
                "bayart" => {
                    let b = bounds::bayart_bound(m, to_usize(n, "n")?, a.p)?;
                    let flags = if b.log_substituted { "log-m-substituted;no-constant" } else { "no-constant" };
                    (b.value, String::new(), flags.into())
                }
                _ => unreachable!("kinds are fixed above"),
            };
            table.push(vec![
                m.to_string(),
                n.to_string(),
                a.p.to_string(),
                a.q.to_string(),
                sci(value),
                regime,
                flags,
                "closed-form".into(),
            ]);
        }
    }
    let mut art = Artifact::table(table);
    art.default_format = crate::Format::Json;
    Ok(art)
}

fn exp_base_str(b: bounds::ExpBase) -> &'static str {
    match b {
        bounds::ExpBase::P => "p",
        bounds::ExpBase::Q => "q",
    }
}

#[derive(Serialize)]
struct SearchOut {
    search: witness::SignSearch,
    chi_lower: f64,
    bayart_ratio: f64,
}

fn witness_cmd(cfg: &RunConfig, c: &WitnessCmd) -> Result<Artifact, CliError> {
    let (a, kind) = match c {
        WitnessCmd::Search(a) => (a, "search"),
        WitnessCmd::Bracket(a) => (a, "bracket"),
        WitnessCmd::Brute(a) => (a, "brute"),
    };
    let WitnessArgs { m, n, p, q, analytic } = a.clone();
    let e = ExponentPair::new(p, q.unwrap_or(p));
    match kind {
        "search" => {
            let sc = SignSearchConfig {
                seed: cfg.seed,
                cap: cfg.budget.map_or(SignSearchConfig::default().cap, |b| usize::try_from(b).unwrap_or(usize::MAX)),
                ..Default::default()
            };
            let search = witness::sign_search(m, n, p, &sc)?;
            Artifact::json(&SearchOut {
                chi_lower: witness::chi_lower_flat(m, n, e.q, search.estimate.value)? / cfg.slack,
                bayart_ratio: witness::bayart_ratio(&search)?,
                search,
            })
        }
        "bracket" => Artifact::json(&witness::chi_bracket(m, n, &e, &bracket_config(cfg, analytic))?),
        _ => {
            let bc = BruteConfig {
                seed: cfg.seed,
                deflate: cfg.slack,
                ..Default::default()
            };
            Artifact::json(&witness::brute_chi(m, n, &e, &bc)?)
        }
    }
}

fn exponent_pair(p: Exponent, q: Exponent) -> ExponentPair {
    ExponentPair::new(p, q)
}

fn bohr_cmd(cfg: &RunConfig, c: &BohrCmd) -> Result<Artifact, CliError> {
    match c {
        BohrCmd::Bracket { n, p, q, mmax, analytic } => {
            let b = bohr::k_bracket(*n, &exponent_pair(*p, *q), *mmax, &bracket_config(cfg, *analytic))?;
            Artifact::json(&b)
        }
        BohrCmd::Oned { tol, series } => {
            let oc = OneDConfig {
                random_series: *series,
                seed: cfg.seed,
                ..Default::default()
            };
            Artifact::json(&bohr::bohr_1d_bracket(*tol, &oc)?)
        }
        BohrCmd::Wiener { series, p } => {
            let s = read_series(series)?;
            Artifact::json(&bohr::wiener_check(&s, *p, cfg.slack, &cfg.opt())?)
        }
        BohrCmd::Table { n_grid, p, q, mmax, analytic } => {
            let grid = n_grid
                .0
                .iter()
                .map(|&n| to_usize(n, "n"))
                .collect::<Result<Vec<_>, _>>()?;
            let rows = bohr::bohr_table(&grid, &exponent_pair(*p, *q), *mmax, &bracket_config(cfg, *analytic))?;
            let mut table = Table::new(&["n", "lower", "upper", "region", "rate", "lower_src", "upper_src", "flags"]);
            for r in rows {
                table.push(vec![
                    r.n.to_string(),
                    sci(r.lower),
                    sci(r.upper),
                    r.region.to_string(),
                    sci(r.rate),
                    r.lower_src.to_string(),
                    r.upper_src.to_string(),
                    "no-constant".into(),
                ]);
            }
            Ok(Artifact::table(table))
        }
    }
}
