//! Bohr-radius brackets.
//!
//! `K_m = χ_M^{−1/m}`, so a `χ_M` bracket maps to a `K_m` bracket with the
//! endpoints swapped. For the full radius,
//! `(1/3)·inf_m χ_up(m)^{−1/m} ≤ K ≤ min(1/3, inf_m K_m)`.
//!
//! The one-variable radius `1/3` is reproduced from the Möbius family and a
//! random-series check, and Wiener's coefficient inequality is tested on
//! truncated series.

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, Region};
use crate::error::{Error, Result};
use crate::exponent::{Exponent, ExponentPair};
use crate::multiindex::MultiIndex;
use crate::optimize::{self, NormEstimate, OptConfig};
use crate::polynomial::{moebius_series, random_series, HomPoly, TruncatedSeries};
use crate::witness::{self, BoundBracket, BracketConfig, Provenance};

pub const ONE_THIRD: f64 = 1.0 / 3.0;

/// Certified part of the `m → ∞` tail in [`k_bracket`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    /// Upper bound on `sup_{m > M_max} χ_up(m)^{1/m}`.
    pub bound: f64,
    /// `(|Λ(m,n)|·n^{m/p})^{1/m}` at `M_max + 1`; nonincreasing in `m`.
    pub generic_at_next: f64,
    /// `e·n^{1/q′}`, the limit of the increasing simplex root.
    pub simplex_limit: f64,
    /// `(m, χ_up(m)^{1/m})` on a geometric grid up to `10·M_max`, for reference.
    pub grid: Vec<(u32, f64)>,
}

/// `[lower, upper]` for `K` or `K_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusBracket {
    pub n: usize,
    pub p: Exponent,
    pub q: Exponent,
    /// Degree for `K_m`; `None` for the full radius.
    pub m: Option<u32>,
    pub m_max: Option<u32>,
    pub lower: f64,
    pub upper: f64,
    pub lower_src: Provenance,
    pub upper_src: Provenance,
    /// Degree at which the binding endpoint was found.
    pub lower_m: Option<u32>,
    pub upper_m: Option<u32>,
    pub tail: Option<TailReport>,
    pub flags: Vec<String>,
}

impl RadiusBracket {
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.lower - tol <= x && x <= self.upper + tol
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// `K_m` bracket from a `χ_M` bracket.
pub fn k_m_from_chi(chi: &BoundBracket) -> RadiusBracket {
    let m = chi.m as f64;
    RadiusBracket {
        n: chi.n,
        p: chi.p,
        q: chi.q,
        m: Some(chi.m),
        m_max: None,
        lower: (-chi.ln_upper / m).exp(),
        upper: (-chi.ln_lower / m).exp(),
        lower_src: chi.upper_src,
        upper_src: chi.lower_src,
        lower_m: Some(chi.m),
        upper_m: Some(chi.m),
        tail: None,
        flags: chi.flags.clone(),
    }
}

pub fn k_m_bracket(m: u32, n: usize, e: &ExponentPair, cfg: &BracketConfig) -> Result<RadiusBracket> {
    Ok(k_m_from_chi(&witness::chi_bracket(m, n, e, cfg)?))
}

/// `sup_{m > M} χ_up(m)^{1/m}` from the two explicit upper bounds.
fn tail_report(n: usize, e: &ExponentPair, m_max: u32, cfg: &BracketConfig) -> Result<TailReport> {
    let next = m_max + 1;
    let generic_at_next = (bounds::ln_coeff_chi_upper_generic(next, n, e.p)? / next as f64).exp();
    let simplex_limit = std::f64::consts::E * (n as f64).powf(e.q_conj().recip_f64());
    let mut grid = Vec::new();
    let mut m = next;
    while m <= 10 * m_max.max(1) {
        let b = witness::chi_bracket_from_parts(m, n, e, None, None, cfg.slack, cfg.exp_base)?;
        grid.push((m, (b.ln_upper / m as f64).exp()));
        m *= 2;
    }
    Ok(TailReport {
        bound: generic_at_next.min(simplex_limit),
        generic_at_next,
        simplex_limit,
        grid,
    })
}

/// Bracket for `K(B_{ℓ_p^n}, B_{ℓ_q^n})` from degrees `1..=M_max` plus a tail bound.
///
/// Witness searches in `cfg` are run for every degree whose support fits their caps.
pub fn k_bracket(n: usize, e: &ExponentPair, m_max: u32, cfg: &BracketConfig) -> Result<RadiusBracket> {
    if m_max == 0 {
        return Err(Error::pre("M_max must be at least 1"));
    }
    let per_m = (1..=m_max)
        .map(|m| k_m_bracket(m, n, e, cfg))
        .collect::<Result<Vec<_>>>()?;
    k_bracket_from_parts(n, e, &per_m, cfg)
}

/// Assembles [`k_bracket`] from per-degree `K_m` brackets for `m = 1..=M_max`.
pub fn k_bracket_from_parts(
    n: usize,
    e: &ExponentPair,
    per_m: &[RadiusBracket],
    cfg: &BracketConfig,
) -> Result<RadiusBracket> {
    let m_max = per_m.len() as u32;
    if m_max == 0 {
        return Err(Error::pre("need at least one degree"));
    }
    let tail = tail_report(n, e, m_max, cfg)?;
    // K_m lower = χ_up^{−1/m}; the worst degree gives the smallest.
    let mut worst = (f64::INFINITY, 0u32, Provenance::Trivial);
    for b in per_m {
        if b.lower < worst.0 {
            worst = (b.lower, b.m.unwrap_or(0), b.lower_src);
        }
    }
    let mut flags = Vec::new();
    let tail_k = 1.0 / tail.bound;
    let (lower_src, lower_m) = if tail_k < worst.0 {
        flags.push("lower-from-tail".to_string());
        worst.0 = tail_k;
        (Provenance::CoeffGeneric, None)
    } else {
        (worst.2, Some(worst.1))
    };
    let lower = ONE_THIRD * worst.0;

    let mut upper = (ONE_THIRD, Provenance::Trivial, None);
    for b in per_m {
        if b.upper < upper.0 {
            upper = (b.upper, b.upper_src, b.m);
        }
    }
    if upper.1.estimate_based() {
        flags.push("estimate-based".to_string());
    }
    Ok(RadiusBracket {
        n,
        p: e.p,
        q: e.q,
        m: None,
        m_max: Some(m_max),
        lower,
        upper: upper.0,
        lower_src,
        upper_src: upper.1,
        lower_m,
        upper_m: upper.2,
        tail: Some(tail),
        flags,
    })
}

// ---------------------------------------------------------------------------
// One variable

/// Settings for [`bohr_1d_bracket`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneDConfig {
    /// Truncation degree of the Möbius witnesses.
    pub degree: u32,
    /// Values of `a` tried at each radius.
    pub a_grid: Vec<f64>,
    /// Random series checked at `1/3 − tol`.
    pub random_series: usize,
    pub seed: u64,
}

impl Default for OneDConfig {
    fn default() -> Self {
        OneDConfig {
            degree: 12,
            a_grid: vec![0.5, 0.9, 0.99, 0.999, 1.0 - 1e-4],
            random_series: 10_000,
            seed: 0,
        }
    }
}

/// Output of [`bohr_1d_bracket`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneDBracket {
    pub lower: f64,
    pub upper: f64,
    pub lower_src: Provenance,
    pub upper_src: Provenance,
    /// Wiener's argument gives `K(𝔻) ≥ 1/3` outright.
    pub analytic_lower: f64,
    /// The `a` whose Bohr sum exceeds 1 at `upper`.
    pub witness_a: f64,
    pub witness_sum: f64,
    pub checked_series: usize,
    pub failed_series: usize,
}

/// Largest truncated Möbius Bohr sum over the grid at radius `r`.
fn moebius_excess(r: f64, cfg: &OneDConfig) -> Result<(f64, f64)> {
    let opt = OptConfig::default();
    let mut best = (f64::NEG_INFINITY, 0.0);
    for &a in &cfg.a_grid {
        let f = moebius_series(a, cfg.degree)?;
        let s = optimize::bohr_sum(&f, r, Exponent::INF, &opt)?.value;
        if s > best.0 {
            best = (s, a);
        }
    }
    Ok(best)
}

/// Bracket around `K(𝔻)` of width at most `2·tol`.
///
/// Truncated sums are below the full ones, so a truncated Möbius sum above 1
/// at radius `r` shows `K(𝔻) < r`.
pub fn bohr_1d_bracket(tol: f64, cfg: &OneDConfig) -> Result<OneDBracket> {
    if !(tol > 0.0 && tol < 0.1) {
        return Err(Error::pre("tol must lie in (0, 0.1)"));
    }
    if cfg.a_grid.is_empty() || cfg.degree == 0 {
        return Err(Error::pre("need a nonempty a-grid and degree ≥ 1"));
    }
    let (mut lo, mut hi) = (0.25, 0.5);
    let (s_hi, _) = moebius_excess(hi, cfg)?;
    if s_hi <= 1.0 {
        return Err(Error::BudgetExceeded {
            what: "Möbius witness at r = 1/2",
            needed: "a sum above 1".into(),
            budget: cfg.a_grid.len() as u64,
        });
    }
    while hi - lo > tol / 8.0 {
        let mid = 0.5 * (lo + hi);
        if moebius_excess(mid, cfg)?.0 > 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (witness_sum, witness_a) = moebius_excess(hi, cfg)?;

    let r = ONE_THIRD - tol;
    let opt = OptConfig::default().with_restarts(1);
    let mut failed = 0;
    for i in 0..cfg.random_series {
        let degree = 1 + (i % cfg.degree as usize) as u32;
        let f = random_series(1, degree, cfg.seed.wrapping_add(i as u64), 1 << 16, Exponent::INF, &opt)?;
        let sup = optimize::series_sup(&f, Exponent::INF, &opt)?.value;
        let sum = optimize::bohr_sum(&f, r, Exponent::INF, &opt)?.value;
        if sum > sup * (1.0 + 1e-12) {
            failed += 1;
        }
    }
    let lower = if failed == 0 { r } else { 0.0 };
    Ok(OneDBracket {
        lower,
        upper: hi,
        lower_src: Provenance::MonteCarlo,
        upper_src: Provenance::Moebius,
        analytic_lower: ONE_THIRD,
        witness_a,
        witness_sum,
        checked_series: cfg.random_series,
        failed_series: failed,
    })
}

// ---------------------------------------------------------------------------
// Wiener

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WienerRow {
    pub m: u32,
    pub norm: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WienerReport {
    pub sup: NormEstimate,
    pub slack: f64,
    pub rows: Vec<WienerRow>,
    pub all_pass: bool,
}

/// Tolerance on the normalization precondition.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// `‖P_m‖ ≤ slack·(1 − |a₀|²)` for every part, given `sup |F| ≤ 1` on `B_{ℓ_p^n}`.
pub fn wiener_check(series: &TruncatedSeries, p: Exponent, slack: f64, cfg: &OptConfig) -> Result<WienerReport> {
    let sup = optimize::series_sup(series, p, cfg)?;
    if sup.value > 1.0 + NORMALIZATION_TOL {
        return Err(Error::Unnormalized(sup.value));
    }
    let bound = 1.0 - series.a0().norm_sqr();
    let rows = series
        .parts()
        .iter()
        .map(|part| {
            let norm = optimize::sup_norm(part, p, cfg)?.value;
            Ok(WienerRow {
                m: part.degree(),
                norm,
                bound,
                pass: norm <= slack * bound + 1e-12,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_pass = rows.iter().all(|r| r.pass);
    Ok(WienerReport {
        sup,
        slack,
        rows,
        all_pass,
    })
}

/// `g(λ) = F(λ·z)`, a one-variable series with coefficients `P_m(z)`.
pub fn line_restriction(series: &TruncatedSeries, z: &[Complex64]) -> Result<TruncatedSeries> {
    let parts = series
        .parts()
        .iter()
        .map(|part| {
            let c = part.eval(z)?;
            let m = part.degree();
            if c.is_zero() {
                Ok(HomPoly::zero(1, m))
            } else {
                HomPoly::monomial(MultiIndex::new(vec![m]), c)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    TruncatedSeries::new(1, series.a0(), parts)
}

// ---------------------------------------------------------------------------
// Tables

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
    pub region: Region,
    pub rate: f64,
    pub lower_src: Provenance,
    pub upper_src: Provenance,
}

/// `K` brackets over a grid of dimensions, next to the region rate.
pub fn bohr_table(n_grid: &[usize], e: &ExponentPair, m_max: u32, cfg: &BracketConfig) -> Result<Vec<TableRow>> {
    let report = bounds::region_classify(e.p, e.q);
    n_grid
        .iter()
        .map(|&n| {
            let b = k_bracket(n, e, m_max, cfg)?;
            Ok(TableRow {
                n,
                lower: b.lower,
                upper: b.upper,
                region: report.region,
                rate: if n >= 2 { report.rate(n as f64) } else { 1.0 },
                lower_src: b.lower_src,
                upper_src: b.upper_src,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> Exponent {
        s.parse().unwrap()
    }

    fn pair(p: &str, q: &str) -> ExponentPair {
        ExponentPair::new(e(p), e(q))
    }

    #[test]
    fn linear_k_m() {
        let b = k_m_bracket(1, 4, &pair("2", "2"), &BracketConfig::analytic()).unwrap();
        assert!(b.contains(1.0, 1e-12));
        assert_eq!(b.upper, 1.0);
        let b = k_m_bracket(1, 4, &pair("2", "inf"), &BracketConfig::analytic()).unwrap();
        assert!((b.upper - 0.5).abs() < 1e-12);
    }

    #[test]
    fn one_dimension_contains_one_third() {
        let b = k_bracket(1, &pair("inf", "inf"), 4, &BracketConfig::analytic()).unwrap();
        assert!(b.contains(ONE_THIRD, 1e-12));
        assert!(b.upper <= ONE_THIRD + 1e-12);
    }

    #[test]
    fn k_upper_respects_trivial_bound() {
        for (p, q) in [("inf", "inf"), ("2", "4/3"), ("1", "2"), ("3/2", "1")] {
            for n in [2, 5, 20] {
                let b = k_bracket(n, &pair(p, q), 5, &BracketConfig::analytic()).unwrap();
                assert!(b.upper <= ONE_THIRD + 1e-9);
                assert!(b.lower <= b.upper + 1e-12, "{p} {q} {n}: {b:?}");
            }
        }
    }

    #[test]
    fn q1_lower_is_dimension_free() {
        let floor = ONE_THIRD / std::f64::consts::E;
        for n in [2, 8, 64] {
            let b = k_bracket(n, &pair("2", "1"), 6, &BracketConfig::analytic()).unwrap();
            assert!(b.lower >= floor * (1.0 - 1e-12), "{n}: {}", b.lower);
        }
    }

    #[test]
    fn one_d_bracket_small() {
        let cfg = OneDConfig {
            random_series: 50,
            ..Default::default()
        };
        let b = bohr_1d_bracket(1e-3, &cfg).unwrap();
        assert!(b.lower <= ONE_THIRD && ONE_THIRD <= b.upper);
        assert!(b.upper - b.lower <= 2e-3);
        assert_eq!(b.failed_series, 0);
    }

    #[test]
    fn moebius_closed_form_threshold() {
        for a in [0.2f64, 0.5, 0.9] {
            let r = 1.0 / (1.0 + 2.0 * a);
            let closed = a + (1.0 - a * a) * r / (1.0 - a * r);
            assert!((closed - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn wiener_moebius_equality() {
        let f = moebius_series(0.5, 40).unwrap();
        let cfg = OptConfig::default().with_restarts(4);
        let r = wiener_check(&f, Exponent::TWO, 1.0, &cfg).unwrap();
        assert!(r.all_pass);
        assert!((r.rows[0].norm - 0.75).abs() < 1e-9);
        let c = TruncatedSeries::new(2, Complex64::new(0.5, 0.0), vec![]).unwrap();
        assert!(wiener_check(&c, Exponent::TWO, 1.0, &cfg).unwrap().all_pass);
        let big = TruncatedSeries::new(1, Complex64::new(2.0, 0.0), vec![]).unwrap();
        assert!(matches!(
            wiener_check(&big, Exponent::TWO, 1.0, &cfg),
            Err(Error::Unnormalized(_))
        ));
    }

    #[test]
    fn line_restriction_evaluates_on_the_line() {
        let cfg = OptConfig::default().with_restarts(8);
        let f = random_series(2, 3, 5, 1000, Exponent::TWO, &cfg).unwrap();
        let z = [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.5)];
        let g = line_restriction(&f, &z).unwrap();
        let lam = Complex64::new(0.4, -0.7);
        let lz: Vec<_> = z.iter().map(|v| v * lam).collect();
        assert!((g.eval(&[lam]).unwrap() - f.eval(&lz).unwrap()).norm() < 1e-12);
    }
}
