//! Closed-form bounds.
//!
//! The central quantity is `S(m,n,β) = Σ_{j∈𝒥(m−1,n)} |j|^{−β}`, computed
//! either by streaming `Λ(m−1,n)` or by grouping multi-indices by partition
//! shape. Around it sit the unconditionality upper bounds, the envelope
//! constants, the random-polynomial norm shape and the region map for the
//! growth of `K(B_{ℓ_p^n}, B_{ℓ_q^n})`.
//!
//! None of the asymptotic statements carry constants here; every envelope and
//! rate is reported without one.

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::{Exponent, ExponentPair, Rational};
use crate::multiindex::{
    self, lambda_card, ln_big, ln_factorial, multiplicity_f64, IndexTuple, PartitionShape,
};

/// Compensated summation.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

fn check_m(m: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::pre("m must be at least 1"));
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::pre("n must be at least 1"));
    }
    Ok(())
}

/// `β` as a float; `None` (infinite) becomes `+∞`.
pub fn beta_of(e: &ExponentPair) -> f64 {
    e.beta_f64()
}

/// `|j|^{−β}` with `1^{−∞} = 1`.
fn weight(mult: f64, beta: f64) -> f64 {
    if beta == 0.0 || mult == 1.0 {
        1.0
    } else {
        mult.powf(-beta)
    }
}

/// `S(m,n,β)` by streaming `Λ(m−1,n)`; `Λ(0,n)` is the single empty tuple.
pub fn j_sum_naive(m: u32, n: usize, beta: f64, budget: u64) -> Result<f64> {
    check_m(m)?;
    check_n(n)?;
    let mut it = multiindex::enumerate_lambda_with_budget(m - 1, n, budget)?;
    let mut terms = Vec::new();
    while let Some(a) = it.advance() {
        terms.push(weight(multiplicity_f64(a), beta));
    }
    Ok(kahan_sum(terms))
}

fn shape_terms(m: u32, n: usize) -> Result<impl Iterator<Item = PartitionShape>> {
    check_m(m)?;
    check_n(n)?;
    multiindex::partition_shapes(m - 1, n)
}

/// `S(m,n,β)` by partition shapes: `Σ_λ count(λ,n)·((m−1)!/λ!)^{−β}`.
pub fn j_sum_partition(m: u32, n: usize, beta: f64) -> Result<f64> {
    Ok(kahan_sum(shape_terms(m, n)?.map(|s| {
        let count = s.arrangements.to_f64().unwrap_or(f64::INFINITY);
        count * weight(multiplicity_f64(&s.parts), beta)
    })))
}

/// `ln S(m,n,β)`, valid when `S` itself overflows.
pub fn ln_j_sum(m: u32, n: usize, beta: f64) -> Result<f64> {
    let logs: Vec<f64> = shape_terms(m, n)?
        .filter_map(|s| {
            let w = weight(multiplicity_f64(&s.parts), beta);
            (w > 0.0).then(|| ln_big(&s.arrangements) + w.ln())
        })
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Ok(top);
    }
    Ok(top + kahan_sum(logs.iter().map(|l| (l - top).exp())).ln())
}

/// `S(m,n,β)` with `β` taken from the exponent pair.
pub fn j_sum(m: u32, n: usize, e: &ExponentPair) -> Result<f64> {
    j_sum_partition(m, n, beta_of(e))
}

/// `S` restricted by the largest exponent: entry `k` sums over `j ∈ 𝒥(m−1,n)`
/// whose most repeated index appears exactly `k` times (`k = 0..=m−1`).
pub fn j_sum_shells(m: u32, n: usize, beta: f64) -> Result<Vec<f64>> {
    let mut shells = vec![Vec::new(); m as usize];
    for s in shape_terms(m, n)? {
        let k = s.parts.first().copied().unwrap_or(0) as usize;
        let count = s.arrangements.to_f64().unwrap_or(f64::INFINITY);
        shells[k].push(count * weight(multiplicity_f64(&s.parts), beta));
    }
    Ok(shells.into_iter().map(kahan_sum).collect())
}

/// `(k-bounded part, complement)` of `S`: indices repeated at most `k` times, and the rest.
pub fn j_sum_split(m: u32, n: usize, beta: f64, k: u32) -> Result<(f64, f64)> {
    let shells = j_sum_shells(m, n, beta)?;
    let cut = (k as usize + 1).min(shells.len());
    Ok((
        kahan_sum(shells[..cut].iter().copied()),
        kahan_sum(shells[cut..].iter().copied()),
    ))
}

/// Which power of `e` appears in the unconditionality bounds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpBase {
    #[default]
    P,
    Q,
}

impl std::str::FromStr for ExpBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "p" => Ok(ExpBase::P),
            "q" => Ok(ExpBase::Q),
            other => Err(Error::Parse(format!("exp base must be p or q, got {other:?}"))),
        }
    }
}

/// `ln(m·e^{1+(m−1)/r}·S^{1/q′})` for `1 ≤ q ≤ p ≤ 2`, with `r = p` or `q`.
pub fn ln_chi_upper_small_pq(m: u32, n: usize, e: &ExponentPair, base: ExpBase) -> Result<f64> {
    check_m(m)?;
    check_n(n)?;
    if !(e.q <= e.p && e.p <= Exponent::TWO) {
        return Err(Error::InvalidExponent(format!(
            "bound needs 1 ≤ q ≤ p ≤ 2, got {e}"
        )));
    }
    let r = match base {
        ExpBase::P => e.p,
        ExpBase::Q => e.q,
    };
    let inv_qc = e.q_conj().recip_f64();
    let s_term = if inv_qc == 0.0 {
        0.0
    } else {
        inv_qc * ln_j_sum(m, n, beta_of(e))?
    };
    Ok((m as f64).ln() + 1.0 + (m - 1) as f64 * r.recip_f64() + s_term)
}

/// `m·e^{1+(m−1)/p}·S^{1/q′}`, an upper bound on `χ_M` for `1 ≤ q ≤ p ≤ 2`.
pub fn chi_upper_small_pq(m: u32, n: usize, e: &ExponentPair) -> Result<f64> {
    ln_chi_upper_small_pq(m, n, e, ExpBase::P).map(f64::exp)
}

/// `ln((m^m/m!)·n^{m/q′})`.
///
/// Cauchy estimates at `x = α/m` on `B_{ℓ_1}` give `|a_α| ≤ (m^m/α^α)‖P‖`,
/// and `α^α ≥ α!` turns the majorant into `(m^m/m!)·(Σ|z_i|)^m`. Valid for all `p, q`.
pub fn ln_chi_upper_simplex(m: u32, n: usize, q: Exponent) -> Result<f64> {
    check_m(m)?;
    check_n(n)?;
    let mf = m as f64;
    Ok(mf * mf.ln() - ln_factorial(m) + mf * q.conjugate().recip_f64() * (n as f64).ln())
}

pub fn chi_upper_simplex(m: u32, n: usize, q: Exponent) -> Result<f64> {
    ln_chi_upper_simplex(m, n, q).map(f64::exp)
}

/// `ln(|Λ(m,n)|·n^{m/p})`.
pub fn ln_coeff_chi_upper_generic(m: u32, n: usize, p: Exponent) -> Result<f64> {
    check_n(n)?;
    Ok(ln_big(&lambda_card(m, n)) + m as f64 * p.recip_f64() * (n as f64).ln())
}

/// `|Λ(m,n)|·n^{m/p}`, a crude upper bound on `χ_M` for any `q`.
pub fn coeff_chi_upper_generic(m: u32, n: usize, p: Exponent) -> Result<f64> {
    ln_coeff_chi_upper_generic(m, n, p).map(f64::exp)
}

/// `m·e^{1+(m−1)/p}·|j|^{1/p}` for a slice index `j` of length `m−1`.
pub fn lempoly_rhs(m: u32, n: usize, p: Exponent, j: &IndexTuple) -> Result<f64> {
    if m < 2 {
        return Err(Error::pre("slice bound needs m ≥ 2"));
    }
    if j.len() != m as usize - 1 {
        return Err(Error::pre(format!(
            "slice index has length {}, expected {}",
            j.len(),
            m - 1
        )));
    }
    if j.indices().iter().any(|&i| i as usize > n || i == 0) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: j.indices().iter().copied().max().unwrap_or(0) as usize,
        });
    }
    let mult = multiindex::tuple_multiplicity(j).to_f64().unwrap_or(f64::INFINITY);
    let rp = p.recip_f64();
    Ok(m as f64 * (1.0 + (m - 1) as f64 * rp).exp() * weight(mult, -rp))
}

/// The `(m, n)` shape of the random-polynomial norm bound, without its constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BayartValue {
    pub value: f64,
    /// Set for `m = 1`, where `log m` is replaced by 1.
    pub log_substituted: bool,
}

/// `(log(m)·m!)^{1−1/p}·n^{1−1/p}` for `p ≤ 2`,
/// `(log(m)·m!)^{1/2}·n^{m(1/2−1/p)+1/2}` for `p ≥ 2`.
pub fn bayart_bound(m: u32, n: usize, p: Exponent) -> Result<BayartValue> {
    check_m(m)?;
    check_n(n)?;
    let log_substituted = m == 1;
    let log_m = if log_substituted { 1.0 } else { (m as f64).ln() };
    let ln_base = log_m.ln() + ln_factorial(m);
    let rp = p.recip_f64();
    let ln_n = (n as f64).ln();
    let ln_value = if p <= Exponent::TWO {
        (1.0 - rp) * (ln_base + ln_n)
    } else {
        0.5 * ln_base + (m as f64 * (0.5 - rp) + 0.5) * ln_n
    };
    Ok(BayartValue {
        value: ln_value.exp(),
        log_substituted,
    })
}

/// Minimum of `f(x) = x^a·n^{b/x}` over reals and over positive integers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinPowerLog {
    pub x_star: f64,
    pub value: f64,
    pub int_x: u64,
    pub int_value: f64,
}

pub fn power_log(a: f64, b: f64, n: f64, x: f64) -> f64 {
    (a * x.ln() + b * n.ln() / x).exp()
}

pub fn min_power_log(a: f64, b: f64, n: f64) -> Result<MinPowerLog> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::pre("a and b must be positive and finite"));
    }
    if !(n >= 2.0 && n.is_finite()) {
        return Err(Error::pre("n must be at least 2"));
    }
    let x_star = b * n.ln() / a;
    let value = power_log(a, b, n, x_star);
    let mut cands = vec![1.0, x_star.floor(), x_star.ceil()];
    cands.retain(|&x| x >= 1.0);
    let (int_x, int_value) = cands
        .into_iter()
        .map(|x| (x, power_log(a, b, n, x)))
        .min_by(|l, r| l.1.total_cmp(&r.1).then(l.0.total_cmp(&r.0)))
        .expect("1 is always a candidate");
    Ok(MinPowerLog {
        x_star,
        value,
        int_x: int_x as u64,
        int_value,
    })
}

/// The `m`-ranges in which the envelope estimates apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Regime {
    /// `m ≥ log(n)^{q′/p′}`.
    Large,
    /// `m ≤ log(n)/(log log(n)·β)`; every `m` when `β = 0`.
    Small,
    /// `log(n)^{1/c} ≤ m ≤ log(n)^c`.
    Middle,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Large => "large",
            Regime::Small => "small",
            Regime::Middle => "middle",
        })
    }
}

/// Width parameter of the middle regime.
pub const MIDDLE_REGIME_C: f64 = 2.0;

/// Fitted constant `C(m,n) = [S^{1/q′}·log(n)^{m/p′}/n^{m/q′}]^{1/m}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub m: u32,
    pub n: u64,
    pub value: f64,
    pub regimes: Vec<Regime>,
}

pub fn classify_regimes(m: u32, n: f64, e: &ExponentPair) -> Vec<Regime> {
    let ln_n = n.ln();
    let mf = m as f64;
    let mut out = Vec::new();
    let ratio = e.p_conj().recip_f64();
    let qc_inv = e.q_conj().recip_f64();
    // log(n)^{q′/p′} = exp((1/p′)/(1/q′)·ln ln n)
    let large_threshold = if qc_inv == 0.0 {
        if ratio == 0.0 { 1.0 } else { f64::INFINITY }
    } else {
        (ratio / qc_inv * ln_n.ln()).exp()
    };
    if mf >= large_threshold {
        out.push(Regime::Large);
    }
    let beta = e.beta_f64();
    if beta == 0.0 || (ln_n.ln() > 0.0 && mf <= ln_n / (ln_n.ln() * beta)) {
        out.push(Regime::Small);
    }
    if ln_n > 0.0 && ln_n.powf(1.0 / MIDDLE_REGIME_C) <= mf && mf <= ln_n.powf(MIDDLE_REGIME_C) {
        out.push(Regime::Middle);
    }
    out
}

/// The envelope constant, computed in logarithms; `n` may exceed `usize` range
/// only through the float path, so it is taken as `u64`.
pub fn envelope_constant(m: u32, n: u64, e: &ExponentPair) -> Result<Envelope> {
    check_m(m)?;
    if n < 3 {
        return Err(Error::pre("envelope needs n ≥ 3"));
    }
    if !(!e.q.is_one() && e.q <= e.p && e.p <= Exponent::TWO) {
        return Err(Error::InvalidExponent(format!(
            "envelope needs 1 < q ≤ p ≤ 2, got {e}"
        )));
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let ln_s = ln_j_sum(m, n as usize, beta_of(e))?;
    let mf = m as f64;
    let qc_inv = e.q_conj().recip_f64();
    let pc_inv = e.p_conj().recip_f64();
    let ln_c = (qc_inv * ln_s + mf * pc_inv * ln_n.ln() - mf * qc_inv * ln_n) / mf;
    Ok(Envelope {
        m,
        n,
        value: ln_c.exp(),
        regimes: classify_regimes(m, nf, e),
    })
}

// ---------------------------------------------------------------------------
// Regions

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    I,
    II,
    III,
    Q1,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::Q1 => "Q1",
        })
    }
}

/// Growth `log(n)^{log_exponent} / n^{n_exponent}` of the Bohr radius, without constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub p: Exponent,
    pub q: Exponent,
    pub region: Region,
    #[serde(with = "rational_str")]
    pub n_exponent: Rational,
    #[serde(with = "rational_str")]
    pub log_exponent: Rational,
    /// On the line `1/q = 1/2 + 1/p`, classified as I.
    pub boundary_i_ii: bool,
    /// At `p = 2`, where the II and III formulas coincide.
    pub boundary_ii_iii: bool,
    /// `p < 2 < q`, outside the printed table; the III formula is extended.
    pub extrapolated: bool,
    pub no_constant: bool,
}

mod rational_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        let parsed = match s.split_once('/') {
            Some((a, b)) => a
                .trim()
                .parse::<i128>()
                .ok()
                .zip(b.trim().parse::<i128>().ok())
                .filter(|(_, b)| *b != 0)
                .map(|(a, b)| Rational::new(a, b)),
            None => s.trim().parse::<i128>().ok().map(Rational::from_integer),
        };
        parsed.ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
    }
}

fn power_str(base: &str, r: &Rational) -> Option<String> {
    if r.is_zero() {
        None
    } else if *r == Rational::new(1, 2) {
        Some(format!("sqrt({base})"))
    } else if *r == Rational::from_integer(1) {
        Some(base.to_string())
    } else {
        Some(format!("({base})^({r})"))
    }
}

impl RegionReport {
    /// Human-readable rate such as `sqrt(log n)/sqrt(n)`.
    pub fn rate_string(&self) -> String {
        let num = power_str("log n", &self.log_exponent);
        let den = power_str("n", &self.n_exponent);
        match (num, den) {
            (None, None) => "1".into(),
            (Some(a), None) => a,
            (None, Some(b)) => format!("1/{b}"),
            (Some(a), Some(b)) => format!("{a}/{b}"),
        }
    }

    /// `log(n)^{a}/n^{b}` at `n`.
    pub fn rate(&self, n: f64) -> f64 {
        let a = self.log_exponent.to_f64().unwrap_or(0.0);
        let b = self.n_exponent.to_f64().unwrap_or(0.0);
        n.ln().powf(a) / n.powf(b)
    }
}

/// Region of `(p, q)` in the growth table of the Bohr radius.
pub fn region_classify(p: Exponent, q: Exponent) -> RegionReport {
    let one = Rational::from_integer(1);
    let half = Rational::new(1, 2);
    let (rp, rq) = (p.recip(), q.recip());
    let mut report = RegionReport {
        p,
        q,
        region: Region::Q1,
        n_exponent: Rational::zero(),
        log_exponent: Rational::zero(),
        boundary_i_ii: false,
        boundary_ii_iii: false,
        extrapolated: false,
        no_constant: true,
    };
    if q.is_one() {
        return report;
    }
    if p >= Exponent::TWO {
        let line = half + rp;
        if rq >= line {
            report.region = Region::I;
            report.boundary_i_ii = rq == line;
        } else {
            report.region = Region::II;
            report.n_exponent = line - rq;
            report.log_exponent = half;
        }
        report.boundary_ii_iii = p == Exponent::TWO;
    } else {
        report.region = Region::III;
        report.n_exponent = one - rq;
        report.log_exponent = one - rp;
        report.extrapolated = q > Exponent::TWO;
    }
    report
}

/// The classified rate at `n ≥ 2`.
pub fn rate(p: Exponent, q: Exponent, n: f64) -> Result<f64> {
    if !(n >= 2.0) {
        return Err(Error::pre("rate needs n ≥ 2"));
    }
    Ok(region_classify(p, q).rate(n))
}

/// `(1/3)·n^{1/q−1/p}·k_diag`, a lower bound on `K` from the diagonal radius when `p ≤ q`.
pub fn transfer_lower_pq(n: usize, e: &ExponentPair, k_diag: f64) -> Result<f64> {
    check_n(n)?;
    if e.p > e.q {
        return Err(Error::InvalidExponent(format!("transfer needs p ≤ q, got {e}")));
    }
    let ex = e.q.recip_f64() - e.p.recip_f64();
    Ok((n as f64).powf(ex) * k_diag / 3.0)
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
    fn j_sum_examples() {
        for n in [1, 3, 7] {
            assert_eq!(j_sum(2, n, &pair("2", "4/3")).unwrap(), n as f64);
        }
        assert_eq!(j_sum_partition(3, 2, 0.0).unwrap(), 3.0);
        assert_eq!(j_sum(3, 2, &pair("2", "4/3")).unwrap(), 2.5);
        assert_eq!(j_sum_naive(3, 2, 1.0, 100).unwrap(), 2.5);
        assert_eq!(j_sum_partition(1, 5, 1.0).unwrap(), 1.0);
        assert_eq!(j_sum_naive(1, 5, 1.0, 100).unwrap(), 1.0);
        assert!(j_sum_naive(9, 9, 1.0, 10).unwrap_err().is_budget());
        assert!((ln_j_sum(3, 2, 1.0).unwrap() - 2.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn shells_partition_the_sum() {
        let shells = j_sum_shells(5, 4, 0.5).unwrap();
        let total = j_sum_partition(5, 4, 0.5).unwrap();
        assert!((shells.iter().sum::<f64>() - total).abs() < 1e-12 * total);
        assert_eq!(shells[0], 0.0);
        let (bounded, rest) = j_sum_split(5, 4, 0.5, 2).unwrap();
        assert!((bounded + rest - total).abs() < 1e-12 * total);
    }

    #[test]
    fn chi_upper_examples() {
        let v = chi_upper_small_pq(1, 4, &pair("2", "2")).unwrap();
        assert!((v - std::f64::consts::E).abs() < 1e-12);
        let v = chi_upper_small_pq(2, 3, &pair("2", "2")).unwrap();
        assert!((v - 2.0 * 1.5f64.exp() * 3f64.sqrt()).abs() < 1e-12 * v);
        assert!(chi_upper_small_pq(2, 3, &pair("inf", "2")).is_err());
        assert!(chi_upper_small_pq(2, 3, &pair("4/3", "2")).is_err());
        let vq = ln_chi_upper_small_pq(3, 3, &pair("2", "4/3"), ExpBase::Q).unwrap();
        let vp = ln_chi_upper_small_pq(3, 3, &pair("2", "4/3"), ExpBase::P).unwrap();
        assert!(vq > vp);
    }

    #[test]
    fn generic_and_simplex_examples() {
        assert!((coeff_chi_upper_generic(1, 5, Exponent::INF).unwrap() - 5.0).abs() < 1e-12);
        assert!((coeff_chi_upper_generic(2, 2, Exponent::TWO).unwrap() - 6.0).abs() < 1e-12);
        // m = 1: the simplex bound is n^{1/q′}.
        assert!((chi_upper_simplex(1, 4, Exponent::TWO).unwrap() - 2.0).abs() < 1e-12);
        assert!((chi_upper_simplex(2, 3, Exponent::ONE).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn linear_case_is_dominated() {
        let ps = ["1", "4/3", "3/2", "2", "4", "inf"];
        for p in ps {
            for q in ps {
                let pr = pair(p, q);
                for n in [1usize, 2, 5, 16, 64] {
                    let ex = pr.q_conj().recip_f64() - pr.p_conj().recip_f64();
                    let exact = (n as f64).powf(ex).max(1.0);
                    assert!(coeff_chi_upper_generic(1, n, pr.p).unwrap() >= exact * (1.0 - 1e-12));
                    assert!(chi_upper_simplex(1, n, pr.q).unwrap() >= exact * (1.0 - 1e-12));
                    if pr.q <= pr.p && pr.p <= Exponent::TWO {
                        assert!(chi_upper_small_pq(1, n, &pr).unwrap() >= exact);
                    }
                }
            }
        }
    }

    #[test]
    fn lempoly_rhs_examples() {
        let j1 = IndexTuple::new(vec![1], 3).unwrap();
        let v = lempoly_rhs(2, 3, Exponent::INF, &j1).unwrap();
        assert!((v - 2.0 * std::f64::consts::E).abs() < 1e-12);
        let j11 = IndexTuple::new(vec![1, 1], 3).unwrap();
        let v = lempoly_rhs(3, 3, Exponent::ONE, &j11).unwrap();
        assert!((v - 3.0 * 3f64.exp()).abs() < 1e-10);
        assert!(lempoly_rhs(1, 3, Exponent::ONE, &IndexTuple::empty()).is_err());
        let j12 = IndexTuple::new(vec![1, 2], 3).unwrap();
        let v = lempoly_rhs(3, 3, Exponent::TWO, &j12).unwrap();
        assert!((v - 3.0 * 2f64.exp() * 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn bayart_examples() {
        let v = bayart_bound(2, 10, Exponent::INF).unwrap().value;
        let expect = (2f64.ln() * 2.0).sqrt() * 10f64.powf(1.5);
        assert!((v - expect).abs() < 1e-10 * expect);
        assert_eq!(bayart_bound(5, 10, Exponent::ONE).unwrap().value, 1.0);
        let a = bayart_bound(4, 7, Exponent::TWO).unwrap().value;
        let ln_base = 4f64.ln().ln() + ln_factorial(4);
        let below = (0.5 * (ln_base + 7f64.ln())).exp();
        let above = (0.5 * ln_base + 0.5 * 7f64.ln()).exp();
        assert!((a - below).abs() < 1e-12 * a && (a - above).abs() < 1e-12 * a);
        assert!(bayart_bound(1, 3, Exponent::TWO).unwrap().log_substituted);
    }

    #[test]
    fn min_power_log_examples() {
        let r = min_power_log(1.0, 1.0, std::f64::consts::E).unwrap();
        assert!((r.x_star - 1.0).abs() < 1e-15);
        let r = min_power_log(2.0, 1.0, 4f64.exp()).unwrap();
        assert!((r.x_star - 2.0).abs() < 1e-12);
        assert!((r.value - 4.0 * 2f64.exp()).abs() < 1e-10);
        assert_eq!(r.int_x, 2);
        for i in 1..100 {
            let x = i as f64 * 0.1;
            assert!(r.value <= power_log(2.0, 1.0, 4f64.exp(), x) * (1.0 + 1e-12));
        }
        assert!(min_power_log(0.0, 1.0, 3.0).is_err());
    }

    #[test]
    fn envelope_examples() {
        let diag = pair("2", "2");
        let v = envelope_constant(2, 8, &diag).unwrap();
        let expect = (8f64.sqrt() * 8f64.ln() / 8.0).sqrt();
        assert!((v.value - expect).abs() < 1e-12);
        assert!(v.regimes.contains(&Regime::Small));
        for m in 1..=6u32 {
            let n = 50u64;
            let card = lambda_card(m - 1, n as usize).to_f64().unwrap();
            let expect = (card.sqrt() * (n as f64).ln().powf(m as f64 / 2.0)
                / (n as f64).powf(m as f64 / 2.0))
            .powf(1.0 / m as f64);
            let got = envelope_constant(m, n, &diag).unwrap().value;
            assert!((got - expect).abs() < 1e-12 * expect);
        }
        assert!(envelope_constant(2, 2, &diag).is_err());
        assert!(envelope_constant(2, 8, &pair("inf", "2")).is_err());
    }

    #[test]
    fn region_examples() {
        let r = region_classify(Exponent::INF, Exponent::INF);
        assert_eq!(r.region, Region::II);
        assert_eq!(r.rate_string(), "sqrt(log n)/sqrt(n)");
        let r = region_classify(Exponent::TWO, Exponent::TWO);
        assert!(r.boundary_ii_iii);
        assert_eq!(r.rate_string(), "sqrt(log n)/sqrt(n)");
        let r = region_classify(e("4"), e("4/3"));
        assert_eq!(r.region, Region::I);
        assert!(r.boundary_i_ii);
        assert_eq!(r.rate_string(), "1");
        let r = region_classify(Exponent::INF, Exponent::TWO);
        assert_eq!(r.region, Region::I);
        assert_eq!(rate(Exponent::INF, Exponent::TWO, 100.0).unwrap(), 1.0);
        let r = region_classify(e("3/2"), Exponent::ONE);
        assert_eq!(r.region, Region::Q1);
        let v = rate(Exponent::TWO, e("3/2"), 1000.0).unwrap();
        let r = region_classify(Exponent::TWO, e("3/2"));
        assert_eq!(r.region, Region::II);
        assert!((v - 1000f64.ln().sqrt() / 1000f64.powf(1.0 / 3.0)).abs() < 1e-12);
        let r = region_classify(e("4/3"), e("3/2"));
        assert_eq!(r.region, Region::III);
        assert_eq!(r.rate_string(), "(log n)^(1/4)/(n)^(1/3)");
        assert!(region_classify(e("4/3"), e("3")).extrapolated);
    }

    #[test]
    fn transfer_examples() {
        assert!((transfer_lower_pq(10, &pair("2", "2"), 0.3).unwrap() - 0.1).abs() < 1e-15);
        assert!((transfer_lower_pq(1, &pair("1", "2"), 0.3).unwrap() - 0.1).abs() < 1e-15);
        let v = transfer_lower_pq(16, &pair("1", "2"), 0.3).unwrap();
        assert!((v - 0.025).abs() < 1e-15);
        assert!(transfer_lower_pq(16, &pair("2", "1"), 0.3).is_err());
    }
}
