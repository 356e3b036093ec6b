//! Lower bounds on `χ_M` and brackets around it.
//!
//! Three sources feed the lower side:
//!
//! - the flat-point chain `χ ≥ n^{m(1−1/q)}/‖P_ε‖_p` for sign polynomials
//!   `P_ε = Σ ε_α (m!/α!) z^α`, either with all signs `+1` (where the norm
//!   is known exactly) or with signs found by [`sign_search`];
//! - [`brute_chi`], a direct search over coefficient vectors for tiny instances.
//!
//! Optimizer norms are lower bounds, so a chain through an estimated
//! denominator can overshoot. Those values are divided by a slack factor and
//! flagged as estimate-based.

use std::fmt;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, ExpBase};
use crate::error::{Error, Result};
use crate::exponent::{Exponent, ExponentPair};
use crate::multiindex::{self, lambda_card, multiplicity_f64, IndexTuple, MultiIndex};
use crate::optimize::{self, NormEstimate, OptConfig};
use crate::polynomial::{complex_gaussian, sign_polynomial_from_slice, HomPoly};

/// Default slack for chains through estimated norms.
pub const DEFAULT_SLACK: f64 = 1.05;
/// Largest `|Λ(m,n)|` accepted by [`brute_chi`].
pub const BRUTE_MAX_SUPPORT: usize = 50;

/// Where a bracket endpoint comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// `χ ≥ 1`, `K ≤ 1/3` and similar.
    Trivial,
    /// Flat-point chain with all signs `+1`; exact.
    AllPlusChain,
    /// Flat-point chain through a searched sign pattern.
    SignSearch,
    /// Direct coefficient search.
    Brute,
    /// `m·e^{1+(m−1)/p}·S^{1/q′}`.
    Lemma,
    /// `(m^m/m!)·n^{m/q′}`.
    Simplex,
    /// `|Λ(m,n)|·n^{m/p}`.
    CoeffGeneric,
    /// Bohr-sum bisection on the Möbius family.
    Moebius,
    /// Random-series Monte Carlo.
    MonteCarlo,
}

impl Provenance {
    /// True for endpoints that rest on an optimizer estimate.
    pub fn estimate_based(self) -> bool {
        matches!(self, Provenance::SignSearch | Provenance::Brute | Provenance::MonteCarlo)
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("serializes");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

/// `[lower, upper]` for `χ_M(𝒫(^m ℓ_p^n), 𝒫(^m ℓ_q^n))`, with logarithms kept
/// so that huge upper bounds stay usable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundBracket {
    pub m: u32,
    pub n: usize,
    pub p: Exponent,
    pub q: Exponent,
    pub lower: f64,
    pub upper: f64,
    pub ln_lower: f64,
    pub ln_upper: f64,
    pub lower_src: Provenance,
    pub upper_src: Provenance,
    pub flags: Vec<String>,
}

impl BoundBracket {
    pub fn is_consistent(&self) -> bool {
        self.ln_lower <= self.ln_upper + 1e-9
    }

    pub fn contains(&self, x: f64, rel_tol: f64) -> bool {
        x >= self.lower * (1.0 - rel_tol) && x <= self.upper * (1.0 + rel_tol)
    }
}

// ---------------------------------------------------------------------------
// Flat-point chain

/// `n^{m(1−1/q)}/norm_p`.
pub fn chi_lower_flat(m: u32, n: usize, q: Exponent, norm_p: f64) -> Result<f64> {
    if !(norm_p > 0.0 && norm_p.is_finite()) {
        return Err(Error::pre(format!("norm {norm_p} must be positive and finite")));
    }
    if n == 0 {
        return Err(Error::pre("n must be at least 1"));
    }
    let ln = m as f64 * q.conjugate().recip_f64() * (n as f64).ln() - norm_p.ln();
    Ok(ln.exp())
}

/// `ln` of the all-plus chain: `(Σ z_i)^m` has norm `n^{m/p′}` on `B_{ℓ_p^n}`.
pub fn ln_chi_lower_all_plus(m: u32, n: usize, e: &ExponentPair) -> f64 {
    m as f64 * (e.q_conj().recip_f64() - e.p_conj().recip_f64()) * (n as f64).ln()
}

// ---------------------------------------------------------------------------
// Sign search

/// Annealing settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignSearchConfig {
    /// Number of sweeps; one sweep proposes `|Λ|` flips.
    pub sweeps: usize,
    pub seed: u64,
    /// Largest `|Λ(m,n)|` accepted.
    pub cap: usize,
    /// Fixed sample points for the inner energy.
    pub samples: usize,
    /// Patterns rescored with the full optimizer.
    pub elite: usize,
    /// Independent chains.
    pub chains: usize,
    pub t0: f64,
    pub cooling: f64,
    /// Optimizer for the final rescoring.
    pub opt: OptConfig,
}

impl Default for SignSearchConfig {
    fn default() -> Self {
        SignSearchConfig {
            sweeps: 60,
            seed: 0,
            cap: 20_000,
            samples: 512,
            elite: 4,
            chains: 2,
            t0: 1.0,
            cooling: 0.95,
            opt: OptConfig::default().with_restarts(32),
        }
    }
}

/// Result of [`sign_search`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignSearch {
    pub m: u32,
    pub n: usize,
    pub p: Exponent,
    /// Signs in the colexicographic order of `Λ(m,n)`.
    pub signs: Vec<i8>,
    pub estimate: NormEstimate,
    /// Sampled maximum for the chosen pattern.
    pub proxy: f64,
}

/// Largest number of stored sample powers.
const SAMPLE_TABLE_LIMIT: usize = 1 << 25;

struct SampleTable {
    samples: usize,
    stride: usize,
    m: usize,
    pows: Vec<Complex64>,
    factors: Vec<Vec<(u32, u32)>>,
    coeffs: Vec<f64>,
}

impl SampleTable {
    fn new(m: u32, n: usize, p: Exponent, samples: usize, seed: u64) -> Result<Self> {
        let stride = n * (m as usize + 1);
        if samples.saturating_mul(stride) > SAMPLE_TABLE_LIMIT {
            return Err(Error::BudgetExceeded {
                what: "sign-search sample table",
                needed: (samples as u128 * stride as u128).to_string(),
                budget: SAMPLE_TABLE_LIMIT as u64,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a_5a5a);
        let mut pows = Vec::with_capacity(samples * stride);
        // Kronecker phases from the R_d sequence; random moduli for finite p.
        let g = (0..64).fold(2.0f64, |x, _| x - (x.powi(n as i32 + 1) - x - 1.0) / ((n as f64 + 1.0) * x.powi(n as i32) - 1.0));
        let steps: Vec<f64> = (0..n).map(|v| g.powi(-(v as i32 + 1)).fract()).collect();
        for s in 0..samples {
            let mut z: Vec<Complex64> = (0..n)
                .map(|v| {
                    let theta = std::f64::consts::TAU * ((s as f64 + 0.5) * steps[v]).fract();
                    let r = if p.is_infinite() { 1.0 } else { complex_gaussian(&mut rng).norm() };
                    Complex64::from_polar(r, theta)
                })
                .collect();
            optimize::retract_to_sphere(&mut z, p);
            for zv in z {
                let mut acc = Complex64::new(1.0, 0.0);
                pows.push(acc);
                for _ in 0..m {
                    acc *= zv;
                    pows.push(acc);
                }
            }
        }
        let mut factors = Vec::new();
        let mut coeffs = Vec::new();
        let mut it = multiindex::enumerate_lambda(m, n)?;
        while let Some(a) = it.advance() {
            factors.push(
                a.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| (v as u32, e))
                    .collect(),
            );
            coeffs.push(multiplicity_f64(a));
        }
        Ok(SampleTable {
            samples,
            stride,
            m: m as usize,
            pows,
            factors,
            coeffs,
        })
    }

    fn len(&self) -> usize {
        self.coeffs.len()
    }

    fn mono(&self, s: usize, t: usize) -> Complex64 {
        let base = s * self.stride;
        self.factors[t]
            .iter()
            .fold(Complex64::new(self.coeffs[t], 0.0), |acc, &(v, e)| {
                acc * self.pows[base + v as usize * (self.m + 1) + e as usize]
            })
    }

    fn values(&self, signs: &[i8]) -> Vec<Complex64> {
        (0..self.samples)
            .map(|s| {
                (0..self.len())
                    .map(|t| self.mono(s, t) * signs[t] as f64)
                    .sum()
            })
            .collect()
    }
}

fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

struct Chain {
    elite: Vec<(f64, Vec<i8>)>,
}

fn push_elite(elite: &mut Vec<(f64, Vec<i8>)>, e: f64, signs: &[i8], keep: usize) {
    if elite.iter().any(|(_, s)| s == signs) {
        return;
    }
    elite.push((e, signs.to_vec()));
    elite.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    elite.truncate(keep);
}

fn run_chain(table: &SampleTable, cfg: &SignSearchConfig, chain: usize) -> Chain {
    let len = table.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(chain as u64));
    let mut signs: Vec<i8> = (0..len).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
    let mut vals = table.values(&signs);
    let mut energy = max_abs(&vals);
    let mut trial = vec![Complex64::zero(); table.samples];

    let flip_energy = |vals: &[Complex64], signs: &[i8], t: usize, trial: &mut [Complex64]| {
        let f = -2.0 * signs[t] as f64;
        let mut e: f64 = 0.0;
        for (s, out) in trial.iter_mut().enumerate() {
            *out = vals[s] + table.mono(s, t) * f;
            e = e.max(out.norm());
        }
        e
    };

    // Energy is measured in units of the typical single-flip change.
    let probes = len.min(64);
    let mut unit = 0.0;
    for t in 0..probes {
        unit += (flip_energy(&vals, &signs, t, &mut trial) - energy).abs();
    }
    let unit = (unit / probes.max(1) as f64).max(energy * 1e-12).max(f64::MIN_POSITIVE);

    let mut elite = Vec::new();
    push_elite(&mut elite, energy, &signs, cfg.elite);
    let mut best = energy;
    let mut temp = cfg.t0;
    for _ in 0..cfg.sweeps {
        for _ in 0..len {
            let t = rng.gen_range(0..len);
            let e_new = flip_energy(&vals, &signs, t, &mut trial);
            let de = (e_new - energy) / unit;
            let u: f64 = rng.gen();
            if de <= 0.0 || u < (-de / temp).exp() {
                signs[t] = -signs[t];
                vals.copy_from_slice(&trial);
                energy = e_new;
                if energy < best {
                    best = energy;
                    push_elite(&mut elite, energy, &signs, cfg.elite);
                }
            }
        }
        // Refresh to stop drift from incremental updates.
        vals = table.values(&signs);
        energy = max_abs(&vals);
        push_elite(&mut elite, energy, &signs, cfg.elite);
        temp *= cfg.cooling;
    }
    Chain { elite }
}

/// Searches `ε ∈ {±1}^{Λ(m,n)}` for a small `‖Σ ε_α (m!/α!) z^α‖` on `B_{ℓ_p^n}`.
pub fn sign_search(m: u32, n: usize, p: Exponent, cfg: &SignSearchConfig) -> Result<SignSearch> {
    if cfg.sweeps == 0 || cfg.chains == 0 || cfg.samples == 0 || cfg.elite == 0 {
        return Err(Error::BudgetExceeded {
            what: "sign search",
            needed: "≥1 sweep, chain, sample and elite slot".into(),
            budget: 0,
        });
    }
    if n == 0 {
        return Err(Error::pre("n must be at least 1"));
    }
    let card = lambda_card(m, n);
    if card > cfg.cap.into() {
        return Err(Error::BudgetExceeded {
            what: "sign search |Λ(m,n)|",
            needed: card.to_string(),
            budget: cfg.cap as u64,
        });
    }
    let table = SampleTable::new(m, n, p, cfg.samples, cfg.seed)?;
    let chains: Vec<Chain> = (0..cfg.chains)
        .into_par_iter()
        .map(|c| run_chain(&table, cfg, c))
        .collect();
    let mut elite = Vec::new();
    for ch in chains {
        for (e, s) in ch.elite {
            push_elite(&mut elite, e, &s, cfg.elite);
        }
    }
    let scored = elite
        .into_iter()
        .map(|(proxy, signs)| {
            let poly = sign_polynomial_from_slice(m, n, &signs)?;
            let est = optimize::sup_norm(&poly, p, &cfg.opt)?;
            Ok((est, proxy, signs))
        })
        .collect::<Result<Vec<_>>>()?;
    let (estimate, proxy, signs) = scored
        .into_iter()
        .min_by(|a, b| a.0.value.total_cmp(&b.0.value).then_with(|| a.2.cmp(&b.2)))
        .expect("elite is nonempty");
    Ok(SignSearch {
        m,
        n,
        p,
        signs,
        estimate,
        proxy,
    })
}

// ---------------------------------------------------------------------------
// Brute force

/// Settings for [`brute_chi`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteConfig {
    pub samples: usize,
    pub seed: u64,
    /// Candidates kept for local ascent and rescoring.
    pub top_k: usize,
    pub ascent_steps: usize,
    pub screen: OptConfig,
    pub strong: OptConfig,
    pub deflate: f64,
}

impl Default for BruteConfig {
    fn default() -> Self {
        BruteConfig {
            samples: 1000,
            seed: 0,
            top_k: 4,
            ascent_steps: 24,
            screen: OptConfig::default().with_restarts(4).with_max_iter(200).serial(),
            strong: OptConfig::default().with_restarts(32),
            deflate: DEFAULT_SLACK,
        }
    }
}

/// The best ratio `majorant_sup(P, q)/sup_norm(P, p)` found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteChi {
    pub raw: f64,
    pub deflated: f64,
    pub numerator: f64,
    pub denominator: f64,
    /// Which ensemble produced the winner.
    pub ensemble: String,
    pub coefficients: Vec<(MultiIndex, Complex64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ensemble {
    Gaussian,
    Rademacher,
    Sparse,
    Probe,
}

impl Ensemble {
    fn name(self) -> &'static str {
        match self {
            Ensemble::Gaussian => "gaussian",
            Ensemble::Rademacher => "rademacher-multiplicity",
            Ensemble::Sparse => "sparse",
            Ensemble::Probe => "single-monomial",
        }
    }
}

fn ratio(
    alphas: &[MultiIndex],
    coeffs: &[Complex64],
    m: u32,
    n: usize,
    e: &ExponentPair,
    cfg: &OptConfig,
) -> Result<(f64, f64, f64)> {
    let poly = HomPoly::from_terms(n, m, alphas.iter().cloned().zip(coeffs.iter().copied()))?;
    if poly.is_zero() {
        return Ok((0.0, 0.0, 0.0));
    }
    let num = optimize::majorant_sup(&poly, e.q, cfg)?.value;
    let den = optimize::sup_norm(&poly, e.p, cfg)?.value;
    if !(den > 0.0) {
        return Ok((0.0, num, den));
    }
    Ok((num / den, num, den))
}

fn draw(alphas: &[MultiIndex], idx: usize, seed: u64) -> (Ensemble, Vec<Complex64>) {
    let len = alphas.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(idx as u64));
    let kind = match idx % 4 {
        0 => Ensemble::Probe,
        1 => Ensemble::Rademacher,
        2 => Ensemble::Gaussian,
        _ => Ensemble::Sparse,
    };
    let coeffs = match kind {
        Ensemble::Probe => {
            let t = (idx / 4) % len;
            let mut c = vec![Complex64::zero(); len];
            c[t] = Complex64::new(1.0, 0.0);
            c
        }
        Ensemble::Rademacher => alphas
            .iter()
            .map(|a| {
                // The first draw is the all-plus pattern.
                let s = if idx == 1 || rng.gen::<bool>() { 1.0 } else { -1.0 };
                Complex64::new(s * multiplicity_f64(a.exponents()), 0.0)
            })
            .collect(),
        Ensemble::Gaussian => (0..len).map(|_| complex_gaussian(&mut rng)).collect(),
        Ensemble::Sparse => {
            let k = rng.gen_range(1..=len.min(3));
            let mut order: Vec<usize> = (0..len).collect();
            order.shuffle(&mut rng);
            let mut c = vec![Complex64::zero(); len];
            for &t in &order[..k] {
                c[t] = complex_gaussian(&mut rng);
            }
            c
        }
    };
    (kind, coeffs)
}

/// Direct search for `χ_M` on instances with `|Λ(m,n)| ≤ 50`.
///
/// Screens random coefficient vectors with a cheap optimizer, improves the best
/// by random coefficient perturbations, and rescores them with a strong one.
pub fn brute_chi(m: u32, n: usize, e: &ExponentPair, cfg: &BruteConfig) -> Result<BruteChi> {
    if n == 0 {
        return Err(Error::pre("n must be at least 1"));
    }
    let card = lambda_card(m, n);
    if card > BRUTE_MAX_SUPPORT.into() {
        return Err(Error::BudgetExceeded {
            what: "brute χ |Λ(m,n)|",
            needed: card.to_string(),
            budget: BRUTE_MAX_SUPPORT as u64,
        });
    }
    if cfg.samples == 0 || cfg.top_k == 0 {
        return Err(Error::pre("brute search needs samples and top_k ≥ 1"));
    }
    let alphas: Vec<MultiIndex> = multiindex::enumerate_lambda(m, n)?.collect();
    let screened = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let (kind, c) = draw(&alphas, i, cfg.seed);
            let (r, _, _) = ratio(&alphas, &c, m, n, e, &cfg.screen)?;
            Ok((r, i, kind, c))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut ranked = screened;
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    ranked.truncate(cfg.top_k);

    let improved = ranked
        .into_par_iter()
        .map(|(mut r, i, kind, mut c)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1 << 40).wrapping_add(i as u64));
            for step in 0..cfg.ascent_steps {
                let sigma = 0.5 * (0.1f64).powf(step as f64 / cfg.ascent_steps.max(1) as f64);
                let mut cand = c.clone();
                let touched = rng.gen_range(1..=cand.len());
                for _ in 0..touched {
                    let t = rng.gen_range(0..cand.len());
                    let scale = cand.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-12);
                    cand[t] += complex_gaussian(&mut rng) * (sigma * scale);
                }
                let (rc, _, _) = ratio(&alphas, &cand, m, n, e, &cfg.screen)?;
                if rc > r {
                    r = rc;
                    c = cand;
                }
            }
            let (rs, num, den) = ratio(&alphas, &c, m, n, e, &cfg.strong)?;
            Ok((rs, num, den, i, kind, c))
        })
        .collect::<Result<Vec<_>>>()?;
    let (raw, numerator, denominator, _, kind, c) = improved
        .into_iter()
        .max_by(|a, b| a.0.total_cmp(&b.0).then(b.3.cmp(&a.3)))
        .expect("top_k ≥ 1");
    Ok(BruteChi {
        raw,
        deflated: raw / cfg.deflate,
        numerator,
        denominator,
        ensemble: kind.name().into(),
        coefficients: alphas.into_iter().zip(c).filter(|(_, v)| !v.is_zero()).collect(),
    })
}

// ---------------------------------------------------------------------------
// Brackets

/// Which sources to run in [`chi_bracket`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketConfig {
    pub sign_search: Option<SignSearchConfig>,
    pub brute: Option<BruteConfig>,
    pub slack: f64,
    pub exp_base: ExpBase,
}

impl Default for BracketConfig {
    fn default() -> Self {
        BracketConfig {
            sign_search: Some(SignSearchConfig::default()),
            brute: Some(BruteConfig::default()),
            slack: DEFAULT_SLACK,
            exp_base: ExpBase::P,
        }
    }
}

impl BracketConfig {
    /// Analytic endpoints only.
    pub fn analytic() -> Self {
        BracketConfig {
            sign_search: None,
            brute: None,
            ..Default::default()
        }
    }
}

/// Assembles a bracket from already computed witnesses.
pub fn chi_bracket_from_parts(
    m: u32,
    n: usize,
    e: &ExponentPair,
    sign: Option<&SignSearch>,
    brute: Option<&BruteChi>,
    slack: f64,
    exp_base: ExpBase,
) -> Result<BoundBracket> {
    if n == 0 || m == 0 {
        return Err(Error::pre("bracket needs m, n ≥ 1"));
    }
    let mut flags = Vec::new();
    let mut lower = (0.0, Provenance::Trivial);
    let mut consider_lower = |ln: f64, src: Provenance| {
        if ln > lower.0 {
            lower = (ln, src);
        }
    };
    consider_lower(ln_chi_lower_all_plus(m, n, e), Provenance::AllPlusChain);
    if let Some(s) = sign {
        if s.estimate.value > 0.0 {
            let ln = chi_lower_flat(m, n, e.q, s.estimate.value)?.ln() - slack.ln();
            consider_lower(ln, Provenance::SignSearch);
        }
    }
    if let Some(b) = brute {
        if b.deflated > 0.0 {
            consider_lower(b.deflated.ln(), Provenance::Brute);
        }
    }

    let mut upper = (bounds::ln_chi_upper_simplex(m, n, e.q)?, Provenance::Simplex);
    let generic = bounds::ln_coeff_chi_upper_generic(m, n, e.p)?;
    if generic < upper.0 {
        upper = (generic, Provenance::CoeffGeneric);
    }
    if !e.q.is_one() && e.q <= e.p && e.p <= Exponent::TWO {
        let lemma = bounds::ln_chi_upper_small_pq(m, n, e, exp_base)?;
        if lemma < upper.0 {
            upper = (lemma, Provenance::Lemma);
        }
    }
    if lower.1.estimate_based() {
        flags.push("estimate-based".to_string());
    }
    if exp_base == ExpBase::Q {
        flags.push("exp-base-q".to_string());
    }
    let bracket = BoundBracket {
        m,
        n,
        p: e.p,
        q: e.q,
        lower: lower.0.exp(),
        upper: upper.0.exp(),
        ln_lower: lower.0,
        ln_upper: upper.0,
        lower_src: lower.1,
        upper_src: upper.1,
        flags,
    };
    Ok(bracket)
}

/// `[lower, upper]` for `χ_M` from every applicable source.
pub fn chi_bracket(m: u32, n: usize, e: &ExponentPair, cfg: &BracketConfig) -> Result<BoundBracket> {
    let sign = match &cfg.sign_search {
        Some(sc) if lambda_card(m, n) <= sc.cap.into() => Some(sign_search(m, n, e.p, sc)?),
        _ => None,
    };
    let brute = match &cfg.brute {
        Some(bc) if lambda_card(m, n) <= BRUTE_MAX_SUPPORT.into() => Some(brute_chi(m, n, e, bc)?),
        _ => None,
    };
    chi_bracket_from_parts(m, n, e, sign.as_ref(), brute.as_ref(), cfg.slack, cfg.exp_base)
}

// ---------------------------------------------------------------------------
// Slice inequality

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LempolyRow {
    pub j: IndexTuple,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LempolyReport {
    pub norm: NormEstimate,
    pub slack: f64,
    pub rows: Vec<LempolyRow>,
    pub all_pass: bool,
}

/// `(Σ_{k≥j_{m−1}} |c_{(j,k)}|^{p′})^{1/p′} ≤ slack·m·e^{1+(m−1)/p}·|j|^{1/p}·‖P‖`
/// for every `j ∈ 𝒥(m−1,n)`, with `‖P‖` from the optimizer.
pub fn lempoly_check(poly: &HomPoly, p: Exponent, slack: f64, cfg: &OptConfig) -> Result<LempolyReport> {
    let m = poly.degree();
    let n = poly.n();
    if m < 2 {
        return Err(Error::pre("slice check needs m ≥ 2"));
    }
    let norm = optimize::sup_norm(poly, p, cfg)?;
    let pc = p.conjugate();
    let mut rows = Vec::new();
    for j in multiindex::enumerate_j(m - 1, n)? {
        let start = j.last().expect("m ≥ 2");
        let moduli = (start..=n as u32).map(|k| {
            let full = j.extended(k).expect("k ≥ last index");
            poly.coeff(&multiindex::tuple_to_alpha(&full, n).expect("indices in range")).norm()
        });
        let lhs = if pc.is_infinite() {
            moduli.fold(0.0, f64::max)
        } else if pc.is_one() {
            moduli.sum()
        } else {
            let r = pc.to_f64();
            moduli.map(|x| x.powf(r)).sum::<f64>().powf(1.0 / r)
        };
        let rhs = slack * bounds::lempoly_rhs(m, n, p, &j)? * norm.value;
        rows.push(LempolyRow {
            j,
            lhs,
            rhs,
            pass: lhs <= rhs,
        });
    }
    let all_pass = rows.iter().all(|r| r.pass);
    Ok(LempolyReport {
        norm,
        slack,
        rows,
        all_pass,
    })
}

/// Ratio `achieved norm / bayart_bound`, reported as data.
pub fn bayart_ratio(search: &SignSearch) -> Result<f64> {
    let shape = bounds::bayart_bound(search.m, search.n, search.p)?.value;
    Ok(search.estimate.value / shape)
}

/// `|Λ(m,n)|` as `usize` when it fits.
pub fn support_size(m: u32, n: usize) -> Option<usize> {
    lambda_card(m, n).to_usize()
}
