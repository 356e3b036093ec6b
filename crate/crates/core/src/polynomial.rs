//! Sparse homogeneous polynomials and truncated power series.
//!
//! `HomPoly` stores `P(z) = Σ a_α z^α` as a map from multi-indices to complex
//! coefficients. Hot loops go through [`Compiled`], a flat term list with
//! per-variable power tables.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::multiindex::{self, lambda_card, MultiIndex};
use crate::optimize::{self, OptConfig};

/// Largest accepted variable count for parsed input.
pub const MAX_PARSE_N: usize = 4096;
/// Largest accepted degree for parsed input.
pub const MAX_PARSE_M: u32 = 256;
/// Largest accepted number of terms for parsed input.
pub const MAX_PARSE_TERMS: usize = 1_000_000;

/// An `m`-homogeneous polynomial in `n` complex variables.
#[derive(Debug, Clone, PartialEq)]
pub struct HomPoly {
    n: usize,
    m: u32,
    coeffs: BTreeMap<MultiIndex, Complex64>,
    exact: Option<BTreeMap<MultiIndex, BigInt>>,
}

impl HomPoly {
    pub fn zero(n: usize, m: u32) -> Self {
        HomPoly {
            n,
            m,
            coeffs: BTreeMap::new(),
            exact: None,
        }
    }

    /// Builds from terms, rejecting wrong shapes, duplicates and non-finite values.
    /// Zero coefficients are dropped.
    pub fn from_terms<I>(n: usize, m: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut p = HomPoly::zero(n, m);
        for (alpha, c) in terms {
            let alpha = MultiIndex::checked(alpha.into_inner(), m, n)?;
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFinite(alpha.to_string()));
            }
            if p.coeffs.contains_key(&alpha) {
                return Err(Error::pre(format!("duplicate term {alpha}")));
            }
            if !c.is_zero() {
                p.coeffs.insert(alpha, c);
            }
        }
        Ok(p)
    }

    /// The monomial `c·z^α`.
    pub fn monomial(alpha: MultiIndex, c: Complex64) -> Result<Self> {
        let n = alpha.n();
        let m = alpha.degree();
        Self::from_terms(n, m, [(alpha, c)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Complex64 {
        self.coeffs.get(alpha).copied().unwrap_or_default()
    }

    /// Exact integer coefficient, present for sign polynomials.
    pub fn exact_coeff(&self, alpha: &MultiIndex) -> Option<BigInt> {
        self.exact
            .as_ref()
            .map(|e| e.get(alpha).cloned().unwrap_or_default())
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    /// `Σ a_α z^α`.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        self.check_dim(z.len())?;
        Ok(self.compile().eval(z))
    }

    /// The polynomial with coefficients `|a_α|`.
    pub fn majorant(&self) -> HomPoly {
        HomPoly {
            n: self.n,
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, c)| (a.clone(), Complex64::new(c.norm(), 0.0)))
                .collect(),
            exact: self.exact.as_ref().map(|e| {
                e.iter()
                    .map(|(a, c)| (a.clone(), BigInt::from(c.magnitude().clone())))
                    .collect()
            }),
        }
    }

    /// `P_w` with `a_α(P_w) = a_α(P)·w^α`.
    pub fn weight_restrict(&self, w: &[Complex64]) -> Result<HomPoly> {
        self.check_dim(w.len())?;
        let terms = self.coeffs.iter().filter_map(|(a, c)| {
            let v = *c * monomial_value(a.exponents(), w);
            (!v.is_zero()).then(|| (a.clone(), v))
        });
        HomPoly::from_terms(self.n, self.m, terms)
    }

    /// Multiplies every coefficient by `s`; the exact shadow is dropped.
    pub fn scaled(&self, s: Complex64) -> HomPoly {
        let mut out = HomPoly::zero(self.n, self.m);
        for (a, c) in &self.coeffs {
            let v = *c * s;
            if !v.is_zero() {
                out.coeffs.insert(a.clone(), v);
            }
        }
        out
    }

    /// `max |a_α|`.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn compile(&self) -> Compiled<Complex64> {
        Compiled::new(self.n, self.coeffs.iter().map(|(a, c)| (a.exponents(), *c)))
    }

    /// The majorant as a real evaluator for nonnegative arguments.
    pub fn compile_majorant(&self) -> Compiled<f64> {
        Compiled::new(
            self.n,
            self.coeffs.iter().map(|(a, c)| (a.exponents(), c.norm())),
        )
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got,
            });
        }
        Ok(())
    }

    pub fn to_json_value(&self) -> PolyJson {
        PolyJson {
            n: self.n,
            m: self.m,
            terms: self
                .coeffs
                .iter()
                .map(|(a, c)| TermJson {
                    alpha: a.exponents().to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("polynomial serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: PolyJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        raw.into_poly()
    }
}

fn monomial_value(alpha: &[u32], z: &[Complex64]) -> Complex64 {
    alpha
        .iter()
        .zip(z)
        .filter(|(&a, _)| a > 0)
        .fold(Complex64::one(), |acc, (&a, &zi)| acc * zi.powu(a))
}

/// Wire format of a polynomial.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub n: usize,
    pub m: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub alpha: Vec<u32>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl PolyJson {
    pub fn into_poly(self) -> Result<HomPoly> {
        if self.n == 0 || self.n > MAX_PARSE_N {
            return Err(Error::Parse(format!("n={} outside 1..={MAX_PARSE_N}", self.n)));
        }
        if self.m > MAX_PARSE_M {
            return Err(Error::Parse(format!("m={} exceeds {MAX_PARSE_M}", self.m)));
        }
        if self.terms.len() > MAX_PARSE_TERMS {
            return Err(Error::Parse(format!("more than {MAX_PARSE_TERMS} terms")));
        }
        let n = self.n;
        let m = self.m;
        HomPoly::from_terms(
            n,
            m,
            self.terms
                .into_iter()
                .map(|t| (MultiIndex::new(t.alpha), Complex64::new(t.re, t.im))),
        )
    }
}

/// `Σ ε_α (m!/α!) z^α` with signs listed in the colexicographic order of `Λ(m,n)`.
pub fn sign_polynomial_from_slice(m: u32, n: usize, signs: &[i8]) -> Result<HomPoly> {
    let card = lambda_card(m, n);
    if BigUint::from(signs.len()) != card {
        return Err(Error::pre(format!(
            "expected {card} signs, got {}",
            signs.len()
        )));
    }
    let mut coeffs = BTreeMap::new();
    let mut exact = BTreeMap::new();
    for (alpha, &s) in multiindex::enumerate_lambda(m, n)?.zip(signs) {
        if s != 1 && s != -1 {
            return Err(Error::pre(format!("sign {s} at {alpha} is not ±1")));
        }
        let mult = multiindex::multiplicity(&alpha);
        let value = multiindex::multiplicity_f64(alpha.exponents()) * s as f64;
        coeffs.insert(alpha.clone(), Complex64::new(value, 0.0));
        let e = BigInt::from(mult);
        exact.insert(alpha, if s < 0 { -e } else { e });
    }
    Ok(HomPoly {
        n,
        m,
        coeffs,
        exact: Some(exact),
    })
}

/// `Σ ε_α (m!/α!) z^α` for a sign map defined on all of `Λ(m,n)`.
pub fn sign_polynomial(m: u32, n: usize, signs: &BTreeMap<MultiIndex, i8>) -> Result<HomPoly> {
    let list = multiindex::enumerate_lambda(m, n)?
        .map(|alpha| {
            signs
                .get(&alpha)
                .copied()
                .ok_or_else(|| Error::pre(format!("missing sign for {alpha}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if signs.len() != list.len() {
        return Err(Error::pre("sign map has entries outside Λ(m,n)"));
    }
    sign_polynomial_from_slice(m, n, &list)
}

/// A polynomial with i.i.d. standard complex Gaussian coefficients on `Λ(m,n)`.
pub fn gaussian_poly<R: Rng>(m: u32, n: usize, rng: &mut R) -> Result<HomPoly> {
    let terms: Vec<_> = multiindex::enumerate_lambda(m, n)?
        .map(|a| (a, complex_gaussian(rng)))
        .collect();
    HomPoly::from_terms(n, m, terms)
}

/// [`gaussian_poly`] driven by a seeded ChaCha8 stream.
pub fn gaussian_poly_seeded(m: u32, n: usize, seed: u64) -> Result<HomPoly> {
    gaussian_poly(m, n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Uniform random signs for `Λ(m,n)` in colexicographic order, capped at `budget` entries.
pub fn random_signs(m: u32, n: usize, seed: u64, budget: u64) -> Result<Vec<i8>> {
    let card = lambda_card(m, n);
    if card > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            what: "sign pattern",
            needed: card.to_string(),
            budget,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = card.to_usize().expect("bounded by budget");
    Ok((0..len).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect())
}

pub(crate) fn complex_gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

// ---------------------------------------------------------------------------
// Truncated series

/// `a₀ + Σ_{m=1}^{M} P_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    n: usize,
    a0: Complex64,
    parts: Vec<HomPoly>,
}

impl TruncatedSeries {
    /// `parts[k]` must have degree `k+1` and `n` variables.
    pub fn new(n: usize, a0: Complex64, parts: Vec<HomPoly>) -> Result<Self> {
        if n == 0 {
            return Err(Error::pre("n must be at least 1"));
        }
        if !a0.re.is_finite() || !a0.im.is_finite() {
            return Err(Error::NonFinite("a0".into()));
        }
        for (k, p) in parts.iter().enumerate() {
            if p.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.n(),
                });
            }
            if p.degree() as usize != k + 1 {
                return Err(Error::pre(format!(
                    "part {} has degree {}",
                    k + 1,
                    p.degree()
                )));
            }
        }
        Ok(TruncatedSeries { n, a0, parts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a0(&self) -> Complex64 {
        self.a0
    }

    /// Parts of degree `1..=M`.
    pub fn parts(&self) -> &[HomPoly] {
        &self.parts
    }

    pub fn max_degree(&self) -> usize {
        self.parts.len()
    }

    pub fn scaled(&self, s: f64) -> TruncatedSeries {
        let s = Complex64::new(s, 0.0);
        TruncatedSeries {
            n: self.n,
            a0: self.a0 * s,
            parts: self.parts.iter().map(|p| p.scaled(s)).collect(),
        }
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: z.len(),
            });
        }
        Ok(self.compile().eval(z))
    }

    /// All terms, constant included, as one evaluator.
    pub fn compile(&self) -> Compiled<Complex64> {
        let zero = vec![0u32; self.n];
        let constant = (!self.a0.is_zero()).then_some((zero.as_slice(), self.a0));
        Compiled::new(
            self.n,
            constant.into_iter().chain(
                self.parts
                    .iter()
                    .flat_map(|p| p.coeffs.iter().map(|(a, c)| (a.exponents(), *c))),
            ),
        )
    }

    /// `|a₀| + Σ_m r^m·(majorant of P_m)` as a real evaluator.
    pub fn compile_bohr(&self, r: f64) -> Compiled<f64> {
        let zero = vec![0u32; self.n];
        let constant = (self.a0.norm() > 0.0).then_some((zero.as_slice(), self.a0.norm()));
        Compiled::new(
            self.n,
            constant.into_iter().chain(self.parts.iter().flat_map(move |p| {
                let rm = r.powi(p.degree() as i32);
                p.coeffs.iter().map(move |(a, c)| (a.exponents(), c.norm() * rm))
            })),
        )
    }

    pub fn to_json_value(&self) -> SeriesJson {
        SeriesJson {
            n: self.n,
            a0: ComplexJson {
                re: self.a0.re,
                im: self.a0.im,
            },
            parts: self.parts.iter().map(HomPoly::to_json_value).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("series serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: SeriesJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        raw.into_series()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// Wire format of a truncated series.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesJson {
    pub n: usize,
    pub a0: ComplexJson,
    pub parts: Vec<PolyJson>,
}

impl SeriesJson {
    pub fn into_series(self) -> Result<TruncatedSeries> {
        if self.n == 0 || self.n > MAX_PARSE_N {
            return Err(Error::Parse(format!("n={} outside 1..={MAX_PARSE_N}", self.n)));
        }
        if self.parts.len() > MAX_PARSE_M as usize {
            return Err(Error::Parse(format!("more than {MAX_PARSE_M} parts")));
        }
        let total: usize = self.parts.iter().map(|p| p.terms.len()).sum();
        if total > MAX_PARSE_TERMS {
            return Err(Error::Parse(format!("more than {MAX_PARSE_TERMS} terms")));
        }
        let parts = self
            .parts
            .into_iter()
            .map(PolyJson::into_poly)
            .collect::<Result<Vec<_>>>()?;
        TruncatedSeries::new(self.n, Complex64::new(self.a0.re, self.a0.im), parts)
    }
}

/// `f_a(z) = (a − z)/(1 − az)` truncated at degree `M`.
pub fn moebius_series(a: f64, max_degree: u32) -> Result<TruncatedSeries> {
    if !(0.0..1.0).contains(&a) {
        return Err(Error::pre(format!("a={a} outside [0,1)")));
    }
    if max_degree == 0 {
        return Err(Error::pre("truncation degree must be at least 1"));
    }
    let parts = (1..=max_degree)
        .map(|k| {
            let c = -(1.0 - a * a) * a.powi(k as i32 - 1);
            HomPoly::from_terms(1, k, [(MultiIndex::new(vec![k]), Complex64::new(c, 0.0))])
        })
        .collect::<Result<Vec<_>>>()?;
    TruncatedSeries::new(1, Complex64::new(a, 0.0), parts)
}

/// A seeded random series rescaled so its estimated sup-norm on `B_{ℓ_p^n}` is 1.
///
/// `budget` caps the total number of coefficients.
pub fn random_series(
    n: usize,
    max_degree: u32,
    seed: u64,
    budget: u64,
    p: Exponent,
    cfg: &OptConfig,
) -> Result<TruncatedSeries> {
    if budget == 0 {
        return Err(Error::BudgetExceeded {
            what: "random series coefficients",
            needed: "≥1".into(),
            budget,
        });
    }
    if n == 0 {
        return Err(Error::pre("n must be at least 1"));
    }
    let total: BigUint = (0..=max_degree).map(|k| lambda_card(k, n)).sum();
    if total > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            what: "random series coefficients",
            needed: total.to_string(),
            budget,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a0 = complex_gaussian(&mut rng) * rng.gen_range(0.0..2.0);
    let parts = (1..=max_degree)
        .map(|k| {
            let weight = rng.gen_range(0.0..1.0f64).powi(2);
            let p = gaussian_poly(k, n, &mut rng)?;
            Ok(p.scaled(Complex64::new(weight, 0.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    let raw = TruncatedSeries::new(n, a0, parts)?;
    let sup = optimize::series_sup(&raw, p, cfg)?.value;
    if sup > 0.0 {
        Ok(raw.scaled(1.0 / sup))
    } else {
        Ok(raw)
    }
}

// ---------------------------------------------------------------------------
// Compiled evaluation

/// Scalars the compiled evaluator runs on.
pub trait Scalar: Copy + Zero + One + Add<Output = Self> + Mul<Output = Self> + AddAssign {
    fn from_real(x: f64) -> Self;
}

impl Scalar for f64 {
    fn from_real(x: f64) -> Self {
        x
    }
}

impl Scalar for Complex64 {
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
}

/// A flat term list: each term is a coefficient and its nonzero `(variable, power)` factors.
#[derive(Debug, Clone)]
pub struct Compiled<T> {
    n: usize,
    coeffs: Vec<T>,
    starts: Vec<usize>,
    factors: Vec<(u32, u32)>,
    max_pow: Vec<u32>,
}

/// Scratch space for [`Compiled`]; one per worker.
#[derive(Debug, Clone)]
pub struct Workspace<T> {
    offsets: Vec<usize>,
    pows: Vec<T>,
    prefix: Vec<T>,
}

impl<T: Scalar> Compiled<T> {
    pub fn new<'a, I>(n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (&'a [u32], T)>,
    {
        let mut out = Compiled {
            n,
            coeffs: Vec::new(),
            starts: vec![0],
            factors: Vec::new(),
            max_pow: vec![0; n],
        };
        for (alpha, c) in terms {
            out.coeffs.push(c);
            for (v, &a) in alpha.iter().enumerate() {
                if a > 0 {
                    out.factors.push((v as u32, a));
                    out.max_pow[v] = out.max_pow[v].max(a);
                }
            }
            out.starts.push(out.factors.len());
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn workspace(&self) -> Workspace<T> {
        let mut offsets = Vec::with_capacity(self.n + 1);
        let mut acc = 0;
        for &mp in &self.max_pow {
            offsets.push(acc);
            acc += mp as usize + 1;
        }
        offsets.push(acc);
        let longest = self
            .starts
            .windows(2)
            .map(|w| w[1] - w[0])
            .max()
            .unwrap_or(0);
        Workspace {
            offsets,
            pows: vec![T::one(); acc],
            prefix: vec![T::one(); longest + 1],
        }
    }

    fn fill_powers(&self, z: &[T], ws: &mut Workspace<T>) {
        for (v, &zv) in z.iter().enumerate() {
            let base = ws.offsets[v];
            let mut acc = T::one();
            ws.pows[base] = acc;
            for k in 1..=self.max_pow[v] as usize {
                acc = acc * zv;
                ws.pows[base + k] = acc;
            }
        }
    }

    pub fn eval(&self, z: &[T]) -> T {
        let mut ws = self.workspace();
        self.eval_with(z, &mut ws)
    }

    pub fn eval_with(&self, z: &[T], ws: &mut Workspace<T>) -> T {
        self.fill_powers(z, ws);
        let mut total = T::zero();
        for (t, &c) in self.coeffs.iter().enumerate() {
            let mut v = c;
            for &(var, a) in &self.factors[self.starts[t]..self.starts[t + 1]] {
                v = v * ws.pows[ws.offsets[var as usize] + a as usize];
            }
            total += v;
        }
        total
    }

    /// Value and holomorphic gradient `∂P/∂z_v`, written into `grad`.
    pub fn eval_grad(&self, z: &[T], ws: &mut Workspace<T>, grad: &mut [T]) -> T {
        self.fill_powers(z, ws);
        grad.iter_mut().for_each(|g| *g = T::zero());
        let mut total = T::zero();
        for (t, &c) in self.coeffs.iter().enumerate() {
            let fs = &self.factors[self.starts[t]..self.starts[t + 1]];
            let k = fs.len();
            ws.prefix[0] = c;
            for (i, &(var, a)) in fs.iter().enumerate() {
                ws.prefix[i + 1] = ws.prefix[i] * ws.pows[ws.offsets[var as usize] + a as usize];
            }
            total += ws.prefix[k];
            let mut suffix = T::one();
            for i in (0..k).rev() {
                let (var, a) = fs[i];
                let base = ws.offsets[var as usize];
                let d = T::from_real(a as f64) * ws.pows[base + a as usize - 1];
                grad[var as usize] += ws.prefix[i] * d * suffix;
                suffix = suffix * ws.pows[base + a as usize];
            }
        }
        total
    }
}
