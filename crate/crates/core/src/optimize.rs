//! Norm estimation on `ℓ_p` balls.
//!
//! Suprema are found by multi-start projected gradient ascent with Armijo
//! backtracking. Every reported value is the evaluation at an explicit witness
//! inside the ball, so it is a lower bound on the true supremum. Closed forms
//! are used where they exist (`q = ∞` majorants, one variable, linear forms).
//!
//! The rearrangement and `X_∞` helpers at the end are exact.

use std::cmp::Ordering;

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::polynomial::{complex_gaussian, Compiled, HomPoly, TruncatedSeries, Workspace};

const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACK: usize = 60;

/// Multi-start ascent settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptConfig {
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
    /// Run restarts on the rayon pool.
    pub parallel: bool,
}

impl Default for OptConfig {
    fn default() -> Self {
        OptConfig {
            restarts: 64,
            max_iter: 1000,
            tol: 1e-12,
            seed: 0,
            parallel: true,
        }
    }
}

impl OptConfig {
    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn serial(mut self) -> Self {
        self.parallel = false;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iter == 0 {
            return Err(Error::pre("optimizer budget is zero"));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(Error::pre("tolerance must be finite and nonnegative"));
        }
        Ok(())
    }
}

/// An attained value together with the point attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub witness: Vec<Complex64>,
    pub restarts: usize,
    pub converged: bool,
    /// `1 − second/best` over distinct restart values; 0 when every restart agrees.
    pub gap: f64,
    /// True when the value came from a closed form rather than the optimizer.
    pub exact: bool,
}

impl NormEstimate {
    fn closed_form(value: f64, witness: Vec<Complex64>) -> Self {
        NormEstimate {
            value,
            witness,
            restarts: 0,
            converged: true,
            gap: 0.0,
            exact: true,
        }
    }
}

/// The unit ball of `ℓ_p^n` as seen by the ascent.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Ball {
    One,
    Finite(f64),
    Inf,
}

impl Ball {
    fn new(p: Exponent) -> Self {
        if p.is_infinite() {
            Ball::Inf
        } else if p.is_one() {
            Ball::One
        } else {
            Ball::Finite(p.to_f64())
        }
    }

    /// Maps onto the unit sphere (the torus for `p = ∞`), keeping phases.
    fn retract(&self, z: &mut [Complex64]) {
        match *self {
            Ball::Inf => {
                for v in z.iter_mut() {
                    let r = v.norm();
                    *v = if r > 1e-300 { *v / r } else { Complex64::new(1.0, 0.0) };
                }
            }
            Ball::One => {
                let x: Vec<f64> = z.iter().map(|v| v.norm()).collect();
                let y = simplex_projection(&x);
                for (v, &yi) in z.iter_mut().zip(&y) {
                    *v = phase(*v) * yi;
                }
            }
            Ball::Finite(p) => {
                let s = lp_norm_f64(z.iter().map(|v| v.norm()), p);
                if s > 1e-300 {
                    z.iter_mut().for_each(|v| *v /= s);
                } else {
                    let t = (z.len() as f64).powf(-1.0 / p);
                    z.iter_mut().for_each(|v| *v = Complex64::new(t, 0.0));
                }
            }
        }
    }

    /// Removes the component of `d` that only rescales `u`, leaving the gradient of
    /// `z ↦ F(z/‖z‖_p)` at a point `u` of the sphere.
    fn tangent(&self, u: &[Complex64], d: &mut [Complex64]) {
        if let Ball::Finite(p) = *self {
            let radial: f64 = d.iter().zip(u).map(|(di, ui)| (di.conj() * ui).re).sum();
            for (di, ui) in d.iter_mut().zip(u) {
                *di -= phase(*ui) * (ui.norm().powf(p - 1.0) * radial);
            }
        }
    }

    fn norm(&self, z: &[Complex64]) -> f64 {
        let moduli = z.iter().map(|v| v.norm());
        match *self {
            Ball::Inf => moduli.fold(0.0, f64::max),
            Ball::One => moduli.sum(),
            Ball::Finite(p) => lp_norm_f64(moduli, p),
        }
    }
}

fn phase(v: Complex64) -> Complex64 {
    let r = v.norm();
    if r > 1e-300 {
        v / r
    } else {
        Complex64::new(1.0, 0.0)
    }
}

fn lp_norm_f64<I: Iterator<Item = f64>>(x: I, p: f64) -> f64 {
    let v: Vec<f64> = x.collect();
    let scale = v.iter().copied().fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    scale * v.iter().map(|&t| (t / scale).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Maps `z` onto the unit sphere of `ℓ_p^n` (the torus for `p = ∞`), keeping phases.
pub fn retract_to_sphere(z: &mut [Complex64], p: Exponent) {
    Ball::new(p).retract(z)
}

/// `‖z‖_p` with `p ∈ [1, ∞]`.
pub fn lp_norm(z: &[Complex64], p: Exponent) -> f64 {
    Ball::new(p).norm(z)
}

/// Euclidean projection onto `{y ≥ 0, Σy = 1}`.
fn simplex_projection(x: &[f64]) -> Vec<f64> {
    let mut u = x.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = u[0];
    let mut theta = u[0] - 1.0;
    for (i, &ui) in u.iter().enumerate().skip(1) {
        cumsum += ui;
        let t = (cumsum - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    let mut y: Vec<f64> = x.iter().map(|&xi| (xi - theta).max(0.0)).collect();
    // Cancellation in `xi − theta` for very large inputs.
    let s: f64 = y.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        if s > 0.0 && s.is_finite() {
            y.iter_mut().for_each(|v| *v /= s);
        } else {
            let top = (0..x.len()).max_by(|&a, &b| x[a].total_cmp(&x[b])).unwrap_or(0);
            y.iter_mut().enumerate().for_each(|(i, v)| *v = if i == top { 1.0 } else { 0.0 });
        }
    }
    y
}

// ---------------------------------------------------------------------------
// Objectives

/// An ascent objective. `value_dir` fills `d` so that the first-order change
/// along `Δ` is `2·Re Σ conj(d_i)·Δ_i`.
trait Objective: Sync {
    type Ws: Send;
    fn n(&self) -> usize;
    fn workspace(&self) -> Self::Ws;
    fn value(&self, z: &[Complex64], ws: &mut Self::Ws) -> f64;
    fn value_dir(&self, z: &[Complex64], ws: &mut Self::Ws, d: &mut [Complex64]) -> f64;
    /// Converts an objective value into the reported norm value.
    fn report(&self, v: f64) -> f64;
    /// True when the search lives on nonnegative real vectors.
    fn positive(&self) -> bool;
}

/// `|P(z)|²`.
struct Modulus(Compiled<Complex64>);

struct ModWs {
    ws: Workspace<Complex64>,
    grad: Vec<Complex64>,
}

impl Objective for Modulus {
    type Ws = ModWs;

    fn n(&self) -> usize {
        self.0.n()
    }

    fn workspace(&self) -> ModWs {
        ModWs {
            ws: self.0.workspace(),
            grad: vec![Complex64::zero(); self.0.n()],
        }
    }

    fn value(&self, z: &[Complex64], ws: &mut ModWs) -> f64 {
        self.0.eval_with(z, &mut ws.ws).norm_sqr()
    }

    fn value_dir(&self, z: &[Complex64], ws: &mut ModWs, d: &mut [Complex64]) -> f64 {
        let v = self.0.eval_grad(z, &mut ws.ws, &mut ws.grad);
        for (di, g) in d.iter_mut().zip(&ws.grad) {
            *di = v * g.conj();
        }
        v.norm_sqr()
    }

    fn report(&self, v: f64) -> f64 {
        v.max(0.0).sqrt()
    }

    fn positive(&self) -> bool {
        false
    }
}

/// A polynomial with nonnegative coefficients on nonnegative vectors.
struct Positive(Compiled<f64>);

struct PosWs {
    ws: Workspace<f64>,
    x: Vec<f64>,
    grad: Vec<f64>,
}

impl Objective for Positive {
    type Ws = PosWs;

    fn n(&self) -> usize {
        self.0.n()
    }

    fn workspace(&self) -> PosWs {
        PosWs {
            ws: self.0.workspace(),
            x: vec![0.0; self.0.n()],
            grad: vec![0.0; self.0.n()],
        }
    }

    fn value(&self, z: &[Complex64], ws: &mut PosWs) -> f64 {
        for (x, v) in ws.x.iter_mut().zip(z) {
            *x = v.norm();
        }
        self.0.eval_with(&ws.x, &mut ws.ws)
    }

    fn value_dir(&self, z: &[Complex64], ws: &mut PosWs, d: &mut [Complex64]) -> f64 {
        for (x, v) in ws.x.iter_mut().zip(z) {
            *x = v.norm();
        }
        let v = self.0.eval_grad(&ws.x, &mut ws.ws, &mut ws.grad);
        for (di, &g) in d.iter_mut().zip(&ws.grad) {
            *di = Complex64::new(0.5 * g, 0.0);
        }
        v
    }

    fn report(&self, v: f64) -> f64 {
        v
    }

    fn positive(&self) -> bool {
        true
    }
}

// ---------------------------------------------------------------------------
// Ascent

struct RunResult {
    value: f64,
    witness: Vec<Complex64>,
    converged: bool,
}

fn start_point(k: usize, n: usize, ball: Ball, positive: bool, seed: u64) -> Vec<Complex64> {
    if k == 0 {
        return vec![Complex64::new(1.0, 0.0); n];
    }
    if ball != Ball::Inf && k <= n {
        let mut e = vec![Complex64::zero(); n];
        e[k - 1] = Complex64::new(1.0, 0.0);
        // A small flat component keeps the ascent off degenerate faces.
        for v in e.iter_mut() {
            *v += 1e-3;
        }
        return e;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
    (0..n)
        .map(|_| {
            let v = complex_gaussian(&mut rng);
            if positive {
                Complex64::new(v.norm(), 0.0)
            } else if ball == Ball::Inf {
                Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
            } else {
                v
            }
        })
        .collect()
}

fn ascend<O: Objective>(obj: &O, ball: Ball, mut z: Vec<Complex64>, cfg: &OptConfig) -> RunResult {
    let n = obj.n();
    let mut ws = obj.workspace();
    let mut d = vec![Complex64::zero(); n];
    let mut cand = vec![Complex64::zero(); n];
    ball.retract(&mut z);
    let mut f = obj.value_dir(&z, &mut ws, &mut d);
    ball.tangent(&z, &mut d);
    let dnorm = d.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let mut converged = false;
    if !(dnorm > 0.0) || !f.is_finite() {
        return RunResult {
            value: f,
            witness: z,
            converged: true,
        };
    }
    let max_step = 2.0 * (n as f64).sqrt();
    let mut eta = 0.1 / dnorm;
    for _ in 0..cfg.max_iter {
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACK {
            for ((c, zi), di) in cand.iter_mut().zip(&z).zip(&d) {
                *c = zi + di * eta;
            }
            ball.retract(&mut cand);
            let fc = obj.value(&cand, &mut ws);
            let slope: f64 = 2.0
                * cand
                    .iter()
                    .zip(&z)
                    .zip(&d)
                    .map(|((c, zi), di)| (di.conj() * (c - zi)).re)
                    .sum::<f64>();
            if fc.is_finite() && fc > f && fc >= f + ARMIJO * slope.max(0.0) {
                accepted = Some(fc);
                break;
            }
            eta *= 0.5;
        }
        let Some(fc) = accepted else {
            converged = true;
            break;
        };
        let rel = (fc - f) / f.abs().max(1e-300);
        std::mem::swap(&mut z, &mut cand);
        f = obj.value_dir(&z, &mut ws, &mut d);
        ball.tangent(&z, &mut d);
        let dnorm = d.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        // Steps longer than the ball's diameter only lose precision in the retraction.
        eta = (2.0 * eta).min(max_step / dnorm.max(1e-300));
        if rel <= cfg.tol {
            converged = true;
            break;
        }
    }
    RunResult {
        value: f,
        witness: z,
        converged,
    }
}

fn lex_moduli(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.norm().total_cmp(&y.norm()) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

fn maximize<O: Objective>(obj: &O, ball: Ball, cfg: &OptConfig) -> NormEstimate {
    let n = obj.n();
    let run = |k: usize| {
        let start = start_point(k, n, ball, obj.positive(), cfg.seed);
        ascend(obj, ball, start, cfg)
    };
    let runs: Vec<RunResult> = if cfg.parallel {
        (0..cfg.restarts).into_par_iter().map(run).collect()
    } else {
        (0..cfg.restarts).map(run).collect()
    };
    let mut best = 0;
    for (i, r) in runs.iter().enumerate().skip(1) {
        let b = &runs[best];
        let finite = |v: f64| if v.is_finite() { v } else { f64::NEG_INFINITY };
        let better = match finite(r.value).total_cmp(&finite(b.value)) {
            Ordering::Greater => true,
            Ordering::Equal => lex_moduli(&r.witness, &b.witness) == Ordering::Less,
            Ordering::Less => false,
        };
        if better {
            best = i;
        }
    }
    let best_report = obj.report(runs[best].value);
    let second = runs
        .iter()
        .map(|r| obj.report(r.value))
        .filter(|&v| v < best_report * (1.0 - 1e-6))
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
    let gap = match second {
        Some(s) if best_report > 0.0 => 1.0 - s / best_report,
        _ => 0.0,
    };
    let mut witness = runs[best].witness.clone();
    let norm = ball.norm(&witness);
    if norm > 1.0 {
        witness.iter_mut().for_each(|v| *v /= norm);
        while ball.norm(&witness) > 1.0 {
            witness.iter_mut().for_each(|v| *v *= 1.0 - f64::EPSILON);
        }
    }
    let mut ws = obj.workspace();
    let value = obj.report(obj.value(&witness, &mut ws));
    NormEstimate {
        value,
        witness,
        restarts: cfg.restarts,
        converged: runs[best].converged,
        gap,
        exact: false,
    }
}

fn flat(n: usize, p: Exponent) -> Vec<Complex64> {
    let t = (n as f64).powf(-p.recip_f64());
    vec![Complex64::new(t, 0.0); n]
}

fn check_finite(p: &HomPoly) -> Result<()> {
    for (a, c) in p.terms() {
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::NonFinite(a.to_string()));
        }
    }
    Ok(())
}

/// Linear forms: `sup_{B_p} |Σ a_i z_i| = ‖a‖_{p′}` with the Hölder extremal as witness.
fn linear_dual(poly: &HomPoly, p: Exponent, moduli_only: bool) -> NormEstimate {
    let n = poly.n();
    let mut a = vec![Complex64::zero(); n];
    for (alpha, c) in poly.terms() {
        let i = alpha.exponents().iter().position(|&e| e == 1).expect("degree one");
        a[i] = if moduli_only { Complex64::new(c.norm(), 0.0) } else { *c };
    }
    let conj_phase = |c: Complex64| phase(c).conj();
    let w: Vec<Complex64> = if p.is_one() {
        let top = (0..n).max_by(|&i, &j| a[i].norm().total_cmp(&a[j].norm()).then(j.cmp(&i))).unwrap_or(0);
        (0..n)
            .map(|i| if i == top { conj_phase(a[i]) } else { Complex64::zero() })
            .collect()
    } else if p.is_infinite() {
        a.iter().map(|&c| conj_phase(c)).collect()
    } else {
        let pc = p.conjugate().to_f64();
        let s = lp_norm_f64(a.iter().map(|c| c.norm()), pc);
        a.iter()
            .map(|&c| conj_phase(c) * (c.norm() / s).powf(pc - 1.0))
            .collect()
    };
    let mut w = w;
    while lp_norm(&w, p) > 1.0 {
        w.iter_mut().for_each(|v| *v *= 1.0 - f64::EPSILON);
    }
    let value = a.iter().zip(&w).map(|(c, z)| c * z).sum::<Complex64>().norm();
    NormEstimate::closed_form(value, w)
}

/// `sup_{z ∈ B_{ℓ_p^n}} |P(z)|`, estimated from below.
pub fn sup_norm(poly: &HomPoly, p: Exponent, cfg: &OptConfig) -> Result<NormEstimate> {
    cfg.validate()?;
    check_finite(poly)?;
    let n = poly.n();
    if poly.is_zero() {
        return Ok(NormEstimate::closed_form(0.0, flat(n, p)));
    }
    if n == 1 || poly.degree() == 0 {
        let (_, c) = poly.terms().next().expect("nonzero");
        return Ok(NormEstimate::closed_form(c.norm(), vec![Complex64::new(1.0, 0.0); n]));
    }
    if poly.degree() == 1 {
        return Ok(linear_dual(poly, p, false));
    }
    Ok(maximize(&Modulus(poly.compile()), Ball::new(p), cfg))
}

/// `sup_{z ∈ B_{ℓ_q^n}} Σ_α |a_α z^α|`; exact for `q = ∞` and degree one.
pub fn majorant_sup(poly: &HomPoly, q: Exponent, cfg: &OptConfig) -> Result<NormEstimate> {
    cfg.validate()?;
    check_finite(poly)?;
    let n = poly.n();
    let ones = vec![Complex64::new(1.0, 0.0); n];
    if q.is_infinite() || n == 1 {
        let total = poly.terms().map(|(_, c)| c.norm()).sum();
        return Ok(NormEstimate::closed_form(total, ones));
    }
    if poly.is_zero() {
        return Ok(NormEstimate::closed_form(0.0, flat(n, q)));
    }
    if poly.degree() == 1 {
        return Ok(linear_dual(poly, q, true));
    }
    Ok(maximize(&Positive(poly.compile_majorant()), Ball::new(q), cfg))
}

/// `sup_{x ∈ B_{ℓ_q^n}} Σ_m r^m Σ_α |a_α x^α|` including `|a₀|`; exact for `n = 1` and `q = ∞`.
pub fn bohr_sum(series: &TruncatedSeries, r: f64, q: Exponent, cfg: &OptConfig) -> Result<NormEstimate> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::pre(format!("radius {r} must be finite and ≥ 0")));
    }
    cfg.validate()?;
    let n = series.n();
    let ones = vec![Complex64::new(1.0, 0.0); n];
    if n == 1 || q.is_infinite() || r == 0.0 {
        let mut total = series.a0().norm();
        for part in series.parts() {
            let rm = r.powi(part.degree() as i32);
            total += rm * part.terms().map(|(_, c)| c.norm()).sum::<f64>();
        }
        let w = if r == 0.0 && n > 1 { flat(n, q) } else { ones };
        return Ok(NormEstimate::closed_form(total, w));
    }
    Ok(maximize(&Positive(series.compile_bohr(r)), Ball::new(q), cfg))
}

/// `sup_{z ∈ B_{ℓ_p^n}} |F(z)|` for a truncated series.
///
/// One variable is handled by dense sampling of the circle followed by
/// golden-section refinement around the best samples.
pub fn series_sup(series: &TruncatedSeries, p: Exponent, cfg: &OptConfig) -> Result<NormEstimate> {
    cfg.validate()?;
    let comp = series.compile();
    if comp.is_empty() {
        return Ok(NormEstimate::closed_form(0.0, flat(series.n(), p)));
    }
    if series.n() == 1 {
        return Ok(circle_sup(&comp, series.max_degree()));
    }
    Ok(maximize(&Modulus(comp), Ball::new(p), cfg))
}

fn circle_sup(comp: &Compiled<Complex64>, degree: usize) -> NormEstimate {
    let samples = (64 * degree).max(1024);
    let mut ws = comp.workspace();
    let mut at = |theta: f64| comp.eval_with(&[Complex64::from_polar(1.0, theta)], &mut ws).norm();
    let h = std::f64::consts::TAU / samples as f64;
    let mut vals: Vec<(f64, f64)> = (0..samples)
        .map(|i| {
            let t = i as f64 * h;
            (at(t), t)
        })
        .collect();
    vals.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.total_cmp(&b.1)));
    let mut best = vals[0];
    for &(_, t) in vals.iter().take(8) {
        let (mut lo, mut hi) = (t - h, t + h);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let (mut f1, mut f2) = (at(x1), at(x2));
        for _ in 0..60 {
            if f1 >= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = at(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = at(x2);
            }
        }
        for (v, x) in [(f1, x1), (f2, x2)] {
            if v > best.0 {
                best = (v, x);
            }
        }
    }
    NormEstimate {
        value: best.0,
        witness: vec![Complex64::from_polar(1.0, best.1)],
        restarts: 8,
        converged: true,
        gap: 0.0,
        exact: false,
    }
}

// ---------------------------------------------------------------------------
// Rearrangements and X_∞

/// Moduli sorted nonincreasingly.
pub fn dec_rearrange(z: &[Complex64]) -> Vec<f64> {
    let mut x: Vec<f64> = z.iter().map(|v| v.norm()).collect();
    x.sort_by(|a, b| b.total_cmp(a));
    x
}

/// `max_{2≤k≤n} (Σ_{j≤k} z*_j²)^{1/2}/√(ln k)`.
pub fn x_infty_norm(z: &[Complex64]) -> Result<f64> {
    if z.len() < 2 {
        return Err(Error::pre("X_∞ norm needs at least two coordinates"));
    }
    let x = dec_rearrange(z);
    let mut acc = x[0] * x[0];
    let mut best: f64 = 0.0;
    for (i, &v) in x.iter().enumerate().skip(1) {
        acc += v * v;
        let k = (i + 1) as f64;
        best = best.max((acc / k.ln()).sqrt());
    }
    Ok(best)
}

/// `max_{2≤k≤n} k^{1/2−1/q}/√(ln k)` and the maximizing `k`.
pub fn id_norm_q_to_xinfty_argmax(n: usize, q: Exponent) -> Result<(f64, usize)> {
    if n < 2 {
        return Err(Error::pre("n must be at least 2"));
    }
    if q < Exponent::TWO {
        return Err(Error::pre("q must be at least 2"));
    }
    let e = 0.5 - q.recip_f64();
    let mut best = (f64::NEG_INFINITY, 2);
    for k in 2..=n {
        let kf = k as f64;
        let v = kf.powf(e) / kf.ln().sqrt();
        if v > best.0 {
            best = (v, k);
        }
    }
    Ok(best)
}

/// `‖id : ℓ_q^n → (X_∞)_n‖` for `q ≥ 2`.
pub fn id_norm_q_to_xinfty(n: usize, q: Exponent) -> Result<f64> {
    id_norm_q_to_xinfty_argmax(n, q).map(|(v, _)| v)
}

/// `z = y·w` with `|y_i| = |z_i|^{p/(p+2)}` and `|w_i| = |z_i|^{2/(p+2)}`;
/// phases go to `y`. For `p = ∞`, `y = z` and `w = 1`.
pub fn split_factorize(z: &[Complex64], p: Exponent) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if p < Exponent::TWO {
        return Err(Error::pre("split factorization needs p ≥ 2"));
    }
    if p.is_infinite() {
        return Ok((z.to_vec(), vec![Complex64::new(1.0, 0.0); z.len()]));
    }
    let pf = p.to_f64();
    let a = pf / (pf + 2.0);
    let b = 2.0 / (pf + 2.0);
    Ok(z.iter()
        .map(|&v| {
            let r = v.norm();
            if r == 0.0 {
                (Complex64::zero(), Complex64::zero())
            } else {
                (phase(v) * r.powf(a), Complex64::new(r.powf(b), 0.0))
            }
        })
        .unzip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::MultiIndex;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn mono(v: &[u32]) -> HomPoly {
        HomPoly::monomial(MultiIndex::new(v.to_vec()), c(1.0)).unwrap()
    }

    fn e(s: &str) -> Exponent {
        s.parse().unwrap()
    }

    fn cfg() -> OptConfig {
        OptConfig::default().with_restarts(16)
    }

    #[test]
    fn sup_norm_examples() {
        let p = mono(&[1, 1]);
        let est = sup_norm(&p, Exponent::TWO, &cfg()).unwrap();
        assert!((est.value - 0.5).abs() < 1e-9, "{}", est.value);
        assert!(lp_norm(&est.witness, Exponent::TWO) <= 1.0);
        for s in ["1", "3/2", "2", "inf"] {
            let v = sup_norm(&mono(&[3, 0, 0]), e(s), &cfg()).unwrap().value;
            assert!((v - 1.0).abs() < 1e-9, "p={s}: {v}");
        }
        let sum = HomPoly::from_terms(2, 1, [(MultiIndex::new(vec![1, 0]), c(1.0)), (MultiIndex::new(vec![0, 1]), c(1.0))]).unwrap();
        let v = sup_norm(&sum, Exponent::INF, &cfg()).unwrap().value;
        assert!((v - 2.0).abs() < 1e-9);
        assert!(sup_norm(&p, Exponent::TWO, &cfg().with_restarts(0)).is_err());
    }

    #[test]
    fn witness_reproduces_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in ["1", "4/3", "2", "inf"] {
            let poly = crate::polynomial::gaussian_poly(3, 3, &mut rng).unwrap();
            let est = sup_norm(&poly, e(p), &cfg()).unwrap();
            let at = poly.eval(&est.witness).unwrap().norm();
            assert!((at - est.value).abs() <= 1e-9 * est.value);
            assert!(lp_norm(&est.witness, e(p)) <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn deterministic_regardless_of_pool() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let poly = crate::polynomial::gaussian_poly(4, 3, &mut rng).unwrap();
        let a = sup_norm(&poly, Exponent::TWO, &cfg()).unwrap();
        let b = sup_norm(&poly, Exponent::TWO, &cfg().serial()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn majorant_examples() {
        let v = majorant_sup(&mono(&[1, 1]), Exponent::TWO, &cfg()).unwrap().value;
        assert!((v - 0.5).abs() < 1e-9);
        let m = HomPoly::monomial(MultiIndex::new(vec![2, 1]), c(-3.0)).unwrap();
        assert_eq!(majorant_sup(&m, Exponent::INF, &cfg()).unwrap().value, 3.0);
        let d = HomPoly::from_terms(2, 2, [(MultiIndex::new(vec![2, 0]), c(1.0)), (MultiIndex::new(vec![0, 2]), c(-1.0))]).unwrap();
        assert_eq!(majorant_sup(&d, Exponent::INF, &cfg()).unwrap().value, 2.0);
    }

    #[test]
    fn bohr_sum_examples() {
        let f = crate::polynomial::moebius_series(0.5, 40).unwrap();
        for r in [0.0, 0.2, 1.0 / 3.0, 0.5] {
            let v = bohr_sum(&f, r, Exponent::TWO, &cfg()).unwrap().value;
            let closed = 0.5 + 0.75 * r / (1.0 - 0.5 * r);
            assert!((v - closed).abs() <= (0.5 * r).powi(40) + 1e-12);
        }
        let part = mono(&[1, 1]);
        let s = TruncatedSeries::new(2, Complex64::zero(), vec![HomPoly::zero(2, 1), part]).unwrap();
        let v = bohr_sum(&s, 0.5, Exponent::TWO, &cfg()).unwrap().value;
        assert!((v - 0.125).abs() < 1e-9);
        let z = TruncatedSeries::new(2, c(0.25), vec![]).unwrap();
        assert_eq!(bohr_sum(&z, 0.0, Exponent::TWO, &cfg()).unwrap().value, 0.25);
        assert!(bohr_sum(&z, -1.0, Exponent::TWO, &cfg()).is_err());
    }

    #[test]
    fn series_sup_one_variable() {
        // |a₀| + |a₁| is attained on the circle.
        let part = HomPoly::monomial(MultiIndex::new(vec![1]), Complex64::new(0.0, 0.3)).unwrap();
        let s = TruncatedSeries::new(1, c(0.6), vec![part]).unwrap();
        let v = series_sup(&s, Exponent::INF, &cfg()).unwrap().value;
        assert!((v - 0.9).abs() < 1e-12);
    }

    #[test]
    fn rearrangement_examples() {
        assert_eq!(dec_rearrange(&[c(0.5), c(0.0), c(2.0)]), vec![2.0, 0.5, 0.0]);
        assert_eq!(dec_rearrange(&[Complex64::new(3.0, -4.0), c(12.0)]), vec![12.0, 5.0]);
        assert_eq!(dec_rearrange(&[c(1.0); 3]), vec![1.0; 3]);
    }

    #[test]
    fn x_infty_examples() {
        let e1 = [c(1.0), c(0.0), c(0.0)];
        assert!((x_infty_norm(&e1).unwrap() - 1.0 / 2f64.ln().sqrt()).abs() < 1e-15);
        assert_eq!(x_infty_norm(&[c(0.0); 4]).unwrap(), 0.0);
        let ones = [c(1.0); 8];
        let expect = (2..=8).map(|k| (k as f64 / (k as f64).ln()).sqrt()).fold(0.0, f64::max);
        assert!((x_infty_norm(&ones).unwrap() - expect).abs() < 1e-15);
        assert!((expect - (8.0 / 8f64.ln()).sqrt()).abs() < 1e-15);
        assert!(x_infty_norm(&[c(1.0)]).is_err());
    }

    #[test]
    fn id_norm_examples() {
        for n in [2, 5, 40] {
            let v = id_norm_q_to_xinfty(n, Exponent::TWO).unwrap();
            assert!((v - 1.0 / 2f64.ln().sqrt()).abs() < 1e-15);
        }
        let v = id_norm_q_to_xinfty(16, Exponent::INF).unwrap();
        assert!((v - 4.0 / 16f64.ln().sqrt()).abs() < 1e-14);
        assert!(id_norm_q_to_xinfty(16, e("3/2")).is_err());
        // The flat vector on the argmax prefix attains it.
        let (v, k) = id_norm_q_to_xinfty_argmax(30, e("4")).unwrap();
        let mut z = vec![c(0.0); 30];
        z[..k].iter_mut().for_each(|x| *x = c((k as f64).powf(-0.25)));
        let ratio = x_infty_norm(&z).unwrap() / lp_norm(&z, e("4"));
        assert!((ratio - v).abs() < 1e-12);
    }

    #[test]
    fn split_examples() {
        let (y, w) = split_factorize(&[c(0.25)], Exponent::TWO).unwrap();
        assert!((y[0] - c(0.5)).norm() < 1e-15 && (w[0] - c(0.5)).norm() < 1e-15);
        let z = [Complex64::new(0.3, -0.4), c(0.0), c(-2.0)];
        for p in ["2", "3", "inf"] {
            let (y, w) = split_factorize(&z, e(p)).unwrap();
            assert_eq!(y[1], Complex64::zero());
            for i in 0..3 {
                assert!((y[i] * w[i] - z[i]).norm() <= 1e-12);
            }
        }
        assert!(split_factorize(&z, e("3/2")).is_err());
    }

    #[test]
    fn simplex_projection_lands_on_simplex() {
        let y = simplex_projection(&[0.9, 0.8, 0.1]);
        assert!((y.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(y.iter().all(|&v| v >= 0.0));
        assert_eq!(simplex_projection(&[0.2, 0.8]), vec![0.2, 0.8]);
        let y = simplex_projection(&[1.7e43, 4.4e41, 0.0]);
        assert!((y.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monomial_on_l1_ball() {
        let p = HomPoly::monomial(MultiIndex::new(vec![2, 1, 0]), Complex64::new(1.0, 0.0)).unwrap();
        for r in [1, 8, 32] {
            let v = sup_norm(&p, Exponent::ONE, &OptConfig::default().with_restarts(r)).unwrap().value;
            assert!((v - 4.0 / 27.0).abs() < 1e-12, "{r}: {v}");
        }
    }

    #[test]
    fn linear_forms_attain_dual_norm() {
        let n = 5;
        let coeffs: Vec<Complex64> = (0..n).map(|i| Complex64::from_polar(1.0 + i as f64, 0.7 * i as f64)).collect();
        let terms = coeffs.iter().enumerate().map(|(i, &c)| {
            let mut e = vec![0u32; n];
            e[i] = 1;
            (MultiIndex::new(e), c)
        });
        let poly = HomPoly::from_terms(n, 1, terms).unwrap();
        for s in ["1", "4/3", "2", "4", "inf"] {
            let p: Exponent = s.parse().unwrap();
            let pc = p.conjugate();
            let expect = lp_norm(&coeffs, pc);
            let v = sup_norm(&poly, p, &OptConfig::default()).unwrap();
            assert!(v.exact && (v.value - expect).abs() < 1e-12 * expect, "{s}: {} vs {expect}", v.value);
            assert!(lp_norm(&v.witness, p) <= 1.0);
            let m = majorant_sup(&poly, p, &OptConfig::default()).unwrap();
            assert!((m.value - expect).abs() < 1e-12 * expect, "{s}");
        }
    }

    #[test]
    fn ascent_reaches_dual_norm_at_intermediate_p() {
        let n = 8;
        let poly = HomPoly::from_terms(
            n,
            1,
            (0..n)
                .map(|i| {
                    let mut e = vec![0u32; n];
                    e[i] = 1;
                    (MultiIndex::new(e), Complex64::new(1.0 + (i % 3) as f64, 0.0))
                }),
        )
        .unwrap();
        for s in ["4/3", "3/2", "4"] {
            let p: Exponent = s.parse().unwrap();
            let exact = sup_norm(&poly, p, &OptConfig::default()).unwrap().value;
            let cfg = OptConfig::default().with_restarts(4).with_max_iter(200);
            let v = maximize(&Modulus(poly.compile()), Ball::new(p), &cfg).value;
            assert!(v <= exact * (1.0 + 1e-12) && v >= exact * (1.0 - 1e-9), "{s}: {v} vs {exact}");
        }
    }
}
