//! Monomial index sets.
//!
//! Two coordinates label the monomials of an `m`-homogeneous polynomial in
//! `n` variables: exponent vectors `α ∈ Λ(m,n)` and nondecreasing index
//! tuples `j ∈ 𝒥(m,n)`. `tuple_to_alpha` counts occurrences and
//! `alpha_to_tuple` inverts it. Indices in tuples are 1-based.
//!
//! All counts are exact big integers. Enumeration is colexicographic for
//! `Λ` and lexicographic for `𝒥`, so outputs are reproducible.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of items a single stream may produce.
pub const DEFAULT_STREAM_BUDGET: u64 = 100_000_000;

/// An exponent vector `α ∈ ℕ₀ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    /// Validates length and degree.
    pub fn checked(exponents: Vec<u32>, m: u32, n: usize) -> Result<Self> {
        if exponents.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: exponents.len(),
            });
        }
        let deg: u64 = exponents.iter().map(|&e| e as u64).sum();
        if deg != m as u64 {
            return Err(Error::pre(format!(
                "multi-index {exponents:?} has degree {deg}, expected {m}"
            )));
        }
        Ok(MultiIndex(exponents))
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }

    pub fn max_entry(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.0)
    }
}

/// A nondecreasing tuple `1 ≤ j₁ ≤ … ≤ j_m ≤ n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexTuple(Vec<u32>);

impl IndexTuple {
    pub fn new(indices: Vec<u32>, n: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::pre(format!("tuple {indices:?} is not nondecreasing")));
        }
        if indices.iter().any(|&j| j == 0 || j as usize > n) {
            return Err(Error::pre(format!("tuple {indices:?} leaves 1..={n}")));
        }
        Ok(IndexTuple(indices))
    }

    pub fn empty() -> Self {
        IndexTuple(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// `(j, k)`; `None` when `k` would break monotonicity.
    pub fn extended(&self, k: u32) -> Option<IndexTuple> {
        if self.last().is_some_and(|l| k < l) {
            return None;
        }
        let mut v = self.0.clone();
        v.push(k);
        Some(IndexTuple(v))
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.0)
    }
}

fn write_joined(f: &mut fmt::Formatter<'_>, v: &[u32]) -> fmt::Result {
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(";")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Exact counting

pub fn factorial(k: u32) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// `|Λ(m,n)| = binom(n+m−1, m)`.
pub fn lambda_card(m: u32, n: usize) -> BigUint {
    if n == 0 {
        return if m == 0 { BigUint::one() } else { BigUint::zero() };
    }
    binomial(n as u64 + m as u64 - 1, m as u64)
}

/// `|Λ_k(m,n)|` by inclusion–exclusion over the variables exceeding `k`.
pub fn lambda_k_card(m: u32, n: usize, k: u32) -> BigUint {
    let mut plus = BigUint::zero();
    let mut minus = BigUint::zero();
    let step = k as u64 + 1;
    for j in 0..=n as u64 {
        let used = j * step;
        if used > m as u64 {
            break;
        }
        let term = binomial(n as u64, j) * lambda_card((m as u64 - used) as u32, n);
        if j.is_even() {
            plus += term;
        } else {
            minus += term;
        }
    }
    plus - minus
}

/// `m!/α!`, the number of tuples `i ∈ ℕᵐ` that rearrange to `F⁻¹(α)`.
pub fn multiplicity(alpha: &MultiIndex) -> BigUint {
    multiplicity_of(alpha.exponents())
}

pub fn multiplicity_of(exponents: &[u32]) -> BigUint {
    let m: u32 = exponents.iter().sum();
    let denom = exponents
        .iter()
        .fold(BigUint::one(), |acc, &a| acc * factorial(a));
    factorial(m) / denom
}

/// `m!/α!` as a float, computed through logarithms when it would overflow.
pub fn multiplicity_f64(exponents: &[u32]) -> f64 {
    let m: u32 = exponents.iter().sum();
    if m <= 170 {
        let mut v = factorial_f64(m);
        for &a in exponents {
            v /= factorial_f64(a);
        }
        v.round()
    } else {
        multiplicity_of(exponents).to_f64().unwrap_or(f64::INFINITY)
    }
}

fn factorial_f64(k: u32) -> f64 {
    (2..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// `ln(k!)`.
pub fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// `ln` of a big integer, valid beyond the `f64` range.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

// ---------------------------------------------------------------------------
// F and its inverse

/// `F(j)`: `α_i = #{k : j_k = i}`.
pub fn tuple_to_alpha(j: &IndexTuple, n: usize) -> Result<MultiIndex> {
    let mut alpha = vec![0u32; n];
    for &i in j.indices() {
        if i == 0 || i as usize > n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: i as usize,
            });
        }
        alpha[i as usize - 1] += 1;
    }
    Ok(MultiIndex(alpha))
}

/// `F⁻¹(α)`: index `i` repeated `α_i` times.
pub fn alpha_to_tuple(alpha: &MultiIndex) -> IndexTuple {
    let mut v = Vec::with_capacity(alpha.degree() as usize);
    for (i, &a) in alpha.exponents().iter().enumerate() {
        v.extend(std::iter::repeat(i as u32 + 1).take(a as usize));
    }
    IndexTuple(v)
}

/// `|j| = m!/F(j)!`.
pub fn tuple_multiplicity(j: &IndexTuple) -> BigUint {
    let mut runs = Vec::new();
    let mut iter = j.indices().iter().peekable();
    while let Some(&x) = iter.next() {
        let mut run = 1u32;
        while iter.peek() == Some(&&x) {
            iter.next();
            run += 1;
        }
        runs.push(run);
    }
    multiplicity_of(&runs)
}

pub fn is_k_bounded(alpha: &MultiIndex, k: u32) -> bool {
    alpha.exponents().iter().all(|&a| a <= k)
}

// ---------------------------------------------------------------------------
// Streams

fn check_budget(what: &'static str, card: &BigUint, budget: u64) -> Result<()> {
    if card > &BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            what,
            needed: card.to_string(),
            budget,
        });
    }
    Ok(())
}

/// Colexicographic stream over `{α ∈ Λ(m,n) : α_i ≤ cap}`.
///
/// The successor increases the lowest position `i ≥ 1` that still has room
/// and mass below it, then refills positions `0..i` greedily from the left.
#[derive(Debug, Clone)]
pub struct LambdaIter {
    m: u32,
    cap: u32,
    current: Vec<u32>,
    started: bool,
    done: bool,
}

impl LambdaIter {
    fn new(m: u32, n: usize, cap: u32) -> Self {
        let mut it = LambdaIter {
            m,
            cap,
            current: vec![0; n],
            started: false,
            done: n == 0 && m > 0,
        };
        if !it.done && !fill_greedy(&mut it.current, m, cap) {
            it.done = true;
        }
        it
    }

    /// Restarts the stream from the first element.
    pub fn reset(&mut self) {
        *self = LambdaIter::new(self.m, self.current.len(), self.cap);
    }

    /// Advances and borrows the next exponent vector without allocating.
    pub fn advance(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        if !colex_successor(&mut self.current, self.cap) {
            self.done = true;
            return None;
        }
        Some(&self.current)
    }
}

impl Iterator for LambdaIter {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        self.advance().map(|a| MultiIndex(a.to_vec()))
    }
}

fn fill_greedy(slots: &mut [u32], mut mass: u32, cap: u32) -> bool {
    for s in slots.iter_mut() {
        let take = mass.min(cap);
        *s = take;
        mass -= take;
    }
    mass == 0
}

fn colex_successor(a: &mut [u32], cap: u32) -> bool {
    let n = a.len();
    let mut below = a.first().copied().unwrap_or(0);
    for i in 1..n {
        if a[i] < cap && below >= 1 {
            a[i] += 1;
            fill_greedy(&mut a[..i], below - 1, cap);
            return true;
        }
        below += a[i];
    }
    false
}

/// `Λ(m,n)` in colexicographic order, under the default budget.
pub fn enumerate_lambda(m: u32, n: usize) -> Result<LambdaIter> {
    enumerate_lambda_with_budget(m, n, DEFAULT_STREAM_BUDGET)
}

pub fn enumerate_lambda_with_budget(m: u32, n: usize, budget: u64) -> Result<LambdaIter> {
    if n == 0 {
        return Err(Error::pre("n must be at least 1"));
    }
    check_budget("Λ(m,n)", &lambda_card(m, n), budget)?;
    Ok(LambdaIter::new(m, n, m))
}

/// `Λ_k(m,n) = {α ∈ Λ(m,n) : α_i ≤ k}` in colexicographic order.
pub fn enumerate_lambda_k(m: u32, n: usize, k: u32) -> Result<LambdaIter> {
    enumerate_lambda_k_with_budget(m, n, k, DEFAULT_STREAM_BUDGET)
}

pub fn enumerate_lambda_k_with_budget(
    m: u32,
    n: usize,
    k: u32,
    budget: u64,
) -> Result<LambdaIter> {
    if n == 0 {
        return Err(Error::pre("n must be at least 1"));
    }
    if k == 0 && m > 0 {
        return Err(Error::pre("k must be at least 1"));
    }
    check_budget("Λ_k(m,n)", &lambda_k_card(m, n, k), budget)?;
    Ok(LambdaIter::new(m, n, k.min(m)))
}

/// Lexicographic stream over `𝒥(m,n)`.
#[derive(Debug, Clone)]
pub struct TupleIter {
    n: u32,
    current: Vec<u32>,
    started: bool,
    done: bool,
}

impl TupleIter {
    pub fn advance(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        let Some(pos) = self.current.iter().rposition(|&j| j < self.n) else {
            self.done = true;
            return None;
        };
        let v = self.current[pos] + 1;
        for x in &mut self.current[pos..] {
            *x = v;
        }
        Some(&self.current)
    }

    pub fn reset(&mut self) {
        self.current.iter_mut().for_each(|x| *x = 1);
        self.started = false;
        self.done = false;
    }
}

impl Iterator for TupleIter {
    type Item = IndexTuple;

    fn next(&mut self) -> Option<IndexTuple> {
        self.advance().map(|j| IndexTuple(j.to_vec()))
    }
}

pub fn enumerate_j(m: u32, n: usize) -> Result<TupleIter> {
    enumerate_j_with_budget(m, n, DEFAULT_STREAM_BUDGET)
}

pub fn enumerate_j_with_budget(m: u32, n: usize, budget: u64) -> Result<TupleIter> {
    if n == 0 {
        return Err(Error::pre("n must be at least 1"));
    }
    check_budget("𝒥(m,n)", &lambda_card(m, n), budget)?;
    Ok(TupleIter {
        n: n as u32,
        current: vec![1; m as usize],
        started: false,
        done: false,
    })
}

/// Upper bound `n·binom(n+m−k−3, m−k−2)` on `|𝒥ᶜ_k(m−1,n)|`, the number of
/// length-`(m−1)` tuples in which some index repeats more than `k` times.
pub fn complement_card_bound(m: u32, n: usize, k: u32) -> Result<BigUint> {
    if m < k + 2 {
        return Err(Error::pre(format!(
            "bound needs m−k−2 ≥ 0 (m={m}, k={k})"
        )));
    }
    let top = n as u64 + m as u64 - k as u64 - 3;
    // n + m − k − 3 can only underflow for n = 0, which is rejected upstream.
    if n == 0 {
        return Err(Error::pre("n must be at least 1"));
    }
    Ok(BigUint::from(n) * binomial(top, (m - k - 2) as u64))
}

/// `𝒥* = {j′ : (j′, k) ∈ J for some k}`; all tuples must share a length ≥ 1.
pub fn derived_set<'a, I>(tuples: I) -> Result<BTreeSet<IndexTuple>>
where
    I: IntoIterator<Item = &'a IndexTuple>,
{
    let mut out = BTreeSet::new();
    let mut len = None;
    for j in tuples {
        match len {
            None => {
                if j.is_empty() {
                    return Err(Error::pre("derived set needs tuples of length ≥ 1"));
                }
                len = Some(j.len());
            }
            Some(l) if l != j.len() => {
                return Err(Error::pre("tuples in a derived set must share a length"));
            }
            _ => {}
        }
        out.insert(IndexTuple(j.indices()[..j.len() - 1].to_vec()));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Partition shapes

/// An integer partition of `m` and the number of `α ∈ Λ(m,n)` with that shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionShape {
    pub parts: Vec<u32>,
    pub arrangements: BigUint,
}

impl PartitionShape {
    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    /// `m!/∏λ_i!`, shared by every arrangement.
    pub fn multiplicity(&self) -> BigUint {
        multiplicity_of(&self.parts)
    }
}

/// `n!/((n−ℓ)!·∏_v c_v!)` where `c_v` counts parts equal to `v`.
fn arrangement_count(parts: &[u32], n: usize) -> BigUint {
    let l = parts.len() as u64;
    let mut falling = BigUint::one();
    for i in 0..l {
        falling *= BigUint::from(n as u64 - i);
    }
    let mut denom = BigUint::one();
    let mut i = 0;
    while i < parts.len() {
        let mut run = 1;
        while i + run < parts.len() && parts[i + run] == parts[i] {
            run += 1;
        }
        denom *= factorial(run as u32);
        i += run;
    }
    falling / denom
}

/// Partitions of `m` into at most `n` parts, in reverse lexicographic order.
#[derive(Debug, Clone)]
pub struct PartitionShapes {
    n: usize,
    current: Option<Vec<u32>>,
}

impl Iterator for PartitionShapes {
    type Item = PartitionShape;

    fn next(&mut self) -> Option<PartitionShape> {
        loop {
            let parts = self.current.take()?;
            self.current = next_partition(&parts);
            if parts.len() <= self.n {
                let arrangements = arrangement_count(&parts, self.n);
                return Some(PartitionShape {
                    parts,
                    arrangements,
                });
            }
        }
    }
}

fn next_partition(parts: &[u32]) -> Option<Vec<u32>> {
    // Find the rightmost part larger than 1, decrease it, and redistribute
    // the freed mass in chunks no larger than the decreased part.
    let pos = parts.iter().rposition(|&x| x > 1)?;
    let mut out = parts[..pos].to_vec();
    let v = parts[pos] - 1;
    let mut rest: u32 = parts[pos + 1..].iter().sum::<u32>() + 1;
    out.push(v);
    while rest > 0 {
        let take = rest.min(v);
        out.push(take);
        rest -= take;
    }
    Some(out)
}

pub fn partition_shapes(m: u32, n: usize) -> Result<PartitionShapes> {
    if n == 0 {
        return Err(Error::pre("n must be at least 1"));
    }
    let first = if m == 0 { Vec::new() } else { vec![m] };
    Ok(PartitionShapes {
        n,
        current: Some(first),
    })
}
