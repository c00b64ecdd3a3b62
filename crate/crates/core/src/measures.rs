//! Exhaustive and sampled evaluation of the pseudorandomness measures.
//!
//! A correlation spec selects `l` rows `I` (1-based), shifts
//! `0 <= d_1 <= ... <= d_l` and a window length `M` with `M + d_l <= N`.
//! It is admissible when, for every pair of tuple positions with equal
//! shifts, the two selected rows are different sequences. This one rule is
//! used for every measure, including the full-window variants where all
//! shifts are zero (so an index may not repeat there).
//!
//! Among specs attaining a maximum the witness is the one with the
//! lexicographically smallest `(I, D, M, W)`, where `W` is the symbol pattern
//! for `gamma` and the bijection tuple for `Gamma`.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::{binomial, pow_sat, Budget};
use crate::construct::{Family, SpecificationPattern, Symbol};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact(Budget),
    /// Evaluate `samples` seeded random specs; the result is a lower bound.
    Sampled { samples: usize, seed: u64 },
}

impl Default for Mode {
    fn default() -> Self {
        Mode::Exact(Budget::MEASURE)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Evaluation {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "sampled-lower-bound")]
    SampledLowerBound,
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Evaluation::Exact => "exact",
            Evaluation::SampledLowerBound => "sampled-lower-bound",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    FComplexity,
    Phi,
    PhiCirc,
    Gamma,
    GammaCirc,
    BigGamma,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::FComplexity,
        Measure::Phi,
        Measure::PhiCirc,
        Measure::Gamma,
        Measure::GammaCirc,
        Measure::BigGamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::FComplexity => "C",
            Measure::Phi => "Phi",
            Measure::PhiCirc => "Phicirc",
            Measure::Gamma => "gamma",
            Measure::GammaCirc => "gammacirc",
            Measure::BigGamma => "Gamma",
        }
    }

    pub fn has_order(self) -> bool {
        self != Measure::FComplexity
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::param(format!(
                    "unknown measure `{s}` (expected one of C, Phi, Phicirc, gamma, gammacirc, Gamma)"
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Ratio<i64>),
    /// Floating-point magnitude; the true value lies within `error_bound`.
    Real { value: f64, error_bound: f64 },
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Value::Real { value, .. } => *value,
        }
    }

    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Value::Exact(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{r}"),
            Value::Real { value, .. } => write!(f, "{value}"),
        }
    }
}

/// A fully specified correlation term. Rows and window length are 1-based
/// counts, shifts are 0-based offsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrelationSpec {
    pub ell: usize,
    pub m: usize,
    pub shifts: Vec<usize>,
    pub rows: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<Vec<Symbol>>,
    /// Bijection per tuple position: symbol `a` maps to the root `omega^{phi[a]}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    /// An uncovered pattern certifying `C <= |positions| - 1`.
    Pattern(SpecificationPattern),
    Correlation(CorrelationSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureResult {
    pub measure: Measure,
    /// `l`, or `None` for the f-complexity.
    pub order: Option<usize>,
    pub value: Value,
    pub witness: Option<Witness>,
    pub evaluation: Evaluation,
}

// ---------------------------------------------------------------------------
// f-complexity

/// Largest `j` with `k^j <= f`.
fn floor_log(k: u64, f: u64) -> usize {
    let mut j = 0;
    let mut acc = 1u64;
    while let Some(next) = acc.checked_mul(k) {
        if next > f {
            break;
        }
        acc = next;
        j += 1;
    }
    j
}

fn pattern_index(row: &[Symbol], positions: &[usize], k: u64) -> usize {
    positions
        .iter()
        .fold(0u64, |acc, &pos| acc * k + row[pos] as u64) as usize
}

fn pattern_symbols(mut index: usize, j: usize, k: u64) -> Vec<Symbol> {
    let mut out = vec![0; j];
    for slot in out.iter_mut().rev() {
        *slot = (index as u64 % k) as Symbol;
        index /= k as usize;
    }
    out
}

/// Smallest pattern index at 0-based `positions` realized by no row.
fn missing_pattern(fam: &Family, positions: &[usize]) -> Option<usize> {
    let k = fam.k() as u64;
    let mut seen = vec![false; k.pow(positions.len() as u32) as usize];
    for row in fam.rows() {
        seen[pattern_index(row, positions, k)] = true;
    }
    seen.iter().position(|&s| !s)
}

fn uncovered(fam: &Family, positions: &[usize], index: usize) -> Witness {
    let j = positions.len();
    Witness::Pattern(SpecificationPattern {
        positions: positions.iter().map(|&p| p + 1).collect(),
        symbols: pattern_symbols(index, j, fam.k() as u64),
    })
}

/// The largest `j` such that every pattern of `j` symbols at every `j`
/// positions occurs in some row.
///
/// The witness is the first uncovered `(positions, pattern)` pair in
/// lexicographic order, or `None` when `C = N`.
pub fn f_complexity(fam: &Family, budget: Budget) -> Result<MeasureResult> {
    let (f, n, k) = (fam.size() as u64, fam.length(), fam.k() as u64);
    let done = |c: usize, witness| MeasureResult {
        measure: Measure::FComplexity,
        order: None,
        value: Value::Exact(Ratio::from_integer(c as i64)),
        witness,
        evaluation: Evaluation::Exact,
    };
    if k == 1 {
        return Ok(done(n, None));
    }
    let cap = n.min(floor_log(k, f));
    const CHUNK: usize = 4096;
    for j in 1..=cap {
        let estimate = binomial(n as u128, j as u128)
            .saturating_mul((f as u128 * j as u128).saturating_add(pow_sat(k as u128, j as u32)));
        if estimate > budget.limit {
            return Err(Error::Budget {
                what: format!("f-complexity at pattern size {j}"),
                estimate,
                limit: budget.limit,
                certified: Some(j as u64 - 1),
            });
        }
        let mut combos = (0..n).combinations(j);
        loop {
            let chunk: Vec<Vec<usize>> = combos.by_ref().take(CHUNK).collect();
            if chunk.is_empty() {
                break;
            }
            let hit = chunk
                .par_iter()
                .find_map_first(|pos| missing_pattern(fam, pos).map(|idx| (pos.clone(), idx)));
            if let Some((pos, idx)) = hit {
                return Ok(done(j - 1, Some(uncovered(fam, &pos, idx))));
            }
        }
    }
    if cap == n {
        return Ok(done(n, None));
    }
    // k^{cap+1} > F, so some pattern is missing at the first cap+1 positions.
    let pos: Vec<usize> = (0..=cap).collect();
    let idx = missing_pattern(fam, &pos)
        .ok_or_else(|| Error::Internal("all k^(cap+1) patterns realized by F rows".into()))?;
    Ok(done(cap, Some(uncovered(fam, &pos, idx))))
}

// ---------------------------------------------------------------------------
// shared scan machinery

fn check_order(fam: &Family, ell: usize) -> Result<()> {
    if ell == 0 {
        return Err(Error::param("correlation order l must be at least 1"));
    }
    if fam.size() == 0 || fam.length() == 0 {
        return Err(Error::param("empty family"));
    }
    Ok(())
}

fn require_binary(fam: &Family, what: &str) -> Result<()> {
    if fam.k() != 2 {
        return Err(Error::param(format!(
            "{what} is defined for binary families only (k = {}); use gamma or Gamma",
            fam.k()
        )));
    }
    Ok(())
}

fn shift_tuples(n: usize, ell: usize) -> Vec<Vec<usize>> {
    (0..n).combinations_with_replacement(ell).collect()
}

fn shift_count(n: usize, ell: usize, circ: bool) -> u128 {
    if circ {
        1
    } else {
        binomial((n + ell - 1) as u128, ell as u128)
    }
}

fn row_tuple(mut index: u64, f: u64, ell: usize) -> Vec<usize> {
    let mut out = vec![0; ell];
    for slot in out.iter_mut().rev() {
        *slot = (index % f) as usize;
        index /= f;
    }
    out
}

fn row_tuple_count(f: usize, ell: usize) -> Result<u64> {
    (f as u64)
        .checked_pow(ell as u32)
        .ok_or_else(|| Error::Budget {
            what: "row tuple enumeration".into(),
            estimate: u128::MAX,
            limit: u64::MAX as u128,
            certified: None,
        })
}

fn admissible(classes: &[usize], rows: &[usize], shifts: &[usize]) -> bool {
    for a in 0..rows.len() {
        for b in a + 1..rows.len() {
            if shifts[a] == shifts[b] && classes[rows[a]] == classes[rows[b]] {
                return false;
            }
        }
    }
    true
}

/// Best spec found so far. `rows` is the index of the row tuple in
/// lexicographic order; the other key parts compare directly.
#[derive(Clone, Debug)]
struct Cand<S> {
    score: S,
    rows: u64,
    shifts: Vec<usize>,
    m: usize,
    extra: Vec<u32>,
}

impl<S: PartialOrd> Cand<S> {
    fn key(&self) -> (u64, &[usize], usize, &[u32]) {
        (self.rows, &self.shifts, self.m, &self.extra)
    }

    /// Larger score wins; ties go to the smaller key. Commutative and
    /// associative, so parallel reductions are deterministic.
    fn pick(a: Self, b: Self) -> Self {
        if a.score > b.score {
            a
        } else if b.score > a.score {
            b
        } else if a.key() <= b.key() {
            a
        } else {
            b
        }
    }
}

/// Per-(I, D) evaluation: the best `(score, M, extra)` over window lengths.
type Kernel<'a, S> = dyn Fn(&[usize], &[usize]) -> (S, usize, Vec<u32>) + Sync + 'a;

struct Scan<'a> {
    fam: &'a Family,
    ell: usize,
    classes: Vec<usize>,
}

impl<'a> Scan<'a> {
    fn new(fam: &'a Family, ell: usize) -> Self {
        Scan {
            fam,
            ell,
            classes: fam.row_classes(),
        }
    }

    fn exhaustive<S>(&self, circ: bool, kernel: &Kernel<'_, S>) -> Result<Cand<S>>
    where
        S: PartialOrd + Copy + Send,
    {
        let f = self.fam.size() as u64;
        let total = row_tuple_count(self.fam.size(), self.ell)?;
        let shifts = if circ {
            vec![vec![0; self.ell]]
        } else {
            shift_tuples(self.fam.length(), self.ell)
        };
        (0..total)
            .into_par_iter()
            .filter_map(|idx| {
                let rows = row_tuple(idx, f, self.ell);
                let mut best: Option<Cand<S>> = None;
                for d in shifts.iter().filter(|d| admissible(&self.classes, &rows, d)) {
                    let (score, m, extra) = kernel(&rows, d);
                    if best.as_ref().is_none_or(|b| score > b.score) {
                        best = Some(Cand {
                            score,
                            rows: idx,
                            shifts: d.clone(),
                            m,
                            extra,
                        });
                    }
                }
                best
            })
            .reduce_with(Cand::pick)
            .ok_or_else(|| no_admissible(self.ell))
    }

    /// Seeded random admissible `(I, D)` pairs, drawn sequentially so the
    /// sample set does not depend on the thread count.
    fn draw(&self, samples: usize, seed: u64) -> Vec<(u64, Vec<usize>, Vec<usize>)> {
        let f = self.fam.size() as u64;
        let n = self.fam.length();
        let total = (f as u128).saturating_pow(self.ell as u32).min(u64::MAX as u128) as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(samples);
        for _ in 0..samples {
            let idx = rng.gen_range(0..total);
            let rows = row_tuple(idx, f, self.ell);
            let mut d: Vec<usize> = (0..self.ell).map(|_| rng.gen_range(0..n)).collect();
            d.sort_unstable();
            if admissible(&self.classes, &rows, &d) {
                out.push((idx, rows, d));
            }
        }
        out
    }

    fn sampled<S>(&self, samples: usize, seed: u64, kernel: &Kernel<'_, S>) -> Result<Cand<S>>
    where
        S: PartialOrd + Copy + Send,
    {
        if samples == 0 {
            return Err(Error::param("sampled mode needs at least one sample"));
        }
        self.draw(samples, seed)
            .into_par_iter()
            .map(|(idx, rows, d)| {
                let (score, m, extra) = kernel(&rows, &d);
                Cand {
                    score,
                    rows: idx,
                    shifts: d,
                    m,
                    extra,
                }
            })
            .reduce_with(Cand::pick)
            .ok_or_else(|| Error::param("no admissible spec among the samples"))
    }

    fn spec<S>(&self, cand: &Cand<S>) -> CorrelationSpec {
        CorrelationSpec {
            ell: self.ell,
            m: cand.m,
            shifts: cand.shifts.clone(),
            rows: row_tuple(cand.rows, self.fam.size() as u64, self.ell)
                .into_iter()
                .map(|r| r + 1)
                .collect(),
            pattern: None,
            phi: None,
        }
    }
}

fn no_admissible(ell: usize) -> Error {
    Error::param(format!(
        "no admissible correlation spec of order {ell}: equal rows need distinct shifts"
    ))
}

fn sign_rows(fam: &Family) -> Vec<Vec<i64>> {
    fam.rows()
        .iter()
        .map(|row| row.iter().map(|&s| crate::construct::sign(s)).collect())
        .collect()
}

/// Max over `M` of `|sum_{n<M} prod_a sign(e_{i_a, n + d_a})|`; smallest `M` on ties.
fn phi_kernel(signs: &[Vec<i64>], n: usize, rows: &[usize], d: &[usize], m_full: bool) -> (i64, usize) {
    let m_max = n - d[d.len() - 1];
    let mut sum = 0i64;
    let mut best = (-1i64, 0usize);
    for t in 0..m_max {
        let mut prod = 1i64;
        for (&r, &s) in rows.iter().zip(d) {
            prod *= signs[r][t + s];
        }
        sum += prod;
        if !m_full && sum.abs() > best.0 {
            best = (sum.abs(), t + 1);
        }
    }
    if m_full {
        (sum.abs(), m_max)
    } else {
        best
    }
}

fn exact_result(measure: Measure, ell: usize, value: Ratio<i64>, spec: CorrelationSpec, eval: Evaluation) -> MeasureResult {
    MeasureResult {
        measure,
        order: Some(ell),
        value: Value::Exact(value),
        witness: Some(Witness::Correlation(spec)),
        evaluation: eval,
    }
}

fn evaluation_of(mode: &Mode) -> Evaluation {
    match mode {
        Mode::Exact(_) => Evaluation::Exact,
        Mode::Sampled { .. } => Evaluation::SampledLowerBound,
    }
}

// ---------------------------------------------------------------------------
// cross-correlation

fn phi_estimate(fam: &Family, ell: usize, circ: bool) -> u128 {
    pow_sat(fam.size() as u128, ell as u32)
        .saturating_mul(shift_count(fam.length(), ell, circ))
        .saturating_mul(fam.length() as u128)
}

fn phi_scan(fam: &Family, ell: usize, mode: Mode, circ: bool) -> Result<(Cand<i64>, CorrelationSpec)> {
    let scan = Scan::new(fam, ell);
    let signs = sign_rows(fam);
    let n = fam.length();
    let kernel = |rows: &[usize], d: &[usize]| {
        let (s, m) = phi_kernel(&signs, n, rows, d, circ);
        (s, m, Vec::new())
    };
    let cand = match mode {
        Mode::Exact(budget) => {
            budget.check("cross-correlation", phi_estimate(fam, ell, circ))?;
            scan.exhaustive(circ, &kernel)?
        }
        Mode::Sampled { samples, seed } => scan.sampled(samples, seed, &kernel)?,
    };
    let spec = scan.spec(&cand);
    Ok((cand, spec))
}

/// Correlation measure of order `l` of a binary family:
/// `max_{M, D, I} |sum_{n=1}^M e_{i_1, n+d_1} ... e_{i_l, n+d_l}|`.
pub fn cross_correlation(fam: &Family, ell: usize, mode: Mode) -> Result<MeasureResult> {
    check_order(fam, ell)?;
    require_binary(fam, "the cross-correlation measure")?;
    let (cand, spec) = phi_scan(fam, ell, mode, false)?;
    Ok(exact_result(Measure::Phi, ell, Ratio::from_integer(cand.score), spec, evaluation_of(&mode)))
}

/// Cross-correlation restricted to zero shifts and the full row length.
pub fn cross_correlation_circ(fam: &Family, ell: usize, budget: Budget) -> Result<MeasureResult> {
    check_order(fam, ell)?;
    require_binary(fam, "the cross-correlation measure")?;
    let (cand, spec) = phi_scan(fam, ell, Mode::Exact(budget), true)?;
    Ok(exact_result(Measure::PhiCirc, ell, Ratio::from_integer(cand.score), spec, Evaluation::Exact))
}

// ---------------------------------------------------------------------------
// well-distribution gamma

fn pattern_count(k: u32, ell: usize) -> Result<u64> {
    (k as u64)
        .checked_pow(ell as u32)
        .filter(|&kk| kk <= i64::MAX as u64 / 1024)
        .ok_or_else(|| Error::param(format!("k^l = {k}^{ell} is too large")))
}

/// `W` index of the tuple read at offset `t`, first position most significant.
#[inline]
fn tuple_index(fam: &Family, rows: &[usize], d: &[usize], t: usize) -> usize {
    let k = fam.k() as usize;
    rows.iter()
        .zip(d)
        .fold(0usize, |acc, (&r, &s)| acc * k + fam.row(r)[t + s] as usize)
}

/// Scaled deviation `max_W |K count_W - M|` maintained incrementally over `M`.
struct Tally {
    kk: i64,
    counts: Vec<i64>,
    hist: Vec<i64>,
    max: i64,
    min: i64,
}

impl Tally {
    fn new(kk: usize, n: usize) -> Self {
        let mut hist = vec![0; n + 2];
        hist[0] = kk as i64;
        Tally {
            kk: kk as i64,
            counts: vec![0; kk],
            hist,
            max: 0,
            min: 0,
        }
    }

    /// Adds one occurrence of `w`; returns the deviation at the new `M`.
    fn push(&mut self, w: usize, m: i64) -> i64 {
        let c = self.counts[w] as usize;
        self.counts[w] += 1;
        self.hist[c] -= 1;
        self.hist[c + 1] += 1;
        self.max = self.max.max(c as i64 + 1);
        while self.hist[self.min as usize] == 0 {
            self.min += 1;
        }
        (self.kk * self.max - m).max(m - self.kk * self.min)
    }

    /// Smallest pattern attaining deviation `dev` at window length `m`.
    fn smallest_attaining(&self, dev: i64, m: i64) -> usize {
        self.counts
            .iter()
            .position(|&c| (self.kk * c - m).abs() == dev)
            .expect("deviation attained by some pattern")
    }
}

fn gamma_kernel(fam: &Family, kk: usize, rows: &[usize], d: &[usize], m_full: bool) -> (i64, usize, Vec<u32>) {
    let n = fam.length();
    let m_max = n - d[d.len() - 1];
    let mut tally = Tally::new(kk, n);
    let mut best = (-1i64, 0usize);
    for t in 0..m_max {
        let dev = tally.push(tuple_index(fam, rows, d, t), t as i64 + 1);
        if !m_full && dev > best.0 {
            best = (dev, t + 1);
        }
        if m_full && t + 1 == m_max {
            best = (dev, m_max);
        }
    }
    // Replay up to the best window to read off the smallest attaining W.
    let mut replay = Tally::new(kk, n);
    for t in 0..best.1 {
        replay.push(tuple_index(fam, rows, d, t), t as i64 + 1);
    }
    let w = replay.smallest_attaining(best.0, best.1 as i64);
    (best.0, best.1, vec![w as u32])
}

fn gamma_scan(fam: &Family, ell: usize, mode: Mode, circ: bool) -> Result<MeasureResult> {
    check_order(fam, ell)?;
    let kk = pattern_count(fam.k(), ell)?;
    let scan = Scan::new(fam, ell);
    let kernel = |rows: &[usize], d: &[usize]| gamma_kernel(fam, kk as usize, rows, d, circ);
    let cand = match mode {
        Mode::Exact(budget) => {
            let estimate = pow_sat(fam.size() as u128, ell as u32)
                .saturating_mul(shift_count(fam.length(), ell, circ))
                .saturating_mul(2 * fam.length() as u128 + 2 * kk as u128);
            budget.check("well-distribution measure", estimate)?;
            scan.exhaustive(circ, &kernel)?
        }
        Mode::Sampled { samples, seed } => scan.sampled(samples, seed, &kernel)?,
    };
    let mut spec = scan.spec(&cand);
    spec.pattern = Some(pattern_symbols(cand.extra[0] as usize, ell, fam.k() as u64));
    let measure = if circ { Measure::GammaCirc } else { Measure::Gamma };
    Ok(exact_result(measure, ell, Ratio::new(cand.score, kk as i64), spec, evaluation_of(&mode)))
}

/// `max_{W, M, D, I} |g(W, M, D, I) - M/k^l|` where `g` counts window
/// positions whose symbol tuple equals `W`. Exact rational value.
pub fn gamma(fam: &Family, ell: usize, mode: Mode) -> Result<MeasureResult> {
    gamma_scan(fam, ell, mode, false)
}

/// `gamma` restricted to zero shifts and the full row length.
pub fn gamma_circ(fam: &Family, ell: usize, budget: Budget) -> Result<MeasureResult> {
    gamma_scan(fam, ell, Mode::Exact(budget), true)
}

// ---------------------------------------------------------------------------
// character-sum measure Gamma

/// Running sum `z = sum_t c_t omega^t` over the k-th roots of unity.
///
/// Counts and the autocorrelation `A_s = sum_t c_t c_{t+s}` stay integral;
/// `|z|^2 = sum_s A_s cos(2 pi s / k)` is the only floating-point step.
struct RootWalk<'a> {
    counts: Vec<i64>,
    auto: Vec<i64>,
    cos: &'a [f64],
}

impl<'a> RootWalk<'a> {
    fn new(cos: &'a [f64]) -> Self {
        let k = cos.len();
        RootWalk {
            counts: vec![0; k],
            auto: vec![0; k],
            cos,
        }
    }

    fn push(&mut self, u: usize) -> f64 {
        let k = self.counts.len();
        self.auto[0] += 2 * self.counts[u] + 1;
        for s in 1..k {
            self.auto[s] += self.counts[(u + s) % k] + self.counts[(u + k - s) % k];
        }
        self.counts[u] += 1;
        self.auto
            .iter()
            .zip(self.cos)
            .map(|(&a, &c)| a as f64 * c)
            .sum::<f64>()
            .max(0.0)
    }
}

fn cos_table(k: u32) -> Vec<f64> {
    (0..k)
        .map(|s| (2.0 * std::f64::consts::PI * s as f64 / k as f64).cos())
        .collect()
}

/// Bijections `pi` of `[0, k)` with `pi(0) = 0`, in lexicographic order.
/// Composing with a rotation of the roots only changes `z` by a unit factor.
fn normalized_bijections(k: u32) -> Vec<Vec<u32>> {
    (1..k)
        .permutations((k - 1) as usize)
        .map(|tail| std::iter::once(0).chain(tail).collect())
        .collect()
}

struct PhiTable {
    perms: Vec<Vec<u32>>,
    ell: usize,
    k: u32,
}

impl PhiTable {
    fn count(&self) -> u64 {
        (self.perms.len() as u64).pow(self.ell as u32)
    }

    fn tuple(&self, index: u64) -> Vec<Vec<u32>> {
        row_tuple(index, self.perms.len() as u64, self.ell)
            .into_iter()
            .map(|i| self.perms[i].clone())
            .collect()
    }

    /// Root exponent for every pattern index `W`.
    fn exponents(&self, index: u64) -> Vec<u8> {
        let phi = self.tuple(index);
        let kk = (self.k as usize).pow(self.ell as u32);
        (0..kk)
            .map(|w| {
                let syms = pattern_symbols(w, self.ell, self.k as u64);
                let e: u32 = syms.iter().zip(&phi).map(|(&s, p)| p[s as usize]).sum();
                (e % self.k) as u8
            })
            .collect()
    }
}

fn walk_best(word: &[usize], exps: &[u8], cos: &[f64]) -> (f64, usize) {
    let mut walk = RootWalk::new(cos);
    let mut best = (-1.0f64, 0usize);
    for (t, &w) in word.iter().enumerate() {
        let v = walk.push(exps[w] as usize);
        if v > best.0 {
            best = (v, t + 1);
        }
    }
    best
}

fn walk_first_at_least(word: &[usize], exps: &[u8], cos: &[f64], threshold: f64) -> Option<(usize, f64)> {
    let mut walk = RootWalk::new(cos);
    word.iter().enumerate().find_map(|(t, &w)| {
        let v = walk.push(exps[w] as usize).sqrt();
        (v >= threshold).then_some((t + 1, v))
    })
}

fn identity_phi(k: u32, ell: usize) -> Vec<Vec<u32>> {
    vec![(0..k).collect(); ell]
}

/// Tolerance on `|z|` for floating-point ties.
fn gamma_tolerance(ell: usize, n: usize) -> f64 {
    ell as f64 * n as f64 * 2f64.powi(-50)
}

/// `max |sum_{n=1}^M phi_1(e_{i_1, n+d_1}) ... phi_l(e_{i_l, n+d_l})|` over
/// bijections `phi_a` from the alphabet onto the k-th roots of unity.
///
/// For `k <= 2` every value is an integer and the result is exact. Otherwise
/// the value is a float with `error_bound = l N 2^-50`; specs within that
/// tolerance of the maximum count as ties for the witness.
pub fn big_gamma(fam: &Family, ell: usize, mode: Mode) -> Result<MeasureResult> {
    check_order(fam, ell)?;
    let k = fam.k();
    if k <= 2 {
        let (cand, mut spec) = phi_scan(fam, ell, mode, false)?;
        spec.phi = Some(identity_phi(k, ell));
        return Ok(exact_result(
            Measure::BigGamma,
            ell,
            Ratio::from_integer(cand.score),
            spec,
            evaluation_of(&mode),
        ));
    }
    let kk = pattern_count(k, ell)? as usize;
    let table = PhiTable {
        perms: normalized_bijections(k),
        ell,
        k,
    };
    let cos = cos_table(k);
    let exps: Vec<Vec<u8>> = match mode {
        Mode::Exact(budget) => {
            let estimate = phi_estimate(fam, ell, false)
                .saturating_mul(table.count() as u128)
                .saturating_mul(k as u128)
                .saturating_add((table.count() as u128).saturating_mul(kk as u128));
            budget.check("character-sum measure", estimate)?;
            (0..table.count()).map(|i| table.exponents(i)).collect()
        }
        Mode::Sampled { .. } => Vec::new(),
    };
    let scan = Scan::new(fam, ell);
    let tol = gamma_tolerance(ell, fam.length());
    let word = |rows: &[usize], d: &[usize]| -> Vec<usize> {
        (0..fam.length() - d[ell - 1])
            .map(|t| tuple_index(fam, rows, d, t))
            .collect()
    };

    let (spec, value) = match mode {
        Mode::Exact(_) => {
            let kernel = |rows: &[usize], d: &[usize]| {
                let w = word(rows, d);
                let best = exps
                    .iter()
                    .map(|e| walk_best(&w, e, &cos).0)
                    .fold(-1.0f64, f64::max);
                (best, 0usize, Vec::new())
            };
            let top = scan.exhaustive(false, &kernel)?.score.sqrt();
            let threshold = top - tol;
            let f = fam.size() as u64;
            let shifts = shift_tuples(fam.length(), ell);
            let (idx, d, m, phi, v) = (0..row_tuple_count(fam.size(), ell)?)
                .into_par_iter()
                .find_map_first(|idx| {
                    let rows = row_tuple(idx, f, ell);
                    shifts
                        .iter()
                        .filter(|d| admissible(&scan.classes, &rows, d))
                        .find_map(|d| {
                            let w = word(&rows, d);
                            exps.iter()
                                .enumerate()
                                .filter_map(|(pi, e)| {
                                    walk_first_at_least(&w, e, &cos, threshold)
                                        .map(|(m, v)| (m, pi, v))
                                })
                                .min_by_key(|&(m, pi, _)| (m, pi))
                                .map(|(m, pi, v)| (idx, d.clone(), m, pi as u64, v))
                        })
                })
                .ok_or_else(|| Error::Internal("maximum not reattained on second pass".into()))?;
            let cand = Cand { score: v, rows: idx, shifts: d, m, extra: Vec::new() };
            let mut spec = scan.spec(&cand);
            spec.phi = Some(table.tuple(phi));
            (spec, v)
        }
        Mode::Sampled { samples, seed } => {
            if samples == 0 {
                return Err(Error::param("sampled mode needs at least one sample"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
            let drawn: Vec<_> = scan
                .draw(samples, seed)
                .into_iter()
                .map(|s| (s, rng.gen_range(0..table.count())))
                .collect();
            let scored: Vec<(f64, usize)> = drawn
                .par_iter()
                .map(|((_, rows, d), pi)| walk_best(&word(rows, d), &table.exponents(*pi), &cos))
                .collect();
            let top = scored.iter().map(|s| s.0).fold(-1.0f64, f64::max).sqrt();
            let threshold = top - tol;
            let (idx, d, m, pi, v) = drawn
                .iter()
                .filter_map(|((idx, rows, d), pi)| {
                    walk_first_at_least(&word(rows, d), &table.exponents(*pi), &cos, threshold)
                        .map(|(m, v)| (*idx, d, m, *pi, v))
                })
                .min_by(|a, b| (a.0, a.1, a.2, a.3).cmp(&(b.0, b.1, b.2, b.3)))
                .ok_or_else(|| Error::Internal("maximum not reattained on second pass".into()))?;
            let cand = Cand { score: v, rows: idx, shifts: d.clone(), m, extra: Vec::new() };
            let mut spec = scan.spec(&cand);
            spec.phi = Some(table.tuple(pi));
            (spec, v)
        }
    };
    Ok(MeasureResult {
        measure: Measure::BigGamma,
        order: Some(ell),
        value: Value::Real {
            value,
            error_bound: tol,
        },
        witness: Some(Witness::Correlation(spec)),
        evaluation: evaluation_of(&mode),
    })
}

// ---------------------------------------------------------------------------
// dispatch and certificate checking

/// Evaluates `measure` of order `ell` (ignored for `C`).
pub fn evaluate(fam: &Family, measure: Measure, ell: usize, mode: Mode) -> Result<MeasureResult> {
    let budget = match mode {
        Mode::Exact(b) => b,
        Mode::Sampled { .. } => Budget::MEASURE,
    };
    match measure {
        Measure::FComplexity => f_complexity(fam, budget),
        Measure::Phi => cross_correlation(fam, ell, mode),
        Measure::PhiCirc => cross_correlation_circ(fam, ell, budget),
        Measure::Gamma => gamma(fam, ell, mode),
        Measure::GammaCirc => gamma_circ(fam, ell, budget),
        Measure::BigGamma => big_gamma(fam, ell, mode),
    }
}

fn validate_spec(fam: &Family, spec: &CorrelationSpec, circ: bool) -> Result<Vec<usize>> {
    let ell = spec.ell;
    if ell == 0 || spec.rows.len() != ell || spec.shifts.len() != ell {
        return Err(Error::param("spec tuples must have length l >= 1"));
    }
    if spec.rows.iter().any(|&r| r == 0 || r > fam.size()) {
        return Err(Error::param("spec row index out of range"));
    }
    if spec.shifts.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::param("spec shifts must be non-decreasing"));
    }
    if spec.m == 0 || spec.m + spec.shifts[ell - 1] > fam.length() {
        return Err(Error::param("spec window exceeds the row length"));
    }
    if circ && (spec.m != fam.length() || spec.shifts.iter().any(|&d| d != 0)) {
        return Err(Error::param("full-window spec needs M = N and zero shifts"));
    }
    let rows: Vec<usize> = spec.rows.iter().map(|r| r - 1).collect();
    if !admissible(&fam.row_classes(), &rows, &spec.shifts) {
        return Err(Error::param("spec uses equal rows at equal shifts"));
    }
    Ok(rows)
}

/// Recomputes the value certified by `witness` directly from the definition.
pub fn evaluate_witness(fam: &Family, measure: Measure, witness: Option<&Witness>) -> Result<Value> {
    let exact = |v: i64| Value::Exact(Ratio::from_integer(v));
    match (measure, witness) {
        (Measure::FComplexity, None) => Ok(exact(fam.length() as i64)),
        (Measure::FComplexity, Some(Witness::Pattern(p))) => {
            if p.positions.is_empty() || p.positions.iter().any(|&i| i > fam.length()) {
                return Err(Error::param("pattern positions out of range"));
            }
            if fam.realizes(p) {
                return Err(Error::Domain("certificate pattern is realized by a row".into()));
            }
            Ok(exact(p.positions.len() as i64 - 1))
        }
        (_, Some(Witness::Correlation(spec))) if measure != Measure::FComplexity => {
            let circ = matches!(measure, Measure::PhiCirc | Measure::GammaCirc);
            let rows = validate_spec(fam, spec, circ)?;
            let k = fam.k();
            let tuples = (0..spec.m).map(|t| -> Vec<Symbol> {
                rows.iter()
                    .zip(&spec.shifts)
                    .map(|(&r, &d)| fam.row(r)[t + d])
                    .collect()
            });
            match measure {
                Measure::Phi | Measure::PhiCirc => {
                    require_binary(fam, "the cross-correlation measure")?;
                    let s: i64 = tuples
                        .map(|w| w.iter().map(|&e| crate::construct::sign(e)).product::<i64>())
                        .sum();
                    Ok(exact(s.abs()))
                }
                Measure::Gamma | Measure::GammaCirc => {
                    let pattern = spec
                        .pattern
                        .as_ref()
                        .filter(|w| w.len() == spec.ell && w.iter().all(|&s| s < k))
                        .ok_or_else(|| Error::param("gamma witness needs a pattern W"))?;
                    let kk = pattern_count(k, spec.ell)? as i64;
                    let count = tuples.filter(|w| w == pattern).count() as i64;
                    Ok(Value::Exact(Ratio::new((kk * count - spec.m as i64).abs(), kk)))
                }
                Measure::BigGamma => {
                    let phi = spec
                        .phi
                        .as_ref()
                        .filter(|phi| {
                            phi.len() == spec.ell
                                && phi.iter().all(|p| {
                                    let mut q = p.clone();
                                    q.sort_unstable();
                                    q == (0..k).collect::<Vec<_>>()
                                })
                        })
                        .ok_or_else(|| Error::param("Gamma witness needs one bijection per row"))?;
                    let exps = tuples.map(|w| {
                        w.iter().zip(phi).map(|(&e, p)| p[e as usize]).sum::<u32>() % k
                    });
                    if k <= 2 {
                        let s: i64 = exps.map(|e| if e == 0 { 1 } else { -1 }).sum();
                        return Ok(exact(s.abs()));
                    }
                    let cos = cos_table(k);
                    let mut walk = RootWalk::new(&cos);
                    let sq = exps.fold(0.0, |_, e| walk.push(e as usize));
                    Ok(Value::Real {
                        value: sq.sqrt(),
                        error_bound: gamma_tolerance(spec.ell, fam.length()),
                    })
                }
                Measure::FComplexity => unreachable!(),
            }
        }
        _ => Err(Error::param(format!("witness kind does not match measure {measure}"))),
    }
}
