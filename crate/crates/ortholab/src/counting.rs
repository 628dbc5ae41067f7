//! Exact counts of mutually orthogonal k-tuples.
//!
//! `lambda_k` is the number of ordered tuples `(x^1, ..., x^k)` drawn from E
//! (repeats allowed) with `x^i . x^j = 0` for all `i < j`. A repeated vector
//! therefore requires that vector to be isotropic, and the zero vector, if
//! present in E, pairs with everything.
//!
//! Two independent routes compute the same number: nested enumeration over
//! `E^k` with pairwise dot products, and candidate-set intersection on the
//! orthogonality adjacency with packed bit rows. Their exact agreement is the
//! central correctness property of the crate.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::discrepancy::scaled_charsum;
use crate::exact::{checked_ratio, decimal_string, upow};
use crate::geometry::PointSet;
use crate::{Error, Result};

/// Options shared by the two counting routes.
#[derive(Debug, Clone)]
pub struct CountOptions {
    /// Restrict to tuples of distinct nonzero vectors instead of the literal
    /// ordered-with-repeats definition. All theorem checks use the default.
    pub distinct_nonzero: bool,
    /// Work budget for the brute-force route, in pair checks.
    pub budget_pair_checks: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { distinct_nonzero: false, budget_pair_checks: 1_000_000_000 }
    }
}

/// The exact count, the statistically expected count, and their ratio.
#[derive(Debug, Clone)]
pub struct TupleCensus {
    pub k: u32,
    pub lambda: BigUint,
    /// `|E|^k * q^(-k(k-1)/2)` as an exact rational.
    pub expected: BigRational,
    /// `lambda / expected`; None when the expected count is zero.
    pub ratio: Option<BigRational>,
}

impl TupleCensus {
    fn new(k: u32, lambda: u128, set_len: u64, q: u64) -> TupleCensus {
        let lambda = BigUint::from(lambda);
        let expected = expected_count(set_len, q, k);
        let lam_rat = BigRational::from_integer(BigInt::from(lambda.clone()));
        let ratio = checked_ratio(&lam_rat, &expected);
        TupleCensus { k, lambda, expected, ratio }
    }

    pub fn ratio_decimal(&self) -> Option<String> {
        self.ratio.as_ref().map(|r| decimal_string(r, 12))
    }

    /// Stable JSON rendering; unbounded integers go out as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "k": self.k,
            "lambda": self.lambda.to_string(),
            "expected_num": self.expected.numer().to_string(),
            "expected_den": self.expected.denom().to_string(),
            "ratio_decimal": self.ratio_decimal(),
        })
    }
}

/// `n^k / q^(k(k-1)/2)`, exactly.
pub fn expected_count(n: u64, q: u64, k: u32) -> BigRational {
    let num = BigInt::from(upow(n, k));
    let den = BigInt::from(upow(q, k * (k - 1) / 2));
    BigRational::new(num, den)
}

/// Orthogonality relation over E as packed bit rows, indexed by position in
/// the venc-sorted member order. `A(x, y) = 1` iff `x . y = 0`; the diagonal
/// bit is set exactly for isotropic vectors. This is the kernel everything
/// fast sits on; rows are read-only after construction.
#[derive(Debug, Clone)]
pub struct OrthAdjacency {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl OrthAdjacency {
    pub fn build(e: &PointSet) -> OrthAdjacency {
        let n = e.len();
        let words = n.div_ceil(64);
        let members: Vec<_> = e.iter().collect();
        let mut rows = vec![0u64; n * words];
        for i in 0..n {
            for j in i..n {
                let orthogonal = members[i]
                    .dot(members[j])
                    .expect("members share field and dimension")
                    .is_zero();
                if orthogonal {
                    rows[i * words + j / 64] |= 1 << (j % 64);
                    rows[j * words + i / 64] |= 1 << (i % 64);
                }
            }
        }
        OrthAdjacency { n, words, rows }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.row(i)[j / 64] >> (j % 64) & 1 == 1
    }

    pub fn degree(&self, i: usize) -> u64 {
        self.row(i).iter().map(|w| w.count_ones() as u64).sum()
    }

    fn full_mask(&self) -> Vec<u64> {
        let mut mask = vec![u64::MAX; self.words];
        if self.n % 64 != 0 {
            if let Some(last) = mask.last_mut() {
                *last = (1u64 << (self.n % 64)) - 1;
            }
        }
        if self.n == 0 {
            mask.clear();
        }
        mask
    }
}

fn popcount(words: &[u64]) -> u128 {
    words.iter().map(|w| w.count_ones() as u128).sum()
}

fn for_each_bit(words: &[u64], mut f: impl FnMut(usize)) {
    for (wi, &w) in words.iter().enumerate() {
        let mut bits = w;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            f(wi * 64 + b);
            bits &= bits - 1;
        }
    }
}

/// Ways to extend a partial tuple by `remaining` more vectors chosen from
/// `candidates`, shrinking the candidate set by row intersection at each step.
fn extend_count(adj: &OrthAdjacency, candidates: &[u64], remaining: u32, distinct: bool) -> u128 {
    if remaining == 0 {
        return 1;
    }
    if remaining == 1 {
        return popcount(candidates);
    }
    let mut total = 0u128;
    for_each_bit(candidates, |v| {
        let mut next: Vec<u64> = candidates
            .iter()
            .zip(adj.row(v))
            .map(|(c, r)| c & r)
            .collect();
        if distinct {
            next[v / 64] &= !(1 << (v % 64));
        }
        total += extend_count(adj, &next, remaining - 1, distinct);
    });
    total
}

fn initial_mask(e: &PointSet, adj: &OrthAdjacency, distinct: bool) -> Vec<u64> {
    let mut mask = adj.full_mask();
    if distinct {
        if let Ok(pos) = e.vencs().binary_search(&0) {
            mask[pos / 64] &= !(1 << (pos % 64));
        }
    }
    mask
}

/// `lambda_k` by candidate-set intersection on the adjacency. Identical to
/// [`count_tuples_bruteforce`] by construction; the outermost coordinate is
/// counted in parallel and partial counts combine by exact addition, so the
/// result is bit-identical for every worker count.
pub fn count_tuples_graph(e: &PointSet, k: u32, opts: &CountOptions) -> TupleCensus {
    let q = e.field().order();
    let n = e.len() as u64;
    if k == 0 {
        return TupleCensus::new(0, 1, n, q);
    }
    let adj = OrthAdjacency::build(e);
    let mask = initial_mask(e, &adj, opts.distinct_nonzero);
    let mut first = Vec::new();
    for_each_bit(&mask, |v| first.push(v));
    let lambda: u128 = first
        .par_iter()
        .map(|&v| {
            let mut next: Vec<u64> =
                mask.iter().zip(adj.row(v)).map(|(c, r)| c & r).collect();
            if opts.distinct_nonzero {
                next[v / 64] &= !(1 << (v % 64));
            }
            extend_count(&adj, &next, k - 1, opts.distinct_nonzero)
        })
        .sum();
    TupleCensus::new(k, lambda, n, q)
}

/// `lambda_k` by nested enumeration over `E^k`, checking each new entry
/// against the whole prefix with direct dot products. The work budget guards
/// the tuple space up front.
pub fn count_tuples_bruteforce(e: &PointSet, k: u32, opts: &CountOptions) -> Result<TupleCensus> {
    let q = e.field().order();
    let n = e.len() as u64;
    if k == 0 {
        return Ok(TupleCensus::new(0, 1, n, q));
    }
    let tuples = (n as u128)
        .checked_pow(k)
        .ok_or(Error::BudgetExceeded {
            cost: u128::MAX,
            budget: opts.budget_pair_checks as u128,
            unit: "pair checks",
            hint: "use count_tuples_graph",
        })?;
    let cost = tuples.saturating_mul(u128::from(k) * u128::from(k - 1) / 2);
    if cost > opts.budget_pair_checks as u128 {
        return Err(Error::BudgetExceeded {
            cost,
            budget: opts.budget_pair_checks as u128,
            unit: "pair checks",
            hint: "use count_tuples_graph",
        });
    }

    let members: Vec<_> = e.iter().collect();
    let mut lambda = 0u128;
    let mut prefix = Vec::with_capacity(k as usize);
    count_rec(&members, k, opts.distinct_nonzero, &mut prefix, &mut lambda);
    Ok(TupleCensus::new(k, lambda, n, q))
}

fn count_rec<'a>(
    members: &[&'a crate::geometry::FVector],
    remaining: u32,
    distinct: bool,
    prefix: &mut Vec<usize>,
    acc: &mut u128,
) {
    if remaining == 0 {
        *acc += 1;
        return;
    }
    'next: for (idx, cand) in members.iter().enumerate() {
        if distinct && (cand.is_zero() || prefix.contains(&idx)) {
            continue;
        }
        for &p in prefix.iter() {
            if !members[p].dot(cand).expect("same space").is_zero() {
                continue 'next;
            }
        }
        prefix.push(idx);
        count_rec(members, remaining - 1, distinct, prefix, acc);
        prefix.pop();
    }
}

/// Visit every ordered tuple of `D_k` as member indices, in lexicographic
/// member order.
pub fn for_each_orthogonal_tuple(e: &PointSet, k: u32, mut f: impl FnMut(&[usize])) {
    if k == 0 {
        f(&[]);
        return;
    }
    let adj = OrthAdjacency::build(e);
    let mask = adj.full_mask();
    let mut path = Vec::with_capacity(k as usize);
    visit_rec(&adj, &mask, k, &mut path, &mut f);
}

fn visit_rec(
    adj: &OrthAdjacency,
    candidates: &[u64],
    remaining: u32,
    path: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if remaining == 0 {
        f(path);
        return;
    }
    for_each_bit(candidates, |v| {
        let next: Vec<u64> = candidates
            .iter()
            .zip(adj.row(v))
            .map(|(c, r)| c & r)
            .collect();
        path.push(v);
        visit_rec(adj, &next, remaining - 1, path, f);
        path.pop();
    });
}

/// The theorem's size threshold `q^(d(k-1)/k + (k-1)/2 + 1/k)` with the
/// unspecified constant taken as 1.
#[derive(Debug, Clone)]
pub struct Threshold {
    pub q: u64,
    pub d: usize,
    pub k: u32,
    /// Exact exponent as a rational.
    pub exponent: BigRational,
    /// `q^exponent`, for display only.
    pub value: f64,
}

impl Threshold {
    /// Exact in-regime test `m >= q^exponent`, done on integers:
    /// with exponent = N/D this is `m^D >= q^N`.
    pub fn meets(&self, m: u64) -> bool {
        let num = self.exponent.numer().to_u32().expect("small exponent");
        let den = self.exponent.denom().to_u32().expect("small exponent");
        upow(m, den) >= upow(self.q, num)
    }
}

/// Errors unless `0 < k(k-1)/2 < d`.
pub fn threshold_size(q: u64, d: usize, k: u32) -> Result<Threshold> {
    let pairs = u64::from(k) * u64::from(k.saturating_sub(1)) / 2;
    if pairs == 0 {
        return Err(Error::HypothesisViolated(format!(
            "k(k-1)/2 = {pairs} must be positive (k = {k})"
        )));
    }
    if pairs >= d as u64 {
        return Err(Error::HypothesisViolated(format!(
            "k(k-1)/2 = {pairs} must be less than d = {d}"
        )));
    }
    // d(k-1)/k + (k-1)/2 + 1/k = (2d(k-1) + k(k-1) + 2) / (2k)
    let k64 = u64::from(k);
    let num = 2 * (d as u64) * (k64 - 1) + k64 * (k64 - 1) + 2;
    let den = 2 * k64;
    let exponent = BigRational::new(BigInt::from(num), BigInt::from(den));
    let value = (q as f64).powf(num as f64 / den as f64);
    Ok(Threshold { q, d, k, exponent, value })
}

/// The exact decomposition `lambda_k = I + II + III`:
/// `I = |E| q^-(k-1) lambda_(k-1)` is the main term, `II` sums the scaled
/// character-sum discrepancy over `D_(k-1)`, and `III` is the exact
/// remainder (the mixed zero/nonzero dual-variable patterns; identically 0
/// for k = 2).
#[derive(Debug, Clone)]
pub struct MainTermDecomposition {
    pub k: u32,
    pub lambda_k: BigUint,
    pub lambda_km1: BigUint,
    pub term_i: BigRational,
    pub term_ii: BigRational,
    pub term_iii: BigRational,
}

impl MainTermDecomposition {
    pub fn to_json(&self) -> serde_json::Value {
        let rat = |r: &BigRational| {
            json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
        };
        json!({
            "k": self.k,
            "lambda_k": self.lambda_k.to_string(),
            "lambda_km1": self.lambda_km1.to_string(),
            "term_i": rat(&self.term_i),
            "term_ii": rat(&self.term_ii),
            "term_iii": rat(&self.term_iii),
        })
    }
}

pub fn decompose_main_terms(e: &PointSet, k: u32) -> Result<MainTermDecomposition> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "main-term decomposition needs k >= 2, got {k}"
        )));
    }
    let opts = CountOptions::default();
    let lambda_k = count_tuples_graph(e, k, &opts).lambda;
    let lambda_km1 = count_tuples_graph(e, k - 1, &opts).lambda;
    let q = e.field().order();
    let qk1 = BigInt::from(upow(q, k - 1));

    let term_i = BigRational::new(
        BigInt::from(e.len() as u64) * BigInt::from(lambda_km1.clone()),
        qk1.clone(),
    );

    let members: Vec<_> = e.iter().cloned().collect();
    let mut scaled_sum: i128 = 0;
    for_each_orthogonal_tuple(e, k - 1, |idxs| {
        let tuple: Vec<_> = idxs.iter().map(|&i| members[i].clone()).collect();
        let s = scaled_charsum(e, &tuple).expect("tuple drawn from E");
        scaled_sum += i128::from(s);
    });
    let term_ii = BigRational::new(BigInt::from(scaled_sum), qk1);

    let lambda_rat = BigRational::from_integer(BigInt::from(lambda_k.clone()));
    let term_iii = &lambda_rat - &term_i - &term_ii;
    Ok(MainTermDecomposition { k, lambda_k, lambda_km1, term_i, term_ii, term_iii })
}

/// Edge-list export formats for the pairwise orthogonality graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeListFormat {
    /// `# q=.. d=.. n=.. edges=..` header comment, then `u v` lines.
    Plain,
    /// DIMACS-style: `c` comments, a `p edge <n> <m>` summary line, and
    /// `e u v` lines.
    Dimacs,
}

impl std::str::FromStr for EdgeListFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<EdgeListFormat> {
        match s {
            "plain" => Ok(EdgeListFormat::Plain),
            "dimacs" => Ok(EdgeListFormat::Dimacs),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// Edge list of the orthogonality graph on E: one `u v` line per unordered
/// adjacent pair with `u <= v` as venc values, isotropic vertices as
/// self-loops `u u`.
pub fn export_graph(e: &PointSet, format: EdgeListFormat) -> String {
    let adj = OrthAdjacency::build(e);
    let vencs = e.vencs();
    let mut edges: Vec<(u64, u64)> = Vec::new();
    for i in 0..adj.len() {
        for j in i..adj.len() {
            if adj.is_adjacent(i, j) {
                edges.push((vencs[i], vencs[j]));
            }
        }
    }
    let mut out = String::new();
    let (q, d, n, m) = (e.field().order(), e.dim(), e.len(), edges.len());
    match format {
        EdgeListFormat::Plain => {
            out.push_str(&format!("# q={q} d={d} n={n} edges={m}\n"));
            for (u, v) in &edges {
                out.push_str(&format!("{u} {v}\n"));
            }
        }
        EdgeListFormat::Dimacs => {
            out.push_str(&format!("c q={q} d={d} n={n} edges={m}\n"));
            out.push_str(&format!("p edge {n} {m}\n"));
            for (u, v) in &edges {
                out.push_str(&format!("e {u} {v}\n"));
            }
        }
    }
    out
}
