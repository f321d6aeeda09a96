//! Schubert calculus on Gr(k,n), classical and quantum.
//!
//! * [`lr_coefficient`] counts Littlewood-Richardson skew tableaux: semistandard
//!   fillings of nu/lambda with content mu whose reverse reading word is a
//!   lattice word. This is the structure constant of the classical cup product.
//! * [`quantum_product`] expands sigma_lambda * sigma_mu in the small quantum
//!   cohomology ring: classical coefficients for all shapes with at most k rows
//!   are pushed back into the box by removing rim hooks of size n. Each removed
//!   hook raises the quantum degree by one; the deformation parameter q has
//!   cohomological degree 2n.
//! * [`gw_invariant_3pt`] reads off the genus-zero three-point invariant
//!   <sigma_a, sigma_b, sigma_c>_d as the coefficient of (c^complement, d).
//!
//! Coefficients are arbitrary-precision integers. Quantum coefficients are
//! counts of rational curves, so a negative accumulated value is a hard error
//! rather than a representable state.

use crate::partition::{BoxContext, Partition, PartitionError};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SchubertError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("negative coefficient {coeff} at (nu={nu}, d={degree}) in {ctx}: rim-hook bookkeeping bug")]
    NegativeCoefficient {
        ctx: BoxContext,
        nu: Partition,
        degree: u64,
        coeff: BigInt,
    },
}

/// Littlewood-Richardson coefficient c^nu_{lambda,mu}.
///
/// Counts semistandard fillings of the skew shape nu/lambda with content mu
/// (entries 1..len(mu), row-weakly increasing, column-strictly increasing)
/// whose right-to-left, top-to-bottom reading word is a lattice word. Returns
/// zero whenever the weights or containment make the count empty; the inputs
/// need not fit any box.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> BigInt {
    if nu.weight() != lambda.weight() + mu.weight() || !lambda.contained_in(nu) {
        return BigInt::zero();
    }
    if mu.is_empty() {
        // nu/lambda has no cells exactly when nu == lambda.
        return if nu == lambda { BigInt::one() } else { BigInt::zero() };
    }

    // Cells of nu/lambda in reading order: rows top to bottom, each row right
    // to left. Filling in this order keeps every constraint incremental:
    // the lattice property is a prefix condition on the reading word, the
    // right neighbor and the cell above are already filled.
    struct Cell {
        right: Option<usize>, // index of the cell at (row, col+1), if in the skew shape
        above: Option<usize>, // index of the cell at (row-1, col), if in the skew shape
    }
    let mut cells: Vec<Cell> = Vec::with_capacity(mu.weight() as usize);
    let mut index_of = std::collections::HashMap::new();
    for row in 0..nu.len() {
        let lo = lambda.part(row) as usize;
        let hi = nu.part(row) as usize;
        for col in (lo..hi).rev() {
            let right = index_of.get(&(row, col + 1)).copied();
            let above = if row > 0 { index_of.get(&(row - 1, col)).copied() } else { None };
            index_of.insert((row, col), cells.len());
            cells.push(Cell { above, right });
        }
    }
    debug_assert_eq!(cells.len() as u64, mu.weight());

    let m = mu.len();
    let mut counts = vec![0u32; m];
    let mut values = vec![usize::MAX; cells.len()];
    let mut total = BigInt::zero();

    fn fill(
        idx: usize,
        cells: &[Cell],
        mu: &Partition,
        counts: &mut [u32],
        values: &mut [usize],
        total: &mut BigInt,
    ) {
        if idx == cells.len() {
            *total += 1;
            return;
        }
        let cell = &cells[idx];
        let max_by_row = cell.right.map_or(counts.len() - 1, |r| values[r]);
        let min_by_col = cell.above.map_or(0, |a| values[a] + 1);
        for entry in min_by_col..=max_by_row {
            if counts[entry] >= mu.part(entry) {
                continue; // content exhausted
            }
            if entry > 0 && counts[entry] >= counts[entry - 1] {
                continue; // would break the lattice prefix condition
            }
            counts[entry] += 1;
            values[idx] = entry;
            fill(idx + 1, cells, mu, counts, values, total);
            counts[entry] -= 1;
        }
    }
    fill(0, &cells, mu, &mut counts, &mut values, &mut total);
    total
}

/// Removes rim hooks of size n from `gamma` (at most k rows) until the shape
/// fits the k x (n-k) box, working on beta-numbers beta_i = gamma_i + k-1-i.
///
/// A hook removal subtracts n from one beta-number; it is valid while the
/// numbers stay distinct and nonnegative, and the removed hook's height is one
/// plus the count of beta-numbers it passes. The full reduction exists exactly
/// when the residues mod n are pairwise distinct; the accumulated sign is the
/// sorting-permutation sign of those residues. Returns (nu, hooks removed,
/// sign), or None when the reduction dies.
fn rim_hook_reduce(gamma: &Partition, k: usize, n: u32) -> Option<(Partition, u64, i8)> {
    debug_assert!(gamma.len() <= k);
    let n64 = u64::from(n);
    let beta: Vec<u64> = (0..k)
        .map(|i| u64::from(gamma.part(i)) + (k - 1 - i) as u64)
        .collect();
    let residues: Vec<u64> = beta.iter().map(|b| b % n64).collect();
    let mut seen = vec![false; n as usize];
    for &r in &residues {
        if seen[r as usize] {
            return None;
        }
        seen[r as usize] = true;
    }
    let hooks: u64 = beta.iter().zip(&residues).map(|(b, r)| (b - r) / n64).sum();
    let mut inversions = 0u32;
    for i in 0..k {
        for j in (i + 1)..k {
            if residues[i] < residues[j] {
                inversions += 1;
            }
        }
    }
    let mut sorted = residues;
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let nu: Vec<u32> = sorted
        .iter()
        .enumerate()
        .map(|(i, &r)| (r - (k - 1 - i) as u64) as u32)
        .collect();
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    Some((Partition::new(nu).expect("sorted residues give a partition"), hooks, sign))
}

/// Partitions of `total` with at most `rows` rows and first part at most
/// `max_first`.
fn partitions_bounded(total: u64, rows: usize, max_first: u64) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = Vec::new();
    fn rec(remaining: u64, rows_left: usize, max_part: u64, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition::new(cur.clone()).expect("descending by construction"));
            return;
        }
        if rows_left == 0 || max_part == 0 || max_part * (rows_left as u64) < remaining {
            return;
        }
        let hi = max_part.min(remaining);
        for p in (1..=hi).rev() {
            cur.push(p as u32);
            rec(remaining - p, rows_left - 1, p, cur, out);
            cur.pop();
        }
    }
    rec(total, rows, max_first, &mut cur, &mut out);
    out
}

/// Expansion of sigma_lambda * sigma_mu in QH*(Gr(k,n)): a finite sum of
/// q^degree sigma_partition terms with nonnegative integer coefficients.
///
/// Terms iterate sorted by (degree, partition lex), which is also the
/// serialized order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumProduct {
    ctx: BoxContext,
    terms: BTreeMap<(u64, Partition), BigInt>,
}

impl QuantumProduct {
    pub fn ctx(&self) -> BoxContext {
        self.ctx
    }

    /// Coefficient of q^degree sigma_nu (zero if absent).
    pub fn coefficient(&self, nu: &Partition, degree: u64) -> BigInt {
        self.terms
            .get(&(degree, nu.clone()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Partition, &BigInt)> {
        self.terms.iter().map(|((d, p), c)| (*d, p, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest quantum degree present (zero for the empty product).
    pub fn max_degree(&self) -> u64 {
        self.terms.keys().map(|(d, _)| *d).max().unwrap_or(0)
    }

    /// Multiplies this expansion by one more class, extending q-linearly.
    pub fn multiply_class(&self, c: &Partition) -> Result<QuantumProduct, SchubertError> {
        let mut acc: BTreeMap<(u64, Partition), BigInt> = BTreeMap::new();
        for ((d, nu), coeff) in &self.terms {
            let factor = quantum_product(nu, c, self.ctx)?;
            for ((d2, rho), c2) in &factor.terms {
                *acc.entry((d + d2, rho.clone())).or_insert_with(BigInt::zero) += coeff * c2;
            }
        }
        Ok(QuantumProduct { ctx: self.ctx, terms: acc })
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    partition: Partition,
    degree: u64,
    coeff: serde_json::Number,
}

impl Serialize for QuantumProduct {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for ((degree, partition), coeff) in &self.terms {
            let coeff = serde_json::Number::from_string_unchecked(coeff.to_string());
            seq.serialize_element(&TermRecord {
                partition: partition.clone(),
                degree: *degree,
                coeff,
            })?;
        }
        seq.end()
    }
}

/// sigma_lambda * sigma_mu in QH*(Gr(k,n)).
///
/// Every shape gamma of weight |lambda|+|mu| with at most k rows contributes
/// its classical coefficient times the sign of its rim-hook reduction; each
/// removed hook also carries a factor (-1)^(k-1) from eliminating the degree-n
/// generator in favor of q. Shapes whose reduction dies contribute nothing.
pub fn quantum_product(
    lambda: &Partition,
    mu: &Partition,
    ctx: BoxContext,
) -> Result<QuantumProduct, SchubertError> {
    for p in [lambda, mu] {
        if !ctx.admits(p) {
            return Err(PartitionError::DoesNotFit { partition: p.clone(), k: ctx.k, n: ctx.n }.into());
        }
    }
    let k = ctx.k as usize;
    let total = lambda.weight() + mu.weight();
    let max_first = u64::from(lambda.part(0)) + u64::from(mu.part(0));
    let mut acc: BTreeMap<(u64, Partition), BigInt> = BTreeMap::new();
    for gamma in partitions_bounded(total, k, max_first) {
        let c = lr_coefficient(lambda, mu, &gamma);
        if c.is_zero() {
            continue;
        }
        let Some((nu, d, hook_sign)) = rim_hook_reduce(&gamma, k, ctx.n) else {
            continue;
        };
        let q_sign: i8 = if (ctx.k as u64 - 1) * d % 2 == 0 { 1 } else { -1 };
        let signed = c * BigInt::from(hook_sign as i64 * q_sign as i64);
        let entry = acc.entry((d, nu)).or_insert_with(BigInt::zero);
        *entry += signed;
    }
    acc.retain(|_, v| !v.is_zero());
    for ((d, nu), coeff) in &acc {
        if coeff.sign() == num_bigint::Sign::Minus {
            return Err(SchubertError::NegativeCoefficient {
                ctx,
                nu: nu.clone(),
                degree: *d,
                coeff: coeff.clone(),
            });
        }
    }
    Ok(QuantumProduct { ctx, terms: acc })
}

/// Genus-zero three-point Gromov-Witten invariant <sigma_a, sigma_b,
/// sigma_c>_d of Gr(k,n).
///
/// Zero unless |a|+|b|+|c| = k(n-k) + d*n; otherwise the coefficient of
/// (complement(c), d) in sigma_a * sigma_b. Symmetric in its three classes.
pub fn gw_invariant_3pt(
    a: &Partition,
    b: &Partition,
    c: &Partition,
    d: u64,
    ctx: BoxContext,
) -> Result<BigInt, SchubertError> {
    for p in [a, b, c] {
        if !ctx.admits(p) {
            return Err(PartitionError::DoesNotFit { partition: p.clone(), k: ctx.k, n: ctx.n }.into());
        }
    }
    if a.weight() + b.weight() + c.weight() != ctx.dim() + d * u64::from(ctx.n) {
        return Ok(BigInt::zero());
    }
    let dual = ctx.complement(c)?;
    Ok(quantum_product(a, b, ctx)?.coefficient(&dual, d))
}
