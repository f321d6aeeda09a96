//! Shared test oracles. Everything here recomputes library quantities along
//! an independent route: border strips are removed cell by cell instead of on
//! beta-numbers, and classical products are expanded through Schur-polynomial
//! monomials instead of Littlewood-Richardson fillings.
#![allow(dead_code)]

use gwidth::{BoxContext, Partition};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap, HashSet};

/// Cells of the rim of `gamma` (cells whose southeast diagonal neighbor is
/// outside), ordered by content j - i descending: the path from the top-right
/// corner to the bottom-left corner.
fn rim_path(gamma: &Partition) -> Vec<(usize, usize)> {
    let mut cells = Vec::new();
    for i in 0..gamma.len() {
        let row = gamma.part(i) as usize;
        let below = gamma.part(i + 1) as usize;
        let lo = below.saturating_sub(1);
        for j in lo..row {
            cells.push((i, j));
        }
    }
    cells.sort_by_key(|&(i, j)| std::cmp::Reverse(j as i64 - i as i64));
    cells
}

/// Removes the given cells from `gamma` if doing so leaves a left-justified
/// partition shape; the cells must be a column suffix of each touched row.
fn remove_cells(gamma: &Partition, cells: &[(usize, usize)]) -> Option<Partition> {
    let mut removed_per_row: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(i, j) in cells {
        removed_per_row.entry(i).or_default().push(j);
    }
    let mut parts = Vec::new();
    for i in 0..gamma.len() {
        let row = gamma.part(i) as usize;
        let new_len = match removed_per_row.get(&i) {
            None => row,
            Some(cols) => {
                let r = cols.len();
                let expected: HashSet<usize> = (row - r..row).collect();
                let actual: HashSet<usize> = cols.iter().copied().collect();
                if expected != actual {
                    return None;
                }
                row - r
            }
        };
        parts.push(new_len as u32);
    }
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return None;
    }
    Partition::new(parts).ok()
}

/// All single border-strip removals of size n: (smaller shape, strip height).
fn strip_removals(gamma: &Partition, n: usize) -> Vec<(Partition, usize)> {
    let path = rim_path(gamma);
    let mut out = Vec::new();
    if path.len() < n {
        return out;
    }
    for start in 0..=path.len() - n {
        let run = &path[start..start + n];
        if let Some(smaller) = remove_cells(gamma, run) {
            let rows: HashSet<usize> = run.iter().map(|&(i, _)| i).collect();
            out.push((smaller, rows.len()));
        }
    }
    out
}

/// Rim-hook reduction by direct cell-level strip removal, exploring every
/// removal order and asserting they all terminate at the same result.
///
/// Returns (reduced shape, strips removed, product of (-1)^(height-1)), or
/// None when the terminal shape does not fit the k x (n-k) box.
pub fn naive_strip_reduce(
    gamma: &Partition,
    ctx: BoxContext,
) -> Option<(Partition, u64, i8)> {
    type Outcome = Option<(Partition, u64, i8)>;
    fn go(
        shape: &Partition,
        ctx: BoxContext,
        memo: &mut HashMap<Partition, Outcome>,
    ) -> Outcome {
        if let Some(r) = memo.get(shape) {
            return r.clone();
        }
        let removals = strip_removals(shape, ctx.n as usize);
        let result: Outcome = if removals.is_empty() {
            if ctx.admits(shape) {
                Some((shape.clone(), 0, 1))
            } else {
                None
            }
        } else {
            let mut agreed: Option<Outcome> = None;
            for (smaller, height) in removals {
                let sub = go(&smaller, ctx, memo);
                let lifted = sub.map(|(nu, d, s)| {
                    let strip_sign: i8 = if (height - 1) % 2 == 0 { 1 } else { -1 };
                    (nu, d + 1, s * strip_sign)
                });
                match &agreed {
                    None => agreed = Some(lifted),
                    Some(prev) => assert_eq!(
                        *prev, lifted,
                        "strip removal order changed the outcome at {shape} in {ctx}"
                    ),
                }
            }
            agreed.unwrap()
        };
        memo.insert(shape.clone(), result.clone());
        result
    }
    assert!(gamma.len() <= ctx.k as usize, "shape has too many rows for {ctx}");
    go(gamma, ctx, &mut HashMap::new())
}

/// Monomials of the Schur polynomial s_shape(x_1..x_nvars): exponent vector
/// to coefficient, by enumerating semistandard tableaux.
pub fn schur_monomials(shape: &Partition, nvars: usize) -> BTreeMap<Vec<u32>, BigInt> {
    let mut out: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    if shape.len() > nvars {
        return out;
    }
    // Cells row-major; the left neighbor and the cell above are already set.
    let mut rows: Vec<Vec<usize>> = (0..shape.len())
        .map(|i| vec![0usize; shape.part(i) as usize])
        .collect();
    fn fill(
        i: usize,
        j: usize,
        shape: &Partition,
        nvars: usize,
        rows: &mut Vec<Vec<usize>>,
        exp: &mut Vec<u32>,
        out: &mut BTreeMap<Vec<u32>, BigInt>,
    ) {
        if i == shape.len() {
            *out.entry(exp.clone()).or_insert_with(BigInt::zero) += 1;
            return;
        }
        let (ni, nj) = if j + 1 < shape.part(i) as usize { (i, j + 1) } else { (i + 1, 0) };
        let lo = {
            let col_min = if i > 0 && j < shape.part(i - 1) as usize {
                rows[i - 1][j] + 1
            } else {
                0
            };
            let row_min = if j > 0 { rows[i][j - 1] } else { 0 };
            col_min.max(row_min)
        };
        for v in lo..nvars {
            rows[i][j] = v;
            exp[v] += 1;
            fill(ni, nj, shape, nvars, rows, exp, out);
            exp[v] -= 1;
        }
    }
    let mut exp = vec![0u32; nvars];
    fill(0, 0, shape, nvars, &mut rows, &mut exp, &mut out);
    out
}

/// Expands s_lambda * s_mu in `nvars` variables and extracts Schur
/// coefficients by repeatedly peeling the lex-largest monomial. Only shapes
/// with at most `nvars` rows survive, which is exactly the truncation the
/// quantum product wants when nvars = k.
pub fn classical_product_oracle(
    lambda: &Partition,
    mu: &Partition,
    nvars: usize,
) -> BTreeMap<Partition, BigInt> {
    let a = schur_monomials(lambda, nvars);
    let b = schur_monomials(mu, nvars);
    let mut prod: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    for (ea, ca) in &a {
        for (eb, cb) in &b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *prod.entry(e).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    let mut out = BTreeMap::new();
    loop {
        let Some((exp, coeff)) = prod
            .iter()
            .rev()
            .find(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e.clone(), c.clone()))
        else {
            break;
        };
        assert!(
            exp.windows(2).all(|w| w[0] >= w[1]),
            "leading monomial {exp:?} is not dominant"
        );
        assert!(coeff > BigInt::zero(), "negative Schur coefficient {coeff}");
        let gamma = Partition::new(exp).expect("checked weakly decreasing");
        for (e, c) in schur_monomials(&gamma, nvars) {
            *prod.entry(e).or_insert_with(BigInt::zero) -= &coeff * c;
        }
        out.insert(gamma, coeff);
    }
    out
}

/// Quantum product recomputed end to end through the oracles: classical
/// expansion by Schur monomials, reduction by cell-level strip removal, the
/// same (-1)^(k-1) twist per strip.
pub fn quantum_product_oracle(
    lambda: &Partition,
    mu: &Partition,
    ctx: BoxContext,
) -> BTreeMap<(u64, Partition), BigInt> {
    let mut acc: BTreeMap<(u64, Partition), BigInt> = BTreeMap::new();
    for (gamma, c) in classical_product_oracle(lambda, mu, ctx.k as usize) {
        let Some((nu, d, strip_sign)) = naive_strip_reduce(&gamma, ctx) else {
            continue;
        };
        let twist: i8 = if u64::from(ctx.k - 1) * d % 2 == 0 { 1 } else { -1 };
        let signed = c * BigInt::from(i64::from(strip_sign) * i64::from(twist));
        let entry = acc.entry((d, nu)).or_insert_with(BigInt::zero);
        *entry += signed;
    }
    acc.retain(|_, v| !v.is_zero());
    acc
}

/// One-sided comparison helper: library product as the oracle's map shape.
pub fn product_as_map(p: &gwidth::QuantumProduct) -> BTreeMap<(u64, Partition), BigInt> {
    p.terms()
        .map(|(d, nu, c)| ((d, nu.clone()), c.clone()))
        .collect()
}

use gwidth::{DelzantPolytope, Facet, VertexData};
use num_rational::BigRational;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Valid Delzant polytopes in dimensions 1 to 3 with known packing bounds.
pub fn toric_corpus() -> Vec<(&'static str, DelzantPolytope, BigRational)> {
    let p = |dim: usize, facets: Vec<Facet>| DelzantPolytope::new(dim, facets).unwrap();
    vec![
        (
            "interval [0,1]",
            p(1, vec![Facet::new(&[1], 0), Facet::new(&[-1], -1)]),
            rat(1, 1),
        ),
        (
            "unit square",
            p(
                2,
                vec![
                    Facet::new(&[1, 0], 0),
                    Facet::new(&[0, 1], 0),
                    Facet::new(&[-1, 0], -1),
                    Facet::new(&[0, -1], -1),
                ],
            ),
            rat(1, 1),
        ),
        (
            "rectangle [0,2]x[0,3]",
            p(
                2,
                vec![
                    Facet::new(&[1, 0], 0),
                    Facet::new(&[0, 1], 0),
                    Facet::new(&[-1, 0], -2),
                    Facet::new(&[0, -1], -3),
                ],
            ),
            rat(2, 1),
        ),
        (
            "unit simplex dim 2",
            p(
                2,
                vec![
                    Facet::new(&[1, 0], 0),
                    Facet::new(&[0, 1], 0),
                    Facet::new(&[-1, -1], -1),
                ],
            ),
            rat(1, 1),
        ),
        (
            "simplex of size 2",
            p(
                2,
                vec![
                    Facet::new(&[1, 0], 0),
                    Facet::new(&[0, 1], 0),
                    Facet::new(&[-1, -1], -2),
                ],
            ),
            rat(2, 1),
        ),
        (
            "trapezoid x1<=1, x1+x2<=3",
            p(
                2,
                vec![
                    Facet::new(&[1, 0], 0),
                    Facet::new(&[0, 1], 0),
                    Facet::new(&[-1, 0], -1),
                    Facet::new(&[-1, -1], -3),
                ],
            ),
            rat(1, 1),
        ),
        (
            "ruled trapezoid y<=1, x+2y<=3",
            p(
                2,
                vec![
                    Facet::new(&[1, 0], 0),
                    Facet::new(&[0, 1], 0),
                    Facet::new(&[0, -1], -1),
                    Facet::new(&[-1, -2], -3),
                ],
            ),
            rat(1, 1),
        ),
        (
            "hexagon",
            p(
                2,
                vec![
                    Facet::new(&[1, 0], 0),
                    Facet::new(&[0, 1], 0),
                    Facet::new(&[-1, 0], -2),
                    Facet::new(&[0, -1], -2),
                    Facet::new(&[-1, -1], -3),
                    Facet::new(&[1, 1], 1),
                ],
            ),
            rat(1, 1),
        ),
        (
            "unit cube",
            p(
                3,
                vec![
                    Facet::new(&[1, 0, 0], 0),
                    Facet::new(&[0, 1, 0], 0),
                    Facet::new(&[0, 0, 1], 0),
                    Facet::new(&[-1, 0, 0], -1),
                    Facet::new(&[0, -1, 0], -1),
                    Facet::new(&[0, 0, -1], -1),
                ],
            ),
            rat(1, 1),
        ),
        (
            "half cube",
            p(
                3,
                vec![
                    Facet::new(&[1, 0, 0], 0),
                    Facet::new(&[0, 1, 0], 0),
                    Facet::new(&[0, 0, 1], 0),
                    Facet::with_offset(&[-1, 0, 0], rat(-1, 2)),
                    Facet::with_offset(&[0, -1, 0], rat(-1, 2)),
                    Facet::with_offset(&[0, 0, -1], rat(-1, 2)),
                ],
            ),
            rat(1, 2),
        ),
        (
            "unit simplex dim 3",
            p(
                3,
                vec![
                    Facet::new(&[1, 0, 0], 0),
                    Facet::new(&[0, 1, 0], 0),
                    Facet::new(&[0, 0, 1], 0),
                    Facet::new(&[-1, -1, -1], -1),
                ],
            ),
            rat(1, 1),
        ),
        (
            "prism simplex x interval",
            p(
                3,
                vec![
                    Facet::new(&[1, 0, 0], 0),
                    Facet::new(&[0, 1, 0], 0),
                    Facet::new(&[0, 0, 1], 0),
                    Facet::new(&[-1, -1, 0], -2),
                    Facet::new(&[0, 0, -1], -1),
                ],
            ),
            rat(1, 1),
        ),
    ]
}

/// Whether the closed simplex spanned from `v.vertex` by its edge directions
/// at size `a` sits inside the polytope. By convexity it does exactly when
/// all of its corners do.
pub fn simplex_fits(p: &DelzantPolytope, v: &VertexData, a: &BigRational) -> bool {
    let mut corners: Vec<Vec<BigRational>> = vec![v.vertex.clone()];
    for w in &v.weights {
        let corner: Vec<BigRational> = v
            .vertex
            .iter()
            .zip(w)
            .map(|(x, e)| x + a * BigRational::from_integer(e.clone()))
            .collect();
        corners.push(corner);
    }
    corners.iter().all(|c| p.contains(c))
}

/// Independent route to the vertex capacity: collect every simplex size at
/// which some facet constraint becomes tight at a corner, keep the largest
/// one whose closed simplex still fits, and confirm that fitting fails just
/// past it.
pub fn capacity_oracle(p: &DelzantPolytope, v: &VertexData) -> BigRational {
    let mut candidates: Vec<BigRational> = Vec::new();
    for f in p.facets() {
        let value: BigRational = f
            .normal
            .iter()
            .zip(&v.vertex)
            .map(|(n, x)| BigRational::from_integer(n.clone()) * x)
            .fold(BigRational::zero(), |acc, t| acc + t);
        let slack = value - &f.offset;
        if slack.is_zero() {
            continue;
        }
        for w in &v.weights {
            let s: BigInt = f.normal.iter().zip(w).map(|(a, b)| a * b).sum();
            if s < BigInt::zero() {
                candidates.push(&slack / BigRational::from_integer(-s));
            }
        }
    }
    candidates.sort();
    let best = candidates
        .iter()
        .rev()
        .find(|a| simplex_fits(p, v, a))
        .expect("a bounded polytope caps the simplex")
        .clone();
    let past = &best * rat(1001, 1000);
    assert!(
        !simplex_fits(p, v, &past),
        "capacity candidate is not maximal"
    );
    best
}

use gwidth::ChartForm;
use nalgebra::DVector;

/// The rotation-equivariant area-preserving map for a radial form, computed
/// the slow way: the density is read off the form's coefficient matrix and
/// integrated by Simpson's rule, never touching the moment map or any closed
/// formula the engine uses.
pub fn radial_area_oracle(cf: &ChartForm, x: &DVector<f64>) -> DVector<f64> {
    assert_eq!(cf.dim(), 2, "oracle only covers one complex dimension");
    let s = x.norm_squared();
    if s == 0.0 {
        return x.clone();
    }
    let density = |u: f64| cf.omega(&[u.sqrt(), 0.0])[(0, 1)];
    // Keep the panel width bounded so decaying densities stay resolved far
    // from the origin.
    let intervals = 1024.max((s * 512.0).ceil() as usize);
    let area: f64 = gwidth::numeric::simpson(density, 0.0, s, intervals);
    x * (area.sqrt() / s.sqrt())
}
