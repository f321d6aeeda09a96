//! Cross-checks the vertex-capacity formula against a brute-force simplex
//! containment search, and the packing bound against lattice symmetries it
//! must respect.

mod common;

use common::{capacity_oracle, toric_corpus};
use gwidth::{toric_lower_bound, vertex_capacity, DelzantPolytope, Facet};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn corpus_capacities_match_containment_oracle() {
    for (name, p, expected) in toric_corpus() {
        let report = p.validate().unwrap();
        assert!(report.is_delzant, "{name} should be Delzant");
        let mut best: Option<BigRational> = None;
        for vd in &report.vertices {
            let cap = vertex_capacity(&p, vd).unwrap();
            let oracle = capacity_oracle(&p, vd);
            assert_eq!(cap, oracle, "{name}: capacity mismatch at {:?}", vd.vertex);
            if best.as_ref().map_or(true, |b| cap > *b) {
                best = Some(cap);
            }
        }
        let bound = toric_lower_bound(&p).unwrap();
        assert_eq!(bound, best.unwrap(), "{name}: bound is the best capacity");
        assert_eq!(bound, expected, "{name}: frozen bound");
    }
}

/// Random unimodular matrix as a product of elementary integer operations.
fn random_unimodular(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; d]; d];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    for _ in 0..8 {
        match rng.gen_range(0..3) {
            0 if d > 1 => {
                let i = rng.gen_range(0..d);
                let mut j = rng.gen_range(0..d);
                while j == i {
                    j = rng.gen_range(0..d);
                }
                let lambda: i64 = rng.gen_range(-2..=2);
                for c in 0..d {
                    m[i][c] += lambda * m[j][c];
                }
            }
            1 if d > 1 => {
                let i = rng.gen_range(0..d);
                let mut j = rng.gen_range(0..d);
                while j == i {
                    j = rng.gen_range(0..d);
                }
                m.swap(i, j);
            }
            _ => {
                let i = rng.gen_range(0..d);
                for c in 0..d {
                    m[i][c] = -m[i][c];
                }
            }
        }
    }
    m
}

/// Applies the affine-lattice change x -> A^{-T} x + shift on points, which
/// acts on a facet presentation by normal -> A normal and
/// offset -> offset + <A normal, shift>.
fn transform(p: &DelzantPolytope, a: &[Vec<i64>], shift: &[i64]) -> DelzantPolytope {
    let d = p.dim();
    let facets: Vec<Facet> = p
        .facets()
        .iter()
        .map(|f| {
            let normal: Vec<BigInt> = (0..d)
                .map(|r| {
                    (0..d)
                        .map(|c| BigInt::from(a[r][c]) * &f.normal[c])
                        .sum::<BigInt>()
                })
                .collect();
            let bump: BigInt = normal
                .iter()
                .zip(shift)
                .map(|(n, &s)| n * BigInt::from(s))
                .sum();
            let offset = &f.offset + BigRational::from_integer(bump);
            Facet { normal, offset }
        })
        .collect();
    DelzantPolytope::new(d, facets).unwrap()
}

fn sorted_capacities(p: &DelzantPolytope) -> Vec<BigRational> {
    let report = p.validate().unwrap();
    assert!(report.is_delzant);
    let mut caps: Vec<BigRational> = report
        .vertices
        .iter()
        .map(|vd| vertex_capacity(p, vd).unwrap())
        .collect();
    caps.sort();
    caps
}

#[test]
fn bound_is_invariant_under_lattice_transforms() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7031_7065);
    for (name, p, _) in toric_corpus() {
        let caps = sorted_capacities(&p);
        let bound = toric_lower_bound(&p).unwrap();
        for _ in 0..5 {
            let a = random_unimodular(&mut rng, p.dim());
            let shift: Vec<i64> = (0..p.dim()).map(|_| rng.gen_range(-3..=3)).collect();
            let q = transform(&p, &a, &shift);
            assert_eq!(
                sorted_capacities(&q),
                caps,
                "{name}: capacities are lattice invariants"
            );
            assert_eq!(toric_lower_bound(&q).unwrap(), bound, "{name}: bound");
        }
    }
}

#[test]
fn bound_scales_linearly_with_dilation() {
    for (name, p, _) in toric_corpus() {
        let bound = toric_lower_bound(&p).unwrap();
        for (num, den) in [(1i64, 2i64), (3, 1), (7, 5)] {
            let t = BigRational::new(BigInt::from(num), BigInt::from(den));
            let facets: Vec<Facet> = p
                .facets()
                .iter()
                .map(|f| Facet {
                    normal: f.normal.clone(),
                    offset: &f.offset * &t,
                })
                .collect();
            let q = DelzantPolytope::new(p.dim(), facets).unwrap();
            assert_eq!(
                toric_lower_bound(&q).unwrap(),
                &bound * &t,
                "{name} scaled by {num}/{den}"
            );
        }
    }
}
