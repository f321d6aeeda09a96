//! Integer partitions and the `k x (n-k)` bounding box.
//!
//! A [`Partition`] is a weakly decreasing list of positive integers; trailing
//! zeros are trimmed on construction, so the empty partition is `[]`. Schubert
//! classes of Gr(k,n) are indexed by partitions fitting the k x (n-k) box
//! described by a [`BoxContext`]: at most `k` rows, each part at most `n-k`.
//!
//! Orderings: `Partition` compares lexicographically on its part list
//! (`[] < [1] < [1,1] < [2]`), which is the order used when serializing
//! product expansions.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("parts must be weakly decreasing, got {0:?}")]
    NotWeaklyDecreasing(Vec<u32>),
    #[error("partition {partition} does not fit the {k} x {width} box", width = n - k)]
    DoesNotFit { partition: Partition, k: u32, n: u32 },
    #[error("box context requires 0 < k < n, got k={k}, n={n}")]
    InvalidContext { k: u32, n: u32 },
    #[error("cannot parse {input:?} as a partition: {reason}")]
    Parse { input: String, reason: String },
}

/// A weakly decreasing sequence of positive integers (trailing zeros trimmed).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Builds a partition, trimming trailing zeros. Errors unless the parts
    /// are weakly decreasing.
    pub fn new(parts: impl Into<Vec<u32>>) -> Result<Self, PartitionError> {
        let mut parts = parts.into();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError::NotWeaklyDecreasing(parts));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the parts, i.e. the number of boxes |lambda|.
    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&p| u64::from(p)).sum()
    }

    /// The i-th part (0-based), zero beyond the last row.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Containment of Young diagrams: every row of `self` is at most the
    /// corresponding row of `other`.
    pub fn contained_in(&self, other: &Partition) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &p)| p <= other.part(i))
    }

    /// Conjugate (transpose) diagram.
    pub fn conjugate(&self) -> Partition {
        let cols = self.part(0) as usize;
        let parts = (0..cols)
            .map(|j| self.0.iter().filter(|&&p| p as usize > j).count() as u32)
            .collect();
        Partition(parts)
    }

    /// Parses a comma-separated part list; the empty string is the empty
    /// partition.
    pub fn parse(input: &str) -> Result<Self, PartitionError> {
        let trimmed = input.trim();
        if trimmed.is_empty() {
            return Ok(Partition::empty());
        }
        let parts: Result<Vec<u32>, _> = trimmed
            .split(',')
            .map(|tok| tok.trim().parse::<u32>())
            .collect();
        let parts = parts.map_err(|e| PartitionError::Parse {
            input: input.to_string(),
            reason: e.to_string(),
        })?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(deserializer)?;
        Partition::new(parts).map_err(D::Error::custom)
    }
}

/// The ambient Grassmannian Gr(k,n): Schubert classes live in the k x (n-k)
/// box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BoxContext {
    pub k: u32,
    pub n: u32,
}

impl<'de> Deserialize<'de> for BoxContext {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            k: u32,
            n: u32,
        }
        let raw = Raw::deserialize(deserializer)?;
        BoxContext::new(raw.k, raw.n).map_err(D::Error::custom)
    }
}

impl BoxContext {
    pub fn new(k: u32, n: u32) -> Result<Self, PartitionError> {
        if k == 0 || k >= n {
            return Err(PartitionError::InvalidContext { k, n });
        }
        Ok(BoxContext { k, n })
    }

    /// Width of the box, n - k.
    pub fn width(&self) -> u32 {
        self.n - self.k
    }

    /// Complex dimension of Gr(k,n), i.e. the box area k(n-k).
    pub fn dim(&self) -> u64 {
        u64::from(self.k) * u64::from(self.width())
    }

    /// Whether `p` fits the k x (n-k) box.
    pub fn admits(&self, p: &Partition) -> bool {
        p.len() <= self.k as usize && p.part(0) <= self.width()
    }

    fn require(&self, p: &Partition) -> Result<(), PartitionError> {
        if self.admits(p) {
            Ok(())
        } else {
            Err(PartitionError::DoesNotFit {
                partition: p.clone(),
                k: self.k,
                n: self.n,
            })
        }
    }

    /// Poincaré-dual partition inside the box: row i of the complement is
    /// (n-k) minus row (k+1-i) of the input (1-based), i.e. the box minus the
    /// 180-degree rotation of the diagram.
    pub fn complement(&self, p: &Partition) -> Result<Partition, PartitionError> {
        self.require(p)?;
        let k = self.k as usize;
        let w = self.width();
        let parts: Vec<u32> = (0..k).map(|i| w - p.part(k - 1 - i)).collect();
        Partition::new(parts)
    }

    /// All partitions fitting the box, in lexicographic order.
    pub fn all_partitions(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut stack = vec![Vec::new()];
        while let Some(cur) = stack.pop() {
            out.push(Partition(cur.clone()));
            if cur.len() < self.k as usize {
                let max = cur.last().copied().unwrap_or(self.width());
                // Push descending so the stack pops ascending first parts.
                for p in (1..=max).rev() {
                    let mut next = cur.clone();
                    next.push(p);
                    stack.push(next);
                }
            }
        }
        out.sort();
        out
    }

    /// The full box (n-k)^k, the class of a point.
    pub fn point_class(&self) -> Partition {
        Partition(vec![self.width(); self.k as usize])
    }

    /// The column 1^k.
    pub fn column_class(&self) -> Partition {
        Partition(vec![1; self.k as usize])
    }

    /// The row (n-k).
    pub fn row_class(&self) -> Partition {
        Partition(vec![self.width()])
    }
}

impl fmt::Display for BoxContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gr({},{})", self.k, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn construction_trims_and_validates() {
        assert_eq!(p(&[2, 1, 0, 0]).parts(), &[2, 1]);
        assert_eq!(Partition::empty().weight(), 0);
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn parse_roundtrip() {
        assert_eq!(Partition::parse("2,1").unwrap(), p(&[2, 1]));
        assert_eq!(Partition::parse("").unwrap(), Partition::empty());
        assert_eq!(Partition::parse(" 3 , 3 ,1 ").unwrap(), p(&[3, 3, 1]));
        assert!(Partition::parse("1,2").is_err());
        assert!(Partition::parse("a").is_err());
    }

    #[test]
    fn lexicographic_order() {
        let mut v = vec![p(&[2]), p(&[1, 1]), p(&[1]), Partition::empty()];
        v.sort();
        assert_eq!(v, vec![Partition::empty(), p(&[1]), p(&[1, 1]), p(&[2])]);
    }

    #[test]
    fn conjugate_involution() {
        let q = p(&[4, 2, 1]);
        assert_eq!(q.conjugate().parts(), &[3, 2, 1, 1]);
        assert_eq!(q.conjugate().conjugate(), q);
    }

    #[test]
    fn complement_examples() {
        let gr24 = BoxContext::new(2, 4).unwrap();
        assert_eq!(gr24.complement(&p(&[2, 1])).unwrap(), p(&[1]));
        assert_eq!(gr24.complement(&Partition::empty()).unwrap(), p(&[2, 2]));
        let gr37 = BoxContext::new(3, 7).unwrap();
        assert_eq!(gr37.complement(&p(&[4, 2, 1])).unwrap(), p(&[3, 2]));
        assert!(gr24.complement(&p(&[3])).is_err());
    }

    #[test]
    fn complement_is_an_involution() {
        let ctx = BoxContext::new(3, 6).unwrap();
        for q in ctx.all_partitions() {
            let c = ctx.complement(&q).unwrap();
            assert!(ctx.admits(&c));
            assert_eq!(ctx.complement(&c).unwrap(), q);
            assert_eq!(q.weight() + c.weight(), ctx.dim());
        }
    }

    #[test]
    fn box_enumeration_counts() {
        // Partitions in a k x w box: binomial(k + w, k).
        assert_eq!(BoxContext::new(2, 4).unwrap().all_partitions().len(), 6);
        assert_eq!(BoxContext::new(2, 5).unwrap().all_partitions().len(), 10);
        assert_eq!(BoxContext::new(3, 6).unwrap().all_partitions().len(), 20);
    }

    #[test]
    fn serde_is_plain_array() {
        let q = p(&[2, 1]);
        assert_eq!(serde_json::to_string(&q).unwrap(), "[2,1]");
        let back: Partition = serde_json::from_str("[2,1]").unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
    }

    #[test]
    fn context_validation() {
        assert!(BoxContext::new(0, 4).is_err());
        assert!(BoxContext::new(4, 4).is_err());
        assert_eq!(BoxContext::new(2, 4).unwrap().dim(), 4);
    }
}
