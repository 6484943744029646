//! Exact rational interval partitions of `[0, 1]`.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: i128 = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let den: i128 = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if den == 0 {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| *r.numer() as f64 / *r.denom() as f64)
}

/// A partition of `[0, 1]` into consecutive intervals with positive
/// rational lengths summing to exactly one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    lengths: Vec<Rational>,
}

/// Common refinement of two interval partitions.
#[derive(Debug, Clone)]
pub struct Overlay {
    pub partition: Partition,
    /// for each piece, the block of the first partition containing it
    pub left: Vec<usize>,
    /// for each piece, the block of the second partition containing it
    pub right: Vec<usize>,
}

impl Partition {
    pub fn new(lengths: Vec<Rational>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::InvalidPartition(
                "a partition needs at least one block".into(),
            ));
        }
        if let Some(l) = lengths.iter().find(|l| **l <= Rational::zero()) {
            return Err(Error::InvalidPartition(format!(
                "block length {l} is not positive"
            )));
        }
        let total: Rational = lengths.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidPartition(format!(
                "block lengths sum to {total}, not 1"
            )));
        }
        Ok(Partition { lengths })
    }

    pub fn uniform(k: usize) -> Self {
        assert!(k > 0, "uniform partition needs k >= 1");
        Partition {
            lengths: vec![Rational::new(1, k as i128); k],
        }
    }

    pub fn trivial() -> Self {
        Partition::uniform(1)
    }

    pub fn parse(lengths: &[&str]) -> Result<Self> {
        Partition::new(
            lengths
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<_>>()?,
        )
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn lengths(&self) -> &[Rational] {
        &self.lengths
    }

    pub fn lengths_f64(&self) -> Vec<f64> {
        self.lengths.iter().map(to_f64).collect()
    }

    /// Right endpoints of the blocks.
    pub fn boundaries(&self) -> Vec<Rational> {
        self.lengths
            .iter()
            .scan(Rational::zero(), |acc, l| {
                *acc += l;
                Some(*acc)
            })
            .collect()
    }

    /// Least common denominator of the block lengths.
    pub fn common_denominator(&self) -> i128 {
        self.lengths.iter().fold(1i128, |acc, l| acc.lcm(l.denom()))
    }

    /// Merge the boundaries of both partitions.
    pub fn overlay(&self, other: &Partition) -> Overlay {
        let a = self.boundaries();
        let b = other.boundaries();
        let (mut i, mut j) = (0, 0);
        let mut prev = Rational::zero();
        let mut lengths = Vec::new();
        let mut left = Vec::new();
        let mut right = Vec::new();
        while i < a.len() && j < b.len() {
            let next = a[i].min(b[j]);
            lengths.push(next - prev);
            left.push(i);
            right.push(j);
            prev = next;
            if a[i] == next {
                i += 1;
            }
            if b[j] == next {
                j += 1;
            }
        }
        Overlay {
            partition: Partition { lengths },
            left,
            right,
        }
    }

    /// True when every block of `self` lies inside a block of `coarse`.
    pub fn refines(&self, coarse: &Partition) -> bool {
        let fine = self.boundaries();
        coarse
            .boundaries()
            .iter()
            .all(|b| fine.binary_search(b).is_ok())
    }

    /// Block containing the point `numer / denom` of `[0, 1)`, given as an
    /// exact fraction.
    pub fn block_of(&self, numer: i128, denom: i128) -> usize {
        let x = Rational::new(numer, denom);
        let bounds = self.boundaries();
        bounds
            .iter()
            .position(|b| x < *b)
            .unwrap_or(bounds.len() - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlay_of_halves_and_thirds() {
        let a = Partition::parse(&["1/2", "1/2"]).unwrap();
        let b = Partition::parse(&["1/3", "2/3"]).unwrap();
        let o = a.overlay(&b);
        assert_eq!(
            o.partition,
            Partition::parse(&["1/3", "1/6", "1/2"]).unwrap()
        );
        assert_eq!(o.left, vec![0, 0, 1]);
        assert_eq!(o.right, vec![0, 1, 1]);
        assert!(o.partition.refines(&a) && o.partition.refines(&b));
        assert!(!a.refines(&b));
    }

    #[test]
    fn validation_and_parsing() {
        assert!(Partition::parse(&["1/2", "1/3"]).is_err());
        assert!(Partition::parse(&["1", "0"]).is_err());
        assert!(Partition::parse(&[]).is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&parse_rational(" 2/4 ").unwrap()), "1/2");
        assert_eq!(
            Partition::parse(&["1/4", "1/6", "7/12"])
                .unwrap()
                .common_denominator(),
            12
        );
    }

    #[test]
    fn block_lookup() {
        let p = Partition::parse(&["1/3", "2/3"]).unwrap();
        assert_eq!(p.block_of(0, 1), 0);
        assert_eq!(p.block_of(1, 3), 1);
        assert_eq!(p.block_of(99, 100), 1);
    }
}
