use std::fmt;
use std::str::FromStr;

use crate::condition::{NeverCondition, Pattern, SATISFIES};
use crate::error::{Error, Result};
use crate::triple::Triple;
use crate::{check_alternatives, Alternative};

/// A preference order over `[n]`, most-preferred alternative first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearOrder(Vec<Alternative>);

impl LinearOrder {
    pub fn new(seq: Vec<Alternative>) -> Result<Self> {
        let n = seq.len();
        check_alternatives(n)?;
        let mut seen = vec![false; n + 1];
        for &x in &seq {
            let x = x as usize;
            if x == 0 || x > n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{seq:?} is not an ordering of 1..={n}"
                )));
            }
            seen[x] = true;
        }
        Ok(LinearOrder(seq))
    }

    pub(crate) fn from_vec_unchecked(seq: Vec<Alternative>) -> Self {
        LinearOrder(seq)
    }

    /// The order `12…n`.
    pub fn standard(n: usize) -> Self {
        LinearOrder((1..=n as Alternative).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Alternative] {
        &self.0
    }

    /// Rank (0 = most preferred) of every alternative, indexed by alternative.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![usize::MAX; self.0.len() + 1];
        for (r, &x) in self.0.iter().enumerate() {
            ranks[x as usize] = r;
        }
        ranks
    }

    /// Relative ranking of the elements of `t` within this order.
    pub fn restrict(&self, t: Triple) -> Pattern {
        let ranks = self.ranks();
        restrict_with_ranks(&ranks, t)
    }

    pub fn satisfies(&self, t: Triple, c: NeverCondition) -> bool {
        SATISFIES[self.restrict(t).index()][c.code() as usize]
    }
}

pub(crate) fn pattern_index_with_ranks(ranks: &[usize], t: Triple) -> usize {
    let (ra, rb, rc) = (ranks[t.a() as usize], ranks[t.b() as usize], ranks[t.c() as usize]);
    let rel = |r: usize, s: usize, u: usize| (r > s) as usize + (r > u) as usize;
    Pattern::index_from_ranks(rel(ra, rb, rc), rel(rb, ra, rc), rel(rc, ra, rb))
}

pub(crate) fn restrict_with_ranks(ranks: &[usize], t: Triple) -> Pattern {
    Pattern::ALL[pattern_index_with_ranks(ranks, t)]
}

impl fmt::Display for LinearOrder {
    /// Digit string for `n <= 9`, comma-separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() <= 9 {
            for x in &self.0 {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl fmt::Debug for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearOrder({self})")
    }
}

impl FromStr for LinearOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidPermutation(format!("cannot parse order '{s}'"));
        let seq: Vec<Alternative> = if s.contains(',') {
            s.split(',')
                .map(|p| p.trim().parse::<Alternative>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|ch| ch.to_digit(10).map(|d| d as Alternative).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        LinearOrder::new(seq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triple::{triple_at, triple_count};

    fn order(s: &str) -> LinearOrder {
        s.parse().unwrap()
    }

    fn tr(a: u8, b: u8, c: u8, n: usize) -> Triple {
        Triple::new(a, b, c, n).unwrap()
    }

    #[test]
    fn restrict_examples() {
        for n in 3..=8 {
            let std = LinearOrder::standard(n);
            for k in 0..triple_count(n) {
                assert_eq!(std.restrict(triple_at(k, n).unwrap()), Pattern::STANDARD);
            }
        }
        assert_eq!(order("231").restrict(tr(1, 2, 3, 3)), Pattern([2, 3, 1]));
        assert_eq!(order("41325").restrict(tr(1, 3, 4, 5)), Pattern([3, 1, 2]));
    }

    #[test]
    fn satisfies_examples() {
        let std = LinearOrder::standard(6);
        for k in 0..triple_count(6) {
            for c in NeverCondition::ALL {
                assert!(std.satisfies(triple_at(k, 6).unwrap(), c));
            }
        }
        let t = tr(1, 2, 3, 3);
        assert!(!order("132").satisfies(t, NeverCondition::TwoN3));
        assert!(!order("213").satisfies(t, NeverCondition::TwoN1));
        assert!(order("213").satisfies(t, NeverCondition::TwoN3));
    }

    #[test]
    fn order_parsing() {
        assert!("1123".parse::<LinearOrder>().is_err());
        assert!("124".parse::<LinearOrder>().is_err());
        let long = order("10,9,8,7,6,5,4,3,2,1");
        assert_eq!(long.to_string(), "10,9,8,7,6,5,4,3,2,1");
        assert_eq!(order("312").to_string(), "312");
    }
}
