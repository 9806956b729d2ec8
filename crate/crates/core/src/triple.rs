//! Triples of alternatives and their co-lexicographic numbering.
//!
//! Triples are compared by their largest element first, then the middle one,
//! then the smallest. The rank of `(a, b, c)` is `C(c-1,3) + C(b-1,2) + (a-1)`,
//! which does not depend on `n`: the triples over `[n]` are exactly the first
//! `C(n,3)` ranks.

use std::fmt;

use crate::error::{Error, Result};
use crate::{check_alternatives, Alternative};

/// Three distinct alternatives in ascending order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    a: Alternative,
    b: Alternative,
    c: Alternative,
}

impl Triple {
    /// Builds a triple, checking `1 <= a < b < c <= n`.
    pub fn new(a: Alternative, b: Alternative, c: Alternative, n: usize) -> Result<Self> {
        if a >= 1 && a < b && b < c && (c as usize) <= n {
            Ok(Triple { a, b, c })
        } else {
            Err(Error::InvalidTriple { a, b, c, n })
        }
    }

    /// Builds a triple from three distinct alternatives in any order.
    pub(crate) fn sorted(x: Alternative, y: Alternative, z: Alternative) -> Self {
        let mut v = [x, y, z];
        v.sort_unstable();
        debug_assert!(v[0] >= 1 && v[0] < v[1] && v[1] < v[2]);
        Triple {
            a: v[0],
            b: v[1],
            c: v[2],
        }
    }

    pub fn a(&self) -> Alternative {
        self.a
    }

    pub fn b(&self) -> Alternative {
        self.b
    }

    pub fn c(&self) -> Alternative {
        self.c
    }

    pub fn elements(&self) -> [Alternative; 3] {
        [self.a, self.b, self.c]
    }

    /// 1-based position of `x` inside the triple, if present.
    pub fn position_of(&self, x: Alternative) -> Option<u8> {
        self.elements()
            .iter()
            .position(|&e| e == x)
            .map(|p| p as u8 + 1)
    }

    /// Co-lex rank, valid for every `n >= c`.
    pub(crate) fn colex_rank(&self) -> usize {
        let (a, b, c) = (self.a as usize, self.b as usize, self.c as usize);
        binomial(c - 1, 3) + binomial(b - 1, 2) + (a - 1)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of triples over `[n]`, i.e. `C(n,3)`.
pub fn triple_count(n: usize) -> usize {
    binomial(n, 3)
}

/// Co-lex index (0-based) of `t` among the triples of `[n]`.
pub fn triple_index(t: Triple, n: usize) -> Result<usize> {
    check_alternatives(n)?;
    if t.c as usize > n {
        return Err(Error::InvalidTriple {
            a: t.a,
            b: t.b,
            c: t.c,
            n,
        });
    }
    Ok(t.colex_rank())
}

/// Inverse of [`triple_index`].
pub fn triple_at(index: usize, n: usize) -> Result<Triple> {
    check_alternatives(n)?;
    let count = triple_count(n);
    if index >= count {
        return Err(Error::TripleIndex { index, n, count });
    }
    // Greedy co-lex unranking: largest c with C(c-1,3) <= rest, and so on.
    let mut rest = index;
    let mut c = 3;
    while binomial(c, 3) <= rest {
        c += 1;
    }
    rest -= binomial(c - 1, 3);
    let mut b = 2;
    while binomial(b, 2) <= rest {
        b += 1;
    }
    rest -= binomial(b - 1, 2);
    let a = rest + 1;
    Ok(Triple {
        a: a as Alternative,
        b: b as Alternative,
        c: c as Alternative,
    })
}

/// All triples of `[n]` in co-lex order together with a dense reverse lookup.
#[derive(Clone, Debug)]
pub struct TripleTable {
    n: usize,
    triples: Vec<Triple>,
    // index_of[(a*(n+1) + b)*(n+1) + c] for a < b < c.
    index_of: Vec<u16>,
}

impl TripleTable {
    pub fn new(n: usize) -> Result<Self> {
        check_alternatives(n)?;
        let count = triple_count(n);
        let triples: Vec<Triple> = (0..count)
            .map(|k| triple_at(k, n))
            .collect::<Result<_>>()?;
        let side = n + 1;
        let mut index_of = vec![u16::MAX; side * side * side];
        for (k, t) in triples.iter().enumerate() {
            index_of[(t.a as usize * side + t.b as usize) * side + t.c as usize] = k as u16;
        }
        Ok(TripleTable {
            n,
            triples,
            index_of,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn get(&self, index: usize) -> Triple {
        self.triples[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.triples.iter().copied()
    }

    /// Index of the ascending triple `(a, b, c)`; the caller guarantees `a < b < c <= n`.
    #[inline]
    pub(crate) fn index(&self, a: Alternative, b: Alternative, c: Alternative) -> usize {
        let side = self.n + 1;
        self.index_of[(a as usize * side + b as usize) * side + c as usize] as usize
    }

    /// First index of the triples whose largest element is `c`.
    #[inline]
    pub(crate) fn block_start(c: usize) -> usize {
        binomial(c - 1, 3)
    }
}
