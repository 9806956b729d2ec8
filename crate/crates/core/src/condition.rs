//! Never conditions in Fishburn form and the patterns they constrain.
//!
//! A condition `iNj` on a triple says that the `i`-th smallest alternative of
//! the triple is never ranked `j`-th when an order is restricted to it. Only
//! the six conditions with `i != j` hold on the standard order, so only those
//! are representable; each carries a fixed code in `1..=6`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One of the six never conditions satisfied by the standard order.
///
/// The discriminant is the condition's code; a larger code sorts higher in
/// the lexicographic order on code strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum NeverCondition {
    OneN2 = 1,
    OneN3 = 2,
    TwoN1 = 3,
    TwoN3 = 4,
    ThreeN1 = 5,
    ThreeN2 = 6,
}

impl NeverCondition {
    pub const ALL: [NeverCondition; 6] = [
        NeverCondition::OneN2,
        NeverCondition::OneN3,
        NeverCondition::TwoN1,
        NeverCondition::TwoN3,
        NeverCondition::ThreeN1,
        NeverCondition::ThreeN2,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            1..=6 => Ok(Self::ALL[code as usize - 1]),
            _ => Err(Error::InvalidCode(code)),
        }
    }

    /// Position-in-triple `i` of `iNj`.
    pub fn position(self) -> u8 {
        self.formal().position
    }

    /// Forbidden rank `j` of `iNj`.
    pub fn rank(self) -> u8 {
        self.formal().rank
    }

    pub fn formal(self) -> FormalCondition {
        let (position, rank) = match self {
            NeverCondition::OneN2 => (1, 2),
            NeverCondition::OneN3 => (1, 3),
            NeverCondition::TwoN1 => (2, 1),
            NeverCondition::TwoN3 => (2, 3),
            NeverCondition::ThreeN1 => (3, 1),
            NeverCondition::ThreeN2 => (3, 2),
        };
        FormalCondition { position, rank }
    }

    /// Bitmask over [`Pattern`] indices of the patterns this condition allows.
    pub fn allowed_patterns(self) -> u8 {
        self.formal().allowed_patterns()
    }
}

impl fmt::Display for NeverCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.formal().fmt(f)
    }
}

impl FromStr for NeverCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let formal: FormalCondition = s.parse()?;
        formal
            .valid()
            .ok_or_else(|| Error::UnknownCondition(s.trim().to_string()))
    }
}

/// Any of the nine formal conditions `iNj`, including the three
/// (`1N1`, `2N2`, `3N3`) that the standard order violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalCondition {
    pub position: u8,
    pub rank: u8,
}

impl FormalCondition {
    pub fn new(position: u8, rank: u8) -> Self {
        assert!((1..=3).contains(&position) && (1..=3).contains(&rank));
        FormalCondition { position, rank }
    }

    pub fn all() -> impl Iterator<Item = FormalCondition> {
        (1..=3).flat_map(|position| (1..=3).map(move |rank| FormalCondition { position, rank }))
    }

    /// The representable condition, or `None` for `1N1`, `2N2`, `3N3`.
    pub fn valid(self) -> Option<NeverCondition> {
        use NeverCondition::*;
        match (self.position, self.rank) {
            (1, 2) => Some(OneN2),
            (1, 3) => Some(OneN3),
            (2, 1) => Some(TwoN1),
            (2, 3) => Some(TwoN3),
            (3, 1) => Some(ThreeN1),
            (3, 2) => Some(ThreeN2),
            _ => None,
        }
    }

    pub fn is_satisfied_by(self, pattern: Pattern) -> bool {
        pattern.0[self.rank as usize - 1] != self.position
    }

    pub fn allowed_patterns(self) -> u8 {
        Pattern::ALL
            .iter()
            .enumerate()
            .filter(|(_, p)| self.is_satisfied_by(**p))
            .fold(0, |m, (k, _)| m | 1 << k)
    }
}

impl fmt::Display for FormalCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}N{}", self.position, self.rank)
    }
}

impl FromStr for FormalCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.trim().as_bytes();
        let unknown = || Error::UnknownCondition(s.trim().to_string());
        if bytes.len() != 3 || !bytes[1].eq_ignore_ascii_case(&b'n') {
            return Err(unknown());
        }
        let digit = |b: u8| match b {
            b'1'..=b'3' => Ok(b - b'0'),
            _ => Err(unknown()),
        };
        Ok(FormalCondition {
            position: digit(bytes[0])?,
            rank: digit(bytes[2])?,
        })
    }
}

/// Relative ranking of a triple inside an order: entry `k` is the
/// position-in-triple (1..=3) of the alternative ranked `k+1`-th.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern(pub [u8; 3]);

impl Pattern {
    /// The six patterns, in lexicographic order; a pattern's index in this
    /// array is its bit in pattern masks.
    pub const ALL: [Pattern; 6] = [
        Pattern([1, 2, 3]),
        Pattern([1, 3, 2]),
        Pattern([2, 1, 3]),
        Pattern([2, 3, 1]),
        Pattern([3, 1, 2]),
        Pattern([3, 2, 1]),
    ];

    pub const STANDARD: Pattern = Pattern([1, 2, 3]);

    pub fn index(self) -> usize {
        Self::ALL
            .iter()
            .position(|p| *p == self)
            .expect("pattern is a permutation of 1,2,3")
    }

    /// Pattern index from the ranks (0..3) of the first, second and third
    /// element of a triple.
    #[inline]
    pub(crate) fn index_from_ranks(ra: usize, rb: usize, rc: usize) -> usize {
        PATTERN_FROM_RANKS[ra * 9 + rb * 3 + rc] as usize
    }
}

const PATTERN_FROM_RANKS: [u8; 27] = {
    let mut table = [u8::MAX; 27];
    let mut k = 0;
    while k < 6 {
        let p = Pattern::ALL[k].0;
        // p[r] is the position ranked r-th, so position p[r] has rank r.
        let mut ranks = [0usize; 3];
        let mut r = 0;
        while r < 3 {
            ranks[p[r] as usize - 1] = r;
            r += 1;
        }
        table[ranks[0] * 9 + ranks[1] * 3 + ranks[2]] = k as u8;
        k += 1;
    }
    table
};

/// `SATISFIES[pattern][code]` for the six representable codes (index 0 unused).
pub(crate) const SATISFIES: [[bool; 7]; 6] = {
    let mut table = [[false; 7]; 6];
    let mut p = 0;
    while p < 6 {
        let pat = Pattern::ALL[p].0;
        let mut code = 1;
        while code <= 6 {
            let (i, j) = CODE_CELLS[code];
            table[p][code] = pat[j as usize - 1] != i;
            code += 1;
        }
        p += 1;
    }
    table
};

/// `(position, rank)` of each code; index 0 unused.
pub(crate) const CODE_CELLS: [(u8, u8); 7] =
    [(0, 0), (1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)];

/// Pattern mask allowed by each code; index 0 (unassigned) allows everything.
pub(crate) const CODE_PATTERNS: [u8; 7] = {
    let mut masks = [0x3f; 7];
    let mut code = 1;
    while code <= 6 {
        let mut m = 0u8;
        let mut p = 0;
        while p < 6 {
            if SATISFIES[p][code] {
                m |= 1 << p;
            }
            p += 1;
        }
        masks[code] = m;
        code += 1;
    }
    masks
};

/// Non-empty set of allowed never conditions, stored as a bitmask over codes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleSet(u8);

impl RuleSet {
    pub fn new(conditions: impl IntoIterator<Item = NeverCondition>) -> Result<Self> {
        let mask = conditions
            .into_iter()
            .fold(0u8, |m, c| m | 1 << c.code());
        if mask == 0 {
            Err(Error::EmptyRuleSet)
        } else {
            Ok(RuleSet(mask))
        }
    }

    pub fn all() -> Self {
        RuleSet(0b111_1110)
    }

    pub fn contains(self, c: NeverCondition) -> bool {
        self.contains_code(c.code())
    }

    /// Membership by code; 0 and out-of-range codes are never members.
    #[inline]
    pub fn contains_code(self, code: u8) -> bool {
        code != 0 && code <= 6 && self.0 & (1 << code) != 0
    }

    /// Members in ascending code order.
    pub fn iter(self) -> impl Iterator<Item = NeverCondition> {
        NeverCondition::ALL
            .into_iter()
            .filter(move |c| self.contains(*c))
    }

    pub fn codes(self) -> Vec<u8> {
        self.iter().map(NeverCondition::code).collect()
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Comma-separated tokens in code order, e.g. `2N1,2N3`.
    pub fn tokens(self) -> String {
        self.iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Debug for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RuleSet({})", self.tokens())
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tokens())
    }
}

impl FromStr for RuleSet {
    type Err = Error;

    /// Parses a comma-separated list such as `2N3,2n1`.
    fn from_str(s: &str) -> Result<Self> {
        let conditions = s
            .split(',')
            .filter(|tok| !tok.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<NeverCondition>>>()?;
        RuleSet::new(conditions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_follow_fixed_mapping() {
        let expected = ["1N2", "1N3", "2N1", "2N3", "3N1", "3N2"];
        for (k, token) in expected.iter().enumerate() {
            let c: NeverCondition = token.parse().unwrap();
            assert_eq!(c.code() as usize, k + 1);
            assert_eq!(c.to_string(), *token);
            assert_eq!(NeverCondition::from_code(k as u8 + 1).unwrap(), c);
        }
        assert!(NeverCondition::from_code(0).is_err());
        assert!(NeverCondition::from_code(7).is_err());
    }

    #[test]
    fn parsing_is_case_insensitive_and_rejects_diagonal() {
        assert_eq!("2n3".parse::<NeverCondition>().unwrap(), NeverCondition::TwoN3);
        for bad in ["1N1", "2N2", "3N3", "4N1", "2X3", "", "2N"] {
            let err = bad.parse::<NeverCondition>().unwrap_err();
            assert!(err.to_string().contains("1N2, 1N3, 2N1, 2N3, 3N1, 3N2"), "{err}");
        }
    }

    #[test]
    fn each_pattern_violates_one_cell_per_rank() {
        for p in Pattern::ALL {
            let violated = FormalCondition::all()
                .filter(|c| !c.is_satisfied_by(p))
                .count();
            assert_eq!(violated, 3);
            let satisfied_valid = NeverCondition::ALL
                .iter()
                .filter(|c| c.formal().is_satisfied_by(p))
                .count();
            // Violated diagonal cells are the fixed points of the pattern.
            let fixed = (0..3).filter(|&r| p.0[r] as usize == r + 1).count();
            assert_eq!(satisfied_valid, 3 + fixed);
            if p == Pattern::STANDARD {
                assert_eq!(satisfied_valid, 6);
            }
        }
    }

    #[test]
    fn tables_agree_with_definition() {
        for (k, p) in Pattern::ALL.iter().enumerate() {
            assert_eq!(p.index(), k);
            for c in NeverCondition::ALL {
                assert_eq!(SATISFIES[k][c.code() as usize], c.formal().is_satisfied_by(*p));
            }
            let mut ranks = [0usize; 3];
            for (r, &pos) in p.0.iter().enumerate() {
                ranks[pos as usize - 1] = r;
            }
            assert_eq!(Pattern::index_from_ranks(ranks[0], ranks[1], ranks[2]), k);
        }
        for c in NeverCondition::ALL {
            assert_eq!(CODE_PATTERNS[c.code() as usize], c.allowed_patterns());
            assert_eq!(c.allowed_patterns().count_ones(), 4);
        }
    }

    #[test]
    fn rule_set_parse_and_order() {
        let r: RuleSet = "2N3,2N1".parse().unwrap();
        assert_eq!(r.codes(), vec![3, 4]);
        assert_eq!(r.tokens(), "2N1,2N3");
        assert!(r.contains(NeverCondition::TwoN1));
        assert!(!r.contains_code(0));
        assert!(matches!("".parse::<RuleSet>(), Err(Error::EmptyRuleSet)));
        assert_eq!(RuleSet::all().len(), 6);
    }
}
