//! Code strings: a never-condition assignment written as one code per triple
//! in co-lex order, with `0` for unassigned triples.
//!
//! Comparing two assignments is plain lexicographic comparison of their code
//! strings, so unassigned triples rank below every condition.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::condition::NeverCondition;
use crate::error::{Error, Result};
use crate::triple::{triple_at, triple_count, triple_index, Triple};
use crate::{check_alternatives, Alternative};

/// Assignment of at most one never condition to every triple of `[n]`.
///
/// Ordered by `n`, then lexicographically by code string.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConditionAssignment {
    n: usize,
    codes: Vec<u8>,
}

impl ConditionAssignment {
    /// The assignment with every triple unassigned.
    pub fn empty(n: usize) -> Result<Self> {
        check_alternatives(n)?;
        Ok(ConditionAssignment {
            n,
            codes: vec![0; triple_count(n)],
        })
    }

    pub fn from_codes(n: usize, codes: Vec<u8>) -> Result<Self> {
        check_alternatives(n)?;
        if codes.len() != triple_count(n) {
            return Err(Error::CodeString(
                render(&codes),
                "length must be C(n,3)",
            ));
        }
        if let Some(&bad) = codes.iter().find(|&&c| c > 6) {
            return Err(Error::InvalidCode(bad));
        }
        Ok(ConditionAssignment { n, codes })
    }

    /// Every triple assigned the same condition.
    pub fn uniform(n: usize, c: NeverCondition) -> Result<Self> {
        check_alternatives(n)?;
        Ok(ConditionAssignment {
            n,
            codes: vec![c.code(); triple_count(n)],
        })
    }

    /// Parses a code string, inferring `n` from its length.
    pub fn decode(s: &str) -> Result<Self> {
        let s = s.trim();
        let len = s.len();
        let n = (3..=crate::MAX_ALTERNATIVES)
            .find(|&n| triple_count(n) == len)
            .ok_or_else(|| Error::CodeString(s.to_string(), "length is not C(n,3) for a supported n"))?;
        Self::decode_with_n(s, n)
    }

    pub fn decode_with_n(s: &str, n: usize) -> Result<Self> {
        let s = s.trim();
        let codes = s
            .bytes()
            .map(|b| match b {
                b'0'..=b'6' => Ok(b - b'0'),
                _ => Err(Error::CodeString(s.to_string(), "digits must be 0..=6")),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_codes(n, codes)
    }

    /// The code string, one digit per triple in co-lex order.
    pub fn encode(&self) -> String {
        render(&self.codes)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn codes(&self) -> &[u8] {
        &self.codes
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.iter().all(|&c| c == 0)
    }

    pub fn is_complete(&self) -> bool {
        self.codes.iter().all(|&c| c != 0)
    }

    pub fn unassigned_count(&self) -> usize {
        self.codes.iter().filter(|&&c| c == 0).count()
    }

    /// Number of leading assigned slots.
    pub fn prefix_len(&self) -> usize {
        self.codes.iter().take_while(|&&c| c != 0).count()
    }

    /// True when the assigned slots are exactly a leading run.
    pub fn is_prefix_shaped(&self) -> bool {
        let k = self.prefix_len();
        self.codes[k..].iter().all(|&c| c == 0)
    }

    pub fn get(&self, t: Triple) -> Result<Option<NeverCondition>> {
        let k = triple_index(t, self.n)?;
        Ok(self.get_slot(k))
    }

    pub fn get_slot(&self, slot: usize) -> Option<NeverCondition> {
        match self.codes[slot] {
            0 => None,
            c => Some(NeverCondition::from_code(c).expect("codes are validated")),
        }
    }

    pub fn set(&mut self, t: Triple, c: Option<NeverCondition>) -> Result<()> {
        let k = triple_index(t, self.n)?;
        self.codes[k] = c.map_or(0, NeverCondition::code);
        Ok(())
    }

    pub(crate) fn set_code(&mut self, slot: usize, code: u8) {
        debug_assert!(code <= 6);
        self.codes[slot] = code;
    }

    /// Assigned `(triple, condition)` pairs in co-lex order.
    pub fn assigned(&self) -> impl Iterator<Item = (Triple, NeverCondition)> + '_ {
        self.codes
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(move |(k, &c)| {
                (
                    triple_at(k, self.n).expect("slot in range"),
                    NeverCondition::from_code(c).expect("codes are validated"),
                )
            })
    }

    /// Alternatives appearing in assigned triples.
    pub fn support(&self) -> BTreeSet<Alternative> {
        self.assigned()
            .flat_map(|(t, _)| t.elements())
            .collect()
    }

    /// Largest alternative in the support, if any slot is assigned.
    pub fn max_support(&self) -> Option<Alternative> {
        self.codes
            .iter()
            .rposition(|&c| c != 0)
            .map(|k| triple_at(k, self.n).expect("slot in range").c())
    }

    /// The first `len` slots of this assignment, the rest unassigned.
    pub fn truncated(&self, len: usize) -> Self {
        let mut codes = self.codes.clone();
        codes[len.min(self.codes.len())..].fill(0);
        ConditionAssignment { n: self.n, codes }
    }
}

/// Lexicographic comparison of code strings.
pub fn lex_compare(a: &ConditionAssignment, b: &ConditionAssignment) -> Result<Ordering> {
    if a.n != b.n {
        return Err(Error::CountMismatch(a.n, b.n));
    }
    Ok(a.codes.cmp(&b.codes))
}

fn render(codes: &[u8]) -> String {
    codes.iter().map(|&c| char::from(b'0' + c.min(9))).collect()
}

impl fmt::Display for ConditionAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl fmt::Debug for ConditionAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConditionAssignment(n={}, {})", self.n, self.encode())
    }
}

impl FromStr for ConditionAssignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::decode(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tr(a: u8, b: u8, c: u8, n: usize) -> Triple {
        Triple::new(a, b, c, n).unwrap()
    }

    #[test]
    fn encode_examples() {
        let mut n3 = ConditionAssignment::empty(3).unwrap();
        n3.set(tr(1, 2, 3, 3), Some(NeverCondition::TwoN3)).unwrap();
        assert_eq!(n3.encode(), "4");

        let mut n4 = ConditionAssignment::empty(4).unwrap();
        assert_eq!(n4.encode(), "0000");
        n4.set(tr(1, 2, 3, 4), Some(NeverCondition::TwoN3)).unwrap();
        n4.set(tr(1, 2, 4, 4), Some(NeverCondition::TwoN1)).unwrap();
        assert_eq!(n4.encode(), "4300");
    }

    #[test]
    fn compare_examples() {
        let a = ConditionAssignment::decode("4300").unwrap();
        let b = ConditionAssignment::decode("4040").unwrap();
        let c = ConditionAssignment::decode("0444").unwrap();
        let d = ConditionAssignment::decode("4000").unwrap();
        assert_eq!(lex_compare(&a, &a).unwrap(), Ordering::Equal);
        assert_eq!(lex_compare(&a, &b).unwrap(), Ordering::Greater);
        assert_eq!(lex_compare(&c, &d).unwrap(), Ordering::Less);
        let other = ConditionAssignment::decode("4").unwrap();
        assert!(matches!(lex_compare(&a, &other), Err(Error::CountMismatch(4, 3))));
    }

    #[test]
    fn support_examples() {
        let one = ConditionAssignment::decode("5000").unwrap();
        assert_eq!(one.support(), BTreeSet::from([1, 2, 3]));
        let two = ConditionAssignment::decode("5100").unwrap();
        assert_eq!(two.support(), BTreeSet::from([1, 2, 3, 4]));
        assert_eq!(two.max_support(), Some(4));
        let none = ConditionAssignment::empty(4).unwrap();
        assert!(none.support().is_empty());
        assert_eq!(none.max_support(), None);
    }

    #[test]
    fn decode_rejects_bad_strings() {
        assert!(ConditionAssignment::decode("47").is_err());
        assert!(ConditionAssignment::decode("4700").is_err());
        assert!(ConditionAssignment::decode("43a0").is_err());
        assert!(ConditionAssignment::decode_with_n("4300", 5).is_err());
        assert_eq!(ConditionAssignment::decode("4300").unwrap().n(), 4);
    }

    fn codes_strategy(len: usize) -> impl Strategy<Value = Vec<u8>> {
        proptest::collection::vec(0u8..=6, len)
    }

    proptest! {
        #[test]
        fn decode_inverts_encode(codes in codes_strategy(20)) {
            let a = ConditionAssignment::from_codes(6, codes).unwrap();
            prop_assert_eq!(ConditionAssignment::decode(&a.encode()).unwrap(), a);
        }

        #[test]
        fn compare_is_a_total_order(x in codes_strategy(10), y in codes_strategy(10), z in codes_strategy(10)) {
            let (x, y, z) = (
                ConditionAssignment::from_codes(5, x).unwrap(),
                ConditionAssignment::from_codes(5, y).unwrap(),
                ConditionAssignment::from_codes(5, z).unwrap(),
            );
            let xy = lex_compare(&x, &y).unwrap();
            prop_assert_eq!(xy.reverse(), lex_compare(&y, &x).unwrap());
            prop_assert_eq!(xy == Ordering::Equal, x == y);
            if xy != Ordering::Greater && lex_compare(&y, &z).unwrap() != Ordering::Greater {
                prop_assert_ne!(lex_compare(&x, &z).unwrap(), Ordering::Greater);
            }
        }

        #[test]
        fn extending_a_prefix_is_greater(codes in codes_strategy(10), len in 0usize..10, code in 1u8..=6) {
            let full = ConditionAssignment::from_codes(5, codes.iter().map(|&c| c.max(1)).collect()).unwrap();
            let prefix = full.truncated(len);
            let mut extended = prefix.clone();
            extended.set_code(len, code);
            prop_assert_eq!(lex_compare(&extended, &prefix).unwrap(), Ordering::Greater);
        }
    }
}
