//! Relabelings of alternatives acting on triples and never conditions, and the
//! lexicographic-maximality tests that drive the orderly search.
//!
//! A permutation `g` sends the triple `t` to the ascending sort of its image
//! and the condition `iNj` on `t` to `i'Nj` on `g(t)`, where `i'` is the
//! position of `g(t[i])` in `g(t)`. Images with `i' == j` fall outside the six
//! representable conditions.
//!
//! Two implementations of the partial test are provided. The exhaustive one
//! walks every permutation of `[m]` and applies the three rejection rules
//! literally. [`LexMaxTester`] answers the same question by building the
//! inverse permutation one alternative at a time: in co-lex order the slots of
//! the triples with largest element `j` depend only on the preimages of
//! `1..=j`, so each slot can be compared (and each rejection rule checked) as
//! soon as its block is reached, cutting whole subtrees of permutations.

use std::cmp::Ordering;

use crate::condition::{FormalCondition, NeverCondition, Pattern, RuleSet, CODE_CELLS};
use crate::error::{Error, Result};
use crate::lexcode::ConditionAssignment;
use crate::triple::{triple_count, Triple, TripleTable};
use crate::{check_alternatives, Alternative, MAX_ALTERNATIVES};

/// A bijection of `[m]`, extended by the identity to larger alternatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<Alternative>,
}

impl Permutation {
    /// `images[x-1]` is the image of `x`.
    pub fn new(images: Vec<Alternative>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m + 1];
        for &y in &images {
            let y = y as usize;
            if y == 0 || y > m || seen[y] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 1..={m}"
                )));
            }
            seen[y] = true;
        }
        Ok(Permutation { map: images })
    }

    pub fn identity(m: usize) -> Self {
        Permutation {
            map: (1..=m as Alternative).collect(),
        }
    }

    /// Transposition of `x` and `y` on `[max(x, y)]`.
    pub fn swap(x: Alternative, y: Alternative) -> Self {
        let mut p = Self::identity(x.max(y) as usize);
        p.map.swap(x as usize - 1, y as usize - 1);
        p
    }

    /// Size of the explicitly stored domain `[m]`.
    pub fn degree(&self) -> usize {
        self.map.len()
    }

    pub fn images(&self) -> &[Alternative] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: Alternative) -> Alternative {
        match self.map.get(x as usize - 1) {
            Some(&y) => y,
            None => x,
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let m = self.degree().max(other.degree());
        Permutation {
            map: (1..=m as Alternative)
                .map(|x| self.apply(other.apply(x)))
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut map = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            map[y as usize - 1] = x as Alternative + 1;
        }
        Permutation { map }
    }

    /// All permutations of `[m]` in lexicographic order of their images.
    pub fn all(m: usize) -> impl Iterator<Item = Permutation> {
        let mut next = Some(Self::identity(m));
        std::iter::from_fn(move || {
            let current = next.take()?;
            let mut succ = current.clone();
            if next_permutation(&mut succ.map) {
                next = Some(succ);
            }
            Some(current)
        })
    }
}

fn next_permutation(v: &mut [Alternative]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Ascending image of `t` under `g`.
pub fn apply_to_triple(g: &Permutation, t: Triple) -> Triple {
    Triple::sorted(g.apply(t.a()), g.apply(t.b()), g.apply(t.c()))
}

/// Condition induced on `g(t)` by the condition `c` on `t`.
///
/// The result may be one of `1N1`, `2N2`, `3N3`; see [`FormalCondition::valid`].
pub fn induced_condition(t: Triple, c: FormalCondition, g: &Permutation) -> FormalCondition {
    let image = apply_to_triple(g, t);
    let moved = g.apply(t.elements()[c.position as usize - 1]);
    let position = image
        .position_of(moved)
        .expect("image of a triple element lies in the image triple");
    FormalCondition {
        position,
        rank: c.rank,
    }
}

/// Applies `g` to every assigned condition of `n`.
///
/// Returns `None` when some induced condition is not representable or not in
/// `rules`. Slots not hit by an assigned image stay unassigned.
pub fn transform(
    n: &ConditionAssignment,
    g: &Permutation,
    rules: RuleSet,
) -> Option<ConditionAssignment> {
    let mut out = ConditionAssignment::empty(n.n()).expect("same n as input");
    for (t, c) in n.assigned() {
        let image = apply_to_triple(g, t);
        let induced = induced_condition(t, c.formal(), g).valid()?;
        if !rules.contains(induced) {
            return None;
        }
        out.set(image, Some(induced)).ok()?;
    }
    Some(out)
}

/// Largest alternative of the support, at least 3; `None` for an empty assignment.
fn search_degree(n: &ConditionAssignment) -> Option<usize> {
    n.max_support().map(|m| (m as usize).max(3))
}

/// Partial lexicographic maximality test, by exhaustion over all
/// permutations of `[m]`.
///
/// A permutation is skipped when (a) an assigned condition maps outside
/// `rules`, (b) some allowed condition on an unassigned triple maps outside
/// `rules`, or (c) an unassigned triple maps onto an assigned one. The test
/// fails iff a surviving permutation yields a lexicographically larger
/// assignment.
pub fn is_partially_lex_max_exhaustive(n: &ConditionAssignment, rules: RuleSet) -> bool {
    let Some(m) = search_degree(n) else {
        return true;
    };
    let unassigned: Vec<Triple> = (0..n.len())
        .filter(|&k| n.codes()[k] == 0)
        .map(|k| crate::triple::triple_at(k, n.n()).expect("slot in range"))
        .collect();
    'perms: for g in Permutation::all(m) {
        let Some(image) = transform(n, &g, rules) else {
            continue;
        };
        for &t in &unassigned {
            for c in rules.iter() {
                match induced_condition(t, c.formal(), &g).valid() {
                    Some(ic) if rules.contains(ic) => {}
                    _ => continue 'perms,
                }
            }
            if n.get(apply_to_triple(&g, t)).expect("triple in range").is_some() {
                continue 'perms;
            }
        }
        if image.codes() > n.codes() {
            return false;
        }
    }
    true
}

/// Exact canonicity of a complete assignment, by exhaustion over all
/// permutations of `[n]`.
pub fn is_canonical_complete_exhaustive(n: &ConditionAssignment, rules: RuleSet) -> Result<bool> {
    require_complete(n)?;
    Ok(Permutation::all(n.n())
        .filter_map(|g| transform(n, &g, rules))
        .all(|image| image.codes() <= n.codes()))
}

/// The lexicographically largest assignment isomorphic to `n` within `rules`.
///
/// Walks all `n!` permutations; intended for small `n`.
pub fn canonical_form(n: &ConditionAssignment, rules: RuleSet) -> Result<ConditionAssignment> {
    require_complete(n)?;
    Ok(Permutation::all(n.n())
        .filter_map(|g| transform(n, &g, rules))
        .max_by(|x, y| x.codes().cmp(y.codes()))
        .expect("the identity always stays inside the rule set"))
}

fn require_complete(n: &ConditionAssignment) -> Result<()> {
    match n.unassigned_count() {
        0 => Ok(()),
        unassigned => Err(Error::Incomplete { unassigned }),
    }
}

/// Partial lexicographic maximality test (see [`is_partially_lex_max_exhaustive`]).
pub fn is_partially_lex_max(n: &ConditionAssignment, rules: RuleSet) -> bool {
    LexMaxTester::new(n.n(), rules)
        .expect("assignment has a supported n")
        .is_partially_lex_max(n.codes())
}

/// True iff no permutation of `[n]` keeping every condition inside `rules`
/// produces a lexicographically larger assignment.
pub fn is_canonical_complete(n: &ConditionAssignment, rules: RuleSet) -> Result<bool> {
    require_complete(n)?;
    Ok(LexMaxTester::new(n.n(), rules)?.is_canonical_complete(n.codes()))
}

/// `INDUCED[sigma][code]`: the code of `iNj` after positions move by
/// `Pattern::ALL[sigma]` (position `i` goes to `sigma[i-1]`), or 0 when the
/// result is not representable.
const INDUCED: [[u8; 7]; 6] = {
    let mut table = [[0u8; 7]; 6];
    let mut s = 0;
    while s < 6 {
        let sigma = Pattern::ALL[s].0;
        let mut code = 1;
        while code <= 6 {
            let (i, j) = CODE_CELLS[code];
            let moved = sigma[i as usize - 1];
            let mut target = 1;
            while target <= 6 {
                if CODE_CELLS[target].0 == moved && CODE_CELLS[target].1 == j {
                    table[s][code] = target as u8;
                }
                target += 1;
            }
            code += 1;
        }
        s += 1;
    }
    table
};

/// Precomputed tables for running maximality tests at a fixed `n` and rule set.
#[derive(Clone, Debug)]
pub struct LexMaxTester {
    n: usize,
    rules: RuleSet,
    table: TripleTable,
    /// `induced[sigma][code]` restricted to `rules` (0 when outside).
    induced: [[u8; 7]; 6],
    /// Whether every allowed condition stays allowed under `sigma`.
    keeps_rules: [bool; 6],
}

impl LexMaxTester {
    pub fn new(n: usize, rules: RuleSet) -> Result<Self> {
        check_alternatives(n)?;
        let mut induced = [[0u8; 7]; 6];
        let mut keeps_rules = [true; 6];
        for s in 0..6 {
            for code in 1..=6u8 {
                let ic = INDUCED[s][code as usize];
                if rules.contains_code(ic) {
                    induced[s][code as usize] = ic;
                }
                if rules.contains_code(code) && !rules.contains_code(ic) {
                    keeps_rules[s] = false;
                }
            }
        }
        Ok(LexMaxTester {
            n,
            rules,
            table: TripleTable::new(n)?,
            induced,
            keeps_rules,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rules(&self) -> RuleSet {
        self.rules
    }

    pub fn triples(&self) -> &TripleTable {
        &self.table
    }

    /// Partial test on raw codes (length `C(n,3)`).
    pub fn is_partially_lex_max(&self, codes: &[u8]) -> bool {
        debug_assert_eq!(codes.len(), triple_count(self.n));
        let Some(last) = codes.iter().rposition(|&c| c != 0) else {
            return true;
        };
        let m = (self.table.get(last).c() as usize).max(3);
        !Probe::new(self, codes, m, last).finds_larger()
    }

    /// Exact test on the raw codes of a complete assignment.
    pub fn is_canonical_complete(&self, codes: &[u8]) -> bool {
        debug_assert!(codes.iter().all(|&c| c != 0));
        !Probe::new(self, codes, self.n, codes.len() - 1).finds_larger()
    }
}

/// Search for an inverse permutation `h` (`h[x]` = preimage of `x`) whose
/// relabeling survives the rejection rules and is lexicographically larger.
struct Probe<'a> {
    tester: &'a LexMaxTester,
    codes: &'a [u8],
    m: usize,
    last_assigned: usize,
    preimage: [Alternative; MAX_ALTERNATIVES + 1],
    used: u32,
}

impl<'a> Probe<'a> {
    fn new(tester: &'a LexMaxTester, codes: &'a [u8], m: usize, last_assigned: usize) -> Self {
        Probe {
            tester,
            codes,
            m,
            last_assigned,
            preimage: [0; MAX_ALTERNATIVES + 1],
            used: 0,
        }
    }

    fn finds_larger(&mut self) -> bool {
        self.extend(1, Ordering::Equal)
    }

    /// Chooses the preimage of `level`, then checks the block of triples
    /// whose largest element is `level`.
    fn extend(&mut self, level: usize, state: Ordering) -> bool {
        if level > self.tester.n {
            return state == Ordering::Greater;
        }
        if level > self.m {
            self.preimage[level] = level as Alternative;
            return match self.check_block(level, state) {
                Some(next) => self.extend(level + 1, next),
                None => false,
            };
        }
        for v in 1..=self.m {
            let bit = 1u32 << v;
            if self.used & bit != 0 {
                continue;
            }
            self.preimage[level] = v as Alternative;
            self.used |= bit;
            let found = match self.check_block(level, state) {
                Some(next) => self.extend(level + 1, next),
                None => false,
            };
            self.used &= !bit;
            if found {
                return true;
            }
        }
        false
    }

    /// Walks the slots of block `c` in order. Returns the comparison state
    /// after the block, or `None` if this branch cannot produce a larger
    /// surviving relabeling.
    #[inline]
    fn check_block(&self, c: usize, mut state: Ordering) -> Option<Ordering> {
        if c < 3 {
            return Some(state);
        }
        let mut slot = TripleTable::block_start(c);
        let pc = self.preimage[c];
        for b in 2..c {
            let pb = self.preimage[b];
            for a in 1..b {
                let pa = self.preimage[a];
                state = self.check_slot(slot, pa, pb, pc, state)?;
                slot += 1;
            }
        }
        Some(state)
    }

    #[inline]
    fn check_slot(
        &self,
        slot: usize,
        pa: Alternative,
        pb: Alternative,
        pc: Alternative,
        state: Ordering,
    ) -> Option<Ordering> {
        // Ranks of the three preimages among themselves.
        let ra = (pa > pb) as usize + (pa > pc) as usize;
        let rb = (pb > pa) as usize + (pb > pc) as usize;
        let rc = (pc > pa) as usize + (pc > pb) as usize;
        let sigma = Pattern::index_from_ranks(ra, rb, rc);
        let mut sorted = [pa, pb, pc];
        sorted.sort_unstable();
        let source = self.tester.table.index(sorted[0], sorted[1], sorted[2]);
        let source_code = self.codes[source];
        let target_code = self.codes[slot];

        if target_code == 0 {
            // An assigned triple landing on an unassigned slot forces some
            // unassigned triple onto an assigned slot elsewhere (rule c).
            if source_code != 0 || !self.tester.keeps_rules[sigma] {
                return None;
            }
            if state == Ordering::Equal && slot > self.last_assigned {
                // Every remaining slot compares equal.
                return None;
            }
            return Some(state);
        }
        if source_code == 0 {
            return None;
        }
        let image_code = self.tester.induced[sigma][source_code as usize];
        if image_code == 0 {
            return None;
        }
        match state {
            Ordering::Equal => match image_code.cmp(&target_code) {
                Ordering::Less => None,
                Ordering::Greater => Some(Ordering::Greater),
                Ordering::Equal if slot == self.last_assigned => None,
                Ordering::Equal => Some(Ordering::Equal),
            },
            _ => Some(state),
        }
    }
}

/// Convenience for callers holding a [`NeverCondition`].
pub fn induced_never_condition(t: Triple, c: NeverCondition, g: &Permutation) -> Option<NeverCondition> {
    induced_condition(t, c.formal(), g).valid()
}
