//! Full domains of never-condition assignments and the domain-level
//! predicates: unitary, copious, maximal.
//!
//! Orders are built by inserting alternatives `1, 2, …, n` one at a time.
//! Inserting `j` fixes the relative order of every triple `(a, b, j)`, so each
//! triple is checked exactly once, at the moment it is completed.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use crate::condition::{FormalCondition, NeverCondition, Pattern, CODE_PATTERNS};
use crate::error::{Error, Result};
use crate::lexcode::ConditionAssignment;
use crate::order::{pattern_index_with_ranks, LinearOrder};
use crate::triple::{triple_at, triple_count, Triple, TripleTable};
use crate::check_alternatives;

/// A set of linear orders over `[n]`, kept sorted and free of duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Domain {
    n: usize,
    orders: Vec<LinearOrder>,
}

impl Domain {
    pub fn new(n: usize, orders: impl IntoIterator<Item = LinearOrder>) -> Result<Self> {
        check_alternatives(n)?;
        let mut orders: Vec<LinearOrder> = orders.into_iter().collect();
        if let Some(bad) = orders.iter().find(|o| o.n() != n) {
            return Err(Error::InvalidPermutation(format!("{bad} is not an order of 1..={n}")));
        }
        orders.sort_unstable();
        orders.dedup();
        Ok(Domain { n, orders })
    }

    /// Every linear order over `[n]`.
    pub fn all_orders(n: usize) -> Result<Self> {
        check_alternatives(n)?;
        let orders = expand_with_masks(n, &vec![0x3f; triple_count(n)]);
        Ok(Domain { n, orders })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn orders(&self) -> &[LinearOrder] {
        &self.orders
    }

    pub fn contains(&self, order: &LinearOrder) -> bool {
        self.orders.binary_search(order).is_ok()
    }

    /// This domain with one more order.
    pub fn with_order(&self, order: LinearOrder) -> Result<Self> {
        Domain::new(self.n, self.orders.iter().cloned().chain([order]))
    }

    /// Writes a header line `# n=<n> source=<codes>` followed by one order per line.
    pub fn write_to<W: Write>(&self, out: &mut W, source: Option<&ConditionAssignment>) -> io::Result<()> {
        match source {
            Some(s) => writeln!(out, "# n={} source={}", self.n, s.encode())?,
            None => writeln!(out, "# n={}", self.n)?,
        }
        for o in &self.orders {
            writeln!(out, "{o}")?;
        }
        Ok(())
    }

    /// Reads the format produced by [`Domain::write_to`]; `n` comes from the
    /// header when present, otherwise from the first order.
    pub fn read_from<R: BufRead>(input: R) -> Result<Self> {
        let mut n = None;
        let mut orders = Vec::new();
        for line in input.lines() {
            let line = line?;
            let line = line.trim();
            if let Some(header) = line.strip_prefix('#') {
                for field in header.split_whitespace() {
                    if let Some(v) = field.strip_prefix("n=") {
                        n = v.parse().ok();
                    }
                }
            } else if !line.is_empty() {
                orders.push(line.parse::<LinearOrder>()?);
            }
        }
        let n = n
            .or_else(|| orders.first().map(LinearOrder::n))
            .ok_or(Error::EmptyDomain)?;
        Domain::new(n, orders)
    }

    /// Bitmask of the patterns seen on each triple, indexed by co-lex slot.
    fn pattern_masks(&self) -> Vec<u8> {
        let table = TripleTable::new(self.n).expect("domain has a supported n");
        let mut masks = vec![0u8; table.len()];
        for order in &self.orders {
            let ranks = order.ranks();
            for (k, t) in table.iter().enumerate() {
                masks[k] |= 1 << pattern_index_with_ranks(&ranks, t);
            }
        }
        masks
    }
}

/// The full domain of a complete assignment.
pub fn expand(n: &ConditionAssignment) -> Result<Domain> {
    require_complete(n)?;
    let masks: Vec<u8> = n.codes().iter().map(|&c| CODE_PATTERNS[c as usize]).collect();
    Ok(Domain {
        n: n.n(),
        orders: expand_with_masks(n.n(), &masks),
    })
}

/// Size of the full domain, without materialising it.
pub fn domain_size(n: &ConditionAssignment) -> Result<usize> {
    require_complete(n)?;
    let masks: Vec<u8> = n.codes().iter().map(|&c| CODE_PATTERNS[c as usize]).collect();
    Ok(DomainBuilder::new(n.n(), &masks).count())
}

fn require_complete(n: &ConditionAssignment) -> Result<()> {
    match n.unassigned_count() {
        0 => Ok(()),
        unassigned => Err(Error::Incomplete { unassigned }),
    }
}

/// All orders whose pattern on every triple lies in that triple's mask, sorted.
pub(crate) fn expand_with_masks(n: usize, masks: &[u8]) -> Vec<LinearOrder> {
    let flat = DomainBuilder::new(n, masks).build();
    let mut orders: Vec<LinearOrder> = flat
        .chunks_exact(n)
        .map(|seq| LinearOrder::from_vec_unchecked(seq.to_vec()))
        .collect();
    orders.sort_unstable();
    orders
}

/// Insertion-based construction of the orders compatible with per-triple
/// pattern masks. Orders are stored as flat rank vectors (`rank[x-1]`).
struct DomainBuilder<'a> {
    n: usize,
    masks: &'a [u8],
}

impl<'a> DomainBuilder<'a> {
    fn new(n: usize, masks: &'a [u8]) -> Self {
        debug_assert_eq!(masks.len(), triple_count(n));
        DomainBuilder { n, masks }
    }

    /// Can `j` be inserted at rank `p` into an order of `[j-1]` with the given ranks?
    #[inline]
    fn accepts(&self, ranks: &[u8], j: usize, p: u8) -> bool {
        let mut slot = TripleTable::block_start(j);
        for b in 2..j {
            let rb = ranks[b - 1] + (ranks[b - 1] >= p) as u8;
            for a in 1..b {
                let ra = ranks[a - 1] + (ranks[a - 1] >= p) as u8;
                let rel_a = (ra > rb) as usize + (ra > p) as usize;
                let rel_b = (rb > ra) as usize + (rb > p) as usize;
                let rel_c = (p > ra) as usize + (p > rb) as usize;
                let pat = Pattern::index_from_ranks(rel_a, rel_b, rel_c);
                if self.masks[slot] & (1 << pat) == 0 {
                    return false;
                }
                slot += 1;
            }
        }
        true
    }

    /// Rank vectors of all orders over `[j]` for `j = n - 1`, built level by level.
    fn level_before_last(&self) -> Vec<u8> {
        let mut current: Vec<u8> = vec![0];
        for j in 2..self.n {
            let width = j - 1;
            let mut next = Vec::with_capacity(current.len() * j);
            for ranks in current.chunks_exact(width) {
                for p in 0..j as u8 {
                    if self.accepts(ranks, j, p) {
                        next.extend(ranks.iter().map(|&r| r + (r >= p) as u8));
                        next.push(p);
                    }
                }
            }
            current = next;
        }
        current
    }

    fn count(&self) -> usize {
        let n = self.n;
        self.level_before_last()
            .chunks_exact(n - 1)
            .map(|ranks| (0..n as u8).filter(|&p| self.accepts(ranks, n, p)).count())
            .sum()
    }

    /// Flat preference sequences (most preferred first), `n` entries each.
    fn build(&self) -> Vec<u8> {
        let n = self.n;
        let mut out = Vec::new();
        let mut seq = vec![0u8; n];
        for ranks in self.level_before_last().chunks_exact(n - 1) {
            for p in 0..n as u8 {
                if self.accepts(ranks, n, p) {
                    for (x, &r) in ranks.iter().enumerate() {
                        seq[(r + (r >= p) as u8) as usize] = x as u8 + 1;
                    }
                    seq[p as usize] = n as u8;
                    out.extend_from_slice(&seq);
                }
            }
        }
        out
    }
}

/// Orders over the alternatives touched by a co-lex prefix of assigned
/// triples, one stack level per assigned slot.
///
/// Level `k` holds the orders of `[m]` (with `m` the largest element of the
/// first `k` triples) that satisfy those `k` conditions. Later triples only
/// remove orders, so a pattern missing at level `k` is missing from the full
/// domain of every completion.
pub(crate) struct PrefixDomains {
    table: TripleTable,
    /// `(m, flat rank vectors of width m)` per level.
    levels: Vec<(usize, Vec<u8>)>,
}

impl PrefixDomains {
    pub(crate) fn new(n: usize) -> Self {
        let table = TripleTable::new(n).expect("caller validated n");
        let mut levels = Vec::with_capacity(table.len() + 1);
        levels.push((2, vec![0, 1, 1, 0]));
        PrefixDomains { table, levels }
    }

    /// Number of assigned slots on the stack.
    pub(crate) fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub(crate) fn truncate(&mut self, depth: usize) {
        self.levels.truncate(depth + 1);
    }

    /// Pushes slot `depth()` with `code`. Returns false, leaving the stack
    /// unchanged, when some triple of `[m]` already shows fewer than four
    /// patterns.
    pub(crate) fn push(&mut self, code: u8) -> bool {
        let slot = self.depth();
        let t = self.table.get(slot);
        let (a, b, c) = (t.a() as usize, t.b() as usize, t.c() as usize);
        let allowed = CODE_PATTERNS[code as usize];
        let (m, parent) = self.levels.last().expect("root level");
        let fits = |ranks: &[u8]| {
            let (ra, rb, rc) = (ranks[a - 1], ranks[b - 1], ranks[c - 1]);
            let pat = Pattern::index_from_ranks(
                (ra > rb) as usize + (ra > rc) as usize,
                (rb > ra) as usize + (rb > rc) as usize,
                (rc > ra) as usize + (rc > rb) as usize,
            );
            allowed & (1 << pat) != 0
        };
        let mut next = Vec::new();
        let width = c.max(*m);
        if c > *m {
            debug_assert_eq!(c, m + 1);
            let mut ranks = vec![0u8; c];
            for old in parent.chunks_exact(*m) {
                for p in 0..c as u8 {
                    for (r, &o) in ranks.iter_mut().zip(old) {
                        *r = o + (o >= p) as u8;
                    }
                    ranks[c - 1] = p;
                    if fits(&ranks) {
                        next.extend_from_slice(&ranks);
                    }
                }
            }
        } else {
            for ranks in parent.chunks_exact(*m) {
                if fits(ranks) {
                    next.extend_from_slice(ranks);
                }
            }
        }
        if !Self::shows_four_patterns(&self.table, width, &next) {
            return false;
        }
        self.levels.push((width, next));
        true
    }

    fn shows_four_patterns(table: &TripleTable, m: usize, flat: &[u8]) -> bool {
        (0..TripleTable::block_start(m + 1)).all(|k| {
            let t = table.get(k);
            let (a, b, c) = (t.a() as usize, t.b() as usize, t.c() as usize);
            let mut mask = 0u8;
            for ranks in flat.chunks_exact(m) {
                let (ra, rb, rc) = (ranks[a - 1], ranks[b - 1], ranks[c - 1]);
                mask |= 1 << Pattern::index_from_ranks(
                    (ra > rb) as usize + (ra > rc) as usize,
                    (rb > ra) as usize + (rb > rc) as usize,
                    (rc > ra) as usize + (rc > rb) as usize,
                );
                if mask.count_ones() >= 4 {
                    return true;
                }
            }
            false
        })
    }
}

/// True iff the standard order `12…n` belongs to `d`.
pub fn is_unitary(d: &Domain) -> bool {
    d.contains(&LinearOrder::standard(d.n))
}

/// True iff every triple shows exactly four patterns.
pub fn is_copious(d: &Domain) -> bool {
    d.pattern_masks().iter().all(|m| m.count_ones() == 4)
}

/// The representable conditions that every order of `d` satisfies on `t`.
pub fn satisfied_conditions(d: &Domain, t: Triple) -> Result<Vec<NeverCondition>> {
    if d.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let mask = d
        .orders
        .iter()
        .fold(0u8, |m, o| m | 1 << o.restrict(t).index());
    Ok(NeverCondition::ALL
        .into_iter()
        .filter(|c| c.allowed_patterns() & mask == mask)
        .collect())
}

/// Which conditions may witness that an extended domain is still Condorcet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionFamily {
    /// The six conditions compatible with the standard order.
    Representable,
    /// All nine formal `iNj`.
    Formal,
}

impl ConditionFamily {
    /// `table[mask]` is true when some condition of the family allows every
    /// pattern in `mask`.
    fn witness_table(self) -> [bool; 64] {
        let allowed: Vec<u8> = match self {
            ConditionFamily::Representable => NeverCondition::ALL
                .iter()
                .map(|c| c.allowed_patterns())
                .collect(),
            ConditionFamily::Formal => FormalCondition::all().map(|c| c.allowed_patterns()).collect(),
        };
        let mut table = [false; 64];
        for (mask, entry) in table.iter_mut().enumerate() {
            let mask = mask as u8;
            *entry = allowed.iter().any(|&a| a & mask == mask);
        }
        table
    }
}

/// True iff no order outside `d` can be added while keeping a never
/// condition on every triple.
pub fn is_maximal(d: &Domain) -> bool {
    is_maximal_with(d, ConditionFamily::Formal)
}

/// [`is_maximal`] with an explicit choice of witnessing conditions.
///
/// Counts the orders `l` for which `d ∪ {l}` still satisfies a condition of
/// `family` on every triple; `d` is maximal iff that count is `|d|`.
pub fn is_maximal_with(d: &Domain, family: ConditionFamily) -> bool {
    if d.is_empty() {
        return false;
    }
    let witness = family.witness_table();
    let masks = d.pattern_masks();
    if masks.iter().any(|&m| !witness[m as usize]) {
        return false;
    }
    // Masks of the patterns each extension may add without losing the witness.
    let extendable: Vec<u8> = masks
        .iter()
        .map(|&m| (0..6).filter(|&p| witness[(m | 1 << p) as usize]).fold(0, |acc, p| acc | 1 << p))
        .collect();
    DomainBuilder::new(d.n, &extendable).count() == d.len()
}

/// Maximality via implied conditions: the conditions on triples that
/// satisfy exactly one condition must by themselves cut out `d`.
///
/// Checking each multi-condition triple separately is not enough. In the
/// domain of `1214` every triple containing 1 satisfies four conditions, each
/// implied by the other triples, yet twelve more orders can be added.
pub fn is_maximal_by_implied_conditions(d: &Domain) -> Result<bool> {
    if d.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let mut masks = Vec::with_capacity(triple_count(d.n));
    for k in 0..triple_count(d.n) {
        let satisfied = satisfied_conditions(d, triple_at(k, d.n).expect("slot in range"))?;
        masks.push(match satisfied.as_slice() {
            [] => return Ok(false),
            [only] => only.allowed_patterns(),
            _ => 0x3f,
        });
    }
    Ok(DomainBuilder::new(d.n, &masks).count() == d.len())
}

/// Class counts keyed by full-domain size.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SizeHistogram(BTreeMap<usize, u64>);

impl SizeHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, size: usize) {
        *self.0.entry(size).or_insert(0) += 1;
    }

    pub fn merge(&mut self, other: &SizeHistogram) {
        for (&size, &count) in &other.0 {
            *self.0.entry(size).or_insert(0) += count;
        }
    }

    pub fn get(&self, size: usize) -> u64 {
        self.0.get(&size).copied().unwrap_or(0)
    }

    /// `(size, count)` pairs in ascending size.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.0.iter().map(|(&s, &c)| (s, c))
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(usize, u64)> for SizeHistogram {
    fn from_iter<I: IntoIterator<Item = (usize, u64)>>(iter: I) -> Self {
        let mut h = SizeHistogram::new();
        for (size, count) in iter {
            *h.0.entry(size).or_insert(0) += count;
        }
        h
    }
}

impl fmt::Display for SizeHistogram {
    /// One `size: count` line per size, ascending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (size, count) in self.iter() {
            writeln!(f, "{size}: {count}")?;
        }
        Ok(())
    }
}

impl FromStr for SizeHistogram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |line: &str| Error::CodeString(line.to_string(), "expected 'size: count'");
        s.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|line| {
                let (size, count) = line.split_once(':').ok_or_else(|| bad(line))?;
                let size = size.trim().parse().map_err(|_| bad(line))?;
                let count = count.trim().parse().map_err(|_| bad(line))?;
                Ok((size, count))
            })
            .collect()
    }
}

/// Histogram of full-domain sizes over a stream of complete assignments.
pub fn histogram<'a>(leaves: impl IntoIterator<Item = &'a ConditionAssignment>) -> Result<SizeHistogram> {
    let mut h = SizeHistogram::new();
    for leaf in leaves {
        h.add(domain_size(leaf)?);
    }
    Ok(h)
}
