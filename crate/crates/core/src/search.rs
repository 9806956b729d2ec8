//! Orderly depth-first generation of complete never-condition assignments.
//!
//! Triples are assigned in co-lex order. After each assignment the partial
//! maximality test decides whether the subtree can still contain a canonical
//! leaf; complete assignments pass through the exact canonicity test before
//! they are emitted. The result is one lexicographically maximal
//! representative per isomorphism class of complete assignments over the
//! allowed rule set.
//!
//! By default the search also tracks the orders compatible with the assigned
//! prefix and abandons a node as soon as some triple shows fewer than four
//! patterns. Such a node has no copious completion, so only copious classes
//! are emitted. [`SearchConfig::copious_only`] switches this off.

use std::io;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::condition::RuleSet;
use crate::domain::{expand, is_maximal, PrefixDomains};
use crate::error::{Error, Result};
use crate::iso::LexMaxTester;
use crate::lexcode::ConditionAssignment;
use crate::triple::triple_count;
use crate::{check_alternatives, MAX_ALTERNATIVES};

/// Parameters of a generation run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: usize,
    pub rules: RuleSet,
    /// Prune nodes that cannot complete to a copious domain.
    pub copious_only: bool,
    /// Drop leaves whose full domain is not maximal.
    pub maximal_only: bool,
    pub threads: usize,
}

impl SearchConfig {
    pub fn new(n: usize, rules: RuleSet) -> Self {
        SearchConfig {
            n,
            rules,
            copious_only: true,
            maximal_only: false,
            threads: 1,
        }
    }

    pub fn copious_only(mut self, on: bool) -> Self {
        self.copious_only = on;
        self
    }

    pub fn maximal_only(mut self, on: bool) -> Self {
        self.maximal_only = on;
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_alternatives(self.n)?;
        if self.rules.is_empty() {
            return Err(Error::EmptyRuleSet);
        }
        if self.threads == 0 {
            return Err(Error::InvalidConfig("thread count must be positive".into()));
        }
        Ok(())
    }
}

/// Counters collected during a run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Partial assignments submitted to the partial maximality test.
    pub nodes_visited: u64,
    /// Partial assignments rejected by that test or the copious check.
    pub nodes_pruned: u64,
    pub leaves_emitted: u64,
    /// Complete assignments dropped by the exact test or the maximality filter.
    pub leaves_rejected: u64,
    pub wall_time: Duration,
}

impl SearchStats {
    fn absorb(&mut self, other: &SearchStats) {
        self.nodes_visited += other.nodes_visited;
        self.nodes_pruned += other.nodes_pruned;
        self.leaves_emitted += other.leaves_emitted;
        self.leaves_rejected += other.leaves_rejected;
    }
}

/// Receiver of emitted representatives.
pub trait LeafSink {
    fn accept(&mut self, leaf: &ConditionAssignment) -> io::Result<()>;
}

impl LeafSink for Vec<ConditionAssignment> {
    fn accept(&mut self, leaf: &ConditionAssignment) -> io::Result<()> {
        self.push(leaf.clone());
        Ok(())
    }
}

impl<F> LeafSink for F
where
    F: FnMut(&ConditionAssignment) -> io::Result<()>,
{
    fn accept(&mut self, leaf: &ConditionAssignment) -> io::Result<()> {
        self(leaf)
    }
}

/// Runs the full search, feeding every representative to `sink`.
///
/// With one thread leaves arrive in DFS order as they are found, which is
/// ascending code-string order. With more threads the subtrees below a fixed
/// depth run in parallel and the merged leaves arrive sorted at the end.
pub fn generate<S: LeafSink + ?Sized>(cfg: &SearchConfig, sink: &mut S) -> Result<SearchStats> {
    cfg.validate()?;
    resume(cfg, &ConditionAssignment::empty(cfg.n)?, sink)
}

/// Convenience wrapper collecting the representatives.
pub fn generate_all(cfg: &SearchConfig) -> Result<(Vec<ConditionAssignment>, SearchStats)> {
    let mut leaves = Vec::new();
    let stats = generate(cfg, &mut leaves)?;
    Ok((leaves, stats))
}

/// Runs the search restricted to the subtree rooted at `prefix`.
///
/// The union of the outputs over all nodes returned by [`partition`] at a
/// given depth equals the output of a full run.
pub fn resume<S: LeafSink + ?Sized>(
    cfg: &SearchConfig,
    prefix: &ConditionAssignment,
    sink: &mut S,
) -> Result<SearchStats> {
    cfg.validate()?;
    let start = Instant::now();
    let tester = LexMaxTester::new(cfg.n, cfg.rules)?;
    validate_prefix(&tester, cfg, prefix)?;
    let depth = prefix.prefix_len();

    let mut stats = if cfg.threads <= 1 {
        let mut walker = Walker::new(&tester, cfg, prefix.codes());
        walker.descend(depth, sink)?;
        walker.stats
    } else {
        run_parallel(&tester, cfg, prefix, sink)?
    };
    stats.wall_time = start.elapsed();
    Ok(stats)
}

/// Surviving search nodes at `depth` assigned slots below `prefix`.
pub fn partition(
    cfg: &SearchConfig,
    prefix: &ConditionAssignment,
    depth: usize,
) -> Result<Vec<ConditionAssignment>> {
    cfg.validate()?;
    let tester = LexMaxTester::new(cfg.n, cfg.rules)?;
    validate_prefix(&tester, cfg, prefix)?;
    let depth = depth.clamp(prefix.prefix_len(), triple_count(cfg.n));
    let mut walker = Walker::new(&tester, cfg, prefix.codes());
    let mut nodes = Vec::new();
    walker.collect_frontier(prefix.prefix_len(), depth, &mut nodes);
    Ok(nodes)
}

fn validate_prefix(tester: &LexMaxTester, cfg: &SearchConfig, prefix: &ConditionAssignment) -> Result<()> {
    let invalid = |reason: &str| Error::InvalidPrefix {
        prefix: prefix.encode(),
        reason: reason.to_string(),
    };
    if prefix.n() != tester.n() {
        return Err(invalid("prefix is for a different number of alternatives"));
    }
    if !prefix.is_prefix_shaped() {
        return Err(invalid("assigned triples must form a leading co-lex run"));
    }
    let len = prefix.prefix_len();
    if prefix.codes()[..len]
        .iter()
        .any(|&c| !tester.rules().contains_code(c))
    {
        return Err(invalid("prefix uses a condition outside the rule set"));
    }
    for k in 1..=len {
        if !tester.is_partially_lex_max(prefix.truncated(k).codes()) {
            return Err(invalid("prefix fails the partial maximality test"));
        }
    }
    if cfg.copious_only {
        let mut domains = PrefixDomains::new(cfg.n);
        if !prefix.codes()[..len].iter().all(|&c| domains.push(c)) {
            return Err(invalid("prefix has no copious completion"));
        }
    }
    Ok(())
}

fn run_parallel<S: LeafSink + ?Sized>(
    tester: &LexMaxTester,
    cfg: &SearchConfig,
    prefix: &ConditionAssignment,
    sink: &mut S,
) -> Result<SearchStats> {
    let total = triple_count(cfg.n);
    let start_depth = prefix.prefix_len();
    let target = cfg.threads * 8;

    // Deepen the frontier until there is enough work to spread.
    let mut stats = SearchStats::default();
    let mut frontier = vec![prefix.clone()];
    let mut depth = start_depth;
    while depth < total && frontier.len() < target {
        let mut next = Vec::new();
        for node in &frontier {
            let mut walker = Walker::new(tester, cfg, node.codes());
            walker.collect_frontier(depth, depth + 1, &mut next);
            stats.absorb(&walker.stats);
        }
        frontier = next;
        depth += 1;
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Io(io::Error::other(e)))?;
    let results: Vec<(Vec<ConditionAssignment>, SearchStats)> = pool.install(|| {
        frontier
            .par_iter()
            .map(|node| {
                let mut walker = Walker::new(tester, cfg, node.codes());
                let mut leaves = Vec::new();
                walker
                    .descend(depth, &mut leaves)
                    .expect("collecting into memory cannot fail");
                (leaves, walker.stats)
            })
            .collect()
    });

    let mut leaves = Vec::new();
    for (mut chunk, chunk_stats) in results {
        stats.absorb(&chunk_stats);
        leaves.append(&mut chunk);
    }
    leaves.sort_unstable_by(|a, b| a.codes().cmp(b.codes()));
    for leaf in &leaves {
        sink.accept(leaf)?;
    }
    Ok(stats)
}

struct Walker<'a> {
    tester: &'a LexMaxTester,
    rule_codes: Vec<u8>,
    maximal_only: bool,
    current: ConditionAssignment,
    domains: Option<PrefixDomains>,
    stats: SearchStats,
    /// Depth up to which every prefix passed the partial test.
    passed: usize,
}

impl<'a> Walker<'a> {
    fn new(tester: &'a LexMaxTester, cfg: &SearchConfig, codes: &[u8]) -> Self {
        let current = ConditionAssignment::from_codes(cfg.n, codes.to_vec())
            .expect("codes come from a validated assignment");
        let passed = current.prefix_len();
        let domains = cfg.copious_only.then(|| {
            let mut d = PrefixDomains::new(cfg.n);
            for &c in &codes[..passed] {
                let ok = d.push(c);
                debug_assert!(ok, "prefix was validated");
            }
            d
        });
        Walker {
            tester,
            rule_codes: cfg.rules.codes(),
            maximal_only: cfg.maximal_only,
            current,
            domains,
            stats: SearchStats::default(),
            passed,
        }
    }

    /// Assigns `slot` and reports whether the child survives the partial
    /// test and, if enabled, the copious check.
    fn try_child(&mut self, slot: usize, code: u8) -> bool {
        self.current.set_code(slot, code);
        self.stats.nodes_visited += 1;
        let mut keep = self.tester.is_partially_lex_max(self.current.codes());
        if let Some(domains) = self.domains.as_mut() {
            domains.truncate(slot);
            keep = keep && domains.push(code);
        }
        if !keep {
            self.stats.nodes_pruned += 1;
        }
        keep
    }

    fn descend<S: LeafSink + ?Sized>(&mut self, slot: usize, sink: &mut S) -> io::Result<()> {
        if slot == self.current.len() {
            debug_assert_eq!(self.passed, slot);
            return self.finish_leaf(sink);
        }
        for k in 0..self.rule_codes.len() {
            let code = self.rule_codes[k];
            if self.try_child(slot, code) {
                self.passed = slot + 1;
                self.descend(slot + 1, sink)?;
                self.passed = slot;
            }
        }
        self.current.set_code(slot, 0);
        Ok(())
    }

    fn finish_leaf<S: LeafSink + ?Sized>(&mut self, sink: &mut S) -> io::Result<()> {
        let codes = self.current.codes();
        let mut keep = self.tester.is_canonical_complete(codes);
        if keep && self.maximal_only {
            keep = is_maximal(&expand(&self.current).expect("leaf is complete"));
        }
        if keep {
            self.stats.leaves_emitted += 1;
            sink.accept(&self.current)
        } else {
            self.stats.leaves_rejected += 1;
            Ok(())
        }
    }

    fn collect_frontier(&mut self, slot: usize, depth: usize, out: &mut Vec<ConditionAssignment>) {
        if slot == depth {
            out.push(self.current.clone());
            return;
        }
        for k in 0..self.rule_codes.len() {
            let code = self.rule_codes[k];
            if self.try_child(slot, code) {
                self.collect_frontier(slot + 1, depth, out);
            }
        }
        self.current.set_code(slot, 0);
    }
}

const _: () = assert!(MAX_ALTERNATIVES <= 31, "used-alternative masks are u32");
