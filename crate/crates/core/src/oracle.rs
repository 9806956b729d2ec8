//! Brute-force reference for the generator.
//!
//! Every complete assignment over the rule set is enumerated and grouped into
//! orbits under all `n!` relabelings. The relabeling of triples and
//! conditions is written out again here from its definition rather than
//! borrowed from the `iso` module, so the two can be checked against each
//! other.

use std::collections::BTreeSet;

use crate::condition::RuleSet;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::lexcode::ConditionAssignment;
use crate::order::LinearOrder;
use crate::search::{generate_all, SearchConfig};
use crate::triple::{triple_at, triple_count, triple_index, Triple};
use crate::{check_alternatives, Alternative};

/// Largest number of assignments the oracle will enumerate.
pub const ORACLE_BOUND: u128 = 1_000_000_000;

/// One isomorphism class found by exhaustion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    /// Lexicographically largest member.
    pub canonical: ConditionAssignment,
    pub orbit_size: usize,
    /// Relabelings fixing `canonical`.
    pub stabilizer_size: usize,
    /// Relabelings whose image of `canonical` stays inside the rule set.
    pub admissible: usize,
    /// Number of classes in the whole enumeration.
    pub class_count: usize,
}

/// Every permutation of `1..=n` as an image vector, by Heap's algorithm.
fn all_relabelings(n: usize) -> Vec<Vec<Alternative>> {
    let mut current: Vec<Alternative> = (1..=n as Alternative).collect();
    let mut counters = vec![0usize; n];
    let mut out = vec![current.clone()];
    let mut i = 0;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                current.swap(0, i);
            } else {
                current.swap(counters[i], i);
            }
            out.push(current.clone());
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    out
}

/// Image of a whole assignment under `psi` (`psi[x-1]` is the image of `x`),
/// or `None` if some induced condition is not in `rules`.
///
/// The condition `xNy` on `T1` becomes `(index(T2, psi(T1[x-1])) + 1)Ny` on
/// `T2 = sort(psi(T1))`.
fn relabel(codes: &[u8], n: usize, psi: &[Alternative], rules: RuleSet) -> Option<Vec<u8>> {
    const CELLS: [(u8, u8); 7] = [(0, 0), (1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)];
    let mut out = vec![0u8; codes.len()];
    for (k, &code) in codes.iter().enumerate() {
        if code == 0 {
            continue;
        }
        let t1 = triple_at(k, n).expect("slot in range").elements();
        let mut t2 = [psi[t1[0] as usize - 1], psi[t1[1] as usize - 1], psi[t1[2] as usize - 1]];
        t2.sort_unstable();
        let (x, y) = CELLS[code as usize];
        let moved = psi[t1[x as usize - 1] as usize - 1];
        let new_x = t2.iter().position(|&e| e == moved).expect("moved element is in T2") as u8 + 1;
        let new_code = CELLS.iter().position(|&cell| cell == (new_x, y))? as u8;
        if new_code == 0 || !rules.contains_code(new_code) {
            return None;
        }
        let slot = triple_index(Triple::new(t2[0], t2[1], t2[2], n).ok()?, n).ok()?;
        out[slot] = new_code;
    }
    Some(out)
}

/// Number of complete assignments drawing every code from `rules`.
pub fn assignment_count(n: usize, rules: RuleSet) -> u128 {
    (rules.len() as u128).saturating_pow(triple_count(n) as u32)
}

/// All orbits of complete assignments over `rules`, ordered by canonical code string.
pub fn brute_force_orbits(n: usize, rules: RuleSet) -> Result<Vec<OrbitReport>> {
    check_alternatives(n)?;
    let count = assignment_count(n, rules);
    if count > ORACLE_BOUND {
        return Err(Error::OracleTooLarge {
            count,
            bound: ORACLE_BOUND,
        });
    }
    let slots = triple_count(n);
    let alphabet = rules.codes();
    let relabelings = all_relabelings(n);

    // One bit per assignment, indexed by its digits in base |R|.
    let mut classified = vec![0u64; (count as usize).div_ceil(64)];
    let index_of = |codes: &[u8]| {
        codes.iter().fold(0usize, |acc, &c| {
            acc * alphabet.len() + alphabet.iter().position(|&a| a == c).expect("code in rules")
        })
    };
    let mut index = 0usize;
    let mut reports = Vec::new();
    let mut digits = vec![0usize; slots];
    loop {
        let codes: Vec<u8> = digits.iter().map(|&d| alphabet[d]).collect();
        if classified[index / 64] & (1 << (index % 64)) == 0 {
            let mut orbit = BTreeSet::new();
            let mut admissible = 0;
            let mut stabilizer = 0;
            for psi in &relabelings {
                if let Some(image) = relabel(&codes, n, psi, rules) {
                    admissible += 1;
                    if image == codes {
                        stabilizer += 1;
                    }
                    orbit.insert(image);
                }
            }
            let canonical = orbit.iter().next_back().expect("identity image").clone();
            let orbit_size = orbit.len();
            for member in &orbit {
                let k = index_of(member);
                classified[k / 64] |= 1 << (k % 64);
            }
            reports.push(OrbitReport {
                canonical: ConditionAssignment::from_codes(n, canonical)?,
                orbit_size,
                stabilizer_size: stabilizer,
                admissible,
                class_count: 0,
            });
        }
        // Odometer step.
        index += 1;
        let mut pos = slots;
        loop {
            if pos == 0 {
                let class_count = reports.len();
                for r in &mut reports {
                    r.class_count = class_count;
                }
                reports.sort_by(|a, b| a.canonical.codes().cmp(b.canonical.codes()));
                return Ok(reports);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < alphabet.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Canonical representative of every class, by exhaustion.
pub fn brute_force_classes(n: usize, rules: RuleSet) -> Result<BTreeSet<ConditionAssignment>> {
    Ok(brute_force_orbits(n, rules)?
        .into_iter()
        .map(|r| r.canonical)
        .collect())
}

/// Every member of the orbit of a complete assignment within `rules`.
pub fn orbit_of(n: &ConditionAssignment, rules: RuleSet) -> BTreeSet<ConditionAssignment> {
    all_relabelings(n.n())
        .iter()
        .filter_map(|psi| relabel(n.codes(), n.n(), psi, rules))
        .map(|codes| ConditionAssignment::from_codes(n.n(), codes).expect("valid codes"))
        .collect()
}

/// Outcome of comparing the generator with the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub n: usize,
    pub rules: RuleSet,
    pub oracle_classes: usize,
    pub generated: usize,
    /// Code strings emitted more than once by the generator.
    pub duplicates: Vec<String>,
    /// Classes the oracle found but the generator did not emit.
    pub missing: Vec<String>,
    /// Emitted code strings that are not oracle representatives.
    pub unexpected: Vec<String>,
}

impl CrossCheck {
    pub fn is_equal(&self) -> bool {
        self.duplicates.is_empty() && self.missing.is_empty() && self.unexpected.is_empty()
    }
}

/// Runs both the oracle and the orderly generator and compares their outputs.
///
/// With `copious_only` the oracle keeps the classes whose domain, built by
/// filtering all `n!` orders, shows four patterns on every triple, and the
/// generator runs with copious pruning; otherwise both cover every class.
pub fn cross_check(n: usize, rules: RuleSet, copious_only: bool) -> Result<CrossCheck> {
    let mut oracle = BTreeSet::new();
    for class in brute_force_classes(n, rules)? {
        if !copious_only || has_four_patterns_everywhere(&filter_all_orders(&class)?) {
            oracle.insert(class.encode());
        }
    }
    let cfg = SearchConfig::new(n, rules).copious_only(copious_only);
    let (leaves, _) = generate_all(&cfg)?;
    let mut generated = BTreeSet::new();
    let mut duplicates = Vec::new();
    for leaf in &leaves {
        let code = leaf.encode();
        if !generated.insert(code.clone()) {
            duplicates.push(code);
        }
    }
    Ok(CrossCheck {
        n,
        rules,
        oracle_classes: oracle.len(),
        generated: leaves.len(),
        duplicates,
        missing: oracle.difference(&generated).cloned().collect(),
        unexpected: generated.difference(&oracle).cloned().collect(),
    })
}

/// Pattern count per triple, computed from the orders directly.
fn has_four_patterns_everywhere(d: &Domain) -> bool {
    (0..triple_count(d.n())).all(|k| {
        let t = triple_at(k, d.n()).expect("slot in range");
        let seen: BTreeSet<Vec<Alternative>> = d
            .orders()
            .iter()
            .map(|o| {
                o.as_slice()
                    .iter()
                    .copied()
                    .filter(|x| t.elements().contains(x))
                    .collect()
            })
            .collect();
        seen.len() == 4
    })
}

/// Full domain by filtering all `n!` orders; the reference for `expand`.
pub fn filter_all_orders(n: &ConditionAssignment) -> Result<Domain> {
    let orders = all_relabelings(n.n())
        .into_iter()
        .map(LinearOrder::new)
        .collect::<Result<Vec<_>>>()?;
    let kept = orders
        .into_iter()
        .filter(|o| n.assigned().all(|(t, c)| o.satisfies(t, c)));
    Domain::new(n.n(), kept)
}
