//! Exhaustive search for additive decompositions `Q = A + B`.
//!
//! Candidate sets `A` are grown depth-first in increasing element order while
//! `B* = B*(A) = ∩_{a∈A} (Q - a)` is maintained with one AND per extension.
//! Every decomposition `(A, B)` has `B ⊆ B*(A)` and hence `A + B*(A) = Q`,
//! so a node is a hit exactly when `sumset(A, B*) = Q`.
//!
//! Certificates are always closed pairs: `B = B*(A)` and `A = A*(B)`, where
//! `A*(B)` is the dual intersection. Closing a hit keeps it a decomposition.
//! `N(q)` counts ordered pairs `(A, B)`; `(A, A)` is counted once.

mod counting;
mod naive;
mod shkredov;
mod symmetry;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Element, Field};
use crate::set::{is_decomposition, sumset_unchecked, ElementSet, ResidueShifts};

pub use counting::{covering_subsets_by_size, DEFAULT_COUNT_LIMIT, DIRECT_ENUMERATION_LIMIT};
pub use naive::{count_by_size, naive_search, ORACLE_MAX_ORDER};
pub use shkredov::shkredov_search;
pub use symmetry::{is_canonical, scaling_images, scaling_orbit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Stop at the first decomposition.
    Decide,
    /// All closed pairs `(A, B*(A))`.
    EnumerateMaximal,
    /// Closed pairs plus the exact number of ordered pairs.
    CountAll,
    /// Sets `A` with `A + A = Q`.
    Shkredov,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Decide => "decide",
            Mode::EnumerateMaximal => "enumerate-maximal",
            Mode::CountAll => "count-all",
            Mode::Shkredov => "shkredov",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "decide" => Ok(Mode::Decide),
            "enumerate-maximal" => Ok(Mode::EnumerateMaximal),
            "count-all" => Ok(Mode::CountAll),
            "shkredov" => Ok(Mode::Shkredov),
            other => Err(Error::Domain(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Reject `(A, B*)` with `#A + #B* - 1 > #Q` (prime fields only).
    pub use_cauchy_davenport: bool,
    /// Cap `#A` at `⌈√p ln p⌉` (prime fields only).
    pub use_sarkozy_window: bool,
    /// Restrict extensions to `U(V)` for residue-forced elements `V` of `B`.
    pub use_filter_pruning: bool,
    /// Evaluate only scaling-canonical `A` and expand orbits afterwards.
    pub symmetry_reduction: bool,
    pub mode: Mode,
    /// Largest `#B*` counted by direct subset enumeration.
    pub enumeration_limit: usize,
    /// Largest `#Q` for which inclusion-exclusion counting is attempted.
    pub count_limit: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            use_cauchy_davenport: true,
            use_sarkozy_window: false,
            use_filter_pruning: true,
            symmetry_reduction: false,
            mode: Mode::Decide,
            enumeration_limit: DIRECT_ENUMERATION_LIMIT,
            count_limit: DEFAULT_COUNT_LIMIT,
        }
    }
}

impl SearchConfig {
    pub fn with_mode(mode: Mode) -> Self {
        SearchConfig {
            mode,
            ..Self::default()
        }
    }

    /// All switches off.
    pub fn unpruned(mode: Mode) -> Self {
        SearchConfig {
            use_cauchy_davenport: false,
            use_sarkozy_window: false,
            use_filter_pruning: false,
            symmetry_reduction: false,
            mode,
            enumeration_limit: DIRECT_ENUMERATION_LIMIT,
            count_limit: DEFAULT_COUNT_LIMIT,
        }
    }

    /// The 16 combinations of the four pruning switches.
    pub fn all_flag_combinations(mode: Mode) -> Vec<SearchConfig> {
        (0..16u8)
            .map(|bits| SearchConfig {
                use_cauchy_davenport: bits & 1 != 0,
                use_sarkozy_window: bits & 2 != 0,
                use_filter_pruning: bits & 4 != 0,
                symmetry_reduction: bits & 8 != 0,
                mode,
                enumeration_limit: DIRECT_ENUMERATION_LIMIT,
                count_limit: DEFAULT_COUNT_LIMIT,
            })
            .collect()
    }

    /// Cauchy-Davenport only holds in prime fields.
    pub fn effective(mut self, field: &Field) -> Self {
        if !field.is_prime_field() {
            self.use_cauchy_davenport = false;
        }
        self
    }
}

/// `⌈√p ln p⌉`, the largest admissible `#A` in a decomposition modulo `p`.
pub fn sarkozy_cap(p: u32) -> usize {
    let p = p as f64;
    (p.sqrt() * p.ln()).ceil() as usize
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionCertificate {
    pub q: u32,
    pub a: ElementSet,
    pub b: ElementSet,
    /// `is_decomposition` recomputed from scratch at creation.
    pub verified: bool,
}

impl DecompositionCertificate {
    pub fn new(field: &Field, a: ElementSet, b: ElementSet) -> Self {
        let verified = is_decomposition(field, &a, &b).unwrap_or(false);
        DecompositionCertificate {
            q: field.q(),
            a,
            b,
            verified,
        }
    }
}

/// Pruning rules, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Extension would leave `#B* < 2`.
    BStar,
    /// `A ∪ candidates` cannot cover `Q`.
    Coverage,
    Window,
    Filter,
    CauchyDavenport,
    /// Node evaluation skipped as non-canonical.
    Symmetry,
    /// Counting exceeded the configured limit (result is partial).
    CountLimit,
}

impl Rule {
    const ALL: [Rule; 7] = [
        Rule::BStar,
        Rule::Coverage,
        Rule::Window,
        Rule::Filter,
        Rule::CauchyDavenport,
        Rule::Symmetry,
        Rule::CountLimit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::BStar => "bstar_lt_2",
            Rule::Coverage => "coverage",
            Rule::Window => "sarkozy_window",
            Rule::Filter => "filter",
            Rule::CauchyDavenport => "cauchy_davenport",
            Rule::Symmetry => "symmetry",
            Rule::CountLimit => "count_limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub q: u32,
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
    pub config: SearchConfig,
    /// Sorted; empty means none found.
    pub certificates: Vec<DecompositionCertificate>,
    /// Exact `N(q)` (count-all and shkredov modes).
    pub n_q: Option<u64>,
    /// `(#A, #B) -> count` (count-all mode).
    pub counts_by_size: BTreeMap<(usize, usize), u64>,
    pub nodes_explored: u64,
    pub pruned_by: BTreeMap<String, u64>,
    /// Set when some count was skipped for exceeding the counting limit.
    pub partial: bool,
    pub notes: Vec<String>,
    pub wall_ms: u64,
}

impl SearchReport {
    pub(crate) fn new(field: &Field, config: SearchConfig) -> Self {
        SearchReport {
            q: field.q(),
            p: field.p(),
            n: field.n(),
            modulus: field.modulus().to_vec(),
            config,
            certificates: Vec::new(),
            n_q: None,
            counts_by_size: BTreeMap::new(),
            nodes_explored: 0,
            pruned_by: BTreeMap::new(),
            partial: false,
            notes: Vec::new(),
            wall_ms: 0,
        }
    }

    pub fn none_found(&self) -> bool {
        self.certificates.is_empty()
    }

    /// `N(k, m, q)` from a count-all report.
    pub fn count_for(&self, k: usize, m: usize) -> u64 {
        self.counts_by_size.get(&(k, m)).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone)]
struct Node {
    a: ElementSet,
    size: usize,
    bstar: ElementSet,
    cands: Vec<Element>,
    /// Pool size at the last coverage check on this path.
    last_checked: Option<usize>,
}

#[derive(Debug, Default)]
struct Tally {
    nodes: u64,
    pruned: [u64; 7],
    pairs: Vec<(ElementSet, ElementSet)>,
    n_q: u64,
    by_size: BTreeMap<(usize, usize), u64>,
    partial: bool,
    stop: bool,
}

impl Tally {
    fn bump(&mut self, rule: Rule, by: u64) {
        self.pruned[rule as usize] += by;
    }

    fn absorb(&mut self, other: Tally) {
        self.nodes += other.nodes;
        for (x, y) in self.pruned.iter_mut().zip(other.pruned) {
            *x += y;
        }
        self.pairs.extend(other.pairs);
        self.n_q += other.n_q;
        for (k, v) in other.by_size {
            *self.by_size.entry(k).or_default() += v;
        }
        self.partial |= other.partial;
        self.stop |= other.stop;
    }
}

struct Engine<'f> {
    field: &'f Field,
    shifts: ResidueShifts<'f>,
    residues: ElementSet,
    q_len: usize,
    config: SearchConfig,
    window_cap: Option<usize>,
}

impl<'f> Engine<'f> {
    fn new(field: &'f Field, config: SearchConfig) -> Self {
        let shifts = ResidueShifts::new(field);
        let residues = shifts.residues().clone();
        let window_cap =
            (config.use_sarkozy_window && field.is_prime_field()).then(|| sarkozy_cap(field.p()));
        Engine {
            field,
            q_len: residues.len(),
            shifts,
            residues,
            config,
            window_cap,
        }
    }

    fn root(&self, tally: &mut Tally) -> Node {
        let q = self.field.q();
        let bstar = ElementSet::full(q);
        let mut cands = Vec::new();
        for u in 0..q {
            if self.shifts.minus(u).len() >= 2 {
                cands.push(u);
            } else {
                tally.bump(Rule::BStar, 1);
            }
        }
        Node {
            a: ElementSet::empty(q),
            size: 0,
            bstar,
            cands,
            last_checked: None,
        }
    }

    /// `A*(B)`: every `a` with `a + B ⊆ Q`.
    fn closure_of(&self, b: &ElementSet) -> ElementSet {
        self.shifts.intersect_shifts(b)
    }

    fn evaluate(&self, node: &Node, tally: &mut Tally) {
        if node.size < 2 {
            return;
        }
        let b_len = node.bstar.len();
        if self.config.use_cauchy_davenport && node.size + b_len - 1 > self.q_len {
            tally.bump(Rule::CauchyDavenport, 1);
            return;
        }
        if self.config.symmetry_reduction && !is_canonical(self.field, &node.a) {
            tally.bump(Rule::Symmetry, 1);
            return;
        }
        if sumset_unchecked(self.field, &node.a, &node.bstar) != self.residues {
            return;
        }
        let closed = self.closure_of(&node.bstar) == node.a;
        match self.config.mode {
            Mode::Decide => {
                let closure = self.closure_of(&node.bstar);
                tally.pairs.push((closure, node.bstar.clone()));
                tally.stop = true;
            }
            Mode::EnumerateMaximal => {
                if closed {
                    self.record_pair(node, tally);
                }
            }
            Mode::CountAll => {
                let weight = if self.config.symmetry_reduction {
                    scaling_images(self.field, &node.a).len() as u64
                } else {
                    1
                };
                match covering_subsets_by_size(
                    self.field,
                    &self.residues,
                    &node.a,
                    &node.bstar,
                    self.config.enumeration_limit,
                    self.config.count_limit,
                ) {
                    Some(counts) => {
                        for (m, &c) in counts.iter().enumerate().skip(2) {
                            if c > 0 {
                                *tally.by_size.entry((node.size, m)).or_default() += c * weight;
                                tally.n_q += c * weight;
                            }
                        }
                    }
                    None => {
                        tally.partial = true;
                        tally.bump(Rule::CountLimit, 1);
                    }
                }
                if closed {
                    self.record_pair(node, tally);
                }
            }
            Mode::Shkredov => unreachable!("rejected before the search starts"),
        }
    }

    fn record_pair(&self, node: &Node, tally: &mut Tally) {
        if self.config.symmetry_reduction {
            for c in self.residues.iter() {
                let (a, b) = symmetry::scale_pair(self.field, &node.a, &node.bstar, c);
                tally.pairs.push((a, b));
            }
        } else {
            tally.pairs.push((node.a.clone(), node.bstar.clone()));
        }
    }

    /// Residues `y` whose only possible partner in `B*` is a single `b`,
    /// given that `A` can only grow inside `A ∪ candidates`. `None` when
    /// some residue has no possible partner at all.
    fn forced_elements(&self, pool: &ElementSet, bstar: &ElementSet) -> Option<ElementSet> {
        let mut forced = ElementSet::empty(self.field.q());
        for y in self.residues.iter() {
            let mut only = None;
            let mut count = 0;
            for b in bstar.iter() {
                if pool.contains(self.field.sub(y, b)) {
                    count += 1;
                    only = Some(b);
                    if count > 1 {
                        break;
                    }
                }
            }
            match (count, only) {
                (0, _) => return None,
                (1, Some(b)) => forced.insert(b),
                _ => {}
            }
        }
        Some(forced)
    }

    /// Applies the node-level pruning rules and returns the children.
    fn expand(&self, node: &Node, tally: &mut Tally) -> Vec<Node> {
        let cands = &node.cands;
        if cands.is_empty() {
            return Vec::new();
        }
        if let Some(cap) = self.window_cap {
            if node.size >= cap {
                tally.bump(Rule::Window, cands.len() as u64);
                return Vec::new();
            }
        }
        // A child of size k + 1 needs (k + 1) + 2 - 1 <= #Q.
        if self.config.use_cauchy_davenport && node.size + 2 > self.q_len {
            tally.bump(Rule::CauchyDavenport, cands.len() as u64);
            return Vec::new();
        }
        let mut pool = None;
        let mut last_checked = node.last_checked;
        let due = match node.last_checked {
            None => true,
            Some(prev) => cands.len() * 4 <= prev * 3,
        };
        if due {
            let mut p = node.a.clone();
            for &u in cands {
                p.insert(u);
            }
            if !self
                .residues
                .is_subset(&sumset_unchecked(self.field, &p, &node.bstar))
            {
                tally.bump(Rule::Coverage, 1);
                return Vec::new();
            }
            last_checked = Some(cands.len());
            pool = Some(p);
        }
        let mut allowed: Vec<Element> = cands.clone();
        if self.config.use_filter_pruning && node.size >= 2 {
            let pool = pool.unwrap_or_else(|| {
                let mut p = node.a.clone();
                for &u in cands {
                    p.insert(u);
                }
                p
            });
            match self.forced_elements(&pool, &node.bstar) {
                None => {
                    tally.bump(Rule::Coverage, 1);
                    return Vec::new();
                }
                Some(forced) if !forced.is_empty() => {
                    let filter = self.shifts.intersect_shifts(&forced);
                    let before = allowed.len();
                    allowed.retain(|&u| filter.contains(u));
                    tally.bump(Rule::Filter, (before - allowed.len()) as u64);
                }
                Some(_) => {}
            }
        }
        let mut children = Vec::with_capacity(allowed.len());
        for (i, &u) in allowed.iter().enumerate() {
            let mut a = node.a.clone();
            a.insert(u);
            let bstar = node.bstar.and(&self.shifts.minus(u));
            let mut child_cands = Vec::new();
            for &w in &allowed[i + 1..] {
                if bstar.and_count(&self.shifts.minus(w)) >= 2 {
                    child_cands.push(w);
                } else {
                    tally.bump(Rule::BStar, 1);
                }
            }
            children.push(Node {
                a,
                size: node.size + 1,
                bstar,
                cands: child_cands,
                last_checked,
            });
        }
        children
    }

    fn dfs(&self, node: Node, tally: &mut Tally) {
        tally.nodes += 1;
        self.evaluate(&node, tally);
        if tally.stop {
            return;
        }
        for child in self.expand(&node, tally) {
            self.dfs(child, tally);
            if tally.stop {
                return;
            }
        }
    }

    /// Visits the nodes with `#A < 2` and returns the `#A = 2` subtrees as
    /// independent work units, in DFS order.
    fn split(&self, tally: &mut Tally) -> Vec<Node> {
        let root = self.root(tally);
        let mut units = Vec::new();
        tally.nodes += 1;
        for single in self.expand(&root, tally) {
            tally.nodes += 1;
            self.evaluate(&single, tally);
            units.extend(self.expand(&single, tally));
        }
        units
    }
}

/// Runs the pruned search on a pool of `jobs` workers (0 = rayon default).
/// Results, including node counters, do not depend on `jobs`.
pub fn search_with_jobs(field: &Field, config: SearchConfig, jobs: usize) -> Result<SearchReport> {
    let start = Instant::now();
    if config.mode == Mode::Shkredov {
        return Err(Error::Unsupported(
            "use shkredov_search for the A = B case".into(),
        ));
    }
    let config = config.effective(field);
    let engine = Engine::new(field, config);
    let mut tally = Tally::default();
    let units = engine.split(&mut tally);

    let run = || -> Vec<Option<Tally>> {
        let first_hit = AtomicUsize::new(usize::MAX);
        units
            .par_iter()
            .enumerate()
            .map(|(i, unit)| {
                if config.mode == Mode::Decide && i > first_hit.load(Ordering::Acquire) {
                    return None;
                }
                let mut t = Tally::default();
                engine.dfs(unit.clone(), &mut t);
                if t.stop {
                    first_hit.fetch_min(i, Ordering::AcqRel);
                }
                Some(t)
            })
            .collect()
    };
    let results = if jobs == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Domain(format!("worker pool: {e}")))?
            .install(run)
    };
    for t in results {
        // in decide mode everything up to the first hit ran to completion
        let t = t.expect("units before the first hit are never skipped");
        let stop = t.stop;
        tally.absorb(t);
        if stop {
            break;
        }
    }

    let mut report = SearchReport::new(field, config);
    let mut pairs = tally.pairs;
    pairs.sort();
    pairs.dedup();
    report.certificates = pairs
        .into_iter()
        .map(|(a, b)| DecompositionCertificate::new(field, a, b))
        .collect();
    if config.mode == Mode::CountAll {
        report.n_q = Some(tally.n_q);
        report.counts_by_size = tally.by_size;
    }
    report.nodes_explored = tally.nodes;
    report.pruned_by = Rule::ALL
        .iter()
        .map(|&r| (r.name().to_string(), tally.pruned[r as usize]))
        .collect();
    report.partial = tally.partial;
    if engine.window_cap.is_some() {
        report.notes.push(format!(
            "sarkozy window active (#A <= {}); pruning relies on the published size window",
            sarkozy_cap(field.p())
        ));
    } else if config.use_sarkozy_window {
        report
            .notes
            .push("sarkozy window requested but inactive: not a prime field".into());
    }
    if config.use_cauchy_davenport {
        report
            .notes
            .push("cauchy-davenport rejection active (classical theorem for prime fields)".into());
    }
    if report.partial {
        report
            .notes
            .push("counting limit exceeded: n_q is a lower bound".into());
    }
    report.wall_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

pub fn search(field: &Field, config: SearchConfig) -> Result<SearchReport> {
    search_with_jobs(field, config, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn q3_has_no_decomposition() {
        let f = build_field(3, 1).unwrap();
        for mode in [Mode::Decide, Mode::EnumerateMaximal, Mode::CountAll] {
            let r = search(&f, SearchConfig::with_mode(mode)).unwrap();
            assert!(r.none_found());
        }
    }

    #[test]
    fn small_primes_count_zero() {
        for p in [5, 7] {
            let f = build_field(p, 1).unwrap();
            let r = search(&f, SearchConfig::with_mode(Mode::CountAll)).unwrap();
            assert_eq!(r.n_q, Some(0));
            assert!(r.none_found());
        }
    }

    #[test]
    fn shkredov_mode_is_rejected_here() {
        let f = build_field(5, 1).unwrap();
        assert!(search(&f, SearchConfig::with_mode(Mode::Shkredov)).is_err());
    }

    #[test]
    fn f9_has_certificates_and_they_verify() {
        let f = build_field(3, 2).unwrap();
        let r = search(&f, SearchConfig::with_mode(Mode::CountAll)).unwrap();
        assert!(!r.none_found());
        assert!(r.n_q.unwrap() > 0);
        assert!(r.certificates.iter().all(|c| c.verified));
    }

    #[test]
    fn worker_count_does_not_change_reports() {
        let f = build_field(3, 2).unwrap();
        for mode in [Mode::Decide, Mode::CountAll] {
            let mut a = search_with_jobs(&f, SearchConfig::with_mode(mode), 1).unwrap();
            let mut b = search_with_jobs(&f, SearchConfig::with_mode(mode), 4).unwrap();
            a.wall_ms = 0;
            b.wall_ms = 0;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn counting_routes_agree_and_limits_are_reported() {
        let f = build_field(3, 2).unwrap();
        let direct = search(&f, SearchConfig::with_mode(Mode::CountAll)).unwrap();
        let ie = SearchConfig {
            enumeration_limit: 0,
            ..SearchConfig::with_mode(Mode::CountAll)
        };
        let by_ie = search(&f, ie).unwrap();
        assert_eq!(by_ie.counts_by_size, direct.counts_by_size);
        assert_eq!(by_ie.n_q, Some(18));
        let starved = search(
            &f,
            SearchConfig {
                count_limit: 0,
                ..ie
            },
        )
        .unwrap();
        assert!(starved.partial);
        assert!(starved.pruned_by["count_limit"] > 0);
        assert_eq!(starved.certificates, direct.certificates);
    }

    #[test]
    fn cauchy_davenport_forced_off_in_extensions() {
        let f = build_field(3, 2).unwrap();
        assert!(!SearchConfig::default().effective(&f).use_cauchy_davenport);
        let p = build_field(7, 1).unwrap();
        assert!(SearchConfig::default().effective(&p).use_cauchy_davenport);
    }
}
