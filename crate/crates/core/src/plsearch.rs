//! Backtracking search for linear perfect 2-error-correcting Lee codes.
//!
//! A linear `PL(n, 2)` code exists iff some `phi: Z^n -> G` with
//! `|G| = 2n^2 + 2n + 1` is a bijection on `S_{n,2}`, i.e. iff some tuple
//! `(g_1, ..., g_n)` has a "quad set" `{0, ±g_i, ±g_i ± g_j : i <= j}` of full
//! size `2n^2 + 2n + 1`.
//!
//! Tuples are normalised: each `g_i` is a sign representative (`g <= -g` in
//! index order, `g != 0`) and the tuple is strictly increasing. The search
//! extends a prefix one entry at a time. Adding the `m`-th entry must
//! contribute exactly `4m` new elements to the quad set (`±g_m`, `±2g_m` and
//! `±g_m ± g_i` for `i < m`); a collision means the prefix is already
//! deficient and its subtree is pruned. Candidates already in the quad set of
//! the prefix are skipped without counting as nodes.
//!
//! The membership table is a flat `Vec<bool>` over the group with an undo
//! log, so both insertion and backtracking are O(1) per element.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement};
use crate::lee::sphere_size;

pub const CHECKPOINT_FORMAT_VERSION: u32 = 1;
pub const DEFAULT_CHECKPOINT_EVERY: u64 = 10_000_000;

/// `{±g_i, ±g_i ± g_j : 1 <= i <= j <= m}` (which always contains `0`).
pub fn quad_set(tuple: &[GroupElement], group: &AbelianGroup) -> Result<BTreeSet<GroupElement>> {
    if tuple.is_empty() {
        return Err(Error::InvalidArgument("tuple must be non-empty".into()));
    }
    let mut out = BTreeSet::new();
    for (i, gi) in tuple.iter().enumerate() {
        let ngi = group.neg(gi)?;
        out.insert(gi.clone());
        out.insert(ngi.clone());
        for gj in &tuple[i..] {
            let s = group.add(gi, gj)?;
            let d = group.sub(gi, gj)?;
            out.insert(group.neg(&s)?);
            out.insert(group.neg(&d)?);
            out.insert(s);
            out.insert(d);
        }
    }
    Ok(out)
}

/// True when the quad set of `tuple` is deficient, `|quad_set| < |S_{m,2}|`,
/// so no extension of it can be a bijection on `S_{n,2}`.
pub fn check_condition_n(tuple: &[GroupElement], group: &AbelianGroup) -> Result<bool> {
    let full = sphere_size(tuple.len(), 2)?;
    Ok((quad_set(tuple, group)?.len() as u64) < full)
}

/// `(2n)! / n!`, the crude bound on the number of condition checks.
pub fn node_budget_estimate(n: u64) -> Result<u128> {
    (n + 1..=2 * n).try_fold(1u128, |acc, i| acc.checked_mul(i as u128)).ok_or(Error::Overflow("(2n)!/n!"))
}

/// Inclusive range of first-entry candidates, by element index (for `Z_k`
/// the index is the residue itself).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShardRange {
    pub first: u64,
    pub last: u64,
}

/// Normalised candidates: non-zero sign representatives in index order.
fn candidates(group: &AbelianGroup) -> Vec<usize> {
    (1..group.order() as usize).filter(|&g| g <= group.neg_idx(g)).collect()
}

/// Splits the first-level candidates into at most `parts` contiguous,
/// disjoint ranges that cover all of them.
pub fn shard_plan(group: &AbelianGroup, parts: usize) -> Result<Vec<ShardRange>> {
    if parts == 0 {
        return Err(Error::InvalidArgument("need at least one shard".into()));
    }
    let cands = candidates(group);
    if cands.is_empty() {
        return Err(Error::InvalidArgument(format!("{group} has no non-zero candidates")));
    }
    let parts = parts.min(cands.len());
    let base = cands.len() / parts;
    let extra = cands.len() % parts;
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for i in 0..parts {
        let len = base + usize::from(i < extra);
        out.push(ShardRange { first: cands[start] as u64, last: cands[start + len - 1] as u64 });
        start += len;
    }
    Ok(out)
}

/// Rejects plans whose ranges overlap or miss a candidate.
pub fn validate_plan(group: &AbelianGroup, plan: &[ShardRange]) -> Result<()> {
    let cands = candidates(group);
    let mut owner = vec![0u32; cands.len()];
    for s in plan {
        if s.first > s.last {
            return Err(Error::InvalidArgument(format!("empty shard range {}..={}", s.first, s.last)));
        }
        for (i, &c) in cands.iter().enumerate() {
            if (s.first..=s.last).contains(&(c as u64)) {
                owner[i] += 1;
            }
        }
    }
    if let Some(i) = owner.iter().position(|&o| o != 1) {
        let what = if owner[i] == 0 { "not covered" } else { "covered more than once" };
        return Err(Error::InvalidArgument(format!("candidate {} is {what}", cands[i])));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    NoWitness,
    Witness(Vec<GroupElement>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub nodes_visited: u64,
    pub shard: Option<ShardRange>,
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&[GroupElement]> {
        match &self.verdict {
            Verdict::Witness(w) => Some(w),
            Verdict::NoWitness => None,
        }
    }
}

/// Combines per-shard outcomes: any witness wins (the first one in search
/// order), otherwise no witness; node counts add up.
pub fn merge_outcomes(group: &AbelianGroup, outcomes: &[SearchOutcome]) -> SearchOutcome {
    let nodes_visited = outcomes.iter().map(|o| o.nodes_visited).sum();
    let witness = outcomes
        .iter()
        .filter_map(|o| o.witness())
        .min_by_key(|w| w.iter().map(|g| group.index_of(g).expect("valid witness")).collect::<Vec<_>>());
    SearchOutcome {
        verdict: witness.map_or(Verdict::NoWitness, |w| Verdict::Witness(w.to_vec())),
        nodes_visited,
        shard: None,
    }
}

/// Resumable search state. `frontier` is the next node to visit: every
/// normalised tuple before it in search order has been settled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub n: usize,
    pub group: AbelianGroup,
    pub shard: ShardRange,
    /// Element indices of the prefix, including the candidate at the deepest level.
    pub frontier: Vec<u64>,
    pub nodes_visited: u64,
}

impl Checkpoint {
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_vec_pretty(self)?)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let cp: Checkpoint = serde_json::from_slice(&std::fs::read(path)?)?;
        if cp.format_version != CHECKPOINT_FORMAT_VERSION {
            return Err(Error::Checkpoint(format!("unsupported format version {}", cp.format_version)));
        }
        Ok(cp)
    }
}

/// Limits for a single call to [`Pl2Search::run`].
#[derive(Clone, Copy, Debug)]
pub struct RunLimits {
    /// Emit a checkpoint every this many nodes.
    pub checkpoint_every: u64,
    /// Pause (returning a checkpoint) once this many nodes have been visited
    /// in total.
    pub max_nodes: Option<u64>,
}

impl Default for RunLimits {
    fn default() -> Self {
        RunLimits { checkpoint_every: DEFAULT_CHECKPOINT_EVERY, max_nodes: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    Finished(SearchOutcome),
    Paused(Checkpoint),
}

/// Depth-first search over normalised tuples within one shard.
#[derive(Clone, Debug)]
pub struct Pl2Search {
    n: usize,
    group: AbelianGroup,
    shard: ShardRange,
    cands: Vec<usize>,
    /// Position range of the shard within `cands`.
    first_pos: usize,
    end_pos: usize,
    used: Vec<bool>,
    undo: Vec<usize>,
    /// Undo-log length before each level's insertions.
    marks: Vec<usize>,
    prefix: Vec<usize>,
    pos: Vec<usize>,
    nodes: u64,
    finished: Option<SearchOutcome>,
}

impl Pl2Search {
    pub fn new(n: usize, group: AbelianGroup, shard: Option<ShardRange>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let target = sphere_size(n, 2)?;
        let cands = candidates(&group);
        let shard = match shard {
            Some(s) => {
                if s.first > s.last {
                    return Err(Error::InvalidArgument(format!("empty shard range {}..={}", s.first, s.last)));
                }
                s
            }
            None => ShardRange {
                first: cands.first().map_or(1, |&c| c as u64),
                last: cands.last().map_or(0, |&c| c as u64),
            },
        };
        let first_pos = cands.partition_point(|&c| (c as u64) < shard.first);
        let end_pos = cands.partition_point(|&c| (c as u64) <= shard.last);
        let mut used = vec![false; group.order() as usize];
        used[0] = true;
        let finished = (group.order() != target).then(|| {
            log::warn!("|G| = {} differs from |S_{{{n},2}}| = {target}; no witness is possible", group.order());
            SearchOutcome { verdict: Verdict::NoWitness, nodes_visited: 0, shard: Some(shard) }
        });
        Ok(Pl2Search {
            n,
            shard,
            cands,
            first_pos,
            end_pos,
            used,
            undo: Vec::new(),
            marks: Vec::new(),
            prefix: Vec::new(),
            pos: vec![first_pos],
            nodes: 0,
            finished,
            group,
        })
    }

    /// Rebuilds the search at a checkpoint's frontier.
    pub fn resume(cp: &Checkpoint) -> Result<Self> {
        if cp.format_version != CHECKPOINT_FORMAT_VERSION {
            return Err(Error::Checkpoint(format!("unsupported format version {}", cp.format_version)));
        }
        let mut s = Pl2Search::new(cp.n, cp.group.clone(), Some(cp.shard))?;
        s.nodes = cp.nodes_visited;
        if cp.frontier.is_empty() {
            s.pos = vec![s.end_pos];
            return Ok(s);
        }
        if cp.frontier.len() > cp.n {
            return Err(Error::Checkpoint("frontier longer than n".into()));
        }
        s.pos.clear();
        let mut lo = s.first_pos;
        for (depth, &g) in cp.frontier.iter().enumerate() {
            let p = s
                .cands
                .binary_search(&(g as usize))
                .map_err(|_| Error::Checkpoint(format!("{g} is not a normalised candidate")))?;
            let hi = if depth == 0 { s.end_pos } else { s.cands.len() };
            if p < lo || p >= hi {
                return Err(Error::Checkpoint(format!("frontier entry {g} out of order or outside the shard")));
            }
            s.pos.push(p);
            if depth + 1 < cp.frontier.len() && !s.push(g as usize) {
                return Err(Error::Checkpoint("frontier prefix is deficient".into()));
            }
            lo = p + 1;
        }
        Ok(s)
    }

    pub fn nodes_visited(&self) -> u64 {
        self.nodes
    }

    pub fn checkpoint(&self) -> Checkpoint {
        let mut frontier: Vec<u64> = self.prefix.iter().map(|&g| g as u64).collect();
        if let Some(&p) = self.pos.last() {
            if p < self.level_end(self.pos.len() - 1) {
                frontier.push(self.cands[p] as u64);
            }
        }
        Checkpoint {
            format_version: CHECKPOINT_FORMAT_VERSION,
            n: self.n,
            group: self.group.clone(),
            shard: self.shard,
            frontier,
            nodes_visited: self.nodes,
        }
    }

    fn level_end(&self, depth: usize) -> usize {
        if depth == 0 {
            self.end_pos
        } else {
            self.cands.len()
        }
    }

    /// Inserts the elements contributed by `g`; on a collision rolls back and
    /// returns false.
    fn push(&mut self, g: usize) -> bool {
        let mark = self.undo.len();
        let group = &self.group;
        let ng = group.neg_idx(g);
        let g2 = group.add_idx(g, g);
        let mut fresh = [g, ng, g2, group.neg_idx(g2)].into_iter().chain(self.prefix.iter().flat_map(|&h| {
            let s = group.add_idx(g, h);
            let d = group.add_idx(g, group.neg_idx(h));
            [s, group.neg_idx(s), d, group.neg_idx(d)]
        }));
        let ok = fresh.all(|x| {
            if self.used[x] {
                false
            } else {
                self.used[x] = true;
                self.undo.push(x);
                true
            }
        });
        if !ok {
            for x in self.undo.drain(mark..) {
                self.used[x] = false;
            }
            return false;
        }
        self.marks.push(mark);
        self.prefix.push(g);
        true
    }

    fn pop(&mut self) {
        let mark = self.marks.pop().expect("pop on empty prefix");
        for x in self.undo.drain(mark..) {
            self.used[x] = false;
        }
        self.prefix.pop();
    }

    /// Runs until the shard is exhausted, a witness is found, or
    /// `limits.max_nodes` is reached. `on_checkpoint` is called every
    /// `limits.checkpoint_every` nodes.
    pub fn run(
        &mut self,
        limits: RunLimits,
        mut on_checkpoint: impl FnMut(&Checkpoint) -> Result<()>,
    ) -> Result<SearchStatus> {
        if let Some(done) = &self.finished {
            return Ok(SearchStatus::Finished(done.clone()));
        }
        let every = limits.checkpoint_every.max(1);
        loop {
            let depth = self.pos.len() - 1;
            let p = self.pos[depth];
            if p >= self.level_end(depth) {
                if depth == 0 {
                    return Ok(self.finish(Verdict::NoWitness));
                }
                self.pos.pop();
                self.pop();
                *self.pos.last_mut().expect("non-empty") += 1;
                continue;
            }
            let g = self.cands[p];
            if self.used[g] {
                self.pos[depth] += 1;
                continue;
            }
            if limits.max_nodes.is_some_and(|m| self.nodes >= m) {
                return Ok(SearchStatus::Paused(self.checkpoint()));
            }
            if self.nodes > 0 && self.nodes.is_multiple_of(every) {
                on_checkpoint(&self.checkpoint())?;
            }
            self.nodes += 1;
            if !self.push(g) {
                self.pos[depth] += 1;
                continue;
            }
            if self.prefix.len() == self.n {
                let witness = self.prefix.iter().map(|&x| self.group.element_at(x)).collect();
                return Ok(self.finish(Verdict::Witness(witness)));
            }
            self.pos.push(p + 1);
        }
    }

    fn finish(&mut self, verdict: Verdict) -> SearchStatus {
        let outcome = SearchOutcome { verdict, nodes_visited: self.nodes, shard: Some(self.shard) };
        self.finished = Some(outcome.clone());
        SearchStatus::Finished(outcome)
    }
}

/// Runs the search on one shard (or everything) to completion.
pub fn backtrack_pl2(n: usize, group: &AbelianGroup, shard: Option<ShardRange>) -> Result<SearchOutcome> {
    let mut search = Pl2Search::new(n, group.clone(), shard)?;
    match search.run(RunLimits::default(), |_| Ok(()))? {
        SearchStatus::Finished(o) => Ok(o),
        SearchStatus::Paused(_) => unreachable!("no node limit was set"),
    }
}

/// Runs every shard of a validated plan and merges the verdicts.
pub fn backtrack_pl2_sharded(n: usize, group: &AbelianGroup, plan: &[ShardRange]) -> Result<SearchOutcome> {
    validate_plan(group, plan)?;
    #[cfg(feature = "parallel")]
    let outcomes: Vec<SearchOutcome> = {
        use rayon::prelude::*;
        plan.par_iter().map(|&s| backtrack_pl2(n, group, Some(s))).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<SearchOutcome> = plan.iter().map(|&s| backtrack_pl2(n, group, Some(s))).collect::<Result<_>>()?;
    Ok(merge_outcomes(group, &outcomes))
}

/// Machine-readable record of an exhausted search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonExistenceCertificate {
    pub n: usize,
    pub group: AbelianGroup,
    pub sphere_size: u64,
    pub normalization: String,
    pub shards: Vec<ShardRange>,
    pub nodes_visited: u64,
}

impl NonExistenceCertificate {
    pub fn new(n: usize, group: &AbelianGroup, shards: Vec<ShardRange>, nodes_visited: u64) -> Result<Self> {
        Ok(NonExistenceCertificate {
            n,
            group: group.clone(),
            sphere_size: sphere_size(n, 2)?,
            normalization: "each g_i is a non-zero element with index(g_i) <= index(-g_i); \
                            g_1 < g_2 < ... < g_n by index; g_m is skipped when it lies in the \
                            quad set of (g_1..g_{m-1}); a prefix whose quad set is smaller than \
                            |S_{m,2}| is pruned"
                .into(),
            shards,
            nodes_visited,
        })
    }
}
