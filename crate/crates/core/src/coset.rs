//! Todd-Coxeter coset enumeration.
//!
//! The table stores, for every coset and every generator or inverse
//! generator, the image coset or [`NONE`]. Coincidences are resolved with a
//! union-find forest whose roots are always the smaller coset number, so
//! coset 0 (the subgroup itself) is never merged away. Queued coincidences
//! are processed to exhaustion before any new coset is defined.
//!
//! Three strategies are offered:
//!
//! * `Hlt` scans every relator at every coset in order, defining cosets as
//!   needed (Haselgrove-Leech-Trotter).
//! * `HltLookahead` is `Hlt`, but when the coset limit is hit it first scans
//!   all live cosets without defining anything, collects the resulting
//!   coincidences, compacts, and carries on if room was freed.
//! * `Felsch` defines one coset at a time, always the first undefined entry,
//!   and immediately propagates every deduction through all cyclic
//!   conjugates of the relators.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentation::Presentation;
use crate::word::Word;

pub const NONE: u32 = u32::MAX;

/// Coset limit used when the caller does not choose one.
pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "HLT")]
    Hlt,
    #[default]
    #[serde(rename = "HLT-lookahead")]
    HltLookahead,
    #[serde(rename = "Felsch")]
    Felsch,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Hlt, Strategy::HltLookahead, Strategy::Felsch];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Hlt => "HLT",
            Strategy::HltLookahead => "HLT-lookahead",
            Strategy::Felsch => "Felsch",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hlt" => Ok(Strategy::Hlt),
            "hlt-lookahead" | "lookahead" => Ok(Strategy::HltLookahead),
            "felsch" => Ok(Strategy::Felsch),
            _ => Err(format!("unknown strategy `{s}` (expected hlt, hlt-lookahead or felsch)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnumerationStatus {
    Completed,
    LimitExceeded,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CosetError {
    #[error("word uses generator `{0}` which is not in the presentation")]
    UnknownGenerator(String),
    #[error("coset table is incomplete")]
    Incomplete,
    #[error("max_cosets must be at least 1")]
    ZeroLimit,
}

/// Outcome and statistics of one enumeration.
#[derive(Clone, Debug, Serialize)]
pub struct EnumerationResult {
    pub status: EnumerationStatus,
    /// Subgroup index; present iff the enumeration completed.
    pub index: Option<usize>,
    pub cosets_defined_total: usize,
    pub cosets_live_max: usize,
    #[serde(rename = "coincidences")]
    pub coincidences_processed: usize,
    pub strategy: Strategy,
    pub elapsed_ms: u128,
    /// The completed, canonically numbered table.
    #[serde(skip)]
    pub table: Option<CosetTable>,
}

impl EnumerationResult {
    pub fn is_completed(&self) -> bool {
        self.status == EnumerationStatus::Completed
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("enumeration JSON is infallible")
    }
}

/// Converts a word into table columns: generator `i` is column `2i`, its
/// inverse column `2i + 1`.
pub(crate) fn word_columns(p: &Presentation, w: &Word) -> Result<Vec<usize>, CosetError> {
    w.letters()
        .iter()
        .map(|l| {
            let g = p
                .generator_index(l.generator())
                .ok_or_else(|| CosetError::UnknownGenerator(l.generator().name().to_string()))?;
            Ok(2 * g + usize::from(l.exponent() < 0))
        })
        .collect()
}

#[inline]
fn inv(col: usize) -> usize {
    col ^ 1
}

/// A (partial) coset table. After a completed enumeration every entry is
/// defined, cosets are numbered `0..index` breadth-first from the subgroup
/// coset, and every relator closes at every coset.
#[derive(Clone, PartialEq, Eq)]
pub struct CosetTable {
    cols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
}

impl CosetTable {
    fn new(ngens: usize) -> Self {
        let cols = 2 * ngens;
        CosetTable { cols, table: vec![NONE; cols], parent: vec![0] }
    }

    /// Number of allocated rows, live or dead.
    fn len(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn get(&self, c: usize, x: usize) -> u32 {
        self.table[c * self.cols + x]
    }

    #[inline]
    fn set(&mut self, c: usize, x: usize, v: u32) {
        self.table[c * self.cols + x] = v;
    }

    #[inline]
    fn is_live(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    pub fn num_generators(&self) -> usize {
        self.cols / 2
    }

    /// Live cosets.
    pub fn num_cosets(&self) -> usize {
        (0..self.len()).filter(|&c| self.is_live(c)).count()
    }

    /// Image of coset `c` under column `col`.
    pub fn entry(&self, c: usize, col: usize) -> Option<usize> {
        let v = self.get(c, col);
        (v != NONE).then_some(v as usize)
    }

    pub fn is_complete(&self) -> bool {
        (0..self.len()).filter(|&c| self.is_live(c)).all(|c| (0..self.cols).all(|x| self.get(c, x) != NONE))
    }

    /// `entry(c, x) = d` implies `entry(d, x^-1) = c`, over live cosets.
    pub fn is_involution_consistent(&self) -> bool {
        (0..self.len()).filter(|&c| self.is_live(c)).all(|c| {
            (0..self.cols).all(|x| {
                let d = self.get(c, x);
                d == NONE || (self.is_live(d as usize) && self.get(d as usize, inv(x)) as usize == c)
            })
        })
    }

    /// True when every relator traces a closed loop at every coset.
    pub fn relators_close(&self, p: &Presentation) -> bool {
        let Ok(rels) = p.relators().iter().map(|r| word_columns(p, r)).collect::<Result<Vec<_>, _>>() else {
            return false;
        };
        (0..self.len()).filter(|&c| self.is_live(c)).all(|c| {
            rels.iter().all(|r| {
                let mut cur = c;
                for &x in r {
                    let n = self.get(cur, x);
                    if n == NONE {
                        return false;
                    }
                    cur = n as usize;
                }
                cur == c
            })
        })
    }

    /// Renumbers live cosets breadth-first from coset 0, scanning columns in
    /// generator order, and drops dead rows.
    fn canonicalize(&mut self) {
        let n = self.len();
        let mut order: Vec<usize> = Vec::with_capacity(n);
        let mut newnum = vec![NONE; n];
        newnum[0] = 0;
        order.push(0);
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            head += 1;
            for x in 0..self.cols {
                let d = self.get(c, x);
                if d != NONE && newnum[d as usize] == NONE {
                    newnum[d as usize] = order.len() as u32;
                    order.push(d as usize);
                }
            }
        }
        let mut table = Vec::with_capacity(order.len() * self.cols);
        for &c in &order {
            for x in 0..self.cols {
                let d = self.get(c, x);
                table.push(if d == NONE { NONE } else { newnum[d as usize] });
            }
        }
        self.table = table;
        self.parent = (0..order.len() as u32).collect();
    }
}

impl fmt::Debug for CosetTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CosetTable ({} live)", self.num_cosets())?;
        for c in (0..self.len()).filter(|&c| self.is_live(c)) {
            let row: Vec<String> = (0..self.cols)
                .map(|x| match self.get(c, x) {
                    NONE => "-".to_string(),
                    d => d.to_string(),
                })
                .collect();
            writeln!(f, "{c:>6}: {}", row.join(" "))?;
        }
        Ok(())
    }
}

/// A permutation of cosets, as the image of each coset.
pub type Permutation = Vec<usize>;

/// The right action of `w` on the cosets of a complete table.
pub fn permutation_action(p: &Presentation, table: &CosetTable, w: &Word) -> Result<Permutation, CosetError> {
    if !table.is_complete() {
        return Err(CosetError::Incomplete);
    }
    let cols = word_columns(p, w)?;
    let live: Vec<usize> = (0..table.len()).filter(|&c| table.is_live(c)).collect();
    Ok(live
        .iter()
        .map(|&c| cols.iter().fold(c, |cur, &x| table.get(cur, x) as usize))
        .collect())
}

struct Full;

struct Enumerator {
    t: CosetTable,
    live: usize,
    max_cosets: usize,
    defined_total: usize,
    live_max: usize,
    coincidences: usize,
    queue: Vec<usize>,
    track_deductions: bool,
    deductions: Vec<(u32, u32)>,
}

impl Enumerator {
    fn new(ngens: usize, max_cosets: usize, track_deductions: bool) -> Self {
        Enumerator {
            t: CosetTable::new(ngens),
            live: 1,
            max_cosets,
            defined_total: 1,
            live_max: 1,
            coincidences: 0,
            queue: Vec::new(),
            track_deductions,
            deductions: Vec::new(),
        }
    }

    fn define(&mut self, c: usize, x: usize) -> Result<usize, Full> {
        if self.live >= self.max_cosets {
            return Err(Full);
        }
        let d = self.t.len();
        self.t.parent.push(d as u32);
        self.t.table.extend(std::iter::repeat_n(NONE, self.t.cols));
        self.t.set(c, x, d as u32);
        self.t.set(d, inv(x), c as u32);
        self.live += 1;
        self.defined_total += 1;
        self.live_max = self.live_max.max(self.live);
        if self.track_deductions {
            self.deductions.push((c as u32, x as u32));
        }
        Ok(d)
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.t.parent[root] as usize != root {
            root = self.t.parent[root] as usize;
        }
        let mut cur = c;
        while self.t.parent[cur] as usize != root {
            let next = self.t.parent[cur] as usize;
            self.t.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    fn merge(&mut self, a: usize, b: usize) {
        let ra = self.rep(a);
        let rb = self.rep(b);
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.t.parent[hi] = lo as u32;
            self.queue.push(hi);
            self.live -= 1;
            self.coincidences += 1;
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let dead = self.queue[i];
            i += 1;
            for x in 0..self.t.cols {
                let d = self.t.get(dead, x);
                if d == NONE {
                    continue;
                }
                let d = d as usize;
                self.t.set(d, inv(x), NONE);
                let mu = self.rep(dead);
                let nu = self.rep(d);
                let mux = self.t.get(mu, x);
                if mux != NONE {
                    self.merge(nu, mux as usize);
                } else {
                    let nux = self.t.get(nu, inv(x));
                    if nux != NONE {
                        self.merge(mu, nux as usize);
                    } else {
                        self.t.set(mu, x, nu as u32);
                        self.t.set(nu, inv(x), mu as u32);
                        if self.track_deductions {
                            self.deductions.push((mu as u32, x as u32));
                        }
                    }
                }
            }
        }
        self.queue.clear();
    }

    /// Traces `w` from `c` forwards and backwards; fills a single gap by
    /// deduction and, if `fill` is set, defines new cosets for wider gaps.
    fn scan(&mut self, c: usize, w: &[usize], fill: bool) -> Result<(), Full> {
        if w.is_empty() {
            return Ok(());
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len() - 1;
        loop {
            while i <= j {
                let n = self.t.get(f, w[i]);
                if n == NONE {
                    break;
                }
                f = n as usize;
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i {
                let n = self.t.get(b, inv(w[j]));
                if n == NONE {
                    break;
                }
                b = n as usize;
                if j == 0 {
                    // i == 0 too: the whole word traced backwards
                    self.coincidence(f, b);
                    return Ok(());
                }
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                self.t.set(f, w[i], b as u32);
                self.t.set(b, inv(w[i]), f as u32);
                if self.track_deductions {
                    self.deductions.push((f as u32, w[i] as u32));
                }
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn compact_if_sparse(&mut self) {
        let n = self.t.len();
        if n > 64 && n - self.live > n / 2 {
            self.compact(&mut 0);
        }
    }

    /// Drops dead rows, preserving the order of live ones. `cursor` is
    /// remapped to the first live coset at or after its old position.
    fn compact(&mut self, cursor: &mut usize) {
        debug_assert!(self.queue.is_empty());
        let n = self.t.len();
        let mut newnum = vec![NONE; n];
        let mut next = 0u32;
        let mut new_cursor = None;
        for (c, slot) in newnum.iter_mut().enumerate() {
            if c >= *cursor && new_cursor.is_none() && self.t.is_live(c) {
                new_cursor = Some(next as usize);
            }
            if self.t.is_live(c) {
                *slot = next;
                next += 1;
            }
        }
        let cols = self.t.cols;
        let mut table = Vec::with_capacity(next as usize * cols);
        for c in 0..n {
            if newnum[c] == NONE {
                continue;
            }
            for x in 0..cols {
                let d = self.t.get(c, x);
                table.push(if d == NONE { NONE } else { newnum[d as usize] });
            }
        }
        self.t.table = table;
        self.t.parent = (0..next).collect();
        *cursor = new_cursor.unwrap_or(next as usize);
        self.deductions.retain(|(c, _)| newnum[*c as usize] != NONE);
        for d in &mut self.deductions {
            d.0 = newnum[d.0 as usize];
        }
    }

    fn lookahead(&mut self, rels: &[Vec<usize>]) {
        let mut c = 0;
        while c < self.t.len() {
            for r in rels {
                if !self.t.is_live(c) {
                    break;
                }
                let _ = self.scan(c, r, false);
            }
            c += 1;
        }
    }

    fn run_hlt(&mut self, rels: &[Vec<usize>], subgroup: &[Vec<usize>], lookahead: bool) -> bool {
        let mut cursor = 0usize;
        let mut subgroup_done = false;
        loop {
            let step = self.hlt_pass(rels, subgroup, &mut subgroup_done, &mut cursor);
            match step {
                Ok(()) => return true,
                Err(Full) => {
                    if !lookahead {
                        return false;
                    }
                    let before = self.live;
                    self.lookahead(rels);
                    self.compact(&mut cursor);
                    log::debug!("lookahead: {} -> {} live cosets", before, self.live);
                    if self.live >= self.max_cosets {
                        return false;
                    }
                }
            }
        }
    }

    fn hlt_pass(
        &mut self,
        rels: &[Vec<usize>],
        subgroup: &[Vec<usize>],
        subgroup_done: &mut bool,
        cursor: &mut usize,
    ) -> Result<(), Full> {
        if !*subgroup_done {
            for w in subgroup {
                self.scan(0, w, true)?;
            }
            *subgroup_done = true;
        }
        while *cursor < self.t.len() {
            let c = *cursor;
            if self.t.is_live(c) {
                for r in rels {
                    if !self.t.is_live(c) {
                        break;
                    }
                    self.scan(c, r, true)?;
                }
                if self.t.is_live(c) {
                    for x in 0..self.t.cols {
                        if self.t.get(c, x) == NONE {
                            self.define(c, x)?;
                        }
                    }
                }
            }
            *cursor += 1;
            if self.t.len() > 64 && self.t.len() - self.live > self.t.len() / 2 {
                self.compact(cursor);
            }
        }
        Ok(())
    }

    fn process_deductions(&mut self, by_first: &[Vec<Vec<usize>>]) {
        while let Some((c, x)) = self.deductions.pop() {
            let (c, x) = (c as usize, x as usize);
            if !self.t.is_live(c) {
                continue;
            }
            for w in &by_first[x] {
                if !self.t.is_live(c) {
                    break;
                }
                let _ = self.scan(c, w, false);
            }
            let d = self.t.get(c, x);
            if d == NONE {
                continue;
            }
            let d = d as usize;
            for w in &by_first[inv(x)] {
                if !self.t.is_live(d) {
                    break;
                }
                let _ = self.scan(d, w, false);
            }
        }
    }

    fn run_felsch(&mut self, rels: &[Vec<usize>], subgroup: &[Vec<usize>]) -> bool {
        // cyclic conjugates of every relator and its inverse, by first letter
        let mut by_first: Vec<Vec<Vec<usize>>> = vec![Vec::new(); self.t.cols];
        for r in rels {
            let rinv: Vec<usize> = r.iter().rev().map(|&x| inv(x)).collect();
            for word in [r, &rinv] {
                for k in 0..word.len() {
                    let rot: Vec<usize> = word[k..].iter().chain(&word[..k]).copied().collect();
                    if !by_first[rot[0]].contains(&rot) {
                        by_first[rot[0]].push(rot);
                    }
                }
            }
        }
        for w in subgroup {
            if self.scan(0, w, true).is_err() {
                return false;
            }
            self.process_deductions(&by_first);
        }
        let mut cursor = 0usize;
        while cursor < self.t.len() {
            if !self.t.is_live(cursor) {
                cursor += 1;
                continue;
            }
            let Some(x) = (0..self.t.cols).find(|&x| self.t.get(cursor, x) == NONE) else {
                cursor += 1;
                continue;
            };
            if self.define(cursor, x).is_err() {
                return false;
            }
            self.process_deductions(&by_first);
            if self.t.len() > 64 && self.t.len() - self.live > self.t.len() / 2 {
                self.compact(&mut cursor);
            }
        }
        true
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup` in the
/// group presented by `p`. An empty `subgroup` enumerates the group itself.
pub fn enumerate(
    p: &Presentation,
    subgroup: &[Word],
    strategy: Strategy,
    max_cosets: usize,
) -> Result<EnumerationResult, CosetError> {
    if max_cosets == 0 {
        return Err(CosetError::ZeroLimit);
    }
    let start = Instant::now();
    let mut rels: Vec<Vec<usize>> = p.relators().iter().map(|r| word_columns(p, r)).collect::<Result<_, _>>()?;
    rels.sort_by_key(Vec::len);
    let subgroup: Vec<Vec<usize>> = subgroup.iter().map(|w| word_columns(p, w)).collect::<Result<_, _>>()?;

    let mut e = Enumerator::new(p.generators().len(), max_cosets, strategy == Strategy::Felsch);
    let completed = match strategy {
        Strategy::Hlt => e.run_hlt(&rels, &subgroup, false),
        Strategy::HltLookahead => e.run_hlt(&rels, &subgroup, true),
        Strategy::Felsch => e.run_felsch(&rels, &subgroup),
    };
    let completed = completed && e.t.is_complete();
    let mut table = None;
    if completed {
        e.compact_if_sparse();
        let mut t = e.t;
        t.canonicalize();
        debug_assert!(t.is_involution_consistent());
        table = Some(t);
    }
    Ok(EnumerationResult {
        status: if completed { EnumerationStatus::Completed } else { EnumerationStatus::LimitExceeded },
        index: table.as_ref().map(CosetTable::num_cosets),
        cosets_defined_total: e.defined_total,
        cosets_live_max: e.live_max,
        coincidences_processed: e.coincidences,
        strategy,
        elapsed_ms: start.elapsed().as_millis(),
        table,
    })
}

#[derive(Clone, Debug)]
pub enum TrivialityVerdict {
    /// Enumeration over the trivial subgroup closed with a single coset.
    Trivial(EnumerationResult),
    /// Enumeration completed with more than one coset: the group has this order.
    Nontrivial { order: usize, result: EnumerationResult },
    /// No enumeration finished within the limit; nothing is claimed.
    Unknown(Vec<EnumerationResult>),
}

impl TrivialityVerdict {
    pub fn is_trivial(&self) -> bool {
        matches!(self, TrivialityVerdict::Trivial(_))
    }
}

/// Tries HLT with lookahead, then Felsch, over the trivial subgroup.
pub fn verify_trivial(p: &Presentation, max_cosets: usize) -> Result<TrivialityVerdict, CosetError> {
    let mut failures = Vec::new();
    for strategy in [Strategy::HltLookahead, Strategy::Felsch] {
        let r = enumerate(p, &[], strategy, max_cosets)?;
        match r.index {
            Some(1) => return Ok(TrivialityVerdict::Trivial(r)),
            Some(order) => return Ok(TrivialityVerdict::Nontrivial { order, result: r }),
            None => failures.push(r),
        }
    }
    Ok(TrivialityVerdict::Unknown(failures))
}
