//! Token-window duplicate detection.
//!
//! A clone pair is a pair of positions whose normalized token sequences agree,
//! that cannot be extended to the left, extended as far right as possible.
//! Within one file the match is cut at the distance between the two starts so
//! the instances never overlap. Pairs shorter than `min_tokens` tokens or
//! spanning fewer than `min_lines` lines (in either instance) are dropped.
//!
//! Candidates come from a Rabin-Karp rolling hash over `min_tokens`-token
//! windows; every candidate is verified token by token, so hash collisions
//! never produce a match.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexer::{normalize_one, NormalizeMode, TokenStream};

pub const DEFAULT_MIN_TOKENS: usize = 100;
pub const DEFAULT_MIN_LINES: u32 = 5;
pub const MIN_ALLOWED_TOKENS: usize = 10;

const HASH_BASE: u64 = 0x100_0000_01b3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CloneSettings {
    pub min_tokens: usize,
    pub min_lines: u32,
    pub mode: NormalizeMode,
}

impl Default for CloneSettings {
    fn default() -> Self {
        CloneSettings { min_tokens: DEFAULT_MIN_TOKENS, min_lines: DEFAULT_MIN_LINES, mode: NormalizeMode::IdentBlind }
    }
}

impl CloneSettings {
    pub fn new(min_tokens: usize, min_lines: u32, mode: NormalizeMode) -> Result<Self> {
        let s = CloneSettings { min_tokens, min_lines, mode };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_tokens < MIN_ALLOWED_TOKENS {
            return Err(Error::Config(format!(
                "clone min_tokens must be at least {MIN_ALLOWED_TOKENS}, got {}",
                self.min_tokens
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CloneInstance {
    pub file: String,
    pub start_line: u32,
    pub end_line: u32,
    /// Index into the file's normalized (comment-free) token sequence.
    pub start_token: usize,
    /// Exclusive.
    pub end_token: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClonePair {
    pub first: CloneInstance,
    pub second: CloneInstance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CloneBlock {
    pub instances: Vec<CloneInstance>,
    pub token_length: usize,
    /// True when identifiers and literals were blinded.
    pub normalized: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DuplicationSummary {
    pub duplicated_blocks: u64,
    pub duplicated_lines: u64,
    /// Percent of project lines.
    pub density: f64,
}

/// Normalized, interned view of one file.
struct Sequence {
    file: String,
    ids: Vec<u32>,
    /// (first line, last line) of each token.
    lines: Vec<(u32, u32)>,
}

fn sequences(streams: &[TokenStream], mode: NormalizeMode) -> Vec<Sequence> {
    let mut sorted: Vec<&TokenStream> = streams.iter().filter(|s| s.tokenized).collect();
    sorted.sort_by(|a, b| a.file.cmp(&b.file));
    let mut interner: HashMap<String, u32> = HashMap::new();
    sorted
        .into_iter()
        .map(|s| {
            let mut ids = Vec::new();
            let mut lines = Vec::new();
            for t in s.code_tokens() {
                let lexeme = normalize_one(t, mode);
                let next = interner.len() as u32;
                let id = *interner.entry(lexeme.to_string()).or_insert(next);
                ids.push(id);
                lines.push((t.line, t.end_line()));
            }
            Sequence { file: s.file.clone(), ids, lines }
        })
        .collect()
}

fn window_hashes(ids: &[u32], w: usize) -> Vec<u64> {
    if ids.len() < w {
        return Vec::new();
    }
    let top = (1..w).fold(1u64, |acc, _| acc.wrapping_mul(HASH_BASE));
    let mut h = ids[..w].iter().fold(0u64, |acc, &id| acc.wrapping_mul(HASH_BASE).wrapping_add(id as u64 + 1));
    let mut out = Vec::with_capacity(ids.len() - w + 1);
    out.push(h);
    for k in w..ids.len() {
        h = h
            .wrapping_sub((ids[k - w] as u64 + 1).wrapping_mul(top))
            .wrapping_mul(HASH_BASE)
            .wrapping_add(ids[k] as u64 + 1);
        out.push(h);
    }
    out
}

fn instance(seq: &Sequence, start: usize, len: usize) -> CloneInstance {
    CloneInstance {
        file: seq.file.clone(),
        start_line: seq.lines[start].0,
        end_line: seq.lines[start + len - 1].1,
        start_token: start,
        end_token: start + len,
    }
}

/// Maximal clone pairs, sorted.
pub fn clone_pairs(streams: &[TokenStream], settings: &CloneSettings) -> Vec<ClonePair> {
    let seqs = sequences(streams, settings.mode);
    pairs_of(&seqs, settings)
}

fn pairs_of(seqs: &[Sequence], settings: &CloneSettings) -> Vec<ClonePair> {
    let w = settings.min_tokens.max(1);
    let hashes: Vec<Vec<u64>> = seqs.par_iter().map(|s| window_hashes(&s.ids, w)).collect();

    let mut buckets: HashMap<u64, Vec<(usize, usize)>> = HashMap::new();
    for (f, hs) in hashes.iter().enumerate() {
        for (pos, &h) in hs.iter().enumerate() {
            buckets.entry(h).or_default().push((f, pos));
        }
    }

    let mut out = Vec::new();
    for entries in buckets.values().filter(|e| e.len() > 1) {
        // split the bucket into groups of truly identical windows
        let mut groups: Vec<Vec<(usize, usize)>> = Vec::new();
        for &(f, p) in entries {
            let window = &seqs[f].ids[p..p + w];
            match groups.iter_mut().find(|g| {
                let (gf, gp) = g[0];
                &seqs[gf].ids[gp..gp + w] == window
            }) {
                Some(g) => g.push((f, p)),
                None => groups.push(vec![(f, p)]),
            }
        }
        for group in &groups {
            for (x, &a) in group.iter().enumerate() {
                for &b in &group[x + 1..] {
                    let (a, b) = if a < b { (a, b) } else { (b, a) };
                    if let Some(pair) = maximal_pair(seqs, a, b, settings) {
                        out.push(pair);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// The pair starting at `a`/`b` if it is left-maximal and long enough.
fn maximal_pair(
    seqs: &[Sequence],
    a: (usize, usize),
    b: (usize, usize),
    settings: &CloneSettings,
) -> Option<ClonePair> {
    let (sa, sb) = (&seqs[a.0], &seqs[b.0]);
    if a.1 > 0 && b.1 > 0 && sa.ids[a.1 - 1] == sb.ids[b.1 - 1] {
        return None;
    }
    let mut len = sa.ids[a.1..].iter().zip(&sb.ids[b.1..]).take_while(|(x, y)| x == y).count();
    if a.0 == b.0 {
        len = len.min(b.1 - a.1);
    }
    if len < settings.min_tokens {
        return None;
    }
    let first = instance(sa, a.1, len);
    let second = instance(sb, b.1, len);
    let spans = |i: &CloneInstance| i.end_line - i.start_line + 1;
    if spans(&first) < settings.min_lines || spans(&second) < settings.min_lines {
        return None;
    }
    Some(ClonePair { first, second })
}

/// Clone pairs grouped into blocks of identical locations, ordered by first instance.
pub fn detect_clones(streams: &[TokenStream], settings: &CloneSettings) -> Vec<CloneBlock> {
    group_pairs(&clone_pairs(streams, settings), settings.mode == NormalizeMode::IdentBlind)
}

pub fn group_pairs(pairs: &[ClonePair], normalized: bool) -> Vec<CloneBlock> {
    let mut index: HashMap<&CloneInstance, usize> = HashMap::new();
    let mut nodes: Vec<&CloneInstance> = Vec::new();
    let mut parent: Vec<usize> = Vec::new();
    for p in pairs {
        for inst in [&p.first, &p.second] {
            if !index.contains_key(inst) {
                index.insert(inst, nodes.len());
                parent.push(nodes.len());
                nodes.push(inst);
            }
        }
        let (x, y) = (find(&mut parent, index[&p.first]), find(&mut parent, index[&p.second]));
        if x != y {
            parent[x.max(y)] = x.min(y);
        }
    }
    let mut components: HashMap<usize, Vec<CloneInstance>> = HashMap::new();
    for (i, inst) in nodes.iter().enumerate() {
        let root = find(&mut parent, i);
        components.entry(root).or_default().push((*inst).clone());
    }
    let mut blocks: Vec<CloneBlock> = components
        .into_values()
        .map(|mut instances| {
            instances.sort();
            instances.dedup();
            CloneBlock { token_length: instances[0].end_token - instances[0].start_token, instances, normalized }
        })
        .collect();
    blocks.sort_by(|a, b| a.instances[0].cmp(&b.instances[0]));
    blocks
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn summarize_duplication(blocks: &[CloneBlock], project_total_lines: u64) -> DuplicationSummary {
    let mut lines: BTreeSet<(&str, u32)> = BTreeSet::new();
    for inst in blocks.iter().flat_map(|b| &b.instances) {
        for l in inst.start_line..=inst.end_line {
            lines.insert((&inst.file, l));
        }
    }
    let duplicated_lines = lines.len() as u64;
    let density = if project_total_lines == 0 {
        0.0
    } else {
        (100.0 * duplicated_lines as f64 / project_total_lines as f64).min(100.0)
    };
    DuplicationSummary { duplicated_blocks: blocks.len() as u64, duplicated_lines, density }
}
