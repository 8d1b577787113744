//! Unsupervised morph segmentation by two-part code length minimization.
//!
//! Total cost in bits:
//!
//! ```text
//! N log2 N - sum_m c(m) log2 c(m)                  (corpus, c = morph token counts)
//!   + sum_{m in lexicon} (|m| * char_cost + morph_cost)   (lexicon)
//! ```
//!
//! Training starts from unsplit words and applies five kinds of moves,
//! each kept only if the total cost drops:
//!
//! * recursive binary resplitting of one word, followed for short words
//!   by an exact search over that word's segmentations;
//! * resegmenting one morph type everywhere it occurs;
//! * making a substring shared by several word types a morph wherever it
//!   occurs, followed by re-optimizing each touched word, or doing so for
//!   two substrings at once;
//! * an affix cascade: a morph is cut into `p + s`, then every lexicon
//!   morph starting with `p` or ending with `s` is cut the same way, with
//!   the leftover pieces propagated in turn;
//! * merging every adjacent occurrence of one morph pair.
//!
//! Rounds repeat until no move is accepted. Cut points are tried from the
//! right end of a morph first. The descent runs twice, once from unsplit
//! words and once from single characters, and the cheaper end point is
//! kept (the unsplit run on ties).

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::collections::HashMap;
use crate::error::{Error, Result};
use crate::math;
use crate::stats::{freq_table, FrequencyTable};
use crate::textcore::Corpus;

pub const DEFAULT_MORPH_COST: f64 = 5.0;
pub const DEFAULT_MAX_ROUNDS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct MorphConfig {
    /// Fixed lexicon price per morph, in bits.
    pub morph_cost: f64,
    /// Lexicon price per character; `None` uses the entropy of the
    /// count-weighted character distribution of the training words.
    pub char_cost: Option<f64>,
    pub max_rounds: usize,
}

impl Default for MorphConfig {
    fn default() -> Self {
        MorphConfig {
            morph_cost: DEFAULT_MORPH_COST,
            char_cost: None,
            max_rounds: DEFAULT_MAX_ROUNDS,
        }
    }
}

fn xlog2x(x: u64) -> f64 {
    if x == 0 {
        0.0
    } else {
        let x = x as f64;
        x * math::log2(x)
    }
}

fn char_len(s: &str) -> usize {
    s.chars().count()
}

/// Cost of a morph count table under the given prices.
pub fn lexicon_cost<S: AsRef<str>>(lexicon: &[(S, u64)], morph_cost: f64, char_cost: f64) -> f64 {
    let mut n = 0u64;
    let mut s = 0.0;
    let mut lex = 0.0;
    for (m, c) in lexicon {
        if *c == 0 {
            continue;
        }
        n += c;
        s += xlog2x(*c);
        lex += char_len(m.as_ref()) as f64 * char_cost + morph_cost;
    }
    xlog2x(n) - s + lex
}

/// Entropy in bits of the count-weighted character distribution.
pub fn char_entropy<S: AsRef<str>>(words: &[(S, u64)]) -> f64 {
    let mut counts: BTreeMap<char, u64> = BTreeMap::new();
    let mut total = 0u64;
    for (w, c) in words {
        for ch in w.as_ref().chars() {
            *counts.entry(ch).or_insert(0) += c;
            total += c;
        }
    }
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    let h: f64 = counts
        .values()
        .map(|&c| {
            let p = c as f64 / t;
            -p * math::log2(p)
        })
        .sum();
    h.max(0.0)
}

/// Word type counts of a corpus, sorted by word.
pub fn word_counts(corpus: &Corpus) -> Vec<(String, u64)> {
    let mut m: BTreeMap<&str, u64> = BTreeMap::new();
    for t in corpus.tokens() {
        *m.entry(t).or_insert(0) += 1;
    }
    m.into_iter().map(|(w, c)| (w.to_string(), c)).collect()
}

/// Running cost bookkeeping.
struct State {
    counts: HashMap<String, u64>,
    n: u64,
    s: f64,
    lex: f64,
    morph_cost: f64,
    char_cost: f64,
}

impl State {
    fn price(&self, m: &str) -> f64 {
        char_len(m) as f64 * self.char_cost + self.morph_cost
    }

    fn add(&mut self, m: &str, k: u64) {
        let price = self.price(m);
        let c = self.counts.entry_ref(m).or_insert(0);
        if *c == 0 {
            self.lex += price;
        }
        self.s += xlog2x(*c + k) - xlog2x(*c);
        *c += k;
        self.n += k;
    }

    fn remove(&mut self, m: &str, k: u64) {
        let price = self.price(m);
        let c = self.counts.get_mut(m).expect("morph present");
        self.s += xlog2x(*c - k) - xlog2x(*c);
        *c -= k;
        self.n -= k;
        if *c == 0 {
            self.counts.remove(m);
            self.lex -= price;
        }
    }

    fn cost(&self) -> f64 {
        xlog2x(self.n) - self.s + self.lex
    }

    fn exact_cost(&self) -> f64 {
        let mut table: Vec<(&str, u64)> = self.counts.iter().map(|(m, &c)| (m.as_str(), c)).collect();
        table.sort_unstable();
        lexicon_cost(&table, self.morph_cost, self.char_cost)
    }
}

/// Words and morphs with at most this many cut points also get exact
/// enumeration moves.
const EXACT_CUTS_LIMIT: usize = 8;

/// Most shared substrings tried per round, by number of word types.
const SUBSTRING_CANDIDATES: usize = 2048;

/// Substrings combined pairwise per round.
const PAIR_CANDIDATES: usize = 24;

/// Work units (roughly, morph updates) each global round may spend.
/// Small vocabularies never reach it; large ones get bounded rounds.
const ROUND_BUDGET: u64 = 2_000_000;

/// Pieces of `s` for the cut points selected by `mask`.
fn cut<'a>(s: &'a str, bounds: &[usize], mask: u32, out: &mut Vec<&'a str>) {
    out.clear();
    let mut start = 0;
    for (j, &b) in bounds.iter().enumerate() {
        if mask & (1 << j) != 0 {
            out.push(&s[start..b]);
            start = b;
        }
    }
    out.push(&s[start..]);
}

fn owned(pieces: &[&str]) -> Vec<String> {
    pieces.iter().map(|p| p.to_string()).collect()
}

/// Segmentation of `word` in which every non-overlapping occurrence of
/// `x` is one morph. Cut points inside an occurrence are dropped and its
/// edges become cut points. `None` if nothing changes.
fn extract(word: &str, seg: &[String], x: &str) -> Option<Vec<String>> {
    let mut cuts: BTreeSet<usize> = BTreeSet::new();
    let mut at = 0;
    for m in &seg[..seg.len() - 1] {
        at += m.len();
        cuts.insert(at);
    }
    let mut start = 0;
    let mut found = false;
    while let Some(i) = word[start..].find(x) {
        let i = start + i;
        let j = i + x.len();
        let inner: Vec<usize> = cuts.range(i + 1..j).copied().collect();
        for c in inner {
            cuts.remove(&c);
        }
        if i > 0 {
            cuts.insert(i);
        }
        if j < word.len() {
            cuts.insert(j);
        }
        found = true;
        start = j;
    }
    if !found {
        return None;
    }
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut prev = 0;
    for c in cuts {
        out.push(word[prev..c].to_string());
        prev = c;
    }
    out.push(word[prev..].to_string());
    (out != seg).then_some(out)
}

/// Relative tolerance for accepting a move.
const ACCEPT_EPS: f64 = 1e-10;

fn improves(new: f64, old: f64) -> bool {
    new < old - ACCEPT_EPS * old.abs().max(1.0)
}

struct Trainer {
    words: Vec<(String, u64)>,
    segs: Vec<Vec<String>>,
    st: State,
    /// morph -> words using it
    occurs: HashMap<String, Vec<usize>>,
    /// proper prefix -> lexicon morphs starting with it
    by_prefix: HashMap<String, Vec<String>>,
    /// proper suffix -> lexicon morphs ending with it
    by_suffix: HashMap<String, Vec<String>>,
    /// Work spent in the current global round.
    work: u64,
}

impl Trainer {
    fn exhausted(&self) -> bool {
        self.work > ROUND_BUDGET
    }

    fn set_seg(&mut self, w: usize, new: Vec<String>) -> Vec<String> {
        let k = self.words[w].1;
        self.work += (self.segs[w].len() + new.len()) as u64;
        let old = core::mem::take(&mut self.segs[w]);
        for m in &old {
            self.st.remove(m, k);
        }
        for m in &new {
            self.st.add(m, k);
        }
        self.segs[w] = new;
        old
    }

    /// Applies a batch of segmentation changes; keeps them only if the cost
    /// drops.
    fn try_assign(&mut self, changes: Vec<(usize, Vec<String>)>) -> bool {
        if changes.is_empty() {
            return false;
        }
        let before = self.st.cost();
        let mut undo = Vec::with_capacity(changes.len());
        for (w, seg) in changes {
            let old = self.set_seg(w, seg);
            undo.push((w, old));
        }
        if improves(self.st.cost(), before) {
            return true;
        }
        for (w, old) in undo.into_iter().rev() {
            self.set_seg(w, old);
        }
        false
    }

    fn rebuild_indexes(&mut self) {
        self.work += self.segs.iter().map(|s| s.len() as u64).sum::<u64>() + 4 * self.st.counts.len() as u64;
        self.occurs.clear();
        for (w, seg) in self.segs.iter().enumerate() {
            for m in seg {
                let list = self.occurs.entry_ref(m.as_str()).or_default();
                if list.last() != Some(&w) {
                    list.push(w);
                }
            }
        }
        self.by_prefix.clear();
        self.by_suffix.clear();
        let mut lexicon: Vec<&String> = self.st.counts.keys().collect();
        lexicon.sort_unstable();
        for m in lexicon {
            let bounds: Vec<usize> = m.char_indices().map(|(i, _)| i).skip(1).collect();
            for &b in &bounds {
                self.by_prefix.entry_ref(&m[..b]).or_default().push(m.clone());
                self.by_suffix.entry_ref(&m[b..]).or_default().push(m.clone());
            }
        }
    }

    /// Morfessor-style recursive binary resplit of one word.
    fn resplit_word(&mut self, w: usize) -> bool {
        let before = self.st.cost();
        let k = self.words[w].1;
        let old = core::mem::take(&mut self.segs[w]);
        for m in &old {
            self.st.remove(m, k);
        }
        let word = self.words[w].0.clone();
        let mut out = Vec::new();
        self.split_rec(&word, k, &mut out);
        if out != old && improves(self.st.cost(), before) {
            self.segs[w] = out;
            return true;
        }
        for m in &out {
            self.st.remove(m, k);
        }
        for m in &old {
            self.st.add(m, k);
        }
        self.segs[w] = old;
        false
    }

    fn split_rec(&mut self, s: &str, k: u64, out: &mut Vec<String>) {
        self.st.add(s, k);
        let mut best = self.st.cost();
        self.st.remove(s, k);
        let mut best_cut = None;
        // Right to left, so equal-cost alternatives favour short suffixes.
        for (b, _) in s.char_indices().rev().filter(|&(b, _)| b > 0) {
            let (p, q) = s.split_at(b);
            self.st.add(p, k);
            self.st.add(q, k);
            let c = self.st.cost();
            self.st.remove(p, k);
            self.st.remove(q, k);
            if improves(c, best) {
                best = c;
                best_cut = Some(b);
            }
        }
        match best_cut {
            None => {
                self.st.add(s, k);
                out.push(s.to_string());
            }
            Some(b) => {
                let (p, q) = s.split_at(b);
                // Place both halves, then refine each with the other present.
                self.st.add(q, k);
                self.split_rec(p, k, out);
                self.st.remove(q, k);
                self.split_rec(q, k, out);
            }
        }
    }

    /// Tries every segmentation of word `w` with the rest held fixed and
    /// keeps the cheapest if it beats the current one.
    fn reassign_word(&mut self, w: usize) -> bool {
        let word = self.words[w].0.clone();
        let bounds: Vec<usize> = word.char_indices().map(|(i, _)| i).filter(|&i| i > 0).collect();
        if bounds.is_empty() || bounds.len() >= EXACT_CUTS_LIMIT {
            return false;
        }
        let k = self.words[w].1;
        let before = self.st.cost();
        let old = core::mem::take(&mut self.segs[w]);
        for m in &old {
            self.st.remove(m, k);
        }
        let mut best = before;
        let mut best_seg: Option<Vec<String>> = None;
        let mut pieces = Vec::with_capacity(bounds.len() + 1);
        for mask in 0u32..(1 << bounds.len()) {
            cut(&word, &bounds, mask, &mut pieces);
            for m in &pieces {
                self.st.add(m, k);
            }
            let c = self.st.cost();
            for m in &pieces {
                self.st.remove(m, k);
            }
            if improves(c, best) {
                best = c;
                best_seg = Some(owned(&pieces));
            }
        }
        self.work += (bounds.len() as u64 + 1) << bounds.len();
        let accepted = best_seg.is_some();
        let seg = best_seg.unwrap_or(old);
        for m in &seg {
            self.st.add(m, k);
        }
        self.segs[w] = seg;
        accepted
    }

    /// Replaces one morph type everywhere by its best segmentation.
    fn morph_round(&mut self) -> bool {
        let mut improved = false;
        self.rebuild_indexes();
        let mut morphs: Vec<String> = self.st.counts.keys().cloned().collect();
        morphs.sort_unstable();
        for m in morphs {
            if self.exhausted() {
                break;
            }
            let bounds: Vec<usize> = m.char_indices().map(|(i, _)| i).filter(|&i| i > 0).collect();
            if bounds.is_empty() || bounds.len() >= EXACT_CUTS_LIMIT {
                continue;
            }
            let Some(ws) = self.occurs.get(m.as_str()).cloned() else {
                continue;
            };
            let mut best: Option<(f64, Vec<(usize, Vec<String>)>)> = None;
            let base = self.st.cost();
            let mut slices = Vec::with_capacity(bounds.len() + 1);
            for mask in 1u32..(1 << bounds.len()) {
                cut(&m, &bounds, mask, &mut slices);
                let pieces = owned(&slices);
                let changes: Vec<(usize, Vec<String>)> = ws
                    .iter()
                    .map(|&w| {
                        let mut seg = Vec::new();
                        for x in &self.segs[w] {
                            if *x == m {
                                seg.extend(pieces.iter().cloned());
                            } else {
                                seg.push(x.clone());
                            }
                        }
                        (w, seg)
                    })
                    .collect();
                let mut undo = Vec::with_capacity(changes.len());
                for (w, seg) in changes.iter().cloned() {
                    undo.push((w, self.set_seg(w, seg)));
                }
                let c = self.st.cost();
                for (w, old) in undo.into_iter().rev() {
                    self.set_seg(w, old);
                }
                if improves(c, best.as_ref().map_or(base, |b| b.0)) {
                    best = Some((c, changes));
                }
            }
            if let Some((_, changes)) = best {
                for (w, seg) in changes {
                    self.set_seg(w, seg);
                }
                improved = true;
                self.rebuild_indexes();
            }
        }
        improved
    }

    /// Makes a substring shared by several word types a morph wherever it
    /// occurs, then re-optimizes the touched words one at a time. The whole
    /// step is kept only if the total cost drops.
    fn substring_round(&mut self) -> bool {
        let candidates = self.shared_substrings(SUBSTRING_CANDIDATES);
        let mut improved = false;
        for (x, ws) in candidates {
            if self.exhausted() {
                break;
            }
            self.work += ws.len() as u64;
            let mut changes = Vec::new();
            for w in ws {
                if let Some(out) = extract(&self.words[w].0, &self.segs[w], &x) {
                    changes.push((w, out));
                }
            }
            if changes.is_empty() {
                continue;
            }
            let before = self.st.cost();
            let mut undo = Vec::with_capacity(changes.len());
            for (w, seg) in changes {
                undo.push((w, self.set_seg(w, seg)));
            }
            for &(w, _) in &undo {
                self.reassign_word(w);
            }
            if improves(self.st.cost(), before) {
                improved = true;
                continue;
            }
            for (w, old) in undo.into_iter().rev() {
                self.set_seg(w, old);
            }
        }
        improved
    }

    /// Two extractions applied together, over the most widely shared
    /// substrings.
    fn substring_pair_round(&mut self) -> bool {
        let candidates = self.shared_substrings(PAIR_CANDIDATES);
        let mut improved = false;
        for (x, xs) in &candidates {
            for (y, ys) in &candidates {
                if x == y {
                    continue;
                }
                if self.exhausted() {
                    return improved;
                }
                let affected: BTreeSet<usize> = xs.iter().chain(ys).copied().collect();
                self.work += affected.len() as u64;
                let changes: Vec<(usize, Vec<String>)> = affected
                    .into_iter()
                    .filter_map(|w| {
                        let seg = &self.segs[w];
                        let word = &self.words[w].0;
                        let first = extract(word, seg, x);
                        let base = first.as_deref().unwrap_or(seg);
                        match (extract(word, base, y), first.is_some()) {
                            (Some(out), _) => Some((w, out)),
                            (None, true) => Some((w, base.to_vec())),
                            (None, false) => None,
                        }
                    })
                    .collect();
                improved |= self.try_assign(changes);
            }
        }
        improved
    }

    /// Substrings found in at least two word types, most widespread first,
    /// followed by the word types themselves.
    fn shared_substrings(&self, limit: usize) -> Vec<(String, Vec<usize>)> {
        let mut types: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (idx, (w, _)) in self.words.iter().enumerate() {
            let bounds: Vec<usize> = w.char_indices().map(|(i, _)| i).chain(core::iter::once(w.len())).collect();
            let mut seen: BTreeSet<&str> = BTreeSet::new();
            for i in 0..bounds.len() {
                for j in (i + 1)..bounds.len() {
                    seen.insert(&w[bounds[i]..bounds[j]]);
                }
            }
            for x in seen {
                types.entry(x).or_default().push(idx);
            }
        }
        let mut candidates: Vec<(&str, &Vec<usize>)> = types
            .iter()
            .filter(|(x, ws)| ws.len() >= 2 || (self.words[ws[0]].0 == **x && x.chars().nth(1).is_some()))
            .map(|(&x, ws)| (x, ws))
            .collect();
        // Shared substrings first; a word alone counts as least shared.
        let rank = |ws: &Vec<usize>| if ws.len() >= 2 { ws.len() } else { 0 };
        candidates.sort_by(|a, b| rank(b.1).cmp(&rank(a.1)).then_with(|| a.0.cmp(b.0)));
        candidates.truncate(limit);
        candidates.into_iter().map(|(x, ws)| (x.to_string(), ws.clone())).collect()
    }

    fn cascade_rewrites(&self, p: &str, q: &str) -> BTreeMap<String, [String; 2]> {
        let mut rw: BTreeMap<String, [String; 2]> = BTreeMap::new();
        let mut queue: VecDeque<(String, bool)> = VecDeque::new();
        let mut seen: BTreeSet<(String, bool)> = BTreeSet::new();
        queue.push_back((p.to_string(), true));
        queue.push_back((q.to_string(), false));
        while let Some((affix, is_prefix)) = queue.pop_front() {
            if !seen.insert((affix.clone(), is_prefix)) {
                continue;
            }
            let index = if is_prefix { &self.by_prefix } else { &self.by_suffix };
            let Some(list) = index.get(affix.as_str()) else {
                continue;
            };
            for m in list {
                if rw.contains_key(m) {
                    continue;
                }
                if is_prefix {
                    let rest = m[affix.len()..].to_string();
                    rw.insert(m.clone(), [affix.clone(), rest.clone()]);
                    queue.push_back((rest, false));
                } else {
                    let head = m[..m.len() - affix.len()].to_string();
                    rw.insert(m.clone(), [head.clone(), affix.clone()]);
                    queue.push_back((head, true));
                }
            }
        }
        rw
    }

    fn cascade_round(&mut self) -> bool {
        let mut improved = false;
        self.rebuild_indexes();
        let mut candidates: Vec<String> = self.st.counts.keys().cloned().collect();
        candidates.sort_unstable();
        for m in candidates {
            let cuts: Vec<usize> = m.char_indices().rev().map(|(b, _)| b).filter(|&b| b > 0).collect();
            for b in cuts {
                if self.exhausted() {
                    return improved;
                }
                if !self.st.counts.contains_key(m.as_str()) {
                    break;
                }
                let rw = self.cascade_rewrites(&m[..b], &m[b..]);
                let mut affected: BTreeSet<usize> = BTreeSet::new();
                for key in rw.keys() {
                    if let Some(ws) = self.occurs.get(key.as_str()) {
                        affected.extend(ws.iter().copied());
                    }
                }
                let changes: Vec<(usize, Vec<String>)> = affected
                    .into_iter()
                    .map(|w| {
                        let mut seg = Vec::new();
                        for x in &self.segs[w] {
                            match rw.get(x) {
                                Some([a, c]) => {
                                    seg.push(a.clone());
                                    seg.push(c.clone());
                                }
                                None => seg.push(x.clone()),
                            }
                        }
                        (w, seg)
                    })
                    .collect();
                if self.try_assign(changes) {
                    improved = true;
                    self.rebuild_indexes();
                }
            }
        }
        improved
    }

    fn merge_round(&mut self) -> bool {
        let mut improved = false;
        let mut pairs: BTreeSet<(String, String)> = BTreeSet::new();
        for seg in &self.segs {
            for w in seg.windows(2) {
                pairs.insert((w[0].clone(), w[1].clone()));
            }
        }
        self.rebuild_indexes();
        for (a, b) in pairs {
            if self.exhausted() {
                break;
            }
            let Some(ws) = self.occurs.get(a.as_str()) else {
                continue;
            };
            self.work += ws.len() as u64;
            let mut changes = Vec::new();
            for &w in ws {
                let seg = &self.segs[w];
                let mut out: Vec<String> = Vec::with_capacity(seg.len());
                let mut i = 0;
                let mut hit = false;
                while i < seg.len() {
                    if i + 1 < seg.len() && seg[i] == a && seg[i + 1] == b {
                        let mut joined = seg[i].clone();
                        joined.push_str(&seg[i + 1]);
                        out.push(joined);
                        i += 2;
                        hit = true;
                    } else {
                        out.push(seg[i].clone());
                        i += 1;
                    }
                }
                if hit {
                    changes.push((w, out));
                }
            }
            if self.try_assign(changes) {
                improved = true;
                self.rebuild_indexes();
            }
        }
        improved
    }
}

/// A trained lexicon with its costs.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationModel {
    morph_cost: f64,
    char_cost: f64,
    /// Sorted by morph.
    lexicon: Vec<(String, u64)>,
    index: BTreeMap<String, u64>,
    total: u64,
    longest: usize,
    /// Training words with their final analyses; empty for models rebuilt
    /// from a lexicon.
    analyses: Vec<(String, u64, Vec<String>)>,
    /// Exact cost before training and after every round.
    history: Vec<f64>,
}

impl SegmentationModel {
    /// Rebuilds a model from a lexicon, e.g. one read from disk.
    pub fn from_lexicon(lexicon: Vec<(String, u64)>, morph_cost: f64, char_cost: f64) -> Result<Self> {
        if lexicon.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut index = BTreeMap::new();
        for (m, c) in &lexicon {
            if m.is_empty() || *c == 0 {
                return Err(Error::invalid("lexicon entries need a non-empty morph and a positive count"));
            }
            if index.insert(m.clone(), *c).is_some() {
                return Err(Error::invalid(alloc::format!("duplicate morph {m:?}")));
            }
        }
        let lexicon: Vec<(String, u64)> = index.iter().map(|(m, &c)| (m.clone(), c)).collect();
        let total = lexicon.iter().map(|(_, c)| c).sum();
        let longest = lexicon.iter().map(|(m, _)| char_len(m)).max().unwrap_or(1);
        let cost = lexicon_cost(&lexicon, morph_cost, char_cost);
        Ok(SegmentationModel {
            morph_cost,
            char_cost,
            lexicon,
            index,
            total,
            longest,
            analyses: Vec::new(),
            history: vec![cost],
        })
    }

    pub fn lexicon(&self) -> &[(String, u64)] {
        &self.lexicon
    }

    pub fn morph_cost(&self) -> f64 {
        self.morph_cost
    }

    pub fn char_cost(&self) -> f64 {
        self.char_cost
    }

    /// Total cost recomputed from the lexicon.
    pub fn cost(&self) -> f64 {
        lexicon_cost(&self.lexicon, self.morph_cost, self.char_cost)
    }

    pub fn cost_history(&self) -> &[f64] {
        &self.history
    }

    /// Final training analyses `(word, count, morphs)`, sorted by word.
    pub fn analyses(&self) -> &[(String, u64, Vec<String>)] {
        &self.analyses
    }

    pub fn contains(&self, morph: &str) -> bool {
        self.index.contains_key(morph)
    }

    /// Code length of a morph token in bits. Characters missing from the
    /// lexicon pay an add-one estimate plus the lexicon price of a new
    /// one-character morph.
    fn token_cost(&self, morph: &str, single_char: bool) -> Option<f64> {
        match self.index.get(morph) {
            Some(&c) => Some(math::log2(self.total as f64) - math::log2(c as f64)),
            None if single_char => {
                Some(math::log2(self.total as f64 + 1.0) + self.morph_cost + self.char_cost)
            }
            None => None,
        }
    }

    /// Lowest-cost split of `word` over the lexicon.
    pub fn segment(&self, word: &str) -> Vec<String> {
        let bounds: Vec<usize> = word
            .char_indices()
            .map(|(i, _)| i)
            .chain(core::iter::once(word.len()))
            .collect();
        let n = bounds.len() - 1;
        if n == 0 {
            return Vec::new();
        }
        let mut best = vec![f64::INFINITY; n + 1];
        let mut back = vec![0usize; n + 1];
        best[0] = 0.0;
        for i in 1..=n {
            let lo = i.saturating_sub(self.longest);
            for j in lo..i {
                if !best[j].is_finite() {
                    continue;
                }
                let piece = &word[bounds[j]..bounds[i]];
                if let Some(c) = self.token_cost(piece, i - j == 1) {
                    let total = best[j] + c;
                    if total < best[i] {
                        best[i] = total;
                        back[i] = j;
                    }
                }
            }
        }
        let mut out = Vec::new();
        let mut i = n;
        while i > 0 {
            let j = back[i];
            out.push(word[bounds[j]..bounds[i]].to_string());
            i = j;
        }
        out.reverse();
        out
    }
}

#[derive(Clone, Copy)]
enum Start {
    Whole,
    Chars,
}

/// Local descent from one starting segmentation. Returns the final state
/// and the exact cost before the first round and after each round.
fn descend(words: &[(String, u64)], char_cost: f64, config: &MorphConfig, start: Start) -> (Trainer, Vec<f64>) {
    let mut t = Trainer {
        segs: vec![Vec::new(); words.len()],
        words: words.to_vec(),
        st: State {
            counts: HashMap::default(),
            n: 0,
            s: 0.0,
            lex: 0.0,
            morph_cost: config.morph_cost,
            char_cost,
        },
        occurs: HashMap::default(),
        by_prefix: HashMap::default(),
        by_suffix: HashMap::default(),
        work: 0,
    };
    for w in 0..t.words.len() {
        let seg = match start {
            Start::Whole => vec![t.words[w].0.clone()],
            Start::Chars => t.words[w].0.chars().map(|c| c.to_string()).collect(),
        };
        t.set_seg(w, seg);
    }
    let mut history = vec![t.st.exact_cost()];
    for _ in 0..config.max_rounds {
        let mut improved = false;
        for w in 0..t.words.len() {
            improved |= t.resplit_word(w);
            improved |= t.reassign_word(w);
        }
        let global: [fn(&mut Trainer) -> bool; 5] = [
            Trainer::cascade_round,
            Trainer::substring_round,
            Trainer::substring_pair_round,
            Trainer::morph_round,
            Trainer::merge_round,
        ];
        for round in global {
            t.work = 0;
            improved |= round(&mut t);
        }
        history.push(t.st.exact_cost());
        if !improved {
            break;
        }
    }
    (t, history)
}

/// Trains a segmenter on `(word, count)` pairs. Repeated words are merged.
pub fn train_segmenter<S: AsRef<str>>(words: &[(S, u64)], config: &MorphConfig) -> Result<SegmentationModel> {
    let mut merged: BTreeMap<String, u64> = BTreeMap::new();
    for (w, c) in words {
        let w = w.as_ref();
        if w.is_empty() || *c == 0 {
            return Err(Error::invalid("words must be non-empty with count >= 1"));
        }
        *merged.entry(w.to_string()).or_insert(0) += c;
    }
    if merged.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(config.morph_cost >= 0.0) || config.char_cost.is_some_and(|c| !(c >= 0.0)) {
        return Err(Error::invalid("costs must be non-negative"));
    }
    let words: Vec<(String, u64)> = merged.into_iter().collect();
    let char_cost = config.char_cost.unwrap_or_else(|| char_entropy(&words));
    let (t, history) = [Start::Whole, Start::Chars]
        .into_iter()
        .map(|start| descend(&words, char_cost, config, start))
        .reduce(|best, next| {
            if improves(next.0.st.exact_cost(), best.0.st.exact_cost()) {
                next
            } else {
                best
            }
        })
        .expect("two starts");
    let lexicon: Vec<(String, u64)> = t.st.counts.iter().map(|(m, &c)| (m.clone(), c)).collect();
    let mut model = SegmentationModel::from_lexicon(lexicon, config.morph_cost, char_cost)?;
    model.analyses = t
        .words
        .into_iter()
        .zip(t.segs)
        .map(|((w, c), s)| (w, c, s))
        .collect();
    model.history = history;
    Ok(model)
}

/// Frequency table of the morphs of every corpus token.
pub fn morph_table(corpus: &Corpus, model: &SegmentationModel) -> Result<FrequencyTable> {
    let mut stream: Vec<String> = Vec::new();
    for t in corpus.tokens() {
        stream.extend(model.segment(t));
    }
    freq_table(&stream)
}
