//! Occurrence counting over a backward sample `X_{-n}^0`.
//!
//! Two position conventions coexist and are kept apart on purpose:
//!
//! - *context* counts (denominators of the empirical conditionals) use end
//!   positions `t` in `[-n+k-1, -1]`, so every counted occurrence has a visible
//!   successor; the empty word counts `n`.
//! - *frequency* counts (membership in the frequent sets) use `t` in
//!   `[-n+k, 0]` for strings of length `k+1`, i.e. the last position is included.
//!
//! For a nonempty word `u` and symbol `x` the frequency of `u·x` equals the
//! context transition count of `(u, x)`; the index leans on that identity.
//!
//! Storage is a context trie grown backward in time (a child extends its
//! parent by one older symbol). Only nodes that could still carry a frequent
//! extension are expanded; queries below an unexpanded node fall back to
//! filtering that node's position list, so every answer is exact.

use std::borrow::Cow;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sequence::{Sample, Symbol, Word};

const ROOT: u32 = 0;

#[derive(Clone, Debug)]
struct Node {
    depth: u32,
    letter: Symbol,
    pos: (u32, u32),
    children: (u32, u32),
    expanded: bool,
    succ: Vec<(Symbol, u32)>,
}

/// Exact occurrence statistics of a backward sample.
#[derive(Clone, Debug)]
pub struct CountIndex {
    sample: Sample,
    levels: Vec<Vec<u32>>,
    nodes: Vec<Node>,
}

/// A frequent extension `z·w·x` of a context `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub z: Word,
    pub x: Symbol,
    /// Frequency of `z·w·x`, equal to the transition count of `(z·w, x)`.
    pub count: usize,
    /// Context count of `z·w`.
    pub context_count: usize,
}

/// Occurrence set of some context word: either a trie node or an explicit
/// (filtered) position list.
#[derive(Clone, Debug)]
pub(crate) enum View {
    Node(u32),
    Owned { depth: usize, pos: Vec<u32> },
}

fn tally(symbols: impl Iterator<Item = Symbol>) -> Vec<(Symbol, u32)> {
    let mut v: Vec<Symbol> = symbols.collect();
    v.sort_unstable();
    let mut out: Vec<(Symbol, u32)> = Vec::new();
    for s in v {
        match out.last_mut() {
            Some((last, c)) if *last == s => *c += 1,
            _ => out.push((s, 1)),
        }
    }
    out
}

impl CountIndex {
    /// Index with expansion cutoff `sqrt(n)`.
    pub fn new(sample: &Sample) -> Self {
        let cutoff = (sample.n() as f64).sqrt();
        Self::with_cutoff(sample, cutoff)
    }

    /// Index expanded for frequent-set queries at exponent `gamma`.
    pub fn for_gamma<F: Real>(sample: &Sample, gamma: F) -> Self {
        let cutoff = (sample.n() as f64).powf(1.0 - gamma.to_f64().unwrap_or(0.5));
        Self::with_cutoff(sample, cutoff)
    }

    /// Expands every node whose context count plus one exceeds `cutoff`.
    /// The cutoff affects speed and memory only, never results.
    pub fn with_cutoff(sample: &Sample, cutoff: f64) -> Self {
        let s = sample.symbols();
        let n = sample.n();
        let root_pos: Vec<u32> = (0..n as u32).collect();
        let succ = tally(root_pos.iter().map(|&p| s[p as usize + 1]));
        let mut nodes = vec![Node {
            depth: 0,
            letter: 0,
            pos: (0, n as u32),
            children: (0, 0),
            expanded: false,
            succ,
        }];
        let mut levels = vec![root_pos];
        let mut frontier = (0u32, 1u32);
        let mut depth = 0usize;
        let mut scratch: Vec<(Symbol, u32)> = Vec::new();
        loop {
            if depth >= n {
                break;
            }
            let mut next_pos: Vec<u32> = Vec::new();
            let first_child = nodes.len() as u32;
            for id in frontier.0..frontier.1 {
                let (a, b) = nodes[id as usize].pos;
                if ((b - a) as f64) + 1.0 <= cutoff {
                    continue;
                }
                let start = nodes.len() as u32;
                scratch.clear();
                scratch.extend(
                    levels[depth][a as usize..b as usize]
                        .iter()
                        .filter(|&&p| p as usize >= depth)
                        .map(|&p| (s[p as usize - depth], p)),
                );
                scratch.sort_by_key(|&(sym, _)| sym);
                let mut i = 0;
                while i < scratch.len() {
                    let sym = scratch[i].0;
                    let lo = next_pos.len() as u32;
                    while i < scratch.len() && scratch[i].0 == sym {
                        next_pos.push(scratch[i].1);
                        i += 1;
                    }
                    let hi = next_pos.len() as u32;
                    let succ = tally(
                        next_pos[lo as usize..hi as usize]
                            .iter()
                            .map(|&p| s[p as usize + 1]),
                    );
                    nodes.push(Node {
                        depth: depth as u32 + 1,
                        letter: sym,
                        pos: (lo, hi),
                        children: (0, 0),
                        expanded: false,
                        succ,
                    });
                }
                let end = nodes.len() as u32;
                let node = &mut nodes[id as usize];
                node.expanded = true;
                node.children = (start, end);
            }
            let last_child = nodes.len() as u32;
            if first_child == last_child {
                break;
            }
            levels.push(next_pos);
            frontier = (first_child, last_child);
            depth += 1;
        }
        Self {
            sample: sample.clone(),
            levels,
            nodes,
        }
    }

    pub fn sample(&self) -> &Sample {
        &self.sample
    }

    /// The sample-length parameter `n`.
    pub fn n(&self) -> usize {
        self.sample.n()
    }

    /// Deepest materialized trie level.
    pub fn built_depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub(crate) fn symbols(&self) -> &[Symbol] {
        self.sample.symbols()
    }

    pub(crate) fn root(&self) -> View {
        View::Node(ROOT)
    }

    pub(crate) fn locate(&self, w: &[Symbol]) -> Option<View> {
        let k = w.len();
        if k > self.n() {
            return None;
        }
        let mut id = ROOT;
        for j in 0..k {
            let node = &self.nodes[id as usize];
            if !node.expanded {
                let s = self.symbols();
                let pos: Vec<u32> = self.node_positions(id)
                    .iter()
                    .copied()
                    .filter(|&p| {
                        let p = p as usize;
                        p + 1 >= k && s[p + 1 - k..=p] == *w
                    })
                    .collect();
                return if pos.is_empty() {
                    None
                } else {
                    Some(View::Owned { depth: k, pos })
                };
            }
            let letter = w[k - 1 - j];
            let (a, b) = node.children;
            let kids = &self.nodes[a as usize..b as usize];
            match kids.binary_search_by_key(&letter, |c| c.letter) {
                Ok(off) => id = a + off as u32,
                Err(_) => return None,
            }
        }
        Some(View::Node(id))
    }

    fn node_positions(&self, id: u32) -> &[u32] {
        let node = &self.nodes[id as usize];
        &self.levels[node.depth as usize][node.pos.0 as usize..node.pos.1 as usize]
    }

    pub(crate) fn positions<'a>(&'a self, v: &'a View) -> &'a [u32] {
        match v {
            View::Node(id) => self.node_positions(*id),
            View::Owned { pos, .. } => pos,
        }
    }

    pub(crate) fn depth(&self, v: &View) -> usize {
        match v {
            View::Node(id) => self.nodes[*id as usize].depth as usize,
            View::Owned { depth, .. } => *depth,
        }
    }

    pub(crate) fn succ<'a>(&'a self, v: &'a View) -> Cow<'a, [(Symbol, u32)]> {
        match v {
            View::Node(id) => Cow::Borrowed(&self.nodes[*id as usize].succ),
            View::Owned { pos, .. } => {
                let s = self.symbols();
                Cow::Owned(tally(pos.iter().map(|&p| s[p as usize + 1])))
            }
        }
    }

    /// One-step-older extensions of `v`, ordered by the added symbol.
    pub(crate) fn children(&self, v: &View) -> Vec<(Symbol, View)> {
        if let View::Node(id) = v {
            let node = &self.nodes[*id as usize];
            if node.expanded {
                let (a, b) = node.children;
                return (a..b)
                    .map(|c| (self.nodes[c as usize].letter, View::Node(c)))
                    .collect();
            }
        }
        let d = self.depth(v);
        let s = self.symbols();
        let mut pairs: Vec<(Symbol, u32)> = self
            .positions(v)
            .iter()
            .filter(|&&p| p as usize >= d)
            .map(|&p| (s[p as usize - d], p))
            .collect();
        pairs.sort_by_key(|&(sym, _)| sym);
        let mut out = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let sym = pairs[i].0;
            let mut pos = Vec::new();
            while i < pairs.len() && pairs[i].0 == sym {
                pos.push(pairs[i].1);
                i += 1;
            }
            out.push((sym, View::Owned { depth: d + 1, pos }));
        }
        out
    }

    /// Context word of `v`, read off at any of its positions.
    pub(crate) fn word_of(&self, v: &View) -> Word {
        let d = self.depth(v);
        if d == 0 {
            return Word::empty();
        }
        let p = self.positions(v)[0] as usize;
        Word::from(&self.symbols()[p + 1 - d..=p])
    }

    /// Number of positions `t` in `[-n+|w|-1, -1]` at which `w` ends (`n` for the empty word).
    pub fn count_context(&self, w: &Word) -> usize {
        self.locate(w.letters())
            .map(|v| self.positions(&v).len())
            .unwrap_or(0)
    }

    /// Number of context occurrences of `w` followed by `x`.
    pub fn count_transition(&self, w: &Word, x: Symbol) -> usize {
        match self.locate(w.letters()) {
            None => 0,
            Some(v) => {
                let succ = self.succ(&v);
                succ.binary_search_by_key(&x, |&(s, _)| s)
                    .map(|i| succ[i].1 as usize)
                    .unwrap_or(0)
            }
        }
    }

    /// Successor symbols of `w` with their transition counts, ordered by symbol.
    pub fn successors(&self, w: &Word) -> Vec<(Symbol, usize)> {
        match self.locate(w.letters()) {
            None => Vec::new(),
            Some(v) => self
                .succ(&v)
                .iter()
                .map(|&(s, c)| (s, c as usize))
                .collect(),
        }
    }

    /// `p̂(x | w)`.
    pub fn empirical_cond_prob<F: Real>(&self, w: &Word, x: Symbol) -> Result<F> {
        let den = self.count_context(w);
        if den == 0 {
            return Err(Error::UndefinedConditional);
        }
        Ok(F::ratio(self.count_transition(w, x), den))
    }

    /// Number of positions `t` in `[-n+|v|-1, 0]` at which `v` ends.
    pub fn frequency(&self, v: &Word) -> usize {
        let s = self.symbols();
        if v.len() > s.len() {
            return 0;
        }
        let last = usize::from(v.matches_at(s, s.len() - 1));
        self.count_context(v) + last
    }

    /// `v` occurs strictly more than `n^{1-gamma}` times (last position included).
    pub fn is_frequent<F: Real>(&self, v: &Word, gamma: F) -> bool {
        F::from_count(self.frequency(v)) > F::from_count(self.n()).powf(F::one() - gamma)
    }

    /// All `(z, x)` with `|z| = i` and `z·w·x` frequent.
    pub fn frequent_extensions<F: Real>(&self, w: &Word, i: usize, gamma: F) -> Vec<Extension> {
        let thr = F::from_count(self.n()).powf(F::one() - gamma);
        let mut out = Vec::new();
        if i == 0 {
            return out;
        }
        let Some(start) = self.locate(w.letters()) else {
            return out;
        };
        self.walk_frequent(&start, thr, i, &mut |depth, view, x, c| {
            if depth == i {
                let zw = self.word_of(view);
                out.push(Extension {
                    z: Word::from(&zw.letters()[..i]),
                    x,
                    count: c,
                    context_count: self.positions(view).len(),
                });
            }
        });
        out
    }

    /// Depth-first walk over older extensions `z·w` of `start` (`1 <= |z| <= max_i`),
    /// reporting every successor `x` whose transition count exceeds `thr`.
    /// Subtrees whose context count does not exceed `thr` are pruned: none of
    /// their extensions can be frequent.
    pub(crate) fn walk_frequent<F: Real>(
        &self,
        start: &View,
        thr: F,
        max_i: usize,
        f: &mut dyn FnMut(usize, &View, Symbol, usize),
    ) {
        let mut stack: Vec<(usize, View)> = Vec::new();
        if F::from_count(self.positions(start).len()) > thr {
            for (_, child) in self.children(start).into_iter().rev() {
                stack.push((1, child));
            }
        }
        while let Some((i, view)) = stack.pop() {
            for &(x, c) in self.succ(&view).iter() {
                if F::from_count(c as usize) > thr {
                    f(i, &view, x, c as usize);
                }
            }
            if i < max_i && F::from_count(self.positions(&view).len()) > thr {
                for (_, child) in self.children(&view).into_iter().rev() {
                    stack.push((i + 1, child));
                }
            }
        }
    }

    /// Largest `L` such that some string of length `L` is frequent (0 if none).
    pub fn max_frequent_length<F: Real>(&self, gamma: F) -> usize {
        let thr = F::from_count(self.n()).powf(F::one() - gamma);
        let s = self.symbols();
        if !tally(s.iter().copied())
            .iter()
            .any(|&(_, c)| F::from_count(c as usize) > thr)
        {
            return 0;
        }
        let mut best = 1;
        self.walk_frequent(&self.root(), thr, usize::MAX, &mut |i, _, _, _| {
            best = best.max(i + 1);
        });
        best
    }
}
