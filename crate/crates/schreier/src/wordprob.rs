//! Word problems over labelled graphs: the group word problem when all
//! labels are 1, and the monoid word problem for positive words in
//! general.
//!
//! The group solver shuffles: a letter pair x^e ... x^-e cancels once
//! every generator between the two occurrences is adjacent to x, and a
//! word is trivial exactly when repeated cancellation empties it. The
//! monoid solver searches the closure of one word under the
//! length-preserving rewrites u v^m <-> v^m u, one per edge, and so
//! always terminates; a state cap turns runaway searches into an
//! explicit resource error rather than a wrong answer.

use crate::graph::LabelledDigraph;
use crate::words::{Letter, Word};
use std::collections::{HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordProblemError {
    #[error("edge {from} - {to} carries label {label}; the shuffle solver needs all labels 1")]
    LabelledEdge { from: String, to: String, label: i64 },
    #[error("monoid words must have strictly positive exponents")]
    NotPositive,
    #[error("word uses a generator outside the graph's vertex set")]
    GeneratorOutOfRange,
    #[error("state cap {cap} exceeded while closing under rewrites")]
    StateCapExceeded { cap: usize },
}

fn check_generators(g: &LabelledDigraph, w: &Word) -> Result<(), WordProblemError> {
    match w.max_generator() {
        Some(m) if m.0 >= g.vertex_count() => Err(WordProblemError::GeneratorOutOfRange),
        _ => Ok(()),
    }
}

/// Decides `w = 1` in the group of a plain graph, one vertex per
/// generator and one commutation relation per edge.
pub fn raag_is_identity(g: &LabelledDigraph, w: &Word) -> Result<bool, WordProblemError> {
    if let Some(e) = g.edges().iter().find(|e| e.label() != 1) {
        return Err(WordProblemError::LabelledEdge {
            from: g.vertices()[e.from].clone(),
            to: g.vertices()[e.to].clone(),
            label: e.label(),
        });
    }
    check_generators(g, w)?;
    let mut letters: Vec<Letter> = w.letters().collect();
    // Leftmost pair first; intervening letters must all commute with it.
    // A letter of the same generator blocks, since the graph has no loop.
    'outer: loop {
        for i in 0..letters.len() {
            let target = letters[i].inverted();
            for j in (i + 1)..letters.len() {
                if letters[j] == target
                    && letters[i + 1..j].iter().all(|l| g.adjacent(l.gen.0, letters[i].gen.0))
                {
                    letters.remove(j);
                    letters.remove(i);
                    continue 'outer;
                }
                if letters[j].gen == letters[i].gen {
                    break;
                }
                if !g.adjacent(letters[j].gen.0, letters[i].gen.0) {
                    break;
                }
            }
        }
        return Ok(letters.is_empty());
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MonoidOptions {
    /// Most states the closure may visit before giving up.
    pub state_cap: usize,
}

impl Default for MonoidOptions {
    fn default() -> Self {
        MonoidOptions { state_cap: 1_000_000 }
    }
}

fn positive_letters(w: &Word) -> Result<Vec<u32>, WordProblemError> {
    if w.syllables().iter().any(|&(_, e)| e < 0) {
        return Err(WordProblemError::NotPositive);
    }
    Ok(w.letters().map(|l| l.gen.0 as u32).collect())
}

/// Decides `u = v` in the monoid of the graph, where each edge (a, m, b)
/// permits a b^m <-> b^m a. Both words must be positive.
pub fn monoid_words_equal(
    g: &LabelledDigraph,
    u: &Word,
    v: &Word,
    options: MonoidOptions,
) -> Result<bool, WordProblemError> {
    check_generators(g, u)?;
    check_generators(g, v)?;
    let start = positive_letters(u)?;
    let goal = positive_letters(v)?;
    if start == goal {
        return Ok(true);
    }
    // Rewrites permute blocks, so length and letter counts are invariant.
    if start.len() != goal.len() {
        return Ok(false);
    }
    let count = |s: &[u32]| {
        let mut c = vec![0usize; g.vertex_count()];
        for &x in s {
            c[x as usize] += 1;
        }
        c
    };
    if count(&start) != count(&goal) {
        return Ok(false);
    }

    let moves: Vec<(u32, u32, usize)> = g
        .edges()
        .iter()
        .flat_map(|e| {
            let (a, b, m) = (e.from as u32, e.to as u32, e.label() as usize);
            if e.is_undirected() {
                vec![(a, b, 1), (b, a, 1)]
            } else {
                vec![(a, b, m)]
            }
        })
        .collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue: VecDeque<Vec<u32>> = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(cur) = queue.pop_front() {
        for &(a, b, m) in &moves {
            for p in 0..cur.len() {
                let mut next = None;
                // a b^m -> b^m a
                if p + m < cur.len()
                    && cur[p] == a
                    && cur[p + 1..=p + m].iter().all(|&x| x == b)
                {
                    let mut s = cur.clone();
                    s[p..=p + m].rotate_left(1);
                    next = Some(s);
                } else if p + m < cur.len()
                    && cur[p + m] == a
                    && cur[p..p + m].iter().all(|&x| x == b)
                {
                    // b^m a -> a b^m
                    let mut s = cur.clone();
                    s[p..=p + m].rotate_right(1);
                    next = Some(s);
                }
                if let Some(s) = next {
                    if s == goal {
                        return Ok(true);
                    }
                    if seen.contains(&s) {
                        continue;
                    }
                    if seen.len() >= options.state_cap {
                        return Err(WordProblemError::StateCapExceeded {
                            cap: options.state_cap,
                        });
                    }
                    seen.insert(s.clone());
                    queue.push_back(s);
                }
            }
        }
    }
    Ok(false)
}
