//! Deciding whether two presentations agree after cleanup and renaming.
//!
//! Both sides are simplified, cheap invariants are compared, and then a
//! backtracking search looks for a generator bijection carrying one
//! relator multiset onto the other (relators compared up to rotation and
//! inversion). A positive answer is a proof of isomorphism. A negative
//! answer is only conclusive when an invariant differs; otherwise the
//! groups may still be isomorphic and the evidence says so.

use crate::present::Presentation;
use crate::tietze::simplify;
use crate::words::{GeneratorId, Word};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct MatchReport {
    pub matched: bool,
    /// Generator bijection (left name, right name) proving the match.
    pub relabeling: Option<Vec<(String, String)>>,
    /// Human-readable trail of what was compared.
    pub evidence: Vec<String>,
}

/// Per-generator fingerprint invariant under relabeling: for every
/// relator, its length together with how the generator sits inside it.
fn profile(p: &Presentation, g: GeneratorId) -> Vec<(usize, u64, usize)> {
    let mut v: Vec<(usize, u64, usize)> = p
        .relators()
        .iter()
        .map(|r| {
            let syllables = r.syllables().iter().filter(|&&(h, _)| h == g).count();
            let weight: u64 =
                r.syllables().iter().filter(|&&(h, _)| h == g).map(|&(_, e)| e.unsigned_abs()).sum();
            (r.len(), weight, syllables)
        })
        .collect();
    v.sort_unstable();
    v
}

fn canonical_multiset(p: &Presentation) -> Vec<Word> {
    let mut v: Vec<Word> = p.relators().iter().map(|r| r.canonical_cyclic()).collect();
    v.sort_by(|a, b| a.shortlex_cmp(b));
    v
}

/// Does the bijection `assign` (left gen -> right gen) carry the left
/// relator classes onto the right ones?
fn relabeling_works(left: &Presentation, right: &Presentation, assign: &[usize]) -> bool {
    let images: Vec<Word> = assign.iter().map(|&j| Word::generator(GeneratorId(j))).collect();
    let mut mapped: Vec<Word> = left
        .relators()
        .iter()
        .map(|r| r.substitute(&images).canonical_cyclic())
        .collect();
    mapped.sort_by(|a, b| a.shortlex_cmp(b));
    mapped == canonical_multiset(right)
}

fn search(
    order: &[usize],
    candidates: &[Vec<usize>],
    left: &Presentation,
    right: &Presentation,
    assign: &mut Vec<usize>,
    used: &mut Vec<bool>,
    depth: usize,
) -> bool {
    if depth == order.len() {
        return relabeling_works(left, right, assign);
    }
    let g = order[depth];
    for &h in &candidates[g] {
        if used[h] {
            continue;
        }
        assign[g] = h;
        used[h] = true;
        if search(order, candidates, left, right, assign, used, depth + 1) {
            return true;
        }
        used[h] = false;
    }
    false
}

/// Simplifies both sides (within `budget` moves each) and looks for a
/// generator relabeling identifying them.
pub fn presentations_match(p: &Presentation, q: &Presentation, budget: u64) -> MatchReport {
    let mut evidence = Vec::new();
    let left = simplify(p, budget);
    let right = simplify(q, budget);
    for (side, out) in [("left", &left), ("right", &right)] {
        evidence.push(format!(
            "{side}: {} generators, {} relators after {} simplification step(s){}",
            out.presentation.generator_count(),
            out.presentation.relator_count(),
            out.steps,
            if out.reached_fixpoint { "" } else { " (budget exhausted)" },
        ));
    }
    let left = left.presentation;
    let right = right.presentation;

    if left.generator_count() != right.generator_count() {
        evidence.push(format!(
            "generator counts differ: {} vs {}",
            left.generator_count(),
            right.generator_count()
        ));
        return MatchReport { matched: false, relabeling: None, evidence };
    }
    if left.relator_count() != right.relator_count() {
        evidence.push(format!(
            "relator counts differ: {} vs {}",
            left.relator_count(),
            right.relator_count()
        ));
        return MatchReport { matched: false, relabeling: None, evidence };
    }
    let (ab_left, ab_right) = (left.abelianization(), right.abelianization());
    if ab_left != ab_right {
        evidence.push(format!("abelianizations differ: {ab_left} vs {ab_right}"));
        return MatchReport { matched: false, relabeling: None, evidence };
    }
    evidence.push(format!("abelianizations agree: {ab_left}"));

    let n = left.generator_count();
    let right_profiles: Vec<_> = (0..n).map(|j| profile(&right, GeneratorId(j))).collect();
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let pi = profile(&left, GeneratorId(i));
            (0..n).filter(|&j| right_profiles[j] == pi).collect()
        })
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        evidence.push("a generator's relator profile has no counterpart".to_string());
        return MatchReport { matched: false, relabeling: None, evidence };
    }

    // Most-constrained generator first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| candidates[i].len());
    let mut assign = vec![0usize; n];
    let mut used = vec![false; n];
    if search(&order, &candidates, &left, &right, &mut assign, &mut used, 0) {
        let relabeling: Vec<(String, String)> = (0..n)
            .map(|i| {
                (
                    left.alphabet().names()[i].clone(),
                    right.alphabet().names()[assign[i]].clone(),
                )
            })
            .collect();
        evidence.push(format!(
            "relator classes correspond under {}",
            relabeling
                .iter()
                .map(|(a, b)| format!("{a} -> {b}"))
                .collect::<Vec<_>>()
                .join(", ")
        ));
        return MatchReport { matched: true, relabeling: Some(relabeling), evidence };
    }
    evidence.push(
        "no relator-preserving relabeling found; the comparison is inconclusive".to_string(),
    );
    MatchReport { matched: false, relabeling: None, evidence }
}
