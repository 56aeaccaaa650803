//! Tietze transformations: generator elimination, change of generating
//! set, and a bounded greedy simplifier.
//!
//! The simplifier repeats two moves, always preferring the first:
//!
//! 1. If some generator occurs in some relator in exactly one syllable
//!    with exponent +-1, solve that relator for the generator and
//!    eliminate it. Candidates are ranked by shortest relator, then
//!    lexicographically least relator, then highest generator index.
//! 2. If more than half of one relator (cyclically, up to inversion)
//!    appears as a cyclic subword of another, replace the overlap by the
//!    shorter complement.
//!
//! Both moves strictly decrease (generator count, relator count, total
//! relator length) in lexicographic order, so the process terminates; the
//! budget merely caps how long we are willing to wait. Empty and repeated
//! relators are swept out after every move, re-establishing the
//! `Presentation` invariants that the constructor enforces on input.

use crate::parse::{parse_word, ParseError};
use crate::present::{Presentation, PresentationError};
use crate::words::{Alphabet, GeneratorId, Letter, Word};
use serde::{Deserialize, Serialize};
use std::cmp::Reverse;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TietzeError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("generator {0:?} mapped more than once")]
    DuplicateImage(String),
    #[error("no relator uses {0:?} exactly once with exponent +-1")]
    NoDefiningRelator(String),
    #[error("image of {gen:?} does not parse: {source}")]
    BadImage {
        gen: String,
        #[source]
        source: ParseError,
    },
    #[error("substitution degenerates the presentation: {0}")]
    Degenerate(#[from] PresentationError),
}

/// One scripted step; scripts exist so a catalog entry can pin an exact
/// cleanup by hand if the greedy simplifier ever stops matching it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum TietzeMove {
    /// Eliminate a generator via rule 1.
    Eliminate { gen: String },
    /// Rewrite every relator under `gen -> image`; generators not named
    /// stay fixed. The map must be invertible for this to preserve the
    /// group, which the caller checks by round-tripping.
    Substitute { map: Vec<(String, String)> },
}

pub fn apply_script(p: &Presentation, script: &[TietzeMove]) -> Result<Presentation, TietzeError> {
    let mut current = p.clone();
    for mv in script {
        current = match mv {
            TietzeMove::Eliminate { gen } => eliminate(&current, gen)?,
            TietzeMove::Substitute { map } => {
                let pairs: Vec<(&str, &str)> =
                    map.iter().map(|(g, w)| (g.as_str(), w.as_str())).collect();
                substitute(&current, &pairs)?
            }
        };
    }
    Ok(current)
}

/// Rewrites all relators under the generator map, keeping the alphabet.
/// Generators not mentioned map to themselves.
pub fn substitute(p: &Presentation, map: &[(&str, &str)]) -> Result<Presentation, TietzeError> {
    let alpha = p.alphabet();
    let mut images: Vec<Word> = alpha.ids().map(Word::generator).collect();
    let mut seen = HashSet::new();
    for (gen, image) in map {
        let id = alpha
            .index_of(gen)
            .ok_or_else(|| TietzeError::UnknownGenerator(gen.to_string()))?;
        if !seen.insert(id) {
            return Err(TietzeError::DuplicateImage(gen.to_string()));
        }
        images[id.0] = parse_word(image, alpha)
            .map_err(|source| TietzeError::BadImage { gen: gen.to_string(), source })?;
    }
    let relators: Vec<Word> = p.relators().iter().map(|r| r.substitute(&images)).collect();
    Ok(Presentation::new(alpha.clone(), relators)?)
}

/// Working copy used between moves; relators may transiently be empty or
/// repeat until `sweep` runs.
struct State {
    alphabet: Alphabet,
    relators: Vec<Word>,
}

impl State {
    fn sweep(&mut self, log: &mut Vec<String>) {
        let mut seen = HashSet::new();
        let before = self.relators.len();
        self.relators.retain(|r| !r.is_empty() && seen.insert(r.canonical_cyclic()));
        let dropped = before - self.relators.len();
        if dropped > 0 {
            log.push(format!("dropped {dropped} trivial or repeated relator(s)"));
        }
    }
}

/// Candidate for rule 1: `relators[rel]` contains `g` in exactly one
/// syllable, with exponent +-1.
fn elimination_candidates(state: &State) -> Vec<(usize, GeneratorId)> {
    let mut out = Vec::new();
    for (rel, r) in state.relators.iter().enumerate() {
        for g in state.alphabet.ids() {
            let mut hits = 0usize;
            let mut unit = false;
            for &(h, e) in r.syllables() {
                if h == g {
                    hits += 1;
                    unit = e.abs() == 1;
                }
            }
            if hits == 1 && unit {
                out.push((rel, g));
            }
        }
    }
    out
}

fn pick_elimination(state: &State, candidates: &[(usize, GeneratorId)]) -> Option<(usize, GeneratorId)> {
    candidates
        .iter()
        .copied()
        .min_by(|&(r1, g1), &(r2, g2)| {
            let a = &state.relators[r1];
            let b = &state.relators[r2];
            a.len()
                .cmp(&b.len())
                .then_with(|| a.canonical_cyclic().shortlex_cmp(&b.canonical_cyclic()))
                .then_with(|| Reverse(g1.0).cmp(&Reverse(g2.0)))
        })
}

fn drop_generator_index(w: &Word, g: GeneratorId) -> Word {
    Word::from_syllables(w.syllables().iter().map(|&(h, e)| {
        debug_assert!(h != g);
        (GeneratorId(h.0 - usize::from(h.0 > g.0)), e)
    }))
}

/// Applies rule 1 for the chosen candidate. Consumes the defining relator.
fn apply_elimination(state: &State, rel: usize, g: GeneratorId, log: &mut Vec<String>) -> State {
    let r = &state.relators[rel];
    let k = r
        .syllables()
        .iter()
        .position(|&(h, _)| h == g)
        .expect("candidate relator contains the generator");
    let eps = r.syllables()[k].1;
    // r = u g^eps v cyclically, so g^eps = (v u)^-1.
    let u = Word::from_syllables(r.syllables()[..k].iter().copied());
    let v = Word::from_syllables(r.syllables()[k + 1..].iter().copied());
    let w = v.concat(&u);
    let solution = if eps == 1 { w.inverse() } else { w };
    log.push(format!(
        "eliminated {} = {}",
        state.alphabet.name(g),
        solution.display(&state.alphabet)
    ));

    let names: Vec<String> = state
        .alphabet
        .names()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != g.0)
        .map(|(_, n)| n.clone())
        .collect();
    let alphabet = Alphabet::new(names).expect("subset of a valid alphabet");
    let images: Vec<Word> = state
        .alphabet
        .ids()
        .map(|h| {
            if h == g {
                drop_generator_index(&solution, g)
            } else {
                Word::generator(GeneratorId(h.0 - usize::from(h.0 > g.0)))
            }
        })
        .collect();
    let relators: Vec<Word> = state
        .relators
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != rel)
        .map(|(_, r)| r.substitute(&images).cyclically_reduce().0)
        .collect();
    State { alphabet, relators }
}

/// Rule 2 search: a split `s ~ u v` (rotating s or its inverse) with
/// `2|u| > |s|` such that `u` occurs as a cyclic subword of `relators[i]`.
struct Overlap {
    target: usize,
    source: usize,
    replacement: Word,
}

fn find_overlap(state: &State) -> Option<Overlap> {
    let rels = &state.relators;
    for i in 0..rels.len() {
        let r: Vec<Letter> = rels[i].letters().collect();
        let n = r.len();
        if n == 0 {
            continue;
        }
        let doubled: Vec<Letter> = r.iter().chain(r.iter()).copied().collect();
        for j in 0..rels.len() {
            if i == j {
                continue;
            }
            let sl = rels[j].len();
            for ulen in (1..=sl.min(n)).rev() {
                if 2 * ulen <= sl {
                    break;
                }
                for flip in [false, true] {
                    let s: Vec<Letter> = if flip {
                        rels[j].inverse().letters().collect()
                    } else {
                        rels[j].letters().collect()
                    };
                    let s_doubled: Vec<Letter> = s.iter().chain(s.iter()).copied().collect();
                    for rot in 0..sl {
                        let u = &s_doubled[rot..rot + ulen];
                        let v = &s_doubled[rot + ulen..rot + sl];
                        for pos in 0..n {
                            if &doubled[pos..pos + ulen] == u {
                                // u v = 1, so u = v^-1: splice v^-1 in for u.
                                let v_inv: Vec<Letter> =
                                    v.iter().rev().map(|l| l.inverted()).collect();
                                let rest = &doubled[pos + ulen..pos + n];
                                let replacement = Word::from_letters(
                                    v_inv.into_iter().chain(rest.iter().copied()),
                                )
                                .cyclically_reduce()
                                .0;
                                if replacement.len() < n {
                                    return Some(Overlap { target: i, source: j, replacement });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct SimplifyOutcome {
    pub presentation: Presentation,
    /// False when the budget ran out with moves still available.
    pub reached_fixpoint: bool,
    pub steps: u64,
    pub log: Vec<String>,
}

/// Greedy bounded simplification. Each counted step is one elimination or
/// one overlap rewrite; the result is always a presentation of the same
/// group.
pub fn simplify(p: &Presentation, budget: u64) -> SimplifyOutcome {
    let mut state = State { alphabet: p.alphabet().clone(), relators: p.relators().to_vec() };
    let mut log = Vec::new();
    let mut steps = 0u64;
    let reached_fixpoint = loop {
        let candidates = elimination_candidates(&state);
        let next_elim = pick_elimination(&state, &candidates);
        if next_elim.is_none() && find_overlap(&state).is_none() {
            break true;
        }
        if steps >= budget {
            break false;
        }
        if let Some((rel, g)) = next_elim {
            state = apply_elimination(&state, rel, g, &mut log);
        } else if let Some(overlap) = find_overlap(&state) {
            log.push(format!(
                "shortened relator {} to {} using relator {}",
                overlap.target,
                overlap.replacement.display(&state.alphabet),
                overlap.source
            ));
            state.relators[overlap.target] = overlap.replacement;
        }
        state.sweep(&mut log);
        steps += 1;
    };
    let presentation = Presentation::new(state.alphabet, state.relators)
        .expect("sweep leaves no empty relators");
    SimplifyOutcome { presentation, reached_fixpoint, steps, log }
}

/// One application of rule 1 to the named generator, using its best
/// defining relator.
pub fn eliminate(p: &Presentation, gen: &str) -> Result<Presentation, TietzeError> {
    let g = p
        .alphabet()
        .index_of(gen)
        .ok_or_else(|| TietzeError::UnknownGenerator(gen.to_string()))?;
    let mut state = State { alphabet: p.alphabet().clone(), relators: p.relators().to_vec() };
    let candidates: Vec<(usize, GeneratorId)> = elimination_candidates(&state)
        .into_iter()
        .filter(|&(_, h)| h == g)
        .collect();
    let Some((rel, _)) = pick_elimination(&state, &candidates) else {
        return Err(TietzeError::NoDefiningRelator(gen.to_string()));
    };
    let mut log = Vec::new();
    state = apply_elimination(&state, rel, g, &mut log);
    state.sweep(&mut log);
    Ok(Presentation::new(state.alphabet, state.relators)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_presentation;
    use crate::present::AbelianInvariants;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(text: &str) -> Presentation {
        parse_presentation(text).unwrap()
    }

    #[test]
    fn eliminate_solves_and_substitutes() {
        // c = a*b, and the rewritten second relator is stored cyclically
        // reduced: a*b*a*b*a^-3 ~ b*a*b*a^-2.
        let out = eliminate(&p("< a, b, c | c*b^-1*a^-1, c^2*a^-3 >"), "c").unwrap();
        assert_eq!(out.to_string(), "< a, b | b*a*b*a^-2 >");

        let out = eliminate(&p("< a, b | b*a^-2 >"), "b").unwrap();
        assert_eq!(out.to_string(), "< a | >");

        assert!(matches!(
            eliminate(&p("< a, b | b^2*a >"), "b"),
            Err(TietzeError::NoDefiningRelator(_))
        ));
        assert!(matches!(
            eliminate(&p("< a | a^2 >"), "z"),
            Err(TietzeError::UnknownGenerator(_))
        ));
    }

    #[test]
    fn eliminate_drops_relators_that_become_trivial() {
        let out = eliminate(&p("< a, b | a*b^-1, a^2*b^-2 >"), "b").unwrap();
        assert_eq!(out.to_string(), "< a | >");
    }

    #[test]
    fn substitute_round_trips() {
        let original = p("< a, b, c | c*a*c^-1*a^-2, [b, c] >");
        let forward = substitute(&original, &[("a", "a*b"), ("c", "b*c")]).unwrap();
        let back = substitute(&forward, &[("a", "a*b^-1"), ("c", "b^-1*c")]).unwrap();
        // Cyclic reduction inside the constructor can rotate a relator, so
        // the round trip holds up to rotation, not on the nose.
        assert!(back.same_relator_classes(&original));
        assert_eq!(forward.abelianization(), original.abelianization());
    }

    #[test]
    fn substitute_rejects_bad_maps() {
        let base = p("< a | a^2 >");
        assert!(matches!(
            substitute(&base, &[("z", "a")]),
            Err(TietzeError::UnknownGenerator(_))
        ));
        assert!(matches!(
            substitute(&base, &[("a", "a"), ("a", "a^2")]),
            Err(TietzeError::DuplicateImage(_))
        ));
        assert!(matches!(
            substitute(&base, &[("a", "a*)")]),
            Err(TietzeError::BadImage { .. })
        ));
        // Collapsing a generator kills its relator: not a change of basis.
        assert!(matches!(
            substitute(&base, &[("a", "1")]),
            Err(TietzeError::Degenerate(_))
        ));
    }

    #[test]
    fn script_application() {
        let script = vec![
            TietzeMove::Substitute { map: vec![("b".into(), "b*a^2".into())] },
            TietzeMove::Eliminate { gen: "b".into() },
        ];
        let out = apply_script(&p("< a, b | b*a^-2 >"), &script).unwrap();
        assert_eq!(out.to_string(), "< a | >");
        // A script step that does not apply surfaces as an error.
        let bad = vec![TietzeMove::Eliminate { gen: "a".into() }];
        assert!(apply_script(&p("< a | a^2 >"), &bad).is_err());
    }

    #[test]
    fn elimination_prefers_highest_index_in_shortest_relator() {
        let out = simplify(&p("< a, b | a*b >"), 100);
        assert!(out.reached_fixpoint);
        assert_eq!(out.presentation.to_string(), "< a | >");
        assert_eq!(out.steps, 1);

        // Two-letter relator beats the longer one even though the longer
        // one also has removable generators.
        let out = simplify(&p("< a, b, c | a*b*c, b*c >"), 100);
        assert!(out.reached_fixpoint);
        assert_eq!(out.presentation.generator_count(), 1);
    }

    #[test]
    fn overlap_rule_computes_exponent_gcd() {
        let out = simplify(&p("< a | a^15, a^10 >"), 100);
        assert!(out.reached_fixpoint);
        assert_eq!(out.presentation.to_string(), "< a | a^5 >");
        assert_eq!(
            out.presentation.abelianization(),
            AbelianInvariants { free_rank: 0, torsion: vec![5] }
        );

        let out = simplify(&p("< a | a^5, a^3 >"), 100);
        assert!(out.reached_fixpoint);
        // gcd is 1: the group is trivial and everything is eliminated.
        assert_eq!(out.presentation.generator_count(), 0);
        assert_eq!(out.presentation.to_string(), "< | >");
    }

    #[test]
    fn commutator_presentations_are_fixpoints() {
        for text in [
            "< x, y, z | [x, z], [y, z] >",
            "< x, y | [x, y^3] >",
            "< x | >",
        ] {
            let before = p(text);
            let out = simplify(&before, 100);
            assert!(out.reached_fixpoint);
            assert_eq!(out.steps, 0);
            assert_eq!(out.presentation, before);
        }
    }

    #[test]
    fn chain_of_short_definitions_collapses() {
        let out = simplify(&p("< a, b, e | b*e^-1, [a, e] >"), 100);
        assert!(out.reached_fixpoint);
        assert_eq!(out.presentation.to_string(), "< a, b | [a, b] >");
    }

    #[test]
    fn budget_stops_early_and_flags_it() {
        let big = p("< a, b, c, d | a*b, b*c, c*d >");
        let out = simplify(&big, 1);
        assert!(!out.reached_fixpoint);
        assert_eq!(out.steps, 1);
        let done = simplify(&big, 10_000);
        assert!(done.reached_fixpoint);
        assert_eq!(done.presentation.generator_count(), 1);
        // Zero budget returns the input untouched.
        let untouched = simplify(&big, 0);
        assert!(!untouched.reached_fixpoint);
        assert_eq!(untouched.presentation, big);
    }

    #[test]
    fn simplify_preserves_abelianization() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let alpha = Alphabet::new(["a", "b", "c"]).unwrap();
        for _ in 0..200 {
            let mut relators = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                let len = rng.gen_range(1..=6);
                let w = Word::from_syllables((0..len).map(|_| {
                    (GeneratorId(rng.gen_range(0..3)), if rng.gen_bool(0.5) { 1 } else { -1 })
                }));
                if !w.cyclically_reduce().0.is_empty() {
                    relators.push(w);
                }
            }
            if relators.is_empty() {
                continue;
            }
            let before = Presentation::new(alpha.clone(), relators).unwrap();
            let out = simplify(&before, 10_000);
            assert!(out.reached_fixpoint);
            assert_eq!(
                out.presentation.abelianization(),
                before.abelianization(),
                "abelianization changed for {before}"
            );
            assert!(out.presentation.generator_count() <= before.generator_count());
        }
    }
}
