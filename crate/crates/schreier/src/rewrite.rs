//! Schreier generators and relator rewriting.
//!
//! Fix a complete coset table and a Schreier transversal T. Every pair of
//! a coset representative t and an ambient generator a yields the
//! subgroup element t a (rep of ta)^-1; it is trivial exactly when the
//! free reduction of that word is empty, i.e. when t a lands on another
//! representative. The nontrivial values generate the subgroup, and
//! rewriting a subgroup element over them is a single walk through the
//! table. Rewriting every conjugate t r t^-1 of every relator r gives a
//! full presentation of the subgroup on the Schreier generators.

use crate::coset::{schreier_transversal, todd_coxeter, CosetError, CosetTable, SchreierTransversal};
use crate::par::map_ordered;
use crate::present::Presentation;
use crate::words::{Alphabet, GeneratorId, Word};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RewriteError {
    #[error("word lies in coset {coset}, not in the subgroup")]
    NotInSubgroup { coset: usize },
}

/// One Schreier generator `t a (rep of ta)^-1`.
#[derive(Clone, Debug)]
pub struct SchreierGen {
    /// Coset of t (0-based; the symbol name uses 1-based numbering).
    pub coset: usize,
    /// The ambient generator a.
    pub gen: GeneratorId,
    /// `s_<coset+1>_<generator name>`.
    pub symbol: String,
    /// The element as a reduced ambient word; empty iff trivial.
    pub value: Word,
}

impl SchreierGen {
    pub fn is_trivial(&self) -> bool {
        self.value.is_empty()
    }
}

/// All Schreier generators of a table/transversal pair, with the
/// nontrivial ones indexed as an alphabet in (coset, generator) order.
#[derive(Clone, Debug)]
pub struct SchreierGens {
    items: Vec<SchreierGen>,
    slot: HashMap<(usize, usize), usize>,
    sub_ids: HashMap<(usize, usize), GeneratorId>,
    sub_alphabet: Alphabet,
}

pub fn schreier_generators(
    table: &CosetTable,
    transversal: &SchreierTransversal,
) -> SchreierGens {
    let alpha = table.alphabet();
    let mut items = Vec::new();
    let mut slot = HashMap::new();
    let mut sub_ids = HashMap::new();
    let mut names = Vec::new();
    for coset in 0..table.index() {
        for gen in alpha.ids() {
            let image = table.apply(coset, crate::words::Letter::new(gen, false));
            let value = transversal
                .representative(coset)
                .concat(&Word::generator(gen))
                .concat(&transversal.representative(image).inverse());
            let symbol = format!("s_{}_{}", coset + 1, alpha.name(gen));
            if !value.is_empty() {
                sub_ids.insert((coset, gen.0), GeneratorId(names.len()));
                names.push(symbol.clone());
            }
            slot.insert((coset, gen.0), items.len());
            items.push(SchreierGen { coset, gen, symbol, value });
        }
    }
    let sub_alphabet = Alphabet::new(names).expect("symbol names are valid and distinct");
    SchreierGens { items, slot, sub_ids, sub_alphabet }
}

impl SchreierGens {
    pub fn all(&self) -> &[SchreierGen] {
        &self.items
    }

    pub fn get(&self, coset: usize, gen: GeneratorId) -> &SchreierGen {
        &self.items[self.slot[&(coset, gen.0)]]
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &SchreierGen> {
        self.items.iter().filter(|s| !s.is_trivial())
    }

    /// Alphabet of nontrivial symbols, in (coset, generator) order.
    pub fn subgroup_alphabet(&self) -> &Alphabet {
        &self.sub_alphabet
    }

    /// Subgroup-generator id for a nontrivial pair.
    pub fn symbol_id(&self, coset: usize, gen: GeneratorId) -> Option<GeneratorId> {
        self.sub_ids.get(&(coset, gen.0)).copied()
    }

    /// Maps a word over the subgroup alphabet back to ambient letters.
    pub fn expand(&self, w: &Word) -> Word {
        let images: Vec<Word> = self.nontrivial().map(|s| s.value.clone()).collect();
        w.substitute(&images)
    }
}

/// The rewriting walk from a given starting coset. Positive letters read
/// the symbol at the coset they leave; negative letters read the inverse
/// of the symbol at the coset they land on. Trivial symbols vanish.
fn tau_from(table: &CosetTable, gens: &SchreierGens, start: usize, w: &Word) -> Word {
    let mut cur = start;
    let mut out: Vec<(GeneratorId, i64)> = Vec::new();
    for letter in w.letters() {
        let next = table.apply(cur, letter);
        let site = if letter.inverse { next } else { cur };
        if let Some(id) = gens.symbol_id(site, letter.gen) {
            out.push((id, if letter.inverse { -1 } else { 1 }));
        }
        cur = next;
    }
    debug_assert_eq!(cur, table.apply_word(start, w));
    Word::from_syllables(out)
}

/// Rewrites a subgroup element over the Schreier generators. The result
/// expands back to the same element of the ambient free group.
pub fn rewrite_tau(
    table: &CosetTable,
    gens: &SchreierGens,
    w: &Word,
) -> Result<Word, RewriteError> {
    let coset = table.coset_of(w);
    if coset != 0 {
        return Err(RewriteError::NotInSubgroup { coset });
    }
    Ok(tau_from(table, gens, 0, w))
}

/// The rewrite of one conjugated relator `t r t^-1`; `coset` names t.
#[derive(Clone, Debug)]
pub struct RelatorRewrite {
    pub coset: usize,
    pub relator: usize,
    pub image: Word,
}

#[derive(Clone, Copy, Debug)]
pub struct RewriteOptions {
    /// Cap on cosets ever defined during enumeration.
    pub max_cosets: usize,
    /// Rewrite relator conjugates on worker threads.
    pub parallel: bool,
}

impl Default for RewriteOptions {
    fn default() -> Self {
        RewriteOptions { max_cosets: 100_000, parallel: true }
    }
}

/// Everything the computation produced, from the coset table down to the
/// finished subgroup presentation.
#[derive(Clone, Debug)]
pub struct SubgroupPresentation {
    pub table: CosetTable,
    pub transversal: SchreierTransversal,
    pub gens: SchreierGens,
    /// One entry per (transversal element, relator) pair, in that order,
    /// before empty images and repeats are dropped.
    pub rewrites: Vec<RelatorRewrite>,
    pub presentation: Presentation,
}

impl SubgroupPresentation {
    pub fn index(&self) -> usize {
        self.table.index()
    }

    /// Every artifact of the run: coset action, transversal, symbols with
    /// their values, per-conjugate images, and the finished presentation.
    pub fn to_json_value(&self) -> serde_json::Value {
        let ambient = self.table.alphabet();
        let sub = self.presentation.alphabet();
        serde_json::json!({
            "index": self.index(),
            "coset_table": self.table.to_json_value(),
            "transversal": self.transversal.representatives().iter()
                .map(|w| w.display(ambient).to_string())
                .collect::<Vec<_>>(),
            "schreier_generators": self.gens.nontrivial()
                .map(|g| serde_json::json!({
                    "symbol": g.symbol,
                    "coset": g.coset + 1,
                    "generator": ambient.name(g.gen),
                    "value": g.value.display(ambient).to_string(),
                }))
                .collect::<Vec<_>>(),
            "conjugate_images": self.rewrites.iter()
                .map(|r| serde_json::json!({
                    "coset": r.coset + 1,
                    "relator": r.relator,
                    "image": r.image.display(sub).to_string(),
                }))
                .collect::<Vec<_>>(),
            "presentation": self.presentation.to_string(),
        })
    }
}

/// Runs the whole pipeline: enumerate cosets, choose the transversal,
/// form Schreier generators, rewrite all conjugated relators, and collect
/// the subgroup presentation.
pub fn subgroup_presentation(
    p: &Presentation,
    subgroup_gens: &[Word],
    options: RewriteOptions,
) -> Result<SubgroupPresentation, CosetError> {
    let table = todd_coxeter(p, subgroup_gens, options.max_cosets)?;
    let transversal = schreier_transversal(&table);
    let gens = schreier_generators(&table, &transversal);

    // Since every prefix of a representative is a representative, the
    // walks for t and t^-1 cross only trivial symbols: rewriting t r t^-1
    // is the walk of r itself started at t's coset.
    let pairs: Vec<(usize, usize)> = (0..table.index())
        .flat_map(|c| (0..p.relators().len()).map(move |i| (c, i)))
        .collect();
    let rewrites: Vec<RelatorRewrite> = map_ordered(options.parallel, pairs, |(coset, relator)| {
        let image = tau_from(&table, &gens, coset, &p.relators()[relator]);
        RelatorRewrite { coset, relator, image }
    });

    let relators: Vec<Word> = rewrites
        .iter()
        .filter(|r| !r.image.is_empty())
        .map(|r| r.image.clone())
        .collect();
    let presentation = Presentation::new(gens.subgroup_alphabet().clone(), relators)
        .expect("empty images are filtered before construction");
    Ok(SubgroupPresentation { table, transversal, gens, rewrites, presentation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_presentation, parse_word};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn words(p: &Presentation, texts: &[&str]) -> Vec<Word> {
        texts.iter().map(|t| parse_word(t, p.alphabet()).unwrap()).collect()
    }

    #[test]
    fn symbols_are_trivial_exactly_on_the_tree() {
        let p = parse_presentation("< a, b | a^2*b^-2 >").unwrap();
        let out =
            subgroup_presentation(&p, &words(&p, &["a^2", "[a, b]"]), RewriteOptions::default())
                .unwrap();
        let reps: std::collections::HashSet<&Word> =
            out.transversal.representatives().iter().collect();
        for s in out.gens.all() {
            let ta = out
                .transversal
                .representative(s.coset)
                .concat(&Word::generator(s.gen));
            assert_eq!(s.is_trivial(), reps.contains(&ta), "symbol {}", s.symbol);
            // Nontrivial values never collapse to a representative product.
            assert_eq!(s.value.is_empty(), s.is_trivial());
        }
    }

    #[test]
    fn expansion_inverts_rewriting() {
        let p = parse_presentation("< a, b | a^2*b^-2 >").unwrap();
        let out =
            subgroup_presentation(&p, &words(&p, &["a^2", "[a, b]"]), RewriteOptions::default())
                .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut checked = 0;
        while checked < 200 {
            let len = rng.gen_range(0..=12);
            let w = Word::from_syllables((0..len).map(|_| {
                (GeneratorId(rng.gen_range(0..2)), if rng.gen_bool(0.5) { 1i64 } else { -1 })
            }));
            if out.table.coset_of(&w) != 0 {
                continue;
            }
            let image = rewrite_tau(&out.table, &out.gens, &w).unwrap();
            assert_eq!(out.gens.expand(&image), w, "expansion mismatch");
            checked += 1;
        }
        // Words outside the subgroup are rejected with their coset.
        let a = parse_word("a", p.alphabet()).unwrap();
        assert_eq!(
            rewrite_tau(&out.table, &out.gens, &a),
            Err(RewriteError::NotInSubgroup { coset: 1 })
        );
    }

    #[test]
    fn commutator_power_subgroup_presentation() {
        let p = parse_presentation("< a, b | [a^2, b^2] >").unwrap();
        let out = subgroup_presentation(
            &p,
            &words(&p, &["a^2", "b", "a*b*a^-1"]),
            RewriteOptions::default(),
        )
        .unwrap();
        assert_eq!(out.index(), 2);
        assert_eq!(
            out.presentation.to_string(),
            "< s_1_b, s_2_a, s_2_b | [s_2_a, s_1_b^2], [s_2_a, s_2_b^2] >"
        );
        // Raw rewrites, one per (coset, relator) pair, in order.
        assert_eq!(out.rewrites.len(), 2);
        assert_eq!((out.rewrites[0].coset, out.rewrites[0].relator), (0, 0));
        assert_eq!((out.rewrites[1].coset, out.rewrites[1].relator), (1, 0));
    }

    #[test]
    fn free_subgroups_have_no_relators_and_tree_counts_hold() {
        let p = parse_presentation("< a, b | >").unwrap();
        let out = subgroup_presentation(
            &p,
            &words(&p, &["a", "b*a*b^-1", "b^2"]),
            RewriteOptions::default(),
        )
        .unwrap();
        assert_eq!(out.index(), 2);
        assert_eq!(out.presentation.relator_count(), 0);
        // index * rank - (index - 1) nontrivial symbols for a free group.
        assert_eq!(out.gens.nontrivial().count(), 2 * 2 - 1);
        assert_eq!(out.presentation.generator_count(), 3);
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let p = parse_presentation("< a, b | [a^3, b^3] >").unwrap();
        let gens = words(&p, &["a^3", "b", "a*b*a^-1", "a^2*b*a^-2"]);
        let seq = subgroup_presentation(
            &p,
            &gens,
            RewriteOptions { parallel: false, ..Default::default() },
        )
        .unwrap();
        let par = subgroup_presentation(
            &p,
            &gens,
            RewriteOptions { parallel: true, ..Default::default() },
        )
        .unwrap();
        assert_eq!(seq.presentation, par.presentation);
        assert_eq!(seq.table, par.table);
    }

    #[test]
    fn overflow_propagates() {
        let p = parse_presentation("< a, b | >").unwrap();
        let result = subgroup_presentation(
            &p,
            &[],
            RewriteOptions { max_cosets: 10, ..Default::default() },
        );
        assert!(matches!(result, Err(CosetError::Overflow { limit: 10 })));
    }
}
