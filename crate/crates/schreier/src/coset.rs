//! Coset enumeration and Schreier transversals.
//!
//! `todd_coxeter` runs a relator-scanning enumeration with immediate
//! coincidence processing; it either proves the subgroup has finite index
//! and returns the completed, validated permutation table, or gives up
//! when the coset cap is hit (an infinite-index subgroup can never
//! complete, so the cap is the only way out).
//!
//! Cosets are numbered breadth-first from the subgroup itself along
//! positively-oriented edges in generator order. That makes the numbering
//! reproducible and gives every coset a positive representative word; the
//! representatives form a prefix-closed (Schreier) transversal whose
//! members are the shortlex-least positive words for their cosets.

use crate::present::Presentation;
use crate::words::{Alphabet, Letter, Word};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CosetError {
    #[error("coset limit {limit} exceeded; the subgroup may have infinite index")]
    Overflow { limit: usize },
    #[error("subgroup generator {index} uses a generator outside the alphabet")]
    GeneratorOutOfRange { index: usize },
    #[error("malformed coset table: {0}")]
    InvalidTable(String),
}

/// Complete right-coset action table. Coset 0 is the subgroup itself;
/// `forward[g][c]` is the coset of (coset c)·g and `backward` its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    alphabet: Alphabet,
    forward: Vec<Vec<usize>>,
    backward: Vec<Vec<usize>>,
    index: usize,
}

impl CosetTable {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of cosets.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn apply(&self, coset: usize, letter: Letter) -> usize {
        if letter.inverse {
            self.backward[letter.gen.0][coset]
        } else {
            self.forward[letter.gen.0][coset]
        }
    }

    pub fn apply_word(&self, coset: usize, w: &Word) -> usize {
        w.letters().fold(coset, |c, l| self.apply(c, l))
    }

    /// Coset of a word, as acting on the subgroup's coset.
    pub fn coset_of(&self, w: &Word) -> usize {
        self.apply_word(0, w)
    }

    /// 1-based JSON rendering: `{"n": 2, "action": {"a": [2, 1], ...}}`.
    pub fn to_json_value(&self) -> serde_json::Value {
        let mut action = serde_json::Map::new();
        for g in self.alphabet.ids() {
            let fwd: Vec<usize> = self.forward[g.0].iter().map(|&c| c + 1).collect();
            let bwd: Vec<usize> = self.backward[g.0].iter().map(|&c| c + 1).collect();
            action.insert(self.alphabet.name(g).to_string(), serde_json::json!(fwd));
            action.insert(format!("{}^-1", self.alphabet.name(g)), serde_json::json!(bwd));
        }
        serde_json::json!({ "n": self.index, "action": action })
    }

    pub fn from_json(text: &str) -> Result<Self, CosetError> {
        #[derive(serde::Deserialize)]
        struct Raw {
            n: usize,
            action: HashMap<String, Vec<usize>>,
        }
        let raw: Raw =
            serde_json::from_str(text).map_err(|e| CosetError::InvalidTable(e.to_string()))?;
        let mut names: Vec<String> = raw
            .action
            .keys()
            .filter(|k| !k.ends_with("^-1"))
            .cloned()
            .collect();
        names.sort();
        let alphabet = Alphabet::new(names.clone())
            .map_err(|e| CosetError::InvalidTable(e.to_string()))?;
        let mut forward = Vec::new();
        let mut backward = Vec::new();
        for name in &names {
            let take = |key: &str| -> Result<Vec<usize>, CosetError> {
                let col = raw
                    .action
                    .get(key)
                    .ok_or_else(|| CosetError::InvalidTable(format!("missing column {key:?}")))?;
                if col.len() != raw.n {
                    return Err(CosetError::InvalidTable(format!(
                        "column {key:?} has {} entries, expected {}",
                        col.len(),
                        raw.n
                    )));
                }
                col.iter()
                    .map(|&v| {
                        if v >= 1 && v <= raw.n {
                            Ok(v - 1)
                        } else {
                            Err(CosetError::InvalidTable(format!(
                                "column {key:?} entry {v} outside 1..={}",
                                raw.n
                            )))
                        }
                    })
                    .collect()
            };
            forward.push(take(name)?);
            backward.push(take(&format!("{name}^-1"))?);
        }
        let table = CosetTable { alphabet, forward, backward, index: raw.n };
        table.check_permutations().map_err(CosetError::InvalidTable)?;
        Ok(table)
    }

    fn check_permutations(&self) -> Result<(), String> {
        for g in self.alphabet.ids() {
            let fwd = &self.forward[g.0];
            let bwd = &self.backward[g.0];
            for c in 0..self.index {
                if bwd[fwd[c]] != c || fwd[bwd[c]] != c {
                    return Err(format!(
                        "column {} is not a permutation with the stated inverse",
                        self.alphabet.name(g)
                    ));
                }
            }
        }
        Ok(())
    }
}

const fn col_of(letter: Letter) -> usize {
    2 * letter.gen.0 + letter.inverse as usize
}

/// In-progress enumeration: partial table plus a union-find over coset
/// names. Reads normalize through the union-find, so rows of dead cosets
/// may hold stale names without harm.
struct Enumerator {
    cols: usize,
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    limit: usize,
}

impl Enumerator {
    fn new(gens: usize, limit: usize) -> Self {
        let mut e = Enumerator { cols: 2 * gens, table: Vec::new(), parent: Vec::new(), limit };
        e.define().expect("limit is at least one coset");
        e
    }

    fn define(&mut self) -> Result<usize, CosetError> {
        if self.table.len() >= self.limit {
            return Err(CosetError::Overflow { limit: self.limit });
        }
        self.table.push(vec![None; self.cols]);
        self.parent.push(self.table.len() - 1);
        Ok(self.table.len() - 1)
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn read(&mut self, c: usize, col: usize) -> Option<usize> {
        let row = self.find(c);
        self.table[row][col].map(|v| self.find(v))
    }

    /// Record `a·col = b`, queueing any coincidence this reveals. Both
    /// `a` and `b` must be normalized.
    fn force(&mut self, a: usize, col: usize, b: usize, queue: &mut Vec<(usize, usize)>) {
        debug_assert!(self.parent[a] == a && self.parent[b] == b);
        match self.read(a, col) {
            Some(w) if w == b => {}
            Some(w) => queue.push((w, b)),
            None => {
                self.table[a][col] = Some(b);
                let inv = col ^ 1;
                match self.read(b, inv) {
                    Some(v) if v == a => {}
                    Some(v) => queue.push((v, a)),
                    None => self.table[b][inv] = Some(a),
                }
            }
        }
    }

    /// Merge every queued pair, folding the dead coset's row into the
    /// survivor (always the smaller name, so coset 0 never dies).
    fn process_coincidences(&mut self, queue: &mut Vec<(usize, usize)>) {
        while let Some((x, y)) = queue.pop() {
            let (x, y) = (self.find(x), self.find(y));
            if x == y {
                continue;
            }
            let (keep, drop) = (x.min(y), x.max(y));
            self.parent[drop] = keep;
            for col in 0..self.cols {
                if let Some(z) = self.table[drop][col] {
                    let z = self.find(z);
                    self.force(keep, col, z, queue);
                }
            }
        }
    }

    /// Close the relator loop at `c`, defining cosets as needed.
    fn scan(&mut self, c: usize, letters: &[Letter]) -> Result<(), CosetError> {
        let mut queue = Vec::new();
        let mut i = 0;
        let mut j = letters.len();
        let mut d = self.find(c);
        let mut e = d;
        loop {
            while i < j {
                d = self.find(d);
                match self.read(d, col_of(letters[i])) {
                    Some(x) => {
                        d = x;
                        i += 1;
                    }
                    None => break,
                }
            }
            while j > i {
                e = self.find(e);
                match self.read(e, col_of(letters[j - 1].inverted())) {
                    Some(x) => {
                        e = x;
                        j -= 1;
                    }
                    None => break,
                }
            }
            d = self.find(d);
            e = self.find(e);
            if i == j {
                if d != e {
                    queue.push((d, e));
                    self.process_coincidences(&mut queue);
                }
                return Ok(());
            }
            if i + 1 == j {
                self.force(d, col_of(letters[i]), e, &mut queue);
                self.process_coincidences(&mut queue);
                return Ok(());
            }
            let fresh = self.define()?;
            self.force(d, col_of(letters[i]), fresh, &mut queue);
            self.process_coincidences(&mut queue);
        }
    }
}

/// Enumerates the cosets of `< subgroup_gens >` in the group presented by
/// `p`. `max_cosets` caps how many cosets may ever be defined, counting
/// ones later merged away.
pub fn todd_coxeter(
    p: &Presentation,
    subgroup_gens: &[Word],
    max_cosets: usize,
) -> Result<CosetTable, CosetError> {
    for (index, w) in subgroup_gens.iter().enumerate() {
        if let Some(g) = w.max_generator() {
            if g.0 >= p.alphabet().len() {
                return Err(CosetError::GeneratorOutOfRange { index });
            }
        }
    }
    let relators: Vec<Vec<Letter>> =
        p.relators().iter().map(|r| r.letters().collect()).collect();
    let mut e = Enumerator::new(p.alphabet().len(), max_cosets.max(1));

    for w in subgroup_gens {
        let letters: Vec<Letter> = w.letters().collect();
        e.scan(0, &letters)?;
    }
    let mut c = 0;
    while c < e.table.len() {
        if e.find(c) != c {
            c += 1;
            continue;
        }
        for r in &relators {
            e.scan(c, r)?;
            if e.find(c) != c {
                break;
            }
        }
        if e.find(c) == c {
            for col in 0..e.cols {
                if e.read(c, col).is_none() {
                    let fresh = e.define()?;
                    let mut queue = Vec::new();
                    e.force(c, col, fresh, &mut queue);
                    e.process_coincidences(&mut queue);
                }
            }
        }
        c += 1;
    }

    // Renumber live cosets breadth-first along positive edges.
    let total = e.table.len();
    let mut number: Vec<Option<usize>> = vec![None; total];
    let mut order = Vec::new();
    number[0] = Some(0);
    order.push(0usize);
    let mut next = 0;
    while next < order.len() {
        let c = order[next];
        next += 1;
        for g in 0..p.alphabet().len() {
            let img = e.read(c, 2 * g).expect("table is complete");
            if number[img].is_none() {
                number[img] = Some(order.len());
                order.push(img);
            }
        }
    }
    let live = (0..total).filter(|&c| e.find(c) == c).count();
    assert_eq!(
        order.len(),
        live,
        "every live coset is positively reachable in a complete table"
    );

    let n = p.alphabet().len();
    let mut forward = vec![vec![0usize; live]; n];
    let mut backward = vec![vec![0usize; live]; n];
    for (new_c, &old_c) in order.iter().enumerate() {
        for g in 0..n {
            let fwd = e.read(old_c, 2 * g).expect("complete");
            let bwd = e.read(old_c, 2 * g + 1).expect("complete");
            forward[g][new_c] = number[fwd].expect("live image");
            backward[g][new_c] = number[bwd].expect("live image");
        }
    }
    let table =
        CosetTable { alphabet: p.alphabet().clone(), forward, backward, index: live };

    // Exhaustive validation: permutation columns, relator closure
    // everywhere, subgroup generators fixing coset 0.
    table
        .check_permutations()
        .unwrap_or_else(|msg| panic!("enumeration produced a bad table: {msg}"));
    for (c, r) in (0..table.index).flat_map(|c| p.relators().iter().map(move |r| (c, r))) {
        assert_eq!(table.apply_word(c, r), c, "relator open at coset {c}");
    }
    for w in subgroup_gens {
        assert_eq!(table.coset_of(w), 0, "subgroup generator moves coset 0");
    }
    Ok(table)
}

/// Prefix-closed coset representatives: the shortlex-least positive word
/// reaching each coset, found by the same breadth-first walk that
/// numbered the cosets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierTransversal {
    reps: Vec<Word>,
}

pub fn schreier_transversal(table: &CosetTable) -> SchreierTransversal {
    let mut reps: Vec<Option<Word>> = vec![None; table.index()];
    reps[0] = Some(Word::identity());
    // Coset numbering is the BFS discovery order, so a single ascending
    // pass sees every parent before its children.
    for c in 0..table.index() {
        for g in table.alphabet().ids() {
            let img = table.apply(c, Letter::new(g, false));
            if reps[img].is_none() {
                let rep = reps[c].clone().expect("parent already labelled");
                reps[img] = Some(rep.concat(&Word::generator(g)));
            }
        }
    }
    SchreierTransversal { reps: reps.into_iter().map(|r| r.expect("reachable")).collect() }
}

impl SchreierTransversal {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn representatives(&self) -> &[Word] {
        &self.reps
    }

    pub fn representative(&self, coset: usize) -> &Word {
        &self.reps[coset]
    }

    /// The representative of the coset a word lies in.
    pub fn representative_of(&self, table: &CosetTable, w: &Word) -> &Word {
        self.representative(table.coset_of(w))
    }
}

/// Checks that `words` is a Schreier transversal for the table: exactly
/// one word per coset, and closed under taking prefixes.
pub fn validate_transversal(table: &CosetTable, words: &[Word]) -> bool {
    if words.len() != table.index() {
        return false;
    }
    let mut hit = vec![false; table.index()];
    for w in words {
        let c = table.coset_of(w);
        if hit[c] {
            return false;
        }
        hit[c] = true;
    }
    let have: std::collections::HashSet<&Word> = words.iter().collect();
    for w in words {
        let mut prefix = Word::identity();
        for l in w.letters() {
            if !have.contains(&prefix) {
                return false;
            }
            prefix = prefix.concat(&Word::from_letters([l]));
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_presentation, parse_word};

    fn words(p: &Presentation, texts: &[&str]) -> Vec<Word> {
        texts.iter().map(|t| parse_word(t, p.alphabet()).unwrap()).collect()
    }

    fn reps_as_strings(table: &CosetTable) -> Vec<String> {
        schreier_transversal(table)
            .representatives()
            .iter()
            .map(|w| w.display(table.alphabet()).to_string())
            .collect()
    }

    #[test]
    fn whole_group_has_one_coset() {
        let p = parse_presentation("< a, b | [a^2, b^2] >").unwrap();
        let gens = words(&p, &["a", "b"]);
        let table = todd_coxeter(&p, &gens, 1000).unwrap();
        assert_eq!(table.index(), 1);
        assert_eq!(reps_as_strings(&table), vec!["1"]);
    }

    #[test]
    fn power_and_conjugates_in_commutator_quotient() {
        // The subgroup generated by a^m and every a^i b a^-i (0 <= i < m)
        // misses only the a-exponent mod m.
        let p = parse_presentation("< a, b | [a^2, b^2] >").unwrap();
        let table = todd_coxeter(&p, &words(&p, &["a^2", "b", "a*b*a^-1"]), 1000).unwrap();
        assert_eq!(table.index(), 2);
        assert_eq!(reps_as_strings(&table), vec!["1", "a"]);

        let p = parse_presentation("< a, b | [a^3, b^2] >").unwrap();
        let table =
            todd_coxeter(&p, &words(&p, &["a^3", "b", "a*b*a^-1", "a^2*b*a^-2"]), 1000).unwrap();
        assert_eq!(table.index(), 3);
        assert_eq!(reps_as_strings(&table), vec!["1", "a", "a^2"]);
    }

    #[test]
    fn free_group_index_two() {
        let p = parse_presentation("< a, b | >").unwrap();
        let table = todd_coxeter(&p, &words(&p, &["a", "b*a*b^-1", "b^2"]), 1000).unwrap();
        assert_eq!(table.index(), 2);
        // b swaps the cosets, a fixes both.
        assert_eq!(table.coset_of(&parse_word("b", p.alphabet()).unwrap()), 1);
        assert_eq!(table.coset_of(&parse_word("b^2", p.alphabet()).unwrap()), 0);
        assert_eq!(table.coset_of(&parse_word("a*b", p.alphabet()).unwrap()), 1);
    }

    #[test]
    fn coincidences_collapse_cyclic_subgroups() {
        let p = parse_presentation("< a | >").unwrap();
        // gcd(3, 5) = 1: everything collapses onto the subgroup.
        let table = todd_coxeter(&p, &words(&p, &["a^3", "a^5"]), 1000).unwrap();
        assert_eq!(table.index(), 1);
        // gcd(4, 6) = 2.
        let table = todd_coxeter(&p, &words(&p, &["a^4", "a^6"]), 1000).unwrap();
        assert_eq!(table.index(), 2);
        assert_eq!(reps_as_strings(&table), vec!["1", "a"]);
    }

    #[test]
    fn infinite_index_overflows() {
        let p = parse_presentation("< a, b | >").unwrap();
        let err = todd_coxeter(&p, &[], 50).unwrap_err();
        assert_eq!(err, CosetError::Overflow { limit: 50 });
    }

    #[test]
    fn subgroup_generator_range_is_checked() {
        let p = parse_presentation("< a | >").unwrap();
        let rogue = Word::generator(crate::words::GeneratorId(7));
        assert!(matches!(
            todd_coxeter(&p, &[rogue], 10),
            Err(CosetError::GeneratorOutOfRange { index: 0 })
        ));
    }

    #[test]
    fn torus_like_square_subgroup() {
        // Index-four subgroup < a^2, [a, b] > of < a, b | a^2 = b^2 >.
        let p = parse_presentation("< a, b | a^2*b^-2 >").unwrap();
        let table = todd_coxeter(&p, &words(&p, &["a^2", "[a, b]"]), 1000).unwrap();
        assert_eq!(table.index(), 4);
        assert_eq!(reps_as_strings(&table), vec!["1", "a", "b", "a*b"]);

        let t = schreier_transversal(&table);
        let aba = parse_word("a*b*a", p.alphabet()).unwrap();
        assert_eq!(
            t.representative_of(&table, &aba).display(p.alphabet()).to_string(),
            "b"
        );
    }

    #[test]
    fn tables_export_one_based_json() {
        let p = parse_presentation("< a | a^4 >").unwrap();
        let table = todd_coxeter(&p, &words(&p, &["a^2"]), 100).unwrap();
        let v = table.to_json_value();
        assert_eq!(v["n"], 2);
        assert_eq!(v["action"]["a"], serde_json::json!([2, 1]));
        assert_eq!(v["action"]["a^-1"], serde_json::json!([2, 1]));
        let back = CosetTable::from_json(&v.to_string()).unwrap();
        assert_eq!(back, table);
    }

    #[test]
    fn from_json_rejects_non_permutations() {
        let bad = r#"{"n": 2, "action": {"a": [1, 1], "a^-1": [1, 2]}}"#;
        assert!(matches!(CosetTable::from_json(bad), Err(CosetError::InvalidTable(_))));
        let bad = r#"{"n": 2, "action": {"a": [1, 3], "a^-1": [1, 2]}}"#;
        assert!(matches!(CosetTable::from_json(bad), Err(CosetError::InvalidTable(_))));
        let bad = r#"{"n": 2, "action": {"a": [1, 2]}}"#;
        assert!(matches!(CosetTable::from_json(bad), Err(CosetError::InvalidTable(_))));
    }

    #[test]
    fn transversal_validation() {
        let p = parse_presentation("< a, b | a^2*b^-2 >").unwrap();
        let table = todd_coxeter(&p, &words(&p, &["a^2", "[a, b]"]), 1000).unwrap();
        let good = words(&p, &["1", "a", "b", "a*b"]);
        assert!(validate_transversal(&table, &good));
        // b*a reaches the same coset as a*b here; still a transversal,
        // but not prefix-closed without b alone... it is: prefixes 1, b.
        let alt = words(&p, &["1", "a", "b", "b*a"]);
        assert!(validate_transversal(&table, &alt));
        // a^3 lands in coset 1 like a does: a coset is hit twice.
        assert!(!validate_transversal(&table, &words(&p, &["1", "a", "b", "a^3"])));
        // All four cosets hit, but the prefix a^2 of a^2*b is absent.
        assert!(!validate_transversal(&table, &words(&p, &["1", "a", "a^2*b", "a*b"])));
        // Wrong count.
        assert!(!validate_transversal(&table, &words(&p, &["1", "a", "b"])));
    }

    #[test]
    fn computed_transversals_validate() {
        let p = parse_presentation("< a, b | [a^3, b^2] >").unwrap();
        let table =
            todd_coxeter(&p, &words(&p, &["a^3", "b", "a*b*a^-1", "a^2*b*a^-2"]), 1000).unwrap();
        let t = schreier_transversal(&table);
        assert!(validate_transversal(&table, t.representatives()));
    }
}
