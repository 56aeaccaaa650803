//! Finite presentations `< generators | relators >`.
//!
//! Relators are cyclically reduced on construction and deduplicated up to
//! rotation and inversion; an explicitly trivial relator is an error, since
//! it is always a typo in this setting. The abelianization is computed from
//! the Smith normal form of the relator exponent-sum matrix.

use crate::snf::{smith_normal_form, IntMatrix};
use crate::words::{Alphabet, GeneratorId, Word};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("relator {index} is trivial after cyclic reduction")]
    EmptyRelator { index: usize },
    #[error("relator {index} uses a generator outside the alphabet")]
    GeneratorOutOfRange { index: usize },
    #[error("malformed presentation json: {0}")]
    Json(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    generators: Vec<String>,
    relators: Vec<String>,
}

impl Presentation {
    /// Cyclically reduces each relator and drops repeats (up to rotation
    /// and inversion, keeping the first occurrence).
    pub fn new(
        alphabet: Alphabet,
        relators: impl IntoIterator<Item = Word>,
    ) -> Result<Self, PresentationError> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for (index, r) in relators.into_iter().enumerate() {
            if let Some(g) = r.max_generator() {
                if g.0 >= alphabet.len() {
                    return Err(PresentationError::GeneratorOutOfRange { index });
                }
            }
            let (core, _) = r.cyclically_reduce();
            if core.is_empty() {
                return Err(PresentationError::EmptyRelator { index });
            }
            if seen.insert(core.canonical_cyclic()) {
                out.push(core);
            }
        }
        Ok(Presentation { alphabet, relators: out })
    }

    /// Free group on the alphabet.
    pub fn free(alphabet: Alphabet) -> Self {
        Presentation { alphabet, relators: Vec::new() }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    /// Rows are relators, columns generators, entries exponent sums.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.relators.len(), self.alphabet.len());
        for (i, r) in self.relators.iter().enumerate() {
            for g in self.alphabet.ids() {
                m.set(i, g.0, r.exponent_sum(g));
            }
        }
        m
    }

    /// Same generators and the same relators up to rotation and inversion.
    /// Weaker than `==`, which compares the stored words exactly.
    pub fn same_relator_classes(&self, other: &Presentation) -> bool {
        if self.alphabet.names() != other.alphabet.names() {
            return false;
        }
        let canon = |p: &Presentation| {
            let mut v: Vec<Word> = p.relators.iter().map(|r| r.canonical_cyclic()).collect();
            v.sort_by(|a, b| a.shortlex_cmp(b));
            v
        };
        canon(self) == canon(other)
    }

    pub fn abelianization(&self) -> AbelianInvariants {
        let snf = smith_normal_form(&self.exponent_matrix());
        let torsion: Vec<i64> = snf.diagonal.iter().copied().filter(|&d| d > 1).collect();
        AbelianInvariants { free_rank: self.alphabet.len() - snf.rank(), torsion }
    }

    pub fn from_json(text: &str) -> Result<Self, PresentationError> {
        let raw: PresentationJson =
            serde_json::from_str(text).map_err(|e| PresentationError::Json(e.to_string()))?;
        let alphabet = Alphabet::new(raw.generators)
            .map_err(|e| PresentationError::Json(e.to_string()))?;
        let mut relators = Vec::new();
        for (i, text) in raw.relators.iter().enumerate() {
            let w = crate::parse::parse_word(text, &alphabet)
                .map_err(|e| PresentationError::Json(format!("relator {i}: {e}")))?;
            relators.push(w);
        }
        Presentation::new(alphabet, relators)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let raw = PresentationJson {
            generators: self.alphabet.names().to_vec(),
            relators: self.relators.iter().map(|r| self.display_relator(r)).collect(),
        };
        serde_json::to_value(raw).expect("presentation serializes")
    }

    /// Renders a relator, folding `x^i y^j x^-i y^-j` into `[x^i, y^j]`.
    pub fn display_relator(&self, w: &Word) -> String {
        if let &[(x, i), (y, j), (x2, i2), (y2, j2)] = w.syllables() {
            if x == x2 && y == y2 && i == -i2 && j == -j2 {
                let show = |g: GeneratorId, e: i64| {
                    if e == 1 {
                        self.alphabet.name(g).to_string()
                    } else {
                        format!("{}^{}", self.alphabet.name(g), e)
                    }
                };
                return format!("[{}, {}]", show(x, i), show(y, j));
            }
        }
        w.display(&self.alphabet).to_string()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet.is_empty() {
            write!(f, "< | ")?;
        } else {
            write!(f, "< {} | ", self.alphabet.names().join(", "))?;
        }
        for (i, r) in self.relators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.display_relator(r))?;
        }
        if !self.relators.is_empty() {
            write!(f, " ")?;
        }
        write!(f, ">")
    }
}

/// Invariant factors of the abelianized group: `Z^free_rank` times one
/// `Z/d` per torsion entry, the entries forming a divisibility chain.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

impl AbelianInvariants {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group when finite.
    pub fn finite_order(&self) -> Option<i64> {
        if self.free_rank > 0 {
            None
        } else {
            Some(self.torsion.iter().product())
        }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" x "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_presentation, parse_word};

    #[test]
    fn relators_are_normalized_and_deduped() {
        let p = parse_presentation("< a, b | [a, b], b*a*b^-1*a^-1, a*[a,b]*a^-1 >").unwrap();
        assert_eq!(p.relator_count(), 1);

        let alpha = Alphabet::new(["a"]).unwrap();
        let out_of_range = Word::generator(GeneratorId(3));
        assert!(matches!(
            Presentation::new(alpha.clone(), vec![out_of_range]),
            Err(PresentationError::GeneratorOutOfRange { index: 0 })
        ));
        let trivial = parse_word("a*a^-1", &alpha).unwrap();
        assert!(matches!(
            Presentation::new(alpha, vec![trivial]),
            Err(PresentationError::EmptyRelator { index: 0 })
        ));
    }

    #[test]
    fn display_uses_commutator_sugar() {
        let p = parse_presentation("< a, b | a*b^2*a^-1*b^-2 >").unwrap();
        assert_eq!(p.to_string(), "< a, b | [a, b^2] >");
        let p = parse_presentation("< a, b | a^-2*b*a^2*b^-1 >").unwrap();
        assert_eq!(p.to_string(), "< a, b | [a^-2, b] >");
        // Not the pattern: exponents do not cancel pairwise.
        let p = parse_presentation("< a, b | a*b*a^-1*b^-2 >").unwrap();
        assert_eq!(p.to_string(), "< a, b | a*b*a^-1*b^-2 >");
        let p = parse_presentation("< a, b | >").unwrap();
        assert_eq!(p.to_string(), "< a, b | >");
    }

    #[test]
    fn display_parses_back(){
        for text in [
            "< a, b | [a^2, b^2] >",
            "< a, b | a^2*b^-3 >",
            "< a, b, c | [a, b], [b, c], a*b*c >",
            "< a | >",
        ] {
            let p = parse_presentation(text).unwrap();
            let q = parse_presentation(&p.to_string()).unwrap();
            assert_eq!(p, q);
            assert_eq!(p.to_string(), text);
        }
    }

    #[test]
    fn json_round_trip() {
        let p = parse_presentation("< a, b | [a^2, b^2], a^4 >").unwrap();
        let text = p.to_json_value().to_string();
        let q = Presentation::from_json(&text).unwrap();
        assert_eq!(p, q);
        assert!(Presentation::from_json("{\"generators\": [\"a\"]}").is_err());
        assert!(Presentation::from_json(
            "{\"generators\": [\"a\"], \"relators\": [\"b\"]}"
        )
        .is_err());
    }

    #[test]
    fn abelianizations() {
        // Commutator relators die in the abelianization.
        let p = parse_presentation("< a, b | [a^2, b^3] >").unwrap();
        assert_eq!(p.abelianization(), AbelianInvariants { free_rank: 2, torsion: vec![] });

        // One-relator torus-like group a^2 = b^3 abelianizes to Z.
        let p = parse_presentation("< a, b | a^2*b^-3 >").unwrap();
        let inv = p.abelianization();
        assert_eq!(inv, AbelianInvariants { free_rank: 1, torsion: vec![] });
        assert_eq!(inv.to_string(), "Z");

        // a^2 = b^2 leaves torsion behind.
        let p = parse_presentation("< a, b | a^2*b^-2 >").unwrap();
        let inv = p.abelianization();
        assert_eq!(inv, AbelianInvariants { free_rank: 1, torsion: vec![2] });
        assert_eq!(inv.to_string(), "Z x Z/2");

        let p = parse_presentation("< a, b | a^2, b^4, [a, b] >").unwrap();
        let inv = p.abelianization();
        assert_eq!(inv, AbelianInvariants { free_rank: 0, torsion: vec![2, 4] });
        assert_eq!(inv.finite_order(), Some(8));
        assert_eq!(inv.to_string(), "Z/2 x Z/4");

        let free = parse_presentation("< a, b, c | >").unwrap();
        assert_eq!(free.abelianization().free_rank, 3);

        let trivial = parse_presentation("< a | a >").unwrap();
        assert!(trivial.abelianization().is_trivial());
        assert_eq!(trivial.abelianization().to_string(), "1");
        assert_eq!(trivial.abelianization().finite_order(), Some(1));
    }
}
